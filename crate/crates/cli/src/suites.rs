//! Check suites.
//!
//! Each suite certifies one family of structural claims at the sampled
//! fiber points and appends typed records. A check is either an upper
//! bound (a residual that must stay below tolerance) or a lower bound (an
//! effect whose observed size must exceed tolerance to count as
//! detected). Checks that are undefined for the configured family are
//! recorded as skipped with the reason.

use serde::Serialize;

use cotlift_core::{connection, curvature, einstein, lift};

use crate::config::Model;
use crate::sample::SamplePoint;

/// Canonical suite order.
pub const SUITE_NAMES: [&str; 9] = [
    "complex",
    "integrability",
    "hermitian",
    "kahler",
    "connection",
    "curvature",
    "einstein",
    "nonconstancy",
    "symmetry",
];

/// Direction of a check's tolerance comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    /// Pass when the observed value stays strictly below tolerance.
    Upper,
    /// Pass when the observed value strictly exceeds tolerance.
    Lower,
}

/// Outcome of one check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

/// One executed (or skipped) check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub suite: String,
    pub name: String,
    /// Plain-language statement of the property being certified.
    pub claim: String,
    pub bound: Bound,
    /// Number of sampled fiber points the observation ranges over.
    pub points: usize,
    /// Worst observed value across the sampled points.
    pub observed: f64,
    pub tol: f64,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

/// Static definition of a check: suite, name, bound direction, default
/// tolerance, and the claim it certifies.
pub struct CheckDef {
    pub suite: &'static str,
    pub name: &'static str,
    pub bound: Bound,
    pub default_tol: f64,
    pub claim: &'static str,
}

/// Registry of every check the harness can run.
pub const CHECK_DEFS: &[CheckDef] = &[
    CheckDef {
        suite: "complex",
        name: "square_identity",
        bound: Bound::Upper,
        default_tol: 1e-10,
        claim: "the lifted structure J squares to minus the identity at every sampled fiber point",
    },
    CheckDef {
        suite: "complex",
        name: "coefficient_conditions",
        bound: Bound::Upper,
        default_tol: 1e-12,
        claim: "the block coefficients of J satisfy the algebraic inverse-pair relations",
    },
    CheckDef {
        suite: "integrability",
        name: "nijenhuis_bracket",
        bound: Bound::Upper,
        default_tol: 1e-7,
        claim: "the Nijenhuis tensor of J vanishes, computed from coordinate Lie brackets",
    },
    CheckDef {
        suite: "integrability",
        name: "scaling_obstruction",
        bound: Bound::Lower,
        default_tol: 1e-4,
        claim: "an antidiagonal scale away from the integrable point leaves a detectable Nijenhuis component",
    },
    CheckDef {
        suite: "integrability",
        name: "dual_path_agreement",
        bound: Bound::Upper,
        default_tol: 1e-7,
        claim: "the closed Nijenhuis pattern agrees with the honest bracket evaluation",
    },
    CheckDef {
        suite: "hermitian",
        name: "hermitian_identity",
        bound: Bound::Upper,
        default_tol: 1e-10,
        claim: "G(JX, JY) = G(X, Y) at every sampled fiber point",
    },
    CheckDef {
        suite: "hermitian",
        name: "inverse_blocks",
        bound: Bound::Upper,
        default_tol: 1e-10,
        claim: "the assembled inverse blocks invert the metric blocks",
    },
    CheckDef {
        suite: "kahler",
        name: "fundamental_form_closed",
        bound: Bound::Upper,
        default_tol: 1e-8,
        claim: "the fundamental two-form of (G, J) is closed",
    },
    CheckDef {
        suite: "kahler",
        name: "form_pattern_agreement",
        bound: Bound::Upper,
        default_tol: 1e-7,
        claim: "the numeric exterior derivative matches its two-term closed pattern",
    },
    CheckDef {
        suite: "connection",
        name: "metric_compatibility",
        bound: Bound::Upper,
        default_tol: 1e-8,
        claim: "the constructed connection annihilates the metric",
    },
    CheckDef {
        suite: "connection",
        name: "torsion_free",
        bound: Bound::Upper,
        default_tol: 1e-8,
        claim: "the constructed connection is torsion-free against the frame brackets",
    },
    CheckDef {
        suite: "connection",
        name: "product_rule",
        bound: Bound::Upper,
        default_tol: 1e-8,
        claim: "frame derivatives of metric pairings obey the covariant product rule",
    },
    CheckDef {
        suite: "connection",
        name: "explicit_display",
        bound: Bound::Upper,
        default_tol: 1e-8,
        claim: "the closed coefficient display agrees with the generic evaluation",
    },
    CheckDef {
        suite: "curvature",
        name: "route_agreement",
        bound: Bound::Upper,
        default_tol: 1e-6,
        claim: "frame-block curvature agrees with the coordinate-route curvature",
    },
    CheckDef {
        suite: "curvature",
        name: "argument_antisymmetry",
        bound: Bound::Upper,
        default_tol: 1e-12,
        claim: "the curvature table is antisymmetric in its argument pair",
    },
    CheckDef {
        suite: "einstein",
        name: "ricci_proportionality",
        bound: Bound::Upper,
        default_tol: 1e-6,
        claim: "the Ricci tensor equals the target factor times the metric at every sampled fiber point",
    },
    CheckDef {
        suite: "einstein",
        name: "factor_consistency",
        bound: Bound::Upper,
        default_tol: 1e-8,
        claim: "all four split Ricci coefficients reproduce the same target factor",
    },
    CheckDef {
        suite: "einstein",
        name: "profile_ode",
        bound: Bound::Upper,
        default_tol: 1e-8,
        claim: "the twisting profile satisfies its defining first-order equation on the energy grid",
    },
    CheckDef {
        suite: "nonconstancy",
        name: "sectional_spread",
        bound: Bound::Lower,
        default_tol: 1e-3,
        claim: "the holomorphic sectional curvature varies across sampled planes",
    },
    CheckDef {
        suite: "nonconstancy",
        name: "sectional_homogeneity",
        bound: Bound::Upper,
        default_tol: 1e-8,
        claim: "the holomorphic sectional curvature is invariant under scaling the plane vector",
    },
    CheckDef {
        suite: "symmetry",
        name: "curvature_gradient",
        bound: Bound::Lower,
        default_tol: 1e-4,
        claim: "the covariant derivative of the curvature has a nonzero component at some sampled fiber point",
    },
    CheckDef {
        suite: "symmetry",
        name: "bianchi_second",
        bound: Bound::Upper,
        default_tol: 1e-5,
        claim: "the cyclic covariant-derivative identity holds for the frame curvature",
    },
];

/// Whether `name` is a registered check.
pub fn known_check(name: &str) -> bool {
    CHECK_DEFS.iter().any(|d| d.name == name)
}

fn def(name: &str) -> &'static CheckDef {
    CHECK_DEFS
        .iter()
        .find(|d| d.name == name)
        .expect("registered check")
}

/// Resolved tolerances: overrides consulted first, then defaults.
pub struct Tolerances {
    overrides: std::collections::BTreeMap<String, f64>,
}

impl Tolerances {
    pub fn new(overrides: std::collections::BTreeMap<String, f64>) -> Self {
        Tolerances { overrides }
    }

    pub fn get(&self, name: &str) -> f64 {
        self.overrides
            .get(name)
            .copied()
            .unwrap_or_else(|| def(name).default_tol)
    }
}

/// NaN-preserving running maximum over sampled points.
fn max_over<F: Fn(&SamplePoint) -> f64>(pts: &[SamplePoint], f: F) -> f64 {
    let mut worst = 0.0_f64;
    for pt in pts {
        let v = f(pt);
        if v.is_nan() {
            return f64::NAN;
        }
        worst = worst.max(v.abs());
    }
    worst
}

fn finish(name: &str, points: usize, observed: f64, tol: f64) -> CheckRecord {
    let d = def(name);
    let ok = match d.bound {
        Bound::Upper => observed < tol,
        Bound::Lower => observed > tol,
    };
    CheckRecord {
        suite: d.suite.to_string(),
        name: d.name.to_string(),
        claim: d.claim.to_string(),
        bound: d.bound,
        points,
        observed,
        tol,
        status: if ok { Status::Pass } else { Status::Fail },
        reason: None,
    }
}

fn skip(name: &str, tol: f64, reason: &str) -> CheckRecord {
    let d = def(name);
    CheckRecord {
        suite: d.suite.to_string(),
        name: d.name.to_string(),
        claim: d.claim.to_string(),
        bound: d.bound,
        points: 0,
        observed: 0.0,
        tol,
        status: Status::Skip,
        reason: Some(reason.to_string()),
    }
}

fn suite_complex(m: &Model, pts: &[SamplePoint], tols: &Tolerances, out: &mut Vec<CheckRecord>) {
    let v = max_over(pts, |pt| {
        lift::complex_structure_residual(&m.base, &m.family, &pt.x, &pt.p)
    });
    out.push(finish("square_identity", pts.len(), v, tols.get("square_identity")));
    let v = max_over(pts, |pt| {
        lift::coefficient_condition_residual(&m.base, &m.family, &pt.x, &pt.p)
    });
    out.push(finish(
        "coefficient_conditions",
        pts.len(),
        v,
        tols.get("coefficient_conditions"),
    ));
}

fn suite_integrability(
    m: &Model,
    pts: &[SamplePoint],
    tols: &Tolerances,
    out: &mut Vec<CheckRecord>,
) {
    let nij = max_over(pts, |pt| {
        lift::nijenhuis::integrability_residual(&m.base, &m.family, &pt.x, &pt.p)
    });
    if m.canonical() {
        out.push(finish(
            "nijenhuis_bracket",
            pts.len(),
            nij,
            tols.get("nijenhuis_bracket"),
        ));
        out.push(skip(
            "scaling_obstruction",
            tols.get("scaling_obstruction"),
            "the antidiagonal scale sits at the integrable point",
        ));
    } else {
        out.push(skip(
            "nijenhuis_bracket",
            tols.get("nijenhuis_bracket"),
            "the antidiagonal scale is away from the integrable point",
        ));
        out.push(finish(
            "scaling_obstruction",
            pts.len(),
            nij,
            tols.get("scaling_obstruction"),
        ));
    }
    let v = max_over(pts, |pt| {
        lift::nijenhuis::pattern_cross_residual(&m.base, &m.family, &pt.x, &pt.p)
    });
    out.push(finish(
        "dual_path_agreement",
        pts.len(),
        v,
        tols.get("dual_path_agreement"),
    ));
}

fn suite_hermitian(m: &Model, pts: &[SamplePoint], tols: &Tolerances, out: &mut Vec<CheckRecord>) {
    let v = max_over(pts, |pt| {
        lift::hermitian_residual(&m.base, &m.family, &pt.x, &pt.p)
    });
    out.push(finish(
        "hermitian_identity",
        pts.len(),
        v,
        tols.get("hermitian_identity"),
    ));
    let v = max_over(pts, |pt| {
        lift::inverse_block_residual(&m.base, &m.family, &pt.x, &pt.p)
    });
    out.push(finish("inverse_blocks", pts.len(), v, tols.get("inverse_blocks")));
}

fn suite_kahler(m: &Model, pts: &[SamplePoint], tols: &Tolerances, out: &mut Vec<CheckRecord>) {
    let v = max_over(pts, |pt| {
        lift::forms::closedness_residual(&m.base, &m.family, &pt.x, &pt.p)
    });
    out.push(finish(
        "fundamental_form_closed",
        pts.len(),
        v,
        tols.get("fundamental_form_closed"),
    ));
    let v = max_over(pts, |pt| {
        lift::forms::pattern_residual(&m.base, &m.family, &pt.x, &pt.p)
    });
    out.push(finish(
        "form_pattern_agreement",
        pts.len(),
        v,
        tols.get("form_pattern_agreement"),
    ));
}

fn suite_connection(m: &Model, pts: &[SamplePoint], tols: &Tolerances, out: &mut Vec<CheckRecord>) {
    let v = max_over(pts, |pt| {
        let coeffs = connection::qps_generic(&m.base, &m.family, &pt.x, &pt.p);
        connection::metric_compatibility_residual(&m.base, &m.family, &pt.x, &pt.p, &coeffs)
    });
    out.push(finish(
        "metric_compatibility",
        pts.len(),
        v,
        tols.get("metric_compatibility"),
    ));
    let v = max_over(pts, |pt| {
        let coeffs = connection::qps_generic(&m.base, &m.family, &pt.x, &pt.p);
        connection::torsion_residual(&m.base, &coeffs, &pt.x, &pt.p)
    });
    out.push(finish("torsion_free", pts.len(), v, tols.get("torsion_free")));
    let v = max_over(pts, |pt| {
        let coeffs = connection::qps_generic(&m.base, &m.family, &pt.x, &pt.p);
        connection::product_rule_residual(&m.base, &m.family, &pt.x, &pt.p, &coeffs)
    });
    out.push(finish("product_rule", pts.len(), v, tols.get("product_rule")));
    if m.canonical() && m.balanced() {
        let v = max_over(pts, |pt| {
            connection::explicit_vs_generic_residual(&m.base, &m.family, &pt.x, &pt.p)
        });
        out.push(finish(
            "explicit_display",
            pts.len(),
            v,
            tols.get("explicit_display"),
        ));
    } else {
        out.push(skip(
            "explicit_display",
            tols.get("explicit_display"),
            "the closed display holds for the canonical balanced family only",
        ));
    }
}

fn suite_curvature(m: &Model, pts: &[SamplePoint], tols: &Tolerances, out: &mut Vec<CheckRecord>) {
    let v = max_over(pts, |pt| {
        curvature::blocks_vs_direct_residual(&m.base, &m.family, &pt.x, &pt.p)
    });
    out.push(finish(
        "route_agreement",
        pts.len(),
        v,
        tols.get("route_agreement"),
    ));
    let v = max_over(pts, |pt| {
        let kf = curvature::curvature_frame(&m.base, &m.family, &pt.x, &pt.p);
        let dim = kf.len();
        let mut worst = 0.0_f64;
        for w in 0..dim {
            for z in 0..dim {
                for u in 0..dim {
                    for vv in 0..dim {
                        worst = worst.max((kf[w][z][u][vv] + kf[w][z][vv][u]).abs());
                    }
                }
            }
        }
        worst
    });
    out.push(finish(
        "argument_antisymmetry",
        pts.len(),
        v,
        tols.get("argument_antisymmetry"),
    ));
}

fn suite_einstein(
    m: &Model,
    pts: &[SamplePoint],
    t_grid: &[f64],
    tols: &Tolerances,
    out: &mut Vec<CheckRecord>,
) {
    let skip_reason = if m.ef.is_none() {
        Some("requires a solved twisting profile with a target factor")
    } else if !m.balanced() {
        Some("requires the balanced family mode")
    } else {
        None
    };
    if let Some(reason) = skip_reason {
        out.push(skip("ricci_proportionality", tols.get("ricci_proportionality"), reason));
        out.push(skip("factor_consistency", tols.get("factor_consistency"), reason));
        out.push(skip("profile_ode", tols.get("profile_ode"), reason));
        return;
    }
    let ef = m.ef.expect("checked above");
    let v = max_over(pts, |pt| {
        einstein::einstein_residual(&m.base, &m.family, ef, &pt.x, &pt.p)
    });
    out.push(finish(
        "ricci_proportionality",
        pts.len(),
        v,
        tols.get("ricci_proportionality"),
    ));
    let v = max_over(pts, |pt| {
        einstein::ef_consistency_residual(&m.base, &m.family, ef, &pt.x, &pt.p)
    });
    out.push(finish(
        "factor_consistency",
        pts.len(),
        v,
        tols.get("factor_consistency"),
    ));
    let mut worst = 0.0_f64;
    for &t in t_grid {
        let r = einstein::ode_residual(&m.base, &m.family, ef, t);
        if r.is_nan() {
            worst = f64::NAN;
            break;
        }
        worst = worst.max(r.abs());
    }
    let d = def("profile_ode");
    let tol = tols.get("profile_ode");
    let ok = worst < tol;
    out.push(CheckRecord {
        suite: d.suite.to_string(),
        name: d.name.to_string(),
        claim: d.claim.to_string(),
        bound: d.bound,
        points: t_grid.len(),
        observed: worst,
        tol,
        status: if ok { Status::Pass } else { Status::Fail },
        reason: None,
    });
}

fn suite_nonconstancy(
    m: &Model,
    pts: &[SamplePoint],
    tols: &Tolerances,
    out: &mut Vec<CheckRecord>,
) {
    if !(m.canonical() && m.balanced()) {
        let reason = "the sectional claims concern the canonical balanced family";
        out.push(skip("sectional_spread", tols.get("sectional_spread"), reason));
        out.push(skip(
            "sectional_homogeneity",
            tols.get("sectional_homogeneity"),
            reason,
        ));
        return;
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut homog = 0.0_f64;
    let mut bad = false;
    for pt in pts {
        for d in &pt.dirs {
            let h = curvature::holomorphic_sectional(&m.base, &m.family, &pt.x, &pt.p, d);
            if h.is_nan() {
                bad = true;
                break;
            }
            lo = lo.min(h);
            hi = hi.max(h);
            let scaled: Vec<f64> = d.iter().map(|v| 2.5 * v).collect();
            let hs = curvature::holomorphic_sectional(&m.base, &m.family, &pt.x, &pt.p, &scaled);
            homog = homog.max((hs - h).abs());
        }
        if bad {
            break;
        }
    }
    let spread = if bad { f64::NAN } else { hi - lo };
    out.push(finish(
        "sectional_spread",
        pts.len(),
        spread,
        tols.get("sectional_spread"),
    ));
    out.push(finish(
        "sectional_homogeneity",
        pts.len(),
        if bad { f64::NAN } else { homog },
        tols.get("sectional_homogeneity"),
    ));
}

fn suite_symmetry(m: &Model, pts: &[SamplePoint], tols: &Tolerances, out: &mut Vec<CheckRecord>) {
    let v = max_over(pts, |pt| {
        curvature::nabla_curvature_max(&m.base, &m.family, &pt.x, &pt.p)
    });
    out.push(finish(
        "curvature_gradient",
        pts.len(),
        v,
        tols.get("curvature_gradient"),
    ));
    let v = max_over(pts, |pt| {
        curvature::second_bianchi_residual(&m.base, &m.family, &pt.x, &pt.p)
    });
    out.push(finish("bianchi_second", pts.len(), v, tols.get("bianchi_second")));
}

/// Run the requested suites in canonical order and return their records.
pub fn run_suites(
    m: &Model,
    pts: &[SamplePoint],
    t_grid: &[f64],
    which: &[String],
    tols: &Tolerances,
) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for suite in SUITE_NAMES {
        if !which.iter().any(|w| w == suite) {
            continue;
        }
        match suite {
            "complex" => suite_complex(m, pts, tols, &mut out),
            "integrability" => suite_integrability(m, pts, tols, &mut out),
            "hermitian" => suite_hermitian(m, pts, tols, &mut out),
            "kahler" => suite_kahler(m, pts, tols, &mut out),
            "connection" => suite_connection(m, pts, tols, &mut out),
            "curvature" => suite_curvature(m, pts, tols, &mut out),
            "einstein" => suite_einstein(m, pts, t_grid, tols, &mut out),
            "nonconstancy" => suite_nonconstancy(m, pts, tols, &mut out),
            "symmetry" => suite_symmetry(m, pts, tols, &mut out),
            _ => unreachable!("suite list is canonical"),
        }
    }
    out
}
