//! Randomized invariant checks over the public API.
//!
//! Each property draws base parameters, coefficient profiles, and fiber
//! points from ranges where the family is valid by construction, then
//! asserts an identity that should hold for every member — not just for
//! the handful of frozen configurations in the unit tests.

use proptest::prelude::*;
use std::ops::RangeInclusive;

use cotlift_core::curvature::{blocks_vs_direct_residual, curvature_frame};
use cotlift_core::einstein::ode_residual;
use cotlift_core::lift::forms::{closedness_residual, pattern_residual};
use cotlift_core::lift::nijenhuis::{bracket_value, integrability_residual, pattern_cross_residual};
use cotlift_core::lift::{
    coefficient_condition_residual, complex_structure_residual, hermitian_residual,
    inverse_block_residual, split_lower, split_upper, two_term_lower, two_term_upper,
    validate_family,
};
use cotlift_core::connection::{
    explicit_vs_generic_residual, metric_compatibility_residual, product_rule_residual,
    qps_generic, torsion_residual,
};
use cotlift_core::quad::integrate;
use cotlift_core::ricci::{horizontal_g_coefficient, ricci_split, vertical_g_coefficient};
use cotlift_core::{B1Curve, BaseSpace, Curve, Family, GeometryError, SolvedB1};

/// Whether the antidiagonal scale is pinned to the canonical value or
/// drawn from a detuning range.
#[derive(Clone, Copy, Debug)]
enum Scale {
    Canonical,
    Any,
}

/// Whether the second metric profile follows the closed-form balance or
/// is offset away from it.
#[derive(Clone, Copy, Debug)]
enum Mode {
    Balanced,
    OffsetMu,
}

#[derive(Debug)]
struct Setup {
    base: BaseSpace,
    fam: Family,
    x: Vec<f64>,
    p: Vec<f64>,
}

/// A valid family with a valid fiber point. The profile ranges keep
/// every constraint satisfied for any energy the sampled points can
/// reach: `lambda` has positive coefficients, the twisting profile is
/// nonnegative, and the covector norm is bounded away from zero.
fn arb_setup(dims: RangeInclusive<usize>, scale: Scale, mode: Mode) -> impl Strategy<Value = Setup> {
    (dims, 0.6..2.4f64)
        .prop_flat_map(move |(n, c)| {
            (
                Just(n),
                Just(c),
                prop::collection::vec(-0.8..0.8f64, n),
                prop::collection::vec(-1.2..1.2f64, n),
                0.5..2.0f64,
                0.0..0.4f64,
                0.0..0.6f64,
                0.0..0.15f64,
                0.6..1.8f64,
                0.05..0.6f64,
            )
        })
        .prop_filter_map(
            "covector bounded away from the zero section",
            move |(n, c, x, p, l0, l1, b0, bs, af, dm)| {
                if p.iter().map(|v| v * v).sum::<f64>().sqrt() <= 0.35 {
                    return None;
                }
                let base = BaseSpace::new(n, c).expect("base parameters are in range");
                let lambda = Curve::Poly(vec![l0, l1]);
                let b1 = B1Curve::Explicit(Curve::Poly(vec![b0, bs]));
                let fam = match mode {
                    Mode::Balanced => Family::balanced(lambda, b1),
                    // lambda' = l1, so this mu misses the balance by dm > 0.
                    Mode::OffsetMu => Family::with_mu(lambda, Curve::constant(l1 + dm), b1),
                };
                let fam = match scale {
                    Scale::Canonical => fam,
                    Scale::Any => fam.with_a_factor(af),
                };
                Some(Setup { base, fam, x, p })
            },
        )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The structure squares to minus the identity for every scale
    /// factor, not only the canonical one.
    #[test]
    fn squares_to_minus_identity_at_any_scale(s in arb_setup(2..=4, Scale::Any, Mode::Balanced)) {
        prop_assert!(complex_structure_residual(&s.base, &s.fam, &s.x, &s.p) < 1e-10);
    }

    /// The antidiagonal coefficient pair always satisfies the two
    /// algebraic inversion conditions it was solved from.
    #[test]
    fn coefficient_conditions_always_hold(s in arb_setup(2..=4, Scale::Any, Mode::Balanced)) {
        prop_assert!(coefficient_condition_residual(&s.base, &s.fam, &s.x, &s.p) < 1e-10);
    }

    /// Compatibility of metric and structure is pure algebra: it
    /// survives both detuning the scale and unbalancing `mu`.
    #[test]
    fn hermitian_at_any_scale_and_mu(s in arb_setup(2..=4, Scale::Any, Mode::OffsetMu)) {
        prop_assert!(hermitian_residual(&s.base, &s.fam, &s.x, &s.p) < 1e-10);
    }

    /// The closed-form inverse blocks invert the metric blocks for every
    /// valid profile choice.
    #[test]
    fn closed_form_inverse_blocks(s in arb_setup(2..=4, Scale::Any, Mode::OffsetMu)) {
        prop_assert!(inverse_block_residual(&s.base, &s.fam, &s.x, &s.p) < 1e-9);
    }

    /// In balanced mode the fundamental two-form is closed at every
    /// point, whatever the twisting profile and scale.
    #[test]
    fn balanced_form_is_closed(s in arb_setup(2..=4, Scale::Any, Mode::Balanced)) {
        prop_assert!(closedness_residual(&s.base, &s.fam, &s.x, &s.p) < 1e-9);
    }

    /// Off balance, the honest exterior derivative still equals the
    /// closed-form deviation pattern exactly.
    #[test]
    fn form_deviation_matches_pattern(s in arb_setup(2..=4, Scale::Any, Mode::OffsetMu)) {
        prop_assert!(pattern_residual(&s.base, &s.fam, &s.x, &s.p) < 1e-9);
    }

    /// The torsion tensor is antisymmetric in its two vector arguments
    /// by construction; the honest bracket evaluation must reflect that.
    #[test]
    fn nijenhuis_value_is_antisymmetric(
        s in arb_setup(2..=4, Scale::Any, Mode::Balanced),
        xa_raw in prop::collection::vec(-1.0..1.0f64, 8),
        ya_raw in prop::collection::vec(-1.0..1.0f64, 8),
    ) {
        let dim = 2 * s.base.dim();
        let xa = &xa_raw[..dim];
        let ya = &ya_raw[..dim];
        let xy = bracket_value(&s.base, &s.fam, &s.x, &s.p, xa, ya);
        let yx = bracket_value(&s.base, &s.fam, &s.x, &s.p, ya, xa);
        for k in 0..dim {
            prop_assert!((xy[k] + yx[k]).abs() < 1e-10);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// At the canonical scale the structure is integrable for every
    /// twisting profile in the valid band.
    #[test]
    fn canonical_scale_is_integrable(s in arb_setup(2..=3, Scale::Canonical, Mode::Balanced)) {
        prop_assert!(integrability_residual(&s.base, &s.fam, &s.x, &s.p) < 1e-8);
    }

    /// The honest bracket evaluation agrees with the closed obstruction
    /// pattern at every scale, so the integrability verdict never
    /// depends on which path computes it.
    #[test]
    fn bracket_agrees_with_closed_pattern(s in arb_setup(2..=3, Scale::Any, Mode::Balanced)) {
        prop_assert!(pattern_cross_residual(&s.base, &s.fam, &s.x, &s.p) < 1e-8);
    }

    /// The generic connection coefficients satisfy all three defining
    /// properties of the Levi-Civita connection, and the explicit
    /// display reproduces them in the canonical balanced mode.
    #[test]
    fn connection_is_levi_civita(s in arb_setup(2..=3, Scale::Canonical, Mode::Balanced)) {
        let coeffs = qps_generic(&s.base, &s.fam, &s.x, &s.p);
        prop_assert!(metric_compatibility_residual(&s.base, &s.fam, &s.x, &s.p, &coeffs) < 1e-8);
        prop_assert!(torsion_residual(&s.base, &coeffs, &s.x, &s.p) < 1e-8);
        prop_assert!(product_rule_residual(&s.base, &s.fam, &s.x, &s.p, &coeffs) < 1e-8);
        prop_assert!(explicit_vs_generic_residual(&s.base, &s.fam, &s.x, &s.p) < 1e-8);
    }

    /// A family whose twisting profile dips below the admissible lower
    /// bound is rejected with that constraint named.
    #[test]
    fn validator_names_the_violated_bound(
        beta in -2.0..-0.9f64,
        c in 0.6..1.2f64,
        l0 in 0.5..2.0f64,
    ) {
        let base = BaseSpace::new(2, c).expect("base parameters are in range");
        let fam = Family::balanced(
            Curve::constant(l0),
            B1Curve::Explicit(Curve::constant(beta)),
        );
        let err = validate_family(&base, &fam, &[1.0]).expect_err("profile is out of band");
        let named = matches!(
            err,
            GeometryError::ConstraintViolated { name: "b1_lower_bound", .. }
        );
        prop_assert!(named, "unexpected rejection: {err}");
    }

    /// Adaptive integration refines monotonically: tightening the
    /// tolerance moves the value by no more than the looser budget, and
    /// the result matches the closed antiderivative.
    #[test]
    fn quadrature_refines_to_the_closed_form(
        bounds in (0.2..4.0f64, 0.2..4.0f64),
        amp in 0.5..2.0f64,
    ) {
        let (a, b) = if bounds.0 <= bounds.1 { bounds } else { (bounds.1, bounds.0) };
        let f = |s: f64| amp * s.powi(4) + s.sin();
        let exact = amp * (b.powi(5) - a.powi(5)) / 5.0 + (a.cos() - b.cos());
        let loose = integrate(&f, a, b, 1e-9).expect("integrand is smooth");
        let tight = integrate(&f, a, b, 1e-12).expect("integrand is smooth");
        prop_assert!((loose - tight).abs() < 2e-9);
        prop_assert!((tight - exact).abs() < 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// The two curvature routes (closed six-block display vs direct
    /// coordinate evaluation) agree, and the frame table is
    /// antisymmetric in its argument pair.
    #[test]
    fn curvature_routes_agree(s in arb_setup(2..=3, Scale::Canonical, Mode::Balanced)) {
        prop_assert!(blocks_vs_direct_residual(&s.base, &s.fam, &s.x, &s.p) < 1e-8);
        let kf = curvature_frame(&s.base, &s.fam, &s.x, &s.p);
        let dim = kf.len();
        for w in 0..dim {
            for z in 0..dim {
                for u in 0..dim {
                    for v in 0..dim {
                        prop_assert!((kf[w][z][u][v] + kf[w][z][v][u]).abs() < 1e-11);
                    }
                }
            }
        }
    }

    /// Both honest Ricci blocks split into the closed-form scalar
    /// coefficients of the metric channel.
    #[test]
    fn ricci_split_matches_closed_scalars(s in arb_setup(2..=3, Scale::Canonical, Mode::Balanced)) {
        let t = s.base.energy(&s.x, &s.p);
        let ((u1, _), (u2, _)) = ricci_split(&s.base, &s.fam, &s.x, &s.p);
        let h = horizontal_g_coefficient(&s.base, &s.fam, t);
        let v = vertical_g_coefficient(&s.base, &s.fam, t);
        prop_assert!((u1 - h).abs() < 1e-7 * (1.0 + h.abs()));
        prop_assert!((u2 - v).abs() < 1e-7 * (1.0 + v.abs()));
    }

    /// Splitting a two-term combination recovers the original scalars,
    /// in both index positions.
    #[test]
    fn two_term_round_trip(
        (n, c) in (2usize..=4, 0.6..2.4f64),
        u in 0.4..2.0f64,
        v in -0.5..0.5f64,
        raw in prop::collection::vec(-1.0..1.0f64, 8),
    ) {
        let base = BaseSpace::new(n, c).expect("base parameters are in range");
        let x: Vec<f64> = raw[..n].iter().map(|r| 0.8 * r).collect();
        let p: Vec<f64> = raw[4..4 + n].iter().map(|r| 1.2 * r).collect();
        prop_assume!(p.iter().map(|w| w * w).sum::<f64>().sqrt() > 0.35);
        let g = base.metric(&x);
        let lower = two_term_lower(&g, &p, u, v);
        let (ur, vr) = split_lower(&base, &x, &p, &lower);
        prop_assert!((ur - u).abs() < 1e-9 && (vr - v).abs() < 1e-9);
        let ginv = base.metric_inv(&x);
        let up = base.p_raised(&x, &p);
        let upper = two_term_upper(&ginv, &up, u, v);
        let (ur, vr) = split_upper(&base, &x, &p, &upper);
        prop_assert!((ur - u).abs() < 1e-9 && (vr - v).abs() < 1e-9);
    }

    /// The quadrature-backed twisting profile satisfies its defining
    /// first-order equation for random coefficients, targets, and
    /// integration constants.
    #[test]
    fn solved_profile_satisfies_its_equation(
        n in 2usize..=3,
        c in 0.8..2.0f64,
        l0 in 0.6..1.5f64,
        l1 in 0.0..0.3f64,
        c0 in 0.0..0.4f64,
        ef in -0.8..0.4f64,
        t in 0.4..3.0f64,
    ) {
        let base = BaseSpace::new(n, c).expect("base parameters are in range");
        let lambda = Curve::Poly(vec![l0, l1]);
        let solved = SolvedB1::new(lambda.clone(), n, c, ef, c0);
        let fam = Family::balanced(lambda, B1Curve::Solved(solved));
        prop_assert!(ode_residual(&base, &fam, ef, t) < 1e-7);
    }
}
