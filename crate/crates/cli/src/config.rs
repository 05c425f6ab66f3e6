//! Run configuration: schema, parsing, validation, and model assembly.
//!
//! A run is fully determined by the configuration document plus the
//! sampling seed; every field has a deterministic default so the echoed
//! configuration in a report reproduces the run exactly.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use cotlift_core::curves::{B1Curve, Curve};
use cotlift_core::error::GeometryError;
use cotlift_core::lift::validate_family;
use cotlift_core::{BaseSpace, Family, SolvedB1};

use crate::suites::{known_check, SUITE_NAMES};

/// Errors that abort a run before any check executes (process exit 2).
#[derive(Debug)]
pub enum ConfigError {
    /// The configuration file could not be read.
    Io(String),
    /// The configuration file is not valid structured text.
    Parse(String),
    /// A field value is outside its accepted range or names an unknown item.
    Invalid(String),
    /// A pointwise admissibility constraint on the family fails somewhere
    /// on the requested energy range.
    Constraint { name: String, t: f64, value: f64 },
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Io(m) => write!(f, "cannot read config: {m}"),
            ConfigError::Parse(m) => write!(f, "cannot parse config: {m}"),
            ConfigError::Invalid(m) => write!(f, "invalid config: {m}"),
            ConfigError::Constraint { name, t, value } => write!(
                f,
                "family constraint `{name}` violated at t = {t} (value {value:.6e})"
            ),
        }
    }
}

impl std::error::Error for ConfigError {}

/// One scalar profile of the energy density `t`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveSpec {
    /// A constant value.
    Constant(f64),
    /// Polynomial coefficients in ascending powers of `t`.
    Poly(Vec<f64>),
    /// Sum of real-power terms `coeff * t^power`.
    PowerSum(Vec<PowerTerm>),
    /// Exponential `amp * exp(rate * t)`.
    Exp { amp: f64, rate: f64 },
}

/// One `coeff * t^power` term of a power-sum profile.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerTerm {
    pub coeff: f64,
    pub power: f64,
}

impl CurveSpec {
    pub fn to_curve(&self) -> Curve {
        match self {
            CurveSpec::Constant(v) => Curve::constant(*v),
            CurveSpec::Poly(cs) => Curve::Poly(cs.clone()),
            CurveSpec::PowerSum(terms) => {
                Curve::PowerSum(terms.iter().map(|t| (t.coeff, t.power)).collect())
            }
            CurveSpec::Exp { amp, rate } => Curve::Exp {
                amp: *amp,
                rate: *rate,
            },
        }
    }
}

/// The twisting profile: either an explicit curve or the quadrature-backed
/// profile determined by an integration constant and a target factor.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum B1Spec {
    /// Profile solved from the defining first-order equation, pinned by the
    /// integration constant `c0` and the proportionality target `ef`.
    Solved { c0: f64, ef: f64 },
    Constant(f64),
    Poly(Vec<f64>),
    PowerSum(Vec<PowerTerm>),
    Exp { amp: f64, rate: f64 },
}

/// The second metric profile: tied to `lambda'` (balanced) or explicit.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MuSpec {
    #[default]
    Balanced,
    Constant(f64),
    Poly(Vec<f64>),
    PowerSum(Vec<PowerTerm>),
    Exp { amp: f64, rate: f64 },
}

impl MuSpec {
    fn to_curve(&self) -> Option<Curve> {
        match self {
            MuSpec::Balanced => None,
            MuSpec::Constant(v) => Some(Curve::constant(*v)),
            MuSpec::Poly(cs) => Some(Curve::Poly(cs.clone())),
            MuSpec::PowerSum(terms) => Some(Curve::PowerSum(
                terms.iter().map(|t| (t.coeff, t.power)).collect(),
            )),
            MuSpec::Exp { amp, rate } => Some(Curve::Exp {
                amp: *amp,
                rate: *rate,
            }),
        }
    }
}

/// Base manifold parameters: dimension and (positive) sectional curvature.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseSection {
    pub n: usize,
    pub c: f64,
}

/// The coefficient family defining the lifted structures.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySection {
    pub lambda: CurveSpec,
    pub b1: B1Spec,
    #[serde(default)]
    pub mu: MuSpec,
    /// Multiplier on the canonical antidiagonal scale; 1 is the
    /// integrable point.
    #[serde(default = "one")]
    pub a_factor: f64,
}

fn one() -> f64 {
    1.0
}

/// Seeded sampling of chart points and covectors.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SamplingSection {
    pub seed: u64,
    pub count: usize,
    /// Covector coordinate-norm annulus (keeps samples off the zero section).
    pub r_min: f64,
    pub r_max: f64,
    /// Chart box half-width for base points.
    pub x_radius: f64,
}

impl Default for SamplingSection {
    fn default() -> Self {
        SamplingSection {
            seed: 42,
            count: 40,
            r_min: 0.5,
            r_max: 2.0,
            x_radius: 0.8,
        }
    }
}

/// Energy-density range for constraint validation and profile grids.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TRangeSection {
    pub min: f64,
    pub max: f64,
    pub grid: usize,
}

impl Default for TRangeSection {
    fn default() -> Self {
        TRangeSection {
            min: 0.25,
            max: 4.0,
            grid: 50,
        }
    }
}

impl TRangeSection {
    /// Inclusive evenly spaced grid over `[min, max]`.
    pub fn grid_points(&self) -> Vec<f64> {
        let k = self.grid.max(2);
        (0..k)
            .map(|i| self.min + (self.max - self.min) * i as f64 / (k - 1) as f64)
            .collect()
    }
}

/// A complete run configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub base: BaseSection,
    pub family: FamilySection,
    #[serde(default)]
    pub sampling: SamplingSection,
    #[serde(default)]
    pub t_range: TRangeSection,
    /// Per-check tolerance overrides, keyed by check name.
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    /// Subset of suites to run; omitted means all.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suites: Option<Vec<String>>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Io(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| ConfigError::Parse(e.to_string()))
    }

    /// The list of suites this run executes, in canonical order.
    pub fn active_suites(&self) -> Vec<String> {
        match &self.suites {
            None => SUITE_NAMES.iter().map(|s| s.to_string()).collect(),
            Some(list) => SUITE_NAMES
                .iter()
                .filter(|s| list.iter().any(|l| l == *s))
                .map(|s| s.to_string())
                .collect(),
        }
    }
}

/// A validated, assembled model ready for checking.
pub struct Model {
    pub base: BaseSpace,
    pub family: Family,
    /// Proportionality target, present when the profile is solved.
    pub ef: Option<f64>,
}

impl Model {
    pub fn canonical(&self) -> bool {
        self.family.has_canonical_scale()
    }

    pub fn balanced(&self) -> bool {
        self.family.is_balanced()
    }
}

fn geometry_error(e: GeometryError) -> ConfigError {
    match e {
        GeometryError::ConstraintViolated { name, t, value } => ConfigError::Constraint {
            name: name.to_string(),
            t,
            value,
        },
        other => ConfigError::Invalid(other.to_string()),
    }
}

/// Validate the configuration and assemble the model, checking the family
/// constraints on the configured energy grid.
pub fn build_model(cfg: &RunConfig) -> Result<Model, ConfigError> {
    let base = BaseSpace::new(cfg.base.n, cfg.base.c).map_err(geometry_error)?;

    if !(cfg.family.a_factor.is_finite() && cfg.family.a_factor > 0.0) {
        return Err(ConfigError::Invalid(format!(
            "family.a_factor must be finite and positive, got {}",
            cfg.family.a_factor
        )));
    }
    let s = &cfg.sampling;
    if !(s.r_min.is_finite() && s.r_min > 0.0) {
        return Err(ConfigError::Invalid(format!(
            "sampling.r_min must be positive (the zero covector is excluded), got {}",
            s.r_min
        )));
    }
    if !(s.r_max.is_finite() && s.r_max >= s.r_min) {
        return Err(ConfigError::Invalid(format!(
            "sampling.r_max must be at least r_min, got {}",
            s.r_max
        )));
    }
    if !(s.x_radius.is_finite() && s.x_radius >= 0.0) {
        return Err(ConfigError::Invalid(format!(
            "sampling.x_radius must be nonnegative, got {}",
            s.x_radius
        )));
    }
    if s.count == 0 {
        return Err(ConfigError::Invalid(
            "sampling.count must be at least 1".to_string(),
        ));
    }
    let tr = &cfg.t_range;
    if !(tr.min.is_finite() && tr.min > 0.0 && tr.max.is_finite() && tr.max > tr.min) {
        return Err(ConfigError::Invalid(format!(
            "t_range must satisfy 0 < min < max, got [{}, {}]",
            tr.min, tr.max
        )));
    }
    if tr.grid < 2 {
        return Err(ConfigError::Invalid(
            "t_range.grid must be at least 2".to_string(),
        ));
    }
    if let Some(list) = &cfg.suites {
        for name in list {
            if !SUITE_NAMES.contains(&name.as_str()) {
                return Err(ConfigError::Invalid(format!(
                    "unknown suite `{name}`; valid suites: {}",
                    SUITE_NAMES.join(", ")
                )));
            }
        }
    }
    for name in cfg.tolerances.keys() {
        if !known_check(name) {
            return Err(ConfigError::Invalid(format!(
                "unknown check `{name}` in tolerances"
            )));
        }
    }
    for (name, tol) in &cfg.tolerances {
        if !(tol.is_finite() && *tol > 0.0) {
            return Err(ConfigError::Invalid(format!(
                "tolerance for `{name}` must be finite and positive, got {tol}"
            )));
        }
    }

    let lambda = cfg.family.lambda.to_curve();
    let (b1, ef) = match &cfg.family.b1 {
        B1Spec::Solved { c0, ef } => (
            B1Curve::Solved(SolvedB1::new(
                lambda.clone(),
                cfg.base.n,
                cfg.base.c,
                *ef,
                *c0,
            )),
            Some(*ef),
        ),
        B1Spec::Constant(v) => (B1Curve::Explicit(Curve::constant(*v)), None),
        B1Spec::Poly(cs) => (B1Curve::Explicit(Curve::Poly(cs.clone())), None),
        B1Spec::PowerSum(terms) => (
            B1Curve::Explicit(Curve::PowerSum(
                terms.iter().map(|t| (t.coeff, t.power)).collect(),
            )),
            None,
        ),
        B1Spec::Exp { amp, rate } => (
            B1Curve::Explicit(Curve::Exp {
                amp: *amp,
                rate: *rate,
            }),
            None,
        ),
    };

    let family = match cfg.family.mu.to_curve() {
        None => Family::balanced(lambda, b1),
        Some(mu) => Family::with_mu(lambda, mu, b1),
    }
    .with_a_factor(cfg.family.a_factor);

    validate_family(&base, &family, &cfg.t_range.grid_points()).map_err(geometry_error)?;

    Ok(Model { base, family, ef })
}

/// Re-validate the family at the exact energies of the sampled covectors;
/// samples may fall between (or slightly outside) the grid knots.
pub fn validate_at_energies(
    model: &Model,
    energies: &[f64],
) -> Result<(), ConfigError> {
    validate_family(&model.base, &model.family, energies).map_err(geometry_error)
}
