//! Scalar coefficient profiles: smooth functions of the fiber energy
//! density `t` that parameterize the lifted structures.
//!
//! Every profile evaluates generically over the AD scalar type, so any
//! derivative order needed downstream is obtained by nesting rather than
//! by hand-coded derivative formulas.

use crate::ad::{derive1, Dual, Real};

/// A closed-form scalar profile on `t > 0`.
#[derive(Clone, Debug, PartialEq)]
pub enum Curve {
    /// Polynomial `c_0 + c_1 t + c_2 t^2 + ...` (coefficients low-to-high).
    Poly(Vec<f64>),
    /// Sum of real powers `sum_k  c_k * t^{e_k}`.
    PowerSum(Vec<(f64, f64)>),
    /// Exponential profile `amp * exp(rate * t)`.
    Exp { amp: f64, rate: f64 },
}

impl Curve {
    /// Constant profile.
    pub fn constant(value: f64) -> Self {
        Curve::Poly(vec![value])
    }

    pub fn eval<R: Real>(&self, t: R) -> R {
        match self {
            Curve::Poly(coeffs) => {
                let mut acc = R::zero();
                for &c in coeffs.iter().rev() {
                    acc = acc * t + R::from_f64(c);
                }
                acc
            }
            Curve::PowerSum(terms) => {
                let mut acc = R::zero();
                for &(c, e) in terms {
                    let term = if e == 0.0 { R::one() } else { t.powf(e) };
                    acc = acc + term.scale(c);
                }
                acc
            }
            Curve::Exp { amp, rate } => t.scale(*rate).exp().scale(*amp),
        }
    }

    pub fn d1<R: Real>(&self, t: R) -> R {
        derive1(|u: Dual<R>| self.eval(u), t)
    }

    pub fn d2<R: Real>(&self, t: R) -> R {
        derive1(|u: Dual<R>| self.d1(u), t)
    }

    pub fn d3<R: Real>(&self, t: R) -> R {
        derive1(|u: Dual<R>| self.d2(u), t)
    }
}

/// How the second metric profile `mu` is chosen.
#[derive(Clone, Debug, PartialEq)]
pub enum MuMode {
    /// `mu = lambda'`: the choice that closes the fundamental two-form.
    LambdaPrime,
    /// An independently prescribed profile; the structure is generally
    /// Hermitian but not Kahler.
    Explicit(Curve),
}

/// The twisting profile `b1` of the complex structure: either a closed
/// form, or the solution of the first-order balance equation that makes
/// the lifted metric Einstein (see [`crate::einstein::SolvedB1`]).
#[derive(Clone, Debug)]
pub enum B1Curve {
    Explicit(Curve),
    Solved(crate::einstein::SolvedB1),
}

impl B1Curve {
    pub fn eval<R: Real>(&self, t: R) -> R {
        match self {
            B1Curve::Explicit(c) => c.eval(t),
            B1Curve::Solved(s) => s.eval(t),
        }
    }

    pub fn d1<R: Real>(&self, t: R) -> R {
        derive1(|u: Dual<R>| self.eval(u), t)
    }

    pub fn d2<R: Real>(&self, t: R) -> R {
        derive1(|u: Dual<R>| self.d1(u), t)
    }
}
