//! Forward-mode automatic differentiation with statically typed nesting.
//!
//! Every geometric quantity in this crate is written generically over a
//! scalar type implementing [`Real`]. Instantiating with `f64` evaluates
//! values; instantiating with [`Dual<f64>`] evaluates values together with
//! one directional derivative; `Dual<Dual<f64>>` gives second derivatives,
//! and so on. Because each differentiation level is a distinct *type*,
//! perturbations belonging to different levels can never be conflated: an
//! outer-level scalar entering an inner-level computation must be lifted
//! explicitly with [`Dual::lift`], which freezes it as a constant for the
//! inner derivative. This makes nested differentiation safe by construction.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// A scalar function of one real variable whose derivative is itself
/// expressible at every differentiation depth.
///
/// This is the hook for "custom primitives": operations (such as an
/// integral with a known integrand) whose value is computed by some
/// opaque numeric routine but whose exact derivative is known in closed
/// form. [`Real::apply_smooth`] recurses structurally, so depth-k
/// arguments receive the correct k-th order chain rule automatically.
pub trait Smooth1 {
    /// Value of the function at an ordinary floating-point argument.
    fn value_at(&self, x: f64) -> f64;
    /// Derivative of the function, evaluated at any differentiation depth.
    fn derivative<R: Real>(&self, x: R) -> R;
}

/// Scalar arithmetic shared by `f64` and every nesting of [`Dual`].
pub trait Real:
    Copy
    + Clone
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Embed a constant.
    fn from_f64(x: f64) -> Self;
    /// The underlying value, with every derivative component stripped.
    fn value(self) -> f64;
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    /// Power with a constant real exponent.
    fn powf(self, a: f64) -> Self;
    /// Apply a function with a known derivative rule (see [`Smooth1`]).
    fn apply_smooth<F: Smooth1>(self, f: &F) -> Self;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }
    fn one() -> Self {
        Self::from_f64(1.0)
    }
    /// Multiply by a constant.
    fn scale(self, k: f64) -> Self {
        self * Self::from_f64(k)
    }
    fn recip(self) -> Self {
        Self::one() / self
    }
    /// Integer power by repeated multiplication (exact derivative rules).
    fn powi(self, n: i32) -> Self {
        if n < 0 {
            return self.powi(-n).recip();
        }
        let mut acc = Self::one();
        let mut base = self;
        let mut e = n as u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl Real for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn value(self) -> f64 {
        self
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn powf(self, a: f64) -> Self {
        f64::powf(self, a)
    }
    fn apply_smooth<F: Smooth1>(self, f: &F) -> Self {
        f.value_at(self)
    }
}

/// One level of forward-mode differentiation over an inner scalar type.
#[derive(Clone, Copy, Debug)]
pub struct Dual<R: Real> {
    /// Primal component.
    pub re: R,
    /// Derivative component.
    pub du: R,
}

impl<R: Real> Dual<R> {
    /// Seed an independent variable: derivative one.
    pub fn var(x: R) -> Self {
        Dual {
            re: x,
            du: R::one(),
        }
    }
    /// Embed a quantity that is constant for *this* differentiation level.
    pub fn lift(x: R) -> Self {
        Dual {
            re: x,
            du: R::zero(),
        }
    }
}

impl<R: Real> Add for Dual<R> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Dual {
            re: self.re + rhs.re,
            du: self.du + rhs.du,
        }
    }
}

impl<R: Real> Sub for Dual<R> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Dual {
            re: self.re - rhs.re,
            du: self.du - rhs.du,
        }
    }
}

impl<R: Real> Mul for Dual<R> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Dual {
            re: self.re * rhs.re,
            du: self.du * rhs.re + self.re * rhs.du,
        }
    }
}

impl<R: Real> Div for Dual<R> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let inv = rhs.re.recip();
        let re = self.re * inv;
        Dual {
            re,
            du: (self.du - re * rhs.du) * inv,
        }
    }
}

impl<R: Real> Neg for Dual<R> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual {
            re: -self.re,
            du: -self.du,
        }
    }
}

impl<R: Real> Real for Dual<R> {
    fn from_f64(x: f64) -> Self {
        Dual {
            re: R::from_f64(x),
            du: R::zero(),
        }
    }
    fn value(self) -> f64 {
        self.re.value()
    }
    fn sqrt(self) -> Self {
        let s = self.re.sqrt();
        Dual {
            re: s,
            du: self.du / (s.scale(2.0)),
        }
    }
    fn exp(self) -> Self {
        let e = self.re.exp();
        Dual {
            re: e,
            du: self.du * e,
        }
    }
    fn ln(self) -> Self {
        Dual {
            re: self.re.ln(),
            du: self.du / self.re,
        }
    }
    fn powf(self, a: f64) -> Self {
        Dual {
            re: self.re.powf(a),
            du: self.du.scale(a) * self.re.powf(a - 1.0),
        }
    }
    fn apply_smooth<F: Smooth1>(self, f: &F) -> Self {
        Dual {
            re: self.re.apply_smooth(f),
            du: f.derivative(self.re) * self.du,
        }
    }
}

/// First derivative of a scalar-to-scalar map at `x`, at any depth.
pub fn derive1<R, F>(f: F, x: R) -> R
where
    R: Real,
    F: FnOnce(Dual<R>) -> Dual<R>,
{
    f(Dual::var(x)).du
}

/// Second derivative of a scalar-to-scalar map at `x`, at any depth.
pub fn derive2<R, F>(f: F, x: R) -> R
where
    R: Real,
    F: FnOnce(Dual<Dual<R>>) -> Dual<Dual<R>>,
{
    f(Dual::var(Dual::var(x))).du.du
}

/// Gradient of a scalar function of several variables: seeds each
/// coordinate in turn and collects the directional derivatives.
pub fn gradient<R, F>(f: F, xs: &[R]) -> Vec<R>
where
    R: Real,
    F: Fn(&[Dual<R>]) -> Dual<R>,
{
    (0..xs.len())
        .map(|k| {
            let seeded: Vec<Dual<R>> = xs
                .iter()
                .enumerate()
                .map(|(j, &x)| if j == k { Dual::var(x) } else { Dual::lift(x) })
                .collect();
            f(&seeded).du
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube<R: Real>(x: R) -> R {
        x * x * x
    }

    #[test]
    fn first_derivative_of_cube() {
        let d = derive1(|x: Dual<f64>| cube(x), 2.0);
        assert!((d - 12.0).abs() < 1e-14);
    }

    #[test]
    fn second_derivative_of_cube() {
        let d = derive2(|x: Dual<Dual<f64>>| cube(x), 2.0);
        assert!((d - 12.0).abs() < 1e-14);
    }

    #[test]
    fn third_derivative_via_triple_nesting() {
        // d^3/dx^3 x^3 = 6 everywhere.
        let x: Dual<Dual<Dual<f64>>> = Dual::var(Dual::var(Dual::var(1.7)));
        let y = cube(x);
        assert!((y.du.du.du - 6.0).abs() < 1e-14);
    }

    #[test]
    fn chain_rule_with_sqrt_exp_ln_powf() {
        // f(x) = exp(sqrt(x)) * ln(x) + x^{2.5}
        // f'(x) = exp(sqrt x) (ln x / (2 sqrt x) + 1/x) + 2.5 x^{1.5}
        let x0 = 1.9_f64;
        let f = |x: Dual<f64>| x.sqrt().exp() * x.ln() + x.powf(2.5);
        let got = derive1(f, x0);
        let s = x0.sqrt();
        let expect = s.exp() * (x0.ln() / (2.0 * s) + 1.0 / x0) + 2.5 * x0.powf(1.5);
        assert!((got - expect).abs() < 1e-12);
    }

    #[test]
    fn nested_levels_stay_separate() {
        // g(x) = x * d/du [ x * u ] at u = 3  ==  x * x, so g'(x) = 2x.
        // The inner derivative must treat the outer variable x as a
        // constant; the typed nesting forces the lift explicitly and the
        // two perturbation levels cannot mix.
        let x0 = 0.37_f64;
        let g = |x: Dual<f64>| {
            let inner = derive1(
                |u: Dual<Dual<f64>>| Dual::lift(x) * u,
                Dual::from_f64(3.0),
            );
            x * inner
        };
        let got = derive1(g, x0);
        assert!((got - 2.0 * x0).abs() < 1e-14);
    }

    #[test]
    fn smooth_primitive_chain_rule() {
        // F with value x^2 (computed "opaquely") and derivative rule 2x.
        struct Square;
        impl Smooth1 for Square {
            fn value_at(&self, x: f64) -> f64 {
                x * x
            }
            fn derivative<R: Real>(&self, x: R) -> R {
                x.scale(2.0)
            }
        }
        // h(t) = F(t^3); h'(t) = 2 t^3 * 3 t^2 = 6 t^5; h''(t) = 30 t^4.
        let t0 = 1.3_f64;
        let h1 = derive1(|t: Dual<f64>| (t * t * t).apply_smooth(&Square), t0);
        assert!((h1 - 6.0 * t0.powi(5)).abs() < 1e-11);
        let h2 = derive2(
            |t: Dual<Dual<f64>>| (t * t * t).apply_smooth(&Square),
            t0,
        );
        assert!((h2 - 30.0 * t0.powi(4)).abs() < 1e-10);
    }

    #[test]
    fn gradient_of_quadratic_form() {
        // f(x, y) = x^2 y + y^3; grad = (2xy, x^2 + 3y^2).
        let f = |z: &[Dual<f64>]| z[0] * z[0] * z[1] + z[1] * z[1] * z[1];
        let g = gradient(f, &[1.5, -0.5]);
        assert!((g[0] - 2.0 * 1.5 * -0.5).abs() < 1e-14);
        assert!((g[1] - (1.5 * 1.5 + 3.0 * 0.25)).abs() < 1e-14);
    }

    #[test]
    fn integer_powers_match_repeated_products() {
        let x = 1.1_f64;
        let d = derive1(|z: Dual<f64>| z.powi(7), x);
        assert!((d - 7.0 * x.powi(6)).abs() < 1e-12);
        let neg = derive1(|z: Dual<f64>| z.powi(-3), x);
        assert!((neg - (-3.0) * x.powi(-4)).abs() < 1e-12);
    }
}
