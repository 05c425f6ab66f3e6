//! The Einstein condition for the balanced family and its solution.
//!
//! For a balanced family the Einstein equations collapse to a single
//! first-order linear differential equation for the antidiagonal
//! profile `b1`, with the scale profile and the Einstein factor as
//! data. The general solution is an explicit quadrature; this module
//! provides that solved profile (with exact derivatives through the
//! quadrature), the equation residual, and point checks of the full
//! Einstein property.

use crate::ad::{Real, Smooth1};
use crate::base::BaseSpace;
use crate::curves::Curve;
use crate::lift::{metric_blocks, Family};
use crate::quad::integrate;
use crate::ricci::{ricci_blocks, ricci_split};

/// Antidiagonal profile solving the Einstein equation by quadrature:
///
/// ```text
/// b1(t) = t^{-(n+1)/2} l^{1-n} / (4 (l + 2 t l')) * (4 C - I(t)),
/// I(t)  = integral from 1 to t of theta(s) ds,
/// theta(s) = s^{(n-2)/2} l^{n-2} { 4 Ef sqrt(s) l^2 (l + 2 s l')
///            + sqrt(2 c) [ -(n-2) l^2 + 4 (n-1) s^2 l'^2
///                          + 4 s l (2 l' + s l'') ] }
/// ```
///
/// with `l` the scale profile evaluated at `s`, `Ef` the prescribed
/// Einstein factor, and `C` the constant of integration.
#[derive(Clone, Debug)]
pub struct SolvedB1 {
    pub lambda: Curve,
    pub n: usize,
    pub c: f64,
    pub ef: f64,
    pub c0: f64,
    pub quad_tol: f64,
}

impl SolvedB1 {
    pub fn new(lambda: Curve, n: usize, c: f64, ef: f64, c0: f64) -> Self {
        SolvedB1 { lambda, n, c, ef, c0, quad_tol: 1e-12 }
    }

    /// Integrand of the quadrature.
    pub fn theta<R: Real>(&self, s: R) -> R {
        let nf = self.n as f64;
        let l = self.lambda.eval(s);
        let lp = self.lambda.d1(s);
        let lpp = self.lambda.d2(s);
        let shape = l + s.scale(2.0) * lp;
        let head = s.powf(0.5 * (nf - 2.0)) * l.powf(nf - 2.0);
        let einstein_part = s.sqrt() * l * l * shape.scale(4.0 * self.ef);
        let curvature_part = (l * l).scale(-(nf - 2.0))
            + (s * s * lp * lp).scale(4.0 * (nf - 1.0))
            + (s * l * (lp.scale(2.0) + s * lpp)).scale(4.0);
        head * (einstein_part + curvature_part.scale((2.0 * self.c).sqrt()))
    }

    /// The accumulated integral `I(t)` by adaptive quadrature.
    fn integral(&self, t: f64) -> f64 {
        integrate(&|s| self.theta(s), 1.0, t, self.quad_tol)
            .expect("quadrature for the solved profile did not converge")
    }

    /// The profile value, generic over the scalar type so that
    /// derivatives propagate exactly through the quadrature.
    pub fn eval<R: Real>(&self, t: R) -> R {
        let nf = self.n as f64;
        let i = t.apply_smooth(&AccumulatedTheta(self));
        let l = self.lambda.eval(t);
        let lp = self.lambda.d1(t);
        let shape = l + t.scale(2.0) * lp;
        let pref = t.powf(-0.5 * (nf + 1.0)) * l.powf(1.0 - nf) / shape.scale(4.0);
        pref * (R::from_f64(4.0 * self.c0) - i)
    }
}

/// The quadrature as a differentiable primitive: its value comes from
/// adaptive integration, its derivative is the integrand.
struct AccumulatedTheta<'a>(&'a SolvedB1);

impl Smooth1 for AccumulatedTheta<'_> {
    fn value_at(&self, x: f64) -> f64 {
        self.0.integral(x)
    }
    fn derivative<R: Real>(&self, x: R) -> R {
        self.0.theta(x)
    }
}

/// Residual of the first-order equation that characterises the
/// Einstein property of a balanced family:
///
/// ```text
/// 2 sqrt(2c) l t^{3/2} (l + 2 t l') b1'
///   = - sqrt(2ct) [ (n+1) l^2 + 2 l l' (2n+3) t + 4 l'^2 (n-1) t^2
///                   + 4 l l'' t^2 ] b1
///     + c l^2 (n-2) - 8 c l l' t - 4 c (n-1) l'^2 t^2 - 4 c l l'' t^2
///     - Ef 2 sqrt(2ct) l^2 (l + 2 t l')
/// ```
pub fn ode_residual(base: &BaseSpace, fam: &Family, ef: f64, t: f64) -> f64 {
    debug_assert!(fam.has_canonical_scale() && fam.is_balanced());
    let n = base.dim() as f64;
    let c = base.curvature();
    let l = fam.lambda.eval(t);
    let lp = fam.lambda.d1(t);
    let lpp = fam.lambda.d2(t);
    let b1 = fam.b1.eval(t);
    let b1p = fam.b1.d1(t);
    let shape = l + 2.0 * t * lp;
    let lhs = 2.0 * (2.0 * c).sqrt() * l * t.powf(1.5) * shape * b1p;
    let rhs = -(2.0 * c * t).sqrt()
        * ((n + 1.0) * l * l
            + 2.0 * l * lp * (2.0 * n + 3.0) * t
            + 4.0 * lp * lp * (n - 1.0) * t * t
            + 4.0 * l * lpp * t * t)
        * b1
        + c * l * l * (n - 2.0)
        - 8.0 * c * l * lp * t
        - 4.0 * c * (n - 1.0) * lp * lp * t * t
        - 4.0 * c * l * lpp * t * t
        - ef * 2.0 * (2.0 * c * t).sqrt() * l * l * shape;
    (lhs - rhs).abs()
}

/// Largest componentwise deviation of both diagonal Ricci blocks from
/// `ef` times the corresponding metric blocks.
pub fn einstein_residual(base: &BaseSpace, fam: &Family, ef: f64, x: &[f64], p: &[f64]) -> f64 {
    let n = base.dim();
    let (ric1, ric2) = ricci_blocks(base, fam, x, p);
    let (g1, g2) = metric_blocks(base, fam, x, p);
    let mut worst = 0.0_f64;
    for j in 0..n {
        for k in 0..n {
            worst = worst.max((ric1[j][k] - ef * g1[j][k]).abs());
            worst = worst.max((ric2[j][k] - ef * g2[j][k]).abs());
        }
    }
    worst
}

/// Largest deviation of the four two-term Ricci coefficients from `ef`
/// times the matching metric coefficients: checks the metric part and
/// the rank-one part of each block separately.
pub fn ef_consistency_residual(
    base: &BaseSpace,
    fam: &Family,
    ef: f64,
    x: &[f64],
    p: &[f64],
) -> f64 {
    let t = base.energy(x, p);
    let sc = fam.scalars(base.curvature(), t);
    let ((u1, v1), (u2, v2)) = ricci_split(base, fam, x, p);
    let mut worst = (u1 - ef * sc.c1).abs();
    worst = worst.max((v1 - ef * sc.d1).abs());
    worst = worst.max((u2 - ef * sc.c2).abs());
    worst = worst.max((v2 - ef * sc.d2).abs());
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::B1Curve;

    fn solved_family(lambda: Curve, n: usize, c: f64, ef: f64, c0: f64) -> Family {
        Family::balanced(
            lambda.clone(),
            B1Curve::Solved(SolvedB1::new(lambda, n, c, ef, c0)),
        )
    }

    #[test]
    fn constant_scale_gives_constant_profile() {
        // Flat scale, factor -1: the solved profile is the constant 2/3.
        let fam = solved_family(Curve::constant(1.0), 2, 2.0, -1.0, 2.0 / 3.0);
        for &t in &[0.2, 0.7, 1.0, 1.9, 3.4] {
            assert!((fam.b1.eval(t) - 2.0 / 3.0).abs() < 1e-10, "t = {t}");
            assert!(fam.b1.d1(t).abs() < 1e-9, "t = {t}");
        }
        let base = BaseSpace::new(2, 2.0).unwrap();
        assert!(ode_residual(&base, &fam, -1.0, 0.8) < 1e-10);
        let x = [0.25, -0.15];
        let p = [0.7, 0.6];
        assert!(einstein_residual(&base, &fam, -1.0, &x, &p) < 1e-9);
        assert!(ef_consistency_residual(&base, &fam, -1.0, &x, &p) < 1e-9);
    }

    #[test]
    fn vanishing_factor_in_dim_three() {
        // Flat scale in dimension three with factor zero: the solved
        // profile is sqrt(2)/6 * t^{-1/2}.
        let k = 2.0_f64.sqrt() / 6.0;
        let fam = solved_family(Curve::constant(1.0), 3, 1.0, 0.0, k);
        for &t in &[0.3, 1.0, 2.2] {
            assert!((fam.b1.eval(t) - k / t.sqrt()).abs() < 1e-10, "t = {t}");
        }
        let base = BaseSpace::new(3, 1.0).unwrap();
        assert!(ode_residual(&base, &fam, 0.0, 1.4) < 1e-10);
        let x = [0.2, 0.1, -0.25];
        let p = [0.6, 0.5, -0.4];
        assert!(einstein_residual(&base, &fam, 0.0, &x, &p) < 1e-9);
    }

    #[test]
    fn quadrature_matches_hand_integrated_profile() {
        // Linear scale with factor zero: the integrand is a polynomial,
        // so the quadrature has a closed antiderivative to compare with.
        let lam = Curve::Poly(vec![1.0, 0.1]);
        let fam = solved_family(lam.clone(), 2, 2.0, 0.0, 0.0);
        for &t in &[0.3, 1.0, 1.6, 2.7] {
            let l = lam.eval(t);
            let shape = l + 2.0 * t * 0.1;
            let closed =
                -(0.8 * (t * t - 1.0) + 0.08 * (t * t * t - 1.0)) / (4.0 * t.powf(1.5) * l * shape);
            assert!((fam.b1.eval(t) - closed).abs() < 1e-9, "t = {t}");
        }
    }

    #[test]
    fn solved_profile_is_einstein_for_a_generic_scale() {
        let base = BaseSpace::new(2, 1.3).unwrap();
        let fam = solved_family(Curve::Poly(vec![1.0, 0.2]), 2, 1.3, -0.7, 0.25);
        for (x, p) in [
            (vec![0.3, -0.2], vec![0.8, 0.5]),
            (vec![-0.1, 0.4], vec![0.5, 1.1]),
        ] {
            let t = base.energy(&x, &p);
            assert!(ode_residual(&base, &fam, -0.7, t) < 1e-9, "t = {t}");
            let res = einstein_residual(&base, &fam, -0.7, &x, &p);
            assert!(res < 1e-8, "einstein residual {res} at t = {t}");
            let cons = ef_consistency_residual(&base, &fam, -0.7, &x, &p);
            assert!(cons < 1e-8, "factor consistency {cons} at t = {t}");
        }
    }

    #[test]
    fn wrong_factor_is_detected() {
        let base = BaseSpace::new(2, 1.3).unwrap();
        let fam = solved_family(Curve::Poly(vec![1.0, 0.2]), 2, 1.3, -0.7, 0.25);
        let x = [0.3, -0.2];
        let p = [0.8, 0.5];
        assert!(einstein_residual(&base, &fam, -0.5, &x, &p) > 1e-2);
        assert!(ef_consistency_residual(&base, &fam, -0.5, &x, &p) > 1e-2);
    }

    #[test]
    fn derivatives_propagate_through_the_quadrature() {
        let sv = SolvedB1::new(Curve::Poly(vec![1.0, 0.15, 0.03]), 2, 1.7, -0.4, 0.1);
        let prof = B1Curve::Solved(sv);
        let t = 1.3;
        let h = 1e-5;
        let fd1 = (prof.eval(t + h) - prof.eval(t - h)) / (2.0 * h);
        assert!((prof.d1(t) - fd1).abs() < 1e-7);
        let fd2 = (prof.d1(t + h) - prof.d1(t - h)) / (2.0 * h);
        assert!((prof.d2(t) - fd2).abs() < 1e-6);
    }
}
