//! The lifted structures on the punctured cotangent bundle: a
//! one-parameter family of almost complex structures `J` and compatible
//! Riemannian metrics `G`, both block-diagonal (or block-antidiagonal) in
//! the frame adapted to the horizontal/vertical splitting.
//!
//! All fiberwise tensors here follow the same two-term shape: a multiple
//! of the base metric plus a rank-one piece built from the covector. The
//! coefficient functions depend only on the energy density `t`.

pub mod forms;
pub mod nijenhuis;

use crate::ad::Real;
use crate::base::BaseSpace;
use crate::curves::{B1Curve, Curve, MuMode};
use crate::error::{GeometryError, Result};
use crate::tensor::{
    is_positive_definite, mat_mul, mat_zeros, residual_from_identity, Mat,
};

/// A member of the family of lifted structures, described by its
/// coefficient profiles.
#[derive(Clone, Debug)]
pub struct Family {
    /// Overall metric scaling profile (must stay positive).
    pub lambda: Curve,
    /// Second metric profile; tied to `lambda'` in the balanced mode.
    pub mu: MuMode,
    /// Twisting profile of the complex structure.
    pub b1: B1Curve,
    /// Multiplier on the canonical scale of the antidiagonal blocks:
    /// `A = a_factor * sqrt(2c)`. Only `a_factor = 1` yields an
    /// *integrable* complex structure; other values still give an almost
    /// complex structure and are used to probe the integrability test.
    pub a_factor: f64,
}

impl Family {
    /// Balanced family: `mu = lambda'`, canonical antidiagonal scale.
    pub fn balanced(lambda: Curve, b1: B1Curve) -> Self {
        Family {
            lambda,
            mu: MuMode::LambdaPrime,
            b1,
            a_factor: 1.0,
        }
    }

    /// Hermitian-only family with an independent `mu` profile.
    pub fn with_mu(lambda: Curve, mu: Curve, b1: B1Curve) -> Self {
        Family {
            lambda,
            mu: MuMode::Explicit(mu),
            b1,
            a_factor: 1.0,
        }
    }

    pub fn with_a_factor(mut self, a_factor: f64) -> Self {
        self.a_factor = a_factor;
        self
    }

    /// Whether the antidiagonal scale sits at the canonical (integrable)
    /// value.
    pub fn has_canonical_scale(&self) -> bool {
        (self.a_factor - 1.0).abs() < 1e-12
    }

    /// Whether `mu` is tied to `lambda'` (the closed-form-two-form mode).
    pub fn is_balanced(&self) -> bool {
        matches!(self.mu, MuMode::LambdaPrime)
    }

    /// The antidiagonal scale `A`.
    pub fn a_coeff(&self, c: f64) -> f64 {
        self.a_factor * (2.0 * c).sqrt()
    }

    pub fn mu_eval<R: Real>(&self, t: R) -> R {
        match &self.mu {
            MuMode::LambdaPrime => self.lambda.d1(t),
            MuMode::Explicit(curve) => curve.eval(t),
        }
    }

    pub fn mu_d1<R: Real>(&self, t: R) -> R {
        match &self.mu {
            MuMode::LambdaPrime => self.lambda.d2(t),
            MuMode::Explicit(curve) => curve.d1(t),
        }
    }

    /// All scalar coefficients at one value of the energy density.
    pub fn scalars<R: Real>(&self, c: f64, t: R) -> FiberScalars<R> {
        let a = self.a_coeff(c);
        let st = t.sqrt();
        let a1 = st.scale(a);
        let a2 = a1.recip();
        let b1 = self.b1.eval(t);
        let a_plus = R::from_f64(a) + st.scale(2.0) * b1;
        let b2 = -b1 / (t.scale(a) * a_plus);
        let lam = self.lambda.eval(t);
        let mu = self.mu_eval(t);
        let two_t_mu = t.scale(2.0) * mu;
        FiberScalars {
            t,
            a1,
            a2,
            b1,
            b2,
            c1: lam * a1,
            c2: lam * a2,
            d1: mu * a1 + lam * b1 + two_t_mu * b1,
            d2: mu * a2 + lam * b2 + two_t_mu * b2,
            lam,
            mu,
        }
    }
}

/// Scalar coefficients of all blocks at a single energy density.
#[derive(Clone, Copy, Debug)]
pub struct FiberScalars<R> {
    pub t: R,
    pub a1: R,
    pub a2: R,
    pub b1: R,
    pub b2: R,
    pub c1: R,
    pub c2: R,
    pub d1: R,
    pub d2: R,
    pub lam: R,
    pub mu: R,
}

/// Assemble `u * g_ij + v * p_i p_j`.
pub fn two_term_lower<R: Real>(g: &Mat<R>, p: &[R], u: R, v: R) -> Mat<R> {
    let n = p.len();
    let mut m = mat_zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[i][j] = u * g[i][j] + v * p[i] * p[j];
        }
    }
    m
}

/// Assemble `u * g^ij + v * g0^i g0^j` with the raised covector `g0`.
pub fn two_term_upper<R: Real>(ginv: &Mat<R>, up: &[R], u: R, v: R) -> Mat<R> {
    let n = up.len();
    let mut m = mat_zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[i][j] = u * ginv[i][j] + v * up[i] * up[j];
        }
    }
    m
}

/// Blocks of the almost complex structure in the adapted frame:
/// `J` maps the horizontal frame field `i` to `J1_ij * (vertical j)` and
/// the vertical frame field `i` to `-J2^ij * (horizontal j)`.
pub fn j_blocks<R: Real>(
    base: &BaseSpace,
    fam: &Family,
    x: &[R],
    p: &[R],
) -> (Mat<R>, Mat<R>) {
    let t = base.energy(x, p);
    let s = fam.scalars(base.curvature(), t);
    let g = base.metric(x);
    let ginv = base.metric_inv(x);
    let up = base.p_raised(x, p);
    (
        two_term_lower(&g, p, s.a1, s.b1),
        two_term_upper(&ginv, &up, s.a2, s.b2),
    )
}

/// Blocks of the lifted metric: `G1` on the horizontal distribution,
/// `G2` on the vertical one; the mixed components vanish.
pub fn metric_blocks<R: Real>(
    base: &BaseSpace,
    fam: &Family,
    x: &[R],
    p: &[R],
) -> (Mat<R>, Mat<R>) {
    let t = base.energy(x, p);
    let s = fam.scalars(base.curvature(), t);
    let g = base.metric(x);
    let ginv = base.metric_inv(x);
    let up = base.p_raised(x, p);
    (
        two_term_lower(&g, p, s.c1, s.d1),
        two_term_upper(&ginv, &up, s.c2, s.d2),
    )
}

/// Closed-form inverses of the metric blocks: `H1^jk` inverts `G1_ij`,
/// `H2_jk` inverts `G2^ij`.
pub fn inverse_blocks<R: Real>(
    base: &BaseSpace,
    fam: &Family,
    x: &[R],
    p: &[R],
) -> (Mat<R>, Mat<R>) {
    let t = base.energy(x, p);
    let s = fam.scalars(base.curvature(), t);
    let g = base.metric(x);
    let ginv = base.metric_inv(x);
    let up = base.p_raised(x, p);
    let two_t = t.scale(2.0);
    let h1_u = s.c1.recip();
    let h1_v = -s.d1 / (s.c1 * (s.c1 + two_t * s.d1));
    let h2_u = s.c2.recip();
    let h2_v = -s.d2 / (s.c2 * (s.c2 + two_t * s.d2));
    (
        two_term_upper(&ginv, &up, h1_u, h1_v),
        two_term_lower(&g, p, h2_u, h2_v),
    )
}

/// Mixed components of the fundamental two-form, computed honestly as
/// `phi(vertical i, horizontal j) = G(vertical i, J horizontal j)
///  = G2^ik J1_kj`. (The unmixed components vanish because `G` is block
/// diagonal and `J` is block antidiagonal.)
pub fn fundamental_form_mixed<R: Real>(
    base: &BaseSpace,
    fam: &Family,
    x: &[R],
    p: &[R],
) -> Mat<R> {
    let (j1, _) = j_blocks(base, fam, x, p);
    let (_, g2) = metric_blocks(base, fam, x, p);
    mat_mul(&g2, &j1)
}

/// The two-term pattern the mixed fundamental form must equal:
/// `lam * delta^i_j + mu * g0^i p_j`.
pub fn fundamental_form_pattern<R: Real>(
    base: &BaseSpace,
    fam: &Family,
    x: &[R],
    p: &[R],
) -> Mat<R> {
    let t = base.energy(x, p);
    let lam = fam.lambda.eval(t);
    let mu = fam.mu_eval(t);
    let up = base.p_raised(x, p);
    let n = base.dim();
    let mut m = mat_zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut v = mu * up[i] * p[j];
            if i == j {
                v = v + lam;
            }
            m[i][j] = v;
        }
    }
    m
}

/// Largest deviation of `J * J` from `-identity`, measured on both frame
/// halves.
pub fn complex_structure_residual(
    base: &BaseSpace,
    fam: &Family,
    x: &[f64],
    p: &[f64],
) -> f64 {
    let (j1, j2) = j_blocks(base, fam, x, p);
    // J^2 on horizontal fields contracts J1 then -J2; on vertical fields
    // -J2 then J1. Both products must be the identity.
    let horiz = mat_mul(&j1, &j2);
    let vert = mat_mul(&j2, &j1);
    residual_from_identity(&horiz).max(residual_from_identity(&vert))
}

/// Largest deviation of `G(J., J.) - G(.,.)` over the frame blocks.
pub fn hermitian_residual(base: &BaseSpace, fam: &Family, x: &[f64], p: &[f64]) -> f64 {
    let (j1, j2) = j_blocks(base, fam, x, p);
    let (g1, g2) = metric_blocks(base, fam, x, p);
    // G(J h_i, J h_j) = J1_ik J1_jl G2^kl must equal G1_ij.
    let horiz = mat_mul(&mat_mul(&j1, &g2), &j1);
    // G(J v^i, J v^j) = J2^ik J2^jl G1_kl must equal G2^ij.
    let vert = mat_mul(&mat_mul(&j2, &g1), &j2);
    let mut worst = 0.0_f64;
    for i in 0..base.dim() {
        for j in 0..base.dim() {
            worst = worst.max((horiz[i][j] - g1[i][j]).abs());
            worst = worst.max((vert[i][j] - g2[i][j]).abs());
        }
    }
    worst
}

/// Largest deviation of the closed-form inverse blocks from true inverses.
pub fn inverse_block_residual(base: &BaseSpace, fam: &Family, x: &[f64], p: &[f64]) -> f64 {
    let (g1, g2) = metric_blocks(base, fam, x, p);
    let (h1, h2) = inverse_blocks(base, fam, x, p);
    residual_from_identity(&mat_mul(&g1, &h1)).max(residual_from_identity(&mat_mul(&g2, &h2)))
}

/// Residuals of the two algebraic conditions tying the block coefficients
/// together: `a1 a2 = 1` and `(a1 + 2t b1)(a2 + 2t b2) = 1`.
pub fn coefficient_condition_residual(
    base: &BaseSpace,
    fam: &Family,
    x: &[f64],
    p: &[f64],
) -> f64 {
    let t = base.energy(x, p);
    let s = fam.scalars(base.curvature(), t);
    let first = (s.a1 * s.a2 - 1.0).abs();
    let second = ((s.a1 + 2.0 * t * s.b1) * (s.a2 + 2.0 * t * s.b2) - 1.0).abs();
    first.max(second)
}

/// Whether both metric blocks are positive definite at the point.
pub fn metric_positive(base: &BaseSpace, fam: &Family, x: &[f64], p: &[f64]) -> bool {
    let (g1, g2) = metric_blocks(base, fam, x, p);
    is_positive_definite(&g1) && is_positive_definite(&g2)
}

/// Check the pointwise admissibility conditions of the family on a grid
/// of energy densities. Returns the first violation found.
pub fn validate_family(base: &BaseSpace, fam: &Family, t_grid: &[f64]) -> Result<()> {
    let c = base.curvature();
    let a = fam.a_coeff(c);
    if !(a > 0.0) {
        return Err(GeometryError::ConstraintViolated {
            name: "a_positivity",
            t: f64::NAN,
            value: a,
        });
    }
    for &t in t_grid {
        let b1 = fam.b1.eval(t);
        // Lower bound on the twist: sqrt(c) + sqrt(2t) b1 > 0, i.e.
        // b1 > -sqrt(c / (2t)).
        let twist_margin = c.sqrt() + (2.0 * t).sqrt() * b1;
        if !(twist_margin > 0.0) {
            return Err(GeometryError::ConstraintViolated {
                name: "b1_lower_bound",
                t,
                value: twist_margin,
            });
        }
        let frame_margin = a + 2.0 * t.sqrt() * b1;
        if !(frame_margin > 0.0) {
            return Err(GeometryError::ConstraintViolated {
                name: "frame_positivity",
                t,
                value: frame_margin,
            });
        }
        let lam = fam.lambda.eval(t);
        if !(lam > 0.0) {
            return Err(GeometryError::ConstraintViolated {
                name: "lambda_positivity",
                t,
                value: lam,
            });
        }
        let shape = lam + 2.0 * t * fam.mu_eval(t);
        if !(shape > 0.0) {
            return Err(GeometryError::ConstraintViolated {
                name: "shape_positivity",
                t,
                value: shape,
            });
        }
    }
    Ok(())
}

/// Split a symmetric covariant two-tensor into its two-term coefficients:
/// `T_jk = u g_jk + v p_j p_k`, recovered by transvecting with `g^jk` and
/// `g0^j g0^k`.
pub fn split_lower<R: Real>(
    base: &BaseSpace,
    x: &[R],
    p: &[R],
    m: &Mat<R>,
) -> (R, R) {
    let n = base.dim();
    let ginv = base.metric_inv(x);
    let up = base.p_raised(x, p);
    let t = base.energy(x, p);
    let mut s1 = R::zero();
    let mut s2 = R::zero();
    for j in 0..n {
        for k in 0..n {
            s1 = s1 + ginv[j][k] * m[j][k];
            s2 = s2 + up[j] * up[k] * m[j][k];
        }
    }
    solve_two_term(n, t, s1, s2)
}

/// Split a symmetric contravariant two-tensor `T^jk = u g^jk + v g0^j g0^k`.
pub fn split_upper<R: Real>(
    base: &BaseSpace,
    x: &[R],
    p: &[R],
    m: &Mat<R>,
) -> (R, R) {
    let n = base.dim();
    let g = base.metric(x);
    let t = base.energy(x, p);
    let mut s1 = R::zero();
    let mut s2 = R::zero();
    for j in 0..n {
        for k in 0..n {
            s1 = s1 + g[j][k] * m[j][k];
            s2 = s2 + p[j] * p[k] * m[j][k];
        }
    }
    solve_two_term(n, t, s1, s2)
}

/// Solve `s1 = n u + 2t v`, `s2 = 2t u + 4t^2 v` for `(u, v)`.
fn solve_two_term<R: Real>(n: usize, t: R, s1: R, s2: R) -> (R, R) {
    let two_t = t.scale(2.0);
    let u = (two_t * s1 - s2) / (two_t.scale(n as f64 - 1.0));
    let v = (s1 - u.scale(n as f64)) / two_t;
    (u, v)
}
