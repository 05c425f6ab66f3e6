//! Ricci curvature of the lifted metric: honest traces of the frame
//! curvature table, the block-diagonal closed forms for the balanced
//! family, and the pointwise proportionality factor whose constancy is
//! the Einstein condition.

use crate::base::BaseSpace;
use crate::curvature::{curvature_blocks, curvature_frame};
use crate::lift::nijenhuis::j_matrix;
use crate::lift::{split_lower, split_upper, Family};
use crate::tensor::{mat_zeros, Mat, T4};

/// Honest Ricci trace of a full frame curvature table:
/// `ric[v][z] = sum_u kf[u][z][u][v]`, the trace of `X -> K(X, E_v) E_z`.
pub fn ricci_frame(kf: &T4<f64>) -> Mat<f64> {
    let dim = kf.len();
    let mut ric = mat_zeros(dim, dim);
    for v in 0..dim {
        for z in 0..dim {
            ric[v][z] = (0..dim).map(|u| kf[u][z][u][v]).sum();
        }
    }
    ric
}

/// The two diagonal Ricci blocks taken directly from the curvature
/// blocks: the horizontal/horizontal components `ric1[j][k]` and the
/// vertical/vertical components `ric2[j][k]`. The mixed components
/// vanish identically for the block-structured curvature.
pub fn ricci_blocks(base: &BaseSpace, fam: &Family, x: &[f64], p: &[f64]) -> (Mat<f64>, Mat<f64>) {
    let n = base.dim();
    let bl = curvature_blocks(base, fam, x, p);
    let mut ric1 = mat_zeros(n, n);
    let mut ric2 = mat_zeros(n, n);
    for j in 0..n {
        for k in 0..n {
            let mut acc1 = 0.0;
            let mut acc2 = 0.0;
            for h in 0..n {
                acc1 += bl.hhh[h][h][j][k] + bl.vhh[h][j][k][h];
                acc2 += bl.vvv[h][j][k][h] - bl.vhv[j][k][h][h];
            }
            ric1[j][k] = acc1;
            ric2[j][k] = acc2;
        }
    }
    (ric1, ric2)
}

/// The scalar that controls both diagonal Ricci blocks of the balanced
/// family. Writing `l`, `l'`, `l''` for the scale profile and its first
/// two derivatives and `b`, `b'` for the antidiagonal profile:
///
/// ```text
/// a = c l^2 (n-2) - 8 c l l' t - 4 c (n-1) l'^2 t^2 - 4 c l l'' t^2
///     - sqrt(2 c t) [ (n+1) l^2 + 2 l l' (2n+3) t
///                     + 4 l'^2 (n-1) t^2 + 4 l l'' t^2 ] b
///     - 2 sqrt(2 c) l t^{3/2} (l + 2 t l') b'
/// ```
pub fn ricci_scalar_a(base: &BaseSpace, fam: &Family, t: f64) -> f64 {
    debug_assert!(fam.has_canonical_scale() && fam.is_balanced());
    let n = base.dim() as f64;
    let c = base.curvature();
    let l = fam.lambda.eval(t);
    let lp = fam.lambda.d1(t);
    let lpp = fam.lambda.d2(t);
    let b1 = fam.b1.eval(t);
    let b1p = fam.b1.d1(t);
    let shape = l + 2.0 * t * lp;
    c * l * l * (n - 2.0)
        - 8.0 * c * l * lp * t
        - 4.0 * c * (n - 1.0) * lp * lp * t * t
        - 4.0 * c * l * lpp * t * t
        - (2.0 * c * t).sqrt()
            * ((n + 1.0) * l * l
                + 2.0 * l * lp * (2.0 * n + 3.0) * t
                + 4.0 * lp * lp * (n - 1.0) * t * t
                + 4.0 * l * lpp * t * t)
            * b1
        - 2.0 * (2.0 * c).sqrt() * l * t.powf(1.5) * shape * b1p
}

/// Coefficient of the base metric in the horizontal/horizontal Ricci
/// block: `a / (2 l (l + 2 t l'))`.
pub fn horizontal_g_coefficient(base: &BaseSpace, fam: &Family, t: f64) -> f64 {
    let l = fam.lambda.eval(t);
    let lp = fam.lambda.d1(t);
    ricci_scalar_a(base, fam, t) / (2.0 * l * (l + 2.0 * t * lp))
}

/// Coefficient of the inverse base metric in the vertical/vertical
/// Ricci block: `a / (4 c t l (l + 2 t l'))`.
pub fn vertical_g_coefficient(base: &BaseSpace, fam: &Family, t: f64) -> f64 {
    let c = base.curvature();
    let l = fam.lambda.eval(t);
    let lp = fam.lambda.d1(t);
    ricci_scalar_a(base, fam, t) / (4.0 * c * t * l * (l + 2.0 * t * lp))
}

/// Pointwise Einstein factor: the ratio of the metric coefficients of
/// the Ricci blocks to those of the metric blocks,
/// `a / (2 l^2 sqrt(2 c t) (l + 2 t l'))`. The structure is Einstein
/// exactly when this function of `t` is constant and the remaining
/// rank-one parts match, which the solved antidiagonal profile
/// arranges.
pub fn pointwise_einstein_factor(base: &BaseSpace, fam: &Family, t: f64) -> f64 {
    let c = base.curvature();
    let l = fam.lambda.eval(t);
    let lp = fam.lambda.d1(t);
    ricci_scalar_a(base, fam, t) / (2.0 * l * l * (2.0 * c * t).sqrt() * (l + 2.0 * t * lp))
}

/// Decompose both honest Ricci blocks into their metric and rank-one
/// coefficients: returns `((u1, v1), (u2, v2))` with
/// `ric1 = u1 g + v1 p (x) p` and `ric2 = u2 g^{-1} + v2 up (x) up`.
pub fn ricci_split(
    base: &BaseSpace,
    fam: &Family,
    x: &[f64],
    p: &[f64],
) -> ((f64, f64), (f64, f64)) {
    let (ric1, ric2) = ricci_blocks(base, fam, x, p);
    (split_lower(base, x, p, &ric1), split_upper(base, x, p, &ric2))
}

/// Largest mixed (horizontal/vertical) component of the honest Ricci
/// trace of a frame curvature table.
pub fn mixed_trace_residual(base: &BaseSpace, kf: &T4<f64>) -> f64 {
    let n = base.dim();
    let ric = ricci_frame(kf);
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max(ric[i][n + j].abs());
            worst = worst.max(ric[n + i][j].abs());
        }
    }
    worst
}

/// Largest deviation of the Ricci form from invariance under the
/// complex structure: `max |Ric(J X, J Y) - Ric(X, Y)|` over the frame.
pub fn j_invariance_residual(base: &BaseSpace, fam: &Family, x: &[f64], p: &[f64]) -> f64 {
    let dim = 2 * base.dim();
    let kf = curvature_frame(base, fam, x, p);
    let ric = ricci_frame(&kf);
    let jm = j_matrix(base, fam, x, p);
    let mut worst = 0.0_f64;
    for v in 0..dim {
        for z in 0..dim {
            let mut twisted = 0.0;
            for a in 0..dim {
                for b in 0..dim {
                    twisted += ric[a][b] * jm[a][v] * jm[b][z];
                }
            }
            worst = worst.max((twisted - ric[v][z]).abs());
        }
    }
    worst
}
