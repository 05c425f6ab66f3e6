//! The integrability (torsion) tensor of the almost complex structure:
//! `N(X, Y) = [JX, JY] - J[JX, Y] - J[X, JY] - [X, Y]`.
//!
//! Two independent evaluations are provided. The *bracket path* computes
//! `N` honestly from coordinate vector fields and AD Jacobians, knowing
//! nothing about the special shape of `J`. The *pattern path* evaluates
//! the closed two-term form the tensor must take for this family, driven
//! by the mismatch between `(A^2/2)`-scaled metric antisymmetrization and
//! the base curvature. On a round base the mismatch — and with it the
//! whole tensor — vanishes exactly at the canonical antidiagonal scale.

use crate::ad::{Dual, Real};
use crate::base::BaseSpace;
use crate::frame::{frame_matrix, frame_matrix_inv};
use crate::lift::{j_blocks, Family};
use crate::tensor::{mat_vec, mat_zeros, Mat};

/// The `2n x 2n` matrix of the almost complex structure in the adapted
/// frame: column `a` holds the frame components of `J E_a`.
pub fn j_matrix<R: Real>(base: &BaseSpace, fam: &Family, x: &[R], p: &[R]) -> Mat<R> {
    let n = base.dim();
    let (j1, j2) = j_blocks(base, fam, x, p);
    let mut m = mat_zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            // J (horizontal i) = J1_ij (vertical j).
            m[n + j][i] = j1[i][j];
            // J (vertical i) = -J2^ij (horizontal j).
            m[j][n + i] = -j2[i][j];
        }
    }
    m
}

/// Coordinate components of the field `z -> Frame(z) * (J(z))^k * v`,
/// for a constant adapted coefficient vector `v` and `k` either 0 or 1.
fn coord_field<R: Real>(
    base: &BaseSpace,
    fam: &Family,
    xs: &[R],
    ps: &[R],
    v_ad: &[f64],
    apply_j: bool,
) -> Vec<R> {
    let v: Vec<R> = v_ad.iter().map(|&c| R::from_f64(c)).collect();
    let w = if apply_j {
        mat_vec(&j_matrix(base, fam, xs, ps), &v)
    } else {
        v
    };
    mat_vec(&frame_matrix(base, xs, ps), &w)
}

/// Value and coordinate Jacobian of such a field at `(x, p)`.
fn field_jet(
    base: &BaseSpace,
    fam: &Family,
    x: &[f64],
    p: &[f64],
    v_ad: &[f64],
    apply_j: bool,
) -> (Vec<f64>, Mat<f64>) {
    let n = base.dim();
    let dim = 2 * n;
    let value = coord_field(base, fam, x, p, v_ad, apply_j);
    let mut jac = mat_zeros(dim, dim);
    for m in 0..dim {
        let xs: Vec<Dual<f64>> = x
            .iter()
            .enumerate()
            .map(|(j, &v)| if m < n && j == m { Dual::var(v) } else { Dual::lift(v) })
            .collect();
        let ps: Vec<Dual<f64>> = p
            .iter()
            .enumerate()
            .map(|(j, &v)| {
                if m >= n && j == m - n {
                    Dual::var(v)
                } else {
                    Dual::lift(v)
                }
            })
            .collect();
        let col = coord_field(base, fam, &xs, &ps, v_ad, apply_j);
        for w in 0..dim {
            jac[w][m] = col[w].du;
        }
    }
    (value, jac)
}

fn lie_bracket(u: &(Vec<f64>, Mat<f64>), v: &(Vec<f64>, Mat<f64>)) -> Vec<f64> {
    let dim = u.0.len();
    (0..dim)
        .map(|w| {
            (0..dim)
                .map(|z| u.0[z] * v.1[w][z] - v.0[z] * u.1[w][z])
                .sum()
        })
        .collect()
}

/// Honest value of `N(X, Y)` in adapted components, for constant adapted
/// coefficient vectors `X`, `Y`, via coordinate Lie brackets.
pub fn bracket_value(
    base: &BaseSpace,
    fam: &Family,
    x: &[f64],
    p: &[f64],
    x_ad: &[f64],
    y_ad: &[f64],
) -> Vec<f64> {
    let dim = 2 * base.dim();
    let xf = field_jet(base, fam, x, p, x_ad, false);
    let jxf = field_jet(base, fam, x, p, x_ad, true);
    let yf = field_jet(base, fam, x, p, y_ad, false);
    let jyf = field_jet(base, fam, x, p, y_ad, true);
    let b_jx_jy = lie_bracket(&jxf, &jyf);
    let b_jx_y = lie_bracket(&jxf, &yf);
    let b_x_jy = lie_bracket(&xf, &jyf);
    let b_x_y = lie_bracket(&xf, &yf);
    // Apply J pointwise to the middle brackets: in coordinates this is
    // Frame * J_ad * Frame^{-1}.
    let a = frame_matrix(base, x, p);
    let a_inv = frame_matrix_inv(base, x, p);
    let j_ad = j_matrix(base, fam, x, p);
    let apply_j = |w: &[f64]| -> Vec<f64> {
        mat_vec(&a, &mat_vec(&j_ad, &mat_vec(&a_inv, w)))
    };
    let j_b_jx_y = apply_j(&b_jx_y);
    let j_b_x_jy = apply_j(&b_x_jy);
    let n_coord: Vec<f64> = (0..dim)
        .map(|w| b_jx_jy[w] - j_b_jx_y[w] - j_b_x_jy[w] - b_x_y[w])
        .collect();
    mat_vec(&a_inv, &n_coord)
}

/// Closed pattern value of `N(E_a, E_b)` on a frame pair, in adapted
/// components.
pub fn pattern_pair(
    base: &BaseSpace,
    fam: &Family,
    x: &[f64],
    p: &[f64],
    a: usize,
    b: usize,
) -> Vec<f64> {
    let n = base.dim();
    let g = base.metric(x);
    let r0 = base.r0(x, p);
    let half_a2 = 0.5 * fam.a_coeff(base.curvature()).powi(2);
    // Contracted mismatch tensor: the covector contraction of
    // (A^2/2)(delta^h_i g_jk - delta^h_j g_ik) - R^h_kij.
    let mism = |k: usize, i: usize, j: usize| -> f64 {
        half_a2 * (p[i] * g[j][k] - p[j] * g[i][k]) - r0[k][i][j]
    };
    let (_, j2) = j_blocks(base, fam, x, p);
    let mut out = vec![0.0; 2 * n];
    if a < n && b < n {
        // N(horizontal, horizontal): vertical output with mismatch
        // coefficients directly.
        for k in 0..n {
            out[n + k] = mism(k, a, b);
        }
    } else if a < n && b >= n {
        // N(horizontal i, vertical j): horizontal output, the mismatch
        // contracted twice with the vertical block.
        let (i, j) = (a, b - n);
        for k in 0..n {
            let mut acc = 0.0;
            for l in 0..n {
                for r in 0..n {
                    acc += j2[k][l] * j2[j][r] * mism(l, i, r);
                }
            }
            out[k] = acc;
        }
    } else if a >= n && b < n {
        let flipped = pattern_pair(base, fam, x, p, b, a);
        for (o, f) in out.iter_mut().zip(flipped) {
            *o = -f;
        }
    } else {
        // N(vertical, vertical): vertical output, contracted twice.
        let (i, j) = (a - n, b - n);
        for k in 0..n {
            let mut acc = 0.0;
            for r in 0..n {
                for l in 0..n {
                    acc += j2[i][r] * j2[j][l] * mism(k, l, r);
                }
            }
            out[n + k] = acc;
        }
    }
    out
}

/// Largest honest `N` component over all frame pairs.
pub fn integrability_residual(base: &BaseSpace, fam: &Family, x: &[f64], p: &[f64]) -> f64 {
    let dim = 2 * base.dim();
    let mut worst = 0.0_f64;
    for a in 0..dim {
        for b in 0..dim {
            let mut e_a = vec![0.0; dim];
            e_a[a] = 1.0;
            let mut e_b = vec![0.0; dim];
            e_b[b] = 1.0;
            let v = bracket_value(base, fam, x, p, &e_a, &e_b);
            for c in v {
                worst = worst.max(c.abs());
            }
        }
    }
    worst
}

/// Largest deviation between the honest bracket path and the closed
/// pattern over all frame pairs.
pub fn pattern_cross_residual(base: &BaseSpace, fam: &Family, x: &[f64], p: &[f64]) -> f64 {
    let dim = 2 * base.dim();
    let mut worst = 0.0_f64;
    for a in 0..dim {
        for b in 0..dim {
            let mut e_a = vec![0.0; dim];
            e_a[a] = 1.0;
            let mut e_b = vec![0.0; dim];
            e_b[b] = 1.0;
            let honest = bracket_value(base, fam, x, p, &e_a, &e_b);
            let pattern = pattern_pair(base, fam, x, p, a, b);
            for (h, q) in honest.iter().zip(&pattern) {
                worst = worst.max((h - q).abs());
            }
        }
    }
    worst
}
