//! Calculus in the adapted frame on the punctured cotangent bundle.
//!
//! Frame indices run over `0..2n`: index `a < n` denotes the horizontal
//! field (coordinate derivative corrected by the horizontal connection
//! coefficients), `a >= n` the vertical field along the fiber coordinate
//! `p_{a-n}`. This module provides the pieces every later computation
//! needs: coordinate/frame change-of-basis matrices, Lie brackets of the
//! frame fields, and directional derivatives of component functions along
//! frame fields.

use crate::ad::{Dual, Real};
use crate::base::BaseSpace;
use crate::tensor::{mat_zeros, Mat};

/// Coordinate components of the adapted frame fields, as the columns of a
/// `2n x 2n` matrix: rows index the coordinate basis (first the `n` base
/// coordinates, then the `n` fiber coordinates), columns the frame
/// fields.
pub fn frame_matrix<R: Real>(base: &BaseSpace, x: &[R], p: &[R]) -> Mat<R> {
    let n = base.dim();
    let g0 = base.gamma0(x, p);
    let mut a = mat_zeros(2 * n, 2 * n);
    for i in 0..n {
        // Horizontal field i: d/dx_i plus gamma0_{i h} d/dp_h.
        a[i][i] = R::one();
        for h in 0..n {
            a[n + h][i] = g0[i][h];
        }
        // Vertical field i: d/dp_i.
        a[n + i][n + i] = R::one();
    }
    a
}

/// Inverse of [`frame_matrix`], available in closed form: the horizontal
/// correction just flips sign.
pub fn frame_matrix_inv<R: Real>(base: &BaseSpace, x: &[R], p: &[R]) -> Mat<R> {
    let n = base.dim();
    let g0 = base.gamma0(x, p);
    let mut a = mat_zeros(2 * n, 2 * n);
    for i in 0..n {
        a[i][i] = R::one();
        for h in 0..n {
            a[n + h][i] = -g0[i][h];
        }
        a[n + i][n + i] = R::one();
    }
    a
}

/// Adapted components of the Lie bracket `[E_a, E_b]` of two frame
/// fields. Only vertical components ever appear:
/// horizontal-horizontal brackets produce the contracted curvature,
/// vertical-horizontal brackets produce Christoffel terms, and
/// vertical-vertical brackets vanish.
pub fn frame_bracket<R: Real>(
    base: &BaseSpace,
    x: &[R],
    p: &[R],
    a: usize,
    b: usize,
) -> Vec<R> {
    let n = base.dim();
    let mut out = vec![R::zero(); 2 * n];
    if a < n && b < n {
        let r0 = base.r0(x, p);
        for k in 0..n {
            out[n + k] = r0[k][a][b];
        }
    } else if a >= n && b < n {
        let gam = base.christoffel(x);
        let i = a - n;
        for k in 0..n {
            out[n + k] = gam[i][b][k];
        }
    } else if a < n && b >= n {
        let gam = base.christoffel(x);
        let j = b - n;
        for k in 0..n {
            out[n + k] = -gam[j][a][k];
        }
    }
    out
}

/// Directional derivatives of a vector of component functions along all
/// `2n` frame fields.
///
/// `eval` receives AD-seeded copies of `(x, p)` and returns the flattened
/// component values; the result `dir[d][k]` is the derivative of
/// component `k` along frame field `d`. Horizontal directions combine the
/// base-coordinate derivative with the fiber correction contracted
/// against the horizontal connection coefficients.
pub fn frame_gradients<R, F>(base: &BaseSpace, x: &[R], p: &[R], eval: F) -> Vec<Vec<R>>
where
    R: Real,
    F: Fn(&[Dual<R>], &[Dual<R>]) -> Vec<Dual<R>>,
{
    let n = base.dim();
    // Coordinate gradients first: seat one seed per coordinate.
    let mut dcoord: Vec<Vec<R>> = Vec::with_capacity(2 * n);
    for m in 0..(2 * n) {
        let xs: Vec<Dual<R>> = x
            .iter()
            .enumerate()
            .map(|(j, &v)| if m < n && j == m { Dual::var(v) } else { Dual::lift(v) })
            .collect();
        let ps: Vec<Dual<R>> = p
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
        dcoord.push(eval(&xs, &ps).into_iter().map(|d| d.du).collect());
    }
    let g0 = base.gamma0(x, p);
    let len = dcoord[0].len();
    let mut dir = vec![vec![R::zero(); len]; 2 * n];
    for d in 0..n {
        for k in 0..len {
            let mut v = dcoord[d][k];
            for h in 0..n {
                v = v + g0[d][h] * dcoord[n + h][k];
            }
            dir[d][k] = v;
        }
    }
    for d in n..(2 * n) {
        dir[d].clone_from(&dcoord[d]);
    }
    dir
}
