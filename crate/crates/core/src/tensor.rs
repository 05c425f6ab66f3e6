//! Small dense matrix / tensor helpers, generic over the AD scalar type.
//!
//! Dimensions here are tiny (the base dimension n is 2–4, phase space 2n),
//! so everything is plain `Vec`-backed with straightforward loops.

use crate::ad::Real;
use crate::error::{GeometryError, Result};

pub type Mat<R> = Vec<Vec<R>>;
pub type T3<R> = Vec<Vec<Vec<R>>>;
pub type T4<R> = Vec<Vec<Vec<Vec<R>>>>;

pub fn mat_zeros<R: Real>(rows: usize, cols: usize) -> Mat<R> {
    vec![vec![R::zero(); cols]; rows]
}

pub fn t3_zeros<R: Real>(n: usize) -> T3<R> {
    vec![vec![vec![R::zero(); n]; n]; n]
}

pub fn t4_zeros<R: Real>(n: usize) -> T4<R> {
    vec![vec![vec![vec![R::zero(); n]; n]; n]; n]
}

pub fn mat_identity<R: Real>(n: usize) -> Mat<R> {
    let mut m = mat_zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = R::one();
    }
    m
}

pub fn mat_mul<R: Real>(a: &Mat<R>, b: &Mat<R>) -> Mat<R> {
    let rows = a.len();
    let inner = b.len();
    let cols = b[0].len();
    let mut out = mat_zeros(rows, cols);
    for i in 0..rows {
        for k in 0..inner {
            let aik = a[i][k];
            for j in 0..cols {
                out[i][j] = out[i][j] + aik * b[k][j];
            }
        }
    }
    out
}

pub fn mat_vec<R: Real>(a: &Mat<R>, v: &[R]) -> Vec<R> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(R::zero(), |acc, (&m, &x)| acc + m * x)
        })
        .collect()
}

pub fn mat_sub<R: Real>(a: &Mat<R>, b: &Mat<R>) -> Mat<R> {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(&x, &y)| x - y).collect())
        .collect()
}

/// Largest absolute value among the primal parts of the entries.
pub fn mat_max_abs<R: Real>(a: &Mat<R>) -> f64 {
    a.iter()
        .flat_map(|row| row.iter())
        .map(|&x| x.value().abs())
        .fold(0.0, f64::max)
}

/// Largest absolute deviation from the identity matrix.
pub fn residual_from_identity<R: Real>(a: &Mat<R>) -> f64 {
    let mut worst = 0.0_f64;
    for (i, row) in a.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((x.value() - target).abs());
        }
    }
    worst
}

/// Largest absolute asymmetry `|a_ij - a_ji|`.
pub fn symmetry_residual<R: Real>(a: &Mat<R>) -> f64 {
    let n = a.len();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((a[i][j].value() - a[j][i].value()).abs());
        }
    }
    worst
}

/// Matrix inverse by Gaussian elimination with partial pivoting on the
/// primal magnitude. Works at any differentiation depth: derivative
/// components ride along through the row operations.
pub fn mat_inv<R: Real>(a: &Mat<R>) -> Result<Mat<R>> {
    let n = a.len();
    let mut aug: Vec<Vec<R>> = a.iter().map(|row| row.clone()).collect();
    let mut inv = mat_identity::<R>(n);
    for col in 0..n {
        let mut piv = col;
        let mut best = aug[col][col].value().abs();
        for r in (col + 1)..n {
            let cand = aug[r][col].value().abs();
            if cand > best {
                best = cand;
                piv = r;
            }
        }
        if best < 1e-200 {
            return Err(GeometryError::SingularMatrix { col, pivot: best });
        }
        aug.swap(col, piv);
        inv.swap(col, piv);
        let inv_piv = aug[col][col].recip();
        for j in 0..n {
            aug[col][j] = aug[col][j] * inv_piv;
            inv[col][j] = inv[col][j] * inv_piv;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            // Always apply the update: derivative components of a primal
            // zero can still be nonzero.
            let factor = aug[r][col];
            for j in 0..n {
                aug[r][j] = aug[r][j] - factor * aug[col][j];
                inv[r][j] = inv[r][j] - factor * inv[col][j];
            }
        }
    }
    Ok(inv)
}

/// Cholesky-based positive-definiteness test on the primal values.
pub fn is_positive_definite<R: Real>(a: &Mat<R>) -> bool {
    let n = a.len();
    let mut l = vec![vec![0.0_f64; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i][j].value();
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            if i == j {
                if s <= 0.0 {
                    return false;
                }
                l[i][j] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    true
}

/// Largest absolute primal entry of a rank-4 array.
pub fn t4_max_abs<R: Real>(a: &T4<R>) -> f64 {
    let mut worst = 0.0_f64;
    for b1 in a {
        for b2 in b1 {
            for b3 in b2 {
                for &x in b3 {
                    worst = worst.max(x.value().abs());
                }
            }
        }
    }
    worst
}

/// Largest absolute primal entry of a rank-3 array.
pub fn t3_max_abs<R: Real>(a: &T3<R>) -> f64 {
    let mut worst = 0.0_f64;
    for b1 in a {
        for b2 in b1 {
            for &x in b2 {
                worst = worst.max(x.value().abs());
            }
        }
    }
    worst
}
