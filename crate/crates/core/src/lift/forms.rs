//! The fundamental two-form of the lifted Hermitian structure and its
//! exterior derivative.
//!
//! The two-form is `phi(X, Y) = G(X, JY)`. Its exterior derivative is
//! evaluated honestly with the invariant first-order formula on frame
//! fields (directional derivatives plus Lie-bracket corrections), and is
//! compared against the closed two-term pattern it must equal. The
//! structure is Kahler precisely when the derivative vanishes, which
//! happens exactly in the balanced mode `mu = lambda'`.

use crate::ad::{Dual, Real};
use crate::base::BaseSpace;
use crate::frame::{frame_bracket, frame_gradients};
use crate::lift::{fundamental_form_mixed, Family};
use crate::tensor::{mat_zeros, Mat, T3};

/// Components `phi(E_a, E_b)` of the fundamental form over the full
/// adapted frame (`2n x 2n`, antisymmetric, mixed blocks only).
pub fn form_components<R: Real>(
    base: &BaseSpace,
    fam: &Family,
    x: &[R],
    p: &[R],
) -> Mat<R> {
    let n = base.dim();
    let mixed = fundamental_form_mixed(base, fam, x, p);
    let mut phi = mat_zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            // phi(vertical i, horizontal j) = mixed[i][j].
            phi[n + i][j] = mixed[i][j];
            phi[j][n + i] = -mixed[i][j];
        }
    }
    phi
}

/// Honest exterior derivative of the fundamental form on frame triples:
/// `d phi(X,Y,Z) = X phi(Y,Z) - Y phi(X,Z) + Z phi(X,Y)
///  - phi([X,Y],Z) + phi([X,Z],Y) - phi([Y,Z],X)`.
///
/// Returns the full `(2n)^3` array of values on frame fields.
pub fn exterior_derivative(base: &BaseSpace, fam: &Family, x: &[f64], p: &[f64]) -> T3<f64> {
    let n = base.dim();
    let dim = 2 * n;
    let phi = form_components(base, fam, x, p);
    // Directional derivatives of every phi component along every frame
    // field: grads[d][a * dim + b] = E_d(phi(E_a, E_b)).
    let grads = frame_gradients(base, x, p, |xs, ps| {
        let m = form_components::<Dual<f64>>(base, fam, xs, ps);
        m.into_iter().flatten().collect()
    });
    let d_phi = |d: usize, a: usize, b: usize| grads[d][a * dim + b];
    // Brackets of all frame pairs.
    let mut brackets = vec![vec![Vec::new(); dim]; dim];
    for a in 0..dim {
        for b in 0..dim {
            brackets[a][b] = frame_bracket(base, x, p, a, b);
        }
    }
    let phi_vec = |w: &[f64], c: usize| -> f64 {
        (0..dim).map(|k| w[k] * phi[k][c]).sum()
    };
    let mut out = vec![vec![vec![0.0; dim]; dim]; dim];
    for a in 0..dim {
        for b in 0..dim {
            for c in 0..dim {
                out[a][b][c] = d_phi(a, b, c) - d_phi(b, a, c) + d_phi(c, a, b)
                    - phi_vec(&brackets[a][b], c)
                    + phi_vec(&brackets[a][c], b)
                    - phi_vec(&brackets[b][c], a);
            }
        }
    }
    out
}

/// The closed two-term pattern the exterior derivative must equal: it is
/// supported on triples with exactly two vertical and one horizontal
/// field, where
/// `d phi(vertical a, vertical b, horizontal c)
///   = (lambda' - mu)(g0^a delta^b_c - g0^b delta^a_c)`,
/// extended to all index orders by antisymmetry.
pub fn exterior_derivative_pattern(
    base: &BaseSpace,
    fam: &Family,
    x: &[f64],
    p: &[f64],
) -> T3<f64> {
    let n = base.dim();
    let dim = 2 * n;
    let t = base.energy(x, p);
    let gap = fam.lambda.d1(t) - fam.mu_eval(t);
    let up = base.p_raised(x, p);
    let mut out = vec![vec![vec![0.0; dim]; dim]; dim];
    // Even permutations of (0,1,2) get +, odd get -.
    const PERMS: [([usize; 3], f64); 6] = [
        ([0, 1, 2], 1.0),
        ([1, 2, 0], 1.0),
        ([2, 0, 1], 1.0),
        ([0, 2, 1], -1.0),
        ([1, 0, 2], -1.0),
        ([2, 1, 0], -1.0),
    ];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let mut val = 0.0;
                if b == c {
                    val += gap * up[a];
                }
                if a == c {
                    val -= gap * up[b];
                }
                if val == 0.0 {
                    continue;
                }
                let idx = [n + a, n + b, c];
                for (perm, sign) in PERMS {
                    out[idx[perm[0]]][idx[perm[1]]][idx[perm[2]]] = sign * val;
                }
            }
        }
    }
    out
}

/// Largest absolute value of the exterior derivative over all frame
/// triples; zero exactly when the structure is Kahler.
pub fn closedness_residual(base: &BaseSpace, fam: &Family, x: &[f64], p: &[f64]) -> f64 {
    crate::tensor::t3_max_abs(&exterior_derivative(base, fam, x, p))
}

/// Largest deviation of the honest exterior derivative from the closed
/// two-term pattern.
pub fn pattern_residual(base: &BaseSpace, fam: &Family, x: &[f64], p: &[f64]) -> f64 {
    let honest = exterior_derivative(base, fam, x, p);
    let pattern = exterior_derivative_pattern(base, fam, x, p);
    let dim = honest.len();
    let mut worst = 0.0_f64;
    for a in 0..dim {
        for b in 0..dim {
            for c in 0..dim {
                worst = worst.max((honest[a][b][c] - pattern[a][b][c]).abs());
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{B1Curve, Curve};
    use crate::lift::Family;

    fn point() -> (Vec<f64>, Vec<f64>) {
        (vec![0.35, -0.15], vec![0.85, 0.4])
    }

    #[test]
    fn balanced_mode_is_closed() {
        let base = BaseSpace::new(2, 1.6).unwrap();
        let fam = Family::balanced(
            Curve::Poly(vec![1.0, 0.2, 0.04]),
            B1Curve::Explicit(Curve::Poly(vec![0.3, -0.05])),
        );
        let (x, p) = point();
        assert!(closedness_residual(&base, &fam, &x, &p) < 1e-12);
    }

    #[test]
    fn unbalanced_mode_matches_pattern() {
        // lambda' = 0.2 + 0.08 t; choosing mu = 1.2 + 0.08 t makes the
        // gap (lambda' - mu) identically -1, so the exterior derivative
        // is visibly nonzero and must match the two-term pattern exactly.
        let base = BaseSpace::new(2, 1.6).unwrap();
        let fam = Family::with_mu(
            Curve::Poly(vec![1.0, 0.2, 0.04]),
            Curve::Poly(vec![1.2, 0.08]),
            B1Curve::Explicit(Curve::constant(0.25)),
        );
        let (x, p) = point();
        let residual = closedness_residual(&base, &fam, &x, &p);
        assert!(residual > 1e-2, "expected a visibly non-closed form");
        assert!(pattern_residual(&base, &fam, &x, &p) < 1e-12);
    }

    #[test]
    fn antisymmetry_of_honest_derivative() {
        let base = BaseSpace::new(2, 0.9).unwrap();
        let fam = Family::with_mu(
            Curve::Poly(vec![1.0, 0.1]),
            Curve::constant(0.4),
            B1Curve::Explicit(Curve::constant(0.1)),
        );
        let (x, p) = point();
        let d = exterior_derivative(&base, &fam, &x, &p);
        let dim = d.len();
        for a in 0..dim {
            for b in 0..dim {
                for c in 0..dim {
                    assert!((d[a][b][c] + d[b][a][c]).abs() < 1e-12);
                    assert!((d[a][b][c] + d[a][c][b]).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn three_dimensional_balanced_case() {
        let base = BaseSpace::new(3, 1.0).unwrap();
        let fam = Family::balanced(
            Curve::Exp { amp: 1.0, rate: 0.15 },
            B1Curve::Explicit(Curve::PowerSum(vec![(0.2, -0.5)])),
        );
        let x = vec![0.2, 0.1, -0.25];
        let p = vec![0.6, -0.3, 0.45];
        assert!(closedness_residual(&base, &fam, &x, &p) < 1e-12);
    }
}
