//! The base manifold: a round space of constant positive sectional
//! curvature `c`, presented in a conformal coordinate chart.
//!
//! The chart covers everything needed here: metric, Christoffel symbols,
//! curvature tensor, and the fiberwise quantities (energy density, raised
//! covector, horizontal connection coefficients) on the cotangent bundle.

use crate::ad::{Dual, Real};
use crate::error::{GeometryError, Result};
use crate::tensor::{t3_zeros, t4_zeros, Mat, T3, T4};

/// A round base space of dimension `n >= 2` and curvature `c > 0`, in the
/// conformal chart where `g_ij = f(x)^2 delta_ij` with
/// `f = 1 / (1 + (c/4) |x|^2)`.
#[derive(Clone, Copy, Debug)]
pub struct BaseSpace {
    n: usize,
    c: f64,
}

impl BaseSpace {
    pub fn new(n: usize, c: f64) -> Result<Self> {
        if n < 2 {
            return Err(GeometryError::DimensionTooSmall(n));
        }
        if !(c > 0.0) {
            return Err(GeometryError::NonPositiveCurvature(c));
        }
        Ok(BaseSpace { n, c })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn curvature(&self) -> f64 {
        self.c
    }

    /// Validate the shape of a phase-space point and its distance from the
    /// zero section.
    pub fn check_point(&self, x: &[f64], p: &[f64]) -> Result<()> {
        if x.len() != self.n || p.len() != self.n {
            return Err(GeometryError::BadPointShape {
                x_len: x.len(),
                p_len: p.len(),
                n: self.n,
            });
        }
        let t = self.energy(x, p);
        if t < 1e-12 {
            return Err(GeometryError::NearZeroSection(t));
        }
        Ok(())
    }

    /// Denominator `u = 1 + (c/4) |x|^2` of the conformal factor.
    fn chart_denom<R: Real>(&self, x: &[R]) -> R {
        let norm2 = x.iter().fold(R::zero(), |acc, &xi| acc + xi * xi);
        R::one() + norm2.scale(self.c / 4.0)
    }

    /// Conformal factor `f` with `g_ij = f^2 delta_ij`.
    pub fn conformal_factor<R: Real>(&self, x: &[R]) -> R {
        self.chart_denom(x).recip()
    }

    /// Metric components `g_ij`.
    pub fn metric<R: Real>(&self, x: &[R]) -> Mat<R> {
        let f2 = self.conformal_factor(x).powi(2);
        let mut g = crate::tensor::mat_zeros(self.n, self.n);
        for (i, row) in g.iter_mut().enumerate() {
            row[i] = f2;
        }
        g
    }

    /// Inverse metric components `g^ij`.
    pub fn metric_inv<R: Real>(&self, x: &[R]) -> Mat<R> {
        let u2 = self.chart_denom(x).powi(2);
        let mut g = crate::tensor::mat_zeros(self.n, self.n);
        for (i, row) in g.iter_mut().enumerate() {
            row[i] = u2;
        }
        g
    }

    /// Gradient `w_i = d_i ln f` of the log conformal factor.
    pub fn log_factor_gradient<R: Real>(&self, x: &[R]) -> Vec<R> {
        let u = self.chart_denom(x);
        x.iter()
            .map(|&xi| (xi.scale(-self.c / 2.0)) / u)
            .collect()
    }

    /// Christoffel symbols, layout `[k][i][j]` for the upper index `k`.
    ///
    /// In a conformal chart these collapse to
    /// `delta^k_i w_j + delta^k_j w_i - delta_ij w_k`.
    pub fn christoffel<R: Real>(&self, x: &[R]) -> T3<R> {
        let w = self.log_factor_gradient(x);
        let n = self.n;
        let mut gam = t3_zeros(n);
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut v = R::zero();
                    if k == i {
                        v = v + w[j];
                    }
                    if k == j {
                        v = v + w[i];
                    }
                    if i == j {
                        v = v - w[k];
                    }
                    gam[k][i][j] = v;
                }
            }
        }
        gam
    }

    /// Curvature tensor `[h][k][i][j]`, computed honestly from coordinate
    /// derivatives of the Christoffel symbols:
    /// `R^h_kij = d_i Gamma^h_jk - d_j Gamma^h_ik
    ///            + Gamma^h_il Gamma^l_jk - Gamma^h_jl Gamma^l_ik`.
    pub fn riemann<R: Real>(&self, x: &[R]) -> T4<R> {
        let n = self.n;
        // Coordinate derivatives of the Christoffel symbols via one AD
        // seed per direction: dgam[m][k][i][j] = d_m Gamma^k_ij.
        let mut dgam: Vec<T3<R>> = Vec::with_capacity(n);
        for m in 0..n {
            let seeded: Vec<Dual<R>> = x
                .iter()
                .enumerate()
                .map(|(j, &xi)| if j == m { Dual::var(xi) } else { Dual::lift(xi) })
                .collect();
            let gam_d = self.christoffel(&seeded);
            let mut slice = t3_zeros(n);
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        slice[k][i][j] = gam_d[k][i][j].du;
                    }
                }
            }
            dgam.push(slice);
        }
        let gam = self.christoffel(x);
        let mut r = t4_zeros(n);
        for h in 0..n {
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        let mut v = dgam[i][h][j][k] - dgam[j][h][i][k];
                        for l in 0..n {
                            v = v + gam[h][i][l] * gam[l][j][k] - gam[h][j][l] * gam[l][i][k];
                        }
                        r[h][k][i][j] = v;
                    }
                }
            }
        }
        r
    }

    /// The constant-curvature pattern `c (delta^h_i g_jk - delta^h_j g_ik)`
    /// that the honest curvature tensor must reproduce on a round base.
    pub fn riemann_round_pattern<R: Real>(&self, x: &[R]) -> T4<R> {
        let g = self.metric(x);
        let n = self.n;
        let mut r = t4_zeros(n);
        for h in 0..n {
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        let mut v = R::zero();
                        if h == i {
                            v = v + g[j][k];
                        }
                        if h == j {
                            v = v - g[i][k];
                        }
                        r[h][k][i][j] = v.scale(self.c);
                    }
                }
            }
        }
        r
    }

    /// Fiber energy density `t = (1/2) g^ik p_i p_k`.
    pub fn energy<R: Real>(&self, x: &[R], p: &[R]) -> R {
        let ginv = self.metric_inv(x);
        let mut acc = R::zero();
        for i in 0..self.n {
            for k in 0..self.n {
                acc = acc + ginv[i][k] * p[i] * p[k];
            }
        }
        acc.scale(0.5)
    }

    /// Raised covector `g^{0i} = g^{ih} p_h`.
    pub fn p_raised<R: Real>(&self, x: &[R], p: &[R]) -> Vec<R> {
        let ginv = self.metric_inv(x);
        (0..self.n)
            .map(|i| {
                (0..self.n).fold(R::zero(), |acc, h| acc + ginv[i][h] * p[h])
            })
            .collect()
    }

    /// Horizontal connection coefficients `[i][h]`: the fiberwise
    /// contraction `p_k Gamma^k_ih` entering the horizontal frame fields.
    pub fn gamma0<R: Real>(&self, x: &[R], p: &[R]) -> Mat<R> {
        let gam = self.christoffel(x);
        let n = self.n;
        let mut out = crate::tensor::mat_zeros(n, n);
        for i in 0..n {
            for h in 0..n {
                let mut acc = R::zero();
                for k in 0..n {
                    acc = acc + p[k] * gam[k][i][h];
                }
                out[i][h] = acc;
            }
        }
        out
    }

    /// Fiberwise contraction of the curvature tensor, layout `[k][i][j]`:
    /// `p_h R^h_kij`.
    pub fn r0<R: Real>(&self, x: &[R], p: &[R]) -> T3<R> {
        let riem = self.riemann(x);
        let n = self.n;
        let mut out = t3_zeros(n);
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut acc = R::zero();
                    for h in 0..n {
                        acc = acc + p[h] * riem[h][k][i][j];
                    }
                    out[k][i][j] = acc;
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max4(a: &T4<f64>) -> f64 {
        crate::tensor::t4_max_abs(a)
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(BaseSpace::new(1, 1.0).is_err());
        assert!(BaseSpace::new(2, 0.0).is_err());
        assert!(BaseSpace::new(2, -1.0).is_err());
    }

    #[test]
    fn conformal_metric_at_reference_point() {
        // n = 2, c = 1, x = (1, 1): u = 1.5, so g_11 = 1/1.5^2 = 4/9 and
        // w_i = -(c/2) x_i / u = -1/3.
        let b = BaseSpace::new(2, 1.0).unwrap();
        let x = [1.0, 1.0];
        let g = b.metric(&x);
        assert!((g[0][0] - 4.0 / 9.0).abs() < 1e-15);
        assert!((g[1][1] - 4.0 / 9.0).abs() < 1e-15);
        assert!(g[0][1].abs() < 1e-15);
        let w = b.log_factor_gradient(&x);
        assert!((w[0] + 1.0 / 3.0).abs() < 1e-15);
        let ginv = b.metric_inv(&x);
        assert!((ginv[0][0] - 2.25).abs() < 1e-15);
    }

    #[test]
    fn christoffel_symmetry_and_values() {
        let b = BaseSpace::new(3, 1.3).unwrap();
        let x = [0.3, -0.2, 0.5];
        let gam = b.christoffel(&x);
        let w = b.log_factor_gradient(&x);
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    assert!((gam[k][i][j] - gam[k][j][i]).abs() < 1e-15);
                }
            }
        }
        // Spot value: Gamma^0_01 = w_1.
        assert!((gam[0][0][1] - w[1]).abs() < 1e-15);
        // Gamma^0_11 = -w_0.
        assert!((gam[0][1][1] + w[0]).abs() < 1e-15);
    }

    #[test]
    fn curvature_matches_round_pattern() {
        for (n, c) in [(2usize, 2.0), (3usize, 0.7), (4usize, 1.9)] {
            let b = BaseSpace::new(n, c).unwrap();
            let x: Vec<f64> = (0..n).map(|i| 0.21 * (i as f64) - 0.33).collect();
            let honest = b.riemann(&x);
            let pattern = b.riemann_round_pattern(&x);
            let mut diff = 0.0_f64;
            for h in 0..n {
                for k in 0..n {
                    for i in 0..n {
                        for j in 0..n {
                            diff = diff.max((honest[h][k][i][j] - pattern[h][k][i][j]).abs());
                        }
                    }
                }
            }
            assert!(
                diff < 1e-13,
                "curvature deviates from round pattern by {diff} at n={n}, c={c}"
            );
            assert!(max4(&honest) > 0.1);
        }
    }

    #[test]
    fn energy_at_reference_point() {
        // n = 2, c = 1, x = (1,1), p = (1,0): g^11 = 2.25, t = 1.125.
        let b = BaseSpace::new(2, 1.0).unwrap();
        let t = b.energy(&[1.0, 1.0], &[1.0, 0.0]);
        assert!((t - 1.125).abs() < 1e-15);
        let up = b.p_raised(&[1.0, 1.0], &[1.0, 0.0]);
        assert!((up[0] - 2.25).abs() < 1e-15);
        assert!(up[1].abs() < 1e-15);
    }

    #[test]
    fn zero_section_is_rejected() {
        let b = BaseSpace::new(2, 1.0).unwrap();
        assert!(b.check_point(&[0.1, 0.2], &[0.0, 0.0]).is_err());
        assert!(b.check_point(&[0.1, 0.2], &[1.0, 0.0]).is_ok());
        assert!(b.check_point(&[0.1], &[1.0, 0.0]).is_err());
    }

    #[test]
    fn horizontal_coefficients_contract_christoffels() {
        let b = BaseSpace::new(2, 1.4).unwrap();
        let x = [0.4, -0.1];
        let p = [0.8, 0.3];
        let gam = b.christoffel(&x);
        let g0 = b.gamma0(&x, &p);
        for i in 0..2 {
            for h in 0..2 {
                let expect = p[0] * gam[0][i][h] + p[1] * gam[1][i][h];
                assert!((g0[i][h] - expect).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn contracted_curvature_annihilates_p() {
        // R^0_kij p^k-type contraction: r0[k][i][j] g^{0k} wedge-contracts
        // to zero against the raised covector by antisymmetry.
        let b = BaseSpace::new(3, 1.1).unwrap();
        let x = [0.2, 0.1, -0.3];
        let p = [0.5, -0.7, 0.2];
        let r0 = b.r0(&x, &p);
        let up = b.p_raised(&x, &p);
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = 0.0;
                for k in 0..3 {
                    acc += up[k] * r0[k][i][j];
                }
                assert!(acc.abs() < 1e-13);
            }
        }
    }
}
