//! The Levi-Civita connection of the lifted metric in the adapted frame.
//!
//! The connection is described by three coefficient families beyond the
//! base Christoffel symbols:
//!
//! * `Q^{ij}_h` — vertical derivative of a vertical field (vertical output),
//! * `P^{hi}_j` — the mixed derivatives (horizontal output),
//! * `S_{hij}` — vertical part of the horizontal/horizontal derivative,
//!
//! with the full frame table
//!
//! ```text
//! nabla_{V^i} V^j = Q^{ij}_h V^h
//! nabla_{H_i} V^j = -Gamma^j_{ih} V^h + P^{hj}_i H_h
//! nabla_{V^i} H_j = P^{hi}_j H_h
//! nabla_{H_i} H_j = Gamma^h_{ij} H_h + S_{hij} V^h
//! ```
//!
//! (`H` horizontal, `V` vertical). Two independent evaluations are
//! provided: the *generic* route, which applies the fiberwise
//! divergence/curvature formulas to the metric blocks and their
//! derivatives, and the *explicit* route, a fully expanded closed form
//! for the balanced family on the round base. Both are cross-checked
//! against the defining properties (metric compatibility, zero torsion,
//! the first-order product identity) computed honestly from directional
//! derivatives and frame brackets.

use crate::ad::{Dual, Real};
use crate::base::BaseSpace;
use crate::frame::{frame_bracket, frame_gradients};
use crate::lift::{inverse_blocks, metric_blocks, Family};
use crate::tensor::{mat_zeros, t3_zeros, Mat, T3};

/// The three coefficient families of the lifted connection.
#[derive(Clone, Debug)]
pub struct ConnectionCoeffs<R> {
    /// `q[i][j][h] = Q^{ij}_h`.
    pub q: T3<R>,
    /// `p[h][i][j] = P^{hi}_j`.
    pub p: T3<R>,
    /// `s[h][i][j] = S_{hij}`.
    pub s: T3<R>,
}

/// Fiber partials of both metric blocks: `dg1[k][i][j]` and
/// `dg2[k][i][j]` are the derivatives along `p_k` of `G1_ij`, `G2^ij`.
fn fiber_partials<R: Real>(
    base: &BaseSpace,
    fam: &Family,
    x: &[R],
    p: &[R],
) -> (Vec<Mat<R>>, Vec<Mat<R>>) {
    let n = base.dim();
    let mut dg1 = Vec::with_capacity(n);
    let mut dg2 = Vec::with_capacity(n);
    let xs: Vec<Dual<R>> = x.iter().map(|&v| Dual::lift(v)).collect();
    for k in 0..n {
        let ps: Vec<Dual<R>> = p
            .iter()
            .enumerate()
            .map(|(j, &v)| if j == k { Dual::var(v) } else { Dual::lift(v) })
            .collect();
        let (g1, g2) = metric_blocks(base, fam, &xs, &ps);
        let mut m1 = mat_zeros(n, n);
        let mut m2 = mat_zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m1[i][j] = g1[i][j].du;
                m2[i][j] = g2[i][j].du;
            }
        }
        dg1.push(m1);
        dg2.push(m2);
    }
    (dg1, dg2)
}

/// Generic evaluation of the connection coefficients from the metric
/// blocks, their fiber derivatives, their inverses, and the contracted
/// base curvature:
///
/// ```text
/// Q^{ij}_h = 1/2 H2_{hk} (d^i G2^{jk} + d^j G2^{ik} - d^k G2^{ij})
/// P^{hi}_j = 1/2 H1^{hk} (d^i G1_{jk} - G2^{il} R0_{ljk})
/// S_{hij}  = -1/2 H2_{hk} d^k G1_{ij} + 1/2 R0_{hij}
/// ```
pub fn qps_generic<R: Real>(
    base: &BaseSpace,
    fam: &Family,
    x: &[R],
    p: &[R],
) -> ConnectionCoeffs<R> {
    let n = base.dim();
    let (dg1, dg2) = fiber_partials(base, fam, x, p);
    let (h1, h2) = inverse_blocks(base, fam, x, p);
    let (_, g2) = metric_blocks(base, fam, x, p);
    let r0 = base.r0(x, p);

    let mut q = t3_zeros(n);
    let mut pc = t3_zeros(n);
    let mut s = t3_zeros(n);
    for i in 0..n {
        for j in 0..n {
            for h in 0..n {
                let mut acc = R::zero();
                for k in 0..n {
                    acc = acc + h2[h][k] * (dg2[i][j][k] + dg2[j][i][k] - dg2[k][i][j]);
                }
                q[i][j][h] = acc.scale(0.5);
            }
        }
    }
    for h in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut acc = R::zero();
                for k in 0..n {
                    let mut curv = R::zero();
                    for l in 0..n {
                        curv = curv + g2[i][l] * r0[l][j][k];
                    }
                    acc = acc + h1[h][k] * (dg1[i][j][k] - curv);
                }
                pc[h][i][j] = acc.scale(0.5);
            }
        }
    }
    for h in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut acc = R::zero();
                for k in 0..n {
                    acc = acc + h2[h][k] * dg1[k][i][j];
                }
                s[h][i][j] = acc.scale(-0.5) + r0[h][i][j].scale(0.5);
            }
        }
    }
    ConnectionCoeffs { q, p: pc, s }
}

/// Fully expanded closed form of the connection coefficients for the
/// balanced family on the round base. Requires the canonical antidiagonal
/// scale and the balanced `mu = lambda'` mode.
pub fn qps_explicit<R: Real>(
    base: &BaseSpace,
    fam: &Family,
    x: &[R],
    p: &[R],
) -> ConnectionCoeffs<R> {
    debug_assert!(fam.has_canonical_scale() && fam.is_balanced());
    let n = base.dim();
    let c = base.curvature();
    let sc = c.sqrt();
    let s2c = (2.0 * c).sqrt();
    let sq2 = 2.0_f64.sqrt();

    let t = base.energy(x, p);
    let st = t.sqrt();
    let lam = fam.lambda.eval(t);
    let lamp = fam.lambda.d1(t);
    let lampp = fam.lambda.d2(t);
    let b1 = fam.b1.eval(t);
    let b1p = fam.b1.d1(t);

    let g = base.metric(x);
    let gi = base.metric_inv(x);
    let up = base.p_raised(x, p);

    // sqrt(c) + sqrt(2t) b1 and lambda + 2t lambda'.
    let sigma = R::from_f64(sc) + st.scale(sq2) * b1;
    let shape = lam + t.scale(2.0) * lamp;

    // Vertical-vertical coefficients.
    let q1 = (R::from_f64(sc) - st.scale(sq2) * b1) / t.scale(4.0 * sc);
    let q2 = -(lam - t.scale(2.0) * lamp) / (t.scale(4.0) * lam);
    let q3_num = lam * (b1 * b1 * lam + lamp.scale(c))
        + (lam * (b1 * lamp - b1p * lam)).scale(s2c) * st
        + (b1 * b1 * lam * lamp - (lamp * lamp).scale(2.0 * c) + (lam * lampp).scale(c))
            .scale(2.0)
            * t
        + (b1 * lam * lampp - (b1 * lamp * lamp).scale(2.0) - b1p * lam * lamp)
            .scale(2.0 * s2c)
            * st
            * t;
    let q3 = q3_num / (t.scale(4.0 * sc) * lam * sigma * shape);

    // Mixed coefficients.
    let p1 = (lam.scale(-sc)
        + b1 * lam * st.scale(sq2)
        + lamp.scale(2.0 * sc) * t
        + b1 * lamp * st.scale(2.0 * sq2) * t)
        / (lam * t.scale(4.0 * sc));
    let p2 = t.scale(4.0).recip();
    let p3 = shape / (t.scale(4.0) * lam);
    let p4_num = lam * (lamp.scale(c) - b1 * b1 * lam)
        + (b1p * lam * lam).scale(s2c) * st
        - ((b1 * b1 * lam * lamp).scale(2.0) + (lamp * lamp).scale(2.0 * c)
            - (lam * lampp).scale(c))
            .scale(2.0)
            * t
        + (b1p * lam * lamp - (b1 * lamp * lamp).scale(3.0) + b1 * lam * lampp)
            .scale(2.0 * s2c)
            * st
            * t
        - (b1 * b1 * lamp * lamp).scale(4.0) * t * t;
    let p4 = p4_num
        / ((R::from_f64(s2c) + b1 * st.scale(2.0)) * lam * t.scale(2.0 * s2c) * shape);

    // Horizontal-horizontal vertical coefficients.
    let s1 = sigma.scale(-0.5 * sc);
    let wave = b1 * lam * st.scale(sq2) + lamp.scale(2.0 * sc) * t
        + b1 * lamp * st.scale(2.0 * sq2) * t;
    let s2 = (lam.scale(sc) - wave).scale(sc) / lam.scale(2.0);
    let s3 = -(lam.scale(sc) + wave).scale(sc) / lam.scale(2.0);
    let s4_num = lam * ((b1 * b1 * lam).scale(2.0) + lamp.scale(c))
        + lam * (lam * b1p + (lamp * b1).scale(4.0)).scale(s2c) * st
        + (lam * lam * b1 * b1p + (lam * lamp * b1 * b1).scale(5.0)
            - (lamp * lamp).scale(2.0 * c)
            + (lam * lampp).scale(c))
            .scale(2.0)
            * t
        + (lam * lamp * b1p - (lamp * lamp * b1).scale(2.0) + (lam * lampp * b1).scale(2.0))
            .scale(2.0 * s2c)
            * st
            * t
        + lam * b1 * (lamp * b1p + lampp * b1).scale(4.0) * t * t;
    let s4 = -s4_num / (lam * shape).scale(2.0);

    let mut q = t3_zeros(n);
    let mut pc = t3_zeros(n);
    let mut s = t3_zeros(n);
    for i in 0..n {
        for j in 0..n {
            for h in 0..n {
                let mut v = q1 * gi[i][j] * p[h] + q3 * up[i] * up[j] * p[h];
                if i == h {
                    v = v + q2 * up[j];
                }
                if j == h {
                    v = v + q2 * up[i];
                }
                q[i][j][h] = v;
            }
        }
    }
    for h in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut v = p1 * gi[h][i] * p[j] + p4 * up[h] * up[i] * p[j];
                if i == j {
                    v = v + p2 * up[h];
                }
                if h == j {
                    v = v + p3 * up[i];
                }
                pc[h][i][j] = v;
            }
        }
    }
    for h in 0..n {
        for i in 0..n {
            for j in 0..n {
                s[h][i][j] = s1 * g[i][j] * p[h]
                    + s2 * g[h][j] * p[i]
                    + s3 * g[h][i] * p[j]
                    + s4 * p[h] * p[i] * p[j];
            }
        }
    }
    ConnectionCoeffs { q, p: pc, s }
}

/// Largest entrywise difference between the generic and explicit
/// evaluations of the connection coefficients.
pub fn explicit_vs_generic_residual(
    base: &BaseSpace,
    fam: &Family,
    x: &[f64],
    p: &[f64],
) -> f64 {
    let gen = qps_generic(base, fam, x, p);
    let exp = qps_explicit(base, fam, x, p);
    let n = base.dim();
    let mut worst = 0.0_f64;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                worst = worst.max((gen.q[a][b][c] - exp.q[a][b][c]).abs());
                worst = worst.max((gen.p[a][b][c] - exp.p[a][b][c]).abs());
                worst = worst.max((gen.s[a][b][c] - exp.s[a][b][c]).abs());
            }
        }
    }
    worst
}

/// Frame coefficients of `nabla_{E_a} E_b` (length `2n`), assembled from
/// the coefficient table.
pub fn covariant_frame<R: Real>(
    base: &BaseSpace,
    coeffs: &ConnectionCoeffs<R>,
    x: &[R],
    a: usize,
    b: usize,
) -> Vec<R> {
    let n = base.dim();
    let mut out = vec![R::zero(); 2 * n];
    if a < n && b < n {
        let gam = base.christoffel(x);
        for h in 0..n {
            out[h] = gam[h][a][b];
            out[n + h] = coeffs.s[h][a][b];
        }
    } else if a < n && b >= n {
        let gam = base.christoffel(x);
        let j = b - n;
        for h in 0..n {
            out[h] = coeffs.p[h][j][a];
            out[n + h] = -gam[j][a][h];
        }
    } else if a >= n && b < n {
        let i = a - n;
        for h in 0..n {
            out[h] = coeffs.p[h][i][b];
        }
    } else {
        let (i, j) = (a - n, b - n);
        for h in 0..n {
            out[n + h] = coeffs.q[i][j][h];
        }
    }
    out
}

/// Frame components of the lifted metric over the full `2n` frame.
pub fn metric_frame<R: Real>(base: &BaseSpace, fam: &Family, x: &[R], p: &[R]) -> Mat<R> {
    let n = base.dim();
    let (g1, g2) = metric_blocks(base, fam, x, p);
    let mut g = mat_zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            g[i][j] = g1[i][j];
            g[n + i][n + j] = g2[i][j];
        }
    }
    g
}

/// Largest component of the covariant derivative of the metric over all
/// frame triples:
/// `(nabla_{E_a} G)(E_b, E_c) = E_a G(E_b, E_c) - G(nabla_a E_b, E_c)
///  - G(E_b, nabla_a E_c)`.
pub fn metric_compatibility_residual(
    base: &BaseSpace,
    fam: &Family,
    x: &[f64],
    p: &[f64],
    coeffs: &ConnectionCoeffs<f64>,
) -> f64 {
    let n = base.dim();
    let dim = 2 * n;
    let g = metric_frame(base, fam, x, p);
    let grads = frame_gradients(base, x, p, |xs, ps| {
        metric_frame::<Dual<f64>>(base, fam, xs, ps)
            .into_iter()
            .flatten()
            .collect()
    });
    let mut nabla = vec![vec![Vec::new(); dim]; dim];
    for a in 0..dim {
        for b in 0..dim {
            nabla[a][b] = covariant_frame(base, coeffs, x, a, b);
        }
    }
    let pair = |w: &[f64], c: usize| -> f64 { (0..dim).map(|k| w[k] * g[k][c]).sum() };
    let pair_r = |b: usize, w: &[f64]| -> f64 { (0..dim).map(|k| g[b][k] * w[k]).sum() };
    let mut worst = 0.0_f64;
    for a in 0..dim {
        for b in 0..dim {
            for c in 0..dim {
                let v = grads[a][b * dim + c] - pair(&nabla[a][b], c) - pair_r(b, &nabla[a][c]);
                worst = worst.max(v.abs());
            }
        }
    }
    worst
}

/// Largest frame component of the torsion
/// `T(E_a, E_b) = nabla_a E_b - nabla_b E_a - [E_a, E_b]`.
pub fn torsion_residual(
    base: &BaseSpace,
    coeffs: &ConnectionCoeffs<f64>,
    x: &[f64],
    p: &[f64],
) -> f64 {
    let n = base.dim();
    let dim = 2 * n;
    let mut worst = 0.0_f64;
    for a in 0..dim {
        for b in 0..dim {
            let fwd = covariant_frame(base, coeffs, x, a, b);
            let back = covariant_frame(base, coeffs, x, b, a);
            let br = frame_bracket(base, x, p, a, b);
            for k in 0..dim {
                worst = worst.max((fwd[k] - back[k] - br[k]).abs());
            }
        }
    }
    worst
}

/// Largest deviation in the first-order product identity
/// `2 G(nabla_a E_b, E_c) = E_a G(b,c) + E_b G(a,c) - E_c G(a,b)
///  + G([a,b],c) - G([a,c],b) - G([b,c],a)`
/// over all frame triples.
pub fn product_rule_residual(
    base: &BaseSpace,
    fam: &Family,
    x: &[f64],
    p: &[f64],
    coeffs: &ConnectionCoeffs<f64>,
) -> f64 {
    let n = base.dim();
    let dim = 2 * n;
    let g = metric_frame(base, fam, x, p);
    let grads = frame_gradients(base, x, p, |xs, ps| {
        metric_frame::<Dual<f64>>(base, fam, xs, ps)
            .into_iter()
            .flatten()
            .collect()
    });
    let pair = |w: &[f64], c: usize| -> f64 { (0..dim).map(|k| w[k] * g[k][c]).sum() };
    let mut worst = 0.0_f64;
    for a in 0..dim {
        for b in 0..dim {
            let nab = covariant_frame(base, coeffs, x, a, b);
            for c in 0..dim {
                let lhs = 2.0 * pair(&nab, c);
                let rhs = grads[a][b * dim + c] + grads[b][a * dim + c] - grads[c][a * dim + b]
                    + pair(&frame_bracket(base, x, p, a, b), c)
                    - pair(&frame_bracket(base, x, p, a, c), b)
                    - pair(&frame_bracket(base, x, p, b, c), a);
                worst = worst.max((lhs - rhs).abs());
            }
        }
    }
    worst
}
