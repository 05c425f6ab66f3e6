//! Curvature of the lifted metric: frame-block closed forms, an
//! independent coordinate-route evaluation, the holomorphic sectional
//! function, and the covariant derivative of the curvature operator.
//!
//! Frame components are stored as `kf[w][z][u][v]` = component along
//! `E_w` of `K(E_u, E_v) E_z`, where the `2n` frame fields are the `n`
//! horizontal fields followed by the `n` vertical ones and
//! `K(U, V) W = nabla_U nabla_V W - nabla_V nabla_U W - nabla_{[U,V]} W`.

use crate::ad::{Dual, Real};
use crate::base::BaseSpace;
use crate::connection::{covariant_frame, metric_frame, qps_generic, ConnectionCoeffs};
use crate::frame::{frame_gradients, frame_matrix, frame_matrix_inv};
use crate::lift::nijenhuis::j_matrix;
use crate::lift::{metric_blocks, Family};
use crate::tensor::{mat_inv, mat_vec, t3_zeros, t4_zeros, Mat, T3, T4};

/// The six nonzero block families of the curvature operator in the
/// adapted frame, indexed by the type of the two inputs and of the
/// argument (`h` horizontal, `v` vertical). Each block also fixes the
/// output type: `hhh` and `vvh` output horizontally, `hhv` and `vvv`
/// vertically, while the mixed blocks swap type (`vhh` outputs
/// vertically, `vhv` horizontally). All remaining combinations vanish.
#[derive(Clone, Debug)]
pub struct CurvatureBlocks<R> {
    /// `K(H_i, H_j) H_k` along `H_h`, stored `hhh[h][i][j][k]`.
    pub hhh: T4<R>,
    /// `K(H_i, H_j) V^k` along `V^h`, stored `hhv[k][i][j][h]`.
    pub hhv: T4<R>,
    /// `K(V^i, V^j) H_k` along `H_h`, stored `vvh[i][j][h][k]`.
    pub vvh: T4<R>,
    /// `K(V^i, V^j) V^k` along `V^h`, stored `vvv[i][j][k][h]`.
    pub vvv: T4<R>,
    /// `K(V^i, H_j) H_k` along `V^h`, stored `vhh[i][j][k][h]`.
    pub vhh: T4<R>,
    /// `K(V^i, H_j) V^k` along `H_h`, stored `vhv[i][k][h][j]`.
    pub vhv: T4<R>,
}

/// Fiber partials of the connection coefficients: `dq[i]`, `dp[i]`,
/// `ds[i]` hold the derivatives along `p_i` of the three tables.
fn connection_fiber_partials<R: Real>(
    base: &BaseSpace,
    fam: &Family,
    x: &[R],
    p: &[R],
) -> (Vec<T3<R>>, Vec<T3<R>>, Vec<T3<R>>) {
    let n = base.dim();
    let xs: Vec<Dual<R>> = x.iter().map(|&v| Dual::lift(v)).collect();
    let mut dq = Vec::with_capacity(n);
    let mut dp = Vec::with_capacity(n);
    let mut ds = Vec::with_capacity(n);
    for k in 0..n {
        let ps: Vec<Dual<R>> = p
            .iter()
            .enumerate()
            .map(|(j, &v)| if j == k { Dual::var(v) } else { Dual::lift(v) })
            .collect();
        let co = qps_generic(base, fam, &xs, &ps);
        let mut tq = t3_zeros(n);
        let mut tp = t3_zeros(n);
        let mut ts = t3_zeros(n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    tq[a][b][c] = co.q[a][b][c].du;
                    tp[a][b][c] = co.p[a][b][c].du;
                    ts[a][b][c] = co.s[a][b][c].du;
                }
            }
        }
        dq.push(tq);
        dp.push(tp);
        ds.push(ts);
    }
    (dq, dp, ds)
}

/// Closed-form curvature blocks assembled from the connection
/// coefficients, their fiber partials, the base curvature, and its
/// fiber contraction.
pub fn curvature_blocks<R: Real>(
    base: &BaseSpace,
    fam: &Family,
    x: &[R],
    p: &[R],
) -> CurvatureBlocks<R> {
    let n = base.dim();
    let co = qps_generic(base, fam, x, p);
    let (dq, dp, ds) = connection_fiber_partials(base, fam, x, p);
    let riem = base.riemann(x);
    let r0 = base.r0(x, p);
    let (q, pc, s) = (&co.q, &co.p, &co.s);

    let mut hhh = t4_zeros(n);
    let mut hhv = t4_zeros(n);
    let mut vvh = t4_zeros(n);
    let mut vvv = t4_zeros(n);
    let mut vhh = t4_zeros(n);
    let mut vhv = t4_zeros(n);
    for a in 0..n {
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    // a = output index h for hhh/hhv; first input index
                    // for the remaining blocks.
                    let mut v1 = riem[a][k][i][j];
                    let mut v2 = -riem[k][a][i][j];
                    let mut v3 = dp[a][i][j][k] - dp[j][i][a][k];
                    let mut v4 = dq[a][j][k][i] - dq[j][a][k][i];
                    let mut v5 = ds[a][i][j][k];
                    let mut v6 = dp[a][i][k][j];
                    for l in 0..n {
                        v1 = v1 - pc[a][l][k] * r0[l][i][j] + pc[a][l][i] * s[l][j][k]
                            - pc[a][l][j] * s[l][i][k];
                        v2 = v2 - q[l][k][a] * r0[l][i][j] - pc[l][k][i] * s[a][j][l]
                            + pc[l][k][j] * s[a][i][l];
                        v3 = v3 + pc[i][a][l] * pc[l][j][k] - pc[i][j][l] * pc[l][a][k];
                        v4 = v4 + q[j][k][l] * q[a][l][i] - q[a][k][l] * q[j][l][i];
                        v5 = v5 + q[a][l][i] * s[l][j][k] - pc[l][a][k] * s[i][j][l];
                        v6 = v6 + pc[i][a][l] * pc[l][k][j] - pc[i][l][j] * q[a][k][l];
                    }
                    hhh[a][i][j][k] = v1;
                    hhv[k][i][j][a] = v2;
                    // For vvh the stored layout is [i][j][h][k]: here the
                    // first input is a, second j, output i, argument k.
                    vvh[a][j][i][k] = v3;
                    vvv[a][j][k][i] = v4;
                    vhh[a][j][k][i] = v5;
                    vhv[a][k][i][j] = v6;
                }
            }
        }
    }
    CurvatureBlocks { hhh, hhv, vvh, vvv, vhh, vhv }
}

/// Full `(2n)^4` frame-component table assembled from the blocks.
pub fn curvature_frame<R: Real>(
    base: &BaseSpace,
    fam: &Family,
    x: &[R],
    p: &[R],
) -> T4<R> {
    let n = base.dim();
    let bl = curvature_blocks(base, fam, x, p);
    let mut kf = t4_zeros(2 * n);
    for h in 0..n {
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    kf[h][k][i][j] = bl.hhh[h][i][j][k];
                    kf[n + h][n + k][i][j] = bl.hhv[k][i][j][h];
                    kf[h][k][n + i][n + j] = bl.vvh[i][j][h][k];
                    kf[n + h][n + k][n + i][n + j] = bl.vvv[i][j][k][h];
                    kf[n + h][k][n + i][j] = bl.vhh[i][j][k][h];
                    kf[n + h][k][j][n + i] = -bl.vhh[i][j][k][h];
                    kf[h][n + k][n + i][j] = bl.vhv[i][k][h][j];
                    kf[h][n + k][j][n + i] = -bl.vhv[i][k][h][j];
                }
            }
        }
    }
    kf
}

/// Coordinate components of the lifted metric over `(q, p)`.
fn coordinate_metric<R: Real>(base: &BaseSpace, fam: &Family, x: &[R], p: &[R]) -> Mat<R> {
    let n = base.dim();
    let (g1, g2) = metric_blocks(base, fam, x, p);
    let g0 = base.gamma0(x, p);
    let mut out = crate::tensor::mat_zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let mut qq = g1[i][j];
            let mut qp = R::zero();
            for h in 0..n {
                qp = qp - g0[i][h] * g2[h][j];
                for k in 0..n {
                    qq = qq + g0[i][h] * g2[h][k] * g0[j][k];
                }
            }
            out[i][j] = qq;
            out[i][n + j] = qp;
            out[n + j][i] = qp;
            out[n + i][n + j] = g2[i][j];
        }
    }
    out
}

/// Coordinate Christoffel symbols of the lifted metric, computed from
/// coordinate partials of the coordinate metric.
fn coordinate_christoffel<R: Real>(
    base: &BaseSpace,
    fam: &Family,
    x: &[R],
    p: &[R],
) -> T3<R> {
    let n = base.dim();
    let dim = 2 * n;
    let mut dg: Vec<Mat<R>> = Vec::with_capacity(dim);
    for a in 0..dim {
        let xs: Vec<Dual<R>> = x
            .iter()
            .enumerate()
            .map(|(i, &v)| if i == a { Dual::var(v) } else { Dual::lift(v) })
            .collect();
        let ps: Vec<Dual<R>> = p
            .iter()
            .enumerate()
            .map(|(i, &v)| if n + i == a { Dual::var(v) } else { Dual::lift(v) })
            .collect();
        let gh = coordinate_metric(base, fam, &xs, &ps);
        let mut m = crate::tensor::mat_zeros(dim, dim);
        for b in 0..dim {
            for c in 0..dim {
                m[b][c] = gh[b][c].du;
            }
        }
        dg.push(m);
    }
    let g = coordinate_metric(base, fam, x, p);
    let gi = mat_inv(&g).expect("coordinate metric must be invertible");
    let mut gam = t3_zeros(dim);
    for a in 0..dim {
        for b in 0..dim {
            for c in 0..dim {
                let mut acc = R::zero();
                for d in 0..dim {
                    acc = acc + gi[a][d] * (dg[b][d][c] + dg[c][b][d] - dg[d][b][c]);
                }
                gam[a][b][c] = acc.scale(0.5);
            }
        }
    }
    gam
}

/// Independent evaluation of the full frame-component curvature table:
/// coordinate metric, coordinate Christoffel symbols, coordinate
/// curvature, then a change of frame. Shares no formulas with
/// `curvature_frame` beyond the metric blocks themselves.
pub fn curvature_frame_direct(
    base: &BaseSpace,
    fam: &Family,
    x: &[f64],
    p: &[f64],
) -> T4<f64> {
    let n = base.dim();
    let dim = 2 * n;
    let gam = coordinate_christoffel(base, fam, x, p);
    let mut dgam: Vec<T3<f64>> = Vec::with_capacity(dim);
    for a in 0..dim {
        let xs: Vec<Dual<f64>> = x
            .iter()
            .enumerate()
            .map(|(i, &v)| if i == a { Dual::var(v) } else { Dual::lift(v) })
            .collect();
        let ps: Vec<Dual<f64>> = p
            .iter()
            .enumerate()
            .map(|(i, &v)| if n + i == a { Dual::var(v) } else { Dual::lift(v) })
            .collect();
        let gh = coordinate_christoffel(base, fam, &xs, &ps);
        let mut t = t3_zeros(dim);
        for b in 0..dim {
            for c in 0..dim {
                for d in 0..dim {
                    t[b][c][d] = gh[b][c][d].du;
                }
            }
        }
        dgam.push(t);
    }
    let mut khat = t4_zeros(dim);
    for a in 0..dim {
        for b in 0..dim {
            for c in 0..dim {
                for d in 0..dim {
                    let mut v = dgam[c][a][d][b] - dgam[d][a][c][b];
                    for l in 0..dim {
                        v += gam[a][c][l] * gam[l][d][b] - gam[a][d][l] * gam[l][c][b];
                    }
                    khat[a][b][c][d] = v;
                }
            }
        }
    }
    // Change of frame, one index at a time.
    let f = frame_matrix(base, x, p);
    let fi = frame_matrix_inv(base, x, p);
    let mut s1 = t4_zeros::<f64>(dim);
    for w in 0..dim {
        for b in 0..dim {
            for c in 0..dim {
                for d in 0..dim {
                    s1[w][b][c][d] = (0..dim).map(|a| fi[w][a] * khat[a][b][c][d]).sum();
                }
            }
        }
    }
    let mut s2 = t4_zeros::<f64>(dim);
    for w in 0..dim {
        for z in 0..dim {
            for c in 0..dim {
                for d in 0..dim {
                    s2[w][z][c][d] = (0..dim).map(|b| s1[w][b][c][d] * f[b][z]).sum();
                }
            }
        }
    }
    let mut s3 = t4_zeros::<f64>(dim);
    for w in 0..dim {
        for z in 0..dim {
            for u in 0..dim {
                for d in 0..dim {
                    s3[w][z][u][d] = (0..dim).map(|c| s2[w][z][c][d] * f[c][u]).sum();
                }
            }
        }
    }
    let mut kf = t4_zeros(dim);
    for w in 0..dim {
        for z in 0..dim {
            for u in 0..dim {
                for v in 0..dim {
                    kf[w][z][u][v] = (0..dim).map(|d| s3[w][z][u][d] * f[d][v]).sum();
                }
            }
        }
    }
    kf
}

/// Largest entrywise difference between the block-assembled and the
/// coordinate-route curvature tables.
pub fn blocks_vs_direct_residual(base: &BaseSpace, fam: &Family, x: &[f64], p: &[f64]) -> f64 {
    let kf = curvature_frame(base, fam, x, p);
    let kd = curvature_frame_direct(base, fam, x, p);
    let dim = 2 * base.dim();
    let mut worst = 0.0_f64;
    for w in 0..dim {
        for z in 0..dim {
            for u in 0..dim {
                for v in 0..dim {
                    worst = worst.max((kf[w][z][u][v] - kd[w][z][u][v]).abs());
                }
            }
        }
    }
    worst
}

/// `K(X, Y) Z` in frame components.
pub fn apply_curvature(kf: &T4<f64>, xv: &[f64], yv: &[f64], zv: &[f64]) -> Vec<f64> {
    let dim = kf.len();
    let mut out = vec![0.0; dim];
    for w in 0..dim {
        let mut acc = 0.0;
        for z in 0..dim {
            for u in 0..dim {
                for v in 0..dim {
                    acc += kf[w][z][u][v] * xv[u] * yv[v] * zv[z];
                }
            }
        }
        out[w] = acc;
    }
    out
}

/// Holomorphic sectional curvature of the span of `X` and `JX`:
/// `G(K(X, JX) JX, X) / G(X, X)^2` for a frame-component vector `X`.
pub fn holomorphic_sectional(
    base: &BaseSpace,
    fam: &Family,
    x: &[f64],
    p: &[f64],
    xv: &[f64],
) -> f64 {
    let dim = 2 * base.dim();
    let kf = curvature_frame(base, fam, x, p);
    let g = metric_frame(base, fam, x, p);
    let jm = j_matrix(base, fam, x, p);
    let jx = mat_vec(&jm, xv);
    let kv = apply_curvature(&kf, xv, &jx, &jx);
    let pair = |a: &[f64], b: &[f64]| -> f64 {
        let mut acc = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                acc += a[i] * g[i][j] * b[j];
            }
        }
        acc
    };
    pair(&kv, xv) / pair(xv, xv).powi(2)
}

/// Frame components of the covariant derivative of the curvature
/// operator: `out[a][w][z][u][v]` is the component along `E_w` of
/// `(nabla_{E_a} K)(E_u, E_v) E_z`.
pub fn nabla_curvature(
    base: &BaseSpace,
    fam: &Family,
    x: &[f64],
    p: &[f64],
) -> Vec<T4<f64>> {
    let n = base.dim();
    let dim = 2 * n;
    let kf = curvature_frame(base, fam, x, p);
    let grads = frame_gradients(base, x, p, |xs, ps| {
        let k = curvature_frame::<Dual<f64>>(base, fam, xs, ps);
        let mut flat = Vec::with_capacity(dim * dim * dim * dim);
        for w in 0..dim {
            for z in 0..dim {
                for u in 0..dim {
                    for v in 0..dim {
                        flat.push(k[w][z][u][v]);
                    }
                }
            }
        }
        flat
    });
    let coeffs: ConnectionCoeffs<f64> = qps_generic(base, fam, x, p);
    let mut conn = vec![vec![Vec::new(); dim]; dim];
    for a in 0..dim {
        for b in 0..dim {
            conn[a][b] = covariant_frame(base, &coeffs, x, a, b);
        }
    }
    let flat_idx = |w: usize, z: usize, u: usize, v: usize| ((w * dim + z) * dim + u) * dim + v;
    let mut out = Vec::with_capacity(dim);
    for a in 0..dim {
        let mut nk = t4_zeros(dim);
        for w in 0..dim {
            for z in 0..dim {
                for u in 0..dim {
                    for v in 0..dim {
                        let mut acc = grads[a][flat_idx(w, z, u, v)];
                        for m in 0..dim {
                            acc += conn[a][m][w] * kf[m][z][u][v]
                                - conn[a][u][m] * kf[w][z][m][v]
                                - conn[a][v][m] * kf[w][z][u][m]
                                - conn[a][z][m] * kf[w][m][u][v];
                        }
                        nk[w][z][u][v] = acc;
                    }
                }
            }
        }
        out.push(nk);
    }
    out
}

/// Largest frame component of the cyclic sum
/// `(nabla_a K)(u, v) + (nabla_u K)(v, a) + (nabla_v K)(a, u)`,
/// which must vanish for the curvature of a torsion-free metric
/// connection.
pub fn second_bianchi_residual(base: &BaseSpace, fam: &Family, x: &[f64], p: &[f64]) -> f64 {
    let nk = nabla_curvature(base, fam, x, p);
    let dim = 2 * base.dim();
    let mut worst = 0.0_f64;
    for a in 0..dim {
        for w in 0..dim {
            for z in 0..dim {
                for u in 0..dim {
                    for v in 0..dim {
                        let s = nk[a][w][z][u][v] + nk[u][w][z][v][a] + nk[v][w][z][a][u];
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
    }
    worst
}

/// Largest frame component of `nabla K`; a strictly positive value
/// certifies that the structure is not locally symmetric at the point.
pub fn nabla_curvature_max(base: &BaseSpace, fam: &Family, x: &[f64], p: &[f64]) -> f64 {
    let nk = nabla_curvature(base, fam, x, p);
    let dim = 2 * base.dim();
    let mut worst = 0.0_f64;
    for a in 0..dim {
        for w in 0..dim {
            for z in 0..dim {
                for u in 0..dim {
                    for v in 0..dim {
                        worst = worst.max(nk[a][w][z][u][v].abs());
                    }
                }
            }
        }
    }
    worst
}
