//! Independent oracles shared by the integration tests. Nothing here calls
//! the library's quadrature, Bessel or covariance code.
#![allow(dead_code)]

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rindler_gauss::kgmodes::{RindlerGeometry, RindlerSpectrum, Wedge};

/// n-point Gauss–Legendre nodes and weights on [−1, 1] by Newton iteration
/// on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    (x, w)
}

/// Composite rule with `panels` equal panels of `order` nodes on [lo, hi].
pub fn composite(lo: f64, hi: f64, panels: usize, order: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(order);
    let h = (hi - lo) / panels as f64;
    let mut nodes = Vec::with_capacity(panels * order);
    let mut weights = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let c = lo + h * (p as f64 + 0.5);
        for (xi, wi) in x.iter().zip(&w) {
            nodes.push(c + 0.5 * h * xi);
            weights.push(0.5 * h * wi);
        }
    }
    (nodes, weights)
}

/// K_{iν}(x) = ∫₀^∞ e^{−x cosh t} cos(νt) dt on a fixed composite grid.
pub struct BesselOracle {
    t: Vec<f64>,
    damped: Vec<f64>,
}

impl BesselOracle {
    pub fn new(x: f64, nu_max: f64) -> Self {
        // e^{−x cosh t} < e^{−745} beyond t_max.
        let t_max = (745.0 / x).acosh().max(1.0);
        // About two periods of cos(νt) per 24-node panel.
        let panels = (t_max * (nu_max + 4.0) / (4.0 * PI)).ceil() as usize + 8;
        let (t, w) = composite(0.0, t_max, panels, 24);
        let damped = t.iter().zip(&w).map(|(t, w)| w * (-x * t.cosh()).exp()).collect();
        BesselOracle { t, damped }
    }

    pub fn eval(&self, nu: f64) -> f64 {
        self.t.iter().zip(&self.damped).map(|(t, d)| d * (nu * t).cos()).sum()
    }
}

pub fn bessel_ki(nu: f64, x: f64) -> f64 {
    BesselOracle::new(x, nu.abs()).eval(nu)
}

/// Vacuum two-point functions of the Rindler operators b_ΛΩ, read as
/// kernels against dΩ dΩ′ (D ≠ 0) or against dΩ on the diagonal (D = 0).
struct TwoPoint {
    /// ⟨b_ΛΩ b_Λ′Ω′⟩ for Λ ≠ Λ′.
    bb: DMatrix<f64>,
    /// ⟨b_ΛΩ b†_Λ′Ω′⟩ for Λ ≠ Λ′.
    bbd: DMatrix<f64>,
    /// ⟨b†_ΛΩ b_Λ′Ω′⟩ for Λ ≠ Λ′.
    bdb: DMatrix<f64>,
}

fn ln_sinh(x: f64) -> f64 {
    if x > 30.0 {
        x - std::f64::consts::LN_2
    } else {
        x.sinh().ln()
    }
}

fn two_point(nodes: &[f64], g: &RindlerGeometry) -> TwoPoint {
    let n = nodes.len();
    let a = g.a;
    let x = (g.m * g.d).abs();
    let top = nodes.iter().cloned().fold(0.0, f64::max);
    let k = BesselOracle::new(x, 2.0 * top / a);
    let tilt = 1.0 - g.d.signum();
    let mut bb = DMatrix::zeros(n, n);
    let mut bbd = DMatrix::zeros(n, n);
    let mut bdb = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let (w, wp) = (nodes[i], nodes[j]);
            let base = -(2.0 * PI * a).ln() - 0.5 * (ln_sinh(PI * w / a) + ln_sinh(PI * wp / a));
            bb[(i, j)] = k.eval((w - wp) / a) * (base + PI * (w - wp) * tilt / (2.0 * a)).exp();
            let k_plus = k.eval((w + wp) / a);
            bbd[(i, j)] = k_plus * (base + PI * (w + wp) * tilt / (2.0 * a)).exp();
            bdb[(i, j)] = k_plus * (base - PI * (w + wp) * tilt / (2.0 * a)).exp();
        }
    }
    TwoPoint { bb, bbd, bdb }
}

/// (ψ, w_ΛΩ) on the nodes.
fn overlaps(s: &RindlerSpectrum, wedge: Wedge, nodes: &[f64]) -> Vec<Complex64> {
    nodes.iter().map(|&w| s.eval(wedge, w).conj()).collect()
}

/// Brute-force σ: build W_ab = ⟨c_a c_b⟩ over c = (d_1…d_Z, d_1†…d_Z†) from
/// the Rindler two-point functions, then σ_ij = Σ T_ia T_jb (W_ab + W_ba)
/// with q = (d + d†)/√2, p = (d − d†)/(i√2).
pub fn covariance_oracle(specs: &[RindlerSpectrum], g: &RindlerGeometry, panels: usize) -> DMatrix<f64> {
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for s in specs {
        for wedge in [Wedge::I, Wedge::II] {
            if let Some((l, h)) = s.support(wedge) {
                lo = lo.min(l);
                hi = hi.max(h);
            }
        }
    }
    let (nodes, weights) = composite(lo.max(0.0), hi, panels, 16);
    let z = specs.len();
    let p: Vec<[Vec<Complex64>; 2]> = specs
        .iter()
        .map(|s| [overlaps(s, Wedge::I, &nodes), overlaps(s, Wedge::II, &nodes)])
        .collect();
    let a = g.a;
    let bose = |w: f64| 1.0 / (2.0 * PI * w / a).exp_m1();
    let zero = Complex64::new(0.0, 0.0);

    // ⟨d_n d_k⟩, ⟨d_n d_k†⟩, ⟨d_n† d_k⟩.
    let mut gmat = DMatrix::from_element(z, z, zero);
    let mut hmat = DMatrix::from_element(z, z, zero);
    let mut lmat = DMatrix::from_element(z, z, zero);
    let tp = (g.d != 0.0).then(|| two_point(&nodes, g));
    for n in 0..z {
        for k in 0..z {
            let (mut gv, mut hv, mut lv) = (zero, zero, zero);
            for (i, (&w, &wt)) in nodes.iter().zip(&weights).enumerate() {
                for l in 0..2 {
                    // Same wedge: ⟨b b†⟩ = δ(1 + n_B), ⟨b† b⟩ = δ n_B.
                    hv += wt * p[n][l][i] * p[k][l][i].conj() * (1.0 + bose(w));
                    lv += wt * p[n][l][i].conj() * p[k][l][i] * bose(w);
                    if tp.is_none() {
                        // Common apex: ⟨b_IΩ b_IIΩ′⟩ = δ(Ω − Ω′) / (2 sinh(πΩ/a)).
                        gv += wt * p[n][l][i] * p[k][1 - l][i] / (2.0 * (PI * w / a).sinh());
                    }
                }
            }
            if let Some(t) = &tp {
                for (i, &wi) in weights.iter().enumerate() {
                    for (j, &wj) in weights.iter().enumerate() {
                        let ww = wi * wj;
                        for l in 0..2 {
                            gv += ww * t.bb[(i, j)] * p[n][l][i] * p[k][1 - l][j];
                            hv += ww * t.bbd[(i, j)] * p[n][l][i] * p[k][1 - l][j].conj();
                            lv += ww * t.bdb[(i, j)] * p[n][l][i].conj() * p[k][1 - l][j];
                        }
                    }
                }
            }
            gmat[(n, k)] = gv;
            hmat[(n, k)] = hv;
            lmat[(n, k)] = lv;
        }
    }

    let mut w = DMatrix::from_element(2 * z, 2 * z, zero);
    for n in 0..z {
        for k in 0..z {
            w[(n, k)] = gmat[(n, k)];
            w[(n, z + k)] = hmat[(n, k)];
            w[(z + n, k)] = lmat[(n, k)];
            w[(z + n, z + k)] = gmat[(k, n)].conj();
        }
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut t = DMatrix::from_element(2 * z, 2 * z, zero);
    for n in 0..z {
        t[(2 * n, n)] = Complex64::new(s, 0.0);
        t[(2 * n, z + n)] = Complex64::new(s, 0.0);
        t[(2 * n + 1, n)] = Complex64::new(0.0, -s);
        t[(2 * n + 1, z + n)] = Complex64::new(0.0, s);
    }
    let sym = &w + w.transpose();
    let sigma = &t * sym * t.transpose();
    sigma.map(|c| c.re)
}
