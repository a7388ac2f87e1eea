use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::kernels::Kernels;
use crate::error::{Error, Result};
use crate::gaussian::{symmetrize, SymplecticForm};
use crate::kgmodes::{check_normalization, RindlerGeometry, RindlerSpectrum, Wedge};
use crate::specfun::{try_integrate_double_finite, try_integrate_finite, IntegralResult, QuadratureSpec};

/// Largest |∫(|g_I|² + |g_II|²) − 1| accepted for accelerated-frame modes.
pub const NORMALIZATION_TOL: f64 = 1e-6;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Which closed-form expressions produced a vacuum covariance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CovarianceBranch {
    /// Common apex, D = 0.
    #[serde(rename = "d0")]
    DZero,
    /// Separated apexes, D ≠ 0.
    #[serde(rename = "dnonzero")]
    DNonzero,
}

impl CovarianceBranch {
    pub fn for_geometry(geometry: &RindlerGeometry) -> Self {
        if geometry.d == 0.0 {
            CovarianceBranch::DZero
        } else {
            CovarianceBranch::DNonzero
        }
    }

    /// Fails when the branch does not match the sign class of D.
    pub fn check(self, geometry: &RindlerGeometry) -> Result<()> {
        if self != Self::for_geometry(geometry) {
            return Err(Error::Branch(format!(
                "branch {self:?} requested but D = {} selects {:?}",
                geometry.d,
                Self::for_geometry(geometry)
            )));
        }
        Ok(())
    }
}

/// Minkowski vacuum covariance seen by the accelerated modes, with per-element
/// quadrature error bounds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VacuumCovariance {
    pub matrix: DMatrix<f64>,
    pub element_errors: DMatrix<f64>,
    pub branch: CovarianceBranch,
    /// Elements (row, column) whose quadratures missed the tolerance.
    #[serde(default)]
    pub unconverged: Vec<(usize, usize)>,
}

impl VacuumCovariance {
    pub fn modes(&self) -> usize {
        self.matrix.nrows() / 2
    }

    /// Smallest eigenvalue of σ + iΩ_s.
    pub fn uncertainty_margin(&self) -> f64 {
        crate::gaussian::GaussianState::centered(self.matrix.clone())
            .map(|s| s.uncertainty_margin())
            .unwrap_or(f64::NEG_INFINITY)
    }

    pub fn symplectic_form(&self) -> SymplecticForm {
        SymplecticForm::new(self.modes())
    }
}

/// (ψ, w_ΛΩ) for ψ = Σ_Λ ∫dΩ g_Λ(Ω) w_ΛΩ. The product is antilinear in ψ,
/// so the overlap is g_Λ(Ω)*.
pub fn rindler_overlap(spectrum: &RindlerSpectrum, wedge: Wedge, omega: f64) -> Complex64 {
    spectrum.eval(wedge, omega).conj()
}

/// Sum of quadrature results with summed error bounds.
#[derive(Clone, Copy, Debug)]
struct Acc {
    value: Complex64,
    error: f64,
    converged: bool,
}

impl Acc {
    fn zero() -> Self {
        Acc {
            value: ZERO,
            error: 0.0,
            converged: true,
        }
    }

    fn add(&mut self, r: IntegralResult<Complex64>) {
        self.value += r.value;
        self.error += r.error_estimate;
        self.converged &= r.converged;
    }
}

/// Shared Ω support of two packets and the union of their breakpoints.
fn common_support(p: &RindlerSpectrum, q: &RindlerSpectrum) -> Option<((f64, f64), Vec<f64>)> {
    let (a, b) = (p.omega_support()?, q.omega_support()?);
    let (lo, hi) = (a.0.max(b.0), a.1.min(b.1));
    if !(hi > lo) {
        return None;
    }
    let mut bp = p.breakpoints();
    bp.extend(q.breakpoints());
    Some(((lo, hi), bp))
}

fn single(
    p: &RindlerSpectrum,
    q: &RindlerSpectrum,
    spec: &QuadratureSpec,
    f: impl Fn(f64) -> Complex64,
) -> Result<IntegralResult<Complex64>> {
    let Some(((lo, hi), bp)) = common_support(p, q) else {
        return Ok(IntegralResult {
            value: ZERO,
            error_estimate: 0.0,
            converged: true,
            evaluations: 0,
        });
    };
    try_integrate_finite(|w| Ok(f(w)), lo, hi, &bp, spec)
}

/// ∫∫dΩdΩ′ K(Ω, Ω′) x(Ω) y(Ω′) over the supports of the two wedge profiles.
fn double(
    p: &RindlerSpectrum,
    wp: Wedge,
    q: &RindlerSpectrum,
    wq: Wedge,
    spec: &QuadratureSpec,
    split_diagonal: bool,
    f: impl Fn(f64, f64) -> Complex64,
) -> Result<IntegralResult<Complex64>> {
    let (Some(sx), Some(sy)) = (p.support(wp), q.support(wq)) else {
        return Ok(IntegralResult {
            value: ZERO,
            error_estimate: 0.0,
            converged: true,
            evaluations: 0,
        });
    };
    try_integrate_double_finite(
        |x, y| Ok(f(x, y)),
        sx,
        &p.breakpoints(),
        sy,
        &q.breakpoints(),
        split_diagonal,
        spec,
    )
}

/// Vacuum moments of one pair of accelerated modes.
struct PairMoments {
    /// ⟨d_n d_k⟩.
    dd: Acc,
    /// Same-wedge part of ⟨d_n d_k†⟩, ∫ Σ_Λ P_nΛ P_kΛ* / (1 − e^{−2πΩ/a}).
    same_wedge: Acc,
    /// Cross-wedge I₃ part of ⟨d_n d_k†⟩ (zero for D = 0).
    cross_wedge: Acc,
}

/// Moments in the Minkowski vacuum for D = 0 (`kernels` absent) or D ≠ 0.
fn pair_moments(
    p: &RindlerSpectrum,
    q: &RindlerSpectrum,
    a: f64,
    kernels: Option<&Kernels>,
    spec: &QuadratureSpec,
) -> Result<PairMoments> {
    let ov = |s: &RindlerSpectrum, w: Wedge, o: f64| rindler_overlap(s, w, o);
    let mut dd = Acc::zero();
    let mut same_wedge = Acc::zero();
    let mut cross_wedge = Acc::zero();
    same_wedge.add(single(p, q, spec, |w| {
        (ov(p, Wedge::I, w) * ov(q, Wedge::I, w).conj() + ov(p, Wedge::II, w) * ov(q, Wedge::II, w).conj())
            / -(-2.0 * PI * w / a).exp_m1()
    })?);
    match kernels {
        None => {
            dd.add(single(p, q, spec, |w| {
                (ov(p, Wedge::I, w) * ov(q, Wedge::II, w) + ov(p, Wedge::II, w) * ov(q, Wedge::I, w))
                    / (2.0 * (PI * w / a).sinh())
            })?);
        }
        Some(k) => {
            for (wp, wq) in [(Wedge::I, Wedge::II), (Wedge::II, Wedge::I)] {
                dd.add(double(p, wp, q, wq, spec, true, |x, y| {
                    k.i1(x, y) * ov(p, wp, x) * ov(q, wq, y)
                })?);
                cross_wedge.add(double(p, wp, q, wq, spec, false, |x, y| {
                    k.i3(x, y) * ov(p, wp, x) * ov(q, wq, y).conj()
                })?);
            }
        }
    }
    Ok(PairMoments {
        dd,
        same_wedge,
        cross_wedge,
    })
}

fn check_inputs(psi_specs: &[RindlerSpectrum], geometry: &RindlerGeometry) -> Result<()> {
    geometry.validate()?;
    if psi_specs.is_empty() {
        return Err(Error::Config("at least one accelerated mode is required".into()));
    }
    for (i, s) in psi_specs.iter().enumerate() {
        s.validate()?;
        let norm = check_normalization(s, geometry)?;
        if (norm - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::Precondition(format!(
                "accelerated mode {i} has ∫(|g_I|² + |g_II|²)dΩ = {norm:.12}, not 1"
            )));
        }
    }
    Ok(())
}

fn assemble(
    psi_specs: &[RindlerSpectrum],
    geometry: &RindlerGeometry,
    spec: &QuadratureSpec,
    branch: CovarianceBranch,
) -> Result<VacuumCovariance> {
    spec.validate()?;
    check_inputs(psi_specs, geometry)?;
    let a = geometry.a;
    let kernels = match branch {
        CovarianceBranch::DZero => None,
        CovarianceBranch::DNonzero => {
            let top = psi_specs
                .iter()
                .filter_map(RindlerSpectrum::omega_support)
                .map(|s| s.1)
                .fold(0.0, f64::max);
            Some(Kernels::new(geometry, top.max(a))?)
        }
    };
    let z = psi_specs.len();
    let pairs: Vec<(usize, usize)> = (0..z).flat_map(|n| (n..z).map(move |k| (n, k))).collect();
    let moments = pairs
        .par_iter()
        .map(|&(n, k)| pair_moments(&psi_specs[n], &psi_specs[k], a, kernels.as_ref(), spec))
        .collect::<Result<Vec<_>>>()?;
    let thermal = psi_specs
        .par_iter()
        .map(|p| {
            single(p, p, spec, |w| {
                let weight = 2.0 / (2.0 * PI * w / a).exp_m1();
                Complex64::new(
                    (rindler_overlap(p, Wedge::I, w).norm_sqr() + rindler_overlap(p, Wedge::II, w).norm_sqr()) * weight,
                    0.0,
                )
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let dim = 2 * z;
    let mut sigma = DMatrix::zeros(dim, dim);
    let mut err = DMatrix::zeros(dim, dim);
    let mut unconverged = Vec::new();
    for (&(n, k), m) in pairs.iter().zip(&moments) {
        let ok = m.dd.converged && m.same_wedge.converged && m.cross_wedge.converged;
        if !ok || (n == k && !thermal[n].converged) {
            for i in [2 * n, 2 * n + 1] {
                for j in [2 * k, 2 * k + 1] {
                    unconverged.push((i, j));
                }
            }
        }
        let (q_n, p_n, q_k, p_k) = (2 * n, 2 * n + 1, 2 * k, 2 * k + 1);
        let dd = m.dd.value;
        if n == k {
            // ⟨{d, d†}⟩ = 2⟨d d†⟩ − [d, d†] = 1 + T + 2J, with J the real
            // cross-wedge part of ⟨d d†⟩; exact when the packet has unit KG norm.
            let t = &thermal[n];
            let anti = 1.0 + t.value.re + 2.0 * m.cross_wedge.value.re;
            let e = t.error_estimate + 2.0 * m.cross_wedge.error + 2.0 * m.dd.error;
            sigma[(q_n, q_n)] = anti + 2.0 * dd.re;
            sigma[(p_n, p_n)] = anti - 2.0 * dd.re;
            sigma[(q_n, p_n)] = 2.0 * dd.im;
            sigma[(p_n, q_n)] = 2.0 * dd.im;
            for (i, j) in [(q_n, q_n), (p_n, p_n), (q_n, p_n), (p_n, q_n)] {
                err[(i, j)] = e;
            }
        } else {
            // N± = 2(⟨d_n d_k⟩ ± ⟨d_n d_k†⟩).
            let ddag = m.same_wedge.value + m.cross_wedge.value;
            let plus = 2.0 * (dd + ddag);
            let minus = 2.0 * (dd - ddag);
            let e = 2.0 * (m.dd.error + m.same_wedge.error + m.cross_wedge.error);
            for (i, j, v) in [
                (q_n, q_k, plus.re),
                (q_n, p_k, minus.im),
                (p_n, q_k, plus.im),
                (p_n, p_k, -minus.re),
            ] {
                sigma[(i, j)] = v;
                sigma[(j, i)] = v;
                err[(i, j)] = e;
                err[(j, i)] = e;
            }
        }
    }
    symmetrize(&mut sigma);
    Ok(VacuumCovariance {
        matrix: sigma,
        element_errors: err,
        branch,
        unconverged,
    })
}

/// Vacuum covariance for wedges with a common apex.
///
/// With P_Λ(Ω) = (ψ_n, w_ΛΩ), T = ∫(|P_I|² + |P_II|²) e^{−πΩ/a}/sinh(πΩ/a) and
/// C = ∫ P_I P_II / sinh(πΩ/a):
///
/// ```text
/// σ_{2n−1,2n−1} = 1 + T + 2 Re C,   σ_{2n,2n} = 1 + T − 2 Re C,   σ_{2n,2n−1} = 2 Im C
/// ```
///
/// and the cross-mode blocks are Re N⁺, Im N⁻, Im N⁺, −Re N⁻.
pub fn vacuum_covariance_d0(
    psi_specs: &[RindlerSpectrum],
    geometry: &RindlerGeometry,
    spec: &QuadratureSpec,
) -> Result<VacuumCovariance> {
    CovarianceBranch::DZero.check(geometry)?;
    assemble(psi_specs, geometry, spec, CovarianceBranch::DZero)
}

/// Vacuum covariance for separated apexes, built from the I₁ and I₃
/// double integrals.
pub fn vacuum_covariance_dneq0(
    psi_specs: &[RindlerSpectrum],
    geometry: &RindlerGeometry,
    spec: &QuadratureSpec,
) -> Result<VacuumCovariance> {
    CovarianceBranch::DNonzero.check(geometry)?;
    assemble(psi_specs, geometry, spec, CovarianceBranch::DNonzero)
}

/// Dispatches on the sign class of D.
pub fn vacuum_covariance(
    psi_specs: &[RindlerSpectrum],
    geometry: &RindlerGeometry,
    spec: &QuadratureSpec,
) -> Result<VacuumCovariance> {
    assemble(psi_specs, geometry, spec, CovarianceBranch::for_geometry(geometry))
}
