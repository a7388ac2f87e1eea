use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::geometry::{RindlerGeometry, Wedge};
use super::inner::kg_inner_product;
use super::modes::{default_mode_quadrature, Conjugate, MinkowskiMode, RindlerMode};
use super::spectrum::{MinkowskiSpectrum, RindlerSpectrum};
use crate::error::{Error, Result};
use crate::specfun::{try_integrate_finite, QuadratureSpec};

/// α_ij = (ψ_i|φ_j), β_ij = −(ψ_i|φ_j*), with per-entry error estimates
/// (the larger of the α and β estimates) and the entries whose quadrature
/// missed its tolerance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BogoliubovMatrices {
    pub alpha: DMatrix<Complex64>,
    pub beta: DMatrix<Complex64>,
    pub error_estimates: DMatrix<f64>,
    #[serde(default)]
    pub unconverged: Vec<(usize, usize)>,
}

impl BogoliubovMatrices {
    pub fn from_parts(alpha: DMatrix<Complex64>, beta: DMatrix<Complex64>) -> Result<Self> {
        if !alpha.is_square() || alpha.shape() != beta.shape() {
            return Err(Error::Config(format!(
                "α and β must be equal square matrices, got {:?} and {:?}",
                alpha.shape(),
                beta.shape()
            )));
        }
        let n = alpha.nrows();
        Ok(BogoliubovMatrices {
            alpha,
            beta,
            error_estimates: DMatrix::zeros(n, n),
            unconverged: Vec::new(),
        })
    }

    /// Diagonal α, zero β.
    pub fn diagonal(alphas: &[Complex64]) -> Self {
        let n = alphas.len();
        BogoliubovMatrices {
            alpha: DMatrix::from_fn(n, n, |i, j| if i == j { alphas[i] } else { Complex64::new(0.0, 0.0) }),
            beta: DMatrix::zeros(n, n),
            error_estimates: DMatrix::zeros(n, n),
            unconverged: Vec::new(),
        }
    }

    /// Error naming every entry whose quadrature did not converge.
    pub fn require_converged(&self) -> Result<()> {
        if self.unconverged.is_empty() {
            return Ok(());
        }
        let list: Vec<String> = self.unconverged.iter().map(|(i, j)| format!("({i}, {j})")).collect();
        Err(Error::Precondition(format!(
            "Bogoliubov quadrature did not converge at entries {}",
            list.join(", ")
        )))
    }

    pub fn modes(&self) -> usize {
        self.alpha.nrows()
    }

    /// Largest |α_ij|, |β_ij| with i ≠ j. Vanishes when each accelerated
    /// mode corresponds to a single inertial mode.
    pub fn max_off_diagonal(&self) -> f64 {
        let n = self.modes();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    worst = worst.max(self.alpha[(i, j)].norm()).max(self.beta[(i, j)].norm());
                }
            }
        }
        worst
    }
}

/// Fills α and β by position-space Klein–Gordon products.
///
/// Rindler packets are summed from terms of size |g(Ω)| e^{πΩ/2a}, so
/// spectra with weight far above Ω ≈ a lose that many digits; such entries
/// show up in `unconverged`, and the Ω-space route
/// [`overlap_in_frequency_space`](super::overlap_in_frequency_space) is the
/// well-conditioned alternative.
pub fn bogoliubov_matrices(
    psi_specs: &[RindlerSpectrum],
    phi_specs: &[MinkowskiSpectrum],
    geometry: &RindlerGeometry,
    spec: &QuadratureSpec,
) -> Result<BogoliubovMatrices> {
    if psi_specs.len() != phi_specs.len() {
        return Err(Error::Config(format!(
            "{} accelerated modes but {} inertial modes",
            psi_specs.len(),
            phi_specs.len()
        )));
    }
    let n = psi_specs.len();
    let psis = psi_specs
        .iter()
        .map(|s| RindlerMode::new(s, geometry))
        .collect::<Result<Vec<_>>>()?;
    let phis = phi_specs
        .iter()
        .map(|s| MinkowskiMode::new(s, geometry))
        .collect::<Result<Vec<_>>>()?;
    let entries = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / n, idx % n);
            let a = kg_inner_product(&psis[i], &phis[j], spec)?;
            let b = kg_inner_product(&psis[i], &Conjugate(&phis[j]), spec)?;
            Ok((
                a.value,
                -b.value,
                a.error_estimate.max(b.error_estimate),
                a.converged && b.converged,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BogoliubovMatrices {
        alpha: DMatrix::from_fn(n, n, |i, j| entries[i * n + j].0),
        beta: DMatrix::from_fn(n, n, |i, j| entries[i * n + j].1),
        error_estimates: DMatrix::from_fn(n, n, |i, j| entries[i * n + j].2),
        unconverged: (0..n * n).filter(|&k| !entries[k].3).map(|k| (k / n, k % n)).collect(),
    })
}

/// ∫₀^∞ (|g_I|² + |g_II|²) dΩ; the caller compares against 1.
pub fn check_normalization(spectrum: &RindlerSpectrum, geometry: &RindlerGeometry) -> Result<f64> {
    geometry.validate()?;
    spectrum.norm_squared(&default_mode_quadrature())
}

/// Ω-space Gram matrix Σ_Λ ∫dΩ g_n^Λ* g_k^Λ, equal to the commutators
/// [d_n, d_k†] when the wedges do not overlap (D ≥ 0).
pub fn frequency_gram_matrix(psi_specs: &[RindlerSpectrum], spec: &QuadratureSpec) -> Result<DMatrix<Complex64>> {
    let n = psi_specs.len();
    let mut gram = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut total = Complex64::new(0.0, 0.0);
            for wedge in [Wedge::I, Wedge::II] {
                let (Some(si), Some(sj)) = (psi_specs[i].support(wedge), psi_specs[j].support(wedge)) else {
                    continue;
                };
                let (lo, hi) = (si.0.max(sj.0), si.1.min(sj.1));
                if !(hi > lo) {
                    continue;
                }
                let mut bp = psi_specs[i].breakpoints();
                bp.extend(psi_specs[j].breakpoints());
                bp.retain(|&b| b > lo && b < hi);
                bp.sort_by(f64::total_cmp);
                let (pi, pj) = (&psi_specs[i], &psi_specs[j]);
                total += try_integrate_finite(|w| Ok(pi.eval(wedge, w).conj() * pj.eval(wedge, w)), lo, hi, &bp, spec)?
                    .value;
            }
            gram[(i, j)] = total;
            gram[(j, i)] = total.conj();
        }
    }
    Ok(gram)
}

/// Position-space Gram matrix (ψ_n|ψ_k) = [d_n, d_k†], valid for any D.
pub fn mode_gram_matrix(
    psi_specs: &[RindlerSpectrum],
    geometry: &RindlerGeometry,
    spec: &QuadratureSpec,
) -> Result<DMatrix<Complex64>> {
    let n = psi_specs.len();
    let modes = psi_specs
        .iter()
        .map(|s| RindlerMode::new(s, geometry))
        .collect::<Result<Vec<_>>>()?;
    let mut gram = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = kg_inner_product(&modes[i], &modes[j], spec)?.value;
            gram[(i, j)] = v;
            gram[(j, i)] = v.conj();
        }
    }
    Ok(gram)
}

/// KG overlap between the wedge-I and wedge-II parts of a packet. Exactly
/// zero for D ≥ 0; for D < 0 the wedges share the strip |x| < |D|/2.
pub fn cross_wedge_overlap(
    spectrum: &RindlerSpectrum,
    geometry: &RindlerGeometry,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let (Some(gi), Some(gii)) = (&spectrum.g_i, &spectrum.g_ii) else {
        return Ok(Complex64::new(0.0, 0.0));
    };
    let wi = RindlerSpectrum {
        g_i: Some(gi.clone()),
        g_ii: None,
    };
    let wii = RindlerSpectrum {
        g_i: None,
        g_ii: Some(gii.clone()),
    };
    let mi = RindlerMode::new(&wi, geometry)?;
    let mii = RindlerMode::new(&wii, geometry)?;
    Ok(kg_inner_product(&mi, &mii, spec)?.value)
}

/// Warning text when D < 0 packets overlap across wedges beyond `tol`.
pub fn negative_separation_diagnostic(
    psi_specs: &[RindlerSpectrum],
    geometry: &RindlerGeometry,
    spec: &QuadratureSpec,
    tol: f64,
) -> Result<Option<String>> {
    if geometry.d >= 0.0 {
        return Ok(None);
    }
    let mut worst = (0usize, 0.0f64);
    for (i, s) in psi_specs.iter().enumerate() {
        let v = cross_wedge_overlap(s, geometry, spec)?.norm();
        if v > worst.1 {
            worst = (i, v);
        }
    }
    let gram = mode_gram_matrix(psi_specs, geometry, spec)?;
    let mut off = (0usize, 0usize, 0.0f64);
    for i in 0..gram.nrows() {
        for j in 0..gram.ncols() {
            if i != j && gram[(i, j)].norm() > off.2 {
                off = (i, j, gram[(i, j)].norm());
            }
        }
    }
    if worst.1 > tol || off.2 > tol {
        return Ok(Some(format!(
            "D = {} < 0: wedges overlap; cross-wedge packet overlap up to {:.3e} (mode {}), \
             commutator [d_n, d_k†] off-diagonal up to {:.3e} (modes {}, {}); \
             results assume these vanish",
            geometry.d, worst.1, worst.0, off.2, off.0, off.1
        )));
    }
    Ok(None)
}
