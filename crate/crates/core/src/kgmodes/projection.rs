//! Momentum-space Bogoliubov coefficients between Rindler modes and plane
//! waves, and the projections they induce between wavepacket spectra.
//!
//! With rapidity θ_k = asinh(k/m) and ν = Ω/a, the wedge-I mode expands as
//! w_IΩ = ∫dk (A u_k + B u_k*) with
//!
//! ```text
//! A = e^{−ikD/2} e^{−iνθ_k} / √(2πaω_k (1 − e^{−2πν}))
//! B = −e^{ikD/2} e^{−iνθ_k} / √(2πaω_k (e^{2πν} − 1))
//! ```
//!
//! and wedge II is the mirror image (θ_k → −θ_k, D → −D).

use std::f64::consts::PI;

use num_complex::Complex64;

use super::geometry::{RindlerGeometry, Wedge};
use super::modes::default_mode_quadrature;
use super::profile::TabulatedProfile;
use super::spectrum::{MinkowskiSpectrum, RindlerSpectrum};
use crate::error::{Error, Result};
use crate::specfun::{try_integrate_finite, IntegralResult, QuadratureSpec};

/// Coefficients (A, B) of w_ΛΩ = ∫dk (A u_k + B u_k*). Equivalently
/// (u_k, w_ΛΩ) = A and (u_k*, w_ΛΩ) = −B.
pub fn plane_wave_coefficients(wedge: Wedge, omega: f64, k: f64, geometry: &RindlerGeometry) -> (Complex64, Complex64) {
    let (a, m, d) = (geometry.a, geometry.m, geometry.d);
    let nu = omega / a;
    let w = (k * k + m * m).sqrt();
    let theta = (k / m).asinh();
    let base = 2.0 * PI * a * w;
    let pos = (base * -(-2.0 * PI * nu).exp_m1()).sqrt().recip();
    let neg = (base * (2.0 * PI * nu).exp_m1()).sqrt().recip();
    let (rot, shift) = match wedge {
        Wedge::I => (-nu * theta, -0.5 * k * d),
        Wedge::II => (nu * theta, 0.5 * k * d),
    };
    let a_coef = Complex64::from_polar(pos, rot + shift);
    let b_coef = -Complex64::from_polar(neg, rot - shift);
    (a_coef, b_coef)
}

/// Wedge overlaps of a Minkowski packet: ((w_ΛΩ, φ), (w_ΛΩ, φ*)).
pub fn rindler_overlaps(
    phi: &MinkowskiSpectrum,
    wedge: Wedge,
    omega: f64,
    geometry: &RindlerGeometry,
    spec: &QuadratureSpec,
) -> Result<IntegralResult<[Complex64; 2]>> {
    let (lo, hi) = phi.f.profile.support();
    let f = phi.f.profile.evaluator();
    let amp = phi.f.amplitude;
    let bp: Vec<f64> = phi
        .f
        .profile
        .breakpoints()
        .into_iter()
        .filter(|&b| b > lo && b < hi)
        .collect();
    let pos = try_integrate_finite(
        |k| {
            let (a, _) = plane_wave_coefficients(wedge, omega, k, geometry);
            Ok(f(k) * a.conj())
        },
        lo,
        hi,
        &bp,
        spec,
    )?;
    let neg = try_integrate_finite(
        |k| {
            let (_, b) = plane_wave_coefficients(wedge, omega, k, geometry);
            Ok(-f(k).conj() * b.conj())
        },
        lo,
        hi,
        &bp,
        spec,
    )?;
    Ok(IntegralResult {
        value: [amp * pos.value, amp.conj() * neg.value],
        error_estimate: amp.norm() * (pos.error_estimate + neg.error_estimate),
        converged: pos.converged && neg.converged,
        evaluations: pos.evaluations + neg.evaluations,
    })
}

/// Tabulates h(Ω) = (w_ΛΩ, φ) · window(Ω) on `omegas`, the single-wedge
/// Rindler spectrum whose modes best reproduce φ in wedge Λ.
pub fn rindler_projection(
    phi: &MinkowskiSpectrum,
    wedge: Wedge,
    geometry: &RindlerGeometry,
    omegas: &[f64],
    window: impl Fn(f64) -> f64,
) -> Result<TabulatedProfile> {
    geometry.validate()?;
    if omegas.iter().any(|&w| !(w >= 0.0)) {
        return Err(Error::Domain("projection frequencies must be nonnegative".into()));
    }
    let spec = default_mode_quadrature();
    let values = omegas
        .iter()
        .map(|&w| {
            if w == 0.0 {
                return Ok(Complex64::new(0.0, 0.0));
            }
            Ok(rindler_overlaps(phi, wedge, w, geometry, &spec)?.value[0] * window(w))
        })
        .collect::<Result<Vec<_>>>()?;
    TabulatedProfile::new(omegas.to_vec(), values)
}

/// Minkowski content of a Rindler packet: ψ = ∫dk (F u_k + G u_k*), with
/// F(k) = (u_k, ψ) = Σ_Λ ∫dΩ g_Λ A_Λ and G(k) = Σ_Λ ∫dΩ g_Λ B_Λ.
pub fn minkowski_content(
    psi: &RindlerSpectrum,
    k: f64,
    geometry: &RindlerGeometry,
    spec: &QuadratureSpec,
) -> Result<IntegralResult<[Complex64; 2]>> {
    let mut total = IntegralResult {
        value: [Complex64::new(0.0, 0.0); 2],
        error_estimate: 0.0,
        converged: true,
        evaluations: 0,
    };
    for wedge in [Wedge::I, Wedge::II] {
        let (Some(comp), Some((lo, hi))) = (psi.component(wedge), psi.support(wedge)) else {
            continue;
        };
        let g = comp.profile.evaluator();
        let bp: Vec<f64> = comp
            .profile
            .breakpoints()
            .into_iter()
            .filter(|&b| b > lo && b < hi)
            .collect();
        for (slot, pick) in [(0usize, 0usize), (1, 1)] {
            let r = try_integrate_finite(
                |w| {
                    let c = plane_wave_coefficients(wedge, w, k, geometry);
                    Ok(g(w) * if pick == 0 { c.0 } else { c.1 })
                },
                lo,
                hi,
                &bp,
                spec,
            )?;
            total.value[slot] += comp.amplitude * r.value;
            total.error_estimate += comp.amplitude.norm() * r.error_estimate;
            total.converged &= r.converged;
            total.evaluations += r.evaluations;
        }
    }
    Ok(total)
}

/// (α, β) = ((ψ|φ), −(ψ|φ*)) from Ω-space overlaps,
/// α = Σ_Λ ∫dΩ g_Λ* (w_ΛΩ, φ) and β = −Σ_Λ ∫dΩ g_Λ* (w_ΛΩ, φ*).
pub fn overlap_in_frequency_space(
    psi: &RindlerSpectrum,
    phi: &MinkowskiSpectrum,
    geometry: &RindlerGeometry,
    spec: &QuadratureSpec,
) -> Result<IntegralResult<[Complex64; 2]>> {
    let inner = default_mode_quadrature();
    let mut total = IntegralResult {
        value: [Complex64::new(0.0, 0.0); 2],
        error_estimate: 0.0,
        converged: true,
        evaluations: 0,
    };
    for wedge in [Wedge::I, Wedge::II] {
        let (Some(comp), Some((lo, hi))) = (psi.component(wedge), psi.support(wedge)) else {
            continue;
        };
        let g = comp.profile.evaluator();
        let bp: Vec<f64> = comp
            .profile
            .breakpoints()
            .into_iter()
            .filter(|&b| b > lo && b < hi)
            .collect();
        let lo = lo.max(1e-300);
        let r = try_integrate_finite(
            |w| {
                let o = rindler_overlaps(phi, wedge, w, geometry, &inner)?.value;
                let gc = (comp.amplitude * g(w)).conj();
                Ok(OverlapPair(gc * o[0], -gc * o[1]))
            },
            lo,
            hi,
            &bp,
            spec,
        )?;
        total.value[0] += r.value.0;
        total.value[1] += r.value.1;
        total.error_estimate += r.error_estimate;
        total.converged &= r.converged;
        total.evaluations += r.evaluations;
    }
    Ok(total)
}

#[derive(Clone, Copy, Debug)]
struct OverlapPair(Complex64, Complex64);

impl std::ops::Add for OverlapPair {
    type Output = Self;
    fn add(self, r: Self) -> Self {
        OverlapPair(self.0 + r.0, self.1 + r.1)
    }
}

impl std::ops::Sub for OverlapPair {
    type Output = Self;
    fn sub(self, r: Self) -> Self {
        OverlapPair(self.0 - r.0, self.1 - r.1)
    }
}

impl std::ops::Mul<f64> for OverlapPair {
    type Output = Self;
    fn mul(self, r: f64) -> Self {
        OverlapPair(self.0 * r, self.1 * r)
    }
}

impl crate::specfun::QuadValue for OverlapPair {
    fn zero() -> Self {
        OverlapPair(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
    }
    fn magnitude(&self) -> f64 {
        self.0.norm().max(self.1.norm())
    }
    fn is_finite_value(&self) -> bool {
        self.0.is_finite() && self.1.is_finite()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficients_satisfy_bogoliubov_normalization() {
        // |A|² − |B|² = 1/(2πaω) for every k and Ω.
        let g = RindlerGeometry::new(0.7, 1.3, 0.4).unwrap();
        for &(w, k) in &[(0.1, 0.0), (1.0, -2.0), (3.5, 0.7)] {
            for wedge in [Wedge::I, Wedge::II] {
                let (a, b) = plane_wave_coefficients(wedge, w, k, &g);
                let om = (k * k + g.m * g.m).sqrt();
                let lhs = a.norm_sqr() - b.norm_sqr();
                assert!((lhs * 2.0 * PI * g.a * om - 1.0).abs() < 1e-12);
                // |B/A| = e^{−πν}.
                assert!((b.norm() / a.norm() - (-PI * w / g.a).exp()).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn wedges_are_mirror_images() {
        let g = RindlerGeometry::new(1.0, 1.0, 0.6).unwrap();
        let (ai, bi) = plane_wave_coefficients(Wedge::I, 2.0, 0.8, &g);
        let (aii, bii) = plane_wave_coefficients(Wedge::II, 2.0, -0.8, &g);
        assert!((ai - aii).norm() < 1e-15);
        assert!((bi - bii).norm() < 1e-15);
    }
}
