use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::kgmodes::RindlerGeometry;
use crate::specfun::{bessel_k_imag_order, BesselKiTable, QuadratureSpec};

/// ln sinh(x) for x > 0 without overflow.
fn ln_sinh(x: f64) -> f64 {
    if x > 20.0 {
        x - std::f64::consts::LN_2 + (-(-2.0 * x).exp()).ln_1p()
    } else {
        x.sinh().ln()
    }
}

/// ln of e^{π(Ω ± Ω′)(1 − D/|D|)/(2a)} / (2πa √(sinh(πΩ/a) sinh(πΩ′/a))).
fn ln_prefactor(omega: f64, omega_p: f64, sign: f64, geometry: &RindlerGeometry) -> f64 {
    let a = geometry.a;
    let tilt = 1.0 - geometry.separation_sign();
    PI * (omega + sign * omega_p) * tilt / (2.0 * a)
        - (2.0 * PI * a).ln()
        - 0.5 * (ln_sinh(PI * omega / a) + ln_sinh(PI * omega_p / a))
}

fn check(omega: f64, omega_p: f64, geometry: &RindlerGeometry) -> Result<()> {
    geometry.validate()?;
    if geometry.d == 0.0 {
        return Err(Error::Branch(
            "I1/I3 kernels need D ≠ 0; use the D = 0 covariance path".into(),
        ));
    }
    if !(omega > 0.0 && omega_p > 0.0) {
        return Err(Error::Domain(format!(
            "kernel frequencies must be positive, got ({omega}, {omega_p})"
        )));
    }
    Ok(())
}

fn tight() -> QuadratureSpec {
    QuadratureSpec::default().with_abs_tol(1e-16).with_rel_tol(1e-14)
}

/// I₁(Ω, Ω′) = e^{π(Ω−Ω′)(1−D/|D|)/(2a)} K_{i(Ω−Ω′)/a}(|mD|) / (2πa √(sinh(πΩ/a) sinh(πΩ′/a))).
pub fn i1_kernel(omega: f64, omega_p: f64, geometry: &RindlerGeometry) -> Result<f64> {
    check(omega, omega_p, geometry)?;
    let k = bessel_k_imag_order(
        (omega - omega_p) / geometry.a,
        (geometry.m * geometry.d).abs(),
        &tight(),
    )?;
    Ok(k.value * ln_prefactor(omega, omega_p, -1.0, geometry).exp())
}

/// I₃(Ω, Ω′) = e^{π(Ω+Ω′)(1−D/|D|)/(2a)} K_{i(Ω+Ω′)/a}(|mD|) / (2πa √(sinh(πΩ/a) sinh(πΩ′/a))).
pub fn i3_kernel(omega: f64, omega_p: f64, geometry: &RindlerGeometry) -> Result<f64> {
    check(omega, omega_p, geometry)?;
    let k = bessel_k_imag_order(
        (omega + omega_p) / geometry.a,
        (geometry.m * geometry.d).abs(),
        &tight(),
    )?;
    Ok(k.value * ln_prefactor(omega, omega_p, 1.0, geometry).exp())
}

/// I₂(Ω, Ω′) = ⟨b†_IΩ b_IIΩ′⟩ = e^{−π(Ω+Ω′)(1−D/|D|)/(2a)} K_{i(Ω+Ω′)/a}(|mD|) / (2πa √(sinh sinh)),
/// equal to I₃ e^{−π(Ω+Ω′)(1−D/|D|)/a}; it coincides with I₃ for D > 0.
pub fn i2_kernel(omega: f64, omega_p: f64, geometry: &RindlerGeometry) -> Result<f64> {
    let tilt = 1.0 - geometry.separation_sign();
    Ok(i3_kernel(omega, omega_p, geometry)? * (-PI * (omega + omega_p) * tilt / geometry.a).exp())
}

/// I₁ and I₃ at one geometry, backed by a shared table of K_{iν}(|mD|) for
/// |ν| ≤ 2Ω_max/a. Same formulas as [`i1_kernel`] and [`i3_kernel`].
#[derive(Clone, Debug)]
pub struct Kernels {
    geometry: RindlerGeometry,
    table: BesselKiTable,
}

impl Kernels {
    pub fn new(geometry: &RindlerGeometry, omega_max: f64) -> Result<Self> {
        check(omega_max, omega_max, geometry)?;
        let table = BesselKiTable::new((geometry.m * geometry.d).abs(), 2.0 * omega_max / geometry.a)?;
        Ok(Kernels {
            geometry: *geometry,
            table,
        })
    }

    pub fn geometry(&self) -> &RindlerGeometry {
        &self.geometry
    }

    /// Zero when either frequency vanishes, the limit of the profiles
    /// multiplying it.
    pub fn i1(&self, omega: f64, omega_p: f64) -> f64 {
        if omega <= 0.0 || omega_p <= 0.0 {
            return 0.0;
        }
        let g = &self.geometry;
        self.table.eval((omega - omega_p) / g.a) * ln_prefactor(omega, omega_p, -1.0, g).exp()
    }

    pub fn i3(&self, omega: f64, omega_p: f64) -> f64 {
        if omega <= 0.0 || omega_p <= 0.0 {
            return 0.0;
        }
        let g = &self.geometry;
        self.table.eval((omega + omega_p) / g.a) * ln_prefactor(omega, omega_p, 1.0, g).exp()
    }

    pub fn i2(&self, omega: f64, omega_p: f64) -> f64 {
        if omega <= 0.0 || omega_p <= 0.0 {
            return 0.0;
        }
        let g = &self.geometry;
        let tilt = 1.0 - g.separation_sign();
        let ln = ln_prefactor(omega, omega_p, 1.0, g) - PI * (omega + omega_p) * tilt / g.a;
        self.table.eval((omega + omega_p) / g.a) * ln.exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn branch_and_domain_errors() {
        let g0 = RindlerGeometry::new(1.0, 1.0, 0.0).unwrap();
        assert!(matches!(i1_kernel(1.0, 2.0, &g0), Err(Error::Branch(_))));
        let g = RindlerGeometry::new(1.0, 1.0, 0.5).unwrap();
        assert!(matches!(i3_kernel(0.0, 2.0, &g), Err(Error::Domain(_))));
    }

    #[test]
    fn table_matches_direct_kernels() {
        for d in [0.5, -0.5, 1e-3] {
            let g = RindlerGeometry::new(1.3, 0.8, d).unwrap();
            let k = Kernels::new(&g, 5.0).unwrap();
            for &(w, wp) in &[(0.3, 0.3), (1.0, 2.0), (4.5, 0.2)] {
                let (a, b) = (k.i1(w, wp), i1_kernel(w, wp, &g).unwrap());
                assert!((a - b).abs() < 1e-13 * b.abs().max(1.0), "{a} {b}");
                let (a, b) = (k.i3(w, wp), i3_kernel(w, wp, &g).unwrap());
                assert!((a - b).abs() < 1e-13 * b.abs().max(1.0), "{a} {b}");
            }
        }
    }
}
