use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::geometry::Wedge;
use super::profile::{MomentumBump, OmegaBump, Profile};
use crate::error::{Error, Result};
use crate::specfun::{try_integrate_finite, QuadratureSpec};

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// A profile times a complex amplitude.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub profile: Profile,
    #[serde(default = "one")]
    pub amplitude: Complex64,
}

impl Component {
    pub fn new(profile: impl Into<Profile>, amplitude: Complex64) -> Self {
        Component {
            profile: profile.into(),
            amplitude,
        }
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        self.amplitude * self.profile.eval(x)
    }

    fn norm_squared(&self, lower: Option<f64>, spec: &QuadratureSpec) -> Result<f64> {
        let (mut lo, hi) = self.profile.support();
        if let Some(l) = lower {
            lo = lo.max(l);
        }
        if !(hi > lo) {
            return Ok(0.0);
        }
        let eval = self.profile.evaluator();
        let bp: Vec<f64> = self
            .profile
            .breakpoints()
            .into_iter()
            .filter(|&b| b > lo && b < hi)
            .collect();
        let r = try_integrate_finite(|x| Ok(eval(x).norm_sqr()), lo, hi, &bp, spec)?;
        Ok(self.amplitude.norm_sqr() * r.value)
    }
}

/// Wavepacket φ = ∫dk f(k) u_k of Minkowski plane waves.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinkowskiSpectrum {
    #[serde(flatten)]
    pub f: Component,
}

impl MinkowskiSpectrum {
    pub fn new(profile: impl Into<Profile>) -> Self {
        MinkowskiSpectrum {
            f: Component::new(profile, one()),
        }
    }

    pub fn bump(center: f64, width: f64, position: f64) -> Result<Self> {
        Ok(Self::new(MomentumBump::new(center, width, position)?))
    }

    pub fn scaled(mut self, c: Complex64) -> Self {
        self.f.amplitude *= c;
        self
    }

    pub fn eval(&self, k: f64) -> Complex64 {
        self.f.eval(k)
    }

    /// ∫|f(k)|² dk.
    pub fn norm_squared(&self, spec: &QuadratureSpec) -> Result<f64> {
        self.f.norm_squared(None, spec)
    }
}

/// Wavepacket ψ = ∫dΩ (g_I w_IΩ + g_II w_IIΩ) of Rindler modes.
/// An absent wedge profile is identically zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RindlerSpectrum {
    #[serde(default)]
    pub g_i: Option<Component>,
    #[serde(default)]
    pub g_ii: Option<Component>,
}

impl RindlerSpectrum {
    pub fn single(wedge: Wedge, profile: impl Into<Profile>) -> Self {
        let c = Some(Component::new(profile, one()));
        match wedge {
            Wedge::I => RindlerSpectrum { g_i: c, g_ii: None },
            Wedge::II => RindlerSpectrum { g_i: None, g_ii: c },
        }
    }

    /// Single-wedge unit-norm Ω bump.
    pub fn bump(wedge: Wedge, center: f64, width: f64) -> Result<Self> {
        Ok(Self::single(wedge, OmegaBump::new(center, width)?))
    }

    /// Two-wedge spectrum c_I g_I ⊕ c_II g_II; unit norm when both profiles
    /// are and |c_I|² + |c_II|² = 1.
    pub fn split(
        profile_i: impl Into<Profile>,
        c_i: Complex64,
        profile_ii: impl Into<Profile>,
        c_ii: Complex64,
    ) -> Self {
        RindlerSpectrum {
            g_i: Some(Component::new(profile_i, c_i)),
            g_ii: Some(Component::new(profile_ii, c_ii)),
        }
    }

    pub fn component(&self, wedge: Wedge) -> Option<&Component> {
        match wedge {
            Wedge::I => self.g_i.as_ref(),
            Wedge::II => self.g_ii.as_ref(),
        }
    }

    /// g_Λ(Ω); zero for Ω ≤ 0 and for absent wedges.
    pub fn eval(&self, wedge: Wedge, omega: f64) -> Complex64 {
        if omega <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        self.component(wedge)
            .map_or(Complex64::new(0.0, 0.0), |c| c.eval(omega))
    }

    pub fn scaled(mut self, c: Complex64) -> Self {
        for comp in [&mut self.g_i, &mut self.g_ii].into_iter().flatten() {
            comp.amplitude *= c;
        }
        self
    }

    /// The wedge carrying the whole packet, if only one does.
    pub fn single_wedge(&self) -> Option<Wedge> {
        match (&self.g_i, &self.g_ii) {
            (Some(_), None) => Some(Wedge::I),
            (None, Some(_)) => Some(Wedge::II),
            _ => None,
        }
    }

    /// Ω-interval outside which g_Λ is negligible; `None` for absent wedges.
    pub fn support(&self, wedge: Wedge) -> Option<(f64, f64)> {
        self.component(wedge).map(|c| {
            let (lo, hi) = c.profile.support();
            (lo.max(0.0), hi)
        })
    }

    /// Combined Ω support of both wedges.
    pub fn omega_support(&self) -> Option<(f64, f64)> {
        [Wedge::I, Wedge::II]
            .iter()
            .filter_map(|&w| self.support(w))
            .reduce(|a, b| (a.0.min(b.0), a.1.max(b.1)))
    }

    /// Non-smooth points of both wedge profiles.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut bp: Vec<f64> = [&self.g_i, &self.g_ii]
            .into_iter()
            .flatten()
            .flat_map(|c| c.profile.breakpoints())
            .collect();
        bp.sort_by(f64::total_cmp);
        bp.dedup();
        bp
    }

    pub fn validate(&self) -> Result<()> {
        if self.g_i.is_none() && self.g_ii.is_none() {
            return Err(Error::Config(
                "a Rindler spectrum needs at least one wedge profile".into(),
            ));
        }
        for c in [&self.g_i, &self.g_ii].into_iter().flatten() {
            c.profile.validate()?;
            if matches!(c.profile, Profile::MomentumBump(_)) {
                return Err(Error::Config("Rindler spectra take Ω profiles, not k bumps".into()));
            }
        }
        Ok(())
    }

    /// ∫₀^∞ (|g_I|² + |g_II|²) dΩ.
    pub fn norm_squared(&self, spec: &QuadratureSpec) -> Result<f64> {
        let mut total = 0.0;
        for c in [&self.g_i, &self.g_ii].into_iter().flatten() {
            total += c.norm_squared(Some(0.0), spec)?;
        }
        Ok(total)
    }
}
