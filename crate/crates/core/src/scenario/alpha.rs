//! The overlap α between an inertial packet and its accelerated counterpart
//! as a function of the observer's proper acceleration 𝒜.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kgmodes::{
    check_normalization, overlap_in_frequency_space, rindler_projection, MinkowskiSpectrum, RindlerGeometry,
    RindlerSpectrum, TabulatedProfile, Wedge,
};
use crate::specfun::QuadratureSpec;

/// Inertial packets at rest at the observer's t = 0 position, paired with
/// their normalized wedge-I projections.
///
/// The observer moves on χ = 1/𝒜 in a wedge with a = 𝒜, so Ω is its proper
/// frequency. The inertial packet is a Gaussian momentum bump centred at
/// k = 0 and x = 1/𝒜. The accelerated packet is the projection
/// h(Ω) = (w_IΩ, φ) times the detector window e^{−(Ω_c/Ω)²}, which removes
/// the logarithmic infrared divergence of ∫|h|² dΩ. All lengths are in units
/// of 1/m.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PacketFamily {
    /// Momentum width s_k of the inertial packet, in units of m.
    pub momentum_width: f64,
    /// Detector cutoff Ω_c, in units of m.
    pub ir_cutoff: f64,
    /// Ω nodes of the tabulated accelerated profile.
    pub nodes: usize,
}

impl Default for PacketFamily {
    fn default() -> Self {
        PacketFamily {
            momentum_width: 0.5,
            ir_cutoff: 0.1,
            nodes: 128,
        }
    }
}

/// Relative size of the projection outside the tabulated band.
const BAND_FLOOR: f64 = 1e-10;

/// One matched pair of the family at a fixed acceleration.
#[derive(Clone, Debug)]
pub struct MatchedPair {
    pub geometry: RindlerGeometry,
    pub phi: MinkowskiSpectrum,
    pub psi: RindlerSpectrum,
    /// ∫ W²|h|² dΩ before normalization.
    pub raw_norm: f64,
}

/// α and β of one matched pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaSample {
    pub acceleration: f64,
    /// |(ψ|φ)|, clamped to 1.
    pub alpha: f64,
    /// |(ψ|φ*)| = |β|.
    pub beta: f64,
    /// (ψ|φ) before taking the modulus.
    pub raw_alpha: Complex64,
    pub clamped: bool,
}

impl PacketFamily {
    pub fn validate(&self) -> Result<()> {
        if !(self.momentum_width > 0.0 && self.momentum_width.is_finite()) {
            return Err(Error::Domain(format!(
                "momentum_width must be positive, got {}",
                self.momentum_width
            )));
        }
        if !(self.ir_cutoff > 0.0 && self.ir_cutoff.is_finite()) {
            return Err(Error::Domain(format!(
                "ir_cutoff must be positive, got {}",
                self.ir_cutoff
            )));
        }
        if self.nodes < 16 {
            return Err(Error::Domain(format!("nodes must be at least 16, got {}", self.nodes)));
        }
        Ok(())
    }

    /// Builds φ and the normalized ψ at acceleration 𝒜 for field mass m.
    pub fn matched_pair(&self, acceleration: f64, m: f64) -> Result<MatchedPair> {
        self.validate()?;
        if !(acceleration > 0.0 && acceleration.is_finite()) {
            return Err(Error::Domain(format!(
                "acceleration must be positive, got {acceleration}"
            )));
        }
        let geometry = RindlerGeometry::new(acceleration, m, 0.0)?;
        let phi = MinkowskiSpectrum::bump(0.0, self.momentum_width * m, 1.0 / acceleration)?;
        let cutoff = self.ir_cutoff * m;
        let window = |w: f64| (-(cutoff / w).powi(2)).exp();

        // Widen the probe until the projection is negligible at its top.
        let mut top = 4.0 * m * (1.0 + acceleration / self.momentum_width);
        let probe = 128;
        let (lo, hi) = loop {
            let grid: Vec<f64> = (1..=probe).map(|j| top * j as f64 / probe as f64).collect();
            let mags: Vec<f64> = rindler_projection(&phi, Wedge::I, &geometry, &grid, window)?
                .values()
                .iter()
                .map(|v| v.norm())
                .collect();
            let peak = mags.iter().cloned().fold(0.0, f64::max);
            if !(peak > 0.0) {
                return Err(Error::Precondition(format!(
                    "projection at 𝒜 = {acceleration} vanishes"
                )));
            }
            let floor = BAND_FLOOR * peak;
            if mags[probe - 2..].iter().all(|&v| v <= floor) {
                // One probe step of margin on each side of the significant band.
                let first = mags.iter().position(|&v| v > floor).unwrap_or(0);
                let last = mags.iter().rposition(|&v| v > floor).unwrap_or(probe - 1);
                let lo = if first == 0 { 0.0 } else { grid[first - 1] };
                break (lo, grid[(last + 1).min(probe - 1)]);
            }
            top *= 2.0;
            if top > 1e4 * m {
                return Err(Error::Precondition(format!(
                    "projection at 𝒜 = {acceleration} does not decay below Ω = {top}"
                )));
            }
        };
        // Quadratic spacing from Ω = 0 resolves the window's rise near Ω_c.
        let n = self.nodes;
        let grid: Vec<f64> = (0..n)
            .map(|j| {
                let t = j as f64 / (n - 1) as f64;
                lo + (hi - lo) * if lo == 0.0 { t * t } else { t }
            })
            .collect();
        let h = rindler_projection(&phi, Wedge::I, &geometry, &grid, window)?;
        let raw = RindlerSpectrum::single(Wedge::I, h.clone());
        let raw_norm = check_normalization(&raw, &geometry)?;
        if !(raw_norm > 0.0) {
            return Err(Error::Precondition(format!(
                "projection at 𝒜 = {acceleration} vanishes"
            )));
        }
        let scale = raw_norm.sqrt().recip();
        let values: Vec<Complex64> = h.values().iter().map(|v| v * scale).collect();
        let psi = RindlerSpectrum::single(Wedge::I, TabulatedProfile::new(grid, values)?);
        Ok(MatchedPair {
            geometry,
            phi,
            psi,
            raw_norm,
        })
    }

    /// α = |(ψ|φ)| and β = |(ψ|φ*)| from Ω-space overlaps. The position
    /// route sums terms of size e^{πΩ/2a} down to O(1) and loses that many
    /// digits once Ω/a ≳ 10, which is where these packets live at small 𝒜.
    pub fn sample(&self, acceleration: f64, m: f64, spec: &QuadratureSpec) -> Result<AlphaSample> {
        let pair = self.matched_pair(acceleration, m)?;
        let [raw_alpha, beta] = overlap_in_frequency_space(&pair.psi, &pair.phi, &pair.geometry, spec)?.value;
        let modulus = raw_alpha.norm();
        Ok(AlphaSample {
            acceleration,
            alpha: modulus.min(1.0),
            beta: beta.norm(),
            raw_alpha,
            clamped: modulus > 1.0,
        })
    }
}

/// Tabulated α(𝒜) on strictly increasing accelerations, linear in between.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaProfile {
    accelerations: Vec<f64>,
    alphas: Vec<f64>,
}

impl AlphaProfile {
    pub fn new(accelerations: Vec<f64>, alphas: Vec<f64>) -> Result<Self> {
        if accelerations.len() != alphas.len() {
            return Err(Error::Dimension {
                expected: accelerations.len(),
                got: alphas.len(),
                context: "alpha profile values".into(),
            });
        }
        if accelerations.is_empty() {
            return Err(Error::Config("an alpha profile needs at least one row".into()));
        }
        if let Some(a) = accelerations.iter().find(|a| !(**a > 0.0 && a.is_finite())) {
            return Err(Error::Domain(format!(
                "alpha profile accelerations must be positive, got {a}"
            )));
        }
        if let Some(w) = accelerations.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::Config(format!(
                "alpha profile accelerations must increase strictly ({} then {})",
                w[0], w[1]
            )));
        }
        if let Some(a) = alphas.iter().find(|a| !(**a > 0.0 && **a <= 1.0)) {
            return Err(Error::Domain(format!("alpha must lie in (0, 1], got {a}")));
        }
        Ok(AlphaProfile { accelerations, alphas })
    }

    pub fn from_points(points: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            points.iter().map(|p| p.0).collect(),
            points.iter().map(|p| p.1).collect(),
        )
    }

    /// Samples `family` at each acceleration. Moduli above 1 are clamped and
    /// reported through [`AlphaSample::clamped`].
    pub fn compute(
        family: &PacketFamily,
        accelerations: &[f64],
        m: f64,
        spec: &QuadratureSpec,
    ) -> Result<(Self, Vec<AlphaSample>)> {
        let samples = accelerations
            .par_iter()
            .map(|&acc| family.sample(acc, m, spec))
            .collect::<Result<Vec<_>>>()?;
        let profile = Self::new(accelerations.to_vec(), samples.iter().map(|s| s.alpha).collect())?;
        Ok((profile, samples))
    }

    pub fn accelerations(&self) -> &[f64] {
        &self.accelerations
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn range(&self) -> (f64, f64) {
        (self.accelerations[0], self.accelerations[self.accelerations.len() - 1])
    }

    /// Linear interpolation; outside the tabulated range is an error.
    pub fn eval(&self, acceleration: f64) -> Result<f64> {
        let (lo, hi) = self.range();
        if !(acceleration >= lo && acceleration <= hi) {
            return Err(Error::Interpolation(format!(
                "acceleration {acceleration} outside the alpha profile range [{lo}, {hi}]"
            )));
        }
        let i = self.accelerations.partition_point(|&a| a <= acceleration);
        if i == self.accelerations.len() {
            return Ok(self.alphas[i - 1]);
        }
        let (a0, a1) = (self.accelerations[i - 1], self.accelerations[i]);
        let t = (acceleration - a0) / (a1 - a0);
        Ok(self.alphas[i - 1] + t * (self.alphas[i] - self.alphas[i - 1]))
    }

    /// Warning text when α increases somewhere along the table.
    pub fn monotonicity_warning(&self) -> Option<String> {
        let rises: Vec<String> = self
            .accelerations
            .windows(2)
            .zip(self.alphas.windows(2))
            .filter(|(_, al)| al[1] > al[0])
            .map(|(ac, al)| format!("α({}) = {} < α({}) = {}", ac[0], al[0], ac[1], al[1]))
            .collect();
        (!rises.is_empty()).then(|| format!("alpha profile is not non-increasing: {}", rises.join("; ")))
    }

    /// Parses rows `A alpha`; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut acc = Vec::new();
        let mut alpha = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(Error::parse(
                    "alpha table",
                    format!("line {}: expected 2 columns, found {}", lineno + 1, fields.len()),
                ));
            }
            let num = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| Error::parse("alpha table", format!("line {}: {e}", lineno + 1)))
            };
            acc.push(num(fields[0])?);
            alpha.push(num(fields[1])?);
        }
        Self::new(acc, alpha)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn to_table_string(&self) -> String {
        let mut out = String::new();
        for (a, al) in self.accelerations.iter().zip(&self.alphas) {
            let _ = writeln!(out, "{a:.17e} {al:.17e}");
        }
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_table_string()).map_err(|e| Error::io(path, e))
    }
}
