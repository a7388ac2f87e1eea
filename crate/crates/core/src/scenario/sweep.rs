//! Relative purity of the symmetric squeezed vacuum seen by Z observers
//! with a common acceleration, under the β-free diagonal channel.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::alpha::AlphaProfile;
use crate::error::{Error, Result};
use crate::gaussian::{relative_purity, symmetric_squeezed_blocks, symmetric_squeezed_state, GaussianChannel};

/// Upper bound on μ_rel allowed for rounding.
pub const PURITY_SLACK: f64 = 1e-9;

/// M = α𝟙, N = (1 − α²)𝟙 on Z modes: the channel with every β neglected.
pub fn diagonal_channel(alpha: f64, modes: usize) -> Result<GaussianChannel> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Domain(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    if modes == 0 {
        return Err(Error::Domain("diagonal channel needs at least one mode".into()));
    }
    let dim = 2 * modes;
    GaussianChannel::new(
        DMatrix::identity(dim, dim) * alpha,
        DMatrix::identity(dim, dim) * (1.0 - alpha * alpha),
    )
}

/// μ_rel of the symmetric squeezed state under [`diagonal_channel`] from the
/// covariance eigenvalues: √(∏λᵢ / ∏(α²λᵢ + 1 − α²)).
pub fn closed_form_relative_purity(alpha: f64, modes: usize, r: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Domain(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    let blocks = symmetric_squeezed_blocks(modes, r)?;
    let a2 = alpha * alpha;
    let ln: f64 = blocks
        .covariance_eigenvalues(modes)
        .into_iter()
        .map(|(lambda, mult)| mult as f64 * (lambda.ln() - (a2 * lambda + 1.0 - a2).ln()))
        .sum();
    Ok((0.5 * ln).exp())
}

/// Axes of the sweep. Rows follow acceleration, then squeezing, then Z.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepGrid {
    pub accelerations: Vec<f64>,
    pub squeezings: Vec<f64>,
    pub mode_counts: Vec<usize>,
}

impl SweepGrid {
    pub fn validate(&self) -> Result<()> {
        for (name, empty) in [
            ("accelerations", self.accelerations.is_empty()),
            ("squeezings", self.squeezings.is_empty()),
            ("mode_counts", self.mode_counts.is_empty()),
        ] {
            if empty {
                return Err(Error::Config(format!("sweep grid: {name} must not be empty")));
            }
        }
        if let Some(a) = self.accelerations.iter().find(|a| !(**a > 0.0 && a.is_finite())) {
            return Err(Error::Config(format!(
                "sweep grid: accelerations must be positive and finite, got {a}"
            )));
        }
        if let Some(r) = self.squeezings.iter().find(|r| !(**r >= 0.0 && r.is_finite())) {
            return Err(Error::Config(format!(
                "sweep grid: squeezings must be finite and nonnegative, got {r}"
            )));
        }
        if let Some(z) = self.mode_counts.iter().find(|z| **z < 2) {
            return Err(Error::Config(format!(
                "sweep grid: mode_counts must be at least 2, got {z}"
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.accelerations.len() * self.squeezings.len() * self.mode_counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid points in row order.
    pub fn points(&self) -> Vec<(f64, f64, usize)> {
        let mut out = Vec::with_capacity(self.len());
        for &a in &self.accelerations {
            for &r in &self.squeezings {
                for &z in &self.mode_counts {
                    out.push((a, r, z));
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub acceleration: f64,
    pub r: f64,
    pub modes: usize,
    pub alpha: f64,
    pub mu_rel: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    /// Header `A,r,Z,alpha,mu_rel`, reals to 12 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("A,r,Z,alpha,mu_rel\n");
        for row in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                format_significant(row.acceleration, 12),
                format_significant(row.r, 12),
                row.modes,
                format_significant(row.alpha, 12),
                format_significant(row.mu_rel, 12)
            );
        }
        out
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_csv()).map_err(|e| Error::io(path, e))
    }
}

/// Builds the symmetric squeezed state, applies the diagonal channel at
/// α(𝒜) and records μ_rel for every grid point, in grid order.
pub fn relative_purity_surface(grid: &SweepGrid, profile: &AlphaProfile) -> Result<SweepResult> {
    grid.validate()?;
    let alphas = grid
        .accelerations
        .iter()
        .map(|&a| profile.eval(a))
        .collect::<Result<Vec<_>>>()?;
    let per_acc = grid.squeezings.len() * grid.mode_counts.len();
    let rows = grid
        .points()
        .into_par_iter()
        .enumerate()
        .map(|(idx, (acceleration, r, modes))| {
            let alpha = alphas[idx / per_acc];
            let state = symmetric_squeezed_state(modes, r)?;
            let mu_rel = relative_purity(&state, &diagonal_channel(alpha, modes)?)?;
            if !(mu_rel > 0.0 && mu_rel <= 1.0 + PURITY_SLACK) {
                return Err(Error::InvalidState(format!(
                    "relative purity {mu_rel} outside (0, 1] at A = {acceleration}, r = {r}, Z = {modes}"
                )));
            }
            Ok(SweepRow {
                acceleration,
                r,
                modes,
                alpha,
                mu_rel,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult { rows })
}

/// Shortest `%.{digits}g` rendering: fixed notation for decimal exponents
/// in [−5, digits), scientific otherwise, trailing zeros removed.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        format!("{}e{exp}", trim_zeros(mantissa))
    } else {
        trim_zeros(&format!("{:.*}", (digits as i32 - 1 - exp) as usize, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
