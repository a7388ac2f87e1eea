use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::linalg::{asymmetry, check_square, from_rows, hermitian_min_eigenvalue, max_abs, symmetrize, to_rows};
use super::state::GaussianState;
use super::symplectic::SymplecticForm;
use crate::error::{Error, Result};

const SYMMETRY_TOL: f64 = 1e-12;

/// Gaussian channel X → MX, σ → MσMᵀ + N on Z modes, with per-element
/// error bounds carried from the quadratures that produced it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChannelFile", into = "ChannelFile")]
pub struct GaussianChannel {
    m: DMatrix<f64>,
    n: DMatrix<f64>,
    element_errors: DMatrix<f64>,
}

/// Exchange layout `{"M": [[...]], "N": [[...]], "errors": [[...]]}`.
#[derive(Serialize, Deserialize)]
struct ChannelFile {
    #[serde(rename = "M")]
    m: Vec<Vec<f64>>,
    #[serde(rename = "N")]
    n: Vec<Vec<f64>>,
    #[serde(default)]
    errors: Option<Vec<Vec<f64>>>,
}

impl TryFrom<ChannelFile> for GaussianChannel {
    type Error = Error;
    fn try_from(f: ChannelFile) -> Result<Self> {
        let m = from_rows(&f.m, "M")?;
        let n = from_rows(&f.n, "N")?;
        let errors = match f.errors {
            Some(e) => from_rows(&e, "errors")?,
            None => DMatrix::zeros(m.nrows(), m.ncols()),
        };
        GaussianChannel::with_errors(m, n, errors)
    }
}

impl From<GaussianChannel> for ChannelFile {
    fn from(c: GaussianChannel) -> Self {
        ChannelFile {
            m: to_rows(&c.m),
            n: to_rows(&c.n),
            errors: Some(to_rows(&c.element_errors)),
        }
    }
}

impl GaussianChannel {
    pub fn new(m: DMatrix<f64>, n: DMatrix<f64>) -> Result<Self> {
        let dim = m.nrows();
        GaussianChannel::with_errors(m, n, DMatrix::zeros(dim, dim))
    }

    pub fn with_errors(m: DMatrix<f64>, mut n: DMatrix<f64>, element_errors: DMatrix<f64>) -> Result<Self> {
        let dim = m.nrows();
        if dim == 0 || dim % 2 != 0 {
            return Err(Error::Config(format!("channel dimension {dim} is not 2Z with Z ≥ 1")));
        }
        check_square(&m, dim, "M")?;
        check_square(&n, dim, "N")?;
        check_square(&element_errors, dim, "channel error matrix")?;
        if element_errors.iter().any(|&e| e < 0.0) {
            return Err(Error::Config("channel error estimates must be nonnegative".into()));
        }
        let asym = asymmetry(&n);
        if asym > SYMMETRY_TOL * max_abs(&n).max(1.0) {
            return Err(Error::InvalidState(format!(
                "N is not symmetric (max |N_ij − N_ji| = {asym:e})"
            )));
        }
        symmetrize(&mut n);
        Ok(GaussianChannel { m, n, element_errors })
    }

    /// M = 𝟙, N = 0.
    pub fn identity(modes: usize) -> Self {
        let dim = 2 * modes;
        GaussianChannel {
            m: DMatrix::identity(dim, dim),
            n: DMatrix::zeros(dim, dim),
            element_errors: DMatrix::zeros(dim, dim),
        }
    }

    pub fn modes(&self) -> usize {
        self.m.nrows() / 2
    }

    pub fn m(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn n(&self) -> &DMatrix<f64> {
        &self.n
    }

    pub fn element_errors(&self) -> &DMatrix<f64> {
        &self.element_errors
    }

    /// Smallest eigenvalue of N + i(Ω_s − MΩ_sMᵀ); nonnegative exactly when
    /// the channel is completely positive.
    pub fn physicality_margin(&self) -> f64 {
        let w = SymplecticForm::new(self.modes()).matrix();
        let mut twist = &w - &self.m * &w * self.m.transpose();
        // Antisymmetrize rounding residue.
        let t = twist.clone();
        twist = 0.5 * (&t - t.transpose());
        hermitian_min_eigenvalue(&self.n, &twist)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::parse("Gaussian channel JSON", e))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("channel serialization is infallible")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json() + "\n").map_err(|e| Error::io(path, e))
    }
}

/// X → MX, σ → MσMᵀ + N, with the output symmetrized.
pub fn apply_channel(channel: &GaussianChannel, state: &GaussianState) -> Result<GaussianState> {
    if channel.modes() != state.modes() {
        return Err(Error::Dimension {
            expected: 2 * channel.modes(),
            got: 2 * state.modes(),
            context: "state dimension against channel dimension".into(),
        });
    }
    let x = &channel.m * state.first_moments();
    let mut sigma = &channel.m * state.covariance() * channel.m.transpose() + &channel.n;
    symmetrize(&mut sigma);
    GaussianState::new(state.modes(), x, sigma)
}

/// μ_rel = √(det σ_in / det σ_out); independent of the overall scale of σ.
pub fn relative_purity(state_in: &GaussianState, channel: &GaussianChannel) -> Result<f64> {
    let out = apply_channel(channel, state_in)?;
    let (din, dout) = (state_in.determinant(), out.determinant());
    if !(din > 0.0) || !(dout > 0.0) {
        return Err(Error::InvalidState(format!(
            "relative purity needs positive determinants, got {din:e} and {dout:e}"
        )));
    }
    Ok((din / dout).sqrt())
}
