use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::linalg::{asymmetry, check_square, from_rows, hermitian_min_eigenvalue, max_abs, symmetrize, to_rows};
use super::symplectic::SymplecticForm;
use crate::error::{Error, Result};

/// Relative asymmetry accepted (and symmetrized away) on construction.
const SYMMETRY_TOL: f64 = 1e-12;

/// Z-mode Gaussian state: first moments and covariance in the ordering
/// (q₁, p₁, …, q_Z, p_Z), with the vacuum covariance equal to 𝟙.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StateFile", into = "StateFile")]
pub struct GaussianState {
    modes: usize,
    first_moments: DVector<f64>,
    covariance: DMatrix<f64>,
}

/// Exchange layout `{"Z": int, "X": [...], "sigma": [[...]]}`.
#[derive(Serialize, Deserialize)]
struct StateFile {
    #[serde(rename = "Z")]
    z: usize,
    #[serde(rename = "X")]
    x: Vec<f64>,
    sigma: Vec<Vec<f64>>,
}

impl TryFrom<StateFile> for GaussianState {
    type Error = Error;
    fn try_from(f: StateFile) -> Result<Self> {
        let sigma = from_rows(&f.sigma, "sigma")?;
        GaussianState::new(f.z, DVector::from_vec(f.x), sigma)
    }
}

impl From<GaussianState> for StateFile {
    fn from(s: GaussianState) -> Self {
        StateFile {
            z: s.modes,
            x: s.first_moments.iter().copied().collect(),
            sigma: to_rows(&s.covariance),
        }
    }
}

impl GaussianState {
    /// Validates dimensions, finiteness and symmetry; rounding-level
    /// asymmetry is removed.
    pub fn new(modes: usize, first_moments: DVector<f64>, mut covariance: DMatrix<f64>) -> Result<Self> {
        if modes == 0 {
            return Err(Error::Domain("a Gaussian state needs at least one mode".into()));
        }
        let dim = 2 * modes;
        if first_moments.len() != dim {
            return Err(Error::Dimension {
                expected: dim,
                got: first_moments.len(),
                context: "first-moment vector".into(),
            });
        }
        if first_moments.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidState("first moments must be finite".into()));
        }
        check_square(&covariance, dim, "covariance")?;
        let asym = asymmetry(&covariance);
        if asym > SYMMETRY_TOL * max_abs(&covariance).max(1.0) {
            return Err(Error::InvalidState(format!(
                "covariance is not symmetric (max |σ_ij − σ_ji| = {asym:e})"
            )));
        }
        symmetrize(&mut covariance);
        Ok(GaussianState {
            modes,
            first_moments,
            covariance,
        })
    }

    /// Zero-mean state with the given covariance.
    pub fn centered(covariance: DMatrix<f64>) -> Result<Self> {
        let dim = covariance.nrows();
        if dim == 0 || dim % 2 != 0 {
            return Err(Error::Config(format!(
                "covariance dimension {dim} is not 2Z with Z ≥ 1"
            )));
        }
        GaussianState::new(dim / 2, DVector::zeros(dim), covariance)
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn first_moments(&self) -> &DVector<f64> {
        &self.first_moments
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.covariance
    }

    /// Smallest eigenvalue of σ + iΩ_s; nonnegative for physical states.
    pub fn uncertainty_margin(&self) -> f64 {
        hermitian_min_eigenvalue(&self.covariance, &SymplecticForm::new(self.modes).matrix())
    }

    /// Fails unless σ + iΩ_s ⪰ −tol.
    pub fn check_uncertainty(&self, tol: f64) -> Result<()> {
        let margin = self.uncertainty_margin();
        if margin < -tol {
            return Err(Error::InvalidState(format!(
                "uncertainty relation violated: min eig(σ + iΩ) = {margin:e}"
            )));
        }
        Ok(())
    }

    pub fn determinant(&self) -> f64 {
        self.covariance.determinant()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::parse("Gaussian state JSON", e))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("state serialization is infallible")
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

/// X = 0, σ = 𝟙 on Z modes.
pub fn vacuum_state(modes: usize) -> Result<GaussianState> {
    if modes == 0 {
        return Err(Error::Domain("vacuum state needs Z ≥ 1".into()));
    }
    GaussianState::centered(DMatrix::identity(2 * modes, 2 * modes))
}

/// μ = 1/√(det σ); 1 for pure states.
pub fn purity(state: &GaussianState) -> Result<f64> {
    let det = state.determinant();
    if !(det > 0.0) {
        return Err(Error::InvalidState(format!("det σ = {det:e} is not positive")));
    }
    Ok(det.sqrt().recip())
}

/// Williamson spectrum ν₁ ≤ … ≤ ν_Z: the moduli of the eigenvalues of iΩ_sσ,
/// each of which appears twice. Computed as the square roots of the
/// eigenvalues of −A² with A = σ^{1/2}Ω_sσ^{1/2} antisymmetric.
pub fn symplectic_eigenvalues(state: &GaussianState) -> Result<Vec<f64>> {
    let eig = state.covariance.clone().symmetric_eigen();
    if let Some(bad) = eig.eigenvalues.iter().find(|&&v| !(v > 0.0)) {
        return Err(Error::InvalidState(format!(
            "covariance is not positive definite (eigenvalue {bad:e})"
        )));
    }
    let root =
        &eig.eigenvectors * DMatrix::from_diagonal(&eig.eigenvalues.map(f64::sqrt)) * eig.eigenvectors.transpose();
    let omega = SymplecticForm::new(state.modes).matrix();
    let a = &root * omega * &root;
    let mut sq = -(&a * &a);
    symmetrize(&mut sq);
    let mut vals: Vec<f64> = sq.symmetric_eigenvalues().iter().map(|v| v.max(0.0).sqrt()).collect();
    vals.sort_by(f64::total_cmp);
    Ok(vals.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect())
}
