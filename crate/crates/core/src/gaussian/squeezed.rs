use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::state::GaussianState;
use crate::error::{Error, Result};

/// Entries of the fully symmetric Z-mode squeezed vacuum: every diagonal
/// 2×2 block is diag(b, b) (`b_block`), every off-diagonal block is
/// diag(z₁, z₂).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SqueezedBlocks {
    pub b_block: f64,
    pub z1: f64,
    pub z2: f64,
}

impl SqueezedBlocks {
    /// Eigenvalues of the covariance: b + (Z−1)z₁ and b + (Z−1)z₂ once each,
    /// b − z₁ and b − z₂ with multiplicity Z − 1.
    pub fn covariance_eigenvalues(&self, modes: usize) -> Vec<(f64, usize)> {
        let zm = (modes - 1) as f64;
        vec![
            (self.b_block + zm * self.z1, 1),
            (self.b_block - self.z1, modes - 1),
            (self.b_block + zm * self.z2, 1),
            (self.b_block - self.z2, modes - 1),
        ]
    }
}

/// b, z₁, z₂ for Z modes at squeezing r:
///
/// ```text
/// S  = √(2(Z−1)cosh 4r + (Z−2)Z + 2)
/// b  = S / Z
/// z₁ = (2(Z−2) sinh²2r + Z sinh 4r) / (Z S)
/// z₂ = (2(Z−2) sinh²2r − Z sinh 4r) / (Z S)
/// ```
pub fn symmetric_squeezed_blocks(modes: usize, r: f64) -> Result<SqueezedBlocks> {
    if modes < 2 {
        return Err(Error::Domain(format!(
            "symmetric squeezed state needs Z ≥ 2 (b = 1 for every r at Z = 1), got Z = {modes}"
        )));
    }
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::Domain(format!(
            "squeezing r must be finite and nonnegative, got {r}"
        )));
    }
    let z = modes as f64;
    let s = (2.0 * (z - 1.0) * (4.0 * r).cosh() + (z - 2.0) * z + 2.0).sqrt();
    let sh2 = (2.0 * r).sinh().powi(2);
    let sh4 = (4.0 * r).sinh();
    Ok(SqueezedBlocks {
        b_block: s / z,
        z1: (2.0 * (z - 2.0) * sh2 + z * sh4) / (z * s),
        z2: (2.0 * (z - 2.0) * sh2 - z * sh4) / (z * s),
    })
}

/// Zero-mean pure state with covariance blocks from
/// [`symmetric_squeezed_blocks`].
pub fn symmetric_squeezed_state(modes: usize, r: f64) -> Result<GaussianState> {
    let blocks = symmetric_squeezed_blocks(modes, r)?;
    let dim = 2 * modes;
    let sigma = DMatrix::from_fn(dim, dim, |i, j| {
        let quad = i % 2;
        if quad != j % 2 {
            0.0
        } else if i / 2 == j / 2 {
            blocks.b_block
        } else if quad == 0 {
            blocks.z1
        } else {
            blocks.z2
        }
    });
    GaussianState::centered(sigma)
}
