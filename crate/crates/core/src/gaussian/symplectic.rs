use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// Block-diagonal symplectic form on Z modes, 2×2 blocks [[0, 1], [−1, 0]]
/// in the ordering (q₁, p₁, …, q_Z, p_Z).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymplecticForm {
    modes: usize,
}

impl SymplecticForm {
    pub fn new(modes: usize) -> Self {
        SymplecticForm { modes }
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn dimension(&self) -> usize {
        2 * self.modes
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        let n = self.dimension();
        DMatrix::from_fn(n, n, |i, j| match (i % 2, j) {
            (0, j) if j == i + 1 => 1.0,
            (1, j) if j + 1 == i => -1.0,
            _ => 0.0,
        })
    }
}
