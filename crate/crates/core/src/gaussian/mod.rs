//! Gaussian-state algebra in the vacuum-equals-identity convention: states,
//! the symplectic form, channels, purity and the symmetric squeezed vacuum.

mod channel;
mod linalg;
mod squeezed;
mod state;
mod symplectic;

pub use channel::{apply_channel, relative_purity, GaussianChannel};
pub(crate) use linalg::symmetrize;
pub use squeezed::{symmetric_squeezed_blocks, symmetric_squeezed_state, SqueezedBlocks};
pub use state::{purity, symplectic_eigenvalues, vacuum_state, GaussianState};
pub use symplectic::SymplecticForm;
