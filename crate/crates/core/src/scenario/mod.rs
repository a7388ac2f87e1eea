//! Z observers with a common proper acceleration 𝒜 holding a symmetric
//! squeezed vacuum: α(𝒜), the diagonal channel and the relative-purity
//! surface over (𝒜, r, Z).

mod alpha;
mod sweep;

pub use alpha::{AlphaProfile, AlphaSample, MatchedPair, PacketFamily};
pub use sweep::{
    closed_form_relative_purity, diagonal_channel, format_significant, relative_purity_surface, SweepGrid, SweepResult,
    SweepRow, PURITY_SLACK,
};
