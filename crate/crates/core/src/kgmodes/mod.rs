//! Mode functions, wavepacket spectra, Klein–Gordon inner products and the
//! discrete Bogoliubov coefficients between inertial and accelerated modes.

mod bogoliubov;
mod geometry;
mod inner;
mod modes;
mod profile;
mod projection;
mod spectrum;

pub use bogoliubov::{
    bogoliubov_matrices, check_normalization, cross_wedge_overlap, frequency_gram_matrix, mode_gram_matrix,
    negative_separation_diagnostic, BogoliubovMatrices,
};
pub use geometry::{RindlerGeometry, Wedge};
pub use inner::kg_inner_product;
pub use modes::{
    default_mode_quadrature, evaluate_minkowski_wavepacket, evaluate_rindler_wavepacket, rindler_mode_normalization,
    Conjugate, FieldMode, MinkowskiMode, ModeValue, RindlerMode, Support, LOG_APEX_CUTOFF,
};
pub use profile::{MomentumBump, OmegaBump, Profile, TabulatedProfile, SUPPORT_THRESHOLD};
pub use projection::{
    minkowski_content, overlap_in_frequency_space, plane_wave_coefficients, rindler_overlaps, rindler_projection,
};
pub use spectrum::{Component, MinkowskiSpectrum, RindlerSpectrum};
