//! Minkowski-vacuum covariance in the accelerated frame and the Gaussian
//! channel (M, N) it induces.

mod build;
mod covariance;
mod kernels;

pub use build::{build_channel, channel_m, BuiltChannel, PHYSICALITY_TOL};
pub use covariance::{
    rindler_overlap, vacuum_covariance, vacuum_covariance_d0, vacuum_covariance_dneq0, CovarianceBranch,
    VacuumCovariance, NORMALIZATION_TOL,
};
pub use kernels::{i1_kernel, i2_kernel, i3_kernel, Kernels};
