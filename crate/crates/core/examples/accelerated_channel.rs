//! The inertial-to-accelerated channel for two single-wedge modes with
//! separated apexes: vacuum covariance, (M, N), the complete-positivity
//! margin and the action on a squeezed state.

use rindler_gauss::channel::{build_channel, vacuum_covariance, PHYSICALITY_TOL};
use rindler_gauss::gaussian::{apply_channel, purity, symmetric_squeezed_state};
use rindler_gauss::kgmodes::{
    bogoliubov_matrices, default_mode_quadrature, MinkowskiSpectrum, MomentumBump, RindlerGeometry, RindlerSpectrum,
    Wedge,
};

fn main() -> rindler_gauss::Result<()> {
    let geometry = RindlerGeometry::new(1.0, 1.0, 0.5)?;
    let spec = default_mode_quadrature();
    let psi = [
        RindlerSpectrum::bump(Wedge::I, 3.0, 0.5)?,
        RindlerSpectrum::bump(Wedge::II, 3.0, 0.5)?,
    ];
    let phi = [
        MinkowskiSpectrum::new(MomentumBump::new(0.0, 0.5, 6.0)?),
        MinkowskiSpectrum::new(MomentumBump::new(0.0, 0.5, -6.0)?),
    ];

    let sigma = vacuum_covariance(&psi, &geometry, &spec)?;
    println!("vacuum covariance ({:?} branch):\n{:.6}", sigma.branch, sigma.matrix);
    println!("uncertainty margin {:.3e}", sigma.uncertainty_margin());

    let bogo = bogoliubov_matrices(&psi, &phi, &geometry, &spec)?;
    bogo.require_converged()?;
    let built = build_channel(&bogo, &sigma)?;
    println!("M =\n{:.6}N =\n{:.6}", built.channel.m(), built.channel.n());
    println!(
        "CP margin {:.3e} ({})",
        built.physicality_margin,
        if built.is_physical(PHYSICALITY_TOL) {
            "physical"
        } else {
            "not physical"
        }
    );

    let state = symmetric_squeezed_state(2, 0.5)?;
    let out = apply_channel(&built.channel, &state)?;
    println!("purity {:.9} -> {:.9}", purity(&state)?, purity(&out)?);
    Ok(())
}
