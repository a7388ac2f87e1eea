//! Klein-Gordon modes: an accelerated wave packet in wedge I, its norm, and
//! the Bogoliubov coefficients against an inertial packet from the
//! position-space and frequency-space routes.

use rindler_gauss::kgmodes::{
    bogoliubov_matrices, check_normalization, default_mode_quadrature, overlap_in_frequency_space, MinkowskiSpectrum,
    MomentumBump, RindlerGeometry, RindlerSpectrum, Wedge,
};

fn main() -> rindler_gauss::Result<()> {
    let geometry = RindlerGeometry::new(1.0, 1.0, 0.0)?;
    let spec = default_mode_quadrature();

    let psi = RindlerSpectrum::bump(Wedge::I, 3.0, 0.5)?;
    println!("(psi|psi) = {:.12}", check_normalization(&psi, &geometry)?);

    for position in [2.0, 4.0, 6.0] {
        let phi = MinkowskiSpectrum::new(MomentumBump::new(0.0, 0.5, position)?);
        let bogo = bogoliubov_matrices(std::slice::from_ref(&psi), std::slice::from_ref(&phi), &geometry, &spec)?;
        let [alpha, beta] = overlap_in_frequency_space(&psi, &phi, &geometry, &spec)?.value;
        println!(
            "x0 = {position}: alpha {:.6e} (freq {:.6e}), |beta| {:.3e} (freq {:.3e}){}",
            bogo.alpha[(0, 0)],
            alpha,
            bogo.beta[(0, 0)].norm(),
            beta.norm(),
            if bogo.unconverged.is_empty() {
                ""
            } else {
                ", position route unconverged"
            }
        );
    }
    Ok(())
}
