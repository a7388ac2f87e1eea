//! Relative purity of the symmetric squeezed vacuum seen by accelerated
//! observers: α(𝒜) from matched packet pairs, then the (𝒜, r, Z) surface
//! as CSV.

use rindler_gauss::kgmodes::default_mode_quadrature;
use rindler_gauss::scenario::{relative_purity_surface, AlphaProfile, PacketFamily, SweepGrid};

fn main() -> rindler_gauss::Result<()> {
    let accelerations = vec![0.1, 0.5, 1.0, 2.0];
    let (profile, samples) = AlphaProfile::compute(
        &PacketFamily::default(),
        &accelerations,
        1.0,
        &default_mode_quadrature(),
    )?;
    for s in &samples {
        println!("# A = {}: alpha {:.7}, |beta| {:.2e}", s.acceleration, s.alpha, s.beta);
    }
    if let Some(w) = profile.monotonicity_warning() {
        println!("# warning: {w}");
    }

    let grid = SweepGrid {
        accelerations,
        squeezings: vec![0.0, 0.5, 1.0, 1.5, 2.0],
        mode_counts: vec![2, 4, 6],
    };
    print!("{}", relative_purity_surface(&grid, &profile)?.to_csv());
    Ok(())
}
