//! Gaussian toolkit: the symmetric multimode squeezed vacuum, its purity
//! and symplectic spectrum, and the purity lost through a lossy channel.

use rindler_gauss::gaussian::{
    apply_channel, purity, relative_purity, symmetric_squeezed_state, symplectic_eigenvalues,
};
use rindler_gauss::scenario::{closed_form_relative_purity, diagonal_channel};

fn main() -> rindler_gauss::Result<()> {
    let (modes, r, alpha) = (4, 0.8, 0.9);
    let state = symmetric_squeezed_state(modes, r)?;
    println!("det sigma = {:.15}", state.determinant());
    println!("purity = {:.15}", purity(&state)?);
    println!("symplectic eigenvalues = {:?}", symplectic_eigenvalues(&state)?);
    println!("uncertainty margin = {:.3e}", state.uncertainty_margin());

    let channel = diagonal_channel(alpha, modes)?;
    let out = apply_channel(&channel, &state)?;
    println!("output purity = {:.12}", purity(&out)?);
    println!(
        "relative purity: matrix path {:.15}, closed form {:.15}",
        relative_purity(&state, &channel)?,
        closed_form_relative_purity(alpha, modes, r)?
    );
    Ok(())
}
