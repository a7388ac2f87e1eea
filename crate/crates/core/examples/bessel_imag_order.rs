//! K_iν(x): one-off evaluations with error estimates, and a table that
//! shares the exponentials across many orders at a fixed argument.

use rindler_gauss::specfun::{bessel_k_imag_order, BesselKiTable, QuadratureSpec};

fn main() -> rindler_gauss::Result<()> {
    let spec = QuadratureSpec::default();
    println!("{:>6} {:>6} {:>24} {:>10}", "nu", "x", "K_inu(x)", "error");
    for x in [0.1, 1.0, 5.0] {
        for nu in [0.0, 2.5, 10.0] {
            let k = bessel_k_imag_order(nu, x, &spec)?;
            println!("{nu:>6} {x:>6} {:>24.16e} {:>10.1e}", k.value, k.error_estimate);
        }
    }

    let table = BesselKiTable::new(0.5, 20.0)?;
    let worst = (0..=40)
        .map(|i| {
            let nu = 0.5 * i as f64;
            let direct = bessel_k_imag_order(nu, 0.5, &spec).map(|k| k.value)?;
            Ok((table.eval(nu) - direct).abs())
        })
        .collect::<rindler_gauss::Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    println!("table vs direct at x = 0.5, nu in [0, 20]: max |diff| {worst:.1e}");
    Ok(())
}
