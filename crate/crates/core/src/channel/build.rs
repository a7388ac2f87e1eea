use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::covariance::VacuumCovariance;
use crate::error::{Error, Result};
use crate::gaussian::{symmetrize, GaussianChannel};
use crate::kgmodes::BogoliubovMatrices;

/// Default tolerance on the physicality margin of a built channel.
pub const PHYSICALITY_TOL: f64 = 1e-8;

/// A channel together with its complete-positivity margin
/// min eig(N + i(Ω_s − MΩ_sMᵀ)).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BuiltChannel {
    pub channel: GaussianChannel,
    pub physicality_margin: f64,
}

impl BuiltChannel {
    /// False signals inconsistent inputs, such as non-commuting mode choices.
    pub fn is_physical(&self, tol: f64) -> bool {
        self.physicality_margin >= -tol
    }
}

/// M with 2×2 blocks [[Re(α−β), −Im(α+β)], [Im(α−β), Re(α+β)]] and its
/// per-element error bounds.
pub fn channel_m(bogo: &BogoliubovMatrices) -> (DMatrix<f64>, DMatrix<f64>) {
    let z = bogo.modes();
    let mut m = DMatrix::zeros(2 * z, 2 * z);
    let mut e = DMatrix::zeros(2 * z, 2 * z);
    for i in 0..z {
        for j in 0..z {
            let (a, b) = (bogo.alpha[(i, j)], bogo.beta[(i, j)]);
            let (dif, sum) = (a - b, a + b);
            m[(2 * i, 2 * j)] = dif.re;
            m[(2 * i, 2 * j + 1)] = -sum.im;
            m[(2 * i + 1, 2 * j)] = dif.im;
            m[(2 * i + 1, 2 * j + 1)] = sum.re;
            // The stored estimate bounds both |δα| and |δβ|.
            let err = 2.0 * bogo.error_estimates[(i, j)];
            for (r, c) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                e[(2 * i + r, 2 * j + c)] = err;
            }
        }
    }
    (m, e)
}

/// M from the Bogoliubov coefficients and N = σ_vac − MMᵀ, symmetrized, so
/// that the channel maps the inertial vacuum onto σ_vac.
pub fn build_channel(bogo: &BogoliubovMatrices, sigma_vac_d: &VacuumCovariance) -> Result<BuiltChannel> {
    if bogo.modes() != sigma_vac_d.modes() || sigma_vac_d.matrix.nrows() != sigma_vac_d.matrix.ncols() {
        return Err(Error::Dimension {
            expected: 2 * bogo.modes(),
            got: sigma_vac_d.matrix.nrows(),
            context: "vacuum covariance against Bogoliubov matrices".into(),
        });
    }
    let (m, m_err) = channel_m(bogo);
    let mut n = &sigma_vac_d.matrix - &m * m.transpose();
    symmetrize(&mut n);
    let m_abs = m.abs();
    let spread = &m_abs * m_err.transpose();
    let n_err = &sigma_vac_d.element_errors + &spread + spread.transpose();
    let mut errors = m_err.clone();
    // Rows of M and of N share one error matrix; keep the larger bound.
    errors.zip_apply(&n_err, |a, b| *a = a.max(b));
    let channel = GaussianChannel::with_errors(m, n, errors)?;
    let physicality_margin = channel.physicality_margin();
    Ok(BuiltChannel {
        channel,
        physicality_margin,
    })
}
