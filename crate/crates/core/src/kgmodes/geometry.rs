use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One of the two Rindler wedges. Wedge I is the right wedge with apex at
/// x = D/2, wedge II the left one with apex at x = −D/2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Wedge {
    I,
    II,
}

impl Wedge {
    pub fn other(self) -> Wedge {
        match self {
            Wedge::I => Wedge::II,
            Wedge::II => Wedge::I,
        }
    }
}

/// Acceleration parameter `a`, field mass `m` and wedge separation `d`
/// (natural units, c = ħ = 1).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RindlerGeometry {
    pub a: f64,
    pub m: f64,
    pub d: f64,
}

impl RindlerGeometry {
    pub fn new(a: f64, m: f64, d: f64) -> Result<Self> {
        let g = RindlerGeometry { a, m, d };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a > 0.0 && self.a.is_finite()) {
            return Err(Error::Domain(format!(
                "acceleration parameter a must be positive, got {}",
                self.a
            )));
        }
        if !(self.m > 0.0 && self.m.is_finite()) {
            return Err(Error::Domain(format!("field mass m must be positive, got {}", self.m)));
        }
        if !self.d.is_finite() {
            return Err(Error::Domain(format!(
                "wedge separation D must be finite, got {}",
                self.d
            )));
        }
        Ok(())
    }

    pub fn with_separation(mut self, d: f64) -> Self {
        self.d = d;
        self
    }

    /// Position of the wedge apex on the t = 0 slice.
    pub fn apex(&self, wedge: Wedge) -> f64 {
        match wedge {
            Wedge::I => 0.5 * self.d,
            Wedge::II => -0.5 * self.d,
        }
    }

    /// Distance χ > 0 from the wedge apex, or `None` outside the wedge.
    pub fn wedge_distance(&self, wedge: Wedge, x: f64) -> Option<f64> {
        let chi = match wedge {
            Wedge::I => x - self.apex(Wedge::I),
            Wedge::II => self.apex(Wedge::II) - x,
        };
        (chi > 0.0).then_some(chi)
    }

    /// D/|D|, with 0 for D = 0.
    pub fn separation_sign(&self) -> f64 {
        if self.d > 0.0 {
            1.0
        } else if self.d < 0.0 {
            -1.0
        } else {
            0.0
        }
    }

    /// Dimensionless Rindler order ν = Ω/a.
    pub fn order(&self, omega: f64) -> f64 {
        omega / self.a
    }
}
