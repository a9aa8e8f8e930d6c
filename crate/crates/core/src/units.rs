//! Physical constants threaded through every formula so unit conventions
//! stay a caller decision instead of a compile-time one.

use crate::error::{ensure_positive, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct UnitSystem {
    hbar: f64,
    k_b: f64,
    mass_default: f64,
}

impl UnitSystem {
    pub fn new(hbar: f64, k_b: f64, mass_default: f64) -> Result<Self> {
        ensure_positive("hbar", hbar)?;
        ensure_positive("k_b", k_b)?;
        ensure_positive("mass", mass_default)?;
        Ok(UnitSystem {
            hbar,
            k_b,
            mass_default,
        })
    }

    /// hbar = k_B = m = 1.
    pub fn natural() -> Self {
        UnitSystem {
            hbar: 1.0,
            k_b: 1.0,
            mass_default: 1.0,
        }
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn k_b(&self) -> f64 {
        self.k_b
    }

    /// h = 2 pi hbar, the quantum used by frequency formulas.
    pub fn h_planck(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.hbar
    }

    pub fn mass_default(&self) -> f64 {
        self.mass_default
    }

    /// Inverse temperature 1/(k_B T). T = 0 is reported as an error so the
    /// caller routes through the explicit zero-temperature branch.
    pub fn beta(&self, temperature: f64) -> Result<f64> {
        if temperature.is_nan() || temperature < 0.0 {
            return Err(Error::NegativeTemperature { value: temperature });
        }
        if temperature == 0.0 {
            return Err(Error::ZeroTemperature);
        }
        Ok(1.0 / (self.k_b * temperature))
    }
}

impl Default for UnitSystem {
    fn default() -> Self {
        UnitSystem::natural()
    }
}
