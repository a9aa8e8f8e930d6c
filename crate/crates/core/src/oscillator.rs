//! Harmonic-oscillator closed forms. These are the analytic yardstick the
//! grid pipeline is measured against: the square root of the partition
//! function collapses to a geometric series,
//!
//!   sqrt(Z(T)) = exp(-h_bar W / (4 k_B T)) / (1 - exp(-h_bar W / (2 k_B T))),
//!
//! and the thermal levels to
//!
//!   E_n(T) = (n + 1)/2 h_bar W + k_B T ln(1 - exp(-h_bar W / (2 k_B T))).
//!
//! The T -> 0 limit of E_n(T) is (n + 1)/2 h_bar W, which differs from the
//! exact zero-temperature value (n + 1/2) h_bar W for every n except the
//! ground state. That jump is a property of the thermal branch itself, so
//! this module reproduces it instead of smoothing it over; T = 0 always
//! means the exact branch.

use crate::error::{ensure_positive, Error, Result};
use crate::units::UnitSystem;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams {
    omega_osc: f64,
    mass: f64,
}

impl OscillatorParams {
    pub fn new(omega_osc: f64, mass: f64) -> Result<Self> {
        ensure_positive("omega_osc", omega_osc)?;
        ensure_positive("mass", mass)?;
        Ok(OscillatorParams { omega_osc, mass })
    }

    pub fn omega_osc(&self) -> f64 {
        self.omega_osc
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }
}

/// E_n(0) = (n + 1/2) h_bar W.
pub fn ho_energy_zero_t(n: usize, params: &OscillatorParams, units: &UnitSystem) -> f64 {
    (n as f64 + 0.5) * units.hbar() * params.omega_osc()
}

pub fn ho_sqrt_partition(
    params: &OscillatorParams,
    temperature: f64,
    units: &UnitSystem,
) -> Result<f64> {
    let beta = units.beta(temperature)?;
    let x = 0.5 * units.hbar() * params.omega_osc() * beta;
    // 1 - exp(-x) through exp_m1 so cold temperatures keep full precision.
    Ok((-0.5 * x).exp() / -(-x).exp_m1())
}

pub fn ho_energy_thermal(
    n: usize,
    params: &OscillatorParams,
    temperature: f64,
    units: &UnitSystem,
) -> Result<f64> {
    if temperature.is_nan() || temperature < 0.0 {
        return Err(Error::NegativeTemperature { value: temperature });
    }
    if temperature == 0.0 {
        return Ok(ho_energy_zero_t(n, params, units));
    }
    let beta = units.beta(temperature)?;
    let quantum = units.hbar() * params.omega_osc();
    let x = 0.5 * quantum * beta;
    let kt = units.k_b() * temperature;
    // ln(1 - exp(-x)) via ln_1p keeps the cold tail accurate.
    Ok(0.5 * (n as f64 + 1.0) * quantum + kt * (-(-x).exp()).ln_1p())
}
