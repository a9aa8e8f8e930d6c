//! Transition frequencies between thermal levels and their drift with
//! temperature.
//!
//! The partition factor is common to every level at a fixed temperature,
//! so it cancels in any frequency difference between two temperatures.
//! What survives is exactly
//!
//!   nu_ij(T1) - nu_ij(T2) = (k_B / 2h) (T1 - T2) ln(g_i / g_j),
//!
//! a straight line in T1 - T2 whose slope depends only on the degeneracy
//! ratio. `shift_between_temperatures` computes the shift both ways, from
//! this closed form and from two full thermal solves, and refuses to
//! return if the two routes disagree.

use crate::eigen::ZeroTSpectrum;
use crate::error::{Error, Result};
use crate::thermal::{thermal_energies, TailPolicy, ThermalSpectrum};
use crate::units::UnitSystem;

/// Agreement demanded between the closed-form shift and the difference of
/// two thermal solves, relative to the transition-frequency scale.
pub const SHIFT_CROSS_CHECK_REL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionShift {
    pub upper: usize,
    pub lower: usize,
    pub t1: f64,
    pub t2: f64,
    pub nu_t1: f64,
    pub nu_t2: f64,
    /// nu(T1) - nu(T2) from the closed form.
    pub delta_nu: f64,
    /// d(delta_nu)/d(T1 - T2) = (k_B / 2h) ln(g_upper / g_lower).
    pub slope: f64,
}

/// nu_ij = (E_i(T) - E_j(T)) / h for one thermal snapshot.
pub fn transition_frequency(
    thermal: &ThermalSpectrum,
    upper: usize,
    lower: usize,
    units: &UnitSystem,
) -> Result<f64> {
    let e_upper = thermal.level(upper)?.energy;
    let e_lower = thermal.level(lower)?.energy;
    Ok((e_upper - e_lower) / units.h_planck())
}

/// The temperature slope of a transition. Computed as a difference of
/// logarithms so swapping the levels negates the result bitwise.
pub fn shift_slope(g_upper: u32, g_lower: u32, units: &UnitSystem) -> Result<f64> {
    if g_upper == 0 || g_lower == 0 {
        return Err(Error::ZeroDegeneracy);
    }
    let log_ratio = (g_upper as f64).ln() - (g_lower as f64).ln();
    Ok(units.k_b() / (2.0 * units.h_planck()) * log_ratio)
}

/// Shift of the (upper, lower) transition between two temperatures, with
/// the closed form cross-checked against two independent thermal solves.
/// Both temperatures must be strictly positive: the zero-temperature
/// branch has different energies and no shift law.
pub fn shift_between_temperatures(
    spectrum: &ZeroTSpectrum,
    upper: usize,
    lower: usize,
    t1: f64,
    t2: f64,
    units: &UnitSystem,
    tail: TailPolicy,
) -> Result<TransitionShift> {
    let g_upper = spectrum.level(upper)?.degeneracy;
    let g_lower = spectrum.level(lower)?.degeneracy;

    let thermal_1 = thermal_energies(spectrum, t1, units, tail)?;
    if thermal_1.beta().is_none() {
        return Err(Error::ZeroTemperature);
    }
    let thermal_2 = thermal_energies(spectrum, t2, units, tail)?;
    if thermal_2.beta().is_none() {
        return Err(Error::ZeroTemperature);
    }
    let nu_t1 = transition_frequency(&thermal_1, upper, lower, units)?;
    let nu_t2 = transition_frequency(&thermal_2, upper, lower, units)?;

    let slope = shift_slope(g_upper, g_lower, units)?;
    let delta_nu = slope * (t1 - t2);

    let direct = nu_t1 - nu_t2;
    let scale = nu_t1.abs().max(nu_t2.abs()).max(delta_nu.abs());
    if (direct - delta_nu).abs() > SHIFT_CROSS_CHECK_REL_TOL * scale {
        return Err(Error::ConsistencyFailure {
            what: "transition shift (closed form vs thermal solves)",
            lhs: delta_nu,
            rhs: direct,
            tol: SHIFT_CROSS_CHECK_REL_TOL,
        });
    }

    Ok(TransitionShift {
        upper,
        lower,
        t1,
        t2,
        nu_t1,
        nu_t2,
        delta_nu,
        slope,
    })
}
