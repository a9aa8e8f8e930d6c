//! Time evolution of thermal stationary states and the variational
//! diagnostics built on top of them.
//!
//! A stationary state at temperature T evolves by pure phase,
//! psi(x, t) = psi(x, 0) exp(-i E(T) t / hbar), so evolution here is exact
//! phase multiplication, never numerical integration. The Lagrangian
//! density adds the thermal well depth tau = k_B T ln(g p) to the usual
//! kinetic, potential, and time-derivative terms, and the stationarity
//! residual measures how far a field is from solving
//! (H + tau) psi = E(T) psi.

use num_complex::Complex64;

use crate::eigen::{TridiagonalHamiltonian, ZeroTSpectrum};
use crate::error::{ensure_finite, ensure_positive, Error, Result};
use crate::grid::Grid1D;
use crate::units::UnitSystem;

/// Coefficient vectors must satisfy sum |c|^2 = 1 within this.
pub const COEFFICIENT_NORM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub enum StateLabel {
    /// A single eigenstate, tagged by its level index.
    Level(usize),
    Superposition,
}

/// A complex field sampled on a grid, stamped with the time and
/// temperature it belongs to. The temperature is bookkeeping only: it
/// never enters the arithmetic except through the energies the caller
/// derived from it.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveField {
    values: Vec<Complex64>,
    grid: Grid1D,
    time: f64,
    temperature: f64,
    label: StateLabel,
}

impl WaveField {
    pub fn new(
        values: Vec<Complex64>,
        grid: Grid1D,
        time: f64,
        temperature: f64,
        label: StateLabel,
    ) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch {
                what: "field samples",
                expected: grid.len(),
                actual: values.len(),
            });
        }
        for v in &values {
            ensure_finite("field sample (re)", v.re)?;
            ensure_finite("field sample (im)", v.im)?;
        }
        ensure_finite("time", time)?;
        if temperature.is_nan() || temperature < 0.0 {
            return Err(Error::NegativeTemperature { value: temperature });
        }
        Ok(WaveField {
            values,
            grid,
            time,
            temperature,
            label,
        })
    }

    /// Lift a solver eigenfunction into a t = 0 field at `temperature`.
    pub fn from_level(
        spectrum: &ZeroTSpectrum,
        index: usize,
        temperature: f64,
    ) -> Result<Self> {
        let level = spectrum.level(index)?;
        let psi = level
            .wavefunction
            .as_ref()
            .ok_or(Error::MissingWavefunction { index })?;
        let grid = spectrum
            .grid()
            .expect("validated spectra carry a grid whenever wavefunctions exist");
        let values = psi.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        WaveField::new(values, grid.clone(), 0.0, temperature, StateLabel::Level(index))
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn label(&self) -> &StateLabel {
        &self.label
    }

    /// sqrt(sum |psi|^2 spacing).
    pub fn norm(&self) -> f64 {
        (self
            .values
            .iter()
            .map(|v| v.norm_sqr())
            .sum::<f64>()
            * self.grid.spacing())
        .sqrt()
    }

    pub fn density(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }
}

/// exp(-i energy elapsed / hbar).
pub fn phase_factor(energy: f64, elapsed: f64, units: &UnitSystem) -> Complex64 {
    Complex64::from_polar(1.0, -energy * elapsed / units.hbar())
}

/// Evolve a stationary state by multiplying in its phase. Norm and density
/// are conserved identically; non-finite inputs propagate as NaN samples.
pub fn evolve_stationary(
    field: &WaveField,
    energy: f64,
    elapsed: f64,
    units: &UnitSystem,
) -> WaveField {
    let phase = phase_factor(energy, elapsed, units);
    WaveField {
        values: field.values.iter().map(|v| v * phase).collect(),
        grid: field.grid.clone(),
        time: field.time + elapsed,
        temperature: field.temperature,
        label: field.label.clone(),
    }
}

/// d psi / dt for a stationary state: (-i energy / hbar) psi.
pub fn stationary_time_derivative(
    field: &WaveField,
    energy: f64,
    units: &UnitSystem,
) -> Vec<Complex64> {
    let factor = Complex64::new(0.0, -energy / units.hbar());
    field.values.iter().map(|v| factor * v).collect()
}

/// One term of a superposition: a component field, its thermal energy, and
/// its amplitude.
#[derive(Debug, Clone, Copy)]
pub struct SuperpositionComponent<'a> {
    pub coefficient: Complex64,
    pub energy: f64,
    pub field: &'a WaveField,
}

/// Evolve sum_k c_k psi_k exp(-i E_k t / hbar). Components must share a
/// grid and a common time stamp, and the coefficients must be normalized;
/// orthonormality of the fields is the caller's business (it is what makes
/// the total norm 1).
pub fn evolve_superposition(
    components: &[SuperpositionComponent<'_>],
    elapsed: f64,
    units: &UnitSystem,
) -> Result<WaveField> {
    let first = components.first().ok_or(Error::EmptySuperposition)?;
    let grid = first.field.grid();
    let start_time = first.field.time();
    let mut sum_sq = 0.0;
    for component in components {
        if component.field.grid() != grid {
            return Err(Error::GridMismatch);
        }
        if component.field.time() != start_time {
            return Err(Error::ConsistencyFailure {
                what: "superposition component times",
                lhs: start_time,
                rhs: component.field.time(),
                tol: 0.0,
            });
        }
        sum_sq += component.coefficient.norm_sqr();
    }
    if (sum_sq - 1.0).abs() > COEFFICIENT_NORM_TOL {
        return Err(Error::UnnormalizedCoefficients { sum_sq });
    }

    let mut values = vec![Complex64::new(0.0, 0.0); grid.len()];
    for component in components {
        let factor = component.coefficient * phase_factor(component.energy, elapsed, units);
        for (acc, v) in values.iter_mut().zip(component.field.values()) {
            *acc += factor * v;
        }
    }
    Ok(WaveField {
        values,
        grid: grid.clone(),
        time: start_time + elapsed,
        temperature: first.field.temperature(),
        label: StateLabel::Superposition,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LagrangianSample {
    /// Pointwise density, one entry per grid point.
    pub density: Vec<f64>,
    /// Trapezoid-free plain sum: sum density * spacing.
    pub total: f64,
}

/// Lagrangian density of a field with known time derivative:
///
///   Re[ i hbar conj(psi) dpsi/dt ] - hbar^2/(2m) |grad psi|^2
///     - V |psi|^2 - k_B T ln(g p) |psi|^2
///
/// evaluated with central differences and Dirichlet extension (the field
/// is treated as zero just outside the grid). For a thermal stationary
/// state the total vanishes up to discretization error.
pub fn lagrangian_density(
    field: &WaveField,
    time_derivative: &[Complex64],
    potential: &[f64],
    mass: f64,
    degeneracy: u32,
    probability: f64,
    units: &UnitSystem,
) -> Result<LagrangianSample> {
    let n = field.grid().len();
    if time_derivative.len() != n {
        return Err(Error::LengthMismatch {
            what: "time derivative samples",
            expected: n,
            actual: time_derivative.len(),
        });
    }
    if potential.len() != n {
        return Err(Error::LengthMismatch {
            what: "potential samples",
            expected: n,
            actual: potential.len(),
        });
    }
    ensure_positive("mass", mass)?;
    if degeneracy == 0 {
        return Err(Error::ZeroDegeneracy);
    }
    if !(probability > 0.0 && probability <= 1.0) {
        return Err(Error::InvalidProbability { value: probability });
    }
    for v in time_derivative {
        ensure_finite("time derivative (re)", v.re)?;
        ensure_finite("time derivative (im)", v.im)?;
    }
    for &v in potential {
        ensure_finite("potential sample", v)?;
    }

    let hbar = units.hbar();
    let tau = units.k_b() * field.temperature() * (degeneracy as f64 * probability).ln();
    let h = field.grid().spacing();
    let kinetic_scale = hbar * hbar / (2.0 * mass);
    let psi = field.values();
    let zero = Complex64::new(0.0, 0.0);

    let density: Vec<f64> = (0..n)
        .map(|k| {
            let left = if k > 0 { psi[k - 1] } else { zero };
            let right = if k + 1 < n { psi[k + 1] } else { zero };
            let gradient = (right - left) / (2.0 * h);
            let time_term = (Complex64::i() * hbar * psi[k].conj() * time_derivative[k]).re;
            time_term
                - kinetic_scale * gradient.norm_sqr()
                - (potential[k] + tau) * psi[k].norm_sqr()
        })
        .collect();
    let total = density.iter().sum::<f64>() * h;
    Ok(LagrangianSample { density, total })
}

/// Relative stationarity residual
///
///   || (H + tau - E_T) psi ||_2 / || H psi ||_2
///
/// over the interior points, maximized over the psi and conj(psi)
/// variation branches (they coincide whenever tau and E_T are real, which
/// the signature forces; both are still evaluated).
pub fn euler_lagrange_residual(
    field: &WaveField,
    thermal_energy: f64,
    tau: f64,
    hamiltonian: &TridiagonalHamiltonian,
) -> Result<f64> {
    if field.grid() != hamiltonian.grid() {
        return Err(Error::GridMismatch);
    }
    ensure_finite("thermal energy", thermal_energy)?;
    ensure_finite("tau", tau)?;
    let n = field.grid().len();
    let interior = &field.values()[1..n - 1];
    if interior.iter().all(|v| v.norm_sqr() == 0.0) {
        return Err(Error::NullField);
    }

    let branch = |conjugate: bool| -> Result<f64> {
        let samples: Vec<Complex64> = interior
            .iter()
            .map(|v| if conjugate { v.conj() } else { *v })
            .collect();
        let re: Vec<f64> = samples.iter().map(|v| v.re).collect();
        let im: Vec<f64> = samples.iter().map(|v| v.im).collect();
        let h_re = hamiltonian.apply_interior(&re)?;
        let h_im = hamiltonian.apply_interior(&im)?;
        let mut defect_sq = 0.0;
        let mut image_sq = 0.0;
        for k in 0..samples.len() {
            let image = Complex64::new(h_re[k], h_im[k]);
            let defect = image + (tau - thermal_energy) * samples[k];
            defect_sq += defect.norm_sqr();
            image_sq += image.norm_sqr();
        }
        if image_sq == 0.0 {
            return Err(Error::NullField);
        }
        Ok((defect_sq / image_sq).sqrt())
    };
    Ok(branch(false)?.max(branch(true)?))
}
