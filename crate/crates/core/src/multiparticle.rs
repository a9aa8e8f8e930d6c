//! Non-interacting N-particle systems assembled from single-particle
//! levels. With no pair interaction the temperature-dependent energy is a
//! plain sum over the occupied levels,
//!
//!   E(T) = sum_j E_{i_j}(0) + k_B T sum_j ln(g_{i_j} p^{i_j}),
//!
//! and the joint wavefunction factorizes into a product state. Any nonzero
//! pair energy is refused rather than approximated.

use num_complex::Complex64;

use crate::eigen::ZeroTSpectrum;
use crate::error::{ensure_finite, Error, Result};
use crate::thermal::{thermal_energies, TailPolicy};
use crate::units::UnitSystem;
use crate::dynamics::WaveField;

#[derive(Debug, Clone, PartialEq)]
pub struct MultiParticleConfig {
    occupations: Vec<usize>,
    degeneracies: Vec<u32>,
    shared_probability: Option<f64>,
    pair_energy: f64,
}

impl MultiParticleConfig {
    pub fn new(
        occupations: Vec<usize>,
        degeneracies: Vec<u32>,
        shared_probability: Option<f64>,
        pair_energy: f64,
    ) -> Result<Self> {
        if occupations.is_empty() {
            return Err(Error::EmptyOccupations);
        }
        if degeneracies.len() != occupations.len() {
            return Err(Error::LengthMismatch {
                what: "occupation degeneracies",
                expected: occupations.len(),
                actual: degeneracies.len(),
            });
        }
        if degeneracies.iter().any(|&g| g == 0) {
            return Err(Error::ZeroDegeneracy);
        }
        if let Some(p) = shared_probability {
            if !(p > 0.0 && p <= 1.0) {
                return Err(Error::InvalidProbability { value: p });
            }
        }
        ensure_finite("pair energy", pair_energy)?;
        Ok(MultiParticleConfig {
            occupations,
            degeneracies,
            shared_probability,
            pair_energy,
        })
    }

    /// Occupations against an existing spectrum: degeneracies are copied
    /// from the occupied levels, no interaction, no probability override.
    pub fn for_spectrum(occupations: Vec<usize>, spectrum: &ZeroTSpectrum) -> Result<Self> {
        let degeneracies = occupations
            .iter()
            .map(|&i| spectrum.level(i).map(|l| l.degeneracy))
            .collect::<Result<Vec<u32>>>()?;
        MultiParticleConfig::new(occupations, degeneracies, None, 0.0)
    }

    pub fn occupations(&self) -> &[usize] {
        &self.occupations
    }

    pub fn degeneracies(&self) -> &[u32] {
        &self.degeneracies
    }

    pub fn shared_probability(&self) -> Option<f64> {
        self.shared_probability
    }

    pub fn pair_energy(&self) -> f64 {
        self.pair_energy
    }

    pub fn particle_count(&self) -> usize {
        self.occupations.len()
    }
}

/// Total energy of the configuration at `temperature`.
///
/// Occupation probabilities come from the thermal solve unless the
/// configuration overrides them with a shared value. The sum runs in
/// occupation order, so permuting a configuration changes nothing but
/// floating-point association.
pub fn multiparticle_thermal_energy(
    config: &MultiParticleConfig,
    spectrum: &ZeroTSpectrum,
    temperature: f64,
    units: &UnitSystem,
    tail: TailPolicy,
) -> Result<f64> {
    if config.pair_energy != 0.0 {
        return Err(Error::UnsupportedInteraction {
            value: config.pair_energy,
        });
    }
    for (&index, &stated) in config.occupations.iter().zip(&config.degeneracies) {
        let level = spectrum.level(index)?;
        if level.degeneracy != stated {
            return Err(Error::OccupationDegeneracyMismatch {
                index,
                stated,
                actual: level.degeneracy,
            });
        }
    }
    if temperature.is_nan() || temperature < 0.0 {
        return Err(Error::NegativeTemperature { value: temperature });
    }
    if temperature == 0.0 {
        let total = config
            .occupations
            .iter()
            .map(|&i| spectrum.levels()[i].energy)
            .sum();
        return Ok(total);
    }

    let thermal = thermal_energies(spectrum, temperature, units, tail)?;
    let kt = units.k_b() * temperature;
    let mut total = 0.0;
    for &index in &config.occupations {
        let zero_t = spectrum.levels()[index].energy;
        let level = &thermal.levels()[index];
        let p = config.shared_probability.unwrap_or(level.probability);
        total += zero_t + kt * (level.degeneracy as f64 * p).ln();
    }
    Ok(total)
}

/// A factorized N-particle wavefunction. Lives on one shared grid; each
/// factor must be normalized, which makes the product normalized over the
/// N-dimensional configuration space.
#[derive(Debug, Clone)]
pub struct ProductState {
    factors: Vec<WaveField>,
}

pub fn product_state(factors: Vec<WaveField>) -> Result<ProductState> {
    let first_grid = match factors.first() {
        Some(f) => f.grid().clone(),
        None => return Err(Error::EmptyOccupations),
    };
    for factor in &factors {
        if *factor.grid() != first_grid {
            return Err(Error::GridMismatch);
        }
        let norm = factor.norm();
        if (norm - 1.0).abs() > 1e-8 {
            return Err(Error::NotNormalized { norm });
        }
    }
    Ok(ProductState { factors })
}

impl ProductState {
    pub fn factors(&self) -> &[WaveField] {
        &self.factors
    }

    pub fn particle_count(&self) -> usize {
        self.factors.len()
    }

    /// Psi(x_{i_1}, ..., x_{i_N}) = prod_j psi_j(x_{i_j}) at one point of
    /// the configuration-space grid, addressed by per-particle indices.
    pub fn amplitude(&self, indices: &[usize]) -> Result<Complex64> {
        if indices.len() != self.factors.len() {
            return Err(Error::LengthMismatch {
                what: "configuration indices",
                expected: self.factors.len(),
                actual: indices.len(),
            });
        }
        let mut product = Complex64::new(1.0, 0.0);
        for (factor, &index) in self.factors.iter().zip(indices) {
            let values = factor.values();
            if index >= values.len() {
                return Err(Error::GridIndexOutOfRange {
                    index,
                    len: values.len(),
                });
            }
            product *= values[index];
        }
        Ok(product)
    }
}
