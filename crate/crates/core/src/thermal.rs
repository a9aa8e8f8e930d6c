//! Temperature-dependent level energies from a self-consistent partition
//! function.
//!
//! For T > 0 every level obeys
//!
//!   E_i(T) = E_i(0)/2 + (k_B T / 2) ln g_i - k_B T ln sqrt(Z(T)),
//!
//! and the populations p_i = exp(-E_i(T)/(k_B T)) / Z(T) close the system.
//! Substituting the populations back gives the square root of the partition
//! function in closed form,
//!
//!   sqrt(Z(T)) = sum_i sqrt(g_i) exp(-E_i(0)/(2 k_B T)),
//!
//! which this module evaluates with all energies shifted by the ground
//! level so the exponentials can never overflow. The fixed-point path
//! iterates the defining equations instead and exists to validate the
//! closed form, not to replace it.
//!
//! T = 0 is an exact branch: energies keep their zero-temperature values
//! and the populations collapse onto the ground level.

use crate::error::{ensure_finite, Error, Result};
use crate::eigen::ZeroTSpectrum;
use crate::units::UnitSystem;

/// Default bound on the omitted tail of a truncated partition sum,
/// relative to the retained sum.
pub const DEFAULT_TAIL_REL_TOL: f64 = 1e-8;

/// Ensemble state probabilities must sum to 1 within this.
pub const STATE_PROBABILITY_TOL: f64 = 1e-12;

/// Whether a spectrum is the whole truth or a truncation of something
/// larger. Truncations must prove their omitted tail is negligible; the
/// proof uses a geometric extrapolation of the last two partition terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailPolicy {
    /// The spectrum is complete (analytic model systems); no tail exists.
    Complete,
    /// The spectrum truncates an infinite ladder; require the estimated
    /// tail to stay below `rel_tol` times the retained sum.
    Truncated { rel_tol: f64 },
}

impl TailPolicy {
    pub fn truncated() -> Self {
        TailPolicy::Truncated {
            rel_tol: DEFAULT_TAIL_REL_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThermalLevel {
    pub energy: f64,
    pub probability: f64,
    pub degeneracy: u32,
}

/// Levels at a fixed temperature, indexed exactly like the input spectrum.
/// `beta` and `sqrt_z` are None at T = 0 where neither quantity exists.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalSpectrum {
    temperature: f64,
    beta: Option<f64>,
    sqrt_z: Option<f64>,
    levels: Vec<ThermalLevel>,
}

impl ThermalSpectrum {
    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn beta(&self) -> Option<f64> {
        self.beta
    }

    pub fn sqrt_z(&self) -> Option<f64> {
        self.sqrt_z
    }

    pub fn levels(&self) -> &[ThermalLevel] {
        &self.levels
    }

    pub fn level(&self, index: usize) -> Result<&ThermalLevel> {
        self.levels.get(index).ok_or(Error::LevelIndexOutOfRange {
            index,
            count: self.levels.len(),
        })
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }
}

/// Ground-shifted partition terms t_i = sqrt(g_i) exp(-(E_i - E_0) h_beta),
/// where h_beta = 1/(2 k_B T). Shifting keeps every term in (0, sqrt(g_i)].
struct ShiftedTerms {
    terms: Vec<f64>,
    sum: f64,
    ground_energy: f64,
}

fn shifted_terms(spectrum: &ZeroTSpectrum, half_beta: f64) -> ShiftedTerms {
    let ground_energy = spectrum.levels()[0].energy;
    let terms: Vec<f64> = spectrum
        .levels()
        .iter()
        .map(|l| (l.degeneracy as f64).sqrt() * (-(l.energy - ground_energy) * half_beta).exp())
        .collect();
    let sum = terms.iter().sum();
    ShiftedTerms {
        terms,
        sum,
        ground_energy,
    }
}

fn check_tail(terms: &ShiftedTerms, policy: TailPolicy) -> Result<()> {
    let rel_tol = match policy {
        TailPolicy::Complete => return Ok(()),
        TailPolicy::Truncated { rel_tol } => rel_tol,
    };
    if !(rel_tol > 0.0 && rel_tol.is_finite()) {
        return Err(Error::InvalidTolerance { value: rel_tol });
    }
    let n = terms.terms.len();
    if n < 2 {
        // One term gives no decay rate to extrapolate from.
        return Err(Error::TailNotDecaying { ratio: 1.0 });
    }
    let last = terms.terms[n - 1];
    if last == 0.0 {
        // The ladder decayed below the underflow threshold; no tail left.
        return Ok(());
    }
    let ratio = last / terms.terms[n - 2];
    if !(ratio < 1.0) {
        return Err(Error::TailNotDecaying { ratio });
    }
    let estimate = last * ratio / (1.0 - ratio);
    let bound = rel_tol * terms.sum;
    if estimate > bound {
        return Err(Error::TailBoundViolated { estimate, bound });
    }
    Ok(())
}

/// sqrt(Z(T)) = sum_i sqrt(g_i) exp(-E_i(0)/(2 k_B T)).
pub fn sqrt_partition_closed(
    spectrum: &ZeroTSpectrum,
    temperature: f64,
    units: &UnitSystem,
    tail: TailPolicy,
) -> Result<f64> {
    let beta = units.beta(temperature)?;
    let terms = shifted_terms(spectrum, 0.5 * beta);
    check_tail(&terms, tail)?;
    Ok((-terms.ground_energy * 0.5 * beta).exp() * terms.sum)
}

/// Temperature-shifted energies and populations for every level.
pub fn thermal_energies(
    spectrum: &ZeroTSpectrum,
    temperature: f64,
    units: &UnitSystem,
    tail: TailPolicy,
) -> Result<ThermalSpectrum> {
    if temperature.is_nan() || temperature < 0.0 {
        return Err(Error::NegativeTemperature { value: temperature });
    }
    if temperature == 0.0 {
        // Exact branch: nothing shifts, the ground level soaks up all the
        // population (1/g per degenerate member), excited levels get none.
        let levels = spectrum
            .levels()
            .iter()
            .enumerate()
            .map(|(i, l)| ThermalLevel {
                energy: l.energy,
                probability: if i == 0 {
                    1.0 / l.degeneracy as f64
                } else {
                    0.0
                },
                degeneracy: l.degeneracy,
            })
            .collect();
        return Ok(ThermalSpectrum {
            temperature,
            beta: None,
            sqrt_z: None,
            levels,
        });
    }

    let beta = units.beta(temperature)?;
    let half_beta = 0.5 * beta;
    let kt = 1.0 / beta;
    let terms = shifted_terms(spectrum, half_beta);
    check_tail(&terms, tail)?;
    let ln_sum = terms.sum.ln();
    let e0 = terms.ground_energy;

    let levels = spectrum
        .levels()
        .iter()
        .zip(&terms.terms)
        .map(|(l, &t)| {
            let g = l.degeneracy as f64;
            ThermalLevel {
                // E_i/2 + kT/2 ln g - kT ln sqrt(Z), with ln sqrt(Z)
                // expanded as ln_sum - e0 * half_beta.
                energy: 0.5 * (l.energy + e0) + kt * (0.5 * g.ln() - ln_sum),
                probability: t / (g * terms.sum),
                degeneracy: l.degeneracy,
            }
        })
        .collect();
    Ok(ThermalSpectrum {
        temperature,
        beta: Some(beta),
        sqrt_z: Some((-e0 * half_beta).exp() * terms.sum),
        levels,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointOptions {
    /// Convergence test: |Z_new - Z_old| <= rel_tol * Z_new.
    pub rel_tol: f64,
    pub max_iterations: usize,
    /// Fraction of each update applied; 1 is the undamped iteration.
    pub damping: f64,
}

impl Default for FixedPointOptions {
    fn default() -> Self {
        FixedPointOptions {
            rel_tol: 1e-12,
            max_iterations: 500,
            damping: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointSolution {
    pub sqrt_z: f64,
    pub iterations: usize,
}

/// Solve for Z(T) by iterating the defining equations directly: start from
/// the partition sum over unshifted energies, recompute every E_i(T) from
/// the current Z, and resum. This is the expensive route the closed form
/// replaces; it exists so the two can be checked against each other.
pub fn fixed_point_partition(
    spectrum: &ZeroTSpectrum,
    temperature: f64,
    units: &UnitSystem,
    options: FixedPointOptions,
) -> Result<FixedPointSolution> {
    if !(options.rel_tol > 0.0 && options.rel_tol.is_finite()) {
        return Err(Error::InvalidTolerance {
            value: options.rel_tol,
        });
    }
    if !(options.damping > 0.0 && options.damping <= 1.0) {
        return Err(Error::InvalidDamping {
            value: options.damping,
        });
    }
    let beta = units.beta(temperature)?;
    let e0 = spectrum.levels()[0].energy;
    // Work with Z' = Z exp(beta E_0); the update rule commutes with the
    // scaling, so damping and convergence tests are unchanged.
    let coefficient = shifted_terms(spectrum, 0.5 * beta).sum;
    let unshift = (-e0 * beta).exp();

    let mut z: f64 = spectrum
        .levels()
        .iter()
        .map(|l| l.degeneracy as f64 * (-(l.energy - e0) * beta).exp())
        .sum();
    let mut previous = z;
    for iteration in 1..=options.max_iterations {
        // Resumming exp(-beta E_i(T)) over the levels collapses to
        // coefficient * sqrt(Z'): each term is sqrt(g_i t_i^2 / g_i) ... =
        // sqrt(g_i) exp(-(E_i-E_0) beta/2) sqrt(Z').
        let update = coefficient * z.sqrt();
        let next = (1.0 - options.damping) * z + options.damping * update;
        let converged = (next - z).abs() <= options.rel_tol * next.abs();
        previous = z;
        z = next;
        if converged {
            return Ok(FixedPointSolution {
                sqrt_z: z.sqrt() * unshift.sqrt(),
                iterations: iteration,
            });
        }
    }
    Err(Error::FixedPointNonConvergence {
        iterations: options.max_iterations,
        last: z * unshift,
        previous: previous * unshift,
    })
}

/// Entropy carried by one occupied level: S = -k_B ln(g p).
pub fn microscopic_entropy(degeneracy: u32, probability: f64, units: &UnitSystem) -> Result<f64> {
    if degeneracy == 0 {
        return Err(Error::ZeroDegeneracy);
    }
    if !(probability > 0.0 && probability <= 1.0) {
        return Err(Error::InvalidProbability { value: probability });
    }
    Ok(-units.k_b() * (degeneracy as f64 * probability).ln())
}

/// Free energy of a single particle on one level:
/// f = kinetic + potential + k_B T ln(g p).
pub fn single_particle_free_energy(
    kinetic: f64,
    potential: f64,
    degeneracy: u32,
    probability: f64,
    temperature: f64,
    units: &UnitSystem,
) -> Result<f64> {
    ensure_finite("kinetic energy", kinetic)?;
    ensure_finite("potential energy", potential)?;
    if degeneracy == 0 {
        return Err(Error::ZeroDegeneracy);
    }
    if !(probability > 0.0 && probability <= 1.0) {
        return Err(Error::InvalidProbability { value: probability });
    }
    if temperature.is_nan() || temperature < 0.0 {
        return Err(Error::NegativeTemperature { value: temperature });
    }
    Ok(kinetic
        + potential
        + units.k_b() * temperature * (degeneracy as f64 * probability).ln())
}

/// One particle inside a microstate: its energy split and the level it sits
/// on. `probability` is the occupation probability of that level.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleTerm {
    pub kinetic: f64,
    pub potential: f64,
    pub degeneracy: u32,
    pub probability: f64,
}

/// A weighted microstate: `probability` is the ensemble weight, and
/// `pair_energy` is the total interaction energy of the state.
#[derive(Debug, Clone, PartialEq)]
pub struct MicroState {
    pub probability: f64,
    pub particles: Vec<ParticleTerm>,
    pub pair_energy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleDescription {
    states: Vec<MicroState>,
}

impl EnsembleDescription {
    pub fn new(states: Vec<MicroState>) -> Result<Self> {
        let mut total = 0.0;
        for state in &states {
            if !(state.probability >= 0.0 && state.probability <= 1.0) {
                return Err(Error::InvalidProbability {
                    value: state.probability,
                });
            }
            total += state.probability;
            ensure_finite("pair energy", state.pair_energy)?;
            for particle in &state.particles {
                ensure_finite("kinetic energy", particle.kinetic)?;
                ensure_finite("potential energy", particle.potential)?;
                if particle.degeneracy == 0 {
                    return Err(Error::ZeroDegeneracy);
                }
                if !(particle.probability > 0.0 && particle.probability <= 1.0) {
                    return Err(Error::InvalidProbability {
                        value: particle.probability,
                    });
                }
            }
        }
        if (total - 1.0).abs() > STATE_PROBABILITY_TOL {
            return Err(Error::UnnormalizedStateProbabilities {
                sum: total,
                tol: STATE_PROBABILITY_TOL,
            });
        }
        Ok(EnsembleDescription { states })
    }

    pub fn states(&self) -> &[MicroState] {
        &self.states
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleAggregates {
    pub internal_energy: f64,
    pub free_energy: f64,
    pub entropy: f64,
}

/// Ensemble averages of energy, free energy, and entropy. The free energy
/// is averaged from the per-state free energies, not derived from U - TS,
/// so the identity F = U - TS remains a real check on the bookkeeping.
pub fn ensemble_aggregates(
    ensemble: &EnsembleDescription,
    temperature: f64,
    units: &UnitSystem,
) -> Result<EnsembleAggregates> {
    if temperature.is_nan() || temperature < 0.0 {
        return Err(Error::NegativeTemperature { value: temperature });
    }
    let k = units.k_b();
    let mut internal_energy = 0.0;
    let mut free_energy = 0.0;
    let mut entropy = 0.0;
    for state in ensemble.states() {
        let mut state_energy = state.pair_energy;
        let mut log_weight = 0.0;
        for particle in &state.particles {
            state_energy += particle.kinetic + particle.potential;
            log_weight += (particle.degeneracy as f64 * particle.probability).ln();
        }
        internal_energy += state.probability * state_energy;
        free_energy += state.probability * (state_energy + k * temperature * log_weight);
        entropy += state.probability * (-k * log_weight);
    }
    Ok(EnsembleAggregates {
        internal_energy,
        free_energy,
        entropy,
    })
}
