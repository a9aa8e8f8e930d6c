//! Finite-temperature quantum mechanics on 1D grids.
//!
//! The pipeline runs in stages, each usable on its own:
//!
//! 1. [`grid`] and [`potential`] set up the problem;
//! 2. [`eigen`] solves the zero-temperature bound states with a symmetric
//!    tridiagonal eigensolver (Sturm bisection plus inverse iteration);
//! 3. [`thermal`] turns a spectrum into temperature-dependent energies and
//!    populations through a self-consistent partition function, and
//!    aggregates ensembles into U, F, and S;
//! 4. [`oscillator`] holds the closed-form harmonic ladder the numerical
//!    chain is validated against;
//! 5. [`spectroscopy`] computes transition frequencies and their linear
//!    drift with temperature;
//! 6. [`dynamics`] evolves thermal stationary states by exact phases and
//!    scores stationarity through Lagrangian diagnostics;
//! 7. [`multiparticle`] assembles non-interacting N-particle energies and
//!    product states.
//!
//! Everything is deterministic: the same inputs reproduce the same bits,
//! with no global state and no hidden tolerances. Defaults that matter
//! (tail bounds, convergence targets) are public constants.

pub mod dynamics;
pub mod eigen;
pub mod error;
pub mod grid;
pub mod multiparticle;
pub mod oscillator;
pub mod potential;
pub mod spectroscopy;
pub mod thermal;
pub mod units;

pub use dynamics::{
    evolve_stationary, evolve_superposition, euler_lagrange_residual, lagrangian_density,
    phase_factor, stationary_time_derivative, LagrangianSample, StateLabel,
    SuperpositionComponent, WaveField, COEFFICIENT_NORM_TOL,
};
pub use eigen::{
    assign_degeneracies, solve_spectrum, DegeneracyPolicy, SpectrumLevel,
    TridiagonalHamiltonian, ZeroTSpectrum,
};
pub use error::{Error, Result};
pub use grid::Grid1D;
pub use multiparticle::{
    multiparticle_thermal_energy, product_state, MultiParticleConfig, ProductState,
};
pub use oscillator::{
    ho_energy_thermal, ho_energy_zero_t, ho_sqrt_partition, OscillatorParams,
};
pub use potential::{PotentialKind, PotentialSpec};
pub use spectroscopy::{
    shift_between_temperatures, shift_slope, transition_frequency, TransitionShift,
    SHIFT_CROSS_CHECK_REL_TOL,
};
pub use thermal::{
    ensemble_aggregates, fixed_point_partition, microscopic_entropy,
    single_particle_free_energy, sqrt_partition_closed, thermal_energies,
    EnsembleAggregates, EnsembleDescription, FixedPointOptions, FixedPointSolution,
    MicroState, ParticleTerm, TailPolicy, ThermalLevel, ThermalSpectrum,
    DEFAULT_TAIL_REL_TOL, STATE_PROBABILITY_TOL,
};
pub use units::UnitSystem;
