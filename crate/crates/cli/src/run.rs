//! One pipeline per subcommand, each producing tables from a parsed
//! configuration. Every thermal solve in here uses the truncation-checked
//! partition sum, so an inadequate level count fails loudly instead of
//! silently biasing the results.

use num_complex::Complex64;
use sha2::{Digest, Sha256};

use qtherm::{
    assign_degeneracies, ensemble_aggregates, evolve_superposition, ho_energy_thermal,
    ho_energy_zero_t, ho_sqrt_partition, shift_between_temperatures, solve_spectrum,
    thermal_energies, EnsembleDescription, FixedPointOptions, Grid1D, MicroState,
    OscillatorParams, ParticleTerm, SuperpositionComponent, TailPolicy, ThermalSpectrum,
    TridiagonalHamiltonian, UnitSystem, WaveField, ZeroTSpectrum, COEFFICIENT_NORM_TOL,
    DEFAULT_TAIL_REL_TOL, SHIFT_CROSS_CHECK_REL_TOL,
};

use crate::config::{PotentialConfig, RunConfig};
use crate::error::CliError;
use crate::table::{Cell, ResultTable};

struct Prepared {
    units: UnitSystem,
    grid: Grid1D,
    potential: Vec<f64>,
    spectrum: ZeroTSpectrum,
}

fn prepare(cfg: &RunConfig) -> Result<Prepared, CliError> {
    let units = cfg.units()?;
    let grid = cfg.grid()?;
    let potential = cfg.potential_spec(&units)?.evaluate(&grid)?;
    let hamiltonian =
        TridiagonalHamiltonian::new(&potential, &grid, cfg.particle_mass(&units), &units)?;
    let raw = solve_spectrum(&hamiltonian, cfg.levels)?;
    let spectrum = assign_degeneracies(&raw, &cfg.degeneracy_policy())?;
    Ok(Prepared {
        units,
        grid,
        potential,
        spectrum,
    })
}

fn solve_thermal(
    spectrum: &ZeroTSpectrum,
    temperature: f64,
    units: &UnitSystem,
) -> Result<ThermalSpectrum, CliError> {
    Ok(thermal_energies(
        spectrum,
        temperature,
        units,
        TailPolicy::truncated(),
    )?)
}

fn need_temperatures(cfg: &RunConfig, subcommand: &str) -> Result<(), CliError> {
    if cfg.temperatures.is_empty() {
        return Err(CliError::Config(format!(
            "temperatures: at least one temperature is required for `{subcommand}`"
        )));
    }
    Ok(())
}

fn need_positive_temperatures(cfg: &RunConfig, subcommand: &str) -> Result<(), CliError> {
    for (i, t) in cfg.temperatures.iter().enumerate() {
        if *t <= 0.0 {
            return Err(CliError::Config(format!(
                "temperatures[{i}]: `{subcommand}` needs strictly positive temperatures, got {t}"
            )));
        }
    }
    Ok(())
}

pub fn spectrum(cfg: &RunConfig) -> Result<Vec<ResultTable>, CliError> {
    let prepared = prepare(cfg)?;
    let mut table = ResultTable::new(
        "spectrum",
        vec!["n", "E0", "g"],
        vec![
            "E0: eigenvalues of -(hbar^2/(2m)) psi'' + V psi = E psi, wavefunction pinned to zero at both grid ends".into(),
            "g: degeneracy assigned by the configured policy".into(),
        ],
    );
    for (n, level) in prepared.spectrum.levels().iter().enumerate() {
        table.push_row(vec![
            Cell::Int(n as i64),
            Cell::Float(level.energy),
            Cell::Int(level.degeneracy as i64),
        ])?;
    }
    Ok(vec![table])
}

pub fn thermal(cfg: &RunConfig) -> Result<Vec<ResultTable>, CliError> {
    need_temperatures(cfg, "thermal")?;
    let prepared = prepare(cfg)?;
    let mut table = ResultTable::new(
        "thermal",
        vec!["T", "n", "E_T", "p", "sqrtZ"],
        vec![
            "E_T: E(T) = E(0)/2 + (k_B T/2) ln g - k_B T ln sqrtZ(T); at T = 0 the bare E(0)".into(),
            "p: occupation exp(-E(T)/(k_B T))/Z(T); the degeneracy-weighted column sums to 1 per T".into(),
            "sqrtZ: sum_n sqrt(g_n) exp(-E_n(0)/(2 k_B T)); empty at T = 0".into(),
        ],
    );
    for &t in &cfg.temperatures {
        let thermal = solve_thermal(&prepared.spectrum, t, &prepared.units)?;
        let sqrt_z = thermal.sqrt_z();
        for (n, level) in thermal.levels().iter().enumerate() {
            table.push_row(vec![
                Cell::Float(t),
                Cell::Int(n as i64),
                Cell::Float(level.energy),
                Cell::Float(level.probability),
                sqrt_z.map_or(Cell::Empty, Cell::Float),
            ])?;
        }
    }
    Ok(vec![table])
}

pub fn shift(cfg: &RunConfig) -> Result<Vec<ResultTable>, CliError> {
    need_temperatures(cfg, "shift")?;
    need_positive_temperatures(cfg, "shift")?;
    if cfg.temperatures.len() < 2 {
        return Err(CliError::Config(
            "temperatures: `shift` compares temperatures pairwise and needs at least two".into(),
        ));
    }
    if cfg.transitions.is_empty() {
        return Err(CliError::Config(
            "transitions: at least one (upper, lower) pair is required for `shift`".into(),
        ));
    }
    let prepared = prepare(cfg)?;
    let mut table = ResultTable::new(
        "shift",
        vec![
            "i", "j", "T1", "T2", "nu_T1", "nu_T2", "delta_nu", "slope", "closed_form_delta",
        ],
        vec![
            "nu_T1, nu_T2: nu(T) = (E_i(T) - E_j(T))/h from two independent thermal solves".into(),
            "delta_nu: nu_T1 - nu_T2".into(),
            "slope: k_B ln(g_i/g_j) / (2h)".into(),
            "closed_form_delta: slope * (T1 - T2); the run aborts if it disagrees with delta_nu".into(),
        ],
    );
    for pair in &cfg.transitions {
        let [upper, lower] = *pair;
        for a in 0..cfg.temperatures.len() {
            for b in a + 1..cfg.temperatures.len() {
                let t1 = cfg.temperatures[a];
                let t2 = cfg.temperatures[b];
                let shift = shift_between_temperatures(
                    &prepared.spectrum,
                    upper,
                    lower,
                    t1,
                    t2,
                    &prepared.units,
                    TailPolicy::truncated(),
                )?;
                table.push_row(vec![
                    Cell::Int(upper as i64),
                    Cell::Int(lower as i64),
                    Cell::Float(t1),
                    Cell::Float(t2),
                    Cell::Float(shift.nu_t1),
                    Cell::Float(shift.nu_t2),
                    Cell::Float(shift.nu_t1 - shift.nu_t2),
                    Cell::Float(shift.slope),
                    Cell::Float(shift.delta_nu),
                ])?;
            }
        }
    }
    Ok(vec![table])
}

pub fn evolve(cfg: &RunConfig) -> Result<Vec<ResultTable>, CliError> {
    let evolution = cfg.evolution.as_ref().ok_or_else(|| {
        CliError::Config("evolution: this block is required for `evolve`".into())
    })?;
    need_temperatures(cfg, "evolve")?;
    let temperature = cfg.temperatures[0];

    let prepared = prepare(cfg)?;
    let thermal = solve_thermal(&prepared.spectrum, temperature, &prepared.units)?;

    let fields: Vec<WaveField> = evolution
        .components
        .iter()
        .map(|c| Ok(WaveField::from_level(&prepared.spectrum, c.level, temperature)?))
        .collect::<Result<_, CliError>>()?;
    let components: Vec<SuperpositionComponent<'_>> = evolution
        .components
        .iter()
        .zip(&fields)
        .map(|(c, field)| {
            Ok(SuperpositionComponent {
                coefficient: Complex64::new(c.re, c.im),
                energy: thermal.level(c.level)?.energy,
                field,
            })
        })
        .collect::<Result<_, qtherm::Error>>()?;

    let mut table = ResultTable::new(
        "evolve",
        vec!["t", "x", "re", "im", "density"],
        vec![
            format!(
                "re, im: amplitudes of sum_k c_k psi_k exp(-i E_k(T) t / hbar) at T = {}",
                temperature
            ),
            "density: |psi(x, t)|^2".into(),
        ],
    );
    let mut norms = ResultTable::new(
        "evolve_norm",
        vec!["t", "norm"],
        vec!["norm: sqrt(sum |psi|^2 dx); phase evolution keeps it at 1".into()],
    );
    for &t in &evolution.times {
        let state = evolve_superposition(&components, t, &prepared.units)?;
        for (k, value) in state.values().iter().enumerate() {
            table.push_row(vec![
                Cell::Float(t),
                Cell::Float(prepared.grid.point(k)),
                Cell::Float(value.re),
                Cell::Float(value.im),
                Cell::Float(value.norm_sqr()),
            ])?;
        }
        norms.push_row(vec![Cell::Float(t), Cell::Float(state.norm())])?;
    }
    Ok(vec![table, norms])
}

pub fn oscillator(cfg: &RunConfig) -> Result<Vec<ResultTable>, CliError> {
    need_temperatures(cfg, "oscillator")?;
    let units = cfg.units()?;
    let (mass, omega) = match &cfg.potential {
        PotentialConfig::Harmonic { omega, .. } => (cfg.particle_mass(&units), *omega),
        _ => {
            return Err(CliError::Config(
                "potential.kind: `oscillator` needs the harmonic potential".into(),
            ))
        }
    };
    let params = OscillatorParams::new(omega, mass)?;

    let mut table = ResultTable::new(
        "oscillator",
        vec!["T", "n", "E0", "E_T", "sqrtZ"],
        vec![
            "E0: (n + 1/2) hbar omega".into(),
            "E_T: ((n + 1)/2) hbar omega + k_B T ln(1 - exp(-hbar omega/(2 k_B T))) for T > 0; at T = 0 the bare ladder (the two branches do not meet for n >= 1)".into(),
            "sqrtZ: exp(-hbar omega/(4 k_B T)) / (1 - exp(-hbar omega/(2 k_B T))); empty at T = 0".into(),
        ],
    );
    for &t in &cfg.temperatures {
        let sqrt_z = if t > 0.0 {
            Cell::Float(ho_sqrt_partition(&params, t, &units)?)
        } else {
            Cell::Empty
        };
        for n in 0..cfg.levels {
            table.push_row(vec![
                Cell::Float(t),
                Cell::Int(n as i64),
                Cell::Float(ho_energy_zero_t(n, &params, &units)),
                Cell::Float(ho_energy_thermal(n, &params, t, &units)?),
                sqrt_z,
            ])?;
        }
    }
    Ok(vec![table])
}

pub fn ensemble(cfg: &RunConfig) -> Result<Vec<ResultTable>, CliError> {
    need_temperatures(cfg, "ensemble")?;
    need_positive_temperatures(cfg, "ensemble")?;
    let prepared = prepare(cfg)?;
    let h = prepared.grid.spacing();

    let mut table = ResultTable::new(
        "ensemble",
        vec!["T", "U", "F", "S", "closure_residual"],
        vec![
            "states: one per level, weighted P = g p from the thermal solve; kinetic and potential split via <V> over the eigenfunction".into(),
            "U: sum_i P_i (kinetic_i + potential_i)".into(),
            "F: sum_i P_i (kinetic_i + potential_i + k_B T ln(g_i p_i))".into(),
            "S: -k_B sum_i P_i ln(g_i p_i)".into(),
            "closure_residual: F - (U - T S)".into(),
        ],
    );
    for &t in &cfg.temperatures {
        let thermal = solve_thermal(&prepared.spectrum, t, &prepared.units)?;
        let mut states = Vec::new();
        for (level, cold) in thermal.levels().iter().zip(prepared.spectrum.levels()) {
            let weight = level.degeneracy as f64 * level.probability;
            if weight == 0.0 {
                // Occupations beyond the floating-point floor carry no
                // ensemble weight.
                continue;
            }
            let (kinetic, potential) = match &cold.wavefunction {
                Some(psi) => {
                    let mean_v: f64 = psi
                        .iter()
                        .zip(&prepared.potential)
                        .map(|(p, v)| v * p * p)
                        .sum::<f64>()
                        * h;
                    (cold.energy - mean_v, mean_v)
                }
                None => (cold.energy, 0.0),
            };
            states.push(MicroState {
                probability: weight,
                particles: vec![ParticleTerm {
                    kinetic,
                    potential,
                    degeneracy: level.degeneracy,
                    probability: level.probability,
                }],
                pair_energy: 0.0,
            });
        }
        let description = EnsembleDescription::new(states)?;
        let aggregates = ensemble_aggregates(&description, t, &prepared.units)?;
        let residual =
            aggregates.free_energy - (aggregates.internal_energy - t * aggregates.entropy);
        table.push_row(vec![
            Cell::Float(t),
            Cell::Float(aggregates.internal_energy),
            Cell::Float(aggregates.free_energy),
            Cell::Float(aggregates.entropy),
            Cell::Float(residual),
        ])?;
    }
    Ok(vec![table])
}

/// Reproducible run record: tool version, configuration digest, and the
/// tolerance constants that governed the numerics. No timestamps, so a
/// rerun of the same configuration is byte-identical.
pub fn meta_text(subcommand: &str, format: &str, config_text: &str, files: &[String]) -> String {
    let digest = Sha256::digest(config_text.as_bytes());
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    let mut out = String::new();
    out.push_str(&format!("tool: qtherm {}\n", env!("CARGO_PKG_VERSION")));
    out.push_str(&format!("subcommand: {subcommand}\n"));
    out.push_str(&format!("format: {format}\n"));
    out.push_str(&format!("config_sha256: {hex}\n"));
    out.push_str(&format!("tail_rel_tol: {:?}\n", DEFAULT_TAIL_REL_TOL));
    out.push_str(&format!(
        "fixed_point_rel_tol: {:?}\n",
        FixedPointOptions::default().rel_tol
    ));
    out.push_str(&format!(
        "shift_cross_check_rel_tol: {:?}\n",
        SHIFT_CROSS_CHECK_REL_TOL
    ));
    out.push_str(&format!("coefficient_norm_tol: {:?}\n", COEFFICIENT_NORM_TOL));
    out.push_str(&format!("files: {}\n", files.join(", ")));
    out
}
