//! End-to-end chains: finite-difference spectra fed through the thermal
//! solver and compared against the closed-form oscillator ladder, plus the
//! dynamics built on top of those energies.

use num_complex::Complex64;
use qtherm::{
    evolve_stationary, evolve_superposition, ho_energy_thermal, ho_sqrt_partition,
    lagrangian_density, solve_spectrum, stationary_time_derivative, thermal_energies,
    transition_frequency, Grid1D, OscillatorParams, PotentialSpec, SuperpositionComponent,
    TailPolicy, TridiagonalHamiltonian, UnitSystem, WaveField, ZeroTSpectrum,
};

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn harmonic_setup(k: usize) -> (ZeroTSpectrum, TridiagonalHamiltonian, Vec<f64>, UnitSystem) {
    let units = UnitSystem::natural();
    let grid = Grid1D::new(-10.0, 10.0, 2001).unwrap();
    let potential = PotentialSpec::harmonic(1.0, 1.0)
        .unwrap()
        .evaluate(&grid)
        .unwrap();
    let hamiltonian = TridiagonalHamiltonian::new(&potential, &grid, 1.0, &units).unwrap();
    let spectrum = solve_spectrum(&hamiltonian, k).unwrap();
    (spectrum, hamiltonian, potential, units)
}

#[test]
fn fd_harmonic_chain_reproduces_the_closed_form_ladder() {
    let (spectrum, _, _, units) = harmonic_setup(40);
    let params = OscillatorParams::new(1.0, 1.0).unwrap();
    let hbar_omega = 1.0;

    // A 40-term prefix of the exact ladder cannot meet the geometric tail
    // bound at the high end of the temperature range, so the truncation
    // check is waived and completeness is asserted by construction here.
    for kt in [0.2, 0.5, 1.0, 1.5, 2.0] {
        let thermal = thermal_energies(&spectrum, kt, &units, TailPolicy::Complete).unwrap();

        let weight: f64 = thermal
            .levels()
            .iter()
            .map(|l| l.degeneracy as f64 * l.probability)
            .sum();
        assert!((weight - 1.0).abs() < 1e-10, "kT={kt}: weight {weight}");

        for n in 0..=5 {
            let reference = ho_energy_thermal(n, &params, kt, &units).unwrap();
            let got = thermal.level(n).unwrap().energy;
            // The ladder crosses zero inside this temperature range, so a
            // bare relative bound is ill-posed; the level spacing sets the
            // natural scale floor.
            let tol = 1e-3 * reference.abs().max(hbar_omega);
            assert!(
                (got - reference).abs() <= tol,
                "n={n} kT={kt}: fd {got} vs closed {reference}"
            );
        }
    }
}

#[test]
fn analytic_ladder_through_thermal_matches_oscillator_closed_form() {
    let units = UnitSystem::natural();
    let params = OscillatorParams::new(1.0, 1.0).unwrap();
    let pairs: Vec<(f64, u32)> = (0..200).map(|n| (n as f64 + 0.5, 1)).collect();
    let spectrum = ZeroTSpectrum::from_levels(&pairs).unwrap();

    for kt in [0.3, 1.0, 2.0] {
        let thermal = thermal_energies(&spectrum, kt, &units, TailPolicy::truncated()).unwrap();

        let sqrt_z = thermal.sqrt_z().unwrap();
        let closed = ho_sqrt_partition(&params, kt, &units).unwrap();
        assert!(
            (sqrt_z - closed).abs() <= 1e-10 * closed,
            "kT={kt}: sqrtZ {sqrt_z} vs {closed}"
        );

        for n in 0..10 {
            let reference = ho_energy_thermal(n, &params, kt, &units).unwrap();
            let got = thermal.level(n).unwrap().energy;
            assert!(
                (got - reference).abs() <= 1e-10 * reference.abs().max(1e-2),
                "n={n} kT={kt}: {got} vs {reference}"
            );
        }

        // Constant spacing of half a quantum, independent of temperature.
        for n in 0..9 {
            let gap = thermal.level(n + 1).unwrap().energy - thermal.level(n).unwrap().energy;
            assert!((gap - 0.5).abs() < 1e-12, "kT={kt} n={n}: gap {gap}");
        }
    }
}

#[test]
fn beat_frequency_of_a_two_level_mix_matches_the_transition_frequency() {
    let (spectrum, _, _, units) = harmonic_setup(2);
    let kt = 1.0;
    let thermal = thermal_energies(&spectrum, kt, &units, TailPolicy::Complete).unwrap();
    let e0 = thermal.level(0).unwrap().energy;
    let e1 = thermal.level(1).unwrap().energy;
    let nu = transition_frequency(&thermal, 1, 0, &units).unwrap();

    let psi0 = WaveField::from_level(&spectrum, 0, kt).unwrap();
    let psi1 = WaveField::from_level(&spectrum, 1, kt).unwrap();
    let c = Complex64::new(FRAC_1_SQRT_2, 0.0);

    // Density at one off-center point: m + a cos(dE t / hbar). Both
    // wavefunctions are well away from zero at x = 0.5.
    let probe = 1050;
    let density_at = |t: f64| -> f64 {
        let components = [
            SuperpositionComponent {
                coefficient: c,
                energy: e0,
                field: &psi0,
            },
            SuperpositionComponent {
                coefficient: c,
                energy: e1,
                field: &psi1,
            },
        ];
        let field = evolve_superposition(&components, t, &units).unwrap();
        assert!((field.norm() - 1.0).abs() < 1e-10);
        field.density()[probe]
    };

    // Coarse scan to bracket two successive downward mid-crossings, then
    // bisect each bracket to machine precision.
    let dt = 0.1;
    let samples: Vec<f64> = (0..400).map(|k| density_at(k as f64 * dt)).collect();
    let lo = samples.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = samples.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mid = 0.5 * (lo + hi);

    let mut crossings = Vec::new();
    for k in 0..399 {
        if samples[k] > mid && samples[k + 1] <= mid {
            let (mut a, mut b) = (k as f64 * dt, (k + 1) as f64 * dt);
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if density_at(m) > mid {
                    a = m;
                } else {
                    b = m;
                }
            }
            crossings.push(0.5 * (a + b));
            if crossings.len() == 2 {
                break;
            }
        }
    }
    assert_eq!(crossings.len(), 2, "expected two downward crossings");

    let period = crossings[1] - crossings[0];
    let measured = 1.0 / period;
    assert!(
        (measured - nu).abs() <= 1e-6 * nu,
        "measured {measured} vs transition {nu}"
    );
}

#[test]
fn norm_survives_a_thousand_phase_periods() {
    let (spectrum, _, _, units) = harmonic_setup(1);
    let kt = 1.0;
    let thermal = thermal_energies(&spectrum, kt, &units, TailPolicy::Complete).unwrap();
    let energy = thermal.level(0).unwrap().energy;
    let period = 2.0 * std::f64::consts::PI * units.hbar() / energy.abs();

    let start = WaveField::from_level(&spectrum, 0, kt).unwrap();
    let norm0 = start.norm();

    let mut field = start.clone();
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        field = evolve_stationary(&field, energy, period, &units);
        worst = worst.max((field.norm() - norm0).abs());
    }
    assert!(worst < 1e-12, "norm drift {worst}");

    // Whole periods bring every amplitude back to its start.
    let drift: f64 = field
        .values()
        .iter()
        .zip(start.values())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    assert!(drift < 1e-8, "amplitude drift {drift} after 1000 periods");
}

#[test]
fn stationary_lagrangian_total_vanishes_and_is_time_invariant() {
    let (spectrum, hamiltonian, potential, units) = harmonic_setup(8);
    let kt = 1.0;
    let thermal = thermal_energies(&spectrum, kt, &units, TailPolicy::Complete).unwrap();

    for n in [0usize, 3] {
        let level = thermal.level(n).unwrap();
        let field = WaveField::from_level(&spectrum, n, kt).unwrap();
        let dpsi = stationary_time_derivative(&field, level.energy, &units);
        let sample = lagrangian_density(
            &field,
            &dpsi,
            &potential,
            hamiltonian.mass(),
            level.degeneracy,
            level.probability,
            &units,
        )
        .unwrap();
        // E_T - <H> - tau; the residue is the O(h^2) mismatch between the
        // gradient-form kinetic integral and the stencil eigenvalue, and
        // it grows with the level's curvature (roughly h^2 n^2).
        assert!(
            sample.total.abs() < 5e-4,
            "n={n}: stationary total {}",
            sample.total
        );

        let later = evolve_stationary(&field, level.energy, 0.37, &units);
        let dpsi_later = stationary_time_derivative(&later, level.energy, &units);
        let sample_later = lagrangian_density(
            &later,
            &dpsi_later,
            &potential,
            hamiltonian.mass(),
            level.degeneracy,
            level.probability,
            &units,
        )
        .unwrap();
        assert!(
            (sample_later.total - sample.total).abs() < 1e-10,
            "n={n}: total moved from {} to {}",
            sample.total,
            sample_later.total
        );
        let density_shift: f64 = sample
            .density
            .iter()
            .zip(&sample_later.density)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(density_shift < 1e-10, "n={n}: density shift {density_shift}");
    }
}
