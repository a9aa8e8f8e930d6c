//! Bound states of the 1D Hamiltonian on a uniform grid.
//!
//! The second-derivative stencil acts on the points strictly inside the
//! grid; the two boundary values are pinned to zero. That turns the
//! Hamiltonian into a real symmetric tridiagonal matrix whose lowest
//! eigenvalues come from Sturm-sequence bisection and whose eigenvectors
//! come from shifted inverse iteration with partial pivoting. Both stages
//! are deterministic: reruns on the same inputs reproduce results bitwise.

use crate::error::{ensure_finite, ensure_positive, Error, Result};
use crate::grid::Grid1D;
use crate::units::UnitSystem;

/// Sweeps of inverse iteration before giving up on an eigenvector.
const MAX_SWEEPS: usize = 12;

#[derive(Debug, Clone)]
pub struct TridiagonalHamiltonian {
    diagonal: Vec<f64>,
    off_diagonal: Vec<f64>,
    grid: Grid1D,
    mass: f64,
}

impl TridiagonalHamiltonian {
    /// Build the interior-point discretization of -hbar^2/(2m) d^2/dx^2 + V.
    ///
    /// `potential` must be sampled on the full grid; only its interior
    /// values enter the matrix.
    pub fn new(
        potential: &[f64],
        grid: &Grid1D,
        mass: f64,
        units: &UnitSystem,
    ) -> Result<Self> {
        if potential.len() != grid.len() {
            return Err(Error::LengthMismatch {
                what: "potential samples",
                expected: grid.len(),
                actual: potential.len(),
            });
        }
        ensure_positive("mass", mass)?;
        for &v in potential {
            ensure_finite("potential sample", v)?;
        }
        let h = grid.spacing();
        let hop = units.hbar() * units.hbar() / (2.0 * mass * h * h);
        let order = grid.interior_len();
        let diagonal = (1..=order).map(|k| potential[k] + 2.0 * hop).collect();
        let off_diagonal = vec![-hop; order - 1];
        Ok(TridiagonalHamiltonian {
            diagonal,
            off_diagonal,
            grid: grid.clone(),
            mass,
        })
    }

    /// Matrix dimension: the number of interior grid points.
    pub fn order(&self) -> usize {
        self.diagonal.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn off_diagonal(&self) -> &[f64] {
        &self.off_diagonal
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// H v for a vector on the interior points.
    pub fn apply_interior(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.order() {
            return Err(Error::LengthMismatch {
                what: "interior vector",
                expected: self.order(),
                actual: v.len(),
            });
        }
        Ok(tridiag_apply(&self.diagonal, &self.off_diagonal, v))
    }

    fn gershgorin_bounds(&self) -> (f64, f64) {
        gershgorin_bounds(&self.diagonal, &self.off_diagonal)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumLevel {
    pub energy: f64,
    pub degeneracy: u32,
    /// Full-grid samples, normalized so that sum |psi|^2 * spacing = 1.
    /// None for analytic spectra and for merged clusters.
    pub wavefunction: Option<Vec<f64>>,
}

/// The zero-temperature spectrum: energies ascending, degeneracies >= 1,
/// wavefunctions (when present) normalized on their grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroTSpectrum {
    levels: Vec<SpectrumLevel>,
    grid: Option<Grid1D>,
}

impl ZeroTSpectrum {
    /// Analytic spectrum from (energy, degeneracy) pairs; no wavefunctions.
    pub fn from_levels(pairs: &[(f64, u32)]) -> Result<Self> {
        let levels = pairs
            .iter()
            .map(|&(energy, degeneracy)| SpectrumLevel {
                energy,
                degeneracy,
                wavefunction: None,
            })
            .collect();
        let spectrum = ZeroTSpectrum { levels, grid: None };
        spectrum.validate()?;
        Ok(spectrum)
    }

    /// Spectrum with grid metadata, as produced by the solver.
    pub fn with_grid(levels: Vec<SpectrumLevel>, grid: Grid1D) -> Result<Self> {
        let spectrum = ZeroTSpectrum {
            levels,
            grid: Some(grid),
        };
        spectrum.validate()?;
        Ok(spectrum)
    }

    fn validate(&self) -> Result<()> {
        if self.levels.is_empty() {
            return Err(Error::EmptySpectrum);
        }
        let mut previous = f64::NEG_INFINITY;
        for (index, level) in self.levels.iter().enumerate() {
            ensure_finite("level energy", level.energy)?;
            if index > 0 && level.energy <= previous {
                return Err(Error::NonAscendingLevels {
                    index,
                    value: level.energy,
                    previous,
                });
            }
            previous = level.energy;
            if level.degeneracy == 0 {
                return Err(Error::ZeroDegeneracy);
            }
            if let Some(psi) = &level.wavefunction {
                let grid = self.grid.as_ref().ok_or(Error::GridMismatch)?;
                if psi.len() != grid.len() {
                    return Err(Error::LengthMismatch {
                        what: "wavefunction samples",
                        expected: grid.len(),
                        actual: psi.len(),
                    });
                }
                let norm: f64 = psi.iter().map(|v| v * v).sum::<f64>() * grid.spacing();
                if (norm - 1.0).abs() > 1e-10 {
                    return Err(Error::NotNormalized { norm });
                }
            }
        }
        Ok(())
    }

    pub fn levels(&self) -> &[SpectrumLevel] {
        &self.levels
    }

    pub fn level(&self, index: usize) -> Result<&SpectrumLevel> {
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

    pub fn grid(&self) -> Option<&Grid1D> {
        self.grid.as_ref()
    }
}

/// How degeneracy weights are attached to solver output.
#[derive(Debug, Clone, PartialEq)]
pub enum DegeneracyPolicy {
    /// Every level keeps weight 1.
    AllOnes,
    /// Caller-supplied table, one entry per level.
    Explicit(Vec<u32>),
    /// Merge runs of levels whose adjacent gaps stay within `tolerance`.
    /// A merged level carries the summed weight and the weighted mean
    /// energy of its members; its wavefunction survives only if the run
    /// has a single member.
    Cluster { tolerance: f64 },
}

pub fn assign_degeneracies(
    spectrum: &ZeroTSpectrum,
    policy: &DegeneracyPolicy,
) -> Result<ZeroTSpectrum> {
    let levels = spectrum.levels();
    let rebuilt: Vec<SpectrumLevel> = match policy {
        DegeneracyPolicy::AllOnes => levels
            .iter()
            .map(|l| SpectrumLevel {
                degeneracy: 1,
                ..l.clone()
            })
            .collect(),
        DegeneracyPolicy::Explicit(table) => {
            if table.len() != levels.len() {
                return Err(Error::DegeneracyTableMismatch {
                    expected: levels.len(),
                    actual: table.len(),
                });
            }
            if table.iter().any(|&g| g == 0) {
                return Err(Error::ZeroDegeneracy);
            }
            levels
                .iter()
                .zip(table)
                .map(|(l, &g)| SpectrumLevel {
                    degeneracy: g,
                    ..l.clone()
                })
                .collect()
        }
        DegeneracyPolicy::Cluster { tolerance } => {
            ensure_positive("cluster tolerance", *tolerance)?;
            let mut merged = Vec::new();
            let mut run: Vec<&SpectrumLevel> = vec![&levels[0]];
            for level in &levels[1..] {
                if level.energy - run.last().unwrap().energy <= *tolerance {
                    run.push(level);
                } else {
                    merged.push(merge_run(&run));
                    run = vec![level];
                }
            }
            merged.push(merge_run(&run));
            merged
        }
    };
    match spectrum.grid() {
        Some(grid) => ZeroTSpectrum::with_grid(rebuilt, grid.clone()),
        None => {
            let spectrum = ZeroTSpectrum {
                levels: rebuilt,
                grid: None,
            };
            spectrum.validate()?;
            Ok(spectrum)
        }
    }
}

fn merge_run(run: &[&SpectrumLevel]) -> SpectrumLevel {
    let weight: u32 = run.iter().map(|l| l.degeneracy).sum();
    let energy = run
        .iter()
        .map(|l| l.degeneracy as f64 * l.energy)
        .sum::<f64>()
        / weight as f64;
    let wavefunction = if run.len() == 1 {
        run[0].wavefunction.clone()
    } else {
        None
    };
    SpectrumLevel {
        energy,
        degeneracy: weight,
        wavefunction,
    }
}

/// Lowest `k` eigenpairs of the discretized Hamiltonian, each level with
/// degeneracy 1 and a grid-normalized wavefunction whose first appreciable
/// sample is positive.
pub fn solve_spectrum(hamiltonian: &TridiagonalHamiltonian, k: usize) -> Result<ZeroTSpectrum> {
    let order = hamiltonian.order();
    if k == 0 || k > order {
        return Err(Error::EigenCountOutOfRange { k, order });
    }
    let d = &hamiltonian.diagonal;
    let e = &hamiltonian.off_diagonal;
    let (lo, hi) = hamiltonian.gershgorin_bounds();
    let spread = (hi - lo).max(f64::MIN_POSITIVE);
    let scale = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
    let eigenvalues = lowest_eigenvalues(d, e, k, lo, hi);

    // Eigenvalues closer than this share a reorthogonalization group.
    let group_tol = 1e-3 * spread;
    let accept_resid = 64.0 * f64::EPSILON * scale;
    let mut accepted: Vec<(f64, Vec<f64>)> = Vec::with_capacity(k);
    for (j, &lambda) in eigenvalues.iter().enumerate() {
        let vector =
            inverse_iteration(d, e, lambda, &accepted, group_tol, accept_resid, j as u64)?;
        accepted.push((lambda, vector));
    }

    let grid = hamiltonian.grid();
    let h = grid.spacing();
    let levels = eigenvalues
        .iter()
        .zip(accepted)
        .map(|(&energy, (_, interior))| {
            let mut psi = vec![0.0; grid.len()];
            psi[1..grid.len() - 1].copy_from_slice(&interior);
            let max_abs = psi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let leading = psi
                .iter()
                .find(|v| v.abs() > 1e-12 * max_abs)
                .copied()
                .unwrap_or(1.0);
            let norm = (psi.iter().map(|v| v * v).sum::<f64>() * h).sqrt();
            let rescale = leading.signum() / norm;
            for v in &mut psi {
                *v *= rescale;
            }
            SpectrumLevel {
                energy,
                degeneracy: 1,
                wavefunction: Some(psi),
            }
        })
        .collect();
    ZeroTSpectrum::with_grid(levels, grid.clone())
}

fn gershgorin_bounds(diag: &[f64], off: &[f64]) -> (f64, f64) {
    let n = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
        let right = if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - left - right);
        hi = hi.max(diag[i] + left + right);
    }
    (lo, hi)
}

/// Number of eigenvalues strictly below `x`, counted through the signs of
/// the LDL^T pivots of (A - x I).
fn sturm_count(diag: &[f64], off: &[f64], x: f64, pivmin: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0f64;
    for i in 0..diag.len() {
        let coupling = if i == 0 {
            0.0
        } else {
            off[i - 1] * off[i - 1] / q
        };
        q = diag[i] - x - coupling;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `k` smallest eigenvalues by index-targeted bisection. Each index j
/// maintains the bracket invariant count(a) <= j < count(b), so multiple
/// close eigenvalues are resolved individually.
fn lowest_eigenvalues(diag: &[f64], off: &[f64], k: usize, lo: f64, hi: f64) -> Vec<f64> {
    let width = (hi - lo).max(f64::MIN_POSITIVE);
    let lo = lo - 1e-12 * width;
    let hi = hi + 1e-12 * width;
    let max_off_sq = off.iter().fold(0.0f64, |m, v| m.max(v * v));
    let pivmin = f64::MIN_POSITIVE * max_off_sq.max(1.0);

    let mut out = Vec::with_capacity(k);
    let mut floor = lo;
    for j in 0..k {
        let mut a = floor;
        let mut b = hi;
        for _ in 0..160 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if sturm_count(diag, off, mid, pivmin) <= j {
                a = mid;
            } else {
                b = mid;
            }
            if (b - a) <= f64::EPSILON * a.abs().max(b.abs()) {
                break;
            }
        }
        out.push(0.5 * (a + b));
        // Eigenvalues ascend, so the exhausted lower bracket carries over.
        floor = a;
    }
    out
}

/// Solve (A - shift I) x = rhs for tridiagonal A via Gaussian elimination
/// with partial pivoting; the row swaps introduce a second superdiagonal.
/// Near-zero pivots are replaced by a tiny value of the same sign, which is
/// exactly the perturbation inverse iteration wants.
fn solve_shifted(diag: &[f64], off: &[f64], shift: f64, rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let dl = off.to_vec();
    let mut d: Vec<f64> = diag.iter().map(|v| v - shift).collect();
    let mut du = off.to_vec();
    let mut du2 = vec![0.0; n.saturating_sub(2)];
    let mut x = rhs.to_vec();

    let scale = diag
        .iter()
        .chain(off.iter())
        .fold(shift.abs(), |m, v| m.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    let tiny = scale * f64::EPSILON * f64::EPSILON;
    let guard = |p: f64| {
        if p.abs() < tiny {
            if p < 0.0 {
                -tiny
            } else {
                tiny
            }
        } else {
            p
        }
    };

    for i in 0..n.saturating_sub(1) {
        let (di, dui) = (d[i], du[i]);
        if di.abs() >= dl[i].abs() {
            let piv = guard(di);
            let m = dl[i] / piv;
            d[i] = piv;
            d[i + 1] -= m * dui;
            x[i + 1] -= m * x[i];
        } else {
            // Swap rows i and i+1; |multiplier| <= 1.
            let m = di / dl[i];
            d[i] = dl[i];
            du[i] = d[i + 1];
            let next_du = if i + 1 < n - 1 { du[i + 1] } else { 0.0 };
            if i < n - 2 {
                du2[i] = next_du;
            }
            d[i + 1] = dui - m * du[i];
            if i + 1 < n - 1 {
                du[i + 1] = -m * next_du;
            }
            x.swap(i, i + 1);
            x[i + 1] -= m * x[i];
        }
    }

    x[n - 1] /= guard(d[n - 1]);
    if n >= 2 {
        x[n - 2] = (x[n - 2] - du[n - 2] * x[n - 1]) / guard(d[n - 2]);
    }
    for i in (0..n.saturating_sub(2)).rev() {
        x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / guard(d[i]);
    }
    x
}

fn tridiag_apply(diag: &[f64], off: &[f64], v: &[f64]) -> Vec<f64> {
    let n = diag.len();
    (0..n)
        .map(|i| {
            let mut s = diag[i] * v[i];
            if i > 0 {
                s += off[i - 1] * v[i - 1];
            }
            if i + 1 < n {
                s += off[i] * v[i + 1];
            }
            s
        })
        .collect()
}

fn l2_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// splitmix64: deterministic start vectors without an RNG dependency.
fn next_seed(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn random_unit_vector(n: usize, salt: u64) -> Vec<f64> {
    let mut state = 0x853C_49E6_748F_EA9B ^ salt;
    let mut v: Vec<f64> = (0..n)
        .map(|_| (next_seed(&mut state) >> 11) as f64 / (1u64 << 52) as f64 - 0.5)
        .collect();
    let norm = l2_norm(&v);
    for x in &mut v {
        *x /= norm;
    }
    v
}

fn inverse_iteration(
    diag: &[f64],
    off: &[f64],
    lambda: f64,
    accepted: &[(f64, Vec<f64>)],
    group_tol: f64,
    accept_resid: f64,
    salt: u64,
) -> Result<Vec<f64>> {
    let n = diag.len();
    let companions: Vec<&Vec<f64>> = accepted
        .iter()
        .filter(|(mu, _)| (mu - lambda).abs() <= group_tol)
        .map(|(_, v)| v)
        .collect();

    let mut x = random_unit_vector(n, salt);
    let mut reseed = 1u64;
    let mut best_resid = f64::INFINITY;
    for _ in 0..MAX_SWEEPS {
        let mut y = solve_shifted(diag, off, lambda, &x);
        // The solve is intentionally near-singular; scale by the largest
        // entry before taking norms so squaring cannot overflow.
        let peak = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if peak == 0.0 || !peak.is_finite() {
            x = random_unit_vector(n, salt ^ (reseed << 32));
            reseed += 1;
            continue;
        }
        for v in &mut y {
            *v /= peak;
        }
        let norm = l2_norm(&y);
        for v in &mut y {
            *v /= norm;
        }
        for companion in &companions {
            let dot: f64 = y.iter().zip(companion.iter()).map(|(a, b)| a * b).sum();
            for (v, c) in y.iter_mut().zip(companion.iter()) {
                *v -= dot * c;
            }
        }
        let remainder = l2_norm(&y);
        if remainder < 1e-8 {
            // The start vector collapsed into the span of the companions.
            x = random_unit_vector(n, salt ^ (reseed << 32));
            reseed += 1;
            continue;
        }
        for v in &mut y {
            *v /= remainder;
        }

        let image = tridiag_apply(diag, off, &y);
        let resid = image
            .iter()
            .zip(&y)
            .map(|(hy, yi)| {
                let r = hy - lambda * yi;
                r * r
            })
            .sum::<f64>()
            .sqrt();
        if resid < best_resid {
            best_resid = resid;
        }
        if resid <= accept_resid {
            return Ok(y);
        }
        x = y;
    }
    Err(Error::EigenNonConvergence {
        budget: MAX_SWEEPS,
        residual: best_resid,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::PotentialSpec;
    use std::f64::consts::PI;

    fn box_hamiltonian(n_points: usize) -> TridiagonalHamiltonian {
        let grid = Grid1D::new(0.0, PI, n_points).unwrap();
        let units = UnitSystem::natural();
        let v = PotentialSpec::infinite_well(PI)
            .unwrap()
            .evaluate(&grid)
            .unwrap();
        TridiagonalHamiltonian::new(&v, &grid, 1.0, &units).unwrap()
    }

    #[test]
    fn stencil_matches_the_five_point_box() {
        let h = box_hamiltonian(5);
        let hop = 8.0 / (PI * PI);
        assert_eq!(h.order(), 3);
        for &d in h.diagonal() {
            assert!((d - 2.0 * hop).abs() < 1e-15);
        }
        for &e in h.off_diagonal() {
            assert!((e + hop).abs() < 1e-15);
        }
    }

    #[test]
    fn harmonic_stencil_carries_the_potential_on_the_diagonal() {
        let grid = Grid1D::new(-2.0, 2.0, 5).unwrap();
        let units = UnitSystem::natural();
        let v = PotentialSpec::harmonic(1.0, 1.0)
            .unwrap()
            .evaluate(&grid)
            .unwrap();
        let h = TridiagonalHamiltonian::new(&v, &grid, 1.0, &units).unwrap();
        // spacing 1: kinetic diagonal 1, hopping -1/2; V = x^2/2 at -1, 0, 1.
        assert_eq!(h.diagonal(), &[1.5, 1.0, 1.5]);
        assert_eq!(h.off_diagonal(), &[-0.5, -0.5]);
    }

    #[test]
    fn sturm_count_brackets_a_two_by_two() {
        // Eigenvalues of [[2,-1],[-1,2]] are 1 and 3.
        let d = [2.0, 2.0];
        let e = [-1.0];
        let pivmin = f64::MIN_POSITIVE;
        assert_eq!(sturm_count(&d, &e, 0.5, pivmin), 0);
        assert_eq!(sturm_count(&d, &e, 2.0, pivmin), 1);
        assert_eq!(sturm_count(&d, &e, 3.5, pivmin), 2);
    }

    #[test]
    fn box_levels_follow_the_squared_index_ladder() {
        let h = box_hamiltonian(501);
        let spectrum = solve_spectrum(&h, 5).unwrap();
        for (i, level) in spectrum.levels().iter().enumerate() {
            let k = (i + 1) as f64;
            let exact = 0.5 * k * k;
            let rel = (level.energy - exact).abs() / exact;
            assert!(rel < 1e-4, "level {i}: rel error {rel}");
        }
        // Ground state specifically, against the continuum value 1/2.
        let rel = (spectrum.levels()[0].energy - 0.5).abs() / 0.5;
        assert!(rel < 1e-5, "ground state rel error {rel}");
    }

    #[test]
    fn eigenvectors_are_orthonormal_on_the_grid() {
        let h = box_hamiltonian(301);
        let spectrum = solve_spectrum(&h, 4).unwrap();
        let spacing = spectrum.grid().unwrap().spacing();
        let levels = spectrum.levels();
        for a in 0..levels.len() {
            let pa = levels[a].wavefunction.as_ref().unwrap();
            for b in a..levels.len() {
                let pb = levels[b].wavefunction.as_ref().unwrap();
                let overlap: f64 =
                    pa.iter().zip(pb).map(|(x, y)| x * y).sum::<f64>() * spacing;
                let expected = if a == b { 1.0 } else { 0.0 };
                assert!(
                    (overlap - expected).abs() < 1e-10,
                    "overlap({a},{b}) = {overlap}"
                );
            }
        }
    }

    #[test]
    fn residuals_stay_small_relative_to_the_image() {
        let h = box_hamiltonian(301);
        let spectrum = solve_spectrum(&h, 4).unwrap();
        for level in spectrum.levels() {
            let psi = level.wavefunction.as_ref().unwrap();
            let interior = &psi[1..psi.len() - 1];
            let image = h.apply_interior(interior).unwrap();
            let r = image
                .iter()
                .zip(interior)
                .map(|(hy, y)| (hy - level.energy * y).powi(2))
                .sum::<f64>()
                .sqrt();
            let image_norm = l2_norm(&image);
            assert!(r / image_norm < 1e-8);
        }
    }

    #[test]
    fn wavefunctions_start_positive_and_vanish_at_the_walls() {
        let h = box_hamiltonian(201);
        let spectrum = solve_spectrum(&h, 3).unwrap();
        for level in spectrum.levels() {
            let psi = level.wavefunction.as_ref().unwrap();
            assert_eq!(psi[0], 0.0);
            assert_eq!(psi[psi.len() - 1], 0.0);
            let first = psi.iter().find(|v| v.abs() > 1e-9).unwrap();
            assert!(*first > 0.0);
        }
    }

    #[test]
    fn single_interior_point_is_the_diagonal_itself() {
        let grid = Grid1D::new(0.0, 2.0, 3).unwrap();
        let units = UnitSystem::natural();
        let v = vec![0.0, 3.0, 0.0];
        let h = TridiagonalHamiltonian::new(&v, &grid, 1.0, &units).unwrap();
        let spectrum = solve_spectrum(&h, 1).unwrap();
        // hop = 1/2, diagonal 3 + 2*hop = 4.
        assert!((spectrum.levels()[0].energy - 4.0).abs() < 1e-12);
        let psi = spectrum.levels()[0].wavefunction.as_ref().unwrap();
        assert!((psi[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigen_count_is_range_checked() {
        let h = box_hamiltonian(5);
        assert_eq!(
            solve_spectrum(&h, 0).unwrap_err(),
            Error::EigenCountOutOfRange { k: 0, order: 3 }
        );
        assert_eq!(
            solve_spectrum(&h, 4).unwrap_err(),
            Error::EigenCountOutOfRange { k: 4, order: 3 }
        );
    }

    #[test]
    fn shifted_solver_inverts_its_own_apply() {
        let d = [2.0, -1.0, 3.5, 0.25, 4.0];
        let e = [-1.0, 0.5, 2.0, -0.75];
        let rhs = [1.0, 2.0, -3.0, 0.5, 1.25];
        let shift = 0.3;
        let x = solve_shifted(&d, &e, shift, &rhs);
        let shifted_d: Vec<f64> = d.iter().map(|v| v - shift).collect();
        let back = tridiag_apply(&shifted_d, &e, &x);
        for (lhs, want) in back.iter().zip(rhs.iter()) {
            assert!((lhs - want).abs() < 1e-10);
        }
    }

    #[test]
    fn from_levels_rejects_disorder_and_zero_weights() {
        assert!(matches!(
            ZeroTSpectrum::from_levels(&[(1.0, 1), (1.0, 1)]).unwrap_err(),
            Error::NonAscendingLevels { index: 1, .. }
        ));
        assert_eq!(
            ZeroTSpectrum::from_levels(&[(0.5, 0)]).unwrap_err(),
            Error::ZeroDegeneracy
        );
        assert_eq!(
            ZeroTSpectrum::from_levels(&[]).unwrap_err(),
            Error::EmptySpectrum
        );
    }

    #[test]
    fn cluster_policy_merges_a_close_pair() {
        let spectrum =
            ZeroTSpectrum::from_levels(&[(1.0, 1), (1.0 + 5e-10, 1), (2.0, 1)]).unwrap();
        let merged = assign_degeneracies(
            &spectrum,
            &DegeneracyPolicy::Cluster { tolerance: 1e-9 },
        )
        .unwrap();
        assert_eq!(merged.len(), 2);
        assert_eq!(merged.levels()[0].degeneracy, 2);
        assert!((merged.levels()[0].energy - (1.0 + 2.5e-10)).abs() < 1e-16);
        assert_eq!(merged.levels()[1].degeneracy, 1);
    }

    #[test]
    fn explicit_policy_validates_the_table() {
        let spectrum = ZeroTSpectrum::from_levels(&[(0.0, 1), (1.0, 1)]).unwrap();
        let relabeled =
            assign_degeneracies(&spectrum, &DegeneracyPolicy::Explicit(vec![2, 6])).unwrap();
        assert_eq!(relabeled.levels()[0].degeneracy, 2);
        assert_eq!(relabeled.levels()[1].degeneracy, 6);
        assert_eq!(
            assign_degeneracies(&spectrum, &DegeneracyPolicy::Explicit(vec![2]))
                .unwrap_err(),
            Error::DegeneracyTableMismatch {
                expected: 2,
                actual: 1
            }
        );
        assert_eq!(
            assign_degeneracies(&spectrum, &DegeneracyPolicy::Explicit(vec![1, 0]))
                .unwrap_err(),
            Error::ZeroDegeneracy
        );
    }

    #[test]
    fn cluster_merge_drops_the_wavefunction_only_when_it_must() {
        let h = box_hamiltonian(61);
        let spectrum = solve_spectrum(&h, 3).unwrap();
        let kept = assign_degeneracies(
            &spectrum,
            &DegeneracyPolicy::Cluster { tolerance: 1e-6 },
        )
        .unwrap();
        // Box levels are well separated: nothing merges, functions survive.
        assert_eq!(kept.len(), 3);
        assert!(kept.levels().iter().all(|l| l.wavefunction.is_some()));
    }
}
