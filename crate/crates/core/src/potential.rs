//! Confining potentials sampled on a grid. The infinite well is represented
//! by a zero interior; its walls live in the Dirichlet boundary conditions,
//! not in the sampled values.

use crate::error::{ensure_finite, ensure_positive, Error, Result};
use crate::grid::Grid1D;

#[derive(Debug, Clone, PartialEq)]
pub enum PotentialKind {
    Harmonic { mass: f64, omega_osc: f64 },
    InfiniteWell { width: f64 },
    Tabulated { values: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PotentialSpec {
    kind: PotentialKind,
    offset: f64,
}

impl PotentialSpec {
    pub fn harmonic(mass: f64, omega_osc: f64) -> Result<Self> {
        ensure_positive("mass", mass)?;
        ensure_positive("omega_osc", omega_osc)?;
        Ok(PotentialSpec {
            kind: PotentialKind::Harmonic { mass, omega_osc },
            offset: 0.0,
        })
    }

    pub fn infinite_well(width: f64) -> Result<Self> {
        ensure_positive("width", width)?;
        Ok(PotentialSpec {
            kind: PotentialKind::InfiniteWell { width },
            offset: 0.0,
        })
    }

    pub fn tabulated(values: Vec<f64>) -> Result<Self> {
        for &v in &values {
            ensure_finite("tabulated potential value", v)?;
        }
        Ok(PotentialSpec {
            kind: PotentialKind::Tabulated { values },
            offset: 0.0,
        })
    }

    pub fn with_offset(mut self, offset: f64) -> Result<Self> {
        ensure_finite("offset", offset)?;
        self.offset = offset;
        Ok(self)
    }

    pub fn kind(&self) -> &PotentialKind {
        &self.kind
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Sample the potential at every grid point.
    ///
    /// For the infinite well the grid must span exactly the well: the walls
    /// coincide with the grid endpoints where the solver pins the
    /// wavefunction to zero.
    pub fn evaluate(&self, grid: &Grid1D) -> Result<Vec<f64>> {
        let values = match &self.kind {
            PotentialKind::Harmonic { mass, omega_osc } => grid
                .points()
                .map(|x| 0.5 * mass * omega_osc * omega_osc * x * x + self.offset)
                .collect(),
            PotentialKind::InfiniteWell { width } => {
                let span = grid.x_max() - grid.x_min();
                if ((span - width) / width).abs() > 1e-12 {
                    return Err(Error::ConsistencyFailure {
                        what: "infinite well width and grid span",
                        lhs: *width,
                        rhs: span,
                        tol: 1e-12,
                    });
                }
                vec![self.offset; grid.len()]
            }
            PotentialKind::Tabulated { values } => {
                if values.len() != grid.len() {
                    return Err(Error::LengthMismatch {
                        what: "tabulated potential",
                        expected: grid.len(),
                        actual: values.len(),
                    });
                }
                values.iter().map(|v| v + self.offset).collect()
            }
        };
        Ok(values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_value_at_two() {
        // x = 2 falls exactly on this grid, so the sample is exactly 2.
        let grid = Grid1D::new(0.0, 4.0, 3).unwrap();
        let v = PotentialSpec::harmonic(1.0, 1.0)
            .unwrap()
            .evaluate(&grid)
            .unwrap();
        assert_eq!(v, vec![0.0, 2.0, 8.0]);
    }

    #[test]
    fn well_interior_is_flat_and_width_is_checked() {
        let grid = Grid1D::new(0.0, 3.0, 7).unwrap();
        let v = PotentialSpec::infinite_well(3.0)
            .unwrap()
            .evaluate(&grid)
            .unwrap();
        assert!(v.iter().all(|&x| x == 0.0));

        let err = PotentialSpec::infinite_well(2.0)
            .unwrap()
            .evaluate(&grid)
            .unwrap_err();
        assert!(matches!(err, Error::ConsistencyFailure { .. }));
    }

    #[test]
    fn offset_shifts_every_sample() {
        let grid = Grid1D::new(0.0, 3.0, 4).unwrap();
        let v = PotentialSpec::tabulated(vec![0.0, 1.0, 2.0, 3.0])
            .unwrap()
            .with_offset(-0.5)
            .unwrap()
            .evaluate(&grid)
            .unwrap();
        assert_eq!(v, vec![-0.5, 0.5, 1.5, 2.5]);
    }

    #[test]
    fn tabulated_length_must_match_grid() {
        let grid = Grid1D::new(0.0, 1.0, 5).unwrap();
        let err = PotentialSpec::tabulated(vec![0.0; 4])
            .unwrap()
            .evaluate(&grid)
            .unwrap_err();
        assert_eq!(
            err,
            Error::LengthMismatch {
                what: "tabulated potential",
                expected: 5,
                actual: 4
            }
        );
    }

    #[test]
    fn evaluation_is_deterministic() {
        let grid = Grid1D::new(-2.0, 2.0, 41).unwrap();
        let spec = PotentialSpec::harmonic(2.0, 0.7).unwrap();
        assert_eq!(spec.evaluate(&grid).unwrap(), spec.evaluate(&grid).unwrap());
    }

    #[test]
    fn rejects_nonfinite_inputs() {
        assert!(PotentialSpec::harmonic(1.0, f64::INFINITY).is_err());
        assert!(PotentialSpec::harmonic(-1.0, 1.0).is_err());
        assert!(PotentialSpec::tabulated(vec![0.0, f64::NAN]).is_err());
        assert!(PotentialSpec::infinite_well(1.0)
            .unwrap()
            .with_offset(f64::NAN)
            .is_err());
    }
}
