//! Uniform 1D grids. Points are generated as x_min + k * spacing rather than
//! accumulated, so the k-th point carries one rounding, not k of them.

use crate::error::{ensure_finite, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    x_min: f64,
    x_max: f64,
    n_points: usize,
    spacing: f64,
}

impl Grid1D {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        ensure_finite("x_min", x_min)?;
        ensure_finite("x_max", x_max)?;
        if !(x_max > x_min) {
            return Err(Error::DegenerateInterval { x_min, x_max });
        }
        if n_points < 3 {
            return Err(Error::TooFewPoints { n_points });
        }
        let spacing = (x_max - x_min) / (n_points - 1) as f64;
        Ok(Grid1D {
            x_min,
            x_max,
            n_points,
            spacing,
        })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Number of points strictly inside the interval; the two boundary
    /// points are pinned by Dirichlet conditions everywhere in this crate.
    pub fn interior_len(&self) -> usize {
        self.n_points - 2
    }

    pub fn point(&self, k: usize) -> f64 {
        self.x_min + k as f64 * self.spacing
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |k| self.point(k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn five_point_box_grid() {
        let g = Grid1D::new(0.0, PI, 5).unwrap();
        assert_eq!(g.spacing(), PI / 4.0);
        assert_eq!(g.interior_len(), 3);
        let pts: Vec<f64> = g.points().collect();
        assert_eq!(pts.len(), 5);
        assert_eq!(pts[0], 0.0);
        assert_eq!(pts[2], PI / 2.0);
        assert_eq!(pts[4], PI);
    }

    #[test]
    fn spacing_telescopes_to_the_span() {
        let g = Grid1D::new(-3.7, 11.2, 977).unwrap();
        let mut total = 0.0;
        for _ in 0..g.len() - 1 {
            total += g.spacing();
        }
        let span = g.x_max() - g.x_min();
        assert!(((total - span) / span).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_intervals_and_sizes() {
        assert!(matches!(
            Grid1D::new(1.0, 1.0, 5).unwrap_err(),
            Error::DegenerateInterval { .. }
        ));
        assert!(matches!(
            Grid1D::new(2.0, -2.0, 5).unwrap_err(),
            Error::DegenerateInterval { .. }
        ));
        assert_eq!(
            Grid1D::new(0.0, 1.0, 2).unwrap_err(),
            Error::TooFewPoints { n_points: 2 }
        );
        assert!(matches!(
            Grid1D::new(f64::NEG_INFINITY, 1.0, 5).unwrap_err(),
            Error::NonFinite { .. }
        ));
    }

    #[test]
    fn last_point_lands_on_x_max() {
        let g = Grid1D::new(-10.0, 10.0, 2001).unwrap();
        assert!((g.point(2000) - 10.0).abs() < 1e-12);
        assert!((g.point(0) - -10.0).abs() == 0.0);
    }
}
