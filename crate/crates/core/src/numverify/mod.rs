//! Floating-point checks of the exact layer: quadrature overlaps,
//! finite-difference spectra, intertwining residuals and node counts.

mod fd;
mod intertwine;
mod nodes;
mod quadrature;

pub use fd::*;
pub use intertwine::*;
pub use nodes::*;
pub use quadrature::*;

use crate::error::{Error, Result};

/// Uniform grid on `[u_min, u_max]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    pub u_min: f64,
    pub u_max: f64,
    pub points: usize,
    /// Half-width of the band around `u₀` left out of finite differencing.
    pub excluded_center_halfwidth: f64,
}

impl Grid {
    /// Band half-width defaults to `max(2h, 1e-3 (u_max - u_min))`.
    pub fn new(u_min: f64, u_max: f64, points: usize) -> Result<Self> {
        if !(u_min.is_finite() && u_max.is_finite() && u_min < u_max) {
            return Err(Error::InvalidGrid(format!("need u_min < u_max, got [{u_min}, {u_max}]")));
        }
        if points < 3 {
            return Err(Error::InvalidGrid(format!("need at least 3 points, got {points}")));
        }
        let h = (u_max - u_min) / (points - 1) as f64;
        Ok(Grid { u_min, u_max, points, excluded_center_halfwidth: (2.0 * h).max(1e-3 * (u_max - u_min)) })
    }

    pub fn with_excluded_halfwidth(mut self, halfwidth: f64) -> Self {
        assert!(halfwidth >= 0.0, "band half-width must be nonnegative");
        self.excluded_center_halfwidth = halfwidth;
        self
    }

    pub fn spacing(&self) -> f64 {
        (self.u_max - self.u_min) / (self.points - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        self.u_min + i as f64 * self.spacing()
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.points).map(|i| self.node(i))
    }

    pub(crate) fn require_center(&self, u0: f64) -> Result<()> {
        if self.u_min < u0 && u0 < self.u_max {
            Ok(())
        } else {
            Err(Error::InvalidGrid(format!("center {u0} is not inside [{}, {}]", self.u_min, self.u_max)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        assert!(Grid::new(1.0, -1.0, 10).is_err());
        assert!(Grid::new(-1.0, 1.0, 2).is_err());
        let g = Grid::new(-8.0, 8.0, 4001).unwrap();
        assert_eq!(g.spacing(), 0.004);
        assert_eq!(g.excluded_center_halfwidth, 0.016);
        assert!(g.require_center(0.0).is_ok());
        assert!(g.require_center(9.0).is_err());
        assert_eq!(g.nodes().last(), Some(8.0));
    }
}
