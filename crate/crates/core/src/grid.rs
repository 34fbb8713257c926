use crate::error::{Error, Result};

/// Smallest grid that still leaves one interior point for the
/// three-deep quantum-force stencil.
pub const MIN_POINTS: usize = 7;

/// Uniform 1D grid: `position(j) = x0 + j * dx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialGrid {
    x0: f64,
    dx: f64,
    n: usize,
}

impl SpatialGrid {
    pub fn new(x0: f64, dx: f64, n: usize) -> Result<Self> {
        if !(dx > 0.0) || !dx.is_finite() {
            return Err(Error::InvalidGrid(format!("spacing must be positive, got {dx}")));
        }
        if !x0.is_finite() {
            return Err(Error::InvalidGrid(format!("origin must be finite, got {x0}")));
        }
        if n < MIN_POINTS {
            return Err(Error::InvalidGrid(format!(
                "need at least {MIN_POINTS} points for the force stencil, got {n}"
            )));
        }
        Ok(Self { x0, dx, n })
    }

    /// Grid of `n` points centred on the origin (x = 0 falls on index `n / 2`).
    pub fn centered(dx: f64, n: usize) -> Result<Self> {
        Self::new(-((n / 2) as f64) * dx, dx, n)
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn position(&self, j: usize) -> f64 {
        self.x0 + j as f64 * self.dx
    }

    pub fn positions(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n).map(move |j| self.position(j))
    }

    pub fn x_max(&self) -> f64 {
        self.position(self.n - 1)
    }

    /// Same extent, half the spacing (`2n - 1` points).
    pub fn refined(&self) -> Self {
        Self { x0: self.x0, dx: 0.5 * self.dx, n: 2 * self.n - 1 }
    }
}

pub fn make_grid(x0: f64, dx: f64, n: usize) -> Result<SpatialGrid> {
    SpatialGrid::new(x0, dx, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_are_uniform() {
        let g = make_grid(0.0, 1.0, 160).unwrap();
        assert_eq!(g.position(159), 159.0);
        let g = make_grid(0.0, 0.5, 160).unwrap();
        assert_eq!(g.position(10), 5.0);
    }

    #[test]
    fn rejects_bad_spacing_and_size() {
        assert!(make_grid(0.0, -1.0, 10).is_err());
        assert!(make_grid(0.0, 0.0, 10).is_err());
        assert!(make_grid(0.0, f64::NAN, 10).is_err());
        assert!(make_grid(0.0, 1.0, 6).is_err());
        assert!(make_grid(0.0, 1.0, 7).is_ok());
    }

    #[test]
    fn centered_grid_contains_origin() {
        let g = SpatialGrid::centered(10.0, 160).unwrap();
        assert_eq!(g.position(80), 0.0);
        let r = g.refined();
        assert_eq!(r.len(), 319);
        assert_eq!(r.position(160), 0.0);
        assert_eq!(r.x_max(), g.x_max());
    }
}
