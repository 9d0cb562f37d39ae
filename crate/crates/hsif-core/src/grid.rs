//! Sampling grids on the fiber parameter interval `(0, 1]`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A finite, sorted set of sample points in `(0, 1]`.
///
/// The default is the offset grid `lambda_i = (i + 0.37) / M`, which avoids
/// dyadic rationals where the closed-form profiles of the worked examples
/// vanish (such as `lambda = 1/2`), so "a.e." statements are sampled away
/// from their measure-zero exceptional sets.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaGrid<T> {
    points: Vec<T>,
}

impl<T: Scalar> LambdaGrid<T> {
    /// Offset grid with `m` points: `(i + offset) / m`, `i = 0..m`.
    pub fn offset(m: usize, offset: f64) -> Result<Self> {
        if m < 8 {
            return Err(Error::InvalidParameter {
                name: "grid",
                reason: format!("grid size {m} below the minimum 8"),
            });
        }
        if !(0.0..1.0).contains(&offset) {
            return Err(Error::InvalidParameter {
                name: "grid_offset",
                reason: format!("offset {offset} outside [0, 1)"),
            });
        }
        let points = (0..m)
            .map(|i| T::real((i as f64 + offset) / m as f64))
            .collect();
        Ok(LambdaGrid { points })
    }

    pub fn from_points(points: Vec<T>) -> Result<Self> {
        if points.iter().any(|&p| !(p > T::zero() && p <= T::one())) {
            return Err(Error::InvalidParameter {
                name: "grid",
                reason: "grid points must lie in (0, 1]".into(),
            });
        }
        Ok(LambdaGrid { points })
    }

    pub fn points(&self) -> &[T] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Rectangle-rule integral over `(0, 1]`; exact for trigonometric
    /// polynomials of degree below the grid size on the offset grid.
    pub fn integrate<F: FnMut(T) -> T>(&self, mut f: F) -> T {
        let h = T::one() / T::real(self.points.len() as f64);
        self.points.iter().map(|&p| f(p)).sum::<T>() * h
    }
}

impl<T: Scalar> Default for LambdaGrid<T> {
    fn default() -> Self {
        LambdaGrid::offset(crate::params::GRID_SIZE, crate::params::GRID_OFFSET)
            .expect("defaults are valid")
    }
}
