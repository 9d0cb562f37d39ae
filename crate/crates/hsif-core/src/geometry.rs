//! Closed intervals and affine forms in the `(x, y)` plane variables.

use crate::scalar::Scalar;

/// A closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval<T> {
    pub lo: T,
    pub hi: T,
}

impl<T: Scalar> Interval<T> {
    pub fn new(lo: T, hi: T) -> Self {
        Interval { lo, hi }
    }

    pub fn len(&self) -> T {
        self.hi - self.lo
    }

    /// Nondegenerate means strictly positive length.
    pub fn is_degenerate(&self) -> bool {
        !(self.hi > self.lo)
    }

    pub fn contains(&self, u: T) -> bool {
        self.lo <= u && u <= self.hi
    }

    pub fn shifted(&self, d: T) -> Self {
        Interval { lo: self.lo + d, hi: self.hi + d }
    }

    /// Intersection, or `None` when the overlap has zero length.
    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        if hi > lo {
            Some(Interval { lo, hi })
        } else {
            None
        }
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &Self) -> Self {
        Interval { lo: self.lo.min(other.lo), hi: self.hi.max(other.hi) }
    }

    pub fn midpoint(&self) -> T {
        (self.lo + self.hi) / T::real(2.0)
    }
}

/// Real affine form `alpha . x + beta . y + gamma` on `R^n x R^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineForm<T> {
    pub alpha: Vec<T>,
    pub beta: Vec<T>,
    pub gamma: T,
}

impl<T: Scalar> AffineForm<T> {
    pub fn zero(dim: usize) -> Self {
        AffineForm {
            alpha: vec![T::zero(); dim],
            beta: vec![T::zero(); dim],
            gamma: T::zero(),
        }
    }

    pub fn constant(dim: usize, gamma: T) -> Self {
        let mut f = Self::zero(dim);
        f.gamma = gamma;
        f
    }

    pub fn dim(&self) -> usize {
        self.alpha.len()
    }

    pub fn eval(&self, x: &[T], y: &[T]) -> T {
        let mut v = self.gamma;
        for (a, xi) in self.alpha.iter().zip(x) {
            v += *a * *xi;
        }
        for (b, yi) in self.beta.iter().zip(y) {
            v += *b * *yi;
        }
        v
    }

    pub fn is_constant(&self, eps: T) -> bool {
        self.alpha.iter().chain(self.beta.iter()).all(|c| c.abs() <= eps)
    }

    /// Scales every coefficient, including the constant term.
    pub fn scaled(&self, s: T) -> Self {
        AffineForm {
            alpha: self.alpha.iter().map(|a| *a * s).collect(),
            beta: self.beta.iter().map(|b| *b * s).collect(),
            gamma: self.gamma * s,
        }
    }
}
