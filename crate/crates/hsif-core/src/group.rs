//! Heisenberg group arithmetic and the standard lattice.
//!
//! Points of `H^n = C^n x R` are stored as `(x, y, t)` with `z = x + iy`.
//! The group law is
//! `(z, t) . (w, s) = (z + w, t + s + (1/2) Im(z . conj(w)))`,
//! which in real coordinates reads
//! `(x, y, t) . (u, v, s) = (x + u, y + v, t + s + (y.u - x.v)/2)`.
//!
//! The standard lattice is the discrete subgroup
//! `{(2k, l, m) : k, l in Z^n, m in Z}`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A point of the Heisenberg group `H^n`, `z = x + iy`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupPoint<T> {
    pub x: Vec<T>,
    pub y: Vec<T>,
    pub t: T,
}

impl<T: Scalar> GroupPoint<T> {
    /// Builds a point, checking that all entries are finite and that the
    /// `x` and `y` parts have the same length.
    pub fn new(x: Vec<T>, y: Vec<T>, t: T) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch { expected: x.len(), got: y.len() });
        }
        if x.iter().chain(y.iter()).any(|c| !c.is_finite()) || !t.is_finite() {
            return Err(Error::InvalidParameter {
                name: "GroupPoint",
                reason: "entries must be finite".into(),
            });
        }
        Ok(GroupPoint { x, y, t })
    }

    pub fn identity(dim: usize) -> Self {
        GroupPoint { x: vec![T::zero(); dim], y: vec![T::zero(); dim], t: T::zero() }
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }
}

/// Group multiplication `a . b`.
pub fn group_mul<T: Scalar>(a: &GroupPoint<T>, b: &GroupPoint<T>) -> Result<GroupPoint<T>> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: b.dim() });
    }
    let half = T::real(0.5);
    // Im(z . conj(w)) = y.u - x.v
    let mut twist = T::zero();
    for i in 0..a.dim() {
        twist += a.y[i] * b.x[i] - a.x[i] * b.y[i];
    }
    Ok(GroupPoint {
        x: a.x.iter().zip(&b.x).map(|(p, q)| *p + *q).collect(),
        y: a.y.iter().zip(&b.y).map(|(p, q)| *p + *q).collect(),
        t: a.t + b.t + half * twist,
    })
}

/// Group inverse `(z, t)^{-1} = (-z, -t)`.
pub fn group_inv<T: Scalar>(a: &GroupPoint<T>) -> GroupPoint<T> {
    GroupPoint {
        x: a.x.iter().map(|c| -*c).collect(),
        y: a.y.iter().map(|c| -*c).collect(),
        t: -a.t,
    }
}

/// A point `(2k, l, m)` of the standard lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticePoint {
    pub k: Vec<i64>,
    pub l: Vec<i64>,
    pub m: i64,
}

impl LatticePoint {
    pub fn new(k: Vec<i64>, l: Vec<i64>, m: i64) -> Result<Self> {
        if k.len() != l.len() {
            return Err(Error::DimensionMismatch { expected: k.len(), got: l.len() });
        }
        Ok(LatticePoint { k, l, m })
    }

    /// Convenience constructor for `n = 1`.
    pub fn h1(k: i64, l: i64, m: i64) -> Self {
        LatticePoint { k: vec![k], l: vec![l], m }
    }

    pub fn identity(dim: usize) -> Self {
        LatticePoint { k: vec![0; dim], l: vec![0; dim], m: 0 }
    }

    pub fn dim(&self) -> usize {
        self.k.len()
    }

    pub fn is_identity(&self) -> bool {
        self.m == 0 && self.k.iter().all(|&c| c == 0) && self.l.iter().all(|&c| c == 0)
    }

    /// Embedding into the group: `x = 2k, y = l, t = m`.
    pub fn to_group<T: Scalar>(&self) -> GroupPoint<T> {
        GroupPoint {
            x: self.k.iter().map(|&c| T::real(2.0 * c as f64)).collect(),
            y: self.l.iter().map(|&c| T::real(c as f64)).collect(),
            t: T::real(self.m as f64),
        }
    }

    /// Lattice composition; the central correction `k.l' - l.k'` keeps the
    /// product inside the lattice.
    pub fn compose(&self, other: &LatticePoint) -> LatticePoint {
        let mut m = self.m + other.m;
        for i in 0..self.k.len() {
            // (1/2)(y.u - x.v) = (1/2)(l . 2k' - 2k . l') = l.k' - k.l'
            m += self.l[i] * other.k[i] - self.k[i] * other.l[i];
        }
        LatticePoint {
            k: self.k.iter().zip(&other.k).map(|(a, b)| a + b).collect(),
            l: self.l.iter().zip(&other.l).map(|(a, b)| a + b).collect(),
            m,
        }
    }

    pub fn inverse(&self) -> LatticePoint {
        LatticePoint {
            k: self.k.iter().map(|c| -c).collect(),
            l: self.l.iter().map(|c| -c).collect(),
            m: -self.m,
        }
    }

    /// `self^{-1} . other`, the difference that Gram entries depend on.
    pub fn difference(&self, other: &LatticePoint) -> LatticePoint {
        self.inverse().compose(other)
    }

    pub fn inf_norm(&self) -> i64 {
        self.k
            .iter()
            .chain(self.l.iter())
            .map(|c| c.abs())
            .chain(std::iter::once(self.m.abs()))
            .max()
            .unwrap_or(0)
    }
}

/// Enumerates the truncated lattice `|k|_inf, |l|_inf, |m| <= bound` in
/// lexicographic order.
pub fn lattice_ball(dim: usize, bound: i64) -> Vec<LatticePoint> {
    let mut points = Vec::new();
    let side = (2 * bound + 1) as usize;
    let coords = 2 * dim + 1;
    let total = side.pow(coords as u32);
    for idx in 0..total {
        let mut rem = idx;
        let mut digits = Vec::with_capacity(coords);
        for _ in 0..coords {
            digits.push((rem % side) as i64 - bound);
            rem /= side;
        }
        let k = digits[0..dim].to_vec();
        let l = digits[dim..2 * dim].to_vec();
        let m = digits[2 * dim];
        points.push(LatticePoint { k, l, m });
    }
    points
}
