//! Compactly supported generators built from sheared boxes.
//!
//! A [`ShearedBoxTerm`] is
//! `coeff * 1{x in X, y in Y, t - (alpha.x + beta.y + gamma) in T}`;
//! a [`BoxFunction`] is a finite sum of such terms. The class is closed
//! under left translation by the standard lattice: the central twist of the
//! group law only adds an `(x, y)`-linear offset to the `t`-window, which
//! is exactly what the `toffset` form absorbs.

use num_complex::Complex;

use crate::geometry::{AffineForm, Interval};
use crate::group::LatticePoint;
use crate::scalar::Scalar;

/// One sheared indicator box with a complex weight.
#[derive(Debug, Clone, PartialEq)]
pub struct ShearedBoxTerm<T> {
    pub coeff: Complex<T>,
    pub xbox: Vec<Interval<T>>,
    pub ybox: Vec<Interval<T>>,
    pub tbox: Interval<T>,
    pub toffset: AffineForm<T>,
}

impl<T: Scalar> ShearedBoxTerm<T> {
    /// Plain axis-aligned box (no shear) in dimension `n = xbox.len()`.
    pub fn plain(
        coeff: Complex<T>,
        xbox: Vec<Interval<T>>,
        ybox: Vec<Interval<T>>,
        tbox: Interval<T>,
    ) -> Self {
        let dim = xbox.len();
        ShearedBoxTerm { coeff, xbox, ybox, tbox, toffset: AffineForm::zero(dim) }
    }

    pub fn dim(&self) -> usize {
        self.xbox.len()
    }

    pub fn is_degenerate(&self) -> bool {
        self.xbox.iter().any(Interval::is_degenerate)
            || self.ybox.iter().any(Interval::is_degenerate)
            || self.tbox.is_degenerate()
    }

    /// Product of the `(x, y)` box volumes.
    pub fn plane_volume(&self) -> T {
        self.xbox
            .iter()
            .chain(self.ybox.iter())
            .map(Interval::len)
            .fold(T::one(), |acc, l| acc * l)
    }

    pub fn eval(&self, x: &[T], y: &[T], t: T) -> Complex<T> {
        let inside = self.xbox.iter().zip(x).all(|(i, &u)| i.contains(u))
            && self.ybox.iter().zip(y).all(|(i, &u)| i.contains(u))
            && self.tbox.contains(t - self.toffset.eval(x, y));
        if inside {
            self.coeff
        } else {
            Complex::new(T::zero(), T::zero())
        }
    }
}

/// A finite complex combination of sheared boxes in `L^2(H^n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxFunction<T> {
    terms: Vec<ShearedBoxTerm<T>>,
    dim: usize,
}

impl<T: Scalar> BoxFunction<T> {
    /// Builds a box function, dropping degenerate (zero-volume) terms.
    pub fn new(dim: usize, terms: Vec<ShearedBoxTerm<T>>) -> Self {
        let terms = terms
            .into_iter()
            .filter(|t| {
                assert_eq!(t.dim(), dim, "term dimension differs from function dimension");
                !t.is_degenerate()
            })
            .collect();
        BoxFunction { terms, dim }
    }

    /// `c * chi_{[x0,x1] x [y0,y1] x [t0,t1]}` on `H^1`.
    pub fn h1_box(c: Complex<T>, x: (T, T), y: (T, T), t: (T, T)) -> Self {
        BoxFunction::new(
            1,
            vec![ShearedBoxTerm::plain(
                c,
                vec![Interval::new(x.0, x.1)],
                vec![Interval::new(y.0, y.1)],
                Interval::new(t.0, t.1),
            )],
        )
    }

    pub fn zero(dim: usize) -> Self {
        BoxFunction { terms: Vec::new(), dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[ShearedBoxTerm<T>] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, x: &[T], y: &[T], t: T) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for term in &self.terms {
            acc += term.eval(x, y, t);
        }
        acc
    }

    pub fn scaled(&self, c: Complex<T>) -> Self {
        BoxFunction {
            terms: self
                .terms
                .iter()
                .map(|t| ShearedBoxTerm { coeff: t.coeff * c, ..t.clone() })
                .collect(),
            dim: self.dim,
        }
    }

    /// Termwise sum (no cancellation detection).
    pub fn sum(&self, other: &BoxFunction<T>) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        BoxFunction { terms, dim: self.dim }
    }

    /// Per-axis hull of the `x` supports over all terms.
    pub fn x_support(&self) -> Option<Vec<Interval<T>>> {
        self.support_axis(|t| &t.xbox)
    }

    /// Per-axis hull of the `y` supports over all terms.
    pub fn y_support(&self) -> Option<Vec<Interval<T>>> {
        self.support_axis(|t| &t.ybox)
    }

    fn support_axis<F>(&self, pick: F) -> Option<Vec<Interval<T>>>
    where
        F: Fn(&ShearedBoxTerm<T>) -> &Vec<Interval<T>>,
    {
        let mut iter = self.terms.iter();
        let first = pick(iter.next()?).clone();
        Some(iter.fold(first, |acc, t| {
            acc.iter().zip(pick(t)).map(|(a, b)| a.hull(b)).collect()
        }))
    }

    /// Upper bound on the `t`-extent: the largest `m` for which a central
    /// translate by `m` can still overlap this function.
    ///
    /// `|t - toffset|` ranges over `tbox`, and `toffset` over its range on
    /// the `(x, y)` support, so the `t`-support diameter is bounded by
    /// `len(tbox) + osc(toffset)` maximized over term pairs.
    pub fn central_overlap_bound(&self) -> i64 {
        let mut bound = T::zero();
        for t1 in &self.terms {
            for t2 in &self.terms {
                let lo1 = t1.tbox.lo + affine_min(&t1.toffset, &t1.xbox, &t1.ybox);
                let hi1 = t1.tbox.hi + affine_max(&t1.toffset, &t1.xbox, &t1.ybox);
                let lo2 = t2.tbox.lo + affine_min(&t2.toffset, &t2.xbox, &t2.ybox);
                let hi2 = t2.tbox.hi + affine_max(&t2.toffset, &t2.xbox, &t2.ybox);
                bound = bound.max(hi1 - lo2).max(hi2 - lo1);
            }
        }
        num_traits::cast::<T, f64>(bound).map(|b| b.ceil() as i64).unwrap_or(0)
    }

    /// `sum_i |c_i| sqrt(vol(X_i x Y_i))`, the constant in the fiber decay
    /// bound `|f^mu|_{L^2} <= C_f / (pi |mu|)`.
    pub fn fiber_decay_constant(&self) -> T {
        self.terms
            .iter()
            .map(|t| t.coeff.norm() * t.plane_volume().sqrt())
            .fold(T::zero(), |a, b| a + b)
    }
}

fn affine_min<T: Scalar>(f: &AffineForm<T>, xbox: &[Interval<T>], ybox: &[Interval<T>]) -> T {
    let mut v = f.gamma;
    for (a, i) in f.alpha.iter().zip(xbox) {
        v += if *a >= T::zero() { *a * i.lo } else { *a * i.hi };
    }
    for (b, i) in f.beta.iter().zip(ybox) {
        v += if *b >= T::zero() { *b * i.lo } else { *b * i.hi };
    }
    v
}

fn affine_max<T: Scalar>(f: &AffineForm<T>, xbox: &[Interval<T>], ybox: &[Interval<T>]) -> T {
    let mut v = f.gamma;
    for (a, i) in f.alpha.iter().zip(xbox) {
        v += if *a >= T::zero() { *a * i.hi } else { *a * i.lo };
    }
    for (b, i) in f.beta.iter().zip(ybox) {
        v += if *b >= T::zero() { *b * i.hi } else { *b * i.lo };
    }
    v
}

/// Left translation `L_p f(X) = f(p^{-1} . X)` by a standard-lattice point.
///
/// With `p = (2k, l, m)`,
/// `p^{-1} . (x, y, t) = (x - 2k, y - l, t - m - l.x/2 + k.y)`,
/// so each term shifts its boxes by `(2k, l)`, keeps `tbox`, and the
/// offset form gains the twist: `alpha += l/2`, `beta -= k`,
/// `gamma += m - 2 alpha.k - beta.l`.
pub fn left_translate<T: Scalar>(p: &LatticePoint, f: &BoxFunction<T>) -> BoxFunction<T> {
    assert_eq!(p.dim(), f.dim(), "lattice point dimension differs from generator");
    let terms = f
        .terms
        .iter()
        .map(|term| {
            let kf: Vec<T> = p.k.iter().map(|&c| T::real(c as f64)).collect();
            let lf: Vec<T> = p.l.iter().map(|&c| T::real(c as f64)).collect();
            let half = T::real(0.5);
            let mut gamma = term.toffset.gamma + T::real(p.m as f64);
            for i in 0..f.dim {
                gamma -= T::real(2.0) * term.toffset.alpha[i] * kf[i];
                gamma -= term.toffset.beta[i] * lf[i];
            }
            ShearedBoxTerm {
                coeff: term.coeff,
                xbox: term
                    .xbox
                    .iter()
                    .zip(&kf)
                    .map(|(i, k)| i.shifted(T::real(2.0) * *k))
                    .collect(),
                ybox: term.ybox.iter().zip(&lf).map(|(i, l)| i.shifted(*l)).collect(),
                tbox: term.tbox,
                toffset: AffineForm {
                    alpha: term
                        .toffset
                        .alpha
                        .iter()
                        .zip(&lf)
                        .map(|(a, l)| *a + half * *l)
                        .collect(),
                    beta: term.toffset.beta.iter().zip(&kf).map(|(b, k)| *b - *k).collect(),
                    gamma,
                },
            }
        })
        .collect();
    BoxFunction { terms, dim: f.dim }
}
