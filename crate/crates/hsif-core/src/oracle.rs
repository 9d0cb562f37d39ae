//! Direct-integration oracle for `L^2(H^n)` inner products and Gram
//! matrices of lattice translates.
//!
//! For a pair of sheared box terms the `t`-integral is the exact overlap
//! length of two windows whose relative shift `d(x, y)` is affine, so the
//! `(x, y)`-integrand is piecewise linear. Each axis is subdivided at the
//! points where the overlap function changes slope (tracked through the
//! corners of the not-yet-integrated axes) and integrated with
//! Gauss-Legendre, which makes the oracle exact up to rounding.

use std::collections::HashMap;

use num_complex::Complex;

use crate::boxfn::{left_translate, BoxFunction, ShearedBoxTerm};
use crate::error::{Error, Result};
use crate::geometry::Interval;
use crate::group::{lattice_ball, LatticePoint};
use crate::quad::GaussLegendre;
use crate::scalar::Scalar;

/// Quadrature configuration for the oracle.
#[derive(Debug, Clone)]
pub struct OracleQuad<T> {
    rule: GaussLegendre<T>,
}

impl<T: Scalar> OracleQuad<T> {
    pub fn new(order: usize) -> Self {
        OracleQuad { rule: GaussLegendre::new(order) }
    }

    pub fn order(&self) -> usize {
        self.rule.order()
    }
}

impl<T: Scalar> Default for OracleQuad<T> {
    fn default() -> Self {
        OracleQuad::new(crate::params::ORACLE_QUAD_ORDER)
    }
}

/// Overlap length of `[a.lo + d, a.hi + d]` and `b`.
fn t_overlap<T: Scalar>(a: &Interval<T>, b: &Interval<T>, d: T) -> T {
    let lo = (a.lo + d).max(b.lo);
    let hi = (a.hi + d).min(b.hi);
    (hi - lo).max(T::zero())
}

struct PairIntegrand<T> {
    axes: Vec<Interval<T>>,
    weights: Vec<T>,
    t1: Interval<T>,
    t2: Interval<T>,
    kinks: [T; 4],
}

impl<T: Scalar> PairIntegrand<T> {
    /// Integrates over `axes[axis..]` with the affine shift partially
    /// evaluated to `d_base` on the outer axes.
    fn recurse(&self, axis: usize, d_base: T, rule: &GaussLegendre<T>) -> T {
        if axis == self.axes.len() {
            return t_overlap(&self.t1, &self.t2, d_base);
        }
        let iv = self.axes[axis];
        let w = self.weights[axis];
        if w == T::zero() {
            return self.recurse(axis + 1, d_base, rule) * iv.len();
        }
        // Slope changes of the inner integral happen where the overlap
        // kinks are attained at a corner of the remaining axes.
        let mut cuts: Vec<T> = Vec::new();
        let inner: Vec<usize> = (axis + 1..self.axes.len())
            .filter(|&j| self.weights[j] != T::zero())
            .collect();
        let corners = 1usize << inner.len();
        for kink in self.kinks {
            for c in 0..corners {
                let mut rest = T::zero();
                for (bit, &j) in inner.iter().enumerate() {
                    let u = if c >> bit & 1 == 0 { self.axes[j].lo } else { self.axes[j].hi };
                    rest += self.weights[j] * u;
                }
                let u = (kink - d_base - rest) / w;
                if u > iv.lo && u < iv.hi {
                    cuts.push(u);
                }
            }
        }
        cuts.push(iv.lo);
        cuts.push(iv.hi);
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        cuts.dedup_by(|a, b| (*a - *b).abs() <= T::real(1e-13));
        let mut acc = T::zero();
        for pair in cuts.windows(2) {
            acc += rule.integrate(pair[0], pair[1], |u| {
                self.recurse(axis + 1, d_base + w * u, rule)
            });
        }
        acc
    }
}

/// Exact-overlap integral of one term pair.
fn pair_inner<T: Scalar>(
    t1: &ShearedBoxTerm<T>,
    t2: &ShearedBoxTerm<T>,
    quad: &OracleQuad<T>,
) -> Complex<T> {
    let zero = Complex::new(T::zero(), T::zero());
    let mut axes = Vec::with_capacity(2 * t1.dim());
    for (a, b) in t1.xbox.iter().zip(&t2.xbox).chain(t1.ybox.iter().zip(&t2.ybox)) {
        match a.intersect(b) {
            Some(iv) => axes.push(iv),
            None => return zero,
        }
    }
    let weights: Vec<T> = t1
        .toffset
        .alpha
        .iter()
        .zip(&t2.toffset.alpha)
        .chain(t1.toffset.beta.iter().zip(&t2.toffset.beta))
        .map(|(a, b)| *a - *b)
        .collect();
    let d0 = t1.toffset.gamma - t2.toffset.gamma;
    let coeff = t1.coeff * t2.coeff.conj();

    if weights.iter().all(|w| *w == T::zero()) {
        let vol = axes.iter().map(Interval::len).fold(T::one(), |a, l| a * l);
        return coeff * t_overlap(&t1.tbox, &t2.tbox, d0) * vol;
    }
    let integrand = PairIntegrand {
        axes,
        weights,
        t1: t1.tbox,
        t2: t2.tbox,
        kinks: [
            t2.tbox.lo - t1.tbox.lo,
            t2.tbox.hi - t1.tbox.hi,
            t2.tbox.lo - t1.tbox.hi,
            t2.tbox.hi - t1.tbox.lo,
        ],
    };
    coeff * integrand.recurse(0, d0, &quad.rule)
}

/// `<f, g>` in `L^2(H^n)` by direct integration; conjugate-symmetric,
/// zero for disjoint supports.
pub fn inner_product_direct<T: Scalar>(
    f: &BoxFunction<T>,
    g: &BoxFunction<T>,
    quad: &OracleQuad<T>,
) -> Complex<T> {
    let mut acc = Complex::new(T::zero(), T::zero());
    for t1 in f.terms() {
        for t2 in g.terms() {
            acc += pair_inner(t1, t2, quad);
        }
    }
    acc
}

/// `|f|^2` by the oracle.
pub fn norm_sq_direct<T: Scalar>(f: &BoxFunction<T>, quad: &OracleQuad<T>) -> T {
    inner_product_direct(f, f, quad).re
}

/// All oracle inner products `<f, L_tau g>` over the lattice points `tau`
/// whose translate can overlap `f`, keyed by `tau`. Entries absent from
/// the map are exactly zero (disjoint supports).
pub fn translate_inner_map<T: Scalar>(
    f: &BoxFunction<T>,
    g: &BoxFunction<T>,
    quad: &OracleQuad<T>,
) -> HashMap<LatticePoint, Complex<T>> {
    let mut map = HashMap::new();
    if f.is_zero() || g.is_zero() {
        return map;
    }
    let dim = f.dim();
    let fx = f.x_support().unwrap();
    let fy = f.y_support().unwrap();
    let gx = g.x_support().unwrap();
    let gy = g.y_support().unwrap();

    // axis ranges for which the shifted plane supports can overlap
    let k_ranges: Vec<(i64, i64)> = (0..dim)
        .map(|i| {
            let lo = (fx[i].lo - gx[i].hi) / T::real(2.0);
            let hi = (fx[i].hi - gx[i].lo) / T::real(2.0);
            (cast_floor(lo), cast_ceil(hi))
        })
        .collect();
    let l_ranges: Vec<(i64, i64)> = (0..dim)
        .map(|i| {
            let lo = fy[i].lo - gy[i].hi;
            let hi = fy[i].hi - gy[i].lo;
            (cast_floor(lo), cast_ceil(hi))
        })
        .collect();

    let mut kl = vec![(0i64, 0i64); dim];
    enumerate_kl(&k_ranges, &l_ranges, 0, &mut kl, &mut |kl| {
        let p0 = LatticePoint {
            k: kl.iter().map(|c| c.0).collect(),
            l: kl.iter().map(|c| c.1).collect(),
            m: 0,
        };
        let g0 = left_translate(&p0, g);
        let m_bound = f.sum(&g0).central_overlap_bound();
        for m in -m_bound..=m_bound {
            let p = LatticePoint { k: p0.k.clone(), l: p0.l.clone(), m };
            let val = inner_product_direct(f, &left_translate(&p, g), quad);
            if val.norm() > T::zero() {
                map.insert(p, val);
            }
        }
    });
    map
}

fn cast_floor<T: Scalar>(v: T) -> i64 {
    num_traits::cast::<T, f64>(v).map(|x| x.floor() as i64).unwrap_or(0)
}

fn cast_ceil<T: Scalar>(v: T) -> i64 {
    num_traits::cast::<T, f64>(v).map(|x| x.ceil() as i64).unwrap_or(0)
}

fn enumerate_kl<F: FnMut(&[(i64, i64)])>(
    k_ranges: &[(i64, i64)],
    l_ranges: &[(i64, i64)],
    axis: usize,
    kl: &mut Vec<(i64, i64)>,
    f: &mut F,
) {
    if axis == k_ranges.len() {
        f(kl);
        return;
    }
    for k in k_ranges[axis].0..=k_ranges[axis].1 {
        for l in l_ranges[axis].0..=l_ranges[axis].1 {
            kl[axis] = (k, l);
            enumerate_kl(k_ranges, l_ranges, axis + 1, kl, f);
        }
    }
}

/// Gram matrix of `{L_gamma phi_j}` over a truncated lattice.
#[derive(Debug, Clone)]
pub struct GramMatrix<T> {
    /// Row labels: (generator index, lattice point).
    pub labels: Vec<(usize, LatticePoint)>,
    /// Row-major complex entries; Hermitian by construction.
    pub entries: Vec<Complex<T>>,
    pub dim: usize,
}

impl<T: Scalar> GramMatrix<T> {
    pub fn entry(&self, i: usize, j: usize) -> Complex<T> {
        self.entries[i * self.dim + j]
    }

    pub fn max_abs_off_identity(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                let target = if i == j { T::one() } else { T::zero() };
                let dev = (self.entry(i, j) - Complex::new(target, T::zero())).norm();
                worst = worst.max(dev);
            }
        }
        worst
    }

    /// Worst deviation from the identity together with its row/column labels.
    pub fn identity_witness(&self) -> Option<(usize, LatticePoint, usize, LatticePoint, T)> {
        let mut worst: Option<(usize, usize, T)> = None;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let target = if i == j { T::one() } else { T::zero() };
                let dev = (self.entry(i, j) - Complex::new(target, T::zero())).norm();
                if worst.map(|w| dev > w.2).unwrap_or(true) {
                    worst = Some((i, j, dev));
                }
            }
        }
        worst.map(|(i, j, dev)| {
            let (gi, pi) = self.labels[i].clone();
            let (gj, pj) = self.labels[j].clone();
            (gi, pi, gj, pj, dev)
        })
    }

    /// Worst off-diagonal entry (the orthogonality violations), with its
    /// row/column labels.
    pub fn orthogonality_witness(&self) -> Option<(usize, LatticePoint, usize, LatticePoint, T)> {
        let mut worst: Option<(usize, usize, T)> = None;
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i == j {
                    continue;
                }
                let dev = self.entry(i, j).norm();
                if worst.map(|w| dev > w.2).unwrap_or(true) {
                    worst = Some((i, j, dev));
                }
            }
        }
        worst.map(|(i, j, dev)| {
            let (gi, pi) = self.labels[i].clone();
            let (gj, pj) = self.labels[j].clone();
            (gi, pi, gj, pj, dev)
        })
    }

    pub fn max_abs_hermitian_defect(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.dim {
            for j in 0..i {
                let dev = (self.entry(i, j) - self.entry(j, i).conj()).norm();
                worst = worst.max(dev);
            }
        }
        worst
    }

    pub fn rayleigh(&self, v: &[Complex<T>]) -> T {
        let mut num = T::zero();
        let mut den = T::zero();
        for i in 0..self.dim {
            let mut av = Complex::new(T::zero(), T::zero());
            for (j, vj) in v.iter().enumerate() {
                av += self.entry(i, j) * vj;
            }
            num += (v[i].conj() * av).re;
            den += v[i].norm_sqr();
        }
        num / den
    }
}

/// Options for [`gram_matrix`].
#[derive(Debug, Clone)]
pub struct GramOptions {
    /// Hard cap on the number of rows `J (2N+1)^{2n+1}`.
    pub row_cap: usize,
}

impl Default for GramOptions {
    fn default() -> Self {
        GramOptions { row_cap: crate::params::GRAM_ROW_CAP }
    }
}

/// Assembles `<L_gamma phi_i, L_gamma' phi_j>` over `|k|, |l|, |m| <= n_trunc`.
///
/// Entries depend only on `gamma^{-1} gamma'`, so each generator pair is
/// reduced to one difference-indexed map of oracle integrals.
pub fn gram_matrix<T: Scalar>(
    generators: &[BoxFunction<T>],
    n_trunc: i64,
    quad: &OracleQuad<T>,
    opts: &GramOptions,
) -> Result<GramMatrix<T>> {
    if generators.is_empty() {
        return Err(Error::InvalidParameter {
            name: "generators",
            reason: "at least one generator required".into(),
        });
    }
    if n_trunc < 0 {
        return Err(Error::InvalidParameter {
            name: "n_trunc",
            reason: "lattice truncation must be nonnegative".into(),
        });
    }
    let dim_n = generators[0].dim();
    let ball = lattice_ball(dim_n, n_trunc);
    let rows = generators.len() * ball.len();
    if rows > opts.row_cap {
        return Err(Error::GramCapExceeded { rows, cap: opts.row_cap });
    }

    let mut labels = Vec::with_capacity(rows);
    for (gi, _) in generators.iter().enumerate() {
        for p in &ball {
            labels.push((gi, p.clone()));
        }
    }

    // one difference map per ordered generator pair (i <= j)
    let mut maps: HashMap<(usize, usize), HashMap<LatticePoint, Complex<T>>> = HashMap::new();
    for i in 0..generators.len() {
        for j in i..generators.len() {
            maps.insert((i, j), translate_inner_map(&generators[i], &generators[j], quad));
        }
    }

    let zero = Complex::new(T::zero(), T::zero());
    let mut entries = vec![zero; rows * rows];
    for r in 0..rows {
        for c in r..rows {
            let (gi, ref pi) = labels[r];
            let (gj, ref pj) = labels[c];
            let tau = pi.difference(pj);
            let val = if gi <= gj {
                maps[&(gi, gj)].get(&tau).copied().unwrap_or(zero)
            } else {
                maps[&(gj, gi)].get(&tau.inverse()).copied().unwrap_or(zero).conj()
            };
            entries[r * rows + c] = val;
            entries[c * rows + r] = val.conj();
        }
    }
    Ok(GramMatrix { labels, entries, dim: rows })
}
