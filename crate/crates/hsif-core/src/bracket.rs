//! The bracket map `[f, g](lambda)`, the profile functions
//! `G_{k,l}(lambda)`, condition C, Omega sets and cross-orthogonality.
//!
//! Production path: by the Weyl-Plancherel scaling, each summand of
//! `[f, g](lambda) = sum_r <f^(l+r), g^(l+r)>_{B2} |l+r|^n`
//! equals the plain `L^2(C^n)` pairing of the `t`-fibers, so the bracket
//! is a truncated sum of closed forms. An independent kernel-formula path
//! ([`g_kernel`]) with its own `s`-sum and `T^n x R^n` quadrature is kept
//! as a validation tool.

use num_complex::Complex;

use crate::boxfn::{left_translate, BoxFunction};
use crate::error::{Error, Result};
use crate::fiber::{sinc, t_fiber};
use crate::geometry::Interval;
use crate::grid::LambdaGrid;
use crate::group::LatticePoint;
use crate::quad::GaussLegendre;
use crate::scalar::Scalar;

fn check_lambda<T: Scalar>(lambda: T) -> Result<()> {
    if lambda > T::zero() && lambda <= T::one() {
        Ok(())
    } else {
        Err(Error::LambdaOutOfRange {
            lambda: num_traits::cast::<T, f64>(lambda).unwrap_or(f64::NAN),
        })
    }
}

/// One term pair of a bracket sum, reduced to
/// `amp * e^{i theta mu} * prod_j sinc(mu q_j)`.
#[derive(Debug, Clone)]
struct PairSeries<T> {
    amp: Complex<T>,
    /// phase rate in radians per unit `mu`
    theta: T,
    /// sinc frequencies (zero entries dropped; `sinc(0 mu) = 1`)
    qs: Vec<T>,
}

/// Precomputed geometry of `mu -> <f^mu, g^mu>_{L^2(C^n)}`.
///
/// The `(x, y)` intersections are `mu`-independent, and the fiber phases
/// scale linearly with `mu`, so each term pair collapses to one complex
/// amplitude, one phase rate and a handful of sinc factors. Sums over the
/// fiber index advance all oscillations by constant complex ratios.
#[derive(Debug, Clone)]
pub struct BracketProfile<T> {
    pairs: Vec<PairSeries<T>>,
}

impl<T: Scalar> BracketProfile<T> {
    pub fn new(f: &BoxFunction<T>, g: &BoxFunction<T>) -> Self {
        assert_eq!(f.dim(), g.dim(), "generators live on different H^n");
        let mut pairs = Vec::new();
        for t1 in f.terms() {
            'pair: for t2 in g.terms() {
                let mut amp = t1.coeff * t2.coeff.conj();
                let mut theta = T::two_pi() * (t1.toffset.gamma - t2.toffset.gamma);
                let mut qs: Vec<T> = Vec::new();

                // E(mu; T1) conj(E(mu; T2))
                let (s1, d1) = (t1.tbox.lo + t1.tbox.hi, t1.tbox.len());
                let (s2, d2) = (t2.tbox.lo + t2.tbox.hi, t2.tbox.len());
                amp *= d1 * d2;
                theta += T::PI() * (s1 - s2);
                qs.push(d1);
                qs.push(d2);

                for ax in 0..f.dim() {
                    let Some(iv) = t1.xbox[ax].intersect(&t2.xbox[ax]) else { continue 'pair };
                    let da = t1.toffset.alpha[ax] - t2.toffset.alpha[ax];
                    amp *= iv.len();
                    theta += T::PI() * da * (iv.lo + iv.hi);
                    if da != T::zero() {
                        qs.push(da * iv.len());
                    }
                }
                for ax in 0..f.dim() {
                    let Some(iv) = t1.ybox[ax].intersect(&t2.ybox[ax]) else { continue 'pair };
                    let db = t1.toffset.beta[ax] - t2.toffset.beta[ax];
                    amp *= iv.len();
                    theta += T::PI() * db * (iv.lo + iv.hi);
                    if db != T::zero() {
                        qs.push(db * iv.len());
                    }
                }
                pairs.push(PairSeries { amp, theta, qs });
            }
        }
        BracketProfile { pairs }
    }

    /// Whether every term pair has disjoint `(x, y)` support.
    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// `<f^mu, g^mu>_{L^2(C^n)}` at a single fiber.
    pub fn eval_at_mu(&self, mu: T) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for p in &self.pairs {
            let mut v = p.amp * Complex::cis(p.theta * mu);
            for &q in &p.qs {
                v *= sinc(mu * q);
            }
            acc += v;
        }
        acc
    }

    /// `sum_{|r| <= rmax} <f^(lambda+r), g^(lambda+r)>` by phase recurrences.
    pub fn sum_over_r(&self, lambda: T, rmax: usize) -> Complex<T> {
        let steps = 2 * rmax + 1;
        let mu0 = lambda - T::real(rmax as f64);
        let mut acc = Complex::new(T::zero(), T::zero());
        let tiny = T::real(1e-12);
        for p in &self.pairs {
            let mut phase = Complex::cis(p.theta * mu0);
            let dphase = Complex::cis(p.theta);
            let mut waves: Vec<(Complex<T>, Complex<T>)> = p
                .qs
                .iter()
                .map(|&q| (Complex::cis(T::PI() * q * mu0), Complex::cis(T::PI() * q)))
                .collect();
            let mut sum = Complex::new(T::zero(), T::zero());
            for j in 0..steps {
                let mu = mu0 + T::real(j as f64);
                let mut v = phase;
                for (&q, (w, _)) in p.qs.iter().zip(&waves) {
                    let x = mu * q;
                    let s = if x.abs() < tiny { T::one() } else { w.im / (T::PI() * x) };
                    v *= s;
                }
                sum += v;
                phase *= dphase;
                for (w, dw) in waves.iter_mut() {
                    *w *= *dw;
                }
            }
            acc += p.amp * sum;
        }
        acc
    }
}

/// Bracket map `[f, g](lambda) = sum_r <f^(l+r), g^(l+r)>_{B2} |l+r|^n`,
/// truncated at `|r| <= rmax`. Linear in `f`, conjugate-linear in `g`.
pub fn bracket<T: Scalar>(
    f: &BoxFunction<T>,
    g: &BoxFunction<T>,
    lambda: T,
    rmax: usize,
) -> Result<Complex<T>> {
    check_lambda(lambda)?;
    Ok(BracketProfile::new(f, g).sum_over_r(lambda, rmax))
}

/// Analytic bound on the dropped tail of the `r`-sum:
/// `|f^mu| <= C_f / (pi |mu|)` for compact `t`-support, and
/// `sum_{|r| > R} |lambda + r|^{-2} < 2 / R` uniformly on `(0, 1]`,
/// so the tail is below `2 C_f C_g / (pi^2 R)`.
pub fn bracket_tail_bound<T: Scalar>(f: &BoxFunction<T>, g: &BoxFunction<T>, rmax: usize) -> T {
    let c = f.fiber_decay_constant() * g.fiber_decay_constant();
    T::real(2.0) * c / (T::PI() * T::PI() * T::real(rmax as f64))
}

/// `G_{k,l}(lambda) = [f, L_{(2k,l,0)} f](lambda)`, the bracket against a
/// plane lattice translate.
pub fn g_fast<T: Scalar>(
    f: &BoxFunction<T>,
    k: &[i64],
    l: &[i64],
    lambda: T,
    rmax: usize,
) -> Result<Complex<T>> {
    check_lambda(lambda)?;
    Ok(g_profile(f, k, l).sum_over_r(lambda, rmax))
}

/// Reusable profile of `lambda -> G_{k,l}(lambda)`; build once per `(k,l)`
/// when sweeping a grid.
pub fn g_profile<T: Scalar>(f: &BoxFunction<T>, k: &[i64], l: &[i64]) -> BracketProfile<T> {
    let p = LatticePoint { k: k.to_vec(), l: l.to_vec(), m: 0 };
    BracketProfile::new(f, &left_translate(&p, f))
}

/// All `(k, l)` for which `f` and the `(2k, l)`-shifted `g` have
/// `(x, y)`-supports overlapping in positive measure. Outside this set
/// every bracket `[f, L_{(2k,l,0)} g]` vanishes identically.
pub fn overlapping_kl<T: Scalar>(
    f: &BoxFunction<T>,
    g: &BoxFunction<T>,
) -> Vec<(Vec<i64>, Vec<i64>)> {
    if f.is_zero() || g.is_zero() {
        return Vec::new();
    }
    let dim = f.dim();
    let fx = f.x_support().unwrap();
    let fy = f.y_support().unwrap();
    let gx = g.x_support().unwrap();
    let gy = g.y_support().unwrap();
    let mut out = Vec::new();
    let k_range: Vec<Vec<i64>> = (0..dim)
        .map(|i| {
            let lo = (fx[i].lo - gx[i].hi) / T::real(2.0);
            let hi = (fx[i].hi - gx[i].lo) / T::real(2.0);
            strict_integers(lo, hi)
        })
        .collect();
    let l_range: Vec<Vec<i64>> = (0..dim)
        .map(|i| strict_integers(fy[i].lo - gy[i].hi, fy[i].hi - gy[i].lo))
        .collect();
    let mut kl = vec![(0i64, 0i64); dim];
    fn rec(
        axis: usize,
        k_range: &[Vec<i64>],
        l_range: &[Vec<i64>],
        kl: &mut Vec<(i64, i64)>,
        out: &mut Vec<(Vec<i64>, Vec<i64>)>,
    ) {
        if axis == k_range.len() {
            out.push((kl.iter().map(|c| c.0).collect(), kl.iter().map(|c| c.1).collect()));
            return;
        }
        for &k in &k_range[axis] {
            for &l in &l_range[axis] {
                kl[axis] = (k, l);
                rec(axis + 1, k_range, l_range, kl, out);
            }
        }
    }
    rec(0, &k_range, &l_range, &mut kl, &mut out);
    out
}

/// Integers strictly inside `(lo, hi)`.
fn strict_integers<T: Scalar>(lo: T, hi: T) -> Vec<i64> {
    let lo = num_traits::cast::<T, f64>(lo).unwrap();
    let hi = num_traits::cast::<T, f64>(hi).unwrap();
    let eps = 1e-12;
    let a = (lo + eps).floor() as i64 + 1;
    let b = (hi - eps).ceil() as i64 - 1;
    (a..=b).collect()
}

/// Report of a condition-C certification on a finite grid.
#[derive(Debug, Clone)]
pub struct ConditionCReport<T> {
    pub pass: bool,
    /// Largest `|G_{k,l}(lambda)|` over `(k,l) != (0,0)` and the grid.
    pub max_abs: T,
    /// Where the maximum was attained.
    pub worst: Option<(Vec<i64>, Vec<i64>, T)>,
    /// Number of `(k, l)` pairs with potential support overlap.
    pub pairs_checked: usize,
    pub tol: T,
    pub rmax: usize,
}

/// Certifies condition C on the grid: `max |G_{k,l}| <= tol` over every
/// `(k, l) != (0, 0)` with possible support overlap. For compactly
/// supported generators the non-enumerated pairs vanish exactly.
pub fn condition_c_check<T: Scalar>(
    f: &BoxFunction<T>,
    grid: &LambdaGrid<T>,
    rmax: usize,
    tol: T,
) -> ConditionCReport<T> {
    let mut max_abs = T::zero();
    let mut worst = None;
    let mut pairs = 0usize;
    for (k, l) in overlapping_kl(f, f) {
        if k.iter().all(|&c| c == 0) && l.iter().all(|&c| c == 0) {
            continue;
        }
        pairs += 1;
        let profile = g_profile(f, &k, &l);
        for &lambda in grid.points() {
            let v = profile.sum_over_r(lambda, rmax).norm();
            if v > max_abs {
                max_abs = v;
                worst = Some((k.clone(), l.clone(), lambda));
            }
        }
    }
    ConditionCReport { pass: max_abs <= tol, max_abs, worst, pairs_checked: pairs, tol, rmax }
}

/// The sampled set `Omega = { lambda : G_{0,0}(lambda) > eps }`.
#[derive(Debug, Clone)]
pub struct OmegaSet<T> {
    pub grid: LambdaGrid<T>,
    /// `G_{0,0}` samples (real part; the diagonal bracket is real).
    pub g00: Vec<T>,
    pub member: Vec<bool>,
    pub epsilon: T,
}

impl<T: Scalar> OmegaSet<T> {
    pub fn count(&self) -> usize {
        self.member.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.count() == 0
    }

    /// Minimum of `G_{0,0}` over the members, with its location.
    pub fn min_on_omega(&self) -> Option<(T, T)> {
        self.grid
            .points()
            .iter()
            .zip(self.g00.iter())
            .zip(self.member.iter())
            .filter(|(_, &m)| m)
            .map(|((&l, &g), _)| (g, l))
            .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap())
    }
}

/// Samples `G_{0,0}` on the grid and flags membership of
/// `Omega = { G_{0,0} != 0 }` against `eps` (default: `1e-6 * max G`).
pub fn omega_set<T: Scalar>(
    f: &BoxFunction<T>,
    grid: &LambdaGrid<T>,
    rmax: usize,
    eps: Option<T>,
) -> OmegaSet<T> {
    let dim = f.dim();
    let profile = g_profile(f, &vec![0; dim], &vec![0; dim]);
    let g00: Vec<T> = grid
        .points()
        .iter()
        .map(|&l| profile.sum_over_r(l, rmax).re)
        .collect();
    let max = g00.iter().fold(T::zero(), |a, &b| a.max(b));
    let epsilon = eps.unwrap_or(T::real(crate::params::OMEGA_EPS_REL) * max);
    let member = g00.iter().map(|&g| g > epsilon).collect();
    OmegaSet { grid: grid.clone(), g00, member, epsilon }
}

/// `(i, j, k, l, lambda)` location of a worst cross bracket.
pub type CrossWitness<T> = (usize, usize, Vec<i64>, Vec<i64>, T);

/// Outcome of a pairwise cross-orthogonality sweep (the sampled version of
/// the vanishing mixed brackets of a mutually orthogonal family).
#[derive(Debug, Clone)]
pub struct CrossOrthReport<T> {
    pub pass: bool,
    pub max_abs: T,
    /// Where the maximum was attained.
    pub worst: Option<CrossWitness<T>>,
    /// Index pairs skipped because the generators are structurally equal.
    pub skipped_same: Vec<(usize, usize)>,
    pub tol: T,
}

/// Checks `[phi_i, L_{(2k,l,0)} phi_j](lambda) = 0` for all `i != j`,
/// sampled over the grid and the overlap enumeration (including
/// `(k, l) = (0, 0)`). Pairs of structurally identical generators are
/// flagged and skipped rather than failed.
pub fn cross_orthogonality_check<T: Scalar>(
    family: &[BoxFunction<T>],
    grid: &LambdaGrid<T>,
    rmax: usize,
    tol: T,
) -> CrossOrthReport<T> {
    let mut max_abs = T::zero();
    let mut worst = None;
    let mut skipped = Vec::new();
    for i in 0..family.len() {
        for j in (i + 1)..family.len() {
            if family[i] == family[j] {
                skipped.push((i, j));
                continue;
            }
            for (k, l) in overlapping_kl(&family[i], &family[j]) {
                let p = LatticePoint { k: k.clone(), l: l.clone(), m: 0 };
                let profile = BracketProfile::new(&family[i], &left_translate(&p, &family[j]));
                for &lambda in grid.points() {
                    let v = profile.sum_over_r(lambda, rmax).norm();
                    if v > max_abs {
                        max_abs = v;
                        worst = Some((i, j, k.clone(), l.clone(), lambda));
                    }
                }
            }
        }
    }
    CrossOrthReport { pass: max_abs <= tol, max_abs, worst, skipped_same: skipped, tol }
}

/// Sampled bracket table of one generator: `G_{k,l}` over the grid for
/// every `(k, l)` in the overlap enumeration.
#[derive(Debug, Clone)]
pub struct BracketTable<T> {
    pub generator: String,
    pub grid: LambdaGrid<T>,
    pub rows: Vec<BracketRow<T>>,
    pub rmax: usize,
    pub tail_bound: T,
}

#[derive(Debug, Clone)]
pub struct BracketRow<T> {
    pub k: Vec<i64>,
    pub l: Vec<i64>,
    pub values: Vec<Complex<T>>,
}

/// Builds the bracket table of `f` (rows sorted by `(k, l)`).
pub fn bracket_table<T: Scalar>(
    f: &BoxFunction<T>,
    name: &str,
    grid: &LambdaGrid<T>,
    rmax: usize,
) -> BracketTable<T> {
    let mut kls = overlapping_kl(f, f);
    kls.sort();
    let rows = kls
        .into_iter()
        .map(|(k, l)| {
            let profile = g_profile(f, &k, &l);
            let values = grid
                .points()
                .iter()
                .map(|&lambda| profile.sum_over_r(lambda, rmax))
                .collect();
            BracketRow { k, l, values }
        })
        .collect();
    BracketTable {
        generator: name.to_string(),
        grid: grid.clone(),
        rows,
        rmax,
        tail_bound: bracket_tail_bound(f, f, rmax),
    }
}

impl<T: Scalar> BracketTable<T> {
    /// CSV with columns `lambda,k,l,re_g,im_g,rmax,tail_bound`; integer
    /// vectors are `;`-joined for `n > 1`.
    pub fn to_csv(&self) -> String {
        use crate::report::fmt_e12;
        let mut out = String::from("lambda,k,l,re_g,im_g,rmax,tail_bound\n");
        let join = |v: &[i64]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(";");
        for row in &self.rows {
            for (lambda, value) in self.grid.points().iter().zip(&row.values) {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    fmt_e12(num_traits::cast::<T, f64>(*lambda).unwrap()),
                    join(&row.k),
                    join(&row.l),
                    fmt_e12(num_traits::cast::<T, f64>(value.re).unwrap()),
                    fmt_e12(num_traits::cast::<T, f64>(value.im).unwrap()),
                    self.rmax,
                    fmt_e12(num_traits::cast::<T, f64>(self.tail_bound).unwrap()),
                ));
            }
        }
        out
    }
}

/// Tuning of the kernel-formula quadrature.
#[derive(Debug, Clone)]
pub struct KernelSumQuad {
    /// Gauss-Legendre order per oscillation-scaled cell.
    pub gauss_order: usize,
    /// Target oscillation cycles per quadrature cell.
    pub cycles_per_cell: f64,
    /// Minimum cells per unit length.
    pub base_cells_per_unit: usize,
    /// Include the exact DC tail of the unfolded xi-integral.
    pub tail_correction: bool,
}

impl Default for KernelSumQuad {
    fn default() -> Self {
        KernelSumQuad {
            gauss_order: 12,
            cycles_per_cell: 1.5,
            base_cells_per_unit: 4,
            tail_correction: true,
        }
    }
}

/// Kernel-formula evaluation of `G_{k,l}(lambda)`: for each fiber index the
/// kernel product
/// `K(xi + s, eta) conj(K(xi + s + l, eta)) e^{-2 pi i mu k.(l + 2 xi)} e^{-4 pi i lambda k.s}`
/// is summed over `s` and integrated over `T^n x R^n`. The `s`-sum and the
/// `xi`-periodization combine into one integral over `[-smax, smax + 1]`
/// (the phases agree because `e^{-4 pi i r k . s} = 1` on integers); the
/// `s`-tail decays like `1/s^2` and its non-oscillatory part is added in
/// closed form.
///
/// Only `n = 1` is supported: this path exists to validate the bracket
/// route at the scale of the worked examples, and its cost grows
/// geometrically with the dimension.
pub fn g_kernel<T: Scalar>(
    f: &BoxFunction<T>,
    k: &[i64],
    l: &[i64],
    lambda: T,
    rmax: usize,
    smax: i64,
    quad: &KernelSumQuad,
) -> Result<Complex<T>> {
    check_lambda(lambda)?;
    if f.dim() != 1 {
        return Err(Error::InvalidParameter {
            name: "g_kernel",
            reason: "kernel validation path supports n = 1 only".into(),
        });
    }
    if quad.gauss_order < 2 || quad.cycles_per_cell <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "quad",
            reason: "gauss_order >= 2 and cycles_per_cell > 0 required".into(),
        });
    }
    let (k1, l1) = (k[0], l[0]);
    // support scale: |rho| <= max |alpha| + |l|/2 + max |u| / 2
    let mut rho_max = 0.0f64;
    for term in f.terms() {
        let a = num_traits::cast::<T, f64>(term.toffset.alpha[0].abs()).unwrap();
        let y = num_traits::cast::<T, f64>(term.ybox[0].lo.abs().max(term.ybox[0].hi.abs())).unwrap();
        rho_max = rho_max.max(a + l1.abs() as f64 / 2.0 + y / 2.0 + y);
    }
    if (smax as f64) < rho_max + 2.0 {
        return Err(Error::InvalidParameter {
            name: "smax",
            reason: format!("smax must be at least the support scale {:.1} + 2", rho_max),
        });
    }

    let rule = GaussLegendre::<T>::new(quad.gauss_order);
    let mut total = Complex::new(T::zero(), T::zero());
    for r in -(rmax as i64)..=rmax as i64 {
        let mu = lambda + T::real(r as f64);
        total += kernel_sum_single_fiber(f, k1, l1, lambda, mu, smax, quad, &rule);
    }
    Ok(total)
}

/// One fiber's contribution, weighted by `|mu|^n`.
#[allow(clippy::too_many_arguments)]
fn kernel_sum_single_fiber<T: Scalar>(
    f: &BoxFunction<T>,
    k1: i64,
    l1: i64,
    _lambda: T,
    mu: T,
    smax: i64,
    quad: &KernelSumQuad,
    rule: &GaussLegendre<T>,
) -> Complex<T> {
    let fm = t_fiber(f, mu);
    let muf = num_traits::cast::<T, f64>(mu).unwrap();
    let kf = T::real(k1 as f64);
    let lf = T::real(l1 as f64);
    let s_lo = T::real(-(smax as f64));
    let s_hi = T::real(smax as f64 + 1.0);

    let mut acc = Complex::new(T::zero(), T::zero());
    for ti in &fm.terms {
        for tj in &fm.terms {
            // u-domain of K_i(xi, xi+u) conj(K_j(xi+l, xi+u)): u in Y_i, u - l in Y_j
            let Some(udom) = ti.ybox[0].intersect(&tj.ybox[0].shifted(lf)) else { continue };
            let (ai, bi, ci) = (ti.phase.alpha[0], ti.phase.beta[0], ti.phase.gamma);
            let (aj, bj, cj) = (tj.phase.alpha[0], tj.phase.beta[0], tj.phase.gamma);
            let (xi_box, xj_box) = (ti.xbox[0], tj.xbox[0]);
            let amp = ti.coeff * tj.coeff.conj();

            // oscillation bounds (cycles per unit length)
            let xe_max = |b: &Interval<T>| {
                num_traits::cast::<T, f64>(b.lo.abs().max(b.hi.abs())).unwrap()
            };
            let xi_cycles =
                muf.abs() * (xe_max(&xi_box) + xe_max(&xj_box) + 2.0 * k1.abs() as f64);
            let u_cycles = muf.abs() * (xe_max(&xi_box) + xe_max(&xj_box)) / 2.0
                + num_traits::cast::<T, f64>((bi - bj).abs()).unwrap();

            let xi_cells = cells_for(s_hi - s_lo, xi_cycles, quad);
            let u_cells = cells_for(udom.len(), u_cycles, quad);

            // numeric part over [-smax, smax+1] x udom
            let du = udom.len() / T::real(u_cells as f64);
            let dxi = (s_hi - s_lo) / T::real(xi_cells as f64);
            let mut pair = Complex::new(T::zero(), T::zero());
            for iu in 0..u_cells {
                let ua = udom.lo + du * T::real(iu as f64);
                let inner = rule_integrate_c(rule, ua, ua + du, |u| {
                    let mut row = Complex::new(T::zero(), T::zero());
                    for ix in 0..xi_cells {
                        let xa = s_lo + dxi * T::real(ix as f64);
                        row += rule_integrate_c(rule, xa, xa + dxi, |xt| {
                            let wi = ai + mu * (xt + xt + u) / T::real(2.0);
                            let wj = aj + mu * (xt + lf + xt + u) / T::real(2.0);
                            let ei = crate::fiber::osc_integral(wi, &xi_box);
                            let ej = crate::fiber::osc_integral(wj, &xj_box);
                            let phase = T::two_pi()
                                * (bi * u + ci - (bj * (u - lf) + cj))
                                - T::two_pi() * mu * kf * (lf + xt + xt);
                            ei * ej.conj() * Complex::cis(phase)
                        });
                    }
                    row
                });
                pair += inner;
            }

            // exact non-oscillatory tail of the xi-integral
            if quad.tail_correction {
                pair += kernel_dc_tail(
                    mu, kf, lf, ai, aj, bi, bj, ci, cj, &xi_box, &xj_box, &udom, s_lo, s_hi, rule,
                );
            }
            acc += amp * pair;
        }
    }
    acc * mu.abs()
}

fn cells_for<T: Scalar>(len: T, cycles_per_unit: f64, quad: &KernelSumQuad) -> usize {
    let lenf = num_traits::cast::<T, f64>(len).unwrap();
    let by_osc = (lenf * cycles_per_unit / quad.cycles_per_cell).ceil() as usize;
    let by_base = (lenf * quad.base_cells_per_unit as f64).ceil() as usize;
    by_osc.max(by_base).max(1)
}

fn rule_integrate_c<T: Scalar, F: FnMut(T) -> Complex<T>>(
    rule: &GaussLegendre<T>,
    a: T,
    b: T,
    mut f: F,
) -> Complex<T> {
    let half = T::real(0.5);
    let mid = (a + b) * half;
    let rad = (b - a) * half;
    let mut acc = Complex::new(T::zero(), T::zero());
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        acc += f(mid + rad * *x) * *w;
    }
    acc * rad
}

/// Tails `int_{|xi| beyond the window} ...` of the edge components of
/// `E_i conj(E_j) e^{-2 pi i mu k (l + 2 xi)}`.
///
/// A component with vanishing phase rate `theta = 2 pi mu (e - e' - 2k)`
/// contributes the exact integral of `1/(omega_i omega_j)` (a logarithm);
/// an oscillatory component contributes its leading
/// integration-by-parts boundary term `-g(A) e^{i theta A} / (i theta)`,
/// leaving a remainder of order `1/(theta^2 mu^2 smax^3)`.
#[allow(clippy::too_many_arguments)]
fn kernel_dc_tail<T: Scalar>(
    mu: T,
    kf: T,
    lf: T,
    ai: T,
    aj: T,
    bi: T,
    bj: T,
    ci: T,
    cj: T,
    xi_box: &Interval<T>,
    xj_box: &Interval<T>,
    udom: &Interval<T>,
    s_lo: T,
    s_hi: T,
    rule: &GaussLegendre<T>,
) -> Complex<T> {
    let two = T::real(2.0);
    let edges_i = [(xi_box.hi, T::one()), (xi_box.lo, -T::one())];
    let edges_j = [(xj_box.hi, T::one()), (xj_box.lo, -T::one())];
    let four_pi2 = T::real(4.0) * T::PI() * T::PI();
    let mut tail = Complex::new(T::zero(), T::zero());
    for (e, se) in edges_i {
        for (ep, sep) in edges_j {
            let theta = T::two_pi() * mu * (e - ep - two * kf);
            let contrib = rule_integrate_c(rule, udom.lo, udom.hi, |u| {
                let rho_i = ai / mu + u / two;
                let rho_j = aj / mu + (lf + u) / two;
                let phase = T::two_pi()
                    * (bi * u + ci - bj * (u - lf) - cj)
                    + T::two_pi() * mu * (rho_i * e - rho_j * ep)
                    - T::two_pi() * mu * kf * lf;
                let weight = if theta.abs() < T::real(1e-9) {
                    // constant phase: exact log tails of 1/(w_i w_j)
                    Complex::new(log_tail(s_hi, rho_i, rho_j) + log_tail_neg(s_lo, rho_i, rho_j), T::zero())
                } else {
                    // leading boundary term of integration by parts on
                    // both tails
                    let itheta = Complex::new(T::zero(), theta);
                    let g_hi = T::one() / ((s_hi + rho_i) * (s_hi + rho_j));
                    let g_lo = T::one() / ((s_lo + rho_i) * (s_lo + rho_j));
                    (Complex::cis(theta * s_lo) * g_lo - Complex::cis(theta * s_hi) * g_hi)
                        / itheta
                };
                Complex::cis(phase) * weight / (four_pi2 * mu * mu)
            });
            tail += contrib * (se * sep);
        }
    }
    tail
}

/// `int_A^inf dxi / ((xi + ri)(xi + rj))`.
fn log_tail<T: Scalar>(a: T, ri: T, rj: T) -> T {
    if (ri - rj).abs() < T::real(1e-9) {
        T::one() / (a + (ri + rj) / T::real(2.0))
    } else {
        ((a + ri) / (a + rj)).ln() / (ri - rj)
    }
}

/// `int_{-inf}^{A} dxi / ((xi + ri)(xi + rj))` for `A < 0`.
fn log_tail_neg<T: Scalar>(a: T, ri: T, rj: T) -> T {
    let s = -a;
    if (ri - rj).abs() < T::real(1e-9) {
        T::one() / (s - (ri + rj) / T::real(2.0))
    } else {
        ((s - rj) / (s - ri)).ln() / (ri - rj)
    }
}
