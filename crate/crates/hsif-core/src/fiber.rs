//! Group-Fourier fibers, twisted translations and Hilbert-Schmidt
//! pairings.
//!
//! The `t`-fiber of a box generator, `f^lambda(z) = int f(z,t) e^{2 pi i
//! lambda t} dt`, is a finite sum of [`PhaseBoxTerm`]s: indicator boxes
//! carrying a linear phase. That class is closed under lambda-twisted
//! translation, and all `L^2(C^n)` pairings reduce to products of
//! one-dimensional oscillatory integrals over intervals, so the fast path
//! for Hilbert-Schmidt inner products
//! `<W(f), W(g)>_{B2} = |lambda|^{-n} <f, g>_{L^2(C^n)}`
//! is closed-form. The direct kernel quadrature [`fiber_inner_kernel`]
//! validates that identity numerically.

use num_complex::Complex;

use crate::boxfn::BoxFunction;
use crate::error::{Error, Result};
use crate::geometry::{AffineForm, Interval};
use crate::scalar::Scalar;

/// `sin(pi x) / (pi x)` with the removable singularity filled in.
pub fn sinc<T: Scalar>(x: T) -> T {
    if x == T::zero() {
        T::one()
    } else {
        let px = T::PI() * x;
        px.sin() / px
    }
}

/// `int_I e^{2 pi i w u} du` in closed form.
pub fn osc_integral<T: Scalar>(w: T, iv: &Interval<T>) -> Complex<T> {
    let len = iv.len();
    let phase = T::PI() * w * (iv.lo + iv.hi);
    Complex::cis(phase) * (len * sinc(w * len))
}

/// One phase-carrying indicator box on `C^n`:
/// `coeff * e^{2 pi i (a.x + b.y + c)} * 1{x in X, y in Y}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseBoxTerm<T> {
    pub coeff: Complex<T>,
    pub xbox: Vec<Interval<T>>,
    pub ybox: Vec<Interval<T>>,
    /// Phase in cycles: the factor is `e^{2 pi i phase(x, y)}`.
    pub phase: AffineForm<T>,
}

impl<T: Scalar> PhaseBoxTerm<T> {
    pub fn dim(&self) -> usize {
        self.xbox.len()
    }

    pub fn eval(&self, x: &[T], y: &[T]) -> Complex<T> {
        let inside = self.xbox.iter().zip(x).all(|(i, &u)| i.contains(u))
            && self.ybox.iter().zip(y).all(|(i, &u)| i.contains(u));
        if inside {
            self.coeff * Complex::cis(T::two_pi() * self.phase.eval(x, y))
        } else {
            Complex::new(T::zero(), T::zero())
        }
    }
}

/// A fiber `f^lambda` on `C^n`: finite sum of phase boxes.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneFunction<T> {
    pub terms: Vec<PhaseBoxTerm<T>>,
    /// The fiber parameter this function was built at (kept for audit).
    pub lambda: T,
    pub dim: usize,
}

impl<T: Scalar> PlaneFunction<T> {
    pub fn zero(dim: usize, lambda: T) -> Self {
        PlaneFunction { terms: Vec::new(), lambda, dim }
    }

    pub fn eval(&self, x: &[T], y: &[T]) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for term in &self.terms {
            acc += term.eval(x, y);
        }
        acc
    }
}

/// Partial Fourier transform of `f` in the central variable:
/// each sheared box contributes `coeff * E(lambda; tbox)` times the phase
/// `e^{2 pi i lambda toffset(x, y)}`, with
/// `E(lambda; [t0, t1]) = (e^{2 pi i lambda t1} - e^{2 pi i lambda t0}) / (2 pi i lambda)`
/// and the `lambda -> 0` limit `t1 - t0`.
pub fn t_fiber<T: Scalar>(f: &BoxFunction<T>, lambda: T) -> PlaneFunction<T> {
    let terms = f
        .terms()
        .iter()
        .map(|term| PhaseBoxTerm {
            coeff: term.coeff * osc_integral(lambda, &term.tbox),
            xbox: term.xbox.clone(),
            ybox: term.ybox.clone(),
            phase: term.toffset.scaled(lambda),
        })
        .collect();
    PlaneFunction { terms, lambda, dim: f.dim() }
}

/// Lambda-twisted translation
/// `(T^t_{(k,l)})^lambda g(x, y) = e^{pi i lambda (x.l - y.k)} g(x - k, y - l)`.
///
/// Exact on phase boxes: boxes shift by `(k, l)` and the phase gains
/// `lambda (x.l - y.k) / 2 - a.k - b.l` (in cycles).
pub fn twisted_translate<T: Scalar>(
    g: &PlaneFunction<T>,
    k: &[i64],
    l: &[i64],
    lambda: T,
) -> PlaneFunction<T> {
    assert_eq!(k.len(), g.dim, "translation dimension differs from fiber");
    let half = T::real(0.5);
    let kf: Vec<T> = k.iter().map(|&c| T::real(c as f64)).collect();
    let lf: Vec<T> = l.iter().map(|&c| T::real(c as f64)).collect();
    let terms = g
        .terms
        .iter()
        .map(|term| {
            let mut gamma = term.phase.gamma;
            for i in 0..g.dim {
                gamma -= term.phase.alpha[i] * kf[i] + term.phase.beta[i] * lf[i];
            }
            PhaseBoxTerm {
                coeff: term.coeff,
                xbox: term.xbox.iter().zip(&kf).map(|(iv, c)| iv.shifted(*c)).collect(),
                ybox: term.ybox.iter().zip(&lf).map(|(iv, c)| iv.shifted(*c)).collect(),
                phase: AffineForm {
                    alpha: term
                        .phase
                        .alpha
                        .iter()
                        .zip(&lf)
                        .map(|(a, c)| *a + half * lambda * *c)
                        .collect(),
                    beta: term
                        .phase
                        .beta
                        .iter()
                        .zip(&kf)
                        .map(|(b, c)| *b - half * lambda * *c)
                        .collect(),
                    gamma,
                },
            }
        })
        .collect();
    PlaneFunction { terms, lambda: g.lambda, dim: g.dim }
}

/// `<g, h>` in `L^2(C^n)`, closed form per term pair.
pub fn plane_inner<T: Scalar>(g: &PlaneFunction<T>, h: &PlaneFunction<T>) -> Complex<T> {
    assert_eq!(g.dim, h.dim, "fibers live on different C^n");
    let mut acc = Complex::new(T::zero(), T::zero());
    for t1 in &g.terms {
        'pair: for t2 in &h.terms {
            let mut factor = t1.coeff
                * t2.coeff.conj()
                * Complex::cis(T::two_pi() * (t1.phase.gamma - t2.phase.gamma));
            for ax in 0..g.dim {
                let Some(iv) = t1.xbox[ax].intersect(&t2.xbox[ax]) else { continue 'pair };
                factor *= osc_integral(t1.phase.alpha[ax] - t2.phase.alpha[ax], &iv);
            }
            for ax in 0..g.dim {
                let Some(iv) = t1.ybox[ax].intersect(&t2.ybox[ax]) else { continue 'pair };
                factor *= osc_integral(t1.phase.beta[ax] - t2.phase.beta[ax], &iv);
            }
            acc += factor;
        }
    }
    acc
}

pub fn plane_norm_sq<T: Scalar>(g: &PlaneFunction<T>) -> T {
    plane_inner(g, g).re
}

/// Weyl-transform kernel
/// `K_g(xi, eta) = int g(x, eta - xi) e^{i pi lambda x.(xi + eta)} dx`,
/// zero whenever `eta - xi` leaves the `y`-support.
pub fn weyl_kernel<T: Scalar>(
    g: &PlaneFunction<T>,
    lambda: T,
    xi: &[T],
    eta: &[T],
) -> Result<Complex<T>> {
    if lambda == T::zero() {
        return Err(Error::ZeroFiberParameter);
    }
    let half = T::real(0.5);
    let mut acc = Complex::new(T::zero(), T::zero());
    'terms: for term in &g.terms {
        let mut factor = term.coeff;
        let mut phase = term.phase.gamma;
        for ax in 0..g.dim {
            let u = eta[ax] - xi[ax];
            if !term.ybox[ax].contains(u) {
                continue 'terms;
            }
            phase += term.phase.beta[ax] * u;
            let w = term.phase.alpha[ax] + half * lambda * (xi[ax] + eta[ax]);
            factor *= osc_integral(w, &term.xbox[ax]);
        }
        acc += factor * Complex::cis(T::two_pi() * phase);
    }
    Ok(acc)
}

/// One sampled value of a Weyl-transform kernel; the value vanishes
/// whenever `eta - xi` leaves the `y`-support of the fiber.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSample<T> {
    pub xi: Vec<T>,
    pub eta: Vec<T>,
    pub value: Complex<T>,
}

/// Samples `K_g^lambda` at `(xi, eta)`.
pub fn sample_weyl_kernel<T: Scalar>(
    g: &PlaneFunction<T>,
    lambda: T,
    xi: &[T],
    eta: &[T],
) -> Result<KernelSample<T>> {
    Ok(KernelSample {
        xi: xi.to_vec(),
        eta: eta.to_vec(),
        value: weyl_kernel(g, lambda, xi, eta)?,
    })
}

/// Hilbert-Schmidt pairing of the group-Fourier fibers at `mu`:
/// `<f^(mu), g^(mu)>_{B2} = |mu|^{-n} <f^mu, g^mu>_{L^2(C^n)}`.
pub fn fiber_inner<T: Scalar>(f: &BoxFunction<T>, g: &BoxFunction<T>, mu: T) -> Result<Complex<T>> {
    if mu == T::zero() {
        return Err(Error::ZeroFiberParameter);
    }
    let scale = mu.abs().powi(-(f.dim() as i32));
    Ok(plane_inner(&t_fiber(f, mu), &t_fiber(g, mu)) * scale)
}

/// Quadrature specification for the kernel-path validation.
#[derive(Debug, Clone, Copy)]
pub struct KernelQuad {
    /// xi-domain truncation radius.
    pub radius: f64,
    /// midpoint-rule step for both xi and `u = eta - xi`.
    pub step: f64,
}

impl Default for KernelQuad {
    fn default() -> Self {
        KernelQuad { radius: crate::params::KERNEL_RADIUS, step: crate::params::KERNEL_STEP }
    }
}

/// Result of the kernel-path quadrature: the value and a crude tail
/// estimate extrapolated from the `1/|xi|^2` decay of the integrand.
#[derive(Debug, Clone, Copy)]
pub struct KernelIntegral<T> {
    pub value: Complex<T>,
    pub tail_estimate: T,
}

/// Validation path for [`fiber_inner`]: integrates
/// `int int K_f(xi, eta) conj(K_g(xi, eta)) dxi deta`
/// by midpoint rule, with `eta = xi + u` and `u` restricted to the
/// compact kernel support (split at the support breakpoints).
pub fn fiber_inner_kernel<T: Scalar>(
    f: &BoxFunction<T>,
    g: &BoxFunction<T>,
    mu: T,
    quad: &KernelQuad,
) -> Result<KernelIntegral<T>> {
    if mu == T::zero() {
        return Err(Error::ZeroFiberParameter);
    }
    if !(quad.radius > 0.0) {
        return Err(Error::InvalidParameter {
            name: "radius",
            reason: "kernel quadrature radius must be positive".into(),
        });
    }
    if !(quad.step > 0.0) {
        return Err(Error::InvalidParameter {
            name: "step",
            reason: "kernel quadrature step must be positive".into(),
        });
    }
    let fm = t_fiber(f, mu);
    let gm = t_fiber(g, mu);
    if fm.terms.is_empty() || gm.terms.is_empty() {
        return Ok(KernelIntegral { value: Complex::new(T::zero(), T::zero()), tail_estimate: T::zero() });
    }
    if f.dim() == 1 {
        return Ok(kernel_quadrature_1d(&fm, &gm, mu, quad));
    }
    kernel_quadrature_nd(&fm, &gm, mu, quad)
}

/// u-cells per axis: the support hull split at every box endpoint, so the
/// midpoint rule never straddles an indicator jump.
fn u_cells_axis<T: Scalar>(fm: &PlaneFunction<T>, gm: &PlaneFunction<T>, ax: usize) -> Vec<Interval<T>> {
    let hull = |p: &PlaneFunction<T>| {
        p.terms
            .iter()
            .map(|t| t.ybox[ax])
            .reduce(|a, b| a.hull(&b))
            .expect("nonempty fiber")
    };
    let Some(domain) = hull(fm).intersect(&hull(gm)) else { return Vec::new() };
    let mut cuts: Vec<T> = vec![domain.lo, domain.hi];
    for t in fm.terms.iter().chain(&gm.terms) {
        for v in [t.ybox[ax].lo, t.ybox[ax].hi] {
            if v > domain.lo && v < domain.hi {
                cuts.push(v);
            }
        }
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup_by(|a, b| (*a - *b).abs() <= T::real(1e-13));
    cuts.windows(2).map(|w| Interval::new(w[0], w[1])).collect()
}

/// Specialized `n = 1` path: for each `u` the xi-sweep uses phase
/// recurrences (two complex multiplications per term per step) instead of
/// evaluating the oscillatory closed forms from scratch.
fn kernel_quadrature_1d<T: Scalar>(
    fm: &PlaneFunction<T>,
    gm: &PlaneFunction<T>,
    mu: T,
    quad: &KernelQuad,
) -> KernelIntegral<T> {
    let radius = T::real(quad.radius);
    let nxi = (quad.radius * 2.0 / quad.step).ceil() as usize;
    let hxi = radius * T::real(2.0) / T::real(nxi as f64);

    struct TermSweep<T> {
        amp: Complex<T>,        // coeff * e^{2 pi i (b u + c)} * len
        dlen: T,                // xhi - xlo
        w0: T,                  // frequency at the first xi node
        p: Complex<T>,          // cis(pi w (xlo + xhi))
        q: Complex<T>,          // cis(pi w dlen)
        dp: Complex<T>,         // per-step ratio for p
        dq: Complex<T>,         // per-step ratio for q
    }

    let build = |p: &PlaneFunction<T>, u: T, xi0: T| -> Vec<TermSweep<T>> {
        let half = T::real(0.5);
        p.terms
            .iter()
            .filter(|t| t.ybox[0].contains(u))
            .map(|t| {
                let amp = t.coeff
                    * Complex::cis(T::two_pi() * (t.phase.beta[0] * u + t.phase.gamma))
                    * t.xbox[0].len();
                let smid = t.xbox[0].lo + t.xbox[0].hi;
                let dlen = t.xbox[0].len();
                let w0 = t.phase.alpha[0] + half * mu * (xi0 + xi0 + u);
                TermSweep {
                    amp,
                    dlen,
                    w0,
                    p: Complex::cis(T::PI() * w0 * smid),
                    q: Complex::cis(T::PI() * w0 * dlen),
                    dp: Complex::cis(T::PI() * mu * hxi * smid),
                    dq: Complex::cis(T::PI() * mu * hxi * dlen),
                }
            })
            .collect()
    };

    let eval_sum = |sweeps: &mut [TermSweep<T>], step_idx: usize| -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for s in sweeps.iter_mut() {
            let w = s.w0 + mu * hxi * T::real(step_idx as f64);
            let x = w * s.dlen;
            let snc = if x.abs() < T::real(1e-12) { T::one() } else { s.q.im / (T::PI() * x) };
            acc += s.amp * s.p * snc;
            s.p *= s.dp;
            s.q *= s.dq;
        }
        acc
    };

    let mut value = Complex::new(T::zero(), T::zero());
    let mut edge_lo = T::zero();
    let mut edge_hi = T::zero();
    for cell in u_cells_axis(fm, gm, 0) {
        let nu = (num_traits::cast::<T, f64>(cell.len()).unwrap() / quad.step).ceil().max(1.0)
            as usize;
        let hu = cell.len() / T::real(nu as f64);
        for iu in 0..nu {
            let u = cell.lo + hu * (T::real(iu as f64) + T::real(0.5));
            let xi0 = -radius + hxi * T::real(0.5);
            let mut fs = build(fm, u, xi0);
            let mut gs = build(gm, u, xi0);
            if fs.is_empty() || gs.is_empty() {
                continue;
            }
            let mut acc = Complex::new(T::zero(), T::zero());
            for ix in 0..nxi {
                let kf = eval_sum(&mut fs, ix);
                let kg = eval_sum(&mut gs, ix);
                let prod = kf * kg.conj();
                acc += prod;
                if ix == 0 {
                    edge_lo += prod.norm() * hu;
                }
                if ix == nxi - 1 {
                    edge_hi += prod.norm() * hu;
                }
            }
            value += acc * (hxi * hu);
        }
    }
    KernelIntegral { value, tail_estimate: radius * (edge_lo + edge_hi) }
}

/// Generic-dimension fallback: direct kernel evaluation on the midpoint
/// grid (costly; intended for small radii in higher dimension).
fn kernel_quadrature_nd<T: Scalar>(
    fm: &PlaneFunction<T>,
    gm: &PlaneFunction<T>,
    mu: T,
    quad: &KernelQuad,
) -> Result<KernelIntegral<T>> {
    let dim = fm.dim;
    let radius = T::real(quad.radius);
    let nxi = (quad.radius * 2.0 / quad.step).ceil() as usize;
    let hxi = radius * T::real(2.0) / T::real(nxi as f64);

    let axis_cells: Vec<Vec<Interval<T>>> = (0..dim).map(|ax| u_cells_axis(fm, gm, ax)).collect();
    if axis_cells.iter().any(Vec::is_empty) {
        return Ok(KernelIntegral { value: Complex::new(T::zero(), T::zero()), tail_estimate: T::zero() });
    }
    // midpoint grids per axis for u
    let mut u_points: Vec<Vec<(T, T)>> = Vec::with_capacity(dim);
    for cells in &axis_cells {
        let mut pts = Vec::new();
        for cell in cells {
            let n = (num_traits::cast::<T, f64>(cell.len()).unwrap() / quad.step).ceil().max(1.0)
                as usize;
            let h = cell.len() / T::real(n as f64);
            for i in 0..n {
                pts.push((cell.lo + h * (T::real(i as f64) + T::real(0.5)), h));
            }
        }
        u_points.push(pts);
    }

    let mut value = Complex::new(T::zero(), T::zero());
    let mut edge = T::zero();
    let mut u_idx = vec![0usize; dim];
    let mut xi_idx = vec![0usize; dim];
    loop {
        let mut u = Vec::with_capacity(dim);
        let mut wu = T::one();
        for (ax, &i) in u_idx.iter().enumerate() {
            let (p, h) = u_points[ax][i];
            u.push(p);
            wu *= h;
        }
        xi_idx.iter_mut().for_each(|i| *i = 0);
        loop {
            let xi: Vec<T> = xi_idx
                .iter()
                .map(|&i| -radius + hxi * (T::real(i as f64) + T::real(0.5)))
                .collect();
            let eta: Vec<T> = xi.iter().zip(&u).map(|(a, b)| *a + *b).collect();
            let kf = weyl_kernel_plane(fm, mu, &xi, &eta);
            let kg = weyl_kernel_plane(gm, mu, &xi, &eta);
            let prod = kf * kg.conj();
            value += prod * wu * hxi.powi(dim as i32);
            if xi_idx.iter().any(|&i| i == 0 || i == nxi - 1) {
                edge = edge.max(prod.norm());
            }
            if !advance(&mut xi_idx, nxi) {
                break;
            }
        }
        if !advance_mixed(&mut u_idx, &u_points) {
            break;
        }
    }
    Ok(KernelIntegral { value, tail_estimate: radius * radius * edge })
}

fn weyl_kernel_plane<T: Scalar>(g: &PlaneFunction<T>, mu: T, xi: &[T], eta: &[T]) -> Complex<T> {
    weyl_kernel(g, mu, xi, eta).expect("mu checked nonzero")
}

fn advance(idx: &mut [usize], n: usize) -> bool {
    for i in idx.iter_mut() {
        *i += 1;
        if *i < n {
            return true;
        }
        *i = 0;
    }
    false
}

fn advance_mixed<T>(idx: &mut [usize], pts: &[Vec<(T, T)>]) -> bool {
    for (i, p) in idx.iter_mut().zip(pts) {
        *i += 1;
        if *i < p.len() {
            return true;
        }
        *i = 0;
    }
    false
}

/// Truncated fiberization `T f(lambda) = { f^(lambda + r) }_{|r| <= rmax}`.
///
/// The entries are the plane fibers `f^{lambda+r}`; the Plancherel weights
/// `|lambda + r|^{n}` cancel against the `B2` scaling, so inner products
/// and norms of fiber vectors are plain sums of plane pairings.
#[derive(Debug, Clone)]
pub struct FiberVector<T> {
    pub lambda: T,
    pub rmax: usize,
    entries: Vec<PlaneFunction<T>>,
}

impl<T: Scalar> FiberVector<T> {
    pub fn entry(&self, r: i64) -> &PlaneFunction<T> {
        &self.entries[(r + self.rmax as i64) as usize]
    }

    pub fn entries(&self) -> &[PlaneFunction<T>] {
        &self.entries
    }
}

/// Builds the truncated fiber vector of `f` at `lambda in (0, 1]`.
pub fn fiber_vector<T: Scalar>(f: &BoxFunction<T>, lambda: T, rmax: usize) -> Result<FiberVector<T>> {
    if !(lambda > T::zero() && lambda <= T::one()) {
        return Err(Error::LambdaOutOfRange {
            lambda: num_traits::cast::<T, f64>(lambda).unwrap_or(f64::NAN),
        });
    }
    let entries = (-(rmax as i64)..=rmax as i64)
        .map(|r| t_fiber(f, lambda + T::real(r as f64)))
        .collect();
    Ok(FiberVector { lambda, rmax, entries })
}

/// `<u, v> = sum_r <f^(mu_r), g^(mu_r)>_{B2} |mu_r|^n` over the truncation.
pub fn fiber_vector_inner<T: Scalar>(u: &FiberVector<T>, v: &FiberVector<T>) -> Result<Complex<T>> {
    if u.lambda != v.lambda {
        return Err(Error::FiberVectorMismatch { reason: "different lambda".into() });
    }
    if u.rmax != v.rmax {
        return Err(Error::FiberVectorMismatch { reason: "different rmax".into() });
    }
    let mut acc = Complex::new(T::zero(), T::zero());
    for (a, b) in u.entries.iter().zip(&v.entries) {
        acc += plane_inner(a, b);
    }
    Ok(acc)
}

pub fn fiber_vector_norm_sq<T: Scalar>(u: &FiberVector<T>) -> T {
    u.entries.iter().map(plane_norm_sq).sum()
}
