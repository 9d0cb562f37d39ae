//! Oblique and canonical duals of the translate system of a single
//! generator.
//!
//! The frame operator `S f = sum_gamma <f, L_gamma phi> L_gamma phi`
//! acts on coefficient vectors over a truncated lattice through the
//! difference-indexed Gram kernel `g(tau) = <phi, L_tau phi>`. The
//! canonical dual `S^{-1} phi` is computed two ways: a fiber mode
//! (multiplier `G_{0,0}(lambda)^{-1}` on `Omega`, valid under condition
//! C, where `S` diagonalizes as multiplication by `G_{0,0}`) and a
//! lattice mode (conjugate-gradient solve of `S c = e_0`); the modes are
//! cross-validated against each other. Dual verification follows the
//! bracket conditions: the mixed brackets must vanish off `(k, l) = (0,
//! 0)` and the diagonal bracket must be `1` on `Omega`.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::boxfn::{left_translate, BoxFunction};
use crate::bracket::{condition_c_check, omega_set, overlapping_kl, BracketProfile};
use crate::error::{Error, Result};
use crate::frame::{
    frame_test, g00_samples, AnalysisParams, AnalysisReport, FiberMultiplierFunction, Verdict,
    Witness,
};
use crate::geometry::Interval;
use crate::grid::LambdaGrid;
use crate::group::{lattice_ball, LatticePoint};
use crate::oracle::{gram_matrix, norm_sq_direct, translate_inner_map, OracleQuad};
use crate::params;
use crate::report::Json;

pub type BoxFn = BoxFunction<f64>;
pub type C64 = Complex64;
/// Per-axis support hulls in `x` and `y`.
type PlaneSupport = (Vec<Interval<f64>>, Vec<Interval<f64>>);
/// Central coefficients grouped by the plane part of a lattice point.
type CentralGroups = HashMap<(Vec<i64>, Vec<i64>), Vec<(i64, C64)>>;

/// The truncated frame operator of `{L_gamma phi}` over `Lambda_N`.
#[derive(Debug, Clone)]
pub struct FrameOperatorHandle {
    pub generator: BoxFn,
    pub lattice_n: i64,
    points: Vec<LatticePoint>,
    index: HashMap<LatticePoint, usize>,
    /// `g(tau) = <phi, L_tau phi>`; absent keys are exactly zero.
    kernel: HashMap<LatticePoint, C64>,
}

impl FrameOperatorHandle {
    pub fn new(f: &BoxFn, lattice_n: i64, quad: &OracleQuad<f64>) -> Self {
        let points = lattice_ball(f.dim(), lattice_n);
        let index = points.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let kernel = translate_inner_map(f, f, quad);
        FrameOperatorHandle { generator: f.clone(), lattice_n, points, index, kernel }
    }

    pub fn dim(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn basis_index(&self, p: &LatticePoint) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Kernel lookup `g(tau)`.
    pub fn kernel_value(&self, tau: &LatticePoint) -> C64 {
        self.kernel.get(tau).copied().unwrap_or(C64::new(0.0, 0.0))
    }

    /// Applies `S` in coordinates: `(S c)_gamma = sum_delta g(delta^{-1}
    /// gamma) c_delta`. The kernel support keeps this sparse.
    pub fn apply(&self, coeffs: &[C64]) -> Result<Vec<C64>> {
        if coeffs.len() != self.points.len() {
            return Err(Error::DimensionMismatch {
                expected: self.points.len(),
                got: coeffs.len(),
            });
        }
        let mut out = vec![C64::new(0.0, 0.0); coeffs.len()];
        for (di, delta) in self.points.iter().enumerate() {
            let c = coeffs[di];
            if c == C64::new(0.0, 0.0) {
                continue;
            }
            for (tau, g) in &self.kernel {
                let gamma = delta.compose(tau);
                if let Some(gi) = self.index.get(&gamma) {
                    out[*gi] += g * c;
                }
            }
        }
        Ok(out)
    }
}

/// `S f` in coordinates over the handle's truncated lattice.
pub fn frame_operator_apply(h: &FrameOperatorHandle, coeffs: &[C64]) -> Result<Vec<C64>> {
    h.apply(coeffs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    UserSupplied,
    Canonical,
}

/// A candidate dual generator for `{L_gamma phi}`.
#[derive(Debug, Clone)]
pub enum DualCandidate {
    /// A compactly supported generator given directly.
    Box { function: BoxFn, provenance: Provenance },
    /// Fiber multiplier applied to a base generator (not box-representable).
    Multiplier { function: FiberMultiplierFunction, provenance: Provenance },
    /// Finite expansion `sum_delta d_delta L_delta base`.
    Expansion { base: BoxFn, coeffs: Vec<(LatticePoint, C64)>, provenance: Provenance },
}

impl DualCandidate {
    pub fn provenance(&self) -> Provenance {
        match self {
            DualCandidate::Box { provenance, .. }
            | DualCandidate::Multiplier { provenance, .. }
            | DualCandidate::Expansion { provenance, .. } => *provenance,
        }
    }

    /// Scales the dual by a complex factor.
    pub fn scaled(&self, s: C64) -> DualCandidate {
        match self {
            DualCandidate::Box { function, provenance } => DualCandidate::Box {
                function: function.scaled(s),
                provenance: *provenance,
            },
            DualCandidate::Multiplier { function, provenance } => {
                let mut m = function.clone();
                for v in &mut m.multiplier {
                    *v *= s;
                }
                DualCandidate::Multiplier { function: m, provenance: *provenance }
            }
            DualCandidate::Expansion { base, coeffs, provenance } => DualCandidate::Expansion {
                base: base.clone(),
                coeffs: coeffs.iter().map(|(p, c)| (p.clone(), c * s)).collect(),
                provenance: *provenance,
            },
        }
    }

    /// The dual as a box function, where representable.
    pub fn materialize(&self) -> Option<BoxFn> {
        match self {
            DualCandidate::Box { function, .. } => Some(function.clone()),
            DualCandidate::Multiplier { .. } => None,
            DualCandidate::Expansion { base, coeffs, .. } => {
                let cap = coeffs.iter().map(|(_, c)| c.norm()).fold(0.0f64, f64::max);
                let mut acc = BoxFn::zero(base.dim());
                for (p, c) in coeffs {
                    if c.norm() > 1e-13 * cap.max(1.0) {
                        acc = acc.sum(&left_translate(p, base).scaled(*c));
                    }
                }
                Some(acc)
            }
        }
    }

    /// Hulls of the `(x, y)` support (used for overlap enumeration).
    fn plane_support(&self) -> Option<PlaneSupport> {
        let f = match self {
            DualCandidate::Box { function, .. } => function.clone(),
            DualCandidate::Multiplier { function, .. } => function.base.clone(),
            DualCandidate::Expansion { .. } => self.materialize()?,
        };
        Some((f.x_support()?, f.y_support()?))
    }

    /// Samples of `[phi, L_{(2k,l,0)} dual](lambda)` on the grid.
    ///
    /// Multiplier duals contribute `conj(m(lambda))` times the base
    /// bracket; expansions split into per-translate brackets whose
    /// central parts pull out `e^{-2 pi i m lambda}`.
    pub fn mixed_bracket_samples(
        &self,
        phi: &BoxFn,
        k: &[i64],
        l: &[i64],
        grid: &LambdaGrid<f64>,
        rmax: usize,
    ) -> Result<Vec<C64>> {
        let p0 = LatticePoint { k: k.to_vec(), l: l.to_vec(), m: 0 };
        match self {
            DualCandidate::Box { function, .. } => {
                let profile = BracketProfile::new(phi, &left_translate(&p0, function));
                Ok(grid.points().iter().map(|&la| profile.sum_over_r(la, rmax)).collect())
            }
            DualCandidate::Multiplier { function, .. } => {
                if function.omega.grid != *grid {
                    return Err(Error::InvalidParameter {
                        name: "grid",
                        reason: "multiplier dual was sampled on a different grid".into(),
                    });
                }
                let profile = BracketProfile::new(phi, &left_translate(&p0, &function.base));
                Ok(grid
                    .points()
                    .iter()
                    .zip(&function.multiplier)
                    .map(|(&la, m)| m.conj() * profile.sum_over_r(la, rmax))
                    .collect())
            }
            DualCandidate::Expansion { base, coeffs, .. } => {
                // group the composed translates by their plane part,
                // skipping solver-noise coefficients
                let cap = coeffs.iter().map(|(_, c)| c.norm()).fold(0.0f64, f64::max);
                let mut groups: CentralGroups = HashMap::new();
                for (delta, d) in coeffs {
                    if d.norm() <= 1e-12 * cap {
                        continue;
                    }
                    let q = p0.compose(delta);
                    groups.entry((q.k.clone(), q.l.clone())).or_default().push((q.m, *d));
                }
                let mut out = vec![C64::new(0.0, 0.0); grid.len()];
                for ((gk, gl), ms) in groups {
                    let q0 = LatticePoint { k: gk, l: gl, m: 0 };
                    let profile = BracketProfile::new(phi, &left_translate(&q0, base));
                    if profile.is_empty() {
                        continue;
                    }
                    for (idx, &la) in grid.points().iter().enumerate() {
                        let g = profile.sum_over_r(la, rmax);
                        let mut factor = C64::new(0.0, 0.0);
                        for (m, d) in &ms {
                            factor += d.conj()
                                * C64::cis(-2.0 * std::f64::consts::PI * *m as f64 * la);
                        }
                        out[idx] += factor * g;
                    }
                }
                Ok(out)
            }
        }
    }
}

/// Outcome of the vanishing-mixed-bracket condition: the off-origin
/// brackets `[phi, L_{(2k,l,0)} dual](lambda)` sampled over the grid.
#[derive(Debug, Clone)]
pub struct MixedBracketReport {
    pub pass: bool,
    pub max_abs: f64,
    pub worst: Option<(Vec<i64>, Vec<i64>, f64)>,
    pub pairs_checked: usize,
    pub tol: f64,
}

/// Checks `sum_r <phi^(mu), (L_{(2k,l,0)} dual)^(mu)> |mu|^n = 0` for all
/// `(k, l) != (0, 0)` over the grid.
pub fn mixed_bracket_condition(
    phi: &BoxFn,
    dual: &DualCandidate,
    p: &AnalysisParams,
) -> Result<MixedBracketReport> {
    let Some((dx, dy)) = dual.plane_support() else {
        return Ok(MixedBracketReport {
            pass: true,
            max_abs: 0.0,
            worst: None,
            pairs_checked: 0,
            tol: p.tol_fourier,
        });
    };
    // overlap enumeration against the dual's support hull
    let proxy = BoxFn::new(
        phi.dim(),
        vec![crate::boxfn::ShearedBoxTerm::plain(
            C64::new(1.0, 0.0),
            dx,
            dy,
            Interval::new(0.0, 1.0),
        )],
    );
    let mut max_abs = 0.0f64;
    let mut worst = None;
    let mut pairs = 0usize;
    for (k, l) in overlapping_kl(phi, &proxy) {
        if k.iter().all(|&c| c == 0) && l.iter().all(|&c| c == 0) {
            continue;
        }
        pairs += 1;
        let samples = dual.mixed_bracket_samples(phi, &k, &l, &p.grid, p.rmax)?;
        for (&lambda, v) in p.grid.points().iter().zip(&samples) {
            if v.norm() > max_abs {
                max_abs = v.norm();
                worst = Some((k.clone(), l.clone(), lambda));
            }
        }
    }
    Ok(MixedBracketReport { pass: max_abs <= p.tol_fourier, max_abs, worst, pairs_checked: pairs, tol: p.tol_fourier })
}

/// Oblique-dual verification: the mixed brackets vanish off the origin,
/// the diagonal bracket is `1` on `Omega`, both systems are Bessel, and
/// an empirical reproduction run backs the verdict. A pass implies (as a
/// recorded consequence) that `{L_gamma phi}` is a frame for `V(phi)`.
pub fn oblique_dual_check(
    phi: &BoxFn,
    dual: &DualCandidate,
    p: &AnalysisParams,
) -> Result<AnalysisReport> {
    let mut report = AnalysisReport::new("oblique-dual", p);

    // Bessel hypothesis: finite sup of G00 for both sides
    let sup_phi = g00_samples(phi, &p.grid, p.rmax).into_iter().fold(0.0f64, f64::max);
    report.details.insert("sup_g00_generator".into(), Json::Num(sup_phi));
    if let Some(sup_dual) = dual_sup_g00(dual, p)? {
        report.details.insert("sup_g00_dual".into(), Json::Num(sup_dual));
    }

    let mixed = mixed_bracket_condition(phi, dual, p)?;
    report.details.insert("mixed_bracket_max".into(), Json::Num(mixed.max_abs));
    if !mixed.pass {
        if let Some((k, l, lambda)) = &mixed.worst {
            report.witnesses.push(Witness {
                kind: "mixed-bracket-nonzero".into(),
                generator: None,
                lambda: Some(*lambda),
                gamma: Some(LatticePoint { k: k.clone(), l: l.clone(), m: 0 }),
                value: C64::new(mixed.max_abs, 0.0),
            });
        }
    }

    // diagonal bracket = 1 a.e. on Omega = { G00(phi) != 0 }
    let omega = omega_set(phi, &p.grid, p.rmax, p.omega_eps);
    let diag = dual.mixed_bracket_samples(phi, &vec![0; phi.dim()], &vec![0; phi.dim()], &p.grid, p.rmax)?;
    let mut diag_dev = 0.0f64;
    let mut diag_witness = None;
    for ((idx, v), &member) in diag.iter().enumerate().zip(&omega.member) {
        if !member {
            continue;
        }
        let dev = (v - C64::new(1.0, 0.0)).norm();
        if dev > diag_dev {
            diag_dev = dev;
            diag_witness = Some((omega.grid.points()[idx], *v));
        }
    }
    report.details.insert("diagonal_bracket_deviation".into(), Json::Num(diag_dev));
    let diag_ok = diag_dev <= p.tol_fourier;
    if !diag_ok {
        if let Some((lambda, v)) = diag_witness {
            report.witnesses.push(Witness {
                kind: "diagonal-bracket-not-one".into(),
                generator: None,
                lambda: Some(lambda),
                gamma: None,
                value: v,
            });
        }
    }
    report.fourier_verdict = if mixed.pass && diag_ok { Verdict::Pass } else { Verdict::Fail };

    // empirical reproduction of the generator itself
    let schedule: Vec<i64> = vec![p.lattice_n, p.lattice_n + 2];
    let rep = reproduction_check(phi, dual, phi, &schedule, p)?;
    let final_residual = rep.residuals.last().map(|r| r.1).unwrap_or(f64::INFINITY);
    report.details.insert("reproduction_residual".into(), Json::Num(final_residual));
    report.oracle_verdict = if final_residual <= p.tol_fourier {
        Verdict::Pass
    } else {
        report.witnesses.push(Witness {
            kind: "reproduction-residual".into(),
            generator: None,
            lambda: None,
            gamma: None,
            value: C64::new(final_residual, 0.0),
        });
        Verdict::Fail
    };
    if report.fourier_verdict == Verdict::Pass && report.oracle_verdict == Verdict::Pass {
        report.details.insert(
            "consequence".into(),
            Json::of_str("oblique dual conditions hold, so the translates of the generator form a frame for their closed span"),
        );
    }
    Ok(report.finish())
}

fn dual_sup_g00(dual: &DualCandidate, p: &AnalysisParams) -> Result<Option<f64>> {
    Ok(match dual {
        DualCandidate::Box { function, .. } => {
            Some(g00_samples(function, &p.grid, p.rmax).into_iter().fold(0.0f64, f64::max))
        }
        DualCandidate::Multiplier { function, .. } => {
            Some(function.g00().into_iter().fold(0.0f64, f64::max))
        }
        DualCandidate::Expansion { .. } => dual
            .materialize()
            .map(|f| g00_samples(&f, &p.grid, p.rmax).into_iter().fold(0.0f64, f64::max)),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BiorthOutcome {
    Pass,
    Fail,
    /// The dual is not compactly supported (fiber-multiplier type).
    Inapplicable,
}

/// Biorthogonality `<phi, L_gamma dual> = delta_{gamma, 0}` over the
/// truncated lattice.
#[derive(Debug, Clone)]
pub struct BiorthReport {
    pub outcome: BiorthOutcome,
    pub max_dev: f64,
    /// Worst deviation overall.
    pub witness: Option<(LatticePoint, C64)>,
    /// Worst nonzero pairing away from the origin (a normalization defect
    /// at the origin can dominate `witness` and hide it).
    pub off_origin_witness: Option<(LatticePoint, C64)>,
    pub condition_c_generator: bool,
    pub condition_c_dual: Option<bool>,
}

/// Oracle biorthogonality check for compactly supported pairs; a
/// fiber-multiplier dual is reported as inapplicable rather than failed.
pub fn biorthogonality_check(
    phi: &BoxFn,
    dual: &DualCandidate,
    lattice_n: i64,
    p: &AnalysisParams,
) -> Result<BiorthReport> {
    let cc_phi = condition_c_check(phi, &p.grid, p.rmax, p.tol_fourier).pass;
    let Some(dual_box) = dual.materialize() else {
        return Ok(BiorthReport {
            outcome: BiorthOutcome::Inapplicable,
            max_dev: 0.0,
            witness: None,
            off_origin_witness: None,
            condition_c_generator: cc_phi,
            condition_c_dual: None,
        });
    };
    let cc_dual = condition_c_check(&dual_box, &p.grid, p.rmax, p.tol_fourier).pass;
    let map = translate_inner_map(phi, &dual_box, &p.quad);
    let mut max_dev = 0.0f64;
    let mut witness = None;
    let mut off_dev = 0.0f64;
    let mut off_origin_witness = None;
    for gamma in lattice_ball(phi.dim(), lattice_n) {
        let v = map.get(&gamma).copied().unwrap_or(C64::new(0.0, 0.0));
        let target = if gamma.is_identity() { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
        let dev = (v - target).norm();
        if dev > max_dev {
            max_dev = dev;
            witness = Some((gamma.clone(), v));
        }
        if !gamma.is_identity() && dev > off_dev {
            off_dev = dev;
            off_origin_witness = Some((gamma, v));
        }
    }
    let outcome = if max_dev <= p.tol_oracle { BiorthOutcome::Pass } else { BiorthOutcome::Fail };
    Ok(BiorthReport {
        outcome,
        max_dev,
        witness,
        off_origin_witness,
        condition_c_generator: cc_phi,
        condition_c_dual: Some(cc_dual),
    })
}

/// Conjugate-gradient solve of the Hermitian positive-semidefinite system
/// `S x = b` in coordinates.
fn cg_solve(
    h: &FrameOperatorHandle,
    b: &[C64],
    tol: f64,
    max_iter: usize,
) -> Result<(Vec<C64>, usize, f64)> {
    let dot = |u: &[C64], v: &[C64]| -> C64 {
        u.iter().zip(v).map(|(a, c)| a.conj() * c).sum()
    };
    let n = b.len();
    let mut x = vec![C64::new(0.0, 0.0); n];
    let mut r = b.to_vec();
    let mut p = r.clone();
    let b_norm = dot(b, b).re.sqrt().max(f64::MIN_POSITIVE);
    let mut rs = dot(&r, &r).re;
    let mut iterations = 0;
    while rs.sqrt() / b_norm > tol && iterations < max_iter {
        let ap = h.apply(&p)?;
        let pap = dot(&p, &ap).re;
        if pap <= 0.0 {
            break;
        }
        let alpha = rs / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rs_new = dot(&r, &r).re;
        let beta = rs_new / rs;
        for i in 0..n {
            p[i] = r[i] + beta * p[i];
        }
        rs = rs_new;
        iterations += 1;
    }
    Ok((x, iterations, rs.sqrt() / b_norm))
}

/// Both modes of the canonical dual `S^{-1} phi`, with their agreement.
#[derive(Debug, Clone)]
pub struct CanonicalDual {
    /// Fiber mode: multiplier `G_{0,0}^{-1}` on `Omega` (requires
    /// condition C).
    pub fiber: Option<FiberMultiplierFunction>,
    /// Lattice mode: CG solve of `S c = e_0` over `Lambda_N`.
    pub lattice: DualCandidate,
    /// `max | [phi, lattice dual](lambda) - 1 |` over the grid points in
    /// `Omega` (the fiber-mode bracket is `1` there by construction).
    pub mode_agreement: Option<f64>,
    pub cg_iterations: usize,
    pub cg_residual: f64,
}

impl CanonicalDual {
    /// Fiber mode when available, lattice mode otherwise.
    pub fn preferred(&self) -> DualCandidate {
        match &self.fiber {
            Some(m) => DualCandidate::Multiplier { function: m.clone(), provenance: Provenance::Canonical },
            None => self.lattice.clone(),
        }
    }
}

/// Canonical dual `S^{-1} phi`. Refuses when the translate system is not
/// a frame for its span (the lower fiber bound collapses).
pub fn canonical_dual(
    phi: &BoxFn,
    p: &AnalysisParams,
    dual_lattice_n: i64,
) -> Result<CanonicalDual> {
    let frame = frame_test(std::slice::from_ref(phi), p)?;
    let (a_est, _) = frame.bounds.unwrap_or((0.0, 0.0));
    if a_est < p.frame_inf_tol {
        let lambda = frame
            .witnesses
            .iter()
            .find(|w| w.kind == "not-a-frame-inf-g00")
            .and_then(|w| w.lambda)
            .unwrap_or(f64::NAN);
        return Err(Error::NotAFrame { inf_g: a_est, lambda });
    }

    // fiber mode under condition C: S acts on fibers as multiplication
    // by G00, so S^{-1} phi is the multiplier 1/G00 on Omega
    let cc = condition_c_check(phi, &p.grid, p.rmax, p.tol_fourier);
    let fiber = if cc.pass {
        let omega = omega_set(phi, &p.grid, p.rmax, p.omega_eps);
        if omega.is_empty() {
            return Err(Error::EmptyOmega);
        }
        let multiplier = omega
            .g00
            .iter()
            .zip(&omega.member)
            .map(|(&g, &m)| if m { C64::new(1.0 / g, 0.0) } else { C64::new(0.0, 0.0) })
            .collect();
        Some(FiberMultiplierFunction { base: phi.clone(), omega, multiplier })
    } else {
        None
    };

    // lattice mode: CG on the truncated frame operator
    let handle = FrameOperatorHandle::new(phi, dual_lattice_n, &p.quad);
    let mut e0 = vec![C64::new(0.0, 0.0); handle.dim()];
    let origin = handle
        .basis_index(&LatticePoint::identity(phi.dim()))
        .expect("lattice ball contains the identity");
    e0[origin] = C64::new(1.0, 0.0);
    let (coeffs, cg_iterations, cg_residual) =
        cg_solve(&handle, &e0, params::CG_TOL, handle.dim())?;
    let lattice = DualCandidate::Expansion {
        base: phi.clone(),
        coeffs: handle.points().iter().cloned().zip(coeffs).collect(),
        provenance: Provenance::Canonical,
    };

    // cross-validation: on Omega the fiber-mode bracket is exactly 1
    let mode_agreement = match &fiber {
        Some(m) => {
            let diag = lattice.mixed_bracket_samples(
                phi,
                &vec![0; phi.dim()],
                &vec![0; phi.dim()],
                &p.grid,
                p.rmax,
            )?;
            let mut dev = 0.0f64;
            for (v, &member) in diag.iter().zip(&m.omega.member) {
                if member {
                    dev = dev.max((v - C64::new(1.0, 0.0)).norm());
                }
            }
            Some(dev)
        }
        None => None,
    };

    Ok(CanonicalDual { fiber, lattice, mode_agreement, cg_iterations, cg_residual })
}

/// Residual trace of the truncated reproduction formula.
#[derive(Debug, Clone)]
pub struct ReproductionReport {
    /// `(N, |f - sum_{Lambda_N} <f, L_gamma dual> L_gamma phi| / |f|)`.
    pub residuals: Vec<(i64, f64)>,
    pub monotone: bool,
}

/// Reproduction coefficients `<testf, L_gamma dual>` for every lattice
/// point where they do not vanish identically, `|gamma| <= n_max`.
fn reproduction_coefficients(
    testf: &BoxFn,
    dual: &DualCandidate,
    n_max: i64,
    p: &AnalysisParams,
) -> Result<HashMap<LatticePoint, C64>> {
    let mut out = HashMap::new();
    match dual {
        DualCandidate::Box { function, .. } => {
            for (gamma, v) in translate_inner_map(testf, function, &p.quad) {
                if gamma.inf_norm() <= n_max {
                    out.insert(gamma, v);
                }
            }
        }
        DualCandidate::Expansion { base, coeffs, .. } => {
            // the map over composed points reduces everything to
            // <f, L_{gamma delta} b>; solver-noise coefficients skipped
            let map = translate_inner_map(testf, base, &p.quad);
            let cap = coeffs.iter().map(|(_, c)| c.norm()).fold(0.0f64, f64::max);
            let active: Vec<&(LatticePoint, C64)> =
                coeffs.iter().filter(|(_, d)| d.norm() > 1e-12 * cap).collect();
            for gamma in lattice_ball(testf.dim(), n_max) {
                let mut acc = C64::new(0.0, 0.0);
                for (delta, d) in &active {
                    if let Some(v) = map.get(&gamma.compose(delta)) {
                        acc += d.conj() * v;
                    }
                }
                if acc.norm() > 0.0 {
                    out.insert(gamma, acc);
                }
            }
        }
        DualCandidate::Multiplier { function, .. } => {
            // <f, L_gamma dual> = int_0^1 e^{-2 pi i m lambda}
            //   conj(m(lambda)) [f, L_{(2k,l,0)} base](lambda) dlambda
            if function.omega.grid != p.grid {
                return Err(Error::InvalidParameter {
                    name: "grid",
                    reason: "multiplier dual was sampled on a different grid".into(),
                });
            }
            let base = &function.base;
            let h = 1.0 / p.grid.len() as f64;
            for (k, l) in overlapping_kl(testf, base) {
                if k.iter().any(|&c| c.abs() > n_max) || l.iter().any(|&c| c.abs() > n_max) {
                    continue;
                }
                let q0 = LatticePoint { k: k.clone(), l: l.clone(), m: 0 };
                let profile = BracketProfile::new(testf, &left_translate(&q0, base));
                let samples: Vec<C64> = p
                    .grid
                    .points()
                    .iter()
                    .zip(&function.multiplier)
                    .map(|(&la, m)| m.conj() * profile.sum_over_r(la, p.rmax))
                    .collect();
                for m in -n_max..=n_max {
                    let mut acc = C64::new(0.0, 0.0);
                    for (&la, s) in p.grid.points().iter().zip(&samples) {
                        acc += s * C64::cis(2.0 * std::f64::consts::PI * m as f64 * la) * h;
                    }
                    if acc.norm() > 1e-15 {
                        out.insert(LatticePoint { k: k.clone(), l: l.clone(), m }, acc);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Truncated reproduction `f ~ sum_{Lambda_N} <f, L_gamma dual> L_gamma
/// phi`: relative residuals along the lattice schedule. The residual norm
/// is evaluated in closed coefficient algebra over oracle inner products.
pub fn reproduction_check(
    phi: &BoxFn,
    dual: &DualCandidate,
    testf: &BoxFn,
    schedule: &[i64],
    p: &AnalysisParams,
) -> Result<ReproductionReport> {
    if schedule.is_empty() {
        return Err(Error::InvalidParameter {
            name: "schedule",
            reason: "at least one lattice radius required".into(),
        });
    }
    let n_max = *schedule.iter().max().unwrap();
    let coeffs = reproduction_coefficients(testf, dual, n_max, p)?;
    let f_norm_sq = norm_sq_direct(testf, &p.quad);
    let cross = translate_inner_map(testf, phi, &p.quad);
    let kernel = translate_inner_map(phi, phi, &p.quad);

    let mut residuals = Vec::new();
    for &n in schedule {
        let active: Vec<(&LatticePoint, &C64)> =
            coeffs.iter().filter(|(g, _)| g.inf_norm() <= n).collect();
        // |f - s|^2 = |f|^2 - 2 Re <f, s> + |s|^2
        let mut fs = C64::new(0.0, 0.0);
        for (gamma, c) in &active {
            if let Some(v) = cross.get(*gamma) {
                fs += c.conj() * v;
            }
        }
        let mut ss = 0.0f64;
        for (ga, ca) in &active {
            for (gb, cb) in &active {
                let tau = ga.difference(gb);
                if let Some(v) = kernel.get(&tau) {
                    ss += (**ca * cb.conj() * v.conj()).re;
                }
            }
        }
        let res_sq = (f_norm_sq - 2.0 * fs.re + ss).max(0.0);
        residuals.push((n, res_sq.sqrt() / f_norm_sq.sqrt()));
    }
    let monotone = residuals.windows(2).all(|w| w[1].1 <= w[0].1 + 1e-12);
    Ok(ReproductionReport { residuals, monotone })
}

/// Spectral trend of the translate Gram across a lattice schedule:
/// bounded top (Bessel) and the behavior of the smallest nonzero
/// eigenvalue (non-redundancy; a frame sequence of translates cannot be
/// overcomplete, so the lower spectrum either stabilizes or the system
/// fails to be a frame sequence).
#[derive(Debug, Clone)]
pub struct OvercompletenessReport {
    /// `(N, max eigenvalue, min nonzero eigenvalue)`.
    pub per_n: Vec<(i64, f64, f64)>,
    pub bessel_bounded: bool,
    pub lower_stable: bool,
}

pub fn overcompleteness_test(
    phi: &BoxFn,
    schedule: &[i64],
    p: &AnalysisParams,
) -> Result<OvercompletenessReport> {
    if schedule.is_empty() {
        return Err(Error::InvalidParameter {
            name: "schedule",
            reason: "at least one lattice radius required".into(),
        });
    }
    let mut per_n = Vec::new();
    for &n in schedule {
        let gram = gram_matrix(std::slice::from_ref(phi), n, &p.quad, &p.gram)?;
        let eigs = crate::frame::gram_eigenvalues(&gram);
        let min_nz = crate::frame::min_nonzero_eigenvalue(&eigs, 1e-10).unwrap_or(0.0);
        per_n.push((n, *eigs.last().unwrap(), min_nz));
    }
    let first_max = per_n.first().unwrap().1;
    let last_max = per_n.last().unwrap().1;
    let bessel_bounded = last_max <= first_max * 1.2 + p.tol_oracle;
    let first_min = per_n.first().unwrap().2;
    let last_min = per_n.last().unwrap().2;
    let lower_stable =
        last_min >= p.frame_inf_tol && (first_min - last_min) / first_min.max(1e-300) <= 0.4;
    Ok(OvercompletenessReport { per_n, bessel_bounded, lower_stable })
}
