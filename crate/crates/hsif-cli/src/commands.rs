//! Command implementations. Each returns the process exit code:
//! `0` pass, `2` fail (with witnesses in the report), `3` inconclusive;
//! configuration and I/O problems surface as `Err` and exit `1`.

use std::path::Path;

use hsif_core::report::Json;
use hsif_core::{
    bracket_table, biorthogonality_check, bessel_test, canonical_dual, fiber_inner,
    fiber_inner_kernel, frame_test, g_fast, g_kernel, gram_matrix, left_translate,
    oblique_dual_check, orthonormality_test, parseval_normalize, parseval_test,
    reproduction_check, riesz_test, t_fiber, twisted_translate, weyl_kernel, AnalysisParams,
    AnalysisReport, BiorthOutcome, BoxFn, BracketProfile, DualCandidate, KernelQuad,
    KernelSumQuad, LatticePoint, Verdict, C64,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::config::SessionConfig;
use crate::emit;
use crate::Format;

fn exit_code(verdicts: &[Verdict]) -> i32 {
    if verdicts.contains(&Verdict::Fail) {
        2
    } else if verdicts.contains(&Verdict::Inconclusive) {
        3
    } else {
        0
    }
}

fn family_from(cfg: &SessionConfig, names: &Option<Vec<String>>) -> Result<(Vec<String>, Vec<BoxFn>), String> {
    let names: Vec<String> = match names {
        Some(list) => list.clone(),
        None => cfg.generators.keys().cloned().collect(),
    };
    let mut fams = Vec::with_capacity(names.len());
    for name in &names {
        fams.push(cfg.build_generator_named(name)?);
    }
    Ok((names, fams))
}

pub fn analyze(
    cfg: &SessionConfig,
    config_text: &str,
    params: &AnalysisParams,
    out: &Path,
) -> Result<i32, String> {
    let opts = cfg.analyze.clone().unwrap_or(crate::config::AnalyzeOptions {
        family: None,
        bessel_bound: None,
    });
    let (names, family) = family_from(cfg, &opts.family)?;

    let mut reports: Vec<(String, AnalysisReport)> = Vec::new();
    reports.push(("orthonormality".into(), orthonormality_test(&family, params).map_err(|e| e.to_string())?));
    if let Some(bound) = opts.bessel_bound {
        reports.push(("bessel".into(), bessel_test(&family, bound, params).map_err(|e| e.to_string())?));
    }
    reports.push(("frame".into(), frame_test(&family, params).map_err(|e| e.to_string())?));
    reports.push(("parseval".into(), parseval_test(&family, params).map_err(|e| e.to_string())?));
    reports.push(("riesz".into(), riesz_test(&family, params).map_err(|e| e.to_string())?));

    let verdicts: Vec<Verdict> = reports.iter().map(|(_, r)| r.verdict).collect();
    let code = exit_code(&verdicts);

    let mut body = Json::obj();
    body.insert(
        "family".into(),
        Json::Arr(names.iter().map(Json::of_str).collect()),
    );
    for (name, report) in &reports {
        body.insert(name.clone(), report.to_json());
    }
    let report = emit::command_report("analyze", Some(config_text), Json::Obj(body));
    let path = emit::write_file(out, "analyze_report.json", &report.to_string_pretty())?;
    for (name, r) in &reports {
        println!("analyze {name}: {}", r.verdict.as_str());
    }
    println!("report: {}", path.display());
    Ok(code)
}

pub fn bracket_cmd(
    cfg: &SessionConfig,
    config_text: &str,
    params: &AnalysisParams,
    out: &Path,
    format: Format,
) -> Result<i32, String> {
    let opts = cfg.bracket.as_ref().ok_or("config has no `bracket` section")?;
    let f = cfg.build_generator_named(&opts.generator)?;
    let table = bracket_table(&f, &opts.generator, &params.grid, params.rmax);

    let data_path = match format {
        Format::Csv => emit::write_file(out, &format!("bracket_{}.csv", opts.generator), &table.to_csv())?,
        Format::Json => emit::write_file(
            out,
            &format!("bracket_{}.json", opts.generator),
            &emit::bracket_table_json(&table).to_string_pretty(),
        )?,
    };
    let mut body = Json::obj();
    body.insert("generator".into(), Json::of_str(&opts.generator));
    body.insert("rows".into(), Json::Int(table.rows.len() as i64));
    body.insert("rmax".into(), Json::Int(table.rmax as i64));
    body.insert("tail_bound".into(), Json::Num(table.tail_bound));
    body.insert("data_file".into(), Json::of_str(data_path.file_name().unwrap().to_string_lossy()));
    let report = emit::command_report("bracket", Some(config_text), Json::Obj(body));
    let path = emit::write_file(out, "bracket_report.json", &report.to_string_pretty())?;
    println!("bracket table: {} ({} rows)", data_path.display(), table.rows.len());
    println!("report: {}", path.display());
    Ok(0)
}

pub fn gram_cmd(
    cfg: &SessionConfig,
    config_text: &str,
    params: &AnalysisParams,
    out: &Path,
) -> Result<i32, String> {
    let names_opt = cfg.gram.as_ref().and_then(|g| g.generators.clone());
    let (names, family) = family_from(cfg, &names_opt)?;
    let gram = gram_matrix(&family, params.lattice_n, &params.quad, &params.gram)
        .map_err(|e| e.to_string())?;
    let csv = emit::gram_csv(&gram);
    let data_path = emit::write_file(out, "gram.csv", &csv)?;

    let mut body = Json::obj();
    body.insert("generators".into(), Json::Arr(names.iter().map(Json::of_str).collect()));
    body.insert("rows".into(), Json::Int(gram.dim as i64));
    body.insert("lattice_n".into(), Json::Int(params.lattice_n));
    body.insert("hermitian_defect".into(), Json::Num(gram.max_abs_hermitian_defect()));
    body.insert("max_deviation_from_identity".into(), Json::Num(gram.max_abs_off_identity()));
    body.insert("data_file".into(), Json::of_str(data_path.file_name().unwrap().to_string_lossy()));
    let report = emit::command_report("gram", Some(config_text), Json::Obj(body));
    let path = emit::write_file(out, "gram_report.json", &report.to_string_pretty())?;
    println!("gram matrix: {} ({} rows)", data_path.display(), gram.dim);
    println!("report: {}", path.display());
    Ok(0)
}

pub fn dual_cmd(
    cfg: &SessionConfig,
    config_text: &str,
    params: &AnalysisParams,
    out: &Path,
) -> Result<i32, String> {
    let opts = cfg.dual.as_ref().ok_or("config has no `dual` section")?;
    let phi = cfg.build_generator_named(&opts.generator)?;
    let schedule = opts.schedule.clone().unwrap_or_else(|| vec![1, 2, 3, 4, 5, 6]);
    let testf = match &opts.test_function {
        Some(name) => cfg.build_generator_named(name)?,
        None => phi.clone(),
    };

    let mut body = Json::obj();
    body.insert("generator".into(), Json::of_str(&opts.generator));
    body.insert("mode".into(), Json::of_str(&opts.dual));

    let (check_dual, biorth_dual) = if opts.dual == "canonical" {
        let n_dual = opts.dual_lattice.unwrap_or(12);
        match canonical_dual(&phi, params, n_dual) {
            Ok(d) => {
                if let Some(m) = &d.fiber {
                    let csv = emit::multiplier_csv(m);
                    let p = emit::write_file(out, &format!("dual_multiplier_{}.csv", opts.generator), &csv)?;
                    body.insert("multiplier_file".into(), Json::of_str(p.file_name().unwrap().to_string_lossy()));
                }
                if let Some(a) = d.mode_agreement {
                    body.insert("mode_agreement".into(), Json::Num(a));
                }
                body.insert("cg_iterations".into(), Json::Int(d.cg_iterations as i64));
                body.insert("cg_residual".into(), Json::Num(d.cg_residual));
                if let DualCandidate::Expansion { coeffs, .. } = &d.lattice {
                    let nonzero: Vec<(LatticePoint, C64)> = coeffs
                        .iter()
                        .filter(|(_, c)| c.norm() > 1e-9)
                        .cloned()
                        .collect();
                    body.insert("lattice_coefficients".into(), emit::lattice_values_json(&nonzero));
                }
                (d.preferred(), Some(d.lattice.clone()))
            }
            Err(e) => {
                // a refusal is an analysis outcome, not a usage error
                body.insert("refusal".into(), Json::of_str(e.to_string()));
                let report = emit::command_report("dual", Some(config_text), Json::Obj(body));
                let path = emit::write_file(out, "dual_report.json", &report.to_string_pretty())?;
                println!("dual: refused ({e})");
                println!("report: {}", path.display());
                return Ok(2);
            }
        }
    } else {
        let g = cfg.build_generator_named(&opts.dual)?;
        let d = DualCandidate::Box { function: g, provenance: hsif_core::dual::Provenance::UserSupplied };
        (d.clone(), Some(d))
    };

    let oblique = oblique_dual_check(&phi, &check_dual, params).map_err(|e| e.to_string())?;
    body.insert("oblique".into(), oblique.to_json());

    if let Some(bd) = &biorth_dual {
        let biorth = biorthogonality_check(&phi, bd, params.lattice_n, params).map_err(|e| e.to_string())?;
        let mut bo = Json::obj();
        bo.insert(
            "outcome".into(),
            Json::of_str(match biorth.outcome {
                BiorthOutcome::Pass => "pass",
                BiorthOutcome::Fail => "fail",
                BiorthOutcome::Inapplicable => "inapplicable",
            }),
        );
        bo.insert("max_deviation".into(), Json::Num(biorth.max_dev));
        body.insert("biorthogonality".into(), Json::Obj(bo));
    }

    let rep = reproduction_check(&phi, biorth_dual.as_ref().unwrap_or(&check_dual), &testf, &schedule, params)
        .map_err(|e| e.to_string())?;
    let mut rj = Json::obj();
    rj.insert(
        "residuals".into(),
        Json::Arr(
            rep.residuals
                .iter()
                .map(|(n, r)| {
                    let mut o = Json::obj();
                    o.insert("lattice_n".into(), Json::Int(*n));
                    o.insert("relative_residual".into(), Json::Num(*r));
                    Json::Obj(o)
                })
                .collect(),
        ),
    );
    rj.insert("monotone".into(), Json::Bool(rep.monotone));
    body.insert("reproduction".into(), Json::Obj(rj));

    let code = exit_code(&[oblique.verdict]);
    let report = emit::command_report("dual", Some(config_text), Json::Obj(body));
    let path = emit::write_file(out, "dual_report.json", &report.to_string_pretty())?;
    println!("dual oblique check: {}", oblique.verdict.as_str());
    println!(
        "reproduction residual at N={}: {:.3e}",
        rep.residuals.last().unwrap().0,
        rep.residuals.last().unwrap().1
    );
    println!("report: {}", path.display());
    Ok(code)
}

pub fn normalize_cmd(
    cfg: &SessionConfig,
    config_text: &str,
    params: &AnalysisParams,
    out: &Path,
) -> Result<i32, String> {
    let opts = cfg.normalize.as_ref().ok_or("config has no `normalize` section")?;
    let phi = cfg.build_generator_named(&opts.generator)?;
    let normalized = parseval_normalize(&phi, params).map_err(|e| e.to_string())?;
    let check = normalized.parseval_report(params);

    let csv = emit::multiplier_csv(&normalized);
    let data_path = emit::write_file(out, &format!("multiplier_{}.csv", opts.generator), &csv)?;
    let mut body = Json::obj();
    body.insert("generator".into(), Json::of_str(&opts.generator));
    body.insert("parseval_check".into(), check.to_json());
    body.insert("omega_points".into(), Json::Int(normalized.omega.count() as i64));
    body.insert("data_file".into(), Json::of_str(data_path.file_name().unwrap().to_string_lossy()));
    let report = emit::command_report("normalize", Some(config_text), Json::Obj(body));
    let path = emit::write_file(out, "normalize_report.json", &report.to_string_pretty())?;
    println!("normalize: {}", check.verdict.as_str());
    println!("multiplier samples: {}", data_path.display());
    println!("report: {}", path.display());
    Ok(exit_code(&[check.verdict]))
}

/// Built-in path-equivalence and property suite; requires no config.
pub fn selftest(out: &Path) -> Result<i32, String> {
    let mut lines: Vec<(String, bool, f64)> = Vec::new();
    let mut rng = StdRng::seed_from_u64(0x74e5_f00d);
    let pi = std::f64::consts::PI;

    let psi = BoxFn::h1_box(C64::new(1.0 / 2.0f64.sqrt(), 0.0), (0.0, 2.0), (0.0, 1.0), (0.0, 1.0));
    let wide_box = BoxFn::h1_box(C64::new(1.0 / 3.0, 0.0), (0.0, 3.0), (0.0, 3.0), (0.0, 1.0));
    let central_box = BoxFn::h1_box(C64::new(1.0, 0.0), (0.0, 2.0), (0.0, 1.0), (0.0, 2.0));

    // twisted-translation properties (adjoint, composition, kernel
    // covariance, lattice fiber identity), sampled pointwise
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let lambda = rng.gen_range(0.15..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let fib = t_fiber(&central_box, lambda);
        let (k1, l1) = (rng.gen_range(-2..3i64), rng.gen_range(-2..3i64));
        let (k2, l2) = (rng.gen_range(-2..3i64), rng.gen_range(-2..3i64));
        let x = rng.gen_range(-3.0..3.0);
        let y = rng.gen_range(-3.0..3.0);

        // property 2 (composition)
        let a = twisted_translate(&twisted_translate(&fib, &[k2], &[l2], lambda), &[k1], &[l1], lambda);
        let b = twisted_translate(&fib, &[k1 + k2], &[l1 + l2], lambda);
        let phase = C64::cis(-pi * lambda * (k1 * l2 - k2 * l1) as f64);
        worst = worst.max((a.eval(&[x], &[y]) - phase * b.eval(&[x], &[y])).norm());

        // property 5 (kernel covariance)
        let tg = twisted_translate(&fib, &[k1], &[l1], lambda);
        let lhs = weyl_kernel(&tg, lambda, &[x], &[y]).map_err(|e| e.to_string())?;
        let cov = C64::cis(pi * lambda * (2.0 * x + l1 as f64) * k1 as f64);
        let rhs = cov * weyl_kernel(&fib, lambda, &[x + l1 as f64], &[y]).map_err(|e| e.to_string())?;
        worst = worst.max((lhs - rhs).norm());

        // property 6 (lattice fiber identity)
        let p = LatticePoint::h1(k1, l1, k2);
        let lt = t_fiber(&left_translate(&p, &central_box), lambda);
        let tw = twisted_translate(&fib, &[2 * k1], &[l1], lambda);
        let ph = C64::cis(2.0 * pi * k2 as f64 * lambda);
        worst = worst.max((lt.eval(&[x], &[y]) - ph * tw.eval(&[x], &[y])).norm());
    }
    lines.push(("twisted-translation properties 2/5/6 (pointwise)".into(), worst < 1e-10, worst));

    // property 1 (adjoint) through the closed-form pairing
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let lambda = rng.gen_range(0.2..1.8);
        let g = t_fiber(&wide_box, lambda);
        let h = t_fiber(&left_translate(&LatticePoint::h1(0, 1, 0), &wide_box), lambda);
        let (k, l) = (rng.gen_range(-2..3i64), rng.gen_range(-2..3i64));
        let lhs = hsif_core::plane_inner(&twisted_translate(&g, &[k], &[l], lambda), &h);
        let rhs = hsif_core::plane_inner(&g, &twisted_translate(&h, &[-k], &[-l], lambda));
        worst = worst.max((lhs - rhs).norm());
    }
    lines.push(("twisted-translation adjoint (property 1)".into(), worst < 1e-10, worst));

    // fast vs kernel path for the Hilbert-Schmidt pairing
    let quad = KernelQuad { radius: 60.0, step: 0.02 };
    let mut worst = 0.0f64;
    for (f, g, mu) in [
        (&psi, &psi, 2.0),
        (&central_box, &central_box, 1.7),
        (&psi, &central_box, 2.4),
    ] {
        let fast = fiber_inner(f, g, mu).map_err(|e| e.to_string())?;
        let kern = fiber_inner_kernel(f, g, mu, &quad).map_err(|e| e.to_string())?;
        worst = worst.max((fast - kern.value).norm());
    }
    lines.push(("fiber pairing: closed form vs kernel quadrature".into(), worst < 1e-3, worst));

    // bracket route vs the kernel-formula sum
    let mut worst = 0.0f64;
    for lambda in [0.295, 0.765] {
        let fast = g_fast(&wide_box, &[0], &[0], lambda, 3).map_err(|e| e.to_string())?;
        let kern = g_kernel(&wide_box, &[0], &[0], lambda, 3, 12, &KernelSumQuad::default())
            .map_err(|e| e.to_string())?;
        worst = worst.max((fast - kern).norm());
    }
    lines.push(("bracket sum vs kernel-formula sum".into(), worst < 1e-3, worst));

    // Plancherel: integral of the bracket recovers the oracle pairing
    let grid = hsif_core::LambdaGrid::<f64>::default();
    let shifted = left_translate(&LatticePoint::h1(0, 0, 1), &central_box);
    let profile = BracketProfile::new(&central_box, &shifted);
    let h = 1.0 / grid.len() as f64;
    let total: C64 = grid.points().iter().map(|&l| profile.sum_over_r(l, 1000) * h).sum();
    let dev = (total - C64::new(2.0, 0.0)).norm();
    lines.push(("bracket Plancherel vs oracle pairing".into(), dev < 1e-3, dev));

    let mut body = Json::obj();
    let mut all_ok = true;
    for (name, ok, value) in &lines {
        all_ok &= ok;
        let mut o = Json::obj();
        o.insert("pass".into(), Json::Bool(*ok));
        o.insert("worst_deviation".into(), Json::Num(*value));
        body.insert(name.clone(), Json::Obj(o));
        println!("selftest {}: {} ({:.3e})", name, if *ok { "ok" } else { "FAIL" }, value);
    }
    let report = emit::command_report("selftest", None, Json::Obj(body));
    let path = emit::write_file(out, "selftest_report.json", &report.to_string_pretty())?;
    println!("report: {}", path.display());
    Ok(if all_ok { 0 } else { 2 })
}
