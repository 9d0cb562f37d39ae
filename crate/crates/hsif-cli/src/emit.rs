//! Deterministic file emission for reports and data tables.

use std::fs;
use std::path::{Path, PathBuf};

use hsif_core::report::{fmt_e12, Json};
use hsif_core::{GramMatrix, LatticePoint};

pub fn write_file(dir: &Path, name: &str, content: &str) -> Result<PathBuf, String> {
    fs::create_dir_all(dir).map_err(|e| format!("cannot create output directory {}: {e}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, content).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    Ok(path)
}

/// Wraps a command outcome with the verbatim config echo.
pub fn command_report(command: &str, config_echo: Option<&str>, body: Json) -> Json {
    let mut o = Json::obj();
    o.insert("command".into(), Json::of_str(command));
    if let Some(echo) = config_echo {
        o.insert("config_echo".into(), Json::of_str(echo));
    }
    o.insert("result".into(), body);
    Json::Obj(o)
}

fn lattice_fields(o: &mut std::collections::BTreeMap<String, Json>, prefix: &str, p: &LatticePoint) {
    o.insert(
        format!("{prefix}_k"),
        Json::Arr(p.k.iter().map(|&c| Json::Int(c)).collect()),
    );
    o.insert(
        format!("{prefix}_l"),
        Json::Arr(p.l.iter().map(|&c| Json::Int(c)).collect()),
    );
    o.insert(format!("{prefix}_m"), Json::Int(p.m));
}

/// Sparse CSV of the nonzero Gram entries:
/// `gen_i,k_i,l_i,m_i,gen_j,k_j,l_j,m_j,re,im`.
pub fn gram_csv(gram: &GramMatrix<f64>) -> String {
    let join = |v: &[i64]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(";");
    let mut out = String::from("gen_i,k_i,l_i,m_i,gen_j,k_j,l_j,m_j,re,im\n");
    for i in 0..gram.dim {
        for j in 0..gram.dim {
            let v = gram.entry(i, j);
            if v.norm() == 0.0 {
                continue;
            }
            let (gi, pi) = &gram.labels[i];
            let (gj, pj) = &gram.labels[j];
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                gi,
                join(&pi.k),
                join(&pi.l),
                pi.m,
                gj,
                join(&pj.k),
                join(&pj.l),
                pj.m,
                fmt_e12(v.re),
                fmt_e12(v.im),
            ));
        }
    }
    out
}

/// JSON form of a lattice-point/value listing.
pub fn lattice_values_json(values: &[(LatticePoint, hsif_core::C64)]) -> Json {
    Json::Arr(
        values
            .iter()
            .map(|(p, v)| {
                let mut o = Json::obj();
                lattice_fields(&mut o, "gamma", p);
                o.insert("value".into(), Json::complex(v.re, v.im));
                Json::Obj(o)
            })
            .collect(),
    )
}

/// CSV of multiplier samples: `lambda,multiplier_re,multiplier_im,g00_base,member`.
pub fn multiplier_csv(m: &hsif_core::FiberMultiplierFunction) -> String {
    let mut out = String::from("lambda,multiplier_re,multiplier_im,g00_base,member\n");
    for (idx, &lambda) in m.omega.grid.points().iter().enumerate() {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_e12(lambda),
            fmt_e12(m.multiplier[idx].re),
            fmt_e12(m.multiplier[idx].im),
            fmt_e12(m.omega.g00[idx]),
            m.omega.member[idx] as u8,
        ));
    }
    out
}

/// Bracket table as JSON (for `--format json`).
pub fn bracket_table_json(table: &hsif_core::BracketTable<f64>) -> Json {
    let mut o = Json::obj();
    o.insert("generator".into(), Json::of_str(&table.generator));
    o.insert("rmax".into(), Json::Int(table.rmax as i64));
    o.insert("tail_bound".into(), Json::Num(table.tail_bound));
    o.insert(
        "lambda".into(),
        Json::Arr(table.grid.points().iter().map(|&l| Json::Num(l)).collect()),
    );
    o.insert(
        "rows".into(),
        Json::Arr(
            table
                .rows
                .iter()
                .map(|row| {
                    let mut r = Json::obj();
                    r.insert("k".into(), Json::Arr(row.k.iter().map(|&c| Json::Int(c)).collect()));
                    r.insert("l".into(), Json::Arr(row.l.iter().map(|&c| Json::Int(c)).collect()));
                    r.insert(
                        "values".into(),
                        Json::Arr(row.values.iter().map(|v| Json::complex(v.re, v.im)).collect()),
                    );
                    Json::Obj(r)
                })
                .collect(),
        ),
    );
    Json::Obj(o)
}
