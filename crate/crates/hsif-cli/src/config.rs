//! Session configuration: JSON schema, validation and conversion into
//! analysis inputs.

use std::collections::BTreeMap;

use hsif_core::{AffineForm, AnalysisParams, BoxFn, GramOptions, Interval, LambdaGrid, OracleQuad, C64};
use serde::Deserialize;

/// One sheared box term, as written in config files.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermLiteral {
    pub coeff_re: f64,
    #[serde(default)]
    pub coeff_im: f64,
    pub xbox: AxisIntervals,
    pub ybox: AxisIntervals,
    pub tbox: [f64; 2],
    #[serde(default)]
    pub toffset: Option<OffsetLiteral>,
}

/// Either a single `[a, b]` (n = 1) or a list of per-axis intervals.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum AxisIntervals {
    Single([f64; 2]),
    PerAxis(Vec<[f64; 2]>),
}

impl AxisIntervals {
    fn to_intervals(&self, n: usize, field: &str) -> Result<Vec<Interval<f64>>, String> {
        let raw: Vec<[f64; 2]> = match self {
            AxisIntervals::Single(iv) => vec![*iv],
            AxisIntervals::PerAxis(list) => list.clone(),
        };
        if raw.len() != n {
            return Err(format!("field `{field}`: expected {n} axis interval(s), got {}", raw.len()));
        }
        Ok(raw.into_iter().map(|[a, b]| Interval::new(a, b)).collect())
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OffsetLiteral {
    #[serde(default)]
    pub alpha: Vec<f64>,
    #[serde(default)]
    pub beta: Vec<f64>,
    #[serde(default)]
    pub gamma: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyzeOptions {
    /// Names of the generators forming the family; defaults to all.
    #[serde(default)]
    pub family: Option<Vec<String>>,
    /// Claimed Bessel bound; the Bessel check runs only when present.
    #[serde(default)]
    pub bessel_bound: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketOptions {
    pub generator: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GramCliOptions {
    #[serde(default)]
    pub generators: Option<Vec<String>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DualOptions {
    pub generator: String,
    /// "canonical" or the name of a configured generator to use as dual.
    pub dual: String,
    /// Lattice radii for the reproduction residual trace.
    #[serde(default)]
    pub schedule: Option<Vec<i64>>,
    /// Truncation of the lattice-mode canonical dual solve.
    #[serde(default)]
    pub dual_lattice: Option<i64>,
    /// Test function for reproduction: name of a generator (defaults to
    /// the analyzed generator itself).
    #[serde(default)]
    pub test_function: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormalizeOptions {
    pub generator: String,
}

/// Top-level session configuration.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SessionConfig {
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "default_grid")]
    pub grid: usize,
    #[serde(default = "default_offset")]
    pub grid_offset: f64,
    #[serde(default = "default_rmax")]
    pub rmax: usize,
    #[serde(default = "default_lattice")]
    pub lattice: i64,
    #[serde(default = "default_tol_fourier")]
    pub tol_fourier: f64,
    #[serde(default = "default_tol_oracle")]
    pub tol_oracle: f64,
    pub generators: BTreeMap<String, Vec<TermLiteral>>,
    #[serde(default)]
    pub analyze: Option<AnalyzeOptions>,
    #[serde(default)]
    pub bracket: Option<BracketOptions>,
    #[serde(default)]
    pub gram: Option<GramCliOptions>,
    #[serde(default)]
    pub dual: Option<DualOptions>,
    #[serde(default)]
    pub normalize: Option<NormalizeOptions>,
}

fn default_n() -> usize {
    1
}
fn default_grid() -> usize {
    hsif_core::params::GRID_SIZE
}
fn default_offset() -> f64 {
    hsif_core::params::GRID_OFFSET
}
fn default_rmax() -> usize {
    hsif_core::params::RMAX
}
fn default_lattice() -> i64 {
    hsif_core::params::LATTICE_N
}
fn default_tol_fourier() -> f64 {
    hsif_core::params::TOL_FOURIER
}
fn default_tol_oracle() -> f64 {
    hsif_core::params::TOL_ORACLE
}

impl SessionConfig {
    /// Parses and validates a config file, reporting schema violations
    /// with line/column diagnostics and semantic violations by field.
    pub fn parse(text: &str) -> Result<SessionConfig, String> {
        let cfg: SessionConfig = serde_json::from_str(text)
            .map_err(|e| format!("config schema violation at line {}, column {}: {e}", e.line(), e.column()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), String> {
        if self.n < 1 {
            return Err("field `n`: dimension must be at least 1".into());
        }
        if self.grid < 8 {
            return Err(format!("field `grid`: {} below the minimum 8", self.grid));
        }
        if self.rmax < 16 {
            return Err(format!("field `rmax`: {} below the minimum 16", self.rmax));
        }
        if !(self.tol_fourier > 0.0) {
            return Err("field `tol_fourier`: tolerance must be positive".into());
        }
        if !(self.tol_oracle > 0.0) {
            return Err("field `tol_oracle`: tolerance must be positive".into());
        }
        if self.lattice < 0 {
            return Err("field `lattice`: truncation radius must be nonnegative".into());
        }
        if self.generators.is_empty() {
            return Err("field `generators`: at least one generator required".into());
        }
        for (name, terms) in &self.generators {
            if terms.is_empty() {
                return Err(format!("generator `{name}`: empty term list"));
            }
            self.build_generator_named(name)?;
        }
        Ok(())
    }

    pub fn build_generator_named(&self, name: &str) -> Result<BoxFn, String> {
        let terms = self
            .generators
            .get(name)
            .ok_or_else(|| format!("unknown generator `{name}`"))?;
        let mut built = Vec::with_capacity(terms.len());
        for (idx, t) in terms.iter().enumerate() {
            let at = |field: &str| format!("generator `{name}`, term {idx}, {field}");
            let xbox = t.xbox.to_intervals(self.n, &at("xbox"))?;
            let ybox = t.ybox.to_intervals(self.n, &at("ybox"))?;
            let toffset = match &t.toffset {
                None => AffineForm::zero(self.n),
                Some(o) => {
                    let pad = |v: &Vec<f64>, field: &str| -> Result<Vec<f64>, String> {
                        if v.is_empty() {
                            Ok(vec![0.0; self.n])
                        } else if v.len() == self.n {
                            Ok(v.clone())
                        } else {
                            Err(format!("{}: expected {} coefficient(s), got {}", at(field), self.n, v.len()))
                        }
                    };
                    AffineForm {
                        alpha: pad(&o.alpha, "toffset.alpha")?,
                        beta: pad(&o.beta, "toffset.beta")?,
                        gamma: o.gamma,
                    }
                }
            };
            built.push(hsif_core::ShearedBoxTerm {
                coeff: C64::new(t.coeff_re, t.coeff_im),
                xbox,
                ybox,
                tbox: Interval::new(t.tbox[0], t.tbox[1]),
                toffset,
            });
        }
        Ok(BoxFn::new(self.n, built))
    }

    pub fn analysis_params(&self) -> Result<AnalysisParams, String> {
        let grid = LambdaGrid::offset(self.grid, self.grid_offset)
            .map_err(|e| format!("field `grid`: {e}"))?;
        Ok(AnalysisParams {
            grid,
            rmax: self.rmax,
            lattice_n: self.lattice,
            tol_fourier: self.tol_fourier,
            tol_oracle: self.tol_oracle,
            quad: OracleQuad::default(),
            gram: GramOptions::default(),
            ..Default::default()
        })
    }
}
