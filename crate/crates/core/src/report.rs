//! Run configuration, the three report commands and their JSON/CSV/text
//! encodings.
//!
//! Every report has the shape `{"command", "config", "rows", "passed"}`.
//! Row order is fixed by `(2s, trial)` or suite order, independent of how the
//! work was scheduled.

use std::fmt::Write as _;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::exchange::exchange_phase_with;
use crate::spin::{generators, SpinValue};
use crate::suites::{self, sample, SuiteParams, SuiteResult, COMPLETENESS_THRESHOLD};
use crate::tilted::{tilted_gram, verify_tilt_transfer};
use crate::{Error, Result, C64, DEFAULT_TOLERANCE};

/// Largest `2s` a run may request.
pub const MAX_TWICE_SPIN: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    PhaseTable,
    VerifyAll,
    Tilted,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::PhaseTable => "phase-table",
            Command::VerifyAll => "verify-all",
            Command::Tilted => "tilted",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub twice_spin_max: u32,
    pub tolerance: f64,
    pub random_seed: u64,
    pub geometry_trials: usize,
    pub output_path: Option<PathBuf>,
    pub output_format: OutputFormat,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            twice_spin_max: 8,
            tolerance: DEFAULT_TOLERANCE,
            random_seed: 0,
            geometry_trials: 20,
            output_path: None,
            output_format: OutputFormat::Json,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::Domain(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.twice_spin_max > MAX_TWICE_SPIN {
            return Err(Error::Domain(format!(
                "twice_spin_max {} exceeds {MAX_TWICE_SPIN}",
                self.twice_spin_max
            )));
        }
        if self.geometry_trials == 0 {
            return Err(Error::Domain("geometry_trials must be at least 1".into()));
        }
        Ok(())
    }

    fn suite_params(&self) -> SuiteParams {
        SuiteParams {
            twice_spin_max: self.twice_spin_max,
            trials: self.geometry_trials,
            tolerance: self.tolerance,
            seed: self.random_seed,
        }
    }
}

/// One row of `phase-table`: the worst trial for a given `2s`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseRow {
    pub twice_spin: u32,
    pub expected: i32,
    pub measured_re: f64,
    pub measured_im: f64,
    pub residual: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TiltedRow {
    pub twice_spin: u32,
    pub thetas: Vec<f64>,
    /// `gram[l][l'] = [re, im]`.
    pub gram: Vec<Vec<[f64; 2]>>,
    pub min_singular_value: f64,
    pub transfer_cases: usize,
    pub transfer_max_residual: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Rows {
    Phase(Vec<PhaseRow>),
    Suites(Vec<SuiteResult>),
    Tilted(Vec<TiltedRow>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub config: RunConfig,
    pub rows: Rows,
    pub passed: bool,
}

/// Exchange phase for every `2s ≤ twice_spin_max` over `geometry_trials`
/// random point pairs; each row keeps the trial with the largest residual.
pub fn cmd_phase_table(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let rows = (0..=cfg.twice_spin_max)
        .into_par_iter()
        .map(|ts| phase_row(cfg, SpinValue::from_twice(ts)))
        .collect::<Result<Vec<_>>>()?;
    let passed = rows.iter().all(|r| r.passed);
    Ok(Report {
        command: Command::PhaseTable.name().into(),
        config: cfg.clone(),
        rows: Rows::Phase(rows),
        passed,
    })
}

fn phase_row(cfg: &RunConfig, s: SpinValue) -> Result<PhaseRow> {
    let ops = generators(s);
    let mut rng = sample::rng(cfg.random_seed, 0, u64::from(s.twice_spin()));
    let mut worst: Option<(C64, f64)> = None;
    for _ in 0..cfg.geometry_trials {
        let (a, b) = sample::point_pair(&mut rng);
        let r = exchange_phase_with(&ops, a, b, cfg.tolerance)?;
        if worst.is_none_or(|(_, res)| r.residual > res) {
            worst = Some((r.measured_phase, r.residual));
        }
    }
    let (measured, residual) = worst.expect("at least one trial");
    Ok(PhaseRow {
        twice_spin: s.twice_spin(),
        expected: s.exchange_sign(),
        measured_re: measured.re,
        measured_im: measured.im,
        residual,
        passed: residual < cfg.tolerance,
    })
}

/// Runs every invariant suite with the configured seed and tolerance.
pub fn cmd_verify_all(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let rows = suites::all_suites(&cfg.suite_params())?;
    let passed = rows.iter().all(|r| r.passed);
    Ok(Report {
        command: Command::VerifyAll.name().into(),
        config: cfg.clone(),
        rows: Rows::Suites(rows),
        passed,
    })
}

/// θ tables, Gram matrices, smallest singular values and tilt-transfer
/// verdicts for every `2s ≤ twice_spin_max`.
pub fn cmd_tilted(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let rows = (0..=cfg.twice_spin_max)
        .into_par_iter()
        .map(|ts| tilted_row(cfg, SpinValue::from_twice(ts)))
        .collect::<Result<Vec<_>>>()?;
    let passed = rows.iter().all(|r| r.passed);
    Ok(Report {
        command: Command::Tilted.name().into(),
        config: cfg.clone(),
        rows: Rows::Tilted(rows),
        passed,
    })
}

fn tilted_row(cfg: &RunConfig, s: SpinValue) -> Result<TiltedRow> {
    let g = tilted_gram(s);
    let two_s = i64::from(s.twice_spin());
    let mut cases = 0;
    let mut worst = 0.0f64;
    let mut all_passed = true;
    for la in 0..=two_s {
        for lb in 0..=two_s {
            let r = verify_tilt_transfer(s, la, lb, cfg.tolerance)?;
            cases += 1;
            worst = worst.max(r.residual);
            all_passed &= r.passed;
        }
    }
    let gram = g
        .gram
        .row_iter()
        .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
        .collect();
    Ok(TiltedRow {
        twice_spin: s.twice_spin(),
        passed: all_passed && g.is_complete(COMPLETENESS_THRESHOLD),
        thetas: g.thetas,
        gram,
        min_singular_value: g.min_singular_value,
        transfer_cases: cases,
        transfer_max_residual: worst,
    })
}

/// Runs the command named in `cfg`.
pub fn run(cfg: &RunConfig) -> Result<Report> {
    match cfg.command {
        Command::PhaseTable => cmd_phase_table(cfg),
        Command::VerifyAll => cmd_verify_all(cfg),
        Command::Tilted => cmd_tilted(cfg),
    }
}

impl Report {
    pub fn render(&self, format: OutputFormat) -> Result<String> {
        match format {
            OutputFormat::Json => self.to_json(),
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Text => Ok(self.to_text()),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| Error::Report(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    /// RFC 4180 CSV with one header line. Tilted rows flatten their lists:
    /// `thetas` as `;`-separated values, `gram` as `re:im` entries with `;`
    /// between columns and `|` between rows.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let enc = |e: csv::Error| Error::Report(e.to_string());
        match &self.rows {
            Rows::Phase(rows) => rows.iter().try_for_each(|r| w.serialize(r)).map_err(enc)?,
            Rows::Suites(rows) => rows.iter().try_for_each(|r| w.serialize(r)).map_err(enc)?,
            Rows::Tilted(rows) => {
                w.write_record([
                    "twice_spin",
                    "thetas",
                    "gram",
                    "min_singular_value",
                    "transfer_cases",
                    "transfer_max_residual",
                    "passed",
                ])
                .map_err(enc)?;
                for r in rows {
                    let thetas = r
                        .thetas
                        .iter()
                        .map(f64::to_string)
                        .collect::<Vec<_>>()
                        .join(";");
                    let gram = r
                        .gram
                        .iter()
                        .map(|row| {
                            row.iter()
                                .map(|[re, im]| format!("{re}:{im}"))
                                .collect::<Vec<_>>()
                                .join(";")
                        })
                        .collect::<Vec<_>>()
                        .join("|");
                    w.write_record([
                        r.twice_spin.to_string(),
                        thetas,
                        gram,
                        r.min_singular_value.to_string(),
                        r.transfer_cases.to_string(),
                        r.transfer_max_residual.to_string(),
                        r.passed.to_string(),
                    ])
                    .map_err(enc)?;
                }
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::Report(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Report(e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let c = &self.config;
        let _ = writeln!(
            out,
            "{}  (2s <= {}, tol {:e}, seed {}, trials {})",
            self.command, c.twice_spin_max, c.tolerance, c.random_seed, c.geometry_trials
        );
        match &self.rows {
            Rows::Phase(rows) => {
                let _ = writeln!(
                    out,
                    "{:>4} {:>8} {:>24} {:>12}  verdict",
                    "2s", "expected", "measured", "residual"
                );
                for r in rows {
                    let measured = format!("{:+.12}{:+.3e}i", r.measured_re, r.measured_im);
                    let _ = writeln!(
                        out,
                        "{:>4} {:>8} {:>24} {:>12.3e}  {}",
                        r.twice_spin,
                        r.expected,
                        measured,
                        r.residual,
                        verdict(r.passed)
                    );
                }
            }
            Rows::Suites(rows) => {
                let _ = writeln!(
                    out,
                    "{:<16} {:>7} {:>8} {:>12}  verdict",
                    "suite", "checks", "failures", "max_resid"
                );
                for r in rows {
                    let _ = writeln!(
                        out,
                        "{:<16} {:>7} {:>8} {:>12.3e}  {}",
                        r.suite,
                        r.checks,
                        r.failures,
                        r.max_residual,
                        verdict(r.passed)
                    );
                }
            }
            Rows::Tilted(rows) => {
                for r in rows {
                    let thetas: Vec<String> = r.thetas.iter().map(|t| format!("{t:.6}")).collect();
                    let _ = writeln!(
                        out,
                        "2s = {}: theta = [{}]",
                        r.twice_spin,
                        thetas.join(", ")
                    );
                    let _ = writeln!(out, "  gram:");
                    for row in &r.gram {
                        let cells: Vec<String> = row
                            .iter()
                            .map(|[re, im]| format!("{re:+.4}{im:+.4}i"))
                            .collect();
                        let _ = writeln!(out, "    {}", cells.join("  "));
                    }
                    let _ = writeln!(
                        out,
                        "  min singular value {:.6e}; tilt transfer {} cases, max residual {:.3e}  {}",
                        r.min_singular_value,
                        r.transfer_cases,
                        r.transfer_max_residual,
                        verdict(r.passed)
                    );
                }
            }
        }
        let _ = writeln!(out, "overall: {}", verdict(self.passed));
        out
    }
}

fn verdict(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}
