use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::RunConfig;
use super::fit::{fit_power_law, FitPoint, FitVerdict, ScalingFit};
use crate::engine::{estimate, ErrorEstimate, Method, Mode};
use crate::error::{Error, Result};
use crate::fock::{presets, PairFile, StatePair};

/// Generic sweep grid.
pub const GENERIC_GRID: [usize; 5] = [8, 16, 32, 64, 128];
/// Perfect cubes, so that `N^{-1/3}` is exact.
pub const DEGENERATE_GRID: [usize; 4] = [27, 125, 343, 729];

/// Where the input pair comes from: a JSON pair file, or a preset name
/// (`zero-one`, `plus-minus`, `cat`, `cat:<alpha>`) when no such file exists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairSource {
    File(PathBuf),
    Preset(String),
}

impl PairSource {
    pub fn parse(arg: &str) -> Self {
        if Path::new(arg).is_file() {
            Self::File(arg.into())
        } else {
            Self::Preset(arg.into())
        }
    }

    pub fn load(&self, cutoff: usize, trunc_budget: f64) -> Result<StatePair> {
        match self {
            Self::File(path) => PairFile::load(path)?.into_pair(trunc_budget),
            Self::Preset(name) => presets::by_name(name, cutoff),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub n_values: Vec<usize>,
    pub samples: Option<u64>,
    pub samples_min: u64,
    pub samples_factor: f64,
    pub mode: Mode,
    pub pair: PairSource,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

impl SweepSpec {
    /// Sweep with every setting taken from `cfg`; the N grid falls back to
    /// [`GENERIC_GRID`].
    pub fn from_config(pair: PairSource, cfg: &RunConfig) -> Self {
        Self {
            n_values: cfg
                .n_values
                .clone()
                .unwrap_or_else(|| GENERIC_GRID.to_vec()),
            samples: cfg.samples,
            samples_min: cfg.samples_min,
            samples_factor: cfg.samples_factor,
            mode: cfg.mode,
            pair,
            seed: cfg.seed,
            out: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_values.is_empty() || self.n_values[0] == 0 {
            return Err(Error::InvalidParameter(
                "N values must be positive and non-empty".into(),
            ));
        }
        if self.n_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(format!(
                "N values must increase strictly: {:?}",
                self.n_values
            )));
        }
        Ok(())
    }

    /// Monte Carlo samples at `n`: fixed if given, else
    /// `max(samples_min, samples_factor * n)`.
    pub fn samples_for(&self, n: usize) -> u64 {
        self.samples.unwrap_or_else(|| {
            self.samples_min
                .max((self.samples_factor * n as f64).ceil() as u64)
        })
    }
}

/// Per-point seed, so sweep points draw independent streams.
pub fn point_seed(seed: u64, n: usize) -> u64 {
    seed ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub mode: Method,
    pub p_err: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub p_fail: f64,
    pub fail_ci_low: f64,
    pub fail_ci_high: f64,
    /// Zero for exact rows.
    pub samples: u64,
    pub pruned_mass: f64,
    pub truncation_deficit: f64,
    pub cap_margin: f64,
    pub clamped_steps: u64,
    pub delta: Option<f64>,
}

impl From<&ErrorEstimate> for SweepRow {
    fn from(e: &ErrorEstimate) -> Self {
        Self {
            n: e.n,
            mode: e.method,
            p_err: e.p_err,
            ci_low: e.ci_low,
            ci_high: e.ci_high,
            p_fail: e.p_fail,
            fail_ci_low: e.fail_ci_low,
            fail_ci_high: e.fail_ci_high,
            samples: e.samples.unwrap_or(0),
            pruned_mass: e.pruned_mass,
            truncation_deficit: e.truncation_deficit,
            cap_margin: e.cap_margin,
            clamped_steps: e.clamped_steps,
            delta: e.delta,
        }
    }
}

impl SweepRow {
    pub fn error_point(&self) -> FitPoint {
        FitPoint {
            n: self.n,
            p: self.p_err,
            half_width: 0.5 * (self.ci_high - self.ci_low),
        }
    }

    pub fn failure_point(&self) -> FitPoint {
        FitPoint {
            n: self.n,
            p: self.p_fail,
            half_width: 0.5 * (self.fail_ci_high - self.fail_ci_low),
        }
    }
}

pub fn write_csv<W: Write>(out: W, rows: &[SweepRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<SweepRow>> {
    csv::Reader::from_reader(input)
        .deserialize()
        .map(|r| r.map_err(Error::from))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub fit: ScalingFit,
    /// Fit of the failure probability against `1/N`; absent when it has too
    /// few usable points. Informational: it does not enter [`Self::passed`].
    pub failure_fit: Option<ScalingFit>,
    /// Whether the pair was planned in a rotated design basis.
    pub degenerate: bool,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.fit.passed()
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut buf = Vec::new();
        write_csv(&mut buf, &self.rows)?;
        Ok(buf)
    }
}

/// Error-probability exponent the sweep is checked against: `-1` for a
/// generic pair, `-min(D, 1 - D)` for a degenerate pair rotated by `N^{-D}`.
pub fn expected_exponent(degenerate: bool, delta_exp: f64) -> f64 {
    if degenerate {
        -delta_exp.min(1.0 - delta_exp)
    } else {
        -1.0
    }
}

/// Evaluate every point of `spec` for `pair` and fit the error and failure
/// probabilities against N.
pub fn run_sweep(pair: &StatePair, spec: &SweepSpec, cfg: &RunConfig) -> Result<SweepReport> {
    spec.validate()?;
    let estimates: Vec<ErrorEstimate> = spec
        .n_values
        .par_iter()
        .map(|&n| {
            estimate(
                pair,
                n,
                spec.mode,
                spec.samples_for(n),
                point_seed(spec.seed, n),
                &cfg.engine,
            )
        })
        .collect::<Result<_>>()?;
    for e in &estimates {
        if e.cap_margin < -1e-12 {
            return Err(Error::BoundViolation(format!(
                "N = {}: displacement cap exceeded by {}",
                e.n, -e.cap_margin
            )));
        }
        if e.truncation_deficit > cfg.engine.trunc_budget {
            return Err(Error::TruncationBudget {
                discarded: e.truncation_deficit,
                budget: cfg.engine.trunc_budget,
            });
        }
    }
    let rows: Vec<SweepRow> = estimates.iter().map(SweepRow::from).collect();
    let degenerate = rows.iter().any(|r| r.delta.is_some());
    let (fit, failure_fit) = fit_rows(&rows, degenerate, cfg)?;
    Ok(SweepReport {
        rows,
        fit,
        failure_fit,
        degenerate,
    })
}

fn fit_rows(
    rows: &[SweepRow],
    degenerate: bool,
    cfg: &RunConfig,
) -> Result<(ScalingFit, Option<ScalingFit>)> {
    let expected = expected_exponent(degenerate, cfg.engine.receiver.perturbation.delta_exp);
    let tol = if degenerate {
        cfg.fit.slope_tol_degenerate
    } else {
        cfg.fit.slope_tol_generic
    };
    let points: Vec<FitPoint> = rows.iter().map(SweepRow::error_point).collect();
    let fit = fit_power_law(&points, expected, tol, &cfg.fit)?;
    let failure_fit = if fit.verdict == FitVerdict::ExactZero {
        None
    } else {
        let points: Vec<FitPoint> = rows.iter().map(SweepRow::failure_point).collect();
        fit_power_law(&points, -1.0, cfg.fit.fail_slope_tol, &cfg.fit).ok()
    };
    Ok((fit, failure_fit))
}

/// Load the pair, run the sweep and write its CSV to `spec.out` if set.
pub fn cmd_sweep(spec: &SweepSpec, cfg: &RunConfig) -> Result<SweepReport> {
    let pair = spec.pair.load(cfg.cutoff, cfg.engine.trunc_budget)?;
    let report = run_sweep(&pair, spec, cfg)?;
    if let Some(path) = &spec.out {
        std::fs::write(path, report.to_csv()?)?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::fit::FitConfig;

    #[test]
    fn spec_rejects_unsorted_grid() {
        let mut spec =
            SweepSpec::from_config(PairSource::Preset("cat".into()), &RunConfig::default());
        assert!(spec.validate().is_ok());
        spec.n_values = vec![8, 8, 16];
        assert!(spec.validate().is_err());
        spec.n_values = vec![];
        assert!(spec.validate().is_err());
    }

    #[test]
    fn default_sample_rule() {
        let spec = SweepSpec::from_config(PairSource::Preset("cat".into()), &RunConfig::default());
        assert_eq!(spec.samples_for(8), 10_000);
        assert_eq!(spec.samples_for(128), 12_800);
    }

    #[test]
    fn counting_basis_sweep_is_exact_zero() {
        let cfg = RunConfig::default();
        let mut spec = SweepSpec::from_config(PairSource::Preset("zero-one".into()), &cfg);
        spec.n_values = vec![2, 4, 8];
        let report = cmd_sweep(&spec, &cfg).unwrap();
        assert_eq!(report.fit.verdict, FitVerdict::ExactZero);
        assert!(report
            .rows
            .iter()
            .all(|r| r.p_err <= 1e-10 && r.mode == Method::Exact));
        assert!(report.failure_fit.is_none());
    }

    #[test]
    fn csv_round_trip_is_lossless() {
        let cfg = RunConfig {
            samples: Some(300),
            ..RunConfig::default()
        };
        let mut spec = SweepSpec::from_config(PairSource::Preset("cat".into()), &cfg);
        spec.n_values = vec![2, 3, 4, 5];
        spec.mode = Mode::Mc;
        let pair = spec.pair.load(24, 1e-10).unwrap();
        let loose = RunConfig {
            fit: FitConfig {
                min_snr: 0.0,
                ..FitConfig::default()
            },
            ..cfg
        };
        let report = run_sweep(&pair, &spec, &loose).unwrap();
        let back = read_csv(&report.to_csv().unwrap()[..]).unwrap();
        assert_eq!(back, report.rows);
        assert!(back.iter().all(|r| r.samples == 300));
    }

    #[test]
    fn expected_exponents() {
        assert_eq!(expected_exponent(false, 1.0 / 3.0), -1.0);
        assert!((expected_exponent(true, 1.0 / 3.0) + 1.0 / 3.0).abs() < 1e-15);
        assert!((expected_exponent(true, 0.75) + 0.25).abs() < 1e-15);
    }
}
