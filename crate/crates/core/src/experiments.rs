//! Experiment drivers: recovery sweep, measurement saturation, tracking and
//! the noise suite. Every driver returns its rows; [`run`] writes them as
//! CSV next to a manifest that echoes the resolved configuration.
//!
//! Trial `i` of grid point `g` draws from `trial_rng(seed, g << 32 | i)`, so
//! results do not depend on thread count or scheduling.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use nalgebra::DVector;
use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::baseline::{error_free, omp_recover, RealSensing, Variance};
use crate::field::prime_power;
use crate::noisy::{AdversaryStrategy, NoiseModel, NoisyOptions, NoisyScheme};
use crate::sensing::{sample_complexity, SensingScheme, SparseSignal};
use crate::tracking::{
    ingest_csv, quantize, synthetic_series, track_finite, track_real, write_trace, Orientation,
};
use crate::trial_rng;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{0}")]
    Runtime(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl ExperimentError {
    /// Process exit code: 2 for configuration problems, 3 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            ExperimentError::Config(_) => 2,
            _ => 3,
        }
    }
}

fn runtime(e: impl std::fmt::Display) -> ExperimentError {
    ExperimentError::Runtime(e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    RecoverySweep,
    MeasurementSaturation,
    TrackSynthetic,
    TrackCsv,
    NoiseSuite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum VarianceSetting {
    #[default]
    InvSqrtM,
    InvM,
}

impl From<VarianceSetting> for Variance {
    fn from(v: VarianceSetting) -> Self {
        match v {
            VarianceSetting::InvSqrtM => Variance::InvSqrtM,
            VarianceSetting::InvM => Variance::InvM,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum OrientationSetting {
    #[default]
    Rows,
    Columns,
}

impl From<OrientationSetting> for Orientation {
    fn from(o: OrientationSetting) -> Self {
        match o {
            OrientationSetting::Rows => Orientation::RowsAreTime,
            OrientationSetting::Columns => Orientation::ColumnsAreTime,
        }
    }
}

/// Config as written in a file; every key is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub experiment: Option<Experiment>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub n: Option<Vec<usize>>,
    pub q: Option<Vec<u64>>,
    pub r: Option<Vec<f64>>,
    pub theta: Option<Vec<f64>>,
    pub b: Option<usize>,
    pub t: Option<usize>,
    pub lambda: Option<Vec<f64>>,
    pub delta: Option<Vec<f64>>,
    pub rate_margin: Option<f64>,
    pub variance: Option<VarianceSetting>,
    pub input: Option<PathBuf>,
    pub orientation: Option<OrientationSetting>,
    pub out: Option<PathBuf>,
}

/// Fully resolved configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub seed: u64,
    pub trials: usize,
    pub n: Vec<usize>,
    pub q: Vec<u64>,
    pub r: Vec<f64>,
    pub theta: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<usize>,
    pub t: usize,
    pub lambda: Vec<f64>,
    pub delta: Vec<f64>,
    pub rate_margin: f64,
    pub variance: VarianceSetting,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    pub orientation: OrientationSetting,
    pub out: PathBuf,
}

impl ExperimentConfig {
    /// Defaults for each experiment, at desk scale.
    pub fn defaults(experiment: Experiment) -> Self {
        let theta: Vec<f64> = (1..=15).map(|i| i as f64 / 5.0).collect();
        let mut c = ExperimentConfig {
            experiment,
            seed: 1,
            trials: 200,
            n: vec![1024],
            q: vec![256],
            r: vec![0.2, 0.4, 0.6],
            theta,
            b: None,
            t: 100,
            lambda: vec![0.001, 0.005, 0.01, 0.02],
            delta: vec![0.0, 0.05, 0.1, 0.2],
            rate_margin: 1.5,
            variance: VarianceSetting::InvSqrtM,
            input: None,
            orientation: OrientationSetting::Rows,
            out: PathBuf::from("out"),
        };
        match experiment {
            Experiment::RecoverySweep => {}
            Experiment::MeasurementSaturation => {
                c.n = vec![2048, 4096];
                c.q = (1..=16).map(|i| 1u64 << i).collect();
                c.r = vec![0.2, 0.4, 0.6, 0.8];
            }
            Experiment::TrackSynthetic => {
                c.n = vec![256];
                c.r = vec![0.2];
            }
            Experiment::TrackCsv => {
                c.q = vec![1024];
            }
            Experiment::NoiseSuite => {
                c.n = vec![255];
                c.b = Some(4);
                c.trials = 500;
            }
        }
        c
    }

    pub fn from_toml(text: &str) -> Result<Self, ExperimentError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| ExperimentError::Config(e.to_string()))?;
        Self::resolve(raw)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ExperimentError> {
        let text = fs::read_to_string(path.as_ref())
            .map_err(|e| ExperimentError::Config(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_toml(&text)
    }

    pub fn resolve(raw: RawConfig) -> Result<Self, ExperimentError> {
        let experiment = raw
            .experiment
            .ok_or_else(|| ExperimentError::Config("missing key `experiment`".into()))?;
        let mut c = Self::defaults(experiment);
        macro_rules! take {
            ($($f:ident),*) => { $(if let Some(v) = raw.$f { c.$f = v; })* };
        }
        take!(seed, trials, n, q, r, theta, t, lambda, delta, rate_margin, variance, orientation, out);
        if raw.b.is_some() {
            c.b = raw.b;
        }
        if raw.input.is_some() {
            c.input = raw.input;
        }
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |m: String| Err(ExperimentError::Config(m));
        if self.n.is_empty() || self.q.is_empty() {
            return bad("grids `n` and `q` must be non-empty".into());
        }
        if let Some(q) = self.q.iter().find(|&&q| prime_power(q).is_none()) {
            return bad(format!("q = {q} is not a prime power"));
        }
        if self.n.contains(&0) {
            return bad("n must be positive".into());
        }
        let needs_r = matches!(
            self.experiment,
            Experiment::RecoverySweep | Experiment::MeasurementSaturation | Experiment::TrackSynthetic
        );
        if needs_r && (self.r.is_empty() || self.r.iter().any(|r| !(0.0..1.0).contains(r))) {
            return bad("`r` must be a non-empty list in [0, 1)".into());
        }
        match self.experiment {
            Experiment::RecoverySweep => {
                if self.trials == 0 {
                    return bad("trials must be positive".into());
                }
                if self.theta.is_empty() || self.theta.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
                    return bad("`theta` must be a non-empty list of positive numbers".into());
                }
            }
            Experiment::TrackSynthetic => {
                if self.t == 0 {
                    return bad("t must be positive".into());
                }
            }
            Experiment::TrackCsv => {
                if self.input.is_none() {
                    return bad("track_csv needs `input`".into());
                }
            }
            Experiment::NoiseSuite => {
                if self.trials == 0 {
                    return bad("trials must be positive".into());
                }
                if self.lambda.is_empty() && self.delta.is_empty() {
                    return bad("noise suite needs `lambda` or `delta`".into());
                }
                if self.b.unwrap_or(0) == 0 {
                    return bad("noise suite needs a positive `b`".into());
                }
            }
            Experiment::MeasurementSaturation => {}
        }
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}

/// `x` rounded to the nearest integer when within 1e-9 of it; guards
/// `1024^0.2 = 4` and `0.2 * 5 = 1` against floating-point drift.
fn snap(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() < 1e-9 {
        r
    } else {
        x
    }
}

/// `ceil(n^r)`.
pub fn sparsity_level(n: usize, r: f64) -> usize {
    snap((n as f64).powf(r)).ceil() as usize
}

/// `floor(theta b)`.
pub fn design_sparsity(theta: f64, b: usize) -> usize {
    snap(theta * b as f64).floor() as usize
}

fn grid_stream(point: u64, trial: usize) -> u64 {
    (point << 32) | trial as u64
}

/// A uniformly placed b-sparse vector of ones.
fn ones_signal<R: Rng + ?Sized>(rng: &mut R, n: usize, b: usize) -> SparseSignal {
    let support = sample(rng, n, b.min(n));
    SparseSignal::from_pairs(n, support.into_iter().map(|j| (j, 1))).expect("distinct indices")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub theta: f64,
    pub method: &'static str,
    pub b: usize,
    pub success_fraction: f64,
    pub n: usize,
    pub q: u64,
    pub m: usize,
}

/// Success of both pipelines at `m = 2 floor(theta b) s` measurements.
pub fn run_recovery_sweep(cfg: &ExperimentConfig) -> Result<Vec<SweepRow>, ExperimentError> {
    let mut rows = Vec::new();
    let mut point = 0u64;
    let variance: Variance = cfg.variance.into();
    for &n in &cfg.n {
        for &q in &cfg.q {
            for &r in &cfg.r {
                let b = sparsity_level(n, r);
                for &theta in &cfg.theta {
                    point += 1;
                    // Past n/2 the code cannot exist; larger budgets add nothing.
                    let design = design_sparsity(theta, b).min((n - 1) / 2);
                    let scheme = if design == 0 {
                        None
                    } else {
                        Some(SensingScheme::build(q, n, design).map_err(runtime)?)
                    };
                    let m = scheme.as_ref().map_or(0, SensingScheme::measurements);
                    let outcomes: Vec<(bool, bool)> = (0..cfg.trials)
                        .into_par_iter()
                        .map(|i| {
                            let mut rng = trial_rng(cfg.seed, grid_stream(point, i));
                            let x = ones_signal(&mut rng, n, b);
                            let finite = scheme.as_ref().is_some_and(|s| {
                                s.measure(&x).and_then(|y| s.recover(&y)).is_ok_and(|xh| xh == x)
                            });
                            let real = m > 0 && {
                                let a = RealSensing::sample(m, n, variance, &mut rng).expect("m > 0");
                                let xr = DVector::from_iterator(n, x.to_dense().into_iter().map(f64::from));
                                omp_recover(&a, &a.measure(&xr), b).is_ok_and(|xh| error_free(&xr, &xh))
                            };
                            (finite, real)
                        })
                        .collect();
                    let frac = |k: fn(&(bool, bool)) -> bool| {
                        outcomes.iter().filter(|o| k(o)).count() as f64 / cfg.trials as f64
                    };
                    for (method, f) in [("finite", frac(|o| o.0)), ("real", frac(|o| o.1))] {
                        rows.push(SweepRow {
                            theta,
                            method,
                            b,
                            success_fraction: f,
                            n,
                            q,
                            m,
                        });
                    }
                }
            }
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SaturationRow {
    pub log2_q: u32,
    pub n: usize,
    pub r: f64,
    pub m: u64,
}

/// `m = 2b ceil(log_q n)` over the grid; `q` must be a power of two here.
pub fn run_measurement_saturation(cfg: &ExperimentConfig) -> Result<Vec<SaturationRow>, ExperimentError> {
    if let Some(q) = cfg.q.iter().find(|q| !q.is_power_of_two() || **q < 2) {
        return Err(ExperimentError::Config(format!("saturation table needs powers of two, got {q}")));
    }
    let mut rows = Vec::new();
    for &n in &cfg.n {
        for &r in &cfg.r {
            let b = sparsity_level(n, r) as u64;
            for &q in &cfg.q {
                rows.push(SaturationRow {
                    log2_q: q.trailing_zeros(),
                    n,
                    r,
                    m: sample_complexity(q, n as u64, b).m_finite,
                });
            }
        }
    }
    Ok(rows)
}

/// One trace per sparsity level.
#[derive(Debug, Clone, PartialEq)]
pub struct TrackingRun {
    pub b: usize,
    pub m: usize,
    pub b_max: usize,
    pub err_finite: Vec<f64>,
    pub err_real: Vec<f64>,
    pub quant_floor: Vec<f64>,
}

pub fn run_tracking(cfg: &ExperimentConfig) -> Result<Vec<TrackingRun>, ExperimentError> {
    let q = cfg.q[0];
    let q32 = u32::try_from(q).map_err(|_| ExperimentError::Config(format!("q = {q} too large")))?;
    let jobs: Vec<(u64, Vec<Vec<f64>>, Option<usize>)> = match cfg.experiment {
        Experiment::TrackSynthetic => {
            let n = cfg.n[0];
            cfg.r
                .iter()
                .enumerate()
                .map(|(i, &r)| {
                    let b = sparsity_level(n, r);
                    (i as u64 + 1, synthetic_series(n, cfg.t, b, trial_rng(cfg.seed, i as u64).random()), Some(b))
                })
                .collect()
        }
        Experiment::TrackCsv => {
            let path = cfg.input.as_ref().expect("validated");
            let series = ingest_csv(path, cfg.orientation.into()).map_err(runtime)?;
            vec![(1, series, cfg.b)]
        }
        other => return Err(ExperimentError::Config(format!("{other:?} is not a tracking experiment"))),
    };

    let mut runs = Vec::new();
    for (point, series, b) in jobs {
        let tracked = quantize(&series, q32).map_err(runtime)?;
        let b = b.unwrap_or(tracked.b_max()).max(tracked.b_max()).max(1);
        let n = tracked.dimension();
        let scheme = SensingScheme::build(q, n, b).map_err(runtime)?;
        let finite = track_finite(&tracked, &scheme).map_err(runtime)?;
        let m = scheme.measurements();
        let mut rng = trial_rng(cfg.seed, grid_stream(point, 0) | (1 << 31));
        let real = RealSensing::sample(m, n, cfg.variance.into(), &mut rng).map_err(runtime)?;
        let real_trace = track_real(&tracked, &real, b);
        runs.push(TrackingRun {
            b,
            m,
            b_max: tracked.b_max(),
            err_finite: finite.errors,
            err_real: real_trace.errors,
            quant_floor: tracked.quant_floor(),
        });
    }
    Ok(runs)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoiseRow {
    pub model: String,
    pub parameter: f64,
    pub trials: usize,
    pub exact_fraction: f64,
    pub conditional_exact_fraction: f64,
    pub conditional_trials: usize,
    pub status: String,
}

/// Worst-case points run every adversary strategy at the full budget;
/// q-ary symmetric points draw noise per trial. The conditional fraction
/// counts trials whose noise touched at most `radius` outer symbols and is
/// 1 when no trial qualifies.
pub fn run_noise_suite(cfg: &ExperimentConfig) -> Result<Vec<NoiseRow>, ExperimentError> {
    let b = cfg.b.expect("validated");
    let opts = NoisyOptions {
        rate_margin: cfg.rate_margin,
    };
    let mut points: Vec<(String, NoiseModel, Option<AdversaryStrategy>)> = Vec::new();
    for &delta in &cfg.delta {
        for s in AdversaryStrategy::ALL {
            points.push((format!("worstcase-{}", s.name()), NoiseModel::WorstCase { delta }, Some(s)));
        }
    }
    for &lambda in &cfg.lambda {
        points.push(("qsymmetric".into(), NoiseModel::QSymmetric { lambda }, None));
    }

    let mut rows = Vec::new();
    let mut point = 0u64;
    for &n in &cfg.n {
        for &q in &cfg.q {
            for (name, model, strategy) in &points {
                point += 1;
                let scheme = match NoisyScheme::build(q, n, b, *model, opts) {
                    Ok(s) => s,
                    Err(e) => {
                        rows.push(NoiseRow {
                            model: name.clone(),
                            parameter: model.parameter(),
                            trials: 0,
                            exact_fraction: f64::NAN,
                            conditional_exact_fraction: f64::NAN,
                            conditional_trials: 0,
                            status: e.to_string(),
                        });
                        continue;
                    }
                };
                let fq = scheme.inner().base_field().order();
                let outcomes: Vec<(bool, bool)> = (0..cfg.trials)
                    .into_par_iter()
                    .map(|i| {
                        let mut rng = trial_rng(cfg.seed, grid_stream(point, i));
                        let support = sample(&mut rng, n, b);
                        let x = SparseSignal::from_pairs(
                            n,
                            support.into_iter().map(|j| (j, rng.random_range(1..fq))).collect::<Vec<_>>(),
                        )
                        .expect("distinct indices");
                        let e = match strategy {
                            Some(s) => scheme.adversarial_noise(*s, scheme.adversary_budget(), &mut rng),
                            None => scheme.sample_noise(model, &mut rng).expect("validated model"),
                        };
                        let within = scheme.outer_weight(&e) <= scheme.radius();
                        let y = scheme.measure(&x).expect("dimensions agree").add(&e).expect("same field");
                        let exact = scheme.recover_noisy(&y).is_ok_and(|xh| xh == x);
                        (exact, within)
                    })
                    .collect();
                let exact = outcomes.iter().filter(|o| o.0).count();
                let cond_trials = outcomes.iter().filter(|o| o.1).count();
                let cond_exact = outcomes.iter().filter(|o| o.0 && o.1).count();
                rows.push(NoiseRow {
                    model: name.clone(),
                    parameter: model.parameter(),
                    trials: cfg.trials,
                    exact_fraction: exact as f64 / cfg.trials as f64,
                    conditional_exact_fraction: if cond_trials == 0 {
                        1.0
                    } else {
                        cond_exact as f64 / cond_trials as f64
                    },
                    conditional_trials: cond_trials,
                    status: "ok".into(),
                });
            }
        }
    }
    Ok(rows)
}

fn write_rows<T: Serialize>(path: &Path, rows: &[T], header: &[&str]) -> Result<(), ExperimentError> {
    let mut w = csv::Writer::from_path(path).map_err(runtime)?;
    if rows.is_empty() {
        w.write_record(header).map_err(runtime)?;
    }
    for row in rows {
        w.serialize(row).map_err(runtime)?;
    }
    w.flush()?;
    Ok(())
}

fn write_manifest(csv_path: &Path, cfg: &ExperimentConfig, extra: &BTreeMap<&str, String>) -> Result<(), ExperimentError> {
    let mut text = format!("version = \"{VERSION}\"\n");
    for (k, v) in extra {
        text.push_str(&format!("{k} = {v}\n"));
    }
    text.push_str("\n[config]\n");
    text.push_str(&cfg.to_toml());
    let mut name = csv_path.file_name().expect("file path").to_os_string();
    name.push(".manifest.toml");
    fs::write(csv_path.with_file_name(name), text)?;
    Ok(())
}

/// Runs the configured experiment and writes its CSVs and manifests into
/// `cfg.out`. Returns the written CSV paths.
pub fn run(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>, ExperimentError> {
    cfg.validate()?;
    fs::create_dir_all(&cfg.out)?;
    let none = BTreeMap::new();
    let mut written = Vec::new();
    match cfg.experiment {
        Experiment::RecoverySweep => {
            let path = cfg.out.join("sweep.csv");
            let rows = run_recovery_sweep(cfg)?;
            write_rows(&path, &rows, &["theta", "method", "b", "success_fraction", "n", "q", "m"])?;
            write_manifest(&path, cfg, &none)?;
            written.push(path);
        }
        Experiment::MeasurementSaturation => {
            let path = cfg.out.join("saturation.csv");
            let rows = run_measurement_saturation(cfg)?;
            write_rows(&path, &rows, &["log2_q", "n", "r", "m"])?;
            write_manifest(&path, cfg, &none)?;
            written.push(path);
        }
        Experiment::TrackSynthetic | Experiment::TrackCsv => {
            for run in run_tracking(cfg)? {
                let path = cfg.out.join(format!("track_b{}.csv", run.b));
                let file = fs::File::create(&path)?;
                write_trace(file, &run.err_finite, &run.err_real, &run.quant_floor).map_err(runtime)?;
                let extra = BTreeMap::from([
                    ("b", run.b.to_string()),
                    ("b_max", run.b_max.to_string()),
                    ("m", run.m.to_string()),
                ]);
                write_manifest(&path, cfg, &extra)?;
                written.push(path);
            }
        }
        Experiment::NoiseSuite => {
            let path = cfg.out.join("noise.csv");
            let rows = run_noise_suite(cfg)?;
            write_rows(
                &path,
                &rows,
                &[
                    "model",
                    "parameter",
                    "trials",
                    "exact_fraction",
                    "conditional_exact_fraction",
                    "conditional_trials",
                    "status",
                ],
            )?;
            write_manifest(&path, cfg, &none)?;
            written.push(path);
        }
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn robust_levels() {
        assert_eq!(sparsity_level(1024, 0.2), 4);
        assert_eq!(sparsity_level(1024, 0.4), 16);
        assert_eq!(sparsity_level(1024, 0.6), 64);
        assert_eq!(sparsity_level(256, 0.2), 4);
        assert_eq!(design_sparsity(0.2, 5), 1);
        assert_eq!(design_sparsity(0.6, 5), 3);
        assert_eq!(design_sparsity(0.2, 4), 0);
    }

    #[test]
    fn config_parsing() {
        let c = ExperimentConfig::from_toml("experiment = \"recovery_sweep\"\ntrials = 5\ntheta = [1.0]\n").unwrap();
        assert_eq!(c.trials, 5);
        assert_eq!(c.n, vec![1024]);
        let back: RawConfig = toml::from_str(&c.to_toml()).unwrap();
        assert_eq!(ExperimentConfig::resolve(back).unwrap(), c);

        for bad in [
            "experiment = \"recovery_sweep\"\ntrials = 0\n",
            "experiment = \"recovery_sweep\"\nbogus = 1\n",
            "trials = 3\n",
            "experiment = \"recovery_sweep\"\nq = [6]\n",
            "experiment = \"recovery_sweep\"\nn = []\n",
            "experiment = \"track_csv\"\n",
        ] {
            let e = ExperimentConfig::from_toml(bad).unwrap_err();
            assert_eq!(e.exit_code(), 2, "{bad}");
        }
    }

    #[test]
    fn saturation_values() {
        let c = ExperimentConfig::defaults(Experiment::MeasurementSaturation);
        let rows = run_measurement_saturation(&c).unwrap();
        assert_eq!(rows.len(), 2 * 4 * 16);
        for row in &rows {
            let b = sparsity_level(row.n, row.r) as u64;
            if 1u64 << row.log2_q >= row.n as u64 {
                assert_eq!(row.m, 2 * b);
            }
            if row.n == 4096 && row.log2_q == 1 {
                assert_eq!(row.m, 2 * b * 12);
            }
        }
        let mut tiny = c.clone();
        tiny.n = vec![2];
        tiny.q = vec![2];
        tiny.r = vec![0.5];
        assert_eq!(run_measurement_saturation(&tiny).unwrap()[0].m, 2 * 2);
    }

    #[test]
    fn small_sweep() {
        let mut c = ExperimentConfig::defaults(Experiment::RecoverySweep);
        c.n = vec![64];
        c.q = vec![16];
        c.r = vec![0.4];
        c.theta = vec![0.2, 1.0];
        c.trials = 20;
        let rows = run_recovery_sweep(&c).unwrap();
        assert_eq!(rows.len(), 4);
        // b = 6, floor(0.2 * 6) = 1 < b
        let low = rows.iter().find(|r| r.theta == 0.2 && r.method == "finite").unwrap();
        assert!(low.success_fraction < 1.0);
        let full = rows.iter().find(|r| r.theta == 1.0 && r.method == "finite").unwrap();
        assert_eq!(full.success_fraction, 1.0);
        assert_eq!(full.m, 2 * 6 * 2);
    }
}
