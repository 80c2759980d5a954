//! Tracking a vector time series with sparse changes.
//!
//! The series is quantized to `q` levels, successive frames are differenced
//! in the bin-index domain, and each difference is compressed with either
//! the finite-field scheme or the real Gaussian baseline. Estimates are
//! accumulated from the first frame.

use std::io::{Read, Write};
use std::path::Path;

use nalgebra::DVector;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::baseline::{omp_recover, RealSensing};
use crate::sensing::{SensingError, SensingScheme, SparseSignal};

#[derive(Debug, Error)]
pub enum TrackingError {
    #[error("series is constant, quantization bins would have zero width")]
    ConstantSeries,
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("non-finite value at frame {frame}, entry {entry}")]
    NonFinite { frame: usize, entry: usize },
    #[error("row {row} has {found} cells, expected {expected}")]
    RaggedRows { row: usize, expected: usize, found: usize },
    #[error("cell at row {row}, column {col} is not a number: {content:?}")]
    NonNumericCell { row: usize, col: usize, content: String },
    #[error("sparsity budget {budget} is below the largest change weight {b_max}")]
    BudgetTooSmall { budget: usize, b_max: usize },
    #[error(transparent)]
    Sensing(#[from] SensingError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// How quantization indices map back to real values.
#[derive(Debug, Clone, PartialEq)]
pub enum ValueMap {
    /// Uniform bins of `width` starting at `low`; index `i` maps to its center.
    Bins { low: f64, width: f64 },
    /// Index `i` maps to the `i`-th smallest distinct value of the series.
    Discrete(Vec<f64>),
}

impl ValueMap {
    pub fn value(&self, idx: u32) -> f64 {
        match self {
            ValueMap::Bins { low, width } => low + (idx as f64 + 0.5) * width,
            ValueMap::Discrete(v) => v[idx as usize],
        }
    }
}

/// A quantized series with its per-step sparse changes.
#[derive(Debug, Clone)]
pub struct TrackedSeries {
    q: u32,
    map: ValueMap,
    raw: Vec<Vec<f64>>,
    frames: Vec<Vec<u32>>,
    diffs: Vec<SparseSignal>,
    b_max: usize,
}

impl TrackedSeries {
    pub fn alphabet_size(&self) -> u32 {
        self.q
    }

    pub fn value_map(&self) -> &ValueMap {
        &self.map
    }

    pub fn dimension(&self) -> usize {
        self.frames[0].len()
    }

    /// Number of time steps.
    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn raw(&self) -> &[Vec<f64>] {
        &self.raw
    }

    /// Bin indices `z_1..z_t`.
    pub fn frames(&self) -> &[Vec<u32>] {
        &self.frames
    }

    /// `e_i = z_{i+1} - z_i mod q`.
    pub fn diffs(&self) -> &[SparseSignal] {
        &self.diffs
    }

    /// Largest change weight.
    pub fn b_max(&self) -> usize {
        self.b_max
    }

    pub fn dequantize(&self, frame: &[u32]) -> Vec<f64> {
        frame.iter().map(|&i| self.map.value(i)).collect()
    }

    /// `||x_i - deq(z_i)|| / sqrt(n)` for every step.
    pub fn quant_floor(&self) -> Vec<f64> {
        self.raw
            .iter()
            .zip(&self.frames)
            .map(|(x, z)| rms_distance(x, &self.dequantize(z)))
            .collect()
    }
}

/// Quantizes with the global range of the series.
///
/// A series with at most `q` distinct values is mapped losslessly, each
/// distinct value to its rank, so 0/1 data keeps its values.
pub fn quantize(series: &[Vec<f64>], q: u32) -> Result<TrackedSeries, TrackingError> {
    check_series(series, q)?;
    let mut distinct: Vec<f64> = series.iter().flatten().copied().collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() == 1 {
        return Err(TrackingError::ConstantSeries);
    }
    if distinct.len() <= q as usize {
        let frames = series
            .iter()
            .map(|x| {
                x.iter()
                    .map(|v| distinct.binary_search_by(|d| d.total_cmp(v)).unwrap() as u32)
                    .collect()
            })
            .collect();
        return Ok(assemble(q, ValueMap::Discrete(distinct), series, frames));
    }
    quantize_range(series, q, distinct[0], *distinct.last().unwrap())
}

/// Quantizes with a caller-supplied range `[low, high]`, for streaming use.
/// Values outside the range fall in the end bins.
pub fn quantize_range(series: &[Vec<f64>], q: u32, low: f64, high: f64) -> Result<TrackedSeries, TrackingError> {
    check_series(series, q)?;
    if !(high > low) || !low.is_finite() || !high.is_finite() {
        return Err(TrackingError::ConstantSeries);
    }
    let width = (high - low) / q as f64;
    let frames = series
        .iter()
        .map(|x| {
            x.iter()
                .map(|&v| (((v - low) / width).floor().max(0.0) as u32).min(q - 1))
                .collect()
        })
        .collect();
    Ok(assemble(q, ValueMap::Bins { low, width }, series, frames))
}

fn check_series(series: &[Vec<f64>], q: u32) -> Result<(), TrackingError> {
    if q < 2 {
        return Err(TrackingError::InvalidParameters(format!("q = {q}")));
    }
    let Some(first) = series.first() else {
        return Err(TrackingError::InvalidParameters("empty series".into()));
    };
    if first.is_empty() {
        return Err(TrackingError::InvalidParameters("zero-dimensional frames".into()));
    }
    for (frame, x) in series.iter().enumerate() {
        if x.len() != first.len() {
            return Err(TrackingError::RaggedRows {
                row: frame,
                expected: first.len(),
                found: x.len(),
            });
        }
        if let Some(entry) = x.iter().position(|v| !v.is_finite()) {
            return Err(TrackingError::NonFinite { frame, entry });
        }
    }
    Ok(())
}

fn assemble(q: u32, map: ValueMap, series: &[Vec<f64>], frames: Vec<Vec<u32>>) -> TrackedSeries {
    let (diffs, b_max) = diff_encode(&frames, q);
    TrackedSeries {
        q,
        map,
        raw: series.to_vec(),
        frames,
        diffs,
        b_max,
    }
}

/// Differences of successive frames reduced mod `q`, with the largest weight.
pub fn diff_encode(frames: &[Vec<u32>], q: u32) -> (Vec<SparseSignal>, usize) {
    let diffs: Vec<SparseSignal> = frames
        .windows(2)
        .map(|w| {
            let n = w[0].len();
            let pairs = w[0]
                .iter()
                .zip(&w[1])
                .enumerate()
                .filter(|(_, (a, b))| a != b)
                .map(|(j, (&a, &b))| (j, (b + q - a) % q));
            SparseSignal::from_pairs(n, pairs).expect("indices are in range and distinct")
        })
        .collect();
    let b_max = diffs.iter().map(SparseSignal::weight).max().unwrap_or(0);
    (diffs, b_max)
}

/// `z + e mod q`.
pub fn apply_diff(z: &[u32], e: &SparseSignal, q: u32) -> Vec<u32> {
    let mut out = z.to_vec();
    for (j, v) in e.iter() {
        out[j] = (out[j] + v) % q;
    }
    out
}

/// Per-step estimates and errors against the raw series.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteTrace {
    pub estimates: Vec<Vec<u32>>,
    pub errors: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RealTrace {
    pub estimates: Vec<Vec<f64>>,
    pub errors: Vec<f64>,
}

/// Compresses every change with `scheme`, recovers it, and accumulates.
pub fn track_finite(series: &TrackedSeries, scheme: &SensingScheme) -> Result<FiniteTrace, TrackingError> {
    if scheme.sparsity() < series.b_max {
        return Err(TrackingError::BudgetTooSmall {
            budget: scheme.sparsity(),
            b_max: series.b_max,
        });
    }
    if scheme.base_field().order() != series.q {
        return Err(TrackingError::InvalidParameters(format!(
            "scheme alphabet {} differs from series alphabet {}",
            scheme.base_field().order(),
            series.q
        )));
    }
    let mut estimates = vec![series.frames[0].clone()];
    for e in &series.diffs {
        let e_hat = scheme.recover(&scheme.measure(e)?)?;
        let next = apply_diff(estimates.last().unwrap(), &e_hat, series.q);
        estimates.push(next);
    }
    let errors = series
        .raw
        .iter()
        .zip(&estimates)
        .map(|(x, z)| rms_distance(x, &series.dequantize(z)))
        .collect();
    Ok(FiniteTrace { estimates, errors })
}

/// Compresses the dequantized real changes with a Gaussian matrix and
/// recovers them with `b` steps of OMP. Failed recoveries contribute a zero
/// change and the error carries forward.
pub fn track_real(series: &TrackedSeries, real: &RealSensing, b: usize) -> RealTrace {
    let n = series.dimension();
    let values: Vec<Vec<f64>> = series.frames.iter().map(|z| series.dequantize(z)).collect();
    let mut estimates = vec![values[0].clone()];
    for w in values.windows(2) {
        let f = DVector::from_iterator(n, w[1].iter().zip(&w[0]).map(|(a, b)| a - b));
        let e_hat = omp_recover(real, &real.measure(&f), b).unwrap_or_else(|_| DVector::zeros(n));
        let prev = estimates.last().unwrap();
        estimates.push(prev.iter().zip(e_hat.iter()).map(|(a, d)| a + d).collect());
    }
    let errors = series
        .raw
        .iter()
        .zip(&estimates)
        .map(|(x, z)| rms_distance(x, z))
        .collect();
    RealTrace { estimates, errors }
}

pub fn rms_distance(a: &[f64], b: &[f64]) -> f64 {
    let ss: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    (ss / a.len() as f64).sqrt()
}

/// `x_1` uniform on `[-1, 1]^n`; each step adds uniform `[-1, 1]` values at
/// `b` distinct random positions.
pub fn synthetic_series(n: usize, t: usize, b: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
    let mut out = Vec::with_capacity(t);
    if t == 0 {
        return out;
    }
    out.push(x.clone());
    for _ in 1..t {
        for j in sample(&mut rng, n, b.min(n)) {
            x[j] += rng.random_range(-1.0..=1.0);
        }
        out.push(x.clone());
    }
    out
}

/// Which CSV axis is time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Orientation {
    #[default]
    RowsAreTime,
    ColumnsAreTime,
}

/// Reads a rectangular numeric CSV without a header into a `t x n` series.
pub fn ingest_csv(path: impl AsRef<Path>, orientation: Orientation) -> Result<Vec<Vec<f64>>, TrackingError> {
    ingest_reader(std::fs::File::open(path)?, orientation)
}

pub fn ingest_reader<R: Read>(reader: R, orientation: Orientation) -> Result<Vec<Vec<f64>>, TrackingError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (row, record) in rdr.records().enumerate() {
        let record = record?;
        let mut values = Vec::with_capacity(record.len());
        for (col, cell) in record.iter().enumerate() {
            match cell.parse::<f64>() {
                Ok(v) if v.is_finite() => values.push(v),
                _ => {
                    return Err(TrackingError::NonNumericCell {
                        row,
                        col,
                        content: cell.to_string(),
                    })
                }
            }
        }
        if let Some(first) = rows.first() {
            if first.len() != values.len() {
                return Err(TrackingError::RaggedRows {
                    row,
                    expected: first.len(),
                    found: values.len(),
                });
            }
        }
        rows.push(values);
    }
    if rows.is_empty() {
        return Err(TrackingError::InvalidParameters("empty file".into()));
    }
    Ok(match orientation {
        Orientation::RowsAreTime => rows,
        Orientation::ColumnsAreTime => (0..rows[0].len())
            .map(|c| rows.iter().map(|r| r[c]).collect())
            .collect(),
    })
}

/// Writes `t, err_finite, err_real, quant_floor` rows, `t` counting from 1.
pub fn write_trace<W: Write>(out: W, finite: &[f64], real: &[f64], floor: &[f64]) -> Result<(), TrackingError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "err_finite", "err_real", "quant_floor"])?;
    for (i, ((f, r), q)) in finite.iter().zip(real).zip(floor).enumerate() {
        w.write_record([(i + 1).to_string(), f.to_string(), r.to_string(), q.to_string()])?;
    }
    w.flush()?;
    Ok(())
}
