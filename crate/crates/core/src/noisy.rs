//! Sensing with corrupted measurements.
//!
//! The inner matrix `A''` (the noiseless scheme, `2bs` rows) is padded with
//! zero rows to `A'` and then protected by an outer Reed–Solomon code: the
//! rows of `A'` are grouped `u` at a time into symbols of F_{q^u}, encoded,
//! and split back into F_q. The composed matrix is `A = G A'` where `G` is
//! the outer generator written over F_q.
//!
//! Noise budgets are stated in outer symbols: a block of `u` consecutive
//! measurements counts once no matter how many of its entries are hit.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::field::{Field, FieldError};
use crate::lifting::{LiftError, LiftSpec};
use crate::matrix::{FieldMatrix, FieldVector, MatrixError};
use crate::rscode::{RsCode, RsError};
use crate::sensing::{SensingError, SensingScheme, SparseSignal};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NoisyError {
    #[error("argument {0} outside the open unit interval")]
    DomainError(f64),
    #[error("infeasible rate: {0}")]
    InfeasibleRate(String),
    #[error("no outer field over F_{q} holds a code of the required length")]
    OuterFieldTooSmall { q: u32 },
    #[error("outer decoding failed: {0}")]
    OuterDecodeFailure(String),
    #[error("invalid noise parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Sensing(#[from] SensingError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Lift(#[from] LiftError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Code(#[from] RsError),
}

/// Measurement noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseModel {
    None,
    /// Each symbol is independently replaced by `v + e`, `e` uniform over the
    /// nonzero elements, with probability `lambda`.
    QSymmetric { lambda: f64 },
    /// An adversary corrupts at most a `delta` fraction of outer symbols.
    WorstCase { delta: f64 },
}

impl NoiseModel {
    pub fn name(&self) -> &'static str {
        match self {
            NoiseModel::None => "none",
            NoiseModel::QSymmetric { .. } => "qsymmetric",
            NoiseModel::WorstCase { .. } => "worstcase",
        }
    }

    pub fn parameter(&self) -> f64 {
        match *self {
            NoiseModel::None => 0.0,
            NoiseModel::QSymmetric { lambda } => lambda,
            NoiseModel::WorstCase { delta } => delta,
        }
    }
}

/// q-ary entropy `-x log_q x - (1-x) log_q (1-x) + x log_q (q-1)`.
pub fn h_q(x: f64, q: u64) -> Result<f64, NoisyError> {
    if !(x > 0.0 && x < 1.0) {
        return Err(NoisyError::DomainError(x));
    }
    let ln_q = (q as f64).ln();
    Ok((-x * x.ln() - (1.0 - x) * (1.0 - x).ln() + x * ((q - 1) as f64).ln()) / ln_q)
}

/// Where to put adversarial corruptions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AdversaryStrategy {
    /// Uniformly random outer positions.
    Random,
    /// A run of consecutive outer positions at a random offset.
    Burst,
    /// The leading outer positions, which carry the rows of `A''`.
    Targeted,
}

impl AdversaryStrategy {
    pub const ALL: [AdversaryStrategy; 3] = [Self::Random, Self::Burst, Self::Targeted];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Random => "random",
            Self::Burst => "burst",
            Self::Targeted => "targeted",
        }
    }
}

/// Options for [`NoisyScheme::build`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoisyOptions {
    /// For q-ary symmetric noise, the outer rate is `(1 - H_q(lambda)) / rate_margin`.
    pub rate_margin: f64,
}

impl Default for NoisyOptions {
    fn default() -> Self {
        Self { rate_margin: 1.5 }
    }
}

#[derive(Clone, Debug)]
pub struct NoisyScheme {
    inner: SensingScheme,
    model: NoiseModel,
    outer_lift: LiftSpec,
    outer: RsCode,
    generator: FieldMatrix,
    padded: FieldMatrix,
    matrix: FieldMatrix,
    layout: Vec<usize>,
}

impl NoisyScheme {
    pub fn build(q: u64, n: usize, b: usize, model: NoiseModel, opts: NoisyOptions) -> Result<Self, NoisyError> {
        let inner = SensingScheme::build(q, n, b)?;
        Self::from_inner(inner, model, opts)
    }

    pub fn from_inner(inner: SensingScheme, model: NoiseModel, opts: NoisyOptions) -> Result<Self, NoisyError> {
        let base = inner.base_field().clone();
        let (u, k, t) = outer_parameters(&base, inner.measurements(), model, opts)?;
        let outer_lift = LiftSpec::new(&base, u)?;
        let outer = RsCode::new(outer_lift.lifted(), k + 2 * t, 2 * t)?;
        Self::assemble(inner, model, outer_lift, outer)
    }

    /// Builds around a given outer code, as when reading a scheme file.
    pub fn with_outer(
        inner: SensingScheme,
        model: NoiseModel,
        outer_lift: LiftSpec,
        outer: RsCode,
    ) -> Result<Self, NoisyError> {
        if outer.field() != outer_lift.lifted() || outer_lift.base() != inner.base_field() {
            return Err(NoisyError::Matrix(MatrixError::FieldMismatch));
        }
        let needed = inner.measurements().div_ceil(outer_lift.degree() as usize);
        if outer.dimension() < needed {
            return Err(NoisyError::InvalidParameter(format!(
                "outer message length {} below {needed}",
                outer.dimension()
            )));
        }
        Self::assemble(inner, model, outer_lift, outer)
    }

    fn assemble(inner: SensingScheme, model: NoiseModel, outer_lift: LiftSpec, outer: RsCode) -> Result<Self, NoisyError> {
        let base = inner.base_field().clone();
        let u = outer_lift.degree() as usize;
        let m2 = inner.measurements();
        let m_prime = outer.dimension() * u;
        let m = outer.len() * u;
        let n = inner.dimension();

        let padded = FieldMatrix::from_fn(&base, m_prime, n, |r, c| {
            if r < m2 {
                inner.matrix().get(r, c)
            } else {
                0
            }
        });
        let layout: Vec<usize> = (0..m2).collect();

        let gen = outer.generator_matrix();
        let mut generator = FieldMatrix::zeros(&base, m, m_prime);
        for i in 0..m_prime {
            let mut unit = vec![0u32; m_prime];
            unit[i] = 1;
            let col = encode_base(&outer_lift, &gen, &unit)?;
            for (r, v) in col.into_iter().enumerate() {
                generator.set(r, i, v);
            }
        }
        let matrix = generator.mul(&padded)?;

        for j in 0..n {
            let direct = encode_base(&outer_lift, &gen, &padded.column(j))?;
            if direct != matrix.column(j) {
                return Err(SensingError::InconsistentScheme(format!(
                    "column {j} of the composed matrix disagrees with direct encoding"
                ))
                .into());
            }
        }

        Ok(Self {
            inner,
            model,
            outer_lift,
            outer,
            generator,
            padded,
            matrix,
            layout,
        })
    }

    pub fn inner(&self) -> &SensingScheme {
        &self.inner
    }

    pub fn model(&self) -> NoiseModel {
        self.model
    }

    pub fn outer_lift(&self) -> &LiftSpec {
        &self.outer_lift
    }

    pub fn outer(&self) -> &RsCode {
        &self.outer
    }

    /// `G` over F_q, `m x m'`.
    pub fn generator(&self) -> &FieldMatrix {
        &self.generator
    }

    /// `A'`: the inner matrix followed by zero rows.
    pub fn padded(&self) -> &FieldMatrix {
        &self.padded
    }

    /// The composed `m x n` sensing matrix.
    pub fn matrix(&self) -> &FieldMatrix {
        &self.matrix
    }

    /// Row `i` of `A''` sits at row `layout()[i]` of `A'`.
    pub fn layout(&self) -> &[usize] {
        &self.layout
    }

    pub fn measurements(&self) -> usize {
        self.matrix.rows()
    }

    /// Outer symbols per codeword.
    pub fn outer_len(&self) -> usize {
        self.outer.len()
    }

    /// Base symbols per outer symbol.
    pub fn symbol_width(&self) -> usize {
        self.outer_lift.degree() as usize
    }

    /// Corrupted outer symbols the decoder always corrects.
    pub fn radius(&self) -> usize {
        self.outer.radius()
    }

    /// Corrupted outer symbols the adversary may use, `floor(delta N)`.
    pub fn adversary_budget(&self) -> usize {
        match self.model {
            NoiseModel::WorstCase { delta } => (delta * self.outer_len() as f64).floor() as usize,
            _ => 0,
        }
    }

    /// Noiseless `A x`.
    pub fn measure(&self, x: &SparseSignal) -> Result<FieldVector, NoisyError> {
        if x.dimension() != self.inner.dimension() {
            return Err(SensingError::DimensionMismatch {
                expected: self.inner.dimension(),
                actual: x.dimension(),
            }
            .into());
        }
        let f = self.inner.base_field();
        let mut y = vec![0u32; self.measurements()];
        for (j, v) in x.iter() {
            if !f.contains(v) {
                return Err(FieldError::OutOfRange {
                    value: v as u64,
                    order: f.order(),
                }
                .into());
            }
            for (r, yr) in y.iter_mut().enumerate() {
                *yr = f.add(*yr, f.mul(v, self.matrix.get(r, j)));
            }
        }
        Ok(FieldVector::from_raw(f, y))
    }

    /// `A x + e` with `e` drawn from `noise` using a generator seeded by `seed`.
    pub fn measure_noisy(&self, x: &SparseSignal, noise: &NoiseModel, seed: u64) -> Result<FieldVector, NoisyError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = self.sample_noise(noise, &mut rng)?;
        Ok(self.measure(x)?.add(&e)?)
    }

    /// Draws a noise vector. Worst-case noise uses random placement at the
    /// full adversary budget.
    pub fn sample_noise<R: Rng + ?Sized>(&self, noise: &NoiseModel, rng: &mut R) -> Result<FieldVector, NoisyError> {
        let f = self.inner.base_field();
        let m = self.measurements();
        match *noise {
            NoiseModel::None => Ok(FieldVector::zeros(f, m)),
            NoiseModel::QSymmetric { lambda } => {
                if !(0.0..=1.0).contains(&lambda) {
                    return Err(NoisyError::InvalidParameter(format!("lambda = {lambda}")));
                }
                let q = f.order();
                let data = (0..m)
                    .map(|_| if rng.random_bool(lambda) { rng.random_range(1..q) } else { 0 })
                    .collect();
                Ok(FieldVector::from_raw(f, data))
            }
            NoiseModel::WorstCase { delta } => {
                if !(0.0..0.5).contains(&delta) {
                    return Err(NoisyError::InvalidParameter(format!("delta = {delta}")));
                }
                let w = (delta * self.outer_len() as f64).floor() as usize;
                Ok(self.adversarial_noise(AdversaryStrategy::Random, w, rng))
            }
        }
    }

    /// Noise hitting exactly `weight` outer symbols, each with a random
    /// nonzero block of `u` base symbols.
    pub fn adversarial_noise<R: Rng + ?Sized>(&self, strategy: AdversaryStrategy, weight: usize, rng: &mut R) -> FieldVector {
        let big_n = self.outer_len();
        let weight = weight.min(big_n);
        let positions: Vec<usize> = match strategy {
            AdversaryStrategy::Random => {
                let mut p = sample(rng, big_n, weight).into_vec();
                p.sort_unstable();
                p
            }
            AdversaryStrategy::Burst => {
                let start = rng.random_range(0..=big_n - weight);
                (start..start + weight).collect()
            }
            AdversaryStrategy::Targeted => (0..weight).collect(),
        };
        let mut e = vec![0u32; self.measurements()];
        for p in positions {
            self.corrupt_symbol(&mut e, p, rng);
        }
        FieldVector::from_raw(self.inner.base_field(), e)
    }

    /// Writes a random nonzero block into outer position `pos`.
    fn corrupt_symbol<R: Rng + ?Sized>(&self, e: &mut [u32], pos: usize, rng: &mut R) {
        let u = self.symbol_width();
        let q = self.inner.base_field().order();
        let block = &mut e[pos * u..(pos + 1) * u];
        loop {
            for v in block.iter_mut() {
                *v = rng.random_range(0..q);
            }
            if block.iter().any(|&v| v != 0) {
                break;
            }
        }
    }

    /// Number of outer symbols touched by a base noise vector.
    pub fn outer_weight(&self, noise: &FieldVector) -> usize {
        noise
            .as_slice()
            .chunks(self.symbol_width())
            .filter(|b| b.iter().any(|&v| v != 0))
            .count()
    }

    /// Outer decode, then inner recovery.
    pub fn recover_noisy(&self, y: &FieldVector) -> Result<SparseSignal, NoisyError> {
        if y.len() != self.measurements() {
            return Err(SensingError::DimensionMismatch {
                expected: self.measurements(),
                actual: y.len(),
            }
            .into());
        }
        let lifted = self.outer_lift.lift_vector(y)?;
        let message = self
            .outer
            .codeword_decode(&lifted)
            .map_err(|e| NoisyError::OuterDecodeFailure(e.to_string()))?;
        let a_prime_x = self.outer_lift.unlift_vector(&message)?;
        let m2 = self.inner.measurements();
        if a_prime_x.as_slice()[m2..].iter().any(|&v| v != 0) {
            return Err(NoisyError::OuterDecodeFailure(
                "decoded message has nonzero padding rows".into(),
            ));
        }
        let inner_y: Vec<u32> = self.layout.iter().map(|&r| a_prime_x.get(r)).collect();
        let inner_y = FieldVector::from_raw(self.inner.base_field(), inner_y);
        Ok(self.inner.recover(&inner_y)?)
    }
}

/// Encodes a base-field message of `K u` symbols into `N u` symbols.
fn encode_base(lift: &LiftSpec, gen: &FieldMatrix, msg: &[u32]) -> Result<Vec<u32>, NoisyError> {
    let f = lift.lifted();
    let lifted = lift.lift_vector(&FieldVector::from_raw(lift.base(), msg.to_vec()))?;
    let mut word = vec![0u32; gen.cols()];
    for (i, &mi) in lifted.as_slice().iter().enumerate() {
        if mi == 0 {
            continue;
        }
        for (j, w) in word.iter_mut().enumerate() {
            *w = f.add(*w, f.mul(mi, gen.get(i, j)));
        }
    }
    Ok(lift.unlift_vector(&FieldVector::from_raw(f, word))?.into_inner())
}

/// Chooses `(u, K, t)`: symbol width, outer message length and outer radius.
fn outer_parameters(
    base: &Field,
    inner_rows: usize,
    model: NoiseModel,
    opts: NoisyOptions,
) -> Result<(u32, usize, usize), NoisyError> {
    let q = base.order() as u64;
    // Budgets count outer symbols over F_{q^u}, whose alphabet bound tends to 1/2.
    let max_delta = 0.5;
    let rate = match model {
        NoiseModel::QSymmetric { lambda } => {
            if !(0.0..1.0 - 1.0 / q as f64).contains(&lambda) {
                return Err(NoisyError::InvalidParameter(format!(
                    "lambda = {lambda} outside [0, 1 - 1/q)"
                )));
            }
            let h = if lambda == 0.0 { 0.0 } else { h_q(lambda, q)? };
            if opts.rate_margin <= 1.0 || h >= 1.0 {
                return Err(NoisyError::InfeasibleRate(format!(
                    "outer rate {:.4} is not below capacity {:.4}",
                    (1.0 - h) / opts.rate_margin.max(f64::MIN_POSITIVE),
                    1.0 - h
                )));
            }
            Some(opts.rate_margin / (1.0 - h))
        }
        NoiseModel::WorstCase { delta } => {
            if !(0.0..max_delta).contains(&delta) {
                return Err(NoisyError::InvalidParameter(format!(
                    "delta = {delta} outside [0, {max_delta})"
                )));
            }
            None
        }
        NoiseModel::None => None,
    };

    let mut u = 1u32;
    let mut size = q as u128;
    while size <= 1 << 24 {
        let k = inner_rows.div_ceil(u as usize);
        let t = match (model, rate) {
            (_, Some(c)) => {
                let total = (c * k as f64).ceil() as usize;
                (total - k) / 2
            }
            (NoiseModel::WorstCase { delta }, None) => {
                let mut t = 0usize;
                while (2 * t + 1) as f64 <= 2.0 * delta * (k + 2 * t) as f64 {
                    t += 1;
                }
                t
            }
            _ => 0,
        };
        if ((k + 2 * t) as u128) < size {
            return Ok((u, k, t));
        }
        u += 1;
        size *= q as u128;
    }
    Err(NoisyError::OuterFieldTooSmall { q: q as u32 })
}
