//! Noiseless finite-field compressive sensing.
//!
//! The sensing matrix `A` over F_q has `m = 2 b s` rows and is chosen so
//! that its lift to F_{q^s} is the parity-check matrix of an
//! `[n, n - 2b, 2b + 1]` Reed–Solomon code. Measuring a b-sparse `x` gives
//! `y = A x`; lifting `y` yields the syndrome of `x` viewed as an error
//! pattern, and syndrome decoding returns `x` exactly.

use num_bigint::BigUint;
use thiserror::Error;

use crate::field::{prime_power, Field, FieldError};
use crate::lifting::{LiftError, LiftSpec};
use crate::matrix::{FieldMatrix, FieldVector, MatrixError};
use crate::rscode::{RsCode, RsError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SensingError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("signal dimension {n} needs a field with more than {n} elements, have {order}")]
    DimensionTooLargeForField { n: usize, order: u64 },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("recovery failed: {0}")]
    RecoveryFailure(String),
    #[error("exhaustive search over {0} candidates exceeds the limit")]
    SearchSpaceTooLarge(u128),
    #[error("no solution of weight at most {0}")]
    NoSolutionWithinWeight(usize),
    #[error("scheme is inconsistent: {0}")]
    InconsistentScheme(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Lift(#[from] LiftError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Code(#[from] RsError),
}

/// Largest candidate count `l0_oracle` will enumerate.
pub const L0_SEARCH_LIMIT: u128 = 10_000_000;

/// A sparse vector over F_q, stored as sorted support and nonzero values.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SparseSignal {
    n: usize,
    support: Vec<usize>,
    values: Vec<u32>,
}

impl SparseSignal {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            support: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Builds from `(index, value)` pairs; zero values are dropped.
    pub fn from_pairs(
        n: usize,
        pairs: impl IntoIterator<Item = (usize, u32)>,
    ) -> Result<Self, SensingError> {
        let mut pairs: Vec<(usize, u32)> = pairs.into_iter().filter(|&(_, v)| v != 0).collect();
        pairs.sort_unstable_by_key(|&(i, _)| i);
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(SensingError::InvalidParameters("duplicate support index".into()));
        }
        if let Some(&(i, _)) = pairs.last() {
            if i >= n {
                return Err(SensingError::InvalidParameters(format!(
                    "index {i} outside dimension {n}"
                )));
            }
        }
        let (support, values) = pairs.into_iter().unzip();
        Ok(Self { n, support, values })
    }

    pub fn from_dense(dense: &[u32]) -> Self {
        let (support, values) = dense
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(i, &v)| (i, v))
            .unzip();
        Self {
            n: dense.len(),
            support,
            values,
        }
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    /// Number of nonzero entries.
    pub fn weight(&self) -> usize {
        self.support.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.support.iter().copied().zip(self.values.iter().copied())
    }

    pub fn to_dense(&self) -> Vec<u32> {
        let mut out = vec![0; self.n];
        for (i, v) in self.iter() {
            out[i] = v;
        }
        out
    }
}

/// Smallest `s` with `q^s > n`, so that `n` distinct nonzero evaluation
/// points exist in F_{q^s}.
pub fn min_lift_degree(q: u64, n: usize) -> u32 {
    let mut s = 1;
    let mut size = q as u128;
    while size <= n as u128 {
        size *= q as u128;
        s += 1;
    }
    s
}

/// Options for [`SensingScheme::build_with`].
#[derive(Debug, Clone, Copy, Default)]
pub struct SchemeOptions {
    /// Lift degree to use instead of the minimal one.
    pub lift_degree: Option<u32>,
}

/// A constructed sensing matrix together with what is needed to decode.
#[derive(Clone, Debug)]
pub struct SensingScheme {
    lift: LiftSpec,
    code: RsCode,
    matrix: FieldMatrix,
    b: usize,
    n: usize,
}

impl SensingScheme {
    /// Deterministic scheme for alphabet size `q`, dimension `n` and sparsity
    /// budget `b`, using the minimal lift degree.
    pub fn build(q: u64, n: usize, b: usize) -> Result<Self, SensingError> {
        Self::build_with(q, n, b, SchemeOptions::default())
    }

    pub fn build_with(q: u64, n: usize, b: usize, opts: SchemeOptions) -> Result<Self, SensingError> {
        let (p, k) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        if b == 0 || n <= 2 * b {
            return Err(SensingError::InvalidParameters(format!(
                "need n > 2b >= 2, got n = {n}, b = {b}"
            )));
        }
        let s = opts.lift_degree.unwrap_or_else(|| min_lift_degree(q, n));
        if s == 0 {
            return Err(SensingError::InvalidParameters("lift degree must be positive".into()));
        }
        let order = (q as u128).checked_pow(s).unwrap_or(u128::MAX);
        if order <= n as u128 {
            return Err(SensingError::DimensionTooLargeForField {
                n,
                order: order.min(u64::MAX as u128) as u64,
            });
        }
        let base = Field::build(p as u64, k, None)?;
        let lift = LiftSpec::new(&base, s)?;
        Self::from_lift(lift, n, b)
    }

    /// Builds the scheme over an existing tower.
    pub fn from_lift(lift: LiftSpec, n: usize, b: usize) -> Result<Self, SensingError> {
        if b == 0 || n <= 2 * b {
            return Err(SensingError::InvalidParameters(format!(
                "need n > 2b >= 2, got n = {n}, b = {b}"
            )));
        }
        let code = RsCode::new(lift.lifted(), n, 2 * b).map_err(|e| match e {
            RsError::LengthExceedsField { .. } => SensingError::DimensionTooLargeForField {
                n,
                order: lift.lifted().order() as u64,
            },
            other => other.into(),
        })?;
        let matrix = lift.unlift_matrix(&code.parity_check_matrix())?;
        Ok(Self {
            lift,
            code,
            matrix,
            b,
            n,
        })
    }

    /// Reassembles a scheme from a stored matrix, checking that it lifts to
    /// the Reed–Solomon parity check.
    pub fn from_matrix(lift: LiftSpec, n: usize, b: usize, matrix: FieldMatrix) -> Result<Self, SensingError> {
        let scheme = Self::from_lift(lift, n, b)?;
        if matrix != scheme.matrix {
            return Err(SensingError::InconsistentScheme(
                "matrix does not lift to the Reed-Solomon parity check".into(),
            ));
        }
        Ok(scheme)
    }

    pub fn lift(&self) -> &LiftSpec {
        &self.lift
    }

    pub fn code(&self) -> &RsCode {
        &self.code
    }

    /// The sensing matrix over F_q.
    pub fn matrix(&self) -> &FieldMatrix {
        &self.matrix
    }

    pub fn base_field(&self) -> &Field {
        self.lift.base()
    }

    /// Sparsity budget.
    pub fn sparsity(&self) -> usize {
        self.b
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    /// Number of measurements `m = 2 b s`.
    pub fn measurements(&self) -> usize {
        self.matrix.rows()
    }

    pub fn lift_degree(&self) -> u32 {
        self.lift.degree()
    }

    /// `y = A x`, touching only the columns in the support of `x`.
    pub fn measure(&self, x: &SparseSignal) -> Result<FieldVector, SensingError> {
        if x.dimension() != self.n {
            return Err(SensingError::DimensionMismatch {
                expected: self.n,
                actual: x.dimension(),
            });
        }
        let f = self.base_field();
        if let Some(&v) = x.values().iter().find(|&&v| !f.contains(v)) {
            return Err(FieldError::OutOfRange {
                value: v as u64,
                order: f.order(),
            }
            .into());
        }
        let m = self.measurements();
        let mut y = vec![0u32; m];
        for (j, v) in x.iter() {
            for (r, yr) in y.iter_mut().enumerate() {
                *yr = f.add(*yr, f.mul(v, self.matrix.get(r, j)));
            }
        }
        Ok(FieldVector::from_raw(f, y))
    }

    /// Recovers the unique `x` with `wt(x) <= b` and `A x = y`.
    pub fn recover(&self, y: &FieldVector) -> Result<SparseSignal, SensingError> {
        if y.len() != self.measurements() {
            return Err(SensingError::DimensionMismatch {
                expected: self.measurements(),
                actual: y.len(),
            });
        }
        let syndrome = self.lift.lift_vector(y)?;
        let support = self
            .code
            .decode_sparse(syndrome.as_slice())
            .map_err(|e| SensingError::RecoveryFailure(e.to_string()))?;
        let mut pairs = Vec::with_capacity(support.len());
        for (j, z) in support {
            let v = self.lift.unembed(z).ok_or_else(|| {
                SensingError::RecoveryFailure(format!("decoded entry {j} lies outside the base field"))
            })?;
            pairs.push((j, v));
        }
        let x = SparseSignal::from_pairs(self.n, pairs)?;
        if x.weight() > self.b || &self.measure(&x)? != y {
            return Err(SensingError::RecoveryFailure(
                "re-measured estimate does not match the measurements".into(),
            ));
        }
        Ok(x)
    }
}

/// Exhaustive minimum-weight solution of `A x = y`.
///
/// Candidates are visited by increasing weight, then lexicographic support,
/// then lexicographic nonzero values; the first solution is returned.
pub fn l0_oracle(a: &FieldMatrix, y: &FieldVector, max_weight: usize) -> Result<SparseSignal, SensingError> {
    if a.field() != y.field() {
        return Err(MatrixError::FieldMismatch.into());
    }
    if y.len() != a.rows() {
        return Err(SensingError::DimensionMismatch {
            expected: a.rows(),
            actual: y.len(),
        });
    }
    let f = a.field();
    let n = a.cols();
    let q = f.order() as u128;
    let count: u128 = (0..=max_weight.min(n))
        .map(|w| binomial(n as u64, w as u64) * (q - 1).pow(w as u32))
        .sum();
    if count > L0_SEARCH_LIMIT {
        return Err(SensingError::SearchSpaceTooLarge(count));
    }
    if y.is_zero() {
        return Ok(SparseSignal::zero(n));
    }
    let columns: Vec<Vec<u32>> = (0..n).map(|j| a.column(j)).collect();
    let target = y.as_slice();

    for w in 1..=max_weight.min(n) {
        let mut support: Vec<usize> = (0..w).collect();
        loop {
            let mut values = vec![1u32; w];
            loop {
                let mut acc = vec![0u32; a.rows()];
                for (&j, &v) in support.iter().zip(&values) {
                    for (r, ar) in acc.iter_mut().enumerate() {
                        *ar = f.add(*ar, f.mul(v, columns[j][r]));
                    }
                }
                if acc == target {
                    return SparseSignal::from_pairs(n, support.iter().copied().zip(values));
                }
                if !next_values(&mut values, f.order()) {
                    break;
                }
            }
            if !next_combination(&mut support, n) {
                break;
            }
        }
    }
    Err(SensingError::NoSolutionWithinWeight(max_weight))
}

/// Odometer over nonzero values, last position fastest.
fn next_values(values: &mut [u32], q: u32) -> bool {
    for v in values.iter_mut().rev() {
        if *v + 1 < q {
            *v += 1;
            return true;
        }
        *v = 1;
    }
    false
}

/// Next k-subset of `0..n` in lexicographic order.
fn next_combination(comb: &mut [usize], n: usize) -> bool {
    let k = comb.len();
    for i in (0..k).rev() {
        if comb[i] < n - k + i {
            comb[i] += 1;
            for j in i + 1..k {
                comb[j] = comb[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Measurement and storage accounting for given `(q, n, b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleComplexity {
    /// `2 b ceil(log_q n)`.
    pub m_finite: u64,
    /// `log2 sum_{j<=b} C(n, j) (q-1)^j`, the counting lower bound.
    pub lower_bound_bits: f64,
    /// `m_finite * ceil(log2 q)`.
    pub storage_bits_finite: u64,
}

impl SampleComplexity {
    /// Bits for storing the same number of real measurements at `j` bits each.
    pub fn storage_bits_real(&self, j: u64) -> u64 {
        j * self.m_finite
    }
}

/// `ceil(log_q n)` in exact integer arithmetic (at least 1).
pub fn ceil_log(q: u64, n: u64) -> u32 {
    let mut s = 1;
    let mut size = q as u128;
    while size < n as u128 {
        size *= q as u128;
        s += 1;
    }
    s
}

pub fn sample_complexity(q: u64, n: u64, b: u64) -> SampleComplexity {
    let m_finite = 2 * b * ceil_log(q, n) as u64;
    let bits_per_symbol = 64 - (q - 1).leading_zeros() as u64;

    let mut total = BigUint::from(0u32);
    let mut binom = BigUint::from(1u32);
    let mut weight = BigUint::from(1u32);
    for j in 0..=b.min(n) {
        if j > 0 {
            binom = binom * (n - j + 1) / j;
            weight *= q - 1;
        }
        total += &binom * &weight;
    }
    SampleComplexity {
        m_finite,
        lower_bound_bits: log2_big(&total),
        storage_bits_finite: m_finite * bits_per_symbol,
    }
}

fn log2_big(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 53 {
        let x: u64 = v.iter_u64_digits().next().unwrap_or(0);
        return (x as f64).log2();
    }
    let shift = bits - 53;
    let top: u64 = (v >> shift).iter_u64_digits().next().unwrap_or(0);
    (top as f64).log2() + shift as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn experiment_scale_dimensions() {
        let s = SensingScheme::build(256, 1024, 4).unwrap();
        assert_eq!(s.lift_degree(), 2);
        assert_eq!(s.measurements(), 16);
        let s = SensingScheme::build(1024, 1000, 60).unwrap();
        assert_eq!(s.lift_degree(), 1);
        assert_eq!(s.measurements(), 120);
    }

    #[test]
    fn binary_seven() {
        let s = SensingScheme::build(2, 7, 1).unwrap();
        assert_eq!(s.lift_degree(), 3);
        assert_eq!(s.measurements(), 6);
        assert_eq!(
            s.lift().lift_matrix(s.matrix()).unwrap(),
            s.code().parity_check_matrix()
        );
        for j in 0..7 {
            let x = SparseSignal::from_pairs(7, [(j, 1)]).unwrap();
            let y = s.measure(&x).unwrap();
            assert_eq!(y.as_slice(), s.matrix().column(j).as_slice());
            assert_eq!(s.recover(&y).unwrap(), x);
        }
    }

    #[test]
    fn zero_round_trip() {
        let s = SensingScheme::build(2, 7, 1).unwrap();
        let y = s.measure(&SparseSignal::zero(7)).unwrap();
        assert!(y.is_zero());
        assert_eq!(s.recover(&y).unwrap(), SparseSignal::zero(7));
    }

    #[test]
    fn parameter_errors() {
        assert!(matches!(
            SensingScheme::build(2, 4, 2),
            Err(SensingError::InvalidParameters(_))
        ));
        assert!(matches!(
            SensingScheme::build_with(2, 9, 1, SchemeOptions { lift_degree: Some(3) }),
            Err(SensingError::DimensionTooLargeForField { .. })
        ));
        assert!(matches!(SensingScheme::build(6, 9, 1), Err(SensingError::Field(_))));
        let s = SensingScheme::build(2, 7, 1).unwrap();
        assert!(matches!(
            s.measure(&SparseSignal::zero(8)),
            Err(SensingError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn lift_degree_override_upward() {
        let s = SensingScheme::build_with(4, 10, 2, SchemeOptions { lift_degree: Some(3) }).unwrap();
        assert_eq!(s.measurements(), 12);
        let x = SparseSignal::from_pairs(10, [(1, 3), (8, 2)]).unwrap();
        assert_eq!(s.recover(&s.measure(&x).unwrap()).unwrap(), x);
    }

    #[test]
    fn oracle_zero_and_limits() {
        let s = SensingScheme::build(2, 7, 1).unwrap();
        let y = FieldVector::zeros(s.base_field(), 6);
        assert_eq!(l0_oracle(s.matrix(), &y, 1).unwrap(), SparseSignal::zero(7));
        let big = SensingScheme::build(256, 1024, 4).unwrap();
        let y = FieldVector::zeros(big.base_field(), big.measurements());
        assert!(matches!(
            l0_oracle(big.matrix(), &y, 4),
            Err(SensingError::SearchSpaceTooLarge(_))
        ));
    }

    #[test]
    fn accounting() {
        let c = sample_complexity(256, 1024, 4);
        assert_eq!(c.m_finite, 16);
        assert_eq!(c.storage_bits_finite, 128);
        assert_eq!(sample_complexity(2048, 2048, 7).m_finite, 14);
        assert_eq!(sample_complexity(2, 2, 0).lower_bound_bits, 0.0);
        // |S| = 1 + 4 = 5 for n = 4, q = 2, b = 1
        assert!((sample_complexity(2, 4, 1).lower_bound_bits - 5f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn combination_order() {
        let mut c = vec![0, 1];
        let mut all = vec![c.clone()];
        while next_combination(&mut c, 4) {
            all.push(c.clone());
        }
        assert_eq!(all, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
    }
}
