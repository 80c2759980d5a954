//! Real-valued compressive sensing for comparison: Gaussian matrices and
//! orthogonal matching pursuit.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use thiserror::Error;

use crate::trial_rng;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BaselineError {
    #[error("invalid dimensions: {0}")]
    InvalidDimensions(String),
    #[error("least-squares system on the active set is singular")]
    IllConditionedActiveSet,
}

/// Entry variance of the Gaussian sensing matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Variance {
    /// Variance `1/sqrt(m)`.
    #[default]
    InvSqrtM,
    /// Variance `1/m`.
    InvM,
}

impl Variance {
    pub fn std_dev(self, m: usize) -> f64 {
        match self {
            Variance::InvSqrtM => (m as f64).powf(-0.25),
            Variance::InvM => (m as f64).powf(-0.5),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RealSensing {
    a: DMatrix<f64>,
}

impl RealSensing {
    pub fn build(m: usize, n: usize, seed: u64) -> Result<Self, BaselineError> {
        Self::build_with(m, n, seed, Variance::default())
    }

    pub fn build_with(m: usize, n: usize, seed: u64, variance: Variance) -> Result<Self, BaselineError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::sample(m, n, variance, &mut rng)
    }

    pub fn sample<R: Rng + ?Sized>(m: usize, n: usize, variance: Variance, rng: &mut R) -> Result<Self, BaselineError> {
        if m == 0 || n == 0 {
            return Err(BaselineError::InvalidDimensions(format!("m = {m}, n = {n}")));
        }
        let normal = Normal::new(0.0, variance.std_dev(m)).expect("positive deviation");
        let a = DMatrix::from_fn(m, n, |_, _| normal.sample(rng));
        Ok(Self { a })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn rows(&self) -> usize {
        self.a.nrows()
    }

    pub fn cols(&self) -> usize {
        self.a.ncols()
    }

    pub fn measure(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.a * x
    }
}

/// Orthogonal matching pursuit: at most `b` greedy column picks, each
/// followed by a least-squares refit on the chosen columns.
pub fn omp_recover(s: &RealSensing, y: &DVector<f64>, b: usize) -> Result<DVector<f64>, BaselineError> {
    omp_with_support(s, y, b).map(|(x, _)| x)
}

/// As [`omp_recover`], also returning the selected columns in pick order.
pub fn omp_with_support(
    s: &RealSensing,
    y: &DVector<f64>,
    b: usize,
) -> Result<(DVector<f64>, Vec<usize>), BaselineError> {
    let a = &s.a;
    if y.len() != a.nrows() {
        return Err(BaselineError::InvalidDimensions(format!(
            "measurement length {} for {} rows",
            y.len(),
            a.nrows()
        )));
    }
    let n = a.ncols();
    let mut x = DVector::zeros(n);
    let mut active: Vec<usize> = Vec::new();
    let y_norm = y.norm();
    if y_norm == 0.0 {
        return Ok((x, active));
    }
    let mut residual = y.clone();
    let mut coef = DVector::zeros(0);
    let col_norms: Vec<f64> = (0..n).map(|j| a.column(j).norm()).collect();

    for _ in 0..b.min(a.nrows()) {
        if residual.norm() <= 1e-12 * y_norm {
            break;
        }
        let corr = a.tr_mul(&residual);
        let pick = (0..n)
            .filter(|j| !active.contains(j) && col_norms[*j] > 0.0)
            .max_by(|&i, &j| {
                (corr[i].abs() / col_norms[i]).total_cmp(&(corr[j].abs() / col_norms[j]))
            });
        let Some(pick) = pick else { break };
        active.push(pick);
        let sub = a.select_columns(&active);
        coef = least_squares(&sub, y)?;
        residual = y - &sub * &coef;
    }
    for (k, &j) in active.iter().enumerate() {
        x[j] = coef[k];
    }
    Ok((x, active))
}

/// Normal-equation solve with full pivoting.
pub fn least_squares(a: &DMatrix<f64>, y: &DVector<f64>) -> Result<DVector<f64>, BaselineError> {
    let gram = a.tr_mul(a);
    let rhs = a.tr_mul(y);
    let lu = gram.full_piv_lu();
    let sol = lu.solve(&rhs).ok_or(BaselineError::IllConditionedActiveSet)?;
    if sol.iter().all(|v| v.is_finite()) {
        Ok(sol)
    } else {
        Err(BaselineError::IllConditionedActiveSet)
    }
}

/// The success event `||x - x_hat||_2 / sqrt(n) < 1e-3`.
pub fn error_free(x: &DVector<f64>, x_hat: &DVector<f64>) -> bool {
    (x - x_hat).norm() / (x.len() as f64).sqrt() < 1e-3
}

/// Runs `trials` independent trials in parallel, trial `i` seeded from
/// `(seed, i)`, and returns the fraction that succeeded.
pub fn recovery_probability<F>(trials: usize, seed: u64, trial: F) -> f64
where
    F: Fn(&mut ChaCha8Rng) -> bool + Sync,
{
    if trials == 0 {
        return 0.0;
    }
    let hits = (0..trials)
        .into_par_iter()
        .filter(|&i| trial(&mut trial_rng(seed, i as u64)))
        .count();
    hits as f64 / trials as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::index::sample;

    #[test]
    fn deterministic_build() {
        let a = RealSensing::build(8, 20, 3).unwrap();
        let b = RealSensing::build(8, 20, 3).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, RealSensing::build(8, 20, 4).unwrap());
        assert!(RealSensing::build(0, 20, 3).is_err());
    }

    #[test]
    fn zero_measurements_give_zero() {
        let s = RealSensing::build(8, 20, 1).unwrap();
        let x = omp_recover(&s, &DVector::zeros(8), 3).unwrap();
        assert!(x.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn column_norms_match_variance() {
        // E||a_j||^2 = m * var
        let (m, n) = (64, 50);
        for variance in [Variance::InvSqrtM, Variance::InvM] {
            let mut total = 0.0;
            for seed in 0..100 {
                let s = RealSensing::build_with(m, n, seed, variance).unwrap();
                total += s.matrix().column_iter().map(|c| c.norm_squared()).sum::<f64>() / n as f64;
            }
            let expected = m as f64 * variance.std_dev(m).powi(2);
            assert!((total / 100.0 - expected).abs() / expected < 0.1);
        }
    }

    #[test]
    fn single_spike_support() {
        let n = 64;
        let hits = recovery_probability(200, 11, |rng| {
            let s = RealSensing::sample(8, n, Variance::InvSqrtM, rng).unwrap();
            let j = rng.random_range(0..n);
            let mut x = DVector::zeros(n);
            x[j] = 1.0;
            let (_, support) = omp_with_support(&s, &s.measure(&x), 1).unwrap();
            support == [j]
        });
        assert!(hits >= 0.95, "{hits}");
    }

    #[test]
    fn refit_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let n = 100;
        for _ in 0..20 {
            let s = RealSensing::sample(40, n, Variance::InvSqrtM, &mut rng).unwrap();
            let supp = sample(&mut rng, n, 4).into_vec();
            let mut x = DVector::zeros(n);
            for &j in &supp {
                x[j] = rng.random_range(-1.0..1.0);
            }
            let y = s.measure(&x);
            let (xh, picked) = omp_with_support(&s, &y, 6).unwrap();
            let mut sorted = picked.clone();
            sorted.sort_unstable();
            sorted.dedup();
            assert_eq!(sorted.len(), picked.len());

            let sub = s.matrix().select_columns(&picked);
            let r = &y - s.measure(&xh);
            let ortho = sub.tr_mul(&r);
            assert!(ortho.amax() <= 1e-9 * y.norm() * sub.amax().max(1.0));

            let mut true_sorted = supp.clone();
            true_sorted.sort_unstable();
            if picked.len() == 4 && sorted == true_sorted {
                assert!((&x - &xh).norm() <= 1e-9 * x.norm());
            }
        }
    }

    #[test]
    fn error_free_threshold() {
        let x = DVector::from_element(100, 1.0);
        let mut y = x.clone();
        y[0] += 5e-3;
        assert!(error_free(&x, &y));
        y[0] += 1e-2;
        assert!(!error_free(&x, &y));
    }

    #[test]
    fn probability_edges() {
        assert_eq!(recovery_probability(0, 0, |_| true), 0.0);
        assert_eq!(recovery_probability(10, 0, |_| true), 1.0);
    }
}
