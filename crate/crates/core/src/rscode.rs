//! Narrow-sense Reed–Solomon codes and their bounded-distance syndrome
//! decoder.
//!
//! A code of length `n` with `r` parity symbols over F_Q uses evaluation
//! points `alpha^0 .. alpha^(n-1)` and the parity-check matrix
//! `H[i][j] = alpha^((i+1) j)`, so the syndromes of an error vector `e` are
//! `S_i = sum_j e_j alpha^(i j)` for `i = 1..r`. The code is MDS with
//! minimum distance `r + 1` and corrects `floor(r/2)` symbol errors.
//!
//! Decoding runs Berlekamp–Massey for the error locator
//! `Λ(x) = prod (1 - X_l x)`, a Chien search over `alpha^-j` for the error
//! positions, and Forney's formula `e = -Ω(X^-1) / Λ'(X^-1)` with
//! `Ω = S(x) Λ(x) mod x^r` for the magnitudes. Every decode is verified by
//! recomputing the syndrome, so a word beyond the radius surfaces as
//! [`RsError::DecodeFailure`] instead of a silent mis-correction.

use std::cell::Cell;

use thiserror::Error;

use crate::field::Field;
use crate::matrix::{FieldMatrix, FieldVector, MatrixError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RsError {
    #[error("code length {n} exceeds the {max} nonzero elements of the field")]
    LengthExceedsField { n: usize, max: u32 },
    #[error("invalid code parameters n = {n}, r = {r}")]
    InvalidParameters { n: usize, r: usize },
    #[error("expected length {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("operand is over the wrong field")]
    FieldMismatch,
    #[error("decoding failed: {0}")]
    DecodeFailure(&'static str),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// An `[n, n - r, r + 1]` Reed–Solomon code.
#[derive(Clone, Debug)]
pub struct RsCode {
    field: Field,
    n: usize,
    r: usize,
}

/// Field-operation count of a single decode.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DecodeStats {
    pub field_ops: u64,
}

/// Counts multiplications and additions performed by the decoder.
struct Counted<'a> {
    f: &'a Field,
    ops: Cell<u64>,
}

impl Counted<'_> {
    #[inline]
    fn mul(&self, a: u32, b: u32) -> u32 {
        self.ops.set(self.ops.get() + 1);
        self.f.mul(a, b)
    }

    #[inline]
    fn add(&self, a: u32, b: u32) -> u32 {
        self.ops.set(self.ops.get() + 1);
        self.f.add(a, b)
    }

    #[inline]
    fn sub(&self, a: u32, b: u32) -> u32 {
        self.ops.set(self.ops.get() + 1);
        self.f.sub(a, b)
    }

    #[inline]
    fn mul_int(&self, a: u32, k: u64) -> u32 {
        self.ops.set(self.ops.get() + 1);
        self.f.mul_int(a, k)
    }

    #[inline]
    fn div(&self, a: u32, b: u32) -> Option<u32> {
        self.ops.set(self.ops.get() + 1);
        self.f.div(a, b)
    }
}

impl RsCode {
    pub fn new(field: &Field, n: usize, r: usize) -> Result<Self, RsError> {
        if n == 0 || r > n {
            return Err(RsError::InvalidParameters { n, r });
        }
        if n > field.group_order() as usize {
            return Err(RsError::LengthExceedsField {
                n,
                max: field.group_order(),
            });
        }
        Ok(Self {
            field: field.clone(),
            n,
            r,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Number of parity symbols.
    pub fn redundancy(&self) -> usize {
        self.r
    }

    /// Message length `n - r`.
    pub fn dimension(&self) -> usize {
        self.n - self.r
    }

    pub fn min_distance(&self) -> usize {
        self.r + 1
    }

    /// Largest number of symbol errors the decoder always corrects.
    pub fn radius(&self) -> usize {
        self.r / 2
    }

    /// `j`-th evaluation point, `alpha^j`.
    pub fn eval_point(&self, j: usize) -> u32 {
        self.field.alpha_pow(j as i64)
    }

    /// `r x n` Vandermonde parity-check matrix.
    pub fn parity_check_matrix(&self) -> FieldMatrix {
        let f = &self.field;
        FieldMatrix::from_fn(f, self.r, self.n, |i, j| f.alpha_pow(((i + 1) * j) as i64))
    }

    /// Syndrome `H w` of a length-`n` word.
    pub fn syndrome(&self, word: &FieldVector) -> Result<FieldVector, RsError> {
        self.check_vector(word, self.n)?;
        let support: Vec<(usize, u32)> = word
            .as_slice()
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(j, &v)| (j, v))
            .collect();
        Ok(FieldVector::from_raw(&self.field, self.sparse_syndrome(&support)))
    }

    /// Syndrome of a word given by its nonzero `(position, value)` pairs.
    pub(crate) fn sparse_syndrome(&self, support: &[(usize, u32)]) -> Vec<u32> {
        let f = &self.field;
        (1..=self.r)
            .map(|i| {
                support.iter().fold(0, |acc, &(j, v)| {
                    f.add(acc, f.mul(v, f.alpha_pow((i * j) as i64)))
                })
            })
            .collect()
    }

    fn check_vector(&self, v: &FieldVector, len: usize) -> Result<(), RsError> {
        if v.field() != &self.field {
            return Err(RsError::FieldMismatch);
        }
        if v.len() != len {
            return Err(RsError::LengthMismatch {
                expected: len,
                actual: v.len(),
            });
        }
        Ok(())
    }

    /// Finds the unique error vector of weight at most `floor(r/2)` with the
    /// given syndrome.
    pub fn syndrome_decode(&self, syndrome: &FieldVector) -> Result<FieldVector, RsError> {
        self.syndrome_decode_with_stats(syndrome).map(|(e, _)| e)
    }

    pub fn syndrome_decode_with_stats(
        &self,
        syndrome: &FieldVector,
    ) -> Result<(FieldVector, DecodeStats), RsError> {
        self.check_vector(syndrome, self.r)?;
        let ops = Counted {
            f: &self.field,
            ops: Cell::new(0),
        };
        let support = self.decode_support(syndrome.as_slice(), &ops)?;
        let mut e = vec![0u32; self.n];
        for &(j, v) in &support {
            e[j] = v;
        }
        let stats = DecodeStats {
            field_ops: ops.ops.get(),
        };
        Ok((FieldVector::from_raw(&self.field, e), stats))
    }

    /// Decodes to `(position, value)` pairs, positions increasing.
    pub(crate) fn decode_sparse(&self, syndrome: &[u32]) -> Result<Vec<(usize, u32)>, RsError> {
        let ops = Counted {
            f: &self.field,
            ops: Cell::new(0),
        };
        self.decode_support(syndrome, &ops)
    }

    fn decode_support(&self, syn: &[u32], ops: &Counted<'_>) -> Result<Vec<(usize, u32)>, RsError> {
        if syn.len() != self.r {
            return Err(RsError::LengthMismatch {
                expected: self.r,
                actual: syn.len(),
            });
        }
        if syn.iter().all(|&s| s == 0) {
            return Ok(Vec::new());
        }
        let f = &self.field;
        let locator = berlekamp_massey(syn, ops);
        let errors = locator.len() - 1;
        if errors > self.radius() {
            return Err(RsError::DecodeFailure("error locator degree exceeds the correction radius"));
        }

        let roots = chien_search(f, &locator, self.n, ops);
        if roots.len() != errors {
            return Err(RsError::DecodeFailure("locator root count differs from its degree"));
        }

        // Ω(x) = S(x) Λ(x) mod x^r, S(x) = S_1 + S_2 x + ...; only the terms
        // below deg Λ can be nonzero for a decodable syndrome, and the final
        // syndrome check rejects anything else.
        let mut omega = vec![0u32; errors];
        for (i, &li) in locator.iter().enumerate().take(errors) {
            if li == 0 {
                continue;
            }
            for (k, &sk) in syn.iter().enumerate().take(errors - i) {
                omega[i + k] = ops.add(omega[i + k], ops.mul(li, sk));
            }
        }

        // e_j = -Ω(x) / Λ'(x) = -x Ω(x) / (x Λ'(x)) at x = alpha^-j.
        let mut support = Vec::with_capacity(errors);
        for &(j, x_deriv) in &roots {
            let x_inv = f.alpha_pow(-(j as i64));
            let num = ops.mul(horner(&omega, x_inv, ops), x_inv);
            let mag = ops
                .div(num, x_deriv)
                .ok_or(RsError::DecodeFailure("repeated locator root"))?;
            let mag = f.neg(mag);
            if mag == 0 {
                return Err(RsError::DecodeFailure("zero error magnitude"));
            }
            support.push((j, mag));
        }

        let check = self.sparse_syndrome(&support);
        ops.ops.set(ops.ops.get() + 2 * (self.r * support.len()) as u64);
        if check != syn {
            return Err(RsError::DecodeFailure("recomputed syndrome does not match"));
        }
        Ok(support)
    }

    /// Systematic `(n - r) x n` generator `[I | P]` with `G H^T = 0`.
    pub fn generator_matrix(&self) -> FieldMatrix {
        let f = &self.field;
        let k = self.dimension();
        let parity = self.parity_map();
        FieldMatrix::from_fn(f, k, self.n, |row, col| {
            if col < k {
                u32::from(row == col)
            } else {
                parity.get(col - k, row)
            }
        })
    }

    /// The `r x k` matrix `P' = -H2^-1 H1` mapping a message to its parity
    /// symbols, where `H = [H1 | H2]` splits at column `k`.
    fn parity_map(&self) -> FieldMatrix {
        let f = &self.field;
        let k = self.dimension();
        if self.r == 0 {
            return FieldMatrix::zeros(f, 0, k);
        }
        let h = self.parity_check_matrix();
        let h1 = h.column_block(0, k);
        let h2 = h.column_block(k, self.n);
        let h2_inv = h2
            .inverse()
            .expect("any r columns of an RS parity check are independent");
        let prod = h2_inv.mul(&h1).expect("dimensions agree");
        FieldMatrix::from_fn(f, self.r, k, |r, c| f.neg(prod.get(r, c)))
    }

    /// Systematic encoding: the message followed by its parity symbols.
    pub fn encode(&self, message: &FieldVector) -> Result<FieldVector, RsError> {
        self.check_vector(message, self.dimension())?;
        let parity = self.parity_map().mul_vec(message)?;
        let mut word = message.as_slice().to_vec();
        word.extend_from_slice(parity.as_slice());
        Ok(FieldVector::from_raw(&self.field, word))
    }

    /// Corrects up to `floor(r/2)` symbol errors and returns the message.
    pub fn codeword_decode(&self, received: &FieldVector) -> Result<FieldVector, RsError> {
        self.check_vector(received, self.n)?;
        let syn = self.syndrome(received)?;
        let err = self.decode_sparse(syn.as_slice())?;
        let f = &self.field;
        let mut word = received.as_slice().to_vec();
        for (j, v) in err {
            word[j] = f.sub(word[j], v);
        }
        word.truncate(self.dimension());
        Ok(FieldVector::from_raw(f, word))
    }
}

/// Berlekamp–Massey over the syndromes `S_1..S_r`; returns the connection
/// polynomial `Λ` (constant term 1) trimmed to its degree `L`.
fn berlekamp_massey(syn: &[u32], ops: &Counted<'_>) -> Vec<u32> {
    let mut c = vec![1u32];
    let mut b = vec![1u32];
    let mut len = 0usize;
    let mut shift = 1usize;
    let mut last_disc = 1u32;

    for n in 0..syn.len() {
        let mut disc = syn[n];
        for i in 1..=len.min(c.len() - 1) {
            disc = ops.add(disc, ops.mul(c[i], syn[n - i]));
        }
        if disc == 0 {
            shift += 1;
            continue;
        }
        let coef = ops.div(disc, last_disc).expect("previous discrepancy is nonzero");
        let prev = c.clone();
        if c.len() < b.len() + shift {
            c.resize(b.len() + shift, 0);
        }
        for (i, &bi) in b.iter().enumerate() {
            if bi != 0 {
                c[i + shift] = ops.sub(c[i + shift], ops.mul(coef, bi));
            }
        }
        if 2 * len <= n {
            len = n + 1 - len;
            b = prev;
            last_disc = disc;
            shift = 1;
        } else {
            shift += 1;
        }
    }
    c.resize(len + 1, 0);
    c
}

/// Roots `alpha^-j`, `j < n`, of `Λ`, evaluated incrementally. Each root
/// comes with `x Λ'(x)`, which is `sum i Λ_i x^i` and so falls out of the
/// same terms.
fn chien_search(f: &Field, locator: &[u32], n: usize, ops: &Counted<'_>) -> Vec<(usize, u32)> {
    let p = u64::from(f.characteristic());
    let step: Vec<u32> = (0..locator.len()).map(|i| f.alpha_pow(-(i as i64))).collect();
    let mut terms = locator.to_vec();
    let mut roots = Vec::new();
    for j in 0..n {
        let sum = terms[1..].iter().fold(terms[0], |acc, &t| ops.add(acc, t));
        if sum == 0 {
            let mut d = 0u32;
            for (i, &t) in terms.iter().enumerate().skip(1) {
                let c = i as u64 % p;
                if c == 0 || t == 0 {
                    continue;
                }
                let ti = if c == 1 { t } else { ops.mul_int(t, c) };
                d = if d == 0 { ti } else { ops.add(d, ti) };
            }
            roots.push((j, d));
        }
        if j + 1 < n {
            for (t, &s) in terms.iter_mut().zip(&step).skip(1) {
                *t = ops.mul(*t, s);
            }
        }
    }
    roots
}

fn horner(poly: &[u32], x: u32, ops: &Counted<'_>) -> u32 {
    match poly.split_last() {
        None => 0,
        Some((&lead, rest)) => rest.iter().rev().fold(lead, |acc, &c| ops.add(ops.mul(acc, x), c)),
    }
}
