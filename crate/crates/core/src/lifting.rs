//! Field lifting from F_q to F_{q^s}.
//!
//! F_{q^s} is built as a degree `k*s` extension of F_p (where `q = p^k`) and
//! F_q sits inside it as a subfield. Viewing F_{q^s} as an s-dimensional
//! F_q-vector space over the basis `1, alpha, ..., alpha^(s-1)` gives the
//! matrix map (`lift_matrix`) and vector map (`lift_vector`): each block of
//! `s` consecutive base rows collapses into one lifted row,
//!
//! ```text
//! lifted[k][l] = sum_{t < s} base[k*s + t][l] * alpha^t
//! ```
//!
//! The maps are F_q-linear bijections and satisfy
//! `lift_vector(A x) = lift_matrix(A) * embed(x)` for `x` over F_q.

use thiserror::Error;

use crate::field::{mod_inverse, Field, FieldError};
use crate::matrix::{FieldMatrix, FieldVector, MatrixError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LiftError {
    #[error("{rows} rows cannot be grouped into blocks of {s}")]
    RowCountNotDivisible { rows: usize, s: u32 },
    #[error("element {0} does not decompose over the lifting basis with base-field coefficients")]
    NotInBaseSpan(u32),
    #[error("operand is over the wrong field")]
    FieldMismatch,
    #[error("lifting basis is linearly dependent over the base field")]
    DependentBasis,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// The tower F_q ⊂ F_{q^s} with its embedding and the lifting basis.
#[derive(Clone, Debug)]
pub struct LiftSpec {
    base: Field,
    lifted: Field,
    s: u32,
    /// `embed[a]` is the image of base element `a` in the lifted field.
    embed: Vec<u32>,
    /// Base element with discrete log `i` is `base.exp[i]`; its image is
    /// `alpha^(stride * mult * i)` in the lifted field.
    stride: u64,
    /// Inverse of `mult` modulo `q - 1`, for mapping images back.
    mult_inv: u64,
    /// Inverse of the change-of-basis matrix over F_p that sends
    /// (coefficient digits per basis vector) to lifted-field digits.
    /// `None` when it is the identity.
    unbasis: Option<Vec<Vec<u32>>>,
}

impl LiftSpec {
    /// Builds F_{q^s} over the given base field with the default primitive
    /// polynomial of degree `k*s` over F_p.
    pub fn new(base: &Field, s: u32) -> Result<Self, LiftError> {
        Self::with_poly(base, s, None)
    }

    pub fn with_poly(base: &Field, s: u32, lifted_poly: Option<&[u32]>) -> Result<Self, LiftError> {
        if s == 0 {
            return Err(FieldError::ZeroDegree.into());
        }
        let p = base.characteristic();
        let k = base.degree();
        let lifted = Field::build(p as u64, k * s, lifted_poly)?;
        Self::from_fields(base, &lifted, s)
    }

    /// Assembles the tower from two already-built fields.
    pub fn from_fields(base: &Field, lifted: &Field, s: u32) -> Result<Self, LiftError> {
        if lifted.characteristic() != base.characteristic()
            || lifted.degree() != base.degree() * s
        {
            return Err(LiftError::FieldMismatch);
        }
        let q = base.order() as u64;
        let big = lifted.group_order() as u64;
        let stride = big / (q - 1).max(1);

        // beta = alpha^stride generates the copy of F_q^*. Find the
        // conjugate beta^mult that is a root of the base field's primitive
        // polynomial; gamma -> beta^mult is then a field isomorphism.
        let poly = base.prim_poly();
        let eval = |x: u32| {
            poly.iter()
                .rev()
                .fold(0u32, |acc, &c| lifted.add(lifted.mul(acc, x), c))
        };
        let mult = (1..q.max(2))
            .find(|&j| {
                super::field::gcd(j, (q - 1).max(1)) == 1
                    && eval(lifted.alpha_pow((stride * j) as i64)) == 0
            })
            .expect("the base primitive polynomial splits in the extension");
        let mult_inv = mod_inverse(mult, (q - 1).max(1)).expect("mult is a unit");

        let mut embed = vec![0u32; q as usize];
        for i in 0..(q - 1) {
            let a = base.alpha_pow(i as i64);
            embed[a as usize] = lifted.alpha_pow((stride * mult * i) as i64);
        }

        let mut spec = Self {
            base: base.clone(),
            lifted: lifted.clone(),
            s,
            embed,
            stride,
            mult_inv,
            unbasis: None,
        };
        spec.unbasis = spec.basis_inverse()?;
        Ok(spec)
    }

    /// Builds the F_p change-of-basis matrix whose column `(t, i)` holds the
    /// digits of `embed(gamma^i) * alpha^t` and inverts it.
    fn basis_inverse(&self) -> Result<Option<Vec<Vec<u32>>>, LiftError> {
        let p = self.base.characteristic();
        let k = self.base.degree() as usize;
        let s = self.s as usize;
        let dim = k * s;
        let prime = Field::build(p as u64, 1, None)?;
        let mut m = FieldMatrix::zeros(&prime, dim, dim);
        for t in 0..s {
            let at = self.lifted.alpha_pow(t as i64);
            for i in 0..k {
                // gamma^i in the base field is the digit vector e_i.
                let gamma_i = self.base.from_digits(&unit(k, i));
                let v = self.lifted.mul(self.embed[gamma_i as usize], at);
                for (row, d) in self.lifted.digits(v).into_iter().enumerate() {
                    // prime-field canonical values equal the digit values
                    m.set(row, t * k + i, d);
                }
            }
        }
        if m == FieldMatrix::identity(&prime, dim) {
            return Ok(None);
        }
        let inv = m.inverse().map_err(|_| LiftError::DependentBasis)?;
        Ok(Some((0..dim).map(|r| inv.row(r).to_vec()).collect()))
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn lifted(&self) -> &Field {
        &self.lifted
    }

    pub fn degree(&self) -> u32 {
        self.s
    }

    /// Image of a base element in the lifted field.
    #[inline]
    pub fn embed(&self, a: u32) -> u32 {
        self.embed[a as usize]
    }

    /// Inverse of [`embed`](Self::embed); `None` when `z` is outside the
    /// embedded copy of F_q.
    pub fn unembed(&self, z: u32) -> Option<u32> {
        if z == 0 {
            return Some(0);
        }
        if !self.lifted.contains(z) {
            return None;
        }
        let l = self.lifted.log(z)? as u64;
        if l % self.stride != 0 {
            return None;
        }
        let qm1 = (self.base.order() as u64 - 1).max(1);
        let i = (l / self.stride) * self.mult_inv % qm1;
        Some(self.base.alpha_pow(i as i64))
    }

    /// Lifts one block of `s` base elements into a single element.
    pub fn lift_block(&self, block: &[u32]) -> u32 {
        debug_assert_eq!(block.len(), self.s as usize);
        let f = &self.lifted;
        block.iter().enumerate().fold(0, |acc, (t, &c)| {
            f.add(acc, f.mul(self.embed[c as usize], f.alpha_pow(t as i64)))
        })
    }

    /// Splits a lifted element into its `s` base-field coordinates.
    pub fn unlift_element(&self, z: u32) -> Result<Vec<u32>, LiftError> {
        if !self.lifted.contains(z) {
            return Err(LiftError::NotInBaseSpan(z));
        }
        let k = self.base.degree() as usize;
        let digits = self.lifted.digits(z);
        let coeffs = match &self.unbasis {
            None => digits,
            Some(inv) => {
                let p = self.base.characteristic() as u64;
                inv.iter()
                    .map(|row| {
                        (row.iter()
                            .zip(&digits)
                            .map(|(&a, &b)| a as u64 * b as u64)
                            .sum::<u64>()
                            % p) as u32
                    })
                    .collect()
            }
        };
        Ok(coeffs.chunks(k).map(|c| self.base.from_digits(c)).collect())
    }

    pub fn lift_vector(&self, c: &FieldVector) -> Result<FieldVector, LiftError> {
        if c.field() != &self.base {
            return Err(LiftError::FieldMismatch);
        }
        let s = self.s as usize;
        if c.len() % s != 0 {
            return Err(LiftError::RowCountNotDivisible { rows: c.len(), s: self.s });
        }
        let data = c.as_slice().chunks(s).map(|b| self.lift_block(b)).collect();
        Ok(FieldVector::from_raw(&self.lifted, data))
    }

    pub fn unlift_vector(&self, c: &FieldVector) -> Result<FieldVector, LiftError> {
        if c.field() != &self.lifted {
            return Err(LiftError::FieldMismatch);
        }
        let mut out = Vec::with_capacity(c.len() * self.s as usize);
        for &z in c.as_slice() {
            out.extend(self.unlift_element(z)?);
        }
        Ok(FieldVector::from_raw(&self.base, out))
    }

    pub fn lift_matrix(&self, c: &FieldMatrix) -> Result<FieldMatrix, LiftError> {
        if c.field() != &self.base {
            return Err(LiftError::FieldMismatch);
        }
        let s = self.s as usize;
        if c.rows() % s != 0 {
            return Err(LiftError::RowCountNotDivisible { rows: c.rows(), s: self.s });
        }
        let mut block = vec![0u32; s];
        Ok(FieldMatrix::from_fn(&self.lifted, c.rows() / s, c.cols(), |k, l| {
            for (t, b) in block.iter_mut().enumerate() {
                *b = c.get(k * s + t, l);
            }
            self.lift_block(&block)
        }))
    }

    pub fn unlift_matrix(&self, c: &FieldMatrix) -> Result<FieldMatrix, LiftError> {
        if c.field() != &self.lifted {
            return Err(LiftError::FieldMismatch);
        }
        let s = self.s as usize;
        let mut out = FieldMatrix::zeros(&self.base, c.rows() * s, c.cols());
        for k in 0..c.rows() {
            for l in 0..c.cols() {
                for (t, v) in self.unlift_element(c.get(k, l))?.into_iter().enumerate() {
                    out.set(k * s + t, l, v);
                }
            }
        }
        Ok(out)
    }

    /// Maps a vector over F_q entry-wise into F_{q^s}.
    pub fn embed_vector(&self, x: &FieldVector) -> Result<FieldVector, LiftError> {
        if x.field() != &self.base {
            return Err(LiftError::FieldMismatch);
        }
        let data = x.as_slice().iter().map(|&a| self.embed(a)).collect();
        Ok(FieldVector::from_raw(&self.lifted, data))
    }
}

fn unit(len: usize, i: usize) -> Vec<u32> {
    let mut v = vec![0; len];
    v[i] = 1;
    v
}
