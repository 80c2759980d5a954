//! Arithmetic in F_p and F_{p^d} built from primitive polynomials.
//!
//! Elements are represented by their canonical index: the integer whose
//! base-p digits are the polynomial-basis coefficients of the element,
//! constant term least significant. Index 0 is the additive zero and index 1
//! the multiplicative identity. Elements of the prime subfield F_p keep
//! their ordinary integer value `0..p`.
//!
//! Multiplication goes through exp/log tables over the fixed primitive
//! element `alpha`, the root of the field's primitive polynomial. Addition is
//! XOR in characteristic 2 and digit-wise modular addition otherwise.

mod numtheory;
mod poly;

use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use thiserror::Error;

pub use numtheory::{euler_phi, gcd, is_prime, mod_inverse, prime_factors, prime_power};
pub(crate) use poly::Coefficients;
use poly::{first_primitive, is_primitive, monic_polys, PrimeField};

/// Default cap on the number of field elements a table-backed field may have.
pub const DEFAULT_TABLE_LIMIT: u64 = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("supplied polynomial {0:?} is not a monic primitive polynomial of the requested degree")]
    SuppliedPolynomialNotPrimitive(Vec<u32>),
    #[error("field with {size} elements exceeds the table limit of {limit}")]
    FieldTooLarge { size: u128, limit: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("value {value} is not an element of a field with {order} elements")]
    OutOfRange { value: u64, order: u32 },
}

/// Complete description of F_{p^degree}: characteristic, primitive
/// polynomial and the exp/log tables over its root.
pub struct FieldSpec {
    p: u32,
    degree: u32,
    order: u32,
    prim_poly: Vec<u32>,
    /// `exp[i] = alpha^i`, `0 <= i < order - 1`.
    exp: Vec<u32>,
    /// `log[a]` for nonzero `a`; `log[0]` is unused.
    log: Vec<u32>,
    /// `p^i` for each digit position, used by odd-characteristic addition.
    place: Vec<u32>,
}

impl FieldSpec {
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Degree over the prime subfield.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Number of elements.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Order of the multiplicative group.
    pub fn group_order(&self) -> u32 {
        self.order - 1
    }

    /// Monic primitive polynomial over F_p, constant term first.
    pub fn prim_poly(&self) -> &[u32] {
        &self.prim_poly
    }

    pub fn exp_table(&self) -> &[u32] {
        &self.exp
    }

    pub fn log_table(&self) -> &[u32] {
        &self.log
    }

    #[inline]
    pub fn contains(&self, a: u32) -> bool {
        a < self.order
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        if a == 0 {
            return b;
        }
        if b == 0 {
            return a;
        }
        let p = self.p;
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut i = 0;
        while a > 0 || b > 0 {
            let d = (a % p + b % p) % p;
            out += d * self.place[i];
            a /= p;
            b /= p;
            i += 1;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if self.p == 2 || a == 0 {
            return a;
        }
        let p = self.p;
        let mut a = a;
        let mut out = 0;
        let mut i = 0;
        while a > 0 {
            let d = (p - a % p) % p;
            out += d * self.place[i];
            a /= p;
            i += 1;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.order - 1;
        let mut e = self.log[a as usize] + self.log[b as usize];
        if e >= n {
            e -= n;
        }
        self.exp[e as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let n = self.order - 1;
        let l = self.log[a as usize];
        Some(self.exp[((n - l) % n) as usize])
    }

    #[inline]
    pub fn div(&self, a: u32, b: u32) -> Option<u32> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    /// `a^e` for any integer exponent; `0^0 = 1`, `0^e` is zero for `e > 0`
    /// and undefined (`None`) for `e < 0`.
    pub fn pow(&self, a: u32, e: i64) -> Option<u32> {
        if a == 0 {
            return match e.signum() {
                0 => Some(1),
                1 => Some(0),
                _ => None,
            };
        }
        let n = (self.order - 1) as i64;
        let l = self.log[a as usize] as i64;
        Some(self.exp[(l * (e % n)).rem_euclid(n) as usize])
    }

    /// `alpha^e`, exponent reduced modulo the group order.
    #[inline]
    pub fn alpha_pow(&self, e: i64) -> u32 {
        let n = (self.order - 1) as i64;
        self.exp[e.rem_euclid(n) as usize]
    }

    /// Discrete log base `alpha`; `None` for zero.
    #[inline]
    pub fn log(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    /// Multiplies by an integer scalar (repeated addition), reduced mod p.
    #[inline]
    pub fn mul_int(&self, a: u32, k: u64) -> u32 {
        self.mul(a, (k % self.p as u64) as u32)
    }

    /// Polynomial-basis coordinates over F_p, constant term first.
    pub fn digits(&self, mut a: u32) -> Vec<u32> {
        let mut out = vec![0; self.degree as usize];
        for d in out.iter_mut() {
            *d = a % self.p;
            a /= self.p;
        }
        out
    }

    pub fn from_digits(&self, digits: &[u32]) -> u32 {
        digits
            .iter()
            .zip(&self.place)
            .map(|(&d, &pl)| (d % self.p) * pl)
            .sum()
    }

    fn same_as(&self, other: &FieldSpec) -> bool {
        self.p == other.p && self.prim_poly == other.prim_poly
    }
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("degree", &self.degree)
            .field("prim_poly", &self.prim_poly)
            .finish()
    }
}

impl Coefficients for FieldSpec {
    fn size(&self) -> u64 {
        self.order as u64
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        FieldSpec::add(self, a, b)
    }

    fn sub(&self, a: u32, b: u32) -> u32 {
        FieldSpec::sub(self, a, b)
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        FieldSpec::mul(self, a, b)
    }
}

/// Shared handle to an immutable [`FieldSpec`].
///
/// Two handles compare equal when they describe the same field (same
/// characteristic and primitive polynomial), even if built separately.
#[derive(Clone)]
pub struct Field(Arc<FieldSpec>);

impl Deref for Field {
    type Target = FieldSpec;

    fn deref(&self) -> &FieldSpec {
        &self.0
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.same_as(&other.0)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.degree)
    }
}

impl Field {
    /// Builds F_{p^k}. Without a polynomial the first primitive polynomial in
    /// lexicographic coefficient order is used.
    pub fn build(p: u64, k: u32, prim_poly: Option<&[u32]>) -> Result<Field, FieldError> {
        Self::build_with_limit(p, k, prim_poly, DEFAULT_TABLE_LIMIT)
    }

    pub fn build_with_limit(
        p: u64,
        k: u32,
        prim_poly: Option<&[u32]>,
        limit: u64,
    ) -> Result<Field, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NonPrimeCharacteristic(p));
        }
        if k == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let size = (p as u128).pow(k);
        if size > limit as u128 || size > u32::MAX as u128 {
            return Err(FieldError::FieldTooLarge { size, limit });
        }
        let prime = PrimeField { p: p as u32 };
        let poly = match prim_poly {
            Some(poly) => {
                let ok = poly.len() == k as usize + 1
                    && poly.iter().all(|&c| (c as u64) < p)
                    && is_primitive(&prime, poly);
                if !ok {
                    return Err(FieldError::SuppliedPolynomialNotPrimitive(poly.to_vec()));
                }
                poly.to_vec()
            }
            None => first_primitive(&prime, k as usize)
                .expect("primitive polynomials exist for every degree"),
        };
        Ok(Field(Arc::new(Self::tables(p as u32, k, poly))))
    }

    /// Builds F_q for a prime power `q`.
    pub fn of_order(q: u64) -> Result<Field, FieldError> {
        let (p, k) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        Self::build(p as u64, k, None)
    }

    fn tables(p: u32, degree: u32, prim_poly: Vec<u32>) -> FieldSpec {
        let order = p.pow(degree);
        let d = degree as usize;
        let place: Vec<u32> = (0..d).map(|i| p.pow(i as u32)).collect();
        let mut exp = Vec::with_capacity(order as usize - 1);
        let mut log = vec![0u32; order as usize];

        if p == 2 {
            let reduce = prim_poly
                .iter()
                .enumerate()
                .fold(0u32, |acc, (i, &c)| acc | (c << i));
            let top = 1u32 << d;
            let mut v = 1u32;
            for i in 0..order - 1 {
                exp.push(v);
                log[v as usize] = i;
                v <<= 1;
                if v & top != 0 {
                    v ^= reduce;
                }
            }
        } else if d == 1 {
            // alpha is the root of x + c, i.e. -c.
            let alpha = (p - prim_poly[0]) as u64 % p as u64;
            let mut v = 1u64;
            for i in 0..order - 1 {
                exp.push(v as u32);
                log[v as usize] = i;
                v = v * alpha % p as u64;
            }
        } else {
            let mut v = vec![0u32; d];
            v[0] = 1;
            for i in 0..order - 1 {
                let idx: u32 = v.iter().zip(&place).map(|(a, b)| a * b).sum();
                exp.push(idx);
                log[idx as usize] = i;
                // v <- v * x mod f
                let lead = v[d - 1];
                for j in (1..d).rev() {
                    v[j] = v[j - 1];
                }
                v[0] = 0;
                for j in 0..d {
                    let t = (lead as u64 * prim_poly[j] as u64 % p as u64) as u32;
                    v[j] = (v[j] + (p - t)) % p;
                }
            }
        }

        FieldSpec {
            p,
            degree,
            order,
            prim_poly,
            exp,
            log,
            place,
        }
    }

    /// Checked element constructor.
    pub fn element(&self, value: u32) -> Result<FieldElement, FieldError> {
        if !self.contains(value) {
            return Err(FieldError::OutOfRange {
                value: value as u64,
                order: self.order,
            });
        }
        Ok(FieldElement {
            value,
            field: self.clone(),
        })
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            value: 0,
            field: self.clone(),
        }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement {
            value: 1,
            field: self.clone(),
        }
    }

    /// The primitive element `alpha` raised to `e`.
    pub fn alpha(&self, e: i64) -> FieldElement {
        FieldElement {
            value: self.alpha_pow(e),
            field: self.clone(),
        }
    }
}

/// A field element bound to its field. Mixing fields is an error.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    value: u32,
    field: Field,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{:?}", self.value, self.field)
    }
}

impl FieldElement {
    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn check(&self, other: &FieldElement) -> Result<(), FieldError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch)
        }
    }

    fn with(&self, value: u32) -> FieldElement {
        FieldElement {
            value,
            field: self.field.clone(),
        }
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(other)?;
        Ok(self.with(self.field.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(other)?;
        Ok(self.with(self.field.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(other)?;
        Ok(self.with(self.field.mul(self.value, other.value)))
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(other)?;
        self.field
            .div(self.value, other.value)
            .map(|v| self.with(v))
            .ok_or(FieldError::DivisionByZero)
    }

    pub fn neg(&self) -> FieldElement {
        self.with(self.field.neg(self.value))
    }

    pub fn inv(&self) -> Result<FieldElement, FieldError> {
        self.field
            .inv(self.value)
            .map(|v| self.with(v))
            .ok_or(FieldError::DivisionByZero)
    }

    pub fn pow(&self, e: i64) -> Result<FieldElement, FieldError> {
        self.field
            .pow(self.value, e)
            .map(|v| self.with(v))
            .ok_or(FieldError::DivisionByZero)
    }

    /// Polynomial-basis coordinates over F_p, constant term first.
    pub fn coords(&self) -> Vec<u32> {
        self.field.digits(self.value)
    }
}

/// Exhaustively counts the monic primitive polynomials of degree `s` over
/// F_q. Agrees with `euler_phi(q^s - 1) / s`.
pub fn count_primitive_polynomials(q: u64, s: u32) -> Result<u64, FieldError> {
    count_primitive_polynomials_with_limit(q, s, DEFAULT_TABLE_LIMIT)
}

pub fn count_primitive_polynomials_with_limit(
    q: u64,
    s: u32,
    limit: u64,
) -> Result<u64, FieldError> {
    if s == 0 {
        return Err(FieldError::ZeroDegree);
    }
    let size = (q as u128).pow(s);
    if size > limit as u128 {
        return Err(FieldError::FieldTooLarge { size, limit });
    }
    let base = Field::of_order(q)?;
    Ok(monic_polys(q, s as usize)
        .filter(|poly| is_primitive(&*base, poly))
        .count() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f8() -> Field {
        Field::build(2, 3, Some(&[1, 1, 0, 1])).unwrap()
    }

    #[test]
    fn table_one_coordinates() {
        let f = f8();
        assert_eq!(f.alpha(3).coords(), vec![1, 1, 0]);
        assert_eq!(f.alpha(6).coords(), vec![1, 0, 1]);
    }

    #[test]
    fn alpha_products() {
        let f = f8();
        let prod = f.alpha(4).mul(&f.alpha(2)).unwrap();
        assert_eq!(prod, f.alpha(6));
        assert_eq!(prod.coords(), vec![1, 0, 1]);
        assert_eq!(f.alpha(6).mul(&f.alpha(1)).unwrap(), f.one());
    }

    #[test]
    fn binary_prime_field() {
        let f = Field::build(2, 1, None).unwrap();
        assert_eq!(f.exp_table(), &[1]);
        assert_eq!(f.alpha(1).value(), 1);
        assert_eq!(f.prim_poly(), &[1, 1]);
    }

    #[test]
    fn rejects_reducible_polynomial() {
        let err = Field::build(2, 3, Some(&[1, 1, 1, 1])).unwrap_err();
        assert!(matches!(err, FieldError::SuppliedPolynomialNotPrimitive(_)));
        assert!(Field::build(2, 3, Some(&[1, 1, 1])).is_err());
        assert!(Field::build(2, 3, Some(&[1, 1, 0, 2])).is_err());
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            Field::build(4, 1, None).unwrap_err(),
            FieldError::NonPrimeCharacteristic(4)
        );
        assert!(matches!(
            Field::build(2, 25, None).unwrap_err(),
            FieldError::FieldTooLarge { .. }
        ));
        assert!(matches!(
            Field::build_with_limit(2, 10, None, 512).unwrap_err(),
            FieldError::FieldTooLarge { .. }
        ));
        assert_eq!(Field::of_order(6).unwrap_err(), FieldError::NotPrimePower(6));
    }

    #[test]
    fn char_two_self_inverse_addition() {
        let f = Field::build(2, 8, None).unwrap();
        for a in 0..256 {
            assert_eq!(f.add(a, a), 0);
        }
    }

    #[test]
    fn mismatched_fields_error() {
        let a = f8().alpha(1);
        let b = Field::build(2, 4, None).unwrap().alpha(1);
        assert_eq!(a.add(&b).unwrap_err(), FieldError::FieldMismatch);
        assert_eq!(a.mul(&b).unwrap_err(), FieldError::FieldMismatch);
        // Independently built identical fields do mix.
        assert!(a.mul(&f8().alpha(2)).is_ok());
    }

    #[test]
    fn division_by_zero() {
        let f = f8();
        assert_eq!(f.one().div(&f.zero()).unwrap_err(), FieldError::DivisionByZero);
        assert_eq!(f.zero().inv().unwrap_err(), FieldError::DivisionByZero);
        assert_eq!(f.zero().pow(-1).unwrap_err(), FieldError::DivisionByZero);
    }

    #[test]
    fn odd_characteristic() {
        let f = Field::build(3, 2, None).unwrap();
        assert_eq!(f.order(), 9);
        for a in 0..9 {
            assert_eq!(f.add(a, f.neg(a)), 0);
            assert_eq!(f.add(f.add(a, a), a), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
        }
        let f7 = Field::build(7, 1, None).unwrap();
        // prime-field elements keep their integer values
        for a in 0..7u32 {
            for b in 0..7u32 {
                assert_eq!(f7.mul(a, b), a * b % 7);
                assert_eq!(f7.add(a, b), (a + b) % 7);
            }
        }
    }

    #[test]
    fn small_primitive_counts() {
        assert_eq!(count_primitive_polynomials(2, 1).unwrap(), 1);
        assert_eq!(count_primitive_polynomials(2, 3).unwrap(), 2);
        assert_eq!(count_primitive_polynomials(2, 4).unwrap(), 2);
        assert!(matches!(
            count_primitive_polynomials_with_limit(2, 10, 256).unwrap_err(),
            FieldError::FieldTooLarge { .. }
        ));
    }
}
