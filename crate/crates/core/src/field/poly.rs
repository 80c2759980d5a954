//! Polynomials over a finite coefficient ring and the primitivity test used
//! both for building fields over F_p and for counting primitive polynomials
//! over an arbitrary F_q.

use super::numtheory::prime_factors;

/// Minimal arithmetic a coefficient field has to provide.
pub(crate) trait Coefficients {
    /// Number of elements.
    fn size(&self) -> u64;
    fn add(&self, a: u32, b: u32) -> u32;
    fn sub(&self, a: u32, b: u32) -> u32;
    fn mul(&self, a: u32, b: u32) -> u32;
}

/// F_p with elements `0..p` and plain modular arithmetic.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PrimeField {
    pub p: u32,
}

impl Coefficients for PrimeField {
    fn size(&self) -> u64 {
        self.p as u64
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.p as u64) as u32
    }

    fn sub(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.p as u64 - b as u64) % self.p as u64) as u32
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }
}

/// Reduction context for `F[x] / f(x)` with `f` monic.
///
/// Residues are stored as coefficient vectors of length `deg f`, constant
/// term first.
struct QuotientRing<'a, C: Coefficients> {
    coeffs: &'a C,
    /// Monic modulus, constant term first, length `deg + 1`.
    modulus: &'a [u32],
}

impl<C: Coefficients> QuotientRing<'_, C> {
    fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    fn one(&self) -> Vec<u32> {
        let mut v = vec![0; self.degree()];
        v[0] = 1;
        v
    }

    /// The residue class of `x`.
    fn x(&self) -> Vec<u32> {
        let d = self.degree();
        if d == 1 {
            // x = -f_0 mod (x + f_0)
            return vec![self.coeffs.sub(0, self.modulus[0])];
        }
        let mut v = vec![0; d];
        v[1] = 1;
        v
    }

    fn mul(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let d = self.degree();
        let c = self.coeffs;
        let mut prod = vec![0u32; 2 * d - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                if bj != 0 {
                    prod[i + j] = c.add(prod[i + j], c.mul(ai, bj));
                }
            }
        }
        // Reduce from the top using x^d = -(f_0 + ... + f_{d-1} x^{d-1}).
        for top in (d..prod.len()).rev() {
            let lead = prod[top];
            if lead == 0 {
                continue;
            }
            prod[top] = 0;
            for j in 0..d {
                let t = top - d + j;
                prod[t] = c.sub(prod[t], c.mul(lead, self.modulus[j]));
            }
        }
        prod.truncate(d);
        prod
    }

    fn pow(&self, base: &[u32], mut e: u64) -> Vec<u32> {
        let mut acc = self.one();
        let mut sq = base.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            sq = self.mul(&sq, &sq);
            e >>= 1;
        }
        acc
    }
}

/// True when the monic polynomial `poly` (constant term first) is primitive
/// over the coefficient field: `x` has multiplicative order exactly
/// `|F|^deg - 1` modulo `poly`. That order is only reachable when the
/// quotient ring is a field, so irreducibility comes for free.
pub(crate) fn is_primitive<C: Coefficients>(coeffs: &C, poly: &[u32]) -> bool {
    let d = poly.len().saturating_sub(1);
    if d == 0 || poly[d] != 1 || poly[0] == 0 {
        return false;
    }
    let group_order = match coeffs.size().checked_pow(d as u32) {
        Some(v) => v - 1,
        None => return false,
    };
    let ring = QuotientRing {
        coeffs,
        modulus: poly,
    };
    let x = ring.x();
    let one = ring.one();
    if ring.pow(&x, group_order) != one {
        return false;
    }
    prime_factors(group_order)
        .into_iter()
        .all(|r| ring.pow(&x, group_order / r) != one)
}

/// Enumerates monic degree-`d` polynomials in lexicographic order of their
/// lower coefficients read as a base-`|F|` integer (constant term least
/// significant), i.e. `x^d`, `x^d + 1`, `x^d + x`, ...
pub(crate) fn monic_polys(size: u64, d: usize) -> impl Iterator<Item = Vec<u32>> {
    let total = size.pow(d as u32);
    (0..total).map(move |mut idx| {
        let mut poly = Vec::with_capacity(d + 1);
        for _ in 0..d {
            poly.push((idx % size) as u32);
            idx /= size;
        }
        poly.push(1);
        poly
    })
}

/// First primitive polynomial of degree `d` in [`monic_polys`] order.
pub(crate) fn first_primitive<C: Coefficients>(coeffs: &C, d: usize) -> Option<Vec<u32>> {
    monic_polys(coeffs.size(), d).find(|poly| is_primitive(coeffs, poly))
}

#[cfg(test)]
mod tests {
    use super::*;

    const F2: PrimeField = PrimeField { p: 2 };

    #[test]
    fn table_one_polynomial_is_primitive() {
        // x^3 + x + 1
        assert!(is_primitive(&F2, &[1, 1, 0, 1]));
        // x^3 + x^2 + 1
        assert!(is_primitive(&F2, &[1, 0, 1, 1]));
        // (x + 1)(x^2 + 1) = x^3 + x^2 + x + 1
        assert!(!is_primitive(&F2, &[1, 1, 1, 1]));
    }

    #[test]
    fn irreducible_but_not_primitive() {
        // x^4 + x^3 + x^2 + x + 1 divides x^5 - 1: irreducible, order 5.
        assert!(!is_primitive(&F2, &[1, 1, 1, 1, 1]));
    }

    #[test]
    fn degree_one() {
        assert!(is_primitive(&F2, &[1, 1]));
        assert!(!is_primitive(&F2, &[0, 1]));
        let f7 = PrimeField { p: 7 };
        // x - 3: 3 generates F_7^*; x - 2: 2 has order 3.
        assert!(is_primitive(&f7, &[4, 1]));
        assert!(!is_primitive(&f7, &[5, 1]));
    }

    #[test]
    fn default_search_order() {
        assert_eq!(first_primitive(&F2, 3).unwrap(), vec![1, 1, 0, 1]);
        // 0x11d
        assert_eq!(
            first_primitive(&F2, 8).unwrap(),
            vec![1, 0, 1, 1, 1, 0, 0, 0, 1]
        );
    }
}
