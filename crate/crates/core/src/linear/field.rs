use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

const ZERO_LOG: u32 = u32::MAX;

/// The finite field `GF(p^k)`.
///
/// An element is coded as `Σ c_i p^i` where `Σ c_i x^i` is its polynomial
/// representative modulo `modulus`; in particular `GF(p)` elements are the
/// integers `0..p` and keep their codes inside every extension. The class of
/// `x` is a primitive element.
pub struct Fq {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    /// `zech[n] = log(1 + g^n)`, or `ZERO_LOG` when that sum vanishes.
    zech: Vec<u32>,
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// `(p, k)` with `q = p^k`, if `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let (mut rest, mut k) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

impl Fq {
    pub fn new(p: u64, k: u32) -> Result<Fq> {
        if !is_prime(p) {
            return Err(Error::InvalidArgument(format!("{p} is not prime")));
        }
        if k == 0 {
            return Err(Error::InvalidArgument("extension degree must be positive".into()));
        }
        let q = p
            .checked_pow(k)
            .filter(|&q| q <= MAX_FIELD_ORDER)
            .ok_or_else(|| Error::budget("field order", u128::from(p).pow(k.min(30)), MAX_FIELD_ORDER))?;
        let (p, q) = (p as u32, q as u32);
        for code in 1..q {
            // code encodes c_0 .. c_{k-1}; the modulus is x^k + Σ c_i x^i.
            if code % p == 0 {
                continue;
            }
            let mut modulus: Vec<u32> = (0..k).map(|i| code / p.pow(i) % p).collect();
            modulus.push(1);
            if let Some(exp) = powers_of_x(p, &modulus, q) {
                return Ok(Fq::from_tables(p, k, q, modulus, exp));
            }
        }
        unreachable!("every finite field has a primitive polynomial")
    }

    fn from_tables(p: u32, k: u32, q: u32, modulus: Vec<u32>, exp: Vec<u32>) -> Fq {
        let mut log = vec![ZERO_LOG; q as usize];
        for (i, &e) in exp.iter().enumerate() {
            log[e as usize] = i as u32;
        }
        let mut field = Fq {
            p,
            k,
            q,
            modulus,
            exp,
            log,
            zech: Vec::new(),
        };
        field.zech = (0..q - 1)
            .map(|n| field.log[field.add_digits(1, field.exp[n as usize]) as usize])
            .collect();
        field
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Coefficients `c_0 .. c_k` of the monic modulus.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn primitive_element(&self) -> u32 {
        self.exp[1 % self.exp.len()]
    }

    pub fn same_field(&self, other: &Fq) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }

    /// Coefficient vector of an element.
    pub fn coefficients(&self, a: u32) -> Vec<u32> {
        (0..self.k).map(|i| a / self.p.pow(i) % self.p).collect()
    }

    pub fn from_coefficients(&self, coeffs: &[u32]) -> Result<u32> {
        if coeffs.len() > self.k as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::InvalidArgument(format!(
                "{coeffs:?} is not a coefficient vector over GF({})",
                self.p
            )));
        }
        Ok(coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c))
    }

    fn add_digits(&self, a: u32, b: u32) -> u32 {
        let (mut a, mut b) = (a, b);
        let (mut out, mut place) = (0, 1);
        while a > 0 || b > 0 {
            out += (a % self.p + b % self.p) % self.p * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            let s = a + b;
            return if s >= self.p { s - self.p } else { s };
        }
        if a == 0 {
            return b;
        }
        if b == 0 {
            return a;
        }
        let (la, lb) = (self.log[a as usize], self.log[b as usize]);
        let n = self.q - 1;
        let diff = if lb >= la { lb - la } else { lb + n - la };
        match self.zech[diff as usize] {
            ZERO_LOG => 0,
            z => self.exp[((la + z) % n) as usize],
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            return 0;
        }
        if self.k == 1 {
            return self.p - a;
        }
        if self.p == 2 {
            return a;
        }
        let n = self.q - 1;
        self.exp[((self.log[a as usize] + n / 2) % n) as usize]
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
        if self.k == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        let n = self.q - 1;
        let s = self.log[a as usize] + self.log[b as usize];
        self.exp[(if s >= n { s - n } else { s }) as usize]
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::InvalidArgument("zero has no inverse".into()));
        }
        let n = self.q - 1;
        Ok(self.exp[((n - self.log[a as usize]) % n) as usize])
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = (self.q - 1) as u64;
        self.exp[((self.log[a as usize] as u64 * (e % n)) % n) as usize]
    }

    /// `g^i` for the primitive element `g`.
    pub fn exp(&self, i: u64) -> u32 {
        self.exp[(i % (self.q as u64 - 1)) as usize]
    }

    /// Discrete log to the primitive element; `None` for zero.
    pub fn log(&self, a: u32) -> Option<u32> {
        match self.log[a as usize] {
            ZERO_LOG => None,
            l => Some(l),
        }
    }

    pub fn frobenius(&self, a: u32) -> u32 {
        self.pow(a, self.p as u64)
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: u32) -> Option<u64> {
        let l = self.log(a)? as u64;
        let n = self.q as u64 - 1;
        Some(n / gcd(n, l))
    }

    /// An element of exact multiplicative order `r`, if `r | q - 1`.
    pub fn root_of_unity(&self, r: u64) -> Option<u32> {
        let n = self.q as u64 - 1;
        (r > 0 && n.is_multiple_of(r)).then(|| self.exp(n / r))
    }

    /// A square root of `a`, if one exists.
    pub fn sqrt(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return Some(0);
        }
        if self.p == 2 {
            return Some(self.pow(a, self.q as u64 / 2));
        }
        let l = self.log(a)?;
        (l % 2 == 0).then(|| self.exp(l as u64 / 2))
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }
}

/// Successive powers `x^0 .. x^(q-2)` if `x` has order exactly `q - 1`.
fn powers_of_x(p: u32, modulus: &[u32], q: u32) -> Option<Vec<u32>> {
    let k = modulus.len() - 1;
    let mut poly = vec![0u32; k];
    poly[0] = 1;
    let encode = |v: &[u32]| v.iter().rev().fold(0u32, |acc, &c| acc * p + c);
    let mut exp = Vec::with_capacity(q as usize - 1);
    for i in 0..q - 1 {
        let code = encode(&poly);
        if i > 0 && code == 1 {
            return None;
        }
        exp.push(code);
        // multiply by x and reduce by the monic modulus
        let top = poly[k - 1];
        for j in (1..k).rev() {
            poly[j] = poly[j - 1];
        }
        poly[0] = 0;
        for j in 0..k {
            poly[j] = (poly[j] + (p - modulus[j]) % p * top) % p;
        }
    }
    (encode(&poly) == 1).then_some(exp)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn field_make(p: u64, k: u32) -> Result<Arc<Fq>> {
    Fq::new(p, k).map(Arc::new)
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) mod {:?}", self.p, self.k, self.modulus)
    }
}

impl PartialEq for Fq {
    fn eq(&self, other: &Fq) -> bool {
        self.same_field(other)
    }
}

impl Eq for Fq {}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_fields() {
        let f9 = Fq::new(3, 2).unwrap();
        assert_eq!(f9.order(), 9);
        assert_eq!(f9.element_order(f9.primitive_element()), Some(8));
        let f8 = Fq::new(2, 3).unwrap();
        assert_eq!(f8.element_order(f8.primitive_element()), Some(7));
        assert!(Fq::new(4, 1).is_err());
        assert!(Fq::new(2, 21).is_err());
        assert!(Fq::new(3, 0).is_err());
    }

    #[test]
    fn moduli_are_least_primitive() {
        assert_eq!(Fq::new(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(Fq::new(3, 2).unwrap().modulus(), &[2, 1, 1]);
        // GF(5) is cut out by x + 2, so x is the class of 3
        let f5 = Fq::new(5, 1).unwrap();
        assert_eq!(f5.primitive_element(), 3);
    }

    #[test]
    fn prime_subfield_codes_are_integers() {
        let f = Fq::new(5, 2).unwrap();
        for a in 0..5 {
            for b in 0..5 {
                assert_eq!(f.add(a, b), (a + b) % 5);
                assert_eq!(f.mul(a, b), a * b % 5);
            }
        }
    }

    #[test]
    fn prime_power_detection() {
        assert_eq!(prime_power(81), Some((3, 4)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
        assert_eq!(prime_power(7), Some((7, 1)));
    }

    #[test]
    fn roots_and_square_roots() {
        let f = Fq::new(7, 1).unwrap();
        let w = f.root_of_unity(3).unwrap();
        assert_eq!(f.element_order(w), Some(3));
        assert!(f.root_of_unity(4).is_none());
        assert!(f.sqrt(f.neg(1)).is_none());
        let f9 = Fq::new(3, 2).unwrap();
        let i = f9.sqrt(f9.neg(1)).unwrap();
        assert_eq!(f9.mul(i, i), f9.neg(1));
    }

    proptest! {
        #[test]
        fn field_axioms(pk in prop::sample::select(vec![(2u64, 4u32), (3, 3), (5, 2), (7, 1), (2, 1)]), a in 0u32..1000, b in 0u32..1000, c in 0u32..1000) {
            let f = Fq::new(pk.0, pk.1).unwrap();
            let (a, b, c) = (a % f.order(), b % f.order(), c % f.order());
            prop_assert_eq!(f.add(a, b), f.add(b, a));
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.add(a, f.neg(a)), 0);
            prop_assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
            if a != 0 {
                prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
        }
    }
}
