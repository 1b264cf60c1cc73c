//! Parameters of solvable primitive linear groups, the table of maximal
//! solvable subgroups of small classical groups, and candidate assembly.

mod candidates;
mod spo;

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linear::is_prime;

pub use candidates::{assemble_candidates, Candidate, CandidateGroup, CatalogConfig};
pub use spo::{
    bundled_data, evaluate_word, max_solvable_in_s, spo_search, verify_bundled, BundledEntry,
    BundledGroup, CoreInvariant, SearchTarget, SolvableSource, SolvableSubgroup, SpoData,
};

/// Values of `e` for which a group can fail to be partly regular.
pub const EXCEPTIONAL_E: [u64; 6] = [2, 3, 4, 8, 9, 16];

/// `(p, d, a, e)` with `d = a e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Parameters {
    pub p: u64,
    pub d: u32,
    pub a: u32,
    pub e: u64,
}

/// `(r, k, b)` with `e = r^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Derived {
    pub r: u32,
    pub k: usize,
    pub b: u32,
}

impl Parameters {
    pub fn new(p: u64, d: u32, a: u32, e: u64) -> Self {
        Parameters { p, d, a, e }
    }

    /// `r` and `k` when `e` is a power of 2 or 3, and `b`.
    pub fn derived(&self) -> Result<Derived> {
        let (r, k) = prime_power_of(self.e)
            .filter(|&(r, _)| r == 2 || r == 3)
            .ok_or_else(|| Error::InvalidArgument(format!("e = {} is not a power of 2 or 3", self.e)))?;
        let b = derive_b(self.p, r as u64)?;
        Ok(Derived { r, k, b })
    }

    /// `p^d`, the size of the vector space.
    pub fn vector_count(&self) -> Option<u64> {
        self.p.checked_pow(self.d)
    }
}

impl fmt::Display for Parameters {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(p={}, d={}, a={}, e={})", self.p, self.d, self.a, self.e)
    }
}

fn prime_power_of(n: u64) -> Option<(u32, usize)> {
    for r in [2u64, 3] {
        let mut m = n;
        let mut k = 0;
        while m > 1 && m.is_multiple_of(r) {
            m /= r;
            k += 1;
        }
        if m == 1 && k > 0 {
            return Some((r as u32, k));
        }
    }
    None
}

/// Least `b >= 1` with `p^b ≡ 1` modulo 4 (`r = 2`) or modulo `r` otherwise.
pub fn derive_b(p: u64, r: u64) -> Result<u32> {
    if p == r {
        return Err(Error::InvalidArgument(format!("p = r = {p}")));
    }
    if !is_prime(p) || !is_prime(r) {
        return Err(Error::InvalidArgument(format!("{p} and {r} must be prime")));
    }
    let modulus = if r == 2 { 4 } else { r };
    let mut x = p % modulus;
    for b in 1..=modulus as u32 {
        if x == 1 {
            return Ok(b);
        }
        x = x * p % modulus;
    }
    Err(Error::InvalidArgument(format!("{p} is not invertible modulo {modulus}")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NotPrime { p: u64 },
    DimensionMismatch { d: u32, a: u32, e: u64 },
    PrimeDivisorOfE { prime: u64, p: u64, a: u32 },
    NotExceptional { e: u64 },
    ZeroParameter,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotPrime { p } => write!(f, "{p} is not prime"),
            Violation::DimensionMismatch { d, a, e } => write!(f, "d = {d} but a·e = {}", *a as u64 * e),
            Violation::PrimeDivisorOfE { prime, p, a } => {
                write!(f, "{prime} divides e but not {p}^{a} - 1")
            }
            Violation::NotExceptional { e } => write!(f, "e = {e} is not one of {EXCEPTIONAL_E:?}"),
            Violation::ZeroParameter => f.write_str("a and e must be positive"),
        }
    }
}

/// All violated conditions; empty means valid.
pub fn validate_parameters(params: &Parameters, require_exceptional: bool) -> Vec<Violation> {
    let Parameters { p, d, a, e } = *params;
    let mut out = Vec::new();
    if a == 0 || e == 0 {
        out.push(Violation::ZeroParameter);
        return out;
    }
    if !is_prime(p) {
        out.push(Violation::NotPrime { p });
    }
    if d as u64 != a as u64 * e {
        out.push(Violation::DimensionMismatch { d, a, e });
    }
    if is_prime(p) {
        let pa_minus_one = (p as u128).checked_pow(a).map(|x| x - 1);
        let mut n = e;
        let mut q = 2;
        while n > 1 {
            if n % q == 0 {
                let divides = pa_minus_one.is_some_and(|m| m % q as u128 == 0)
                    || pa_minus_one.is_none() && pow_mod(p, a, q) == 1;
                if !divides {
                    out.push(Violation::PrimeDivisorOfE { prime: q, p, a });
                }
                while n % q == 0 {
                    n /= q;
                }
            }
            q += 1;
        }
    }
    if require_exceptional && !EXCEPTIONAL_E.contains(&e) {
        out.push(Violation::NotExceptional { e });
    }
    out
}

fn pow_mod(base: u64, exp: u32, m: u64) -> u64 {
    let mut acc = 1u128;
    for _ in 0..exp {
        acc = acc * base as u128 % m as u128;
    }
    acc as u64
}

/// Classical groups `S` for a given `e`, with the orders of their maximal
/// solvable subgroups `M` that satisfy the radical condition.
pub const TABLE1: &[(u64, &str, &[u64])] = &[
    (9, "Sp(4,3)", &[40, 192, 320, 1152]),
    (8, "Sp(6,2)", &[42, 120, 1296]),
    (8, "O+(6,2)", &[42, 120, 144]),
    (8, "O-(6,2)", &[40, 1296]),
    (4, "Sp(4,2)", &[20, 72]),
    (4, "O+(4,2)", &[72]),
    (4, "O-(4,2)", &[12, 20]),
    (3, "Sp(2,3)", &[24]),
    (2, "Sp(2,2)", &[6]),
    (2, "O+(2,2)", &[2]),
    (2, "O-(2,2)", &[6]),
];

pub fn table1_orders(e: u64, s_name: &str) -> Result<Vec<u64>> {
    let s_name = s_name.replace('−', "-");
    TABLE1
        .iter()
        .find(|(row_e, name, _)| *row_e == e && *name == s_name)
        .map(|(_, _, orders)| orders.to_vec())
        .ok_or_else(|| Error::InvalidArgument(format!("({e}, {s_name}) is not a table row")))
}

/// Classical groups listed for `e`.
pub fn table1_groups(e: u64) -> Vec<&'static str> {
    TABLE1.iter().filter(|row| row.0 == e).map(|row| row.1).collect()
}

/// `(p^a - 1) e^2 s a'`.
pub fn candidate_order(p: u64, a: u32, e: u64, s: u64, a_div: u32) -> Result<BigUint> {
    if e < 2 {
        return Err(Error::Precondition("the order formula needs e > 1".into()));
    }
    if a == 0 || a_div == 0 || !a.is_multiple_of(a_div) {
        return Err(Error::Precondition(format!("a' = {a_div} does not divide a = {a}")));
    }
    if !TABLE1.iter().any(|(row_e, _, orders)| *row_e == e && orders.contains(&s)) {
        return Err(Error::Precondition(format!("{s} is not a listed order for e = {e}")));
    }
    let pa = BigUint::from(p).pow(a);
    Ok((pa - 1u32) * BigUint::from(e * e) * BigUint::from(s) * BigUint::from(a_div))
}
