use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::group::PermGroup;
use super::permutation::Permutation;
use crate::error::{Error, Result};

/// The `r`-part of `n`.
pub fn prime_part(n: &BigUint, r: u64) -> BigUint {
    let r = BigUint::from(r);
    let mut n = n.clone();
    let mut part = BigUint::one();
    while !n.is_zero() && (&n % &r).is_zero() {
        n /= &r;
        part *= &r;
    }
    part
}

pub fn is_power_of(n: &BigUint, r: u64) -> bool {
    prime_part(n, r) == *n
}

fn check_prime(r: u64) -> Result<()> {
    if r < 2 || (2..r).take_while(|d| d * d <= r).any(|d| r.is_multiple_of(d)) {
        return Err(Error::InvalidArgument(format!("{r} is not prime")));
    }
    Ok(())
}

impl PermGroup {
    /// A Sylow `r`-subgroup, grown greedily from `r`-elements in enumeration order.
    ///
    /// An element rejected against a smaller `P` stays rejected later, so a
    /// single pass suffices.
    pub fn sylow_subgroup(&self, r: u64, limit: u64) -> Result<PermGroup> {
        check_prime(r)?;
        let target = prime_part(self.order(), r);
        let mut p = PermGroup::trivial(self.degree());
        if p.order() == &target {
            return Ok(p);
        }
        for x in self.elements_with_limit(limit)? {
            if x.is_identity() || !x.is_prime_power_element(r) || p.contains_unchecked(&x) {
                continue;
            }
            let q = p.extended(std::slice::from_ref(&x))?;
            if is_power_of(q.order(), r) {
                p = q;
                if p.order() == &target {
                    return Ok(p);
                }
            }
        }
        Err(Error::Verification(format!(
            "no Sylow {r}-subgroup found (reached order {})",
            p.order()
        )))
    }

    /// Sylow `r`-subgroup and its normalizer, both by element enumeration.
    pub fn sylow_and_normalizer(&self, r: u64, limit: u64) -> Result<(PermGroup, PermGroup)> {
        let p = self.sylow_subgroup(r, limit)?;
        let n = self.normalizer_by_enumeration(&p, limit)?;
        Ok((p, n))
    }

    /// Largest normal `r`-subgroup.
    pub fn r_radical(&self, r: u64, limit: u64) -> Result<PermGroup> {
        let p = self.sylow_subgroup(r, limit)?;
        let mut current: Vec<Permutation> = p.elements_with_limit(limit)?.collect();
        let mut group = p;
        loop {
            let kept: Vec<Permutation> = current
                .iter()
                .filter(|x| {
                    self.generators()
                        .iter()
                        .all(|g| group.contains_unchecked(&x.conjugate_by(g)))
                })
                .cloned()
                .collect();
            if kept.len() == current.len() {
                return Ok(group);
            }
            // The kept set is an intersection of subgroups, hence a subgroup.
            group = PermGroup::new(self.degree(), kept.clone())?;
            debug_assert_eq!(group.order(), &BigUint::from(kept.len()));
            current = kept;
        }
    }
}

/// Integer `r`-part helper for `u64` orders.
pub fn prime_part_u64(n: u64, r: u64) -> u64 {
    let mut n = n;
    let mut part = 1;
    while n > 0 && n.is_multiple_of(r) {
        n /= r;
        part *= r;
    }
    part
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sym4_sylow_three() {
        let (p, n) = PermGroup::symmetric(4).sylow_and_normalizer(3, 1000).unwrap();
        assert_eq!(p.order(), &BigUint::from(3u32));
        assert_eq!(n.order(), &BigUint::from(6u32));
    }

    #[test]
    fn sym5_sylow_two() {
        let (p, n) = PermGroup::symmetric(5).sylow_and_normalizer(2, 1000).unwrap();
        assert_eq!(p.order(), &BigUint::from(8u32));
        assert_eq!(n.order(), &BigUint::from(8u32));
    }

    #[test]
    fn radicals() {
        let s4 = PermGroup::symmetric(4);
        assert_eq!(s4.r_radical(2, 1000).unwrap().order(), &BigUint::from(4u32));
        assert_eq!(s4.r_radical(3, 1000).unwrap().order(), &BigUint::from(1u32));
        assert_eq!(
            PermGroup::dihedral(4).r_radical(2, 1000).unwrap().order(),
            &BigUint::from(8u32)
        );
    }

    #[test]
    fn non_prime_rejected() {
        assert!(PermGroup::symmetric(4).sylow_subgroup(4, 1000).is_err());
    }

    #[test]
    fn prime_parts() {
        assert_eq!(prime_part(&BigUint::from(1_451_520u32), 2), BigUint::from(512u32));
        assert_eq!(prime_part_u64(720, 3), 9);
    }
}
