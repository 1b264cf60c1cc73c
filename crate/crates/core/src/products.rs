//! Direct, imprimitive wreath and product-action wreath products.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{PermGroup, Permutation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProductMode {
    /// `K × L` on the disjoint union.
    Direct,
    /// `K wr L` on `Γ × Δ`.
    Wreath,
    /// `K ↑ L` on `Γ^Δ`.
    Power,
}

pub fn product(k: &PermGroup, l: &PermGroup, mode: ProductMode) -> Result<PermGroup> {
    match mode {
        ProductMode::Direct => Ok(direct_sum(k, l)),
        ProductMode::Wreath => Ok(wreath_imprimitive(k, l)),
        ProductMode::Power => wreath_product_action(k, l),
    }
}

/// `K × L` acting on `{0..r-1} ∪ {r..r+d-1}`.
pub fn direct_sum(k: &PermGroup, l: &PermGroup) -> PermGroup {
    let (r, d) = (k.degree(), l.degree());
    let gens = k
        .generators()
        .iter()
        .map(|g| g.embed(r + d, 0))
        .chain(l.generators().iter().map(|g| g.embed(r + d, r)))
        .collect();
    PermGroup::new(r + d, gens).expect("embedded generators share the degree")
}

/// `K wr L` on `r·d` points; point `(γ, δ)` has index `δ·r + γ`, so block `δ`
/// is `{δr, .., δr + r - 1}`.
pub fn wreath_imprimitive(k: &PermGroup, l: &PermGroup) -> PermGroup {
    let (r, d) = (k.degree(), l.degree());
    let n = r * d;
    let mut gens: Vec<Permutation> = Vec::new();
    // Every block gets its own copy; with L intransitive the conjugates of
    // the first copy would not reach all blocks.
    for block in 0..d {
        gens.extend(k.generators().iter().map(|g| g.embed(n, block * r)));
    }
    for h in l.generators() {
        let images = (0..n).map(|x| h.image(x / r) * r + x % r).collect();
        gens.push(Permutation::from_images(images).unwrap());
    }
    PermGroup::new(n, gens).expect("generators share the degree")
}

/// `K ↑ L` on the `r^d` functions `Δ → Γ`. The tuple `(γ_0, .., γ_{d-1})`
/// has index `Σ γ_i r^(d-1-i)`.
pub fn wreath_product_action(k: &PermGroup, l: &PermGroup) -> Result<PermGroup> {
    let (r, d) = (k.degree(), l.degree());
    if !k.is_transitive() || !k.is_primitive()? {
        return Err(Error::Precondition("K must be primitive".into()));
    }
    if k.order_u64() == Some(r as u64) {
        return Err(Error::Precondition("K must be nonregular (K is regular)".into()));
    }
    if l.is_trivial() {
        return Err(Error::Precondition("L must be nontrivial".into()));
    }
    if !l.is_transitive() {
        return Err(Error::Precondition("L must be transitive".into()));
    }
    let n = r
        .checked_pow(d as u32)
        .filter(|&n| n <= u32::MAX as usize)
        .ok_or_else(|| Error::InvalidArgument(format!("degree {r}^{d} too large")))?;
    let decode = |mut x: usize| {
        let mut t = vec![0usize; d];
        for slot in t.iter_mut().rev() {
            *slot = x % r;
            x /= r;
        }
        t
    };
    let encode = |t: &[usize]| t.iter().fold(0usize, |acc, &g| acc * r + g);
    let mut gens = Vec::new();
    for g in k.generators() {
        let images = (0..n)
            .map(|x| {
                let mut t = decode(x);
                t[0] = g.image(t[0]);
                encode(&t)
            })
            .collect();
        gens.push(Permutation::from_images(images).unwrap());
    }
    for h in l.generators() {
        let images = (0..n)
            .map(|x| {
                let t = decode(x);
                let mut out = vec![0usize; d];
                for (delta, &gamma) in t.iter().enumerate() {
                    out[h.image(delta)] = gamma;
                }
                encode(&out)
            })
            .collect();
        gens.push(Permutation::from_images(images).unwrap());
    }
    let group = PermGroup::new(n, gens)?;
    if !group.is_primitive()? {
        return Err(Error::Verification("product action is not primitive".into()));
    }
    Ok(group)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    #[test]
    fn direct_sums() {
        let g = direct_sum(&PermGroup::cyclic(2), &PermGroup::cyclic(3));
        assert_eq!((g.degree(), g.order_u64()), (5, Some(6)));
        let s = direct_sum(&PermGroup::symmetric(3), &PermGroup::symmetric(3));
        assert_eq!(s.order_u64(), Some(36));
        assert_eq!(s.orbits(), vec![vec![0, 1, 2], vec![3, 4, 5]]);
        let padded = direct_sum(&PermGroup::trivial(2), &PermGroup::cyclic(3));
        assert_eq!(padded.generators()[0].images(), vec![0, 1, 3, 4, 2]);
    }

    #[test]
    fn imprimitive_wreaths() {
        let g = wreath_imprimitive(&PermGroup::cyclic(2), &PermGroup::cyclic(3));
        assert_eq!((g.degree(), g.order_u64()), (6, Some(24)));
        let d4 = wreath_imprimitive(&PermGroup::symmetric(2), &PermGroup::symmetric(2));
        assert_eq!((d4.degree(), d4.order_u64()), (4, Some(8)));
    }

    #[test]
    fn product_actions() {
        let g = wreath_product_action(&PermGroup::symmetric(3), &PermGroup::symmetric(2)).unwrap();
        assert_eq!((g.degree(), g.order_u64()), (9, Some(72)));
        let err = wreath_product_action(&PermGroup::cyclic(2), &PermGroup::cyclic(2)).unwrap_err();
        assert!(matches!(err, Error::Precondition(ref s) if s.contains("regular")));
        let err = wreath_product_action(&PermGroup::symmetric(3), &PermGroup::trivial(2)).unwrap_err();
        assert!(matches!(err, Error::Precondition(ref s) if s.contains("nontrivial")));
        let big = wreath_product_action(&PermGroup::symmetric(4), &PermGroup::alternating(3)).unwrap();
        assert_eq!(big.degree(), 64);
        assert_eq!(big.order(), &BigUint::from(41_472u32));
    }
}
