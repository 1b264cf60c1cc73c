//! Exhaustive closure oracles over all of `Sym(n)`.

use crate::error::{Error, Result};
use crate::orbits::{TupleColoring, DEFAULT_TUPLE_BUDGET};
use crate::perm::{PermGroup, Permutation};

/// Largest degree for which `Sym(n)` is scanned.
pub const BRUTE_MAX_DEGREE: usize = 9;

/// Calls `f` on every permutation of `{0..n-1}` (Heap's algorithm).
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut a: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    f(&a);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            f(&a);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// `G^(m)` by filtering `Sym(n)`.
pub fn closure_brute(group: &PermGroup, m: usize) -> Result<PermGroup> {
    let n = group.degree();
    if n > BRUTE_MAX_DEGREE {
        return Err(Error::budget(
            "degree for brute-force closure",
            n as u64,
            BRUTE_MAX_DEGREE as u64,
        ));
    }
    let coloring = TupleColoring::with_budget(group, m, DEFAULT_TUPLE_BUDGET)?;
    let mut result = PermGroup::with_base(n, group.generators().to_vec(), &[])?;
    for_each_permutation(n, |images| {
        let h = Permutation::from_images(images.to_vec()).unwrap();
        if !result.contains_unchecked(&h) && coloring.preserved_by(&h) {
            result = result.extended(&[h]).unwrap();
        }
    });
    Ok(result)
}

pub fn two_closure_brute(group: &PermGroup) -> Result<PermGroup> {
    closure_brute(group, 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heap_visits_every_permutation_once() {
        let mut seen = std::collections::HashSet::new();
        for_each_permutation(5, |p| {
            assert!(seen.insert(p.to_vec()));
        });
        assert_eq!(seen.len(), 120);
    }

    #[test]
    fn brute_examples() {
        assert_eq!(two_closure_brute(&PermGroup::cyclic(5)).unwrap().order_u64(), Some(5));
        assert_eq!(two_closure_brute(&PermGroup::trivial(3)).unwrap().order_u64(), Some(1));
        assert_eq!(two_closure_brute(&PermGroup::symmetric(4)).unwrap().order_u64(), Some(24));
        assert!(two_closure_brute(&PermGroup::cyclic(10)).is_err());
    }
}
