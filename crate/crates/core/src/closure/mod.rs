//! `m`-closures of permutation groups.

mod backtrack;
mod brute;
mod subgroup;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orbits::{tuple_count, TupleColoring, DEFAULT_TUPLE_BUDGET};
use crate::perm::{PermGroup, Permutation};

pub use brute::{closure_brute, for_each_permutation, two_closure_brute, BRUTE_MAX_DEGREE};

/// Limits for the closure searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureBudget {
    /// Largest degree handled by the 2-closure backtrack.
    pub backtrack_degree: usize,
    /// Largest degree for `m >= 3`.
    pub higher_arity_degree: usize,
    /// Cap on `n^m` for tuple colorings.
    pub tuple_cells: u64,
}

impl Default for ClosureBudget {
    fn default() -> Self {
        ClosureBudget {
            backtrack_degree: 128,
            higher_arity_degree: 64,
            tuple_cells: DEFAULT_TUPLE_BUDGET,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub prunes: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClosureMethod {
    Backtrack,
    BruteForce,
    Structural,
}

#[derive(Clone, Debug)]
pub struct ClosureResult {
    pub closed_group: PermGroup,
    pub arity: usize,
    pub input_order: BigUint,
    pub closed_order: BigUint,
    pub method: ClosureMethod,
    pub stats: SearchStats,
}

impl ClosureResult {
    fn new(input: &PermGroup, closed: PermGroup, arity: usize, method: ClosureMethod, stats: SearchStats) -> Self {
        ClosureResult {
            input_order: input.order().clone(),
            closed_order: closed.order().clone(),
            closed_group: closed,
            arity,
            method,
            stats,
        }
    }

    pub fn is_closed(&self) -> bool {
        self.input_order == self.closed_order
    }
}

/// Product of the symmetric groups on the orbits.
pub fn one_closure(group: &PermGroup) -> PermGroup {
    let n = group.degree();
    let mut gens = Vec::new();
    for orbit in group.orbits() {
        if orbit.len() >= 2 {
            gens.push(Permutation::from_cycles(n, &[&orbit[..2]]).unwrap());
        }
        if orbit.len() >= 3 {
            gens.push(Permutation::from_cycles(n, &[&orbit[..]]).unwrap());
        }
    }
    PermGroup::new(n, gens).expect("generators share the degree")
}

pub fn two_closure(group: &PermGroup) -> Result<ClosureResult> {
    two_closure_with(group, &ClosureBudget::default())
}

pub fn two_closure_with(group: &PermGroup, budget: &ClosureBudget) -> Result<ClosureResult> {
    let n = group.degree();
    if n > budget.backtrack_degree {
        return Err(Error::budget(
            "degree for 2-closure backtrack",
            n as u64,
            budget.backtrack_degree as u64,
        ));
    }
    let coloring = TupleColoring::with_budget(group, 2, budget.tuple_cells)?;
    let cm = backtrack::ColorMatrix::new(n, coloring.colors());
    let mut stats = SearchStats::default();
    let closed = backtrack::automorphism_group(&cm, group.generators(), &mut stats)?;
    Ok(ClosureResult::new(group, closed, 2, ClosureMethod::Backtrack, stats))
}

pub fn m_closure(group: &PermGroup, m: usize) -> Result<ClosureResult> {
    m_closure_with(group, m, &ClosureBudget::default())
}

/// `G^(m)`. For `m >= 3` the search runs inside `G^(2)`, which contains it.
pub fn m_closure_with(group: &PermGroup, m: usize, budget: &ClosureBudget) -> Result<ClosureResult> {
    match m {
        0 => Err(Error::InvalidArgument("arity must be at least 1".into())),
        1 => Ok(ClosureResult::new(
            group,
            one_closure(group),
            1,
            ClosureMethod::Structural,
            SearchStats::default(),
        )),
        2 => two_closure_with(group, budget),
        _ => {
            let n = group.degree();
            if n > budget.higher_arity_degree {
                return Err(Error::budget(
                    "degree for m-closure",
                    n as u64,
                    budget.higher_arity_degree as u64,
                ));
            }
            let cells = tuple_count(n, m).unwrap_or(u64::MAX);
            if cells > budget.tuple_cells {
                return Err(Error::budget("tuple count n^m", cells, budget.tuple_cells));
            }
            let two = two_closure_with(group, budget)?;
            let mut stats = two.stats;
            if two.closed_order == *group.order() {
                return Ok(ClosureResult::new(group, two.closed_group, m, ClosureMethod::Backtrack, stats));
            }
            let coloring = TupleColoring::with_budget(group, m, budget.tuple_cells)?;
            let closed = subgroup::preserving_subgroup(&two.closed_group, group, &coloring, &mut stats)?;
            if let Some(bad) = closed.generators().iter().find(|g| !coloring.preserved_by(g)) {
                return Err(Error::Verification(format!(
                    "closure generator {bad} fails the tuple check"
                )));
            }
            Ok(ClosureResult::new(group, closed, m, ClosureMethod::Backtrack, stats))
        }
    }
}

/// The subgroup of `overgroup` preserving every `m`-orbit of `group`, by a
/// coset search along `overgroup`'s stabilizer chain. With `overgroup` the
/// full symmetric group this is `G^(m)`; it serves as an independent check
/// on the backtrack used by [`two_closure`].
pub fn closure_within(group: &PermGroup, overgroup: &PermGroup, m: usize) -> Result<PermGroup> {
    if overgroup.degree() != group.degree() {
        return Err(Error::DegreeMismatch {
            expected: group.degree(),
            got: overgroup.degree(),
        });
    }
    if !group.is_subgroup_of(overgroup) {
        return Err(Error::Precondition("group is not contained in the overgroup".into()));
    }
    let coloring = TupleColoring::new(group, m)?;
    let mut stats = SearchStats::default();
    subgroup::preserving_subgroup(overgroup, group, &coloring, &mut stats)
}

pub fn is_m_closed(group: &PermGroup, m: usize) -> Result<bool> {
    Ok(m_closure(group, m)?.is_closed())
}

/// How to pick candidate points when searching a large domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "strategy", rename_all = "lowercase")]
pub enum PointSearch {
    Exhaustive,
    Random { max_samples: usize, seed: u64 },
}

/// Domain size above which random sampling replaces exhaustive search.
pub const EXHAUSTIVE_DOMAIN_LIMIT: usize = 1 << 16;

impl PointSearch {
    /// Exhaustive on small domains, otherwise seeded sampling.
    pub fn for_domain(size: usize, max_samples: usize, seed: u64) -> Self {
        if size <= EXHAUSTIVE_DOMAIN_LIMIT {
            PointSearch::Exhaustive
        } else {
            PointSearch::Random { max_samples, seed }
        }
    }

    /// Candidate points in search order, skipping those in `skip`.
    pub fn points(&self, domain: &[usize]) -> Vec<usize> {
        match *self {
            PointSearch::Exhaustive => domain.to_vec(),
            PointSearch::Random { max_samples, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..max_samples.min(domain.len().max(1)))
                    .filter(|_| !domain.is_empty())
                    .map(|_| domain[rng.gen_range(0..domain.len())])
                    .collect()
            }
        }
    }
}

/// A point whose orbit is regular, searched in ascending order.
pub fn is_partly_regular(group: &PermGroup) -> Option<usize> {
    let domain: Vec<usize> = (0..group.degree()).collect();
    partly_regular_point(group, &domain, PointSearch::for_domain(domain.len(), 256, 0))
}

/// A point of `domain` (tried in `search` order) with orbit length `|G|`.
/// A trivial stabilizer makes the orbit action faithful as well.
pub fn partly_regular_point(group: &PermGroup, domain: &[usize], search: PointSearch) -> Option<usize> {
    let order = group.order_u64()?;
    if order > group.degree() as u64 {
        return None;
    }
    let mut orbit_len = vec![0usize; group.degree()];
    for orbit in group.orbits() {
        for &x in &orbit {
            orbit_len[x] = orbit.len();
        }
    }
    search
        .points(domain)
        .into_iter()
        .find(|&a| orbit_len[a] as u64 == order)
}

/// Whether the action on the orbit of `alpha` is faithful and 2-closed.
pub fn is_two_closed_restriction(group: &PermGroup, alpha: usize) -> Result<bool> {
    let orbit = group.orbit(alpha)?;
    let (restricted, faithful) = group.restriction(&orbit)?;
    if !faithful {
        return Ok(false);
    }
    is_m_closed(&restricted, 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Permutation {
        Permutation::from_images(v.to_vec()).unwrap()
    }

    fn agl15() -> PermGroup {
        PermGroup::new(5, vec![p(&[1, 2, 3, 4, 0]), p(&[0, 2, 4, 1, 3])]).unwrap()
    }

    #[test]
    fn one_closure_examples() {
        assert_eq!(one_closure(&PermGroup::cyclic(5)).order_u64(), Some(120));
        assert!(one_closure(&PermGroup::trivial(3)).is_trivial());
        let g = PermGroup::new(5, vec![p(&[1, 0, 2, 3, 4]), p(&[0, 1, 3, 4, 2])]).unwrap();
        assert_eq!(one_closure(&g).order_u64(), Some(12));
    }

    #[test]
    fn two_closure_examples() {
        assert_eq!(two_closure(&PermGroup::cyclic(5)).unwrap().closed_group.order_u64(), Some(5));
        assert_eq!(two_closure(&PermGroup::dihedral(5)).unwrap().closed_group.order_u64(), Some(10));
        let r = two_closure(&agl15()).unwrap();
        assert_eq!(r.closed_group.order_u64(), Some(120));
        assert!(!r.is_closed());
        assert_eq!(two_closure(&PermGroup::trivial(4)).unwrap().closed_group.order_u64(), Some(1));
    }

    #[test]
    fn matches_brute_on_small_groups() {
        let groups = vec![
            PermGroup::cyclic(6),
            PermGroup::dihedral(6),
            PermGroup::alternating(5),
            PermGroup::cyclic(4),
            agl15(),
            PermGroup::new(6, vec![p(&[1, 0, 3, 2, 5, 4]), p(&[2, 3, 4, 5, 0, 1])]).unwrap(),
        ];
        for g in groups {
            let fast = two_closure(&g).unwrap().closed_group;
            let slow = two_closure_brute(&g).unwrap();
            assert!(fast.same_group(&slow), "{:?}", g.generators());
        }
    }

    #[test]
    fn higher_closures() {
        assert!(is_m_closed(&PermGroup::cyclic(3), 3).unwrap());
        assert!(is_m_closed(&PermGroup::symmetric(5), 3).unwrap());
        let r = m_closure(&agl15(), 3).unwrap();
        let brute = closure_brute(&agl15(), 3).unwrap();
        assert!(r.closed_group.same_group(&brute));
        assert!(m_closure(&PermGroup::cyclic(4), 0).is_err());
    }

    #[test]
    fn closure_within_agrees() {
        for g in [agl15(), PermGroup::dihedral(6), PermGroup::cyclic(7)] {
            let n = g.degree();
            let within = closure_within(&g, &PermGroup::symmetric(n), 2).unwrap();
            assert!(within.same_group(&two_closure(&g).unwrap().closed_group));
        }
        assert!(closure_within(&PermGroup::symmetric(4), &PermGroup::cyclic(4), 2).is_err());
    }

    #[test]
    fn partly_regular_examples() {
        assert_eq!(is_partly_regular(&PermGroup::cyclic(8)), Some(0));
        assert_eq!(is_partly_regular(&PermGroup::symmetric(3)), None);
    }

    #[test]
    fn two_closed_restriction_examples() {
        assert!(is_two_closed_restriction(&PermGroup::symmetric(3), 0).unwrap());
        assert!(is_two_closed_restriction(&PermGroup::cyclic(8), 3).unwrap());
        // Zero-stabilizer of AGL(1,5): C4 acting on {1,2,3,4}.
        let c4 = PermGroup::new(5, vec![p(&[0, 2, 4, 1, 3])]).unwrap();
        assert!(is_two_closed_restriction(&c4, 1).unwrap());
        // Alt(4) is 2-transitive, its 2-closure is Sym(4).
        assert!(!is_two_closed_restriction(&PermGroup::alternating(4), 0).unwrap());
    }
}
