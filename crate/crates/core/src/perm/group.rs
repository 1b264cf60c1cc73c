use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::Rng;

use super::chain::StabChain;
use super::permutation::Permutation;
use crate::error::{Error, Result};

/// Default cap on element enumeration.
pub const DEFAULT_ENUMERATION_LIMIT: u64 = 5_000_000;

/// A permutation group given by generators, with a complete stabilizer chain.
///
/// Immutable once built; every constructor runs Schreier-Sims deterministically
/// so bases and orders are reproducible.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    chain: StabChain,
    order: BigUint,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        PermGroup::with_base(degree, generators, &[])
    }

    /// Like [`PermGroup::new`] but the chain's base starts with `base_prefix`.
    pub fn with_base(
        degree: usize,
        generators: Vec<Permutation>,
        base_prefix: &[usize],
    ) -> Result<Self> {
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    got: g.degree(),
                });
            }
        }
        if let Some(&b) = base_prefix.iter().find(|&&b| b >= degree) {
            return Err(Error::PointOutOfRange { point: b, degree });
        }
        let mut chain = StabChain::new(degree, base_prefix);
        for g in &generators {
            chain.add_generator(g);
        }
        check_overflow(&chain)?;
        let order = chain.order();
        let generators = generators.into_iter().filter(|g| !g.is_identity()).collect();
        Ok(PermGroup {
            degree,
            generators,
            chain,
            order,
        })
    }

    /// Group from a nonempty generator list; the degree is taken from the list.
    pub fn from_generators(generators: Vec<Permutation>) -> Result<Self> {
        let degree = generators
            .first()
            .map(|g| g.degree())
            .ok_or_else(|| Error::InvalidArgument("empty generator list has no degree".into()))?;
        PermGroup::new(degree, generators)
    }

    fn from_chain(degree: usize, generators: Vec<Permutation>, chain: StabChain) -> Self {
        let order = chain.order();
        PermGroup {
            degree,
            generators,
            chain,
            order,
        }
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup::new(degree, Vec::new()).expect("trivial group")
    }

    pub fn symmetric(n: usize) -> Self {
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(Permutation::from_cycles(n, &[&[0, 1]]).unwrap());
        }
        if n >= 3 {
            let cycle: Vec<usize> = (0..n).collect();
            gens.push(Permutation::from_cycles(n, &[&cycle]).unwrap());
        }
        PermGroup::new(n, gens).unwrap()
    }

    pub fn alternating(n: usize) -> Self {
        let gens = (2..n)
            .map(|k| Permutation::from_cycles(n, &[&[0, 1, k]]).unwrap())
            .collect();
        PermGroup::new(n, gens).unwrap()
    }

    pub fn cyclic(n: usize) -> Self {
        let cycle: Vec<usize> = (0..n).collect();
        let gens = if n >= 2 {
            vec![Permutation::from_cycles(n, &[&cycle]).unwrap()]
        } else {
            Vec::new()
        };
        PermGroup::new(n, gens).unwrap()
    }

    /// Dihedral group of order `2n` acting on the `n`-gon.
    pub fn dihedral(n: usize) -> Self {
        let mut gens = PermGroup::cyclic(n).generators;
        if n >= 3 {
            let refl: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
            gens.push(Permutation::from_images(refl).unwrap());
        }
        PermGroup::new(n, gens).unwrap()
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub fn order_u64(&self) -> Option<u64> {
        self.order.to_u64()
    }

    pub fn is_trivial(&self) -> bool {
        self.order.is_one()
    }

    pub fn base(&self) -> Vec<usize> {
        self.chain.base()
    }

    pub fn strong_generators(&self) -> Vec<Permutation> {
        self.chain.strong_generators_from(0)
    }

    /// Sizes of the basic orbits along the chain.
    pub fn basic_orbit_sizes(&self) -> Vec<usize> {
        self.chain.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub(crate) fn chain(&self) -> &StabChain {
        &self.chain
    }

    fn check_degree(&self, g: &Permutation) -> Result<()> {
        if g.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                got: g.degree(),
            });
        }
        Ok(())
    }

    fn check_point(&self, point: usize) -> Result<()> {
        if point >= self.degree {
            return Err(Error::PointOutOfRange {
                point,
                degree: self.degree,
            });
        }
        Ok(())
    }

    pub fn contains(&self, g: &Permutation) -> Result<bool> {
        self.check_degree(g)?;
        Ok(self.chain.contains(g))
    }

    pub(crate) fn contains_unchecked(&self, g: &Permutation) -> bool {
        self.chain.contains(g)
    }

    /// The group generated by `self` and `extra`, keeping the current base as prefix.
    pub fn extended(&self, extra: &[Permutation]) -> Result<PermGroup> {
        let mut chain = self.chain.clone();
        let mut generators = self.generators.clone();
        for g in extra {
            self.check_degree(g)?;
            if chain.add_generator(g) {
                generators.push(g.clone());
            }
        }
        check_overflow(&chain)?;
        Ok(PermGroup::from_chain(self.degree, generators, chain))
    }

    /// Rebuilds the chain so that its base starts with `prefix`.
    pub fn rebased(&self, prefix: &[usize]) -> Result<PermGroup> {
        let mut g = PermGroup::with_base(self.degree, self.strong_generators(), prefix)?;
        debug_assert_eq!(g.order, self.order);
        g.generators = self.generators.clone();
        Ok(g)
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree
            && self.generators.iter().all(|g| other.chain.contains(g))
    }

    pub fn same_group(&self, other: &PermGroup) -> bool {
        self.order == other.order && self.is_subgroup_of(other)
    }

    pub fn orbit(&self, point: usize) -> Result<Vec<usize>> {
        self.check_point(point)?;
        Ok(orbit_of(self.degree, &self.generators, point))
    }

    /// All orbits, each sorted, ordered by least element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        orbits_of(self.degree, &self.generators)
    }

    pub fn is_transitive(&self) -> bool {
        self.degree <= 1 || self.orbit(0).map(|o| o.len() == self.degree).unwrap_or(false)
    }

    /// Orbit of `point` and its stabilizer.
    pub fn orbit_and_stabilizer(&self, point: usize) -> Result<(Vec<usize>, PermGroup)> {
        self.check_point(point)?;
        let orbit = self.orbit(point)?;
        let stab = self.pointwise_stabilizer(&[point])?;
        debug_assert_eq!(
            BigUint::from(orbit.len()) * stab.order(),
            self.order,
            "orbit-stabilizer"
        );
        Ok((orbit, stab))
    }

    /// Pointwise stabilizer of `points`, from the chain with those points as base prefix.
    pub fn pointwise_stabilizer(&self, points: &[usize]) -> Result<PermGroup> {
        for &p in points {
            self.check_point(p)?;
        }
        let rebased = PermGroup::with_base(self.degree, self.strong_generators(), points)?;
        let depth = rebased
            .chain
            .levels
            .iter()
            .take_while(|l| points.contains(&(l.point as usize)))
            .count();
        let sub = rebased.chain.sub_chain(depth);
        let gens = sub.strong_generators_from(0);
        Ok(PermGroup::from_chain(self.degree, gens, sub))
    }

    /// Random element, uniform over the group.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        let mut g = Permutation::identity(self.degree);
        for level in self.chain.levels.iter().rev() {
            let i = rng.gen_range(0..level.orbit.len());
            g = g.then(&level.trans[i]);
        }
        g
    }

    /// Iterator over all elements; errors when the order exceeds `limit`.
    pub fn elements_with_limit(&self, limit: u64) -> Result<ElementIter<'_>> {
        let size = self.order.to_u64().unwrap_or(u64::MAX);
        if size > limit {
            return Err(Error::budget("group order for enumeration", size, limit));
        }
        Ok(ElementIter::new(self))
    }

    pub fn elements(&self) -> Result<ElementIter<'_>> {
        self.elements_with_limit(DEFAULT_ENUMERATION_LIMIT)
    }

    /// Normal closure of `gens` in `self`.
    pub fn normal_closure(&self, gens: &[Permutation]) -> Result<PermGroup> {
        let mut n = PermGroup::new(self.degree, Vec::new())?;
        let mut queue: VecDeque<Permutation> = gens.iter().cloned().collect();
        while let Some(h) = queue.pop_front() {
            if n.chain.contains(&h) {
                continue;
            }
            n = n.extended(std::slice::from_ref(&h))?;
            for g in &self.generators {
                queue.push_back(h.conjugate_by(g));
            }
        }
        Ok(n)
    }

    pub fn derived_subgroup(&self) -> Result<PermGroup> {
        let mut comms = Vec::new();
        for (i, a) in self.generators.iter().enumerate() {
            for b in &self.generators[i + 1..] {
                let c = a.commutator(b);
                if !c.is_identity() {
                    comms.push(c);
                }
            }
        }
        self.normal_closure(&comms)
    }

    /// Derived series `G = G^(0) > G^(1) > ...` down to its stable term.
    pub fn derived_series(&self) -> Result<Vec<PermGroup>> {
        let mut series = vec![self.clone()];
        loop {
            let last = series.last().unwrap();
            if last.is_trivial() {
                break;
            }
            let next = last.derived_subgroup()?;
            if next.order == last.order {
                break;
            }
            series.push(next);
        }
        Ok(series)
    }

    pub fn solvability(&self) -> Result<Solvability> {
        let series = self.derived_series()?;
        let solvable = series.last().unwrap().is_trivial();
        Ok(Solvability {
            solvable,
            derived_length: if solvable { series.len() - 1 } else { 0 },
            orders: series.iter().map(|g| g.order.clone()).collect(),
        })
    }

    pub fn is_solvable(&self) -> Result<bool> {
        Ok(self.solvability()?.solvable)
    }

    /// Induced action on the invariant set `points`, re-indexed by position
    /// in the sorted point list, plus whether the action is faithful.
    pub fn restriction(&self, points: &[usize]) -> Result<(PermGroup, bool)> {
        let mut pts = points.to_vec();
        pts.sort_unstable();
        pts.dedup();
        let mut index_of = vec![u32::MAX; self.degree];
        for (i, &p) in pts.iter().enumerate() {
            self.check_point(p)?;
            index_of[p] = i as u32;
        }
        for g in &self.generators {
            if pts.iter().any(|&p| index_of[g.image(p)] == u32::MAX) {
                return Err(Error::NotInvariant);
            }
        }
        let gens: Vec<Permutation> = self
            .generators
            .iter()
            .map(|g| g.restricted(&pts, &index_of))
            .filter(|g| !g.is_identity())
            .collect();
        let restricted = PermGroup::new(pts.len(), gens)?;
        let kernel = self.pointwise_stabilizer(&pts)?;
        let faithful = kernel.is_trivial();
        debug_assert_eq!(
            restricted.order() * kernel.order(),
            self.order,
            "restriction order times kernel order"
        );
        Ok((restricted, faithful))
    }

    /// Normalizer of `sub` inside `self`, by scanning every element.
    pub fn normalizer_by_enumeration(&self, sub: &PermGroup, limit: u64) -> Result<PermGroup> {
        let mut n = sub.rebased(&self.base())?;
        for g in self.elements_with_limit(limit)? {
            if n.contains_unchecked(&g) {
                continue;
            }
            if sub
                .generators
                .iter()
                .all(|x| sub.contains_unchecked(&x.conjugate_by(&g)))
            {
                n = n.extended(std::slice::from_ref(&g))?;
            }
        }
        Ok(n)
    }
}

fn check_overflow(chain: &StabChain) -> Result<()> {
    if chain.overflow {
        return Err(Error::budget(
            "stabilizer chain transversal cells",
            super::chain::TRANSVERSAL_CELL_LIMIT + 1,
            super::chain::TRANSVERSAL_CELL_LIMIT,
        ));
    }
    Ok(())
}

/// Result of the derived-series computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solvability {
    pub solvable: bool,
    /// Length of the derived series when solvable, else 0.
    pub derived_length: usize,
    pub orders: Vec<BigUint>,
}

pub(crate) fn orbit_of(degree: usize, gens: &[Permutation], point: usize) -> Vec<usize> {
    let mut seen = vec![false; degree];
    seen[point] = true;
    let mut orbit = vec![point];
    let mut i = 0;
    while i < orbit.len() {
        let x = orbit[i];
        for g in gens {
            let y = g.image(x);
            if !seen[y] {
                seen[y] = true;
                orbit.push(y);
            }
        }
        i += 1;
    }
    orbit.sort_unstable();
    orbit
}

pub(crate) fn orbits_of(degree: usize, gens: &[Permutation]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; degree];
    let mut out = Vec::new();
    for p in 0..degree {
        if seen[p] {
            continue;
        }
        let orbit = orbit_of(degree, gens, p);
        for &x in &orbit {
            seen[x] = true;
        }
        out.push(orbit);
    }
    out
}

/// Coset-by-coset traversal of the stabilizer chain. Every element is
/// produced exactly once as `h_k * ... * h_1 * h_0` with `h_i` taken from the
/// level-`i` transversal.
pub struct ElementIter<'a> {
    group: &'a PermGroup,
    idx: Vec<usize>,
    /// prefix[l] = h_k * ... * h_l for the current indices.
    prefix: Vec<Permutation>,
    done: bool,
}

impl<'a> ElementIter<'a> {
    fn new(group: &'a PermGroup) -> Self {
        let k = group.chain.levels.len();
        let mut it = ElementIter {
            group,
            idx: vec![0; k],
            prefix: vec![Permutation::identity(group.degree); k + 1],
            done: false,
        };
        it.rebuild_from(k);
        it
    }

    fn rebuild_from(&mut self, top: usize) {
        let levels = &self.group.chain.levels;
        for l in (0..top).rev() {
            self.prefix[l] = self.prefix[l + 1].then(&levels[l].trans[self.idx[l]]);
        }
    }
}

impl Iterator for ElementIter<'_> {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.done {
            return None;
        }
        let out = self.prefix[0].clone();
        let levels = &self.group.chain.levels;
        let mut l = 0;
        loop {
            if l == levels.len() {
                self.done = true;
                break;
            }
            self.idx[l] += 1;
            if self.idx[l] < levels[l].orbit.len() {
                self.rebuild_from(l + 1);
                break;
            }
            self.idx[l] = 0;
            l += 1;
        }
        Some(out)
    }
}
