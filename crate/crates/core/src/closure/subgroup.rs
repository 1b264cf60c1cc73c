//! The subgroup of a group `K` preserving a tuple coloring, found by a
//! coset search along `K`'s stabilizer chain.

use super::SearchStats;
use crate::error::Result;
use crate::orbits::TupleColoring;
use crate::perm::{PermGroup, Permutation};

struct Search<'a> {
    k: &'a PermGroup,
    coloring: &'a TupleColoring,
    base: Vec<usize>,
    stats: &'a mut SearchStats,
    digits: Vec<usize>,
}

impl Search<'_> {
    /// Checks every `m`-tuple over `base[..=j]` that uses `base[j]`.
    fn base_tuples_ok(&mut self, j: usize, q: &Permutation) -> bool {
        let m = self.coloring.arity();
        let width = j + 1;
        let total = width.pow(m as u32);
        for code in 0..total {
            let mut c = code;
            let mut uses_last = false;
            for d in self.digits.iter_mut().rev() {
                *d = c % width;
                c /= width;
                uses_last |= *d == j;
            }
            if !uses_last {
                continue;
            }
            let n = self.coloring.degree();
            let (mut src, mut dst) = (0usize, 0usize);
            for &d in &self.digits {
                let b = self.base[d];
                src = src * n + b;
                dst = dst * n + q.image(b);
            }
            if self.coloring.color_at(src) != self.coloring.color_at(dst) {
                return false;
            }
        }
        true
    }

    /// Extends `q` (which fixes the images of `base[..j]`) through levels `j..`.
    fn descend(&mut self, j: usize, q: &Permutation) -> Option<Permutation> {
        let levels = &self.k.chain().levels;
        if j == levels.len() {
            self.stats.nodes += 1;
            if self.coloring.preserved_by(q) {
                return Some(q.clone());
            }
            self.stats.prunes += 1;
            return None;
        }
        for t in 0..levels[j].trans.len() {
            self.stats.nodes += 1;
            let next = self.k.chain().levels[j].trans[t].then(q);
            if !self.base_tuples_ok(j, &next) {
                self.stats.prunes += 1;
                continue;
            }
            if let Some(h) = self.descend(j + 1, &next) {
                return Some(h);
            }
        }
        None
    }
}

/// `{x ∈ k : x preserves coloring}`, given a subgroup `seed` of it.
pub(crate) fn preserving_subgroup(
    k: &PermGroup,
    seed: &PermGroup,
    coloring: &TupleColoring,
    stats: &mut SearchStats,
) -> Result<PermGroup> {
    let n = k.degree();
    let base = k.base();
    let mut known = PermGroup::with_base(n, seed.generators().to_vec(), &base)?;
    if known.order() == k.order() {
        return Ok(known);
    }
    let mut search = Search {
        k,
        coloring,
        base: base.clone(),
        stats,
        digits: vec![0; coloring.arity()],
    };
    for i in (0..base.len()).rev() {
        let level = &k.chain().levels[i];
        let mut failed = vec![false; n];
        for (gi, &gamma) in level.orbit.iter().enumerate() {
            let gamma = gamma as usize;
            if gi == 0 || failed[gamma] || known.chain().levels[i].position(gamma).is_some() {
                continue;
            }
            let u = &level.trans[gi];
            search.stats.nodes += 1;
            let found = if search.base_tuples_ok(i, u) {
                search.descend(i + 1, u)
            } else {
                search.stats.prunes += 1;
                None
            };
            match found {
                Some(h) => {
                    known = known.extended(&[h])?;
                    if known.order() == k.order() {
                        return Ok(known);
                    }
                }
                None => {
                    let gens = known.chain().strong_generators_from(i);
                    for x in crate::perm::orbit_of(n, &gens, gamma) {
                        failed[x] = true;
                    }
                }
            }
        }
    }
    Ok(known)
}
