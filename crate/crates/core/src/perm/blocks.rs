use super::group::PermGroup;
use crate::error::{Error, Result};

/// Outcome of a primitivity test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Primitivity {
    Primitive,
    /// A nontrivial block system, blocks sorted by least element.
    Imprimitive(Vec<Vec<usize>>),
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> Option<(usize, usize)> {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return None;
        }
        // Keep the smaller root so classes are labelled by least element.
        let (keep, drop) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[drop] = keep;
        Some((keep, drop))
    }
}

/// Finest block system in which `a` and `b` lie in one block.
pub fn minimal_block_system(g: &PermGroup, a: usize, b: usize) -> Result<Vec<Vec<usize>>> {
    let n = g.degree();
    for p in [a, b] {
        if p >= n {
            return Err(Error::PointOutOfRange { point: p, degree: n });
        }
    }
    let mut uf = UnionFind::new(n);
    let mut queue = Vec::new();
    if let Some(pair) = uf.union(a, b) {
        queue.push(pair);
    }
    while let Some((keep, drop)) = queue.pop() {
        for gen in g.generators() {
            if let Some(pair) = uf.union(gen.image(keep), gen.image(drop)) {
                queue.push(pair);
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); n];
    for x in 0..n {
        let r = uf.find(x);
        classes[r].push(x);
    }
    Ok(classes.into_iter().filter(|c| !c.is_empty()).collect())
}

/// Tests primitivity of a transitive group.
pub fn primitivity(g: &PermGroup) -> Result<Primitivity> {
    if !g.is_transitive() {
        return Err(Error::NotTransitive);
    }
    let n = g.degree();
    for b in 1..n {
        let blocks = minimal_block_system(g, 0, b)?;
        if blocks.len() > 1 {
            return Ok(Primitivity::Imprimitive(blocks));
        }
    }
    Ok(Primitivity::Primitive)
}

impl PermGroup {
    pub fn is_primitive(&self) -> Result<bool> {
        Ok(primitivity(self)? == Primitivity::Primitive)
    }
}

/// True iff every generator maps blocks onto blocks.
pub fn is_block_system(g: &PermGroup, blocks: &[Vec<usize>]) -> bool {
    let n = g.degree();
    let mut label = vec![usize::MAX; n];
    for (i, block) in blocks.iter().enumerate() {
        for &x in block {
            if x >= n || label[x] != usize::MAX {
                return false;
            }
            label[x] = i;
        }
    }
    if label.contains(&usize::MAX) {
        return false;
    }
    g.generators().iter().all(|gen| {
        blocks.iter().all(|block| {
            let target = label[gen.image(block[0])];
            block.iter().all(|&x| label[gen.image(x)] == target)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;

    #[test]
    fn cyclic_four_is_imprimitive() {
        let c4 = PermGroup::cyclic(4);
        assert!(c4.is_transitive());
        match primitivity(&c4).unwrap() {
            Primitivity::Imprimitive(blocks) => {
                assert_eq!(blocks, vec![vec![0, 2], vec![1, 3]]);
                assert!(is_block_system(&c4, &blocks));
            }
            Primitivity::Primitive => panic!("C4 has blocks"),
        }
    }

    #[test]
    fn small_primitive_groups() {
        assert!(PermGroup::symmetric(3).is_primitive().unwrap());
        assert!(PermGroup::cyclic(5).is_primitive().unwrap());
        assert!(PermGroup::alternating(6).is_primitive().unwrap());
    }

    #[test]
    fn intransitive_is_error() {
        let g = PermGroup::new(4, vec![Permutation::from_cycles(4, &[&[0, 1]]).unwrap()]).unwrap();
        assert_eq!(g.is_primitive().unwrap_err(), Error::NotTransitive);
    }
}
