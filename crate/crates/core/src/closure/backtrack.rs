//! Automorphism group of an edge-colored complete digraph by partition backtrack.
//!
//! The first root-to-leaf path fixes a base. Levels are then processed from
//! the deepest up; at each level every target-cell point outside the known
//! basic orbit triggers a subtree search for an automorphism sending the
//! base point there. Nodes whose refinement trace differs from the first
//! path are pruned.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use super::SearchStats;
use crate::error::{Error, Result};
use crate::perm::{PermGroup, Permutation};

pub(crate) struct ColorMatrix<'a> {
    n: usize,
    colors: &'a [u32],
}

impl<'a> ColorMatrix<'a> {
    pub(crate) fn new(n: usize, colors: &'a [u32]) -> Self {
        debug_assert_eq!(colors.len(), n * n);
        ColorMatrix { n, colors }
    }

    #[inline]
    fn get(&self, v: u32, w: u32) -> u32 {
        self.colors[v as usize * self.n + w as usize]
    }

    pub(crate) fn preserved_by(&self, h: &Permutation) -> bool {
        (0..self.n as u32).all(|v| {
            let hv = h.image(v as usize) as u32;
            (0..self.n as u32).all(|w| self.get(hv, h.image(w as usize) as u32) == self.get(v, w))
        })
    }
}

#[derive(Clone)]
struct Node {
    cells: Vec<Vec<u32>>,
    trace: DefaultHasher,
}

impl Node {
    fn is_discrete(&self, n: usize) -> bool {
        self.cells.len() == n
    }

    /// First smallest non-singleton cell.
    fn target_cell(&self) -> Option<usize> {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.len() > 1)
            .min_by_key(|(i, c)| (c.len(), *i))
            .map(|(i, _)| i)
    }
}

fn signature(cm: &ColorMatrix, v: u32, splitter: &[u32], buf: &mut Vec<u64>) {
    buf.clear();
    buf.extend(
        splitter
            .iter()
            .map(|&w| (u64::from(cm.get(v, w)) << 32) | u64::from(cm.get(w, v))),
    );
    buf.sort_unstable();
}

/// Refines to an equitable ordered partition. Every decision depends only on
/// cell positions and colors, so the result commutes with automorphisms.
fn refine(cm: &ColorMatrix, node: &mut Node) {
    let n = cm.n;
    let mut buf = Vec::new();
    loop {
        let mut changed = false;
        let mut s = 0;
        while s < node.cells.len() {
            if node.cells.len() == n {
                return;
            }
            let splitter = node.cells[s].clone();
            let mut x = 0;
            while x < node.cells.len() {
                if node.cells[x].len() == 1 {
                    x += 1;
                    continue;
                }
                let mut keyed: Vec<(Vec<u64>, u32)> = node.cells[x]
                    .iter()
                    .map(|&v| {
                        signature(cm, v, &splitter, &mut buf);
                        (buf.clone(), v)
                    })
                    .collect();
                keyed.sort_unstable();
                if keyed.first().map(|k| &k.0) == keyed.last().map(|k| &k.0) {
                    x += 1;
                    continue;
                }
                let mut pieces: Vec<Vec<u32>> = Vec::new();
                for (i, (sig, v)) in keyed.iter().enumerate() {
                    if i == 0 || keyed[i - 1].0 != *sig {
                        (s, x, sig).hash(&mut node.trace);
                        pieces.push(Vec::new());
                    }
                    pieces.last_mut().unwrap().push(*v);
                }
                let k = pieces.len();
                pieces.iter().map(Vec::len).collect::<Vec<_>>().hash(&mut node.trace);
                node.cells.splice(x..=x, pieces);
                if x < s {
                    s += k - 1;
                }
                x += k;
                changed = true;
            }
            s += 1;
        }
        if !changed {
            return;
        }
    }
}

fn individualize(cm: &ColorMatrix, parent: &Node, cell: usize, v: u32) -> Node {
    let mut node = parent.clone();
    let rest: Vec<u32> = node.cells[cell].iter().copied().filter(|&x| x != v).collect();
    node.cells[cell] = vec![v];
    node.cells.insert(cell + 1, rest);
    ("ind", cell).hash(&mut node.trace);
    refine(cm, &mut node);
    node
}

struct Search<'a, 'b> {
    cm: &'a ColorMatrix<'b>,
    base: Vec<u32>,
    traces: Vec<u64>,
    leaf0: Vec<u32>,
    stats: &'a mut SearchStats,
}

impl Search<'_, '_> {
    /// Looks below `parent` (at depth `depth`) for an automorphism fixing
    /// `base[..level]` and sending `base[level]` to `target`.
    fn explore(
        &mut self,
        parent: &Node,
        depth: usize,
        cell: usize,
        v: u32,
        level: usize,
        target: u32,
    ) -> Option<Permutation> {
        self.stats.nodes += 1;
        let child = individualize(self.cm, parent, cell, v);
        if self.traces.get(depth + 1) != Some(&child.trace.finish()) {
            self.stats.prunes += 1;
            return None;
        }
        let n = self.cm.n;
        if child.is_discrete(n) {
            let mut images = vec![0usize; n];
            for (c, cell) in child.cells.iter().enumerate() {
                images[self.leaf0[c] as usize] = cell[0] as usize;
            }
            let h = Permutation::from_images(images).expect("leaf map is a bijection");
            let fixes = self.base[..level]
                .iter()
                .all(|&b| h.image(b as usize) == b as usize);
            if fixes && h.image(self.base[level] as usize) == target as usize && self.cm.preserved_by(&h) {
                return Some(h);
            }
            self.stats.prunes += 1;
            return None;
        }
        let t = child.target_cell()?;
        for x in child.cells[t].clone() {
            if let Some(h) = self.explore(&child, depth + 1, t, x, level, target) {
                return Some(h);
            }
        }
        None
    }
}

/// Full automorphism group of the coloring; `known` must consist of automorphisms.
pub(crate) fn automorphism_group(
    cm: &ColorMatrix,
    known: &[Permutation],
    stats: &mut SearchStats,
) -> Result<PermGroup> {
    let n = cm.n;
    if let Some(bad) = known.iter().find(|g| !cm.preserved_by(g)) {
        return Err(Error::InvalidArgument(format!(
            "seed permutation {bad} does not preserve the coloring"
        )));
    }
    if n == 0 {
        return PermGroup::new(0, Vec::new());
    }
    let mut diag: Vec<(u32, u32)> = (0..n as u32).map(|v| (cm.get(v, v), v)).collect();
    diag.sort_unstable();
    let mut root = Node {
        cells: Vec::new(),
        trace: DefaultHasher::new(),
    };
    for (i, &(c, v)) in diag.iter().enumerate() {
        if i == 0 || diag[i - 1].0 != c {
            root.cells.push(Vec::new());
        }
        root.cells.last_mut().unwrap().push(v);
    }
    root.cells.iter().map(Vec::len).collect::<Vec<_>>().hash(&mut root.trace);
    refine(cm, &mut root);

    let mut path = vec![root];
    let mut targets = Vec::new();
    let mut base = Vec::new();
    while let Some(t) = path.last().unwrap().target_cell() {
        let node = path.last().unwrap();
        let v = *node.cells[t].iter().min().unwrap();
        let child = individualize(cm, node, t, v);
        targets.push(t);
        base.push(v);
        path.push(child);
        stats.nodes += 1;
    }
    let leaf0: Vec<u32> = path.last().unwrap().cells.iter().map(|c| c[0]).collect();
    let traces: Vec<u64> = path.iter().map(|node| node.trace.finish()).collect();
    let base_usize: Vec<usize> = base.iter().map(|&b| b as usize).collect();
    let mut group = PermGroup::with_base(n, known.to_vec(), &base_usize)?;

    let mut search = Search {
        cm,
        base: base.clone(),
        traces,
        leaf0,
        stats,
    };
    for level in (0..base.len()).rev() {
        let node = &path[level];
        let t = targets[level];
        let mut failed = vec![false; n];
        for &w in &node.cells[t] {
            if w == base[level] || failed[w as usize] {
                continue;
            }
            if group.chain().levels[level].position(w as usize).is_some() {
                continue;
            }
            match search.explore(node, level, t, w, level, w) {
                Some(h) => group = group.extended(&[h])?,
                None => {
                    let gens = group.chain().strong_generators_from(level);
                    for x in crate::perm::orbit_of(n, &gens, w as usize) {
                        failed[x] = true;
                    }
                }
            }
        }
    }
    if let Some(bad) = group.generators().iter().find(|g| !cm.preserved_by(g)) {
        return Err(Error::Verification(format!(
            "closure generator {bad} fails the color check"
        )));
    }
    Ok(group)
}
