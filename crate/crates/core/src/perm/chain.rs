//! Deterministic Schreier-Sims.
//!
//! Levels store explicit transversals (and their inverses); a per-level cursor
//! records which Schreier generators have already been sifted so that
//! re-entering a level after a deeper change only tests new pairs.

use num_bigint::BigUint;

use super::permutation::Permutation;

const NONE: u32 = u32::MAX;

/// Cap on stored transversal entries (images in `trans` and `trans_inv`).
pub(crate) const TRANSVERSAL_CELL_LIMIT: u64 = 1 << 27;

#[derive(Clone, Debug)]
pub(crate) struct Level {
    pub(crate) point: u32,
    /// Indices into the strong generator pool.
    pub(crate) gens: Vec<u32>,
    pub(crate) orbit: Vec<u32>,
    /// Position of each point in `orbit`, or `NONE`.
    pub(crate) pos: Vec<u32>,
    pub(crate) trans: Vec<Permutation>,
    pub(crate) trans_inv: Vec<Permutation>,
    /// Number of generators already processed for each orbit point.
    checked: Vec<u32>,
    first_unchecked: usize,
}

impl Level {
    fn new(degree: usize, point: usize) -> Self {
        let mut pos = vec![NONE; degree];
        pos[point] = 0;
        Level {
            point: point as u32,
            gens: Vec::new(),
            orbit: vec![point as u32],
            pos,
            trans: vec![Permutation::identity(degree)],
            trans_inv: vec![Permutation::identity(degree)],
            checked: vec![0],
            first_unchecked: 0,
        }
    }

    #[inline]
    pub(crate) fn position(&self, point: usize) -> Option<usize> {
        match self.pos[point] {
            NONE => None,
            i => Some(i as usize),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct StabChain {
    pub(crate) degree: usize,
    pub(crate) pool: Vec<Permutation>,
    pub(crate) levels: Vec<Level>,
    cells: u64,
    /// Set once the transversals outgrow [`TRANSVERSAL_CELL_LIMIT`]; the
    /// chain is then incomplete and must be discarded.
    pub(crate) overflow: bool,
}

impl StabChain {
    pub(crate) fn new(degree: usize, base_prefix: &[usize]) -> Self {
        let mut chain = StabChain {
            degree,
            pool: Vec::new(),
            levels: Vec::new(),
            cells: 0,
            overflow: false,
        };
        for &b in base_prefix {
            if chain.levels.iter().all(|l| l.point as usize != b) {
                chain.levels.push(Level::new(degree, b));
            }
        }
        chain
    }

    pub(crate) fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.point as usize).collect()
    }

    pub(crate) fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::from(1u32), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    /// Sifts `g` starting at level `from`. Returns the residue and the level at
    /// which sifting stopped (`levels.len()` when every level matched).
    pub(crate) fn sift(&self, g: &Permutation, from: usize) -> (Permutation, usize) {
        let mut h = g.clone();
        for (l, level) in self.levels.iter().enumerate().skip(from) {
            let beta = h.image(level.point as usize);
            match level.position(beta) {
                None => return (h, l),
                Some(i) => {
                    if i != 0 {
                        h = h.then(&level.trans_inv[i]);
                    }
                }
            }
        }
        (h, self.levels.len())
    }

    pub(crate) fn contains(&self, g: &Permutation) -> bool {
        let (r, j) = self.sift(g, 0);
        j == self.levels.len() && r.is_identity()
    }

    /// Adds `g` to the generated group and restores completeness.
    /// Returns false when `g` was already a member.
    pub(crate) fn add_generator(&mut self, g: &Permutation) -> bool {
        if self.overflow {
            return false;
        }
        let (r, j) = self.sift(g, 0);
        if j == self.levels.len() && r.is_identity() {
            return false;
        }
        self.add_strong(r, 0, j);
        self.complete(j);
        true
    }

    fn add_strong(&mut self, h: Permutation, from: usize, to: usize) {
        if to == self.levels.len() {
            let b = h
                .first_moved_point()
                .expect("non-identity residue moves a point");
            self.levels.push(Level::new(self.degree, b));
        }
        let idx = self.pool.len() as u32;
        self.pool.push(h);
        for l in from..=to {
            self.levels[l].gens.push(idx);
            self.levels[l].first_unchecked = 0;
            self.extend_orbit(l);
        }
    }

    fn extend_orbit(&mut self, l: usize) {
        let pool = &self.pool;
        let level = &mut self.levels[l];
        let step = 2 * self.degree as u64;
        let mut i = 0;
        while i < level.orbit.len() && !self.overflow {
            let beta = level.orbit[i] as usize;
            for &gi in &level.gens {
                let g = &pool[gi as usize];
                let gamma = g.image(beta);
                if level.pos[gamma] == NONE {
                    self.cells += step;
                    if self.cells > TRANSVERSAL_CELL_LIMIT {
                        self.overflow = true;
                        break;
                    }
                    let u = level.trans[i].then(g);
                    level.pos[gamma] = level.orbit.len() as u32;
                    level.orbit.push(gamma as u32);
                    level.trans_inv.push(u.inverse());
                    level.trans.push(u);
                    level.checked.push(0);
                }
            }
            i += 1;
        }
    }

    fn complete(&mut self, start: usize) {
        let mut i = start as isize;
        while i >= 0 && !self.overflow {
            let l = i as usize;
            match self.next_nontrivial_schreier(l) {
                Some((h, j)) => {
                    self.add_strong(h, l + 1, j);
                    i = j as isize;
                }
                None => i -= 1,
            }
        }
    }

    fn next_nontrivial_schreier(&mut self, l: usize) -> Option<(Permutation, usize)> {
        let ngens = self.levels[l].gens.len() as u32;
        let mut bi = self.levels[l].first_unchecked;
        while bi < self.levels[l].orbit.len() {
            while self.levels[l].checked[bi] < ngens {
                let level = &self.levels[l];
                let x = &self.pool[level.gens[level.checked[bi] as usize] as usize];
                let beta = level.orbit[bi] as usize;
                let gamma = x.image(beta);
                let gi = level.pos[gamma] as usize;
                let h = level.trans[bi].then(x).then(&level.trans_inv[gi]);
                self.levels[l].checked[bi] += 1;
                if h.is_identity() {
                    continue;
                }
                let (r, j) = self.sift(&h, l + 1);
                if j < self.levels.len() || !r.is_identity() {
                    return Some((r, j));
                }
            }
            bi += 1;
            self.levels[l].first_unchecked = bi;
        }
        None
    }

    /// Strong generators that fix the first `from` base points.
    pub(crate) fn strong_generators_from(&self, from: usize) -> Vec<Permutation> {
        match self.levels.get(from) {
            Some(level) => level
                .gens
                .iter()
                .map(|&i| self.pool[i as usize].clone())
                .collect(),
            None => Vec::new(),
        }
    }

    /// Chain for the pointwise stabilizer of the first `from` base points.
    pub(crate) fn sub_chain(&self, from: usize) -> StabChain {
        let mut levels: Vec<Level> = self.levels[from.min(self.levels.len())..].to_vec();
        let mut remap = vec![NONE; self.pool.len()];
        let mut pool = Vec::new();
        for level in &mut levels {
            for gi in level.gens.iter_mut() {
                if remap[*gi as usize] == NONE {
                    remap[*gi as usize] = pool.len() as u32;
                    pool.push(self.pool[*gi as usize].clone());
                }
                *gi = remap[*gi as usize];
            }
        }
        let cells = levels.iter().map(|l| 2 * (l.orbit.len() * self.degree) as u64).sum();
        StabChain {
            degree: self.degree,
            pool,
            levels,
            cells,
            overflow: false,
        }
    }
}
