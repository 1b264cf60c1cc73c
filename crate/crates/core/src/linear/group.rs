use std::sync::Arc;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::field::{field_make, Fq};
use super::matrix::{vector_from_index, vector_index, FqMatrix};
use crate::error::{Error, Result};
use crate::perm::{PermGroup, Permutation};

/// Default cap on the number of vectors a permutation image may act on.
pub const DEFAULT_VECTOR_BUDGET: u64 = 1 << 20;

/// Point set for a permutation image of a matrix group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VectorDomain {
    /// All `q^d` vectors; point = vector index.
    AllVectors,
    /// The `q^d - 1` nonzero vectors; point = vector index - 1.
    NonzeroVectors,
}

/// A matrix group given by invertible generators.
#[derive(Clone, Debug)]
pub struct MatrixGroup {
    field: Arc<Fq>,
    dim: usize,
    generators: Vec<FqMatrix>,
    pub note: String,
}

impl MatrixGroup {
    pub fn new(field: Arc<Fq>, dim: usize, generators: Vec<FqMatrix>) -> Result<Self> {
        for g in &generators {
            if !g.field().same_field(&field) || g.dim() != dim {
                return Err(Error::InvalidArgument(format!(
                    "generator is not a {dim}x{dim} matrix over {field:?}"
                )));
            }
            if !g.is_invertible() {
                return Err(Error::InvalidArgument("generator is singular".into()));
            }
        }
        Ok(MatrixGroup {
            field,
            dim,
            generators,
            note: String::new(),
        })
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    pub fn general_linear(p: u64, k: u32, dim: usize) -> Result<Self> {
        let field = field_make(p, k)?;
        let g = field.primitive_element();
        let mut gens = vec![FqMatrix::diagonal(
            field.clone(),
            &std::iter::once(g).chain(std::iter::repeat_n(1, dim.saturating_sub(1))).collect::<Vec<_>>(),
        )];
        // Elementary transvections generate SL, the diagonal one adds the determinant.
        for i in 0..dim {
            for j in 0..dim {
                if i != j {
                    let mut m = FqMatrix::identity(field.clone(), dim);
                    m.entries[i * dim + j] = 1;
                    gens.push(m);
                }
            }
        }
        gens.retain(|m| !m.is_identity());
        Ok(MatrixGroup::new(field, dim, gens)?.with_note(format!("GL({dim},{})", p.pow(k))))
    }

    pub fn field(&self) -> &Arc<Fq> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[FqMatrix] {
        &self.generators
    }

    pub fn identity(&self) -> FqMatrix {
        FqMatrix::identity(self.field.clone(), self.dim)
    }

    pub fn vector_count(&self) -> Option<u64> {
        (self.field.order() as u64).checked_pow(self.dim as u32)
    }

    /// Permutation of vector indices induced by `m`.
    pub fn vector_permutation(&self, m: &FqMatrix, domain: VectorDomain) -> Permutation {
        let q = self.field.order();
        let total = self.vector_count().unwrap() as usize;
        let images: Vec<usize> = match domain {
            VectorDomain::AllVectors => (0..total)
                .map(|i| vector_index(&m.apply(&vector_from_index(i, q, self.dim)), q))
                .collect(),
            VectorDomain::NonzeroVectors => (1..total)
                .map(|i| vector_index(&m.apply(&vector_from_index(i, q, self.dim)), q) - 1)
                .collect(),
        };
        Permutation::from_images(images).expect("invertible matrix permutes vectors")
    }

    fn check_budget(&self, budget: u64) -> Result<usize> {
        let total = self.vector_count().unwrap_or(u64::MAX);
        if total > budget {
            return Err(Error::budget("vector count", total, budget));
        }
        Ok(total as usize)
    }

    pub fn perm_image(&self, domain: VectorDomain) -> Result<PermGroup> {
        self.perm_image_with_budget(domain, DEFAULT_VECTOR_BUDGET)
    }

    pub fn perm_image_with_budget(&self, domain: VectorDomain, budget: u64) -> Result<PermGroup> {
        self.check_budget(budget)?;
        let gens = self
            .generators
            .iter()
            .map(|m| self.vector_permutation(m, domain))
            .collect();
        let degree = match domain {
            VectorDomain::AllVectors => self.vector_count().unwrap() as usize,
            VectorDomain::NonzeroVectors => self.vector_count().unwrap() as usize - 1,
        };
        PermGroup::new(degree, gens)
    }

    /// Faithful action on the union of the orbits of the standard basis
    /// vectors. Returns the group and the vector index of each point.
    pub fn basis_orbit_action(&self) -> Result<(PermGroup, Vec<usize>)> {
        let q = self.field.order();
        let mut points: Vec<Vec<u32>> = Vec::new();
        let mut index = std::collections::HashMap::new();
        for i in 0..self.dim {
            let mut e = vec![0u32; self.dim];
            e[i] = 1;
            let key = vector_index(&e, q);
            if index.contains_key(&key) {
                continue;
            }
            index.insert(key, points.len());
            points.push(e);
            let mut head = points.len() - 1;
            while head < points.len() {
                for g in &self.generators {
                    let w = g.apply(&points[head]);
                    let key = vector_index(&w, q);
                    if let std::collections::hash_map::Entry::Vacant(e) = index.entry(key) {
                        if points.len() as u64 >= DEFAULT_VECTOR_BUDGET {
                            return Err(Error::budget(
                                "basis orbit size",
                                points.len() as u64 + 1,
                                DEFAULT_VECTOR_BUDGET,
                            ));
                        }
                        e.insert(points.len());
                        points.push(w);
                    }
                }
                head += 1;
            }
        }
        let gens = self
            .generators
            .iter()
            .map(|g| {
                let images = points
                    .iter()
                    .map(|v| index[&vector_index(&g.apply(v), q)])
                    .collect();
                Permutation::from_images(images).unwrap()
            })
            .collect();
        let group = PermGroup::new(points.len(), gens)?;
        Ok((group, points.iter().map(|v| vector_index(v, q)).collect()))
    }

    pub fn order(&self) -> Result<BigUint> {
        Ok(self.basis_orbit_action()?.0.order().clone())
    }

    pub fn is_solvable(&self) -> Result<bool> {
        self.basis_orbit_action()?.0.is_solvable()
    }

    /// Matrix sending basis vector `i` to the vector with index `images[i]`.
    pub fn matrix_from_basis_images(&self, images: &[usize]) -> Result<FqMatrix> {
        let q = self.field.order();
        let rows: Vec<Vec<u32>> = images.iter().map(|&i| vector_from_index(i, q, self.dim)).collect();
        FqMatrix::from_rows(self.field.clone(), &rows)
    }

    /// Irreducibility test by spinning one vector from each orbit on nonzero
    /// vectors. A reducible group yields a basis of a proper invariant subspace.
    pub fn irreducibility(&self) -> Result<Irreducibility> {
        let total = self.check_budget(DEFAULT_VECTOR_BUDGET)?;
        let q = self.field.order();
        let mut seen = vec![false; total];
        seen[0] = true;
        let mut queue = Vec::new();
        for start in 1..total {
            if seen[start] {
                continue;
            }
            let v = vector_from_index(start, q, self.dim);
            let span = self.spin(&v);
            if span.len() < self.dim {
                return Ok(Irreducibility::Reducible(span));
            }
            seen[start] = true;
            queue.clear();
            queue.push(start);
            while let Some(i) = queue.pop() {
                let v = vector_from_index(i, q, self.dim);
                for g in &self.generators {
                    let j = vector_index(&g.apply(&v), q);
                    if !seen[j] {
                        seen[j] = true;
                        queue.push(j);
                    }
                }
            }
        }
        Ok(Irreducibility::Irreducible)
    }

    pub fn is_irreducible(&self) -> Result<bool> {
        Ok(matches!(self.irreducibility()?, Irreducibility::Irreducible))
    }

    /// Echelon basis of the smallest invariant subspace containing `v`.
    pub fn spin(&self, v: &[u32]) -> Vec<Vec<u32>> {
        let mut basis = EchelonBasis::new(self.field.clone(), self.dim);
        let mut pending = vec![v.to_vec()];
        while let Some(w) = pending.pop() {
            if basis.insert(&w) {
                for g in &self.generators {
                    pending.push(g.apply(&w));
                }
            }
        }
        basis.rows
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    Irreducible,
    Reducible(Vec<Vec<u32>>),
}

/// Row-reduced basis supporting incremental insertion.
pub(crate) struct EchelonBasis {
    field: Arc<Fq>,
    dim: usize,
    pub(crate) rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl EchelonBasis {
    pub(crate) fn new(field: Arc<Fq>, dim: usize) -> Self {
        EchelonBasis {
            field,
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    /// Reduces `v` against the basis.
    pub(crate) fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let f = &*self.field;
        let mut w = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = w[p];
            if c != 0 {
                for (x, &r) in w.iter_mut().zip(row) {
                    *x = f.sub(*x, f.mul(c, r));
                }
            }
        }
        w
    }

    /// Adds `v` if independent; returns whether the span grew.
    pub(crate) fn insert(&mut self, v: &[u32]) -> bool {
        if self.rows.len() == self.dim {
            return false;
        }
        let f = self.field.clone();
        let mut w = self.reduce(v);
        let Some(p) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let s = f.inv(w[p]).unwrap();
        for x in w.iter_mut() {
            *x = f.mul(*x, s);
        }
        for row in self.rows.iter_mut() {
            let c = row[p];
            if c != 0 {
                for (x, &r) in row.iter_mut().zip(&w) {
                    *x = f.sub(*x, f.mul(c, r));
                }
            }
        }
        self.rows.push(w);
        self.pivots.push(p);
        true
    }
}

/// Basis of `{x : rows · x = 0}` for a matrix with `ncols` columns.
pub(crate) fn nullspace(field: &Fq, rows: &[Vec<u32>], ncols: usize) -> Vec<Vec<u32>> {
    let f = field;
    let mut m: Vec<Vec<u32>> = rows.iter().filter(|r| r.iter().any(|&x| x != 0)).cloned().collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pr) = (rank..m.len()).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(rank, pr);
        let s = f.inv(m[rank][col]).unwrap();
        for x in m[rank].iter_mut() {
            *x = f.mul(*x, s);
        }
        let pivot_row = m[rank].clone();
        for (i, row) in m.iter_mut().enumerate() {
            let c = row[col];
            if i != rank && c != 0 {
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    if y != 0 {
                        *x = f.sub(*x, f.mul(c, y));
                    }
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    let mut is_pivot = vec![false; ncols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut x = vec![0u32; ncols];
            x[free] = 1;
            for (row, &pc) in m.iter().zip(&pivots) {
                x[pc] = f.neg(row[free]);
            }
            x
        })
        .collect()
}

/// The affine group `V:M` on all vectors: translations by a `GF(p)`-basis of
/// `V` together with the linear generators.
pub fn affine_group(m: &MatrixGroup) -> Result<PermGroup> {
    m.check_budget(DEFAULT_VECTOR_BUDGET)?;
    let f = m.field();
    let (q, d) = (f.order(), m.dim());
    let total = m.vector_count().unwrap() as usize;
    let p = f.characteristic();
    let mut gens: Vec<Permutation> = Vec::new();
    for i in 0..d {
        for j in 0..f.degree() {
            let mut u = vec![0u32; d];
            u[i] = p.pow(j);
            let images = (0..total)
                .map(|x| {
                    let v = vector_from_index(x, q, d);
                    let w: Vec<u32> = v.iter().zip(&u).map(|(&a, &b)| f.add(a, b)).collect();
                    vector_index(&w, q)
                })
                .collect();
            gens.push(Permutation::from_images(images).unwrap());
        }
    }
    gens.extend(
        m.generators()
            .iter()
            .map(|g| m.vector_permutation(g, VectorDomain::AllVectors)),
    );
    PermGroup::new(total, gens)
}

/// `ΓL(1, p^d)` on the `p^d` field elements (zero is fixed).
pub fn gammal1(p: u64, d: u32) -> Result<PermGroup> {
    let f = field_make(p, d)?;
    let q = f.order() as usize;
    let g = f.primitive_element();
    let mult = (0..q as u32).map(|x| f.mul(g, x) as usize).collect();
    let frob = (0..q as u32).map(|x| f.frobenius(x) as usize).collect();
    PermGroup::new(
        q,
        vec![Permutation::from_images(mult)?, Permutation::from_images(frob)?],
    )
}

/// `AΓL(1, p^d)` on the `p^d` field elements.
pub fn agammal1(p: u64, d: u32) -> Result<PermGroup> {
    let f = field_make(p, d)?;
    let q = f.order() as usize;
    let mut gens = gammal1(p, d)?.generators().to_vec();
    for j in 0..d {
        let u = (p as u32).pow(j);
        let images = (0..q as u32).map(|x| f.add(x, u) as usize).collect();
        gens.push(Permutation::from_images(images)?);
    }
    PermGroup::new(q, gens)
}

pub fn mat_to_perm(m: &MatrixGroup, domain: VectorDomain) -> Result<PermGroup> {
    m.perm_image(domain)
}
