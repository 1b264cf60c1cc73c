use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::Mul;
use std::sync::Arc;

use super::field::{field_make, Fq};
use crate::error::{Error, Result};

/// A square matrix over `GF(q)`, acting on row vectors from the right.
#[derive(Clone)]
pub struct FqMatrix {
    field: Arc<Fq>,
    dim: usize,
    pub(crate) entries: Vec<u32>,
}

impl FqMatrix {
    pub fn new(field: Arc<Fq>, dim: usize, entries: Vec<u32>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::InvalidArgument(format!(
                "{} entries for a {dim}x{dim} matrix",
                entries.len()
            )));
        }
        if let Some(&x) = entries.iter().find(|&&x| x >= field.order()) {
            return Err(Error::InvalidArgument(format!("{x} is not an element of {field:?}")));
        }
        Ok(FqMatrix { field, dim, entries })
    }

    pub fn from_rows(field: Arc<Fq>, rows: &[Vec<u32>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidArgument("matrix rows must have equal length".into()));
        }
        FqMatrix::new(field, dim, rows.concat())
    }

    pub fn identity(field: Arc<Fq>, dim: usize) -> Self {
        FqMatrix::scalar(field, dim, 1)
    }

    pub fn scalar(field: Arc<Fq>, dim: usize, c: u32) -> Self {
        let mut entries = vec![0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = c;
        }
        FqMatrix { field, dim, entries }
    }

    pub fn diagonal(field: Arc<Fq>, diag: &[u32]) -> Self {
        let dim = diag.len();
        let mut entries = vec![0; dim * dim];
        for (i, &c) in diag.iter().enumerate() {
            entries[i * dim + i] = c;
        }
        FqMatrix { field, dim, entries }
    }

    /// Permutation matrix with `e_i ↦ e_{perm[i]}`.
    pub fn permutation(field: Arc<Fq>, perm: &[usize]) -> Self {
        let dim = perm.len();
        let mut entries = vec![0; dim * dim];
        for (i, &j) in perm.iter().enumerate() {
            entries[i * dim + j] = 1;
        }
        FqMatrix { field, dim, entries }
    }

    pub fn field(&self) -> &Arc<Fq> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.entries.chunks(self.dim.max(1)).map(<[u32]>::to_vec).collect()
    }

    fn compatible(&self, other: &FqMatrix) -> Result<()> {
        if !self.field.same_field(&other.field) {
            return Err(Error::InvalidArgument(format!(
                "field mismatch: {:?} vs {:?}",
                self.field, other.field
            )));
        }
        if self.dim != other.dim {
            return Err(Error::DegreeMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        Ok(())
    }

    pub fn checked_mul(&self, other: &FqMatrix) -> Result<FqMatrix> {
        self.compatible(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &FqMatrix) -> FqMatrix {
        let (n, f) = (self.dim, &*self.field);
        let mut entries = vec![0u32; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let b = other.entries[k * n + j];
                    if b != 0 {
                        let e = &mut entries[i * n + j];
                        *e = f.add(*e, f.mul(a, b));
                    }
                }
            }
        }
        FqMatrix {
            field: self.field.clone(),
            dim: n,
            entries,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.scalar_value() == Some(1)
    }

    /// The `c` with `self = c·I`, if any.
    pub fn scalar_value(&self) -> Option<u32> {
        let n = self.dim;
        let c = if n == 0 { 1 } else { self.entries[0] };
        (0..n)
            .all(|i| (0..n).all(|j| self.entries[i * n + j] == if i == j { c } else { 0 }))
            .then_some(c)
    }

    pub fn scaled(&self, c: u32) -> FqMatrix {
        FqMatrix {
            field: self.field.clone(),
            dim: self.dim,
            entries: self.entries.iter().map(|&x| self.field.mul(c, x)).collect(),
        }
    }

    pub fn transpose(&self) -> FqMatrix {
        let n = self.dim;
        let mut entries = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[j * n + i] = self.entries[i * n + j];
            }
        }
        FqMatrix {
            field: self.field.clone(),
            dim: n,
            entries,
        }
    }

    pub fn inverse(&self) -> Result<FqMatrix> {
        let (n, f) = (self.dim, &*self.field);
        let mut a = self.entries.clone();
        let mut inv = FqMatrix::identity(self.field.clone(), n).entries;
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| a[r * n + col] != 0)
                .ok_or_else(|| Error::InvalidArgument("matrix is singular".into()))?;
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                    inv.swap(pivot * n + j, col * n + j);
                }
            }
            let s = f.inv(a[col * n + col])?;
            for j in 0..n {
                a[col * n + j] = f.mul(a[col * n + j], s);
                inv[col * n + j] = f.mul(inv[col * n + j], s);
            }
            for r in 0..n {
                let factor = a[r * n + col];
                if r == col || factor == 0 {
                    continue;
                }
                for j in 0..n {
                    a[r * n + j] = f.sub(a[r * n + j], f.mul(factor, a[col * n + j]));
                    inv[r * n + j] = f.sub(inv[r * n + j], f.mul(factor, inv[col * n + j]));
                }
            }
        }
        Ok(FqMatrix {
            field: self.field.clone(),
            dim: n,
            entries: inv,
        })
    }

    pub fn is_invertible(&self) -> bool {
        self.inverse().is_ok()
    }

    pub fn pow(&self, mut e: u64) -> FqMatrix {
        let mut base = self.clone();
        let mut acc = FqMatrix::identity(self.field.clone(), self.dim);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative order, searched up to `limit`.
    pub fn order(&self, limit: u64) -> Result<u64> {
        if !self.is_invertible() {
            return Err(Error::InvalidArgument("singular matrix has no order".into()));
        }
        let mut x = self.clone();
        for i in 1..=limit {
            if x.is_identity() {
                return Ok(i);
            }
            x = x.mul_unchecked(self);
        }
        Err(Error::budget("matrix order search", limit, limit))
    }

    /// `self^-1 · other · self`.
    pub fn conjugate(&self, other: &FqMatrix) -> Result<FqMatrix> {
        Ok(self.inverse()?.checked_mul(other)?.mul_unchecked(self))
    }

    /// Entrywise `x ↦ x^p`.
    pub fn frobenius_entrywise(&self) -> FqMatrix {
        FqMatrix {
            field: self.field.clone(),
            dim: self.dim,
            entries: self.entries.iter().map(|&x| self.field.frobenius(x)).collect(),
        }
    }

    /// Row vector times matrix.
    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        let (n, f) = (self.dim, &*self.field);
        let mut out = vec![0u32; n];
        for (i, &vi) in v.iter().enumerate() {
            if vi == 0 {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = f.add(*o, f.mul(vi, self.entries[i * n + j]));
            }
        }
        out
    }

    /// `self ⊗ other`, with row index `(i1, i2) ↦ i1·m + i2`.
    pub fn kron(&self, other: &FqMatrix) -> Result<FqMatrix> {
        if !self.field.same_field(&other.field) {
            return Err(Error::InvalidArgument("field mismatch in Kronecker product".into()));
        }
        let (k, m, f) = (self.dim, other.dim, &*self.field);
        let n = k * m;
        let mut entries = vec![0u32; n * n];
        for i1 in 0..k {
            for j1 in 0..k {
                let a = self.get(i1, j1);
                if a == 0 {
                    continue;
                }
                for i2 in 0..m {
                    for j2 in 0..m {
                        entries[(i1 * m + i2) * n + j1 * m + j2] = f.mul(a, other.get(i2, j2));
                    }
                }
            }
        }
        Ok(FqMatrix {
            field: self.field.clone(),
            dim: n,
            entries,
        })
    }
}

/// `g ⊗ I_m`.
pub fn kron_lift(g: &FqMatrix, m: usize) -> FqMatrix {
    g.kron(&FqMatrix::identity(g.field.clone(), m)).unwrap()
}

/// `I_k ⊗ z`.
pub fn kron_right(k: usize, z: &FqMatrix) -> FqMatrix {
    FqMatrix::identity(z.field.clone(), k).kron(z).unwrap()
}

/// Matrix over `GF(p)` of `y ↦ y·c` on `GF(p^m)` in the basis `1, x, .., x^(m-1)`.
pub fn multiplication_matrix(field: &Fq, prime_field: &Arc<Fq>, c: u32) -> FqMatrix {
    let m = field.degree() as usize;
    let p = field.characteristic();
    let rows: Vec<Vec<u32>> = (0..m)
        .map(|j| field.coefficients(field.mul(p.pow(j as u32), c)))
        .collect();
    FqMatrix::from_rows(prime_field.clone(), &rows).unwrap()
}

/// Replaces every entry by its multiplication matrix, embedding
/// `GL(k, p^m)` in `GL(km, p)`.
pub fn blowup(a: &FqMatrix, prime_field: &Arc<Fq>) -> Result<FqMatrix> {
    let f = &*a.field;
    if prime_field.degree() != 1 || prime_field.characteristic() != f.characteristic() {
        return Err(Error::InvalidArgument(format!(
            "{prime_field:?} is not the prime field of {f:?}"
        )));
    }
    let (k, m) = (a.dim, f.degree() as usize);
    let n = k * m;
    let mut entries = vec![0u32; n * n];
    for i in 0..k {
        for j in 0..k {
            let block = multiplication_matrix(f, prime_field, a.get(i, j));
            for r in 0..m {
                for c in 0..m {
                    entries[(i * m + r) * n + j * m + c] = block.get(r, c);
                }
            }
        }
    }
    FqMatrix::new(prime_field.clone(), n, entries)
}

/// Matrix over `GF(p)` of `y ↦ y^p` on `GF(p^m)`.
pub fn frobenius_of(field: &Fq, prime_field: &Arc<Fq>) -> FqMatrix {
    let m = field.degree() as usize;
    let p = field.characteristic();
    let rows: Vec<Vec<u32>> = (0..m)
        .map(|j| field.coefficients(field.frobenius(p.pow(j as u32))))
        .collect();
    FqMatrix::from_rows(prime_field.clone(), &rows).unwrap()
}

/// Companion matrix of the primitive modulus of `GF(p^a)`: a Singer cycle
/// of order `p^a - 1`.
pub fn singer_matrix(p: u64, a: u32) -> Result<FqMatrix> {
    let big = field_make(p, a)?;
    let prime = field_make(p, 1)?;
    Ok(multiplication_matrix(&big, &prime, big.primitive_element()))
}

/// The Frobenius map of `GF(p^a)` over `GF(p)` in the same basis as
/// [`singer_matrix`]; it satisfies `s^-1 t s = t^p`.
pub fn frobenius_matrix(p: u64, a: u32) -> Result<FqMatrix> {
    let big = field_make(p, a)?;
    let prime = field_make(p, 1)?;
    Ok(frobenius_of(&big, &prime))
}

/// Block-diagonal Frobenius on `GF(p^m)^k` viewed over `GF(p)`, so that
/// `blowup(A^φ) = φ^-1 · blowup(A) · φ`.
pub fn frobenius_blowup(field: &Fq, prime_field: &Arc<Fq>, k: usize) -> FqMatrix {
    let s = frobenius_of(field, prime_field);
    kron_right(k, &s)
}

/// Index of a vector: `Σ v_i q^(d-1-i)`.
pub fn vector_index(v: &[u32], q: u32) -> usize {
    v.iter().fold(0usize, |acc, &c| acc * q as usize + c as usize)
}

pub fn vector_from_index(mut idx: usize, q: u32, d: usize) -> Vec<u32> {
    let mut v = vec![0u32; d];
    for c in v.iter_mut().rev() {
        *c = (idx % q as usize) as u32;
        idx /= q as usize;
    }
    v
}

impl Mul for &FqMatrix {
    type Output = FqMatrix;

    fn mul(self, rhs: &FqMatrix) -> FqMatrix {
        self.checked_mul(rhs).expect("incompatible matrices")
    }
}

impl PartialEq for FqMatrix {
    fn eq(&self, other: &FqMatrix) -> bool {
        self.dim == other.dim && self.entries == other.entries && self.field.same_field(&other.field)
    }
}

impl Eq for FqMatrix {}

impl Hash for FqMatrix {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.dim.hash(state);
        self.entries.hash(state);
    }
}

impl fmt::Debug for FqMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rows())
    }
}
