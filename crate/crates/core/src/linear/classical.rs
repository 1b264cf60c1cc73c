//! Symplectic and orthogonal groups over `GF(r)`, `r ∈ {2, 3}`, in the
//! coordinates `(a_1, b_1, ..., a_k, b_k)` shared with the extraspecial
//! construction.

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::field::field_make;
use super::group::{MatrixGroup, VectorDomain};
use super::matrix::{vector_from_index, vector_index, FqMatrix};
use crate::error::{Error, Result};
use crate::perm::{PermGroup, Permutation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClassicalKind {
    Symplectic,
    OrthogonalPlus,
    OrthogonalMinus,
}

impl ClassicalKind {
    pub fn name(self, k: usize, r: u32) -> String {
        match self {
            ClassicalKind::Symplectic => format!("Sp({},{r})", 2 * k),
            ClassicalKind::OrthogonalPlus => format!("O+({},{r})", 2 * k),
            ClassicalKind::OrthogonalMinus => format!("O-({},{r})", 2 * k),
        }
    }

    pub fn is_orthogonal(self) -> bool {
        self != ClassicalKind::Symplectic
    }
}

/// Parses names such as `Sp(4,3)`, `O+(6,2)` or `O−(4,2)` into
/// `(kind, k, r)` with `2k` the dimension.
pub fn parse_classical_name(name: &str) -> Result<(ClassicalKind, usize, u32)> {
    let bad = || Error::Parse(format!("unrecognized classical group name {name:?}"));
    let name = name.trim().replace('−', "-");
    let (head, rest) = name.split_once('(').ok_or_else(bad)?;
    let kind = match head {
        "Sp" => ClassicalKind::Symplectic,
        "O+" => ClassicalKind::OrthogonalPlus,
        "O-" => ClassicalKind::OrthogonalMinus,
        _ => return Err(bad()),
    };
    let (dim, r) = rest.strip_suffix(')').and_then(|s| s.split_once(',')).ok_or_else(bad)?;
    let dim: usize = dim.trim().parse().map_err(|_| bad())?;
    let r: u32 = r.trim().parse().map_err(|_| bad())?;
    if dim == 0 || dim % 2 == 1 {
        return Err(bad());
    }
    Ok((kind, dim / 2, r))
}

/// `B(v, w) = Σ (a'_i b_i - a_i b'_i) mod r` for `v = (a, b)`, `w = (a', b')`.
pub fn symplectic_form(r: u32, v: &[u32], w: &[u32]) -> u32 {
    let mut acc = 0u32;
    for i in 0..v.len() / 2 {
        acc += w[2 * i] * v[2 * i + 1] % r;
        acc += (r - v[2 * i] * w[2 * i + 1] % r) % r;
    }
    acc % r
}

/// `Q(v) = Σ a_i b_i` over `GF(2)`; the minus form adds `a_k + b_k`.
pub fn quadratic_form(minus: bool, v: &[u32]) -> u32 {
    let k = v.len() / 2;
    let mut acc: u32 = (0..k).map(|i| v[2 * i] * v[2 * i + 1]).sum();
    if minus && k > 0 {
        acc += v[2 * k - 2] + v[2 * k - 1];
    }
    acc % 2
}

/// Order of `Sp(2k, r)` or `O^±(2k, 2)`.
pub fn classical_order(kind: ClassicalKind, k: usize, r: u32) -> BigUint {
    let r = BigUint::from(r);
    let one = BigUint::from(1u32);
    match kind {
        ClassicalKind::Symplectic => {
            let mut n = r.pow((k * k) as u32);
            for i in 1..=k {
                n *= r.pow(2 * i as u32) - &one;
            }
            n
        }
        _ => {
            let two = BigUint::from(2u32);
            let mut n = &two * two.pow((k * (k - 1)) as u32);
            let top = two.pow(k as u32);
            n *= if kind == ClassicalKind::OrthogonalPlus { top - &one } else { top + &one };
            for i in 1..k {
                n *= two.pow(2 * i as u32) - &one;
            }
            n
        }
    }
}

/// A classical group with its matrices and its action on nonzero vectors.
#[derive(Clone, Debug)]
pub struct ClassicalGroup {
    kind: ClassicalKind,
    k: usize,
    r: u32,
    matrices: MatrixGroup,
    perm: PermGroup,
}

impl ClassicalGroup {
    pub fn new(kind: ClassicalKind, k: usize, r: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("rank must be positive".into()));
        }
        match (kind, r) {
            (ClassicalKind::Symplectic, 2 | 3) | (_, 2) => {}
            _ => return Err(Error::InvalidArgument(format!("{} is not supported", kind.name(k, r)))),
        }
        let n = 2 * k;
        if (r as u64).pow(n as u32) > 1 << 16 {
            return Err(Error::budget("classical vector count", (r as u64).pow(n as u32), 1u64 << 16));
        }
        let field = field_make(r as u64, 1)?;
        let target = classical_order(kind, k, r);
        let minus = kind == ClassicalKind::OrthogonalMinus;
        let total = (r as usize).pow(n as u32);
        let shell = MatrixGroup::new(field.clone(), n, vec![])?;

        let mut perm = PermGroup::trivial(total - 1);
        let mut gens = Vec::new();
        for idx in 1..total {
            if *perm.order() == target {
                break;
            }
            let u = vector_from_index(idx, r, n);
            if kind.is_orthogonal() && quadratic_form(minus, &u) != 1 {
                continue;
            }
            let rows: Vec<Vec<u32>> = (0..n)
                .map(|j| {
                    let mut e = vec![0u32; n];
                    e[j] = 1;
                    let c = symplectic_form(r, &e, &u);
                    e.iter().zip(&u).map(|(&x, &y)| (x + c * y) % r).collect()
                })
                .collect();
            let t = FqMatrix::from_rows(field.clone(), &rows)?;
            let tp = shell.vector_permutation(&t, VectorDomain::NonzeroVectors);
            if !perm.contains_unchecked(&tp) {
                perm = perm.extended(std::slice::from_ref(&tp))?;
                gens.push(t);
            }
        }
        // Reflections fall short only for O+(4,2); the remaining elements are
        // found among all 4x4 matrices.
        if *perm.order() != target && n <= 4 && kind.is_orthogonal() {
            for code in 0u32..1 << (n * n) {
                if *perm.order() == target {
                    break;
                }
                let entries = (0..n * n).map(|i| (code >> i) & 1).collect();
                let m = FqMatrix::new(field.clone(), n, entries)?;
                if !m.is_invertible() || !preserves_forms(kind, r, &m) {
                    continue;
                }
                let mp = shell.vector_permutation(&m, VectorDomain::NonzeroVectors);
                if !perm.contains_unchecked(&mp) {
                    perm = perm.extended(std::slice::from_ref(&mp))?;
                    gens.push(m);
                }
            }
        }
        if *perm.order() != target {
            return Err(Error::Verification(format!(
                "{} generated a group of order {} instead of {target}",
                kind.name(k, r),
                perm.order()
            )));
        }
        let perm = PermGroup::new(total - 1, perm.generators().to_vec())?;
        let matrices = MatrixGroup::new(field, n, gens)?.with_note(kind.name(k, r));
        Ok(ClassicalGroup {
            kind,
            k,
            r,
            matrices,
            perm,
        })
    }

    pub fn from_name(name: &str) -> Result<Self> {
        let (kind, k, r) = parse_classical_name(name)?;
        ClassicalGroup::new(kind, k, r)
    }

    pub fn kind(&self) -> ClassicalKind {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.k
    }

    pub fn prime(&self) -> u32 {
        self.r
    }

    pub fn name(&self) -> String {
        self.kind.name(self.k, self.r)
    }

    /// The defining matrices; generator `i` is labelled by the `i`-th letter.
    pub fn matrices(&self) -> &MatrixGroup {
        &self.matrices
    }

    /// Action on the nonzero vectors of `GF(r)^{2k}` (point = index - 1).
    pub fn perm(&self) -> &PermGroup {
        &self.perm
    }

    pub fn perm_of(&self, m: &FqMatrix) -> Permutation {
        self.matrices.vector_permutation(m, VectorDomain::NonzeroVectors)
    }

    /// Matrix of a permutation of nonzero vectors that comes from a linear map.
    pub fn matrix_of(&self, g: &Permutation) -> Result<FqMatrix> {
        let n = 2 * self.k;
        if g.degree() != self.perm.degree() {
            return Err(Error::DegreeMismatch {
                expected: self.perm.degree(),
                got: g.degree(),
            });
        }
        let images: Vec<usize> = (0..n)
            .map(|j| {
                let mut e = vec![0u32; n];
                e[j] = 1;
                g.image(vector_index(&e, self.r) - 1) + 1
            })
            .collect();
        let m = self.matrices.matrix_from_basis_images(&images)?;
        if self.perm_of(&m) != *g {
            return Err(Error::InvalidArgument(format!("{g} is not induced by a linear map")));
        }
        Ok(m)
    }

    pub fn preserves_forms(&self, m: &FqMatrix) -> bool {
        preserves_forms(self.kind, self.r, m)
    }
}

fn preserves_forms(kind: ClassicalKind, r: u32, m: &FqMatrix) -> bool {
    let n = m.dim();
    let rows = m.rows();
    let basis = |j: usize| {
        let mut e = vec![0u32; n];
        e[j] = 1;
        e
    };
    for i in 0..n {
        for j in 0..n {
            if symplectic_form(r, &rows[i], &rows[j]) != symplectic_form(r, &basis(i), &basis(j)) {
                return false;
            }
        }
    }
    if kind.is_orthogonal() {
        let minus = kind == ClassicalKind::OrthogonalMinus;
        // Q is determined by its values on a basis and the polar form.
        return (0..n).all(|i| quadratic_form(minus, &rows[i]) == quadratic_form(minus, &basis(i)));
    }
    true
}

impl fmt::Display for ClassicalGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}
