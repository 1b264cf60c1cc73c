//! Extraspecial `r`-groups of order `r^(2k+1)` in `GL(r^k, q)` and their
//! normalizers.
//!
//! `P(v)` for `v = (a_1, b_1, ..., a_k, b_k) ∈ GF(r)^(2k)` is the Kronecker
//! product of `X^(a_i) Y^(b_i)` with `X` diagonal of `r`-th roots of unity and
//! `Y` the cyclic shift. The minus type replaces the last factor pair by a
//! quaternion pair `I, J`. Conjugation by a normalizing matrix induces a map on
//! `E/Z(E) = GF(r)^(2k)` that preserves [`symplectic_form`] (and
//! [`quadratic_form`] when no square root of `-1` is available).

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::classical::{quadratic_form, symplectic_form, ClassicalGroup, ClassicalKind};
use super::field::Fq;
use super::group::{nullspace, MatrixGroup};
use super::matrix::{vector_from_index, FqMatrix};
use crate::error::{Error, Result};
use crate::perm::{PermGroup, Permutation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExtraspecialKind {
    /// Central product of `k` groups `D8` (or `3^(1+2)` for `r = 3`).
    Plus,
    /// `k - 1` copies of `D8` and one `Q8`; only for `r = 2`.
    Minus,
}

#[derive(Clone, Debug)]
pub struct ExtraspecialGroup {
    field: Arc<Fq>,
    r: u32,
    k: usize,
    kind: ExtraspecialKind,
    omega: u32,
    /// Factor matrices: `[X, Y]` and, for the minus type, `[I, J]`.
    pair: [FqMatrix; 2],
    quaternion: Option<[FqMatrix; 2]>,
}

/// Summary of the checks made by [`ExtraspecialGroup::verify`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtraspecialCheck {
    pub order: u64,
    pub center_order: u64,
    pub quotient_rank: usize,
    pub involutions: u64,
}

impl ExtraspecialGroup {
    pub fn new(r: u32, k: usize, field: Arc<Fq>, kind: ExtraspecialKind) -> Result<Self> {
        if r != 2 && r != 3 {
            return Err(Error::InvalidArgument(format!("extraspecial prime {r} is not supported")));
        }
        if k == 0 {
            return Err(Error::InvalidArgument("rank must be positive".into()));
        }
        if field.characteristic() == r {
            return Err(Error::InvalidArgument(format!("field characteristic equals r = {r}")));
        }
        if kind == ExtraspecialKind::Minus && r != 2 {
            return Err(Error::InvalidArgument("the minus type needs r = 2".into()));
        }
        if (r as u64).pow(k as u32) > 64 {
            return Err(Error::budget("extraspecial dimension", (r as u64).pow(k as u32), 64u64));
        }
        let omega = field.root_of_unity(r as u64).ok_or_else(|| {
            Error::InvalidArgument(format!("{field:?} has no primitive {r}-th root of unity"))
        })?;
        let n = r as usize;
        let x = FqMatrix::diagonal(field.clone(), &(0..r).map(|j| field.pow(omega, j as u64)).collect::<Vec<_>>());
        let y = FqMatrix::permutation(field.clone(), &(0..n).map(|j| (j + 1) % n).collect::<Vec<_>>());
        let quaternion = match kind {
            ExtraspecialKind::Plus => None,
            ExtraspecialKind::Minus => {
                let (a, b) = sum_of_squares_minus_one(&field);
                let m1 = field.neg(1);
                let i = FqMatrix::new(field.clone(), 2, vec![0, 1, m1, 0])?;
                let j = FqMatrix::new(field.clone(), 2, vec![a, b, b, field.neg(a)])?;
                Some([i, j])
            }
        };
        Ok(ExtraspecialGroup {
            field,
            r,
            k,
            kind,
            omega,
            pair: [x, y],
            quaternion,
        })
    }

    pub fn field(&self) -> &Arc<Fq> {
        &self.field
    }

    pub fn prime(&self) -> u32 {
        self.r
    }

    pub fn rank(&self) -> usize {
        self.k
    }

    pub fn kind(&self) -> ExtraspecialKind {
        self.kind
    }

    /// `r^k`.
    pub fn dim(&self) -> usize {
        (self.r as usize).pow(self.k as u32)
    }

    /// The scalar generating `Z(E)`.
    pub fn omega(&self) -> u32 {
        self.omega
    }

    fn factor(&self, i: usize, a: u32, b: u32) -> FqMatrix {
        let [x, y] = match (&self.quaternion, i + 1 == self.k) {
            (Some(q), true) => q,
            _ => &self.pair,
        };
        &x.pow(a as u64) * &y.pow(b as u64)
    }

    /// The matrix `P(v)`; the first coordinate pair is the most significant
    /// Kronecker factor.
    pub fn pauli(&self, v: &[u32]) -> FqMatrix {
        let mut m = self.factor(0, v[0] % self.r, v[1] % self.r);
        for i in 1..self.k {
            m = m.kron(&self.factor(i, v[2 * i] % self.r, v[2 * i + 1] % self.r)).unwrap();
        }
        m
    }

    fn unit(&self, j: usize) -> Vec<u32> {
        let mut e = vec![0u32; 2 * self.k];
        e[j] = 1;
        e
    }

    /// `P(e_j)` for the standard basis of `GF(r)^(2k)`.
    pub fn generators(&self) -> Vec<FqMatrix> {
        (0..2 * self.k).map(|j| self.pauli(&self.unit(j))).collect()
    }

    pub fn group(&self) -> MatrixGroup {
        MatrixGroup::new(self.field.clone(), self.dim(), self.generators())
            .unwrap()
            .with_note(format!("extraspecial {}^(1+{})", self.r, 2 * self.k))
    }

    /// `F = E ∘ Z(GL(r^k, q))`.
    pub fn central_product(&self) -> MatrixGroup {
        let mut gens = self.generators();
        gens.push(FqMatrix::scalar(self.field.clone(), self.dim(), self.field.primitive_element()));
        MatrixGroup::new(self.field.clone(), self.dim(), gens)
            .unwrap()
            .with_note("F = E∘U")
    }

    /// `|F| = (q - 1) r^(2k)`.
    pub fn central_product_order(&self) -> BigUint {
        BigUint::from(self.field.order() - 1) * BigUint::from(self.r).pow(2 * self.k as u32)
    }

    /// The commutator form: `[P(v), P(w)] = ω^B(v,w)`.
    pub fn form(&self, v: &[u32], w: &[u32]) -> u32 {
        symplectic_form(self.r, v, w)
    }

    /// `P(v)^2 = (-1)^Q(v)` for `r = 2`.
    pub fn quadratic(&self, v: &[u32]) -> Option<u32> {
        (self.r == 2).then(|| quadratic_form(self.kind == ExtraspecialKind::Minus, v))
    }

    /// Type of `N/F`: symplectic when the field contains the scalars that
    /// identify the two central products, orthogonal otherwise.
    pub fn quotient_kind(&self) -> ClassicalKind {
        if self.r == 3 || self.field.sqrt(self.field.neg(1)).is_some() {
            ClassicalKind::Symplectic
        } else if self.kind == ExtraspecialKind::Plus {
            ClassicalKind::OrthogonalPlus
        } else {
            ClassicalKind::OrthogonalMinus
        }
    }

    /// Checks `|E| = r^(2k+1)`, `|Z(E)| = r` and that `E/Z(E)` is elementary
    /// abelian of rank `2k`.
    pub fn verify(&self) -> Result<ExtraspecialCheck> {
        let gens = self.generators();
        for (i, g) in gens.iter().enumerate() {
            if g.pow(self.r as u64).scalar_value().is_none() {
                return Err(Error::Verification(format!("P(e_{i})^{} is not scalar", self.r)));
            }
            for h in &gens[i + 1..] {
                let c = &(&g.inverse()? * &h.inverse()?) * &(g * h);
                if c.scalar_value().is_none() {
                    return Err(Error::Verification("generator commutator is not scalar".into()));
                }
            }
        }
        let (perm, _) = self.group().basis_orbit_action()?;
        let order = perm.order_u64().unwrap_or(u64::MAX);
        let expected = (self.r as u64).pow(2 * self.k as u32 + 1);
        if order != expected {
            return Err(Error::Verification(format!("|E| = {order}, expected {expected}")));
        }
        let mut center = 0u64;
        let mut involutions = 0u64;
        for x in perm.elements()? {
            if perm.generators().iter().all(|g| x.then(g) == g.then(&x)) {
                center += 1;
            }
            if !x.is_identity() && x.then(&x).is_identity() {
                involutions += 1;
            }
        }
        if center != self.r as u64 {
            return Err(Error::Verification(format!("|Z(E)| = {center}, expected {}", self.r)));
        }
        Ok(ExtraspecialCheck {
            order,
            center_order: center,
            quotient_rank: 2 * self.k,
            involutions,
        })
    }
}

/// `(a, b)` in the prime field with `a^2 + b^2 = -1`.
fn sum_of_squares_minus_one(f: &Fq) -> (u32, u32) {
    let p = f.characteristic();
    let squares: HashMap<u32, u32> = (0..p).map(|b| (f.mul(b, b), b)).collect();
    for a in 0..p {
        let t = f.sub(f.neg(1), f.mul(a, a));
        if let Some(&b) = squares.get(&t) {
            return (a, b);
        }
    }
    unreachable!("every element of a prime field of odd order is a sum of two squares")
}

/// All `c` with `c^r = s` in `f`.
fn roots_of(f: &Fq, s: u32, r: u64) -> Vec<u32> {
    let Some(l) = f.log(s) else {
        return vec![];
    };
    let n = f.order() as u64 - 1;
    (0..n).filter(|i| (i * r) % n == l as u64).map(|i| f.exp(i)).collect()
}

/// Key identifying a matrix up to a nonzero scalar.
fn projective_key(f: &Fq, m: &FqMatrix) -> Vec<u32> {
    let lead = m.entries().iter().copied().find(|&x| x != 0).unwrap_or(1);
    let s = f.inv(lead).unwrap();
    m.entries().iter().map(|&x| f.mul(x, s)).collect()
}

/// `N = N_GL(F)` presented by `F` and lifts of generators of the classical
/// group `N/F`.
#[derive(Clone, Debug)]
pub struct ExtraspecialNormalizer {
    es: ExtraspecialGroup,
    classical: ClassicalGroup,
    lifts: Vec<FqMatrix>,
    table: HashMap<Vec<u32>, Vec<u32>>,
}

impl ExtraspecialNormalizer {
    pub fn new(es: ExtraspecialGroup) -> Result<Self> {
        let quotient = es.quotient_kind();
        let classical = ClassicalGroup::new(quotient, es.k, es.r)?;
        let total = (es.r as usize).pow(2 * es.k as u32);
        let table = (0..total)
            .map(|i| {
                let v = vector_from_index(i, es.r, 2 * es.k);
                (projective_key(&es.field, &es.pauli(&v)), v)
            })
            .collect();
        let mut n = ExtraspecialNormalizer {
            es,
            classical,
            lifts: Vec::new(),
            table,
        };
        let gens = n.classical.matrices().generators().to_vec();
        let mut lifts = Vec::with_capacity(gens.len());
        for (i, s) in gens.iter().enumerate() {
            let m = n.lift_matrix(s)?;
            if n.quotient_image(&m)? != *s {
                return Err(Error::Verification(format!("lift of generator {i} induces the wrong map")));
            }
            lifts.push(m);
        }
        n.lifts = lifts;
        Ok(n)
    }

    pub fn extraspecial(&self) -> &ExtraspecialGroup {
        &self.es
    }

    pub fn classical(&self) -> &ClassicalGroup {
        &self.classical
    }

    /// Lifts of the generators of [`Self::classical`], in the same order.
    pub fn lifts(&self) -> &[FqMatrix] {
        &self.lifts
    }

    /// Generators of `F` followed by the lifts.
    pub fn group(&self) -> MatrixGroup {
        let f = self.es.central_product();
        let mut gens = f.generators().to_vec();
        gens.extend(self.lifts.iter().cloned());
        MatrixGroup::new(self.es.field.clone(), self.es.dim(), gens)
            .unwrap()
            .with_note(format!("N(F), N/F = {}", self.classical.name()))
    }

    /// A matrix `M` with `M^-1 P(v) M ∈ F P(v s)` for all `v`. Normalised so
    /// that its first nonzero entry is 1, which keeps it over the smallest
    /// field containing `E` and the needed scalars.
    pub fn lift_matrix(&self, s: &FqMatrix) -> Result<FqMatrix> {
        let es = &self.es;
        let f = &*es.field;
        let e = es.dim();
        if s.dim() != 2 * es.k || !self.classical.preserves_forms(s) {
            return Err(Error::InvalidArgument(format!(
                "{s:?} does not preserve the form of {}",
                self.classical.name()
            )));
        }
        let mut rows: Vec<Vec<u32>> = Vec::new();
        for j in 0..2 * es.k {
            let p = es.pauli(&es.unit(j));
            let target = s.rows()[j].clone();
            let q = es.pauli(&target);
            let lhs = p.pow(es.r as u64).scalar_value().unwrap();
            let rhs = q.pow(es.r as u64).scalar_value().unwrap();
            let ratio = f.mul(lhs, f.inv(rhs)?);
            let Some(&c) = roots_of(f, ratio, es.r as u64).first() else {
                return Err(Error::Verification(format!(
                    "no scalar c with c^{} = {ratio} for basis vector {j}",
                    es.r
                )));
            };
            // (P M)_{xy} - c (M Q)_{xy} = 0, unknown M_{zw} at column z*e + w
            for x in 0..e {
                for y in 0..e {
                    let mut row = vec![0u32; e * e];
                    for z in 0..e {
                        let a = p.get(x, z);
                        if a != 0 {
                            row[z * e + y] = f.add(row[z * e + y], a);
                        }
                        let b = q.get(z, y);
                        if b != 0 {
                            row[x * e + z] = f.sub(row[x * e + z], f.mul(c, b));
                        }
                    }
                    rows.push(row);
                }
            }
        }
        let null = nullspace(f, &rows, e * e);
        if null.len() != 1 {
            return Err(Error::Verification(format!(
                "intertwiner space has dimension {}, expected 1",
                null.len()
            )));
        }
        let m = FqMatrix::new(es.field.clone(), e, projective_key(f, &FqMatrix::new(es.field.clone(), e, null[0].clone())?))?;
        if !m.is_invertible() {
            return Err(Error::Verification("intertwiner is singular".into()));
        }
        Ok(m)
    }

    /// Lift of an element of the classical group given as a permutation of
    /// nonzero vectors.
    pub fn lift(&self, g: &Permutation) -> Result<FqMatrix> {
        self.lift_matrix(&self.classical.matrix_of(g)?)
    }

    /// The map `N → N/F` on a matrix; fails when `m` does not normalize `F`.
    pub fn quotient_image(&self, m: &FqMatrix) -> Result<FqMatrix> {
        let es = &self.es;
        let rows = (0..2 * es.k)
            .map(|j| {
                let c = m.conjugate(&es.pauli(&es.unit(j)))?;
                self.table
                    .get(&projective_key(&es.field, &c))
                    .cloned()
                    .ok_or_else(|| Error::Verification("matrix does not normalize F".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        FqMatrix::from_rows(self.classical.matrices().field().clone(), &rows)
    }

    /// `N/F` image of `m` as a permutation of nonzero vectors.
    pub fn quotient_perm(&self, m: &FqMatrix) -> Result<Permutation> {
        Ok(self.classical.perm_of(&self.quotient_image(m)?))
    }

    /// `|N| / |F|`, computed from a faithful permutation action of `N`.
    pub fn quotient_order(&self) -> Result<BigUint> {
        let n = self.group().order()?;
        let f = self.es.central_product_order();
        if &n % &f != BigUint::from(0u32) {
            return Err(Error::Verification(format!("|F| = {f} does not divide |N| = {n}")));
        }
        Ok(n / f)
    }

    /// The subgroup of the classical group induced by matrices that normalize `F`.
    pub fn quotient_group(&self, matrices: &[FqMatrix]) -> Result<PermGroup> {
        let gens = matrices
            .iter()
            .map(|m| self.quotient_perm(m))
            .collect::<Result<Vec<_>>>()?;
        PermGroup::new(self.classical.perm().degree(), gens)
    }
}

/// Convenience wrapper: extraspecial group of the given kind together with
/// its normalizer.
pub fn extraspecial_normalizer(
    r: u32,
    k: usize,
    field: Arc<Fq>,
    kind: ExtraspecialKind,
) -> Result<ExtraspecialNormalizer> {
    ExtraspecialNormalizer::new(ExtraspecialGroup::new(r, k, field, kind)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::{field_make, VectorDomain};

    fn commutator(a: &FqMatrix, b: &FqMatrix) -> FqMatrix {
        &(&a.inverse().unwrap() * &b.inverse().unwrap()) * &(a * b)
    }

    #[test]
    fn commutators_follow_the_form() {
        for (r, k, q, kind) in [
            (3u32, 1usize, (7u64, 1u32), ExtraspecialKind::Plus),
            (2, 2, (5, 1), ExtraspecialKind::Plus),
            (2, 2, (3, 1), ExtraspecialKind::Minus),
            (3, 2, (2, 2), ExtraspecialKind::Plus),
        ] {
            let f = field_make(q.0, q.1).unwrap();
            let es = ExtraspecialGroup::new(r, k, f.clone(), kind).unwrap();
            let total = (r as usize).pow(2 * k as u32);
            for i in 0..total {
                let v = vector_from_index(i, r, 2 * k);
                let pv = es.pauli(&v);
                if let Some(qv) = es.quadratic(&v) {
                    let sign = if qv == 0 { 1 } else { f.neg(1) };
                    assert_eq!(pv.pow(2).scalar_value(), Some(sign));
                }
                for j in 0..total {
                    let w = vector_from_index(j, r, 2 * k);
                    let c = commutator(&pv, &es.pauli(&w));
                    assert_eq!(c.scalar_value(), Some(f.pow(es.omega(), es.form(&v, &w) as u64)));
                }
            }
        }
    }

    #[test]
    fn orders_and_centers() {
        let q8 = ExtraspecialGroup::new(2, 1, field_make(3, 1).unwrap(), ExtraspecialKind::Minus).unwrap();
        let check = q8.verify().unwrap();
        assert_eq!((check.order, check.center_order, check.involutions), (8, 2, 1));
        let d8 = ExtraspecialGroup::new(2, 1, field_make(3, 1).unwrap(), ExtraspecialKind::Plus).unwrap();
        assert_eq!(d8.verify().unwrap().involutions, 5);
        let e27 = ExtraspecialGroup::new(3, 1, field_make(7, 1).unwrap(), ExtraspecialKind::Plus).unwrap();
        assert_eq!(e27.dim(), 3);
        assert_eq!(e27.verify().unwrap().order, 27);
        let e32 = ExtraspecialGroup::new(2, 2, field_make(5, 1).unwrap(), ExtraspecialKind::Plus).unwrap();
        let check = e32.verify().unwrap();
        assert_eq!((check.order, check.center_order, check.quotient_rank), (32, 2, 4));
        // 2^(1+4) of plus type has 19 involutions, minus type 11.
        let minus = ExtraspecialGroup::new(2, 2, field_make(3, 1).unwrap(), ExtraspecialKind::Minus).unwrap();
        assert_eq!((check.involutions, minus.verify().unwrap().involutions), (19, 11));
    }

    #[test]
    fn unsupported_inputs() {
        let f5 = field_make(5, 1).unwrap();
        assert!(ExtraspecialGroup::new(3, 1, f5.clone(), ExtraspecialKind::Plus).is_err());
        assert!(ExtraspecialGroup::new(5, 1, f5.clone(), ExtraspecialKind::Plus).is_err());
        assert!(ExtraspecialGroup::new(3, 1, field_make(7, 1).unwrap(), ExtraspecialKind::Minus).is_err());
        assert!(ExtraspecialGroup::new(2, 1, field_make(2, 2).unwrap(), ExtraspecialKind::Plus).is_err());
    }

    #[test]
    fn normalizer_of_q8_is_gl23() {
        let n = extraspecial_normalizer(2, 1, field_make(3, 1).unwrap(), ExtraspecialKind::Minus).unwrap();
        assert_eq!(n.classical().name(), "O-(2,2)");
        assert_eq!(n.group().order().unwrap(), BigUint::from(48u32));
        assert_eq!(n.quotient_order().unwrap(), BigUint::from(6u32));
        // Oracle: the normalizer of F inside GL(2,3), by enumeration.
        let gl = MatrixGroup::general_linear(3, 1, 2).unwrap();
        let glp = gl.perm_image(VectorDomain::NonzeroVectors).unwrap();
        let fp = n.extraspecial().central_product().perm_image(VectorDomain::NonzeroVectors).unwrap();
        let norm = glp.normalizer_by_enumeration(&fp, 1 << 20).unwrap();
        assert_eq!(norm.order_u64(), Some(48));
    }

    #[test]
    fn normalizer_of_d8_over_gf3() {
        let n = extraspecial_normalizer(2, 1, field_make(3, 1).unwrap(), ExtraspecialKind::Plus).unwrap();
        assert_eq!(n.classical().name(), "O+(2,2)");
        assert_eq!(n.quotient_order().unwrap(), BigUint::from(2u32));
        assert_eq!(n.group().order().unwrap(), BigUint::from(16u32));
    }

    #[test]
    fn normalizer_quotients() {
        let cases = [
            (3u32, 1usize, (7u64, 1u32), ExtraspecialKind::Plus, "Sp(2,3)", 24u64),
            (2, 2, (5, 1), ExtraspecialKind::Plus, "Sp(4,2)", 720),
            (2, 1, (5, 1), ExtraspecialKind::Plus, "Sp(2,2)", 6),
            (2, 1, (9, 1), ExtraspecialKind::Plus, "Sp(2,2)", 6),
            (2, 2, (3, 1), ExtraspecialKind::Plus, "O+(4,2)", 72),
            (2, 2, (3, 1), ExtraspecialKind::Minus, "O-(4,2)", 120),
        ];
        for (r, k, (p, a), kind, name, order) in cases {
            let (p, a) = if p == 9 { (3, 2) } else { (p, a) };
            let n = extraspecial_normalizer(r, k, field_make(p, a).unwrap(), kind).unwrap();
            assert_eq!(n.classical().name(), name);
            assert_eq!(n.quotient_order().unwrap(), BigUint::from(order), "{name}");
        }
    }

    #[test]
    fn quotient_map_is_a_homomorphism() {
        let n = extraspecial_normalizer(3, 2, field_make(7, 1).unwrap(), ExtraspecialKind::Plus).unwrap();
        let lifts = n.lifts();
        let s = n.classical().perm();
        for (i, a) in lifts.iter().enumerate() {
            let b = &lifts[(i + 1) % lifts.len()];
            let ab = n.quotient_perm(&(a * b)).unwrap();
            let expected = n.quotient_perm(a).unwrap().then(&n.quotient_perm(b).unwrap());
            assert_eq!(ab, expected);
            assert!(s.contains(&ab).unwrap());
        }
        assert_eq!(n.quotient_group(lifts).unwrap().order(), s.order());
        let not_normalizing = FqMatrix::diagonal(field_make(7, 1).unwrap(), &[1, 1, 1, 1, 1, 1, 1, 1, 2]);
        assert!(n.quotient_image(&not_normalizing).is_err());
    }
}
