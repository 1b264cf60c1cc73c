use num_bigint::BigUint;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::spo::{max_solvable_in_s, SolvableSubgroup};
use super::{candidate_order, table1_groups, validate_parameters, Derived, Parameters};
use crate::error::{Error, Result};
use crate::linear::{
    blowup, field_make, frobenius_blowup, vector_index, ExtraspecialGroup, ExtraspecialKind,
    ExtraspecialNormalizer, FqMatrix, MatrixGroup, VectorDomain, DEFAULT_VECTOR_BUDGET,
};
use crate::perm::{PermGroup, Permutation};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct CatalogConfig {
    /// Largest `|L|` for which `N_L(H_1)` is found by enumeration.
    pub enumeration_limit: u64,
    /// Random elements of `L` tried when enumeration is too expensive.
    pub random_tries: usize,
    pub seed: u64,
    /// Largest `p^d` for which candidates are built.
    pub vector_budget: u64,
}

impl Default for CatalogConfig {
    fn default() -> Self {
        CatalogConfig {
            enumeration_limit: 2_000_000,
            random_tries: 2_000,
            seed: 0,
            vector_budget: DEFAULT_VECTOR_BUDGET,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CandidateGroup {
    pub name: String,
    pub parameters: Parameters,
    /// The classical group `S ≅ N/F`.
    pub classical: String,
    pub extraspecial: ExtraspecialKind,
    pub m_order: u64,
    pub m_structure: String,
    /// `a'` in `|H| = (p^a - 1) e^2 |M| a'`.
    pub a_div: u32,
    pub order: BigUint,
    /// `H ≤ GL(d, p)`.
    pub group: MatrixGroup,
    pub caveats: Vec<String>,
}

#[derive(Clone, Debug)]
pub enum Candidate {
    Built(Box<CandidateGroup>),
    Skipped { name: String, reason: String },
}

impl Candidate {
    pub fn name(&self) -> &str {
        match self {
            Candidate::Built(c) => &c.name,
            Candidate::Skipped { name, .. } => name,
        }
    }

    fn sort_key(&self) -> (String, BigUint) {
        match self {
            Candidate::Built(c) => (c.name.clone(), c.order.clone()),
            Candidate::Skipped { name, .. } => (name.clone(), BigUint::zero()),
        }
    }
}

/// Candidate maximal solvable primitive subgroups of `GL(d, p)` with the
/// given parameters, one for each extraspecial type and each maximal
/// solvable `M ≤ N/F`.
///
/// Everything is built in `GL(e, p^a)` and written over `GF(p)`; `ψ` is the
/// Frobenius map of `GF(p^a)` acting blockwise.
pub fn assemble_candidates(params: &Parameters, cfg: &CatalogConfig) -> Result<Vec<Candidate>> {
    let violations = validate_parameters(params, false);
    if !violations.is_empty() {
        let list: Vec<String> = violations.iter().map(ToString::to_string).collect();
        return Err(Error::Precondition(list.join("; ")));
    }
    let derived = params.derived()?;
    if table1_groups(params.e).is_empty() {
        return Err(Error::InvalidArgument(format!("no classical groups listed for e = {}", params.e)));
    }
    let field = field_make(params.p, params.a)?;
    let kinds: &[ExtraspecialKind] = if params.a.is_multiple_of(derived.b) {
        &[ExtraspecialKind::Plus]
    } else {
        &[ExtraspecialKind::Plus, ExtraspecialKind::Minus]
    };
    let mut jobs: Vec<(std::sync::Arc<ExtraspecialNormalizer>, SolvableSubgroup)> = Vec::new();
    for &kind in kinds {
        let es = ExtraspecialGroup::new(derived.r, derived.k, field.clone(), kind)?;
        let norm = std::sync::Arc::new(ExtraspecialNormalizer::new(es)?);
        for m in max_solvable_in_s(&norm.classical().name())? {
            jobs.push((norm.clone(), m));
        }
    }
    let mut out = jobs
        .par_iter()
        .map(|(norm, m)| {
            let name = format!("{}:{}", norm.classical().name(), m.structure);
            match build(params, &derived, norm, m, &name, cfg) {
                Ok(c) => Ok(Candidate::Built(Box::new(c))),
                Err(Error::BudgetExceeded { what, size, limit }) => Ok(Candidate::Skipped {
                    name,
                    reason: format!("{what} exceeds budget: {size} > {limit}"),
                }),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    out.sort_by_key(Candidate::sort_key);
    Ok(out)
}

/// Permutation of nonzero vectors back to the matrix it came from.
fn matrix_of_perm(group: &MatrixGroup, g: &Permutation) -> Result<FqMatrix> {
    let p = group.field().order();
    let d = group.dim();
    let images: Vec<usize> = (0..d)
        .map(|j| {
            let mut e = vec![0u32; d];
            e[j] = 1;
            g.image(vector_index(&e, p) - 1) + 1
        })
        .collect();
    group.matrix_from_basis_images(&images)
}

fn normalizes(h: &PermGroup, x: &Permutation) -> bool {
    h.generators().iter().all(|g| h.contains(&g.conjugate_by(x)).unwrap_or(false))
}

fn build(
    params: &Parameters,
    derived: &Derived,
    norm: &ExtraspecialNormalizer,
    m: &SolvableSubgroup,
    name: &str,
    cfg: &CatalogConfig,
) -> Result<CandidateGroup> {
    let total = params.vector_count().unwrap_or(u64::MAX);
    if total > cfg.vector_budget {
        return Err(Error::budget("vector count p^d", total, cfg.vector_budget));
    }
    let es = norm.extraspecial();
    let field = es.field().clone();
    let prime = field_make(params.p, 1)?;
    let (a, e) = (params.a, es.dim());
    let d = params.d as usize;
    let blow = |x: &FqMatrix| blowup(x, &prime);

    let f_gens = es.central_product().generators().to_vec();
    let mut a_gens = f_gens.clone();
    for g in m.group.generators() {
        a_gens.push(norm.lift(g)?);
    }
    let a_blown = a_gens.iter().map(blow).collect::<Result<Vec<_>>>()?;
    let psi = frobenius_blowup(&field, &prime, e);
    let mut caveats = Vec::new();
    let b = derived.b;

    let group = if b == 1 || a % b != 0 {
        let mut gens = a_blown.clone();
        if !psi.is_identity() {
            gens.push(psi.clone());
        }
        MatrixGroup::new(prime.clone(), d, gens)?
    } else {
        // H = N_L(H_1) with H_1 = <A, ψ^b> and L = N(F) extended by ψ.
        let mut h1_gens = a_blown.clone();
        let psi_b = psi.pow(b as u64);
        if !psi_b.is_identity() {
            h1_gens.push(psi_b);
        }
        let h1 = MatrixGroup::new(prime.clone(), d, h1_gens)?;
        let mut l_gens = f_gens.iter().map(blow).collect::<Result<Vec<_>>>()?;
        for x in norm.lifts() {
            l_gens.push(blow(x)?);
        }
        l_gens.push(psi.clone());
        let l = MatrixGroup::new(prime.clone(), d, l_gens)?;
        let lp = l.perm_image_with_budget(VectorDomain::NonzeroVectors, cfg.vector_budget)?;
        let h1p = h1.perm_image_with_budget(VectorDomain::NonzeroVectors, cfg.vector_budget)?;
        let np = match lp.order_u64() {
            Some(n) if n <= cfg.enumeration_limit => lp.normalizer_by_enumeration(&h1p, cfg.enumeration_limit)?,
            _ => {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                let mut np = h1p.clone();
                for _ in 0..cfg.random_tries {
                    let x = lp.random_element(&mut rng);
                    if !np.contains(&x)? && normalizes(&h1p, &x) {
                        np = np.extended(std::slice::from_ref(&x))?;
                    }
                }
                caveats.push("possibly-non-maximal".to_string());
                np
            }
        };
        let mut gens = h1.generators().to_vec();
        for g in np.generators() {
            if !h1p.contains(g)? {
                gens.push(matrix_of_perm(&h1, g)?);
            }
        }
        MatrixGroup::new(prime.clone(), d, gens)?
    };

    let hp = group.perm_image_with_budget(VectorDomain::NonzeroVectors, cfg.vector_budget)?;
    let order = hp.order().clone();
    let fail = |msg: String| Error::Verification(format!("{name} for {params}: {msg}"));
    if !hp.is_solvable()? {
        return Err(fail("not solvable".into()));
    }
    if !group.is_irreducible()? {
        return Err(fail("reducible".into()));
    }

    // U = GF(p^a)^* is cyclic of order p^a - 1, normal in H, central in A.
    let scalar = FqMatrix::scalar(field.clone(), e, field.primitive_element());
    let u = blow(&scalar)?;
    let up = group.vector_permutation(&u, VectorDomain::NonzeroVectors);
    let q_minus_one = BigUint::from(params.p).pow(a) - 1u32;
    let u_group = PermGroup::new(hp.degree(), vec![up.clone()])?;
    if *u_group.order() != q_minus_one {
        return Err(fail(format!("|U| = {}", u_group.order())));
    }
    if !hp.generators().iter().all(|g| normalizes(&u_group, g)) {
        return Err(fail("U is not normal".into()));
    }
    if a_blown.iter().any(|x| (x * &u) != (&u * x)) {
        return Err(fail("U is not central in A".into()));
    }
    let fp = MatrixGroup::new(prime.clone(), d, f_gens.iter().map(blow).collect::<Result<Vec<_>>>()?)?
        .perm_image_with_budget(VectorDomain::NonzeroVectors, cfg.vector_budget)?;
    let e_sq = BigUint::from(params.e * params.e);
    if fp.order() != &(&q_minus_one * &e_sq) {
        return Err(fail(format!("|F| = {}", fp.order())));
    }

    let base = &q_minus_one * &e_sq * BigUint::from(m.order);
    if !(&order % &base).is_zero() {
        return Err(fail(format!("|H| = {order} is not a multiple of {base}")));
    }
    let a_div: u32 = u32::try_from(&order / &base).map_err(|_| fail("a' too large".into()))?;
    if candidate_order(params.p, a, params.e, m.order, a_div)? != order {
        return Err(fail(format!("|H| = {order} does not match the order formula")));
    }

    Ok(CandidateGroup {
        name: name.to_string(),
        parameters: *params,
        classical: norm.classical().name(),
        extraspecial: es.kind(),
        m_order: m.order,
        m_structure: m.structure.clone(),
        a_div,
        order,
        group: group.with_note(name.to_string()),
        caveats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn built(p: u64, d: u32, a: u32, e: u64) -> Vec<CandidateGroup> {
        assemble_candidates(&Parameters::new(p, d, a, e), &CatalogConfig::default())
            .unwrap()
            .into_iter()
            .map(|c| match c {
                Candidate::Built(c) => *c,
                Candidate::Skipped { name, reason } => panic!("{name} skipped: {reason}"),
            })
            .collect()
    }

    #[test]
    fn gl23_case() {
        let cs = built(3, 2, 1, 2);
        let summary: Vec<(String, u64)> = cs.iter().map(|c| (c.name.clone(), u64::try_from(&c.order).unwrap())).collect();
        assert_eq!(summary, vec![("O+(2,2):2".into(), 16), ("O-(2,2):S3".into(), 48)]);
        let gl = MatrixGroup::general_linear(3, 1, 2).unwrap().perm_image(VectorDomain::NonzeroVectors).unwrap();
        let h = cs[1].group.perm_image(VectorDomain::NonzeroVectors).unwrap();
        assert!(h.same_group(&gl));
    }

    #[test]
    fn gf5_and_gf7_cases() {
        let cs = built(5, 2, 1, 2);
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].order, BigUint::from(96u32));
        let orders: Vec<BigUint> = built(7, 2, 1, 2).into_iter().map(|c| c.order).collect();
        assert!(orders.contains(&BigUint::from(144u32)));
    }

    #[test]
    fn extension_field_with_normalizer_step() {
        // b = 2 divides a = 2: H = N_L(H_1).
        for c in built(3, 4, 2, 2) {
            let formula = candidate_order(3, 2, 2, c.m_order, c.a_div).unwrap();
            assert_eq!(c.order, formula);
            assert!(c.a_div == 1 || c.a_div == 2);
            assert!(c.caveats.is_empty());
        }
    }

    #[test]
    fn field_extension_without_normalizer_step() {
        // b = 1, a = 2: Frobenius of GF(25) adjoined.
        let cs = built(5, 4, 2, 2);
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].order, BigUint::from(24u32 * 4 * 6 * 2));
    }

    #[test]
    fn budget_skips() {
        let cfg = CatalogConfig { vector_budget: 100, ..CatalogConfig::default() };
        let out = assemble_candidates(&Parameters::new(5, 4, 1, 4), &cfg).unwrap();
        assert_eq!(out.len(), 2);
        assert!(out.iter().all(|c| matches!(c, Candidate::Skipped { .. })));
        assert!(assemble_candidates(&Parameters::new(5, 3, 1, 3), &cfg).is_err());
    }
}
