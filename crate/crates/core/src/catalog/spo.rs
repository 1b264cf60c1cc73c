//! Maximal solvable subgroups `M` of the classical groups `S = N/F`.
//!
//! Sylow normalizers are computed directly. The other subgroups come from
//! `data/spo_subgroups.json`: words in the generators of
//! [`ClassicalGroup`], found by [`spo_search`] and re-verified on load.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linear::{ClassicalGroup, ClassicalKind};
use crate::perm::{PermGroup, Permutation, DEFAULT_ENUMERATION_LIMIT};

const BUNDLED: &str = include_str!("../../data/spo_subgroups.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SolvableSource {
    /// `S` is solvable and `M = S`.
    Whole,
    SylowNormalizer { prime: u64 },
    Bundled,
}

#[derive(Clone, Debug)]
pub struct SolvableSubgroup {
    pub order: u64,
    pub structure: String,
    pub source: SolvableSource,
    /// Acting on the nonzero vectors of the natural module of `S`.
    pub group: PermGroup,
}

/// Order and abelianness of the largest normal `prime`-subgroup.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoreInvariant {
    pub prime: u64,
    pub order: u64,
    pub abelian: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundledGroup {
    pub order: u64,
    pub structure: String,
    pub core: CoreInvariant,
    /// Words over `a, b, c, ...`; an upper-case letter is an inverse.
    pub words: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundledEntry {
    pub generator_count: usize,
    pub subgroups: Vec<BundledGroup>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpoData {
    pub groups: BTreeMap<String, BundledEntry>,
}

pub fn bundled_data() -> Result<SpoData> {
    serde_json::from_str(BUNDLED).map_err(|e| Error::Parse(format!("spo_subgroups.json: {e}")))
}

enum Recipe {
    Whole,
    Sylow(u64),
    Bundled,
}

fn recipes(name: &str) -> Option<Vec<(u64, &'static str, Recipe)>> {
    use Recipe::*;
    let rows = match name {
        "Sp(2,2)" => vec![(6, "S3", Whole)],
        "O+(2,2)" => vec![(2, "2", Whole)],
        "O-(2,2)" => vec![(6, "S3", Whole)],
        "Sp(2,3)" => vec![(24, "SL(2,3)", Whole)],
        "Sp(4,2)" => vec![(20, "5:4", Sylow(5)), (72, "S3 wr S2", Sylow(3))],
        "O+(4,2)" => vec![(72, "S3 wr S2", Whole)],
        "O-(4,2)" => vec![(12, "S3 x S2", Sylow(3)), (20, "5:4", Sylow(5))],
        "Sp(4,3)" => vec![
            (40, "D20.2", Sylow(5)),
            (192, "2^(1+4):S3", Bundled),
            (320, "2^(1+4):D10", Bundled),
            (1152, "Sp(2,3) wr S2", Bundled),
        ],
        "O+(6,2)" => vec![
            (42, "7:6", Sylow(7)),
            (120, "(5:4) x S3", Sylow(5)),
            (144, "(S3 wr S2) x S2", Sylow(3)),
        ],
        "O-(6,2)" => vec![
            (40, "(5:4) x S2", Sylow(5)),
            (1296, "3^(1+2):(2.S4)", Bundled),
            (1296, "3^3:(S4 x S2)", Bundled),
        ],
        "Sp(6,2)" => vec![
            (42, "7:6", Sylow(7)),
            (120, "(5:4) x S3", Sylow(5)),
            (1296, "3^(1+2):(2.S4)", Bundled),
            (1296, "3^3:(S4 x S2)", Bundled),
        ],
        _ => return None,
    };
    Some(rows)
}

/// Product of generators along `word`.
pub fn evaluate_word(gens: &[Permutation], word: &str) -> Result<Permutation> {
    let degree = gens.first().map_or(0, Permutation::degree);
    let mut acc = Permutation::identity(degree);
    for ch in word.chars() {
        let idx = (ch.to_ascii_lowercase() as u32).wrapping_sub('a' as u32) as usize;
        let g = gens
            .get(idx)
            .filter(|_| ch.is_ascii_alphabetic())
            .ok_or_else(|| Error::Parse(format!("letter {ch:?} does not name a generator")))?;
        acc = if ch.is_ascii_uppercase() { acc.then(&g.inverse()) } else { acc.then(g) };
    }
    Ok(acc)
}

fn radical_prime(s: &ClassicalGroup) -> u64 {
    s.prime() as u64
}

/// Largest allowed order of the radical: trivial for symplectic `S`, at most
/// 2 for orthogonal `S`.
fn radical_bound(s: &ClassicalGroup) -> u64 {
    if s.kind() == ClassicalKind::Symplectic {
        1
    } else {
        2
    }
}

fn core_invariant(g: &PermGroup, prime: u64) -> Result<CoreInvariant> {
    let core = g.r_radical(prime, DEFAULT_ENUMERATION_LIMIT)?;
    let gens = core.generators();
    let abelian = gens.iter().enumerate().all(|(i, x)| gens[i + 1..].iter().all(|y| x.then(y) == y.then(x)));
    Ok(CoreInvariant {
        prime,
        order: core.order_u64().unwrap_or(u64::MAX),
        abelian,
    })
}

fn check_subgroup(
    s: &ClassicalGroup,
    g: &PermGroup,
    order: u64,
    core: Option<&CoreInvariant>,
) -> Result<()> {
    let label = format!("{} subgroup of order {order}", s.name());
    if g.order_u64() != Some(order) {
        return Err(Error::Verification(format!("{label} has order {}", g.order())));
    }
    if !g.is_subgroup_of(s.perm()) {
        return Err(Error::Verification(format!("{label} is not contained in S")));
    }
    if !g.is_solvable()? {
        return Err(Error::Verification(format!("{label} is not solvable")));
    }
    let radical = core_invariant(g, radical_prime(s))?;
    if radical.order > radical_bound(s) {
        return Err(Error::Verification(format!(
            "{label} has a normal {}-subgroup of order {}",
            radical.prime, radical.order
        )));
    }
    if let Some(expected) = core {
        let found = core_invariant(g, expected.prime)?;
        if found != *expected {
            return Err(Error::Verification(format!("{label}: core {found:?}, expected {expected:?}")));
        }
    }
    Ok(())
}

type Cache = Mutex<HashMap<String, Vec<SolvableSubgroup>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Maximal solvable subgroups of `S` with the radical condition, one per
/// table entry, each verified for order, solvability and radical size.
pub fn max_solvable_in_s(s_name: &str) -> Result<Vec<SolvableSubgroup>> {
    let s = ClassicalGroup::from_name(s_name)?;
    let name = s.name();
    if let Some(hit) = cache().lock().unwrap().get(&name) {
        return Ok(hit.clone());
    }
    let rows = recipes(&name).ok_or_else(|| Error::InvalidArgument(format!("no table entry for {name}")))?;
    let data = bundled_data()?;
    let mut bundled = data.groups.get(&name).map(|e| e.subgroups.iter()).into_iter().flatten();
    if let Some(entry) = data.groups.get(&name) {
        if entry.generator_count != s.perm().generators().len() {
            return Err(Error::Verification(format!(
                "bundled words for {name} expect {} generators, found {}",
                entry.generator_count,
                s.perm().generators().len()
            )));
        }
    }
    let mut out = Vec::with_capacity(rows.len());
    for (order, structure, recipe) in rows {
        let (group, source, core) = match recipe {
            Recipe::Whole => (s.perm().clone(), SolvableSource::Whole, None),
            Recipe::Sylow(prime) => {
                let (_, n) = s.perm().sylow_and_normalizer(prime, DEFAULT_ENUMERATION_LIMIT)?;
                (n, SolvableSource::SylowNormalizer { prime }, None)
            }
            Recipe::Bundled => {
                let entry = bundled
                    .next()
                    .filter(|b| b.order == order && b.structure == structure)
                    .ok_or_else(|| Error::Verification(format!("missing bundled {structure} in {name}")))?;
                let gens = entry
                    .words
                    .iter()
                    .map(|w| evaluate_word(s.perm().generators(), w))
                    .collect::<Result<Vec<_>>>()?;
                (PermGroup::new(s.perm().degree(), gens)?, SolvableSource::Bundled, Some(entry.core))
            }
        };
        check_subgroup(&s, &group, order, core.as_ref())?;
        out.push(SolvableSubgroup {
            order,
            structure: structure.to_string(),
            source,
            group,
        });
    }
    cache().lock().unwrap().insert(name, out.clone());
    Ok(out)
}

/// Loads and checks every bundled subgroup; returns `(S, order, structure)`.
pub fn verify_bundled() -> Result<Vec<(String, u64, String)>> {
    let data = bundled_data()?;
    let mut out = Vec::new();
    for name in data.groups.keys() {
        for m in max_solvable_in_s(name)? {
            if m.source == SolvableSource::Bundled {
                out.push((name.clone(), m.order, m.structure));
            }
        }
    }
    Ok(out)
}

/// What [`spo_search`] looks for.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchTarget {
    pub order: u64,
    pub core: Option<CoreInvariant>,
}

/// Length varies in `len..=2 len` so that words of both parities occur.
fn random_word(rng: &mut ChaCha8Rng, letters: usize, len: usize) -> String {
    let len = rng.gen_range(len..=2 * len);
    (0..len)
        .map(|_| {
            let c = (b'a' + rng.gen_range(0..letters) as u8) as char;
            if rng.gen_bool(0.5) {
                c.to_ascii_uppercase()
            } else {
                c
            }
        })
        .collect()
}

/// Random pairs of words until they generate a subgroup of `S` of the target
/// order that is solvable, meets the radical bound and has the requested
/// core. Returns the two words, or `None` after `tries` attempts.
pub fn spo_search(
    s: &ClassicalGroup,
    target: &SearchTarget,
    seed: u64,
    tries: usize,
    word_len: usize,
) -> Result<Option<Vec<String>>> {
    let gens = s.perm().generators();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let divides = |x: &Permutation| {
        let o = x.order();
        (num_bigint::BigUint::from(target.order) % o) == num_bigint::BigUint::from(0u32)
    };
    for _ in 0..tries {
        let words = [random_word(&mut rng, gens.len(), word_len), random_word(&mut rng, gens.len(), word_len)];
        let x = evaluate_word(gens, &words[0])?;
        let y = evaluate_word(gens, &words[1])?;
        if !divides(&x) || !divides(&y) {
            continue;
        }
        let g = PermGroup::new(s.perm().degree(), vec![x, y])?;
        if g.order_u64() != Some(target.order) {
            continue;
        }
        if check_subgroup(s, &g, target.order, target.core.as_ref()).is_ok() {
            return Ok(Some(words.to_vec()));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words_evaluate_left_to_right() {
        let a = Permutation::from_images(vec![1, 2, 0]).unwrap();
        let b = Permutation::from_images(vec![1, 0, 2]).unwrap();
        let gens = [a.clone(), b.clone()];
        assert_eq!(evaluate_word(&gens, "ab").unwrap(), a.then(&b));
        assert!(evaluate_word(&gens, "aA").unwrap().is_identity());
        assert!(evaluate_word(&gens, "").unwrap().is_identity());
        assert!(evaluate_word(&gens, "c").is_err());
        assert!(evaluate_word(&gens, "a1").is_err());
    }

    #[test]
    fn small_rows() {
        for (name, orders) in [
            ("Sp(2,2)", vec![6]),
            ("O+(2,2)", vec![2]),
            ("O-(2,2)", vec![6]),
            ("Sp(2,3)", vec![24]),
            ("Sp(4,2)", vec![20, 72]),
            ("O+(4,2)", vec![72]),
            ("O-(4,2)", vec![12, 20]),
        ] {
            let found: Vec<u64> = max_solvable_in_s(name).unwrap().iter().map(|m| m.order).collect();
            assert_eq!(found, orders, "{name}");
        }
        assert!(max_solvable_in_s("Sp(8,2)").is_err());
    }

    #[test]
    fn bundled_rows() {
        let loaded = verify_bundled().unwrap();
        assert_eq!(loaded.len(), 7);
        for (name, orders) in [
            ("Sp(4,3)", vec![40, 192, 320, 1152]),
            ("O+(6,2)", vec![42, 120, 144]),
            ("O-(6,2)", vec![40, 1296, 1296]),
            ("Sp(6,2)", vec![42, 120, 1296, 1296]),
        ] {
            let found: Vec<u64> = max_solvable_in_s(name).unwrap().iter().map(|m| m.order).collect();
            assert_eq!(found, orders, "{name}");
        }
    }

    #[test]
    fn search_finds_small_targets() {
        let s = ClassicalGroup::from_name("Sp(4,2)").unwrap();
        let target = SearchTarget { order: 72, core: Some(CoreInvariant { prime: 3, order: 9, abelian: true }) };
        let words = spo_search(&s, &target, 1, 20_000, 12).unwrap().expect("a 3^2:D8 subgroup");
        let gens: Vec<_> = words.iter().map(|w| evaluate_word(s.perm().generators(), w).unwrap()).collect();
        assert_eq!(PermGroup::new(15, gens).unwrap().order_u64(), Some(72));
    }
}
