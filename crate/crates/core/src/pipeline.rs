//! Classifying candidate linear groups `H ≤ GL(d, p)` by how the 3-closure
//! of the affine group `V:H` is settled.
//!
//! Each candidate, acting on the nonzero vectors, is tried in order for
//!
//! * `A`: a regular orbit;
//! * `B`: an orbit on which `H` acts faithfully and 2-closed;
//! * `transitive`: a single orbit on nonzero vectors.
//!
//! Anything else is reported as `unresolved`.

use std::path::PathBuf;
use std::time::Instant;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{assemble_candidates, validate_parameters, Candidate, CatalogConfig, Parameters};
use crate::closure::{m_closure_with, partly_regular_point, two_closure_with, ClosureBudget, PointSearch};
use crate::error::{Error, Result};
use crate::io::{read_json, MatrixGroupJson};
use crate::linear::{affine_group, prime_power, vector_from_index, MatrixGroup, VectorDomain, DEFAULT_VECTOR_BUDGET};
use crate::perm::PermGroup;

/// `p^d` for which the affine group `V:H` can be 2-transitive without being
/// 3-closed.
pub const HUPPERT_EXCEPTIONS: [u64; 6] = [9, 25, 49, 121, 529, 81];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlphaStrategy {
    /// Exhaustive when the domain has at most 2^16 points, else random.
    #[default]
    Auto,
    Exhaustive,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct AlphaSearch {
    pub strategy: AlphaStrategy,
    /// Random points tried for `A`, and orbits tried for `B`.
    pub max_samples: usize,
    pub seed: u64,
}

impl Default for AlphaSearch {
    fn default() -> Self {
        AlphaSearch {
            strategy: AlphaStrategy::Auto,
            max_samples: 256,
            seed: 0,
        }
    }
}

impl AlphaSearch {
    fn point_search(&self, domain: usize, salt: u64) -> PointSearch {
        let random = PointSearch::Random {
            max_samples: self.max_samples,
            seed: self.seed ^ salt,
        };
        match self.strategy {
            AlphaStrategy::Exhaustive => PointSearch::Exhaustive,
            AlphaStrategy::Random => random,
            AlphaStrategy::Auto if domain <= crate::closure::EXHAUSTIVE_DOMAIN_LIMIT => PointSearch::Exhaustive,
            AlphaStrategy::Auto => random,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Budgets {
    /// Largest `p^d`.
    pub domain_size: u64,
    pub backtrack_degree: usize,
    pub enumeration_limit: u64,
    /// Largest `p^d` for which the 3-closure of `V:H` is computed directly.
    pub spot_check_vectors: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            domain_size: DEFAULT_VECTOR_BUDGET,
            backtrack_degree: 4096,
            enumeration_limit: CatalogConfig::default().enumeration_limit,
            spot_check_vectors: 9,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CandidateSource {
    /// Built by [`assemble_candidates`].
    #[default]
    Constructed,
    /// A JSON list of matrix groups over `GF(p)`.
    File(PathBuf),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub parameters: Parameters,
    #[serde(default)]
    pub alpha_search: AlphaSearch,
    #[serde(default)]
    pub budgets: Budgets,
    #[serde(default)]
    pub candidates: CandidateSource,
}

impl PipelineConfig {
    pub fn new(parameters: Parameters) -> Self {
        PipelineConfig {
            parameters,
            alpha_search: AlphaSearch::default(),
            budgets: Budgets::default(),
            candidates: CandidateSource::Constructed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.alpha_search.max_samples == 0 {
            return Err(Error::InvalidArgument("max_samples must be at least 1".into()));
        }
        let violations = validate_parameters(&self.parameters, false);
        if !violations.is_empty() {
            let list: Vec<String> = violations.iter().map(ToString::to_string).collect();
            return Err(Error::InvalidArgument(list.join("; ")));
        }
        let domain = self.parameters.vector_count().unwrap_or(u64::MAX);
        if self.alpha_search.strategy == AlphaStrategy::Exhaustive
            && domain - 1 > crate::closure::EXHAUSTIVE_DOMAIN_LIMIT as u64
        {
            return Err(Error::InvalidArgument(format!(
                "exhaustive search over {} nonzero vectors exceeds 2^16",
                domain - 1
            )));
        }
        Ok(())
    }

    fn closure_budget(&self) -> ClosureBudget {
        ClosureBudget {
            backtrack_degree: self.budgets.backtrack_degree,
            ..ClosureBudget::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Classification {
    A,
    B,
    #[serde(rename = "transitive")]
    Transitive,
    #[serde(rename = "unresolved")]
    Unresolved,
    #[serde(rename = "skipped")]
    Skipped,
    #[serde(rename = "error")]
    Error,
}

impl Classification {
    pub fn label(self) -> &'static str {
        match self {
            Classification::A => "A",
            Classification::B => "B",
            Classification::Transitive => "transitive",
            Classification::Unresolved => "unresolved",
            Classification::Skipped => "skipped",
            Classification::Error => "error",
        }
    }
}

/// Evidence for a classification. Orders are decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    RegularOrbit {
        orbit_length: u64,
    },
    TwoClosedConstituent {
        orbit_length: usize,
        restriction_order: String,
        closure_order: String,
    },
    Transitive {
        orbit_count: usize,
    },
    Unresolved {
        orbit_count: usize,
        orbits_tried: usize,
        budget_failures: usize,
    },
}

/// Direct computation of `(V:H)^(3)` on small spaces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpotCheck {
    pub affine_order: String,
    pub closure_order: String,
    pub three_closed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateReport {
    pub name: String,
    pub order: String,
    pub classification: Classification,
    /// Coordinates of `α`.
    pub witness: Option<Vec<u32>>,
    pub certificate: Option<Certificate>,
    pub caveats: Vec<String>,
    pub ms: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spot_check: Option<SpotCheck>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    #[serde(rename = "A")]
    pub a: usize,
    #[serde(rename = "B")]
    pub b: usize,
    pub transitive: usize,
    pub unresolved: usize,
    #[serde(default)]
    pub skipped: usize,
    #[serde(default)]
    pub errors: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub parameters: Parameters,
    pub candidates: Vec<CandidateReport>,
    pub summary: Summary,
}

impl PipelineReport {
    pub fn has_errors(&self) -> bool {
        self.summary.errors > 0
    }

    /// The report with every timing zeroed, for comparisons.
    pub fn without_timings(&self) -> PipelineReport {
        let mut r = self.clone();
        for c in &mut r.candidates {
            c.ms = 0;
        }
        r
    }
}

/// A point whose orbit under `h` is regular.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularWitness {
    pub point: usize,
    pub orbit_length: u64,
}

pub fn condition_a(h: &PermGroup, search: PointSearch) -> Option<RegularWitness> {
    let domain: Vec<usize> = (0..h.degree()).collect();
    let point = partly_regular_point(h, &domain, search)?;
    Some(RegularWitness {
        point,
        orbit_length: h.order_u64()?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstituentCheck {
    pub holds: bool,
    pub faithful: bool,
    pub orbit_length: usize,
    pub restriction_order: BigUint,
    pub closure_order: Option<BigUint>,
}

/// Whether `h` acts faithfully on the orbit of `alpha` with a 2-closed
/// constituent. The closure is skipped when the action is not faithful.
pub fn condition_b(h: &PermGroup, alpha: usize, budget: &ClosureBudget) -> Result<ConstituentCheck> {
    let orbit = h.orbit(alpha)?;
    let (restricted, faithful) = h.restriction(&orbit)?;
    let mut check = ConstituentCheck {
        holds: false,
        faithful,
        orbit_length: orbit.len(),
        restriction_order: restricted.order().clone(),
        closure_order: None,
    };
    if faithful {
        let closure = two_closure_with(&restricted, budget)?;
        check.holds = closure.is_closed();
        check.closure_order = Some(closure.closed_order);
    }
    Ok(check)
}

pub fn check_transitive_nonzero(h: &PermGroup) -> bool {
    h.is_transitive()
}

/// Whether `q` is one of the exceptional prime powers for 2-transitive
/// affine groups.
pub fn huppert_exceptional(q: u64) -> Result<bool> {
    prime_power(q).ok_or_else(|| Error::InvalidArgument(format!("{q} is not a prime power")))?;
    Ok(HUPPERT_EXCEPTIONS.contains(&q))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub arity: usize,
    pub order: String,
    pub closure_order: String,
    pub input_solvable: bool,
    pub closure_solvable: bool,
}

/// `|G|`, `|G^(m)|` and the solvability of both.
pub fn solvability_verdict(g: &PermGroup, m: usize, budget: &ClosureBudget) -> Result<Verdict> {
    let closure = m_closure_with(g, m, budget)?;
    Ok(Verdict {
        arity: m,
        order: g.order().to_string(),
        closure_order: closure.closed_order.to_string(),
        input_solvable: g.is_solvable()?,
        closure_solvable: closure.closed_group.is_solvable()?,
    })
}

enum Job {
    Group { name: String, group: MatrixGroup, caveats: Vec<String> },
    Skipped { name: String, reason: String },
}

fn load_jobs(cfg: &PipelineConfig) -> Result<Vec<Job>> {
    match &cfg.candidates {
        CandidateSource::Constructed => {
            let catalog = CatalogConfig {
                enumeration_limit: cfg.budgets.enumeration_limit,
                seed: cfg.alpha_search.seed,
                vector_budget: cfg.budgets.domain_size,
                ..CatalogConfig::default()
            };
            Ok(assemble_candidates(&cfg.parameters, &catalog)?
                .into_iter()
                .map(|c| match c {
                    Candidate::Built(c) => Job::Group {
                        name: c.name,
                        group: c.group,
                        caveats: c.caveats,
                    },
                    Candidate::Skipped { name, reason } => Job::Skipped { name, reason },
                })
                .collect())
        }
        CandidateSource::File(path) => {
            let list: Vec<MatrixGroupJson> = read_json(path)?;
            let Parameters { p, d, .. } = cfg.parameters;
            list.into_iter()
                .enumerate()
                .map(|(i, json)| {
                    let name = json.name.clone().unwrap_or_else(|| format!("candidate {i}"));
                    let group = json.to_group()?;
                    if group.field().order() as u64 != p || group.dim() != d as usize {
                        return Err(Error::InvalidArgument(format!("{name} is not in GL({d}, {p})")));
                    }
                    Ok(Job::Group { name, group, caveats: Vec::new() })
                })
                .collect()
        }
    }
}

/// Deterministic per-candidate salt for sampling.
fn salt(name: &str) -> u64 {
    name.bytes()
        .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3))
}

fn classify(cfg: &PipelineConfig, name: &str, group: &MatrixGroup, report: &mut CandidateReport) -> Result<()> {
    let h = group.perm_image_with_budget(VectorDomain::NonzeroVectors, cfg.budgets.domain_size)?;
    report.order = h.order().to_string();
    let p = group.field().order();
    let d = group.dim();
    let coords = |point: usize| vector_from_index(point + 1, p, d);
    let search = cfg.alpha_search.point_search(h.degree(), salt(name));

    let resolved = if let Some(w) = condition_a(&h, search) {
        report.classification = Classification::A;
        report.witness = Some(coords(w.point));
        report.certificate = Some(Certificate::RegularOrbit {
            orbit_length: w.orbit_length,
        });
        true
    } else {
        let orbits = h.orbits();
        let mut tried = 0;
        let mut budget_failures = 0;
        let budget = cfg.closure_budget();
        let mut found = None;
        for alpha in orbit_representatives(&h, &orbits, search, cfg.alpha_search.max_samples) {
            tried += 1;
            match condition_b(&h, alpha, &budget) {
                Ok(check) if check.holds => {
                    found = Some((alpha, check));
                    break;
                }
                Ok(_) => {}
                Err(Error::BudgetExceeded { .. }) => budget_failures += 1,
                Err(e) => return Err(e),
            }
        }
        if budget_failures > 0 {
            report
                .caveats
                .push(format!("{budget_failures} orbit(s) exceeded the closure budget"));
        }
        if let Some((alpha, check)) = found {
            report.classification = Classification::B;
            report.witness = Some(coords(alpha));
            report.certificate = Some(Certificate::TwoClosedConstituent {
                orbit_length: check.orbit_length,
                restriction_order: check.restriction_order.to_string(),
                closure_order: check.closure_order.map(|o| o.to_string()).unwrap_or_default(),
            });
            true
        } else if check_transitive_nonzero(&h) {
            report.classification = Classification::Transitive;
            report.certificate = Some(Certificate::Transitive { orbit_count: 1 });
            let q = group.vector_count().unwrap_or(u64::MAX);
            if HUPPERT_EXCEPTIONS.contains(&q) {
                report.caveats.push(format!("2-transitive affine group on {q} points is in the exceptional list"));
            } else {
                report.caveats.push("2-transitive affine group".to_string());
            }
            false
        } else {
            report.classification = Classification::Unresolved;
            report.certificate = Some(Certificate::Unresolved {
                orbit_count: orbits.len(),
                orbits_tried: tried,
                budget_failures,
            });
            false
        }
    };

    let vectors = group.vector_count().unwrap_or(u64::MAX);
    if resolved && vectors <= cfg.budgets.spot_check_vectors {
        let affine = affine_group(group)?;
        let closure = m_closure_with(&affine, 3, &cfg.closure_budget())?;
        let check = SpotCheck {
            affine_order: affine.order().to_string(),
            closure_order: closure.closed_order.to_string(),
            three_closed: closure.is_closed(),
        };
        if !check.three_closed {
            report.caveats.push("affine group is not 3-closed".to_string());
        }
        report.spot_check = Some(check);
    }
    Ok(())
}

/// One point per orbit, at most `limit` of them, in `search` order.
fn orbit_representatives(h: &PermGroup, orbits: &[Vec<usize>], search: PointSearch, limit: usize) -> Vec<usize> {
    let mut orbit_of = vec![usize::MAX; h.degree()];
    for (i, orbit) in orbits.iter().enumerate() {
        for &x in orbit {
            orbit_of[x] = i;
        }
    }
    let domain: Vec<usize> = (0..h.degree()).collect();
    let mut seen = vec![false; orbits.len()];
    let mut out = Vec::new();
    for x in search.points(&domain) {
        if out.len() == limit {
            break;
        }
        if !std::mem::replace(&mut seen[orbit_of[x]], true) {
            out.push(x);
        }
    }
    out
}

pub fn run_pipeline(cfg: &PipelineConfig) -> Result<PipelineReport> {
    cfg.validate()?;
    let jobs = load_jobs(cfg)?;
    let mut candidates: Vec<CandidateReport> = jobs
        .into_par_iter()
        .map(|job| {
            let start = Instant::now();
            let (name, group, caveats) = match job {
                Job::Skipped { name, reason } => {
                    return CandidateReport {
                        name,
                        order: String::new(),
                        classification: Classification::Skipped,
                        witness: None,
                        certificate: None,
                        caveats: vec![reason],
                        ms: 0,
                        spot_check: None,
                        error: None,
                    }
                }
                Job::Group { name, group, caveats } => (name, group, caveats),
            };
            let mut report = CandidateReport {
                name: name.clone(),
                order: String::new(),
                classification: Classification::Unresolved,
                witness: None,
                certificate: None,
                caveats,
                ms: 0,
                spot_check: None,
                error: None,
            };
            match classify(cfg, &name, &group, &mut report) {
                Ok(()) => {}
                Err(Error::BudgetExceeded { what, size, limit }) if report.order.is_empty() => {
                    report.classification = Classification::Skipped;
                    report.caveats.push(format!("{what} exceeds budget: {size} > {limit}"));
                }
                Err(e) => {
                    report.classification = Classification::Error;
                    report.error = Some(e.to_string());
                }
            }
            report.ms = start.elapsed().as_millis() as u64;
            report
        })
        .collect();
    candidates.sort_by(|x, y| x.name.cmp(&y.name).then_with(|| x.order.cmp(&y.order)));
    let mut summary = Summary::default();
    for c in &candidates {
        match c.classification {
            Classification::A => summary.a += 1,
            Classification::B => summary.b += 1,
            Classification::Transitive => summary.transitive += 1,
            Classification::Unresolved => summary.unresolved += 1,
            Classification::Skipped => summary.skipped += 1,
            Classification::Error => summary.errors += 1,
        }
    }
    Ok(PipelineReport {
        parameters: cfg.parameters,
        candidates,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::{field_make, singer_matrix, FqMatrix};

    fn nonzero(g: &MatrixGroup) -> PermGroup {
        g.perm_image(VectorDomain::NonzeroVectors).unwrap()
    }

    fn singer(p: u64, a: u32) -> MatrixGroup {
        let s = singer_matrix(p, a).unwrap();
        MatrixGroup::new(s.field().clone(), a as usize, vec![s]).unwrap()
    }

    #[test]
    fn condition_a_examples() {
        let c8 = nonzero(&singer(3, 2));
        assert!(condition_a(&c8, PointSearch::Exhaustive).is_some());
        let gl = nonzero(&MatrixGroup::general_linear(3, 1, 2).unwrap());
        assert!(condition_a(&gl, PointSearch::Exhaustive).is_none());
    }

    #[test]
    fn condition_b_examples() {
        let budget = ClosureBudget::default();
        let c8 = nonzero(&singer(3, 2));
        for alpha in 0..8 {
            assert!(condition_b(&c8, alpha, &budget).unwrap().holds);
        }
        let c4 = nonzero(&singer(5, 1));
        assert!(condition_b(&c4, 0, &budget).unwrap().holds);
        // GL(2,3) on 8 points has three orbitals; their automorphism group
        // is 2 wr S4 of order 384.
        let gl = nonzero(&MatrixGroup::general_linear(3, 1, 2).unwrap());
        let check = condition_b(&gl, 0, &budget).unwrap();
        assert!(check.faithful);
        assert!(!check.holds);
    }

    #[test]
    fn transitivity_examples() {
        assert!(check_transitive_nonzero(&nonzero(&MatrixGroup::general_linear(3, 1, 2).unwrap())));
        assert!(check_transitive_nonzero(&nonzero(&singer(3, 2))));
        let f = field_make(5, 1).unwrap();
        let scalars = MatrixGroup::new(f.clone(), 2, vec![FqMatrix::scalar(f, 2, 2)]).unwrap();
        let h = nonzero(&scalars);
        assert!(!check_transitive_nonzero(&h));
        assert!(h.orbits().iter().all(|o| o.len() == 4));
    }

    #[test]
    fn huppert_list() {
        assert!(huppert_exceptional(81).unwrap());
        assert!(huppert_exceptional(25).unwrap());
        assert!(!huppert_exceptional(27).unwrap());
        assert!(huppert_exceptional(12).is_err());
    }

    #[test]
    fn verdicts() {
        let budget = ClosureBudget::default();
        let v = solvability_verdict(&crate::linear::agammal1(2, 3).unwrap(), 3, &budget).unwrap();
        assert_eq!((v.order.as_str(), v.closure_order.as_str()), ("168", "168"));
        assert!(v.closure_solvable);
        let v = solvability_verdict(&PermGroup::alternating(5), 3, &budget).unwrap();
        assert!(!v.input_solvable);
    }

    #[test]
    fn gl23_pipeline() {
        let report = run_pipeline(&PipelineConfig::new(Parameters::new(3, 2, 1, 2))).unwrap();
        assert_eq!(report.summary.unresolved, 0);
        assert_eq!(report.summary.errors, 0);
        let gl = report.candidates.iter().find(|c| c.order == "48").unwrap();
        assert_eq!(gl.classification, Classification::Transitive);
        for c in &report.candidates {
            if let Some(s) = &c.spot_check {
                assert!(s.three_closed, "{}", c.name);
            }
        }
        let again = run_pipeline(&PipelineConfig::new(Parameters::new(3, 2, 1, 2))).unwrap();
        assert_eq!(report.without_timings(), again.without_timings());
    }

    #[test]
    fn config_validation() {
        let mut cfg = PipelineConfig::new(Parameters::new(3, 2, 1, 2));
        cfg.alpha_search.max_samples = 0;
        assert!(cfg.validate().is_err());
        let mut cfg = PipelineConfig::new(Parameters::new(3, 16, 2, 8));
        cfg.alpha_search.strategy = AlphaStrategy::Exhaustive;
        assert!(cfg.validate().is_err());
        let json = r#"{"parameters": {"p": 3, "d": 2, "a": 1, "e": 2}, "candidates": {"file": "x.json"}}"#;
        let cfg: PipelineConfig = serde_json::from_str(json).unwrap();
        assert_eq!(cfg.candidates, CandidateSource::File("x.json".into()));
        assert_eq!(cfg.alpha_search.max_samples, 256);
    }

    #[test]
    fn empty_candidate_file() {
        let dir = std::env::temp_dir().join(format!("pipeline-empty-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("c.json");
        std::fs::write(&path, "[]").unwrap();
        let mut cfg = PipelineConfig::new(Parameters::new(3, 2, 1, 2));
        cfg.candidates = CandidateSource::File(path);
        let report = run_pipeline(&cfg).unwrap();
        assert!(report.candidates.is_empty());
        assert_eq!(report.summary, Summary::default());
    }
}
