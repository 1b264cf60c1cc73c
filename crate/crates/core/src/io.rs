//! JSON forms of permutation groups, matrix groups and tuple colorings.
//!
//! Group orders are written as decimal strings since they overflow `u64`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linear::{field_make, FqMatrix, MatrixGroup};
use crate::perm::{PermGroup, Permutation};

/// A generator given either by its image list or in cycle notation,
/// e.g. `"(0 1 2)(3 4)"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PermJson {
    Images(Vec<usize>),
    Cycles(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupJson {
    pub degree: usize,
    pub generators: Vec<PermJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<String>,
}

/// Parses `"(0 1 2)(3,4)"`; commas and spaces both separate points.
pub fn parse_cycles(degree: usize, text: &str) -> Result<Permutation> {
    let text = text.trim();
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    let mut rest = text;
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('(')
            .and_then(|r| r.split_once(')'))
            .ok_or_else(|| Error::Parse(format!("bad cycle notation {text:?}")))?;
        let cycle = body
            .0
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<usize>().map_err(|e| Error::Parse(format!("{s:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        if !cycle.is_empty() {
            cycles.push(cycle);
        }
        rest = body.1.trim_start();
    }
    let refs: Vec<&[usize]> = cycles.iter().map(Vec::as_slice).collect();
    Permutation::from_cycles(degree, &refs)
}

impl GroupJson {
    pub fn from_group(group: &PermGroup, name: Option<&str>) -> Self {
        GroupJson {
            degree: group.degree(),
            generators: group.generators().iter().map(|g| PermJson::Images(g.images())).collect(),
            name: name.map(str::to_string),
            order: Some(group.order().to_string()),
        }
    }

    /// Builds the group; a stated order must match the computed one.
    pub fn to_group(&self) -> Result<PermGroup> {
        let gens = self
            .generators
            .iter()
            .map(|g| match g {
                PermJson::Images(v) => {
                    if v.len() != self.degree {
                        return Err(Error::DegreeMismatch { expected: self.degree, got: v.len() });
                    }
                    Permutation::from_images(v.clone())
                }
                PermJson::Cycles(s) => parse_cycles(self.degree, s),
            })
            .collect::<Result<Vec<_>>>()?;
        let group = PermGroup::new(self.degree, gens)?;
        if let Some(stated) = &self.order {
            if *stated != group.order().to_string() {
                return Err(Error::Verification(format!(
                    "stated order {stated}, computed {}",
                    group.order()
                )));
            }
        }
        Ok(group)
    }
}

/// A field element: its integer code or its coefficient vector
/// `[c_0, c_1, ...]` over the prime field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementJson {
    Code(u32),
    Coefficients(Vec<u32>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixGroupJson {
    pub p: u64,
    #[serde(default = "one")]
    pub k: u32,
    /// Coefficients `c_0 .. c_{k-1}` of the monic modulus
    /// `x^k + Σ c_i x^i`; must match the built-in choice when given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
    pub d: usize,
    /// Each generator is a list of rows.
    pub generators: Vec<Vec<Vec<ElementJson>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<String>,
}

fn one() -> u32 {
    1
}

impl MatrixGroupJson {
    pub fn from_group(group: &MatrixGroup, name: Option<&str>, order: Option<String>) -> Self {
        let f = group.field();
        let k = f.degree();
        let element = |a: u32| {
            if k == 1 {
                ElementJson::Code(a)
            } else {
                ElementJson::Coefficients(f.coefficients(a))
            }
        };
        MatrixGroupJson {
            p: f.characteristic() as u64,
            k,
            modulus: (k > 1).then(|| f.modulus().to_vec()),
            d: group.dim(),
            generators: group
                .generators()
                .iter()
                .map(|g| g.rows().into_iter().map(|row| row.into_iter().map(element).collect()).collect())
                .collect(),
            name: name.map(str::to_string),
            order,
        }
    }

    pub fn to_group(&self) -> Result<MatrixGroup> {
        let field = field_make(self.p, self.k)?;
        if let Some(m) = &self.modulus {
            if m.as_slice() != field.modulus() {
                return Err(Error::InvalidArgument(format!(
                    "modulus {m:?} differs from the built-in {:?}",
                    field.modulus()
                )));
            }
        }
        let gens = self
            .generators
            .iter()
            .map(|rows| {
                if rows.len() != self.d || rows.iter().any(|r| r.len() != self.d) {
                    return Err(Error::InvalidArgument(format!("generator is not {0}x{0}", self.d)));
                }
                let rows = rows
                    .iter()
                    .map(|r| {
                        r.iter()
                            .map(|e| match e {
                                ElementJson::Code(c) if *c < field.order() => Ok(*c),
                                ElementJson::Code(c) => Err(Error::Parse(format!("{c} is not in the field"))),
                                ElementJson::Coefficients(cs) => field.from_coefficients(cs),
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                FqMatrix::from_rows(field.clone(), &rows)
            })
            .collect::<Result<Vec<_>>>()?;
        let group = MatrixGroup::new(field, self.d, gens)?;
        Ok(match &self.name {
            Some(n) => group.with_note(n.clone()),
            None => group,
        })
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn read_group(path: &Path) -> Result<PermGroup> {
    read_json::<GroupJson>(path)?.to_group()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::MatrixGroup;

    #[test]
    fn cycles_parse() {
        let g = parse_cycles(5, "(0 1 2)(3,4)").unwrap();
        assert_eq!(g.images(), vec![1, 2, 0, 4, 3]);
        assert!(parse_cycles(3, "()").unwrap().is_identity());
        assert!(parse_cycles(3, "").unwrap().is_identity());
        assert!(parse_cycles(3, "(0 1").is_err());
        assert!(parse_cycles(3, "(0 5)").is_err());
    }

    #[test]
    fn group_round_trip() {
        let g = PermGroup::dihedral(7);
        let json = serde_json::to_string(&GroupJson::from_group(&g, Some("D7"))).unwrap();
        let back: GroupJson = serde_json::from_str(&json).unwrap();
        assert!(back.to_group().unwrap().same_group(&g));
        assert_eq!(back.order.as_deref(), Some("14"));
    }

    #[test]
    fn mixed_generators_and_bad_order() {
        let text = r#"{"degree": 4, "generators": ["(0 1 2 3)", [1, 0, 2, 3]], "order": "24"}"#;
        let g: GroupJson = serde_json::from_str(text).unwrap();
        assert_eq!(g.to_group().unwrap().order_u64(), Some(24));
        let bad: GroupJson = serde_json::from_str(r#"{"degree": 4, "generators": ["(0 1)"], "order": "3"}"#).unwrap();
        assert!(matches!(bad.to_group(), Err(Error::Verification(_))));
    }

    #[test]
    fn matrix_group_round_trip() {
        for (p, k, d) in [(3, 1, 2), (2, 2, 2), (3, 2, 1)] {
            let g = MatrixGroup::general_linear(p, k, d).unwrap();
            let json = MatrixGroupJson::from_group(&g, Some("GL"), None);
            let text = serde_json::to_string(&json).unwrap();
            let back: MatrixGroupJson = serde_json::from_str(&text).unwrap();
            assert_eq!(back, json);
            let h = back.to_group().unwrap();
            assert_eq!(h.generators(), g.generators());
        }
    }

    #[test]
    fn packed_codes_accepted() {
        let text = r#"{"p": 2, "k": 2, "d": 1, "generators": [[[2]]]}"#;
        let g: MatrixGroupJson = serde_json::from_str(text).unwrap();
        assert_eq!(g.to_group().unwrap().order().unwrap(), 3u32.into());
        let wrong = r#"{"p": 2, "k": 2, "modulus": [0, 0], "d": 1, "generators": [[[2]]]}"#;
        assert!(serde_json::from_str::<MatrixGroupJson>(wrong).unwrap().to_group().is_err());
    }
}
