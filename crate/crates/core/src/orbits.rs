//! Orbits of a permutation group on `m`-tuples.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{PermGroup, Permutation};

/// Default cap on `n^m`.
pub const DEFAULT_TUPLE_BUDGET: u64 = 1 << 27;

const UNSET: u32 = u32::MAX;

/// The `m`-orbit of every tuple in `Ω^m`, stored densely.
///
/// Tuple `(t_0, .., t_{m-1})` has index `Σ t_i n^(m-1-i)`. Colors are numbered
/// in order of each orbit's least index, so equal partitions give equal arrays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TupleColoring {
    degree: usize,
    arity: usize,
    colors: Vec<u32>,
    representatives: Vec<usize>,
}

/// Classes of equal entries in a tuple, each sorted, ordered by least element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PartitionType(pub Vec<Vec<usize>>);

pub fn tuple_count(n: usize, m: usize) -> Option<u64> {
    (n as u64).checked_pow(m as u32)
}

impl TupleColoring {
    pub fn new(group: &PermGroup, m: usize) -> Result<Self> {
        TupleColoring::with_budget(group, m, DEFAULT_TUPLE_BUDGET)
    }

    pub fn with_budget(group: &PermGroup, m: usize, budget: u64) -> Result<Self> {
        TupleColoring::from_generators(group.degree(), group.generators(), m, budget)
    }

    pub(crate) fn from_generators(
        n: usize,
        gens: &[Permutation],
        m: usize,
        budget: u64,
    ) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("arity must be at least 1".into()));
        }
        let total = tuple_count(n, m).unwrap_or(u64::MAX);
        if total > budget {
            return Err(Error::budget("tuple count n^m", total, budget));
        }
        let total = total as usize;
        let mut colors = vec![UNSET; total];
        let mut representatives = Vec::new();
        let mut queue: Vec<usize> = Vec::new();
        let mut digits = vec![0usize; m];
        for start in 0..total {
            if colors[start] != UNSET {
                continue;
            }
            let c = representatives.len() as u32;
            representatives.push(start);
            colors[start] = c;
            queue.clear();
            queue.push(start);
            while let Some(idx) = queue.pop() {
                decode_into(idx, n, &mut digits);
                for g in gens {
                    let img = digits.iter().fold(0usize, |acc, &t| acc * n + g.image(t));
                    if colors[img] == UNSET {
                        colors[img] = c;
                        queue.push(img);
                    }
                }
            }
        }
        Ok(TupleColoring {
            degree: n,
            arity: m,
            colors,
            representatives,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn num_colors(&self) -> usize {
        self.representatives.len()
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    #[inline]
    pub fn color_at(&self, index: usize) -> u32 {
        self.colors[index]
    }

    pub fn index_of(&self, tuple: &[usize]) -> usize {
        tuple.iter().fold(0, |acc, &t| acc * self.degree + t)
    }

    pub fn tuple_of(&self, index: usize) -> Vec<usize> {
        let mut digits = vec![0; self.arity];
        decode_into(index, self.degree, &mut digits);
        digits
    }

    pub fn color(&self, tuple: &[usize]) -> u32 {
        self.colors[self.index_of(tuple)]
    }

    /// One tuple per color, the least in index order.
    pub fn representatives(&self) -> Vec<Vec<usize>> {
        self.representatives.iter().map(|&i| self.tuple_of(i)).collect()
    }

    /// Sizes of the color classes.
    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.num_colors()];
        for &c in &self.colors {
            sizes[c as usize] += 1;
        }
        sizes
    }

    /// True iff `g` maps every tuple to one of the same color.
    pub fn preserved_by(&self, g: &Permutation) -> bool {
        let n = self.degree;
        let mut digits = vec![0usize; self.arity];
        (0..self.colors.len()).all(|idx| {
            decode_into(idx, n, &mut digits);
            let img = digits.iter().fold(0usize, |acc, &t| acc * n + g.image(t));
            self.colors[img] == self.colors[idx]
        })
    }

    /// Partition type of each color class; errors if a class mixes types.
    pub fn partition_types(&self) -> Result<Vec<PartitionType>> {
        let types: Vec<PartitionType> = self
            .representatives()
            .iter()
            .map(|t| partition_type(t))
            .collect();
        let mut digits = vec![0usize; self.arity];
        for (idx, &c) in self.colors.iter().enumerate() {
            decode_into(idx, self.degree, &mut digits);
            if partition_type(&digits) != types[c as usize] {
                return Err(Error::Verification(format!(
                    "tuple {digits:?} differs in partition type from its color class {c}"
                )));
            }
        }
        Ok(types)
    }

    /// Binary dump: `n`, `m`, `num_colors` as little-endian `u32`, then one
    /// little-endian `u32` color per tuple in index order.
    pub fn write_binary<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for v in [self.degree, self.arity, self.num_colors()] {
            w.write_all(&(v as u32).to_le_bytes())?;
        }
        for &c in &self.colors {
            w.write_all(&c.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<Self> {
        let mut word = [0u8; 4];
        let mut next = |r: &mut R| -> Result<u32> {
            r.read_exact(&mut word)
                .map_err(|e| Error::Parse(format!("truncated coloring file: {e}")))?;
            Ok(u32::from_le_bytes(word))
        };
        let n = next(&mut r)? as usize;
        let m = next(&mut r)? as usize;
        let k = next(&mut r)? as usize;
        let total = tuple_count(n, m)
            .filter(|&t| t <= DEFAULT_TUPLE_BUDGET)
            .ok_or_else(|| Error::Parse("coloring header too large".into()))?;
        let mut colors = Vec::with_capacity(total as usize);
        let mut representatives = vec![usize::MAX; k];
        for idx in 0..total as usize {
            let c = next(&mut r)?;
            if c as usize >= k {
                return Err(Error::Parse(format!("color {c} out of range")));
            }
            if representatives[c as usize] == usize::MAX {
                representatives[c as usize] = idx;
            }
            colors.push(c);
        }
        if representatives.contains(&usize::MAX) {
            return Err(Error::Parse("empty color class".into()));
        }
        Ok(TupleColoring {
            degree: n,
            arity: m,
            colors,
            representatives,
        })
    }

    pub fn summary(&self) -> ColoringSummary {
        ColoringSummary {
            degree: self.degree,
            arity: self.arity,
            num_colors: self.num_colors(),
            class_sizes: self.class_sizes(),
            representatives: self.representatives(),
        }
    }
}

/// JSON companion to the binary coloring dump.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringSummary {
    pub degree: usize,
    pub arity: usize,
    pub num_colors: usize,
    pub class_sizes: Vec<usize>,
    pub representatives: Vec<Vec<usize>>,
}

#[inline]
fn decode_into(mut idx: usize, n: usize, digits: &mut [usize]) {
    for d in digits.iter_mut().rev() {
        *d = idx % n;
        idx /= n;
    }
}

pub fn m_orbit_coloring(group: &PermGroup, m: usize) -> Result<TupleColoring> {
    TupleColoring::new(group, m)
}

pub fn partition_type(tuple: &[usize]) -> PartitionType {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, &x) in tuple.iter().enumerate() {
        match classes.iter_mut().find(|c| tuple[c[0]] == x) {
            Some(c) => c.push(i),
            None => classes.push(vec![i]),
        }
    }
    PartitionType(classes)
}

pub fn orbit_partition_types(coloring: &TupleColoring) -> Result<Vec<PartitionType>> {
    coloring.partition_types()
}

/// Whether `g` and `h` have the same orbits on `m`-tuples.
///
/// When `g ≤ h` the `h`-orbits are unions of `g`-orbits, so equality holds
/// iff every generator of `h` preserves the coloring of `g`.
pub fn are_m_equivalent(g: &PermGroup, h: &PermGroup, m: usize) -> Result<bool> {
    are_m_equivalent_with_budget(g, h, m, DEFAULT_TUPLE_BUDGET)
}

pub fn are_m_equivalent_with_budget(
    g: &PermGroup,
    h: &PermGroup,
    m: usize,
    budget: u64,
) -> Result<bool> {
    if g.degree() != h.degree() {
        return Err(Error::DegreeMismatch {
            expected: g.degree(),
            got: h.degree(),
        });
    }
    let (small, large) = if g.is_subgroup_of(h) {
        (g, h)
    } else if h.is_subgroup_of(g) {
        (h, g)
    } else {
        let cg = TupleColoring::with_budget(g, m, budget)?;
        let ch = TupleColoring::with_budget(h, m, budget)?;
        return Ok(cg.colors == ch.colors);
    };
    let coloring = TupleColoring::with_budget(small, m, budget)?;
    Ok(large.generators().iter().all(|x| coloring.preserved_by(x)))
}
