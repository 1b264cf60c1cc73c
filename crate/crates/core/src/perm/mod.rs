//! Permutations and permutation groups.

mod blocks;
pub(crate) mod chain;
mod group;
mod permutation;
mod sylow;

pub use blocks::{is_block_system, minimal_block_system, primitivity, Primitivity};
pub use group::{ElementIter, PermGroup, Solvability, DEFAULT_ENUMERATION_LIMIT};
pub(crate) use group::orbit_of;
pub use permutation::Permutation;
pub use sylow::{is_power_of, prime_part, prime_part_u64};
