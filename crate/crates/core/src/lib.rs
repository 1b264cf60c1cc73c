//! Permutation-group closures, product actions and solvable linear groups.

pub mod catalog;
pub mod closure;
pub mod error;
pub mod io;
pub mod linear;
pub mod orbits;
pub mod perm;
pub mod pipeline;
pub mod products;

pub use error::{Error, Result};
pub use perm::{PermGroup, Permutation};
