//! Finite fields, matrices and matrix groups.

mod classical;
mod extraspecial;
mod field;
mod group;
mod matrix;

pub use classical::{
    classical_order, parse_classical_name, quadratic_form, symplectic_form, ClassicalGroup,
    ClassicalKind,
};
pub use extraspecial::{
    extraspecial_normalizer, ExtraspecialCheck, ExtraspecialGroup, ExtraspecialKind,
    ExtraspecialNormalizer,
};
pub use field::{field_make, is_prime, prime_power, Fq, MAX_FIELD_ORDER};
pub use group::{
    affine_group, agammal1, gammal1, mat_to_perm, Irreducibility, MatrixGroup, VectorDomain,
    DEFAULT_VECTOR_BUDGET,
};
pub use matrix::{
    blowup, frobenius_blowup, frobenius_matrix, frobenius_of, kron_lift, kron_right,
    multiplication_matrix, singer_matrix, vector_from_index, vector_index, FqMatrix,
};
