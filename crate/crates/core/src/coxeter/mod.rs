//! Finite Weyl groups: Cartan data, elements, length, descents, Bruhat order
//! and parabolic coset representatives.

mod descriptor;
mod group;
mod matrix;
mod system;

pub use descriptor::{Factor, Family, TypeDescriptor};
pub use group::{ElemId, WeylGroup};
pub use matrix::IntMatrix;
pub use system::{
    format_word, parse_word, CoxeterSystem, DescentPolicy, GroupElement, DEFAULT_BUDGET,
    DEFAULT_ORACLE_BUDGET,
};
