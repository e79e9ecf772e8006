//! Exact sparse linear algebra over `Z`, `Q` and `F_p`.

pub mod blocks;
pub mod field;
pub mod group;
pub mod matrix;
pub mod smith;

pub use field::{kernel_basis, kernel_rank, rank, solve};
pub use group::GroupPresentation;
pub use matrix::{SparseMatrix, SparseVector};
pub use smith::{
    cokernel, kernel_lattice, smith_normal_form, smith_with_transforms, SmithForm, SmithTransforms,
};
