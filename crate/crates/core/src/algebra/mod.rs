//! Integer linear algebra, finitely generated abelian groups and chain complexes.

pub mod abelian;
pub mod cap;
pub mod chain;
pub mod dense;
pub mod homology;
pub mod lattice;
pub mod matrix;

pub use abelian::{AbMap, FgAbGroup};
pub use chain::{ChainComplex, ChainMap};
pub use dense::{smith_dense, DenseMatrix, DenseSnf};
pub use homology::{
    cohomology, cohomology_via_hom_ext, homology, integral_cohomology, integral_homology,
    HomologyBasis, PresentedComplex, Reduction,
};
pub use lattice::{Lattice, Subquotient};
pub use matrix::{snf, IntMatrix, SnfResult};
