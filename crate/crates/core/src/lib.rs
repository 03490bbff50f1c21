//! Exact-arithmetic engine for equivariant simplicial topology.

pub mod algebra;
pub mod bredon;
pub mod duality;
pub mod error;
pub mod functor;
pub mod g_complex;
pub mod integer;
pub mod lab;
pub mod perm_group;

pub use algebra::{AbMap, ChainComplex, ChainMap, FgAbGroup, IntMatrix, SnfResult};
pub use error::{Error, Result};
pub use integer::Int;
pub use perm_group::{FiniteGroup, Perm, Subgroup, SubgroupClassList};
