//! Exact computation with finite-dimensional commutative algebras given by
//! structure constants, with a focus on Bernstein algebras.

pub mod algebra;
pub mod bernstein;
pub mod dsl;
pub mod families;
pub mod field;
pub mod identity;
pub mod kernel;
pub mod linalg;
pub mod report;
pub mod sample;
pub mod theorem;

pub use algebra::{CommAlgebra, Element, PowerChain, PowerKind};
pub use bernstein::{BaricAlgebra, NamedAlgebra, PeirceData};
pub use field::{Field, Rational};
pub use linalg::{Matrix, Subspace};
