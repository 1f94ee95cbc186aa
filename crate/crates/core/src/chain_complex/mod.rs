//! Simplicial complexes, cochains with ℤ, ℝ, U(1) and ℤₙ coefficients, and
//! integral cohomology via Smith normal form.

pub mod coefficients;
pub mod cochain;
pub mod cohomology;
pub mod complex;
pub mod matrix;
pub mod smith;

pub use coefficients::{CoefficientTag, Coefficients, Circle, Cyclic, Integers, Reals};
pub use cochain::Cochain;
pub use cohomology::{
    cocycle_class, cohomology_group, ClassCoords, CohomologyComputer, CohomologyGroup, TorsionCoordinate,
};
pub use complex::{Simplex, SimplicialComplex};
pub use matrix::{coboundary_matrix, IntegerMatrix};
pub use smith::{smith_normal_form, ElementaryOp, SmithDecomposition};
