//! Hitchin–Chatterjee gerbes as circle-valued 2-cocycles: validation,
//! Dixmier–Douady classes, trivializations, Bockstein and lifting
//! obstructions.

pub mod bockstein;
pub mod dd;
pub mod extension;
pub mod gerbe;
pub mod trivialize;

pub use bockstein::{bockstein, bockstein_with, cyclic_cocycle_generators, is_cyclic_coboundary, is_n_torsion, CyclicCocycle};
pub use dd::{dd_class, integer_obstruction, DdComputer, DixmierDouadyClass};
pub use extension::{lifting_obstruction, CentralExtensionTable};
pub use gerbe::{circle_tol, max_circle_distance, validate_gerbe, GerbeReport, GerbeViolation, LineCocycle, LocalGerbe, CIRCLE_TOL};
pub use trivialize::{stably_isomorphic, stably_isomorphic_with, trivialization_difference, trivialize, trivialize_with, Trivialization};
