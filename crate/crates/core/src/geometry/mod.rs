//! Concrete geometry: meshes of S² and S³, quadrature, the monopole and the
//! basic gerbe, discretization onto charted meshes, and WZW amplitudes.

pub use crate::error::Point4;

pub mod fields;
pub mod mesh;
pub mod quadrature;
pub mod discretize;
pub mod wzw;
