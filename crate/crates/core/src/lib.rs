//! Local (Hitchin–Chatterjee) bundle gerbes on finite simplicial complexes.
//!
//! A gerbe is a `U(1)`-valued Čech 2-cocycle on the nerve of a cover,
//! encoded as a circle-valued cochain on a [`chain_complex::SimplicialComplex`].
//! The crate computes integral cohomology by Smith normal form,
//! Dixmier–Douady classes, trivializations and Bockstein/lifting
//! obstructions ([`gerbe_cocycle`]), connective structures with surface
//! holonomy and three-curvature ([`connective`]), and the concrete basic
//! gerbe on S³ with the WZW term ([`geometry`]).
//!
//! Real-valued code is generic over [`scalar::Real`] (`f32`, `f64`); the
//! aliases below fix `f64`.

pub mod chain_complex;
pub mod cli;
pub mod connective;
pub mod error;
pub mod geometry;
pub mod gerbe_cocycle;
pub mod io;
pub mod scalar;

pub use error::{Error, Result};

pub type Gerbe = gerbe_cocycle::LocalGerbe<f64>;
pub type LineData = gerbe_cocycle::LineCocycle<f64>;
pub type Connective = connective::ConnectiveStructure<f64>;
pub type Holonomy = connective::HolonomyResult<f64>;
pub type BasicGerbe = geometry::fields::BasicGerbeS3<f64>;
pub type Monopole = geometry::fields::MonopoleData<f64>;
pub type Quadrature = geometry::quadrature::QuadratureRule<f64>;
pub type S3Data = geometry::discretize::Discretization<f64>;
