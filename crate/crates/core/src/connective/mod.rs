//! Discrete connective structures, their descent equations, charted
//! surfaces and volumes, and triangulated surface holonomy.

pub mod holonomy;
pub mod structure;
pub mod surface;

pub use holonomy::{
    boundary_holonomy_check, surface_holonomy, three_curvature, three_curvature_chart_spread, three_curvature_in_chart,
    BoundaryReport, HolonomyResult,
};
pub use structure::{check_connective, ConnectionViolation, ConnectiveReport, ConnectiveStructure, CurvingViolation};
pub use surface::{oriented_faces, ChartMap, ChartedSurface, ChartedVolume, Witnesses};
