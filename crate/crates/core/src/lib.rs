//! Exact wall-crossing combinatorics for weighted stable marked del Pezzo
//! surfaces of degrees 3 and 4.

pub mod error;
pub mod lattice;
pub mod complex;
pub mod roots;
pub mod strata;
pub mod rational;
pub mod surface;
pub mod skeleton;
pub mod models;
pub mod contraction;
pub mod catalog;
pub mod canonical;
pub mod walls;

pub use error::{Error, Result};
pub use lattice::{canonical_class, enumerate_lines, enumerate_roots, LatticeVector};
pub use roots::{
    enumerate_vertex_subsystems, reflect, span_closure, DynkinType, RootSubsystem, VertexKind,
};
pub use complex::{BoundaryComplex, CompatibilityMode, ComplexReport};
pub use strata::{census, count_strata, enumerate_eckardt_triples, enumerate_strata, StratumLabel, StratumType};
pub use rational::{fmt_q, parse_rational, Q};
pub use surface::{
    polarization_restriction, slc_interval, total_degree, total_degree_form, FiberComplex, Role, SurfaceComponent,
    WeightedClass,
};
pub use contraction::stable_model;
pub use catalog::{apply_eckardt_augmentation, apply_x_degeneration, build_fiber, catalog_labels};
pub use canonical::{canonical_form, isomorphic};
pub use walls::{chamber_model, classify_wall, compute_walls, WallReport, WallTag};
