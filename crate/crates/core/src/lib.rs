//! Homeomorphism classification of triangulated compact surfaces.
//!
//! A surface is given as a gluing table: row `t` says, for each of the
//! three edges of triangle `t`, which edge of which triangle it is glued to
//! (or that it lies on the boundary). Two surfaces are homeomorphic iff
//! their sorted lists of per-component triples `(o, chi, b)` agree.
//!
//! Two engines compute the same answer. The baseline materializes every
//! auxiliary graph and runs union-find on it. The metered engine keeps only counters on a
//! [`MeteredWorkspace`] and recomputes everything from the input on demand,
//! with connectivity delegated to a [`ConnectivityOracle`].

pub mod classify;
pub mod connectivity;
pub mod error;
pub mod generate;
pub mod graphs;
pub mod invariants;
pub mod metered;
pub mod space;
pub mod stream;
pub mod tape;
pub mod triangulation;
pub mod validate;

pub use classify::{
    classify, classify_baseline, extract_component, homeomorphic, normal_form_name, Engine, InvariantList,
    NormalFormName, SurfaceGenus,
};
pub use connectivity::{ConnectivityOracle, CountingOracle, PathWalkOracle, SavitchOracle, UnionFindOracle};
pub use error::{Error, Result};
pub use generate::{generate, Family, FamilySpec, Mutation};
pub use graphs::{
    boundary_identification_graph, double_cover, face_dual, vertex_identification_graph, CornerId,
    GraphStream, UndirectedGraph,
};
pub use invariants::{invariant_triple, InvariantTriple};
pub use metered::MeteredEngine;
pub use tape::{default_budget, MeteredWorkspace, SpaceReport};
pub use triangulation::{Column, EdgeLabel, GluingEntry, Triangulation, KLEIN_TAPE};
pub use validate::{check_surface, is_surface, Violation, ViolationKind};
