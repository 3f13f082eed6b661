//! Functorial invariants of templexes.
//!
//! A templex pairs a cell complex (the undirected scaffold) with a digraph on
//! its top-cells (the flow). This crate computes both families of invariants:
//!
//! * integer homology groups of the complex ([`homology`]), with torsion,
//!   explicit generator chains and orientability chains;
//! * generatex classes of the digraph ([`genex`]): directed cycles modulo
//!   their image under the Poincaré-edge operator, with orders, stripexes,
//!   orientation classes and bonds.
//!
//! On top of these, [`tmv`] decomposes trajectories into topological modes of
//! variability and [`ingest`] produces itineraries from raw data.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::type_complexity)]

pub mod cellcomplex;
pub mod error;
pub mod fixtures;
pub mod genex;
pub mod homology;
pub mod ingest;
pub mod label;
pub mod matrix;
pub mod par;
pub mod report;
pub mod templex;
pub mod tmv;

pub use cellcomplex::{Cell, CellComplex, CellId, Chain};
pub use error::{Error, Result};
pub use genex::{Bond, DirectedCycle, DirectedPath, GeneratexAnalysis, GeneratexClass, Orientation, PSignature};
pub use homology::{HomologyGroup, OrientabilityReport};
pub use matrix::IntMatrix;
pub use report::AnalysisReport;
pub use templex::{Digraph, JunctionLocus, LocusKind, PoincareEdge, PoincareMode, Templex};
pub use tmv::{Itinerary, TmvDecomposition, TmvStats};
