//! Extended persistence barcodes and cycle representatives for
//! vertex-valued graphs.
//!
//! The fast path combines union-find zero-dimensional persistence with a
//! link-cut tree that maintains a spanning forest of the upper filtration.
//! A boundary-matrix reduction over GF(2) on the coned filtration serves as
//! an independent oracle.

pub mod barcode;
pub mod datasets;
pub mod error;
pub mod expressivity;
pub mod graph;
pub mod link_cut;
pub mod oracle;
pub mod persistence;
pub mod ph_zero;
pub mod vectorize;
pub mod verify;

pub use barcode::{Bar, BarKind, CycleRepresentative, ExtendedBarcode};
pub use error::{Error, Result};
pub use graph::{build_lower_filtration, build_upper_filtration, Direction, Graph, IndexFiltration, Simplex, TieBreakMode, TieBreakPolicy};
pub use persistence::{compute_batch, compute_extended_persistence, cycle_scalars};
