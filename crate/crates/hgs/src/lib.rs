//! Calibrated hypergraph states of qudits valued in a Galois ring GR(p^r, d).
//!
//! Ring elements are indices into a fixed canonical order, phases are integers mod p^r and
//! states over E[l] are stored as exact phase tables. Dense complex matrices are only used for
//! cross-checks on small instances.

pub mod canonicalize;
pub mod cyclicity;
pub mod error;
pub mod field_poly;
pub mod galois_ring;
pub mod hypergraph;
pub mod hyperstate;
pub mod io;
pub mod marked_cz;
pub mod qudit_space;

pub use error::{Error, Result};
pub use galois_ring::{make_ring, named_ring, standard_ring, Elem, GaloisRing, Scalar};
pub use hypergraph::{
    CalibratedHypergraph, ExpFn, Hyperedge, MarkedHypergraph, OrdinalMorphism, PolyHypergraph, WeightedHypergraph,
};
pub use qudit_space::{Basis, FlatState};
