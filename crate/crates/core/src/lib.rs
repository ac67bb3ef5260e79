//! Exact algorithms for incidence graphs of hypergraphs: homomorphism
//! counting, generalised and entangled hypertree decompositions, the guarded
//! two-sorted counting logic and its normal form, labeled incidence graphs
//! with their construction certificates, quantum incidence graphs, and the
//! constructions relating formulas, certificates and homomorphism counts.

pub mod bridge;
pub mod config;
pub mod decomp;
pub mod error;
pub mod fixtures;
pub mod guard;
pub mod homcount;
pub mod io;
pub mod labeled;
pub mod logic;
pub mod model;
pub mod quantum;

pub use config::{Caps, Config};
pub use error::{Error, Result};
pub use guard::GuardFunction;
pub use model::{Color, Hypergraph, IncidenceGraph};
