//! Translations between derivation certificates, counting formulas and
//! quantum graphs, and the pairwise cross-check built on them.

pub mod compile;
pub mod formula;
pub mod segment;
pub mod theorem;

pub use compile::{quantum_from_formula, quantum_from_formula_with, release_blue, SizeParams};
pub use formula::{formula_from_cert, true_sentence};
pub use segment::{enumerate_segmentations, Segmentation};
pub use theorem::{
    crosscheck_main_theorem, distinguish_by_ehw, patterns_of_size, Assertion, CrosscheckReport, Direction,
    Distinguisher, SearchBounds,
};
