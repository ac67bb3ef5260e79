//! Labeled incidence graphs, derivation certificates, and the translation
//! between certificates and entangled decompositions.

pub mod cert;
pub mod graph;
pub mod theorem;

pub use cert::{check_base, eval_cert, GliCert};
pub use graph::{
    apply_transition, apply_transition_full, check_transition, from_guard_fn, glue, has_real_guards, reclaim, reseat,
    transition_removed, GlueResult, LabeledGraph, Projection,
};
pub use theorem::{cert_to_ehd, check_plan, ehd_to_cert, ehd_to_cert_trace, plan_traversal, CertTrace, Plan};
