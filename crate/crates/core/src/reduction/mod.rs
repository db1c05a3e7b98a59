//! The two reductions: balanced minimum cut to the weighted problem, and
//! weighted to unweighted by clique blow-up.
//!
//! Generated vertex labels follow a fixed grammar: `v:<name>` and
//! `v':<name>` for a source vertex and its copy, `u:<k>` for the vertex
//! subdividing the `k`-th source edge (1-based), `s:<i>` and `t:<i>` for
//! the terminal cliques, and `b:<name>:<i>` for the `i`-th blow-up copy.

pub mod blowup;
pub mod bundle;
pub mod cut;

pub use blowup::{
    build_unweighted_instance, check_equivalence, AveragingReport, BlowupInstance,
    EquivalenceReport, ProjectionMap,
};
pub use bundle::Bundle;
pub use cut::{
    build_weighted_instance, find_reversal_violation, paper_n, ReversalViolation,
    SufficiencyReport, WeightedInstance,
};

pub(crate) fn ser_big<S: serde::Serializer>(
    v: &num_bigint::BigUint,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}
