//! Hilbert proofs: checking, bounded forward chaining, internalization and
//! non-derivability reports.

mod forward;
mod internal;
mod proof;
mod report;

pub use forward::{
    derive_forward, derive_forward_with, Derivation, ForwardParams, GoalFilter, Origin,
};
pub use internal::{internalize, InternalizeError, Internalized};
pub use proof::{
    check_proof, extract, LineRecord, Proof, ProofBuilder, ProofFile, ProofFileError, ProofLine,
    RejectReason, Rule, Verdict,
};
pub use report::{
    check_nonderivability_report, sign_disjointness_refutation, Goal, NonderivabilityReport,
    Outcome, SearchBounds,
};
