//! Constant specifications and the bounded procedures built on them.

mod ops;
mod spec;

pub use ops::{
    blue_pill, check_coherence, ok_extract, probe_consistency, search_jl_model, BluePill,
    Coherence, JlWitness, OkSet, Probe, SearchPhase, SpecBounds, Witness,
};
pub use spec::{close_spec, entry_chain, ClosureStatus, ConstantSpec, SpecError, SpecFile};
