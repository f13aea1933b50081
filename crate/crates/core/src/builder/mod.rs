//! Staged construction of denial-logic models, parametrized by a Boolean
//! functional.

mod build;
mod functional;

pub use build::{
    build, realize_spec, realize_spec_with, BuildError, BuildParams, Case, Fragment,
    PairingClosure, StageTrace, TraceEvent,
};
pub use functional::{glob_match, FireContext, Functional, TableRule};
