//! Denial logic workbench: syntax, axiom profiles, Hilbert proofs, modular
//! models, the staged model construction and constant specifications.

pub mod builder;
pub mod exec;
pub mod logics;
pub mod proofs;
pub mod scenarios;
pub mod semantics;
pub mod specifications;
pub mod syntax;

pub use exec::Execution;
