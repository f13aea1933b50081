//! Modular models: evaluation, set operations and closure audits.

mod audit;
mod model;

pub use audit::{
    audit, audit_universe, audit_with, default_universe, Condition, ConditionReport,
    ConditionStatus, Violation,
};
pub use model::{eval, set_pairing, set_product, ModelError, ModelFile, ModularModel};

use crate::specifications::ConstantSpec;

/// Whether every formula of the constant specification holds in the model.
pub fn respects(model: &ModularModel, spec: &ConstantSpec) -> bool {
    spec.formulas().iter().all(|f| eval(model, f))
}
