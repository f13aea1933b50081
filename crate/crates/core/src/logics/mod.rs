//! Logic profiles, axiom schemas and the T-translation.

mod profile;
pub mod schema;
mod translate;

pub use profile::{LogicProfile, ProfileError, UnknownProfile};
pub use schema::{
    instantiate, match_axiom, schemas, AxiomSchema, Binding, InstantiateError, Pattern, SchemaId,
    SignConstraint, TermPattern, UnknownSchema,
};
pub use translate::{fresh_name, translate_t, translate_with};
