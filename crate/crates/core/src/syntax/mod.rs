//! Abstract syntax, concrete grammar, printing and bounded enumeration.

mod ast;
pub mod enumerate;
mod parse;
mod print;

pub use ast::{is_variable_name, Formula, Sign, Signedness, Term, TermOp};
pub use enumerate::{
    cmp_formulas, cmp_terms, enumerate_formulas, enumerate_terms, Enumeration, OperatorSet,
};
pub use parse::{parse_formula, parse_term, ParseError};
pub use print::{print_formula, print_term};
