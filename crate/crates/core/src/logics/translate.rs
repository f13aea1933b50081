//! The T-translation: negatively justified subformulas become fresh
//! propositional variables named after their own translated form.

use std::collections::BTreeMap;

use crate::syntax::{print_formula, Formula, Sign};

/// Name of the fresh variable standing for `s-:E` (with `E` already translated).
pub fn fresh_name(justified: &Formula) -> String {
    format!("X[{}]", print_formula(justified))
}

/// Translates a fused formula. The result contains no negative terms.
pub fn translate_t(f: &Formula) -> Formula {
    translate_with(f, &mut BTreeMap::new())
}

/// Translates and records every fresh variable together with the formula it replaces.
pub fn translate_with(f: &Formula, dict: &mut BTreeMap<String, Formula>) -> Formula {
    match f {
        Formula::Bottom | Formula::Var(_) => f.clone(),
        Formula::Not(a) => Formula::not(translate_with(a, dict)),
        Formula::And(a, b) => Formula::and(translate_with(a, dict), translate_with(b, dict)),
        Formula::Or(a, b) => Formula::or(translate_with(a, dict), translate_with(b, dict)),
        Formula::Implies(a, b) => {
            Formula::implies(translate_with(a, dict), translate_with(b, dict))
        }
        Formula::Just(t, body) => {
            let inner = Formula::just((**t).clone(), translate_with(body, dict));
            if t.sign() == Sign::Negative {
                let name = fresh_name(&inner);
                dict.entry(name.clone()).or_insert_with(|| f.clone());
                Formula::var(&name)
            } else {
                inner
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logics::LogicProfile;

    fn f(src: &str) -> Formula {
        LogicProfile::Fused.parse_formula(src).unwrap()
    }

    #[test]
    fn negative_leaf_becomes_variable() {
        assert_eq!(translate_t(&f("s-:E")), Formula::var("X[s-:E]"));
    }

    #[test]
    fn positive_term_is_kept() {
        let out = translate_t(&f("t+:(s-:E)"));
        assert_eq!(out.to_string(), "t+:X[s-:E]");
        assert_eq!(f("t+:X[s-:E]"), out);
    }

    #[test]
    fn propositional_identity() {
        assert_eq!(translate_t(&f("P -> P")), f("P -> P"));
    }

    #[test]
    fn nested_negatives_name_the_translated_body() {
        let mut dict = BTreeMap::new();
        let out = translate_with(&f("s-:(t-:E)"), &mut dict);
        assert_eq!(out, Formula::var("X[s-:X[t-:E]]"));
        assert_eq!(dict.len(), 2);
        assert!(!out.has_negative_term());
    }
}
