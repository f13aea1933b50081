use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::specifications::{entry_chain, ConstantSpec};
use crate::syntax::{Formula, Term, TermOp};

/// Arguments of a functional at one decision point.
#[derive(Clone, Copy, Debug)]
pub struct FireContext<'a> {
    pub valuation: &'a BTreeMap<String, bool>,
    /// Stage, counted from 1.
    pub stage: usize,
    /// The formula enumerated at this stage.
    pub formula: &'a Formula,
    /// The term that would receive the contribution, and its position.
    pub term: &'a Term,
    pub term_index: usize,
    /// What would be added to the set of `term`.
    pub contribution: &'a Formula,
}

/// One row of a rule table. Patterns are matched against printed text;
/// `*` matches any run of characters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRule {
    pub term: String,
    pub formula: String,
    pub bit: u8,
}

impl TableRule {
    pub fn new(term: &str, formula: &str, bit: bool) -> Self {
        TableRule {
            term: term.into(),
            formula: formula.into(),
            bit: u8::from(bit),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Functional {
    ConstZero,
    ConstOne,
    /// Fires iff the receiving term contains a `+`.
    PlusSyntactic,
    /// Fires exactly at the positions of the positive entries of the constant specification.
    SpecDriven(ConstantSpec),
    /// First matching rule decides; no match gives 0.
    RuleTable(Vec<TableRule>),
    /// Spec positions are forced (positive entries fire, negated entries
    /// block), everything else is left to the inner functional.
    Realizing(ConstantSpec, Box<Functional>),
}

/// `*`-only wildcard matching.
pub fn glob_match(pattern: &str, text: &str) -> bool {
    let p: Vec<char> = pattern.chars().collect();
    let t: Vec<char> = text.chars().collect();
    let (mut pi, mut ti) = (0, 0);
    let mut star: Option<(usize, usize)> = None;
    while ti < t.len() {
        if pi < p.len() && p[pi] == '*' {
            star = Some((pi, ti));
            pi += 1;
        } else if pi < p.len() && p[pi] == t[ti] {
            pi += 1;
            ti += 1;
        } else if let Some((sp, st)) = star {
            pi = sp + 1;
            ti = st + 1;
            star = Some((sp, st + 1));
        } else {
            return false;
        }
    }
    p[pi..].iter().all(|c| *c == '*')
}

/// Whether `formula` is a positive entry `term:…` of `spec`.
fn positive_entry_at(spec: &ConstantSpec, formula: &Formula, term: &Term) -> bool {
    matches!(formula, Formula::Just(t, _) if **t == *term) && spec.contains(formula)
}

/// Whether adding `contribution` to `term` would falsify a negated entry.
fn blocked_by(spec: &ConstantSpec, term: &Term, contribution: &Formula) -> bool {
    spec.formulas().iter().any(|f| {
        let (negated, terms, _) = entry_chain(f);
        negated
            && terms.first().is_some_and(|t| *t == term)
            && matches!(f.strip_not().1, Formula::Just(_, body) if **body == *contribution)
    })
}

impl Functional {
    pub fn fires(&self, ctx: &FireContext<'_>) -> bool {
        match self {
            Functional::ConstZero => false,
            Functional::ConstOne => true,
            Functional::PlusSyntactic => ctx.term.contains_op(TermOp::Sum),
            Functional::SpecDriven(spec) => positive_entry_at(spec, ctx.formula, ctx.term),
            Functional::RuleTable(rules) => {
                let (term, formula) = (ctx.term.to_string(), ctx.formula.to_string());
                rules
                    .iter()
                    .find(|r| glob_match(&r.term, &term) && glob_match(&r.formula, &formula))
                    .is_some_and(|r| r.bit == 1)
            }
            Functional::Realizing(spec, inner) => {
                if positive_entry_at(spec, ctx.formula, ctx.term) {
                    true
                } else if blocked_by(spec, ctx.term, ctx.contribution) {
                    false
                } else {
                    inner.fires(ctx)
                }
            }
        }
    }

    /// Looks up a preset by name; `spec-driven` needs a specification.
    pub fn preset(name: &str, spec: Option<&ConstantSpec>) -> Result<Functional, String> {
        match name {
            "const-zero" => Ok(Functional::ConstZero),
            "const-one" => Ok(Functional::ConstOne),
            "plus-syntactic" => Ok(Functional::PlusSyntactic),
            "spec-driven" => spec
                .cloned()
                .map(Functional::SpecDriven)
                .ok_or_else(|| "`spec-driven` needs a specification".to_string()),
            other => Err(format!(
                "unknown functional `{other}` (expected const-zero, const-one, plus-syntactic, spec-driven)"
            )),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Functional::ConstZero => "const-zero".into(),
            Functional::ConstOne => "const-one".into(),
            Functional::PlusSyntactic => "plus-syntactic".into(),
            Functional::SpecDriven(_) => "spec-driven".into(),
            Functional::RuleTable(rules) => format!("rule-table({} rules)", rules.len()),
            Functional::Realizing(_, inner) => format!("realizing({})", inner.name()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn globs() {
        assert!(glob_match("*", ""));
        assert!(glob_match("[*+*]", "[x+y]"));
        assert!(!glob_match("[*+*]", "[x.y]"));
        assert!(glob_match("e1", "e1"));
        assert!(!glob_match("e1", "e12"));
        assert!(glob_match("*:R", "[x.y]:R"));
        assert!(glob_match("a*b*c", "aXbYbc"));
    }
}
