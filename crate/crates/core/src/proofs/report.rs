//! Bounded non-derivability reports, upgraded by countermodels or by an
//! explicit refutation when one is available.

use std::fmt;

use serde::Serialize;

use super::forward::{derive_forward_with, ForwardParams};
use super::proof::{check_proof, Proof, ProofBuilder};
use crate::logics::{Binding, LogicProfile, SchemaId};
use crate::semantics::{audit, audit_universe, eval, respects, ModularModel};
use crate::specifications::ConstantSpec;
use crate::syntax::{enumerate_terms, Formula, Sign, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Goal {
    Exact(Formula),
    /// Some term (of the given sign, if any) justifies `body`.
    Exists {
        var: String,
        sign: Option<Sign>,
        body: Formula,
    },
}

impl Goal {
    pub fn matches(&self, f: &Formula, term_size: usize) -> bool {
        match self {
            Goal::Exact(g) => f == g,
            Goal::Exists { sign, body, .. } => match f {
                Formula::Just(t, b) => {
                    **b == *body && t.size() <= term_size && sign.is_none_or(|s| t.sign() == s)
                }
                _ => false,
            },
        }
    }

    /// Reads `F`, `exists s. s:F` or `exists positive j. j:F`.
    pub fn parse(text: &str, profile: LogicProfile) -> Result<Goal, String> {
        let text = text.trim();
        let Some(rest) = text.strip_prefix("exists ") else {
            return profile
                .parse_formula(text)
                .map(Goal::Exact)
                .map_err(|e| e.to_string());
        };
        let (head, body) = rest
            .split_once('.')
            .ok_or("expected `.` after the bound variable")?;
        let words: Vec<&str> = head.split_whitespace().collect();
        let (sign, var) = match words.as_slice() {
            [v] => (None, *v),
            ["positive", v] => (Some(Sign::Positive), *v),
            ["negative", v] => (Some(Sign::Negative), *v),
            _ => return Err(format!("cannot read quantifier `{head}`")),
        };
        let body = body.trim();
        let inner = body
            .strip_prefix(var)
            .and_then(|b| b.strip_prefix(':'))
            .ok_or_else(|| format!("expected `{var}:` after the quantifier"))?;
        let body = profile.parse_formula(inner).map_err(|e| e.to_string())?;
        Ok(Goal::Exists {
            var: var.to_string(),
            sign,
            body,
        })
    }
}

impl fmt::Display for Goal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Goal::Exact(g) => write!(f, "{g}"),
            Goal::Exists { var, sign, body } => {
                let just = Formula::just(Term::leaf(var, Sign::Unsigned), body.clone());
                match sign {
                    Some(Sign::Positive) => write!(f, "exists positive {var}. {just}"),
                    Some(Sign::Negative) => write!(f, "exists negative {var}. {just}"),
                    _ => write!(f, "exists {var}. {just}"),
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    pub depth: usize,
    pub size: usize,
    /// Largest witness term considered for existential goals.
    pub term_size: usize,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            depth: 3,
            size: 4,
            term_size: 4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Derived,
    NoProofWithinBounds,
    RefutedByCountermodel,
    Refuted,
}

#[derive(Clone, Debug, Serialize)]
pub struct NonderivabilityReport {
    pub goal: String,
    pub outcome: Outcome,
    pub depth: usize,
    pub size: usize,
    pub term_size: usize,
    pub derived: usize,
    pub truncated: bool,
    pub message: String,
    #[serde(skip)]
    pub proof: Option<Proof>,
    #[serde(skip)]
    pub refutation: Option<(ConstantSpec, Proof)>,
    pub countermodel_terms: usize,
}

impl NonderivabilityReport {
    /// An outcome that settles the question (the goal is not derivable).
    pub fn is_refuted(&self) -> bool {
        matches!(
            self.outcome,
            Outcome::Refuted | Outcome::RefutedByCountermodel
        )
    }
}

fn leaves_of(spec: &ConstantSpec, model: &ModularModel) -> Vec<Term> {
    let mut leaves = spec.leaves();
    for t in model.interp.keys() {
        t.for_each_subterm(&mut |s| {
            if s.is_leaf() && !leaves.contains(s) {
                leaves.push(s.clone());
            }
        });
    }
    leaves
}

/// Checks the candidate countermodel and returns how many terms it rules out.
fn countermodel_rules_out(
    model: &ModularModel,
    spec: &ConstantSpec,
    profile: LogicProfile,
    goal: &Goal,
    bounds: SearchBounds,
) -> Option<usize> {
    if !respects(model, spec) {
        return None;
    }
    let (universe, closed) = audit_universe(model);
    if !audit(model, &universe).is_clean() {
        return None;
    }
    match goal {
        Goal::Exact(g) => (!eval(model, g)).then_some(0),
        Goal::Exists { sign, body, .. } => {
            let terms = enumerate_terms(
                profile.operators(),
                &leaves_of(spec, model),
                bounds.term_size,
            );
            if closed && terms.items().iter().any(|t| !model.interp.contains_key(t)) {
                return None;
            }
            let mut checked = 0;
            let all: std::collections::BTreeSet<&Term> =
                terms.items().iter().chain(model.interp.keys()).collect();
            for t in all {
                if sign.is_some_and(|s| t.sign() != s) {
                    continue;
                }
                checked += 1;
                if eval(model, &Formula::just(t.clone(), body.clone())) {
                    return None;
                }
            }
            Some(checked)
        }
    }
}

fn fresh_constant(spec: &ConstantSpec, base: &str, sign: Sign) -> Term {
    let leaves = spec.leaves();
    let taken = |name: &str| {
        leaves
            .iter()
            .any(|l| matches!(l, Term::Const(n, _) if &**n == name))
    };
    let mut name = base.to_string();
    let mut k = 1;
    while taken(&name) {
        name = format!("{base}{k}");
        k += 1;
    }
    Term::leaf(&name, sign)
}

/// For `exists positive j. j:(C -> E)` in the fused logic with `s+:C` and
/// `t-:E` in the constant specification: assuming `j+:(C -> E)` for a fresh constant
/// derives `_|_`, because `[j+ . s+]:E` and `t-:E` would justify `E` both
/// positively and negatively.
pub fn sign_disjointness_refutation(
    spec: &ConstantSpec,
    goal: &Goal,
) -> Option<(ConstantSpec, Proof, Term, Term)> {
    let Goal::Exists {
        sign: Some(Sign::Positive),
        body: Formula::Implies(c, e),
        ..
    } = goal
    else {
        return None;
    };
    if spec.profile() != LogicProfile::Fused {
        return None;
    }
    let find = |target: &Formula, sign: Sign| {
        spec.formulas().iter().find_map(|f| match f {
            Formula::Just(t, b) if **b == *target && t.sign() == sign => Some((**t).clone()),
            _ => None,
        })
    };
    let s = find(c, Sign::Positive)?;
    let t = find(e, Sign::Negative)?;
    let j = fresh_constant(spec, "j", Sign::Positive);
    let assumption = Formula::just(j.clone(), Formula::implies((**c).clone(), (**e).clone()));
    let extended = spec.extended(&[assumption.clone()]).ok()?;
    let p = LogicProfile::Fused;
    let mut b = ProofBuilder::new(p);
    let hj = b.hypothesis(&extended, &assumption)?;
    let hs = b.hypothesis(&extended, &Formula::just(s.clone(), (**c).clone()))?;
    let app = b
        .axiom(
            SchemaId::Application,
            Binding::new()
                .term("s", j.clone())
                .term("t", s.clone())
                .formula("P", (**c).clone())
                .formula("Q", (**e).clone()),
        )
        .ok()?;
    let step = b.mp(app, hj)?;
    let pos = b.mp(step, hs)?;
    let js = Term::app(j, s.clone());
    let fact = b
        .axiom(
            SchemaId::Factivity,
            Binding::new().term("t", js).formula("P", (**e).clone()),
        )
        .ok()?;
    let e_true = b.mp(fact, pos)?;
    let ht = b.hypothesis(&extended, &Formula::just(t.clone(), (**e).clone()))?;
    let denial = b
        .axiom(
            SchemaId::Denial,
            Binding::new()
                .term("t", t.clone())
                .formula("P", (**e).clone()),
        )
        .ok()?;
    let not_e = b.mp(denial, ht)?;
    let elim = b
        .axiom(
            SchemaId::NotElim,
            Binding::new().formula("P", (**e).clone()),
        )
        .ok()?;
    let e_bottom = b.mp(elim, not_e)?;
    let bottom = b.mp(e_bottom, e_true)?;
    let proof = b.finish_at(bottom);
    check_proof(&proof, p, &extended)
        .is_accepted()
        .then_some((extended, proof, s, t))
}

fn goal_consequent(goal: &Goal) -> String {
    match goal {
        Goal::Exists {
            body: Formula::Implies(_, e),
            ..
        } => {
            if e.is_binary() {
                format!("({e})")
            } else {
                e.to_string()
            }
        }
        _ => String::new(),
    }
}

/// Searches for the goal within bounds; if none is found the report is
/// upgraded when `countermodel` checks out or a refutation exists.
pub fn check_nonderivability_report(
    spec: &ConstantSpec,
    profile: LogicProfile,
    goal: &Goal,
    bounds: SearchBounds,
    countermodel: Option<&ModularModel>,
) -> NonderivabilityReport {
    let term_size = bounds.term_size;
    let filter = |f: &Formula| goal.matches(f, term_size);
    let params = ForwardParams::new(bounds.depth, bounds.size);
    let d = derive_forward_with(spec, profile, Some(&filter), &params);
    let mut report = NonderivabilityReport {
        goal: goal.to_string(),
        outcome: Outcome::NoProofWithinBounds,
        depth: bounds.depth,
        size: bounds.size,
        term_size,
        derived: d.len(),
        truncated: d.truncated(),
        message: String::new(),
        proof: None,
        refutation: None,
        countermodel_terms: 0,
    };
    let found = d.matching(&filter).next().cloned();
    if let Some(f) = &found {
        report.outcome = Outcome::Derived;
        report.proof = d.proof_of(f);
        report.message = format!(
            "proof found: `{f}` within depth {}, size {}",
            bounds.depth, bounds.size
        );
        return report;
    }
    let none = match goal {
        Goal::Exists { var, sign, body } => {
            let sign = match sign {
                Some(Sign::Positive) => "positive ",
                Some(Sign::Negative) => "negative ",
                _ => "",
            };
            let shown = Formula::just(Term::leaf(var, Sign::Unsigned), body.clone());
            format!("no {sign}{shown} within bounds (terms up to size {term_size})")
        }
        Goal::Exact(g) => format!("no proof of `{g}` within bounds"),
    };
    report.message = format!("{none} (depth {}, size {})", bounds.depth, bounds.size);
    if let Some((ext, proof, s, t)) = sign_disjointness_refutation(spec, goal) {
        report.outcome = Outcome::Refuted;
        report.message = format!(
            "{none}; refuted via sign disjointness: any such j gives `[j . {s}]:{e}` positively \
             while `{t}:{e}` is negative, deriving _|_ in {} checked lines",
            proof.len(),
            e = goal_consequent(goal)
        );
        report.refutation = Some((ext, proof));
        return report;
    }
    if let Some(model) = countermodel {
        if let Some(n) = countermodel_rules_out(model, spec, profile, goal, bounds) {
            report.outcome = Outcome::RefutedByCountermodel;
            report.countermodel_terms = n;
            report.message = format!("{none}; refuted by countermodel ({n} terms checked)");
        }
    }
    report
}
