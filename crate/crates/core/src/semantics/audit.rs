//! Closure-condition audits over a finite term universe.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use super::model::{eval, set_product, ModularModel};
use crate::exec::Execution;
use crate::logics::LogicProfile;
use crate::syntax::{cmp_terms, Formula, Sign, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Condition {
    /// `s*·t* ⊆ [s.t]*`
    Application,
    /// `s* ∪ t* ⊆ [s+t]*`
    Sum,
    /// `s*⊗t* ⊆ [s&t]*`
    Pairing,
    /// every member is false (all terms in DL, negative terms in the fused logic)
    Denial,
    /// every member of a positive set is true
    Factivity,
    /// `P ∈ t*` implies `t:P ∈ (!t)*`
    Introspection,
}

impl Condition {
    pub fn label(self, profile: LogicProfile) -> &'static str {
        use Condition::*;
        match (profile, self) {
            (LogicProfile::Fused, Application) => "DLP1",
            (LogicProfile::Fused, Sum) => "DLP2",
            (LogicProfile::Fused, Pairing) => "DLP3",
            (LogicProfile::Fused, Denial) => "DLP4",
            (LogicProfile::Fused, Factivity) => "DLP5",
            (LogicProfile::Fused, Introspection) => "DLP6",
            (_, Application) => "J1",
            (_, Sum) => "J2",
            (_, Pairing) => "J3",
            (_, Denial) => "J4",
            (_, Factivity) => "FACT",
            (_, Introspection) => "INTRO",
        }
    }

    pub fn applicable(profile: LogicProfile) -> &'static [Condition] {
        use Condition::*;
        match profile {
            LogicProfile::Jl => &[Application, Sum],
            LogicProfile::Dl => &[Application, Sum, Pairing, Denial],
            LogicProfile::Dl0 => &[Application, Sum, Denial],
            LogicProfile::Lp => &[Application, Sum, Factivity, Introspection],
            LogicProfile::Fused => &[Application, Sum, Pairing, Denial, Factivity, Introspection],
        }
    }
}

/// A failed inclusion: `formula` should be in (or, for the truth conditions,
/// should not be in) the set of the last term listed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub condition: Condition,
    pub terms: Vec<String>,
    pub formula: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionStatus {
    pub condition: Condition,
    pub label: &'static str,
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl ConditionStatus {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub profile: LogicProfile,
    pub universe: usize,
    pub conditions: Vec<ConditionStatus>,
    /// Compounds whose parts are missing from the universe, and unlisted
    /// compounds that closure would force to be nonempty.
    pub warnings: Vec<String>,
}

impl ConditionReport {
    pub fn is_clean(&self) -> bool {
        self.conditions.iter().all(ConditionStatus::holds)
    }

    pub fn violations(&self) -> impl Iterator<Item = &Violation> {
        self.conditions.iter().flat_map(|c| c.violations.iter())
    }

    pub fn status(&self, c: Condition) -> Option<&ConditionStatus> {
        self.conditions.iter().find(|s| s.condition == c)
    }
}

const WARNING_CAP: usize = 20;

fn within(horizon: Option<usize>, f: &Formula) -> bool {
    horizon.is_none_or(|h| f.size() <= h)
}

/// Checks one listed term against the conditions that mention it as the
/// compound (or, for the truth conditions, as the term itself).
fn audit_term(
    model: &ModularModel,
    t: &Term,
    conds: &[Condition],
    out: &mut Vec<(Condition, usize, Vec<Violation>)>,
) {
    let mut push = |c: Condition, checked: usize, v: Vec<Violation>| out.push((c, checked, v));
    let set = model.set_of(t);
    let printed = || t.to_string();
    let fused = model.profile == LogicProfile::Fused;
    for &c in conds {
        match (c, t) {
            (Condition::Application, Term::App(l, r)) => {
                let need = set_product(model.set_of(l), model.set_of(r));
                let v = need
                    .iter()
                    .filter(|q| !set.contains(q))
                    .map(|q| Violation {
                        condition: c,
                        terms: vec![l.to_string(), r.to_string(), printed()],
                        formula: q.to_string(),
                    })
                    .collect();
                push(c, need.len(), v);
            }
            (Condition::Sum, Term::Sum(l, r)) => {
                let mut v = Vec::new();
                let mut n = 0;
                for part in [l, r] {
                    for q in model.set_of(part) {
                        n += 1;
                        if !set.contains(q) {
                            v.push(Violation {
                                condition: c,
                                terms: vec![part.to_string(), printed()],
                                formula: q.to_string(),
                            });
                        }
                    }
                }
                push(c, n, v);
            }
            (Condition::Pairing, Term::Pair(l, r)) => {
                let mut v = Vec::new();
                let mut n = 0;
                let (ls, rs) = (model.set_of(l), model.set_of(r));
                for p in ls {
                    for q in rs {
                        if let Some(h) = model.horizon {
                            if p.size() + q.size() + 1 > h {
                                continue;
                            }
                        }
                        n += 1;
                        let conj = Formula::and(p.clone(), q.clone());
                        if !set.contains(&conj) {
                            v.push(Violation {
                                condition: c,
                                terms: vec![l.to_string(), r.to_string(), printed()],
                                formula: conj.to_string(),
                            });
                        }
                    }
                }
                push(c, n, v);
            }
            (Condition::Denial, _) if !fused || t.sign() == Sign::Negative => {
                let v = set
                    .iter()
                    .filter(|p| eval(model, p))
                    .map(|p| Violation {
                        condition: c,
                        terms: vec![printed()],
                        formula: p.to_string(),
                    })
                    .collect();
                push(c, set.len(), v);
            }
            (Condition::Factivity, _) if !fused || t.sign() == Sign::Positive => {
                let v = set
                    .iter()
                    .filter(|p| !eval(model, p))
                    .map(|p| Violation {
                        condition: c,
                        terms: vec![printed()],
                        formula: p.to_string(),
                    })
                    .collect();
                push(c, set.len(), v);
            }
            (Condition::Introspection, Term::Bang(inner)) => {
                let mut v = Vec::new();
                let mut n = 0;
                for p in model.set_of(inner) {
                    let lifted = Formula::just((**inner).clone(), p.clone());
                    if !within(model.horizon, &lifted) {
                        continue;
                    }
                    n += 1;
                    if !set.contains(&lifted) {
                        v.push(Violation {
                            condition: c,
                            terms: vec![inner.to_string(), printed()],
                            formula: lifted.to_string(),
                        });
                    }
                }
                push(c, n, v);
            }
            _ => {}
        }
    }
}

/// Audits every applicable condition over `universe`.
pub fn audit(model: &ModularModel, universe: &[Term]) -> ConditionReport {
    audit_with(model, universe, Execution::default())
}

pub fn audit_with(model: &ModularModel, universe: &[Term], exec: Execution) -> ConditionReport {
    let profile = model.profile;
    let conds = Condition::applicable(profile);
    let mut terms: Vec<Term> = universe.to_vec();
    terms.sort_by(cmp_terms);
    terms.dedup();

    let per_term = exec.map(&terms, |t| {
        let mut out = Vec::new();
        audit_term(model, t, conds, &mut out);
        out
    });

    let mut conditions: Vec<ConditionStatus> = conds
        .iter()
        .map(|&c| ConditionStatus {
            condition: c,
            label: c.label(profile),
            checked: 0,
            violations: Vec::new(),
        })
        .collect();
    for results in per_term {
        for (c, n, v) in results {
            let status = conditions
                .iter_mut()
                .find(|s| s.condition == c)
                .expect("applicable");
            status.checked += n;
            status.violations.extend(v);
        }
    }

    ConditionReport {
        profile,
        universe: terms.len(),
        conditions,
        warnings: closure_warnings(model, &terms),
    }
}

fn closure_warnings(model: &ModularModel, terms: &[Term]) -> Vec<String> {
    let listed: HashSet<&Term> = terms.iter().collect();
    let mut warnings = Vec::new();
    for t in terms {
        for child in t.children() {
            if !listed.contains(child) {
                warnings.push(format!(
                    "`{t}` is audited but its part `{child}` is not in the universe"
                ));
            }
        }
    }
    let ops = model.profile.operators();
    let nonempty: Vec<&Term> = terms
        .iter()
        .filter(|t| !model.set_of(t).is_empty())
        .collect();
    let mut unlisted = BTreeSet::new();
    'outer: for s in &nonempty {
        for t in terms {
            if ops.sum && (model.profile != LogicProfile::Fused || s.sign() == t.sign()) {
                for cand in [
                    Term::sum((*s).clone(), t.clone()),
                    Term::sum(t.clone(), (*s).clone()),
                ] {
                    if !listed.contains(&cand) {
                        unlisted.insert(cand.to_string());
                    }
                }
            }
            if unlisted.len() >= WARNING_CAP {
                break 'outer;
            }
        }
    }
    let capped = unlisted.len() >= WARNING_CAP;
    for c in unlisted {
        warnings.push(format!(
            "universe is not closed: `{c}` is unlisted but would need a nonempty set"
        ));
    }
    if capped {
        warnings.push(format!(
            "further unlisted compounds omitted (showing {WARNING_CAP})"
        ));
    }
    warnings
}

/// The universe a model is audited on, and whether it is the model's own
/// term list. A model whose listed terms are closed under parts is a finite
/// fragment and is audited on exactly those; otherwise on
/// [`default_universe`].
pub fn audit_universe(model: &ModularModel) -> (Vec<Term>, bool) {
    let own = model.terms();
    let closed = !own.is_empty()
        && own
            .iter()
            .all(|t| t.children().iter().all(|c| model.interp.contains_key(*c)));
    if closed {
        (own, true)
    } else {
        (default_universe(model), false)
    }
}

/// Terms of the model plus every compound of depth one over them that the
/// profile allows.
pub fn default_universe(model: &ModularModel) -> Vec<Term> {
    let base = model.terms();
    let ops = model.profile.operators();
    let mut out: BTreeSet<Term> = base.iter().cloned().collect();
    for s in &base {
        for t in &base {
            for cand in [
                Term::app(s.clone(), t.clone()),
                Term::sum(s.clone(), t.clone()),
            ] {
                if model.profile.check_term(&cand).is_ok() {
                    out.insert(cand);
                }
            }
            if ops.pair {
                let cand = Term::pair(s.clone(), t.clone());
                if model.profile.check_term(&cand).is_ok() {
                    out.insert(cand);
                }
            }
        }
        if ops.bang {
            let cand = Term::bang(s.clone());
            if model.profile.check_term(&cand).is_ok() {
                out.insert(cand);
            }
        }
    }
    let mut v: Vec<Term> = out.into_iter().collect();
    v.sort_by(cmp_terms);
    v
}
