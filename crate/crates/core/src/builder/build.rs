//! The staged construction over a finite prefix of the enumeration.
//!
//! Stages run over `E = U ∪ {t:Q : t ∈ T, Q ∈ U}` in enumeration order,
//! where `T` holds the terms up to the term bound and `U` the formulas up to
//! the formula bound. Every membership `Q ∈ t*` is settled at the stage of
//! `Q` or of `t:Q`, both of which precede any stage that reads it, so staged
//! values never go stale.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use super::functional::{FireContext, Functional};
use crate::exec::Execution;
use crate::logics::LogicProfile;
use crate::semantics::{eval, respects, ModularModel};
use crate::specifications::ConstantSpec;
use crate::syntax::{enumerate_formulas, enumerate_terms, Enumeration, Formula, Sign, Term};

/// How far pairing closure is carried.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairingClosure {
    /// Only conjunctions within the formula bound; the model records the
    /// bound as its horizon.
    #[default]
    Enumerated,
    /// Every conjunction over the enumerated terms, whatever its size.
    Full,
}

#[derive(Clone, Debug)]
pub struct BuildParams {
    pub profile: LogicProfile,
    pub valuation: BTreeMap<String, bool>,
    pub vars: Vec<String>,
    pub leaves: Vec<Term>,
    pub fm_size: usize,
    pub tm_size: usize,
    pub functional: Functional,
    pub pairing: PairingClosure,
}

impl BuildParams {
    pub fn new(profile: LogicProfile, vars: &[&str], fm_size: usize, tm_size: usize) -> Self {
        BuildParams {
            profile,
            valuation: BTreeMap::new(),
            vars: vars.iter().map(|v| v.to_string()).collect(),
            leaves: vec![
                Term::leaf("x", Sign::Unsigned),
                Term::leaf("y", Sign::Unsigned),
            ],
            fm_size,
            tm_size,
            functional: Functional::ConstZero,
            pairing: PairingClosure::Enumerated,
        }
    }

    pub fn with_functional(mut self, f: Functional) -> Self {
        self.functional = f;
        self
    }

    pub fn with_leaves(mut self, leaves: &[&str]) -> Self {
        self.leaves = leaves
            .iter()
            .map(|l| Term::leaf(l, Sign::Unsigned))
            .collect();
        self
    }

    pub fn set(mut self, var: &str, value: bool) -> Self {
        self.valuation.insert(var.to_string(), value);
        self
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error("the staged construction is defined for DL and DL0, not {0}")]
    Profile(LogicProfile),
    #[error("bounds must be at least 1")]
    ZeroBound,
    #[error("bounds too small: `{formula}` lies outside the enumeration ({detail})")]
    BoundsTooSmall { formula: String, detail: String },
    #[error("no valuation of {vars:?} yields a model respecting the constant specification")]
    Unrealizable { vars: Vec<String> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Case {
    #[serde(rename = "1a")]
    Variable,
    #[serde(rename = "2a")]
    Connective,
    #[serde(rename = "3a")]
    Justified,
    #[serde(rename = "prologue-a")]
    PrologueSum,
    #[serde(rename = "prologue-b")]
    ProloguePairing,
    #[serde(rename = "closure")]
    Closure,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceEvent {
    pub stage: usize,
    pub case: Case,
    pub term: String,
    pub formula: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StageTrace {
    pub stages: usize,
    pub terms: usize,
    pub formulas: usize,
    pub events: Vec<TraceEvent>,
    /// Stages whose recorded value differs from the final evaluation.
    pub mismatches: usize,
}

/// The finite fragment a build runs over.
pub struct Fragment {
    pub terms: Enumeration<Term>,
    pub formulas: Enumeration<Formula>,
}

impl Fragment {
    pub fn new(params: &BuildParams) -> Self {
        let terms = enumerate_terms(params.profile.operators(), &params.leaves, params.tm_size);
        let formulas = enumerate_formulas(&params.vars, terms.items(), params.fm_size);
        Fragment { terms, formulas }
    }

    /// Why `f` cannot be evaluated faithfully on this fragment, if it cannot.
    pub fn outside(&self, f: &Formula) -> Option<String> {
        let mut reason = None;
        f.for_each_subformula(&mut |g| {
            if reason.is_some() {
                return;
            }
            if let Formula::Just(t, body) = g {
                if !self.terms.contains(t) {
                    reason = Some(format!("term `{t}` exceeds the term bound"));
                } else if !self.formulas.contains(body) {
                    reason = Some(format!("`{body}` exceeds the formula bound"));
                }
            }
        });
        reason
    }
}

fn check_params(params: &BuildParams) -> Result<(), BuildError> {
    if !matches!(params.profile, LogicProfile::Dl | LogicProfile::Dl0) {
        return Err(BuildError::Profile(params.profile));
    }
    if params.fm_size == 0 || params.tm_size == 0 {
        return Err(BuildError::ZeroBound);
    }
    Ok(())
}

/// Runs the construction and returns the model with its trace.
pub fn build(params: &BuildParams) -> Result<(ModularModel, StageTrace), BuildError> {
    check_params(params)?;
    Ok(build_on(params, &Fragment::new(params)))
}

fn build_on(params: &BuildParams, frag: &Fragment) -> (ModularModel, StageTrace) {
    let terms = frag.terms.items();
    let universe = &frag.formulas;

    let mut stages: Vec<Formula> = universe.items().to_vec();
    for t in terms {
        for q in universe.items() {
            let f = Formula::just(t.clone(), q.clone());
            if !universe.contains(&f) {
                stages.push(f);
            }
        }
    }
    let stages = Enumeration::from_formulas(stages);

    let valuation: BTreeMap<String, bool> = params
        .vars
        .iter()
        .map(|v| (v.clone(), params.valuation.get(v).copied().unwrap_or(false)))
        .chain(params.valuation.iter().map(|(k, v)| (k.clone(), *v)))
        .collect();
    let printed: Vec<String> = terms.iter().map(|t| t.to_string()).collect();
    let mut sets: Vec<BTreeSet<Formula>> = vec![BTreeSet::new(); terms.len()];
    let mut value: HashMap<Formula, bool> = HashMap::with_capacity(stages.len());
    let mut trace = StageTrace {
        stages: stages.len(),
        terms: terms.len(),
        formulas: universe.len(),
        ..StageTrace::default()
    };
    let f = &params.functional;

    for (i, phi) in stages.items().iter().enumerate() {
        let stage = i + 1;
        let v = |g: &Formula, value: &HashMap<Formula, bool>| value[g];
        match phi {
            Formula::Just(t, q) => {
                let gamma = frag.terms.index_of(t).expect("stage terms are enumerated");
                let add = |case, sets: &mut Vec<BTreeSet<Formula>>, trace: &mut StageTrace| {
                    if sets[gamma].insert((**q).clone()) {
                        trace.events.push(TraceEvent {
                            stage,
                            case,
                            term: printed[gamma].clone(),
                            formula: q.to_string(),
                        });
                    }
                };
                match &**t {
                    Term::Sum(a, b) => {
                        let (ia, ib) = (frag.terms.index_of(a), frag.terms.index_of(b));
                        let inherited = [ia, ib].iter().flatten().any(|&k| sets[k].contains(&**q));
                        if inherited {
                            add(Case::PrologueSum, &mut sets, &mut trace);
                        }
                    }
                    Term::Pair(a, b) => {
                        if let Formula::And(l, r) = &**q {
                            let (ia, ib) = (frag.terms.index_of(a), frag.terms.index_of(b));
                            if let (Some(ia), Some(ib)) = (ia, ib) {
                                if sets[ia].contains(&**l) && sets[ib].contains(&**r) {
                                    add(Case::ProloguePairing, &mut sets, &mut trace);
                                }
                            }
                        }
                    }
                    _ => {}
                }
                if !v(q, &value) {
                    let ctx = FireContext {
                        valuation: &valuation,
                        stage,
                        formula: phi,
                        term: t,
                        term_index: gamma,
                        contribution: q,
                    };
                    if f.fires(&ctx) {
                        add(Case::Justified, &mut sets, &mut trace);
                    }
                }
                value.insert(phi.clone(), sets[gamma].contains(&**q));
            }
            _ => {
                let (val, case) = match phi {
                    Formula::Bottom => (false, Case::Variable),
                    Formula::Var(name) => (
                        valuation.get(&**name).copied().unwrap_or(false),
                        Case::Variable,
                    ),
                    Formula::Not(a) => (!v(a, &value), Case::Connective),
                    Formula::And(a, b) => (v(a, &value) && v(b, &value), Case::Connective),
                    Formula::Or(a, b) => (v(a, &value) || v(b, &value), Case::Connective),
                    Formula::Implies(a, b) => (!v(a, &value) || v(b, &value), Case::Connective),
                    Formula::Just(..) => unreachable!(),
                };
                value.insert(phi.clone(), val);
                if !val {
                    for (gamma, t) in terms.iter().enumerate() {
                        let ctx = FireContext {
                            valuation: &valuation,
                            stage,
                            formula: phi,
                            term: t,
                            term_index: gamma,
                            contribution: phi,
                        };
                        if f.fires(&ctx) && sets[gamma].insert(phi.clone()) {
                            trace.events.push(TraceEvent {
                                stage,
                                case,
                                term: printed[gamma].clone(),
                                formula: phi.to_string(),
                            });
                        }
                    }
                }
            }
        }
    }

    if params.pairing == PairingClosure::Full {
        let stage = stages.len() + 1;
        for (gamma, t) in terms.iter().enumerate() {
            let extra: Vec<Formula> = match t {
                Term::Sum(a, b) => [a, b]
                    .iter()
                    .filter_map(|c| frag.terms.index_of(c))
                    .flat_map(|k| sets[k].iter().cloned())
                    .collect(),
                Term::Pair(a, b) => match (frag.terms.index_of(a), frag.terms.index_of(b)) {
                    (Some(ia), Some(ib)) => {
                        let mut out = Vec::new();
                        for l in &sets[ia] {
                            for r in &sets[ib] {
                                out.push(Formula::and(l.clone(), r.clone()));
                            }
                        }
                        out
                    }
                    _ => Vec::new(),
                },
                _ => Vec::new(),
            };
            for g in extra {
                if !sets[gamma].contains(&g) {
                    trace.events.push(TraceEvent {
                        stage,
                        case: Case::Closure,
                        term: printed[gamma].clone(),
                        formula: g.to_string(),
                    });
                    sets[gamma].insert(g);
                }
            }
        }
    }

    let mut model = ModularModel::new(params.profile);
    model.valuation = valuation;
    model.interp = terms.iter().cloned().zip(sets).collect();
    model.horizon = match params.pairing {
        PairingClosure::Enumerated => Some(params.fm_size),
        PairingClosure::Full => None,
    };
    model.provenance = format!(
        "build: {} functional, formula size {}, term size {}, {} stages",
        f.name(),
        params.fm_size,
        params.tm_size,
        stages.len()
    );
    trace.mismatches = stages
        .items()
        .iter()
        .filter(|phi| eval(&model, phi) != value[*phi])
        .count();
    (model, trace)
}

/// Builds a model respecting `spec`: its alphabet is merged into the
/// parameters, spec positions are forced in the functional, and valuations
/// of its variables are tried seed first, then in binary order.
pub fn realize_spec(spec: &ConstantSpec, params: &BuildParams) -> Result<ModularModel, BuildError> {
    realize_spec_with(spec, params, Execution::default()).map(|(m, _)| m)
}

pub fn realize_spec_with(
    spec: &ConstantSpec,
    params: &BuildParams,
    exec: Execution,
) -> Result<(ModularModel, StageTrace), BuildError> {
    check_params(params)?;
    let mut p = params.clone();
    let spec_vars = spec.prop_vars();
    for v in &spec_vars {
        if !p.vars.contains(v) {
            p.vars.push(v.clone());
        }
    }
    for l in spec.leaves() {
        if !p.leaves.contains(&l) {
            p.leaves.push(l);
        }
    }
    p.functional = Functional::Realizing(spec.clone(), Box::new(params.functional.clone()));
    let frag = Fragment::new(&p);
    for f in spec.formulas() {
        if let Some(detail) = frag.outside(f) {
            return Err(BuildError::BoundsTooSmall {
                formula: f.to_string(),
                detail,
            });
        }
    }
    let n = spec_vars.len().min(20);
    let seed: usize = spec_vars
        .iter()
        .take(n)
        .enumerate()
        .filter(|(_, v)| p.valuation.get(*v).copied().unwrap_or(false))
        .map(|(k, _)| 1 << (n - 1 - k))
        .sum();
    let candidates = 1usize << n;
    let pick = |i: usize| {
        if i == 0 {
            seed
        } else if i <= seed {
            i - 1
        } else {
            i
        }
    };
    let hit = exec.find_first(candidates, |i| {
        let bits = pick(i);
        let mut q = p.clone();
        for (k, v) in spec_vars.iter().take(n).enumerate() {
            q.valuation.insert(v.clone(), bits >> (n - 1 - k) & 1 == 1);
        }
        let (model, trace) = build_on(&q, &frag);
        respects(&model, spec).then_some((model, trace))
    });
    hit.map(|(_, r)| r)
        .ok_or(BuildError::Unrealizable { vars: spec_vars })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::audit;

    fn dl(src: &str) -> Formula {
        LogicProfile::Dl.parse_formula(src).unwrap()
    }

    #[test]
    fn const_zero_is_trivial() {
        let (m, trace) = build(&BuildParams::new(LogicProfile::Dl, &["P", "Q"], 3, 3)).unwrap();
        assert!(m.interp.values().all(BTreeSet::is_empty));
        assert!(trace.events.is_empty());
        assert_eq!(trace.mismatches, 0);
    }

    #[test]
    fn const_one_is_maximal() {
        let params =
            BuildParams::new(LogicProfile::Dl, &["P"], 4, 3).with_functional(Functional::ConstOne);
        let (m, trace) = build(&params).unwrap();
        let frag = Fragment::new(&params);
        let false_ones: BTreeSet<Formula> = frag
            .formulas
            .items()
            .iter()
            .filter(|f| !eval(&m, f))
            .cloned()
            .collect();
        for t in frag.terms.items() {
            assert_eq!(m.set_of(t), &false_ones, "{t}");
        }
        assert!(audit(&m, frag.terms.items()).is_clean());
        assert_eq!(trace.mismatches, 0);
    }

    #[test]
    fn plus_syntactic_sum_is_strict() {
        let params = BuildParams::new(LogicProfile::Dl, &["P"], 3, 3)
            .with_functional(Functional::PlusSyntactic);
        let (m, _) = build(&params).unwrap();
        assert!(m.eval(&dl("[x+y]:P")));
        assert!(!m.eval(&dl("x:P")) && !m.eval(&dl("y:P")));
        assert!(!m.eval(&dl("[x+y]:P -> (x:P \\/ y:P)")));
    }

    #[test]
    fn realizes_simple_spec() {
        let spec = ConstantSpec::close(&[dl("e1:R")], LogicProfile::Dl).unwrap();
        let params = BuildParams::new(LogicProfile::Dl, &[], 3, 3);
        let m = realize_spec(&spec, &params).unwrap();
        assert!(respects(&m, &spec));
        assert!(!m.var("R"));
        assert!(m.justifies(&Term::leaf("e1", Sign::Unsigned), &dl("R")));
    }

    #[test]
    fn empty_spec_gives_trivial_model() {
        let m = realize_spec(
            &ConstantSpec::empty(LogicProfile::Dl),
            &BuildParams::new(LogicProfile::Dl, &["P"], 3, 3),
        )
        .unwrap();
        assert!(m.interp.values().all(BTreeSet::is_empty));
    }

    #[test]
    fn bounds_too_small() {
        let spec = ConstantSpec::close(&[dl("e1:(R -> R -> R)")], LogicProfile::Dl).unwrap();
        let err = realize_spec(&spec, &BuildParams::new(LogicProfile::Dl, &[], 3, 3)).unwrap_err();
        assert!(
            matches!(err, BuildError::BoundsTooSmall { formula, .. } if formula.starts_with("e1:"))
        );
    }

    #[test]
    fn full_pairing_closure_goes_past_the_bound() {
        let spec = ConstantSpec::close(&[dl("e1:R")], LogicProfile::Dl).unwrap();
        let mut params = BuildParams::new(LogicProfile::Dl, &[], 3, 7).with_leaves(&[]);
        params.pairing = PairingClosure::Full;
        let m = realize_spec(&spec, &params).unwrap();
        let t = LogicProfile::Dl.parse_term("[[e1&e1]&[e1&e1]]").unwrap();
        assert!(m.justifies(&t, &dl("(R /\\ R) /\\ (R /\\ R)")));
        assert!(m.horizon.is_none());
        assert!(audit(&m, &m.terms()).is_clean());
    }

    #[test]
    fn fused_is_rejected() {
        assert!(matches!(
            build(&BuildParams::new(LogicProfile::Fused, &[], 2, 2)),
            Err(BuildError::Profile(LogicProfile::Fused))
        ));
    }
}
