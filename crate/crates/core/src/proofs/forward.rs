//! Bounded forward chaining.
//!
//! Each round closes the working set under modus ponens and then adds one
//! pass of axiom instances. Bindings are drawn from pools built from the
//! working set: subformulas of the constant specification (any size), derived
//! subformulas up to the size bound, and terms enumerated over the leaves of
//! the constant specification. Per-schema budgets keep a round finite; when a budget
//! cuts a pool short the derivation is marked truncated.

use std::collections::{BTreeSet, HashMap};

use indexmap::IndexMap;

use super::proof::{Proof, ProofLine, Rule};
use crate::exec::Execution;
use crate::logics::{instantiate, Binding, LogicProfile, SchemaId, SignConstraint};
use crate::specifications::ConstantSpec;
use crate::syntax::{cmp_formulas, cmp_terms, enumerate_terms, Formula, Sign, Term};

#[derive(Clone, Debug)]
pub struct ForwardParams {
    pub depth: usize,
    pub size_bound: usize,
    /// Instances tried per schema per round.
    pub schema_budget: usize,
    /// Stop once this many formulas are known.
    pub max_formulas: usize,
    /// Propositional variables added to the formula pool.
    pub extra_vars: Vec<String>,
    /// Leaves added to the term enumeration.
    pub extra_leaves: Vec<Term>,
    pub exec: Execution,
}

impl ForwardParams {
    pub fn new(depth: usize, size_bound: usize) -> Self {
        ForwardParams {
            depth,
            size_bound,
            schema_budget: 4096,
            max_formulas: 250_000,
            extra_vars: Vec::new(),
            extra_leaves: Vec::new(),
            exec: Execution::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Origin {
    Hypothesis(usize),
    Axiom(SchemaId, Binding),
    /// Positions of the major and minor premise in the derivation.
    ModusPonens(usize, usize),
}

#[derive(Clone, Debug)]
pub struct Derivation {
    profile: LogicProfile,
    entries: IndexMap<Formula, Origin>,
    rounds: usize,
    truncated: bool,
}

pub type GoalFilter<'a> = &'a (dyn Fn(&Formula) -> bool + Sync);

impl Derivation {
    pub fn profile(&self) -> LogicProfile {
        self.profile
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.entries.contains_key(f)
    }

    /// Derived formulas in the order they were found.
    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.entries.keys()
    }

    pub fn origin(&self, f: &Formula) -> Option<&Origin> {
        self.entries.get(f)
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    /// A budget cut some pool or the formula cap was reached.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    /// Every result is a bounded under-approximation.
    pub fn is_bounded(&self) -> bool {
        true
    }

    pub fn matching<'a>(&'a self, goal: GoalFilter<'a>) -> impl Iterator<Item = &'a Formula> + 'a {
        self.entries.keys().filter(move |f| goal(f))
    }

    /// A checkable proof of `f`, containing only the lines it depends on.
    pub fn proof_of(&self, f: &Formula) -> Option<Proof> {
        let goal = self.entries.get_index_of(f)?;
        let mut needed = BTreeSet::new();
        let mut stack = vec![goal];
        while let Some(i) = stack.pop() {
            if !needed.insert(i) {
                continue;
            }
            if let Some((_, Origin::ModusPonens(a, b))) = self.entries.get_index(i) {
                stack.push(*a);
                stack.push(*b);
            }
        }
        let mut remap = HashMap::new();
        let mut proof = Proof::new(self.profile);
        for i in needed {
            let (formula, origin) = self.entries.get_index(i).expect("index in range");
            let rule = match origin {
                Origin::Hypothesis(h) => Rule::Hypothesis { index: *h },
                Origin::Axiom(schema, binding) => Rule::Axiom {
                    schema: *schema,
                    binding: binding.clone(),
                },
                Origin::ModusPonens(a, b) => Rule::ModusPonens {
                    major: remap[a],
                    minor: remap[b],
                },
            };
            remap.insert(i, proof.lines.len());
            proof.lines.push(ProofLine {
                rule,
                formula: formula.clone(),
            });
        }
        Some(proof)
    }
}

struct Engine<'a> {
    profile: LogicProfile,
    spec: &'a ConstantSpec,
    params: &'a ForwardParams,
    entries: IndexMap<Formula, Origin>,
    by_antecedent: HashMap<Formula, Vec<usize>>,
    processed: usize,
    truncated: bool,
    spec_formulas: Vec<Formula>,
    spec_terms: Vec<Term>,
    enumerated_terms: Vec<Term>,
}

fn sorted_formulas(set: BTreeSet<Formula>) -> Vec<Formula> {
    let mut v: Vec<Formula> = set.into_iter().collect();
    v.sort_by(cmp_formulas);
    v
}

fn sorted_terms(set: BTreeSet<Term>) -> Vec<Term> {
    let mut v: Vec<Term> = set.into_iter().collect();
    v.sort_by(cmp_terms);
    v
}

/// Largest `n` with `n^k <= budget`.
fn int_root(budget: usize, k: usize) -> usize {
    if k == 1 {
        return budget;
    }
    let mut n = (budget as f64).powf(1.0 / k as f64).floor() as usize;
    while (n + 1).checked_pow(k as u32).is_some_and(|p| p <= budget) {
        n += 1;
    }
    while n > 1 && n.checked_pow(k as u32).is_none_or(|p| p > budget) {
        n -= 1;
    }
    n.max(1)
}

impl<'a> Engine<'a> {
    fn new(spec: &'a ConstantSpec, profile: LogicProfile, params: &'a ForwardParams) -> Self {
        let mut fs = BTreeSet::new();
        let mut ts = BTreeSet::new();
        for f in spec.formulas() {
            f.for_each_subformula(&mut |g| {
                fs.insert(g.clone());
            });
            f.for_each_term(&mut |t| {
                t.for_each_subterm(&mut |s| {
                    ts.insert(s.clone());
                })
            });
        }
        let mut leaves: Vec<Term> = ts.iter().filter(|t| t.is_leaf()).cloned().collect();
        leaves.extend(params.extra_leaves.iter().cloned());
        let enumerated = enumerate_terms(profile.operators(), &leaves, params.size_bound);
        Engine {
            profile,
            spec,
            params,
            entries: IndexMap::new(),
            by_antecedent: HashMap::new(),
            processed: 0,
            truncated: false,
            spec_formulas: sorted_formulas(fs),
            spec_terms: sorted_terms(ts),
            enumerated_terms: enumerated.items().to_vec(),
        }
    }

    fn full(&self) -> bool {
        self.entries.len() >= self.params.max_formulas
    }

    fn add(&mut self, f: Formula, origin: Origin) -> bool {
        if self.entries.contains_key(&f) {
            return false;
        }
        if self.full() {
            self.truncated = true;
            return false;
        }
        self.entries.insert(f, origin);
        true
    }

    fn mp_fixpoint(&mut self) {
        while self.processed < self.entries.len() {
            let i = self.processed;
            self.processed += 1;
            let f = self.entries.get_index(i).expect("in range").0.clone();
            if let Formula::Implies(a, b) = &f {
                if let Some(j) = self.entries.get_index_of(&**a) {
                    if j < i {
                        self.add((**b).clone(), Origin::ModusPonens(i, j));
                    }
                }
                self.by_antecedent.entry((**a).clone()).or_default().push(i);
            }
            if let Some(imps) = self.by_antecedent.get(&f).cloned() {
                for j in imps {
                    if let Formula::Implies(_, b) = self.entries.get_index(j).expect("in range").0 {
                        let b = (**b).clone();
                        self.add(b, Origin::ModusPonens(j, i));
                    }
                }
            }
        }
    }

    fn pools(&self) -> (Vec<Formula>, Vec<Term>) {
        let bound = self.params.size_bound;
        let mut seen = BTreeSet::new();
        let mut formulas = Vec::new();
        let mut push_f = |f: Formula, out: &mut Vec<Formula>| {
            if seen.insert(f.clone()) {
                out.push(f);
            }
        };
        push_f(Formula::Bottom, &mut formulas);
        for v in &self.params.extra_vars {
            push_f(Formula::var(v), &mut formulas);
        }
        for f in &self.spec_formulas {
            push_f(f.clone(), &mut formulas);
        }
        let mut derived_f = BTreeSet::new();
        let mut derived_t = BTreeSet::new();
        for f in self.entries.keys() {
            f.for_each_subformula(&mut |g| {
                if g.size() <= bound {
                    derived_f.insert(g.clone());
                }
            });
            f.for_each_term(&mut |t| {
                t.for_each_subterm(&mut |s| {
                    if s.size() <= bound {
                        derived_t.insert(s.clone());
                    }
                })
            });
        }
        for f in sorted_formulas(derived_f) {
            push_f(f, &mut formulas);
        }

        let mut seen_t = BTreeSet::new();
        let mut terms = Vec::new();
        let rest: BTreeSet<Term> = self
            .enumerated_terms
            .iter()
            .cloned()
            .chain(derived_t)
            .collect();
        for t in self.spec_terms.iter().cloned().chain(sorted_terms(rest)) {
            if self.profile.check_term(&t).is_ok() && seen_t.insert(t.clone()) {
                terms.push(t);
            }
        }
        (formulas, terms)
    }

    fn instantiation_pass(&mut self) {
        let (formulas, terms) = self.pools();
        let profile = self.profile;
        let budget = self.params.schema_budget.max(1);
        let mut tasks = Vec::new();
        for id in profile.schemas() {
            let ax = id.schema();
            let term_pool: Vec<Term> = match (profile, ax.sign) {
                (LogicProfile::Fused, SignConstraint::Negative) => terms
                    .iter()
                    .filter(|t| t.sign() == Sign::Negative)
                    .cloned()
                    .collect(),
                (LogicProfile::Fused, SignConstraint::Positive) => terms
                    .iter()
                    .filter(|t| t.sign() == Sign::Positive)
                    .cloned()
                    .collect(),
                _ => terms.clone(),
            };
            let mut metas: Vec<(&'static str, bool, usize)> = ax
                .formula_metas
                .iter()
                .map(|m| (*m, true, formulas.len()))
                .chain(ax.term_metas.iter().map(|m| (*m, false, term_pool.len())))
                .collect();
            if metas.iter().any(|m| m.2 == 0) {
                continue;
            }
            // Spread the budget, smallest pools first.
            let mut order: Vec<usize> = (0..metas.len()).collect();
            order.sort_by_key(|&i| metas[i].2);
            let mut remaining = budget;
            let mut limits = vec![0; metas.len()];
            for (j, &i) in order.iter().enumerate() {
                let n = metas[i].2.min(int_root(remaining, metas.len() - j));
                if n < metas[i].2 {
                    self.truncated = true;
                }
                limits[i] = n;
                remaining = (remaining / n).max(1);
            }
            for (m, limit) in metas.iter_mut().zip(&limits) {
                m.2 = *limit;
            }
            for first in 0..metas[0].2 {
                tasks.push((id, metas.clone(), first, term_pool.clone()));
            }
        }
        let results = self
            .params
            .exec
            .map(&tasks, |(id, metas, first, term_pool)| {
                let mut out = Vec::new();
                let mut idx = vec![0usize; metas.len()];
                idx[0] = *first;
                loop {
                    let mut b = Binding::new();
                    for (k, (name, is_formula, _)) in metas.iter().enumerate() {
                        if *is_formula {
                            b.formulas
                                .insert(name.to_string(), formulas[idx[k]].clone());
                        } else {
                            b.terms.insert(name.to_string(), term_pool[idx[k]].clone());
                        }
                    }
                    if let Ok(f) = instantiate(*id, &b, profile) {
                        out.push((f, Origin::Axiom(*id, b)));
                    }
                    // odometer over every position but the first
                    let mut k = metas.len();
                    loop {
                        if k == 1 {
                            return out;
                        }
                        k -= 1;
                        idx[k] += 1;
                        if idx[k] < metas[k].2 {
                            break;
                        }
                        idx[k] = 0;
                    }
                }
            });
        for batch in results {
            for (f, origin) in batch {
                self.add(f, origin);
            }
        }
    }

    fn run(mut self, goal: Option<GoalFilter<'_>>) -> Derivation {
        for (i, f) in self.spec.formulas().iter().enumerate() {
            self.add(f.clone(), Origin::Hypothesis(i));
        }
        let hit = |e: &Self| goal.is_some_and(|g| e.entries.keys().any(|f| g(f)));
        let mut rounds = 0;
        while rounds < self.params.depth {
            rounds += 1;
            self.mp_fixpoint();
            if hit(&self) || self.full() {
                break;
            }
            self.instantiation_pass();
            if hit(&self) || self.full() {
                break;
            }
        }
        Derivation {
            profile: self.profile,
            entries: self.entries,
            rounds,
            truncated: self.truncated,
        }
    }
}

/// Runs bounded forward chaining with default budgets.
pub fn derive_forward(
    spec: &ConstantSpec,
    profile: LogicProfile,
    goal: Option<GoalFilter<'_>>,
    depth: usize,
    size_bound: usize,
) -> Derivation {
    derive_forward_with(spec, profile, goal, &ForwardParams::new(depth, size_bound))
}

/// With a goal filter the search stops after the first round that derives a
/// matching formula.
pub fn derive_forward_with(
    spec: &ConstantSpec,
    profile: LogicProfile,
    goal: Option<GoalFilter<'_>>,
    params: &ForwardParams,
) -> Derivation {
    Engine::new(spec, profile, params).run(goal)
}
