//! Bounded operations over constant specifications: consistency probing,
//! knowledge extraction, coherence and the Blue Pill search.

use std::collections::BTreeSet;

use crate::builder::{realize_spec_with, BuildError, BuildParams};
use crate::exec::Execution;
use crate::logics::{Binding, LogicProfile, SchemaId};
use crate::proofs::{derive_forward_with, ForwardParams, Proof, ProofBuilder, Rule};
use crate::semantics::{audit, eval, set_product, ConditionReport, ModularModel};
use crate::syntax::{cmp_formulas, cmp_terms, Formula, Term};

use super::{ClosureStatus, ConstantSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpecBounds {
    /// Forward-chaining rounds for knowledge extraction.
    pub depth: usize,
    /// Size bound on forward-chaining metavariable instances.
    pub size: usize,
    /// Formula bound for model construction.
    pub fm_size: usize,
    /// Term bound for model construction.
    pub tm_size: usize,
    /// Largest interpretation set tried per term when escalating.
    pub interp_cap: usize,
    pub exec: Execution,
}

impl Default for SpecBounds {
    fn default() -> Self {
        SpecBounds {
            depth: 3,
            size: 4,
            fm_size: 4,
            tm_size: 3,
            interp_cap: 2,
            exec: Execution::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Probe {
    /// A model respecting the constant specification.
    Witness(Box<ModularModel>),
    Clash {
        formula: String,
    },
    Unknown {
        reason: String,
    },
}

/// Looks for a model of the constant specification within bounds.
///
/// Only DL and DL0 have a model construction; other profiles report a clash
/// or unknown.
pub fn probe_consistency(spec: &ConstantSpec, bounds: &SpecBounds) -> Probe {
    if let ClosureStatus::Clash { formula } = spec.status() {
        return Probe::Clash {
            formula: formula.clone(),
        };
    }
    let profile = spec.profile();
    if !matches!(profile, LogicProfile::Dl | LogicProfile::Dl0) {
        return Probe::Unknown {
            reason: format!("no model construction for {profile}"),
        };
    }
    let params = BuildParams::new(profile, &[], bounds.fm_size, bounds.tm_size).with_leaves(&[]);
    match realize_spec_with(spec, &params, bounds.exec) {
        Ok((model, _)) => Probe::Witness(Box::new(model)),
        Err(e @ (BuildError::BoundsTooSmall { .. } | BuildError::Unrealizable { .. })) => {
            Probe::Unknown {
                reason: e.to_string(),
            }
        }
        Err(e) => Probe::Unknown {
            reason: e.to_string(),
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub term: Term,
    /// Checked proof ending in `term:formula`.
    pub proof: Proof,
}

/// The formulas found provably justified within bounds, each with its
/// smallest witnessing term. Members are kept in enumeration order, which is
/// also the fold order for conjunction witnesses.
#[derive(Clone, Debug)]
pub struct OkSet {
    pub profile: LogicProfile,
    pub depth: usize,
    pub size: usize,
    /// Whether forward chaining hit one of its budgets.
    pub truncated: bool,
    members: Vec<(Formula, Witness)>,
}

impl OkSet {
    pub fn members(&self) -> impl Iterator<Item = &Formula> {
        self.members.iter().map(|(f, _)| f)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.witness(f).is_some()
    }

    pub fn witness(&self, f: &Formula) -> Option<&Witness> {
        self.members.iter().find(|(g, _)| g == f).map(|(_, w)| w)
    }

    /// Every verdict here is relative to the search bounds.
    pub fn is_bounded(&self) -> bool {
        true
    }

    /// Witness for the left-nested conjunction of `parts` (in the given
    /// order), built by folding pairing over the member witnesses:
    /// `[[t1&t2]&t3]:((E1 /\ E2) /\ E3)`.
    pub fn conjunction(
        &self,
        parts: &[Formula],
        spec: &ConstantSpec,
    ) -> Option<(Formula, Witness)> {
        let (first, rest) = parts.split_first()?;
        let w = self.witness(first)?;
        if rest.is_empty() {
            return Some((first.clone(), w.clone()));
        }
        if !self.profile.has_schema(SchemaId::Pairing) {
            return None;
        }
        let mut pb = ProofBuilder::new(self.profile);
        let mut acc = replay(&mut pb, &w.proof, spec)?;
        let (mut term, mut body) = (w.term.clone(), first.clone());
        for part in rest {
            let w = self.witness(part)?;
            let next = replay(&mut pb, &w.proof, spec)?;
            let intro = pb
                .axiom(
                    SchemaId::AndIntro,
                    Binding::new()
                        .formula("P", Formula::just(term.clone(), body.clone()))
                        .formula("Q", Formula::just(w.term.clone(), part.clone())),
                )
                .ok()?;
            let pairing = pb
                .axiom(
                    SchemaId::Pairing,
                    Binding::new()
                        .term("s", term.clone())
                        .term("t", w.term.clone())
                        .formula("P", body.clone())
                        .formula("Q", part.clone()),
                )
                .ok()?;
            let half = pb.mp(intro, acc)?;
            let both = pb.mp(half, next)?;
            acc = pb.mp(pairing, both)?;
            term = Term::pair(term, w.term.clone());
            body = Formula::and(body, part.clone());
        }
        Some((
            body,
            Witness {
                term,
                proof: pb.finish_at(acc),
            },
        ))
    }
}

/// Copies `proof` into `pb`, returning the index of its conclusion.
fn replay(pb: &mut ProofBuilder, proof: &Proof, spec: &ConstantSpec) -> Option<usize> {
    let mut map = Vec::with_capacity(proof.lines.len());
    for line in &proof.lines {
        let i = match &line.rule {
            Rule::Axiom { schema, binding } => pb.axiom(*schema, binding.clone()).ok()?,
            Rule::Hypothesis { .. } => pb.hypothesis(spec, &line.formula)?,
            Rule::ModusPonens { major, minor } => pb.mp(map[*major], map[*minor])?,
        };
        map.push(i);
    }
    map.last().copied()
}

/// Formulas `E` with some `t:E` derivable within bounds.
pub fn ok_extract(spec: &ConstantSpec, profile: LogicProfile, bounds: &SpecBounds) -> OkSet {
    let mut params = ForwardParams::new(bounds.depth, bounds.size);
    params.exec = bounds.exec;
    let derivation = derive_forward_with(spec, profile, None, &params);
    let mut best: Vec<(Formula, Term)> = Vec::new();
    for f in derivation.formulas() {
        if let Formula::Just(t, body) = f {
            match best.iter_mut().find(|(b, _)| *b == **body) {
                Some((_, cur)) if cmp_terms(t, cur).is_lt() => *cur = (**t).clone(),
                Some(_) => {}
                None => best.push(((**body).clone(), (**t).clone())),
            }
        }
    }
    best.sort_by(|a, b| cmp_formulas(&a.0, &b.0));
    let members = best
        .into_iter()
        .map(|(body, term)| {
            let proof = derivation
                .proof_of(&Formula::just(term.clone(), body.clone()))
                .expect("derived formulas have proofs");
            (body, Witness { term, proof })
        })
        .collect();
    OkSet {
        profile,
        depth: bounds.depth,
        size: bounds.size,
        truncated: derivation.truncated(),
        members,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchPhase {
    /// All interpretation sets empty; only the valuation was searched.
    EmptyInterp,
    /// Valuations searched jointly with small interpretation sets.
    Escalated,
}

#[derive(Clone, Debug)]
pub struct JlWitness {
    pub model: ModularModel,
    pub phase: SearchPhase,
    /// Terms the closure audit ran over.
    pub universe: Vec<Term>,
    pub audit: ConditionReport,
}

const MAX_SEARCH_BITS: usize = 22;
const MAX_ATOMS: usize = 12;

/// Searches a JL modular model making every target true. Valuations are tried
/// in lexicographic order (false before true, variables alphabetically), so
/// the result is the least one that works.
pub fn search_jl_model(
    targets: &[Formula],
    cap: usize,
    exec: Execution,
) -> Result<JlWitness, String> {
    let mut vars = BTreeSet::new();
    let mut atoms: BTreeSet<(Term, Formula)> = BTreeSet::new();
    for f in targets {
        vars.extend(f.prop_vars().iter().map(|v| v.to_string()));
        f.for_each_subformula(&mut |g| {
            if let Formula::Just(t, q) = g {
                atoms.insert(((**t).clone(), (**q).clone()));
            }
        });
    }
    let vars: Vec<String> = vars.into_iter().collect();
    if vars.len() > MAX_SEARCH_BITS {
        return Err(format!(
            "{} variables exceed the search limit of {MAX_SEARCH_BITS}",
            vars.len()
        ));
    }
    let mut universe: BTreeSet<Term> = BTreeSet::new();
    for (t, _) in &atoms {
        t.for_each_subterm(&mut |s| {
            universe.insert(s.clone());
        });
    }
    let mut universe: Vec<Term> = universe.into_iter().collect();
    universe.sort_by(cmp_terms);

    let n = vars.len();
    let valuation_of = |bits: usize| {
        vars.iter()
            .enumerate()
            .map(|(k, v)| (v.clone(), bits >> (n - 1 - k) & 1 == 1))
            .collect()
    };
    let satisfies = |m: &ModularModel| targets.iter().all(|f| eval(m, f));

    let empty = exec.find_first(1 << n, |bits| {
        let m = ModularModel::trivial(LogicProfile::Jl, valuation_of(bits));
        satisfies(&m).then_some(m)
    });
    if let Some((_, model)) = empty {
        let audit = audit(&model, &universe);
        return Ok(JlWitness {
            model,
            phase: SearchPhase::EmptyInterp,
            universe,
            audit,
        });
    }

    let atoms: Vec<(Term, Formula)> = atoms.into_iter().collect();
    if atoms.is_empty() {
        return Err(
            "no valuation satisfies the targets and no justified subformula can help".into(),
        );
    }
    if atoms.len() > MAX_ATOMS || n + atoms.len() > MAX_SEARCH_BITS {
        return Err(format!(
            "joint search over {n} variables and {} justified subformulas exceeds the limit",
            atoms.len()
        ));
    }
    let k = atoms.len();
    let joint = exec.find_first(1 << (n + k), |code| {
        let (bits, chosen) = (code >> k, code & ((1 << k) - 1));
        let mut m = ModularModel::trivial(LogicProfile::Jl, valuation_of(bits));
        for (i, (t, q)) in atoms.iter().enumerate() {
            if chosen >> (k - 1 - i) & 1 == 1 {
                m.insert(t.clone(), q.clone());
            }
        }
        if atoms.iter().any(|(t, _)| m.set_of(t).len() > cap) {
            return None;
        }
        close_jl(&mut m, &universe);
        if !satisfies(&m) {
            return None;
        }
        let report = audit(&m, &universe);
        report.is_clean().then_some((m, report))
    });
    match joint {
        Some((_, (model, audit))) => Ok(JlWitness {
            model,
            phase: SearchPhase::Escalated,
            universe,
            audit,
        }),
        None => Err(format!(
            "no JL model over {n} variables and {k} justified subformulas (at most {cap} per term)"
        )),
    }
}

/// Closes the interpretation under application and sum over `universe`,
/// which must list parts before compounds.
fn close_jl(m: &mut ModularModel, universe: &[Term]) {
    for t in universe {
        let add: BTreeSet<Formula> = match t {
            Term::App(a, b) => set_product(m.set_of(a), m.set_of(b)),
            Term::Sum(a, b) => m.set_of(a).union(m.set_of(b)).cloned().collect(),
            _ => continue,
        };
        for f in add {
            m.insert(t.clone(), f);
        }
    }
}

#[derive(Clone, Debug)]
pub struct BluePill {
    pub ok: OkSet,
    pub result: Result<JlWitness, String>,
}

/// Extracts the bounded OK set and searches a JL model of all of it.
pub fn blue_pill(spec: &ConstantSpec, bounds: &SpecBounds) -> BluePill {
    let ok = ok_extract(spec, spec.profile(), bounds);
    let result = match spec.profile() {
        LogicProfile::Dl | LogicProfile::Dl0 | LogicProfile::Fused => {
            let targets: Vec<Formula> = ok.members().cloned().collect();
            search_jl_model(&targets, bounds.interp_cap, bounds.exec)
        }
        p => Err(format!(
            "the Blue Pill search is offered for DL and fused specifications, not {p}"
        )),
    };
    BluePill { ok, result }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coherence {
    CoherentWithinBounds { checked: usize },
    Counterexample { formula: Formula, reason: String },
}

/// Checks each bounded OK member on its own for a JL model.
pub fn check_coherence(spec: &ConstantSpec, bounds: &SpecBounds) -> (OkSet, Coherence) {
    let ok = ok_extract(spec, spec.profile(), bounds);
    let failure = ok.members().find_map(|f| {
        search_jl_model(std::slice::from_ref(f), bounds.interp_cap, bounds.exec)
            .err()
            .map(|reason| Coherence::Counterexample {
                formula: f.clone(),
                reason,
            })
    });
    if let Some(verdict) = failure {
        return (ok, verdict);
    }
    let checked = ok.len();
    (ok, Coherence::CoherentWithinBounds { checked })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proofs::check_proof;
    use crate::syntax::Sign;

    fn spec(profile: LogicProfile, src: &[&str]) -> ConstantSpec {
        let raw: Vec<Formula> = src
            .iter()
            .map(|s| profile.parse_formula(s).unwrap())
            .collect();
        ConstantSpec::close(&raw, profile).unwrap()
    }

    fn f(src: &str) -> Formula {
        LogicProfile::Dl.parse_formula(src).unwrap()
    }

    #[test]
    fn probe_finds_witness() {
        let s = spec(LogicProfile::Dl, &["e1:R"]);
        assert!(matches!(
            probe_consistency(&s, &SpecBounds::default()),
            Probe::Witness(_)
        ));
    }

    #[test]
    fn probe_reports_clash_and_unknown() {
        let s = spec(LogicProfile::Dl, &["e:P", "P"]);
        assert!(matches!(
            probe_consistency(&s, &SpecBounds::default()),
            Probe::Clash { .. }
        ));
        let s = spec(LogicProfile::Dl, &["e:(((R -> R) -> R) -> R)"]);
        assert!(matches!(
            probe_consistency(&s, &SpecBounds::default()),
            Probe::Unknown { .. }
        ));
    }

    #[test]
    fn ok_of_single_entry() {
        let s = spec(LogicProfile::Dl, &["s:E"]);
        let ok = ok_extract(&s, LogicProfile::Dl, &SpecBounds::default());
        let w = ok.witness(&f("E")).expect("E is extracted");
        assert_eq!(w.term, Term::leaf("s", Sign::Unsigned));
        assert_eq!(w.proof.len(), 1);
        assert!(check_proof(&w.proof, LogicProfile::Dl, &s).is_accepted());
    }

    #[test]
    fn ok_of_empty_spec_is_empty() {
        let ok = ok_extract(
            &ConstantSpec::empty(LogicProfile::Dl),
            LogicProfile::Dl,
            &SpecBounds::default(),
        );
        assert!(ok.is_empty());
    }

    #[test]
    fn pairing_conjunction_witness() {
        let s = spec(LogicProfile::Dl, &["a:A", "b:B"]);
        let ok = ok_extract(&s, LogicProfile::Dl, &SpecBounds::default());
        assert!(ok.contains(&f("A")) && ok.contains(&f("B")) && ok.contains(&f("A /\\ B")));
        let (body, w) = ok.conjunction(&[f("A"), f("B"), f("A")], &s).unwrap();
        assert_eq!(body, f("(A /\\ B) /\\ A"));
        assert_eq!(w.term.to_string(), "[[a&b]&a]");
        assert!(check_proof(&w.proof, LogicProfile::Dl, &s).is_accepted());
        assert_eq!(
            w.proof.conclusion(),
            Some(&Formula::just(w.term.clone(), body))
        );
    }

    #[test]
    fn blue_pill_makes_e_true() {
        let s = spec(LogicProfile::Dl, &["s:E"]);
        let bp = blue_pill(&s, &SpecBounds::default());
        let w = bp.result.unwrap();
        assert!(w.model.eval(&f("E")));
        assert!(w.audit.is_clean());
        assert_eq!(w.phase, SearchPhase::EmptyInterp);
    }

    #[test]
    fn blue_pill_fails_on_incoherent_ok_set() {
        let s = spec(LogicProfile::Dl, &["s:E", "t:(E -> _|_)"]);
        let bp = blue_pill(&s, &SpecBounds::default());
        assert!(bp.ok.contains(&f("E")) && bp.ok.contains(&f("E -> _|_")));
        assert!(bp.result.is_err());
    }

    #[test]
    fn escalation_uses_interp() {
        let w = search_jl_model(&[f("x:P"), f("~P")], 2, Execution::Sequential).unwrap();
        assert_eq!(w.phase, SearchPhase::Escalated);
        assert!(w.model.eval(&f("x:P")));
    }

    #[test]
    fn coherence_verdicts() {
        let s = spec(LogicProfile::Dl, &["s:E"]);
        assert!(matches!(
            check_coherence(&s, &SpecBounds::default()).1,
            Coherence::CoherentWithinBounds { .. }
        ));
        let s = spec(LogicProfile::Dl, &["s:(P /\\ ~P)"]);
        let (_, verdict) = check_coherence(&s, &SpecBounds::default());
        assert!(
            matches!(verdict, Coherence::Counterexample { formula, .. } if formula == f("P /\\ ~P"))
        );
        let empty = ConstantSpec::empty(LogicProfile::Dl);
        assert_eq!(
            check_coherence(&empty, &SpecBounds::default()).1,
            Coherence::CoherentWithinBounds { checked: 0 }
        );
    }
}
