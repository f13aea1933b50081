//! Axiom schemas over formula metavariables `P`, `Q`, `R` and term
//! metavariables `s`, `t`, with instantiation and first-order matching.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use super::profile::{LogicProfile, ProfileError};
use crate::syntax::{Formula, Sign, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(into = "&'static str")]
pub enum SchemaId {
    K,
    S,
    AndElimLeft,
    AndElimRight,
    AndIntro,
    OrIntroLeft,
    OrIntroRight,
    OrElim,
    ExFalso,
    DoubleNegation,
    NotElim,
    NotIntro,
    Application,
    SumLeft,
    SumRight,
    Denial,
    Pairing,
    Factivity,
    Introspection,
}

impl SchemaId {
    pub const CLASSICAL: [SchemaId; 12] = [
        SchemaId::K,
        SchemaId::S,
        SchemaId::AndElimLeft,
        SchemaId::AndElimRight,
        SchemaId::AndIntro,
        SchemaId::OrIntroLeft,
        SchemaId::OrIntroRight,
        SchemaId::OrElim,
        SchemaId::ExFalso,
        SchemaId::DoubleNegation,
        SchemaId::NotElim,
        SchemaId::NotIntro,
    ];

    pub const ALL: [SchemaId; 19] = [
        SchemaId::K,
        SchemaId::S,
        SchemaId::AndElimLeft,
        SchemaId::AndElimRight,
        SchemaId::AndIntro,
        SchemaId::OrIntroLeft,
        SchemaId::OrIntroRight,
        SchemaId::OrElim,
        SchemaId::ExFalso,
        SchemaId::DoubleNegation,
        SchemaId::NotElim,
        SchemaId::NotIntro,
        SchemaId::Application,
        SchemaId::SumLeft,
        SchemaId::SumRight,
        SchemaId::Denial,
        SchemaId::Pairing,
        SchemaId::Factivity,
        SchemaId::Introspection,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemaId::K => "k",
            SchemaId::S => "s",
            SchemaId::AndElimLeft => "and-elim-left",
            SchemaId::AndElimRight => "and-elim-right",
            SchemaId::AndIntro => "and-intro",
            SchemaId::OrIntroLeft => "or-intro-left",
            SchemaId::OrIntroRight => "or-intro-right",
            SchemaId::OrElim => "or-elim",
            SchemaId::ExFalso => "ex-falso",
            SchemaId::DoubleNegation => "double-negation",
            SchemaId::NotElim => "not-elim",
            SchemaId::NotIntro => "not-intro",
            SchemaId::Application => "application",
            SchemaId::SumLeft => "sum-left",
            SchemaId::SumRight => "sum-right",
            SchemaId::Denial => "denial",
            SchemaId::Pairing => "pairing",
            SchemaId::Factivity => "factivity",
            SchemaId::Introspection => "introspection",
        }
    }

    pub fn is_classical(self) -> bool {
        SchemaId::CLASSICAL.contains(&self)
    }

    pub fn schema(self) -> &'static AxiomSchema {
        &schemas()[self as usize]
    }
}

impl From<SchemaId> for &'static str {
    fn from(id: SchemaId) -> Self {
        id.name()
    }
}

impl fmt::Display for SchemaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown axiom schema `{0}`")]
pub struct UnknownSchema(pub String);

impl FromStr for SchemaId {
    type Err = UnknownSchema;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SchemaId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| UnknownSchema(s.to_string()))
    }
}

/// Formula template with metavariables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pattern {
    Bottom,
    Meta(&'static str),
    Not(Box<Pattern>),
    And(Box<Pattern>, Box<Pattern>),
    Or(Box<Pattern>, Box<Pattern>),
    Implies(Box<Pattern>, Box<Pattern>),
    Just(TermPattern, Box<Pattern>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermPattern {
    Meta(&'static str),
    App(Box<TermPattern>, Box<TermPattern>),
    Sum(Box<TermPattern>, Box<TermPattern>),
    Pair(Box<TermPattern>, Box<TermPattern>),
    Bang(Box<TermPattern>),
}

/// Sign requirement a fused instance must meet. Unsigned profiles ignore it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignConstraint {
    None,
    SameSign,
    Negative,
    Positive,
}

#[derive(Clone, Debug)]
pub struct AxiomSchema {
    pub id: SchemaId,
    pub title: &'static str,
    pub template: Pattern,
    pub formula_metas: &'static [&'static str],
    pub term_metas: &'static [&'static str],
    pub sign: SignConstraint,
}

/// Assignment of formulas and terms to metavariables.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Binding {
    pub formulas: BTreeMap<String, Formula>,
    pub terms: BTreeMap<String, Term>,
}

impl Binding {
    pub fn new() -> Self {
        Binding::default()
    }

    pub fn formula(mut self, meta: &str, f: Formula) -> Self {
        self.formulas.insert(meta.to_string(), f);
        self
    }

    pub fn term(mut self, meta: &str, t: Term) -> Self {
        self.terms.insert(meta.to_string(), t);
        self
    }

    /// Largest node count among the bound items.
    pub fn max_size(&self) -> usize {
        self.formulas
            .values()
            .map(Formula::size)
            .chain(self.terms.values().map(Term::size))
            .max()
            .unwrap_or(0)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstantiateError {
    #[error("schema `{schema}` is not part of {profile}")]
    SchemaNotInProfile {
        schema: SchemaId,
        profile: LogicProfile,
    },
    #[error("metavariable `{0}` is unbound")]
    Unbound(String),
    #[error("binding mentions `{0}`, which the schema does not use")]
    UnknownMeta(String),
    #[error("sign violation: {schema} requires {requirement}")]
    SignViolation {
        schema: SchemaId,
        requirement: &'static str,
    },
    #[error(transparent)]
    Profile(#[from] ProfileError),
}

fn meta(name: &'static str) -> Box<Pattern> {
    Box::new(Pattern::Meta(name))
}

fn tmeta(name: &'static str) -> TermPattern {
    TermPattern::Meta(name)
}

fn imp(a: Box<Pattern>, b: Box<Pattern>) -> Box<Pattern> {
    Box::new(Pattern::Implies(a, b))
}

fn and(a: Box<Pattern>, b: Box<Pattern>) -> Box<Pattern> {
    Box::new(Pattern::And(a, b))
}

fn or(a: Box<Pattern>, b: Box<Pattern>) -> Box<Pattern> {
    Box::new(Pattern::Or(a, b))
}

fn not(a: Box<Pattern>) -> Box<Pattern> {
    Box::new(Pattern::Not(a))
}

fn bottom() -> Box<Pattern> {
    Box::new(Pattern::Bottom)
}

fn just(t: TermPattern, body: Box<Pattern>) -> Box<Pattern> {
    Box::new(Pattern::Just(t, body))
}

fn build_schemas() -> Vec<AxiomSchema> {
    use SchemaId::*;
    const PQ: &[&str] = &["P", "Q"];
    const PQR: &[&str] = &["P", "Q", "R"];
    const P_: &[&str] = &["P"];
    const NONE: &[&str] = &[];
    const ST: &[&str] = &["s", "t"];
    const T_: &[&str] = &["t"];
    let (p, q, r) = (|| meta("P"), || meta("Q"), || meta("R"));
    let (s, t) = (|| tmeta("s"), || tmeta("t"));
    let entry = |id, title, template: Box<Pattern>, fm, tm, sign| AxiomSchema {
        id,
        title,
        template: *template,
        formula_metas: fm,
        term_metas: tm,
        sign,
    };
    use SignConstraint as C;
    vec![
        entry(K, "K", imp(p(), imp(q(), p())), PQ, NONE, C::None),
        entry(
            S,
            "S",
            imp(imp(p(), imp(q(), r())), imp(imp(p(), q()), imp(p(), r()))),
            PQR,
            NONE,
            C::None,
        ),
        entry(
            AndElimLeft,
            "conjunction elimination (left)",
            imp(and(p(), q()), p()),
            PQ,
            NONE,
            C::None,
        ),
        entry(
            AndElimRight,
            "conjunction elimination (right)",
            imp(and(p(), q()), q()),
            PQ,
            NONE,
            C::None,
        ),
        entry(
            AndIntro,
            "conjunction introduction",
            imp(p(), imp(q(), and(p(), q()))),
            PQ,
            NONE,
            C::None,
        ),
        entry(
            OrIntroLeft,
            "disjunction introduction (left)",
            imp(p(), or(p(), q())),
            PQ,
            NONE,
            C::None,
        ),
        entry(
            OrIntroRight,
            "disjunction introduction (right)",
            imp(q(), or(p(), q())),
            PQ,
            NONE,
            C::None,
        ),
        entry(
            OrElim,
            "disjunction elimination",
            imp(imp(p(), r()), imp(imp(q(), r()), imp(or(p(), q()), r()))),
            PQR,
            NONE,
            C::None,
        ),
        entry(ExFalso, "ex falso", imp(bottom(), p()), P_, NONE, C::None),
        entry(
            DoubleNegation,
            "classical negation",
            imp(imp(not(p()), bottom()), p()),
            P_,
            NONE,
            C::None,
        ),
        entry(
            NotElim,
            "negation elimination",
            imp(not(p()), imp(p(), bottom())),
            P_,
            NONE,
            C::None,
        ),
        entry(
            NotIntro,
            "negation introduction",
            imp(imp(p(), bottom()), not(p())),
            P_,
            NONE,
            C::None,
        ),
        entry(
            Application,
            "Application",
            imp(
                just(s(), imp(p(), q())),
                imp(
                    just(t(), p()),
                    just(TermPattern::App(Box::new(s()), Box::new(t())), q()),
                ),
            ),
            PQ,
            ST,
            C::SameSign,
        ),
        entry(
            SumLeft,
            "Sum (left)",
            imp(
                just(s(), p()),
                just(TermPattern::Sum(Box::new(s()), Box::new(t())), p()),
            ),
            P_,
            ST,
            C::SameSign,
        ),
        entry(
            SumRight,
            "Sum (right)",
            imp(
                just(t(), p()),
                just(TermPattern::Sum(Box::new(s()), Box::new(t())), p()),
            ),
            P_,
            ST,
            C::SameSign,
        ),
        entry(
            Denial,
            "Denial",
            imp(just(t(), p()), not(p())),
            P_,
            T_,
            C::Negative,
        ),
        entry(
            Pairing,
            "Evidence Pairing",
            imp(
                and(just(s(), p()), just(t(), q())),
                just(
                    TermPattern::Pair(Box::new(s()), Box::new(t())),
                    and(p(), q()),
                ),
            ),
            PQ,
            ST,
            C::Negative,
        ),
        entry(
            Factivity,
            "Factivity",
            imp(just(t(), p()), p()),
            P_,
            T_,
            C::Positive,
        ),
        entry(
            Introspection,
            "Introspection",
            imp(
                just(t(), p()),
                just(TermPattern::Bang(Box::new(t())), just(t(), p())),
            ),
            P_,
            T_,
            C::Positive,
        ),
    ]
}

pub fn schemas() -> &'static [AxiomSchema] {
    static TABLE: std::sync::OnceLock<Vec<AxiomSchema>> = std::sync::OnceLock::new();
    TABLE.get_or_init(build_schemas)
}

fn subst_term(p: &TermPattern, b: &Binding) -> Result<Term, InstantiateError> {
    Ok(match p {
        TermPattern::Meta(m) => b
            .terms
            .get(*m)
            .cloned()
            .ok_or_else(|| InstantiateError::Unbound(m.to_string()))?,
        TermPattern::App(l, r) => Term::app(subst_term(l, b)?, subst_term(r, b)?),
        TermPattern::Sum(l, r) => Term::sum(subst_term(l, b)?, subst_term(r, b)?),
        TermPattern::Pair(l, r) => Term::pair(subst_term(l, b)?, subst_term(r, b)?),
        TermPattern::Bang(t) => Term::bang(subst_term(t, b)?),
    })
}

fn subst(p: &Pattern, b: &Binding) -> Result<Formula, InstantiateError> {
    Ok(match p {
        Pattern::Bottom => Formula::Bottom,
        Pattern::Meta(m) => b
            .formulas
            .get(*m)
            .cloned()
            .ok_or_else(|| InstantiateError::Unbound(m.to_string()))?,
        Pattern::Not(a) => Formula::not(subst(a, b)?),
        Pattern::And(x, y) => Formula::and(subst(x, b)?, subst(y, b)?),
        Pattern::Or(x, y) => Formula::or(subst(x, b)?, subst(y, b)?),
        Pattern::Implies(x, y) => Formula::implies(subst(x, b)?, subst(y, b)?),
        Pattern::Just(t, body) => Formula::just(subst_term(t, b)?, subst(body, b)?),
    })
}

impl AxiomSchema {
    /// Checks the sign requirement of this schema against a binding.
    pub fn check_signs(
        &self,
        binding: &Binding,
        profile: LogicProfile,
    ) -> Result<(), InstantiateError> {
        if profile != LogicProfile::Fused {
            return Ok(());
        }
        let signs: Vec<Sign> = self
            .term_metas
            .iter()
            .filter_map(|m| binding.terms.get(*m).map(Term::sign))
            .collect();
        let (ok, requirement) = match self.sign {
            SignConstraint::None => (true, ""),
            SignConstraint::SameSign => (
                signs.windows(2).all(|w| w[0] == w[1]),
                "terms of the same sign",
            ),
            SignConstraint::Negative => {
                (signs.iter().all(|s| *s == Sign::Negative), "negative terms")
            }
            SignConstraint::Positive => {
                (signs.iter().all(|s| *s == Sign::Positive), "positive terms")
            }
        };
        if ok {
            Ok(())
        } else {
            Err(InstantiateError::SignViolation {
                schema: self.id,
                requirement,
            })
        }
    }

    /// The template rendered as a formula, metavariables shown as plain names.
    pub fn template_text(&self) -> String {
        let mut b = Binding::new();
        for m in self.formula_metas {
            b.formulas.insert(m.to_string(), Formula::var(m));
        }
        for m in self.term_metas {
            b.terms.insert(m.to_string(), Term::leaf(m, Sign::Unsigned));
        }
        subst(&self.template, &b)
            .expect("identity binding is total")
            .to_string()
    }
}

/// Substitutes the binding into the schema template and checks the result
/// against the profile.
pub fn instantiate(
    schema: SchemaId,
    binding: &Binding,
    profile: LogicProfile,
) -> Result<Formula, InstantiateError> {
    if !profile.has_schema(schema) {
        return Err(InstantiateError::SchemaNotInProfile { schema, profile });
    }
    let ax = schema.schema();
    for key in binding.formulas.keys() {
        if !ax.formula_metas.contains(&key.as_str()) {
            return Err(InstantiateError::UnknownMeta(key.clone()));
        }
    }
    for key in binding.terms.keys() {
        if !ax.term_metas.contains(&key.as_str()) {
            return Err(InstantiateError::UnknownMeta(key.clone()));
        }
    }
    let instance = subst(&ax.template, binding)?;
    for t in binding.terms.values() {
        profile.check_term(t)?;
    }
    ax.check_signs(binding, profile)?;
    profile.check_formula(&instance)?;
    Ok(instance)
}

fn match_term(p: &TermPattern, t: &Term, b: &mut Binding) -> bool {
    match (p, t) {
        (TermPattern::Meta(m), _) => match b.terms.get(*m) {
            Some(bound) => bound == t,
            None => {
                b.terms.insert(m.to_string(), t.clone());
                true
            }
        },
        (TermPattern::App(pl, pr), Term::App(l, r))
        | (TermPattern::Sum(pl, pr), Term::Sum(l, r))
        | (TermPattern::Pair(pl, pr), Term::Pair(l, r)) => {
            match_term(pl, l, b) && match_term(pr, r, b)
        }
        (TermPattern::Bang(pi), Term::Bang(i)) => match_term(pi, i, b),
        _ => false,
    }
}

fn match_pattern(p: &Pattern, f: &Formula, b: &mut Binding) -> bool {
    match (p, f) {
        (Pattern::Bottom, Formula::Bottom) => true,
        (Pattern::Meta(m), _) => match b.formulas.get(*m) {
            Some(bound) => bound == f,
            None => {
                b.formulas.insert(m.to_string(), f.clone());
                true
            }
        },
        (Pattern::Not(pa), Formula::Not(a)) => match_pattern(pa, a, b),
        (Pattern::And(px, py), Formula::And(x, y))
        | (Pattern::Or(px, py), Formula::Or(x, y))
        | (Pattern::Implies(px, py), Formula::Implies(x, y)) => {
            match_pattern(px, x, b) && match_pattern(py, y, b)
        }
        (Pattern::Just(pt, pb), Formula::Just(t, body)) => {
            match_term(pt, t, b) && match_pattern(pb, body, b)
        }
        _ => false,
    }
}

/// Every `(schema, binding)` of the profile that instantiates to `candidate`,
/// in schema-id order.
pub fn match_axiom(candidate: &Formula, profile: LogicProfile) -> Vec<(SchemaId, Binding)> {
    profile
        .schemas()
        .into_iter()
        .filter_map(|id| {
            let mut b = Binding::new();
            if !match_pattern(&id.schema().template, candidate, &mut b) {
                return None;
            }
            match instantiate(id, &b, profile) {
                Ok(inst) if &inst == candidate => Some((id, b)),
                _ => None,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(src: &str) -> Formula {
        LogicProfile::Dl.parse_formula(src).unwrap()
    }

    fn sf(src: &str) -> Formula {
        LogicProfile::Fused.parse_formula(src).unwrap()
    }

    #[test]
    fn table_is_indexed_by_id() {
        for id in SchemaId::ALL {
            assert_eq!(id.schema().id, id);
            assert_eq!(id.name().parse::<SchemaId>().unwrap(), id);
        }
    }

    #[test]
    fn denial_instance() {
        let b = Binding::new()
            .term("t", Term::leaf("t", Sign::Unsigned))
            .formula("P", Formula::var("P"));
        assert_eq!(
            instantiate(SchemaId::Denial, &b, LogicProfile::Dl).unwrap(),
            f("t:P -> ~P")
        );
    }

    #[test]
    fn fused_pairing_instance() {
        let b = Binding::new()
            .term("s", Term::leaf("s", Sign::Negative))
            .term("t", Term::leaf("t", Sign::Negative))
            .formula("P", Formula::var("P"))
            .formula("Q", Formula::var("Q"));
        let inst = instantiate(SchemaId::Pairing, &b, LogicProfile::Fused).unwrap();
        assert_eq!(inst, sf("(s-:P /\\ t-:Q) -> [s- & t-]:(P /\\ Q)"));
    }

    #[test]
    fn fused_denial_rejects_positive_term() {
        let b = Binding::new()
            .term("t", Term::leaf("t", Sign::Positive))
            .formula("P", Formula::var("P"));
        assert!(matches!(
            instantiate(SchemaId::Denial, &b, LogicProfile::Fused),
            Err(InstantiateError::SignViolation {
                schema: SchemaId::Denial,
                ..
            })
        ));
    }

    #[test]
    fn pairing_is_not_available_in_dl0() {
        let b = Binding::new()
            .term("s", Term::leaf("a", Sign::Unsigned))
            .term("t", Term::leaf("b", Sign::Unsigned))
            .formula("P", Formula::var("A"))
            .formula("Q", Formula::var("B"));
        assert!(matches!(
            instantiate(SchemaId::Pairing, &b, LogicProfile::Dl0),
            Err(InstantiateError::SchemaNotInProfile { .. })
        ));
    }

    #[test]
    fn unbound_and_unknown_metas() {
        let b = Binding::new().formula("P", Formula::var("P"));
        assert!(matches!(
            instantiate(SchemaId::K, &b, LogicProfile::Jl),
            Err(InstantiateError::Unbound(m)) if m == "Q"
        ));
        let b = b
            .formula("Q", Formula::Bottom)
            .formula("R", Formula::Bottom);
        assert!(matches!(
            instantiate(SchemaId::K, &b, LogicProfile::Jl),
            Err(InstantiateError::UnknownMeta(m)) if m == "R"
        ));
    }

    #[test]
    fn matches_denial() {
        let found = match_axiom(&f("t:P -> ~P"), LogicProfile::Dl);
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].0, SchemaId::Denial);
        assert_eq!(found[0].1.terms["t"], Term::leaf("t", Sign::Unsigned));
    }

    #[test]
    fn matches_sum_left_only() {
        let found = match_axiom(&f("s:P -> [s+t]:P"), LogicProfile::Jl);
        let ids: Vec<_> = found.iter().map(|(id, _)| *id).collect();
        assert_eq!(ids, vec![SchemaId::SumLeft]);
    }

    #[test]
    fn tautology_that_is_not_an_axiom() {
        assert!(match_axiom(&f("P -> P"), LogicProfile::Jl).is_empty());
        // P -> (P -> P) is K with Q := P
        let found = match_axiom(&f("P -> P -> P"), LogicProfile::Jl);
        assert_eq!(
            found.iter().map(|m| m.0).collect::<Vec<_>>(),
            vec![SchemaId::K]
        );
    }

    #[test]
    fn fused_denial_never_matches_positive_term() {
        assert!(match_axiom(&sf("t+:P -> ~P"), LogicProfile::Fused).is_empty());
        assert_eq!(
            match_axiom(&sf("t-:P -> ~P"), LogicProfile::Fused)[0].0,
            SchemaId::Denial
        );
        assert!(match_axiom(&sf("t-:P -> P"), LogicProfile::Fused).is_empty());
    }
}
