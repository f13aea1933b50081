use std::fmt;
use std::sync::Arc;

/// Polarity of a justification term in the fused logic.
///
/// Unsigned terms belong to the single-sorted logics (JL, DL, DL°, LP).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Positive,
    Negative,
    Unsigned,
}

impl Sign {
    pub fn suffix(self) -> &'static str {
        match self {
            Sign::Positive => "+",
            Sign::Negative => "-",
            Sign::Unsigned => "",
        }
    }
}

/// Whether leaf terms carry a polarity suffix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Signedness {
    Unsigned,
    Signed,
}

/// Term constructors, used for profile checks and diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TermOp {
    App,
    Sum,
    Pair,
    Bang,
}

impl TermOp {
    pub fn symbol(self) -> &'static str {
        match self {
            TermOp::App => ".",
            TermOp::Sum => "+",
            TermOp::Pair => "&",
            TermOp::Bang => "!",
        }
    }
}

/// A justification term.
///
/// Leaf names follow the usual convention: names beginning with `u`..`z` are
/// variables, every other lowercase name is a constant. Equality is purely
/// structural, so `[s+t]` and `[t+s]` are different terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Const(Arc<str>, Sign),
    Var(Arc<str>, Sign),
    App(Arc<Term>, Arc<Term>),
    Sum(Arc<Term>, Arc<Term>),
    Pair(Arc<Term>, Arc<Term>),
    Bang(Arc<Term>),
}

/// True when `name` denotes a justification variable rather than a constant.
pub fn is_variable_name(name: &str) -> bool {
    matches!(name.as_bytes().first(), Some(b'u'..=b'z'))
}

impl Term {
    /// Leaf term, classified as constant or variable by its name.
    pub fn leaf(name: &str, sign: Sign) -> Term {
        if is_variable_name(name) {
            Term::Var(name.into(), sign)
        } else {
            Term::Const(name.into(), sign)
        }
    }

    pub fn app(s: Term, t: Term) -> Term {
        Term::App(Arc::new(s), Arc::new(t))
    }

    pub fn sum(s: Term, t: Term) -> Term {
        Term::Sum(Arc::new(s), Arc::new(t))
    }

    pub fn pair(s: Term, t: Term) -> Term {
        Term::Pair(Arc::new(s), Arc::new(t))
    }

    pub fn bang(t: Term) -> Term {
        Term::Bang(Arc::new(t))
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Term::Const(..) | Term::Var(..))
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Term::Const(..))
    }

    /// Computed polarity. Compounds inherit the sign of their left child,
    /// pairs are negative and checkers are positive; in unsigned syntax
    /// everything is unsigned.
    pub fn sign(&self) -> Sign {
        match self {
            Term::Const(_, s) | Term::Var(_, s) => *s,
            Term::App(l, _) | Term::Sum(l, _) => l.sign(),
            Term::Pair(l, _) => match l.sign() {
                Sign::Unsigned => Sign::Unsigned,
                _ => Sign::Negative,
            },
            Term::Bang(t) => match t.sign() {
                Sign::Unsigned => Sign::Unsigned,
                _ => Sign::Positive,
            },
        }
    }

    pub fn op(&self) -> Option<TermOp> {
        match self {
            Term::Const(..) | Term::Var(..) => None,
            Term::App(..) => Some(TermOp::App),
            Term::Sum(..) => Some(TermOp::Sum),
            Term::Pair(..) => Some(TermOp::Pair),
            Term::Bang(..) => Some(TermOp::Bang),
        }
    }

    /// Node count.
    pub fn size(&self) -> usize {
        match self {
            Term::Const(..) | Term::Var(..) => 1,
            Term::App(l, r) | Term::Sum(l, r) | Term::Pair(l, r) => 1 + l.size() + r.size(),
            Term::Bang(t) => 1 + t.size(),
        }
    }

    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Const(..) | Term::Var(..) => vec![],
            Term::App(l, r) | Term::Sum(l, r) | Term::Pair(l, r) => vec![l, r],
            Term::Bang(t) => vec![t],
        }
    }

    /// Visits this term and every subterm, parents before children.
    pub fn for_each_subterm<'a>(&'a self, f: &mut impl FnMut(&'a Term)) {
        f(self);
        for child in self.children() {
            child.for_each_subterm(f);
        }
    }

    pub fn contains_op(&self, op: TermOp) -> bool {
        let mut found = false;
        self.for_each_subterm(&mut |t| found |= t.op() == Some(op));
        found
    }
}

/// A formula. No simplification is ever applied: `P /\ P` and `P` are
/// different formulas, and `~P` is not identified with `P -> _|_`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Bottom,
    Var(Arc<str>),
    Not(Arc<Formula>),
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    Implies(Arc<Formula>, Arc<Formula>),
    Just(Arc<Term>, Arc<Formula>),
}

impl Formula {
    pub fn var(name: &str) -> Formula {
        Formula::Var(name.into())
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Arc::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Arc::new(a), Arc::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Arc::new(a), Arc::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Arc::new(a), Arc::new(b))
    }

    pub fn just(t: Term, body: Formula) -> Formula {
        Formula::Just(Arc::new(t), Arc::new(body))
    }

    /// Node count, including the nodes of embedded terms.
    pub fn size(&self) -> usize {
        match self {
            Formula::Bottom | Formula::Var(_) => 1,
            Formula::Not(f) => 1 + f.size(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                1 + a.size() + b.size()
            }
            Formula::Just(t, f) => 1 + t.size() + f.size(),
        }
    }

    pub fn is_binary(&self) -> bool {
        matches!(
            self,
            Formula::And(..) | Formula::Or(..) | Formula::Implies(..)
        )
    }

    /// Immediate subformulas.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Bottom | Formula::Var(_) => vec![],
            Formula::Not(f) | Formula::Just(_, f) => vec![f],
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => vec![a, b],
        }
    }

    /// Visits this formula and every subformula, parents before children.
    pub fn for_each_subformula<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        for child in self.children() {
            child.for_each_subformula(f);
        }
    }

    /// Visits every term occurring in a justification position, with its subterms.
    pub fn for_each_term<'a>(&'a self, f: &mut impl FnMut(&'a Term)) {
        self.for_each_subformula(&mut |sub| {
            if let Formula::Just(t, _) = sub {
                t.for_each_subterm(f);
            }
        });
    }

    pub fn prop_vars(&self) -> Vec<Arc<str>> {
        let mut out = Vec::new();
        self.for_each_subformula(&mut |sub| {
            if let Formula::Var(name) = sub {
                if !out.contains(name) {
                    out.push(name.clone());
                }
            }
        });
        out.sort();
        out
    }

    pub fn has_negative_term(&self) -> bool {
        let mut found = false;
        self.for_each_term(&mut |t| found |= t.sign() == Sign::Negative);
        found
    }

    /// Strips one outer negation, if any.
    pub fn strip_not(&self) -> (bool, &Formula) {
        match self {
            Formula::Not(inner) => (true, inner),
            other => (false, other),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::print::print_term(self))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::print::print_formula(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leaf_classification_follows_naming_convention() {
        assert!(matches!(Term::leaf("x1", Sign::Unsigned), Term::Var(..)));
        assert!(matches!(Term::leaf("u", Sign::Unsigned), Term::Var(..)));
        assert!(matches!(Term::leaf("c1", Sign::Unsigned), Term::Const(..)));
        assert!(matches!(Term::leaf("e", Sign::Unsigned), Term::Const(..)));
    }

    #[test]
    fn compound_signs_are_computed() {
        let a = Term::leaf("c1", Sign::Negative);
        let b = Term::leaf("x2", Sign::Negative);
        assert_eq!(Term::pair(a.clone(), b.clone()).sign(), Sign::Negative);
        assert_eq!(Term::sum(a, b).sign(), Sign::Negative);
        let p = Term::leaf("c", Sign::Positive);
        assert_eq!(Term::bang(p.clone()).sign(), Sign::Positive);
        assert_eq!(Term::app(p.clone(), p).sign(), Sign::Positive);
    }

    #[test]
    fn structural_identity() {
        let p = Formula::var("P");
        let pp = Formula::and(p.clone(), p.clone());
        assert_ne!(p, pp);
        let s = Term::leaf("s", Sign::Unsigned);
        let t = Term::leaf("t", Sign::Unsigned);
        assert_ne!(Term::sum(s.clone(), t.clone()), Term::sum(t, s));
    }

    #[test]
    fn sizes_count_term_nodes() {
        let t = Term::sum(
            Term::leaf("x", Sign::Unsigned),
            Term::leaf("y", Sign::Unsigned),
        );
        assert_eq!(t.size(), 3);
        assert_eq!(Formula::just(t, Formula::var("P")).size(), 5);
        assert_eq!(Formula::not(Formula::Bottom).size(), 2);
    }
}
