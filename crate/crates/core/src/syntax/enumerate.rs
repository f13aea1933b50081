//! Canonical bounded enumeration of terms and formulas.
//!
//! Items are ordered by node count, ties broken lexicographically on their
//! prefix (Polish) serialisation over a fixed symbol order: `_|_` first, then
//! propositional variables alphabetically, then connectives, then justified
//! formulas. Every compound therefore follows all of its parts.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::hash::Hash;

use super::ast::{Formula, Sign, Term};

/// Term constructors available while enumerating.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OperatorSet {
    pub app: bool,
    pub sum: bool,
    pub pair: bool,
    pub bang: bool,
    /// Enforce the fused sign discipline on compounds.
    pub signed: bool,
}

#[derive(Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Symbol<'a> {
    Bottom,
    PropVar(&'a str),
    Not,
    And,
    Or,
    Implies,
    Just,
    Const(&'a str, Sign),
    Var(&'a str, Sign),
    App,
    Sum,
    Pair,
    Bang,
}

fn term_symbols<'a>(t: &'a Term, out: &mut Vec<Symbol<'a>>) {
    match t {
        Term::Const(n, s) => out.push(Symbol::Const(n, *s)),
        Term::Var(n, s) => out.push(Symbol::Var(n, *s)),
        Term::App(l, r) | Term::Sum(l, r) | Term::Pair(l, r) => {
            out.push(match t {
                Term::App(..) => Symbol::App,
                Term::Sum(..) => Symbol::Sum,
                _ => Symbol::Pair,
            });
            term_symbols(l, out);
            term_symbols(r, out);
        }
        Term::Bang(inner) => {
            out.push(Symbol::Bang);
            term_symbols(inner, out);
        }
    }
}

fn formula_symbols<'a>(f: &'a Formula, out: &mut Vec<Symbol<'a>>) {
    match f {
        Formula::Bottom => out.push(Symbol::Bottom),
        Formula::Var(n) => out.push(Symbol::PropVar(n)),
        Formula::Not(inner) => {
            out.push(Symbol::Not);
            formula_symbols(inner, out);
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            out.push(match f {
                Formula::And(..) => Symbol::And,
                Formula::Or(..) => Symbol::Or,
                _ => Symbol::Implies,
            });
            formula_symbols(a, out);
            formula_symbols(b, out);
        }
        Formula::Just(t, body) => {
            out.push(Symbol::Just);
            term_symbols(t, out);
            formula_symbols(body, out);
        }
    }
}

/// The enumeration order on terms.
pub fn cmp_terms(a: &Term, b: &Term) -> Ordering {
    a.size().cmp(&b.size()).then_with(|| {
        let (mut x, mut y) = (Vec::new(), Vec::new());
        term_symbols(a, &mut x);
        term_symbols(b, &mut y);
        x.cmp(&y)
    })
}

/// The enumeration order on formulas.
pub fn cmp_formulas(a: &Formula, b: &Formula) -> Ordering {
    a.size().cmp(&b.size()).then_with(|| {
        let (mut x, mut y) = (Vec::new(), Vec::new());
        formula_symbols(a, &mut x);
        formula_symbols(b, &mut y);
        x.cmp(&y)
    })
}

/// A finite ordered prefix of an enumeration with a reverse index.
#[derive(Clone, Debug)]
pub struct Enumeration<T: Eq + Hash> {
    items: Vec<T>,
    index: HashMap<T, usize>,
}

impl<T: Eq + Hash + Clone> Enumeration<T> {
    fn from_sorted(items: Vec<T>) -> Self {
        let index = items
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, t)| (t, i))
            .collect();
        Enumeration { items, index }
    }

    pub fn items(&self) -> &[T] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn index_of(&self, item: &T) -> Option<usize> {
        self.index.get(item).copied()
    }

    pub fn contains(&self, item: &T) -> bool {
        self.index.contains_key(item)
    }

    pub fn get(&self, i: usize) -> Option<&T> {
        self.items.get(i)
    }
}

impl Enumeration<Term> {
    pub fn from_terms(mut items: Vec<Term>) -> Self {
        items.sort_by(cmp_terms);
        items.dedup();
        Self::from_sorted(items)
    }
}

impl Enumeration<Formula> {
    pub fn from_formulas(mut items: Vec<Formula>) -> Self {
        items.sort_by(cmp_formulas);
        items.dedup();
        Self::from_sorted(items)
    }
}

/// All terms of size at most `bound` built from `leaves` with the allowed operators.
pub fn enumerate_terms(ops: OperatorSet, leaves: &[Term], bound: usize) -> Enumeration<Term> {
    let mut by_size: Vec<Vec<Term>> = vec![Vec::new(); bound + 1];
    if bound >= 1 {
        by_size[1] = leaves
            .iter()
            .filter(|l| l.is_leaf() && (l.sign() != Sign::Unsigned) == ops.signed)
            .cloned()
            .collect();
        by_size[1].sort_by(cmp_terms);
        by_size[1].dedup();
    }
    for n in 2..=bound {
        let mut layer = Vec::new();
        if ops.bang {
            for t in &by_size[n - 1] {
                if !ops.signed || t.sign() == Sign::Positive {
                    layer.push(Term::bang(t.clone()));
                }
            }
        }
        for i in 1..n - 1 {
            let j = n - 1 - i;
            for l in &by_size[i] {
                for r in &by_size[j] {
                    let same = !ops.signed || l.sign() == r.sign();
                    if ops.app && same {
                        layer.push(Term::app(l.clone(), r.clone()));
                    }
                    if ops.sum && same {
                        layer.push(Term::sum(l.clone(), r.clone()));
                    }
                    let negative =
                        !ops.signed || (l.sign() == Sign::Negative && r.sign() == Sign::Negative);
                    if ops.pair && negative {
                        layer.push(Term::pair(l.clone(), r.clone()));
                    }
                }
            }
        }
        layer.sort_by(cmp_terms);
        by_size[n] = layer;
    }
    Enumeration::from_sorted(by_size.into_iter().flatten().collect())
}

/// All formulas of size at most `bound` over `prop_vars`, justified by terms
/// drawn from `terms`.
pub fn enumerate_formulas(
    prop_vars: &[String],
    terms: &[Term],
    bound: usize,
) -> Enumeration<Formula> {
    let mut terms_by_size: Vec<Vec<&Term>> = vec![Vec::new(); bound + 1];
    for t in terms {
        if t.size() <= bound {
            terms_by_size[t.size()].push(t);
        }
    }
    let mut by_size: Vec<Vec<Formula>> = vec![Vec::new(); bound + 1];
    if bound >= 1 {
        let mut atoms = vec![Formula::Bottom];
        atoms.extend(prop_vars.iter().map(|v| Formula::var(v)));
        atoms.sort_by(cmp_formulas);
        atoms.dedup();
        by_size[1] = atoms;
    }
    for n in 2..=bound {
        let mut layer = Vec::new();
        for f in &by_size[n - 1] {
            layer.push(Formula::not(f.clone()));
        }
        for i in 1..n - 1 {
            let j = n - 1 - i;
            for a in &by_size[i] {
                for b in &by_size[j] {
                    layer.push(Formula::and(a.clone(), b.clone()));
                    layer.push(Formula::or(a.clone(), b.clone()));
                    layer.push(Formula::implies(a.clone(), b.clone()));
                }
            }
            for t in &terms_by_size[i] {
                for b in &by_size[j] {
                    layer.push(Formula::just((*t).clone(), b.clone()));
                }
            }
        }
        layer.sort_by(cmp_formulas);
        by_size[n] = layer;
    }
    Enumeration::from_sorted(by_size.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::ast::Signedness;
    use crate::syntax::parse::parse_term;

    const DL_OPS: OperatorSet = OperatorSet {
        app: true,
        sum: true,
        pair: true,
        bang: false,
        signed: false,
    };

    fn leaves(names: &[&str]) -> Vec<Term> {
        names
            .iter()
            .map(|n| Term::leaf(n, Sign::Unsigned))
            .collect()
    }

    #[test]
    fn smallest_formulas() {
        let e = enumerate_formulas(&["P".to_string()], &[], 1);
        assert_eq!(e.items(), &[Formula::Bottom, Formula::var("P")]);
    }

    #[test]
    fn size_three_terms_follow_their_parts() {
        let e = enumerate_terms(DL_OPS, &leaves(&["x", "c"]), 3);
        for src in ["[x+c]", "[x.c]", "[x&c]"] {
            let t = parse_term(src, Signedness::Unsigned).unwrap();
            let i = e.index_of(&t).expect(src);
            assert!(i >= 2, "compound {src} must come after the leaves");
        }
        // constants sort before variables
        assert_eq!(e.items()[0], Term::leaf("c", Sign::Unsigned));
        assert_eq!(e.len(), 2 + 3 * 4);
    }

    #[test]
    fn empty_inventory_gives_empty_term_list() {
        assert!(enumerate_terms(DL_OPS, &[], 5).is_empty());
    }

    #[test]
    fn signed_enumeration_respects_discipline() {
        let ops = OperatorSet {
            app: true,
            sum: true,
            pair: true,
            bang: true,
            signed: true,
        };
        let ls = vec![
            Term::leaf("c", Sign::Positive),
            Term::leaf("c", Sign::Negative),
        ];
        let e = enumerate_terms(ops, &ls, 3);
        for t in e.items() {
            match t {
                Term::Pair(l, r) => {
                    assert!(l.sign() == Sign::Negative && r.sign() == Sign::Negative)
                }
                Term::Bang(inner) => assert_eq!(inner.sign(), Sign::Positive),
                Term::App(l, r) | Term::Sum(l, r) => assert_eq!(l.sign(), r.sign()),
                _ => {}
            }
        }
        assert!(e.contains(&Term::bang(Term::leaf("c", Sign::Positive))));
    }
}
