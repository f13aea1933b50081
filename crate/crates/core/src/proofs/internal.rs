//! Lifting a proof of `F` to a proof of `p:F`.

use thiserror::Error;

use super::proof::{Proof, ProofBuilder, Rule};
use crate::logics::{Binding, LogicProfile, SchemaId};
use crate::specifications::ConstantSpec;
use crate::syntax::{Formula, Sign, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Internalized {
    pub term: Term,
    pub justified: Formula,
    pub lifted: Proof,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InternalizeError {
    #[error("internalization needs the fused logic or LP, not {0}")]
    Profile(LogicProfile),
    #[error(
        "line {line} (`{formula}`) has no positive constant justifying it in the constant specification"
    )]
    MissingConstant { line: usize, formula: String },
    #[error("proof is empty")]
    Empty,
    #[error("line {line} is malformed: {detail}")]
    Malformed { line: usize, detail: String },
}

fn covering_constant(spec: &ConstantSpec, f: &Formula, profile: LogicProfile) -> Option<Term> {
    let want = if profile == LogicProfile::Fused {
        Sign::Positive
    } else {
        Sign::Unsigned
    };
    spec.formulas().iter().find_map(|g| match g {
        Formula::Just(t, body) if **body == *f && t.is_constant() && t.sign() == want => {
            Some((**t).clone())
        }
        _ => None,
    })
}

/// Maps axiom and hypothesis lines to the constants that justify them and
/// modus ponens lines to applications `[p_major . p_minor]`.
pub fn internalize(proof: &Proof, spec: &ConstantSpec) -> Result<Internalized, InternalizeError> {
    let profile = proof.profile;
    if !matches!(profile, LogicProfile::Fused | LogicProfile::Lp) {
        return Err(InternalizeError::Profile(profile));
    }
    if proof.is_empty() {
        return Err(InternalizeError::Empty);
    }
    let mut b = ProofBuilder::new(profile);
    // per original line: its term and the lifted line proving `term:formula`
    let mut lifted: Vec<(Term, usize)> = Vec::with_capacity(proof.len());
    for (i, line) in proof.lines.iter().enumerate() {
        let entry = match &line.rule {
            Rule::Axiom { .. } | Rule::Hypothesis { .. } => {
                let e = covering_constant(spec, &line.formula, profile).ok_or_else(|| {
                    InternalizeError::MissingConstant {
                        line: i,
                        formula: line.formula.to_string(),
                    }
                })?;
                let stated = Formula::just(e.clone(), line.formula.clone());
                let at = b
                    .hypothesis(spec, &stated)
                    .expect("covering entry is a constant specification member");
                (e, at)
            }
            Rule::ModusPonens { major, minor } => {
                let malformed = |detail: &str| InternalizeError::Malformed {
                    line: i,
                    detail: detail.into(),
                };
                if *major >= i || *minor >= i {
                    return Err(malformed("premise is not an earlier line"));
                }
                let (pj, lj) = lifted[*major].clone();
                let (pk, lk) = lifted[*minor].clone();
                let binding = Binding::new()
                    .term("s", pj.clone())
                    .term("t", pk.clone())
                    .formula("P", proof.lines[*minor].formula.clone())
                    .formula("Q", line.formula.clone());
                let app = b
                    .axiom(SchemaId::Application, binding)
                    .map_err(|e| malformed(&e.to_string()))?;
                let step = b
                    .mp(app, lj)
                    .ok_or_else(|| malformed("major premise does not match"))?;
                let at = b
                    .mp(step, lk)
                    .ok_or_else(|| malformed("minor premise does not match"))?;
                (Term::app(pj, pk), at)
            }
        };
        lifted.push(entry);
    }
    let (term, at) = lifted.pop().expect("nonempty");
    let justified = b.formula(at).clone();
    Ok(Internalized {
        term,
        justified,
        lifted: b.finish_at(at),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proofs::check_proof;

    fn f(src: &str) -> Formula {
        LogicProfile::Fused.parse_formula(src).unwrap()
    }

    #[test]
    fn single_axiom_line() {
        let p = LogicProfile::Fused;
        let ax = "P -> Q -> P";
        let spec = ConstantSpec::close(&[f(&format!("e+:({ax})"))], p).unwrap();
        let mut b = ProofBuilder::new(p);
        b.axiom(
            SchemaId::K,
            Binding::new().formula("P", f("P")).formula("Q", f("Q")),
        )
        .unwrap();
        let out = internalize(&b.finish(), &spec).unwrap();
        assert_eq!(out.term.to_string(), "e+");
        assert_eq!(out.justified, f(&format!("e+:({ax})")));
        assert_eq!(out.lifted.len(), 1);
        assert!(check_proof(&out.lifted, p, &spec).is_accepted());
    }

    #[test]
    fn modus_ponens_becomes_application() {
        let p = LogicProfile::Fused;
        let spec = ConstantSpec::close(&[f("a+:(P -> Q)"), f("b+:P")], p).unwrap();
        let mut b = ProofBuilder::new(p);
        let major = b.hypothesis(&spec, &f("P -> Q")).unwrap();
        let minor = b.hypothesis(&spec, &f("P")).unwrap();
        b.mp(major, minor).unwrap();
        let proof = b.finish();
        assert!(check_proof(&proof, p, &spec).is_accepted());
        let out = internalize(&proof, &spec).unwrap();
        assert_eq!(out.term.to_string(), "[a+ . b+]");
        assert_eq!(out.justified, f("[a+ . b+]:Q"));
        assert!(check_proof(&out.lifted, p, &spec).is_accepted());
        let apps = out
            .lifted
            .lines
            .iter()
            .filter(|l| {
                matches!(
                    l.rule,
                    Rule::Axiom {
                        schema: SchemaId::Application,
                        ..
                    }
                )
            })
            .count();
        assert_eq!(apps, 1);
    }

    #[test]
    fn uncovered_axiom() {
        let p = LogicProfile::Fused;
        let mut b = ProofBuilder::new(p);
        b.axiom(SchemaId::ExFalso, Binding::new().formula("P", f("P")))
            .unwrap();
        assert!(matches!(
            internalize(&b.finish(), &ConstantSpec::empty(p)),
            Err(InternalizeError::MissingConstant { line: 0, .. })
        ));
    }
}
