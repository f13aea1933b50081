use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::schema::SchemaId;
use crate::syntax::{
    parse_formula, parse_term, Formula, OperatorSet, ParseError, Sign, Signedness, Term, TermOp,
};

/// The logics the workbench knows about.
///
/// * `Jl`: classical base, Application, Sum.
/// * `Dl`: JL with Denial and Evidence Pairing (`&` terms).
/// * `Dl0`: DL without Pairing and without `&`.
/// * `Lp`: JL with Factivity and Introspection (`!` terms).
/// * `Fused`: the signed combination of DL and LP over JL.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LogicProfile {
    Jl,
    Dl,
    Dl0,
    Lp,
    Fused,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProfileError {
    #[error("operator `{}` is not available in {profile} (in `{term}`)", op.symbol())]
    OperatorNotAllowed {
        op: TermOp,
        term: String,
        profile: LogicProfile,
    },
    #[error("sign violation in `{term}`: {reason}")]
    SignViolation { term: String, reason: &'static str },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown logic `{0}` (expected one of jl, dl, dl0, lp, fused)")]
pub struct UnknownProfile(pub String);

impl LogicProfile {
    pub const ALL: [LogicProfile; 5] = [
        LogicProfile::Jl,
        LogicProfile::Dl,
        LogicProfile::Dl0,
        LogicProfile::Lp,
        LogicProfile::Fused,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LogicProfile::Jl => "jl",
            LogicProfile::Dl => "dl",
            LogicProfile::Dl0 => "dl0",
            LogicProfile::Lp => "lp",
            LogicProfile::Fused => "fused",
        }
    }

    pub fn signedness(self) -> Signedness {
        if self == LogicProfile::Fused {
            Signedness::Signed
        } else {
            Signedness::Unsigned
        }
    }

    pub fn operators(self) -> OperatorSet {
        let (pair, bang) = match self {
            LogicProfile::Jl | LogicProfile::Dl0 => (false, false),
            LogicProfile::Dl => (true, false),
            LogicProfile::Lp => (false, true),
            LogicProfile::Fused => (true, true),
        };
        OperatorSet {
            app: true,
            sum: true,
            pair,
            bang,
            signed: self == LogicProfile::Fused,
        }
    }

    /// Active axiom schemas, in schema-id order.
    pub fn schemas(self) -> Vec<SchemaId> {
        let mut out = SchemaId::CLASSICAL.to_vec();
        out.extend([SchemaId::Application, SchemaId::SumLeft, SchemaId::SumRight]);
        match self {
            LogicProfile::Jl => {}
            LogicProfile::Dl => out.extend([SchemaId::Denial, SchemaId::Pairing]),
            LogicProfile::Dl0 => out.push(SchemaId::Denial),
            LogicProfile::Lp => out.extend([SchemaId::Factivity, SchemaId::Introspection]),
            LogicProfile::Fused => out.extend([
                SchemaId::Denial,
                SchemaId::Pairing,
                SchemaId::Factivity,
                SchemaId::Introspection,
            ]),
        }
        out
    }

    pub fn has_schema(self, id: SchemaId) -> bool {
        self.schemas().contains(&id)
    }

    pub fn parse_formula(self, src: &str) -> Result<Formula, ParseError> {
        parse_formula(src, self.signedness())
    }

    pub fn parse_term(self, src: &str) -> Result<Term, ParseError> {
        parse_term(src, self.signedness())
    }

    /// Checks that a term only uses operators of this profile and, for the
    /// fused logic, obeys the sign discipline.
    pub fn check_term(self, term: &Term) -> Result<(), ProfileError> {
        let ops = self.operators();
        let violation = |reason| ProfileError::SignViolation {
            term: term.to_string(),
            reason,
        };
        match term {
            Term::Const(_, s) | Term::Var(_, s) => {
                if ops.signed && *s == Sign::Unsigned {
                    return Err(violation("fused terms must be signed"));
                }
                if !ops.signed && *s != Sign::Unsigned {
                    return Err(violation("signed leaf outside the fused logic"));
                }
                Ok(())
            }
            _ => {
                let op = term.op().expect("compound");
                let allowed = match op {
                    TermOp::App => ops.app,
                    TermOp::Sum => ops.sum,
                    TermOp::Pair => ops.pair,
                    TermOp::Bang => ops.bang,
                };
                if !allowed {
                    return Err(ProfileError::OperatorNotAllowed {
                        op,
                        term: term.to_string(),
                        profile: self,
                    });
                }
                for child in term.children() {
                    self.check_term(child)?;
                }
                if ops.signed {
                    match term {
                        Term::App(l, r) | Term::Sum(l, r) if l.sign() != r.sign() => {
                            return Err(violation("operands must have the same sign"));
                        }
                        Term::Pair(l, r)
                            if l.sign() != Sign::Negative || r.sign() != Sign::Negative =>
                        {
                            return Err(violation("pairing requires negative operands"));
                        }
                        Term::Bang(inner) if inner.sign() != Sign::Positive => {
                            return Err(violation("`!` requires a positive operand"));
                        }
                        _ => {}
                    }
                }
                Ok(())
            }
        }
    }

    pub fn check_formula(self, formula: &Formula) -> Result<(), ProfileError> {
        let mut result = Ok(());
        formula.for_each_subformula(&mut |sub| {
            if let (Ok(()), Formula::Just(t, _)) = (&result, sub) {
                result = self.check_term(t);
            }
        });
        result
    }
}

impl fmt::Display for LogicProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LogicProfile::Jl => "JL",
            LogicProfile::Dl => "DL",
            LogicProfile::Dl0 => "DL0",
            LogicProfile::Lp => "LP",
            LogicProfile::Fused => "DL+LP",
        })
    }
}

impl FromStr for LogicProfile {
    type Err = UnknownProfile;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LogicProfile::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownProfile(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schema_sets() {
        let dl = LogicProfile::Dl.schemas();
        assert!(dl.contains(&SchemaId::Pairing) && dl.contains(&SchemaId::Denial));
        let dl0 = LogicProfile::Dl0.schemas();
        assert!(!dl0.contains(&SchemaId::Pairing) && dl0.contains(&SchemaId::Denial));
        let lp = LogicProfile::Lp.schemas();
        assert!(lp.contains(&SchemaId::Factivity) && !lp.contains(&SchemaId::Denial));
        assert_eq!(LogicProfile::Jl.schemas().len(), 15);
    }

    #[test]
    fn pairing_is_absent_from_dl0() {
        let t = LogicProfile::Dl0.parse_term("[a&b]").unwrap();
        assert!(matches!(
            LogicProfile::Dl0.check_term(&t),
            Err(ProfileError::OperatorNotAllowed {
                op: TermOp::Pair,
                ..
            })
        ));
        assert!(LogicProfile::Dl.check_term(&t).is_ok());
    }

    #[test]
    fn bang_only_in_lp_and_fused() {
        let t = LogicProfile::Lp.parse_term("!a").unwrap();
        assert!(LogicProfile::Lp.check_term(&t).is_ok());
        assert!(LogicProfile::Dl.check_term(&t).is_err());
    }

    #[test]
    fn names_round_trip() {
        for p in LogicProfile::ALL {
            assert_eq!(p.name().parse::<LogicProfile>().unwrap(), p);
        }
        assert!("kd45".parse::<LogicProfile>().is_err());
    }
}
