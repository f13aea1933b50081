use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logics::LogicProfile;
use crate::syntax::{Formula, ParseError, Sign, Term};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "status")]
pub enum ClosureStatus {
    /// Closed and free of direct clashes. Consistency beyond that is only
    /// ever certified within bounds.
    Closed,
    /// Closed, but both `formula` and its negation are members.
    Clash { formula: String },
}

/// A constant specification: justified formulas with constant terms in every
/// justification position, their negations, and the formulas the closure
/// rules force. Seeds come first, then closure additions in derivation order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantSpec {
    profile: LogicProfile,
    formulas: Vec<Formula>,
    index: HashSet<Formula>,
    seeds: usize,
    status: ClosureStatus,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecError {
    #[error("`{formula}` cannot be a specification entry: {reason}")]
    Shape { formula: String, reason: String },
    #[error("specification clashes: both `{formula}` and its negation are forced")]
    Clash { formula: String },
    #[error("malformed specification file: {0}")]
    Json(String),
    #[error("in `{text}`: {source}")]
    Parse { text: String, source: ParseError },
    #[error("{0}")]
    Profile(String),
}

/// The chain `e1:…:en:P` of a (possibly negated) entry: whether it is
/// negated, the leading terms, and the innermost body.
pub fn entry_chain(f: &Formula) -> (bool, Vec<&Term>, &Formula) {
    let (negated, mut body) = f.strip_not();
    let mut terms = Vec::new();
    while let Formula::Just(t, inner) = body {
        terms.push(&**t);
        body = inner;
    }
    (negated, terms, body)
}

fn check_shape(f: &Formula, profile: LogicProfile) -> Result<(), SpecError> {
    profile.check_formula(f).map_err(|e| SpecError::Shape {
        formula: f.to_string(),
        reason: e.to_string(),
    })?;
    let (_, terms, _) = entry_chain(f);
    if let Some(bad) = terms.iter().find(|t| !t.is_constant()) {
        return Err(SpecError::Shape {
            formula: f.to_string(),
            reason: format!("`{bad}` is not a justification constant"),
        });
    }
    Ok(())
}

/// Formulas one rule application away from `f`.
fn consequences(f: &Formula, profile: LogicProfile) -> Option<Formula> {
    let (negated, body) = f.strip_not();
    let Formula::Just(t, p) = body else {
        return None;
    };
    let p = (**p).clone();
    match profile {
        LogicProfile::Dl | LogicProfile::Dl0 => Some(if negated { p } else { Formula::not(p) }),
        LogicProfile::Fused => {
            let positive = t.sign() == Sign::Positive;
            Some(match (negated, positive) {
                (false, true) => p,
                (false, false) => Formula::not(p),
                (true, true) => Formula::not(p),
                (true, false) => p,
            })
        }
        LogicProfile::Jl | LogicProfile::Lp => (!negated).then_some(p),
    }
}

impl ConstantSpec {
    /// The least closed superset of `raw`. A clash is recorded in the status
    /// rather than rejected; see [`close_spec`] for the strict variant.
    pub fn close(raw: &[Formula], profile: LogicProfile) -> Result<Self, SpecError> {
        let mut formulas: Vec<Formula> = Vec::new();
        let mut index = HashSet::new();
        for f in raw {
            check_shape(f, profile)?;
            if index.insert(f.clone()) {
                formulas.push(f.clone());
            }
        }
        let seeds = formulas.len();
        let mut i = 0;
        while i < formulas.len() {
            if let Some(g) = consequences(&formulas[i], profile) {
                if index.insert(g.clone()) {
                    formulas.push(g);
                }
            }
            i += 1;
        }
        let status = formulas
            .iter()
            .find(|f| index.contains(&Formula::not((*f).clone())))
            .map_or(ClosureStatus::Closed, |f| ClosureStatus::Clash {
                formula: f.to_string(),
            });
        Ok(ConstantSpec {
            profile,
            formulas,
            index,
            seeds,
            status,
        })
    }

    pub fn empty(profile: LogicProfile) -> Self {
        ConstantSpec::close(&[], profile).expect("empty spec is well-shaped")
    }

    pub fn profile(&self) -> LogicProfile {
        self.profile
    }

    pub fn formulas(&self) -> &[Formula] {
        &self.formulas
    }

    pub fn seeds(&self) -> &[Formula] {
        &self.formulas[..self.seeds]
    }

    pub fn status(&self) -> &ClosureStatus {
        &self.status
    }

    pub fn is_consistent_syntactically(&self) -> bool {
        self.status == ClosureStatus::Closed
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.index.contains(f)
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    pub fn position(&self, f: &Formula) -> Option<usize> {
        self.formulas.iter().position(|g| g == f)
    }

    /// Whether the set is already closed under the rules of its profile.
    pub fn is_closed_set(formulas: &[Formula], profile: LogicProfile) -> bool {
        let set: HashSet<&Formula> = formulas.iter().collect();
        formulas
            .iter()
            .all(|f| consequences(f, profile).is_none_or(|g| set.contains(&g)))
    }

    /// Same profile, extra seeds appended (the result is re-closed).
    pub fn extended(&self, extra: &[Formula]) -> Result<Self, SpecError> {
        let mut raw = self.seeds().to_vec();
        raw.extend(extra.iter().cloned());
        ConstantSpec::close(&raw, self.profile)
    }

    /// Every leaf term occurring in the entries, in first-occurrence order.
    pub fn leaves(&self) -> Vec<Term> {
        let mut out = Vec::new();
        for f in &self.formulas {
            f.for_each_term(&mut |t| {
                t.for_each_subterm(&mut |s| {
                    if s.is_leaf() && !out.contains(s) {
                        out.push(s.clone());
                    }
                })
            });
        }
        out
    }

    /// Propositional variables of the entries, sorted.
    pub fn prop_vars(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .formulas
            .iter()
            .flat_map(|f| f.prop_vars())
            .map(|v| v.to_string())
            .collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn to_file(&self) -> SpecFile {
        SpecFile {
            profile: Some(self.profile),
            formulas: self.formulas.iter().map(|f| f.to_string()).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("spec serialises")
    }

    /// Reads a spec file. `fallback` is used when the file names no profile.
    pub fn from_json(text: &str, fallback: Option<LogicProfile>) -> Result<Self, SpecError> {
        let file: SpecFile = match serde_json::from_str::<SpecFile>(text) {
            Ok(f) => f,
            Err(e) => match serde_json::from_str::<Vec<String>>(text) {
                Ok(formulas) => SpecFile {
                    profile: None,
                    formulas,
                },
                Err(_) => return Err(SpecError::Json(e.to_string())),
            },
        };
        let profile = file.profile.or(fallback).ok_or_else(|| {
            SpecError::Profile("specification names no logic and none was given".into())
        })?;
        let raw = file
            .formulas
            .iter()
            .map(|src| {
                profile
                    .parse_formula(src)
                    .map_err(|source| SpecError::Parse {
                        text: src.clone(),
                        source,
                    })
            })
            .collect::<Result<Vec<_>, _>>()?;
        ConstantSpec::close(&raw, profile)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpecFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<LogicProfile>,
    pub formulas: Vec<String>,
}

/// Closes `raw` under the rules of `profile`, rejecting direct clashes.
pub fn close_spec(raw: &[Formula], profile: LogicProfile) -> Result<ConstantSpec, SpecError> {
    let spec = ConstantSpec::close(raw, profile)?;
    match spec.status() {
        ClosureStatus::Closed => Ok(spec),
        ClosureStatus::Clash { formula } => Err(SpecError::Clash {
            formula: formula.clone(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_all(p: LogicProfile, items: &[&str]) -> Vec<Formula> {
        items.iter().map(|s| p.parse_formula(s).unwrap()).collect()
    }

    #[test]
    fn denial_rules() {
        let p = LogicProfile::Dl;
        let s = close_spec(&parse_all(p, &["e1:R"]), p).unwrap();
        assert_eq!(s.formulas(), parse_all(p, &["e1:R", "~R"]).as_slice());
        let s = close_spec(&parse_all(p, &["~e1:R"]), p).unwrap();
        assert_eq!(s.formulas(), parse_all(p, &["~e1:R", "R"]).as_slice());
    }

    #[test]
    fn nested_entries_close_transitively() {
        let p = LogicProfile::Dl;
        let s = close_spec(&parse_all(p, &["e1:e2:R"]), p).unwrap();
        assert_eq!(
            s.formulas(),
            parse_all(p, &["e1:e2:R", "~e2:R", "R"]).as_slice()
        );
    }

    #[test]
    fn fused_clash() {
        let p = LogicProfile::Fused;
        let raw = parse_all(p, &["t+:P", "s-:P"]);
        assert!(matches!(close_spec(&raw, p), Err(SpecError::Clash { .. })));
        let flagged = ConstantSpec::close(&raw, p).unwrap();
        assert!(flagged.contains(&p.parse_formula("P").unwrap()));
        assert!(flagged.contains(&p.parse_formula("~P").unwrap()));
        assert!(!flagged.is_consistent_syntactically());
    }

    #[test]
    fn fused_negated_rules() {
        let p = LogicProfile::Fused;
        let s = close_spec(&parse_all(p, &["~t+:P", "~s-:Q"]), p).unwrap();
        assert_eq!(
            s.formulas(),
            parse_all(p, &["~t+:P", "~s-:Q", "~P", "Q"]).as_slice()
        );
    }

    #[test]
    fn variables_are_not_entries() {
        let p = LogicProfile::Dl;
        let err = close_spec(&parse_all(p, &["x:P"]), p).unwrap_err();
        assert!(matches!(err, SpecError::Shape { .. }));
    }

    #[test]
    fn json_forms() {
        let s = ConstantSpec::from_json(r#"{"profile":"dl","formulas":["e1:R"]}"#, None).unwrap();
        assert_eq!(s.len(), 2);
        let s = ConstantSpec::from_json(r#"["a:A"]"#, Some(LogicProfile::Dl0)).unwrap();
        assert_eq!(s.profile(), LogicProfile::Dl0);
        assert!(ConstantSpec::from_json(r#"["a:A"]"#, None).is_err());
    }
}
