use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logics::{instantiate, Binding, InstantiateError, LogicProfile, SchemaId};
use crate::specifications::ConstantSpec;
use crate::syntax::{Formula, ParseError};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Axiom {
        schema: SchemaId,
        binding: Binding,
    },
    /// Index into the formulas of the constant specification.
    Hypothesis {
        index: usize,
    },
    /// Indices of earlier lines: `major` states `minor -> this`.
    ModusPonens {
        major: usize,
        minor: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProofLine {
    pub rule: Rule,
    pub formula: Formula,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Proof {
    pub profile: LogicProfile,
    pub lines: Vec<ProofLine>,
}

impl Proof {
    pub fn new(profile: LogicProfile) -> Self {
        Proof {
            profile,
            lines: Vec::new(),
        }
    }

    pub fn conclusion(&self) -> Option<&Formula> {
        self.lines.last().map(|l| &l.formula)
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum RejectReason {
    EmptyProof,
    BadInstantiation { detail: String },
    SignViolation { detail: String },
    SchemaNotInProfile { schema: String },
    DanglingReference { cited: usize },
    MpMismatch { detail: String },
    HypothesisNotInSpec { detail: String },
    IllFormed { detail: String },
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RejectReason::EmptyProof => write!(f, "empty proof"),
            RejectReason::BadInstantiation { detail } => write!(f, "bad instantiation: {detail}"),
            RejectReason::SignViolation { detail } => write!(f, "sign violation: {detail}"),
            RejectReason::SchemaNotInProfile { schema } => {
                write!(f, "schema `{schema}` is not available in this logic")
            }
            RejectReason::DanglingReference { cited } => {
                write!(f, "dangling reference: line {cited} is not an earlier line")
            }
            RejectReason::MpMismatch { detail } => write!(f, "modus ponens mismatch: {detail}"),
            RejectReason::HypothesisNotInSpec { detail } => {
                write!(f, "hypothesis not in specification: {detail}")
            }
            RejectReason::IllFormed { detail } => write!(f, "ill-formed line: {detail}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "verdict")]
pub enum Verdict {
    Accepted,
    Rejected { line: usize, reason: RejectReason },
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::Accepted)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Accepted => write!(f, "accepted"),
            Verdict::Rejected { line, reason } => write!(f, "rejected at line {line}: {reason}"),
        }
    }
}

fn check_line(
    i: usize,
    line: &ProofLine,
    lines: &[ProofLine],
    profile: LogicProfile,
    spec: &ConstantSpec,
) -> Result<(), RejectReason> {
    if let Err(e) = profile.check_formula(&line.formula) {
        return Err(match e {
            crate::logics::ProfileError::SignViolation { .. } => RejectReason::SignViolation {
                detail: e.to_string(),
            },
            _ => RejectReason::IllFormed {
                detail: e.to_string(),
            },
        });
    }
    match &line.rule {
        Rule::Axiom { schema, binding } => match instantiate(*schema, binding, profile) {
            Ok(inst) if inst == line.formula => Ok(()),
            Ok(inst) => Err(RejectReason::BadInstantiation {
                detail: format!("{schema} gives `{inst}`, not `{}`", line.formula),
            }),
            Err(InstantiateError::SchemaNotInProfile { schema, .. }) => {
                Err(RejectReason::SchemaNotInProfile {
                    schema: schema.to_string(),
                })
            }
            Err(e @ InstantiateError::SignViolation { .. })
            | Err(
                e @ InstantiateError::Profile(crate::logics::ProfileError::SignViolation { .. }),
            ) => Err(RejectReason::SignViolation {
                detail: e.to_string(),
            }),
            Err(e) => Err(RejectReason::BadInstantiation {
                detail: e.to_string(),
            }),
        },
        Rule::Hypothesis { index } => match spec.formulas().get(*index) {
            Some(f) if *f == line.formula => Ok(()),
            Some(f) => Err(RejectReason::HypothesisNotInSpec {
                detail: format!("entry {index} is `{f}`, not `{}`", line.formula),
            }),
            None => Err(RejectReason::HypothesisNotInSpec {
                detail: format!("the constant specification has no entry {index}"),
            }),
        },
        Rule::ModusPonens { major, minor } => {
            for cited in [*major, *minor] {
                if cited >= i {
                    return Err(RejectReason::DanglingReference { cited });
                }
            }
            let expected = Formula::implies(lines[*minor].formula.clone(), line.formula.clone());
            if lines[*major].formula == expected {
                Ok(())
            } else {
                Err(RejectReason::MpMismatch {
                    detail: format!(
                        "line {major} is `{}`, expected `{expected}`",
                        lines[*major].formula
                    ),
                })
            }
        }
    }
}

/// Checks every line in order and reports the first failure.
pub fn check_proof(proof: &Proof, profile: LogicProfile, spec: &ConstantSpec) -> Verdict {
    if proof.lines.is_empty() {
        return Verdict::Rejected {
            line: 0,
            reason: RejectReason::EmptyProof,
        };
    }
    for (i, line) in proof.lines.iter().enumerate() {
        if let Err(reason) = check_line(i, line, &proof.lines, profile, spec) {
            return Verdict::Rejected { line: i, reason };
        }
    }
    Verdict::Accepted
}

/// Appends lines while sharing repeated formulas.
#[derive(Clone, Debug)]
pub struct ProofBuilder {
    proof: Proof,
    seen: HashMap<Formula, usize>,
}

impl ProofBuilder {
    pub fn new(profile: LogicProfile) -> Self {
        ProofBuilder {
            proof: Proof::new(profile),
            seen: HashMap::new(),
        }
    }

    fn push(&mut self, rule: Rule, formula: Formula) -> usize {
        if let Some(&i) = self.seen.get(&formula) {
            return i;
        }
        let i = self.proof.lines.len();
        self.seen.insert(formula.clone(), i);
        self.proof.lines.push(ProofLine { rule, formula });
        i
    }

    pub fn axiom(&mut self, schema: SchemaId, binding: Binding) -> Result<usize, InstantiateError> {
        let f = instantiate(schema, &binding, self.proof.profile)?;
        Ok(self.push(Rule::Axiom { schema, binding }, f))
    }

    pub fn hypothesis(&mut self, spec: &ConstantSpec, f: &Formula) -> Option<usize> {
        let index = spec.position(f)?;
        Some(self.push(Rule::Hypothesis { index }, f.clone()))
    }

    /// Applies modus ponens; `None` if `major` is not `minor -> _`.
    pub fn mp(&mut self, major: usize, minor: usize) -> Option<usize> {
        let (a, b) = match &self.proof.lines[major].formula {
            Formula::Implies(a, b) => (a.clone(), b.clone()),
            _ => return None,
        };
        if *a != self.proof.lines[minor].formula {
            return None;
        }
        Some(self.push(Rule::ModusPonens { major, minor }, (*b).clone()))
    }

    pub fn formula(&self, i: usize) -> &Formula {
        &self.proof.lines[i].formula
    }

    pub fn finish(self) -> Proof {
        self.proof
    }

    /// Finishes with line `goal` last, dropping lines it does not depend on.
    pub fn finish_at(self, goal: usize) -> Proof {
        extract(&self.proof, goal)
    }
}

/// The sub-proof of line `goal`, renumbered.
pub fn extract(proof: &Proof, goal: usize) -> Proof {
    let mut needed = vec![false; proof.lines.len()];
    needed[goal] = true;
    for i in (0..=goal).rev() {
        if !needed[i] {
            continue;
        }
        if let Rule::ModusPonens { major, minor } = proof.lines[i].rule {
            needed[major] = true;
            needed[minor] = true;
        }
    }
    let mut remap = vec![usize::MAX; proof.lines.len()];
    let mut out = Proof::new(proof.profile);
    for i in 0..=goal {
        if !needed[i] {
            continue;
        }
        remap[i] = out.lines.len();
        let mut line = proof.lines[i].clone();
        if let Rule::ModusPonens { major, minor } = &mut line.rule {
            *major = remap[*major];
            *minor = remap[*minor];
        }
        out.lines.push(line);
    }
    out
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LineRecord {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub binding: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hyp_index: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub premises: Option<[usize; 2]>,
    pub formula: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProofFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<LogicProfile>,
    pub lines: Vec<LineRecord>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProofFileError {
    #[error("malformed proof file: {0}")]
    Json(String),
    #[error("line {line}: in `{text}`: {source}")]
    Parse {
        line: usize,
        text: String,
        source: ParseError,
    },
    #[error("line {line}: {message}")]
    Record { line: usize, message: String },
}

impl Proof {
    pub fn to_records(&self) -> Vec<LineRecord> {
        self.lines
            .iter()
            .map(|l| {
                let mut r = LineRecord {
                    kind: String::new(),
                    schema: None,
                    binding: None,
                    hyp_index: None,
                    premises: None,
                    formula: l.formula.to_string(),
                };
                match &l.rule {
                    Rule::Axiom { schema, binding } => {
                        r.kind = "axiom".into();
                        r.schema = Some(schema.to_string());
                        let mut b = BTreeMap::new();
                        for (k, v) in &binding.formulas {
                            b.insert(k.clone(), v.to_string());
                        }
                        for (k, v) in &binding.terms {
                            b.insert(k.clone(), v.to_string());
                        }
                        r.binding = Some(b);
                    }
                    Rule::Hypothesis { index } => {
                        r.kind = "hyp".into();
                        r.hyp_index = Some(*index);
                    }
                    Rule::ModusPonens { major, minor } => {
                        r.kind = "mp".into();
                        r.premises = Some([*major, *minor]);
                    }
                }
                r
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        let file = ProofFile {
            profile: Some(self.profile),
            lines: self.to_records(),
        };
        serde_json::to_string_pretty(&file).expect("proof serialises")
    }

    /// Reads `{"profile", "lines": [...]}` or a bare array of line records.
    pub fn from_json(text: &str, fallback: LogicProfile) -> Result<Proof, ProofFileError> {
        let file = match serde_json::from_str::<ProofFile>(text) {
            Ok(f) => f,
            Err(e) => match serde_json::from_str::<Vec<LineRecord>>(text) {
                Ok(lines) => ProofFile {
                    profile: None,
                    lines,
                },
                Err(_) => return Err(ProofFileError::Json(e.to_string())),
            },
        };
        let profile = file.profile.unwrap_or(fallback);
        let mut proof = Proof::new(profile);
        for (i, r) in file.lines.iter().enumerate() {
            let parse = |text: &str| {
                profile
                    .parse_formula(text)
                    .map_err(|source| ProofFileError::Parse {
                        line: i,
                        text: text.to_string(),
                        source,
                    })
            };
            let missing = |field: &str| ProofFileError::Record {
                line: i,
                message: format!("`{}` line needs `{field}`", r.kind),
            };
            let formula = parse(&r.formula)?;
            let rule = match r.kind.as_str() {
                "axiom" => {
                    let name = r.schema.as_deref().ok_or_else(|| missing("schema"))?;
                    let schema = name
                        .parse::<SchemaId>()
                        .map_err(|e| ProofFileError::Record {
                            line: i,
                            message: e.to_string(),
                        })?;
                    let mut binding = Binding::new();
                    for (k, v) in r.binding.iter().flatten() {
                        if k.chars().next().is_some_and(|c| c.is_ascii_uppercase()) {
                            binding.formulas.insert(k.clone(), parse(v)?);
                        } else {
                            let t =
                                profile
                                    .parse_term(v)
                                    .map_err(|source| ProofFileError::Parse {
                                        line: i,
                                        text: v.clone(),
                                        source,
                                    })?;
                            binding.terms.insert(k.clone(), t);
                        }
                    }
                    Rule::Axiom { schema, binding }
                }
                "hyp" | "hypothesis" => Rule::Hypothesis {
                    index: r.hyp_index.ok_or_else(|| missing("hyp_index"))?,
                },
                "mp" => {
                    let [major, minor] = r.premises.ok_or_else(|| missing("premises"))?;
                    Rule::ModusPonens { major, minor }
                }
                other => {
                    return Err(ProofFileError::Record {
                        line: i,
                        message: format!("unknown line kind `{other}`"),
                    })
                }
            };
            proof.lines.push(ProofLine { rule, formula });
        }
        Ok(proof)
    }
}
