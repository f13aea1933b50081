//! Bundled scenarios: a specification plus steps with expected verdicts,
//! stored as JSON data next to the crate.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::builder::{realize_spec_with, BuildParams, Functional};
use crate::exec::Execution;
use crate::logics::LogicProfile;
use crate::proofs::{
    check_nonderivability_report, check_proof, Goal, LineRecord, Outcome, Proof, ProofFile,
    SearchBounds, Verdict,
};
use crate::semantics::ModularModel;
use crate::specifications::{
    blue_pill, check_coherence, ok_extract, Coherence, ConstantSpec, SpecBounds,
};
use crate::syntax::Formula;

const BUNDLED: [(&str, &str); 5] = [
    ("prop1", include_str!("../scenarios/prop1.json")),
    (
        "envatted-brain",
        include_str!("../scenarios/envatted-brain.json"),
    ),
    ("agw", include_str!("../scenarios/agw.json")),
    (
        "pairing-independence",
        include_str!("../scenarios/pairing-independence.json"),
    ),
    (
        "blue-pill-demo",
        include_str!("../scenarios/blue-pill-demo.json"),
    ),
];

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    pub title: String,
    pub profile: LogicProfile,
    pub spec: Vec<String>,
    pub steps: Vec<Step>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Step {
    CheckProof {
        label: String,
        expect: String,
        proof: Vec<LineRecord>,
    },
    Nonderivable {
        label: String,
        goal: String,
        #[serde(default)]
        profile: Option<LogicProfile>,
        depth: usize,
        size: usize,
        term_size: usize,
        /// Offer the most recently built model as a countermodel.
        #[serde(default)]
        countermodel: bool,
        expect: String,
        #[serde(default)]
        message_contains: Option<String>,
    },
    Build {
        label: String,
        functional: String,
        fm_size: usize,
        tm_size: usize,
        #[serde(default)]
        leaves: Vec<String>,
        expect: String,
        /// Every interpretation set must lie within these formulas.
        #[serde(default)]
        within: Vec<String>,
    },
    OkExtract {
        label: String,
        #[serde(default)]
        spec: Option<Vec<String>>,
        expect: String,
        members: Vec<String>,
    },
    BluePill {
        label: String,
        #[serde(default)]
        spec: Option<Vec<String>>,
        expect: String,
        #[serde(default, rename = "true")]
        true_formulas: Vec<String>,
    },
    CheckCoherence {
        label: String,
        #[serde(default)]
        spec: Option<Vec<String>>,
        expect: String,
        #[serde(default)]
        formula: Option<String>,
    },
}

impl Step {
    pub fn label(&self) -> &str {
        match self {
            Step::CheckProof { label, .. }
            | Step::Nonderivable { label, .. }
            | Step::Build { label, .. }
            | Step::OkExtract { label, .. }
            | Step::BluePill { label, .. }
            | Step::CheckCoherence { label, .. } => label,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Step::CheckProof { .. } => "check-proof",
            Step::Nonderivable { .. } => "nonderivable",
            Step::Build { .. } => "build",
            Step::OkExtract { .. } => "ok-extract",
            Step::BluePill { .. } => "blue-pill",
            Step::CheckCoherence { .. } => "check-coherence",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StepReport {
    pub kind: String,
    pub label: String,
    pub expected: String,
    pub observed: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScenarioReport {
    pub name: String,
    pub title: String,
    pub profile: String,
    pub passed: bool,
    pub steps: Vec<StepReport>,
}

impl ScenarioReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "scenario {} ({}): {}",
            self.name, self.profile, self.title
        );
        for (i, s) in self.steps.iter().enumerate() {
            let mark = if s.passed { "ok  " } else { "FAIL" };
            let _ = writeln!(
                out,
                "  [{mark}] {}. {}: {} ({})",
                i + 1,
                s.kind,
                s.label,
                s.observed
            );
            for line in s.detail.lines() {
                let _ = writeln!(out, "         {line}");
            }
        }
        let _ = writeln!(out, "{}", if self.passed { "accepted" } else { "rejected" });
        out
    }
}

pub fn names() -> Vec<&'static str> {
    BUNDLED.iter().map(|(n, _)| *n).collect()
}

pub fn source(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn load(name: &str) -> Result<Scenario, String> {
    let text = source(name).ok_or_else(|| {
        format!(
            "unknown scenario `{name}` (available: {})",
            names().join(", ")
        )
    })?;
    parse(text)
}

pub fn parse(text: &str) -> Result<Scenario, String> {
    serde_json::from_str(text).map_err(|e| format!("malformed scenario: {e}"))
}

fn close(profile: LogicProfile, src: &[String]) -> Result<ConstantSpec, String> {
    let raw = src
        .iter()
        .map(|s| {
            profile
                .parse_formula(s)
                .map_err(|e| format!("in `{s}`: {e}"))
        })
        .collect::<Result<Vec<Formula>, String>>()?;
    ConstantSpec::close(&raw, profile).map_err(|e| e.to_string())
}

fn parse_all(profile: LogicProfile, src: &[String]) -> Result<Vec<Formula>, String> {
    src.iter()
        .map(|s| {
            profile
                .parse_formula(s)
                .map_err(|e| format!("in `{s}`: {e}"))
        })
        .collect()
}

struct Observation {
    observed: String,
    detail: String,
}

fn obs(observed: impl Into<String>, detail: impl Into<String>) -> Observation {
    Observation {
        observed: observed.into(),
        detail: detail.into(),
    }
}

pub fn run(scenario: &Scenario, exec: Execution) -> ScenarioReport {
    let mut last_model: Option<ModularModel> = None;
    let mut steps = Vec::new();
    let base = close(scenario.profile, &scenario.spec);
    for step in &scenario.steps {
        let expected = match step {
            Step::CheckProof { expect, .. }
            | Step::Nonderivable { expect, .. }
            | Step::Build { expect, .. }
            | Step::OkExtract { expect, .. }
            | Step::BluePill { expect, .. }
            | Step::CheckCoherence { expect, .. } => expect.clone(),
        };
        let result = base
            .clone()
            .and_then(|spec| run_step(scenario.profile, &spec, step, exec, &mut last_model));
        let (observed, detail, passed) = match result {
            Ok(Observation { observed, detail }) => {
                let passed = observed == expected;
                (observed, detail, passed)
            }
            Err(e) => ("error".to_string(), e, false),
        };
        steps.push(StepReport {
            kind: step.kind().to_string(),
            label: step.label().to_string(),
            expected,
            observed,
            passed,
            detail,
        });
    }
    ScenarioReport {
        name: scenario.name.clone(),
        title: scenario.title.clone(),
        profile: scenario.profile.to_string(),
        passed: steps.iter().all(|s| s.passed),
        steps,
    }
}

fn run_step(
    profile: LogicProfile,
    spec: &ConstantSpec,
    step: &Step,
    exec: Execution,
    last_model: &mut Option<ModularModel>,
) -> Result<Observation, String> {
    let spec_for = |own: &Option<Vec<String>>| match own {
        Some(src) => close(profile, src),
        None => Ok(spec.clone()),
    };
    let bounds = SpecBounds {
        exec,
        ..SpecBounds::default()
    };
    match step {
        Step::CheckProof { proof, .. } => {
            let file = ProofFile {
                profile: Some(profile),
                lines: proof.clone(),
            };
            let text = serde_json::to_string(&file).expect("records serialise");
            let proof = Proof::from_json(&text, profile).map_err(|e| e.to_string())?;
            Ok(match check_proof(&proof, profile, spec) {
                Verdict::Accepted => obs(
                    "accepted",
                    format!(
                        "{} lines, concluding `{}`",
                        proof.len(),
                        proof.conclusion().expect("nonempty")
                    ),
                ),
                Verdict::Rejected { line, reason } => {
                    obs("rejected", format!("line {line}: {reason}"))
                }
            })
        }
        Step::Nonderivable {
            goal,
            profile: p,
            depth,
            size,
            term_size,
            countermodel,
            message_contains,
            ..
        } => {
            let p = p.unwrap_or(profile);
            let spec = if p == profile {
                spec.clone()
            } else {
                close(
                    p,
                    &spec
                        .seeds()
                        .iter()
                        .map(|f| f.to_string())
                        .collect::<Vec<_>>(),
                )?
            };
            let goal = Goal::parse(goal, p)?;
            let bounds = SearchBounds {
                depth: *depth,
                size: *size,
                term_size: *term_size,
            };
            let model = if *countermodel {
                last_model.as_ref()
            } else {
                None
            };
            let report = check_nonderivability_report(&spec, p, &goal, bounds, model);
            let observed = match report.outcome {
                Outcome::Derived => "derived",
                Outcome::NoProofWithinBounds => "no-proof-within-bounds",
                Outcome::RefutedByCountermodel => "refuted-by-countermodel",
                Outcome::Refuted => "refuted",
            };
            let mut detail = report.message.clone();
            if let Some((_, proof)) = &report.refutation {
                for (i, line) in proof.to_records().iter().enumerate() {
                    let _ = write!(detail, "\n{i:>3}  {:<6} {}", line.kind, line.formula);
                }
            }
            if let Some(needle) = message_contains {
                if !report.message.contains(needle.as_str()) {
                    return Ok(obs("message-mismatch", detail));
                }
            }
            Ok(obs(observed, detail))
        }
        Step::Build {
            functional,
            fm_size,
            tm_size,
            leaves,
            within,
            ..
        } => {
            let functional = Functional::preset(functional, Some(spec))?;
            let leaves: Vec<&str> = leaves.iter().map(String::as_str).collect();
            let params = BuildParams::new(profile, &[], *fm_size, *tm_size)
                .with_leaves(&leaves)
                .with_functional(functional);
            let (model, trace) =
                realize_spec_with(spec, &params, exec).map_err(|e| e.to_string())?;
            let allowed = parse_all(profile, within)?;
            let stray = model.interp.iter().find_map(|(t, set)| {
                set.iter()
                    .find(|f| !allowed.contains(f))
                    .map(|f| format!("`{f}` in the set of `{t}`"))
            });
            let detail = format!(
                "{} terms, {} stages, {} contributions, {} mismatches",
                trace.terms,
                trace.stages,
                trace.events.len(),
                trace.mismatches
            );
            *last_model = Some(model);
            Ok(match stray {
                None if within.is_empty() => obs("built", detail),
                None => obs("within", detail),
                Some(s) => obs("outside", format!("{detail}; {s}")),
            })
        }
        Step::OkExtract {
            spec: own, members, ..
        } => {
            let spec = spec_for(own)?;
            let ok = ok_extract(&spec, profile, &bounds);
            let wanted = parse_all(profile, members)?;
            let listing = ok
                .members()
                .map(|f| f.to_string())
                .collect::<Vec<_>>()
                .join(", ");
            let missing: Vec<String> = wanted
                .iter()
                .filter(|f| !ok.contains(f))
                .map(|f| f.to_string())
                .collect();
            Ok(if missing.is_empty() {
                obs("members", format!("OK set within bounds: {{{listing}}}"))
            } else {
                obs(
                    "missing",
                    format!("missing {}; OK set: {{{listing}}}", missing.join(", ")),
                )
            })
        }
        Step::BluePill {
            spec: own,
            true_formulas,
            ..
        } => {
            let spec = spec_for(own)?;
            let bp = blue_pill(&spec, &bounds);
            let wanted = parse_all(profile, true_formulas)?;
            Ok(match bp.result {
                Ok(w) => {
                    let falsified: Vec<String> = wanted
                        .iter()
                        .filter(|f| !w.model.eval(f))
                        .map(|f| f.to_string())
                        .collect();
                    let valuation = w
                        .model
                        .valuation
                        .iter()
                        .map(|(k, v)| format!("{k}={}", u8::from(*v)))
                        .collect::<Vec<_>>()
                        .join(" ");
                    let detail = format!(
                        "{} OK members; valuation {valuation}; {:?}",
                        bp.ok.len(),
                        w.phase
                    );
                    if !w.audit.is_clean() {
                        obs("audit-failure", detail)
                    } else if falsified.is_empty() {
                        obs("model", detail)
                    } else {
                        obs(
                            "falsified",
                            format!("{detail}; false: {}", falsified.join(", ")),
                        )
                    }
                }
                Err(reason) => obs("failure", reason),
            })
        }
        Step::CheckCoherence {
            spec: own, formula, ..
        } => {
            let spec = spec_for(own)?;
            let (_, verdict) = check_coherence(&spec, &bounds);
            Ok(match verdict {
                Coherence::CoherentWithinBounds { checked } => {
                    obs("coherent", format!("{checked} members checked"))
                }
                Coherence::Counterexample { formula: f, reason } => {
                    let expected = formula
                        .as_deref()
                        .map(|s| profile.parse_formula(s))
                        .transpose();
                    match expected {
                        Ok(Some(g)) if g != f => {
                            obs("other-counterexample", format!("`{f}`: {reason}"))
                        }
                        _ => obs("counterexample", format!("`{f}`: {reason}")),
                    }
                }
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_scenarios_parse() {
        for name in names() {
            let s = load(name).unwrap();
            assert_eq!(s.name, name);
        }
        assert!(load("nope").is_err());
    }

    #[test]
    #[ignore]
    fn print_all() {
        for name in names() {
            println!(
                "{}",
                run(&load(name).unwrap(), Execution::Parallel).render()
            );
        }
    }

    #[test]
    fn prop1_passes() {
        let report = run(&load("prop1").unwrap(), Execution::Sequential);
        assert!(report.passed, "{}", report.render());
    }
}
