use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use dlk_core::builder::{realize_spec_with, BuildParams, Functional, PairingClosure, TableRule};
use dlk_core::logics::{schemas as schema_table, translate_with, LogicProfile};
use dlk_core::proofs::{internalize as lift, Verdict};
use dlk_core::scenarios;
use dlk_core::semantics::{audit as run_audit, audit_universe, eval as eval_in};
use dlk_core::specifications::{
    blue_pill as search_blue_pill, check_coherence as coherence, ok_extract, probe_consistency,
    ClosureStatus, Coherence, ConstantSpec, Probe, SpecBounds,
};
use dlk_core::syntax::{enumerate_formulas, enumerate_terms, Formula, Term};
use serde_json::{json, Value};

use crate::io::{cap, load_model, load_proof, load_spec, print_json, read, usage, write, CliError};
use crate::{EnumKind, Global, Pairing, SearchArgs};

type Outcome = Result<bool, CliError>;

fn parse_formula(profile: LogicProfile, src: &str) -> Result<Formula, CliError> {
    profile
        .parse_formula(src)
        .map_err(|e| usage(format!("cannot parse `{src}`: {e}")))
}

fn parse_leaves(profile: LogicProfile, names: &[String]) -> Result<Vec<Term>, CliError> {
    names
        .iter()
        .filter(|n| !n.is_empty())
        .map(|n| {
            let t = profile
                .parse_term(n)
                .map_err(|e| usage(format!("leaf `{n}`: {e}")))?;
            if t.is_leaf() {
                Ok(t)
            } else {
                Err(usage(format!("`{n}` is not a leaf")))
            }
        })
        .collect()
}

fn spec_bounds(g: &Global, search: SearchArgs) -> Result<SpecBounds, CliError> {
    Ok(SpecBounds {
        depth: cap(search.depth, "depth")?,
        size: cap(search.size, "size")?,
        exec: g.exec(),
        ..SpecBounds::default()
    })
}

pub fn parse(g: &Global, inputs: &[String], term: bool) -> Outcome {
    let profile = g.logic_or(LogicProfile::Dl);
    let mut ok = true;
    let mut rows = Vec::new();
    for src in inputs {
        let parsed: Result<(String, usize), String> = if term {
            profile
                .parse_term(src)
                .map_err(|e| e.to_string())
                .and_then(|t| {
                    profile.check_term(&t).map_err(|e| e.to_string())?;
                    Ok((t.to_string(), t.size()))
                })
        } else {
            profile
                .parse_formula(src)
                .map_err(|e| e.to_string())
                .and_then(|f| {
                    profile.check_formula(&f).map_err(|e| e.to_string())?;
                    Ok((f.to_string(), f.size()))
                })
        };
        match parsed {
            Ok((printed, size)) => {
                if !g.json {
                    println!("{printed}\t(size {size})");
                }
                rows.push(json!({ "input": src, "printed": printed, "size": size }));
            }
            Err(e) => {
                ok = false;
                if !g.json {
                    println!("error in `{src}`: {e}");
                }
                rows.push(json!({ "input": src, "error": e.to_string() }));
            }
        }
    }
    if g.json {
        print_json(&json!({ "profile": profile.name(), "results": rows }));
    }
    Ok(ok)
}

pub fn check_proof(g: &Global, proof: &Path, spec: Option<&Path>) -> Outcome {
    let fallback = g.logic_or(LogicProfile::Dl);
    let proof = load_proof(proof, fallback)?;
    let profile = g.logic.unwrap_or(proof.profile);
    let spec = match spec {
        Some(p) => load_spec(p, Some(profile))?,
        None => ConstantSpec::empty(profile),
    };
    let verdict = dlk_core::proofs::check_proof(&proof, profile, &spec);
    let conclusion = proof.conclusion().map(|f| f.to_string());
    match &verdict {
        Verdict::Accepted => {
            if g.json {
                print_json(&json!({
                    "verdict": "accepted", "profile": profile.name(),
                    "lines": proof.len(), "conclusion": conclusion,
                }));
            } else {
                println!(
                    "accepted: {} lines in {profile}, concluding `{}`",
                    proof.len(),
                    conclusion.unwrap_or_default()
                );
            }
        }
        Verdict::Rejected { line, reason } => {
            if g.json {
                print_json(&json!({
                    "verdict": "rejected", "profile": profile.name(),
                    "line": line, "reason": reason.to_string(),
                }));
            } else {
                println!("rejected at line {line}: {reason}");
            }
        }
    }
    Ok(verdict.is_accepted())
}

pub fn eval(g: &Global, model: &Path, formulas: &[String]) -> Outcome {
    let model = load_model(model)?;
    let mut rows = Vec::new();
    for src in formulas {
        let f = parse_formula(model.profile, src)?;
        let v = eval_in(&model, &f);
        if !g.json {
            println!("{}", u8::from(v));
        }
        rows.push(json!({ "formula": f.to_string(), "value": u8::from(v) }));
    }
    if g.json {
        print_json(&Value::Array(rows));
    }
    Ok(true)
}

pub fn audit(g: &Global, model: &Path) -> Outcome {
    let model = load_model(model)?;
    let (universe, own) = audit_universe(&model);
    let report = run_audit(&model, &universe);
    if g.json {
        let mut v = serde_json::to_value(&report).expect("report serialises");
        v["universe_kind"] = json!(if own { "model" } else { "extended" });
        print_json(&v);
    } else {
        println!(
            "audit of a {} model over {} terms ({}):",
            report.profile,
            report.universe,
            if own {
                "the model's own terms"
            } else {
                "model terms and their depth-one compounds"
            }
        );
        for s in &report.conditions {
            println!(
                "  {:<6} {:<14} {:>6} checked, {} violations",
                s.label,
                format!("{:?}", s.condition).to_lowercase(),
                s.checked,
                s.violations.len()
            );
            for v in s.violations.iter().take(5) {
                println!("         [{}] {}", v.terms.join(", "), v.formula);
            }
        }
        for w in &report.warnings {
            println!("  warning: {w}");
        }
        println!(
            "{}",
            if report.is_clean() {
                "clean"
            } else {
                "violations found"
            }
        );
    }
    Ok(report.is_clean())
}

pub struct BuildArgs {
    pub functional: String,
    pub rules: Option<PathBuf>,
    pub spec: Option<PathBuf>,
    pub vars: Vec<String>,
    pub leaves: Vec<String>,
    pub fm_size: usize,
    pub tm_size: usize,
    pub assignments: Vec<String>,
    pub pairing: Pairing,
    pub out: Option<PathBuf>,
    pub trace: Option<PathBuf>,
}

pub fn build_model(g: &Global, a: &BuildArgs) -> Outcome {
    let profile = g.logic_or(LogicProfile::Dl);
    let spec = match &a.spec {
        Some(p) => Some(load_spec(p, Some(profile))?),
        None => None,
    };
    let functional = match &a.rules {
        Some(path) => {
            let rules: Vec<TableRule> = serde_json::from_str(&read(path)?)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            Functional::RuleTable(rules)
        }
        None => Functional::preset(&a.functional, spec.as_ref()).map_err(usage)?,
    };
    let vars: Vec<&str> = a
        .vars
        .iter()
        .map(String::as_str)
        .filter(|v| !v.is_empty())
        .collect();
    let mut params = BuildParams::new(
        profile,
        &vars,
        cap(a.fm_size, "fm-size")?,
        cap(a.tm_size, "tm-size")?,
    )
    .with_functional(functional);
    params.leaves = parse_leaves(profile, &a.leaves)?;
    params.pairing = match a.pairing {
        Pairing::Enumerated => PairingClosure::Enumerated,
        Pairing::Full => PairingClosure::Full,
    };
    for s in &a.assignments {
        let (var, bit) = s
            .split_once('=')
            .ok_or_else(|| usage(format!("expected VAR=BIT, got `{s}`")))?;
        let value = match bit {
            "1" | "true" => true,
            "0" | "false" => false,
            _ => return Err(usage(format!("bit must be 0 or 1 in `{s}`"))),
        };
        params = params.set(var, value);
    }
    let result = match &spec {
        Some(spec) => realize_spec_with(spec, &params, g.exec()),
        None => dlk_core::builder::build(&params),
    };
    let (model, trace) = match result {
        Ok(r) => r,
        Err(e @ dlk_core::builder::BuildError::Unrealizable { .. })
        | Err(e @ dlk_core::builder::BuildError::BoundsTooSmall { .. }) => {
            if g.json {
                print_json(&json!({ "built": false, "reason": e.to_string() }));
            } else {
                println!("not built: {e}");
            }
            return Ok(false);
        }
        Err(e) => return Err(usage(e.to_string())),
    };
    if let Some(path) = &a.trace {
        write(
            path,
            &serde_json::to_string_pretty(&trace).expect("trace serialises"),
        )?;
    }
    let summary = json!({
        "built": true,
        "profile": profile.name(),
        "provenance": model.provenance,
        "terms": trace.terms,
        "formulas": trace.formulas,
        "stages": trace.stages,
        "contributions": trace.events.len(),
        "mismatches": trace.mismatches,
    });
    match &a.out {
        Some(path) => {
            write(path, &model.to_json())?;
            if g.json {
                print_json(&summary);
            } else {
                println!(
                    "{}; {} contributions, {} mismatches; written to {}",
                    model.provenance,
                    trace.events.len(),
                    trace.mismatches,
                    path.display()
                );
            }
        }
        None => println!("{}", model.to_json()),
    }
    Ok(trace.mismatches == 0)
}

pub fn close_spec(
    g: &Global,
    path: &Path,
    out: Option<&Path>,
    probe: bool,
    fm: usize,
    tm: usize,
) -> Outcome {
    let spec = load_spec(path, Some(g.logic_or(LogicProfile::Dl)))?;
    let clash = match spec.status() {
        ClosureStatus::Clash { formula } => Some(formula.clone()),
        ClosureStatus::Closed => None,
    };
    let probe_result = if probe {
        let bounds = SpecBounds {
            fm_size: cap(fm, "fm-size")?,
            tm_size: cap(tm, "tm-size")?,
            exec: g.exec(),
            ..SpecBounds::default()
        };
        Some(probe_consistency(&spec, &bounds))
    } else {
        None
    };
    if let Some(path) = out {
        write(path, &spec.to_json())?;
    }
    let probe_text = probe_result.as_ref().map(|p| match p {
        Probe::Witness(m) => format!("model witness ({} terms)", m.interp.len()),
        Probe::Clash { formula } => format!("clash on `{formula}`"),
        Probe::Unknown { reason } => format!("unknown within bounds: {reason}"),
    });
    if g.json {
        print_json(&json!({
            "profile": spec.profile().name(),
            "formulas": spec.formulas().iter().map(|f| f.to_string()).collect::<Vec<_>>(),
            "seeds": spec.seeds().len(),
            "status": if clash.is_some() { "clash" } else { "closed" },
            "clash": clash,
            "probe": probe_text,
        }));
    } else {
        for (i, f) in spec.formulas().iter().enumerate() {
            let tag = if i < spec.seeds().len() {
                "seed"
            } else {
                "rule"
            };
            println!("{i:>3}  {tag}  {f}");
        }
        match &clash {
            Some(f) => println!("clash: both `{f}` and its negation"),
            None => println!("closed ({} formulas)", spec.len()),
        }
        if let Some(t) = &probe_text {
            println!("probe: {t}");
        }
    }
    Ok(clash.is_none() && !matches!(probe_result, Some(Probe::Clash { .. })))
}

pub fn extract_ok(g: &Global, path: &Path, search: SearchArgs, proofs: bool) -> Outcome {
    let spec = load_spec(path, Some(g.logic_or(LogicProfile::Dl)))?;
    let profile = g.logic.unwrap_or(spec.profile());
    let ok = ok_extract(&spec, profile, &spec_bounds(g, search)?);
    if g.json {
        let members: Vec<Value> = ok
            .members()
            .map(|f| {
                let w = ok.witness(f).expect("member");
                let mut v = json!({ "formula": f.to_string(), "term": w.term.to_string(), "proof_lines": w.proof.len() });
                if proofs {
                    v["proof"] = serde_json::to_value(w.proof.to_records()).expect("records");
                }
                v
            })
            .collect();
        print_json(&json!({
            "profile": profile.name(), "depth": ok.depth, "size": ok.size,
            "bounded": ok.is_bounded(), "truncated": ok.truncated, "members": members,
        }));
    } else {
        println!(
            "OK set within depth {}, size {}: {} formulas",
            ok.depth,
            ok.size,
            ok.len()
        );
        for f in ok.members() {
            let w = ok.witness(f).expect("member");
            println!("  {f}    via {} ({} lines)", w.term, w.proof.len());
            if proofs {
                for (i, r) in w.proof.to_records().iter().enumerate() {
                    println!("      {i:>3}  {:<5} {}", r.kind, r.formula);
                }
            }
        }
        if ok.truncated {
            println!("note: forward chaining was truncated; the set may be incomplete");
        }
    }
    Ok(true)
}

pub fn blue_pill(g: &Global, path: &Path, search: SearchArgs, out: Option<&Path>) -> Outcome {
    let spec = load_spec(path, Some(g.logic_or(LogicProfile::Dl)))?;
    let bp = search_blue_pill(&spec, &spec_bounds(g, search)?);
    let members: Vec<String> = bp.ok.members().map(|f| f.to_string()).collect();
    match &bp.result {
        Ok(w) => {
            if let Some(path) = out {
                write(path, &w.model.to_json())?;
            }
            let valuation: BTreeMap<&str, u8> = w
                .model
                .valuation
                .iter()
                .map(|(k, v)| (k.as_str(), u8::from(*v)))
                .collect();
            if g.json {
                print_json(&json!({
                    "outcome": "model", "ok_set": members, "valuation": valuation,
                    "phase": format!("{:?}", w.phase), "audit_clean": w.audit.is_clean(),
                }));
            } else {
                println!(
                    "JL model found for {} OK formulas ({:?})",
                    members.len(),
                    w.phase
                );
                for (k, v) in &valuation {
                    println!("  {k} = {v}");
                }
                for f in &members {
                    println!("  true: {f}");
                }
            }
        }
        Err(reason) => {
            if g.json {
                print_json(&json!({ "outcome": "failure", "ok_set": members, "reason": reason }));
            } else {
                println!("bounded failure: {reason}");
            }
        }
    }
    Ok(bp.result.is_ok())
}

pub fn check_coherence(g: &Global, path: &Path, search: SearchArgs) -> Outcome {
    let spec = load_spec(path, Some(g.logic_or(LogicProfile::Dl)))?;
    let (ok, verdict) = coherence(&spec, &spec_bounds(g, search)?);
    let fine = matches!(verdict, Coherence::CoherentWithinBounds { .. });
    match verdict {
        Coherence::CoherentWithinBounds { checked } => {
            if g.json {
                print_json(&json!({ "verdict": "coherent-within-bounds", "checked": checked }));
            } else {
                println!(
                    "coherent within bounds ({checked} of {} OK formulas checked)",
                    ok.len()
                );
            }
        }
        Coherence::Counterexample { formula, reason } => {
            if g.json {
                print_json(
                    &json!({ "verdict": "counterexample", "formula": formula.to_string(), "reason": reason }),
                );
            } else {
                println!("counterexample: `{formula}` has no JL model within bounds ({reason})");
            }
        }
    }
    Ok(fine)
}

/// Reads a formula file: a JSON array of strings, an object with
/// `formulas`, or one formula per line (`#` starts a comment).
fn formula_lines(text: &str) -> Result<(Option<String>, Vec<String>), String> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('[') || trimmed.starts_with('{') {
        let v: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let (profile, list) = match &v {
            Value::Array(_) => (None, &v),
            Value::Object(o) => (
                o.get("profile").and_then(Value::as_str).map(str::to_string),
                o.get("formulas").ok_or("missing `formulas`")?,
            ),
            _ => unreachable!(),
        };
        let items = list
            .as_array()
            .ok_or("`formulas` must be an array")?
            .iter()
            .map(|x| {
                x.as_str()
                    .map(str::to_string)
                    .ok_or("formulas must be strings")
            })
            .collect::<Result<Vec<_>, _>>()?;
        return Ok((profile, items));
    }
    Ok((
        None,
        text.lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .map(str::to_string)
            .collect(),
    ))
}

pub fn translate(g: &Global, path: &Path, out: Option<&Path>) -> Outcome {
    if let Some(p) = g.logic.filter(|p| *p != LogicProfile::Fused) {
        return Err(usage(format!("translate works on fused formulas, not {p}")));
    }
    let (declared, lines) = formula_lines(&read(path)?)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    if let Some(p) = declared.filter(|p| !p.eq_ignore_ascii_case("fused")) {
        println!(
            "rejected: {} declares profile `{p}`; translation needs fused input",
            path.display()
        );
        return Ok(false);
    }
    let mut dict = BTreeMap::new();
    let mut images = Vec::new();
    for src in &lines {
        match LogicProfile::Fused.parse_formula(src) {
            Ok(f) => images.push(translate_with(&f, &mut dict).to_string()),
            Err(e) => {
                println!("rejected: `{src}` is not a fused formula: {e}");
                return Ok(false);
            }
        }
    }
    let dictionary: BTreeMap<&String, String> =
        dict.iter().map(|(k, v)| (k, v.to_string())).collect();
    let doc = json!({ "profile": "lp", "formulas": images, "dictionary": dictionary });
    let text = serde_json::to_string_pretty(&doc).expect("json");
    match out {
        Some(p) => {
            write(p, &text)?;
            if !g.json {
                println!(
                    "translated {} formulas ({} fresh variables) to {}",
                    images.len(),
                    dict.len(),
                    p.display()
                );
            } else {
                println!("{text}");
            }
        }
        None if g.json => println!("{text}"),
        None => {
            for f in &images {
                println!("{f}");
            }
            for (k, v) in &dictionary {
                println!("# {k} := {v}");
            }
        }
    }
    Ok(true)
}

pub fn internalize(g: &Global, path: &Path, spec: Option<&Path>, out: Option<&Path>) -> Outcome {
    let proof = load_proof(path, g.logic_or(LogicProfile::Fused))?;
    let profile = g.logic.unwrap_or(proof.profile);
    let spec = match spec {
        Some(p) => load_spec(p, Some(profile))?,
        None => ConstantSpec::empty(profile),
    };
    let lifted = match lift(&proof, &spec) {
        Ok(l) => l,
        Err(e) => {
            if g.json {
                print_json(&json!({ "internalized": false, "reason": e.to_string() }));
            } else {
                println!("cannot internalize: {e}");
            }
            return Ok(false);
        }
    };
    let verdict = dlk_core::proofs::check_proof(&lifted.lifted, profile, &spec);
    if let Some(p) = out {
        write(p, &lifted.lifted.to_json())?;
    }
    if g.json {
        print_json(&json!({
            "internalized": true, "term": lifted.term.to_string(),
            "formula": lifted.justified.to_string(), "lines": lifted.lifted.len(),
            "checked": verdict.is_accepted(),
        }));
    } else {
        println!(
            "{}  ({} lines, {})",
            lifted.justified,
            lifted.lifted.len(),
            if verdict.is_accepted() {
                "accepted"
            } else {
                "REJECTED"
            }
        );
        if out.is_none() {
            for (i, r) in lifted.lifted.to_records().iter().enumerate() {
                println!("  {i:>3}  {:<5} {}", r.kind, r.formula);
            }
        }
    }
    Ok(verdict.is_accepted())
}

pub fn scenario(g: &Global, name: Option<&str>, list: bool) -> Outcome {
    if list || name.is_none() {
        for n in scenarios::names() {
            let s = scenarios::load(n).expect("bundled scenarios parse");
            println!("{n:<22} {}", s.title);
        }
        return if list {
            Ok(true)
        } else {
            Err(usage("scenario needs a name (or --list)"))
        };
    }
    let s = scenarios::load(name.expect("checked")).map_err(usage)?;
    let report = scenarios::run(&s, g.exec());
    if g.json {
        print_json(&serde_json::to_value(&report).expect("report serialises"));
    } else {
        print!("{}", report.render());
    }
    Ok(report.passed)
}

pub fn enumerate(
    g: &Global,
    what: EnumKind,
    vars: &[String],
    leaves: &[String],
    size: usize,
) -> Outcome {
    let profile = g.logic_or(LogicProfile::Dl);
    let size = cap(size, "size")?;
    let leaves = parse_leaves(profile, leaves)?;
    let terms = enumerate_terms(profile.operators(), &leaves, size);
    let items: Vec<String> = match what {
        EnumKind::Terms => terms.items().iter().map(|t| t.to_string()).collect(),
        EnumKind::Formulas => {
            let vars: Vec<String> = vars.iter().filter(|v| !v.is_empty()).cloned().collect();
            enumerate_formulas(&vars, terms.items(), size)
                .items()
                .iter()
                .map(|f| f.to_string())
                .collect()
        }
    };
    if g.json {
        let rows: Vec<Value> = items
            .iter()
            .enumerate()
            .map(|(i, s)| json!({ "index": i, "item": s }))
            .collect();
        print_json(&Value::Array(rows));
    } else {
        for (i, s) in items.iter().enumerate() {
            println!("{i}\t{s}");
        }
    }
    Ok(true)
}

pub fn schemas(g: &Global) -> Outcome {
    let rows: Vec<&dlk_core::logics::AxiomSchema> = match g.logic {
        Some(p) => schema_table().iter().filter(|s| p.has_schema(s.id)).collect(),
        None => schema_table().iter().collect(),
    };
    if g.json {
        let v: Vec<Value> = rows
            .iter()
            .map(|s| {
                json!({
                    "id": s.id.name(), "title": s.title, "template": s.template_text(),
                    "sign": format!("{:?}", s.sign).to_lowercase(),
                    "profiles": LogicProfile::ALL.iter().filter(|p| p.has_schema(s.id)).map(|p| p.name()).collect::<Vec<_>>(),
                })
            })
            .collect();
        print_json(&Value::Array(v));
    } else {
        for s in rows {
            println!("{:<16} {:<28} {}", s.id.name(), s.title, s.template_text());
        }
    }
    Ok(true)
}
