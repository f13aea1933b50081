use std::fmt;
use std::fs;
use std::path::Path;

use dlk_core::logics::LogicProfile;
use dlk_core::proofs::Proof;
use dlk_core::semantics::ModularModel;
use dlk_core::specifications::ConstantSpec;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        2
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

pub fn usage(m: impl Into<String>) -> CliError {
    CliError::Usage(m.into())
}

pub fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn in_file(path: &Path, e: impl fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

pub fn load_spec(path: &Path, fallback: Option<LogicProfile>) -> Result<ConstantSpec, CliError> {
    ConstantSpec::from_json(&read(path)?, fallback).map_err(|e| in_file(path, e))
}

pub fn load_model(path: &Path) -> Result<ModularModel, CliError> {
    ModularModel::from_json(&read(path)?).map_err(|e| in_file(path, e))
}

pub fn load_proof(path: &Path, fallback: LogicProfile) -> Result<Proof, CliError> {
    Proof::from_json(&read(path)?, fallback).map_err(|e| in_file(path, e))
}

/// Caps a size bound by `DLK_MAX_BOUND` when it is set.
pub fn cap(value: usize, what: &str) -> Result<usize, CliError> {
    let Ok(raw) = std::env::var("DLK_MAX_BOUND") else {
        return Ok(value);
    };
    let max: usize = raw
        .trim()
        .parse()
        .map_err(|_| usage(format!("DLK_MAX_BOUND must be a number, got `{raw}`")))?;
    if value > max {
        eprintln!("dlk: {what} {value} capped to {max} by DLK_MAX_BOUND");
        Ok(max)
    } else {
        Ok(value)
    }
}

pub fn print_json(value: &serde_json::Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("json values serialise")
    );
}
