use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logics::{LogicProfile, ProfileError};
use crate::syntax::{cmp_formulas, cmp_terms, Formula, ParseError, Term};

/// A valuation of propositional variables together with an interpretation
/// of terms as formula sets. Unlisted variables are false and unlisted
/// terms justify nothing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularModel {
    pub profile: LogicProfile,
    pub valuation: BTreeMap<String, bool>,
    pub interp: BTreeMap<Term, BTreeSet<Formula>>,
    /// Largest formula size for which pairing and introspection closure is
    /// promised. `None` means closure is complete on the listed terms.
    pub horizon: Option<usize>,
    pub provenance: String,
}

impl ModularModel {
    pub fn new(profile: LogicProfile) -> Self {
        ModularModel {
            profile,
            valuation: BTreeMap::new(),
            interp: BTreeMap::new(),
            horizon: None,
            provenance: String::new(),
        }
    }

    /// The trivial model over a valuation: every term is interpreted as ∅.
    pub fn trivial(profile: LogicProfile, valuation: BTreeMap<String, bool>) -> Self {
        ModularModel {
            valuation,
            ..ModularModel::new(profile)
        }
    }

    pub fn var(&self, name: &str) -> bool {
        self.valuation.get(name).copied().unwrap_or(false)
    }

    pub fn set_of(&self, t: &Term) -> &BTreeSet<Formula> {
        static EMPTY: BTreeSet<Formula> = BTreeSet::new();
        self.interp.get(t).unwrap_or(&EMPTY)
    }

    pub fn justifies(&self, t: &Term, f: &Formula) -> bool {
        self.interp.get(t).is_some_and(|s| s.contains(f))
    }

    pub fn insert(&mut self, t: Term, f: Formula) -> bool {
        self.interp.entry(t).or_default().insert(f)
    }

    pub fn eval(&self, f: &Formula) -> bool {
        eval(self, f)
    }

    /// Terms with a listed (possibly empty) set, in enumeration order.
    pub fn terms(&self) -> Vec<Term> {
        let mut ts: Vec<Term> = self.interp.keys().cloned().collect();
        ts.sort_by(cmp_terms);
        ts
    }

    pub fn to_file(&self) -> ModelFile {
        ModelFile {
            profile: self.profile,
            valuation: self
                .valuation
                .iter()
                .map(|(k, v)| (k.clone(), u8::from(*v)))
                .collect(),
            interp: self
                .interp
                .iter()
                .map(|(t, set)| {
                    let mut fs: Vec<&Formula> = set.iter().collect();
                    fs.sort_by(|a, b| cmp_formulas(a, b));
                    (t.to_string(), fs.iter().map(|f| f.to_string()).collect())
                })
                .collect(),
            horizon: self.horizon,
            provenance: self.provenance.clone(),
        }
    }

    pub fn from_file(file: &ModelFile) -> Result<Self, ModelError> {
        let profile = file.profile;
        let mut model = ModularModel::new(profile);
        for (name, bit) in &file.valuation {
            let value = match bit {
                0 => false,
                1 => true,
                _ => {
                    return Err(ModelError::BadBit {
                        name: name.clone(),
                        value: *bit,
                    })
                }
            };
            model.valuation.insert(name.clone(), value);
        }
        for (ts, fs) in &file.interp {
            let t = profile.parse_term(ts).map_err(|source| ModelError::Parse {
                text: ts.clone(),
                source,
            })?;
            profile.check_term(&t)?;
            let set = model.interp.entry(t).or_default();
            for src in fs {
                let f = profile
                    .parse_formula(src)
                    .map_err(|source| ModelError::Parse {
                        text: src.clone(),
                        source,
                    })?;
                profile.check_formula(&f)?;
                set.insert(f);
            }
        }
        model.horizon = file.horizon;
        model.provenance = file.provenance.clone();
        Ok(model)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("model serialises")
    }

    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        let file: ModelFile =
            serde_json::from_str(text).map_err(|e| ModelError::Json(e.to_string()))?;
        ModularModel::from_file(&file)
    }
}

/// On-disk form of a model. Terms and formulas are stored printed.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelFile {
    pub profile: LogicProfile,
    #[serde(default)]
    pub valuation: BTreeMap<String, u8>,
    #[serde(default)]
    pub interp: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub provenance: String,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("malformed model file: {0}")]
    Json(String),
    #[error("in `{text}`: {source}")]
    Parse { text: String, source: ParseError },
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error("valuation of `{name}` must be 0 or 1, got {value}")]
    BadBit { name: String, value: u8 },
}

/// Truth value of a formula: `t:P` holds iff `P` is in the set of `t`,
/// connectives are classical and `_|_` is false.
pub fn eval(model: &ModularModel, f: &Formula) -> bool {
    match f {
        Formula::Bottom => false,
        Formula::Var(name) => model.var(name),
        Formula::Not(a) => !eval(model, a),
        Formula::And(a, b) => eval(model, a) && eval(model, b),
        Formula::Or(a, b) => eval(model, a) || eval(model, b),
        Formula::Implies(a, b) => !eval(model, a) || eval(model, b),
        Formula::Just(t, body) => model.justifies(t, body),
    }
}

/// `X·Y`: consequents of implications in `X` whose antecedent lies in `Y`.
pub fn set_product(x: &BTreeSet<Formula>, y: &BTreeSet<Formula>) -> BTreeSet<Formula> {
    x.iter()
        .filter_map(|f| match f {
            Formula::Implies(p, q) if y.contains(&**p) => Some((**q).clone()),
            _ => None,
        })
        .collect()
}

/// `X⊗Y`: every conjunction with left part from `X` and right part from `Y`.
pub fn set_pairing(x: &BTreeSet<Formula>, y: &BTreeSet<Formula>) -> BTreeSet<Formula> {
    let mut out = BTreeSet::new();
    for p in x {
        for q in y {
            out.insert(Formula::and(p.clone(), q.clone()));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Sign;

    fn f(src: &str) -> Formula {
        LogicProfile::Dl.parse_formula(src).unwrap()
    }

    fn set(items: &[&str]) -> BTreeSet<Formula> {
        items.iter().map(|s| f(s)).collect()
    }

    #[test]
    fn trivial_model_satisfies_denial() {
        let m = ModularModel::new(LogicProfile::Dl);
        assert!(!m.eval(&f("t:P")));
        assert!(m.eval(&f("t:P -> ~P")));
        assert!(m.eval(&f("~_|_")));
    }

    #[test]
    fn false_member_is_denied() {
        let mut m = ModularModel::new(LogicProfile::Dl);
        m.insert(Term::leaf("t", Sign::Unsigned), f("P"));
        assert!(m.eval(&f("t:P")));
        assert!(m.eval(&f("~P")));
    }

    #[test]
    fn product_examples() {
        assert_eq!(set_product(&set(&["P -> Q"]), &set(&["P"])), set(&["Q"]));
        assert!(set_product(&set(&["P -> Q"]), &set(&["R"])).is_empty());
        assert_eq!(
            set_product(&set(&["P -> Q", "P -> R"]), &set(&["P"])),
            set(&["Q", "R"])
        );
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(set_pairing(&set(&["A"]), &set(&["B"])), set(&["A /\\ B"]));
        assert!(set_pairing(&BTreeSet::new(), &set(&["B"])).is_empty());
        assert_eq!(
            set_pairing(&set(&["A", "B"]), &set(&["C"])),
            set(&["A /\\ C", "B /\\ C"])
        );
    }

    #[test]
    fn json_round_trip() {
        let mut m = ModularModel::new(LogicProfile::Dl);
        m.valuation.insert("Q".into(), true);
        m.insert(LogicProfile::Dl.parse_term("[x+y]").unwrap(), f("P /\\ ~Q"));
        m.horizon = Some(5);
        let back = ModularModel::from_json(&m.to_json()).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn rejects_bad_bits() {
        let src = r#"{"profile":"dl","valuation":{"P":2}}"#;
        assert!(matches!(
            ModularModel::from_json(src),
            Err(ModelError::BadBit { .. })
        ));
    }
}
