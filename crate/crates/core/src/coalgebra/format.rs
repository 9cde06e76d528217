//! JSON spec files.
//!
//! ```json
//! {
//!   "field": "Q",
//!   "name": "example4",
//!   "graded": false,
//!   "families": [{ "name": "x", "parity": 0, "range": [0, null] }],
//!   "delta": [
//!     { "family": "x",
//!       "terms": [{ "sum": { "from": "0", "to": "n" }, "coeff": "1",
//!                   "left": "x[i]", "right": "x[n - i]" }] }
//!   ],
//!   "coderivation": [
//!     { "family": "x", "terms": [{ "coeff": "n + 1", "target": "x[n + 1]" }] }
//!   ],
//!   "shift_bound": 1
//! }
//! ```
//!
//! An entry may carry `"when": {"mod": 3, "rem": 1}` or `"when": {"at": 2}`.
//! `coeff` defaults to `"1"`; an empty `terms` list means the image is zero.

use serde::{Deserialize, Serialize};

use super::expr::{Affine, IndexPoly};
use super::rule::{FactorRef, Guard, RuleEntry, RuleSet, RuleTerm, SumRange};
use super::spec::{CoalgebraSpec, FamilyDecl};
use crate::error::{Error, Result};
use crate::exactlin::{FamilyId, Parity};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    field: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(default)]
    graded: bool,
    families: Vec<RawFamily>,
    delta: Vec<RawEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coderivation: Option<Vec<RawEntry>>,
    shift_bound: u64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFamily {
    name: FamilyId,
    #[serde(default)]
    parity: u8,
    range: (u64, Option<u64>),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    family: FamilyId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    when: Option<RawGuard>,
    terms: Vec<RawTerm>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGuard {
    #[serde(rename = "mod", default, skip_serializing_if = "Option::is_none")]
    modulus: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rem: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    at: Option<u64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sum: Option<RawSum>,
    #[serde(default = "IndexPoly::one")]
    coeff: IndexPoly,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    left: Option<FactorRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    right: Option<FactorRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    target: Option<FactorRef>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSum {
    from: Affine,
    to: Affine,
}

fn at(path: &str, e: impl std::fmt::Display) -> Error {
    Error::Parse(format!("at `{path}`: {e}"))
}

/// Parses a spec file. Syntax errors cite line, column and key path;
/// semantic errors cite the key path.
pub fn parse_spec_json(text: &str) -> Result<CoalgebraSpec> {
    let mut de = serde_json::Deserializer::from_str(text);
    let raw: RawSpec = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        at(&path, e.into_inner())
    })?;
    de.end().map_err(|e| Error::Parse(e.to_string()))?;
    from_raw(raw)
}

fn from_raw(raw: RawSpec) -> Result<CoalgebraSpec> {
    if raw.field != "Q" {
        return Err(at("field", format!("only the rationals \"Q\" are supported, got {:?}", raw.field)));
    }
    let mut families = Vec::new();
    for (k, f) in raw.families.into_iter().enumerate() {
        let parity = Parity::from_bit(f.parity).ok_or_else(|| at(&format!("families[{k}].parity"), "parity must be 0 or 1"))?;
        families.push(FamilyDecl::new(f.name, parity, f.range.0, f.range.1));
    }
    let declared = |id: &FamilyId| families.iter().any(|f| &f.id == id);
    let delta = rules_from_raw("delta", raw.delta, 2, &declared)?;
    let coderivation = raw.coderivation.map(|d| rules_from_raw("coderivation", d, 1, &declared)).transpose()?;
    let name = raw.name.unwrap_or_else(|| "spec".to_string());
    CoalgebraSpec::new(&name, raw.graded, families, delta, coderivation, raw.shift_bound)
}

fn rules_from_raw(key: &str, raw: Vec<RawEntry>, arity: usize, declared: &dyn Fn(&FamilyId) -> bool) -> Result<RuleSet> {
    let mut entries = Vec::new();
    for (k, e) in raw.into_iter().enumerate() {
        let path = format!("{key}[{k}]");
        if !declared(&e.family) {
            return Err(at(&format!("{path}.family"), format!("unknown family `{}`", e.family)));
        }
        let guard = match e.when {
            None => Guard::Always,
            Some(RawGuard { modulus: Some(m), rem: Some(r), at: None }) if m > 0 && r < m => Guard::Residue { modulus: m, residue: r },
            Some(RawGuard { modulus: None, rem: None, at: Some(a) }) => Guard::At(a),
            Some(_) => return Err(at(&format!("{path}.when"), "expected {\"mod\": m, \"rem\": r} with r < m, or {\"at\": n}")),
        };
        let mut terms = Vec::new();
        for (j, t) in e.terms.into_iter().enumerate() {
            let tpath = format!("{path}.terms[{j}]");
            let factors = match (arity, t.left, t.right, t.target) {
                (2, Some(l), Some(r), None) => vec![l, r],
                (1, None, None, Some(x)) => vec![x],
                (2, ..) => return Err(at(&tpath, "a comultiplication term needs `left` and `right` (and no `target`)")),
                _ => return Err(at(&tpath, "a coderivation term needs `target` only")),
            };
            for (f, name) in factors.iter().zip(["left", "right"]) {
                if !declared(&f.family) {
                    let field = if arity == 1 { "target" } else { name };
                    return Err(at(&format!("{tpath}.{field}"), format!("unknown family `{}`", f.family)));
                }
            }
            let sum = t.sum.map(|s| SumRange::new(s.from, s.to)).transpose().map_err(|e| at(&format!("{tpath}.sum"), e))?;
            let term = RuleTerm { sum, coeff: t.coeff, factors };
            RuleSet::new(arity, vec![RuleEntry::new(e.family.clone(), guard, vec![term.clone()])]).map_err(|e| at(&tpath, e))?;
            terms.push(term);
        }
        entries.push(RuleEntry::new(e.family, guard, terms));
    }
    RuleSet::new(arity, entries)
}

fn rules_to_raw(rules: &RuleSet) -> Vec<RawEntry> {
    rules
        .entries()
        .iter()
        .map(|e| RawEntry {
            family: e.family.clone(),
            when: match e.guard {
                Guard::Always => None,
                Guard::Residue { modulus, residue } => Some(RawGuard { modulus: Some(modulus), rem: Some(residue), at: None }),
                Guard::At(a) => Some(RawGuard { modulus: None, rem: None, at: Some(a) }),
            },
            terms: e
                .terms
                .iter()
                .map(|t| {
                    let (left, right, target) = match t.factors.as_slice() {
                        [x] => (None, None, Some(x.clone())),
                        [l, r] => (Some(l.clone()), Some(r.clone()), None),
                        _ => unreachable!("rule sets have arity 1 or 2"),
                    };
                    RawTerm { sum: t.sum.map(|s| RawSum { from: s.from, to: s.to }), coeff: t.coeff.clone(), left, right, target }
                })
                .collect(),
        })
        .collect()
}

/// Pretty-printed spec file for `spec`.
pub fn spec_to_json(spec: &CoalgebraSpec) -> String {
    let raw = RawSpec {
        field: "Q".into(),
        name: Some(spec.name().to_string()),
        graded: spec.is_graded(),
        families: spec
            .families()
            .iter()
            .map(|f| RawFamily { name: f.id.clone(), parity: f.parity.bit(), range: (f.lo, f.hi) })
            .collect(),
        delta: rules_to_raw(spec.delta_rules()),
        coderivation: spec.coderivation_rules().map(rules_to_raw),
        shift_bound: spec.shift_bound(),
    };
    let mut s = serde_json::to_string_pretty(&raw).expect("spec serialization is infallible");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const EX4: &str = r#"{
  "field": "Q",
  "name": "ex4",
  "families": [{ "name": "x", "parity": 0, "range": [0, null] }],
  "delta": [{ "family": "x", "terms": [{ "sum": { "from": "0", "to": "n" }, "left": "x[i]", "right": "x[n - i]" }] }],
  "coderivation": [{ "family": "x", "terms": [{ "coeff": "n + 1", "target": "x[n + 1]" }] }],
  "shift_bound": 1
}"#;

    #[test]
    fn parses_and_roundtrips() {
        let spec = parse_spec_json(EX4).unwrap();
        let x3 = spec.parse_label("x:3").unwrap();
        assert_eq!(spec.delta(&x3).unwrap().len(), 4);
        let again = parse_spec_json(&spec_to_json(&spec)).unwrap();
        assert!(spec.same_rules(&again));
    }

    #[test]
    fn errors_cite_key_and_position() {
        let bad = EX4.replace("\"x[n - i]\"", "\"x[n - i\"");
        let msg = parse_spec_json(&bad).unwrap_err().to_string();
        assert!(msg.contains("delta[0].terms[0].right"), "{msg}");
        assert!(msg.contains("line 5"), "{msg}");

        let unknown = EX4.replace("\"target\": \"x[n + 1]\"", "\"target\": \"y[n + 1]\"");
        let msg = parse_spec_json(&unknown).unwrap_err().to_string();
        assert!(msg.contains("coderivation[0].terms[0].target"), "{msg}");

        let field = EX4.replace("\"Q\"", "\"R\"");
        assert!(parse_spec_json(&field).unwrap_err().to_string().contains("`field`"));

        let extra = EX4.replace("\"shift_bound\"", "\"shift\": 1, \"shift_bound\"");
        assert!(parse_spec_json(&extra).is_err());
    }
}
