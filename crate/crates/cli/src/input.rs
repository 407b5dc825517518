//! Parsing of command-line values. Rationals are exact: `p/q` or decimals.

use std::collections::BTreeSet;

use ncomplements::dim1::{CurveKind, CurvePair};
use ncomplements::{ExactScalar, Multiplicities, Rat};

pub fn rat(s: &str) -> Result<Rat, String> {
    Rat::parse_exact(s.trim()).map_err(|e| e.to_string())
}

pub fn rat_list(s: &str) -> Result<Vec<Rat>, String> {
    split(s).map(rat).collect()
}

pub fn rat_set(s: &str) -> Result<BTreeSet<Rat>, String> {
    rat_list(s).map(|v| v.into_iter().collect())
}

pub fn index_list(s: &str) -> Result<Vec<u64>, String> {
    split(s)
        .map(|x| x.parse::<u64>().map_err(|_| format!("`{x}` is not a nonnegative integer")))
        .collect()
}

fn split(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty())
}

/// `"1:1, 2:1/2"`; unlabeled entries get `P1, P2, …` by position.
pub fn multiplicities(s: &str) -> Result<Multiplicities, String> {
    let mut out = Multiplicities::new();
    for (i, item) in split(s).enumerate() {
        let (label, value) = match item.split_once(':') {
            Some((l, v)) => (l.trim().to_string(), v),
            None => (format!("P{}", i + 1), item),
        };
        if label.is_empty() {
            return Err(format!("empty label in `{item}`"));
        }
        out.push(label, rat(value)?).map_err(|e| e.to_string())?;
    }
    Ok(out)
}

pub fn kind(s: &str) -> Result<CurveKind, String> {
    match s {
        "rational" | "p1" => Ok(CurveKind::Rational),
        "genus1" => Ok(CurveKind::Genus1),
        "local_germ" | "local-germ" => Ok(CurveKind::LocalGerm),
        _ => Err(format!("unknown curve kind `{s}` (rational, genus1, local_germ)")),
    }
}

/// Inline JSON when it starts with `{`, otherwise a path to a JSON file.
pub fn json_document(s: &str) -> Result<String, String> {
    if s.trim_start().starts_with('{') {
        Ok(s.to_string())
    } else {
        std::fs::read_to_string(s).map_err(|e| format!("cannot read `{s}`: {e}"))
    }
}

pub fn pair_from_json(s: &str) -> Result<CurvePair<Rat>, String> {
    let raw: CurvePair<Rat> = serde_json::from_str(&json_document(s)?).map_err(|e| e.to_string())?;
    Ok(raw)
}
