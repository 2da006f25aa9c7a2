//! Loading Coxeter matrices, Cartan matrices and representations from inline
//! JSON, files, or built-in corpus entries (`corpus:NAME`).

use serde_json::Value;
use vinberg::corpus::{self, CorpusEntry};
use vinberg::represent::rep_from_cartan;
use vinberg::wire::{CartanJson, CoxeterJson, ForgeJson, RepJson};
use vinberg::{CartanMatrix, CoxeterMatrix, ReflectionRep};

use crate::Failure;

fn corpus_entry(name: &str) -> Result<CorpusEntry, Failure> {
    corpus::entry(name).ok_or_else(|| Failure::Input(format!("no corpus entry named {name:?} (try `corpus --list`)")))
}

/// The JSON text behind an argument: inline if it starts with `{` or `[`,
/// otherwise a file path.
fn read_json(arg: &str) -> Result<Value, Failure> {
    let text = if arg.trim_start().starts_with(['{', '[']) {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| Failure::Input(format!("cannot read {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{arg}: invalid JSON: {e}")))
}

/// Rational entries may be written as JSON numbers or strings.
fn numbers_to_strings(v: Value) -> Value {
    match v {
        Value::Number(n) => Value::String(n.to_string()),
        Value::Array(a) => Value::Array(a.into_iter().map(numbers_to_strings).collect()),
        other => other,
    }
}

fn parse<T: serde::de::DeserializeOwned>(v: Value, what: &str) -> Result<T, Failure> {
    serde_json::from_value(v).map_err(|e| Failure::Input(format!("not a {what}: {e}")))
}

fn split_corpus(arg: &str) -> Option<&str> {
    arg.strip_prefix("corpus:")
}

pub fn coxeter(arg: &str) -> Result<CoxeterMatrix, Failure> {
    if let Some(name) = split_corpus(arg) {
        return Ok(corpus_entry(name)?.coxeter);
    }
    let mut v = read_json(arg)?;
    if v.is_array() {
        let rank = v.as_array().map_or(0, Vec::len);
        v = serde_json::json!({ "rank": rank, "m": v });
    }
    Ok(parse::<CoxeterJson>(v, "Coxeter matrix {\"rank\", \"m\"}")?.to_matrix()?)
}

pub fn cartan(arg: &str) -> Result<CartanMatrix, Failure> {
    if let Some(name) = split_corpus(arg) {
        return corpus_entry(name)?
            .cartan
            .ok_or_else(|| Failure::Input(format!("corpus entry {name:?} has no Cartan matrix")));
    }
    let mut v = read_json(arg)?;
    if v.is_array() {
        let rank = v.as_array().map_or(0, Vec::len);
        v = serde_json::json!({ "rank": rank, "a": v });
    }
    if let Some(a) = v.get_mut("a") {
        *a = numbers_to_strings(a.take());
    }
    Ok(parse::<CartanJson>(v, "Cartan matrix {\"rank\", \"a\"}")?.to_matrix()?)
}

/// A representation from `--rep`, built from `--cartan` and `--coxeter`, or
/// the standard representation of `--coxeter` alone.
/// `coxeter` overrides the matrix embedded in the representation.
pub fn rep(rep: Option<&str>, cartan_arg: Option<&str>, coxeter_arg: Option<&str>) -> Result<ReflectionRep, Failure> {
    let m = coxeter_arg.map(coxeter).transpose()?;
    if let Some(arg) = rep {
        if let Some(name) = split_corpus(arg) {
            let e = corpus_entry(name)?;
            let a = e
                .cartan
                .ok_or_else(|| Failure::Input(format!("corpus entry {name:?} has no Cartan matrix")))?;
            return Ok(rep_from_cartan(&a, m.as_ref().unwrap_or(&e.coxeter))?);
        }
        let mut v = read_json(arg)?;
        for key in ["generators", "alphas", "vs"] {
            if let Some(x) = v.get_mut(key) {
                *x = numbers_to_strings(x.take());
            }
        }
        return Ok(parse::<RepJson>(v, "representation {\"dim\", \"generators\", \"alphas\", \"vs\"}")?.to_rep(m.as_ref())?);
    }
    match (cartan_arg, m) {
        (Some(a), _) => Ok(rep_from_cartan(&cartan(a)?, &coxeter_for(coxeter_arg, cartan_arg)?)?),
        (None, Some(m)) => Ok(m.standard_rep()?),
        (None, None) => Err(Failure::Input("give --rep, --cartan, or --coxeter alone for the standard representation".into())),
    }
}

/// `--coxeter`, falling back to the diagram of a `corpus:NAME` Cartan matrix.
pub fn coxeter_for(coxeter_arg: Option<&str>, cartan_arg: Option<&str>) -> Result<CoxeterMatrix, Failure> {
    match (coxeter_arg, cartan_arg.and_then(split_corpus)) {
        (Some(arg), _) => coxeter(arg),
        (None, Some(name)) => Ok(corpus_entry(name)?.coxeter),
        (None, None) => Err(Failure::Input("--coxeter is required".into())),
    }
}

pub fn forge_bundle(arg: &str) -> Result<ForgeJson, Failure> {
    parse(read_json(arg)?, "certificate bundle")
}

/// `"1-2,3-5"` → `[(0,1), (2,4)]`.
pub fn pairs(arg: &str) -> Result<Vec<(usize, usize)>, Failure> {
    let bad = || Failure::Input(format!("cannot parse pairs {arg:?}; expected e.g. 1-2,3-5 (1-based)"));
    arg.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|p| {
            let (a, b) = p.split_once('-').ok_or_else(bad)?;
            let a: usize = a.trim().parse().map_err(|_| bad())?;
            let b: usize = b.trim().parse().map_err(|_| bad())?;
            if a == 0 || b == 0 {
                return Err(bad());
            }
            Ok((a - 1, b - 1))
        })
        .collect()
}
