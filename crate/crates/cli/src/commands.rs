use serde_json::{json, Number, Value};
use vinberg::cartan::{CycleProduct, DEFAULT_CYCLE_BUDGET};
use vinberg::corpus;
use vinberg::forge::{self, ForgeError, ForgeOutput};
use vinberg::integral::{self, IntegralError};
use vinberg::represent::{default_word_cap, DEFAULT_ORDER_CAP};
use vinberg::wire::{format_matrix, format_rational, format_vector, CartanJson, CoxeterJson, ForgeJson, RepJson};
use vinberg::{CartanError, Matrix, RepError, ReflectionRep, Symmetrizability, VerdictKind};

use crate::{input, Failure, Options};

/// Exit status carried alongside the JSON result.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Positive = 0,
    Negative = 1,
    Indeterminate = 3,
}

pub type Outcome = Result<(Value, Verdict), Failure>;

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

/// Integer matrix as plain JSON integers of any size.
fn int_matrix(m: &Matrix) -> Value {
    Value::Array(
        m.to_rows()
            .iter()
            .map(|r| {
                Value::Array(
                    r.iter()
                        .map(|x| Value::Number(x.to_integer().to_string().parse::<Number>().expect("integer literal")))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn require<'a>(arg: &'a Option<String>, flag: &str) -> Result<&'a str, Failure> {
    arg.as_deref().ok_or_else(|| Failure::Input(format!("--{flag} is required")))
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("wire types serialize")
}

fn positive(v: Value) -> Outcome {
    Ok((v, Verdict::Positive))
}

fn verdict_if(ok: bool) -> Verdict {
    if ok {
        Verdict::Positive
    } else {
        Verdict::Negative
    }
}

pub fn validate(o: &Options) -> Outcome {
    let mut out = serde_json::Map::new();
    let attempt = |r: Result<Value, Failure>| match r {
        Ok(v) => (v, true),
        Err(e) => (json!({ "valid": false, "reason": e.to_string() }), false),
    };
    let mut all_valid = true;
    let mut any = false;
    if let Some(arg) = &o.coxeter {
        let (v, ok) = attempt(input::coxeter(arg).map(|m| to_value(&CoxeterJson::new(&m))));
        out.insert("coxeter".into(), v);
        all_valid &= ok;
        any = true;
    }
    if let Some(arg) = &o.cartan {
        let (v, ok) = attempt(input::cartan(arg).map(|a| to_value(&CartanJson::new(&a))));
        out.insert("cartan".into(), v);
        all_valid &= ok;
        any = true;
    }
    if let Some(arg) = &o.rep {
        let (v, ok) = attempt(input::rep(Some(arg), None, o.coxeter.as_deref()).map(|r| to_value(&RepJson::new(&r))));
        out.insert("rep".into(), v);
        all_valid &= ok;
        any = true;
    }
    if !any {
        return Err(Failure::Input("give at least one of --coxeter, --cartan, --rep".into()));
    }
    out.insert("valid".into(), json!(all_valid));
    Ok((Value::Object(out), verdict_if(all_valid)))
}

pub fn classify(o: &Options) -> Outcome {
    let m = input::coxeter(require(&o.coxeter, "coxeter")?)?;
    let class = m.classify();
    let components: Vec<Value> = class
        .components
        .iter()
        .map(|c| json!({ "vertices": one_based(&c.vertices), "kind": c.kind, "family": c.family }))
        .collect();
    let quasi_lanner = m.find_quasi_lanner_subset().ok().map(|t| one_based(&t));
    positive(json!({
        "rank": m.rank(),
        "kind": class.kind,
        "irreducible": m.is_irreducible(),
        "right_angled": m.is_right_angled(),
        "components": components,
        "quasi_lanner": m.is_quasi_lanner(),
        "quasi_lanner_subset": quasi_lanner,
    }))
}

pub fn compatible(o: &Options) -> Outcome {
    let a = input::cartan(require(&o.cartan, "cartan")?)?;
    let m = input::coxeter_for(o.coxeter.as_deref(), o.cartan.as_deref())?;
    let report = a.compatibility(&m)?;
    let pairs: Vec<Value> = report
        .pairs
        .iter()
        .map(|p| {
            json!({
                "pair": [p.i + 1, p.j + 1],
                "label": p.label.to_wire(),
                "product": format_rational(&p.product),
                "ok": p.ok,
            })
        })
        .collect();
    Ok((json!({ "compatible": report.compatible, "pairs": pairs }), verdict_if(report.compatible)))
}

pub fn symmetrizable(o: &Options) -> Outcome {
    let a = input::cartan(require(&o.cartan, "cartan")?)?;
    Ok(match a.symmetrizability() {
        Symmetrizability::Symmetrizable { weights } => (
            json!({ "symmetrizable": true, "weights": format_vector(&weights) }),
            Verdict::Positive,
        ),
        Symmetrizability::NotSymmetrizable { cycle, forward, reverse } => (
            json!({
                "symmetrizable": false,
                "witness_cycle": one_based(&cycle),
                "forward": format_rational(&forward),
                "reverse": format_rational(&reverse),
            }),
            Verdict::Negative,
        ),
    })
}

pub fn cartan_type(o: &Options) -> Outcome {
    let a = input::cartan(require(&o.cartan, "cartan")?)?;
    let t = a.cartan_type()?;
    positive(json!({ "type": t, "rank": a.matrix_rank(), "determinant": format_rational(&a.determinant()) }))
}

fn cycle_json(c: &CycleProduct) -> Value {
    json!({
        "cycle": one_based(&c.cycle),
        "forward": format_rational(&c.forward),
        "reverse": format_rational(&c.reverse),
    })
}

pub fn cycles(o: &Options) -> Outcome {
    let a = input::cartan(require(&o.cartan, "cartan")?)?;
    let max_len = o.max_len.unwrap_or(a.rank());
    let budget = o.cycle_budget.unwrap_or(DEFAULT_CYCLE_BUDGET);
    let report = match a.cyclic_products(max_len, budget) {
        Ok(r) => r,
        Err(CartanError::CycleBudgetExceeded { limit }) => {
            return Ok((
                json!({ "all_integer": null, "reason": format!("more than {limit} simple cycles; raise --cycle-budget") }),
                Verdict::Indeterminate,
            ))
        }
        Err(e) => return Err(e.into()),
    };
    let witness = report
        .witness
        .as_ref()
        .map(|(c, v)| json!({ "cycle": one_based(c), "product": format_rational(v) }));
    let mismatch = report.symmetrizable_witness.as_ref().map(|(c, f, r)| {
        json!({ "cycle": one_based(c), "forward": format_rational(f), "reverse": format_rational(r) })
    });
    Ok((
        json!({
            "all_integer": report.all_integer,
            "max_len": max_len.min(a.rank()),
            "cycles": report.checked_cycles.iter().map(cycle_json).collect::<Vec<_>>(),
            "non_integral_witness": witness,
            "orientation_mismatch": mismatch,
        }),
        verdict_if(report.all_integer),
    ))
}

/// Building a representation fails definitively when the data do not define one.
fn build(o: &Options) -> Result<Result<ReflectionRep, (Value, Verdict)>, Failure> {
    match input::rep(o.rep.as_deref(), o.cartan.as_deref(), o.coxeter.as_deref()) {
        Ok(r) => Ok(Ok(r)),
        Err(Failure::Rep(e @ (RepError::Incompatible | RepError::NotLargeIrreducible))) => {
            Ok(Err((json!({ "error": e.to_string() }), Verdict::Negative)))
        }
        Err(e) => Err(e),
    }
}

macro_rules! built {
    ($o:expr) => {
        match build($o)? {
            Ok(rep) => rep,
            Err(negative) => return Ok(negative),
        }
    };
}

fn rep_summary(rep: &ReflectionRep) -> Value {
    let mut v = to_value(&RepJson::new(rep));
    v["irreducible"] = json!(rep.is_irreducible());
    v["cartan"] = to_value(&CartanJson::new(rep.cartan()));
    v
}

pub fn build_rep(o: &Options) -> Outcome {
    let rep = built!(o);
    let s = rep.invariant_subspaces();
    let mut v = rep_summary(&rep);
    v["v_span_dim"] = json!(s.v_span_basis.len());
    v["alpha_kernel_dim"] = json!(s.alpha_kernel_basis.len());
    positive(v)
}

pub fn reduce(o: &Options) -> Outcome {
    let rep = built!(o);
    let reduced = rep.reduce_irreducible()?;
    positive(rep_summary(&reduced))
}

pub fn relations(o: &Options) -> Outcome {
    let rep = built!(o);
    let cap = o.order_cap.unwrap_or(DEFAULT_ORDER_CAP);
    match rep.verify_relations(cap) {
        Ok(report) => {
            let pairs: Vec<Value> = report
                .pairs
                .iter()
                .map(|p| json!({ "pair": [p.s + 1, p.t + 1], "label": p.label.to_wire(), "order": p.order }))
                .collect();
            positive(json!({ "relations_hold": true, "order_cap": cap, "pairs": pairs }))
        }
        Err(RepError::RelationViolation { pair, power }) => Ok((
            json!({ "relations_hold": false, "order_cap": cap, "violation": { "pair": [pair.0 + 1, pair.1 + 1], "power": power } }),
            Verdict::Negative,
        )),
        Err(e) => Err(e.into()),
    }
}

/// The representation to analyze: `--rep` as given, or the irreducible
/// reduction of the one built from `--cartan`/`--coxeter`.
fn irreducible_input(o: &Options) -> Result<Result<ReflectionRep, (Value, Verdict)>, Failure> {
    Ok(match build(o)? {
        Ok(rep) if o.rep.is_none() => Ok(rep.reduce_irreducible()?),
        other => other,
    })
}

pub fn closure(o: &Options) -> Outcome {
    let rep = match irreducible_input(o)? {
        Ok(r) => r,
        Err(negative) => return Ok(negative),
    };
    let cap = o.word_cap.unwrap_or(default_word_cap(rep.dim()));
    let v = rep.closure_verdict(cap)?;
    let code = match v.kind {
        VerdictKind::Indeterminate => Verdict::Indeterminate,
        _ => Verdict::Positive,
    };
    Ok((
        json!({
            "verdict": v.kind,
            "dim": rep.dim(),
            "word_cap": cap,
            "form": v.form.as_ref().map(format_matrix),
            "reason": v.reason,
        }),
        code,
    ))
}

pub fn integralize(o: &Options) -> Outcome {
    let rep = match irreducible_input(o)? {
        Ok(r) => r,
        Err(negative) => return Ok(negative),
    };
    let iters = o.max_iters.unwrap_or(integral::DEFAULT_MAX_ITERS);
    match integral::conjugate_to_integers(&rep, iters) {
        Ok(res) => {
            let hnf: Vec<Vec<Value>> = res
                .lattice
                .hnf()
                .iter()
                .map(|r| r.iter().map(|x| Value::Number(x.to_string().parse().expect("integer literal"))).collect())
                .collect();
            positive(json!({
                "integral": true,
                "dim": rep.dim(),
                "iterations": res.iterations,
                "change_of_basis": format_matrix(&res.change_of_basis),
                "integer_generators": res.integer_generators.iter().map(int_matrix).collect::<Vec<_>>(),
                "lattice": { "hnf": hnf, "denominator": Value::Number(res.lattice.denominator().to_string().parse().expect("integer literal")) },
                "rep": to_value(&RepJson::new(&res.integer_rep)),
            }))
        }
        Err(IntegralError::CyclicProductObstruction { cycle, value }) => Ok((
            json!({ "integral": false, "witness_cycle": one_based(&cycle), "product": format_rational(&value) }),
            Verdict::Negative,
        )),
        Err(IntegralError::NoConvergence { iterations, denominator_bits }) => Ok((
            json!({
                "integral": null,
                "reason": format!("lattice saturation did not close after {iterations} iterations ({denominator_bits}-bit denominators); raise --max-iters"),
            }),
            Verdict::Indeterminate,
        )),
        Err(e) => Err(e.into()),
    }
}

fn forge_result(r: Result<ForgeOutput, ForgeError>) -> Outcome {
    match r {
        Ok(out) => positive(to_value(&ForgeJson::new(&out))),
        Err(ForgeError::NoParameterFound { limit }) => Ok((
            json!({ "error": format!("no parameter up to {limit} gives a certified matrix") }),
            Verdict::Indeterminate,
        )),
        Err(e) => Err(e.into()),
    }
}

pub fn forge(o: &Options) -> Outcome {
    if let Some(path) = &o.verify {
        let bundle = input::forge_bundle(path)?;
        let out = bundle.to_output()?;
        return Ok(match forge::verify(&out) {
            Ok(()) => (json!({ "verified": true, "construction": bundle.construction }), Verdict::Positive),
            Err(e) => (json!({ "verified": false, "reason": e.to_string() }), Verdict::Negative),
        });
    }
    let m = input::coxeter(require(&o.coxeter, "coxeter")?)?;
    match o.construction.as_deref().unwrap_or("spanning-tree") {
        "spanning-tree" => forge_result(forge::forge_racg_spanning_tree(&m)),
        "rank-bump" => {
            let rep = input::rep(Some(require(&o.rep, "rep")?), None, o.coxeter.as_deref())?;
            forge_result(forge::forge_rank_bump(&m, &rep))
        }
        "general" => {
            let pairs = input::pairs(o.pairs.as_deref().unwrap_or(""))?;
            forge_result(forge::forge_general(&m, &pairs))
        }
        other => Err(Failure::Input(format!(
            "unknown construction {other:?}; expected spanning-tree, rank-bump or general"
        ))),
    }
}

pub fn pipeline(o: &Options) -> Outcome {
    let m = input::coxeter(require(&o.coxeter, "coxeter")?)?;
    let target = o.target_dim.ok_or_else(|| Failure::Input("--target-dim is required".into()))?;
    let seed = o.cartan.as_deref().map(input::cartan).transpose()?;
    let stages = match forge::pipeline_thin_embedding(&m, target, seed.as_ref()) {
        Ok(s) => s,
        Err(ForgeError::Integral(IntegralError::NoConvergence { .. }) | ForgeError::NoParameterFound { .. }) => {
            return Ok((json!({ "error": "a stage could not be certified within the search limits" }), Verdict::Indeterminate))
        }
        Err(e) => return Err(e.into()),
    };
    let stages: Vec<Value> = stages
        .iter()
        .map(|s| {
            json!({
                "dim": s.dim(),
                "rank": s.embedding.new_matrix.rank(),
                "index": s.embedding.index,
                "generator_words": s.embedding.generator_words.iter().map(|w| one_based(w)).collect::<Vec<_>>(),
                "forge": to_value(&ForgeJson::new(&s.forge)),
                "integer_generators": s.integral.integer_generators.iter().map(int_matrix).collect::<Vec<_>>(),
            })
        })
        .collect();
    positive(json!({ "target_dim": target, "stages": stages }))
}

pub fn corpus(o: &Options) -> Outcome {
    if let Some(name) = &o.name {
        let e = corpus::entry(name).ok_or_else(|| Failure::Input(format!("no corpus entry named {name:?}")))?;
        return positive(json!({
            "name": e.name,
            "description": e.description,
            "coxeter": to_value(&CoxeterJson::new(&e.coxeter)),
            "cartan": e.cartan.as_ref().map(|a| to_value(&CartanJson::new(a))),
            "expected": {
                "kind": e.expected.kind,
                "rank": e.expected.rank,
                "symmetrizable": e.expected.symmetrizable,
                "integer_cyclic_products": e.expected.integer_cyclic_products,
            },
        }));
    }
    let entries: Vec<Value> = corpus::corpus()
        .iter()
        .map(|e| json!({ "name": e.name, "rank": e.coxeter.rank(), "has_cartan": e.cartan.is_some(), "description": e.description }))
        .collect();
    positive(json!({ "entries": entries }))
}
