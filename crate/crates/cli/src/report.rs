//! Deterministic JSON reports. Objects are key-sorted, rationals are
//! strings, and series are lists of terms in the fixed monomial order.

use bklr_core::cartan::CartanDatum;
use bklr_core::series::{GradedSeries, Laurent, Window};
use bklr_core::scalar;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::Result;

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub ok: bool,
    pub results: Value,
}

impl Report {
    pub fn new(command: &str, inputs: Value, ok: bool, results: Value) -> Self {
        Report { command: command.into(), inputs, ok, results }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

pub fn laurent(datum: &CartanDatum, p: &Laurent) -> Value {
    Value::Array(
        p.terms()
            .iter()
            .map(|(e, c)| {
                let mut lam = Map::new();
                for (k, &x) in e.lam.iter().enumerate() {
                    if x != 0 {
                        lam.insert(datum.labels[k].clone(), json!(x));
                    }
                }
                json!({"q": e.q, "lam": lam, "h": e.h, "coeff": scalar::format(c)})
            })
            .collect(),
    )
}

/// An exact series with its rendering and its expansion in `window`, or a
/// truncated one with its terms.
pub fn series(datum: &CartanDatum, g: &GradedSeries, window: &Window) -> Result<Value> {
    Ok(match g {
        GradedSeries::Exact { num, den } => json!({
            "rational": g.render(&datum.labels),
            "num": laurent(datum, num),
            "den": laurent(datum, den),
            "expansion": laurent(datum, &g.expand(window)?),
            "q_max": window.q_max,
        }),
        GradedSeries::Truncated { terms, window } => json!({
            "terms": laurent(datum, terms),
            "q_max": window.q_max,
        }),
    })
}

pub fn labels(datum: &CartanDatum, seq: &[usize]) -> Value {
    json!(seq.iter().map(|&l| datum.labels[l].clone()).collect::<Vec<_>>())
}

pub fn weight(datum: &CartanDatum, nu: &[usize]) -> Value {
    let mut m = Map::new();
    for (k, &c) in nu.iter().enumerate() {
        if c != 0 {
            m.insert(datum.labels[k].clone(), json!(c));
        }
    }
    Value::Object(m)
}
