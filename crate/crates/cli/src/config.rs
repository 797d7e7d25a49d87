//! The JSON configuration: Cartan datum, scalars, parabolic datum and
//! engine limits.

use std::collections::BTreeMap;
use std::path::Path;

use bklr_core::basisrewrite::{DEFAULT_BASIS_LIMIT, DEFAULT_STEP_BUDGET};
use bklr_core::cartan::{
    default_scalars, fill_boundary, validate_cartan, validate_scalars, CartanDatum, ParabolicDatum, ScalarChoice,
};
use bklr_core::{scalar, Label, Scalar};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CartanSpec {
    /// One of `sl2`, `a1xa1`, `a2`, `b2`.
    Preset(String),
    Explicit { labels: Vec<String>, matrix: Vec<Vec<i64>>, d: Vec<i64> },
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalarSpec {
    #[serde(default)]
    pub t: Vec<TEntry>,
    #[serde(default)]
    pub s: Vec<SEntry>,
    #[serde(default)]
    pub r: Vec<REntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TEntry {
    pub i: String,
    pub j: String,
    pub value: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SEntry {
    pub i: String,
    pub j: String,
    pub t: u32,
    pub v: u32,
    pub value: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct REntry {
    pub i: String,
    pub value: String,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParabolicSpec {
    #[serde(rename = "I_f", default)]
    pub i_f: Vec<String>,
    #[serde(rename = "N", default)]
    pub n: BTreeMap<String, u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EngineSpec {
    /// Degree of the oracle vectors for the polynomial action.
    #[serde(default = "default_oracle_degree")]
    pub oracle_degree: u32,
    #[serde(default = "default_truncation")]
    pub truncation: i64,
    #[serde(default = "default_degree_bound")]
    pub degree_bound: i64,
    #[serde(default = "default_step_budget")]
    pub step_budget: u64,
    #[serde(default = "default_basis_limit")]
    pub basis_limit: u64,
    #[serde(default)]
    pub parallelism: Option<usize>,
}

fn default_oracle_degree() -> u32 {
    6
}
fn default_truncation() -> i64 {
    20
}
fn default_degree_bound() -> i64 {
    12
}
fn default_step_budget() -> u64 {
    DEFAULT_STEP_BUDGET
}
fn default_basis_limit() -> u64 {
    DEFAULT_BASIS_LIMIT
}

impl Default for EngineSpec {
    fn default() -> Self {
        EngineSpec {
            oracle_degree: default_oracle_degree(),
            truncation: default_truncation(),
            degree_bound: default_degree_bound(),
            step_budget: default_step_budget(),
            basis_limit: default_basis_limit(),
            parallelism: None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub cartan: CartanSpec,
    #[serde(default)]
    pub scalars: Option<ScalarSpec>,
    #[serde(default)]
    pub parabolic: Option<ParabolicSpec>,
    #[serde(default)]
    pub engine: EngineSpec,
}

/// A loaded and validated configuration.
#[derive(Clone, Debug)]
pub struct Config {
    pub datum: CartanDatum,
    pub scalars: ScalarChoice,
    pub parabolic: ParabolicDatum,
    pub engine: EngineSpec,
    pub source: ConfigFile,
}

pub fn preset(name: &str) -> Option<CartanDatum> {
    match name.to_ascii_lowercase().as_str() {
        "sl2" | "a1" => Some(CartanDatum::sl2()),
        "a1xa1" => Some(CartanDatum::a1xa1()),
        "a2" | "sl3" => Some(CartanDatum::a2()),
        "b2" => Some(CartanDatum::b2()),
        _ => None,
    }
}

fn rational(s: &str, what: &str) -> Result<Scalar> {
    scalar::parse(s).ok_or_else(|| CliError::Config(format!("{what}: `{s}` is not a rational number")))
}

pub fn label(datum: &CartanDatum, name: &str) -> Result<Label> {
    datum.index(name.trim()).map_err(|_| CliError::Config(format!("unknown label `{name}`")))
}

impl Config {
    pub fn load(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Config> {
        let file: ConfigFile = serde_json::from_str(text).map_err(|e| CliError::Parse {
            line: e.line(),
            col: e.column(),
            msg: e.to_string(),
        })?;
        Self::from_file(file)
    }

    pub fn from_file(file: ConfigFile) -> Result<Config> {
        let datum = match &file.cartan {
            CartanSpec::Preset(name) => {
                preset(name).ok_or_else(|| CliError::Config(format!("unknown Cartan preset `{name}`")))?
            }
            CartanSpec::Explicit { labels, matrix, d } => CartanDatum::new(labels.clone(), matrix.clone(), d.clone()),
        };
        let v = validate_cartan(&datum);
        if !v.is_empty() {
            return Err(CliError::Config(violations(&v)));
        }
        let scalars = build_scalars(&datum, file.scalars.as_ref())?;
        let v = validate_scalars(&datum, &scalars);
        if !v.is_empty() {
            return Err(CliError::Config(violations(&v)));
        }
        let parabolic = build_parabolic(&datum, file.parabolic.as_ref())?;
        Ok(Config { datum, scalars, parabolic, engine: file.engine.clone(), source: file })
    }

    /// A configuration for a preset datum with default scalars.
    pub fn preset(name: &str, parabolic: &[(&str, u32)]) -> Result<Config> {
        let p = ParabolicSpec {
            i_f: parabolic.iter().map(|(l, _)| l.to_string()).collect(),
            n: parabolic.iter().map(|(l, n)| (l.to_string(), *n)).collect(),
        };
        Self::from_file(ConfigFile {
            cartan: CartanSpec::Preset(name.into()),
            scalars: None,
            parabolic: Some(p),
            engine: EngineSpec::default(),
        })
    }
}

fn violations(v: &[bklr_core::cartan::Violation]) -> String {
    v.iter().map(|x| format!("{}: {}", x.rule, x.detail)).collect::<Vec<_>>().join("; ")
}

fn build_scalars(datum: &CartanDatum, spec: Option<&ScalarSpec>) -> Result<ScalarChoice> {
    let mut sc = default_scalars(datum);
    let Some(spec) = spec else { return Ok(sc) };
    for e in &spec.t {
        let (i, j) = (label(datum, &e.i)?, label(datum, &e.j)?);
        sc.t[i][j] = rational(&e.value, "t")?;
    }
    for e in &spec.r {
        sc.r[label(datum, &e.i)?] = rational(&e.value, "r")?;
    }
    sc.s.clear();
    fill_boundary(datum, &mut sc);
    let mut given = BTreeMap::new();
    for e in &spec.s {
        let key = (label(datum, &e.i)?, label(datum, &e.j)?, e.t, e.v);
        given.insert(key, rational(&e.value, "s")?);
    }
    for (&(i, j, t, v), c) in &given {
        sc.s.insert((i, j, t, v), c.clone());
        if !given.contains_key(&(j, i, v, t)) {
            sc.s.insert((j, i, v, t), c.clone());
        }
    }
    Ok(sc)
}

fn build_parabolic(datum: &CartanDatum, spec: Option<&ParabolicSpec>) -> Result<ParabolicDatum> {
    let mut p = ParabolicDatum::borel();
    let Some(spec) = spec else { return Ok(p) };
    for name in &spec.i_f {
        let j = label(datum, name)?;
        let n = spec
            .n
            .get(name)
            .ok_or_else(|| CliError::Config(format!("N has no entry for the finite label `{name}`")))?;
        p.n.insert(j, *n);
    }
    if let Some(extra) = spec.n.keys().find(|k| !spec.i_f.contains(k)) {
        return Err(CliError::Config(format!("N names `{extra}`, which is not in I_f")));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_and_explicit() {
        let c = Config::from_json(r#"{"cartan": "a2", "parabolic": {"I_f": ["1"], "N": {"1": 2}}}"#).unwrap();
        assert_eq!(c.datum, CartanDatum::a2());
        assert_eq!(c.parabolic.n_of(0), Some(2));
        let c = Config::from_json(r#"{"cartan": {"labels": ["a","b"], "matrix": [[2,-1],[-2,2]], "d": [2,1]}}"#).unwrap();
        assert_eq!(c.datum.matrix, CartanDatum::b2().matrix);
        assert_eq!(c.engine.truncation, 20);
    }

    #[test]
    fn rejects_bad_input() {
        let e = Config::from_json("{\"cartan\": \"a2\",\n  \"engine\": {\"truncation\": }}").unwrap_err();
        assert!(matches!(e, CliError::Parse { line: 2, .. }), "{e}");
        let e = Config::from_json(r#"{"cartan": {"labels": ["1","2"], "matrix": [[2,-1],[0,2]], "d": [1,1]}}"#);
        assert!(matches!(e, Err(CliError::Config(_))));
        let e = Config::from_json(r#"{"cartan": "sl2", "scalars": {"r": [{"i": "1", "value": "0"}]}}"#);
        assert!(matches!(e, Err(CliError::Config(_))));
        let e = Config::from_json(r#"{"cartan": "sl2", "parabolic": {"I_f": ["1"], "N": {}}}"#);
        assert!(matches!(e, Err(CliError::Config(_))));
    }

    #[test]
    fn scalar_entries() {
        let c = Config::from_json(
            r#"{"cartan": "a2", "scalars": {"t": [{"i":"1","j":"2","value":"2"},{"i":"2","j":"1","value":"-1/3"}],
                "r": [{"i":"2","value":"5"}]}}"#,
        )
        .unwrap();
        assert_eq!(c.scalars.t[0][1], scalar::int(2));
        assert_eq!(c.scalars.s.get(&(1, 0, 0, 1)), Some(&scalar::int(2)));
        assert_eq!(c.scalars.r[1], scalar::int(5));
    }
}
