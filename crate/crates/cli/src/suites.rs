//! Verification suites. Each suite fans its cases out over rayon, gives
//! every worker its own rewriting engine, and collects outcomes in case
//! order so that reports do not depend on scheduling.

use std::collections::BTreeMap;

use bklr_core::basisrewrite::{action_rank, graded_dimension, Engine};
use bklr_core::cartan::{default_scalars, random_scalars, CartanDatum, ParabolicDatum, ScalarChoice};
use bklr_core::dgstruct::{self, E_SHIFT};
use bklr_core::diagram::{DiagramWord, Generator};
use bklr_core::polyrep::{oracle_vectors, Layout, Orientation, Poly, Rep};
use bklr_core::qside::{specialize, Verma};
use bklr_core::relations::{instances, sequences, vanishes, Family};
use bklr_core::scalar;
use bklr_core::series::{GradedSeries, Window};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Result;
use crate::report;

/// Environment variable overriding the number of worker threads.
pub const THREADS_ENV: &str = "BKLR_THREADS";

pub fn threads(configured: Option<usize>) -> usize {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse().ok()).filter(|&n| n > 0) {
        return n;
    }
    configured.filter(|&n| n > 0).unwrap_or_else(num_cpus::get_physical)
}

pub fn pool(configured: Option<usize>) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(threads(configured)).build().expect("thread pool")
}

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub checked: usize,
    pub failures: Vec<String>,
    pub data: Value,
}

impl Outcome {
    pub fn ok(&self) -> bool {
        self.failures.is_empty() && self.checked > 0
    }

    fn merge(parts: Vec<Outcome>, data: Value) -> Outcome {
        let mut out = Outcome { checked: 0, failures: Vec::new(), data };
        for p in parts {
            out.checked += p.checked;
            out.failures.extend(p.failures);
        }
        out
    }
}

pub fn battery() -> Vec<(&'static str, CartanDatum)> {
    vec![
        ("sl2", CartanDatum::sl2()),
        ("a1xa1", CartanDatum::a1xa1()),
        ("a2", CartanDatum::a2()),
        ("b2", CartanDatum::b2()),
    ]
}

/// Default scalars followed by `extra` seeded random admissible choices.
pub fn scalar_choices(datum: &CartanDatum, extra: usize, seed: u64) -> Vec<ScalarChoice> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![default_scalars(datum)];
    for _ in 0..extra {
        out.push(random_scalars(datum, || rng.gen_range(-5..=5)));
    }
    out
}

/// Weights `ν` with `lo ≤ |ν| ≤ hi`, in lexicographic order.
pub fn weights(rank: usize, lo: usize, hi: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..rank {
        out = out
            .into_iter()
            .flat_map(|v: Vec<usize>| {
                (0..=hi).map(move |k| {
                    let mut w = v.clone();
                    w.push(k);
                    w
                })
            })
            .collect();
    }
    out.retain(|w| (lo..=hi).contains(&w.iter().sum::<usize>()));
    out.sort_by_key(|w| (w.iter().sum::<usize>(), w.clone()));
    out
}

fn seqs(datum: &CartanDatum, nu: &[usize]) -> Vec<Vec<usize>> {
    sequences(datum.rank(), nu.iter().sum()).into_iter().filter(|s| datum.weight_of(s) == nu).collect()
}

fn show(datum: &CartanDatum, s: &[usize]) -> String {
    s.iter().map(|&l| datum.labels[l].as_str()).collect::<Vec<_>>().join("")
}

/// Every relation instance on `m ≤ mmax` strands acts as zero on the oracle
/// vectors of degree `≤ degree`.
pub fn relations(datum: &CartanDatum, sc: &ScalarChoice, mmax: usize, degree: u32) -> Outcome {
    let bottoms: Vec<Vec<usize>> = (1..=mmax).flat_map(|m| sequences(datum.rank(), m)).collect();
    let parts: Vec<(Outcome, BTreeMap<&'static str, usize>)> = bottoms
        .par_iter()
        .map(|bottom| {
            let o = Orientation::default_for(datum);
            let rep = Rep::new(datum, sc, &o);
            let mut fams = BTreeMap::new();
            let mut out = Outcome { checked: 0, failures: Vec::new(), data: Value::Null };
            let layout = match Layout::new(&datum.weight_of(bottom)) {
                Ok(l) => l,
                Err(e) => {
                    out.failures.push(format!("{}: {e}", show(datum, bottom)));
                    return (out, fams);
                }
            };
            let vs = oracle_vectors(&layout, degree);
            for inst in instances(datum, sc, bottom, 2) {
                *fams.entry(inst.family.name()).or_insert(0) += 1;
                out.checked += 1;
                match vanishes(&rep, &inst, &vs) {
                    Ok(true) => {}
                    Ok(false) => out.failures.push(format!("{} on {}", inst.name, show(datum, bottom))),
                    Err(e) => out.failures.push(format!("{} on {}: {e}", inst.name, show(datum, bottom))),
                }
            }
            (out, fams)
        })
        .collect();
    let mut fams: BTreeMap<&str, usize> = BTreeMap::new();
    let mut outs = Vec::new();
    for (o, f) in parts {
        for (k, v) in f {
            *fams.entry(k).or_insert(0) += v;
        }
        outs.push(o);
    }
    // A defining family with no instance on this datum (ExtR2 on one label)
    // holds vacuously and still counts.
    let defining: BTreeMap<&str, usize> =
        Family::DEFINING.iter().map(|f| (f.name(), fams.get(f.name()).copied().unwrap_or(0))).collect();
    let derived: BTreeMap<&str, usize> = fams.iter().filter(|(k, _)| !defining.contains_key(*k)).map(|(k, v)| (*k, *v)).collect();
    let data = json!({"defining": defining, "derived": derived, "family_count": defining.len()});
    Outcome::merge(outs, data)
}

fn random_word(rng: &mut ChaCha8Rng, n: usize, mmax: usize, len: usize) -> DiagramWord {
    let m = rng.gen_range(1..=mmax);
    let bottom: Vec<usize> = (0..m).map(|_| rng.gen_range(0..n)).collect();
    let mut gens = Vec::new();
    for _ in 0..rng.gen_range(0..=len) {
        let g = match rng.gen_range(0..10) {
            0..=2 => Generator::Dot(rng.gen_range(1..=m)),
            3..=6 if m > 1 => Generator::Cross(rng.gen_range(1..m)),
            _ => Generator::Float { label: rng.gen_range(0..n), sup: rng.gen_range(0..=2), region: rng.gen_range(0..=m) },
        };
        gens.push(g);
    }
    DiagramWord { bottom, gens }
}

/// Random words act like their normal forms, and normal forms are fixed.
pub fn normal_forms(datum: &CartanDatum, sc: &ScalarChoice, count: usize, seed: u64, degree: u32) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let words: Vec<DiagramWord> = (0..count).map(|_| random_word(&mut rng, datum.rank(), 3, 6)).collect();
    let chunks: Vec<&[DiagramWord]> = words.chunks(16).collect();
    let parts: Vec<Outcome> = chunks
        .par_iter()
        .map(|chunk| {
            let o = Orientation::default_for(datum);
            let rep = Rep::new(datum, sc, &o);
            let mut eng = Engine::new(datum, sc);
            let mut out = Outcome { checked: 0, failures: Vec::new(), data: Value::Null };
            for w in chunk.iter() {
                out.checked += 1;
                if let Err(e) = normal_form_case(&rep, &mut eng, w, degree) {
                    out.failures.push(format!("{w:?}: {e}"));
                }
            }
            out
        })
        .collect();
    Outcome::merge(parts, json!({"words": count}))
}

fn normal_form_case(rep: &Rep, eng: &mut Engine, w: &DiagramWord, degree: u32) -> std::result::Result<(), String> {
    let nf = eng.normal_form_word(w).map_err(|e| e.to_string())?;
    let layout = Layout::new(&rep.datum.weight_of(&w.bottom)).map_err(|e| e.to_string())?;
    let vs: Vec<Poly> = oracle_vectors(&layout, degree);
    let mut words = vec![(scalar::one(), w.clone())];
    words.extend(nf.words().into_iter().map(|(c, x)| (-c, x)));
    let imgs = rep.act_combination(&words, &vs).map_err(|e| e.to_string())?;
    if !imgs.iter().all(|m| m.is_empty()) {
        return Err("action differs from the normal form".into());
    }
    if eng.normal_form(&nf).map_err(|e| e.to_string())? != nf {
        return Err("normal form is not idempotent".into());
    }
    Ok(())
}

/// The basis of `1_j R 1_i` up to `bound` acts by independent operators.
pub fn faithfulness(datum: &CartanDatum, sc: &ScalarChoice, mmax: usize, bound: i64, test_degree: u32) -> Outcome {
    let mut blocks = Vec::new();
    for m in 1..=mmax {
        let all = sequences(datum.rank(), m);
        for i in &all {
            for j in &all {
                if datum.weight_of(i) == datum.weight_of(j) {
                    blocks.push((i.clone(), j.clone()));
                }
            }
        }
    }
    let rows: Vec<(Value, Option<String>)> = blocks
        .par_iter()
        .map(|(i, j)| {
            let o = Orientation::default_for(datum);
            let rep = Rep::new(datum, sc, &o);
            let name = format!("{} -> {}", show(datum, i), show(datum, j));
            match action_rank(&rep, i, j, bound, test_degree) {
                Ok((n, r)) => {
                    let bad = (n != r).then(|| format!("{name}: rank {r} < {n}"));
                    (json!({"block": name, "basis": n, "rank": r}), bad)
                }
                Err(e) => (Value::Null, Some(format!("{name}: {e}"))),
            }
        })
        .collect();
    let failures = rows.iter().filter_map(|r| r.1.clone()).collect();
    Outcome { checked: blocks.len(), failures, data: json!(rows.into_iter().map(|r| r.0).collect::<Vec<_>>()) }
}

/// Nonempty subsets of the labels with a uniform `n`, for each `n` in `ns`.
pub fn parabolics(datum: &CartanDatum, ns: &[u32]) -> Vec<ParabolicDatum> {
    let r = datum.rank();
    let mut out = Vec::new();
    for mask in 1u32..(1 << r) {
        for &n in ns {
            let p = ParabolicDatum { n: (0..r).filter(|j| mask & (1 << j) != 0).map(|j| (j, n)).collect() };
            out.push(p);
        }
    }
    out
}

pub fn parab_name(datum: &CartanDatum, p: &ParabolicDatum) -> String {
    let parts: Vec<String> = p.n.iter().map(|(&j, n)| format!("{}:{n}", datum.labels[j])).collect();
    format!("{{{}}}", parts.join(","))
}

/// `d_N² = 0` on `R(ν)` for every weight up to `height`.
pub fn d_squared(
    datum: &CartanDatum,
    sc: &ScalarChoice,
    parabs: &[ParabolicDatum],
    height: usize,
    bound: i64,
    random: usize,
    limit: u64,
) -> Outcome {
    let mut cases = Vec::new();
    for p in parabs {
        for nu in weights(datum.rank(), 1, height) {
            cases.push((p.clone(), nu));
        }
    }
    let rows: Vec<(Value, usize, Option<String>)> = cases
        .par_iter()
        .enumerate()
        .map(|(k, (p, nu))| {
            let mut eng = Engine::new(datum, sc);
            let name = format!("{} nu={:?}", parab_name(datum, p), nu);
            match dgstruct::check_d_squared(&mut eng, p, nu, bound, random, 1000 + k as u64, limit) {
                Ok(r) => {
                    let bad = r.counterexample.as_ref().map(|c| format!("{name}: {c}"));
                    (json!({"case": name, "checked": r.checked}), r.checked, bad)
                }
                Err(e) => (Value::Null, 0, Some(format!("{name}: {e}"))),
            }
        })
        .collect();
    Outcome {
        checked: rows.iter().map(|r| r.1).sum(),
        failures: rows.iter().filter_map(|r| r.2.clone()).collect(),
        data: json!(rows.into_iter().map(|r| r.0).collect::<Vec<_>>()),
    }
}

/// Homology of `(R(ν), d_N)` sits in degree 0 (counting `I_f` floating dots)
/// and vanishes whenever the acyclicity criterion fires.
pub fn formality(
    datum: &CartanDatum,
    sc: &ScalarChoice,
    parabs: &[ParabolicDatum],
    height: usize,
    bound: i64,
    limit: u64,
) -> Outcome {
    let mut cases = Vec::new();
    for p in parabs {
        for nu in weights(datum.rank(), 0, height) {
            cases.push((p.clone(), nu));
        }
    }
    let rows: Vec<(Value, Option<String>)> = cases
        .par_iter()
        .map(|(p, nu)| {
            let mut eng = Engine::new(datum, sc);
            let name = format!("{} nu={:?}", parab_name(datum, p), nu);
            match dgstruct::formality(&mut eng, p, nu, bound, limit) {
                Ok(r) => {
                    let bad = (!r.holds()).then(|| format!("{name}: {r:?}"));
                    (json!({"case": name, "acyclic": r.acyclic, "slices": r.slices, "h0": r.h0, "higher": r.higher}), bad)
                }
                Err(e) => (Value::Null, Some(format!("{name}: {e}"))),
            }
        })
        .collect();
    Outcome {
        checked: cases.len(),
        failures: rows.iter().filter_map(|r| r.1.clone()).collect(),
        data: json!(rows.into_iter().map(|r| r.0).collect::<Vec<_>>()),
    }
}

/// Signed graded dimensions of `1_i R 1_j` equal the Shapovalov pairings of
/// the universal Verma module, and the form is symmetric.
pub fn shapovalov(datum: &CartanDatum, height: usize) -> Outcome {
    let nus = weights(datum.rank(), 0, height);
    let parts: Vec<Outcome> = nus
        .par_iter()
        .map(|nu| {
            let mut v = Verma::universal(datum);
            let mut out = Outcome { checked: 0, failures: Vec::new(), data: Value::Null };
            let ss = seqs(datum, nu);
            for i in &ss {
                for j in &ss {
                    out.checked += 1;
                    let p = v.strand_pairing(i, j);
                    let name = format!("({}, {})", show(datum, i), show(datum, j));
                    match graded_dimension(datum, i, j, true) {
                        Ok(g) if p.exact_eq(&g) == Some(true) => {}
                        Ok(g) => out.failures.push(format!(
                            "{name}: gdim {} vs pairing {}",
                            g.render(&datum.labels),
                            p.render(&datum.labels)
                        )),
                        Err(e) => out.failures.push(format!("{name}: {e}")),
                    }
                    if v.numerator(i, j) != v.numerator(j, i) {
                        out.failures.push(format!("{name}: not symmetric"));
                    }
                }
            }
            out
        })
        .collect();
    Outcome::merge(parts, json!({"weights": nus.len()}))
}

/// Cyclotomic graded dimensions against the integrable quotient.
pub fn cyclotomic(datum: &CartanDatum, sc: &ScalarChoice, parab: &ParabolicDatum, height: usize, truncation: i64, limit: u64) -> Outcome {
    let nus = weights(datum.rank(), 0, height);
    let window = Window::new(truncation as i32);
    let rows: Vec<(Value, usize, Vec<String>)> = nus
        .par_iter()
        .map(|nu| {
            let mut eng = Engine::new(datum, sc);
            let mut universal = Verma::universal(datum);
            let mut quotient = Verma::new(datum, parab);
            let mut fails = Vec::new();
            let mut checked = 0;
            let rank = quotient.weight_dim(nu);
            let mut total_nonzero = false;
            for i in seqs(datum, nu) {
                for j in seqs(datum, nu) {
                    checked += 1;
                    let name = format!("nu={nu:?} ({}, {})", show(datum, &i), show(datum, &j));
                    let r = (|| -> Result<bool> {
                        let g = dgstruct::cyclotomic_gdim(&mut eng, parab, &j, &i, truncation, limit)?.signed().expand(&window)?;
                        let GradedSeries::Exact { num, den } = universal.strand_pairing(&i, &j) else { unreachable!() };
                        let s = GradedSeries::Exact { num: specialize(datum, parab, &num), den: specialize(datum, parab, &den) };
                        let s = s.expand(&window)?;
                        total_nonzero |= !g.is_zero();
                        Ok(g == s)
                    })();
                    match r {
                        Ok(true) => {}
                        Ok(false) => fails.push(format!("{name}: cyclotomic dimension differs from the pairing")),
                        Err(e) => fails.push(format!("{name}: {e}")),
                    }
                }
            }
            if total_nonzero != (rank > 0) {
                fails.push(format!("nu={nu:?}: weight space of dimension {rank} but nonzero={total_nonzero}"));
            }
            (json!({"nu": report::weight(datum, nu), "weight_dim": rank}), checked, fails)
        })
        .collect();
    Outcome {
        checked: rows.iter().map(|r| r.1).sum(),
        failures: rows.iter().flat_map(|r| r.2.clone()).collect(),
        data: json!(rows.into_iter().map(|r| r.0).collect::<Vec<_>>()),
    }
}

/// The induction/restriction short exact sequence and the `i ≠ j`
/// isomorphism, as exact dimension identities.
pub fn ses(datum: &CartanDatum, height: usize) -> Outcome {
    let mut cases = Vec::new();
    for nu in weights(datum.rank(), 0, height) {
        for i in 0..datum.rank() {
            cases.push((nu.clone(), i, None));
            for j in 0..datum.rank() {
                if j != i {
                    cases.push((nu.clone(), i, Some(j)));
                }
            }
        }
    }
    let parts: Vec<Outcome> = cases
        .par_iter()
        .map(|(nu, i, j)| {
            let blocks = match j {
                None => dgstruct::ses_blocks(datum, nu, *i),
                Some(j) => dgstruct::ij_blocks(datum, nu, *i, *j),
            };
            let name = format!("nu={nu:?} i={} j={:?}", datum.labels[*i], j.map(|j| datum.labels[j].clone()));
            match blocks {
                Ok(bs) => Outcome {
                    checked: bs.len(),
                    failures: bs
                        .iter()
                        .filter(|b| !b.holds)
                        .map(|b| format!("{name} block ({}, {})", show(datum, &b.bottom), show(datum, &b.top)))
                        .collect(),
                    data: Value::Null,
                },
                Err(e) => Outcome { checked: 0, failures: vec![format!("{name}: {e}")], data: Value::Null },
            }
        })
        .collect();
    Outcome::merge(parts, json!({"cases": cases.len()}))
}

/// `E_i F_i - F_i E_i = [n_i - α_i^∨(ν)]_{q_i}` on cyclotomic quotients, for
/// each finite label `i`.
pub fn commutator(
    datum: &CartanDatum,
    sc: &ScalarChoice,
    parab: &ParabolicDatum,
    height: usize,
    truncation: i64,
    limit: u64,
) -> Outcome {
    let mut cases = Vec::new();
    for nu in weights(datum.rank(), 0, height) {
        for &i in parab.n.keys() {
            cases.push((nu.clone(), i));
        }
    }
    let parts: Vec<Outcome> = cases
        .par_iter()
        .map(|(nu, i)| {
            let mut eng = Engine::new(datum, sc);
            let name = format!("{} nu={nu:?} i={}", parab_name(datum, parab), datum.labels[*i]);
            let r = dgstruct::commutator_blocks(&mut eng, parab, nu, *i, truncation, E_SHIFT, limit);
            match r {
                Ok(bs) => Outcome {
                    checked: bs.len(),
                    failures: bs
                        .iter()
                        .filter(|b| !b.holds)
                        .map(|b| format!("{name} block ({}, {})", show(datum, &b.bottom), show(datum, &b.top)))
                        .collect(),
                    data: Value::Null,
                },
                Err(e) => Outcome { checked: 0, failures: vec![format!("{name}: {e}")], data: Value::Null },
            }
        })
        .collect();
    Outcome::merge(parts, json!({"cases": cases.len(), "e_shift": E_SHIFT}))
}

/// One line of the acceptance report.
#[derive(Clone, Debug, Serialize)]
pub struct Criterion {
    pub id: u32,
    pub title: &'static str,
    pub ok: bool,
    pub checked: usize,
    pub failures: Vec<String>,
    pub parts: BTreeMap<String, Value>,
}

impl Criterion {
    fn from_parts(id: u32, title: &'static str, parts: Vec<(String, Outcome)>) -> Self {
        let mut c = Criterion { id, title, ok: true, checked: 0, failures: Vec::new(), parts: BTreeMap::new() };
        for (name, o) in parts {
            c.ok &= o.ok();
            c.checked += o.checked;
            c.failures.extend(o.failures.iter().take(20).map(|f| format!("{name}: {f}")));
            c.parts.insert(name, json!({"checked": o.checked, "failures": o.failures.len(), "data": o.data}));
        }
        c
    }
}

pub const LIMIT: u64 = 2_000_000;

pub fn criterion_1() -> Criterion {
    let mut parts = Vec::new();
    for (k, (name, datum)) in battery().into_iter().enumerate() {
        for (s, sc) in scalar_choices(&datum, 3, 17 + k as u64).iter().enumerate() {
            parts.push((format!("{name}/scalars{s}"), relations(&datum, sc, 3, 6)));
        }
    }
    Criterion::from_parts(1, "relation soundness under the polynomial action", parts)
}

pub fn criterion_2() -> Criterion {
    let mut parts = Vec::new();
    for (k, (name, datum)) in battery().into_iter().enumerate() {
        let sc = default_scalars(&datum);
        parts.push((name.to_string(), normal_forms(&datum, &sc, 200, 31 + k as u64, 6)));
    }
    Criterion::from_parts(2, "normal forms act like their words and are idempotent", parts)
}

pub fn criterion_3() -> Criterion {
    let mut parts = Vec::new();
    for (name, datum) in battery() {
        let sc = default_scalars(&datum);
        parts.push((name.to_string(), faithfulness(&datum, &sc, 2, 10, 6)));
    }
    Criterion::from_parts(3, "tightened basis acts faithfully", parts)
}

pub fn criterion_4() -> Criterion {
    let mut parts = Vec::new();
    for (name, datum) in battery() {
        let sc = default_scalars(&datum);
        let ns: &[u32] = if datum.rank() == 1 { &[0, 1, 2, 3] } else { &[0, 1, 2] };
        let ps = parabolics(&datum, ns);
        parts.push((name.to_string(), d_squared(&datum, &sc, &ps, 3, 12, 20, LIMIT)));
    }
    Criterion::from_parts(4, "d_N squares to zero", parts)
}

pub fn criterion_5() -> Criterion {
    let sl2 = CartanDatum::sl2();
    let a2 = CartanDatum::a2();
    let sl2_ps: Vec<ParabolicDatum> = (0..=3).map(|n| ParabolicDatum { n: [(0, n)].into() }).collect();
    let mut a2_ps: Vec<ParabolicDatum> = (0..=2).map(|n| ParabolicDatum { n: [(0, n)].into() }).collect();
    for (a, b) in [(0, 0), (1, 0), (0, 1), (1, 1), (2, 1)] {
        a2_ps.push(ParabolicDatum { n: [(0, a), (1, b)].into() });
    }
    let parts = vec![
        ("sl2".to_string(), formality(&sl2, &default_scalars(&sl2), &sl2_ps, 3, 12, LIMIT)),
        ("a2".to_string(), formality(&a2, &default_scalars(&a2), &a2_ps, 2, 12, LIMIT)),
    ];
    Criterion::from_parts(5, "formality and acyclicity of d_N", parts)
}

pub fn criterion_6() -> Criterion {
    let sl2 = CartanDatum::sl2();
    let sc = default_scalars(&sl2);
    let parts = (1..=2)
        .map(|n| (format!("sl2/n={n}"), cyclotomic(&sl2, &sc, &ParabolicDatum { n: [(0, n)].into() }, 2, 20, LIMIT)))
        .collect();
    Criterion::from_parts(6, "cyclotomic dimensions match the integrable quotient", parts)
}

pub fn criterion_7() -> Criterion {
    let parts = vec![
        ("sl2".to_string(), shapovalov(&CartanDatum::sl2(), 3)),
        ("a2".to_string(), shapovalov(&CartanDatum::a2(), 2)),
    ];
    Criterion::from_parts(7, "signed graded dimensions equal Shapovalov pairings", parts)
}

pub fn criterion_8() -> Criterion {
    let mut parts = Vec::new();
    for (name, datum) in battery() {
        parts.push((format!("{name}/ses"), ses(&datum, 2)));
    }
    let sl2 = CartanDatum::sl2();
    let sc = default_scalars(&sl2);
    for n in 1..=2 {
        let p = ParabolicDatum { n: [(0, n)].into() };
        parts.push((format!("sl2/commutator/n={n}"), commutator(&sl2, &sc, &p, 2, 20, LIMIT)));
    }
    Criterion::from_parts(8, "induction/restriction and commutator dimension identities", parts)
}

/// Criteria 1 to 8 in order.
pub fn run_all(threads: usize) -> Vec<Criterion> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool");
    pool.install(|| {
        vec![
            criterion_1(),
            criterion_2(),
            criterion_3(),
            criterion_4(),
            criterion_5(),
            criterion_6(),
            criterion_7(),
            criterion_8(),
        ]
    })
}
