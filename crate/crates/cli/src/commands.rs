//! Command-line surface and dispatch.

use std::path::PathBuf;

use bklr_core::basisrewrite::{enumerate_basis, graded_dimension, AlgebraElement, Engine};
use bklr_core::cartan::{validate_cartan, validate_scalars, ParabolicDatum};
use bklr_core::dgstruct::{self, CollapsedDegree};
use bklr_core::polyrep::{Layout, Orientation, Rep};
use bklr_core::qside::{quantum_integer, Verma};
use bklr_core::series::{GradedSeries, Window};
use bklr_core::{scalar, Scalar};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::config::{label, Config};
use crate::error::{CliError, Result};
use crate::parse::{element_text, json_terms, parse_any, parse_labels, parse_poly, parse_weight, poly_text, word_text};
use crate::report::{self, Report};
use crate::suites;

#[derive(Debug, Parser)]
#[command(name = "bklr", version, about = "Computations in b-KLR algebras and their quantum-group shadows")]
pub struct Cli {
    /// JSON configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Overrides `engine.truncation`.
    #[arg(long, global = true)]
    pub truncate: Option<i64>,
    /// Overrides `engine.degree_bound`.
    #[arg(long = "degree-bound", global = true)]
    pub degree_bound: Option<i64>,
    /// Prints the elapsed time to stderr.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Block {
    /// Bottom sequence, e.g. `1,2,1`.
    #[arg(long, allow_hyphen_values = true)]
    pub i: String,
    /// Top sequence.
    #[arg(long, allow_hyphen_values = true)]
    pub j: String,
}

#[derive(Debug, Args)]
pub struct ElementArg {
    /// Element in the text syntax, or a JSON term list.
    #[arg(long, conflicts_with = "file")]
    pub element: Option<String>,
    /// Reads the element from a file.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Checks the configuration.
    Validate,
    /// Lists the tightened basis of `1_j R 1_i` up to the degree bound.
    Basis(Block),
    /// Graded dimension of `1_j R 1_i`.
    Gdim {
        #[arg(long)]
        nu: Option<String>,
        #[command(flatten)]
        block: Block,
        #[arg(long)]
        signed: bool,
    },
    /// Normal form of an element.
    NormalForm(ElementArg),
    /// Product `a·b` (`a` on top of `b`).
    Multiply {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Action of an element on a polynomial of `Q_ν`.
    Act {
        #[command(flatten)]
        element: ElementArg,
        /// E.g. `x(1,1)^2*w(1,2)`; defaults to `1`.
        #[arg(long, default_value = "1")]
        poly: String,
    },
    /// Checks every local relation under the polynomial action.
    VerifyRelations {
        #[arg(long = "max-strands", default_value_t = 3)]
        max_strands: usize,
    },
    /// The differential `d_N` of an element.
    D(ElementArg),
    /// Checks `d_N² = 0` on `R(ν)`.
    DSquared {
        #[arg(long)]
        nu: String,
        #[arg(long, default_value_t = 20)]
        random: usize,
    },
    /// Homology of `(1_j R 1_i, d_N)` per slice.
    Homology(Block),
    /// Graded dimension of the cyclotomic quotient `1_j R^N 1_i`.
    CyclotomicGdim(Block),
    /// The Shapovalov pairing `(F_i v, F_j v)`, strands read as in `1_i R 1_j`.
    Shapovalov {
        #[command(flatten)]
        block: Block,
        /// Uses the universal Verma module instead of the configured one.
        #[arg(long)]
        universal: bool,
    },
    /// Gram matrix of the weight space `Λ - ν`.
    Gram {
        #[arg(long)]
        nu: String,
        #[arg(long)]
        universal: bool,
    },
    /// Dimension of the weight space `Λ - ν`.
    VermaDim {
        #[arg(long)]
        nu: String,
        #[arg(long)]
        universal: bool,
    },
    /// The quantum integer `[n]_{q_i}`.
    Qint {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long)]
        i: String,
    },
    /// Compares signed graded dimensions with Shapovalov pairings.
    VerifyShapovalov {
        #[arg(long, default_value_t = 2)]
        height: usize,
    },
    /// Checks the induction/restriction and commutator identities.
    VerifySes {
        #[arg(long, default_value_t = 2)]
        height: usize,
    },
    /// Checks formality and acyclicity of `d_N`.
    VerifyFormality {
        #[arg(long, default_value_t = 2)]
        height: usize,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Basis(_) => "basis",
            Command::Gdim { .. } => "gdim",
            Command::NormalForm(_) => "normal-form",
            Command::Multiply { .. } => "multiply",
            Command::Act { .. } => "act",
            Command::VerifyRelations { .. } => "verify-relations",
            Command::D(_) => "d",
            Command::DSquared { .. } => "d-squared",
            Command::Homology(_) => "homology",
            Command::CyclotomicGdim(_) => "cyclotomic-gdim",
            Command::Shapovalov { .. } => "shapovalov",
            Command::Gram { .. } => "gram",
            Command::VermaDim { .. } => "verma-dim",
            Command::Qint { .. } => "qint",
            Command::VerifyShapovalov { .. } => "verify-shapovalov",
            Command::VerifySes { .. } => "verify-ses",
            Command::VerifyFormality { .. } => "verify-formality",
        }
    }
}

struct Ctx {
    cfg: Config,
    truncation: i64,
    bound: i64,
}

impl Ctx {
    fn engine(&self) -> Engine<'_> {
        let mut e = Engine::new(&self.cfg.datum, &self.cfg.scalars);
        e.step_budget = self.cfg.engine.step_budget;
        e
    }

    fn window(&self) -> Window {
        Window::new(self.truncation as i32)
    }

    fn parab(&self) -> Result<&ParabolicDatum> {
        if self.cfg.parabolic.n.is_empty() {
            return Err(CliError::Input("this command needs a parabolic datum with nonempty I_f".into()));
        }
        Ok(&self.cfg.parabolic)
    }

    fn labels(&self, text: &str) -> Result<Vec<usize>> {
        parse_labels(&self.cfg.datum, text)
    }

    fn element(&self, eng: &mut Engine, arg: &ElementArg) -> Result<AlgebraElement> {
        let text = match (&arg.element, &arg.file) {
            (Some(t), _) => t.clone(),
            (None, Some(p)) => std::fs::read_to_string(p)
                .map_err(|source| CliError::Io { path: p.display().to_string(), source })?,
            (None, None) => return Err(CliError::Input("give --element or --file".into())),
        };
        self.element_from(eng, &text)
    }

    fn element_from(&self, eng: &mut Engine, text: &str) -> Result<AlgebraElement> {
        let words = parse_any(&self.cfg.datum, text)?;
        Ok(eng.normal_form_combination(&words)?)
    }

    fn element_value(&self, e: &AlgebraElement) -> Value {
        let d = &self.cfg.datum;
        json!({
            "bottom": report::labels(d, &e.bottom),
            "top": report::labels(d, &e.top),
            "text": element_text(d, e),
            "terms": json_terms(d, e),
        })
    }

    fn config_echo(&self) -> Value {
        let d = &self.cfg.datum;
        json!({
            "labels": d.labels,
            "matrix": d.matrix,
            "d": d.d,
            "parabolic": self.cfg.parabolic.n.iter().map(|(&j, &n)| (d.labels[j].clone(), n)).collect::<std::collections::BTreeMap<_, _>>(),
            "truncation": self.truncation,
            "degree_bound": self.bound,
        })
    }
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Result<Report> {
    let path = cli.config.as_ref().ok_or_else(|| CliError::Input("--config is required".into()))?;
    let cfg = Config::load(path)?;
    run_with(cli, cfg)
}

pub fn run_with(cli: &Cli, cfg: Config) -> Result<Report> {
    let truncation = cli.truncate.unwrap_or(cfg.engine.truncation);
    let bound = cli.degree_bound.unwrap_or(cfg.engine.degree_bound);
    let ctx = Ctx { cfg, truncation, bound };
    let pool = suites::pool(ctx.cfg.engine.parallelism);
    let (inputs, ok, results) = pool.install(|| dispatch(&ctx, &cli.command))?;
    let inputs = json!({"config": ctx.config_echo(), "args": inputs});
    Ok(Report::new(cli.command.name(), inputs, ok, results))
}

fn block_echo(b: &Block) -> Value {
    json!({"i": b.i, "j": b.j})
}

fn outcome_value(o: &suites::Outcome) -> Value {
    json!({"checked": o.checked, "failures": o.failures, "data": o.data})
}

fn dispatch(ctx: &Ctx, cmd: &Command) -> Result<(Value, bool, Value)> {
    let d = &ctx.cfg.datum;
    let limit = ctx.cfg.engine.basis_limit;
    Ok(match cmd {
        Command::Validate => {
            let v: Vec<Value> = validate_cartan(d)
                .into_iter()
                .chain(validate_scalars(d, &ctx.cfg.scalars))
                .map(|x| json!({"rule": x.rule, "detail": x.detail}))
                .collect();
            (json!({}), v.is_empty(), json!({"violations": v, "rank": d.rank()}))
        }
        Command::Basis(b) => {
            let (i, j) = (ctx.labels(&b.i)?, ctx.labels(&b.j)?);
            let basis = enumerate_basis(d, &i, &j, ctx.bound, limit)?;
            let items: Vec<Value> = basis
                .iter()
                .map(|e| {
                    let deg = e.degree(d);
                    json!({
                        "word": word_text(d, &e.word()),
                        "degree": {"q": deg.q, "lam": report::weight(d, &deg.lam.iter().map(|&x| x as usize).collect::<Vec<_>>()), "h": deg.h},
                    })
                })
                .collect();
            (block_echo(b), true, json!({"count": basis.len(), "elements": items}))
        }
        Command::Gdim { nu, block, signed } => {
            let (i, j) = (ctx.labels(&block.i)?, ctx.labels(&block.j)?);
            if let Some(nu) = nu {
                let nu = parse_weight(d, nu)?;
                if d.weight_of(&i) != nu || d.weight_of(&j) != nu {
                    return Err(CliError::Input("the sequences do not have weight --nu".into()));
                }
            }
            let g = graded_dimension(d, &i, &j, *signed)?;
            let mut echo = block_echo(block);
            echo["signed"] = json!(signed);
            (echo, true, report::series(d, &g, &ctx.window())?)
        }
        Command::NormalForm(arg) => {
            let mut eng = ctx.engine();
            let e = ctx.element(&mut eng, arg)?;
            (json!({"element": arg.element}), true, ctx.element_value(&e))
        }
        Command::Multiply { a, b } => {
            let mut eng = ctx.engine();
            let x = ctx.element_from(&mut eng, a)?;
            let y = ctx.element_from(&mut eng, b)?;
            let p = eng.multiply(&x, &y)?;
            (json!({"a": a, "b": b}), true, ctx.element_value(&p))
        }
        Command::Act { element, poly } => {
            let words = match (&element.element, &element.file) {
                (Some(t), _) => parse_any(d, t)?,
                (None, Some(p)) => parse_any(
                    d,
                    &std::fs::read_to_string(p).map_err(|source| CliError::Io { path: p.display().to_string(), source })?,
                )?,
                (None, None) => return Err(CliError::Input("give --element or --file".into())),
            };
            let layout = Layout::new(&d.weight_of(&words[0].1.bottom))?;
            let f = parse_poly(d, &layout, poly)?;
            let o = Orientation::default_for(d);
            let rep = Rep::new(d, &ctx.cfg.scalars, &o);
            let img = rep.act_combination(&words, &[f])?.remove(0);
            let parts: Vec<Value> = img
                .iter()
                .map(|(top, p)| json!({"idempotent": report::labels(d, top), "poly": poly_text(d, &layout, p)}))
                .collect();
            (json!({"element": element.element, "poly": poly}), true, json!({"image": parts}))
        }
        Command::VerifyRelations { max_strands } => {
            let o = suites::relations(d, &ctx.cfg.scalars, *max_strands, ctx.cfg.engine.oracle_degree);
            let fams = o.data["family_count"].clone();
            let mut res = outcome_value(&o);
            res["relations_checked"] = fams;
            (json!({"max_strands": max_strands, "oracle_degree": ctx.cfg.engine.oracle_degree}), o.ok(), res)
        }
        Command::D(arg) => {
            let p = ctx.parab()?;
            let mut eng = ctx.engine();
            let e = ctx.element(&mut eng, arg)?;
            let de = dgstruct::differential(&mut eng, p, &e)?;
            (json!({"element": arg.element}), true, ctx.element_value(&de))
        }
        Command::DSquared { nu, random } => {
            let p = ctx.parab()?;
            let nuv = parse_weight(d, nu)?;
            let mut eng = ctx.engine();
            let r = dgstruct::check_d_squared(&mut eng, p, &nuv, ctx.bound, *random, 1, limit)?;
            let res = json!({"checked": r.checked, "counterexample": r.counterexample});
            (json!({"nu": report::weight(d, &nuv), "random": random}), r.counterexample.is_none(), res)
        }
        Command::Homology(b) => {
            let p = ctx.parab()?;
            let (i, j) = (ctx.labels(&b.i)?, ctx.labels(&b.j)?);
            let mut eng = ctx.engine();
            let mut slices = Vec::new();
            for s in dgstruct::chain_slices(d, p, &i, &j, ctx.bound, limit)? {
                let h = dgstruct::slice_homology(&mut eng, p, &s)?;
                let sizes: Vec<Value> = s.levels.iter().map(|(h, v)| json!([h, v.len()])).collect();
                let dims: Vec<Value> = h
                    .iter()
                    .map(|(&hh, &dim)| {
                        let c = CollapsedDegree { q: s.q, lam_r: s.lam_r.clone(), h: hh };
                        json!({"h": hh, "finite_h": dgstruct::finite_h(&c), "dim": dim})
                    })
                    .collect();
                slices.push(json!({"q": s.q, "lam_r": s.lam_r, "chain": sizes, "homology": dims}));
            }
            (block_echo(b), true, json!({"slices": slices}))
        }
        Command::CyclotomicGdim(b) => {
            let p = ctx.parab()?;
            let (i, j) = (ctx.labels(&b.i)?, ctx.labels(&b.j)?);
            let mut eng = ctx.engine();
            let g = dgstruct::cyclotomic_gdim(&mut eng, p, &i, &j, ctx.truncation, limit)?;
            let signed = g.signed();
            let mut res = report::series(d, &g, &ctx.window())?;
            res["signed"] = report::series(d, &signed, &ctx.window())?;
            (block_echo(b), true, res)
        }
        Command::Shapovalov { block, universal } => {
            let (i, j) = (ctx.labels(&block.i)?, ctx.labels(&block.j)?);
            let mut v = verma(ctx, *universal);
            let s = v.strand_pairing(&i, &j);
            let mut echo = block_echo(block);
            echo["universal"] = json!(universal);
            (echo, true, report::series(d, &s, &ctx.window())?)
        }
        Command::Gram { nu, universal } => {
            let nuv = parse_weight(d, nu)?;
            let mut v = verma(ctx, *universal);
            let seqs = v.sequences(&nuv);
            let den = v.denominator(&nuv);
            let g = v.gram_numerators(&nuv);
            let rows: Vec<Value> = g.iter().map(|r| json!(r.iter().map(|x| report::laurent(d, x)).collect::<Vec<_>>())).collect();
            let rendered: Vec<Vec<String>> = g
                .iter()
                .map(|r| r.iter().map(|x| GradedSeries::Exact { num: x.clone(), den: den.clone() }.render(&d.labels)).collect())
                .collect();
            let res = json!({
                "sequences": seqs.iter().map(|s| report::labels(d, s)).collect::<Vec<_>>(),
                "denominator": report::laurent(d, &den),
                "numerators": rows,
                "rendered": rendered,
            });
            (json!({"nu": report::weight(d, &nuv), "universal": universal}), true, res)
        }
        Command::VermaDim { nu, universal } => {
            let nuv = parse_weight(d, nu)?;
            let mut v = verma(ctx, *universal);
            let dim = v.weight_dim(&nuv);
            (json!({"nu": report::weight(d, &nuv), "universal": universal}), true, json!({"dim": dim}))
        }
        Command::Qint { n, i } => {
            let l = label(d, i)?;
            let p = quantum_integer(*n, d.d[l] as i32, d.rank());
            let terms: Vec<Value> = p.terms().iter().map(|(e, c)| json!([e.q, coeff_value(c)])).collect();
            (json!({"n": n, "i": i}), true, json!({"terms": terms, "rendered": p.render(&d.labels)}))
        }
        Command::VerifyShapovalov { height } => {
            let o = suites::shapovalov(d, *height);
            (json!({"height": height}), o.ok(), outcome_value(&o))
        }
        Command::VerifySes { height } => {
            let ses = suites::ses(d, *height);
            let mut ok = ses.ok();
            let mut res = json!({"ses": outcome_value(&ses)});
            if !ctx.cfg.parabolic.n.is_empty() {
                let c = suites::commutator(d, &ctx.cfg.scalars, &ctx.cfg.parabolic, *height, ctx.truncation, limit);
                ok &= c.ok();
                res["commutator"] = outcome_value(&c);
            }
            (json!({"height": height}), ok, res)
        }
        Command::VerifyFormality { height } => {
            let p = ctx.parab()?.clone();
            let o = suites::formality(d, &ctx.cfg.scalars, &[p], *height, ctx.bound, limit);
            (json!({"height": height}), o.ok(), outcome_value(&o))
        }
    })
}

fn verma(ctx: &Ctx, universal: bool) -> Verma<'_> {
    if universal {
        Verma::universal(&ctx.cfg.datum)
    } else {
        Verma::new(&ctx.cfg.datum, &ctx.cfg.parabolic)
    }
}

/// Integers as JSON numbers, other rationals as `"p/q"` strings.
fn coeff_value(c: &Scalar) -> Value {
    if c.is_integer() {
        if let Ok(n) = c.to_integer().to_string().parse::<i64>() {
            return json!(n);
        }
    }
    json!(scalar::format(c))
}
