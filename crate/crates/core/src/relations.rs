//! The local relations, as linear combinations of words that sum to zero.
//!
//! The same formulas drive the rewriting engine (R2/R3 corrections and the
//! expansion of general floating dots), so checking the instances against the
//! polynomial action certifies both.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::cartan::{CartanDatum, ScalarChoice};
use crate::diagram::{DiagramWord, Generator};
use crate::scalar::{self, Scalar};
use crate::Label;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    R2,
    DotSlide,
    NilHecke,
    R3,
    FloatMoves,
    FloatDots,
    ExtR2,
    Leftmost,
    FloatToLeft,
    TightAnticommute,
    Isotopy,
}

impl Family {
    /// The defining families; the rest are derived.
    pub const DEFINING: [Family; 8] = [
        Family::R2,
        Family::DotSlide,
        Family::NilHecke,
        Family::R3,
        Family::FloatMoves,
        Family::FloatDots,
        Family::ExtR2,
        Family::Leftmost,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::R2 => "KLRR2",
            Family::DotSlide => "KLRdotslide",
            Family::NilHecke => "KLRnh",
            Family::R3 => "KLRR3",
            Family::FloatMoves => "fdmoves",
            Family::FloatDots => "fdots",
            Family::ExtR2 => "ExtR2",
            Family::Leftmost => "leftmost",
            Family::FloatToLeft => "fdtotheleft",
            Family::TightAnticommute => "tightfdcommutes",
            Family::Isotopy => "isotopy",
        }
    }
}

pub type Term = (Scalar, Vec<Generator>);

#[derive(Clone, Debug)]
pub struct RelationInstance {
    pub family: Family,
    pub name: String,
    pub bottom: Vec<Label>,
    /// The relation is `Σ c · word = 0`.
    pub terms: Vec<Term>,
}

impl RelationInstance {
    pub fn words(&self) -> Vec<(Scalar, DiagramWord)> {
        self.terms
            .iter()
            .map(|(c, g)| (c.clone(), DiagramWord { bottom: self.bottom.clone(), gens: g.clone() }))
            .collect()
    }
}

pub fn dots(a: usize, n: u32) -> Vec<Generator> {
    vec![Generator::Dot(a); n as usize]
}

fn cat(parts: &[&[Generator]]) -> Vec<Generator> {
    parts.iter().flat_map(|p| p.iter().copied()).collect()
}

fn fl(label: Label, sup: u32, region: usize) -> Generator {
    Generator::Float { label, sup, region }
}

/// `τ_a τ_a = Σ c · (dots)` for labels `i, j` at positions `a, a+1`.
pub fn r2_value(datum: &CartanDatum, sc: &ScalarChoice, i: Label, j: Label, a: usize) -> Vec<Term> {
    if i == j {
        return Vec::new();
    }
    sc.q_terms(datum, i, j)
        .into_iter()
        .map(|(t, v, s)| (s, cat(&[&dots(a, t), &dots(a + 1, v)])))
        .collect()
}

/// `τ_a τ_{a+1} τ_a - τ_{a+1} τ_a τ_{a+1}` (bottom-to-top order) for labels
/// `i, j, k` at positions `a, a+1, a+2`.
pub fn r3_value(datum: &CartanDatum, sc: &ScalarChoice, i: Label, j: Label, k: Label, a: usize) -> Vec<Term> {
    if i != k || i == j {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (t, v, s) in sc.q_terms(datum, i, j) {
        for u in 0..t {
            let l = t - 1 - u;
            out.push((&sc.r[i] * &s, cat(&[&dots(a, u), &dots(a + 1, v), &dots(a + 2, l)])));
        }
    }
    out
}

fn neg(terms: Vec<Term>) -> Vec<Term> {
    terms.into_iter().map(|(c, g)| (-c, g)).collect()
}

/// All relation instances on the strands `bottom`, with floating-dot
/// superscripts up to `max_sup`.
pub fn instances(datum: &CartanDatum, sc: &ScalarChoice, bottom: &[Label], max_sup: u32) -> Vec<RelationInstance> {
    let m = bottom.len();
    let n = datum.rank();
    let one = scalar::one;
    let mut out = Vec::new();
    let mut push = |family: Family, name: String, terms: Vec<Term>| {
        out.push(RelationInstance { family, name, bottom: bottom.to_vec(), terms });
    };
    let t = Generator::Cross;
    let x = Generator::Dot;

    for a in 1..m {
        let (i, j) = (bottom[a - 1], bottom[a]);
        let mut terms = vec![(one(), vec![t(a), t(a)])];
        terms.extend(neg(r2_value(datum, sc, i, j, a)));
        push(Family::R2, alloc::format!("R2 a={a}"), terms);

        let fam = if i == j { Family::NilHecke } else { Family::DotSlide };
        let r = if i == j { sc.r[i].clone() } else { scalar::zero() };
        let mut t1 = vec![(one(), vec![x(a), t(a)]), (-one(), vec![t(a), x(a + 1)])];
        let mut t2 = vec![(one(), vec![x(a + 1), t(a)]), (-one(), vec![t(a), x(a)])];
        if i == j {
            t1.push((-r.clone(), vec![]));
            t2.push((r, vec![]));
        }
        push(fam, alloc::format!("dot below left a={a}"), t1);
        push(fam, alloc::format!("dot below right a={a}"), t2);

        for c in 1..=m {
            if c != a && c != a + 1 {
                push(Family::Isotopy, alloc::format!("dot {c} past crossing {a}"), vec![
                    (one(), vec![x(c), t(a)]),
                    (-one(), vec![t(a), x(c)]),
                ]);
            }
        }
        for b in (a + 2)..m {
            push(Family::Isotopy, alloc::format!("crossings {a},{b}"), vec![
                (one(), vec![t(a), t(b)]),
                (-one(), vec![t(b), t(a)]),
            ]);
        }
    }

    for a in 1..m.saturating_sub(1) {
        let (i, j, k) = (bottom[a - 1], bottom[a], bottom[a + 1]);
        let mut terms = vec![(one(), vec![t(a), t(a + 1), t(a)]), (-one(), vec![t(a + 1), t(a), t(a + 1)])];
        terms.extend(neg(r3_value(datum, sc, i, j, k, a)));
        push(Family::R3, alloc::format!("R3 a={a}"), terms);
    }

    let sups: Vec<u32> = (0..=max_sup).collect();
    for p1 in 0..=m {
        for p2 in 0..=m {
            for j1 in 0..n {
                for j2 in 0..n {
                    for &a1 in &sups {
                        for &a2 in &sups {
                            let (f1, f2) = (fl(j1, a1, p1), fl(j2, a2, p2));
                            if f1 > f2 {
                                continue;
                            }
                            push(Family::FloatMoves, alloc::format!("{f1:?} {f2:?}"), vec![
                                (one(), vec![f1, f2]),
                                (one(), vec![f2, f1]),
                            ]);
                        }
                    }
                }
            }
        }
    }

    for p in 0..=m {
        for j in 0..n {
            for &c in &sups {
                if p == 0 {
                    push(Family::Leftmost, alloc::format!("leftmost j={j} a={c}"), vec![(one(), vec![fl(j, c, 0)])]);
                    continue;
                }
                let i = bottom[p - 1];
                let mut terms = vec![(one(), vec![fl(j, c, p)])];
                if i == j {
                    if c == 0 {
                        continue;
                    }
                    terms.push((-one(), vec![fl(j, c - 1, p - 1)]));
                    terms.push((one(), vec![x(p), fl(j, c - 1, p)]));
                } else {
                    for (tt, v, s) in sc.q_terms(datum, i, j) {
                        let coef = -(scalar::sign(v as i64) * s);
                        terms.push((coef, cat(&[&dots(p, tt), &[fl(j, c + v, p - 1)]])));
                    }
                }
                push(Family::FloatDots, alloc::format!("fdots p={p} j={j} a={c}"), terms);
            }
            for b in 1..m {
                if b != p {
                    push(Family::Isotopy, alloc::format!("float {p} past crossing {b}"), vec![
                        (one(), vec![fl(j, 0, p), t(b)]),
                        (-one(), vec![t(b), fl(j, 0, p)]),
                    ]);
                }
            }
            for c in 1..=m {
                push(Family::Isotopy, alloc::format!("float {p} past dot {c}"), vec![
                    (one(), vec![fl(j, 1, p), x(c)]),
                    (-one(), vec![x(c), fl(j, 1, p)]),
                ]);
            }
        }
    }

    for a in 1..m {
        let (i, j) = (bottom[a - 1], bottom[a]);
        for &c in &sups {
            if i != j {
                let mut terms = vec![(one(), vec![t(a), fl(j, c, a), t(a)]), (-one(), vec![fl(j, c, a + 1)])];
                for (tt, v, s) in sc.q_terms(datum, i, j) {
                    for u in 0..v {
                        let l = v - 1 - u;
                        terms.push((
                            -(scalar::sign(u as i64) * &s),
                            cat(&[&dots(a, tt), &dots(a + 1, l), &[fl(j, c + u, a - 1)]]),
                        ));
                    }
                }
                push(Family::ExtR2, alloc::format!("ExtR2 a={a} c={c}"), terms);
            } else {
                // Both crossings carry a factor r_i, hence the r_i^{-2}.
                let ri = scalar::one() / &(&sc.r[i] * &sc.r[i]);
                push(Family::FloatToLeft, alloc::format!("fdtotheleft a={a} c={c}"), vec![
                    (one(), vec![fl(i, c, a + 1)]),
                    (-ri.clone(), vec![t(a), fl(i, c, a), t(a), x(a + 1)]),
                    (ri, vec![x(a), t(a), fl(i, c, a), t(a)]),
                ]);
            }
        }
        // Only the tight instance: each floating dot carries the label of the
        // strand immediately to its left.
        let (f1, f2) = (fl(j, 0, a), fl(i, 0, a));
        push(Family::TightAnticommute, alloc::format!("{f1:?} {f2:?} around τ{a}"), vec![
            (one(), vec![t(a), f1, t(a), f2]),
            (one(), vec![f2, t(a), f1, t(a)]),
        ]);
    }
    out
}

/// All sequences of length `m` over `n` labels.
pub fn sequences(n: usize, m: usize) -> Vec<Vec<Label>> {
    let mut out = vec![Vec::new()];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|s| {
                (0..n).map(move |l| {
                    let mut t = s.clone();
                    t.push(l);
                    t
                })
            })
            .collect();
    }
    out
}

/// Whether `inst` acts as zero on every vector of `vectors`.
pub fn vanishes(rep: &crate::polyrep::Rep, inst: &RelationInstance, vectors: &[crate::polyrep::Poly]) -> crate::error::Result<bool> {
    let images = rep.act_combination(&inst.words(), vectors)?;
    Ok(images.iter().all(|m| m.is_empty()))
}
