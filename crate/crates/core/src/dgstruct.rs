//! The differential `d_N`, its homology on graded slices, and the dimension
//! identities for the bimodule sequences of induction and restriction.
//!
//! `d_N` kills dots and crossings and sends a tight floating dot with label
//! `j ∈ I_f` to `(-1)^{n_j} x_1^{n_j}`; on basis words it is extended by the
//! Leibniz rule with the sign `(-1)^{h}` of everything above the floating
//! dot. It preserves the collapsed degree `q' = q + Σ_{j∈I_f} n_j d_j deg_λj`
//! and the `λ`-degrees on `I_r`, so each such slice is a finite complex.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::basisrewrite::{
    enumerate_basis_by, graded_dimension, key_gens, tri_to_exp, AlgebraElement, BasisElement, Engine, Key,
};
use crate::cartan::{CartanDatum, ParabolicDatum};
use crate::diagram::{self, DiagramWord, Generator, TriDegree};
use crate::error::{Error, Result};
use crate::linalg::{Echelon, SparseRow};
use crate::polyrep::{Layout, Mono, Orientation, Poly, Rep};
use crate::relations::sequences;
use crate::scalar::{self, Scalar};
use crate::series::{quantum_integer, Exp, GradedSeries, Laurent, Window};
use crate::Label;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CollapsedDegree {
    pub q: i64,
    /// `λ`-degrees over `I_r`, in label order.
    pub lam_r: Vec<i64>,
    pub h: i64,
}

pub fn collapse(datum: &CartanDatum, parab: &ParabolicDatum, d: &TriDegree) -> CollapsedDegree {
    let mut q = d.q;
    for (&j, &nj) in &parab.n {
        q += nj as i64 * datum.d[j] * d.lam[j];
    }
    CollapsedDegree { q, lam_r: parab.i_r(datum).iter().map(|&j| d.lam[j]).collect(), h: d.h }
}

/// `d_N` of a word made of dots, crossings and tight floating dots.
fn differential_gens(
    engine: &mut Engine,
    parab: &ParabolicDatum,
    bottom: &[Label],
    gens: &[Generator],
) -> Result<AlgebraElement> {
    let top = DiagramWord { bottom: bottom.to_vec(), gens: gens.to_vec() }.top();
    let mut out = AlgebraElement::zero(bottom.to_vec(), top);
    let mut above = gens.iter().filter(|g| g.is_float()).count();
    for (k, g) in gens.iter().enumerate() {
        let Generator::Float { label, sup, region } = *g else { continue };
        above -= 1;
        if sup != 0 || region != 1 {
            return Err(Error::Internal(format!("d_N applied to a non-tight floating dot {g:?}")));
        }
        let Some(n) = parab.n_of(label) else { continue };
        let mut w = gens[..k].to_vec();
        w.extend(core::iter::repeat_n(Generator::Dot(1), n as usize));
        w.extend_from_slice(&gens[k + 1..]);
        let v = engine.normal_form_word(&DiagramWord { bottom: bottom.to_vec(), gens: w })?;
        out.add_scaled(&v, &scalar::sign((above + n as usize) as i64));
    }
    Ok(out)
}

/// `d_N` on an element in normal form.
pub fn differential(engine: &mut Engine, parab: &ParabolicDatum, e: &AlgebraElement) -> Result<AlgebraElement> {
    let mut out = AlgebraElement::zero(e.bottom.clone(), e.top.clone());
    for (key, c) in &e.terms {
        let v = differential_gens(engine, parab, &e.bottom, &key_gens(&e.bottom, key))?;
        out.add_scaled(&v, c);
    }
    Ok(out)
}

/// `d_N` of an arbitrary word, through its normal form.
pub fn differential_word(engine: &mut Engine, parab: &ParabolicDatum, w: &DiagramWord) -> Result<AlgebraElement> {
    let nf = engine.normal_form_word(w)?;
    differential(engine, parab, &nf)
}

fn basis_bounded(
    datum: &CartanDatum,
    parab: &ParabolicDatum,
    i: &[Label],
    j: &[Label],
    bound: i64,
    limit: u64,
) -> Result<Vec<BasisElement>> {
    enumerate_basis_by(datum, i, j, bound, limit, |d| collapse(datum, parab, d).q)
}

/// A small deterministic generator for the random part of the checks.
struct SplitMix(u64);

impl SplitMix {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    fn below(&mut self, n: usize) -> usize {
        (self.next() % n as u64) as usize
    }
}

/// Outcome of [`check_d_squared`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DSquaredReport {
    pub checked: usize,
    pub counterexample: Option<String>,
}

/// Checks `d_N² = 0` on every basis element of `R(ν)` with collapsed degree
/// at most `bound`, and on `random` products of two basis elements.
pub fn check_d_squared(
    engine: &mut Engine,
    parab: &ParabolicDatum,
    nu: &[usize],
    bound: i64,
    random: usize,
    seed: u64,
    limit: u64,
) -> Result<DSquaredReport> {
    let datum = engine.datum;
    let m: usize = nu.iter().sum();
    let seqs: Vec<Vec<Label>> =
        sequences(datum.rank(), m).into_iter().filter(|s| datum.weight_of(s) == nu).collect();
    let mut checked = 0;
    let mut blocks = BTreeMap::new();
    for i in &seqs {
        for j in &seqs {
            let basis = basis_bounded(datum, parab, i, j, bound, limit)?;
            for b in &basis {
                let e = AlgebraElement::basis(b);
                let de = differential(engine, parab, &e)?;
                let dd = differential(engine, parab, &de)?;
                checked += 1;
                if !dd.is_zero() {
                    return Ok(DSquaredReport { checked, counterexample: Some(format!("{:?}", b.word())) });
                }
            }
            blocks.insert((i.clone(), j.clone()), basis);
        }
    }
    let mut rng = SplitMix(seed);
    for _ in 0..random {
        if seqs.is_empty() {
            break;
        }
        let (a, b, c) = (&seqs[rng.below(seqs.len())], &seqs[rng.below(seqs.len())], &seqs[rng.below(seqs.len())]);
        let lower = &blocks[&(a.clone(), b.clone())];
        let upper = &blocks[&(b.clone(), c.clone())];
        if lower.is_empty() || upper.is_empty() {
            continue;
        }
        let x = AlgebraElement::basis(&upper[rng.below(upper.len())]);
        let y = AlgebraElement::basis(&lower[rng.below(lower.len())]);
        let p = engine.multiply(&x, &y)?;
        let dp = differential(engine, parab, &p)?;
        let dd = differential(engine, parab, &dp)?;
        checked += 1;
        if !dd.is_zero() {
            return Ok(DSquaredReport {
                checked,
                counterexample: Some(format!("product of {:?} and {:?}", x.words(), y.words())),
            });
        }
    }
    Ok(DSquaredReport { checked, counterexample: None })
}

/// The part of `1_top R 1_bottom` in one collapsed degree, split by `h`.
#[derive(Clone, Debug)]
pub struct ChainSlice {
    pub bottom: Vec<Label>,
    pub top: Vec<Label>,
    pub q: i64,
    pub lam_r: Vec<i64>,
    pub levels: BTreeMap<i64, Vec<BasisElement>>,
}

/// All slices of `1_j R 1_i` with collapsed degree `q' ≤ bound`, in
/// increasing `(q', λ_r)` order.
pub fn chain_slices(
    datum: &CartanDatum,
    parab: &ParabolicDatum,
    i: &[Label],
    j: &[Label],
    bound: i64,
    limit: u64,
) -> Result<Vec<ChainSlice>> {
    let mut by: BTreeMap<(i64, Vec<i64>), BTreeMap<i64, Vec<BasisElement>>> = BTreeMap::new();
    for b in basis_bounded(datum, parab, i, j, bound, limit)? {
        let c = collapse(datum, parab, &b.degree(datum));
        by.entry((c.q, c.lam_r)).or_default().entry(c.h).or_default().push(b);
    }
    Ok(by
        .into_iter()
        .map(|((q, lam_r), levels)| ChainSlice { bottom: i.to_vec(), top: j.to_vec(), q, lam_r, levels })
        .collect())
}

/// Matrices of `d_N` on a slice: for each `h`, the rows are the images of the
/// level-`h` basis in coordinates of level `h-1`.
pub fn slice_matrices(
    engine: &mut Engine,
    parab: &ParabolicDatum,
    slice: &ChainSlice,
) -> Result<BTreeMap<i64, Vec<SparseRow>>> {
    let mut out = BTreeMap::new();
    for (&h, elems) in &slice.levels {
        let target: BTreeMap<&Key, usize> = match slice.levels.get(&(h - 1)) {
            Some(t) => t.iter().enumerate().map(|(k, b)| (&b.key, k)).collect(),
            None => BTreeMap::new(),
        };
        let mut rows = Vec::with_capacity(elems.len());
        for b in elems {
            let d = differential(engine, parab, &AlgebraElement::basis(b))?;
            let mut row = SparseRow::new();
            for (k, c) in &d.terms {
                let idx = target.get(k).ok_or_else(|| {
                    Error::Internal(format!("d_N left the slice (q'={}, h={h}) at {:?}", slice.q, b.word()))
                })?;
                row.insert(*idx, c.clone());
            }
            rows.push(row);
        }
        out.insert(h, rows);
    }
    Ok(out)
}

/// `dim H^h` of one slice, for every `h` carrying basis elements.
pub fn slice_homology(engine: &mut Engine, parab: &ParabolicDatum, slice: &ChainSlice) -> Result<BTreeMap<i64, usize>> {
    let mats = slice_matrices(engine, parab, slice)?;
    let mut ranks = BTreeMap::new();
    for (&h, rows) in &mats {
        let mut e = Echelon::new();
        for r in rows {
            e.insert(r.clone());
        }
        ranks.insert(h, e.rank());
    }
    Ok(slice
        .levels
        .iter()
        .map(|(&h, elems)| {
            let out_rank = ranks.get(&h).copied().unwrap_or(0);
            let in_rank = ranks.get(&(h + 1)).copied().unwrap_or(0);
            (h, elems.len() - out_rank - in_rank)
        })
        .collect())
}

/// Homology dimensions of `1_j R 1_i` on the slices in `window`, keyed by
/// collapsed degree (with `h`); zero entries are kept.
pub fn homology_dims(
    engine: &mut Engine,
    parab: &ParabolicDatum,
    i: &[Label],
    j: &[Label],
    window: &[(i64, Vec<i64>)],
    limit: u64,
) -> Result<BTreeMap<CollapsedDegree, usize>> {
    let datum = engine.datum;
    let mut out = BTreeMap::new();
    let Some(bound) = window.iter().map(|w| w.0).max() else { return Ok(out) };
    for s in chain_slices(datum, parab, i, j, bound, limit)? {
        if !window.iter().any(|(q, l)| *q == s.q && *l == s.lam_r) {
            continue;
        }
        for (h, d) in slice_homology(engine, parab, &s)? {
            out.insert(CollapsedDegree { q: s.q, lam_r: s.lam_r.clone(), h }, d);
        }
    }
    Ok(out)
}

/// Assembles per-slice homology into a series in `q'`, the `λ_r` and `h`.
pub fn assemble(datum: &CartanDatum, parab: &ParabolicDatum, dims: &BTreeMap<CollapsedDegree, usize>, window: Window) -> GradedSeries {
    let n = datum.rank();
    let ir = parab.i_r(datum);
    let mut terms = Laurent::zero(n);
    for (c, &d) in dims {
        let mut e = Exp::zero(n);
        e.q = c.q as i32;
        e.h = c.h as i32;
        for (k, &j) in ir.iter().enumerate() {
            e.lam[j] = c.lam_r[k] as i32;
        }
        terms.add_term(e, scalar::int(d as i64));
    }
    GradedSeries::Truncated { terms: terms.truncate(&window), window }
}

/// Graded dimension of the cyclotomic quotient `1_j R^N 1_i`, computed as the
/// homology of `(1_j R 1_i, d_N)` on all slices with `q' ≤ truncation`
/// (every `λ_r`-degree there is at most `2|ν|`).
pub fn cyclotomic_gdim(
    engine: &mut Engine,
    parab: &ParabolicDatum,
    i: &[Label],
    j: &[Label],
    truncation: i64,
    limit: u64,
) -> Result<GradedSeries> {
    let datum = engine.datum;
    let mut dims = BTreeMap::new();
    for s in chain_slices(datum, parab, i, j, truncation, limit)? {
        for (h, d) in slice_homology(engine, parab, &s)? {
            dims.insert(CollapsedDegree { q: s.q, lam_r: s.lam_r.clone(), h }, d);
        }
    }
    let window = Window { q_max: truncation as i32, lam_bound: 2 * i.len() as i32 };
    Ok(assemble(datum, parab, &dims, window))
}

/// Homology of `R(ν)` under `d_N` on all slices with `q' ≤ bound`, split by
/// the number of floating dots labelled in `I_f` (those labelled in `I_r`
/// survive into the cyclotomic quotient).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalityReport {
    pub acyclic: bool,
    pub slices: usize,
    pub h0: usize,
    /// Total homology with at least one `I_f` floating dot.
    pub higher: usize,
}

/// Homological degree counting only floating dots labelled in `I_f`: each
/// floating dot adds 2 to the `λ`-degree of its label.
pub fn finite_h(c: &CollapsedDegree) -> i64 {
    c.h - c.lam_r.iter().sum::<i64>() / 2
}

impl FormalityReport {
    /// Concentrated in degree 0, and zero when the acyclicity criterion fires.
    pub fn holds(&self) -> bool {
        self.higher == 0 && (!self.acyclic || self.h0 == 0)
    }
}

pub fn formality(engine: &mut Engine, parab: &ParabolicDatum, nu: &[usize], bound: i64, limit: u64) -> Result<FormalityReport> {
    let datum = engine.datum;
    let mut rep = FormalityReport { acyclic: parab.acyclic(datum, nu), slices: 0, h0: 0, higher: 0 };
    let seqs = seqs_of(datum, nu);
    for i in &seqs {
        for j in &seqs {
            for s in chain_slices(datum, parab, i, j, bound, limit)? {
                rep.slices += 1;
                for (h, d) in slice_homology(engine, parab, &s)? {
                    if finite_h(&CollapsedDegree { q: s.q, lam_r: s.lam_r.clone(), h }) == 0 {
                        rep.h0 += d;
                    } else {
                        rep.higher += d;
                    }
                }
            }
        }
    }
    Ok(rep)
}

/// Substitutes `λ_j = q^{d_j n_j}` for `j ∈ I_f` in an exact series.
pub fn specialize_series(datum: &CartanDatum, parab: &ParabolicDatum, g: &GradedSeries) -> GradedSeries {
    let sp = |p: &Laurent| crate::qside::specialize(datum, parab, p);
    match g {
        GradedSeries::Exact { num, den } => GradedSeries::Exact { num: sp(num), den: sp(den) },
        GradedSeries::Truncated { terms, window } => GradedSeries::Truncated { terms: sp(terms), window: *window },
    }
}

/// Free generators of `1_{(m-1,·)} R 1_{jp}` as a left `R(m-1)`-module whose
/// moved strand has label `i`: for each `a` with `jp_a = i`, the words
/// `τ_{m-1}⋯τ_a` and `τ_{m-1}⋯τ_a θ_a` (times `x_a^ℓ`, `ℓ ≥ 0`, left to
/// the caller). Returns the remaining sequence and the degree at `ℓ = 0`.
pub fn free_generators(datum: &CartanDatum, jp: &[Label], i: Label) -> Result<Vec<(Vec<Label>, TriDegree)>> {
    let m = jp.len();
    let mut out = Vec::new();
    for a in 1..=m {
        if jp[a - 1] != i {
            continue;
        }
        let mut rest = jp.to_vec();
        rest.remove(a - 1);
        let climb: Vec<Generator> = (a..m).map(Generator::Cross).collect();
        for l in [-1, 0] {
            let mut w = diagram::tightened_theta(jp, a, l)?;
            w.gens.extend_from_slice(&climb);
            out.push((rest.clone(), diagram::degree(datum, &w)?));
        }
    }
    Ok(out)
}

/// Graded dimension of `1_top R 1_{(m-1,left)} ⊗_{m-1} 1_{(m-1,moved)} R 1_{jp}`
/// from the free decomposition of the right factor.
pub fn tensor_gdim(datum: &CartanDatum, top: &[Label], jp: &[Label], moved: Label, left: Label) -> Result<GradedSeries> {
    let n = datum.rank();
    let geo = GradedSeries::Exact {
        num: Laurent::one(n),
        den: crate::series::one_minus_q(n, datum.bilinear(moved, moved) as i32),
    };
    let mut total = GradedSeries::polynomial(Laurent::zero(n));
    for (mut rest, deg) in free_generators(datum, jp, moved)? {
        rest.push(left);
        let g = graded_dimension(datum, &rest, top, false)?;
        let term = g.scale_poly(&Laurent::monomial(tri_to_exp(&deg), scalar::one()));
        total = exact_add(&total, &term.mul(&geo).expect("exact"));
    }
    Ok(total)
}

fn exact_add(a: &GradedSeries, b: &GradedSeries) -> GradedSeries {
    a.add(b).expect("exact series")
}

fn mono(n: usize, q: i32, lam: Option<(Label, i32)>, h: i32) -> Laurent {
    let mut e = Exp::zero(n);
    e.q = q;
    e.h = h;
    if let Some((l, k)) = lam {
        e.lam[l] = k;
    }
    Laurent::monomial(e, scalar::one())
}

/// One block `(bottom, top)` of a dimension identity.
#[derive(Clone, Debug)]
pub struct IdentityBlock {
    pub bottom: Vec<Label>,
    pub top: Vec<Label>,
    pub lhs: GradedSeries,
    pub rhs: GradedSeries,
    pub holds: bool,
}

fn seqs_of(datum: &CartanDatum, nu: &[usize]) -> Vec<Vec<Label>> {
    let m: usize = nu.iter().sum();
    sequences(datum.rank(), m).into_iter().filter(|s| datum.weight_of(s) == nu).collect()
}

fn appended(s: &[Label], l: Label) -> Vec<Label> {
    let mut v = s.to_vec();
    v.push(l);
    v
}

/// The short exact sequence of bimodules for `1_{(ν,i)} R(m+1) 1_{(ν,i)}`,
/// as an identity of unsigned graded dimensions (with `h`), block by block:
/// `gdim 1_{ji} R 1_{j'i} = q_i^{-2} gdim(tensor term)
///   + gdim(1_j R 1_{j'}) (1 + λ_i² q_i^{-2α_i^∨(ν)} h) / (1 - q_i²)`.
pub fn ses_blocks(datum: &CartanDatum, nu: &[usize], i: Label) -> Result<Vec<IdentityBlock>> {
    let n = datum.rank();
    let di = datum.d[i] as i32;
    let mut out = Vec::new();
    let seqs = seqs_of(datum, nu);
    let tail = &mono(n, 0, None, 0) + &mono(n, -2 * di * datum.coroot(i, nu) as i32, Some((i, 2)), 1);
    let xi = GradedSeries::Exact { num: tail, den: crate::series::one_minus_q(n, 2 * di) };
    for jp in &seqs {
        for j in &seqs {
            let lhs = graded_dimension(datum, &appended(jp, i), &appended(j, i), false)?;
            let t = tensor_gdim(datum, j, jp, i, i)?.scale_poly(&mono(n, -2 * di, None, 0));
            let r = graded_dimension(datum, jp, j, false)?.mul(&xi).expect("exact");
            let rhs = exact_add(&t, &r);
            let holds = lhs.exact_eq(&rhs) == Some(true);
            out.push(IdentityBlock { bottom: jp.clone(), top: j.clone(), lhs, rhs, holds });
        }
    }
    Ok(out)
}

/// The isomorphism for `i ≠ j`: `gdim 1_{(k',j)} R 1_{(k,i)}` equals
/// `q^{-(α_i|α_j)}` times the tensor term through `1_{(m-1,i)}` and
/// `1_{(m-1,j)}`, for `k ∈ Seq(ν)` and `k' ∈ Seq(ν + α_i - α_j)`.
pub fn ij_blocks(datum: &CartanDatum, nu: &[usize], i: Label, j: Label) -> Result<Vec<IdentityBlock>> {
    let n = datum.rank();
    let mut out = Vec::new();
    if i == j || nu[j] == 0 {
        return Ok(out);
    }
    let mut nu2 = nu.to_vec();
    nu2[j] -= 1;
    nu2[i] += 1;
    let shift = mono(n, -datum.bilinear(i, j) as i32, None, 0);
    for k in &seqs_of(datum, nu) {
        for kp in &seqs_of(datum, &nu2) {
            let lhs = graded_dimension(datum, &appended(k, i), &appended(kp, j), false)?;
            let rhs = tensor_gdim(datum, kp, k, j, i)?.scale_poly(&shift);
            let holds = lhs.exact_eq(&rhs) == Some(true);
            out.push(IdentityBlock { bottom: appended(k, i), top: appended(kp, j), lhs, rhs, holds });
        }
    }
    Ok(out)
}

/// Extra power of `q_i` in the shift of `E_i`. With the shift
/// `λ_i^{-1} q_i^{α_i^∨(ν)}` alone, `E_i F_i - F_i E_i` comes out as
/// `q_i^{-1} [n_i - α_i^∨(ν)]`; the defect term `⊕_ℓ q_i^{1+2ℓ}(…)` needs the
/// additional `q_i`.
pub const E_SHIFT: i64 = 1;

/// The commutator identity on cyclotomic quotients for `i ∈ I_f`, block by
/// block over `(j', j) ∈ Seq(ν)²`, as signed series in `q'` up to `truncation`:
/// `gdim E_i F_i 1_ν - gdim F_i E_i 1_ν = [n_i - α_i^∨(ν)]_{q_i} gdim R^N(ν)`.
///
/// `E_i F_i 1_ν` and `R^N(ν)` come from homology; `F_i E_i 1_ν` is the Euler
/// characteristic of the free dg tensor product, specialized at
/// `λ_j = q^{d_j n_j}`. The functor `E_i` on weight `ν` is shifted by
/// `λ_i^{-1} q_i^{extra + α_i^∨(ν)}`; see [`E_SHIFT`].
pub fn commutator_blocks(
    engine: &mut Engine,
    parab: &ParabolicDatum,
    nu: &[usize],
    i: Label,
    truncation: i64,
    extra: i64,
    limit: u64,
) -> Result<Vec<IdentityBlock>> {
    let datum = engine.datum;
    let n = datum.rank();
    let ni = parab.n_of(i).ok_or_else(|| Error::Invalid(format!("label {i} is not in I_f")))? as i64;
    let di = datum.d[i];
    let window = Window { q_max: truncation as i32, lam_bound: 2 * (nu.iter().sum::<usize>() as i32 + 1) };
    // λ_i^{-1} q_i^{extra + α_i^∨(μ)} with λ_i = q_i^{n_i}
    let e_shift = |mu: &[usize]| -> i32 { (di * (extra + datum.coroot(i, mu) - ni)) as i32 };
    let margin = (di * (2 * nu.iter().sum::<usize>() as i64 + ni + 4)).abs();
    let wide = truncation + margin;
    let mut out = Vec::new();
    let seqs = seqs_of(datum, nu);
    let mut lower = nu.to_vec();
    let has_lower = nu[i] > 0;
    if has_lower {
        lower[i] -= 1;
    }
    let defect = quantum_integer(ni - datum.coroot(i, nu), di as i32, n);
    for jp in &seqs {
        for j in &seqs {
            let ef = cyclotomic_gdim(engine, parab, &appended(jp, i), &appended(j, i), wide, limit)?
                .signed()
                .expand(&Window { q_max: wide as i32, lam_bound: window.lam_bound })?;
            let ef = ef.shift(&q_only(n, e_shift(nu))).truncate(&window);
            let fe = if has_lower {
                let t = tensor_gdim(datum, j, jp, i, i)?.signed();
                let t = specialize_series(datum, parab, &t).expand(&window)?;
                t.shift(&q_only(n, e_shift(&lower))).truncate(&window)
            } else {
                Laurent::zero(n)
            };
            let base = cyclotomic_gdim(engine, parab, jp, j, wide, limit)?
                .signed()
                .expand(&Window { q_max: wide as i32, lam_bound: window.lam_bound })?;
            let lhs = (&ef - &fe).truncate(&window);
            let rhs = (&defect * &base).truncate(&window);
            let holds = lhs == rhs;
            out.push(IdentityBlock {
                bottom: jp.clone(),
                top: j.clone(),
                lhs: GradedSeries::Truncated { terms: lhs, window },
                rhs: GradedSeries::Truncated { terms: rhs, window },
                holds,
            });
        }
    }
    Ok(out)
}

fn q_only(n: usize, k: i32) -> Exp {
    let mut e = Exp::zero(n);
    e.q = k;
    e
}

/// Complete homogeneous polynomial `h_d` in the given variables.
fn complete_homogeneous(vars: &[usize], d: i64) -> Poly {
    if d < 0 {
        return Poly::zero();
    }
    fn rec(vars: &[usize], d: u16, acc: Mono, out: &mut Poly) {
        match vars.split_first() {
            None => {
                if d == 0 {
                    out.add_term(acc, scalar::one());
                }
            }
            Some((&v, rest)) => {
                for e in 0..=d {
                    let mut m = acc;
                    m.x[v] += e;
                    rec(rest, d - e, m, out);
                }
            }
        }
    }
    let mut out = Poly::zero();
    rec(vars, d as u16, Mono::ONE, &mut out);
    out
}

/// A polynomial in the dot variables `x_{ℓ,i}` as a combination of dot words
/// on the identity of `bottom`.
fn poly_to_words(layout: &Layout, bottom: &[Label], p: &Poly) -> Result<Vec<(Scalar, DiagramWord)>> {
    let mut out = Vec::new();
    for (m, c) in &p.terms {
        if m.ext != 0 {
            return Err(Error::Internal("exterior part in a dot polynomial".into()));
        }
        let mut gens = Vec::new();
        for v in 0..layout.nvars {
            let (label, l) = layout.label_of(v);
            let pos = bottom
                .iter()
                .enumerate()
                .filter(|(_, b)| **b == label)
                .nth(l - 1)
                .map(|(k, _)| k + 1)
                .ok_or_else(|| Error::Internal("variable outside the strands".into()))?;
            gens.extend(core::iter::repeat_n(Generator::Dot(pos), m.x[v] as usize));
        }
        out.push((c.clone(), DiagramWord { bottom: bottom.to_vec(), gens }));
    }
    Ok(out)
}

/// `d_N` of the floating dot `ω_j^a` in the far-right region, computed two
/// ways: by expanding it into tight floating dots and applying the Leibniz
/// rule, and by the closed formula
/// `(-1)^{n_j-k_j+1+a} Σ_r h_{n_j+a-k_j+1+r}(x_{•,j}) ε_r^j(x_K)`.
pub fn far_right_two_routes(
    engine: &mut Engine,
    parab: &ParabolicDatum,
    bottom: &[Label],
    j: Label,
    a: u32,
) -> Result<(AlgebraElement, AlgebraElement)> {
    let datum = engine.datum;
    let m = bottom.len();
    let nj = parab.n_of(j).ok_or_else(|| Error::Invalid(format!("label {j} is not in I_f")))? as i64;
    let w = DiagramWord { bottom: bottom.to_vec(), gens: vec![Generator::Float { label: j, sup: a, region: m }] };
    let route1 = differential_word(engine, parab, &w)?;

    let k = datum.weight_of(bottom);
    let kj = k[j] as i64;
    let mut rest = k.clone();
    rest[j] = 0;
    let layout = Layout::new(&k)?;
    let orientation = Orientation::default_for(datum);
    let rep = Rep::new(datum, engine.scalars, &orientation);
    let vars: Vec<usize> = (1..=k[j]).map(|l| layout.var(j, l)).collect();
    let mut p = Poly::zero();
    if kj > 0 {
        for r in 0..=(-datum.coroot(j, &rest)).max(0) {
            let hpoly = complete_homogeneous(&vars, nj + a as i64 - kj + 1 + r);
            let eps = rep.epsilon(&layout, j, r as usize, &k);
            p.add_assign(&hpoly.mul(&eps));
        }
    }
    let p = p.scale(&scalar::sign(nj - kj + 1 + a as i64));
    let words = poly_to_words(&layout, bottom, &p)?;
    let route2 = if words.is_empty() {
        AlgebraElement::zero(bottom.to_vec(), bottom.to_vec())
    } else {
        engine.normal_form_combination(&words)?
    };
    Ok((route1, route2))
}
