//! The tightened basis and the rewriting of diagram words into it.
//!
//! A basis element is a permutation `w` with its left-adjusted reduced
//! expression, a choice of tightened floating dot per strand, and dots at the
//! top. Its crossings and tight floating dots form a *skeleton*: a word in
//! `ω` and the `τ_a`, which behave like the generators of a type B Coxeter
//! group (`ω τ_b = τ_b ω` for `b ≥ 2`, `τ_1 ω τ_1 ω = -ω τ_1 ω τ_1`, braid
//! relations up to lower terms, squares are lower terms). Two skeleton words
//! for the same signed permutation are related by braid moves; a word that is
//! not reduced is braid-equivalent to one with a repeated letter. This drives
//! the rewriting: every correction has fewer crossings, so the recursion
//! terminates.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::cartan::{CartanDatum, ScalarChoice};
use crate::diagram::{self, DiagramWord, Generator, TriDegree};
use crate::error::{Error, Result};
use crate::linalg::{Echelon, SparseRow};
use crate::polyrep::{oracle_vectors, Layout, Mono, Rep};
use crate::relations;
use crate::scalar::{self, Scalar};
use crate::series::{Exp, GradedSeries, Laurent};
use crate::Label;

/// `w[k]` is the top position of the strand starting at bottom position `k`
/// (both 0-based).
pub type Perm = Vec<usize>;

pub fn is_permutation(w: &[usize]) -> bool {
    let mut seen = vec![false; w.len()];
    for &x in w {
        if x >= w.len() || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

pub fn inversions(w: &[usize]) -> usize {
    let mut n = 0;
    for a in 0..w.len() {
        for b in a + 1..w.len() {
            if w[a] > w[b] {
                n += 1;
            }
        }
    }
    n
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeftAdjustedData {
    pub w: Perm,
    /// Letters `a` of the crossings `σ_a` (1-based), bottom first.
    pub word: Vec<usize>,
    /// Per strand: the first time (number of letters read) at which it sits
    /// at its leftmost position.
    pub t: Vec<usize>,
    /// Per strand: its leftmost position (1-based).
    pub inlmin: Vec<usize>,
    /// Strands (0-based bottom positions) in the order they attain their
    /// leftmost position; ties go to the smaller strand.
    pub s: Vec<usize>,
    /// The blocks `w^1, …, w^{m+1}` of the word, bottom first.
    pub partition: Vec<Vec<usize>>,
}

/// Left-adjusted reduced expression from the recursive coset decomposition
/// `S_n = ⊔_a S_{n-1} σ_{n-1}⋯σ_a`.
pub fn left_adjusted(w: &[usize]) -> Result<LeftAdjustedData> {
    if !is_permutation(w) {
        return Err(Error::Malformed(alloc::format!("{w:?} is not a permutation")));
    }
    let m = w.len();
    // at[p] = strand at position p
    let mut at: Vec<usize> = (0..m).collect();
    let mut word = Vec::new();
    for n in (1..m).rev() {
        let strand = (0..m).find(|&k| w[k] == n).unwrap();
        let a = at.iter().position(|&k| k == strand).unwrap();
        for p in a..n {
            at.swap(p, p + 1);
            word.push(p + 1);
        }
    }
    let mut pos: Vec<usize> = (0..m).collect();
    let mut inlmin: Vec<usize> = (0..m).map(|k| k + 1).collect();
    let mut t = vec![0; m];
    for (step, &a) in word.iter().enumerate() {
        let (l, r) = (
            (0..m).find(|&k| pos[k] == a - 1).unwrap(),
            (0..m).find(|&k| pos[k] == a).unwrap(),
        );
        pos[l] = a;
        pos[r] = a - 1;
        if a < inlmin[r] {
            inlmin[r] = a;
            t[r] = step + 1;
        }
    }
    let mut s: Vec<usize> = (0..m).collect();
    s.sort_by_key(|&k| (t[k], k));
    let mut partition = Vec::with_capacity(m + 1);
    let mut prev = 0;
    for &k in &s {
        partition.push(word[prev..t[k]].to_vec());
        prev = t[k];
    }
    partition.push(word[prev..].to_vec());
    Ok(LeftAdjustedData { w: w.to_vec(), word, t, inlmin, s, partition })
}

/// Skeleton letter: `0` is a tight floating dot, `a ≥ 1` is `τ_a`.
pub type Letter = u8;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Skeleton {
    pub w: Perm,
    /// Tightened floating dot on the strand starting at bottom position `k`.
    pub floats: Vec<bool>,
}

impl Skeleton {
    pub fn identity(m: usize) -> Self {
        Skeleton { w: (0..m).collect(), floats: vec![false; m] }
    }

    pub fn m(&self) -> usize {
        self.w.len()
    }

    /// The canonical word: the left-adjusted expression with `θ_{min}`
    /// inserted on each floated strand when it first reaches its leftmost
    /// position, in attainment order.
    pub fn letters(&self) -> Vec<Letter> {
        let la = left_adjusted(&self.w).expect("skeleton holds a permutation");
        let mut out = Vec::new();
        let mut idx = 0;
        for &k in &la.s {
            while idx < la.t[k] {
                out.push(la.word[idx] as Letter);
                idx += 1;
            }
            if self.floats[k] {
                let p = la.inlmin[k];
                out.extend((1..p).rev().map(|b| b as Letter));
                out.push(0);
                out.extend((1..p).map(|b| b as Letter));
            }
        }
        out.extend(la.word[idx..].iter().map(|&a| a as Letter));
        out
    }

    pub fn crossings(&self) -> usize {
        self.letters().iter().filter(|&&l| l != 0).count()
    }

    pub fn top(&self, bottom: &[Label]) -> Vec<Label> {
        apply_perm(&self.w, bottom)
    }
}

fn apply_perm(w: &[usize], bottom: &[Label]) -> Vec<Label> {
    let mut top = bottom.to_vec();
    for (k, &p) in w.iter().enumerate() {
        top[p] = bottom[k];
    }
    top
}

fn canonical_len(w: &[usize], floats: &[bool]) -> Result<usize> {
    let la = left_adjusted(w)?;
    Ok(la.word.len() + (0..w.len()).filter(|&k| floats[k]).map(|k| 2 * la.inlmin[k] - 1).sum::<usize>())
}

/// Signed permutation represented by a skeleton word, with the number of
/// floating dots met by each strand.
fn group_element(m: usize, letters: &[Letter]) -> (Perm, Vec<usize>) {
    let mut at: Vec<usize> = (0..m).collect();
    let mut flips = vec![0; m];
    for &l in letters {
        if l == 0 {
            flips[at[0]] += 1;
        } else {
            at.swap(l as usize - 1, l as usize);
        }
    }
    let mut w = vec![0; m];
    for (p, &k) in at.iter().enumerate() {
        w[k] = p;
    }
    (w, flips)
}

/// The generators of a skeleton word on `bottom`.
pub fn letters_to_gens(bottom: &[Label], letters: &[Letter]) -> Vec<Generator> {
    let mut cur = bottom.to_vec();
    letters
        .iter()
        .map(|&l| {
            if l == 0 {
                Generator::Float { label: cur[0], sup: 0, region: 1 }
            } else {
                cur.swap(l as usize - 1, l as usize);
                Generator::Cross(l as usize)
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Key {
    pub skeleton: Skeleton,
    /// Dots at the top, per top position.
    pub dots: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisElement {
    pub bottom: Vec<Label>,
    pub key: Key,
}

impl BasisElement {
    pub fn top(&self) -> Vec<Label> {
        self.key.skeleton.top(&self.bottom)
    }

    pub fn word(&self) -> DiagramWord {
        DiagramWord { bottom: self.bottom.clone(), gens: key_gens(&self.bottom, &self.key) }
    }

    pub fn degree(&self, datum: &CartanDatum) -> TriDegree {
        diagram::degree(datum, &self.word()).expect("basis words are well formed")
    }
}

pub fn key_gens(bottom: &[Label], key: &Key) -> Vec<Generator> {
    let mut gens = letters_to_gens(bottom, &key.skeleton.letters());
    for (p, &a) in key.dots.iter().enumerate() {
        gens.extend(core::iter::repeat_n(Generator::Dot(p + 1), a as usize));
    }
    gens
}

/// An element of `1_top R 1_bottom` in the tightened basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    pub bottom: Vec<Label>,
    pub top: Vec<Label>,
    pub terms: BTreeMap<Key, Scalar>,
}

impl AlgebraElement {
    pub fn zero(bottom: Vec<Label>, top: Vec<Label>) -> Self {
        AlgebraElement { bottom, top, terms: BTreeMap::new() }
    }

    pub fn identity(bottom: Vec<Label>) -> Self {
        let m = bottom.len();
        let mut e = AlgebraElement::zero(bottom.clone(), bottom);
        e.terms.insert(Key { skeleton: Skeleton::identity(m), dots: vec![0; m] }, scalar::one());
        e
    }

    pub fn basis(b: &BasisElement) -> Self {
        let mut e = AlgebraElement::zero(b.bottom.clone(), b.top());
        e.terms.insert(b.key.clone(), scalar::one());
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, key: Key, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(key.clone()).or_insert_with(Scalar::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add_scaled(&mut self, o: &AlgebraElement, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (k, v) in &o.terms {
            self.add_term(k.clone(), v * c);
        }
    }

    pub fn scale(&self, c: &Scalar) -> AlgebraElement {
        let mut out = AlgebraElement::zero(self.bottom.clone(), self.top.clone());
        out.add_scaled(self, c);
        out
    }

    pub fn sub(&self, o: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        out.add_scaled(o, &-scalar::one());
        out
    }

    pub fn basis_elements(&self) -> impl Iterator<Item = (BasisElement, &Scalar)> + '_ {
        self.terms.iter().map(move |(k, c)| (BasisElement { bottom: self.bottom.clone(), key: k.clone() }, c))
    }

    pub fn words(&self) -> Vec<(Scalar, DiagramWord)> {
        self.terms
            .iter()
            .map(|(k, c)| (c.clone(), DiagramWord { bottom: self.bottom.clone(), gens: key_gens(&self.bottom, k) }))
            .collect()
    }

    /// Splits by homological degree (number of floating dots).
    pub fn h_components(&self) -> BTreeMap<usize, AlgebraElement> {
        let mut out: BTreeMap<usize, AlgebraElement> = BTreeMap::new();
        for (k, c) in &self.terms {
            let h = k.skeleton.floats.iter().filter(|f| **f).count();
            out.entry(h)
                .or_insert_with(|| AlgebraElement::zero(self.bottom.clone(), self.top.clone()))
                .add_term(k.clone(), c.clone());
        }
        out
    }
}

/// `∂_a x^A` on the dots, as a list of exponent vectors with coefficients.
fn demazure(dots: &[u32], a: usize) -> Vec<(Vec<u32>, Scalar)> {
    let (p, q) = (dots[a - 1], dots[a]);
    let mut out = Vec::new();
    let (hi, lo, c) = if p > q { (p, q, scalar::one()) } else { (q, p, -scalar::one()) };
    for k in 0..hi.saturating_sub(lo) {
        let mut d = dots.to_vec();
        d[a - 1] = hi - 1 - k;
        d[a] = lo + k;
        out.push((d, c.clone()));
    }
    out
}

#[derive(Clone, Copy, Debug)]
enum Move {
    Swap,
    /// `x y x → y x y` at the position.
    BraidA(usize),
    /// `τ_1 ω τ_1 ω ↔ ω τ_1 ω τ_1`, a sign change.
    BraidB,
}

fn neighbours(w: &[Letter]) -> Vec<(Move, Vec<Letter>)> {
    let mut out = Vec::new();
    let n = w.len();
    for k in 0..n.saturating_sub(1) {
        let (x, y) = (w[k], w[k + 1]);
        let far = if x == 0 || y == 0 { x.max(y) >= 2 } else { x.abs_diff(y) >= 2 };
        if far {
            let mut v = w.to_vec();
            v.swap(k, k + 1);
            out.push((Move::Swap, v));
        }
    }
    for k in 0..n.saturating_sub(2) {
        let (x, y, z) = (w[k], w[k + 1], w[k + 2]);
        if x == z && x != 0 && y != 0 && x.abs_diff(y) == 1 {
            let mut v = w.to_vec();
            v[k] = y;
            v[k + 1] = x;
            v[k + 2] = y;
            out.push((Move::BraidA(k), v));
        }
    }
    for k in 0..n.saturating_sub(3) {
        let s = &w[k..k + 4];
        if s == [1, 0, 1, 0] || s == [0, 1, 0, 1] {
            let mut v = w.to_vec();
            for (o, x) in v[k..k + 4].iter_mut().enumerate() {
                *x = if (o % 2 == 0) == (s[0] == 1) { 0 } else { 1 };
            }
            out.push((Move::BraidB, v));
        }
    }
    out
}

fn labels_before(bottom: &[Label], letters: &[Letter], k: usize) -> Vec<Label> {
    let mut cur = bottom.to_vec();
    for &l in &letters[..k] {
        if l != 0 {
            cur.swap(l as usize - 1, l as usize);
        }
    }
    cur
}

pub const DEFAULT_STEP_BUDGET: u64 = 5_000_000;

/// Rewriting engine for a fixed Cartan datum and scalar choice. Holds the
/// memo tables for multiplying skeletons by a generator on top.
pub struct Engine<'a> {
    pub datum: &'a CartanDatum,
    pub scalars: &'a ScalarChoice,
    pub step_budget: u64,
    steps: u64,
    cache: BTreeMap<(Vec<Label>, Skeleton, Letter), AlgebraElement>,
}

impl<'a> Engine<'a> {
    pub fn new(datum: &'a CartanDatum, scalars: &'a ScalarChoice) -> Self {
        Engine { datum, scalars, step_budget: DEFAULT_STEP_BUDGET, steps: 0, cache: BTreeMap::new() }
    }

    fn tick(&mut self, n: u64) -> Result<()> {
        self.steps += n;
        if self.steps > self.step_budget {
            return Err(Error::StepBudget { budget: self.step_budget });
        }
        Ok(())
    }

    pub fn normal_form_word(&mut self, w: &DiagramWord) -> Result<AlgebraElement> {
        w.validate()?;
        self.check_labels(&w.bottom)?;
        self.steps = 0;
        self.apply_gens(&w.gens, AlgebraElement::identity(w.bottom.clone()))
    }

    /// Re-normalizes an element by rewriting each of its basis words.
    pub fn normal_form(&mut self, e: &AlgebraElement) -> Result<AlgebraElement> {
        let mut out = AlgebraElement::zero(e.bottom.clone(), e.top.clone());
        for (c, w) in e.words() {
            let n = self.normal_form_word(&w)?;
            out.add_scaled(&n, &c);
        }
        Ok(out)
    }

    pub fn normal_form_combination(&mut self, words: &[(Scalar, DiagramWord)]) -> Result<AlgebraElement> {
        let first = words.first().ok_or_else(|| Error::Invalid("empty combination".into()))?;
        let mut out = AlgebraElement::zero(first.1.bottom.clone(), first.1.top());
        for (c, w) in words {
            if w.bottom != out.bottom || w.top() != out.top {
                return Err(Error::Invalid("words in a combination must share idempotents".into()));
            }
            let n = self.normal_form_word(w)?;
            out.add_scaled(&n, c);
        }
        Ok(out)
    }

    /// `a · b` with `a` stacked on top of `b`; zero when the idempotents do
    /// not match.
    pub fn multiply(&mut self, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
        if a.bottom != b.top {
            return Ok(AlgebraElement::zero(b.bottom.clone(), a.top.clone()));
        }
        self.steps = 0;
        let mut out = AlgebraElement::zero(b.bottom.clone(), a.top.clone());
        for (k, c) in &a.terms {
            let gens = key_gens(&a.bottom, k);
            let p = self.apply_gens(&gens, b.clone())?;
            out.add_scaled(&p, c);
        }
        Ok(out)
    }

    /// The anti-involution reflecting diagrams top to bottom.
    pub fn mirror(&mut self, e: &AlgebraElement) -> Result<AlgebraElement> {
        let mut out = AlgebraElement::zero(e.top.clone(), e.bottom.clone());
        for (c, w) in e.words() {
            let n = self.normal_form_word(&w.mirror())?;
            out.add_scaled(&n, &c);
        }
        Ok(out)
    }

    fn check_labels(&self, bottom: &[Label]) -> Result<()> {
        if let Some(l) = bottom.iter().find(|l| **l >= self.datum.rank()) {
            return Err(Error::UnknownLabel(alloc::format!("{l}")));
        }
        Ok(())
    }

    fn apply_gens(&mut self, gens: &[Generator], mut e: AlgebraElement) -> Result<AlgebraElement> {
        for g in gens {
            if e.is_zero() {
                let mut top = e.top.clone();
                if let Generator::Cross(a) = g {
                    top.swap(a - 1, *a);
                }
                e.top = top;
                continue;
            }
            e = self.apply_gen(g, &e)?;
        }
        Ok(e)
    }

    /// `g · e`, with `g` placed on top.
    fn apply_gen(&mut self, g: &Generator, e: &AlgebraElement) -> Result<AlgebraElement> {
        let m = e.top.len();
        let ok = match *g {
            Generator::Dot(a) => a >= 1 && a <= m,
            Generator::Cross(a) => a >= 1 && a < m,
            Generator::Float { region, label, .. } => region <= m && label < self.datum.rank(),
        };
        if !ok {
            return Err(Error::Malformed(alloc::format!("{g:?} out of range for {m} strands")));
        }
        self.tick(1)?;
        match *g {
            Generator::Dot(a) => {
                let mut out = AlgebraElement::zero(e.bottom.clone(), e.top.clone());
                for (k, c) in &e.terms {
                    let mut k = k.clone();
                    k.dots[a - 1] += 1;
                    out.add_term(k, c.clone());
                }
                Ok(out)
            }
            Generator::Cross(a) => self.apply_tau(a, e),
            Generator::Float { label, sup, region } => {
                if region == 1 && sup == 0 && e.top[0] == label {
                    return self.apply_omega(e);
                }
                let mut out = AlgebraElement::zero(e.bottom.clone(), e.top.clone());
                for (c, gens) in self.expand_float(&e.top, label, sup, region) {
                    let p = self.apply_gens(&gens, e.clone())?;
                    out.add_scaled(&p, &c);
                }
                Ok(out)
            }
        }
    }

    /// One step of rewriting a general floating dot `ω_j^c` in region `p`
    /// (strand labels `labels`) in terms of floating dots further left or with
    /// smaller superscript.
    fn expand_float(&self, labels: &[Label], j: Label, c: u32, p: usize) -> Vec<(Scalar, Vec<Generator>)> {
        let fl = |c: u32, p: usize| Generator::Float { label: j, sup: c, region: p };
        let dots = relations::dots;
        let mut out = Vec::new();
        if p == 0 {
            return out;
        }
        let i = labels[p - 1];
        if i != j {
            for (t, v, s) in self.scalars.q_terms(self.datum, i, j) {
                let mut g = dots(p, t);
                g.push(fl(c + v, p - 1));
                out.push((scalar::sign(v as i64) * s, g));
            }
        } else if c > 0 {
            out.push((scalar::one(), vec![fl(c - 1, p - 1)]));
            out.push((-scalar::one(), vec![Generator::Dot(p), fl(c - 1, p)]));
        } else if p >= 2 && labels[p - 2] == j {
            let a = p - 1;
            let r2 = scalar::one() / &(&self.scalars.r[j] * &self.scalars.r[j]);
            let t = Generator::Cross(a);
            out.push((r2.clone(), vec![t, fl(0, a), t, Generator::Dot(a + 1)]));
            out.push((-r2, vec![Generator::Dot(a), t, fl(0, a), t]));
        } else if p >= 2 {
            let a = p - 1;
            let i = labels[a - 1];
            let t = Generator::Cross(a);
            out.push((scalar::one(), vec![t, fl(0, a), t]));
            for (tt, v, s) in self.scalars.q_terms(self.datum, i, j) {
                for u in 0..v {
                    let l = v - 1 - u;
                    let mut g = dots(a, tt);
                    g.extend(dots(a + 1, l));
                    g.push(fl(u, a - 1));
                    out.push((-(scalar::sign(u as i64) * &s), g));
                }
            }
        }
        // p == 1, label match, c == 0 is the tight case handled by the caller.
        out
    }

    fn apply_omega(&mut self, e: &AlgebraElement) -> Result<AlgebraElement> {
        let mut out = AlgebraElement::zero(e.bottom.clone(), e.top.clone());
        for (k, c) in &e.terms {
            let prod = self.skeleton_mul(&e.bottom, &k.skeleton, 0)?;
            for (k2, c2) in &prod.terms {
                let dots = k.dots.iter().zip(&k2.dots).map(|(a, b)| a + b).collect();
                out.add_term(Key { skeleton: k2.skeleton.clone(), dots }, c * c2);
            }
        }
        Ok(out)
    }

    fn apply_tau(&mut self, a: usize, e: &AlgebraElement) -> Result<AlgebraElement> {
        let (i, j) = (e.top[a - 1], e.top[a]);
        let mut top = e.top.clone();
        top.swap(a - 1, a);
        let mut out = AlgebraElement::zero(e.bottom.clone(), top);
        for (k, c) in &e.terms {
            let mut swapped = k.dots.clone();
            swapped.swap(a - 1, a);
            let prod = self.skeleton_mul(&e.bottom, &k.skeleton, a as Letter)?;
            for (k2, c2) in &prod.terms {
                let dots = swapped.iter().zip(&k2.dots).map(|(x, y)| x + y).collect();
                out.add_term(Key { skeleton: k2.skeleton.clone(), dots }, c * c2);
            }
            if i == j {
                let r = &self.scalars.r[i];
                for (d, c3) in demazure(&k.dots, a) {
                    out.add_term(Key { skeleton: k.skeleton.clone(), dots: d }, c * r * c3);
                }
            }
        }
        Ok(out)
    }

    /// Normal form of the canonical word of `skel` followed by `letter`.
    fn skeleton_mul(&mut self, bottom: &[Label], skel: &Skeleton, letter: Letter) -> Result<AlgebraElement> {
        let key = (bottom.to_vec(), skel.clone(), letter);
        if let Some(v) = self.cache.get(&key) {
            return Ok(v.clone());
        }
        let mut letters = skel.letters();
        letters.push(letter);
        let v = self.skeleton_nf(bottom, &letters)?;
        self.cache.insert(key, v.clone());
        Ok(v)
    }

    fn skeleton_nf(&mut self, bottom: &[Label], start: &[Letter]) -> Result<AlgebraElement> {
        let m = bottom.len();
        let (w, flips) = group_element(m, start);
        let floats: Vec<bool> = flips.iter().map(|&f| f % 2 == 1).collect();
        let reduced = flips.iter().all(|&f| f <= 1) && start.len() == canonical_len(&w, &floats)?;
        let target = if reduced { Some(Skeleton { w: w.clone(), floats: floats.clone() }.letters()) } else { None };
        let is_target = |v: &[Letter]| match &target {
            Some(t) => v == &t[..],
            None => v.windows(2).any(|p| p[0] == p[1]),
        };

        // BFS over braid moves.
        let mut nodes: Vec<(Vec<Letter>, Option<(usize, Move)>)> = vec![(start.to_vec(), None)];
        let mut seen: BTreeMap<Vec<Letter>, usize> = BTreeMap::new();
        seen.insert(start.to_vec(), 0);
        let mut queue = VecDeque::from([0usize]);
        let mut found = None;
        while let Some(n) = queue.pop_front() {
            self.tick(1)?;
            if is_target(&nodes[n].0) {
                found = Some(n);
                break;
            }
            for (mv, v) in neighbours(&nodes[n].0) {
                if !seen.contains_key(&v) {
                    seen.insert(v.clone(), nodes.len());
                    nodes.push((v, Some((n, mv))));
                    queue.push_back(nodes.len() - 1);
                }
            }
        }
        let found = found.ok_or_else(|| Error::Internal(alloc::format!("no rewriting path from {start:?}")))?;
        let mut path = Vec::new();
        let mut n = found;
        while let Some((p, mv)) = nodes[n].1 {
            path.push((p, mv));
            n = p;
        }
        path.reverse();

        let top = apply_perm(&w, bottom);
        let mut out = AlgebraElement::zero(bottom.to_vec(), top);
        let mut sign = scalar::one();
        for (p, mv) in path {
            let word = nodes[p].0.clone();
            match mv {
                Move::Swap => {}
                Move::BraidB => sign = -sign,
                Move::BraidA(k) => {
                    let h = labels_before(bottom, &word, k);
                    let (x, y) = (word[k] as usize, word[k + 1] as usize);
                    let (a, c) = if y == x + 1 { (x, scalar::one()) } else { (y, -scalar::one()) };
                    let corr = relations::r3_value(self.datum, self.scalars, h[a - 1], h[a], h[a + 1], a);
                    let gens = letters_to_gens(bottom, &word);
                    for (s, dots) in corr {
                        let mut g = gens[..k].to_vec();
                        g.extend(dots);
                        g.extend_from_slice(&gens[k + 3..]);
                        let v = self.apply_gens(&g, AlgebraElement::identity(bottom.to_vec()))?;
                        out.add_scaled(&v, &(&sign * &c * s));
                    }
                }
            }
        }
        let last = &nodes[found].0;
        if reduced {
            out.add_term(Key { skeleton: Skeleton { w, floats }, dots: vec![0; m] }, sign);
        } else {
            let k = last.windows(2).position(|p| p[0] == p[1]).unwrap();
            let l = last[k];
            if l != 0 {
                let a = l as usize;
                let h = labels_before(bottom, last, k);
                let gens = letters_to_gens(bottom, last);
                for (s, dots) in relations::r2_value(self.datum, self.scalars, h[a - 1], h[a], a) {
                    let mut g = gens[..k].to_vec();
                    g.extend(dots);
                    g.extend_from_slice(&gens[k + 2..]);
                    let v = self.apply_gens(&g, AlgebraElement::identity(bottom.to_vec()))?;
                    out.add_scaled(&v, &(&sign * s));
                }
            }
        }
        Ok(out)
    }
}

/// Permutations in `_jS_i`: `w` with `i_k = j_{w(k)}`.
pub fn permutations_between(i: &[Label], j: &[Label]) -> Vec<Perm> {
    let m = i.len();
    let mut out = Vec::new();
    if j.len() != m {
        return out;
    }
    fn rec(i: &[Label], j: &[Label], k: usize, used: &mut Vec<bool>, cur: &mut Vec<usize>, out: &mut Vec<Perm>) {
        if k == i.len() {
            out.push(cur.clone());
            return;
        }
        for p in 0..j.len() {
            if !used[p] && j[p] == i[k] {
                used[p] = true;
                cur.push(p);
                rec(i, j, k + 1, used, cur, out);
                cur.pop();
                used[p] = false;
            }
        }
    }
    rec(i, j, 0, &mut vec![false; m], &mut Vec::new(), &mut out);
    out
}

/// All skeletons from `i` to `j`.
pub fn skeletons(i: &[Label], j: &[Label]) -> Vec<Skeleton> {
    let m = i.len();
    let mut out = Vec::new();
    for w in permutations_between(i, j) {
        for mask in 0u32..(1 << m) {
            out.push(Skeleton { w: w.clone(), floats: (0..m).map(|k| mask >> k & 1 == 1).collect() });
        }
    }
    out
}

pub const DEFAULT_BASIS_LIMIT: u64 = 200_000;

/// Basis elements of `1_j R 1_i` of `q`-degree at most `bound`.
pub fn enumerate_basis(datum: &CartanDatum, i: &[Label], j: &[Label], bound: i64, limit: u64) -> Result<Vec<BasisElement>> {
    enumerate_basis_by(datum, i, j, bound, limit, |d| d.q)
}

/// Basis elements whose degree, measured by `measure`, is at most `bound`;
/// `measure` must grow by at least one unit per dot.
pub fn enumerate_basis_by(
    datum: &CartanDatum,
    i: &[Label],
    j: &[Label],
    bound: i64,
    limit: u64,
    measure: impl Fn(&TriDegree) -> i64,
) -> Result<Vec<BasisElement>> {
    if let Some(l) = i.iter().chain(j).find(|l| **l >= datum.rank()) {
        return Err(Error::UnknownLabel(alloc::format!("{l}")));
    }
    let m = i.len();
    let zero_dots = vec![0u32; m];
    let mut skels = Vec::new();
    for s in skeletons(i, j) {
        let b = BasisElement { bottom: i.to_vec(), key: Key { skeleton: s, dots: zero_dots.clone() } };
        let d = b.degree(datum);
        skels.push((b, measure(&d)));
    }
    let dot_deg: Vec<i64> = j
        .iter()
        .map(|&l| {
            let mut d = TriDegree::zero(datum.rank());
            d.q = datum.bilinear(l, l);
            measure(&d)
        })
        .collect();
    if dot_deg.iter().any(|&d| d <= 0) {
        return Err(Error::Invalid("dots must have positive degree".into()));
    }
    let count_dots = |budget: i64| -> u64 {
        // number of dot vectors of total degree ≤ budget
        if budget < 0 {
            return 0;
        }
        let b = budget as usize;
        let mut ways = vec![0u64; b + 1];
        ways[0] = 1;
        for &d in &dot_deg {
            let d = d as usize;
            for x in d..=b {
                ways[x] = ways[x].saturating_add(ways[x - d]);
            }
        }
        ways.iter().fold(0u64, |a, &x| a.saturating_add(x))
    };
    let needed = skels.iter().fold(0u64, |a, (_, d)| a.saturating_add(count_dots(bound - d)));
    if needed > limit {
        return Err(Error::Resource { limit: "basis elements", needed, allowed: limit });
    }
    let mut out = Vec::new();
    for (b, d) in skels {
        let mut dots = vec![0u32; m];
        fn rec(k: usize, left: i64, dd: &[i64], dots: &mut Vec<u32>, b: &BasisElement, out: &mut Vec<BasisElement>) {
            if k == dots.len() {
                let mut e = b.clone();
                e.key.dots = dots.clone();
                out.push(e);
                return;
            }
            let mut a = 0;
            while a as i64 * dd[k] <= left {
                dots[k] = a;
                rec(k + 1, left - a as i64 * dd[k], dd, dots, b, out);
                a += 1;
            }
            dots[k] = 0;
        }
        if bound - d >= 0 {
            rec(0, bound - d, &dot_deg, &mut dots, &b, &mut out);
        }
    }
    out.sort();
    Ok(out)
}

pub fn tri_to_exp(d: &TriDegree) -> Exp {
    Exp { lam: d.lam.iter().map(|&x| x as i32).collect(), q: d.q as i32, h: d.h as i32 }
}

/// Graded dimension of `1_j R 1_i` as an exact rational function in `q`,
/// `λ` and `h`: the skeletons give the numerator, each strand a geometric
/// series of dots. `signed` substitutes `h = -1`.
pub fn graded_dimension(datum: &CartanDatum, i: &[Label], j: &[Label], signed: bool) -> Result<GradedSeries> {
    if let Some(l) = i.iter().chain(j).find(|l| **l >= datum.rank()) {
        return Err(Error::UnknownLabel(alloc::format!("{l}")));
    }
    let n = datum.rank();
    let mut num = Laurent::zero(n);
    let m = i.len();
    for s in skeletons(i, j) {
        let b = BasisElement { bottom: i.to_vec(), key: Key { skeleton: s, dots: vec![0; m] } };
        num.add_term(tri_to_exp(&b.degree(datum)), scalar::one());
    }
    let mut den = Laurent::one(n);
    for &l in i {
        den = &den * &crate::series::one_minus_q(n, datum.bilinear(l, l) as i32);
    }
    let g = GradedSeries::Exact { num, den };
    Ok(if signed { g.signed() } else { g })
}

/// Whether an element is a scalar multiple of an identity (used by tests
/// and reports).
pub fn is_identity_multiple(e: &AlgebraElement) -> Option<Scalar> {
    if e.bottom != e.top {
        return None;
    }
    let m = e.bottom.len();
    let id = Key { skeleton: Skeleton::identity(m), dots: vec![0; m] };
    match e.terms.len() {
        0 => Some(Scalar::zero()),
        1 => e.terms.get(&id).cloned(),
        _ => None,
    }
}

/// Number of basis elements of `1_j R 1_i` with `q`-degree at most `bound`,
/// and the rank of their action on the oracle vectors of degree at most
/// `test_degree`. Equal numbers mean the operators are linearly independent.
pub fn action_rank(rep: &Rep, i: &[Label], j: &[Label], bound: i64, test_degree: u32) -> Result<(usize, usize)> {
    let basis = enumerate_basis(rep.datum, i, j, bound, DEFAULT_BASIS_LIMIT)?;
    let layout = Layout::new(&rep.datum.weight_of(i))?;
    let vectors = oracle_vectors(&layout, test_degree);
    let mut columns: BTreeMap<(usize, Mono), usize> = BTreeMap::new();
    let mut ech = Echelon::new();
    for b in &basis {
        let mut row = SparseRow::new();
        for (v, img) in rep.act_word_many(&b.word(), &vectors)?.into_iter().enumerate() {
            for (m, c) in img.terms {
                let next = columns.len();
                let col = *columns.entry((v, m)).or_insert(next);
                row.insert(col, c);
            }
        }
        ech.insert(row);
    }
    Ok((basis.len(), ech.rank()))
}
