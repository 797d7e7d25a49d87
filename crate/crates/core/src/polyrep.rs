//! The polynomial representation on `Q_ν = ⊕_i k[x_{ℓ,i}] ⊗ Λ[ω_{ℓ,i}] 1_i`.
//!
//! Variables are indexed by label rank: `x_{ℓ,i}` belongs to the `ℓ`-th strand
//! labeled `i` counted from the left. Both families share one global index,
//! ordered by `(label, ℓ)`; exterior monomials are stored as bit sets in that
//! order.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::cartan::{CartanDatum, ScalarChoice};
use crate::diagram::{DiagramWord, Generator, TriDegree};
use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};
use crate::Label;

pub const MAX_VARS: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    pub nu: Vec<usize>,
    offset: Vec<usize>,
    pub nvars: usize,
}

impl Layout {
    pub fn new(nu: &[usize]) -> Result<Self> {
        let mut offset = Vec::with_capacity(nu.len());
        let mut n = 0;
        for &k in nu {
            offset.push(n);
            n += k;
        }
        if n > MAX_VARS {
            return Err(Error::Resource { limit: "polynomial variables", needed: n as u64, allowed: MAX_VARS as u64 });
        }
        Ok(Layout { nu: nu.to_vec(), offset, nvars: n })
    }

    /// Global index of `x_{ℓ,i}` / `ω_{ℓ,i}`, with `ℓ ≥ 1`.
    pub fn var(&self, i: Label, l: usize) -> usize {
        debug_assert!(l >= 1 && l <= self.nu[i]);
        self.offset[i] + l - 1
    }

    pub fn label_of(&self, v: usize) -> (Label, usize) {
        for (i, off) in self.offset.iter().enumerate().rev() {
            if v >= *off && self.nu[i] > 0 {
                return (i, v - off + 1);
            }
        }
        (0, v + 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mono {
    pub x: [u16; MAX_VARS],
    pub ext: u16,
}

impl Mono {
    pub const ONE: Mono = Mono { x: [0; MAX_VARS], ext: 0 };

    pub fn x_var(v: usize, e: u16) -> Mono {
        let mut m = Mono::ONE;
        m.x[v] = e;
        m
    }

    pub fn omega(v: usize) -> Mono {
        Mono { x: [0; MAX_VARS], ext: 1 << v }
    }

    pub fn x_degree(&self) -> u32 {
        self.x.iter().map(|e| *e as u32).sum()
    }

    /// `self · o` with its sign, or `None` if an exterior generator repeats.
    pub fn mul(&self, o: &Mono) -> Option<(Mono, bool)> {
        if self.ext & o.ext != 0 {
            return None;
        }
        let mut x = self.x;
        for k in 0..MAX_VARS {
            x[k] += o.x[k];
        }
        let mut swaps = 0u32;
        let mut b = o.ext;
        while b != 0 {
            let j = b.trailing_zeros();
            swaps += (self.ext >> (j + 1)).count_ones();
            b &= b - 1;
        }
        Some((Mono { x, ext: self.ext | o.ext }, swaps % 2 == 1))
    }
}

/// An element of one summand `Q_I 1_i`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly {
    pub terms: BTreeMap<Mono, Scalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Self::mono(Mono::ONE, scalar::one())
    }

    pub fn mono(m: Mono, c: Scalar) -> Self {
        let mut p = Poly::zero();
        p.add_term(m, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Mono, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, o: &Poly) {
        for (m, c) in &o.terms {
            self.add_term(*m, c.clone());
        }
    }

    pub fn add_scaled(&mut self, o: &Poly, s: &Scalar) {
        if s.is_zero() {
            return;
        }
        for (m, c) in &o.terms {
            self.add_term(*m, c * s);
        }
    }

    pub fn scale(&self, s: &Scalar) -> Poly {
        let mut r = Poly::zero();
        r.add_scaled(self, s);
        r
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        r.add_scaled(o, &-scalar::one());
        r
    }

    /// Supercommutative product `self · o`.
    pub fn mul(&self, o: &Poly) -> Poly {
        let mut r = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                if let Some((m, neg)) = m1.mul(m2) {
                    let c = c1 * c2;
                    r.add_term(m, if neg { -c } else { c });
                }
            }
        }
        r
    }

    /// The automorphism swapping `x_u ↔ x_{u+1}` and sending
    /// `ω_u ↦ ω_u + (x_u - x_{u+1}) ω_{u+1}` (variables of one label).
    pub fn sigma(&self, u: usize) -> Poly {
        let v = u + 1;
        let mut r = Poly::zero();
        for (m, c) in &self.terms {
            let mut s = *m;
            s.x.swap(u, v);
            r.add_term(s, c.clone());
            if m.ext & (1 << u) != 0 && m.ext & (1 << v) == 0 {
                // ω_u → ω_v in the same slot keeps the ordering.
                let mut t = s;
                t.ext = (t.ext & !(1 << u)) | (1 << v);
                let mut tu = t;
                tu.x[u] += 1;
                r.add_term(tu, c.clone());
                let mut tv = t;
                tv.x[v] += 1;
                r.add_term(tv, -c.clone());
            }
        }
        r
    }

    /// Exact division by `x_u - x_v`; `None` if not divisible.
    pub fn div_by_difference(&self, u: usize, v: usize) -> Option<Poly> {
        let top = self.terms.keys().map(|m| m.x[u]).max().unwrap_or(0) as usize;
        let mut buckets: Vec<BTreeMap<Mono, Scalar>> = vec![BTreeMap::new(); top + 1];
        for (m, c) in &self.terms {
            buckets[m.x[u] as usize].insert(*m, c.clone());
        }
        let mut q = Poly::zero();
        for k in (1..=top).rev() {
            let b = core::mem::take(&mut buckets[k]);
            for (m, c) in b {
                if c.is_zero() {
                    continue;
                }
                let mut lower = m;
                lower.x[u] -= 1;
                q.add_term(lower, c.clone());
                let mut carry = lower;
                carry.x[v] += 1;
                let e = buckets[k - 1].entry(carry).or_insert_with(Scalar::zero);
                *e += c;
            }
        }
        if buckets[0].values().any(|c| !c.is_zero()) {
            return None;
        }
        Some(q)
    }
}

/// Sum over idempotents.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuperPolynomial {
    pub parts: BTreeMap<Vec<Label>, Poly>,
}

impl SuperPolynomial {
    pub fn single(idem: Vec<Label>, p: Poly) -> Self {
        let mut s = SuperPolynomial::default();
        if !p.is_zero() {
            s.parts.insert(idem, p);
        }
        s
    }

    pub fn is_zero(&self) -> bool {
        self.parts.values().all(|p| p.is_zero())
    }

    pub fn add_assign(&mut self, o: &SuperPolynomial) {
        for (k, p) in &o.parts {
            let e = self.parts.entry(k.clone()).or_default();
            e.add_assign(p);
            if e.is_zero() {
                self.parts.remove(k);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    /// `forward[i][j]` means `i → j`.
    pub forward: Vec<Vec<bool>>,
}

impl Orientation {
    /// `i → j` iff `i` precedes `j` in label order.
    pub fn default_for(datum: &CartanDatum) -> Self {
        let n = datum.rank();
        let forward = (0..n).map(|i| (0..n).map(|j| i < j).collect()).collect();
        Orientation { forward }
    }
}

/// Number of strands labeled like the one at 1-based position `p` among
/// positions `1..=p`.
fn rank_at(labels: &[Label], p: usize) -> usize {
    let l = labels[p - 1];
    labels[..p].iter().filter(|x| **x == l).count()
}

/// The algebra data needed to act.
#[derive(Clone, Copy, Debug)]
pub struct Rep<'a> {
    pub datum: &'a CartanDatum,
    pub scalars: &'a ScalarChoice,
    pub orientation: &'a Orientation,
}

enum Op {
    Mul(Poly),
    Demazure { u: usize, r: Scalar },
}

impl<'a> Rep<'a> {
    pub fn new(datum: &'a CartanDatum, scalars: &'a ScalarChoice, orientation: &'a Orientation) -> Self {
        Rep { datum, scalars, orientation }
    }

    /// `ω^a_{p,j}` by the recursion `ω^{a+1}_p = ω^a_{p-1} - x_p ω^a_p`.
    pub fn omega_pa(&self, layout: &Layout, j: Label, p: usize, a: usize) -> Poly {
        // table[p][a]
        let mut table: Vec<Vec<Poly>> = vec![vec![Poly::zero(); a + 1]; p + 1];
        for pp in 1..=p {
            table[pp][0] = Poly::mono(Mono::omega(layout.var(j, pp)), scalar::one());
        }
        for aa in 1..=a {
            for pp in 1..=p {
                let x = Poly::mono(Mono::x_var(layout.var(j, pp), 1), scalar::one());
                let mut t = table[pp - 1][aa - 1].clone();
                t.add_scaled(&x.mul(&table[pp][aa - 1]), &-scalar::one());
                table[pp][aa] = t;
            }
        }
        table[p][a].clone()
    }

    /// `ε^j_{n,i}` in the variables `x_{1,i}, …, x_{k,i}`.
    pub fn epsilon_i(&self, layout: &Layout, j: Label, i: Label, n: usize, k: usize) -> Poly {
        let d = self.datum;
        let (aii, ajj, aij) = (d.bilinear(i, i), d.bilinear(j, j), d.bilinear(i, j));
        // admissible (v, t, s_ji^{vt})
        let mut parts: Vec<(usize, u16, Scalar)> = Vec::new();
        for v in 0..=n {
            let num = -2 * aij - v as i64 * ajj;
            if num < 0 || num % aii != 0 {
                continue;
            }
            let t = num / aii;
            let s = self.scalars.s(d, j, i, v as i64, t);
            if !s.is_zero() {
                parts.push((v, t as u16, s));
            }
        }
        fn rec(
            layout: &Layout,
            i: Label,
            parts: &[(usize, u16, Scalar)],
            l: usize,
            k: usize,
            left: usize,
            acc: &Poly,
            out: &mut Poly,
        ) {
            if l > k {
                if left == 0 {
                    out.add_assign(acc);
                }
                return;
            }
            for (v, t, s) in parts {
                if *v > left {
                    continue;
                }
                let m = Poly::mono(Mono::x_var(layout.var(i, l), *t), s.clone());
                rec(layout, i, parts, l + 1, k, left - v, &acc.mul(&m), out);
            }
        }
        let mut out = Poly::zero();
        rec(layout, i, &parts, 1, k, n, &Poly::one(), &mut out);
        out
    }

    /// `ε^j_n(x_K)` with `K` given by per-label counts.
    pub fn epsilon(&self, layout: &Layout, j: Label, n: usize, k: &[usize]) -> Poly {
        let labels: Vec<Label> = (0..k.len()).filter(|i| *i != j && k[*i] > 0).collect();
        fn rec(rep: &Rep, layout: &Layout, j: Label, labels: &[Label], k: &[usize], n: usize, acc: &Poly, out: &mut Poly) {
            match labels.split_first() {
                None => {
                    if n == 0 {
                        out.add_assign(acc);
                    }
                }
                Some((&i, rest)) => {
                    for ni in 0..=n {
                        let e = rep.epsilon_i(layout, j, i, ni, k[i]);
                        if e.is_zero() {
                            continue;
                        }
                        rec(rep, layout, j, rest, k, n - ni, &acc.mul(&e), out);
                    }
                }
            }
        }
        let mut out = Poly::zero();
        rec(self, layout, j, &labels, k, n, &Poly::one(), &mut out);
        out
    }

    /// `ω_j^a(K) = Σ_n (-1)^n ω^{a+n}_{k_j,j} ε^j_n(x_K)`.
    pub fn omega_jak(&self, layout: &Layout, j: Label, a: usize, k: &[usize]) -> Result<Poly> {
        if k.iter().zip(&layout.nu).any(|(a, b)| a > b) {
            return Err(Error::Invalid("K exceeds ν".into()));
        }
        let kj = k[j];
        if kj == 0 {
            return Ok(Poly::zero());
        }
        let mut rest = k.to_vec();
        rest[j] = 0;
        let top = (-self.datum.coroot(j, &rest)).max(0) as usize;
        let mut out = Poly::zero();
        for n in 0..=top {
            let eps = self.epsilon(layout, j, n, k);
            if eps.is_zero() {
                continue;
            }
            let w = self.omega_pa(layout, j, kj, a + n);
            out.add_scaled(&w.mul(&eps), &scalar::sign(n as i64));
        }
        Ok(out)
    }

    fn compile(&self, layout: &Layout, g: &Generator, labels: &[Label]) -> Result<(Op, Option<usize>)> {
        let d = self.datum;
        Ok(match *g {
            Generator::Dot(a) => {
                let v = layout.var(labels[a - 1], rank_at(labels, a));
                (Op::Mul(Poly::mono(Mono::x_var(v, 1), scalar::one())), None)
            }
            Generator::Cross(a) => {
                let (i, j) = (labels[a - 1], labels[a]);
                let vi = layout.var(i, rank_at(labels, a));
                if i == j {
                    (Op::Demazure { u: vi, r: self.scalars.r[i].clone() }, Some(a))
                } else {
                    let kj = labels[..=a].iter().filter(|x| **x == j).count();
                    let vj = layout.var(j, kj);
                    let mult = if self.orientation.forward[i][j] {
                        let mut p = Poly::zero();
                        for (t, v, s) in self.scalars.q_terms(d, i, j) {
                            let mut m = Mono::ONE;
                            m.x[vi] += t as u16;
                            m.x[vj] += v as u16;
                            p.add_term(m, s);
                        }
                        p
                    } else {
                        Poly::one()
                    };
                    (Op::Mul(mult), Some(a))
                }
            }
            Generator::Float { label, sup, region } => {
                let k = d.weight_of(&labels[..region]);
                (Op::Mul(self.omega_jak(layout, label, sup as usize, &k)?), None)
            }
        })
    }

    /// Acts by `w` on each of `fs`, all in the summand `1_{w.bottom}`;
    /// returns the images (in `1_{w.top}`).
    pub fn act_word_many(&self, w: &DiagramWord, fs: &[Poly]) -> Result<Vec<Poly>> {
        w.validate()?;
        let layout = Layout::new(&self.datum.weight_of(&w.bottom))?;
        let mut ops = Vec::with_capacity(w.gens.len());
        for (g, labels) in w.gens.iter().zip(w.heights()) {
            ops.push(self.compile(&layout, g, &labels)?.0);
        }
        let mut out = Vec::with_capacity(fs.len());
        for f in fs {
            let mut cur = f.clone();
            for op in &ops {
                if cur.is_zero() {
                    break;
                }
                cur = apply(op, &cur)?;
            }
            out.push(cur);
        }
        Ok(out)
    }

    pub fn act_generator(&self, g: &Generator, f: &SuperPolynomial) -> Result<SuperPolynomial> {
        let mut out = SuperPolynomial::default();
        for (idem, p) in &f.parts {
            let w = DiagramWord::new(idem.clone(), vec![*g])?;
            let img = self.act_word_many(&w, core::slice::from_ref(p))?;
            out.add_assign(&SuperPolynomial::single(w.top(), img.into_iter().next().unwrap()));
        }
        Ok(out)
    }

    /// Only the summand `1_{w.bottom}` of `f` is acted on; others map to 0.
    pub fn act_word(&self, w: &DiagramWord, f: &SuperPolynomial) -> Result<SuperPolynomial> {
        match f.parts.get(&w.bottom) {
            None => Ok(SuperPolynomial::default()),
            Some(p) => {
                let img = self.act_word_many(w, core::slice::from_ref(p))?;
                Ok(SuperPolynomial::single(w.top(), img.into_iter().next().unwrap()))
            }
        }
    }

    /// Acts by `Σ c_k w_k` (all words with the same bottom) on each of `fs`.
    pub fn act_combination(&self, words: &[(Scalar, DiagramWord)], fs: &[Poly]) -> Result<Vec<BTreeMap<Vec<Label>, Poly>>> {
        let mut out: Vec<BTreeMap<Vec<Label>, Poly>> = vec![BTreeMap::new(); fs.len()];
        for (c, w) in words {
            let imgs = self.act_word_many(w, fs)?;
            let top = w.top();
            for (o, img) in out.iter_mut().zip(imgs) {
                let e = o.entry(top.clone()).or_default();
                e.add_scaled(&img, c);
            }
        }
        for o in &mut out {
            o.retain(|_, p| !p.is_zero());
        }
        Ok(out)
    }
}

fn apply(op: &Op, f: &Poly) -> Result<Poly> {
    Ok(match op {
        Op::Mul(m) => m.mul(f),
        Op::Demazure { u, r } => {
            let diff = f.sub(&f.sigma(*u));
            let q = diff
                .div_by_difference(*u, u + 1)
                .ok_or_else(|| Error::Internal("Demazure numerator not divisible".into()))?;
            q.scale(r)
        }
    })
}

/// All monomials of `x`-degree `≤ d` times all exterior subsets.
pub fn oracle_vectors(layout: &Layout, d: u32) -> Vec<Poly> {
    let n = layout.nvars;
    let mut xs: Vec<[u16; MAX_VARS]> = Vec::new();
    fn rec(n: usize, k: usize, left: u32, cur: &mut [u16; MAX_VARS], out: &mut Vec<[u16; MAX_VARS]>) {
        if k == n {
            out.push(*cur);
            return;
        }
        for e in 0..=left {
            cur[k] = e as u16;
            rec(n, k + 1, left - e, cur, out);
        }
        cur[k] = 0;
    }
    rec(n, 0, d, &mut [0; MAX_VARS], &mut xs);
    let mut out = Vec::with_capacity(xs.len() << n);
    for x in &xs {
        for ext in 0..(1u16 << n) {
            out.push(Poly::mono(Mono { x: *x, ext }, scalar::one()));
        }
    }
    out
}

/// Tri-degree of a monomial of `Q_ν`: `deg x_{ℓ,i} = (α_i|α_i)`,
/// `deg ω_{ℓ,i} = ((1-ℓ)(α_i|α_i), λ_i: 2, h: 1)`.
pub fn mono_degree(datum: &CartanDatum, layout: &Layout, m: &Mono) -> TriDegree {
    let mut d = TriDegree::zero(datum.rank());
    for v in 0..layout.nvars {
        let (i, l) = layout.label_of(v);
        d.q += m.x[v] as i64 * datum.bilinear(i, i);
        if m.ext & (1 << v) != 0 {
            d.q += (1 - l as i64) * datum.bilinear(i, i);
            d.lam[i] += 2;
            d.h += 1;
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::default_scalars;

    fn x(v: usize) -> Poly {
        Poly::mono(Mono::x_var(v, 1), scalar::one())
    }

    #[test]
    fn demazure_examples() {
        let d = CartanDatum::sl2();
        let s = default_scalars(&d);
        let o = Orientation::default_for(&d);
        let rep = Rep::new(&d, &s, &o);
        let w = DiagramWord::new(vec![0, 0], vec![Generator::Cross(1)]).unwrap();
        let img = rep.act_word_many(&w, &[x(0), Poly::one()]).unwrap();
        assert_eq!(img[0], Poly::one());
        assert!(img[1].is_zero());
    }

    #[test]
    fn mixed_crossing_multiplier() {
        let d = CartanDatum::a2();
        let s = default_scalars(&d);
        let o = Orientation::default_for(&d);
        let rep = Rep::new(&d, &s, &o);
        let w = DiagramWord::new(vec![0, 1], vec![Generator::Cross(1)]).unwrap();
        let img = rep.act_word_many(&w, &[Poly::one()]).unwrap();
        let mut expect = x(0);
        expect.add_assign(&x(1));
        assert_eq!(img[0], expect);
        assert_eq!(w.top(), vec![1, 0]);
    }

    #[test]
    fn omega_base_cases() {
        let d = CartanDatum::sl2();
        let s = default_scalars(&d);
        let o = Orientation::default_for(&d);
        let rep = Rep::new(&d, &s, &o);
        let l = Layout::new(&[2]).unwrap();
        assert!(rep.omega_jak(&l, 0, 0, &[0]).unwrap().is_zero());
        assert_eq!(rep.omega_jak(&l, 0, 0, &[1]).unwrap(), Poly::mono(Mono::omega(0), scalar::one()));
        assert_eq!(rep.omega_jak(&l, 0, 0, &[2]).unwrap(), Poly::mono(Mono::omega(1), scalar::one()));
        let mut expect = Poly::mono(Mono::omega(0), scalar::one());
        let xw = Mono { x: { let mut a = [0; MAX_VARS]; a[1] = 1; a }, ext: 0b10 };
        expect.add_term(xw, -scalar::one());
        assert_eq!(rep.omega_jak(&l, 0, 1, &[2]).unwrap(), expect);
    }

    #[test]
    fn epsilon_examples() {
        let d = CartanDatum::a2();
        let s = default_scalars(&d);
        let o = Orientation::default_for(&d);
        let rep = Rep::new(&d, &s, &o);
        let l = Layout::new(&[1, 1]).unwrap();
        // j = 2, K = α_1: ε_0 = x_{1,1}.
        assert_eq!(rep.epsilon(&l, 1, 0, &[1, 0]), x(0));
        // K without other labels: ε_0 = 1, ε_1 = 0.
        assert_eq!(rep.epsilon(&l, 1, 0, &[0, 1]), Poly::one());
        assert!(rep.epsilon(&l, 1, 1, &[0, 1]).is_zero());
    }

    #[test]
    fn exterior_signs() {
        let a = Poly::mono(Mono::omega(0), scalar::one());
        let b = Poly::mono(Mono::omega(1), scalar::one());
        let ab = a.mul(&b);
        let ba = b.mul(&a);
        assert_eq!(ab, ba.scale(&-scalar::one()));
        assert!(a.mul(&a).is_zero());
    }

    #[test]
    fn sigma_involution() {
        let l = Layout::new(&[3]).unwrap();
        for f in oracle_vectors(&l, 3) {
            for u in 0..2 {
                assert_eq!(f.sigma(u).sigma(u), f);
            }
            // braid relation
            assert_eq!(f.sigma(0).sigma(1).sigma(0), f.sigma(1).sigma(0).sigma(1));
        }
    }
}
