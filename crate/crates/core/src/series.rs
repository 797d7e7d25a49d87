//! Laurent polynomials in `q`, the formal weights `λ_i` and the homological
//! marker `h`, rational functions of them, and their expansion as formal
//! Laurent series.
//!
//! Monomials are totally ordered λ-lexicographically first, then by the
//! `q`-exponent, then by `h`. This order is additive and has `0 ≺ q ≺ λ_i`,
//! so a polynomial whose order-minimal coefficient is invertible has an
//! inverse supported in a shifted cone.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exp {
    pub lam: Vec<i32>,
    pub q: i32,
    pub h: i32,
}

impl Exp {
    pub fn zero(nlam: usize) -> Self {
        Exp { lam: vec![0; nlam], q: 0, h: 0 }
    }

    fn plus(&self, o: &Exp) -> Exp {
        Exp {
            lam: self.lam.iter().zip(&o.lam).map(|(a, b)| a + b).collect(),
            q: self.q + o.q,
            h: self.h + o.h,
        }
    }

    fn minus(&self, o: &Exp) -> Exp {
        Exp {
            lam: self.lam.iter().zip(&o.lam).map(|(a, b)| a - b).collect(),
            q: self.q - o.q,
            h: self.h - o.h,
        }
    }

    fn coords(&self) -> impl Iterator<Item = i32> + '_ {
        self.lam.iter().copied().chain([self.q, self.h])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Laurent {
    nlam: usize,
    terms: BTreeMap<Exp, Scalar>,
}

impl Laurent {
    pub fn zero(nlam: usize) -> Self {
        Laurent { nlam, terms: BTreeMap::new() }
    }

    pub fn one(nlam: usize) -> Self {
        Self::constant(nlam, scalar::one())
    }

    pub fn constant(nlam: usize, c: Scalar) -> Self {
        let mut p = Self::zero(nlam);
        p.add_term(Exp::zero(nlam), c);
        p
    }

    pub fn monomial(exp: Exp, c: Scalar) -> Self {
        let mut p = Self::zero(exp.lam.len());
        p.add_term(exp, c);
        p
    }

    pub fn q_pow(nlam: usize, k: i32) -> Self {
        let mut e = Exp::zero(nlam);
        e.q = k;
        Self::monomial(e, scalar::one())
    }

    pub fn lam_pow(nlam: usize, i: usize, k: i32) -> Self {
        let mut e = Exp::zero(nlam);
        e.lam[i] = k;
        Self::monomial(e, scalar::one())
    }

    pub fn h_pow(nlam: usize, k: i32) -> Self {
        let mut e = Exp::zero(nlam);
        e.h = k;
        Self::monomial(e, scalar::one())
    }

    pub fn nlam(&self) -> usize {
        self.nlam
    }

    pub fn terms(&self) -> &BTreeMap<Exp, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exp: Exp, c: Scalar) {
        debug_assert_eq!(exp.lam.len(), self.nlam);
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(exp.clone()).or_insert_with(Scalar::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn scale(&self, c: &Scalar) -> Laurent {
        if c.is_zero() {
            return Laurent::zero(self.nlam);
        }
        Laurent {
            nlam: self.nlam,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn shift(&self, by: &Exp) -> Laurent {
        Laurent {
            nlam: self.nlam,
            terms: self.terms.iter().map(|(e, v)| (e.plus(by), v.clone())).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Laurent {
        let mut r = Laurent::one(self.nlam);
        for _ in 0..n {
            r = &r * self;
        }
        r
    }

    /// Order-minimal term.
    pub fn lead(&self) -> Option<(&Exp, &Scalar)> {
        self.terms.iter().next()
    }

    /// Substitutes `h = -1`.
    pub fn signed(&self) -> Laurent {
        let mut r = Laurent::zero(self.nlam);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2.h = 0;
            r.add_term(e2, c * scalar::sign(e.h as i64));
        }
        r
    }

    /// Substitutes `λ_i = q^k`.
    pub fn specialize_lam(&self, i: usize, k: i32) -> Laurent {
        let mut r = Laurent::zero(self.nlam);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2.q += k * e2.lam[i];
            e2.lam[i] = 0;
            r.add_term(e2, c.clone());
        }
        r
    }

    /// Evaluates at nonzero rational points.
    pub fn eval(&self, q: &Scalar, lam: &[Scalar], h: &Scalar) -> Scalar {
        let pw = |x: &Scalar, k: i32| -> Scalar {
            if k >= 0 {
                num_traits::pow(x.clone(), k as usize)
            } else {
                num_traits::pow(x.recip(), (-k) as usize)
            }
        };
        let mut s = Scalar::zero();
        for (e, c) in &self.terms {
            let mut t = c * pw(q, e.q) * pw(h, e.h);
            for (l, k) in lam.iter().zip(&e.lam) {
                t *= pw(l, *k);
            }
            s += t;
        }
        s
    }

    /// Keeps the terms inside `window`.
    pub fn truncate(&self, window: &Window) -> Laurent {
        Laurent {
            nlam: self.nlam,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| window.contains(e))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn coefficient_sum(&self) -> Scalar {
        self.terms.values().fold(Scalar::zero(), |a, b| a + b)
    }

    /// Renders e.g. `1-l1^2` using `names` for the λ variables.
    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return String::from("0");
        }
        let mut out = String::new();
        for (k, (e, c)) in self.terms.iter().enumerate() {
            let mut factors: Vec<String> = Vec::new();
            let mut var = |name: &str, p: i32| {
                if p == 1 {
                    factors.push(String::from(name));
                } else if p != 0 {
                    factors.push(alloc::format!("{name}^{p}"));
                }
            };
            var("q", e.q);
            for (i, p) in e.lam.iter().enumerate() {
                let nm = alloc::format!("l{}", names.get(i).map(|s| s.as_str()).unwrap_or("?"));
                var(&nm, *p);
            }
            var("h", e.h);
            let neg = c.is_negative();
            let a = c.abs();
            if neg {
                out.push('-');
            } else if k > 0 {
                out.push('+');
            }
            if factors.is_empty() {
                let _ = write!(out, "{a}");
            } else {
                if !a.is_one() {
                    let _ = write!(out, "{a}*");
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }
}

impl Add for &Laurent {
    type Output = Laurent;
    fn add(self, o: &Laurent) -> Laurent {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }
}

impl Sub for &Laurent {
    type Output = Laurent;
    fn sub(self, o: &Laurent) -> Laurent {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), -c.clone());
        }
        r
    }
}

impl Mul for &Laurent {
    type Output = Laurent;
    fn mul(self, o: &Laurent) -> Laurent {
        let mut r = Laurent::zero(self.nlam);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                r.add_term(e1.plus(e2), c1 * c2);
            }
        }
        r
    }
}

impl Neg for &Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        self.scale(&-scalar::one())
    }
}

/// The finite region of exponents kept by a truncated series:
/// `q ≤ q_max` and `|λ_i|, |h| ≤ lam_bound`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub q_max: i32,
    pub lam_bound: i32,
}

impl Window {
    pub fn new(truncation: i32) -> Self {
        Window { q_max: truncation, lam_bound: truncation }
    }

    pub fn contains(&self, e: &Exp) -> bool {
        e.q <= self.q_max
            && e.h.abs() <= self.lam_bound
            && e.lam.iter().all(|l| l.abs() <= self.lam_bound)
    }
}

struct Region {
    lo: Vec<i32>,
    hi: Vec<i32>,
    q_hi: i32,
}

impl Region {
    fn from_window(w: &Window, nlam: usize, shift: &Exp) -> Region {
        let mut lo = Vec::new();
        let mut hi = Vec::new();
        for i in 0..nlam {
            lo.push(-w.lam_bound + shift.lam[i]);
            hi.push(w.lam_bound + shift.lam[i]);
        }
        lo.push(-w.lam_bound + shift.h);
        hi.push(w.lam_bound + shift.h);
        Region { lo, hi, q_hi: w.q_max + shift.q }
    }

    /// Largest weight `w` takes on the region (`w_q ≥ 0`).
    fn max_weight(&self, w: &[i128]) -> i128 {
        let n = self.lo.len() - 1;
        let mut s = self.q_hi as i128 * w[n];
        for i in 0..=n {
            let k = if i < n { w[i] } else { w[n + 1] };
            s += (self.lo[i] as i128 * k).max(self.hi[i] as i128 * k);
        }
        s
    }

    fn contains(&self, e: &Exp) -> bool {
        let n = e.lam.len();
        e.q <= self.q_hi
            && e.lam.iter().enumerate().all(|(i, l)| *l >= self.lo[i] && *l <= self.hi[i])
            && e.h >= self.lo[n]
            && e.h <= self.hi[n]
    }
}

/// A positive integer weight on the exponents of `monos` (all assumed
/// ≻ 0), in the coordinate order `(λ_1, …, λ_n, q, h)`. Small weights are
/// searched first so that the expansion loop stays short; the lexicographic
/// weight is the fallback and always works.
fn positive_weight(nlam: usize, monos: &[Exp], region: &Region) -> Vec<i128> {
    let dim = nlam + 2;
    let maxabs = monos
        .iter()
        .flat_map(|e| e.coords())
        .map(|c| c.unsigned_abs() as i128)
        .max()
        .unwrap_or(1);
    let m = 1 + dim as i128 * maxabs.max(1);
    let mut lex = vec![0i128; dim];
    let mut p = 1i128;
    for k in (0..dim).rev() {
        lex[k] = p;
        p *= m;
    }
    // cost = number of steps the expansion may take with weight w
    let cost = |w: &[i128]| -> Option<i128> {
        let min = monos.iter().map(|e| weight(w, e)).min().unwrap_or(1);
        if min <= 0 {
            return None;
        }
        Some(region.max_weight(w) / min)
    };
    let mut best = (cost(&lex).unwrap_or(i128::MAX), lex);
    let mut top = 1i128;
    while (top + 2).pow(dim as u32) <= 20_000 {
        top += 1;
    }
    let mut cand = vec![0i128; dim];
    'search: loop {
        if let Some(c) = cost(&cand) {
            if c < best.0 {
                best = (c, cand.clone());
            }
        }
        for k in 0..dim {
            cand[k] += 1;
            if cand[k] <= top {
                continue 'search;
            }
            cand[k] = 0;
        }
        break;
    }
    best.1
}

fn weight(w: &[i128], e: &Exp) -> i128 {
    e.coords().zip(w).map(|(c, k)| c as i128 * k).sum()
}

/// Expands `1/p` as a formal Laurent series inside `window`.
pub fn expand_inverse(p: &Laurent, window: &Window) -> Result<Laurent> {
    let nlam = p.nlam();
    let (e0, c0) = match p.lead() {
        Some((e, c)) => (e.clone(), c.clone()),
        None => return Err(Error::Invalid("cannot invert zero".into())),
    };
    let inv_c0 = c0.recip();
    // p = c0 x^e0 (1 + r)
    let mut r = Laurent::zero(nlam);
    for (e, c) in p.terms().iter().skip(1) {
        r.add_term(e.minus(&e0), c * &inv_c0);
    }
    let region = Region::from_window(window, nlam, &e0);
    let monos: Vec<Exp> = r.terms().keys().cloned().collect();
    let w = positive_weight(nlam, &monos, &region);
    let wmax = region.max_weight(&w);
    let neg_r = -&r;
    let mut sum = Laurent::zero(nlam);
    let mut term = Laurent::one(nlam);
    while !term.is_zero() {
        sum = &sum + &term;
        let mut next = &term * &neg_r;
        next.terms.retain(|e, _| weight(&w, e) <= wmax);
        term = next;
    }
    sum.terms.retain(|e, _| region.contains(e));
    let out = sum.shift(&Exp::zero(nlam).minus(&e0)).scale(&inv_c0);
    Ok(out.truncate(window))
}

/// A graded dimension or character: an exact quotient of Laurent
/// polynomials, or its truncation.
#[derive(Clone, Debug)]
pub enum GradedSeries {
    Exact { num: Laurent, den: Laurent },
    Truncated { terms: Laurent, window: Window },
}

impl GradedSeries {
    pub fn polynomial(p: Laurent) -> Self {
        let n = p.nlam();
        GradedSeries::Exact { num: p, den: Laurent::one(n) }
    }

    pub fn nlam(&self) -> usize {
        match self {
            GradedSeries::Exact { num, .. } => num.nlam(),
            GradedSeries::Truncated { terms, .. } => terms.nlam(),
        }
    }

    /// Expansion inside `window`.
    pub fn expand(&self, window: &Window) -> Result<Laurent> {
        match self {
            GradedSeries::Exact { num, den } => {
                if num.is_zero() {
                    return Ok(Laurent::zero(num.nlam()));
                }
                let min_q = num.terms().keys().map(|e| e.q).min().unwrap_or(0);
                let max_l = num
                    .terms()
                    .keys()
                    .flat_map(|e| e.lam.iter().copied().chain([e.h]))
                    .map(|x| x.abs())
                    .max()
                    .unwrap_or(0);
                let wide =
                    Window { q_max: window.q_max - min_q, lam_bound: window.lam_bound + max_l };
                let inv = expand_inverse(den, &wide)?;
                Ok((num * &inv).truncate(window))
            }
            GradedSeries::Truncated { terms, window: w } => {
                let q_max = w.q_max.min(window.q_max);
                let lam_bound = w.lam_bound.min(window.lam_bound);
                Ok(terms.truncate(&Window { q_max, lam_bound }))
            }
        }
    }

    pub fn signed(&self) -> GradedSeries {
        match self {
            GradedSeries::Exact { num, den } => {
                GradedSeries::Exact { num: num.signed(), den: den.signed() }
            }
            GradedSeries::Truncated { terms, window } => {
                GradedSeries::Truncated { terms: terms.signed(), window: *window }
            }
        }
    }

    /// Exact equality of two exact series by cross-multiplication.
    pub fn exact_eq(&self, other: &GradedSeries) -> Option<bool> {
        match (self, other) {
            (
                GradedSeries::Exact { num: a, den: b },
                GradedSeries::Exact { num: c, den: d },
            ) => Some((a * d) == (c * b)),
            _ => None,
        }
    }

    pub fn add(&self, o: &GradedSeries) -> Option<GradedSeries> {
        match (self, o) {
            (
                GradedSeries::Exact { num: a, den: b },
                GradedSeries::Exact { num: c, den: d },
            ) => {
                if b == d {
                    Some(GradedSeries::Exact { num: a + c, den: b.clone() })
                } else {
                    Some(GradedSeries::Exact { num: &(a * d) + &(c * b), den: b * d })
                }
            }
            _ => None,
        }
    }

    pub fn mul(&self, o: &GradedSeries) -> Option<GradedSeries> {
        match (self, o) {
            (
                GradedSeries::Exact { num: a, den: b },
                GradedSeries::Exact { num: c, den: d },
            ) => Some(GradedSeries::Exact { num: a * c, den: b * d }),
            _ => None,
        }
    }

    pub fn scale_poly(&self, p: &Laurent) -> GradedSeries {
        match self {
            GradedSeries::Exact { num, den } => {
                GradedSeries::Exact { num: num * p, den: den.clone() }
            }
            GradedSeries::Truncated { terms, window } => {
                GradedSeries::Truncated { terms: (terms * p).truncate(window), window: *window }
            }
        }
    }

    pub fn render(&self, names: &[String]) -> String {
        match self {
            GradedSeries::Exact { num, den } => {
                if den == &Laurent::one(den.nlam()) {
                    num.render(names)
                } else {
                    alloc::format!("({})/({})", num.render(names), den.render(names))
                }
            }
            GradedSeries::Truncated { terms, window } => {
                alloc::format!("{} + O(q^{})", terms.render(names), window.q_max + 1)
            }
        }
    }
}

/// `[n]_{q^d} = (q^{dn} - q^{-dn}) / (q^d - q^{-d})` as a Laurent polynomial.
pub fn quantum_integer(n: i64, d: i32, nlam: usize) -> Laurent {
    let mut p = Laurent::zero(nlam);
    let k = n.unsigned_abs() as i32;
    for j in 0..k {
        let mut e = Exp::zero(nlam);
        e.q = d * (k - 1 - 2 * j);
        p.add_term(e, scalar::one());
    }
    if n < 0 {
        -&p
    } else {
        p
    }
}

/// `1 - q^k`.
pub fn one_minus_q(nlam: usize, k: i32) -> Laurent {
    &Laurent::one(nlam) - &Laurent::q_pow(nlam, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn quantum_integers() {
        assert_eq!(quantum_integer(1, 1, 0), Laurent::one(0));
        assert!(quantum_integer(0, 1, 0).is_zero());
        let two = quantum_integer(2, 1, 0);
        assert_eq!(two, &Laurent::q_pow(0, 1) + &Laurent::q_pow(0, -1));
        assert_eq!(quantum_integer(-2, 1, 0), -&two);
    }

    #[test]
    fn geometric_inverse() {
        let w = Window::new(8);
        let inv = expand_inverse(&one_minus_q(0, 2), &w).unwrap();
        let mut expect = Laurent::zero(0);
        for k in 0..=4 {
            expect = &expect + &Laurent::q_pow(0, 2 * k);
        }
        assert_eq!(inv, expect);
    }

    #[test]
    fn inverse_of_q_inv_minus_q() {
        let p = &Laurent::q_pow(0, -1) - &Laurent::q_pow(0, 1);
        let inv = expand_inverse(&p, &Window::new(7)).unwrap();
        let mut expect = Laurent::zero(0);
        for k in [1, 3, 5, 7] {
            expect = &expect + &Laurent::q_pow(0, k);
        }
        assert_eq!(inv, expect);
    }

    #[test]
    fn inverse_with_lambda_cone() {
        // 1/(1 - λ²q⁻²): powers of λ²q⁻², all ≻ 0.
        let mut e = Exp::zero(1);
        e.lam[0] = 2;
        e.q = -2;
        let p = &Laurent::one(1) - &Laurent::monomial(e, int(1));
        let inv = expand_inverse(&p, &Window::new(6)).unwrap();
        assert_eq!(inv.terms().len(), 4);
        for (e, c) in inv.terms() {
            assert_eq!(e.lam[0], -e.q);
            assert_eq!(c, &int(1));
            assert!(e > &Exp::zero(1) || e == &Exp::zero(1));
        }
        let back = (&inv * &p).truncate(&Window::new(6));
        assert_eq!(back, Laurent::one(1));
    }

    #[test]
    fn render_sl2() {
        let names = [String::from("1")];
        let num = &Laurent::one(1) - &Laurent::lam_pow(1, 0, 2);
        let s = GradedSeries::Exact { num, den: one_minus_q(1, 2) };
        assert_eq!(s.render(&names), "(1-l1^2)/(1-q^2)");
    }
}
