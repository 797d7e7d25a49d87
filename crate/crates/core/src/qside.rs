//! Verma modules of `U_q(g)` and their Shapovalov form.
//!
//! Pairings are exact rational functions in `q` and the formal weights
//! `λ_j`. The form is computed by peeling the outermost `F_a` off the left
//! argument, turning it into `q_a^{-1} K_a E_a` on the right and commuting
//! `E_a` down to the highest weight vector, where `E_a v = 0` and
//! `K_a v = λ_a v` (or `q_a^{n_a} v` for `a ∈ I_f`).
//!
//! Every pairing of weight `ν` is stored as a numerator over the common
//! denominator `D_ν = Π_a (q_a - q_a^{-1})^{ν_a}`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::cartan::{CartanDatum, ParabolicDatum};
use crate::linalg;
use crate::relations::sequences;
use crate::scalar::{self, Scalar};
use crate::series::{Exp, GradedSeries, Laurent};
use crate::Label;

pub use crate::series::{expand_inverse, quantum_integer};

/// `[n choose k]_{q^d}`.
pub fn quantum_binomial(n: i64, k: i64, d: i32, nlam: usize) -> Laurent {
    if k < 0 || k > n || n < 0 {
        return Laurent::zero(nlam);
    }
    if k == 0 || k == n {
        return Laurent::one(nlam);
    }
    let a = quantum_binomial(n - 1, k, d, nlam).shift(&q_exp(nlam, -d * k as i32));
    let b = quantum_binomial(n - 1, k - 1, d, nlam).shift(&q_exp(nlam, d * (n - k) as i32));
    &a + &b
}

/// `[n]_{q^d}!`.
pub fn quantum_factorial(n: u32, d: i32, nlam: usize) -> Laurent {
    let mut p = Laurent::one(nlam);
    for k in 1..=n {
        p = &p * &quantum_integer(k as i64, d, nlam);
    }
    p
}

fn q_exp(nlam: usize, k: i32) -> Exp {
    let mut e = Exp::zero(nlam);
    e.q = k;
    e
}

/// The parabolic Verma module `M^p(Λ, N)`: formal weights on `I_r`,
/// integral weights `n_j` on `I_f`.
pub struct Verma<'a> {
    pub datum: &'a CartanDatum,
    pub parab: ParabolicDatum,
    /// Exponent of the eigenvalue of `K_a` on the highest weight vector.
    hw: Vec<Exp>,
    memo: BTreeMap<(Vec<Label>, Vec<Label>), Laurent>,
}

impl<'a> Verma<'a> {
    pub fn new(datum: &'a CartanDatum, parab: &ParabolicDatum) -> Self {
        let n = datum.rank();
        let hw = (0..n)
            .map(|a| {
                let mut e = Exp::zero(n);
                match parab.n_of(a) {
                    Some(na) => e.q = (datum.d[a] * na as i64) as i32,
                    None => e.lam[a] = 1,
                }
                e
            })
            .collect();
        Verma { datum, parab: parab.clone(), hw, memo: BTreeMap::new() }
    }

    pub fn universal(datum: &'a CartanDatum) -> Self {
        Self::new(datum, &ParabolicDatum::borel())
    }

    fn nlam(&self) -> usize {
        self.datum.rank()
    }

    /// Eigenvalue of `K_a` on the weight space `Λ - β`, times `c`, with
    /// `c = ±1` selecting `K_a^{±1}`.
    fn k_value(&self, a: Label, beta: &[usize], c: i32) -> Exp {
        let n = self.nlam();
        let mut e = Exp::zero(n);
        for k in 0..n {
            e.lam[k] = c * self.hw[a].lam[k];
        }
        e.q = c * (self.hw[a].q - self.datum.pair(a, beta) as i32);
        e
    }

    /// `D_ν`.
    pub fn denominator(&self, nu: &[usize]) -> Laurent {
        let n = self.nlam();
        let mut d = Laurent::one(n);
        for (a, &k) in nu.iter().enumerate() {
            let da = self.datum.d[a] as i32;
            let f = &Laurent::q_pow(n, da) - &Laurent::q_pow(n, -da);
            d = &d * &f.pow(k as u32);
        }
        d
    }

    /// `D_ν · (F_x v, F_y v)`, with `F_x = F_{x_1} ⋯ F_{x_m}`.
    pub fn numerator(&mut self, x: &[Label], y: &[Label]) -> Laurent {
        let n = self.nlam();
        if self.datum.weight_of(x) != self.datum.weight_of(y) {
            return Laurent::zero(n);
        }
        if x.is_empty() {
            return Laurent::one(n);
        }
        let key = (x.to_vec(), y.to_vec());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let a = x[0];
        let da = self.datum.d[a] as i32;
        // q_a^{-1} K_a, evaluated on the weight of E_a F_y v
        let mut after = self.datum.weight_of(y);
        after[a] -= 1;
        let mut front = self.k_value(a, &after, 1);
        front.q -= da;
        let mut total = Laurent::zero(n);
        for k in 0..y.len() {
            if y[k] != a {
                continue;
            }
            let below = self.datum.weight_of(&y[k + 1..]);
            let comm = &Laurent::monomial(self.k_value(a, &below, 1), scalar::one())
                - &Laurent::monomial(self.k_value(a, &below, -1), scalar::one());
            let mut rest = y.to_vec();
            rest.remove(k);
            let sub = self.numerator(&x[1..], &rest);
            if sub.is_zero() {
                continue;
            }
            total = &total + &(&comm * &sub).shift(&front);
        }
        self.memo.insert(key, total.clone());
        total
    }

    /// `(F_x v, F_y v)`; zero when the weights differ.
    pub fn shapovalov(&mut self, x: &[Label], y: &[Label]) -> GradedSeries {
        let num = self.numerator(x, y);
        let den = self.denominator(&self.datum.weight_of(x));
        GradedSeries::Exact { num, den }
    }

    /// The pairing matching `1_i R 1_j`: the leftmost strand is the first
    /// `F` to act, so `i` is read as `F_{i_m} ⋯ F_{i_1} v`.
    pub fn strand_pairing(&mut self, i: &[Label], j: &[Label]) -> GradedSeries {
        let x: Vec<Label> = i.iter().rev().copied().collect();
        let y: Vec<Label> = j.iter().rev().copied().collect();
        self.shapovalov(&x, &y)
    }

    /// `Seq(ν)` in lexicographic order.
    pub fn sequences(&self, nu: &[usize]) -> Vec<Vec<Label>> {
        let m: usize = nu.iter().sum();
        sequences(self.nlam(), m).into_iter().filter(|s| self.datum.weight_of(s) == nu).collect()
    }

    /// Gram matrix over `Seq(ν)`, rows and columns in [`Self::sequences`] order.
    pub fn gram_matrix(&mut self, nu: &[usize]) -> Vec<Vec<GradedSeries>> {
        let seqs = self.sequences(nu);
        seqs.iter().map(|x| seqs.iter().map(|y| self.shapovalov(x, y)).collect()).collect()
    }

    /// Gram numerators (all share the denominator `D_ν`).
    pub fn gram_numerators(&mut self, nu: &[usize]) -> Vec<Vec<Laurent>> {
        let seqs = self.sequences(nu);
        seqs.iter().map(|x| seqs.iter().map(|y| self.numerator(x, y)).collect()).collect()
    }

    /// Dimension of the weight space `Λ - ν`: the rank of the Gram matrix at
    /// generic `q, λ`, taken as the largest rank over several rational points.
    pub fn weight_dim(&mut self, nu: &[usize]) -> usize {
        let g = self.gram_numerators(nu);
        if g.is_empty() {
            return 0;
        }
        let n = self.nlam();
        let mut best = 0;
        for (t, q) in SAMPLE_Q.iter().enumerate() {
            let q = scalar::ratio(q.0, q.1);
            let lam: Vec<Scalar> = (0..n)
                .map(|k| {
                    let (p, r) = SAMPLE_LAM[(t + 3 * k) % SAMPLE_LAM.len()];
                    scalar::ratio(p, r)
                })
                .collect();
            let rows: Vec<Vec<Scalar>> = g
                .iter()
                .map(|row| row.iter().map(|p| p.eval(&q, &lam, &scalar::one())).collect())
                .collect();
            best = best.max(linalg::dense_rank(&rows));
            if best == g.len() {
                break;
            }
        }
        best
    }

    /// The Serre element `Σ_r (-1)^r [1-a_ij, r]_{q_i} F_i^r F_j F_i^s` as a
    /// combination of sequences, wrapped in `prefix` and `suffix`.
    pub fn serre_element(&self, i: Label, j: Label, prefix: &[Label], suffix: &[Label]) -> Vec<(Laurent, Vec<Label>)> {
        let n = self.nlam();
        let top = 1 - self.datum.a(i, j);
        let di = self.datum.d[i] as i32;
        (0..=top)
            .map(|r| {
                let mut seq = prefix.to_vec();
                seq.extend(core::iter::repeat_n(i, r as usize));
                seq.push(j);
                seq.extend(core::iter::repeat_n(i, (top - r) as usize));
                seq.extend_from_slice(suffix);
                let c = quantum_binomial(top, r, di, n).scale(&scalar::sign(r));
                (c, seq)
            })
            .collect()
    }

    /// Numerator of the pairing of a combination of sequences with `F_y v`.
    pub fn pair_combination(&mut self, combo: &[(Laurent, Vec<Label>)], y: &[Label]) -> Laurent {
        let mut s = Laurent::zero(self.nlam());
        for (c, x) in combo {
            s = &s + &(c * &self.numerator(x, y));
        }
        s
    }
}

const SAMPLE_Q: [(i64, i64); 4] = [(3, 7), (5, 2), (11, 13), (17, 4)];
const SAMPLE_LAM: [(i64, i64); 7] = [(2, 5), (7, 3), (13, 11), (19, 6), (23, 29), (5, 31), (37, 8)];

/// Substitutes `λ_j = q^{d_j n_j}` for `j ∈ I_f`.
pub fn specialize(datum: &CartanDatum, parab: &ParabolicDatum, p: &Laurent) -> Laurent {
    let mut out = p.clone();
    for (&j, &nj) in &parab.n {
        out = out.specialize_lam(j, (datum.d[j] * nj as i64) as i32);
    }
    out
}

/// A weight `ν` as a vector of multiplicities, for tests and reports.
pub fn nu_of(datum: &CartanDatum, pairs: &[(Label, usize)]) -> Vec<usize> {
    let mut nu = vec![0; datum.rank()];
    for &(l, k) in pairs {
        nu[l] += k;
    }
    nu
}
