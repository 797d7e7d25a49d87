//! Root data, the symmetric bilinear form, and the scalar choices
//! `t_ij`, `s_ij^{tv}`, `r_i` together with their validation.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};
use crate::Label;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanDatum {
    pub labels: Vec<String>,
    pub matrix: Vec<Vec<i64>>,
    pub d: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub rule: &'static str,
    pub detail: String,
}

impl Violation {
    fn new(rule: &'static str, detail: String) -> Self {
        Violation { rule, detail }
    }
}

impl CartanDatum {
    pub fn new(labels: Vec<String>, matrix: Vec<Vec<i64>>, d: Vec<i64>) -> Self {
        CartanDatum { labels, matrix, d }
    }

    pub fn sl2() -> Self {
        Self::new(vec!["1".into()], vec![vec![2]], vec![1])
    }

    pub fn a1xa1() -> Self {
        Self::new(vec!["1".into(), "2".into()], vec![vec![2, 0], vec![0, 2]], vec![1, 1])
    }

    pub fn a2() -> Self {
        Self::new(vec!["1".into(), "2".into()], vec![vec![2, -1], vec![-1, 2]], vec![1, 1])
    }

    /// `d = (2, 1)`, `a_12 = -1`, `a_21 = -2`.
    pub fn b2() -> Self {
        Self::new(vec!["1".into(), "2".into()], vec![vec![2, -1], vec![-2, 2]], vec![2, 1])
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn index(&self, name: &str) -> Result<Label> {
        self.labels
            .iter()
            .position(|l| l == name)
            .ok_or_else(|| Error::UnknownLabel(name.into()))
    }

    pub fn a(&self, i: Label, j: Label) -> i64 {
        self.matrix[i][j]
    }

    /// `(α_i | α_j) = d_i a_ij`.
    pub fn bilinear(&self, i: Label, j: Label) -> i64 {
        self.d[i] * self.matrix[i][j]
    }

    /// `d_ij = -a_ij`.
    pub fn dij(&self, i: Label, j: Label) -> i64 {
        -self.matrix[i][j]
    }

    /// `α_i^∨(ν) = Σ_j a_ij ν_j`.
    pub fn coroot(&self, i: Label, nu: &[usize]) -> i64 {
        nu.iter().enumerate().map(|(j, n)| self.matrix[i][j] * *n as i64).sum()
    }

    /// `(α_i | ν)`.
    pub fn pair(&self, i: Label, nu: &[usize]) -> i64 {
        nu.iter().enumerate().map(|(j, n)| self.bilinear(i, j) * *n as i64).sum()
    }

    /// Pairs `(t, v)` with `t(α_i|α_i) + v(α_j|α_j) = -2(α_i|α_j)`, `t, v ≥ 0`.
    pub fn allowed_tv(&self, i: Label, j: Label) -> Vec<(u32, u32)> {
        let (aii, ajj, aij) = (self.bilinear(i, i), self.bilinear(j, j), self.bilinear(i, j));
        let target = -2 * aij;
        let mut out = Vec::new();
        if target < 0 {
            return out;
        }
        let mut t = 0;
        while t * aii <= target {
            let rest = target - t * aii;
            if rest % ajj == 0 {
                out.push((t as u32, (rest / ajj) as u32));
            }
            t += 1;
        }
        out
    }

    /// Weight vector `ν` of a sequence.
    pub fn weight_of(&self, seq: &[Label]) -> Vec<usize> {
        let mut nu = vec![0; self.rank()];
        for &l in seq {
            nu[l] += 1;
        }
        nu
    }
}

pub fn validate_cartan(datum: &CartanDatum) -> Vec<Violation> {
    let n = datum.labels.len();
    let mut v = Vec::new();
    if datum.matrix.len() != n || datum.matrix.iter().any(|r| r.len() != n) {
        v.push(Violation::new("square", format!("matrix is not {n}x{n}")));
        return v;
    }
    if datum.d.len() != n {
        v.push(Violation::new("d", format!("expected {n} symmetrizer entries")));
        return v;
    }
    let distinct: BTreeSet<&String> = datum.labels.iter().collect();
    if distinct.len() != n {
        v.push(Violation::new("labels", "labels are not distinct".into()));
    }
    for i in 0..n {
        if datum.d[i] <= 0 {
            v.push(Violation::new("d_i > 0", format!("d[{}] = {}", datum.labels[i], datum.d[i])));
        }
        for j in 0..n {
            let a = datum.matrix[i][j];
            let cell = format!("a[{}][{}] = {}", datum.labels[i], datum.labels[j], a);
            if i == j {
                if a != 2 {
                    v.push(Violation::new("a_ii = 2", cell));
                }
                continue;
            }
            if a > 0 {
                v.push(Violation::new("a_ij <= 0", cell.clone()));
            }
            if (a == 0) != (datum.matrix[j][i] == 0) {
                v.push(Violation::new("a_ij = 0 iff a_ji = 0", cell.clone()));
            }
            if i < j && datum.d[i] * a != datum.d[j] * datum.matrix[j][i] {
                v.push(Violation::new("d_i a_ij = d_j a_ji", cell));
            }
        }
    }
    v
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarChoice {
    pub t: Vec<Vec<Scalar>>,
    pub r: Vec<Scalar>,
    /// Keys `(i, j, t, v)`.
    pub s: BTreeMap<(Label, Label, u32, u32), Scalar>,
}

impl ScalarChoice {
    /// `s_ij^{tv}` including the boundary values `s_ij^{d_ij,0} = t_ij`,
    /// `s_ij^{0,d_ji} = t_ji`.
    pub fn s(&self, datum: &CartanDatum, i: Label, j: Label, t: i64, v: i64) -> Scalar {
        if t < 0 || v < 0 || i == j {
            return Scalar::zero();
        }
        if t == datum.dij(i, j) && v == 0 {
            return self.t[i][j].clone();
        }
        if t == 0 && v == datum.dij(j, i) {
            return self.t[j][i].clone();
        }
        self.s.get(&(i, j, t as u32, v as u32)).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Nonzero terms `(t, v, s_ij^{tv})` of `Σ s_ij^{tv} y^t z^v`.
    pub fn q_terms(&self, datum: &CartanDatum, i: Label, j: Label) -> Vec<(u32, u32, Scalar)> {
        datum
            .allowed_tv(i, j)
            .into_iter()
            .map(|(t, v)| (t, v, self.s(datum, i, j, t as i64, v as i64)))
            .filter(|(_, _, c)| !c.is_zero())
            .collect()
    }
}

pub fn default_scalars(datum: &CartanDatum) -> ScalarChoice {
    let n = datum.rank();
    let t = vec![vec![scalar::one(); n]; n];
    let mut sc = ScalarChoice { t, r: vec![scalar::one(); n], s: BTreeMap::new() };
    fill_boundary(datum, &mut sc);
    sc
}

/// Writes the boundary identifications into the stored map.
pub fn fill_boundary(datum: &CartanDatum, sc: &mut ScalarChoice) {
    let n = datum.rank();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let dij = datum.dij(i, j) as u32;
            let dji = datum.dij(j, i) as u32;
            sc.s.insert((i, j, dij, 0), sc.t[i][j].clone());
            sc.s.insert((i, j, 0, dji), sc.t[j][i].clone());
        }
    }
}

pub fn validate_scalars(datum: &CartanDatum, sc: &ScalarChoice) -> Vec<Violation> {
    let n = datum.rank();
    let mut v = Vec::new();
    if sc.t.len() != n || sc.t.iter().any(|r| r.len() != n) || sc.r.len() != n {
        v.push(Violation::new("shape", format!("scalars must be indexed by {n} labels")));
        return v;
    }
    let name = |i: Label| datum.labels[i].as_str();
    for i in 0..n {
        if sc.r[i].is_zero() {
            v.push(Violation::new("r_i invertible", format!("r[{}] = 0", name(i))));
        }
        if !sc.t[i][i].is_one() {
            v.push(Violation::new("t_ii = 1", format!("t[{0}][{0}] = {1}", name(i), sc.t[i][i])));
        }
        for j in 0..n {
            if i == j {
                continue;
            }
            if sc.t[i][j].is_zero() {
                v.push(Violation::new("t_ij invertible", format!("t[{}][{}] = 0", name(i), name(j))));
            }
            if datum.dij(i, j) == 0 && sc.t[i][j] != sc.t[j][i] {
                v.push(Violation::new(
                    "t_ij = t_ji when d_ij = 0",
                    format!("t[{0}][{1}] = {2}, t[{1}][{0}] = {3}", name(i), name(j), sc.t[i][j], sc.t[j][i]),
                ));
            }
        }
    }
    let bil = |i: Label, j: Label| datum.bilinear(i, j);
    for ((i, j, t, w), val) in &sc.s {
        let (i, j) = (*i, *j);
        if i >= n || j >= n {
            v.push(Violation::new("s label", format!("s entry with label index {i},{j}")));
            continue;
        }
        let cell = format!("s[{}][{}]^({},{}) = {}", name(i), name(j), t, w, val);
        if i == j {
            if !val.is_zero() {
                v.push(Violation::new("s_ii unused", cell));
            }
            continue;
        }
        let deg = *t as i64 * bil(i, i) + *w as i64 * bil(j, j);
        if deg != -2 * bil(i, j) && !val.is_zero() {
            v.push(Violation::new("degree support", cell.clone()));
        }
        let mirror = sc.s.get(&(j, i, *w, *t)).cloned().unwrap_or_else(Scalar::zero);
        if &mirror != val {
            v.push(Violation::new("s_ij^tv = s_ji^vt", cell.clone()));
        }
        let (dij, dji) = (datum.dij(i, j) as u32, datum.dij(j, i) as u32);
        if (*t, *w) == (dij, 0) && val != &sc.t[i][j] {
            v.push(Violation::new("s_ij^(d_ij,0) = t_ij", cell.clone()));
        }
        if (*t, *w) == (0, dji) && val != &sc.t[j][i] {
            v.push(Violation::new("s_ij^(0,d_ji) = t_ji", cell));
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let (dij, dji) = (datum.dij(i, j) as u32, datum.dij(j, i) as u32);
            for key in [(i, j, dij, 0), (i, j, 0, dji)] {
                if !sc.s.contains_key(&key) {
                    v.push(Violation::new(
                        "boundary stored",
                        format!("s[{}][{}]^({},{}) missing", name(i), name(j), key.2, key.3),
                    ));
                }
            }
        }
    }
    v
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParabolicDatum {
    /// `n_j` for `j ∈ I_f`; the keys are exactly `I_f`.
    pub n: BTreeMap<Label, u32>,
}

impl ParabolicDatum {
    pub fn borel() -> Self {
        Self::default()
    }

    pub fn is_finite(&self, j: Label) -> bool {
        self.n.contains_key(&j)
    }

    pub fn n_of(&self, j: Label) -> Option<u32> {
        self.n.get(&j).copied()
    }

    pub fn i_r(&self, datum: &CartanDatum) -> Vec<Label> {
        (0..datum.rank()).filter(|j| !self.is_finite(*j)).collect()
    }

    /// `n_j - ν_j - α_j^∨(ν^{∖j}) < 0` for some `j ∈ I_f`.
    pub fn acyclic(&self, datum: &CartanDatum, nu: &[usize]) -> bool {
        self.n.iter().any(|(&j, &nj)| {
            let mut rest = nu.to_vec();
            rest[j] = 0;
            (nj as i64) - nu[j] as i64 - datum.coroot(j, &rest) < 0
        })
    }
}

/// Random admissible scalars from a caller-supplied source of small integers.
pub fn random_scalars(datum: &CartanDatum, mut next: impl FnMut() -> i64) -> ScalarChoice {
    let n = datum.rank();
    let mut nonzero = || loop {
        let p = next();
        let q = next().abs() % 3 + 1;
        if p != 0 {
            return scalar::ratio(p, q);
        }
    };
    let mut sc = default_scalars(datum);
    for i in 0..n {
        sc.r[i] = nonzero();
        for j in 0..n {
            if i != j {
                sc.t[i][j] = nonzero();
            }
        }
    }
    for i in 0..n {
        for j in 0..i {
            if datum.dij(i, j) == 0 {
                sc.t[i][j] = sc.t[j][i].clone();
            }
        }
    }
    sc.s.clear();
    fill_boundary(datum, &mut sc);
    for i in 0..n {
        for j in (i + 1)..n {
            let (dij, dji) = (datum.dij(i, j) as u32, datum.dij(j, i) as u32);
            for (t, v) in datum.allowed_tv(i, j) {
                if (t, v) == (dij, 0) || (t, v) == (0, dji) {
                    continue;
                }
                let c = nonzero();
                sc.s.insert((i, j, t, v), c.clone());
                sc.s.insert((j, i, v, t), c);
            }
        }
    }
    sc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn battery_validates() {
        for d in [CartanDatum::sl2(), CartanDatum::a1xa1(), CartanDatum::a2(), CartanDatum::b2()] {
            assert!(validate_cartan(&d).is_empty());
            assert!(validate_scalars(&d, &default_scalars(&d)).is_empty());
        }
    }

    #[test]
    fn zero_pattern_violation() {
        let d = CartanDatum::new(vec!["1".into(), "2".into()], vec![vec![2, -1], vec![0, 2]], vec![1, 1]);
        let v = validate_cartan(&d);
        assert!(v.iter().any(|x| x.rule == "a_ij = 0 iff a_ji = 0"));
    }

    #[test]
    fn bilinear_values() {
        assert_eq!(CartanDatum::sl2().bilinear(0, 0), 2);
        assert_eq!(CartanDatum::a2().bilinear(0, 1), -1);
        assert_eq!(CartanDatum::b2().bilinear(0, 1), -2);
        assert_eq!(CartanDatum::b2().bilinear(1, 0), -2);
    }

    #[test]
    fn default_boundary_values() {
        let d = CartanDatum::a2();
        let s = default_scalars(&d);
        assert_eq!(s.s.get(&(0, 1, 1, 0)), Some(&scalar::one()));
        assert_eq!(s.s.get(&(0, 1, 0, 1)), Some(&scalar::one()));
        let d = CartanDatum::a1xa1();
        let s = default_scalars(&d);
        assert_eq!(s.s.get(&(0, 1, 0, 0)), Some(&scalar::one()));
        assert!(default_scalars(&CartanDatum::sl2()).s.is_empty());
    }

    #[test]
    fn scalar_violations() {
        let d = CartanDatum::sl2();
        let mut s = default_scalars(&d);
        s.t[0][0] = scalar::int(2);
        assert!(validate_scalars(&d, &s).iter().any(|v| v.rule == "t_ii = 1"));

        let d = CartanDatum::a2();
        let mut s = default_scalars(&d);
        s.s.insert((0, 1, 0, 0), scalar::one());
        s.s.insert((1, 0, 0, 0), scalar::one());
        assert!(validate_scalars(&d, &s).iter().any(|v| v.rule == "degree support"));
    }

    #[test]
    fn allowed_pairs_contain_boundary() {
        for d in [CartanDatum::a1xa1(), CartanDatum::a2(), CartanDatum::b2()] {
            for (i, j) in [(0, 1), (1, 0)] {
                let tv = d.allowed_tv(i, j);
                assert!(tv.contains(&(d.dij(i, j) as u32, 0)));
                assert!(tv.contains(&(0, d.dij(j, i) as u32)));
            }
        }
    }

    #[test]
    fn coroot_identity() {
        for d in [CartanDatum::a2(), CartanDatum::b2()] {
            for nu in [[1usize, 0], [2, 1], [0, 3], [2, 2]] {
                for i in 0..2 {
                    assert_eq!(d.coroot(i, &nu) * d.bilinear(i, i), 2 * d.pair(i, &nu));
                }
            }
        }
    }

    #[test]
    fn acyclicity_criterion() {
        let d = CartanDatum::sl2();
        let mut p = ParabolicDatum::borel();
        p.n.insert(0, 0);
        assert!(p.acyclic(&d, &[1]));
        p.n.insert(0, 2);
        assert!(!p.acyclic(&d, &[2]));
        assert!(p.acyclic(&d, &[3]));
    }
}
