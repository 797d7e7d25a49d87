//! Free diagram words on labeled strands and their tri-degree.
//!
//! Positions are 1-based as in the usual notation: `x_a` sits on the strand
//! at position `a`, `τ_a` crosses positions `a` and `a+1`, and a floating dot
//! in region `p` sits immediately right of the strand at position `p`
//! (region 0 is the leftmost region).

use alloc::vec::Vec;
use core::ops::Add;

use crate::cartan::CartanDatum;
use crate::error::{Error, Result};
use crate::Label;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    Dot(usize),
    Cross(usize),
    /// Floating dot `ω_label^sup` in region `region`.
    Float { label: Label, sup: u32, region: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DiagramWord {
    pub bottom: Vec<Label>,
    /// Bottom to top.
    pub gens: Vec<Generator>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TriDegree {
    pub q: i64,
    pub lam: Vec<i64>,
    pub h: i64,
}

impl TriDegree {
    pub fn zero(n: usize) -> Self {
        TriDegree { q: 0, lam: alloc::vec![0; n], h: 0 }
    }
}

impl Add for &TriDegree {
    type Output = TriDegree;
    fn add(self, o: &TriDegree) -> TriDegree {
        TriDegree {
            q: self.q + o.q,
            lam: self.lam.iter().zip(&o.lam).map(|(a, b)| a + b).collect(),
            h: self.h + o.h,
        }
    }
}

/// Tight floating dot for the strand currently at position 1.
pub fn tight(labels_at_height: &[Label]) -> Generator {
    Generator::Float { label: labels_at_height[0], sup: 0, region: 1 }
}

impl Generator {
    pub fn is_tight(&self, labels_at_height: &[Label]) -> bool {
        matches!(self, Generator::Float { label, sup: 0, region: 1 } if Some(label) == labels_at_height.first())
    }

    pub fn is_float(&self) -> bool {
        matches!(self, Generator::Float { .. })
    }

    fn check(&self, m: usize) -> Result<()> {
        let ok = match *self {
            Generator::Dot(a) => a >= 1 && a <= m,
            Generator::Cross(a) => a >= 1 && a < m,
            Generator::Float { region, .. } => region <= m,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Malformed(alloc::format!("{self:?} out of range for {m} strands")))
        }
    }
}

/// `q`-degree of a floating dot `ω_j^a` whose region has the strands `left`
/// to its left: `(1 + a - α_j^∨(K) + k_j)(α_j|α_j)`.
pub fn float_q_degree(datum: &CartanDatum, j: Label, a: u32, left: &[Label]) -> i64 {
    let k = datum.weight_of(left);
    (1 + a as i64 - datum.coroot(j, &k) + k[j] as i64) * datum.bilinear(j, j)
}

impl DiagramWord {
    pub fn identity(bottom: Vec<Label>) -> Self {
        DiagramWord { bottom, gens: Vec::new() }
    }

    pub fn new(bottom: Vec<Label>, gens: Vec<Generator>) -> Result<Self> {
        let w = DiagramWord { bottom, gens };
        w.validate()?;
        Ok(w)
    }

    pub fn m(&self) -> usize {
        self.bottom.len()
    }

    pub fn validate(&self) -> Result<()> {
        for g in &self.gens {
            g.check(self.m())?;
        }
        Ok(())
    }

    /// Labels at each height: entry `k` is the sequence below generator `k`;
    /// the final entry is the top.
    pub fn heights(&self) -> Vec<Vec<Label>> {
        let mut cur = self.bottom.clone();
        let mut out = Vec::with_capacity(self.gens.len() + 1);
        for g in &self.gens {
            out.push(cur.clone());
            if let Generator::Cross(a) = g {
                cur.swap(a - 1, *a);
            }
        }
        out.push(cur);
        out
    }

    pub fn top(&self) -> Vec<Label> {
        let mut cur = self.bottom.clone();
        for g in &self.gens {
            if let Generator::Cross(a) = g {
                cur.swap(a - 1, *a);
            }
        }
        cur
    }

    pub fn then(mut self, g: Generator) -> Self {
        self.gens.push(g);
        self
    }

    pub fn mirror(&self) -> DiagramWord {
        let mut gens = self.gens.clone();
        gens.reverse();
        DiagramWord { bottom: self.top(), gens }
    }
}

pub fn generator_degree(datum: &CartanDatum, g: &Generator, labels: &[Label]) -> TriDegree {
    let mut d = TriDegree::zero(datum.rank());
    match *g {
        Generator::Dot(a) => {
            let i = labels[a - 1];
            d.q = datum.bilinear(i, i);
        }
        Generator::Cross(a) => {
            d.q = -datum.bilinear(labels[a - 1], labels[a]);
        }
        Generator::Float { label, sup, region } => {
            d.q = float_q_degree(datum, label, sup, &labels[..region]);
            d.lam[label] = 2;
            d.h = 1;
        }
    }
    d
}

pub fn degree(datum: &CartanDatum, w: &DiagramWord) -> Result<TriDegree> {
    w.validate()?;
    let mut total = TriDegree::zero(datum.rank());
    for (g, labels) in w.gens.iter().zip(w.heights()) {
        total = &total + &generator_degree(datum, g, &labels);
    }
    Ok(total)
}

/// `w1 ∘ w2` (`w2` below `w1`), or `None` when the labels do not match.
pub fn compose(w1: &DiagramWord, w2: &DiagramWord) -> Option<DiagramWord> {
    if w2.top() != w1.bottom {
        return None;
    }
    let mut gens = w2.gens.clone();
    gens.extend_from_slice(&w1.gens);
    Some(DiagramWord { bottom: w2.bottom.clone(), gens })
}

/// `θ_a^ℓ = τ_{a-1}⋯τ_1 ω x_1^ℓ τ_1⋯τ_{a-1}` on strands `bottom`;
/// `ℓ = -1` gives the identity.
pub fn tightened_theta(bottom: &[Label], a: usize, l: i32) -> Result<DiagramWord> {
    let m = bottom.len();
    if a < 1 || a > m || l < -1 {
        return Err(Error::Malformed(alloc::format!("theta_{a}^{l} on {m} strands")));
    }
    let mut gens = Vec::new();
    if l >= 0 {
        for b in (1..a).rev() {
            gens.push(Generator::Cross(b));
        }
        for _ in 0..l {
            gens.push(Generator::Dot(1));
        }
        gens.push(Generator::Float { label: bottom[a - 1], sup: 0, region: 1 });
        for b in 1..a {
            gens.push(Generator::Cross(b));
        }
    }
    Ok(DiagramWord { bottom: bottom.to_vec(), gens })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn degrees() {
        let sl2 = CartanDatum::sl2();
        let w = DiagramWord::new(vec![0], vec![Generator::Dot(1)]).unwrap();
        assert_eq!(degree(&sl2, &w).unwrap(), TriDegree { q: 2, lam: vec![0], h: 0 });
        let w = DiagramWord::new(vec![0], vec![tight(&[0])]).unwrap();
        assert_eq!(degree(&sl2, &w).unwrap(), TriDegree { q: 0, lam: vec![2], h: 1 });
        let a2 = CartanDatum::a2();
        let w = DiagramWord::new(vec![0, 1], vec![Generator::Cross(1)]).unwrap();
        assert_eq!(degree(&a2, &w).unwrap().q, 1);
    }

    #[test]
    fn composition() {
        let i = DiagramWord::identity(vec![0, 1]);
        let j = DiagramWord::identity(vec![1, 0]);
        assert_eq!(compose(&i, &i), Some(i.clone()));
        assert_eq!(compose(&i, &j), None);
        let sl2 = CartanDatum::sl2();
        let a = DiagramWord::new(vec![0, 0], vec![Generator::Dot(1)]).unwrap();
        let b = DiagramWord::new(vec![0, 0], vec![Generator::Cross(1)]).unwrap();
        let c = compose(&b, &a).unwrap();
        assert_eq!(c.gens, vec![Generator::Dot(1), Generator::Cross(1)]);
        assert_eq!(degree(&sl2, &c).unwrap().q, 0);
    }

    #[test]
    fn thetas() {
        let t = tightened_theta(&[0], 1, 0).unwrap();
        assert_eq!(t.gens, vec![tight(&[0])]);
        assert!(tightened_theta(&[0], 1, -1).unwrap().gens.is_empty());
        let t = tightened_theta(&[0, 0], 2, 0).unwrap();
        assert_eq!(t.gens, vec![Generator::Cross(1), tight(&[0]), Generator::Cross(1)]);
        assert!(tightened_theta(&[0, 0], 3, 0).is_err());
    }

    #[test]
    fn float_region_recount() {
        let a2 = CartanDatum::a2();
        let w = DiagramWord::new(
            vec![0, 1, 0],
            vec![Generator::Cross(2), Generator::Float { label: 1, sup: 0, region: 2 }],
        )
        .unwrap();
        let hs = w.heights();
        assert_eq!(&hs[1][..2], &[0, 0]);
        // K = 2α_1, j = 2: (1 + 0 - (-2) + 0)·2 = 6.
        assert_eq!(degree(&a2, &w).unwrap().q, -(-1) + 6);
    }
}
