//! Exact rank over the rationals by sparse Gaussian elimination.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use num_traits::Zero;

use crate::Scalar;

pub type SparseRow = BTreeMap<usize, Scalar>;

/// Incremental row-echelon basis: rows are reduced against stored pivots.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    pivots: BTreeMap<usize, SparseRow>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `row` fully; returns `true` if it was independent and got stored.
    pub fn insert(&mut self, mut row: SparseRow) -> bool {
        row.retain(|_, v| !v.is_zero());
        loop {
            let (col, lead) = match row.iter().next() {
                None => return false,
                Some((c, v)) => (*c, v.clone()),
            };
            match self.pivots.get(&col) {
                Some(p) => {
                    for (c, v) in p {
                        let e = row.entry(*c).or_insert_with(Scalar::zero);
                        *e -= &lead * v;
                        if e.is_zero() {
                            row.remove(c);
                        }
                    }
                }
                None => {
                    let inv = lead.recip();
                    for v in row.values_mut() {
                        *v *= &inv;
                    }
                    self.pivots.insert(col, row);
                    return true;
                }
            }
        }
    }
}

pub fn rank<I: IntoIterator<Item = SparseRow>>(rows: I) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

pub fn dense_rank(rows: &[Vec<Scalar>]) -> usize {
    rank(rows.iter().map(|r| {
        r.iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (i, v.clone()))
            .collect::<SparseRow>()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;
    use alloc::vec;

    #[test]
    fn small_ranks() {
        let m = vec![
            vec![int(1), int(2), int(3)],
            vec![int(2), int(4), int(6)],
            vec![int(0), int(1), int(1)],
        ];
        assert_eq!(dense_rank(&m), 2);
        assert_eq!(dense_rank(&[]), 0);
        assert_eq!(dense_rank(&[vec![int(0), int(0)]]), 0);
    }
}
