//! Sparse matrices and rank by Markowitz-style elimination.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap, HashSet};

use crate::field::Field;
use crate::linalg::Mat;

/// Sparse matrix stored by rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMat<F: Field> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<BTreeMap<usize, F>>,
}

impl<F: Field> SparseMat<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMat {
            rows,
            cols,
            data: vec![BTreeMap::new(); rows],
        }
    }

    /// Adds `v` to entry `(i, j)`.
    pub fn add_to(&mut self, i: usize, j: usize, v: F) {
        if v.is_zero() {
            return;
        }
        let row = &mut self.data[i];
        match row.get_mut(&j) {
            Some(x) => {
                *x += v;
                if x.is_zero() {
                    row.remove(&j);
                }
            }
            None => {
                row.insert(j, v);
            }
        }
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn to_dense(&self) -> Mat<F> {
        let mut m = Mat::zeros(self.rows, self.cols);
        for (i, r) in self.data.iter().enumerate() {
            for (&j, v) in r {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    /// Places `self` at block offset `(r0, c0)` of `out`.
    pub fn embed_into(&self, out: &mut SparseMat<F>, r0: usize, c0: usize) {
        for (i, r) in self.data.iter().enumerate() {
            for (&j, v) in r {
                out.add_to(r0 + i, c0 + j, v.clone());
            }
        }
    }

    pub fn rank(&self) -> usize {
        let mut rows: Vec<HashMap<usize, F>> = self
            .data
            .iter()
            .map(|r| r.iter().map(|(&j, v)| (j, v.clone())).collect())
            .collect();
        let mut col_rows: Vec<HashSet<usize>> = vec![HashSet::new(); self.cols];
        for (i, r) in rows.iter().enumerate() {
            for &j in r.keys() {
                col_rows[j].insert(i);
            }
        }
        let mut heap: BinaryHeap<Reverse<(usize, usize)>> = (0..self.cols)
            .filter(|&j| !col_rows[j].is_empty())
            .map(|j| Reverse((col_rows[j].len(), j)))
            .collect();
        let mut rank = 0;
        while let Some(Reverse((count, c))) = heap.pop() {
            if col_rows[c].len() != count || count == 0 {
                continue;
            }
            let piv = *col_rows[c]
                .iter()
                .min_by_key(|&&r| (rows[r].len(), r))
                .unwrap();
            let prow = std::mem::take(&mut rows[piv]);
            for &j in prow.keys() {
                col_rows[j].remove(&piv);
            }
            let inv = prow[&c].inv();
            let others: Vec<usize> = col_rows[c].iter().copied().collect();
            let mut touched: HashSet<usize> = HashSet::new();
            for r in others {
                let f = rows[r][&c].clone() * inv.clone();
                for (&j, v) in &prow {
                    let delta = f.clone() * v.clone();
                    let row = &mut rows[r];
                    let now_zero = match row.get_mut(&j) {
                        Some(x) => {
                            *x -= delta;
                            x.is_zero()
                        }
                        None => {
                            row.insert(j, -delta);
                            col_rows[j].insert(r);
                            false
                        }
                    };
                    if now_zero {
                        row.remove(&j);
                        col_rows[j].remove(&r);
                    }
                    touched.insert(j);
                }
            }
            for &j in prow.keys() {
                touched.insert(j);
            }
            for j in touched {
                if j != c && !col_rows[j].is_empty() {
                    heap.push(Reverse((col_rows[j].len(), j)));
                }
            }
            debug_assert!(col_rows[c].is_empty());
            rank += 1;
        }
        rank
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn rank_matches_dense(entries in proptest::collection::vec((0usize..7, 0usize..9, -2i64..3), 0..30)) {
            let mut s = SparseMat::<Rational>::zeros(7, 9);
            for (i, j, v) in entries {
                s.add_to(i, j, Rational::from_i64(v));
            }
            prop_assert_eq!(s.rank(), s.to_dense().rank());
        }
    }
}
