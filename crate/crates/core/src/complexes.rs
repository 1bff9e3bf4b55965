//! Bounded cochain complexes of kernels.
//!
//! Differentials raise the cohomological degree. Term `t` is a list of
//! summands; `d^t` is a block matrix whose block `[i][j]` maps summand `i`
//! of degree `t` to summand `j` of degree `t + 1` (row convention, as for
//! bimodule maps).

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::InvariantRing;
use crate::bimodule::{convolve, tensor_map_left, tensor_map_right, Bimodule, BimoduleError};
use crate::field::Field;
use crate::polymat::PolyMatrix;

pub type Block<F> = Option<PolyMatrix<F>>;

#[derive(Clone, Debug)]
pub struct Complex<F: Field> {
    pub left: InvariantRing,
    pub right: InvariantRing,
    pub terms: BTreeMap<i64, Vec<Arc<Bimodule<F>>>>,
    pub diffs: BTreeMap<i64, Vec<Vec<Block<F>>>>,
}

impl<F: Field> Complex<F> {
    pub fn zero(left: &InvariantRing, right: &InvariantRing) -> Self {
        Complex {
            left: left.clone(),
            right: right.clone(),
            terms: BTreeMap::new(),
            diffs: BTreeMap::new(),
        }
    }

    /// A single kernel in cohomological degree 0.
    pub fn single(k: Bimodule<F>) -> Self {
        let mut c = Complex::zero(&k.left, &k.right);
        if !k.is_zero() {
            c.terms.insert(0, vec![Arc::new(k)]);
        }
        c
    }

    /// Complex with one summand per degree and the given maps between
    /// consecutive degrees (`maps[t]` goes from degree `t` to `t + 1`).
    pub fn from_chain(terms: Vec<(i64, Bimodule<F>)>, maps: Vec<(i64, PolyMatrix<F>)>) -> Self {
        let first = &terms[0].1;
        let mut c = Complex::zero(&first.left, &first.right);
        for (t, k) in terms {
            c.terms.entry(t).or_default().push(Arc::new(k));
        }
        for (t, m) in maps {
            c.diffs.insert(t, vec![vec![Some(m)]]);
        }
        c.normalize();
        c
    }

    pub fn summands(&self, t: i64) -> &[Arc<Bimodule<F>>] {
        self.terms.get(&t).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn block(&self, t: i64, i: usize, j: usize) -> Option<&PolyMatrix<F>> {
        self.diffs
            .get(&t)
            .and_then(|d| d.get(i))
            .and_then(|r| r.get(j))
            .and_then(|b| b.as_ref())
    }

    pub fn set_block(&mut self, t: i64, i: usize, j: usize, m: Option<PolyMatrix<F>>) {
        let (a, b) = (self.summands(t).len(), self.summands(t + 1).len());
        let d = self
            .diffs
            .entry(t)
            .or_insert_with(|| vec![vec![None; b]; a]);
        d[i][j] = m.filter(|m| !m.is_zero());
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn num_summands(&self) -> usize {
        self.terms.values().map(|v| v.len()).sum()
    }

    /// Summand counts per degree, lowest degree first.
    pub fn term_counts(&self) -> Vec<(i64, usize)> {
        self.terms.iter().map(|(t, v)| (*t, v.len())).collect()
    }

    /// Drop empty degrees and make every differential block matrix match
    /// the term shapes.
    pub fn normalize(&mut self) {
        self.terms.retain(|_, v| !v.is_empty());
        let keys: Vec<i64> = self.diffs.keys().copied().collect();
        for t in keys {
            let (a, b) = (self.summands(t).len(), self.summands(t + 1).len());
            let d = self.diffs.get_mut(&t).unwrap();
            if a == 0 || b == 0 {
                self.diffs.remove(&t);
                continue;
            }
            d.resize_with(a, || vec![None; b]);
            for row in d.iter_mut() {
                row.resize_with(b, || None);
                for blk in row.iter_mut() {
                    if blk.as_ref().is_some_and(|m| m.is_zero()) {
                        *blk = None;
                    }
                }
            }
            if d.iter().all(|r| r.iter().all(|b| b.is_none())) {
                self.diffs.remove(&t);
            }
        }
    }

    /// `d^{t+1} . d^t` vanishes everywhere.
    pub fn check_d_squared(&self) -> bool {
        for (&t, d) in &self.diffs {
            let Some(d2) = self.diffs.get(&(t + 1)) else {
                continue;
            };
            let (a, c) = (self.summands(t).len(), self.summands(t + 2).len());
            for i in 0..a {
                for k in 0..c {
                    let mut acc: Option<PolyMatrix<F>> = None;
                    for (j, row2) in d2.iter().enumerate() {
                        if let (Some(x), Some(y)) = (&d[i][j], &row2[k]) {
                            let p = x.mul(y);
                            acc = Some(match acc {
                                None => p,
                                Some(s) => s.add(&p),
                            });
                        }
                    }
                    if acc.is_some_and(|m| !m.is_zero()) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Every block is a degree-0 bimodule map.
    pub fn check_maps(&self) -> bool {
        for (&t, d) in &self.diffs {
            for (i, row) in d.iter().enumerate() {
                for (j, b) in row.iter().enumerate() {
                    if let Some(m) = b {
                        if !self.summands(t)[i].is_map_to(&self.summands(t + 1)[j], m, 0) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Internal grading shift `{s}` of every term.
    pub fn q_shifted(&self, s: i64) -> Self {
        let mut c = self.clone();
        for v in c.terms.values_mut() {
            for k in v.iter_mut() {
                *k = Arc::new(k.shifted(s));
            }
        }
        c
    }

    /// `C[m]`, with `C[m]^t = C^{t+m}`.
    pub fn t_shifted(&self, m: i64) -> Self {
        Complex {
            left: self.left.clone(),
            right: self.right.clone(),
            terms: self.terms.iter().map(|(t, v)| (t - m, v.clone())).collect(),
            diffs: self.diffs.iter().map(|(t, v)| (t - m, v.clone())).collect(),
        }
    }

    /// Identity strands `before` and `after` placed on either side.
    pub fn embedded(&self, before: &[u32], after: &[u32]) -> Self {
        let nb = InvariantRing::new(before).nvars();
        let nm = self.left.nvars();
        let cat = |mid: &[u32]| InvariantRing::new(&[before, mid, after].concat());
        Complex {
            left: cat(self.left.colours()),
            right: cat(self.right.colours()),
            terms: self
                .terms
                .iter()
                .map(|(t, v)| {
                    (
                        *t,
                        v.iter()
                            .map(|m| Arc::new(m.embedded(before, after)))
                            .collect(),
                    )
                })
                .collect(),
            diffs: self
                .diffs
                .iter()
                .map(|(t, d)| {
                    let d = d
                        .iter()
                        .map(|row| {
                            row.iter()
                                .map(|b| b.as_ref().map(|m| m.map_entries(|p| p.shifted(nb, nm))))
                                .collect()
                        })
                        .collect();
                    (*t, d)
                })
                .collect(),
        }
    }

    /// Brutal truncation keeping degrees `>= t_min`.
    pub fn truncated_below(&self, t_min: i64) -> Self {
        Complex {
            left: self.left.clone(),
            right: self.right.clone(),
            terms: self
                .terms
                .range(t_min..)
                .map(|(t, v)| (*t, v.clone()))
                .collect(),
            diffs: self
                .diffs
                .range(t_min..)
                .map(|(t, v)| (*t, v.clone()))
                .collect(),
        }
    }

    /// Alternating sum of graded dimensions, `sum_t (-1)^t dim C^t_D`, for
    /// internal degrees `lo..=hi`.
    pub fn euler_dims(&self, lo: i64, hi: i64) -> Vec<i64> {
        let mut out = vec![0i64; (hi - lo + 1).max(0) as usize];
        for (t, v) in &self.terms {
            let sign = if t.rem_euclid(2) == 0 { 1 } else { -1 };
            for k in v {
                for (o, d) in out.iter_mut().zip(k.graded_dims(lo, hi)) {
                    *o += sign * d as i64;
                }
            }
        }
        out
    }

    /// Sorted list of `(t, generator degrees)` of every summand.
    pub fn signature(&self) -> Vec<(i64, Vec<i64>)> {
        let mut out: Vec<(i64, Vec<i64>)> = Vec::new();
        for (t, v) in &self.terms {
            for k in v {
                let mut d = k.degrees.clone();
                d.sort_unstable();
                out.push((*t, d));
            }
        }
        out.sort();
        out
    }
}

/// Total complex of `P (x) Q` (first `p`, then `q`), with differential
/// `d_P (x) 1 + (-1)^s 1 (x) d_Q` on `P^s (x) Q^u`.
pub fn tensor_complexes<F: Field>(
    p: &Complex<F>,
    q: &Complex<F>,
) -> Result<Complex<F>, BimoduleError> {
    if p.right != q.left {
        return Err(BimoduleError::RingMismatch(
            format!("{:?}", p.right.colours()),
            format!("{:?}", q.left.colours()),
        ));
    }
    let mut out = Complex::zero(&p.left, &q.right);
    // position of (s, i, u, j) inside its total degree
    let mut pos: BTreeMap<(i64, usize, i64, usize), usize> = BTreeMap::new();
    for (&s, ps) in &p.terms {
        for (i, a) in ps.iter().enumerate() {
            for (&u, qs) in &q.terms {
                for (j, b) in qs.iter().enumerate() {
                    let m = convolve(a, b)?;
                    if m.is_zero() {
                        continue;
                    }
                    let v = out.terms.entry(s + u).or_default();
                    pos.insert((s, i, u, j), v.len());
                    v.push(Arc::new(m));
                }
            }
        }
    }
    for (&(s, i, u, j), &from) in &pos {
        let t = s + u;
        if let Some(dp) = p.diffs.get(&s) {
            for (i2, blk) in dp[i].iter().enumerate() {
                if let (Some(m), Some(&to)) = (blk, pos.get(&(s + 1, i2, u, j))) {
                    let q_j = &q.terms[&u][j];
                    out.set_block(t, from, to, Some(tensor_map_left(m, q_j)));
                }
            }
        }
        if let Some(dq) = q.diffs.get(&u) {
            let p_i = &p.terms[&s][i];
            for (j2, blk) in dq[j].iter().enumerate() {
                if let (Some(m), Some(&to)) = (blk, pos.get(&(s, i, u + 1, j2))) {
                    let mut x = tensor_map_right(p_i, m);
                    if s.rem_euclid(2) == 1 {
                        x = x.neg();
                    }
                    out.set_block(t, from, to, Some(x));
                }
            }
        }
    }
    out.normalize();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;
    use crate::kernels::{kernel_identity, kernel_s};

    #[test]
    fn cone_of_s_to_identity() {
        let s = kernel_s::<Rational>(&[1, 1], 1);
        let id = kernel_identity::<Rational>(&[1, 1]);
        let h = s.hom_space(&id, 0);
        let c = Complex::from_chain(vec![(-1, s), (0, id.clone())], vec![(-1, h[0].clone())]);
        assert!(c.check_d_squared() && c.check_maps());
        let cc = tensor_complexes(&c, &c).unwrap();
        assert_eq!(cc.term_counts(), vec![(-2, 1), (-1, 2), (0, 1)]);
        assert!(cc.check_d_squared() && cc.check_maps());
        let one = Complex::single(id);
        assert_eq!(
            tensor_complexes(&c, &one).unwrap().signature(),
            c.signature()
        );
    }
}
