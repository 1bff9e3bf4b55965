//! The differentials `d_N` on Hochschild homology and the doubly graded
//! homology `H_N`.
//!
//! The class `gamma` in `HH^1(A_k)` is the derivation `sum_i x_i^N d/dx_i`,
//! which sends `e_j` to `p_{N,j}`. On the Koszul model it acts by contracting
//! `theta_j` against `p_{N,j}`.

use std::collections::BTreeMap;

use crate::algebra::{descend_derivation, InvariantRing};
use crate::field::Field;
use crate::linalg::Mat;
use crate::poly::Poly;
use crate::series::Laurent;
use crate::trace::{TraceModel, TracedComplex};

/// `p_{N,j}` for every block, in the block's own variables `e_1..e_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct KoszulCocycle<F: Field> {
    pub n: u32,
    pub blocks: Vec<Vec<Poly<F>>>,
}

/// The cocycle `gamma_k` for colours `k`.
pub fn gamma<F: Field>(k: &[u32], n: u32) -> KoszulCocycle<F> {
    assert!(n >= 1, "N must be positive");
    KoszulCocycle {
        n,
        blocks: k.iter().map(|&l| descend_derivation(n, l)).collect(),
    }
}

impl<F: Field> KoszulCocycle<F> {
    /// q-degree added by `d_N` in natural units.
    pub fn degree_shift(&self) -> i64 {
        2 * self.n as i64 - 2
    }

    /// One polynomial per traced pair, written in the left ring.
    pub fn for_model(&self, ring: &InvariantRing, model: &TraceModel) -> Vec<Poly<F>> {
        model
            .pairs
            .iter()
            .map(|&(lv, _)| {
                let (block, w) = ring.var_block(lv);
                let off = ring.var_index(block, 1);
                self.blocks[block][w as usize - 1].shifted(off, ring.colours()[block] as usize)
            })
            .collect()
    }
}

/// Dimensions of `H_N` keyed by `(h, Q)`, where `h = t - p` and
/// `Q = D + (2N - 2) p` collapse the a-grading.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HnTable {
    pub n: u32,
    pub dims: BTreeMap<(i64, i64), usize>,
    /// The top `margin` degrees of the computed window were all zero.
    pub settled: bool,
}

impl HnTable {
    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    /// `sum dim q^{-Q} t^{-h}`.
    pub fn poincare(&self) -> Laurent {
        let mut l = Laurent::zero();
        for (&(h, q), &d) in &self.dims {
            l.add_term((-q, 0, -h), d as i64);
        }
        l
    }

    /// Graded Euler characteristic `sum (-1)^h dim q^{-Q}`.
    pub fn euler(&self) -> Laurent {
        let mut l = Laurent::zero();
        for (&(h, q), &d) in &self.dims {
            l.add_term(
                (-q, 0, 0),
                if h.rem_euclid(2) == 0 {
                    d as i64
                } else {
                    -(d as i64)
                },
            );
        }
        l
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DifferentialError {
    #[error("d_N does not square to zero at t = {0}, p = {1}, degree {2}")]
    NotSquareZero(i64, usize, i64),
    #[error("d_N does not commute with the differential at t = {0}, p = {1}, degree {2}")]
    NotCommuting(i64, usize, i64),
}

/// Applies `d_N` to a traced complex.
pub struct DnBicomplex<'a, 'b, F: Field> {
    pub traced: &'b mut TracedComplex<'a, F>,
    pub gamma: KoszulCocycle<F>,
    polys: Vec<Poly<F>>,
}

impl<'a, 'b, F: Field> DnBicomplex<'a, 'b, F> {
    pub fn new(traced: &'b mut TracedComplex<'a, F>, n: u32) -> Self {
        let ring = traced.complex.left.clone();
        let gamma = gamma::<F>(ring.colours(), n);
        let polys = gamma.for_model(&ring, &traced.model);
        DnBicomplex {
            traced,
            gamma,
            polys,
        }
    }

    /// `d_N : HH_p(C^t)_D -> HH_{p-1}(C^t)_{D + 2N - 2}`.
    pub fn d_n(&mut self, t: i64, p: usize, deg: i64) -> Mat<F> {
        let s = self.gamma.degree_shift();
        self.traced.induced_contraction(t, p, deg, &self.polys, s)
    }

    /// Exact checks of `d_N^2 = 0` and `d_N d = d d_N` in degrees `lo..=hi`.
    pub fn check(&mut self, lo: i64, hi: i64) -> Result<(), DifferentialError> {
        let s = self.gamma.degree_shift();
        let np = self.traced.model.pairs.len();
        let ts: Vec<i64> = self.traced.complex.terms.keys().copied().collect();
        for deg in lo..=hi {
            for p in 1..=np {
                for &t in &ts {
                    let a = self.d_n(t, p, deg);
                    if p >= 2 {
                        let b = self.d_n(t, p - 1, deg + s);
                        if !b.mul(&a).is_zero() {
                            return Err(DifferentialError::NotSquareZero(t, p, deg));
                        }
                    }
                    let lhs = self.traced.induced_d(t, p - 1, deg + s).mul(&a);
                    let rhs = self
                        .d_n(t + 1, p, deg)
                        .mul(&self.traced.induced_d(t, p, deg));
                    if lhs != rhs {
                        return Err(DifferentialError::NotCommuting(t, p, deg));
                    }
                }
            }
        }
        Ok(())
    }

    /// Homology of `d + (-1)^t d_N` in collapsed degree `q`.
    pub fn homology_at(&mut self, q: i64) -> BTreeMap<i64, usize> {
        let s = self.gamma.degree_shift();
        let np = self.traced.model.pairs.len();
        let ts: Vec<i64> = self.traced.complex.terms.keys().copied().collect();
        // chain spaces by h, listed as (t, p, D, dim)
        let mut chains: BTreeMap<i64, Vec<(i64, usize, i64, usize)>> = BTreeMap::new();
        for &t in &ts {
            for p in 0..=np {
                let deg = q - s * p as i64;
                let dim = self.traced.hh(t, p, deg).dim();
                if dim > 0 {
                    chains
                        .entry(t - p as i64)
                        .or_default()
                        .push((t, p, deg, dim));
                }
            }
        }
        let mut ranks: BTreeMap<i64, usize> = BTreeMap::new();
        let hs: Vec<i64> = chains.keys().copied().collect();
        for &h in &hs {
            let Some(next) = chains.get(&(h + 1)).cloned() else {
                continue;
            };
            let here = chains[&h].clone();
            let rows: usize = next.iter().map(|x| x.3).sum();
            let cols: usize = here.iter().map(|x| x.3).sum();
            let mut m: Mat<F> = Mat::zeros(rows, cols);
            let mut c0 = 0;
            for &(t, p, deg, dim) in &here {
                let mut r0 = 0;
                for &(t2, p2, deg2, dim2) in &next {
                    let blk = if t2 == t + 1 && p2 == p && deg2 == deg {
                        Some(self.traced.induced_d(t, p, deg))
                    } else if t2 == t && p >= 1 && p2 == p - 1 && deg2 == deg + s {
                        let b = self.d_n(t, p, deg);
                        Some(if t.rem_euclid(2) == 1 {
                            b.scale(&(-F::one()))
                        } else {
                            b
                        })
                    } else {
                        None
                    };
                    if let Some(b) = blk {
                        for i in 0..dim2 {
                            for j in 0..dim {
                                m.set(r0 + i, c0 + j, b.get(i, j).clone());
                            }
                        }
                    }
                    r0 += dim2;
                }
                c0 += dim;
            }
            ranks.insert(h, m.rank());
        }
        let mut out = BTreeMap::new();
        for &h in &hs {
            let dim: usize = chains[&h].iter().map(|x| x.3).sum();
            let hd = dim
                - ranks.get(&h).copied().unwrap_or(0)
                - ranks.get(&(h - 1)).copied().unwrap_or(0);
            if hd > 0 {
                out.insert(h, hd);
            }
        }
        out
    }

    /// `H_N` in collapsed degrees from the lowest chain degree upwards. Stops
    /// once `margin` consecutive degrees vanish, or after `max_span`.
    pub fn table(&mut self, margin: i64, max_span: i64) -> HnTable {
        let lo = self.traced.min_degree();
        let mut out = HnTable {
            n: self.gamma.n,
            ..Default::default()
        };
        let mut quiet = 0;
        for q in lo..=lo + max_span {
            let h = self.homology_at(q);
            if h.is_empty() {
                quiet += 1;
                if quiet >= margin {
                    out.settled = true;
                    break;
                }
            } else {
                quiet = 0;
                for (hh, d) in h {
                    out.dims.insert((hh, q), d);
                }
            }
        }
        out
    }
}

/// Default vanishing margin for `H_N` tables over `A_k`.
pub fn default_margin(ring: &InvariantRing, n: u32) -> i64 {
    let top: i64 = ring
        .colours()
        .iter()
        .map(|&l| 2 * l as i64)
        .max()
        .unwrap_or(2);
    2 * (2 * n as i64 + top) + 4
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::Complex;
    use crate::field::Rational;
    use crate::kernels::kernel_identity;

    #[test]
    fn gamma_values() {
        let g = gamma::<Rational>(&[1], 3);
        assert_eq!(g.blocks[0], vec![Poly::var(0).pow(3)]);
        let g = gamma::<Rational>(&[2], 1);
        assert_eq!(
            g.blocks[0],
            vec![Poly::var(0), Poly::var(1).scale(&Rational::from_i64(2))]
        );
    }

    #[test]
    fn unknot_one() {
        let c = Complex::single(kernel_identity::<Rational>(&[1]));
        for n in 1..=4 {
            let mut tc = TracedComplex::full(&c);
            let mut b = DnBicomplex::new(&mut tc, n);
            b.check(0, 12).unwrap();
            let t = b.table(default_margin(&c.left, n), 80);
            assert!(t.settled);
            assert_eq!(t.total_dim(), n as usize);
        }
    }
}
