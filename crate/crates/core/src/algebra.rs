//! Rings of partially symmetric polynomials and the merge maps between them.
//!
//! `InvariantRing::new(&[k1, .., kn])` is the polynomial ring on the elementary
//! symmetric functions `e_l^(i)` (`1 <= l <= k_i`) of each colour block. A
//! coarsening merges consecutive blocks; the finer ring is then a free module
//! over the coarser one with an explicit Schur-polynomial basis.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::field::Field;
use crate::linalg::Mat;
use crate::poly::{Mono, Poly, PolyRing};

/// `C[e_l^(i)]`, one block of elementary symmetric functions per colour.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InvariantRing {
    colours: Vec<u32>,
    offsets: Vec<usize>,
    ring: PolyRing,
}

impl InvariantRing {
    pub fn new(colours: &[u32]) -> Self {
        let mut offsets = Vec::with_capacity(colours.len() + 1);
        let mut weights = Vec::new();
        let mut names = Vec::new();
        let single = colours.len() == 1;
        let mut off = 0;
        for (i, &k) in colours.iter().enumerate() {
            offsets.push(off);
            for l in 1..=k {
                weights.push(l);
                names.push(if single {
                    format!("e{l}")
                } else {
                    format!("e{l}_{}", i + 1)
                });
            }
            off += k as usize;
        }
        offsets.push(off);
        InvariantRing {
            colours: colours.to_vec(),
            offsets,
            ring: PolyRing::new(weights, names),
        }
    }

    pub fn colours(&self) -> &[u32] {
        &self.colours
    }

    pub fn poly_ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn nblocks(&self) -> usize {
        self.colours.len()
    }

    /// Index of the variable `e_l` in block `block` (`1 <= l <= k_block`).
    pub fn var_index(&self, block: usize, l: u32) -> usize {
        assert!(l >= 1 && l <= self.colours[block]);
        self.offsets[block] + (l as usize - 1)
    }

    /// Block containing variable `v`, together with its weight.
    pub fn var_block(&self, v: usize) -> (usize, u32) {
        let b = (0..self.nblocks())
            .find(|&b| v < self.offsets[b + 1])
            .expect("variable out of range");
        (b, (v - self.offsets[b]) as u32 + 1)
    }

    /// `e_l` of a block, with `e_0 = 1` and `e_l = 0` beyond the colour.
    pub fn e<F: Field>(&self, block: usize, l: u32) -> Poly<F> {
        if l == 0 {
            Poly::one()
        } else if l > self.colours[block] {
            Poly::zero()
        } else {
            Poly::var(self.var_index(block, l))
        }
    }

    /// Dimensions of the graded pieces in q-degrees `0, 2, .., 2(len-1)`.
    pub fn hilbert_counts(&self, len: usize) -> Vec<u64> {
        self.ring.hilbert_counts(len)
    }

    pub fn degree(&self, m: &Mono) -> i64 {
        self.ring.degree(m)
    }

    pub fn monomials_of_degree(&self, deg: i64) -> Vec<Mono> {
        self.ring.monomials_of_degree(deg)
    }

    /// The x-variable ring, one variable per unit of total colour.
    pub fn x_ring(&self) -> PolyRing {
        let n: u32 = self.colours.iter().sum();
        PolyRing::new(
            vec![1; n as usize],
            (1..=n).map(|i| format!("x{i}")).collect(),
        )
    }

    /// Expand into x-variables: block `i` uses its own consecutive run of
    /// `k_i` variables and `e_l^(i)` becomes their `l`-th elementary symmetric
    /// polynomial.
    pub fn expand_x<F: Field>(&self, f: &Poly<F>) -> Poly<F> {
        let mut images = Vec::with_capacity(self.nvars());
        for (b, &k) in self.colours.iter().enumerate() {
            let xs: Vec<usize> = (self.offsets[b]..self.offsets[b] + k as usize).collect();
            for l in 1..=k {
                images.push(elementary_in(&xs, l));
            }
        }
        f.substitute(&images)
    }

    pub fn format<F: Field>(&self, f: &Poly<F>) -> String {
        f.format(&self.ring)
    }
}

/// `l`-th elementary symmetric polynomial in the given x-variables.
pub fn elementary_in<F: Field>(vars: &[usize], l: u32) -> Poly<F> {
    let mut es = vec![Poly::<F>::one()];
    for &v in vars {
        let x = Poly::var(v);
        let mut next = es.clone();
        next.push(Poly::zero());
        for j in 1..next.len() {
            let t = es[j - 1].mul(&x);
            next[j].add_assign(&t);
        }
        es = next;
    }
    es.get(l as usize).cloned().unwrap_or_else(Poly::zero)
}

/// A grading-preserving ring homomorphism given by generator images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingMap<F: Field> {
    pub source: InvariantRing,
    pub target: InvariantRing,
    pub images: Vec<Poly<F>>,
}

impl<F: Field> RingMap<F> {
    pub fn identity(r: &InvariantRing) -> Self {
        RingMap {
            source: r.clone(),
            target: r.clone(),
            images: (0..r.nvars()).map(Poly::var).collect(),
        }
    }

    pub fn apply(&self, f: &Poly<F>) -> Poly<F> {
        f.substitute(&self.images)
    }

    /// `other` after `self`.
    pub fn then(&self, other: &RingMap<F>) -> RingMap<F> {
        assert_eq!(self.target, other.source);
        RingMap {
            source: self.source.clone(),
            target: other.target.clone(),
            images: self.images.iter().map(|p| other.apply(p)).collect(),
        }
    }

    pub fn is_graded(&self) -> bool {
        self.images.iter().enumerate().all(|(v, p)| {
            let (_, w) = self.source.var_block(v);
            p.is_homogeneous_of(self.target.poly_ring(), 2 * w as i64)
        })
    }
}

/// Coarsening `A_{coarse} -> A_{fine}` merging consecutive runs of blocks.
/// `groups[g]` is the number of fine blocks merged into coarse block `g`.
pub fn coarsening<F: Field>(fine: &[u32], groups: &[usize]) -> RingMap<F> {
    assert_eq!(
        groups.iter().sum::<usize>(),
        fine.len(),
        "groups must cover the fine blocks"
    );
    let target = InvariantRing::new(fine);
    let mut coarse = Vec::with_capacity(groups.len());
    let mut images = Vec::new();
    let mut start = 0;
    for &len in groups {
        let blocks = start..start + len;
        let total: u32 = fine[blocks.clone()].iter().sum();
        coarse.push(total);
        // product of the generating series 1 + e_1 t + e_2 t^2 + ...
        let mut series = vec![Poly::<F>::one()];
        for b in blocks {
            let k = fine[b];
            let mut next = vec![Poly::zero(); series.len() + k as usize];
            for (i, s) in series.iter().enumerate() {
                for l in 0..=k {
                    let t = s.mul(&target.e(b, l));
                    next[i + l as usize].add_assign(&t);
                }
            }
            series = next;
        }
        images.extend(series.into_iter().skip(1).take(total as usize));
        start += len;
    }
    RingMap {
        source: InvariantRing::new(&coarse),
        target,
        images,
    }
}

/// The inclusion `A_{a+b} -> A_{a,b}`.
pub fn merge_map<F: Field>(a: u32, b: u32) -> RingMap<F> {
    coarsening(&[a, b], &[2])
}

/// Partitions in the `rows x cols` box, in order of size then reverse lex.
pub fn box_partitions(rows: u32, cols: u32) -> Vec<Vec<u32>> {
    fn rec(rows: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        out.push(cur.clone());
        if cur.len() as u32 == rows {
            return;
        }
        for p in 1..=max {
            cur.push(p);
            rec(rows, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(rows, cols, &mut Vec::new(), &mut out);
    out.sort_by(|x, y| {
        let sx: u32 = x.iter().sum();
        let sy: u32 = y.iter().sum();
        sx.cmp(&sy).then_with(|| y.cmp(x))
    });
    out
}

pub fn conjugate(lambda: &[u32]) -> Vec<u32> {
    let max = lambda.first().copied().unwrap_or(0);
    (1..=max)
        .map(|j| lambda.iter().filter(|&&p| p >= j).count() as u32)
        .collect()
}

fn det<F: Field>(m: &[Vec<Poly<F>>]) -> Poly<F> {
    match m.len() {
        0 => Poly::one(),
        1 => m[0][0].clone(),
        n => {
            let mut acc = Poly::zero();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Poly<F>>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != j)
                            .map(|(_, p)| p.clone())
                            .collect()
                    })
                    .collect();
                let t = m[0][j].mul(&det(&minor));
                if j % 2 == 0 {
                    acc.add_assign(&t);
                } else {
                    acc.sub_assign(&t);
                }
            }
            acc
        }
    }
}

/// Schur polynomial `s_lambda` in the elementary symmetric functions of one
/// block, via the dual Jacobi-Trudi determinant `det(e_{lambda'_i - i + j})`.
pub fn schur_in_block<F: Field>(ring: &InvariantRing, block: usize, lambda: &[u32]) -> Poly<F> {
    let conj = conjugate(lambda);
    let n = conj.len();
    let m: Vec<Vec<Poly<F>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let idx = conj[i] as i64 - i as i64 + j as i64;
                    if idx < 0 {
                        Poly::zero()
                    } else {
                        ring.e(block, idx as u32)
                    }
                })
                .collect()
        })
        .collect();
    det(&m)
}

/// Basis of `A_{a,b}` over `A_{a+b}`: Schur polynomials of the first block
/// indexed by partitions in the `a x b` box.
pub fn free_basis<F: Field>(a: u32, b: u32) -> Vec<Poly<F>> {
    let ring = InvariantRing::new(&[a, b]);
    box_partitions(a, b)
        .iter()
        .map(|l| schur_in_block(&ring, 0, l))
        .collect()
}

/// Basis of `A_{c_1,..,c_m}` over `A_{c_1+..+c_m}`, built by merging one
/// block at a time.
pub fn group_basis<F: Field>(colours: &[u32]) -> Vec<Poly<F>> {
    let m = colours.len();
    if m <= 1 {
        return vec![Poly::one()];
    }
    let prev = group_basis::<F>(&colours[..m - 1]);
    let head: u32 = colours[..m - 1].iter().sum();
    // A_{head, c_m} -> A_{c_1..c_m}: merge the first m-1 blocks, keep the last
    let up: RingMap<F> = coarsening(colours, &[m - 1, 1]);
    let top = free_basis::<F>(head, colours[m - 1]);
    let lifted: Vec<Poly<F>> = top.iter().map(|p| up.apply(p)).collect();
    let mut out = Vec::with_capacity(prev.len() * lifted.len());
    for t in &lifted {
        for p in &prev {
            out.push(p.mul(t));
        }
    }
    out
}

struct DegreeSolver<F: Field> {
    /// Fine monomials of this degree, by position.
    index: HashMap<Mono, usize>,
    /// Unknowns: (basis element, coarse monomial).
    unknowns: Vec<(usize, Mono)>,
    inverse: Mat<F>,
}

/// Decomposition of the finer ring of a coarsening over the coarser one.
pub struct Decomposer<F: Field> {
    pub map: RingMap<F>,
    pub basis: Vec<Poly<F>>,
    pub basis_degrees: Vec<i64>,
    cache: Mutex<HashMap<i64, Arc<DegreeSolver<F>>>>,
}

impl<F: Field> Decomposer<F> {
    pub fn new(fine: &[u32], groups: &[usize]) -> Self {
        let map = coarsening::<F>(fine, groups);
        let mut basis = vec![Poly::<F>::one()];
        let mut start = 0;
        let mut off = 0;
        for &len in groups {
            let sub = &fine[start..start + len];
            let nv: usize = sub.iter().sum::<u32>() as usize;
            let gb = group_basis::<F>(sub);
            let mut next = Vec::with_capacity(basis.len() * gb.len());
            for g in &gb {
                let g = g.shifted(off, nv);
                for b in &basis {
                    next.push(b.mul(&g));
                }
            }
            basis = next;
            start += len;
            off += nv;
        }
        let fr = map.target.poly_ring().clone();
        let basis_degrees = basis
            .iter()
            .map(|b| b.homogeneous_degree(&fr).unwrap_or(0))
            .collect();
        Decomposer {
            map,
            basis,
            basis_degrees,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    fn solver(&self, deg: i64) -> Arc<DegreeSolver<F>> {
        if let Some(s) = self.cache.lock().unwrap().get(&deg) {
            return s.clone();
        }
        let fine = &self.map.target;
        let coarse = &self.map.source;
        let mons = fine.monomials_of_degree(deg);
        let index: HashMap<Mono, usize> = mons.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let mut unknowns = Vec::new();
        let mut cols: Vec<Poly<F>> = Vec::new();
        for (i, b) in self.basis.iter().enumerate() {
            for cm in coarse.monomials_of_degree(deg - self.basis_degrees[i]) {
                let img = self.map.apply(&Poly::monomial(cm, F::one())).mul(b);
                unknowns.push((i, cm));
                cols.push(img);
            }
        }
        assert_eq!(
            cols.len(),
            mons.len(),
            "coarsening is not free of the expected rank"
        );
        let n = mons.len();
        let mut m = Mat::zeros(n, n);
        for (j, c) in cols.iter().enumerate() {
            for (mono, v) in &c.terms {
                m.set(index[mono], j, v.clone());
            }
        }
        let inverse = m.inverse().expect("basis is not free in this degree");
        let s = Arc::new(DegreeSolver {
            index,
            unknowns,
            inverse,
        });
        self.cache.lock().unwrap().insert(deg, s.clone());
        s
    }

    /// Coefficients `c_i` in the coarse ring with `f = sum_i map(c_i) * basis_i`.
    pub fn decompose(&self, f: &Poly<F>) -> Vec<Poly<F>> {
        let mut out = vec![Poly::zero(); self.basis.len()];
        let fr = self.map.target.poly_ring();
        let mut by_deg: HashMap<i64, Vec<(Mono, F)>> = HashMap::new();
        for (m, c) in &f.terms {
            by_deg
                .entry(fr.degree(m))
                .or_default()
                .push((*m, c.clone()));
        }
        for (d, terms) in by_deg {
            let s = self.solver(d);
            let mut v = vec![F::zero(); s.index.len()];
            for (m, c) in terms {
                v[s.index[&m]] = c;
            }
            for (j, (bi, cm)) in s.unknowns.iter().enumerate() {
                let mut acc = F::zero();
                for (k, vk) in v.iter().enumerate() {
                    if !vk.is_zero() {
                        acc += s.inverse.get(j, k).clone() * vk.clone();
                    }
                }
                out[*bi].add_term(*cm, acc);
            }
        }
        out
    }

    /// Inverse of `decompose`.
    pub fn recompose(&self, coeffs: &[Poly<F>]) -> Poly<F> {
        let mut acc = Poly::zero();
        for (c, b) in coeffs.iter().zip(&self.basis) {
            acc.add_assign(&self.map.apply(c).mul(b));
        }
        acc
    }
}

/// Express a symmetric polynomial in `k` x-variables (indices `0..k`) through
/// the elementary symmetric functions of `A_k`.
pub fn symmetric_to_elementary<F: Field>(f: &Poly<F>, k: usize) -> Poly<F> {
    let ring = InvariantRing::new(&[k as u32]);
    let xs: Vec<usize> = (0..k).collect();
    let es: Vec<Poly<F>> = (1..=k as u32).map(|l| elementary_in(&xs, l)).collect();
    let mut rest = f.clone();
    let mut out = Poly::zero();
    while let Some((lead, c)) = rest.terms.iter().next_back().map(|(m, c)| (*m, c.clone())) {
        // lexicographic leading exponent is a partition for symmetric input
        let a: Vec<u32> = (0..k).map(|i| lead.exp(i)).collect();
        assert!(a.windows(2).all(|w| w[0] >= w[1]), "input is not symmetric");
        let mut exps = vec![0u32; k];
        for j in 0..k {
            exps[j] = a[j] - if j + 1 < k { a[j + 1] } else { 0 };
        }
        let mut t = Poly::constant(c.clone());
        for (j, &e) in exps.iter().enumerate() {
            t = t.mul(&es[j].pow(e));
        }
        rest.sub_assign(&t);
        out.add_term(Mono::from_exps(&exps), c);
        debug_assert!(out.is_homogeneous_of(
            ring.poly_ring(),
            out.homogeneous_degree(ring.poly_ring()).unwrap_or(0)
        ));
    }
    out
}

/// `p_{N,j} = sum_i x_i^N de_j/dx_i` in the elementary basis of `A_k`, for
/// `j = 1..k`.
pub fn descend_derivation<F: Field>(n: u32, k: u32) -> Vec<Poly<F>> {
    let xs: Vec<usize> = (0..k as usize).collect();
    (1..=k)
        .map(|j| {
            let e = elementary_in::<F>(&xs, j);
            let mut s = Poly::zero();
            for &i in &xs {
                s.add_assign(&e.derivative(i).mul(&Poly::var(i).pow(n)));
            }
            symmetric_to_elementary(&s, k as usize)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;

    type P = Poly<Rational>;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    #[test]
    fn merge_one_one() {
        let m = merge_map::<Rational>(1, 1);
        let x = P::var(0);
        let y = P::var(1);
        assert_eq!(m.images, vec![x.add(&y), x.mul(&y)]);
        assert!(m.is_graded());
    }

    #[test]
    fn merge_with_empty_block_is_identity() {
        let m = merge_map::<Rational>(3, 0);
        assert_eq!(m.images, (0..3).map(P::var).collect::<Vec<_>>());
    }

    #[test]
    fn merge_two_one() {
        let m = merge_map::<Rational>(2, 1);
        let (e1, e2, f1) = (P::var(0), P::var(1), P::var(2));
        assert_eq!(m.images[1], e2.add(&e1.mul(&f1)));
        assert_eq!(m.images[2], e2.mul(&f1));
    }

    #[test]
    fn free_basis_degrees() {
        let r = InvariantRing::new(&[2, 1]);
        let b = free_basis::<Rational>(2, 1);
        let degs: Vec<i64> = b
            .iter()
            .map(|p| p.homogeneous_degree(r.poly_ring()).unwrap())
            .collect();
        assert_eq!(degs, vec![0, 2, 4]);
        assert_eq!(free_basis::<Rational>(1, 1), vec![P::one(), P::var(0)]);
        assert_eq!(free_basis::<Rational>(1, 0), vec![P::one()]);
    }

    #[test]
    fn decomposition_roundtrip() {
        let d = Decomposer::<Rational>::new(&[1, 2, 1], &[2, 1]);
        assert_eq!(d.rank(), 3);
        let f = P::var(0)
            .pow(3)
            .add(&P::var(2).mul(&P::var(3)).scale(&q(5)));
        let c = d.decompose(&f);
        assert_eq!(d.recompose(&c), f);
    }

    #[test]
    fn derivation_examples() {
        let p = descend_derivation::<Rational>(1, 2);
        assert_eq!(p, vec![P::var(0), P::var(1).scale(&q(2))]);
        let p = descend_derivation::<Rational>(2, 2);
        assert_eq!(p[0], P::var(0).pow(2).sub(&P::var(1).scale(&q(2))));
        assert_eq!(p[1], P::var(0).mul(&P::var(1)));
        assert_eq!(descend_derivation::<Rational>(4, 1), vec![P::var(0).pow(4)]);
    }
}
