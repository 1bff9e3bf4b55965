//! Graded bimodules that are free of finite rank as left modules.
//!
//! A bimodule over `(A_L, A_R)` is stored as a free left `A_L`-module with
//! homogeneous generators `m_b` and, for every generator `y_j` of `A_R`, the
//! matrix `Y_j` over `A_L` with `m_b . y_j = sum_c Y_j[b][c] m_c`. Bimodule
//! maps are matrices `Phi` with `m_b -> sum_c Phi[b][c] n_c`; they compose
//! left to right (`f` then `g` is `F * G`).

use std::collections::HashMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::InvariantRing;
use crate::field::Field;
use crate::linalg::Mat;
use crate::poly::{Mono, Poly};
use crate::polymat::{MatrixEvaluator, PolyMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bimodule<F: Field> {
    pub left: InvariantRing,
    pub right: InvariantRing,
    /// Internal degree of each left generator.
    pub degrees: Vec<i64>,
    /// Right action, one matrix per variable of `right`.
    pub action: Vec<PolyMatrix<F>>,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BimoduleError {
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(String, String),
}

impl<F: Field> Bimodule<F> {
    pub fn zero(left: &InvariantRing, right: &InvariantRing) -> Self {
        Bimodule {
            left: left.clone(),
            right: right.clone(),
            degrees: Vec::new(),
            action: (0..right.nvars()).map(|_| PolyMatrix::zero(0, 0)).collect(),
            label: "0".into(),
        }
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_zero(&self) -> bool {
        self.degrees.is_empty()
    }

    /// The grading shift `{s}`: generators move to internal degree `-s`
    /// relative to where they were.
    pub fn shifted(&self, s: i64) -> Self {
        let mut m = self.clone();
        for d in &mut m.degrees {
            *d -= s;
        }
        m
    }

    /// `O_Delta (x) M (x) O_Delta`: identity strands coloured `before` and
    /// `after` placed on either side.
    pub fn embedded(&self, before: &[u32], after: &[u32]) -> Self {
        let cat = |mid: &[u32]| [before, mid, after].concat();
        let left = InvariantRing::new(&cat(self.left.colours()));
        let right = InvariantRing::new(&cat(self.right.colours()));
        let nb = InvariantRing::new(before).nvars();
        let nm = self.left.nvars();
        let r = self.rank();
        let scalar = |v: usize| PolyMatrix::identity(r).scale_poly(&Poly::var(v));
        let mut action: Vec<PolyMatrix<F>> = (0..nb).map(scalar).collect();
        action.extend(
            self.action
                .iter()
                .map(|a| a.map_entries(|p| p.shifted(nb, nm))),
        );
        action.extend((nb + nm..left.nvars()).map(scalar));
        Bimodule {
            left,
            right,
            degrees: self.degrees.clone(),
            action,
            label: self.label.clone(),
        }
    }

    pub fn with_label(mut self, l: impl Into<String>) -> Self {
        self.label = l.into();
        self
    }

    /// Dimension of each internal degree `lo..=hi` (as a vector space).
    pub fn graded_dims(&self, lo: i64, hi: i64) -> Vec<u64> {
        let len = (hi - lo + 1).max(0) as usize;
        let maxw = ((hi - self.degrees.iter().copied().min().unwrap_or(0)).max(0) / 2 + 1) as usize;
        let counts = self.left.hilbert_counts(maxw.max(1));
        let mut out = vec![0u64; len];
        for (i, d) in (lo..=hi).enumerate() {
            for &g in &self.degrees {
                let e = d - g;
                if e >= 0 && e % 2 == 0 && ((e / 2) as usize) < counts.len() {
                    out[i] += counts[(e / 2) as usize];
                }
            }
        }
        out
    }

    /// Checks that the right action matrices commute and are homogeneous.
    pub fn check(&self) -> bool {
        let lr = self.left.poly_ring();
        for (j, y) in self.action.iter().enumerate() {
            let w = 2 * self.right.var_block(j).1 as i64;
            for b in 0..self.rank() {
                for c in 0..self.rank() {
                    if !y
                        .get(b, c)
                        .is_homogeneous_of(lr, self.degrees[b] - self.degrees[c] + w)
                    {
                        return false;
                    }
                }
            }
            for z in &self.action[j + 1..] {
                if y.mul(z) != z.mul(y) {
                    return false;
                }
            }
        }
        true
    }

    /// Matrix of right multiplication by a polynomial in `right`.
    pub fn right_mult(&self, p: &Poly<F>) -> PolyMatrix<F> {
        MatrixEvaluator::new(&self.action, self.rank()).eval(p)
    }

    /// Lift a matrix `G` over `right` to the matrix over `left` with entries
    /// `((b, c), (b', d)) = G[c][d](Y)[b][b']`, i.e. `1 (x) g` on `self (x) Q`.
    pub fn lift(&self, g: &PolyMatrix<F>, ev: &mut MatrixEvaluator<'_, F>) -> PolyMatrix<F> {
        let r = self.rank();
        let mut out = PolyMatrix::zero(r * g.rows, r * g.cols);
        for c in 0..g.rows {
            for d in 0..g.cols {
                let e = g.get(c, d);
                if e.is_zero() {
                    continue;
                }
                let v = ev.eval(e);
                for b in 0..r {
                    for b2 in 0..r {
                        let x = v.get(b, b2);
                        if !x.is_zero() {
                            out.set(b * g.rows + c, b2 * g.cols + d, x.clone());
                        }
                    }
                }
            }
        }
        out
    }

    /// Basis of degree-`d` bimodule maps `self -> other`.
    pub fn hom_space(&self, other: &Bimodule<F>, d: i64) -> Vec<PolyMatrix<F>> {
        assert_eq!(self.left, other.left);
        assert_eq!(self.right, other.right);
        let (rm, rn) = (self.rank(), other.rank());
        let mut unknowns: Vec<(usize, usize, Mono)> = Vec::new();
        for b in 0..rm {
            for c in 0..rn {
                for m in self
                    .left
                    .monomials_of_degree(self.degrees[b] - other.degrees[c] + d)
                {
                    unknowns.push((b, c, m));
                }
            }
        }
        if unknowns.is_empty() {
            return Vec::new();
        }
        // equation (j, row, col, mono) of Y^M Phi - Phi Y^N
        let mut eq_index: HashMap<(usize, usize, usize, Mono), usize> = HashMap::new();
        let mut cols: Vec<Vec<(usize, F)>> = Vec::with_capacity(unknowns.len());
        for &(b, c, m) in &unknowns {
            let mut col: HashMap<usize, F> = HashMap::new();
            for (j, (ym, yn)) in self.action.iter().zip(&other.action).enumerate() {
                // (Y^M E_bc m)[a][c] = Y^M[a][b] m
                for a in 0..rm {
                    for (mm, cc) in &ym.get(a, b).terms {
                        let key = (j, a, c, mm.mul(&m));
                        let n = eq_index.len();
                        let idx = *eq_index.entry(key).or_insert(n);
                        *col.entry(idx).or_insert_with(F::zero) += cc.clone();
                    }
                }
                // (E_bc m Y^N)[b][e] = m Y^N[c][e]
                for e in 0..rn {
                    for (mm, cc) in &yn.get(c, e).terms {
                        let key = (j, b, e, mm.mul(&m));
                        let n = eq_index.len();
                        let idx = *eq_index.entry(key).or_insert(n);
                        *col.entry(idx).or_insert_with(F::zero) -= cc.clone();
                    }
                }
            }
            cols.push(col.into_iter().filter(|(_, v)| !v.is_zero()).collect());
        }
        let mut a = Mat::zeros(eq_index.len(), unknowns.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col {
                a.set(*i, j, v.clone());
            }
        }
        let ns = a.nullspace();
        (0..ns.cols)
            .map(|k| {
                let mut phi = PolyMatrix::zero(rm, rn);
                for (u, &(b, c, m)) in unknowns.iter().enumerate() {
                    let v = ns.get(u, k);
                    if !v.is_zero() {
                        phi.get_mut(b, c).add_term(m, v.clone());
                    }
                }
                phi
            })
            .collect()
    }

    /// Whether `phi` is a bimodule map of degree `d` from `self` to `other`.
    pub fn is_map_to(&self, other: &Bimodule<F>, phi: &PolyMatrix<F>, d: i64) -> bool {
        if phi.rows != self.rank() || phi.cols != other.rank() {
            return false;
        }
        let lr = self.left.poly_ring();
        for b in 0..self.rank() {
            for c in 0..other.rank() {
                if !phi
                    .get(b, c)
                    .is_homogeneous_of(lr, self.degrees[b] - other.degrees[c] + d)
                {
                    return false;
                }
            }
        }
        self.action
            .iter()
            .zip(&other.action)
            .all(|(ym, yn)| ym.mul(phi) == phi.mul(yn))
    }

    /// A degree-0 isomorphism `self -> other`, if one exists.
    pub fn find_isomorphism(&self, other: &Bimodule<F>) -> Option<PolyMatrix<F>> {
        if self.rank() != other.rank() {
            return None;
        }
        let mut a = self.degrees.clone();
        let mut b = other.degrees.clone();
        a.sort_unstable();
        b.sort_unstable();
        if a != b || self.left != other.left || self.right != other.right {
            return None;
        }
        if self.rank() == 0 {
            return Some(PolyMatrix::zero(0, 0));
        }
        let basis = self.hom_space(other, 0);
        if basis.is_empty() {
            return None;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x150);
        for _ in 0..4 {
            let mut phi = PolyMatrix::zero(self.rank(), other.rank());
            for h in &basis {
                let c = F::from_i64(rng.gen_range(1..=97));
                phi = phi.add(&h.scale(&c));
            }
            if phi.constant_part().inverse().is_some() {
                return Some(phi);
            }
        }
        None
    }

    pub fn is_isomorphic(&self, other: &Bimodule<F>) -> bool {
        self.find_isomorphism(other).is_some()
    }
}

/// Convolution `Q * P`: first `P`, then `Q`, realized as `P (x)_{mid} Q`.
/// Generators are `p_b (x) q_c`, indexed `b * rank(Q) + c`.
pub fn convolve<F: Field>(p: &Bimodule<F>, q: &Bimodule<F>) -> Result<Bimodule<F>, BimoduleError> {
    if p.right != q.left {
        return Err(BimoduleError::RingMismatch(
            format!("{:?}", p.right.colours()),
            format!("{:?}", q.left.colours()),
        ));
    }
    if p.is_zero() || q.is_zero() {
        return Ok(Bimodule::zero(&p.left, &q.right));
    }
    let mut ev = MatrixEvaluator::new(&p.action, p.rank());
    let action = q.action.iter().map(|z| p.lift(z, &mut ev)).collect();
    let mut degrees = Vec::with_capacity(p.rank() * q.rank());
    for &a in &p.degrees {
        for &b in &q.degrees {
            degrees.push(a + b);
        }
    }
    Ok(Bimodule {
        left: p.left.clone(),
        right: q.right.clone(),
        degrees,
        action,
        label: format!("{}.{}", q.label, p.label),
    })
}

/// `f (x) 1_Q` for `f : P -> P'`.
pub fn tensor_map_left<F: Field>(f: &PolyMatrix<F>, q: &Bimodule<F>) -> PolyMatrix<F> {
    f.kron(&PolyMatrix::identity(q.rank()))
}

/// `1_P (x) g` for `g : Q -> Q'`.
pub fn tensor_map_right<F: Field>(p: &Bimodule<F>, g: &PolyMatrix<F>) -> PolyMatrix<F> {
    let mut ev = MatrixEvaluator::new(&p.action, p.rank());
    p.lift(g, &mut ev)
}

pub type SharedBimodule<F> = Arc<Bimodule<F>>;
