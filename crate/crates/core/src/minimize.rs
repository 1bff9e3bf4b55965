//! Homotopy minimization of complexes by Gaussian elimination.
//!
//! Isomorphism blocks are cancelled directly. Blocks that contain an
//! isomorphism between direct summands that are not yet split off are found
//! by composing with random degree-0 maps back: a non-nilpotent composite
//! yields a Fitting idempotent, the summands are split along it and the
//! resulting isomorphism is cancelled.

use std::collections::HashMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bimodule::Bimodule;
use crate::complexes::Complex;
use crate::field::Field;
use crate::linalg::Mat;
use crate::polymat::PolyMatrix;

/// Whether a degree-0 square map is an isomorphism.
fn is_iso<F: Field>(a: &Bimodule<F>, b: &Bimodule<F>, m: &PolyMatrix<F>) -> bool {
    if a.rank() != b.rank() || a.rank() == 0 {
        return false;
    }
    let mut x = a.degrees.clone();
    let mut y = b.degrees.clone();
    x.sort_unstable();
    y.sort_unstable();
    x == y && m.constant_part().inverse().is_some()
}

/// Cancel the isomorphism block `d^t[i][j]`.
pub fn eliminate<F: Field>(c: &mut Complex<F>, t: i64, i: usize, j: usize) {
    let phi = c.block(t, i, j).expect("block present").clone();
    let inv = phi.inverse_unipotent().expect("block is an isomorphism");
    let (na, nb) = (c.summands(t).len(), c.summands(t + 1).len());
    // d[a][b] -= d[a][j] phi^{-1} d[i][b]
    let left: Vec<Option<PolyMatrix<F>>> = (0..na)
        .map(|a| {
            if a == i {
                None
            } else {
                c.block(t, a, j).map(|m| m.mul(&inv))
            }
        })
        .collect();
    for (a, l) in left.iter().enumerate() {
        let Some(l) = l else { continue };
        for b in 0..nb {
            if b == j {
                continue;
            }
            if let Some(r) = c.block(t, i, b) {
                let corr = l.mul(r);
                let new = match c.block(t, a, b) {
                    Some(old) => old.sub(&corr),
                    None => corr.neg(),
                };
                c.set_block(t, a, b, Some(new));
            }
        }
    }
    remove_summand(c, t, i);
    remove_summand(c, t + 1, j);
    c.normalize();
}

fn remove_summand<F: Field>(c: &mut Complex<F>, t: i64, i: usize) {
    c.terms.get_mut(&t).unwrap().remove(i);
    if let Some(d) = c.diffs.get_mut(&t) {
        d.remove(i);
    }
    if let Some(d) = c.diffs.get_mut(&(t - 1)) {
        for row in d.iter_mut() {
            row.remove(i);
        }
    }
}

/// Image of an idempotent degree-0 endomorphism `e` of `a`, as a new free
/// bimodule together with `I : image -> a` and `P : a -> image`, `I P = 1`
/// and `P I = e`.
pub fn image_summand<F: Field>(
    a: &Bimodule<F>,
    e: &PolyMatrix<F>,
) -> Option<(Bimodule<F>, PolyMatrix<F>, PolyMatrix<F>)> {
    let e0 = e.constant_part();
    let rows = e0.independent_rows();
    if rows.is_empty() {
        return None;
    }
    let all: Vec<usize> = (0..a.rank()).collect();
    let inc = e.submatrix(&rows, &all);
    let cols = inc.constant_part().transpose().independent_rows();
    let sq = inc.submatrix(&(0..rows.len()).collect::<Vec<_>>(), &cols);
    let sq_inv = sq
        .inverse_unipotent()
        .expect("selected minor is invertible");
    let proj = e.submatrix(&all, &cols).mul(&sq_inv);
    let action = a.action.iter().map(|y| inc.mul(y).mul(&proj)).collect();
    let m = Bimodule {
        left: a.left.clone(),
        right: a.right.clone(),
        degrees: rows.iter().map(|&r| a.degrees[r]).collect(),
        action,
        label: a.label.clone(),
    };
    Some((m, inc, proj))
}

/// Replace summand `i` of degree `t` by the images of `e` and `1 - e`.
fn split_summand<F: Field>(c: &mut Complex<F>, t: i64, i: usize, e: &PolyMatrix<F>) -> bool {
    let a = c.summands(t)[i].clone();
    let comp = PolyMatrix::identity(a.rank()).sub(e);
    let (Some(p1), Some(p2)) = (image_summand(&a, e), image_summand(&a, &comp)) else {
        return false;
    };
    let (m1, i1, q1) = p1;
    let (m2, i2, q2) = p2;
    c.terms
        .get_mut(&t)
        .unwrap()
        .splice(i..=i, [Arc::new(m1), Arc::new(m2)]);
    if let Some(d) = c.diffs.get_mut(&t) {
        let row = d.remove(i);
        let r1 = row
            .iter()
            .map(|b| b.as_ref().map(|m| i1.mul(m)).filter(|m| !m.is_zero()))
            .collect();
        let r2 = row
            .iter()
            .map(|b| b.as_ref().map(|m| i2.mul(m)).filter(|m| !m.is_zero()))
            .collect();
        d.splice(i..i, [r1, r2]);
    }
    if let Some(d) = c.diffs.get_mut(&(t - 1)) {
        for row in d.iter_mut() {
            let b = row.remove(i);
            let c1 = b.as_ref().map(|m| m.mul(&q1)).filter(|m| !m.is_zero());
            let c2 = b.as_ref().map(|m| m.mul(&q2)).filter(|m| !m.is_zero());
            row.splice(i..i, [c1, c2]);
        }
    }
    true
}

fn find_iso<F: Field>(c: &Complex<F>) -> Option<(i64, usize, usize)> {
    for (&t, d) in &c.diffs {
        for (i, row) in d.iter().enumerate() {
            for (j, b) in row.iter().enumerate() {
                if let Some(m) = b {
                    if is_iso(&c.summands(t)[i], &c.summands(t + 1)[j], m) {
                        return Some((t, i, j));
                    }
                }
            }
        }
    }
    None
}

fn is_nilpotent<F: Field>(m: &Mat<F>) -> bool {
    let mut p = m.clone();
    for _ in 0..m.rows {
        if p.is_zero() {
            return true;
        }
        p = p.mul(m);
    }
    p.is_zero()
}

/// Univariate polynomials, ascending coefficients.
mod upoly {
    use crate::field::Field;

    pub fn trim<F: Field>(mut p: Vec<F>) -> Vec<F> {
        while p.last().is_some_and(|c| c.is_zero()) {
            p.pop();
        }
        p
    }

    pub fn mul<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut r = vec![F::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                r[i + j] += x.clone() * y.clone();
            }
        }
        trim(r)
    }

    pub fn sub<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
        let n = a.len().max(b.len());
        let r = (0..n)
            .map(|i| {
                a.get(i).cloned().unwrap_or_else(F::zero)
                    - b.get(i).cloned().unwrap_or_else(F::zero)
            })
            .collect();
        trim(r)
    }

    pub fn divrem<F: Field>(a: &[F], b: &[F]) -> (Vec<F>, Vec<F>) {
        let b = trim(b.to_vec());
        let mut r = trim(a.to_vec());
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let mut q = vec![F::zero(); r.len() - b.len() + 1];
        let lead_inv = b.last().unwrap().inv();
        while r.len() >= b.len() && !r.is_empty() {
            let k = r.len() - b.len();
            let c = r.last().unwrap().clone() * lead_inv.clone();
            for (i, y) in b.iter().enumerate() {
                r[k + i] -= c.clone() * y.clone();
            }
            q[k] = c;
            r = trim(r);
        }
        (trim(q), r)
    }

    /// `s` with `s * a = 1 mod m`, for coprime `a`, `m`.
    pub fn inverse_mod<F: Field>(a: &[F], m: &[F]) -> Vec<F> {
        let (mut r0, mut r1) = (trim(m.to_vec()), divrem(a, m).1);
        let (mut s0, mut s1): (Vec<F>, Vec<F>) = (Vec::new(), vec![F::one()]);
        while !r1.is_empty() {
            let (q, r) = divrem(&r0, &r1);
            let s = sub(&s0, &mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        assert_eq!(r0.len(), 1, "not coprime");
        let c = r0[0].inv();
        s0.iter().map(|x| x.clone() * c.clone()).collect()
    }
}

/// Minimal polynomial of `u` in the finite-dimensional algebra of degree-0
/// endomorphisms.
fn minimal_polynomial<F: Field>(u: &PolyMatrix<F>) -> Vec<F> {
    let n = u.rows;
    let mut powers = vec![PolyMatrix::identity(n)];
    let mut keys: HashMap<(usize, crate::poly::Mono), usize> = HashMap::new();
    let vectorize = |m: &PolyMatrix<F>, keys: &mut HashMap<(usize, crate::poly::Mono), usize>| {
        let mut v = Vec::new();
        for (idx, p) in m.entries.iter().enumerate() {
            for (mono, c) in &p.terms {
                let l = keys.len();
                let k = *keys.entry((idx, *mono)).or_insert(l);
                v.push((k, c.clone()));
            }
        }
        v
    };
    let mut vecs = vec![vectorize(&powers[0], &mut keys)];
    loop {
        let next = powers.last().unwrap().mul(u);
        vecs.push(vectorize(&next, &mut keys));
        powers.push(next);
        let d = vecs.len();
        let mut a = Mat::zeros(keys.len(), d);
        for (j, v) in vecs.iter().enumerate() {
            for (k, c) in v {
                a.set(*k, j, c.clone());
            }
        }
        let ns = a.nullspace();
        if ns.cols > 0 {
            // dependency involving the newest power, normalized monic
            let col: Vec<F> = (0..d).map(|i| ns.get(i, 0).clone()).collect();
            let lead = col[d - 1].inv();
            return col.into_iter().map(|c| c * lead.clone()).collect();
        }
    }
}

fn eval_upoly<F: Field>(p: &[F], u: &PolyMatrix<F>) -> PolyMatrix<F> {
    let mut acc = PolyMatrix::zero(u.rows, u.cols);
    for c in p.iter().rev() {
        acc = acc.mul(u).add(&PolyMatrix::identity(u.rows).scale(c));
    }
    acc
}

/// Idempotent projecting onto the part where `u` is invertible.
pub fn fitting_idempotent<F: Field>(u: &PolyMatrix<F>) -> PolyMatrix<F> {
    let m = minimal_polynomial(u);
    let a = m.iter().take_while(|c| c.is_zero()).count();
    let g: Vec<F> = m[a..].to_vec();
    if g.len() == 1 {
        return PolyMatrix::zero(u.rows, u.cols);
    }
    if a == 0 {
        return PolyMatrix::identity(u.rows);
    }
    let mut xa = vec![F::zero(); a];
    xa.push(F::one());
    let h = upoly::inverse_mod(&xa, &g);
    let p = upoly::divrem(&upoly::mul(&xa, &h), &m).1;
    eval_upoly(&p, u)
}

type HomCache<F> =
    HashMap<(usize, usize), (Arc<Bimodule<F>>, Arc<Bimodule<F>>, Vec<PolyMatrix<F>>)>;

fn hom0<F: Field>(
    cache: &mut HomCache<F>,
    from: &Arc<Bimodule<F>>,
    to: &Arc<Bimodule<F>>,
) -> Vec<PolyMatrix<F>> {
    let key = (Arc::as_ptr(from) as usize, Arc::as_ptr(to) as usize);
    if let Some((_, _, h)) = cache.get(&key) {
        return h.clone();
    }
    let h = from.hom_space(to, 0);
    cache.insert(key, (from.clone(), to.clone(), h.clone()));
    h
}

/// Try to split off and cancel one hidden isomorphism; returns whether one
/// was found.
fn split_pass<F: Field>(c: &mut Complex<F>, rng: &mut ChaCha8Rng, cache: &mut HomCache<F>) -> bool {
    let blocks: Vec<(i64, usize, usize)> = c
        .diffs
        .iter()
        .flat_map(|(&t, d)| {
            d.iter().enumerate().flat_map(move |(i, row)| {
                row.iter()
                    .enumerate()
                    .filter(|(_, b)| b.is_some())
                    .map(move |(j, _)| (t, i, j))
            })
        })
        .collect();
    for (t, i, j) in blocks {
        let a = c.summands(t)[i].clone();
        let b = c.summands(t + 1)[j].clone();
        let h = hom0(cache, &b, &a);
        if h.is_empty() {
            continue;
        }
        let d = c.block(t, i, j).unwrap().clone();
        let mut s = PolyMatrix::zero(b.rank(), a.rank());
        for x in &h {
            s = s.add(&x.scale(&F::from_i64(rng.gen_range(1..=1000))));
        }
        let u = d.mul(&s);
        if is_nilpotent(&u.constant_part()) {
            continue;
        }
        let e = fitting_idempotent(&u);
        // restrict to the part of `a` where u is invertible
        let (ia, pa, ua) = if e == PolyMatrix::identity(a.rank()) {
            (
                PolyMatrix::identity(a.rank()),
                PolyMatrix::identity(a.rank()),
                u.clone(),
            )
        } else {
            let (_, ia, pa) = image_summand(&a, &e).expect("nonzero idempotent");
            split_summand(c, t, i, &e);
            let ua = ia.mul(&u).mul(&pa);
            (ia, pa, ua)
        };
        let sigma = s.mul(&pa).mul(
            &ua.inverse_unipotent()
                .expect("invertible on the Fitting part"),
        );
        let f = sigma.mul(&ia).mul(&d);
        if f != PolyMatrix::identity(b.rank()) {
            split_summand(c, t + 1, j, &f);
        }
        c.normalize();
        return true;
    }
    false
}

/// Homotopy-equivalent complex without isomorphism components.
pub fn minimize<F: Field>(c: &Complex<F>) -> Complex<F> {
    let mut c = c.clone();
    c.normalize();
    let mut rng = ChaCha8Rng::seed_from_u64(0x6d696e);
    let mut cache = HomCache::new();
    let mut quiet = 0;
    loop {
        while let Some((t, i, j)) = find_iso(&c) {
            eliminate(&mut c, t, i, j);
        }
        if split_pass(&mut c, &mut rng, &mut cache) {
            quiet = 0;
        } else {
            quiet += 1;
            if quiet >= 2 {
                break;
            }
        }
    }
    c
}
