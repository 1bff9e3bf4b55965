//! Sparse multivariate polynomials with weighted even grading.

use std::collections::BTreeMap;
use std::fmt;

use crate::field::Field;

/// Maximum number of variables in any ring the engine builds.
pub const MAX_VARS: usize = 16;

/// Exponent vector. Unused trailing slots are zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Mono(pub [u8; MAX_VARS]);

impl Mono {
    pub const ONE: Mono = Mono([0; MAX_VARS]);

    pub fn var(i: usize) -> Mono {
        let mut m = Mono::ONE;
        m.0[i] = 1;
        m
    }

    pub fn from_exps(exps: &[u32]) -> Mono {
        assert!(exps.len() <= MAX_VARS);
        let mut m = Mono::ONE;
        for (i, &e) in exps.iter().enumerate() {
            m.0[i] = u8::try_from(e).expect("exponent overflow");
        }
        m
    }

    #[inline]
    pub fn mul(&self, o: &Mono) -> Mono {
        let mut r = *self;
        for i in 0..MAX_VARS {
            r.0[i] = r.0[i].checked_add(o.0[i]).expect("exponent overflow");
        }
        r
    }

    pub fn divides(&self, o: &Mono) -> bool {
        (0..MAX_VARS).all(|i| self.0[i] <= o.0[i])
    }

    /// `o / self`, assuming divisibility.
    pub fn quotient(&self, o: &Mono) -> Mono {
        let mut r = *o;
        for i in 0..MAX_VARS {
            r.0[i] -= self.0[i];
        }
        r
    }

    pub fn lcm(&self, o: &Mono) -> Mono {
        let mut r = *self;
        for i in 0..MAX_VARS {
            r.0[i] = r.0[i].max(o.0[i]);
        }
        r
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.0[i] as u32
    }

    /// Shift exponent slots by `offset` (used to embed into a larger ring).
    pub fn shifted(&self, offset: usize, nvars: usize) -> Mono {
        let mut r = Mono::ONE;
        for i in 0..nvars {
            r.0[i + offset] = self.0[i];
        }
        r
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self
            .0
            .iter()
            .rposition(|&e| e != 0)
            .map(|i| i + 1)
            .unwrap_or(0);
        write!(f, "{:?}", &self.0[..last])
    }
}

/// A polynomial ring over `nvars` variables, variable `i` having degree
/// `2 * weights[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyRing {
    pub weights: Vec<u32>,
    pub names: Vec<String>,
}

impl PolyRing {
    pub fn new(weights: Vec<u32>, names: Vec<String>) -> Self {
        assert_eq!(weights.len(), names.len());
        assert!(weights.len() <= MAX_VARS, "too many variables");
        PolyRing { weights, names }
    }

    pub fn nvars(&self) -> usize {
        self.weights.len()
    }

    /// q-degree of a monomial: twice its weighted total degree.
    pub fn degree(&self, m: &Mono) -> i64 {
        2 * self
            .weights
            .iter()
            .enumerate()
            .map(|(i, &w)| w as i64 * m.0[i] as i64)
            .sum::<i64>()
    }

    /// All monomials of exactly the given q-degree, in a fixed order.
    pub fn monomials_of_degree(&self, deg: i64) -> Vec<Mono> {
        let mut out = Vec::new();
        if deg < 0 || deg % 2 != 0 {
            return out;
        }
        let target = (deg / 2) as u32;
        let mut cur = vec![0u32; self.nvars()];
        self.enum_rec(0, target, &mut cur, &mut out);
        out
    }

    fn enum_rec(&self, i: usize, remaining: u32, cur: &mut Vec<u32>, out: &mut Vec<Mono>) {
        let n = self.nvars();
        if i == n {
            if remaining == 0 {
                out.push(Mono::from_exps(cur));
            }
            return;
        }
        let w = self.weights[i];
        let max = remaining / w;
        for e in 0..=max {
            cur[i] = e;
            self.enum_rec(i + 1, remaining - e * w, cur, out);
        }
        cur[i] = 0;
    }

    /// Number of monomials of each even degree `0, 2, ..., 2*(len-1)`.
    pub fn hilbert_counts(&self, len: usize) -> Vec<u64> {
        let mut counts = vec![0u64; len];
        counts[0] = 1;
        for &w in &self.weights {
            let w = w as usize;
            for d in w..len {
                counts[d] += counts[d - w];
            }
        }
        counts
    }

    /// Tensor product ring: variables of `self` followed by those of `other`.
    pub fn tensor(&self, other: &PolyRing) -> PolyRing {
        let mut w = self.weights.clone();
        w.extend(other.weights.iter().copied());
        let mut n = self.names.clone();
        n.extend(other.names.iter().cloned());
        PolyRing::new(w, n)
    }

    pub fn format_mono(&self, m: &Mono) -> String {
        let mut parts = Vec::new();
        for i in 0..self.nvars() {
            match m.0[i] {
                0 => {}
                1 => parts.push(self.names[i].clone()),
                e => parts.push(format!("{}^{}", self.names[i], e)),
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// A polynomial: map from monomials to nonzero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<F: Field> {
    pub terms: BTreeMap<Mono, F>,
}

impl<F: Field> Default for Poly<F> {
    fn default() -> Self {
        Poly::zero()
    }
}

impl<F: Field> Poly<F> {
    pub fn zero() -> Self {
        Poly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Self::monomial(Mono::ONE, c)
    }

    pub fn monomial(m: Mono, c: F) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn var(i: usize) -> Self {
        Self::monomial(Mono::var(i), F::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Constant coefficient.
    pub fn constant_term(&self) -> F {
        self.terms.get(&Mono::ONE).cloned().unwrap_or_else(F::zero)
    }

    pub fn coeff(&self, m: &Mono) -> F {
        self.terms.get(m).cloned().unwrap_or_else(F::zero)
    }

    pub fn add_term(&mut self, m: Mono, c: F) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, o: &Poly<F>) -> Poly<F> {
        let mut r = self.clone();
        r.add_assign(o);
        r
    }

    pub fn add_assign(&mut self, o: &Poly<F>) {
        for (m, c) in &o.terms {
            self.add_term(*m, c.clone());
        }
    }

    pub fn sub(&self, o: &Poly<F>) -> Poly<F> {
        let mut r = self.clone();
        r.sub_assign(o);
        r
    }

    pub fn sub_assign(&mut self, o: &Poly<F>) {
        for (m, c) in &o.terms {
            self.add_term(*m, -c.clone());
        }
    }

    pub fn neg(&self) -> Poly<F> {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &F) -> Poly<F> {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (*m, v.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn mul_mono(&self, m: &Mono, c: &F) -> Poly<F> {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.mul(m), v.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, o: &Poly<F>) -> Poly<F> {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut acc: std::collections::HashMap<Mono, F> = std::collections::HashMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let m = m1.mul(m2);
                let p = c1.clone() * c2.clone();
                match acc.get_mut(&m) {
                    Some(v) => *v += p,
                    None => {
                        acc.insert(m, p);
                    }
                }
            }
        }
        Poly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly<F> {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Degree of a homogeneous polynomial (None for zero or inhomogeneous).
    pub fn homogeneous_degree(&self, ring: &PolyRing) -> Option<i64> {
        let mut it = self.terms.keys().map(|m| ring.degree(m));
        let first = it.next()?;
        if it.all(|d| d == first) {
            Some(first)
        } else {
            None
        }
    }

    pub fn is_homogeneous_of(&self, ring: &PolyRing, deg: i64) -> bool {
        self.terms.keys().all(|m| ring.degree(m) == deg)
    }

    /// Substitute polynomial images for variables (a ring map).
    pub fn substitute(&self, images: &[Poly<F>]) -> Poly<F> {
        let mut out = Poly::zero();
        let mut cache: Vec<Vec<Poly<F>>> = vec![vec![Poly::one()]; images.len()];
        for (m, c) in &self.terms {
            let mut t = Poly::constant(c.clone());
            for (i, img) in images.iter().enumerate() {
                let e = m.0[i] as usize;
                if e == 0 {
                    continue;
                }
                while cache[i].len() <= e {
                    let next = cache[i].last().unwrap().mul(img);
                    cache[i].push(next);
                }
                t = t.mul(&cache[i][e]);
            }
            out.add_assign(&t);
        }
        out
    }

    /// Embed into a bigger ring by shifting variable slots.
    pub fn shifted(&self, offset: usize, nvars: usize) -> Poly<F> {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.shifted(offset, nvars), c.clone()))
                .collect(),
        }
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Poly<F> {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut m2 = *m;
            m2.0[i] -= 1;
            out.add_term(m2, c.clone() * F::from_i64(e as i64));
        }
        out
    }

    pub fn map_coeffs<G: Field>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, f(c));
        }
        out
    }

    pub fn format(&self, ring: &PolyRing) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let cs = c.to_string();
            let (neg, body) = match cs.strip_prefix('-') {
                Some(b) => (true, b.to_string()),
                None => (false, cs),
            };
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                s.push_str(&body);
            } else {
                if body != "1" {
                    s.push_str(&body);
                    s.push('*');
                }
                s.push_str(&ring.format_mono(m));
            }
        }
        s
    }
}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("{c}{m:?}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;

    type P = Poly<Rational>;

    #[test]
    fn monomials_by_weighted_degree() {
        let r = PolyRing::new(vec![1, 2], vec!["e1".into(), "e2".into()]);
        // degree 8: e1^4, e1^2 e2, e2^2
        assert_eq!(r.monomials_of_degree(8).len(), 3);
        assert_eq!(r.hilbert_counts(5), vec![1, 1, 2, 2, 3]);
        assert!(r.monomials_of_degree(3).is_empty());
    }

    #[test]
    fn arithmetic_and_substitution() {
        let x = P::var(0);
        let y = P::var(1);
        let s = x.add(&y);
        let sq = s.mul(&s);
        assert_eq!(sq.len(), 3);
        // (x+y)^2 with x -> y, y -> x is unchanged
        assert_eq!(sq.substitute(&[y.clone(), x.clone()]), sq);
        assert!(sq.sub(&sq).is_zero());
        assert_eq!(
            x.pow(3).derivative(0),
            x.pow(2).scale(&Rational::from_i64(3))
        );
    }
}
