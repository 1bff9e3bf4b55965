//! Matrices with polynomial entries.

use std::collections::HashMap;

use crate::field::Field;
use crate::linalg::Mat;
use crate::poly::{Mono, Poly};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyMatrix<F: Field> {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Poly<F>>,
}

impl<F: Field> PolyMatrix<F> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        PolyMatrix {
            rows,
            cols,
            entries: vec![Poly::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, Poly::one());
        }
        m
    }

    pub fn from_scalar(m: &Mat<F>) -> Self {
        PolyMatrix {
            rows: m.rows,
            cols: m.cols,
            entries: m.data.iter().map(|c| Poly::constant(c.clone())).collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Poly<F>) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        PolyMatrix {
            rows,
            cols,
            entries,
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Poly<F> {
        &self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut Poly<F> {
        &mut self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly<F>) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|p| p.is_zero())
    }

    pub fn mul(&self, o: &PolyMatrix<F>) -> PolyMatrix<F> {
        assert_eq!(self.cols, o.rows, "matrix shape mismatch");
        let mut r = PolyMatrix::zero(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let t = a.mul(b);
                        r.get_mut(i, j).add_assign(&t);
                    }
                }
            }
        }
        r
    }

    pub fn add(&self, o: &PolyMatrix<F>) -> PolyMatrix<F> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&o.entries)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, o: &PolyMatrix<F>) -> PolyMatrix<F> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&o.entries)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn neg(&self) -> PolyMatrix<F> {
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a.neg()).collect(),
        }
    }

    pub fn scale(&self, c: &F) -> PolyMatrix<F> {
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a.scale(c)).collect(),
        }
    }

    pub fn scale_poly(&self, p: &Poly<F>) -> PolyMatrix<F> {
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a.mul(p)).collect(),
        }
    }

    pub fn transpose(&self) -> PolyMatrix<F> {
        PolyMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Kronecker product, `self`-major indexing.
    pub fn kron(&self, o: &PolyMatrix<F>) -> PolyMatrix<F> {
        PolyMatrix::from_fn(self.rows * o.rows, self.cols * o.cols, |i, j| {
            let a = self.get(i / o.rows, j / o.cols);
            if a.is_zero() {
                return Poly::zero();
            }
            a.mul(o.get(i % o.rows, j % o.cols))
        })
    }

    /// Constant terms of all entries.
    pub fn constant_part(&self) -> Mat<F> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.entries.iter().map(|p| p.constant_term()).collect(),
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix<F> {
        PolyMatrix::from_fn(rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j]).clone()
        })
    }

    /// Block `[r0, r0+nr) x [c0, c0+nc)`.
    pub fn block(&self, r0: usize, nr: usize, c0: usize, nc: usize) -> PolyMatrix<F> {
        PolyMatrix::from_fn(nr, nc, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn map_entries(&self, f: impl Fn(&Poly<F>) -> Poly<F>) -> PolyMatrix<F> {
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    /// Inverse of a square matrix whose constant part is invertible and whose
    /// remaining part is nilpotent (true for degree-zero maps of graded free
    /// modules). Returns `None` if the constant part is singular.
    pub fn inverse_unipotent(&self) -> Option<PolyMatrix<F>> {
        assert_eq!(self.rows, self.cols);
        let c0 = self.constant_part();
        let c0inv = PolyMatrix::from_scalar(&c0.inverse()?);
        let nil = self.sub(&PolyMatrix::from_scalar(&c0));
        // (c0 + N)^{-1} = sum_k (-c0^{-1} N)^k c0^{-1}
        let step = c0inv.mul(&nil).neg();
        let mut term = PolyMatrix::identity(self.rows);
        let mut acc = PolyMatrix::zero(self.rows, self.rows);
        for _ in 0..=self.rows {
            acc = acc.add(&term);
            term = term.mul(&step);
            if term.is_zero() {
                break;
            }
        }
        if !term.is_zero() {
            return None;
        }
        Some(acc.mul(&c0inv))
    }
}

/// Evaluates polynomials at a tuple of pairwise commuting square matrices,
/// caching monomial values.
pub struct MatrixEvaluator<'a, F: Field> {
    mats: &'a [PolyMatrix<F>],
    n: usize,
    cache: HashMap<Mono, PolyMatrix<F>>,
}

impl<'a, F: Field> MatrixEvaluator<'a, F> {
    pub fn new(mats: &'a [PolyMatrix<F>], n: usize) -> Self {
        MatrixEvaluator {
            mats,
            n,
            cache: HashMap::new(),
        }
    }

    fn mono(&mut self, m: &Mono) -> PolyMatrix<F> {
        if let Some(v) = self.cache.get(m) {
            return v.clone();
        }
        let v = match (0..self.mats.len()).find(|&i| m.0[i] > 0) {
            None => PolyMatrix::identity(self.n),
            Some(i) => {
                let mut rest = *m;
                rest.0[i] -= 1;
                self.mono(&rest).mul(&self.mats[i])
            }
        };
        self.cache.insert(*m, v.clone());
        v
    }

    pub fn eval(&mut self, p: &Poly<F>) -> PolyMatrix<F> {
        let mut acc = PolyMatrix::zero(self.n, self.n);
        for (m, c) in &p.terms {
            let v = self.mono(m);
            acc = acc.add(&v.scale(c));
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;

    type P = Poly<Rational>;

    #[test]
    fn unipotent_inverse() {
        let x = P::var(0);
        let m = PolyMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) | (1, 1) => P::one(),
            (1, 0) => x.clone(),
            _ => P::zero(),
        });
        let inv = m.inverse_unipotent().unwrap();
        assert_eq!(m.mul(&inv), PolyMatrix::identity(2));
    }

    #[test]
    fn evaluation_at_matrices() {
        let a = PolyMatrix::from_fn(2, 2, |i, j| {
            if i == 0 && j == 1 {
                P::one()
            } else {
                P::zero()
            }
        });
        let mats = vec![a.clone()];
        let mut ev = MatrixEvaluator::new(&mats, 2);
        // x^2 + 3 at a nilpotent matrix
        let p = P::var(0).pow(2).add(&P::constant(Rational::from_i64(3)));
        assert_eq!(
            ev.eval(&p),
            PolyMatrix::identity(2).scale(&Rational::from_i64(3))
        );
    }
}
