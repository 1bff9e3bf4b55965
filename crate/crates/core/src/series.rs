//! Laurent polynomials in `(q, a, t)` and rational series with denominators
//! `prod (1 - q^{-2l})`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Exponent triple `(q, a, t)`.
pub type Exp = (i64, i64, i64);

/// Integer Laurent polynomial in `q, a, t`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Laurent {
    pub terms: BTreeMap<Exp, i64>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent::default()
    }

    pub fn one() -> Self {
        Self::monomial((0, 0, 0), 1)
    }

    pub fn monomial(e: Exp, c: i64) -> Self {
        let mut l = Laurent::zero();
        l.add_term(e, c);
        l
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: Exp, c: i64) {
        if c == 0 {
            return;
        }
        let v = self.terms.entry(e).or_insert(0);
        *v += c;
        if *v == 0 {
            self.terms.remove(&e);
        }
    }

    pub fn coeff(&self, e: Exp) -> i64 {
        self.terms.get(&e).copied().unwrap_or(0)
    }

    pub fn add(&self, o: &Laurent) -> Laurent {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(*e, *c);
        }
        r
    }

    pub fn sub(&self, o: &Laurent) -> Laurent {
        self.add(&o.scale(-1))
    }

    pub fn scale(&self, c: i64) -> Laurent {
        let mut r = Laurent::zero();
        for (e, v) in &self.terms {
            r.add_term(*e, v * c);
        }
        r
    }

    pub fn mul(&self, o: &Laurent) -> Laurent {
        let mut r = Laurent::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                r.add_term((e1.0 + e2.0, e1.1 + e2.1, e1.2 + e2.2), c1 * c2);
            }
        }
        r
    }

    pub fn shift(&self, e: Exp) -> Laurent {
        Laurent {
            terms: self
                .terms
                .iter()
                .map(|(x, c)| ((x.0 + e.0, x.1 + e.1, x.2 + e.2), *c))
                .collect(),
        }
    }

    /// `1 - q^{-2l}`.
    pub fn factor(l: u32) -> Laurent {
        Self::factor_of((-2 * l as i64, 0, 0))
    }

    /// `1 - m` for a monomial exponent `m`.
    pub fn factor_of(m: Exp) -> Laurent {
        let mut f = Laurent::one();
        f.add_term(m, -1);
        f
    }

    /// Exact division by `1 - m` where `m` has negative q-exponent.
    pub fn div_factor(&self, m: Exp) -> Option<Laurent> {
        assert!(m.0 < 0, "factor must lower the q-degree");
        let mut rest = self.clone();
        let mut out = Laurent::zero();
        // peel off the term with the highest q-exponent
        while let Some((&top, &c)) = rest.terms.iter().max_by_key(|(e, _)| (e.0, e.1, e.2)) {
            let low = rest.min_q().unwrap();
            if top.0 + m.0 < low {
                return None;
            }
            out.add_term(top, c);
            rest.add_term(top, -c);
            rest.add_term((top.0 + m.0, top.1 + m.1, top.2 + m.2), c);
        }
        Some(out)
    }

    pub fn min_q(&self) -> Option<i64> {
        self.terms.keys().map(|e| e.0).min()
    }
}

fn fmt_var(out: &mut String, v: &str, e: i64) {
    match e {
        0 => {}
        1 => out.push_str(v),
        _ => out.push_str(&format!("{v}^{e}")),
    }
}

impl fmt::Display for Laurent {
    /// Canonical text form: terms ordered by ascending `t`, ascending `a`,
    /// descending `q`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut items: Vec<(&Exp, &i64)> = self.terms.iter().collect();
        items.sort_by_key(|((q, a, t), _)| (*t, *a, -*q));
        let mut s = String::new();
        for (n, ((q, a, t), c)) in items.into_iter().enumerate() {
            let mut mono = String::new();
            for (v, e) in [("q", *q), ("a", *a), ("t", *t)] {
                if e != 0 {
                    if !mono.is_empty() {
                        mono.push('*');
                    }
                    fmt_var(&mut mono, v, e);
                }
            }
            let abs = c.abs();
            let body = match (abs, mono.is_empty()) {
                (_, true) => abs.to_string(),
                (1, false) => mono,
                (_, false) => format!("{abs}*{mono}"),
            };
            if n == 0 {
                if *c < 0 {
                    s.push('-');
                }
            } else {
                s.push_str(if *c < 0 { " - " } else { " + " });
            }
            s.push_str(&body);
        }
        write!(f, "{s}")
    }
}

/// A rational generating function `numerator / prod_l (1 - q^{-2l})`,
/// together with a normalization monomial recorded separately.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriplyGradedSeries {
    pub numerator: Laurent,
    /// Factors `1 - q^{m.0} a^{m.1} t^{m.2}`, sorted, each with `m.0 < 0`.
    pub denominator: Vec<Exp>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("coefficients did not settle into a rational series within the computed window")]
    NotRational,
}

impl TriplyGradedSeries {
    pub fn zero() -> Self {
        TriplyGradedSeries {
            numerator: Laurent::zero(),
            denominator: Vec::new(),
        }
    }

    /// `numerator / prod_l (1 - q^{-2l})`.
    pub fn standard(numerator: Laurent, ls: &[u32]) -> Self {
        Self::new(
            numerator,
            ls.iter().map(|&l| (-2 * l as i64, 0, 0)).collect(),
        )
    }

    pub fn new(numerator: Laurent, mut denominator: Vec<Exp>) -> Self {
        denominator.sort_unstable();
        let mut s = TriplyGradedSeries {
            numerator,
            denominator,
        };
        s.reduce();
        s
    }

    pub fn denominator_poly(&self) -> Laurent {
        self.denominator
            .iter()
            .fold(Laurent::one(), |acc, &m| acc.mul(&Laurent::factor_of(m)))
    }

    /// Cancel denominator factors dividing the numerator.
    pub fn reduce(&mut self) {
        if self.numerator.is_zero() {
            self.denominator.clear();
            return;
        }
        // largest factors (sorted first) go first; keeps numerators small
        let mut i = 0;
        while i < self.denominator.len() {
            if let Some(q) = self.numerator.div_factor(self.denominator[i]) {
                self.numerator = q;
                self.denominator.remove(i);
            } else {
                i += 1;
            }
        }
    }

    /// Equality as rational functions.
    pub fn equivalent(&self, o: &TriplyGradedSeries) -> bool {
        self.numerator.mul(&o.denominator_poly()) == o.numerator.mul(&self.denominator_poly())
    }

    pub fn mul_monomial(&self, e: Exp, c: i64) -> Self {
        TriplyGradedSeries {
            numerator: self.numerator.shift(e).scale(c),
            denominator: self.denominator.clone(),
        }
    }

    /// Coefficients of the expansion in powers of `q^{-1}`, for `q`-exponents
    /// down to `q_min`.
    pub fn expand(&self, q_min: i64) -> Laurent {
        // multiply by 1 / (1 - q^{-2l}) = sum_n q^{-2ln}, truncated
        let mut cur = self.numerator.clone();
        for &m in &self.denominator {
            let mut next = Laurent::zero();
            for (&(q, a, t), &c) in &cur.terms {
                let mut e = (q, a, t);
                while e.0 >= q_min {
                    next.add_term(e, c);
                    e = (e.0 + m.0, e.1 + m.1, e.2 + m.2);
                }
            }
            cur = next;
        }
        Laurent {
            terms: cur
                .terms
                .into_iter()
                .filter(|(e, _)| e.0 >= q_min)
                .collect(),
        }
    }

    /// Build from coefficients known for `q`-exponents `>= q_min`, assuming
    /// the given denominator. The numerator must vanish on the last `margin`
    /// known exponents.
    pub fn fit(
        coeffs: &Laurent,
        q_min: i64,
        denominator: Vec<u32>,
        margin: i64,
    ) -> Result<Self, SeriesError> {
        let den = denominator
            .iter()
            .fold(Laurent::one(), |acc, &l| acc.mul(&Laurent::factor(l)));
        let denominator = denominator.iter().map(|&l| (-2 * l as i64, 0, 0)).collect();
        let prod = coeffs.mul(&den);
        let num = Laurent {
            terms: prod
                .terms
                .into_iter()
                .filter(|(e, _)| e.0 >= q_min)
                .collect(),
        };
        if num.terms.keys().any(|e| e.0 < q_min + margin) {
            return Err(SeriesError::NotRational);
        }
        Ok(TriplyGradedSeries::new(num, denominator))
    }

    /// Like `fit`, for coefficients known only for `q`-exponents `>= q_min`
    /// and `t`-exponents `<= t_max`. Every factor lowers `q` and does not
    /// lower `t`, so the numerator is known exactly on the same region; it
    /// must vanish on strips of width `margin` along both edges.
    pub fn fit_windowed(
        coeffs: &Laurent,
        q_min: i64,
        t_max: i64,
        denominator: Vec<Exp>,
        margin: (i64, i64),
    ) -> Result<Self, SeriesError> {
        assert!(denominator.iter().all(|m| m.0 < 0 && m.2 >= 0));
        let known = |e: &Exp| e.0 >= q_min && e.2 <= t_max;
        let den = denominator
            .iter()
            .fold(Laurent::one(), |acc, &m| acc.mul(&Laurent::factor_of(m)));
        let window = Laurent {
            terms: coeffs
                .terms
                .iter()
                .filter(|(e, _)| known(e))
                .map(|(e, c)| (*e, *c))
                .collect(),
        };
        let prod = window.mul(&den);
        let num = Laurent {
            terms: prod.terms.into_iter().filter(|(e, _)| known(e)).collect(),
        };
        if num
            .terms
            .keys()
            .any(|e| e.0 < q_min + margin.0 || e.2 > t_max - margin.1)
        {
            return Err(SeriesError::NotRational);
        }
        Ok(TriplyGradedSeries::new(num, denominator))
    }

    /// Coefficients in `q >= q_min`, `t <= t_max`.
    pub fn expand_window(&self, q_min: i64, t_max: i64) -> Laurent {
        let e = self.expand(q_min);
        Laurent {
            terms: e.terms.into_iter().filter(|(x, _)| x.2 <= t_max).collect(),
        }
    }
}

impl fmt::Display for TriplyGradedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator.is_empty() {
            return write!(f, "{}", self.numerator);
        }
        let den: Vec<String> = self
            .denominator
            .iter()
            .map(|m| format!("({})", Laurent::factor_of(*m)))
            .collect();
        write!(f, "({}) / ({})", self.numerator, den.join("*"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_and_reduce() {
        // 1/(1-q^-2) expanded down to q^-20
        let mut c = Laurent::zero();
        for n in 0..=10 {
            c.add_term((-2 * n, 0, 0), 1);
        }
        let s = TriplyGradedSeries::fit(&c, -20, vec![1, 2], 6).unwrap();
        assert_eq!(s.denominator, vec![(-2, 0, 0)]);
        assert_eq!(s.numerator, Laurent::one());
        assert_eq!(s.expand(-20), c);
    }

    #[test]
    fn display_is_canonical() {
        let mut l = Laurent::zero();
        l.add_term((-2, 2, 0), -1);
        l.add_term((0, 0, 0), 1);
        assert_eq!(l.to_string(), "1 - q^-2*a^2");
        let s = TriplyGradedSeries::standard(l, &[1]);
        assert_eq!(s.to_string(), "(1 - q^-2*a^2) / ((1 - q^-2))");
    }
}
