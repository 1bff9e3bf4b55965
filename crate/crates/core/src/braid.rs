//! Rickard complexes, their normalized versions and coloured braid words.

use serde::{Deserialize, Serialize};

use crate::bimodule::{convolve, Bimodule};
use crate::complexes::{tensor_complexes, Complex};
use crate::field::Field;
use crate::kernels::kernel_identity;
use crate::kernels::{kernel_e, kernel_f, pairing, shift_weight};
use crate::minimize::minimize;
use crate::polymat::PolyMatrix;
use crate::projector::{ProjectorCache, ProjectorError};

/// Colour sequence after the crossing `sigma_i^{+-1}` (1-based `i`).
pub fn swap_colours(k: &[u32], i: usize) -> Vec<u32> {
    let mut out = k.to_vec();
    out.swap(i - 1, i);
    out
}

/// Scale a map so that its first nonzero coefficient is 1.
fn normalize_map<F: Field>(m: &PolyMatrix<F>) -> PolyMatrix<F> {
    for p in &m.entries {
        if let Some((_, c)) = p.terms.iter().next_back() {
            return m.scale(&c.inv());
        }
    }
    m.clone()
}

/// The `s`-th term of the Rickard complex out of `k`, before grading shifts:
/// `E^(-l+s) F^(s) 1_k` if `l = <k, alpha_i> <= 0`, else `F^(l+s) E^(s) 1_k`.
fn rickard_term<F: Field>(k: &[u32], i: usize, s: u32) -> Option<Bimodule<F>> {
    let l = pairing(k, i);
    let (first, second) = if l <= 0 {
        let f = kernel_f::<F>(k, i, s)?;
        let mid = shift_weight(k, i, -(s as i64))?;
        (f, kernel_e::<F>(&mid, i, (s as i64 - l) as u32)?)
    } else {
        let e = kernel_e::<F>(k, i, s)?;
        let mid = shift_weight(k, i, s as i64)?;
        (e, kernel_f::<F>(&mid, i, (l + s as i64) as u32)?)
    };
    let m = convolve(&first, &second).expect("rings match");
    if m.is_zero() {
        None
    } else {
        Some(m)
    }
}

/// The Rickard complex `T_i 1_k` (`sign = 1`) or the inverse crossing out of
/// `k` (`sign = -1`). The unique degree-0 maps between consecutive terms
/// serve as differentials.
pub fn rickard_t<F: Field>(k: &[u32], i: usize, sign: i32) -> Complex<F> {
    let mut terms: Vec<Bimodule<F>> = Vec::new();
    let mut s = 0u32;
    while let Some(m) = rickard_term::<F>(k, i, s) {
        let tag = if sign > 0 { -(s as i64) } else { s as i64 };
        terms.push(m.shifted(tag));
        s += 1;
    }
    let n = terms.len() as i64;
    let mut chain = Vec::new();
    let mut maps = Vec::new();
    for (s, m) in terms.iter().enumerate() {
        let s = s as i64;
        let deg = if sign > 0 { -s } else { s };
        chain.push((deg, m.clone()));
        if s + 1 < n {
            let next = &terms[s as usize + 1];
            let (from, to, t) = if sign > 0 {
                (next, m, -s - 1)
            } else {
                (m, next, s)
            };
            let h = from.hom_space(to, 0);
            assert_eq!(
                h.len(),
                1,
                "Rickard differential is not unique on {k:?}, i = {i}"
            );
            maps.push((t, normalize_map(&h[0])));
        }
    }
    Complex::from_chain(chain, maps)
}

/// Shift `[a]{b}` turning `T_i 1_k` into `T'_i 1_k`.
pub fn tprime_shift(k: &[u32], i: usize) -> (i64, i64) {
    let (a, b) = (k[i - 1] as i64, k[i] as i64);
    if pairing(k, i) <= 0 {
        (-b, b + a * b)
    } else {
        (-a, a + a * b)
    }
}

/// `T'_i 1_k`, or the inverse crossing out of `k` for `sign = -1`.
pub fn rickard_tprime<F: Field>(k: &[u32], i: usize, sign: i32) -> Complex<F> {
    let c = rickard_t::<F>(k, i, sign);
    let (a, b) = if sign > 0 {
        tprime_shift(k, i)
    } else {
        tprime_shift(&swap_colours(k, i), i)
    };
    let sgn = if sign > 0 { 1 } else { -1 };
    c.t_shifted(sgn * a).q_shifted(sgn * b)
}

/// Crossing complex for a signed generator out of `k`.
pub fn crossing<F: Field>(k: &[u32], g: i32, primed: bool) -> Complex<F> {
    let i = g.unsigned_abs() as usize;
    if primed {
        rickard_tprime(k, i, g.signum())
    } else {
        rickard_t(k, i, g.signum())
    }
}

/// Multiplies `start` (ending at colours `k`) by the crossings of `word`,
/// minimizing after each step. Degrees below `t_min` are discarded as they
/// appear; this is exact in the kept range when every crossing is positive.
pub fn fold_word<F: Field>(
    start: Complex<F>,
    k: &[u32],
    word: &[i32],
    primed: bool,
    t_min: Option<i64>,
) -> (Complex<F>, Vec<u32>) {
    let mut c = start;
    let mut cur = k.to_vec();
    for &g in word {
        let i = g.unsigned_abs() as usize;
        assert!(g != 0 && i < cur.len(), "generator {g} out of range");
        let x = crossing::<F>(&cur, g, primed);
        let mut p = tensor_complexes(&c, &x).expect("colours match along the word");
        if let Some(t) = t_min {
            p = p.truncated_below(t);
        }
        c = minimize(&p);
        cur = swap_colours(&cur, i);
    }
    (c, cur)
}

/// Grading shift `t^{t_half/2} (-a^2)^{a_half/2}`, kept in half units so the
/// bookkeeping of the on-the-nose normalization stays exact.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizationShift {
    pub t_half: i64,
    pub a_half: i64,
}

impl NormalizationShift {
    /// Shift of one traced strand, or of a positive crossing of two strands,
    /// of colour `l`: `[l/2][[-l/2]]`.
    pub fn unit(l: u32) -> Self {
        NormalizationShift {
            t_half: l as i64,
            a_half: -(l as i64),
        }
    }

    pub fn is_integral(&self) -> bool {
        self.t_half % 2 == 0 && self.a_half % 2 == 0
    }

    /// `(exponent, coefficient)` of the monomial in `(q, a, t)`, if integral.
    pub fn monomial(&self) -> Option<((i64, i64, i64), i64)> {
        if !self.is_integral() {
            return None;
        }
        let n = self.a_half / 2;
        Some(((0, 2 * n, self.t_half / 2), if n % 2 == 0 { 1 } else { -1 }))
    }
}

impl std::ops::Neg for NormalizationShift {
    type Output = Self;
    fn neg(self) -> Self {
        NormalizationShift {
            t_half: -self.t_half,
            a_half: -self.a_half,
        }
    }
}

impl std::ops::Add for NormalizationShift {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        NormalizationShift {
            t_half: self.t_half + o.t_half,
            a_half: self.a_half + o.a_half,
        }
    }
}

impl std::fmt::Display for NormalizationShift {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let half = |x: i64| {
            if x % 2 == 0 {
                format!("{}", x / 2)
            } else {
                format!("{x}/2")
            }
        };
        write!(
            f,
            "t^({}) * (-a^2)^({})",
            half(self.t_half),
            half(self.a_half)
        )
    }
}

/// A braid whose strands carry partitions (weakly increasing parts).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColouredBraid {
    pub colours: Vec<Vec<u32>>,
    pub word: Vec<i32>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BraidError {
    #[error("generator {0} out of range for {1} strands")]
    GeneratorOutOfRange(i32, usize),
    #[error("invalid partition on strand {0}")]
    InvalidPartition(usize),
    #[error("closure does not match colours: strand {0} would meet a different colour")]
    ClosureMismatch(usize),
}

impl ColouredBraid {
    pub fn new(colours: Vec<Vec<u32>>, word: Vec<i32>) -> Result<Self, BraidError> {
        let b = ColouredBraid { colours, word };
        b.validate()?;
        Ok(b)
    }

    pub fn strands(&self) -> usize {
        self.colours.len()
    }

    pub fn validate(&self) -> Result<(), BraidError> {
        let n = self.strands();
        for (s, p) in self.colours.iter().enumerate() {
            if p.is_empty() || p.contains(&0) || p.windows(2).any(|w| w[0] > w[1]) {
                return Err(BraidError::InvalidPartition(s + 1));
            }
        }
        let mut cur = self.colours.clone();
        for &g in &self.word {
            let i = g.unsigned_abs() as usize;
            if g == 0 || i >= n {
                return Err(BraidError::GeneratorOutOfRange(g, n));
            }
            cur.swap(i - 1, i);
        }
        if let Some(s) = (0..n).find(|&s| cur[s] != self.colours[s]) {
            return Err(BraidError::ClosureMismatch(s + 1));
        }
        Ok(())
    }

    /// Writhe: number of positive minus negative crossings.
    pub fn writhe(&self) -> i64 {
        self.word.iter().map(|g| g.signum() as i64).sum()
    }

    /// Permutation of strand positions.
    pub fn permutation(&self) -> Vec<usize> {
        let mut p: Vec<usize> = (0..self.strands()).collect();
        for &g in &self.word {
            let i = g.unsigned_abs() as usize;
            p.swap(i - 1, i);
        }
        p
    }

    /// Cycles of the closure (link components), as strand positions.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let p = self.permutation();
        let mut seen = vec![false; p.len()];
        let mut out = Vec::new();
        for s in 0..p.len() {
            if seen[s] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                cyc.push(x);
                x = p.iter().position(|&y| y == x).unwrap();
            }
            out.push(cyc);
        }
        out
    }
}

/// Expand partitions into strands. Returns the colour sequence and, for each
/// multi-part strand, the 0-based `(start, width)` block a projector spans.
pub fn cable_expansion(colours: &[Vec<u32>]) -> (Vec<u32>, Vec<(usize, usize)>) {
    let mut seq = Vec::new();
    let mut blocks = Vec::new();
    for p in colours {
        if p.len() > 1 {
            blocks.push((seq.len(), p.len()));
        }
        seq.extend_from_slice(p);
    }
    (seq, blocks)
}

/// Word in the cabled strands replacing each crossing of `b`.
pub fn cabled_word(b: &ColouredBraid) -> Vec<i32> {
    let mut widths: Vec<usize> = b.colours.iter().map(|p| p.len()).collect();
    let mut out = Vec::new();
    for &g in &b.word {
        let i = g.unsigned_abs() as usize;
        let start: usize = widths[..i - 1].iter().sum();
        let (p, q) = (widths[i - 1], widths[i]);
        // strands of the left cable pass over the right cable one by one
        let mut positive = Vec::new();
        for j in (0..p).rev() {
            for m in 0..q {
                positive.push((start + j + m + 1) as i32);
            }
        }
        if g > 0 {
            out.extend(positive);
        } else {
            // inverse of the positive cabled crossing on widths (q, p)
            let mut inv = Vec::new();
            for j in (0..q).rev() {
                for m in 0..p {
                    inv.push((start + j + m + 1) as i32);
                }
            }
            out.extend(inv.into_iter().rev().map(|x| -x));
        }
        widths.swap(i - 1, i);
    }
    out
}

/// Options for `compile_braid`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompileOptions {
    /// Lowest homological degree kept in projectors.
    pub t_min: i64,
    /// Maximal number of full twists per projector.
    pub twist_depth: usize,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions {
            t_min: -8,
            twist_depth: 8,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CompileError {
    #[error(transparent)]
    Braid(#[from] BraidError),
    #[error(transparent)]
    Projector(#[from] ProjectorError),
}

/// Complex of a coloured braid, ready to be traced.
#[derive(Clone, Debug)]
pub struct CompiledBraid<F: Field> {
    pub complex: Complex<F>,
    /// Colours of the cabled strands.
    pub strands: Vec<u32>,
    /// Homology of the trace is exact from this degree on; `None` when no
    /// projector was truncated.
    pub valid_from: Option<i64>,
    /// Shift turning the result into the on-the-nose normalized invariant.
    pub shift: NormalizationShift,
    /// Full twists used by each projector.
    pub depths: Vec<usize>,
}

/// `T'_beta` for a coloured braid: cable, insert projectors, then multiply
/// the crossings one at a time, minimizing after each.
pub fn compile_braid<F: Field>(
    b: &ColouredBraid,
    opts: &CompileOptions,
    cache: &mut ProjectorCache,
) -> Result<CompiledBraid<F>, CompileError> {
    b.validate()?;
    let (seq, blocks) = cable_expansion(&b.colours);
    let word = cabled_word(b);
    let mut c = Complex::single(kernel_identity::<F>(&seq));
    let mut depths = Vec::new();
    for &(start, w) in &blocks {
        let p = cache.get::<F>(&seq[start..start + w], opts.t_min, opts.twist_depth)?;
        depths.push(p.depth);
        let p = p.complex.embedded(&seq[..start], &seq[start + w..]);
        c = minimize(
            &tensor_complexes(&c, &p)
                .expect("rings match")
                .truncated_below(opts.t_min),
        );
    }
    let truncated = !blocks.is_empty();
    let mut cut = opts.t_min;
    let mut cur = seq.clone();
    let mut shift = seq.iter().fold(NormalizationShift::default(), |s, &l| {
        s + NormalizationShift::unit(l)
    });
    for &g in &word {
        let i = g.unsigned_abs() as usize;
        let x = crossing::<F>(&cur, g, true);
        let mut p = tensor_complexes(&c, &x).expect("colours match along the word");
        if truncated {
            cut += x.max_degree().unwrap_or(0);
            p = p.truncated_below(cut);
        }
        c = minimize(&p);
        if cur[i - 1] == cur[i] {
            let u = NormalizationShift::unit(cur[i]);
            shift = shift + if g > 0 { u } else { -u };
        }
        cur = swap_colours(&cur, i);
    }
    Ok(CompiledBraid {
        complex: c,
        strands: seq,
        valid_from: truncated.then_some(cut + 1),
        shift,
        depths,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;

    #[test]
    fn crossing_on_one_one() {
        let t = rickard_t::<Rational>(&[1, 1], 1, 1);
        assert_eq!(t.signature(), vec![(-1, vec![0, 2]), (0, vec![0])]);
        assert!(t.check_d_squared() && t.check_maps());
        let ti = rickard_t::<Rational>(&[1, 1], 1, -1);
        assert_eq!(ti.signature(), vec![(0, vec![0]), (1, vec![-2, 0])]);
    }

    #[test]
    fn tprime_shifts() {
        assert_eq!(tprime_shift(&[1, 1], 1), (-1, 2));
        assert_eq!(tprime_shift(&[2, 1], 1), (-1, 3));
        assert_eq!(tprime_shift(&[0, 3], 1), (0, 0));
    }

    #[test]
    fn cabling() {
        assert_eq!(cable_expansion(&[vec![2]]), (vec![2], vec![]));
        assert_eq!(cable_expansion(&[vec![1, 1]]), (vec![1, 1], vec![(0, 2)]));
        assert_eq!(
            cable_expansion(&[vec![1], vec![1, 2]]),
            (vec![1, 1, 2], vec![(1, 2)])
        );
        let b = ColouredBraid::new(vec![vec![1, 1], vec![1, 1]], vec![1]).unwrap();
        assert_eq!(cabled_word(&b), vec![2, 3, 1, 2]);
    }

    #[test]
    fn squares_and_inverses_minimize() {
        use crate::complexes::tensor_complexes;
        use crate::minimize::minimize;
        let t = rickard_t::<Rational>(&[1, 1], 1, 1);
        let ti = rickard_t::<Rational>(&[1, 1], 1, -1);
        let id = minimize(&tensor_complexes(&t, &ti).unwrap());
        assert_eq!(id.signature(), vec![(0, vec![0])]);
        let t2 = minimize(&tensor_complexes(&t, &t).unwrap());
        assert_eq!(
            t2.signature(),
            vec![(-2, vec![2, 4]), (-1, vec![0, 2]), (0, vec![0])]
        );
        assert!(t2.check_d_squared() && t2.check_maps());
        let t3 = minimize(&tensor_complexes(&t2, &t).unwrap());
        assert_eq!(t3.num_summands(), 4);
    }

    #[test]
    fn mixed_colour_inverse_and_braid_relation() {
        use crate::complexes::tensor_complexes;
        use crate::minimize::minimize;
        let t = rickard_t::<Rational>(&[2, 1], 1, 1);
        let ti = rickard_t::<Rational>(&[1, 2], 1, -1);
        let id = minimize(&tensor_complexes(&t, &ti).unwrap());
        assert_eq!(id.signature(), vec![(0, vec![0])]);
        let k = [1u32, 1, 1];
        let word = |w: &[usize]| {
            let mut c = Complex::single(crate::kernels::kernel_identity::<Rational>(&k));
            for &i in w {
                c = minimize(&tensor_complexes(&c, &rickard_t(&k, i, 1)).unwrap());
            }
            c
        };
        assert_eq!(word(&[1, 2, 1]).signature(), word(&[2, 1, 2]).signature());
    }
}
