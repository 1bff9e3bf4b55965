//! Finitely presented graded modules over polynomial rings.
//!
//! A module is a quotient of the free module `R^n` with homogeneous
//! generators by a list of homogeneous relation vectors. Modules over
//! `A_L (x) A_R` carry the split of variables into left and right blocks so
//! they can be tensored over a common ring.

use std::collections::BTreeMap;
use std::fmt;

use crate::bimodule::Bimodule;
use crate::field::Field;
use crate::linalg::Mat;
use crate::poly::{Mono, Poly, PolyRing, MAX_VARS};

/// Module term orders: position over term, or degree first.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ModuleOrder {
    #[default]
    Top,
    Pot,
}

/// Sort key of a module term `mono * e_pos`. Larger is leading.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Key {
    major: i64,
    deg: i64,
    rev: [i16; MAX_VARS],
    minor: i64,
    pos: usize,
    mono: Mono,
}

type SVec<F> = BTreeMap<Key, F>;

#[derive(Clone, Debug)]
struct Ctx {
    ring: PolyRing,
    degrees: Vec<i64>,
    order: ModuleOrder,
}

impl Ctx {
    fn key(&self, pos: usize, mono: Mono) -> Key {
        let n = self.ring.nvars();
        let mut rev = [0i16; MAX_VARS];
        for i in 0..n {
            rev[i] = -(mono.0[n - 1 - i] as i16);
        }
        let d = self.ring.degree(&mono);
        match self.order {
            ModuleOrder::Top => Key {
                major: 0,
                deg: d + self.degrees[pos],
                rev,
                minor: -(pos as i64),
                pos,
                mono,
            },
            ModuleOrder::Pot => Key {
                major: -(pos as i64),
                deg: d,
                rev,
                minor: 0,
                pos,
                mono,
            },
        }
    }

    fn to_svec<F: Field>(&self, v: &[Poly<F>]) -> SVec<F> {
        let mut out = SVec::new();
        for (pos, p) in v.iter().enumerate() {
            for (m, c) in &p.terms {
                out.insert(self.key(pos, *m), c.clone());
            }
        }
        out
    }

    fn from_svec<F: Field>(&self, v: &SVec<F>) -> Vec<Poly<F>> {
        let mut out = vec![Poly::zero(); self.degrees.len()];
        for (k, c) in v {
            out[k.pos].add_term(k.mono, c.clone());
        }
        out
    }

    fn mul_term<F: Field>(&self, v: &SVec<F>, m: &Mono, c: &F) -> SVec<F> {
        v.iter()
            .map(|(k, x)| (self.key(k.pos, k.mono.mul(m)), x.clone() * c.clone()))
            .collect()
    }
}

fn axpy<F: Field>(v: &mut SVec<F>, w: &SVec<F>) {
    for (k, c) in w {
        match v.get_mut(k) {
            Some(x) => {
                *x += c.clone();
                if x.is_zero() {
                    v.remove(k);
                }
            }
            None => {
                v.insert(*k, c.clone());
            }
        }
    }
}

fn make_monic<F: Field>(v: &mut SVec<F>) {
    if let Some((_, c)) = v.last_key_value() {
        let inv = c.inv();
        for x in v.values_mut() {
            *x = x.clone() * inv.clone();
        }
    }
}

/// Full reduction of `v` by a list of monic vectors.
fn reduce<F: Field>(ctx: &Ctx, mut v: SVec<F>, basis: &[SVec<F>]) -> SVec<F> {
    let mut out = SVec::new();
    while let Some((k, c)) = v.pop_last() {
        let hit = basis.iter().find(|g| {
            let lk = g.last_key_value().unwrap().0;
            lk.pos == k.pos && lk.mono.divides(&k.mono)
        });
        match hit {
            Some(g) => {
                let lk = g.last_key_value().unwrap().0;
                let m = lk.mono.quotient(&k.mono);
                let mut t = ctx.mul_term(g, &m, &(-c));
                t.pop_last();
                axpy(&mut v, &t);
            }
            None => {
                out.insert(k, c);
            }
        }
    }
    out
}

/// Reduced Groebner basis by Buchberger's algorithm, pairs taken by degree.
fn buchberger<F: Field>(ctx: &Ctx, gens: Vec<SVec<F>>) -> Vec<SVec<F>> {
    let mut basis: Vec<SVec<F>> = Vec::new();
    let mut queue: BTreeMap<(i64, usize), SVec<F>> = BTreeMap::new();
    let mut serial = 0;
    let vdeg = |v: &SVec<F>| {
        let k = v.last_key_value().unwrap().0;
        ctx.ring.degree(&k.mono) + ctx.degrees[k.pos]
    };
    for g in gens.into_iter().filter(|g| !g.is_empty()) {
        queue.insert((vdeg(&g), serial), g);
        serial += 1;
    }
    while let Some((_, v)) = queue.pop_first() {
        let mut r = reduce(ctx, v, &basis);
        if r.is_empty() {
            continue;
        }
        make_monic(&mut r);
        let lk = *r.last_key_value().unwrap().0;
        for g in &basis {
            let gk = g.last_key_value().unwrap().0;
            if gk.pos != lk.pos {
                continue;
            }
            let l = gk.mono.lcm(&lk.mono);
            let mut s = ctx.mul_term(g, &gk.mono.quotient(&l), &F::one());
            axpy(
                &mut s,
                &ctx.mul_term(&r, &lk.mono.quotient(&l), &(-F::one())),
            );
            if !s.is_empty() {
                queue.insert((vdeg(&s), serial), s);
                serial += 1;
            }
        }
        basis.push(r);
    }
    // minimalize and interreduce
    let leads: Vec<Key> = basis
        .iter()
        .map(|g| *g.last_key_value().unwrap().0)
        .collect();
    let keep: Vec<usize> = (0..basis.len())
        .filter(|&i| {
            !(0..basis.len()).any(|j| {
                j != i
                    && leads[j].pos == leads[i].pos
                    && leads[j].mono.divides(&leads[i].mono)
                    && (leads[j].mono != leads[i].mono || j < i)
            })
        })
        .collect();
    let min: Vec<SVec<F>> = keep.iter().map(|&i| basis[i].clone()).collect();
    let mut out: Vec<SVec<F>> = (0..min.len())
        .map(|i| {
            let mut g = min[i].clone();
            let (k, c) = g.pop_last().unwrap();
            let others: Vec<SVec<F>> = (0..min.len())
                .filter(|&j| j != i)
                .map(|j| min[j].clone())
                .collect();
            let mut t = reduce(ctx, g, &others);
            t.insert(k, c);
            t
        })
        .collect();
    out.sort_by_key(|g| *g.last_key_value().unwrap().0);
    out
}

/// A homogeneous vector in `R^n` with its module degree.
pub type GradedVector<F> = (Vec<Poly<F>>, i64);

/// Finitely presented graded module `R^n / <relations>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FPModule<F: Field> {
    pub ring: PolyRing,
    /// Numbers of left and right variables; the rest sit in between.
    pub sides: (usize, usize),
    pub degrees: Vec<i64>,
    pub relations: Vec<Vec<Poly<F>>>,
    /// Certified free as a module over the left and right variables.
    pub free: (bool, bool),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModuleError {
    #[error("relation {0} is not homogeneous")]
    Inhomogeneous(usize),
    #[error("neither factor is certified free over the common ring")]
    FlatnessUnverified,
    #[error("ring mismatch in tensor product")]
    RingMismatch,
    #[error("the composite of the two maps is not zero")]
    NotAComplex,
    #[error("map is not well defined on relations")]
    NotWellDefined,
}

/// Degree of a vector, if homogeneous.
pub fn vector_degree<F: Field>(
    ring: &PolyRing,
    degrees: &[i64],
    v: &[Poly<F>],
) -> Option<Option<i64>> {
    let mut d = None;
    for (i, p) in v.iter().enumerate() {
        for m in p.terms.keys() {
            let e = ring.degree(m) + degrees[i];
            match d {
                None => d = Some(e),
                Some(x) if x != e => return None,
                _ => {}
            }
        }
    }
    Some(d)
}

impl<F: Field> FPModule<F> {
    pub fn free_module(ring: PolyRing, degrees: Vec<i64>) -> Self {
        let n = ring.nvars();
        FPModule {
            ring,
            sides: (n, 0),
            degrees,
            relations: Vec::new(),
            free: (true, false),
        }
    }

    pub fn new(
        ring: PolyRing,
        degrees: Vec<i64>,
        relations: Vec<Vec<Poly<F>>>,
    ) -> Result<Self, ModuleError> {
        let n = ring.nvars();
        let m = FPModule {
            ring,
            sides: (n, 0),
            degrees,
            relations,
            free: (false, false),
        };
        m.check_homogeneous()?;
        Ok(m)
    }

    pub fn with_sides(mut self, left: usize, right: usize) -> Self {
        assert!(left + right <= self.ring.nvars());
        self.sides = (left, right);
        self
    }

    pub fn ngens(&self) -> usize {
        self.degrees.len()
    }

    pub fn check_homogeneous(&self) -> Result<(), ModuleError> {
        for (i, r) in self.relations.iter().enumerate() {
            if vector_degree(&self.ring, &self.degrees, r).is_none() {
                return Err(ModuleError::Inhomogeneous(i));
            }
        }
        Ok(())
    }

    /// Presentation of a bimodule over `left (x) right`: one relation
    /// `y_j m_b - sum_c Y_j[b][c] m_c` per right variable and generator.
    pub fn from_bimodule(b: &Bimodule<F>) -> Self {
        let nl = b.left.nvars();
        let nr = b.right.nvars();
        let ring = b.left.poly_ring().tensor(b.right.poly_ring());
        let mut relations = Vec::new();
        for (j, y) in b.action.iter().enumerate() {
            for g in 0..b.rank() {
                let mut v: Vec<Poly<F>> = (0..b.rank())
                    .map(|c| y.get(g, c).shifted(0, nl).neg())
                    .collect();
                v[g].add_assign(&Poly::var(nl + j));
                relations.push(v);
            }
        }
        FPModule {
            ring,
            sides: (nl, nr),
            degrees: b.degrees.clone(),
            relations,
            free: (true, false),
        }
    }

    fn ctx(&self, order: ModuleOrder) -> Ctx {
        Ctx {
            ring: self.ring.clone(),
            degrees: self.degrees.clone(),
            order,
        }
    }

    /// Reduced Groebner basis of the relation module in the given order.
    pub fn groebner_in(&self, order: ModuleOrder) -> Self {
        let ctx = self.ctx(order);
        let gb = buchberger(
            &ctx,
            self.relations.iter().map(|r| ctx.to_svec(r)).collect(),
        );
        FPModule {
            relations: gb.iter().map(|g| ctx.from_svec(g)).collect(),
            ..self.clone()
        }
    }

    pub fn groebner(&self) -> Self {
        self.groebner_in(ModuleOrder::Top)
    }

    /// Drops generators killed by relations with a unit entry.
    pub fn minimal_presentation(&self) -> Self {
        let mut m = self.groebner();
        loop {
            let found = m.relations.iter().enumerate().find_map(|(ri, r)| {
                r.iter().enumerate().find_map(|(g, p)| {
                    let c = p.constant_term();
                    (!c.is_zero()).then_some((ri, g, c))
                })
            });
            let Some((ri, g, c)) = found else { break };
            // e_g = -(1/c) (r - c e_g)
            let mut sub = m.relations[ri].clone();
            sub[g].sub_assign(&Poly::constant(c.clone()));
            let sub: Vec<Poly<F>> = sub.iter().map(|p| p.scale(&(-c.inv()))).collect();
            let eliminate = |v: &Vec<Poly<F>>| {
                let a = v[g].clone();
                let mut w: Vec<Poly<F>> =
                    v.iter().zip(&sub).map(|(x, s)| x.add(&a.mul(s))).collect();
                w.remove(g);
                w
            };
            let relations: Vec<Vec<Poly<F>>> = m
                .relations
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != ri)
                .map(|(_, v)| eliminate(v))
                .filter(|w| w.iter().any(|p| !p.is_zero()))
                .collect();
            let mut degrees = m.degrees.clone();
            degrees.remove(g);
            m = FPModule {
                degrees,
                relations,
                free: (false, false),
                ..m
            }
            .groebner();
        }
        m
    }

    /// Normal forms of all standard monomials in degree `d`, as basis keys.
    fn standard_basis(&self, ctx: &Ctx, gb: &[SVec<F>], d: i64) -> Vec<Key> {
        let leads: Vec<Key> = gb.iter().map(|g| *g.last_key_value().unwrap().0).collect();
        let mut out = Vec::new();
        for (pos, &gd) in self.degrees.iter().enumerate() {
            for m in self.ring.monomials_of_degree(d - gd) {
                if !leads.iter().any(|l| l.pos == pos && l.mono.divides(&m)) {
                    out.push(ctx.key(pos, m));
                }
            }
        }
        out
    }

    /// Dimension of the degree `d` part.
    pub fn dim_in_degree(&self, d: i64) -> usize {
        let g = self.groebner();
        let ctx = g.ctx(ModuleOrder::Top);
        let gb: Vec<SVec<F>> = g.relations.iter().map(|r| ctx.to_svec(r)).collect();
        g.standard_basis(&ctx, &gb, d).len()
    }

    pub fn hilbert_series(&self) -> HilbertSeries {
        let g = self.groebner();
        let ctx = g.ctx(ModuleOrder::Top);
        let mut num = BTreeMap::new();
        for (pos, &d) in g.degrees.iter().enumerate() {
            let ideal: Vec<Mono> = g
                .relations
                .iter()
                .map(|r| *ctx.to_svec(r).last_key_value().unwrap().0)
                .filter(|k| k.pos == pos)
                .map(|k| k.mono)
                .collect();
            for (e, c) in monomial_numerator(&g.ring, ideal) {
                add_coeff(&mut num, e + d, c);
            }
        }
        HilbertSeries::new(num, g.ring.weights.clone())
    }

    /// `M (+) N` over the same ring.
    pub fn direct_sum(&self, o: &FPModule<F>) -> Self {
        assert_eq!(self.ring, o.ring);
        let (n, m) = (self.ngens(), o.ngens());
        let pad = |v: &Vec<Poly<F>>, before: usize, after: usize| {
            let mut w = vec![Poly::zero(); before];
            w.extend(v.iter().cloned());
            w.extend(vec![Poly::zero(); after]);
            w
        };
        let mut relations: Vec<Vec<Poly<F>>> =
            self.relations.iter().map(|r| pad(r, 0, m)).collect();
        relations.extend(o.relations.iter().map(|r| pad(r, n, 0)));
        FPModule {
            ring: self.ring.clone(),
            sides: self.sides,
            degrees: [self.degrees.clone(), o.degrees.clone()].concat(),
            relations,
            free: (self.free.0 && o.free.0, self.free.1 && o.free.1),
        }
    }

    /// Grading shift `{s}`.
    pub fn shifted(&self, s: i64) -> Self {
        let mut m = self.clone();
        for d in &mut m.degrees {
            *d -= s;
        }
        m
    }
}

fn add_coeff(m: &mut BTreeMap<i64, i64>, e: i64, c: i64) {
    let v = m.entry(e).or_insert(0);
    *v += c;
    if *v == 0 {
        m.remove(&e);
    }
}

/// Numerator of the Hilbert series of `R / I` for a monomial ideal `I`, over
/// `prod (1 - q^{2w})`.
fn monomial_numerator(ring: &PolyRing, ideal: Vec<Mono>) -> BTreeMap<i64, i64> {
    let mut gens: Vec<Mono> = Vec::new();
    for m in ideal {
        if !gens.iter().any(|g| g.divides(&m)) {
            gens.retain(|g| !m.divides(g));
            gens.push(m);
        }
    }
    let mut out = BTreeMap::new();
    if gens.iter().any(|g| g.is_one()) {
        return out;
    }
    let Some(last) = gens.pop() else {
        out.insert(0, 1);
        return out;
    };
    // N(I + m) = N(I) - q^{deg m} N(I : m)
    let colon: Vec<Mono> = gens.iter().map(|g| last.quotient(&g.lcm(&last))).collect();
    out = monomial_numerator(ring, gens);
    let d = ring.degree(&last);
    for (e, c) in monomial_numerator(ring, colon) {
        add_coeff(&mut out, e + d, -c);
    }
    out
}

/// `numerator / prod (1 - q^{2l})` in positive powers of `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertSeries {
    pub numerator: BTreeMap<i64, i64>,
    /// Sorted multiset of `l`.
    pub denominator: Vec<u32>,
}

fn poly_mul(a: &BTreeMap<i64, i64>, b: &BTreeMap<i64, i64>) -> BTreeMap<i64, i64> {
    let mut out = BTreeMap::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            add_coeff(&mut out, ea + eb, ca * cb);
        }
    }
    out
}

fn factor(l: u32) -> BTreeMap<i64, i64> {
    BTreeMap::from([(0, 1), (2 * l as i64, -1)])
}

impl HilbertSeries {
    pub fn new(numerator: BTreeMap<i64, i64>, mut denominator: Vec<u32>) -> Self {
        denominator.sort_unstable();
        let mut s = HilbertSeries {
            numerator,
            denominator,
        };
        s.reduce();
        s
    }

    fn reduce(&mut self) {
        if self.numerator.is_empty() {
            self.denominator.clear();
            return;
        }
        let mut i = self.denominator.len();
        while i > 0 {
            i -= 1;
            let l = 2 * self.denominator[i] as i64;
            // divide by 1 - q^l from the bottom
            let mut rest = self.numerator.clone();
            let mut quot = BTreeMap::new();
            let top = *rest.keys().next_back().unwrap();
            let ok = loop {
                let Some((&e, &c)) = rest.iter().next() else {
                    break true;
                };
                if e + l > top {
                    break false;
                }
                add_coeff(&mut quot, e, c);
                add_coeff(&mut rest, e, -c);
                add_coeff(&mut rest, e + l, c);
            };
            if ok {
                self.numerator = quot;
                self.denominator.remove(i);
            }
        }
    }

    pub fn denominator_poly(&self) -> BTreeMap<i64, i64> {
        self.denominator
            .iter()
            .fold(BTreeMap::from([(0, 1)]), |acc, &l| {
                poly_mul(&acc, &factor(l))
            })
    }

    pub fn equivalent(&self, o: &HilbertSeries) -> bool {
        poly_mul(&self.numerator, &o.denominator_poly())
            == poly_mul(&o.numerator, &self.denominator_poly())
    }

    pub fn add(&self, o: &HilbertSeries) -> HilbertSeries {
        let num = poly_mul(&self.numerator, &o.denominator_poly());
        let mut r = poly_mul(&o.numerator, &self.denominator_poly());
        for (e, c) in num {
            add_coeff(&mut r, e, c);
        }
        HilbertSeries::new(
            r,
            [self.denominator.clone(), o.denominator.clone()].concat(),
        )
    }

    pub fn neg(&self) -> HilbertSeries {
        HilbertSeries {
            numerator: self.numerator.iter().map(|(e, c)| (*e, -c)).collect(),
            ..self.clone()
        }
    }

    pub fn mul(&self, o: &HilbertSeries) -> HilbertSeries {
        HilbertSeries::new(
            poly_mul(&self.numerator, &o.numerator),
            [self.denominator.clone(), o.denominator.clone()].concat(),
        )
    }

    pub fn shift(&self, s: i64) -> HilbertSeries {
        HilbertSeries {
            numerator: self.numerator.iter().map(|(e, c)| (e - s, *c)).collect(),
            ..self.clone()
        }
    }

    /// Coefficients up to degree `hi`.
    pub fn expand(&self, hi: i64) -> BTreeMap<i64, i64> {
        let mut cur = self.numerator.clone();
        for &l in &self.denominator {
            let mut next = BTreeMap::new();
            for (&e, &c) in &cur {
                let mut x = e;
                while x <= hi {
                    add_coeff(&mut next, x, c);
                    x += 2 * l as i64;
                }
            }
            cur = next;
        }
        cur.retain(|e, _| *e <= hi);
        cur
    }
}

fn fmt_q(m: &BTreeMap<i64, i64>) -> String {
    if m.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (n, (&e, &c)) in m.iter().enumerate() {
        let mono = match e {
            0 => String::new(),
            1 => "q".into(),
            _ => format!("q^{e}"),
        };
        let body = match (c.abs(), mono.is_empty()) {
            (a, true) => a.to_string(),
            (1, false) => mono,
            (a, false) => format!("{a}*{mono}"),
        };
        if n == 0 {
            if c < 0 {
                s.push('-');
            }
        } else {
            s.push_str(if c < 0 { " - " } else { " + " });
        }
        s.push_str(&body);
    }
    s
}

impl fmt::Display for HilbertSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator.is_empty() {
            return write!(f, "{}", fmt_q(&self.numerator));
        }
        let den: Vec<String> = self
            .denominator
            .iter()
            .map(|&l| format!("({})", fmt_q(&factor(l))))
            .collect();
        write!(f, "({}) / ({})", fmt_q(&self.numerator), den.join("*"))
    }
}

/// Syzygies of homogeneous vectors `cols[i]` in `R^n` (generator degrees
/// `degrees`): generators of `{a : sum a_i cols[i] = 0}` with their degrees.
pub fn syzygies<F: Field>(
    ring: &PolyRing,
    degrees: &[i64],
    cols: &[GradedVector<F>],
) -> Vec<GradedVector<F>> {
    let n = degrees.len();
    let s = cols.len();
    let mut ext = degrees.to_vec();
    ext.extend(cols.iter().map(|c| c.1));
    let ctx = Ctx {
        ring: ring.clone(),
        degrees: ext,
        order: ModuleOrder::Pot,
    };
    let gens = cols
        .iter()
        .enumerate()
        .map(|(i, (v, _))| {
            let mut w = v.clone();
            w.extend((0..s).map(|j| if j == i { Poly::one() } else { Poly::zero() }));
            ctx.to_svec(&w)
        })
        .collect();
    buchberger(&ctx, gens)
        .into_iter()
        .filter(|g| g.last_key_value().unwrap().0.pos >= n)
        .map(|g| {
            let v = ctx.from_svec(&g);
            let d = vector_degree(ring, &ctx.degrees, &v).flatten().unwrap();
            (v[n..].to_vec(), d)
        })
        .collect()
}

/// Homogeneous map `m_b -> sum_c matrix[b][c] n_c`, raising degree by `shift`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap<F: Field> {
    pub source: FPModule<F>,
    pub target: FPModule<F>,
    pub matrix: Vec<Vec<Poly<F>>>,
    pub shift: i64,
}

impl<F: Field> GradedMap<F> {
    /// Image of a vector in `source` coordinates.
    fn apply(&self, v: &[Poly<F>]) -> Vec<Poly<F>> {
        let mut out = vec![Poly::zero(); self.target.ngens()];
        for (b, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (c, x) in self.matrix[b].iter().enumerate() {
                out[c].add_assign(&a.mul(x));
            }
        }
        out
    }

    fn in_target_relations(&self, v: &[Poly<F>]) -> bool {
        let g = self.target.groebner();
        let ctx = g.ctx(ModuleOrder::Top);
        let gb: Vec<SVec<F>> = g.relations.iter().map(|r| ctx.to_svec(r)).collect();
        reduce(&ctx, ctx.to_svec(v), &gb).is_empty()
    }

    /// Homogeneous of `shift` and compatible with relations.
    pub fn check(&self) -> Result<(), ModuleError> {
        for (b, row) in self.matrix.iter().enumerate() {
            for (c, p) in row.iter().enumerate() {
                if !p.is_zero()
                    && !p.is_homogeneous_of(
                        &self.source.ring,
                        self.source.degrees[b] + self.shift - self.target.degrees[c],
                    )
                {
                    return Err(ModuleError::NotWellDefined);
                }
            }
        }
        for r in &self.source.relations {
            if !self.in_target_relations(&self.apply(r)) {
                return Err(ModuleError::NotWellDefined);
            }
        }
        Ok(())
    }
}

/// `ker g / im f` at the middle module.
pub fn homology<F: Field>(f: &GradedMap<F>, g: &GradedMap<F>) -> Result<FPModule<F>, ModuleError> {
    let m = &f.target;
    for row in &f.matrix {
        if !g.in_target_relations(&g.apply(row)) {
            return Err(ModuleError::NotAComplex);
        }
    }
    let ring = &m.ring;
    // kernel of R^m -> N: syzygies of images together with relations of N
    let nt = &g.target;
    let mut cols: Vec<GradedVector<F>> = g
        .matrix
        .iter()
        .enumerate()
        .map(|(b, row)| (row.clone(), m.degrees[b] + g.shift))
        .collect();
    for r in &nt.relations {
        let d = vector_degree(ring, &nt.degrees, r).flatten().unwrap_or(0);
        cols.push((r.clone(), d));
    }
    let nm = m.ngens();
    let kernel: Vec<GradedVector<F>> = syzygies(ring, &nt.degrees, &cols)
        .into_iter()
        .map(|(v, d)| (v[..nm].to_vec(), d))
        .filter(|(v, _)| v.iter().any(|p| !p.is_zero()))
        .collect();
    // relations: combinations of kernel generators lying in im f + rel M
    let mut cols2 = kernel.clone();
    for (b, row) in f.matrix.iter().enumerate() {
        cols2.push((row.clone(), f.source.degrees[b] + f.shift));
    }
    for r in &m.relations {
        let d = vector_degree(ring, &m.degrees, r).flatten().unwrap_or(0);
        cols2.push((r.clone(), d));
    }
    let nk = kernel.len();
    let relations: Vec<Vec<Poly<F>>> = syzygies(ring, &m.degrees, &cols2)
        .into_iter()
        .map(|(v, _)| v[..nk].to_vec())
        .filter(|v| v.iter().any(|p| !p.is_zero()))
        .collect();
    let h = FPModule {
        ring: ring.clone(),
        sides: m.sides,
        degrees: kernel.iter().map(|k| k.1).collect(),
        relations,
        free: (false, false),
    };
    Ok(h.minimal_presentation())
}

/// Basis of homogeneous module maps `M -> N` raising degree by `shift`.
pub fn hom_space<F: Field>(m: &FPModule<F>, n: &FPModule<F>, shift: i64) -> Vec<GradedMap<F>> {
    assert_eq!(m.ring, n.ring, "modules over different rings");
    let gn = n.groebner();
    let ctx = gn.ctx(ModuleOrder::Top);
    let gb: Vec<SVec<F>> = gn.relations.iter().map(|r| ctx.to_svec(r)).collect();
    // unknowns: coefficients of each generator image on the standard basis
    let bases: Vec<Vec<Key>> = m
        .degrees
        .iter()
        .map(|&d| gn.standard_basis(&ctx, &gb, d + shift))
        .collect();
    let offsets: Vec<usize> = bases
        .iter()
        .scan(0, |acc, b| {
            let o = *acc;
            *acc += b.len();
            Some(o)
        })
        .collect();
    let nunk: usize = bases.iter().map(|b| b.len()).sum();
    if nunk == 0 {
        return Vec::new();
    }
    let mut rows: Vec<Vec<F>> = Vec::new();
    for r in &m.relations {
        // collect the image of every unknown, then read off coordinates
        let mut images: Vec<(usize, SVec<F>)> = Vec::new();
        for (b, a) in r.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, k) in bases[b].iter().enumerate() {
                let mut v = vec![Poly::zero(); gn.ngens()];
                v[k.pos] = a.mul(&Poly::monomial(k.mono, F::one()));
                images.push((offsets[b] + j, reduce(&ctx, ctx.to_svec(&v), &gb)));
            }
        }
        let mut coords: BTreeMap<Key, Vec<F>> = BTreeMap::new();
        for (u, img) in images {
            for (k, c) in img {
                coords.entry(k).or_insert_with(|| vec![F::zero(); nunk])[u] += c;
            }
        }
        rows.extend(coords.into_values());
    }
    let null = if rows.is_empty() {
        Mat::identity(nunk)
    } else {
        Mat::from_rows(rows, nunk).nullspace()
    };
    (0..null.cols)
        .map(|s| {
            let matrix = bases
                .iter()
                .enumerate()
                .map(|(b, basis)| {
                    let mut row = vec![Poly::zero(); gn.ngens()];
                    for (j, k) in basis.iter().enumerate() {
                        let c = null.get(offsets[b] + j, s).clone();
                        row[k.pos].add_term(k.mono, c);
                    }
                    row
                })
                .collect();
            GradedMap {
                source: m.clone(),
                target: n.clone(),
                matrix,
                shift,
            }
        })
        .collect()
}

/// `M (x)_C N` where `C` is the right ring of `M` and the left ring of `N`.
/// The result is presented over `L (x) C (x) R` with `C` acting internally.
pub fn tensor_over<F: Field>(
    m: &FPModule<F>,
    n: &FPModule<F>,
    force: bool,
) -> Result<FPModule<F>, ModuleError> {
    let (ml, mr) = m.sides;
    let (nl, nr) = n.sides;
    let mv = m.ring.nvars();
    if mr != nl
        || m.ring.weights[mv - mr..] != n.ring.weights[..nl]
        || mv != ml + mr
        || n.ring.nvars() != nl + nr
    {
        return Err(ModuleError::RingMismatch);
    }
    if !(m.free.1 || n.free.0 || force) {
        return Err(ModuleError::FlatnessUnverified);
    }
    let right = PolyRing::new(n.ring.weights[nl..].to_vec(), n.ring.names[nl..].to_vec());
    let ring = m.ring.tensor(&right);
    let (a, b) = (m.ngens(), n.ngens());
    let idx = |i: usize, j: usize| i * b + j;
    let lift_m = |p: &Poly<F>| p.shifted(0, mv);
    let lift_n = |p: &Poly<F>| p.shifted(ml, nl + nr);
    let mut relations = Vec::new();
    let zero = || vec![Poly::<F>::zero(); a * b];
    for r in &m.relations {
        for j in 0..b {
            let mut v = zero();
            for (i, p) in r.iter().enumerate() {
                v[idx(i, j)] = lift_m(p);
            }
            relations.push(v);
        }
    }
    for r in &n.relations {
        for i in 0..a {
            let mut v = zero();
            for (j, p) in r.iter().enumerate() {
                v[idx(i, j)] = lift_n(p);
            }
            relations.push(v);
        }
    }
    let degrees = (0..a)
        .flat_map(|i| (0..b).map(move |j| (i, j)))
        .map(|(i, j)| m.degrees[i] + n.degrees[j])
        .collect();
    Ok(FPModule {
        ring,
        sides: (ml, nr),
        degrees,
        relations,
        free: (m.free.0 && n.free.0, false),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::InvariantRing;
    use crate::field::Rational;
    use crate::kernels::{kernel_e, kernel_f, kernel_identity, kernel_s};
    use proptest::prelude::*;

    fn x_ring() -> PolyRing {
        PolyRing::new(vec![1], vec!["x".into()])
    }

    #[test]
    fn groebner_removes_redundant_relations() {
        let x = Poly::<Rational>::var(0);
        let m = FPModule::new(x_ring(), vec![0], vec![vec![x.pow(2)], vec![x.pow(3)]]).unwrap();
        let g = m.groebner();
        assert_eq!(g.relations, vec![vec![x.pow(2)]]);
        assert_eq!(g.groebner(), g);
        assert_eq!(g.hilbert_series().to_string(), "1 + q^2");
    }

    #[test]
    fn truncated_polynomial_ring() {
        let x = Poly::<Rational>::var(0);
        let m = FPModule::new(x_ring(), vec![0], vec![vec![x.pow(4)]]).unwrap();
        assert_eq!(m.hilbert_series().to_string(), "1 + q^2 + q^4 + q^6");
    }

    #[test]
    fn invariant_ring_series() {
        for k in 1..=3u32 {
            let ring = InvariantRing::new(&[k]);
            let m = FPModule::<Rational>::free_module(ring.poly_ring().clone(), vec![0]);
            assert_eq!(m.hilbert_series().denominator, (1..=k).collect::<Vec<_>>());
        }
    }

    #[test]
    fn diagonal_presentation() {
        let d = FPModule::from_bimodule(&kernel_identity::<Rational>(&[1]));
        assert_eq!(d.groebner().relations.len(), 1);
        assert_eq!(d.hilbert_series().to_string(), "(1) / ((1 - q^2))");
        assert_eq!(hom_space(&d, &d, 0).len(), 1);
        assert!(hom_space(&d, &d, -2).is_empty());
        assert_eq!(hom_space(&d, &d, 2).len(), 1);
    }

    #[test]
    fn tensor_of_polynomial_rings() {
        // k[x,y] over (A_{1,1}, A_2), then its transpose
        let e = kernel_e::<Rational>(&[1, 1], 1, 1).unwrap();
        let f = kernel_f::<Rational>(&[0, 2], 1, 1).unwrap();
        let me = FPModule::from_bimodule(&e);
        let mf = FPModule::from_bimodule(&f);
        let t = tensor_over(&me, &mf, false).unwrap();
        let hs = t.hilbert_series();
        let hs = hs.shift(*hs.numerator.keys().next().unwrap());
        let want = HilbertSeries::new(BTreeMap::from([(0, 1), (2, 2), (4, 1)]), vec![1, 2]);
        assert!(hs.equivalent(&want), "{hs}");
    }

    #[test]
    fn koszul_homology() {
        let x = Poly::<Rational>::var(0);
        let ring = x_ring();
        let src = FPModule::free_module(ring.clone(), vec![2]);
        let mid = FPModule::free_module(ring.clone(), vec![0]);
        let zero = FPModule::free_module(ring.clone(), vec![]);
        let f = GradedMap {
            source: src.clone(),
            target: mid.clone(),
            matrix: vec![vec![x.clone()]],
            shift: 0,
        };
        let g = GradedMap {
            source: mid.clone(),
            target: zero.clone(),
            matrix: vec![vec![]],
            shift: 0,
        };
        let h = homology(&f, &g).unwrap();
        assert_eq!(h.hilbert_series().to_string(), "1");
        let f0 = GradedMap {
            source: zero.clone(),
            target: src.clone(),
            matrix: vec![],
            shift: 0,
        };
        let h0 = homology(&f0, &f).unwrap();
        assert_eq!(h0.ngens(), 0);
        let bad = GradedMap {
            source: mid.clone(),
            target: mid.clone(),
            matrix: vec![vec![Poly::one()]],
            shift: 0,
        };
        assert_eq!(homology(&f, &bad), Err(ModuleError::NotAComplex));
    }

    #[test]
    fn koszul_of_diagonal_on_diagonal() {
        let two = PolyRing::new(vec![1, 1], vec!["x".into(), "y".into()]);
        let (x, y) = (Poly::<Rational>::var(0), Poly::<Rational>::var(1));
        let delta = FPModule::new(two.clone(), vec![0], vec![vec![x.sub(&y)]]).unwrap();
        let src = delta.shifted(-2);
        let zero = FPModule::free_module(two.clone(), vec![]);
        let f = GradedMap {
            source: src.clone(),
            target: delta.clone(),
            matrix: vec![vec![x.sub(&y)]],
            shift: 0,
        };
        f.check().unwrap();
        let into = GradedMap {
            source: zero.clone(),
            target: src.clone(),
            matrix: vec![],
            shift: 0,
        };
        let out = GradedMap {
            source: delta.clone(),
            target: zero.clone(),
            matrix: vec![vec![]],
            shift: 0,
        };
        let h1 = homology(&into, &f).unwrap();
        let h0 = homology(&f, &out).unwrap();
        assert_eq!(h1.hilbert_series().to_string(), "(q^2) / ((1 - q^2))");
        assert_eq!(h0.hilbert_series().to_string(), "(1) / ((1 - q^2))");
    }

    #[test]
    fn restriction_map_is_unique() {
        let s = FPModule::from_bimodule(&kernel_s::<Rational>(&[1, 1], 1));
        let d = FPModule::from_bimodule(&kernel_identity::<Rational>(&[1, 1]));
        let lo = *s.degrees.iter().min().unwrap();
        let maps = hom_space(&s, &d, -lo);
        assert_eq!(maps.len(), 1);
        maps[0].check().unwrap();
        let s_series = s.hilbert_series();
        let want = HilbertSeries::new(BTreeMap::from([(0, 1), (2, 2), (4, 1)]), vec![1, 2]);
        assert!(s_series.shift(lo).equivalent(&want), "{s_series}");
    }

    fn small_poly() -> impl Strategy<Value = (u32, Vec<i64>)> {
        (1u32..3, proptest::collection::vec(-2i64..3, 3))
    }

    /// Homogeneous polynomial in `x, y` of degree `2d` from coefficients.
    fn build(d: u32, cs: &[i64]) -> Poly<Rational> {
        let mut p = Poly::zero();
        for (i, &c) in cs.iter().enumerate().take(d as usize + 1) {
            p.add_term(
                Mono::from_exps(&[i as u32, d - i as u32]),
                Rational::from_i64(c),
            );
        }
        p
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn euler_characteristic_is_conserved((da, ca) in small_poly(), (db, cb) in small_poly()) {
            let two = PolyRing::new(vec![1, 1], vec!["x".into(), "y".into()]);
            let (a, b) = (build(da, &ca), build(db, &cb));
            let (da, db) = (2 * da as i64, 2 * db as i64);
            let c2 = FPModule::<Rational>::free_module(two.clone(), vec![da + db]);
            let c1 = FPModule::free_module(two.clone(), vec![da, db]);
            let c0 = FPModule::free_module(two.clone(), vec![0]);
            let zero = FPModule::free_module(two.clone(), vec![]);
            let map = |s: &FPModule<Rational>, t: &FPModule<Rational>, m: Vec<Vec<Poly<Rational>>>| GradedMap { source: s.clone(), target: t.clone(), matrix: m, shift: 0 };
            let f = map(&c2, &c1, vec![vec![b.neg(), a.clone()]]);
            let g = map(&c1, &c0, vec![vec![a.clone()], vec![b.clone()]]);
            let hs = [
                homology(&map(&zero, &c2, vec![]), &f).unwrap(),
                homology(&f, &g).unwrap(),
                homology(&g, &map(&c0, &zero, vec![vec![]; 1])).unwrap(),
            ];
            let chi_terms = c2.hilbert_series().add(&c1.hilbert_series().neg()).add(&c0.hilbert_series());
            let chi_h = hs[0].hilbert_series().add(&hs[1].hilbert_series().neg()).add(&hs[2].hilbert_series());
            prop_assert!(chi_terms.equivalent(&chi_h), "{} vs {}", chi_terms, chi_h);
            prop_assert!(hs[1].groebner().hilbert_series().equivalent(&hs[1].hilbert_series()));
            let sum = hs[0].direct_sum(&hs[2]).hilbert_series();
            prop_assert!(sum.equivalent(&hs[0].hilbert_series().add(&hs[2].hilbert_series())));
        }
    }
}
