//! Clasp projectors `P^-` as truncated limits of full twists.
//!
//! `P^- 1_k = lim T_w^{2l} 1_k`. Every crossing is positive, so all complexes
//! live in degrees `<= 0` and the part in degrees `>= t` only depends on the
//! part of the previous power in degrees `>= t`. We truncate as we go and
//! stop once two consecutive depths agree on the requested window.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::InvariantRing;
use crate::bimodule::Bimodule;
use crate::braid::fold_word;
use crate::complexes::Complex;
use crate::field::Field;
use crate::kernels::kernel_identity;
use crate::poly::{Mono, Poly, MAX_VARS};
use crate::polymat::PolyMatrix;
use crate::sparse::SparseMat;

/// Environment variable naming the projector cache directory.
pub const CACHE_ENV: &str = "HOMFLY_CACHE_DIR";
/// Version tag stored in every cache entry.
pub const CACHE_FORMAT: &str = "projector-cache-v1";

/// Extra homological degrees computed below the requested window.
pub const DEFAULT_T_MARGIN: i64 = 2;
/// Internal degrees probed by the stabilization certificate.
pub const DEFAULT_Q_SPAN: i64 = 8;

#[derive(Clone, Debug)]
pub struct TruncatedProjector<F: Field> {
    pub colours: Vec<u32>,
    /// Number of full twists applied.
    pub depth: usize,
    pub complex: Complex<F>,
    /// Lowest homological degree and highest internal degree certified.
    pub stable_window: (i64, i64),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProjectorError {
    #[error("projector on {colours:?} did not stabilize for t >= {t_min} within {max_depth} full twists")]
    NotStabilized {
        colours: Vec<u32>,
        t_min: i64,
        max_depth: usize,
    },
}

/// Word of the half twist `(T_{n-1})(T_{n-2} T_{n-1}) ... (T_1 ... T_{n-1})`.
pub fn half_twist_word(n: usize) -> Vec<i32> {
    let mut w = Vec::new();
    for start in (1..n).rev() {
        w.extend((start..n).map(|i| i as i32));
    }
    w
}

pub fn half_twist<F: Field>(k: &[u32]) -> Complex<F> {
    assert!(!k.is_empty(), "empty colour block");
    fold_word(
        Complex::single(kernel_identity::<F>(k)),
        k,
        &half_twist_word(k.len()),
        false,
        None,
    )
    .0
}

/// `T_w^2` from `k` back to `k`.
pub fn full_twist_word(n: usize) -> Vec<i32> {
    let mut w = half_twist_word(n);
    w.extend(half_twist_word(n));
    w
}

/// Ranks of `d^t` on internal degrees `lo..=hi`.
pub fn graded_ranks<F: Field>(c: &Complex<F>, t: i64, lo: i64, hi: i64) -> Vec<usize> {
    let src = c.summands(t);
    let tgt = c.summands(t + 1);
    let pieces = |ms: &[Arc<Bimodule<F>>], d: i64| {
        let mut idx: BTreeMap<(usize, usize, Mono), usize> = BTreeMap::new();
        for (s, m) in ms.iter().enumerate() {
            for (b, &g) in m.degrees.iter().enumerate() {
                for mono in m.left.monomials_of_degree(d - g) {
                    let n = idx.len();
                    idx.insert((s, b, mono), n);
                }
            }
        }
        idx
    };
    (lo..=hi)
        .map(|d| {
            let (a, b) = (pieces(src, d), pieces(tgt, d));
            let mut m = SparseMat::zeros(b.len(), a.len());
            for (&(s, bb, mono), &col) in &a {
                for s2 in 0..tgt.len() {
                    let Some(phi) = c.block(t, s, s2) else {
                        continue;
                    };
                    for cc in 0..phi.cols {
                        for (mm, coeff) in &phi.get(bb, cc).terms {
                            if let Some(&row) = b.get(&(s2, cc, mono.mul(mm))) {
                                m.add_to(row, col, coeff.clone());
                            }
                        }
                    }
                }
            }
            m.rank()
        })
        .collect()
}

/// Stabilization certificate: summand degrees in the window, and the ranks
/// of the differentials in internal degrees `lo..=hi`.
pub fn certificate<F: Field>(
    c: &Complex<F>,
    t_min: i64,
    lo: i64,
    hi: i64,
) -> (Vec<(i64, Vec<i64>)>, Vec<Vec<usize>>) {
    let sig = c
        .signature()
        .into_iter()
        .filter(|(t, _)| *t >= t_min)
        .collect();
    let ranks = c
        .terms
        .range(t_min..)
        .map(|(&t, _)| graded_ranks(c, t, lo, hi))
        .collect();
    (sig, ranks)
}

/// Lowest generator degree among terms in degrees `>= t_min`.
fn lowest_degree<F: Field>(c: &Complex<F>, t_min: i64) -> i64 {
    c.terms
        .range(t_min..)
        .flat_map(|(_, v)| v.iter())
        .flat_map(|m| m.degrees.iter().copied())
        .min()
        .unwrap_or(0)
}

/// The projector on `k`, correct in homological degrees `>= t_min`.
pub fn projector_truncated<F: Field>(
    k: &[u32],
    t_min: i64,
    max_depth: usize,
) -> Result<TruncatedProjector<F>, ProjectorError> {
    let id = Complex::single(kernel_identity::<F>(k));
    if k.len() <= 1 {
        let hi = lowest_degree(&id, t_min) + DEFAULT_Q_SPAN;
        return Ok(TruncatedProjector {
            colours: k.to_vec(),
            depth: 0,
            complex: id,
            stable_window: (t_min, hi),
        });
    }
    let work = t_min - DEFAULT_T_MARGIN;
    let word = full_twist_word(k.len());
    let mut prev = id;
    for depth in 0..max_depth {
        let next = fold_word(prev.clone(), k, &word, false, Some(work)).0;
        let lo = lowest_degree(&next, t_min);
        let hi = lo + DEFAULT_Q_SPAN;
        if depth > 0 && certificate(&prev, t_min, lo, hi) == certificate(&next, t_min, lo, hi) {
            log::debug!("projector on {k:?} stable at depth {depth} for t >= {t_min}");
            return Ok(TruncatedProjector {
                colours: k.to_vec(),
                depth,
                complex: prev.truncated_below(t_min),
                stable_window: (t_min, hi),
            });
        }
        prev = next;
    }
    Err(ProjectorError::NotStabilized {
        colours: k.to_vec(),
        t_min,
        max_depth,
    })
}

// ---------------------------------------------------------------------------
// Disk cache

#[derive(Serialize, Deserialize)]
struct PolyRepr(Vec<(Vec<u8>, String)>);

#[derive(Serialize, Deserialize)]
struct MatRepr {
    rows: usize,
    cols: usize,
    entries: Vec<PolyRepr>,
}

#[derive(Serialize, Deserialize)]
struct BimoduleRepr {
    degrees: Vec<i64>,
    action: Vec<MatRepr>,
    label: String,
}

#[derive(Serialize, Deserialize)]
struct Entry {
    format: String,
    field: String,
    colours: Vec<u32>,
    t_min: i64,
    depth: usize,
    stable_window: (i64, i64),
    terms: Vec<(i64, Vec<BimoduleRepr>)>,
    diffs: Vec<(i64, Vec<Vec<Option<MatRepr>>>)>,
}

fn poly_repr<F: Field>(p: &Poly<F>) -> PolyRepr {
    PolyRepr(
        p.terms
            .iter()
            .map(|(m, c)| (m.0.to_vec(), c.to_string()))
            .collect(),
    )
}

fn poly_from<F: Field>(r: &PolyRepr) -> Option<Poly<F>> {
    let mut p = Poly::zero();
    for (e, c) in &r.0 {
        let mut exps = [0u8; MAX_VARS];
        if e.len() != MAX_VARS {
            return None;
        }
        exps.copy_from_slice(e);
        p.add_term(Mono(exps), F::parse(c)?);
    }
    Some(p)
}

fn mat_repr<F: Field>(m: &PolyMatrix<F>) -> MatRepr {
    MatRepr {
        rows: m.rows,
        cols: m.cols,
        entries: m.entries.iter().map(poly_repr).collect(),
    }
}

fn mat_from<F: Field>(r: &MatRepr) -> Option<PolyMatrix<F>> {
    let entries = r
        .entries
        .iter()
        .map(poly_from)
        .collect::<Option<Vec<_>>>()?;
    (entries.len() == r.rows * r.cols).then_some(PolyMatrix {
        rows: r.rows,
        cols: r.cols,
        entries,
    })
}

/// Projectors persisted as JSON files, one per colour block and window.
#[derive(Clone, Debug, Default)]
pub struct ProjectorCache {
    pub dir: Option<PathBuf>,
    pub hits: usize,
    pub misses: usize,
}

impl ProjectorCache {
    /// Uses `dir`, else the directory named by `HOMFLY_CACHE_DIR`; without
    /// either nothing is persisted.
    pub fn new(dir: Option<PathBuf>) -> Self {
        let dir = dir.or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from));
        ProjectorCache {
            dir,
            hits: 0,
            misses: 0,
        }
    }

    fn path<F: Field>(&self, k: &[u32], t_min: i64) -> Option<PathBuf> {
        let field: String = F::NAME
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect();
        let ks: Vec<String> = k.iter().map(|x| x.to_string()).collect();
        self.dir
            .as_ref()
            .map(|d| d.join(format!("p_{field}_{}_t{t_min}.json", ks.join("-"))))
    }

    fn load<F: Field>(&self, k: &[u32], t_min: i64) -> Option<TruncatedProjector<F>> {
        let text = std::fs::read_to_string(self.path::<F>(k, t_min)?).ok()?;
        let e: Entry = serde_json::from_str(&text).ok()?;
        if e.format != CACHE_FORMAT || e.field != F::NAME || e.colours != k || e.t_min != t_min {
            return None;
        }
        let ring = InvariantRing::new(k);
        let mut c = Complex::zero(&ring, &ring);
        for (t, ms) in &e.terms {
            let mut v = Vec::new();
            for m in ms {
                let action = m.action.iter().map(mat_from).collect::<Option<Vec<_>>>()?;
                v.push(Arc::new(Bimodule {
                    left: ring.clone(),
                    right: ring.clone(),
                    degrees: m.degrees.clone(),
                    action,
                    label: m.label.clone(),
                }));
            }
            c.terms.insert(*t, v);
        }
        for (t, rows) in &e.diffs {
            let mut d = Vec::new();
            for row in rows {
                let mut r = Vec::new();
                for b in row {
                    r.push(match b {
                        Some(m) => Some(mat_from(m)?),
                        None => None,
                    });
                }
                d.push(r);
            }
            c.diffs.insert(*t, d);
        }
        Some(TruncatedProjector {
            colours: k.to_vec(),
            depth: e.depth,
            complex: c,
            stable_window: e.stable_window,
        })
    }

    fn store<F: Field>(&self, p: &TruncatedProjector<F>, t_min: i64) {
        let Some(path) = self.path::<F>(&p.colours, t_min) else {
            return;
        };
        let c = &p.complex;
        let e = Entry {
            format: CACHE_FORMAT.to_string(),
            field: F::NAME.to_string(),
            colours: p.colours.clone(),
            t_min,
            depth: p.depth,
            stable_window: p.stable_window,
            terms: c
                .terms
                .iter()
                .map(|(t, v)| {
                    let ms = v
                        .iter()
                        .map(|m| BimoduleRepr {
                            degrees: m.degrees.clone(),
                            action: m.action.iter().map(mat_repr).collect(),
                            label: m.label.clone(),
                        })
                        .collect();
                    (*t, ms)
                })
                .collect(),
            diffs: c
                .diffs
                .iter()
                .map(|(t, d)| {
                    (
                        *t,
                        d.iter()
                            .map(|r| r.iter().map(|b| b.as_ref().map(mat_repr)).collect())
                            .collect(),
                    )
                })
                .collect(),
        };
        if let Some(dir) = path.parent() {
            let _ = std::fs::create_dir_all(dir);
        }
        // write then rename, so readers never see a partial file
        let tmp = path.with_extension("json.tmp");
        let ok = serde_json::to_string(&e)
            .ok()
            .is_some_and(|text| std::fs::write(&tmp, text).is_ok());
        if !ok || std::fs::rename(&tmp, &path).is_err() {
            log::warn!("could not write projector cache entry {}", path.display());
        }
    }

    /// Cached `projector_truncated`.
    pub fn get<F: Field>(
        &mut self,
        k: &[u32],
        t_min: i64,
        max_depth: usize,
    ) -> Result<TruncatedProjector<F>, ProjectorError> {
        if let Some(p) = self.load::<F>(k, t_min) {
            self.hits += 1;
            return Ok(p);
        }
        self.misses += 1;
        let p = projector_truncated::<F>(k, t_min, max_depth)?;
        self.store(&p, t_min);
        Ok(p)
    }
}
