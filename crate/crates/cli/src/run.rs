//! Orchestration: compile, trace, assemble, compare with the oracle.

use std::time::Instant;

use homfly_homology::braid::{
    compile_braid, BraidError, ColouredBraid, CompileError, CompileOptions,
};
use homfly_homology::differential::{default_margin, DnBicomplex};
use homfly_homology::field::{Field, Fp, Rational};
use homfly_homology::homfly::{
    coloured_unknot, specialize_check, LaurentQA, SkeinOracle, MAX_ORACLE_STRANDS,
};
use homfly_homology::projector::{ProjectorCache, ProjectorError};
use homfly_homology::series::{Laurent, TriplyGradedSeries};
use homfly_homology::trace::{assemble, TracedComplex};

use crate::job::{FieldChoice, JobSpec, Normalization, ParseError, Window};
use crate::report::{
    HnOut, Report, SeriesOut, ShiftOut, Stats, TableEntry, Verdict, VerdictStatus,
};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("input: {0}")]
    Parse(#[from] ParseError),
    #[error("input: {0}")]
    Io(String),
    #[error("braid: {0}")]
    Braid(#[from] BraidError),
    #[error("projector: {0}")]
    NotStabilized(#[from] ProjectorError),
    #[error("invariant violated in {0}: {1}")]
    Invariant(&'static str, String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Io(_) | CliError::Braid(_) => 2,
            CliError::NotStabilized(_) => 3,
            CliError::Invariant(..) => 4,
        }
    }
}

impl From<CompileError> for CliError {
    fn from(e: CompileError) -> Self {
        match e {
            CompileError::Braid(b) => CliError::Braid(b),
            CompileError::Projector(p) => CliError::NotStabilized(p),
        }
    }
}

pub fn series_out(s: &TriplyGradedSeries) -> SeriesOut {
    SeriesOut {
        numerator: s.numerator.to_string(),
        denominator: s
            .denominator
            .iter()
            .map(|&m| Laurent::factor_of(m).to_string())
            .collect(),
    }
}

fn table_in_window(l: &Laurent, w: &Window) -> Vec<TableEntry> {
    let mut out: Vec<TableEntry> = l
        .terms
        .iter()
        .filter(|(e, _)| w.contains(**e))
        .map(|(&(q, a, t), &coeff)| TableEntry { q, a, t, coeff })
        .collect();
    out.sort_by_key(|e| (e.t, e.a, -e.q));
    out
}

/// Decategorified value of the closure, when an oracle covers it.
pub fn oracle_for(colours: &[Vec<u32>], word: &[i32]) -> Option<LaurentQA> {
    if colours.iter().all(|c| c == &[1]) && colours.len() <= MAX_ORACLE_STRANDS {
        return Some(SkeinOracle::new().homfly(colours.len(), word));
    }
    if !word.is_empty() {
        return None;
    }
    let mut v = LaurentQA::one();
    for c in colours {
        let f = match c.as_slice() {
            [k] => coloured_unknot(*k),
            [1, 1] => SkeinOracle::new().clasp_unknot_two(),
            _ => return None,
        };
        v = v.mul(&f);
    }
    Some(v)
}

fn verdict(series: Option<&TriplyGradedSeries>, colours: &[Vec<u32>], word: &[i32]) -> Verdict {
    let unavailable = |note: &str| Verdict {
        status: VerdictStatus::Unavailable,
        oracle: None,
        monomial: None,
        note: Some(note.into()),
    };
    let Some(s) = series else {
        return unavailable("no series to specialize");
    };
    let Some(o) = oracle_for(colours, word) else {
        return unavailable("no oracle for these colours");
    };
    match specialize_check(s, &o) {
        Ok((m, n, c)) => Verdict {
            status: VerdictStatus::Match,
            oracle: Some(o.to_string()),
            monomial: Some(Laurent::monomial((n, m, 0), c).to_string()),
            note: None,
        },
        Err(e) => Verdict {
            status: VerdictStatus::Mismatch,
            oracle: Some(o.to_string()),
            monomial: None,
            note: Some(e.to_string()),
        },
    }
}

fn hn<F: Field>(c: &homfly_homology::complexes::Complex<F>, n: u32) -> Result<HnOut, CliError> {
    let mut tc = TracedComplex::full(c);
    let lo = tc.min_degree();
    let margin = default_margin(&c.left, n);
    let mut b = DnBicomplex::new(&mut tc, n);
    b.check(lo, lo + margin)
        .map_err(|e| CliError::Invariant("differential", e.to_string()))?;
    let t = b.table(margin, 400);
    Ok(HnOut {
        n,
        poincare: t.poincare().to_string(),
        euler: t.euler().to_string(),
        total_dim: t.total_dim(),
        settled: t.settled,
    })
}

/// Runs a job over the field `F`.
pub fn run_with<F: Field>(
    job: &JobSpec,
    cache: &mut ProjectorCache,
    stats: bool,
) -> Result<Report, CliError> {
    job.validate()?;
    let start = Instant::now();
    let (hits, misses) = (cache.hits, cache.misses);
    let o = &job.options;
    let b = ColouredBraid::new(job.colours.clone(), job.word.clone())?;
    if o.dn.is_some() && job.colours.iter().any(|c| c.len() > 1) {
        return Err(ParseError::Invalid("dn needs one-part colours (no projectors)".into()).into());
    }
    let opts = CompileOptions {
        t_min: o.t_min,
        twist_depth: o.twist_depth,
    };
    let compiled = compile_braid::<F>(&b, &opts, cache)?;
    let a = assemble(&compiled.complex, compiled.valid_from, o.q_span);
    let spec = verdict(a.series.as_ref(), &job.colours, &job.word);

    let mono = match o.normalization {
        Normalization::Normalized => compiled.shift.monomial(),
        Normalization::Relative => None,
    };
    let (series, table) = {
        let (e, c) = mono.unwrap_or(((0, 0, 0), 1));
        let series = a.series.as_ref().map(|s| s.mul_monomial(e, c));
        let raw = match &series {
            Some(s) => s.expand(o.window.q[0]),
            None => a.table.shift(e).scale(c),
        };
        (series, raw)
    };
    let hn = match o.dn {
        Some(n) => Some(hn(&compiled.complex, n)?),
        None => None,
    };
    Ok(Report {
        job: job.clone(),
        engine: format!("homfly-homology {}", env!("CARGO_PKG_VERSION")),
        field: F::NAME.to_string(),
        series: series.as_ref().map(series_out),
        valid_from: compiled.valid_from,
        table: table_in_window(&table, &o.window),
        shift: ShiftOut {
            value: compiled.shift.to_string(),
            applied: mono.is_some(),
        },
        specialization: spec,
        hn,
        projector_depths: compiled.depths.clone(),
        stats: stats.then(|| Stats {
            elapsed_ms: start.elapsed().as_millis(),
            cache_hits: cache.hits - hits,
            cache_misses: cache.misses - misses,
        }),
    })
}

pub fn run(job: &JobSpec, cache: &mut ProjectorCache, stats: bool) -> Result<Report, CliError> {
    match job.options.field {
        FieldChoice::Rational => run_with::<Rational>(job, cache, stats),
        FieldChoice::Prime => run_with::<Fp>(job, cache, stats),
    }
}
