//! Reports and their canonical text and JSON forms.

use serde::{Deserialize, Serialize};

use crate::job::{Format, JobSpec};

/// A rational series as numerator plus sorted denominator factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesOut {
    pub numerator: String,
    pub denominator: Vec<String>,
}

/// One nonzero coefficient `coeff * q^q a^a t^t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub q: i64,
    pub a: i64,
    pub t: i64,
    pub coeff: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftOut {
    /// `t^x (-a^2)^y` with half-integral exponents allowed.
    pub value: String,
    /// Whether the series and table include it.
    pub applied: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictStatus {
    Match,
    Mismatch,
    Unavailable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: VerdictStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<String>,
    /// `c q^n a^m` with `series(q, aq, -1) = c q^n a^m oracle`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monomial: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HnOut {
    pub n: u32,
    /// `sum dim q^{-Q} t^{-h}`.
    pub poincare: String,
    pub euler: String,
    pub total_dim: usize,
    pub settled: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub elapsed_ms: u128,
    pub cache_hits: usize,
    pub cache_misses: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub job: JobSpec,
    pub engine: String,
    pub field: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub series: Option<SeriesOut>,
    /// Lowest homological degree computed exactly, for truncated projectors.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub valid_from: Option<i64>,
    pub table: Vec<TableEntry>,
    pub shift: ShiftOut,
    pub specialization: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hn: Option<HnOut>,
    pub projector_depths: Vec<usize>,
    /// Present only on request; it is not deterministic.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stats: Option<Stats>,
}

fn format_entry(e: &TableEntry) -> String {
    format!("{:>4} {:>4} {:>4}  {}", e.q, e.a, e.t, e.coeff)
}

/// Canonical text: the job as TOML followed by the results as comments, so
/// the output parses back to the same job.
pub fn emit_text(r: &Report) -> String {
    let mut s = r.job.to_toml();
    let mut line = |x: String| {
        s.push_str("# ");
        s.push_str(&x);
        s.push('\n');
    };
    line(String::new());
    line(format!("engine: {}", r.engine));
    line(format!("field: {}", r.field));
    match &r.series {
        Some(x) => {
            line(format!("series numerator: {}", x.numerator));
            line(format!(
                "series denominator: [{}]",
                x.denominator.join(", ")
            ));
        }
        None => line("series: not determined in the computed window".into()),
    }
    if let Some(v) = r.valid_from {
        line(format!("exact for homological degree >= {v}"));
    }
    line(format!(
        "shift: {} ({})",
        r.shift.value,
        if r.shift.applied {
            "applied"
        } else {
            "not applied"
        }
    ));
    let v = &r.specialization;
    let status = match v.status {
        VerdictStatus::Match => "match",
        VerdictStatus::Mismatch => "mismatch",
        VerdictStatus::Unavailable => "unavailable",
    };
    line(format!("specialization: {status}"));
    if let Some(o) = &v.oracle {
        line(format!("  oracle: {o}"));
    }
    if let Some(m) = &v.monomial {
        line(format!("  monomial: {m}"));
    }
    if let Some(n) = &v.note {
        line(format!("  note: {n}"));
    }
    if let Some(h) = &r.hn {
        line(format!(
            "H_{}: {} (total dimension {}{})",
            h.n,
            h.poincare,
            h.total_dim,
            if h.settled { "" } else { ", unsettled" }
        ));
        line(format!("H_{} euler: {}", h.n, h.euler));
    }
    if !r.projector_depths.is_empty() {
        let d: Vec<String> = r.projector_depths.iter().map(|d| d.to_string()).collect();
        line(format!("projector depths: {}", d.join(" ")));
    }
    line("table:    q    a    t  coeff".into());
    for e in &r.table {
        line(format!("       {}", format_entry(e)));
    }
    if let Some(st) = &r.stats {
        line(format!(
            "elapsed: {} ms, cache hits {}, misses {}",
            st.elapsed_ms, st.cache_hits, st.cache_misses
        ));
    }
    s
}

pub fn emit_json(r: &Report) -> String {
    let mut s = serde_json::to_string_pretty(r).expect("reports always serialize");
    s.push('\n');
    s
}

pub fn emit(r: &Report, format: Format) -> String {
    match format {
        Format::Text => emit_text(r),
        Format::Json => emit_json(r),
    }
}
