//! Job documents: the TOML input format and its canonical emission.

use serde::{Deserialize, Serialize};

use crate::report::Report;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldChoice {
    #[default]
    Rational,
    Prime,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    #[default]
    Relative,
    Normalized,
}

/// Inclusive exponent bounds of the coefficient table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Window {
    pub q: [i64; 2],
    pub a: [i64; 2],
    pub t: [i64; 2],
}

impl Default for Window {
    fn default() -> Self {
        Window {
            q: [-16, 4],
            a: [-16, 16],
            t: [-8, 8],
        }
    }
}

impl Window {
    pub fn contains(&self, (q, a, t): (i64, i64, i64)) -> bool {
        let inside = |x: i64, b: [i64; 2]| b[0] <= x && x <= b[1];
        inside(q, self.q) && inside(a, self.a) && inside(t, self.t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct JobOptions {
    pub field: FieldChoice,
    /// Maximal number of full twists per projector.
    pub twist_depth: usize,
    /// Lowest homological degree kept in projectors.
    pub t_min: i64,
    /// Number of internal degrees traced.
    pub q_span: i64,
    pub window: Window,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dn: Option<u32>,
    pub format: Format,
    pub normalization: Normalization,
}

impl Default for JobOptions {
    fn default() -> Self {
        JobOptions {
            field: FieldChoice::Rational,
            twist_depth: 8,
            t_min: -8,
            q_span: 24,
            window: Window::default(),
            dn: None,
            format: Format::Text,
            normalization: Normalization::Relative,
        }
    }
}

/// A coloured braid and what to compute from it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    /// One partition per strand, parts weakly increasing.
    pub colours: Vec<Vec<u32>>,
    /// Signed 1-based generator indices.
    #[serde(default)]
    pub word: Vec<i32>,
    #[serde(default)]
    pub options: JobOptions,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("{0}")]
    Toml(String),
    #[error("{0}")]
    Json(String),
    #[error("{0}")]
    Invalid(String),
}

impl JobSpec {
    /// Canonical TOML form.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("job specs always serialize")
    }

    pub fn validate(&self) -> Result<(), ParseError> {
        let o = &self.options;
        if self.colours.is_empty() {
            return Err(ParseError::Invalid(
                "colours must list at least one strand".into(),
            ));
        }
        if o.q_span <= 0 || o.twist_depth == 0 {
            return Err(ParseError::Invalid(
                "q_span and twist_depth must be positive".into(),
            ));
        }
        if o.dn == Some(0) {
            return Err(ParseError::Invalid("dn must be positive".into()));
        }
        let w = &o.window;
        if w.q[0] > w.q[1] || w.a[0] > w.a[1] || w.t[0] > w.t[1] {
            return Err(ParseError::Invalid("window bounds must be ordered".into()));
        }
        Ok(())
    }
}

/// Reads a job document. A JSON report is accepted too; its job is returned.
pub fn parse_input(text: &str) -> Result<JobSpec, ParseError> {
    let job = if text.trim_start().starts_with('{') {
        let r: Report = serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
        r.job
    } else {
        toml::from_str(text).map_err(|e| ParseError::Toml(e.to_string()))?
    };
    job.validate()?;
    Ok(job)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_document() {
        let j = parse_input("colours = [[1], [1]]\nword = [1, 1, 1]\n").unwrap();
        assert_eq!(j.colours, vec![vec![1], vec![1]]);
        assert_eq!(j.options, JobOptions::default());
        assert_eq!(parse_input(&j.to_toml()).unwrap(), j);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let e = parse_input("colours = [[1]]\nwrod = [1]\n").unwrap_err();
        assert!(e.to_string().contains("wrod"), "{e}");
        let e = parse_input("colours = [[1]]\n[options]\ndepth = 3\n").unwrap_err();
        assert!(e.to_string().contains("depth"), "{e}");
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_input("colours = [[1]\n").unwrap_err();
        assert!(e.to_string().contains("line 1"), "{e}");
    }
}
