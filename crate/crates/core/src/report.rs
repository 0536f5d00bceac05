//! Serializable reports and their CSV/JSON encodings.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::motif::MotifId;

/// One row of an estimate or exact report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MotifReport {
    pub k: u8,
    pub m: u8,
    pub canonical_code: u32,
    pub concentration: f64,
    pub count_estimate: Option<f64>,
    pub stderr: Option<f64>,
    pub ci95_lo: Option<f64>,
    pub ci95_hi: Option<f64>,
}

impl MotifReport {
    pub fn id(&self) -> MotifId {
        MotifId::new(self.k, self.m)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub graph: String,
    pub k: usize,
    pub method: String,
    /// Distinct-query budget per run, when the run was query-limited.
    #[serde(rename = "Q")]
    pub queries: Option<u64>,
    /// Step budget per run, when the run was step-limited.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<u64>,
    pub runs: u32,
    pub burn_in: u64,
    pub seed: u64,
    /// Runs where every per-motif sum stayed zero; left out of the statistics.
    #[serde(default)]
    pub runs_without_samples: u32,
    #[serde(default)]
    pub degree_sum_estimate: Option<f64>,
    pub motifs: Vec<MotifReport>,
}

impl EstimateReport {
    pub fn motif(&self, id: MotifId) -> Option<&MotifReport> {
        self.motifs.iter().find(|r| r.id() == id)
    }

    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        serde_json::to_writer_pretty(out, self)?;
        Ok(())
    }

    pub fn read_json<R: std::io::Read>(input: R) -> Result<Self> {
        Ok(serde_json::from_reader(input)?)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv_writer(out);
        w.write_record([
            "graph",
            "k",
            "m",
            "canonical_code",
            "method",
            "Q",
            "runs",
            "concentration",
            "stderr",
            "ci95_lo",
            "ci95_hi",
            "count_estimate",
        ])
        .map_err(csv_error)?;
        for r in &self.motifs {
            w.write_record([
                self.graph.clone(),
                r.k.to_string(),
                r.m.to_string(),
                r.canonical_code.to_string(),
                self.method.clone(),
                opt(self.queries),
                self.runs.to_string(),
                r.concentration.to_string(),
                opt(r.stderr),
                opt(r.ci95_lo),
                opt(r.ci95_hi),
                opt(r.count_estimate),
            ])
            .map_err(csv_error)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Estimate against exact values for one motif.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub k: u8,
    pub m: u8,
    pub canonical_code: u32,
    pub estimate: f64,
    pub exact: f64,
    /// `(estimate - exact) / exact`; absent when the exact value is 0.
    pub relative_error: Option<f64>,
    /// Whether the exact value lies inside the estimate's 95% interval.
    pub within_ci: Option<bool>,
    pub count_estimate: Option<f64>,
    pub count_exact: Option<f64>,
    pub count_relative_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub graph: String,
    pub k: usize,
    pub method: String,
    #[serde(rename = "Q")]
    pub queries: Option<u64>,
    pub runs: u32,
    pub motifs: Vec<ComparisonRow>,
}

impl ComparisonReport {
    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        serde_json::to_writer_pretty(out, self)?;
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv_writer(out);
        w.write_record([
            "graph",
            "k",
            "m",
            "canonical_code",
            "method",
            "Q",
            "runs",
            "estimate",
            "exact",
            "relative_error",
            "within_ci",
            "count_estimate",
            "count_exact",
            "count_relative_error",
        ])
        .map_err(csv_error)?;
        for r in &self.motifs {
            w.write_record([
                self.graph.clone(),
                r.k.to_string(),
                r.m.to_string(),
                r.canonical_code.to_string(),
                self.method.clone(),
                opt(self.queries),
                self.runs.to_string(),
                r.estimate.to_string(),
                r.exact.to_string(),
                opt(r.relative_error),
                opt(r.within_ci),
                opt(r.count_estimate),
                opt(r.count_exact),
                opt(r.count_relative_error),
            ])
            .map_err(csv_error)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().from_writer(out)
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::InvalidArgument(format!("csv: {other:?}")),
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> EstimateReport {
        EstimateReport {
            graph: "toy, with comma".into(),
            k: 3,
            method: "wrw".into(),
            queries: Some(100),
            steps: None,
            runs: 2,
            burn_in: 1000,
            seed: 7,
            runs_without_samples: 0,
            degree_sum_estimate: Some(10.0),
            motifs: vec![MotifReport {
                k: 3,
                m: 1,
                canonical_code: 3,
                concentration: 0.5,
                count_estimate: None,
                stderr: Some(0.1),
                ci95_lo: Some(0.3),
                ci95_hi: Some(0.7),
            }],
        }
    }

    #[test]
    fn json_round_trip_uses_q() {
        let r = sample();
        let mut buf = Vec::new();
        r.write_json(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.contains("\"Q\": 100"));
        assert!(!text.contains("steps"));
        assert_eq!(EstimateReport::read_json(&buf[..]).unwrap(), r);
    }

    #[test]
    fn csv_columns() {
        let mut buf = Vec::new();
        sample().write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "graph,k,m,canonical_code,method,Q,runs,concentration,stderr,ci95_lo,ci95_hi,count_estimate"
        );
        assert_eq!(
            lines.next().unwrap(),
            "\"toy, with comma\",3,1,3,wrw,100,2,0.5,0.1,0.3,0.7,"
        );
    }
}
