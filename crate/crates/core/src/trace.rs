//! Per-step records produced by an incremental run.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub k: usize,
    #[serde(rename = "DeltaT")]
    pub delta_t: f64,
    pub a: f64,
    #[serde(rename = "Delta")]
    pub delta: f64,
    #[serde(rename = "P")]
    pub p: f64,
    #[serde(rename = "G_DD")]
    pub g_dd: Option<f64>,
    pub dissipative: bool,
    pub failed: bool,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TraceMeta {
    pub solver: String,
    pub dataset: Option<String>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SolutionTrace {
    pub steps: Vec<TraceStep>,
    pub meta: TraceMeta,
}

const HEADER: [&str; 8] = ["k", "DeltaT", "a", "Delta", "P", "G_DD", "dissipative", "failed"];

impl SolutionTrace {
    pub fn new(meta: TraceMeta) -> Self {
        Self {
            steps: Vec::new(),
            meta,
        }
    }

    pub fn failed(&self) -> bool {
        self.steps.last().is_some_and(|s| s.failed)
    }

    pub fn crack_lengths(&self) -> impl Iterator<Item = f64> + '_ {
        self.steps.iter().map(|s| s.a)
    }

    pub fn final_crack_length(&self) -> Option<f64> {
        self.steps.last().map(|s| s.a)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::WriterBuilder::new().has_headers(false).from_writer(w);
        wr.write_record(HEADER)?;
        for s in &self.steps {
            wr.serialize(s)?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(r);
        if rd.headers()?.iter().collect::<Vec<_>>() != HEADER {
            return Err(Error::invalid("csv", format!("expected header `{}`", HEADER.join(","))));
        }
        let steps = rd.deserialize().collect::<Result<Vec<TraceStep>, _>>()?;
        Ok(Self {
            steps,
            meta: TraceMeta::default(),
        })
    }
}
