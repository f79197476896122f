//! Sampled model output shared by all three models, and its CSV form
//! (`t,X,Y,Z,E_K,E_P,E_T,Q,V`).

use crate::diagnostics::EnergyReport;
use crate::error::{Error, Result};
use crate::io::write_atomic;
use crate::spectral::SpectralState;
use std::path::Path;

pub const CSV_HEADER: [&str; 9] = ["t", "X", "Y", "Z", "E_K", "E_P", "E_T", "Q", "V"];

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Sample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub energy: EnergyReport,
}

/// Samples in increasing `t`, optional spectral snapshots, and the state at
/// the last step.
#[derive(Debug, Clone, Default)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub snapshots: Vec<SpectralState>,
    pub final_state: Option<SpectralState>,
    pub warnings: Vec<String>,
}

impl Trajectory {
    pub fn from_samples(samples: Vec<Sample>) -> Self {
        Self { samples, ..Default::default() }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }

    pub fn z_series(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.z).collect()
    }

    pub fn energies(&self) -> Vec<EnergyReport> {
        self.samples.iter().map(|s| s.energy).collect()
    }

    pub fn last(&self) -> Option<&Sample> {
        self.samples.last()
    }

    /// Samples with `t0 <= t <= t1`.
    pub fn window(&self, t0: f64, t1: f64) -> Vec<Sample> {
        self.samples.iter().filter(|s| s.t >= t0 && s.t <= t1).copied().collect()
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CSV_HEADER).map_err(csv_err)?;
        for s in &self.samples {
            let e = &s.energy;
            w.write_record([s.t, s.x, s.y, s.z, e.e_k, e.e_p, e.e_t, e.q, e.v].map(fmt_f64)).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Format(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.to_csv_string()?.as_bytes())
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(text.as_bytes());
        let headers = rd.headers().map_err(csv_err)?.clone();
        let col =
            |name: &str| headers.iter().position(|h| h == name).ok_or_else(|| Error::Format(format!("missing column {name}")));
        let idx: Vec<usize> = CSV_HEADER.iter().map(|c| col(c)).collect::<Result<_>>()?;
        let mut samples = Vec::new();
        for rec in rd.records() {
            let rec = rec.map_err(csv_err)?;
            let mut v = [0.0; 9];
            for (k, &i) in idx.iter().enumerate() {
                let field = rec.get(i).ok_or_else(|| Error::Format("short row".into()))?;
                v[k] = field
                    .trim()
                    .parse()
                    .map_err(|_| Error::Format(format!("bad number {field:?} in column {}", CSV_HEADER[k])))?;
            }
            samples.push(Sample {
                t: v[0],
                x: v[1],
                y: v[2],
                z: v[3],
                energy: EnergyReport { e_k: v[4], e_p: v[5], e_t: v[6], q: v[7], v: v[8], t: v[0] },
            });
        }
        Ok(Self::from_samples(samples))
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        Self::from_csv_str(&std::fs::read_to_string(path)?)
    }
}

/// 17 significant digits, enough for a bit-exact read back.
pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub(crate) fn csv_err(e: csv::Error) -> Error {
    Error::Format(e.to_string())
}
