//! Parameter sweeps in `r` producing bifurcation tables.

use super::{
    classify_with, find_z_maxima, streamwise_periodicity, truncate_transient, AttractorKind, AttractorVerdict, ClassifierConfig,
    LyapunovConfig,
};
use crate::error::{Error, Result};
use crate::gele::StepperConfig;
use crate::ic::{make_initial_state, IcSpec};
use crate::io::write_atomic;
use crate::model::{model_lyapunov, simulate, ModelSpec};
use crate::params::Params;
use crate::spectral::SpectralState;
use crate::trajectory::{csv_err, fmt_f64, Trajectory};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub stepper: StepperConfig,
    pub t_cut: f64,
    pub classifier: ClassifierConfig,
    pub lyapunov: LyapunovConfig,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            stepper: StepperConfig { t_end: 20.0, output_every: 10, ..Default::default() },
            t_cut: super::DEFAULT_T_CUT,
            classifier: ClassifierConfig::default(),
            lyapunov: LyapunovConfig::default(),
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BifurcationRow {
    pub r: f64,
    /// `None` when the run failed; see `error`.
    pub kind: Option<AttractorKind>,
    pub z_periodicity: Option<usize>,
    pub z_max_values: Vec<f64>,
    pub z_max_range: Option<[f64; 2]>,
    pub lyapunov: Option<f64>,
    /// Dominant streamwise index of the final state.
    pub streamwise_periodicity: Option<usize>,
    /// `(X, Y, Z)` at the end of the run.
    pub final_xyz: Option<[f64; 3]>,
    pub error: Option<String>,
}

impl BifurcationRow {
    fn failed(r: f64, e: Error) -> Self {
        Self {
            r,
            kind: None,
            z_periodicity: None,
            z_max_values: Vec::new(),
            z_max_range: None,
            lyapunov: None,
            streamwise_periodicity: None,
            final_xyz: None,
            error: Some(e.to_string()),
        }
    }
}

/// A finished run with its verdict.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub trajectory: Trajectory,
    pub verdict: AttractorVerdict,
    pub row: BifurcationRow,
}

/// Integrates `spec` from `s0`, cuts the transient and classifies the rest.
/// The Lyapunov estimate starts from the final state.
pub fn run_and_classify(spec: &ModelSpec, p: &Params, s0: &SpectralState, cfg: &SweepConfig) -> Result<RunOutcome> {
    let tr = simulate(spec, p, s0, &cfg.stepper)?;
    let (verdict, row) = classify_trajectory(spec, p, &tr, cfg)?;
    Ok(RunOutcome { trajectory: tr, verdict, row })
}

/// Verdict and table row for a trajectory produced by `simulate`.
pub fn classify_trajectory(
    spec: &ModelSpec,
    p: &Params,
    tr: &Trajectory,
    cfg: &SweepConfig,
) -> Result<(AttractorVerdict, BifurcationRow)> {
    let cut = truncate_transient(tr, cfg.t_cut)?;
    let fin = tr.final_state.clone().ok_or_else(|| Error::InsufficientData("trajectory has no final state".into()))?;
    let mut lyap = None;
    let verdict = classify_with(&cut, &cfg.classifier, &mut || {
        let v = model_lyapunov(spec, p, &fin, cfg.stepper.dt, &cfg.lyapunov)?;
        lyap = Some(v);
        Ok(v)
    })?;
    let peaks: Vec<f64> = if verdict.kind == AttractorKind::FixedPoint {
        Vec::new()
    } else {
        find_z_maxima(&cut.samples).into_iter().map(|p| p.1).collect()
    };
    let range = peaks.iter().fold(None, |acc: Option<[f64; 2]>, &v| Some(acc.map_or([v, v], |[a, b]| [a.min(v), b.max(v)])));
    let last = tr.samples.last().expect("non-empty trajectory");
    let row = BifurcationRow {
        r: p.r,
        kind: Some(verdict.kind),
        z_periodicity: verdict.z_periodicity,
        z_max_values: peaks,
        z_max_range: range,
        lyapunov: lyap,
        streamwise_periodicity: Some(streamwise_periodicity(&fin)),
        final_xyz: Some([last.x, last.y, last.z]),
        error: None,
    };
    Ok((verdict, row))
}

fn run_row(spec: &ModelSpec, r: f64, ic: &IcSpec, cfg: &SweepConfig) -> Result<BifurcationRow> {
    let p = spec.params(r)?;
    let s0 = make_initial_state(ic, &p, cfg.seed)?;
    Ok(run_and_classify(spec, &p, &s0, cfg)?.row)
}

/// One integrate-and-classify run per `r`, in parallel. Rows come back in
/// the order of `r_values`; a failed run yields a row with `error` set.
/// `on_row` is called as each row completes.
pub fn sweep_r(
    spec: &ModelSpec,
    r_values: &[f64],
    ic: &IcSpec,
    cfg: &SweepConfig,
    on_row: Option<&(dyn Fn(&BifurcationRow) + Sync)>,
) -> Result<Vec<BifurcationRow>> {
    if r_values.is_empty() {
        return Err(Error::InvalidParameter("sweep needs at least one r value".into()));
    }
    Ok(r_values
        .par_iter()
        .map(|&r| {
            let row = run_row(spec, r, ic, cfg).unwrap_or_else(|e| BifurcationRow::failed(r, e));
            if let Some(f) = on_row {
                f(&row);
            }
            row
        })
        .collect())
}

/// One run per truncation `(L, M)` at fixed `r`, in parallel and in list
/// order. Failed runs come back as rows with `error` set.
pub fn sweep_lm(
    spec: &ModelSpec,
    r: f64,
    lm_values: &[(usize, usize)],
    ic: &IcSpec,
    cfg: &SweepConfig,
) -> Result<Vec<((usize, usize), BifurcationRow)>> {
    if lm_values.is_empty() {
        return Err(Error::InvalidParameter("sweep needs at least one (L, M) pair".into()));
    }
    Ok(lm_values
        .par_iter()
        .map(|&(l, m)| {
            let spec = ModelSpec { l_max: l, m_max: m, grid: None, ..*spec };
            let row = run_row(&spec, r, ic, cfg).unwrap_or_else(|e| BifurcationRow::failed(r, e));
            ((l, m), row)
        })
        .collect())
}

/// Table of a truncation sweep: one line per `(L, M)` with the final
/// `(X, Y, Z)`.
pub fn truncation_csv_string(rows: &[((usize, usize), BifurcationRow)]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["L", "M", "r", "kind", "X", "Y", "Z", "streamwise_periodicity"]).map_err(csv_err)?;
    for ((l, m), row) in rows {
        let xyz = row.final_xyz.map(|v| v.map(fmt_f64));
        let [x, y, z] = xyz.unwrap_or_default();
        w.write_record([
            l.to_string(),
            m.to_string(),
            fmt_f64(row.r),
            row.kind.map_or("Failed", |k| k.as_str()).to_string(),
            x,
            y,
            z,
            row.streamwise_periodicity.map(|p| p.to_string()).unwrap_or_default(),
        ])
        .map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Format(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Long-format table of every `Z` maximum: one `(r, Z_max)` line per peak.
pub fn zmax_csv_string(rows: &[BifurcationRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["r", "z_max"]).map_err(csv_err)?;
    for row in rows {
        if row.kind == Some(AttractorKind::FixedPoint) {
            if let Some([_, _, z]) = row.final_xyz {
                w.write_record([fmt_f64(row.r), fmt_f64(z)]).map_err(csv_err)?;
            }
        }
        for &z in &row.z_max_values {
            w.write_record([fmt_f64(row.r), fmt_f64(z)]).map_err(csv_err)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Format(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn bifurcation_csv_string(rows: &[BifurcationRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["r", "kind", "z_periodicity", "z_max_min", "z_max_max", "n_peaks", "lyapunov"]).map_err(csv_err)?;
    let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
    for row in rows {
        w.write_record([
            fmt_f64(row.r),
            row.kind.map_or("Failed", |k| k.as_str()).to_string(),
            row.z_periodicity.map(|p| p.to_string()).unwrap_or_default(),
            opt(row.z_max_range.map(|r| r[0])),
            opt(row.z_max_range.map(|r| r[1])),
            row.z_max_values.len().to_string(),
            opt(row.lyapunov),
        ])
        .map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Format(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn write_bifurcation_csv(path: &Path, rows: &[BifurcationRow]) -> Result<()> {
    write_atomic(path, bifurcation_csv_string(rows)?.as_bytes())
}
