//! Subcommand implementations.

use crate::config::{Overrides, RunConfig};
use crate::CliError;
use rblab::analysis::{
    bifurcation_csv_string, classify as classify_cut, classify_trajectory, compare_trajectories, sweep_lm, sweep_r,
    truncate_transient, truncation_csv_string, zmax_csv_string, AttractorVerdict, BifurcationRow, ClassifierConfig,
    DEFAULT_T_CUT,
};
use rblab::dns::{field_dump_to_string, read_field_dump};
use rblab::ic::make_initial_state;
use rblab::io::write_atomic;
use rblab::model::{simulate, ModelKind};
use rblab::spectral::{project_xyz_from_fields, read_snapshot, synthesize, write_snapshot};
use rblab::trajectory::Trajectory;
use rblab::{Error, Params};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

pub const CONFIG_FILE: &str = "config.toml";
pub const TRAJECTORY_FILE: &str = "trajectory.csv";
pub const SUMMARY_FILE: &str = "summary.json";
pub const FINAL_STATE_FILE: &str = "final_state.json";
pub const FINAL_FIELDS_FILE: &str = "final_fields.json";

fn output_error(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Solver(format!("cannot write {}: {e}", path.display()))
}

fn create_dir(path: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(path).map_err(|e| output_error(path, e))
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    write_atomic(path, text.as_bytes()).map_err(|e| output_error(path, e))
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

/// Contents of `summary.json`.
#[derive(Debug, Serialize, Deserialize)]
pub struct Summary {
    pub model: ModelKind,
    pub r: f64,
    #[serde(rename = "L")]
    pub l_max: usize,
    #[serde(rename = "M")]
    pub m_max: usize,
    pub n_samples: usize,
    pub t_final: f64,
    pub final_xyz: [f64; 3],
    /// Absent when the post-transient window is too short to classify.
    pub verdict: Option<AttractorVerdict>,
    pub classification_note: Option<String>,
    pub lyapunov: Option<f64>,
    pub streamwise_periodicity: Option<usize>,
    pub z_max_values: Vec<f64>,
    pub warnings: Vec<String>,
}

fn snapshot_name(t: f64) -> String {
    format!("state_t{t:.6}.json")
}

/// Points of the field dump written with every run: twice the spectral
/// resolution, with at least 64 by 32 points.
fn dump_grid(l: usize, m: usize) -> (usize, usize) {
    ((2 * (2 * l + 1)).max(64), (2 * (m + 1)).max(32))
}

pub fn run(config_path: Option<&Path>, o: &Overrides) -> Result<(), CliError> {
    let mut c = RunConfig::load(config_path)?;
    c.apply(o);
    let c = c.resolve()?;
    let out = c.out_dir.clone();
    create_dir(&out)?;
    write_text(&out.join(CONFIG_FILE), &c.to_toml())?;

    let spec = c.model_spec();
    let p = spec.params(c.r)?;
    let s0 = make_initial_state(&c.ic, &p, c.seed.unwrap_or(0))?;
    let tr = simulate(&spec, &p, &s0, &c.stepper())?;
    let path = out.join(TRAJECTORY_FILE);
    tr.write_csv(&path).map_err(|e| output_error(&path, e))?;

    let state_params = p.with_truncation(
        tr.final_state.as_ref().map_or(p.l_max, |s| s.l_max()),
        tr.final_state.as_ref().map_or(p.m_max, |s| s.m_max()),
    )?;
    if !tr.snapshots.is_empty() {
        let dir = out.join("snapshots");
        create_dir(&dir)?;
        for s in &tr.snapshots {
            let path = dir.join(snapshot_name(s.t));
            write_snapshot(&path, s, &state_params).map_err(|e| output_error(&path, e))?;
        }
    }
    let fin = tr.final_state.clone().expect("simulate records the final state");
    let path = out.join(FINAL_STATE_FILE);
    write_snapshot(&path, &fin, &state_params).map_err(|e| output_error(&path, e))?;
    let (nx, nz) = dump_grid(fin.l_max(), fin.m_max());
    let fields = synthesize(&fin, p.lx, nx, nz)?;
    write_text(&out.join(FINAL_FIELDS_FILE), &field_dump_to_string(&fields)?)?;

    let last = tr.samples.last().expect("non-empty trajectory");
    let mut summary = Summary {
        model: c.model,
        r: c.r,
        l_max: p.l_max,
        m_max: p.m_max,
        n_samples: tr.samples.len(),
        t_final: last.t,
        final_xyz: [last.x, last.y, last.z],
        verdict: None,
        classification_note: None,
        lyapunov: None,
        streamwise_periodicity: None,
        z_max_values: Vec::new(),
        warnings: tr.warnings.clone(),
    };
    match classify_trajectory(&spec, &p, &tr, &c.sweep_config()) {
        Ok((verdict, row)) => {
            summary.verdict = Some(verdict);
            summary.lyapunov = row.lyapunov;
            summary.streamwise_periodicity = row.streamwise_periodicity;
            summary.z_max_values = row.z_max_values;
        }
        Err(Error::InsufficientData(m)) => summary.classification_note = Some(m),
        Err(e) => return Err(e.into()),
    }
    write_text(&out.join(SUMMARY_FILE), &to_json(&summary))?;
    let kind = summary.verdict.as_ref().map_or("Unclassified", |v| v.kind.as_str());
    println!(
        "{} r={} (L,M)=({},{}) t={} X={:.6} Y={:.6} Z={:.6} verdict={kind}",
        c.model.as_str(),
        c.r,
        p.l_max,
        p.m_max,
        last.t,
        last.x,
        last.y,
        last.z
    );
    Ok(())
}

/// What a sweep iterates over.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepList {
    R(Vec<f64>),
    Lm(Vec<(usize, usize)>),
}

impl SweepList {
    pub fn parse(r_list: Option<&str>, r_range: Option<&str>, lm_list: Option<&str>) -> Result<Self, CliError> {
        let bad = |what: &str, s: &str| CliError::Config(format!("cannot parse {what} {s:?}"));
        let list = if let Some(s) = r_list {
            let v = s
                .split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<f64>().map_err(|_| bad("r value", t)))
                .collect::<Result<Vec<_>, _>>()?;
            Self::R(v)
        } else if let Some(s) = r_range {
            let parts =
                s.split(':').map(|t| t.trim().parse::<f64>().map_err(|_| bad("r range", s))).collect::<Result<Vec<_>, _>>()?;
            let [start, stop, step] = parts[..] else {
                return Err(bad("r range (expected start:stop:step)", s));
            };
            if !(step > 0.0) || !start.is_finite() || !stop.is_finite() {
                return Err(bad("r range", s));
            }
            let n = ((stop - start) / step + 1e-9).floor();
            let v = if n < 0.0 { Vec::new() } else { (0..=n as usize).map(|k| start + k as f64 * step).collect() };
            Self::R(v)
        } else if let Some(s) = lm_list {
            let v = s
                .split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(|t| {
                    let (l, m) = t.split_once(['x', 'X']).ok_or_else(|| bad("truncation", t))?;
                    Ok((l.trim().parse().map_err(|_| bad("truncation", t))?, m.trim().parse().map_err(|_| bad("truncation", t))?))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            Self::Lm(v)
        } else {
            return Err(CliError::Config("one of --r-list, --r-range or --lm-list is required".into()));
        };
        let empty = match &list {
            Self::R(v) => v.is_empty(),
            Self::Lm(v) => v.is_empty(),
        };
        if empty {
            return Err(CliError::Config("sweep list is empty".into()));
        }
        Ok(list)
    }
}

#[derive(Serialize)]
struct SweepDoc<'a> {
    list: &'a SweepList,
    rows: Vec<SweepRowDoc<'a>>,
}

#[derive(Serialize)]
struct SweepRowDoc<'a> {
    #[serde(rename = "L")]
    l_max: usize,
    #[serde(rename = "M")]
    m_max: usize,
    #[serde(flatten)]
    row: &'a BifurcationRow,
}

pub fn sweep(config_path: Option<&Path>, o: &Overrides, list: &SweepList) -> Result<(), CliError> {
    let mut c = RunConfig::load(config_path)?;
    c.apply(o);
    // Defaulted initial amplitudes follow each row's r.
    let template = c.ic;
    let mut c = c.resolve()?;
    c.ic = template;
    let out = c.out_dir.clone();
    create_dir(&out)?;
    let mut echoed = c.to_toml();
    echoed.push_str(&format!("\n[sweep]\n{}", toml::to_string(list).expect("list serializes")));
    write_text(&out.join(CONFIG_FILE), &echoed)?;

    let spec = c.model_spec();
    let cfg = c.sweep_config();
    let progress = |row: &BifurcationRow| {
        let kind = row.kind.map_or("Failed", |k| k.as_str());
        eprintln!("r={} {kind}", row.r);
    };
    let (rows, failed) = match list {
        SweepList::R(rs) => {
            let rows = sweep_r(&spec, rs, &c.ic, &cfg, Some(&progress))?;
            write_text(&out.join("bifurcation.csv"), &bifurcation_csv_string(&rows)?)?;
            write_text(&out.join("zmax.csv"), &zmax_csv_string(&rows)?)?;
            let failed = rows.iter().filter(|r| r.error.is_some()).count();
            let rows: Vec<_> = rows.into_iter().map(|r| ((spec.l_max, spec.m_max), r)).collect();
            (rows, failed)
        }
        SweepList::Lm(lms) => {
            let rows = sweep_lm(&spec, c.r, lms, &c.ic, &cfg)?;
            write_text(&out.join("truncation.csv"), &truncation_csv_string(&rows)?)?;
            let failed = rows.iter().filter(|r| r.1.error.is_some()).count();
            (rows, failed)
        }
    };
    let doc = SweepDoc { list, rows: rows.iter().map(|((l, m), row)| SweepRowDoc { l_max: *l, m_max: *m, row }).collect() };
    write_text(&out.join("sweep.json"), &to_json(&doc))?;
    println!("{} rows, {failed} failed", rows.len());
    if failed > 0 {
        return Err(CliError::Solver(format!("{failed} of {} runs failed; see sweep.json", rows.len())));
    }
    Ok(())
}

/// Loads a run directory (trajectory plus final state) or a bare CSV.
fn load_run(path: &Path) -> Result<Trajectory, CliError> {
    let read_err = |p: &PathBuf, e: Error| CliError::Config(format!("cannot read {}: {e}", p.display()));
    if path.is_dir() {
        let csv = path.join(TRAJECTORY_FILE);
        let mut tr = Trajectory::read_csv(&csv).map_err(|e| read_err(&csv, e))?;
        let fin = path.join(FINAL_STATE_FILE);
        if fin.exists() {
            tr.final_state = Some(read_snapshot(&fin).map_err(|e| read_err(&fin, e))?.0);
        }
        Ok(tr)
    } else {
        Trajectory::read_csv(path).map_err(|e| read_err(&path.to_path_buf(), e))
    }
}

pub fn compare(a: &Path, b: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let report = compare_trajectories(&load_run(a)?, &load_run(b)?)?;
    let text = to_json(&report);
    if let Some(path) = out {
        write_text(path, &text)?;
    }
    print!("{text}");
    Ok(())
}

pub fn classify(csv: &Path, t_cut: Option<f64>, config: Option<&Path>, out: Option<&Path>) -> Result<(), CliError> {
    let (cfg, file_cut) = match config {
        Some(p) => {
            let c = RunConfig::load(Some(p))?;
            (c.classifier, c.t_cut)
        }
        None => (ClassifierConfig::default(), DEFAULT_T_CUT),
    };
    let tr = load_run(csv)?;
    let cut = truncate_transient(&tr, t_cut.unwrap_or(file_cut))?;
    let verdict = classify_cut(&cut, &cfg)?;
    let text = to_json(&verdict);
    if let Some(path) = out {
        write_text(path, &text)?;
    }
    print!("{text}");
    Ok(())
}

#[derive(Serialize)]
struct Projection {
    #[serde(rename = "X")]
    x: f64,
    #[serde(rename = "Y")]
    y: f64,
    #[serde(rename = "Z")]
    z: f64,
}

pub fn project(fields: &Path, r: f64, out: Option<&Path>) -> Result<(), CliError> {
    let f = read_field_dump(fields).map_err(|e| CliError::Config(format!("cannot read {}: {e}", fields.display())))?;
    let p = Params::new(r, 1, 2)?;
    let (x, y, z) = project_xyz_from_fields(&f, &p);
    let text = to_json(&Projection { x, y, z });
    if let Some(path) = out {
        write_text(path, &text)?;
    }
    print!("{text}");
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r_range_includes_stop() {
        let l = SweepList::parse(None, Some("1:5:1"), None).unwrap();
        assert_eq!(l, SweepList::R(vec![1.0, 2.0, 3.0, 4.0, 5.0]));
        let l = SweepList::parse(None, Some("0.5:1.0:0.1"), None).unwrap();
        let SweepList::R(v) = l else { panic!() };
        assert_eq!(v.len(), 6);
    }

    #[test]
    fn lm_list_parses() {
        let l = SweepList::parse(None, None, Some("1x2, 4x4,10X10")).unwrap();
        assert_eq!(l, SweepList::Lm(vec![(1, 2), (4, 4), (10, 10)]));
    }

    #[test]
    fn empty_lists_are_usage_errors() {
        assert!(matches!(SweepList::parse(Some(""), None, None), Err(CliError::Config(_))));
        assert!(matches!(SweepList::parse(None, Some("5:1:1"), None), Err(CliError::Config(_))));
        assert!(matches!(SweepList::parse(None, None, Some(" , ")), Err(CliError::Config(_))));
    }

    #[test]
    fn malformed_lists_are_usage_errors() {
        assert!(SweepList::parse(Some("1,a"), None, None).is_err());
        assert!(SweepList::parse(None, Some("1:2"), None).is_err());
        assert!(SweepList::parse(None, Some("1:2:0"), None).is_err());
        assert!(SweepList::parse(None, None, Some("4-4")).is_err());
    }
}
