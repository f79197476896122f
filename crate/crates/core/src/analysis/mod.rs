//! Post-processing of sampled trajectories: transient removal, peak
//! extraction, attractor classification, Lyapunov estimates and sweeps.

mod compare;
mod lyapunov;
mod spectrum;
mod sweep;

pub use compare::{compare_trajectories, Comparison};
pub use lyapunov::{lyapunov_largest, Dynamics, LyapunovConfig};
pub use spectrum::{line_fraction, power_spectrum};
pub use sweep::{
    bifurcation_csv_string, classify_trajectory, run_and_classify, sweep_lm, sweep_r, truncation_csv_string,
    write_bifurcation_csv, zmax_csv_string, BifurcationRow, RunOutcome, SweepConfig,
};

use crate::error::{Error, Result};
use crate::spectral::SpectralState;
use crate::trajectory::{Sample, Trajectory};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Default transient cut in model time.
pub const DEFAULT_T_CUT: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AttractorKind {
    FixedPoint,
    LimitCycle,
    LimitTorus,
    Chaotic,
    Undetermined,
}

impl AttractorKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::FixedPoint => "FixedPoint",
            Self::LimitCycle => "LimitCycle",
            Self::LimitTorus => "LimitTorus",
            Self::Chaotic => "Chaotic",
            Self::Undetermined => "Undetermined",
        }
    }
}

impl std::fmt::Display for AttractorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttractorVerdict {
    pub kind: AttractorKind,
    /// Number of distinct `Z_max` values; set only for limit cycles.
    pub z_periodicity: Option<usize>,
    pub metrics: BTreeMap<String, f64>,
}

/// Thresholds of the classification cascade.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ClassifierConfig {
    /// Relative change of `(X, Y, Z)` over the tail window below which the
    /// trajectory counts as converged.
    pub fixed_point_tol: f64,
    /// Fraction of the samples forming the tail window.
    pub tail_fraction: f64,
    /// Relative spread allowed inside one `Z_max` cluster.
    pub cluster_spread: f64,
    pub max_clusters: usize,
    /// Relative tolerance on repeated inter-peak intervals.
    pub interval_tol: f64,
    /// Share of the fluctuation power that the strongest spectral lines
    /// must hold for a quasiperiodic verdict.
    pub line_fraction: f64,
    pub n_lines: usize,
    /// Largest share of the spectral bins the lines may cover; on short
    /// records this lowers the effective line count.
    pub max_line_coverage: f64,
    /// Half-width of a spectral line in frequency bins.
    pub line_halfwidth: usize,
    /// Largest-Lyapunov threshold (1/t) for a chaotic verdict.
    pub lyapunov_threshold: f64,
    pub min_peaks: usize,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        Self {
            fixed_point_tol: 1e-6,
            tail_fraction: 0.1,
            cluster_spread: 1e-3,
            max_clusters: 8,
            interval_tol: 1e-2,
            line_fraction: 0.95,
            n_lines: 40,
            max_line_coverage: 0.05,
            line_halfwidth: 3,
            lyapunov_threshold: 0.1,
            min_peaks: 20,
        }
    }
}

/// Samples with `t > t_cut`.
pub fn truncate_transient(tr: &Trajectory, t_cut: f64) -> Result<Trajectory> {
    let samples: Vec<Sample> = tr.samples.iter().filter(|s| s.t > t_cut || t_cut <= 0.0).copied().collect();
    if samples.is_empty() {
        return Err(Error::InsufficientData(format!("no samples after t = {t_cut}")));
    }
    Ok(Trajectory {
        samples,
        snapshots: tr.snapshots.iter().filter(|s| s.t > t_cut || t_cut <= 0.0).cloned().collect(),
        final_state: tr.final_state.clone(),
        warnings: tr.warnings.clone(),
    })
}

/// Strict local maxima of `Z`, refined by a parabola through the three
/// samples around each maximum. Returns `(t, Z_max)` pairs.
pub fn find_z_maxima(samples: &[Sample]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for w in samples.windows(3) {
        let (a, b, c) = (w[0].z, w[1].z, w[2].z);
        if b > a && b > c {
            let h = w[1].t - w[0].t;
            let den = a - 2.0 * b + c;
            let off = 0.5 * (a - c) / den;
            out.push((w[1].t + off * h, b - 0.25 * (a - c) * off));
        }
    }
    out
}

/// Relative change of `(X, Y, Z)` over the tail window.
pub fn classify_fixed_point(tr: &Trajectory, cfg: &ClassifierConfig) -> Result<f64> {
    let n = tr.samples.len();
    if n < 2 {
        return Err(Error::InsufficientData(format!("{n} samples")));
    }
    let w = ((n as f64 * cfg.tail_fraction).ceil() as usize).clamp(2, n);
    let tail = &tr.samples[n - w..];
    let end = tail[w - 1];
    let scale = end.x.abs().max(end.y.abs()).max(end.z.abs()).max(1.0);
    let change = tail.iter().map(|s| (s.x - end.x).abs().max((s.y - end.y).abs()).max((s.z - end.z).abs())).fold(0.0, f64::max);
    Ok(change / scale)
}

/// Groups sorted values into clusters separated by gaps larger than
/// `spread * scale`; returns the clusters.
fn clusters(values: &[f64], spread: f64) -> Vec<Vec<f64>> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let scale = v.iter().fold(0.0f64, |a, x| a.max(x.abs())).max(f64::MIN_POSITIVE);
    let mut out: Vec<Vec<f64>> = Vec::new();
    for x in v {
        match out.last_mut() {
            Some(c) if x - c[c.len() - 1] <= spread * scale => c.push(x),
            _ => out.push(vec![x]),
        }
    }
    out
}

/// Z-periodicity if the peaks form a repeating pattern of at most
/// `max_clusters` tight clusters.
fn limit_cycle_period(peaks: &[(f64, f64)], cfg: &ClassifierConfig, metrics: &mut BTreeMap<String, f64>) -> Option<usize> {
    let values: Vec<f64> = peaks.iter().map(|p| p.1).collect();
    let cl = clusters(&values, cfg.cluster_spread);
    metrics.insert("z_max_clusters".into(), cl.len() as f64);
    if cl.len() > cfg.max_clusters {
        return None;
    }
    let worst = cl
        .iter()
        .map(|c| {
            let mean = c.iter().sum::<f64>() / c.len() as f64;
            (c[c.len() - 1] - c[0]) / mean.abs().max(f64::MIN_POSITIVE)
        })
        .fold(0.0, f64::max);
    metrics.insert("peak_spread".into(), worst);
    if worst >= cfg.cluster_spread {
        return None;
    }
    let label = |v: f64| cl.iter().position(|c| v >= c[0] && v <= c[c.len() - 1]).unwrap();
    let labels: Vec<usize> = values.iter().map(|&v| label(v)).collect();
    let intervals: Vec<f64> = peaks.windows(2).map(|w| w[1].0 - w[0].0).collect();
    let max_q = (2 * cfg.max_clusters).min(labels.len() / 2);
    for q in cl.len()..=max_q.max(cl.len()) {
        if q == 0 || labels.len() < 2 * q {
            break;
        }
        let labels_ok = (q..labels.len()).all(|i| labels[i] == labels[i - q]);
        let intervals_ok =
            (q..intervals.len()).all(|i| (intervals[i] - intervals[i - q]).abs() <= cfg.interval_tol * intervals[i - q].abs());
        if labels_ok && intervals_ok {
            metrics.insert("cycle_peaks".into(), q as f64);
            return Some(cl.len());
        }
    }
    None
}

/// Decision cascade on a post-transient trajectory; the Lyapunov estimate
/// is requested only when the cheaper tests are inconclusive.
pub fn classify_with(
    tr: &Trajectory,
    cfg: &ClassifierConfig,
    lyapunov: &mut dyn FnMut() -> Result<f64>,
) -> Result<AttractorVerdict> {
    let mut metrics = BTreeMap::new();
    let change = classify_fixed_point(tr, cfg)?;
    metrics.insert("convergence".into(), change);
    let verdict = |kind, z_periodicity, metrics| Ok(AttractorVerdict { kind, z_periodicity, metrics });
    if change < cfg.fixed_point_tol {
        return verdict(AttractorKind::FixedPoint, None, metrics);
    }
    let peaks = find_z_maxima(&tr.samples);
    metrics.insert("n_peaks".into(), peaks.len() as f64);
    if peaks.len() < cfg.min_peaks {
        return Err(Error::InsufficientData(format!("{} Z maxima, at least {} needed", peaks.len(), cfg.min_peaks)));
    }
    if let Some(p) = limit_cycle_period(&peaks, cfg, &mut metrics) {
        return verdict(AttractorKind::LimitCycle, Some(p), metrics);
    }
    let z = tr.z_series();
    let psd = power_spectrum(&z);
    let width = 2 * cfg.line_halfwidth + 1;
    let n_lines = cfg.n_lines.min(((cfg.max_line_coverage * psd.len() as f64) as usize / width).max(1));
    metrics.insert("n_lines".into(), n_lines as f64);
    let lf = line_fraction(&psd, n_lines, cfg.line_halfwidth);
    metrics.insert("line_fraction".into(), lf);
    let zmax: Vec<f64> = peaks.iter().map(|p| p.1).collect();
    let (lo, hi) = zmax.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    metrics.insert("z_max_width".into(), hi - lo);
    // a dense band merges into one wide cluster
    let cl = clusters(&zmax, cfg.cluster_spread);
    let widest = cl.iter().map(|c| (c[c.len() - 1] - c[0]) / c[0].abs().max(f64::MIN_POSITIVE)).fold(0.0, f64::max);
    let fills_interval = cl.len() > cfg.max_clusters || widest >= cfg.cluster_spread;
    if lf > cfg.line_fraction && fills_interval {
        return verdict(AttractorKind::LimitTorus, None, metrics);
    }
    let lam = lyapunov()?;
    metrics.insert("lyapunov".into(), lam);
    if lam > cfg.lyapunov_threshold && lf <= cfg.line_fraction {
        return verdict(AttractorKind::Chaotic, None, metrics);
    }
    verdict(AttractorKind::Undetermined, None, metrics)
}

/// Cascade without a Lyapunov estimate: trajectories that are neither
/// periodic nor quasiperiodic come out `Undetermined`.
pub fn classify(tr: &Trajectory, cfg: &ClassifierConfig) -> Result<AttractorVerdict> {
    classify_with(tr, cfg, &mut || Ok(f64::NAN))
}

/// Dominant streamwise wavenumber index: the `l >= 1` with the largest
/// temperature power.
pub fn streamwise_periodicity(s: &SpectralState) -> usize {
    let power = |l: usize| (1..=s.m_max()).map(|m| s.theta_at(l, m).norm_sqr()).sum::<f64>();
    (1..=s.l_max())
        .fold((1, f64::NEG_INFINITY), |best, l| {
            let p = power(l);
            if p > best.1 {
                (l, p)
            } else {
                best
            }
        })
        .0
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn series(f: impl Fn(f64) -> f64, t0: f64, t1: f64, dt: f64) -> Trajectory {
        let n = ((t1 - t0) / dt).round() as usize;
        Trajectory::from_samples(
            (0..=n)
                .map(|k| {
                    let t = t0 + k as f64 * dt;
                    Sample { t, x: f(t + 0.1), y: -f(t), z: f(t), ..Default::default() }
                })
                .collect(),
        )
    }

    #[test]
    fn transient_cut() {
        let tr = series(|t| t, 0.0, 10.0, 0.5);
        let cut = truncate_transient(&tr, 3.0).unwrap();
        assert!(cut.samples.iter().all(|s| s.t > 3.0 && s.t <= 10.0));
        assert_eq!(cut.len(), 14);
        assert_eq!(truncate_transient(&tr, 0.0).unwrap().len(), tr.len());
        assert!(truncate_transient(&tr, 11.0).is_err());
    }

    #[test]
    fn sinusoid_peaks() {
        let tr = series(|t| (2.0 * std::f64::consts::PI * t).sin(), 3.0, 10.0, 1e-2);
        let cut = truncate_transient(&tr, 3.0).unwrap();
        let peaks = find_z_maxima(&cut.samples);
        assert_eq!(peaks.len(), 7);
        for (k, (t, z)) in peaks.iter().enumerate() {
            assert!((t - (3.25 + k as f64)).abs() < 1e-4);
            assert!((z - 1.0).abs() < 1e-5);
        }
    }

    #[test]
    fn monotone_tail_has_no_peaks() {
        let tr = series(|t| 29.0 + (-3.0 * t).exp(), 3.0, 10.0, 1e-2);
        assert!(find_z_maxima(&tr.samples).is_empty());
        let v = classify(&tr, &ClassifierConfig::default()).unwrap();
        assert_eq!(v.kind, AttractorKind::FixedPoint);
        assert_eq!(v.z_periodicity, None);
    }

    #[test]
    fn single_frequency_is_a_cycle() {
        let tr = series(|t| 30.0 + 4.0 * (7.0 * t).sin(), 3.0, 40.0, 1e-3);
        let v = classify(&tr, &ClassifierConfig::default()).unwrap();
        assert_eq!(v.kind, AttractorKind::LimitCycle);
        assert_eq!(v.z_periodicity, Some(1));
    }

    #[test]
    fn two_incommensurate_frequencies_are_a_torus() {
        let w2 = 7.0 * (5f64.sqrt() - 1.0) / 2.0;
        let tr = series(|t| 30.0 + 4.0 * (7.0 * t).sin() + 1.5 * (w2 * t).sin(), 3.0, 120.0, 2e-3);
        let v = classify(&tr, &ClassifierConfig::default()).unwrap();
        assert_eq!(v.kind, AttractorKind::LimitTorus, "{:?}", v.metrics);
    }

    #[test]
    fn period_two_cycle() {
        let tr = series(|t| 30.0 + 4.0 * (7.0 * t).sin() + 1.0 * (3.5 * t).sin(), 3.0, 60.0, 1e-3);
        let v = classify(&tr, &ClassifierConfig::default()).unwrap();
        assert_eq!(v.kind, AttractorKind::LimitCycle);
        assert_eq!(v.z_periodicity, Some(2));
    }

    #[test]
    fn streamwise_periodicity_of_single_mode() {
        let mut s = SpectralState::zeros(4, 3);
        s.set_theta(2, 1, Complex64::new(0.1, 0.2));
        assert_eq!(streamwise_periodicity(&s), 2);
    }

    #[test]
    fn too_few_peaks_is_an_error() {
        let tr = series(|t| (7.0 * t).sin(), 3.0, 4.0, 1e-3);
        assert!(classify(&tr, &ClassifierConfig::default()).is_err());
    }
}
