//! Differences between two runs.

use crate::error::{Error, Result};
use crate::trajectory::{Sample, Trajectory};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    /// Overlapping time window.
    pub t_start: f64,
    pub t_end: f64,
    pub n_points: usize,
    /// Per-component `(X, Y, Z)` maxima of `|a - b|`.
    pub max_diff: [f64; 3],
    pub rms_diff: [f64; 3],
    /// Largest of `max_diff`.
    pub max_abs: f64,
    /// Largest mode-amplitude difference of the final states on the
    /// common truncation, when both are available.
    pub final_mode_diff: Option<f64>,
    /// Difference of the last samples in the window.
    pub final_xyz_diff: [f64; 3],
}

fn lerp(s: &[Sample], t: f64) -> [f64; 3] {
    let k = s.partition_point(|v| v.t < t);
    let xyz = |v: &Sample| [v.x, v.y, v.z];
    if k == 0 {
        return xyz(&s[0]);
    }
    if k == s.len() {
        return xyz(&s[k - 1]);
    }
    if s[k].t == t {
        return xyz(&s[k]);
    }
    let (a, b) = (&s[k - 1], &s[k]);
    if b.t == a.t {
        return xyz(b);
    }
    let w = (t - a.t) / (b.t - a.t);
    let (pa, pb) = (xyz(a), xyz(b));
    [0, 1, 2].map(|i| pa[i] + w * (pb[i] - pa[i]))
}

/// Compares `(X, Y, Z)` of `b`, linearly interpolated, with `a` at every
/// sample time of `a` inside the overlap of both time ranges.
pub fn compare_trajectories(a: &Trajectory, b: &Trajectory) -> Result<Comparison> {
    let (Some(a0), Some(a1), Some(b0), Some(b1)) = (a.samples.first(), a.samples.last(), b.samples.first(), b.samples.last())
    else {
        return Err(Error::InsufficientData("comparison needs two non-empty trajectories".into()));
    };
    let t_start = a0.t.max(b0.t);
    let t_end = a1.t.min(b1.t);
    // Half a sampling interval of slack absorbs accumulated time rounding.
    let slack = 1e-9 * t_end.abs().max(1.0);
    if t_start > t_end + slack {
        return Err(Error::InsufficientData(format!("time ranges [{}, {}] and [{}, {}] do not overlap", a0.t, a1.t, b0.t, b1.t)));
    }
    let mut max_diff = [0.0f64; 3];
    let mut sq = [0.0f64; 3];
    let mut n = 0;
    let mut last = [0.0; 3];
    for s in a.samples.iter().filter(|s| s.t >= t_start - slack && s.t <= t_end + slack) {
        let q = lerp(&b.samples, s.t);
        let d = [s.x - q[0], s.y - q[1], s.z - q[2]];
        for i in 0..3 {
            max_diff[i] = max_diff[i].max(d[i].abs());
            sq[i] += d[i] * d[i];
        }
        last = d;
        n += 1;
    }
    let rms_diff = sq.map(|v| (v / n.max(1) as f64).sqrt());
    let final_mode_diff = match (&a.final_state, &b.final_state) {
        (Some(fa), Some(fb)) => {
            let (l, m) = (fa.l_max().min(fb.l_max()), fa.m_max().min(fb.m_max()));
            Some(fa.retruncate(l, m).max_abs_diff(&fb.retruncate(l, m)))
        }
        _ => None,
    };
    Ok(Comparison {
        t_start,
        t_end,
        n_points: n,
        max_diff,
        rms_diff,
        max_abs: max_diff.iter().copied().fold(0.0, f64::max),
        final_mode_diff,
        final_xyz_diff: last.map(f64::abs),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::EnergyReport;

    fn line(t0: f64, t1: f64, n: usize, slope: f64) -> Trajectory {
        let samples = (0..=n)
            .map(|k| {
                let t = t0 + (t1 - t0) * k as f64 / n as f64;
                Sample { t, x: slope * t, y: 1.0, z: -t, energy: EnergyReport::default() }
            })
            .collect();
        Trajectory::from_samples(samples)
    }

    #[test]
    fn self_comparison_is_zero() {
        let a = line(0.0, 1.0, 50, 2.0);
        let c = compare_trajectories(&a, &a).unwrap();
        assert_eq!(c.max_abs, 0.0);
        assert_eq!(c.n_points, 51);
    }

    #[test]
    fn interpolation_is_exact_for_linear_series() {
        let a = line(0.0, 1.0, 10, 2.0);
        let b = line(0.0, 2.0, 7, 2.0);
        let c = compare_trajectories(&a, &b).unwrap();
        assert!(c.max_abs < 1e-14, "{c:?}");
    }

    #[test]
    fn offset_is_reported() {
        let a = line(0.0, 1.0, 10, 2.0);
        let b = line(0.5, 1.5, 10, 3.0);
        let c = compare_trajectories(&a, &b).unwrap();
        assert_eq!(c.n_points, 6);
        assert!((c.max_diff[0] - 1.0).abs() < 1e-12);
        assert_eq!(c.max_diff[1], 0.0);
    }

    #[test]
    fn disjoint_ranges_fail() {
        let a = line(0.0, 1.0, 10, 1.0);
        let b = line(2.0, 3.0, 10, 1.0);
        assert!(matches!(compare_trajectories(&a, &b), Err(Error::InsufficientData(_))));
    }
}
