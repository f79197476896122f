//! Power spectrum of a uniformly sampled signal and its line content.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

/// One-sided power of the Hann-windowed, mean-removed signal, bins
/// `1..=n/2`.
pub fn power_spectrum(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    if n < 4 {
        return Vec::new();
    }
    let mean = x.iter().sum::<f64>() / n as f64;
    let mut buf: Vec<Complex64> = x
        .iter()
        .enumerate()
        .map(|(k, &v)| {
            let w = 0.5 - 0.5 * (2.0 * PI * k as f64 / (n - 1) as f64).cos();
            Complex64::new((v - mean) * w, 0.0)
        })
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    buf[1..=n / 2].iter().map(|c| c.norm_sqr()).collect()
}

/// Share of the total power inside the `n_lines` strongest lines, each
/// line taken as its peak bin plus `halfwidth` bins on either side.
pub fn line_fraction(psd: &[f64], n_lines: usize, halfwidth: usize) -> f64 {
    let total: f64 = psd.iter().sum();
    if !(total > 0.0) {
        return 1.0;
    }
    let mut claimed = vec![false; psd.len()];
    let mut order: Vec<usize> = (0..psd.len()).collect();
    order.sort_by(|&a, &b| psd[b].total_cmp(&psd[a]));
    let mut held = 0.0;
    let mut lines = 0;
    for k in order {
        if lines == n_lines {
            break;
        }
        if claimed[k] {
            continue;
        }
        lines += 1;
        for j in k.saturating_sub(halfwidth)..=(k + halfwidth).min(psd.len() - 1) {
            if !claimed[j] {
                claimed[j] = true;
                held += psd[j];
            }
        }
    }
    held / total
}
