//! Kinetic and potential energies, their rates, and the energy balance.
//!
//! With `u = -psi_z`, `w = psi_x`, over one periodic cell:
//!
//! ```text
//! E_K = int 1/2 (u^2 + w^2) dx dz      E_P = int -sigma Ra z theta dx dz
//! V   = -sigma int |lap psi|^2 dx dz   Q   = -sigma Ra int theta_z(x, 1) dx
//! ```
//!
//! so that `dE_T/dt = Q + V` for the full equations.

use crate::error::{Error, Result};
use crate::params::Params;
use crate::spectral::{analyze, PhysicalFields, SpectralState, Transform, ZBasis};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EnergyReport {
    pub e_k: f64,
    pub e_p: f64,
    pub e_t: f64,
    pub q: f64,
    pub v: f64,
    pub t: f64,
}

/// Spectral `(E_K, E_P, E_T)`.
pub fn energies_spectral(s: &SpectralState, p: &Params) -> (f64, f64, f64) {
    let mut e_k = 0.0;
    for l in 0..=s.l_max() {
        let w = if l == 0 { 1.0 } else { 2.0 };
        for m in 1..=s.m_max() {
            e_k += w * p.k2(l as i64, m) * s.psi_at(l, m).norm_sqr();
        }
    }
    e_k *= PI / (2.0 * p.alpha);
    let mut e_p = 0.0;
    for m in 1..=s.m_max() {
        e_p += parity(m) * s.theta_at(0, m).re / p.beta_m(m);
    }
    e_p *= p.sigma * p.ra * 2.0 * PI / p.alpha;
    (e_k, e_p, e_k + e_p)
}

/// Spectral `(Q, V)`.
pub fn energy_rates(s: &SpectralState, p: &Params) -> (f64, f64) {
    let mut v = 0.0;
    for l in 0..=s.l_max() {
        let w = if l == 0 { 1.0 } else { 2.0 };
        for m in 1..=s.m_max() {
            let k2 = p.k2(l as i64, m);
            v += w * k2 * k2 * s.psi_at(l, m).norm_sqr();
        }
    }
    v *= -p.sigma * PI / p.alpha;
    let mut q = 0.0;
    for m in 1..=s.m_max() {
        q += p.beta_m(m) * parity(m) * s.theta_at(0, m).re;
    }
    q *= -p.sigma * p.ra * 2.0 * PI / p.alpha;
    (q, v)
}

pub fn energy_report(s: &SpectralState, p: &Params) -> EnergyReport {
    let (e_k, e_p, e_t) = energies_spectral(s, p);
    let (q, v) = energy_rates(s, p);
    EnergyReport { e_k, e_p, e_t, q, v, t: s.t }
}

/// `cos(m pi)`.
fn parity(m: usize) -> f64 {
    if m % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `(E_K, E_P, E_T)` by quadrature of the physical integrands. The fields are
/// first expanded at the truncation of `p`; velocities are differentiated
/// spectrally and the integrands sampled on Gauss-Legendre heights.
pub fn energies_grid(f: &PhysicalFields, p: &Params) -> Result<(f64, f64, f64)> {
    let s = analyze(f, p)?;
    let nq = 2 * p.m_max + 24;
    let (nodes, weights) = gauss_legendre_unit(nq);
    let nx = f.nx;
    let mut tr = Transform::with_z_nodes(p.l_max, p.m_max, nx, nodes.clone())?;
    let n = p.n_modes();
    let mut dz = vec![num_complex::Complex64::new(0.0, 0.0); n];
    let mut dx = dz.clone();
    for l in 0..=p.l_max {
        let al = p.alpha_l(l as i64);
        for m in 1..=p.m_max {
            let k = l * p.m_max + m - 1;
            dz[k] = s.psi[k] * p.beta_m(m);
            dx[k] = s.psi[k] * num_complex::Complex64::new(0.0, al);
        }
    }
    let mut u = vec![0.0; nx * nq];
    let mut w = vec![0.0; nx * nq];
    tr.to_grid_pair(&dz, ZBasis::Cos, &dx, ZBasis::Sin, &mut u, &mut w);
    let mut th = vec![0.0; nx * nq];
    tr.to_grid(&s.theta, ZBasis::Sin, &mut th);
    let hx = f.lx / nx as f64;
    let (mut e_k, mut e_p) = (0.0, 0.0);
    for j in 0..nq {
        let row = j * nx..(j + 1) * nx;
        let k: f64 = u[row.clone()].iter().zip(&w[row.clone()]).map(|(a, b)| a * a + b * b).sum();
        let t: f64 = th[row].iter().sum();
        e_k += weights[j] * 0.5 * k * hx;
        e_p += weights[j] * nodes[j] * t * hx;
    }
    e_p *= -p.sigma * p.ra;
    Ok((e_k, e_p, e_k + e_p))
}

/// Gauss-Legendre nodes and weights on `[0, 1]`.
pub(crate) fn gauss_legendre_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut t = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, t);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * t * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (t * p1 - p0) / (t * t - 1.0);
            let dt = p1 / dp;
            t -= dt;
            if dt.abs() < 1e-16 {
                break;
            }
        }
        x[i] = 0.5 * (1.0 - t);
        w[i] = 1.0 / ((1.0 - t * t) * dp * dp);
    }
    (x, w)
}

/// One point of the energy-balance check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BalancePoint {
    pub t: f64,
    /// `dE_T/dt - (Q + V)` divided by `max |V|` over the series.
    pub residual: f64,
}

/// Centered-difference energy balance over a uniformly sampled series.
pub fn balance_residual(reports: &[EnergyReport]) -> Result<Vec<BalancePoint>> {
    if reports.len() < 3 {
        return Err(Error::InsufficientData(format!("energy balance needs at least 3 samples, got {}", reports.len())));
    }
    let vmax = reports.iter().map(|e| e.v.abs()).fold(0.0, f64::max);
    let scale = if vmax > 0.0 { vmax } else { 1.0 };
    Ok(reports
        .windows(3)
        .map(|w| {
            let de = (w[2].e_t - w[0].e_t) / (w[2].t - w[0].t);
            BalancePoint { t: w[1].t, residual: (de - (w[1].q + w[1].v)) / scale }
        })
        .collect())
}

/// Phase-space divergence of the truncated model over its real coordinates.
pub fn divergence_constant(p: &Params) -> f64 {
    let mut sum = 0.0;
    for l in 0..=p.l_max {
        let w = if l == 0 { 1.0 } else { 2.0 };
        for m in 1..=p.m_max {
            sum += w * p.k2(l as i64, m);
        }
    }
    -(p.sigma + 1.0) * sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{lorenz_to_spectral, synthesize};
    use num_complex::Complex64;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre_unit(10);
        for k in 0..20 {
            let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k)).sum();
            assert!((q - 1.0 / (k as f64 + 1.0)).abs() < 1e-14, "degree {k}");
        }
    }

    #[test]
    fn initial_lorenz_energies() {
        let p = Params::new(30.0, 1, 2).unwrap();
        let s = lorenz_to_spectral(0.01, 0.0, 29.0, &p);
        let (e_k, e_p, e_t) = energies_spectral(&s, &p);
        assert!((e_k - 4.71e-3).abs() < 4.71e-6, "{e_k}");
        assert!((e_p + 2.73e4).abs() < 2.73e1, "{e_p}");
        assert_eq!(e_t, e_k + e_p);
    }

    #[test]
    fn zero_state_has_no_energy() {
        let p = Params::new(30.0, 3, 3).unwrap();
        let s = SpectralState::for_params(&p);
        assert_eq!(energies_spectral(&s, &p), (0.0, 0.0, 0.0));
        assert_eq!(energy_rates(&s, &p), (0.0, 0.0));
    }

    #[test]
    fn single_theta_mode_potential_energy() {
        let p = Params::new(30.0, 2, 4).unwrap();
        let mut s = SpectralState::for_params(&p);
        s.set_theta(0, 2, Complex64::new(1.0, 0.0));
        let f = synthesize(&s, p.lx, 16, 16).unwrap();
        let (_, e_p, _) = energies_grid(&f, &p).unwrap();
        // -sigma Ra l_x int_0^1 z sin(2 pi z) dz = sigma Ra l_x / (2 pi)
        let exact = p.sigma * p.ra * p.lx / (2.0 * PI);
        assert!((e_p - exact).abs() < 1e-10 * exact);
        let (_, e_p_s, _) = energies_spectral(&s, &p);
        assert!((e_p_s - exact).abs() < 1e-10 * exact);
    }

    #[test]
    fn mode_pair_contribution_to_divergence() {
        let p = Params::new(30.0, 1, 2).unwrap();
        let k2 = p.k2_fundamental();
        let full = divergence_constant(&p);
        let without_11 = full + (p.sigma + 1.0) * 2.0 * k2;
        let expected: f64 = -(p.sigma + 1.0) * (p.k2(0, 1) + p.k2(0, 2) + 2.0 * p.k2(1, 2));
        assert!((without_11 - expected).abs() < 1e-10);
    }

    #[test]
    fn balance_needs_three_samples() {
        let e = EnergyReport::default();
        assert!(balance_residual(&[e, e]).is_err());
        let flat: Vec<EnergyReport> = (0..5).map(|i| EnergyReport { t: i as f64, ..Default::default() }).collect();
        assert!(balance_residual(&flat).unwrap().iter().all(|b| b.residual == 0.0));
    }
}
