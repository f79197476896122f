//! Spectral state, mode bookkeeping, grid transforms and projections.
//!
//! Fields are expanded as
//! `f(x, z) = sum_{l=-L..L} sum_{m=1..M} f_lm exp(i l alpha x) sin(m beta z)`.
//! Only `l >= 0` is stored; negative `l` follows from `f_{-l,m} = conj(f_lm)`.
//! The `m = 0` sine mode vanishes identically and is not part of the state.

mod projection;
pub(crate) mod snapshot;
mod transform;

pub use projection::{lorenz_to_spectral, project_xyz, project_xyz_from_fields, LorenzCoefficients};
pub use snapshot::{read_snapshot, snapshot_from_str, snapshot_to_string, write_snapshot};
pub use transform::{analyze, interior_z, synthesize, uniform_x, PhysicalFields, Transform, ZBasis};

use crate::params::Params;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModeIndex {
    pub l: usize,
    pub m: usize,
}

impl ModeIndex {
    pub fn new(l: usize, m: usize) -> Self {
        debug_assert!(m >= 1, "m = 0 is not a stored mode");
        Self { l, m }
    }
}

/// Complex amplitudes of the streamfunction and temperature perturbation,
/// stored row-major in `(l, m)` with `l = 0..=L`, `m = 1..=M`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralState {
    l_max: usize,
    m_max: usize,
    pub psi: Vec<Complex64>,
    pub theta: Vec<Complex64>,
    pub t: f64,
}

impl SpectralState {
    pub fn zeros(l_max: usize, m_max: usize) -> Self {
        let n = (l_max + 1) * m_max;
        Self { l_max, m_max, psi: vec![Complex64::new(0.0, 0.0); n], theta: vec![Complex64::new(0.0, 0.0); n], t: 0.0 }
    }

    pub fn for_params(p: &Params) -> Self {
        Self::zeros(p.l_max, p.m_max)
    }

    #[inline]
    pub fn l_max(&self) -> usize {
        self.l_max
    }

    #[inline]
    pub fn m_max(&self) -> usize {
        self.m_max
    }

    #[inline]
    pub fn index(&self, l: usize, m: usize) -> usize {
        debug_assert!(l <= self.l_max && (1..=self.m_max).contains(&m));
        l * self.m_max + (m - 1)
    }

    pub fn modes(&self) -> impl Iterator<Item = ModeIndex> + '_ {
        let m_max = self.m_max;
        (0..=self.l_max).flat_map(move |l| (1..=m_max).map(move |m| ModeIndex { l, m }))
    }

    #[inline]
    pub fn psi_at(&self, l: usize, m: usize) -> Complex64 {
        self.psi[self.index(l, m)]
    }

    #[inline]
    pub fn theta_at(&self, l: usize, m: usize) -> Complex64 {
        self.theta[self.index(l, m)]
    }

    pub fn set_psi(&mut self, l: usize, m: usize, v: Complex64) {
        let i = self.index(l, m);
        self.psi[i] = v;
    }

    pub fn set_theta(&mut self, l: usize, m: usize, v: Complex64) {
        let i = self.index(l, m);
        self.theta[i] = v;
    }

    /// Amplitude for a signed streamwise index, using conjugate symmetry
    /// for `l < 0` and zero outside the stored range.
    pub fn psi_signed(&self, l: i64, m: i64) -> Complex64 {
        signed_lookup(&self.psi, self.l_max, self.m_max, l, m)
    }

    pub fn theta_signed(&self, l: i64, m: i64) -> Complex64 {
        signed_lookup(&self.theta, self.l_max, self.m_max, l, m)
    }

    /// Zeroes the imaginary part of every `l = 0` amplitude.
    pub fn enforce_reality(&mut self) {
        for m in 0..self.m_max {
            self.psi[m].im = 0.0;
            self.theta[m].im = 0.0;
        }
    }

    /// Largest `|Im|` among the `l = 0` amplitudes.
    pub fn reality_defect(&self) -> f64 {
        (0..self.m_max).map(|m| self.psi[m].im.abs().max(self.theta[m].im.abs())).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.psi.iter().chain(self.theta.iter()).all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Copy into a different truncation, dropping or zero-padding modes.
    pub fn retruncate(&self, l_max: usize, m_max: usize) -> Self {
        let mut out = Self::zeros(l_max, m_max);
        out.t = self.t;
        for l in 0..=l_max.min(self.l_max) {
            for m in 1..=m_max.min(self.m_max) {
                out.set_psi(l, m, self.psi_at(l, m));
                out.set_theta(l, m, self.theta_at(l, m));
            }
        }
        out
    }

    /// Maximum absolute difference over all amplitudes of two states with
    /// identical truncation.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.l_max, self.m_max), (other.l_max, other.m_max));
        self.psi
            .iter()
            .zip(&other.psi)
            .chain(self.theta.iter().zip(&other.theta))
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.psi.iter().chain(&self.theta).map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Flattens to real coordinates: for each field and mode, `re` then `im`
    /// (the `l = 0` imaginary parts are included and stay zero).
    pub fn to_real_vec(&self) -> Vec<f64> {
        self.psi.iter().chain(&self.theta).flat_map(|c| [c.re, c.im]).collect()
    }

    pub fn from_real_vec(l_max: usize, m_max: usize, t: f64, v: &[f64]) -> Self {
        let mut s = Self::zeros(l_max, m_max);
        let n = s.psi.len();
        assert_eq!(v.len(), 4 * n);
        for i in 0..n {
            s.psi[i] = Complex64::new(v[2 * i], v[2 * i + 1]);
            s.theta[i] = Complex64::new(v[2 * n + 2 * i], v[2 * n + 2 * i + 1]);
        }
        s.t = t;
        s
    }
}

#[inline]
fn signed_lookup(data: &[Complex64], l_max: usize, m_max: usize, l: i64, m: i64) -> Complex64 {
    if m < 1 || m as usize > m_max || l.unsigned_abs() as usize > l_max {
        return Complex64::new(0.0, 0.0);
    }
    let idx = l.unsigned_abs() as usize * m_max + (m as usize - 1);
    if l < 0 {
        data[idx].conj()
    } else {
        data[idx]
    }
}
