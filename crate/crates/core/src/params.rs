//! Physical and truncation parameters shared by all three models.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, SQRT_2};

/// Nondimensional parameters of the convection problem together with the
/// spectral truncation `(L, M)`.
///
/// `alpha` and `beta` are the fundamental streamwise and vertical
/// wavenumbers; the wavenumbers of mode `(l, m)` are `l * alpha` and
/// `m * beta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub sigma: f64,
    pub r: f64,
    pub ra: f64,
    pub ra_c: f64,
    pub alpha: f64,
    pub beta: f64,
    pub b: f64,
    pub lx: f64,
    pub l_max: usize,
    pub m_max: usize,
}

impl Params {
    /// Standard geometry: `sigma = 10`, `alpha = pi/sqrt(2)`, `beta = pi`,
    /// which gives `b = 8/3` and `Ra_c = 27 pi^4 / 4`.
    pub fn new(r: f64, l_max: usize, m_max: usize) -> Result<Self> {
        Self::with_geometry(10.0, r, PI / SQRT_2, PI, l_max, m_max)
    }

    pub fn with_geometry(sigma: f64, r: f64, alpha: f64, beta: f64, l_max: usize, m_max: usize) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidParameter(format!("r must be positive, got {r}")));
        }
        if !(sigma > 0.0 && alpha > 0.0 && beta > 0.0) {
            return Err(Error::InvalidParameter("sigma, alpha and beta must be positive".into()));
        }
        if l_max < 1 {
            return Err(Error::InvalidParameter("L must be at least 1".into()));
        }
        if m_max < 2 {
            return Err(Error::InvalidParameter("M must be at least 2".into()));
        }
        let k2 = alpha * alpha + beta * beta;
        let ra_c = k2.powi(3) / (alpha * alpha);
        Ok(Self { sigma, r, ra: r * ra_c, ra_c, alpha, beta, b: 4.0 * beta * beta / k2, lx: 2.0 * PI / alpha, l_max, m_max })
    }

    /// Same physics, different truncation.
    pub fn with_truncation(&self, l_max: usize, m_max: usize) -> Result<Self> {
        Self::with_geometry(self.sigma, self.r, self.alpha, self.beta, l_max, m_max)
    }

    /// Same truncation, different normalized Rayleigh number.
    pub fn with_r(&self, r: f64) -> Result<Self> {
        Self::with_geometry(self.sigma, r, self.alpha, self.beta, self.l_max, self.m_max)
    }

    /// `alpha^2 + beta^2`, the factor relating Lorenz time to model time.
    pub fn k2_fundamental(&self) -> f64 {
        self.alpha * self.alpha + self.beta * self.beta
    }

    #[inline]
    pub fn alpha_l(&self, l: i64) -> f64 {
        l as f64 * self.alpha
    }

    #[inline]
    pub fn beta_m(&self, m: usize) -> f64 {
        m as f64 * self.beta
    }

    /// Squared total wavenumber `alpha_l^2 + beta_m^2` of mode `(l, m)`.
    #[inline]
    pub fn k2(&self, l: i64, m: usize) -> f64 {
        let a = self.alpha_l(l);
        let b = self.beta_m(m);
        a * a + b * b
    }

    /// Number of stored modes per field, `(L + 1) * M`.
    pub fn n_modes(&self) -> usize {
        (self.l_max + 1) * self.m_max
    }
}

/// Rescaled Lorenz time `tau = (alpha^2 + beta^2) t`.
pub fn tau_of_t(t: f64, p: &Params) -> f64 {
    p.k2_fundamental() * t
}

pub fn t_of_tau(tau: f64, p: &Params) -> f64 {
    tau / p.k2_fundamental()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_geometry_constants() {
        let p = Params::new(30.0, 1, 2).unwrap();
        assert!((p.b - 8.0 / 3.0).abs() < 1e-14);
        assert!((p.ra_c - 27.0 * PI.powi(4) / 4.0).abs() < 1e-10);
        assert!((p.ra_c - 657.511).abs() < 1e-3);
        assert!((p.ra - 19725.3).abs() < 0.1);
        assert!((p.lx - 2.0 * SQRT_2).abs() < 1e-14);
        assert!((p.lx * p.alpha - 2.0 * PI).abs() < 1e-14);
    }

    #[test]
    fn r_one_is_critical() {
        let p = Params::new(1.0, 1, 2).unwrap();
        assert_eq!(p.ra, p.ra_c);
    }

    #[test]
    fn rejects_bad_truncation() {
        assert!(Params::new(30.0, 0, 2).is_err());
        assert!(Params::new(30.0, 1, 1).is_err());
        assert!(Params::new(-1.0, 1, 2).is_err());
    }

    #[test]
    fn tau_conversion() {
        let p = Params::new(30.0, 1, 2).unwrap();
        assert_eq!(tau_of_t(0.0, &p), 0.0);
        assert!((tau_of_t(1.0, &p) - 1.5 * PI * PI).abs() < 1e-12);
        assert!((tau_of_t(1.0, &p) - 14.804).abs() < 1e-3);
        for x in [0.3, 1.7, 123.25] {
            assert!((t_of_tau(tau_of_t(x, &p), &p) - x).abs() < 1e-15 * x.max(1.0));
        }
    }
}
