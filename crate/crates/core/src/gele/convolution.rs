//! Direct evaluation of the Galerkin convolution sums.
//!
//! For output mode `(l, m)` the streamfunction term is
//!
//! ```text
//! N_psi(l,m) = sum_j sum_k (i a_j b_k / 2) psi(l-j, k)
//!     [ (a_{l-j}^2 - a_j^2 + b_k^2 - b_{m-k}^2) psi(j, m-k)
//!     - (a_{l-j}^2 - a_j^2 + b_k^2 - b_{k-m}^2) psi(j, k-m)
//!     + (a_{l-j}^2 - a_j^2 + b_k^2 - b_{m+k}^2) psi(j, m+k) ]
//! ```
//!
//! and the temperature term is
//!
//! ```text
//! N_theta(l,m) = sum_j sum_k (i a_j b_k / 2)
//!     [ (theta(j,m-k) - theta(j,k-m) + theta(j,m+k)) psi(l-j,k)
//!     - (psi(j,m-k)   - psi(j,k-m)   + psi(j,m+k))   theta(l-j,k) ]
//! ```
//!
//! with `a_j = j alpha`, `b_k = k beta`, and amplitudes taken as zero for
//! vertical indices outside `1..=M` (the `k = 0` terms carry `b_0 = 0`).
//!
//! Writing `G(a)_{m,k} = a_{m-k} - a_{k-m} + a_{m+k}` and noting that this
//! equals `A_{m-k} + A_{m+k}` for the odd extension `A_{-n} = -a_n`, the sums
//! reduce per `(l, j)` pair to five products of the form
//! `P(a, w)_m = sum_k w_k G(a)_{m,k}`.

use crate::imex::Nonlinear;
use crate::params::Params;
use crate::spectral::SpectralState;
use num_complex::Complex64;

/// Convolution terms `N_psi`, `N_theta` on the stored half-spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvolutionTerms {
    pub l_max: usize,
    pub m_max: usize,
    pub n_psi: Vec<Complex64>,
    pub n_theta: Vec<Complex64>,
}

impl ConvolutionTerms {
    pub fn psi_at(&self, l: usize, m: usize) -> Complex64 {
        self.n_psi[l * self.m_max + m - 1]
    }

    pub fn theta_at(&self, l: usize, m: usize) -> Complex64 {
        self.n_theta[l * self.m_max + m - 1]
    }
}

/// Evaluates the convolution sums for `s` directly.
pub fn convolution(s: &SpectralState, p: &Params) -> ConvolutionTerms {
    let mut dc = DirectConvolution::new(p);
    let n = p.n_modes();
    let zero = Complex64::new(0.0, 0.0);
    let mut out = ConvolutionTerms { l_max: p.l_max, m_max: p.m_max, n_psi: vec![zero; n], n_theta: vec![zero; n] };
    dc.eval(s, &mut out.n_psi, &mut out.n_theta);
    out
}

/// Workspace for repeated direct convolution at one truncation.
#[derive(Debug, Clone)]
pub struct DirectConvolution {
    alpha: f64,
    beta: f64,
    l_max: usize,
    m_max: usize,
    // signed rows j = -L..=L at offset (j + L); odd-extended, index n + M for n in -M..=2M
    ext_psi: Vec<Complex64>,
    ext_psi_b2: Vec<Complex64>,
    ext_theta: Vec<Complex64>,
    // weights on k = 1..=M
    w_psi_b: Vec<Complex64>,
    w_psi_b3: Vec<Complex64>,
    w_theta_b: Vec<Complex64>,
    nonzero_psi: Vec<bool>,
    nonzero_theta: Vec<bool>,
}

impl DirectConvolution {
    pub fn new(p: &Params) -> Self {
        let rows = 2 * p.l_max + 1;
        let ext = 3 * p.m_max + 1;
        let zero = Complex64::new(0.0, 0.0);
        Self {
            alpha: p.alpha,
            beta: p.beta,
            l_max: p.l_max,
            m_max: p.m_max,
            ext_psi: vec![zero; rows * ext],
            ext_psi_b2: vec![zero; rows * ext],
            ext_theta: vec![zero; rows * ext],
            w_psi_b: vec![zero; rows * p.m_max],
            w_psi_b3: vec![zero; rows * p.m_max],
            w_theta_b: vec![zero; rows * p.m_max],
            nonzero_psi: vec![false; rows],
            nonzero_theta: vec![false; rows],
        }
    }

    fn load(&mut self, s: &SpectralState) {
        assert_eq!((s.l_max(), s.m_max()), (self.l_max, self.m_max), "truncation mismatch");
        let (lm, mm) = (self.l_max as i64, self.m_max);
        let ext = 3 * mm + 1;
        for j in -lm..=lm {
            let r = (j + lm) as usize;
            let mut any_p = false;
            let mut any_t = false;
            for n in 1..=mm {
                let bn = n as f64 * self.beta;
                let ps = s.psi_signed(j, n as i64);
                let th = s.theta_signed(j, n as i64);
                any_p |= ps.re != 0.0 || ps.im != 0.0;
                any_t |= th.re != 0.0 || th.im != 0.0;
                let up = r * ext + mm + n;
                let dn = r * ext + mm - n;
                self.ext_psi[up] = ps;
                self.ext_psi[dn] = -ps;
                self.ext_psi_b2[up] = ps * (bn * bn);
                self.ext_psi_b2[dn] = -ps * (bn * bn);
                self.ext_theta[up] = th;
                self.ext_theta[dn] = -th;
                let w = r * mm + n - 1;
                self.w_psi_b[w] = ps * bn;
                self.w_psi_b3[w] = ps * (bn * bn * bn);
                self.w_theta_b[w] = th * bn;
            }
            self.nonzero_psi[r] = any_p;
            self.nonzero_theta[r] = any_t;
        }
    }
}

impl Nonlinear for DirectConvolution {
    fn eval(&mut self, s: &SpectralState, n_psi: &mut [Complex64], n_theta: &mut [Complex64]) {
        self.load(s);
        let (lm, mm) = (self.l_max as i64, self.m_max);
        let ext = 3 * mm + 1;
        let zero = Complex64::new(0.0, 0.0);
        n_psi.iter_mut().for_each(|c| *c = zero);
        n_theta.iter_mut().for_each(|c| *c = zero);
        let mut acc = vec![[zero; 5]; mm];
        for l in 0..=lm {
            for j in (l - lm).max(-lm)..=(l + lm).min(lm) {
                let pidx = l - j;
                let rj = (j + lm) as usize;
                let rp = (pidx + lm) as usize;
                let need_psi = self.nonzero_psi[rj] && self.nonzero_psi[rp];
                let need_th1 = self.nonzero_theta[rj] && self.nonzero_psi[rp];
                let need_th2 = self.nonzero_psi[rj] && self.nonzero_theta[rp];
                if !(need_psi || need_th1 || need_th2) || j == 0 {
                    // j = 0 carries alpha_0 = 0
                    continue;
                }
                let a_psi = &self.ext_psi[rj * ext..(rj + 1) * ext];
                let a_psi_b2 = &self.ext_psi_b2[rj * ext..(rj + 1) * ext];
                let a_theta = &self.ext_theta[rj * ext..(rj + 1) * ext];
                let w1 = &self.w_psi_b[rp * mm..(rp + 1) * mm];
                let w3 = &self.w_psi_b3[rp * mm..(rp + 1) * mm];
                let wt = &self.w_theta_b[rp * mm..(rp + 1) * mm];
                for (mi, a) in acc.iter_mut().enumerate() {
                    let m = mi + 1;
                    let mut s0 = zero;
                    let mut s1 = zero;
                    let mut s2 = zero;
                    let mut s3 = zero;
                    let mut s4 = zero;
                    for k in 1..=mm {
                        let lo = mm + m - k;
                        let hi = mm + m + k;
                        let g_psi = a_psi[lo] + a_psi[hi];
                        let g_psi_b2 = a_psi_b2[lo] + a_psi_b2[hi];
                        let g_theta = a_theta[lo] + a_theta[hi];
                        let (x1, x3, xt) = (w1[k - 1], w3[k - 1], wt[k - 1]);
                        s0 += x1 * g_psi;
                        s1 += x3 * g_psi;
                        s2 += x1 * g_psi_b2;
                        s3 += x1 * g_theta;
                        s4 += xt * g_psi;
                    }
                    *a = [s0, s1, s2, s3, s4];
                }
                let aj = j as f64 * self.alpha;
                let ap = pidx as f64 * self.alpha;
                let c = ap * ap - aj * aj;
                let pref = Complex64::new(0.0, 0.5 * aj);
                let base = l as usize * mm;
                for (mi, a) in acc.iter().enumerate() {
                    n_psi[base + mi] += pref * (a[0] * c + a[1] - a[2]);
                    n_theta[base + mi] += pref * (a[3] - a[4]);
                }
            }
        }
        for m in 0..mm {
            n_psi[m].im = 0.0;
            n_theta[m].im = 0.0;
        }
    }
}
