//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits non-zero if any criterion fails.

use num_complex::Complex64;
use rblab::analysis::{
    classify_fixed_point, classify_trajectory, sweep_r, AttractorKind, BifurcationRow, ClassifierConfig, LyapunovConfig,
    SweepConfig, DEFAULT_T_CUT,
};
use rblab::diagnostics::{balance_residual, divergence_constant, energy_report};
use rblab::dns::{nonlinear_spectral, Grid};
use rblab::gele::{convolution, gele_rhs, StepperConfig};
use rblab::ic::{make_initial_state, IcSpec};
use rblab::imex::NonlinearScheme;
use rblab::lorenz::lorenz_fixed_points;
use rblab::model::{model_lyapunov, simulate, ModelSpec};
use rblab::rng::CounterRng;
use rblab::spectral::lorenz_to_spectral;
use rblab::trajectory::Trajectory;
use rblab::{Params, SpectralState};
use std::io::Write;
use std::time::Instant;

/// Resolution of the regime runs: a modest DNS that keeps the full sweep
/// within budget.
const REGIME_LM: (usize, usize) = (16, 16);
const REGIME_T_END: f64 = 20.0;
/// Startup at the higher truncations lasts until t of about 6.
const REGIME_T_CUT: f64 = 8.0;

/// Step used for the regime runs at `r`; the startup burst limits it.
fn regime_dt(r: f64) -> f64 {
    if r <= 40.0 {
        1e-4
    } else if r <= 100.0 {
        5e-5
    } else {
        2e-5
    }
}

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

struct Report {
    failed: Vec<u32>,
}

impl Report {
    fn record(&mut self, id: u32, name: &str, started: Instant, f: impl FnOnce() -> Result<Outcome, String>) {
        let o = f().unwrap_or_else(|e| Outcome::new(false, format!("error: {e}")));
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] criterion {id:>2} ({name}, {:.1} s): {}", started.elapsed().as_secs_f64(), o.detail);
        std::io::stdout().flush().ok();
        if !o.pass {
            self.failed.push(id);
        }
    }
}

fn e<T: std::fmt::Display>(v: T) -> String {
    v.to_string()
}

fn near(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn random_state(p: &Params, seed: u64, amp: f64) -> SpectralState {
    let mut rng = CounterRng::new(seed);
    let mut s = SpectralState::for_params(p);
    for c in s.psi.iter_mut().chain(s.theta.iter_mut()) {
        *c = Complex64::new(rng.next_symmetric(amp), rng.next_symmetric(amp));
    }
    s.enforce_reality();
    s
}

fn lorenz_ic(p: &Params) -> SpectralState {
    lorenz_to_spectral(0.01, 0.0, p.r - 1.0, p)
}

fn c1() -> Result<Outcome, String> {
    let p = Params::new(30.0, 1, 2).map_err(e)?;
    let c = (232.0f64 / 3.0).sqrt();
    let fps = lorenz_fixed_points(&p);
    let want = [(0.0, 0.0, 0.0), (c, c, 29.0), (-c, -c, 29.0)];
    let err = want
        .iter()
        .map(|w| {
            fps.iter().map(|f| (f.0 - w.0).abs().max((f.1 - w.1).abs()).max((f.2 - w.2).abs())).fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    let rounded = near(c, 8.79, 0.005);
    Ok(Outcome::new(fps.len() == 3 && err < 1e-12 && rounded, format!("(+-{c:.6}, +-{c:.6}, 29), max error {err:.1e}")))
}

fn c2() -> Result<Outcome, String> {
    let p = Params::new(30.0, 1, 2).map_err(e)?;
    let cfg = StepperConfig { dt: 1e-5, t_end: 2.0, output_every: 1, snapshot_every: 0 };
    let s0 = lorenz_ic(&p);
    let t0 = Instant::now();
    let spec = ModelSpec { scheme: Some(NonlinearScheme::ForwardEuler), ..ModelSpec::gele(1, 2) };
    let g = simulate(&spec, &p, &s0, &cfg).map_err(e)?;
    let l = simulate(&ModelSpec::lorenz(), &p, &s0, &cfg).map_err(e)?;
    let secs = t0.elapsed().as_secs_f64();
    if g.len() != l.len() {
        return Err(format!("sample counts differ: {} vs {}", g.len(), l.len()));
    }
    let mut worst = 0.0f64;
    let mut first_over = None;
    for (a, b) in g.samples.iter().zip(&l.samples) {
        let d = (a.x - b.x).abs().max((a.y - b.y).abs()).max((a.z - b.z).abs());
        if d >= 1e-6 && first_over.is_none() {
            first_over = Some(a.t);
        }
        worst = worst.max(d);
    }
    let at_half = g
        .samples
        .iter()
        .zip(&l.samples)
        .take_while(|(a, _)| a.t <= 0.5)
        .fold(0.0f64, |m, (a, b)| m.max((a.x - b.x).abs().max((a.y - b.y).abs()).max((a.z - b.z).abs())));
    Ok(Outcome::new(
        worst < 1e-6 && secs < 60.0,
        format!(
            "max |d(X,Y,Z)| over [0,2] = {worst:.2e} (over [0,0.5]: {at_half:.2e}; first exceeds 1e-6 at t = {}), {secs:.1} s",
            first_over.map_or("never".to_string(), |t| format!("{t:.3}"))
        ),
    ))
}

/// The two r = 30 reference runs shared by several criteria.
struct R30 {
    gele: Trajectory,
    dns: Trajectory,
    gele_secs: f64,
    dns_secs: f64,
}

fn r30_runs() -> Result<R30, String> {
    let cfg = StepperConfig { dt: 1e-5, t_end: 5.0, output_every: 100, snapshot_every: 0 };
    // dense enough sampling for a centered dE_T/dt through the fast transient
    let cfg_dns = StepperConfig { output_every: 10, ..cfg };
    let p_gele = Params::new(30.0, 20, 20).map_err(e)?;
    let p_dns = Params::new(30.0, 26, 26).map_err(e)?;
    let spec_dns = ModelSpec::dns(26, 26, Grid::new(80, 80));
    let (g, d) = std::thread::scope(|sc| {
        let hg = sc.spawn(|| {
            let t = Instant::now();
            simulate(&ModelSpec::gele(20, 20), &p_gele, &lorenz_ic(&p_gele), &cfg).map(|tr| (tr, t.elapsed().as_secs_f64()))
        });
        let hd = sc.spawn(|| {
            let t = Instant::now();
            simulate(&spec_dns, &p_dns, &lorenz_ic(&p_dns), &cfg_dns).map(|tr| (tr, t.elapsed().as_secs_f64()))
        });
        (hg.join().expect("gele thread"), hd.join().expect("dns thread"))
    });
    let (gele, gele_secs) = g.map_err(e)?;
    let (dns, dns_secs) = d.map_err(e)?;
    Ok(R30 { gele, dns, gele_secs, dns_secs })
}

fn final_xyz(tr: &Trajectory) -> [f64; 3] {
    let s = tr.last().expect("non-empty trajectory");
    [s.x, s.y, s.z]
}

fn c3(r: &R30) -> Result<Outcome, String> {
    let target = [12.46, 12.46, 29.75];
    let cc = ClassifierConfig::default();
    let (g, d) = (final_xyz(&r.gele), final_xyz(&r.dns));
    let gc = classify_fixed_point(&r.gele, &cc).map_err(e)?;
    let dc = classify_fixed_point(&r.dns, &cc).map_err(e)?;
    let ok_g = gc < cc.fixed_point_tol && (0..3).all(|i| near(g[i], target[i], 0.05));
    let ok_d = dc < cc.fixed_point_tol && (0..3).all(|i| near(d[i], target[i], 0.05));
    let ok_gd = (0..3).all(|i| near(g[i], d[i], 0.01));
    Ok(Outcome::new(
        ok_g && ok_d && ok_gd,
        format!(
            "GELE(20,20) ({:.4}, {:.4}, {:.4}) change {gc:.1e} in {:.0} s; DNS(26,26) ({:.4}, {:.4}, {:.4}) change {dc:.1e} in {:.0} s",
            g[0], g[1], g[2], r.gele_secs, d[0], d[1], d[2], r.dns_secs
        ),
    ))
}

fn c4(r: &R30) -> Result<Outcome, String> {
    let want_psi = Complex64::new(0.0, -18.68);
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, tr) in [("GELE(20,20)", &r.gele), ("DNS", &r.dns)] {
        let s = tr.final_state.as_ref().ok_or("no final state")?;
        let (psi, th) = (s.psi_at(1, 1), s.theta_at(0, 2));
        let good = (psi - want_psi).norm() <= 0.05 && near(th.re, -0.3157, 0.002);
        ok &= good;
        parts.push(format!("{name} psi_11 = {:.4}{:+.4}i, theta_02 = {:.5}", psi.re, psi.im, th.re));
    }
    let s = r.gele.final_state.as_ref().ok_or("no final state")?;
    let (mut both, mut either) = (0.0f64, 0.0f64);
    for l in 0..=s.l_max() {
        for m in 1..=s.m_max() {
            let a = s.psi_at(l, m).norm().max(s.theta_at(l, m).norm());
            if l >= 18 && m >= 18 {
                both = both.max(a);
            }
            if l >= 18 || m >= 18 {
                either = either.max(a);
            }
        }
    }
    ok &= both < 1e-4;
    parts.push(format!("max amplitude at (20,20) with l, m >= 18: {both:.2e} (l or m >= 18: {either:.2e})"));
    Ok(Outcome::new(ok, parts.join("; ")))
}

fn c5(r: &R30) -> Result<Outcome, String> {
    let p = Params::new(30.0, 1, 2).map_err(e)?;
    let e0 = energy_report(&lorenz_ic(&p), &p);
    let rel = |a: f64, b: f64| ((a - b) / b).abs();
    let ok0 = rel(e0.e_k, 4.71e-3) <= 1e-3 && rel(e0.e_p, -2.73e4) <= 1e-3;
    let first = r.dns.samples.first().ok_or("empty run")?.energy;
    let last = r.dns.samples.last().ok_or("empty run")?.energy;
    let dk = last.e_k - first.e_k;
    let dp = last.e_p - first.e_p;
    let dt = last.e_t - first.e_t;
    let ok1 = rel(dk, 0.78e4) <= 0.05 && rel(dp, -0.76e4) <= 0.05 && rel(dt, 2e2) <= 0.05;
    Ok(Outcome::new(
        ok0 && ok1,
        format!(
            "E_K(0) = {:.4e}, E_P(0) = {:.4e}; DNS shifts dE_K = {dk:.1}, dE_P = {dp:.1}, dE_T = {dt:.1} (E_T final {:.4e})",
            e0.e_k, e0.e_p, last.e_t
        ),
    ))
}

fn c6() -> Result<Outcome, String> {
    let p = Params::new(30.0, 1, 2).map_err(e)?;
    let cfg = StepperConfig { dt: 1e-5, t_end: 5.0, output_every: 10, snapshot_every: 0 };
    let tr = simulate(&ModelSpec::lorenz(), &p, &lorenz_ic(&p), &cfg).map_err(e)?;
    let w = tr.window(2.0, 5.0);
    let n = w.len() as f64;
    let avg = |f: &dyn Fn(&rblab::trajectory::Sample) -> f64| w.iter().map(f).sum::<f64>() / n;
    let (et, ek, ep) = (avg(&|s| s.energy.e_t), avg(&|s| s.energy.e_k), avg(&|s| s.energy.e_p));
    let rel = |a: f64, b: f64| ((a - b) / b).abs();
    Ok(Outcome::new(
        rel(et, -2.10e4) <= 0.1 && rel(ek, 0.32e4) <= 0.1 && rel(ep, -2.42e4) <= 0.1,
        format!("averages over [2,5]: E_T = {et:.4e}, E_K = {ek:.4e}, E_P = {ep:.4e}"),
    ))
}

fn c7(r: &R30) -> Result<Outcome, String> {
    let reports = r.dns.energies();
    let res = balance_residual(&reports).map_err(e)?;
    let worst = res.iter().map(|b| b.residual.abs()).fold(0.0, f64::max);
    let last = reports.last().ok_or("empty run")?;
    let eq = (last.q + last.v).abs() / last.v.abs();
    Ok(Outcome::new(
        worst < 1e-3 && eq < 1e-6,
        format!(
            "max normalized |dE_T/dt - (Q+V)| = {worst:.2e}; at t = {:.1}: |Q+V|/|V| = {eq:.2e} (Q = {:.6e}, V = {:.6e})",
            last.t, last.q, last.v
        ),
    ))
}

fn c8() -> Result<Outcome, String> {
    let mut worst = 0.0f64;
    for (l, m) in [(1, 2), (4, 4), (8, 8)] {
        let p = Params::new(30.0, l, m).map_err(e)?;
        let want = divergence_constant(&p);
        for seed in 0..10 {
            let s = random_state(&p, 100 + seed, 5.0);
            let base = s.to_real_vec();
            let n = s.psi.len();
            let mut trace = 0.0;
            for i in 0..base.len() {
                // l = 0 imaginary parts are not coordinates of the model
                let mode = (i / 2) % n;
                if i % 2 == 1 && mode < m {
                    continue;
                }
                let h = 1e-5 * base[i].abs().max(1.0);
                let mut up = base.clone();
                up[i] += h;
                let mut dn = base.clone();
                dn[i] -= h;
                let fu = gele_rhs(&SpectralState::from_real_vec(l, m, 0.0, &up), &p).to_real_vec();
                let fd = gele_rhs(&SpectralState::from_real_vec(l, m, 0.0, &dn), &p).to_real_vec();
                trace += (fu[i] - fd[i]) / (2.0 * h);
            }
            worst = worst.max(((trace - want) / want).abs());
        }
    }
    Ok(Outcome::new(worst < 1e-6, format!("max relative trace error {worst:.2e} over 30 states")))
}

fn c9() -> Result<Outcome, String> {
    let t0 = Instant::now();
    let sizes = [(1, 2), (2, 2), (3, 3), (4, 4), (5, 5), (6, 6), (7, 7), (8, 8), (3, 8), (8, 3)];
    let mut worst = 0.0f64;
    for (k, &(l, m)) in sizes.iter().cycle().take(20).enumerate() {
        let p = Params::new(30.0, l, m).map_err(e)?;
        let s = random_state(&p, 200 + k as u64, 1.0);
        let a = convolution(&s, &p);
        let b = nonlinear_spectral(&s, &p, &Grid::for_truncation(l, m)).map_err(e)?;
        let mut num = 0.0f64;
        let mut den = 0.0f64;
        for i in 0..a.n_psi.len() {
            num = num.max((a.n_psi[i] - b.psi[i]).norm()).max((a.n_theta[i] - b.theta[i]).norm());
            den = den.max(a.n_psi[i].norm()).max(a.n_theta[i].norm());
        }
        worst = worst.max(num / den);
    }
    let secs = t0.elapsed().as_secs_f64();
    Ok(Outcome::new(worst < 1e-10 && secs < 60.0, format!("max relative difference {worst:.2e} over 20 states, {secs:.2} s")))
}

fn regime_spec() -> ModelSpec {
    let (l, m) = REGIME_LM;
    ModelSpec::dns(l, m, Grid::for_truncation(l, m))
}

fn regime_config(dt: f64, t_end: f64) -> SweepConfig {
    // sample every 2e-4 in t
    let output_every = ((2e-4 / dt).round() as usize).max(1);
    SweepConfig {
        stepper: StepperConfig { dt, t_end, output_every, snapshot_every: 0 },
        t_cut: REGIME_T_CUT,
        ..Default::default()
    }
}

fn row_label(row: &BifurcationRow) -> String {
    match (&row.kind, &row.error) {
        (Some(k), _) => {
            let p = row.z_periodicity.map_or(String::new(), |p| format!("({p})"));
            format!("{}{p}/l={}", k.as_str(), row.streamwise_periodicity.unwrap_or(0))
        }
        (None, Some(err)) => format!("failed: {err}"),
        _ => "failed".into(),
    }
}

fn c10() -> Result<Outcome, String> {
    let spec = regime_spec();
    let ic = IcSpec::standard();
    let t0 = Instant::now();
    let (lo, hi): (Vec<f64>, Vec<f64>) = (1..=100).map(f64::from).partition(|&r| regime_dt(r) == 1e-4);
    let mut rows = sweep_r(&spec, &lo, &ic, &regime_config(1e-4, REGIME_T_END), None).map_err(e)?;
    rows.extend(sweep_r(&spec, &hi, &ic, &regime_config(5e-5, REGIME_T_END), None).map_err(e)?);
    let secs = t0.elapsed().as_secs_f64();
    rows.extend(sweep_r(&spec, &[150.0], &ic, &regime_config(regime_dt(150.0), 15.0), None).map_err(e)?);
    let at = |r: f64| rows.iter().find(|row| row.r == r).expect("row present");
    let is = |r: f64, k: AttractorKind| at(r).kind == Some(k);
    let mut ok = true;
    let mut notes = Vec::new();
    let fp30 = is(30.0, AttractorKind::FixedPoint) && at(30.0).streamwise_periodicity == Some(1);
    let fp40 = is(40.0, AttractorKind::FixedPoint) && at(40.0).streamwise_periodicity == Some(3);
    let lc55 = is(55.0, AttractorKind::LimitCycle) && at(55.0).z_periodicity == Some(1);
    let lt = is(70.0, AttractorKind::LimitTorus) && is(80.0, AttractorKind::LimitTorus);
    let ch = is(150.0, AttractorKind::Chaotic);
    ok &= fp30 && fp40 && lc55 && lt && ch;
    for r in [30.0, 40.0, 55.0, 70.0, 80.0, 150.0] {
        notes.push(format!("r={r}: {}", row_label(at(r))));
    }
    // First r of the periodic window and first r of the torus range.
    let onset =
        |pred: &dyn Fn(&BifurcationRow) -> bool| rows.iter().filter(|row| row.r <= 100.0).find(|row| pred(row)).map(|row| row.r);
    let lc_onset = onset(&|row| row.kind == Some(AttractorKind::LimitCycle));
    let torus_onset = onset(&|row| row.kind == Some(AttractorKind::LimitTorus) && row.r > lc_onset.unwrap_or(0.0));
    let b1 = lc_onset.is_some_and(|r| (r - 50.0).abs() <= 2.0);
    let b2 = torus_onset.is_some_and(|r| (r - 58.0).abs() <= 2.0);
    ok &= b1 && b2;
    notes.push(format!("cycles from r={lc_onset:?}, tori from r={torus_onset:?}"));
    ok &= secs < 3600.0;
    notes.push(format!("sweep r=1..100 at DNS{REGIME_LM:?} in {secs:.0} s"));
    let failed: Vec<String> = rows.iter().filter(|r| r.error.is_some()).map(|r| format!("{}", r.r)).collect();
    if !failed.is_empty() {
        ok = false;
        notes.push(format!("failed rows at r = {}", failed.join(",")));
    }
    let table: Vec<String> = rows.iter().map(|row| format!("{}:{}", row.r, row_label(row))).collect();
    println!("    bifurcation rows: {}", table.join(" "));
    Ok(Outcome::new(ok, notes.join("; ")))
}

fn c11() -> Result<Outcome, String> {
    let p = Params::new(80.0, 10, 10).map_err(e)?;
    // forward Euler needs dt near 1e-5 here to settle on the cycle
    let spec = ModelSpec { scheme: Some(NonlinearScheme::AdamsBashforth2), ..ModelSpec::gele(10, 10) };
    let cfg = regime_config(5e-5, REGIME_T_END);
    let mut parts = Vec::new();
    let mut kinds = Vec::new();
    for (name, ic) in [("Lorenz-like", IcSpec::standard()), ("random modes (eps 1e-4)", IcSpec::random_modes(1e-4))] {
        let s0 = make_initial_state(&ic, &p, 2024).map_err(e)?;
        let tr = simulate(&spec, &p, &s0, &cfg.stepper).map_err(e)?;
        let (v, row) = classify_trajectory(&spec, &p, &tr, &cfg).map_err(e)?;
        parts.push(format!("{name}: {}", row_label(&row)));
        kinds.push(v.kind);
    }
    Ok(Outcome::new(kinds == [AttractorKind::LimitCycle, AttractorKind::LimitTorus], parts.join("; ")))
}

fn grid_ics() -> Vec<(f64, f64, f64)> {
    let v = [-20.0, 0.0, 20.0];
    let mut out = Vec::new();
    for x in v {
        for y in v {
            for z in v {
                if (x, y, z) != (0.0, 0.0, 0.0) {
                    out.push((x, y, z));
                }
            }
        }
    }
    out
}

fn c12() -> Result<Outcome, String> {
    let p = Params::new(30.0, 1, 2).map_err(e)?;
    let lyap = model_lyapunov(&ModelSpec::lorenz(), &p, &lorenz_ic(&p), 1e-5, &LyapunovConfig::default()).map_err(e)?;
    let mut ok = lyap > 0.1;
    let mut notes = vec![format!("Lorenz largest Lyapunov exponent {lyap:.3} per unit t")];

    let cfg = SweepConfig {
        stepper: StepperConfig { dt: 1e-4, t_end: 20.0, output_every: 10, snapshot_every: 0 },
        ..Default::default()
    };
    let ics = grid_ics();
    let mut lorenz_bad = Vec::new();
    for &(x, y, z) in &ics {
        let s0 = lorenz_to_spectral(x, y, z, &p);
        let spec = ModelSpec::lorenz();
        let tr = simulate(&spec, &p, &s0, &cfg.stepper).map_err(e)?;
        let kind = classify_trajectory(&spec, &p, &tr, &cfg).map(|(v, _)| v.kind.as_str()).unwrap_or("error");
        if kind != "Chaotic" {
            lorenz_bad.push(format!("({x},{y},{z})->{kind}"));
        }
    }
    ok &= lorenz_bad.is_empty();
    notes.push(format!("Lorenz: {}/26 Chaotic {}", 26 - lorenz_bad.len(), lorenz_bad.join(" ")));

    let (l, m) = REGIME_LM;
    let q = p.with_truncation(l, m).map_err(e)?;
    let spec = regime_spec();
    let dcfg = SweepConfig { t_cut: DEFAULT_T_CUT, ..regime_config(1e-4, 10.0) };
    let results: Vec<(String, Option<usize>)> = {
        use rayon::prelude::*;
        ics.par_iter()
            .map(|&(x, y, z)| {
                let s0 = lorenz_to_spectral(x, y, z, &q);
                match simulate(&spec, &q, &s0, &dcfg.stepper).and_then(|tr| classify_trajectory(&spec, &q, &tr, &dcfg)) {
                    Ok((v, row)) => (v.kind.as_str().to_string(), row.final_xyz.map(|_| row.streamwise_periodicity.unwrap_or(0))),
                    Err(err) => (format!("error {err}"), None),
                }
            })
            .collect()
    };
    let dns_bad: Vec<String> = ics
        .iter()
        .zip(&results)
        .filter(|(_, r)| r.0 != "FixedPoint")
        .map(|(ic, r)| format!("({},{},{})->{}", ic.0, ic.1, ic.2, r.0))
        .collect();
    ok &= dns_bad.is_empty();
    notes.push(format!("DNS{REGIME_LM:?}: {}/26 FixedPoint {}", 26 - dns_bad.len(), dns_bad.join(" ")));
    Ok(Outcome::new(ok, notes.join("; ")))
}

/// Lower-order fixed points, reported against loose references without
/// affecting the exit status.
fn intermediate_orders() {
    let cfg = StepperConfig { dt: 1e-5, t_end: 5.0, output_every: 100, snapshot_every: 0 };
    for ((l, m), want) in [((4, 4), (-10.55, 29.49)), ((6, 6), (-0.006, 29.63)), ((8, 8), (0.0, 25.94))] {
        let line = Params::new(30.0, l, m)
            .and_then(|p| simulate(&ModelSpec::gele(l, m), &p, &lorenz_ic(&p), &cfg))
            .map(|tr| {
                let [x, _, z] = final_xyz(&tr);
                let ok = near(x, want.0, 0.5) && near(z, want.1, 0.5);
                format!("{} GELE({l},{m}) -> (X,Z) = ({x:.3}, {z:.3}), reference {want:?}", if ok { "match" } else { "differs" })
            })
            .unwrap_or_else(|err| format!("GELE({l},{m}) failed: {err}"));
        println!("[INFO] intermediate order (non-blocking): {line}");
    }
}

fn main() {
    // `cargo test` passes harness flags such as --nocapture; none apply here.
    let mut report = Report { failed: Vec::new() };
    let start = Instant::now();
    report.record(1, "Lorenz fixed points", Instant::now(), c1);
    report.record(2, "GELE(1,2) equals Lorenz", Instant::now(), c2);
    report.record(8, "dissipativity", Instant::now(), c8);
    report.record(9, "convolution oracle", Instant::now(), c9);
    report.record(6, "Lorenz energy averages", Instant::now(), c6);
    let t = Instant::now();
    match r30_runs() {
        Ok(r) => {
            report.record(3, "r=30 equilibrium", t, || c3(&r));
            report.record(4, "equilibrium modes", t, || c4(&r));
            report.record(5, "energies", t, || c5(&r));
            report.record(7, "energy balance", t, || c7(&r));
        }
        Err(err) => {
            for (id, name) in [(3, "r=30 equilibrium"), (4, "equilibrium modes"), (5, "energies"), (7, "energy balance")] {
                report.record(id, name, t, || Err(err.clone()));
            }
        }
    }
    report.record(10, "regime reproduction", Instant::now(), c10);
    report.record(11, "initial-condition dependency", Instant::now(), c11);
    report.record(12, "Lorenz chaos vs DNS equilibria", Instant::now(), c12);
    intermediate_orders();
    let total = start.elapsed().as_secs_f64();
    if report.failed.is_empty() {
        println!("acceptance: all 12 criteria passed in {total:.0} s");
    } else {
        report.failed.sort();
        println!("acceptance: {} of 12 criteria failed ({:?}) in {total:.0} s", report.failed.len(), report.failed);
        std::process::exit(1);
    }
}
