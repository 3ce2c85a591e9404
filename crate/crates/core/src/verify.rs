//! Cross-check suite over every module: exact identities, oracle agreements
//! and the property lists, plus informational audits that never fail.

use std::f64::consts::{E, FRAC_PI_2};

use serde::Serialize;

use crate::dephasing::{dephased_state, Correlation, DephasingModel, ProbeKind, ProbeState, SpectralSamples};
use crate::error::Result;
use crate::linalg::{eigh, partial_trace_env, solve_anticommutator, Tensor, C64};
use crate::optimize::golden_section;
use crate::purification::{purify, rotation_angle, EnvInitState, PurifiedState};
use crate::qfi::{minimize_ansatz, optimal_h, phase_derivative, qfi_sld, system_qfi, variational_cq, AnsatzBasis, SLD_SUPPORT_TOL};
use crate::random::RandomOps;
use crate::resolution::{
    closed_form_uncorrelated, correlated_closed_form, improvement_closed, improvement_factor,
    numeric_optimum_uncorrelated, optimal_resolution_uncorrelated, optimal_time_closed, parity_limit,
    partial_corr_asymptote, qfi_from_resolution, ramsey_max_correlated, ramsey_uncorrelated,
    resolution_from_qfi, ParityClass, ResolutionQuery,
};

/// Largest particle count for families with one environment qubit per particle.
pub const MAX_PER_PARTICLE_QUBITS: usize = 12;
/// Largest register (system plus shared qubit) for the shared-environment family.
pub const MAX_SHARED_QUBITS: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Depth {
    Quick,
    Full,
}

impl Depth {
    fn max_uncorrelated(self) -> usize {
        match self {
            Depth::Quick => 3,
            Depth::Full => 5,
        }
    }

    fn max_shared(self) -> usize {
        match self {
            Depth::Quick => 3,
            Depth::Full => 6,
        }
    }

    fn eigh_dims(self) -> &'static [usize] {
        match self {
            Depth::Quick => &[2, 7, 64],
            Depth::Full => &[2, 7, 64, 512, 4096],
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig {
    pub depth: Depth,
    pub seed: u64,
    /// Relative offset applied to every closed form before comparison; zero
    /// for normal runs, nonzero to confirm the suite detects deviations.
    pub perturbation: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            depth: Depth::Quick,
            seed: 42,
            perturbation: 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub mandatory: bool,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || !c.mandatory)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.mandatory && !c.passed)
    }
}

struct Suite {
    config: VerifyConfig,
    rng: RandomOps,
    checks: Vec<Check>,
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }
}

/// Running maximum of an error measure together with where it occurred.
struct Worst {
    value: f64,
    at: String,
}

impl Worst {
    fn new() -> Self {
        Self {
            value: 0.0,
            at: String::new(),
        }
    }

    fn record(&mut self, value: f64, at: impl FnOnce() -> String) {
        if value > self.value || value.is_nan() {
            self.value = value;
            self.at = at();
        }
    }

    fn within(&self, tol: f64) -> (bool, String) {
        let ok = self.value <= tol;
        let detail = if self.at.is_empty() {
            format!("max error {:.3e} (tol {tol:.0e})", self.value)
        } else {
            format!("max error {:.3e} at {} (tol {tol:.0e})", self.value, self.at)
        };
        (ok, detail)
    }
}

impl Suite {
    fn closed(&self, x: f64) -> f64 {
        x * (1.0 + self.config.perturbation)
    }

    fn run(&mut self, name: &str, mandatory: bool, f: impl FnOnce(&mut Self) -> Result<(bool, String)>) {
        let (passed, detail) = match f(self) {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        self.checks.push(Check {
            name: name.into(),
            mandatory,
            passed,
            detail,
        });
    }

    fn info(&mut self, name: &str, f: impl FnOnce(&mut Self) -> Result<String>) {
        let detail = f(self).unwrap_or_else(|e| format!("error: {e}"));
        self.checks.push(Check {
            name: name.into(),
            mandatory: false,
            passed: true,
            detail,
        });
    }
}

const PROBES: [ProbeKind; 2] = [ProbeKind::Ghz, ProbeKind::ProductPlus];

/// Model with `γ` chosen so that `γ·t^ν = strength`.
fn model_at(strength: f64, nu: f64, n: usize, t: f64, c: Correlation) -> Result<DephasingModel> {
    DephasingModel::new(strength / t.powf(nu), nu, n, c)
}

/// Every purification family on the current grid: `(label, model, probe, t)`.
fn families(depth: Depth) -> Result<Vec<(String, DephasingModel, ProbeKind, f64)>> {
    let t = 0.8;
    let mut out = Vec::new();
    for n in 1..=depth.max_uncorrelated() {
        for nu in [1.0, 2.0] {
            for s in [0.1, 1.0] {
                for p in PROBES {
                    out.push((
                        format!("uncorrelated n={n} nu={nu} gt^nu={s} {p}"),
                        model_at(s, nu, n, t, Correlation::Uncorrelated)?,
                        p,
                        t,
                    ));
                }
            }
        }
    }
    for n in 1..=depth.max_shared() {
        for nu in [1.0, 2.0] {
            for s in [0.2, 1.0] {
                for p in PROBES {
                    out.push((
                        format!("max-correlated n={n} nu={nu} gt^nu={s} {p}"),
                        model_at(s, nu, n, t, Correlation::MaxCorrelated)?,
                        p,
                        t,
                    ));
                }
            }
        }
    }
    for a in [0.0, 0.5, 1.0] {
        for p in PROBES {
            out.push((
                format!("partial A={a} {p}"),
                model_at(0.7, 1.0, 2, t, Correlation::Partial { amplitude: a })?,
                p,
                t,
            ));
        }
    }
    Ok(out)
}

fn purified(model: &DephasingModel, probe: ProbeKind, t: f64, phi: f64) -> Result<PurifiedState> {
    purify(&ProbeState::of_kind(probe, model.n())?, model, t, phi)
}

pub fn run(config: VerifyConfig) -> VerifyReport {
    let mut s = Suite {
        config,
        rng: RandomOps::new(config.seed),
        checks: Vec::new(),
    };
    operator_algebra(&mut s);
    dephasing_models(&mut s);
    purifications(&mut s);
    qfi_engine(&mut s);
    resolution_analytics(&mut s);
    audits(&mut s);
    VerifyReport { checks: s.checks }
}

fn operator_algebra(s: &mut Suite) {
    s.run("linalg/partial-trace-trace-and-psd", true, |s| {
        let mut trace = Worst::new();
        let mut neg = Worst::new();
        for (ds, de) in [(2, 2), (4, 2), (2, 8), (8, 8), (16, 4)] {
            for _ in 0..4 {
                let v = s.rng.state(ds * de);
                let rho = partial_trace_env(&v, ds, de)?;
                trace.record((rho.trace() - 1.0).norm(), || format!("{ds}x{de}"));
                let low = eigh(&rho)?.eigenvalues[0];
                neg.record(-low, || format!("{ds}x{de}"));
            }
        }
        let (a, da) = trace.within(1e-12);
        let (b, db) = neg.within(1e-10);
        Ok((a && b, format!("trace: {da}; negativity: {db}")))
    });

    let dims = s.config.depth.eigh_dims();
    s.run("linalg/eigh-reconstruction", true, |s| {
        let mut w = Worst::new();
        for &d in dims {
            let h = s.rng.hermitian(d);
            let sp = eigh(&h)?;
            let ascending = sp.eigenvalues.windows(2).all(|p| p[0] <= p[1]);
            if !ascending {
                return Ok((false, format!("eigenvalues not ascending at dim {d}")));
            }
            w.record(sp.reconstruct().max_abs_diff(&h), || format!("dim {d}"));
        }
        Ok(w.within(1e-10))
    });

    s.run("linalg/anticommutator-hermitian", true, |s| {
        let mut herm = Worst::new();
        let mut resid = Worst::new();
        for (d, rank) in [(2, 1), (4, 4), (8, 3), (16, 16), (32, 5)] {
            let rho = s.rng.density_matrix(d, rank);
            let rhs = s.rng.hermitian(d);
            let h = solve_anticommutator(&rho, &rhs, None)?;
            herm.record(h.hermiticity_error(), || format!("dim {d} rank {rank}"));
            if rank == d {
                let r = &(&h.matmul(&rho) + &rho.matmul(&h)) - &rhs;
                resid.record(r.max_abs(), || format!("dim {d}"));
            }
        }
        let (a, da) = herm.within(1e-12);
        let (b, db) = resid.within(1e-10);
        Ok((a && b, format!("hermiticity: {da}; full-rank residual: {db}")))
    });

    s.run("linalg/tensor-associative", true, |s| {
        let mut w = Worst::new();
        for (da, db, dc) in [(2, 2, 2), (2, 4, 2), (4, 2, 8)] {
            let (a, b, c) = (s.rng.matrix(da), s.rng.matrix(db), s.rng.matrix(dc));
            let left = a.tensor(&b).tensor(&c);
            let right = a.tensor(&b.tensor(&c));
            w.record(left.max_abs_diff(&right), || format!("{da}x{db}x{dc}"));
            let (u, v, x) = (s.rng.state(da), s.rng.state(db), s.rng.state(dc));
            let l = u.tensor(&v).tensor(&x);
            let r = u.tensor(&v.tensor(&x));
            let diff = l
                .amplitudes()
                .iter()
                .zip(r.amplitudes())
                .map(|(p, q)| (p - q).norm())
                .fold(0.0, f64::max);
            w.record(diff, || format!("states {da}x{db}x{dc}"));
        }
        Ok(w.within(1e-14))
    });
}

fn dephasing_models(s: &mut Suite) {
    let depth = s.config.depth;
    s.run("dephasing/density-matrix-valid", true, |_| {
        let mut w = Worst::new();
        let mut pops = Worst::new();
        for c in [Correlation::Uncorrelated, Correlation::MaxCorrelated] {
            for n in 1..=depth.max_uncorrelated() {
                for nu in [0.5, 1.0, 2.0] {
                    for g in [0.0, 0.3, 2.0] {
                        for phi in [0.0, 1.3] {
                            for p in PROBES {
                                let m = DephasingModel::new(g, nu, n, c)?;
                                let probe = ProbeState::of_kind(p, n)?;
                                let rho = dephased_state(&probe, &m, 0.9, phi)?;
                                let at = || format!("{c} n={n} nu={nu} g={g} {p}");
                                w.record(rho.hermiticity_error(), at);
                                w.record((rho.trace() - 1.0).norm(), at);
                                w.record(-eigh(&rho)?.eigenvalues[0], at);
                                let pure = probe.state().projector();
                                let d = rho
                                    .diagonal()
                                    .iter()
                                    .zip(pure.diagonal())
                                    .map(|(a, b)| (a - b).norm())
                                    .fold(0.0, f64::max);
                                pops.record(d, at);
                            }
                        }
                    }
                }
            }
        }
        let (a, da) = w.within(1e-10);
        let (b, db) = pops.within(1e-15);
        Ok((a && b, format!("hermitian/trace/psd: {da}; populations: {db}")))
    });

    s.run("dephasing/single-particle-structures-agree", true, |_| {
        let mut w = Worst::new();
        for nu in [0.5, 1.0, 2.5] {
            for g in [0.0, 0.4, 3.0] {
                for t in [0.2, 1.0, 2.0] {
                    for phi in [0.0, 0.9] {
                        let probe = ProbeState::product_plus(1)?;
                        let a = dephased_state(&probe, &DephasingModel::uncorrelated(g, nu, 1)?, t, phi)?;
                        let b = dephased_state(&probe, &DephasingModel::max_correlated(g, nu, 1)?, t, phi)?;
                        w.record(a.max_abs_diff(&b), || format!("nu={nu} g={g} t={t}"));
                    }
                }
            }
        }
        Ok(w.within(1e-15))
    });

    s.run("dephasing/spectral-coherence", true, |_| {
        let gamma = 0.8;
        let lor = SpectralSamples::lorentzian(gamma, 5.0 / gamma)?;
        let sigma = 1.3;
        let gau = SpectralSamples::gaussian(sigma)?;
        let mut w = Worst::new();
        for k in 0..=50 {
            let f = k as f64 / 50.0;
            let t = 5.0 / gamma * f;
            w.record((lor.coherence(t) - (-gamma * t).exp()).norm(), || format!("lorentzian t={t:.2}"));
            let t = 5.0 / sigma * f;
            let want = (-0.5 * sigma * sigma * t * t).exp();
            w.record((gau.coherence(t) - want).norm(), || format!("gaussian t={t:.2}"));
        }
        Ok(w.within(1e-4))
    });

    s.run("dephasing/mixed-coherence", true, |_| {
        let mut bad = Vec::new();
        for n in 2..=4 {
            for nu in [0.5, 1.5, 2.0, 3.0] {
                for t in [0.3, 1.0] {
                    let g = 0.4;
                    let at = |theta: f64| {
                        DephasingModel::new(g, nu, n, Correlation::Mixed { theta })?.mixed_collective_coherence(t)
                    };
                    let nf = n as f64;
                    let corr = (-g * (nf * t).powf(nu)).exp();
                    let unc = (-nf * g * t.powf(nu)).exp();
                    // cos(π/2) is not exactly zero in floating point, so that end carries a 1e-33 weight.
                    if at(0.0)? != corr || rel(at(FRAC_PI_2)?, unc) > 1e-15 {
                        bad.push(format!("limits n={n} nu={nu} t={t}"));
                    }
                    let values: Vec<f64> =
                        (0..=20).map(|k| at(FRAC_PI_2 * k as f64 / 20.0)).collect::<Result<_>>()?;
                    let faster = (nf * t).powf(nu) > nf * t.powf(nu);
                    let monotone = values.windows(2).all(|p| {
                        if faster {
                            p[1] >= p[0] - 1e-15
                        } else {
                            p[1] <= p[0] + 1e-15
                        }
                    });
                    if nu > 1.0 && (!monotone || (corr < unc) != faster) {
                        bad.push(format!("ordering n={n} nu={nu} t={t}"));
                    }
                }
            }
        }
        Ok((bad.is_empty(), if bad.is_empty() { "limits exact, monotone in theta".into() } else { bad.join(", ") }))
    });
}

fn purifications(s: &mut Suite) {
    let depth = s.config.depth;
    s.run("purification/norm-and-generator", true, |_| {
        let mut norm = Worst::new();
        let mut fd = Worst::new();
        let h = 1e-5;
        for (label, m, p, t) in families(depth)? {
            let phi = 0.4;
            let f = purified(&m, p, t, phi)?;
            norm.record((f.state().norm_sqr() - 1.0).abs(), || label.clone());
            let plus = purified(&m, p, t, phi + h)?;
            let minus = purified(&m, p, t, phi - h)?;
            let hv = f.apply_generator(f.amplitudes());
            let err = plus
                .amplitudes()
                .iter()
                .zip(minus.amplitudes())
                .zip(&hv)
                .map(|((a, b), g)| ((a - b) * C64::new(0.0, 1.0 / (2.0 * h)) - g).norm())
                .fold(0.0, f64::max);
            fd.record(err, || label.clone());
        }
        let (a, da) = norm.within(1e-12);
        let (b, db) = fd.within(1e-6);
        Ok((a && b, format!("norm: {da}; i·dΦ/dφ vs H·Φ: {db}")))
    });

    s.run("purification/uncorrelated-trace-equals-channel", true, |_| {
        let mut w = Worst::new();
        let t = 1.1;
        for n in 1..=depth.max_uncorrelated() {
            for nu in [1.0, 2.0] {
                for strength in [0.0, 0.1, 0.5, 1.0, 3.0] {
                    for phit in [0.0, 0.7, FRAC_PI_2] {
                        for p in PROBES {
                            let m = model_at(strength, nu, n, t, Correlation::Uncorrelated)?;
                            let probe = ProbeState::of_kind(p, n)?;
                            let f = purify(&probe, &m, t, phit / t)?;
                            let channel = dephased_state(&probe, &m, t, phit / t)?;
                            w.record(f.reduced_state().max_abs_diff(&channel), || {
                                format!("n={n} nu={nu} gt^nu={strength} phit={phit:.2} {p}")
                            });
                        }
                    }
                }
            }
        }
        Ok(w.within(1e-12))
    });

    s.run("purification/shared-sector-coherence", true, |_| {
        let mut w = Worst::new();
        let t = 0.7;
        for n in 1..=depth.max_shared() {
            for strength in [0.1, 0.5, 2.0] {
                let m = model_at(strength, 1.0, n, t, Correlation::MaxCorrelated)?;
                let angle = rotation_angle(&m, t)?;
                let f = purified(&m, ProbeKind::ProductPlus, t, 0.0)?;
                let rho = f.reduced_state();
                let dim = 1usize << n;
                for x in 0..dim {
                    for y in 0..dim {
                        let dm = (crate::dephasing::sector(n, x) - crate::dephasing::sector(n, y)) as f64;
                        let want = (angle * dm).cos() / dim as f64;
                        w.record((rho[(x, y)].re - want).abs() + rho[(x, y)].im.abs(), || {
                            format!("n={n} gt={strength} ({x},{y})")
                        });
                    }
                }
                if n == 1 {
                    let coh = 2.0 * rho[(0, 1)].norm();
                    w.record((coh - (-strength).exp()).abs(), || format!("n=1 gt={strength} vs e^-gt"));
                }
            }
        }
        Ok(w.within(1e-12))
    });

    s.run("purification/populations-independent-of-gamma", true, |_| {
        let mut w = Worst::new();
        for (label, m, p, t) in families(depth)? {
            let noisy = purified(&m, p, t, 0.3)?.reduced_state();
            let clean = purified(&m.with_gamma(0.0)?, p, t, 0.3)?.reduced_state();
            let d = noisy
                .diagonal()
                .iter()
                .zip(clean.diagonal())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            w.record(d, || label.clone());
        }
        Ok(w.within(1e-12))
    });
}

fn qfi_engine(s: &mut Suite) {
    let depth = s.config.depth;
    s.run("qfi/ordering-chain", true, |s| {
        let mut bad = Vec::new();
        let mut worst = Worst::new();
        for (label, m, p, t) in families(depth)? {
            let f = purified(&m, p, t, 0.0)?;
            let oracle = system_qfi(&f)?;
            let basis = if let Correlation::Partial { .. } = m.correlation() {
                AnsatzBasis::two_qubit_symmetric()?
            } else {
                AnsatzBasis::collective(f.n_env())?
            };
            let fit = minimize_ansatz(&f, &basis)?;
            let opt = optimal_h(&f)?;
            let random = variational_cq(&f, &s.rng.hermitian(f.dim_env()))?;
            let slack = |v: f64| 1e-8 * v.abs().max(1.0);
            let chain = random >= fit.value - slack(fit.value)
                && fit.value >= opt.value - slack(opt.value)
                && oracle >= -slack(0.0);
            if !chain {
                bad.push(format!("{label}: random {random}, ansatz {}, opt {}", fit.value, opt.value));
            }
            worst.record(rel(opt.value, oracle.max(f64::MIN_POSITIVE)).min((opt.value - oracle).abs()), || label.clone());
        }
        let (eq, d) = worst.within(1e-8);
        let ok = bad.is_empty() && eq;
        Ok((ok, if bad.is_empty() { format!("optimal_h vs oracle: {d}") } else { bad.join("; ") }))
    });

    // Information loss under growing γ holds for the physical channels. The
    // shared and partial purifications have oscillating coherences
    // cos(angle·Δs), so there it is only reported.
    let increases = |m: &DephasingModel, p: ProbeKind, t: f64, channel: bool| -> Result<Option<f64>> {
        let mut prev = f64::INFINITY;
        for k in [0.0, 0.25, 0.5, 1.0, 2.0, 4.0] {
            let g = k * m.gamma().max(0.2);
            let model = m.with_gamma(g)?;
            let f = if channel {
                let probe = ProbeState::of_kind(p, m.n())?;
                let rho = dephased_state(&probe, &model, t, 0.2)?;
                let gen = crate::purification::system_generator_diagonal(m.n(), t);
                qfi_sld(&rho, &phase_derivative(&rho, &gen), SLD_SUPPORT_TOL)?
            } else {
                system_qfi(&purified(&model, p, t, 0.2)?)?
            };
            if f > prev * (1.0 + 1e-9) + 1e-12 {
                return Ok(Some(g));
            }
            prev = f;
        }
        Ok(None)
    };
    s.run("qfi/monotone-in-gamma", true, |_| {
        let mut bad = Vec::new();
        let mut count = 0;
        for (label, m, p, t) in families(depth)? {
            let physical = match m.correlation() {
                Correlation::Uncorrelated => true,
                Correlation::MaxCorrelated => m.n() == 1,
                _ => false,
            };
            if physical {
                count += 1;
                if let Some(g) = increases(&m, p, t, false)? {
                    bad.push(format!("{label} at gamma={g}"));
                }
            }
            if m.correlation() == Correlation::MaxCorrelated {
                count += 1;
                if let Some(g) = increases(&m, p, t, true)? {
                    bad.push(format!("{label} channel at gamma={g}"));
                }
            }
        }
        Ok((bad.is_empty(), if bad.is_empty() { format!("nonincreasing on {count} families") } else { bad.join(", ") }))
    });
    s.info("audit/purification-families-not-monotone-in-gamma", |_| {
        let mut hits = Vec::new();
        for (label, m, p, t) in families(depth)? {
            let skip = m.correlation() == Correlation::Uncorrelated || m.n() == 1;
            if !skip {
                if let Some(g) = increases(&m, p, t, false)? {
                    hits.push(format!("{label} (first rise at gamma={g:.3})"));
                }
            }
        }
        Ok(if hits.is_empty() { "none".into() } else { hits.join(", ") })
    });

    s.run("qfi/phase-independent", true, |_| {
        let mut w = Worst::new();
        for (label, m, p, t) in families(depth)? {
            let base = system_qfi(&purified(&m, p, t, 0.0)?)?;
            for phi in [0.37, 1.9, -2.4] {
                let f = system_qfi(&purified(&m, p, t, phi)?)?;
                w.record(rel(f, base.max(1e-300)).min((f - base).abs()), || format!("{label} phi={phi}"));
            }
        }
        Ok(w.within(1e-8))
    });

    s.run("qfi/finite-difference-drho", true, |_| {
        let mut w = Worst::new();
        let h = 1e-5;
        for (label, m, p, t) in families(depth)? {
            let phi = 0.3;
            let f = purified(&m, p, t, phi)?;
            let rho = f.reduced_state();
            let analytic = qfi_sld(&rho, &phase_derivative(&rho, &f.system_generator()), SLD_SUPPORT_TOL)?;
            let plus = purified(&m, p, t, phi + h)?.reduced_state();
            let minus = purified(&m, p, t, phi - h)?.reduced_state();
            let drho = (&(&plus - &minus) * (0.5 / h)).hermitian_part();
            let numeric = qfi_sld(&rho, &drho, SLD_SUPPORT_TOL)?;
            w.record(rel(numeric, analytic), || label.clone());
        }
        Ok(w.within(1e-5))
    });

    s.run("qfi/parity-long-time", true, |_| {
        let mut bad = Vec::new();
        let ghz_qfi = |n: usize, nu: f64, strength: f64| -> Result<f64> {
            let m = DephasingModel::max_correlated(strength, nu, n)?;
            system_qfi(&purified(&m, ProbeKind::Ghz, 1.0, 0.0)?)
        };
        for (n, nu) in [(2, 1.0), (4, 1.0), (2, 2.0), (3, 1.0), (5, 1.0), (3, 2.0)] {
            let class = parity_limit(n, nu).class;
            let f: Vec<f64> = [3.0, 4.0, 6.0, 10.0].iter().map(|&g| ghz_qfi(n, nu, g)).collect::<Result<_>>()?;
            match class {
                ParityClass::Unbounded => {
                    // Information approaches its γ = 0 value.
                    let clean = ghz_qfi(n, nu, 0.0)?;
                    if !(f[2] > f[0] && f[3] > f[2] && (f[3] - clean).abs() < 1e-6 * clean) {
                        bad.push(format!("n={n} nu={nu} even: {f:?}"));
                    }
                }
                ParityClass::Bounded => {
                    let clean = ghz_qfi(n, nu, 0.0)?;
                    let decreasing = f.windows(2).all(|p| p[1] < p[0]);
                    if !(decreasing && f[2] < 0.05 * clean) {
                        bad.push(format!("n={n} nu={nu} odd: {f:?}"));
                    }
                }
                ParityClass::Nonconvergent => bad.push(format!("n={n} nu={nu} misclassified")),
            }
        }
        Ok((bad.is_empty(), if bad.is_empty() { "even grows, odd decays".into() } else { bad.join("; ") }))
    });
}

fn resolution_analytics(s: &mut Suite) {
    let depth = s.config.depth;
    s.run("resolution/uncorrelated-closed-form-vs-ansatz", true, |s| {
        let mut w = Worst::new();
        let t = 0.6;
        for n in 1..=depth.max_uncorrelated() {
            for nu in [1.0, 2.0] {
                for strength in [0.1, 0.5, 1.0] {
                    for p in PROBES {
                        let m = model_at(strength, nu, n, t, Correlation::Uncorrelated)?;
                        let probe = ProbeState::of_kind(p, n)?;
                        let f = purify(&probe, &m, t, 0.0)?;
                        let fit = minimize_ansatz(&f, &AnsatzBasis::collective(n)?)?;
                        let q = ResolutionQuery::for_probe(m, &probe, t, 1.0);
                        let closed = s.closed(closed_form_uncorrelated(&q)?);
                        let engine = resolution_from_qfi(fit.value, t, 1.0);
                        w.record(rel(closed, engine), || format!("n={n} nu={nu} gt^nu={strength} {p}"));
                    }
                }
            }
        }
        Ok(w.within(1e-6))
    });

    s.run("resolution/markovian-ramsey-equivalence", true, |s| {
        let mut w = Worst::new();
        for n in [1, 4, 9] {
            for g in [0.1, 0.5, 2.0] {
                for total in [0.5, 1.0, 10.0] {
                    let m = DephasingModel::uncorrelated(g, 1.0, n)?;
                    let want = (2.0 * E * g / (n as f64 * total)).sqrt();
                    for p in PROBES {
                        let got = s.closed(ramsey_uncorrelated(&m, p, total)?);
                        w.record(rel(got, want), || format!("n={n} g={g} T={total} {p}"));
                    }
                }
            }
        }
        Ok(w.within(1e-12))
    });

    s.run("resolution/improvement-factor-shape", true, |s| {
        let root_e = s.closed(improvement_closed(1.0));
        let mut prev = f64::INFINITY;
        let mut ok = (root_e - E.sqrt()).abs() <= 1e-9;
        let mut max_jump: f64 = 0.0;
        let mut min_value = f64::INFINITY;
        for k in 0..=9000 {
            let nu = 1.0 + k as f64 / 1000.0;
            let i = improvement_closed(nu);
            ok &= i <= prev + 1e-15 && i >= 1.0 - 1e-9;
            if prev.is_finite() {
                max_jump = max_jump.max((prev - i).abs());
            }
            min_value = min_value.min(i);
            prev = i;
        }
        ok &= max_jump < 1e-2;
        Ok((ok, format!("I(1)={root_e:.10}, min {min_value:.6}, largest step {max_jump:.2e}")))
    });

    s.run("resolution/correlated-heisenberg-at-zero-gamma", true, |s| {
        let mut ok = true;
        for n in 1..=6 {
            for t in [0.3, 1.0, 4.0] {
                let got = s.closed(correlated_closed_form(n, 1.5, 0.0, t, ProbeKind::Ghz)?);
                ok &= got == 1.0 / (t * (n * n) as f64).sqrt();
            }
        }
        Ok((ok, "exact equality".into()))
    });

    s.run("resolution/correlated-ramsey-equivalence", true, |s| {
        let mut w = Worst::new();
        for n in 1..=depth.max_shared() {
            for nu in [1.0, 2.0, 3.0] {
                for g in [0.25, 0.5, 1.0, 4.0] {
                    let m = DephasingModel::max_correlated(g, nu, n)?;
                    let te = optimal_time_closed(&m, ProbeKind::Ghz)?;
                    let tu = optimal_time_closed(&m, ProbeKind::ProductPlus)?;
                    let r = s.closed(ramsey_max_correlated(&m, ProbeKind::ProductPlus, tu, 1.0)?)
                        / ramsey_max_correlated(&m, ProbeKind::Ghz, te, 1.0)?;
                    w.record((r - 1.0).abs(), || format!("n={n} nu={nu} g={g}"));
                }
            }
        }
        Ok(w.within(1e-10))
    });

    s.run("resolution/golden-section-optimal-times", true, |s| {
        let mut w = Worst::new();
        for n in 1..=5 {
            for nu in [1.0, 2.0, 3.0] {
                for g in [0.25, 1.0, 4.0] {
                    let m = DephasingModel::max_correlated(g, nu, n)?;
                    let closed = s.closed(optimal_time_closed(&m, ProbeKind::Ghz)?);
                    let f = |t: f64| ramsey_max_correlated(&m, ProbeKind::Ghz, t, 1.0).unwrap_or(f64::INFINITY);
                    let numeric = golden_section(f, 1e-9 * closed, 10.0 * closed, 1e-12)?.x;
                    w.record(rel(numeric, closed), || format!("n={n} nu={nu} g={g}"));
                }
            }
        }
        Ok(w.within(1e-6))
    });

    s.run("resolution/correlated-ghz-vs-oracle", true, |s| {
        let mut w = Worst::new();
        let t = 1.0;
        for n in 2..=depth.max_shared().min(4) {
            for nu in [1.0, 2.0] {
                for strength in [0.2, 1.0, 3.0] {
                    let m = model_at(strength, nu, n, t, Correlation::MaxCorrelated)?;
                    let oracle = system_qfi(&purified(&m, ProbeKind::Ghz, t, 0.0)?)?;
                    let dw = s.closed(correlated_closed_form(n, nu, m.gamma(), t, ProbeKind::Ghz)?);
                    let closed = qfi_from_resolution(dw, t, 1.0);
                    w.record(rel(closed, oracle), || format!("n={n} nu={nu} gt^nu={strength}"));
                }
            }
        }
        Ok(w.within(1e-6))
    });

    s.run("resolution/partial-limit-without-ghz-amplitude", true, |s| {
        let t = 8.0;
        let m = DephasingModel::new(1.0, 1.0, 2, Correlation::Partial { amplitude: 1.0 })?;
        let f = purified(&m, ProbeKind::ProductPlus, t, 0.0)?;
        let fit = minimize_ansatz(&f, &AnsatzBasis::two_qubit_symmetric()?)?;
        let engine = resolution_from_qfi(fit.value, t, 1.0);
        let closed = s.closed(partial_corr_asymptote(1.0, 0.0, t)?);
        let want = 1.0 / (2.0 * t).sqrt();
        let ok = (engine - want).abs() < 1e-6 && (closed - want).abs() < 1e-6;
        Ok((ok, format!("ansatz {engine:.9}, closed {closed:.9}, 1/sqrt(2t) {want:.9}")))
    });
}

fn audits(s: &mut Suite) {
    s.info("audit/shared-purification-vs-channel", |_| {
        let mut rows = Vec::new();
        let t = 1.0;
        for n in 2..=4 {
            let m = DephasingModel::max_correlated(0.5, 1.0, n)?;
            let probe = ProbeState::ghz(n)?;
            let family = system_qfi(&purify(&probe, &m, t, 0.0)?)?;
            let rho = dephased_state(&probe, &m, t, 0.0)?;
            let gen = crate::purification::system_generator_diagonal(n, t);
            let channel = qfi_sld(&rho, &phase_derivative(&rho, &gen), SLD_SUPPORT_TOL)?;
            rows.push(format!("n={n}: purification {family:.6e}, channel {channel:.6e}"));
        }
        Ok(format!("GHZ, gamma=0.5, nu=1, t=1: {}", rows.join("; ")))
    });

    s.info("audit/correlated-product-branch", |_| {
        let mut rows = Vec::new();
        let t = 1.0;
        for n in 2..=4 {
            for strength in [0.2, 1.0] {
                let m = DephasingModel::max_correlated(strength, 1.0, n)?;
                let oracle = system_qfi(&purified(&m, ProbeKind::ProductPlus, t, 0.0)?)?;
                let closed = match correlated_closed_form(n, 1.0, strength, t, ProbeKind::ProductPlus) {
                    Ok(dw) => format!("{:.6e}", qfi_from_resolution(dw, t, 1.0)),
                    Err(e) => format!("undefined ({e})"),
                };
                rows.push(format!("n={n} gt={strength}: oracle {oracle:.6e}, formula {closed}"));
            }
        }
        Ok(rows.join("; "))
    });

    s.info("audit/partial-asymptote-ghz-probe", |_| {
        let t = 8.0;
        let mut rows = Vec::new();
        for a in [0.25, 0.5, 0.75] {
            let m = DephasingModel::new(1.0, 1.0, 2, Correlation::Partial { amplitude: a })?;
            let fit = minimize_ansatz(&purified(&m, ProbeKind::Ghz, t, 0.0)?, &AnsatzBasis::two_qubit_symmetric()?)?;
            let engine = resolution_from_qfi(fit.value, t, 1.0);
            let closed = match partial_corr_asymptote(a, 1.0, t) {
                Ok(v) => format!("{v:.6}"),
                Err(_) => "undefined".into(),
            };
            let b = EnvInitState::new(a, 2)?.b;
            rows.push(format!("A={a} (B={b:.4}): ansatz {engine:.6}, formula {closed}"));
        }
        Ok(format!("q=1, gt=8: {}", rows.join("; ")))
    });

    s.info("audit/large-n-optimum", |_| {
        let m = DephasingModel::uncorrelated(1.0, 2.0, 100)?;
        let numeric = numeric_optimum_uncorrelated(&m, 1.0)?;
        let closed = optimal_resolution_uncorrelated(&m, 1.0)?;
        Ok(format!(
            "n=100, nu=2, gamma=1: numeric {:.6} at t={:.5}, asymptotic {closed:.6} ({:+.2}%)",
            numeric.value,
            numeric.x,
            100.0 * (closed / numeric.value - 1.0)
        ))
    });

    s.info("audit/sub-markovian-improvement", |_| {
        let m = DephasingModel::uncorrelated(0.5, 0.25, 100)?;
        Ok(format!("nu=1/4, gamma=0.5, n=100: I = {:.5}", improvement_factor(&m, 1.0)?))
    });

    s.info("audit/coherence-convention", |_| {
        Ok(format!(
            "single-particle coherence e^(-gamma t^nu) in channels, purifications and closed forms; \
             uncorrelated and Ramsey formulas carry e^(2 gamma t^nu); e.g. gamma t = 1 gives coherence {:.6}",
            (-1.0f64).exp()
        ))
    });

    s.info("audit/correlated-channel-beyond-nu-2", |_| {
        // e^{-|x|^ν} stops being positive definite past ν = 2.
        let mut rows = Vec::new();
        for nu in [2.0, 2.5, 3.0] {
            let m = DephasingModel::max_correlated(1.0, nu, 2)?;
            let rho = dephased_state(&ProbeState::product_plus(2)?, &m, 0.5, 0.0)?;
            rows.push(format!("nu={nu}: min eigenvalue {:.3e}", eigh(&rho)?.eigenvalues[0]));
        }
        Ok(format!("max-correlated n=2 product probe, gamma=1, t=0.5: {}", rows.join(", ")))
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_passes() {
        let r = run(VerifyConfig::default());
        let failed: Vec<_> = r.failures().map(|c| format!("{}: {}", c.name, c.detail)).collect();
        assert!(failed.is_empty(), "{failed:#?}");
        assert!(r.checks.iter().any(|c| !c.mandatory));
    }

    #[test]
    fn perturbation_is_detected() {
        let r = run(VerifyConfig {
            perturbation: 1e-3,
            ..VerifyConfig::default()
        });
        assert!(!r.passed());
    }
}
