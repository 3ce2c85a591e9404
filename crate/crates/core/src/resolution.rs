//! Closed-form frequency resolutions, optimal interrogation times, the
//! improvement of optimal measurement over Ramsey spectroscopy, and the
//! parity classification of the shared-environment model.
//!
//! Resolutions and QFI are related by `δw² = 1/(N·F)` with `N = T/t`
//! repetitions of one collective experiment (see [`resolution_from_qfi`]).

use std::f64::consts::E;
use std::fmt;

use serde::Serialize;

use crate::dephasing::{Correlation, DephasingModel, ProbeKind, ProbeState};
use crate::error::{input, Error, Result};
use crate::optimize::{minimize_log_grid, Minimum};
use crate::purification::EnvInitState;

/// `√(t/(T·F))`, the Cramér–Rao resolution for `T/t` repetitions.
pub fn resolution_from_qfi(qfi: f64, t: f64, total_time: f64) -> f64 {
    (t / (total_time * qfi)).sqrt()
}

/// Inverse of [`resolution_from_qfi`].
pub fn qfi_from_resolution(resolution: f64, t: f64, total_time: f64) -> f64 {
    t / (total_time * resolution * resolution)
}

fn require(model: &DephasingModel, want: Correlation) -> Result<()> {
    if model.correlation() != want {
        return Err(input(format!(
            "formula applies to {} environments, model is {}",
            want.name(),
            model.correlation()
        )));
    }
    Ok(())
}

fn require_standard_probe(probe: ProbeKind) -> Result<()> {
    if probe == ProbeKind::Custom {
        return Err(input("closed forms exist for product and GHZ probes only"));
    }
    Ok(())
}

fn positive(name: &str, v: f64) -> Result<()> {
    if !(v.is_finite() && v > 0.0) {
        return Err(input(format!("{name} must be finite and positive, got {v}")));
    }
    Ok(())
}

/// Ramsey resolution optimized over interrogation time in uncorrelated environments.
pub fn ramsey_uncorrelated(model: &DephasingModel, probe: ProbeKind, total_time: f64) -> Result<f64> {
    require(model, Correlation::Uncorrelated)?;
    require_standard_probe(probe)?;
    positive("total time", total_time)?;
    let (g, nu, n) = (model.gamma(), model.nu(), model.n() as f64);
    let scale = (2.0 * E * g * nu).powf(1.0 / nu);
    Ok(match probe {
        ProbeKind::Ghz => (scale / (n.powf(2.0 - 1.0 / nu) * total_time)).sqrt(),
        _ => (scale / (n * total_time)).sqrt(),
    })
}

/// Ramsey resolution at interrogation time `t` in maximally correlated environments.
pub fn ramsey_max_correlated(model: &DephasingModel, probe: ProbeKind, t: f64, total_time: f64) -> Result<f64> {
    require(model, Correlation::MaxCorrelated)?;
    require_standard_probe(probe)?;
    positive("interrogation time", t)?;
    positive("total time", total_time)?;
    let (g, nu, n) = (model.gamma(), model.nu(), model.n() as f64);
    Ok(match probe {
        ProbeKind::Ghz => ((2.0 * n.powf(nu) * g * t.powf(nu)).exp() / (n * n * total_time * t)).sqrt(),
        _ => ((2.0 * g * t.powf(nu)).exp() / (n * total_time * t)).sqrt(),
    })
}

/// Minimizer of [`ramsey_max_correlated`] in `t`: `(1/(2γν))^{1/ν}` for the
/// product probe and `(1/(2n^νγν))^{1/ν}` for GHZ, so `t_e = t_u/n` for every `ν`.
pub fn optimal_time_closed(model: &DephasingModel, probe: ProbeKind) -> Result<f64> {
    require(model, Correlation::MaxCorrelated)?;
    require_standard_probe(probe)?;
    let (g, nu, n) = (model.gamma(), model.nu(), model.n() as f64);
    positive("gamma", g)?;
    Ok(match probe {
        ProbeKind::Ghz => (1.0 / (2.0 * n.powf(nu) * g * nu)).powf(1.0 / nu),
        _ => (1.0 / (2.0 * g * nu)).powf(1.0 / nu),
    })
}

/// Inputs to the optimal-measurement resolution in uncorrelated environments.
#[derive(Clone, Copy, Debug)]
pub struct ResolutionQuery {
    pub model: DephasingModel,
    pub probe: ProbeKind,
    pub t: f64,
    pub total_time: f64,
    /// `Var(ΣZ_i/n) / (1 - ⟨ΣZ_i/n⟩²)`.
    pub q: f64,
    /// `⟨ΣZ_i/n⟩`.
    pub zbar: f64,
}

impl ResolutionQuery {
    /// Takes `q` and `zbar` from the moments of an actual probe state.
    pub fn for_probe(model: DephasingModel, probe: &ProbeState, t: f64, total_time: f64) -> Self {
        let (zbar, var) = probe.collective_z_moments();
        let denom = 1.0 - zbar * zbar;
        let q = if denom > 0.0 { var / denom } else { 0.0 };
        Self {
            model,
            probe: probe.kind(),
            t,
            total_time,
            q,
            zbar,
        }
    }
}

/// Resolution reached by the optimal measurement, in the variance-ratio form
/// `√((1-z̄²)(1 + nq(e^{2γt^ν}-1)) / (q n² T t))`.
pub fn closed_form_uncorrelated(query: &ResolutionQuery) -> Result<f64> {
    let ResolutionQuery { model, t, total_time, q, zbar, .. } = *query;
    require(&model, Correlation::Uncorrelated)?;
    positive("interrogation time", t)?;
    positive("total time", total_time)?;
    if !(q > 0.0 && q <= 1.0 + 1e-12) || !(-1.0..=1.0).contains(&zbar) {
        return Err(input(format!("need q in (0, 1] and zbar in [-1, 1], got q={q}, zbar={zbar}")));
    }
    let spread = 1.0 - zbar * zbar;
    if spread * q <= 0.0 {
        return Err(Error::UndefinedResolution(format!(
            "q·(1 - zbar²) = {} vanishes",
            spread * q
        )));
    }
    let n = model.n() as f64;
    let growth = (2.0 * model.gamma() * t.powf(model.nu())).exp_m1();
    Ok((spread * (1.0 + n * q * growth) / (q * n * n * total_time * t)).sqrt())
}

/// Large-`n` optimum of [`closed_form_uncorrelated`] with `q = 1`, `z̄ = 0`:
/// `√((2γν)^{1/ν} / ((1-1/(2ν))^{1-1/ν} n^{2-1/ν} T))`.
pub fn optimal_resolution_uncorrelated(model: &DephasingModel, total_time: f64) -> Result<f64> {
    positive("total time", total_time)?;
    let (g, nu, n) = (model.gamma(), model.nu(), model.n() as f64);
    let num = (2.0 * g * nu).powf(1.0 / nu);
    let den = (1.0 - 1.0 / (2.0 * nu)).powf(1.0 - 1.0 / nu) * n.powf(2.0 - 1.0 / nu) * total_time;
    Ok((num / den).sqrt())
}

/// Numeric minimum over `t` of [`closed_form_uncorrelated`] with `q = 1`, `z̄ = 0`.
pub fn numeric_optimum_uncorrelated(model: &DephasingModel, total_time: f64) -> Result<Minimum> {
    require(model, Correlation::Uncorrelated)?;
    positive("gamma", model.gamma())?;
    let scale = (1.0 / (2.0 * model.gamma() * model.nu())).powf(1.0 / model.nu());
    let f = |t: f64| {
        let q = ResolutionQuery {
            model: *model,
            probe: ProbeKind::Ghz,
            t,
            total_time,
            q: 1.0,
            zbar: 0.0,
        };
        closed_form_uncorrelated(&q).unwrap_or(f64::INFINITY)
    };
    minimize_log_grid(f, scale * 1e-10, scale * 1e6, 1601)
}

/// `[e / (1-1/(2ν))^{1-ν}]^{1/(2ν)}`.
pub fn improvement_closed(nu: f64) -> f64 {
    (E / (1.0 - 1.0 / (2.0 * nu)).powf(1.0 - nu)).powf(1.0 / (2.0 * nu))
}

/// Ratio of the better Ramsey baseline to the optimal-measurement resolution.
///
/// For `ν ≥ 1` this is the closed form [`improvement_closed`]; below that the
/// optimum is found numerically for the model's `γ`, `n` and the given `T`.
pub fn improvement_factor(model: &DephasingModel, total_time: f64) -> Result<f64> {
    let nu = model.nu();
    if nu >= 1.0 {
        return Ok(improvement_closed(nu));
    }
    let unc = DephasingModel::uncorrelated(model.gamma(), nu, model.n())?;
    let ramsey = ramsey_uncorrelated(&unc, ProbeKind::Ghz, total_time)?
        .min(ramsey_uncorrelated(&unc, ProbeKind::ProductPlus, total_time)?);
    let opt = numeric_optimum_uncorrelated(&unc, total_time)?;
    Ok(ramsey / opt.value)
}

/// Optimal-measurement resolution of the shared-environment purification
/// (`T = 1`), with `cos 2φ̃ = e^{-γt^ν}`.
pub fn correlated_closed_form(n: usize, nu: f64, gamma: f64, t: f64, probe: ProbeKind) -> Result<f64> {
    require_standard_probe(probe)?;
    positive("interrogation time", t)?;
    if n == 0 {
        return Err(input("particle count must be at least 1"));
    }
    let angle = 0.5 * (-gamma * t.powf(nu)).exp().acos();
    let nf = n as f64;
    let inside = match probe {
        ProbeKind::Ghz => {
            let s = (2.0 * nf.powf(nu) * angle).sin();
            nf * nf - nf * nf * s * s
        }
        _ => {
            let sum: f64 = (0..=n)
                .map(|i| {
                    let m = (n as f64 - 2.0 * i as f64).abs();
                    binomial(n, i) * (2.0 * m.powf(nu) * angle).sin()
                })
                .sum();
            nf - nf * nf * sum * sum / 4f64.powi(n as i32)
        }
    };
    if !(inside > 0.0) {
        return Err(Error::UndefinedResolution(format!(
            "t·({inside}) is not positive for n={n}, nu={nu}, gamma·t^nu={}",
            gamma * t.powf(nu)
        )));
    }
    Ok(1.0 / (t * inside).sqrt())
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// Long-time resolution for two particles in partially correlated environments (`T = 1`):
/// `1/√(t(2 - 8B²(A/√2 + B/2)²(1+q)))` with `B` fixed by normalizing the environment state.
pub fn partial_corr_asymptote(a: f64, q: f64, t: f64) -> Result<f64> {
    positive("interrogation time", t)?;
    if !(-1.0..=1.0).contains(&q) {
        return Err(input(format!("q = <Z1 Z2> must lie in [-1, 1], got {q}")));
    }
    let b = EnvInitState::new(a, 2)?.b;
    let inner = a / 2f64.sqrt() + b / 2.0;
    let denom = 2.0 - 8.0 * b * b * inner * inner * (1.0 + q);
    if !(denom > 0.0) {
        return Err(Error::UndefinedResolution(format!(
            "2 - 8B²(A/√2+B/2)²(1+q) = {denom} for A={a}, B={b}, q={q}"
        )));
    }
    Ok(1.0 / (t * denom).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParityClass {
    /// `n^ν` even: information grows without bound in `t`.
    Unbounded,
    /// `n^ν` odd: the optimal interrogation time is finite.
    Bounded,
    /// `n^ν` not an integer.
    Nonconvergent,
}

impl ParityClass {
    pub fn label(&self) -> &'static str {
        match self {
            ParityClass::Unbounded => "even/unbounded",
            ParityClass::Bounded => "odd/bounded",
            ParityClass::Nonconvergent => "non-integer/nonconvergent",
        }
    }
}

impl Serialize for ParityClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

impl fmt::Display for ParityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ParityLimit {
    pub m: f64,
    /// `sin²(Mπ/2)`, the long-time value of the GHZ `sin²(2Mφ̃)` term.
    pub limit_value: f64,
    pub class: ParityClass,
}

pub fn parity_limit(n: usize, nu: f64) -> ParityLimit {
    let m = (n as f64).powf(nu);
    let rounded = m.round();
    if (m - rounded).abs() <= 1e-9 * m.max(1.0) {
        let even = (rounded as i64) % 2 == 0;
        ParityLimit {
            m,
            limit_value: if even { 0.0 } else { 1.0 },
            class: if even { ParityClass::Unbounded } else { ParityClass::Bounded },
        }
    } else {
        ParityLimit {
            m,
            limit_value: (m * std::f64::consts::FRAC_PI_2).sin().powi(2),
            class: ParityClass::Nonconvergent,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimize::{golden_section, optimal_time_numeric};

    fn unc(g: f64, nu: f64, n: usize) -> DephasingModel {
        DephasingModel::uncorrelated(g, nu, n).unwrap()
    }

    fn mc(g: f64, nu: f64, n: usize) -> DephasingModel {
        DephasingModel::max_correlated(g, nu, n).unwrap()
    }

    #[test]
    fn markovian_ramsey_equivalence() {
        let m = unc(0.3, 1.0, 5);
        let want = (2.0 * E * 0.3 / (5.0 * 2.0)).sqrt();
        for p in [ProbeKind::Ghz, ProbeKind::ProductPlus] {
            assert!((ramsey_uncorrelated(&m, p, 2.0).unwrap() - want).abs() < 1e-15);
        }
    }

    #[test]
    fn non_markovian_ramsey() {
        let m = unc(1.0, 2.0, 4);
        let got = ramsey_uncorrelated(&m, ProbeKind::Ghz, 1.0).unwrap();
        let want = ((4.0 * E).sqrt() / 4f64.powf(1.5)).sqrt();
        assert!((got - want).abs() < 1e-15);
        assert!((got - 0.6420).abs() < 1e-4);

        let m = unc(0.7, 1.6, 6);
        let ratio = ramsey_uncorrelated(&m, ProbeKind::ProductPlus, 3.0).unwrap()
            / ramsey_uncorrelated(&m, ProbeKind::Ghz, 3.0).unwrap();
        assert!((ratio - 6f64.powf(0.5 * (1.0 - 1.0 / 1.6))).abs() < 1e-13);
    }

    #[test]
    fn correlated_ramsey_examples() {
        let m = mc(0.8, 1.5, 3);
        let te = optimal_time_closed(&m, ProbeKind::Ghz).unwrap();
        let tu = optimal_time_closed(&m, ProbeKind::ProductPlus).unwrap();
        let r = ramsey_max_correlated(&m, ProbeKind::ProductPlus, tu, 1.0).unwrap()
            / ramsey_max_correlated(&m, ProbeKind::Ghz, te, 1.0).unwrap();
        assert!((r - 1.0).abs() < 1e-12);

        let m1 = mc(0.8, 1.5, 1);
        assert_eq!(
            ramsey_max_correlated(&m1, ProbeKind::Ghz, 0.4, 2.0).unwrap(),
            ramsey_max_correlated(&m1, ProbeKind::ProductPlus, 0.4, 2.0).unwrap()
        );

        let m0 = mc(0.0, 1.0, 4);
        let ratio = ramsey_max_correlated(&m0, ProbeKind::ProductPlus, 0.5, 1.0).unwrap()
            / ramsey_max_correlated(&m0, ProbeKind::Ghz, 0.5, 1.0).unwrap();
        assert!((ratio - 2.0).abs() < 1e-14);
    }

    #[test]
    fn optimal_time_examples() {
        assert!((optimal_time_closed(&mc(1.0, 1.0, 2), ProbeKind::Ghz).unwrap() - 0.25).abs() < 1e-15);
        assert!((optimal_time_closed(&mc(1.0, 1.0, 2), ProbeKind::ProductPlus).unwrap() - 0.5).abs() < 1e-15);
        let m = mc(1.0, 1.0, 2);
        let f = |t: f64| ramsey_max_correlated(&m, ProbeKind::Ghz, t, 1.0).unwrap();
        let t = optimal_time_numeric(f, (1e-6, 2.5)).unwrap();
        assert!((t - 0.25).abs() < 1e-6);
    }

    #[test]
    fn uncorrelated_closed_form_examples() {
        // γ = 0: Heisenberg scaling.
        let q = ResolutionQuery {
            model: unc(0.0, 1.0, 4),
            probe: ProbeKind::Ghz,
            t: 0.3,
            total_time: 2.0,
            q: 1.0,
            zbar: 0.0,
        };
        let want = (1.0 / (16.0 * 2.0 * 0.3f64)).sqrt();
        assert!((closed_form_uncorrelated(&q).unwrap() - want).abs() < 1e-15);

        let bad = ResolutionQuery { zbar: 1.0, ..q };
        assert!(matches!(closed_form_uncorrelated(&bad), Err(Error::UndefinedResolution(_))));

        // Minimized over t the large-n value approaches √(2γ/(nT)).
        let m = unc(0.5, 1.0, 100_000);
        let opt = numeric_optimum_uncorrelated(&m, 1.0).unwrap();
        let best = (2.0 * 0.5 / 100_000.0f64).sqrt();
        assert!((opt.value / best - 1.0).abs() < 0.02);
    }

    #[test]
    fn eq12_examples() {
        let m = unc(0.4, 1.0, 7);
        let want = (2.0 * 0.4 / 7.0f64).sqrt();
        assert!((optimal_resolution_uncorrelated(&m, 1.0).unwrap() - want).abs() < 1e-15);
        let m = unc(1.0, 2.0, 100);
        let want = (2.0 / (0.75f64.sqrt() * 1000.0)).sqrt();
        assert!((optimal_resolution_uncorrelated(&m, 1.0).unwrap() - want).abs() < 1e-15);
        assert!((want - 0.04806).abs() < 1e-5);
    }

    #[test]
    fn improvement_examples() {
        let m = |nu: f64| unc(0.5, nu, 100);
        assert!((improvement_factor(&m(1.0), 1.0).unwrap() - E.sqrt()).abs() < 1e-12);
        let i2 = improvement_factor(&m(2.0), 1.0).unwrap();
        assert!((1.19..=1.20).contains(&i2));
        let iq = improvement_factor(&m(0.25), 1.0).unwrap();
        assert!((iq - 1.0).abs() < 0.05, "I(1/4) = {iq}");
    }

    #[test]
    fn correlated_closed_form_examples() {
        let t = 0.7;
        let ghz = correlated_closed_form(3, 1.0, 0.0, t, ProbeKind::Ghz).unwrap();
        assert_eq!(ghz, 1.0 / (t * 9.0).sqrt());
        let prod = correlated_closed_form(3, 1.0, 0.0, t, ProbeKind::ProductPlus).unwrap();
        assert!((prod - 1.0 / (t * 3.0f64).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn partial_asymptote_examples() {
        let t = 8.0;
        assert!((partial_corr_asymptote(1.0, 0.3, t).unwrap() - 1.0 / (2.0 * t).sqrt()).abs() < 1e-15);
        for a in [0.0, 0.4, 0.9] {
            assert!((partial_corr_asymptote(a, -1.0, t).unwrap() - 1.0 / (2.0 * t).sqrt()).abs() < 1e-15);
        }
        assert!(matches!(partial_corr_asymptote(0.25, 1.0, t), Err(Error::UndefinedResolution(_))));
    }

    #[test]
    fn parity_examples() {
        assert_eq!(parity_limit(2, 1.0).class, ParityClass::Unbounded);
        assert_eq!(parity_limit(3, 1.0).class, ParityClass::Bounded);
        let p = parity_limit(9, 2f64.ln() / 9f64.ln());
        assert_eq!(p.class, ParityClass::Unbounded);
        assert!((p.m - 2.0).abs() < 1e-12);
        let p = parity_limit(2, 0.5);
        assert_eq!(p.class, ParityClass::Nonconvergent);
        assert!((p.limit_value - (2f64.sqrt() * std::f64::consts::FRAC_PI_2).sin().powi(2)).abs() < 1e-15);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10.0);
        assert_eq!(binomial(6, 0), 1.0);
        assert_eq!(binomial(6, 6), 1.0);
    }

    #[test]
    fn golden_section_reproduces_closed_optimal_times() {
        for n in 1..=5 {
            for nu in [1.0, 2.0, 3.0] {
                for g in [0.25, 1.0, 4.0] {
                    let m = mc(g, nu, n);
                    let closed = optimal_time_closed(&m, ProbeKind::Ghz).unwrap();
                    let f = |t: f64| ramsey_max_correlated(&m, ProbeKind::Ghz, t, 1.0).unwrap();
                    let num = golden_section(f, 1e-9 * closed, 10.0 * closed, 1e-12).unwrap().x;
                    assert!((num / closed - 1.0).abs() < 1e-6, "n={n} nu={nu} g={g}");
                }
            }
        }
    }
}
