//! Power-law dephasing models, probe states, spectral coherence and the
//! dephased system density matrix.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::io::BufRead;
use std::path::Path;

use serde::Serialize;

use crate::error::{input, unsupported, Result};
use crate::linalg::{ComplexMatrix, StateVector, C64, MAX_QUBITS};

/// How the particles' environments are correlated.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Correlation {
    Uncorrelated,
    MaxCorrelated,
    /// Partially correlated environments prepared with GHZ amplitude `amplitude`.
    Partial { amplitude: f64 },
    /// Mixture of uncorrelated (weight sin²θ) and maximally correlated (cos²θ) joint spectra.
    Mixed { theta: f64 },
}

impl Correlation {
    pub fn name(&self) -> &'static str {
        match self {
            Correlation::Uncorrelated => "uncorrelated",
            Correlation::MaxCorrelated => "max-correlated",
            Correlation::Partial { .. } => "partial",
            Correlation::Mixed { .. } => "mixed",
        }
    }
}

impl fmt::Display for Correlation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Correlation::Partial { amplitude } => write!(f, "partial(A={amplitude})"),
            Correlation::Mixed { theta } => write!(f, "mixed(theta={theta})"),
            other => f.write_str(other.name()),
        }
    }
}

/// Dephasing with local exponent `γ(t) = γ·t^ν` acting on `n` particles.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DephasingModel {
    gamma: f64,
    nu: f64,
    n: usize,
    correlation: Correlation,
}

impl DephasingModel {
    pub fn new(gamma: f64, nu: f64, n: usize, correlation: Correlation) -> Result<Self> {
        if !(gamma.is_finite() && gamma >= 0.0) {
            return Err(input(format!("gamma must be finite and non-negative, got {gamma}")));
        }
        if !(nu.is_finite() && nu > 0.0) {
            return Err(input(format!("nu must be finite and positive, got {nu}")));
        }
        if n == 0 {
            return Err(input("particle count must be at least 1"));
        }
        match correlation {
            Correlation::Partial { amplitude } => {
                if n != 2 {
                    return Err(unsupported(format!(
                        "partially correlated environments are implemented for n = 2 only (got n = {n})"
                    )));
                }
                if !(0.0..=1.0).contains(&amplitude) {
                    return Err(input(format!("amplitude A must lie in [0, 1], got {amplitude}")));
                }
            }
            Correlation::Mixed { theta } if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&theta) => {
                return Err(input(format!("theta must lie in [0, pi/2], got {theta}")));
            }
            _ => {}
        }
        Ok(Self {
            gamma,
            nu,
            n,
            correlation,
        })
    }

    pub fn uncorrelated(gamma: f64, nu: f64, n: usize) -> Result<Self> {
        Self::new(gamma, nu, n, Correlation::Uncorrelated)
    }

    pub fn max_correlated(gamma: f64, nu: f64, n: usize) -> Result<Self> {
        Self::new(gamma, nu, n, Correlation::MaxCorrelated)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn correlation(&self) -> Correlation {
        self.correlation
    }

    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        Self::new(gamma, self.nu, self.n, self.correlation)
    }

    /// `γ·t^ν`, the single-particle decay exponent.
    pub fn local_exponent(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(self.gamma * t.powf(self.nu))
    }

    /// `γ·(n·t)^ν`, the exponent of the `n`-particle extreme coherence in
    /// maximally correlated environments.
    pub fn collective_exponent(&self, t: f64) -> Result<f64> {
        if self.correlation != Correlation::MaxCorrelated {
            return Err(input(format!(
                "collective exponent needs max-correlated environments, model is {}",
                self.correlation
            )));
        }
        check_time(t)?;
        Ok(self.gamma * (self.n as f64 * t).powf(self.nu))
    }

    /// Survival factor of the GHZ extreme coherence under the mixed joint spectrum:
    /// `sin²θ·e^{-n·γt^ν} + cos²θ·e^{-γ(nt)^ν}`.
    pub fn mixed_collective_coherence(&self, t: f64) -> Result<f64> {
        let Correlation::Mixed { theta } = self.correlation else {
            return Err(input(format!(
                "mixed coherence needs a mixed correlation model, model is {}",
                self.correlation
            )));
        };
        check_time(t)?;
        let n = self.n as f64;
        let local = self.gamma * t.powf(self.nu);
        let collective = self.gamma * (n * t).powf(self.nu);
        let (s, c) = theta.sin_cos();
        Ok(s * s * (-n * local).exp() + c * c * (-collective).exp())
    }
}

fn check_time(t: f64) -> Result<()> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(input(format!("time must be finite and non-negative, got {t}")));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeKind {
    ProductPlus,
    Ghz,
    Custom,
}

impl ProbeKind {
    pub fn name(&self) -> &'static str {
        match self {
            ProbeKind::ProductPlus => "product",
            ProbeKind::Ghz => "ghz",
            ProbeKind::Custom => "custom",
        }
    }
}

impl fmt::Display for ProbeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Initial pure state of the `n` probe qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbeState {
    n: usize,
    state: StateVector,
    kind: ProbeKind,
}

impl ProbeState {
    /// `((|0⟩+|1⟩)/√2)^⊗n`.
    pub fn product_plus(n: usize) -> Result<Self> {
        check_register(n)?;
        let dim = 1usize << n;
        let a = C64::new((dim as f64).sqrt().recip(), 0.0);
        Ok(Self {
            n,
            state: StateVector::from_normalized(vec![a; dim]),
            kind: ProbeKind::ProductPlus,
        })
    }

    /// `(|0…0⟩ + |1…1⟩)/√2`.
    pub fn ghz(n: usize) -> Result<Self> {
        check_register(n)?;
        Ok(Self {
            n,
            state: ghz_vector(n),
            kind: ProbeKind::Ghz,
        })
    }

    pub fn custom(state: StateVector) -> Result<Self> {
        let dim = state.dim();
        if !dim.is_power_of_two() || dim < 2 {
            return Err(input(format!("probe dimension {dim} is not a power of two")));
        }
        let n = dim.trailing_zeros() as usize;
        check_register(n)?;
        Ok(Self {
            n,
            state,
            kind: ProbeKind::Custom,
        })
    }

    pub fn of_kind(kind: ProbeKind, n: usize) -> Result<Self> {
        match kind {
            ProbeKind::ProductPlus => Self::product_plus(n),
            ProbeKind::Ghz => Self::ghz(n),
            ProbeKind::Custom => Err(input("custom probes need explicit amplitudes")),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> ProbeKind {
        self.kind
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn amplitudes(&self) -> &[C64] {
        self.state.amplitudes()
    }

    /// `(⟨ΣZ_i/n⟩, Var(ΣZ_i/n))` on the probe.
    pub fn collective_z_moments(&self) -> (f64, f64) {
        let n = self.n as f64;
        let (mut m1, mut m2) = (0.0, 0.0);
        for (x, a) in self.amplitudes().iter().enumerate() {
            let p = a.norm_sqr();
            let m = sector(self.n, x) as f64 / n;
            m1 += p * m;
            m2 += p * m * m;
        }
        (m1, m2 - m1 * m1)
    }

    /// `⟨ψ|Z_i Z_j|ψ⟩`.
    pub fn zz_correlation(&self, i: usize, j: usize) -> f64 {
        self.amplitudes()
            .iter()
            .enumerate()
            .map(|(x, a)| {
                let zi = z_eigenvalue(self.n, x, i);
                let zj = z_eigenvalue(self.n, x, j);
                a.norm_sqr() * zi * zj
            })
            .sum()
    }
}

pub(crate) fn ghz_vector(n: usize) -> StateVector {
    let dim = 1usize << n;
    let mut amps = vec![C64::new(0.0, 0.0); dim];
    amps[0] = C64::new(FRAC_1_SQRT_2, 0.0);
    amps[dim - 1] = C64::new(FRAC_1_SQRT_2, 0.0);
    StateVector::from_normalized(amps)
}

fn check_register(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(input(format!("probe size {n} outside 1..={MAX_QUBITS}")));
    }
    Ok(())
}

/// Total-Z eigenvalue `#zeros - #ones` of basis string `x` on `n` sites.
pub fn sector(n: usize, x: usize) -> i64 {
    n as i64 - 2 * x.count_ones() as i64
}

/// Eigenvalue of `Z` on site `i` (site 0 is the most significant bit).
pub(crate) fn z_eigenvalue(n: usize, x: usize, i: usize) -> f64 {
    if (x >> (n - 1 - i)) & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Density matrix of the probe after phase accumulation `φ` for time `t` under
/// the model's dephasing. Only the uncorrelated and maximally correlated
/// channels are defined here; the other structures go through purifications.
pub fn dephased_state(
    probe: &ProbeState,
    model: &DephasingModel,
    t: f64,
    phi: f64,
) -> Result<ComplexMatrix> {
    check_time(t)?;
    if probe.n() != model.n() {
        return Err(input(format!(
            "probe has {} qubits but the model has {} particles",
            probe.n(),
            model.n()
        )));
    }
    let n = model.n();
    let local = model.local_exponent(t)?;
    let decay: Box<dyn Fn(usize, usize) -> f64> = match model.correlation() {
        Correlation::Uncorrelated => {
            Box::new(move |x: usize, y: usize| (-local * f64::from((x ^ y).count_ones())).exp())
        }
        Correlation::MaxCorrelated => {
            let (gamma, nu) = (model.gamma(), model.nu());
            Box::new(move |x: usize, y: usize| {
                let dm = (sector(n, x) - sector(n, y)).unsigned_abs() as f64;
                (-gamma * (dm * t / 2.0).powf(nu)).exp()
            })
        }
        other => {
            return Err(unsupported(format!(
                "no direct channel for {other} environments; use a purification"
            )))
        }
    };
    let psi = probe.amplitudes();
    Ok(ComplexMatrix::from_fn(psi.len(), |x, y| {
        let dm = (sector(n, x) - sector(n, y)) as f64;
        let phase = C64::from_polar(1.0, -phi * t * dm / 2.0);
        psi[x] * psi[y].conj() * phase * decay(x, y)
    }))
}

/// A spectral density `F(w)` sampled on a uniform grid.
#[derive(Clone, Debug)]
pub struct SpectralSamples {
    start: f64,
    spacing: f64,
    density: Vec<f64>,
}

impl SpectralSamples {
    /// Validates samples: uniform spacing, `F ≥ 0`, and a trapezoid integral of 1 within 1e-6.
    pub fn new(w: Vec<f64>, density: Vec<f64>) -> Result<Self> {
        if w.len() != density.len() {
            return Err(input(format!(
                "{} frequencies but {} density values",
                w.len(),
                density.len()
            )));
        }
        if w.len() < 2 {
            return Err(input("spectral grid needs at least two points"));
        }
        let spacing = (w[w.len() - 1] - w[0]) / (w.len() - 1) as f64;
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(input("spectral grid must be increasing"));
        }
        for (k, pair) in w.windows(2).enumerate() {
            let d = pair[1] - pair[0];
            if (d - spacing).abs() > 1e-6 * spacing {
                return Err(input(format!("spectral grid is not uniform at row {}", k + 1)));
            }
        }
        if let Some(bad) = density.iter().find(|f| !(f.is_finite() && **f >= 0.0)) {
            return Err(input(format!("spectral density must be finite and non-negative, found {bad}")));
        }
        let samples = Self {
            start: w[0],
            spacing,
            density,
        };
        let mass = samples.mass();
        if (mass - 1.0).abs() > 1e-6 {
            return Err(input(format!("spectral density integrates to {mass}, not 1")));
        }
        Ok(samples)
    }

    /// Samples `f` at `points` uniform nodes on `[-half_width, half_width]`
    /// and rescales so the trapezoid integral is exactly 1.
    pub fn from_fn(f: impl Fn(f64) -> f64, half_width: f64, points: usize) -> Result<Self> {
        if points < 2 || !(half_width.is_finite() && half_width > 0.0) {
            return Err(input("need at least two points on a positive half-width"));
        }
        let spacing = 2.0 * half_width / (points - 1) as f64;
        let density: Vec<f64> = (0..points).map(|k| f(-half_width + k as f64 * spacing)).collect();
        let mut samples = Self {
            start: -half_width,
            spacing,
            density,
        };
        let mass = samples.mass();
        if !(mass.is_finite() && mass > 0.0) {
            return Err(input("density has no mass on the grid"));
        }
        samples.density.iter_mut().for_each(|f| *f /= mass);
        Ok(samples)
    }

    /// Lorentzian `(γ/π)/(w²+γ²)`, whose transform is `e^{-γ|t|}`.
    ///
    /// The heavy tail forces a wide grid: the half-width keeps the truncated
    /// mass below 1e-6 and the spacing pushes the periodic images of the
    /// transform beyond `max_time + 21/γ`, so aliasing stays below 1e-9.
    pub fn lorentzian(width: f64, max_time: f64) -> Result<Self> {
        if !(width.is_finite() && width > 0.0 && max_time.is_finite() && max_time >= 0.0) {
            return Err(input("Lorentzian needs a positive width and non-negative horizon"));
        }
        let half_width = width * (std::f64::consts::FRAC_PI_2 * (1.0 - 1e-6)).tan();
        let spacing = 2.0 * std::f64::consts::PI / (max_time + 21.0 / width);
        let points = (2.0 * half_width / spacing).ceil() as usize + 1;
        Self::from_fn(
            |w| width / std::f64::consts::PI / (w * w + width * width),
            half_width,
            points,
        )
    }

    /// Gaussian with standard deviation `sigma`, whose transform is `e^{-σ²t²/2}`.
    pub fn gaussian(sigma: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(input("Gaussian needs a positive standard deviation"));
        }
        let norm = 1.0 / (sigma * (2.0 * std::f64::consts::PI).sqrt());
        Self::from_fn(
            |w| norm * (-0.5 * (w / sigma).powi(2)).exp(),
            6.0 * sigma,
            DEFAULT_SPECTRAL_POINTS,
        )
    }

    /// Reads a two-column `w,F` CSV with a one-line header.
    pub fn from_csv_reader(reader: impl BufRead) -> Result<Self> {
        let mut w = Vec::new();
        let mut f = Vec::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            if lineno == 0 || line.trim().is_empty() {
                continue;
            }
            let mut cols = line.split(',').map(str::trim);
            let (Some(a), Some(b), None) = (cols.next(), cols.next(), cols.next()) else {
                return Err(input(format!("line {}: expected two columns", lineno + 1)));
            };
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| input(format!("line {}: {e}: {s:?}", lineno + 1)))
            };
            w.push(parse(a)?);
            f.push(parse(b)?);
        }
        Self::new(w, f)
    }

    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::from_csv_reader(std::io::BufReader::new(file))
    }

    pub fn len(&self) -> usize {
        self.density.len()
    }

    pub fn is_empty(&self) -> bool {
        self.density.is_empty()
    }

    pub fn frequency(&self, k: usize) -> f64 {
        self.start + k as f64 * self.spacing
    }

    pub fn density(&self) -> &[f64] {
        &self.density
    }

    fn trapezoid_weight(&self, k: usize) -> f64 {
        if k == 0 || k + 1 == self.density.len() {
            0.5 * self.spacing
        } else {
            self.spacing
        }
    }

    /// Trapezoid-rule integral of `F`.
    pub fn mass(&self) -> f64 {
        self.density
            .iter()
            .enumerate()
            .map(|(k, f)| f * self.trapezoid_weight(k))
            .sum()
    }

    /// Trapezoid-rule value of `∫F(w)e^{-iwt}dw`.
    pub fn coherence(&self, t: f64) -> C64 {
        const BLOCK: usize = 1024;
        let step = C64::from_polar(1.0, -self.spacing * t);
        let mut acc = C64::new(0.0, 0.0);
        for (b, chunk) in self.density.chunks(BLOCK).enumerate() {
            let k0 = b * BLOCK;
            // Exact phase at each block start, recurrence within the block.
            let mut phase = C64::from_polar(1.0, -self.frequency(k0) * t);
            let mut part = C64::new(0.0, 0.0);
            for (j, f) in chunk.iter().enumerate() {
                part += phase * (f * self.trapezoid_weight(k0 + j));
                phase *= step;
            }
            acc += part;
        }
        acc
    }
}

pub const DEFAULT_SPECTRAL_POINTS: usize = 4001;

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, LN_2};

    #[test]
    fn local_exponent_examples() {
        let m = DephasingModel::uncorrelated(1.0, 1.0, 1).unwrap();
        assert_eq!(m.local_exponent(2.0).unwrap(), 2.0);
        let m = DephasingModel::uncorrelated(0.5, 2.0, 1).unwrap();
        assert_eq!(m.local_exponent(2.0).unwrap(), 2.0);
        assert_eq!(m.local_exponent(0.0).unwrap(), 0.0);
        assert!(m.local_exponent(-1.0).is_err());
    }

    #[test]
    fn collective_exponent_examples() {
        let m = DephasingModel::max_correlated(0.7, 1.0, 2).unwrap();
        assert!((m.collective_exponent(1.3).unwrap() - 2.0 * 0.7 * 1.3).abs() < 1e-15);
        let m = DephasingModel::max_correlated(0.5, 2.0, 3).unwrap();
        assert!((m.collective_exponent(1.0).unwrap() - 4.5).abs() < 1e-15);
        let m = DephasingModel::max_correlated(0.5, 1.7, 1).unwrap();
        assert_eq!(m.collective_exponent(0.8).unwrap(), m.local_exponent(0.8).unwrap());
        let u = DephasingModel::uncorrelated(0.5, 1.7, 2).unwrap();
        assert!(u.collective_exponent(1.0).is_err());
    }

    #[test]
    fn mixed_coherence_examples() {
        let (gamma, nu, t, n) = (0.3, 1.5, 0.9f64, 3usize);
        let unc = DephasingModel::new(gamma, nu, n, Correlation::Mixed { theta: FRAC_PI_2 }).unwrap();
        let want = (-(n as f64) * gamma * t.powf(nu)).exp();
        assert!((unc.mixed_collective_coherence(t).unwrap() - want).abs() < 1e-15);

        let cor = DephasingModel::new(gamma, nu, n, Correlation::Mixed { theta: 0.0 }).unwrap();
        let want = (-gamma * (n as f64 * t).powf(nu)).exp();
        assert_eq!(cor.mixed_collective_coherence(t).unwrap(), want);

        let mid = DephasingModel::new(1.0, 2.0, 2, Correlation::Mixed { theta: FRAC_PI_4 }).unwrap();
        let want = 0.5 * (-2.0f64).exp() + 0.5 * (-4.0f64).exp();
        assert!((mid.mixed_collective_coherence(1.0).unwrap() - want).abs() < 1e-15);
        assert!((want - 0.07683).abs() < 1e-5);
    }

    #[test]
    fn model_validation() {
        assert!(DephasingModel::uncorrelated(f64::NAN, 1.0, 1).is_err());
        assert!(DephasingModel::uncorrelated(1.0, 0.0, 1).is_err());
        assert!(DephasingModel::uncorrelated(1.0, 1.0, 0).is_err());
        assert!(matches!(
            DephasingModel::new(1.0, 1.0, 3, Correlation::Partial { amplitude: 0.5 }),
            Err(crate::Error::Unsupported(_))
        ));
        assert!(DephasingModel::new(1.0, 1.0, 2, Correlation::Partial { amplitude: 1.5 }).is_err());
        assert!(DephasingModel::new(1.0, 1.0, 2, Correlation::Mixed { theta: 2.0 }).is_err());
    }

    #[test]
    fn probe_constructors() {
        let p = ProbeState::product_plus(3).unwrap();
        assert!(p.amplitudes().iter().all(|a| (a.re - 8f64.sqrt().recip()).abs() < 1e-15));
        let g = ProbeState::ghz(3).unwrap();
        assert_eq!(g.amplitudes()[0], g.amplitudes()[7]);
        let (m, v) = g.collective_z_moments();
        assert!(m.abs() < 1e-15 && (v - 1.0).abs() < 1e-15);
        let (m, v) = p.collective_z_moments();
        assert!(m.abs() < 1e-15 && (v - 1.0 / 3.0).abs() < 1e-15);
        assert!((g.zz_correlation(0, 1) - 1.0).abs() < 1e-15);
        assert!(p.zz_correlation(0, 2).abs() < 1e-15);
    }

    #[test]
    fn dephased_state_without_noise_is_pure() {
        let probe = ProbeState::ghz(3).unwrap();
        let model = DephasingModel::uncorrelated(0.0, 1.0, 3).unwrap();
        let rho = dephased_state(&probe, &model, 1.3, 0.4).unwrap();
        let purity = rho.matmul(&rho).trace().re;
        assert!((purity - 1.0).abs() < 1e-14);
    }

    #[test]
    fn single_qubit_coherence_example() {
        let probe = ProbeState::product_plus(1).unwrap();
        let model = DephasingModel::uncorrelated(LN_2, 1.0, 1).unwrap();
        let rho = dephased_state(&probe, &model, 1.0, 0.0).unwrap();
        assert!((rho[(0, 1)].re - 0.25).abs() < 1e-15);
        assert!(rho[(0, 1)].im.abs() < 1e-15);
    }

    #[test]
    fn ghz_extreme_coherence_in_correlated_environment() {
        let (gamma, t) = (0.35, 1.1);
        let probe = ProbeState::ghz(2).unwrap();
        let model = DephasingModel::max_correlated(gamma, 1.0, 2).unwrap();
        let rho = dephased_state(&probe, &model, t, 0.0).unwrap();
        let want = 0.5 * (-2.0 * gamma * t).exp();
        assert!((rho[(0, 3)].re - want).abs() < 1e-15);
    }

    #[test]
    fn dephased_state_rejects_other_structures() {
        let probe = ProbeState::ghz(2).unwrap();
        let m = DephasingModel::new(1.0, 1.0, 2, Correlation::Mixed { theta: 0.3 }).unwrap();
        assert!(matches!(dephased_state(&probe, &m, 1.0, 0.0), Err(crate::Error::Unsupported(_))));
        let m = DephasingModel::uncorrelated(1.0, 1.0, 3).unwrap();
        assert!(dephased_state(&probe, &m, 1.0, 0.0).is_err());
    }

    #[test]
    fn spectral_transforms() {
        let lor = SpectralSamples::lorentzian(1.0, 5.0).unwrap();
        assert!((lor.coherence(1.0) - C64::new((-1.0f64).exp(), 0.0)).norm() < 1e-4);
        assert!((lor.coherence(0.0).re - 1.0).abs() < 1e-12);
        let gau = SpectralSamples::gaussian(1.0).unwrap();
        assert!((gau.coherence(1.0) - C64::new((-0.5f64).exp(), 0.0)).norm() < 1e-4);
        assert!((gau.coherence(0.0).re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn spectral_validation() {
        assert!(SpectralSamples::new(vec![0.0, 1.0], vec![0.3, 0.3]).is_err());
        assert!(SpectralSamples::new(vec![0.0, 1.0, 3.0], vec![0.5, 0.5, 0.5]).is_err());
        assert!(SpectralSamples::new(vec![0.0, 1.0], vec![-1.0, 3.0]).is_err());
        let s = SpectralSamples::new(vec![-1.0, 0.0, 1.0], vec![0.0, 1.0, 0.0]).unwrap();
        assert_eq!(s.len(), 3);
    }

    #[test]
    fn spectral_csv_round_trip() {
        let text = "w,F\n-1,0\n0,1\n1,0\n";
        let s = SpectralSamples::from_csv_reader(text.as_bytes()).unwrap();
        assert!((s.coherence(0.0).re - 1.0).abs() < 1e-15);
        assert!(SpectralSamples::from_csv_reader("w,F\n1,2,3\n".as_bytes()).is_err());
        assert!(SpectralSamples::from_csv_reader("w,F\n1,x\n2,1\n".as_bytes()).is_err());
    }
}
