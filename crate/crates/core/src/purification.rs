//! Purifications of the dephased probe on system⊗environment registers.
//!
//! Every family imprints the phase as `e^{-iφtZ_i/2}` on the system, so the
//! phase generator is `(t/2)·ΣZ_i ⊗ I_E`, diagonal in the computational basis.

use crate::dephasing::{ghz_vector, sector, z_eigenvalue, Correlation, DephasingModel, ProbeState};
use crate::error::{input, unsupported, Result};
use crate::linalg::{partial_trace_env, weighted_env_marginal, ComplexMatrix, StateVector, C64, MAX_QUBITS};

#[derive(Clone, Debug)]
pub struct PurifiedState {
    state: StateVector,
    n_system: usize,
    n_env: usize,
    t: f64,
}

impl PurifiedState {
    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn amplitudes(&self) -> &[C64] {
        self.state.amplitudes()
    }

    pub fn n_system(&self) -> usize {
        self.n_system
    }

    pub fn n_env(&self) -> usize {
        self.n_env
    }

    pub fn dim_system(&self) -> usize {
        1 << self.n_system
    }

    pub fn dim_env(&self) -> usize {
        1 << self.n_env
    }

    pub fn interrogation_time(&self) -> f64 {
        self.t
    }

    /// Diagonal of the generator restricted to the system register.
    pub fn system_generator(&self) -> Vec<f64> {
        system_generator_diagonal(self.n_system, self.t)
    }

    /// Dense generator on the full register.
    pub fn generator(&self) -> ComplexMatrix {
        phase_generator(self.n_system, self.n_env, self.t)
    }

    /// `H|v⟩` for a vector on the full register.
    pub fn apply_generator(&self, v: &[C64]) -> Vec<C64> {
        let g = self.system_generator();
        let de = self.dim_env();
        v.iter().enumerate().map(|(k, a)| a * g[k / de]).collect()
    }

    /// `ρ_S = Tr_E|Φ⟩⟨Φ|`.
    pub fn reduced_state(&self) -> ComplexMatrix {
        partial_trace_env(&self.state, self.dim_system(), self.dim_env())
            .expect("register dimensions are consistent by construction")
    }

    /// `ρ_E = Tr_S|Φ⟩⟨Φ|`.
    pub fn env_state(&self) -> ComplexMatrix {
        weighted_env_marginal(self.amplitudes(), self.dim_system(), self.dim_env(), |_| 1.0)
    }
}

/// `(t/2)·m_x` for each system basis string `x`.
pub fn system_generator_diagonal(n_system: usize, t: f64) -> Vec<f64> {
    (0..1usize << n_system)
        .map(|x| 0.5 * t * sector(n_system, x) as f64)
        .collect()
}

/// `(t/2)·ΣZ_i` on the system sites, extended by the identity on `n_env` environment qubits.
pub fn phase_generator(n_system: usize, n_env: usize, t: f64) -> ComplexMatrix {
    let g = system_generator_diagonal(n_system, t);
    let de = 1usize << n_env;
    let diag: Vec<f64> = (0..g.len() * de).map(|k| g[k / de]).collect();
    ComplexMatrix::from_diagonal(&diag)
}

/// `arccos(√P)` with `P = (1 + e^{-γt^ν})/2`; equivalently `cos(2·angle) = e^{-γt^ν}`.
pub fn rotation_angle(model: &DephasingModel, t: f64) -> Result<f64> {
    let p = 0.5 * (1.0 + (-model.local_exponent(t)?).exp());
    Ok(p.sqrt().min(1.0).acos())
}

/// `|m|^{ν-1}·m`, the spectral value of `|Z|^{ν-1}Z` on sector `m`.
pub fn sector_coupling(m: i64, nu: f64) -> f64 {
    if m == 0 {
        0.0
    } else {
        (m.unsigned_abs() as f64).powf(nu - 1.0) * m as f64
    }
}

fn check_probe(probe: &ProbeState, model: &DephasingModel, t: f64) -> Result<()> {
    if probe.n() != model.n() {
        return Err(input(format!(
            "probe has {} qubits but the model has {} particles",
            probe.n(),
            model.n()
        )));
    }
    if !(t.is_finite() && t >= 0.0) {
        return Err(input(format!("time must be finite and non-negative, got {t}")));
    }
    Ok(())
}

fn check_register(n_system: usize, n_env: usize) -> Result<()> {
    if n_system + n_env > MAX_QUBITS {
        return Err(input(format!(
            "{n_system} system + {n_env} environment qubits exceed the {MAX_QUBITS}-qubit cap"
        )));
    }
    Ok(())
}

fn phase(n: usize, x: usize, phi: f64, t: f64) -> C64 {
    C64::from_polar(1.0, -0.5 * phi * t * sector(n, x) as f64)
}

/// One environment qubit per particle, each rotated by `e^{-i·angle·Z_iY_i^E}` from `|0⟩`.
pub fn purify_uncorrelated(
    probe: &ProbeState,
    model: &DephasingModel,
    t: f64,
    phi: f64,
) -> Result<PurifiedState> {
    check_probe(probe, model, t)?;
    if model.correlation() != Correlation::Uncorrelated {
        return Err(input(format!(
            "uncorrelated purification needs an uncorrelated model, got {}",
            model.correlation()
        )));
    }
    let n = model.n();
    check_register(n, n)?;
    let (s, c) = rotation_angle(model, t)?.sin_cos();
    let de = 1usize << n;
    let mut amps = vec![C64::new(0.0, 0.0); de << n];
    for (x, a) in probe.amplitudes().iter().enumerate() {
        if *a == C64::new(0.0, 0.0) {
            continue;
        }
        let base = a * phase(n, x, phi, t);
        // e^{-i·a·zY}|0⟩ = cos a|0⟩ + z·sin a|1⟩ on each environment site.
        for e in 0..de {
            let w: f64 = (0..n)
                .map(|i| {
                    let z = z_eigenvalue(n, x, i);
                    if (e >> (n - 1 - i)) & 1 == 0 {
                        c
                    } else {
                        z * s
                    }
                })
                .product();
            amps[x * de + e] = base * w;
        }
    }
    Ok(PurifiedState {
        state: StateVector::normalized(amps)?,
        n_system: n,
        n_env: n,
        t,
    })
}

/// A single shared environment qubit rotated by `e^{-i·angle·|Z|^{ν-1}Z·Y^E}`, `Z = ΣZ_i`.
pub fn purify_max_correlated(
    probe: &ProbeState,
    model: &DephasingModel,
    t: f64,
    phi: f64,
) -> Result<PurifiedState> {
    check_probe(probe, model, t)?;
    if model.correlation() != Correlation::MaxCorrelated {
        return Err(input(format!(
            "shared-environment purification needs a max-correlated model, got {}",
            model.correlation()
        )));
    }
    let n = model.n();
    check_register(n, 1)?;
    let angle = rotation_angle(model, t)?;
    let mut amps = vec![C64::new(0.0, 0.0); 2 << n];
    for (x, a) in probe.amplitudes().iter().enumerate() {
        let base = a * phase(n, x, phi, t);
        let theta = angle * sector_coupling(sector(n, x), model.nu());
        amps[2 * x] = base * theta.cos();
        amps[2 * x + 1] = base * theta.sin();
    }
    Ok(PurifiedState {
        state: StateVector::normalized(amps)?,
        n_system: n,
        n_env: 1,
        t,
    })
}

/// Initial environment `A·|GHZ⟩ + B·|+⟩^⊗n`.
#[derive(Clone, Debug)]
pub struct EnvInitState {
    pub a: f64,
    pub b: f64,
    pub n: usize,
    state: StateVector,
}

impl EnvInitState {
    /// Chooses `B ≥ 0` so the state is normalized, using the directly computed
    /// overlap `2⟨GHZ|+^⊗n⟩ = 2^{3/2-n/2}`.
    pub fn new(a: f64, n: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&a) {
            return Err(input(format!("amplitude A must lie in [0, 1], got {a}")));
        }
        if n == 0 || n > MAX_QUBITS {
            return Err(input(format!("environment size {n} outside 1..={MAX_QUBITS}")));
        }
        let c = Self::cross_term(n);
        // B² + cA·B + (A² - 1) = 0
        let disc = c * c * a * a - 4.0 * (a * a - 1.0);
        let b = (0.5 * (-c * a + disc.sqrt())).max(0.0);
        let dim = 1usize << n;
        let ghz = ghz_vector(n);
        let plus = b / (dim as f64).sqrt();
        let amps = ghz
            .amplitudes()
            .iter()
            .map(|g| g * a + plus)
            .collect();
        Ok(Self {
            a,
            b,
            n,
            state: StateVector::normalized(amps)?,
        })
    }

    /// Coefficient of `AB` in the squared norm: `2⟨GHZ|+^⊗n⟩`.
    pub fn cross_term(n: usize) -> f64 {
        2f64.powf(1.5 - 0.5 * n as f64)
    }

    /// The coefficient printed with the original normalization condition, `2^{1/2-n/2}`,
    /// kept for reporting next to [`Self::cross_term`].
    pub fn printed_cross_term(n: usize) -> f64 {
        2f64.powf(0.5 - 0.5 * n as f64)
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }
}

/// Per-particle `e^{-i·angle·Z_iZ_i^E}` couplings acting on a shared initial
/// environment `|Ψ⟩_E` with GHZ amplitude `amplitude`.
pub fn purify_partial(
    probe: &ProbeState,
    amplitude: f64,
    model: &DephasingModel,
    t: f64,
    phi: f64,
) -> Result<PurifiedState> {
    check_probe(probe, model, t)?;
    let n = model.n();
    if n != 2 {
        return Err(unsupported(format!(
            "partially correlated purification is implemented for n = 2 only (got n = {n})"
        )));
    }
    if model.nu() != 1.0 {
        return Err(unsupported(format!(
            "partially correlated purification is implemented for nu = 1 only (got nu = {})",
            model.nu()
        )));
    }
    let env = EnvInitState::new(amplitude, n)?;
    let angle = rotation_angle(model, t)?;
    let de = 1usize << n;
    let psi_e = env.state().amplitudes();
    let mut amps = vec![C64::new(0.0, 0.0); de << n];
    for (x, a) in probe.amplitudes().iter().enumerate() {
        let base = a * phase(n, x, phi, t);
        for (e, b) in psi_e.iter().enumerate() {
            // Σ_i z_i·z_i^E for system string x and environment string e.
            let zz: f64 = (0..n).map(|i| z_eigenvalue(n, x, i) * z_eigenvalue(n, e, i)).sum();
            amps[x * de + e] = base * b * C64::from_polar(1.0, -angle * zz);
        }
    }
    Ok(PurifiedState {
        state: StateVector::normalized(amps)?,
        n_system: n,
        n_env: n,
        t,
    })
}

/// Dispatches on the model's correlation structure.
pub fn purify(probe: &ProbeState, model: &DephasingModel, t: f64, phi: f64) -> Result<PurifiedState> {
    match model.correlation() {
        Correlation::Uncorrelated => purify_uncorrelated(probe, model, t, phi),
        Correlation::MaxCorrelated => purify_max_correlated(probe, model, t, phi),
        Correlation::Partial { amplitude } => purify_partial(probe, amplitude, model, t, phi),
        Correlation::Mixed { .. } => Err(unsupported(
            "no purification is defined for mixed correlation; only its coherence factor is available",
        )),
    }
}
