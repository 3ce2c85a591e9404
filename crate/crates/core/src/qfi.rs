//! Quantum Fisher information of the phase, computed three ways: the exact
//! mixed-state value from the eigendecomposition of the reduced state, the
//! variance bound on a purification minimized over an environment ansatz, and
//! the exact minimizer of that bound from the anticommutator equation.

use faer::{Mat, Side};

use crate::error::{input, Result};
use crate::linalg::{
    build_pauli_string, collective_pauli, eigh, inner, solve_anticommutator, weighted_env_marginal,
    ComplexMatrix, Pauli, StateVector, C64,
};
use crate::purification::PurifiedState;

/// Support cutoff for `λ_i + λ_j` in [`qfi_sld`].
pub const SLD_SUPPORT_TOL: f64 = 1e-12;

/// `4[⟨dψ|dψ⟩ - |⟨dψ|ψ⟩|²]` for a pure state and its derivative.
pub fn qfi_pure(state: &StateVector, dstate: &[C64]) -> Result<f64> {
    if (state.norm_sqr() - 1.0).abs() > 1e-10 {
        return Err(input(format!("state is not normalized (squared norm {})", state.norm_sqr())));
    }
    if dstate.len() != state.dim() {
        return Err(input("derivative has the wrong dimension"));
    }
    let dd = inner(dstate, dstate).re;
    let dp = inner(dstate, state.amplitudes()).norm_sqr();
    Ok((4.0 * (dd - dp)).max(0.0))
}

/// Exact QFI `2·Σ |⟨i|dρ|j⟩|²/(λ_i+λ_j)` over pairs with `λ_i+λ_j > tol`.
pub fn qfi_sld(rho: &ComplexMatrix, drho: &ComplexMatrix, tol: f64) -> Result<f64> {
    if rho.dim() != drho.dim() {
        return Err(input("rho and drho dimensions differ"));
    }
    if !drho.is_hermitian(1e-10 * drho.max_abs().max(1.0)) {
        return Err(input("drho is not Hermitian"));
    }
    let spec = eigh(rho)?;
    let u = &spec.eigenvectors;
    let d = u.adjoint().matmul(drho).matmul(u);
    let lam = &spec.eigenvalues;
    let mut f = 0.0;
    for i in 0..lam.len() {
        for j in 0..lam.len() {
            let s = lam[i] + lam[j];
            if s > tol {
                f += d[(i, j)].norm_sqr() / s;
            }
        }
    }
    Ok(2.0 * f)
}

/// `dρ/dφ = -i[H, ρ]` for a generator diagonal in the computational basis.
pub fn phase_derivative(rho: &ComplexMatrix, generator_diag: &[f64]) -> ComplexMatrix {
    assert_eq!(rho.dim(), generator_diag.len(), "generator dimension mismatch");
    ComplexMatrix::from_fn(rho.dim(), |x, y| {
        rho[(x, y)] * C64::new(0.0, -(generator_diag[x] - generator_diag[y]))
    })
}

/// Exact QFI of the purification's reduced system state.
pub fn system_qfi(purified: &PurifiedState) -> Result<f64> {
    let rho = purified.reduced_state();
    let drho = phase_derivative(&rho, &purified.system_generator());
    qfi_sld(&rho, &drho, SLD_SUPPORT_TOL)
}

/// `(I_S ⊗ h)|v⟩` for `v` on the full register.
pub(crate) fn apply_env(h: &ComplexMatrix, v: &[C64]) -> Vec<C64> {
    let de = h.dim();
    v.chunks_exact(de).flat_map(|row| h.apply(row)).collect()
}

fn check_env_operator(purified: &PurifiedState, h: &ComplexMatrix) -> Result<()> {
    if h.dim() != purified.dim_env() {
        return Err(input(format!(
            "environment operator is {0}x{0} but the environment has dimension {1}",
            h.dim(),
            purified.dim_env()
        )));
    }
    Ok(())
}

/// `4·Var(H - I_S⊗h)` on the purified state.
pub fn variational_cq(purified: &PurifiedState, h_env: &ComplexMatrix) -> Result<f64> {
    check_env_operator(purified, h_env)?;
    if !h_env.is_hermitian(1e-10 * h_env.max_abs().max(1.0)) {
        return Err(input("environment operator is not Hermitian"));
    }
    let psi = purified.amplitudes();
    let hv = purified.apply_generator(psi);
    let ev = apply_env(h_env, psi);
    let mv: Vec<C64> = hv.iter().zip(&ev).map(|(a, b)| a - b).collect();
    Ok(four_variance(psi, &mv))
}

/// `4(⟨M²⟩ - ⟨M⟩²)` given `ψ` and `M|ψ⟩` for Hermitian `M`.
fn four_variance(psi: &[C64], m_psi: &[C64]) -> f64 {
    let mean = inner(psi, m_psi).re;
    let second = inner(m_psi, m_psi).re;
    (4.0 * (second - mean * mean)).max(0.0)
}

/// Hermitian generators of the environment correction `h_E = Σ c_k B_k`.
#[derive(Clone, Debug)]
pub struct AnsatzBasis {
    dim_env: usize,
    elements: Vec<ComplexMatrix>,
    labels: Vec<String>,
}

impl AnsatzBasis {
    pub fn empty(n_env: usize) -> Self {
        Self {
            dim_env: 1 << n_env,
            elements: vec![],
            labels: vec![],
        }
    }

    pub fn new(n_env: usize, elements: Vec<ComplexMatrix>, labels: Vec<String>) -> Result<Self> {
        let dim_env = 1usize << n_env;
        if labels.len() != elements.len() {
            return Err(input("one label per basis element is required"));
        }
        for (b, l) in elements.iter().zip(&labels) {
            if b.dim() != dim_env {
                return Err(input(format!("basis element {l} does not act on {n_env} environment qubits")));
            }
            if !b.is_hermitian(1e-12) {
                return Err(input(format!("basis element {l} is not Hermitian")));
            }
        }
        Ok(Self {
            dim_env,
            elements,
            labels,
        })
    }

    /// `{ΣX_i, ΣY_i, ΣZ_i}` on the environment; with one environment qubit this is `{X, Y, Z}`.
    pub fn collective(n_env: usize) -> Result<Self> {
        let elements = [Pauli::X, Pauli::Y, Pauli::Z]
            .into_iter()
            .map(|p| collective_pauli(n_env, p))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n_env, elements, vec!["sum_X".into(), "sum_Y".into(), "sum_Z".into()])
    }

    /// The nine exchange-symmetric generators on two environment qubits:
    /// the collective Paulis, `XX, YY, ZZ`, and the symmetrized `XY, XZ, YZ`.
    pub fn two_qubit_symmetric() -> Result<Self> {
        use Pauli::*;
        let p = |a: Pauli, b: Pauli| build_pauli_string(&[a, b]);
        let sym = |a: Pauli, b: Pauli| -> Result<ComplexMatrix> { Ok(&p(a, b)? + &p(b, a)?) };
        let mut elements = Vec::with_capacity(9);
        for q in [X, Y, Z] {
            elements.push(collective_pauli(2, q)?);
        }
        for q in [X, Y, Z] {
            elements.push(p(q, q)?);
        }
        elements.push(sym(X, Y)?);
        elements.push(sym(X, Z)?);
        elements.push(sym(Y, Z)?);
        let labels = ["alpha", "beta", "delta", "lambda1", "lambda2", "lambda3", "r1", "r2", "r3"];
        Self::new(2, elements, labels.iter().map(|s| s.to_string()).collect())
    }

    /// Every non-identity Pauli string on the environment.
    pub fn complete(n_env: usize) -> Result<Self> {
        let paulis = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
        let mut elements = Vec::new();
        let mut labels = Vec::new();
        for code in 1..(1usize << (2 * n_env)) {
            let ls: Vec<Pauli> = (0..n_env).map(|k| paulis[(code >> (2 * k)) & 3]).collect();
            labels.push(ls.iter().map(|p| format!("{p:?}")).collect());
            elements.push(build_pauli_string(&ls)?);
        }
        Self::new(n_env, elements, labels)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `Σ c_k B_k`.
    pub fn combine(&self, coefficients: &[f64]) -> ComplexMatrix {
        self.elements
            .iter()
            .zip(coefficients)
            .fold(ComplexMatrix::zeros(self.dim_env), |acc, (b, c)| &acc + &(b * *c))
    }
}

#[derive(Clone, Debug)]
pub struct AnsatzFit {
    pub value: f64,
    pub coefficients: Vec<f64>,
}

/// Minimizes `4·Var(H - Σ c_k B_k)` over real `c` via the normal equations
/// `G·c = v` with the symmetrized covariances of the basis and the generator.
pub fn minimize_ansatz(purified: &PurifiedState, basis: &AnsatzBasis) -> Result<AnsatzFit> {
    if basis.dim_env != purified.dim_env() {
        return Err(input(format!(
            "ansatz acts on dimension {} but the environment has dimension {}",
            basis.dim_env,
            purified.dim_env()
        )));
    }
    let psi = purified.amplitudes();
    let hv = purified.apply_generator(psi);
    if basis.is_empty() {
        return Ok(AnsatzFit {
            value: four_variance(psi, &hv),
            coefficients: vec![],
        });
    }
    let bv: Vec<Vec<C64>> = basis.elements.iter().map(|b| apply_env(b, psi)).collect();
    let mean_h = inner(psi, &hv).re;
    let mean_b: Vec<f64> = bv.iter().map(|w| inner(psi, w).re).collect();
    let k = basis.len();
    let gram = Mat::<f64>::from_fn(k, k, |i, j| inner(&bv[i], &bv[j]).re - mean_b[i] * mean_b[j]);
    let rhs: Vec<f64> = (0..k).map(|i| inner(&hv, &bv[i]).re - mean_h * mean_b[i]).collect();
    let coefficients = min_norm_solve(&gram, &rhs)?;

    let h = basis.combine(&coefficients);
    let value = variational_cq(purified, &h)?;
    Ok(AnsatzFit { value, coefficients })
}

/// Minimum-norm solution of a symmetric positive semidefinite system.
fn min_norm_solve(gram: &Mat<f64>, rhs: &[f64]) -> Result<Vec<f64>> {
    let evd = gram
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| input(format!("normal equations could not be diagonalized: {e:?}")))?;
    let (u, s) = (evd.U(), evd.S().column_vector());
    let k = rhs.len();
    let lam_max = s.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    let cutoff = 1e-12 * lam_max.max(f64::MIN_POSITIVE);
    let mut c = vec![0.0; k];
    for j in 0..k {
        if s[j] <= cutoff {
            continue;
        }
        let proj: f64 = (0..k).map(|i| u[(i, j)] * rhs[i]).sum::<f64>() / s[j];
        for (i, ci) in c.iter_mut().enumerate() {
            *ci += u[(i, j)] * proj;
        }
    }
    Ok(c)
}

#[derive(Clone, Debug)]
pub struct OptimalCorrection {
    pub value: f64,
    pub h: ComplexMatrix,
}

/// Exact minimizer of the purification bound: solves
/// `h·ρ_E + ρ_E·h = i·Tr_S[d|Φ⟩⟨Φ|/dφ - h.c.]`, which for `d|Φ⟩/dφ = -iH|Φ⟩`
/// reduces to `Tr_S{H, |Φ⟩⟨Φ|}`.
pub fn optimal_h(purified: &PurifiedState) -> Result<OptimalCorrection> {
    let (ds, de) = (purified.dim_system(), purified.dim_env());
    let g = purified.system_generator();
    let psi = purified.amplitudes();
    let rho_e = weighted_env_marginal(psi, ds, de, |_| 1.0).hermitian_part();
    let rhs = &weighted_env_marginal(psi, ds, de, |s| g[s]).hermitian_part() * 2.0;
    let h = solve_anticommutator(&rho_e, &rhs, None)?;
    let value = variational_cq(purified, &h)?;
    Ok(OptimalCorrection { value, h })
}
