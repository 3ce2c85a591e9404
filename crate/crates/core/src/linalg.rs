//! Dense complex linear algebra on qubit registers.
//!
//! Matrices are square and stored row-major. Registers are ordered with the
//! first site as the most significant bit of the basis index, and in a
//! bipartite register the system occupies the high bits: the amplitude of
//! `|s⟩⊗|e⟩` lives at index `s * dim_env + e`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};
use std::str::FromStr;

use faer::{MatRef, Side};
pub use num_complex::Complex64 as C64;

use crate::error::{input, Result};

/// Largest register supported by the dense routines (16384 amplitudes).
pub const MAX_QUBITS: usize = 14;

const NORM_TOL: f64 = 1e-12;
const HERMITIAN_TOL: f64 = 1e-10;

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    /// Builds a matrix from row-major entries; `data.len()` must be `dim²`.
    pub fn from_row_major(dim: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(input(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                data.len()
            )));
        }
        Ok(Self { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub(crate) fn as_faer(&self) -> MatRef<'_, C64> {
        MatRef::from_row_major_slice(&self.data, self.dim, self.dim)
    }

    fn from_faer(m: MatRef<'_, C64>) -> Self {
        Self::from_fn(m.nrows(), |i, j| m[(i, j)])
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    /// Largest elementwise deviation `|a_ij - conj(a_ji)|`.
    pub fn hermiticity_error(&self) -> f64 {
        let mut err = 0.0_f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                err = err.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        err
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() <= tol
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Largest elementwise deviation from `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let prod = self.as_faer() * other.as_faer();
        Self::from_faer(prod.as_ref())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// `self·v` for a raw amplitude slice.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.dim, v.len(), "dimension mismatch");
        self.data
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `(self + selfᴴ)/2`, used to remove round-off asymmetry.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl Mul<f64> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: f64) -> ComplexMatrix {
        self.scale(C64::new(rhs, 0.0))
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        if self.dim <= 8 {
            for row in self.data.chunks_exact(self.dim) {
                let cells: Vec<String> = row
                    .iter()
                    .map(|z| format!("{:+.4}{:+.4}i", z.re, z.im))
                    .collect();
                writeln!(f, "  [{}]", cells.join(", "))?;
            }
        }
        Ok(())
    }
}

/// A unit-norm pure state.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amps: Vec<C64>,
}

impl StateVector {
    /// Wraps amplitudes that are already normalized to within 1e-12.
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if amps.is_empty() || (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(input(format!(
                "state vector is not normalized (squared norm {norm_sqr})"
            )));
        }
        Ok(Self { amps })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amps: Vec<C64>) -> Result<Self> {
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(input("cannot normalize a zero or non-finite vector"));
        }
        Ok(Self {
            amps: amps.into_iter().map(|a| a / norm).collect(),
        })
    }

    /// Trusted constructor for amplitudes normalized by construction.
    pub(crate) fn from_normalized(amps: Vec<C64>) -> Self {
        debug_assert!((amps.iter().map(|a| a.norm_sqr()).sum::<f64>() - 1.0).abs() < 1e-10);
        Self { amps }
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index out of range");
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[index] = C64::new(1.0, 0.0);
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> C64 {
        inner(&self.amps, &other.amps)
    }

    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.dim(), |i, j| self.amps[i] * self.amps[j].conj())
    }
}

pub(crate) fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Kronecker product.
pub trait Tensor {
    fn tensor(&self, other: &Self) -> Self;
}

impl Tensor for ComplexMatrix {
    fn tensor(&self, other: &Self) -> Self {
        let (da, db) = (self.dim, other.dim);
        Self::from_fn(da * db, |i, j| {
            self[(i / db, j / db)] * other[(i % db, j % db)]
        })
    }
}

impl Tensor for StateVector {
    fn tensor(&self, other: &Self) -> Self {
        let amps = self
            .amps
            .iter()
            .flat_map(|a| other.amps.iter().map(move |b| a * b))
            .collect();
        Self { amps }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> ComplexMatrix {
        let (o, l, i) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 1.0));
        let data = match self {
            Pauli::I => vec![l, o, o, l],
            Pauli::X => vec![o, l, l, o],
            Pauli::Y => vec![o, -i, i, o],
            Pauli::Z => vec![l, o, o, -l],
        };
        ComplexMatrix { dim: 2, data }
    }
}

impl TryFrom<char> for Pauli {
    type Error = crate::Error;
    fn try_from(c: char) -> Result<Self> {
        match c.to_ascii_uppercase() {
            'I' => Ok(Pauli::I),
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            other => Err(input(format!("unknown Pauli label '{other}'"))),
        }
    }
}

/// A sequence of single-site Pauli labels, e.g. `"ZIX"`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PauliString(pub Vec<Pauli>);

impl FromStr for PauliString {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        s.chars().map(Pauli::try_from).collect::<Result<_>>().map(PauliString)
    }
}

/// Dense matrix of `labels[0] ⊗ labels[1] ⊗ …`.
pub fn build_pauli_string(labels: &[Pauli]) -> Result<ComplexMatrix> {
    if labels.is_empty() {
        return Err(input("Pauli string needs at least one site"));
    }
    if labels.len() > MAX_QUBITS {
        return Err(input(format!(
            "{} sites exceed the {MAX_QUBITS}-qubit register cap",
            labels.len()
        )));
    }
    // Each row of a Pauli string has exactly one nonzero entry.
    let n = labels.len();
    let dim = 1usize << n;
    let mut m = ComplexMatrix::zeros(dim);
    for row in 0..dim {
        let mut col = 0usize;
        let mut val = C64::new(1.0, 0.0);
        for (k, p) in labels.iter().enumerate() {
            let bit = (row >> (n - 1 - k)) & 1;
            let (cbit, v) = match p {
                Pauli::I => (bit, C64::new(1.0, 0.0)),
                Pauli::X => (bit ^ 1, C64::new(1.0, 0.0)),
                // Y|0⟩ = i|1⟩, Y|1⟩ = -i|0⟩, so ⟨row|Y|col⟩ with row = 1 - col.
                Pauli::Y => (bit ^ 1, if bit == 0 { C64::new(0.0, -1.0) } else { C64::new(0.0, 1.0) }),
                Pauli::Z => (bit, if bit == 0 { C64::new(1.0, 0.0) } else { C64::new(-1.0, 0.0) }),
            };
            col = (col << 1) | cbit;
            val *= v;
        }
        m[(row, col)] = val;
    }
    Ok(m)
}

/// `Σ_k P` on `n_sites` qubits, with `P` on site `k` and identity elsewhere.
pub fn collective_pauli(n_sites: usize, p: Pauli) -> Result<ComplexMatrix> {
    let mut acc = ComplexMatrix::zeros(1 << n_sites);
    for k in 0..n_sites {
        let mut labels = vec![Pauli::I; n_sites];
        labels[k] = p;
        acc = &acc + &build_pauli_string(&labels)?;
    }
    Ok(acc)
}

/// Eigendecomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct Spectrum {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector of `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl Spectrum {
    /// `U·diag(λ)·Uᴴ`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let u = &self.eigenvectors;
        let scaled = ComplexMatrix::from_fn(u.dim(), |i, j| u[(i, j)] * self.eigenvalues[j]);
        scaled.matmul(&u.adjoint())
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }
}

fn hermitian_tol(m: &ComplexMatrix) -> f64 {
    HERMITIAN_TOL * m.max_abs().max(1.0)
}

pub fn eigh(h: &ComplexMatrix) -> Result<Spectrum> {
    let err = h.hermiticity_error();
    if err > hermitian_tol(h) {
        return Err(input(format!("matrix is not Hermitian (deviation {err:e})")));
    }
    if h.dim() == 0 {
        return Ok(Spectrum {
            eigenvalues: vec![],
            eigenvectors: ComplexMatrix::zeros(0),
        });
    }
    let evd = h
        .as_faer()
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| input(format!("eigendecomposition failed: {e:?}")))?;
    let eigenvalues = evd.S().column_vector().iter().map(|z| z.re).collect();
    Ok(Spectrum {
        eigenvalues,
        eigenvectors: ComplexMatrix::from_faer(evd.U()),
    })
}

/// Operands that can be reduced to their system marginal.
pub trait Bipartite {
    fn dim(&self) -> usize;
    fn trace_out_env(&self, dim_s: usize, dim_e: usize) -> ComplexMatrix;
}

impl Bipartite for StateVector {
    fn dim(&self) -> usize {
        self.amps.len()
    }
    fn trace_out_env(&self, dim_s: usize, dim_e: usize) -> ComplexMatrix {
        let psi = &self.amps;
        let mut rho = ComplexMatrix::zeros(dim_s);
        for s in 0..dim_s {
            let row_s = &psi[s * dim_e..(s + 1) * dim_e];
            for sp in s..dim_s {
                let row_sp = &psi[sp * dim_e..(sp + 1) * dim_e];
                let v = inner(row_sp, row_s);
                rho[(s, sp)] = v;
                rho[(sp, s)] = v.conj();
            }
        }
        rho
    }
}

impl Bipartite for ComplexMatrix {
    fn dim(&self) -> usize {
        self.dim
    }
    fn trace_out_env(&self, dim_s: usize, dim_e: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(dim_s, |s, sp| {
            (0..dim_e).map(|e| self[(s * dim_e + e, sp * dim_e + e)]).sum()
        })
    }
}

/// `Tr_E` of a state or density matrix on `S⊗E`.
pub fn partial_trace_env<T: Bipartite>(x: &T, dim_s: usize, dim_e: usize) -> Result<ComplexMatrix> {
    if dim_s * dim_e != x.dim() {
        return Err(input(format!(
            "operand dimension {} is not {dim_s}·{dim_e}",
            x.dim()
        )));
    }
    Ok(x.trace_out_env(dim_s, dim_e))
}

/// `Tr_S |ψ⟩⟨ψ|` for a state on `S⊗E`.
pub fn partial_trace_system(state: &StateVector, dim_s: usize, dim_e: usize) -> Result<ComplexMatrix> {
    if dim_s * dim_e != state.dim() {
        return Err(input(format!(
            "state dimension {} is not {dim_s}·{dim_e}",
            state.dim()
        )));
    }
    Ok(weighted_env_marginal(state.amplitudes(), dim_s, dim_e, |_| 1.0))
}

/// `Σ_s w(s) ψ[s,e] conj(ψ[s,e'])`, the environment marginal with system
/// weights. With `w ≡ 1` this is `Tr_S|ψ⟩⟨ψ|`.
pub(crate) fn weighted_env_marginal(
    psi: &[C64],
    dim_s: usize,
    dim_e: usize,
    w: impl Fn(usize) -> f64,
) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(dim_e);
    for s in 0..dim_s {
        let ws = w(s);
        if ws == 0.0 {
            continue;
        }
        let row = &psi[s * dim_e..(s + 1) * dim_e];
        for e in 0..dim_e {
            let a = row[e] * ws;
            if a == C64::new(0.0, 0.0) {
                continue;
            }
            for ep in 0..dim_e {
                out[(e, ep)] += a * row[ep].conj();
            }
        }
    }
    out
}

/// Solves `h·ρ + ρ·h = rhs` for Hermitian `h` on the support of `ρ`.
///
/// In the eigenbasis of `ρ` the solution is `h_ij = rhs_ij/(λ_i+λ_j)`; pairs
/// with `λ_i+λ_j ≤ tol` are set to zero. `tol` defaults to `1e-10·λ_max`.
pub fn solve_anticommutator(
    rho: &ComplexMatrix,
    rhs: &ComplexMatrix,
    tol: Option<f64>,
) -> Result<ComplexMatrix> {
    if rho.dim() != rhs.dim() {
        return Err(input(format!(
            "rho is {0}x{0} but rhs is {1}x{1}",
            rho.dim(),
            rhs.dim()
        )));
    }
    let err = rhs.hermiticity_error();
    if err > hermitian_tol(rhs) {
        return Err(input(format!("rhs is not Hermitian (deviation {err:e})")));
    }
    let spec = eigh(rho)?;
    let tol = tol.unwrap_or(1e-10 * spec.max_eigenvalue().abs());
    let u = &spec.eigenvectors;
    let ud = u.adjoint();
    let mut rot = ud.matmul(rhs).matmul(u);
    let lam = &spec.eigenvalues;
    for i in 0..rot.dim() {
        for j in 0..rot.dim() {
            let denom = lam[i] + lam[j];
            rot[(i, j)] = if denom > tol {
                rot[(i, j)] / denom
            } else {
                C64::new(0.0, 0.0)
            };
        }
    }
    Ok(u.matmul(&rot).matmul(&ud).hermitian_part())
}
