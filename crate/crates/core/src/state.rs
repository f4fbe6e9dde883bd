//! Density operators, bipartite states, reductions and entropies.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{QError, Result};
use crate::linalg::{
    self, entropy_bits, hermitian_deviation, hermitian_eigenvalues, r, CMatrix, C64,
};

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
/// Eigenvalues at or above `-POSITIVITY_TOL` are accepted (and clamped to 0 for entropies).
pub const POSITIVITY_TOL: f64 = 1e-10;
pub const DEFAULT_DIMENSION_CAP: usize = 64;
pub const MAX_SUBSYSTEM_DIM: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Subsystem {
    A,
    B,
}

impl Subsystem {
    pub fn other(self) -> Self {
        match self {
            Subsystem::A => Subsystem::B,
            Subsystem::B => Subsystem::A,
        }
    }
}

impl FromStr for Subsystem {
    type Err = QError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Subsystem::A),
            "B" | "b" => Ok(Subsystem::B),
            other => Err(QError::InvalidSubsystem(other.to_string())),
        }
    }
}

impl fmt::Display for Subsystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subsystem::A => f.write_str("A"),
            Subsystem::B => f.write_str("B"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Violation {
    NotSquare { rows: usize, cols: usize },
    NotHermitian { deviation: f64 },
    Trace { deviation: f64 },
    NotPositive { deficit: f64 },
}

/// Outcome of checking a matrix against the density-operator invariants.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub dim: usize,
    pub hermitian_deviation: f64,
    pub trace_deviation: f64,
    pub min_eigenvalue: f64,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn positivity_deficit(&self) -> Option<f64> {
        self.violations.iter().find_map(|v| match v {
            Violation::NotPositive { deficit } => Some(*deficit),
            _ => None,
        })
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .violations
            .iter()
            .map(|v| match v {
                Violation::NotSquare { rows, cols } => format!("not square ({rows}x{cols})"),
                Violation::NotHermitian { deviation } => {
                    format!("not Hermitian (deviation {deviation:e})")
                }
                Violation::Trace { deviation } => format!("trace off by {deviation:e}"),
                Violation::NotPositive { deficit } => {
                    format!("not positive semidefinite (deficit {deficit:e})")
                }
            })
            .collect();
        if parts.is_empty() {
            f.write_str("valid")
        } else {
            f.write_str(&parts.join("; "))
        }
    }
}

/// Check a square matrix against the density-operator invariants.
pub fn validate(m: &CMatrix) -> std::result::Result<DensityMatrix, ValidationReport> {
    let report = inspect(m);
    if report.is_valid() {
        Ok(DensityMatrix::from_hermitian(m))
    } else {
        Err(report)
    }
}

/// Full diagnostics without the pass/fail split.
pub fn inspect(m: &CMatrix) -> ValidationReport {
    if !m.is_square() {
        return ValidationReport {
            dim: m.nrows(),
            hermitian_deviation: f64::NAN,
            trace_deviation: f64::NAN,
            min_eigenvalue: f64::NAN,
            violations: vec![Violation::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            }],
        };
    }
    let mut violations = Vec::new();
    let herm = hermitian_deviation(m);
    if herm > HERMITIAN_TOL {
        violations.push(Violation::NotHermitian { deviation: herm });
    }
    let tr = m.trace();
    let trace_dev = (tr - r(1.0)).norm();
    if trace_dev > TRACE_TOL {
        violations.push(Violation::Trace {
            deviation: trace_dev,
        });
    }
    let min_eig = hermitian_eigenvalues(m).last().copied().unwrap_or(0.0);
    if min_eig < -POSITIVITY_TOL {
        violations.push(Violation::NotPositive { deficit: -min_eig });
    }
    ValidationReport {
        dim: m.nrows(),
        hermitian_deviation: herm,
        trace_deviation: trace_dev,
        min_eigenvalue: min_eig,
        violations,
    }
}

/// Positive semidefinite, unit-trace Hermitian operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    data: CMatrix,
}

impl DensityMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        validate(&m).map_err(QError::InvalidState)
    }

    /// Symmetrizes `m` without checking the other invariants. Callers produce
    /// `m` from operations that preserve them.
    pub(crate) fn from_hermitian(m: &CMatrix) -> Self {
        DensityMatrix {
            data: (m + m.adjoint()).scale(0.5),
        }
    }

    /// Normalizes a positive operator to unit trace.
    pub(crate) fn from_unnormalized(m: &CMatrix) -> Self {
        let tr = m.trace().re;
        Self::from_hermitian(&m.unscale(tr))
    }

    pub fn pure(v: &crate::CVector) -> Result<Self> {
        let n = v.norm();
        if n == 0.0 {
            return Err(QError::InvalidParameter("zero state vector".into()));
        }
        let u = v.unscale(n);
        Ok(Self::from_hermitian(&linalg::projector(&u)))
    }

    pub fn maximally_mixed(d: usize) -> Self {
        DensityMatrix {
            data: linalg::identity(d).unscale(d as f64),
        }
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.data
    }

    pub fn into_matrix(self) -> CMatrix {
        self.data
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.data[(i, j)]
    }

    /// Eigenvalues, descending, with `[-1e-10, 0)` clamped to zero.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.data)
            .into_iter()
            .map(|l| {
                if (-POSITIVITY_TOL..0.0).contains(&l) {
                    0.0
                } else {
                    l
                }
            })
            .collect()
    }

    pub fn purity(&self) -> f64 {
        (&self.data * &self.data).trace().re
    }
}

/// Density matrix with an `(d_A, d_B)` factorization; A is the left tensor factor.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    state: DensityMatrix,
    dim_a: usize,
    dim_b: usize,
}

impl BipartiteState {
    pub fn new(state: DensityMatrix, dim_a: usize, dim_b: usize) -> Result<Self> {
        if dim_a == 0 || dim_b == 0 || dim_a * dim_b != state.dim() {
            return Err(QError::DimensionMismatch {
                expected: state.dim(),
                got: dim_a * dim_b,
            });
        }
        Ok(BipartiteState {
            state,
            dim_a,
            dim_b,
        })
    }

    pub fn from_matrix(m: CMatrix, dim_a: usize, dim_b: usize) -> Result<Self> {
        Self::new(DensityMatrix::new(m)?, dim_a, dim_b)
    }

    pub(crate) fn from_parts_unchecked(m: &CMatrix, dim_a: usize, dim_b: usize) -> Self {
        BipartiteState {
            state: DensityMatrix::from_hermitian(m),
            dim_a,
            dim_b,
        }
    }

    pub fn two_qubit(m: CMatrix) -> Result<Self> {
        Self::from_matrix(m, 2, 2)
    }

    pub fn state(&self) -> &DensityMatrix {
        &self.state
    }

    pub fn matrix(&self) -> &CMatrix {
        self.state.matrix()
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn dim_of(&self, side: Subsystem) -> usize {
        match side {
            Subsystem::A => self.dim_a,
            Subsystem::B => self.dim_b,
        }
    }

    pub fn reduced(&self, keep: Subsystem) -> DensityMatrix {
        partial_trace(self, keep)
    }

    /// The same state with the tensor factors exchanged (B becomes the left factor).
    pub fn swapped(&self) -> BipartiteState {
        BipartiteState {
            state: DensityMatrix {
                data: swap_factors(self.matrix(), self.dim_a, self.dim_b),
            },
            dim_a: self.dim_b,
            dim_b: self.dim_a,
        }
    }

    /// `(U_A ⊗ U_B) ρ (U_A ⊗ U_B)†`
    pub fn apply_local(&self, ua: &CMatrix, ub: &CMatrix) -> BipartiteState {
        self.apply(&linalg::kron(ua, ub))
    }

    pub fn apply(&self, u: &CMatrix) -> BipartiteState {
        Self::from_parts_unchecked(&linalg::conjugate(u, self.matrix()), self.dim_a, self.dim_b)
    }
}

/// Reorders `A ⊗ B` entries into `B ⊗ A`.
pub fn swap_factors(m: &CMatrix, da: usize, db: usize) -> CMatrix {
    let n = da * db;
    CMatrix::from_fn(n, n, |row, col| {
        let (j, i) = (row / da, row % da);
        let (l, k) = (col / da, col % da);
        m[(i * db + j, k * db + l)]
    })
}

/// `tr_B` of an operator on `A ⊗ B`.
pub fn trace_out_b(m: &CMatrix, da: usize, db: usize) -> CMatrix {
    CMatrix::from_fn(da, da, |i, k| {
        (0..db).map(|j| m[(i * db + j, k * db + j)]).sum()
    })
}

/// `tr_A` of an operator on `A ⊗ B`.
pub fn trace_out_a(m: &CMatrix, da: usize, db: usize) -> CMatrix {
    CMatrix::from_fn(db, db, |j, l| {
        (0..da).map(|i| m[(i * db + j, i * db + l)]).sum()
    })
}

pub fn partial_trace(s: &BipartiteState, keep: Subsystem) -> DensityMatrix {
    let m = match keep {
        Subsystem::A => trace_out_b(s.matrix(), s.dim_a, s.dim_b),
        Subsystem::B => trace_out_a(s.matrix(), s.dim_a, s.dim_b),
    };
    DensityMatrix::from_hermitian(&m)
}

pub fn tensor_product(a: &DensityMatrix, b: &DensityMatrix) -> Result<BipartiteState> {
    tensor_product_with_cap(a, b, DEFAULT_DIMENSION_CAP)
}

pub fn tensor_product_with_cap(
    a: &DensityMatrix,
    b: &DensityMatrix,
    cap: usize,
) -> Result<BipartiteState> {
    let dim = a.dim() * b.dim();
    if dim > cap {
        return Err(QError::DimensionOverflow { dim, cap });
    }
    Ok(BipartiteState::from_parts_unchecked(
        &linalg::kron(a.matrix(), b.matrix()),
        a.dim(),
        b.dim(),
    ))
}

/// von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    entropy_bits(&rho.eigenvalues())
}

/// Shannon entropy in bits. Entries down to `-1e-12` are clamped to zero and
/// the vector renormalized when its sum is within `1e-9` of one.
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    if let Some(&bad) = p.iter().find(|&&x| x < -1e-12 || !x.is_finite()) {
        return Err(QError::InvalidProbabilities(format!(
            "entry {bad} is negative"
        )));
    }
    let clamped: Vec<f64> = p.iter().map(|&x| x.max(0.0)).collect();
    let total: f64 = clamped.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(QError::InvalidProbabilities(format!(
            "entries sum to {total}"
        )));
    }
    let normalized: Vec<f64> = clamped.iter().map(|x| x / total).collect();
    Ok(entropy_bits(&normalized))
}

/// `I(ρ_AB) = S(ρ_A) + S(ρ_B) − S(ρ_AB)`
pub fn mutual_information(s: &BipartiteState) -> f64 {
    von_neumann_entropy(&s.reduced(Subsystem::A)) + von_neumann_entropy(&s.reduced(Subsystem::B))
        - von_neumann_entropy(s.state())
}
