//! Dense complex matrix helpers and the Hermitian eigensolver.

use std::ops::Range;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{QError, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Absolute gap below which neighbouring eigenvalues are treated as degenerate.
pub const DEGENERACY_THRESHOLD: f64 = 1e-9;

/// Hermiticity tolerance accepted by [`eig_hermitian`].
pub const HERMITIAN_TOL: f64 = 1e-10;

pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn r(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn identity(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}

/// Build a matrix from real row-major entries.
pub fn real_matrix(rows: usize, cols: usize, entries: &[f64]) -> CMatrix {
    CMatrix::from_row_iterator(rows, cols, entries.iter().map(|&x| r(x)))
}

pub fn pauli_x() -> CMatrix {
    real_matrix(2, 2, &[0.0, 1.0, 1.0, 0.0])
}

pub fn pauli_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[r(0.0), -I, I, r(0.0)])
}

pub fn pauli_z() -> CMatrix {
    real_matrix(2, 2, &[1.0, 0.0, 0.0, -1.0])
}

pub fn hadamard() -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    real_matrix(2, 2, &[s, s, s, -s])
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn kron_vec(a: &CVector, b: &CVector) -> CVector {
    a.kronecker(b)
}

/// `|v⟩⟨v|`
pub fn projector(v: &CVector) -> CMatrix {
    v * v.adjoint()
}

pub fn ket(entries: &[C64]) -> CVector {
    CVector::from_column_slice(entries)
}

/// Computational basis vector `|k⟩` in dimension `d`.
pub fn basis_ket(d: usize, k: usize) -> CVector {
    let mut v = CVector::zeros(d);
    v[k] = r(1.0);
    v
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

/// `‖U†U − 𝟙‖_max`; infinite for non-square input.
pub fn unitary_deviation(u: &CMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    max_abs_diff(&(u.adjoint() * u), &identity(u.nrows()))
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn trace(m: &CMatrix) -> C64 {
    m.trace()
}

/// `U ρ U†`
pub fn conjugate(u: &CMatrix, rho: &CMatrix) -> CMatrix {
    u * rho * u.adjoint()
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// Columns are the eigenvectors, in the order of `eigenvalues`.
    pub eigenvectors: CMatrix,
    /// Contiguous index ranges of (numerically) equal eigenvalues.
    pub blocks: Vec<Range<usize>>,
}

impl Spectrum {
    pub fn is_degenerate(&self) -> bool {
        self.blocks.iter().any(|b| b.len() > 1)
    }

    pub fn eigenvector(&self, k: usize) -> CVector {
        self.eigenvectors.column(k).into_owned()
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }
}

pub fn eig_hermitian(m: &CMatrix) -> Result<Spectrum> {
    eig_hermitian_with_threshold(m, DEGENERACY_THRESHOLD)
}

pub fn eig_hermitian_with_threshold(m: &CMatrix, degeneracy: f64) -> Result<Spectrum> {
    if !m.is_square() {
        return Err(QError::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    let dev = hermitian_deviation(m);
    if dev > HERMITIAN_TOL {
        return Err(QError::NotHermitian(dev));
    }
    // symmetrize so the solver sees an exactly Hermitian input
    let h = (m + m.adjoint()).scale(0.5);
    let eig = h.symmetric_eigen();
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut eigenvectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
    }

    let mut blocks = Vec::new();
    let mut start = 0;
    for k in 1..=n {
        if k == n || (eigenvalues[k - 1] - eigenvalues[k]).abs() >= degeneracy {
            blocks.push(start..k);
            start = k;
        }
    }
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
        blocks,
    })
}

/// Eigenvalues only, descending. Closed form for 2×2, the general solver otherwise.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 2 {
        let a = m[(0, 0)].re;
        let d = m[(1, 1)].re;
        let off = (m[(0, 1)] + m[(1, 0)].conj()) * 0.5;
        let mean = 0.5 * (a + d);
        let rad = (0.25 * (a - d) * (a - d) + off.norm_sqr()).sqrt();
        return vec![mean + rad, mean - rad];
    }
    let h = (m + m.adjoint()).scale(0.5);
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

/// `−Σ λ log₂ λ` over the given (already clamped) eigenvalues.
pub fn entropy_bits(eigenvalues: &[f64]) -> f64 {
    eigenvalues
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.log2())
        .sum::<f64>()
        .max(0.0)
}

/// Entropy of a positive semidefinite Hermitian operator with tiny negative
/// eigenvalues clamped to zero. The operator need not have unit trace.
pub fn operator_entropy(m: &CMatrix) -> f64 {
    let ev: Vec<f64> = hermitian_eigenvalues(m)
        .into_iter()
        .map(|l| l.max(0.0))
        .collect();
    entropy_bits(&ev)
}

/// Gram–Schmidt completion of a set of orthonormal columns to a full unitary.
pub fn complete_basis(columns: &[CVector], d: usize) -> CMatrix {
    let mut out: Vec<CVector> = columns.to_vec();
    let mut k = 0;
    while out.len() < d && k < d {
        let mut v = basis_ket(d, k);
        for u in &out {
            let ov = u.dotc(&v);
            v -= u * ov;
        }
        let n = v.norm();
        if n > 1e-8 {
            out.push(v / r(n));
        }
        k += 1;
    }
    CMatrix::from_columns(&out)
}
