//! Generalized Bloch (Fano) decomposition of bipartite states.
//!
//! ```text
//! ρ_AB = 1/(d_A d_B) [ 𝟙 + Σ α_i σ_i ⊗ 𝟙 + Σ β_j 𝟙 ⊗ σ_j + Σ γ_ij σ_i ⊗ σ_j ]
//! ```
//!
//! Generators are the generalized Gell-Mann matrices normalized to
//! `tr(σ_i σ_j) = 2 δ_ij`: Pauli (x, y, z) for d = 2 and the standard
//! λ₁…λ₈ ordering for d = 3.

use nalgebra::DMatrix;

use crate::error::{QError, Result};
use crate::linalg::{self, r, CMatrix, I};
use crate::state::{BipartiteState, MAX_SUBSYSTEM_DIM};

/// Traceless Hermitian generators of SU(d).
pub fn generators(d: usize) -> Result<Vec<CMatrix>> {
    if !(2..=MAX_SUBSYSTEM_DIM).contains(&d) {
        return Err(QError::UnsupportedDimension(d));
    }
    let mut out = Vec::with_capacity(d * d - 1);
    for j in 1..d {
        for i in 0..j {
            let mut sym = CMatrix::zeros(d, d);
            sym[(i, j)] = r(1.0);
            sym[(j, i)] = r(1.0);
            out.push(sym);
            let mut anti = CMatrix::zeros(d, d);
            anti[(i, j)] = -I;
            anti[(j, i)] = I;
            out.push(anti);
        }
        let norm = (2.0 / (j * (j + 1)) as f64).sqrt();
        let mut diag = CMatrix::zeros(d, d);
        for k in 0..j {
            diag[(k, k)] = r(norm);
        }
        diag[(j, j)] = r(-(j as f64) * norm);
        out.push(diag);
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct FanoDecomposition {
    pub dim_a: usize,
    pub dim_b: usize,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    /// `(d_A²−1) × (d_B²−1)`
    pub gamma: DMatrix<f64>,
    pub generators_a: Vec<CMatrix>,
    pub generators_b: Vec<CMatrix>,
}

impl FanoDecomposition {
    pub fn reassemble(&self) -> CMatrix {
        let (da, db) = (self.dim_a, self.dim_b);
        let ia = linalg::identity(da);
        let ib = linalg::identity(db);
        let mut m = linalg::identity(da * db);
        for (a, s) in self.alpha.iter().zip(&self.generators_a) {
            m += linalg::kron(s, &ib).scale(*a);
        }
        for (b, s) in self.beta.iter().zip(&self.generators_b) {
            m += linalg::kron(&ia, s).scale(*b);
        }
        for (i, sa) in self.generators_a.iter().enumerate() {
            for (j, sb) in self.generators_b.iter().enumerate() {
                let g = self.gamma[(i, j)];
                if g != 0.0 {
                    m += linalg::kron(sa, sb).scale(g);
                }
            }
        }
        m.unscale((da * db) as f64)
    }
}

pub fn fano_decompose(s: &BipartiteState) -> Result<FanoDecomposition> {
    let (da, db) = (s.dim_a(), s.dim_b());
    let ga = generators(da)?;
    let gb = generators(db)?;
    let rho = s.matrix();
    let ia = linalg::identity(da);
    let ib = linalg::identity(db);
    // tr(σ_i σ_j) = 2δ_ij fixes the projections below
    let weight = (da * db) as f64;
    let project = |op: &CMatrix, norm: f64| (rho * op).trace().re * weight / norm;

    let alpha = ga
        .iter()
        .map(|sa| project(&linalg::kron(sa, &ib), 2.0 * db as f64))
        .collect();
    let beta = gb
        .iter()
        .map(|sb| project(&linalg::kron(&ia, sb), 2.0 * da as f64))
        .collect();
    let gamma = DMatrix::from_fn(ga.len(), gb.len(), |i, j| {
        project(&linalg::kron(&ga[i], &gb[j]), 4.0)
    });
    Ok(FanoDecomposition {
        dim_a: da,
        dim_b: db,
        alpha,
        beta,
        gamma,
        generators_a: ga,
        generators_b: gb,
    })
}

/// `Γ_ij = (γ_ij − α_i β_j) / (d_A d_B)`
pub fn correlation_tensor(f: &FanoDecomposition) -> DMatrix<f64> {
    let scale = (f.dim_a * f.dim_b) as f64;
    DMatrix::from_fn(f.alpha.len(), f.beta.len(), |i, j| {
        (f.gamma[(i, j)] - f.alpha[i] * f.beta[j]) / scale
    })
}
