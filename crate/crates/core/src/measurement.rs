//! Rank-1 projective measurements on one side of a bipartite state.

use serde::Serialize;

use crate::error::{QError, Result};
use crate::linalg::{self, c, r, unitary_deviation, CMatrix, CVector};
use crate::state::{
    shannon_entropy, von_neumann_entropy, BipartiteState, DensityMatrix, Subsystem,
};

/// Outcomes below this probability get a placeholder conditional state.
pub const NULL_OUTCOME: f64 = 1e-12;

/// Complete set of orthogonal rank-1 projectors, stored through the unitary
/// whose columns span them.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveBasis {
    unitary: CMatrix,
    projectors: Vec<CMatrix>,
}

impl ProjectiveBasis {
    fn from_unitary_unchecked(unitary: CMatrix) -> Self {
        let projectors = unitary
            .column_iter()
            .map(|col| linalg::projector(&col.into_owned()))
            .collect();
        ProjectiveBasis {
            unitary,
            projectors,
        }
    }

    pub fn computational(d: usize) -> Self {
        Self::from_unitary_unchecked(linalg::identity(d))
    }

    pub fn dim(&self) -> usize {
        self.unitary.nrows()
    }

    pub fn projectors(&self) -> &[CMatrix] {
        &self.projectors
    }

    pub fn unitary(&self) -> &CMatrix {
        &self.unitary
    }

    pub fn vector(&self, k: usize) -> CVector {
        self.unitary.column(k).into_owned()
    }

    pub fn vectors(&self) -> Vec<CVector> {
        self.unitary.column_iter().map(|c| c.into_owned()).collect()
    }

    /// `{U Π_a U†}`
    pub fn conjugated(&self, u: &CMatrix) -> ProjectiveBasis {
        Self::from_unitary_unchecked(u * &self.unitary)
    }

    /// Bloch vector of the first projector (qubits only).
    pub fn bloch_vector(&self) -> Option<[f64; 3]> {
        if self.dim() != 2 {
            return None;
        }
        let p = &self.projectors[0];
        Some([
            (p * linalg::pauli_x()).trace().re,
            (p * linalg::pauli_y()).trace().re,
            (p * linalg::pauli_z()).trace().re,
        ])
    }

    /// Polar and azimuthal angle of [`Self::bloch_vector`].
    pub fn bloch_angles(&self) -> Option<(f64, f64)> {
        self.bloch_vector().map(|[x, y, z]| {
            let theta = z.clamp(-1.0, 1.0).acos();
            let mut phi = y.atan2(x);
            if phi < 0.0 {
                phi += std::f64::consts::TAU;
            }
            if theta.sin().abs() < 1e-12 {
                phi = 0.0;
            }
            (theta, phi)
        })
    }

    /// Largest violation of idempotence, orthogonality and completeness.
    pub fn invariant_deviation(&self) -> f64 {
        let d = self.dim();
        let mut worst: f64 = 0.0;
        let mut sum = CMatrix::zeros(d, d);
        for (a, pa) in self.projectors.iter().enumerate() {
            sum += pa;
            for (b, pb) in self.projectors.iter().enumerate() {
                let prod = pa * pb;
                let dev = if a == b {
                    linalg::max_abs_diff(&prod, pa)
                } else {
                    linalg::max_abs(&prod)
                };
                worst = worst.max(dev);
            }
            worst = worst.max((pa.trace() - r(1.0)).norm());
        }
        worst.max(linalg::max_abs_diff(&sum, &linalg::identity(d)))
    }
}

/// Qubit basis `{(𝟙 ± n·σ)/2}` along the Bloch direction `(θ, φ)`.
pub fn basis_from_bloch(theta: f64, phi: f64) -> ProjectiveBasis {
    let (s, co) = ((theta / 2.0).sin(), (theta / 2.0).cos());
    let e = c(phi.cos(), phi.sin());
    let up = linalg::ket(&[r(co), e * s]);
    let down = linalg::ket(&[-e.conj() * s, r(co)]);
    ProjectiveBasis::from_unitary_unchecked(CMatrix::from_columns(&[up, down]))
}

pub fn basis_from_unitary(u: &CMatrix) -> Result<ProjectiveBasis> {
    let dev = unitary_deviation(u);
    if dev > 1e-10 {
        return Err(QError::NotUnitary(dev));
    }
    Ok(ProjectiveBasis::from_unitary_unchecked(u.clone()))
}

/// The `d_B × d_B` blocks `ρ_ij = ⟨i|_A ρ_AB |j⟩_A`.
#[derive(Debug, Clone)]
pub struct ConditionalBlocks {
    dim_a: usize,
    dim_b: usize,
    blocks: Vec<CMatrix>,
}

impl ConditionalBlocks {
    pub fn new(s: &BipartiteState) -> Self {
        let (da, db) = (s.dim_a(), s.dim_b());
        let m = s.matrix();
        let blocks = (0..da * da)
            .map(|ij| {
                let (i, j) = (ij / da, ij % da);
                m.view((i * db, j * db), (db, db)).into_owned()
            })
            .collect();
        ConditionalBlocks {
            dim_a: da,
            dim_b: db,
            blocks,
        }
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    /// `(⟨a| ⊗ 𝟙) ρ (|a⟩ ⊗ 𝟙)`, whose trace is the outcome probability.
    pub fn unnormalized(&self, a: &CVector) -> CMatrix {
        let da = self.dim_a;
        let mut out = CMatrix::zeros(self.dim_b, self.dim_b);
        for i in 0..da {
            for j in 0..da {
                let w = a[i].conj() * a[j];
                if w.norm_sqr() > 0.0 {
                    out += &self.blocks[i * da + j] * w;
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalState {
    pub state: DensityMatrix,
    /// Set when the outcome probability is below [`NULL_OUTCOME`]; the state
    /// is then a maximally mixed stand-in and carries no information.
    pub placeholder: bool,
}

#[derive(Debug, Clone)]
pub struct MeasurementRecord {
    pub measured: Subsystem,
    pub basis: ProjectiveBasis,
    pub probabilities: Vec<f64>,
    /// States of the unmeasured subsystem, one per outcome.
    pub conditional_states: Vec<ConditionalState>,
    /// Non-selective post-measurement state `Σ p_a Π_a ⊗ ρ^a`.
    pub post_state: BipartiteState,
}

impl MeasurementRecord {
    pub fn outcome_entropy(&self) -> f64 {
        shannon_entropy(&self.probabilities).unwrap_or(f64::NAN)
    }
}

pub fn measure_subsystem(
    s: &BipartiteState,
    basis: &ProjectiveBasis,
    on: Subsystem,
) -> Result<MeasurementRecord> {
    match on {
        Subsystem::A => measure_left(s, basis),
        Subsystem::B => {
            let mut rec = measure_left(&s.swapped(), basis)?;
            rec.post_state = rec.post_state.swapped();
            rec.measured = Subsystem::B;
            Ok(rec)
        }
    }
}

fn measure_left(s: &BipartiteState, basis: &ProjectiveBasis) -> Result<MeasurementRecord> {
    if basis.dim() != s.dim_a() {
        return Err(QError::DimensionMismatch {
            expected: s.dim_a(),
            got: basis.dim(),
        });
    }
    let blocks = ConditionalBlocks::new(s);
    let db = s.dim_b();
    let mut probabilities = Vec::with_capacity(basis.dim());
    let mut conditional_states = Vec::with_capacity(basis.dim());
    let mut post = CMatrix::zeros(s.matrix().nrows(), s.matrix().ncols());
    for (k, proj) in basis.projectors().iter().enumerate() {
        let un = blocks.unnormalized(&basis.vector(k));
        let p = un.trace().re.max(0.0);
        post += linalg::kron(proj, &un);
        probabilities.push(p);
        conditional_states.push(if p < NULL_OUTCOME {
            ConditionalState {
                state: DensityMatrix::maximally_mixed(db),
                placeholder: true,
            }
        } else {
            ConditionalState {
                state: DensityMatrix::from_unnormalized(&un),
                placeholder: false,
            }
        });
    }
    let total: f64 = probabilities.iter().sum();
    for p in &mut probabilities {
        *p /= total;
    }
    Ok(MeasurementRecord {
        measured: Subsystem::A,
        basis: basis.clone(),
        probabilities,
        conditional_states,
        post_state: BipartiteState::from_parts_unchecked(&post, s.dim_a(), db),
    })
}

/// `S(ρ_B|Π^A) = Σ_a p_a S(ρ_{B|Π_a})`, skipping placeholder outcomes.
pub fn conditional_entropy(rec: &MeasurementRecord) -> f64 {
    rec.probabilities
        .iter()
        .zip(&rec.conditional_states)
        .filter(|(_, cs)| !cs.placeholder)
        .map(|(p, cs)| p * von_neumann_entropy(&cs.state))
        .sum()
}

/// Serializable summary of a basis.
#[derive(Debug, Clone, Serialize)]
pub struct BasisSummary {
    pub dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<f64>,
    /// Columns of the basis unitary as `[re, im]` pairs, row-major.
    pub vectors: Vec<Vec<[f64; 2]>>,
}

impl From<&ProjectiveBasis> for BasisSummary {
    fn from(b: &ProjectiveBasis) -> Self {
        let angles = b.bloch_angles();
        BasisSummary {
            dim: b.dim(),
            theta: angles.map(|a| a.0),
            phi: angles.map(|a| a.1),
            vectors: b
                .vectors()
                .iter()
                .map(|v| v.iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, pauli_x, pauli_z};
    use std::f64::consts::{FRAC_PI_2, PI};

    fn ex_disc(b: f64, cc: f64) -> BipartiteState {
        let one = linalg::identity(2);
        let m = (linalg::identity(4)
            + linalg::kron(&pauli_z(), &one).scale(b)
            + linalg::kron(&pauli_x(), &pauli_x()).scale(cc))
        .scale(0.25);
        BipartiteState::two_qubit(m).unwrap()
    }

    #[test]
    fn bloch_z_and_x() {
        let z = basis_from_bloch(0.0, 0.0);
        let one = linalg::identity(2);
        assert!(max_abs_diff(&z.projectors()[0], &(&one + pauli_z()).scale(0.5)) < 1e-15);
        assert!(max_abs_diff(&z.projectors()[1], &(&one - pauli_z()).scale(0.5)) < 1e-15);
        let x = basis_from_bloch(FRAC_PI_2, 0.0);
        assert!(max_abs_diff(&x.projectors()[0], &(&one + pauli_x()).scale(0.5)) < 1e-15);
        let y = basis_from_bloch(FRAC_PI_2, FRAC_PI_2);
        let yp = (&one + linalg::pauli_y()).scale(0.5);
        assert!(max_abs_diff(&y.projectors()[0], &yp) < 1e-15);
    }

    #[test]
    fn bloch_angles_wrap() {
        let b = basis_from_bloch(-0.3, 7.0);
        assert!(b.invariant_deviation() < 1e-14);
        let (t, p) = b.bloch_angles().unwrap();
        let again = basis_from_bloch(t, p);
        assert!(max_abs_diff(&again.projectors()[0], &b.projectors()[0]) < 1e-12);
        assert!((0.0..=PI).contains(&t));
    }

    #[test]
    fn fourier_qutrit_basis() {
        let w = c((2.0 * PI / 3.0).cos(), (2.0 * PI / 3.0).sin());
        let f = CMatrix::from_fn(3, 3, |j, k| w.powu((j * k) as u32).unscale(3f64.sqrt()));
        let b = basis_from_unitary(&f).unwrap();
        assert!(b.invariant_deviation() < 1e-14);
        for p in b.projectors() {
            for k in 0..3 {
                assert!((p[(k, k)].re - 1.0 / 3.0).abs() < 1e-14);
            }
        }
        assert!(matches!(
            basis_from_unitary(&linalg::identity(3).scale(2.0)),
            Err(QError::NotUnitary(_))
        ));
    }

    #[test]
    fn ex_disc_in_z_basis() {
        let s = ex_disc(0.5, 0.5);
        let rec = measure_subsystem(&s, &basis_from_bloch(0.0, 0.0), Subsystem::A).unwrap();
        for cs in &rec.conditional_states {
            assert!(max_abs_diff(cs.state.matrix(), &linalg::identity(2).scale(0.5)) < 1e-14);
        }
        assert!((conditional_entropy(&rec) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ex_disc_in_x_basis() {
        let cc = 0.5;
        let s = ex_disc(0.5, cc);
        let rec = measure_subsystem(&s, &basis_from_bloch(FRAC_PI_2, 0.0), Subsystem::A).unwrap();
        assert!((rec.probabilities[0] - 0.5).abs() < 1e-14);
        assert!((rec.probabilities[1] - 0.5).abs() < 1e-14);
        let one = linalg::identity(2);
        let plus = (&one + pauli_x().scale(cc)).scale(0.5);
        let minus = (&one - pauli_x().scale(cc)).scale(0.5);
        assert!(max_abs_diff(rec.conditional_states[0].state.matrix(), &plus) < 1e-14);
        assert!(max_abs_diff(rec.conditional_states[1].state.matrix(), &minus) < 1e-14);
        let h = -(0.75f64 * 0.75f64.log2() + 0.25 * 0.25f64.log2());
        assert!((conditional_entropy(&rec) - h).abs() < 1e-12);
    }

    #[test]
    fn zero_probability_outcome_is_placeholder() {
        let v = linalg::kron_vec(&linalg::basis_ket(2, 0), &linalg::basis_ket(2, 1));
        let s = BipartiteState::new(DensityMatrix::pure(&v).unwrap(), 2, 2).unwrap();
        let rec = measure_subsystem(&s, &ProjectiveBasis::computational(2), Subsystem::A).unwrap();
        assert!(!rec.conditional_states[0].placeholder);
        assert!(rec.conditional_states[1].placeholder);
        assert_eq!(rec.probabilities[1], 0.0);
        assert_eq!(conditional_entropy(&rec), 0.0);
    }

    #[test]
    fn dimension_mismatch() {
        let s = ex_disc(0.5, 0.5);
        assert!(matches!(
            measure_subsystem(&s, &ProjectiveBasis::computational(3), Subsystem::A),
            Err(QError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn measuring_b_of_swapped_matches_a() {
        let s = ex_disc(0.3, 0.6);
        let basis = basis_from_bloch(1.1, 0.4);
        let on_a = measure_subsystem(&s, &basis, Subsystem::A).unwrap();
        let on_b = measure_subsystem(&s.swapped(), &basis, Subsystem::B).unwrap();
        assert!(max_abs_diff(on_a.post_state.matrix(), on_b.post_state.swapped().matrix()) < 1e-14);
        assert_eq!(on_b.measured, Subsystem::B);
    }
}
