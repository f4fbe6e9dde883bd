//! Standard process tomography of a qubit coupled to a qubit environment,
//! with the probe states prepared from a correlated joint state.
//!
//! Two preparation schemes are modelled:
//!
//! * measure-then-rotate: post-select on a fixed anchor projector `Π_H`,
//!   then rotate into each probe. The environment is left in the same state
//!   `ω_H` for every probe, so the reconstructed map is completely positive.
//! * measure-only: post-select directly on each probe projector `Π_a`,
//!   leaving the environment in a probe-dependent state `ω_a`.
//!
//! The process matrix uses the elementary operator basis in column-stacking
//! order `K = (|0⟩⟨0|, |1⟩⟨0|, |0⟩⟨1|, |1⟩⟨1|)`, so that
//! `χ_{(i,j),(k,l)} = ⟨i| E(|j⟩⟨l|) |k⟩` with `m = i + 2j`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{QError, Result};
use crate::io::{serialize_matrices, serialize_matrix, serialize_states};
use crate::linalg::{self, c, r, CMatrix, CVector, I};
use crate::measurement::ConditionalBlocks;
use crate::state::{self, BipartiteState, DensityMatrix, Subsystem};

/// Minimum eigenvalue accepted as completely positive.
pub const CP_TOL: f64 = -1e-8;
/// Preparations with smaller outcome probability are rejected.
pub const MIN_PREPARATION_PROBABILITY: f64 = 1e-12;

/// `{|0⟩, |1⟩, |+⟩, |+i⟩}`, labelled H, V, D, R.
pub fn canonical_probes() -> Vec<CVector> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    vec![
        linalg::basis_ket(2, 0),
        linalg::basis_ket(2, 1),
        linalg::ket(&[r(s), r(s)]),
        linalg::ket(&[r(s), c(0.0, s)]),
    ]
}

pub const PROBE_LABELS: [&str; 4] = ["H", "V", "D", "R"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SchemeKind {
    MeasureRotate,
    MeasureOnly,
}

#[derive(Debug, Clone, Serialize)]
pub struct PreparationScheme {
    pub kind: SchemeKind,
    /// Anchor vector `|H⟩` (measure-then-rotate only).
    #[serde(skip)]
    pub anchor: Option<CVector>,
    /// `R_a` (measure-then-rotate only).
    #[serde(skip)]
    pub rotations: Vec<CMatrix>,
    /// Probe vectors `|ψ_a⟩`.
    #[serde(skip)]
    pub probes: Vec<CVector>,
}

fn check_complete(probes: &[CVector]) -> Result<()> {
    probe_inverse(&probes.iter().map(linalg::projector).collect::<Vec<_>>()).map(|_| ())
}

impl PreparationScheme {
    /// Anchor `|0⟩` rotated by `{𝟙, σ_x, H, S·H}` onto H, V, D, R.
    pub fn measure_rotate_default() -> Self {
        let s_gate = CMatrix::from_row_slice(2, 2, &[r(1.0), r(0.0), r(0.0), I]);
        let rotations = vec![
            linalg::identity(2),
            linalg::pauli_x(),
            linalg::hadamard(),
            s_gate * linalg::hadamard(),
        ];
        Self::measure_rotate(linalg::basis_ket(2, 0), rotations)
            .expect("default rotations reach H, V, D, R")
    }

    pub fn measure_rotate(anchor: CVector, rotations: Vec<CMatrix>) -> Result<Self> {
        let anchor = anchor.unscale(anchor.norm());
        for rot in &rotations {
            let dev = linalg::unitary_deviation(rot);
            if dev > 1e-10 {
                return Err(QError::NotUnitary(dev));
            }
        }
        let probes: Vec<CVector> = rotations.iter().map(|rot| rot * &anchor).collect();
        check_complete(&probes)?;
        Ok(PreparationScheme {
            kind: SchemeKind::MeasureRotate,
            anchor: Some(anchor),
            rotations,
            probes,
        })
    }

    pub fn measure_only_default() -> Self {
        Self::measure_only(canonical_probes()).expect("canonical probes are complete")
    }

    pub fn measure_only(probes: Vec<CVector>) -> Result<Self> {
        let probes: Vec<CVector> = probes.into_iter().map(|v| v.unscale(v.norm())).collect();
        check_complete(&probes)?;
        Ok(PreparationScheme {
            kind: SchemeKind::MeasureOnly,
            anchor: None,
            rotations: Vec::new(),
            probes,
        })
    }

    /// Measure-only scheme with each canonical probe rotated by a Hadamard.
    pub fn measure_only_hadamard() -> Self {
        let h = linalg::hadamard();
        Self::measure_only(canonical_probes().iter().map(|v| &h * v).collect())
            .expect("unitary image of a complete set is complete")
    }

    pub fn len(&self) -> usize {
        self.probes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probes.is_empty()
    }

    /// `max_a ‖R_a Π_H R_a† − |ψ_a⟩⟨ψ_a|‖` for measure-then-rotate, 0 otherwise.
    pub fn rotation_deviation(&self) -> f64 {
        match &self.anchor {
            None => 0.0,
            Some(anchor) => {
                let ph = linalg::projector(anchor);
                self.rotations
                    .iter()
                    .zip(&self.probes)
                    .map(|(rot, v)| {
                        linalg::max_abs_diff(&linalg::conjugate(rot, &ph), &linalg::projector(v))
                    })
                    .fold(0.0, f64::max)
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct Preparation {
    pub probe: DensityMatrix,
    pub joint_after: BipartiteState,
    pub env: DensityMatrix,
    pub probability: f64,
}

/// Apply preparation `index` of `scheme` to the joint system–environment state.
pub fn prepare(
    scheme: &PreparationScheme,
    joint: &BipartiteState,
    index: usize,
) -> Result<Preparation> {
    if index >= scheme.len() {
        return Err(QError::InvalidParameter(format!(
            "preparation index {index} out of range (scheme has {})",
            scheme.len()
        )));
    }
    let da = joint.dim_a();
    if scheme.probes[index].len() != da {
        return Err(QError::DimensionMismatch {
            expected: da,
            got: scheme.probes[index].len(),
        });
    }
    let (measured, rotation) = match scheme.kind {
        SchemeKind::MeasureRotate => (
            scheme
                .anchor
                .clone()
                .expect("measure-rotate carries an anchor"),
            Some(&scheme.rotations[index]),
        ),
        SchemeKind::MeasureOnly => (scheme.probes[index].clone(), None),
    };
    let unnormalized_env = ConditionalBlocks::new(joint).unnormalized(&measured);
    let probability = unnormalized_env.trace().re;
    if probability < MIN_PREPARATION_PROBABILITY {
        return Err(QError::ZeroProbability(probability));
    }

    let ib = linalg::identity(joint.dim_b());
    let pi = linalg::kron(&linalg::projector(&measured), &ib);
    let mut after = (&pi * joint.matrix() * &pi).unscale(probability);
    if let Some(rot) = rotation {
        after = linalg::conjugate(&linalg::kron(rot, &ib), &after);
    }
    let joint_after = BipartiteState::from_parts_unchecked(&after, da, joint.dim_b());
    Ok(Preparation {
        probe: joint_after.reduced(Subsystem::A),
        env: joint_after.reduced(Subsystem::B),
        joint_after,
        probability,
    })
}

/// `tr_B U ρ U†`
pub fn evolve_and_reduce(joint_after: &BipartiteState, u: &CMatrix) -> Result<DensityMatrix> {
    if u.nrows() != joint_after.matrix().nrows() || !u.is_square() {
        return Err(QError::DimensionMismatch {
            expected: joint_after.matrix().nrows(),
            got: u.nrows(),
        });
    }
    Ok(joint_after.apply(u).reduced(Subsystem::A))
}

/// Kraus operators `M_{μν} = √p_ν ⟨μ|U|ν⟩` of the channel induced by `U` on
/// `A ⊗ B` with the environment B initially in `env = Σ p_ν |ν⟩⟨ν|`.
/// Operators that vanish identically are dropped.
pub fn kraus_from_environment(u: &CMatrix, env: &DensityMatrix) -> Result<Vec<CMatrix>> {
    let db = env.dim();
    if !u.nrows().is_multiple_of(db) || !u.is_square() {
        return Err(QError::DimensionMismatch {
            expected: db,
            got: u.nrows(),
        });
    }
    let da = u.nrows() / db;
    let spectrum = linalg::eig_hermitian(env.matrix())?;
    let mut out = Vec::new();
    for (nu, &p) in spectrum.eigenvalues.iter().enumerate() {
        if p <= 1e-15 {
            continue;
        }
        let ket_nu = spectrum.eigenvector(nu);
        for mu in 0..db {
            let bra_mu = linalg::basis_ket(db, mu);
            // ⟨μ|_B U |ν⟩_B as a d_A × d_A block
            let m = CMatrix::from_fn(da, da, |i, j| {
                let mut acc = r(0.0);
                for b1 in 0..db {
                    for b2 in 0..db {
                        acc += bra_mu[b1].conj() * u[(i * db + b1, j * db + b2)] * ket_nu[b2];
                    }
                }
                acc * p.sqrt()
            });
            if linalg::max_abs(&m) > 1e-14 {
                out.push(m);
            }
        }
    }
    Ok(out)
}

pub fn apply_kraus(kraus: &[CMatrix], rho: &CMatrix) -> CMatrix {
    kraus
        .iter()
        .fold(CMatrix::zeros(rho.nrows(), rho.ncols()), |acc, m| {
            acc + m * rho * m.adjoint()
        })
}

/// `Σ M†M`
pub fn kraus_completeness(kraus: &[CMatrix]) -> CMatrix {
    let d = kraus.first().map_or(0, |m| m.ncols());
    kraus
        .iter()
        .fold(CMatrix::zeros(d, d), |acc, m| acc + m.adjoint() * m)
}

/// Elementary operator basis in column-stacking order.
pub fn operator_basis(d: usize) -> Vec<CMatrix> {
    (0..d * d)
        .map(|m| {
            let (i, j) = (m % d, m / d);
            let mut e = CMatrix::zeros(d, d);
            e[(i, j)] = r(1.0);
            e
        })
        .collect()
}

fn vectorize(m: &CMatrix) -> CVector {
    CVector::from_iterator(m.len(), m.iter().copied())
}

/// Coefficients expressing each elementary `|j⟩⟨l|` in the probe operators:
/// row `m` (column-stacking index of `|j⟩⟨l|`) holds the weights of the probes.
fn probe_inverse(probes: &[CMatrix]) -> Result<CMatrix> {
    let d = probes.first().map_or(0, |p| p.nrows());
    if d == 0 || probes.len() != d * d {
        return Err(QError::SingularProbeSet);
    }
    let cols: Vec<CVector> = probes.iter().map(vectorize).collect();
    let p = CMatrix::from_columns(&cols);
    let sv = p.clone().singular_values();
    let smallest = sv.iter().copied().fold(f64::INFINITY, f64::min);
    if smallest < 1e-10 {
        return Err(QError::SingularProbeSet);
    }
    // P c = vec(E_m) for every m at once: c = P⁻¹ (columns are the unit vectors)
    let inv = p.try_inverse().ok_or(QError::SingularProbeSet)?;
    Ok(inv.transpose())
}

#[derive(Debug, Clone, Serialize)]
pub struct ProcessMatrix {
    #[serde(serialize_with = "serialize_matrices")]
    pub basis: Vec<CMatrix>,
    #[serde(serialize_with = "serialize_matrix")]
    pub chi: CMatrix,
    /// Descending.
    pub eigenvalues: Vec<f64>,
}

impl ProcessMatrix {
    pub fn dim(&self) -> usize {
        self.basis.first().map_or(0, |k| k.nrows())
    }

    /// `Σ χ_mn K_m ρ K_n†`
    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        let d = self.dim();
        let mut out = CMatrix::zeros(d, d);
        for (m, km) in self.basis.iter().enumerate() {
            for (n, kn) in self.basis.iter().enumerate() {
                let w = self.chi[(m, n)];
                if w.norm() > 0.0 {
                    out += km * rho * kn.adjoint() * w;
                }
            }
        }
        out
    }

    /// `‖Σ χ_mn K_n†K_m − 𝟙‖_max`
    pub fn trace_preservation_deviation(&self) -> f64 {
        let d = self.dim();
        let mut acc = CMatrix::zeros(d, d);
        for (m, km) in self.basis.iter().enumerate() {
            for (n, kn) in self.basis.iter().enumerate() {
                acc += kn.adjoint() * km * self.chi[(m, n)];
            }
        }
        linalg::max_abs_diff(&acc, &linalg::identity(d))
    }

    pub fn trace(&self) -> f64 {
        self.chi.trace().re
    }

    /// Eigenvectors of χ scaled by `√λ`, mapped back to operators
    /// (`M = Σ_m v_m K_m`). Only meaningful when χ is positive.
    pub fn kraus_operators(&self) -> Result<Vec<CMatrix>> {
        let spectrum = linalg::eig_hermitian(&self.chi)?;
        let d = self.dim();
        Ok(spectrum
            .eigenvalues
            .iter()
            .enumerate()
            .filter(|(_, &l)| l > 1e-12)
            .map(|(k, &l)| {
                let v = spectrum.eigenvector(k);
                self.basis
                    .iter()
                    .zip(v.iter())
                    .fold(CMatrix::zeros(d, d), |acc, (km, vm)| {
                        acc + km * (*vm * l.sqrt())
                    })
            })
            .collect())
    }
}

/// Linear-inversion reconstruction of χ from probe states and their images.
/// No positivity is imposed, so a non-CP data set keeps its negative eigenvalues.
pub fn reconstruct_chi(probes: &[CMatrix], outputs: &[CMatrix]) -> Result<ProcessMatrix> {
    if probes.len() != outputs.len() {
        return Err(QError::DimensionMismatch {
            expected: probes.len(),
            got: outputs.len(),
        });
    }
    let coeffs = probe_inverse(probes)?;
    let d = probes[0].nrows();
    // E(|j⟩⟨l|) for each column-stacking index n = j + d·l
    let images: Vec<CMatrix> = (0..d * d)
        .map(|n| {
            outputs
                .iter()
                .enumerate()
                .fold(CMatrix::zeros(d, d), |acc, (k, out)| {
                    acc + out * coeffs[(n, k)]
                })
        })
        .collect();
    let chi = CMatrix::from_fn(d * d, d * d, |m, n| {
        let (i, j) = (m % d, m / d);
        let (k, l) = (n % d, n / d);
        images[j + d * l][(i, k)]
    });
    let dev = linalg::hermitian_deviation(&chi);
    if dev > 1e-8 {
        return Err(QError::NotHermitian(dev));
    }
    let eigenvalues =
        linalg::eig_hermitian_with_threshold(&(&chi + chi.adjoint()).scale(0.5), 1e-9)?.eigenvalues;
    Ok(ProcessMatrix {
        basis: operator_basis(d),
        chi,
        eigenvalues,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CpVerdict {
    pub is_cp: bool,
    pub eigenvalues: Vec<f64>,
}

pub fn cp_check(chi: &ProcessMatrix) -> CpVerdict {
    let min = chi
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    CpVerdict {
        is_cp: min >= CP_TOL,
        eigenvalues: chi.eigenvalues.clone(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TomographyRun {
    #[serde(serialize_with = "serialize_matrix")]
    pub initial_joint: CMatrix,
    #[serde(serialize_with = "serialize_matrix")]
    pub joint_unitary: CMatrix,
    pub scheme: SchemeKind,
    #[serde(serialize_with = "serialize_states")]
    pub probe_states: Vec<DensityMatrix>,
    /// Reduced outputs; estimates when sampled with finite shots.
    #[serde(serialize_with = "serialize_matrices")]
    pub output_states: Vec<CMatrix>,
    /// Environment state after each preparation.
    #[serde(serialize_with = "serialize_states")]
    pub env_states: Vec<DensityMatrix>,
    pub preparation_probabilities: Vec<f64>,
    pub chi: ProcessMatrix,
    pub cp_verdict: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shots: Option<u64>,
}

fn check_qubit_pair(joint: &BipartiteState, u: &CMatrix) -> Result<()> {
    if joint.dim_a() != 2 || joint.dim_b() != 2 {
        return Err(QError::UnsupportedDimension(joint.dim_a() * joint.dim_b()));
    }
    if u.nrows() != 4 || u.ncols() != 4 {
        return Err(QError::DimensionMismatch {
            expected: 4,
            got: u.nrows(),
        });
    }
    let dev = linalg::unitary_deviation(u);
    if dev > 1e-10 {
        return Err(QError::NotUnitary(dev));
    }
    Ok(())
}

pub fn run_tomography(
    joint: &BipartiteState,
    u: &CMatrix,
    scheme: &PreparationScheme,
) -> Result<TomographyRun> {
    run(joint, u, scheme, None)
}

/// As [`run_tomography`], with each output state estimated from `shots`
/// single-shot Pauli X, Y and Z measurements.
pub fn run_tomography_sampled(
    joint: &BipartiteState,
    u: &CMatrix,
    scheme: &PreparationScheme,
    shots: u64,
    seed: u64,
) -> Result<TomographyRun> {
    if shots == 0 {
        return Err(QError::InvalidParameter("shots must be positive".into()));
    }
    run(joint, u, scheme, Some((shots, seed)))
}

/// Bloch-vector estimate of a qubit state from binomial Pauli counts.
pub fn sample_qubit_state(rho: &CMatrix, shots: u64, rng: &mut ChaCha8Rng) -> CMatrix {
    let paulis = [linalg::pauli_x(), linalg::pauli_y(), linalg::pauli_z()];
    let mut est = linalg::identity(2);
    for p in &paulis {
        let expectation = (rho * p).trace().re;
        let up = ((1.0 + expectation) / 2.0).clamp(0.0, 1.0);
        let k = Binomial::new(shots, up)
            .expect("probability in [0, 1]")
            .sample(rng);
        let estimate = 2.0 * k as f64 / shots as f64 - 1.0;
        est += p.scale(estimate);
    }
    est.scale(0.5)
}

fn run(
    joint: &BipartiteState,
    u: &CMatrix,
    scheme: &PreparationScheme,
    shots: Option<(u64, u64)>,
) -> Result<TomographyRun> {
    check_qubit_pair(joint, u)?;
    if scheme.len() < 4 {
        return Err(QError::SingularProbeSet);
    }
    // branches are independent; collect keeps probe order
    let branches: Vec<Result<(Preparation, CMatrix)>> = (0..scheme.len())
        .into_par_iter()
        .map(|k| {
            let prep = prepare(scheme, joint, k)?;
            let exact = evolve_and_reduce(&prep.joint_after, u)?.into_matrix();
            let out = match shots {
                None => exact,
                Some((n, seed)) => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(k as u64));
                    sample_qubit_state(&exact, n, &mut rng)
                }
            };
            Ok((prep, out))
        })
        .collect();
    let mut probe_states = Vec::new();
    let mut output_states = Vec::new();
    let mut env_states = Vec::new();
    let mut preparation_probabilities = Vec::new();
    for b in branches {
        let (prep, out) = b?;
        probe_states.push(prep.probe);
        env_states.push(prep.env);
        preparation_probabilities.push(prep.probability);
        output_states.push(out);
    }
    let probe_ops: Vec<CMatrix> = scheme.probes.iter().map(linalg::projector).collect();
    let chi = reconstruct_chi(&probe_ops, &output_states)?;
    let cp_verdict = cp_check(&chi).is_cp;
    Ok(TomographyRun {
        initial_joint: joint.matrix().clone(),
        joint_unitary: u.clone(),
        scheme: scheme.kind,
        probe_states,
        output_states,
        env_states,
        preparation_probabilities,
        chi,
        cp_verdict,
        shots: shots.map(|s| s.0),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Lemma2Report {
    pub chis: Vec<ProcessMatrix>,
    /// `(i, j, max-entry |χ_i − χ_j|)` for every pair of schemes.
    pub distances: Vec<(usize, usize, f64)>,
    pub max_distance: f64,
    pub all_cp: bool,
    /// `Γ = 0`: the joint state is a product.
    pub product_input: bool,
}

/// Reconstructs χ from several measure-only schemes on the same joint state
/// and reports how far apart the reconstructions are.
pub fn lemma2_product_check(
    joint: &BipartiteState,
    u: &CMatrix,
    schemes: &[PreparationScheme],
) -> Result<Lemma2Report> {
    if schemes.len() < 2 {
        return Err(QError::InvalidParameter(
            "need at least two preparation schemes".into(),
        ));
    }
    if schemes.iter().any(|s| s.kind != SchemeKind::MeasureOnly) {
        return Err(QError::InvalidParameter(
            "schemes must be measure-only".into(),
        ));
    }
    let chis: Vec<ProcessMatrix> = schemes
        .iter()
        .map(|s| run_tomography(joint, u, s).map(|r| r.chi))
        .collect::<Result<_>>()?;
    let mut distances = Vec::new();
    for i in 0..chis.len() {
        for j in i + 1..chis.len() {
            distances.push((i, j, linalg::max_abs_diff(&chis[i].chi, &chis[j].chi)));
        }
    }
    let max_distance = distances.iter().map(|d| d.2).fold(0.0, f64::max);
    let all_cp = chis.iter().all(|c| cp_check(c).is_cp);
    let product =
        state::tensor_product(&joint.reduced(Subsystem::A), &joint.reduced(Subsystem::B))?;
    Ok(Lemma2Report {
        chis,
        distances,
        max_distance,
        all_cp,
        product_input: linalg::max_abs_diff(product.matrix(), joint.matrix()) <= 1e-9,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_rotations_hit_probes() {
        let s = PreparationScheme::measure_rotate_default();
        assert!(s.rotation_deviation() < 1e-15);
        let probes = canonical_probes();
        for (a, b) in s.probes.iter().zip(&probes) {
            assert!((a.dotc(b).norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn incomplete_probe_set_is_rejected() {
        let k = linalg::basis_ket(2, 0);
        let probes = vec![
            k.clone(),
            k.clone(),
            linalg::basis_ket(2, 1),
            canonical_probes()[2].clone(),
        ];
        assert!(matches!(
            PreparationScheme::measure_only(probes),
            Err(QError::SingularProbeSet)
        ));
    }

    #[test]
    fn basis_order() {
        let b = operator_basis(2);
        assert_eq!(b[1][(1, 0)], r(1.0));
        assert_eq!(b[2][(0, 1)], r(1.0));
    }

    #[test]
    fn identity_outputs_give_corner_chi() {
        let probes: Vec<CMatrix> = canonical_probes().iter().map(linalg::projector).collect();
        let chi = reconstruct_chi(&probes, &probes).unwrap();
        for m in 0..4 {
            for n in 0..4 {
                let expect = if (m == 0 || m == 3) && (n == 0 || n == 3) {
                    1.0
                } else {
                    0.0
                };
                assert!((chi.chi[(m, n)] - r(expect)).norm() < 1e-14);
            }
        }
        assert!((chi.eigenvalues[0] - 2.0).abs() < 1e-14);
        assert!(chi.eigenvalues[1..].iter().all(|l| l.abs() < 1e-14));
        assert!(cp_check(&chi).is_cp);
    }

    #[test]
    fn zero_probability_preparation() {
        let v = linalg::kron_vec(&linalg::basis_ket(2, 0), &linalg::basis_ket(2, 0));
        let joint = BipartiteState::new(DensityMatrix::pure(&v).unwrap(), 2, 2).unwrap();
        let s = PreparationScheme::measure_only_default();
        assert!(matches!(
            prepare(&s, &joint, 1),
            Err(QError::ZeroProbability(_))
        ));
        assert!(prepare(&s, &joint, 0).is_ok());
        assert!(prepare(&s, &joint, 7).is_err());
    }

    #[test]
    fn sampled_state_converges() {
        let rho = linalg::projector(&canonical_probes()[3]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let est = sample_qubit_state(&rho, 200_000, &mut rng);
        assert!(linalg::max_abs_diff(&est, &rho) < 0.01);
        assert!((est.trace().re - 1.0).abs() < 1e-12);
    }
}
