//! Two-qubit gates, the CNOT input/output set 𝓛 of product states, flip
//! classification of local operations, and ensemble discord under a gate.

use serde::Serialize;

use crate::discord;
use crate::ensembles::{ensemble_density, StateEnsemble};
use crate::error::{QError, Result};
use crate::linalg::{self, c, r, CMatrix, CVector, C64, I};
use crate::state::Subsystem;

/// Unitary within `1e-12`.
#[derive(Debug, Clone, PartialEq)]
pub struct GateMatrix(CMatrix);

impl GateMatrix {
    pub fn new(u: CMatrix) -> Result<Self> {
        let dev = linalg::unitary_deviation(&u);
        if dev > 1e-12 {
            return Err(QError::NotUnitary(dev));
        }
        Ok(GateMatrix(u))
    }

    pub fn identity(d: usize) -> Self {
        GateMatrix(linalg::identity(d))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn local(a: &GateMatrix, b: &GateMatrix) -> Self {
        GateMatrix(linalg::kron(&a.0, &b.0))
    }

    pub fn then(&self, next: &GateMatrix) -> Self {
        GateMatrix(&next.0 * &self.0)
    }
}

impl std::ops::Mul<&CVector> for &GateMatrix {
    type Output = CVector;

    fn mul(self, v: &CVector) -> CVector {
        &self.0 * v
    }
}

pub fn pauli_x() -> GateMatrix {
    GateMatrix(linalg::pauli_x())
}

pub fn pauli_y() -> GateMatrix {
    GateMatrix(linalg::pauli_y())
}

pub fn pauli_z() -> GateMatrix {
    GateMatrix(linalg::pauli_z())
}

pub fn hadamard() -> GateMatrix {
    GateMatrix(linalg::hadamard())
}

/// `diag(1, i)`
pub fn phase_s() -> GateMatrix {
    GateMatrix(CMatrix::from_row_slice(2, 2, &[r(1.0), r(0.0), r(0.0), I]))
}

/// CNOT on `A ⊗ B` (A is the left factor).
pub fn cnot(control: Subsystem, target: Subsystem) -> Result<GateMatrix> {
    let p0 = linalg::projector(&linalg::basis_ket(2, 0));
    let p1 = linalg::projector(&linalg::basis_ket(2, 1));
    let one = linalg::identity(2);
    let x = linalg::pauli_x();
    match (control, target) {
        (Subsystem::A, Subsystem::B) => {
            Ok(GateMatrix(linalg::kron(&p0, &one) + linalg::kron(&p1, &x)))
        }
        (Subsystem::B, Subsystem::A) => {
            Ok(GateMatrix(linalg::kron(&one, &p0) + linalg::kron(&x, &p1)))
        }
        (c, t) => Err(QError::InvalidSubsystem(format!(
            "control {c} and target {t} coincide"
        ))),
    }
}

/// `|Y±⟩ = (|0⟩ ± i|1⟩)/√2`
pub fn y_ket(sign: f64) -> CVector {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    linalg::ket(&[r(s), c(0.0, sign * s)])
}

/// `|X±⟩ = (|0⟩ ± |1⟩)/√2`
pub fn x_ket(sign: f64) -> CVector {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    linalg::ket(&[r(s), r(sign * s)])
}

#[derive(Debug, Clone)]
pub struct GatePair {
    pub label: char,
    pub input: CVector,
    pub expected_output: CVector,
}

/// The four product inputs a–d whose CNOT (control A) images are products.
pub fn l_set() -> Vec<GatePair> {
    let k0 = linalg::basis_ket(2, 0);
    let k1 = linalg::basis_ket(2, 1);
    let kr = linalg::kron_vec;
    vec![
        GatePair {
            label: 'a',
            input: kr(&k1, &y_ket(1.0)),
            expected_output: kr(&k1, &y_ket(-1.0)) * I,
        },
        GatePair {
            label: 'b',
            input: kr(&k0, &y_ket(1.0)),
            expected_output: kr(&k0, &y_ket(1.0)),
        },
        GatePair {
            label: 'c',
            input: kr(&y_ket(1.0), &x_ket(-1.0)),
            expected_output: kr(&y_ket(-1.0), &x_ket(-1.0)),
        },
        GatePair {
            label: 'd',
            input: kr(&y_ket(1.0), &x_ket(1.0)),
            expected_output: kr(&y_ket(1.0), &x_ket(1.0)),
        },
    ]
}

#[derive(Debug, Clone, Serialize)]
pub struct PairCheck {
    pub label: char,
    /// `|⟨expected|U|input⟩|²`
    pub fidelity: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GateCheckReport {
    pub pairs: Vec<PairCheck>,
    pub passed: bool,
}

pub const FIDELITY_TOL: f64 = 1e-10;

pub fn verify_gate_on_set(g: &GateMatrix, set: &[GatePair]) -> Result<GateCheckReport> {
    let mut pairs = Vec::with_capacity(set.len());
    for p in set {
        if p.input.len() != g.dim() || p.expected_output.len() != g.dim() {
            return Err(QError::DimensionMismatch {
                expected: g.dim(),
                got: p.input.len(),
            });
        }
        let fidelity = p.expected_output.dotc(&(g * &p.input)).norm_sqr();
        pairs.push(PairCheck {
            label: p.label,
            fidelity,
            passed: fidelity >= 1.0 - FIDELITY_TOL,
        });
    }
    let passed = pairs.iter().all(|p| p.passed);
    Ok(GateCheckReport { pairs, passed })
}

/// The reset check: applies `reset` to the expected outputs and compares
/// against the original inputs.
pub fn reset_pairs(reset: &GateMatrix, set: &[GatePair]) -> Result<GateCheckReport> {
    let back: Vec<GatePair> = set
        .iter()
        .map(|p| GatePair {
            label: p.label,
            input: p.expected_output.clone(),
            expected_output: p.input.clone(),
        })
        .collect();
    verify_gate_on_set(reset, &back)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FlipTag {
    /// `Φ|Y₊⟩ ∝ |Y₋⟩`
    Flipping,
    /// `Φ|Y₊⟩ ∝ |Y₊⟩`
    NonFlipping,
    Undetermined,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlipType {
    pub tag: FlipTag,
    /// Phase `e^{iθ}` with `Φ|Y₊⟩ = e^{iθ}|Y∓⟩`, when determined.
    pub phase: Option<[f64; 2]>,
}

pub const FLIP_TOL: f64 = 1e-9;

pub fn classify_flip(u: &GateMatrix) -> Result<FlipType> {
    if u.dim() != 2 {
        return Err(QError::DimensionMismatch {
            expected: 2,
            got: u.dim(),
        });
    }
    let out = u * &y_ket(1.0);
    let to_minus: C64 = y_ket(-1.0).dotc(&out);
    let to_plus: C64 = y_ket(1.0).dotc(&out);
    let as_phase = |z: C64| Some([z.re, z.im]);
    Ok(if (to_minus.norm() - 1.0).abs() <= FLIP_TOL {
        FlipType {
            tag: FlipTag::Flipping,
            phase: as_phase(to_minus),
        }
    } else if (to_plus.norm() - 1.0).abs() <= FLIP_TOL {
        FlipType {
            tag: FlipTag::NonFlipping,
            phase: as_phase(to_plus),
        }
    } else {
        FlipType {
            tag: FlipTag::Undetermined,
            phase: None,
        }
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DiscordChange {
    pub before_a: f64,
    pub before_b: f64,
    pub after_a: f64,
    pub after_b: f64,
    /// `min(D₂^A, D₂^B)` before the gate.
    pub before: f64,
    pub after: f64,
}

/// Symmetric D₂ of the ensemble density before and after applying `g` to every member.
pub fn ensemble_discord_change(g: &GateMatrix, e: &StateEnsemble) -> Result<DiscordChange> {
    if g.dim() != e.dims.0 * e.dims.1 {
        return Err(QError::DimensionMismatch {
            expected: e.dims.0 * e.dims.1,
            got: g.dim(),
        });
    }
    let before = ensemble_density(e);
    let after = ensemble_density(&e.transformed(g.matrix()));
    let before_a = discord::d2(&before, Subsystem::A)?.value;
    let before_b = discord::d2(&before, Subsystem::B)?.value;
    let after_a = discord::d2(&after, Subsystem::A)?.value;
    let after_b = discord::d2(&after, Subsystem::B)?.value;
    Ok(DiscordChange {
        before_a,
        before_b,
        after_a,
        after_b,
        before: before_a.min(before_b),
        after: after_a.min(after_b),
    })
}

/// Inputs of [`l_set`] with equal weights.
pub fn l_set_ensemble() -> StateEnsemble {
    let set = l_set();
    let w = 1.0 / set.len() as f64;
    StateEnsemble::new(set.into_iter().map(|p| (w, p.input)).collect(), (2, 2))
        .expect("normalized members")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn apply(g: &GateMatrix, v: &CVector) -> CVector {
        g * v
    }

    #[test]
    fn cnot_orientation() {
        let g = cnot(Subsystem::B, Subsystem::A).unwrap();
        let k = |i, j| linalg::kron_vec(&linalg::basis_ket(2, i), &linalg::basis_ket(2, j));
        assert!((apply(&g, &k(0, 0)) - k(0, 0)).norm() < 1e-15);
        assert!((apply(&g, &k(0, 1)) - k(1, 1)).norm() < 1e-15);
        let phi = (k(0, 0) + k(1, 1)).unscale(2f64.sqrt());
        let expect = (k(0, 0) + k(0, 1)).unscale(2f64.sqrt());
        assert!((apply(&g, &phi) - expect).norm() < 1e-15);
        assert!(cnot(Subsystem::A, Subsystem::A).is_err());
    }

    #[test]
    fn l_set_pairs() {
        let set = l_set();
        assert!((&set[1].input - &set[1].expected_output).norm() < 1e-15);
        let a_out = linalg::kron_vec(&linalg::basis_ket(2, 1), &y_ket(-1.0));
        assert!((&set[0].expected_output - a_out * I).norm() < 1e-15);
    }

    #[test]
    fn identity_passes_only_fixed_pairs() {
        let rep = verify_gate_on_set(&GateMatrix::identity(4), &l_set()).unwrap();
        let passed: Vec<bool> = rep.pairs.iter().map(|p| p.passed).collect();
        assert_eq!(passed, vec![false, true, false, true]);
        assert!(!rep.passed);
    }

    #[test]
    fn flip_types() {
        let x = classify_flip(&pauli_x()).unwrap();
        assert_eq!(x.tag, FlipTag::Flipping);
        let [re, im] = x.phase.unwrap();
        assert!(re.abs() < 1e-15 && (im - 1.0).abs() < 1e-15);

        let id = classify_flip(&GateMatrix::identity(2)).unwrap();
        assert_eq!(id.tag, FlipTag::NonFlipping);
        let [re, im] = id.phase.unwrap();
        assert!((re - 1.0).abs() < 1e-15 && im.abs() < 1e-15);

        // H|Y₊⟩ = e^{iπ/4}|Y₋⟩
        let h = classify_flip(&hadamard()).unwrap();
        assert_eq!(h.tag, FlipTag::Flipping);
        let [re, im] = h.phase.unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((re - s).abs() < 1e-14 && (im - s).abs() < 1e-14);

        // S|Y₊⟩ = |X₋⟩
        assert_eq!(
            classify_flip(&phase_s()).unwrap().tag,
            FlipTag::Undetermined
        );
    }

    #[test]
    fn flip_tag_ignores_global_phase() {
        for g in [pauli_x(), pauli_y(), pauli_z(), hadamard(), phase_s()] {
            let tag = classify_flip(&g).unwrap().tag;
            let shifted = GateMatrix::new(g.matrix() * c(0.6, 0.8)).unwrap();
            assert_eq!(classify_flip(&shifted).unwrap().tag, tag);
        }
    }
}
