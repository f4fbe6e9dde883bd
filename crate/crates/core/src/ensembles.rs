//! Named state families: the nine 3⊗3 orthogonal product ("teahouse")
//! states, small two-qubit ensembles, and the local-distinguishability vs.
//! discord comparison table.

use serde::Serialize;

use crate::discord::{self, ZeroDiscordReport};
use crate::error::{QError, Result};
use crate::linalg::{self, r, CMatrix, CVector};
use crate::state::{BipartiteState, Subsystem};

#[derive(Debug, Clone)]
pub struct StateEnsemble {
    pub members: Vec<(f64, CVector)>,
    pub dims: (usize, usize),
}

impl StateEnsemble {
    pub fn new(members: Vec<(f64, CVector)>, dims: (usize, usize)) -> Result<Self> {
        let total: f64 = members.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > 1e-12 || members.iter().any(|(w, _)| *w < 0.0) {
            return Err(QError::InvalidProbabilities(format!(
                "weights sum to {total}"
            )));
        }
        for (_, v) in &members {
            if v.len() != dims.0 * dims.1 {
                return Err(QError::DimensionMismatch {
                    expected: dims.0 * dims.1,
                    got: v.len(),
                });
            }
            if (v.norm() - 1.0).abs() > 1e-12 {
                return Err(QError::InvalidParameter("member is not normalized".into()));
            }
        }
        Ok(StateEnsemble { members, dims })
    }

    pub fn with_weights(&self, weights: &[f64]) -> Result<Self> {
        if weights.len() != self.members.len() {
            return Err(QError::DimensionMismatch {
                expected: self.members.len(),
                got: weights.len(),
            });
        }
        let members = weights
            .iter()
            .zip(&self.members)
            .map(|(w, (_, v))| (*w, v.clone()))
            .collect();
        Self::new(members, self.dims)
    }

    pub fn weights(&self) -> Vec<f64> {
        self.members.iter().map(|(w, _)| *w).collect()
    }

    /// Applies `u` to every member.
    pub fn transformed(&self, u: &CMatrix) -> StateEnsemble {
        StateEnsemble {
            members: self.members.iter().map(|(w, v)| (*w, u * v)).collect(),
            dims: self.dims,
        }
    }
}

/// A ket amplitude `numerator / √2^k`, `k ∈ {0, 1}`.
#[derive(Debug, Clone, Copy)]
struct Amp {
    numerator: i8,
    over_sqrt2: bool,
}

impl Amp {
    fn value(self) -> f64 {
        let n = f64::from(self.numerator);
        if self.over_sqrt2 {
            n * std::f64::consts::FRAC_1_SQRT_2
        } else {
            n
        }
    }
}

/// `|k⟩` or `(|i⟩ ± |j⟩)/√2` on a qutrit, as exact amplitudes.
fn qutrit(terms: &[(usize, i8)]) -> [Amp; 3] {
    let over_sqrt2 = terms.len() == 2;
    let mut out = [Amp {
        numerator: 0,
        over_sqrt2,
    }; 3];
    for &(k, sign) in terms {
        out[k].numerator = sign;
    }
    out
}

fn product_ket(a: [Amp; 3], b: [Amp; 3]) -> CVector {
    CVector::from_fn(9, |k, _| r(a[k / 3].value() * b[k % 3].value()))
}

/// The nine mutually orthogonal 3⊗3 product vectors, in the order
/// `|1⟩|1⟩, |0⟩|0±1⟩, |2⟩|1±2⟩, |1±2⟩|0⟩, |0±1⟩|2⟩`.
pub fn teahouse_vectors() -> Vec<CVector> {
    let k = |i: usize| qutrit(&[(i, 1)]);
    let sup = |i: usize, j: usize, s: i8| qutrit(&[(i, 1), (j, s)]);
    vec![
        product_ket(k(1), k(1)),
        product_ket(k(0), sup(0, 1, 1)),
        product_ket(k(0), sup(0, 1, -1)),
        product_ket(k(2), sup(1, 2, 1)),
        product_ket(k(2), sup(1, 2, -1)),
        product_ket(sup(1, 2, 1), k(0)),
        product_ket(sup(1, 2, -1), k(0)),
        product_ket(sup(0, 1, 1), k(2)),
        product_ket(sup(0, 1, -1), k(2)),
    ]
}

pub fn teahouse_states() -> StateEnsemble {
    let members = teahouse_vectors()
        .into_iter()
        .map(|v| (1.0 / 9.0, v))
        .collect();
    StateEnsemble {
        members,
        dims: (3, 3),
    }
}

/// Unequal weighting with extra weight on `|0⟩|0+1⟩` and `|0+1⟩|2⟩`, whose
/// A-parts do not commute. Up-weighting a single member would leave the
/// ensemble density classical-quantum.
pub const UNEQUAL_TEAHOUSE_WEIGHTS: [f64; 9] =
    [0.10, 0.15, 0.10, 0.10, 0.10, 0.10, 0.10, 0.15, 0.10];

pub fn teahouse_unequal() -> StateEnsemble {
    teahouse_states()
        .with_weights(&UNEQUAL_TEAHOUSE_WEIGHTS)
        .expect("weights sum to one")
}

pub fn ensemble_density(e: &StateEnsemble) -> BipartiteState {
    let n = e.dims.0 * e.dims.1;
    let mut m = CMatrix::zeros(n, n);
    for (w, v) in &e.members {
        m += linalg::projector(v).scale(*w);
    }
    BipartiteState::from_parts_unchecked(&m, e.dims.0, e.dims.1)
}

fn two_qubit_ket(amps: [f64; 4]) -> CVector {
    CVector::from_fn(4, |k, _| r(amps[k]))
}

/// `|00⟩, |11⟩` with equal weights.
pub fn product_biorthogonal_pair() -> StateEnsemble {
    StateEnsemble {
        members: vec![
            (0.5, two_qubit_ket([1.0, 0.0, 0.0, 0.0])),
            (0.5, two_qubit_ket([0.0, 0.0, 0.0, 1.0])),
        ],
        dims: (2, 2),
    }
}

/// `|Φ⁺⟩, |Φ⁻⟩` with weights 0.6 / 0.4.
pub fn entangled_pair() -> StateEnsemble {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    StateEnsemble {
        members: vec![
            (0.6, two_qubit_ket([s, 0.0, 0.0, s])),
            (0.4, two_qubit_ket([s, 0.0, 0.0, -s])),
        ],
        dims: (2, 2),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DiscordClass {
    Zero,
    Nonzero,
}

#[derive(Debug, Clone, Serialize)]
pub struct SideVerdict {
    pub class: DiscordClass,
    pub commutator_norm: f64,
    /// Optimized D₁ when the measured side is within the optimizer domain.
    pub d1: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Table1Row {
    pub label: String,
    pub description: String,
    pub side_a: SideVerdict,
    pub side_b: SideVerdict,
    /// Static annotation; never computed.
    pub locally_distinguishable: bool,
    /// Zero/nonzero discord entry listed for the row.
    pub expected_discord: DiscordClass,
    pub representative_choice: bool,
}

impl Table1Row {
    /// Nonzero rows only need side A to be nonzero.
    pub fn reproduces(&self) -> bool {
        match self.expected_discord {
            DiscordClass::Zero => {
                self.side_a.class == DiscordClass::Zero && self.side_b.class == DiscordClass::Zero
            }
            DiscordClass::Nonzero => self.side_a.class == DiscordClass::Nonzero,
        }
    }
}

fn side_verdict(s: &BipartiteState, side: Subsystem) -> Result<SideVerdict> {
    let report: ZeroDiscordReport = discord::is_zero_discord(s, side)?;
    let d1 = if report.is_zero || s.dim_of(side) > 3 {
        None
    } else {
        Some(discord::d1(s, side)?.value)
    };
    Ok(SideVerdict {
        class: if report.is_zero {
            DiscordClass::Zero
        } else {
            DiscordClass::Nonzero
        },
        commutator_norm: report.commutator_norm,
        d1,
    })
}

fn row(
    label: &str,
    description: &str,
    e: &StateEnsemble,
    distinguishable: bool,
    expected: DiscordClass,
    representative_choice: bool,
) -> Result<Table1Row> {
    let s = ensemble_density(e);
    Ok(Table1Row {
        label: label.to_string(),
        description: description.to_string(),
        side_a: side_verdict(&s, Subsystem::A)?,
        side_b: side_verdict(&s, Subsystem::B)?,
        locally_distinguishable: distinguishable,
        expected_discord: expected,
        representative_choice,
    })
}

pub fn table1_report() -> Result<Vec<Table1Row>> {
    Ok(vec![
        row(
            "teahouse-equal",
            "9 teahouse states, equal weights",
            &teahouse_states(),
            false,
            DiscordClass::Zero,
            false,
        )?,
        row(
            "product-biorthogonal",
            "|00>, |11>, equal weights",
            &product_biorthogonal_pair(),
            true,
            DiscordClass::Zero,
            true,
        )?,
        row(
            "entangled-orthogonal",
            "|Phi+> (0.6), |Phi-> (0.4)",
            &entangled_pair(),
            true,
            DiscordClass::Nonzero,
            true,
        )?,
        row(
            "teahouse-unequal",
            "9 teahouse states, weights (2,3,2,2,2,2,2,3,2)/20",
            &teahouse_unequal(),
            false,
            DiscordClass::Nonzero,
            true,
        )?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn teahouse_is_orthonormal_product_set() {
        let vs = teahouse_vectors();
        assert_eq!(vs.len(), 9);
        for (i, a) in vs.iter().enumerate() {
            assert!((a.norm() - 1.0).abs() < 1e-15);
            for b in vs.iter().skip(i + 1) {
                assert!(a.dotc(b).norm() < 1e-12);
            }
            // Schmidt rank 1: the 3×3 coefficient matrix has rank one
            let m = CMatrix::from_fn(3, 3, |i, j| a[3 * i + j]);
            let sv = m.singular_values();
            assert!(sv[1].abs() < 1e-12 && sv[2].abs() < 1e-12);
        }
    }

    #[test]
    fn equal_weight_teahouse_density_is_maximally_mixed() {
        let s = ensemble_density(&teahouse_states());
        assert!(linalg::max_abs_diff(s.matrix(), &linalg::identity(9).unscale(9.0)) < 1e-15);
    }

    #[test]
    fn single_member_ensemble_is_its_projector() {
        let v = teahouse_vectors()[3].clone();
        let e = StateEnsemble::new(vec![(1.0, v.clone())], (3, 3)).unwrap();
        let s = ensemble_density(&e);
        assert!(linalg::max_abs_diff(s.matrix(), &linalg::projector(&v)) < 1e-15);
    }

    #[test]
    fn rejects_bad_weights() {
        assert!(teahouse_states().with_weights(&[0.5; 9]).is_err());
    }
}
