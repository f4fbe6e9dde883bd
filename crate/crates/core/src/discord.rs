//! Discord measures D₁, D₂, D₃ and the zero-discord decision procedure.
//!
//! For a projective basis Π on the measured side A:
//!
//! ```text
//! J^Π  = S(ρ_B) − S(ρ_B|Π)
//! D₁^Π = S(ρ_A) + S(ρ_B|Π) − S(ρ_AB)          D₁ = min_Π D₁^Π
//! D₂^Π = H(A^Π) + S(ρ_B|Π) − S(ρ_AB)          D₂ = min_Π D₂^Π
//! D₃   = S(ρ_A) + S(ρ_B|Π*) − S(ρ_AB)         Π* = eigenprojectors of ρ_A
//! ```
//!
//! Measuring B is handled by exchanging the tensor factors.

use serde::Serialize;

use crate::error::{QError, Result};
use crate::fano;
use crate::linalg::{self, operator_entropy, CMatrix, CVector};
use crate::measurement::{
    basis_from_bloch, basis_from_unitary, conditional_entropy, measure_subsystem,
    ConditionalBlocks, ProjectiveBasis,
};
use crate::optimize::{self, SearchConfig, SearchOutcome};
use crate::state::{von_neumann_entropy, BipartiteState, DensityMatrix, Subsystem};

pub use crate::state::mutual_information;

/// Commutator norm above which a state is declared nonzero-discord outright.
pub const COMMUTATOR_TOL: f64 = 1e-8;
/// Max-entry tolerance for reproducing ρ from a classical-quantum decomposition.
pub const REASSEMBLY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Measure {
    D1,
    D2,
    D3,
}

impl std::str::FromStr for Measure {
    type Err = QError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "d1" => Ok(Measure::D1),
            "d2" => Ok(Measure::D2),
            "d3" => Ok(Measure::D3),
            other => Err(QError::InvalidParameter(format!(
                "unknown measure `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DiscordResult {
    pub measure: Measure,
    pub side: Subsystem,
    pub value: f64,
    pub optimal_basis: ProjectiveBasis,
    pub optimizer_trace: Vec<(Vec<f64>, f64)>,
    pub converged: bool,
    /// D₃ only: the reduced state was degenerate and the basis was chosen by
    /// minimizing over compatible eigenbases.
    pub degenerate_reduced: bool,
}

/// Entropies of one side's measurement, evaluated without building records.
struct Objective {
    blocks: ConditionalBlocks,
    s_measured: f64,
    s_joint: f64,
}

impl Objective {
    /// `s` has the measured subsystem on the left.
    fn new(s: &BipartiteState) -> Self {
        Objective {
            blocks: ConditionalBlocks::new(s),
            s_measured: von_neumann_entropy(&s.reduced(Subsystem::A)),
            s_joint: von_neumann_entropy(s.state()),
        }
    }

    /// `(H(A^Π), S(ρ_B|Π))`
    fn entropies(&self, vectors: &[CVector]) -> (f64, f64) {
        let mut h = 0.0;
        let mut cond = 0.0;
        for v in vectors {
            let un = self.blocks.unnormalized(v);
            let p = un.trace().re;
            if p > crate::measurement::NULL_OUTCOME {
                h -= p * p.log2();
                cond += p * operator_entropy(&un.unscale(p));
            }
        }
        (h, cond)
    }

    fn d1(&self, vectors: &[CVector]) -> f64 {
        self.s_measured + self.entropies(vectors).1 - self.s_joint
    }

    fn d2(&self, vectors: &[CVector]) -> f64 {
        let (h, cond) = self.entropies(vectors);
        h + cond - self.s_joint
    }
}

fn qubit_vectors(theta: f64, phi: f64) -> [CVector; 2] {
    let b = basis_from_bloch(theta, phi);
    [b.vector(0), b.vector(1)]
}

fn oriented(s: &BipartiteState, side: Subsystem) -> BipartiteState {
    match side {
        Subsystem::A => s.clone(),
        Subsystem::B => s.swapped(),
    }
}

fn check_basis(s: &BipartiteState, basis: &ProjectiveBasis) -> Result<()> {
    if basis.dim() != s.dim_a() {
        return Err(QError::DimensionMismatch {
            expected: s.dim_a(),
            got: basis.dim(),
        });
    }
    Ok(())
}

/// `J^Π = S(ρ_B) − S(ρ_B|Π)` for a basis on A.
pub fn j_given_basis(s: &BipartiteState, basis: &ProjectiveBasis) -> Result<f64> {
    check_basis(s, basis)?;
    let rec = measure_subsystem(s, basis, Subsystem::A)?;
    Ok(von_neumann_entropy(&s.reduced(Subsystem::B)) - conditional_entropy(&rec))
}

pub fn d1_given_basis(s: &BipartiteState, basis: &ProjectiveBasis) -> Result<f64> {
    check_basis(s, basis)?;
    Ok(Objective::new(s).d1(&basis.vectors()))
}

/// `D₂^Π = S(ρ'_AB) − S(ρ_AB)`, evaluated from the post-measurement state.
pub fn d2_given_basis(s: &BipartiteState, basis: &ProjectiveBasis) -> Result<f64> {
    check_basis(s, basis)?;
    let rec = measure_subsystem(s, basis, Subsystem::A)?;
    Ok(von_neumann_entropy(rec.post_state.state()) - von_neumann_entropy(s.state()))
}

fn optimizer_domain(s: &BipartiteState, side: Subsystem) -> Result<usize> {
    let d = s.dim_of(side);
    if !(2..=3).contains(&d) {
        return Err(QError::UnsupportedDimension(d));
    }
    Ok(d)
}

fn minimize(
    oriented: &BipartiteState,
    cfg: &SearchConfig,
    eval: impl Fn(&Objective, &[CVector]) -> f64 + Sync,
) -> (SearchOutcome, ProjectiveBasis) {
    let obj = Objective::new(oriented);
    if oriented.dim_a() == 2 {
        let out = optimize::minimize_qubit(|t, p| eval(&obj, &qubit_vectors(t, p)), cfg);
        let basis = basis_from_bloch(out.params[0], out.params[1]);
        (out, basis)
    } else {
        let out = optimize::minimize_qutrit(|p| eval(&obj, &optimize::qutrit_vectors(p)), cfg);
        let basis = basis_from_unitary(&optimize::qutrit_unitary(&out.params))
            .expect("parameterized family is unitary");
        (out, basis)
    }
}

fn optimized(
    s: &BipartiteState,
    side: Subsystem,
    measure: Measure,
    cfg: &SearchConfig,
) -> Result<DiscordResult> {
    optimizer_domain(s, side)?;
    let o = oriented(s, side);
    let (out, basis) = match measure {
        Measure::D1 => minimize(&o, cfg, |obj, v| obj.d1(v)),
        Measure::D2 => minimize(&o, cfg, |obj, v| obj.d2(v)),
        Measure::D3 => unreachable!("D3 is not optimized over all bases"),
    };
    // report the objective at the returned basis so value and basis agree exactly
    let obj = Objective::new(&o);
    let value = match measure {
        Measure::D1 => obj.d1(&basis.vectors()),
        _ => obj.d2(&basis.vectors()),
    };
    Ok(DiscordResult {
        measure,
        side,
        value,
        optimal_basis: basis,
        optimizer_trace: out.trace,
        converged: out.converged,
        degenerate_reduced: false,
    })
}

pub fn d1(s: &BipartiteState, side: Subsystem) -> Result<DiscordResult> {
    d1_with(s, side, &SearchConfig::default())
}

pub fn d1_with(s: &BipartiteState, side: Subsystem, cfg: &SearchConfig) -> Result<DiscordResult> {
    optimized(s, side, Measure::D1, cfg)
}

pub fn d2(s: &BipartiteState, side: Subsystem) -> Result<DiscordResult> {
    d2_with(s, side, &SearchConfig::default())
}

pub fn d2_with(s: &BipartiteState, side: Subsystem, cfg: &SearchConfig) -> Result<DiscordResult> {
    optimized(s, side, Measure::D2, cfg)
}

pub fn d3(s: &BipartiteState, side: Subsystem) -> Result<DiscordResult> {
    d3_with(s, side, &SearchConfig::default())
}

/// D₃ in the eigenbasis of the measured reduced state. A degenerate spectrum
/// leaves the eigenbasis free inside each degenerate block; the block
/// rotation minimizing the objective is used and the result is flagged.
pub fn d3_with(s: &BipartiteState, side: Subsystem, cfg: &SearchConfig) -> Result<DiscordResult> {
    let o = oriented(s, side);
    let spectrum = linalg::eig_hermitian(o.reduced(Subsystem::A).matrix())?;
    let obj = Objective::new(&o);
    let d = o.dim_a();
    let eigvecs = spectrum.eigenvectors.clone();

    let mut degenerate: Vec<_> = spectrum
        .blocks
        .iter()
        .filter(|b| b.len() > 1)
        .cloned()
        .collect();
    let (basis, trace, converged) = match degenerate.len() {
        0 => (basis_from_unitary(&eigvecs)?, Vec::new(), true),
        1 => {
            let block = degenerate.remove(0);
            let embed = |local: &CMatrix| -> CMatrix {
                let mut rot = linalg::identity(d);
                rot.view_mut((block.start, block.start), (block.len(), block.len()))
                    .copy_from(local);
                &eigvecs * rot
            };
            let vectors_of = |u: &CMatrix| -> Vec<CVector> {
                (0..d).map(|k| u.column(k).into_owned()).collect()
            };
            let out = match block.len() {
                2 => optimize::minimize_qubit(
                    |t, p| obj.d1(&vectors_of(&embed(basis_from_bloch(t, p).unitary()))),
                    cfg,
                ),
                3 => optimize::minimize_qutrit(
                    |p| obj.d1(&vectors_of(&embed(&optimize::qutrit_unitary(p)))),
                    cfg,
                ),
                n => return Err(QError::UnsupportedDimension(n)),
            };
            let local = if block.len() == 2 {
                basis_from_bloch(out.params[0], out.params[1])
                    .unitary()
                    .clone()
            } else {
                optimize::qutrit_unitary(&out.params)
            };
            (
                basis_from_unitary(&embed(&local))?,
                out.trace,
                out.converged,
            )
        }
        _ => return Err(QError::UnsupportedDimension(d)),
    };
    // within compatible eigenbases H(A^Π) = S(ρ_A), so the D₁ form is D₃
    let value = obj.d1(&basis.vectors());
    Ok(DiscordResult {
        measure: Measure::D3,
        side,
        value,
        optimal_basis: basis,
        optimizer_trace: trace,
        converged,
        degenerate_reduced: spectrum.is_degenerate(),
    })
}

pub fn discord(s: &BipartiteState, side: Subsystem, measure: Measure) -> Result<DiscordResult> {
    match measure {
        Measure::D1 => d1(s, side),
        Measure::D2 => d2(s, side),
        Measure::D3 => d3(s, side),
    }
}

/// `min(D₂^A, D₂^B)`
pub fn symmetric_d2(s: &BipartiteState) -> Result<f64> {
    Ok(d2(s, Subsystem::A)?.value.min(d2(s, Subsystem::B)?.value))
}

/// `‖[ρ_A ⊗ 𝟙, ρ_AB]‖_max` (or the mirrored form for side B).
pub fn commutator_norm(s: &BipartiteState, side: Subsystem) -> f64 {
    let o = oriented(s, side);
    let local = linalg::kron(
        o.reduced(Subsystem::A).matrix(),
        &linalg::identity(o.dim_b()),
    );
    linalg::max_abs(&linalg::commutator(&local, o.matrix()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ZeroTestStep {
    /// Nonzero commutator with the reduced state.
    Commutator,
    /// Non-degenerate reduced state, tested in its eigenbasis.
    ReducedEigenbasis,
    /// Degenerate reduced state, tested in the joint eigenbasis of the
    /// measured-side operators `tr_B[ρ(𝟙⊗F)]`.
    JointEigenbasis,
}

#[derive(Debug, Clone)]
pub struct DecompositionTerm {
    pub weight: f64,
    /// Projector on the measured subsystem.
    pub projector: CMatrix,
    /// State of the other subsystem.
    pub conditional: DensityMatrix,
}

#[derive(Debug, Clone)]
pub struct ZeroDiscordReport {
    pub side: Subsystem,
    pub is_zero: bool,
    pub step: ZeroTestStep,
    pub commutator_norm: f64,
    pub witness_basis: Option<ProjectiveBasis>,
    /// `D₁` evaluated in the candidate basis, when one was built.
    pub d1_in_witness: Option<f64>,
    /// `‖Σ p_a Π_a ⊗ ρ^a − ρ‖_max` for the candidate basis.
    pub reassembly_error: Option<f64>,
    pub decomposition: Option<Vec<DecompositionTerm>>,
}

impl ZeroDiscordReport {
    /// `Σ p_a Π_a ⊗ ρ^a` in the original `A ⊗ B` ordering.
    pub fn reassemble(&self) -> Option<CMatrix> {
        let terms = self.decomposition.as_ref()?;
        let mut acc: Option<CMatrix> = None;
        for t in terms {
            let m = match self.side {
                Subsystem::A => linalg::kron(&t.projector, t.conditional.matrix()),
                Subsystem::B => linalg::kron(t.conditional.matrix(), &t.projector),
            }
            .scale(t.weight);
            acc = Some(match acc {
                Some(a) => a + m,
                None => m,
            });
        }
        acc
    }
}

/// Hermitian operators `tr_B[ρ(𝟙⊗F_μ)]` for an orthonormal operator basis
/// `{F_μ}` of the unmeasured side (identity first).
fn measured_side_family(o: &BipartiteState) -> Result<Vec<CMatrix>> {
    let (da, db) = (o.dim_a(), o.dim_b());
    let mut ops = vec![linalg::identity(db).unscale((db as f64).sqrt())];
    if db > 1 {
        ops.extend(
            fano::generators(db)?
                .into_iter()
                .map(|g| g.unscale(2f64.sqrt())),
        );
    }
    Ok(ops
        .iter()
        .map(|f| {
            let lifted = linalg::kron(&linalg::identity(da), f);
            crate::state::trace_out_b(&(o.matrix() * lifted), da, db)
        })
        .collect())
}

pub fn is_zero_discord(s: &BipartiteState, side: Subsystem) -> Result<ZeroDiscordReport> {
    let o = oriented(s, side);
    let comm = commutator_norm(s, side);
    let mut report = ZeroDiscordReport {
        side,
        is_zero: false,
        step: ZeroTestStep::Commutator,
        commutator_norm: comm,
        witness_basis: None,
        d1_in_witness: None,
        reassembly_error: None,
        decomposition: None,
    };
    if comm > COMMUTATOR_TOL {
        return Ok(report);
    }

    let spectrum = linalg::eig_hermitian(o.reduced(Subsystem::A).matrix())?;
    let candidate = if !spectrum.is_degenerate() {
        report.step = ZeroTestStep::ReducedEigenbasis;
        basis_from_unitary(&spectrum.eigenvectors)?
    } else {
        report.step = ZeroTestStep::JointEigenbasis;
        let family = measured_side_family(&o)?;
        // fixed generic weights separate the joint eigenspaces of a commuting family
        let mut generic = CMatrix::zeros(o.dim_a(), o.dim_a());
        for (k, a) in family.iter().enumerate() {
            let w = ((k as f64 + 1.0) * 0.618_033_988_749_895).fract() + 0.1;
            generic += a.scale(w);
        }
        let herm = (&generic + generic.adjoint()).scale(0.5);
        basis_from_unitary(&linalg::eig_hermitian(&herm)?.eigenvectors)?
    };

    let rec = measure_subsystem(&o, &candidate, Subsystem::A)?;
    let err = linalg::max_abs_diff(rec.post_state.matrix(), o.matrix());
    report.d1_in_witness = Some(d1_given_basis(&o, &candidate)?);
    report.reassembly_error = Some(err);
    report.is_zero = err <= REASSEMBLY_TOL;
    if report.is_zero {
        report.decomposition = Some(
            rec.probabilities
                .iter()
                .zip(&rec.conditional_states)
                .zip(candidate.projectors())
                .filter(|((p, cs), _)| **p > 0.0 && !cs.placeholder)
                .map(|((p, cs), proj)| DecompositionTerm {
                    weight: *p,
                    projector: proj.clone(),
                    conditional: cs.state.clone(),
                })
                .collect(),
        );
    }
    report.witness_basis = Some(candidate);
    Ok(report)
}

/// Two-qubit state `¼(𝟙 + b σ_z⊗𝟙 + c σ_x⊗σ_x)`. Its eigenvalues are
/// `(1 ± √(b²+c²))/4`, so it is a valid state iff `b² + c² ≤ 1`.
pub fn ex_disc_state(b: f64, c: f64) -> Result<BipartiteState> {
    let one = linalg::identity(2);
    let m = (linalg::identity(4)
        + linalg::kron(&linalg::pauli_z(), &one).scale(b)
        + linalg::kron(&linalg::pauli_x(), &linalg::pauli_x()).scale(c))
    .scale(0.25);
    BipartiteState::two_qubit(m)
}
