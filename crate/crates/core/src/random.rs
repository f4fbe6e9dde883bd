//! Random states and unitaries for property checks and demos.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{self, c, r, CMatrix, CVector};
use crate::state::{BipartiteState, DensityMatrix};

fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        c(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

pub fn pure_vector<R: Rng + ?Sized>(rng: &mut R, d: usize) -> CVector {
    let v = ginibre(rng, d, 1).column(0).into_owned();
    let n = v.norm();
    v.unscale(n)
}

/// Haar-random unitary (QR of a Ginibre matrix with the phase of `R`'s diagonal removed).
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> CMatrix {
    let qr = ginibre(rng, d, d).qr();
    let (mut q, rr) = qr.unpack();
    for k in 0..d {
        let diag = rr[(k, k)];
        let phase = if diag.norm() > 0.0 {
            diag / r(diag.norm())
        } else {
            r(1.0)
        };
        let col = q.column(k) * phase;
        q.set_column(k, &col);
    }
    q
}

/// Random density matrix of the given rank (`GG†/tr` with `G` Ginibre `d × rank`).
pub fn state_of_rank<R: Rng + ?Sized>(rng: &mut R, d: usize, rank: usize) -> DensityMatrix {
    let g = ginibre(rng, d, rank.max(1));
    DensityMatrix::from_unnormalized(&(&g * g.adjoint()))
}

/// Random density matrix with rank drawn uniformly from `1..=d`.
pub fn state<R: Rng + ?Sized>(rng: &mut R, d: usize) -> DensityMatrix {
    let rank = rng.gen_range(1..=d);
    state_of_rank(rng, d, rank)
}

pub fn bipartite<R: Rng + ?Sized>(rng: &mut R, da: usize, db: usize) -> BipartiteState {
    BipartiteState::new(state(rng, da * db), da, db).expect("dimensions agree")
}

pub fn full_rank_bipartite<R: Rng + ?Sized>(rng: &mut R, da: usize, db: usize) -> BipartiteState {
    BipartiteState::new(state_of_rank(rng, da * db, da * db), da, db).expect("dimensions agree")
}

pub fn product<R: Rng + ?Sized>(rng: &mut R, da: usize, db: usize) -> BipartiteState {
    let a = state(rng, da);
    let b = state(rng, db);
    crate::state::tensor_product(&a, &b).expect("small dimensions")
}

/// `Σ_a p_a Π_a ⊗ ρ^a` with a random basis on A and random conditional states.
pub fn classical_quantum<R: Rng + ?Sized>(rng: &mut R, da: usize, db: usize) -> BipartiteState {
    let u = unitary(rng, da);
    let weights: Vec<f64> = (0..da).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let mut m = CMatrix::zeros(da * db, da * db);
    for (k, w) in weights.iter().enumerate() {
        let proj = linalg::projector(&u.column(k).into_owned());
        let cond = state(rng, db);
        m += linalg::kron(&proj, cond.matrix()).scale(w / total);
    }
    BipartiteState::from_parts_unchecked(&m, da, db)
}
