//! Minimization over projective measurement bases.
//!
//! Qubit bases are searched on a Bloch-sphere grid and the best grid points
//! refined with Nelder–Mead. Qutrit bases are parameterized by a diagonal
//! phase times three complex Givens rotations and searched with seeded
//! multi-start Nelder–Mead. Grid and multi-start evaluations run in parallel;
//! the reduction is ordered, so results do not depend on scheduling.

use std::cmp::Ordering;
use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::linalg::{c, r, CMatrix, CVector};

#[derive(Debug, Clone, Copy)]
pub struct NelderMeadOptions {
    pub max_iter: usize,
    /// Stop once the objective spread across the simplex drops below this.
    pub tol: f64,
    pub initial_step: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        NelderMeadOptions {
            max_iter: 2000,
            tol: 1e-10,
            initial_step: 0.1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

pub fn nelder_mead<F>(f: F, x0: &[f64], opts: &NelderMeadOptions) -> Minimum
where
    F: Fn(&[f64]) -> f64,
{
    let n = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), f(x0)));
    for k in 0..n {
        let mut x = x0.to_vec();
        x[k] += opts.initial_step;
        let fx = f(&x);
        simplex.push((x, fx));
    }

    let by_value = |a: &(Vec<f64>, f64), b: &(Vec<f64>, f64)| a.1.total_cmp(&b.1);
    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iter {
        simplex.sort_by(by_value);
        if simplex[n].1 - simplex[0].1 < opts.tol {
            converged = true;
            break;
        }
        iterations += 1;

        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / n as f64;
            }
        }
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[n].0)
                .map(|(c, w)| c + t * (w - c))
                .collect()
        };

        let xr = along(-1.0);
        let fr = f(&xr);
        if fr < simplex[0].1 {
            let xe = along(-2.0);
            let fe = f(&xe);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
        } else {
            let (xc, fc) = if fr < simplex[n].1 {
                let x = along(-0.5);
                let fx = f(&x);
                (x, fx)
            } else {
                let x = along(0.5);
                let fx = f(&x);
                (x, fx)
            };
            if fc < simplex[n].1.min(fr) {
                simplex[n] = (xc, fc);
            } else {
                let best = simplex[0].0.clone();
                for (x, fx) in simplex.iter_mut().skip(1) {
                    for (xi, bi) in x.iter_mut().zip(&best) {
                        *xi = bi + 0.5 * (*xi - bi);
                    }
                    *fx = f(x);
                }
            }
        }
    }
    simplex.sort_by(by_value);
    let (x, value) = simplex.swap_remove(0);
    Minimum {
        x,
        value,
        iterations,
        converged,
    }
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub theta_points: usize,
    pub phi_points: usize,
    /// Grid points handed to Nelder–Mead refinement.
    pub refine_starts: usize,
    pub qutrit_starts: usize,
    pub seed: u64,
    pub nelder_mead: NelderMeadOptions,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            theta_points: 64,
            phi_points: 128,
            refine_starts: 5,
            qutrit_starts: 50,
            seed: 0x5eed,
            nelder_mead: NelderMeadOptions::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub params: Vec<f64>,
    pub value: f64,
    pub trace: Vec<(Vec<f64>, f64)>,
    pub converged: bool,
}

/// Values closer than this are ties and fall through to the tie-break rule.
const TIE: f64 = 1e-12;

/// Canonical `(θ, φ)` for an unordered qubit basis: the direction `n` and
/// `−n` describe the same projector pair, so fold onto `θ ≤ π/2`.
pub fn canonical_direction(theta: f64, phi: f64) -> (f64, f64) {
    let x = theta.sin() * phi.cos();
    let y = theta.sin() * phi.sin();
    let z = theta.cos();
    let (x, y, z) =
        if z < -1e-12 || (z.abs() <= 1e-12 && (y < -1e-12 || (y.abs() <= 1e-12 && x < 0.0))) {
            (-x, -y, -z)
        } else {
            (x, y, z)
        };
    let t = z.clamp(-1.0, 1.0).acos();
    if t < 1e-12 {
        return (0.0, 0.0);
    }
    let mut p = y.atan2(x);
    if p < 0.0 {
        p += TAU;
    }
    if p >= TAU {
        p -= TAU;
    }
    (t, p)
}

fn lexicographic(a: &(f64, f64), b: &(f64, f64)) -> Ordering {
    a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1))
}

/// Minimize `objective(θ, φ)` over qubit measurement directions.
pub fn minimize_qubit<F>(objective: F, cfg: &SearchConfig) -> SearchOutcome
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    let nt = cfg.theta_points.max(2);
    let np = cfg.phi_points.max(1);
    let mut grid: Vec<(f64, f64, f64)> = (0..nt * np)
        .into_par_iter()
        .map(|k| {
            let theta = PI * (k / np) as f64 / (nt - 1) as f64;
            let phi = TAU * (k % np) as f64 / np as f64;
            (theta, phi, objective(theta, phi))
        })
        .collect();
    grid.sort_by(|a, b| {
        a.2.total_cmp(&b.2)
            .then(a.0.total_cmp(&b.0))
            .then(a.1.total_cmp(&b.1))
    });

    let starts: Vec<(f64, f64, f64)> = grid.into_iter().take(cfg.refine_starts.max(1)).collect();
    let refined: Vec<(f64, f64, Minimum)> = starts
        .par_iter()
        .map(|&(t, p, _)| {
            let m = nelder_mead(|x| objective(x[0], x[1]), &[t, p], &cfg.nelder_mead);
            (t, p, m)
        })
        .collect();

    let mut trace = Vec::with_capacity(2 * refined.len());
    let mut candidates = Vec::with_capacity(refined.len() + starts.len());
    for ((t, p, v), (_, _, m)) in starts.iter().zip(&refined) {
        trace.push((vec![*t, *p], *v));
        trace.push((m.x.clone(), m.value));
        candidates.push((canonical_direction(*t, *p), *v, true));
        candidates.push((canonical_direction(m.x[0], m.x[1]), m.value, m.converged));
    }
    let best_value = candidates.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
    let (dir, value, converged) = candidates
        .into_iter()
        .filter(|c| c.1 <= best_value + TIE)
        .min_by(|a, b| lexicographic(&a.0, &b.0))
        .expect("at least one candidate");
    SearchOutcome {
        params: vec![dir.0, dir.1],
        value,
        trace,
        converged: converged || refined.iter().any(|(_, _, m)| m.converged),
    }
}

fn givens(d: usize, i: usize, j: usize, theta: f64, phi: f64) -> CMatrix {
    let mut g = CMatrix::identity(d, d);
    let e = c(phi.cos(), phi.sin());
    g[(i, i)] = r(theta.cos());
    g[(j, j)] = r(theta.cos());
    g[(i, j)] = -e.conj() * theta.sin();
    g[(j, i)] = e * theta.sin();
    g
}

/// `diag(1, e^{iφ₁}, e^{iφ₂}) · G₀₁(θ₁, φ₃) · G₀₂(θ₂, φ₄) · G₁₂(θ₃, φ₅)`
/// with parameters `[θ₁, θ₂, θ₃, φ₁, …, φ₅]`.
pub fn qutrit_unitary(p: &[f64]) -> CMatrix {
    assert_eq!(p.len(), 8, "qutrit parameterization takes 8 parameters");
    let mut d = CMatrix::identity(3, 3);
    d[(1, 1)] = c(p[3].cos(), p[3].sin());
    d[(2, 2)] = c(p[4].cos(), p[4].sin());
    d * givens(3, 0, 1, p[0], p[5]) * givens(3, 0, 2, p[1], p[6]) * givens(3, 1, 2, p[2], p[7])
}

/// Columns of [`qutrit_unitary`].
pub fn qutrit_vectors(p: &[f64]) -> Vec<CVector> {
    let u = qutrit_unitary(p);
    (0..3).map(|k| u.column(k).into_owned()).collect()
}

/// Seeded multi-start Nelder–Mead over the 8-parameter qutrit family.
pub fn minimize_qutrit<F>(objective: F, cfg: &SearchConfig) -> SearchOutcome
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut starts: Vec<Vec<f64>> = vec![vec![0.0; 8]];
    while starts.len() < cfg.qutrit_starts.max(1) {
        starts.push((0..8).map(|_| rng.gen_range(0.0..TAU)).collect());
    }
    let opts = NelderMeadOptions {
        initial_step: 0.4,
        max_iter: cfg.nelder_mead.max_iter.max(4000),
        ..cfg.nelder_mead
    };
    let runs: Vec<Minimum> = starts
        .par_iter()
        .map(|x0| nelder_mead(&objective, x0, &opts))
        .collect();
    let trace = runs.iter().map(|m| (m.x.clone(), m.value)).collect();
    let best_value = runs.iter().map(|m| m.value).fold(f64::INFINITY, f64::min);
    // first found among ties
    let best = runs
        .iter()
        .find(|m| m.value <= best_value + TIE)
        .expect("at least one start");
    SearchOutcome {
        params: best.x.clone(),
        value: best.value,
        trace,
        converged: best.converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let m = nelder_mead(
            f,
            &[-1.2, 1.0],
            &NelderMeadOptions {
                max_iter: 5000,
                tol: 1e-14,
                initial_step: 0.5,
            },
        );
        assert!(m.converged);
        assert!((m.x[0] - 1.0).abs() < 1e-4 && (m.x[1] - 1.0).abs() < 1e-4);
    }

    #[test]
    fn qubit_search_finds_direction() {
        // minimize −(n·m)² with m along (θ, φ) = (1.0, 2.0)
        let target = [
            1.0f64.sin() * 2.0f64.cos(),
            1.0f64.sin() * 2.0f64.sin(),
            1.0f64.cos(),
        ];
        let f = |t: f64, p: f64| {
            let n = [t.sin() * p.cos(), t.sin() * p.sin(), t.cos()];
            -(n[0] * target[0] + n[1] * target[1] + n[2] * target[2]).powi(2)
        };
        let out = minimize_qubit(f, &SearchConfig::default());
        assert!((out.value + 1.0).abs() < 1e-9);
        assert!((out.params[0] - 1.0).abs() < 1e-4);
        assert!((out.params[1] - 2.0).abs() < 1e-4);
    }

    #[test]
    fn canonical_direction_folds_antipodes() {
        let (t, p) = canonical_direction(PI - 0.3, 0.2 + PI);
        assert!((t - 0.3).abs() < 1e-12 && (p - 0.2).abs() < 1e-12);
        assert_eq!(canonical_direction(PI, 1.3), (0.0, 0.0));
        let (t, p) = canonical_direction(PI / 2.0, 1.5 * PI);
        assert!((t - PI / 2.0).abs() < 1e-12 && (p - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn qutrit_family_is_unitary() {
        let u = qutrit_unitary(&[0.3, 1.2, -0.7, 0.1, 2.0, 0.5, -1.0, 0.8]);
        assert!(crate::linalg::unitary_deviation(&u) < 1e-14);
    }

    #[test]
    fn qutrit_search_reaches_target_column() {
        let target = crate::linalg::ket(&[r(0.6), c(0.0, 0.48), r(0.64)]);
        let f = |p: &[f64]| {
            let v = qutrit_vectors(p);
            -v.iter()
                .map(|x| target.dotc(x).norm_sqr().powi(2))
                .sum::<f64>()
        };
        let cfg = SearchConfig {
            qutrit_starts: 12,
            ..SearchConfig::default()
        };
        let out = minimize_qutrit(f, &cfg);
        assert!((out.value + 1.0).abs() < 1e-7, "{}", out.value);
    }
}
