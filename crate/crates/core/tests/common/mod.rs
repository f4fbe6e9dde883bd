//! Independent reference computations for the integration tests. Nothing here
//! calls into the library's entropy, partial-trace or measurement code.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type M = DMatrix<Complex64>;

pub fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn mat(d: usize, entries: &[Complex64]) -> M {
    M::from_row_slice(d, d, entries)
}

pub fn real(d: usize, entries: &[f64]) -> M {
    M::from_row_slice(
        d,
        d,
        &entries.iter().map(|&x| cx(x, 0.0)).collect::<Vec<_>>(),
    )
}

fn xlogx(x: f64) -> f64 {
    if x <= 1e-15 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// Entropy (bits) of a 2×2 Hermitian PSD matrix with arbitrary trace,
/// from the closed-form eigenvalues.
pub fn entropy2(a: Complex64, b: Complex64, d: Complex64) -> f64 {
    let mean = 0.5 * (a.re + d.re);
    let half = 0.5 * (a.re - d.re);
    let rad = (half * half + b.norm_sqr()).sqrt();
    xlogx(mean + rad) + xlogx(mean - rad)
}

/// Entropy (bits) of any Hermitian matrix via a dense eigensolve.
pub fn entropy(m: &M) -> f64 {
    m.clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .map(|&x| xlogx(x))
        .sum()
}

/// Sorted (descending) eigenvalues of a Hermitian matrix.
pub fn eigenvalues(m: &M) -> Vec<f64> {
    let h = (m + m.adjoint()).scale(0.5);
    let mut v: Vec<f64> = h.symmetric_eigen().eigenvalues.iter().copied().collect();
    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    v
}

pub fn max_diff(a: &M, b: &M) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `¼(𝟙 + b σz⊗𝟙 + c σx⊗σx)` written out entry by entry.
#[rustfmt::skip]
pub fn ex_disc(b: f64, c: f64) -> M {
    real(
        4,
        &[
            1.0 + b, 0.0, 0.0, c,
            0.0, 1.0 + b, c, 0.0,
            0.0, c, 1.0 - b, 0.0,
            c, 0.0, 0.0, 1.0 - b,
        ],
    )
    .scale(0.25)
}

/// Two-qubit `ρ` entry `⟨a b|ρ|a' b'⟩`.
fn at(rho: &M, a: usize, b: usize, a2: usize, b2: usize) -> Complex64 {
    rho[(2 * a + b, 2 * a2 + b2)]
}

/// `(H(p), Σ p_k S(ρ_B|k))` for a measurement of qubit A along (θ, φ).
pub fn measured_entropies(rho: &M, theta: f64, phi: f64) -> (f64, f64) {
    let (s, c) = (0.5 * theta).sin_cos();
    let e = cx(phi.cos(), phi.sin());
    let kets = [[cx(c, 0.0), e * s], [-e.conj() * s, cx(c, 0.0)]];
    let mut h = 0.0;
    let mut cond = 0.0;
    for v in &kets {
        let mut blk = [[cx(0.0, 0.0); 2]; 2];
        for (b1, row) in blk.iter_mut().enumerate() {
            for (b2, slot) in row.iter_mut().enumerate() {
                for a1 in 0..2 {
                    for a2 in 0..2 {
                        *slot += v[a1].conj() * v[a2] * at(rho, a1, b1, a2, b2);
                    }
                }
            }
        }
        let p = blk[0][0].re + blk[1][1].re;
        if p > 1e-14 {
            h += xlogx(p);
            // S(ρ/p) = S(ρ)/p + log p
            cond += entropy2(blk[0][0], blk[0][1], blk[1][1]) - xlogx(p);
        }
    }
    (h, cond)
}

pub fn reduce_a(rho: &M) -> M {
    M::from_fn(2, 2, |i, j| at(rho, i, 0, j, 0) + at(rho, i, 1, j, 1))
}

pub fn reduce_b(rho: &M) -> M {
    M::from_fn(2, 2, |i, j| at(rho, 0, i, 0, j) + at(rho, 1, i, 1, j))
}

/// Minimum of D₁ and D₂ for qubit A over an `n × n` grid in (θ, φ).
pub fn grid_discord(rho: &M, n: usize) -> (f64, f64) {
    let sa = entropy(&reduce_a(rho));
    let sab = entropy(rho);
    let mut d1 = f64::INFINITY;
    let mut d2 = f64::INFINITY;
    for i in 0..n {
        let theta = std::f64::consts::PI * i as f64 / (n - 1) as f64;
        for j in 0..n {
            let phi = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
            let (h, cond) = measured_entropies(rho, theta, phi);
            d1 = d1.min(sa + cond - sab);
            d2 = d2.min(h + cond - sab);
        }
    }
    (d1, d2)
}

pub fn kron(a: &M, b: &M) -> M {
    a.kronecker(b)
}

pub fn ket_projector(v: &[Complex64]) -> M {
    let n = v.len();
    M::from_fn(n, n, |i, j| v[i] * v[j].conj())
}

/// CNOT with control B (second factor) and target A (first factor).
#[rustfmt::skip]
pub fn cnot_target_a() -> M {
    real(
        4,
        &[
            1.0, 0.0, 0.0, 0.0,
            0.0, 0.0, 0.0, 1.0,
            0.0, 0.0, 1.0, 0.0,
            0.0, 1.0, 0.0, 0.0,
        ],
    )
}

pub fn phi_plus() -> M {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ket_projector(&[cx(s, 0.0), cx(0.0, 0.0), cx(0.0, 0.0), cx(s, 0.0)])
}
