#![allow(dead_code)]

//! Test-only oracles. Nothing here calls the SVD or norming-set code it is
//! used to check.

use num_complex::Complex64;
use opgeo_core::linalg::ComplexMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

/// 2×2 unitary `e^{iφ}[[e^{iψ}cosθ, e^{iχ}sinθ], [−e^{−iχ}sinθ, e^{−iψ}cosθ]]`.
pub fn su2(theta: f64, psi: f64, chi: f64, phi: f64) -> [[Complex64; 2]; 2] {
    let g = Complex64::from_polar(1.0, phi);
    let (s, c) = theta.sin_cos();
    [
        [g * Complex64::from_polar(c, psi), g * Complex64::from_polar(s, chi)],
        [-g * Complex64::from_polar(s, -chi), g * Complex64::from_polar(c, -psi)],
    ]
}

/// Point of the trace-norm unit sphere of `M_2`: `a = P diag(s, 1−s) Q*`
/// with `s = sin²(p0)`. Every such `a` has `‖a‖₁ = 1` by construction.
pub fn sphere_point(p: &[f64; 9]) -> [[Complex64; 2]; 2] {
    let s = p[0].sin().powi(2);
    let d = [s, 1.0 - s];
    let pm = su2(p[1], p[2], p[3], p[4]);
    let qm = su2(p[5], p[6], p[7], p[8]);
    let mut a = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for (k, dk) in d.iter().enumerate() {
                a[i][j] += pm[i][k] * dk * qm[j][k].conj();
            }
        }
    }
    a
}

fn objective(p: &[f64; 9], x: &[[Complex64; 2]; 2]) -> f64 {
    let a = sphere_point(p);
    let mut t = Complex64::new(0.0, 0.0);
    for i in 0..2 {
        for k in 0..2 {
            t += a[i][k] * x[k][i];
        }
    }
    t.re
}

/// Compass search from `start`, maximising `Re tr(a x)`.
pub fn refine(start: [f64; 9], x: &[[Complex64; 2]; 2], step0: f64) -> ([f64; 9], f64) {
    let mut best = start;
    let mut value = objective(&best, x);
    let mut step = step0;
    while step > 1e-13 {
        let mut improved = false;
        for d in 0..9 {
            for sign in [1.0, -1.0] {
                let mut trial = best;
                trial[d] += sign * step;
                let v = objective(&trial, x);
                if v > value {
                    value = v;
                    best = trial;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (best, value)
}

/// Dense search over the trace-norm sphere of `M_2`: a regular grid with
/// `per_dim` points in each of the nine parameters, followed by local
/// refinement of the best `keep` grid points. Returns the refined
/// maximisers as densities together with their objective values.
pub fn brute_force_maximisers(x: &ComplexMatrix, per_dim: usize, keep: usize) -> Vec<(ComplexMatrix, f64)> {
    let xm = [[x[(0, 0)], x[(0, 1)]], [x[(1, 0)], x[(1, 1)]]];
    let ranges: [f64; 9] = [
        std::f64::consts::FRAC_PI_2,
        std::f64::consts::FRAC_PI_2,
        std::f64::consts::TAU,
        std::f64::consts::TAU,
        std::f64::consts::TAU,
        std::f64::consts::FRAC_PI_2,
        std::f64::consts::TAU,
        std::f64::consts::TAU,
        std::f64::consts::TAU,
    ];
    let total = per_dim.pow(9);
    let mut scored: Vec<(f64, [f64; 9])> = Vec::with_capacity(total);
    for idx in 0..total {
        let mut rem = idx;
        let mut p = [0.0; 9];
        for d in 0..9 {
            let k = rem % per_dim;
            rem /= per_dim;
            p[d] = (k as f64 + 0.5) / per_dim as f64 * ranges[d];
        }
        scored.push((objective(&p, &xm), p));
    }
    scored.sort_by(|a, b| b.0.total_cmp(&a.0));
    scored
        .iter()
        .take(keep)
        .map(|(_, p)| {
            let (best, value) = refine(*p, &xm, 0.5 / per_dim as f64);
            (to_matrix(&sphere_point(&best)), value)
        })
        .collect()
}

/// Random-start projection search: `count` independent local maximisations.
pub fn random_start_maximisers(x: &ComplexMatrix, count: usize, rng: &mut impl Rng) -> Vec<(ComplexMatrix, f64)> {
    let xm = [[x[(0, 0)], x[(0, 1)]], [x[(1, 0)], x[(1, 1)]]];
    (0..count)
        .map(|_| {
            let mut p = [0.0; 9];
            for v in p.iter_mut() {
                *v = rng.random::<f64>() * std::f64::consts::TAU;
            }
            let (best, value) = refine(p, &xm, 0.5);
            (to_matrix(&sphere_point(&best)), value)
        })
        .collect()
}

fn to_matrix(a: &[[Complex64; 2]; 2]) -> ComplexMatrix {
    ComplexMatrix::new(2, 2, vec![a[0][0], a[0][1], a[1][0], a[1][1]]).unwrap()
}

/// Haar-ish unitary by Gram–Schmidt on a complex Gaussian matrix.
pub fn gaussian_unitary(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::new();
    while cols.len() < n {
        let mut v: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        for c in &cols {
            let proj: Complex64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, ci) in v.iter_mut().zip(c) {
                *vi -= proj * ci;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            cols.push(v.iter().map(|z| z / norm).collect());
        }
    }
    ComplexMatrix::from_columns(n, &cols)
}

/// `U diag(σ) V*` for random unitaries `U`, `V`.
pub fn with_singular_values(sigma: &[f64], rng: &mut impl Rng) -> ComplexMatrix {
    let n = sigma.len();
    let u = gaussian_unitary(n, rng);
    let v = gaussian_unitary(n, rng);
    &(&u * &ComplexMatrix::from_diag(sigma)) * &v.adjoint()
}
