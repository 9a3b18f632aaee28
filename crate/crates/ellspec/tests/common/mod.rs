//! Shared test support: independent eigenvalue oracles and seeded
//! samplers. Everything here deliberately avoids the library's QL /
//! Householder code paths so it can serve as a cross-check.

#![allow(dead_code)]
// index-style loops keep the matrix kernels close to their math
#![allow(clippy::needless_range_loop)]

use ellspec::eigensolve::{DenseSymmetricMatrix, SymmetricTridiagonal};
use ellspec::geometry::Ellipsoid;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Number of eigenvalues of the tridiagonal matrix strictly below
/// `lambda`, counted through the signs of the LDLᵀ pivots.
pub fn sturm_count(diag: &[f64], off: &[f64], lambda: f64) -> usize {
    let scale = diag
        .iter()
        .chain(off.iter())
        .fold(1e-300_f64, |acc, &v| acc.max(v.abs()));
    let guard = f64::EPSILON * scale;
    let mut count = 0;
    let mut q = diag[0] - lambda;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        let q_safe = if q.abs() < guard {
            if q < 0.0 {
                -guard
            } else {
                guard
            }
        } else {
            q
        };
        q = (diag[i] - lambda) - off[i - 1] * off[i - 1] / q_safe;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// All eigenvalues by Sturm-sequence bisection inside Gershgorin bounds.
/// Independent of the library's QL iteration.
pub fn sturm_bisection_eigenvalues(m: &SymmetricTridiagonal) -> Vec<f64> {
    let diag = m.diag();
    let off = m.offdiag();
    let n = diag.len();
    let mut lo = f64::MAX;
    let mut hi = f64::MIN;
    for i in 0..n {
        let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
        let right = if i < n - 1 { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - left - right);
        hi = hi.max(diag[i] + left + right);
    }
    lo -= 1.0;
    hi += 1.0;

    (0..n)
        .map(|k| {
            let (mut a, mut b) = (lo, hi);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if (b - a) < f64::EPSILON * mid.abs().max(1.0) {
                    break;
                }
                if sturm_count(diag, off, mid) <= k {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            0.5 * (a + b)
        })
        .collect()
}

/// Cyclic Jacobi eigendecomposition of a dense symmetric matrix;
/// returns ascending eigenvalues with matching eigenvector columns.
pub fn jacobi_eigen(a: &DenseSymmetricMatrix) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.dim();
    let mut m: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| a.get(i, j)).collect())
        .collect();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let scale = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .fold(1e-300_f64, |acc, (i, j)| acc.max(m[i][j].abs()));

    for _sweep in 0..100 {
        let mut off2 = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off2 += m[i][j] * m[i][j];
            }
        }
        if off2.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if m[p][q].abs() <= 1e-300 {
                    continue;
                }
                let phi = 0.5 * (2.0 * m[p][q]).atan2(m[q][q] - m[p][p]);
                let (s, c) = phi.sin_cos();
                for k in 0..n {
                    let (mkp, mkq) = (m[k][p], m[k][q]);
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[p][k], m[q][k]);
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                for row in v.iter_mut() {
                    let (vp, vq) = (row[p], row[q]);
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i][i].partial_cmp(&m[j][j]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| m[i][i]).collect();
    let vectors: Vec<Vec<f64>> = order
        .iter()
        .map(|&col| (0..n).map(|row| v[row][col]).collect())
        .collect();
    (values, vectors)
}

/// Test-local Cholesky factor (lower, row-major), `None` if not PD.
pub fn cholesky(a: &DenseSymmetricMatrix) -> Option<Vec<f64>> {
    let n = a.dim();
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut sum = a.get(i, j);
            for k in 0..j {
                sum -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if sum <= 0.0 {
                    return None;
                }
                l[i * n + i] = sum.sqrt();
            } else {
                l[i * n + j] = sum / l[j * n + j];
            }
        }
    }
    Some(l)
}

/// Solves the symmetric pencil `S v = Λ M v` entirely with test-local
/// machinery (Cholesky + Jacobi): ascending eigenvalues and vectors.
pub fn jacobi_generalized(
    s: &DenseSymmetricMatrix,
    m: &DenseSymmetricMatrix,
) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = s.dim();
    let l = cholesky(m).expect("mass matrix must be positive definite");
    // C = L⁻¹ S L⁻ᵀ
    let mut w = vec![0.0; n * n];
    for j in 0..n {
        let mut col: Vec<f64> = (0..n).map(|i| s.get(i, j)).collect();
        forward_solve(&l, n, &mut col);
        for i in 0..n {
            w[i * n + j] = col[i];
        }
    }
    let mut c = vec![0.0; n * n];
    for j in 0..n {
        let mut col = w[j * n..(j + 1) * n].to_vec();
        forward_solve(&l, n, &mut col);
        for i in 0..n {
            c[i * n + j] = col[i];
        }
    }
    for i in 0..n {
        for j in 0..i {
            let avg = 0.5 * (c[i * n + j] + c[j * n + i]);
            c[i * n + j] = avg;
            c[j * n + i] = avg;
        }
    }
    let c = DenseSymmetricMatrix::new(n, c).expect("symmetrized");
    let (values, u_vecs) = jacobi_eigen(&c);
    // v = L⁻ᵀ u
    let vectors = u_vecs
        .into_iter()
        .map(|mut u| {
            back_solve_transposed(&l, n, &mut u);
            u
        })
        .collect();
    (values, vectors)
}

fn forward_solve(l: &[f64], n: usize, b: &mut [f64]) {
    for i in 0..n {
        let mut sum = b[i];
        for k in 0..i {
            sum -= l[i * n + k] * b[k];
        }
        b[i] = sum / l[i * n + i];
    }
}

/// Solves `Lᵀ x = b` in place.
fn back_solve_transposed(l: &[f64], n: usize, b: &mut [f64]) {
    for i in (0..n).rev() {
        let mut sum = b[i];
        for k in (i + 1)..n {
            sum -= l[k * n + i] * b[k];
        }
        b[i] = sum / l[i * n + i];
    }
}

pub fn matvec(a: &DenseSymmetricMatrix, x: &[f64]) -> Vec<f64> {
    let n = a.dim();
    (0..n)
        .map(|i| (0..n).map(|j| a.get(i, j) * x[j]).sum())
        .collect()
}

pub fn frobenius_norm(a: &DenseSymmetricMatrix) -> f64 {
    let n = a.dim();
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| a.get(i, j) * a.get(i, j))
        .sum::<f64>()
        .sqrt()
}

pub fn random_tridiag(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> SymmetricTridiagonal {
    let diag: Vec<f64> = (0..n).map(|_| rng.gen_range(-scale..scale)).collect();
    let off: Vec<f64> = (0..n.saturating_sub(1))
        .map(|_| rng.gen_range(-scale..scale))
        .collect();
    SymmetricTridiagonal::new(diag, off).unwrap()
}

pub fn random_ellipsoid(rng: &mut ChaCha8Rng) -> Ellipsoid {
    Ellipsoid::new(
        rng.gen_range(0.01..=2.0),
        rng.gen_range(0.01..=2.0),
        rng.gen_range(0.01..=2.0),
    )
    .unwrap()
}

/// Random triple from the triaxial admissibility region
/// `0 > α > β > γ > α + β` (strict interior).
pub fn random_admissible_triaxial(rng: &mut ChaCha8Rng) -> (f64, f64, f64) {
    let alpha: f64 = rng.gen_range(-1.0..=-0.05);
    let t: f64 = rng.gen_range(0.05..=0.95);
    let beta = alpha * (1.0 + t);
    let u: f64 = rng.gen_range(0.05..=0.95);
    let gamma = (alpha + beta) - u * alpha;
    debug_assert!(alpha < 0.0 && alpha > beta && beta > gamma && gamma > alpha + beta);
    (alpha, beta, gamma)
}
