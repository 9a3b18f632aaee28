//! Real-symmetric eigenvalue machinery: an implicit-shift QL solver for
//! symmetric tridiagonal matrices, positive-definiteness tests, and a
//! dense generalized symmetric solver built from Cholesky reduction and
//! Householder tridiagonalization.
//!
//! All routines are pure and deterministic: the same input always yields
//! the same bits.

use serde::Serialize;

use crate::{Error, Result};

/// Absolute floor applied to matrix scales so tolerances stay meaningful
/// on the zero matrix.
pub const SCALE_FLOOR: f64 = 1e-300;

const MAX_QL_SWEEPS: usize = 64;

/// Symmetric tridiagonal matrix stored as its main diagonal and the
/// single off-diagonal (length one less).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymmetricTridiagonal {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl SymmetricTridiagonal {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || offdiag.len() + 1 != diag.len() {
            return Err(Error::MalformedTridiagonal {
                diag: diag.len(),
                offdiag: offdiag.len(),
            });
        }
        if diag.iter().chain(offdiag.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("tridiagonal matrix"));
        }
        Ok(Self { diag, offdiag })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    pub fn trace(&self) -> f64 {
        self.diag.iter().sum()
    }

    /// Largest absolute entry, floored at [`SCALE_FLOOR`].
    pub fn scale(&self) -> f64 {
        self.diag
            .iter()
            .chain(self.offdiag.iter())
            .fold(SCALE_FLOOR, |acc, &v| acc.max(v.abs()))
    }
}

/// All eigenvalues of a symmetric tridiagonal matrix, ascending.
///
/// Implicit-shift QL iteration; a matrix with zero off-diagonal returns
/// its diagonal sorted, bit-exact.
pub fn tridiag_eigenvalues(m: &SymmetricTridiagonal) -> Vec<f64> {
    let n = m.dim();
    let mut d = m.diag.clone();
    if n == 1 {
        return d;
    }
    let mut e = m.offdiag.clone();
    e.push(0.0);

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            // boundary of the unreduced block starting at l
            let mut blk = l;
            while blk + 1 < n {
                let dd = d[blk].abs() + d[blk + 1].abs();
                if e[blk].abs() <= f64::EPSILON * dd {
                    break;
                }
                blk += 1;
            }
            if blk == l {
                break;
            }
            sweeps += 1;
            assert!(sweeps <= MAX_QL_SWEEPS, "QL iteration failed to converge");

            // Wilkinson-style shift from the leading 2x2
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[blk] - d[l] + e[l] / (g + r.copysign(g));

            let (mut s, mut c, mut p) = (1.0_f64, 1.0_f64, 0.0_f64);
            let mut deflated = false;
            for i in (l..blk).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[blk] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[blk] = 0.0;
        }
    }

    d.sort_by(|a, b| a.partial_cmp(b).unwrap());
    d
}

/// Exact positive-definiteness via the leading-principal-minor
/// recurrence `d_i = r_i d_{i−1} − s_{i−1}² d_{i−2}`, rescaled on the fly
/// so only the signs are tracked. Equivalent to Cholesky succeeding.
pub fn is_positive_definite_exact(m: &SymmetricTridiagonal) -> bool {
    let diag = m.diag();
    let off = m.offdiag();
    let mut prev = 1.0_f64;
    let mut cur = diag[0];
    if cur <= 0.0 {
        return false;
    }
    for i in 1..diag.len() {
        let next = diag[i] * cur - off[i - 1] * off[i - 1] * prev;
        if next <= 0.0 {
            return false;
        }
        prev = cur;
        cur = next;
        let mag = cur.max(prev);
        if !(1e-100..=1e100).contains(&mag) {
            prev /= mag;
            cur /= mag;
        }
    }
    true
}

/// Sufficient positive-definiteness test for symmetric tridiagonal
/// matrices with positive diagonal: every off-diagonal entry must
/// satisfy `s_i² < r_i r_{i+1} / (4 cos²(π/(n+1)))`. For `n = 1` this
/// reduces to a positive diagonal.
pub fn andelic_fonseca_sufficient(m: &SymmetricTridiagonal) -> bool {
    if m.diag().iter().any(|&r| r <= 0.0) {
        return false;
    }
    let n = m.dim();
    if n == 1 {
        return true;
    }
    let cos = (std::f64::consts::PI / (n as f64 + 1.0)).cos();
    let factor = 1.0 / (4.0 * cos * cos);
    m.offdiag()
        .iter()
        .zip(m.diag().windows(2))
        .all(|(&s, rr)| s * s < factor * rr[0] * rr[1])
}

/// Outcome of both positive-definiteness tests. The sufficient test
/// never holds when the exact one fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PdVerdict {
    pub exact: bool,
    pub sufficient: bool,
}

pub fn pd_verdict(m: &SymmetricTridiagonal) -> PdVerdict {
    PdVerdict {
        exact: is_positive_definite_exact(m),
        sufficient: andelic_fonseca_sufficient(m),
    }
}

/// Dense symmetric matrix in row-major storage.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseSymmetricMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseSymmetricMatrix {
    /// Validates shape, finiteness and symmetry (within `1e-12` of the
    /// largest absolute entry).
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        if n == 0 || data.len() != n * n {
            return Err(Error::DimensionMismatch {
                left: n * n,
                right: data.len(),
            });
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("dense matrix"));
        }
        let scale = data.iter().fold(SCALE_FLOOR, |acc, &v| acc.max(v.abs()));
        for i in 0..n {
            for j in (i + 1)..n {
                let (aij, aji) = (data[i * n + j], data[j * n + i]);
                if (aij - aji).abs() > 1e-12 * scale {
                    return Err(Error::NotSymmetric { i, j, aij, aji });
                }
            }
        }
        Ok(Self { n, data })
    }

    /// Builds a symmetric matrix from its lower triangle: `f(i, j)` is
    /// evaluated once per `i ≥ j` and mirrored.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let v = f(i, j);
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        Self { n, data }
    }

    pub(crate) fn from_parts(n: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), n * n);
        Self { n, data }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }
}

/// Lower Cholesky factor as a row-major `n × n` matrix (upper part zero),
/// or `None` when the matrix is not positive definite.
pub(crate) fn cholesky_lower(m: &DenseSymmetricMatrix) -> Option<Vec<f64>> {
    let n = m.n;
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut sum = m.get(i, j);
            for k in 0..j {
                sum -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if !(sum.is_finite() && sum > 0.0) {
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

/// Solves `L x = b` in place for lower-triangular `L`.
fn forward_solve(l: &[f64], n: usize, b: &mut [f64]) {
    for i in 0..n {
        let mut sum = b[i];
        for k in 0..i {
            sum -= l[i * n + k] * b[k];
        }
        b[i] = sum / l[i * n + i];
    }
}

/// Householder reduction of a dense symmetric matrix to tridiagonal form
/// (diagonal, off-diagonal); eigenvector accumulation is omitted since no
/// consumer needs vectors.
fn householder_tridiagonalize(a: &DenseSymmetricMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = a.n;
    let mut a = a.data.clone();
    let mut e = vec![0.0_f64; n];

    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0_f64;
        if l > 0 {
            let scale: f64 = (0..=l).map(|k| a[i * n + k].abs()).sum();
            if scale == 0.0 {
                e[i] = a[i * n + l];
            } else {
                for k in 0..=l {
                    a[i * n + k] /= scale;
                    h += a[i * n + k] * a[i * n + k];
                }
                let f = a[i * n + l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[i * n + l] = f - g;
                let mut f_acc = 0.0;
                for j in 0..=l {
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += a[j * n + k] * a[i * n + k];
                    }
                    for k in (j + 1)..=l {
                        g += a[k * n + j] * a[i * n + k];
                    }
                    e[j] = g / h;
                    f_acc += e[j] * a[i * n + j];
                }
                let hh = f_acc / (h + h);
                for j in 0..=l {
                    let f = a[i * n + j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[j * n + k] -= f * e[k] + g * a[i * n + k];
                    }
                }
            }
        } else {
            e[i] = a[i * n + l];
        }
        let _ = h;
    }

    let diag: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    let offdiag: Vec<f64> = e[1..].to_vec();
    (diag, offdiag)
}

/// Eigenvalues of a dense symmetric matrix, ascending.
pub fn dense_symmetric_eigenvalues(a: &DenseSymmetricMatrix) -> Vec<f64> {
    if a.n == 1 {
        return vec![a.get(0, 0)];
    }
    let (diag, offdiag) = householder_tridiagonalize(a);
    let tri = SymmetricTridiagonal::new(diag, offdiag).expect("reduction preserves shape");
    tridiag_eigenvalues(&tri)
}

/// Eigenvalues of the symmetric pencil `S v = Λ M v`, ascending.
///
/// `M` must be positive definite; the pencil is reduced to a standard
/// symmetric problem through the Cholesky factor of `M`.
pub fn dense_generalized_eigenvalues(
    stiffness: &DenseSymmetricMatrix,
    mass: &DenseSymmetricMatrix,
) -> Result<Vec<f64>> {
    let n = stiffness.n;
    if mass.n != n {
        return Err(Error::DimensionMismatch {
            left: n,
            right: mass.n,
        });
    }
    let l = cholesky_lower(mass).ok_or(Error::MassNotPositiveDefinite)?;

    // W = L⁻¹ S, column by column
    let mut w = vec![0.0; n * n];
    let mut col = vec![0.0; n];
    for j in 0..n {
        for (i, c) in col.iter_mut().enumerate() {
            *c = stiffness.get(i, j);
        }
        forward_solve(&l, n, &mut col);
        for i in 0..n {
            w[i * n + j] = col[i];
        }
    }
    // column j of C = L⁻¹ (row j of W); C is symmetric
    let mut c = vec![0.0; n * n];
    for j in 0..n {
        col.copy_from_slice(&w[j * n..(j + 1) * n]);
        forward_solve(&l, n, &mut col);
        for i in 0..n {
            c[i * n + j] = col[i];
        }
    }
    // clean the rounding asymmetry from the two triangular solves
    for i in 0..n {
        for j in 0..i {
            let avg = 0.5 * (c[i * n + j] + c[j * n + i]);
            c[i * n + j] = avg;
            c[j * n + i] = avg;
        }
    }

    Ok(dense_symmetric_eigenvalues(&DenseSymmetricMatrix::from_parts(n, c)))
}
