//! Independent ground truth: a Galerkin discretization of the
//! Laplace–Beltrami operator on the actual ellipsoid surface.
//!
//! The surface is parametrized over the sphere by
//! `(θ, φ) ↦ (A sinθ cosφ, B sinθ sinφ, C cosθ)` and the operator is
//! projected onto real spherical harmonics transported through that map.
//! Stiffness and mass integrals use Gauss–Legendre nodes in `cosθ`
//! (which keeps every node away from the poles) and a uniform grid in
//! `φ`. On the round sphere the basis is invariant, so the discrete
//! spectrum reproduces `l(l+1)` to quadrature accuracy; on nearby
//! ellipsoids the leading eigenvalues converge spectrally.

use rayon::prelude::*;
use serde::Serialize;

use crate::eigensolve::{dense_generalized_eigenvalues, DenseSymmetricMatrix};
use crate::geometry::{ellipsoid_from_params, Ellipsoid};
use crate::harmonics::legendre_table;
use crate::quadrature::gauss_legendre;
use crate::{Error, Result};

/// Resolution of the Galerkin discretization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GalerkinConfig {
    /// Maximum spherical-harmonic degree of the trial space.
    pub basis_degree: usize,
    /// Gauss–Legendre nodes in the polar direction.
    pub n_theta: usize,
    /// Uniform nodes in the azimuthal direction.
    pub n_phi: usize,
}

impl GalerkinConfig {
    /// Default node counts for a given degree: `2d+2` polar and `4d+4`
    /// azimuthal nodes, comfortably above the exactness floor.
    pub fn with_degree(basis_degree: usize) -> Self {
        Self {
            basis_degree,
            n_theta: 2 * basis_degree + 2,
            n_phi: 4 * basis_degree + 4,
        }
    }

    /// Exactness floor: `n_theta ≥ degree+1`, `n_phi ≥ 2·degree+1`.
    pub fn validate(&self) -> Result<()> {
        let min_theta = self.basis_degree + 1;
        let min_phi = 2 * self.basis_degree + 1;
        if self.basis_degree < 1 || self.n_theta < min_theta || self.n_phi < min_phi {
            return Err(Error::QuadratureTooCoarse {
                n_theta: self.n_theta,
                n_phi: self.n_phi,
                min_theta,
                min_phi,
            });
        }
        Ok(())
    }

    pub fn basis_size(&self) -> usize {
        (self.basis_degree + 1) * (self.basis_degree + 1)
    }

    /// Conservative count of leading eigenvalues resolved to requested
    /// accuracy: `(degree − 2)²`.
    pub fn trusted_count(&self) -> usize {
        self.basis_degree.saturating_sub(2).pow(2).min(self.basis_size())
    }
}

impl Default for GalerkinConfig {
    fn default() -> Self {
        Self::with_degree(12)
    }
}

/// Discrete spectrum of the Laplace–Beltrami operator on one ellipsoid.
#[derive(Clone, Debug, Serialize)]
pub struct OracleSpectrum {
    pub eigenvalues: Vec<f64>,
    pub config: GalerkinConfig,
    pub ellipsoid: Ellipsoid,
    pub trusted_count: usize,
}

/// One basis function: degree, order, and trig flavor.
#[derive(Clone, Copy)]
struct BasisFn {
    l: usize,
    m: usize,
    sine: bool,
}

fn basis_list(degree: usize) -> Vec<BasisFn> {
    let mut out = Vec::with_capacity((degree + 1) * (degree + 1));
    for l in 0..=degree {
        for m in 0..=l {
            out.push(BasisFn { l, m, sine: false });
            if m > 0 {
                out.push(BasisFn { l, m, sine: true });
            }
        }
    }
    out
}

/// Galerkin spectrum of `−Δ` on the ellipsoid, ascending. The first
/// eigenvalue is zero (constants) up to quadrature rounding.
pub fn laplace_beltrami_spectrum(e: &Ellipsoid, cfg: &GalerkinConfig) -> Result<OracleSpectrum> {
    cfg.validate()?;
    let degree = cfg.basis_degree;
    let nb = cfg.basis_size();
    let np = cfg.n_theta * cfg.n_phi;
    let basis = basis_list(degree);
    debug_assert_eq!(basis.len(), nb);

    let (nodes, gl_weights) = gauss_legendre(cfg.n_theta);
    let phi_weight = 2.0 * std::f64::consts::PI / cfg.n_phi as f64;
    let (a2, b2, c2) = (e.a() * e.a(), e.b() * e.b(), e.c() * e.c());

    // Per-point metric coefficients folded with quadrature weights:
    // mass carries √det g, stiffness carries g^{ij}·√det g.
    let mut w_mass = vec![0.0_f64; np];
    let mut w_tt = vec![0.0_f64; np];
    let mut w_tp = vec![0.0_f64; np];
    let mut w_pp = vec![0.0_f64; np];
    // Basis tables, one contiguous row of point values per function.
    let mut val = vec![0.0_f64; nb * np];
    let mut dth = vec![0.0_f64; nb * np];
    let mut dph = vec![0.0_f64; nb * np];

    let norm0 = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
    let norm_m = 1.0 / std::f64::consts::PI.sqrt();

    for (ti, (&x, &gw)) in nodes.iter().zip(&gl_weights).enumerate() {
        let sin_t = (1.0 - x * x).sqrt();
        let cos_t = x;
        let table = legendre_table(degree, x);
        // dθ = dx / sinθ
        let point_weight = gw / sin_t;

        for pj in 0..cfg.n_phi {
            let p = ti * cfg.n_phi + pj;
            let phi = 2.0 * std::f64::consts::PI * pj as f64 / cfg.n_phi as f64;
            let (sin_p, cos_p) = phi.sin_cos();

            let g_tt = cos_t * cos_t * (a2 * cos_p * cos_p + b2 * sin_p * sin_p)
                + c2 * sin_t * sin_t;
            let g_tp = (b2 - a2) * sin_t * cos_t * sin_p * cos_p;
            let g_pp = sin_t * sin_t * (a2 * sin_p * sin_p + b2 * cos_p * cos_p);
            let det = g_tt * g_pp - g_tp * g_tp;
            let sqrt_det = det.sqrt();
            let w = point_weight * phi_weight;

            w_mass[p] = w * sqrt_det;
            w_tt[p] = w * g_pp / sqrt_det;
            w_tp[p] = -w * g_tp / sqrt_det;
            w_pp[p] = w * g_tt / sqrt_det;

            let mut cos_m = vec![0.0_f64; degree + 1];
            let mut sin_m = vec![0.0_f64; degree + 1];
            for (m, (c, s)) in cos_m.iter_mut().zip(sin_m.iter_mut()).enumerate() {
                let arg = m as f64 * phi;
                *c = arg.cos();
                *s = arg.sin();
            }

            for (bi, bf) in basis.iter().enumerate() {
                let norm = if bf.m == 0 { norm0 } else { norm_m };
                let plm = table.value(bf.l, bf.m) * norm;
                let dplm = table.dtheta(bf.l, bf.m) * norm;
                let mf = bf.m as f64;
                let (trig, dtrig) = if bf.sine {
                    (sin_m[bf.m], mf * cos_m[bf.m])
                } else {
                    (cos_m[bf.m], -mf * sin_m[bf.m])
                };
                val[bi * np + p] = plm * trig;
                dth[bi * np + p] = dplm * trig;
                dph[bi * np + p] = plm * dtrig;
            }
        }
    }

    // Lower-triangle assembly, one row per task; every entry is an
    // order-fixed sum over points, so the result does not depend on the
    // parallel schedule.
    let rows: Vec<(Vec<f64>, Vec<f64>)> = (0..nb)
        .into_par_iter()
        .map(|i| {
            let vi = &val[i * np..(i + 1) * np];
            let ti = &dth[i * np..(i + 1) * np];
            let pi = &dph[i * np..(i + 1) * np];
            let mut s_row = vec![0.0_f64; i + 1];
            let mut m_row = vec![0.0_f64; i + 1];
            for (j, (s_out, m_out)) in s_row.iter_mut().zip(m_row.iter_mut()).enumerate() {
                let vj = &val[j * np..(j + 1) * np];
                let tj = &dth[j * np..(j + 1) * np];
                let pj = &dph[j * np..(j + 1) * np];
                let mut s_acc = 0.0;
                let mut m_acc = 0.0;
                for p in 0..np {
                    s_acc += w_tt[p] * ti[p] * tj[p]
                        + w_tp[p] * (ti[p] * pj[p] + pi[p] * tj[p])
                        + w_pp[p] * pi[p] * pj[p];
                    m_acc += w_mass[p] * vi[p] * vj[p];
                }
                *s_out = s_acc;
                *m_out = m_acc;
            }
            (s_row, m_row)
        })
        .collect();

    let mut s_data = vec![0.0_f64; nb * nb];
    let mut m_data = vec![0.0_f64; nb * nb];
    for (i, (s_row, m_row)) in rows.into_iter().enumerate() {
        for (j, (s, m)) in s_row.into_iter().zip(m_row).enumerate() {
            s_data[i * nb + j] = s;
            s_data[j * nb + i] = s;
            m_data[i * nb + j] = m;
            m_data[j * nb + i] = m;
        }
    }

    let stiffness = DenseSymmetricMatrix::from_parts(nb, s_data);
    let mass = DenseSymmetricMatrix::from_parts(nb, m_data);
    let eigenvalues = dense_generalized_eigenvalues(&stiffness, &mass)?;

    Ok(OracleSpectrum {
        eigenvalues,
        config: *cfg,
        ellipsoid: *e,
        trusted_count: cfg.trusted_count(),
    })
}

/// Splits a sorted spectrum into the clusters of levels `0..=level_cap`
/// (sizes 1, 3, 5, …) and checks that cluster `l` stays inside
/// `(l², (l+1)²)`, the midpoints towards the neighboring sphere
/// eigenvalues. Returns per-level slices.
fn partition_clusters(eigenvalues: &[f64], level_cap: u32, eps: f64) -> Result<Vec<&[f64]>> {
    let mut out = Vec::with_capacity(level_cap as usize + 1);
    let mut start = 0usize;
    for l in 0..=level_cap {
        let size = 2 * l as usize + 1;
        let cluster = &eigenvalues[start..start + size];
        let lo = (l as f64).powi(2) - 1e-9;
        let hi = ((l + 1) as f64).powi(2);
        for &v in cluster {
            if v < lo {
                return Err(Error::ClusterOverlap {
                    l: l.saturating_sub(1),
                    l_next: l,
                    eps,
                });
            }
            if v >= hi {
                return Err(Error::ClusterOverlap { l, l_next: l + 1, eps });
            }
        }
        out.push(cluster);
        start += size;
    }
    Ok(out)
}

/// Central-difference estimates of the first-order coefficients from
/// oracle spectra at `±ε`: per level `l ≤ level_cap`, the `2l+1` sorted
/// values of `(Λ(ε) − Λ(−ε))/(2ε)`.
///
/// Within a cluster the branches reverse order between `+ε` and `−ε`,
/// so the k-th sorted value at `+ε` pairs with the (2l−k)-th at `−ε`.
pub fn first_order_coefficients(
    alpha: f64,
    beta: f64,
    gamma: f64,
    level_cap: u32,
    eps: f64,
    cfg: &GalerkinConfig,
) -> Result<Vec<Vec<f64>>> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::NonPositiveEpsilon(eps));
    }
    let needed = ((level_cap + 1) * (level_cap + 1)) as usize;
    if needed > cfg.trusted_count() {
        return Err(Error::InsufficientResolution {
            degree: cfg.basis_degree,
            trusted: cfg.trusted_count(),
            level_cap,
            needed,
        });
    }
    let plus = laplace_beltrami_spectrum(&ellipsoid_from_params(alpha, beta, gamma, eps)?, cfg)?;
    let minus = laplace_beltrami_spectrum(&ellipsoid_from_params(-alpha, -beta, -gamma, eps)?, cfg)?;

    let plus_clusters = partition_clusters(&plus.eigenvalues[..needed], level_cap, eps)?;
    let minus_clusters = partition_clusters(&minus.eigenvalues[..needed], level_cap, eps)?;

    let mut out = Vec::with_capacity(level_cap as usize + 1);
    for (pc, mc) in plus_clusters.iter().zip(&minus_clusters) {
        let n = pc.len();
        let mut fd: Vec<f64> = (0..n)
            .map(|k| (pc[k] - mc[n - 1 - k]) / (2.0 * eps))
            .collect();
        fd.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out.push(fd);
    }
    Ok(out)
}
