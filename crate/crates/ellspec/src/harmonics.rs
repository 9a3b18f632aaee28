//! Normalized associated Legendre functions and their polar derivatives.
//!
//! `p(l, m; x)` is normalized so that `∫_{-1}^{1} p(l,m;x)² dx = 1`; the
//! Condon–Shortley phase is dropped (sign conventions are irrelevant for
//! a Galerkin basis). Everything is evaluated at interior points only
//! (`|x| < 1`), which the Gauss–Legendre grid guarantees.

/// Index of `(l, m)` in a triangular table with `0 ≤ m ≤ l ≤ degree`.
#[inline]
pub fn tri_index(l: usize, m: usize) -> usize {
    l * (l + 1) / 2 + m
}

/// Values and θ-derivatives of all normalized associated Legendre
/// functions up to `degree` at a fixed polar angle.
pub struct LegendreTable {
    pub values: Vec<f64>,
    pub dtheta: Vec<f64>,
}

impl LegendreTable {
    pub fn value(&self, l: usize, m: usize) -> f64 {
        self.values[tri_index(l, m)]
    }

    pub fn dtheta(&self, l: usize, m: usize) -> f64 {
        self.dtheta[tri_index(l, m)]
    }
}

/// Evaluates the table at `x = cosθ` (interior point, `sinθ > 0`).
pub fn legendre_table(degree: usize, x: f64) -> LegendreTable {
    let s = (1.0 - x * x).sqrt();
    assert!(s > 0.0, "polar nodes must avoid the poles");
    let len = tri_index(degree, degree) + 1;
    let mut v = vec![0.0_f64; len];
    v[tri_index(0, 0)] = std::f64::consts::FRAC_1_SQRT_2;

    for m in 1..=degree {
        let mf = m as f64;
        v[tri_index(m, m)] =
            ((2.0 * mf + 1.0) / (2.0 * mf)).sqrt() * s * v[tri_index(m - 1, m - 1)];
    }
    for m in 0..degree {
        let mf = m as f64;
        v[tri_index(m + 1, m)] = (2.0 * mf + 3.0).sqrt() * x * v[tri_index(m, m)];
    }
    for m in 0..=degree {
        for l in (m + 2)..=degree {
            let (lf, mf) = (l as f64, m as f64);
            let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
            let prev = lf - 1.0;
            let b = ((prev * prev - mf * mf) / (4.0 * prev * prev - 1.0)).sqrt();
            v[tri_index(l, m)] =
                a * (x * v[tri_index(l - 1, m)] - b * v[tri_index(l - 2, m)]);
        }
    }

    // dθ p(l,m) = (l x p(l,m) − √((l²−m²)(2l+1)/(2l−1)) p(l−1,m)) / sinθ
    let mut d = vec![0.0_f64; len];
    for m in 0..=degree {
        for l in m..=degree {
            let (lf, mf) = (l as f64, m as f64);
            let mut num = lf * x * v[tri_index(l, m)];
            if l > m {
                let c = ((lf * lf - mf * mf) * (2.0 * lf + 1.0) / (2.0 * lf - 1.0)).sqrt();
                num -= c * v[tri_index(l - 1, m)];
            }
            d[tri_index(l, m)] = num / s;
        }
    }

    LegendreTable {
        values: v,
        dtheta: d,
    }
}
