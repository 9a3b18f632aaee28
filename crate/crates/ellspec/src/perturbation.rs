//! First-order eigenvalue data for the ellipsoid `(1+αε, 1+βε, 1+γε)`.
//!
//! Each sphere eigenvalue `l(l+1)` splits under the perturbation into
//! `2l+1` branches `l(l+1) + λ₁ε + O(ε²)`. When two direction
//! coefficients coincide the `λ₁` are closed-form in `(l, m)`; in the
//! triaxial case they are the eigenvalues of four small symmetric
//! tridiagonal matrices (even/odd azimuthal order, cosine/sine flavor).
//! The matrices are stored so that their eigenvalues are the `λ₁` values
//! directly; no sign flip is needed downstream.

use serde::Serialize;

use crate::eigensolve::{tridiag_eigenvalues, SymmetricTridiagonal};
use crate::geometry::PerturbationParams;
use crate::{Error, Result};

/// Which pair of semi-axes coincides in a biaxial configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BiaxialSymmetry {
    /// Axes `(1+αε, 1+αε, 1+βε)`: the repeated coefficient comes first.
    Aab,
    /// Axes `(1+αε, 1+βε, 1+βε)`: the repeated coefficient comes second.
    Abb,
}

/// The four tridiagonal families carrying the triaxial first-order
/// splittings, indexed by azimuthal parity and trig flavor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixFamily {
    CosEven,
    SinEven,
    CosOdd,
    SinOdd,
}

impl MatrixFamily {
    pub const ALL: [MatrixFamily; 4] = [
        MatrixFamily::CosEven,
        MatrixFamily::SinEven,
        MatrixFamily::CosOdd,
        MatrixFamily::SinOdd,
    ];
}

impl std::fmt::Display for MatrixFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            MatrixFamily::CosEven => "cos-even",
            MatrixFamily::SinEven => "sin-even",
            MatrixFamily::CosOdd => "cos-odd",
            MatrixFamily::SinOdd => "sin-odd",
        };
        f.write_str(name)
    }
}

/// Matrix orders of the four families at a given level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyDims {
    pub cos_even: usize,
    pub sin_even: usize,
    pub cos_odd: usize,
    pub sin_odd: usize,
}

impl FamilyDims {
    pub fn get(&self, family: MatrixFamily) -> usize {
        match family {
            MatrixFamily::CosEven => self.cos_even,
            MatrixFamily::SinEven => self.sin_even,
            MatrixFamily::CosOdd => self.cos_odd,
            MatrixFamily::SinOdd => self.sin_odd,
        }
    }

    pub fn total(&self) -> usize {
        self.cos_even + self.sin_even + self.cos_odd + self.sin_odd
    }
}

/// Identifies one first-order branch: biaxial branches carry their
/// azimuthal order, triaxial branches their family and position.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModeLabel {
    Order { m: i64 },
    Family { family: MatrixFamily, position: usize },
}

/// One first-order coefficient with its provenance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FirstOrderEigenvalue {
    pub level: u32,
    pub label: ModeLabel,
    pub lambda1: f64,
    /// 1 or 2; the closed-form biaxial branches with `m ≠ 0` are double.
    pub multiplicity: u8,
}

/// One assembled eigenvalue `l(l+1) + λ₁ε` of the first-order model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpectrumEntry {
    pub level: u32,
    pub label: ModeLabel,
    pub lambda1: f64,
    pub value: f64,
    pub multiplicity: u8,
    /// Set when the assembled value leaves the window
    /// `[l(l+1)−2l, l(l+1)+2l)` within which the expansion localizes the
    /// cluster, signalling that `ε` is too large for this level.
    pub cluster_flag: bool,
}

/// First-order coefficient `λ₁(l, m)` of a biaxial ellipsoid.
///
/// For [`BiaxialSymmetry::Aab`]:
/// `λ₁ = −2αl(l+1) + (α−β)·2l(l+1)/((2l+3)(2l−1))·(2l²−2m²+2l−1)`;
/// for [`BiaxialSymmetry::Abb`] the same with `α` and `β` interchanged.
/// Depends on `m` only through `m²`.
pub fn biaxial_lambda1(
    l: u32,
    m: i64,
    alpha: f64,
    beta: f64,
    symmetry: BiaxialSymmetry,
) -> Result<f64> {
    if m.unsigned_abs() > u64::from(l) {
        return Err(Error::ModeOutOfRange { l, m });
    }
    let (lead, diff) = match symmetry {
        BiaxialSymmetry::Aab => (alpha, alpha - beta),
        BiaxialSymmetry::Abb => (beta, beta - alpha),
    };
    let lf = f64::from(l);
    let ll1 = lf * (lf + 1.0);
    let den = (2.0 * lf + 3.0) * (2.0 * lf - 1.0);
    let mf = m as f64;
    Ok(-2.0 * lead * ll1 + diff * (2.0 * ll1 / den) * (2.0 * lf * lf - 2.0 * mf * mf + 2.0 * lf - 1.0))
}

/// Orders of the four families at level `l ≥ 1`. They always sum to
/// `2l+1`; the sine-even family is empty at `l = 1`.
pub fn matrix_dimensions(l: u32) -> Result<FamilyDims> {
    if l == 0 {
        return Err(Error::LevelZero);
    }
    let k = (l / 2) as usize;
    let odd = l % 2 == 1;
    Ok(FamilyDims {
        cos_even: k + 1,
        sin_even: k,
        cos_odd: if odd { k + 1 } else { k },
        sin_odd: if odd { k + 1 } else { k },
    })
}

/// Shared per-level factors of the matrix entries.
struct LevelFactors {
    lf: f64,
    ll1: f64,
    /// `(2l−1)(2l+3)`
    den: f64,
}

impl LevelFactors {
    fn new(l: u32) -> Self {
        let lf = f64::from(l);
        let ll1 = lf * (lf + 1.0);
        Self {
            lf,
            ll1,
            den: (2.0 * lf - 1.0) * (2.0 * lf + 3.0),
        }
    }

    /// Even-family diagonal entry, position `p`.
    fn a(&self, p: usize, alpha: f64, beta: f64, gamma: f64) -> f64 {
        let pf = p as f64;
        let poly = self.lf * self.lf + 4.0 * pf * pf + self.lf - 1.0;
        -(2.0 * gamma * self.ll1 + (alpha + beta - 2.0 * gamma) * (2.0 * self.ll1 / self.den) * poly)
    }

    /// Even-family off-diagonal entry, position `p` (the leading one
    /// carries an extra √2).
    fn b(&self, p: usize, alpha: f64, beta: f64) -> f64 {
        let li = i64::from(self.lf as u32);
        let pi = p as i64;
        let (factor, prod) = if p == 0 {
            (
                std::f64::consts::SQRT_2,
                (li - 1) * li * (li + 1) * (li + 2),
            )
        } else {
            (
                1.0,
                (li - 2 * pi - 1) * (li - 2 * pi) * (li + 2 * pi + 1) * (li + 2 * pi + 2),
            )
        };
        -(factor * (beta - alpha) * (self.ll1 / self.den) * (prod as f64).sqrt())
    }

    /// Odd-family leading diagonal entry; `swapped` selects the sine
    /// flavor, which interchanges the roles of `α` and `β`.
    fn phi0(&self, alpha: f64, beta: f64, gamma: f64, swapped: bool) -> f64 {
        let mix = if swapped {
            1.5 * beta + 0.5 * alpha - 2.0 * gamma
        } else {
            1.5 * alpha + 0.5 * beta - 2.0 * gamma
        };
        -(mix * (2.0 * self.ll1 * self.ll1 / self.den) + 2.0 * self.ll1 * gamma)
    }

    /// Odd-family diagonal entry, position `p ≥ 1`.
    fn phi(&self, p: usize, alpha: f64, beta: f64, gamma: f64) -> f64 {
        let pf = p as f64;
        let poly_ab = self.lf * self.lf + 4.0 * pf * pf + 4.0 * pf + self.lf;
        let poly_g = 2.0 * self.lf * self.lf - 8.0 * pf * pf - 8.0 * pf + 2.0 * self.lf - 3.0;
        -((alpha + beta) * (2.0 * self.ll1 / self.den) * poly_ab
            + 2.0 * gamma * (self.ll1 / self.den) * poly_g)
    }

    /// Odd-family off-diagonal entry, position `p ≥ 0`.
    fn psi(&self, p: usize, alpha: f64, beta: f64) -> f64 {
        let li = i64::from(self.lf as u32);
        let pi = p as i64;
        let prod = (li - 2 * pi - 2) * (li - 2 * pi - 1) * (li + 2 * pi + 2) * (li + 2 * pi + 3);
        -((beta - alpha) * (self.ll1 / self.den) * (prod as f64).sqrt())
    }
}

/// Builds the requested family matrix at level `l ≥ 1`. Entries are
/// stored with the sign that makes the matrix eigenvalues equal to the
/// first-order coefficients `λ₁`.
pub fn build_matrix(
    l: u32,
    family: MatrixFamily,
    alpha: f64,
    beta: f64,
    gamma: f64,
) -> Result<SymmetricTridiagonal> {
    let dims = matrix_dimensions(l)?;
    let n = dims.get(family);
    if n == 0 {
        return Err(Error::EmptyFamily { l, family });
    }
    let fac = LevelFactors::new(l);

    let (diag, offdiag): (Vec<f64>, Vec<f64>) = match family {
        MatrixFamily::CosEven => (
            (0..n).map(|p| fac.a(p, alpha, beta, gamma)).collect(),
            (0..n - 1).map(|p| fac.b(p, alpha, beta)).collect(),
        ),
        MatrixFamily::SinEven => (
            (1..=n).map(|p| fac.a(p, alpha, beta, gamma)).collect(),
            (1..n).map(|p| fac.b(p, alpha, beta)).collect(),
        ),
        MatrixFamily::CosOdd | MatrixFamily::SinOdd => {
            let swapped = family == MatrixFamily::SinOdd;
            let mut diag = Vec::with_capacity(n);
            diag.push(fac.phi0(alpha, beta, gamma, swapped));
            diag.extend((1..n).map(|p| fac.phi(p, alpha, beta, gamma)));
            (diag, (0..n - 1).map(|p| fac.psi(p, alpha, beta)).collect())
        }
    };
    SymmetricTridiagonal::new(diag, offdiag)
}

/// All `2l+1` first-order coefficients at level `l ≥ 1`: the eigenvalues
/// of every nonempty family, labeled and sorted ascending.
pub fn first_order_spectrum(
    l: u32,
    alpha: f64,
    beta: f64,
    gamma: f64,
) -> Result<Vec<FirstOrderEigenvalue>> {
    let dims = matrix_dimensions(l)?;
    let mut out = Vec::with_capacity(2 * l as usize + 1);
    for family in MatrixFamily::ALL {
        if dims.get(family) == 0 {
            continue;
        }
        let matrix = build_matrix(l, family, alpha, beta, gamma)?;
        for (position, lambda1) in tridiag_eigenvalues(&matrix).into_iter().enumerate() {
            out.push(FirstOrderEigenvalue {
                level: l,
                label: ModeLabel::Family { family, position },
                lambda1,
                multiplicity: 1,
            });
        }
    }
    out.sort_by(|x, y| x.lambda1.partial_cmp(&y.lambda1).unwrap());
    debug_assert_eq!(out.len(), 2 * l as usize + 1);
    Ok(out)
}

/// How the direction coefficients route through the first-order model.
#[derive(Clone, Copy)]
enum Route {
    /// Both distinct roles of a biaxial configuration: the coefficient of
    /// the repeated pair and the single one.
    Biaxial {
        symmetry: BiaxialSymmetry,
        first: f64,
        second: f64,
    },
    Triaxial,
}

fn route(alpha: f64, beta: f64, gamma: f64) -> Route {
    if alpha == beta {
        // covers the sphere case too: the difference term vanishes
        Route::Biaxial {
            symmetry: BiaxialSymmetry::Aab,
            first: alpha,
            second: gamma,
        }
    } else if alpha == gamma {
        Route::Biaxial {
            symmetry: BiaxialSymmetry::Aab,
            first: alpha,
            second: beta,
        }
    } else if beta == gamma {
        Route::Biaxial {
            symmetry: BiaxialSymmetry::Abb,
            first: alpha,
            second: beta,
        }
    } else {
        Route::Triaxial
    }
}

/// First-order spectrum of all levels `0..=level_cap`: `(L+1)²` entries
/// with values `l(l+1) + λ₁ε`, ordered by level and ascending within
/// each level.
///
/// `ε` enters the model linearly and is not restricted here; entries
/// whose assembled value escapes their level window carry
/// [`SpectrumEntry::cluster_flag`].
pub fn assemble_spectrum(level_cap: u32, params: &PerturbationParams) -> Vec<SpectrumEntry> {
    assemble_spectrum_raw(
        level_cap,
        params.alpha(),
        params.beta(),
        params.gamma(),
        params.epsilon(),
    )
}

/// [`assemble_spectrum`] on raw coefficients, without requiring the axes
/// `1+αε, …` to stay positive: the first-order model is formal in `ε`.
pub fn assemble_spectrum_raw(
    level_cap: u32,
    alpha: f64,
    beta: f64,
    gamma: f64,
    epsilon: f64,
) -> Vec<SpectrumEntry> {
    let mut entries = Vec::with_capacity(((level_cap + 1) * (level_cap + 1)) as usize);
    entries.push(SpectrumEntry {
        level: 0,
        label: ModeLabel::Order { m: 0 },
        lambda1: 0.0,
        value: 0.0,
        multiplicity: 1,
        cluster_flag: false,
    });

    let routing = route(alpha, beta, gamma);
    for l in 1..=level_cap {
        let mut level_entries: Vec<SpectrumEntry> = Vec::with_capacity(2 * l as usize + 1);
        match routing {
            Route::Biaxial {
                symmetry,
                first,
                second,
            } => {
                for m_abs in 0..=i64::from(l) {
                    let lambda1 = biaxial_lambda1(l, m_abs, first, second, symmetry)
                        .expect("order within level");
                    if m_abs == 0 {
                        level_entries.push(entry(l, ModeLabel::Order { m: 0 }, lambda1, 1, epsilon));
                    } else {
                        for m in [m_abs, -m_abs] {
                            level_entries.push(entry(l, ModeLabel::Order { m }, lambda1, 2, epsilon));
                        }
                    }
                }
            }
            Route::Triaxial => {
                for ev in first_order_spectrum(l, alpha, beta, gamma).expect("level is positive") {
                    level_entries.push(entry(l, ev.label, ev.lambda1, ev.multiplicity, epsilon));
                }
            }
        }
        level_entries.sort_by(|x, y| x.lambda1.partial_cmp(&y.lambda1).unwrap());
        entries.extend(level_entries);
    }
    entries
}

fn entry(l: u32, label: ModeLabel, lambda1: f64, multiplicity: u8, epsilon: f64) -> SpectrumEntry {
    let lf = f64::from(l);
    let ll1 = lf * (lf + 1.0);
    let value = ll1 + lambda1 * epsilon;
    let cluster_flag = !(value >= ll1 - 2.0 * lf && value < ll1 + 2.0 * lf);
    SpectrumEntry {
        level: l,
        label,
        lambda1,
        value,
        multiplicity,
        cluster_flag,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigensolve::is_positive_definite_exact;
    use approx::assert_relative_eq;

    #[test]
    fn biaxial_level_zero_vanishes() {
        assert_eq!(
            biaxial_lambda1(0, 0, 0.7, -1.3, BiaxialSymmetry::Aab).unwrap(),
            0.0
        );
    }

    #[test]
    fn biaxial_hand_evaluated_case() {
        // (0 − (−1)) · (4/5) · 3 = 12/5
        let v = biaxial_lambda1(1, 0, 0.0, -1.0, BiaxialSymmetry::Aab).unwrap();
        assert_relative_eq!(v, 12.0 / 5.0, max_relative = 1e-15);
    }

    #[test]
    fn biaxial_equal_coefficients_reduce_to_sphere_scaling() {
        for m in -2..=2 {
            let v = biaxial_lambda1(2, m, -1.0, -1.0, BiaxialSymmetry::Aab).unwrap();
            assert_eq!(v, 12.0);
        }
    }

    #[test]
    fn biaxial_m_parity() {
        for m in 1..=5 {
            let plus = biaxial_lambda1(5, m, -0.3, -1.7, BiaxialSymmetry::Abb).unwrap();
            let minus = biaxial_lambda1(5, -m, -0.3, -1.7, BiaxialSymmetry::Abb).unwrap();
            assert_eq!(plus, minus);
        }
    }

    #[test]
    fn biaxial_order_out_of_range() {
        assert!(matches!(
            biaxial_lambda1(1, 2, 0.0, 0.0, BiaxialSymmetry::Aab),
            Err(Error::ModeOutOfRange { l: 1, m: 2 })
        ));
    }

    #[test]
    fn dimensions_match_order_table() {
        let d = matrix_dimensions(1).unwrap();
        assert_eq!((d.cos_even, d.sin_even, d.cos_odd, d.sin_odd), (1, 0, 1, 1));
        let d = matrix_dimensions(4).unwrap();
        assert_eq!((d.cos_even, d.sin_even, d.cos_odd, d.sin_odd), (3, 2, 2, 2));
        let d = matrix_dimensions(6).unwrap();
        assert_eq!((d.cos_even, d.sin_even, d.cos_odd, d.sin_odd), (4, 3, 3, 3));
        assert!(matches!(matrix_dimensions(0), Err(Error::LevelZero)));
    }

    #[test]
    fn dimensions_sum_to_cluster_size() {
        for l in 1..=50 {
            assert_eq!(matrix_dimensions(l).unwrap().total(), 2 * l as usize + 1);
        }
    }

    #[test]
    fn sphere_matrix_level_one() {
        let m = build_matrix(1, MatrixFamily::CosEven, -1.0, -1.0, -1.0).unwrap();
        assert_eq!(m.diag(), &[4.0]);
        assert!(m.offdiag().is_empty());
    }

    #[test]
    fn equal_first_two_coefficients_kill_offdiagonals() {
        for l in [2, 5, 9] {
            for family in MatrixFamily::ALL {
                if matrix_dimensions(l).unwrap().get(family) == 0 {
                    continue;
                }
                let m = build_matrix(l, family, -0.37, -0.37, -1.21).unwrap();
                assert!(m.offdiag().iter().all(|&b| b == 0.0));
            }
        }
    }

    #[test]
    fn level_two_triaxial_entries_match_exact_evaluation() {
        // (α, β, γ) = (−1, −2, −2.5); entries evaluated in exact rational
        // arithmetic: a₀ = 170/7, a₁ = 138/7, b₀ = 8√3/7, φ₀ = 150/7,
        // φ̃₀ = 174/7.
        let (a, b, g) = (-1.0, -2.0, -2.5);
        let cos_even = build_matrix(2, MatrixFamily::CosEven, a, b, g).unwrap();
        assert_relative_eq!(cos_even.diag()[0], 170.0 / 7.0, max_relative = 1e-14);
        assert_relative_eq!(cos_even.diag()[1], 138.0 / 7.0, max_relative = 1e-14);
        assert_relative_eq!(
            cos_even.offdiag()[0],
            8.0 * 3.0_f64.sqrt() / 7.0,
            max_relative = 1e-14
        );

        let sin_even = build_matrix(2, MatrixFamily::SinEven, a, b, g).unwrap();
        assert_relative_eq!(sin_even.diag()[0], 138.0 / 7.0, max_relative = 1e-14);

        let cos_odd = build_matrix(2, MatrixFamily::CosOdd, a, b, g).unwrap();
        assert_relative_eq!(cos_odd.diag()[0], 150.0 / 7.0, max_relative = 1e-14);

        let sin_odd = build_matrix(2, MatrixFamily::SinOdd, a, b, g).unwrap();
        assert_relative_eq!(sin_odd.diag()[0], 174.0 / 7.0, max_relative = 1e-14);

        assert!(is_positive_definite_exact(&cos_even));
    }

    #[test]
    fn empty_family_rejected() {
        assert!(matches!(
            build_matrix(1, MatrixFamily::SinEven, 0.0, 0.0, 0.0),
            Err(Error::EmptyFamily { l: 1, .. })
        ));
    }

    #[test]
    fn sphere_spectrum_level_one() {
        let evs = first_order_spectrum(1, -1.0, -1.0, -1.0).unwrap();
        assert_eq!(evs.len(), 3);
        for ev in evs {
            assert_relative_eq!(ev.lambda1, 4.0, max_relative = 1e-14);
        }
    }

    #[test]
    fn biaxial_reduction_level_one() {
        // α = β = 0, γ = −1 reduces to the closed biaxial form
        let mut got: Vec<f64> = first_order_spectrum(1, 0.0, 0.0, -1.0)
            .unwrap()
            .iter()
            .map(|e| e.lambda1)
            .collect();
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut want: Vec<f64> = (-1..=1)
            .map(|m| biaxial_lambda1(1, m, 0.0, -1.0, BiaxialSymmetry::Aab).unwrap())
            .collect();
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (g, w) in got.iter().zip(&want) {
            assert_relative_eq!(g, w, max_relative = 1e-13);
        }
    }

    #[test]
    fn diagonal_entries_match_biaxial_coefficients_when_first_two_agree() {
        // a-entries at order m = 2p, φ-entries at m = 2p+1
        let (alpha, gamma) = (-0.4, -1.9);
        for l in 1..=12u32 {
            let dims = matrix_dimensions(l).unwrap();
            let check = |family: MatrixFamily, m_of_pos: &dyn Fn(usize) -> i64| {
                if dims.get(family) == 0 {
                    return;
                }
                let m = build_matrix(l, family, alpha, alpha, gamma).unwrap();
                for (pos, &d) in m.diag().iter().enumerate() {
                    let want = biaxial_lambda1(l, m_of_pos(pos), alpha, gamma, BiaxialSymmetry::Aab)
                        .unwrap();
                    assert_relative_eq!(d, want, max_relative = 1e-12);
                }
            };
            check(MatrixFamily::CosEven, &|p| 2 * p as i64);
            check(MatrixFamily::SinEven, &|p| 2 * (p as i64 + 1));
            check(MatrixFamily::CosOdd, &|p| 2 * p as i64 + 1);
            check(MatrixFamily::SinOdd, &|p| 2 * p as i64 + 1);
        }
    }

    #[test]
    fn level_zero_spectrum_rejected() {
        assert!(matches!(
            first_order_spectrum(0, 0.0, 0.0, 0.0),
            Err(Error::LevelZero)
        ));
    }

    #[test]
    fn even_family_entries_match_independent_ratio_form() {
        // 4b_p²/(a_p a_{p+1}) admits a product form with the shared
        // 2l(l+1)/((2l−1)(2l+3)) factor cancelled; agreement checks the
        // diagonal and off-diagonal entries in one stroke.
        let (alpha, beta, gamma) = (-0.7, -1.3, -1.9);
        for l in 2..=20u32 {
            let m = build_matrix(l, MatrixFamily::CosEven, alpha, beta, gamma).unwrap();
            let lf = f64::from(l);
            let (d, e) = (m.diag(), m.offdiag());
            for p in 0..e.len() {
                let pf = p as f64;
                let got = 4.0 * e[p] * e[p] / (d[p] * d[p + 1]);
                let numerator = if p == 0 {
                    2.0 * (beta - alpha).powi(2)
                        * (lf - 1.0)
                        * lf
                        * (lf + 1.0)
                        * (lf + 2.0)
                } else {
                    (beta - alpha).powi(2)
                        * (lf - 2.0 * pf - 1.0)
                        * (lf - 2.0 * pf)
                        * (lf + 2.0 * pf + 1.0)
                        * (lf + 2.0 * pf + 2.0)
                };
                let factor = |pp: f64| {
                    (alpha + beta) * (lf * lf + 4.0 * pp * pp + lf - 1.0)
                        + gamma * (2.0 * lf * lf - 8.0 * pp * pp + 2.0 * lf - 1.0)
                };
                let want = numerator / (factor(pf) * factor(pf + 1.0));
                assert_relative_eq!(got, want, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn odd_family_leading_entries_match_independent_factor_form() {
        // φ₀ and φ̃₀ rewritten as 2l(l+1)/((2l−1)(2l+3)) times a mixing
        // factor; independent algebraic route to the same entries.
        let (alpha, beta, gamma) = (-0.4, -1.1, -2.3);
        for l in 1..=20u32 {
            let lf = f64::from(l);
            let ll1 = lf * (lf + 1.0);
            let den = (2.0 * lf - 1.0) * (2.0 * lf + 3.0);
            let shared = 2.0 * ll1 / den;
            let q = gamma * (2.0 * lf * lf + 2.0 * lf - 3.0);

            let cos_odd = build_matrix(l, MatrixFamily::CosOdd, alpha, beta, gamma).unwrap();
            let want = -shared * ((3.0 * alpha + beta) * ll1 / 2.0 + q);
            assert_relative_eq!(cos_odd.diag()[0], want, max_relative = 1e-13);

            let sin_odd = build_matrix(l, MatrixFamily::SinOdd, alpha, beta, gamma).unwrap();
            let want = -shared * ((alpha + 3.0 * beta) * ll1 / 2.0 + q);
            assert_relative_eq!(sin_odd.diag()[0], want, max_relative = 1e-13);
        }
    }

    #[test]
    fn assemble_unperturbed_sphere() {
        let p = PerturbationParams::new(0.0, 0.0, 0.0, 0.1).unwrap();
        let values: Vec<f64> = assemble_spectrum(1, &p).iter().map(|e| e.value).collect();
        assert_eq!(values, vec![0.0, 2.0, 2.0, 2.0]);
    }

    #[test]
    fn assemble_shrinking_sphere() {
        let p = PerturbationParams::new(-1.0, -1.0, -1.0, 0.01).unwrap();
        let values: Vec<f64> = assemble_spectrum(1, &p).iter().map(|e| e.value).collect();
        for (v, w) in values.iter().zip([0.0, 2.04, 2.04, 2.04]) {
            assert_relative_eq!(v, &w, max_relative = 1e-13);
        }
    }

    #[test]
    fn assemble_triaxial_matches_family_eigenvalues() {
        let p = PerturbationParams::new(-1.0, -2.0, -2.5, 0.05).unwrap();
        let entries = assemble_spectrum(2, &p);
        assert_eq!(entries.len(), 9);
        let mut got: Vec<f64> = entries
            .iter()
            .filter(|e| e.level == 2)
            .map(|e| e.value)
            .collect();
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut want: Vec<f64> = first_order_spectrum(2, -1.0, -2.0, -2.5)
            .unwrap()
            .iter()
            .map(|e| 6.0 + 0.05 * e.lambda1)
            .collect();
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (g, w) in got.iter().zip(&want) {
            assert_relative_eq!(g, w, max_relative = 1e-13);
        }
    }

    #[test]
    fn assemble_biaxial_multiplicities() {
        let p = PerturbationParams::new(-1.0, -1.0, -1.5, 0.1).unwrap();
        let entries = assemble_spectrum(3, &p);
        assert_eq!(entries.len(), 16);
        for e in &entries {
            match e.label {
                ModeLabel::Order { m: 0 } => assert_eq!(e.multiplicity, 1),
                ModeLabel::Order { .. } => assert_eq!(e.multiplicity, 2),
                ModeLabel::Family { .. } => panic!("biaxial parameters must use order labels"),
            }
        }
        // per level: one m = 0 entry, pairs otherwise
        for l in 1..=3u32 {
            let singles = entries
                .iter()
                .filter(|e| e.level == l && e.multiplicity == 1)
                .count();
            assert_eq!(singles, 1);
        }
    }

    #[test]
    fn cluster_flag_set_for_oversized_shifts() {
        // λ₁ = 4 at level 1 with ε = 1: shift 4 ≥ 2l = 2
        let entries = assemble_spectrum_raw(1, -1.0, -1.0, -1.0, 1.0);
        assert!(entries.iter().any(|e| e.level == 1 && e.cluster_flag));
        let entries = assemble_spectrum_raw(1, -1.0, -1.0, -1.0, 1e-3);
        assert!(entries.iter().all(|e| !e.cluster_flag));
    }
}
