//! Gaussian curvature of ellipsoids and the admissibility conditions for
//! curvature bounded below by one.
//!
//! An ellipsoid `x²/A² + y²/B² + z²/C² = 1` has curvature extrema on the
//! axes: with `A ≥ B ≥ C` the maximum `A²/(B²C²)` sits at `(±A,0,0)` and
//! the minimum `C²/(A²B²)` at `(0,0,±C)`. The admissibility predicates
//! decide `K_min ≥ 1` either from axis lengths or, for the perturbation
//! family `(1+αε, 1+βε, 1+γε)`, as an interval of valid `ε`.

use serde::Serialize;

use crate::{Error, Result};

/// Relative tolerance under which two semi-axes count as equal for
/// classification purposes.
pub const AXIS_EQUALITY_TOL: f64 = 1e-10;

/// Slack applied to every `K_min ≥ 1` test so boundary cases (for example
/// a largest semi-axis of exactly 1) are not lost to rounding.
pub const CURVATURE_SLACK: f64 = 1e-12;

/// Largest relative residual of the surface equation for which a point is
/// accepted as lying on the ellipsoid.
pub const ON_SURFACE_TOL: f64 = 1e-9;

/// An ellipsoid given by its three positive semi-axis lengths. The axes
/// are not required to be ordered.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Ellipsoid {
    a: f64,
    b: f64,
    c: f64,
}

impl Ellipsoid {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if ok(a) && ok(b) && ok(c) {
            Ok(Self { a, b, c })
        } else {
            Err(Error::NonPositiveAxis { a, b, c })
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn semi_axes(&self) -> [f64; 3] {
        [self.a, self.b, self.c]
    }

    /// Relative residual `|x²/a² + y²/b² + z²/c² − 1|` of the surface
    /// equation at `p`.
    pub fn surface_residual(&self, p: &SurfacePoint) -> f64 {
        let s = (p.x / self.a).powi(2) + (p.y / self.b).powi(2) + (p.z / self.c).powi(2);
        (s - 1.0).abs()
    }

    /// Semi-axes sorted descending together with the original positions
    /// of the sorted entries (`perm[0]` is the index of the largest axis).
    fn sorted_axes(&self) -> ([f64; 3], [usize; 3]) {
        let mut idx = [0usize, 1, 2];
        let ax = self.semi_axes();
        idx.sort_by(|&i, &j| ax[j].partial_cmp(&ax[i]).unwrap());
        ([ax[idx[0]], ax[idx[1]], ax[idx[2]]], idx)
    }
}

/// Perturbation directions `(α, β, γ)` and size `ε` describing the
/// ellipsoid with semi-axes `(1+αε, 1+βε, 1+γε)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PerturbationParams {
    alpha: f64,
    beta: f64,
    gamma: f64,
    epsilon: f64,
}

impl PerturbationParams {
    /// Builds validated parameters: `ε` must be positive and all three
    /// resulting semi-axes must stay positive.
    pub fn new(alpha: f64, beta: f64, gamma: f64, epsilon: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::NonPositiveEpsilon(epsilon));
        }
        ellipsoid_from_params(alpha, beta, gamma, epsilon)?;
        Ok(Self {
            alpha,
            beta,
            gamma,
            epsilon,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// The ellipsoid realized at this parameter set.
    pub fn ellipsoid(&self) -> Ellipsoid {
        ellipsoid_from_params(self.alpha, self.beta, self.gamma, self.epsilon)
            .expect("axes validated on construction")
    }
}

/// A point in ambient coordinates, expected to lie on the surface of the
/// ellipsoid it is used with.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SurfacePoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl SurfacePoint {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }
}

/// Curvature extrema of an ellipsoid together with points attaining them,
/// reported in the caller's original axis order.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurvatureExtrema {
    pub k_min: f64,
    pub k_max: f64,
    pub argmin: SurfacePoint,
    pub argmax: SurfacePoint,
}

/// Shape class after sorting the semi-axes descending.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EllipsoidClass {
    Sphere,
    /// The two largest axes are equal.
    BiaxialAab,
    /// The two smallest axes are equal.
    BiaxialAbb,
    Triaxial,
}

/// Gaussian curvature at a point of the ellipsoid surface.
///
/// Rejects points whose surface-equation residual exceeds
/// [`ON_SURFACE_TOL`].
pub fn gaussian_curvature(e: &Ellipsoid, p: &SurfacePoint) -> Result<f64> {
    let residual = e.surface_residual(p);
    if residual > ON_SURFACE_TOL {
        return Err(Error::PointNotOnSurface {
            x: p.x,
            y: p.y,
            z: p.z,
            residual,
        });
    }
    let (a2, b2, c2) = (e.a * e.a, e.b * e.b, e.c * e.c);
    let t = p.x * p.x / (a2 * a2) + p.y * p.y / (b2 * b2) + p.z * p.z / (c2 * c2);
    Ok(1.0 / (a2 * b2 * c2 * t * t))
}

/// Minimum and maximum Gaussian curvature of the ellipsoid.
///
/// With the axes sorted `A ≥ B ≥ C` the extrema are `K_max = A²/(B²C²)`
/// on the longest axis and `K_min = C²/(A²B²)` on the shortest; the
/// attaining points are mapped back to the caller's axis order.
pub fn curvature_extrema(e: &Ellipsoid) -> CurvatureExtrema {
    let (sorted, perm) = e.sorted_axes();
    let [a, b, c] = sorted;
    let k_max = (a * a) / (b * b * c * c);
    let k_min = (c * c) / (a * a * b * b);

    let mut argmax = [0.0; 3];
    argmax[perm[0]] = a;
    let mut argmin = [0.0; 3];
    argmin[perm[2]] = c;

    CurvatureExtrema {
        k_min,
        k_max,
        argmin: SurfacePoint::new(argmin[0], argmin[1], argmin[2]),
        argmax: SurfacePoint::new(argmax[0], argmax[1], argmax[2]),
    }
}

fn axes_equal(x: f64, y: f64) -> bool {
    (x - y).abs() <= AXIS_EQUALITY_TOL * x.max(y)
}

/// Classifies the ellipsoid by which of its sorted semi-axes coincide
/// within [`AXIS_EQUALITY_TOL`]. Invariant under axis permutation.
pub fn classify(e: &Ellipsoid) -> EllipsoidClass {
    let ([a, b, c], _) = e.sorted_axes();
    if axes_equal(a, c) {
        EllipsoidClass::Sphere
    } else if axes_equal(a, b) {
        EllipsoidClass::BiaxialAab
    } else if axes_equal(b, c) {
        EllipsoidClass::BiaxialAbb
    } else {
        EllipsoidClass::Triaxial
    }
}

/// Whether the Gaussian curvature is at least one everywhere, decided by
/// the axis-length condition of the shape class:
/// sphere and two-smallest-equal need `A ≤ 1`, two-largest-equal needs
/// `C ≥ A²`, triaxial needs `C ≥ AB` (axes sorted `A ≥ B ≥ C`). All
/// comparisons carry the [`CURVATURE_SLACK`] so the result agrees with
/// `curvature_extrema(e).k_min ≥ 1 − 1e-12`.
pub fn axis_admissible(e: &Ellipsoid) -> bool {
    let ([a, b, c], _) = e.sorted_axes();
    let threshold = 1.0 - CURVATURE_SLACK;
    match classify(e) {
        // K_min = 1/A²
        EllipsoidClass::Sphere | EllipsoidClass::BiaxialAbb => 1.0 / (a * a) >= threshold,
        // K_min = C²/A⁴
        EllipsoidClass::BiaxialAab => (c * c) / (a * a * a * a) >= threshold,
        // K_min = C²/(A²B²)
        EllipsoidClass::Triaxial => (c * c) / (a * a * b * b) >= threshold,
    }
}

/// Interval of perturbation sizes, open at the lower end.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EpsilonInterval {
    Empty,
    Bounded {
        lower: f64,
        upper: f64,
        upper_closed: bool,
    },
    Unbounded {
        lower: f64,
    },
}

impl EpsilonInterval {
    fn bounded(lower: f64, upper: f64, upper_closed: bool) -> Self {
        if upper > lower {
            EpsilonInterval::Bounded {
                lower,
                upper,
                upper_closed,
            }
        } else {
            EpsilonInterval::Empty
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, EpsilonInterval::Empty)
    }

    pub fn contains(&self, eps: f64) -> bool {
        match *self {
            EpsilonInterval::Empty => false,
            EpsilonInterval::Bounded {
                lower,
                upper,
                upper_closed,
            } => eps > lower && if upper_closed { eps <= upper } else { eps < upper },
            EpsilonInterval::Unbounded { lower } => eps > lower,
        }
    }

    /// Least upper bound, `None` when empty or unbounded.
    pub fn supremum(&self) -> Option<f64> {
        match *self {
            EpsilonInterval::Bounded { upper, .. } => Some(upper),
            _ => None,
        }
    }
}

impl std::fmt::Display for EpsilonInterval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            EpsilonInterval::Empty => write!(f, "empty"),
            EpsilonInterval::Bounded {
                lower,
                upper,
                upper_closed,
            } => {
                let close = if upper_closed { "]" } else { ")" };
                write!(f, "({lower}, {upper}{close}")
            }
            EpsilonInterval::Unbounded { lower } => write!(f, "({lower}, inf)"),
        }
    }
}

/// The set of `ε > 0` for which the ellipsoid `(1+αε, 1+βε, 1+γε)` keeps
/// `K_min ≥ 1`, in the closed parameter form of the shape class.
///
/// The coefficients are sorted descending internally, so the argument
/// order does not matter. With `α ≥ β ≥ γ` after sorting:
/// - all equal: `(0, −1/α)` for `α < 0`, all of `(0, ∞)` for `α = 0`,
///   empty for `α > 0`;
/// - two smallest equal: `(α/β, −1/β)`, or `(0, −1/β)` when `α = 0`;
/// - two largest equal: `(0, (β−2α)/α²]` provided `2α < β < α < 0`
///   (here `β` names the single smallest coefficient);
/// - all distinct: `(0, (γ−α−β)/(αβ)]` provided `α < 0` and
///   `γ > α + β`.
///
/// Every failing sign condition yields the empty interval.
pub fn epsilon_admissible_interval(alpha: f64, beta: f64, gamma: f64) -> EpsilonInterval {
    let mut s = [alpha, beta, gamma];
    s.sort_by(|x, y| y.partial_cmp(x).unwrap());
    let [a, b, c] = s;

    if a == c {
        // sphere pattern: K_min = 1/(1+aε)²
        return if a == 0.0 {
            EpsilonInterval::Unbounded { lower: 0.0 }
        } else if a < 0.0 {
            EpsilonInterval::bounded(0.0, -1.0 / a, false)
        } else {
            EpsilonInterval::Empty
        };
    }
    if a == b {
        // two largest equal: K_min = (1+cε)²/(1+aε)⁴
        return if a < 0.0 && 2.0 * a < c {
            EpsilonInterval::bounded(0.0, (c - 2.0 * a) / (a * a), true)
        } else {
            EpsilonInterval::Empty
        };
    }
    if b == c {
        // two smallest equal: K_min = 1/(1+aε)²
        return if a == 0.0 {
            EpsilonInterval::bounded(0.0, -1.0 / b, false)
        } else if a < 0.0 {
            EpsilonInterval::bounded(a / b, -1.0 / b, false)
        } else {
            EpsilonInterval::Empty
        };
    }
    // triaxial: K_min = (1+cε)²/((1+aε)²(1+bε)²)
    if a < 0.0 && c > a + b {
        EpsilonInterval::bounded(0.0, (c - a - b) / (a * b), true)
    } else {
        EpsilonInterval::Empty
    }
}

/// The ellipsoid `(1+αε, 1+βε, 1+γε)`; fails when any axis is not
/// strictly positive.
pub fn ellipsoid_from_params(alpha: f64, beta: f64, gamma: f64, epsilon: f64) -> Result<Ellipsoid> {
    Ellipsoid::new(
        1.0 + alpha * epsilon,
        1.0 + beta * epsilon,
        1.0 + gamma * epsilon,
    )
}

/// Curvature sampled over a `n_theta × n_phi` latitude/longitude grid
/// (poles included, so the sampled minimum attains the true minimum).
/// Returns `(theta, phi, K)` triples in row order.
pub fn curvature_grid(e: &Ellipsoid, n_theta: usize, n_phi: usize) -> Vec<(f64, f64, f64)> {
    assert!(n_theta >= 2 && n_phi >= 1, "grid must have at least 2x1 nodes");
    let (a2, b2, c2) = (e.a * e.a, e.b * e.b, e.c * e.c);
    let scale = a2 * b2 * c2;
    // q(φ) = cos²φ/a² + sin²φ/b², shared by every latitude row
    let azimuth: Vec<(f64, f64)> = (0..n_phi)
        .map(|j| {
            let phi = 2.0 * std::f64::consts::PI * j as f64 / n_phi as f64;
            let cos_p = phi.cos();
            let cp2 = cos_p * cos_p;
            (phi, cp2 / a2 + (1.0 - cp2) / b2)
        })
        .collect();

    let mut out = Vec::with_capacity(n_theta * n_phi);
    for i in 0..n_theta {
        let theta = std::f64::consts::PI * i as f64 / (n_theta - 1) as f64;
        let sin_t = theta.sin();
        let u = sin_t * sin_t;
        let w = (1.0 - u) / c2;
        for &(phi, q) in &azimuth {
            let t = u * q + w;
            out.push((theta, phi, 1.0 / (scale * t * t)));
        }
    }
    out
}

/// Minimum of [`curvature_grid`] without materializing the grid.
pub fn min_sampled_curvature(e: &Ellipsoid, n_theta: usize, n_phi: usize) -> f64 {
    assert!(n_theta >= 2 && n_phi >= 1, "grid must have at least 2x1 nodes");
    let (a2, b2, c2) = (e.a * e.a, e.b * e.b, e.c * e.c);
    let scale = a2 * b2 * c2;
    let azimuth: Vec<f64> = (0..n_phi)
        .map(|j| {
            let phi = 2.0 * std::f64::consts::PI * j as f64 / n_phi as f64;
            let cp2 = phi.cos().powi(2);
            cp2 / a2 + (1.0 - cp2) / b2
        })
        .collect();
    // K is decreasing in t, so the sampled minimum comes from the largest t
    let mut t_max = f64::NEG_INFINITY;
    for i in 0..n_theta {
        let theta = std::f64::consts::PI * i as f64 / (n_theta - 1) as f64;
        let sin_t = theta.sin();
        let u = sin_t * sin_t;
        let w = (1.0 - u) / c2;
        for &q in &azimuth {
            t_max = t_max.max(u * q + w);
        }
    }
    1.0 / (scale * t_max * t_max)
}

/// The surface point of `e` at spherical parameters `(θ, φ)`.
pub fn surface_point(e: &Ellipsoid, theta: f64, phi: f64) -> SurfacePoint {
    let (sin_t, cos_t) = theta.sin_cos();
    let (sin_p, cos_p) = phi.sin_cos();
    SurfacePoint::new(e.a * sin_t * cos_p, e.b * sin_t * sin_p, e.c * cos_t)
}
