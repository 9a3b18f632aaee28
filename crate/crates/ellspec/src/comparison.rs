//! Index-by-index comparison of the perturbed first-order spectrum with
//! the spectrum of the round sphere.

use serde::Serialize;

use crate::geometry::{
    axis_admissible, classify, epsilon_admissible_interval, EllipsoidClass, EpsilonInterval,
    PerturbationParams,
};
use crate::oracle::{first_order_coefficients, GalerkinConfig};
use crate::perturbation::{assemble_spectrum, SpectrumEntry};
use crate::Result;

/// Comparison slack: `λ₁ = 0` happens legitimately (level zero, and the
/// extremal biaxial orders when the leading coefficient vanishes), so
/// exact-zero margins must pass.
pub const MARGIN_TOL: f64 = 1e-12;

/// Sphere eigenvalues up to the level cap: `l(l+1)` with multiplicity
/// `2l+1`, ascending.
pub fn sphere_spectrum(level_cap: u32) -> Vec<f64> {
    let mut out = Vec::with_capacity(((level_cap + 1) * (level_cap + 1)) as usize);
    for l in 0..=level_cap {
        let v = f64::from(l * (l + 1));
        out.extend(std::iter::repeat_n(v, 2 * l as usize + 1));
    }
    out
}

/// One index of the sorted comparison.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ComparisonEntry {
    pub index: usize,
    pub sphere: f64,
    pub perturbed: f64,
    pub margin: f64,
}

/// Largest deviation between closed-form and finite-difference
/// first-order coefficients within one level cluster.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClusterDeviation {
    pub level: u32,
    pub max_abs_deviation: f64,
}

/// Full comparison result. Identical inputs serialize to identical
/// bytes.
#[derive(Clone, Debug, Serialize)]
pub struct ComparisonReport {
    pub level_cap: u32,
    pub params: PerturbationParams,
    /// Whether the realized ellipsoid has curvature at least one.
    pub admissible: bool,
    /// The governing axis inequality with its numbers filled in.
    pub admissibility_condition: String,
    /// Admissible perturbation sizes for these direction coefficients.
    pub epsilon_interval: EpsilonInterval,
    pub epsilon_in_interval: bool,
    pub entries: Vec<ComparisonEntry>,
    /// True when every margin is at least `−1e-12·max(1, Λ_i)`.
    pub verdict: bool,
    pub strictly_positive_margins: usize,
    pub zero_first_order_modes: usize,
    /// Number of model entries whose shift leaves the level window.
    pub cluster_flags: usize,
    /// Per-level deviation of the finite-difference estimates, when the
    /// oracle cross-check was requested.
    pub oracle_crosscheck: Option<Vec<ClusterDeviation>>,
}

fn admissibility_condition(params: &PerturbationParams) -> String {
    let e = params.ellipsoid();
    let mut ax = e.semi_axes();
    ax.sort_by(|x, y| y.partial_cmp(x).unwrap());
    let [a, b, c] = ax;
    match classify(&e) {
        EllipsoidClass::Sphere | EllipsoidClass::BiaxialAbb => {
            format!("largest semi-axis A = {a} <= 1")
        }
        EllipsoidClass::BiaxialAab => {
            format!("smallest semi-axis C = {c} >= A^2 = {}", a * a)
        }
        EllipsoidClass::Triaxial => {
            format!("smallest semi-axis C = {c} >= A*B = {}", a * b)
        }
    }
}

/// Assembles the first-order spectrum, pairs it with the sphere spectrum
/// by sorted index, and records the margins. With `oracle` set, the
/// closed-form coefficients are additionally cross-checked against
/// central differences of Galerkin spectra at `±ε`.
pub fn compare(
    level_cap: u32,
    params: &PerturbationParams,
    oracle: Option<&GalerkinConfig>,
) -> Result<ComparisonReport> {
    let model = assemble_spectrum(level_cap, params);

    let mut perturbed: Vec<f64> = model.iter().map(|e| e.value).collect();
    perturbed.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let sphere = sphere_spectrum(level_cap);

    let entries: Vec<ComparisonEntry> = sphere
        .iter()
        .zip(&perturbed)
        .enumerate()
        .map(|(index, (&s, &p))| ComparisonEntry {
            index,
            sphere: s,
            perturbed: p,
            margin: p - s,
        })
        .collect();

    let verdict = entries
        .iter()
        .all(|e| e.margin >= -MARGIN_TOL * e.sphere.max(1.0));
    let strictly_positive_margins = entries.iter().filter(|e| e.margin > 0.0).count();

    let lambda_scale = model
        .iter()
        .fold(1.0_f64, |acc, e| acc.max(e.lambda1.abs()));
    let zero_first_order_modes = model
        .iter()
        .filter(|e| e.lambda1.abs() <= 1e-14 * lambda_scale)
        .count();
    let cluster_flags = model.iter().filter(|e| e.cluster_flag).count();

    let oracle_crosscheck = match oracle {
        None => None,
        Some(cfg) => Some(crosscheck(level_cap, params, &model, cfg)?),
    };

    let interval = epsilon_admissible_interval(params.alpha(), params.beta(), params.gamma());
    Ok(ComparisonReport {
        level_cap,
        params: *params,
        admissible: axis_admissible(&params.ellipsoid()),
        admissibility_condition: admissibility_condition(params),
        epsilon_interval: interval,
        epsilon_in_interval: interval.contains(params.epsilon()),
        entries,
        verdict,
        strictly_positive_margins,
        zero_first_order_modes,
        cluster_flags,
        oracle_crosscheck,
    })
}

fn crosscheck(
    level_cap: u32,
    params: &PerturbationParams,
    model: &[SpectrumEntry],
    cfg: &GalerkinConfig,
) -> Result<Vec<ClusterDeviation>> {
    let fd = first_order_coefficients(
        params.alpha(),
        params.beta(),
        params.gamma(),
        level_cap,
        params.epsilon(),
        cfg,
    )?;
    let mut out = Vec::with_capacity(level_cap as usize + 1);
    for (l, fd_level) in fd.iter().enumerate() {
        let mut closed: Vec<f64> = model
            .iter()
            .filter(|e| e.level == l as u32)
            .map(|e| e.lambda1)
            .collect();
        closed.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let max_abs_deviation = closed
            .iter()
            .zip(fd_level)
            .map(|(c, f)| (c - f).abs())
            .fold(0.0_f64, f64::max);
        out.push(ClusterDeviation {
            level: l as u32,
            max_abs_deviation,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_spectrum_levels() {
        assert_eq!(sphere_spectrum(0), vec![0.0]);
        assert_eq!(sphere_spectrum(1), vec![0.0, 2.0, 2.0, 2.0]);
        assert_eq!(
            sphere_spectrum(2),
            vec![0.0, 2.0, 2.0, 2.0, 6.0, 6.0, 6.0, 6.0, 6.0]
        );
    }

    #[test]
    fn unperturbed_sphere_has_zero_margins() {
        let p = PerturbationParams::new(0.0, 0.0, 0.0, 0.05).unwrap();
        let report = compare(2, &p, None).unwrap();
        assert!(report.verdict);
        assert!(report.admissible);
        assert_eq!(report.strictly_positive_margins, 0);
        for e in &report.entries {
            assert_eq!(e.margin, 0.0);
        }
    }

    #[test]
    fn admissible_biaxial_dominates_sphere() {
        // two smallest axes equal, largest axis exactly 1
        let p = PerturbationParams::new(0.0, -1.0, -1.0, 0.1).unwrap();
        let report = compare(3, &p, None).unwrap();
        assert!(report.admissible);
        assert!(report.epsilon_in_interval);
        assert!(report.verdict);
        assert_eq!(report.entries.len(), 16);
        assert_eq!(report.strictly_positive_margins, 15);
        assert_eq!(report.zero_first_order_modes, 1);
    }

    #[test]
    fn admissible_triaxial_dominates_sphere() {
        let p = PerturbationParams::new(-1.0, -2.0, -2.5, 0.2).unwrap();
        let report = compare(3, &p, None).unwrap();
        assert!(report.admissible);
        assert!(report.epsilon_in_interval);
        assert!(report.verdict);
        assert_eq!(report.strictly_positive_margins, 15);
    }

    #[test]
    fn inadmissible_parameters_still_produce_full_report() {
        // growing axes push eigenvalues down
        let p = PerturbationParams::new(1.0, 0.5, 0.2, 0.1).unwrap();
        let report = compare(2, &p, None).unwrap();
        assert!(!report.admissible);
        assert!(!report.epsilon_in_interval);
        assert!(!report.verdict);
        assert_eq!(report.entries.len(), 9);
    }

    #[test]
    fn margins_scale_linearly_in_epsilon() {
        let run = |eps: f64| {
            let p = PerturbationParams::new(-1.0, -2.0, -2.5, eps).unwrap();
            compare(3, &p, None).unwrap()
        };
        let r1 = run(1e-3);
        let r2 = run(2e-3);
        for (e1, e2) in r1.entries.iter().zip(&r2.entries) {
            if e1.margin != 0.0 {
                let ratio = e2.margin / e1.margin;
                assert!((ratio - 2.0).abs() < 1e-9, "ratio {ratio}");
            } else {
                assert_eq!(e2.margin, 0.0);
            }
        }
    }
}
