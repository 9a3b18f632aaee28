//! Gauss–Legendre quadrature on `[-1, 1]`.

/// Legendre polynomial `P_n(x)` and its derivative via the three-term
/// recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    debug_assert!(n >= 1);
    let mut prev = 1.0_f64;
    let mut cur = x;
    for j in 2..=n {
        let jf = j as f64;
        let next = ((2.0 * jf - 1.0) * x * cur - (jf - 1.0) * prev) / jf;
        prev = cur;
        cur = next;
    }
    let deriv = n as f64 * (x * cur - prev) / (x * x - 1.0);
    (cur, deriv)
}

/// Nodes (ascending) and weights of the `n`-point Gauss–Legendre rule,
/// exact for polynomials up to degree `2n−1`. Roots are located by
/// Newton iteration from the classical cosine initial guess.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "quadrature rule needs at least one node");
    if n == 1 {
        return (vec![0.0], vec![2.0]);
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut deriv = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            deriv = d;
            let step = p / d;
            z -= step;
            if step.abs() <= 1e-16 * z.abs().max(1.0) {
                break;
            }
        }
        let w = 2.0 / ((1.0 - z * z) * deriv * deriv);
        // i = 0 is the largest root
        nodes[n - 1 - i] = z;
        nodes[i] = -z;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
        let (_, d) = legendre_with_derivative(n, 0.0);
        weights[n / 2] = 2.0 / (d * d);
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn five_point_rule_matches_reference() {
        let (x, w) = gauss_legendre(5);
        let x_ref = [
            -0.906_179_845_938_664,
            -0.538_469_310_105_683_1,
            0.0,
            0.538_469_310_105_683_1,
            0.906_179_845_938_664,
        ];
        let w_ref = [
            0.236_926_885_056_189_08,
            0.478_628_670_499_366_47,
            0.568_888_888_888_888_9,
            0.478_628_670_499_366_47,
            0.236_926_885_056_189_08,
        ];
        for i in 0..5 {
            assert_abs_diff_eq!(x[i], x_ref[i], epsilon = 1e-15);
            assert_abs_diff_eq!(w[i], w_ref[i], epsilon = 1e-15);
        }
    }

    #[test]
    fn weights_sum_to_interval_length() {
        for n in [1, 2, 3, 8, 17, 40] {
            let (_, w) = gauss_legendre(n);
            assert_abs_diff_eq!(w.iter().sum::<f64>(), 2.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn integrates_monomials_exactly() {
        let n = 7;
        let (x, w) = gauss_legendre(n);
        for k in 0..=(2 * n - 1) {
            let got: f64 = x.iter().zip(&w).map(|(&xi, &wi)| wi * xi.powi(k as i32)).sum();
            let exact = if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 };
            assert_abs_diff_eq!(got, exact, epsilon = 1e-14);
        }
    }

    #[test]
    fn nodes_ascending_and_interior() {
        let (x, _) = gauss_legendre(26);
        for pair in x.windows(2) {
            assert!(pair[0] < pair[1]);
        }
        assert!(x[0] > -1.0 && x[25] < 1.0);
    }
}
