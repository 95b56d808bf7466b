//! Right-sided Gauss-Radau quadrature for the exponential weight
//! `w_a(x) = exp(-a*(x+1))` on `(-1, 1]`.
//!
//! A rule of order `q` has `q + 1` nodes, the last fixed at `x = 1`, and
//! integrates `p(x) * w_a(x)` exactly for every polynomial `p` of degree up
//! to `2q`. The interior nodes are the roots of the degree-`q` polynomial
//! orthogonal to all lower degrees with respect to the modified weight
//! `(1 - x) * w_a(x)`; the weights are the weighted integrals of the nodal
//! cardinal polynomials.
//!
//! Construction is moment based: weighted monomial moments feed a small Gram
//! system for the orthogonal polynomial, companion-matrix eigenvalues with
//! Newton polishing give its roots, and the Lagrange integrals give the
//! weights.

use nalgebra::{DMatrix, DVector};

use crate::gauss;
use crate::{Error, Result};

/// Largest supported rule order.
pub const Q_MAX: usize = 10;

/// Largest supported moment index.
pub const K_MAX: usize = 2 * Q_MAX + 2;

/// Right-sided Gauss-Radau rule for the weight `exp(-a*(x+1))` on `(-1, 1]`.
#[derive(Debug, Clone)]
pub struct WeightedRadauRule {
    /// Decay parameter of the weight.
    pub a: f64,
    /// Polynomial order; the rule has `q + 1` nodes.
    pub q: usize,
    /// Strictly increasing nodes in `(-1, 1]`, the last one exactly `1`.
    pub nodes: Vec<f64>,
    /// Positive weights.
    pub weights: Vec<f64>,
}

impl WeightedRadauRule {
    /// Applies the rule to `f`: `sum_j w_j f(r_j)`.
    ///
    /// Exact (up to roundoff) whenever `f` is a polynomial of degree `<= 2q`
    /// against the weight; an approximation otherwise.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(r, w)| w * f(*r)).sum()
    }

    /// Applies the rule to a vector-valued integrand, accumulating in place.
    pub fn integrate_vec<F: FnMut(f64) -> DVector<f64>>(&self, mut f: F) -> DVector<f64> {
        let mut acc = f(self.nodes[0]) * self.weights[0];
        for j in 1..self.nodes.len() {
            acc.axpy(self.weights[j], &f(self.nodes[j]), 1.0);
        }
        acc
    }
}

fn validate_a(a: f64) -> Result<()> {
    if !a.is_finite() || a < 0.0 {
        return Err(Error::InvalidInput(format!(
            "weight decay parameter must be finite and >= 0, got {a}"
        )));
    }
    Ok(())
}

/// Weighted monomial moments `mu_k(a) = int_{-1}^{1} x^k exp(-a*(x+1)) dx`
/// for all `k <= k_max`.
///
/// Integration by parts relates consecutive moments via
/// `mu_k = ((-1)^k - exp(-2a))/a + (k/a) * mu_{k-1}`. The forward direction
/// multiplies errors by `k/a` per step and the downward direction by `a/k`,
/// so each is contracting only on one side of `k = a`. Indices `k <= a` are
/// therefore filled forward from the closed-form `mu_0`, indices `k > a`
/// downward from a zero start high enough that the startup error has decayed
/// below 1e-18. `exp_m1` keeps the small-`a` cancellation in `1 - exp(-2a)`
/// harmless.
pub fn moments(a: f64, k_max: usize) -> Result<Vec<f64>> {
    validate_a(a)?;
    if k_max > K_MAX {
        return Err(Error::InvalidInput(format!(
            "moment index {k_max} exceeds supported maximum {K_MAX}"
        )));
    }
    if a == 0.0 {
        return Ok((0..=k_max)
            .map(|k| if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 })
            .collect());
    }
    let em = (-2.0 * a).exp_m1(); // exp(-2a) - 1
    let c = |k: usize| -> f64 {
        // ((-1)^k - exp(-2a)) / a
        if k % 2 == 0 {
            -em / a
        } else {
            (-2.0 - em) / a
        }
    };
    let cutoff = (a.floor() as usize).min(k_max);
    let mut mu = vec![0.0; k_max + 1];
    if cutoff < k_max {
        // choose the start index so the damping product prod (a/j) is < 1e-18
        let mut start = k_max + 1;
        let mut log_damp = 0.0;
        while log_damp > -41.5 {
            log_damp += a.ln() - (start as f64).ln();
            start += 1;
        }
        let mut tail = vec![0.0; start + 1];
        for j in (cutoff + 1..=start).rev() {
            tail[j - 1] = (a * tail[j] - c(j) * a) / j as f64;
        }
        mu[cutoff..=k_max].copy_from_slice(&tail[cutoff..=k_max]);
    }
    mu[0] = -em / a;
    for k in 1..=cutoff {
        mu[k] = c(k) + (k as f64 / a) * mu[k - 1];
    }
    Ok(mu)
}

/// Single weighted moment `mu_k(a)`; see [`moments`].
pub fn moment(a: f64, k: usize) -> Result<f64> {
    Ok(moments(a, k)?[k])
}

/// Monic polynomial of degree `q` orthogonal to all polynomials of degree
/// `< q` with respect to the modified weight `(1 - x) * exp(-a*(x+1))`.
///
/// Returns the coefficients in ascending order, `c[q] = 1`. The modified
/// moments are `mu~_k = mu_k - mu_{k+1}` and the monic coefficients solve
/// the `q x q` Hankel system `sum_j c_j mu~_{i+j} = -mu~_{i+q}`.
pub fn orthogonal_polynomial(a: f64, q: usize) -> Result<Vec<f64>> {
    validate_a(a)?;
    if q == 0 || q > Q_MAX {
        return Err(Error::InvalidInput(format!(
            "orthogonal polynomial degree must be in 1..={Q_MAX}, got {q}"
        )));
    }
    let mu = moments(a, 2 * q + 1)?;
    let mt: Vec<f64> = (0..=2 * q).map(|k| mu[k] - mu[k + 1]).collect();
    let gram = DMatrix::from_fn(q, q, |i, j| mt[i + j]);
    let rhs = DVector::from_fn(q, |i, _| -mt[i + q]);
    let lu = gram.clone().lu();
    let sol = lu.solve(&rhs).ok_or_else(|| Error::IllConditioned {
        a,
        q,
        reason: "moment Gram matrix numerically singular".into(),
    })?;
    let mut coeffs: Vec<f64> = sol.iter().cloned().collect();
    coeffs.push(1.0);
    // orthogonality residual check against the modified moments
    let norm_p = {
        let mut s = 0.0;
        for i in 0..=q {
            for l in 0..=q {
                s += coeffs[i] * coeffs[l] * mt[i + l];
            }
        }
        s.max(0.0).sqrt()
    };
    for j in 0..q {
        let mut ip = 0.0;
        for i in 0..=q {
            ip += coeffs[i] * mt[i + j];
        }
        let norm_xj = mt[2 * j].max(0.0).sqrt();
        if ip.abs() > 1e-10 * norm_p * norm_xj {
            return Err(Error::IllConditioned {
                a,
                q,
                reason: format!("orthogonality residual {ip:.3e} at degree {j}"),
            });
        }
    }
    Ok(coeffs)
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

fn horner_deriv(coeffs: &[f64], x: f64) -> f64 {
    let mut acc = 0.0;
    for k in (1..coeffs.len()).rev() {
        acc = acc * x + k as f64 * coeffs[k];
    }
    acc
}

/// Roots of the monic polynomial via companion-matrix eigenvalues followed
/// by two Newton polishing steps, sorted ascending.
fn polynomial_roots(a: f64, q: usize, coeffs: &[f64]) -> Result<Vec<f64>> {
    let deg = coeffs.len() - 1;
    let mut companion = DMatrix::zeros(deg, deg);
    for i in 1..deg {
        companion[(i, i - 1)] = 1.0;
    }
    for i in 0..deg {
        companion[(i, deg - 1)] = -coeffs[i];
    }
    let eig = companion.complex_eigenvalues();
    let mut roots = Vec::with_capacity(deg);
    for z in eig.iter() {
        if z.im.abs() > 1e-7 {
            return Err(Error::RootFinding {
                a,
                q,
                reason: format!("complex companion eigenvalue {z}"),
            });
        }
        let mut x = z.re;
        for _ in 0..2 {
            let d = horner_deriv(coeffs, x);
            if d.abs() > f64::MIN_POSITIVE {
                x -= horner(coeffs, x) / d;
            }
        }
        roots.push(x);
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(roots)
}

/// Constructs the right-sided Gauss-Radau rule of order `q` for the weight
/// `exp(-a*(x+1))` on `(-1, 1]`.
pub fn radau_rule(a: f64, q: usize) -> Result<WeightedRadauRule> {
    validate_a(a)?;
    if q > Q_MAX {
        return Err(Error::InvalidInput(format!(
            "rule order must be <= {Q_MAX}, got {q}"
        )));
    }
    let mu = moments(a, (2 * q + 1).max(1))?;
    if q == 0 {
        return Ok(WeightedRadauRule { a, q, nodes: vec![1.0], weights: vec![mu[0]] });
    }
    let poly = orthogonal_polynomial(a, q)?;
    let mut nodes = polynomial_roots(a, q, &poly)?;
    for (i, r) in nodes.iter().enumerate() {
        if !(-1.0..1.0).contains(r) {
            return Err(Error::RootFinding {
                a,
                q,
                reason: format!("root {r} outside (-1, 1)"),
            });
        }
        if i > 0 && nodes[i] - nodes[i - 1] <= 1e-12 {
            return Err(Error::RootFinding { a, q, reason: "coincident roots".into() });
        }
    }
    nodes.push(1.0);

    // node polynomial prod (x - r_j), then each cardinal by synthetic division
    let mut node_poly = vec![1.0];
    for r in &nodes {
        let mut next = vec![0.0; node_poly.len() + 1];
        for (k, c) in node_poly.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= r * c;
        }
        node_poly = next;
    }
    let mut weights = Vec::with_capacity(q + 1);
    for &r in &nodes {
        // quotient of node_poly / (x - r), degree q
        let mut qt = vec![0.0; q + 1];
        qt[q] = 1.0;
        for k in (0..q).rev() {
            qt[k] = node_poly[k + 1] + r * qt[k + 1];
        }
        let denom = horner(&qt, r);
        let integral: f64 = qt.iter().enumerate().map(|(k, c)| c * mu[k]).sum();
        let w = integral / denom;
        if !(w > 0.0) {
            return Err(Error::RootFinding {
                a,
                q,
                reason: format!("non-positive weight {w} at node {r}"),
            });
        }
        weights.push(w);
    }
    Ok(WeightedRadauRule { a, q, nodes, weights })
}

/// Weighted squared-norm of the degree-`q+1` polynomial that vanishes at all
/// rule nodes and equals one at the left interval endpoint.
///
/// This polynomial spans exactly the part of degree `q+1` that the rule
/// cannot see; its weighted norm stays bounded over compact parameter sets,
/// which the interpolation-error bounds of the time discretisation rely on.
pub fn vanishing_polynomial_norm(a: f64, q: usize) -> Result<f64> {
    let rule = radau_rule(a, q)?;
    let scale: f64 = rule.nodes.iter().map(|r| -1.0 - r).product();
    let chi = |x: f64| -> f64 {
        let num: f64 = rule.nodes.iter().map(|r| x - r).product();
        num / scale
    };
    let gl = gauss::legendre(64);
    Ok(gl.integrate(-1.0, 1.0, |x| {
        let c = chi(x);
        c * c * (-a * (x + 1.0)).exp()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::integrate_adaptive;
    use approx::assert_abs_diff_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn moment_trivial_values() {
        assert_abs_diff_eq!(moment(0.0, 0).unwrap(), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(moment(0.0, 1).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn moment_closed_forms_at_a_one() {
        // mu_0(1) = 1 - e^{-2} from the antiderivative -e^{-(x+1)}
        assert_abs_diff_eq!(moment(1.0, 0).unwrap(), 1.0 - (-2.0f64).exp(), epsilon = 1e-14);
        // mu_1(1) = -2 e^{-2} by integration by parts
        let oracle = integrate_adaptive(|x| x * (-(x + 1.0)).exp(), -1.0, 1.0, 1e-15);
        assert_abs_diff_eq!(oracle, -2.0 * (-2.0f64).exp(), epsilon = 1e-14);
        assert_abs_diff_eq!(moment(1.0, 1).unwrap(), oracle, epsilon = 1e-14);
    }

    #[test]
    fn moments_match_adaptive_integration_oracle() {
        for &a in &[1e-8, 1e-4, 1e-3, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 14.9, 15.1, 20.0] {
            let mu = moments(a, K_MAX).unwrap();
            for k in 0..=K_MAX {
                let oracle =
                    integrate_adaptive(|x| x.powi(k as i32) * (-a * (x + 1.0)).exp(), -1.0, 1.0, 1e-15);
                assert!(
                    (mu[k] - oracle).abs() <= 1e-12 * oracle.abs().max(1e-3),
                    "a={a}, k={k}: {} vs oracle {}",
                    mu[k],
                    oracle
                );
            }
        }
    }

    #[test]
    fn moment_rejects_bad_input() {
        assert!(moment(-1.0, 0).is_err());
        assert!(moment(f64::NAN, 0).is_err());
        assert!(moment(1.0, K_MAX + 1).is_err());
    }

    #[test]
    fn orthogonal_polynomial_unweighted_degree_one() {
        // Gram system with mu~_0 = 2, mu~_1 = -2/3 gives p_1(x) = x + 1/3
        let c = orthogonal_polynomial(0.0, 1).unwrap();
        assert_abs_diff_eq!(c[0], 1.0 / 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(c[1], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn orthogonal_polynomial_degree_two_roots_are_classical() {
        // interior nodes of the classical 3-point right-Radau rule,
        // mirrored left-Radau values -(1 +/- sqrt(6))/5
        let c = orthogonal_polynomial(0.0, 2).unwrap();
        let r_lo = -(1.0 + 6.0f64.sqrt()) / 5.0;
        let r_hi = (6.0f64.sqrt() - 1.0) / 5.0;
        assert_abs_diff_eq!(horner(&c, r_lo), 0.0, epsilon = 1e-13);
        assert_abs_diff_eq!(horner(&c, r_hi), 0.0, epsilon = 1e-13);
    }

    #[test]
    fn orthogonal_polynomial_is_monic_and_orthogonal() {
        for &a in &[0.0, 0.2, 1.0, 3.0, 8.0] {
            for q in 1..=6 {
                let c = orthogonal_polynomial(a, q).unwrap();
                assert_eq!(c.len(), q + 1);
                assert_eq!(c[q], 1.0);
                // residual check against an independent integration oracle
                let mt_ip = |j: usize| {
                    integrate_adaptive(
                        |x| horner(&c, x) * x.powi(j as i32) * (1.0 - x) * (-a * (x + 1.0)).exp(),
                        -1.0,
                        1.0,
                        1e-15,
                    )
                };
                for j in 0..q {
                    assert!(mt_ip(j).abs() < 1e-10, "a={a}, q={q}, j={j}: {}", mt_ip(j));
                }
            }
        }
    }

    #[test]
    fn radau_rule_order_zero_is_single_endpoint_node() {
        let rule = radau_rule(0.0, 0).unwrap();
        assert_eq!(rule.nodes, vec![1.0]);
        assert_abs_diff_eq!(rule.weights[0], 2.0, epsilon = 1e-15);
        let rule = radau_rule(1.5, 0).unwrap();
        assert_abs_diff_eq!(rule.weights[0], moment(1.5, 0).unwrap(), epsilon = 1e-15);
    }

    #[test]
    fn radau_rule_reduces_to_classical_two_point_rule() {
        let rule = radau_rule(0.0, 1).unwrap();
        assert_abs_diff_eq!(rule.nodes[0], -1.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rule.nodes[1], 1.0, epsilon = 0.0);
        assert_abs_diff_eq!(rule.weights[0], 1.5, epsilon = 1e-12);
        assert_abs_diff_eq!(rule.weights[1], 0.5, epsilon = 1e-12);
    }

    #[test]
    fn rule_invariants_hold_across_parameters() {
        for &a in &[0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0] {
            for q in 0..=6 {
                let rule = radau_rule(a, q).unwrap();
                let mu = moments(a, 2 * q.max(1)).unwrap();
                assert_eq!(*rule.nodes.last().unwrap(), 1.0);
                for w in rule.nodes.windows(2) {
                    assert!(w[0] < w[1]);
                }
                assert!(rule.nodes[0] > -1.0);
                let wsum: f64 = rule.weights.iter().sum();
                assert!((wsum - mu[0]).abs() <= 1e-13 * mu[0], "a={a} q={q}");
                for &w in &rule.weights {
                    assert!(w > 0.0 && w <= mu[0] * (1.0 + 1e-14));
                }
                for k in 0..=2 * q {
                    let qk: f64 = rule.integrate(|x| x.powi(k as i32));
                    assert!(
                        (qk - mu[k]).abs() <= 1e-12 * mu[k].abs().max(1.0),
                        "exactness a={a}, q={q}, k={k}: {qk} vs {}",
                        mu[k]
                    );
                }
            }
        }
    }

    #[test]
    fn integrate_examples() {
        let rule = radau_rule(0.0, 1).unwrap();
        assert_abs_diff_eq!(rule.integrate(|x| x * x), 2.0 / 3.0, epsilon = 1e-13);
        assert_abs_diff_eq!(rule.integrate(|_| 0.0), 0.0, epsilon = 0.0);
        let rule = radau_rule(1.0, 2).unwrap();
        let mu4 = moment(1.0, 4).unwrap();
        assert_abs_diff_eq!(rule.integrate(|x| x.powi(4)), mu4, epsilon = 1e-13 * mu4.abs());
    }

    #[test]
    fn uniqueness_cross_check_against_bisection_roots() {
        // independent root construction: sign-change scan + bisection on p_q
        for &a in &[0.0, 0.3, 1.0, 5.0] {
            for q in 1..=5 {
                let c = orthogonal_polynomial(a, q).unwrap();
                let mut roots = Vec::new();
                let steps = 20_000;
                let mut x0 = -1.0 + 1e-9;
                let mut f0 = horner(&c, x0);
                for s in 1..=steps {
                    let x1 = -1.0 + 2.0 * s as f64 / steps as f64 - 1e-9;
                    let f1 = horner(&c, x1);
                    if f0 == 0.0 {
                        roots.push(x0);
                    } else if f0 * f1 < 0.0 {
                        let (mut lo, mut hi) = (x0, x1);
                        for _ in 0..200 {
                            let mid = 0.5 * (lo + hi);
                            if horner(&c, lo) * horner(&c, mid) <= 0.0 {
                                hi = mid;
                            } else {
                                lo = mid;
                            }
                        }
                        roots.push(0.5 * (lo + hi));
                    }
                    x0 = x1;
                    f0 = f1;
                }
                let rule = radau_rule(a, q).unwrap();
                assert_eq!(roots.len(), q, "a={a}, q={q}");
                for (r_bis, r_rule) in roots.iter().zip(&rule.nodes) {
                    assert!(
                        (r_bis - r_rule).abs() <= 1e-12,
                        "a={a}, q={q}: {r_bis} vs {r_rule}"
                    );
                }
            }
        }
    }

    #[test]
    fn nodes_and_weights_depend_continuously_on_a() {
        for q in 1..=5 {
            let mut a = 0.0;
            while a <= 10.0 {
                let r1 = radau_rule(a, q).unwrap();
                let r2 = radau_rule(a + 1e-6, q).unwrap();
                for i in 0..=q {
                    assert!((r1.nodes[i] - r2.nodes[i]).abs() <= 1e-4);
                    assert!((r1.weights[i] - r2.weights[i]).abs() <= 1e-4);
                }
                a += 0.5;
            }
        }
    }

    #[test]
    fn lowest_node_stays_away_from_left_endpoint() {
        for q in 1..=5 {
            let mut worst = f64::INFINITY;
            let mut a = 0.0;
            while a <= 10.0 {
                let rule = radau_rule(a, q).unwrap();
                worst = worst.min(rule.nodes[0] + 1.0);
                a += 0.25;
            }
            assert!(worst >= 1e-3, "q={q}: min(r_0 + 1) = {worst}");
        }
    }

    #[test]
    fn vanishing_polynomial_norm_unweighted_value() {
        // chi(x) = (x + 1/3)(x - 1) / (4/3); int chi^2 dx = 4/15 by expansion
        let v = vanishing_polynomial_norm(0.0, 1).unwrap();
        assert_abs_diff_eq!(v, 4.0 / 15.0, epsilon = 1e-12);
        let oracle = integrate_adaptive(
            |x| {
                let chi = (x + 1.0 / 3.0) * (x - 1.0) / (4.0 / 3.0);
                chi * chi
            },
            -1.0,
            1.0,
            1e-15,
        );
        assert_abs_diff_eq!(v, oracle, epsilon = 1e-13);
    }

    #[test]
    fn vanishing_polynomial_interpolation_conditions() {
        let rule = radau_rule(1.7, 3).unwrap();
        let scale: f64 = rule.nodes.iter().map(|r| -1.0 - r).product();
        let chi = |x: f64| rule.nodes.iter().map(|r| x - r).product::<f64>() / scale;
        assert_abs_diff_eq!(chi(-1.0), 1.0, epsilon = 1e-14);
        for &r in &rule.nodes {
            assert_abs_diff_eq!(chi(r), 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn vanishing_polynomial_norm_bounded_over_parameter_grid() {
        // grid a in [0, 2*rho*T] with rho*T = 10
        for q in 1..=5 {
            let base = vanishing_polynomial_norm(0.0, q).unwrap();
            let mut a = 0.0;
            while a <= 20.0 {
                let v = vanishing_polynomial_norm(a, q).unwrap();
                assert!(v.is_finite() && v >= 0.0);
                assert!(v <= 10.0 * base, "q={q}, a={a}: {v} vs base {base}");
                a += 0.5;
            }
        }
    }

    #[test]
    fn random_polynomial_exactness() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for &a in &[0.0, 0.1, 1.0, 5.0] {
            for q in 1..=5 {
                let rule = radau_rule(a, q).unwrap();
                let mu = moments(a, 2 * q).unwrap();
                for _ in 0..50 {
                    let coeffs: Vec<f64> =
                        (0..=2 * q).map(|_| rng.random_range(-1.0..1.0)).collect();
                    let quad = rule.integrate(|x| horner(&coeffs, x));
                    let exact: f64 = coeffs.iter().zip(&mu).map(|(c, m)| c * m).sum();
                    let coeff_mass: f64 = coeffs.iter().map(|c| c.abs()).sum();
                    assert!(
                        (quad - exact).abs() <= 1e-11 * (1.0 + coeff_mass),
                        "a={a}, q={q}: {quad} vs {exact}"
                    );
                }
            }
        }
    }
}
