//! Test-only oracles: adaptive integration independent of the code paths it
//! is used to verify.

use crate::gauss;

/// Adaptive composite Gauss-Legendre integration with interval bisection.
///
/// Bisects until two successive composite levels agree to `tol` (absolute
/// plus relative), which for the smooth integrands used in the tests gives
/// results accurate to near machine precision.
pub fn integrate_adaptive<F: Fn(f64) -> f64 + Copy>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    fn composite<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, panels: usize) -> f64 {
        let rule = gauss::legendre(32);
        let h = (b - a) / panels as f64;
        let mut acc = 0.0;
        for p in 0..panels {
            let lo = a + p as f64 * h;
            acc += rule.integrate(lo, lo + h, |x| f(x));
        }
        acc
    }
    let mut panels = 1;
    let mut prev = composite(&f, a, b, panels);
    for _ in 0..12 {
        panels *= 2;
        let next = composite(&f, a, b, panels);
        if (next - prev).abs() <= tol * (1.0 + next.abs()) {
            return next;
        }
        prev = next;
    }
    prev
}

/// Least-squares slope of `ln(errors)` against `ln(scales)`; the observed
/// convergence order when `scales` are mesh widths.
pub fn regression_slope(scales: &[f64], errors: &[f64]) -> f64 {
    assert_eq!(scales.len(), errors.len());
    let n = scales.len() as f64;
    let xs: Vec<f64> = scales.iter().map(|s| s.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let xm = xs.iter().sum::<f64>() / n;
    let ym = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn adaptive_integration_handles_smooth_and_weighted_integrands() {
        let v = integrate_adaptive(|x| x.exp(), 0.0, 1.0, 1e-14);
        assert_abs_diff_eq!(v, 1.0f64.exp() - 1.0, epsilon = 1e-13);
        let v = integrate_adaptive(|x| (-3.0 * (x + 1.0)).exp() * x * x, -1.0, 1.0, 1e-14);
        // antiderivative by parts: closed form for int x^2 e^{-3(x+1)}
        let anti = |x: f64| -(-3.0 * (x + 1.0)).exp() * (x * x / 3.0 + 2.0 * x / 9.0 + 2.0 / 27.0);
        assert_abs_diff_eq!(v, anti(1.0) - anti(-1.0), epsilon = 1e-14);
    }

    #[test]
    fn regression_slope_recovers_exact_order() {
        let scales = [0.25, 0.125, 0.0625, 0.03125];
        let errors: Vec<f64> = scales.iter().map(|h| 3.0 * h * h * h).collect();
        assert_abs_diff_eq!(regression_slope(&scales, &errors), 3.0, epsilon = 1e-12);
    }
}
