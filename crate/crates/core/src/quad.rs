//! Fixed quadrature rules and the power-log integrals used for analytic tails.

use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::{FiniteAboveNegOneF64, GaussLaguerre, GaussLegendre};

/// Relative tolerance under which two exponents are treated as equal.
pub(crate) const EXPONENT_TOL: f64 = 1e-12;

struct Rules {
    gl8: Vec<(f64, f64)>,
    gl24: Vec<(f64, f64)>,
    laguerre: Vec<(f64, f64)>,
}

fn legendre(degree: usize) -> Vec<(f64, f64)> {
    let rule = GaussLegendre::new(NonZeroUsize::new(degree).expect("nonzero degree"));
    let mut pairs: Vec<(f64, f64)> = rule.iter().map(|(x, w)| (*x, *w)).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs
}

fn rules() -> &'static Rules {
    static RULES: OnceLock<Rules> = OnceLock::new();
    RULES.get_or_init(|| {
        let alpha = FiniteAboveNegOneF64::new(0.0).expect("alpha = 0 is valid");
        let lag = GaussLaguerre::new(NonZeroUsize::new(40).expect("nonzero"), alpha);
        Rules {
            gl8: legendre(8),
            gl24: legendre(24),
            laguerre: lag.iter().map(|(x, w)| (*x, *w)).collect(),
        }
    })
}

/// 8-point Gauss-Legendre nodes and weights on [-1, 1].
pub(crate) fn gl8() -> &'static [(f64, f64)] {
    &rules().gl8
}

/// 8-point Gauss-Legendre on `[a, b]`.
#[inline]
pub(crate) fn gl8_integrate<F: FnMut(f64) -> f64>(a: f64, b: f64, mut f: F) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    let mut acc = 0.0;
    for &(x, w) in gl8() {
        acc += w * f(mid + half * x);
    }
    acc * half
}

/// 24-point Gauss-Legendre on `[a, b]`.
pub(crate) fn gl24_integrate<F: FnMut(f64) -> f64>(a: f64, b: f64, mut f: F) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    let mut acc = 0.0;
    for &(x, w) in &rules().gl24 {
        acc += w * f(mid + half * x);
    }
    acc * half
}

/// `∫_0^∞ e^{-d w} h(w) dw` for `d > 0` by 40-point Gauss-Laguerre.
pub(crate) fn laguerre_integrate<F: FnMut(f64) -> f64>(d: f64, mut h: F) -> f64 {
    let mut acc = 0.0;
    for &(z, w) in &rules().laguerre {
        acc += w * h(z / d);
    }
    acc / d
}

/// `∫_{y1}^{y2} e^{c y} ((x0 + y)/x0)^L dy` with `y2` possibly `+∞`.
///
/// Returns `None` when the integral diverges. `x0` must be positive whenever
/// `L != 0`; callers measure `y` from a reference radius whose logarithm is `x0`.
pub(crate) fn pow_log_integral(c: f64, y1: f64, y2: f64, x0: f64, log_power: f64) -> Option<f64> {
    if y2 <= y1 {
        return Some(0.0);
    }
    let scale = c.abs().max(1.0);
    let flat = c.abs() <= EXPONENT_TOL * scale;
    if log_power == 0.0 {
        if flat {
            return if y2.is_finite() { Some(y2 - y1) } else { None };
        }
        if !y2.is_finite() {
            return if c < 0.0 { Some(-(c * y1).exp() / c) } else { None };
        }
        return Some((c * y1).exp() * (c * (y2 - y1)).exp_m1() / c);
    }
    let g = |y: f64| ((x0 + y) / x0).powf(log_power);
    if flat {
        let up = log_power + 1.0;
        if !y2.is_finite() {
            return if up < 0.0 {
                Some(-x0 / up * ((x0 + y1) / x0).powf(up))
            } else {
                None
            };
        }
        if up.abs() < EXPONENT_TOL {
            return Some(x0 * ((x0 + y2) / (x0 + y1)).ln());
        }
        return Some(x0 / up * (((x0 + y2) / x0).powf(up) - ((x0 + y1) / x0).powf(up)));
    }
    if !y2.is_finite() {
        if c > 0.0 {
            return None;
        }
        let d = -c;
        return Some((c * y1).exp() * laguerre_integrate(d, |w| g(y1 + w)));
    }
    // finite window: composite rule on pieces of width ~1/|c|, walking away
    // from the dominant end until the exponential weight is negligible
    let width = y2 - y1;
    let piece = (2.0 / c.abs()).min(width);
    let pieces = (width / piece).ceil() as usize;
    let piece = width / pieces as f64;
    let mut acc = 0.0;
    for j in 0..pieces {
        let (a, b) = if c < 0.0 {
            (y1 + piece * j as f64, y1 + piece * (j + 1) as f64)
        } else {
            (y2 - piece * (j + 1) as f64, y2 - piece * j as f64)
        };
        let part = gl24_integrate(a, b, |y| (c * y).exp() * g(y));
        acc += part;
        if part.abs() <= 1e-18 * acc.abs() {
            break;
        }
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl8_is_exact_for_degree_fifteen() {
        let v = gl8_integrate(0.0, 2.0, |x| x.powi(15));
        assert!((v - 2f64.powi(16) / 16.0).abs() < 1e-9);
    }

    #[test]
    fn pow_log_plain_exponential() {
        let v = pow_log_integral(-3.0, 0.0, f64::INFINITY, 1.0, 0.0).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-15);
        assert!(pow_log_integral(0.5, 0.0, f64::INFINITY, 1.0, 0.0).is_none());
    }

    #[test]
    fn pow_log_linear_factor_matches_closed_form() {
        // ∫_0^∞ e^{-a y} (x0 + y)/x0 dy = 1/a + 1/(a^2 x0)
        let (a, x0) = (3.0, 11.5);
        let v = pow_log_integral(-a, 0.0, f64::INFINITY, x0, 1.0).unwrap();
        let exact = 1.0 / a + 1.0 / (a * a * x0);
        assert!((v - exact).abs() < 1e-13 * exact);
    }

    #[test]
    fn pow_log_finite_window_matches_composite_rule() {
        for &(c, l) in &[(-2.0, 0.7), (1.5, -0.4), (2.0, 2.0)] {
            let (y1, y2, x0) = (0.3, 4.0, 2.0);
            let v = pow_log_integral(c, y1, y2, x0, l).unwrap();
            let cells = 400;
            let h = (y2 - y1) / cells as f64;
            let brute: f64 = (0..cells)
                .map(|i| {
                    let a = y1 + h * i as f64;
                    gl8_integrate(a, a + h, |y| (c * y).exp() * ((x0 + y) / x0).powf(l))
                })
                .sum();
            assert!((v - brute).abs() < 1e-10 * brute.abs(), "{c} {l}: {v} vs {brute}");
        }
    }

    #[test]
    fn pow_log_borderline_log_divergence() {
        assert!(pow_log_integral(0.0, 0.0, f64::INFINITY, 2.0, -0.5).is_none());
        let v = pow_log_integral(0.0, 0.0, f64::INFINITY, 2.0, -3.0).unwrap();
        assert!((v - 1.0).abs() < 1e-14);
    }
}
