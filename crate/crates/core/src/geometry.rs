//! Reduction of ball integrals of radial functions to one-dimensional
//! integrals through the fraction of a sphere lying inside a ball.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quad::{gl8, gl8_integrate, pow_log_integral, EXPONENT_TOL};
use crate::radial::RadialFunction;

/// `ln Γ(k/2)` for a positive integer `k`, exact up to rounding.
pub(crate) fn ln_gamma_half(k: u32) -> f64 {
    assert!(k > 0, "ln_gamma_half needs k > 0");
    // Γ(1) = 1, Γ(1/2) = √π, Γ(x + 1) = x Γ(x)
    let (mut acc, mut x) = if k % 2 == 0 { (0.0, 1.0) } else { (0.5 * PI.ln(), 0.5) };
    let target = k as f64 / 2.0;
    while x < target - 0.25 {
        acc += x.ln();
        x += 1.0;
    }
    acc
}

/// Volume `ω_n = π^{n/2}/Γ(n/2 + 1)` of the unit ball in `ℝⁿ`.
pub fn ball_volume(n: u32) -> f64 {
    (0.5 * n as f64 * PI.ln() - ln_gamma_half(n + 2)).exp()
}

/// Surface measure `s_{n−1} = n ω_n` of the unit sphere in `ℝⁿ`.
pub fn sphere_area(n: u32) -> f64 {
    n as f64 * ball_volume(n)
}

/// Regularized incomplete beta `I_x(a, b)`, with `y = 1 − x` supplied
/// separately so that arguments near 1 keep their precision.
pub fn regularized_incomplete_beta(x: f64, y: f64, a: f64, b: f64, ln_beta: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if y <= 0.0 {
        return 1.0;
    }
    let front = (a * x.ln() + b * y.ln() - ln_beta).exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_continued_fraction(x, a, b) / a
    } else {
        1.0 - front * beta_continued_fraction(y, b, a) / b
    }
}

/// Modified Lentz evaluation of the incomplete-beta continued fraction.
fn beta_continued_fraction(x: f64, a: f64, b: f64) -> f64 {
    const TINY: f64 = 1e-300;
    const EPS: f64 = 1e-16;
    let (qab, qap, qam) = (a + b, a + 1.0, a - 1.0);
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..300 {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Normalized spherical-cap measure in dimension `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapKernel {
    n: u32,
    a: f64,
    ln_beta: f64,
    sphere_area: f64,
}

impl CapKernel {
    pub fn new(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("dimension {n} < 2")));
        }
        // B((n−1)/2, 1/2) = Γ((n−1)/2) Γ(1/2) / Γ(n/2)
        let ln_beta = ln_gamma_half(n - 1) + ln_gamma_half(1) - ln_gamma_half(n);
        Ok(CapKernel {
            n,
            a: 0.5 * (n as f64 - 1.0),
            ln_beta,
            sphere_area: sphere_area(n),
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn sphere_area(&self) -> f64 {
        self.sphere_area
    }

    pub fn ball_volume(&self) -> f64 {
        self.sphere_area / self.n as f64
    }

    /// Fraction of the sphere of polar angles `θ < θ*`, given `1 − cos θ*`
    /// and `1 + cos θ*` as separately computed (nonnegative) factors.
    #[inline]
    pub(crate) fn fraction_from_factors(&self, one_minus_c: f64, one_plus_c: f64) -> f64 {
        let one_minus_c = one_minus_c.clamp(0.0, 2.0);
        let one_plus_c = one_plus_c.clamp(0.0, 2.0);
        let c = 0.5 * (one_plus_c - one_minus_c);
        let sin2 = (one_minus_c * one_plus_c).min(1.0);
        let cos2 = c * c;
        let half = 0.5 * regularized_incomplete_beta(sin2, cos2, self.a, 0.5, self.ln_beta);
        if c >= 0.0 {
            half
        } else {
            1.0 - half
        }
    }

    /// Fraction of the sphere `|y| = r` lying inside the ball `B_t(x)`, `|x| = ρ`.
    pub fn cap_fraction(&self, rho: f64, t: f64, r: f64) -> Result<f64> {
        if !(t > 0.0) || !(r > 0.0) || !(rho >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "cap fraction needs rho >= 0, t > 0, r > 0 (got {rho}, {t}, {r})"
            )));
        }
        if r <= t - rho {
            return Ok(1.0);
        }
        if (rho - r).abs() >= t {
            return Ok(0.0);
        }
        let denom = 2.0 * rho * r;
        let one_minus_c = (t - rho + r) * (t + rho - r) / denom;
        let one_plus_c = (rho + r - t) * (rho + r + t) / denom;
        Ok(self.fraction_from_factors(one_minus_c, one_plus_c))
    }
}

/// Free-function form of [`CapKernel::cap_fraction`].
pub fn cap_fraction(kernel: &CapKernel, rho: f64, t: f64, r: f64) -> Result<f64> {
    kernel.cap_fraction(rho, t, r)
}

/// Precomputed cumulative masses `s_{n−1}∫_0^R f r^{n−1} dr` at the grid
/// nodes of a profile, answering ball-mass queries for many `(ρ, t)`.
#[derive(Debug, Clone)]
pub struct MassProfile {
    kernel: CapKernel,
    f: RadialFunction,
    /// Mass of the head `[0, r_min]`.
    head_mass: f64,
    /// Cumulative mass at each node.
    cumulative: Vec<f64>,
    total: Option<f64>,
}

impl MassProfile {
    pub fn new(kernel: CapKernel, f: &RadialFunction) -> Result<Self> {
        let n = kernel.n() as f64;
        let values = f.values();
        let grid = f.grid();
        let head_mass = if values[0] > 0.0 {
            let c = n - f.head_exponent();
            if c <= EXPONENT_TOL * n {
                return Err(Error::Divergent(format!(
                    "head exponent {} is not integrable at the origin in dimension {}",
                    f.head_exponent(),
                    kernel.n()
                )));
            }
            kernel.sphere_area() * values[0] * grid.r_min().powf(n) / c
        } else {
            0.0
        };
        let mut cumulative = Vec::with_capacity(grid.len());
        let mut acc = head_mass;
        cumulative.push(acc);
        for k in 0..grid.len() - 1 {
            acc += kernel.sphere_area() * cell_mass(f, n, k, grid.log_points()[k + 1]);
            cumulative.push(acc);
        }
        let mut profile = MassProfile {
            kernel,
            f: f.clone(),
            head_mass,
            cumulative,
            total: None,
        };
        profile.total = profile.tail_mass(f64::INFINITY).map(|m| acc + m);
        Ok(profile)
    }

    pub fn kernel(&self) -> &CapKernel {
        &self.kernel
    }

    pub fn profile(&self) -> &RadialFunction {
        &self.f
    }

    /// `∫_{ℝⁿ} f`, or `None` when the tail makes it diverge.
    pub fn total_mass(&self) -> Option<f64> {
        self.total
    }

    /// Mass of the tail model between `r_max` and `R` (`R` may be infinite).
    fn tail_mass(&self, big_r: f64) -> Option<f64> {
        let f = &self.f;
        let r_max = f.grid().r_max();
        let last = f.values()[f.values().len() - 1];
        if f.has_hard_cutoff() || last == 0.0 || big_r <= r_max {
            return Some(0.0);
        }
        let n = self.kernel.n() as f64;
        let c = n - f.tail_exponent();
        let c = if c.abs() <= EXPONENT_TOL * n { 0.0 } else { c };
        let y2 = if big_r.is_finite() { (big_r / r_max).ln() } else { f64::INFINITY };
        let x0 = r_max.ln();
        pow_log_integral(c, 0.0, y2, x0, f.tail_log_power())
            .map(|v| self.kernel.sphere_area() * last * r_max.powf(n) * v)
    }

    /// `∫_{B_R(0)} f`.
    pub fn cumulative_mass(&self, big_r: f64) -> f64 {
        if big_r <= 0.0 {
            return 0.0;
        }
        let f = &self.f;
        let grid = f.grid();
        let n = self.kernel.n() as f64;
        if big_r <= grid.r_min() {
            if self.head_mass == 0.0 {
                return 0.0;
            }
            return self.head_mass * (big_r / grid.r_min()).powf(n - f.head_exponent());
        }
        if big_r >= grid.r_max() {
            let body = self.cumulative[self.cumulative.len() - 1];
            return body + self.tail_mass(big_r).unwrap_or(f64::INFINITY);
        }
        let k = grid.cell_of(big_r);
        self.cumulative[k] + self.kernel.sphere_area() * cell_mass(f, n, k, big_r.ln())
    }

    /// `∫_{B_t(x)} f` for `|x| = ρ`.
    pub fn ball_mass(&self, rho: f64, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        if rho <= 0.0 {
            return self.cumulative_mass(t);
        }
        let full = if t > rho { self.cumulative_mass(t - rho) } else { 0.0 };
        full + self.partial_mass(rho, t)
    }

    /// Contribution of the shells `|t − ρ| < r < t + ρ` cut by the ball boundary.
    fn partial_mass(&self, rho: f64, t: f64) -> f64 {
        let f = &self.f;
        let grid = f.grid();
        let (r_min, r_max) = (grid.r_min(), grid.r_max());
        let a = (t - rho).abs();
        let b = t + rho;
        let width = b - a;
        if width <= 0.0 {
            return 0.0;
        }
        let upper = if f.has_hard_cutoff() { b.min(r_max) } else { b };
        if upper <= a {
            return 0.0;
        }
        let t_ge_rho = t >= rho;
        let n = self.kernel.n() as i32;

        // breakpoints in r, mapped to u through r = a + (b − a) sin²(πu/2)
        let mut breaks: Vec<f64> = Vec::with_capacity(32);
        let pts = grid.points();
        let lo_idx = pts.partition_point(|&x| x <= a);
        let hi_idx = pts.partition_point(|&x| x < upper);
        breaks.extend_from_slice(&pts[lo_idx..hi_idx]);
        if a < r_min {
            let mut s = r_min * 0.1;
            let floor = a.max(r_min * 1e-14);
            while s > floor {
                breaks.push(s);
                s *= 0.1;
            }
        }
        if upper > r_max {
            let step = 10f64.powf(0.25);
            let mut s = r_max.max(a) * step;
            while s < upper {
                breaks.push(s);
                s *= step;
            }
        }
        let to_u = |r: f64| -> f64 {
            let z = ((r - a) / width).clamp(0.0, 1.0);
            2.0 * z.sqrt().asin() / PI
        };
        let u_end = if upper >= b { 1.0 } else { to_u(upper) };
        let mut us: Vec<f64> = breaks.iter().map(|&r| to_u(r)).collect();
        us.push(0.0);
        us.push(u_end);
        // a few uniform splits keep every piece smooth enough for 8 nodes
        for j in 1..4 {
            let u = j as f64 * 0.25;
            if u < u_end {
                us.push(u);
            }
        }
        us.sort_by(|x, y| x.total_cmp(y));
        us.dedup_by(|x, y| (*x - *y).abs() <= 1e-15);

        let kernel = &self.kernel;
        let integrand = |u: f64| -> f64 {
            let (sn, cs) = (0.5 * PI * u).sin_cos();
            let d1 = width * sn * sn; // r − a
            let d2 = width * cs * cs; // b − r
            let r = a + d1;
            if r <= 0.0 {
                return 0.0;
            }
            let value = f.eval(r);
            if value == 0.0 {
                return 0.0;
            }
            let denom = 2.0 * rho * r;
            let (omc, opc) = if t_ge_rho {
                ((a + r) * d2 / denom, d1 * (r + b) / denom)
            } else {
                (d1 * d2 / denom, (r + a) * (r + b) / denom)
            };
            let frac = kernel.fraction_from_factors(omc, opc);
            // dr/du = (b − a) π sin(πu/2) cos(πu/2)
            value * frac * r.powi(n - 1) * width * PI * sn * cs
        };
        let mut acc = 0.0;
        for w in us.windows(2) {
            if w[1] > w[0] {
                acc += gl8_integrate(w[0], w[1], &integrand);
            }
        }
        kernel.sphere_area() * acc
    }
}

/// `∫_{r_k}^{R} f r^{n−1} dr` for `ln R = s_end` inside cell `k`.
fn cell_mass(f: &RadialFunction, n: f64, k: usize, s_end: f64) -> f64 {
    let lr = f.grid().log_points();
    let values = f.values();
    let (f0, f1) = (values[k], values[k + 1]);
    let s0 = lr[k];
    if s_end <= s0 || (f0 == 0.0 && f1 == 0.0) {
        return 0.0;
    }
    if f0 > 0.0 && f1 > 0.0 {
        // f r^n = f0 r_k^n exp(c (s − s0)), c = n + slope
        let slope = (f1.ln() - f0.ln()) / (lr[k + 1] - s0);
        let c = n + slope;
        let base = f0 * (n * s0).exp();
        let ds = s_end - s0;
        if (c * ds).abs() < 1e-300 {
            return base * ds;
        }
        return base * (c * ds).exp_m1() / c;
    }
    let mut acc = 0.0;
    let nodes = gl8();
    let half = 0.5 * (s_end - s0);
    let mid = 0.5 * (s_end + s0);
    for &(x, w) in nodes {
        let s = mid + half * x;
        acc += w * f.eval_in_cell(k, s.exp(), s) * (n * s).exp();
    }
    acc * half
}

/// `∫_{B_t(x)} f(y) dy` for `|x| = ρ`.
///
/// Builds the cumulative-mass table on every call; use [`MassProfile`] when
/// many queries share the same profile.
pub fn ball_mass(kernel: &CapKernel, f: &RadialFunction, rho: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) || !(rho >= 0.0) || !t.is_finite() || !rho.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "ball mass needs rho >= 0 and t > 0 finite (got {rho}, {t})"
        )));
    }
    let profile = MassProfile::new(*kernel, f)?;
    let m = profile.ball_mass(rho, t);
    if !m.is_finite() {
        return Err(Error::Divergent(format!(
            "mass of B_{t} at distance {rho} is not finite"
        )));
    }
    Ok(m)
}
