//! Wolff potentials `W_{β,γ}` and Riesz potentials `I_α` of radial sources.
//!
//! Both operators share the layer-cake form
//! `prefactor · ∫_0^∞ (m(ρ,t) / t^{n−s})^{e} dt/t`, where `m(ρ,t)` is the
//! source mass of the ball `B_t(x)`, `|x| = ρ`. The Wolff potential has
//! `s = βγ`, `e = 1/(γ−1)` and prefactor 1; the Riesz potential has `s = α`,
//! `e = 1` and prefactor `n − α`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use std::f64::consts::PI;

use crate::geometry::{ln_gamma_half, sphere_area, CapKernel, MassProfile};
use crate::params::Parameters;
use crate::quad::{gl8, gl8_integrate, laguerre_integrate, EXPONENT_TOL};
use crate::radial::{RadialFunction, RadialGrid};

/// Truncation and resolution of the outer `t`-integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialConfig {
    /// Lower truncation; defaults to a tenth of the smallest grid radius.
    #[serde(default)]
    pub t_min: Option<f64>,
    /// Upper truncation; defaults to a hundred times the largest grid radius.
    #[serde(default)]
    pub t_max: Option<f64>,
    #[serde(default = "default_nodes_per_decade")]
    pub t_nodes_per_decade: usize,
    /// Adds the `t > t_max` contribution analytically.
    #[serde(default = "default_tail_correction")]
    pub tail_correction: bool,
}

fn default_nodes_per_decade() -> usize {
    16
}

fn default_tail_correction() -> bool {
    true
}

impl Default for PotentialConfig {
    fn default() -> Self {
        PotentialConfig {
            t_min: None,
            t_max: None,
            t_nodes_per_decade: default_nodes_per_decade(),
            tail_correction: default_tail_correction(),
        }
    }
}

impl PotentialConfig {
    pub fn with_nodes_per_decade(mut self, nodes: usize) -> Self {
        self.t_nodes_per_decade = nodes;
        self
    }

    /// Truncation pair for profiles living on `[r_min, r_max]`.
    pub fn resolve(&self, r_min: f64, r_max: f64) -> Result<(f64, f64)> {
        if self.t_nodes_per_decade < 16 {
            return Err(Error::InvalidArgument(format!(
                "t_nodes_per_decade = {} < 16",
                self.t_nodes_per_decade
            )));
        }
        let t_min = self.t_min.unwrap_or(r_min / 10.0);
        let t_max = self.t_max.unwrap_or(100.0 * r_max);
        if !(t_min > 0.0 && t_min < r_min) {
            return Err(Error::InvalidArgument(format!(
                "t_min = {t_min} must lie in (0, r_min = {r_min})"
            )));
        }
        if !(t_max > 4.0 * r_max && t_max.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "t_max = {t_max} must exceed 4 r_max = {}",
                4.0 * r_max
            )));
        }
        Ok((t_min, t_max))
    }
}

/// Order data `(n, β, γ)` of a Wolff potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WolffOrder {
    pub n: u32,
    pub beta: f64,
    pub gamma: f64,
}

impl WolffOrder {
    pub fn new(n: u32, beta: f64, gamma: f64) -> Result<Self> {
        let order = WolffOrder { n, beta, gamma };
        order.check()?;
        Ok(order)
    }

    fn check(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidParameters(format!("dimension {} < 2", self.n)));
        }
        if !(self.gamma > 1.0 && self.gamma <= 2.0) {
            return Err(Error::InvalidParameters("gamma out of (1,2]".into()));
        }
        if !(self.beta > 0.0) {
            return Err(Error::InvalidParameters("beta > 0 violated".into()));
        }
        if !(self.beta * self.gamma < self.n as f64) {
            return Err(Error::InvalidParameters("beta*gamma < n violated".into()));
        }
        Ok(())
    }

    /// The fast decay exponent `(n − βγ)/(γ − 1)`.
    pub fn fast_rate(&self) -> f64 {
        (self.n as f64 - self.beta * self.gamma) / (self.gamma - 1.0)
    }
}

impl From<&Parameters> for WolffOrder {
    fn from(p: &Parameters) -> Self {
        WolffOrder {
            n: p.n,
            beta: p.beta,
            gamma: p.gamma,
        }
    }
}

/// A layer-cake potential operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerCake {
    n: u32,
    /// `βγ` (Wolff) or `α` (Riesz).
    order: f64,
    /// `1/(γ − 1)` (Wolff) or 1 (Riesz).
    power: f64,
    prefactor: f64,
}

impl LayerCake {
    pub fn wolff(order: WolffOrder) -> Result<Self> {
        order.check()?;
        Ok(LayerCake {
            n: order.n,
            order: order.beta * order.gamma,
            power: 1.0 / (order.gamma - 1.0),
            prefactor: 1.0,
        })
    }

    pub fn riesz(n: u32, alpha: f64) -> Result<Self> {
        if n < 2 || !(alpha > 0.0 && alpha < n as f64) {
            return Err(Error::InvalidParameters(format!(
                "Riesz order alpha = {alpha} outside (0, {n})"
            )));
        }
        Ok(LayerCake {
            n,
            order: alpha,
            power: 1.0,
            prefactor: n as f64 - alpha,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Decay exponent `(n − s)·e` of the potential of a finite-mass source.
    pub fn fast_rate(&self) -> f64 {
        (self.n as f64 - self.order) * self.power
    }

    /// Prepares evaluation of the potential of `f`.
    pub fn prepare(&self, f: &RadialFunction, cfg: &PotentialConfig) -> Result<Evaluator> {
        let grid = f.grid();
        let (t_min, t_max) = cfg.resolve(grid.r_min(), grid.r_max())?;
        let kernel = CapKernel::new(self.n)?;
        let mass = MassProfile::new(kernel, f)?;
        let dim = self.n as f64;
        let order_tol = EXPONENT_TOL * dim;
        let has_tail = !f.has_hard_cutoff() && f.values()[f.values().len() - 1] > 0.0;
        let k = f.tail_exponent();
        if mass.total_mass().is_none() && k - self.order <= order_tol {
            return Err(Error::Divergent(format!(
                "source tail r^-{k} makes the potential of order {} diverge",
                self.order
            )));
        }
        // decay of the t-integrand beyond t_max, and of the potential itself
        let (tail_decay, out_tail, out_log) = if !has_tail || k - dim > order_tol {
            (self.fast_rate(), self.fast_rate(), 0.0)
        } else if (k - dim).abs() <= order_tol {
            (self.fast_rate(), self.fast_rate(), (f.tail_log_power() + 1.0) * self.power)
        } else {
            let d = (k - self.order) * self.power;
            (d, d, f.tail_log_power() * self.power)
        };
        let head = f.head_exponent();
        let out_head = if f.values()[0] > 0.0 {
            ((head - self.order) * self.power).max(0.0)
        } else {
            0.0
        };
        let slope = self.order.max(dim - self.order) * self.power;
        let cells_per_decade = (cfg.t_nodes_per_decade as f64 / 8.0)
            .ceil()
            .max((std::f64::consts::LN_10 * slope / 3.0).ceil());
        Ok(Evaluator {
            op: *self,
            mass,
            t_min,
            t_max,
            tail_correction: cfg.tail_correction,
            tail_decay,
            out_head,
            out_tail,
            out_log,
            cell_width: std::f64::consts::LN_10 / cells_per_decade,
        })
    }
}

/// A potential operator bound to one source profile.
#[derive(Debug, Clone)]
pub struct Evaluator {
    op: LayerCake,
    mass: MassProfile,
    t_min: f64,
    t_max: f64,
    tail_correction: bool,
    tail_decay: f64,
    out_head: f64,
    out_tail: f64,
    out_log: f64,
    /// Width of one quadrature cell in `τ = ln t`.
    cell_width: f64,
}

impl Evaluator {
    pub fn mass_profile(&self) -> &MassProfile {
        &self.mass
    }

    /// Head exponent, tail exponent and tail log power of the potential.
    pub fn asymptotics(&self) -> (f64, f64, f64) {
        (self.out_head, self.out_tail, self.out_log)
    }

    #[inline]
    fn integrand(&self, m: f64, tau: f64) -> f64 {
        if m <= 0.0 {
            return 0.0;
        }
        let dim = self.op.n as f64;
        (self.op.power * (m.ln() - (dim - self.op.order) * tau)).exp()
    }

    /// Potential at a point with `|x| = ρ` (`ρ = 0` allowed).
    pub fn value_at(&self, rho: f64) -> f64 {
        let dim = self.op.n as f64;
        let f = self.mass.profile();
        let grid = f.grid();
        let (r_min, r_max) = (grid.r_min(), grid.r_max());
        let t_lo = if rho > 0.0 { self.t_min.min(0.01 * rho) } else { self.t_min };
        // the tail model needs t ≫ ρ; widen the window for far-out points
        let t_hi = self.t_max.max(100.0 * rho);
        let (lo, hi) = (t_lo.ln(), t_hi.ln());

        // head t < t_lo: m(ρ,t) ≈ C t^κ with κ = n (ρ > 0) or n − h (ρ = 0)
        let mut total = 0.0;
        let m_lo = self.mass.ball_mass(rho, t_lo);
        if m_lo > 0.0 {
            let kappa = if rho > 0.0 { dim } else { dim - f.head_exponent() };
            let c = kappa - dim + self.op.order;
            if c <= 0.0 {
                return f64::INFINITY;
            }
            total += self.integrand(m_lo, lo) / (self.op.power * c);
        }

        // body: composite Gauss-Legendre in τ, split where m(ρ,·) has kinks
        let mut breaks = vec![lo, hi];
        for t in [rho, (rho - r_min).abs(), rho + r_min, (rho - r_max).abs(), rho + r_max] {
            if t > t_lo && t < t_hi {
                breaks.push(t.ln());
            }
        }
        // mass near the origin enters m(ρ,·) over t ∈ ρ ± r, a window much
        // narrower than a cell when r ≪ ρ; grade the panels geometrically toward ρ
        let mut r = r_min;
        while r < 0.1 * rho {
            for t in [rho - r, rho + r] {
                if t > t_lo && t < t_hi {
                    breaks.push(t.ln());
                }
            }
            r *= 4.0;
        }
        breaks.sort_by(|a, b| a.total_cmp(b));
        breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        let nodes = gl8();
        for w in breaks.windows(2) {
            let len = w[1] - w[0];
            let cells = (len / self.cell_width).ceil().max(1.0) as usize;
            let h = len / cells as f64;
            for j in 0..cells {
                let a = w[0] + h * j as f64;
                let mid = a + 0.5 * h;
                let mut acc = 0.0;
                for &(x, wt) in nodes {
                    let tau = mid + 0.5 * h * x;
                    acc += wt * self.integrand(self.mass.ball_mass(rho, tau.exp()), tau);
                }
                total += 0.5 * h * acc;
            }
        }

        // tail t > t_max: m(ρ,t) ≈ m(ρ,t_max) + ∫_{t_max<|y|<t} f
        if self.tail_correction {
            let m_hi = self.mass.ball_mass(rho, t_hi);
            let cum_hi = self.mass.cumulative_mass(t_hi);
            let d = self.tail_decay;
            let dim_gap = dim - self.op.order;
            // slow tails overflow the mass far out; there ln m is linear in τ,
            // so it is continued from the last two finite nodes
            let mut last: [Option<(f64, f64)>; 2] = [None, None];
            total += laguerre_integrate(d, |y| {
                let tau = hi + y;
                let m = m_hi + (self.mass.cumulative_mass(tau.exp()) - cum_hi).max(0.0);
                let ln_m = if m.is_finite() {
                    if m <= 0.0 {
                        return 0.0;
                    }
                    last = [last[1], Some((tau, m.ln()))];
                    m.ln()
                } else {
                    match last {
                        [Some((t0, l0)), Some((t1, l1))] => l1 + (l1 - l0) / (t1 - t0) * (tau - t1),
                        _ => return f64::INFINITY,
                    }
                };
                (self.op.power * (ln_m - dim_gap * tau) + d * y).exp()
            });
        }
        self.op.prefactor * total
    }

    /// Potential sampled on `grid`, with the derived head and tail models.
    pub fn eval_on(&self, grid: &RadialGrid) -> Result<RadialFunction> {
        let values: Vec<f64> = grid.points().par_iter().map(|&rho| self.value_at(rho)).collect();
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Divergent(format!(
                "potential is not finite at r = {}",
                grid.points()[i]
            )));
        }
        let log = if self.out_log != 0.0 && grid.r_max() <= 1.0 { 0.0 } else { self.out_log };
        RadialFunction::new(grid.clone(), values, self.out_head, self.out_tail, log)
    }
}

/// `W_{β,γ}(f)` sampled on `eval_grid`.
pub fn wolff_eval(
    order: WolffOrder,
    f: &RadialFunction,
    cfg: &PotentialConfig,
    eval_grid: &RadialGrid,
) -> Result<RadialFunction> {
    check_eval_grid(f, cfg, eval_grid)?;
    LayerCake::wolff(order)?.prepare(f, cfg)?.eval_on(eval_grid)
}

/// `I_α(f) = ∫ f(y)|x − y|^{α−n} dy` sampled on `eval_grid`.
pub fn riesz_eval(
    n: u32,
    alpha: f64,
    f: &RadialFunction,
    cfg: &PotentialConfig,
    eval_grid: &RadialGrid,
) -> Result<RadialFunction> {
    check_eval_grid(f, cfg, eval_grid)?;
    LayerCake::riesz(n, alpha)?.prepare(f, cfg)?.eval_on(eval_grid)
}

/// `I_α(f)(x)` at `|x| = ρ` by direct convolution with `|x − y|^{α−n}`.
///
/// Independent of the layer-cake machinery: the source is integrated in
/// `ln r` against the spherical mean of the kernel, with panels graded
/// geometrically toward the coincidence `r = ρ`. Slow but accurate; meant as
/// a reference for [`riesz_eval`].
pub fn riesz_convolution_at(n: u32, alpha: f64, f: &RadialFunction, rho: f64) -> Result<f64> {
    let op = LayerCake::riesz(n, alpha)?;
    let dim = n as f64;
    let lambda = dim - op.order;
    let grid = f.grid();
    let head_gap = dim - f.head_exponent();
    if head_gap <= 0.0 {
        return Ok(f64::INFINITY);
    }
    let tail_gap = f.tail_exponent() - alpha;
    let has_tail = !f.has_hard_cutoff() && f.values()[f.values().len() - 1] > 0.0;
    if has_tail && tail_gap <= 0.0 {
        return Ok(f64::INFINITY);
    }

    // the integrand beyond the grid decays like e^{-gap·|τ|}; 40/gap makes the rest negligible
    let mut lo = grid.r_min().ln() - 40.0 / head_gap;
    let mut hi = if has_tail { grid.r_max().ln() + 40.0 / tail_gap } else { grid.r_max().ln() };
    let mut breaks: Vec<f64> = grid.log_points().to_vec();
    if rho > 0.0 {
        let c = rho.ln();
        lo = lo.min(c - 1.0);
        hi = hi.max(c + 1.0);
        breaks.push(c);
        // grading starts well above the rounding level of ln ρ
        let mut d = 1e-13 * c.abs().max(1.0);
        while d < 1.0 {
            breaks.extend([c - d, c + d]);
            d *= 2.0;
        }
    }
    breaks.extend([lo, hi]);
    breaks.retain(|t| *t >= lo && *t <= hi);
    breaks.sort_by(|a, b| a.total_cmp(b));
    // merge near-coincident breaks (e.g. ρ on a grid node) below the grading scale
    breaks.dedup_by(|a, b| (*a - *b).abs() < 5e-14 * b.abs().max(1.0));

    let integrand = |tau: f64| {
        let r = tau.exp();
        let v = f.eval(r);
        if v == 0.0 {
            return 0.0;
        }
        let gap = rho * (tau - rho.ln()).exp_m1().abs();
        if rho > 0.0 && gap == 0.0 {
            return 0.0;
        }
        let mean = if rho > 0.0 {
            kernel_sphere_mean(n, lambda, rho, r, gap)
        } else {
            r.powf(-lambda)
        };
        v * r.powf(dim) * mean
    };
    let mut total = 0.0;
    for w in breaks.windows(2) {
        let cells = ((w[1] - w[0]) / 0.25).ceil().max(1.0) as usize;
        let h = (w[1] - w[0]) / cells as f64;
        for j in 0..cells {
            let a = w[0] + h * j as f64;
            total += gl8_integrate(a, a + h, integrand);
        }
    }
    Ok(sphere_area(n) * total)
}

/// Average of `|ρe − rω|^{−λ}` over unit vectors `ω`; `gap = |ρ − r|`.
fn kernel_sphere_mean(n: u32, lambda: f64, rho: f64, r: f64, gap: f64) -> f64 {
    let m = n as i32 - 2;
    let ring = |theta: f64| {
        let half = (0.5 * theta).sin();
        let d2 = gap * gap + 4.0 * rho * r * half * half;
        d2.powf(-0.5 * lambda) * theta.sin().powi(m)
    };
    // the integrand is peaked in a cone of opening ~ gap/√(ρr) around θ = 0
    let mut width = (gap / (rho * r).sqrt()).max(1e-300);
    let mut acc = 0.0;
    let mut a = 0.0;
    while a < PI {
        let b = (a + width).min(PI);
        acc += gl8_integrate(a, b, ring);
        a = b;
        width = (2.0 * width).max(b);
    }
    // normalization ∫_0^π sin^{n−2}θ dθ
    let norm = PI.sqrt() * (ln_gamma_half(n - 1) - ln_gamma_half(n)).exp();
    acc / norm
}

fn check_eval_grid(f: &RadialFunction, cfg: &PotentialConfig, eval_grid: &RadialGrid) -> Result<()> {
    let r_min = f.grid().r_min().min(eval_grid.r_min());
    let r_max = f.grid().r_max().max(eval_grid.r_max());
    cfg.resolve(r_min, r_max).map(|_| ())
}

/// `r ↦ r^σ f(r)^e` with head and tail exponents carried along.
pub fn weighted_source(sigma: f64, exponent: f64, f: &RadialFunction) -> Result<RadialFunction> {
    let values = f
        .grid()
        .points()
        .iter()
        .zip(f.values())
        .map(|(&r, &v)| {
            if v == 0.0 {
                0.0
            } else {
                r.powf(sigma) * v.powf(exponent)
            }
        })
        .collect();
    let tail = if f.has_hard_cutoff() {
        f64::INFINITY
    } else {
        exponent * f.tail_exponent() - sigma
    };
    RadialFunction::new(
        f.grid().clone(),
        values,
        exponent * f.head_exponent() - sigma,
        tail,
        exponent * f.tail_log_power(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ball_volume;

    fn indicator() -> RadialFunction {
        RadialFunction::indicator(1.0, 1e-2, 33).unwrap()
    }

    fn eval_grid() -> RadialGrid {
        RadialGrid::with_density(1e-2, 1e3, 8).unwrap()
    }

    #[test]
    fn wolff_of_indicator_at_origin() {
        for &(n, beta, gamma) in &[(3, 1.0, 2.0), (5, 1.0, 1.5), (4, 0.7, 1.2), (6, 2.0, 1.9)] {
            let order = WolffOrder::new(n, beta, gamma).unwrap();
            let ev = LayerCake::wolff(order).unwrap().prepare(&indicator(), &PotentialConfig::default()).unwrap();
            let bg = beta * gamma;
            let exact = ball_volume(n).powf(1.0 / (gamma - 1.0))
                * ((gamma - 1.0) / bg + (gamma - 1.0) / (n as f64 - bg));
            let v = ev.value_at(0.0);
            assert!((v - exact).abs() < 1e-6 * exact, "{n} {beta} {gamma}: {v} vs {exact}");
        }
    }

    #[test]
    fn riesz_of_indicator_at_origin() {
        let ev = LayerCake::riesz(5, 2.0).unwrap().prepare(&indicator(), &PotentialConfig::default()).unwrap();
        let exact = sphere_area(5) / 2.0;
        assert!((ev.value_at(0.0) - exact).abs() < 1e-8 * exact);
    }

    #[test]
    fn riesz_of_concentrated_mass_is_the_kernel() {
        // unit mass in a tiny ball seen from far away
        let eps = 1e-4;
        let f = RadialFunction::indicator(eps, eps * 1e-2, 20)
            .unwrap()
            .scaled(1.0 / (ball_volume(3) * eps.powi(3)))
            .unwrap();
        let cfg = PotentialConfig::default();
        let ev = LayerCake::riesz(3, 2.0).unwrap().prepare(&f, &cfg).unwrap();
        for &x in &[0.01, 1.0, 30.0] {
            let v = ev.value_at(x);
            assert!((v * x - 1.0).abs() < 1e-6, "x = {x}: {v}");
        }
    }

    #[test]
    fn wolff_equals_riesz_over_n_minus_alpha_at_gamma_two() {
        let g = RadialGrid::with_density(1e-2, 1e3, 8).unwrap();
        let f = RadialFunction::from_fn(g.clone(), |r| (1.0 + r * r).powf(-2.5), 0.0, 5.0, 0.0).unwrap();
        let cfg = PotentialConfig::default();
        let w = wolff_eval(WolffOrder::new(5, 1.0, 2.0).unwrap(), &f, &cfg, &g).unwrap();
        let i = riesz_eval(5, 2.0, &f, &cfg, &g).unwrap();
        for (a, b) in w.values().iter().zip(i.values()) {
            assert!((a - b / 3.0).abs() < 1e-12 * a);
        }
        assert_eq!(w.tail_exponent(), 3.0);
    }

    #[test]
    fn homogeneity() {
        let f = RadialFunction::from_fn(eval_grid(), |r| (-r * r).exp(), 0.0, f64::INFINITY, 0.0).unwrap();
        let order = WolffOrder::new(4, 1.0, 1.5).unwrap();
        let cfg = PotentialConfig::default();
        let a = wolff_eval(order, &f, &cfg, &eval_grid()).unwrap();
        let b = wolff_eval(order, &f.scaled(3.0).unwrap(), &cfg, &eval_grid()).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            assert!((y - 9.0 * x).abs() <= 1e-12 * y);
        }
    }

    #[test]
    fn slow_source_tail_sets_output_tail() {
        let g = eval_grid();
        let f = RadialFunction::from_fn(g.clone(), |r| (1.0 + r * r).powf(-1.5), 0.0, 3.0, 0.0).unwrap();
        let ev = LayerCake::wolff(WolffOrder::new(5, 1.0, 2.0).unwrap())
            .unwrap()
            .prepare(&f, &PotentialConfig::default())
            .unwrap();
        assert_eq!(ev.asymptotics(), (0.0, 1.0, 0.0));
        let f = RadialFunction::from_fn(g, |r| (1.0 + r * r).powf(-0.5), 0.0, 1.0, 0.0).unwrap();
        assert!(matches!(
            LayerCake::wolff(WolffOrder::new(5, 1.0, 2.0).unwrap()).unwrap().prepare(&f, &PotentialConfig::default()),
            Err(Error::Divergent(_))
        ));
    }

    #[test]
    fn weighted_source_exponents() {
        let f = RadialFunction::from_fn(eval_grid(), |r| (1.0 + r).powi(-3), 0.0, 3.0, 0.5).unwrap();
        let g = weighted_source(-1.0, 2.0, &f).unwrap();
        assert_eq!(g.tail_exponent(), 7.0);
        assert_eq!(g.head_exponent(), 1.0);
        assert_eq!(g.tail_log_power(), 1.0);
        let r = f.grid().points()[5];
        assert_eq!(g.values()[5], r.powf(-1.0) * f.values()[5].powf(2.0));
        assert_eq!(weighted_source(0.0, 1.0, &f).unwrap(), f);
    }

    #[test]
    fn config_invariants() {
        let cfg = PotentialConfig {
            t_min: Some(1.0),
            ..PotentialConfig::default()
        };
        assert!(cfg.resolve(0.1, 100.0).is_err());
        let cfg = PotentialConfig {
            t_max: Some(300.0),
            ..PotentialConfig::default()
        };
        assert!(cfg.resolve(0.1, 100.0).is_err());
        assert!(PotentialConfig::default().with_nodes_per_decade(8).resolve(0.1, 100.0).is_err());
    }

    #[test]
    fn layer_cake_riesz_matches_direct_convolution() {
        let g = RadialGrid::with_density(1e-2, 1e3, 12).unwrap();
        let cfg = PotentialConfig::default();
        let sources = [
            indicator(),
            RadialFunction::from_fn(g.clone(), |r| (1.0 + r * r).powf(-3.5), 0.0, 7.0, 0.0).unwrap(),
        ];
        for &(n, alpha) in &[(3, 0.5), (3, 1.0), (5, 2.0), (6, 3.0)] {
            for f in &sources {
                let layered = riesz_eval(n, alpha, f, &cfg, &g).unwrap();
                for (k, &rho) in g.points().iter().enumerate().step_by(7) {
                    let direct = riesz_convolution_at(n, alpha, f, rho).unwrap();
                    let v = layered.values()[k];
                    assert!((v / direct - 1.0).abs() < 1e-4, "n {n}, alpha {alpha}, rho {rho}: {v} vs {direct}");
                }
            }
        }
    }

    #[test]
    fn direct_convolution_at_origin() {
        let direct = riesz_convolution_at(5, 2.0, &indicator(), 0.0).unwrap();
        let exact = sphere_area(5) / 2.0;
        assert!((direct / exact - 1.0).abs() < 1e-10);
    }

    #[test]
    fn barely_admissible_tail_in_high_dimension() {
        // the source mass grows like t^{n-k} far out, beyond f64 range at the outer nodes
        let g = eval_grid();
        let f = RadialFunction::from_fn(g.clone(), |r| (1.0 + r * r).powf(-1.75), 0.0, 3.5, 0.0).unwrap();
        let i = riesz_eval(6, 3.0, &f, &PotentialConfig::default(), &g).unwrap();
        assert!(i.values().iter().all(|v| v.is_finite() && *v > 0.0));
        let direct = riesz_convolution_at(6, 3.0, &f, 1.0).unwrap();
        assert!((i.eval(1.0) / direct - 1.0).abs() < 1e-4);
    }
}
