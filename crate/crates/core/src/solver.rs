//! Fixed-point iteration for the coupled Wolff system
//! `u = c₁ W_{β,γ}(r^{σ₁} v^q)`, `v = c₂ W_{β,γ}(r^{σ₂} u^p)`.
//!
//! Both equations are homogeneous, so the iteration works on shapes: after
//! each damped step `u` and `v` are rescaled to a fixed normalization, and the
//! amplitudes of the true solution are recovered once the shapes settle.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{CapKernel, MassProfile};
use crate::params::{classify_regime, subcriticality, validate, exponents, Parameters, RegimeReport, Subcriticality};
use crate::potential::{weighted_source, LayerCake, PotentialConfig, WolffOrder};
use crate::radial::{fit_decay_rate, RadialFunction, RadialGrid, RateFit};

/// Iterates leaving `[OVERFLOW_GUARD⁻¹, OVERFLOW_GUARD]` are reported as degenerate.
pub const OVERFLOW_GUARD: f64 = 1e150;

/// How the scaling freedom of the homogeneous system is removed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// `u(1)` and `v(1)` are held at their initial values.
    FixValueAtOne,
    /// `∫_{B₁} u` and `∫_{B₁} v` are held at their initial values.
    FixMass,
    /// Plain iteration.
    None,
}

/// Kind of closed-form starting pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnsatzKind {
    /// Tails with the predicted fast rates and log factor.
    Fast,
    /// Heuristic slow tails `(q₀, p₀)`.
    Slow,
}

/// Starting pair of the iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialGuess {
    FastAnsatz,
    SlowAnsatz,
    #[serde(skip)]
    Custom(Box<(RadialFunction, RadialFunction)>),
}

/// Log-spaced working grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub r_min: f64,
    pub r_max: f64,
    pub points_per_decade: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            r_min: 1e-2,
            r_max: 1e4,
            points_per_decade: 16,
        }
    }
}

impl GridSpec {
    pub fn build(&self) -> Result<RadialGrid> {
        RadialGrid::with_density(self.r_min, self.r_max, self.points_per_decade)
    }
}

/// Coefficient pair `(c₁, c₂)` trapped between `1/bound` and `bound`.
#[derive(Debug, Clone, PartialEq)]
pub struct Coefficients {
    c1: RadialFunction,
    c2: RadialFunction,
    bound: f64,
}

impl Coefficients {
    pub fn new(c1: RadialFunction, c2: RadialFunction, bound: f64) -> Result<Self> {
        if !(bound >= 1.0) {
            return Err(Error::InvalidArgument(format!("coefficient bound {bound} < 1")));
        }
        for (name, c) in [("c1", &c1), ("c2", &c2)] {
            let lo = 1.0 / bound * (1.0 - 1e-12);
            let hi = bound * (1.0 + 1e-12);
            if let Some(v) = c.values().iter().find(|v| **v < lo || **v > hi) {
                return Err(Error::InvalidArgument(format!(
                    "{name} takes the value {v} outside [1/{bound}, {bound}]"
                )));
            }
        }
        Ok(Coefficients { c1, c2, bound })
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn c1(&self) -> &RadialFunction {
        &self.c1
    }

    pub fn c2(&self) -> &RadialFunction {
        &self.c2
    }
}

/// Iteration controls.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolveConfig {
    /// Weight `θ` of the new image in `u^{1−θ} ũ^θ`.
    pub damping: f64,
    pub max_iters: usize,
    /// Target for the pointwise relative fixed-point residual. The
    /// discretized operator has a residual floor of order `h²` (`h` the log
    /// grid spacing), about `1e-4` at 16 points per decade, so targets far
    /// below that are only reachable for special profiles.
    pub rel_tol: f64,
    /// Stop early when the residual has not improved by 1% over this many
    /// iterations (0 disables the check).
    pub stall_window: usize,
    pub normalization: Normalization,
    pub initial: InitialGuess,
    pub grid: GridSpec,
    pub potential: PotentialConfig,
    /// Iterate even when the tuple is subcritical.
    pub allow_subcritical: bool,
    /// Radii over which residuals are measured; defaults to `[r_min, r_max/10]`.
    pub residual_window: Option<(f64, f64)>,
    /// Radii used for tail fits; defaults to `[r_max/100, r_max]`.
    pub fit_window: Option<(f64, f64)>,
    #[serde(skip)]
    pub coefficients: Option<Coefficients>,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            damping: 0.5,
            max_iters: 200,
            rel_tol: 1e-3,
            stall_window: 15,
            normalization: Normalization::FixValueAtOne,
            initial: InitialGuess::FastAnsatz,
            grid: GridSpec::default(),
            potential: PotentialConfig::default(),
            allow_subcritical: false,
            residual_window: None,
            fit_window: None,
            coefficients: None,
        }
    }
}

impl SolveConfig {
    fn check(&self) -> Result<()> {
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(Error::InvalidArgument(format!("damping {} outside (0, 1]", self.damping)));
        }
        if !(self.rel_tol > 0.0) {
            return Err(Error::InvalidArgument(format!("rel_tol {} must be positive", self.rel_tol)));
        }
        Ok(())
    }

    fn residual_window_for(&self, grid: &RadialGrid) -> (f64, f64) {
        self.residual_window.unwrap_or((grid.r_min(), grid.r_max() / 10.0))
    }

    fn fit_window_for(&self, grid: &RadialGrid) -> (f64, f64) {
        self.fit_window.unwrap_or((grid.r_max() / 100.0, grid.r_max()))
    }
}

/// Outcome of the iteration.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub u: RadialFunction,
    pub v: RadialFunction,
    pub residual_u: f64,
    pub residual_v: f64,
    pub iterations: usize,
    pub converged: bool,
    pub rate_u: RateFit,
    pub rate_v: RateFit,
    /// Largest residual at every iteration.
    pub trace: Vec<f64>,
}

/// Serializable summary of a [`SolveResult`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveReport {
    pub params: Parameters,
    pub converged: bool,
    pub iterations: usize,
    pub residual_u: f64,
    pub residual_v: f64,
    pub rate_u: RateFit,
    pub rate_v: RateFit,
    pub regime: RegimeReport,
    pub predicted_u: (f64, f64),
    pub predicted_v: (f64, f64),
    pub trace: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

impl SolveResult {
    pub fn report(&self, params: &Parameters) -> SolveReport {
        let regime = classify_regime(params);
        let (predicted_u, predicted_v) = regime.labeled_rates();
        SolveReport {
            params: *params,
            converged: self.converged,
            iterations: self.iterations,
            residual_u: self.residual_u,
            residual_v: self.residual_v,
            rate_u: self.rate_u,
            rate_v: self.rate_v,
            regime,
            predicted_u,
            predicted_v,
            trace: self.trace.clone(),
            timestamp: None,
        }
    }
}

fn profile(grid: &RadialGrid, exponent: f64, log_power: f64) -> Result<RadialFunction> {
    let log_power = if grid.r_max() > 1.0 { log_power } else { 0.0 };
    RadialFunction::from_fn(
        grid.clone(),
        |r| {
            let s = 1.0 + r * r;
            let mut v = s.powf(-0.5 * exponent);
            if log_power != 0.0 {
                v *= (1.0 + 0.5 * s.ln()).powf(log_power);
            }
            v
        },
        0.0,
        exponent,
        log_power,
    )
}

/// Closed-form starting pair on `grid`.
///
/// The fast pair is `(1+r²)^{−a/2}` and `(1+r²)^{−b/2}(1 + ln(1+r²)/2)^ℓ` with
/// the predicted rates. The slow pair uses tails `(q₀, p₀)`, a heuristic that
/// reduces to `(2+σ)/(p−1)` in the scalar second-order case.
pub fn make_ansatz(kind: AnsatzKind, params: &Parameters, grid: &RadialGrid) -> Result<(RadialFunction, RadialFunction)> {
    match kind {
        AnsatzKind::Fast => {
            let ((a, la), (b, lb)) = classify_regime(params).labeled_rates();
            Ok((profile(grid, a, la)?, profile(grid, b, lb)?))
        }
        AnsatzKind::Slow => {
            let e = exponents(params);
            Ok((profile(grid, e.q0, 0.0)?, profile(grid, e.p0, 0.0)?))
        }
    }
}

/// Nodes of `f` outside the admissible range, as a degenerate-iterate error.
fn guard(name: &str, f: &RadialFunction) -> Result<()> {
    let pts = f.grid().points();
    for (r, v) in pts.iter().zip(f.values()) {
        if !(v.is_finite() && *v > 0.0) {
            return Err(Error::Degenerate(format!("{name}({r}) = {v}")));
        }
        if *v > OVERFLOW_GUARD {
            return Err(Error::Degenerate(format!("{name}({r}) = {v:e} exceeds {OVERFLOW_GUARD:e}")));
        }
    }
    let max = f.values().iter().cloned().fold(0.0, f64::max);
    if max < 1.0 / OVERFLOW_GUARD {
        return Err(Error::Degenerate(format!("{name} collapsed to {max:e}")));
    }
    Ok(())
}

fn apply_coefficient(image: RadialFunction, c: Option<&RadialFunction>) -> Result<RadialFunction> {
    match c {
        None => Ok(image),
        Some(c) => image.map_values(|r, v| v * c.eval(r)),
    }
}

/// The images `(c₁W(r^{σ₁}v^q), c₂W(r^{σ₂}u^p))` on the grid of `u`.
pub fn system_images(
    params: &Parameters,
    u: &RadialFunction,
    v: &RadialFunction,
    potential: &PotentialConfig,
    coefficients: Option<&Coefficients>,
) -> Result<(RadialFunction, RadialFunction)> {
    let op = LayerCake::wolff(WolffOrder::from(params))?;
    let grid = u.grid();
    let source_u = weighted_source(params.sigma1, params.q, v)?;
    let image_u = op.prepare(&source_u, potential)?.eval_on(grid)?;
    let image_u = apply_coefficient(image_u, coefficients.map(|c| &c.c1))?;
    let symmetric = coefficients.is_none() && params.is_scalar() && u == v;
    let image_v = if symmetric {
        image_u.clone()
    } else {
        let source_v = weighted_source(params.sigma2, params.p, u)?;
        let image_v = op.prepare(&source_v, potential)?.eval_on(grid)?;
        apply_coefficient(image_v, coefficients.map(|c| &c.c2))?
    };
    Ok((image_u, image_v))
}

/// `u^{1−θ} ũ^θ`, asymptotic models combined the same way.
fn damp(old: &RadialFunction, image: &RadialFunction, theta: f64) -> Result<RadialFunction> {
    if theta == 1.0 {
        return Ok(image.clone());
    }
    let values = old
        .values()
        .iter()
        .zip(image.values())
        .map(|(a, b)| a.powf(1.0 - theta) * b.powf(theta))
        .collect();
    let mix = |a: f64, b: f64| {
        if a.is_infinite() || b.is_infinite() {
            a.max(b)
        } else {
            (1.0 - theta) * a + theta * b
        }
    };
    RadialFunction::new(
        old.grid().clone(),
        values,
        mix(old.head_exponent(), image.head_exponent()),
        mix(old.tail_exponent(), image.tail_exponent()),
        mix(old.tail_log_power(), image.tail_log_power()),
    )
}

struct Normalizer {
    kind: Normalization,
    kernel: CapKernel,
}

impl Normalizer {
    fn measure(&self, f: &RadialFunction) -> Result<f64> {
        Ok(match self.kind {
            Normalization::FixValueAtOne => f.eval(1.0),
            Normalization::FixMass => MassProfile::new(self.kernel, f)?.cumulative_mass(1.0),
            Normalization::None => 1.0,
        })
    }

    fn rescale(&self, f: RadialFunction, target: f64) -> Result<RadialFunction> {
        if self.kind == Normalization::None {
            return Ok(f);
        }
        let m = self.measure(&f)?;
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::Degenerate(format!("normalization functional is {m}")));
        }
        f.scaled(target / m)
    }
}

fn relative_residual(f: &RadialFunction, image: &RadialFunction, ratio: f64, window: (f64, f64)) -> f64 {
    f.grid()
        .points()
        .iter()
        .zip(f.values().iter().zip(image.values()))
        .filter(|(r, _)| **r >= window.0 * (1.0 - 1e-12) && **r <= window.1 * (1.0 + 1e-12))
        .map(|(_, (a, b))| (b / (ratio * a) - 1.0).abs())
        .fold(0.0, f64::max)
}

/// One damped, normalized Picard step.
pub fn picard_step(
    params: &Parameters,
    u: &RadialFunction,
    v: &RadialFunction,
    cfg: &SolveConfig,
) -> Result<(RadialFunction, RadialFunction)> {
    cfg.check()?;
    guard("u", u)?;
    guard("v", v)?;
    let norm = Normalizer {
        kind: cfg.normalization,
        kernel: CapKernel::new(params.n)?,
    };
    let (tu, tv) = (norm.measure(u)?, norm.measure(v)?);
    let (iu, iv) = system_images(params, u, v, &cfg.potential, cfg.coefficients.as_ref())?;
    guard("image of u", &iu)?;
    guard("image of v", &iv)?;
    let u1 = norm.rescale(damp(u, &iu, cfg.damping)?, tu)?;
    let v1 = norm.rescale(damp(v, &iv, cfg.damping)?, tv)?;
    Ok((u1, v1))
}

/// Pointwise relative residuals of `(u, v)` after the best rescaling of the
/// images by the normalization functional.
pub fn system_residuals(
    params: &Parameters,
    u: &RadialFunction,
    v: &RadialFunction,
    cfg: &SolveConfig,
) -> Result<(f64, f64)> {
    let norm = Normalizer {
        kind: cfg.normalization,
        kernel: CapKernel::new(params.n)?,
    };
    let (iu, iv) = system_images(params, u, v, &cfg.potential, cfg.coefficients.as_ref())?;
    let window = cfg.residual_window_for(u.grid());
    let mu = norm.measure(&iu)? / norm.measure(u)?;
    let nu = norm.measure(&iv)? / norm.measure(v)?;
    Ok((
        relative_residual(u, &iu, mu, window),
        relative_residual(v, &iv, nu, window),
    ))
}

/// Amplitudes `(a, b)` with `T(a u, b v) = (a u, b v)` given the image
/// ratios `μ = T_u(u,v)/u`, `ν = T_v(u,v)/v`.
fn amplitudes(params: &Parameters, mu: f64, nu: f64) -> (f64, f64) {
    let g1 = params.gamma - 1.0;
    let (pp, qp) = (params.p / g1, params.q / g1);
    let ln_a = (qp * nu.ln() + mu.ln()) / (1.0 - pp * qp);
    let ln_b = pp * ln_a + nu.ln();
    (ln_a.exp(), ln_b.exp())
}

fn initial_pair(params: &Parameters, cfg: &SolveConfig) -> Result<(RadialFunction, RadialFunction)> {
    match &cfg.initial {
        InitialGuess::FastAnsatz => make_ansatz(AnsatzKind::Fast, params, &cfg.grid.build()?),
        InitialGuess::SlowAnsatz => make_ansatz(AnsatzKind::Slow, params, &cfg.grid.build()?),
        InitialGuess::Custom(pair) => {
            let (u, v) = pair.as_ref();
            if u.grid() != v.grid() {
                return Err(Error::InvalidArgument("custom u and v must share a grid".into()));
            }
            Ok((u.clone(), v.clone()))
        }
    }
}

/// Runs the iteration to convergence or `max_iters`, returning the last
/// iterate either way (`converged` tells which).
pub fn iterate_system(params: &Parameters, cfg: &SolveConfig) -> Result<SolveResult> {
    let params = validate(*params)?;
    cfg.check()?;
    if subcriticality(&params) == Subcriticality::Subcritical && !cfg.allow_subcritical {
        return Err(Error::InvalidParameters(
            "subcritical tuple refused (the fast-decay characterization does not apply)".into(),
        ));
    }
    let (mut u, mut v) = initial_pair(&params, cfg)?;
    guard("u", &u)?;
    guard("v", &v)?;
    let norm = Normalizer {
        kind: cfg.normalization,
        kernel: CapKernel::new(params.n)?,
    };
    let (target_u, target_v) = (norm.measure(&u)?, norm.measure(&v)?);
    let window = cfg.residual_window_for(u.grid());
    let mut trace = Vec::new();
    let mut iterations = 0;
    let (mu, nu, res_u, res_v, converged) = loop {
        let (iu, iv) = system_images(&params, &u, &v, &cfg.potential, cfg.coefficients.as_ref())?;
        guard("image of u", &iu)?;
        guard("image of v", &iv)?;
        let mu = norm.measure(&iu)? / norm.measure(&u)?;
        let nu = norm.measure(&iv)? / norm.measure(&v)?;
        let res_u = relative_residual(&u, &iu, mu, window);
        let res_v = relative_residual(&v, &iv, nu, window);
        trace.push(res_u.max(res_v));
        log::debug!("iteration {iterations}: residuals {res_u:.3e} {res_v:.3e}");
        if res_u <= cfg.rel_tol && res_v <= cfg.rel_tol {
            break (mu, nu, res_u, res_v, true);
        }
        let w = cfg.stall_window;
        if w > 0 && trace.len() > w {
            let recent = trace[trace.len() - 1];
            let before = trace[trace.len() - 1 - w];
            if recent > 0.99 * before {
                log::info!("residual stagnated at {recent:.3e} after {iterations} iterations");
                break (mu, nu, res_u, res_v, false);
            }
        }
        if iterations == cfg.max_iters {
            break (mu, nu, res_u, res_v, false);
        }
        iterations += 1;
        u = norm.rescale(damp(&u, &iu, cfg.damping)?, target_u)?;
        v = norm.rescale(damp(&v, &iv, cfg.damping)?, target_v)?;
        guard("u", &u)?;
        guard("v", &v)?;
    };
    if cfg.normalization != Normalization::None {
        let (a, b) = amplitudes(&params, mu, nu);
        u = u.scaled(a)?;
        v = v.scaled(b)?;
    }
    let ((_, lu), (_, lv)) = classify_regime(&params).labeled_rates();
    let fit_window = cfg.fit_window_for(u.grid());
    let rate_u = fit_decay_rate(&u, fit_window, lu != 0.0)?;
    let rate_v = fit_decay_rate(&v, fit_window, lv != 0.0)?;
    Ok(SolveResult {
        u,
        v,
        residual_u: res_u,
        residual_v: res_v,
        iterations,
        converged,
        rate_u,
        rate_v,
        trace,
    })
}

/// Iterates to convergence; a run that exhausts `max_iters` is an error
/// carrying the residual trace.
pub fn solve_system(params: &Parameters, cfg: &SolveConfig) -> Result<SolveResult> {
    let result = iterate_system(params, cfg)?;
    if result.converged {
        Ok(result)
    } else {
        Err(Error::NotConverged {
            iterations: result.iterations,
            last_change: result.residual_u.max(result.residual_v),
            trace: result.trace,
        })
    }
}

/// The normalized bubble `c(1+r²)^{−(n−2)/2}` solving `u = W_{1,2}(u^{(n+2)/(n−2)})`.
///
/// With `β = 1, γ = 2` the Wolff potential is `s_{n−1}(−Δ)^{-1}`, and
/// `−Δ(1+r²)^{−(n−2)/2} = n(n−2)(1+r²)^{−(n+2)/2}` fixes `c^{p−1} = n(n−2)/s_{n−1}`.
pub fn bubble(n: u32, grid: &RadialGrid) -> Result<RadialFunction> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("bubble needs n >= 3, got {n}")));
    }
    let dim = n as f64;
    let p = (dim + 2.0) / (dim - 2.0);
    let c = (dim * (dim - 2.0) / crate::geometry::sphere_area(n)).powf(1.0 / (p - 1.0));
    RadialFunction::from_fn(
        grid.clone(),
        |r| c * (1.0 + r * r).powf(-0.5 * (dim - 2.0)),
        0.0,
        dim - 2.0,
        0.0,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bubble_params() -> Parameters {
        Parameters::scalar(5, 1.0, 2.0, 7.0 / 3.0, 0.0).unwrap()
    }

    #[test]
    fn amplitude_recovery_inverts_scaling() {
        let p = Parameters::new(5, 1.0, 2.0, 5.0 / 3.0, 31.0 / 9.0, 0.0, 0.0).unwrap();
        let (a, b) = amplitudes(&p, 0.7, 1.9);
        // b^{q'} μ = a and a^{p'} ν = b
        assert!((b.powf(p.q) * 0.7 / a - 1.0).abs() < 1e-12);
        assert!((a.powf(p.p) * 1.9 / b - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ansatz_tails_match_prediction() {
        let grid = GridSpec::default().build().unwrap();
        let p = Parameters::new(5, 1.0, 2.0, 3.0 / 2.0, 4.0, 0.0, 0.0).unwrap();
        let (u, v) = make_ansatz(AnsatzKind::Fast, &p, &grid).unwrap();
        let r = classify_regime(&p);
        assert_eq!(u.tail_exponent(), r.predicted_u_exponent);
        assert_eq!(v.tail_exponent(), r.predicted_v_exponent);
        assert!(u.values().iter().chain(v.values()).all(|x| *x > 0.0));
        let s = Parameters::scalar(3, 1.0, 2.0, 6.0, -0.5).unwrap();
        let (u, _) = make_ansatz(AnsatzKind::Slow, &s, &grid).unwrap();
        assert!((u.tail_exponent() - 1.5 / 5.0).abs() < 1e-14);
    }

    #[test]
    fn zero_start_is_degenerate() {
        let grid = GridSpec::default().build().unwrap();
        let zero = RadialFunction::from_fn(grid, |_| 0.0, 0.0, 3.0, 0.0).unwrap();
        let cfg = SolveConfig {
            initial: InitialGuess::Custom(Box::new((zero.clone(), zero))),
            ..SolveConfig::default()
        };
        assert!(matches!(solve_system(&bubble_params(), &cfg), Err(Error::Degenerate(_))));
    }

    #[test]
    fn subcritical_is_refused() {
        let p = Parameters::scalar(5, 1.0, 2.0, 2.0, 0.0).unwrap();
        assert!(matches!(
            solve_system(&p, &SolveConfig::default()),
            Err(Error::InvalidParameters(_))
        ));
    }

    #[test]
    fn bubble_is_a_fixed_point() {
        let cfg = SolveConfig {
            grid: GridSpec {
                points_per_decade: 16,
                ..GridSpec::default()
            },
            damping: 1.0,
            normalization: Normalization::None,
            ..SolveConfig::default()
        };
        let grid = cfg.grid.build().unwrap();
        let u = bubble(5, &grid).unwrap();
        let (r_u, r_v) = system_residuals(&bubble_params(), &u, &u, &cfg).unwrap();
        assert!(r_u < 1e-2 && r_v < 1e-2, "{r_u} {r_v}");
    }
}
