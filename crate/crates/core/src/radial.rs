//! Log-spaced radial grids, sampled radial profiles with power-law head and
//! tail models, weighted Lᵖ norms, and tail-rate fitting.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::sphere_area;
use crate::quad::{gl8_integrate, pow_log_integral, EXPONENT_TOL};

/// Strictly increasing radii, normally log-spaced.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    points: Vec<f64>,
    log_points: Vec<f64>,
}

pub const MIN_GRID_POINTS: usize = 16;
pub const MIN_GRID_SPAN: f64 = 100.0;

impl RadialGrid {
    pub fn log_spaced(r_min: f64, r_max: f64, count: usize) -> Result<Self> {
        if !(r_min > 0.0 && r_min.is_finite() && r_max.is_finite()) {
            return Err(Error::InvalidGrid(format!("r_min = {r_min}, r_max = {r_max}")));
        }
        if count < 2 {
            return Err(Error::InvalidGrid(format!("count {count} < {MIN_GRID_POINTS}")));
        }
        let (lo, hi) = (r_min.ln(), r_max.ln());
        let step = (hi - lo) / (count - 1) as f64;
        let mut points: Vec<f64> = (0..count).map(|i| (lo + step * i as f64).exp()).collect();
        points[0] = r_min;
        points[count - 1] = r_max;
        Self::from_points(points)
    }

    /// Log-spaced grid with the given number of points per decade.
    pub fn with_density(r_min: f64, r_max: f64, per_decade: usize) -> Result<Self> {
        let decades = (r_max / r_min).log10();
        let count = ((decades * per_decade as f64).ceil() as usize + 1).max(MIN_GRID_POINTS);
        Self::log_spaced(r_min, r_max, count)
    }

    /// Arbitrary strictly increasing radii (as read back from a profile file).
    pub fn from_points(points: Vec<f64>) -> Result<Self> {
        if points.len() < MIN_GRID_POINTS {
            return Err(Error::InvalidGrid(format!(
                "{} points, at least {MIN_GRID_POINTS} required",
                points.len()
            )));
        }
        if !(points[0] > 0.0) || points.iter().any(|r| !r.is_finite()) {
            return Err(Error::InvalidGrid("radii must be positive and finite".into()));
        }
        if let Some(i) = points.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid(format!(
                "radii not strictly increasing at index {}: {} then {}",
                i + 1,
                points[i],
                points[i + 1]
            )));
        }
        let span = points[points.len() - 1] / points[0];
        if span < MIN_GRID_SPAN * (1.0 - 1e-12) {
            return Err(Error::InvalidGrid(format!("r_max/r_min = {span} < {MIN_GRID_SPAN}")));
        }
        let log_points = points.iter().map(|r| r.ln()).collect();
        Ok(RadialGrid { points, log_points })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn log_points(&self) -> &[f64] {
        &self.log_points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn r_min(&self) -> f64 {
        self.points[0]
    }

    pub fn r_max(&self) -> f64 {
        self.points[self.points.len() - 1]
    }

    /// Index `k` of the cell `[r_k, r_{k+1}]` containing `r` (clamped to the grid).
    pub fn cell_of(&self, r: f64) -> usize {
        let k = self.points.partition_point(|&x| x <= r);
        k.saturating_sub(1).min(self.points.len() - 2)
    }
}

/// A nonnegative radial profile sampled on a grid.
///
/// Between nodes the profile is interpolated log-log linearly (linearly in
/// `ln r` when a node value is zero). Below `r_min` it follows
/// `f(r_min)(r/r_min)^{-head}`; above `r_max` it follows
/// `f(r_max)(r/r_max)^{-tail}(ln r/ln r_max)^{log}`. An infinite tail exponent
/// is a hard cutoff at `r_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialFunction {
    grid: RadialGrid,
    values: Vec<f64>,
    head_exponent: f64,
    tail_exponent: f64,
    tail_log_power: f64,
    slopes: Vec<f64>,
}

impl RadialFunction {
    pub fn new(
        grid: RadialGrid,
        values: Vec<f64>,
        head_exponent: f64,
        tail_exponent: f64,
        tail_log_power: f64,
    ) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidProfile(format!(
                "{} values for {} grid points",
                values.len(),
                grid.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::InvalidProfile(format!(
                "value {} at r = {} is not a nonnegative finite number",
                values[i],
                grid.points()[i]
            )));
        }
        if !head_exponent.is_finite() {
            return Err(Error::InvalidProfile("head exponent must be finite".into()));
        }
        if tail_exponent.is_nan() || tail_exponent == f64::NEG_INFINITY {
            return Err(Error::InvalidProfile("tail exponent must be a number or +inf".into()));
        }
        if !tail_log_power.is_finite() {
            return Err(Error::InvalidProfile("tail log power must be finite".into()));
        }
        if tail_log_power != 0.0 && tail_exponent.is_finite() && grid.r_max() <= 1.0 {
            return Err(Error::InvalidProfile(
                "a logarithmic tail factor needs r_max > 1".into(),
            ));
        }
        let lr = grid.log_points();
        let slopes = values
            .windows(2)
            .zip(lr.windows(2))
            .map(|(v, s)| {
                if v[0] > 0.0 && v[1] > 0.0 {
                    (v[1].ln() - v[0].ln()) / (s[1] - s[0])
                } else {
                    f64::NAN
                }
            })
            .collect();
        Ok(RadialFunction {
            grid,
            values,
            head_exponent,
            tail_exponent,
            tail_log_power,
            slopes,
        })
    }

    /// Samples `f` at the grid nodes.
    pub fn from_fn<F: Fn(f64) -> f64>(
        grid: RadialGrid,
        f: F,
        head_exponent: f64,
        tail_exponent: f64,
        tail_log_power: f64,
    ) -> Result<Self> {
        let values = grid.points().iter().map(|&r| f(r)).collect();
        Self::new(grid, values, head_exponent, tail_exponent, tail_log_power)
    }

    /// Indicator of the ball of radius `radius`: constant on a grid ending at
    /// `radius`, with a hard-cutoff tail.
    pub fn indicator(radius: f64, r_min: f64, count: usize) -> Result<Self> {
        let grid = RadialGrid::log_spaced(r_min, radius, count)?;
        let values = vec![1.0; grid.len()];
        Self::new(grid, values, 0.0, f64::INFINITY, 0.0)
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn head_exponent(&self) -> f64 {
        self.head_exponent
    }

    pub fn tail_exponent(&self) -> f64 {
        self.tail_exponent
    }

    pub fn tail_log_power(&self) -> f64 {
        self.tail_log_power
    }

    pub fn has_hard_cutoff(&self) -> bool {
        self.tail_exponent == f64::INFINITY
    }

    /// Same samples with another tail model.
    pub fn with_tail(self, tail_exponent: f64, tail_log_power: f64) -> Result<Self> {
        Self::new(self.grid, self.values, self.head_exponent, tail_exponent, tail_log_power)
    }

    /// Same samples with another head exponent.
    pub fn with_head(self, head_exponent: f64) -> Result<Self> {
        Self::new(self.grid, self.values, head_exponent, self.tail_exponent, self.tail_log_power)
    }

    /// `λ·f`, head and tail models unchanged.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let values = self.values.iter().map(|v| v * factor).collect();
        Self::new(self.grid.clone(), values, self.head_exponent, self.tail_exponent, self.tail_log_power)
    }

    /// Pointwise map on node values keeping the asymptotic models.
    pub fn map_values<F: Fn(f64, f64) -> f64>(&self, f: F) -> Result<Self> {
        let values = self
            .grid
            .points()
            .iter()
            .zip(&self.values)
            .map(|(&r, &v)| f(r, v))
            .collect();
        Self::new(self.grid.clone(), values, self.head_exponent, self.tail_exponent, self.tail_log_power)
    }

    /// Value in cell `k` at radius `r` (with `ln r = s`).
    #[inline]
    pub(crate) fn eval_in_cell(&self, k: usize, r: f64, s: f64) -> f64 {
        let lr = self.grid.log_points();
        let slope = self.slopes[k];
        if slope.is_nan() {
            let t = (s - lr[k]) / (lr[k + 1] - lr[k]);
            self.values[k] + (self.values[k + 1] - self.values[k]) * t
        } else {
            let _ = r;
            self.values[k] * (slope * (s - lr[k])).exp()
        }
    }

    #[inline]
    pub(crate) fn eval_head(&self, r: f64) -> f64 {
        let f0 = self.values[0];
        if self.head_exponent == 0.0 {
            f0
        } else {
            f0 * (r / self.grid.r_min()).powf(-self.head_exponent)
        }
    }

    #[inline]
    pub(crate) fn eval_tail(&self, r: f64) -> f64 {
        if self.has_hard_cutoff() {
            return 0.0;
        }
        let r_max = self.grid.r_max();
        let last = self.values[self.values.len() - 1];
        let mut v = last * (r / r_max).powf(-self.tail_exponent);
        if self.tail_log_power != 0.0 {
            v *= (r.ln() / r_max.ln()).powf(self.tail_log_power);
        }
        v
    }

    /// Evaluates the profile (interpolant plus head and tail models).
    pub fn eval(&self, r: f64) -> f64 {
        if r < self.grid.r_min() {
            if r <= 0.0 {
                return match self.head_exponent {
                    h if h > 0.0 => f64::INFINITY,
                    h if h < 0.0 => 0.0,
                    _ => self.values[0],
                };
            }
            self.eval_head(r)
        } else if r > self.grid.r_max() {
            self.eval_tail(r)
        } else {
            let k = self.grid.cell_of(r);
            self.eval_in_cell(k, r, r.ln())
        }
    }

    /// Resamples the profile on another grid, keeping head and tail models.
    pub fn resample(&self, grid: &RadialGrid) -> Result<Self> {
        let values = grid.points().iter().map(|&r| self.eval(r)).collect();
        Self::new(grid.clone(), values, self.head_exponent, self.tail_exponent, self.tail_log_power)
    }
}

/// Result of a norm computation: finite value or divergence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Norm {
    Finite(f64),
    Infinite,
}

impl Norm {
    pub fn is_finite(&self) -> bool {
        matches!(self, Norm::Finite(_))
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            Norm::Finite(v) => Some(*v),
            Norm::Infinite => None,
        }
    }

    /// `f64::INFINITY` for divergent norms.
    pub fn as_f64(&self) -> f64 {
        self.value().unwrap_or(f64::INFINITY)
    }
}

/// `(s_{n−1} ∫ r^w f(r)^p r^{n−1} dr)^{1/p}`, with `p = ∞` giving the sup norm.
///
/// Head and tail contributions are integrated analytically from the declared
/// exponents; divergence is reported as [`Norm::Infinite`].
pub fn lp_norm(f: &RadialFunction, n: u32, p: f64, weight_exponent: f64) -> Result<Norm> {
    if !(p >= 1.0) {
        return Err(Error::InvalidArgument(format!("norm exponent p = {p} < 1")));
    }
    let dim = n as f64;
    let values = f.values();
    if weight_exponent <= -dim && values[0] > 0.0 {
        return Err(Error::Divergent(format!(
            "weight r^{weight_exponent} is not integrable at the origin in dimension {n}"
        )));
    }
    if p == f64::INFINITY {
        return Ok(sup_norm(f, weight_exponent));
    }
    let grid = f.grid();
    let (r_min, r_max) = (grid.r_min(), grid.r_max());
    let lr = grid.log_points();
    let c_body = weight_exponent + dim;

    // head: ∫_0^{r_min} (f0 (r/r_min)^{-h})^p r^{w+n} dr/r
    let mut total = 0.0;
    if values[0] > 0.0 {
        let c = c_body - f.head_exponent() * p;
        if c <= EXPONENT_TOL * c_body.abs().max(1.0) {
            return Ok(Norm::Infinite);
        }
        total += values[0].powf(p) * r_min.powf(c_body) / c;
    }

    // body: log-log linear cells, 8-point Gauss-Legendre in s = ln r
    for k in 0..grid.len() - 1 {
        if values[k] == 0.0 && values[k + 1] == 0.0 {
            continue;
        }
        total += gl8_integrate(lr[k], lr[k + 1], |s| {
            let r = s.exp();
            f.eval_in_cell(k, r, s).powf(p) * (c_body * s).exp()
        });
    }

    // tail: f_last^p r_max^{w+n} ∫_0^∞ e^{-(kp-w-n) y} ((x0+y)/x0)^{Lp} dy
    let last = values[values.len() - 1];
    if last > 0.0 && !f.has_hard_cutoff() {
        let c = c_body - f.tail_exponent() * p;
        let x0 = r_max.ln();
        let lp = f.tail_log_power() * p;
        let c = if c.abs() <= EXPONENT_TOL * c_body.abs().max(1.0) { 0.0 } else { c };
        match pow_log_integral(c, 0.0, f64::INFINITY, x0, lp) {
            Some(v) => total += last.powf(p) * r_max.powf(c_body) * v,
            None => return Ok(Norm::Infinite),
        }
    }
    Ok(Norm::Finite((sphere_area(n) * total).powf(1.0 / p)))
}

fn sup_norm(f: &RadialFunction, w: f64) -> Norm {
    let values = f.values();
    let pts = f.grid().points();
    if values[0] > 0.0 && (f.head_exponent() + (-w)) > 0.0 && (f.head_exponent() - w) > 0.0 {
        return Norm::Infinite;
    }
    let last = values[values.len() - 1];
    if last > 0.0 && !f.has_hard_cutoff() {
        let decay = f.tail_exponent() - w;
        if decay < 0.0 || (decay == 0.0 && f.tail_log_power() > 0.0) {
            return Norm::Infinite;
        }
    }
    let m = values
        .iter()
        .zip(pts)
        .map(|(v, r)| v * r.powf(w))
        .fold(0.0, f64::max);
    Norm::Finite(m)
}

/// Fitted tail behavior `f(r) ≈ C r^{-exponent} (ln r)^{log_power}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub exponent: f64,
    pub log_power: f64,
    pub r_squared: f64,
    pub window: (f64, f64),
}

/// Least-squares fit of `ln f` against `ln r` (and `ln ln r` when `allow_log`)
/// over the grid nodes inside `window`.
pub fn fit_decay_rate(f: &RadialFunction, window: (f64, f64), allow_log: bool) -> Result<RateFit> {
    let (lo, hi) = window;
    let grid = f.grid();
    if !(lo < hi) || lo < grid.r_min() * (1.0 - 1e-12) || hi > grid.r_max() * (1.0 + 1e-12) {
        return Err(Error::InvalidArgument(format!(
            "fit window [{lo}, {hi}] not inside [{}, {}]",
            grid.r_min(),
            grid.r_max()
        )));
    }
    let pts: Vec<(f64, f64)> = grid
        .points()
        .iter()
        .zip(f.values())
        .filter(|(r, _)| **r >= lo * (1.0 - 1e-12) && **r <= hi * (1.0 + 1e-12))
        .map(|(r, v)| (*r, *v))
        .collect();
    fit_points(&pts, allow_log)
}

/// Same fit on raw `(r, f(r))` samples.
pub fn fit_points(pts: &[(f64, f64)], allow_log: bool) -> Result<RateFit> {
    if pts.len() < 8 {
        return Err(Error::InvalidArgument(format!(
            "fit window holds {} samples, at least 8 required",
            pts.len()
        )));
    }
    if let Some((r, _)) = pts.iter().find(|(_, v)| !(*v > 0.0)) {
        return Err(Error::InvalidArgument(format!("profile vanishes at r = {r} inside the fit window")));
    }
    if allow_log && pts.iter().any(|(r, _)| *r <= 1.0) {
        return Err(Error::InvalidArgument("log-corrected fit needs r > 1".into()));
    }
    let y: Vec<f64> = pts.iter().map(|(_, v)| v.ln()).collect();
    let x1: Vec<f64> = pts.iter().map(|(r, _)| r.ln()).collect();
    let x2: Vec<f64> = if allow_log {
        x1.iter().map(|x| x.ln()).collect()
    } else {
        vec![]
    };
    let m = y.len() as f64;
    let mean = |v: &[f64]| v.iter().sum::<f64>() / m;
    let (my, m1) = (mean(&y), mean(&x1));
    let yc: Vec<f64> = y.iter().map(|v| v - my).collect();
    let c1: Vec<f64> = x1.iter().map(|v| v - m1).collect();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let (slope, log_power, fitted): (f64, f64, Vec<f64>) = if allow_log {
        let m2 = mean(&x2);
        let c2: Vec<f64> = x2.iter().map(|v| v - m2).collect();
        let (a11, a12, a22) = (dot(&c1, &c1), dot(&c1, &c2), dot(&c2, &c2));
        let (b1, b2) = (dot(&c1, &yc), dot(&c2, &yc));
        let det = a11 * a22 - a12 * a12;
        if det.abs() <= 1e-14 * a11 * a22 {
            return Err(Error::InvalidArgument("degenerate log-corrected fit".into()));
        }
        let s = (b1 * a22 - b2 * a12) / det;
        let l = (a11 * b2 - a12 * b1) / det;
        let fitted = c1.iter().zip(&c2).map(|(u, w)| s * u + l * w).collect();
        (s, l, fitted)
    } else {
        let s = dot(&c1, &yc) / dot(&c1, &c1);
        (s, 0.0, c1.iter().map(|u| s * u).collect())
    };
    let ss_tot = dot(&yc, &yc);
    let ss_res: f64 = yc.iter().zip(&fitted).map(|(a, b)| (a - b).powi(2)).sum();
    let r_squared = if ss_tot > 0.0 { (1.0 - ss_res / ss_tot).clamp(0.0, 1.0) } else { 1.0 };
    Ok(RateFit {
        exponent: -slope,
        log_power,
        r_squared,
        window: (pts[0].0, pts[pts.len() - 1].0),
    })
}

/// Asymptotic models stored next to a profile CSV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileSidecar {
    pub head_exponent: f64,
    /// `null` encodes a hard cutoff (infinite tail exponent).
    pub tail_exponent: Option<f64>,
    pub tail_log_power: f64,
}

/// Path of the JSON sidecar belonging to a profile CSV.
pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

impl RadialFunction {
    pub fn sidecar(&self) -> ProfileSidecar {
        ProfileSidecar {
            head_exponent: self.head_exponent,
            tail_exponent: self.tail_exponent.is_finite().then_some(self.tail_exponent),
            tail_log_power: self.tail_log_power,
        }
    }

    /// CSV body with header `r,value`, numbers in shortest round-trip form.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(48 * self.values.len() + 8);
        out.push_str("r,value\n");
        for (r, v) in self.grid.points().iter().zip(&self.values) {
            let _ = writeln!(out, "{r:?},{v:?}");
        }
        out
    }

    /// Writes `path` (CSV) and its JSON sidecar.
    pub fn save(&self, path: &Path) -> Result<()> {
        write_file(path, &self.to_csv())?;
        let side = sidecar_path(path);
        let json = serde_json::to_string_pretty(&self.sidecar())?;
        write_file(&side, &(json + "\n"))
    }

    /// Reads a profile written by [`RadialFunction::save`].
    pub fn load(path: &Path) -> Result<Self> {
        let side = sidecar_path(path);
        if !side.exists() {
            return Err(Error::Format {
                path: side,
                message: "missing profile sidecar".into(),
            });
        }
        let csv = read_file(path)?;
        let meta: ProfileSidecar = serde_json::from_str(&read_file(&side)?).map_err(|e| Error::Format {
            path: side.clone(),
            message: e.to_string(),
        })?;
        let (radii, values) = parse_csv(path, &csv)?;
        let wrap = |e: Error| Error::Format {
            path: path.to_path_buf(),
            message: e.to_string(),
        };
        let grid = RadialGrid::from_points(radii).map_err(wrap)?;
        Self::new(
            grid,
            values,
            meta.head_exponent,
            meta.tail_exponent.unwrap_or(f64::INFINITY),
            meta.tail_log_power,
        )
        .map_err(wrap)
    }
}

fn parse_csv(path: &Path, text: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let bad = |line: usize, message: String| Error::Format {
        path: path.to_path_buf(),
        message: format!("line {line}: {message}"),
    };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == "r,value" => {}
        Some((_, h)) => return Err(bad(1, format!("expected header \"r,value\", found {h:?}"))),
        None => return Err(bad(1, "empty file".into())),
    }
    let mut radii = Vec::new();
    let mut values = Vec::new();
    for (i, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut cols = line.split(',');
        let (Some(a), Some(b), None) = (cols.next(), cols.next(), cols.next()) else {
            return Err(bad(i + 1, format!("expected two columns, found {line:?}")));
        };
        let parse = |s: &str| s.trim().parse::<f64>().map_err(|e| bad(i + 1, format!("{s:?}: {e}")));
        let (r, v) = (parse(a)?, parse(b)?);
        if v < 0.0 {
            return Err(bad(i + 1, format!("negative value {v}")));
        }
        radii.push(r);
        values.push(v);
    }
    Ok((radii, values))
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub(crate) fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> RadialGrid {
        RadialGrid::log_spaced(1e-3, 1e6, 181).unwrap()
    }

    #[test]
    fn grid_invariants() {
        let g = grid();
        assert_eq!(g.r_min(), 1e-3);
        assert_eq!(g.r_max(), 1e6);
        assert!(RadialGrid::log_spaced(1.0, 50.0, 32).is_err());
        assert!(RadialGrid::log_spaced(1.0, 1e3, 8).is_err());
        assert!(RadialGrid::from_points(vec![1.0; 20]).is_err());
    }

    #[test]
    fn interpolation_is_exact_on_power_laws() {
        let f = RadialFunction::from_fn(grid(), |r| 2.0 * r.powf(-2.5), 2.5, 2.5, 0.0).unwrap();
        for &r in &[1e-5f64, 3.3e-3, 0.7, 12.0, 4e5, 1e8] {
            let exact = 2.0 * r.powf(-2.5);
            assert!((f.eval(r) - exact).abs() < 1e-12 * exact, "r = {r}");
        }
    }

    #[test]
    fn unit_ball_volume_from_indicator() {
        let f = RadialFunction::indicator(1.0, 1e-3, 64).unwrap();
        for n in 3..7 {
            let v = lp_norm(&f, n, 1.0, 0.0).unwrap().as_f64();
            let omega = crate::geometry::ball_volume(n);
            assert!((v - omega).abs() < 1e-12 * omega, "n = {n}");
        }
    }

    #[test]
    fn borderline_tail_diverges() {
        let f = RadialFunction::from_fn(grid(), |r| (1.0 + r * r).powf(-1.5), 0.0, 3.0, 0.0).unwrap();
        assert_eq!(lp_norm(&f, 5, 5.0 / 3.0, 0.0).unwrap(), Norm::Infinite);
        assert!(lp_norm(&f, 5, 1.7, 0.0).unwrap().is_finite());
    }

    #[test]
    fn singular_weight_is_an_error() {
        let f = RadialFunction::from_fn(grid(), |_| 1.0, 0.0, f64::INFINITY, 0.0).unwrap();
        assert!(lp_norm(&f, 3, 1.0, -3.0).is_err());
    }

    #[test]
    fn fit_exact_power_law() {
        let f = RadialFunction::from_fn(grid(), |r| r.powi(-3), 3.0, 3.0, 0.0).unwrap();
        let fit = fit_decay_rate(&f, (10.0, 1e5), false).unwrap();
        assert!((fit.exponent - 3.0).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        let g = f.scaled(17.0).unwrap();
        let fit2 = fit_decay_rate(&g, (10.0, 1e5), false).unwrap();
        assert!((fit2.exponent - fit.exponent).abs() < 1e-12);
    }

    #[test]
    fn fit_rejects_vanishing_profile() {
        let f = RadialFunction::from_fn(grid(), |r| if r > 100.0 { 0.0 } else { 1.0 }, 0.0, f64::INFINITY, 0.0)
            .unwrap();
        assert!(fit_decay_rate(&f, (10.0, 1e4), false).is_err());
    }

    #[test]
    fn csv_round_trip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.csv");
        let f = RadialFunction::from_fn(grid(), |r| (1.0 + r * r).powf(-1.5) / 3.0, 0.0, 3.0, 0.5).unwrap();
        f.save(&path).unwrap();
        let g = RadialFunction::load(&path).unwrap();
        assert_eq!(f, g);
        let h = RadialFunction::indicator(1.0, 1e-3, 40).unwrap();
        h.save(&path).unwrap();
        assert_eq!(RadialFunction::load(&path).unwrap(), h);
    }

    #[test]
    fn load_reports_missing_sidecar_and_bad_grids() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.csv");
        std::fs::write(&path, "r,value\n1,1\n").unwrap();
        let err = RadialFunction::load(&path).unwrap_err().to_string();
        assert!(err.contains("g.json"), "{err}");
        let f = RadialFunction::from_fn(grid(), |_| 1.0, 0.0, 2.0, 0.0).unwrap();
        f.save(&path).unwrap();
        let mut text = f.to_csv();
        text = text.replacen("0.001,", "5.0,", 1);
        std::fs::write(&path, text).unwrap();
        assert!(RadialFunction::load(&path).is_err());
    }
}
