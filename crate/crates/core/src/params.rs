//! Parameter tuples of the weighted Wolff system and the closed-form exponent
//! algebra built on them.
//!
//! Everything here is a pure function of `(n, β, γ, p, q, σ₁, σ₂)`: the
//! integrable-solution exponents `q₀, p₀`, the non-subcritical test, the decay
//! regime of the second component, and the optimal integrability intervals.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance used to decide codimension-one equalities
/// (the critical hyperbola, the logarithmic regime).
pub const EQUALITY_TOL: f64 = 1e-12;

/// The tuple `(n, β, γ, p, q, σ₁, σ₂)`.
///
/// Construct through [`Parameters::new`] (or [`validate`]) to get a value
/// whose invariants hold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Parameters {
    pub n: u32,
    pub beta: f64,
    pub gamma: f64,
    pub p: f64,
    pub q: f64,
    pub sigma1: f64,
    pub sigma2: f64,
}

impl Parameters {
    pub fn new(n: u32, beta: f64, gamma: f64, p: f64, q: f64, sigma1: f64, sigma2: f64) -> Result<Self> {
        validate(Parameters { n, beta, gamma, p, q, sigma1, sigma2 })
    }

    /// Scalar tuple with `p = q` and `σ₁ = σ₂ = σ`.
    pub fn scalar(n: u32, beta: f64, gamma: f64, p: f64, sigma: f64) -> Result<Self> {
        Self::new(n, beta, gamma, p, p, sigma, sigma)
    }

    pub fn dim(&self) -> f64 {
        self.n as f64
    }

    /// `βγ`.
    pub fn order(&self) -> f64 {
        self.beta * self.gamma
    }

    /// The fast decay exponent `(n − βγ)/(γ − 1)`.
    pub fn fast_rate(&self) -> f64 {
        (self.dim() - self.order()) / (self.gamma - 1.0)
    }

    /// `(p,σ₂) ↔ (q,σ₁)`: the relabeling that exchanges the roles of u and v.
    pub fn interchanged(&self) -> Self {
        Parameters {
            p: self.q,
            q: self.p,
            sigma1: self.sigma2,
            sigma2: self.sigma1,
            ..*self
        }
    }

    /// True when the tuple already satisfies `q ≥ p` and `σ₁ ≤ σ₂`.
    pub fn is_canonically_ordered(&self) -> bool {
        self.q >= self.p && self.sigma1 <= self.sigma2
    }

    pub fn is_scalar(&self) -> bool {
        self.p == self.q && self.sigma1 == self.sigma2
    }
}

fn check(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParameters(what.to_string()))
    }
}

/// Returns the tuple unchanged iff all admissibility constraints hold.
pub fn validate(params: Parameters) -> Result<Parameters> {
    let Parameters { n, beta, gamma, p, q, sigma1, sigma2 } = params;
    for (name, value) in [
        ("beta", beta),
        ("gamma", gamma),
        ("p", p),
        ("q", q),
        ("sigma1", sigma1),
        ("sigma2", sigma2),
    ] {
        check(value.is_finite(), &format!("{name} must be finite"))?;
    }
    check(n >= 3, "n >= 3 violated")?;
    check(gamma > 1.0 && gamma <= 2.0, "gamma out of (1,2]")?;
    check(beta > 0.0, "beta > 0 violated")?;
    check(beta * gamma < n as f64, "beta*gamma < n violated")?;
    check(p > 1.0, "p > 1 violated")?;
    check(q > 1.0, "q > 1 violated")?;
    let order = beta * gamma;
    check(sigma1 > -order && sigma1 <= 0.0, "sigma1 out of (-beta*gamma, 0]")?;
    check(sigma2 > -order && sigma2 <= 0.0, "sigma2 out of (-beta*gamma, 0]")?;
    check(p * q > (gamma - 1.0).powi(2), "p*q > (gamma-1)^2 violated")?;
    Ok(params)
}

/// Closed-form exponents attached to a parameter tuple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Exponents {
    pub q0: f64,
    pub p0: f64,
    pub r0: f64,
    pub s0: f64,
    pub fast_rate_u: f64,
    pub v_threshold: f64,
    pub intermediate_rate_v: f64,
    pub slow_endpoint_u: f64,
    pub slow_endpoint_v: f64,
}

pub fn exponents(params: &Parameters) -> Exponents {
    let Parameters { p, q, sigma1, sigma2, gamma, .. } = *params;
    let n = params.dim();
    let order = params.order();
    let g1 = gamma - 1.0;
    let denom = p * q - g1 * g1;
    let q0 = (order * (g1 + q) + g1 * sigma1 + sigma2 * q) / denom;
    let p0 = (order * (g1 + p) + g1 * sigma2 + sigma1 * p) / denom;
    let fast = params.fast_rate();
    Exponents {
        q0,
        p0,
        r0: n / q0,
        s0: n / p0,
        fast_rate_u: fast,
        v_threshold: p * fast - sigma2,
        intermediate_rate_v: (p * fast - (order + sigma2)) / g1,
        slow_endpoint_u: q * (n - order) / (g1 * g1) - (order + sigma1) / g1,
        slow_endpoint_v: p * (n - order) / (g1 * g1) - (order + sigma2) / g1,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Subcriticality {
    Subcritical,
    Critical,
    Supercritical,
}

/// Left side minus right side of the non-subcritical inequality.
pub fn subcriticality_gap(params: &Parameters) -> f64 {
    let n = params.dim();
    let g1 = params.gamma - 1.0;
    (n + params.sigma1) / (g1 + params.q) + (n + params.sigma2) / (g1 + params.p) - params.fast_rate()
}

pub fn subcriticality(params: &Parameters) -> Subcriticality {
    subcriticality_with_tol(params, EQUALITY_TOL)
}

pub fn subcriticality_with_tol(params: &Parameters, tol: f64) -> Subcriticality {
    let gap = subcriticality_gap(params);
    if gap.abs() <= tol {
        Subcriticality::Critical
    } else if gap > 0.0 {
        Subcriticality::Subcritical
    } else {
        Subcriticality::Supercritical
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    FastFast,
    Logarithmic,
    Intermediate,
}

/// Predicted tail behavior of an integrable pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub regime: Regime,
    #[serde(rename = "u_exponent")]
    pub predicted_u_exponent: f64,
    #[serde(rename = "v_exponent")]
    pub predicted_v_exponent: f64,
    pub v_log_power: f64,
    pub subcriticality: Subcriticality,
    /// The prediction refers to the relabeled pair when the input had
    /// `q < p` or `σ₁ > σ₂`.
    #[serde(skip)]
    pub interchanged: bool,
    #[serde(skip)]
    pub warnings: Vec<String>,
}

impl RegimeReport {
    /// True when the decay theorem's standing hypothesis holds.
    pub fn theorem_applies(&self) -> bool {
        self.subcriticality != Subcriticality::Subcritical
    }

    /// Predicted `(exponent, log power)` of the caller's `u` and `v`, undoing
    /// any interchange of roles.
    pub fn labeled_rates(&self) -> ((f64, f64), (f64, f64)) {
        let u = (self.predicted_u_exponent, 0.0);
        let v = (self.predicted_v_exponent, self.v_log_power);
        if self.interchanged {
            (v, u)
        } else {
            (u, v)
        }
    }
}

/// Whether the tuple must be relabeled to satisfy `q ≥ p`, `σ₁ ≤ σ₂`.
fn needs_interchange(params: &Parameters) -> bool {
    params.q < params.p || (params.q == params.p && params.sigma1 > params.sigma2)
}

pub fn classify_regime(params: &Parameters) -> RegimeReport {
    classify_regime_with_tol(params, EQUALITY_TOL)
}

pub fn classify_regime_with_tol(params: &Parameters, tol: f64) -> RegimeReport {
    let mut warnings = Vec::new();
    let interchange = needs_interchange(params);
    let canon = if interchange {
        let msg = format!(
            "q < p or sigma1 > sigma2 (p={}, q={}, sigma1={}, sigma2={}); roles of u and v interchanged",
            params.p, params.q, params.sigma1, params.sigma2
        );
        log::warn!("{msg}");
        warnings.push(msg);
        params.interchanged()
    } else {
        *params
    };
    if !canon.is_canonically_ordered() {
        let msg = "q >= p and sigma1 <= sigma2 cannot both hold under either labeling".to_string();
        log::warn!("{msg}");
        warnings.push(msg);
    }
    let sub = subcriticality_with_tol(&canon, tol);
    if sub == Subcriticality::Subcritical {
        let msg = "subcritical tuple: the fast-decay characterization does not apply".to_string();
        log::warn!("{msg}");
        warnings.push(msg);
    }
    let e = exponents(&canon);
    let n = canon.dim();
    let diff = e.v_threshold - n;
    let (regime, v_exp, log_power) = if diff.abs() <= tol {
        (Regime::Logarithmic, e.fast_rate_u, 1.0 / (canon.gamma - 1.0))
    } else if diff > 0.0 {
        (Regime::FastFast, e.fast_rate_u, 0.0)
    } else {
        (Regime::Intermediate, e.intermediate_rate_v, 0.0)
    };
    RegimeReport {
        regime,
        predicted_u_exponent: e.fast_rate_u,
        predicted_v_exponent: v_exp,
        v_log_power: log_power,
        subcriticality: sub,
        interchanged: interchange,
        warnings,
    }
}

/// Open lower endpoints of the optimal integrability ranges; both extend to ∞.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegrabilityInterval {
    pub u_low: f64,
    pub v_low: f64,
}

impl IntegrabilityInterval {
    pub fn u_contains(&self, r: f64) -> bool {
        r > self.u_low
    }

    pub fn v_contains(&self, s: f64) -> bool {
        s > self.v_low
    }
}

pub fn integrability_interval(params: &Parameters) -> Result<IntegrabilityInterval> {
    let interchange = needs_interchange(params);
    let canon = if interchange { params.interchanged() } else { *params };
    let n = canon.dim();
    let g1 = canon.gamma - 1.0;
    let order = canon.order();
    let denom = canon.p * canon.fast_rate() - (order + canon.sigma2);
    if denom <= 0.0 {
        return Err(Error::InvalidParameters(format!(
            "p(n-beta*gamma)/(gamma-1) - (beta*gamma+sigma2) = {denom} <= 0"
        )));
    }
    let fast_low = n * g1 / (n - order);
    let slow_low = fast_low.max(n * g1 / denom);
    Ok(if interchange {
        IntegrabilityInterval {
            u_low: slow_low,
            v_low: fast_low,
        }
    } else {
        IntegrabilityInterval {
            u_low: fast_low,
            v_low: slow_low,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tuple(n: u32, beta: f64, gamma: f64, p: f64, q: f64, s1: f64, s2: f64) -> Parameters {
        Parameters::new(n, beta, gamma, p, q, s1, s2).unwrap()
    }

    #[test]
    fn validate_accepts_critical_bubble_tuple() {
        assert!(Parameters::scalar(5, 1.0, 2.0, 7.0 / 3.0, 0.0).is_ok());
    }

    #[test]
    fn validate_names_each_violation() {
        let cases = [
            ((3, 1.0, 3.0, 2.0, 2.0, 0.0, 0.0), "gamma out of (1,2]"),
            ((4, 2.0, 2.0, 2.0, 2.0, 0.0, 0.0), "beta*gamma < n violated"),
            ((2, 0.5, 2.0, 2.0, 2.0, 0.0, 0.0), "n >= 3 violated"),
            ((5, -1.0, 2.0, 2.0, 2.0, 0.0, 0.0), "beta > 0 violated"),
            ((5, 1.0, 2.0, 1.0, 2.0, 0.0, 0.0), "p > 1 violated"),
            ((5, 1.0, 2.0, 2.0, 0.5, 0.0, 0.0), "q > 1 violated"),
            ((5, 1.0, 2.0, 2.0, 2.0, -2.0, 0.0), "sigma1 out of (-beta*gamma, 0]"),
            ((5, 1.0, 2.0, 2.0, 2.0, 0.0, 0.5), "sigma2 out of (-beta*gamma, 0]"),
        ];
        for ((n, b, g, p, q, s1, s2), msg) in cases {
            let err = Parameters::new(n, b, g, p, q, s1, s2).unwrap_err();
            assert!(err.to_string().contains(msg), "{err} should mention {msg}");
        }
    }

    #[test]
    fn symmetric_critical_exponents() {
        let e = exponents(&tuple(5, 1.0, 2.0, 7.0 / 3.0, 7.0 / 3.0, 0.0, 0.0));
        assert!((e.q0 - 1.5).abs() < 1e-15 && (e.p0 - 1.5).abs() < 1e-15);
    }

    #[test]
    fn dimension_six_exponents() {
        let e = exponents(&tuple(6, 1.0, 2.0, 2.0, 2.0, 0.0, 0.0));
        assert_eq!(e.q0, 2.0);
        assert_eq!(e.p0, 2.0);
        assert_eq!(e.r0, 3.0);
        assert_eq!(e.s0, 3.0);
    }

    #[test]
    fn subcriticality_examples() {
        assert_eq!(subcriticality(&tuple(5, 1.0, 2.0, 7.0 / 3.0, 7.0 / 3.0, 0.0, 0.0)), Subcriticality::Critical);
        assert_eq!(subcriticality(&tuple(5, 1.0, 2.0, 3.0, 3.0, 0.0, 0.0)), Subcriticality::Supercritical);
        assert_eq!(subcriticality(&tuple(5, 1.0, 2.0, 2.0, 2.0, 0.0, 0.0)), Subcriticality::Subcritical);
    }

    #[test]
    fn regime_examples() {
        let r = classify_regime(&tuple(5, 1.0, 2.0, 2.0, 2.0, 0.0, 0.0));
        assert_eq!(r.regime, Regime::FastFast);
        assert_eq!(r.predicted_u_exponent, 3.0);
        assert_eq!(r.predicted_v_exponent, 3.0);

        let r = classify_regime(&tuple(5, 1.0, 2.0, 5.0 / 3.0, 5.0 / 3.0, 0.0, 0.0));
        assert_eq!(r.regime, Regime::Logarithmic);
        assert_eq!(r.predicted_v_exponent, 3.0);
        assert_eq!(r.v_log_power, 1.0);

        let r = classify_regime(&tuple(5, 1.0, 2.0, 1.5, 3.0, 0.0, 0.0));
        assert_eq!(r.regime, Regime::Intermediate);
        assert!((r.predicted_v_exponent - 2.5).abs() < 1e-15);
        assert!(!r.interchanged);
    }

    #[test]
    fn misordered_tuple_is_relabeled_with_warning() {
        let r = classify_regime(&tuple(5, 1.0, 2.0, 3.0, 1.5, 0.0, 0.0));
        assert!(r.interchanged);
        assert_eq!(r.regime, Regime::Intermediate);
        assert!(!r.warnings.is_empty());
    }

    #[test]
    fn interval_examples() {
        let i = integrability_interval(&tuple(5, 1.0, 2.0, 2.0, 2.0, 0.0, 0.0)).unwrap();
        assert!((i.u_low - 5.0 / 3.0).abs() < 1e-15);
        assert!((i.v_low - 5.0 / 3.0).abs() < 1e-15);
        let i = integrability_interval(&tuple(5, 1.0, 2.0, 1.5, 3.0, 0.0, 0.0)).unwrap();
        assert!((i.v_low - 2.0).abs() < 1e-15);
    }

    #[test]
    fn interval_rejects_degenerate_denominator() {
        // p·(n−βγ)/(γ−1) = 1.1·(5−4.5)/1 = 0.55 < βγ
        let params = tuple(5, 2.25, 2.0, 1.1, 3.0, 0.0, 0.0);
        assert!(integrability_interval(&params).is_err());
    }

    #[test]
    fn regime_report_json_keys() {
        let r = classify_regime(&tuple(5, 1.0, 2.0, 2.0, 2.0, 0.0, 0.0));
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        let mut keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        keys.sort();
        assert_eq!(keys, ["regime", "subcriticality", "u_exponent", "v_exponent", "v_log_power"]);
        assert_eq!(v["regime"], "FastFast");
    }

    #[test]
    fn interval_follows_interchange() {
        let canon = tuple(5, 1.0, 2.0, 1.5, 3.0, 0.0, 0.0);
        let swapped = canon.interchanged();
        let a = integrability_interval(&canon).unwrap();
        let b = integrability_interval(&swapped).unwrap();
        assert_eq!((a.u_low, a.v_low), (b.v_low, b.u_low));
        assert!((a.v_low - 2.0).abs() < 1e-12);
    }
}
