//! Weighted Wolff and Riesz potentials of radial data, the coupled integral
//! systems they define, fixed-point and shooting solvers for positive ground
//! states, and a harness that checks decay rates and integrability exponents.

pub mod cli;
pub mod error;
pub mod geometry;
pub mod params;
pub mod potential;
mod quad;
pub mod quasilinear;
pub mod solver;
pub mod radial;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::{ball_mass, cap_fraction, CapKernel, MassProfile};
pub use params::{
    classify_regime, exponents, integrability_interval, subcriticality, subcriticality_gap, validate, Exponents,
    IntegrabilityInterval, Parameters, Regime, RegimeReport, Subcriticality,
};
pub use quasilinear::{
    find_fast_ground_state, shoot, Component, GroundState, Shot, ShootConfig, ShootState, ShotEvent,
    StepConfig,
};
pub use radial::{fit_decay_rate, lp_norm, Norm, RadialFunction, RadialGrid, RateFit};
pub use potential::{riesz_convolution_at, riesz_eval, weighted_source, wolff_eval, LayerCake, PotentialConfig, WolffOrder};
pub use solver::{
    make_ansatz, picard_step, solve_system, AnsatzKind, InitialGuess, Normalization, SolveConfig,
    SolveResult,
};
pub use verify::{run_suite, Check, Status, Suite, VerificationReport, VerifyConfig};
