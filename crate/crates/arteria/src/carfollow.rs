//! Car-following kernels.
//!
//! Two stateless longitudinal models drive every vehicle in the simulator:
//!
//! * a Krauss-style safe-speed model, where each step caps speed at the
//!   largest value that still allows stopping behind the leader, and
//! * the Improved Intelligent Driver Model (IIDM), an acceleration law with
//!   a free-road term and a desired-gap interaction term.
//!
//! Both are pure functions of a [`FollowContext`] and a set of
//! [`VehicleClassParams`]; the engine owns all state. Speeds are m/s, gaps
//! meters, accelerations m/s². A missing leader is encoded as an infinite
//! gap (`FollowContext::free_road`).
//!
//! The equilibrium of either model at top speed is a gap of
//! `g_min + v_max * tau`, giving the headway returned by
//! [`equilibrium_headway`]:
//!
//! ```
//! use arteria::carfollow::{VehicleClassParams, equilibrium_headway};
//!
//! let eq = equilibrium_headway(&VehicleClassParams::reference());
//! assert!((eq.headway_s - 2.5).abs() < 1e-12);
//! assert!((eq.flow_vph - 1440.0).abs() < 1e-9);
//! ```

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Threshold below which the IIDM free-road term is treated as zero to
/// avoid the exponent singularity at `v == v_max`.
const A_FREE_EPS: f64 = 1e-9;

/// Per-class car-following constants.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VehicleClassParams {
    /// Reaction time τ (s).
    pub tau: f64,
    /// Standstill gap (m).
    pub g_min: f64,
    /// Maximal acceleration (m/s²).
    pub a_max: f64,
    /// Desired deceleration (m/s²).
    pub b: f64,
    /// Speed limit (m/s).
    pub v_max: f64,
    /// Vehicle length (m).
    pub l: f64,
    /// Krauss driver imperfection in [0, 1]; 0 disables dawdling.
    #[serde(default)]
    pub eps: f64,
    /// IIDM interaction exponent.
    #[serde(default = "default_delta1")]
    pub delta1: f64,
    /// IIDM free-road exponent.
    #[serde(default = "default_delta2")]
    pub delta2: f64,
}

fn default_delta1() -> f64 {
    4.0
}

fn default_delta2() -> f64 {
    8.0
}

#[derive(Debug, Error, PartialEq)]
pub enum ParamError {
    #[error("{0} must be strictly positive")]
    NonPositive(&'static str),
    #[error("eps must lie in [0, 1], got {0}")]
    EpsOutOfRange(f64),
}

impl VehicleClassParams {
    /// Manual (human-driven) class.
    pub fn manual() -> Self {
        VehicleClassParams {
            tau: 2.5,
            g_min: 2.0,
            a_max: 2.6,
            b: 4.5,
            v_max: 20.0,
            l: 5.0,
            eps: 0.0,
            delta1: 4.0,
            delta2: 8.0,
        }
    }

    /// Smart (communicating) class: faster reactions, tighter standstill gap.
    pub fn smart() -> Self {
        VehicleClassParams {
            tau: 1.0,
            g_min: 0.5,
            ..Self::manual()
        }
    }

    /// Reference single-intersection class: the parameter set used by the
    /// queue-discharge experiments (equilibrium headway exactly 2.5 s).
    pub fn reference() -> Self {
        VehicleClassParams {
            tau: 2.05,
            g_min: 4.0,
            a_max: 1.5,
            b: 2.0,
            v_max: 20.0,
            l: 5.0,
            eps: 0.0,
            delta1: 4.0,
            delta2: 8.0,
        }
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        for (name, v) in [
            ("tau", self.tau),
            ("g_min", self.g_min),
            ("a_max", self.a_max),
            ("b", self.b),
            ("v_max", self.v_max),
            ("l", self.l),
            ("delta1", self.delta1),
            ("delta2", self.delta2),
        ] {
            if !(v > 0.0) {
                return Err(ParamError::NonPositive(name));
            }
        }
        if !(0.0..=1.0).contains(&self.eps) {
            return Err(ParamError::EpsOutOfRange(self.eps));
        }
        Ok(())
    }
}

/// Kinematic context for one follower at one step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FollowContext {
    /// Own speed (m/s).
    pub v: f64,
    /// Leader speed (m/s); meaningless when there is no leader.
    pub v_l: f64,
    /// Front-bumper-to-rear-bumper gap to the leader (m);
    /// `f64::INFINITY` when there is no leader.
    pub g: f64,
    /// Step length (s).
    pub dt: f64,
}

impl FollowContext {
    pub fn new(v: f64, v_l: f64, g: f64, dt: f64) -> Self {
        FollowContext { v, v_l, g, dt }
    }

    /// Context with no leader at all.
    pub fn free_road(v: f64, dt: f64) -> Self {
        FollowContext {
            v,
            v_l: 0.0,
            g: f64::INFINITY,
            dt,
        }
    }

    pub fn has_leader(&self) -> bool {
        self.g.is_finite()
    }
}

/// Krauss safe speed: the fastest speed from which the follower can still
/// match the leader without closing below the leader's reserved distance.
///
/// ```text
/// v_safe = v_l + (g - v_l * tau) / (v_bar / b + tau),   v_bar = (v + v_l) / 2
/// ```
///
/// The result may be negative; [`krauss_step`] clamps it.
pub fn krauss_safe_speed(ctx: &FollowContext, p: &VehicleClassParams) -> f64 {
    debug_assert!(ctx.has_leader(), "safe speed needs a leader");
    let v_bar = 0.5 * (ctx.v + ctx.v_l);
    ctx.v_l + (ctx.g - ctx.v_l * p.tau) / (v_bar / p.b + p.tau)
}

/// One Krauss speed update.
///
/// Takes the acceleration-bounded, limit-bounded, safety-bounded candidate
/// and applies the dawdling perturbation scaled by `eps` and the uniform
/// draw `u`:
///
/// ```text
/// v1 = min(v + a_max*dt, v_max, v_safe)
/// v0 = v1 - eps * u * (v1 - max(0, v - b*dt))
/// v' = max(0, min(v1, v0))
/// ```
///
/// With `eps = 0` the update is deterministic and `u` is ignored.
pub fn krauss_step(ctx: &FollowContext, p: &VehicleClassParams, u: f64) -> f64 {
    let v_safe = if ctx.has_leader() {
        krauss_safe_speed(ctx, p)
    } else {
        f64::INFINITY
    };
    let v1 = (ctx.v + p.a_max * ctx.dt).min(p.v_max).min(v_safe);
    let v0 = v1 - p.eps * u * (v1 - (ctx.v - p.b * ctx.dt).max(0.0));
    v1.min(v0).max(0.0)
}

/// IIDM desired gap:
/// `g_d = g_min + max(0, v*tau + v*(v - v_l) / (2*sqrt(a_max*b)))`.
pub fn iidm_desired_gap(ctx: &FollowContext, p: &VehicleClassParams) -> f64 {
    let dynamic = ctx.v * p.tau + ctx.v * (ctx.v - ctx.v_l) / (2.0 * (p.a_max * p.b).sqrt());
    p.g_min + dynamic.max(0.0)
}

/// IIDM acceleration law.
///
/// Free-road term `a* = a_max * (1 - (v/v_max)^delta2)`; with `z = g_d / g`:
///
/// ```text
/// a = a_max * (1 - z^delta1)              if z > 1
/// a = a*    * (1 - z^(delta1 * a_max/a*)) otherwise
/// ```
///
/// When `a*` vanishes (cruising at the limit) and the gap is adequate, the
/// law returns exactly 0 rather than evaluating the singular exponent. A
/// missing leader reduces to the free branch because `z = 0`.
pub fn iidm_accel(ctx: &FollowContext, p: &VehicleClassParams) -> f64 {
    let a_free = p.a_max * (1.0 - (ctx.v / p.v_max).powf(p.delta2));
    let z = if ctx.has_leader() {
        iidm_desired_gap(ctx, p) / ctx.g
    } else {
        0.0
    };
    if z > 1.0 {
        p.a_max * (1.0 - z.powf(p.delta1))
    } else if a_free <= A_FREE_EPS {
        0.0
    } else {
        a_free * (1.0 - z.powf(p.delta1 * p.a_max / a_free))
    }
}

/// Steady-state headway and the flow it bounds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Equilibrium {
    /// Headway between successive vehicles at top speed (s).
    pub headway_s: f64,
    /// Sustained flow 3600 / headway (vph).
    pub flow_vph: f64,
}

/// Equilibrium headway `θ_e = tau + (g_min + l) / v_max` and the derived
/// saturation flow in vehicles per hour.
pub fn equilibrium_headway(p: &VehicleClassParams) -> Equilibrium {
    let headway_s = p.tau + (p.g_min + p.l) / p.v_max;
    Equilibrium {
        headway_s,
        flow_vph: 3600.0 / headway_s,
    }
}
