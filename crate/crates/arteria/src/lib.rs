//! Microscopic arterial traffic simulation.
//!
//! `arteria` simulates signalized arterial corridors vehicle by vehicle:
//! two car-following models (a Krauss-style safe-speed model and the IIDM),
//! a two-class fleet of manual and smart vehicles, fixed/actuated/
//! max-pressure signal control, detector-based queue sensing, and a platoon
//! lifecycle manager for groups of communicating smart vehicles.
//!
//! The crate is organized bottom-up:
//!
//! * [`carfollow`] — pure longitudinal kernels and equilibrium analysis
//! * [`net`] — lanes, intersections, movements
//! * [`scenario`] — scenario files, validation, and experiment builders
//! * [`demand`] — spawning, Dijkstra routing, turn-probability routing
//! * [`signal`] — timing plans and the three controller modes
//! * [`sensing`] — point detectors and paired queue sensors
//! * [`platoon`] — platoon formation, splitting, and dissolution rules
//! * [`engine`] — the deterministic discrete-time loop
//! * [`metrics`] — throughput measurement, sweeps, and capacity protocol
//!
//! Simulations are deterministic: a scenario plus a seed reproduces the
//! same trajectories bit for bit.

pub mod carfollow;
pub mod csvio;
pub mod demand;
pub mod engine;
pub mod metrics;
pub mod net;
pub mod platoon;
pub mod rng;
pub mod scenario;
pub mod sensing;
pub mod signal;
