//! Network topology: lanes, intersections, turn movements.
//!
//! The graph is a set of directed lanes joined at intersections by
//! movements `(from_lane, turn) -> to_lane`. Lanes are identified by
//! string ids so scenario files stay hand-editable; the engine compiles
//! the graph to index form before running. All maps are ordered so that
//! serialization and iteration are deterministic.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Turn {
    Left,
    Straight,
    Right,
}

impl Turn {
    /// Cumulative-probability ordering used by route assignment.
    pub const ORDER: [Turn; 3] = [Turn::Left, Turn::Straight, Turn::Right];

    pub fn as_str(&self) -> &'static str {
        match self {
            Turn::Left => "left",
            Turn::Straight => "straight",
            Turn::Right => "right",
        }
    }
}

impl std::fmt::Display for Turn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One directed lane. Positions run from 0 at the upstream end to
/// `length` at the downstream end; the stop bar sits near the downstream
/// end on signalized approaches.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Lane {
    /// Length in meters.
    pub length: f64,
    /// Speed limit in m/s.
    pub speed_limit: f64,
    /// Stop bar position in meters from the lane start.
    pub stop_bar: f64,
}

impl Lane {
    pub fn new(length: f64, speed_limit: f64) -> Self {
        Lane {
            length,
            speed_limit,
            // default: one meter short of the lane end
            stop_bar: length - 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Movement {
    pub from: String,
    pub turn: Turn,
    pub to: String,
}

/// A junction of lanes. `signalized == false` means all movements flow
/// freely (no controller may be attached).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Intersection {
    pub incoming: Vec<String>,
    pub movements: Vec<Movement>,
    pub signalized: bool,
}

/// The whole directed network.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkGraph {
    pub lanes: BTreeMap<String, Lane>,
    pub intersections: BTreeMap<String, Intersection>,
    pub sources: Vec<String>,
    pub sinks: Vec<String>,
}

#[derive(Debug, Error, PartialEq)]
pub enum NetError {
    #[error("lane {0}: length must be > 0")]
    BadLength(String),
    #[error("lane {0}: speed limit must be > 0")]
    BadSpeedLimit(String),
    #[error("lane {0}: stop bar must lie in (0, length]")]
    BadStopBar(String),
    #[error("intersection {0}: movement references unknown lane {1}")]
    UnknownLane(String, String),
    #[error("intersection {0}: movement from {1} is not an incoming lane")]
    NotIncoming(String, String),
    #[error("intersection {0}: duplicate movement ({1}, {2})")]
    DuplicateMovement(String, String, Turn),
    #[error("intersection {0}: unsignalized intersections cannot carry a controller")]
    ControllerOnUnsignalized(String),
    #[error("source {0} is unknown or also listed as a sink")]
    BadSource(String),
    #[error("sink {0} is unknown")]
    BadSink(String),
    #[error("lane {0} feeds {1} intersections; each lane may feed at most one")]
    MultipleDownstream(String, usize),
    #[error("lane {0} has no downstream intersection and is not a sink")]
    DeadEnd(String),
    #[error("source {0} cannot reach any sink")]
    Unreachable(String),
}

impl NetworkGraph {
    /// Validate every structural invariant. Generated and loaded networks
    /// go through the same checks.
    pub fn validate(&self) -> Result<(), NetError> {
        for (id, lane) in &self.lanes {
            if !(lane.length > 0.0) {
                return Err(NetError::BadLength(id.clone()));
            }
            if !(lane.speed_limit > 0.0) {
                return Err(NetError::BadSpeedLimit(id.clone()));
            }
            if !(lane.stop_bar > 0.0 && lane.stop_bar <= lane.length) {
                return Err(NetError::BadStopBar(id.clone()));
            }
        }

        // each lane may be an incoming lane of at most one intersection
        let mut downstream_of: BTreeMap<&str, usize> = BTreeMap::new();
        for (iid, ix) in &self.intersections {
            for lane in &ix.incoming {
                if !self.lanes.contains_key(lane) {
                    return Err(NetError::UnknownLane(iid.clone(), lane.clone()));
                }
                *downstream_of.entry(lane.as_str()).or_insert(0) += 1;
            }
            let mut seen: BTreeSet<(&str, Turn)> = BTreeSet::new();
            for m in &ix.movements {
                for lane in [&m.from, &m.to] {
                    if !self.lanes.contains_key(lane) {
                        return Err(NetError::UnknownLane(iid.clone(), lane.clone()));
                    }
                }
                if !ix.incoming.contains(&m.from) {
                    return Err(NetError::NotIncoming(iid.clone(), m.from.clone()));
                }
                if !seen.insert((m.from.as_str(), m.turn)) {
                    return Err(NetError::DuplicateMovement(
                        iid.clone(),
                        m.from.clone(),
                        m.turn,
                    ));
                }
            }
        }
        for (lane, n) in &downstream_of {
            if *n > 1 {
                return Err(NetError::MultipleDownstream(lane.to_string(), *n));
            }
        }

        let sink_set: BTreeSet<&str> = self.sinks.iter().map(|s| s.as_str()).collect();
        for s in &self.sources {
            if !self.lanes.contains_key(s) || sink_set.contains(s.as_str()) {
                return Err(NetError::BadSource(s.clone()));
            }
        }
        for s in &self.sinks {
            if !self.lanes.contains_key(s) {
                return Err(NetError::BadSink(s.clone()));
            }
        }

        // every lane either feeds an intersection or is a sink
        for id in self.lanes.keys() {
            if !downstream_of.contains_key(id.as_str()) && !sink_set.contains(id.as_str()) {
                return Err(NetError::DeadEnd(id.clone()));
            }
        }

        // connectivity: every source reaches at least one sink
        for s in &self.sources {
            if !self.reaches_any_sink(s, &sink_set) {
                return Err(NetError::Unreachable(s.clone()));
            }
        }
        Ok(())
    }

    fn reaches_any_sink(&self, from: &str, sinks: &BTreeSet<&str>) -> bool {
        let mut stack = vec![from];
        let mut seen: BTreeSet<&str> = BTreeSet::new();
        while let Some(lane) = stack.pop() {
            if sinks.contains(lane) {
                return true;
            }
            if !seen.insert(lane) {
                continue;
            }
            for next in self.successors(lane) {
                stack.push(next);
            }
        }
        false
    }

    /// Lanes reachable from `lane` through one movement.
    pub fn successors<'a>(&'a self, lane: &str) -> impl Iterator<Item = &'a str> {
        let lane = lane.to_string();
        self.intersections.values().flat_map(move |ix| {
            let lane = lane.clone();
            ix.movements
                .iter()
                .filter(move |m| m.from == lane)
                .map(|m| m.to.as_str())
        })
    }

    /// The intersection a lane feeds into, if any.
    pub fn downstream_intersection(&self, lane: &str) -> Option<(&str, &Intersection)> {
        self.intersections
            .iter()
            .find(|(_, ix)| ix.incoming.iter().any(|l| l == lane))
            .map(|(id, ix)| (id.as_str(), ix))
    }

    /// Movement lookup for `(lane, turn)` at the lane's downstream
    /// intersection.
    pub fn movement_target(&self, lane: &str, turn: Turn) -> Option<&str> {
        let (_, ix) = self.downstream_intersection(lane)?;
        ix.movements
            .iter()
            .find(|m| m.from == lane && m.turn == turn)
            .map(|m| m.to.as_str())
    }

    pub fn is_sink(&self, lane: &str) -> bool {
        self.sinks.iter().any(|s| s == lane)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_lane_chain() -> NetworkGraph {
        let mut net = NetworkGraph::default();
        net.lanes.insert("a".into(), Lane::new(100.0, 20.0));
        net.lanes.insert("b".into(), Lane::new(100.0, 20.0));
        net.intersections.insert(
            "i1".into(),
            Intersection {
                incoming: vec!["a".into()],
                movements: vec![Movement {
                    from: "a".into(),
                    turn: Turn::Straight,
                    to: "b".into(),
                }],
                signalized: false,
            },
        );
        net.sources = vec!["a".into()];
        net.sinks = vec!["b".into()];
        net
    }

    #[test]
    fn chain_validates() {
        assert_eq!(two_lane_chain().validate(), Ok(()));
    }

    #[test]
    fn unknown_lane_named_in_error() {
        let mut net = two_lane_chain();
        net.intersections.get_mut("i1").unwrap().movements[0].to = "ghost".into();
        assert_eq!(
            net.validate(),
            Err(NetError::UnknownLane("i1".into(), "ghost".into()))
        );
    }

    #[test]
    fn dangling_lane_rejected() {
        let mut net = two_lane_chain();
        net.lanes.insert("c".into(), Lane::new(50.0, 20.0));
        assert_eq!(net.validate(), Err(NetError::DeadEnd("c".into())));
    }

    #[test]
    fn disconnected_source_rejected() {
        let mut net = two_lane_chain();
        // orphan source: lane d loops to nothing
        net.lanes.insert("d".into(), Lane::new(50.0, 20.0));
        net.sinks.push("d".into());
        net.sources = vec!["d".into()];
        // d is listed as both source and sink
        assert_eq!(net.validate(), Err(NetError::BadSource("d".into())));
    }

    #[test]
    fn duplicate_movement_rejected() {
        let mut net = two_lane_chain();
        let m = net.intersections.get_mut("i1").unwrap();
        m.movements.push(Movement {
            from: "a".into(),
            turn: Turn::Straight,
            to: "b".into(),
        });
        assert!(matches!(
            net.validate(),
            Err(NetError::DuplicateMovement(..))
        ));
    }
}
