//! Protocol dispatch with verification and reporting.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::cake::MultiAllocation;
use crate::ef::{cut_and_choose, ef_noncontiguous, moving_knife_three_traced};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::prop::{prop_matching, prop_power_two};
use crate::rational::{self, Rational};
use crate::session::{QueryCounts, QuerySession};
use crate::verify::{self, Structure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Protocol {
    CutAndChoose,
    MovingKnife,
    EfPerfect,
    PropPow2,
    PropMatching,
}

impl Protocol {
    pub const ALL: [Protocol; 5] = [
        Protocol::CutAndChoose,
        Protocol::MovingKnife,
        Protocol::EfPerfect,
        Protocol::PropPow2,
        Protocol::PropMatching,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Protocol::CutAndChoose => "cut-and-choose",
            Protocol::MovingKnife => "moving-knife",
            Protocol::EfPerfect => "ef-perfect",
            Protocol::PropPow2 => "prop-pow2",
            Protocol::PropMatching => "prop-matching",
        }
    }

    /// What the protocol promises, as `(envy_free, proportional, contiguous)`.
    /// Every protocol promises a complete and feasible allocation.
    pub fn guarantees(self) -> (bool, bool, bool) {
        match self {
            Protocol::CutAndChoose | Protocol::MovingKnife => (true, true, true),
            Protocol::EfPerfect => (true, true, false),
            Protocol::PropPow2 => (false, true, true),
            Protocol::PropMatching => (false, true, false),
        }
    }

    pub fn run(self, s: &mut QuerySession) -> Result<(MultiAllocation, Option<serde_json::Value>)> {
        Ok(match self {
            Protocol::CutAndChoose => (cut_and_choose(s, 0, 1)?, None),
            Protocol::MovingKnife => {
                let (a, p) = moving_knife_three_traced(s)?;
                let detail = serde_json::json!({
                    "y": rational::format(&p.y),
                    "x": rational::format(&p.x),
                    "shouter": p.shouter,
                    "relabeled": p.relabeled,
                });
                (a, Some(detail))
            }
            Protocol::EfPerfect => (ef_noncontiguous(s)?, None),
            Protocol::PropPow2 => (prop_power_two(s)?, None),
            Protocol::PropMatching => (prop_matching(s)?, None),
        })
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Protocol::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown protocol {s:?}")))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AgentReport {
    pub name: String,
    /// Own bundle value, exact.
    pub value: String,
    pub value_decimal: String,
    /// Pieces per original layer.
    pub pieces: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub protocol: Option<String>,
    pub agents: Vec<AgentReport>,
    pub envy_free: bool,
    pub proportional: bool,
    #[serde(flatten)]
    pub structure: Structure,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub queries: Option<QueryCounts>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<serde_json::Value>,
}

impl Report {
    /// Checks an allocation from scratch.
    pub fn assess(inst: &Instance, a: &MultiAllocation) -> Result<Report> {
        let v = verify::verdict(&inst.cake(), &inst.valuations, a)?;
        let agents = inst
            .names
            .iter()
            .zip(&a.bundles)
            .enumerate()
            .map(|(i, (name, b))| {
                let value: &Rational = &v.values[i][i];
                AgentReport {
                    name: name.clone(),
                    value: rational::format(value),
                    value_decimal: rational::to_decimal(value, 20),
                    pieces: b.layers.iter().map(|p| p.component_count()).collect(),
                }
            })
            .collect();
        Ok(Report {
            protocol: None,
            agents,
            envy_free: v.envy_free,
            proportional: v.proportional,
            structure: v.structure,
            queries: None,
            detail: None,
        })
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report fields serialize")
    }
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub allocation: MultiAllocation,
    pub report: Report,
}

/// Runs `protocol` on `inst` and verifies every promised property exactly
/// before returning.
pub fn solve(inst: &Instance, protocol: Protocol) -> Result<Solution> {
    let mut s = QuerySession::new(inst.cake(), inst.valuations.clone());
    let (allocation, detail) = protocol.run(&mut s)?;
    let mut report = Report::assess(inst, &allocation)?;
    report.protocol = Some(protocol.name().to_string());
    report.queries = Some(s.counts());
    report.detail = detail;

    let (ef, prop, contiguous) = protocol.guarantees();
    let mut broken = Vec::new();
    if !report.structure.complete {
        broken.push("complete");
    }
    if !report.structure.feasible {
        broken.push("feasible");
    }
    if ef && !report.envy_free {
        broken.push("envy-free");
    }
    if prop && !report.proportional {
        broken.push("proportional");
    }
    if contiguous && !report.structure.contiguous {
        broken.push("contiguous");
    }
    if !broken.is_empty() {
        return Err(Error::VerificationFailed(format!(
            "{protocol} output is not {}",
            broken.join(", ")
        )));
    }
    Ok(Solution { allocation, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::generate;

    #[test]
    fn protocol_names_round_trip() {
        for p in Protocol::ALL {
            assert_eq!(p.name().parse::<Protocol>().unwrap(), p);
        }
        assert!("nope".parse::<Protocol>().is_err());
    }

    #[test]
    fn uniform_two_by_two_cut_and_choose() {
        let inst = generate(2, 2, 0, 1);
        let sol = solve(&inst, Protocol::CutAndChoose).unwrap();
        let r = &sol.report;
        assert!(r.envy_free && r.proportional && r.structure.feasible && r.structure.contiguous);
        assert!(r.queries.unwrap().long_total() <= 3);
    }

    #[test]
    fn layer_surplus_is_a_precondition_error() {
        let inst = generate(2, 3, 2, 5);
        for p in [
            Protocol::EfPerfect,
            Protocol::PropMatching,
            Protocol::CutAndChoose,
        ] {
            assert!(matches!(solve(&inst, p), Err(Error::Precondition { .. })), "{p}");
        }
    }

    #[test]
    fn four_uniform_agents_pow2() {
        let mut inst = generate(4, 4, 0, 3);
        let cake = inst.cake();
        let uniform =
            crate::valuation::Valuation::from_layer_weights(&cake, &vec![rational::one(); 4]).unwrap();
        inst.valuations = vec![uniform; 4];
        let sol = solve(&inst, Protocol::PropPow2).unwrap();
        assert!(sol.report.agents.iter().all(|a| a.value == "1/4"));
    }
}
