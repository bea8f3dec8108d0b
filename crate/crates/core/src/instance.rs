//! Instance and allocation files, and seeded random instances.
//!
//! Rationals are written as `"p/q"` or `"p"` strings so nothing is ever
//! rounded on the way in or out.
//!
//! ```json
//! {"layers": [{"start": "0", "end": "1"}],
//!  "agents": [{"name": "a", "densities": [[{"to": "1/2", "value": "3"},
//!                                          {"to": "1", "value": "1"}]]}]}
//! ```
//!
//! Density segments tile their layer: each runs from the previous `to` (the
//! layer start for the first) to its own `to`, and the last ends at the layer
//! end.

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cake::{LayeredCake, LayeredPiece, MultiAllocation};
use crate::error::{Error, Result};
use crate::piece::{Interval, Piece};
use crate::rational::{self, Rational};
use crate::step::StepFn;
use crate::valuation::Valuation;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub extents: Vec<Interval>,
    pub names: Vec<String>,
    pub valuations: Vec<Valuation>,
}

#[derive(Serialize, Deserialize)]
struct RawLayer {
    start: String,
    end: String,
}

#[derive(Serialize, Deserialize)]
struct RawSegment {
    to: String,
    value: String,
}

#[derive(Serialize, Deserialize)]
struct RawAgent {
    name: String,
    densities: Vec<Vec<RawSegment>>,
}

#[derive(Serialize, Deserialize)]
struct RawInstance {
    layers: Vec<RawLayer>,
    agents: Vec<RawAgent>,
}

fn parse_q(text: &str, what: &str) -> Result<Rational> {
    rational::parse(text).map_err(|_| Error::Parse(format!("{what}: {text:?} is not a rational literal")))
}

impl Instance {
    pub fn cake(&self) -> LayeredCake {
        LayeredCake::new(self.extents.clone())
    }

    pub fn agent_count(&self) -> usize {
        self.valuations.len()
    }

    pub fn layer_count(&self) -> usize {
        self.extents.len()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawInstance = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if raw.layers.is_empty() {
            return Err(Error::Parse("instance has no layers".into()));
        }
        if raw.agents.is_empty() {
            return Err(Error::Parse("instance has no agents".into()));
        }
        let mut extents = Vec::with_capacity(raw.layers.len());
        for (j, l) in raw.layers.iter().enumerate() {
            let lo = parse_q(&l.start, &format!("layer {j} start"))?;
            let hi = parse_q(&l.end, &format!("layer {j} end"))?;
            let iv = Interval::new(lo, hi).map_err(|e| Error::Parse(format!("layer {j}: {e}")))?;
            if iv.is_degenerate() {
                return Err(Error::Parse(format!("layer {j} is empty")));
            }
            extents.push(iv);
        }
        let cake = LayeredCake::new(extents.clone());

        let mut names = Vec::with_capacity(raw.agents.len());
        let mut valuations = Vec::with_capacity(raw.agents.len());
        for agent in &raw.agents {
            if agent.densities.len() != extents.len() {
                return Err(Error::Parse(format!(
                    "agent {:?} has {} densities for {} layers",
                    agent.name,
                    agent.densities.len(),
                    extents.len()
                )));
            }
            let densities = agent
                .densities
                .iter()
                .zip(&extents)
                .enumerate()
                .map(|(j, (segs, extent))| {
                    density(segs, extent, &format!("agent {:?} layer {j}", agent.name))
                })
                .collect::<Result<Vec<_>>>()?;
            names.push(agent.name.clone());
            valuations.push(Valuation::new(&cake, densities)?);
        }
        Ok(Instance {
            extents,
            names,
            valuations,
        })
    }

    /// Canonical text: the normalized densities, clipped to their layers.
    pub fn to_json(&self) -> String {
        let raw = RawInstance {
            layers: self
                .extents
                .iter()
                .map(|iv| RawLayer {
                    start: rational::format(&iv.lo),
                    end: rational::format(&iv.hi),
                })
                .collect(),
            agents: self
                .names
                .iter()
                .zip(&self.valuations)
                .map(|(name, v)| RawAgent {
                    name: name.clone(),
                    densities: v
                        .densities()
                        .iter()
                        .zip(&self.extents)
                        .map(|(d, extent)| segments_within(d, extent))
                        .collect(),
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&raw).expect("plain strings serialize");
        s.push('\n');
        s
    }
}

fn density(segs: &[RawSegment], extent: &Interval, what: &str) -> Result<StepFn> {
    if segs.is_empty() {
        return Err(Error::Parse(format!("{what}: no density segments")));
    }
    let mut breaks = vec![rational::zero(), extent.lo.clone()];
    let mut values = vec![Rational::zero()];
    for seg in segs {
        let to = parse_q(&seg.to, what)?;
        let value = parse_q(&seg.value, what)?;
        if value.is_negative() {
            return Err(Error::InvalidValuation(format!(
                "{what}: negative density {value}"
            )));
        }
        if to <= *breaks.last().unwrap() {
            return Err(Error::Parse(format!("{what}: segment end {to} does not advance")));
        }
        breaks.push(to);
        values.push(value);
    }
    if *breaks.last().unwrap() != extent.hi {
        return Err(Error::Parse(format!(
            "{what}: segments end at {} but the layer ends at {}",
            breaks.last().unwrap(),
            extent.hi
        )));
    }
    breaks.push(rational::one());
    values.push(Rational::zero());
    Ok(StepFn::from_segments(breaks, values))
}

fn segments_within(d: &StepFn, extent: &Interval) -> Vec<RawSegment> {
    let mut out: Vec<RawSegment> = Vec::new();
    let mut last_value: Option<Rational> = None;
    for (s, e, v) in d.segments() {
        if *e <= extent.lo || *s >= extent.hi {
            continue;
        }
        let to = rational::min(e, &extent.hi);
        if last_value.as_ref() == Some(v) {
            out.last_mut().unwrap().to = rational::format(&to);
        } else {
            out.push(RawSegment {
                to: rational::format(&to),
                value: rational::format(v),
            });
            last_value = Some(v.clone());
        }
    }
    out
}

/// Random step density on `[0, 1]` with `breakpoints` interior breakpoints on
/// the 1/1024 grid and small integer values (not all zero).
pub fn random_density<R: Rng>(rng: &mut R, breakpoints: usize) -> StepFn {
    let k = breakpoints.min(1023);
    let mut cuts: Vec<i64> = rand::seq::index::sample(rng, 1023, k)
        .into_iter()
        .map(|c| c as i64 + 1)
        .collect();
    cuts.sort_unstable();
    let mut breaks = vec![rational::zero()];
    breaks.extend(cuts.iter().map(|&c| rational::q(c, 1024)));
    breaks.push(rational::one());
    let mut values: Vec<Rational> = (0..=k).map(|_| rational::int(rng.gen_range(0..=12))).collect();
    if values.iter().all(Zero::is_zero) {
        values[rng.gen_range(0..=k)] = rational::one();
    }
    StepFn::from_segments(breaks, values)
}

/// Random valuation over a cake, one independent density per layer.
pub fn random_valuation<R: Rng>(rng: &mut R, cake: &LayeredCake, breakpoints: usize) -> Valuation {
    loop {
        let densities = (0..cake.layer_count())
            .map(|_| random_density(rng, breakpoints))
            .collect();
        if let Ok(v) = Valuation::new(cake, densities) {
            return v;
        }
    }
}

/// Deterministic instance on `m` full layers.
pub fn generate(agents: usize, layers: usize, breakpoints: usize, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let extents = vec![Interval::unit(); layers];
    let cake = LayeredCake::new(extents.clone());
    let valuations = (0..agents)
        .map(|_| random_valuation(&mut rng, &cake, breakpoints))
        .collect();
    Instance {
        extents,
        names: (0..agents).map(|i| format!("agent{i}")).collect(),
        valuations,
    }
}

#[derive(Serialize, Deserialize)]
struct RawBundle {
    name: String,
    layers: Vec<Vec<[String; 2]>>,
}

#[derive(Serialize, Deserialize)]
struct RawAllocation {
    agents: Vec<RawBundle>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    report: Option<serde_json::Value>,
}

/// Allocation file: per agent, per layer, a list of `["lo", "hi"]` intervals,
/// plus an optional free-form report.
pub fn allocation_to_json(
    names: &[String],
    a: &MultiAllocation,
    report: Option<serde_json::Value>,
) -> String {
    let raw = RawAllocation {
        agents: names
            .iter()
            .zip(&a.bundles)
            .map(|(name, b)| RawBundle {
                name: name.clone(),
                layers: b
                    .layers
                    .iter()
                    .map(|p| {
                        p.intervals()
                            .iter()
                            .map(|iv| [rational::format(&iv.lo), rational::format(&iv.hi)])
                            .collect()
                    })
                    .collect(),
            })
            .collect(),
        report,
    };
    let mut s = serde_json::to_string_pretty(&raw).expect("plain values serialize");
    s.push('\n');
    s
}

/// Reads an allocation file back; returns the allocation and its report, if any.
pub fn allocation_from_json(
    text: &str,
    layers: usize,
) -> Result<(MultiAllocation, Option<serde_json::Value>)> {
    let raw: RawAllocation = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let mut bundles = Vec::with_capacity(raw.agents.len());
    for b in &raw.agents {
        if b.layers.len() != layers {
            return Err(Error::Parse(format!(
                "bundle {:?} has {} layers, the cake has {layers}",
                b.name,
                b.layers.len()
            )));
        }
        let mut pieces = Vec::with_capacity(layers);
        for ivs in &b.layers {
            let mut raw_ivs = Vec::with_capacity(ivs.len());
            for [lo, hi] in ivs {
                let lo = parse_q(lo, &b.name)?;
                let hi = parse_q(hi, &b.name)?;
                raw_ivs.push(Interval::new(lo, hi).map_err(|e| Error::Parse(format!("{}: {e}", b.name)))?);
            }
            pieces.push(Piece::canonicalize(raw_ivs).map_err(|e| Error::Parse(e.to_string()))?);
        }
        bundles.push(LayeredPiece { layers: pieces });
    }
    Ok((MultiAllocation { bundles }, raw.report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, q};

    const MINIMAL: &str = r#"{"layers":[{"start":"0","end":"1"}],
        "agents":[{"name":"solo","densities":[[{"to":"1","value":"1"}]]}]}"#;

    #[test]
    fn minimal_file() {
        let inst = Instance::parse(MINIMAL).unwrap();
        assert_eq!(inst.layer_count(), 1);
        assert_eq!(inst.valuations[0].total(), int(1));
    }

    #[test]
    fn rejects_bad_files() {
        let negative = MINIMAL.replace(r#""value":"1""#, r#""value":"-1""#);
        assert!(matches!(
            Instance::parse(&negative),
            Err(Error::InvalidValuation(_))
        ));
        let decimal = MINIMAL.replace(r#""value":"1""#, r#""value":"0.5""#);
        assert!(matches!(Instance::parse(&decimal), Err(Error::Parse(_))));
        let empty = MINIMAL.replace(r#""start":"0""#, r#""start":"1""#);
        assert!(matches!(Instance::parse(&empty), Err(Error::Parse(_))));
        let short = MINIMAL.replace(r#""to":"1""#, r#""to":"1/2""#);
        assert!(matches!(Instance::parse(&short), Err(Error::Parse(_))));
        assert!(matches!(Instance::parse("{"), Err(Error::Parse(_))));
    }

    #[test]
    fn partial_layer_extent() {
        let text = r#"{"layers":[{"start":"1/4","end":"3/4"},{"start":"0","end":"1"}],
            "agents":[{"name":"a","densities":[[{"to":"1/2","value":"2"},{"to":"3/4","value":"0"}],
                                                [{"to":"1","value":"1"}]]}]}"#;
        let inst = Instance::parse(text).unwrap();
        let v = &inst.valuations[0];
        assert_eq!(v.piece_value(0, &Piece::unit()), q(1, 3));
        assert_eq!(Instance::parse(&inst.to_json()).unwrap(), inst);
    }

    #[test]
    fn generated_instances_round_trip() {
        let a = generate(4, 3, 8, 7);
        let text = a.to_json();
        assert_eq!(text, generate(4, 3, 8, 7).to_json());
        let back = Instance::parse(&text).unwrap();
        assert_eq!(back.to_json(), text);
        assert!(back.valuations.iter().all(|v| v.total() == int(1)));
    }

    #[test]
    fn allocation_round_trip() {
        let a = MultiAllocation {
            bundles: vec![
                LayeredPiece {
                    layers: vec![Piece::span(&q(0, 1), &q(1, 3))],
                },
                LayeredPiece {
                    layers: vec![Piece::span(&q(1, 3), &q(1, 1))],
                },
            ],
        };
        let names = vec!["x".to_string(), "y".to_string()];
        let text = allocation_to_json(&names, &a, None);
        assert_eq!(allocation_from_json(&text, 1).unwrap().0, a);
        assert!(allocation_from_json(&text, 2).is_err());
    }
}
