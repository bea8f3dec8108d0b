//! Proportional protocols.
//!
//! Both protocols start with the same reduction while there are more agents
//! than layers: some layer is worth at least `1/n'` of the current cake to
//! someone, every such agent marks the shortest prefix of that layer worth
//! exactly `1/n'` to them, and the smallest mark goes to its owner. Everyone
//! else values that prefix at no more than `1/n'`, so the rest is still worth
//! at least `(n' - 1)/n'` to them.
//!
//! [`prop_power_two`] then splits agents and layers in halves at a majority
//! switching point. [`prop_matching`] has one agent cut the cake into equal
//! pieces and hands out an envy-free matching, recursing on what is left.

use crate::cake::{DiagonalSide, Layer, LayeredCake, LayeredPiece, MultiAllocation};
use crate::ef::{cut_and_choose_on, Awards};
use crate::error::{Error, Result};
use crate::matching::{max_envy_free_matching, BipartiteGraph};
use crate::piece::Piece;
use crate::rational::{self, Rational};
use crate::session::QuerySession;

/// Pieces worth exactly `V_cutter(cake) / parts` each to the cutter, in
/// original coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquitablePartition {
    pub pieces: Vec<LayeredPiece>,
    pub cutter: usize,
}

/// The part of the cake still to be divided, the agents still waiting, and
/// what each of them has told us about each layer.
struct Residual {
    cake: LayeredCake,
    agents: Vec<usize>,
    values: Vec<Vec<Rational>>,
}

impl Residual {
    fn start(s: &mut QuerySession) -> Result<Self> {
        let cake = s.cake().clone();
        let agents: Vec<usize> = (0..s.agent_count()).collect();
        let mut values = Vec::with_capacity(agents.len());
        for &a in &agents {
            let row = (0..cake.layer_count())
                .map(|j| s.layer_value(a, &cake, j))
                .collect::<Result<Vec<_>>>()?;
            values.push(row);
        }
        Ok(Residual { cake, agents, values })
    }

    fn total(&self, k: usize) -> Rational {
        self.values[k].iter().sum()
    }

    /// Hands out prefixes until there are no more agents than layers.
    /// Layers emptied on the way are dropped if `drop_empty`.
    fn peel(&mut self, s: &mut QuerySession, awards: &mut Awards, drop_empty: bool) -> Result<()> {
        while self.agents.len() > self.cake.layer_count() {
            let n = rational::int(self.agents.len() as i64);
            let targets: Vec<Rational> = (0..self.agents.len()).map(|k| self.total(k) / &n).collect();
            let (j, eligible) = (0..self.cake.layer_count())
                .map(|j| {
                    let who: Vec<usize> = (0..self.agents.len())
                        .filter(|&k| self.values[k][j] >= targets[k])
                        .collect();
                    (j, who)
                })
                .find(|(_, who)| !who.is_empty())
                .expect("every agent values some layer at 1/m' >= 1/n' of the rest");

            let mut winner: Option<(usize, Rational)> = None;
            for k in eligible {
                let y = self.cake_cut(s, k, j, &targets[k])?;
                if winner.as_ref().is_none_or(|(_, best)| y < *best) {
                    winner = Some((k, y));
                }
            }
            let (k, y) = winner.expect("eligible set is non-empty");
            let prefix = Piece::span(&rational::zero(), &y);
            let layer = self.cake.layer(j)?;
            awards.push((
                self.agents[k],
                layer.to_original(&prefix, self.cake.original_layers()),
            ));

            self.cake = self.cake.remove_from_layer(j, &prefix);
            self.agents.remove(k);
            self.values.remove(k);
            for kk in 0..self.agents.len() {
                self.values[kk][j] = s.layer_value(self.agents[kk], &self.cake, j)?;
            }
            if drop_empty && self.cake.layers()[j].is_empty() {
                let keep: Vec<usize> = (0..self.cake.layer_count()).filter(|&l| l != j).collect();
                self.cake = self.cake.select(&keep);
                for row in &mut self.values {
                    row.remove(j);
                }
            }
        }
        Ok(())
    }

    fn cake_cut(&self, s: &mut QuerySession, k: usize, j: usize, r: &Rational) -> Result<Rational> {
        s.short_cut(self.agents[k], &self.cake, j, &rational::zero(), r)
    }
}

fn whole_to(cake: &LayeredCake, agent: usize) -> (usize, LayeredPiece) {
    (agent, cake.whole_original())
}

pub fn prop_power_two(s: &mut QuerySession) -> Result<MultiAllocation> {
    const NAME: &str = "power-of-two proportional division";
    let n = s.agent_count();
    let m = s.cake().layer_count();
    if !m.is_power_of_two() {
        return Err(Error::precondition(
            NAME,
            format!("layer count {m} is not a power of two"),
        ));
    }
    if n < m {
        return Err(Error::precondition(
            NAME,
            format!("{n} agents for {m} layers; needs n >= m"),
        ));
    }
    let mut awards = Awards::new();
    let mut rest = Residual::start(s)?;
    rest.peel(s, &mut awards, false)?;
    let totals = (0..rest.agents.len()).map(|k| rest.total(k)).collect();
    halve(s, &rest.cake, &rest.agents, totals, &mut awards)?;
    Ok(MultiAllocation::from_assignments(
        n,
        s.cake().original_layers(),
        awards,
    ))
}

/// `n = m` agents on `m = 2^a` layers; `totals[k]` is agent `agents[k]`'s value
/// for `cake`.
fn halve(
    s: &mut QuerySession,
    cake: &LayeredCake,
    agents: &[usize],
    totals: Vec<Rational>,
    awards: &mut Awards,
) -> Result<()> {
    match agents.len() {
        1 => {
            awards.push(whole_to(cake, agents[0]));
            return Ok(());
        }
        2 => {
            awards.extend(cut_and_choose_on(s, cake, agents[0], agents[1])?);
            return Ok(());
        }
        _ => {}
    }
    let x = s.majority_switching_point(agents, cake)?;
    let mut lr = Vec::with_capacity(agents.len());
    for &a in agents {
        lr.push(s.long_eval(a, cake, &x)?);
    }
    let half = agents.len() / 2;
    let two = rational::int(2);
    // weak preference for LR: lr >= total - lr
    let strict_rl: Vec<bool> = (0..agents.len()).map(|k| &lr[k] * &two < totals[k]).collect();
    let strict_lr: Vec<bool> = (0..agents.len()).map(|k| &lr[k] * &two > totals[k]).collect();
    let mut left_room = half - strict_lr.iter().filter(|&&b| b).count();
    let mut goes_left = vec![false; agents.len()];
    for k in 0..agents.len() {
        if strict_lr[k] {
            goes_left[k] = true;
        } else if !strict_rl[k] && left_room > 0 {
            goes_left[k] = true;
            left_room -= 1;
        }
    }

    for (side, left) in [(DiagonalSide::LR, true), (DiagonalSide::RL, false)] {
        let (sub, _) = cake.merge_diagonal(&x, side)?;
        let members: Vec<usize> = (0..agents.len()).filter(|&k| goes_left[k] == left).collect();
        debug_assert_eq!(members.len(), half);
        let group: Vec<usize> = members.iter().map(|&k| agents[k]).collect();
        let values = members
            .iter()
            .map(|&k| if left { lr[k].clone() } else { &totals[k] - &lr[k] })
            .collect();
        halve(s, &sub, &group, values, awards)?;
    }
    Ok(())
}

/// Splits `cake` into `parts = layer_count` pieces the cutter values equally.
///
/// Each step pairs a layer worth at most the target with one worth at least
/// the target, and cuts the two-layer diagonal piece `C_j ∩ [0, x] ∪
/// C_j' ∩ [x, 1]` to exactly the target with one long cut. The leftovers
/// `C_j ∩ [x, 1]` and `C_j' ∩ [0, x]` are disjoint and become one layer.
pub fn equitable_partition(
    s: &mut QuerySession,
    cake: &LayeredCake,
    cutter: usize,
    parts: usize,
) -> Result<EquitablePartition> {
    let m = cake.layer_count();
    if parts != m || m == 0 {
        return Err(Error::precondition(
            "equitable partition",
            format!("asked for {parts} pieces of a {m}-layer cake"),
        ));
    }
    let mut layers: Vec<Layer> = cake.layers().to_vec();
    let mut values = Vec::with_capacity(m);
    for j in 0..m {
        values.push(s.layer_value(cutter, cake, j)?);
    }
    let total: Rational = values.iter().sum();
    let target = total / rational::int(m as i64);

    let mut pieces = Vec::with_capacity(m);
    while layers.len() > 1 {
        let j = values
            .iter()
            .position(|v| *v <= target)
            .expect("some layer is at most the average");
        let j2 = (0..values.len())
            .find(|&l| l != j && values[l] >= target)
            .expect("some other layer is at least the average");
        let pair = cake.with_layers(vec![layers[j].clone(), layers[j2].clone()]);
        let x = s.long_cut(cutter, &pair, &target)?;
        pieces.push(pair.to_original(&pair.diagonal_piece(&x, DiagonalSide::LR)?));

        let residue = layers[j]
            .clip(&x, &rational::one())
            .merged(&layers[j2].clip(&rational::zero(), &x))
            .expect("opposite sides of x are disjoint");
        let residue_value = &values[j] + &values[j2] - &target;
        let (lo, hi) = (j.min(j2), j.max(j2));
        layers.remove(hi);
        values.remove(hi);
        layers[lo] = residue;
        values[lo] = residue_value;
    }
    pieces.push(layers[0].as_original(cake.original_layers()));
    Ok(EquitablePartition { pieces, cutter })
}

pub fn prop_matching(s: &mut QuerySession) -> Result<MultiAllocation> {
    let n = s.agent_count();
    let m = s.cake().layer_count();
    if n < m || m == 0 {
        return Err(Error::precondition(
            "matching-based proportional division",
            format!("{n} agents for {m} layers; needs n >= m >= 1"),
        ));
    }
    let mut awards = Awards::new();
    let mut rest = Residual::start(s)?;
    rest.peel(s, &mut awards, true)?;
    match_round(s, rest, &mut awards)?;
    Ok(MultiAllocation::from_assignments(
        n,
        s.cake().original_layers(),
        awards,
    ))
}

/// One round with as many agents as layers.
fn match_round(s: &mut QuerySession, rest: Residual, awards: &mut Awards) -> Result<()> {
    let Residual { cake, agents, values } = rest;
    let n = agents.len();
    debug_assert_eq!(n, cake.layer_count());
    if n == 0 {
        return Ok(());
    }
    if n == 1 {
        awards.push(whole_to(&cake, agents[0]));
        return Ok(());
    }
    if n == 2 {
        awards.extend(cut_and_choose_on(s, &cake, agents[0], agents[1])?);
        return Ok(());
    }

    let cutter = agents[0];
    let partition = equitable_partition(s, &cake, cutter, n)?;
    let piece_cakes: Vec<LayeredCake> = partition
        .pieces
        .iter()
        .map(|p| {
            Ok(LayeredCake::from_layers(
                vec![Layer::from_original(p)?],
                cake.original_layers(),
            ))
        })
        .collect::<Result<_>>()?;

    let share = rational::int(n as i64);
    let mut piece_values = vec![Vec::new(); n];
    let mut adjacency = vec![Vec::new(); n];
    adjacency[0] = (0..n).collect();
    for k in 1..n {
        let total: Rational = values[k].iter().sum();
        for (h, pc) in piece_cakes.iter().enumerate() {
            let v = s.layer_value(agents[k], pc, 0)?;
            if &v * &share >= total {
                adjacency[k].push(h);
            }
            piece_values[k].push(v);
        }
    }
    let matching = max_envy_free_matching(&BipartiteGraph::new(n, adjacency));
    if matching.item_of(0).is_none() {
        return Err(Error::VerificationFailed(
            "cutter left unmatched by the envy-free matching".into(),
        ));
    }

    for &(k, h) in &matching.pairs {
        awards.push((agents[k], partition.pieces[h].clone()));
    }
    let free_items: Vec<usize> = (0..n).filter(|&h| matching.agent_of(h).is_none()).collect();
    let free_agents: Vec<usize> = (0..n).filter(|&k| matching.item_of(k).is_none()).collect();
    let next = Residual {
        cake: LayeredCake::from_layers(
            free_items
                .iter()
                .map(|&h| piece_cakes[h].layers()[0].clone())
                .collect(),
            cake.original_layers(),
        ),
        agents: free_agents.iter().map(|&k| agents[k]).collect(),
        values: free_agents
            .iter()
            .map(|&k| free_items.iter().map(|&h| piece_values[k][h].clone()).collect())
            .collect(),
    };
    match_round(s, next, awards)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ef::cut_and_choose;
    use crate::rational::{int, q};
    use crate::valuation::Valuation;
    use crate::verify;

    fn weighted<W: AsRef<[i64]>>(weights: &[W]) -> (QuerySession, Vec<Valuation>) {
        let cake = LayeredCake::full(weights[0].as_ref().len());
        let vals: Vec<Valuation> = weights
            .iter()
            .map(|w| {
                let w: Vec<Rational> = w.as_ref().iter().map(|&k| int(k)).collect();
                Valuation::from_layer_weights(&cake, &w).unwrap()
            })
            .collect();
        (QuerySession::new(cake, vals.clone()), vals)
    }

    fn check_prop(s: &QuerySession, vals: &[Valuation], a: &MultiAllocation) {
        let st = verify::check_structure(s.cake(), a).unwrap();
        assert!(st.complete && st.feasible, "{st:?}");
        assert!(verify::check_proportional(vals, a).unwrap());
    }

    fn span(a: Rational, b: Rational) -> Piece {
        Piece::span(&a, &b)
    }

    #[test]
    fn power_two_with_two_agents_is_cut_and_choose() {
        let (mut s, _) = weighted(&[&[3, 1], &[1, 2]]);
        let a = prop_power_two(&mut s).unwrap();
        let (mut s2, _) = weighted(&[&[3, 1], &[1, 2]]);
        assert_eq!(a, cut_and_choose(&mut s2, 0, 1).unwrap());
    }

    #[test]
    fn power_two_four_uniform_agents() {
        let (mut s, vals) = weighted(&[&[1, 1, 1, 1]; 4]);
        let a = prop_power_two(&mut s).unwrap();
        check_prop(&s, &vals, &a);
        assert!(verify::check_structure(s.cake(), &a).unwrap().contiguous);
        for (v, b) in vals.iter().zip(&a.bundles) {
            assert_eq!(v.bundle_value(b), q(1, 4));
        }
    }

    #[test]
    fn power_two_three_uniform_agents_on_two_layers() {
        let (mut s, vals) = weighted(&[&[1, 1]; 3]);
        let a = prop_power_two(&mut s).unwrap();
        check_prop(&s, &vals, &a);
        // a third of the cake is two thirds of the top layer
        assert_eq!(a.bundles[0].layers, vec![span(q(0, 1), q(2, 3)), Piece::empty()]);
        assert_eq!(vals[0].bundle_value(&a.bundles[0]), q(1, 3));
    }

    #[test]
    fn power_two_preconditions() {
        let (mut s, _) = weighted(&[&[1, 1, 1]; 3]);
        assert!(matches!(prop_power_two(&mut s), Err(Error::Precondition { .. })));
        let (mut s, _) = weighted(&[&[1, 1, 1, 1]; 3]);
        assert!(matches!(prop_power_two(&mut s), Err(Error::Precondition { .. })));
    }

    #[test]
    fn equitable_partition_two_layers() {
        let (mut s, vals) = weighted(&[&[3, 2]]);
        let cake = s.cake().clone();
        let p = equitable_partition(&mut s, &cake, 0, 2).unwrap();
        assert_eq!(
            p.pieces[0].layers,
            vec![span(q(1, 2), q(1, 1)), span(q(0, 1), q(1, 2))]
        );
        for piece in &p.pieces {
            assert_eq!(vals[0].bundle_value(piece), q(1, 2));
        }
    }

    #[test]
    fn equitable_partition_equal_layers_are_the_pieces() {
        let (mut s, _) = weighted(&[&[1, 1, 1]]);
        let cake = s.cake().clone();
        let p = equitable_partition(&mut s, &cake, 0, 3).unwrap();
        let mut layers: Vec<usize> = p
            .pieces
            .iter()
            .map(|piece| {
                assert_eq!(piece.measure(), int(1));
                piece.layers.iter().position(|l| *l == Piece::unit()).unwrap()
            })
            .collect();
        layers.sort();
        assert_eq!(layers, vec![0, 1, 2]);
    }

    #[test]
    fn equitable_partition_single_layer_and_bad_parts() {
        let (mut s, _) = weighted(&[&[1]]);
        let cake = s.cake().clone();
        let p = equitable_partition(&mut s, &cake, 0, 1).unwrap();
        assert_eq!(p.pieces, vec![cake.whole_original()]);
        assert!(equitable_partition(&mut s, &cake, 0, 2).is_err());
    }

    #[test]
    fn matching_protocol_small_cases() {
        let (mut s, vals) = weighted(&[&[1]]);
        let a = prop_matching(&mut s).unwrap();
        assert_eq!(a.bundles[0], s.cake().whole_original());
        check_prop(&s, &vals, &a);

        let (mut s, vals) = weighted(&[&[1, 1], &[1, 1]]);
        let a = prop_matching(&mut s).unwrap();
        check_prop(&s, &vals, &a);
        for (v, b) in vals.iter().zip(&a.bundles) {
            assert_eq!(v.bundle_value(b), q(1, 2));
        }
    }

    #[test]
    fn matching_protocol_uneven_instances() {
        for w in [
            &[&[1, 2, 3][..], &[3, 2, 1], &[1, 1, 1], &[0, 0, 1], &[5, 1, 1]][..],
            &[&[1, 1, 2], &[3, 2, 5], &[1, 1, 1]],
            &[&[2, 1, 1, 1], &[1, 2, 1, 1], &[1, 1, 2, 1], &[1, 1, 1, 2]],
        ] {
            let (mut s, vals) = weighted(w);
            let a = prop_matching(&mut s).unwrap();
            check_prop(&s, &vals, &a);
        }
    }
}
