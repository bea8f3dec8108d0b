//! Envy-free protocols.
//!
//! * [`cut_and_choose`]: two agents, two layers, contiguous.
//! * [`moving_knife_three`]: three agents, two layers, two of them identical.
//! * [`ef_noncontiguous`]: any `n >= m`, built from a perfect partition.

mod knife;

pub use knife::{moving_knife_three, moving_knife_three_traced, ShoutPoint};

use crate::cake::{DiagonalSide, LayeredCake, LayeredPiece, MultiAllocation};
use crate::error::{Error, Result};
use crate::piece::Piece;
use crate::rational::{self, Rational};
use crate::session::QuerySession;

/// `(agent, bundle in original coordinates)`.
pub(crate) type Awards = Vec<(usize, LayeredPiece)>;

pub fn cut_and_choose(s: &mut QuerySession, cutter: usize, chooser: usize) -> Result<MultiAllocation> {
    let cake = s.cake().clone();
    if cake.layer_count() != 2 {
        return Err(Error::precondition(
            "cut-and-choose",
            format!("needs exactly 2 layers, got {}", cake.layer_count()),
        ));
    }
    if s.agent_count() != 2 {
        return Err(Error::precondition(
            "cut-and-choose",
            format!("needs exactly 2 agents, got {}", s.agent_count()),
        ));
    }
    if cutter == chooser || cutter > 1 || chooser > 1 {
        return Err(Error::precondition(
            "cut-and-choose",
            "cutter and chooser must be the two distinct agents",
        ));
    }
    let awards = cut_and_choose_on(s, &cake, cutter, chooser)?;
    Ok(MultiAllocation::from_assignments(
        2,
        cake.original_layers(),
        awards,
    ))
}

/// Cut-and-choose on any two-layer (sub-)cake.
pub(crate) fn cut_and_choose_on(
    s: &mut QuerySession,
    cake: &LayeredCake,
    cutter: usize,
    chooser: usize,
) -> Result<Awards> {
    let x = s.switching_point(cutter, cake)?;
    let lr = s.long_eval_side(chooser, cake, &x, DiagonalSide::LR)?;
    let rl = s.long_eval_side(chooser, cake, &x, DiagonalSide::RL)?;
    let side = if lr >= rl {
        DiagonalSide::LR
    } else {
        DiagonalSide::RL
    };
    Ok(vec![
        (chooser, cake.to_original(&cake.diagonal_piece(&x, side)?)),
        (cutter, cake.to_original(&cake.diagonal_piece(&x, side.other())?)),
    ])
}

/// Envy-free, complete and feasible for any `n >= m`, at the price of
/// contiguity.
///
/// All revealed densities are constant between consecutive global
/// breakpoints, so cutting every elementary segment into `n` equal slices and
/// collecting slice `h` of every segment into `Y_h` gives pieces that every
/// agent values at exactly `V_ij(C_j) / n` on every layer. Agent `i` gets
/// `Y_{(i + j) mod n}` on layer `j`, which for `m <= n` never hands one agent
/// the same slice on two layers.
pub fn ef_noncontiguous(s: &mut QuerySession) -> Result<MultiAllocation> {
    let cake = s.cake().clone();
    let n = s.agent_count();
    let m = cake.layer_count();
    if m > n {
        return Err(Error::precondition(
            "perfect-partition envy-free division",
            format!("{m} layers but only {n} agents; every complete allocation then overlaps"),
        ));
    }
    let mut z: Vec<Rational> = vec![rational::zero(), rational::one()];
    for layer in cake.layers() {
        for iv in layer.support().intervals() {
            z.push(iv.lo.clone());
            z.push(iv.hi.clone());
        }
    }
    for i in 0..n {
        for j in 0..m {
            z.extend(s.reveal_density(i, &cake, j)?.breaks().iter().cloned());
        }
    }
    z.sort();
    z.dedup();

    let parts = rational::int(n as i64);
    let slices: Vec<Piece> = (0..n)
        .map(|h| {
            let lo = rational::int(h as i64);
            let hi = rational::int(h as i64 + 1);
            Piece::from_pairs(z.windows(2).map(|w| {
                let width = (&w[1] - &w[0]) / &parts;
                (&w[0] + &width * &lo, &w[0] + &width * &hi)
            }))
            .expect("slices stay inside their segment")
        })
        .collect();

    let awards = (0..n).map(|i| {
        let layers = (0..m)
            .map(|j| cake.layers()[j].support().intersect(&slices[(i + j) % n]))
            .collect();
        (i, cake.to_original(&LayeredPiece { layers }))
    });
    Ok(MultiAllocation::from_assignments(
        n,
        cake.original_layers(),
        awards,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, q};
    use crate::step::StepFn;
    use crate::valuation::Valuation;
    use crate::verify;

    fn weighted(weights: &[&[i64]]) -> QuerySession {
        let cake = LayeredCake::full(weights[0].len());
        let vals = weights
            .iter()
            .map(|w| {
                let w: Vec<Rational> = w.iter().map(|&k| int(k)).collect();
                Valuation::from_layer_weights(&cake, &w).unwrap()
            })
            .collect();
        QuerySession::new(cake, vals)
    }

    fn span(a: Rational, b: Rational) -> Piece {
        Piece::span(&a, &b)
    }

    fn check_ef(s: &QuerySession, vals: &[Valuation], a: &MultiAllocation) {
        let st = verify::check_structure(s.cake(), a).unwrap();
        assert!(st.complete && st.feasible, "{st:?}");
        assert!(verify::check_envy_free(vals, a).unwrap());
    }

    #[test]
    fn cut_and_choose_three_quarter_cutter() {
        let cake = LayeredCake::full(2);
        let cutter = Valuation::from_layer_weights(&cake, &[int(3), int(1)]).unwrap();
        let half = StepFn::from_segments(vec![q(0, 1), q(1, 2), q(1, 1)], vec![int(2), int(0)]);
        let chooser = Valuation::new(&cake, vec![StepFn::constant(int(1)), half]).unwrap();
        let vals = vec![cutter, chooser];
        let mut s = QuerySession::new(cake, vals.clone());
        let a = cut_and_choose(&mut s, 0, 1).unwrap();
        // chooser takes RL(1/2)
        assert_eq!(
            a.bundles[1].layers,
            vec![span(q(1, 2), q(1, 1)), span(q(0, 1), q(1, 2))]
        );
        assert_eq!(vals[0].bundle_value(&a.bundles[0]), q(1, 2));
        assert_eq!(vals[1].bundle_value(&a.bundles[1]), q(3, 4));
        check_ef(&s, &vals, &a);
        let c = s.counts();
        assert_eq!((c.long_cut, c.long_eval), (1, 2));
    }

    #[test]
    fn cut_and_choose_identical_agents_split_by_layer() {
        let mut s = weighted(&[&[1, 1], &[1, 1]]);
        let a = cut_and_choose(&mut s, 0, 1).unwrap();
        assert_eq!(a.bundles[1].layers, vec![Piece::empty(), Piece::unit()]);
        assert_eq!(a.bundles[0].layers, vec![Piece::unit(), Piece::empty()]);
    }

    #[test]
    fn cut_and_choose_top_and_bottom_agents() {
        let mut s = weighted(&[&[1, 0], &[0, 1]]);
        let a = cut_and_choose(&mut s, 0, 1).unwrap();
        assert_eq!(
            a.bundles[1].layers,
            vec![span(q(0, 1), q(1, 2)), span(q(1, 2), q(1, 1))]
        );
    }

    #[test]
    fn cut_and_choose_rejects_wrong_shapes() {
        let mut s = weighted(&[&[1, 1, 1], &[1, 1, 1]]);
        assert!(matches!(
            cut_and_choose(&mut s, 0, 1),
            Err(Error::Precondition { .. })
        ));
        let mut s = weighted(&[&[1, 1], &[1, 1], &[1, 1]]);
        assert!(matches!(
            cut_and_choose(&mut s, 0, 1),
            Err(Error::Precondition { .. })
        ));
        let mut s = weighted(&[&[1, 1], &[1, 1]]);
        assert!(cut_and_choose(&mut s, 1, 1).is_err());
    }

    #[test]
    fn perfect_partition_two_uniform_agents() {
        let mut s = weighted(&[&[1, 1], &[1, 1]]);
        let a = ef_noncontiguous(&mut s).unwrap();
        assert_eq!(
            a.bundles[0].layers,
            vec![span(q(0, 1), q(1, 2)), span(q(1, 2), q(1, 1))]
        );
        assert_eq!(
            a.bundles[1].layers,
            vec![span(q(1, 2), q(1, 1)), span(q(0, 1), q(1, 2))]
        );
    }

    #[test]
    fn perfect_partition_everyone_values_every_bundle_equally() {
        let cake = LayeredCake::full(2);
        let d1 = StepFn::from_segments(vec![q(0, 1), q(1, 3), q(1, 1)], vec![int(3), int(1)]);
        let d2 = StepFn::from_segments(vec![q(0, 1), q(3, 4), q(1, 1)], vec![int(0), int(5)]);
        let vals = vec![
            Valuation::new(&cake, vec![d1.clone(), d2.clone()]).unwrap(),
            Valuation::new(&cake, vec![d2, StepFn::constant(int(1))]).unwrap(),
            Valuation::new(&cake, vec![StepFn::constant(int(2)), d1]).unwrap(),
        ];
        let mut s = QuerySession::new(cake, vals.clone());
        let a = ef_noncontiguous(&mut s).unwrap();
        check_ef(&s, &vals, &a);
        for v in &vals {
            for b in &a.bundles {
                assert_eq!(v.bundle_value(b), q(1, 3));
            }
        }
        // breakpoints 0, 1/3, 3/4, 1: three elementary segments
        assert!(verify::max_components(&a) <= 3);
    }

    #[test]
    fn perfect_partition_needs_enough_agents() {
        let mut s = weighted(&[&[1, 1, 1], &[1, 1, 1]]);
        assert!(matches!(
            ef_noncontiguous(&mut s),
            Err(Error::Precondition { .. })
        ));
    }
}
