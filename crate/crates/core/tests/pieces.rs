//! Set algebra and layer bookkeeping invariants.

use layercake::rational::{self, q};
use layercake::{DiagonalSide, Interval, LayeredCake, LayeredPiece, Piece, Rational, StepFn};
use proptest::prelude::*;

const GRID: i64 = 64;

fn raw_piece() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((0..=GRID, 0..=GRID), 0..6)
        .prop_map(|v| v.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect())
}

fn piece(raw: &[(i64, i64)]) -> Piece {
    Piece::from_pairs(raw.iter().map(|&(a, b)| (q(a, GRID), q(b, GRID)))).unwrap()
}

fn density() -> impl Strategy<Value = StepFn> {
    (
        prop::collection::btree_set(1..GRID, 0..5),
        prop::collection::vec(0..10i64, 6),
    )
        .prop_map(|(cuts, vals)| {
            let mut breaks = vec![rational::zero()];
            breaks.extend(cuts.iter().map(|&c| q(c, GRID)));
            breaks.push(rational::one());
            let values = (0..breaks.len() - 1).map(|i| rational::int(vals[i])).collect();
            StepFn::from_segments(breaks, values)
        })
}

/// Membership of a grid midpoint, the reference semantics for the set ops.
fn covers(raw: &[(i64, i64)], cell: i64) -> bool {
    raw.iter().any(|&(a, b)| a <= cell && cell < b)
}

proptest! {
    #[test]
    fn canonical_form_is_stable(raw in raw_piece()) {
        let p = piece(&raw);
        let again = Piece::canonicalize(p.intervals().to_vec()).unwrap();
        prop_assert_eq!(&again, &p);
        for w in p.intervals().windows(2) {
            prop_assert!(w[0].hi < w[1].lo);
        }
        prop_assert!(p.intervals().iter().all(|iv| !iv.is_degenerate()));
    }

    #[test]
    fn set_ops_match_cellwise_reference(a in raw_piece(), b in raw_piece()) {
        let (pa, pb) = (piece(&a), piece(&b));
        let (u, i, d) = (pa.union(&pb), pa.intersect(&pb), pa.subtract(&pb));
        for cell in 0..GRID {
            let cell_piece = Piece::span(&q(cell, GRID), &q(cell + 1, GRID));
            let (ia, ib) = (covers(&a, cell), covers(&b, cell));
            prop_assert_eq!(u.contains(&cell_piece), ia || ib);
            prop_assert_eq!(i.contains(&cell_piece), ia && ib);
            prop_assert_eq!(d.contains(&cell_piece), ia && !ib);
        }
    }

    #[test]
    fn measure_is_additive(a in raw_piece(), b in raw_piece()) {
        let (pa, pb) = (piece(&a), piece(&b));
        prop_assert_eq!(pa.union(&pb).measure() + pa.intersect(&pb).measure(), pa.measure() + pb.measure());
        prop_assert_eq!(pa.subtract(&pb).measure() + pa.intersect(&pb).measure(), pa.measure());
        prop_assert!(pa.subtract(&pb).is_disjoint(&pb));
    }

    #[test]
    fn integrals_are_additive(d in density(), a in raw_piece(), b in raw_piece()) {
        let (pa, pb) = (piece(&a), piece(&b));
        let lhs = d.integrate_piece(&pa.union(&pb)) + d.integrate_piece(&pa.intersect(&pb));
        prop_assert_eq!(lhs, d.integrate_piece(&pa) + d.integrate_piece(&pb));
    }

    #[test]
    fn cut_inverts_integral(d in density(), x in 0..=GRID, y in 0..=GRID) {
        let (x, y) = (q(x.min(y), GRID), q(x.max(y), GRID));
        let r = d.integral(&x, &y);
        let c = d.cut(&x, &r).unwrap();
        prop_assert!(c <= y);
        prop_assert_eq!(d.integral(&x, &c), r);
    }

    #[test]
    fn diagonal_sides_partition_the_cake(x in 0..=GRID, half in 1usize..4) {
        let cake = LayeredCake::full(2 * half);
        let x = q(x, GRID);
        let lr = cake.diagonal_piece(&x, DiagonalSide::LR).unwrap();
        let rl = cake.diagonal_piece(&x, DiagonalSide::RL).unwrap();
        for side in [&lr, &rl] {
            for j in 0..half {
                prop_assert!(side.layers[j].is_disjoint(&side.layers[j + half]));
            }
        }
        prop_assert_eq!(lr.measure() + rl.measure(), rational::int(2 * half as i64));
        prop_assert_eq!(lr.union(&rl), cake.whole());
    }

    #[test]
    fn merge_map_recovers_original_regions(x in 0..=GRID, half in 1usize..4) {
        let cake = LayeredCake::full(2 * half);
        let x = q(x, GRID);
        for side in [DiagonalSide::LR, DiagonalSide::RL] {
            let (merged, map) = cake.merge_diagonal(&x, side).unwrap();
            let whole = map.forward(&merged.whole());
            prop_assert_eq!(&whole, &cake.diagonal_piece(&x, side).unwrap());
            prop_assert_eq!(merged.to_original(&merged.whole()), whole);
        }
    }
}

#[test]
fn touching_intervals_are_disjoint() {
    let a = Piece::span(&q(0, 1), &q(1, 2));
    let b = Piece::span(&q(1, 2), &q(1, 1));
    assert!(a.is_disjoint(&b));
    assert_eq!(a.union(&b), Piece::unit());
    assert!(a.intersect(&b).is_empty());
}

#[test]
fn partial_extent_layers_merge() {
    let cake = LayeredCake::new(vec![
        Interval::new(q(0, 1), q(1, 2)).unwrap(),
        Interval::new(q(1, 2), q(1, 1)).unwrap(),
    ]);
    let (merged, map) = cake.merge_layers(0, 1).unwrap();
    assert_eq!(merged.layer_count(), 1);
    let back: LayeredPiece = map.forward(&merged.whole());
    assert_eq!(back, cake.whole());
    let total: Rational = back.measure();
    assert_eq!(total, rational::one());
}
