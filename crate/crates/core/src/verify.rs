//! Exact checks of allocation structure and fairness.
//!
//! Nothing here looks at protocol internals: structure is checked with piece
//! algebra and fairness with [`Valuation::bundle_value`].

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::cake::{LayeredCake, MultiAllocation};
use crate::error::{Error, Result};
use crate::piece::Piece;
use crate::rational::{self, Rational};
use crate::valuation::Valuation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Structure {
    pub feasible: bool,
    pub contiguous: bool,
    pub complete: bool,
}

pub fn check_structure(cake: &LayeredCake, a: &MultiAllocation) -> Result<Structure> {
    let m = cake.original_layers();
    if let Some(bad) = a.bundles.iter().find(|b| b.layer_count() != m) {
        return Err(Error::UnknownLayer(bad.layer_count().max(m)));
    }
    let feasible = a.bundles.iter().all(|b| b.is_non_overlapping());
    let contiguous = a.bundles.iter().all(|b| b.is_contiguous());

    let layers = cake.whole_original();
    let complete = (0..m).all(|j| {
        let pieces: Vec<&Piece> = a.bundles.iter().map(|b| &b.layers[j]).collect();
        let union = pieces.iter().fold(Piece::empty(), |acc, p| acc.union(p));
        let disjoint =
            (0..pieces.len()).all(|x| (x + 1..pieces.len()).all(|y| pieces[x].is_disjoint(pieces[y])));
        union == layers.layers[j] && disjoint
    });
    Ok(Structure {
        feasible,
        contiguous,
        complete,
    })
}

/// `values[i][k] = V_i(A_k)`.
pub fn value_matrix(vals: &[Valuation], a: &MultiAllocation) -> Vec<Vec<Rational>> {
    vals.iter()
        .map(|v| a.bundles.iter().map(|b| v.bundle_value(b)).collect())
        .collect()
}

fn check_shape(vals: &[Valuation], a: &MultiAllocation) -> Result<()> {
    if vals.len() != a.agent_count() {
        return Err(Error::UnknownAgent(vals.len().max(a.agent_count())));
    }
    Ok(())
}

pub fn check_envy_free(vals: &[Valuation], a: &MultiAllocation) -> Result<bool> {
    check_shape(vals, a)?;
    let v = value_matrix(vals, a);
    Ok((0..vals.len()).all(|i| (0..vals.len()).all(|k| v[i][i] >= v[i][k])))
}

fn share(v: &Valuation, n: usize) -> Rational {
    v.total() / rational::int(n as i64)
}

pub fn check_proportional(vals: &[Valuation], a: &MultiAllocation) -> Result<bool> {
    check_shape(vals, a)?;
    let n = vals.len();
    Ok(vals
        .iter()
        .zip(&a.bundles)
        .all(|(v, b)| v.bundle_value(b) >= share(v, n)))
}

pub fn check_equitable(vals: &[Valuation], a: &MultiAllocation) -> Result<bool> {
    check_shape(vals, a)?;
    let n = vals.len();
    Ok(vals
        .iter()
        .zip(&a.bundles)
        .all(|(v, b)| v.bundle_value(b) == share(v, n)))
}

/// Every flag at once, for reports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub structure: Structure,
    pub envy_free: bool,
    pub proportional: bool,
    pub values: Vec<Vec<Rational>>,
}

pub fn verdict(cake: &LayeredCake, vals: &[Valuation], a: &MultiAllocation) -> Result<Verdict> {
    Ok(Verdict {
        structure: check_structure(cake, a)?,
        envy_free: check_envy_free(vals, a)?,
        proportional: check_proportional(vals, a)?,
        values: value_matrix(vals, a),
    })
}

/// Largest per-layer component count in any bundle.
pub fn max_components(a: &MultiAllocation) -> usize {
    a.bundles.iter().map(|b| b.max_components()).max().unwrap_or(0)
}

/// Worst proportionality slack `min_i (V_i(A_i) - V_i(C)/n)`.
pub fn min_proportional_slack(vals: &[Valuation], a: &MultiAllocation) -> Rational {
    let n = vals.len();
    vals.iter()
        .zip(&a.bundles)
        .map(|(v, b)| v.bundle_value(b) - share(v, n))
        .min()
        .unwrap_or_else(Rational::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cake::LayeredPiece;
    use crate::rational::{int, q};

    fn span(a: Rational, b: Rational) -> Piece {
        Piece::span(&a, &b)
    }

    fn crosswise() -> MultiAllocation {
        MultiAllocation {
            bundles: vec![
                LayeredPiece {
                    layers: vec![span(q(0, 1), q(1, 2)), span(q(1, 2), q(1, 1))],
                },
                LayeredPiece {
                    layers: vec![span(q(1, 2), q(1, 1)), span(q(0, 1), q(1, 2))],
                },
            ],
        }
    }

    #[test]
    fn crosswise_split_is_valid() {
        let cake = LayeredCake::full(2);
        let s = check_structure(&cake, &crosswise()).unwrap();
        assert!(s.feasible && s.contiguous && s.complete);
    }

    #[test]
    fn overlapping_bundle_is_infeasible() {
        let cake = LayeredCake::full(2);
        let mut a = crosswise();
        a.bundles[0].layers[1] = span(q(1, 4), q(3, 4));
        let s = check_structure(&cake, &a).unwrap();
        assert!(!s.feasible);
        assert!(!s.complete);
    }

    #[test]
    fn split_layer_piece_is_not_contiguous() {
        let cake = LayeredCake::full(1);
        let a = MultiAllocation {
            bundles: vec![
                LayeredPiece {
                    layers: vec![span(q(0, 1), q(1, 4)).union(&span(q(1, 2), q(3, 4)))],
                },
                LayeredPiece {
                    layers: vec![span(q(1, 4), q(1, 2)).union(&span(q(3, 4), q(1, 1)))],
                },
            ],
        };
        let s = check_structure(&cake, &a).unwrap();
        assert!(!s.contiguous);
        assert!(s.complete && s.feasible);
    }

    #[test]
    fn unknown_layer_is_an_error() {
        let cake = LayeredCake::full(1);
        assert!(check_structure(&cake, &crosswise()).is_err());
    }

    #[test]
    fn everything_to_one_agent_is_envious() {
        let cake = LayeredCake::full(2);
        let v = Valuation::from_layer_weights(&cake, &[int(1), int(1)]).unwrap();
        let vals = vec![v.clone(), v];
        let a = MultiAllocation {
            bundles: vec![cake.whole(), LayeredPiece::empty(2)],
        };
        assert!(!check_envy_free(&vals, &a).unwrap());
        assert!(!check_proportional(&vals, &a).unwrap());
        assert!(check_envy_free(&vals, &crosswise()).unwrap());
        assert!(check_equitable(&vals, &crosswise()).unwrap());
    }

    #[test]
    fn proportional_threshold_is_exact() {
        let cake = LayeredCake::full(1);
        let v = Valuation::from_layer_weights(&cake, &[int(1)]).unwrap();
        let vals = vec![v.clone(), v];
        let cut = q(1, 2) - q(1, 1000);
        let a = MultiAllocation {
            bundles: vec![
                LayeredPiece {
                    layers: vec![span(q(0, 1), cut.clone())],
                },
                LayeredPiece {
                    layers: vec![span(cut, q(1, 1))],
                },
            ],
        };
        assert!(!check_proportional(&vals, &a).unwrap());
        assert_eq!(min_proportional_slack(&vals, &a), -q(1, 1000));
    }
}
