//! Additive agent valuations with piecewise-constant densities.

use num_traits::{Signed, Zero};

use crate::cake::{Layer, LayeredCake, LayeredPiece};
use crate::error::{Error, Result};
use crate::piece::Piece;
use crate::rational::Rational;
use crate::step::StepFn;

/// One density per original layer, zero outside that layer and normalized so
/// the whole cake is worth exactly 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Valuation {
    densities: Vec<StepFn>,
}

impl Valuation {
    /// Restricts each density to its layer and rescales so the cake totals 1.
    pub fn new(cake: &LayeredCake, densities: Vec<StepFn>) -> Result<Self> {
        if densities.len() != cake.layer_count() {
            return Err(Error::InvalidValuation(format!(
                "{} densities for {} layers",
                densities.len(),
                cake.layer_count()
            )));
        }
        if let Some(j) = densities.iter().position(|d| !d.is_nonnegative()) {
            return Err(Error::InvalidValuation(format!("negative density on layer {j}")));
        }
        let restricted: Vec<StepFn> = densities
            .iter()
            .zip(cake.layers())
            .map(|(d, layer)| d.restrict(&layer.support()))
            .collect();
        let total: Rational = restricted.iter().map(StepFn::total).sum();
        if !total.is_positive() {
            return Err(Error::InvalidValuation(
                "valuation is zero on the whole cake".into(),
            ));
        }
        let factor = total.recip();
        Ok(Valuation {
            densities: restricted.iter().map(|d| d.scale(&factor)).collect(),
        })
    }

    /// Uniform density on every layer, with the given (unnormalized) layer totals.
    pub fn from_layer_weights(cake: &LayeredCake, weights: &[Rational]) -> Result<Self> {
        let densities = weights
            .iter()
            .zip(cake.layers())
            .map(|(w, layer)| {
                let len = layer.support().measure();
                if len.is_zero() {
                    StepFn::zero()
                } else {
                    StepFn::constant(w / len)
                }
            })
            .collect();
        Self::new(cake, densities)
    }

    pub fn layer_count(&self) -> usize {
        self.densities.len()
    }

    pub fn density(&self, layer: usize) -> &StepFn {
        &self.densities[layer]
    }

    pub fn densities(&self) -> &[StepFn] {
        &self.densities
    }

    /// Value of `x` on original layer `layer`.
    pub fn piece_value(&self, layer: usize, x: &Piece) -> Rational {
        self.densities[layer].integrate_piece(x)
    }

    /// Sum of piece values over layers; `p` is in original coordinates.
    pub fn bundle_value(&self, p: &LayeredPiece) -> Rational {
        p.layers
            .iter()
            .enumerate()
            .map(|(j, x)| self.piece_value(j, x))
            .sum()
    }

    /// Value of the whole cake; exactly 1 by construction.
    pub fn total(&self) -> Rational {
        self.densities.iter().map(StepFn::total).sum()
    }

    /// Density seen on a (possibly merged) layer.
    pub fn layer_density(&self, layer: &Layer) -> StepFn {
        layer.parts().iter().fold(StepFn::zero(), |acc, part| {
            acc.add(&self.densities[part.origin].restrict(&part.piece))
        })
    }
}
