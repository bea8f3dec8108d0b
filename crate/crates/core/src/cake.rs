//! Layered cakes, layered pieces and merges.
//!
//! Every layer of a [`LayeredCake`] is a set of [`Part`]s: a piece of `[0, 1]`
//! tagged with the original layer it came from. Merging layers never moves
//! coordinates, it only regroups parts, so provenance is exact and a piece of
//! a merged cake maps back to the original cake by intersecting it with each
//! part.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::piece::{Interval, Piece};
use crate::rational::{self, Rational};

/// A region of one original layer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Part {
    pub origin: usize,
    pub piece: Piece,
}

/// One (possibly merged) layer: parts from distinct original layers that are
/// pairwise disjoint as point sets.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Layer {
    parts: Vec<Part>,
}

impl Layer {
    pub fn original(origin: usize, piece: Piece) -> Self {
        Self::from_parts(vec![Part { origin, piece }])
    }

    fn from_parts(parts: Vec<Part>) -> Self {
        let mut merged: Vec<Part> = Vec::new();
        for p in parts {
            if p.piece.is_empty() {
                continue;
            }
            match merged.iter_mut().find(|q| q.origin == p.origin) {
                Some(q) => q.piece = q.piece.union(&p.piece),
                None => merged.push(p),
            }
        }
        merged.sort_by_key(|p| p.origin);
        Layer { parts: merged }
    }

    /// Reads a layered piece in original coordinates as one layer. Fails if
    /// its parts overlap.
    pub fn from_original(piece: &LayeredPiece) -> Result<Self> {
        let parts: Vec<Part> = piece
            .layers
            .iter()
            .enumerate()
            .map(|(origin, p)| Part {
                origin,
                piece: p.clone(),
            })
            .collect();
        for a in 0..parts.len() {
            for b in a + 1..parts.len() {
                if !parts[a].piece.is_disjoint(&parts[b].piece) {
                    return Err(Error::LayerOverlap(a, b));
                }
            }
        }
        Ok(Self::from_parts(parts))
    }

    pub fn parts(&self) -> &[Part] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn support(&self) -> Piece {
        self.parts
            .iter()
            .fold(Piece::empty(), |acc, p| acc.union(&p.piece))
    }

    pub fn restrict(&self, piece: &Piece) -> Layer {
        Self::from_parts(
            self.parts
                .iter()
                .map(|p| Part {
                    origin: p.origin,
                    piece: p.piece.intersect(piece),
                })
                .collect(),
        )
    }

    pub fn clip(&self, lo: &Rational, hi: &Rational) -> Layer {
        self.restrict(&Piece::span(lo, hi))
    }

    pub fn subtract(&self, piece: &Piece) -> Layer {
        Self::from_parts(
            self.parts
                .iter()
                .map(|p| Part {
                    origin: p.origin,
                    piece: p.piece.subtract(piece),
                })
                .collect(),
        )
    }

    /// Union of two layers whose supports are disjoint.
    pub fn merged(&self, other: &Layer) -> Option<Layer> {
        if !self.support().is_disjoint(&other.support()) {
            return None;
        }
        let mut parts = self.parts.clone();
        parts.extend(other.parts.iter().cloned());
        Some(Self::from_parts(parts))
    }

    /// Splits a piece of this layer by original layer.
    pub fn to_original(&self, piece: &Piece, original_layers: usize) -> LayeredPiece {
        let mut out = LayeredPiece::empty(original_layers);
        for part in &self.parts {
            let bit = part.piece.intersect(piece);
            out.layers[part.origin] = out.layers[part.origin].union(&bit);
        }
        out
    }

    pub fn as_original(&self, original_layers: usize) -> LayeredPiece {
        self.to_original(&Piece::unit(), original_layers)
    }
}

/// Which diagonal piece of an even-layered cake.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DiagonalSide {
    /// Top half left of `x`, bottom half right of `x`.
    LR,
    /// Top half right of `x`, bottom half left of `x`.
    RL,
}

impl DiagonalSide {
    pub fn other(self) -> Self {
        match self {
            DiagonalSide::LR => DiagonalSide::RL,
            DiagonalSide::RL => DiagonalSide::LR,
        }
    }
}

/// Per-layer pieces. Coordinates are relative to whichever cake the piece
/// was cut from; [`LayeredCake::to_original`] converts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredPiece {
    pub layers: Vec<Piece>,
}

impl LayeredPiece {
    pub fn empty(layers: usize) -> Self {
        LayeredPiece {
            layers: vec![Piece::empty(); layers],
        }
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.iter().all(Piece::is_empty)
    }

    pub fn union(&self, other: &LayeredPiece) -> LayeredPiece {
        assert_eq!(self.layers.len(), other.layers.len());
        LayeredPiece {
            layers: self
                .layers
                .iter()
                .zip(&other.layers)
                .map(|(a, b)| a.union(b))
                .collect(),
        }
    }

    pub fn measure(&self) -> Rational {
        self.layers.iter().map(Piece::measure).sum()
    }

    /// No two layers overlap in more than boundary points.
    pub fn is_non_overlapping(&self) -> bool {
        (0..self.layers.len())
            .all(|a| (a + 1..self.layers.len()).all(|b| self.layers[a].is_disjoint(&self.layers[b])))
    }

    pub fn is_contiguous(&self) -> bool {
        self.layers.iter().all(Piece::is_contiguous)
    }

    pub fn max_components(&self) -> usize {
        self.layers.iter().map(Piece::component_count).max().unwrap_or(0)
    }
}

/// One bundle per agent, in original cake coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiAllocation {
    pub bundles: Vec<LayeredPiece>,
}

impl MultiAllocation {
    pub fn agent_count(&self) -> usize {
        self.bundles.len()
    }

    /// Assembles from `(agent, bundle)` pairs; unlisted agents get nothing.
    pub fn from_assignments(
        agents: usize,
        layers: usize,
        assignments: impl IntoIterator<Item = (usize, LayeredPiece)>,
    ) -> Self {
        let mut bundles = vec![LayeredPiece::empty(layers); agents];
        for (agent, bundle) in assignments {
            bundles[agent] = bundles[agent].union(&bundle);
        }
        MultiAllocation { bundles }
    }
}

/// Provenance of a merged cake: for every layer, the original regions it is
/// made of. Since provenance always refers to the original cake, maps compose
/// by simply keeping the latest one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergeMap {
    layers: Vec<Layer>,
    original_layers: usize,
}

impl MergeMap {
    pub fn forward(&self, piece: &LayeredPiece) -> LayeredPiece {
        assert_eq!(piece.layers.len(), self.layers.len());
        let mut out = LayeredPiece::empty(self.original_layers);
        for (layer, p) in self.layers.iter().zip(&piece.layers) {
            out = out.union(&layer.to_original(p, self.original_layers));
        }
        out
    }

    pub fn forward_layer(&self, layer: usize, piece: &Piece) -> LayeredPiece {
        self.layers[layer].to_original(piece, self.original_layers)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredCake {
    layers: Vec<Layer>,
    original_layers: usize,
}

impl LayeredCake {
    /// A fresh cake: layer `j` is the interval `extents[j]`.
    pub fn new(extents: Vec<Interval>) -> Self {
        let original_layers = extents.len();
        let layers = extents
            .into_iter()
            .enumerate()
            .map(|(j, iv)| Layer::original(j, Piece::span(&iv.lo, &iv.hi)))
            .collect();
        LayeredCake {
            layers,
            original_layers,
        }
    }

    /// `m` layers, each the full unit interval.
    pub fn full(m: usize) -> Self {
        Self::new(vec![Interval::unit(); m])
    }

    pub fn from_layers(layers: Vec<Layer>, original_layers: usize) -> Self {
        LayeredCake {
            layers,
            original_layers,
        }
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    pub fn original_layers(&self) -> usize {
        self.original_layers
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn layer(&self, j: usize) -> Result<&Layer> {
        self.layers.get(j).ok_or(Error::UnknownLayer(j))
    }

    /// The whole cake as a layered piece in this cake's coordinates.
    pub fn whole(&self) -> LayeredPiece {
        LayeredPiece {
            layers: self.layers.iter().map(Layer::support).collect(),
        }
    }

    pub fn to_original(&self, piece: &LayeredPiece) -> LayeredPiece {
        self.merge_map().forward(piece)
    }

    pub fn whole_original(&self) -> LayeredPiece {
        self.to_original(&self.whole())
    }

    pub fn merge_map(&self) -> MergeMap {
        MergeMap {
            layers: self.layers.clone(),
            original_layers: self.original_layers,
        }
    }

    /// True for a never-merged cake: layer `j` holds only original layer `j`.
    pub fn is_original(&self) -> bool {
        self.layers.len() == self.original_layers
            && self
                .layers
                .iter()
                .enumerate()
                .all(|(j, l)| l.parts.len() <= 1 && l.parts.iter().all(|p| p.origin == j))
    }

    pub fn with_layers(&self, layers: Vec<Layer>) -> LayeredCake {
        LayeredCake {
            layers,
            original_layers: self.original_layers,
        }
    }

    /// Cake made of the listed layers, in the given order.
    pub fn select(&self, indices: &[usize]) -> LayeredCake {
        self.with_layers(indices.iter().map(|&j| self.layers[j].clone()).collect())
    }

    pub fn reversed(&self) -> LayeredCake {
        self.with_layers(self.layers.iter().rev().cloned().collect())
    }

    /// Removes `piece` from layer `j`.
    pub fn remove_from_layer(&self, j: usize, piece: &Piece) -> LayeredCake {
        let mut layers = self.layers.clone();
        layers[j] = layers[j].subtract(piece);
        self.with_layers(layers)
    }

    pub fn without_empty_layers(&self) -> LayeredCake {
        self.with_layers(self.layers.iter().filter(|l| !l.is_empty()).cloned().collect())
    }

    /// Replaces layer `j` by `C_j ∪ C_j'` and drops layer `j'`.
    pub fn merge_layers(&self, j: usize, j2: usize) -> Result<(LayeredCake, MergeMap)> {
        let a = self.layer(j)?;
        let b = self.layer(j2)?;
        if j == j2 {
            return Err(Error::LayerOverlap(j, j2));
        }
        let merged = a.merged(b).ok_or(Error::LayerOverlap(j, j2))?;
        let mut layers = Vec::with_capacity(self.layers.len() - 1);
        for (k, l) in self.layers.iter().enumerate() {
            if k == j {
                layers.push(merged.clone());
            } else if k != j2 {
                layers.push(l.clone());
            }
        }
        let cake = self.with_layers(layers);
        let map = cake.merge_map();
        Ok((cake, map))
    }

    /// Merges the diagonal piece on `side` at `x` pairwise: layer `j` of the
    /// result is `S_j ∪ S_{j+m}` for the `2m`-layered input.
    pub fn merge_diagonal(&self, x: &Rational, side: DiagonalSide) -> Result<(LayeredCake, MergeMap)> {
        let piece = self.diagonal_piece(x, side)?;
        let half = self.layers.len() / 2;
        let mut layers = Vec::with_capacity(half);
        for j in 0..half {
            let top = self.layers[j].restrict(&piece.layers[j]);
            let bottom = self.layers[j + half].restrict(&piece.layers[j + half]);
            let merged = top.merged(&bottom).expect("opposite sides of x are disjoint");
            layers.push(merged);
        }
        let cake = self.with_layers(layers);
        let map = cake.merge_map();
        Ok((cake, map))
    }

    /// `LR(x)` or `RL(x)` in this cake's coordinates.
    pub fn diagonal_piece(&self, x: &Rational, side: DiagonalSide) -> Result<LayeredPiece> {
        let m = self.layers.len();
        if !m.is_multiple_of(2) {
            return Err(Error::OddLayerCount(m));
        }
        if *x < Rational::zero() || *x > rational::one() {
            return Err(Error::OutOfRange(x.clone()));
        }
        let left = Piece::span(&Rational::zero(), x);
        let right = Piece::span(x, &rational::one());
        let layers = self
            .layers
            .iter()
            .enumerate()
            .map(|(j, layer)| {
                let top = j < m / 2;
                let take_left = top == (side == DiagonalSide::LR);
                layer.support().intersect(if take_left { &left } else { &right })
            })
            .collect();
        Ok(LayeredPiece { layers })
    }
}
