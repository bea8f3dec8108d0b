//! Closed intervals of `[0, 1]` and finite unions of them.
//!
//! A [`Piece`] is kept canonical at all times: sorted, pairwise disjoint,
//! non-touching, with no degenerate intervals. Set operations treat shared
//! endpoints as measure zero, so `[0, 1/2] ∪ [1/2, 1]` is the single interval
//! `[0, 1]` and `[0, 1/2] ∩ [1/2, 1]` is empty.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        for e in [&lo, &hi] {
            if *e < Rational::zero() || *e > Rational::one() {
                return Err(Error::OutOfRange(e.clone()));
            }
        }
        if lo > hi {
            return Err(Error::Reversed {
                lo: Box::new(lo),
                hi: Box::new(hi),
            });
        }
        Ok(Interval { lo, hi })
    }

    pub fn unit() -> Self {
        Interval {
            lo: Rational::zero(),
            hi: Rational::one(),
        }
    }

    pub fn len(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            rational::format(&self.lo),
            rational::format(&self.hi)
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Piece {
    intervals: Vec<Interval>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetOp {
    Union,
    Intersect,
    Subtract,
}

impl Piece {
    pub fn empty() -> Self {
        Piece::default()
    }

    pub fn unit() -> Self {
        Piece {
            intervals: vec![Interval::unit()],
        }
    }

    /// Sorts, merges overlapping or touching intervals and drops degenerate ones.
    pub fn canonicalize(raw: Vec<Interval>) -> Result<Self> {
        for iv in &raw {
            Interval::new(iv.lo.clone(), iv.hi.clone())?;
        }
        Ok(Self::from_valid(raw))
    }

    /// Builds a piece from `(lo, hi)` pairs, validating each.
    pub fn from_pairs<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Rational, Rational)>,
    {
        let raw = pairs
            .into_iter()
            .map(|(lo, hi)| Interval::new(lo, hi))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_valid(raw))
    }

    /// Single interval `[lo, hi] ∩ [0, 1]`; empty when the clamp is empty.
    pub fn span(lo: &Rational, hi: &Rational) -> Self {
        let lo = rational::max(lo, &Rational::zero());
        let hi = rational::min(hi, &Rational::one());
        if lo >= hi {
            Piece::empty()
        } else {
            Piece {
                intervals: vec![Interval { lo, hi }],
            }
        }
    }

    fn from_valid(mut raw: Vec<Interval>) -> Self {
        raw.retain(|iv| !iv.is_degenerate());
        raw.sort_by(|a, b| a.lo.cmp(&b.lo));
        let mut out: Vec<Interval> = Vec::with_capacity(raw.len());
        for iv in raw {
            match out.last_mut() {
                Some(last) if iv.lo <= last.hi => {
                    if iv.hi > last.hi {
                        last.hi = iv.hi;
                    }
                }
                _ => out.push(iv),
            }
        }
        Piece { intervals: out }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Number of maximal contiguous components.
    pub fn component_count(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_contiguous(&self) -> bool {
        self.intervals.len() <= 1
    }

    pub fn measure(&self) -> Rational {
        self.intervals.iter().map(Interval::len).sum()
    }

    pub fn first_point(&self) -> Option<&Rational> {
        self.intervals.first().map(|iv| &iv.lo)
    }

    pub fn last_point(&self) -> Option<&Rational> {
        self.intervals.last().map(|iv| &iv.hi)
    }

    pub fn apply(&self, other: &Piece, op: SetOp) -> Piece {
        match op {
            SetOp::Union => self.union(other),
            SetOp::Intersect => self.intersect(other),
            SetOp::Subtract => self.subtract(other),
        }
    }

    pub fn union(&self, other: &Piece) -> Piece {
        let mut all = self.intervals.clone();
        all.extend(other.intervals.iter().cloned());
        Self::from_valid(all)
    }

    pub fn intersect(&self, other: &Piece) -> Piece {
        let (a, b) = (&self.intervals, &other.intervals);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            let lo = rational::max(&a[i].lo, &b[j].lo);
            let hi = rational::min(&a[i].hi, &b[j].hi);
            if lo < hi {
                out.push(Interval { lo, hi });
            }
            if a[i].hi < b[j].hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self::from_valid(out)
    }

    pub fn subtract(&self, other: &Piece) -> Piece {
        let mut out = Vec::new();
        for iv in &self.intervals {
            let mut cursor = iv.lo.clone();
            for cut in &other.intervals {
                if cut.hi <= cursor || cut.lo >= iv.hi {
                    continue;
                }
                if cut.lo > cursor {
                    out.push(Interval {
                        lo: cursor.clone(),
                        hi: cut.lo.clone(),
                    });
                }
                cursor = rational::max(&cursor, &cut.hi);
                if cursor >= iv.hi {
                    break;
                }
            }
            if cursor < iv.hi {
                out.push(Interval {
                    lo: cursor,
                    hi: iv.hi.clone(),
                });
            }
        }
        Self::from_valid(out)
    }

    /// `self ∩ [lo, hi]`.
    pub fn clip(&self, lo: &Rational, hi: &Rational) -> Piece {
        self.intersect(&Piece::span(lo, hi))
    }

    /// True when the two pieces share only measure-zero boundary points.
    pub fn is_disjoint(&self, other: &Piece) -> bool {
        let (a, b) = (&self.intervals, &other.intervals);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            if a[i].lo < b[j].hi && b[j].lo < a[i].hi {
                return false;
            }
            if a[i].hi < b[j].hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        true
    }

    pub fn contains(&self, other: &Piece) -> bool {
        other.subtract(self).is_empty()
    }
}

impl fmt::Display for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return write!(f, "∅");
        }
        let parts: Vec<String> = self.intervals.iter().map(|iv| iv.to_string()).collect();
        write!(f, "{}", parts.join(" ∪ "))
    }
}
