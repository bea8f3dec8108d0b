//! Piecewise-constant densities on `[0, 1]`.

use num_traits::{Signed, Zero};

use crate::piece::Piece;
use crate::rational::{self, Rational};

/// A step function over `[0, 1]`: `values[k]` holds on `[breaks[k], breaks[k+1]]`.
///
/// Canonical form: `breaks` strictly increasing from 0 to 1 and no two
/// neighbouring segments share a value, so structural equality is equality
/// of functions (up to measure zero).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StepFn {
    breaks: Vec<Rational>,
    values: Vec<Rational>,
}

impl StepFn {
    pub fn zero() -> Self {
        Self::constant(Rational::zero())
    }

    pub fn constant(v: Rational) -> Self {
        StepFn {
            breaks: vec![rational::zero(), rational::one()],
            values: vec![v],
        }
    }

    /// Builds from raw segments. Degenerate segments are dropped and equal
    /// neighbours merged. Panics on malformed input; validated constructors
    /// live in [`crate::valuation`].
    pub fn from_segments(breaks: Vec<Rational>, values: Vec<Rational>) -> Self {
        assert_eq!(breaks.len(), values.len() + 1, "one value per segment");
        assert!(breaks.first() == Some(&rational::zero()));
        assert!(breaks.last() == Some(&rational::one()));
        let mut b: Vec<Rational> = vec![breaks[0].clone()];
        let mut v: Vec<Rational> = Vec::new();
        for (k, val) in values.into_iter().enumerate() {
            let end = &breaks[k + 1];
            assert!(*end >= breaks[k], "breakpoints must be sorted");
            if *end == breaks[k] {
                continue;
            }
            if v.last() == Some(&val) {
                *b.last_mut().unwrap() = end.clone();
            } else {
                v.push(val);
                b.push(end.clone());
            }
        }
        StepFn { breaks: b, values: v }
    }

    pub fn breaks(&self) -> &[Rational] {
        &self.breaks
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// Iterates `(start, end, value)` triples.
    pub fn segments(&self) -> impl Iterator<Item = (&Rational, &Rational, &Rational)> {
        self.breaks
            .windows(2)
            .zip(&self.values)
            .map(|(w, v)| (&w[0], &w[1], v))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|v| !v.is_negative())
    }

    pub fn scale(&self, factor: &Rational) -> StepFn {
        StepFn::from_segments(
            self.breaks.clone(),
            self.values.iter().map(|v| v * factor).collect(),
        )
    }

    /// `∫_a^b f` for `0 <= a <= b <= 1` (returns 0 when `a >= b`).
    pub fn integral(&self, a: &Rational, b: &Rational) -> Rational {
        let mut total = Rational::zero();
        if a >= b {
            return total;
        }
        for (s, e, v) in self.segments() {
            if e <= a {
                continue;
            }
            if s >= b {
                break;
            }
            let lo = if s > a { s } else { a };
            let hi = if e < b { e } else { b };
            if !v.is_zero() {
                total += v * (hi - lo);
            }
        }
        total
    }

    /// `∫_0^x f`.
    pub fn cumulative(&self, x: &Rational) -> Rational {
        self.integral(&Rational::zero(), x)
    }

    pub fn total(&self) -> Rational {
        self.cumulative(&rational::one())
    }

    /// One merged pass over the piece's intervals and the segments.
    pub fn integrate_piece(&self, piece: &Piece) -> Rational {
        let mut total = Rational::zero();
        let mut k = 0;
        let n = self.values.len();
        for iv in piece.intervals() {
            while k < n && self.breaks[k + 1] <= iv.lo {
                k += 1;
            }
            let mut kk = k;
            while kk < n && self.breaks[kk] < iv.hi {
                let v = &self.values[kk];
                if !v.is_zero() {
                    let lo = if self.breaks[kk] > iv.lo {
                        &self.breaks[kk]
                    } else {
                        &iv.lo
                    };
                    let hi = if self.breaks[kk + 1] < iv.hi {
                        &self.breaks[kk + 1]
                    } else {
                        &iv.hi
                    };
                    total += v * (hi - lo);
                }
                kk += 1;
            }
        }
        total
    }

    /// Smallest `y >= x` with `∫_x^y f = r`, or `None` if `∫_x^1 f < r`.
    ///
    /// The density must be nonnegative, so the running integral is monotone
    /// and a left-to-right scan finds the minimal root.
    pub fn cut(&self, x: &Rational, r: &Rational) -> Option<Rational> {
        let mut acc = Rational::zero();
        if acc == *r {
            return Some(x.clone());
        }
        if *r < acc {
            return None;
        }
        for (s, e, v) in self.segments() {
            if e <= x {
                continue;
            }
            let start = if s > x { s } else { x };
            if v.is_zero() {
                continue;
            }
            let gain = v * (e - start);
            if &acc + &gain >= *r {
                return Some(start + (r - &acc) / v);
            }
            acc += gain;
        }
        None
    }

    /// The function on `piece`, zero elsewhere.
    pub fn restrict(&self, piece: &Piece) -> StepFn {
        let mut cuts: Vec<Rational> = self.breaks.clone();
        for iv in piece.intervals() {
            cuts.push(iv.lo.clone());
            cuts.push(iv.hi.clone());
        }
        cuts.sort();
        cuts.dedup();
        let values = cuts
            .windows(2)
            .map(|w| {
                let mid = (&w[0] + &w[1]) / rational::int(2);
                let inside = piece.intervals().iter().any(|iv| iv.lo <= mid && mid <= iv.hi);
                if inside {
                    self.value_at(&mid)
                } else {
                    Rational::zero()
                }
            })
            .collect();
        StepFn::from_segments(cuts, values)
    }

    /// Value at `x`; at a breakpoint, the value of the segment to its right
    /// (left at `x = 1`).
    pub fn value_at(&self, x: &Rational) -> Rational {
        let k = self.breaks[1..]
            .iter()
            .position(|b| x < b)
            .unwrap_or(self.values.len() - 1);
        self.values[k].clone()
    }

    pub fn add(&self, other: &StepFn) -> StepFn {
        let mut cuts: Vec<Rational> = self.breaks.iter().chain(&other.breaks).cloned().collect();
        cuts.sort();
        cuts.dedup();
        let values = cuts
            .windows(2)
            .map(|w| {
                let mid = (&w[0] + &w[1]) / rational::int(2);
                self.value_at(&mid) + other.value_at(&mid)
            })
            .collect();
        StepFn::from_segments(cuts, values)
    }

    /// Piece where the density is strictly positive.
    pub fn support(&self) -> Piece {
        Piece::from_pairs(
            self.segments()
                .filter(|(_, _, v)| !v.is_zero())
                .map(|(s, e, _)| (s.clone(), e.clone())),
        )
        .expect("breakpoints lie in [0, 1]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, q};

    fn three_step() -> StepFn {
        StepFn::from_segments(
            vec![q(0, 1), q(1, 4), q(3, 4), q(1, 1)],
            vec![int(2), int(0), q(2, 3)],
        )
    }

    #[test]
    fn integral_matches_segment_products() {
        let f = three_step();
        assert_eq!(f.total(), q(1, 2) + q(2, 3) * q(1, 4));
        assert_eq!(f.integral(&q(1, 8), &q(7, 8)), q(1, 4) + q(2, 3) * q(1, 8));
    }

    #[test]
    fn cut_skips_zero_density_gap() {
        let f = three_step();
        assert_eq!(f.cut(&q(0, 1), &q(3, 5)), Some(q(9, 10)));
        // minimal root: the half is reached at 1/4, not anywhere in the gap
        assert_eq!(f.cut(&q(0, 1), &q(1, 2)), Some(q(1, 4)));
        assert_eq!(f.cut(&q(1, 3), &q(0, 1)), Some(q(1, 3)));
        assert_eq!(f.cut(&q(0, 1), &int(1)), None);
    }

    #[test]
    fn canonical_form_merges_equal_neighbours() {
        let f = StepFn::from_segments(
            vec![q(0, 1), q(1, 3), q(1, 3), q(1, 1)],
            vec![int(1), int(5), int(1)],
        );
        assert_eq!(f, StepFn::constant(int(1)));
    }

    #[test]
    fn restrict_and_add() {
        let f = StepFn::constant(int(1));
        let left = f.restrict(&Piece::span(&q(0, 1), &q(1, 2)));
        let right = f.restrict(&Piece::span(&q(1, 2), &q(1, 1)));
        assert_eq!(left.total(), q(1, 2));
        assert_eq!(left.add(&right), f);
        assert_eq!(left.support(), Piece::span(&q(0, 1), &q(1, 2)));
    }
}
