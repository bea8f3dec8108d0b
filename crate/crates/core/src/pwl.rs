//! Continuous piecewise-linear functions on `[0, 1]` with exact root finding.

use crate::rational::Rational;

/// Knots `(xs[k], ys[k])` joined by straight segments; `xs` strictly increasing
/// from 0 to 1.
#[derive(Clone, Debug, PartialEq)]
pub struct Pwl {
    xs: Vec<Rational>,
    ys: Vec<Rational>,
}

impl Pwl {
    pub fn new(xs: Vec<Rational>, ys: Vec<Rational>) -> Self {
        assert_eq!(xs.len(), ys.len());
        assert!(xs.len() >= 2);
        assert!(xs.windows(2).all(|w| w[0] < w[1]));
        Pwl { xs, ys }
    }

    /// Samples `f` at every knot.
    pub fn from_knots(knots: Vec<Rational>, f: impl Fn(&Rational) -> Rational) -> Self {
        let ys = knots.iter().map(&f).collect();
        Pwl::new(knots, ys)
    }

    pub fn knots(&self) -> &[Rational] {
        &self.xs
    }

    pub fn knot_values(&self) -> &[Rational] {
        &self.ys
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let k = self
            .xs
            .windows(2)
            .position(|w| *x <= w[1])
            .unwrap_or(self.xs.len() - 2);
        let (x0, x1) = (&self.xs[k], &self.xs[k + 1]);
        let (y0, y1) = (&self.ys[k], &self.ys[k + 1]);
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    fn crossing(&self, k: usize, r: &Rational) -> Option<Rational> {
        let (x0, x1) = (&self.xs[k], &self.xs[k + 1]);
        let (y0, y1) = (&self.ys[k], &self.ys[k + 1]);
        let between = (y0 < r && r <= y1) || (y0 > r && r >= y1);
        between.then(|| x0 + (r - y0) * (x1 - x0) / (y1 - y0))
    }

    /// Smallest `x` with `f(x) = r`.
    pub fn min_root(&self, r: &Rational) -> Option<Rational> {
        for k in 0..self.xs.len() - 1 {
            if self.ys[k] == *r {
                return Some(self.xs[k].clone());
            }
            if let Some(x) = self.crossing(k, r) {
                return Some(x);
            }
        }
        (self.ys.last() == Some(r)).then(|| self.xs.last().unwrap().clone())
    }

    /// Every knot where `f = r` and every isolated crossing of level `r`,
    /// sorted. Together with the knots these bound all level-set components.
    pub fn level_points(&self, r: &Rational) -> Vec<Rational> {
        let mut out = Vec::new();
        for k in 0..self.xs.len() {
            if self.ys[k] == *r {
                out.push(self.xs[k].clone());
            }
            if k + 1 < self.xs.len() {
                if let Some(x) = self.crossing(k, r) {
                    out.push(x);
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    pub fn min_value(&self) -> &Rational {
        self.ys.iter().min().unwrap()
    }

    pub fn max_value(&self) -> &Rational {
        self.ys.iter().max().unwrap()
    }
}
