//! Robertson–Webb style query access to agent valuations.
//!
//! Protocols never touch a [`Valuation`] directly. They hold a
//! [`QuerySession`] and ask it short (single-layer) and long (diagonal)
//! eval/cut questions about whatever cake they are currently working on, so
//! the counters in [`QueryCounts`] are a complete record of what each run
//! asked.
//!
//! Short queries are exact integrals and inverse integrals of the layer's step
//! density. Long queries work with `f(x) = V_i(LR(x))`, which is continuous
//! and piecewise linear with knots at the density breakpoints, so every cut is
//! a linear solve on one segment.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::cake::{DiagonalSide, LayeredCake, LayeredPiece};
use crate::error::{Error, Result};
use crate::pwl::Pwl;
use crate::rational::{self, Rational};
use crate::step::StepFn;
use crate::valuation::Valuation;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryCounts {
    pub short_eval: u64,
    pub short_cut: u64,
    pub long_eval: u64,
    pub long_cut: u64,
    /// Whole-density disclosures. Continuous procedures (moving knives, the
    /// majority switching point, perfect partitions) need an agent's full
    /// profile rather than finitely many point queries.
    pub reveal: u64,
}

impl QueryCounts {
    pub fn long_total(&self) -> u64 {
        self.long_eval + self.long_cut
    }

    pub fn total(&self) -> u64 {
        self.short_eval + self.short_cut + self.long_eval + self.long_cut + self.reveal
    }
}

#[derive(Clone, Debug)]
pub struct QuerySession {
    cake: LayeredCake,
    valuations: Vec<Valuation>,
    counts: QueryCounts,
}

impl QuerySession {
    pub fn new(cake: LayeredCake, valuations: Vec<Valuation>) -> Self {
        QuerySession {
            cake,
            valuations,
            counts: QueryCounts::default(),
        }
    }

    /// The original cake.
    pub fn cake(&self) -> &LayeredCake {
        &self.cake
    }

    pub fn agent_count(&self) -> usize {
        self.valuations.len()
    }

    pub fn counts(&self) -> QueryCounts {
        self.counts
    }

    fn valuation(&self, i: usize) -> Result<&Valuation> {
        self.valuations.get(i).ok_or(Error::UnknownAgent(i))
    }

    fn layer_density(&self, i: usize, cake: &LayeredCake, j: usize) -> Result<StepFn> {
        Ok(self.valuation(i)?.layer_density(cake.layer(j)?))
    }

    /// `V_ij([x, y] ∩ C_j)`.
    pub fn short_eval(
        &mut self,
        i: usize,
        cake: &LayeredCake,
        j: usize,
        x: &Rational,
        y: &Rational,
    ) -> Result<Rational> {
        check_unit(x)?;
        check_unit(y)?;
        if x > y {
            return Err(Error::Reversed {
                lo: Box::new(x.clone()),
                hi: Box::new(y.clone()),
            });
        }
        let d = self.layer_density(i, cake, j)?;
        self.counts.short_eval += 1;
        Ok(d.integral(x, y))
    }

    /// Value of layer `j` as a whole.
    pub fn layer_value(&mut self, i: usize, cake: &LayeredCake, j: usize) -> Result<Rational> {
        self.short_eval(i, cake, j, &rational::zero(), &rational::one())
    }

    /// Value of a layered piece of `cake`, one short eval per interval.
    pub fn piece_value(&mut self, i: usize, cake: &LayeredCake, p: &LayeredPiece) -> Result<Rational> {
        let mut total = Rational::zero();
        for (j, piece) in p.layers.iter().enumerate() {
            for iv in piece.intervals() {
                total += self.short_eval(i, cake, j, &iv.lo, &iv.hi)?;
            }
        }
        Ok(total)
    }

    /// Minimal `y` with `V_ij([x, y]) = r`.
    pub fn short_cut(
        &mut self,
        i: usize,
        cake: &LayeredCake,
        j: usize,
        x: &Rational,
        r: &Rational,
    ) -> Result<Rational> {
        check_unit(x)?;
        let d = self.layer_density(i, cake, j)?;
        self.counts.short_cut += 1;
        d.cut(x, r).ok_or_else(|| Error::NoSuchPoint(r.clone()))
    }

    /// Full density of agent `i` on layer `j` of `cake`.
    pub fn reveal_density(&mut self, i: usize, cake: &LayeredCake, j: usize) -> Result<StepFn> {
        let d = self.layer_density(i, cake, j)?;
        self.counts.reveal += 1;
        Ok(d)
    }

    /// `f(x) = V_i(LR(x, cake))` as an exact piecewise-linear function.
    fn long_function(&self, i: usize, cake: &LayeredCake) -> Result<Pwl> {
        let m = cake.layer_count();
        if !m.is_multiple_of(2) {
            return Err(Error::OddLayerCount(m));
        }
        let densities = (0..m)
            .map(|j| self.layer_density(i, cake, j))
            .collect::<Result<Vec<_>>>()?;
        Ok(diagonal_function(&densities))
    }

    /// `V_i(LR(x))`.
    pub fn long_eval(&mut self, i: usize, cake: &LayeredCake, x: &Rational) -> Result<Rational> {
        self.long_eval_side(i, cake, x, DiagonalSide::LR)
    }

    /// `V_i(LR(x))` or `V_i(RL(x))`.
    pub fn long_eval_side(
        &mut self,
        i: usize,
        cake: &LayeredCake,
        x: &Rational,
        side: DiagonalSide,
    ) -> Result<Rational> {
        check_unit(x)?;
        let f = self.long_function(i, cake)?;
        self.counts.long_eval += 1;
        let lr = f.eval(x);
        Ok(match side {
            DiagonalSide::LR => lr,
            DiagonalSide::RL => cake_total(&f) - lr,
        })
    }

    /// Minimal `x` with `V_i(LR(x)) = r`.
    pub fn long_cut(&mut self, i: usize, cake: &LayeredCake, r: &Rational) -> Result<Rational> {
        let f = self.long_function(i, cake)?;
        self.counts.long_cut += 1;
        f.min_root(r).ok_or_else(|| Error::NoSuchPoint(r.clone()))
    }

    /// Minimal `x` with `V_i(LR(x)) = V_i(RL(x))`; asked as a single long cut
    /// at half the agent's value of `cake`.
    pub fn switching_point(&mut self, i: usize, cake: &LayeredCake) -> Result<Rational> {
        let f = self.long_function(i, cake)?;
        self.counts.long_cut += 1;
        let half = cake_total(&f) / rational::int(2);
        Ok(f.min_root(&half)
            .expect("f(0) + f(1) is the cake value, so half of it is attained"))
    }

    /// A point where at least `⌈n/2⌉` of `agents` weakly prefer `LR(x)` and at
    /// least `⌈n/2⌉` weakly prefer `RL(x)`.
    ///
    /// With `M` the closed set where an LR-majority holds: if `0 ∈ M` the
    /// answer is `sup M`, otherwise `sup M'` for the RL-majority set `M'`.
    /// Both sets are finite unions of closed intervals whose endpoints are
    /// knots or level crossings of the `f_i`, so the supremum is found among
    /// those candidates. The result is checked, and the candidate set scanned
    /// as a fallback.
    pub fn majority_switching_point(&mut self, agents: &[usize], cake: &LayeredCake) -> Result<Rational> {
        if agents.is_empty() {
            return Err(Error::precondition(
                "majority switching point",
                "needs at least one agent",
            ));
        }
        let mut profiles = Vec::with_capacity(agents.len());
        for &i in agents {
            let f = self.long_function(i, cake)?;
            self.counts.reveal += 1;
            let half = cake_total(&f) / rational::int(2);
            profiles.push((f, half));
        }
        let candidates = majority_candidates(&profiles);
        let need = agents.len().div_ceil(2);
        let lr_count = |x: &Rational| profiles.iter().filter(|(f, h)| f.eval(x) >= *h).count();
        let rl_count = |x: &Rational| profiles.iter().filter(|(f, h)| f.eval(x) <= *h).count();
        let holds = |x: &Rational| lr_count(x) >= need && rl_count(x) >= need;

        let zero = rational::zero();
        let sup = if lr_count(&zero) >= need {
            candidates.iter().rev().find(|x| lr_count(x) >= need)
        } else {
            candidates.iter().rev().find(|x| rl_count(x) >= need)
        };
        if let Some(t) = sup {
            if holds(t) {
                return Ok(t.clone());
            }
        }
        candidates
            .iter()
            .rev()
            .find(|x| holds(x))
            .cloned()
            .ok_or_else(|| Error::VerificationFailed("no majority switching point found".into()))
    }
}

fn check_unit(x: &Rational) -> Result<()> {
    if *x < Rational::zero() || *x > rational::one() {
        Err(Error::OutOfRange(x.clone()))
    } else {
        Ok(())
    }
}

/// `f(0) + f(1)`: `LR(0)` and `LR(1)` are complementary.
fn cake_total(f: &Pwl) -> Rational {
    f.knot_values().first().unwrap() + f.knot_values().last().unwrap()
}

/// `f(x) = Σ_top ∫_0^x d_j + Σ_bottom ∫_x^1 d_j` over the layer densities.
pub fn diagonal_function(densities: &[StepFn]) -> Pwl {
    let m = densities.len();
    let mut knots: Vec<Rational> = densities
        .iter()
        .flat_map(|d| d.breaks().iter().cloned())
        .collect();
    knots.push(rational::zero());
    knots.push(rational::one());
    knots.sort();
    knots.dedup();
    let totals: Vec<Rational> = densities.iter().map(StepFn::total).collect();
    Pwl::from_knots(knots, |x| {
        densities
            .iter()
            .enumerate()
            .map(|(j, d)| {
                let left = d.cumulative(x);
                if j < m / 2 {
                    left
                } else {
                    &totals[j] - left
                }
            })
            .sum()
    })
}

/// Knots, level crossings at each agent's half value, and the endpoints.
fn majority_candidates(profiles: &[(Pwl, Rational)]) -> Vec<Rational> {
    let mut c = vec![rational::zero(), rational::one()];
    for (f, half) in profiles {
        c.extend(f.knots().iter().cloned());
        c.extend(f.level_points(half));
    }
    c.sort();
    c.dedup();
    c
}
