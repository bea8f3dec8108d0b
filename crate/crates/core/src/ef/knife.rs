//! Three agents, two layers, two of the agents identical.
//!
//! A short knife sweeps the top layer from the left, giving `Y = C_1 ∩ [0, y]`,
//! while a long knife keeps `x` at a switching point of the identical pair on
//! the rest `C^{-y}`. Someone shouts as soon as `Y` is worth at least as much
//! to them as their favourite diagonal piece of `C^{-y}`.
//!
//! Instead of simulating the sweep, we search the `(y, x)` square directly.
//! With every density constant between global breakpoints, the square splits
//! into cells (rectangles off the diagonal, two triangles on it) on which
//! every quantity below is affine in `(x, y)`. Each valid configuration is
//! then a convex polygon cut out by exact half-plane clipping, and the
//! lexicographically smallest vertex over all cells is the answer.

use num_traits::{Signed, Zero};

use crate::cake::{DiagonalSide, LayeredPiece, MultiAllocation};
use crate::error::{Error, Result};
use crate::piece::Piece;
use crate::rational::{self, Rational};
use crate::session::QuerySession;
use crate::step::StepFn;

/// Where the knives stopped and who shouted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShoutPoint {
    pub y: Rational,
    pub x: Rational,
    pub shouter: usize,
    /// True if the layers were swapped so that someone weakly prefers the top.
    pub relabeled: bool,
}

pub fn moving_knife_three(s: &mut QuerySession) -> Result<MultiAllocation> {
    moving_knife_three_traced(s).map(|(a, _)| a)
}

pub fn moving_knife_three_traced(s: &mut QuerySession) -> Result<(MultiAllocation, ShoutPoint)> {
    const NAME: &str = "three-agent moving knife";
    let original = s.cake().clone();
    if original.layer_count() != 2 || s.agent_count() != 3 {
        return Err(Error::precondition(
            NAME,
            format!(
                "needs 3 agents and 2 layers, got {} agents and {} layers",
                s.agent_count(),
                original.layer_count()
            ),
        ));
    }

    let mut dens: Vec<[StepFn; 2]> = Vec::with_capacity(3);
    for i in 0..3 {
        dens.push([
            s.reveal_density(i, &original, 0)?,
            s.reveal_density(i, &original, 1)?,
        ]);
    }
    let (p, k) = [(0, 1, 2), (0, 2, 1), (1, 2, 0)]
        .into_iter()
        .find(|&(a, b, _)| dens[a] == dens[b])
        .map(|(a, _, c)| (a, c))
        .ok_or(Error::NoIdenticalPair)?;

    let relabeled = dens.iter().all(|[top, bottom]| top.total() < bottom.total());
    let cake = if relabeled {
        for d in dens.iter_mut() {
            d.swap(0, 1);
        }
        original.reversed()
    } else {
        original
    };

    let (y, x) = first_shout(&dens[p], &dens[k]);

    let yp = LayeredPiece {
        layers: vec![
            cake.layers()[0].support().clip(&rational::zero(), &y),
            Piece::empty(),
        ],
    };
    let rest = cake.remove_from_layer(0, &Piece::span(&rational::zero(), &y));
    let lr = rest.diagonal_piece(&x, DiagonalSide::LR)?;
    let rl = rest.diagonal_piece(&x, DiagonalSide::RL)?;
    let pieces = [yp, lr, rl];

    let mut value: Vec<Vec<Rational>> = vec![Vec::new(); 3];
    for (i, row) in value.iter_mut().enumerate() {
        for piece in &pieces {
            row.push(s.piece_value(i, &cake, piece)?);
        }
    }

    // owner[t] = agent receiving piece t
    let mut chosen = None;
    'search: for shouter in 0..3 {
        let others: Vec<usize> = (0..3).filter(|&a| a != shouter).collect();
        for owner in [[shouter, others[0], others[1]], [shouter, others[1], others[0]]] {
            let envy_free = (0..3).all(|t| (0..3).all(|u| value[owner[t]][t] >= value[owner[t]][u]));
            if envy_free {
                chosen = Some(owner);
                break 'search;
            }
        }
    }
    let owner = chosen
        .ok_or_else(|| Error::VerificationFailed(format!("no envy-free assignment at y = {y}, x = {x}")))?;

    let a = MultiAllocation::from_assignments(
        3,
        cake.original_layers(),
        owner
            .iter()
            .zip(&pieces)
            .map(|(&agent, piece)| (agent, cake.to_original(piece))),
    );
    let point = ShoutPoint {
        y,
        x,
        shouter: owner[0],
        relabeled,
    };
    Ok((a, point))
}

/// `a·x + b·y + c`.
#[derive(Clone, Debug)]
struct Lin {
    a: Rational,
    b: Rational,
    c: Rational,
}

type Pt = (Rational, Rational); // (x, y)

impl Lin {
    fn constant(c: Rational) -> Self {
        Lin {
            a: Rational::zero(),
            b: Rational::zero(),
            c,
        }
    }

    fn in_x((slope, icpt): (Rational, Rational)) -> Self {
        Lin {
            a: slope,
            b: Rational::zero(),
            c: icpt,
        }
    }

    fn in_y((slope, icpt): (Rational, Rational)) -> Self {
        Lin {
            a: Rational::zero(),
            b: slope,
            c: icpt,
        }
    }

    fn eval(&self, (x, y): &Pt) -> Rational {
        &self.a * x + &self.b * y + &self.c
    }

    fn add(&self, o: &Lin) -> Lin {
        Lin {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
            c: &self.c + &o.c,
        }
    }

    fn neg(&self) -> Lin {
        Lin {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
        }
    }

    fn sub(&self, o: &Lin) -> Lin {
        self.add(&o.neg())
    }

    fn scale(&self, k: &Rational) -> Lin {
        Lin {
            a: &self.a * k,
            b: &self.b * k,
            c: &self.c * k,
        }
    }
}

/// Keeps the part of a convex polygon where `l >= 0`.
fn clip(poly: Vec<Pt>, l: &Lin) -> Vec<Pt> {
    let n = poly.len();
    let vals: Vec<Rational> = poly.iter().map(|p| l.eval(p)).collect();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let j = (i + 1) % n;
        let (vp, vq) = (&vals[i], &vals[j]);
        if !vp.is_negative() {
            out.push(poly[i].clone());
        }
        if (vp.is_negative() && vq.is_positive()) || (vp.is_positive() && vq.is_negative()) {
            let t = vp / (vp - vq);
            let (px, py) = &poly[i];
            let (qx, qy) = &poly[j];
            out.push((px + &t * (qx - px), py + &t * (qy - py)));
        }
    }
    out.dedup();
    out
}

/// Lexicographically smallest `(y, x)` at which the identical pair (top and
/// bottom densities `u`) is indifferent between the diagonal pieces of
/// `C^{-y}` and one of these holds:
///
/// * the pair does not envy `Y` and the third agent (densities `w`) weakly
///   prefers `Y` to both diagonal pieces;
/// * the pair values `Y` exactly like the diagonal pieces and the third agent
///   weakly prefers one of the diagonal pieces to `Y`.
///
/// Either way an envy-free assignment exists. The first configuration type
/// is reached no later than the point where the pair's value for `Y` hits a
/// third, so the search always succeeds.
fn first_shout(u: &[StepFn; 2], w: &[StepFn; 2]) -> (Rational, Rational) {
    let mut z: Vec<Rational> = vec![rational::zero(), rational::one()];
    for d in u.iter().chain(w) {
        z.extend(d.breaks().iter().cloned());
    }
    z.sort();
    z.dedup();

    // cumulative of d on segment k as (slope, intercept)
    let affine = |d: &StepFn, k: usize| {
        let mid = (&z[k] + &z[k + 1]) / rational::int(2);
        let slope = d.value_at(&mid);
        let icpt = d.cumulative(&z[k]) - &slope * &z[k];
        (slope, icpt)
    };

    let (t1, t2) = (u[0].total(), u[1].total());
    let (s1, s2) = (w[0].total(), w[1].total());
    let total = &t1 + &t2;
    let third = Lin::constant(&total / rational::int(3));
    let half = rational::q(1, 2);

    let mut best: Option<(Rational, Rational)> = None; // (y, x)
    for a in 0..z.len() - 1 {
        if best.as_ref().is_some_and(|(by, _)| z[a] > *by) {
            break;
        }
        let f1y = Lin::in_y(affine(&u[0], a));
        let g1y = Lin::in_y(affine(&w[0], a));
        let h = Lin::constant(total.clone()).sub(&f1y).scale(&half);
        let pair_y = f1y.sub(&third);

        for b in 0..z.len() - 1 {
            let f1x = Lin::in_x(affine(&u[0], b));
            let f2x = Lin::in_x(affine(&u[1], b));
            let g1x = Lin::in_x(affine(&w[0], b));
            let g2x = Lin::in_x(affine(&w[1], b));

            let (ya, yb, xa, xb) = (&z[a], &z[a + 1], &z[b], &z[b + 1]);
            let rect = || {
                vec![
                    (xa.clone(), ya.clone()),
                    (xb.clone(), ya.clone()),
                    (xb.clone(), yb.clone()),
                    (xa.clone(), yb.clone()),
                ]
            };
            let mut regions: Vec<(Vec<Pt>, bool)> = Vec::with_capacity(2);
            if b > a {
                regions.push((rect(), true));
            } else if b < a {
                regions.push((rect(), false));
            } else {
                regions.push((
                    vec![
                        (xa.clone(), ya.clone()),
                        (xb.clone(), ya.clone()),
                        (xb.clone(), yb.clone()),
                    ],
                    true,
                ));
                regions.push((
                    vec![
                        (xa.clone(), ya.clone()),
                        (xb.clone(), yb.clone()),
                        (xa.clone(), yb.clone()),
                    ],
                    false,
                ));
            }

            for (poly, right_of_y) in regions {
                // LR(x, C^{-y}) = top ∩ [y, x] + bottom ∩ [x, 1] when x >= y
                let (pair_lr, third_lr) = if right_of_y {
                    (
                        f1x.sub(&f1y).add(&Lin::constant(t2.clone())).sub(&f2x),
                        g1x.sub(&g1y).add(&Lin::constant(s2.clone())).sub(&g2x),
                    )
                } else {
                    (
                        Lin::constant(t2.clone()).sub(&f2x),
                        Lin::constant(s2.clone()).sub(&g2x),
                    )
                };
                let third_rl = Lin::constant(&s1 + &s2).sub(&g1y).sub(&third_lr);
                let switching = pair_lr.sub(&h);
                let y_over_lr = g1y.sub(&third_lr);
                let y_over_rl = g1y.sub(&third_rl);

                let cases = [
                    vec![pair_y.neg(), y_over_lr.clone(), y_over_rl.clone()],
                    vec![pair_y.clone(), pair_y.neg(), y_over_lr.neg()],
                    vec![pair_y.clone(), pair_y.neg(), y_over_rl.neg()],
                ];
                for case in cases {
                    let mut region = clip(clip(poly.clone(), &switching), &switching.neg());
                    for l in &case {
                        if region.is_empty() {
                            break;
                        }
                        region = clip(region, l);
                    }
                    for (x, y) in region {
                        let better = match &best {
                            None => true,
                            Some((by, bx)) => (&y, &x) < (by, bx),
                        };
                        if better {
                            best = Some((y, x));
                        }
                    }
                }
            }
        }
    }
    let (y, x) = best.expect("a configuration exists where the pair values Y at a third");
    (y, x)
}
