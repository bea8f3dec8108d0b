//! SVG picture of an allocation: one horizontal band per layer, one colour
//! per agent.

use std::fmt::Write;

use crate::cake::MultiAllocation;
use crate::piece::Interval;
use crate::rational::{self, Rational};

const PALETTE: [&str; 8] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7",
];

const LEFT: f64 = 70.0;
const WIDTH: f64 = 640.0;
const BAND: f64 = 36.0;
const GAP: f64 = 12.0;
const TOP: f64 = 16.0;

pub fn colour(agent: usize) -> &'static str {
    PALETTE[agent % PALETTE.len()]
}

fn px(x: &Rational) -> f64 {
    LEFT + WIDTH * rational::to_f64(x)
}

/// Layer 0 is drawn on top, as in the layer-stack pictures.
pub fn render_svg(extents: &[Interval], names: &[String], a: &MultiAllocation) -> String {
    let m = extents.len();
    let legend_y = TOP + m as f64 * (BAND + GAP) + 14.0;
    let height = legend_y + 24.0;
    let total_width = LEFT + WIDTH + 20.0;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{total_width}" height="{height}" viewBox="0 0 {total_width} {height}" font-family="sans-serif" font-size="12">"#
    );
    for (j, extent) in extents.iter().enumerate() {
        let y = TOP + j as f64 * (BAND + GAP);
        let _ = writeln!(
            svg,
            r#"  <text x="{}" y="{}" text-anchor="end">layer {j}</text>"#,
            LEFT - 8.0,
            y + BAND / 2.0 + 4.0
        );
        let _ = writeln!(
            svg,
            r##"  <rect x="{LEFT}" y="{y}" width="{WIDTH}" height="{BAND}" fill="#f4f4f4"/>"##
        );
        let _ = writeln!(
            svg,
            r##"  <rect x="{:.3}" y="{y}" width="{:.3}" height="{BAND}" fill="#dddddd"/>"##,
            px(&extent.lo),
            px(&extent.hi) - px(&extent.lo)
        );
        for (i, bundle) in a.bundles.iter().enumerate() {
            let Some(piece) = bundle.layers.get(j) else {
                continue;
            };
            for iv in piece.intervals() {
                let _ = writeln!(
                    svg,
                    r##"  <rect x="{:.3}" y="{y}" width="{:.3}" height="{BAND}" fill="{}" stroke="#ffffff" stroke-width="0.5"><title>{}: [{}, {}]</title></rect>"##,
                    px(&iv.lo),
                    px(&iv.hi) - px(&iv.lo),
                    colour(i),
                    escape(names.get(i).map_or("?", String::as_str)),
                    rational::format(&iv.lo),
                    rational::format(&iv.hi)
                );
            }
        }
    }
    let mut x = LEFT;
    for (i, name) in names.iter().enumerate() {
        let _ = writeln!(
            svg,
            r#"  <rect x="{x}" y="{}" width="12" height="12" fill="{}"/><text x="{}" y="{legend_y}">{}</text>"#,
            legend_y - 10.0,
            colour(i),
            x + 16.0,
            escape(name)
        );
        x += 24.0 + 7.0 * name.chars().count() as f64;
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cake::LayeredPiece;
    use crate::piece::Piece;
    use crate::rational::q;

    #[test]
    fn complete_allocation_fills_bands() {
        let a = MultiAllocation {
            bundles: vec![
                LayeredPiece {
                    layers: vec![Piece::span(&q(0, 1), &q(1, 2)), Piece::span(&q(1, 2), &q(1, 1))],
                },
                LayeredPiece {
                    layers: vec![Piece::span(&q(1, 2), &q(1, 1)), Piece::span(&q(0, 1), &q(1, 2))],
                },
            ],
        };
        let svg = render_svg(
            &[Interval::unit(), Interval::unit()],
            &["a".into(), "b<".into()],
            &a,
        );
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<title>").count(), 4);
        assert!(svg.contains("b&lt;"));
    }
}
