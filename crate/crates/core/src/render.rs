//! Grid pictures of triangulations: one panel per maximal simplex, square
//! `(i, j̄)` at column `i` from the left and row `j̄` from the bottom.
//!
//! ASCII panels use `#` for a filled square and `.` for an empty one, with a
//! blank line between panels. SVG panels are colored by the shift index `ℓ`
//! of the simplex when it is a shifted Dyck or extended Dyck path.

use std::fmt::Write as _;

use crate::simplex::{cyclic_shift, Simplex, Triangulation};

pub fn render_ascii(t: &Triangulation) -> String {
    let (m, n) = (t.m(), t.n());
    let panels: Vec<String> = t
        .simplices
        .iter()
        .map(|s| {
            let mut panel = String::new();
            for j in (1..=n).rev() {
                for i in 1..=m {
                    panel.push(if s.contains((i, j).into()) { '#' } else { '.' });
                }
                panel.push('\n');
            }
            panel
        })
        .collect();
    panels.join("\n")
}

/// The smallest `ℓ` such that shifting `s` back by `ℓ` lands it weakly above
/// the diagonal, for square supports and for `(n+1) × n` supports with the
/// last row fixed.
pub fn shift_index(s: &Simplex, t: &Triangulation) -> Option<usize> {
    let k = t.support.cols.len();
    let fixed: Vec<usize> = match t.support.rows.len() {
        r if r == k => Vec::new(),
        r if r == k + 1 => vec![k + 1],
        _ => return None,
    };
    (0..k).find(|&l| {
        cyclic_shift(s, &t.support, -(l as i64), &fixed)
            .map(|u| u.edges().iter().all(|v| fixed.contains(&v.row) || v.row <= v.col))
            .unwrap_or(false)
    })
}

const SHIFT_PALETTE: [&str; 6] = ["#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#a65628"];
const NEUTRAL: &str = "#999999";
const CELL: usize = 16;
const GAP: usize = 12;
const PER_ROW: usize = 6;

pub fn render_grid_svg(t: &Triangulation) -> String {
    let (m, n) = (t.m(), t.n());
    let count = t.len();
    let panel_w = m * CELL + GAP;
    let panel_h = n * CELL + GAP;
    let columns = count.clamp(1, PER_ROW);
    let lines = count.div_ceil(PER_ROW);
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}">"#,
        columns * panel_w + GAP,
        lines * panel_h + GAP
    );
    for (k, s) in t.simplices.iter().enumerate() {
        let ox = GAP + (k % PER_ROW) * panel_w;
        let oy = GAP + (k / PER_ROW) * panel_h;
        let fill = shift_index(s, t).map_or(NEUTRAL, |l| SHIFT_PALETTE[l % SHIFT_PALETTE.len()]);
        let _ = writeln!(svg, r#"  <g transform="translate({ox},{oy})">"#);
        for j in 1..=n {
            for i in 1..=m {
                let x = (i - 1) * CELL;
                let y = (n - j) * CELL;
                let color = if s.contains((i, j).into()) { fill } else { "white" };
                let _ = writeln!(
                    svg,
                    r#"    <rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="{color}" stroke="black" stroke-width="0.5"/>"#
                );
            }
        }
        svg.push_str("  </g>\n");
    }
    svg.push_str("</svg>\n");
    svg
}
