//! The Cayley trick: a cell `s` of a triangulation of `Δ_{m−1} × Δ_{n−1}`
//! becomes the Minkowski sum `s_1 + ⋯ + s_m` with
//! `s_i = conv{e_j : (i, j̄) ∈ s}`, and these sums form a fine mixed
//! subdivision of `mΔ_{n−1}`.
//!
//! For `n = 3` the drawing plane uses lattice coordinates `e_1 = (0,0)`,
//! `e_2 = (1,0)`, `e_3 = (0,1)`, so every polygon vertex is an integer point of
//! `mΔ_2` and areas are exact (kept doubled to stay integral).

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simplex::{Simplex, Triangulation};

/// One summand per row of the support: part `i` is `{j : (i, j̄) ∈ s}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MixedCell {
    pub rows: Vec<usize>,
    pub parts: Vec<Vec<usize>>,
}

impl MixedCell {
    pub fn from_simplex(s: &Simplex, rows: &[usize]) -> Self {
        let parts = rows.iter().map(|&r| s.edges().iter().filter(|v| v.row == r).map(|v| v.col).collect()).collect();
        MixedCell { rows: rows.to_vec(), parts }
    }

    /// `Σ (|part_i| − 1)`, the dimension of a fine cell.
    pub fn dimension(&self) -> isize {
        self.parts.iter().map(|p| p.len() as isize - 1).sum()
    }
}

pub fn cayley_cells(t: &Triangulation) -> Vec<MixedCell> {
    t.simplices.iter().map(|s| MixedCell::from_simplex(s, &t.support.rows)).collect()
}

pub type Point = (i64, i64);

fn lattice_point(col: usize) -> Point {
    match col {
        1 => (0, 0),
        2 => (1, 0),
        3 => (0, 1),
        _ => unreachable!("planar coordinates exist only for three columns"),
    }
}

fn cross(o: Point, a: Point, b: Point) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Counter-clockwise convex hull without collinear points (monotone chain).
pub fn convex_hull(mut points: Vec<Point>) -> Vec<Point> {
    points.sort_unstable();
    points.dedup();
    if points.len() < 3 {
        return points;
    }
    let mut hull: Vec<Point> = Vec::with_capacity(2 * points.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point>> =
            if pass == 0 { Box::new(points.iter()) } else { Box::new(points.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// The polygon `s_1 + ⋯ + s_m` of a cell with `n = 3`, counter-clockwise.
pub fn cell_polygon(cell: &MixedCell) -> Result<Vec<Point>> {
    if cell.parts.iter().flatten().any(|&c| !(1..=3).contains(&c)) {
        return Err(Error::UnsupportedDimension("planar polygons need columns in 1..=3".into()));
    }
    let mut sum = vec![(0, 0)];
    for part in &cell.parts {
        let points = sum
            .iter()
            .flat_map(|&(x, y)| part.iter().map(move |&c| (x + lattice_point(c).0, y + lattice_point(c).1)))
            .collect();
        sum = convex_hull(points);
    }
    Ok(sum)
}

/// Twice the signed area (shoelace formula).
pub fn doubled_area(polygon: &[Point]) -> i64 {
    (0..polygon.len())
        .map(|k| {
            let (a, b) = (polygon[k], polygon[(k + 1) % polygon.len()]);
            a.0 * b.1 - a.1 * b.0
        })
        .sum()
}

/// Whether two convex polygons share interior points. By the separating axis
/// theorem they do not exactly when some edge normal of either polygon
/// separates their projections (touching allowed).
pub fn interiors_overlap(p: &[Point], q: &[Point]) -> bool {
    let separated_by = |poly: &[Point]| {
        (0..poly.len()).any(|k| {
            let (a, b) = (poly[k], poly[(k + 1) % poly.len()]);
            let normal = (b.1 - a.1, a.0 - b.0);
            let project = |pts: &[Point]| {
                let dots = pts.iter().map(|&(x, y)| x * normal.0 + y * normal.1);
                (dots.clone().min().unwrap_or(0), dots.max().unwrap_or(0))
            };
            let (p_lo, p_hi) = project(p);
            let (q_lo, q_hi) = project(q);
            p_hi <= q_lo || q_hi <= p_lo
        })
    };
    !(separated_by(p) || separated_by(q))
}

/// The interval `s_1 + ⋯ + s_m ⊂ [0, m]` of a cell with `n = 2`, measured
/// from `e_1`.
pub fn cell_interval(cell: &MixedCell) -> (usize, usize) {
    cell.parts.iter().fold((0, 0), |(lo, hi), part| {
        let min = part.iter().copied().min().unwrap_or(1) - 1;
        let max = part.iter().copied().max().unwrap_or(1) - 1;
        (lo + min, hi + max)
    })
}

const CELL_PALETTE: [&str; 8] =
    ["#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462", "#b3de69", "#fccde5"];
const UNIT: f64 = 60.0;
const MARGIN: f64 = 20.0;

/// SVG drawing of the mixed subdivision of `mΔ_{n−1}`: triangles for
/// `n = 3`, a split segment for `n = 2`, a point for `n = 1`.
pub fn render_mixed_svg(t: &Triangulation) -> Result<String> {
    let n = t.support.cols.len();
    if n > 3 {
        return Err(Error::UnsupportedDimension(format!(
            "mixed subdivisions can be drawn for at most 3 columns, got {n}"
        )));
    }
    if t.support.cols.iter().enumerate().any(|(k, &c)| c != k + 1) {
        return Err(Error::UnsupportedDimension("drawing needs columns numbered from 1".into()));
    }
    let m = t.support.rows.len() as f64;
    let cells = cayley_cells(t);
    let (width, height) = match n {
        3 => (m * UNIT + 2.0 * MARGIN, m * UNIT * 3f64.sqrt() / 2.0 + 2.0 * MARGIN),
        2 => (m * UNIT + 2.0 * MARGIN, 40.0 + 2.0 * MARGIN),
        _ => (2.0 * MARGIN, 2.0 * MARGIN),
    };
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.1}" height="{height:.1}">"#
    );
    for (k, cell) in cells.iter().enumerate() {
        let fill = CELL_PALETTE[k % CELL_PALETTE.len()];
        match n {
            3 => {
                // Shear the lattice so that mΔ_2 is drawn equilateral.
                let points: Vec<String> = cell_polygon(cell)?
                    .iter()
                    .map(|&(x, y)| {
                        let sx = MARGIN + UNIT * (x as f64 + y as f64 / 2.0);
                        let sy = height - MARGIN - UNIT * y as f64 * 3f64.sqrt() / 2.0;
                        format!("{sx:.2},{sy:.2}")
                    })
                    .collect();
                let _ = writeln!(
                    svg,
                    r#"  <polygon points="{}" fill="{fill}" stroke="black" stroke-width="1"/>"#,
                    points.join(" ")
                );
            }
            2 => {
                let (lo, hi) = cell_interval(cell);
                let _ = writeln!(
                    svg,
                    r#"  <rect x="{:.2}" y="{MARGIN:.2}" width="{:.2}" height="40.00" fill="{fill}" stroke="black" stroke-width="1"/>"#,
                    MARGIN + UNIT * lo as f64,
                    UNIT * (hi - lo) as f64
                );
            }
            _ => {
                let _ = writeln!(svg, r#"  <circle cx="{MARGIN:.2}" cy="{MARGIN:.2}" r="3" fill="{fill}"/>"#);
            }
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
