//! Vertices, simplices and triangulations of a product of two simplices.
//!
//! A vertex `(e_i, e_j)` of `Δ_{m-1} × Δ_{n-1}` is an edge `(i, j̄)` of the
//! complete bipartite graph `K_{m,n}`; a simplex is an edge set, and it is
//! full-dimensional exactly when that edge set is a spanning tree. All indices
//! are 1-based. `row` is the index `i` of the first factor (the horizontal
//! grid coordinate), `col` is the index `j̄` of the second factor.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "[usize; 2]", into = "[usize; 2]")]
pub struct Vertex {
    pub row: usize,
    pub col: usize,
}

impl Vertex {
    pub const fn new(row: usize, col: usize) -> Self {
        Vertex { row, col }
    }
}

impl From<[usize; 2]> for Vertex {
    fn from([row, col]: [usize; 2]) -> Self {
        Vertex { row, col }
    }
}

impl From<Vertex> for [usize; 2] {
    fn from(v: Vertex) -> Self {
        [v.row, v.col]
    }
}

impl From<(usize, usize)> for Vertex {
    fn from((row, col): (usize, usize)) -> Self {
        Vertex { row, col }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{}')", self.row, self.col)
    }
}

/// The face `Δ_I × Δ_J` of `Δ_{m-1} × Δ_{n-1}` a triangulation lives on.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSupport")]
pub struct Support {
    pub m: usize,
    pub n: usize,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

#[derive(Deserialize)]
struct RawSupport {
    m: usize,
    n: usize,
    #[serde(default)]
    rows: Option<Vec<usize>>,
    #[serde(default)]
    cols: Option<Vec<usize>>,
}

impl TryFrom<RawSupport> for Support {
    type Error = Error;

    fn try_from(raw: RawSupport) -> Result<Self> {
        let rows = raw.rows.unwrap_or_else(|| (1..=raw.m).collect());
        let cols = raw.cols.unwrap_or_else(|| (1..=raw.n).collect());
        Support::new(raw.m, raw.n, rows, cols)
    }
}

impl Support {
    pub fn full(m: usize, n: usize) -> Self {
        Support { m, n, rows: (1..=m).collect(), cols: (1..=n).collect() }
    }

    /// Builds the face support `rows × cols` inside the ambient `m × n` grid.
    /// Index lists are sorted and deduplicated.
    pub fn new(m: usize, n: usize, mut rows: Vec<usize>, mut cols: Vec<usize>) -> Result<Self> {
        rows.sort_unstable();
        rows.dedup();
        cols.sort_unstable();
        cols.dedup();
        if rows.is_empty() || cols.is_empty() {
            return domain("face support needs at least one row and one column");
        }
        if rows[0] == 0 || *rows.last().unwrap() > m {
            return domain(format!("row indices {rows:?} outside [1..{m}]"));
        }
        if cols[0] == 0 || *cols.last().unwrap() > n {
            return domain(format!("column indices {cols:?} outside [1..{n}]"));
        }
        Ok(Support { m, n, rows, cols })
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.m && self.cols.len() == self.n
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.rows.binary_search(&v.row).is_ok() && self.cols.binary_search(&v.col).is_ok()
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v.row == 0 || v.row > self.m || v.col == 0 || v.col > self.n {
            return Err(Error::IndexOutOfRange { vertex: v, m: self.m, n: self.n });
        }
        Ok(())
    }

    /// Number of edges of a spanning tree of `K_{rows,cols}`.
    pub fn tree_size(&self) -> usize {
        self.rows.len() + self.cols.len() - 1
    }

    /// Normalized volume of the face: `binom(|I| + |J| - 2, |J| - 1)`.
    pub fn volume(&self) -> u128 {
        binomial(self.rows.len() + self.cols.len() - 2, self.cols.len() - 1)
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.rows.iter().flat_map(move |&r| self.cols.iter().map(move |&c| Vertex::new(r, c)))
    }
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// A set of vertices, kept as a sorted edge list so that equality is
/// canonical-form equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<Vertex>")]
pub struct Simplex(Vec<Vertex>);

impl From<Vec<Vertex>> for Simplex {
    fn from(mut edges: Vec<Vertex>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        Simplex(edges)
    }
}

impl FromIterator<Vertex> for Simplex {
    fn from_iter<T: IntoIterator<Item = Vertex>>(iter: T) -> Self {
        Simplex::from(iter.into_iter().collect::<Vec<_>>())
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_edges(f, &self.0)
    }
}

pub(crate) fn write_edges(f: &mut fmt::Formatter<'_>, edges: &[Vertex]) -> fmt::Result {
    f.write_str("{")?;
    for (k, v) in edges.iter().enumerate() {
        if k > 0 {
            f.write_str(",")?;
        }
        write!(f, "{v}")?;
    }
    f.write_str("}")
}

impl Simplex {
    pub fn new(edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        edges.into_iter().map(Vertex::from).collect()
    }

    pub fn edges(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn without(&self, v: Vertex) -> Simplex {
        Simplex(self.0.iter().copied().filter(|&e| e != v).collect())
    }

    /// Edges lying in the face `rows × cols`.
    pub fn intersect_face(&self, rows: &[usize], cols: &[usize]) -> Simplex {
        Simplex(
            self.0
                .iter()
                .copied()
                .filter(|v| rows.binary_search(&v.row).is_ok() && cols.binary_search(&v.col).is_ok())
                .collect(),
        )
    }

    /// True iff the edges form a spanning tree of `K_{rows,cols}`.
    pub fn is_spanning_tree(&self, support: &Support) -> Result<bool> {
        for &v in &self.0 {
            support.check_vertex(v)?;
        }
        if self.0.len() != support.tree_size() || !self.0.iter().all(|&v| support.contains(v)) {
            return Ok(false);
        }
        Ok(is_forest(&self.0))
    }
}

/// Acyclicity test on a bipartite edge list (union-find over rows and columns).
pub(crate) fn is_forest(edges: &[Vertex]) -> bool {
    let max_row = edges.iter().map(|v| v.row).max().unwrap_or(0);
    let max_col = edges.iter().map(|v| v.col).max().unwrap_or(0);
    let mut dsu = Dsu::new(max_row + max_col + 2);
    edges.iter().all(|v| dsu.union(v.row, max_row + 1 + v.col))
}

#[derive(Clone)]
pub(crate) struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub(crate) fn new(size: usize) -> Self {
        Dsu { parent: (0..size).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already connected.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// A circuit of the product: an alternating cycle of `K_{m,n}` whose two
/// colour classes are the positive and negative parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Circuit {
    pub plus: Vec<Vertex>,
    pub minus: Vec<Vertex>,
}

impl Circuit {
    /// Validates that `plus ∪ minus` is a single cycle along which the two
    /// classes alternate.
    pub fn new(plus: Vec<Vertex>, minus: Vec<Vertex>) -> Result<Self> {
        let plus = Simplex::from(plus).0;
        let minus = Simplex::from(minus).0;
        if plus.len() != minus.len() || plus.len() < 2 {
            return domain("circuit parts must have equal size at least 2");
        }
        if plus.iter().any(|v| minus.contains(v)) {
            return domain("circuit parts must be disjoint");
        }
        // Alternation: every endpoint meets exactly one edge of each class.
        for part in [&plus, &minus] {
            let rows: BTreeSet<_> = part.iter().map(|v| v.row).collect();
            let cols: BTreeSet<_> = part.iter().map(|v| v.col).collect();
            if rows.len() != part.len() || cols.len() != part.len() {
                return domain("circuit parts must be matchings");
            }
        }
        let rows: BTreeSet<_> = plus.iter().map(|v| v.row).collect();
        let cols: BTreeSet<_> = plus.iter().map(|v| v.col).collect();
        if minus.iter().any(|v| !rows.contains(&v.row) || !cols.contains(&v.col)) {
            return domain("circuit parts must share their endpoints");
        }
        let mut all = plus.clone();
        all.extend_from_slice(&minus);
        let max_row = *rows.last().unwrap();
        let mut dsu = Dsu::new(max_row + cols.last().unwrap() + 2);
        for v in &all {
            dsu.union(v.row, max_row + 1 + v.col);
        }
        let root = dsu.find(plus[0].row);
        if all.iter().any(|v| dsu.find(v.row) != root) {
            return domain("circuit must be a single cycle");
        }
        Ok(Circuit { plus, minus })
    }

    pub fn vertices(&self) -> Simplex {
        self.plus.iter().chain(&self.minus).copied().collect()
    }

    pub fn rows(&self) -> Vec<usize> {
        let mut r: Vec<_> = self.plus.iter().map(|v| v.row).collect();
        r.sort_unstable();
        r
    }

    pub fn cols(&self) -> Vec<usize> {
        let mut c: Vec<_> = self.plus.iter().map(|v| v.col).collect();
        c.sort_unstable();
        c
    }

    pub fn reversed(&self) -> Circuit {
        Circuit { plus: self.minus.clone(), minus: self.plus.clone() }
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("+")?;
        write_edges(f, &self.plus)?;
        f.write_str(" -")?;
        write_edges(f, &self.minus)
    }
}

/// Finds a cycle in `s1 ∪ s2` alternating between edges of `s1` (the
/// positive part) and edges of `s2` (the negative part).
///
/// Orient `s1` edges row → column and `s2` edges column → row. Alternating
/// cycles are exactly the simple directed cycles of length at least 4. Such a
/// cycle must use an arc whose reverse is absent, so it suffices to search,
/// for every such arc `u → v`, a directed path `v ⇝ u`.
pub fn alternating_circuit(s1: &Simplex, s2: &Simplex) -> Option<Circuit> {
    let max_row = s1.0.iter().chain(&s2.0).map(|v| v.row).max()?;
    let max_col = s1.0.iter().chain(&s2.0).map(|v| v.col).max()?;
    let node_count = max_row + max_col + 2;
    let row_node = |r: usize| r;
    let col_node = |c: usize| max_row + 1 + c;
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); node_count];
    for v in &s1.0 {
        out[row_node(v.row)].push(col_node(v.col));
    }
    for v in &s2.0 {
        out[col_node(v.col)].push(row_node(v.row));
    }
    let decode = |a: usize, b: usize| -> Vertex {
        if a <= max_row {
            Vertex::new(a, b - max_row - 1)
        } else {
            Vertex::new(b, a - max_row - 1)
        }
    };

    let unpaired =
        s1.0.iter()
            .filter(|v| !s2.contains(**v))
            .map(|v| (row_node(v.row), col_node(v.col)))
            .chain(s2.0.iter().filter(|v| !s1.contains(**v)).map(|v| (col_node(v.col), row_node(v.row))));

    let mut prev = vec![usize::MAX; node_count];
    for (from, to) in unpaired {
        prev.iter_mut().for_each(|p| *p = usize::MAX);
        prev[to] = to;
        let mut queue = VecDeque::from([to]);
        while let Some(x) = queue.pop_front() {
            if x == from {
                break;
            }
            for &y in &out[x] {
                if prev[y] == usize::MAX {
                    prev[y] = x;
                    queue.push_back(y);
                }
            }
        }
        if prev[from] == usize::MAX {
            continue;
        }
        let mut arcs = vec![(from, to)];
        let mut x = from;
        while x != to {
            arcs.push((prev[x], x));
            x = prev[x];
        }
        let (mut plus, mut minus) = (Vec::new(), Vec::new());
        for (a, b) in arcs {
            if a <= max_row {
                plus.push(decode(a, b));
            } else {
                minus.push(decode(a, b));
            }
        }
        plus.sort_unstable();
        minus.sort_unstable();
        return Some(Circuit { plus, minus });
    }
    None
}

/// Applies the cyclic index shift `(i, j̄) ↦ (i + ℓ, j̄ + ℓ)` (mod `k`,
/// representatives in `[1..k]`) on a support whose non-fixed rows and whose
/// columns are both `[1..k]`. Rows listed in `fixed_rows` are left in place.
pub fn cyclic_shift(s: &Simplex, support: &Support, shift: i64, fixed_rows: &[usize]) -> Result<Simplex> {
    let k = support.cols.len();
    let square: Vec<usize> = (1..=k).collect();
    let free_rows: Vec<usize> = support.rows.iter().copied().filter(|r| !fixed_rows.contains(r)).collect();
    if support.cols != square || free_rows != square {
        return domain(format!(
            "cyclic shift needs square support [1..{k}] x [1..{k}] (plus fixed rows), got rows {:?} cols {:?} fixed {:?}",
            support.rows, support.cols, fixed_rows
        ));
    }
    let wrap = |x: usize| ((x as i64 - 1 + shift).rem_euclid(k as i64) + 1) as usize;
    s.0.iter()
        .map(|&v| {
            support.check_vertex(v)?;
            if !support.contains(v) {
                return domain(format!("vertex {v} outside the shifted support"));
            }
            let row = if fixed_rows.contains(&v.row) { v.row } else { wrap(v.row) };
            Ok(Vertex::new(row, wrap(v.col)))
        })
        .collect()
}

/// The maximal simplices of a triangulation of the face `rows × cols`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawTriangulation")]
pub struct Triangulation {
    #[serde(flatten)]
    pub support: Support,
    pub simplices: BTreeSet<Simplex>,
}

#[derive(Deserialize)]
struct RawTriangulation {
    #[serde(flatten)]
    support: Support,
    simplices: Vec<Simplex>,
}

impl TryFrom<RawTriangulation> for Triangulation {
    type Error = Error;

    fn try_from(raw: RawTriangulation) -> Result<Self> {
        Triangulation::new(raw.support, raw.simplices)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub count: usize,
    pub expected_count: u128,
    /// Simplices that are not spanning trees of the face.
    pub non_trees: Vec<Simplex>,
    /// First pair (in canonical order) that does not intersect properly.
    pub crossing: Option<(Simplex, Simplex, Circuit)>,
}

impl VerificationReport {
    pub fn is_triangulation(&self) -> bool {
        self.non_trees.is_empty() && self.count as u128 == self.expected_count && self.crossing.is_none()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.is_triangulation() { "ok" } else { "FAILED" };
        writeln!(f, "triangulation check: {verdict}")?;
        writeln!(f, "  simplices: {} (expected {})", self.count, self.expected_count)?;
        for s in &self.non_trees {
            writeln!(f, "  not a spanning tree: {s}")?;
        }
        if let Some((a, b, c)) = &self.crossing {
            writeln!(f, "  improper intersection: {a} and {b} via circuit {c}")?;
        }
        Ok(())
    }
}

impl Triangulation {
    pub fn new(support: Support, simplices: impl IntoIterator<Item = Simplex>) -> Result<Self> {
        let simplices: BTreeSet<Simplex> = simplices.into_iter().collect();
        for s in &simplices {
            for &v in s.edges() {
                support.check_vertex(v)?;
                if !support.contains(v) {
                    return domain(format!("vertex {v} lies outside the face support"));
                }
            }
        }
        Ok(Triangulation { support, simplices })
    }

    pub fn m(&self) -> usize {
        self.support.m
    }

    pub fn n(&self) -> usize {
        self.support.n
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.simplices.contains(s)
    }

    /// Certifies a triangulation by counting: unimodular simplices, pairwise
    /// proper intersection and total normalized volume.
    pub fn verify(&self) -> VerificationReport {
        let non_trees =
            self.simplices.iter().filter(|s| !s.is_spanning_tree(&self.support).unwrap_or(false)).cloned().collect();
        let list: Vec<&Simplex> = self.simplices.iter().collect();
        let crossing = list.iter().enumerate().find_map(|(a, s1)| {
            list[a + 1..].iter().find_map(|s2| alternating_circuit(s1, s2).map(|c| ((*s1).clone(), (*s2).clone(), c)))
        });
        VerificationReport { count: self.simplices.len(), expected_count: self.support.volume(), non_trees, crossing }
    }

    /// Restriction to the face `rows × cols`: the intersections `s ∩ face`
    /// that are spanning trees of the face.
    pub fn restrict(&self, rows: &[usize], cols: &[usize]) -> Result<Triangulation> {
        let face = Support::new(self.support.m, self.support.n, rows.to_vec(), cols.to_vec())?;
        if !face.rows.iter().all(|r| self.support.rows.contains(r))
            || !face.cols.iter().all(|c| self.support.cols.contains(c))
        {
            return domain(format!("face rows {:?} cols {:?} is not contained in the support", face.rows, face.cols));
        }
        let target = face.tree_size();
        let simplices: BTreeSet<Simplex> = self
            .simplices
            .iter()
            .map(|s| s.intersect_face(&face.rows, &face.cols))
            .filter(|s| s.len() == target && is_forest(s.edges()))
            .collect();
        Ok(Triangulation { support: face, simplices })
    }

    /// Renames indices through `row_map` and `col_map` into a new ambient
    /// `m × n` grid. Both maps must be injective on the support.
    pub fn relabel(
        &self,
        m: usize,
        n: usize,
        row_map: impl Fn(usize) -> usize,
        col_map: impl Fn(usize) -> usize,
    ) -> Result<Triangulation> {
        let rows: Vec<usize> = self.support.rows.iter().map(|&r| row_map(r)).collect();
        let cols: Vec<usize> = self.support.cols.iter().map(|&c| col_map(c)).collect();
        let support = Support::new(m, n, rows, cols)?;
        if support.rows.len() != self.support.rows.len() || support.cols.len() != self.support.cols.len() {
            return domain("relabelling maps must be injective");
        }
        let simplices = self
            .simplices
            .iter()
            .map(|s| s.edges().iter().map(|v| Vertex::new(row_map(v.row), col_map(v.col))).collect());
        Triangulation::new(support, simplices)
    }

    /// Same simplices, viewed inside a larger ambient grid.
    pub fn embed(&self, m: usize, n: usize) -> Result<Triangulation> {
        self.relabel(m, n, |r| r, |c| c)
    }
}
