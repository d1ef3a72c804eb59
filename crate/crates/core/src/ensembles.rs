//! Matching ensembles: one perfect matching per support pair `(I, J̄)`,
//! subject to the supports, closure and linkage axioms. A family of matchings
//! is the matching family of a triangulation exactly when it satisfies them,
//! and a spanning tree is a cell of that triangulation exactly when every
//! perfect matching it contains belongs to the family.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::simplex::{write_edges, Dsu, Simplex, Support, Triangulation, Vertex};

/// A support pair `(I, J̄)` with `|I| = |J̄|`. Ordered by size, then
/// lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SupportKey {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl SupportKey {
    pub fn new(mut rows: Vec<usize>, mut cols: Vec<usize>) -> Self {
        rows.sort_unstable();
        cols.sort_unstable();
        SupportKey { rows, cols }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

impl Ord for SupportKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rows
            .len()
            .cmp(&other.rows.len())
            .then_with(|| self.rows.cmp(&other.rows))
            .then_with(|| self.cols.cmp(&other.cols))
    }
}

impl PartialOrd for SupportKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SupportKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.rows.iter().map(|r| r.to_string()).collect();
        let cols: Vec<String> = self.cols.iter().map(|c| format!("{c}'")).collect();
        write!(f, "{{{}}}x{{{}}}", rows.join(","), cols.join(","))
    }
}

/// A perfect matching between its row support and column support, stored
/// sorted by row.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Matching(Vec<Vertex>);

impl Matching {
    pub fn new(edges: impl IntoIterator<Item = Vertex>) -> Result<Self> {
        let mut edges: Vec<Vertex> = edges.into_iter().collect();
        edges.sort_unstable();
        let mut rows: Vec<usize> = edges.iter().map(|v| v.row).collect();
        let mut cols: Vec<usize> = edges.iter().map(|v| v.col).collect();
        rows.dedup();
        cols.sort_unstable();
        cols.dedup();
        if rows.len() != edges.len() || cols.len() != edges.len() {
            return domain(format!("edges {edges:?} do not form a matching"));
        }
        Ok(Matching(edges))
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Matching::new(pairs.into_iter().map(Vertex::from))
    }

    /// Builds from edges already known to be pairwise disjoint.
    pub(crate) fn from_disjoint(mut edges: Vec<Vertex>) -> Self {
        edges.sort_unstable();
        Matching(edges)
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

    pub fn support(&self) -> SupportKey {
        SupportKey::new(self.0.iter().map(|v| v.row).collect(), self.0.iter().map(|v| v.col).collect())
    }

    /// Replaces edge `old` by `new`.
    pub fn exchange(&self, old: Vertex, new: Vertex) -> Matching {
        Matching::from_disjoint(self.0.iter().map(|&e| if e == old { new } else { e }).collect())
    }
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_edges(f, &self.0)
    }
}

/// An element of `[m] ∪ [n̄]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Element {
    Row(usize),
    Col(usize),
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Row(r) => write!(f, "{r}"),
            Element::Col(c) => write!(f, "{c}'"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingEnsemble {
    pub support: Support,
    pub table: BTreeMap<SupportKey, Matching>,
}

#[derive(Serialize, Deserialize)]
struct RawEntry {
    #[serde(rename = "I")]
    rows: Vec<usize>,
    #[serde(rename = "J")]
    cols: Vec<usize>,
    edges: Vec<Vertex>,
}

#[derive(Serialize, Deserialize)]
struct RawEnsemble {
    m: usize,
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rows: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cols: Option<Vec<usize>>,
    matchings: Vec<RawEntry>,
}

impl Serialize for MatchingEnsemble {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let full = self.support.is_full();
        RawEnsemble {
            m: self.support.m,
            n: self.support.n,
            rows: (!full).then(|| self.support.rows.clone()),
            cols: (!full).then(|| self.support.cols.clone()),
            matchings: self
                .table
                .iter()
                .map(|(k, v)| RawEntry { rows: k.rows.clone(), cols: k.cols.clone(), edges: v.0.clone() })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MatchingEnsemble {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RawEnsemble::deserialize(deserializer)?;
        let support = Support::new(
            raw.m,
            raw.n,
            raw.rows.unwrap_or_else(|| (1..=raw.m).collect()),
            raw.cols.unwrap_or_else(|| (1..=raw.n).collect()),
        )
        .map_err(D::Error::custom)?;
        let mut e = MatchingEnsemble::empty(support);
        for entry in raw.matchings {
            let matching = Matching::new(entry.edges).map_err(D::Error::custom)?;
            let key = SupportKey::new(entry.rows, entry.cols);
            if matching.support() != key {
                return Err(D::Error::custom(format!("matching {matching} is not supported on {key}")));
            }
            e.insert(matching).map_err(D::Error::custom)?;
        }
        Ok(e)
    }
}

impl MatchingEnsemble {
    pub fn empty(support: Support) -> Self {
        MatchingEnsemble { support, table: BTreeMap::new() }
    }

    pub fn get(&self, key: &SupportKey) -> Option<&Matching> {
        self.table.get(key)
    }

    pub fn contains(&self, m: &Matching) -> bool {
        self.table.get(&m.support()).is_some_and(|x| x == m)
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Adds a matching; a different matching on the same support is an error.
    pub fn insert(&mut self, matching: Matching) -> Result<()> {
        for &v in matching.edges() {
            self.support.check_vertex(v)?;
            if !self.support.contains(v) {
                return domain(format!("matching edge {v} outside the ensemble support"));
            }
        }
        let key = matching.support();
        match self.table.get(&key) {
            Some(existing) if *existing != matching => {
                Err(Error::SupportConflict { support: key, first: existing.clone(), second: matching })
            }
            Some(_) => Ok(()),
            None => {
                self.table.insert(key, matching);
                Ok(())
            }
        }
    }

    /// Adds every perfect matching contained in `edges`.
    pub fn absorb(&mut self, edges: &[Vertex]) -> Result<()> {
        let mut found = Vec::new();
        for_each_matching(edges, &mut Vec::new(), &mut |m| found.push(Matching::from_disjoint(m.to_vec())));
        found.into_iter().try_for_each(|m| self.insert(m))
    }

    /// Entries whose support lies inside `rows × cols`.
    pub fn restrict(&self, rows: &[usize], cols: &[usize]) -> Result<MatchingEnsemble> {
        let support = Support::new(self.support.m, self.support.n, rows.to_vec(), cols.to_vec())?;
        let table = self
            .table
            .iter()
            .filter(|(k, _)| {
                k.rows.iter().all(|r| support.rows.contains(r)) && k.cols.iter().all(|c| support.cols.contains(c))
            })
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        Ok(MatchingEnsemble { support, table })
    }
}

/// Calls `f` on every nonempty matching contained in `edges`.
pub(crate) fn for_each_matching(edges: &[Vertex], acc: &mut Vec<Vertex>, f: &mut impl FnMut(&[Vertex])) {
    let Some((&first, rest)) = edges.split_first() else {
        return;
    };
    for_each_matching(rest, acc, f);
    if acc.iter().all(|e| e.row != first.row && e.col != first.col) {
        acc.push(first);
        f(acc);
        for_each_matching(rest, acc, f);
        acc.pop();
    }
}

/// All `k`-element subsets of `items`, in lexicographic order.
pub fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn go(items: &[usize], k: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if acc.len() == k {
            out.push(acc.clone());
            return;
        }
        for (idx, &x) in items.iter().enumerate() {
            if items.len() - idx < k - acc.len() {
                break;
            }
            acc.push(x);
            go(&items[idx + 1..], k, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(items, k, &mut Vec::new(), &mut out);
    out
}

/// Every support pair `(I, J̄)` of the face with `1 ≤ |I| = |J̄|`, in support order.
pub fn support_pairs(support: &Support) -> Vec<SupportKey> {
    let top = support.rows.len().min(support.cols.len());
    let mut out = Vec::new();
    for s in 1..=top {
        let row_sets = subsets(&support.rows, s);
        let col_sets = subsets(&support.cols, s);
        for rows in &row_sets {
            for cols in &col_sets {
                out.push(SupportKey { rows: rows.clone(), cols: cols.clone() });
            }
        }
    }
    out
}

/// All perfect matchings on `K_{I,J̄}`.
pub fn all_matchings(key: &SupportKey) -> Vec<Matching> {
    fn permute(cols: &mut Vec<usize>, k: usize, rows: &[usize], out: &mut Vec<Matching>) {
        if k == cols.len() {
            out.push(Matching(rows.iter().zip(cols.iter()).map(|(&r, &c)| Vertex::new(r, c)).collect()));
            return;
        }
        for i in k..cols.len() {
            cols.swap(k, i);
            permute(cols, k + 1, rows, out);
            cols.swap(k, i);
        }
    }
    let mut out = Vec::new();
    permute(&mut key.cols.clone(), 0, &key.rows, &mut out);
    out
}

/// The matching ensemble of a triangulation: every perfect matching
/// contained in one of its simplices.
pub fn ensemble_from_triangulation(t: &Triangulation) -> Result<MatchingEnsemble> {
    let mut e = MatchingEnsemble::empty(t.support.clone());
    for s in &t.simplices {
        e.absorb(s.edges())?;
    }
    Ok(e)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SaFailure {
    Uncovered(SupportKey),
    Misplaced { key: SupportKey, matching: Matching },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaFailure {
    pub matching: Matching,
    pub missing: Matching,
    pub present: Option<Matching>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaFailure {
    pub matching: Matching,
    pub vertex: Element,
    /// Every single-edge exchange that would have satisfied the axiom, with
    /// what the ensemble actually holds on the target support.
    pub exchanges: Vec<(Matching, Option<Matching>)>,
}

/// Pass/fail per axiom, each failure with its first witness in support order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub supports: usize,
    pub sa: Option<SaFailure>,
    pub ca: Option<CaFailure>,
    pub la: Option<LaFailure>,
}

impl AxiomReport {
    pub fn passes(&self) -> bool {
        self.sa.is_none() && self.ca.is_none() && self.la.is_none()
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = |ok: bool| if ok { "pass" } else { "FAIL" };
        writeln!(f, "supports axiom (SA): {}", mark(self.sa.is_none()))?;
        match &self.sa {
            Some(SaFailure::Uncovered(k)) => writeln!(f, "  no matching on {k}")?,
            Some(SaFailure::Misplaced { key, matching }) => writeln!(f, "  entry {key} holds {matching}")?,
            None => {}
        }
        writeln!(f, "closure axiom (CA): {}", mark(self.ca.is_none()))?;
        if let Some(ca) = &self.ca {
            write!(f, "  {} contains {} but the ensemble holds ", ca.matching, ca.missing)?;
            match &ca.present {
                Some(p) => writeln!(f, "{p}")?,
                None => writeln!(f, "nothing")?,
            }
        }
        writeln!(f, "linkage axiom (LA): {}", mark(self.la.is_none()))?;
        if let Some(la) = &self.la {
            writeln!(f, "  no exchange of {} reaches vertex {}", la.matching, la.vertex)?;
            for (wanted, present) in &la.exchanges {
                write!(f, "    wanted {wanted}, ensemble holds ")?;
                match present {
                    Some(p) => writeln!(f, "{p}")?,
                    None => writeln!(f, "nothing")?,
                }
            }
        }
        Ok(())
    }
}

/// Single-edge exchanges of `m` that bring `v` into the support.
fn exchanges(m: &Matching, v: Element) -> Vec<Matching> {
    m.edges()
        .iter()
        .map(|&e| match v {
            Element::Row(r) => m.exchange(e, Vertex::new(r, e.col)),
            Element::Col(c) => m.exchange(e, Vertex::new(e.row, c)),
        })
        .collect()
}

pub fn check_axioms(e: &MatchingEnsemble) -> AxiomReport {
    let mut report = AxiomReport { supports: e.table.len(), ..Default::default() };

    for (key, m) in &e.table {
        if m.support() != *key || !key.rows.iter().all(|r| e.support.rows.contains(r)) {
            report.sa = Some(SaFailure::Misplaced { key: key.clone(), matching: m.clone() });
            break;
        }
    }
    if report.sa.is_none() {
        report.sa = support_pairs(&e.support).into_iter().find(|k| !e.table.contains_key(k)).map(SaFailure::Uncovered);
    }

    'ca: for m in e.table.values() {
        let k = m.len();
        for mask in 1u64..(1u64 << k) - 1 {
            let sub = Matching((0..k).filter(|b| mask >> b & 1 == 1).map(|b| m.0[b]).collect());
            let present = e.table.get(&sub.support());
            if present != Some(&sub) {
                report.ca = Some(CaFailure { matching: m.clone(), missing: sub, present: present.cloned() });
                break 'ca;
            }
        }
    }

    'la: for (key, m) in &e.table {
        let outside = e
            .support
            .rows
            .iter()
            .filter(|r| !key.rows.contains(r))
            .map(|&r| Element::Row(r))
            .chain(e.support.cols.iter().filter(|c| !key.cols.contains(c)).map(|&c| Element::Col(c)));
        for v in outside {
            let candidates = exchanges(m, v);
            if !candidates.iter().any(|x| e.contains(x)) {
                let exchanges = candidates
                    .into_iter()
                    .map(|x| {
                        let present = e.table.get(&x.support()).cloned();
                        (x, present)
                    })
                    .collect();
                report.la = Some(LaFailure { matching: m.clone(), vertex: v, exchanges });
                break 'la;
            }
        }
    }
    report
}

/// Spanning trees of the ensemble's face all of whose perfect matchings lie
/// in the ensemble. Backtracks over edges in lexicographic order, abandoning
/// a partial forest as soon as it contains a foreign matching.
pub fn compatible_trees(e: &MatchingEnsemble) -> Vec<Simplex> {
    struct Search<'a> {
        e: &'a MatchingEnsemble,
        edges: Vec<Vertex>,
        target: usize,
        col_offset: usize,
        chosen: Vec<Vertex>,
        out: Vec<Simplex>,
    }

    impl Search<'_> {
        fn matchings_ok(&self, edge: Vertex) -> bool {
            let others: Vec<Vertex> =
                self.chosen.iter().copied().filter(|v| v.row != edge.row && v.col != edge.col).collect();
            if !self.e.contains(&Matching(vec![edge])) {
                return false;
            }
            let mut ok = true;
            for_each_matching(&others, &mut Vec::new(), &mut |m| {
                if ok {
                    let mut edges = m.to_vec();
                    edges.push(edge);
                    ok = self.e.contains(&Matching::from_disjoint(edges));
                }
            });
            ok
        }

        fn go(&mut self, k: usize, dsu: &Dsu) {
            if self.chosen.len() == self.target {
                self.out.push(self.chosen.iter().copied().collect());
                return;
            }
            if k == self.edges.len() || self.chosen.len() + (self.edges.len() - k) < self.target {
                return;
            }
            // Leaving a row without any edge can never become spanning.
            if k > 0 && self.edges[k].row != self.edges[k - 1].row {
                let prev = self.edges[k - 1].row;
                if !self.chosen.iter().any(|v| v.row == prev) {
                    return;
                }
            }
            let edge = self.edges[k];
            let mut next = dsu.clone();
            if next.union(edge.row, self.col_offset + edge.col) && self.matchings_ok(edge) {
                self.chosen.push(edge);
                self.go(k + 1, &next);
                self.chosen.pop();
            }
            self.go(k + 1, dsu);
        }
    }

    let col_offset = e.support.m + 1;
    let mut search = Search {
        e,
        edges: e.support.vertices().collect(),
        target: e.support.tree_size(),
        col_offset,
        chosen: Vec::new(),
        out: Vec::new(),
    };
    let dsu = Dsu::new(col_offset + e.support.n + 1);
    search.go(0, &dsu);
    search.out
}

/// Reconstructs the triangulation of a matching ensemble.
pub fn triangulation_from_ensemble(e: &MatchingEnsemble) -> Result<Triangulation> {
    let report = check_axioms(e);
    if !report.passes() {
        return Err(Error::AxiomFailure(Box::new(report)));
    }
    Triangulation::new(e.support.clone(), compatible_trees(e))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Token {
    Row(usize),
    Col(usize),
}

impl Token {
    // `i ≺ j̄` whenever `i ≤ j̄`.
    fn key(self) -> (usize, u8) {
        match self {
            Token::Row(i) => (i, 0),
            Token::Col(j) => (j, 1),
        }
    }
}

/// Merges `I ∪ J̄` in the order `≺`, rotates it cyclically so that every
/// proper prefix has at least as many rows as columns (then every final
/// substring has at least as many columns, strictly more when `strict`), and
/// pairs the k-th row with the k-th column. Returns the pairs and, in the
/// strict case, the unpaired last column.
fn rotation_pairs(rows: &[usize], cols: &[usize]) -> (Vec<Vertex>, Option<usize>) {
    let mut tokens: Vec<Token> =
        rows.iter().map(|&i| Token::Row(i)).chain(cols.iter().map(|&j| Token::Col(j))).collect();
    tokens.sort_by_key(|t| t.key());
    let strict = cols.len() > rows.len();
    let len = tokens.len();
    if len > 0 {
        let mut prefix = vec![0i64; len + 1];
        for (idx, t) in tokens.iter().enumerate() {
            prefix[idx + 1] = prefix[idx] + if matches!(t, Token::Row(_)) { 1 } else { -1 };
        }
        // Start right after the first minimum of the prefix heights, over
        // positions [0, len) in the balanced case and [1, len] in the strict one.
        let range = if strict { 1..=len } else { 0..=len - 1 };
        let start = range.min_by_key(|&k| (prefix[k], k)).unwrap_or(0);
        tokens.rotate_left(start % len);
    }
    let row_seq: Vec<usize> =
        tokens.iter().filter_map(|t| if let Token::Row(i) = t { Some(*i) } else { None }).collect();
    let col_seq: Vec<usize> =
        tokens.iter().filter_map(|t| if let Token::Col(j) = t { Some(*j) } else { None }).collect();
    let pairs = row_seq.iter().zip(&col_seq).map(|(&i, &j)| Vertex::new(i, j)).collect();
    (pairs, col_seq.get(row_seq.len()).copied())
}

/// The matching on `K_{I,J̄}` selected by the Dyck path triangulation.
pub fn dyck_matching(rows: &[usize], cols: &[usize]) -> Result<Matching> {
    if rows.len() != cols.len() {
        return domain("support sides must have equal size");
    }
    Matching::new(rotation_pairs(rows, cols).0)
}

/// The matching on `K_{I,J̄}` selected by the extended Dyck path
/// triangulation of `Δ_n × Δ_{n-1}`, where row `n + 1` is special.
pub fn extended_dyck_matching(n: usize, rows: &[usize], cols: &[usize]) -> Result<Matching> {
    if rows.len() != cols.len() {
        return domain("support sides must have equal size");
    }
    if !rows.contains(&(n + 1)) {
        return dyck_matching(rows, cols);
    }
    let rest: Vec<usize> = rows.iter().copied().filter(|&r| r != n + 1).collect();
    let (mut pairs, last) = rotation_pairs(&rest, cols);
    pairs.push(Vertex::new(n + 1, last.expect("one column stays unpaired")));
    Matching::new(pairs)
}

/// The ensemble `𝓜_n` of cyclic shifts of non-crossing weakly increasing matchings.
pub fn dyck_ensemble(n: usize) -> Result<MatchingEnsemble> {
    if n == 0 {
        return domain("n must be at least 1");
    }
    let support = Support::full(n, n);
    let mut e = MatchingEnsemble::empty(support.clone());
    for key in support_pairs(&support) {
        e.insert(dyck_matching(&key.rows, &key.cols)?)?;
    }
    Ok(e)
}

/// The ensemble `𝓜^ext_n` on `K_{n+1,n}`.
pub fn extended_dyck_ensemble(n: usize) -> Result<MatchingEnsemble> {
    if n == 0 {
        return domain("n must be at least 1");
    }
    let support = Support::full(n + 1, n);
    let mut e = MatchingEnsemble::empty(support.clone());
    for key in support_pairs(&support) {
        e.insert(extended_dyck_matching(n, &key.rows, &key.cols)?)?;
    }
    Ok(e)
}
