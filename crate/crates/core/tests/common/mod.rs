//! Independent oracles shared by the integration tests. None of these call
//! into the combinatorial shortcuts they are used to check.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use dycktri::lp::feasible_point;
use dycktri::{Simplex, Support, Triangulation, Vertex};
use num::{BigRational, One, Zero};

pub fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Connectivity by breadth-first search on the bipartite graph.
pub fn is_spanning_tree(edges: &[Vertex], rows: &[usize], cols: &[usize]) -> bool {
    if edges.len() != rows.len() + cols.len() - 1 {
        return false;
    }
    let start = (0, rows[0]);
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some((side, x)) = queue.pop_front() {
        for e in edges {
            let next = match side {
                0 if e.row == x => (1, e.col),
                1 if e.col == x => (0, e.row),
                _ => continue,
            };
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    seen.len() == rows.len() + cols.len()
}

fn subsets_of<T: Clone>(items: &[T], k: usize, out: &mut Vec<Vec<T>>, acc: &mut Vec<T>, from: usize) {
    if acc.len() == k {
        out.push(acc.clone());
        return;
    }
    for i in from..items.len() {
        acc.push(items[i].clone());
        subsets_of(items, k, out, acc, i + 1);
        acc.pop();
    }
}

pub fn choose<T: Clone>(items: &[T], k: usize) -> Vec<Vec<T>> {
    let mut out = Vec::new();
    subsets_of(items, k, &mut out, &mut Vec::new(), 0);
    out
}

/// Every spanning tree of `K_{m,n}` by testing all edge subsets of the right size.
pub fn all_spanning_trees(m: usize, n: usize) -> Vec<Simplex> {
    let edges: Vec<Vertex> = (1..=m).flat_map(|i| (1..=n).map(move |j| Vertex::new(i, j))).collect();
    let rows: Vec<usize> = (1..=m).collect();
    let cols: Vec<usize> = (1..=n).collect();
    choose(&edges, m + n - 1).into_iter().filter(|s| is_spanning_tree(s, &rows, &cols)).map(Simplex::from).collect()
}

fn q(x: i64) -> BigRational {
    BigRational::from_integer(x.into())
}

/// Exact geometric test: do the convex hulls of two vertex sets of
/// `Δ_{m−1} × Δ_{n−1}` meet outside the hull of their common vertices?
/// Looks for `λ, μ ≥ 0` with `Σ λ_v (e_i, e_j) = Σ μ_w (e_i, e_j)` and unit
/// mass of `λ` on the vertices of `s1` missing from `s2`. For affinely
/// independent sets this is feasible exactly when they intersect improperly.
pub fn improper_intersection(s1: &Simplex, s2: &Simplex, m: usize, n: usize) -> bool {
    let only1: Vec<Vertex> = s1.edges().iter().copied().filter(|v| !s2.contains(*v)).collect();
    if only1.is_empty() {
        return false;
    }
    let vars: Vec<(Vertex, i64)> =
        s1.edges().iter().map(|&v| (v, 1)).chain(s2.edges().iter().map(|&v| (v, -1))).collect();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for i in 1..=m {
        a.push(vars.iter().map(|&(v, sign)| if v.row == i { q(sign) } else { q(0) }).collect());
        b.push(BigRational::zero());
    }
    for j in 1..=n {
        a.push(vars.iter().map(|&(v, sign)| if v.col == j { q(sign) } else { q(0) }).collect());
        b.push(BigRational::zero());
    }
    a.push(
        vars.iter()
            .enumerate()
            .map(|(k, &(v, _))| if k < s1.len() && only1.contains(&v) { q(1) } else { q(0) })
            .collect(),
    );
    b.push(BigRational::one());
    feasible_point(&a, &b, vars.len()).is_some()
}

/// All triangulations of `Δ_{m−1} × Δ_{n−1}`: sets of pairwise properly
/// intersecting spanning trees whose number equals the normalized volume.
/// Compatibility is decided by the geometric oracle.
pub fn all_triangulations(m: usize, n: usize) -> Vec<Triangulation> {
    let trees = all_spanning_trees(m, n);
    let volume = binom((m + n - 2) as u64, (n - 1) as u64) as usize;
    let k = trees.len();
    let mut ok = vec![vec![false; k]; k];
    for a in 0..k {
        for b in a + 1..k {
            let good = !improper_intersection(&trees[a], &trees[b], m, n)
                && !improper_intersection(&trees[b], &trees[a], m, n);
            ok[a][b] = good;
            ok[b][a] = good;
        }
    }
    fn grow(ok: &[Vec<bool>], volume: usize, from: usize, chosen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if chosen.len() == volume {
            out.push(chosen.clone());
            return;
        }
        for c in from..ok.len() {
            if chosen.iter().all(|&x| ok[x][c]) {
                chosen.push(c);
                grow(ok, volume, c + 1, chosen, out);
                chosen.pop();
            }
        }
    }
    let mut sets = Vec::new();
    grow(&ok, volume, 0, &mut Vec::new(), &mut sets);
    sets.into_iter()
        .map(|set| Triangulation::new(Support::full(m, n), set.into_iter().map(|x| trees[x].clone())).unwrap())
        .collect()
}

/// `(i, j̄) ↦ (i + ℓ, j̄ + ℓ)` modulo `n`, representatives `1..=n`, leaving
/// rows above `n` alone.
pub fn shift(s: &Simplex, n: usize, l: usize) -> Vec<Vertex> {
    let w = |x: usize| (x - 1 + l) % n + 1;
    let mut out: Vec<Vertex> =
        s.edges().iter().map(|v| Vertex::new(if v.row > n { v.row } else { w(v.row) }, w(v.col))).collect();
    out.sort();
    out
}

/// A lattice path of unit steps from `(1,1̄)` to `(a, b̄)`, given as a set.
pub fn is_monotone_path(squares: &[Vertex], a: usize, b: usize) -> bool {
    let mut sorted = squares.to_vec();
    sorted.sort_by_key(|v| (v.row + v.col, v.row));
    sorted.len() == a + b - 1
        && sorted.first() == Some(&Vertex::new(1, 1))
        && sorted.last() == Some(&Vertex::new(a, b))
        && sorted.windows(2).all(|w| {
            (w[1].row == w[0].row + 1 && w[1].col == w[0].col) || (w[1].row == w[0].row && w[1].col == w[0].col + 1)
        })
}

/// Membership in the Dyck path triangulation: some cyclic shift of the cell
/// is a Dyck path.
pub fn is_shifted_dyck_path(s: &Simplex, n: usize) -> bool {
    (0..n).any(|l| {
        let p = shift(s, n, l);
        is_monotone_path(&p, n, n) && p.iter().all(|v| v.row <= v.col)
    })
}

/// All bijections `rows → cols` as edge lists, by recursive choice.
pub fn permutations(rows: &[usize], cols: &[usize]) -> Vec<Vec<Vertex>> {
    if rows.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (k, &c) in cols.iter().enumerate() {
        let rest: Vec<usize> = cols.iter().enumerate().filter(|&(x, _)| x != k).map(|(_, &c)| c).collect();
        for mut tail in permutations(&rows[1..], &rest) {
            tail.insert(0, Vertex::new(rows[0], c));
            out.push(tail);
        }
    }
    out
}

/// The cheapest bijections under numeric heights, all ties included.
pub fn cheapest(rows: &[usize], cols: &[usize], h: &BTreeMap<Vertex, BigRational>) -> Vec<Vec<Vertex>> {
    let scored: Vec<(BigRational, Vec<Vertex>)> =
        permutations(rows, cols).into_iter().map(|p| (p.iter().map(|v| h[v].clone()).sum(), p)).collect();
    let best = scored.iter().map(|(w, _)| w.clone()).min().unwrap();
    scored.into_iter().filter(|(w, _)| *w == best).map(|(_, p)| p).collect()
}

/// `c^e` at every vertex, for a concrete `c`.
pub fn powers(exponents: &BTreeMap<Vertex, u32>, c: i64) -> BTreeMap<Vertex, BigRational> {
    exponents.iter().map(|(&v, &e)| (v, num::pow(BigRational::from_integer(c.into()), e as usize))).collect()
}
