//! The named triangulations: staircase, Dyck path, flipped Dyck path,
//! extended Dyck path and the Fuss-rational `(rn, n)` variants, plus
//! bistellar flips on full-dimensional circuits.

use std::collections::BTreeSet;

use crate::error::{domain, Error, Result};
use crate::simplex::{cyclic_shift, Circuit, Simplex, Support, Triangulation, Vertex};

/// Monotone lattice paths in grid representation, as the ordered list of
/// squares visited from one corner to the other.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridPath {
    pub squares: Vec<Vertex>,
}

impl GridPath {
    /// Every step increases exactly one coordinate by one.
    pub fn is_monotone(&self) -> bool {
        self.squares.windows(2).all(|w| {
            let (a, b) = (w[0], w[1]);
            (b.row == a.row + 1 && b.col == a.col) || (b.row == a.row && b.col == a.col + 1)
        })
    }

    /// Every square `(i, j̄)` satisfies `i ≤ r·j̄`; `r = 1` is the Dyck condition.
    pub fn is_dyck(&self, r: usize) -> bool {
        self.squares.iter().all(|v| v.row <= r * v.col)
    }

    pub fn to_simplex(&self) -> Simplex {
        self.squares.iter().copied().collect()
    }
}

/// All monotone paths from `start` to `end` whose squares satisfy `allowed`,
/// by backtracking over unit steps.
pub fn monotone_paths(start: Vertex, end: Vertex, allowed: impl Fn(usize, usize) -> bool) -> Vec<GridPath> {
    fn walk(
        at: Vertex,
        end: Vertex,
        allowed: &dyn Fn(usize, usize) -> bool,
        path: &mut Vec<Vertex>,
        out: &mut Vec<GridPath>,
    ) {
        if !allowed(at.row, at.col) {
            return;
        }
        path.push(at);
        if at == end {
            out.push(GridPath { squares: path.clone() });
        } else {
            if at.row < end.row {
                walk(Vertex::new(at.row + 1, at.col), end, allowed, path, out);
            }
            if at.col < end.col {
                walk(Vertex::new(at.row, at.col + 1), end, allowed, path, out);
            }
        }
        path.pop();
    }
    let mut out = Vec::new();
    if start.row <= end.row && start.col <= end.col {
        walk(start, end, &allowed, &mut Vec::new(), &mut out);
    }
    out
}

/// Dyck paths from `(1, 1̄)` to `(n, n̄)`.
pub fn dyck_paths(n: usize) -> Vec<GridPath> {
    monotone_paths(Vertex::new(1, 1), Vertex::new(n, n), |i, j| i <= j)
}

/// `(rn, n)`-Dyck paths from `(1, 1̄)` to `(rn, n̄)`, squares with `i ≤ r·j̄`.
pub fn rational_dyck_paths(r: usize, n: usize) -> Vec<GridPath> {
    monotone_paths(Vertex::new(1, 1), Vertex::new(r * n, n), |i, j| i <= r * j)
}

fn require_positive(name: &str, value: usize) -> Result<()> {
    if value == 0 {
        return domain(format!("{name} must be at least 1"));
    }
    Ok(())
}

/// The staircase triangulation: all monotone paths from `(1,1̄)` to `(m,n̄)`.
pub fn staircase(m: usize, n: usize) -> Result<Triangulation> {
    require_positive("m", m)?;
    require_positive("n", n)?;
    let paths = monotone_paths(Vertex::new(1, 1), Vertex::new(m, n), |_, _| true);
    Triangulation::new(Support::full(m, n), paths.iter().map(GridPath::to_simplex))
}

/// Orbit closure of `seeds` under the simultaneous cyclic shift of rows and
/// columns (rows in `fixed_rows` stay put). Duplicates collapse.
fn shift_orbits(seeds: &[Simplex], support: &Support, fixed_rows: &[usize]) -> Result<BTreeSet<Simplex>> {
    let k = support.cols.len() as i64;
    let mut out = BTreeSet::new();
    for s in seeds {
        for shift in 0..k {
            out.insert(cyclic_shift(s, support, shift, fixed_rows)?);
        }
    }
    Ok(out)
}

/// The Dyck path triangulation of `Δ_{n-1} × Δ_{n-1}`.
pub fn dyck(n: usize) -> Result<Triangulation> {
    require_positive("n", n)?;
    let support = Support::full(n, n);
    let seeds: Vec<Simplex> = dyck_paths(n).iter().map(GridPath::to_simplex).collect();
    let simplices = shift_orbits(&seeds, &support, &[])?;
    Triangulation::new(support, simplices)
}

/// Extended Dyck paths in the `(n+1) × n` grid: split `[1..n]` into
/// consecutive blocks `[a..b]`, put a Dyck path from `(a, ā)` to `(b, b̄)` in
/// each block and add the square `(n+1, b̄)` at the top of each block.
pub fn extended_dyck_paths(n: usize) -> Vec<Simplex> {
    fn blocks(start: usize, n: usize, acc: &mut Vec<Vertex>, out: &mut Vec<Simplex>) {
        if start > n {
            out.push(acc.iter().copied().collect());
            return;
        }
        for end in start..=n {
            for path in monotone_paths(Vertex::new(start, start), Vertex::new(end, end), |i, j| i <= j) {
                let mark = acc.len();
                acc.extend_from_slice(&path.squares);
                acc.push(Vertex::new(n + 1, end));
                blocks(end + 1, n, acc, out);
                acc.truncate(mark);
            }
        }
    }
    let mut out = Vec::new();
    blocks(1, n, &mut Vec::new(), &mut out);
    out
}

/// The extended Dyck path triangulation of `Δ_n × Δ_{n-1}`; the shift ignores
/// row `n + 1`.
pub fn extended_dyck(n: usize) -> Result<Triangulation> {
    require_positive("n", n)?;
    let support = Support::full(n + 1, n);
    let simplices = shift_orbits(&extended_dyck_paths(n), &support, &[n + 1])?;
    Triangulation::new(support, simplices)
}

/// Replaces `{C \ v : v ∈ C⁺}` by `{C \ v : v ∈ C⁻}` for a circuit spanning
/// the whole support.
pub fn bistellar_flip(t: &Triangulation, circuit: &Circuit) -> Result<Triangulation> {
    let circuit = Circuit::new(circuit.plus.clone(), circuit.minus.clone())?;
    if circuit.rows() != t.support.rows || circuit.cols() != t.support.cols {
        return Err(Error::FlipNotSupported(format!("circuit {circuit} is not full-dimensional on the support")));
    }
    let all = circuit.vertices();
    let removed: Vec<Simplex> = circuit.plus.iter().map(|&v| all.without(v)).collect();
    if let Some(missing) = removed.iter().find(|s| !t.contains(s)) {
        return Err(Error::FlipNotSupported(format!(
            "simplex {missing} of the positive side is not in the triangulation"
        )));
    }
    let mut simplices = t.simplices.clone();
    for s in &removed {
        simplices.remove(s);
    }
    simplices.extend(circuit.minus.iter().map(|&v| all.without(v)));
    Ok(Triangulation { support: t.support.clone(), simplices })
}

/// The circuit `C⁺ = {(1,2̄), …, (n−1,n̄), (n,1̄)}`, `C⁻ = {(i,ī)}` on which
/// the Dyck path triangulation flips.
pub fn dyck_flip_circuit(n: usize) -> Result<Circuit> {
    if n < 2 {
        return domain("the flip circuit needs n >= 2");
    }
    let plus = (1..=n).map(|i| Vertex::new(i, i % n + 1)).collect();
    let minus = (1..=n).map(|i| Vertex::new(i, i)).collect();
    Circuit::new(plus, minus)
}

/// The flipped Dyck path triangulation.
pub fn dyck_flip(n: usize) -> Result<Triangulation> {
    bistellar_flip(&dyck(n)?, &dyck_flip_circuit(n)?)
}

/// The `(rn, n)`-Dyck path triangulation of `Δ_{rn-1} × Δ_{n-1}`, built from
/// rational Dyck paths and the action `(i, j̄) ↦ (i + r, j̄ + 1)`.
pub fn rational_dyck(r: usize, n: usize) -> Result<Triangulation> {
    require_positive("r", r)?;
    require_positive("n", n)?;
    let m = r * n;
    let support = Support::full(m, n);
    let mut simplices = BTreeSet::new();
    for path in rational_dyck_paths(r, n) {
        for shift in 0..n {
            simplices.insert(
                path.squares
                    .iter()
                    .map(|v| Vertex::new((v.row - 1 + r * shift) % m + 1, (v.col - 1 + shift) % n + 1))
                    .collect(),
            );
        }
    }
    Triangulation::new(support, simplices)
}

/// The same triangulation obtained by restricting `dyck(rn)` to the columns
/// `r, 2r, …, rn` and dividing column labels by `r`.
pub fn rational_dyck_by_restriction(r: usize, n: usize) -> Result<Triangulation> {
    require_positive("r", r)?;
    require_positive("n", n)?;
    let m = r * n;
    let cols: Vec<usize> = (1..=n).map(|j| r * j).collect();
    dyck(m)?.restrict(&(1..=m).collect::<Vec<_>>(), &cols)?.relabel(m, n, |i| i, |j| j / r)
}

/// The extended `(rn, n)`-Dyck path triangulation of `Δ_{rn} × Δ_{n-1}`.
pub fn extended_rational_dyck(r: usize, n: usize) -> Result<Triangulation> {
    require_positive("r", r)?;
    require_positive("n", n)?;
    let m = r * n + 1;
    let cols: Vec<usize> = (1..=n).map(|j| r * j).collect();
    extended_dyck(r * n)?.restrict(&(1..=m).collect::<Vec<_>>(), &cols)?.relabel(m, n, |i| i, |j| j / r)
}
