//! Height functions and regularity certificates.
//!
//! A height function `h` induces the triangulation whose matching ensemble
//! consists of the strictly cheapest perfect matching on every support pair,
//! where a matching costs `ω(M) = Σ_{(i,j̄) ∈ M} h_{ij}`. Symbolic heights
//! stand for `c^e` with `c` arbitrarily large and are compared exactly as
//! exponent multisets. Rational heights are exact.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, BigRational, One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ensembles::{
    all_matchings, ensemble_from_triangulation, support_pairs, triangulation_from_ensemble, Matching, MatchingEnsemble,
    SupportKey,
};
use crate::error::{domain, Error, Result};
use crate::lp::feasible_point;
use crate::simplex::{Support, Triangulation, Vertex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Heights {
    /// `h_v = c^e` for a sufficiently large `c`.
    Symbolic(BTreeMap<Vertex, u32>),
    Rational(BTreeMap<Vertex, BigRational>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightFunction {
    pub m: usize,
    pub n: usize,
    pub values: Heights,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawValue {
    Exponent(u32),
    Rational(String),
}

#[derive(Serialize, Deserialize)]
struct RawHeights {
    m: usize,
    n: usize,
    kind: String,
    values: Vec<(usize, usize, RawValue)>,
}

impl Serialize for HeightFunction {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let (kind, values) = match &self.values {
            Heights::Symbolic(map) => {
                ("symbolic", map.iter().map(|(v, &e)| (v.row, v.col, RawValue::Exponent(e))).collect())
            }
            Heights::Rational(map) => {
                ("rational", map.iter().map(|(v, q)| (v.row, v.col, RawValue::Rational(format_rational(q)))).collect())
            }
        };
        RawHeights { m: self.m, n: self.n, kind: kind.to_string(), values }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for HeightFunction {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RawHeights::deserialize(deserializer)?;
        let support = Support::full(raw.m, raw.n);
        let check = |i, j| support.check_vertex(Vertex::new(i, j)).map(|_| Vertex::new(i, j)).map_err(D::Error::custom);
        let values = match raw.kind.as_str() {
            "symbolic" => {
                let mut map = BTreeMap::new();
                for (i, j, value) in raw.values {
                    let RawValue::Exponent(e) = value else {
                        return Err(D::Error::custom(format!("symbolic height at ({i},{j}) must be an exponent")));
                    };
                    map.insert(check(i, j)?, e);
                }
                Heights::Symbolic(map)
            }
            "rational" => {
                let mut map = BTreeMap::new();
                for (i, j, value) in raw.values {
                    let q = match value {
                        RawValue::Exponent(e) => BigRational::from_integer(e.into()),
                        RawValue::Rational(s) => parse_rational(&s).map_err(D::Error::custom)?,
                    };
                    map.insert(check(i, j)?, q);
                }
                Heights::Rational(map)
            }
            other => return Err(D::Error::custom(format!("unknown height kind {other:?}"))),
        };
        Ok(HeightFunction { m: raw.m, n: raw.n, values })
    }
}

/// `p/q` in lowest terms, or `p` for integers.
pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Domain(format!("malformed rational {s:?}"));
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s.trim(), "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(p, q))
}

impl HeightFunction {
    pub fn is_symbolic(&self) -> bool {
        matches!(self.values, Heights::Symbolic(_))
    }

    pub fn covers(&self, v: Vertex) -> bool {
        match &self.values {
            Heights::Symbolic(map) => map.contains_key(&v),
            Heights::Rational(map) => map.contains_key(&v),
        }
    }

    pub fn exponent(&self, v: Vertex) -> Option<u32> {
        match &self.values {
            Heights::Symbolic(map) => map.get(&v).copied(),
            Heights::Rational(_) => None,
        }
    }

    pub fn rational(&self, v: Vertex) -> Option<&BigRational> {
        match &self.values {
            Heights::Symbolic(_) => None,
            Heights::Rational(map) => map.get(&v),
        }
    }

    /// Largest exponent of a symbolic height function (0 for rational ones).
    pub fn max_exponent(&self) -> u32 {
        match &self.values {
            Heights::Symbolic(map) => map.values().copied().max().unwrap_or(0),
            Heights::Rational(_) => 0,
        }
    }

    /// Evaluates a symbolic height function at a concrete `c`.
    pub fn substitute(&self, c: &BigRational) -> HeightFunction {
        let values = match &self.values {
            Heights::Symbolic(map) => {
                Heights::Rational(map.iter().map(|(&v, &e)| (v, num::pow(c.clone(), e as usize))).collect())
            }
            Heights::Rational(map) => Heights::Rational(map.clone()),
        };
        HeightFunction { m: self.m, n: self.n, values }
    }

    /// The weight `ω(M)`; symbolic weights are returned as exponents sorted
    /// from largest to smallest.
    fn weight(&self, m: &Matching) -> Result<Weight> {
        let missing = |v: Vertex| Error::Domain(format!("no height at vertex {v}"));
        match &self.values {
            Heights::Symbolic(map) => {
                let mut exps = m
                    .edges()
                    .iter()
                    .map(|v| map.get(v).copied().ok_or_else(|| missing(*v)))
                    .collect::<Result<Vec<u32>>>()?;
                exps.sort_unstable_by(|a, b| b.cmp(a));
                Ok(Weight::Symbolic(exps))
            }
            Heights::Rational(map) => {
                let mut sum = BigRational::zero();
                for v in m.edges() {
                    sum += map.get(v).ok_or_else(|| missing(*v))?;
                }
                Ok(Weight::Rational(sum))
            }
        }
    }
}

#[derive(PartialEq, Eq, PartialOrd, Ord)]
enum Weight {
    Symbolic(Vec<u32>),
    Rational(BigRational),
}

fn symbolic(m: usize, n: usize, exponent: impl Fn(usize, usize) -> u32) -> HeightFunction {
    let values = Support::full(m, n).vertices().map(|v| (v, exponent(v.row, v.col))).collect();
    HeightFunction { m, n, values: Heights::Symbolic(values) }
}

/// `h_{ij} = c^{(j−i) mod n}` on `[n] × [n̄]`, exponents in `0..n`.
pub fn dyck_heights(n: usize) -> Result<HeightFunction> {
    if n == 0 {
        return domain("dyck heights need n >= 1");
    }
    Ok(symbolic(n, n, |i, j| ((j + n - i) % n) as u32))
}

/// `h_{ij} = c^{j−i}` for `j ≥ i`, `c^{n+j−i}` for `j < i ≤ n`, and `1` on
/// row `n+1`.
pub fn extended_dyck_heights(n: usize) -> Result<HeightFunction> {
    if n == 0 {
        return domain("extended dyck heights need n >= 1");
    }
    Ok(symbolic(n + 1, n, |i, j| match i {
        _ if i == n + 1 => 0,
        _ if j >= i => (j - i) as u32,
        _ => (n + j - i) as u32,
    }))
}

/// Compares `ω(M1)` with `ω(M2)` for matchings on the same support. Symbolic
/// weights compare by their largest exponents first, which decides the
/// comparison for every sufficiently large `c`.
pub fn matching_weight_cmp(m1: &Matching, m2: &Matching, h: &HeightFunction) -> Result<Ordering> {
    if m1.support() != m2.support() {
        return domain(format!("matchings {m1} and {m2} have different supports"));
    }
    Ok(h.weight(m1)?.cmp(&h.weight(m2)?))
}

/// A support pair whose ensemble matching is not the strict weight minimum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegularityWitness {
    pub support: SupportKey,
    pub matching: Matching,
    /// A different matching on the same support that is no heavier.
    pub competitor: Matching,
}

impl fmt::Display for RegularityWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "on {} the cell matching {} is not strictly cheaper than {}",
            self.support, self.matching, self.competitor
        )
    }
}

/// Checks that `h` induces `t`. Returns `None` when every ensemble matching
/// of `t` is the unique cheapest matching on its support, and otherwise the
/// first support (in size-then-lexicographic order) where this fails.
pub fn verify_heights(t: &Triangulation, h: &HeightFunction) -> Result<Option<RegularityWitness>> {
    if (h.m, h.n) != (t.m(), t.n()) {
        return domain(format!("heights live on {}x{}, triangulation on {}x{}", h.m, h.n, t.m(), t.n()));
    }
    if let Some(v) = t.support.vertices().find(|&v| !h.covers(v)) {
        return domain(format!("no height at vertex {v}"));
    }
    let e = ensemble_from_triangulation(t)?;
    for key in support_pairs(&t.support) {
        let Some(matching) = e.get(&key) else {
            return domain(format!("triangulation has no matching on {key}"));
        };
        let own = h.weight(matching)?;
        for competitor in all_matchings(&key) {
            if competitor != *matching && h.weight(&competitor)? <= own {
                return Ok(Some(RegularityWitness { support: key, matching: matching.clone(), competitor }));
            }
        }
    }
    Ok(None)
}

/// Searches for rational heights inducing `t` by solving
/// `ω(M') − ω(M) ≥ 1` over all cell matchings `M` and competitors `M'`.
/// Strict inequalities can be scaled to margin 1, and adding a constant to all
/// heights changes nothing, so `h ≥ 0` loses no generality.
pub fn find_heights(t: &Triangulation) -> Result<Option<HeightFunction>> {
    let e = ensemble_from_triangulation(t)?;
    let vertices: Vec<Vertex> = t.support.vertices().collect();
    let index: BTreeMap<Vertex, usize> = vertices.iter().enumerate().map(|(k, &v)| (v, k)).collect();

    let mut diffs: Vec<Vec<i64>> = Vec::new();
    for key in support_pairs(&t.support) {
        let Some(matching) = e.get(&key) else {
            return domain(format!("triangulation has no matching on {key}"));
        };
        for competitor in all_matchings(&key) {
            if competitor == *matching {
                continue;
            }
            let mut row = vec![0i64; vertices.len()];
            for v in competitor.edges() {
                row[index[v]] += 1;
            }
            for v in matching.edges() {
                row[index[v]] -= 1;
            }
            diffs.push(row);
        }
    }

    // Columns: one per height, then one slack per constraint.
    let cols = vertices.len() + diffs.len();
    let a: Vec<Vec<BigRational>> = diffs
        .iter()
        .enumerate()
        .map(|(r, diff)| {
            let mut line: Vec<BigRational> = diff.iter().map(|&x| BigRational::from_integer(x.into())).collect();
            line.extend((0..diffs.len()).map(|s| if s == r { -BigRational::one() } else { BigRational::zero() }));
            line
        })
        .collect();
    let b = vec![BigRational::one(); diffs.len()];
    let Some(x) = feasible_point(&a, &b, cols) else {
        return Ok(None);
    };
    let values = vertices.iter().zip(x).map(|(&v, q)| (v, q)).collect();
    let h = HeightFunction { m: t.m(), n: t.n(), values: Heights::Rational(values) };
    if let Some(w) = verify_heights(t, &h)? {
        return Err(Error::Inconsistent(format!("LP heights do not induce the triangulation: {w}")));
    }
    Ok(Some(h))
}

/// The triangulation induced by `h`, provided every support pair has a
/// unique cheapest matching.
pub fn induced_triangulation(h: &HeightFunction) -> Result<Option<Triangulation>> {
    let support = Support::full(h.m, h.n);
    let mut e = MatchingEnsemble::empty(support.clone());
    for key in support_pairs(&support) {
        let mut best: Option<(Weight, Matching)> = None;
        let mut tie = false;
        for candidate in all_matchings(&key) {
            let w = h.weight(&candidate)?;
            match &best {
                Some((bw, _)) if w > *bw => {}
                Some((bw, _)) if w == *bw => tie = true,
                _ => {
                    best = Some((w, candidate));
                    tie = false;
                }
            }
        }
        if tie {
            return Ok(None);
        }
        let (_, m) = best.expect("every support has a matching");
        e.insert(m)?;
    }
    triangulation_from_ensemble(&e).map(Some)
}

/// A regular triangulation of `Δ_{m−1} × Δ_{n−1}` from random integer
/// heights drawn with a seeded generator; reproducible per seed.
pub fn random_regular_triangulation(m: usize, n: usize, seed: u64) -> Result<(Triangulation, HeightFunction)> {
    if m == 0 || n == 0 {
        return domain("random triangulations need m, n >= 1");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let values = Support::full(m, n)
            .vertices()
            .map(|v| (v, BigRational::from_integer(rng.gen_range(0i64..1_000_000).into())))
            .collect();
        let h = HeightFunction { m, n, values: Heights::Rational(values) };
        if let Some(t) = induced_triangulation(&h)? {
            if !t.verify().is_triangulation() {
                return Err(Error::Inconsistent("heights induced a non-triangulation".into()));
            }
            return Ok((t, h));
        }
    }
}
