//! Partial triangulations on the skeleton `Δ^{(k-1)}_{m-1} × Δ_{n-1}` and
//! their extension to full triangulations.
//!
//! A skeleton triangulation stores one triangulation per top face
//! `Δ_I × Δ_{n-1}`, `|I| = k`; lower faces are reached by restriction. To
//! extend, the perfect matchings of all face cells are pooled into a
//! candidate ensemble. If the pool satisfies the ensemble axioms it determines
//! the unique extension; otherwise the failing axiom is the obstruction. For
//! `k > n` the pool always satisfies them.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::constructors::{dyck_flip, extended_dyck};
use crate::ensembles::{check_axioms, compatible_trees, subsets, Element, Matching, MatchingEnsemble};
use crate::error::{domain, Error, Result};
use crate::simplex::{Simplex, Support, Triangulation, VerificationReport};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkeletonTriangulation {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub faces: BTreeMap<Vec<usize>, Triangulation>,
}

#[derive(Serialize, Deserialize)]
struct RawFace {
    #[serde(rename = "I")]
    rows: Vec<usize>,
    triangulation: Triangulation,
}

#[derive(Serialize, Deserialize)]
struct RawSkeleton {
    m: usize,
    n: usize,
    k: usize,
    faces: Vec<RawFace>,
}

impl Serialize for SkeletonTriangulation {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RawSkeleton {
            m: self.m,
            n: self.n,
            k: self.k,
            faces: self
                .faces
                .iter()
                .map(|(rows, t)| RawFace { rows: rows.clone(), triangulation: t.clone() })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SkeletonTriangulation {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RawSkeleton::deserialize(deserializer)?;
        let faces = raw.faces.into_iter().map(|f| (f.rows, f.triangulation));
        SkeletonTriangulation::new(raw.m, raw.n, raw.k, faces).map_err(D::Error::custom)
    }
}

impl SkeletonTriangulation {
    /// Checks that there is exactly one face triangulation on `Δ_I × Δ_{n-1}`
    /// for every `k`-subset `I` of `[m]`.
    pub fn new(
        m: usize,
        n: usize,
        k: usize,
        faces: impl IntoIterator<Item = (Vec<usize>, Triangulation)>,
    ) -> Result<Self> {
        if k == 0 || k > m || n == 0 {
            return domain(format!("skeleton parameters m={m} n={n} k={k} out of range"));
        }
        let mut map = BTreeMap::new();
        let all_cols: Vec<usize> = (1..=n).collect();
        for (mut rows, t) in faces {
            rows.sort_unstable();
            if rows.len() != k || t.support.rows != rows || t.support.cols != all_cols {
                return domain(format!("face {rows:?} must be a triangulation of I x [1..{n}] with |I| = {k}"));
            }
            if (t.m(), t.n()) != (m, n) {
                return domain(format!("face {rows:?} lives in a {}x{} grid, expected {m}x{n}", t.m(), t.n()));
            }
            if map.insert(rows.clone(), t).is_some() {
                return domain(format!("face {rows:?} given twice"));
            }
        }
        let expected = subsets(&(1..=m).collect::<Vec<_>>(), k);
        if let Some(missing) = expected.iter().find(|rows| !map.contains_key(*rows)) {
            return domain(format!("face {missing:?} is missing"));
        }
        Ok(SkeletonTriangulation { m, n, k, faces: map })
    }

    pub fn face(&self, rows: &[usize]) -> Option<&Triangulation> {
        self.faces.get(rows)
    }

    /// The same skeleton with one face triangulation swapped out.
    pub fn with_face(&self, rows: Vec<usize>, t: Triangulation) -> Result<Self> {
        let mut faces = self.faces.clone();
        faces.insert(rows, t);
        SkeletonTriangulation::new(self.m, self.n, self.k, faces)
    }
}

/// Restriction of a triangulation of `Δ_{m-1} × Δ_{n-1}` to all faces
/// `Δ_I × Δ_{n-1}` with `|I| = k`.
pub fn restrict_to_skeleton(t: &Triangulation, k: usize) -> Result<SkeletonTriangulation> {
    let (m, n) = (t.m(), t.n());
    if !t.support.is_full() {
        return domain("skeleton restriction needs a triangulation of the whole product");
    }
    if k < n || k > m {
        return domain(format!("skeleton dimension k={k} must satisfy n={n} <= k <= m={m}"));
    }
    let cols: Vec<usize> = (1..=n).collect();
    let faces = subsets(&(1..=m).collect::<Vec<_>>(), k)
        .into_iter()
        .map(|rows| t.restrict(&rows, &cols).map(|f| (rows, f)))
        .collect::<Result<Vec<_>>>()?;
    SkeletonTriangulation::new(m, n, k, faces)
}

/// Why a skeleton is not a consistent triangulation of the skeleton complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CompatibilityWitness {
    InvalidFace {
        face: Vec<usize>,
        report: Box<VerificationReport>,
    },
    Mismatch {
        first: Vec<usize>,
        second: Vec<usize>,
        shared: Vec<usize>,
        only_in_first: Option<Simplex>,
        only_in_second: Option<Simplex>,
    },
}

impl fmt::Display for CompatibilityWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompatibilityWitness::InvalidFace { face, report } => {
                write!(f, "face {face:?} is not a triangulation:\n{report}")
            }
            CompatibilityWitness::Mismatch { first, second, shared, only_in_first, only_in_second } => {
                write!(f, "faces {first:?} and {second:?} disagree on rows {shared:?}")?;
                if let Some(s) = only_in_first {
                    write!(f, "; {s} only from {first:?}")?;
                }
                if let Some(s) = only_in_second {
                    write!(f, "; {s} only from {second:?}")?;
                }
                Ok(())
            }
        }
    }
}

/// Every face must be a triangulation and any two faces must restrict to the
/// same triangulation of their common face.
pub fn check_skeleton_compatibility(s: &SkeletonTriangulation) -> std::result::Result<(), CompatibilityWitness> {
    for (face, t) in &s.faces {
        let report = t.verify();
        if !report.is_triangulation() {
            return Err(CompatibilityWitness::InvalidFace { face: face.clone(), report: Box::new(report) });
        }
    }
    let cols: Vec<usize> = (1..=s.n).collect();
    let faces: Vec<(&Vec<usize>, &Triangulation)> = s.faces.iter().collect();
    for (a, (rows_a, ta)) in faces.iter().enumerate() {
        for (rows_b, tb) in &faces[a + 1..] {
            let shared: Vec<usize> = rows_a.iter().copied().filter(|r| rows_b.contains(r)).collect();
            if shared.is_empty() {
                continue;
            }
            // Both restrictions exist: shared rows are inside both supports.
            let ra = ta.restrict(&shared, &cols).expect("shared rows lie in the face");
            let rb = tb.restrict(&shared, &cols).expect("shared rows lie in the face");
            if ra.simplices != rb.simplices {
                return Err(CompatibilityWitness::Mismatch {
                    first: (*rows_a).clone(),
                    second: (*rows_b).clone(),
                    shared,
                    only_in_first: ra.simplices.difference(&rb.simplices).next().cloned(),
                    only_in_second: rb.simplices.difference(&ra.simplices).next().cloned(),
                });
            }
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WitnessKind {
    /// Two faces induce different matchings on one support.
    SaConflict,
    /// A pooled matching has a sub-matching the pool does not contain.
    CaFailure,
    /// A pooled matching cannot be linked to some outside vertex.
    LaFailure,
}

/// Obstruction to extending a skeleton, re-checkable against the pooled ensemble.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonExtendabilityWitness {
    pub kind: WitnessKind,
    pub matching: Matching,
    pub vertex: Option<Element>,
    /// For SA the competing matching; for CA the missing sub-matching; for LA
    /// the pooled matching on the support reached by exchanging the last edge
    /// of `matching` (in row order) for an edge at `vertex`.
    pub conflicting: Option<Matching>,
}

impl fmt::Display for NonExtendabilityWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            WitnessKind::SaConflict => write!(f, "supports axiom fails: {}", self.matching)?,
            WitnessKind::CaFailure => write!(f, "closure axiom fails: {}", self.matching)?,
            WitnessKind::LaFailure => write!(f, "linkage axiom fails: {}", self.matching)?,
        }
        if let Some(v) = self.vertex {
            write!(f, " at vertex {v}")?;
        }
        if let Some(c) = &self.conflicting {
            write!(f, " (conflicting: {c})")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Extension {
    Extended(Triangulation),
    NonExtendable(NonExtendabilityWitness),
}

impl Extension {
    pub fn triangulation(&self) -> Option<&Triangulation> {
        match self {
            Extension::Extended(t) => Some(t),
            Extension::NonExtendable(_) => None,
        }
    }

    pub fn witness(&self) -> Option<&NonExtendabilityWitness> {
        match self {
            Extension::Extended(_) => None,
            Extension::NonExtendable(w) => Some(w),
        }
    }
}

/// All perfect matchings contained in cells of the skeleton.
pub fn pooled_ensemble(s: &SkeletonTriangulation) -> Result<MatchingEnsemble> {
    let mut e = MatchingEnsemble::empty(Support::full(s.m, s.n));
    for t in s.faces.values() {
        for cell in &t.simplices {
            e.absorb(cell.edges())?;
        }
    }
    Ok(e)
}

/// Extends a compatible skeleton (`k ≥ n`) to the unique triangulation
/// restricting to it, or reports the axiom that obstructs extension.
pub fn extend_skeleton(s: &SkeletonTriangulation) -> Result<Extension> {
    if s.k < s.n {
        return domain(format!("extension needs k >= n, got k={} n={}", s.k, s.n));
    }
    check_skeleton_compatibility(s).map_err(|w| Error::Incompatible(Box::new(w)))?;
    let e = match pooled_ensemble(s) {
        Ok(e) => e,
        Err(Error::SupportConflict { first, second, .. }) => {
            return Ok(Extension::NonExtendable(NonExtendabilityWitness {
                kind: WitnessKind::SaConflict,
                matching: first,
                vertex: None,
                conflicting: Some(second),
            }))
        }
        Err(other) => return Err(other),
    };
    let report = check_axioms(&e);
    if let Some(sa) = &report.sa {
        // Every support of size <= n <= k sits inside some face.
        return Err(Error::Inconsistent(format!("pooled matchings miss a support: {sa:?}")));
    }
    if let Some(ca) = report.ca {
        return Ok(Extension::NonExtendable(NonExtendabilityWitness {
            kind: WitnessKind::CaFailure,
            matching: ca.matching,
            vertex: None,
            conflicting: Some(ca.missing),
        }));
    }
    if let Some(la) = report.la {
        let conflicting = la.exchanges.last().and_then(|(_, present)| present.clone());
        return Ok(Extension::NonExtendable(NonExtendabilityWitness {
            kind: WitnessKind::LaFailure,
            matching: la.matching,
            vertex: Some(la.vertex),
            conflicting,
        }));
    }
    let t = Triangulation::new(e.support.clone(), compatible_trees(&e))?;
    if !t.verify().is_triangulation() {
        return Err(Error::Inconsistent("reconstructed cells do not form a triangulation".into()));
    }
    if restrict_to_skeleton(&t, s.k)? != *s {
        return Err(Error::Inconsistent("extension does not restrict to the given skeleton".into()));
    }
    Ok(Extension::Extended(t))
}

/// The boundary skeleton (`k = n`) of the extended Dyck path triangulation
/// of `Δ_n × Δ_{n-1}` with the facet `Δ_{[n]} × Δ_{n-1}` flipped.
pub fn flipped_extended_boundary(n: usize) -> Result<SkeletonTriangulation> {
    if n < 2 {
        return domain("the flipped extended boundary needs n >= 2");
    }
    let boundary = restrict_to_skeleton(&extended_dyck(n)?, n)?;
    let flipped = dyck_flip(n)?.embed(n + 1, n)?;
    boundary.with_face((1..=n).collect(), flipped)
}

/// The cyclic triangulation of `Δ_2^{(1)} × Δ_1`: on each square
/// `{i, j} × {1̄, 2̄}` the full matching gives `1̄` to the row that wins the
/// cyclic tournament 1 → 2 → 3 → 1.
pub fn mother_of_all_examples() -> SkeletonTriangulation {
    let faces = [([1, 2], (1, 2)), ([2, 3], (2, 3)), ([1, 3], (3, 1))].map(|(rows, (winner, loser))| {
        let square = [(winner, 1), (winner, 2), (loser, 1), (loser, 2)];
        let matching = [(winner, 1), (loser, 2)];
        let cells = square
            .iter()
            .filter(|e| !matching.contains(e))
            .map(|dropped| Simplex::new(square.iter().copied().filter(|e| e != dropped)));
        let support = Support::new(3, 2, rows.to_vec(), vec![1, 2]).expect("valid face");
        (rows.to_vec(), Triangulation::new(support, cells).expect("valid cells"))
    });
    SkeletonTriangulation::new(3, 2, 2, faces).expect("valid skeleton")
}
