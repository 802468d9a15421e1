//! 4-regular maps on the sphere encoded as rotation systems.
//!
//! Every vertex owns four consecutive darts `4v..4v+4`; the slot of a dart is
//! its position in the counterclockwise rotation around the vertex. The
//! straight-ahead continuation of slot `k` is slot `k + 2`, so the pairing of
//! opposite half-edges never has to be stored.

mod iso;

use std::fmt;

use thiserror::Error;

pub use iso::{CanonicalForm, Isomorphism};
pub(crate) use iso::root_code_is_minimal;

/// A half-edge. `vertex = id / 4`, `slot = id % 4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dart(pub usize);

impl Dart {
    #[inline]
    pub fn new(vertex: usize, slot: usize) -> Self {
        debug_assert!(slot < 4);
        Dart(4 * vertex + slot)
    }

    #[inline]
    pub fn id(self) -> usize {
        self.0
    }

    #[inline]
    pub fn vertex(self) -> usize {
        self.0 / 4
    }

    #[inline]
    pub fn slot(self) -> usize {
        self.0 % 4
    }

    /// Straight-ahead partner at the same vertex.
    #[inline]
    pub fn opposite(self) -> Self {
        Dart::new(self.vertex(), (self.slot() + 2) % 4)
    }

    /// Counterclockwise successor in the rotation at the vertex.
    #[inline]
    pub fn ccw(self) -> Self {
        Dart::new(self.vertex(), (self.slot() + 1) % 4)
    }

    /// Clockwise successor in the rotation at the vertex.
    #[inline]
    pub fn cw(self) -> Self {
        Dart::new(self.vertex(), (self.slot() + 3) % 4)
    }

    /// 0 for the slot-0/2 strand, 1 for the slot-1/3 strand.
    #[inline]
    pub fn parity(self) -> usize {
        self.0 % 2
    }
}

impl fmt::Display for Dart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("a map needs at least one vertex (crossing-free circles are not representable)")]
    NoVertices,
    #[error("expected {expected} edges for {vertices} vertices, found {found}")]
    EdgeCount {
        vertices: usize,
        expected: usize,
        found: usize,
    },
    #[error("dart {0} is out of range")]
    DartOutOfRange(usize),
    #[error("pairing is not a fixed-point-free involution at dart {0}")]
    NotInvolution(usize),
    #[error("embedding is not spherical: V - E + F = {euler}, expected {expected}")]
    NotSpherical { euler: i64, expected: i64 },
    #[error("edge {0} occurs twice on one face boundary")]
    Bridge(usize),
}

/// One face: the cyclic dart sequence produced by `d -> ccw(alpha(d))`.
///
/// Dart `d` on a face stands for the edge occurrence from `d.vertex()` to
/// `alpha(d).vertex()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceWalk {
    pub darts: Vec<Dart>,
}

impl FaceWalk {
    pub fn degree(&self) -> usize {
        self.darts.len()
    }
}

/// A closed straight-ahead walk, stored as the sequence of darts by which it
/// leaves each vertex it visits: `next = opposite(alpha(d))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StraightWalk {
    pub darts: Vec<Dart>,
}

impl StraightWalk {
    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarMap {
    vertex_count: usize,
    alpha: Vec<Dart>,
    edges: Vec<[Dart; 2]>,
    edge_of: Vec<usize>,
}

impl PlanarMap {
    /// Builds and validates a map from its edge list. Edge ids are positions
    /// in `edges`.
    pub fn from_edges(vertex_count: usize, edges: Vec<[Dart; 2]>) -> Result<Self, MapError> {
        if vertex_count == 0 {
            return Err(MapError::NoVertices);
        }
        let darts = 4 * vertex_count;
        if edges.len() != 2 * vertex_count {
            return Err(MapError::EdgeCount {
                vertices: vertex_count,
                expected: 2 * vertex_count,
                found: edges.len(),
            });
        }
        let mut alpha = vec![None; darts];
        let mut edge_of = vec![usize::MAX; darts];
        for (id, &[a, b]) in edges.iter().enumerate() {
            for d in [a, b] {
                if d.0 >= darts {
                    return Err(MapError::DartOutOfRange(d.0));
                }
            }
            if a == b {
                return Err(MapError::NotInvolution(a.0));
            }
            for (d, partner) in [(a, b), (b, a)] {
                if alpha[d.0].is_some() {
                    return Err(MapError::NotInvolution(d.0));
                }
                alpha[d.0] = Some(partner);
                edge_of[d.0] = id;
            }
        }
        let alpha: Vec<Dart> = alpha
            .into_iter()
            .enumerate()
            .map(|(d, p)| p.ok_or(MapError::NotInvolution(d)))
            .collect::<Result<_, _>>()?;
        let map = PlanarMap {
            vertex_count,
            alpha,
            edges,
            edge_of,
        };
        map.check_sphere()?;
        Ok(map)
    }

    /// Builds a map from a raw dart pairing; edges are numbered by their
    /// smaller dart.
    pub fn from_pairs(vertex_count: usize, pairs: &[(usize, usize)]) -> Result<Self, MapError> {
        let mut edges: Vec<[Dart; 2]> = pairs
            .iter()
            .map(|&(a, b)| [Dart(a.min(b)), Dart(a.max(b))])
            .collect();
        edges.sort();
        Self::from_edges(vertex_count, edges)
    }

    /// Builds a map from a full involution `alpha[d]`.
    pub fn from_alpha(alpha: &[usize]) -> Result<Self, MapError> {
        if !alpha.len().is_multiple_of(4) {
            return Err(MapError::DartOutOfRange(alpha.len()));
        }
        let mut edges = Vec::with_capacity(alpha.len() / 2);
        for (d, &p) in alpha.iter().enumerate() {
            if p >= alpha.len() {
                return Err(MapError::DartOutOfRange(p));
            }
            if alpha[p] != d || p == d {
                return Err(MapError::NotInvolution(d));
            }
            if d < p {
                edges.push([Dart(d), Dart(p)]);
            }
        }
        Self::from_edges(alpha.len() / 4, edges)
    }

    fn check_sphere(&self) -> Result<(), MapError> {
        let faces = self.faces();
        let components = self.component_count() as i64;
        let euler = self.vertex_count as i64 - self.edges.len() as i64 + faces.len() as i64;
        if euler != 2 * components {
            return Err(MapError::NotSpherical {
                euler,
                expected: 2 * components,
            });
        }
        let mut seen = vec![usize::MAX; self.edges.len()];
        for (f, face) in faces.iter().enumerate() {
            for &d in &face.darts {
                let e = self.edge_of[d.0];
                if seen[e] == f {
                    return Err(MapError::Bridge(e));
                }
                seen[e] = f;
            }
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn dart_count(&self) -> usize {
        self.alpha.len()
    }

    pub fn darts(&self) -> impl Iterator<Item = Dart> {
        (0..self.alpha.len()).map(Dart)
    }

    #[inline]
    pub fn alpha(&self, d: Dart) -> Dart {
        self.alpha[d.0]
    }

    #[inline]
    pub fn edge_of(&self, d: Dart) -> usize {
        self.edge_of[d.0]
    }

    pub fn edge(&self, id: usize) -> [Dart; 2] {
        self.edges[id]
    }

    pub fn edges(&self) -> &[[Dart; 2]] {
        &self.edges
    }

    /// Next dart along the same face.
    #[inline]
    pub fn face_next(&self, d: Dart) -> Dart {
        self.alpha(d).ccw()
    }

    /// Next dart along the same straight-ahead walk.
    #[inline]
    pub fn walk_next(&self, d: Dart) -> Dart {
        self.alpha(d).opposite()
    }

    /// Faces ordered by their minimum dart; each walk starts at that dart.
    pub fn faces(&self) -> Vec<FaceWalk> {
        let mut seen = vec![false; self.dart_count()];
        let mut faces = Vec::new();
        for start in self.darts() {
            if seen[start.0] {
                continue;
            }
            let mut darts = Vec::new();
            let mut d = start;
            while !seen[d.0] {
                seen[d.0] = true;
                darts.push(d);
                d = self.face_next(d);
            }
            faces.push(FaceWalk { darts });
        }
        faces
    }

    /// `face_index()[d]` is the index (in [`faces`](Self::faces)) of the face
    /// containing dart `d`.
    pub fn face_index(&self) -> Vec<usize> {
        let mut idx = vec![0; self.dart_count()];
        for (f, face) in self.faces().iter().enumerate() {
            for d in &face.darts {
                idx[d.0] = f;
            }
        }
        idx
    }

    /// Closed straight-ahead walks partitioning the edges, ordered by their
    /// minimum dart and oriented so they leave that dart.
    pub fn straight_walks(&self) -> Vec<StraightWalk> {
        let mut seen = vec![false; self.dart_count()];
        let mut walks = Vec::new();
        for start in self.darts() {
            if seen[start.0] {
                continue;
            }
            let mut darts = Vec::new();
            let mut d = start;
            while !seen[d.0] {
                seen[d.0] = true;
                seen[self.alpha(d).0] = true;
                darts.push(d);
                d = self.walk_next(d);
            }
            walks.push(StraightWalk { darts });
        }
        walks
    }

    /// Connected component label per vertex, numbered in order of first vertex.
    pub fn components(&self) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.vertex_count];
        let mut next = 0;
        for root in 0..self.vertex_count {
            if comp[root] != usize::MAX {
                continue;
            }
            comp[root] = next;
            let mut stack = vec![root];
            while let Some(v) = stack.pop() {
                for s in 0..4 {
                    let w = self.alpha(Dart::new(v, s)).vertex();
                    if comp[w] == usize::MAX {
                        comp[w] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn component_count(&self) -> usize {
        self.components().into_iter().max().map_or(0, |m| m + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// Same edges with every rotation reversed (the mirror embedding).
    pub fn reflected(&self) -> PlanarMap {
        let flip = |d: Dart| Dart::new(d.vertex(), (4 - d.slot()) % 4);
        let edges = self.edges.iter().map(|&[a, b]| [flip(a), flip(b)]).collect();
        PlanarMap::from_edges(self.vertex_count, edges).expect("reflection preserves validity")
    }

    /// Relabels vertices by `perm[old] = new` and rotates each vertex's
    /// slots by `shift[old]`; edge ids are kept.
    pub fn relabeled(&self, perm: &[usize], shift: &[usize]) -> PlanarMap {
        let map_dart = |d: Dart| Dart::new(perm[d.vertex()], (d.slot() + shift[d.vertex()]) % 4);
        let edges = self
            .edges
            .iter()
            .map(|&[a, b]| [map_dart(a), map_dart(b)])
            .collect();
        PlanarMap::from_edges(self.vertex_count, edges).expect("relabeling preserves validity")
    }

    /// Disjoint union; darts of `other` are shifted past those of `self`.
    pub fn disjoint_union(&self, other: &PlanarMap) -> PlanarMap {
        let off = self.dart_count();
        let mut edges = self.edges.clone();
        edges.extend(
            other
                .edges
                .iter()
                .map(|&[a, b]| [Dart(a.0 + off), Dart(b.0 + off)]),
        );
        PlanarMap::from_edges(self.vertex_count + other.vertex_count, edges)
            .expect("union of valid maps is valid")
    }

    pub fn canonical_form(&self, allow_reflection: bool) -> CanonicalForm {
        iso::canonical_form(self, allow_reflection)
    }

    /// Returns a dart bijection `self -> other` commuting with `alpha` and
    /// with the rotation (or its inverse, when reflections are allowed).
    pub fn isomorphism_to(&self, other: &PlanarMap, allow_reflection: bool) -> Option<Isomorphism> {
        iso::find_isomorphism(self, other, allow_reflection)
    }

    pub fn is_isomorphic(&self, other: &PlanarMap, allow_reflection: bool) -> bool {
        self.isomorphism_to(other, allow_reflection).is_some()
    }
}

/// `build_map` in free-function form.
pub fn build_map(vertex_count: usize, pairs: &[(usize, usize)]) -> Result<PlanarMap, MapError> {
    PlanarMap::from_pairs(vertex_count, pairs)
}

pub fn are_isomorphic(a: &PlanarMap, b: &PlanarMap, allow_reflection: bool) -> Option<Isomorphism> {
    a.isomorphism_to(b, allow_reflection)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn figure_eight() -> PlanarMap {
        build_map(1, &[(0, 1), (2, 3)]).unwrap()
    }

    #[test]
    fn figure_eight_has_three_faces() {
        let m = figure_eight();
        let faces = m.faces();
        assert_eq!(faces.len(), 3);
        let mut degrees: Vec<_> = faces.iter().map(FaceWalk::degree).collect();
        degrees.sort();
        assert_eq!(degrees, vec![1, 1, 2]);
        let walks = m.straight_walks();
        assert_eq!(walks.len(), 1);
        assert_eq!(walks[0].len(), 2);
    }

    #[test]
    fn self_paired_dart_is_rejected() {
        assert_eq!(
            build_map(1, &[(0, 0), (2, 3)]),
            Err(MapError::NotInvolution(0))
        );
    }

    #[test]
    fn doubly_used_dart_is_rejected() {
        assert!(matches!(
            build_map(1, &[(0, 1), (1, 3)]),
            Err(MapError::NotInvolution(_))
        ));
    }

    #[test]
    fn opposite_loop_is_not_spherical() {
        // Loops 0-2 and 1-3 at one vertex interleave: a torus embedding.
        assert!(matches!(
            build_map(1, &[(0, 2), (1, 3)]),
            Err(MapError::NotSpherical { .. })
        ));
    }

    #[test]
    fn empty_map_is_rejected() {
        assert_eq!(PlanarMap::from_edges(0, vec![]), Err(MapError::NoVertices));
    }

    #[test]
    fn krupp_fixture_counts() {
        let m = fixtures::krupp().map().clone();
        assert_eq!(m.vertex_count(), 6);
        assert_eq!(m.edge_count(), 12);
        let faces = m.faces();
        assert_eq!(faces.len(), 8);
        assert!(faces.iter().all(|f| f.degree() == 3));
        let walks = m.straight_walks();
        assert_eq!(walks.iter().map(StraightWalk::len).collect::<Vec<_>>(), vec![4, 4, 4]);
    }

    #[test]
    fn non_krupp_fixture_counts() {
        let m = fixtures::non_krupp().map().clone();
        let faces = m.faces();
        assert_eq!(faces.len(), 8);
        assert_eq!(faces.iter().filter(|f| f.degree() == 2).count(), 3);
        let walks = m.straight_walks();
        assert_eq!(walks.iter().map(StraightWalk::len).collect::<Vec<_>>(), vec![4, 4, 4]);
    }

    #[test]
    fn fixtures_are_not_isomorphic() {
        let a = fixtures::krupp().map().clone();
        let b = fixtures::non_krupp().map().clone();
        assert!(!a.is_isomorphic(&b, true));
        assert!(!a.is_isomorphic(&b, false));
    }

    #[test]
    fn reflected_fixtures() {
        // Both arrangements have orientation-reversing symmetries.
        for p in [fixtures::krupp(), fixtures::non_krupp()] {
            let m = p.map();
            let r = m.reflected();
            assert!(m.is_isomorphic(&r, false));
            assert!(m.is_isomorphic(&r, true));
        }
    }

    #[test]
    fn witness_commutes_with_alpha_and_rotation() {
        let m = fixtures::non_krupp().map().clone();
        let perm = vec![3, 5, 0, 1, 4, 2];
        let shift = vec![1, 0, 3, 2, 2, 1];
        let r = m.relabeled(&perm, &shift);
        let iso = m.isomorphism_to(&r, false).expect("relabeling is an isomorphism");
        for d in m.darts() {
            assert_eq!(iso.map(m.alpha(d)), r.alpha(iso.map(d)));
            assert_eq!(iso.map(d.ccw()), iso.map(d).ccw());
        }
    }

    #[test]
    fn disjoint_union_components() {
        let u = figure_eight().disjoint_union(&figure_eight());
        assert_eq!(u.component_count(), 2);
        assert_eq!(u.faces().len(), 6);
        assert!(u.is_isomorphic(&figure_eight().disjoint_union(&figure_eight()), true));
        assert!(!u.is_isomorphic(&fixtures::krupp().map().clone(), true));
    }
}
