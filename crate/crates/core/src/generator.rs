//! Test universes: isomorph-free enumeration of small projections and
//! seeded random growth of larger ones by inverse reduction moves.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::fixtures;
use crate::planar_map::{root_code_is_minimal, Dart, PlanarMap};
use crate::projection::{Colour, Projection, ProjectionError};

pub const DEFAULT_VERTEX_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("darts {0} and {1} do not lie on a common face")]
    NotOnCommonFace(Dart, Dart),
    #[error("darts {0} and {1} belong to the same edge")]
    SameEdge(Dart, Dart),
    #[error("face {0} is not a digon")]
    NotADigon(usize),
    #[error(transparent)]
    Invalid(#[from] ProjectionError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneratorError {
    #[error("{requested} vertices exceeds the exhaustive cap of {cap}")]
    CapExceeded { requested: usize, cap: usize },
    #[error("random projections need at least 6 vertices, got {0}")]
    TooSmall(usize),
    #[error("could not reach exactly {vertices} vertices from seed {seed}")]
    Infeasible { vertices: usize, seed: u64 },
}

fn same_face(map: &PlanarMap, a: Dart, b: Dart) -> bool {
    let mut d = map.face_next(a);
    loop {
        if d == b {
            return true;
        }
        if d == a {
            return false;
        }
        d = map.face_next(d);
    }
}

/// Rebuilds `p` without edges `drop`, plus `extra` new vertices and edges.
fn rebuild(
    p: &Projection,
    drop: &[usize],
    extra: usize,
    added: Vec<([Dart; 2], Colour)>,
) -> Result<Projection, ProjectionError> {
    let map = p.map();
    let mut edges = Vec::with_capacity(map.edge_count() + added.len());
    let mut colours = Vec::with_capacity(edges.capacity());
    for (id, &pair) in map.edges().iter().enumerate() {
        if !drop.contains(&id) {
            edges.push(pair);
            colours.push(p.colour(id));
        }
    }
    for (pair, c) in added {
        edges.push(pair);
        colours.push(c);
    }
    let map = PlanarMap::from_edges(map.vertex_count() + extra, edges)?;
    Projection::new(map, colours)
}

fn check_pair(p: &Projection, dg: Dart, dh: Dart) -> Result<(), MoveError> {
    let map = p.map();
    if map.edge_of(dg) == map.edge_of(dh) {
        return Err(MoveError::SameEdge(dg, dh));
    }
    if !same_face(map, dg, dh) {
        return Err(MoveError::NotOnCommonFace(dg, dh));
    }
    Ok(())
}

/// Pushes a finger of the edge of `dg` across the edge of `dh`, both seen
/// from a common face. Adds two vertices bounding a new digon.
pub fn push_across(p: &Projection, dg: Dart, dh: Dart) -> Result<Projection, MoveError> {
    check_pair(p, dg, dh)?;
    let map = p.map();
    let (ag, ah) = (map.alpha(dg), map.alpha(dh));
    let (cg, ch) = (p.dart_colour(dg), p.dart_colour(dh));
    let n = map.vertex_count();
    let pd = |s| Dart::new(n, s);
    let qd = |s| Dart::new(n + 1, s);
    let added = vec![
        ([dg, pd(0)], cg),
        ([pd(2), qd(0)], cg),
        ([qd(2), ag], cg),
        ([dh, qd(1)], ch),
        ([qd(3), pd(3)], ch),
        ([pd(1), ah], ch),
    ];
    Ok(rebuild(p, &[map.edge_of(dg), map.edge_of(dh)], 2, added)?)
}

/// Inverse smoothing: the edges of `dg` and `dh`, on a common face, are cut
/// and rejoined through a new vertex so that splitting it back along the
/// slot pairs (0,1),(2,3) restores them. Fails unless the colour classes
/// remain single walks.
pub fn cross_in_face(p: &Projection, dg: Dart, dh: Dart) -> Result<Projection, MoveError> {
    check_pair(p, dg, dh)?;
    let map = p.map();
    let (cg, ch) = (p.dart_colour(dg), p.dart_colour(dh));
    if cg != ch {
        return Err(MoveError::Invalid(ProjectionError::ColourNotStraight {
            vertex: map.vertex_count(),
        }));
    }
    let u = |s| Dart::new(map.vertex_count(), s);
    let added = vec![
        ([dg, u(1)], cg),
        ([u(0), map.alpha(dg)], cg),
        ([dh, u(3)], ch),
        ([u(2), map.alpha(dh)], ch),
    ];
    Ok(rebuild(p, &[map.edge_of(dg), map.edge_of(dh)], 1, added)?)
}

/// Grafts a Θ onto the digon face `face`.
pub fn graft_theta(p: &Projection, face: usize) -> Result<Projection, MoveError> {
    let map = p.map();
    let faces = map.faces();
    let f = faces.get(face).ok_or(MoveError::NotADigon(face))?;
    if f.degree() != 2 {
        return Err(MoveError::NotADigon(face));
    }
    let across = map.alpha(f.darts[0]);
    let other = faces
        .iter()
        .find(|g| g.darts.contains(&across))
        .expect("every dart lies on a face");
    let k = other.darts.iter().position(|&d| d == across).unwrap();
    let len = other.darts.len();
    let before = other.darts[(k + len - 1) % len];
    let after = other.darts[(k + 1) % len];
    cross_in_face(p, before, after)
}

/// Replaces the edge of `d` by a one-edge loop at a new vertex.
pub fn add_kink(p: &Projection, d: Dart, mirrored: bool) -> Result<Projection, MoveError> {
    let map = p.map();
    let c = p.dart_colour(d);
    let u = |s| Dart::new(map.vertex_count(), s);
    let added = if mirrored {
        vec![([d, u(0)], c), ([u(2), u(3)], c), ([u(1), map.alpha(d)], c)]
    } else {
        vec![([d, u(0)], c), ([u(2), u(1)], c), ([u(3), map.alpha(d)], c)]
    };
    Ok(rebuild(p, &[map.edge_of(d)], 1, added)?)
}

fn random_face_pair(p: &Projection, rng: &mut ChaCha8Rng) -> Option<(Dart, Dart)> {
    let faces = p.faces();
    let f = faces.choose(rng)?;
    if f.darts.len() < 2 {
        return None;
    }
    let mut picks = f.darts.clone();
    picks.shuffle(rng);
    Some((picks[0], picks[1]))
}

/// A pairwise-crossing projection with exactly `n` vertices, grown from P1
/// or P2 by seeded inverse moves and then randomly relabeled.
pub fn random_projection(n: usize, seed: u64) -> Result<Projection, GeneratorError> {
    if n < 6 {
        return Err(GeneratorError::TooSmall(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p = if rng.gen_bool(0.5) {
        fixtures::krupp()
    } else {
        fixtures::non_krupp()
    };
    let mut attempts = 0;
    while p.vertex_count() < n {
        attempts += 1;
        if attempts > 10_000 {
            return Err(GeneratorError::Infeasible { vertices: n, seed });
        }
        let room = n - p.vertex_count();
        let next = match rng.gen_range(0..4) {
            0 if room >= 2 => random_face_pair(&p, &mut rng).and_then(|(a, b)| push_across(&p, a, b).ok()),
            1 => random_face_pair(&p, &mut rng).and_then(|(a, b)| cross_in_face(&p, a, b).ok()),
            2 => {
                let digons: Vec<usize> = p
                    .faces()
                    .iter()
                    .enumerate()
                    .filter(|(_, f)| f.degree() == 2)
                    .map(|(i, _)| i)
                    .collect();
                digons.choose(&mut rng).and_then(|&f| graft_theta(&p, f).ok())
            }
            3 => {
                let d = Dart(rng.gen_range(0..p.map().dart_count()));
                add_kink(&p, d, rng.gen_bool(0.5)).ok()
            }
            _ => None,
        };
        if let Some(q) = next {
            p = q;
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    let shift: Vec<usize> = (0..n).map(|_| rng.gen_range(0..4)).collect();
    let map = p.map().relabeled(&perm, &shift);
    Ok(Projection::new(map, p.colours().to_vec()).expect("relabeling keeps the colouring valid"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationFilter {
    pub vertices: usize,
    pub pairwise_crossing_only: bool,
    pub connected_only: bool,
}

impl EnumerationFilter {
    pub fn new(vertices: usize) -> Self {
        EnumerationFilter {
            vertices,
            pairwise_crossing_only: false,
            connected_only: false,
        }
    }

    pub fn pairwise_crossing(mut self) -> Self {
        self.pairwise_crossing_only = true;
        self
    }

    pub fn connected(mut self) -> Self {
        self.connected_only = true;
        self
    }
}

const UNSET: usize = usize::MAX;

/// Partial rooted map in BFS label order. Unmatched darts are dangling.
#[derive(Clone)]
struct Partial {
    alpha: Vec<usize>,
    vertices: usize,
}

impl Partial {
    fn face_next(&self, d: usize) -> usize {
        let a = self.alpha[d];
        let t = if a == UNSET { d } else { a };
        (t & !3) | ((t + 1) & 3)
    }

    fn first_unmatched(&self) -> Option<usize> {
        self.alpha.iter().position(|&a| a == UNSET)
    }

    /// Unmatched darts after `d` on its face.
    fn face_partners(&self, d: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut x = self.face_next(d);
        while x != d {
            if self.alpha[x] == UNSET {
                out.push(x);
            }
            x = self.face_next(x);
        }
        out.sort_unstable();
        out
    }

    fn children(&self, max_vertices: usize) -> Vec<Partial> {
        let Some(d) = self.first_unmatched() else {
            return Vec::new();
        };
        let mut out = Vec::new();
        for j in self.face_partners(d) {
            let mut c = self.clone();
            c.alpha[d] = j;
            c.alpha[j] = d;
            out.push(c);
        }
        if self.vertices < max_vertices {
            let mut c = self.clone();
            let base = 4 * c.vertices;
            c.alpha.extend([d, UNSET, UNSET, UNSET]);
            c.alpha[d] = base;
            c.vertices += 1;
            out.push(c);
        }
        out
    }
}

fn walk_count(alpha: &[usize]) -> usize {
    let mut seen = vec![false; alpha.len()];
    let mut count = 0;
    for s in 0..alpha.len() {
        if seen[s] {
            continue;
        }
        count += 1;
        let mut d = s;
        while !seen[d] {
            seen[d] = true;
            seen[alpha[d]] = true;
            d = alpha[d] ^ 2;
        }
    }
    count
}

fn collect(node: Partial, vertices: usize, out: &mut Vec<(usize, PlanarMap)>) {
    if node.first_unmatched().is_none() {
        if node.vertices == vertices {
            let walks = walk_count(&node.alpha);
            if walks <= MAX_WALKS {
                let map = PlanarMap::from_alpha(&node.alpha).expect("generated maps are spherical");
                if root_code_is_minimal(&map, true) {
                    out.push((walks, map));
                }
            }
        }
        return;
    }
    for c in node.children(vertices) {
        collect(c, vertices, out);
    }
}

const MAX_WALKS: usize = 3;

/// Connected maps with `vertices` vertices, bucketed by their number of
/// straight-ahead walks (index 0 stays empty).
fn maps_by_walks(vertices: usize) -> Vec<Vec<PlanarMap>> {
    let mut buckets = vec![Vec::new(); MAX_WALKS + 1];
    if vertices == 0 {
        return buckets;
    }
    let root = Partial {
        alpha: vec![UNSET; 4],
        vertices: 1,
    };
    let mut frontier = vec![root];
    for _ in 0..6 {
        let mut next = Vec::new();
        for n in frontier {
            if n.first_unmatched().is_none() {
                next.push(n);
            } else {
                next.extend(n.children(vertices));
            }
        }
        frontier = next;
    }
    let found: Vec<(usize, PlanarMap)> = frontier
        .into_par_iter()
        .flat_map_iter(|n| {
            let mut out = Vec::new();
            collect(n, vertices, &mut out);
            out
        })
        .collect();
    let mut keyed: Vec<_> = found
        .into_iter()
        .map(|(w, m)| (w, m.canonical_form(true), m))
        .collect();
    keyed.sort_by(|a, b| a.1.cmp(&b.1));
    for (w, _, m) in keyed {
        buckets[w].push(m);
    }
    buckets
}

/// Connected maps with exactly `vertices` vertices and `walks` straight-ahead
/// walks, one per class under isomorphism and reflection, in canonical order.
pub fn connected_maps(vertices: usize, walks: usize) -> Vec<PlanarMap> {
    if walks > MAX_WALKS {
        return Vec::new();
    }
    maps_by_walks(vertices).swap_remove(walks)
}

/// All projection classes matching the filter, in deterministic order:
/// connected classes first, then disconnected ones.
pub fn enumerate_projections(f: EnumerationFilter) -> Result<Vec<Projection>, GeneratorError> {
    enumerate_projections_capped(f, DEFAULT_VERTEX_CAP)
}

pub fn enumerate_projections_capped(f: EnumerationFilter, cap: usize) -> Result<Vec<Projection>, GeneratorError> {
    if f.vertices > cap {
        return Err(GeneratorError::CapExceeded {
            requested: f.vertices,
            cap,
        });
    }
    let n = f.vertices;
    let by_size: Vec<Vec<Vec<PlanarMap>>> = if f.connected_only || f.pairwise_crossing_only {
        (0..=n).map(|k| if k == n { maps_by_walks(k) } else { Vec::new() }).collect()
    } else {
        (0..=n).map(maps_by_walks).collect()
    };
    let mut out: Vec<Projection> = by_size[n][3]
        .iter()
        .cloned()
        .map(|m| Projection::from_map(m).expect("three walks"))
        .filter(|p| !f.pairwise_crossing_only || p.is_pairwise_crossing())
        .collect();
    if f.connected_only || f.pairwise_crossing_only || f.vertices < 2 {
        return Ok(out);
    }
    let one: Vec<&Vec<PlanarMap>> = by_size.iter().map(|b| &b[1]).collect();
    let two: Vec<&Vec<PlanarMap>> = by_size.iter().map(|b| &b[2]).collect();
    for a in 1..n {
        for m1 in one[a] {
            for m2 in two[n - a] {
                out.push(Projection::from_map(m1.disjoint_union(m2)).expect("three walks"));
            }
        }
    }
    for a in 1..=n / 3 {
        for b in a..=(n - a) / 2 {
            let c = n - a - b;
            for (i, m1) in one[a].iter().enumerate() {
                let j0 = if b == a { i } else { 0 };
                for (j, m2) in one[b].iter().enumerate().skip(j0) {
                    let k0 = if c == b { j } else { 0 };
                    for m3 in one[c].iter().skip(k0) {
                        let m = m1.disjoint_union(m2).disjoint_union(m3);
                        out.push(Projection::from_map(m).expect("three walks"));
                    }
                }
            }
        }
    }
    Ok(out)
}
