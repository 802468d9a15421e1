//! Three-coloured projections: a 4-regular spherical map whose edges split
//! into a blue, a red and a green closed straight-ahead walk.
//!
//! This module also detects every local structure the reduction machinery
//! cares about: vertex types, good sections, shortcut opportunities,
//! Θ configurations, disposable digons and superfluous walks.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::planar_map::{Dart, FaceWalk, MapError, PlanarMap, StraightWalk};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Colour {
    Blue,
    Red,
    Green,
}

impl Colour {
    pub const ALL: [Colour; 3] = [Colour::Blue, Colour::Red, Colour::Green];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Colour {
        Colour::ALL[i]
    }

    pub fn letter(self) -> char {
        match self {
            Colour::Blue => 'B',
            Colour::Red => 'R',
            Colour::Green => 'G',
        }
    }

    pub fn from_letter(c: &str) -> Option<Colour> {
        match c {
            "B" => Some(Colour::Blue),
            "R" => Some(Colour::Red),
            "G" => Some(Colour::Green),
            _ => None,
        }
    }

    /// The two other colours, in index order.
    pub fn others(self) -> [Colour; 2] {
        match self {
            Colour::Blue => [Colour::Red, Colour::Green],
            Colour::Red => [Colour::Blue, Colour::Green],
            Colour::Green => [Colour::Blue, Colour::Red],
        }
    }
}

impl fmt::Display for Colour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VertexType {
    Mono(Colour),
    /// Colours stored in index order.
    Bi(Colour, Colour),
}

impl VertexType {
    pub fn bi(a: Colour, b: Colour) -> VertexType {
        debug_assert_ne!(a, b);
        if a < b {
            VertexType::Bi(a, b)
        } else {
            VertexType::Bi(b, a)
        }
    }

    pub fn is_bichromatic(self) -> bool {
        matches!(self, VertexType::Bi(..))
    }
}

impl fmt::Display for VertexType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexType::Mono(c) => write!(f, "{c}"),
            VertexType::Bi(a, b) => write!(f, "{a}{b}"),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TypeCounts {
    pub blue_red: usize,
    pub blue_green: usize,
    pub red_green: usize,
    /// Monochromatic vertices per colour.
    pub mono: [usize; 3],
}

impl TypeCounts {
    pub fn bichromatic(&self, a: Colour, b: Colour) -> usize {
        match VertexType::bi(a, b) {
            VertexType::Bi(Colour::Blue, Colour::Red) => self.blue_red,
            VertexType::Bi(Colour::Blue, Colour::Green) => self.blue_green,
            _ => self.red_green,
        }
    }

    pub fn of(&self, t: VertexType) -> usize {
        match t {
            VertexType::Mono(c) => self.mono[c.index()],
            VertexType::Bi(a, b) => self.bichromatic(a, b),
        }
    }

    pub fn mono_total(&self) -> usize {
        self.mono.iter().sum()
    }
}

impl fmt::Display for TypeCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "BR:{} BG:{} RG:{} mono:{}",
            self.blue_red,
            self.blue_green,
            self.red_green,
            self.mono_total()
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProjectionError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("expected {expected} edge colours, found {found}")]
    ColourCount { expected: usize, found: usize },
    #[error("vertex {vertex}: opposite edge-ends have different colours")]
    ColourNotStraight { vertex: usize },
    #[error("colour {0} is not used")]
    MissingColour(Colour),
    #[error("colour {colour} forms {walks} closed walks, expected one")]
    ColourClassNotOneWalk { colour: Colour, walks: usize },
    #[error("map has {0} straight-ahead walks, a three-component projection needs 3")]
    WalkCount(usize),
}

/// Maximal one-colour path along a face boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    pub face: usize,
    pub colour: Colour,
    /// Face darts of the section, in face order.
    pub darts: Vec<Dart>,
    pub ends: [usize; 2],
    pub end_types: [VertexType; 2],
}

impl Section {
    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }

    pub fn is_good(&self) -> bool {
        self.end_types[0] != self.end_types[1]
    }
}

/// A shortcut: subdivide `x_edge` at `x` and `y_edge` at `y` (both on
/// `face`), drop the discarded xy-walk and close the kept one through the
/// face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShortcutMove {
    pub face: usize,
    pub colour: Colour,
    pub x_edge: usize,
    pub y_edge: usize,
    /// Darts by which the discarded walk leaves each internal vertex, from
    /// `x` to `y`.
    pub discarded: Vec<Dart>,
    /// Same for the kept walk, from `y` around to `x`.
    pub kept: Vec<Dart>,
    /// Kept-side darts of `x_edge` and `y_edge`; they become the new edge.
    pub kept_ends: (Dart, Dart),
    pub discarded_colourful: bool,
}

impl ShortcutMove {
    pub fn edge_pair(&self) -> (usize, usize) {
        (self.x_edge.min(self.y_edge), self.x_edge.max(self.y_edge))
    }
}

/// `C = u v w u` is a straight-ahead closed walk at the monochromatic vertex
/// `u`, and edge `e` joins `v` and `w` inside `C`, which contains nothing else.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaMove {
    pub u: usize,
    pub v: usize,
    pub w: usize,
    pub e: usize,
    pub colour: Colour,
    /// Leaving darts of `C` at `u`, `v`, `w`.
    pub cycle: [Dart; 3],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisposableDigon {
    pub face: usize,
    pub edges: [usize; 2],
    pub vertices: [usize; 2],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperfluousWalk {
    pub vertex: usize,
    pub colour: Colour,
    /// Leaving darts at the walk's internal vertices (empty for a loop).
    pub darts: Vec<Dart>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DefectReport {
    pub disposable_digons: Vec<DisposableDigon>,
    pub superfluous_walks: Vec<SuperfluousWalk>,
}

impl DefectReport {
    pub fn is_empty(&self) -> bool {
        self.disposable_digons.is_empty() && self.superfluous_walks.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Projection {
    map: PlanarMap,
    colours: Vec<Colour>,
    walks: [StraightWalk; 3],
    /// Position of each edge in its colour walk.
    walk_pos: Vec<usize>,
    types: Vec<VertexType>,
}

impl Projection {
    /// Validates an explicit edge colouring.
    pub fn new(map: PlanarMap, colours: Vec<Colour>) -> Result<Self, ProjectionError> {
        if colours.len() != map.edge_count() {
            return Err(ProjectionError::ColourCount {
                expected: map.edge_count(),
                found: colours.len(),
            });
        }
        let colour_at = |d: Dart| colours[map.edge_of(d)];
        for v in 0..map.vertex_count() {
            for s in 0..2 {
                if colour_at(Dart::new(v, s)) != colour_at(Dart::new(v, s + 2)) {
                    return Err(ProjectionError::ColourNotStraight { vertex: v });
                }
            }
        }
        let mut per_colour: [Vec<StraightWalk>; 3] = Default::default();
        for w in map.straight_walks() {
            per_colour[colour_at(w.darts[0]).index()].push(w);
        }
        for c in Colour::ALL {
            match per_colour[c.index()].len() {
                0 => return Err(ProjectionError::MissingColour(c)),
                1 => {}
                n => return Err(ProjectionError::ColourClassNotOneWalk { colour: c, walks: n }),
            }
        }
        let walks = per_colour.map(|mut v| v.pop().unwrap());
        let mut walk_pos = vec![0; map.edge_count()];
        for w in &walks {
            for (k, &d) in w.darts.iter().enumerate() {
                walk_pos[map.edge_of(d)] = k;
            }
        }
        let types = (0..map.vertex_count())
            .map(|v| {
                let a = colour_at(Dart::new(v, 0));
                let b = colour_at(Dart::new(v, 1));
                if a == b {
                    VertexType::Mono(a)
                } else {
                    VertexType::bi(a, b)
                }
            })
            .collect();
        Ok(Projection {
            map,
            colours,
            walks,
            walk_pos,
            types,
        })
    }

    /// Colours the three straight-ahead walks blue, red, green in the order
    /// of their minimum darts.
    pub fn from_map(map: PlanarMap) -> Result<Self, ProjectionError> {
        let walks = map.straight_walks();
        if walks.len() != 3 {
            return Err(ProjectionError::WalkCount(walks.len()));
        }
        let mut colours = vec![Colour::Blue; map.edge_count()];
        for (w, c) in walks.iter().zip(Colour::ALL) {
            for &d in &w.darts {
                colours[map.edge_of(d)] = c;
            }
        }
        Projection::new(map, colours)
    }

    pub fn map(&self) -> &PlanarMap {
        &self.map
    }

    pub fn into_map(self) -> PlanarMap {
        self.map
    }

    pub fn vertex_count(&self) -> usize {
        self.map.vertex_count()
    }

    pub fn colours(&self) -> &[Colour] {
        &self.colours
    }

    #[inline]
    pub fn colour(&self, edge: usize) -> Colour {
        self.colours[edge]
    }

    #[inline]
    pub fn dart_colour(&self, d: Dart) -> Colour {
        self.colours[self.map.edge_of(d)]
    }

    pub fn walk(&self, c: Colour) -> &StraightWalk {
        &self.walks[c.index()]
    }

    pub fn walks(&self) -> &[StraightWalk; 3] {
        &self.walks
    }

    pub fn walk_position(&self, edge: usize) -> usize {
        self.walk_pos[edge]
    }

    #[inline]
    pub fn vertex_type(&self, v: usize) -> VertexType {
        self.types[v]
    }

    pub fn vertex_types(&self) -> &[VertexType] {
        &self.types
    }

    pub fn type_counts(&self) -> TypeCounts {
        let mut t = TypeCounts::default();
        for &ty in &self.types {
            match ty {
                VertexType::Mono(c) => t.mono[c.index()] += 1,
                VertexType::Bi(Colour::Blue, Colour::Red) => t.blue_red += 1,
                VertexType::Bi(Colour::Blue, Colour::Green) => t.blue_green += 1,
                VertexType::Bi(..) => t.red_green += 1,
            }
        }
        t
    }

    pub fn is_pairwise_crossing(&self) -> bool {
        let t = self.type_counts();
        t.blue_red > 0 && t.blue_green > 0 && t.red_green > 0
    }

    /// Same map with colours renamed by `perm[old colour index]`.
    pub fn recoloured(&self, perm: [Colour; 3]) -> Projection {
        let colours = self.colours.iter().map(|c| perm[c.index()]).collect();
        Projection::new(self.map.clone(), colours).expect("renaming colours keeps validity")
    }

    /// A walk (list of leaving darts) of colour `c` is colourful when it
    /// visits bichromatic vertices of both types involving `c`.
    pub fn is_colourful(&self, c: Colour, darts: &[Dart]) -> bool {
        let [o1, o2] = c.others();
        let (t1, t2) = (VertexType::bi(c, o1), VertexType::bi(c, o2));
        let mut seen = (false, false);
        for d in darts {
            let t = self.types[d.vertex()];
            seen.0 |= t == t1;
            seen.1 |= t == t2;
        }
        seen.0 && seen.1
    }

    pub fn faces(&self) -> Vec<FaceWalk> {
        self.map.faces()
    }

    /// All maximal monochromatic facial sections.
    pub fn sections(&self) -> Vec<Section> {
        let mut out = Vec::new();
        for (f, face) in self.faces().iter().enumerate() {
            let n = face.darts.len();
            let col = |k: usize| self.dart_colour(face.darts[k % n]);
            // Start right after a colour change; a single-colour face has no
            // sections.
            let Some(start) = (0..n).find(|&k| col(k + n - 1) != col(k)) else {
                continue;
            };
            let mut k = 0;
            while k < n {
                let c = col(start + k);
                let mut darts = Vec::new();
                while k < n && col(start + k) == c {
                    darts.push(face.darts[(start + k) % n]);
                    k += 1;
                }
                let first = darts[0].vertex();
                let last = self.map.alpha(*darts.last().unwrap()).vertex();
                out.push(Section {
                    face: f,
                    colour: c,
                    darts,
                    ends: [first, last],
                    end_types: [self.types[first], self.types[last]],
                });
            }
        }
        out
    }

    /// Good sections, each path of edges listed once even when it bounds
    /// two faces.
    pub fn good_sections(&self) -> Vec<Section> {
        let mut seen = std::collections::HashSet::new();
        self.sections()
            .into_iter()
            .filter(Section::is_good)
            .filter(|s| {
                let mut edges: Vec<usize> = s.darts.iter().map(|&d| self.map.edge_of(d)).collect();
                edges.sort_unstable();
                seen.insert(edges)
            })
            .collect()
    }

    /// The two xy-walks between edges at walk positions `i < j` of colour
    /// `c`: `(forward, backward)` where forward runs from the edge at `i` to
    /// the edge at `j`.
    fn xy_walks(&self, c: Colour, i: usize, j: usize) -> (Vec<Dart>, Vec<Dart>) {
        let w = &self.walks[c.index()].darts;
        let forward = w[i + 1..=j].to_vec();
        let mut backward = w[j + 1..].to_vec();
        backward.extend_from_slice(&w[..=i]);
        (forward, backward)
    }

    /// Every applicable shortcut, sorted by face then edge pair.
    pub fn find_shortcuts(&self) -> Vec<ShortcutMove> {
        let mut out = Vec::new();
        for (f, face) in self.faces().iter().enumerate() {
            let mut edges: Vec<usize> = face.darts.iter().map(|&d| self.map.edge_of(d)).collect();
            edges.sort_unstable();
            edges.dedup();
            for (a, &e1) in edges.iter().enumerate() {
                for &e2 in &edges[a + 1..] {
                    if self.colours[e1] != self.colours[e2] {
                        continue;
                    }
                    if let Some(m) = self.shortcut_unchecked(f, e1, e2) {
                        out.push(m);
                    }
                }
            }
        }
        out
    }

    /// The shortcut at the given face and same-coloured edge pair, if either
    /// xy-walk is colourful.
    pub fn shortcut_for(&self, face: usize, e1: usize, e2: usize) -> Option<ShortcutMove> {
        let n = self.colours.len();
        if e1 >= n || e2 >= n || e1 == e2 {
            return None;
        }
        let c = self.colours[e1];
        if self.colours[e2] != c {
            return None;
        }
        let f = self.faces().into_iter().nth(face)?;
        let on_face = |e: usize| f.darts.iter().any(|&d| self.map.edge_of(d) == e);
        if !on_face(e1) || !on_face(e2) {
            return None;
        }
        self.shortcut_unchecked(face, e1, e2)
    }

    fn shortcut_unchecked(&self, face: usize, e1: usize, e2: usize) -> Option<ShortcutMove> {
        let c = self.colours[e1];
        let (p1, p2) = (self.walk_pos[e1], self.walk_pos[e2]);
        let (i, j) = (p1.min(p2), p1.max(p2));
        let (forward, backward) = self.xy_walks(c, i, j);
        let fc = self.is_colourful(c, &forward);
        let bc = self.is_colourful(c, &backward);
        // `true` means the forward walk is discarded.
        let discard_forward = match (fc, bc) {
            (false, false) => return None,
            (true, false) => false,
            (false, true) => true,
            (true, true) => {
                let min_dart = |ds: &[Dart]| ds.iter().map(|d| d.0).min().unwrap_or(usize::MAX);
                match forward.len().cmp(&backward.len()) {
                    std::cmp::Ordering::Greater => true,
                    std::cmp::Ordering::Less => false,
                    std::cmp::Ordering::Equal => min_dart(&forward) < min_dart(&backward),
                }
            }
        };
        let w = &self.walks[c.index()].darts;
        let (ei, ej) = (self.map.edge_of(w[i]), self.map.edge_of(w[j]));
        let m = if discard_forward {
            ShortcutMove {
                face,
                colour: c,
                x_edge: ei,
                y_edge: ej,
                discarded: forward,
                kept: backward,
                kept_ends: (w[i], self.map.alpha(w[j])),
                discarded_colourful: bc && fc,
            }
        } else {
            ShortcutMove {
                face,
                colour: c,
                x_edge: ej,
                y_edge: ei,
                discarded: backward,
                kept: forward,
                kept_ends: (w[j], self.map.alpha(w[i])),
                discarded_colourful: bc && fc,
            }
        };
        Some(m)
    }

    /// Every Θ configuration, one per (u, C, e), sorted by `u`.
    pub fn find_thetas(&self) -> Vec<ThetaMove> {
        let map = &self.map;
        let faces = map.faces();
        let face_of = map.face_index();
        let face_edges = |f: usize| -> Vec<usize> {
            let mut es: Vec<usize> = faces[f].darts.iter().map(|&d| map.edge_of(d)).collect();
            es.sort_unstable();
            es
        };
        let mut out: Vec<ThetaMove> = Vec::new();
        let mut seen = HashSet::new();
        for u in 0..map.vertex_count() {
            let VertexType::Mono(colour) = self.types[u] else {
                continue;
            };
            for s in 0..4 {
                let d0 = Dart::new(u, s);
                let a1 = map.alpha(d0);
                let d1 = a1.opposite();
                let a2 = map.alpha(d1);
                let d2 = a2.opposite();
                let a3 = map.alpha(d2);
                let (v, w) = (a1.vertex(), a2.vertex());
                if a3.vertex() != u || a3.parity() == d0.parity() || v == u || w == u || v == w {
                    continue;
                }
                let (c0, c1, c2) = (map.edge_of(d0), map.edge_of(d1), map.edge_of(d2));
                for ov in [a1.ccw(), a1.cw()] {
                    let ow = map.alpha(ov);
                    if ow.vertex() != w || ow.parity() == a2.parity() {
                        continue;
                    }
                    let e = map.edge_of(ov);
                    let mut digon = vec![c1, e];
                    digon.sort_unstable();
                    let mut triangle = vec![c0, e, c2];
                    triangle.sort_unstable();
                    let sides = [face_edges(face_of[ov.0]), face_edges(face_of[ow.0])];
                    let empty = (sides[0] == digon && sides[1] == triangle)
                        || (sides[1] == digon && sides[0] == triangle);
                    if !empty {
                        continue;
                    }
                    let key = (u, e, c0.min(c2), c0.max(c2));
                    if seen.insert(key) {
                        out.push(ThetaMove {
                            u,
                            v,
                            w,
                            e,
                            colour,
                            cycle: [d0, d1, d2],
                        });
                    }
                }
            }
        }
        out
    }

    /// Leaving darts of the two v-walks at a monochromatic vertex: the walk
    /// leaving through the even slot first.
    pub fn vertex_walks(&self, v: usize) -> Option<[Vec<Dart>; 2]> {
        let VertexType::Mono(c) = self.types[v] else {
            return None;
        };
        let w = &self.walks[c.index()].darts;
        let visits: Vec<usize> = (0..w.len()).filter(|&k| w[k].vertex() == v).collect();
        debug_assert_eq!(visits.len(), 2);
        let (i, j) = (visits[0], visits[1]);
        let inner = w[i + 1..j].to_vec();
        let mut outer = w[j + 1..].to_vec();
        outer.extend_from_slice(&w[..i]);
        Some(if w[i].parity() == 0 {
            [inner, outer]
        } else {
            [outer, inner]
        })
    }

    pub fn structural_defects(&self) -> DefectReport {
        let mut report = DefectReport::default();
        let counts = self.type_counts();
        for (f, face) in self.faces().iter().enumerate() {
            if face.degree() != 2 {
                continue;
            }
            let [d1, d2] = [face.darts[0], face.darts[1]];
            let (u, v) = (d1.vertex(), d2.vertex());
            if u == v {
                continue;
            }
            let disposable = match self.types[u] {
                VertexType::Mono(_) => true,
                t => counts.of(t) > 2,
            };
            if disposable {
                report.disposable_digons.push(DisposableDigon {
                    face: f,
                    edges: [self.map.edge_of(d1), self.map.edge_of(d2)],
                    vertices: [u, v],
                });
            }
        }
        for v in 0..self.vertex_count() {
            let VertexType::Mono(c) = self.types[v] else {
                continue;
            };
            let walks = self.vertex_walks(v).unwrap();
            for k in 0..2 {
                if self.is_colourful(c, &walks[1 - k]) {
                    report.superfluous_walks.push(SuperfluousWalk {
                        vertex: v,
                        colour: c,
                        darts: walks[k].clone(),
                    });
                }
            }
        }
        report
    }

    /// True when no face boundary revisits a vertex.
    pub fn faces_are_cycles(&self) -> bool {
        self.faces().iter().all(|f| {
            let mut vs: Vec<usize> = f.darts.iter().map(|d| d.vertex()).collect();
            vs.sort_unstable();
            vs.windows(2).all(|p| p[0] != p[1])
        })
    }
}

/// `make_projection` in free-function form.
pub fn make_projection(map: PlanarMap, colours: Vec<Colour>) -> Result<Projection, ProjectionError> {
    Projection::new(map, colours)
}
