//! Reference projections and the L6n1 reference diagram.

use crate::format::parse_projection;
use crate::generator::{add_kink, graft_theta, push_across};
use crate::planar_map::Dart;
use crate::projection::Projection;

pub const KRUPP_TEXT: &str = include_str!("../fixtures/p1_krupp.proj");
pub const NON_KRUPP_TEXT: &str = include_str!("../fixtures/p2_nonkrupp.proj");
pub const RED_GREEN_APART_TEXT: &str = include_str!("../fixtures/red_green_apart.proj");

/// Planar diagram code of L6n1 as the closure of the braid `(s1 s2)^3`.
/// Each crossing lists its four arcs counterclockwise starting with the
/// incoming under-arc.
pub const L6N1_PD: [[usize; 4]; 6] = [
    [3, 0, 1, 2],
    [6, 4, 5, 0],
    [5, 7, 8, 1],
    [4, 9, 10, 7],
    [10, 11, 2, 8],
    [9, 6, 3, 11],
];

/// Three pseudocircles crossing pairwise twice around a common triangle.
pub fn krupp() -> Projection {
    parse_projection(KRUPP_TEXT).expect("fixture parses")
}

/// Three pseudocircles crossing pairwise twice with no common triangle.
pub fn non_krupp() -> Projection {
    parse_projection(NON_KRUPP_TEXT).expect("fixture parses")
}

/// Red and green never meet.
pub fn red_green_apart() -> Projection {
    parse_projection(RED_GREEN_APART_TEXT).expect("fixture parses")
}

/// `non_krupp` with a Θ grafted onto its first digon face.
pub fn theta() -> Projection {
    let p = non_krupp();
    let face = p
        .faces()
        .iter()
        .position(|f| f.degree() == 2)
        .expect("non-Krupp has digon faces");
    graft_theta(&p, face).expect("graft is valid")
}

/// A 9-vertex projection with exactly one Θ: `non_krupp` with one edge
/// pushed across another, then a Θ grafted onto a digon.
pub fn lone_theta() -> Projection {
    let base = push_across(&non_krupp(), Dart(0), Dart(12)).expect("valid push");
    base.faces()
        .iter()
        .enumerate()
        .filter(|(_, f)| f.degree() == 2)
        .filter_map(|(i, _)| graft_theta(&base, i).ok())
        .find(|p| p.find_thetas().len() == 1)
        .expect("some graft leaves a single Θ")
}

/// A digon between two monochromatic vertices, from pushing an edge across
/// another edge of the same colour.
pub fn mono_digon() -> Projection {
    for base in [krupp(), non_krupp()] {
        for face in base.faces() {
            for &a in &face.darts {
                for &b in &face.darts {
                    let map = base.map();
                    if map.edge_of(a) != map.edge_of(b) && base.dart_colour(a) == base.dart_colour(b) {
                        if let Ok(p) = push_across(&base, a, b) {
                            return p;
                        }
                    }
                }
            }
        }
    }
    unreachable!("some face carries two edges of one colour")
}

/// `krupp` with a kink, whose vertex is a cut vertex.
pub fn cut_vertex() -> Projection {
    add_kink(&krupp(), Dart(0), false).expect("kink is valid")
}
