//! Canonical forms and isomorphism witnesses.
//!
//! A connected map is relabeled by breadth-first search from a root dart:
//! the root's vertex becomes vertex 0 with the root in slot 0, the remaining
//! slots follow the rotation (or its inverse for the mirrored search), and
//! darts are then scanned in label order, each newly reached vertex taking
//! the next label with the entering dart in slot 0. The code is the
//! relabeled `alpha`; the canonical code is the least over all roots.

use std::cmp::Ordering;

use super::{Dart, PlanarMap};

const UNSET: usize = usize::MAX;

/// Sorted per-component canonical codes. Equal forms mean isomorphic maps.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    pub components: Vec<Vec<u32>>,
}

/// A dart bijection between two maps that commutes with `alpha`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isomorphism {
    darts: Vec<Dart>,
    /// Set when at least one component is matched with reversed rotation.
    pub reflected: bool,
}

impl Isomorphism {
    #[inline]
    pub fn map(&self, d: Dart) -> Dart {
        self.darts[d.0]
    }

    pub fn darts(&self) -> &[Dart] {
        &self.darts
    }
}

struct Labeling {
    code: Vec<u32>,
    /// `order[k]` is the old dart receiving label `k`.
    order: Vec<Dart>,
    mirrored: bool,
}

/// BFS relabeling from `root`. Returns `None` as soon as the code is known to
/// exceed `bound`.
fn bfs_code(
    map: &PlanarMap,
    root: Dart,
    mirrored: bool,
    bound: Option<&[u32]>,
    label: &mut [usize],
) -> Option<Labeling> {
    let rot = |d: Dart| if mirrored { d.cw() } else { d.ccw() };
    let mut order: Vec<Dart> = Vec::new();
    let open = |start: Dart, order: &mut Vec<Dart>, label: &mut [usize]| {
        let mut d = start;
        for _ in 0..4 {
            label[d.0] = order.len();
            order.push(d);
            d = rot(d);
        }
    };
    open(root, &mut order, label);
    let mut code = Vec::new();
    let mut tight = bound.is_some();
    let mut i = 0;
    let mut result = true;
    while i < order.len() {
        let p = map.alpha(order[i]);
        if label[p.0] == UNSET {
            open(p, &mut order, label);
        }
        let c = label[p.0] as u32;
        if tight {
            let b = bound.unwrap();
            match c.cmp(&b[i]) {
                Ordering::Greater => {
                    result = false;
                    break;
                }
                Ordering::Less => tight = false,
                Ordering::Equal => {}
            }
        }
        code.push(c);
        i += 1;
    }
    for d in &order {
        label[d.0] = UNSET;
    }
    if result {
        Some(Labeling {
            code,
            order,
            mirrored,
        })
    } else {
        None
    }
}

fn component_roots(map: &PlanarMap) -> Vec<Vec<Dart>> {
    let comp = map.components();
    let count = comp.iter().copied().max().map_or(0, |m| m + 1);
    let mut roots = vec![Vec::new(); count];
    for d in map.darts() {
        roots[comp[d.vertex()]].push(d);
    }
    roots
}

fn best_labeling(map: &PlanarMap, roots: &[Dart], allow_reflection: bool, label: &mut [usize]) -> Labeling {
    let mut best: Option<Labeling> = None;
    let orientations: &[bool] = if allow_reflection { &[false, true] } else { &[false] };
    for &mirrored in orientations {
        for &r in roots {
            let bound = best.as_ref().map(|b| b.code.as_slice());
            if let Some(l) = bfs_code(map, r, mirrored, bound, label) {
                if best.as_ref().is_none_or(|b| l.code < b.code) {
                    best = Some(l);
                }
            }
        }
    }
    best.expect("component has at least one dart")
}

fn labelings(map: &PlanarMap, allow_reflection: bool) -> Vec<Labeling> {
    let mut label = vec![UNSET; map.dart_count()];
    let mut out: Vec<Labeling> = component_roots(map)
        .iter()
        .map(|roots| best_labeling(map, roots, allow_reflection, &mut label))
        .collect();
    out.sort_by(|a, b| a.code.cmp(&b.code));
    out
}

pub(super) fn canonical_form(map: &PlanarMap, allow_reflection: bool) -> CanonicalForm {
    CanonicalForm {
        components: labelings(map, allow_reflection)
            .into_iter()
            .map(|l| l.code)
            .collect(),
    }
}

pub(super) fn find_isomorphism(a: &PlanarMap, b: &PlanarMap, allow_reflection: bool) -> Option<Isomorphism> {
    if a.vertex_count() != b.vertex_count() {
        return None;
    }
    let la = labelings(a, allow_reflection);
    let lb = labelings(b, allow_reflection);
    if la.len() != lb.len() || la.iter().zip(&lb).any(|(x, y)| x.code != y.code) {
        return None;
    }
    let mut darts = vec![Dart(UNSET); a.dart_count()];
    let mut reflected = false;
    for (x, y) in la.iter().zip(&lb) {
        reflected |= x.mirrored != y.mirrored;
        for (&da, &db) in x.order.iter().zip(&y.order) {
            darts[da.0] = db;
        }
    }
    Some(Isomorphism { darts, reflected })
}

/// True when the BFS code rooted at dart 0 (unmirrored) is the least code of
/// this connected map. Used for orderly generation.
pub(crate) fn root_code_is_minimal(map: &PlanarMap, allow_reflection: bool) -> bool {
    let mut label = vec![UNSET; map.dart_count()];
    let base = bfs_code(map, Dart(0), false, None, &mut label).expect("unbounded search");
    let orientations: &[bool] = if allow_reflection { &[false, true] } else { &[false] };
    for &mirrored in orientations {
        for r in map.darts() {
            if r == Dart(0) && !mirrored {
                continue;
            }
            if let Some(l) = bfs_code(map, r, mirrored, Some(&base.code), &mut label) {
                if l.code < base.code {
                    return false;
                }
            }
        }
    }
    true
}
