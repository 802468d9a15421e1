//! Over/under resolutions, the stored L6n1 resolutions of P1 and P2, and
//! lifting a resolution backwards through a reduction trace.

use thiserror::Error;

use crate::fixtures;
use crate::link_invariants::{is_l6n1, InvariantError, LinkDiagram};
use crate::planar_map::Dart;
use crate::projection::Projection;
use crate::reduction::{
    classify_irreducible, reduce, IrreducibleClass, ReductionError, ReductionTrace, ThetaStep, TraceStep,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolveError {
    #[error("resolution has {found} bits, projection has {expected} vertices")]
    LengthMismatch { expected: usize, found: usize },
    #[error("projection is not pairwise crossing")]
    NotPairwiseCrossing,
    #[error("projection is not an irreducible projection of the given class")]
    NotIrreducible,
    #[error("resolution has {found} bits, step post-state has {expected} vertices")]
    StepMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Reduction(ReductionError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
}

impl From<ReductionError> for ResolveError {
    fn from(e: ReductionError) -> Self {
        match e {
            ReductionError::NotPairwiseCrossing => ResolveError::NotPairwiseCrossing,
            ReductionError::NotIrreducible => ResolveError::NotIrreducible,
            e => ResolveError::Reduction(e),
        }
    }
}

/// Per-vertex over choice: `true` puts the slot-1/3 strand on top.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Resolution(Vec<bool>);

impl Resolution {
    pub fn new(bits: Vec<bool>) -> Self {
        Resolution(bits)
    }

    /// Bit `v` of `mask` for each of `n` vertices.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        Resolution((0..n).map(|v| mask >> v & 1 == 1).collect())
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, v: usize) -> bool {
        self.0[v]
    }

    /// True when the strand through `d` is over at its vertex.
    pub fn is_over(&self, d: Dart) -> bool {
        self.0[d.vertex()] == (d.parity() == 1)
    }

    pub fn mirrored(&self) -> Self {
        Resolution(self.0.iter().map(|b| !b).collect())
    }
}

/// The bit putting the strand through `d` over (or under).
pub fn bit_for(d: Dart, over: bool) -> bool {
    (d.parity() == 1) == over
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    projection: Projection,
    resolution: Resolution,
}

impl Diagram {
    pub fn new(projection: Projection, resolution: Resolution) -> Result<Self, ResolveError> {
        if projection.vertex_count() != resolution.len() {
            return Err(ResolveError::LengthMismatch {
                expected: projection.vertex_count(),
                found: resolution.len(),
            });
        }
        Ok(Diagram {
            projection,
            resolution,
        })
    }

    pub fn projection(&self) -> &Projection {
        &self.projection
    }

    pub fn resolution(&self) -> &Resolution {
        &self.resolution
    }

    pub fn link_diagram(&self) -> LinkDiagram {
        LinkDiagram::from_map(self.projection.map(), self.resolution.bits().to_vec())
            .expect("projection maps are valid diagrams")
    }
}

/// Least L6n1 resolution of the P1 fixture, by vertex.
pub const KRUPP_BASE: [bool; 6] = [false; 6];
/// Least L6n1 resolution of the P2 fixture, by vertex.
pub const NON_KRUPP_BASE: [bool; 6] = [false; 6];
/// Number of the 64 resolutions of each fixture that realize L6n1.
pub const KRUPP_REALIZING: usize = 8;
pub const NON_KRUPP_REALIZING: usize = 6;

/// Θ lift table, indexed by `2 * v + w` where `v`, `w` tell whether the
/// cycle strand is over at `v` and `w` after the split. Entries give, before
/// the split: whether the strand leaving `u` towards `v` is over at `u`, and
/// whether the cycle strand is over at `v` and at `w`.
pub const THETA_LIFT: [[bool; 3]; 4] = [
    [false, false, false],
    [true, true, false],
    [false, false, true],
    [false, false, false],
];

/// All resolutions of `p` that pass `is_l6n1`, in increasing mask order.
pub fn realizing_resolutions(p: &Projection) -> Result<Vec<Resolution>, ResolveError> {
    let n = p.vertex_count();
    let mut out = Vec::new();
    for mask in 0..1u64 << n {
        let r = Resolution::from_mask(n, mask);
        let d = Diagram::new(p.clone(), r.clone())?;
        if is_l6n1(&d.link_diagram())?.is_l6n1() {
            out.push(r);
        }
    }
    Ok(out)
}

/// The stored L6n1 resolution of the fixture of class `cls`, carried over
/// to `p` through a map isomorphism.
pub fn base_resolution(p: &Projection, cls: IrreducibleClass) -> Result<Resolution, ResolveError> {
    let (fixture, bits) = match cls {
        IrreducibleClass::Krupp => (fixtures::krupp(), KRUPP_BASE),
        IrreducibleClass::NonKrupp => (fixtures::non_krupp(), NON_KRUPP_BASE),
    };
    let iso = fixture
        .map()
        .isomorphism_to(p.map(), true)
        .ok_or(ResolveError::NotIrreducible)?;
    let mut out = vec![false; p.vertex_count()];
    for (v, &b) in bits.iter().enumerate() {
        let over = iso.map(Dart::new(v, usize::from(b)));
        out[over.vertex()] = over.parity() == 1;
    }
    Ok(Resolution(out))
}

/// Index into [`THETA_LIFT`] for a resolution of a Θ step's post-state.
pub fn theta_key(r: &Resolution, t: &ThetaStep) -> usize {
    let m = |v: usize| t.vertex_map[v].expect("v and w survive the split");
    let [_, d1, d2] = t.cycle;
    let key_v = r.get(m(t.v)) == (d1.parity() == 1);
    let key_w = r.get(m(t.w)) == (d2.parity() == 1);
    2 * usize::from(key_v) + usize::from(key_w)
}

/// Lifts through a Θ step using `entry` in place of the table row.
pub fn lift_theta_with(r: &Resolution, t: &ThetaStep, entry: [bool; 3]) -> Resolution {
    let [d0, d1, d2] = t.cycle;
    let [x, y, z] = entry;
    let mut bits: Vec<bool> = t.vertex_map.iter().map(|nv| nv.is_some_and(|nv| r.get(nv))).collect();
    bits[t.u] = bit_for(d0, x);
    bits[t.v] = bit_for(d1, y);
    bits[t.w] = bit_for(d2, z);
    Resolution(bits)
}

/// Carries a resolution of a step's post-state back to its pre-state.
pub fn lift_step(r: &Resolution, step: &TraceStep) -> Result<Resolution, ResolveError> {
    if r.len() != step.post_vertices() {
        return Err(ResolveError::StepMismatch {
            expected: step.post_vertices(),
            found: r.len(),
        });
    }
    let bits = match step {
        TraceStep::Shortcut(s) => {
            let mut bits = vec![false; s.vertex_map.len()];
            let mut visited = vec![false; s.vertex_map.len()];
            for (v, nv) in s.vertex_map.iter().enumerate() {
                if let Some(nv) = nv {
                    bits[v] = r.get(*nv);
                    visited[v] = true;
                }
            }
            // Descending walk from x to y: the first passage is over.
            for d in &s.discarded {
                if !visited[d.vertex()] {
                    visited[d.vertex()] = true;
                    bits[d.vertex()] = bit_for(*d, true);
                }
            }
            bits
        }
        TraceStep::Theta(t) => return Ok(lift_theta_with(r, t, THETA_LIFT[theta_key(r, t)])),
    };
    Ok(Resolution(bits))
}

/// Orientation anchors for a step's post-state matching the canonical
/// orientation of its pre-state: `(post dart, leaving)` pairs, one per
/// component.
pub fn transported_anchors(pre: &Projection, step: &TraceStep) -> Vec<(usize, bool)> {
    let map = pre.map();
    let link = LinkDiagram::from_map(map, vec![false; map.vertex_count()]).expect("valid map");
    let canon = link.canonical_orientation();
    let vm = step.vertex_map();
    let post = |d: Dart| Dart::new(vm[d.vertex()].unwrap(), d.slot()).0;
    let reversed: Vec<Dart> = match step {
        TraceStep::Shortcut(_) => Vec::new(),
        TraceStep::Theta(t) => {
            let [d0, d1, d2] = t.cycle;
            vec![map.alpha(d0), d1, map.alpha(d1), d2]
        }
    };
    let mut out = Vec::new();
    for walk in link.components() {
        let darts = walk.iter().flat_map(|&d| [Dart(d), map.alpha(Dart(d))]);
        let mut fallback = None;
        let mut anchor = None;
        for d in darts {
            if vm[d.vertex()].is_none() {
                continue;
            }
            if reversed.contains(&d) {
                fallback.get_or_insert((post(d), !canon.is_leaving(d)));
            } else {
                anchor = Some((post(d), canon.is_leaving(d)));
                break;
            }
        }
        if let Some(a) = anchor.or(fallback) {
            out.push(a);
        }
    }
    out
}

/// A resolution for every state of a trace, lifted from the base
/// resolution of its irreducible end.
pub fn lift_trace(trace: &ReductionTrace) -> Result<Vec<Diagram>, ResolveError> {
    let last = trace.final_projection();
    let cls = classify_irreducible(last)?;
    let mut r = base_resolution(last, cls)?;
    let mut out = vec![Diagram::new(last.clone(), r.clone())?];
    for (k, step) in trace.steps.iter().enumerate().rev() {
        r = lift_step(&r, step)?;
        out.push(Diagram::new(trace.states[k].clone(), r.clone())?);
    }
    out.reverse();
    Ok(out)
}

/// An L6n1 diagram on `p`.
pub fn resolve_l6n1(p: &Projection) -> Result<Diagram, ResolveError> {
    let (_, trace) = reduce(p)?;
    Ok(lift_trace(&trace)?.swap_remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::{graft_theta, random_projection};
    use crate::link_invariants::jones;
    use crate::reduction::apply_theta_split;

    fn invariants(p: &Projection, r: &Resolution, anchors: Option<&[(usize, bool)]>) -> (String, Vec<i64>) {
        let l = LinkDiagram::from_map(p.map(), r.bits().to_vec()).unwrap();
        let o = match anchors {
            Some(a) => l.orientation_from_anchors(a),
            None => l.canonical_orientation(),
        };
        let mut lk = l.linking_numbers(&o);
        lk.sort_unstable();
        (jones(&l, &o).unwrap().to_string(), lk)
    }

    fn theta_family() -> Vec<Projection> {
        let mut out = vec![fixtures::theta(), fixtures::lone_theta()];
        for seed in 0..6 {
            let p = random_projection(7, seed).unwrap();
            for (i, f) in p.faces().iter().enumerate() {
                if f.degree() == 2 {
                    out.extend(graft_theta(&p, i).ok());
                }
            }
        }
        out
    }

    /// Table entries that keep Jones and linking numbers for every post-state
    /// resolution of every Θ in the family, as 3-bit masks per key.
    #[test]
    fn theta_lift_table_matches_oracle() {
        let mut ok = [[true; 8]; 4];
        let mut seen = [false; 4];
        for p in theta_family() {
            for m in p.find_thetas() {
                let (post, step) = apply_theta_split(&p, &m).unwrap();
                let TraceStep::Theta(t) = &step else { unreachable!() };
                let anchors = transported_anchors(&p, &step);
                let n = post.vertex_count();
                for mask in 0..1u64 << n {
                    let r = Resolution::from_mask(n, mask);
                    let target = invariants(&post, &r, Some(&anchors));
                    let k = theta_key(&r, t);
                    seen[k] = true;
                    for (e, flag) in ok[k].iter_mut().enumerate() {
                        let entry = [e & 4 != 0, e & 2 != 0, e & 1 != 0];
                        *flag &= invariants(&p, &lift_theta_with(&r, t, entry), None) == target;
                    }
                }
            }
        }
        assert_eq!(seen, [true; 4]);
        let passing: Vec<Vec<usize>> = ok.iter().map(|row| (0..8).filter(|&e| row[e]).collect()).collect();
        assert_eq!(passing, [vec![0, 3, 4, 7], vec![6], vec![1], vec![0, 3, 4, 7]]);
        for (k, row) in passing.iter().enumerate() {
            let e = row[0];
            assert_eq!(THETA_LIFT[k], [e & 4 != 0, e & 2 != 0, e & 1 != 0]);
        }
    }

    #[test]
    fn stored_base_resolutions_are_least() {
        for (p, bits, count) in [
            (fixtures::krupp(), KRUPP_BASE, KRUPP_REALIZING),
            (fixtures::non_krupp(), NON_KRUPP_BASE, NON_KRUPP_REALIZING),
        ] {
            let all = realizing_resolutions(&p).unwrap();
            let least = all.iter().min().unwrap();
            assert_eq!(all.len(), count);
            assert_eq!(least.bits(), bits);
        }
    }
}
