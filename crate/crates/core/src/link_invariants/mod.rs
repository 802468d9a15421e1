//! Kauffman bracket, writhe, Jones polynomial and linking numbers, plus the
//! L6n1 acceptance predicate.
//!
//! A crossing's over bit selects the over strand: `true` puts the slot-1/3
//! strand on top. With over parity `j`, the A-smoothing joins slots
//! `(j+1, j+2)` and `(j+3, j)`, the B-smoothing `(j, j+1)` and `(j+2, j+3)`.

mod laurent;

use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use num_bigint::BigInt;
use rayon::prelude::*;
use thiserror::Error;

pub use laurent::LaurentPolynomial;

use crate::fixtures::L6N1_PD;
use crate::planar_map::{Dart, PlanarMap};

pub const DEFAULT_CROSSING_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("diagram has {crossings} crossings, above the cap of {cap}")]
    TooManyCrossings { crossings: usize, cap: usize },
    #[error("expected 3 components, found {0}")]
    WrongComponentCount(usize),
    #[error("dart pairing is not a fixed-point-free involution at dart {0}")]
    NotInvolution(usize),
    #[error("over bits cover {found} crossings, expected {expected}")]
    OverCount { expected: usize, found: usize },
    #[error("arc {0} does not appear exactly twice in the PD code")]
    BadPdArc(usize),
}

/// An unoriented link diagram: crossings joined by a dart pairing, plus
/// crossing-free circles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkDiagram {
    alpha: Vec<usize>,
    over: Vec<bool>,
    free_loops: usize,
}

impl LinkDiagram {
    pub fn new(alpha: Vec<usize>, over: Vec<bool>, free_loops: usize) -> Result<Self, InvariantError> {
        if !alpha.len().is_multiple_of(4) || over.len() != alpha.len() / 4 {
            return Err(InvariantError::OverCount {
                expected: alpha.len() / 4,
                found: over.len(),
            });
        }
        for (d, &p) in alpha.iter().enumerate() {
            if p >= alpha.len() || p == d || alpha[p] != d {
                return Err(InvariantError::NotInvolution(d));
            }
        }
        Ok(LinkDiagram {
            alpha,
            over,
            free_loops,
        })
    }

    pub fn from_map(map: &PlanarMap, over: Vec<bool>) -> Result<Self, InvariantError> {
        let alpha = map.darts().map(|d| map.alpha(d).0).collect();
        Self::new(alpha, over, 0)
    }

    /// PD code, one `[a, b, c, d]` per crossing listing arcs counterclockwise
    /// from the incoming under-arc.
    pub fn from_pd(pd: &[[usize; 4]]) -> Result<Self, InvariantError> {
        let mut seen: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (k, x) in pd.iter().enumerate() {
            for (i, &arc) in x.iter().enumerate() {
                seen.entry(arc).or_default().push(4 * k + i);
            }
        }
        let mut alpha = vec![usize::MAX; 4 * pd.len()];
        for (&arc, ds) in &seen {
            if ds.len() != 2 {
                return Err(InvariantError::BadPdArc(arc));
            }
            alpha[ds[0]] = ds[1];
            alpha[ds[1]] = ds[0];
        }
        Self::new(alpha, vec![true; pd.len()], 0)
    }

    /// A single crossing-free circle.
    pub fn unknot() -> Self {
        LinkDiagram {
            alpha: Vec::new(),
            over: Vec::new(),
            free_loops: 1,
        }
    }

    pub fn crossing_count(&self) -> usize {
        self.over.len()
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    pub fn over(&self) -> &[bool] {
        &self.over
    }

    pub fn alpha(&self) -> &[usize] {
        &self.alpha
    }

    /// All crossings switched.
    pub fn mirror(&self) -> Self {
        LinkDiagram {
            alpha: self.alpha.clone(),
            over: self.over.iter().map(|b| !b).collect(),
            free_loops: self.free_loops,
        }
    }

    /// Disjoint union with extra crossing-free circles.
    pub fn with_free_loops(&self, extra: usize) -> Self {
        LinkDiagram {
            free_loops: self.free_loops + extra,
            ..self.clone()
        }
    }

    /// Components with crossings, each as its leaving darts from the minimum
    /// dart. Free loops are not listed.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.alpha.len()];
        let mut out = Vec::new();
        for s in 0..self.alpha.len() {
            if seen[s] {
                continue;
            }
            let mut walk = Vec::new();
            let mut d = s;
            while !seen[d] {
                seen[d] = true;
                seen[self.alpha[d]] = true;
                walk.push(d);
                d = self.alpha[d] ^ 2;
            }
            out.push(walk);
        }
        out
    }

    pub fn component_count(&self) -> usize {
        self.components().len() + self.free_loops
    }

    /// `component_of()[d]` is the index in [`components`](Self::components)
    /// of the component through dart `d`.
    pub fn component_of(&self) -> Vec<usize> {
        let mut out = vec![0; self.alpha.len()];
        for (i, walk) in self.components().iter().enumerate() {
            for &d in walk {
                out[d] = i;
                out[self.alpha[d]] = i;
            }
        }
        out
    }

    /// Orientation with every component following its canonical walk.
    pub fn canonical_orientation(&self) -> Orientation {
        Orientation::from_leaving(self, &vec![false; self.components().len()])
    }

    /// Orientation with component `i` reversed when `reversed[i]`.
    pub fn orientation(&self, reversed: &[bool]) -> Orientation {
        Orientation::from_leaving(self, reversed)
    }

    /// Orientation in which each anchor `(d, leaving)` traverses dart `d`
    /// away from its crossing exactly when `leaving`. Components without an
    /// anchor keep their canonical direction.
    pub fn orientation_from_anchors(&self, anchors: &[(usize, bool)]) -> Orientation {
        let canon = self.canonical_orientation();
        let comp = self.component_of();
        let mut reversed = vec![false; self.components().len()];
        for &(a, leaving) in anchors {
            reversed[comp[a]] = canon.leaving[a] != leaving;
        }
        Orientation::from_leaving(self, &reversed)
    }

    /// Sign of crossing `v`: +1 when the over strand leaves one slot
    /// counterclockwise from where the under strand enters.
    pub fn crossing_sign(&self, v: usize, o: &Orientation) -> i64 {
        let j = usize::from(self.over[v]);
        let under_in = [(j + 1) % 4, (j + 3) % 4]
            .into_iter()
            .find(|&s| !o.leaving[4 * v + s])
            .unwrap();
        let over_out = [j, j + 2].into_iter().find(|&s| o.leaving[4 * v + s]).unwrap();
        if over_out == (under_in + 1) % 4 {
            1
        } else {
            -1
        }
    }

    pub fn writhe(&self, o: &Orientation) -> i64 {
        (0..self.crossing_count()).map(|v| self.crossing_sign(v, o)).sum()
    }

    /// Linking number between components `i` and `j`.
    pub fn linking_number(&self, i: usize, j: usize, o: &Orientation) -> i64 {
        let comp = self.component_of();
        let mut total = 0;
        for v in 0..self.crossing_count() {
            let (a, b) = (comp[4 * v], comp[4 * v + 1]);
            if (a == i && b == j) || (a == j && b == i) {
                total += self.crossing_sign(v, o);
            }
        }
        total / 2
    }

    /// Linking numbers of all component pairs `(i, j)`, `i < j`, in
    /// lexicographic order.
    pub fn linking_numbers(&self, o: &Orientation) -> Vec<i64> {
        let n = self.components().len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                out.push(self.linking_number(i, j, o));
            }
        }
        out
    }

    fn smoothing_partner(&self, d: usize, a_smoothing: bool) -> usize {
        let (v, s) = (d / 4, d % 4);
        let j = usize::from(self.over[v]);
        // Offset from j: A pairs {1,2},{3,0}; B pairs {0,1},{2,3}.
        let k = (s + 4 - j) % 4;
        let partner = if a_smoothing {
            [3, 2, 1, 0][k]
        } else {
            [1, 0, 3, 2][k]
        };
        4 * v + (partner + j) % 4
    }

    /// Loops of the state whose bit `v` selects the B-smoothing at `v`.
    fn state_loops(&self, state: u64, seen: &mut [bool]) -> usize {
        seen.fill(false);
        let mut loops = self.free_loops;
        for s in 0..self.alpha.len() {
            if seen[s] {
                continue;
            }
            loops += 1;
            let mut d = s;
            while !seen[d] {
                seen[d] = true;
                let p = self.alpha[d];
                seen[p] = true;
                d = self.smoothing_partner(p, state >> (p / 4) & 1 == 0);
            }
        }
        loops
    }
}

/// Per-dart direction flags: `leaving[d]` when the orientation traverses `d`
/// away from its crossing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orientation {
    leaving: Vec<bool>,
}

impl Orientation {
    fn from_leaving(d: &LinkDiagram, reversed: &[bool]) -> Self {
        let mut leaving = vec![false; d.alpha.len()];
        for (i, walk) in d.components().iter().enumerate() {
            for &x in walk {
                if reversed.get(i).copied().unwrap_or(false) {
                    leaving[d.alpha[x]] = true;
                } else {
                    leaving[x] = true;
                }
            }
        }
        Orientation { leaving }
    }

    pub fn is_leaving(&self, d: Dart) -> bool {
        self.leaving[d.0]
    }
}

fn check_cap(d: &LinkDiagram, cap: usize) -> Result<(), InvariantError> {
    if d.crossing_count() > cap {
        return Err(InvariantError::TooManyCrossings {
            crossings: d.crossing_count(),
            cap,
        });
    }
    Ok(())
}

fn from_histogram(n: usize, hist: &[Vec<i64>]) -> LaurentPolynomial {
    let delta = LaurentPolynomial::delta();
    let mut powers = vec![LaurentPolynomial::one()];
    let mut out = LaurentPolynomial::zero();
    for (a, row) in hist.iter().enumerate() {
        for (loops, &count) in row.iter().enumerate() {
            if count == 0 {
                continue;
            }
            while powers.len() < loops.max(1) {
                let next = powers.last().unwrap() * &delta;
                powers.push(next);
            }
            let term = powers[loops.max(1) - 1].shift(2 * a as i64 - n as i64);
            out = &out + &(&term * &LaurentPolynomial::monomial(BigInt::from(count), 0));
        }
    }
    out
}

/// Kauffman bracket with the default crossing cap.
pub fn kauffman_bracket(d: &LinkDiagram) -> Result<LaurentPolynomial, InvariantError> {
    kauffman_bracket_capped(d, DEFAULT_CROSSING_CAP)
}

/// State sum `Σ A^(a-b) δ^(loops-1)`, normalized so one circle gives 1. The
/// empty diagram also gives 1.
pub fn kauffman_bracket_capped(d: &LinkDiagram, cap: usize) -> Result<LaurentPolynomial, InvariantError> {
    check_cap(d, cap)?;
    let n = d.crossing_count();
    if n == 0 && d.free_loops == 0 {
        return Ok(LaurentPolynomial::one());
    }
    let rows = 2 * n + d.free_loops + 2;
    let states: u64 = 1 << n;
    let chunk = 1u64 << n.saturating_sub(6).min(14);
    let hist = (0..states.div_ceil(chunk))
        .into_par_iter()
        .map(|c| {
            let mut hist = vec![vec![0i64; rows]; n + 1];
            let mut seen = vec![false; d.alpha.len()];
            for s in c * chunk..((c + 1) * chunk).min(states) {
                let a = n - s.count_ones() as usize;
                hist[a][d.state_loops(s, &mut seen)] += 1;
            }
            hist
        })
        .reduce(
            || vec![vec![0i64; rows]; n + 1],
            |mut x, y| {
                for (rx, ry) in x.iter_mut().zip(&y) {
                    for (a, b) in rx.iter_mut().zip(ry) {
                        *a += b;
                    }
                }
                x
            },
        );
    Ok(from_histogram(n, &hist))
}

/// The same bracket computed by contracting crossings one at a time in
/// `order`, tracking how open strand ends are joined.
pub fn bracket_by_contraction(d: &LinkDiagram, order: &[usize]) -> LaurentPolynomial {
    let n = d.crossing_count();
    assert_eq!(order.len(), n);
    let mut processed = vec![false; n];
    // Matching of open darts -> histogram over (A-count, closed loops).
    let mut states: HashMap<Vec<(usize, usize)>, HashMap<(usize, usize), i64>> = HashMap::new();
    states.insert(Vec::new(), HashMap::from([((0, 0), 1)]));
    for &v in order {
        processed[v] = true;
        let mut next: HashMap<Vec<(usize, usize)>, HashMap<(usize, usize), i64>> = HashMap::new();
        for (matching, hist) in &states {
            let mut link: HashMap<usize, Vec<usize>> = HashMap::new();
            for &(x, y) in matching {
                link.entry(x).or_default().push(y);
                link.entry(y).or_default().push(x);
            }
            for x in 4 * v..4 * v + 4 {
                let p = d.alpha[x];
                if processed[p / 4] && (p / 4 != v || x < p) {
                    link.entry(x).or_default().push(p);
                    link.entry(p).or_default().push(x);
                }
            }
            for a_smoothing in [true, false] {
                let mut g = link.clone();
                for x in 4 * v..4 * v + 4 {
                    g.entry(x).or_default().push(d.smoothing_partner(x, a_smoothing));
                }
                let (pairs, closed) = trace_paths(&g);
                let entry = next.entry(pairs).or_default();
                for (&(a, loops), &count) in hist {
                    *entry
                        .entry((a + usize::from(a_smoothing), loops + closed))
                        .or_insert(0) += count;
                }
            }
        }
        states = next;
    }
    let rows = 2 * n + d.free_loops + 2;
    let mut out = vec![vec![0i64; rows]; n + 1];
    for (&(a, loops), &count) in &states[&Vec::new()] {
        out[a][loops + d.free_loops] += count;
    }
    if n == 0 && d.free_loops == 0 {
        return LaurentPolynomial::one();
    }
    from_histogram(n, &out)
}

/// Follows paths in a graph of maximum degree 2. Returns the endpoint
/// pairing and the number of cycles.
fn trace_paths(g: &HashMap<usize, Vec<usize>>) -> (Vec<(usize, usize)>, usize) {
    let mut nodes: Vec<usize> = g.keys().copied().collect();
    nodes.sort_unstable();
    let mut seen: HashMap<usize, bool> = HashMap::new();
    let mut pairs = Vec::new();
    for &s in &nodes {
        if g[&s].len() != 1 || seen.contains_key(&s) {
            continue;
        }
        let (mut prev, mut cur) = (usize::MAX, s);
        loop {
            seen.insert(cur, true);
            let nb = &g[&cur];
            let nxt = nb.iter().copied().find(|&y| y != prev && !seen.contains_key(&y));
            match nxt {
                Some(y) => {
                    prev = cur;
                    cur = y;
                }
                None => break,
            }
        }
        pairs.push((s.min(cur), s.max(cur)));
    }
    let mut cycles = 0;
    for &s in &nodes {
        if seen.contains_key(&s) {
            continue;
        }
        cycles += 1;
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            if seen.insert(x, true).is_some() {
                continue;
            }
            stack.extend(g[&x].iter().copied());
        }
    }
    pairs.sort_unstable();
    (pairs, cycles)
}

/// `(-A^3)^(-w) <D>` with the default crossing cap.
pub fn jones(d: &LinkDiagram, o: &Orientation) -> Result<LaurentPolynomial, InvariantError> {
    jones_capped(d, o, DEFAULT_CROSSING_CAP)
}

pub fn jones_capped(d: &LinkDiagram, o: &Orientation, cap: usize) -> Result<LaurentPolynomial, InvariantError> {
    let bracket = kauffman_bracket_capped(d, cap)?;
    Ok(normalize(&bracket, d.writhe(o)))
}

/// `(-A^3)^(-w) * bracket`.
pub fn normalize(bracket: &LaurentPolynomial, writhe: i64) -> LaurentPolynomial {
    let sign = if writhe % 2 == 0 { 1 } else { -1 };
    &bracket.shift(-3 * writhe) * &LaurentPolynomial::monomial(sign, 0)
}

/// Every Jones polynomial of an oriented version of `d` or its mirror.
pub fn jones_orbit(d: &LinkDiagram, cap: usize) -> Result<Vec<LaurentPolynomial>, InvariantError> {
    let k = d.components().len();
    let mut out = Vec::new();
    for diagram in [d.clone(), d.mirror()] {
        let bracket = kauffman_bracket_capped(&diagram, cap)?;
        for mask in 0..1u32 << k {
            let reversed: Vec<bool> = (0..k).map(|i| mask >> i & 1 == 1).collect();
            let o = diagram.orientation(&reversed);
            out.push(normalize(&bracket, diagram.writhe(&o)));
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// The L6n1 reference diagram and its accepted invariants.
#[derive(Debug, Clone)]
pub struct L6n1Reference {
    pub diagram: LinkDiagram,
    pub jones_set: Vec<LaurentPolynomial>,
    pub linking_profile: [i64; 3],
}

pub fn l6n1_reference() -> &'static L6n1Reference {
    static REFERENCE: OnceLock<L6n1Reference> = OnceLock::new();
    REFERENCE.get_or_init(|| {
        let diagram = LinkDiagram::from_pd(&L6N1_PD).expect("reference PD is well formed");
        let jones_set = jones_orbit(&diagram, DEFAULT_CROSSING_CAP).expect("six crossings");
        let mut profile: Vec<i64> = diagram
            .linking_numbers(&diagram.canonical_orientation())
            .iter()
            .map(|x| x.abs())
            .collect();
        profile.sort_unstable();
        L6n1Reference {
            diagram,
            jones_set,
            linking_profile: [profile[0], profile[1], profile[2]],
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct L6n1Report {
    /// Linking numbers of component pairs (0,1), (0,2), (1,2).
    pub linking: [i64; 3],
    pub jones: LaurentPolynomial,
    pub profile_matches: bool,
    pub jones_matches: bool,
}

impl L6n1Report {
    pub fn is_l6n1(&self) -> bool {
        self.profile_matches && self.jones_matches
    }
}

pub fn is_l6n1(d: &LinkDiagram) -> Result<L6n1Report, InvariantError> {
    is_l6n1_capped(d, DEFAULT_CROSSING_CAP)
}

pub fn is_l6n1_capped(d: &LinkDiagram, cap: usize) -> Result<L6n1Report, InvariantError> {
    let k = d.component_count();
    if k != 3 {
        return Err(InvariantError::WrongComponentCount(k));
    }
    check_cap(d, cap)?;
    let reference = l6n1_reference();
    let o = d.canonical_orientation();
    let lk = d.linking_numbers(&o);
    let mut linking = [0i64; 3];
    linking[..lk.len()].copy_from_slice(&lk);
    let mut profile = linking.map(i64::abs);
    profile.sort_unstable();
    let jones = jones_capped(d, &o, cap)?;
    let jones_matches = reference.jones_set.binary_search(&jones).is_ok();
    Ok(L6n1Report {
        linking,
        profile_matches: profile == reference.linking_profile,
        jones,
        jones_matches,
    })
}
