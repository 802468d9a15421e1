//! Shortcut and Θ-split moves, reduction traces and the classification of
//! irreducible projections.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::fixtures;
use crate::planar_map::{Dart, PlanarMap};
use crate::projection::{Colour, Projection, ProjectionError, ShortcutMove, ThetaMove};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("move does not apply to this projection")]
    MoveStale,
    #[error("neither smoothing or both smoothings of vertex {0} keep three single-walk colour classes")]
    NoValidSmoothing(usize),
    #[error("projection is not pairwise crossing")]
    NotPairwiseCrossing,
    #[error("projection is not irreducible")]
    NotIrreducible,
    #[error("irreducible projection matches neither P1 nor P2")]
    UnknownIrreducible,
    #[error("strand surgery closed a loop without crossings")]
    Degenerate,
    #[error("move produced an invalid projection: {0}")]
    Invalid(#[from] ProjectionError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IrreducibleClass {
    Krupp,
    NonKrupp,
}

impl fmt::Display for IrreducibleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IrreducibleClass::Krupp => "P1 (Krupp)",
            IrreducibleClass::NonKrupp => "P2 (non-Krupp)",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShortcutStep {
    pub face: usize,
    pub colour: Colour,
    pub x_edge: usize,
    pub y_edge: usize,
    /// Leaving darts of the discarded walk from `x` to `y` (pre-state ids).
    pub discarded: Vec<Dart>,
    pub kept: Vec<Dart>,
    /// `vertex_map[old]` is the post-state id of a surviving vertex.
    pub vertex_map: Vec<Option<usize>>,
    /// Removed vertices whose through-strand survives, with the post-state
    /// edge it merged into.
    pub splices: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaStep {
    pub u: usize,
    pub v: usize,
    pub w: usize,
    pub e: usize,
    pub colour: Colour,
    /// Leaving darts of the cycle at `u`, `v`, `w` (pre-state ids).
    pub cycle: [Dart; 3],
    /// 0 joins slots (0,1),(2,3) at `u`; 1 joins (1,2),(3,0).
    pub smooth: u8,
    pub vertex_map: Vec<Option<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceStep {
    Shortcut(ShortcutStep),
    Theta(ThetaStep),
}

impl TraceStep {
    pub fn vertex_map(&self) -> &[Option<usize>] {
        match self {
            TraceStep::Shortcut(s) => &s.vertex_map,
            TraceStep::Theta(t) => &t.vertex_map,
        }
    }

    pub fn pre_vertices(&self) -> usize {
        self.vertex_map().len()
    }

    pub fn post_vertices(&self) -> usize {
        self.vertex_map().iter().flatten().count()
    }

    pub fn line(&self) -> TraceLine {
        match self {
            TraceStep::Shortcut(s) => TraceLine::Shortcut {
                face: s.face,
                e: s.x_edge,
                e2: s.y_edge,
                discarded: s.discarded.iter().map(|d| d.0).collect(),
            },
            TraceStep::Theta(t) => TraceLine::Theta {
                u: t.u,
                v: t.v,
                w: t.w,
                e: t.e,
                smooth: t.smooth,
            },
        }
    }
}

/// One line of a serialized trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceLine {
    Shortcut {
        face: usize,
        e: usize,
        e2: usize,
        discarded: Vec<usize>,
    },
    Theta {
        u: usize,
        v: usize,
        w: usize,
        e: usize,
        smooth: u8,
    },
}

impl fmt::Display for TraceLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceLine::Shortcut { face, e, e2, discarded } => {
                let ds: Vec<String> = discarded.iter().map(usize::to_string).collect();
                write!(f, "SC face={face} e={e} e'={e2} discarded={}", ds.join(","))
            }
            TraceLine::Theta { u, v, w, e, smooth } => {
                write!(f, "TH u={u} v={v} w={w} e={e} smooth={smooth}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("trace line {line}: {reason}")]
pub struct TraceParseError {
    pub line: usize,
    pub reason: String,
}

fn parse_fields<'a>(
    toks: impl Iterator<Item = &'a str>,
    keys: &[&str],
) -> Result<Vec<&'a str>, String> {
    let toks: Vec<&str> = toks.collect();
    if toks.len() != keys.len() {
        return Err(format!("expected {} fields, found {}", keys.len(), toks.len()));
    }
    toks.iter()
        .zip(keys)
        .map(|(t, k)| {
            t.strip_prefix(k)
                .and_then(|r| r.strip_prefix('='))
                .ok_or_else(|| format!("expected `{k}=...`, found `{t}`"))
        })
        .collect()
}

fn num<T: FromStr>(s: &str) -> Result<T, String> {
    s.parse().map_err(|_| format!("invalid number `{s}`"))
}

impl FromStr for TraceLine {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let mut toks = s.split_whitespace();
        match toks.next() {
            Some("SC") => {
                let f = parse_fields(toks, &["face", "e", "e'", "discarded"])?;
                let discarded = f[3].split(',').map(num).collect::<Result<_, _>>()?;
                Ok(TraceLine::Shortcut {
                    face: num(f[0])?,
                    e: num(f[1])?,
                    e2: num(f[2])?,
                    discarded,
                })
            }
            Some("TH") => {
                let f = parse_fields(toks, &["u", "v", "w", "e", "smooth"])?;
                let smooth: u8 = num(f[4])?;
                if smooth > 1 {
                    return Err(format!("smooth must be 0 or 1, found {smooth}"));
                }
                Ok(TraceLine::Theta {
                    u: num(f[0])?,
                    v: num(f[1])?,
                    w: num(f[2])?,
                    e: num(f[3])?,
                    smooth,
                })
            }
            Some(other) => Err(format!("unknown step kind `{other}`")),
            None => Err("empty line".into()),
        }
    }
}

/// Parses a trace, skipping blank lines and `#` comments.
pub fn parse_trace(text: &str) -> Result<Vec<TraceLine>, TraceParseError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        out.push(line.parse().map_err(|reason| TraceParseError { line: i + 1, reason })?);
    }
    Ok(out)
}

/// Steps together with every intermediate projection: `states[k]` is the
/// pre-state of `steps[k]` and `states[k + 1]` its post-state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionTrace {
    pub states: Vec<Projection>,
    pub steps: Vec<TraceStep>,
}

impl ReductionTrace {
    pub fn initial(&self) -> &Projection {
        &self.states[0]
    }

    pub fn final_projection(&self) -> &Projection {
        self.states.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn to_text(&self) -> String {
        self.steps.iter().map(|s| format!("{}\n", s.line())).collect()
    }
}

/// Rebuilds `p` without the `removed` vertices. Strands are followed from
/// every surviving dart: `jump` may redirect a dart to a new partner, and
/// `through` continues a strand that arrives at a removed vertex.
fn splice(
    p: &Projection,
    removed: &[bool],
    jump: impl Fn(Dart) -> Option<Dart>,
    through: impl Fn(Dart) -> Dart,
) -> Result<(Projection, Vec<Option<usize>>, Vec<(usize, usize)>), ReductionError> {
    let map = p.map();
    let mut vertex_map = vec![None; map.vertex_count()];
    let mut next = 0;
    for (v, slot) in vertex_map.iter_mut().enumerate() {
        if !removed[v] {
            *slot = Some(next);
            next += 1;
        }
    }
    if next == 0 {
        return Err(ReductionError::Degenerate);
    }
    let mut done = vec![false; map.dart_count()];
    // (smallest old edge id on the chain, pair, colour, removed vertices passed)
    let mut chains: Vec<(usize, [Dart; 2], Colour, Vec<usize>)> = Vec::new();
    for s in map.darts() {
        if removed[s.vertex()] || done[s.0] {
            continue;
        }
        let mut cur = s;
        let mut key = usize::MAX;
        let mut passed = Vec::new();
        let mut steps = 0;
        let end = loop {
            steps += 1;
            if steps > map.dart_count() + 2 {
                return Err(ReductionError::Degenerate);
            }
            key = key.min(map.edge_of(cur));
            let arrival = match jump(cur) {
                Some(t) => {
                    key = key.min(map.edge_of(t));
                    t
                }
                None => map.alpha(cur),
            };
            if removed[arrival.vertex()] {
                passed.push(arrival.vertex());
                cur = through(arrival);
            } else {
                break arrival;
            }
        };
        if end == s || done[end.0] {
            return Err(ReductionError::Degenerate);
        }
        done[s.0] = true;
        done[end.0] = true;
        let rename = |d: Dart| Dart::new(vertex_map[d.vertex()].unwrap(), d.slot());
        chains.push((key, [rename(s), rename(end)], p.dart_colour(s), passed));
    }
    chains.sort_by_key(|c| c.0);
    let mut splices = Vec::new();
    for (id, c) in chains.iter().enumerate() {
        for &v in &c.3 {
            splices.push((v, id));
        }
    }
    splices.sort_unstable();
    splices.dedup();
    let edges = chains.iter().map(|c| c.1).collect();
    let colours = chains.iter().map(|c| c.2).collect();
    let map = PlanarMap::from_edges(next, edges).map_err(ProjectionError::from)?;
    Ok((Projection::new(map, colours)?, vertex_map, splices))
}

pub fn apply_shortcut(p: &Projection, m: &ShortcutMove) -> Result<(Projection, TraceStep), ReductionError> {
    if p.shortcut_for(m.face, m.x_edge, m.y_edge).as_ref() != Some(m) {
        return Err(ReductionError::MoveStale);
    }
    let mut removed = vec![false; p.vertex_count()];
    for d in &m.discarded {
        removed[d.vertex()] = true;
    }
    let (a, b) = m.kept_ends;
    let jump = |d: Dart| {
        if d == a {
            Some(b)
        } else if d == b {
            Some(a)
        } else {
            None
        }
    };
    let (post, vertex_map, splices) = splice(p, &removed, jump, Dart::opposite)?;
    let step = ShortcutStep {
        face: m.face,
        colour: m.colour,
        x_edge: m.x_edge,
        y_edge: m.y_edge,
        discarded: m.discarded.clone(),
        kept: m.kept.clone(),
        vertex_map,
        splices,
    };
    Ok((post, TraceStep::Shortcut(step)))
}

fn smooth_at(p: &Projection, u: usize, smooth: u8) -> Result<(Projection, Vec<Option<usize>>), ReductionError> {
    let mut removed = vec![false; p.vertex_count()];
    removed[u] = true;
    let partner = |d: Dart| {
        let s = d.slot();
        let t = if smooth == 0 { s ^ 1 } else { [3, 2, 1, 0][s] };
        Dart::new(d.vertex(), t)
    };
    let (post, vertex_map, _) = splice(p, &removed, |_| None, partner)?;
    Ok((post, vertex_map))
}

/// Splits `u` with a forced smoothing, without checking that the other one
/// fails.
pub fn apply_theta_split_with(
    p: &Projection,
    m: &ThetaMove,
    smooth: u8,
) -> Result<(Projection, TraceStep), ReductionError> {
    if !p.find_thetas().contains(m) {
        return Err(ReductionError::MoveStale);
    }
    let (post, vertex_map) = smooth_at(p, m.u, smooth)?;
    let step = ThetaStep {
        u: m.u,
        v: m.v,
        w: m.w,
        e: m.e,
        colour: m.colour,
        cycle: m.cycle,
        smooth,
        vertex_map,
    };
    Ok((post, TraceStep::Theta(step)))
}

pub fn apply_theta_split(p: &Projection, m: &ThetaMove) -> Result<(Projection, TraceStep), ReductionError> {
    if !p.find_thetas().contains(m) {
        return Err(ReductionError::MoveStale);
    }
    let ok: Vec<u8> = (0..2).filter(|&s| smooth_at(p, m.u, s).is_ok()).collect();
    match ok[..] {
        [s] => apply_theta_split_with(p, m, s),
        _ => Err(ReductionError::NoValidSmoothing(m.u)),
    }
}

pub fn is_irreducible(p: &Projection) -> bool {
    p.is_pairwise_crossing() && p.find_shortcuts().is_empty() && p.find_thetas().is_empty()
}

fn digon_faces(p: &Projection) -> usize {
    p.faces().iter().filter(|f| f.degree() == 2).count()
}

pub fn classify_irreducible(p: &Projection) -> Result<IrreducibleClass, ReductionError> {
    if !is_irreducible(p) {
        return Err(ReductionError::NotIrreducible);
    }
    let digons = digon_faces(p);
    if p.map().is_isomorphic(fixtures::krupp().map(), true) && digons == 0 {
        Ok(IrreducibleClass::Krupp)
    } else if p.map().is_isomorphic(fixtures::non_krupp().map(), true) && digons == 3 {
        Ok(IrreducibleClass::NonKrupp)
    } else {
        Err(ReductionError::UnknownIrreducible)
    }
}

enum Move {
    Shortcut(ShortcutMove),
    Theta(ThetaMove),
}

fn apply(p: &Projection, m: &Move) -> Result<(Projection, TraceStep), ReductionError> {
    match m {
        Move::Shortcut(s) => apply_shortcut(p, s),
        Move::Theta(t) => apply_theta_split(p, t),
    }
}

fn reduce_by(
    p: &Projection,
    mut choose: impl FnMut(Vec<Move>) -> Option<Move>,
) -> Result<(Projection, ReductionTrace), ReductionError> {
    if !p.is_pairwise_crossing() {
        return Err(ReductionError::NotPairwiseCrossing);
    }
    let mut trace = ReductionTrace {
        states: vec![p.clone()],
        steps: Vec::new(),
    };
    loop {
        let cur = trace.final_projection();
        let mut moves: Vec<Move> = cur.find_shortcuts().into_iter().map(Move::Shortcut).collect();
        moves.extend(cur.find_thetas().into_iter().map(Move::Theta));
        let Some(m) = choose(moves) else {
            break;
        };
        let (next, step) = apply(cur, &m)?;
        trace.states.push(next);
        trace.steps.push(step);
    }
    Ok((trace.final_projection().clone(), trace))
}

/// Reduces to an irreducible projection, always taking the first shortcut
/// (by face, then edge pair) and otherwise the first Θ (by `u`).
pub fn reduce(p: &Projection) -> Result<(Projection, ReductionTrace), ReductionError> {
    reduce_by(p, |moves| moves.into_iter().next())
}

/// Reduces choosing uniformly among all applicable moves.
pub fn reduce_randomly(p: &Projection, seed: u64) -> Result<(Projection, ReductionTrace), ReductionError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    reduce_by(p, |mut moves| {
        moves.shuffle(&mut rng);
        moves.pop()
    })
}

/// Applies serialized steps to `p`, checking each against the moves it
/// names.
pub fn replay(p: &Projection, lines: &[TraceLine]) -> Result<(Projection, ReductionTrace), ReductionError> {
    let mut trace = ReductionTrace {
        states: vec![p.clone()],
        steps: Vec::new(),
    };
    for line in lines {
        let cur = trace.final_projection();
        let (next, step) = match line {
            TraceLine::Shortcut { face, e, e2, discarded } => {
                let m = cur.shortcut_for(*face, *e, *e2).ok_or(ReductionError::MoveStale)?;
                if (m.x_edge, m.y_edge) != (*e, *e2) || m.discarded.iter().map(|d| d.0).ne(discarded.iter().copied()) {
                    return Err(ReductionError::MoveStale);
                }
                apply_shortcut(cur, &m)?
            }
            TraceLine::Theta { u, v, w, e, smooth } => {
                let m = cur
                    .find_thetas()
                    .into_iter()
                    .find(|t| (t.u, t.v, t.w, t.e) == (*u, *v, *w, *e))
                    .ok_or(ReductionError::MoveStale)?;
                let (next, step) = apply_theta_split(cur, &m)?;
                match &step {
                    TraceStep::Theta(t) if t.smooth == *smooth => (next, step),
                    _ => return Err(ReductionError::MoveStale),
                }
            }
        };
        trace.states.push(next);
        trace.steps.push(step);
    }
    Ok((trace.final_projection().clone(), trace))
}
