//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use l6n1_core::fixtures;
use l6n1_core::generator::EnumerationFilter;
use l6n1_core::link_invariants::{kauffman_bracket, LinkDiagram};
use l6n1_core::projection::Colour;
use l6n1_core::reduction::{classify_irreducible, is_irreducible, reduce, ReductionTrace, TraceStep};
use l6n1_core::resolver::{lift_trace, resolve_l6n1, transported_anchors, Resolution};
use l6n1_core::{
    enumerate_projections, is_l6n1, jones, random_projection, serialize_diagram, serialize_projection,
    LaurentPolynomial, PlanarMap, Projection,
};

type Outcome = Result<String, String>;

struct Corpus {
    /// Pairwise-crossing classes with at most 8 vertices.
    pairwise: Vec<Projection>,
    /// Non-pairwise-crossing classes with 6 to 8 vertices.
    others: Vec<Projection>,
    /// Seeded random projections with 7 to 14 vertices.
    random: Vec<Projection>,
}

fn corpus() -> Corpus {
    let mut pairwise = Vec::new();
    let mut others = Vec::new();
    for n in 1..=8 {
        for p in enumerate_projections(EnumerationFilter::new(n)).expect("within cap") {
            if p.is_pairwise_crossing() {
                pairwise.push(p);
            } else if n >= 6 {
                others.push(p);
            }
        }
    }
    let random = (0..500u64)
        .map(|seed| random_projection(7 + (seed % 8) as usize, seed).expect("random projection"))
        .collect();
    Corpus {
        pairwise,
        others,
        random,
    }
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn sufficiency(c: &Corpus) -> Outcome {
    for (i, p) in c.pairwise.iter().enumerate() {
        let d = resolve_l6n1(p).map_err(|e| format!("class {i}: {e}"))?;
        let report = is_l6n1(&d.link_diagram()).map_err(|e| format!("class {i}: {e}"))?;
        check(report.is_l6n1(), || format!("class {i} with {} vertices", p.vertex_count()))?;
    }
    Ok(format!("{} pairwise-crossing classes resolve to L6n1", c.pairwise.len()))
}

fn necessity(c: &Corpus) -> Outcome {
    let mut resolutions = 0usize;
    for (i, p) in c.others.iter().enumerate() {
        let n = p.vertex_count();
        for mask in 0..1u64 << n {
            let r = Resolution::from_mask(n, mask);
            let d = LinkDiagram::from_map(p.map(), r.bits().to_vec()).map_err(|e| e.to_string())?;
            let lk = d.linking_numbers(&d.canonical_orientation());
            check(lk.contains(&0), || format!("class {i}, mask {mask}: linking numbers {lk:?}"))?;
            resolutions += 1;
        }
    }
    Ok(format!(
        "{} classes, {resolutions} resolutions, each with a zero linking number",
        c.others.len()
    ))
}

fn irreducibles(c: &Corpus) -> Outcome {
    let mut found = 0;
    for p in &c.pairwise {
        if is_irreducible(p) {
            classify_irreducible(p).map_err(|e| format!("{} vertices: {e}", p.vertex_count()))?;
            found += 1;
        }
    }
    let six = enumerate_projections(EnumerationFilter::new(6).pairwise_crossing()).map_err(|e| e.to_string())?;
    check(six.len() == 2, || format!("{} classes at 6 vertices", six.len()))?;
    Ok(format!("{found} irreducible classes, all P1 or P2; 2 classes at 6 vertices"))
}

fn reduction_laws(c: &Corpus, traces: &[ReductionTrace]) -> Outcome {
    let mut steps = 0;
    for (seed, (p, t)) in c.random.iter().zip(traces).enumerate() {
        let v = p.vertex_count();
        check(t.len() <= v - 6, || format!("seed {seed}: {} steps from {v} vertices", t.len()))?;
        for (k, step) in t.steps.iter().enumerate() {
            let (pre, post) = (step.pre_vertices(), step.post_vertices());
            check(post < pre, || format!("seed {seed} step {k}: {pre} -> {post}"))?;
            if let TraceStep::Theta(_) = step {
                check(post + 1 == pre, || format!("seed {seed} step {k}: Θ {pre} -> {post}"))?;
            }
            check(t.states[k + 1].is_pairwise_crossing(), || {
                format!("seed {seed} step {k}: not pairwise crossing")
            })?;
            steps += 1;
        }
        let last = t.final_projection();
        let tc = last.type_counts();
        check(
            last.vertex_count() == 6
                && (tc.blue_red, tc.blue_green, tc.red_green, tc.mono_total()) == (2, 2, 2, 0),
            || format!("seed {seed}: final type counts {tc:?}"),
        )?;
    }
    Ok(format!("{} projections, {steps} steps", c.random.len()))
}

fn lemma_suite(c: &Corpus, traces: &[ReductionTrace]) -> Outcome {
    let mut irreducible: Vec<&Projection> = c.pairwise.iter().filter(|p| is_irreducible(p)).collect();
    irreducible.extend(traces.iter().map(|t| t.final_projection()));
    for (i, p) in irreducible.iter().enumerate() {
        check(p.good_sections().iter().all(|s| s.len() == 1), || {
            format!("irreducible {i}: long good section")
        })?;
        let defects = p.structural_defects();
        check(defects.disposable_digons.is_empty(), || format!("irreducible {i}: disposable digon"))?;
        check(defects.superfluous_walks.is_empty(), || format!("irreducible {i}: superfluous walk"))?;
        check(p.faces_are_cycles(), || format!("irreducible {i}: face not a cycle"))?;
    }
    let mut inputs = 0;
    let states = traces.iter().flat_map(|t| t.states.iter());
    for p in c.pairwise.iter().chain(states) {
        let good = p.good_sections();
        for col in Colour::ALL {
            let n = good.iter().filter(|s| s.colour == col).count();
            check(n >= 2, || format!("{n} good {col:?} sections on {} vertices", p.vertex_count()))?;
        }
        inputs += 1;
    }
    Ok(format!(
        "{} irreducibles clean; {inputs} pairwise-crossing projections with 2+ good sections per colour",
        irreducible.len()
    ))
}

fn invariants(d: &LinkDiagram, anchors: Option<&[(usize, bool)]>) -> Result<(LaurentPolynomial, Vec<i64>), String> {
    let o = match anchors {
        Some(a) => d.orientation_from_anchors(a),
        None => d.canonical_orientation(),
    };
    let mut lk: Vec<i64> = d.linking_numbers(&o).iter().map(|x| x.abs()).collect();
    lk.sort_unstable();
    Ok((jones(d, &o).map_err(|e| e.to_string())?, lk))
}

fn lift_soundness(c: &Corpus, traces: &[ReductionTrace]) -> Outcome {
    let mut steps = 0;
    let criterion_one = c.pairwise.iter().map(|p| reduce(p).map(|(_, t)| t));
    let mut all: Vec<ReductionTrace> = criterion_one.collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    all.extend(traces.iter().cloned());
    for (i, t) in all.iter().enumerate() {
        let diagrams = lift_trace(t).map_err(|e| format!("trace {i}: {e}"))?;
        for (k, step) in t.steps.iter().enumerate() {
            let anchors = transported_anchors(&t.states[k], step);
            let pre = invariants(&diagrams[k].link_diagram(), None)?;
            let post = invariants(&diagrams[k + 1].link_diagram(), Some(&anchors))?;
            check(pre == post, || format!("trace {i} step {k}: {} vs {}", pre.0, post.0))?;
            steps += 1;
        }
    }
    Ok(format!("{steps} lifted steps keep Jones and |lk|"))
}

fn engine_values() -> Outcome {
    let one = LaurentPolynomial::one();
    let delta = LaurentPolynomial::delta();
    check(kauffman_bracket(&LinkDiagram::unknot()) == Ok(one.clone()), || "unknot bracket".into())?;
    let two = LinkDiagram::unknot().with_free_loops(1);
    check(kauffman_bracket(&two) == Ok(delta.clone()), || "two loops".into())?;
    check(delta == LaurentPolynomial::from_terms([(-1, 2), (-1, -2)]), || "delta".into())?;
    let hopf = LinkDiagram::from_pd(&[[4, 1, 3, 2], [2, 3, 1, 4]]).map_err(|e| e.to_string())?;
    check(
        kauffman_bracket(&hopf) == Ok(LaurentPolynomial::from_terms([(-1, 4), (-1, -4)])),
        || "Hopf bracket".into(),
    )?;
    let eight = PlanarMap::from_pairs(1, &[(0, 1), (2, 3)]).map_err(|e| e.to_string())?;
    let kinked = LinkDiagram::from_map(&eight, vec![true]).map_err(|e| e.to_string())?;
    check(jones(&kinked, &kinked.canonical_orientation()) == Ok(one), || "kinked unknot".into())?;
    let r = LinkDiagram::from_pd(&fixtures::L6N1_PD).map_err(|e| e.to_string())?;
    check(
        kauffman_bracket(&r.mirror()).map_err(|e| e.to_string())?
            == kauffman_bracket(&r).map_err(|e| e.to_string())?.mirror(),
        || "mirror".into(),
    )?;
    let mut lk: Vec<i64> = r.linking_numbers(&r.canonical_orientation()).iter().map(|x| x.abs()).collect();
    lk.sort_unstable();
    check(lk == [1, 1, 1], || format!("reference profile {lk:?}"))?;
    Ok("bracket, δ, Hopf, kink, mirror and reference profile exact".into())
}

fn determinism(c: &Corpus) -> Outcome {
    for (seed, p) in c.random.iter().enumerate().step_by(25) {
        let n = p.vertex_count();
        let again = random_projection(n, seed as u64).map_err(|e| e.to_string())?;
        check(serialize_projection(p) == serialize_projection(&again), || format!("random seed {seed}"))?;
        let (_, a) = reduce(p).map_err(|e| e.to_string())?;
        let (_, b) = reduce(&again).map_err(|e| e.to_string())?;
        check(a.to_text() == b.to_text(), || format!("reduce seed {seed}"))?;
        let x = resolve_l6n1(p).map_err(|e| e.to_string())?;
        let y = resolve_l6n1(&again).map_err(|e| e.to_string())?;
        check(serialize_diagram(&x) == serialize_diagram(&y), || format!("resolve seed {seed}"))?;
    }
    Ok("random, reduce and resolve outputs repeat byte for byte".into())
}

fn main() -> ExitCode {
    let start = Instant::now();
    let c = corpus();
    let traces: Vec<ReductionTrace> = c
        .random
        .iter()
        .map(|p| reduce(p).expect("random projections reduce").1)
        .collect();
    let criteria: [(&str, Box<dyn Fn() -> Outcome + '_>); 8] = [
        ("sufficiency up to 8 vertices", Box::new(|| sufficiency(&c))),
        ("necessity at 6-8 vertices", Box::new(|| necessity(&c))),
        ("irreducibles are P1 or P2", Box::new(|| irreducibles(&c))),
        ("reduction laws on random projections", Box::new(|| reduction_laws(&c, &traces))),
        ("lemma suite", Box::new(|| lemma_suite(&c, &traces))),
        ("lift soundness", Box::new(|| lift_soundness(&c, &traces))),
        ("invariant engine values", Box::new(engine_values)),
        ("determinism", Box::new(|| determinism(&c))),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        match run() {
            Ok(detail) => println!("PASS {} {name}: {detail} ({:.1?})", k + 1, t.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why}", k + 1);
            }
        }
    }
    println!("acceptance finished in {:.1?}", start.elapsed());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
