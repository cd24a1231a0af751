//! Acceptance suite: one line per criterion, non-zero exit when any fails.

mod common;

use std::collections::HashSet;
use std::sync::Arc;
use std::time::Instant;

use common::*;
use fpdual::canon::is_isomorphic;
use fpdual::check;
use fpdual::enumerate::{any, connected_flat, connected_structures, shape_key, EnumSpec};
use fpdual::hom::{check_hom, core, enumerate_homs, find_hom};
use fpdual::mmsnp::{
    encode_fpp2, interpret, is_arc_faithful, parse, problem_to_sentence, render,
    sentence_to_problem, tr_signature,
};
use fpdual::par::Exec;
use fpdual::patterns::{builtin, decide_fpp, Problem, BUILTINS};
use fpdual::products::{assemble_partial_homs, truncated_product};
use fpdual::relstruct::{ColouredStructure, ElementId, Palettes, Signature, Structure};
use fpdual::treedepth::{
    find_ltd_partition, is_elimination_tree, td_value, uniformly_sparse_orientation,
    verify_ltd_partition, within_closure, RootedForest,
};
use fpdual::universal::{
    bounded_degree_universal, failing_balls, low_td_universal, verify_duality, witness_gn,
    BoundedOptions, MemberMode, UniversalTemplate,
};
use rand::Rng;

/// Counts checks and keeps the first few failures.
#[derive(Default)]
struct Tally {
    checks: usize,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            if self.failures.len() < 3 {
                self.failures.push(what());
            } else if self.failures.len() == 3 {
                self.failures.push("...".into());
            }
        }
    }

    fn fail(&mut self, what: String) {
        self.check(false, || what);
    }

    fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Outcome {
    tally: Tally,
    note: String,
}

fn outcome(tally: Tally, note: impl Into<String>) -> Outcome {
    Outcome {
        tally,
        note: note.into(),
    }
}

fn run(id: usize, title: &str, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let o = f();
    let secs = start.elapsed().as_secs_f64();
    let status = if o.tally.ok() { "PASS" } else { "FAIL" };
    println!(
        "[{status}] {id:>2}. {title}: {} checks, {} ({secs:.1}s)",
        o.tally.checks, o.note
    );
    for f in &o.tally.failures {
        println!("         - {f}");
    }
    o.tally.ok()
}

fn uncoloured(g: &Structure) -> ColouredStructure {
    ColouredStructure::uncoloured(g.clone())
}

/// Shared by criteria 1 to 3.
struct Built {
    name: &'static str,
    template: UniversalTemplate,
}

// ---------------------------------------------------------------- criteria

fn bounded_triangle_free(built: &mut Vec<Built>) -> Outcome {
    let mut tally = Tally::default();
    let p = builtin("tri-free-tri").unwrap();
    let t = match bounded_degree_universal(&p, 2, &BoundedOptions::default()) {
        Ok(t) => t,
        Err(e) => {
            tally.fail(format!("template: {e}"));
            return outcome(tally, "no template");
        }
    };
    let x = t.bounded().unwrap().x;
    let inputs = connected_flat(&EnumSpec::graphs(8, Some(2)), &any, Exec::Parallel).unwrap();
    let report = verify_duality(&t, &p, &inputs).unwrap();
    tally.check(report.is_clean(), || {
        format!(
            "{} disagreements, {} exhausted",
            report.disagreements.len(),
            report.exhausted.len()
        )
    });
    // the decision side against the triangle oracle, so hom <=> triangle-free
    for (i, g) in inputs.iter().enumerate() {
        let yes = decide_fpp(g, &p).unwrap().is_some();
        tally.check(yes == !has_triangle(g), || {
            format!("input {i}: decide {yes}")
        });
    }
    let note = format!(
        "X = {x}, {} carrier elements, {}/{} graphs agree",
        t.carrier.n(),
        report.agreements,
        report.cases
    );
    built.push(Built {
        name: "tri-free-tri",
        template: t,
    });
    outcome(tally, note)
}

fn bounded_mono_two_path(built: &mut Vec<Built>) -> Outcome {
    let mut tally = Tally::default();
    let p = mono_two_path();
    let opts = BoundedOptions {
        mode: MemberMode::Representatives,
        cores_only: true,
        ..Default::default()
    };
    let t = match bounded_degree_universal(&p, 2, &opts) {
        Ok(t) => t,
        Err(e) => {
            tally.fail(format!("template: {e}"));
            return outcome(tally, "no template");
        }
    };
    let x = t.bounded().unwrap().x;
    tally.check(x == 7, || format!("X = {x}"));
    let inputs =
        connected_flat(&EnumSpec::digraphs(7, Some(2), false), &any, Exec::Parallel).unwrap();
    let report = verify_duality(&t, &p, &inputs).unwrap();
    tally.check(report.is_clean(), || {
        format!(
            "{} disagreements, {} exhausted",
            report.disagreements.len(),
            report.exhausted.len()
        )
    });
    // the decision procedure against exhaustive colourings on the smaller inputs
    for (i, g) in inputs.iter().enumerate().filter(|(_, g)| g.n() <= 6) {
        let yes = decide_fpp(g, &p).unwrap().is_some();
        tally.check(yes == brute_colourable(g, &p), || {
            format!("input {i}: decide {yes}")
        });
    }
    let note = format!(
        "X = {x}, {} members, {}/{} digraphs agree",
        t.bounded().unwrap().members.len(),
        report.agreements,
        report.cases
    );
    built.push(Built {
        name: "mono-two-path",
        template: t,
    });
    outcome(tally, note)
}

fn ball_maps(built: &[Built]) -> Outcome {
    let mut tally = Tally::default();
    let mut elements = 0;
    for b in built {
        let prov = b.template.bounded().unwrap();
        let bad = failing_balls(&b.template, prov.m, Exec::Parallel).unwrap();
        elements += b.template.carrier.n();
        for u in &bad {
            tally.fail(format!("{}: element {u}", b.name));
        }
        tally.checks += b.template.carrier.n() - bad.len();
    }
    if built.is_empty() {
        tally.fail("no template was built".into());
    }
    outcome(
        tally,
        format!("{elements} elements over {} templates", built.len()),
    )
}

fn truncated_products() -> Outcome {
    let mut tally = Tally::default();
    let p = mono_arc();
    let pal = p.palettes().clone();

    // validity is preserved
    let (mut found, mut i) = (0, 0);
    while found < 100 && i < 100_000 {
        let mut r = rng(401, i);
        i += 1;
        let n = r.gen_range(1..=5);
        let shape = random_digraph(&mut r, n, 0.3, false);
        let cs = random_colouring(&mut r, &shape, &pal);
        if !check::is_valid_colouring(&cs, &p) {
            continue;
        }
        found += 1;
        let tp = truncated_product(&cs, 3).unwrap();
        tally.check(check::is_valid_colouring(&tp.structure, &p), || {
            format!("sample {i}: product not valid")
        });
    }
    tally.check(found == 100, || format!("only {found} valid samples"));

    // partial homomorphisms assemble into one
    let (mut assembled, mut j) = (0, 0);
    while assembled < 100 && j < 100_000 {
        let mut r = rng(402, j);
        j += 1;
        let n = r.gen_range(2..=5);
        let shape_s = random_digraph(&mut r, n, 0.35, false);
        let s = random_colouring(&mut r, &shape_s, &pal);
        let m = r.gen_range(2..=4);
        let shape_u = random_digraph(&mut r, m, 0.5, true);
        let u = random_colouring(&mut r, &shape_u, &pal);
        let part: Vec<usize> = (0..n).map(|_| r.gen_range(0..3)).collect();
        let mut partial = Vec::new();
        for k in 0..3 {
            let keep: Vec<ElementId> = (0..n as ElementId)
                .filter(|&x| part[x as usize] != k)
                .collect();
            let (sub, map) = s.induced(&keep).unwrap();
            let Some(h) = find_hom(&sub, &u).unwrap() else {
                break;
            };
            let mut full = vec![u32::MAX; n];
            for (a, &x) in map.iter().enumerate() {
                full[x as usize] = h[a];
            }
            partial.push(full);
        }
        if partial.len() < 3 {
            continue;
        }
        assembled += 1;
        let tp = truncated_product(&u, 3).unwrap();
        match assemble_partial_homs(&tp, &part, &partial) {
            Ok(h) => tally.check(
                check_hom(&s, &tp.structure, &h) && check::is_hom(&s, &tp.structure, &h),
                || format!("instance {j}: assembled map is not a homomorphism"),
            ),
            Err(e) => tally.fail(format!("instance {j}: {e}")),
        }
    }
    tally.check(assembled == 100, || format!("only {assembled} instances"));
    outcome(
        tally,
        format!("{found} valid structures, {assembled} partitioned instances"),
    )
}

fn low_td_template() -> Outcome {
    let mut tally = Tally::default();
    let p = mono_arc();
    let t = low_td_universal(&p, 3, 4, 4).unwrap();
    let mut inputs = Vec::new();
    let mut i = 0;
    while inputs.len() < 200 && i < 10_000 {
        let mut r = rng(501, i);
        i += 1;
        let n = r.gen_range(1..=8);
        let density = r.gen_range(0.1..0.5);
        let g = random_digraph(&mut r, n, density, false);
        if let Some(part) = find_ltd_partition(&g, 3, 4).unwrap() {
            tally.check(verify_ltd_partition(&g, &part, 3).unwrap(), || {
                format!("sample {i}: partition rejected")
            });
            inputs.push(g);
        }
    }
    tally.check(inputs.len() == 200, || {
        format!("only {} inputs", inputs.len())
    });
    let report = verify_duality(&t, &p, &inputs).unwrap();
    tally.check(report.is_clean(), || {
        format!(
            "{} disagreements, {} exhausted",
            report.disagreements.len(),
            report.exhausted.len()
        )
    });
    let yes = inputs
        .iter()
        .filter(|g| decide_fpp(g, &p).unwrap().is_some())
        .count();
    outcome(
        tally,
        format!(
            "{} carrier elements, {}/{} agree ({yes} colourable)",
            t.carrier.n(),
            report.agreements,
            report.cases
        ),
    )
}

/// Every rooted forest on `n` nodes, as parent arrays.
fn all_forests(n: usize) -> Vec<RootedForest> {
    let mut out = Vec::new();
    any_map(n, n + 1, |code| {
        let parent: Vec<Option<ElementId>> = code
            .iter()
            .map(|&c| if c as usize == n { None } else { Some(c) })
            .collect();
        if let Ok(f) = RootedForest::new(parent) {
            out.push(f);
        }
        false
    });
    out
}

fn tree_depth() -> Outcome {
    let mut tally = Tally::default();
    let levels = connected_structures(&EnumSpec::graphs(5, None), &any, Exec::Sequential).unwrap();
    let mut graphs = 0;
    for n in 1..=5 {
        let forests = all_forests(n);
        for g in &levels[n - 1] {
            graphs += 1;
            let td = td_value(g).unwrap();
            let mut best_closure = usize::MAX;
            let mut best_tree = usize::MAX;
            for f in &forests {
                let inside = within_closure(g, f);
                if inside {
                    best_closure = best_closure.min(f.height());
                }
                if f.roots().len() == 1 {
                    let elim = is_elimination_tree(g, f).unwrap();
                    if elim {
                        best_tree = best_tree.min(f.height());
                    }
                    tally.check(!elim || inside, || {
                        format!("n = {n}: elimination tree outside the closure")
                    });
                }
            }
            tally.check(td == best_closure && td == best_tree, || {
                format!("n = {n}: td {td}, closure {best_closure}, elimination {best_tree}")
            });
        }
    }
    let sig = Arc::new(Signature::new([("R", 3)]).unwrap());
    for i in 0..100 {
        let mut r = rng(601, i);
        let n = r.gen_range(1..=6);
        let k = r.gen_range(0..6);
        let t: Vec<(usize, Vec<ElementId>)> = (0..k)
            .map(|_| (0, (0..3).map(|_| r.gen_range(0..n as ElementId)).collect()))
            .collect();
        let s = Structure::from_tuples(sig.clone(), n, &t).unwrap();
        let (a, b, c) = (
            td_value(&s).unwrap(),
            td_value(&s.gaifman()).unwrap(),
            check::brute_td(&s),
        );
        tally.check(a == b && b == c, || {
            format!("ternary sample {i}: {a} / {b} / {c}")
        });
    }
    for (name, g, want) in [
        ("P4", path(4), 3),
        ("K4", complete(4), 4),
        ("P7", path(7), 3),
    ] {
        let got = td_value(&g).unwrap();
        tally.check(got == want, || format!("td({name}) = {got}"));
    }
    outcome(
        tally,
        format!("{graphs} connected graphs, 100 ternary structures, 3 exact values"),
    )
}

fn cores() -> Outcome {
    let mut tally = Tally::default();
    let pal = Arc::new(Palettes::numbered(2, 1));
    for i in 0..500 {
        let mut r = rng(701, i);
        let n = r.gen_range(1..=5);
        let g = random_graph(&mut r, n, 0.5);
        let cs = random_colouring(&mut r, &g, &pal);
        let c = core(&cs).unwrap();
        tally.check(check::is_hom(&cs, &c.core, &c.retraction), || {
            format!("sample {i}: retraction")
        });
        tally.check(check::is_hom(&c.core, &cs, &c.inclusion), || {
            format!("sample {i}: inclusion")
        });
        tally.check(!brute_has_proper_endo(&c.core), || {
            format!("sample {i}: core has a proper retract")
        });
        let again = core(&c.core).unwrap().core;
        tally.check(
            is_isomorphic(&again, &c.core).unwrap() && brute_isomorphic(&again, &c.core),
            || format!("sample {i}: core of the core differs"),
        );
    }
    outcome(tally, "500 coloured graphs")
}

/// 2-colourings of the unordered edges of `K_n` avoiding a monochromatic triangle.
fn ramsey_colourable(n: usize) -> bool {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    let idx = |a: usize, b: usize| {
        pairs
            .iter()
            .position(|&p| p == (a.min(b), a.max(b)))
            .unwrap()
    };
    any_map(pairs.len(), 2, |c| {
        (0..n).all(|a| {
            (a + 1..n).all(|b| {
                (b + 1..n).all(|d| !(c[idx(a, b)] == c[idx(b, d)] && c[idx(b, d)] == c[idx(a, d)]))
            })
        })
    })
}

type Oracle = Box<dyn Fn(&Structure, &Problem) -> bool>;

fn ramsey() -> Outcome {
    let mut tally = Tally::default();
    let cases: Vec<(&str, &str, Structure, bool, Oracle)> = vec![
        (
            "edge-no-mono-tri",
            "K5",
            complete(5),
            true,
            Box::new(|_, _| ramsey_colourable(5)),
        ),
        (
            "edge-no-mono-tri",
            "K6",
            complete(6),
            false,
            Box::new(|_, _| ramsey_colourable(6)),
        ),
        (
            "vertex-no-mono-tri",
            "K4",
            complete(4),
            true,
            Box::new(brute_colourable),
        ),
        (
            "vertex-no-mono-tri",
            "K5",
            complete(5),
            false,
            Box::new(brute_colourable),
        ),
        (
            "tri-free-tri",
            "C5",
            cycle(5),
            true,
            Box::new(brute_colourable),
        ),
        (
            "tri-free-tri",
            "C7",
            cycle(7),
            true,
            Box::new(brute_colourable),
        ),
        (
            "tri-free-tri",
            "K3",
            complete(3),
            false,
            Box::new(brute_colourable),
        ),
    ];
    let mut line = Vec::new();
    for (problem, name, g, want, oracle) in cases {
        let p = builtin(problem).unwrap();
        let got = decide_fpp(&g, &p).unwrap();
        if let Some(c) = &got {
            tally.check(check::is_valid_colouring(c, &p), || {
                format!("{problem} {name}: witness invalid")
            });
        }
        let yes = got.is_some();
        tally.check(yes == want, || {
            format!("{problem} {name}: decide says {yes}")
        });
        tally.check(oracle(&g, &p) == want, || {
            format!("{problem} {name}: oracle disagrees")
        });
        line.push(format!("{name} {}", if yes { "YES" } else { "NO" }));
    }
    outcome(tally, line.join(", "))
}

fn corpus_texts() -> Vec<(String, String)> {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus");
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    files.sort();
    files
        .into_iter()
        .filter(|p| p.extension().is_some_and(|x| x == "mmsnp"))
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                std::fs::read_to_string(p).unwrap(),
            )
        })
        .collect()
}

/// Every digraph with loops on at most `max_n` vertices, one per isomorphism class.
fn small_digraphs(max_n: usize) -> Vec<Structure> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        let cells: Vec<(ElementId, ElementId)> = (0..n as ElementId)
            .flat_map(|a| (0..n as ElementId).map(move |b| (a, b)))
            .collect();
        let mut seen = HashSet::new();
        for mask in 0u32..1 << cells.len() {
            let arcs: Vec<_> = cells
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &c)| c)
                .collect();
            let g = digraph(n, &arcs);
            if seen.insert(shape_key(&g).unwrap()) {
                out.push(g);
            }
        }
    }
    out
}

fn mmsnp_round_trips() -> Outcome {
    let mut tally = Tally::default();
    let inputs = small_digraphs(4);
    for name in BUILTINS {
        let p = builtin(name).unwrap();
        let back = problem_to_sentence(&p)
            .and_then(|s| parse(&render(&s)))
            .and_then(|s| sentence_to_problem(&s, Some(p.signature().clone())));
        let q = match back {
            Ok(q) => q,
            Err(e) => {
                tally.fail(format!("{name}: {e}"));
                continue;
            }
        };
        for (i, g) in inputs.iter().enumerate() {
            let a = decide_fpp(g, &p).unwrap().is_some();
            let b = decide_fpp(g, &q).unwrap().is_some();
            tally.check(a == b, || format!("{name}, digraph {i}: {a} vs {b}"));
        }
    }
    let corpus = corpus_texts();
    for (name, text) in &corpus {
        match parse(text) {
            Ok(s) => tally.check(render(&s) == text.trim_end(), || {
                format!("{name}: render differs")
            }),
            Err(e) => tally.fail(format!("{name}: {e}")),
        }
    }
    outcome(
        tally,
        format!(
            "{} digraph classes x {} problems, {} corpus files",
            inputs.len(),
            BUILTINS.len(),
            corpus.len()
        ),
    )
}

fn random_tr(r: &mut impl Rng) -> Structure {
    let n = r.gen_range(1..=5);
    let mut t: Vec<(usize, Vec<ElementId>)> = Vec::new();
    for x in 0..n as ElementId {
        if r.gen_bool(0.4) {
            t.push((1, vec![x]));
        }
    }
    for _ in 0..r.gen_range(0..=4) {
        t.push((0, (0..3).map(|_| r.gen_range(0..n as ElementId)).collect()));
    }
    Structure::from_tuples(tr_signature(), n, &t).unwrap()
}

fn fpp2_encoding() -> Outcome {
    let mut tally = Tally::default();
    let p = builtin("edge-no-mono-tri").unwrap();
    let enc = encode_fpp2(&p).unwrap();
    let (mut faithful, mut i, mut other, mut other_agree) = (0, 0, 0, 0);
    while faithful < 100 && i < 100_000 {
        let mut r = rng(1001, i);
        i += 1;
        let a = random_tr(&mut r);
        let lhs = decide_fpp(&a, &enc.problem).unwrap().is_some();
        let rhs = decide_fpp(&interpret(&a).unwrap(), &p).unwrap().is_some();
        if is_arc_faithful(&a).unwrap() {
            faithful += 1;
            tally.check(lhs == rhs, || {
                format!("sample {i}: encoded {lhs}, interpreted {rhs}")
            });
        } else {
            other += 1;
            other_agree += usize::from(lhs == rhs);
        }
    }
    tally.check(faithful == 100, || {
        format!("only {faithful} arc-faithful samples")
    });
    outcome(
        tally,
        format!(
            "{faithful} arc-faithful structures; {other_agree}/{other} others agree (not required)"
        ),
    )
}

/// A random loopless triangle-free graph with at least one edge.
fn triangle_free_target(r: &mut impl Rng) -> Structure {
    loop {
        let n = r.gen_range(2..=7);
        let g = {
            let mut edges = Vec::new();
            for a in 0..n as ElementId {
                for b in a + 1..n as ElementId {
                    if r.gen_bool(0.45) {
                        edges.push((a, b));
                    }
                }
            }
            graph(n, &edges)
        };
        if !has_triangle(&g) && g.tuple_count() > 0 {
            return g;
        }
    }
}

const HOM_LIMIT: usize = 1_000_000;

fn sparse_witnesses() -> Outcome {
    let mut tally = Tally::default();
    for n in 3..=5 {
        let w = witness_gn(n).unwrap();
        tally.check(!has_triangle(&w.graph), || format!("G{n} has a triangle"));
        tally.check(
            check::is_orientation_witness(&w.graph, 2, &w.orientation),
            || format!("G{n}: stored orientation"),
        );
        match uniformly_sparse_orientation(&w.graph, 2).unwrap() {
            Some(o) => tally.check(check::is_orientation_witness(&w.graph, 2, &o), || {
                format!("G{n}: computed orientation")
            }),
            None => tally.fail(format!("G{n} is not 2-sparse")),
        }
    }
    let g3 = witness_gn(3).unwrap();
    let src = uncoloured(&g3.graph);
    let mut homs = 0;
    for i in 0..50 {
        let mut r = rng(1101, i);
        let t = triangle_free_target(&mut r);
        let tgt = uncoloured(&t);
        // merging two specials leaves no map at all
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            let (sa, sb) = (g3.specials[a], g3.specials[b]);
            let keep: Vec<ElementId> = (0..g3.graph.n() as ElementId)
                .filter(|&x| x != sb)
                .collect();
            let mut arcs = Vec::new();
            for (_, _, tu) in g3.graph.tuples() {
                let m = |x: ElementId| if x == sb { sa } else { x };
                let pos = |x: ElementId| keep.iter().position(|&k| k == m(x)).unwrap() as ElementId;
                arcs.push((pos(tu[0]), pos(tu[1])));
            }
            let q = digraph(keep.len(), &arcs);
            tally.check(find_hom(&uncoloured(&q), &tgt).unwrap().is_none(), || {
                format!("target {i}: quotient maps")
            });
        }
        let all = enumerate_homs(&src, &tgt, Some(HOM_LIMIT)).unwrap();
        tally.check(all.len() < HOM_LIMIT, || {
            format!("target {i}: more than {HOM_LIMIT} homomorphisms")
        });
        for h in all {
            homs += 1;
            let images: HashSet<ElementId> = g3.specials.iter().map(|&s| h[s as usize]).collect();
            tally.check(check::is_hom(&src, &tgt, &h), || {
                format!("target {i}: enumerated map is not a hom")
            });
            tally.check(images.len() == g3.specials.len(), || {
                format!("target {i}: specials merged")
            });
        }
    }
    outcome(
        tally,
        format!("G3..G5 checked, {homs} homomorphisms into 50 targets"),
    )
}

fn main() {
    println!("acceptance criteria");
    let mut built = Vec::new();
    let results = [
        run(1, "bounded-degree duality, triangle-free problem", || {
            bounded_triangle_free(&mut built)
        }),
        run(
            2,
            "coloured bounded-degree duality, monochromatic 2-path",
            || bounded_mono_two_path(&mut built),
        ),
        run(3, "balls map onto their members", || ball_maps(&built)),
        run(
            4,
            "truncated products keep validity and assemble maps",
            truncated_products,
        ),
        run(5, "low tree-depth template", low_td_template),
        run(6, "tree-depth cross-validation", tree_depth),
        run(7, "core properties", cores),
        run(8, "Ramsey-style decisions", ramsey),
        run(9, "MMSNP round trips", mmsnp_round_trips),
        run(10, "arc-colour encoding", fpp2_encoding),
        run(11, "sparse witness family", sparse_witnesses),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("{passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
