//! Brute-force oracles and seeded generators shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use fpdual::check;
use fpdual::patterns::Problem;
use fpdual::relstruct::{
    encode_graph, Colour, ColouredStructure, ElementId, Palettes, Signature, Structure,
};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64, i: usize) -> ChaCha8Rng {
    fpdual::gen::case_rng(seed, i)
}

pub fn digraph(n: usize, arcs: &[(ElementId, ElementId)]) -> Structure {
    let t: Vec<(usize, Vec<ElementId>)> = arcs.iter().map(|&(a, b)| (0, vec![a, b])).collect();
    Structure::from_tuples(Arc::new(Signature::graph()), n, &t).unwrap()
}

pub fn graph(n: usize, edges: &[(ElementId, ElementId)]) -> Structure {
    encode_graph(n, edges).unwrap()
}

pub fn complete(n: usize) -> Structure {
    let e: Vec<_> = (0..n as u32)
        .flat_map(|i| (i + 1..n as u32).map(move |j| (i, j)))
        .collect();
    graph(n, &e)
}

pub fn cycle(n: usize) -> Structure {
    let e: Vec<_> = (0..n as u32).map(|i| (i, (i + 1) % n as u32)).collect();
    graph(n, &e)
}

pub fn path(n: usize) -> Structure {
    let e: Vec<_> = (1..n as u32).map(|i| (i - 1, i)).collect();
    graph(n, &e)
}

pub fn random_digraph(rng: &mut ChaCha8Rng, n: usize, p: f64, loops: bool) -> Structure {
    let mut arcs = Vec::new();
    for a in 0..n as u32 {
        for b in 0..n as u32 {
            if (a != b || loops) && rng.gen_bool(p) {
                arcs.push((a, b));
            }
        }
    }
    digraph(n, &arcs)
}

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Structure {
    let mut edges = Vec::new();
    for a in 0..n as u32 {
        for b in a + 1..n as u32 {
            if rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    graph(n, &edges)
}

/// Random colours over the given palettes.
pub fn random_colouring(
    rng: &mut ChaCha8Rng,
    s: &Structure,
    pal: &Arc<Palettes>,
) -> ColouredStructure {
    let vcol = (0..s.n())
        .map(|_| rng.gen_range(0..pal.vertex.len()) as Colour)
        .collect();
    let ecol = (0..s.tuple_count())
        .map(|_| rng.gen_range(0..pal.edge.len()) as Colour)
        .collect();
    ColouredStructure::new(s.clone(), vcol, ecol, pal.clone()).unwrap()
}

/// Calls `f` on every map `0..n -> 0..m`; stops when `f` returns true.
pub fn any_map(n: usize, m: usize, mut f: impl FnMut(&[ElementId]) -> bool) -> bool {
    if n == 0 {
        return f(&[]);
    }
    if m == 0 {
        return false;
    }
    let mut h = vec![0 as ElementId; n];
    loop {
        if f(&h) {
            return true;
        }
        let mut i = 0;
        loop {
            if i == n {
                return false;
            }
            h[i] += 1;
            if (h[i] as usize) < m {
                break;
            }
            h[i] = 0;
            i += 1;
        }
    }
}

pub fn brute_hom(a: &ColouredStructure, b: &ColouredStructure) -> bool {
    any_map(a.n(), b.n(), |h| check::is_hom(a, b, h))
}

pub fn brute_plain_hom(a: &Structure, b: &Structure) -> bool {
    any_map(a.n(), b.n(), |h| check::is_plain_hom(a, b, h))
}

/// Every colouring of `s` tried against every pattern by exhaustive search.
pub fn brute_colourable(s: &Structure, p: &Problem) -> bool {
    let nv = p.palettes().vertex.len();
    let ne = p.palettes().edge.len();
    let n = s.n();
    let t = s.tuple_count();
    any_map(n, nv, |vc| {
        any_map(t, ne, |ec| {
            let cs = ColouredStructure::new(
                s.clone(),
                vc.iter().map(|&c| c as Colour).collect(),
                ec.iter().map(|&c| c as Colour).collect(),
                p.palettes().clone(),
            )
            .unwrap();
            check::is_valid_colouring(&cs, p)
        })
    })
}

/// Isomorphism by trying every permutation.
pub fn brute_isomorphic(a: &ColouredStructure, b: &ColouredStructure) -> bool {
    if a.n() != b.n() || a.base().tuple_count() != b.base().tuple_count() {
        return false;
    }
    let n = a.n();
    any_map(n, n, |h| {
        let mut seen = vec![false; n];
        h.iter()
            .all(|&y| !std::mem::replace(&mut seen[y as usize], true))
            && check::is_hom(a, b, h)
    })
}

/// Symmetric adjacency test for a triangle.
pub fn has_triangle(g: &Structure) -> bool {
    let n = g.n() as u32;
    let e = |a: u32, b: u32| g.holds(0, &[a, b]) || g.holds(0, &[b, a]);
    (0..n).any(|a| (a + 1..n).any(|b| e(a, b) && (b + 1..n).any(|c| e(b, c) && e(a, c))))
}

/// Proper endomorphism (not a bijection) by exhaustive search.
pub fn brute_has_proper_endo(cs: &ColouredStructure) -> bool {
    let n = cs.n();
    any_map(n, n, |h| {
        let mut seen = vec![false; n];
        for &y in h {
            seen[y as usize] = true;
        }
        seen.iter().any(|s| !s) && check::is_hom(cs, cs, h)
    })
}

pub fn shuffled(rng: &mut ChaCha8Rng, n: usize) -> Vec<ElementId> {
    let mut v: Vec<ElementId> = (0..n as ElementId).collect();
    v.shuffle(rng);
    v
}

/// Forbid a monochromatic arc, two vertex colours.
pub fn mono_arc() -> Problem {
    let sig = Arc::new(Signature::graph());
    let pal = Arc::new(Palettes::numbered(2, 1));
    let arc = digraph(2, &[(0, 1)]);
    let pats = (0..2)
        .map(|c| ColouredStructure::new(arc.clone(), vec![c, c], vec![0], pal.clone()).unwrap())
        .collect();
    Problem::new(sig, pal, pats).unwrap()
}

/// Forbid a monochromatic directed 2-path, two vertex colours.
pub fn mono_two_path() -> Problem {
    let sig = Arc::new(Signature::graph());
    let pal = Arc::new(Palettes::numbered(2, 1));
    let p = digraph(3, &[(0, 1), (1, 2)]);
    let pats = (0..2)
        .map(|c| ColouredStructure::new(p.clone(), vec![c, c, c], vec![0, 0], pal.clone()).unwrap())
        .collect();
    Problem::new(sig, pal, pats).unwrap()
}
