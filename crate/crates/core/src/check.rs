//! Plain re-checks of witnesses, written without the search machinery so
//! that a bug in a solver cannot vouch for its own output.

use std::collections::{HashMap, HashSet};

use crate::patterns::Problem;
use crate::relstruct::{ColouredStructure, ElementId, Structure};
use crate::treedepth::RootedForest;

/// Colour-preserving homomorphism test by direct tuple lookup.
pub fn is_hom(a: &ColouredStructure, b: &ColouredStructure, h: &[ElementId]) -> bool {
    if h.len() != a.n() || a.signature() != b.signature() || a.palettes() != b.palettes() {
        return false;
    }
    if h.iter().any(|&y| y as usize >= b.n()) {
        return false;
    }
    let mut target: HashMap<(usize, Vec<ElementId>), u16> = HashMap::new();
    for (g, sym, t) in b.base().tuples() {
        target.insert((sym, t.to_vec()), b.ecol()[g]);
    }
    (0..a.n()).all(|x| a.vcol()[x] == b.vcol()[h[x] as usize])
        && a.base().tuples().all(|(g, sym, t)| {
            let img: Vec<ElementId> = t.iter().map(|&x| h[x as usize]).collect();
            target.get(&(sym, img)) == Some(&a.ecol()[g])
        })
}

/// Homomorphism test ignoring colours.
pub fn is_plain_hom(a: &Structure, b: &Structure, h: &[ElementId]) -> bool {
    is_hom(
        &ColouredStructure::uncoloured(a.clone()),
        &ColouredStructure::uncoloured(b.clone()),
        h,
    )
}

/// Exhaustive search for a pattern homomorphism: elements are assigned in
/// index order and every tuple is tested once its last entry is placed.
pub fn pattern_occurs(f: &ColouredStructure, cs: &ColouredStructure) -> bool {
    let n = f.n();
    if n == 0 {
        return true;
    }
    let mut target: HashMap<(usize, Vec<ElementId>), u16> = HashMap::new();
    for (g, sym, t) in cs.base().tuples() {
        target.insert((sym, t.to_vec()), cs.ecol()[g]);
    }
    // tuples grouped by their largest entry
    let mut due: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (g, _, t) in f.base().tuples() {
        let last = t.iter().copied().max().unwrap_or(0) as usize;
        due[last].push(g);
    }
    let mut h: Vec<ElementId> = vec![0; n];
    fn go(
        i: usize,
        h: &mut Vec<ElementId>,
        f: &ColouredStructure,
        cs: &ColouredStructure,
        due: &[Vec<usize>],
        target: &HashMap<(usize, Vec<ElementId>), u16>,
    ) -> bool {
        if i == h.len() {
            return true;
        }
        for y in 0..cs.n() as ElementId {
            if cs.vcol()[y as usize] != f.vcol()[i] {
                continue;
            }
            h[i] = y;
            let ok = due[i].iter().all(|&g| {
                let (sym, t) = f.base().tuple(g);
                let img: Vec<ElementId> = t.iter().map(|&x| h[x as usize]).collect();
                target.get(&(sym, img)) == Some(&f.ecol()[g])
            });
            if ok && go(i + 1, h, f, cs, due, target) {
                return true;
            }
        }
        false
    }
    go(0, &mut h, f, cs, &due, &target)
}

/// A colouring is valid when no pattern occurs in it.
pub fn is_valid_colouring(cs: &ColouredStructure, p: &Problem) -> bool {
    cs.signature() == &**p.signature()
        && cs.palettes() == p.palettes()
        && p.patterns().iter().all(|f| !pattern_occurs(f.body(), cs))
}

/// `f` is an elimination forest of height at most `height`: every tuple
/// lies on one root path.
pub fn is_forest_witness(s: &Structure, f: &RootedForest, height: usize) -> bool {
    if f.n() != s.n() {
        return false;
    }
    let ancestors: Vec<HashSet<ElementId>> = (0..s.n() as ElementId)
        .map(|x| {
            let mut set = HashSet::new();
            let mut a = Some(x);
            while let Some(y) = a {
                if !set.insert(y) {
                    break;
                }
                a = f.parent(y);
            }
            set
        })
        .collect();
    let depth_ok = ancestors.iter().all(|a| a.len() <= height);
    depth_ok
        && s.tuples().all(|(_, _, t)| {
            t.iter().all(|&x| {
                t.iter().all(|&y| {
                    ancestors[x as usize].contains(&y) || ancestors[y as usize].contains(&x)
                })
            })
        })
}

/// Exact tree-depth of the Gaifman graph by memoised vertex deletion over
/// bitmasks. Only for structures with at most 20 elements.
pub fn brute_td(s: &Structure) -> usize {
    let n = s.n();
    assert!(n <= 20, "brute_td handles at most 20 elements");
    let mut adj = vec![0u32; n];
    for (_, _, t) in s.tuples() {
        for &x in t {
            for &y in t {
                if x != y {
                    adj[x as usize] |= 1 << y;
                }
            }
        }
    }
    let mut memo: HashMap<u32, usize> = HashMap::new();
    fn td(mask: u32, adj: &[u32], memo: &mut HashMap<u32, usize>) -> usize {
        if mask == 0 {
            return 0;
        }
        if let Some(&v) = memo.get(&mask) {
            return v;
        }
        // component of the lowest vertex
        let start = mask.trailing_zeros();
        let mut comp = 1u32 << start;
        let mut frontier = comp;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let new = adj[v] & mask & !comp;
            comp |= new;
            frontier |= new;
        }
        let value = if comp != mask {
            td(comp, adj, memo).max(td(mask & !comp, adj, memo))
        } else {
            let mut best = usize::MAX;
            let mut rest = mask;
            while rest != 0 {
                let v = rest.trailing_zeros();
                rest &= rest - 1;
                best = best.min(1 + td(mask & !(1 << v), adj, memo));
            }
            best
        };
        memo.insert(mask, value);
        value
    }
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    td(full, &adj, &mut memo)
}

/// Every edge of the symmetric graph `g` is oriented exactly once and no
/// vertex has in-degree above `k`.
pub fn is_orientation_witness(g: &Structure, k: usize, arcs: &[(ElementId, ElementId)]) -> bool {
    let mut edges: HashSet<(ElementId, ElementId)> = HashSet::new();
    for (_, _, t) in g.tuples() {
        if t.len() == 2 && t[0] != t[1] {
            edges.insert((t[0].min(t[1]), t[0].max(t[1])));
        }
    }
    let mut seen = HashSet::new();
    let mut indeg = vec![0usize; g.n()];
    for &(a, b) in arcs {
        let e = (a.min(b), a.max(b));
        if !edges.contains(&e) || !seen.insert(e) {
            return false;
        }
        indeg[b as usize] += 1;
    }
    seen.len() == edges.len() && indeg.iter().all(|&d| d <= k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::builtin;
    use crate::relstruct::{encode_graph, Palettes};
    use std::sync::Arc;

    fn path(n: usize) -> Structure {
        let e: Vec<_> = (1..n as u32).map(|i| (i - 1, i)).collect();
        encode_graph(n, &e).unwrap()
    }

    #[test]
    fn tree_depths() {
        assert_eq!(brute_td(&path(4)), 3);
        assert_eq!(brute_td(&path(7)), 3);
        assert_eq!(brute_td(&path(8)), 4);
        let k4 = encode_graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(brute_td(&k4), 4);
    }

    #[test]
    fn forest_witness() {
        let p3 = path(3);
        let star = RootedForest::new(vec![Some(1), None, Some(1)]).unwrap();
        assert!(is_forest_witness(&p3, &star, 2));
        assert!(!is_forest_witness(&p3, &star, 1));
        let chain = RootedForest::new(vec![None, Some(2), Some(0)]).unwrap();
        assert!(is_forest_witness(&p3, &chain, 3));
        let bad = RootedForest::new(vec![None, Some(0), Some(0)]).unwrap();
        assert!(!is_forest_witness(&p3, &bad, 3));
    }

    #[test]
    fn colouring_check() {
        let p = builtin("vertex-no-mono-tri").unwrap();
        let k3 = encode_graph(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let pal: Arc<Palettes> = p.palettes().clone();
        let mono = ColouredStructure::new(k3.clone(), vec![0; 3], vec![0; 6], pal.clone()).unwrap();
        let mixed = ColouredStructure::new(k3, vec![0, 1, 0], vec![0; 6], pal).unwrap();
        assert!(!is_valid_colouring(&mono, &p));
        assert!(is_valid_colouring(&mixed, &p));
    }

    #[test]
    fn orientation_check() {
        let p3 = path(3);
        assert!(is_orientation_witness(&p3, 1, &[(0, 1), (1, 2)]));
        assert!(!is_orientation_witness(&p3, 1, &[(0, 1), (2, 1)]));
        assert!(!is_orientation_witness(&p3, 2, &[(0, 1)]));
    }
}
