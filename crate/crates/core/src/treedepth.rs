//! Rooted forests, closures, tree-depth, low tree-depth partitions, grad and
//! uniform sparsity.

use std::collections::HashMap;
use std::sync::Arc;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::relstruct::{ElementId, Signature, Structure};

/// Default bound on the domain size accepted by [`tree_depth`].
pub const TD_CAP: usize = 12;

/// Domain bound for [`grad`] and exhaustive partition search.
pub const SMALL_CAP: usize = 8;

/// A rooted forest on the nodes `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedForest {
    parent: Vec<Option<ElementId>>,
}

impl RootedForest {
    pub fn new(parent: Vec<Option<ElementId>>) -> Result<Self> {
        let n = parent.len();
        for (x, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                if p as usize >= n {
                    return Err(Error::UnknownElement(p));
                }
            }
            // walking up must end within n steps
            let mut cur = x;
            let mut steps = 0;
            while let Some(p) = parent[cur] {
                cur = p as usize;
                steps += 1;
                if steps > n {
                    return Err(Error::Invalid(format!(
                        "parent map has a cycle through {x}"
                    )));
                }
            }
        }
        Ok(RootedForest { parent })
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    pub fn parent(&self, x: ElementId) -> Option<ElementId> {
        self.parent[x as usize]
    }

    pub fn parents(&self) -> &[Option<ElementId>] {
        &self.parent
    }

    pub fn roots(&self) -> Vec<ElementId> {
        (0..self.n() as ElementId)
            .filter(|&x| self.parent(x).is_none())
            .collect()
    }

    pub fn children(&self, x: ElementId) -> Vec<ElementId> {
        (0..self.n() as ElementId)
            .filter(|&y| self.parent(y) == Some(x))
            .collect()
    }

    /// Number of nodes on the path from `x` to its root.
    pub fn depth(&self, x: ElementId) -> usize {
        self.root_path(x).len()
    }

    /// `x`, its parent, ..., the root.
    pub fn root_path(&self, x: ElementId) -> Vec<ElementId> {
        let mut out = vec![x];
        let mut cur = x;
        while let Some(p) = self.parent(cur) {
            out.push(p);
            cur = p;
        }
        out
    }

    pub fn height(&self) -> usize {
        (0..self.n() as ElementId)
            .map(|x| self.depth(x))
            .max()
            .unwrap_or(0)
    }

    /// `a` is an ancestor of `b` or equal to it.
    pub fn is_ancestor(&self, a: ElementId, b: ElementId) -> bool {
        let mut cur = Some(b);
        while let Some(c) = cur {
            if c == a {
                return true;
            }
            cur = self.parent(c);
        }
        false
    }

    pub fn comparable(&self, a: ElementId, b: ElementId) -> bool {
        self.is_ancestor(a, b) || self.is_ancestor(b, a)
    }

    /// Nodes of the subtree rooted at `x`.
    pub fn subtree(&self, x: ElementId) -> Vec<ElementId> {
        (0..self.n() as ElementId)
            .filter(|&y| self.is_ancestor(x, y))
            .collect()
    }
}

/// All tuples over each root-to-node chain of `f`, for every symbol of `sig`.
pub fn closure(f: &RootedForest, sig: &Arc<Signature>) -> Structure {
    let mut b = Structure::builder(sig.clone(), f.n());
    let leaves: Vec<ElementId> = (0..f.n() as ElementId)
        .filter(|&x| f.children(x).is_empty())
        .collect();
    for leaf in leaves {
        let chain = f.root_path(leaf);
        for sym in 0..sig.len() {
            let r = sig.arity(sym);
            let mut digits = vec![0usize; r];
            loop {
                let t: Vec<ElementId> = digits.iter().map(|&d| chain[d]).collect();
                b.add(sym, &t).unwrap();
                let mut i = 0;
                while i < r {
                    digits[i] += 1;
                    if digits[i] < chain.len() {
                        break;
                    }
                    digits[i] = 0;
                    i += 1;
                }
                if i == r {
                    break;
                }
            }
        }
    }
    b.build()
}

/// Whether every tuple of `s` lies on a chain of `f`.
pub fn within_closure(s: &Structure, f: &RootedForest) -> bool {
    s.n() == f.n()
        && s.tuples()
            .all(|(_, _, t)| t.iter().all(|&a| t.iter().all(|&b| f.comparable(a, b))))
}

/// Recursive elimination-tree test for a connected structure and a
/// single-tree forest: removing the root, every component of the remainder
/// must sit inside one child subtree, and each child subtree must again be
/// an elimination tree for the elements it holds.
pub fn is_elimination_tree(s: &Structure, f: &RootedForest) -> Result<bool> {
    if f.n() != s.n() {
        return Err(Error::Invalid(format!(
            "forest has {} nodes, structure has {} elements",
            f.n(),
            s.n()
        )));
    }
    let roots = f.roots();
    if roots.len() != 1 {
        return Ok(false);
    }
    let all: Vec<ElementId> = (0..s.n() as ElementId).collect();
    Ok(eliminates(s, f, roots[0], &all))
}

fn eliminates(s: &Structure, f: &RootedForest, r: ElementId, nodes: &[ElementId]) -> bool {
    let rest: Vec<ElementId> = nodes.iter().copied().filter(|&x| x != r).collect();
    if rest.is_empty() {
        return true;
    }
    let (sub, map) = s.induced(&rest).unwrap();
    let children = f.children(r);
    let owner = |x: ElementId| children.iter().position(|&c| f.is_ancestor(c, x));
    for comp in sub.component_sets() {
        let o = owner(map[comp[0] as usize]);
        if o.is_none() || comp.iter().any(|&y| owner(map[y as usize]) != o) {
            return false;
        }
    }
    children.iter().all(|&c| {
        let subtree: Vec<ElementId> = rest
            .iter()
            .copied()
            .filter(|&x| f.is_ancestor(c, x))
            .collect();
        eliminates(s, f, c, &subtree)
    })
}

struct TdSolver {
    adj: Vec<u64>,
    memo: HashMap<u64, (usize, u32)>,
}

impl TdSolver {
    fn new(s: &Structure) -> Self {
        let adj = s
            .gaifman_adjacency()
            .iter()
            .map(|ns| ns.iter().fold(0u64, |m, &y| m | 1 << y))
            .collect();
        TdSolver {
            adj,
            memo: HashMap::new(),
        }
    }

    fn components(&self, mask: u64) -> Vec<u64> {
        let mut out = Vec::new();
        let mut left = mask;
        while left != 0 {
            let start = left & left.wrapping_neg();
            let mut comp = start;
            let mut frontier = start;
            while frontier != 0 {
                let x = frontier.trailing_zeros() as usize;
                frontier &= frontier - 1;
                let new = self.adj[x] & mask & !comp;
                comp |= new;
                frontier |= new;
            }
            left &= !comp;
            out.push(comp);
        }
        out
    }

    fn td(&mut self, mask: u64) -> usize {
        self.components(mask)
            .into_iter()
            .map(|c| self.td_connected(c))
            .max()
            .unwrap_or(0)
    }

    fn td_connected(&mut self, mask: u64) -> usize {
        if mask.count_ones() == 1 {
            return 1;
        }
        if let Some(&(v, _)) = self.memo.get(&mask) {
            return v;
        }
        let mut best = (usize::MAX, 0u32);
        let mut bits = mask;
        while bits != 0 {
            let x = bits.trailing_zeros();
            bits &= bits - 1;
            let v = 1 + self.td(mask & !(1 << x));
            if v < best.0 {
                best = (v, x);
            }
        }
        self.memo.insert(mask, best);
        best.0
    }

    fn witness(&mut self, mask: u64, parent: Option<ElementId>, out: &mut [Option<ElementId>]) {
        for c in self.components(mask) {
            let root = if c.count_ones() == 1 {
                c.trailing_zeros()
            } else {
                self.td_connected(c);
                self.memo[&c].1
            };
            out[root as usize] = parent;
            self.witness(c & !(1 << root), Some(root), out);
        }
    }
}

/// Exact tree-depth with a witness forest of that height.
pub fn tree_depth(s: &Structure) -> Result<(usize, RootedForest)> {
    tree_depth_capped(s, TD_CAP)
}

pub fn tree_depth_capped(s: &Structure, cap: usize) -> Result<(usize, RootedForest)> {
    if s.n() > cap.min(64) {
        return Err(Error::cap(
            "tree-depth",
            cap.min(64) as u64,
            Some(s.n() as u64),
        ));
    }
    let mut solver = TdSolver::new(s);
    let full = if s.n() == 64 {
        u64::MAX
    } else {
        (1u64 << s.n()) - 1
    };
    let value = solver.td(full);
    let mut parent = vec![None; s.n()];
    solver.witness(full, None, &mut parent);
    let f = RootedForest::new(parent)?;
    debug_assert_eq!(f.height(), value);
    Ok((value, f))
}

/// Tree-depth value only.
pub fn td_value(s: &Structure) -> Result<usize> {
    tree_depth(s).map(|(v, _)| v)
}

/// Undirected simple edges of a structure over one binary symbol.
fn simple_edges(g: &Structure) -> Result<Vec<(ElementId, ElementId)>> {
    if !g.signature().is_binary_single() {
        return Err(Error::SignatureMismatch(
            "expected a graph over one binary symbol".into(),
        ));
    }
    let mut e: Vec<(ElementId, ElementId)> = g
        .relation(0)
        .iter()
        .filter(|t| t[0] != t[1])
        .map(|t| (t[0].min(t[1]), t[0].max(t[1])))
        .collect();
    e.sort_unstable();
    e.dedup();
    Ok(e)
}

/// Grad of rank `r`: the largest edge/part ratio over families of disjoint
/// connected parts of radius at most `r`, after contracting each part.
pub fn grad(g: &Structure, r: usize) -> Result<Ratio<u64>> {
    if g.n() > SMALL_CAP {
        return Err(Error::cap("grad", SMALL_CAP as u64, Some(g.n() as u64)));
    }
    let n = g.n();
    let edges = simple_edges(g)?;
    let mut adj = vec![0u32; n];
    for &(u, v) in &edges {
        adj[u as usize] |= 1 << v;
        adj[v as usize] |= 1 << u;
    }
    let mut best = Ratio::from_integer(0u64);
    let mut masks: Vec<u32> = Vec::new();
    grad_families(&adj, r, 0, &mut masks, &mut best);
    Ok(best)
}

/// Places vertex `x` into no part, an existing part or a new part, and
/// scores every complete family.
fn grad_families(adj: &[u32], r: usize, x: usize, masks: &mut Vec<u32>, best: &mut Ratio<u64>) {
    if x == adj.len() {
        if masks.is_empty() || !masks.iter().all(|&m| radius_at_most(adj, m, r)) {
            return;
        }
        let mut count = 0u64;
        for i in 0..masks.len() {
            for j in i + 1..masks.len() {
                if (0..adj.len()).any(|y| masks[i] >> y & 1 == 1 && adj[y] & masks[j] != 0) {
                    count += 1;
                }
            }
        }
        let v = Ratio::new(count, masks.len() as u64);
        if v > *best {
            *best = v;
        }
        return;
    }
    grad_families(adj, r, x + 1, masks, best);
    for i in 0..masks.len() {
        masks[i] |= 1 << x;
        grad_families(adj, r, x + 1, masks, best);
        masks[i] &= !(1 << x);
    }
    masks.push(1 << x);
    grad_families(adj, r, x + 1, masks, best);
    masks.pop();
}

/// Connected within `mask` and some centre reaches all of it in `r` steps.
fn radius_at_most(adj: &[u32], mask: u32, r: usize) -> bool {
    (0..adj.len()).filter(|&c| mask >> c & 1 == 1).any(|c| {
        let mut reach = 1u32 << c;
        for _ in 0..r {
            let mut next = reach;
            for x in 0..adj.len() {
                if reach >> x & 1 == 1 {
                    next |= adj[x] & mask;
                }
            }
            reach = next;
        }
        reach == mask
    })
}

/// A partition of the domain into parts `0..q` (`part_of[x]`).
pub type Partition = Vec<usize>;

/// Every union of at most `p` parts induces tree-depth at most `p`.
pub fn verify_ltd_partition(s: &Structure, part_of: &[usize], p: usize) -> Result<bool> {
    if part_of.len() != s.n() {
        return Err(Error::Invalid("partition does not cover the domain".into()));
    }
    if s.n() == 0 {
        return Ok(true);
    }
    let q = part_of.iter().copied().max().unwrap() + 1;
    // unions of fewer parts are induced substructures of larger ones
    let k = p.min(q);
    let mut chosen: Vec<usize> = (0..k).collect();
    loop {
        let members: Vec<ElementId> = (0..s.n() as ElementId)
            .filter(|&x| chosen.contains(&part_of[x as usize]))
            .collect();
        if !members.is_empty() {
            let (sub, _) = s.induced(&members)?;
            if td_value(&sub)? > p {
                return Ok(false);
            }
        }
        if !next_combination(&mut chosen, q) {
            return Ok(true);
        }
    }
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    if k == 0 {
        return false;
    }
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// A partition into at most `q` parts passing [`verify_ltd_partition`].
/// Exhaustive up to [`SMALL_CAP`] elements, greedy beyond; `None` means
/// the search found nothing.
pub fn find_ltd_partition(s: &Structure, p: usize, q: usize) -> Result<Option<Partition>> {
    if q == 0 || p == 0 {
        return Err(Error::Param("p and q must be positive".into()));
    }
    let n = s.n();
    if n == 0 {
        return Ok(Some(Vec::new()));
    }
    if n <= SMALL_CAP {
        let mut label = vec![0usize; n];
        loop {
            if rgs_ok(&label, q) && verify_ltd_partition(s, &label, p)? {
                return Ok(Some(label));
            }
            let mut i = n;
            loop {
                if i == 0 {
                    return Ok(None);
                }
                i -= 1;
                label[i] += 1;
                if label[i] < q {
                    break;
                }
                label[i] = 0;
            }
        }
    }
    let mut label: Vec<usize> = Vec::with_capacity(n);
    for x in 0..n {
        let mut placed = false;
        for part in 0..q {
            label.push(part);
            let members: Vec<ElementId> = (0..=x as ElementId).collect();
            let (sub, _) = s.induced(&members)?;
            if verify_ltd_partition(&sub, &label, p)? {
                placed = true;
                break;
            }
            label.pop();
        }
        if !placed {
            return Ok(None);
        }
    }
    Ok(Some(label))
}

fn rgs_ok(label: &[usize], q: usize) -> bool {
    let mut next = 0;
    for &l in label {
        if l > next || l >= q {
            return false;
        }
        if l == next {
            next += 1;
        }
    }
    true
}

/// Orientation of a simple graph: `(tail, head)` per edge.
pub type Orientation = Vec<(ElementId, ElementId)>;

/// An orientation with in-degree at most `k` everywhere, if one exists.
/// Edges are assigned to heads by augmenting paths with capacity `k`.
pub fn uniformly_sparse_orientation(g: &Structure, k: usize) -> Result<Option<Orientation>> {
    let edges = simple_edges(g)?;
    let n = g.n();
    let mut st = Assignment {
        edges: &edges,
        k,
        head: vec![u32::MAX; edges.len()],
        load: vec![0; n],
        owned: vec![Vec::new(); n],
    };
    for e in 0..edges.len() {
        let mut seen = vec![false; n];
        let (u, v) = edges[e];
        if !st.place(e, u, &mut seen) && !st.place(e, v, &mut seen) {
            return Ok(None);
        }
    }
    Ok(Some(
        edges
            .iter()
            .zip(st.head)
            .map(|(&(u, v), h)| if h == v { (u, v) } else { (v, u) })
            .collect(),
    ))
}

struct Assignment<'a> {
    edges: &'a [(ElementId, ElementId)],
    k: usize,
    head: Vec<ElementId>,
    load: Vec<usize>,
    owned: Vec<Vec<usize>>,
}

impl Assignment<'_> {
    /// Makes `w` the head of edge `e`, pushing one of `w`'s edges to its
    /// other endpoint when `w` is full.
    fn place(&mut self, e: usize, w: ElementId, seen: &mut [bool]) -> bool {
        if seen[w as usize] {
            return false;
        }
        seen[w as usize] = true;
        if self.load[w as usize] < self.k {
            self.load[w as usize] += 1;
        } else {
            let owned = self.owned[w as usize].clone();
            let Some(f) = owned.into_iter().find(|&f| {
                let (a, b) = self.edges[f];
                let other = if a == w { b } else { a };
                self.place(f, other, seen)
            }) else {
                return false;
            };
            self.owned[w as usize].retain(|&x| x != f);
        }
        self.head[e] = w;
        self.owned[w as usize].push(e);
        true
    }
}

pub fn is_uniformly_k_sparse(g: &Structure, k: usize) -> Result<bool> {
    Ok(uniformly_sparse_orientation(g, k)?.is_some())
}

/// Independent check of an orientation: covers every edge once and keeps
/// in-degrees at most `k`.
pub fn check_orientation(g: &Structure, k: usize, o: &[(ElementId, ElementId)]) -> Result<bool> {
    let edges = simple_edges(g)?;
    let mut oriented: Vec<(ElementId, ElementId)> =
        o.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    oriented.sort_unstable();
    if oriented != edges {
        return Ok(false);
    }
    let mut indeg = vec![0usize; g.n()];
    for &(_, h) in o {
        indeg[h as usize] += 1;
    }
    Ok(indeg.iter().all(|&d| d <= k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relstruct::encode_graph;

    fn path(n: u32) -> Structure {
        let e: Vec<(u32, u32)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        encode_graph(n as usize, &e).unwrap()
    }

    fn complete(n: u32) -> Structure {
        let mut e = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                e.push((i, j));
            }
        }
        encode_graph(n as usize, &e).unwrap()
    }

    #[test]
    fn closures() {
        let sig = Arc::new(Signature::graph());
        let one = RootedForest::new(vec![None]).unwrap();
        assert_eq!(closure(&one, &sig).tuple_count(), 1);
        let chain = RootedForest::new(vec![None, Some(0)]).unwrap();
        assert_eq!(closure(&chain, &sig).tuple_count(), 4);
        let r3 = Arc::new(Signature::new([("R", 3)]).unwrap());
        assert_eq!(closure(&chain, &r3).tuple_count(), 8);
    }

    #[test]
    fn forest_rejects_cycles() {
        assert!(RootedForest::new(vec![Some(1), Some(0)]).is_err());
    }

    #[test]
    fn elimination_trees_of_p3() {
        let p3 = path(3);
        let mid = RootedForest::new(vec![Some(1), None, Some(1)]).unwrap();
        assert!(is_elimination_tree(&p3, &mid).unwrap());
        let chain = RootedForest::new(vec![None, Some(0), Some(1)]).unwrap();
        assert!(is_elimination_tree(&p3, &chain).unwrap());
        let bad = RootedForest::new(vec![None, Some(0), Some(0)]).unwrap();
        assert!(!is_elimination_tree(&p3, &bad).unwrap());
        assert!(is_elimination_tree(&p3, &RootedForest::new(vec![None]).unwrap()).is_err());
    }

    #[test]
    fn exact_tree_depths() {
        let one = Structure::empty(Arc::new(Signature::graph()), 1);
        assert_eq!(td_value(&one).unwrap(), 1);
        assert_eq!(td_value(&path(4)).unwrap(), 3);
        assert_eq!(td_value(&path(7)).unwrap(), 3);
        assert_eq!(td_value(&path(8)).unwrap(), 4);
        assert_eq!(td_value(&complete(4)).unwrap(), 4);
        let (v, f) = tree_depth(&path(7)).unwrap();
        assert_eq!(f.height(), v);
        assert!(within_closure(&path(7), &f));
        assert!(tree_depth(&path(13)).is_err());
    }

    #[test]
    fn grads() {
        let empty = Structure::empty(Arc::new(Signature::graph()), 4);
        assert_eq!(grad(&empty, 2).unwrap(), Ratio::from_integer(0));
        assert_eq!(grad(&complete(3), 0).unwrap(), Ratio::from_integer(1));
        assert_eq!(grad(&complete(4), 0).unwrap(), Ratio::new(3, 2));
        // contracting edges of a 4-cycle never beats its own density
        let c4 = encode_graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(grad(&c4, 1).unwrap(), Ratio::from_integer(1));
    }

    #[test]
    fn ltd_partitions() {
        let star = encode_graph(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(verify_ltd_partition(&star, &[0, 1, 1, 1], 2).unwrap());
        assert!(!verify_ltd_partition(&path(4), &[0, 0, 0, 0], 1).unwrap());
        let e = Structure::empty(Arc::new(Signature::graph()), 0);
        assert!(verify_ltd_partition(&e, &[], 3).unwrap());
        let k4 = complete(4);
        let found = find_ltd_partition(&k4, 2, 4).unwrap().unwrap();
        assert!(verify_ltd_partition(&k4, &found, 2).unwrap());
        assert!(find_ltd_partition(&k4, 2, 2).unwrap().is_none());
        // two parts of P4 always reunite into P4, whose tree-depth is 3
        assert!(find_ltd_partition(&path(4), 2, 2).unwrap().is_none());
        let p = find_ltd_partition(&path(4), 2, 3).unwrap().unwrap();
        assert!(verify_ltd_partition(&path(4), &p, 2).unwrap());
    }

    #[test]
    fn sparsity() {
        assert!(!is_uniformly_k_sparse(&complete(4), 1).unwrap());
        let tree = encode_graph(5, &[(0, 1), (0, 2), (1, 3), (1, 4)]).unwrap();
        let o = uniformly_sparse_orientation(&tree, 1).unwrap().unwrap();
        assert!(check_orientation(&tree, 1, &o).unwrap());
        let k5 = complete(5);
        let o = uniformly_sparse_orientation(&k5, 2).unwrap().unwrap();
        assert!(check_orientation(&k5, 2, &o).unwrap());
    }
}
