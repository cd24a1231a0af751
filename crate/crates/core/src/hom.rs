//! Colour-preserving homomorphisms: checking, search, enumeration and cores.
//!
//! The search engine assigns source elements in a static connectivity order.
//! Candidates for an element come from target tuples matching an already
//! assigned source tuple (looked up through a per-position index), and every
//! assignment is forward-checked against source tuples that have a single
//! unassigned element left.

use crate::error::{Error, Result};
use crate::relstruct::{Colour, ColouredStructure, ElementId, Structure};

/// A total map from source elements to target elements.
pub type Hom = Vec<ElementId>;

/// Colour that matches nothing; marks unassigned colours in partial colourings.
pub const NO_COLOUR: Colour = Colour::MAX;

const UNSET: u32 = u32::MAX;

/// Default node budget for a single search.
pub const DEFAULT_BUDGET: u64 = 50_000_000;

/// Default cap on the size of structures handed to [`core`].
pub const CORE_CAP: usize = 64;

/// Default cap on `|B|^|A|` for unlimited enumeration.
pub const ENUMERATION_BUDGET: u64 = 10_000_000;

/// True iff `h` is a colour-preserving homomorphism from `a` to `b`.
pub fn check_hom(a: &ColouredStructure, b: &ColouredStructure, h: &[ElementId]) -> bool {
    if h.len() != a.n() || a.signature() != b.signature() {
        return false;
    }
    if h.iter().any(|&y| y as usize >= b.n()) {
        return false;
    }
    if (0..a.n()).any(|x| a.vcol()[x] != b.vcol()[h[x] as usize]) {
        return false;
    }
    let mut img = Vec::new();
    a.base().tuples().all(|(g, sym, t)| {
        img.clear();
        img.extend(t.iter().map(|&x| h[x as usize]));
        b.tuple_colour(sym, &img) == Some(a.ecol()[g])
    })
}

/// Per-position lookup of the tuples of a target structure.
#[derive(Clone, Debug)]
pub struct HomIndex {
    // [symbol][position] -> CSR over elements of tuple indices
    pos: Vec<Vec<(Vec<u32>, Vec<u32>)>>,
    // elements by decreasing number of incident tuples
    by_degree: Vec<ElementId>,
}

impl HomIndex {
    pub fn new(s: &Structure) -> Self {
        let n = s.n();
        let pos = (0..s.signature().len())
            .map(|sym| {
                let r = s.relation(sym);
                (0..r.arity())
                    .map(|p| {
                        let mut off = vec![0u32; n + 1];
                        for t in r.iter() {
                            off[t[p] as usize + 1] += 1;
                        }
                        for i in 0..n {
                            off[i + 1] += off[i];
                        }
                        let mut fill = off.clone();
                        let mut items = vec![0u32; r.len()];
                        for (i, t) in r.iter().enumerate() {
                            let slot = &mut fill[t[p] as usize];
                            items[*slot as usize] = i as u32;
                            *slot += 1;
                        }
                        (off, items)
                    })
                    .collect()
            })
            .collect();
        let mut by_degree: Vec<ElementId> = (0..n as ElementId).collect();
        by_degree.sort_by_key(|&x| std::cmp::Reverse(s.incident(x).len()));
        HomIndex { pos, by_degree }
    }

    /// Indices of the tuples of `sym` having `x` at position `p`.
    pub fn with_value(&self, sym: usize, p: usize, x: ElementId) -> &[u32] {
        let (off, items) = &self.pos[sym][p];
        &items[off[x as usize] as usize..off[x as usize + 1] as usize]
    }
}

/// A structure with colour arrays that may differ from its own colouring
/// (used to search into partially coloured structures).
#[derive(Clone, Copy)]
pub struct View<'a> {
    pub s: &'a Structure,
    pub vcol: &'a [Colour],
    pub ecol: &'a [Colour],
}

impl<'a> View<'a> {
    pub fn of(cs: &'a ColouredStructure) -> Self {
        View {
            s: cs.base(),
            vcol: cs.vcol(),
            ecol: cs.ecol(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Forced images, applied before search.
    pub pins: Vec<(ElementId, ElementId)>,
    pub budget: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            pins: Vec::new(),
            budget: DEFAULT_BUDGET,
        }
    }
}

/// Source-side data reused across searches from the same structure.
#[derive(Clone, Debug)]
pub struct SourcePrep {
    adj: Vec<Vec<ElementId>>,
    // distinct elements per source tuple
    distinct: Vec<Vec<ElementId>>,
}

impl SourcePrep {
    pub fn new(s: &Structure) -> Self {
        let distinct = s
            .tuples()
            .map(|(_, _, t)| {
                let mut d = t.to_vec();
                d.sort_unstable();
                d.dedup();
                d
            })
            .collect();
        SourcePrep {
            adj: s.gaifman_adjacency(),
            distinct,
        }
    }
}

/// Backtracking search for homomorphisms `src -> tgt`.
pub struct Searcher<'a> {
    src: View<'a>,
    prep: &'a SourcePrep,
    tgt: View<'a>,
    idx: &'a HomIndex,
    order: Vec<ElementId>,
    nodes: u64,
    budget: u64,
}

enum Flow {
    Continue,
    Stop,
}

impl<'a> Searcher<'a> {
    pub fn new(
        src: View<'a>,
        prep: &'a SourcePrep,
        tgt: View<'a>,
        idx: &'a HomIndex,
        budget: u64,
    ) -> Self {
        Searcher {
            src,
            prep,
            tgt,
            idx,
            order: Vec::new(),
            nodes: 0,
            budget,
        }
    }

    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    /// First homomorphism in search order respecting `pins`.
    pub fn first(&mut self, pins: &[(ElementId, ElementId)]) -> Result<Option<Hom>> {
        let mut out = None;
        self.run(pins, &mut |h| {
            out = Some(h.to_vec());
            false
        })?;
        Ok(out)
    }

    /// Calls `visit` on each homomorphism until it returns false.
    pub fn run(
        &mut self,
        pins: &[(ElementId, ElementId)],
        visit: &mut dyn FnMut(&[ElementId]) -> bool,
    ) -> Result<()> {
        let n = self.src.s.n();
        let mut assign = vec![UNSET; n];
        let mut count = vec![0u32; self.prep.distinct.len()];
        let mut pinned = vec![UNSET; n];
        for &(x, y) in pins {
            if x as usize >= n || y as usize >= self.tgt.s.n() {
                return Err(Error::Invalid(format!("pin {x} -> {y} out of range")));
            }
            if pinned[x as usize] != UNSET && pinned[x as usize] != y {
                return Ok(());
            }
            pinned[x as usize] = y;
        }
        if n == 0 {
            visit(&[]);
            return Ok(());
        }
        self.order = static_order(self.src.s, &self.prep.adj, pins);
        self.step(0, &mut assign, &mut count, &pinned, visit)?;
        Ok(())
    }

    fn step(
        &mut self,
        depth: usize,
        assign: &mut Vec<u32>,
        count: &mut Vec<u32>,
        pinned: &[u32],
        visit: &mut dyn FnMut(&[ElementId]) -> bool,
    ) -> Result<Flow> {
        if depth == self.order.len() {
            return Ok(if visit(assign) {
                Flow::Continue
            } else {
                Flow::Stop
            });
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::Budget {
                what: "homomorphism search".into(),
                budget: self.budget,
            });
        }
        let x = self.order[depth];
        let cands = if pinned[x as usize] != UNSET {
            vec![pinned[x as usize]]
        } else {
            self.candidates(x, assign)
        };
        let want = self.src.vcol[x as usize];
        for y in cands {
            if self.tgt.vcol[y as usize] != want || want == NO_COLOUR {
                continue;
            }
            assign[x as usize] = y;
            for &g in self.src.s.incident(x) {
                count[g as usize] += 1;
            }
            let ok = self.consistent(x, assign, count);
            let flow = if ok {
                self.step(depth + 1, assign, count, pinned, visit)?
            } else {
                Flow::Continue
            };
            for &g in self.src.s.incident(x) {
                count[g as usize] -= 1;
            }
            assign[x as usize] = UNSET;
            if let Flow::Stop = flow {
                return Ok(Flow::Stop);
            }
        }
        Ok(Flow::Continue)
    }

    /// Candidate images for `x`, drawn from the most selective anchored tuple,
    /// or every target element when `x` has no assigned neighbour.
    fn candidates(&self, x: ElementId, assign: &[u32]) -> Vec<ElementId> {
        let mut best: Option<(usize, usize, usize, ElementId)> = None; // (len, gid, pos, val)
        for &g in self.src.s.incident(x) {
            let (sym, t) = self.src.s.tuple(g as usize);
            for (p, &z) in t.iter().enumerate() {
                let v = assign[z as usize];
                if z != x && v != UNSET {
                    let len = self.idx.with_value(sym, p, v).len();
                    if best.is_none_or(|b| len < b.0) {
                        best = Some((len, g as usize, p, v));
                    }
                }
            }
        }
        let Some((_, g, p, v)) = best else {
            return self.idx.by_degree.clone();
        };
        let (sym, t) = self.src.s.tuple(g);
        let colour = self.src.ecol[g];
        let rel = self.tgt.s.relation(sym);
        let mut out = Vec::new();
        'tuples: for &ti in self.idx.with_value(sym, p, v) {
            let tt = rel.tuple(ti as usize);
            if self.tgt.ecol[self.tgt.s.global_id(sym, ti as usize)] != colour {
                continue;
            }
            let mut img = UNSET;
            for (q, &z) in t.iter().enumerate() {
                if z == x {
                    if img == UNSET {
                        img = tt[q];
                    } else if img != tt[q] {
                        continue 'tuples;
                    }
                } else {
                    let a = assign[z as usize];
                    if a != UNSET && a != tt[q] {
                        continue 'tuples;
                    }
                }
            }
            out.push(img);
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    fn consistent(&self, x: ElementId, assign: &[u32], count: &[u32]) -> bool {
        let mut img = Vec::new();
        for &g in self.src.s.incident(x) {
            let g = g as usize;
            let full = self.prep.distinct[g].len() as u32;
            let (sym, t) = self.src.s.tuple(g);
            if count[g] == full {
                img.clear();
                img.extend(t.iter().map(|&z| assign[z as usize]));
                match self.tgt.s.find_tuple(sym, &img) {
                    Some(tg) if self.tgt.ecol[tg] == self.src.ecol[g] => {}
                    _ => return false,
                }
            } else if count[g] + 1 == full && !self.supported(g, assign) {
                return false;
            }
        }
        self.prep.adj[x as usize]
            .iter()
            .all(|&z| assign[z as usize] != UNSET || self.has_support(z, assign, count))
    }

    /// Whether unassigned `z` has an image satisfying, all at once, every
    /// tuple in which it is the only unassigned element.
    fn has_support(&self, z: ElementId, assign: &[u32], count: &[u32]) -> bool {
        let closing: Vec<usize> = self
            .src
            .s
            .incident(z)
            .iter()
            .map(|&g| g as usize)
            .filter(|&g| count[g] + 1 == self.prep.distinct[g].len() as u32)
            .collect();
        if closing.len() < 2 {
            return true;
        }
        let want = self.src.vcol[z as usize];
        let cands = self.candidates(z, assign);
        let mut img = Vec::new();
        let found = cands.into_iter().any(|c| {
            if self.tgt.vcol[c as usize] != want {
                return false;
            }
            closing.iter().all(|&g| {
                let (sym, t) = self.src.s.tuple(g);
                img.clear();
                img.extend(t.iter().map(|&w| if w == z { c } else { assign[w as usize] }));
                matches!(self.tgt.s.find_tuple(sym, &img), Some(tg) if self.tgt.ecol[tg] == self.src.ecol[g])
            })
        });
        found
    }

    /// Whether source tuple `g` with exactly one unassigned element can be
    /// completed.
    fn supported(&self, g: usize, assign: &[u32]) -> bool {
        let (sym, t) = self.src.s.tuple(g);
        let Some((p, v)) = t
            .iter()
            .enumerate()
            .find(|(_, &z)| assign[z as usize] != UNSET)
            .map(|(p, &z)| (p, assign[z as usize]))
        else {
            return true;
        };
        let colour = self.src.ecol[g];
        let rel = self.tgt.s.relation(sym);
        'tuples: for &ti in self.idx.with_value(sym, p, v) {
            if self.tgt.ecol[self.tgt.s.global_id(sym, ti as usize)] != colour {
                continue;
            }
            let tt = rel.tuple(ti as usize);
            let mut free = UNSET;
            let mut free_img = UNSET;
            for (q, &z) in t.iter().enumerate() {
                let a = assign[z as usize];
                if a == UNSET {
                    if free == UNSET {
                        free = z;
                        free_img = tt[q];
                    } else if free_img != tt[q] {
                        continue 'tuples;
                    }
                } else if a != tt[q] {
                    continue 'tuples;
                }
            }
            if free == UNSET || self.tgt.vcol[free_img as usize] == self.src.vcol[free as usize] {
                return true;
            }
        }
        false
    }
}

/// Pinned elements first, then repeatedly the element with the most ordered
/// Gaifman neighbours (ties: larger degree, smaller id).
fn static_order(
    s: &Structure,
    adj: &[Vec<ElementId>],
    pins: &[(ElementId, ElementId)],
) -> Vec<ElementId> {
    let n = s.n();
    let mut placed = vec![false; n];
    let mut linked = vec![0usize; n];
    let mut order = Vec::with_capacity(n);
    let place =
        |x: usize, order: &mut Vec<ElementId>, placed: &mut Vec<bool>, linked: &mut Vec<usize>| {
            placed[x] = true;
            order.push(x as ElementId);
            for &y in &adj[x] {
                linked[y as usize] += 1;
            }
        };
    for &(x, _) in pins {
        if (x as usize) < n && !placed[x as usize] {
            place(x as usize, &mut order, &mut placed, &mut linked);
        }
    }
    while order.len() < n {
        let x = (0..n)
            .filter(|&x| !placed[x])
            .max_by_key(|&x| {
                (
                    linked[x],
                    s.incident(x as ElementId).len(),
                    std::cmp::Reverse(x),
                )
            })
            .unwrap();
        place(x, &mut order, &mut placed, &mut linked);
    }
    order
}

fn same_signature(a: &ColouredStructure, b: &ColouredStructure) -> Result<()> {
    if a.signature() != b.signature() {
        return Err(Error::SignatureMismatch(
            "source and target signatures differ".into(),
        ));
    }
    if a.palettes() != b.palettes() {
        return Err(Error::PaletteMismatch(
            "source and target palettes differ".into(),
        ));
    }
    Ok(())
}

pub fn find_hom(a: &ColouredStructure, b: &ColouredStructure) -> Result<Option<Hom>> {
    find_hom_with(a, b, &SearchOptions::default())
}

pub fn find_hom_with(
    a: &ColouredStructure,
    b: &ColouredStructure,
    opts: &SearchOptions,
) -> Result<Option<Hom>> {
    same_signature(a, b)?;
    let idx = HomIndex::new(b.base());
    find_hom_indexed(a, b, &idx, opts)
}

/// As [`find_hom_with`] with a prebuilt index of `b`.
pub fn find_hom_indexed(
    a: &ColouredStructure,
    b: &ColouredStructure,
    idx: &HomIndex,
    opts: &SearchOptions,
) -> Result<Option<Hom>> {
    same_signature(a, b)?;
    let prep = SourcePrep::new(a.base());
    let mut s = Searcher::new(View::of(a), &prep, View::of(b), idx, opts.budget);
    s.first(&opts.pins)
}

/// All homomorphisms (or the first `limit`) in search order.
pub fn enumerate_homs(
    a: &ColouredStructure,
    b: &ColouredStructure,
    limit: Option<usize>,
) -> Result<Vec<Hom>> {
    same_signature(a, b)?;
    if limit.is_none() {
        let space = (b.n() as f64).powi(a.n() as i32);
        if space > ENUMERATION_BUDGET as f64 {
            return Err(Error::Budget {
                what: format!("enumeration over {}^{} maps without a limit", b.n(), a.n()),
                budget: ENUMERATION_BUDGET,
            });
        }
    }
    let idx = HomIndex::new(b.base());
    let prep = SourcePrep::new(a.base());
    let mut s = Searcher::new(View::of(a), &prep, View::of(b), &idx, DEFAULT_BUDGET);
    let mut out = Vec::new();
    s.run(&[], &mut |h| {
        out.push(h.to_vec());
        limit.is_none_or(|l| out.len() < l)
    })?;
    if limit == Some(0) {
        out.clear();
    }
    out.sort();
    Ok(out)
}

/// Result of [`dominance_reduce`].
#[derive(Clone, Debug)]
pub struct Reduction {
    pub reduced: ColouredStructure,
    /// Element `i` of the reduced structure is `inclusion[i]` of the input.
    pub inclusion: Vec<ElementId>,
    /// Homomorphism from the input onto the reduced structure.
    pub retraction: Hom,
}

/// Repeatedly deletes an element `a` for which some `b` exists such that
/// replacing `a` by `b` in every tuple through `a` yields tuples of the same
/// colour. Each deletion is a retraction, so the result is hom-equivalent to
/// the input; it is usually far from a core but is cheap on large templates.
pub fn dominance_reduce(cs: &ColouredStructure) -> Result<Reduction> {
    let s = cs.base();
    let n = s.n();
    let idx = HomIndex::new(s);
    let mut alive = vec![true; n];
    // r[a]: element that replaced a when a was deleted
    let mut r: Vec<ElementId> = (0..n as ElementId).collect();
    let active = |t: &[ElementId], alive: &[bool]| t.iter().all(|&x| alive[x as usize]);
    let dominates = |a: ElementId, b: ElementId, alive: &[bool]| -> bool {
        if cs.vcol()[a as usize] != cs.vcol()[b as usize] {
            return false;
        }
        let mut img = Vec::new();
        s.incident(a).iter().all(|&g| {
            let (sym, t) = s.tuple(g as usize);
            if !active(t, alive) {
                return true;
            }
            if t.contains(&b) {
                return false;
            }
            img.clear();
            img.extend(t.iter().map(|&x| if x == a { b } else { x }));
            s.find_tuple(sym, &img)
                .is_some_and(|h| cs.ecol()[h] == cs.ecol()[g as usize])
        })
    };
    let mut changed = true;
    while changed {
        changed = false;
        for a in 0..n as ElementId {
            if !alive[a as usize] {
                continue;
            }
            // candidates: entries at a's position in tuples agreeing with
            // one of a's tuples elsewhere
            let anchor = s.incident(a).iter().map(|&g| g as usize).find(|&g| {
                let (_, t) = s.tuple(g);
                active(t, &alive) && t.iter().any(|&x| x != a)
            });
            let cands: Vec<ElementId> = match anchor {
                Some(g) => {
                    let (sym, t) = s.tuple(g);
                    let p = t.iter().position(|&x| x == a).expect("a occurs");
                    let q = t.iter().position(|&x| x != a).expect("other entry");
                    let rel = s.relation(sym);
                    idx.with_value(sym, q, t[q])
                        .iter()
                        .map(|&i| rel.tuple(i as usize)[p])
                        .collect()
                }
                None if s
                    .incident(a)
                    .iter()
                    .all(|&g| !active(s.tuple(g as usize).1, &alive)) =>
                {
                    (0..n as ElementId).collect()
                }
                None => Vec::new(),
            };
            if let Some(b) = cands
                .into_iter()
                .find(|&b| b != a && alive[b as usize] && dominates(a, b, &alive))
            {
                alive[a as usize] = false;
                r[a as usize] = b;
                changed = true;
            }
        }
    }
    let inclusion: Vec<ElementId> = (0..n as ElementId).filter(|&x| alive[x as usize]).collect();
    let (reduced, _) = cs.induced(&inclusion)?;
    let mut pos = vec![u32::MAX; n];
    for (i, &x) in inclusion.iter().enumerate() {
        pos[x as usize] = i as u32;
    }
    let retraction = (0..n)
        .map(|x| {
            let mut v = x as ElementId;
            while !alive[v as usize] {
                v = r[v as usize];
            }
            pos[v as usize]
        })
        .collect();
    Ok(Reduction {
        reduced,
        inclusion,
        retraction,
    })
}

/// A core of a coloured structure with the maps witnessing hom-equivalence.
#[derive(Clone, Debug)]
pub struct CoreResult {
    pub core: ColouredStructure,
    /// Element `i` of the core is element `inclusion[i]` of the input.
    pub inclusion: Vec<ElementId>,
    /// Homomorphism from the input onto the core, identity on the core.
    pub retraction: Hom,
}

pub fn core(cs: &ColouredStructure) -> Result<CoreResult> {
    core_capped(cs, CORE_CAP)
}

pub fn core_capped(cs: &ColouredStructure, cap: usize) -> Result<CoreResult> {
    if cs.n() > cap {
        return Err(Error::cap("core", cap as u64, Some(cs.n() as u64)));
    }
    // current = cs restricted to `keep`; r maps cs into positions of `keep`
    let mut keep: Vec<ElementId> = (0..cs.n() as ElementId).collect();
    let mut current = cs.clone();
    let mut r: Vec<u32> = keep.clone();
    let mut i = 0;
    while i < keep.len() {
        let sub: Vec<ElementId> = (0..keep.len() as ElementId)
            .filter(|&j| j as usize != i)
            .collect();
        let (smaller, _) = current.induced(&sub)?;
        if let Some(h) = find_hom(&current, &smaller)? {
            // h: current -> smaller; compose
            for v in r.iter_mut() {
                *v = h[*v as usize];
            }
            keep = sub.iter().map(|&j| keep[j as usize]).collect();
            current = smaller;
        } else {
            i += 1;
        }
    }
    // r restricted to the core is an automorphism; undo it
    let n = keep.len();
    let mut alpha = vec![0u32; n];
    for (j, &orig) in keep.iter().enumerate() {
        alpha[j] = r[orig as usize];
    }
    let mut inv = vec![0u32; n];
    for (j, &a) in alpha.iter().enumerate() {
        inv[a as usize] = j as u32;
    }
    let retraction = r.iter().map(|&v| inv[v as usize]).collect();
    Ok(CoreResult {
        core: current,
        inclusion: keep,
        retraction,
    })
}

/// True iff some homomorphism `cs -> cs` misses at least one element.
pub fn has_proper_retract(cs: &ColouredStructure) -> Result<bool> {
    for x in 0..cs.n() as ElementId {
        let sub: Vec<ElementId> = (0..cs.n() as ElementId).filter(|&y| y != x).collect();
        let (smaller, _) = cs.induced(&sub)?;
        if find_hom(cs, &smaller)?.is_some() {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relstruct::tests::arcs;
    use crate::relstruct::{encode_graph, ColouredStructure as CS, Palettes};
    use std::sync::Arc;

    fn cycle(n: u32) -> CS {
        let e: Vec<(u32, u32)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        CS::uncoloured(encode_graph(n as usize, &e).unwrap())
    }

    #[test]
    fn dominance_keeps_hom_equivalence() {
        // K2,3 reduces to a single edge
        let k23 = CS::uncoloured(
            encode_graph(5, &[(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]).unwrap(),
        );
        let r = dominance_reduce(&k23).unwrap();
        assert_eq!(r.reduced.n(), 2);
        assert!(check_hom(&k23, &r.reduced, &r.retraction));
        assert!(check_hom(&r.reduced, &k23, &r.inclusion));
        // a core is left alone
        let c5 = cycle(5);
        assert_eq!(dominance_reduce(&c5).unwrap().reduced.n(), 5);
    }

    #[test]
    fn identity_and_constant_maps() {
        let k3 = CS::uncoloured(arcs(3, &[(0, 1), (1, 2), (2, 0)]));
        assert!(check_hom(&k3, &k3, &[0, 1, 2]));
        let dot = CS::uncoloured(arcs(1, &[]));
        assert!(!check_hom(&k3, &dot, &[0, 0, 0]));
    }

    #[test]
    fn colour_clause() {
        let pal = Arc::new(Palettes::numbered(2, 1));
        let a = CS::new(arcs(1, &[]), vec![0], vec![], pal.clone()).unwrap();
        let b = CS::new(arcs(1, &[]), vec![1], vec![], pal).unwrap();
        assert!(!check_hom(&a, &b, &[0]));
        assert!(find_hom(&a, &b).unwrap().is_none());
    }

    #[test]
    fn cycles_and_triangles() {
        let k3 = cycle(3);
        let c5 = cycle(5);
        assert!(find_hom(&k3, &k3).unwrap().is_some());
        assert!(find_hom(&k3, &c5).unwrap().is_none());
        let h = find_hom(&c5, &k3).unwrap().unwrap();
        assert!(check_hom(&c5, &k3, &h));
    }

    #[test]
    fn enumeration_counts() {
        let dot = CS::uncoloured(arcs(1, &[]));
        let k3 = cycle(3);
        assert_eq!(enumerate_homs(&dot, &k3, None).unwrap().len(), 3);
        let a = CS::uncoloured(arcs(2, &[(0, 1)]));
        assert_eq!(enumerate_homs(&a, &a, None).unwrap().len(), 1);
        let k2 = CS::uncoloured(encode_graph(2, &[(0, 1)]).unwrap());
        assert_eq!(enumerate_homs(&k2, &k3, None).unwrap().len(), 6);
        assert_eq!(enumerate_homs(&k2, &k3, Some(2)).unwrap().len(), 2);
    }

    #[test]
    fn pins_are_respected() {
        let k3 = cycle(3);
        let k2 = CS::uncoloured(encode_graph(2, &[(0, 1)]).unwrap());
        let opts = SearchOptions {
            pins: vec![(0, 2)],
            ..Default::default()
        };
        let h = find_hom_with(&k2, &k3, &opts).unwrap().unwrap();
        assert_eq!(h[0], 2);
        let bad = SearchOptions {
            pins: vec![(0, 1), (1, 1)],
            ..Default::default()
        };
        assert!(find_hom_with(&k2, &k3, &bad).unwrap().is_none());
    }

    #[test]
    fn budget_is_reported() {
        let c5 = cycle(5);
        let k3 = cycle(3);
        let opts = SearchOptions {
            budget: 1,
            ..Default::default()
        };
        assert!(matches!(
            find_hom_with(&k3, &c5, &opts),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn cores() {
        let p3 = CS::uncoloured(encode_graph(3, &[(0, 1), (1, 2)]).unwrap());
        let c = core(&p3).unwrap();
        assert_eq!(c.core.n(), 2);
        assert!(check_hom(&p3, &c.core, &c.retraction));
        for (i, &x) in c.inclusion.iter().enumerate() {
            assert_eq!(c.retraction[x as usize], i as u32);
        }
        let two = cycle(3).disjoint_union(&cycle(3)).unwrap();
        assert_eq!(core(&two).unwrap().core.n(), 3);
        assert_eq!(core(&cycle(3)).unwrap().core.n(), 3);
        assert!(!has_proper_retract(&cycle(5)).unwrap());
        assert!(has_proper_retract(&cycle(6)).unwrap());
    }

    #[test]
    fn empty_source() {
        let e = CS::uncoloured(arcs(0, &[]));
        assert_eq!(find_hom(&e, &cycle(3)).unwrap(), Some(vec![]));
        assert_eq!(find_hom(&e, &e).unwrap(), Some(vec![]));
    }
}
