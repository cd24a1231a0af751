//! Forbidden-patterns problems: patterns, validity and the decision procedure.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::canon::{canonical_form_capped, CanonicalKey, DEFAULT_CAP};
use crate::error::{Error, Result};
use crate::hom::{
    find_hom_indexed, HomIndex, SearchOptions, Searcher, SourcePrep, View, DEFAULT_BUDGET,
    NO_COLOUR,
};
use crate::relstruct::{Colour, ColouredStructure, ElementId, Palettes, Signature, Structure};

/// A connected, fully coloured forbidden structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pattern {
    body: ColouredStructure,
}

impl Pattern {
    pub fn new(body: ColouredStructure) -> Result<Self> {
        if !body.is_connected() {
            return Err(Error::Invalid("pattern is not connected".into()));
        }
        Ok(Pattern { body })
    }

    pub fn body(&self) -> &ColouredStructure {
        &self.body
    }

    pub fn size(&self) -> usize {
        self.body.n()
    }

    pub fn diameter(&self) -> usize {
        self.body.base().diameter().expect("patterns are connected")
    }
}

/// A forbidden-patterns problem: palettes plus pairwise non-isomorphic
/// connected patterns over one signature.
#[derive(Clone, Debug)]
pub struct Problem {
    sig: Arc<Signature>,
    palettes: Arc<Palettes>,
    patterns: Vec<Pattern>,
    /// Inputs are graphs: the CLI replaces inputs by their symmetric closure.
    pub undirected: bool,
    pub name: Option<String>,
}

impl PartialEq for Problem {
    fn eq(&self, other: &Self) -> bool {
        self.sig == other.sig && self.palettes == other.palettes && self.patterns == other.patterns
    }
}

impl Problem {
    /// Builds a problem, dropping patterns isomorphic to an earlier one.
    pub fn new(
        sig: Arc<Signature>,
        palettes: Arc<Palettes>,
        bodies: Vec<ColouredStructure>,
    ) -> Result<Self> {
        let mut seen: BTreeSet<CanonicalKey> = BTreeSet::new();
        let mut patterns = Vec::new();
        for (i, b) in bodies.into_iter().enumerate() {
            if *b.signature() != *sig {
                return Err(Error::SignatureMismatch(format!(
                    "pattern {i} has a different signature"
                )));
            }
            if **b.palettes() != *palettes {
                return Err(Error::PaletteMismatch(format!(
                    "pattern {i} uses different palettes"
                )));
            }
            let b = ColouredStructure::new(
                b.base().clone().with_sig(sig.clone()),
                b.vcol().to_vec(),
                b.ecol().to_vec(),
                palettes.clone(),
            )?;
            let key = canonical_form_capped(&b, b.n().max(DEFAULT_CAP))?.key;
            if seen.insert(key) {
                patterns.push(
                    Pattern::new(b).map_err(|e| Error::Invalid(format!("pattern {i}: {e}")))?,
                );
            }
        }
        Ok(Problem {
            sig,
            palettes,
            patterns,
            undirected: false,
            name: None,
        })
    }

    pub fn named(mut self, name: &str) -> Self {
        self.name = Some(name.to_string());
        self
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn palettes(&self) -> &Arc<Palettes> {
        &self.palettes
    }

    pub fn patterns(&self) -> &[Pattern] {
        &self.patterns
    }

    /// Coloured version of `s` with every colour set to 0 in this problem's palettes.
    pub fn blank(&self, s: &Structure) -> ColouredStructure {
        ColouredStructure::with_palettes(s.clone(), self.palettes.clone())
    }

    fn check_input(&self, s: &Structure) -> Result<()> {
        if *s.signature() != *self.sig {
            return Err(Error::SignatureMismatch(
                "input signature differs from the problem's".into(),
            ));
        }
        Ok(())
    }
}

/// (max pattern diameter, max pattern size); (0, 0) without patterns.
pub fn params(p: &Problem) -> (usize, usize) {
    let m = p.patterns.iter().map(Pattern::diameter).max().unwrap_or(0);
    let size = p.patterns.iter().map(Pattern::size).max().unwrap_or(0);
    (m, size)
}

/// A pattern index and a colour-preserving homomorphism from that pattern
/// into the structure, if any exists.
pub fn find_violation(
    cs: &ColouredStructure,
    p: &Problem,
) -> Result<Option<(usize, Vec<ElementId>)>> {
    if *cs.signature() != *p.sig {
        return Err(Error::SignatureMismatch(
            "structure signature differs from the problem's".into(),
        ));
    }
    if **cs.palettes() != *p.palettes {
        return Err(Error::PaletteMismatch(
            "structure palettes differ from the problem's".into(),
        ));
    }
    let idx = HomIndex::new(cs.base());
    for (i, f) in p.patterns.iter().enumerate() {
        if let Some(h) = find_hom_indexed(f.body(), cs, &idx, &SearchOptions::default())? {
            return Ok(Some((i, h)));
        }
    }
    Ok(None)
}

pub fn is_valid(cs: &ColouredStructure, p: &Problem) -> Result<bool> {
    Ok(find_violation(cs, p)?.is_none())
}

/// Searches for a valid colouring of `s`; `None` means no colouring exists.
pub fn decide_fpp(s: &Structure, p: &Problem) -> Result<Option<ColouredStructure>> {
    decide_fpp_with(s, p, DEFAULT_BUDGET)
}

pub fn decide_fpp_with(
    s: &Structure,
    p: &Problem,
    budget: u64,
) -> Result<Option<ColouredStructure>> {
    p.check_input(s)?;
    let mut d = Decider::new(s, p, budget);
    d.solve()
}

/// Every valid colouring of `s`, in the search order. Fails with a cap error
/// once more than `limit` colourings exist.
pub fn all_valid_colourings(
    s: &Structure,
    p: &Problem,
    limit: usize,
) -> Result<Vec<ColouredStructure>> {
    p.check_input(s)?;
    let mut d = Decider::new(s, p, DEFAULT_BUDGET);
    let mut out = Vec::new();
    if !d.any_violation()? {
        d.extend_all(0, &mut out, limit)?;
    }
    Ok(out)
}

enum Item {
    Vertex(ElementId),
    Tuple(usize),
}

struct Decider<'a> {
    s: &'a Structure,
    p: &'a Problem,
    idx: HomIndex,
    preps: Vec<SourcePrep>,
    vcol: Vec<Colour>,
    ecol: Vec<Colour>,
    items: Vec<Item>,
    nodes: u64,
    budget: u64,
}

impl<'a> Decider<'a> {
    fn new(s: &'a Structure, p: &'a Problem, budget: u64) -> Self {
        let nv = p.palettes.vertex.len();
        let ne = p.palettes.edge.len();
        let vcol = vec![if nv == 1 { 0 } else { NO_COLOUR }; s.n()];
        let ecol = vec![if ne == 1 { 0 } else { NO_COLOUR }; s.tuple_count()];

        // vertices in connectivity order, each followed by the tuples it completes
        let adj = s.gaifman_adjacency();
        let mut placed = vec![false; s.n()];
        let mut linked = vec![0usize; s.n()];
        let mut tuple_done = vec![false; s.tuple_count()];
        let mut items = Vec::new();
        for _ in 0..s.n() {
            let x = (0..s.n())
                .filter(|&x| !placed[x])
                .max_by_key(|&x| (linked[x], adj[x].len(), std::cmp::Reverse(x)))
                .unwrap();
            placed[x] = true;
            for &y in &adj[x] {
                linked[y as usize] += 1;
            }
            if nv > 1 {
                items.push(Item::Vertex(x as ElementId));
            }
            if ne > 1 {
                for &g in s.incident(x as ElementId) {
                    let g = g as usize;
                    if !tuple_done[g] && s.tuple(g).1.iter().all(|&z| placed[z as usize]) {
                        tuple_done[g] = true;
                        items.push(Item::Tuple(g));
                    }
                }
            }
        }
        Decider {
            s,
            p,
            idx: HomIndex::new(s),
            preps: p
                .patterns
                .iter()
                .map(|f| SourcePrep::new(f.body().base()))
                .collect(),
            vcol,
            ecol,
            items,
            nodes: 0,
            budget,
        }
    }

    fn view(&self) -> View<'_> {
        View {
            s: self.s,
            vcol: &self.vcol,
            ecol: &self.ecol,
        }
    }

    fn search(&mut self, f: usize, pins: &[(ElementId, ElementId)]) -> Result<bool> {
        let body = self.p.patterns[f].body();
        let remaining = self.budget.saturating_sub(self.nodes);
        let mut sr = Searcher::new(
            View::of(body),
            &self.preps[f],
            self.view(),
            &self.idx,
            remaining,
        );
        let found = sr.first(pins).map_err(|_| self.exhausted())?.is_some();
        self.nodes += sr.nodes();
        Ok(found)
    }

    fn exhausted(&self) -> Error {
        Error::Budget {
            what: "forbidden-patterns search".into(),
            budget: self.budget,
        }
    }

    /// True if some pattern maps onto the partial colouring.
    fn any_violation(&mut self) -> Result<bool> {
        for f in 0..self.p.patterns.len() {
            if self.search(f, &[])? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// True if some pattern maps onto the partial colouring using item `i`.
    fn violation_at(&mut self, i: usize) -> Result<bool> {
        match self.items[i] {
            Item::Vertex(v) => {
                let c = self.vcol[v as usize];
                for f in 0..self.p.patterns.len() {
                    let body = self.p.patterns[f].body();
                    let us: Vec<ElementId> = (0..body.n() as ElementId)
                        .filter(|&u| body.vcol()[u as usize] == c)
                        .collect();
                    for u in us {
                        if self.search(f, &[(u, v)])? {
                            return Ok(true);
                        }
                    }
                }
            }
            Item::Tuple(g) => {
                let c = self.ecol[g];
                let (sym, t) = self.s.tuple(g);
                let t = t.to_vec();
                for f in 0..self.p.patterns.len() {
                    let body = self.p.patterns[f].body();
                    let mut pin_sets = Vec::new();
                    for (pg, psym, pt) in body.base().tuples() {
                        if psym != sym || body.ecol()[pg] != c {
                            continue;
                        }
                        let pins: Vec<(ElementId, ElementId)> =
                            pt.iter().copied().zip(t.iter().copied()).collect();
                        let consistent = pins
                            .iter()
                            .all(|&(a, b)| pins.iter().all(|&(a2, b2)| a != a2 || b == b2));
                        if consistent {
                            pin_sets.push(pins);
                        }
                    }
                    for pins in pin_sets {
                        if self.search(f, &pins)? {
                            return Ok(true);
                        }
                    }
                }
            }
        }
        Ok(false)
    }

    fn solve(&mut self) -> Result<Option<ColouredStructure>> {
        if self.any_violation()? {
            return Ok(None);
        }
        if self.extend(0)? {
            let cs = ColouredStructure::new(
                self.s.clone(),
                self.vcol.clone(),
                self.ecol.clone(),
                self.p.palettes.clone(),
            )?;
            Ok(Some(cs))
        } else {
            Ok(None)
        }
    }

    fn extend_all(
        &mut self,
        i: usize,
        out: &mut Vec<ColouredStructure>,
        limit: usize,
    ) -> Result<()> {
        if i == self.items.len() {
            if out.len() == limit {
                return Err(Error::cap("valid colourings", limit as u64, None));
            }
            out.push(ColouredStructure::new(
                self.s.clone(),
                self.vcol.clone(),
                self.ecol.clone(),
                self.p.palettes.clone(),
            )?);
            return Ok(());
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(self.exhausted());
        }
        let k = match self.items[i] {
            Item::Vertex(_) => self.p.palettes.vertex.len(),
            Item::Tuple(_) => self.p.palettes.edge.len(),
        };
        for c in 0..k as Colour {
            self.set(i, c);
            if !self.violation_at(i)? {
                self.extend_all(i + 1, out, limit)?;
            }
        }
        self.set(i, NO_COLOUR);
        Ok(())
    }

    fn extend(&mut self, i: usize) -> Result<bool> {
        if i == self.items.len() {
            return Ok(true);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(self.exhausted());
        }
        let k = match self.items[i] {
            Item::Vertex(_) => self.p.palettes.vertex.len(),
            Item::Tuple(_) => self.p.palettes.edge.len(),
        };
        for c in 0..k as Colour {
            self.set(i, c);
            if !self.violation_at(i)? && self.extend(i + 1)? {
                return Ok(true);
            }
        }
        self.set(i, NO_COLOUR);
        Ok(false)
    }

    fn set(&mut self, i: usize, c: Colour) {
        match self.items[i] {
            Item::Vertex(v) => self.vcol[v as usize] = c,
            Item::Tuple(g) => self.ecol[g] = c,
        }
    }
}

/// Names of the built-in graph problems.
pub const BUILTINS: [&str; 3] = ["vertex-no-mono-tri", "edge-no-mono-tri", "tri-free-tri"];

fn sym_closure_pattern(
    sig: &Arc<Signature>,
    pal: &Arc<Palettes>,
    vcol: &[Colour],
    edges: &[(ElementId, ElementId, Colour)],
) -> ColouredStructure {
    let mut b = Structure::builder(sig.clone(), vcol.len());
    for &(u, v, _) in edges {
        b.add(0, &[u, v]).unwrap();
        b.add(0, &[v, u]).unwrap();
    }
    let s = b.build();
    let mut ecol = vec![0; s.tuple_count()];
    for &(u, v, c) in edges {
        ecol[s.find_tuple(0, &[u, v]).unwrap()] = c;
        ecol[s.find_tuple(0, &[v, u]).unwrap()] = c;
    }
    ColouredStructure::new(s, vcol.to_vec(), ecol, pal.clone()).unwrap()
}

fn tokens(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// One of the built-in problems over `{E/2}`. Patterns are written as
/// symmetric closures, matching the graph encoding of inputs.
pub fn builtin(name: &str) -> Result<Problem> {
    let sig = Arc::new(Signature::graph());
    let tri = [(0, 1), (1, 2), (2, 0)];
    let problem = match name {
        "vertex-no-mono-tri" => {
            let pal = Arc::new(Palettes::new(tokens(&["red", "blue"]), tokens(&["_"]))?);
            let pats = (0..2)
                .map(|c| {
                    let e: Vec<_> = tri.iter().map(|&(u, v)| (u, v, 0)).collect();
                    sym_closure_pattern(&sig, &pal, &[c, c, c], &e)
                })
                .collect();
            Problem::new(sig, pal, pats)?
        }
        "edge-no-mono-tri" => {
            let pal = Arc::new(Palettes::new(tokens(&["_"]), tokens(&["dashed", "full"]))?);
            let mut pats: Vec<ColouredStructure> = (0..2)
                .map(|c| {
                    let e: Vec<_> = tri.iter().map(|&(u, v)| (u, v, c)).collect();
                    sym_closure_pattern(&sig, &pal, &[0, 0, 0], &e)
                })
                .collect();
            // the two arcs encoding one edge must agree
            let s = Structure::from_tuples(sig.clone(), 2, &[(0, vec![0, 1]), (0, vec![1, 0])])?;
            pats.push(ColouredStructure::new(
                s,
                vec![0, 0],
                vec![0, 1],
                pal.clone(),
            )?);
            Problem::new(sig, pal, pats)?
        }
        "tri-free-tri" => {
            let pal = Arc::new(Palettes::new(tokens(&["1", "2", "3"]), tokens(&["_"]))?);
            let mut pats = Vec::new();
            for c in 0..3 {
                pats.push(sym_closure_pattern(&sig, &pal, &[c, c], &[(0, 1, 0)]));
            }
            for a in 0..3 {
                for b in 0..3 {
                    for c in 0..3 {
                        let e: Vec<_> = tri.iter().map(|&(u, v)| (u, v, 0)).collect();
                        pats.push(sym_closure_pattern(&sig, &pal, &[a, b, c], &e));
                    }
                }
            }
            Problem::new(sig, pal, pats)?
        }
        other => return Err(Error::UnknownProblem(other.to_string())),
    };
    let mut problem = problem.named(name);
    problem.undirected = true;
    Ok(problem)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relstruct::encode_graph;

    fn complete(n: u32) -> Structure {
        let mut e = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                e.push((i, j));
            }
        }
        encode_graph(n as usize, &e).unwrap()
    }

    fn cycle(n: u32) -> Structure {
        let e: Vec<(u32, u32)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        encode_graph(n as usize, &e).unwrap()
    }

    #[test]
    fn builtin_shapes() {
        let v = builtin("vertex-no-mono-tri").unwrap();
        assert_eq!(
            (
                v.palettes().vertex.len(),
                v.palettes().edge.len(),
                v.patterns().len()
            ),
            (2, 1, 2)
        );
        let e = builtin("edge-no-mono-tri").unwrap();
        assert_eq!((e.palettes().vertex.len(), e.palettes().edge.len()), (1, 2));
        assert_eq!(e.patterns().len(), 3);
        let t = builtin("tri-free-tri").unwrap();
        assert_eq!(t.palettes().vertex.len(), 3);
        assert_eq!(t.patterns().len(), 3 + 10);
        assert!(matches!(builtin("nope"), Err(Error::UnknownProblem(_))));
    }

    #[test]
    fn counts_all_colourings() {
        let p = builtin("vertex-no-mono-tri").unwrap();
        // 2^3 colourings of a triangle minus the two monochromatic ones
        assert_eq!(
            all_valid_colourings(&complete(3), &p, 100).unwrap().len(),
            6
        );
        assert_eq!(all_valid_colourings(&cycle(4), &p, 100).unwrap().len(), 16);
        assert!(all_valid_colourings(&cycle(4), &p, 10).is_err());
    }

    #[test]
    fn validity_examples() {
        let p = builtin("vertex-no-mono-tri").unwrap();
        let k3 = complete(3);
        let mono =
            ColouredStructure::new(k3.clone(), vec![0, 0, 0], vec![0; 6], p.palettes().clone())
                .unwrap();
        assert!(!is_valid(&mono, &p).unwrap());
        let mixed =
            ColouredStructure::new(k3, vec![0, 0, 1], vec![0; 6], p.palettes().clone()).unwrap();
        assert!(is_valid(&mixed, &p).unwrap());
        let c4 = p.blank(&cycle(4));
        assert!(is_valid(&c4, &p).unwrap());
    }

    #[test]
    fn decisions() {
        let v = builtin("vertex-no-mono-tri").unwrap();
        let w = decide_fpp(&complete(4), &v).unwrap().unwrap();
        assert!(is_valid(&w, &v).unwrap());
        assert!(decide_fpp(&complete(5), &v).unwrap().is_none());
        let t = builtin("tri-free-tri").unwrap();
        assert!(decide_fpp(&cycle(5), &t).unwrap().is_some());
        assert!(decide_fpp(&complete(3), &t).unwrap().is_none());
    }

    #[test]
    fn ramsey_edge_colourings() {
        let e = builtin("edge-no-mono-tri").unwrap();
        let w = decide_fpp(&complete(5), &e).unwrap().unwrap();
        assert!(is_valid(&w, &e).unwrap());
        assert!(decide_fpp(&complete(6), &e).unwrap().is_none());
    }

    #[test]
    fn params_of_builtins() {
        assert_eq!(params(&builtin("vertex-no-mono-tri").unwrap()), (1, 3));
        let sig = Arc::new(Signature::graph());
        let empty = Problem::new(sig.clone(), Arc::new(Palettes::single()), vec![]).unwrap();
        assert_eq!(params(&empty), (0, 0));
        let arc = ColouredStructure::uncoloured(
            Structure::from_tuples(sig.clone(), 2, &[(0, vec![0, 1])]).unwrap(),
        );
        let p = Problem::new(sig, Arc::new(Palettes::single()), vec![arc]).unwrap();
        assert_eq!(params(&p), (1, 2));
    }

    #[test]
    fn disconnected_patterns_are_rejected() {
        let sig = Arc::new(Signature::graph());
        let two = ColouredStructure::uncoloured(Structure::empty(sig.clone(), 2));
        assert!(Problem::new(sig, Arc::new(Palettes::single()), vec![two]).is_err());
    }

    #[test]
    fn isomorphic_patterns_collapse() {
        let sig = Arc::new(Signature::graph());
        let a = ColouredStructure::uncoloured(
            Structure::from_tuples(sig.clone(), 2, &[(0, vec![0, 1])]).unwrap(),
        );
        let b = ColouredStructure::uncoloured(
            Structure::from_tuples(sig.clone(), 2, &[(0, vec![1, 0])]).unwrap(),
        );
        let p = Problem::new(sig, Arc::new(Palettes::single()), vec![a, b]).unwrap();
        assert_eq!(p.patterns().len(), 1);
    }
}
