//! Finite relational structures, coloured structures and the structural
//! utilities built on them (Gaifman graph, components, induced
//! substructures, graph encoding).
//!
//! Elements are dense integers `0..n`. Each relation is stored as a sorted,
//! duplicate-free flat array of tuples, and every tuple occurrence has a
//! global id (`offset[symbol] + index`) used to attach tuple colours.

use std::borrow::Cow;
use std::collections::{BTreeSet, VecDeque};
use std::sync::Arc;

use crate::error::{Error, Result};

pub type ElementId = u32;
pub type Colour = u16;

/// Colour token used for the single colour of an uncoloured palette.
pub const DEFAULT_COLOUR: &str = "_";

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    symbols: Vec<Symbol>,
}

impl Signature {
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let mut out: Vec<Symbol> = Vec::new();
        for (name, arity) in symbols {
            let name = name.into();
            if arity == 0 {
                return Err(Error::InvalidSignature(format!("`{name}` has arity 0")));
            }
            if name.is_empty() {
                return Err(Error::InvalidSignature("empty symbol name".into()));
            }
            if out.iter().any(|s| s.name == name) {
                return Err(Error::InvalidSignature(format!(
                    "duplicate symbol `{name}`"
                )));
            }
            out.push(Symbol { name, arity });
        }
        Ok(Signature { symbols: out })
    }

    /// The digraph signature `{E/2}`.
    pub fn graph() -> Self {
        Signature::new([("E", 2)]).unwrap()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn arity(&self, sym: usize) -> usize {
        self.symbols[sym].arity
    }

    pub fn name(&self, sym: usize) -> &str {
        &self.symbols[sym].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }

    pub fn max_arity(&self) -> usize {
        self.symbols.iter().map(|s| s.arity).max().unwrap_or(0)
    }

    /// True for a single binary symbol, the shape used to encode (di)graphs.
    pub fn is_binary_single(&self) -> bool {
        self.symbols.len() == 1 && self.symbols[0].arity == 2
    }
}

/// Tuples of one relation symbol, sorted lexicographically and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    arity: usize,
    data: Vec<ElementId>,
}

impl Relation {
    fn from_unsorted(arity: usize, data: Vec<ElementId>) -> Self {
        let count = data.len() / arity;
        let mut idx: Vec<usize> = (0..count).collect();
        idx.sort_unstable_by(|&a, &b| {
            data[a * arity..(a + 1) * arity].cmp(&data[b * arity..(b + 1) * arity])
        });
        let mut out = Vec::with_capacity(data.len());
        let mut last: Option<usize> = None;
        for i in idx {
            let t = &data[i * arity..(i + 1) * arity];
            if let Some(l) = last {
                if &data[l * arity..(l + 1) * arity] == t {
                    continue;
                }
            }
            out.extend_from_slice(t);
            last = Some(i);
        }
        Relation { arity, data: out }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.arity
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn tuple(&self, i: usize) -> &[ElementId] {
        &self.data[i * self.arity..(i + 1) * self.arity]
    }

    pub fn iter(&self) -> std::slice::ChunksExact<'_, ElementId> {
        self.data.chunks_exact(self.arity)
    }

    /// Index of `t` in this relation, by binary search.
    pub fn find(&self, t: &[ElementId]) -> Option<usize> {
        let (mut lo, mut hi) = (0usize, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.tuple(mid).cmp(t) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }
}

/// A finite relational structure over a [`Signature`] with domain `0..n`.
#[derive(Clone, Debug)]
pub struct Structure {
    sig: Arc<Signature>,
    n: usize,
    names: Option<Arc<[String]>>,
    rels: Vec<Relation>,
    offsets: Vec<usize>,
    inc_off: Vec<u32>,
    inc: Vec<u32>,
}

impl PartialEq for Structure {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.sig == other.sig && self.rels == other.rels
    }
}
impl Eq for Structure {}

/// One tuple occurrence `R(x_1..x_r)` of a structure.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TupleOccurrence {
    pub symbol: usize,
    pub tuple: Vec<ElementId>,
}

pub struct StructureBuilder {
    sig: Arc<Signature>,
    n: usize,
    data: Vec<Vec<ElementId>>,
    names: Option<Vec<String>>,
}

impl StructureBuilder {
    pub fn new(sig: Arc<Signature>, n: usize) -> Self {
        let data = vec![Vec::new(); sig.len()];
        StructureBuilder {
            sig,
            n,
            data,
            names: None,
        }
    }

    pub fn names(mut self, names: Vec<String>) -> Self {
        self.names = Some(names);
        self
    }

    pub fn add(&mut self, sym: usize, t: &[ElementId]) -> Result<()> {
        let arity = self.sig.arity(sym);
        if t.len() != arity {
            return Err(Error::Arity {
                symbol: self.sig.name(sym).to_string(),
                arity,
                got: t.len(),
            });
        }
        if let Some(&bad) = t.iter().find(|&&x| x as usize >= self.n) {
            return Err(Error::UnknownElement(bad));
        }
        self.data[sym].extend_from_slice(t);
        Ok(())
    }

    pub fn add_named(&mut self, symbol: &str, t: &[ElementId]) -> Result<()> {
        let sym = self
            .sig
            .index_of(symbol)
            .ok_or_else(|| Error::SignatureMismatch(format!("unknown symbol `{symbol}`")))?;
        self.add(sym, t)
    }

    pub fn build(self) -> Structure {
        let rels = self
            .data
            .into_iter()
            .enumerate()
            .map(|(s, d)| Relation::from_unsorted(self.sig.arity(s), d))
            .collect();
        Structure::from_parts(self.sig, self.n, rels, self.names.map(Into::into))
    }
}

impl Structure {
    fn from_parts(
        sig: Arc<Signature>,
        n: usize,
        rels: Vec<Relation>,
        names: Option<Arc<[String]>>,
    ) -> Self {
        let mut offsets = Vec::with_capacity(rels.len() + 1);
        let mut acc = 0usize;
        for r in &rels {
            offsets.push(acc);
            acc += r.len();
        }
        offsets.push(acc);

        let mut counts = vec![0u32; n + 1];
        let mut scratch: Vec<ElementId> = Vec::new();
        let distinct = |t: &[ElementId], scratch: &mut Vec<ElementId>| {
            scratch.clear();
            scratch.extend_from_slice(t);
            scratch.sort_unstable();
            scratch.dedup();
        };
        for r in &rels {
            for t in r.iter() {
                distinct(t, &mut scratch);
                for &x in scratch.iter() {
                    counts[x as usize + 1] += 1;
                }
            }
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let inc_off = counts.clone();
        let mut fill = counts;
        let mut inc = vec![0u32; acc];
        // total incidences may exceed the tuple count; size properly
        inc.resize(inc_off[n] as usize, 0);
        for (s, r) in rels.iter().enumerate() {
            for (i, t) in r.iter().enumerate() {
                distinct(t, &mut scratch);
                for &x in scratch.iter() {
                    let slot = &mut fill[x as usize];
                    inc[*slot as usize] = (offsets[s] + i) as u32;
                    *slot += 1;
                }
            }
        }
        Structure {
            sig,
            n,
            names,
            rels,
            offsets,
            inc_off,
            inc,
        }
    }

    pub fn builder(sig: Arc<Signature>, n: usize) -> StructureBuilder {
        StructureBuilder::new(sig, n)
    }

    /// Structure from per-symbol tuple lists.
    pub fn from_tuples(
        sig: Arc<Signature>,
        n: usize,
        tuples: &[(usize, Vec<ElementId>)],
    ) -> Result<Self> {
        let mut b = StructureBuilder::new(sig, n);
        for (s, t) in tuples {
            b.add(*s, t)?;
        }
        Ok(b.build())
    }

    /// Structure with no tuples.
    pub fn empty(sig: Arc<Signature>, n: usize) -> Self {
        StructureBuilder::new(sig, n).build()
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn signature_arc(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Shares `sig`, which must equal the current signature.
    pub fn with_sig(mut self, sig: Arc<Signature>) -> Self {
        assert_eq!(*self.sig, *sig);
        self.sig = sig;
        self
    }

    pub fn relation(&self, sym: usize) -> &Relation {
        &self.rels[sym]
    }

    pub fn relations(&self) -> &[Relation] {
        &self.rels
    }

    /// Number of tuple occurrences over all symbols.
    pub fn tuple_count(&self) -> usize {
        *self.offsets.last().unwrap_or(&0)
    }

    pub fn global_id(&self, sym: usize, idx: usize) -> usize {
        self.offsets[sym] + idx
    }

    /// Symbol and tuple of a global tuple id.
    pub fn tuple(&self, gid: usize) -> (usize, &[ElementId]) {
        let sym = match self.offsets.binary_search(&gid) {
            Ok(mut s) => {
                // skip empty relations sharing the same offset
                while self.offsets[s + 1] == gid {
                    s += 1;
                }
                s
            }
            Err(s) => s - 1,
        };
        (sym, self.rels[sym].tuple(gid - self.offsets[sym]))
    }

    pub fn find_tuple(&self, sym: usize, t: &[ElementId]) -> Option<usize> {
        self.rels[sym].find(t).map(|i| self.offsets[sym] + i)
    }

    pub fn holds(&self, sym: usize, t: &[ElementId]) -> bool {
        self.rels[sym].find(t).is_some()
    }

    /// All tuple occurrences as (global id, symbol, tuple), in global id order.
    pub fn tuples(&self) -> impl Iterator<Item = (usize, usize, &[ElementId])> + '_ {
        self.rels.iter().enumerate().flat_map(move |(s, r)| {
            r.iter()
                .enumerate()
                .map(move |(i, t)| (self.offsets[s] + i, s, t))
        })
    }

    /// Global ids of the distinct tuples mentioning `x`.
    pub fn incident(&self, x: ElementId) -> &[u32] {
        let x = x as usize;
        &self.inc[self.inc_off[x] as usize..self.inc_off[x + 1] as usize]
    }

    pub fn name(&self, x: ElementId) -> Cow<'_, str> {
        match &self.names {
            Some(n) => Cow::Borrowed(&n[x as usize]),
            None => Cow::Owned(x.to_string()),
        }
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.n);
        self.names = Some(names.into());
        self
    }

    pub fn without_names(mut self) -> Self {
        self.names = None;
        self
    }

    fn check_element(&self, x: ElementId) -> Result<()> {
        if (x as usize) < self.n {
            Ok(())
        } else {
            Err(Error::UnknownElement(x))
        }
    }

    /// E(S): one occurrence per (symbol, tuple) present.
    pub fn tuple_set(&self) -> Vec<TupleOccurrence> {
        self.tuples()
            .map(|(_, s, t)| TupleOccurrence {
                symbol: s,
                tuple: t.to_vec(),
            })
            .collect()
    }

    /// Number of distinct tuple occurrences mentioning `x`.
    pub fn degree(&self, x: ElementId) -> Result<usize> {
        self.check_element(x)?;
        Ok(self.incident(x).len())
    }

    /// Sorted neighbour lists of the Gaifman graph.
    pub fn gaifman_adjacency(&self) -> Vec<Vec<ElementId>> {
        let mut adj: Vec<BTreeSet<ElementId>> = vec![BTreeSet::new(); self.n];
        for (_, _, t) in self.tuples() {
            for &a in t {
                for &b in t {
                    if a != b {
                        adj[a as usize].insert(b);
                    }
                }
            }
        }
        adj.into_iter().map(|s| s.into_iter().collect()).collect()
    }

    /// The Gaifman graph as a symmetric loopless structure over `{adj/2}`.
    pub fn gaifman(&self) -> Structure {
        let sig = Arc::new(Signature::new([("adj", 2)]).unwrap());
        let mut b = StructureBuilder::new(sig, self.n);
        for (x, ns) in self.gaifman_adjacency().iter().enumerate() {
            for &y in ns {
                b.add(0, &[x as ElementId, y]).unwrap();
            }
        }
        let mut s = b.build();
        s.names = self.names.clone();
        s
    }

    /// Number of Gaifman neighbours of `x`.
    pub fn gaifman_degree(&self, x: ElementId) -> usize {
        let mut seen: Vec<ElementId> = Vec::new();
        for &g in self.incident(x) {
            for &y in self.tuple(g as usize).1 {
                if y != x {
                    seen.push(y);
                }
            }
        }
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }

    pub fn max_gaifman_degree(&self) -> usize {
        (0..self.n as ElementId)
            .map(|x| self.gaifman_degree(x))
            .max()
            .unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n as ElementId)
            .map(|x| self.incident(x).len())
            .max()
            .unwrap_or(0)
    }

    /// Element sets of the connected components, each sorted, ordered by
    /// smallest element.
    pub fn component_sets(&self) -> Vec<Vec<ElementId>> {
        let adj = self.gaifman_adjacency();
        let mut comp = vec![usize::MAX; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s as ElementId];
            comp[s] = id;
            let mut q = VecDeque::from([s]);
            while let Some(x) = q.pop_front() {
                for &y in &adj[x] {
                    if comp[y as usize] == usize::MAX {
                        comp[y as usize] = id;
                        members.push(y);
                        q.push_back(y as usize);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n > 0 && self.component_sets().len() == 1
    }

    /// Connected components as induced substructures.
    pub fn components(&self) -> Vec<Structure> {
        self.component_sets()
            .iter()
            .map(|c| self.induced(c).unwrap().0)
            .collect()
    }

    /// Induced substructure on `subset` (order of `subset` becomes the new
    /// element order). Returns the structure and the map new id -> old id.
    pub fn induced(&self, subset: &[ElementId]) -> Result<(Structure, Vec<ElementId>)> {
        let mut pos = vec![u32::MAX; self.n];
        for (i, &x) in subset.iter().enumerate() {
            self.check_element(x)?;
            if pos[x as usize] != u32::MAX {
                return Err(Error::Invalid(format!("element {x} listed twice")));
            }
            pos[x as usize] = i as u32;
        }
        let mut b = StructureBuilder::new(self.sig.clone(), subset.len());
        let mut buf = Vec::new();
        let mut keep = |b: &mut StructureBuilder, s: usize, t: &[ElementId]| -> Result<()> {
            if t.iter().all(|&x| pos[x as usize] != u32::MAX) {
                buf.clear();
                buf.extend(t.iter().map(|&x| pos[x as usize]));
                b.add(s, &buf)?;
            }
            Ok(())
        };
        if subset.len() * 8 < self.n {
            // small subsets: only tuples through their elements, in global order
            let mut gids: Vec<u32> = subset
                .iter()
                .flat_map(|&x| self.incident(x).iter().copied())
                .collect();
            gids.sort_unstable();
            gids.dedup();
            for g in gids {
                let (s, t) = self.tuple(g as usize);
                keep(&mut b, s, t)?;
            }
        } else {
            for (_, s, t) in self.tuples() {
                keep(&mut b, s, t)?;
            }
        }
        if let Some(names) = &self.names {
            b = b.names(subset.iter().map(|&x| names[x as usize].clone()).collect());
        }
        Ok((b.build(), subset.to_vec()))
    }

    /// Relabel elements: element `x` becomes `perm[x]`.
    pub fn permute(&self, perm: &[ElementId]) -> Structure {
        let mut b = StructureBuilder::new(self.sig.clone(), self.n);
        let mut buf = Vec::new();
        for (_, s, t) in self.tuples() {
            buf.clear();
            buf.extend(t.iter().map(|&x| perm[x as usize]));
            b.add(s, &buf).unwrap();
        }
        if let Some(names) = &self.names {
            let mut nn = vec![String::new(); self.n];
            for (x, &p) in perm.iter().enumerate() {
                nn[p as usize] = names[x].clone();
            }
            b = b.names(nn);
        }
        b.build()
    }

    /// Disjoint union; elements of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Structure) -> Result<Structure> {
        if self.sig != other.sig {
            return Err(Error::SignatureMismatch(
                "disjoint union of different signatures".into(),
            ));
        }
        let shift = self.n as ElementId;
        let mut b = StructureBuilder::new(self.sig.clone(), self.n + other.n);
        for (_, s, t) in self.tuples() {
            b.add(s, t)?;
        }
        let mut buf = Vec::new();
        for (_, s, t) in other.tuples() {
            buf.clear();
            buf.extend(t.iter().map(|&x| x + shift));
            b.add(s, &buf)?;
        }
        if let (Some(a), Some(c)) = (&self.names, &other.names) {
            let set: BTreeSet<&String> = a.iter().collect();
            if c.iter().all(|x| !set.contains(x)) {
                b = b.names(a.iter().chain(c.iter()).cloned().collect());
            }
        }
        Ok(b.build())
    }

    /// Gaifman eccentricities from `src` (u32::MAX for unreachable).
    pub fn distances_from(&self, adj: &[Vec<ElementId>], src: ElementId) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.n];
        dist[src as usize] = 0;
        let mut q = VecDeque::from([src]);
        while let Some(x) = q.pop_front() {
            for &y in &adj[x as usize] {
                if dist[y as usize] == u32::MAX {
                    dist[y as usize] = dist[x as usize] + 1;
                    q.push_back(y);
                }
            }
        }
        dist
    }

    /// Maximum Gaifman distance between two elements of a connected structure.
    pub fn diameter(&self) -> Result<usize> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let adj = self.gaifman_adjacency();
        let mut best = 0;
        for x in 0..self.n as ElementId {
            let d = self.distances_from(&adj, x);
            best = best.max(*d.iter().max().unwrap() as usize);
        }
        Ok(best)
    }

    /// True when every binary relation is symmetric.
    pub fn is_symmetric(&self) -> bool {
        self.rels
            .iter()
            .filter(|r| r.arity == 2)
            .all(|r| r.iter().all(|t| r.find(&[t[1], t[0]]).is_some()))
    }

    pub fn has_loops(&self) -> bool {
        self.tuples()
            .any(|(_, _, t)| t.windows(2).all(|w| w[0] == w[1]))
    }

    /// Adds the reverse of every binary tuple.
    pub fn symmetric_closure(&self) -> Structure {
        let mut b = StructureBuilder::new(self.sig.clone(), self.n);
        for (_, s, t) in self.tuples() {
            b.add(s, t).unwrap();
            if t.len() == 2 {
                b.add(s, &[t[1], t[0]]).unwrap();
            }
        }
        if let Some(n) = &self.names {
            b = b.names(n.to_vec());
        }
        b.build()
    }
}

/// Encode a simple graph on `n` vertices as the symmetric closure over `{E/2}`.
pub fn encode_graph(n: usize, edges: &[(ElementId, ElementId)]) -> Result<Structure> {
    let mut b = StructureBuilder::new(Arc::new(Signature::graph()), n);
    for &(u, v) in edges {
        if u == v {
            return Err(Error::Invalid(format!("loop at {u} in a simple graph")));
        }
        b.add(0, &[u, v])?;
        b.add(0, &[v, u])?;
    }
    Ok(b.build())
}

/// Adjacency of a structure over a single binary symbol: `{u,v}` is an edge
/// when `E(u,v)` or `E(v,u)` holds. Returned with `u < v`, sorted.
pub fn decode_graph(s: &Structure) -> Result<Vec<(ElementId, ElementId)>> {
    if !s.signature().is_binary_single() {
        return Err(Error::SignatureMismatch(
            "graph decoding needs a single binary symbol".into(),
        ));
    }
    let mut edges = BTreeSet::new();
    for t in s.relation(0).iter() {
        if t[0] == t[1] {
            return Err(Error::Invalid(format!("loop at {}", t[0])));
        }
        edges.insert((t[0].min(t[1]), t[0].max(t[1])));
    }
    Ok(edges.into_iter().collect())
}

/// Colour tokens for vertices and tuples.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Palettes {
    pub vertex: Vec<String>,
    pub edge: Vec<String>,
}

impl Palettes {
    pub fn new(vertex: Vec<String>, edge: Vec<String>) -> Result<Self> {
        for (what, p) in [("vertex", &vertex), ("edge", &edge)] {
            if p.is_empty() {
                return Err(Error::PaletteMismatch(format!("empty {what} palette")));
            }
            let set: BTreeSet<&String> = p.iter().collect();
            if set.len() != p.len() {
                return Err(Error::PaletteMismatch(format!(
                    "repeated token in {what} palette"
                )));
            }
            if p.len() > Colour::MAX as usize {
                return Err(Error::PaletteMismatch(format!("{what} palette too large")));
            }
        }
        Ok(Palettes { vertex, edge })
    }

    /// Singleton palettes: the uncoloured case.
    pub fn single() -> Self {
        Palettes {
            vertex: vec![DEFAULT_COLOUR.into()],
            edge: vec![DEFAULT_COLOUR.into()],
        }
    }

    pub fn numbered(nv: usize, ne: usize) -> Self {
        let mk = |k: usize| -> Vec<String> {
            if k == 1 {
                vec![DEFAULT_COLOUR.into()]
            } else {
                (0..k).map(|i| i.to_string()).collect()
            }
        };
        Palettes {
            vertex: mk(nv),
            edge: mk(ne),
        }
    }

    pub fn vertex_index(&self, tok: &str) -> Option<Colour> {
        self.vertex
            .iter()
            .position(|c| c == tok)
            .map(|i| i as Colour)
    }

    pub fn edge_index(&self, tok: &str) -> Option<Colour> {
        self.edge.iter().position(|c| c == tok).map(|i| i as Colour)
    }

    pub fn is_single(&self) -> bool {
        self.vertex.len() == 1 && self.edge.len() == 1
    }
}

/// A structure with a total vertex colouring and a total tuple colouring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColouredStructure {
    base: Structure,
    vcol: Vec<Colour>,
    ecol: Vec<Colour>,
    palettes: Arc<Palettes>,
}

impl ColouredStructure {
    pub fn new(
        base: Structure,
        vcol: Vec<Colour>,
        ecol: Vec<Colour>,
        palettes: Arc<Palettes>,
    ) -> Result<Self> {
        if vcol.len() != base.n() {
            return Err(Error::Invalid(format!(
                "vertex colouring has {} entries for {} elements",
                vcol.len(),
                base.n()
            )));
        }
        if ecol.len() != base.tuple_count() {
            return Err(Error::Invalid(format!(
                "tuple colouring has {} entries for {} tuples",
                ecol.len(),
                base.tuple_count()
            )));
        }
        if vcol.iter().any(|&c| c as usize >= palettes.vertex.len()) {
            return Err(Error::PaletteMismatch(
                "vertex colour outside palette".into(),
            ));
        }
        if ecol.iter().any(|&c| c as usize >= palettes.edge.len()) {
            return Err(Error::PaletteMismatch(
                "tuple colour outside palette".into(),
            ));
        }
        Ok(ColouredStructure {
            base,
            vcol,
            ecol,
            palettes,
        })
    }

    /// Every element and tuple gets colour 0 of the given palettes.
    pub fn with_palettes(base: Structure, palettes: Arc<Palettes>) -> Self {
        let vcol = vec![0; base.n()];
        let ecol = vec![0; base.tuple_count()];
        ColouredStructure {
            base,
            vcol,
            ecol,
            palettes,
        }
    }

    pub fn uncoloured(base: Structure) -> Self {
        Self::with_palettes(base, Arc::new(Palettes::single()))
    }

    pub fn base(&self) -> &Structure {
        &self.base
    }

    pub fn into_base(self) -> Structure {
        self.base
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn vcol(&self) -> &[Colour] {
        &self.vcol
    }

    pub fn ecol(&self) -> &[Colour] {
        &self.ecol
    }

    pub fn palettes(&self) -> &Arc<Palettes> {
        &self.palettes
    }

    pub fn signature(&self) -> &Signature {
        self.base.signature()
    }

    /// Colour of tuple `t` of symbol `sym`, if it holds.
    pub fn tuple_colour(&self, sym: usize, t: &[ElementId]) -> Option<Colour> {
        self.base.find_tuple(sym, t).map(|g| self.ecol[g])
    }

    /// Same structure with all colours collapsed into singleton palettes.
    pub fn with_names(mut self, names: Vec<String>) -> Self {
        self.base = self.base.with_names(names);
        self
    }

    pub fn forget_colours(&self) -> ColouredStructure {
        ColouredStructure::uncoloured(self.base.clone())
    }

    pub fn recolour(
        &self,
        palettes: Arc<Palettes>,
        vcol: Vec<Colour>,
        ecol: Vec<Colour>,
    ) -> Result<Self> {
        ColouredStructure::new(self.base.clone(), vcol, ecol, palettes)
    }

    pub fn induced(&self, subset: &[ElementId]) -> Result<(ColouredStructure, Vec<ElementId>)> {
        let (s, map) = self.base.induced(subset)?;
        let vcol = map.iter().map(|&x| self.vcol[x as usize]).collect();
        let ecol = s
            .tuples()
            .map(|(_, sym, t)| {
                let old: Vec<ElementId> = t.iter().map(|&x| map[x as usize]).collect();
                self.ecol[self.base.find_tuple(sym, &old).expect("induced tuple")]
            })
            .collect();
        Ok((
            ColouredStructure {
                base: s,
                vcol,
                ecol,
                palettes: self.palettes.clone(),
            },
            map,
        ))
    }

    pub fn permute(&self, perm: &[ElementId]) -> ColouredStructure {
        let s = self.base.permute(perm);
        let mut vcol = vec![0; self.n()];
        for (x, &p) in perm.iter().enumerate() {
            vcol[p as usize] = self.vcol[x];
        }
        let mut ecol = vec![0; s.tuple_count()];
        let mut buf = Vec::new();
        for (g, sym, t) in self.base.tuples() {
            buf.clear();
            buf.extend(t.iter().map(|&x| perm[x as usize]));
            ecol[s.find_tuple(sym, &buf).unwrap()] = self.ecol[g];
        }
        ColouredStructure {
            base: s,
            vcol,
            ecol,
            palettes: self.palettes.clone(),
        }
    }

    pub fn component_sets(&self) -> Vec<Vec<ElementId>> {
        self.base.component_sets()
    }

    pub fn components(&self) -> Vec<ColouredStructure> {
        self.component_sets()
            .iter()
            .map(|c| self.induced(c).unwrap().0)
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        self.base.is_connected()
    }

    /// A+B with B's elements shifted by |A|.
    pub fn disjoint_union(&self, other: &ColouredStructure) -> Result<ColouredStructure> {
        if self.palettes != other.palettes {
            return Err(Error::PaletteMismatch(
                "disjoint union of different palettes".into(),
            ));
        }
        let s = self.base.disjoint_union(&other.base)?;
        let shift = self.n() as ElementId;
        let mut vcol = self.vcol.clone();
        vcol.extend_from_slice(&other.vcol);
        let mut ecol = vec![0; s.tuple_count()];
        for (g, sym, t) in self.base.tuples() {
            ecol[s.find_tuple(sym, t).unwrap()] = self.ecol[g];
        }
        let mut buf = Vec::new();
        for (g, sym, t) in other.base.tuples() {
            buf.clear();
            buf.extend(t.iter().map(|&x| x + shift));
            ecol[s.find_tuple(sym, &buf).unwrap()] = other.ecol[g];
        }
        Ok(ColouredStructure {
            base: s,
            vcol,
            ecol,
            palettes: self.palettes.clone(),
        })
    }

    /// Disjoint union of many structures sharing palettes and signature.
    pub fn disjoint_union_all(
        sig: Arc<Signature>,
        palettes: Arc<Palettes>,
        parts: &[ColouredStructure],
    ) -> Result<ColouredStructure> {
        let n: usize = parts.iter().map(|p| p.n()).sum();
        let mut b = StructureBuilder::new(sig, n);
        let mut vcol = Vec::with_capacity(n);
        let mut shift = 0u32;
        let mut buf = Vec::new();
        for p in parts {
            if *p.palettes != *palettes {
                return Err(Error::PaletteMismatch(
                    "disjoint union of different palettes".into(),
                ));
            }
            for (_, s, t) in p.base.tuples() {
                buf.clear();
                buf.extend(t.iter().map(|&x| x + shift));
                b.add(s, &buf)?;
            }
            vcol.extend_from_slice(&p.vcol);
            shift += p.n() as u32;
        }
        let s = b.build();
        let mut ecol = vec![0; s.tuple_count()];
        shift = 0;
        for p in parts {
            for (g, sym, t) in p.base.tuples() {
                buf.clear();
                buf.extend(t.iter().map(|&x| x + shift));
                ecol[s.find_tuple(sym, &buf).unwrap()] = p.ecol[g];
            }
            shift += p.n() as u32;
        }
        ColouredStructure::new(s, vcol, ecol, palettes)
    }

    /// Reverse arcs added by symmetric closure inherit the colour of the
    /// arc they mirror.
    pub fn symmetric_closure(&self) -> ColouredStructure {
        let s = self.base.symmetric_closure();
        let mut ecol = vec![0; s.tuple_count()];
        for (g, sym, t) in s.tuples() {
            ecol[g] = match self.base.find_tuple(sym, t) {
                Some(o) => self.ecol[o],
                None => {
                    let rev = [t[1], t[0]];
                    self.ecol[self.base.find_tuple(sym, &rev).unwrap()]
                }
            };
        }
        ColouredStructure {
            base: s,
            vcol: self.vcol.clone(),
            ecol,
            palettes: self.palettes.clone(),
        }
    }
}
