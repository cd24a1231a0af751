//! Isomorphism-free enumeration of small connected structures.
//!
//! Structures grow one element at a time. Every connected structure on
//! `n + 1` elements arises from a connected one on `n` elements (drop a
//! non-cut element), so filters that are closed under connected induced
//! substructures may be applied at every level.

use std::collections::HashSet;
use std::sync::Arc;

use crate::canon::{canonical_form_capped, canonical_key, CanonicalKey};
use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::patterns::{all_valid_colourings, decide_fpp, Problem};
use crate::relstruct::{ColouredStructure, ElementId, Signature, Structure};

/// Refuse extension steps with more candidate tuples than this.
pub const CANDIDATE_CAP: usize = 24;
/// Default bound on the number of structures kept across all levels.
pub const STRUCTURE_CAP: usize = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    /// Arbitrary tuples over the signature.
    Any,
    /// Symmetric loopless relation over one binary symbol (undirected graphs).
    Graph,
}

#[derive(Clone, Debug)]
pub struct EnumSpec {
    pub sig: Arc<Signature>,
    pub max_n: usize,
    pub shape: Shape,
    /// Bound on the Gaifman degree.
    pub max_degree: Option<usize>,
    /// Allow tuples whose entries are all equal.
    pub loops: bool,
    pub cap: usize,
}

impl EnumSpec {
    pub fn graphs(max_n: usize, max_degree: Option<usize>) -> Self {
        EnumSpec {
            sig: Arc::new(Signature::graph()),
            max_n,
            shape: Shape::Graph,
            max_degree,
            loops: false,
            cap: STRUCTURE_CAP,
        }
    }

    pub fn digraphs(max_n: usize, max_degree: Option<usize>, loops: bool) -> Self {
        EnumSpec {
            sig: Arc::new(Signature::graph()),
            max_n,
            shape: Shape::Any,
            max_degree,
            loops,
            cap: STRUCTURE_CAP,
        }
    }

    pub fn structures(sig: Arc<Signature>, max_n: usize, loops: bool) -> Self {
        EnumSpec {
            sig,
            max_n,
            shape: Shape::Any,
            max_degree: None,
            loops,
            cap: STRUCTURE_CAP,
        }
    }
}

/// Hereditary predicate on connected structures.
pub type Filter<'a> = dyn Fn(&Structure) -> Result<bool> + Sync + 'a;

/// Connected structures up to isomorphism, grouped by size: `levels[k]`
/// holds the canonical representatives with `k + 1` elements that pass
/// `filter`.
pub fn connected_structures(
    spec: &EnumSpec,
    filter: &Filter<'_>,
    exec: Exec,
) -> Result<Vec<Vec<Structure>>> {
    if spec.shape == Shape::Graph && !spec.sig.is_binary_single() {
        return Err(Error::SignatureMismatch(
            "graph enumeration needs one binary symbol".into(),
        ));
    }
    let mut levels: Vec<Vec<Structure>> = Vec::new();
    if spec.max_n == 0 {
        return Ok(levels);
    }
    let mut total = 0usize;
    let first = canonical_dedup(singletons(spec), exec)?;
    let first = keep(first, filter, exec)?;
    total += first.len();
    levels.push(first);
    for _ in 1..spec.max_n {
        let prev = levels.last().unwrap();
        let grown: Vec<Vec<Structure>> = par::try_map(exec, prev, |s| extensions(spec, s))?;
        let next = canonical_dedup(grown.into_iter().flatten().collect(), exec)?;
        let next = keep(next, filter, exec)?;
        total += next.len();
        if total > spec.cap {
            return Err(Error::cap("structure enumeration", spec.cap as u64, None));
        }
        if next.is_empty() {
            break;
        }
        levels.push(next);
    }
    Ok(levels)
}

/// All levels concatenated.
pub fn connected_flat(spec: &EnumSpec, filter: &Filter<'_>, exec: Exec) -> Result<Vec<Structure>> {
    Ok(connected_structures(spec, filter, exec)?
        .into_iter()
        .flatten()
        .collect())
}

fn singletons(spec: &EnumSpec) -> Vec<Structure> {
    let sig = &spec.sig;
    if !spec.loops || spec.shape == Shape::Graph {
        return vec![Structure::empty(sig.clone(), 1)];
    }
    let k = sig.len();
    (0..1u32 << k)
        .map(|mask| {
            let tuples: Vec<(usize, Vec<ElementId>)> = (0..k)
                .filter(|&s| mask >> s & 1 == 1)
                .map(|s| (s, vec![0; sig.arity(s)]))
                .collect();
            Structure::from_tuples(sig.clone(), 1, &tuples).unwrap()
        })
        .collect()
}

/// Tuples over `{0..=z}` that mention `z`.
fn candidates(spec: &EnumSpec, z: ElementId) -> Vec<Vec<(usize, Vec<ElementId>)>> {
    let mut out = Vec::new();
    if spec.shape == Shape::Graph {
        for y in 0..z {
            out.push(vec![(0, vec![y, z]), (0, vec![z, y])]);
        }
        return out;
    }
    for sym in 0..spec.sig.len() {
        let r = spec.sig.arity(sym);
        let base = z as usize + 1;
        let total = base.pow(r as u32);
        for code in 0..total {
            let mut t = Vec::with_capacity(r);
            let mut c = code;
            for _ in 0..r {
                t.push((c % base) as ElementId);
                c /= base;
            }
            t.reverse();
            if !t.contains(&z) {
                continue;
            }
            if !spec.loops && t.iter().all(|&x| x == z) {
                continue;
            }
            out.push(vec![(sym, t)]);
        }
    }
    out
}

fn extensions(spec: &EnumSpec, s: &Structure) -> Result<Vec<Structure>> {
    let n = s.n();
    let z = n as ElementId;
    let cands = candidates(spec, z);
    if cands.len() > CANDIDATE_CAP {
        return Err(Error::cap(
            "candidate tuples per extension step",
            CANDIDATE_CAP as u64,
            Some(cands.len() as u64),
        ));
    }
    let mut adj: Vec<u64> = vec![0; n + 1];
    for (x, ys) in s.gaifman_adjacency().into_iter().enumerate() {
        for y in ys {
            adj[x] |= 1 << y;
        }
    }
    let base: Vec<(usize, Vec<ElementId>)> =
        s.tuples().map(|(_, sym, t)| (sym, t.to_vec())).collect();
    let limit = spec.max_degree.unwrap_or(usize::MAX);
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    subsets(&cands, 0, &mut adj, limit, z, &mut chosen, &mut |chosen| {
        let mut tuples = base.clone();
        for &c in chosen {
            tuples.extend(cands[c].iter().cloned());
        }
        out.push(Structure::from_tuples(spec.sig.clone(), n + 1, &tuples).unwrap());
    });
    Ok(out)
}

fn subsets(
    cands: &[Vec<(usize, Vec<ElementId>)>],
    i: usize,
    adj: &mut Vec<u64>,
    limit: usize,
    z: ElementId,
    chosen: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[usize]),
) {
    if i == cands.len() {
        if adj[z as usize] != 0 {
            emit(chosen);
        }
        return;
    }
    subsets(cands, i + 1, adj, limit, z, chosen, emit);
    let saved = adj.clone();
    for (_, t) in &cands[i] {
        for &a in t {
            for &b in t {
                if a != b {
                    adj[a as usize] |= 1 << b;
                }
            }
        }
    }
    if adj.iter().all(|m| m.count_ones() as usize <= limit) {
        chosen.push(i);
        subsets(cands, i + 1, adj, limit, z, chosen, emit);
        chosen.pop();
    }
    *adj = saved;
}

fn canonical_dedup(items: Vec<Structure>, exec: Exec) -> Result<Vec<Structure>> {
    let forms = par::try_map(exec, &items, |s| {
        let cs = ColouredStructure::uncoloured(s.clone());
        canonical_form_capped(&cs, s.n()).map(|f| (f.key, f.labelling))
    })?;
    let mut seen: HashSet<CanonicalKey> = HashSet::new();
    let mut out = Vec::new();
    for (s, (key, perm)) in items.iter().zip(forms) {
        if seen.insert(key) {
            out.push(s.permute(&perm));
        }
    }
    Ok(out)
}

fn keep(items: Vec<Structure>, filter: &Filter<'_>, exec: Exec) -> Result<Vec<Structure>> {
    let verdicts = par::try_map(exec, &items, |s| filter(s))?;
    Ok(items
        .into_iter()
        .zip(verdicts)
        .filter(|(_, ok)| *ok)
        .map(|(s, _)| s)
        .collect())
}

/// Filter accepting everything.
pub fn any(_: &Structure) -> Result<bool> {
    Ok(true)
}

/// Filter keeping structures that admit a valid colouring for `p`.
pub fn colourable(p: &Problem) -> impl Fn(&Structure) -> Result<bool> + Sync + '_ {
    move |s| Ok(decide_fpp(s, p)?.is_some())
}

/// Every valid colouring of every shape, up to isomorphism of coloured
/// structures, as canonical representatives.
pub fn valid_coloured(
    shapes: &[Structure],
    p: &Problem,
    limit: usize,
    exec: Exec,
) -> Result<Vec<ColouredStructure>> {
    let per_shape = par::try_map(
        exec,
        shapes,
        |s| -> Result<Vec<(CanonicalKey, ColouredStructure)>> {
            let mut local: Vec<(CanonicalKey, ColouredStructure)> = Vec::new();
            let mut seen = HashSet::new();
            for cs in all_valid_colourings(s, p, limit)? {
                let f = canonical_form_capped(&cs, cs.n())?;
                if seen.insert(f.key.clone()) {
                    local.push((f.key, cs.permute(&f.labelling)));
                }
            }
            Ok(local)
        },
    )?;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (key, cs) in per_shape.into_iter().flatten() {
        if seen.insert(key) {
            out.push(cs);
        }
        if out.len() > limit {
            return Err(Error::cap("coloured structures", limit as u64, None));
        }
    }
    Ok(out)
}

/// Canonical key of an uncoloured structure.
pub fn shape_key(s: &Structure) -> Result<CanonicalKey> {
    canonical_key(&ColouredStructure::uncoloured(s.clone()))
}
