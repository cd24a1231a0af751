//! Canonical forms of small coloured structures.
//!
//! Colour refinement produces an ordered partition of the elements; ties are
//! broken by individualizing one element at a time, and the leaf with the
//! lexicographically smallest encoding wins. Automorphisms discovered while
//! searching prune sibling branches in the same orbit.

use crate::error::{Error, Result};
use crate::relstruct::{ColouredStructure, ElementId};

/// Default bound on the number of elements that may be canonicalized.
pub const DEFAULT_CAP: usize = 10;

/// An isomorphism-invariant encoding of a coloured structure.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey(Vec<u32>);

impl CanonicalKey {
    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }
}

#[derive(Clone, Debug)]
pub struct CanonicalForm {
    pub key: CanonicalKey,
    /// `labelling[x]` is the canonical position of element `x`.
    pub labelling: Vec<ElementId>,
}

pub fn canonical_form(cs: &ColouredStructure) -> Result<CanonicalForm> {
    canonical_form_capped(cs, DEFAULT_CAP)
}

pub fn canonical_key(cs: &ColouredStructure) -> Result<CanonicalKey> {
    canonical_form(cs).map(|f| f.key)
}

pub fn canonical_form_capped(cs: &ColouredStructure, cap: usize) -> Result<CanonicalForm> {
    let n = cs.n();
    if n > cap {
        return Err(Error::cap(
            "canonical form (raise the cap for larger structures)",
            cap as u64,
            Some(n as u64),
        ));
    }
    let mut search = Search::new(cs);
    let init = search.refine(search.initial());
    search.descend(init, &mut Vec::new());
    let (key, perm) = search.best.expect("search visits at least one leaf");
    Ok(CanonicalForm {
        key: CanonicalKey(key),
        labelling: perm,
    })
}

/// Isomorphism test through canonical keys. Structures with different
/// palettes are never isomorphic.
pub fn is_isomorphic(a: &ColouredStructure, b: &ColouredStructure) -> Result<bool> {
    if a.palettes() != b.palettes() || a.signature() != b.signature() || a.n() != b.n() {
        return Ok(false);
    }
    if a.base().tuple_count() != b.base().tuple_count() {
        return Ok(false);
    }
    let cap = a.n().max(DEFAULT_CAP);
    Ok(canonical_form_capped(a, cap)?.key == canonical_form_capped(b, cap)?.key)
}

/// Relabels `cs` into its canonical representative.
pub fn canonical_representative(cs: &ColouredStructure) -> Result<ColouredStructure> {
    let f = canonical_form_capped(cs, cs.n().max(DEFAULT_CAP))?;
    Ok(cs.permute(&f.labelling))
}

struct Search<'a> {
    cs: &'a ColouredStructure,
    n: usize,
    best: Option<(Vec<u32>, Vec<ElementId>)>,
    first_perm: Option<(Vec<u32>, Vec<ElementId>)>,
    automorphisms: Vec<Vec<ElementId>>,
}

impl<'a> Search<'a> {
    fn new(cs: &'a ColouredStructure) -> Self {
        Search {
            cs,
            n: cs.n(),
            best: None,
            first_perm: None,
            automorphisms: Vec::new(),
        }
    }

    fn initial(&self) -> Vec<u32> {
        self.cs.vcol().iter().map(|&c| c as u32).collect()
    }

    /// Iterated colour refinement; cell ids are ranks of sorted signatures,
    /// so the result does not depend on element names.
    fn refine(&self, mut colour: Vec<u32>) -> Vec<u32> {
        let s = self.cs.base();
        colour = rank(&colour.iter().map(|&c| vec![c]).collect::<Vec<_>>());
        let mut cells = count_distinct(&colour);
        loop {
            let mut sigs: Vec<Vec<u32>> = colour.iter().map(|&c| vec![c]).collect();
            let mut entries: Vec<Vec<Vec<u32>>> = vec![Vec::new(); self.n];
            for (g, sym, t) in s.tuples() {
                let ec = self.cs.ecol()[g] as u32;
                for (pos, &x) in t.iter().enumerate() {
                    let mut e = Vec::with_capacity(t.len() + 3);
                    e.push(sym as u32);
                    e.push(ec);
                    e.push(pos as u32);
                    e.extend(
                        t.iter()
                            .map(|&y| if y == x { u32::MAX } else { colour[y as usize] }),
                    );
                    entries[x as usize].push(e);
                }
            }
            for (x, mut es) in entries.into_iter().enumerate() {
                es.sort_unstable();
                for e in es {
                    sigs[x].push(e.len() as u32);
                    sigs[x].extend(e);
                }
            }
            let next = rank(&sigs);
            let c = count_distinct(&next);
            colour = next;
            if c == cells {
                return colour;
            }
            cells = c;
        }
    }

    fn leaf_key(&self, perm: &[ElementId]) -> Vec<u32> {
        let s = self.cs.base();
        let mut key = Vec::with_capacity(1 + self.n + s.tuple_count() * 4);
        key.push(self.n as u32);
        let mut vc = vec![0u32; self.n];
        for x in 0..self.n {
            vc[perm[x] as usize] = self.cs.vcol()[x] as u32;
        }
        key.extend(vc);
        for sym in 0..s.signature().len() {
            let r = s.relation(sym);
            let mut rows: Vec<Vec<u32>> = r
                .iter()
                .enumerate()
                .map(|(i, t)| {
                    let mut row: Vec<u32> = t.iter().map(|&x| perm[x as usize]).collect();
                    row.push(self.cs.ecol()[s.global_id(sym, i)] as u32);
                    row
                })
                .collect();
            rows.sort_unstable();
            key.push(rows.len() as u32);
            for row in rows {
                key.extend(row);
            }
        }
        key
    }

    fn descend(&mut self, colour: Vec<u32>, prefix: &mut Vec<ElementId>) {
        let target = target_cell(&colour);
        let Some(cell_colour) = target else {
            let perm = colour.clone();
            let key = self.leaf_key(&perm);
            for (k, p) in [&self.first_perm, &self.best].into_iter().flatten() {
                if *k == key {
                    // p^-1 after perm maps x to the element occupying the same slot
                    let mut inv = vec![0; self.n];
                    for (x, &v) in p.iter().enumerate() {
                        inv[v as usize] = x as ElementId;
                    }
                    let auto: Vec<ElementId> = perm.iter().map(|&v| inv[v as usize]).collect();
                    if auto.iter().enumerate().any(|(x, &y)| x as u32 != y) {
                        self.automorphisms.push(auto);
                    }
                    break;
                }
            }
            if self.first_perm.is_none() {
                self.first_perm = Some((key.clone(), perm.clone()));
            }
            if self.best.as_ref().is_none_or(|(b, _)| key < *b) {
                self.best = Some((key, perm));
            }
            return;
        };
        let members: Vec<ElementId> = (0..self.n as ElementId)
            .filter(|&x| colour[x as usize] == cell_colour)
            .collect();
        let mut explored: Vec<ElementId> = Vec::new();
        for &v in &members {
            if !explored.is_empty() && self.in_explored_orbit(v, &explored, prefix) {
                continue;
            }
            explored.push(v);
            let mut c = colour.clone();
            // split v off in front of its cell mates
            for x in c.iter_mut() {
                *x *= 2;
                if *x == cell_colour * 2 {
                    *x += 1;
                }
            }
            c[v as usize] = cell_colour * 2;
            let refined = self.refine(c);
            prefix.push(v);
            self.descend(refined, prefix);
            prefix.pop();
        }
    }

    fn in_explored_orbit(
        &self,
        v: ElementId,
        explored: &[ElementId],
        prefix: &[ElementId],
    ) -> bool {
        let gens: Vec<&Vec<ElementId>> = self
            .automorphisms
            .iter()
            .filter(|g| prefix.iter().all(|&p| g[p as usize] == p))
            .collect();
        if gens.is_empty() {
            return false;
        }
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        for g in gens {
            for x in 0..self.n {
                let a = find(&mut parent, x);
                let b = find(&mut parent, g[x] as usize);
                if a != b {
                    parent[a] = b;
                }
            }
        }
        let rv = find(&mut parent, v as usize);
        explored
            .iter()
            .any(|&e| find(&mut parent, e as usize) == rv)
    }
}

fn rank(sigs: &[Vec<u32>]) -> Vec<u32> {
    let mut sorted: Vec<&Vec<u32>> = sigs.iter().collect();
    sorted.sort_unstable();
    sorted.dedup();
    sigs.iter()
        .map(|s| sorted.binary_search(&s).unwrap() as u32)
        .collect()
}

fn count_distinct(c: &[u32]) -> usize {
    let mut v = c.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

/// First non-singleton cell (smallest colour), if any.
fn target_cell(colour: &[u32]) -> Option<u32> {
    let mut counts = vec![0u32; colour.len()];
    for &c in colour {
        counts[c as usize] += 1;
    }
    counts.iter().position(|&k| k > 1).map(|c| c as u32)
}
