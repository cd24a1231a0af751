//! Cartesian products and truncated products of coloured structures.
//!
//! An element of the `p`-th truncated product is a length-`p` coordinate
//! list with exactly one star; all other coordinates are elements of the
//! factor sharing one vertex colour. Elements are numbered by star index,
//! then colour, then the remaining coordinates in mixed radix over the
//! colour class.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::hom::Hom;
use crate::par::{self, Exec};
use crate::relstruct::{Colour, ColouredStructure, ElementId, Structure};

/// Default bound on the number of product elements.
pub const ELEMENT_CAP: u64 = 200_000;

/// Default bound on the number of product tuples.
pub const TUPLE_CAP: u64 = 5_000_000;

#[derive(Clone, Copy, Debug)]
pub struct ProductCaps {
    pub elements: u64,
    pub tuples: u64,
}

impl Default for ProductCaps {
    fn default() -> Self {
        ProductCaps {
            elements: ELEMENT_CAP,
            tuples: TUPLE_CAP,
        }
    }
}

/// Classical product: `R((a1,b1)..(ar,br))` iff `R(a)` in A and `R(b)` in B.
/// Element `(a, b)` has id `a * |B| + b`.
pub fn product(a: &Structure, b: &Structure) -> Result<Structure> {
    if a.signature() != b.signature() {
        return Err(Error::SignatureMismatch(
            "product of different signatures".into(),
        ));
    }
    let nb = b.n() as u32;
    let mut builder = Structure::builder(a.signature_arc().clone(), a.n() * b.n());
    let mut buf = Vec::new();
    for sym in 0..a.signature().len() {
        for ta in a.relation(sym).iter() {
            for tb in b.relation(sym).iter() {
                buf.clear();
                buf.extend(ta.iter().zip(tb).map(|(&x, &y)| x * nb + y));
                builder.add(sym, &buf)?;
            }
        }
    }
    let mut names = Vec::with_capacity(a.n() * b.n());
    for x in 0..a.n() as ElementId {
        for y in 0..nb {
            names.push(format!("({},{})", a.name(x), b.name(y)));
        }
    }
    Ok(builder.names(names).build())
}

/// A truncated product together with its coordinate bookkeeping.
#[derive(Clone, Debug)]
pub struct TruncatedProduct {
    pub structure: ColouredStructure,
    p: usize,
    // members of each vertex colour class of the factor
    classes: Vec<Vec<ElementId>>,
    class_pos: Vec<usize>,
    factor_vcol: Vec<Colour>,
    // base[i][v]: first id with star at i and colour v
    base: Vec<Vec<usize>>,
}

impl TruncatedProduct {
    pub fn p(&self) -> usize {
        self.p
    }

    fn block(&self, v: usize) -> usize {
        self.classes[v].len().pow(self.p as u32 - 1)
    }

    fn factor_colour(&self, x: ElementId) -> Option<usize> {
        self.factor_vcol.get(x as usize).map(|&c| c as usize)
    }

    /// Id of the element with star at `star` and the other coordinates
    /// `coords` (length `p - 1`, in order), if it exists.
    pub fn element(&self, star: usize, coords: &[ElementId]) -> Option<ElementId> {
        if star >= self.p || coords.len() + 1 != self.p {
            return None;
        }
        let v = self.factor_colour(*coords.first()?)?;
        let k = self.classes[v].len();
        let mut idx = 0usize;
        for &c in coords {
            if self.factor_colour(c)? != v {
                return None;
            }
            idx = idx * k + self.class_pos[c as usize];
        }
        Some((self.base[star][v] + idx) as ElementId)
    }

    /// Star index, colour and the non-star coordinates of an element.
    pub fn decode(&self, id: ElementId) -> (usize, Colour, Vec<ElementId>) {
        let id = id as usize;
        let mut star = 0;
        while star + 1 < self.p && self.base[star + 1][0] <= id {
            star += 1;
        }
        let v = (0..self.classes.len())
            .find(|&v| id < self.base[star][v] + self.block(v))
            .expect("id inside its star block");
        let k = self.classes[v].len();
        let mut rem = id - self.base[star][v];
        let mut coords = vec![0; self.p - 1];
        for slot in coords.iter_mut().rev() {
            *slot = self.classes[v][rem % k];
            rem /= k;
        }
        (star, v as Colour, coords)
    }

    /// Full coordinate list with `None` at the star.
    pub fn coordinates(&self, id: ElementId) -> Vec<Option<ElementId>> {
        let (star, _, coords) = self.decode(id);
        let mut out: Vec<Option<ElementId>> = coords.into_iter().map(Some).collect();
        out.insert(star, None);
        out
    }

    pub fn star_index(&self, id: ElementId) -> usize {
        self.decode(id).0
    }
}

/// Predicted element count `sum_i sum_v |class_v|^(p-1)`.
pub fn truncated_size(cs: &ColouredStructure, p: usize) -> u128 {
    let mut counts = vec![0u128; cs.palettes().vertex.len()];
    for &c in cs.vcol() {
        counts[c as usize] += 1;
    }
    p as u128 * counts.iter().map(|&k| k.pow(p as u32 - 1)).sum::<u128>()
}

pub fn truncated_product(cs: &ColouredStructure, p: usize) -> Result<TruncatedProduct> {
    truncated_product_with(cs, p, ProductCaps::default(), Exec::default())
}

pub fn truncated_product_with(
    cs: &ColouredStructure,
    p: usize,
    caps: ProductCaps,
    exec: Exec,
) -> Result<TruncatedProduct> {
    if p < 2 {
        return Err(Error::Param(format!(
            "truncated product needs p >= 2, got {p}"
        )));
    }
    let size = truncated_size(cs, p);
    if size > caps.elements as u128 {
        return Err(Error::cap(
            format!("truncated product ↑{p} elements"),
            caps.elements,
            Some(size.min(u64::MAX as u128) as u64),
        ));
    }
    let nv = cs.palettes().vertex.len();
    let mut classes = vec![Vec::new(); nv];
    let mut class_pos = vec![0; cs.n()];
    for x in 0..cs.n() {
        let v = cs.vcol()[x] as usize;
        class_pos[x] = classes[v].len();
        classes[v].push(x as ElementId);
    }
    let mut base = vec![vec![0usize; nv]; p];
    let mut acc = 0usize;
    for row in base.iter_mut() {
        for (v, slot) in row.iter_mut().enumerate() {
            *slot = acc;
            acc += classes[v].len().pow(p as u32 - 1);
        }
    }
    let mut tp = TruncatedProduct {
        structure: ColouredStructure::uncoloured(Structure::empty(
            cs.base().signature_arc().clone(),
            0,
        )),
        p,
        classes,
        class_pos,
        factor_vcol: cs.vcol().to_vec(),
        base,
    };
    let n = acc;
    let s = cs.base();
    let sig = s.signature_arc().clone();

    let forecast = tuple_forecast(cs, &tp);
    if forecast > caps.tuples as u128 {
        return Err(Error::cap(
            format!("truncated product ↑{p} tuples"),
            caps.tuples,
            Some(forecast.min(u64::MAX as u128) as u64),
        ));
    }

    // one job per (symbol, star assignment)
    let mut jobs = Vec::new();
    for sym in 0..sig.len() {
        let r = sig.arity(sym);
        let total = p.pow(r as u32);
        for code in 0..total {
            jobs.push((sym, code));
        }
    }
    let groups = tuple_groups(cs);
    let chunks: Vec<Vec<(usize, Vec<ElementId>, Colour)>> =
        par::map(exec, &jobs, |&(sym, code)| {
            stars_tuples(cs, &tp, &groups[sym], sym, code)
        });

    let mut b = Structure::builder(sig.clone(), n);
    let mut coloured: Vec<(usize, Vec<ElementId>, Colour)> = Vec::new();
    for chunk in chunks {
        for (sym, t, e) in chunk {
            b.add(sym, &t)?;
            coloured.push((sym, t, e));
        }
    }
    let mut names = Vec::with_capacity(n);
    let mut vcol = Vec::with_capacity(n);
    for id in 0..n as ElementId {
        let (_, v, _) = tp.decode(id);
        vcol.push(v);
        let parts: Vec<String> = tp
            .coordinates(id)
            .iter()
            .map(|c| match c {
                Some(x) => s.name(*x).into_owned(),
                None => "*".to_string(),
            })
            .collect();
        names.push(format!("({})", parts.join(",")));
    }
    let st = b.names(names).build();
    let mut ecol = vec![0; st.tuple_count()];
    for (sym, t, e) in coloured {
        ecol[st.find_tuple(sym, &t).unwrap()] = e;
    }
    tp.structure = ColouredStructure::new(st, vcol, ecol, cs.palettes().clone())?;
    Ok(tp)
}

type Groups = BTreeMap<(Colour, Vec<Colour>), Vec<Vec<ElementId>>>;

/// Tuples of each symbol grouped by (tuple colour, vertex-colour profile).
fn tuple_groups(cs: &ColouredStructure) -> Vec<Groups> {
    let s = cs.base();
    let mut out = vec![Groups::new(); s.signature().len()];
    for (g, sym, t) in s.tuples() {
        let profile: Vec<Colour> = t.iter().map(|&x| cs.vcol()[x as usize]).collect();
        out[sym]
            .entry((cs.ecol()[g], profile))
            .or_default()
            .push(t.to_vec());
    }
    out
}

fn stars_of(code: usize, r: usize, p: usize) -> Vec<usize> {
    let mut c = code;
    let mut stars = vec![0; r];
    for slot in stars.iter_mut().rev() {
        *slot = c % p;
        c /= p;
    }
    stars
}

fn tuple_forecast(cs: &ColouredStructure, tp: &TruncatedProduct) -> u128 {
    let p = tp.p;
    let groups = tuple_groups(cs);
    let mut total = 0u128;
    for (sym, g) in groups.iter().enumerate() {
        let r = cs.signature().arity(sym);
        for code in 0..p.pow(r as u32) {
            let stars = stars_of(code, r, p);
            let constrained = (0..p).filter(|i| !stars.contains(i)).count();
            if constrained == 0 {
                continue;
            }
            for ((_, profile), ts) in g {
                let mut count = (ts.len() as u128).saturating_pow(constrained as u32);
                for (k, &v) in profile.iter().enumerate() {
                    let free = (0..p)
                        .filter(|&i| stars.contains(&i) && i != stars[k])
                        .count();
                    count = count.saturating_mul(
                        (tp.classes[v as usize].len() as u128).saturating_pow(free as u32),
                    );
                }
                total = total.saturating_add(count);
            }
        }
    }
    total
}

/// All product tuples of `sym` whose star positions are given by `code`.
fn stars_tuples(
    cs: &ColouredStructure,
    tp: &TruncatedProduct,
    groups: &Groups,
    sym: usize,
    code: usize,
) -> Vec<(usize, Vec<ElementId>, Colour)> {
    let p = tp.p;
    let r = cs.signature().arity(sym);
    let stars = stars_of(code, r, p);
    let constrained: Vec<usize> = (0..p).filter(|i| !stars.contains(i)).collect();
    let mut out = Vec::new();
    if constrained.is_empty() {
        return out;
    }
    // (position k, coordinate i) pairs left free
    let free: Vec<(usize, usize)> = (0..r)
        .flat_map(|k| {
            let stars = &stars;
            (0..p)
                .filter(move |&i| stars.contains(&i) && i != stars[k])
                .map(move |i| (k, i))
        })
        .collect();
    for ((e, profile), ts) in groups {
        let mut pick = vec![0usize; constrained.len()];
        loop {
            let mut choice = vec![0usize; free.len()];
            loop {
                // coordinates per position
                let mut coords: Vec<Vec<ElementId>> = vec![vec![u32::MAX; p]; r];
                for (j, &i) in constrained.iter().enumerate() {
                    for k in 0..r {
                        coords[k][i] = ts[pick[j]][k];
                    }
                }
                for (f, &(k, i)) in free.iter().enumerate() {
                    coords[k][i] = tp.classes[profile[k] as usize][choice[f]];
                }
                let t: Vec<ElementId> = (0..r)
                    .map(|k| {
                        let others: Vec<ElementId> = (0..p)
                            .filter(|&i| i != stars[k])
                            .map(|i| coords[k][i])
                            .collect();
                        id_of(tp, stars[k], profile[k] as usize, &others)
                    })
                    .collect();
                out.push((sym, t, *e));
                if !advance(&mut choice, |f| {
                    tp.classes[profile[free[f].0] as usize].len()
                }) {
                    break;
                }
            }
            if !advance(&mut pick, |_| ts.len()) {
                break;
            }
        }
    }
    out
}

fn id_of(tp: &TruncatedProduct, star: usize, v: usize, others: &[ElementId]) -> ElementId {
    let k = tp.classes[v].len();
    let idx = others
        .iter()
        .fold(0usize, |acc, &c| acc * k + tp.class_pos[c as usize]);
    (tp.base[star][v] + idx) as ElementId
}

/// Mixed-radix increment; false after the last combination.
fn advance(digits: &mut [usize], radix: impl Fn(usize) -> usize) -> bool {
    for i in (0..digits.len()).rev() {
        digits[i] += 1;
        if digits[i] < radix(i) {
            return true;
        }
        digits[i] = 0;
    }
    false
}

/// Left-to-right fold of truncated products with indices `from..=to`.
pub fn iterated_truncated_product(
    cs: &ColouredStructure,
    from: usize,
    to: usize,
) -> Result<ColouredStructure> {
    iterated_truncated_product_with(cs, from, to, ProductCaps::default(), Exec::default())
}

pub fn iterated_truncated_product_with(
    cs: &ColouredStructure,
    from: usize,
    to: usize,
    caps: ProductCaps,
    exec: Exec,
) -> Result<ColouredStructure> {
    let mut cur = cs.clone();
    for p in from..=to {
        cur = match truncated_product_with(&cur, p, caps, exec) {
            Ok(tp) => tp.structure,
            Err(Error::CapExceeded {
                what,
                cap,
                forecast,
            }) => {
                return Err(Error::CapExceeded {
                    what: format!("{what} (stage {p} of {from}..={to})"),
                    cap,
                    forecast,
                })
            }
            Err(e) => return Err(e),
        };
    }
    Ok(cur)
}

/// The product restricted to elements whose star is not at `i0`, with the
/// map reading coordinate `i0`. Returns (substructure, new -> old ids, map
/// into the factor).
pub fn coordinate_projection(
    tp: &TruncatedProduct,
    i0: usize,
) -> Result<(ColouredStructure, Vec<ElementId>, Hom)> {
    if i0 >= tp.p {
        return Err(Error::Param(format!("coordinate {i0} outside 0..{}", tp.p)));
    }
    let keep: Vec<ElementId> = (0..tp.structure.n() as ElementId)
        .filter(|&w| tp.star_index(w) != i0)
        .collect();
    let (sub, map) = tp.structure.induced(&keep)?;
    let proj = map
        .iter()
        .map(|&w| tp.coordinates(w)[i0].expect("star is elsewhere"))
        .collect();
    Ok((sub, map, proj))
}

/// Assembles partial homomorphisms into a map to the truncated product:
/// `x` in part `i` goes to the element with star at `i` and coordinate `k`
/// equal to `partial[k][x]`. `partial[k]` must be defined (not `u32::MAX`)
/// outside part `k`.
pub fn assemble_partial_homs(
    tp: &TruncatedProduct,
    part_of: &[usize],
    partial: &[Vec<ElementId>],
) -> Result<Hom> {
    if partial.len() != tp.p {
        return Err(Error::Param(format!(
            "expected {} partial maps, got {}",
            tp.p,
            partial.len()
        )));
    }
    part_of
        .iter()
        .enumerate()
        .map(|(x, &i)| {
            let others: Vec<ElementId> = (0..tp.p)
                .filter(|&k| k != i)
                .map(|k| partial[k][x])
                .collect();
            if others.contains(&u32::MAX) {
                return Err(Error::Invalid(format!(
                    "partial map undefined at element {x}"
                )));
            }
            tp.element(i, &others).ok_or_else(|| {
                Error::Invalid(format!("coordinates of element {x} disagree in colour"))
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::check_hom;
    use crate::relstruct::tests::arcs;
    use crate::relstruct::{encode_graph, Palettes};
    use std::sync::Arc;

    #[test]
    fn classical_product() {
        let k2 = encode_graph(2, &[(0, 1)]).unwrap();
        let pr = product(&k2, &k2).unwrap();
        assert_eq!(pr.n(), 4);
        assert_eq!(pr.tuple_count(), 4);
        assert_eq!(pr.component_sets().len(), 2);
        let k3 = encode_graph(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let pr = product(&k3, &k2).unwrap();
        let a = ColouredStructure::uncoloured(pr.clone());
        let first: Vec<u32> = (0..6).map(|i| i / 2).collect();
        let second: Vec<u32> = (0..6).map(|i| i % 2).collect();
        assert!(check_hom(&a, &ColouredStructure::uncoloured(k3), &first));
        assert!(check_hom(&a, &ColouredStructure::uncoloured(k2), &second));
    }

    #[test]
    fn truncated_sizes() {
        let s = ColouredStructure::uncoloured(arcs(3, &[]));
        assert_eq!(truncated_product(&s, 2).unwrap().structure.n(), 6);
        let pal = Arc::new(Palettes::numbered(2, 1));
        let s = ColouredStructure::new(arcs(3, &[]), vec![0, 0, 1], vec![], pal).unwrap();
        let tp = truncated_product(&s, 3).unwrap();
        assert_eq!(tp.structure.n(), 15);
        for w in 0..15 {
            assert_eq!(tp.coordinates(w).iter().filter(|c| c.is_none()).count(), 1);
        }
    }

    #[test]
    fn loop_factor() {
        let pal = Arc::new(Palettes::numbered(1, 2));
        let s = ColouredStructure::new(arcs(1, &[(0, 0)]), vec![0], vec![1], pal).unwrap();
        let tp = truncated_product(&s, 2).unwrap();
        let a = tp.element(0, &[0]).unwrap();
        let b = tp.element(1, &[0]).unwrap();
        assert_eq!(tp.structure.tuple_colour(0, &[a, a]), Some(1));
        assert_eq!(tp.structure.tuple_colour(0, &[a, b]), None);
        assert_eq!(tp.structure.base().tuple_count(), 2);
    }

    #[test]
    fn projection_is_a_hom() {
        let pal = Arc::new(Palettes::numbered(2, 2));
        let base = arcs(3, &[(0, 1), (1, 2), (2, 0)]);
        let s = ColouredStructure::new(base, vec![0, 1, 0], vec![0, 1, 1], pal).unwrap();
        let tp = truncated_product(&s, 3).unwrap();
        for i0 in 0..3 {
            let (sub, _, h) = coordinate_projection(&tp, i0).unwrap();
            assert!(check_hom(&sub, &s, &h));
        }
    }

    #[test]
    fn iterated_fold() {
        let s = ColouredStructure::uncoloured(arcs(2, &[(0, 1)]));
        assert_eq!(iterated_truncated_product(&s, 4, 3).unwrap(), s);
        let once = iterated_truncated_product(&s, 3, 3).unwrap();
        assert_eq!(once, truncated_product(&s, 3).unwrap().structure);
    }

    #[test]
    fn caps_are_enforced() {
        let s = ColouredStructure::uncoloured(arcs(10, &[]));
        let caps = ProductCaps {
            elements: 100,
            tuples: 10,
        };
        match truncated_product_with(&s, 3, caps, Exec::Sequential) {
            Err(Error::CapExceeded { forecast, .. }) => assert_eq!(forecast, Some(300)),
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        let pal = Arc::new(Palettes::numbered(2, 2));
        let base = arcs(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]);
        let s = ColouredStructure::new(base, vec![0, 1, 0, 1], vec![0, 1, 1, 0, 0], pal).unwrap();
        let a = truncated_product_with(&s, 3, ProductCaps::default(), Exec::Sequential).unwrap();
        let b = truncated_product_with(&s, 3, ProductCaps::default(), Exec::Parallel).unwrap();
        assert_eq!(a.structure, b.structure);
    }
}
