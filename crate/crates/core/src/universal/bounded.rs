//! Template for structures of bounded degree.
//!
//! Members are small connected valid structures whose elements carry labels
//! from `1..=X`. The carrier has one element per (member, element) pair; a
//! tuple joins elements of possibly different members when every member
//! involved contains the same labelled tuple with the same colour and the
//! same labelled `m`-balls around each of its entries.

use std::collections::{HashMap, HashSet, VecDeque};

use super::{x_param, BoundedProvenance, Member, Provenance, UniversalTemplate};
use crate::canon::canonical_form_capped;
use crate::enumerate::{colourable, connected_flat, valid_coloured, EnumSpec, Shape};
use crate::error::{Error, Result};
use crate::hom::{check_hom, core_capped, has_proper_retract, Hom};
use crate::par::{self, Exec};
use crate::patterns::{is_valid, params, Problem};
use crate::relstruct::{ColouredStructure, ElementId, Structure};

/// How members are drawn from each isomorphism class.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MemberMode {
    /// Every injective labelling into `1..=X`, up to automorphism.
    #[default]
    Labelled,
    /// One canonical representative per class, labelled `1..=n`.
    Representatives,
}

#[derive(Clone, Copy, Debug)]
pub struct BoundedOptions {
    /// Only members of Gaifman degree at most `b`.
    pub restrict_degree: bool,
    pub mode: MemberMode,
    /// Keep only members that are cores (representatives mode only).
    pub cores_only: bool,
    pub member_cap: u64,
    pub tuple_cap: u64,
    pub exec: Exec,
}

impl Default for BoundedOptions {
    fn default() -> Self {
        BoundedOptions {
            restrict_degree: true,
            mode: MemberMode::Labelled,
            cores_only: false,
            member_cap: 500_000,
            tuple_cap: 5_000_000,
            exec: Exec::default(),
        }
    }
}

pub fn bounded_degree_universal(
    p: &Problem,
    b: usize,
    opts: &BoundedOptions,
) -> Result<UniversalTemplate> {
    if b == 0 {
        return Err(Error::Param("degree bound must be at least 1".into()));
    }
    if opts.cores_only && opts.mode == MemberMode::Labelled {
        return Err(Error::Param(
            "cores-only members need representatives mode".into(),
        ));
    }
    let (m, _) = params(p);
    let x = x_param(b as u64, m as u64) as usize;
    let sig = p.signature().clone();
    let graph = p.undirected && sig.is_binary_single();
    let spec = EnumSpec {
        sig: sig.clone(),
        max_n: x,
        shape: if graph { Shape::Graph } else { Shape::Any },
        max_degree: opts.restrict_degree.then_some(b),
        loops: !graph,
        cap: opts.member_cap as usize,
    };
    let filter = colourable(p);
    let shapes = connected_flat(&spec, &filter, opts.exec)?;
    let mut coloured = valid_coloured(&shapes, p, opts.member_cap as usize, opts.exec)?;
    if opts.cores_only {
        let proper = par::try_map(opts.exec, &coloured, has_proper_retract)?;
        coloured = coloured
            .into_iter()
            .zip(proper)
            .filter(|(_, r)| !r)
            .map(|(c, _)| c)
            .collect();
    }
    let members = match opts.mode {
        MemberMode::Representatives => coloured
            .into_iter()
            .map(|cs| {
                let labels = (1..=cs.n() as u32).collect();
                Member {
                    structure: cs,
                    labels,
                }
            })
            .collect(),
        MemberMode::Labelled => labelled_members(&coloured, x, opts.member_cap)?,
    };
    let (carrier, elements) = assemble(p, &members, m, opts)?;
    Ok(UniversalTemplate {
        carrier,
        provenance: Provenance::BoundedDegree(BoundedProvenance {
            b,
            m,
            x,
            mode: opts.mode,
            restrict_degree: opts.restrict_degree,
            cores_only: opts.cores_only,
            members,
            elements,
        }),
    })
}

fn falling(x: u64, n: u64) -> u64 {
    (0..n).fold(1u64, |acc, i| acc.saturating_mul(x.saturating_sub(i)))
}

fn labelled_members(classes: &[ColouredStructure], x: usize, cap: u64) -> Result<Vec<Member>> {
    let forecast: u64 = classes
        .iter()
        .map(|c| falling(x as u64, c.n() as u64))
        .fold(0, u64::saturating_add);
    let mut out = Vec::new();
    for cs in classes {
        let mut seen = HashSet::new();
        let n = cs.n();
        let mut labels = vec![0u32; n];
        let mut used = vec![false; x + 1];
        injections(n, x, 0, &mut labels, &mut used, &mut |labels| {
            if seen.insert(labelled_key(cs, labels)) {
                out.push(Member {
                    structure: cs.clone(),
                    labels: labels.to_vec(),
                });
            }
            out.len() as u64 <= cap
        });
        if out.len() as u64 > cap {
            return Err(Error::cap("labelled members", cap, Some(forecast)));
        }
    }
    Ok(out)
}

fn injections(
    n: usize,
    x: usize,
    i: usize,
    labels: &mut [u32],
    used: &mut [bool],
    emit: &mut dyn FnMut(&[u32]) -> bool,
) -> bool {
    if i == n {
        return emit(labels);
    }
    for l in 1..=x {
        if !used[l] {
            used[l] = true;
            labels[i] = l as u32;
            let go_on = injections(n, x, i + 1, labels, used, emit);
            used[l] = false;
            if !go_on {
                return false;
            }
        }
    }
    true
}

/// Encoding of a coloured structure read through its labels: two labelled
/// structures are identical exactly when their keys agree.
pub fn labelled_key(cs: &ColouredStructure, labels: &[u32]) -> Vec<u32> {
    let mut key = vec![cs.n() as u32];
    let mut verts: Vec<(u32, u32)> = (0..cs.n())
        .map(|x| (labels[x], cs.vcol()[x] as u32))
        .collect();
    verts.sort_unstable();
    for (l, c) in verts {
        key.push(l);
        key.push(c);
    }
    let s = cs.base();
    for sym in 0..s.signature().len() {
        let mut rows: Vec<Vec<u32>> = s
            .relation(sym)
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let mut row: Vec<u32> = t.iter().map(|&y| labels[y as usize]).collect();
                row.push(cs.ecol()[s.global_id(sym, i)] as u32);
                row
            })
            .collect();
        rows.sort_unstable();
        key.push(rows.len() as u32);
        key.extend(rows.into_iter().flatten());
    }
    key
}

/// Elements within Gaifman distance `r` of `src`, sorted.
fn ball_set(adj: &[Vec<ElementId>], src: ElementId, r: usize) -> Vec<ElementId> {
    let mut dist: HashMap<ElementId, usize> = HashMap::new();
    dist.insert(src, 0);
    let mut queue = VecDeque::from([src]);
    while let Some(x) = queue.pop_front() {
        let d = dist[&x];
        if d == r {
            continue;
        }
        for &y in &adj[x as usize] {
            if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(y) {
                e.insert(d + 1);
                queue.push_back(y);
            }
        }
    }
    let mut out: Vec<ElementId> = dist.into_keys().collect();
    out.sort_unstable();
    out
}

/// Labelled key of the radius-`r` ball around `v` inside a labelled structure.
fn ball_key(
    cs: &ColouredStructure,
    labels: &[u32],
    adj: &[Vec<ElementId>],
    v: ElementId,
    r: usize,
) -> Vec<u32> {
    let set = ball_set(adj, v, r);
    let (sub, map) = cs.induced(&set).expect("ball elements are in range");
    let sub_labels: Vec<u32> = map.iter().map(|&y| labels[y as usize]).collect();
    labelled_key(&sub, &sub_labels)
}

fn offsets(members: &[Member]) -> Vec<u32> {
    let mut off = Vec::with_capacity(members.len() + 1);
    let mut acc = 0u32;
    for mem in members {
        off.push(acc);
        acc += mem.structure.n() as u32;
    }
    off.push(acc);
    off
}

fn assemble(
    p: &Problem,
    members: &[Member],
    m: usize,
    opts: &BoundedOptions,
) -> Result<(ColouredStructure, Vec<(usize, ElementId)>)> {
    let sig = p.signature().clone();
    let off = offsets(members);
    let n = *off.last().unwrap() as usize;

    let raw: Vec<Vec<Vec<u32>>> = par::map(opts.exec, members, |mem| {
        let adj = mem.structure.base().gaifman_adjacency();
        (0..mem.structure.n() as ElementId)
            .map(|v| ball_key(&mem.structure, &mem.labels, &adj, v, m))
            .collect()
    });
    let mut intern: HashMap<Vec<u32>, u32> = HashMap::new();
    let ball_ids: Vec<Vec<u32>> = raw
        .into_iter()
        .map(|keys| {
            keys.into_iter()
                .map(|k| {
                    let next = intern.len() as u32;
                    *intern.entry(k).or_insert(next)
                })
                .collect()
        })
        .collect();

    // groups of (member, tuple) sharing symbol, labels, colour and balls
    let mut group_of: HashMap<Vec<u32>, usize> = HashMap::new();
    type Group = (usize, u16, Vec<(usize, Vec<ElementId>)>);
    let mut groups: Vec<Group> = Vec::new();
    for (i, mem) in members.iter().enumerate() {
        let s = mem.structure.base();
        for (g, sym, t) in s.tuples() {
            let c = mem.structure.ecol()[g];
            let mut key = vec![sym as u32];
            key.extend(t.iter().map(|&y| mem.labels[y as usize]));
            key.push(c as u32);
            key.extend(t.iter().map(|&y| ball_ids[i][y as usize]));
            let next = groups.len();
            let gi = *group_of.entry(key).or_insert(next);
            if gi == next {
                groups.push((sym, c, Vec::new()));
            }
            groups[gi].2.push((i, t.to_vec()));
        }
    }
    let forecast: u64 = groups
        .iter()
        .map(|(sym, _, l)| (l.len() as u64).saturating_pow(sig.arity(*sym) as u32))
        .fold(0, u64::saturating_add);
    if forecast > opts.tuple_cap {
        return Err(Error::cap(
            "universal template tuples",
            opts.tuple_cap,
            Some(forecast),
        ));
    }

    let mut builder = Structure::builder(sig.clone(), n);
    let mut coloured_tuples: Vec<(usize, Vec<ElementId>, u16)> =
        Vec::with_capacity(forecast as usize);
    for (sym, c, list) in &groups {
        let r = sig.arity(*sym);
        let mut pick = vec![0usize; r];
        'odometer: loop {
            let t: Vec<ElementId> = (0..r)
                .map(|k| {
                    let (i, ref tt) = list[pick[k]];
                    off[i] + tt[k]
                })
                .collect();
            builder.add(*sym, &t)?;
            coloured_tuples.push((*sym, t, *c));
            for k in (0..r).rev() {
                pick[k] += 1;
                if pick[k] < list.len() {
                    continue 'odometer;
                }
                pick[k] = 0;
            }
            break;
        }
    }
    let mut names = Vec::with_capacity(n);
    let mut elements = Vec::with_capacity(n);
    let mut vcol = Vec::with_capacity(n);
    for (i, mem) in members.iter().enumerate() {
        for v in 0..mem.structure.n() {
            names.push(format!("{}@S{}", mem.labels[v], i));
            elements.push((i, v as ElementId));
            vcol.push(mem.structure.vcol()[v]);
        }
    }
    let s = builder.names(names).build();
    let mut ecol = vec![0; s.tuple_count()];
    for (sym, t, c) in coloured_tuples {
        ecol[s.find_tuple(sym, &t).expect("tuple was added")] = c;
    }
    let carrier = ColouredStructure::new(s, vcol, ecol, p.palettes().clone())?;
    Ok((carrier, elements))
}

/// Homomorphism from a validly coloured bounded-degree structure into the
/// template. Components with at most `X` elements map onto a member equal
/// to the whole component; larger ones are labelled greedily so that every
/// radius-`(m+1)` ball is injectively labelled, and each element maps to its
/// own ball. Fails when `X` labels do not suffice for that labelling.
pub fn embed_into_universal(
    g: &Structure,
    colouring: &ColouredStructure,
    t: &UniversalTemplate,
    b: usize,
    m: usize,
) -> Result<Hom> {
    let prov = t
        .bounded()
        .ok_or_else(|| Error::Param("embedding needs a bounded-degree template".into()))?;
    if prov.b != b || prov.m != m {
        return Err(Error::Param(format!(
            "template was built for b={}, m={}",
            prov.b, prov.m
        )));
    }
    if colouring.base() != g {
        return Err(Error::Invalid(
            "colouring is not a colouring of the input".into(),
        ));
    }
    if prov.restrict_degree && g.max_gaifman_degree() > b {
        return Err(Error::Param(format!(
            "input degree {} exceeds {b}",
            g.max_gaifman_degree()
        )));
    }
    if **colouring.palettes() != **t.carrier.palettes() {
        return Err(Error::PaletteMismatch(
            "colouring palettes differ from the template's".into(),
        ));
    }
    let index: HashMap<Vec<u32>, usize> = prov
        .members
        .iter()
        .enumerate()
        .map(|(i, mem)| (labelled_key(&mem.structure, &mem.labels), i))
        .collect();
    let off = offsets(&prov.members);
    let lookup = |key: &Vec<u32>| -> Result<usize> {
        index.get(key).copied().ok_or_else(|| {
            Error::Invalid("no template member matches; is the colouring valid?".into())
        })
    };
    let adj = g.gaifman_adjacency();
    let mut a: Hom = vec![0; g.n()];
    for comp in g.component_sets() {
        let (sub, map) = colouring.induced(&comp)?;
        if comp.len() <= prov.x {
            match prov.mode {
                MemberMode::Labelled => {
                    let labels: Vec<u32> = (1..=sub.n() as u32).collect();
                    let i = lookup(&labelled_key(&sub, &labels))?;
                    for (k, &x) in map.iter().enumerate() {
                        let v = prov.members[i].element_with_label(labels[k]).unwrap();
                        a[x as usize] = off[i] + v;
                    }
                }
                MemberMode::Representatives => {
                    let (target, retraction) = if prov.cores_only {
                        let c = core_capped(&sub, sub.n())?;
                        (c.core, c.retraction)
                    } else {
                        (sub.clone(), (0..sub.n() as u32).collect())
                    };
                    let f = canonical_form_capped(&target, target.n())?;
                    let rep = target.permute(&f.labelling);
                    let labels: Vec<u32> = (1..=rep.n() as u32).collect();
                    let i = lookup(&labelled_key(&rep, &labels))?;
                    for (k, &x) in map.iter().enumerate() {
                        a[x as usize] = off[i] + f.labelling[retraction[k] as usize];
                    }
                }
            }
            continue;
        }
        if prov.mode == MemberMode::Representatives {
            return Err(Error::Invalid(format!(
                "component with {} elements exceeds X = {}; representatives mode only covers whole components",
                comp.len(),
                prov.x
            )));
        }
        let chi = greedy_labels(&adj, &comp, 2 * m + 2, prov.x)?;
        for &x in &comp {
            let set = ball_set(&adj, x, m + 1);
            let (ball, bmap) = colouring.induced(&set)?;
            let labels: Vec<u32> = bmap.iter().map(|&y| chi[&y]).collect();
            let i = lookup(&labelled_key(&ball, &labels))?;
            let v = prov.members[i].element_with_label(chi[&x]).unwrap();
            a[x as usize] = off[i] + v;
        }
    }
    if !check_hom(colouring, &t.carrier, &a) {
        return Err(Error::Invalid(
            "constructed map is not a homomorphism into the template".into(),
        ));
    }
    Ok(a)
}

/// Labels in `1..=x`, distinct on elements at distance at most `d`,
/// assigned in breadth-first order.
fn greedy_labels(
    adj: &[Vec<ElementId>],
    comp: &[ElementId],
    d: usize,
    x: usize,
) -> Result<HashMap<ElementId, u32>> {
    let mut order = Vec::with_capacity(comp.len());
    let mut seen: HashSet<ElementId> = HashSet::from([comp[0]]);
    let mut queue = VecDeque::from([comp[0]]);
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &y in &adj[v as usize] {
            if seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    let mut chi: HashMap<ElementId, u32> = HashMap::new();
    for v in order {
        let near: HashSet<u32> = ball_set(adj, v, d)
            .iter()
            .filter_map(|y| chi.get(y).copied())
            .collect();
        let Some(l) = (1..=x as u32).find(|l| !near.contains(l)) else {
            return Err(Error::Invalid(format!(
                "{x} labels do not suffice to separate elements at distance {d}"
            )));
        };
        chi.insert(v, l);
    }
    Ok(chi)
}

/// The `m`-ball around a carrier element and the map sending each ball
/// element to the element with the same label in the root's member.
#[derive(Clone, Debug)]
pub struct BallMap {
    pub ball: ColouredStructure,
    /// Ball element `i` is carrier element `elements[i]`.
    pub elements: Vec<ElementId>,
    pub member: usize,
    /// `None` when some label of the ball is missing from the member.
    pub h: Option<Hom>,
}

pub fn ball(t: &UniversalTemplate, u: ElementId, m: usize) -> Result<BallMap> {
    let adj = t.carrier.base().gaifman_adjacency();
    ball_with(t, &adj, u, m)
}

fn ball_with(
    t: &UniversalTemplate,
    adj: &[Vec<ElementId>],
    u: ElementId,
    m: usize,
) -> Result<BallMap> {
    let prov = t
        .bounded()
        .ok_or_else(|| Error::Param("balls need a bounded-degree template".into()))?;
    if u as usize >= t.carrier.n() {
        return Err(Error::UnknownElement(u));
    }
    let set = ball_set(adj, u, m);
    let (sub, map) = t.carrier.induced(&set)?;
    let (member, _) = prov.elements[u as usize];
    let target = &prov.members[member];
    let h: Option<Hom> = map
        .iter()
        .map(|&w| {
            let (i, v) = prov.elements[w as usize];
            target.element_with_label(prov.members[i].labels[v as usize])
        })
        .collect();
    Ok(BallMap {
        ball: sub,
        elements: map,
        member,
        h,
    })
}

/// True when the ball's map is defined and colour-preserving.
pub fn check_ball(t: &UniversalTemplate, bm: &BallMap) -> bool {
    let Some(prov) = t.bounded() else {
        return false;
    };
    match &bm.h {
        Some(h) => check_hom(&bm.ball, &prov.members[bm.member].structure, h),
        None => false,
    }
}

/// Carrier elements whose `m`-ball fails [`check_ball`].
pub fn failing_balls(t: &UniversalTemplate, m: usize, exec: Exec) -> Result<Vec<ElementId>> {
    let adj = t.carrier.base().gaifman_adjacency();
    let ids: Vec<ElementId> = (0..t.carrier.n() as ElementId).collect();
    let ok = par::try_map(exec, &ids, |&u| {
        ball_with(t, &adj, u, m).map(|bm| check_ball(t, &bm))
    })?;
    Ok(ids
        .into_iter()
        .zip(ok)
        .filter(|(_, ok)| !ok)
        .map(|(u, _)| u)
        .collect())
}

/// Validity of every member, as a sanity check of the enumeration.
pub fn members_valid(t: &UniversalTemplate, p: &Problem) -> Result<bool> {
    let Some(prov) = t.bounded() else {
        return Ok(false);
    };
    for mem in &prov.members {
        if !is_valid(&mem.structure, p)? {
            return Ok(false);
        }
    }
    Ok(true)
}
