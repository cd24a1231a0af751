//! JSON file formats.
//!
//! Every writer emits canonical JSON (sorted keys, sorted tuples, two-space
//! indentation), so saving a loaded canonical file reproduces it byte for
//! byte. Readers report schema problems with a JSON path.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::hom::Hom;
use crate::patterns::{builtin, Problem, BUILTINS};
use crate::relstruct::{Colour, ColouredStructure, ElementId, Palettes, Signature, Structure};
use crate::treedepth::RootedForest;
use crate::universal::{
    BoundedProvenance, LowTdProvenance, Member, MemberMode, Provenance, Report, UniversalTemplate,
};

pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text)
        .map_err(|e| Error::schema(format!("{}", path.display()), e.to_string()))
}

pub fn write_json(path: &Path, v: &Value) -> Result<()> {
    std::fs::write(path, to_text(v))?;
    Ok(())
}

// ---------------------------------------------------------------- helpers

fn obj<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::schema(path, "expected an object"))
}

fn arr<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::schema(path, "expected an array"))
}

fn string<'a>(v: &'a Value, path: &str) -> Result<&'a str> {
    v.as_str()
        .ok_or_else(|| Error::schema(path, "expected a string"))
}

fn uint(v: &Value, path: &str) -> Result<u64> {
    v.as_u64()
        .ok_or_else(|| Error::schema(path, "expected a non-negative integer"))
}

fn field<'a>(m: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    m.get(key)
        .ok_or_else(|| Error::schema(path, format!("missing field `{key}`")))
}

fn strings(v: &Value, path: &str) -> Result<Vec<String>> {
    arr(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| string(x, &format!("{path}[{i}]")).map(str::to_string))
        .collect()
}

fn names_of(s: &Structure) -> Vec<String> {
    (0..s.n() as ElementId)
        .map(|x| s.name(x).into_owned())
        .collect()
}

// ------------------------------------------------------------- structures

pub fn signature_to_json(sig: &Signature) -> Value {
    let m: BTreeMap<&str, usize> = sig
        .symbols()
        .iter()
        .map(|s| (s.name.as_str(), s.arity))
        .collect();
    json!(m)
}

/// Symbols in name order.
pub fn signature_from_json(v: &Value, path: &str) -> Result<Arc<Signature>> {
    let m = obj(v, path)?;
    let mut syms = Vec::new();
    for (name, a) in m {
        let arity = uint(a, &format!("{path}.{name}"))? as usize;
        syms.push((name.clone(), arity));
    }
    syms.sort();
    Ok(Arc::new(
        Signature::new(syms).map_err(|e| Error::schema(path, e.to_string()))?,
    ))
}

/// Structure JSON; colour fields are written for palettes with more than
/// one colour.
pub fn coloured_to_json(cs: &ColouredStructure, meta: Option<Value>) -> Value {
    let s = cs.base();
    let sig = s.signature();
    let names = names_of(s);
    let mut out = Map::new();
    out.insert("signature".into(), signature_to_json(sig));
    out.insert("elements".into(), json!(names));
    let mut rels = Map::new();
    for sym in 0..sig.len() {
        let mut rows: Vec<Vec<&str>> = s
            .relation(sym)
            .iter()
            .map(|t| t.iter().map(|&x| names[x as usize].as_str()).collect())
            .collect();
        rows.sort();
        rels.insert(sig.name(sym).to_string(), json!(rows));
    }
    out.insert("relations".into(), Value::Object(rels));
    let pal = cs.palettes();
    if pal.vertex.len() > 1 {
        let m: BTreeMap<&str, &str> = (0..s.n())
            .map(|x| {
                (
                    names[x].as_str(),
                    pal.vertex[cs.vcol()[x] as usize].as_str(),
                )
            })
            .collect();
        out.insert("vertex_colours".into(), json!(m));
    }
    if pal.edge.len() > 1 {
        let mut rows: Vec<(String, Vec<&str>, &str)> = s
            .tuples()
            .map(|(g, sym, t)| {
                (
                    sig.name(sym).to_string(),
                    t.iter().map(|&x| names[x as usize].as_str()).collect(),
                    pal.edge[cs.ecol()[g] as usize].as_str(),
                )
            })
            .collect();
        rows.sort();
        let v: Vec<Value> = rows
            .into_iter()
            .map(|(rel, tuple, colour)| json!({"rel": rel, "tuple": tuple, "colour": colour}))
            .collect();
        out.insert("tuple_colours".into(), Value::Array(v));
    }
    if let Some(m) = meta {
        out.insert("meta".into(), m);
    }
    Value::Object(out)
}

pub fn structure_to_json(s: &Structure, meta: Option<Value>) -> Value {
    coloured_to_json(&ColouredStructure::uncoloured(s.clone()), meta)
}

pub fn structure_from_json(v: &Value) -> Result<Structure> {
    structure_from_json_at(v, "$").map(|(s, _)| s)
}

fn structure_from_json_at(
    v: &Value,
    path: &str,
) -> Result<(Structure, HashMap<String, ElementId>)> {
    let m = obj(v, path)?;
    let sig = signature_from_json(field(m, "signature", path)?, &format!("{path}.signature"))?;
    let elements = strings(field(m, "elements", path)?, &format!("{path}.elements"))?;
    let mut ids: HashMap<String, ElementId> = HashMap::new();
    for (i, e) in elements.iter().enumerate() {
        if ids.insert(e.clone(), i as ElementId).is_some() {
            return Err(Error::schema(
                format!("{path}.elements[{i}]"),
                format!("duplicate element `{e}`"),
            ));
        }
    }
    let rels = obj(field(m, "relations", path)?, &format!("{path}.relations"))?;
    let mut b = Structure::builder(sig.clone(), elements.len());
    for (name, rows) in rels {
        let rpath = format!("{path}.relations.{name}");
        let sym = sig
            .index_of(name)
            .ok_or_else(|| Error::schema(&rpath, format!("`{name}` is not in the signature")))?;
        for (i, row) in arr(rows, &rpath)?.iter().enumerate() {
            let tpath = format!("{rpath}[{i}]");
            let t = tuple_ids(row, &tpath, &ids)?;
            b.add(sym, &t)
                .map_err(|e| Error::schema(&tpath, e.to_string()))?;
        }
    }
    Ok((b.names(elements).build(), ids))
}

fn tuple_ids(row: &Value, path: &str, ids: &HashMap<String, ElementId>) -> Result<Vec<ElementId>> {
    arr(row, path)?
        .iter()
        .enumerate()
        .map(|(j, x)| {
            let p = format!("{path}[{j}]");
            let name = string(x, &p)?;
            ids.get(name)
                .copied()
                .ok_or_else(|| Error::schema(p, format!("unknown element `{name}`")))
        })
        .collect()
}

/// A structure with colours read against the given palettes; missing
/// colour fields mean colour 0 everywhere.
pub fn coloured_from_json(v: &Value, palettes: &Arc<Palettes>) -> Result<ColouredStructure> {
    coloured_from_json_at(v, palettes, "$")
}

fn coloured_from_json_at(
    v: &Value,
    palettes: &Arc<Palettes>,
    path: &str,
) -> Result<ColouredStructure> {
    let (s, ids) = structure_from_json_at(v, path)?;
    let m = obj(v, path)?;
    let mut vcol: Vec<Colour> = vec![0; s.n()];
    if let Some(vc) = m.get("vertex_colours") {
        let vpath = format!("{path}.vertex_colours");
        for (name, tok) in obj(vc, &vpath)? {
            let p = format!("{vpath}.{name}");
            let x = *ids
                .get(name)
                .ok_or_else(|| Error::schema(&p, format!("unknown element `{name}`")))?;
            let tok = string(tok, &p)?;
            vcol[x as usize] = palettes.vertex_index(tok).ok_or_else(|| {
                Error::schema(&p, format!("colour `{tok}` is not in the vertex palette"))
            })?;
        }
    }
    let mut ecol: Vec<Colour> = vec![0; s.tuple_count()];
    if let Some(tc) = m.get("tuple_colours") {
        let tpath = format!("{path}.tuple_colours");
        for (i, entry) in arr(tc, &tpath)?.iter().enumerate() {
            let p = format!("{tpath}[{i}]");
            let e = obj(entry, &p)?;
            let rel = string(field(e, "rel", &p)?, &format!("{p}.rel"))?;
            let sym = s.signature().index_of(rel).ok_or_else(|| {
                Error::schema(
                    format!("{p}.rel"),
                    format!("`{rel}` is not in the signature"),
                )
            })?;
            let t = tuple_ids(field(e, "tuple", &p)?, &format!("{p}.tuple"), &ids)?;
            let g = s.find_tuple(sym, &t).ok_or_else(|| {
                Error::schema(format!("{p}.tuple"), "tuple is not in the relation")
            })?;
            let tok = string(field(e, "colour", &p)?, &format!("{p}.colour"))?;
            ecol[g] = palettes.edge_index(tok).ok_or_else(|| {
                Error::schema(
                    format!("{p}.colour"),
                    format!("colour `{tok}` is not in the edge palette"),
                )
            })?;
        }
    }
    ColouredStructure::new(s, vcol, ecol, palettes.clone())
        .map_err(|e| Error::schema(path, e.to_string()))
}

pub fn meta_of(v: &Value) -> Option<&Value> {
    v.get("meta")
}

// --------------------------------------------------------------- problems

pub fn problem_to_json(p: &Problem) -> Value {
    let patterns: Vec<Value> = p
        .patterns()
        .iter()
        .map(|f| coloured_to_json(f.body(), None))
        .collect();
    let mut out = Map::new();
    out.insert("signature".into(), signature_to_json(p.signature()));
    out.insert("vertex_palette".into(), json!(p.palettes().vertex));
    out.insert("edge_palette".into(), json!(p.palettes().edge));
    out.insert("patterns".into(), Value::Array(patterns));
    out.insert("undirected".into(), json!(p.undirected));
    if let Some(n) = &p.name {
        out.insert("name".into(), json!(n));
    }
    Value::Object(out)
}

pub fn problem_from_json(v: &Value) -> Result<Problem> {
    problem_from_json_at(v, "$")
}

fn problem_from_json_at(v: &Value, path: &str) -> Result<Problem> {
    let m = obj(v, path)?;
    let sig = signature_from_json(field(m, "signature", path)?, &format!("{path}.signature"))?;
    let vp = strings(
        field(m, "vertex_palette", path)?,
        &format!("{path}.vertex_palette"),
    )?;
    let ep = strings(
        field(m, "edge_palette", path)?,
        &format!("{path}.edge_palette"),
    )?;
    let pal = Arc::new(Palettes::new(vp, ep).map_err(|e| Error::schema(path, e.to_string()))?);
    let ppath = format!("{path}.patterns");
    let mut bodies = Vec::new();
    for (i, f) in arr(field(m, "patterns", path)?, &ppath)?.iter().enumerate() {
        let fp = format!("{ppath}[{i}]");
        let cs = coloured_from_json_at(f, &pal, &fp)?;
        if *cs.signature() != *sig {
            return Err(Error::schema(
                format!("{fp}.signature"),
                "pattern signature differs from the problem's",
            ));
        }
        let cs = ColouredStructure::new(
            cs.base().clone().with_sig(sig.clone()),
            cs.vcol().to_vec(),
            cs.ecol().to_vec(),
            pal.clone(),
        )?;
        bodies.push(cs);
    }
    let mut p = Problem::new(sig, pal, bodies).map_err(|e| Error::schema(&ppath, e.to_string()))?;
    if let Some(u) = m.get("undirected") {
        p.undirected = u
            .as_bool()
            .ok_or_else(|| Error::schema(format!("{path}.undirected"), "expected a boolean"))?;
    }
    if let Some(n) = m.get("name") {
        p.name = Some(string(n, &format!("{path}.name"))?.to_string());
    }
    Ok(p)
}

/// A built-in problem name or a path to a problem file.
pub fn load_problem(spec: &str) -> Result<Problem> {
    if BUILTINS.contains(&spec) {
        return builtin(spec);
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(Error::UnknownProblem(format!(
            "{spec} (neither a file nor one of {})",
            BUILTINS.join(", ")
        )));
    }
    problem_from_json(&read_json(path)?)
}

// ------------------------------------------------------ maps and witnesses

/// Element-name to element-name map.
pub fn hom_to_json(a: &Structure, b: &Structure, h: &Hom) -> Value {
    let m: BTreeMap<String, String> = (0..a.n())
        .map(|x| {
            (
                a.name(x as ElementId).into_owned(),
                b.name(h[x]).into_owned(),
            )
        })
        .collect();
    json!(m)
}

/// Element name to 1-based part index.
pub fn partition_to_json(s: &Structure, part_of: &[usize]) -> Value {
    let m: BTreeMap<String, usize> = (0..s.n())
        .map(|x| (s.name(x as ElementId).into_owned(), part_of[x] + 1))
        .collect();
    json!(m)
}

/// Parts come back 0-based.
pub fn partition_from_json(s: &Structure, v: &Value) -> Result<Vec<usize>> {
    let m = obj(v, "$")?;
    let mut part = vec![usize::MAX; s.n()];
    let ids: HashMap<String, usize> = (0..s.n())
        .map(|x| (s.name(x as ElementId).into_owned(), x))
        .collect();
    for (name, k) in m {
        let p = format!("$.{name}");
        let x = *ids
            .get(name)
            .ok_or_else(|| Error::schema(&p, format!("unknown element `{name}`")))?;
        let k = uint(k, &p)? as usize;
        if k == 0 {
            return Err(Error::schema(p, "part indices start at 1"));
        }
        part[x] = k - 1;
    }
    if let Some(x) = part.iter().position(|&k| k == usize::MAX) {
        return Err(Error::schema(
            "$",
            format!("element `{}` has no part", s.name(x as ElementId)),
        ));
    }
    Ok(part)
}

pub fn forest_to_json(s: &Structure, f: &RootedForest) -> Value {
    let m: BTreeMap<String, Value> = (0..s.n() as ElementId)
        .map(|x| {
            let p = f.parent(x).map_or(Value::Null, |y| json!(s.name(y)));
            (s.name(x).into_owned(), p)
        })
        .collect();
    json!({"parent": m, "height": f.height()})
}

pub fn forest_from_json(s: &Structure, v: &Value) -> Result<RootedForest> {
    let m = obj(v, "$")?;
    let parents = obj(field(m, "parent", "$")?, "$.parent")?;
    let ids: HashMap<String, ElementId> = (0..s.n() as ElementId)
        .map(|x| (s.name(x).into_owned(), x))
        .collect();
    let mut parent = vec![None; s.n()];
    for (name, p) in parents {
        let path = format!("$.parent.{name}");
        let x = *ids
            .get(name)
            .ok_or_else(|| Error::schema(&path, format!("unknown element `{name}`")))?;
        if !p.is_null() {
            let pn = string(p, &path)?;
            parent[x as usize] = Some(
                *ids.get(pn)
                    .ok_or_else(|| Error::schema(&path, format!("unknown element `{pn}`")))?,
            );
        }
    }
    RootedForest::new(parent).map_err(|e| Error::schema("$.parent", e.to_string()))
}

pub fn orientation_to_json(s: &Structure, k: usize, o: &[(ElementId, ElementId)]) -> Value {
    let mut arcs: Vec<(String, String)> = o
        .iter()
        .map(|&(a, b)| (s.name(a).into_owned(), s.name(b).into_owned()))
        .collect();
    arcs.sort();
    json!({"k": k, "arcs": arcs})
}

// ---------------------------------------------------------------- reports

pub fn report_to_json(r: &Report) -> Value {
    let dis: Vec<Value> = r
        .disagreements
        .iter()
        .map(|d| {
            json!({
                "index": d.index,
                "input": structure_to_json(&d.input, None),
                "fpp": d.fpp,
                "hom": d.hom,
            })
        })
        .collect();
    json!({
        "cases": r.cases,
        "agreements": r.agreements,
        "disagreements": dis,
        "exhausted": r.exhausted,
        "core_overflows": r.core_overflows,
    })
}

// -------------------------------------------------------------- templates

/// Sidecar path `<template>.provenance.json`.
pub fn sidecar_path(template: &Path) -> std::path::PathBuf {
    let mut s = template.as_os_str().to_owned();
    s.push(".provenance.json");
    s.into()
}

pub fn provenance_to_json(t: &UniversalTemplate, p: &Problem) -> Value {
    match &t.provenance {
        Provenance::BoundedDegree(b) => {
            let members: Vec<Value> = b
                .members
                .iter()
                .map(|m| json!({"structure": coloured_to_json(&m.structure, None), "labels": m.labels}))
                .collect();
            json!({
                "kind": "bounded-degree",
                "problem": problem_to_json(p),
                "b": b.b,
                "m": b.m,
                "x": b.x,
                "mode": match b.mode { MemberMode::Labelled => "labelled", MemberMode::Representatives => "representatives" },
                "restrict_degree": b.restrict_degree,
                "cores_only": b.cores_only,
                "members": members,
                "elements": b.elements,
            })
        }
        Provenance::LowTreeDepth(l) => {
            let cores: Vec<Value> = l.cores.iter().map(|c| coloured_to_json(c, None)).collect();
            json!({
                "kind": "low-tree-depth",
                "problem": problem_to_json(p),
                "p": l.p,
                "q": l.q,
                "n_max": l.n_max,
                "cores": cores,
                "coordinates": l.coordinates,
            })
        }
    }
}

/// Loads a carrier file together with its sidecar.
pub fn load_template(path: &Path) -> Result<(UniversalTemplate, Problem)> {
    let side = read_json(&sidecar_path(path))?;
    let m = obj(&side, "$")?;
    let problem = problem_from_json_at(field(m, "problem", "$")?, "$.problem")?;
    let pal = problem.palettes().clone();
    let carrier = coloured_from_json(&read_json(path)?, &pal)?;
    let num =
        |k: &str| -> Result<usize> { Ok(uint(field(m, k, "$")?, &format!("$.{k}"))? as usize) };
    let kind = string(field(m, "kind", "$")?, "$.kind")?;
    let provenance = match kind {
        "bounded-degree" => {
            let mode = match string(field(m, "mode", "$")?, "$.mode")? {
                "labelled" => MemberMode::Labelled,
                "representatives" => MemberMode::Representatives,
                other => return Err(Error::schema("$.mode", format!("unknown mode `{other}`"))),
            };
            let mut members = Vec::new();
            for (i, mv) in arr(field(m, "members", "$")?, "$.members")?
                .iter()
                .enumerate()
            {
                let p = format!("$.members[{i}]");
                let mo = obj(mv, &p)?;
                let structure = coloured_from_json_at(
                    field(mo, "structure", &p)?,
                    &pal,
                    &format!("{p}.structure"),
                )?;
                let labels = arr(field(mo, "labels", &p)?, &format!("{p}.labels"))?
                    .iter()
                    .enumerate()
                    .map(|(j, l)| uint(l, &format!("{p}.labels[{j}]")).map(|l| l as u32))
                    .collect::<Result<Vec<_>>>()?;
                members.push(Member { structure, labels });
            }
            let mut elements = Vec::new();
            for (i, e) in arr(field(m, "elements", "$")?, "$.elements")?
                .iter()
                .enumerate()
            {
                let p = format!("$.elements[{i}]");
                let pair = arr(e, &p)?;
                if pair.len() != 2 {
                    return Err(Error::schema(p, "expected [member, element]"));
                }
                elements.push((
                    uint(&pair[0], &p)? as usize,
                    uint(&pair[1], &p)? as ElementId,
                ));
            }
            let flag = |k: &str| -> Result<bool> {
                field(m, k, "$")?
                    .as_bool()
                    .ok_or_else(|| Error::schema(format!("$.{k}"), "expected a boolean"))
            };
            Provenance::BoundedDegree(BoundedProvenance {
                b: num("b")?,
                m: num("m")?,
                x: num("x")?,
                mode,
                restrict_degree: flag("restrict_degree")?,
                cores_only: flag("cores_only")?,
                members,
                elements,
            })
        }
        "low-tree-depth" => {
            let mut cores = Vec::new();
            for (i, c) in arr(field(m, "cores", "$")?, "$.cores")?.iter().enumerate() {
                cores.push(coloured_from_json_at(c, &pal, &format!("$.cores[{i}]"))?);
            }
            Provenance::LowTreeDepth(LowTdProvenance {
                p: num("p")?,
                q: num("q")?,
                n_max: num("n_max")?,
                cores,
                coordinates: strings(field(m, "coordinates", "$")?, "$.coordinates")?,
            })
        }
        other => {
            return Err(Error::schema(
                "$.kind",
                format!("unknown template kind `{other}`"),
            ))
        }
    };
    Ok((
        UniversalTemplate {
            carrier,
            provenance,
        },
        problem,
    ))
}

pub fn save_template(path: &Path, t: &UniversalTemplate, p: &Problem) -> Result<()> {
    write_json(path, &coloured_to_json(&t.carrier, None))?;
    write_json(&sidecar_path(path), &provenance_to_json(t, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relstruct::encode_graph;

    #[test]
    fn structure_round_trip_is_byte_identical() {
        let k3 = encode_graph(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let text = to_text(&structure_to_json(&k3, None));
        let back = structure_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(to_text(&structure_to_json(&back, None)), text);
    }

    #[test]
    fn unknown_element_has_path() {
        let v = json!({"signature": {"E": 2}, "elements": ["a", "b"], "relations": {"E": [["a", "b"], ["b", "c"]]}});
        let e = structure_from_json(&v).unwrap_err();
        assert!(e.to_string().starts_with("$.relations.E[1][1]"), "{e}");
    }

    #[test]
    fn problem_round_trip() {
        for name in BUILTINS {
            let p = builtin(name).unwrap();
            let v = problem_to_json(&p);
            let q = problem_from_json(&v).unwrap();
            assert_eq!(p, q);
            assert_eq!(to_text(&problem_to_json(&q)), to_text(&v));
        }
    }

    #[test]
    fn bad_colour_token() {
        let p = builtin("vertex-no-mono-tri").unwrap();
        let mut v = problem_to_json(&p);
        v["patterns"][0]["vertex_colours"]["0"] = json!("green");
        let e = problem_from_json(&v).unwrap_err();
        assert!(
            e.to_string().contains("$.patterns[0].vertex_colours.0"),
            "{e}"
        );
    }
}
