//! Seeded generators for the input classes used by the duality checks.
//!
//! Case `i` of a run draws from its own ChaCha stream, so outputs do not
//! depend on the execution strategy and a fixed seed always reproduces the
//! same files. Every structure is audited against its class before it is
//! returned, and the audit results are stamped into its metadata.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::enumerate::{any, connected_flat, EnumSpec};
use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::relstruct::{encode_graph, ElementId, Signature, Structure};
use crate::treedepth::{check_orientation, td_value, TD_CAP};
use crate::universal::witness_gn;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Class {
    /// Gaifman degree at most `b`; graphs, or digraphs when `directed`.
    Degree {
        b: usize,
        directed: bool,
    },
    /// Undirected graphs of tree-depth at most `p`.
    BoundedTd {
        p: usize,
    },
    /// The special-vertex family on `n` specials.
    SparseWitness {
        n: usize,
    },
    RandomDigraph,
}

impl Class {
    /// Accepts `degree-B`, `degreeB`, `digraph-degree-B`, `bounded-td-P`,
    /// `k-sparse-witness`, `random-digraph`. `degree-b`, `bounded-td-p` and
    /// `k-sparse-witness` take their parameter from `param`.
    pub fn parse(name: &str, param: Option<usize>) -> Result<Class> {
        let need =
            |what: &str| param.ok_or_else(|| Error::Param(format!("class `{name}` needs {what}")));
        let num = |s: &str, what: &str| -> Result<usize> {
            match s {
                "b" | "p" | "" => need(what),
                _ => s
                    .parse()
                    .map_err(|_| Error::Param(format!("unknown class `{name}`"))),
            }
        };
        if let Some(rest) = name.strip_prefix("digraph-degree") {
            let b = num(rest.trim_start_matches('-'), "a degree bound")?;
            return Ok(Class::Degree { b, directed: true });
        }
        if let Some(rest) = name.strip_prefix("degree") {
            let b = num(rest.trim_start_matches('-'), "a degree bound")?;
            return Ok(Class::Degree { b, directed: false });
        }
        if let Some(rest) = name.strip_prefix("bounded-td") {
            let p = num(rest.trim_start_matches('-'), "a tree-depth bound")?;
            return Ok(Class::BoundedTd { p });
        }
        match name {
            "k-sparse-witness" => Ok(Class::SparseWitness {
                n: need("the number of specials")?,
            }),
            "random-digraph" => Ok(Class::RandomDigraph),
            _ => Err(Error::Param(format!("unknown class `{name}`"))),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Class::Degree { b, directed: false } => format!("degree-{b}"),
            Class::Degree { b, directed: true } => format!("digraph-degree-{b}"),
            Class::BoundedTd { p } => format!("bounded-td-{p}"),
            Class::SparseWitness { n } => format!("k-sparse-witness-{n}"),
            Class::RandomDigraph => "random-digraph".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct GenSpec {
    pub class: Class,
    pub max_n: usize,
    /// Number of samples; `None` asks for exhaustive enumeration, which
    /// only the degree classes support.
    pub count: Option<usize>,
    pub seed: u64,
    /// Arc probability for random digraphs and closure-edge probability for
    /// bounded tree-depth samples.
    pub density: f64,
}

impl GenSpec {
    pub fn new(class: Class, max_n: usize) -> Self {
        GenSpec {
            class,
            max_n,
            count: None,
            seed: 0,
            density: 0.5,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Generated {
    pub structure: Structure,
    pub meta: Value,
}

/// Per-case random stream.
pub fn case_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

pub fn generate(spec: &GenSpec, exec: Exec) -> Result<Vec<Generated>> {
    if !(0.0..=1.0).contains(&spec.density) {
        return Err(Error::Param(format!(
            "density {} is not a probability",
            spec.density
        )));
    }
    let shapes: Vec<Structure> = match (spec.class, spec.count) {
        (Class::SparseWitness { n }, _) => vec![witness_gn(n)?.graph],
        (Class::Degree { b, directed }, None) => {
            let es = if directed {
                EnumSpec::digraphs(spec.max_n, Some(b), false)
            } else {
                EnumSpec::graphs(spec.max_n, Some(b))
            };
            connected_flat(&es, &any, exec)?
        }
        (_, None) => {
            return Err(Error::Param(format!(
                "class {} needs --count",
                spec.class.label()
            )));
        }
        (class, Some(count)) => {
            if spec.max_n == 0 {
                return Err(Error::Param("max-n must be positive".into()));
            }
            par::map_range(exec, count, |i| {
                let mut rng = case_rng(spec.seed, i);
                sample(class, spec.max_n, spec.density, &mut rng)
            })
        }
    };
    let stamped = par::map_range(exec, shapes.len(), |i| audit(spec, i, &shapes[i]));
    stamped
        .into_iter()
        .zip(shapes)
        .map(|(meta, structure)| {
            Ok(Generated {
                structure,
                meta: meta?,
            })
        })
        .collect()
}

fn vertex_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("v{i}")).collect()
}

fn sample(class: Class, max_n: usize, density: f64, rng: &mut ChaCha8Rng) -> Structure {
    let n = rng.gen_range(1..=max_n);
    let s = match class {
        Class::Degree { b, directed } => {
            let mut pairs: Vec<(ElementId, ElementId)> = (0..n as ElementId)
                .flat_map(|x| (0..n as ElementId).map(move |y| (x, y)))
                .filter(|&(x, y)| if directed { x != y } else { x < y })
                .collect();
            pairs.shuffle(rng);
            let mut nbrs: Vec<Vec<ElementId>> = vec![Vec::new(); n];
            let mut arcs = Vec::new();
            for (x, y) in pairs {
                let adjacent = nbrs[x as usize].contains(&y);
                let fits = adjacent || (nbrs[x as usize].len() < b && nbrs[y as usize].len() < b);
                if fits && rng.gen_bool(density) {
                    if !adjacent {
                        nbrs[x as usize].push(y);
                        nbrs[y as usize].push(x);
                    }
                    arcs.push((x, y));
                }
            }
            build(n, &arcs, directed)
        }
        Class::BoundedTd { p } => {
            // random forest of height <= p; edges only between comparable vertices
            let mut parent: Vec<Option<usize>> = vec![None; n];
            let mut depth = vec![1usize; n];
            for v in 1..n {
                let cands: Vec<usize> = (0..v).filter(|&u| depth[u] < p).collect();
                if !cands.is_empty() && rng.gen_bool(0.8) {
                    let u = *cands.choose(rng).expect("non-empty");
                    parent[v] = Some(u);
                    depth[v] = depth[u] + 1;
                }
            }
            let mut edges = Vec::new();
            for v in 0..n {
                let mut a = parent[v];
                let mut first = true;
                while let Some(u) = a {
                    if first || rng.gen_bool(density) {
                        edges.push((u as ElementId, v as ElementId));
                    }
                    first = false;
                    a = parent[u];
                }
            }
            build(n, &edges, false)
        }
        Class::RandomDigraph => {
            let arcs: Vec<(ElementId, ElementId)> = (0..n as ElementId)
                .flat_map(|x| (0..n as ElementId).map(move |y| (x, y)))
                .filter(|&(x, y)| x != y)
                .filter(|_| rng.gen_bool(density))
                .collect();
            build(n, &arcs, true)
        }
        Class::SparseWitness { .. } => unreachable!("witness graphs are not sampled"),
    };
    s.with_names(vertex_names(n))
}

fn build(n: usize, arcs: &[(ElementId, ElementId)], directed: bool) -> Structure {
    if directed {
        let sig = std::sync::Arc::new(Signature::graph());
        let t: Vec<(usize, Vec<ElementId>)> = arcs.iter().map(|&(x, y)| (0, vec![x, y])).collect();
        Structure::from_tuples(sig, n, &t).expect("arcs are in range")
    } else {
        encode_graph(n, arcs).expect("edges are in range")
    }
}

fn audit(spec: &GenSpec, index: usize, s: &Structure) -> Result<Value> {
    let mut meta = json!({
        "class": spec.class.label(),
        "index": index,
        "n": s.n(),
        "max_degree": s.max_gaifman_degree(),
        "connected": s.is_connected(),
    });
    if spec.count.is_some() {
        meta["seed"] = json!(spec.seed);
    }
    let fail = |what: String| Err(Error::Invalid(format!("generated case {index}: {what}")));
    match spec.class {
        Class::Degree { b, directed } => {
            if s.max_gaifman_degree() > b {
                return fail(format!("degree exceeds {b}"));
            }
            if !directed && !s.is_symmetric() {
                return fail("graph is not symmetric".into());
            }
        }
        Class::BoundedTd { p } => {
            let td = if s.n() <= TD_CAP { td_value(s)? } else { p };
            if td > p {
                return fail(format!("tree-depth {td} exceeds {p}"));
            }
            meta["td"] = json!(td);
        }
        Class::SparseWitness { n } => {
            let w = witness_gn(n)?;
            if !check_orientation(s, 2, &w.orientation)? {
                return fail("orientation is not 2-bounded".into());
            }
            meta["k_sparse"] = json!(2);
            meta["specials"] = json!(w
                .specials
                .iter()
                .map(|&x| s.name(x).into_owned())
                .collect::<Vec<_>>());
        }
        Class::RandomDigraph => {
            if s.has_loops() {
                return fail("loop in a loopless digraph".into());
            }
            meta["density"] = json!(spec.density);
        }
    }
    Ok(meta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_class_names() {
        assert_eq!(
            Class::parse("degree2", None).unwrap(),
            Class::Degree {
                b: 2,
                directed: false
            }
        );
        assert_eq!(
            Class::parse("degree-3", None).unwrap(),
            Class::Degree {
                b: 3,
                directed: false
            }
        );
        assert_eq!(
            Class::parse("degree-b", Some(4)).unwrap(),
            Class::Degree {
                b: 4,
                directed: false
            }
        );
        assert_eq!(
            Class::parse("digraph-degree-2", None).unwrap(),
            Class::Degree {
                b: 2,
                directed: true
            }
        );
        assert_eq!(
            Class::parse("bounded-td-3", None).unwrap(),
            Class::BoundedTd { p: 3 }
        );
        assert!(Class::parse("degree-b", None).is_err());
        assert!(Class::parse("planar", None).is_err());
    }

    #[test]
    fn exhaustive_degree_two() {
        // paths on 1..=6 vertices and cycles on 3..=6
        let out = generate(
            &GenSpec::new(
                Class::Degree {
                    b: 2,
                    directed: false,
                },
                6,
            ),
            Exec::Sequential,
        )
        .unwrap();
        assert_eq!(out.len(), 6 + 4);
        for g in &out {
            let n = g.structure.n();
            let edges = g.structure.tuple_count() / 2;
            assert!(edges == n - 1 || edges == n);
        }
    }

    #[test]
    fn witness_size() {
        let out = generate(
            &GenSpec::new(Class::SparseWitness { n: 3 }, 0),
            Exec::Sequential,
        )
        .unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(
            (out[0].structure.n(), out[0].structure.tuple_count() / 2),
            (9, 9)
        );
    }

    #[test]
    fn samples_are_deterministic() {
        for class in [
            Class::Degree {
                b: 2,
                directed: true,
            },
            Class::BoundedTd { p: 3 },
            Class::RandomDigraph,
        ] {
            let mut spec = GenSpec::new(class, 8);
            spec.count = Some(30);
            spec.seed = 7;
            let a = generate(&spec, Exec::Parallel).unwrap();
            let b = generate(&spec, Exec::Sequential).unwrap();
            assert_eq!(a.len(), 30);
            for (x, y) in a.iter().zip(&b) {
                assert_eq!(x.structure, y.structure);
                assert_eq!(x.meta, y.meta);
            }
        }
    }
}
