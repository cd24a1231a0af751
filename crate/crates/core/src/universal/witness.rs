//! Triangle-free, 2-sparse graphs whose special vertices cannot be merged
//! by any homomorphism into a triangle-free graph.

use crate::error::{Error, Result};
use crate::relstruct::{encode_graph, ElementId, Structure};

#[derive(Clone, Debug)]
pub struct WitnessGraph {
    pub graph: Structure,
    pub specials: Vec<ElementId>,
    /// Every edge once, as `(tail, head)`; arcs leave the special vertices.
    pub orientation: Vec<(ElementId, ElementId)>,
}

/// `n` special vertices, every pair joined by its own path with three edges.
pub fn witness_gn(n: usize) -> Result<WitnessGraph> {
    if n < 2 {
        return Err(Error::Param("need at least two special vertices".into()));
    }
    let pairs = n * (n - 1) / 2;
    let total = n + 2 * pairs;
    let mut edges = Vec::with_capacity(3 * pairs);
    let mut orientation = Vec::with_capacity(3 * pairs);
    let mut next = n as ElementId;
    for i in 0..n as ElementId {
        for j in i + 1..n as ElementId {
            let (a, b) = (next, next + 1);
            next += 2;
            edges.extend([(i, a), (a, b), (b, j)]);
            orientation.extend([(i, a), (a, b), (j, b)]);
        }
    }
    let names = (0..total)
        .map(|x| {
            if x < n {
                format!("s{x}")
            } else {
                format!("p{}", x - n)
            }
        })
        .collect();
    Ok(WitnessGraph {
        graph: encode_graph(total, &edges)?.with_names(names),
        specials: (0..n as ElementId).collect(),
        orientation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treedepth::{check_orientation, is_uniformly_k_sparse};

    #[test]
    fn sizes() {
        let g3 = witness_gn(3).unwrap();
        assert_eq!(g3.graph.n(), 9);
        assert_eq!(g3.graph.tuple_count(), 2 * 9);
        let g2 = witness_gn(2).unwrap();
        assert_eq!((g2.graph.n(), g2.orientation.len()), (4, 3));
        assert!(witness_gn(1).is_err());
    }

    #[test]
    fn orientation_is_two_sparse() {
        for n in 2..6 {
            let w = witness_gn(n).unwrap();
            assert!(check_orientation(&w.graph, 2, &w.orientation).unwrap());
            assert!(is_uniformly_k_sparse(&w.graph, 2).unwrap());
            for &s in &w.specials {
                assert!(w.orientation.iter().all(|&(_, h)| h != s));
            }
        }
    }
}
