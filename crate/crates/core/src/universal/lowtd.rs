//! Template for structures admitting low tree-depth colourings.

use super::{LowTdProvenance, Provenance, UniversalTemplate};
use crate::canon::canonical_key;
use crate::enumerate::{
    colourable, connected_flat, valid_coloured, EnumSpec, Shape, STRUCTURE_CAP,
};
use crate::error::{Error, Result};
use crate::hom::has_proper_retract;
use crate::par::{self, Exec};
use crate::patterns::Problem;
use crate::products::{iterated_truncated_product_with, ProductCaps};
use crate::relstruct::ColouredStructure;
use crate::treedepth::td_value;

/// Pairwise non-isomorphic valid cores with at most `n_max` elements and
/// tree-depth at most `p`, sorted by canonical key.
pub fn enumerate_valid_cores(
    pr: &Problem,
    p: usize,
    n_max: usize,
) -> Result<Vec<ColouredStructure>> {
    enumerate_valid_cores_with(pr, p, n_max, Exec::default())
}

pub fn enumerate_valid_cores_with(
    pr: &Problem,
    p: usize,
    n_max: usize,
    exec: Exec,
) -> Result<Vec<ColouredStructure>> {
    let sig = pr.signature().clone();
    let graph = pr.undirected && sig.is_binary_single();
    let spec = EnumSpec {
        sig,
        max_n: n_max,
        shape: if graph { Shape::Graph } else { Shape::Any },
        max_degree: None,
        loops: !graph,
        cap: STRUCTURE_CAP,
    };
    let col = colourable(pr);
    let filter =
        |s: &crate::relstruct::Structure| -> Result<bool> { Ok(td_value(s)? <= p && col(s)?) };
    let shapes = connected_flat(&spec, &filter, exec)?;
    let coloured = valid_coloured(&shapes, pr, STRUCTURE_CAP, exec)?;
    let proper = par::try_map(exec, &coloured, has_proper_retract)?;
    let mut cores: Vec<(crate::canon::CanonicalKey, ColouredStructure)> = coloured
        .into_iter()
        .zip(proper)
        .filter(|(_, r)| !r)
        .map(|(c, _)| Ok((canonical_key(&c)?, c)))
        .collect::<Result<_>>()?;
    cores.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(cores.into_iter().map(|(_, c)| c).collect())
}

pub fn low_td_universal(
    pr: &Problem,
    p: usize,
    q: usize,
    n_max: usize,
) -> Result<UniversalTemplate> {
    low_td_universal_with(pr, p, q, n_max, ProductCaps::default(), Exec::default())
}

pub fn low_td_universal_with(
    pr: &Problem,
    p: usize,
    q: usize,
    n_max: usize,
    caps: ProductCaps,
    exec: Exec,
) -> Result<UniversalTemplate> {
    let arity = pr.signature().max_arity();
    if p <= arity {
        return Err(Error::Param(format!(
            "p = {p} must exceed the largest arity {arity}"
        )));
    }
    if let Some(f) = pr.patterns().iter().find(|f| f.size() >= p) {
        return Err(Error::Param(format!(
            "pattern with {} elements is not smaller than p = {p}",
            f.size()
        )));
    }
    if q < p {
        return Err(Error::Param(format!("q = {q} is smaller than p = {p}")));
    }
    let cores = enumerate_valid_cores_with(pr, p, n_max, exec)?;
    let base = ColouredStructure::disjoint_union_all(
        pr.signature().clone(),
        pr.palettes().clone(),
        &cores,
    )?;
    let names: Vec<String> = cores
        .iter()
        .enumerate()
        .flat_map(|(i, c)| (0..c.n()).map(move |v| format!("c{i}.{v}")))
        .collect();
    let base = base.with_names(names);
    let carrier = if q == p {
        base
    } else {
        iterated_truncated_product_with(&base, p + 1, q, caps, exec)?
    };
    let coordinates = (0..carrier.n() as u32)
        .map(|u| carrier.base().name(u).into_owned())
        .collect();
    Ok(UniversalTemplate {
        carrier,
        provenance: Provenance::LowTreeDepth(LowTdProvenance {
            p,
            q,
            n_max,
            cores,
            coordinates,
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::is_valid;
    use crate::relstruct::{Palettes, Signature, Structure};
    use std::sync::Arc;

    fn forbid_arc(colours: usize) -> Problem {
        let sig = Arc::new(Signature::graph());
        let pal = Arc::new(Palettes::numbered(colours, 1));
        let arc = Structure::from_tuples(sig.clone(), 2, &[(0, vec![0, 1])]).unwrap();
        let pats = (0..colours as u16)
            .flat_map(|a| (0..colours as u16).map(move |b| (a, b)))
            .map(|(a, b)| {
                ColouredStructure::new(arc.clone(), vec![a, b], vec![0], pal.clone()).unwrap()
            })
            .collect();
        Problem::new(sig, pal, pats).unwrap()
    }

    fn mono_arc() -> Problem {
        let sig = Arc::new(Signature::graph());
        let pal = Arc::new(Palettes::numbered(2, 1));
        let arc = Structure::from_tuples(sig.clone(), 2, &[(0, vec![0, 1])]).unwrap();
        let pats = (0..2)
            .map(|c| ColouredStructure::new(arc.clone(), vec![c, c], vec![0], pal.clone()).unwrap())
            .collect();
        Problem::new(sig, pal, pats).unwrap()
    }

    #[test]
    fn core_counts() {
        assert_eq!(
            enumerate_valid_cores(&forbid_arc(1), 1, 3).unwrap().len(),
            1
        );
        assert_eq!(
            enumerate_valid_cores(&forbid_arc(2), 1, 3).unwrap().len(),
            2
        );
        let sig = Arc::new(Signature::graph());
        let empty = Problem::new(sig, Arc::new(Palettes::single()), vec![]).unwrap();
        assert_eq!(enumerate_valid_cores(&empty, 1, 3).unwrap().len(), 2);
    }

    #[test]
    fn mono_arc_cores() {
        // two points, two arcs, the digon, two 3-element and five
        // 4-element oriented structures with no retraction
        let cores = enumerate_valid_cores(&mono_arc(), 3, 4).unwrap();
        assert_eq!(cores.len(), 12);
        assert_eq!(cores.iter().map(|c| c.n()).sum::<usize>(), 34);
        for c in &cores {
            assert!(!has_proper_retract(c).unwrap());
        }
    }

    #[test]
    fn template_is_valid() {
        let p = mono_arc();
        let t = low_td_universal(&p, 3, 4, 4).unwrap();
        // 17 core elements per colour
        assert_eq!(t.carrier.n(), 4 * 2 * 17usize.pow(3));
        assert!(is_valid(&t.carrier, &p).unwrap());
        let same = low_td_universal(&p, 3, 3, 4).unwrap();
        assert_eq!(same.carrier.n(), 34);
    }

    #[test]
    fn parameter_checks() {
        let p = mono_arc();
        assert!(matches!(
            low_td_universal(&p, 2, 3, 4),
            Err(Error::Param(_))
        ));
        assert!(matches!(
            low_td_universal(&p, 3, 2, 4),
            Err(Error::Param(_))
        ));
    }
}
