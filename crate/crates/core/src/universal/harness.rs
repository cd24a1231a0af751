//! Agreement check between the decision procedure and template homomorphisms.

use super::UniversalTemplate;
use crate::error::{Error, Result};
use crate::hom::{
    core_capped, dominance_reduce, find_hom_indexed, Hom, HomIndex, SearchOptions, DEFAULT_BUDGET,
};
use crate::par::{self, Exec};
use crate::patterns::{decide_fpp_with, Problem};
use crate::relstruct::{ColouredStructure, ElementId, Structure};
use crate::treedepth::find_ltd_partition;

#[derive(Clone, Debug)]
pub struct Disagreement {
    /// Position of the input in the generated sequence.
    pub index: usize,
    pub input: Structure,
    pub fpp: bool,
    pub hom: bool,
    /// Valid colouring, when the decision procedure said yes.
    pub colouring: Option<ColouredStructure>,
    /// Homomorphism into the carrier, when one was found.
    pub map: Option<Hom>,
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub cases: usize,
    pub agreements: usize,
    pub disagreements: Vec<Disagreement>,
    /// Inputs for which a search ran out of budget.
    pub exhausted: Vec<usize>,
    /// Yes-inputs whose colouring restricted to some `p` parts of a
    /// low tree-depth partition has a component whose core exceeds the
    /// template's size cap.
    pub core_overflows: Vec<usize>,
}

impl Report {
    pub fn is_clean(&self) -> bool {
        self.disagreements.is_empty() && self.exhausted.is_empty()
    }
}

enum Outcome {
    Agree { overflow: bool },
    Disagree(Box<Disagreement>),
    Exhausted,
}

pub fn verify_duality(t: &UniversalTemplate, p: &Problem, inputs: &[Structure]) -> Result<Report> {
    verify_duality_with(t, p, inputs, DEFAULT_BUDGET, Exec::default())
}

pub fn verify_duality_with(
    t: &UniversalTemplate,
    p: &Problem,
    inputs: &[Structure],
    budget: u64,
    exec: Exec,
) -> Result<Report> {
    // searches run into a hom-equivalent retract; maps are lifted back
    let red = dominance_reduce(&t.carrier.forget_colours())?;
    let target = red.reduced;
    let idx = HomIndex::new(target.base());
    let opts = SearchOptions {
        pins: Vec::new(),
        budget,
    };
    let indexed: Vec<(usize, &Structure)> = inputs.iter().enumerate().collect();
    let outcomes = par::try_map(exec, &indexed, |&(i, s)| -> Result<Outcome> {
        let colouring = match decide_fpp_with(s, p, budget) {
            Ok(c) => c,
            Err(Error::Budget { .. }) => return Ok(Outcome::Exhausted),
            Err(e) => return Err(e),
        };
        let map = match find_hom_indexed(
            &ColouredStructure::uncoloured(s.clone()),
            &target,
            &idx,
            &opts,
        ) {
            Ok(h) => h.map(|h| {
                h.into_iter()
                    .map(|y| red.inclusion[y as usize])
                    .collect::<Hom>()
            }),
            Err(Error::Budget { .. }) => return Ok(Outcome::Exhausted),
            Err(e) => return Err(e),
        };
        let (fpp, hom) = (colouring.is_some(), map.is_some());
        if fpp != hom {
            return Ok(Outcome::Disagree(Box::new(Disagreement {
                index: i,
                input: s.clone(),
                fpp,
                hom,
                colouring,
                map,
            })));
        }
        let overflow = match (&colouring, t.low_td()) {
            (Some(c), Some(prov)) => core_overflow(c, prov.p, prov.q, prov.n_max)?,
            _ => false,
        };
        Ok(Outcome::Agree { overflow })
    })?;
    let mut report = Report {
        cases: inputs.len(),
        ..Default::default()
    };
    for (i, o) in outcomes.into_iter().enumerate() {
        match o {
            Outcome::Agree { overflow } => {
                report.agreements += 1;
                if overflow {
                    report.core_overflows.push(i);
                }
            }
            Outcome::Disagree(d) => report.disagreements.push(*d),
            Outcome::Exhausted => report.exhausted.push(i),
        }
    }
    Ok(report)
}

/// True when some component of the colouring restricted to `p` parts of a
/// found partition has a core larger than `n_max`.
fn core_overflow(c: &ColouredStructure, p: usize, q: usize, n_max: usize) -> Result<bool> {
    let Some(part_of) = find_ltd_partition(c.base(), p, q)? else {
        return Ok(false);
    };
    let parts = part_of.iter().copied().max().map_or(0, |m| m + 1);
    let k = p.min(parts);
    let mut chosen: Vec<usize> = (0..k).collect();
    loop {
        let members: Vec<ElementId> = (0..c.n() as ElementId)
            .filter(|&x| chosen.contains(&part_of[x as usize]))
            .collect();
        let (sub, _) = c.induced(&members)?;
        for comp in sub.components() {
            if comp.n() > n_max && core_capped(&comp, comp.n())?.core.n() > n_max {
                return Ok(true);
            }
        }
        // next k-subset of 0..parts
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(false);
            }
            i -= 1;
            if chosen[i] < parts - k + i {
                chosen[i] += 1;
                for j in i + 1..k {
                    chosen[j] = chosen[j - 1] + 1;
                }
                break;
            }
        }
    }
}
