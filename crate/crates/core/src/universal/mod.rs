//! Universal templates: every structure of a restricted class is a
//! yes-instance exactly when it maps homomorphically into the template.

mod bounded;
mod harness;
mod lowtd;
mod witness;

pub use bounded::{
    ball, bounded_degree_universal, check_ball, embed_into_universal, failing_balls, labelled_key,
    members_valid, BallMap, BoundedOptions, MemberMode,
};
pub use harness::{verify_duality, verify_duality_with, Disagreement, Report};
pub use lowtd::{
    enumerate_valid_cores, enumerate_valid_cores_with, low_td_universal, low_td_universal_with,
};
pub use witness::{witness_gn, WitnessGraph};

use crate::relstruct::{ColouredStructure, ElementId};

/// `1 + sum_{j=0}^{m} b (b-1)^j`: the largest possible ball of radius
/// `m + 1` in a structure of Gaifman degree at most `b`.
pub fn x_param(b: u64, m: u64) -> u64 {
    let mut total = 1u64;
    let mut term = b;
    for _ in 0..=m {
        total = total.saturating_add(term);
        term = term.saturating_mul(b.saturating_sub(1));
    }
    total
}

/// A small labelled structure used as a building block of a bounded-degree
/// template. `labels[i]` is the label of element `i`, in `1..=X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Member {
    pub structure: ColouredStructure,
    pub labels: Vec<u32>,
}

impl Member {
    pub fn element_with_label(&self, label: u32) -> Option<ElementId> {
        self.labels
            .iter()
            .position(|&l| l == label)
            .map(|i| i as ElementId)
    }
}

#[derive(Clone, Debug)]
pub struct BoundedProvenance {
    pub b: usize,
    pub m: usize,
    pub x: usize,
    pub mode: MemberMode,
    pub restrict_degree: bool,
    pub cores_only: bool,
    pub members: Vec<Member>,
    /// Carrier element `u` is element `elements[u].1` of member `elements[u].0`.
    pub elements: Vec<(usize, ElementId)>,
}

#[derive(Clone, Debug)]
pub struct LowTdProvenance {
    pub p: usize,
    pub q: usize,
    pub n_max: usize,
    pub cores: Vec<ColouredStructure>,
    /// Nested product coordinates of every carrier element.
    pub coordinates: Vec<String>,
}

#[derive(Clone, Debug)]
pub enum Provenance {
    BoundedDegree(BoundedProvenance),
    LowTreeDepth(LowTdProvenance),
}

#[derive(Clone, Debug)]
pub struct UniversalTemplate {
    pub carrier: ColouredStructure,
    pub provenance: Provenance,
}

impl UniversalTemplate {
    pub fn bounded(&self) -> Option<&BoundedProvenance> {
        match &self.provenance {
            Provenance::BoundedDegree(p) => Some(p),
            Provenance::LowTreeDepth(_) => None,
        }
    }

    pub fn low_td(&self) -> Option<&LowTdProvenance> {
        match &self.provenance {
            Provenance::LowTreeDepth(p) => Some(p),
            Provenance::BoundedDegree(_) => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x_values() {
        assert_eq!(x_param(3, 1), 10);
        assert_eq!(x_param(2, 1), 5);
        assert_eq!(x_param(2, 2), 7);
        assert_eq!(x_param(1, 0), 2);
        assert_eq!(x_param(1, 5), 2);
    }
}
