//! Timescale hierarchy: one level per strict index `k`, carrying the gap
//! `Δ_k = φ^{k-1} − φ^k` and the aggregation of vertices into atoms.
//!
//! Levels at equality indices are left out because their atom families
//! coincide with the next level's.

use crate::analysis::Analysis;
use crate::atoms::AtomFamily;
use crate::enumerate::DEFAULT_CAP;
use crate::error::Result;
use crate::graph::Digraph;
use crate::weight::ExtWeight;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HierarchyLevel {
    pub k: usize,
    pub gap: ExtWeight,
    pub atoms: AtomFamily,
    /// `aggregation[v]` is the index of the atom holding vertex `v`.
    pub aggregation: Vec<usize>,
    pub labeled_support: Vec<usize>,
}

/// Atoms on which an initial distribution must be concentrated for the
/// aggregated dynamics at this level to be continuous.
pub fn stochastic_support(level: &HierarchyLevel) -> Vec<usize> {
    level.labeled_support.clone()
}

pub fn hierarchy_from(analysis: &Analysis) -> Vec<HierarchyLevel> {
    let n = analysis.n();
    (1..=n)
        .filter(|&k| analysis.phi.is_strict(k))
        .filter_map(|k| {
            let atoms = analysis.family(k)?.clone();
            Some(HierarchyLevel {
                k,
                gap: analysis.phi.gap(k)?,
                aggregation: (0..n).map(|v| atoms.atom_of(v)).collect(),
                labeled_support: atoms.labeled_indices(),
                atoms,
            })
        })
        .collect()
}

pub fn build_hierarchy(graph: &Digraph) -> Result<Vec<HierarchyLevel>> {
    build_hierarchy_capped(graph, DEFAULT_CAP)
}

pub fn build_hierarchy_capped(graph: &Digraph, cap: usize) -> Result<Vec<HierarchyLevel>> {
    Ok(hierarchy_from(&Analysis::compute(graph.clone(), cap)?))
}
