//! Everything computed for one graph: the census, φ, the minimal forests,
//! atoms and measures at every feasible level.

use crate::atoms::{atoms, measure, AtomFamily, AtomMeasure};
use crate::enumerate::{ForestCensus, MinForestSet, PhiSequence};
use crate::error::Result;
use crate::graph::Digraph;

#[derive(Clone, Debug)]
pub struct Analysis {
    pub graph: Digraph,
    pub census: ForestCensus,
    pub phi: PhiSequence,
    /// Indexed by `k` in `0..=N`; entry 0 is always empty.
    pub tilde: Vec<MinForestSet>,
    pub families: Vec<Option<AtomFamily>>,
    pub measures: Vec<Option<AtomMeasure>>,
}

impl Analysis {
    pub fn compute(graph: Digraph, cap: usize) -> Result<Self> {
        let census = ForestCensus::compute(&graph, cap)?;
        let phi = census.phi();
        let n = graph.vertex_count();
        let tilde: Vec<MinForestSet> = (0..=n).map(|k| census.minimal(k)).collect();
        let mut families = vec![None; n + 1];
        let mut measures = vec![None; n + 1];
        for k in 1..=n {
            if tilde[k].is_empty() {
                continue;
            }
            let fam = atoms(&graph, k, &tilde[k])?;
            measures[k] = Some(measure(&graph, &tilde[k], &fam));
            families[k] = Some(fam);
        }
        Ok(Analysis {
            graph,
            census,
            phi,
            tilde,
            families,
            measures,
        })
    }

    pub fn n(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn feasible_levels(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=self.n()).filter(|&k| self.phi.is_feasible(k))
    }

    pub fn family(&self, k: usize) -> Option<&AtomFamily> {
        self.families.get(k).and_then(Option::as_ref)
    }

    pub fn measure(&self, k: usize) -> Option<&AtomMeasure> {
        self.measures.get(k).and_then(Option::as_ref)
    }

    /// Minimal forests at `k`; empty outside `1..=N` or when infeasible.
    pub fn minimal(&self, k: usize) -> &[crate::forest::Forest] {
        self.tilde.get(k).map_or(&[], |t| &t.forests)
    }
}
