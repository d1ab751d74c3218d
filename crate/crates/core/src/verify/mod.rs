//! Executable checks of the structural statements about minimal forests and
//! their atoms, run against the exact enumeration.
//!
//! Checks that quantify over single forests run over the complete minimal
//! set. Checks over pairs of forests, or that search for a forest per input
//! forest, run over a deterministic sample bounded by [`VerifyOptions`].

mod forests;
mod global;
mod levels;
pub mod report;

use serde::{Deserialize, Serialize};

use crate::analysis::Analysis;
use crate::enumerate::{all_forests, DEFAULT_CAP};
use crate::error::Result;
use crate::forest::{Forest, OutArcMap};
use crate::graph::Digraph;

pub use report::{
    Exhibit, GraphEcho, Outcome, StatementId, StatementResult, VerificationReport, Witness,
};

/// Deliberate corruptions of the oracle, used to exercise the failure path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fault {
    /// Fuse the first two atoms of the first level that has two.
    MergeAtoms,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub cap: usize,
    /// Highest level to check; `None` checks every level.
    pub upto: Option<usize>,
    /// Forests per level fed to the search-type checks.
    pub pool: usize,
    /// Forest pairs per level fed to the pairwise checks.
    pub pair_budget: usize,
    /// Largest `N` for which checks enumerate every spanning forest.
    pub exhaustive_limit: usize,
    pub witness_limit: usize,
    pub exhibit_limit: usize,
    pub fault: Option<Fault>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            cap: DEFAULT_CAP,
            upto: None,
            pool: 64,
            pair_budget: 1024,
            exhaustive_limit: 6,
            witness_limit: 4,
            exhibit_limit: 8,
            fault: None,
        }
    }
}

pub fn verify(graph: &Digraph, opts: &VerifyOptions) -> Result<VerificationReport> {
    let analysis = Analysis::compute(graph.clone(), opts.cap)?;
    Ok(verify_analysis(&analysis, opts))
}

pub fn verify_upto(graph: &Digraph, upto_k: usize, opts: &VerifyOptions) -> Result<VerificationReport> {
    let opts = VerifyOptions {
        upto: Some(upto_k),
        ..opts.clone()
    };
    verify(graph, &opts)
}

/// Re-runs the checks on the graph stored in `w`, with the fault it was
/// recorded under; `true` when its statement fails again.
pub fn replay_witness(w: &Witness, opts: &VerifyOptions) -> Result<bool> {
    let graph = w.graph.to_digraph()?;
    let opts = VerifyOptions {
        fault: w.fault,
        ..opts.clone()
    };
    Ok(verify(&graph, &opts)?.get(w.statement).failures > 0)
}

pub fn verify_analysis(analysis: &Analysis, opts: &VerifyOptions) -> VerificationReport {
    let corrupted;
    let analysis = match opts.fault {
        Some(fault) => {
            corrupted = inject(analysis, fault);
            &corrupted
        }
        None => analysis,
    };
    let mut cx = Ctx::new(analysis, opts);
    global::convexity(&mut cx);
    forests::run(&mut cx);
    levels::run(&mut cx);
    global::run(&mut cx);
    cx.report.graphs = 1;
    cx.report
}

fn inject(analysis: &Analysis, fault: Fault) -> Analysis {
    let mut bad = analysis.clone();
    match fault {
        Fault::MergeAtoms => {
            if let Some(k) = (1..=bad.n()).find(|&k| bad.family(k).is_some_and(|f| f.len() >= 2)) {
                let fam = bad.families[k].as_ref().expect("checked above").with_merged(0, 1);
                bad.measures[k] = Some(crate::atoms::measure(&bad.graph, &bad.tilde[k], &fam));
                bad.families[k] = Some(fam);
            }
        }
    }
    bad
}

/// Shared state of one verification run.
pub(crate) struct Ctx<'a> {
    pub a: &'a Analysis,
    pub opts: &'a VerifyOptions,
    pub report: VerificationReport,
    all: Option<Vec<Forest>>,
    /// Hypothesis outcome per level, filled by the level checks.
    pub hypothesis: Vec<Option<bool>>,
}

impl<'a> Ctx<'a> {
    fn new(a: &'a Analysis, opts: &'a VerifyOptions) -> Self {
        Ctx {
            a,
            opts,
            report: VerificationReport::new(),
            all: None,
            hypothesis: vec![None; a.n() + 1],
        }
    }

    pub fn g(&self) -> &'a Digraph {
        &self.a.graph
    }

    pub fn top(&self) -> usize {
        self.opts.upto.map_or(self.a.n(), |u| u.min(self.a.n()))
    }

    /// Feasible levels within the checked range.
    pub fn levels(&self) -> Vec<usize> {
        (1..=self.top()).filter(|&k| self.a.phi.is_feasible(k)).collect()
    }

    pub fn strict(&self, k: usize) -> bool {
        self.a.phi.is_strict(k)
    }

    pub fn check(
        &mut self,
        id: StatementId,
        k: Option<usize>,
        ok: bool,
        build: impl FnOnce(Witness) -> Witness,
    ) {
        let graph = self.g();
        let limit = self.opts.witness_limit;
        let fault = self.opts.fault;
        let r = self.report.entry(id);
        if ok {
            r.checked += 1;
        } else {
            r.failures += 1;
            if r.witnesses.len() < limit {
                let mut w = build(Witness::new(id, k, graph));
                w.fault = fault;
                r.witnesses.push(w);
            }
        }
    }

    pub fn not_applicable(&mut self, id: StatementId, k: usize) {
        let r = self.report.entry(id);
        r.not_applicable += 1;
        r.not_applicable_levels.insert(k);
    }

    /// Is `map` a minimal forest with `k` trees?
    pub fn is_minimal(&self, map: &OutArcMap, k: usize) -> bool {
        if !map.is_acyclic() {
            return false;
        }
        let f = Forest::from_raw(map.as_slice().to_vec());
        f.root_count() == k && Some(f.scaled_weight(self.g())) == self.a.census.min_scaled(k)
    }

    /// Every spanning forest, when `N` is small enough.
    pub fn all_forests(&mut self) -> Option<&[Forest]> {
        if self.a.n() > self.opts.exhaustive_limit {
            return None;
        }
        if self.all.is_none() {
            self.all = Some(all_forests(self.g(), self.opts.cap).ok()?);
        }
        self.all.as_deref()
    }
}

/// At most `budget` indices spread evenly over `0..len`.
pub(crate) fn sample(len: usize, budget: usize) -> Vec<usize> {
    if len <= budget {
        (0..len).collect()
    } else {
        let budget = budget.max(1);
        (0..budget).map(|i| i * len / budget).collect()
    }
}

/// Ordered pairs from `0..a` × `0..b`, at most about `budget` of them.
pub(crate) fn sample_pairs(a: usize, b: usize, budget: usize) -> Vec<(usize, usize)> {
    if a.saturating_mul(b) <= budget {
        return (0..a).flat_map(|i| (0..b).map(move |j| (i, j))).collect();
    }
    let side = ((budget as f64).sqrt() as usize).max(1);
    let xs = sample(a, side);
    let ys = sample(b, side);
    xs.iter().flat_map(|&i| ys.iter().map(move |&j| (i, j))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weight::Rational;

    fn int(v: i128) -> Rational {
        Rational::from_integer(v)
    }

    pub(crate) fn g_ato() -> Digraph {
        Digraph::from_arcs(
            &["a", "b", "c", "d"],
            &[
                ("b", "a", int(1)),
                ("a", "c", int(2)),
                ("b", "d", int(2)),
                ("c", "b", int(3)),
            ],
        )
        .unwrap()
    }

    pub(crate) fn g_woody() -> Digraph {
        Digraph::from_arcs(
            &["alpha", "beta", "gamma", "zeta", "eta", "xi"],
            &[
                ("alpha", "zeta", int(2)),
                ("zeta", "alpha", int(2)),
                ("beta", "eta", int(1)),
                ("eta", "beta", int(1)),
                ("gamma", "xi", int(2)),
                ("xi", "gamma", int(2)),
                ("beta", "gamma", int(3)),
                ("eta", "zeta", int(3)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn sampling_is_bounded_and_deterministic() {
        assert_eq!(sample(3, 10), vec![0, 1, 2]);
        let s = sample(100, 4);
        assert_eq!(s, vec![0, 25, 50, 75]);
        assert_eq!(sample_pairs(2, 2, 10).len(), 4);
        assert!(sample_pairs(100, 100, 64).len() <= 64);
    }

    #[test]
    fn ato_is_clean_and_has_the_exhibit() {
        let g = g_ato();
        let report = verify(&g, &VerifyOptions::default()).unwrap();
        assert!(report.is_clean(), "{}", report.table());
        assert!(report.get(StatementId::T5).checked > 0);
        assert_eq!(report.get(StatementId::T7).outcome(), Outcome::NotApplicable);
        let ex = report
            .exhibits
            .iter()
            .find(|e| e.forest_level == 1 && e.atom_level == 3)
            .expect("exhibit");
        assert_eq!(ex.atom, vec!["a".to_string(), "b".to_string()]);
        assert_eq!(ex.components, 2);
    }

    #[test]
    fn woody_is_clean() {
        let report = verify(&g_woody(), &VerifyOptions::default()).unwrap();
        assert!(report.is_clean(), "{}", report.table());
        assert!(report.get(StatementId::L4).checked + report.get(StatementId::T3).checked > 0);
    }

    #[test]
    fn merged_atoms_are_caught() {
        let opts = VerifyOptions {
            fault: Some(Fault::MergeAtoms),
            ..VerifyOptions::default()
        };
        let report = verify(&g_ato(), &opts).unwrap();
        assert!(!report.is_clean());
        let w = report.witnesses().next().unwrap();
        assert_eq!(w.fault, Some(Fault::MergeAtoms));
    }

    #[test]
    fn upto_limits_levels() {
        let report = verify_upto(&g_ato(), 1, &VerifyOptions::default()).unwrap();
        assert!(report.is_clean());
        assert_eq!(report.get(StatementId::P5).checked, 0);
    }
}
