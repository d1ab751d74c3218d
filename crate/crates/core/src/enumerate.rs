//! Exact enumeration of spanning entering forests, the sequence φ and the
//! sets of minimal forests.
//!
//! The search walks the vertices in index order; each vertex either picks one
//! of its out-arcs (in increasing target order) or becomes a root. A rollback
//! union-find over the partial assignment detects contours: an unassigned
//! vertex is the sink of its weak component, so the arc `v -> t` closes a
//! contour exactly when `t` already lies in `v`'s component. This visiting
//! order is the canonical forest order.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::forest::Forest;
use crate::graph::Digraph;
use crate::weight::ExtWeight;

/// Default upper bound on the number of vertices accepted for enumeration.
pub const DEFAULT_CAP: usize = 14;

pub(crate) fn check_cap(graph: &Digraph, cap: usize) -> Result<()> {
    let n = graph.vertex_count();
    if n > cap {
        Err(Error::CapExceeded { n, cap })
    } else {
        Ok(())
    }
}

fn check_level(graph: &Digraph, k: usize) -> Result<()> {
    let n = graph.vertex_count();
    if k == 0 || k > n {
        Err(Error::LevelOutOfRange { k, n })
    } else {
        Ok(())
    }
}

/// Union-find with union by size and an undo log; no path compression so
/// that unions can be rolled back.
struct RollbackDsu {
    parent: Vec<usize>,
    size: Vec<usize>,
    log: Vec<(usize, usize)>,
}

impl RollbackDsu {
    fn new(n: usize) -> Self {
        RollbackDsu {
            parent: (0..n).collect(),
            size: vec![1; n],
            log: Vec::new(),
        }
    }

    fn find(&self, mut v: usize) -> usize {
        while self.parent[v] != v {
            v = self.parent[v];
        }
        v
    }

    /// Merges the classes of `a` and `b`; false if they were already one.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.log.push((rb, ra));
        true
    }

    fn checkpoint(&self) -> usize {
        self.log.len()
    }

    fn rollback(&mut self, to: usize) {
        while self.log.len() > to {
            let (child, root) = self.log.pop().expect("log is non-empty");
            self.parent[child] = child;
            self.size[root] -= self.size[child];
        }
    }
}

struct Search<'g, V> {
    graph: &'g Digraph,
    n: usize,
    target_roots: Option<usize>,
    /// `forced[v]` = number of vertices `>= v` without out-arcs.
    forced: Vec<usize>,
    out: Vec<Option<usize>>,
    roots: usize,
    weight: i128,
    dsu: RollbackDsu,
    visit: V,
}

impl<V: FnMut(&[Option<usize>], usize, i128)> Search<'_, V> {
    fn new(graph: &Digraph, target_roots: Option<usize>, visit: V) -> Search<'_, V> {
        let n = graph.vertex_count();
        let mut forced = vec![0; n + 1];
        for v in (0..n).rev() {
            forced[v] = forced[v + 1] + usize::from(graph.out_degree(v) == 0);
        }
        Search {
            graph,
            n,
            target_roots,
            forced,
            out: vec![None; n],
            roots: 0,
            weight: 0,
            dsu: RollbackDsu::new(n),
            visit,
        }
    }

    fn feasible_from(&self, v: usize) -> bool {
        match self.target_roots {
            None => true,
            Some(k) => self.roots + self.forced[v] <= k && self.roots + (self.n - v) >= k,
        }
    }

    /// Applies choice `target` at vertex `v`; false if it closes a contour.
    fn push(&mut self, v: usize, target: Option<usize>) -> bool {
        match target {
            Some(t) => {
                if !self.dsu.union(v, t) {
                    return false;
                }
                self.out[v] = Some(t);
                self.weight += self.graph.scaled_weight(v, t);
            }
            None => {
                self.out[v] = None;
                self.roots += 1;
            }
        }
        true
    }

    fn pop(&mut self, v: usize, checkpoint: usize) {
        match self.out[v].take() {
            Some(t) => self.weight -= self.graph.scaled_weight(v, t),
            None => self.roots -= 1,
        }
        self.dsu.rollback(checkpoint);
    }

    fn run(&mut self, v: usize) {
        if !self.feasible_from(v) {
            return;
        }
        if v == self.n {
            (self.visit)(&self.out, self.roots, self.weight);
            return;
        }
        let graph = self.graph;
        for &(t, _) in graph.out_arcs(v) {
            let cp = self.dsu.checkpoint();
            if self.push(v, Some(t)) {
                self.run(v + 1);
                self.pop(v, cp);
            }
        }
        let cp = self.dsu.checkpoint();
        self.push(v, None);
        self.run(v + 1);
        self.pop(v, cp);
    }

    /// Runs the search below a fixed choice for vertex 0.
    fn run_branch(&mut self, first: Option<usize>) {
        if self.n == 0 {
            return;
        }
        let cp = self.dsu.checkpoint();
        if self.push(0, first) {
            self.run(1);
            self.pop(0, cp);
        }
    }
}

/// Choices for vertex 0 in canonical order.
fn first_choices(graph: &Digraph) -> Vec<Option<usize>> {
    graph
        .out_arcs(0)
        .iter()
        .map(|&(t, _)| Some(t))
        .chain(std::iter::once(None))
        .collect()
}

/// Calls `f` on every spanning forest (optionally only those with `k` trees)
/// in canonical order, sequentially.
pub fn for_each_forest(
    graph: &Digraph,
    k: Option<usize>,
    cap: usize,
    mut f: impl FnMut(&Forest, i128),
) -> Result<()> {
    check_cap(graph, cap)?;
    if let Some(k) = k {
        check_level(graph, k)?;
    }
    let mut search = Search::new(graph, k, |out: &[Option<usize>], _, w| {
        f(&Forest::from_raw(out.to_vec()), w)
    });
    search.run(0);
    Ok(())
}

/// All spanning forests with exactly `k` trees, in canonical order.
///
/// The choice space of vertex 0 is split across the rayon pool; branch
/// results are concatenated in choice order, which is the canonical order.
pub fn enumerate_forests(graph: &Digraph, k: usize, cap: usize) -> Result<Vec<Forest>> {
    check_cap(graph, cap)?;
    check_level(graph, k)?;
    let branches: Vec<Vec<Forest>> = first_choices(graph)
        .into_par_iter()
        .map(|first| {
            let mut found = Vec::new();
            let mut search = Search::new(graph, Some(k), |out: &[Option<usize>], _, _| {
                found.push(Forest::from_raw(out.to_vec()))
            });
            search.run_branch(first);
            found
        })
        .collect();
    let all: Vec<Forest> = branches.into_iter().flatten().collect();
    debug_assert!(all.windows(2).all(|w| w[0] < w[1]));
    Ok(all)
}

/// Every spanning forest regardless of component count, in canonical order.
pub fn all_forests(graph: &Digraph, cap: usize) -> Result<Vec<Forest>> {
    let mut all = Vec::new();
    for_each_forest(graph, None, cap, |f, _| all.push(f.clone()))?;
    Ok(all)
}

/// Minimal forests for some `k`: all `k`-tree forests of weight `φ^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinForestSet {
    pub k: usize,
    pub weight: ExtWeight,
    /// Canonical order; empty when `φ^k = ∞`.
    pub forests: Vec<Forest>,
}

impl MinForestSet {
    pub fn is_empty(&self) -> bool {
        self.forests.is_empty()
    }

    pub fn len(&self) -> usize {
        self.forests.len()
    }

    /// Membership test by component count and exact weight.
    pub fn admits(&self, graph: &Digraph, forest: &Forest) -> bool {
        match self.weight {
            ExtWeight::Finite(w) => forest.root_count() == self.k && forest.weight(graph) == w,
            ExtWeight::Infinite => false,
        }
    }
}

/// One pass over all spanning forests, bucketed by component count.
#[derive(Clone, Debug)]
pub struct ForestCensus {
    n: usize,
    counts: Vec<u64>,
    best: Vec<Option<i128>>,
    ties: Vec<Vec<Forest>>,
    scale_weights: Vec<ExtWeight>,
}

#[derive(Default)]
struct Bucket {
    counts: Vec<u64>,
    best: Vec<Option<i128>>,
    ties: Vec<Vec<Forest>>,
}

impl Bucket {
    fn new(n: usize) -> Self {
        Bucket {
            counts: vec![0; n + 1],
            best: vec![None; n + 1],
            ties: vec![Vec::new(); n + 1],
        }
    }

    fn record(&mut self, out: &[Option<usize>], roots: usize, weight: i128) {
        self.counts[roots] += 1;
        match self.best[roots] {
            Some(b) if weight > b => {}
            Some(b) if weight == b => self.ties[roots].push(Forest::from_raw(out.to_vec())),
            _ => {
                self.best[roots] = Some(weight);
                self.ties[roots] = vec![Forest::from_raw(out.to_vec())];
            }
        }
    }

    fn merge(mut self, other: Bucket) -> Bucket {
        for k in 0..self.counts.len() {
            self.counts[k] += other.counts[k];
            match (self.best[k], other.best[k]) {
                (_, None) => {}
                (None, Some(_)) => {
                    self.best[k] = other.best[k];
                    self.ties[k] = other.ties[k].clone();
                }
                (Some(a), Some(b)) if b < a => {
                    self.best[k] = Some(b);
                    self.ties[k] = other.ties[k].clone();
                }
                (Some(a), Some(b)) if b == a => self.ties[k].extend(other.ties[k].iter().cloned()),
                _ => {}
            }
        }
        self
    }
}

impl ForestCensus {
    pub fn compute(graph: &Digraph, cap: usize) -> Result<Self> {
        check_cap(graph, cap)?;
        let n = graph.vertex_count();
        let buckets: Vec<Bucket> = first_choices(graph)
            .into_par_iter()
            .map(|first| {
                let mut bucket = Bucket::new(n);
                let mut search = Search::new(graph, None, |out: &[Option<usize>], r, w| {
                    bucket.record(out, r, w)
                });
                search.run_branch(first);
                bucket
            })
            .collect();
        let merged = buckets
            .into_iter()
            .fold(Bucket::new(n), |acc, b| acc.merge(b));
        let scale_weights = merged
            .best
            .iter()
            .map(|b| b.map_or(ExtWeight::Infinite, |w| ExtWeight::Finite(graph.unscale(w))))
            .collect();
        Ok(ForestCensus {
            n,
            counts: merged.counts,
            best: merged.best,
            ties: merged.ties,
            scale_weights,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// `|F^k|`.
    pub fn count(&self, k: usize) -> u64 {
        self.counts.get(k).copied().unwrap_or(0)
    }

    /// `φ^k` in the graph's integer weight scale.
    pub(crate) fn min_scaled(&self, k: usize) -> Option<i128> {
        self.best.get(k).copied().flatten()
    }

    pub fn phi(&self) -> PhiSequence {
        PhiSequence::new(self.scale_weights.clone())
    }

    pub fn minimal(&self, k: usize) -> MinForestSet {
        MinForestSet {
            k,
            weight: self.scale_weights.get(k).copied().unwrap_or(ExtWeight::Infinite),
            forests: if self.best.get(k).copied().flatten().is_some() {
                self.ties[k].clone()
            } else {
                Vec::new()
            },
        }
    }
}

pub fn phi_sequence(graph: &Digraph, cap: usize) -> Result<PhiSequence> {
    Ok(ForestCensus::compute(graph, cap)?.phi())
}

pub fn minimal_forests(graph: &Digraph, k: usize, cap: usize) -> Result<MinForestSet> {
    check_level(graph, k)?;
    Ok(ForestCensus::compute(graph, cap)?.minimal(k))
}

/// Sign of the convexity inequality `φ^{k-1} − φ^k ≥ φ^k − φ^{k+1}` at `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvexityMarker {
    Strict,
    Equal,
    /// `φ^k = ∞`: both sides reduce to `∞ − ∞`.
    Undefined,
    /// The inequality fails. Never produced by a correct census.
    Violated,
}

/// `φ^0, …, φ^N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiSequence {
    values: Vec<ExtWeight>,
}

impl PhiSequence {
    /// `values[0]` is forced to `∞`.
    pub fn new(mut values: Vec<ExtWeight>) -> Self {
        if let Some(v) = values.first_mut() {
            *v = ExtWeight::Infinite;
        }
        PhiSequence { values }
    }

    pub fn n(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[ExtWeight] {
        &self.values
    }

    pub fn get(&self, k: usize) -> ExtWeight {
        self.values.get(k).copied().unwrap_or(ExtWeight::Infinite)
    }

    pub fn is_feasible(&self, k: usize) -> bool {
        k >= 1 && k <= self.n() && self.get(k).is_finite()
    }

    pub fn first_feasible(&self) -> Option<usize> {
        (1..=self.n()).find(|&k| self.is_feasible(k))
    }

    /// `Δ_k = φ^{k-1} − φ^k`, `None` when `φ^k = ∞`.
    pub fn gap(&self, k: usize) -> Option<ExtWeight> {
        if k == 0 || !self.is_feasible(k) {
            return None;
        }
        self.get(k - 1).checked_sub(&self.get(k))
    }

    pub fn marker(&self, k: usize) -> ConvexityMarker {
        let Some(left) = self.gap(k) else {
            return ConvexityMarker::Undefined;
        };
        let Some(right) = self.get(k).checked_sub(&self.get(k + 1)) else {
            return ConvexityMarker::Undefined;
        };
        match left.cmp(&right) {
            std::cmp::Ordering::Greater => ConvexityMarker::Strict,
            std::cmp::Ordering::Equal => ConvexityMarker::Equal,
            std::cmp::Ordering::Less => ConvexityMarker::Violated,
        }
    }

    /// Feasible `k` at which the strict inequality holds. `k = N` counts as
    /// strict: it closes the last run of equalities.
    pub fn is_strict(&self, k: usize) -> bool {
        self.is_feasible(k) && (k == self.n() || self.marker(k) == ConvexityMarker::Strict)
    }

    pub fn is_equal(&self, k: usize) -> bool {
        k < self.n() && self.marker(k) == ConvexityMarker::Equal
    }

    /// First `k` where convexity fails, if any.
    pub fn convexity_violation(&self) -> Option<usize> {
        (1..self.n()).find(|&k| self.marker(k) == ConvexityMarker::Violated)
    }
}

/// Markers for the interior indices `0 < k < N`.
pub fn convexity_profile(phi: &PhiSequence) -> Vec<(usize, ConvexityMarker)> {
    (1..phi.n()).map(|k| (k, phi.marker(k))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::OutArcMap;
    use crate::weight::Rational;

    fn int(v: i128) -> Rational {
        Rational::from_integer(v)
    }

    fn fin(v: i128) -> ExtWeight {
        ExtWeight::Finite(int(v))
    }

    fn g_ato() -> Digraph {
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

    /// Independent oracle: every subset of arcs, kept when it is a forest.
    fn brute_force_counts(graph: &Digraph) -> Vec<u64> {
        let arcs: Vec<(usize, usize)> = graph.arcs().map(|(i, j, _)| (i, j)).collect();
        let n = graph.vertex_count();
        let mut counts = vec![0u64; n + 1];
        for mask in 0u32..(1 << arcs.len()) {
            let mut out = vec![None; n];
            let mut ok = true;
            for (b, &(i, j)) in arcs.iter().enumerate() {
                if mask & (1 << b) != 0 {
                    if out[i].is_some() {
                        ok = false;
                        break;
                    }
                    out[i] = Some(j);
                }
            }
            if ok {
                let map = OutArcMap::from_vec(out);
                if map.is_acyclic() {
                    let roots = map.as_slice().iter().filter(|t| t.is_none()).count();
                    counts[roots] += 1;
                }
            }
        }
        counts
    }

    #[test]
    fn rollback_dsu_undo() {
        let mut d = RollbackDsu::new(4);
        let cp = d.checkpoint();
        assert!(d.union(0, 1));
        assert!(d.union(2, 1));
        assert!(!d.union(0, 2));
        d.rollback(cp);
        assert_ne!(d.find(0), d.find(1));
        assert_eq!(d.size, vec![1; 4]);
    }

    #[test]
    fn ato_enumeration() {
        let g = g_ato();
        let k4 = enumerate_forests(&g, 4, DEFAULT_CAP).unwrap();
        assert_eq!(k4, vec![Forest::empty(4)]);
        let k1 = enumerate_forests(&g, 1, DEFAULT_CAP).unwrap();
        assert_eq!(
            k1,
            vec![Forest::from_names(&g, &[("a", "c"), ("c", "b"), ("b", "d")]).unwrap()]
        );
        let oracle = brute_force_counts(&g);
        for k in 1..=4 {
            assert_eq!(enumerate_forests(&g, k, DEFAULT_CAP).unwrap().len() as u64, oracle[k]);
        }
    }

    #[test]
    fn ato_phi() {
        let phi = phi_sequence(&g_ato(), DEFAULT_CAP).unwrap();
        assert_eq!(phi.values(), &[ExtWeight::Infinite, fin(7), fin(3), fin(1), fin(0)]);
        assert_eq!(
            convexity_profile(&phi),
            vec![
                (1, ConvexityMarker::Strict),
                (2, ConvexityMarker::Strict),
                (3, ConvexityMarker::Strict)
            ]
        );
    }

    #[test]
    fn single_vertex_phi() {
        let g = Digraph::from_arcs(&["x"], &[]).unwrap();
        let phi = phi_sequence(&g, DEFAULT_CAP).unwrap();
        assert_eq!(phi.values(), &[ExtWeight::Infinite, fin(0)]);
    }

    #[test]
    fn ato_minimal_sets() {
        let g = g_ato();
        let m3 = minimal_forests(&g, 3, DEFAULT_CAP).unwrap();
        assert_eq!(m3.forests, vec![Forest::from_names(&g, &[("b", "a")]).unwrap()]);
        let m2 = minimal_forests(&g, 2, DEFAULT_CAP).unwrap();
        assert_eq!(
            m2.forests,
            vec![Forest::from_names(&g, &[("b", "a"), ("a", "c")]).unwrap()]
        );
    }

    #[test]
    fn symmetric_two_cycle_ties() {
        let g = Digraph::from_arcs(&["u", "v"], &[("u", "v", int(1)), ("v", "u", int(1))]).unwrap();
        assert_eq!(minimal_forests(&g, 1, DEFAULT_CAP).unwrap().len(), 2);
    }

    #[test]
    fn unit_weight_profile_is_equal_after_first() {
        // 0 -> 1 -> 2 -> 3 plus 3 -> 0 and a chord: spanning trees exist
        let g = Digraph::from_indexed(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1), (0, 2, 1)])
            .unwrap();
        let phi = phi_sequence(&g, DEFAULT_CAP).unwrap();
        assert_eq!(phi.values(), &[ExtWeight::Infinite, fin(3), fin(2), fin(1), fin(0)]);
        assert_eq!(phi.marker(1), ConvexityMarker::Strict);
        assert_eq!(phi.marker(2), ConvexityMarker::Equal);
        assert_eq!(phi.marker(3), ConvexityMarker::Equal);
    }

    #[test]
    fn infeasible_levels_are_undefined() {
        let g = Digraph::from_indexed(3, &[]).unwrap();
        let phi = phi_sequence(&g, DEFAULT_CAP).unwrap();
        assert_eq!(phi.first_feasible(), Some(3));
        assert_eq!(phi.marker(1), ConvexityMarker::Undefined);
        assert_eq!(phi.marker(2), ConvexityMarker::Undefined);
        assert!(phi.is_strict(3));
    }

    #[test]
    fn cap_is_enforced() {
        let g = Digraph::from_indexed(5, &[]).unwrap();
        let err = enumerate_forests(&g, 1, 4).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { n: 5, cap: 4 }));
        assert!(matches!(
            enumerate_forests(&g, 0, 14),
            Err(Error::LevelOutOfRange { .. })
        ));
    }

    #[test]
    fn census_matches_per_level_enumeration() {
        let g = Digraph::from_indexed(
            5,
            &[(0, 1, 2), (1, 0, 1), (1, 2, 3), (2, 3, 1), (3, 1, 2), (4, 3, 1), (3, 4, 2), (2, 0, 1)],
        )
        .unwrap();
        let census = ForestCensus::compute(&g, DEFAULT_CAP).unwrap();
        let oracle = brute_force_counts(&g);
        for k in 1..=5 {
            let list = enumerate_forests(&g, k, DEFAULT_CAP).unwrap();
            assert_eq!(list.len() as u64, census.count(k));
            assert_eq!(oracle[k], census.count(k));
            let best = list.iter().map(|f| f.weight(&g)).min();
            assert_eq!(census.phi().get(k).finite(), best);
            let ties: Vec<Forest> = list
                .iter()
                .filter(|f| Some(f.weight(&g)) == best)
                .cloned()
                .collect();
            assert_eq!(census.minimal(k).forests, ties);
        }
    }
}
