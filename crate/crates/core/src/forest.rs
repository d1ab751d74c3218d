//! Spanning entering forests encoded as out-arc assignments.
//!
//! Every vertex has at most one outgoing arc; vertices without one are roots.
//! Arcs point towards the roots, so `subtree(i)` is the set of vertices whose
//! root path passes through `i`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{ArcView, Digraph};
use crate::vset::VertexSet;
use crate::weight::Rational;

/// A raw out-arc assignment that may or may not be acyclic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OutArcMap(Vec<Option<usize>>);

impl OutArcMap {
    pub fn empty(n: usize) -> Self {
        OutArcMap(vec![None; n])
    }

    pub fn from_vec(out: Vec<Option<usize>>) -> Self {
        OutArcMap(out)
    }

    /// Builds a map from named `src -> dst` pairs, rejecting unknown names.
    pub fn from_names(graph: &Digraph, arcs: &[(&str, &str)]) -> Result<Self> {
        let mut out = vec![None; graph.vertex_count()];
        for &(s, d) in arcs {
            out[graph.vertex(s)?] = Some(graph.vertex(d)?);
        }
        Ok(OutArcMap(out))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, v: usize) -> Option<usize> {
        self.0[v]
    }

    pub fn set(&mut self, v: usize, target: Option<usize>) {
        self.0[v] = target;
    }

    pub fn as_slice(&self) -> &[Option<usize>] {
        &self.0
    }

    /// No directed contour.
    pub fn is_acyclic(&self) -> bool {
        let n = self.0.len();
        // 0 = unvisited, 1 = on current path, 2 = known to reach a root
        let mut state = vec![0u8; n];
        for start in 0..n {
            if state[start] != 0 {
                continue;
            }
            let mut path = Vec::new();
            let mut v = start;
            loop {
                match state[v] {
                    1 => return false,
                    2 => break,
                    _ => {}
                }
                state[v] = 1;
                path.push(v);
                match self.0[v] {
                    Some(t) if t < n => v = t,
                    _ => break,
                }
            }
            for p in path {
                state[p] = 2;
            }
        }
        true
    }

    /// Vertices visited from `v` along out-arcs, stopping at a root or at
    /// the first repeated vertex.
    pub fn path_from(&self, v: usize) -> Vec<usize> {
        let mut seen = VertexSet::EMPTY;
        let mut path = Vec::new();
        let mut cur = Some(v);
        while let Some(u) = cur {
            if seen.contains(u) {
                break;
            }
            seen.insert(u);
            path.push(u);
            cur = self.0[u];
        }
        path
    }
}

impl ArcView for OutArcMap {
    fn vertex_count(&self) -> usize {
        self.0.len()
    }

    fn arc_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter_map(|(i, t)| t.map(|j| (i, j)))
    }
}

/// A spanning entering forest.
///
/// Values are immutable and ordered canonically: lexicographically over
/// vertices, with a vertex's target index compared as `∞` when it is a root.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Forest {
    out: Vec<Option<usize>>,
}

impl Ord for Forest {
    fn cmp(&self, other: &Self) -> Ordering {
        let key = |t: &Option<usize>| t.unwrap_or(usize::MAX);
        self.out
            .iter()
            .map(key)
            .cmp(other.out.iter().map(key))
    }
}

impl PartialOrd for Forest {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.arc_pairs().map(|(i, j)| format!("{i}->{j}")))
            .finish()
    }
}

impl Forest {
    /// The arcless forest: every vertex is a root.
    pub fn empty(n: usize) -> Self {
        Forest { out: vec![None; n] }
    }

    /// Validates `map` against `graph`: every arc must exist and there must
    /// be no contour.
    pub fn new(graph: &Digraph, map: OutArcMap) -> Result<Self> {
        if map.len() != graph.vertex_count() {
            return Err(Error::UnknownVertex(format!(
                "map covers {} vertices, graph has {}",
                map.len(),
                graph.vertex_count()
            )));
        }
        check_arcs(graph, &map)?;
        if !map.is_acyclic() {
            return Err(Error::NotAForest);
        }
        Ok(Forest { out: map.0 })
    }

    pub fn from_names(graph: &Digraph, arcs: &[(&str, &str)]) -> Result<Self> {
        Forest::new(graph, OutArcMap::from_names(graph, arcs)?)
    }

    /// Accepts any acyclic map without a parent graph (used for quotients).
    pub fn from_acyclic(map: OutArcMap) -> Result<Self> {
        if !map.is_acyclic() {
            return Err(Error::NotAForest);
        }
        Ok(Forest { out: map.0 })
    }

    pub(crate) fn from_raw(out: Vec<Option<usize>>) -> Self {
        debug_assert!(OutArcMap(out.clone()).is_acyclic());
        Forest { out }
    }

    pub fn len(&self) -> usize {
        self.out.len()
    }

    pub fn is_empty(&self) -> bool {
        self.out.is_empty()
    }

    pub fn out_arc(&self, v: usize) -> Option<usize> {
        self.out[v]
    }

    pub fn to_map(&self) -> OutArcMap {
        OutArcMap(self.out.clone())
    }

    pub fn roots(&self) -> VertexSet {
        self.out
            .iter()
            .enumerate()
            .filter(|(_, t)| t.is_none())
            .map(|(v, _)| v)
            .collect()
    }

    /// Number of trees.
    pub fn root_count(&self) -> usize {
        self.out.iter().filter(|t| t.is_none()).count()
    }

    pub fn non_roots(&self) -> VertexSet {
        VertexSet::full(self.out.len()) - self.roots()
    }

    pub fn root_of(&self, mut v: usize) -> usize {
        while let Some(t) = self.out[v] {
            v = t;
        }
        v
    }

    /// Vertices on the path from `v` to its root, `v` included.
    pub fn reach(&self, mut v: usize) -> VertexSet {
        let mut s = VertexSet::singleton(v);
        while let Some(t) = self.out[v] {
            s.insert(t);
            v = t;
        }
        s
    }

    /// Everything reachable from some vertex of `s`.
    pub fn reach_set(&self, s: VertexSet) -> VertexSet {
        s.iter().fold(VertexSet::EMPTY, |acc, v| acc | self.reach(v))
    }

    /// Does some vertex of `from` reach some vertex of `to`?
    pub fn reaches(&self, from: VertexSet, to: VertexSet) -> bool {
        self.reach_set(from).intersects(to)
    }

    /// The inclusion-maximal subtree rooted at `i`: all vertices whose root
    /// path passes through `i`.
    pub fn subtree(&self, i: usize) -> VertexSet {
        (0..self.out.len())
            .filter(|&v| self.reach(v).contains(i))
            .collect()
    }

    /// Vertex set of the tree containing `v`.
    pub fn tree_of(&self, v: usize) -> VertexSet {
        self.subtree(self.root_of(v))
    }

    /// Vertex sets of the trees, ordered by smallest member.
    pub fn components(&self) -> Vec<VertexSet> {
        let n = self.out.len();
        let mut by_root: Vec<VertexSet> = vec![VertexSet::EMPTY; n];
        for v in 0..n {
            by_root[self.root_of(v)].insert(v);
        }
        let mut blocks: Vec<VertexSet> = by_root.into_iter().filter(|s| !s.is_empty()).collect();
        blocks.sort_by_key(|s| VertexSet::min(*s));
        blocks
    }

    /// Per-vertex index into [`Self::components`].
    pub fn component_labels(&self) -> Vec<usize> {
        let comps = self.components();
        let mut label = vec![0; self.out.len()];
        for (c, s) in comps.iter().enumerate() {
            for v in s.iter() {
                label[v] = c;
            }
        }
        label
    }

    /// Is the induced subgraph on `s` a tree? Restrictions of a forest are
    /// forests, so this reduces to counting internal arcs.
    pub fn is_tree_on(&self, s: VertexSet) -> bool {
        if s.is_empty() {
            return false;
        }
        let internal = s
            .iter()
            .filter(|&v| matches!(self.out[v], Some(t) if s.contains(t)))
            .count();
        internal + 1 == s.len()
    }

    /// Number of components of the induced subgraph on `s`.
    pub fn component_count_on(&self, s: VertexSet) -> usize {
        s.iter()
            .filter(|&v| !matches!(self.out[v], Some(t) if s.contains(t)))
            .count()
    }

    /// `F|_S` as a raw map: arcs leaving `s` are dropped, outside vertices
    /// are blank. Used to compare restrictions of different forests.
    pub fn restricted_map(&self, s: VertexSet) -> Vec<Option<usize>> {
        (0..self.out.len())
            .map(|v| match self.out[v] {
                Some(t) if s.contains(v) && s.contains(t) => Some(t),
                _ => None,
            })
            .collect()
    }

    /// Out-arcs from `s` agree with `other`'s.
    pub fn same_out_arcs_on(&self, other: &Forest, s: VertexSet) -> bool {
        s.iter().all(|v| self.out[v] == other.out[v])
    }

    /// Number of vertices of `s` that have an out-arc.
    pub fn out_arc_count_on(&self, s: VertexSet) -> usize {
        s.iter().filter(|&v| self.out[v].is_some()).count()
    }

    pub(crate) fn scaled_weight_on(&self, graph: &Digraph, s: VertexSet) -> i128 {
        s.iter()
            .filter_map(|v| self.out[v].map(|t| graph.scaled_weight(v, t)))
            .sum()
    }

    pub(crate) fn scaled_weight(&self, graph: &Digraph) -> i128 {
        self.out
            .iter()
            .enumerate()
            .filter_map(|(v, t)| t.map(|t| graph.scaled_weight(v, t)))
            .sum()
    }

    /// Total weight of arcs leaving vertices of `s`.
    pub fn weight_on(&self, graph: &Digraph, s: VertexSet) -> Rational {
        graph.unscale(self.scaled_weight_on(graph, s))
    }

    pub fn weight(&self, graph: &Digraph) -> Rational {
        graph.unscale(self.scaled_weight(graph))
    }

    pub fn named_arcs(&self, graph: &Digraph) -> Vec<(String, String)> {
        self.arc_pairs()
            .map(|(i, j)| (graph.name(i).to_string(), graph.name(j).to_string()))
            .collect()
    }

    /// `{b->a, a->c}` rendering.
    pub fn display(&self, graph: &Digraph) -> String {
        let arcs: Vec<String> = self
            .arc_pairs()
            .map(|(i, j)| format!("{}->{}", graph.name(i), graph.name(j)))
            .collect();
        format!("{{{}}}", arcs.join(", "))
    }
}

impl ArcView for Forest {
    fn vertex_count(&self) -> usize {
        self.out.len()
    }

    fn arc_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out
            .iter()
            .enumerate()
            .filter_map(|(i, t)| t.map(|j| (i, j)))
    }
}

fn check_arcs(graph: &Digraph, map: &OutArcMap) -> Result<()> {
    let n = graph.vertex_count();
    for (i, j) in map.arc_pairs() {
        if j >= n {
            return Err(Error::UnknownVertex(format!("index {j}")));
        }
        if !graph.has_arc(i, j) {
            return Err(Error::MissingArc {
                from: graph.name(i).to_string(),
                to: graph.name(j).to_string(),
            });
        }
    }
    Ok(())
}

/// Does `candidate` describe a forest of `graph`? Arcs absent from the graph
/// or indices out of range are input errors.
pub fn is_forest(candidate: &OutArcMap, graph: &Digraph) -> Result<bool> {
    if candidate.len() != graph.vertex_count() {
        return Err(Error::UnknownVertex(format!(
            "map covers {} vertices, graph has {}",
            candidate.len(),
            graph.vertex_count()
        )));
    }
    check_arcs(graph, candidate)?;
    Ok(candidate.is_acyclic())
}

/// `F` with the out-arcs of `d` taken from `G`. The result is not validated.
pub fn replace_arcs(f: &Forest, g: &Forest, d: VertexSet) -> OutArcMap {
    OutArcMap(
        (0..f.len())
            .map(|v| if d.contains(v) { g.out[v] } else { f.out[v] })
            .collect(),
    )
}

/// Sufficient condition for `replace_arcs(f, g, d)` to be a forest: in `f`,
/// the tails of arcs entering `d` are unreachable from the heads of `g`'s
/// arcs leaving `d`.
pub fn lemma1_guard(f: &Forest, g: &Forest, d: VertexSet) -> bool {
    let entering = f.in_neighborhood(d);
    let leaving = g.out_neighborhood(d);
    !f.reaches(leaving, entering)
}

/// The smallest-index vertex of `b` from which no other vertex of `b` is
/// reachable. `None` only for an empty `b`.
pub fn find_non_reaching(forest: &Forest, b: VertexSet) -> Option<usize> {
    b.iter().find(|&beta| !forest.reach(beta).intersects(b.without(beta)))
}
