//! Weighted digraphs with exact weights, induced subgraphs and arc
//! neighbourhoods.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_traits::One;

use crate::error::{Error, Result};
use crate::vset::{VertexSet, MAX_VERTICES};
use crate::weight::{common_denominator, scale_to, Rational};

/// Anything that can be seen as a set of arcs over dense vertex indices.
pub trait ArcView {
    /// Number of vertices of the ambient vertex set.
    fn vertex_count(&self) -> usize;

    fn arc_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_;

    /// Heads of arcs whose tail is in `s` and whose head is not.
    fn out_neighborhood(&self, s: VertexSet) -> VertexSet {
        self.arc_pairs()
            .filter(|&(i, j)| s.contains(i) && !s.contains(j))
            .map(|(_, j)| j)
            .collect()
    }

    /// Tails of arcs whose head is in `s` and whose tail is not.
    fn in_neighborhood(&self, s: VertexSet) -> VertexSet {
        self.arc_pairs()
            .filter(|&(i, j)| !s.contains(i) && s.contains(j))
            .map(|(i, _)| i)
            .collect()
    }

    /// Induced subgraph on `s`: every arc with both ends in `s`.
    fn restrict(&self, s: VertexSet) -> Subgraph {
        Subgraph {
            vertices: s,
            arcs: self
                .arc_pairs()
                .filter(|&(i, j)| s.contains(i) && s.contains(j))
                .collect(),
        }
    }
}

/// An arc subset living on a vertex subset of some parent graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgraph {
    pub vertices: VertexSet,
    pub arcs: Vec<(usize, usize)>,
}

impl Subgraph {
    /// Weakly connected components of the subgraph, ordered by smallest member.
    pub fn components(&self) -> Vec<VertexSet> {
        let verts: Vec<usize> = self.vertices.iter().collect();
        let mut label: HashMap<usize, usize> = verts.iter().map(|&v| (v, v)).collect();
        fn find(label: &mut HashMap<usize, usize>, v: usize) -> usize {
            let mut r = v;
            while label[&r] != r {
                r = label[&r];
            }
            label.insert(v, r);
            r
        }
        for &(i, j) in &self.arcs {
            let (a, b) = (find(&mut label, i), find(&mut label, j));
            if a != b {
                label.insert(a.max(b), a.min(b));
            }
        }
        let mut blocks: Vec<VertexSet> = Vec::new();
        let mut root_slot: HashMap<usize, usize> = HashMap::new();
        for &v in &verts {
            let r = find(&mut label, v);
            let slot = *root_slot.entry(r).or_insert_with(|| {
                blocks.push(VertexSet::EMPTY);
                blocks.len() - 1
            });
            blocks[slot].insert(v);
        }
        blocks
    }

    /// At most one out-arc per vertex and no directed cycle.
    pub fn is_forest(&self) -> bool {
        let mut out: HashMap<usize, usize> = HashMap::new();
        for &(i, j) in &self.arcs {
            if out.insert(i, j).is_some() {
                return false;
            }
        }
        for &start in out.keys() {
            let mut v = start;
            let mut steps = 0;
            while let Some(&next) = out.get(&v) {
                steps += 1;
                if next == start || steps > out.len() {
                    return false;
                }
                v = next;
            }
        }
        true
    }

    /// A forest on a non-empty vertex set with a single component.
    pub fn is_tree(&self) -> bool {
        !self.vertices.is_empty()
            && self.is_forest()
            && self.arcs.len() + 1 == self.vertices.len()
    }
}

impl ArcView for Subgraph {
    fn vertex_count(&self) -> usize {
        self.vertices.iter().last().map_or(0, |v| v + 1)
    }

    fn arc_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.arcs.iter().copied()
    }
}

/// Weighted digraph over vertices `0..N` with external string names.
///
/// Weights are exact rationals; internally they are also kept as integers
/// over a common denominator so forest weights can be summed cheaply.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    out: Vec<Vec<(usize, Rational)>>,
    scale: i128,
    scaled: Vec<i128>,
}

/// Outcome of inserting an arc into a [`DigraphBuilder`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcInsert {
    New,
    /// A parallel arc already existed; the smaller weight was kept.
    Duplicate { kept: Rational },
}

#[derive(Debug, Default, Clone)]
pub struct DigraphBuilder {
    names: Vec<String>,
    index: HashMap<String, usize>,
    arcs: HashMap<(usize, usize), Rational>,
}

impl DigraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares a vertex (idempotent) and returns its index.
    pub fn add_vertex(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), i);
        i
    }

    pub fn add_arc(&mut self, src: &str, dst: &str, weight: Rational) -> Result<ArcInsert> {
        if src == dst {
            return Err(Error::SelfLoop(src.to_string()));
        }
        let i = self.add_vertex(src);
        let j = self.add_vertex(dst);
        match self.arcs.get_mut(&(i, j)) {
            Some(w) => {
                if weight < *w {
                    *w = weight;
                }
                Ok(ArcInsert::Duplicate { kept: *w })
            }
            None => {
                self.arcs.insert((i, j), weight);
                Ok(ArcInsert::New)
            }
        }
    }

    pub fn build(self) -> Result<Digraph> {
        let n = self.names.len();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices(n));
        }
        let mut out = vec![Vec::new(); n];
        for (&(i, j), &w) in &self.arcs {
            out[i].push((j, w));
        }
        for list in &mut out {
            list.sort_by_key(|&(j, _)| j);
        }
        let scale = common_denominator(self.arcs.values()).ok_or(Error::WeightOverflow)?;
        // Sums of up to 64 scaled weights must stay representable.
        let limit = i128::MAX >> 7;
        let mut scaled = vec![0i128; n * n];
        for (&(i, j), w) in &self.arcs {
            let s = scale_to(w, scale).ok_or(Error::WeightOverflow)?;
            if s.abs() > limit {
                return Err(Error::WeightOverflow);
            }
            scaled[i * n + j] = s;
        }
        Ok(Digraph {
            names: self.names,
            index: self.index,
            out,
            scale,
            scaled,
        })
    }
}

impl Digraph {
    pub fn builder() -> DigraphBuilder {
        DigraphBuilder::new()
    }

    /// Builds a graph from declared vertex names (in index order) and arcs.
    pub fn from_arcs(vertices: &[&str], arcs: &[(&str, &str, Rational)]) -> Result<Digraph> {
        let mut b = DigraphBuilder::new();
        for v in vertices {
            b.add_vertex(v);
        }
        for &(s, d, w) in arcs {
            b.add_arc(s, d, w)?;
        }
        b.build()
    }

    /// Graph on `n` vertices named `0..n` with integer arc weights.
    pub fn from_indexed(n: usize, arcs: &[(usize, usize, i64)]) -> Result<Digraph> {
        let mut b = DigraphBuilder::new();
        for v in 0..n {
            b.add_vertex(&v.to_string());
        }
        for &(s, d, w) in arcs {
            b.add_arc(&s.to_string(), &d.to_string(), Rational::from_integer(i128::from(w)))?;
        }
        b.build()
    }

    /// Ingests a matrix of transition exponents `V_ij` (the rates behave like
    /// `exp(-V_ij / eps)`) as arc weights. `None` marks an absent transition;
    /// the diagonal is ignored.
    pub fn from_quasi_potentials(
        names: &[&str],
        matrix: &[Vec<Option<Rational>>],
    ) -> Result<Digraph> {
        let mut b = DigraphBuilder::new();
        for v in names {
            b.add_vertex(v);
        }
        for (i, row) in matrix.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                if i == j {
                    continue;
                }
                if let Some(w) = entry {
                    let (src, dst) = (
                        names.get(i).ok_or_else(|| Error::UnknownVertex(format!("row {i}")))?,
                        names.get(j).ok_or_else(|| Error::UnknownVertex(format!("column {j}")))?,
                    );
                    b.add_arc(src, dst, *w)?;
                }
            }
        }
        b.build()
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn all(&self) -> VertexSet {
        VertexSet::full(self.names.len())
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn vertex(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn vertex_set<S: AsRef<str>>(&self, names: &[S]) -> Result<VertexSet> {
        names.iter().map(|n| self.vertex(n.as_ref())).collect()
    }

    pub fn set_names(&self, s: VertexSet) -> Vec<String> {
        s.iter().map(|v| self.names[v].clone()).collect()
    }

    /// `{a,b,c}` rendering of a vertex set.
    pub fn format_set(&self, s: VertexSet) -> String {
        let mut out = String::from("{");
        for (n, v) in s.iter().enumerate() {
            if n > 0 {
                out.push(',');
            }
            let _ = write!(out, "{}", self.names[v]);
        }
        out.push('}');
        out
    }

    pub fn out_arcs(&self, v: usize) -> &[(usize, Rational)] {
        &self.out[v]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out[v].len()
    }

    pub fn arc_weight(&self, i: usize, j: usize) -> Option<Rational> {
        self.out[i]
            .binary_search_by_key(&j, |&(t, _)| t)
            .ok()
            .map(|k| self.out[i][k].1)
    }

    pub fn has_arc(&self, i: usize, j: usize) -> bool {
        self.arc_weight(i, j).is_some()
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize, Rational)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(i, list)| list.iter().map(move |&(j, w)| (i, j, w)))
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    /// Common denominator of all weights.
    #[cfg(test)]
    pub(crate) fn scale(&self) -> i128 {
        self.scale
    }

    /// Weight of arc `i -> j` multiplied by the common denominator. The arc must exist.
    #[inline]
    pub(crate) fn scaled_weight(&self, i: usize, j: usize) -> i128 {
        self.scaled[i * self.names.len() + j]
    }

    pub(crate) fn unscale(&self, v: i128) -> Rational {
        Rational::new(v, self.scale)
    }

    /// Every arc has weight exactly 1.
    pub fn is_unit_weighted(&self) -> bool {
        self.arcs().all(|(_, _, w)| w.is_one())
    }

    /// Every arc has a reverse arc of equal weight.
    pub fn is_symmetric(&self) -> bool {
        self.first_asymmetry().is_none()
    }

    pub fn first_asymmetry(&self) -> Option<(usize, usize)> {
        self.arcs()
            .find(|&(i, j, w)| self.arc_weight(j, i) != Some(w))
            .map(|(i, j, _)| (i, j))
    }

    /// Undirected version: each arc pair gets the smaller of the two weights
    /// (or the single weight when only one direction is present).
    pub fn symmetrized(&self) -> Digraph {
        let mut b = DigraphBuilder::new();
        for name in &self.names {
            b.add_vertex(name);
        }
        for (i, j, w) in self.arcs() {
            let w = match self.arc_weight(j, i) {
                Some(r) if r < w => r,
                _ => w,
            };
            let _ = b.add_arc(&self.names[i], &self.names[j], w);
            let _ = b.add_arc(&self.names[j], &self.names[i], w);
        }
        b.build().expect("symmetrizing a valid graph cannot fail")
    }
}

impl ArcView for Digraph {
    fn vertex_count(&self) -> usize {
        self.names.len()
    }

    fn arc_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.arcs().map(|(i, j, _)| (i, j))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i128) -> Rational {
        Rational::from_integer(v)
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

    #[test]
    fn self_loops_are_rejected() {
        let mut b = Digraph::builder();
        assert!(matches!(b.add_arc("x", "x", int(1)), Err(Error::SelfLoop(_))));
    }

    #[test]
    fn parallel_arcs_keep_minimum() {
        let mut b = Digraph::builder();
        assert_eq!(b.add_arc("x", "y", int(5)).unwrap(), ArcInsert::New);
        assert_eq!(
            b.add_arc("x", "y", int(2)).unwrap(),
            ArcInsert::Duplicate { kept: int(2) }
        );
        assert_eq!(
            b.add_arc("x", "y", int(9)).unwrap(),
            ArcInsert::Duplicate { kept: int(2) }
        );
        let g = b.build().unwrap();
        assert_eq!(g.arc_weight(0, 1), Some(int(2)));
        assert_eq!(g.arc_count(), 1);
    }

    #[test]
    fn empty_graph_is_an_error() {
        assert!(matches!(Digraph::builder().build(), Err(Error::EmptyGraph)));
    }

    #[test]
    fn neighbourhood_of_sink() {
        let g = g_ato();
        let d = g.vertex_set(&["d"]).unwrap();
        assert!(g.out_neighborhood(d).is_empty());
        assert_eq!(g.in_neighborhood(d), g.vertex_set(&["b"]).unwrap());
    }

    #[test]
    fn neighbourhood_without_boundary_arcs() {
        let g = g_ato();
        assert!(g.out_neighborhood(g.all()).is_empty());
        assert!(g.in_neighborhood(g.all()).is_empty());
    }

    #[test]
    fn fractional_weights_share_a_scale() {
        let g = Digraph::from_arcs(
            &["u", "v"],
            &[("u", "v", Rational::new(1, 3)), ("v", "u", Rational::new(1, 4))],
        )
        .unwrap();
        assert_eq!(g.scale(), 12);
        assert_eq!(g.scaled_weight(0, 1), 4);
        assert_eq!(g.unscale(7), Rational::new(7, 12));
    }

    #[test]
    fn symmetrize_takes_minimum() {
        let g = Digraph::from_arcs(
            &["u", "v", "w"],
            &[("u", "v", int(3)), ("v", "u", int(1)), ("v", "w", int(2))],
        )
        .unwrap();
        assert!(!g.is_symmetric());
        let s = g.symmetrized();
        assert!(s.is_symmetric());
        assert_eq!(s.arc_weight(0, 1), Some(int(1)));
        assert_eq!(s.arc_weight(2, 1), Some(int(2)));
    }

    #[test]
    fn quasi_potential_matrix() {
        let m = vec![
            vec![None, Some(int(2))],
            vec![Some(int(5)), Some(int(100))],
        ];
        let g = Digraph::from_quasi_potentials(&["x", "y"], &m).unwrap();
        assert_eq!(g.arc_count(), 2);
        assert_eq!(g.arc_weight(1, 0), Some(int(5)));
    }

    #[test]
    fn subgraph_tree_checks() {
        let s = Subgraph {
            vertices: [0, 1, 2].into_iter().collect(),
            arcs: vec![(0, 2), (2, 1)],
        };
        assert!(s.is_forest());
        assert!(s.is_tree());
        assert_eq!(s.components().len(), 1);
        let cyc = Subgraph {
            vertices: [0, 1].into_iter().collect(),
            arcs: vec![(0, 1), (1, 0)],
        };
        assert!(!cyc.is_forest());
    }
}
