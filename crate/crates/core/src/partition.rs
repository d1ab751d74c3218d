//! Tree partitions of a forest and the block-level quotient forest.
//!
//! Choosing a generator set `A` that contains every root and deleting the
//! out-arcs of `A` splits the forest into `|A|` trees, one rooted at each
//! generator. Their vertex sets form the partition; contracting each block
//! gives the quotient forest on `A`.

use crate::error::{Error, Result};
use crate::forest::{Forest, OutArcMap};
use crate::graph::Digraph;
use crate::vset::VertexSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreePartition {
    generators: VertexSet,
    /// `(α, X_α)` sorted by `α`.
    blocks: Vec<(usize, VertexSet)>,
    /// Block index of each vertex.
    owner: Vec<usize>,
}

impl TreePartition {
    pub fn generators(&self) -> VertexSet {
        self.generators
    }

    pub fn blocks(&self) -> &[(usize, VertexSet)] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Index of the block containing `v`.
    pub fn block_index(&self, v: usize) -> usize {
        self.owner[v]
    }

    /// `X_α` for generator `alpha`.
    pub fn block_of_generator(&self, alpha: usize) -> Option<VertexSet> {
        self.blocks
            .binary_search_by_key(&alpha, |&(a, _)| a)
            .ok()
            .map(|i| self.blocks[i].1)
    }

    pub fn block_sets(&self) -> Vec<VertexSet> {
        self.blocks.iter().map(|&(_, s)| s).collect()
    }
}

/// Splits `forest` at the generators `a`. The name of a missing root is
/// reported through `graph` when it is given.
pub fn tree_partition(
    forest: &Forest,
    a: VertexSet,
    graph: Option<&Digraph>,
) -> Result<TreePartition> {
    let roots = forest.roots();
    if let Some(missing) = (roots - a).min() {
        let name = graph.map_or_else(|| missing.to_string(), |g| g.name(missing).to_string());
        return Err(Error::MissingRoot(name));
    }
    let n = forest.len();
    let mut cut = forest.to_map();
    for alpha in a.iter() {
        cut.set(alpha, None);
    }
    let cut = Forest::from_acyclic(cut).expect("deleting arcs keeps a forest acyclic");
    let mut owner = vec![0; n];
    let generators: Vec<usize> = a.iter().collect();
    let mut blocks: Vec<(usize, VertexSet)> =
        generators.iter().map(|&g| (g, VertexSet::EMPTY)).collect();
    for v in 0..n {
        let r = cut.root_of(v);
        let idx = generators.binary_search(&r).expect("every cut root is a generator");
        blocks[idx].1.insert(v);
        owner[v] = idx;
    }
    Ok(TreePartition {
        generators: a,
        blocks,
        owner,
    })
}

/// Contraction of `forest` along `partition`: vertex `i` of the result is the
/// `i`-th generator, with an arc `ζ -> η` when the out-arc of `ζ` lands in
/// `X_η`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    pub generators: Vec<usize>,
    pub forest: Forest,
}

impl Quotient {
    /// Position of generator `alpha` among the quotient's vertices.
    pub fn position(&self, alpha: usize) -> Option<usize> {
        self.generators.binary_search(&alpha).ok()
    }
}

pub fn quotient(forest: &Forest, partition: &TreePartition) -> Quotient {
    let generators: Vec<usize> = partition.blocks.iter().map(|&(a, _)| a).collect();
    let mut out = OutArcMap::empty(generators.len());
    for (idx, &alpha) in generators.iter().enumerate() {
        if let Some(t) = forest.out_arc(alpha) {
            out.set(idx, Some(partition.block_index(t)));
        }
    }
    let forest = Forest::from_acyclic(out).expect("quotient of a forest is a forest");
    Quotient { generators, forest }
}
