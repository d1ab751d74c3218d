//! Atoms of the subset algebra generated by the trees of minimal forests,
//! the measure they carry, and the constructive forest operations built on
//! top of them.

use crate::enumerate::{ForestCensus, MinForestSet, PhiSequence};
use crate::error::{Error, Result};
use crate::forest::{replace_arcs, Forest};
use crate::graph::{ArcView, Digraph};
use crate::vset::VertexSet;
use crate::weight::Rational;

/// The atoms of the algebra generated by a set of forests, each flagged
/// labeled when it holds a root of one of them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomFamily {
    k: usize,
    atoms: Vec<VertexSet>,
    labeled: Vec<bool>,
    owner: Vec<usize>,
}

impl AtomFamily {
    /// Common refinement of the component partitions of `forests`, which
    /// must all live on `n` vertices.
    pub fn generated_by(k: usize, n: usize, forests: &[Forest]) -> Self {
        let mut atoms = vec![VertexSet::full(n)];
        let mut roots = VertexSet::EMPTY;
        for f in forests {
            roots = roots | f.roots();
            for comp in f.components() {
                atoms = atoms
                    .into_iter()
                    .flat_map(|a| [a & comp, a - comp])
                    .filter(|s| !s.is_empty())
                    .collect();
            }
        }
        Self::from_blocks(k, n, atoms, roots)
    }

    fn from_blocks(k: usize, n: usize, mut atoms: Vec<VertexSet>, roots: VertexSet) -> Self {
        atoms.sort_by_key(|s| VertexSet::min(*s));
        let labeled = atoms.iter().map(|a| a.intersects(roots)).collect();
        let mut owner = vec![0; n];
        for (i, a) in atoms.iter().enumerate() {
            for v in a.iter() {
                owner[v] = i;
            }
        }
        AtomFamily {
            k,
            atoms,
            labeled,
            owner,
        }
    }

    /// The family with atoms `i` and `j` fused; used to corrupt an oracle
    /// on purpose.
    pub(crate) fn with_merged(&self, i: usize, j: usize) -> AtomFamily {
        let mut parts: Vec<(VertexSet, bool)> = Vec::new();
        for (idx, (&a, &l)) in self.atoms.iter().zip(&self.labeled).enumerate() {
            if idx == j {
                continue;
            }
            if idx == i {
                parts.push((a | self.atoms[j], l || self.labeled[j]));
            } else {
                parts.push((a, l));
            }
        }
        parts.sort_by_key(|(a, _)| VertexSet::min(*a));
        let mut owner = vec![0; self.owner.len()];
        for (idx, (a, _)) in parts.iter().enumerate() {
            for v in a.iter() {
                owner[v] = idx;
            }
        }
        AtomFamily {
            k: self.k,
            atoms: parts.iter().map(|p| p.0).collect(),
            labeled: parts.iter().map(|p| p.1).collect(),
            owner,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn atoms(&self) -> &[VertexSet] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn is_labeled(&self, i: usize) -> bool {
        self.labeled[i]
    }

    pub fn labeled_flags(&self) -> &[bool] {
        &self.labeled
    }

    /// Index of the atom containing `v`.
    pub fn atom_of(&self, v: usize) -> usize {
        self.owner[v]
    }

    pub fn labeled_count(&self) -> usize {
        self.labeled.iter().filter(|&&l| l).count()
    }

    pub fn labeled_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.labeled[i]).collect()
    }

    pub fn unlabeled_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !self.labeled[i]).collect()
    }

    /// Is `s` a union of atoms?
    pub fn algebra_contains(&self, s: VertexSet) -> bool {
        self.atoms.iter().all(|&a| a.is_subset(s) || a.is_disjoint(s))
    }

    /// The union of the atoms whose indices are set in `mask`.
    pub fn element(&self, mask: u64) -> VertexSet {
        VertexSet::from_bits(mask)
            .iter()
            .fold(VertexSet::EMPTY, |acc, i| acc | self.atoms[i])
    }

    /// Every non-empty element of the algebra (there are `2^len - 1`).
    pub fn elements(&self) -> impl Iterator<Item = VertexSet> + '_ {
        let full = VertexSet::full(self.len());
        full.subsets()
            .filter(|m| !m.is_empty())
            .map(move |m| self.element(m.bits()))
    }

    /// Does every atom of `self` lie inside one atom of `coarser`?
    pub fn refines(&self, coarser: &AtomFamily) -> bool {
        self.atoms
            .iter()
            .all(|&a| a.is_subset(coarser.atoms[coarser.atom_of(a.min().unwrap_or(0))]))
    }

    /// Same blocks, ignoring the labels and the level.
    pub fn same_partition(&self, other: &AtomFamily) -> bool {
        self.atoms == other.atoms
    }

    pub fn labeled_atoms(&self) -> Vec<VertexSet> {
        self.labeled_indices().into_iter().map(|i| self.atoms[i]).collect()
    }

    /// Atom label string such as `{a,b}` with a trailing `*` when labeled.
    pub fn describe(&self, graph: &Digraph) -> Vec<String> {
        self.atoms
            .iter()
            .zip(&self.labeled)
            .map(|(&a, &l)| format!("{}{}", graph.format_set(a), if l { "*" } else { "" }))
            .collect()
    }
}

/// Atoms at level `k` from its complete set of minimal forests.
pub fn atoms(graph: &Digraph, k: usize, tilde: &MinForestSet) -> Result<AtomFamily> {
    let n = graph.vertex_count();
    if k == 0 || k > n {
        return Err(Error::LevelOutOfRange { k, n });
    }
    if tilde.k != k {
        return Err(Error::Verification(format!(
            "minimal forest set is for k={}, atoms requested at k={k}",
            tilde.k
        )));
    }
    if tilde.is_empty() {
        return Err(Error::Infeasible { k });
    }
    Ok(AtomFamily::generated_by(k, n, &tilde.forests))
}

/// Out-weights of the atoms in each minimal forest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomMeasure {
    pub k: usize,
    /// `per_forest[f][a]` = weight of arcs leaving the vertices of atom `a`
    /// in forest `f`.
    pub per_forest: Vec<Vec<Rational>>,
    /// Per atom: the common value, if every forest agrees.
    pub rho: Vec<Option<Rational>>,
    pub well_defined: bool,
    /// `Σ ρ` when well defined.
    pub total: Option<Rational>,
}

impl AtomMeasure {
    /// `Σ ρ = φ^k`; false when not well defined.
    pub fn sums_to(&self, phi_k: Rational) -> bool {
        self.total == Some(phi_k)
    }

    /// `ρ` of an element of the algebra given by atom indices.
    pub fn of_atoms(&self, indices: impl IntoIterator<Item = usize>) -> Option<Rational> {
        indices
            .into_iter()
            .try_fold(Rational::from_integer(0), |acc, i| self.rho[i].map(|r| acc + r))
    }
}

pub fn measure(graph: &Digraph, tilde: &MinForestSet, family: &AtomFamily) -> AtomMeasure {
    let per_forest: Vec<Vec<Rational>> = tilde
        .forests
        .iter()
        .map(|f| family.atoms().iter().map(|&a| f.weight_on(graph, a)).collect())
        .collect();
    let rho: Vec<Option<Rational>> = (0..family.len())
        .map(|a| {
            let first = per_forest.first()?[a];
            per_forest.iter().all(|row| row[a] == first).then_some(first)
        })
        .collect();
    let well_defined = !per_forest.is_empty() && rho.iter().all(Option::is_some);
    let total = well_defined.then(|| rho.iter().flatten().copied().sum());
    AtomMeasure {
        k: family.k(),
        per_forest,
        rho,
        well_defined,
        total,
    }
}

/// One connected component `X` of `F|_U` for some minimal forest `F`,
/// with the out-weight of `X` in every minimal forest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentMeasure {
    pub forest: usize,
    pub component: VertexSet,
    pub weights: Vec<Rational>,
}

impl ComponentMeasure {
    pub fn agrees(&self) -> bool {
        self.weights.windows(2).all(|w| w[0] == w[1])
    }
}

/// Out-weights of the components of `F|_U` across all minimal forests, for
/// an unlabeled atom `U` at a strict level.
pub fn component_measure(
    graph: &Digraph,
    phi: &PhiSequence,
    tilde: &MinForestSet,
    family: &AtomFamily,
    u: usize,
) -> Result<Vec<ComponentMeasure>> {
    let k = family.k();
    if !phi.is_strict(k) || k == phi.n() {
        return Err(Error::NotApplicable(format!("level {k} is not strict")));
    }
    if family.is_labeled(u) {
        return Err(Error::NotApplicable(format!("atom {u} is labeled")));
    }
    let set = family.atoms()[u];
    let mut out = Vec::new();
    for (fi, f) in tilde.forests.iter().enumerate() {
        for component in crate::graph::ArcView::restrict(f, set).components() {
            out.push(ComponentMeasure {
                forest: fi,
                component,
                weights: tilde.forests.iter().map(|g| g.weight_on(graph, component)).collect(),
            });
        }
    }
    Ok(out)
}

/// A minimal forest with the same out-arcs as `f` on `e` and no arc
/// entering `e`; the first such forest in canonical order.
pub fn find_shielded_forest(tilde: &MinForestSet, e: VertexSet, f: &Forest) -> Result<Forest> {
    tilde
        .forests
        .iter()
        .find(|h| h.same_out_arcs_on(f, e) && h.in_neighborhood(e).is_empty())
        .cloned()
        .ok_or_else(|| {
            Error::Verification(format!(
                "no minimal forest shields {e:?} while keeping the out-arcs of {f:?}"
            ))
        })
}

/// Result of detaching everything that enters an atom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Detachment {
    /// Union of the subtrees rooted at the tails of arcs entering the atom.
    pub d: VertexSet,
    /// The subtrees making up `d`, one per entering tail.
    pub parts: Vec<VertexSet>,
    /// Shielding forest supplying the new out-arcs of `d`.
    pub shield: Forest,
    /// `F` with the out-arcs of `d` taken from the shield.
    pub g: Forest,
}

impl Detachment {
    /// Are the parts pairwise disjoint?
    pub fn is_disjoint_union(&self) -> bool {
        let mut seen = VertexSet::EMPTY;
        for &p in &self.parts {
            if seen.intersects(p) {
                return false;
            }
            seen = seen | p;
        }
        true
    }
}

/// Rewires `f` so that nothing enters atom `u`, changing out-arcs only on
/// the vertices from which `u` is entered.
pub fn detach_incoming(tilde: &MinForestSet, f: &Forest, u: VertexSet) -> Result<Detachment> {
    let parts: Vec<VertexSet> = f.in_neighborhood(u).iter().map(|b| f.subtree(b)).collect();
    let d = parts.iter().fold(VertexSet::EMPTY, |acc, &p| acc | p);
    let shield = find_shielded_forest(tilde, u, f)?;
    let g = Forest::from_acyclic(replace_arcs(f, &shield, d)).map_err(|_| {
        Error::Verification(format!("detaching {d:?} from {f:?} closes a contour"))
    })?;
    Ok(Detachment {
        d,
        parts,
        shield,
        g,
    })
}

/// Outcome of the undirected-case checks at one level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UndirectedCheck {
    pub k: usize,
    pub strict: bool,
    pub atom_count: usize,
    pub all_labeled: bool,
    /// Every tree of every minimal forest is exactly an atom.
    pub trees_are_atoms: bool,
}

impl UndirectedCheck {
    /// The assertions applicable at this level hold.
    pub fn holds(&self) -> bool {
        !self.strict || (self.atom_count == self.k && self.all_labeled && self.trees_are_atoms)
    }
}

/// Checks atom count, labels and tree/atom coincidence on a symmetric
/// graph. Only strict levels carry assertions.
pub fn undirected_check(graph: &Digraph, census: &ForestCensus, k: usize) -> Result<UndirectedCheck> {
    if let Some((i, j)) = graph.first_asymmetry() {
        return Err(Error::Asymmetric {
            from: graph.name(i).to_string(),
            to: graph.name(j).to_string(),
        });
    }
    let tilde = census.minimal(k);
    let family = atoms(graph, k, &tilde)?;
    let trees_are_atoms = tilde.forests.iter().all(|f| {
        let mut comps = f.components();
        comps.sort_by_key(|s| VertexSet::min(*s));
        comps == family.atoms()
    });
    Ok(UndirectedCheck {
        k,
        strict: census.phi().is_strict(k),
        atom_count: family.len(),
        all_labeled: family.labeled_count() == family.len(),
        trees_are_atoms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{minimal_forests, DEFAULT_CAP};

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

    fn g_woody() -> Digraph {
        let names = ["alpha", "beta", "gamma", "zeta", "eta", "xi"];
        Digraph::from_arcs(
            &names,
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

    fn family(g: &Digraph, k: usize) -> (MinForestSet, AtomFamily) {
        let tilde = minimal_forests(g, k, DEFAULT_CAP).unwrap();
        let fam = atoms(g, k, &tilde).unwrap();
        (tilde, fam)
    }

    fn sets(g: &Digraph, names: &[&[&str]]) -> Vec<VertexSet> {
        names.iter().map(|s| g.vertex_set(s).unwrap()).collect()
    }

    #[test]
    fn ato_atoms() {
        let g = g_ato();
        let (_, a2) = family(&g, 2);
        assert_eq!(a2.atoms(), sets(&g, &[&["a", "b", "c"], &["d"]]));
        assert_eq!(a2.labeled_flags(), &[true, true]);
        let (_, a3) = family(&g, 3);
        assert_eq!(a3.atoms(), sets(&g, &[&["a", "b"], &["c"], &["d"]]));
        assert_eq!(a3.labeled_count(), 3);
        assert!(a3.refines(&a2));
        assert!(!a2.refines(&a3));
    }

    #[test]
    fn woody_atoms() {
        let g = g_woody();
        let (t2, a2) = family(&g, 2);
        let (t3, a3) = family(&g, 3);
        assert_eq!(t2.len(), 8);
        assert_eq!(t3.len(), 8);
        let expected = sets(&g, &[&["alpha", "zeta"], &["beta", "eta"], &["gamma", "xi"]]);
        assert_eq!(a2.atoms(), expected);
        assert!(a2.same_partition(&a3));
        assert_eq!(a2.labeled_flags(), &[true, false, true]);
        assert_eq!(a3.labeled_flags(), &[true, true, true]);
    }

    #[test]
    fn algebra_membership() {
        let g = g_ato();
        let (_, a3) = family(&g, 3);
        assert!(a3.algebra_contains(VertexSet::EMPTY));
        assert!(a3.algebra_contains(g.all()));
        assert!(a3.algebra_contains(g.vertex_set(&["a", "b", "c"]).unwrap()));
        assert!(!a3.algebra_contains(g.vertex_set(&["a", "c"]).unwrap()));
        assert_eq!(a3.elements().count(), 7);
    }

    #[test]
    fn ato_measures() {
        let g = g_ato();
        let (t2, a2) = family(&g, 2);
        let m2 = measure(&g, &t2, &a2);
        assert_eq!(m2.rho, vec![Some(int(3)), Some(int(0))]);
        assert!(m2.sums_to(int(3)));
        let (t3, a3) = family(&g, 3);
        let m3 = measure(&g, &t3, &a3);
        assert_eq!(m3.rho, vec![Some(int(1)), Some(int(0)), Some(int(0))]);
        assert!(m3.sums_to(int(1)));
        let (t4, a4) = family(&g, 4);
        assert!(measure(&g, &t4, &a4).rho.iter().all(|r| *r == Some(int(0))));
    }

    #[test]
    fn infeasible_level_is_an_error() {
        let g = g_woody();
        let tilde = minimal_forests(&g, 1, DEFAULT_CAP).unwrap();
        assert!(matches!(atoms(&g, 1, &tilde), Err(Error::Infeasible { k: 1 })));
    }

    #[test]
    fn shielded_forest_examples() {
        let g = g_ato();
        let (t2, _) = family(&g, 2);
        let f2 = t2.forests[0].clone();
        let d = g.vertex_set(&["d"]).unwrap();
        assert_eq!(find_shielded_forest(&t2, d, &f2).unwrap(), f2);
    }

    #[test]
    fn detach_without_incoming_is_identity() {
        let g = g_ato();
        let (t3, _) = family(&g, 3);
        let f3 = t3.forests[0].clone();
        let c = g.vertex_set(&["c"]).unwrap();
        let det = detach_incoming(&t3, &f3, c).unwrap();
        assert!(det.d.is_empty());
        assert_eq!(det.g, f3);
    }

    #[test]
    fn woody_component_measure() {
        let g = g_woody();
        let census = ForestCensus::compute(&g, DEFAULT_CAP).unwrap();
        let tilde = census.minimal(2);
        let fam = atoms(&g, 2, &tilde).unwrap();
        let parts = component_measure(&g, &census.phi(), &tilde, &fam, 1).unwrap();
        assert_eq!(parts.len(), tilde.len());
        let rho = measure(&g, &tilde, &fam).rho[1].unwrap();
        assert!(parts.iter().all(|p| p.agrees() && p.weights[0] == rho));
        assert!(matches!(
            component_measure(&g, &census.phi(), &tilde, &fam, 0),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn atom_soundness_and_maximality() {
        for g in [g_ato(), g_woody()] {
            let census = ForestCensus::compute(&g, DEFAULT_CAP).unwrap();
            for k in 1..=g.vertex_count() {
                let tilde = census.minimal(k);
                if tilde.is_empty() {
                    continue;
                }
                let fam = atoms(&g, k, &tilde).unwrap();
                for f in &tilde.forests {
                    for t in f.components() {
                        assert!(fam.algebra_contains(t));
                    }
                }
                for i in 0..fam.len() {
                    for j in i + 1..fam.len() {
                        let merged = fam.atoms()[i] | fam.atoms()[j];
                        let splits = tilde.forests.iter().any(|f| {
                            f.components().iter().any(|&t| t.intersects(merged) && !merged.is_subset(t))
                        });
                        assert!(splits);
                    }
                }
            }
        }
    }

    #[test]
    fn undirected_examples() {
        let edge = Digraph::from_arcs(&["u", "v"], &[("u", "v", int(1)), ("v", "u", int(1))]).unwrap();
        let census = ForestCensus::compute(&edge, DEFAULT_CAP).unwrap();
        let check = undirected_check(&edge, &census, 1).unwrap();
        assert_eq!(check.atom_count, 1);
        assert!(check.all_labeled && check.holds());

        let path = Digraph::from_indexed(3, &[(0, 1, 1), (1, 0, 1), (1, 2, 1), (2, 1, 1)]).unwrap();
        let census = ForestCensus::compute(&path, DEFAULT_CAP).unwrap();
        // k = 2 is an equality level here: the four one-edge forests split the
        // path into singletons.
        let check = undirected_check(&path, &census, 2).unwrap();
        assert!(!check.strict);
        assert_eq!(check.atom_count, 3);
        assert!(check.all_labeled && check.holds());

        let sym = g_ato().symmetrized();
        let census = ForestCensus::compute(&sym, DEFAULT_CAP).unwrap();
        for k in 1..=4 {
            assert!(undirected_check(&sym, &census, k).unwrap().holds());
        }

        let census = ForestCensus::compute(&g_ato(), DEFAULT_CAP).unwrap();
        assert!(matches!(
            undirected_check(&g_ato(), &census, 2),
            Err(Error::Asymmetric { .. })
        ));
    }
}
