//! Per-level statements about atoms, their labels and measure.

use std::collections::HashSet;

use super::report::StatementId as S;
use super::{sample, sample_pairs, Ctx};
use crate::atoms::{detach_incoming, find_shielded_forest, AtomFamily};
use crate::forest::{replace_arcs, Forest};
use crate::graph::{ArcView, Digraph};
use crate::partition::tree_partition;
use crate::vset::VertexSet;

/// Statements that assume the strict inequality at `k`.
const STRICT_ONLY: &[S] = &[
    S::P6, S::P7, S::P8, S::P9, S::P10, S::P11, S::P12, S::P13, S::P14, S::P15, S::P16,
    S::P17, S::L3, S::L4, S::Cor1, S::T2, S::T3, S::T4, S::Prop2,
];

pub(super) fn run(cx: &mut Ctx) {
    for k in cx.levels() {
        let Some(fam) = cx.a.family(k) else { continue };
        let fam = fam.clone();
        let tilde: &[Forest] = cx.a.minimal(k);
        property_3(cx, k, &fam, tilde);
        lemma_2(cx, k, &fam, tilde);
        theorem_5(cx, k, &fam, tilde);
        theorem_6(cx, k, &fam);
        property_4(cx, k, &fam);
        property_5(cx, k, &fam);
        if cx.strict(k) {
            strict_level(cx, k, &fam, tilde);
        } else {
            for &id in STRICT_ONLY {
                cx.not_applicable(id, k);
            }
        }
    }
}

/// Number of vertices of `s` whose out-arc leaves `s`, by target atom.
fn exits_by_atom(f: &Forest, s: VertexSet, fam: &AtomFamily) -> Vec<usize> {
    let mut counts = vec![0; fam.len()];
    for v in s.iter() {
        if let Some(t) = f.out_arc(v) {
            if !s.contains(t) {
                counts[fam.atom_of(t)] += 1;
            }
        }
    }
    counts
}

fn restrictions(forests: &[Forest], s: VertexSet) -> HashSet<Vec<Option<usize>>> {
    forests.iter().map(|f| f.restricted_map(s)).collect()
}

fn property_3(cx: &mut Ctx, k: usize, fam: &AtomFamily, tilde: &[Forest]) {
    let g = cx.g();
    let atoms = fam.atoms();
    for i in 0..atoms.len() {
        for j in i + 1..atoms.len() {
            let (a, b) = (atoms[i], atoms[j]);
            let (va, vb) = (a.min().unwrap_or(0), b.min().unwrap_or(0));
            let ok = tilde.iter().any(|f| f.root_of(va) != f.root_of(vb));
            cx.check(S::P3, Some(k), ok, |w| w.set(g, a).set(g, b).detail("no minimal forest separates the atoms"));
        }
    }
}

fn lemma_2(cx: &mut Ctx, k: usize, fam: &AtomFamily, tilde: &[Forest]) {
    let g = cx.g();
    let reps: Vec<usize> = fam.atoms().iter().map(|a| VertexSet::min(*a).unwrap_or(0)).collect();
    let roots: Vec<Vec<usize>> = tilde
        .iter()
        .map(|f| reps.iter().map(|&v| f.root_of(v)).collect())
        .collect();
    let m = reps.len();
    for i in 0..m {
        for j in i + 1..m {
            for l in j + 1..m {
                let mut star = false;
                let mut alone = [false; 3];
                for r in &roots {
                    let (x, y, z) = (r[i], r[j], r[l]);
                    if x != y && y != z && x != z {
                        star = true;
                    } else if y == z && x != y {
                        alone[0] = true;
                    } else if x == z && y != x {
                        alone[1] = true;
                    } else if x == y && z != x {
                        alone[2] = true;
                    }
                }
                let empty = alone.iter().filter(|&&b| !b).count();
                let ok = star || empty <= 1;
                let atoms = fam.atoms();
                cx.check(S::L2, Some(k), ok, |w| {
                    w.set(g, atoms[i]).set(g, atoms[j]).set(g, atoms[l]).detail(format!(
                        "no forest separates all three and {empty} placement types are missing"
                    ))
                });
            }
        }
    }
}

fn theorem_5(cx: &mut Ctx, k: usize, fam: &AtomFamily, tilde: &[Forest]) {
    let g = cx.g();
    let mut holds = true;
    for f in tilde {
        for &a in fam.atoms() {
            let ok = f.is_tree_on(a);
            holds &= ok;
            cx.check(S::T5, Some(k), ok, |w| {
                w.forest(g, f).set(g, a).detail(format!("{} components on the atom", f.component_count_on(a)))
            });
        }
        // Atom roots as generators must reproduce the atoms as the blocks.
        let gens: VertexSet = fam
            .atoms()
            .iter()
            .flat_map(|&a| a.iter().filter(move |&v| !matches!(f.out_arc(v), Some(t) if a.contains(t))))
            .collect();
        let ok = gens.len() == fam.len()
            && tree_partition(f, gens, None).is_ok_and(|p| {
                let mut blocks = p.block_sets();
                blocks.sort_by_key(|s| VertexSet::min(*s));
                blocks == fam.atoms()
            });
        cx.check(S::T5Prime, Some(k), ok, |w| w.forest(g, f).set(g, gens).detail("atoms are not a tree partition"));
    }
    cx.hypothesis[k] = Some(holds);
}

fn theorem_6(cx: &mut Ctx, k: usize, fam: &AtomFamily) {
    let g = cx.g();
    let lower = cx.a.minimal(k.saturating_sub(1));
    if k < 2 || lower.is_empty() {
        cx.not_applicable(S::T6, k);
        return;
    }
    for f in lower {
        for &a in fam.atoms() {
            let ok = f.is_tree_on(a);
            cx.check(S::T6, Some(k), ok, |w| {
                w.forest(g, f).set(g, a).detail(format!("{} components on the atom", f.component_count_on(a)))
            });
        }
    }
}

fn property_4(cx: &mut Ctx, k: usize, fam: &AtomFamily) {
    match cx.a.family(k + 1).filter(|_| k < cx.top()) {
        Some(next) => {
            let ok = next.refines(fam) && fam.atoms().iter().all(|&a| next.algebra_contains(a));
            cx.check(S::P4, Some(k), ok, |w| w.detail(format!("atoms at {} do not refine atoms at {k}", k + 1)));
        }
        None => cx.not_applicable(S::P4, k),
    }
}

fn property_5(cx: &mut Ctx, k: usize, fam: &AtomFamily) {
    let g = cx.g();
    let next = cx.a.family(k + 1);
    if !cx.a.phi.is_equal(k) || next.is_none() {
        cx.not_applicable(S::P5, k);
        return;
    }
    let next = next.expect("checked");
    let ok = fam.same_partition(next) && fam.labeled_flags() == next.labeled_flags();
    cx.check(S::P5, Some(k), ok, |w| {
        w.detail(format!("families {:?} and {:?} differ", fam.describe(g), next.describe(g)))
    });
    let (lower, mid, upper) = (cx.a.minimal(k - 1), cx.a.minimal(k), cx.a.minimal(k + 1));
    for &e in fam.atoms() {
        let mid_set = restrictions(mid, e);
        for (side, forests) in [(k - 1, lower), (k + 1, upper)] {
            for f in forests {
                let ok = mid_set.contains(&f.restricted_map(e));
                cx.check(S::P5, Some(k), ok, |w| {
                    w.forest(g, f).set(g, e).detail(format!("restriction of a level-{side} forest is not one of level {k}"))
                });
            }
        }
    }
}

fn strict_level(cx: &mut Ctx, k: usize, fam: &AtomFamily, tilde: &[Forest]) {
    let pool: Vec<usize> = sample(tilde.len(), cx.opts.pool);
    counts_and_measure(cx, k, fam, tilde, &pool);
    labels(cx, k, fam, tilde);
    shielding(cx, k, fam, tilde, &pool);
    replacement(cx, k, fam, tilde, &pool);
    lower_bounds(cx, k, fam, tilde);
    lower_level(cx, k, fam, tilde);
    arc_structure(cx, k, fam, tilde, &pool);
    components(cx, k, fam, tilde, &pool);
    detachment(cx, k, fam, tilde, &pool);
}

/// Checks a per-atom quantity for invariance on every algebra element.
/// Elements are unions of atoms, so only the distinct per-atom vectors
/// matter.
fn element_invariance<T: Clone + Eq + std::hash::Hash + Copy + std::iter::Sum>(
    vectors: &[Vec<T>],
    atoms: usize,
) -> Option<u64> {
    let distinct: Vec<&Vec<T>> = {
        let mut seen = HashSet::new();
        vectors.iter().filter(|v| seen.insert(*v)).collect()
    };
    let full = VertexSet::full(atoms);
    for mask in full.subsets().filter(|m| !m.is_empty()) {
        let sums: Vec<T> = distinct
            .iter()
            .map(|v| mask.iter().map(|i| v[i]).sum())
            .collect();
        if sums.windows(2).any(|w| w[0] != w[1]) {
            return Some(mask.bits());
        }
    }
    None
}

fn counts_and_measure(cx: &mut Ctx, k: usize, fam: &AtomFamily, tilde: &[Forest], pool: &[usize]) {
    let g = cx.g();
    let counts: Vec<Vec<usize>> = tilde
        .iter()
        .map(|f| fam.atoms().iter().map(|&a| f.out_arc_count_on(a)).collect())
        .collect();
    let bad = element_invariance(&counts, fam.len());
    cx.check(S::P6, Some(k), bad.is_none(), |w| {
        w.set(g, fam.element(bad.unwrap_or(0))).detail("out-arc counts differ across minimal forests")
    });
    let weights: Vec<Vec<i128>> = tilde
        .iter()
        .map(|f| fam.atoms().iter().map(|&a| f.scaled_weight_on(g, a)).collect())
        .collect();
    let bad = element_invariance(&weights, fam.len());
    let measure = cx.a.measure(k).cloned();
    let well = measure.as_ref().is_some_and(|m| m.well_defined);
    cx.check(S::P10, Some(k), bad.is_none() && well, |w| {
        w.set(g, fam.element(bad.unwrap_or(0))).detail("out-weights differ across minimal forests")
    });
    let phi_k = cx.a.phi.get(k).finite();
    let sum_ok = measure.as_ref().is_some_and(|m| phi_k.is_some_and(|p| m.sums_to(p)));
    cx.check(S::P11, Some(k), sum_ok, |w| w.detail("sum of rho over atoms differs from phi^k"));
    if let (Some(m), Some(p)) = (measure.as_ref(), phi_k) {
        for &fi in pool {
            let f = &tilde[fi];
            let total = f.components().iter().try_fold(crate::weight::Rational::from_integer(0), |acc, &t| {
                let inside = (0..fam.len()).filter(|&i| fam.atoms()[i].is_subset(t));
                m.of_atoms(inside).map(|r| acc + r)
            });
            cx.check(S::P11, Some(k), total == Some(p), |w| {
                w.forest(g, f).detail("rho over the trees of a minimal forest differs from phi^k")
            });
        }
    }
}

fn labels(cx: &mut Ctx, k: usize, fam: &AtomFamily, tilde: &[Forest]) {
    let g = cx.g();
    cx.check(S::P7, Some(k), fam.labeled_count() == k, |w| {
        w.detail(format!("{} labeled atoms", fam.labeled_count()))
    });
    let labeled = fam.labeled_atoms();
    for f in tilde {
        for t in f.components() {
            let count = labeled.iter().filter(|a| a.is_subset(t)).count();
            cx.check(S::P8, Some(k), count == 1, |w| {
                w.forest(g, f).set(g, t).detail(format!("{count} labeled atoms in the tree"))
            });
        }
        for &m in &labeled {
            cx.check(S::P15, Some(k), f.is_tree_on(m), |w| {
                w.forest(g, f).set(g, m).detail("not a tree on a labeled atom")
            });
        }
    }
}

fn shielding(cx: &mut Ctx, k: usize, fam: &AtomFamily, tilde: &[Forest], pool: &[usize]) {
    let g = cx.g();
    let set = crate::enumerate::MinForestSet {
        k,
        weight: cx.a.phi.get(k),
        forests: tilde.to_vec(),
    };
    for &fi in pool {
        let f = &tilde[fi];
        for &e in fam.atoms() {
            let found = find_shielded_forest(&set, e, f);
            let ok = found.as_ref().is_ok_and(|h| {
                h.same_out_arcs_on(f, e) && h.in_neighborhood(e).is_empty() && cx.is_minimal(&h.to_map(), k)
            });
            cx.check(S::P9, Some(k), ok, |w| w.forest(g, f).set(g, e).detail("no shielded minimal forest"));
        }
    }
}

fn replacement(cx: &mut Ctx, k: usize, fam: &AtomFamily, tilde: &[Forest], pool: &[usize]) {
    let g = cx.g();
    let elements: Vec<VertexSet> = fam.elements().collect();
    for (i, j) in sample_pairs(tilde.len(), tilde.len(), cx.opts.pair_budget) {
        let (f, h) = (&tilde[i], &tilde[j]);
        for &a in &elements {
            let map = replace_arcs(f, h, a);
            if map.is_acyclic() {
                let ok = cx.is_minimal(&map, k);
                cx.check(S::P12, Some(k), ok, |w| {
                    w.forest(g, f).forest(g, h).set(g, a).detail("replacement on an element is not minimal")
                });
            }
        }
    }
    for &fi in pool {
        let f = &tilde[fi];
        for &a in elements.iter().filter(|&&a| f.in_neighborhood(a).is_empty()) {
            for &hi in pool {
                let h = &tilde[hi];
                let ok = cx.is_minimal(&replace_arcs(f, h, a), k);
                cx.check(S::P13, Some(k), ok, |w| {
                    w.forest(g, f).forest(g, h).set(g, a).detail("replacement on an unentered element is not minimal")
                });
            }
        }
    }
}

fn lower_bounds(cx: &mut Ctx, k: usize, fam: &AtomFamily, tilde: &[Forest]) {
    let g: &Digraph = cx.g();
    let Some(all) = cx.all_forests().map(<[Forest]>::to_vec) else {
        cx.not_applicable(S::P14, k);
        return;
    };
    for (idx, &m) in fam.atoms().iter().enumerate() {
        let rho = tilde[0].scaled_weight_on(g, m);
        let labeled = fam.is_labeled(idx);
        let known: HashSet<Vec<Option<usize>>> = if labeled {
            restrictions(tilde, m)
        } else {
            tilde.iter().map(|h| m.iter().map(|v| h.out_arc(v)).collect()).collect()
        };
        for f in &all {
            let missing = m.len() - f.out_arc_count_on(m);
            let applies = if labeled { missing == 1 } else { missing == 0 };
            if !applies {
                continue;
            }
            let w = f.scaled_weight_on(g, m);
            let key = if labeled {
                f.restricted_map(m)
            } else {
                m.iter().map(|v| f.out_arc(v)).collect()
            };
            let ok = w >= rho && (w != rho || known.contains(&key));
            cx.check(S::P14, Some(k), ok, |wt| {
                wt.forest(g, f).set(g, m).detail(if w < rho {
                    "out-weight below rho".to_string()
                } else {
                    "attains rho but matches no minimal forest".to_string()
                })
            });
        }
    }
}

fn lower_level(cx: &mut Ctx, k: usize, fam: &AtomFamily, tilde: &[Forest]) {
    let g = cx.g();
    let lower = cx.a.minimal(k.saturating_sub(1));
    if k < 2 || lower.is_empty() {
        cx.not_applicable(S::P16, k);
        cx.not_applicable(S::P17, k);
        return;
    }
    let n = g.vertex_count();
    let labeled = fam.labeled_atoms();
    for &fi in &sample(lower.len(), cx.opts.pool) {
        let f = &lower[fi];
        let ok = labeled.iter().any(|&m| {
            f.is_tree_on(m) && tilde.iter().any(|p| p.same_out_arcs_on(f, m.complement(n)))
        });
        cx.check(S::P16, Some(k), ok, |w| w.forest(g, f).detail("no labeled atom and minimal k-forest match"));
    }
    for u in fam.unlabeled_indices() {
        let set = fam.atoms()[u];
        let known = restrictions(tilde, set);
        for f in lower {
            let ok = known.contains(&f.restricted_map(set));
            cx.check(S::P17, Some(k), ok, |w| {
                w.forest(g, f).set(g, set).detail("restriction is not one of a minimal k-forest")
            });
        }
    }
}

fn arc_structure(cx: &mut Ctx, k: usize, fam: &AtomFamily, tilde: &[Forest], pool: &[usize]) {
    let g = cx.g();
    let unlabeled = fam.unlabeled_indices();
    for &fi in pool {
        let f = &tilde[fi];
        for &u in &unlabeled {
            let set = fam.atoms()[u];
            let heads = f.out_neighborhood(set);
            for h in tilde {
                let tree = h.tree_of(set.min().unwrap_or(0));
                let outside = (heads - tree).len();
                cx.check(S::L3, Some(k), outside <= 1, |w| {
                    w.forest(g, f).forest(g, h).set(g, set).detail(format!("{outside} exits outside the atom's tree"))
                });
            }
        }
    }
    for f in tilde {
        for &u in &unlabeled {
            let set = fam.atoms()[u];
            let exits = exits_by_atom(f, set, fam);
            let worst = exits.iter().copied().max().unwrap_or(0);
            cx.check(S::Cor1, Some(k), worst <= 1, |w| {
                w.forest(g, f).set(g, set).detail(format!("{worst} arcs into one atom"))
            });
            let total: usize = exits.iter().sum();
            let into_labeled = (0..fam.len()).any(|e| fam.is_labeled(e) && exits[e] > 0);
            cx.check(S::T2, Some(k), !into_labeled || total == 1, |w| {
                w.forest(g, f).set(g, set).detail(format!("{total} exits, one into a labeled atom"))
            });
        }
    }
    lemma_4(cx, k, fam, tilde, &unlabeled);
}

fn lemma_4(cx: &mut Ctx, k: usize, fam: &AtomFamily, tilde: &[Forest], unlabeled: &[usize]) {
    let g = cx.g();
    let reps: Vec<usize> = fam.atoms().iter().map(|a| VertexSet::min(*a).unwrap_or(0)).collect();
    let roots: Vec<Vec<usize>> = tilde.iter().map(|f| reps.iter().map(|&v| f.root_of(v)).collect()).collect();
    let exits: Vec<Vec<Vec<usize>>> = tilde
        .iter()
        .map(|f| unlabeled.iter().map(|&u| exits_by_atom(f, fam.atoms()[u], fam)).collect())
        .collect();
    for (ui, &u) in unlabeled.iter().enumerate() {
        let set = fam.atoms()[u];
        let unentered: Vec<usize> = (0..tilde.len()).filter(|&gi| tilde[gi].in_neighborhood(set).is_empty()).collect();
        for &e in unlabeled.iter().filter(|&&e| e != u) {
            for &s in unlabeled.iter().filter(|&&s| s > e && s != u) {
                let premise = unentered.iter().any(|&gi| roots[gi][e] != roots[gi][u] || roots[gi][s] != roots[gi][u]);
                if !premise {
                    continue;
                }
                for (fi, f) in tilde.iter().enumerate() {
                    let count = exits[fi][ui][e] + exits[fi][ui][s];
                    cx.check(S::L4, Some(k), count <= 1, |w| {
                        w.forest(g, f)
                            .set(g, set)
                            .set(g, fam.atoms()[e])
                            .set(g, fam.atoms()[s])
                            .detail(format!("{count} arcs from U into E and S"))
                    });
                }
            }
        }
    }
}

fn components(cx: &mut Ctx, k: usize, fam: &AtomFamily, tilde: &[Forest], pool: &[usize]) {
    let g = cx.g();
    let all = cx.all_forests().map(<[Forest]>::to_vec);
    for u in fam.unlabeled_indices() {
        let set = fam.atoms()[u];
        for &fi in pool {
            let f = &tilde[fi];
            for x in f.restrict(set).components() {
                let shielded = tilde.iter().any(|h| h.same_out_arcs_on(f, x) && h.in_neighborhood(x).is_empty());
                cx.check(S::T3, Some(k), shielded, |w| {
                    w.forest(g, f).set(g, x).detail("part 1: no shielded forest for the component")
                });
                let wf = f.scaled_weight_on(g, x);
                for h in tilde {
                    let same = h.scaled_weight_on(g, x) == wf;
                    let map = replace_arcs(f, h, x);
                    let minimal = !map.is_acyclic() || cx.is_minimal(&map, k);
                    cx.check(S::T3, Some(k), same && minimal, |w| {
                        w.forest(g, f).forest(g, h).set(g, x).detail("part 2: component weight or replacement differs")
                    });
                }
                if let Some(all) = &all {
                    let known: HashSet<Vec<Option<usize>>> =
                        tilde.iter().map(|h| x.iter().map(|v| h.out_arc(v)).collect()).collect();
                    for h in all.iter().filter(|h| h.out_arc_count_on(x) == x.len()) {
                        let wh = h.scaled_weight_on(g, x);
                        let key: Vec<Option<usize>> = x.iter().map(|v| h.out_arc(v)).collect();
                        let ok = wh >= wf && (wh != wf || known.contains(&key));
                        cx.check(S::T3, Some(k), ok, |w| {
                            w.forest(g, f).forest(g, h).set(g, x).detail("part 3: lower bound on the component fails")
                        });
                    }
                }
            }
        }
    }
}

fn detachment(cx: &mut Ctx, k: usize, fam: &AtomFamily, tilde: &[Forest], pool: &[usize]) {
    let g = cx.g();
    let n = g.vertex_count();
    let set = crate::enumerate::MinForestSet {
        k,
        weight: cx.a.phi.get(k),
        forests: tilde.to_vec(),
    };
    for &fi in pool {
        let f = &tilde[fi];
        for &u in fam.atoms() {
            let det = match detach_incoming(&set, f, u) {
                Ok(det) => det,
                Err(e) => {
                    let msg = e.to_string();
                    cx.check(S::T4, Some(k), false, |w| w.forest(g, f).set(g, u).detail(msg.clone()));
                    cx.check(S::Prop2, Some(k), false, |w| w.forest(g, f).set(g, u).detail(msg));
                    continue;
                }
            };
            let anchor = u.min().unwrap_or(0);
            let delta = f.root_of(anchor);
            let tree = f.tree_of(anchor);
            let keeps = det.g.same_out_arcs_on(f, det.d.complement(n));
            let minimal = cx.is_minimal(&det.g.to_map(), k);
            let unentered = det.g.in_neighborhood(u).is_empty();
            let t4 = det.d.is_subset(tree)
                && minimal
                && keeps
                && det.g.out_arc(delta).is_none()
                && u.is_subset(det.g.subtree(delta))
                && unentered;
            cx.check(S::T4, Some(k), t4, |w| {
                w.forest(g, f).forest(g, &det.g).set(g, u).set(g, det.d).detail("detached forest violates the contract")
            });
            let p2 = det.d.is_disjoint(u) && det.is_disjoint_union() && minimal && keeps && unentered;
            cx.check(S::Prop2, Some(k), p2, |w| {
                w.forest(g, f).forest(g, &det.g).set(g, u).set(g, det.d).detail("detachment parts (i)-(iii) fail")
            });
        }
    }
}
