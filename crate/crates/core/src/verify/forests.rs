//! Weight-free statements about forests, arc replacement and tree
//! partitions, exercised on minimal forests of every level.

use super::report::StatementId as S;
use super::{sample, sample_pairs, Ctx};
use crate::forest::{find_non_reaching, lemma1_guard, replace_arcs, Forest, OutArcMap};
use crate::graph::ArcView;
use crate::partition::{quotient, tree_partition};
use crate::vset::VertexSet;

/// Forests per level used for the tree-partition lemmas.
const PARTITION_POOL: usize = 3;

pub(super) fn run(cx: &mut Ctx) {
    let levels = cx.levels();
    for &k in &levels {
        let forests = cx.a.minimal(k);
        let pool = sample(forests.len(), cx.opts.pool);
        for &i in &pool {
            claims_1_2(cx, k, &forests[i]);
            claim_3(cx, k, &forests[i]);
        }
        let rewrites: Vec<&Forest> = [pool.first(), pool.last()]
            .into_iter()
            .flatten()
            .map(|&i| &forests[i])
            .collect();
        for &i in &pool {
            claim_4(cx, k, &forests[i], &rewrites);
        }
        for &i in &sample(forests.len(), PARTITION_POOL) {
            partition_lemmas(cx, k, &forests[i]);
        }
        for (i, j) in sample_pairs(forests.len(), forests.len(), cx.opts.pair_budget) {
            lemma_1(cx, k, &forests[i], &forests[j]);
            property_1(cx, k, &forests[i], &forests[j]);
        }
    }
    property_2(cx, &levels);
}

fn claims_1_2(cx: &mut Ctx, k: usize, f: &Forest) {
    let g = cx.g();
    let n = f.len();
    let subtrees: Vec<VertexSet> = (0..n).map(|i| f.subtree(i)).collect();
    for i in 0..n {
        for j in i + 1..n {
            let (si, sj) = (subtrees[i], subtrees[j]);
            let c1 = si.is_disjoint(sj) || si.contains(j) || sj.contains(i);
            cx.check(S::C1, Some(k), c1, |w| {
                w.forest(g, f).set(g, si).set(g, sj).detail("intersecting subtrees, neither holds the other's root")
            });
            let nested = si.is_disjoint(sj) || si.is_subset(sj) || sj.is_subset(si);
            let iff = si.is_subset(sj) == sj.contains(i) && sj.is_subset(si) == si.contains(j);
            cx.check(S::C2, Some(k), nested && iff, |w| {
                w.forest(g, f).set(g, si).set(g, sj).detail("maximal subtrees neither disjoint nor nested")
            });
        }
    }
}

fn claim_3(cx: &mut Ctx, k: usize, f: &Forest) {
    let g = cx.g();
    for tree in f.components() {
        for b in tree.subsets().filter(|b| b.len() > 1) {
            let found = find_non_reaching(f, b);
            let ok = found.is_some_and(|beta| b.contains(beta) && !f.reach(beta).intersects(b.without(beta)));
            cx.check(S::C3, Some(k), ok, |w| {
                w.forest(g, f).set(g, b).detail(format!("find_non_reaching returned {found:?}"))
            });
        }
    }
}

fn claim_4(cx: &mut Ctx, k: usize, f: &Forest, rewrites: &[&Forest]) {
    let g = cx.g();
    let base = f.to_map();
    for beta in 0..f.len() {
        let free = f.tree_of(beta) - f.reach(beta);
        let path = base.path_from(beta);
        for d in free.subsets().filter(|d| !d.is_empty()) {
            // Arbitrary rewrites, including one that aims every arc of D at beta.
            let mut aimed = base.clone();
            for v in d.iter() {
                aimed.set(v, Some(beta));
            }
            let candidates = rewrites.iter().map(|r| replace_arcs(f, r, d)).chain([aimed]);
            for map in candidates {
                let ok = map.path_from(beta) == path;
                cx.check(S::C4, Some(k), ok, |w| {
                    w.forest(g, f).set(g, d).detail(format!("path from {} changed", g.name(beta)))
                });
            }
        }
    }
}

fn partition_lemmas(cx: &mut Ctx, k: usize, f: &Forest) {
    let g = cx.g();
    let roots = f.roots();
    for extra in f.non_roots().subsets() {
        let a = roots | extra;
        let p = match tree_partition(f, a, Some(g)) {
            Ok(p) => p,
            Err(e) => {
                cx.check(S::L5, Some(k), false, |w| w.forest(g, f).set(g, a).detail(e.to_string()));
                continue;
            }
        };
        let union = p.block_sets().iter().fold(VertexSet::EMPTY, |acc, &s| acc | s);
        let sizes: usize = p.block_sets().iter().map(|s| s.len()).sum();
        let shape = union == g.all()
            && sizes == f.len()
            && p.blocks().iter().all(|&(alpha, x)| {
                x.contains(alpha)
                    && f.is_tree_on(x)
                    && !matches!(f.out_arc(alpha), Some(t) if x.contains(t))
            });
        cx.check(S::L5, Some(k), shape, |w| {
            w.forest(g, f).set(g, a).detail("blocks are not a tree partition rooted at the generators")
        });
        for beta in a.iter() {
            let sub = f.subtree(beta);
            for &(_, x) in p.blocks() {
                let ok = x.is_disjoint(sub) || x.is_subset(sub);
                cx.check(S::L5, Some(k), ok, |w| {
                    w.forest(g, f).set(g, a).set(g, x).set(g, sub).detail("block cut by a generator subtree")
                });
            }
        }
        let q = quotient(f, &p);
        for (pb, &(_, xb)) in p.blocks().iter().enumerate() {
            let reach_q = q.forest.reach(pb);
            for (pa, &(_, xa)) in p.blocks().iter().enumerate() {
                let ok = f.reaches(xb, xa) == reach_q.contains(pa);
                cx.check(S::L6, Some(k), ok, |w| {
                    w.forest(g, f).set(g, a).set(g, xb).set(g, xa).detail("block and quotient reachability disagree")
                });
            }
        }
        let positions = VertexSet::full(p.len());
        for m in positions.subsets().filter(|m| m.len() > 1) {
            let picked = find_non_reaching(&q.forest, m);
            let ok = picked.is_some_and(|pb| {
                let xb = p.blocks()[pb].1;
                m.without(pb).iter().all(|pa| !f.reaches(xb, p.blocks()[pa].1))
            });
            cx.check(S::L7, Some(k), ok, |w| {
                let w = w.forest(g, f).set(g, a);
                m.iter().fold(w, |w, pa| w.set(g, p.blocks()[pa].1)).detail("every block reaches another")
            });
        }
    }
}

fn lemma_1(cx: &mut Ctx, k: usize, f: &Forest, h: &Forest) {
    let g = cx.g();
    for d in g.all().subsets() {
        if lemma1_guard(f, h, d) {
            let ok = replace_arcs(f, h, d).is_acyclic();
            cx.check(S::L1, Some(k), ok, |w| {
                w.forest(g, f).forest(g, h).set(g, d).detail("guard holds but the replacement has a contour")
            });
        }
    }
}

fn both_ways(f: &Forest, h: &Forest, d: VertexSet) -> bool {
    replace_arcs(f, h, d).is_acyclic() && replace_arcs(h, f, d).is_acyclic()
}

fn property_1(cx: &mut Ctx, k: usize, f: &Forest, h: &Forest) {
    let g = cx.g();
    let report = |cx: &mut Ctx, case: &str, d: VertexSet| {
        let ok = both_ways(f, h, d);
        cx.check(S::P1, Some(k), ok, |w| {
            w.forest(g, f).forest(g, h).set(g, d).detail(format!("case ({case}) replacement is not a forest"))
        });
    };
    for tf in f.components() {
        report(cx, "a", tf);
        for tg in h.components() {
            report(cx, "b", tf & tg);
            report(cx, "c", tf - tg);
            for d in (tf & tg).subsets().filter(|d| !d.is_empty()) {
                if f.in_neighborhood(d).is_empty() && f.out_neighborhood(d).is_subset(tf - tg) {
                    report(cx, "d", d);
                }
            }
            for d in (tf - tg).subsets().filter(|d| !d.is_empty()) {
                if f.in_neighborhood(d).is_empty() && f.out_neighborhood(d).is_subset(tg) {
                    report(cx, "e", d);
                }
            }
        }
    }
}

fn property_2(cx: &mut Ctx, levels: &[usize]) {
    let g = cx.g();
    let budget = (cx.opts.pair_budget / 4).max(1);
    for (a, &m) in levels.iter().enumerate() {
        for &n in &levels[a..] {
            let fs = cx.a.minimal(n);
            let gs = cx.a.minimal(m);
            for (i, j) in sample_pairs(fs.len(), gs.len(), budget) {
                let (f, h) = (&fs[i], &gs[j]);
                for d in g.all().subsets() {
                    let p = replace_arcs(f, h, d);
                    let q = replace_arcs(h, f, d);
                    if !p.is_acyclic() || !q.is_acyclic() {
                        continue;
                    }
                    let rf = (d & f.roots()).len();
                    let rg = (d & h.roots()).len();
                    let verdict = |cx: &mut Ctx, p: &OutArcMap, kp: usize, q: &OutArcMap, kq: usize| {
                        let ok = cx.is_minimal(p, kp) && cx.is_minimal(q, kq);
                        cx.check(S::P2, Some(n), ok, |w| {
                            w.forest(g, f).forest(g, h).set(g, d).detail(format!(
                                "levels {n} and {m}: replacements not minimal at {kp} and {kq}"
                            ))
                        });
                    };
                    if rf == rg {
                        verdict(cx, &p, n, &q, m);
                    }
                    if rf == rg + (n - m) && n != m {
                        verdict(cx, &p, m, &q, n);
                    }
                }
            }
        }
    }
}
