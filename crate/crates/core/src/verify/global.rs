//! Statements about the whole sequence of levels.

use super::report::{Exhibit, StatementId as S};
use super::Ctx;
use crate::atoms::undirected_check;
use crate::enumerate::enumerate_forests;
use crate::weight::ExtWeight;

pub(super) fn convexity(cx: &mut Ctx) {
    let phi = &cx.a.phi;
    let n = phi.n();
    let violation = phi.convexity_violation();
    cx.check(S::Convexity, None, violation.is_none(), |w| {
        w.detail(format!("convexity fails at k = {}", violation.unwrap_or(0)))
    });
    let last = phi.get(n);
    cx.check(S::Convexity, None, last == ExtWeight::zero(), |w| {
        w.detail(format!("phi^N = {last}"))
    });
    let first = phi.first_feasible();
    let monotone = first.is_some_and(|f| (f..=n).all(|k| phi.is_feasible(k)));
    cx.check(S::Convexity, None, monotone, |w| {
        w.detail("phi is not finite from the first feasible level on")
    });
}

pub(super) fn run(cx: &mut Ctx) {
    theorem_1(cx);
    proposition_1(cx);
    theorem_7(cx);
    undirected(cx);
    exhibits(cx);
}

fn theorem_1(cx: &mut Ctx) {
    let levels = cx.levels();
    let at_strict = levels
        .iter()
        .filter(|&&k| cx.strict(k))
        .all(|&k| cx.hypothesis[k] == Some(true));
    if !at_strict || cx.top() < cx.a.n() {
        cx.not_applicable(S::T1, cx.top());
        return;
    }
    let failed: Vec<usize> = levels.iter().copied().filter(|&k| cx.hypothesis[k] != Some(true)).collect();
    cx.check(S::T1, None, failed.is_empty(), |w| {
        w.detail(format!("hypothesis holds at strict levels but fails at {failed:?}"))
    });
}

fn proposition_1(cx: &mut Ctx) {
    let phi = &cx.a.phi;
    let n_all = cx.a.n();
    let mut any = false;
    for n in 2..n_all.min(cx.top() + 1) {
        if !phi.is_strict(n) || cx.hypothesis[n] != Some(true) {
            continue;
        }
        // Longest run of equalities ending just below n.
        let mut m = n;
        while m > 1 && phi.is_equal(m - 1) && phi.is_feasible(m - 2) {
            m -= 1;
        }
        for k in m..n {
            any = true;
            let ok = cx.hypothesis[k] == Some(true);
            cx.check(S::Prop1, Some(k), ok, |w| {
                w.detail(format!("hypothesis holds at {n} but fails at {k}"))
            });
        }
    }
    if !any {
        cx.not_applicable(S::Prop1, 0);
    }
}

fn theorem_7(cx: &mut Ctx) {
    let g = cx.g();
    let k0 = cx.a.phi.first_feasible().filter(|&k| k > 1 && k <= cx.top());
    let Some(k0) = k0.filter(|_| g.is_unit_weighted()) else {
        cx.not_applicable(S::T7, 0);
        return;
    };
    let Some(fam) = cx.a.family(k0) else { return };
    let fam = fam.clone();
    let forests = match enumerate_forests(g, k0, cx.opts.cap) {
        Ok(f) => f,
        Err(e) => {
            cx.check(S::T7, Some(k0), false, |w| w.detail(e.to_string()));
            return;
        }
    };
    for f in &forests {
        for &e in fam.atoms() {
            cx.check(S::T7, Some(k0), f.is_tree_on(e), |w| {
                w.forest(g, f).set(g, e).detail("spanning forest is not a tree on the atom")
            });
        }
    }
}

fn undirected(cx: &mut Ctx) {
    let g = cx.g();
    if !g.is_symmetric() {
        cx.not_applicable(S::Undirected, 0);
        return;
    }
    for k in cx.levels() {
        if !cx.strict(k) {
            cx.not_applicable(S::Undirected, k);
            continue;
        }
        match undirected_check(g, &cx.a.census, k) {
            Ok(u) => {
                let ok = u.holds();
                cx.check(S::Undirected, Some(k), ok, |w| {
                    w.detail(format!(
                        "{} atoms, all labeled: {}, trees are atoms: {}",
                        u.atom_count, u.all_labeled, u.trees_are_atoms
                    ))
                });
            }
            Err(e) => cx.check(S::Undirected, Some(k), false, |w| w.detail(e.to_string())),
        }
    }
}

/// Forests whose restriction to an atom two levels up is not a tree.
fn exhibits(cx: &mut Ctx) {
    let g = cx.g();
    let top = cx.top();
    for k in 1..top.saturating_sub(1) {
        let Some(fam) = cx.a.family(k + 2) else { continue };
        for f in cx.a.minimal(k) {
            for &e in fam.atoms() {
                if cx.report.exhibits.len() >= cx.opts.exhibit_limit {
                    return;
                }
                let components = f.component_count_on(e);
                if components > 1 {
                    cx.report.exhibits.push(Exhibit {
                        forest_level: k,
                        atom_level: k + 2,
                        forest: f.named_arcs(g),
                        atom: g.set_names(e),
                        components,
                    });
                }
            }
        }
    }
}
