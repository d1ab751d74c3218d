//! Rewriting the out-arcs of a vertex set with those of another forest,
//! and the reachability guard that makes the result a forest.

use forest_atoms::forest::{lemma1_guard, replace_arcs};
use forest_atoms::{Digraph, Forest, Rational};

fn main() -> forest_atoms::Result<()> {
    let w = Rational::from_integer;
    let g = Digraph::from_arcs(
        &["u", "v", "x", "y"],
        &[("u", "v", w(1)), ("v", "u", w(1)), ("x", "y", w(2)), ("y", "x", w(2)), ("v", "x", w(3)), ("x", "v", w(3))],
    )?;
    let f = Forest::from_names(&g, &[("u", "v"), ("x", "v"), ("y", "x")])?;
    let h = Forest::from_names(&g, &[("v", "u"), ("x", "y"), ("v", "x")])?;
    for d in g.all().subsets() {
        let map = replace_arcs(&f, &h, d);
        let guard = lemma1_guard(&f, &h, d);
        let verdict = if map.is_acyclic() { "forest" } else { "has a contour" };
        println!("D = {:<10} guard {:<5} -> {verdict}", g.format_set(d), guard);
        assert!(!guard || map.is_acyclic());
    }
    Ok(())
}
