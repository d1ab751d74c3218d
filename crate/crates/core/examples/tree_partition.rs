//! Cutting a forest at a generator set and collapsing the blocks into the
//! quotient forest.

use forest_atoms::partition::{quotient, tree_partition};
use forest_atoms::{Digraph, Forest, Rational};

fn main() -> forest_atoms::Result<()> {
    let names = ["r", "a", "b", "c", "d", "e"];
    let arcs: Vec<(&str, &str, Rational)> = [("a", "r"), ("b", "a"), ("c", "a"), ("d", "c"), ("e", "d")]
        .iter()
        .map(|&(s, t)| (s, t, Rational::from_integer(1)))
        .collect();
    let g = Digraph::from_arcs(&names, &arcs)?;
    let f = Forest::from_names(&g, &[("a", "r"), ("b", "a"), ("c", "a"), ("d", "c"), ("e", "d")])?;
    let gens = g.vertex_set(&["r", "c", "e"])?;
    let p = tree_partition(&f, gens, Some(&g))?;
    for &(alpha, block) in p.blocks() {
        println!("block rooted at {}: {}", g.name(alpha), g.format_set(block));
    }
    let q = quotient(&f, &p);
    for (i, &alpha) in q.generators.iter().enumerate() {
        match q.forest.out_arc(i) {
            Some(j) => println!("quotient: {} -> {}", g.name(alpha), g.name(q.generators[j])),
            None => println!("quotient: {} is a root", g.name(alpha)),
        }
    }
    // Every generator set must contain the roots.
    assert!(tree_partition(&f, g.vertex_set(&["c"])?, Some(&g)).is_err());
    Ok(())
}
