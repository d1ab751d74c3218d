//! The timescale hierarchy as text and as Graphviz clusters.
//!
//! cargo run --example hierarchy_dot > hierarchy.dot

use forest_atoms::io::dot::hierarchy_dot;
use forest_atoms::io::edgelist::parse_edge_list;
use forest_atoms::{build_hierarchy, stochastic_support};

const GRAPH: &str = "\
# two wells joined by a high barrier
p q 1
q p 1
q r 4
r s 1
s r 1
s q 5
";

fn main() -> forest_atoms::Result<()> {
    let g = parse_edge_list(GRAPH)?.graph;
    let levels = build_hierarchy(&g)?;
    for l in &levels {
        eprintln!(
            "k = {}  gap = {}  atoms {}  continuous on atoms {:?}",
            l.k,
            l.gap,
            l.atoms.describe(&g).join(" "),
            stochastic_support(l)
        );
    }
    print!("{}", hierarchy_dot(&g, &levels));
    Ok(())
}
