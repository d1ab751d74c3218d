//! phi^k for every k, the convexity profile and the minimal forests of the
//! four-vertex example.

use forest_atoms::{convexity_profile, phi_sequence, Analysis, Digraph, Rational, DEFAULT_CAP};

fn main() -> forest_atoms::Result<()> {
    let w = Rational::from_integer;
    let g = Digraph::from_arcs(
        &["a", "b", "c", "d"],
        &[("b", "a", w(1)), ("a", "c", w(2)), ("b", "d", w(2)), ("c", "b", w(3))],
    )?;
    let phi = phi_sequence(&g, DEFAULT_CAP)?;
    let shown: Vec<String> = phi.values().iter().map(ToString::to_string).collect();
    println!("phi: {}", shown.join(" "));
    for (k, marker) in convexity_profile(&phi) {
        println!("  k = {k}: {marker:?}");
    }
    let analysis = Analysis::compute(g.clone(), DEFAULT_CAP)?;
    for k in analysis.feasible_levels() {
        let forests: Vec<String> = analysis.minimal(k).iter().map(|f| f.display(&g)).collect();
        println!("k = {k}: {} of {} forests minimal: {}", forests.len(), analysis.census.count(k), forests.join(" "));
    }
    Ok(())
}
