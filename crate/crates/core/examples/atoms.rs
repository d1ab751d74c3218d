//! Atoms, labels and the measure rho per level, on the six-vertex example
//! that has no spanning tree. Starred atoms are labeled.

use forest_atoms::weight::format_rational;
use forest_atoms::{Analysis, Digraph, Rational, DEFAULT_CAP};

fn main() -> forest_atoms::Result<()> {
    let w = Rational::from_integer;
    let g = Digraph::from_arcs(
        &["alpha", "beta", "gamma", "zeta", "eta", "xi"],
        &[
            ("alpha", "zeta", w(2)),
            ("zeta", "alpha", w(2)),
            ("beta", "eta", w(1)),
            ("eta", "beta", w(1)),
            ("gamma", "xi", w(2)),
            ("xi", "gamma", w(2)),
            ("beta", "gamma", w(3)),
            ("eta", "zeta", w(3)),
        ],
    )?;
    let a = Analysis::compute(g.clone(), DEFAULT_CAP)?;
    for k in a.feasible_levels() {
        let fam = a.family(k).expect("feasible");
        let m = a.measure(k).expect("feasible");
        let rho: Vec<String> = m.rho.iter().map(|r| r.map_or("-".into(), |r| format_rational(&r))).collect();
        println!(
            "k = {k}  phi = {}  |minimal| = {}  atoms {}  rho [{}]",
            a.phi.get(k),
            a.minimal(k).len(),
            fam.describe(&g).join(" "),
            rho.join(", ")
        );
        if !m.well_defined {
            println!("        minimal forests disagree on the atoms marked -");
        }
    }
    Ok(())
}
