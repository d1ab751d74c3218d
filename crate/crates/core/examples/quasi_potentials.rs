//! Reading transition exponents V_ij as arc weights and printing the level
//! structure they imply.

use forest_atoms::io::edgelist::parse_quasi_potentials;
use forest_atoms::{build_hierarchy, phi_sequence, DEFAULT_CAP};

const MATRIX: &str = "\
#!matrix
     w1   w2   w3
w1   -    2    -
w2   1/2  -    3/2
w3   -    1    -
";

fn main() -> forest_atoms::Result<()> {
    let g = parse_quasi_potentials(MATRIX)?.graph;
    let phi = phi_sequence(&g, DEFAULT_CAP)?;
    let shown: Vec<String> = phi.values().iter().map(ToString::to_string).collect();
    println!("phi: {}", shown.join(" "));
    for level in build_hierarchy(&g)? {
        println!("k = {}  gap = {}  states {}", level.k, level.gap, level.atoms.describe(&g).join(" "));
    }
    Ok(())
}
