//! Symmetric graphs: at every strict level there are exactly k atoms, all
//! labeled, and they are the trees of every minimal forest.

use forest_atoms::atoms::undirected_check;
use forest_atoms::io::campaign::{CampaignSpec, Ensemble};
use forest_atoms::{Analysis, DEFAULT_CAP};

fn main() -> forest_atoms::Result<()> {
    let spec = CampaignSpec { ensemble: Ensemble::Symmetric, max_vertices: 6, trials: 5, seed: 3, ..CampaignSpec::default() };
    for t in 0..spec.trials {
        let g = spec.graph(t);
        let a = Analysis::compute(g.clone(), DEFAULT_CAP)?;
        println!("trial {t}: N = {}, {} edges", g.vertex_count(), g.arc_count() / 2);
        for k in a.feasible_levels() {
            let c = undirected_check(&g, &a.census, k)?;
            let fam = a.family(k).expect("feasible");
            println!(
                "  k = {k} {:<6} atoms {}{}",
                if c.strict { "strict" } else { "equal" },
                fam.describe(&g).join(" "),
                if c.strict { format!("  holds: {}", c.holds()) } else { String::new() }
            );
        }
    }
    Ok(())
}
