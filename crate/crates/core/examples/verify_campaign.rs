//! Runs a seeded random campaign and prints the per-statement table.
//!
//! cargo run --release --example verify_campaign -- "n=7,trials=500,seed=1,weights=1..5"

use std::time::Instant;

use forest_atoms::io::campaign::{run_campaign, CampaignSpec};
use forest_atoms::verify::VerifyOptions;

fn main() {
    let arg = std::env::args().nth(1).unwrap_or_else(|| "n=6,trials=100,seed=1".to_string());
    let spec = CampaignSpec::parse(&arg).expect("campaign parameters");
    let start = Instant::now();
    let doc = run_campaign(&spec, &VerifyOptions::default(), 0, false).expect("campaign");
    print!("{}", doc.report.table());
    println!("{}", doc.report.summary());
    println!("{} graphs in {:.2?}", doc.report.graphs, start.elapsed());
    for w in doc.report.witnesses().take(3) {
        println!("{}", serde_json::to_string(w).unwrap());
    }
}
