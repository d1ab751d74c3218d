//! Seeded random campaigns: many small graphs, each analysed and verified.
//!
//! Trial `t` draws its graph from a ChaCha8 stream selected by `t`, so any
//! trial can be regenerated alone and the outcome does not depend on how
//! trials are scheduled across threads.

use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::Analysis;
use crate::error::{Error, Result};
use crate::graph::{Digraph, DigraphBuilder};
use crate::io::document::{AnalysisDocument, VerificationSection};
use crate::verify::{verify_analysis, VerificationReport, VerifyOptions};
use crate::weight::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ensemble {
    /// Each ordered pair is an arc with probability `p`, integer weight
    /// drawn uniformly from the range.
    Weighted,
    /// As `Weighted`, every weight 1. Missing arcs are the only structure.
    Unit,
    /// Each unordered pair is an edge with probability `p`: two opposite
    /// arcs of one weight.
    Symmetric,
}

impl FromStr for Ensemble {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "weighted" => Ok(Ensemble::Weighted),
            "unit" => Ok(Ensemble::Unit),
            "symmetric" => Ok(Ensemble::Symmetric),
            other => Err(Error::NotApplicable(format!("unknown ensemble `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignSpec {
    pub ensemble: Ensemble,
    /// Vertex count, uniform in `min_vertices..=max_vertices`.
    pub min_vertices: usize,
    pub max_vertices: usize,
    pub trials: usize,
    pub seed: u64,
    /// Inclusive integer weight range.
    pub weights: (i64, i64),
    /// Arc probability, uniform in this range per graph.
    pub density: (f64, f64),
}

impl Default for CampaignSpec {
    fn default() -> Self {
        CampaignSpec {
            ensemble: Ensemble::Weighted,
            min_vertices: 2,
            max_vertices: 6,
            trials: 100,
            seed: 0,
            weights: (1, 5),
            density: (0.25, 1.0),
        }
    }
}

impl CampaignSpec {
    /// Parses `n=7,trials=500,seed=1,weights=1..5` style overrides; keys
    /// not given keep their defaults. Also accepted: `min_n`, `ensemble`,
    /// `density=lo..hi`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut spec = CampaignSpec::default();
        let bad = |m: String| Error::Parse {
            line: 1,
            column: 1,
            message: m,
        };
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key=value, found `{part}`")))?;
            let num = |v: &str| v.trim().parse::<u64>().map_err(|_| bad(format!("`{key}` needs an integer")));
            match key.trim() {
                "n" => spec.max_vertices = num(value)? as usize,
                "min_n" => spec.min_vertices = num(value)? as usize,
                "trials" => spec.trials = num(value)? as usize,
                "seed" => spec.seed = num(value)?,
                "ensemble" => spec.ensemble = value.trim().parse()?,
                "weights" => {
                    let (lo, hi) = value.split_once("..").ok_or_else(|| bad("weights need lo..hi".into()))?;
                    let p = |v: &str| v.trim().parse::<i64>().map_err(|_| bad("weights need integers".into()));
                    spec.weights = (p(lo)?, p(hi)?);
                }
                "density" => {
                    let (lo, hi) = value.split_once("..").ok_or_else(|| bad("density needs lo..hi".into()))?;
                    let p = |v: &str| v.trim().parse::<f64>().map_err(|_| bad("density needs numbers".into()));
                    spec.density = (p(lo)?, p(hi)?);
                }
                other => return Err(bad(format!("unknown campaign key `{other}`"))),
            }
        }
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Error::Parse {
            line: 1,
            column: 1,
            message: m.to_string(),
        };
        if self.min_vertices == 0 || self.min_vertices > self.max_vertices {
            return Err(bad("vertex range must satisfy 1 <= min_n <= n"));
        }
        if self.weights.0 > self.weights.1 {
            return Err(bad("empty weight range"));
        }
        let (lo, hi) = self.density;
        if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
            return Err(bad("density range must lie in [0, 1]"));
        }
        Ok(())
    }

    /// The graph of trial `trial`.
    pub fn graph(&self, trial: usize) -> Digraph {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trial as u64);
        let n = rng.gen_range(self.min_vertices..=self.max_vertices);
        let p = if self.density.0 < self.density.1 {
            rng.gen_range(self.density.0..=self.density.1)
        } else {
            self.density.0
        };
        let weight = |rng: &mut ChaCha8Rng| match self.ensemble {
            Ensemble::Unit => 1,
            _ => rng.gen_range(self.weights.0..=self.weights.1),
        };
        let mut b = DigraphBuilder::new();
        let names: Vec<String> = (0..n).map(|v| format!("v{v}")).collect();
        for name in &names {
            b.add_vertex(name);
        }
        for i in 0..n {
            for j in 0..n {
                let pair = match self.ensemble {
                    Ensemble::Symmetric => i < j,
                    _ => i != j,
                };
                if !pair || !rng.gen_bool(p) {
                    continue;
                }
                let w = Rational::from_integer(i128::from(weight(&mut rng)));
                b.add_arc(&names[i], &names[j], w).expect("distinct endpoints");
                if self.ensemble == Ensemble::Symmetric {
                    b.add_arc(&names[j], &names[i], w).expect("distinct endpoints");
                }
            }
        }
        b.build().expect("at least one vertex")
    }
}

/// Merged outcome of a campaign, plus the per-trial documents when asked.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignDocument {
    pub schema: String,
    pub version: u32,
    pub spec: CampaignSpec,
    pub options: VerifyOptions,
    pub report: VerificationReport,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trials: Vec<AnalysisDocument>,
}

impl CampaignDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize") + "\n"
    }
}

/// Runs the campaign on `threads` workers (`0` picks the rayon default).
pub fn run_campaign(
    spec: &CampaignSpec,
    opts: &VerifyOptions,
    threads: usize,
    keep_documents: bool,
) -> Result<CampaignDocument> {
    spec.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    let results: Vec<Result<(VerificationReport, Option<AnalysisDocument>)>> = pool.install(|| {
        (0..spec.trials)
            .into_par_iter()
            .map(|t| {
                let analysis = Analysis::compute(spec.graph(t), opts.cap)?;
                let report = verify_analysis(&analysis, opts);
                let doc = keep_documents.then(|| {
                    AnalysisDocument::build(
                        &analysis,
                        Some(VerificationSection {
                            options: opts.clone(),
                            report: report.clone(),
                        }),
                    )
                });
                Ok((report, doc))
            })
            .collect()
    });
    let mut report = VerificationReport::new();
    let mut trials = Vec::new();
    for r in results {
        let (one, doc) = r?;
        report.merge(one, opts.witness_limit, opts.exhibit_limit);
        trials.extend(doc);
    }
    Ok(CampaignDocument {
        schema: "forest-atoms/campaign".to_string(),
        version: 1,
        spec: spec.clone(),
        options: opts.clone(),
        report,
        trials,
    })
}
