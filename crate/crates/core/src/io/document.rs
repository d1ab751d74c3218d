//! Versioned JSON record of one analysis.
//!
//! Exact values are strings (`"7"`, `"3/2"`, `"inf"`). Field order is fixed
//! by the struct definitions, so the same input always serializes to the
//! same bytes.

use serde::{Deserialize, Serialize};

use crate::analysis::Analysis;
use crate::enumerate::{convexity_profile, ConvexityMarker};
use crate::error::{Error, Result};
use crate::graph::Digraph;
use crate::hierarchy::hierarchy_from;
use crate::verify::{verify_analysis, GraphEcho, VerificationReport, VerifyOptions};
use crate::weight::format_rational;

pub const SCHEMA: &str = "forest-atoms/analysis";
pub const VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisDocument {
    pub schema: String,
    pub version: u32,
    pub graph: GraphEcho,
    /// `φ^0, …, φ^N`.
    pub phi: Vec<String>,
    pub convexity: Vec<ConvexityEntry>,
    /// One entry per `k` in `1..=N`.
    pub levels: Vec<LevelDocument>,
    pub hierarchy: Vec<HierarchyDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationSection>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvexityEntry {
    pub k: usize,
    pub marker: ConvexityMarker,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelDocument {
    pub k: usize,
    pub phi: String,
    /// Number of spanning forests with `k` trees.
    pub forest_count: u64,
    pub minimal_forests: Vec<Vec<(String, String)>>,
    pub atoms: Vec<AtomEntry>,
    pub well_defined: bool,
    /// Out-weight of every atom in every minimal forest, kept only when the
    /// forests disagree.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub per_forest: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomEntry {
    pub vertices: Vec<String>,
    pub labeled: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HierarchyDocument {
    pub k: usize,
    pub gap: String,
    pub atoms: Vec<Vec<String>>,
    pub aggregation: Vec<usize>,
    pub labeled_support: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationSection {
    pub options: VerifyOptions,
    pub report: VerificationReport,
}

impl AnalysisDocument {
    pub fn build(analysis: &Analysis, verification: Option<VerificationSection>) -> Self {
        let g = &analysis.graph;
        let levels = (1..=analysis.n())
            .map(|k| {
                let atoms = analysis.family(k).map_or_else(Vec::new, |fam| {
                    let rho = analysis.measure(k).map(|m| m.rho.clone()).unwrap_or_default();
                    fam.atoms()
                        .iter()
                        .enumerate()
                        .map(|(i, &a)| AtomEntry {
                            vertices: g.set_names(a),
                            labeled: fam.is_labeled(i),
                            rho: rho.get(i).copied().flatten().map(|r| format_rational(&r)),
                        })
                        .collect()
                });
                let measure = analysis.measure(k);
                let well_defined = measure.is_some_and(|m| m.well_defined);
                LevelDocument {
                    k,
                    phi: analysis.phi.get(k).to_string(),
                    forest_count: analysis.census.count(k),
                    minimal_forests: analysis.minimal(k).iter().map(|f| f.named_arcs(g)).collect(),
                    atoms,
                    well_defined,
                    per_forest: match measure {
                        Some(m) if !m.well_defined => m
                            .per_forest
                            .iter()
                            .map(|row| row.iter().map(format_rational).collect())
                            .collect(),
                        _ => Vec::new(),
                    },
                }
            })
            .collect();
        let hierarchy = hierarchy_from(analysis)
            .into_iter()
            .map(|l| HierarchyDocument {
                k: l.k,
                gap: l.gap.to_string(),
                atoms: l.atoms.atoms().iter().map(|&a| g.set_names(a)).collect(),
                aggregation: l.aggregation,
                labeled_support: l.labeled_support,
            })
            .collect();
        AnalysisDocument {
            schema: SCHEMA.to_string(),
            version: VERSION,
            graph: GraphEcho::of(g),
            phi: analysis.phi.values().iter().map(ToString::to_string).collect(),
            convexity: convexity_profile(&analysis.phi)
                .into_iter()
                .map(|(k, marker)| ConvexityEntry { k, marker })
                .collect(),
            levels,
            hierarchy,
            verification,
        }
    }

    /// Analyses `graph` and, when `verify` is set, runs the checks too.
    pub fn analyze(graph: &Digraph, opts: &VerifyOptions, verify: bool) -> Result<Self> {
        let analysis = Analysis::compute(graph.clone(), opts.cap)?;
        let verification = verify.then(|| VerificationSection {
            options: opts.clone(),
            report: verify_analysis(&analysis, opts),
        });
        Ok(Self::build(&analysis, verification))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: AnalysisDocument = serde_json::from_str(text)?;
        if doc.schema != SCHEMA || doc.version != VERSION {
            return Err(Error::Verification(format!(
                "unsupported document {} v{}",
                doc.schema, doc.version
            )));
        }
        Ok(doc)
    }
}

/// Result of recomputing a document from its graph echo.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Replay {
    pub recomputed: AnalysisDocument,
    /// Top-level sections whose content changed.
    pub differences: Vec<&'static str>,
}

impl Replay {
    pub fn matches(&self) -> bool {
        self.differences.is_empty()
    }
}

/// Rebuilds the graph from the document and recomputes every section with
/// the recorded options.
pub fn replay(doc: &AnalysisDocument) -> Result<Replay> {
    let graph = doc.graph.to_digraph()?;
    let opts = doc.verification.as_ref().map_or_else(
        || VerifyOptions {
            cap: VerifyOptions::default().cap.max(graph.vertex_count()),
            ..VerifyOptions::default()
        },
        |v| v.options.clone(),
    );
    let recomputed = AnalysisDocument::analyze(&graph, &opts, doc.verification.is_some())?;
    let mut differences = Vec::new();
    let mut note = |same: bool, name: &'static str| {
        if !same {
            differences.push(name);
        }
    };
    note(recomputed.graph == doc.graph, "graph");
    note(recomputed.phi == doc.phi, "phi");
    note(recomputed.convexity == doc.convexity, "convexity");
    note(recomputed.levels == doc.levels, "levels");
    note(recomputed.hierarchy == doc.hierarchy, "hierarchy");
    note(recomputed.verification == doc.verification, "verification");
    Ok(Replay {
        recomputed,
        differences,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::edgelist::parse_edge_list;

    fn ato() -> Digraph {
        parse_edge_list("a\nb\nc\nd\nb a 1\na c 2\nb d 2\nc b 3\n").unwrap().graph
    }

    #[test]
    fn records_phi_and_atoms() {
        let doc = AnalysisDocument::analyze(&ato(), &VerifyOptions::default(), false).unwrap();
        assert_eq!(doc.phi, ["inf", "7", "3", "1", "0"]);
        let l3 = &doc.levels[2];
        assert_eq!(l3.atoms.len(), 3);
        assert_eq!(l3.atoms[0].vertices, ["a", "b"]);
        assert_eq!(l3.atoms[0].rho.as_deref(), Some("1"));
        assert_eq!(doc.hierarchy.iter().map(|h| h.gap.as_str()).collect::<Vec<_>>(), ["inf", "4", "2", "1"]);
        assert!(doc.to_json().contains("\"inf\""));
    }

    #[test]
    fn json_round_trip_and_replay() {
        let doc = AnalysisDocument::analyze(&ato(), &VerifyOptions::default(), true).unwrap();
        let back = AnalysisDocument::from_json(&doc.to_json()).unwrap();
        assert_eq!(back, doc);
        let r = replay(&back).unwrap();
        assert!(r.matches(), "{:?}", r.differences);
    }

    #[test]
    fn tampering_is_detected() {
        let mut doc = AnalysisDocument::analyze(&ato(), &VerifyOptions::default(), false).unwrap();
        doc.phi[2] = "4".into();
        doc.levels[1].atoms.pop();
        let r = replay(&doc).unwrap();
        assert_eq!(r.differences, ["phi", "levels"]);
    }

    #[test]
    fn rejects_other_schemas() {
        let mut doc = AnalysisDocument::analyze(&ato(), &VerifyOptions::default(), false).unwrap();
        doc.version = 9;
        assert!(AnalysisDocument::from_json(&doc.to_json()).is_err());
    }
}
