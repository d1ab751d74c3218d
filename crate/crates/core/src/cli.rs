//! Command implementations behind the `forest-atoms` binary.
//!
//! Each command writes to the given sink and returns the process exit code,
//! so the commands can be driven directly from tests.

use std::io::Write;
use std::path::Path;

use crate::analysis::Analysis;
use crate::enumerate::{convexity_profile, ConvexityMarker};
use crate::error::{Error, Result};
use crate::graph::Digraph;
use crate::hierarchy::hierarchy_from;
use crate::io::campaign::{run_campaign, CampaignSpec};
use crate::io::document::{replay, AnalysisDocument, VerificationSection};
use crate::io::dot::hierarchy_dot;
use crate::io::edgelist::{read_graph, ParsedGraph};
use crate::verify::{verify_analysis, Fault, VerificationReport, VerifyOptions, Witness};
use crate::weight::format_rational;

pub const EXIT_OK: u8 = 0;
pub const EXIT_COUNTEREXAMPLE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_CAP: u8 = 3;
pub const EXIT_INFEASIBLE: u8 = 4;
pub const EXIT_IO: u8 = 5;

pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::CapExceeded { .. } => EXIT_CAP,
        Error::Infeasible { .. } => EXIT_INFEASIBLE,
        Error::Io(_) | Error::Json(_) => EXIT_IO,
        Error::Verification(_) => EXIT_COUNTEREXAMPLE,
        _ => EXIT_USAGE,
    }
}

/// Flags shared by every command.
#[derive(Clone, Debug, Default)]
pub struct Common {
    pub json: bool,
    pub quiet: bool,
    pub cap: Option<usize>,
}

impl Common {
    fn options(&self) -> VerifyOptions {
        let mut opts = VerifyOptions::default();
        if let Some(cap) = self.cap {
            opts.cap = cap;
        }
        opts
    }
}

pub fn load(path: &Path, err: &mut dyn Write, common: &Common) -> Result<Digraph> {
    let ParsedGraph { graph, warnings } = read_graph(path).map_err(|e| match e {
        Error::Io(io) => Error::Io(std::io::Error::new(io.kind(), format!("{}: {io}", path.display()))),
        other => other,
    })?;
    if !common.quiet {
        for w in warnings {
            let _ = writeln!(err, "warning: {w}");
        }
    }
    Ok(graph)
}

fn marker_name(m: ConvexityMarker) -> &'static str {
    match m {
        ConvexityMarker::Strict => "strict",
        ConvexityMarker::Equal => "equal",
        ConvexityMarker::Undefined => "undefined",
        ConvexityMarker::Violated => "VIOLATED",
    }
}

fn print_json(out: &mut dyn Write, value: &impl serde::Serialize) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(value)?)?;
    Ok(())
}

pub fn cmd_phi(graph: &Digraph, common: &Common, out: &mut dyn Write) -> Result<u8> {
    let analysis = Analysis::compute(graph.clone(), common.options().cap)?;
    let doc = AnalysisDocument::build(&analysis, None);
    if common.json {
        print_json(out, &serde_json::json!({ "phi": doc.phi, "convexity": doc.convexity }))?;
        return Ok(EXIT_OK);
    }
    writeln!(out, "phi: {}", doc.phi.join(" "))?;
    let profile: Vec<String> = convexity_profile(&analysis.phi)
        .into_iter()
        .map(|(k, m)| format!("{k}:{}", marker_name(m)))
        .collect();
    writeln!(out, "convexity: {}", if profile.is_empty() { "-".to_string() } else { profile.join(" ") })?;
    Ok(EXIT_OK)
}

pub fn cmd_atoms(graph: &Digraph, k: usize, common: &Common, out: &mut dyn Write) -> Result<u8> {
    let n = graph.vertex_count();
    if k == 0 || k > n {
        return Err(Error::LevelOutOfRange { k, n });
    }
    let analysis = Analysis::compute(graph.clone(), common.options().cap)?;
    let Some(fam) = analysis.family(k) else {
        return Err(Error::Infeasible { k });
    };
    if common.json {
        let doc = AnalysisDocument::build(&analysis, None);
        print_json(out, &doc.levels[k - 1])?;
        return Ok(EXIT_OK);
    }
    let m = analysis.measure(k).expect("feasible level has a measure");
    writeln!(out, "k = {k}, phi^{k} = {}, minimal forests: {}", analysis.phi.get(k), analysis.minimal(k).len())?;
    writeln!(out, "atoms: [{}]", fam.describe(graph).join(", "))?;
    if m.well_defined {
        let rho: Vec<String> = m.rho.iter().map(|r| r.map_or("?".into(), |r| format_rational(&r))).collect();
        writeln!(out, "rho: [{}]", rho.join(", "))?;
    } else {
        writeln!(out, "rho: not well defined; out-weights per minimal forest:")?;
        for (f, row) in analysis.minimal(k).iter().zip(&m.per_forest) {
            let row: Vec<String> = row.iter().map(format_rational).collect();
            writeln!(out, "  {}: [{}]", f.display(graph), row.join(", "))?;
        }
    }
    Ok(EXIT_OK)
}

/// Where `verify` takes its graphs from.
#[derive(Clone, Debug)]
pub enum VerifySource<'a> {
    File(&'a Path),
    Random(CampaignSpec),
    /// Recompute a saved analysis document and compare.
    Replay(&'a Path),
    /// Run on the built-in four-vertex example with a corrupted oracle.
    SelfTest,
}

#[derive(Clone, Debug, Default)]
pub struct VerifyArgs {
    pub upto: Option<usize>,
    pub threads: usize,
    pub witness: Option<std::path::PathBuf>,
}

/// The four-vertex example used by the self test.
pub fn builtin_example() -> Digraph {
    crate::io::edgelist::parse_edge_list("a\nb\nc\nd\nb a 1\na c 2\nb d 2\nc b 3\n")
        .expect("built-in example parses")
        .graph
}

fn write_witnesses(path: &Path, witnesses: &[&Witness]) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(witnesses)? + "\n")
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn finish(report: &VerificationReport, args: &VerifyArgs, common: &Common, out: &mut dyn Write) -> Result<u8> {
    if !common.json {
        if !common.quiet {
            write!(out, "{}", report.table())?;
        }
        writeln!(out, "{}", report.summary())?;
    }
    if report.is_clean() {
        return Ok(EXIT_OK);
    }
    let path = args.witness.clone().unwrap_or_else(|| "witnesses.json".into());
    let witnesses: Vec<&Witness> = report.witnesses().collect();
    write_witnesses(&path, &witnesses)?;
    if !common.json {
        writeln!(out, "{} witnesses written to {}", witnesses.len(), path.display())?;
    }
    Ok(EXIT_COUNTEREXAMPLE)
}

pub fn cmd_verify(source: VerifySource<'_>, args: &VerifyArgs, common: &Common, out: &mut dyn Write) -> Result<u8> {
    let mut opts = common.options();
    opts.upto = args.upto;
    match source {
        VerifySource::File(path) => {
            let graph = load(path, &mut std::io::stderr(), common)?;
            verify_one(&graph, &opts, args, common, out)
        }
        VerifySource::SelfTest => {
            opts.fault = Some(Fault::MergeAtoms);
            if !common.quiet && !common.json {
                writeln!(out, "self test: atoms merged on purpose, counterexamples expected")?;
            }
            verify_one(&builtin_example(), &opts, args, common, out)
        }
        VerifySource::Random(spec) => {
            let doc = run_campaign(&spec, &opts, args.threads, false)?;
            if common.json {
                print_json(out, &doc)?;
            } else if !common.quiet {
                writeln!(out, "{} graphs, seed {}", doc.report.graphs, spec.seed)?;
            }
            finish(&doc.report, args, common, out)
        }
        VerifySource::Replay(path) => {
            let text = std::fs::read_to_string(path)?;
            let doc = AnalysisDocument::from_json(&text)?;
            let r = replay(&doc)?;
            if common.json {
                print_json(out, &serde_json::json!({ "matches": r.matches(), "differences": r.differences }))?;
            } else if r.matches() {
                writeln!(out, "replay: document reproduced")?;
            } else {
                writeln!(out, "replay: sections differ: {}", r.differences.join(", "))?;
            }
            if !r.matches() {
                return Ok(EXIT_COUNTEREXAMPLE);
            }
            match r.recomputed.verification {
                Some(v) => finish(&v.report, args, common, out),
                None => Ok(EXIT_OK),
            }
        }
    }
}

fn verify_one(graph: &Digraph, opts: &VerifyOptions, args: &VerifyArgs, common: &Common, out: &mut dyn Write) -> Result<u8> {
    let analysis = Analysis::compute(graph.clone(), opts.cap)?;
    let report = verify_analysis(&analysis, opts);
    if common.json {
        let doc = AnalysisDocument::build(
            &analysis,
            Some(VerificationSection {
                options: opts.clone(),
                report: report.clone(),
            }),
        );
        write!(out, "{}", doc.to_json())?;
    }
    finish(&report, args, common, out)
}

pub fn cmd_hierarchy(graph: &Digraph, dot: Option<&Path>, common: &Common, out: &mut dyn Write) -> Result<u8> {
    let analysis = Analysis::compute(graph.clone(), common.options().cap)?;
    let levels = hierarchy_from(&analysis);
    if let Some(path) = dot {
        std::fs::write(path, hierarchy_dot(graph, &levels))
            .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    }
    if common.json {
        print_json(out, &AnalysisDocument::build(&analysis, None).hierarchy)?;
        return Ok(EXIT_OK);
    }
    for level in &levels {
        writeln!(
            out,
            "k = {}  gap = {}  atoms: [{}]",
            level.k,
            level.gap,
            level.atoms.describe(graph).join(", ")
        )?;
    }
    Ok(EXIT_OK)
}

/// Analysis document with verification, as written by `analyze`.
pub fn cmd_analyze(graph: &Digraph, verify: bool, common: &Common, out: &mut dyn Write) -> Result<u8> {
    let doc = AnalysisDocument::analyze(graph, &common.options(), verify)?;
    write!(out, "{}", doc.to_json())?;
    let clean = doc.verification.as_ref().is_none_or(|v| v.report.is_clean());
    Ok(if clean { EXIT_OK } else { EXIT_COUNTEREXAMPLE })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(f: impl FnOnce(&mut Vec<u8>) -> Result<u8>) -> (Result<u8>, String) {
        let mut buf = Vec::new();
        let code = f(&mut buf);
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn phi_line() {
        let (code, text) = run(|o| cmd_phi(&builtin_example(), &Common::default(), o));
        assert_eq!(code.unwrap(), 0);
        assert!(text.starts_with("phi: inf 7 3 1 0\n"), "{text}");
        assert!(text.contains("convexity: 1:strict 2:strict 3:strict"));
    }

    #[test]
    fn atoms_and_errors() {
        let g = builtin_example();
        let (_, text) = run(|o| cmd_atoms(&g, 3, &Common::default(), o));
        assert!(text.contains("atoms: [{a,b}*, {c}*, {d}*]"), "{text}");
        assert!(text.contains("rho: [1, 0, 0]"));
        let (code, _) = run(|o| cmd_atoms(&g, 0, &Common::default(), o));
        assert_eq!(exit_code(&code.unwrap_err()), EXIT_USAGE);
        let lone = Digraph::from_indexed(2, &[]).unwrap();
        let (code, _) = run(|o| cmd_atoms(&lone, 1, &Common::default(), o));
        let err = code.unwrap_err();
        assert_eq!(exit_code(&err), EXIT_INFEASIBLE);
        assert!(err.to_string().contains("phi^1 = inf"));
        let cap = Common { cap: Some(3), ..Common::default() };
        let (code, _) = run(|o| cmd_phi(&g, &cap, o));
        assert_eq!(exit_code(&code.unwrap_err()), EXIT_CAP);
    }

    #[test]
    fn self_test_writes_witnesses() {
        let dir = tempfile::tempdir().unwrap();
        let args = VerifyArgs { witness: Some(dir.path().join("w.json")), ..VerifyArgs::default() };
        let (code, text) = run(|o| cmd_verify(VerifySource::SelfTest, &args, &Common::default(), o));
        assert_eq!(code.unwrap(), EXIT_COUNTEREXAMPLE);
        assert!(text.contains("counterexamples: "));
        let saved: Vec<Witness> = serde_json::from_str(&std::fs::read_to_string(dir.path().join("w.json")).unwrap()).unwrap();
        assert!(!saved.is_empty());
        assert!(saved.iter().all(|w| w.fault == Some(Fault::MergeAtoms)));
    }

    #[test]
    fn hierarchy_lines_and_unwritable_dot() {
        let g = builtin_example();
        let (_, text) = run(|o| cmd_hierarchy(&g, None, &Common::default(), o));
        assert_eq!(text.lines().count(), 4);
        assert!(text.starts_with("k = 1  gap = inf  atoms: [{a,b,c,d}*]"), "{text}");
        let bad = Path::new("/nonexistent-dir/x.dot");
        let (code, _) = run(|o| cmd_hierarchy(&g, Some(bad), &Common::default(), o));
        assert_eq!(exit_code(&code.unwrap_err()), EXIT_IO);
    }
}
