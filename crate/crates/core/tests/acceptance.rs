//! Acceptance run: one line per criterion, non-zero exit if any fails.

use std::time::{Duration, Instant};

use forest_atoms::io::campaign::{run_campaign, CampaignDocument, CampaignSpec, Ensemble};
use forest_atoms::verify::{StatementId as S, VerificationReport};
use forest_atoms::{
    atoms, convexity_profile, minimal_forests, phi_sequence, ConvexityMarker, Digraph, ExtWeight, Forest,
    Rational, VerifyOptions, DEFAULT_CAP,
};

type Check = Result<String, String>;

fn int(v: i128) -> Rational {
    Rational::from_integer(v)
}

fn ato() -> Digraph {
    Digraph::from_arcs(
        &["a", "b", "c", "d"],
        &[("b", "a", int(1)), ("a", "c", int(2)), ("b", "d", int(2)), ("c", "b", int(3))],
    )
    .unwrap()
}

fn woody() -> Digraph {
    Digraph::from_arcs(
        &["alpha", "beta", "gamma", "zeta", "eta", "xi"],
        &[
            ("alpha", "zeta", int(2)),
            ("zeta", "alpha", int(2)),
            ("beta", "eta", int(1)),
            ("eta", "beta", int(1)),
            ("gamma", "xi", int(2)),
            ("xi", "gamma", int(2)),
            ("beta", "gamma", int(3)),
            ("eta", "zeta", int(3)),
        ],
    )
    .unwrap()
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn sets(g: &Digraph, names: &[&[&str]]) -> Vec<forest_atoms::VertexSet> {
    names.iter().map(|s| g.vertex_set(s).unwrap()).collect()
}

fn golden() -> Check {
    let start = Instant::now();
    let g = ato();
    let phi = phi_sequence(&g, DEFAULT_CAP).map_err(|e| e.to_string())?;
    let expected = [ExtWeight::Infinite, int(7).into(), int(3).into(), int(1).into(), int(0).into()];
    ensure(phi.values() == expected, format!("phi = {:?}", phi.values()))?;
    let arcs: [&[(&str, &str)]; 4] = [
        &[("a", "c"), ("b", "d"), ("c", "b")],
        &[("a", "c"), ("b", "a")],
        &[("b", "a")],
        &[],
    ];
    for (k, want) in (1..=4).zip(arcs) {
        let tilde = minimal_forests(&g, k, DEFAULT_CAP).map_err(|e| e.to_string())?;
        let want = Forest::from_names(&g, want).map_err(|e| e.to_string())?;
        ensure(tilde.forests == [want], format!("minimal forests at k = {k} differ"))?;
    }
    let a2 = atoms(&g, 2, &minimal_forests(&g, 2, DEFAULT_CAP).unwrap()).unwrap();
    let a3 = atoms(&g, 3, &minimal_forests(&g, 3, DEFAULT_CAP).unwrap()).unwrap();
    ensure(a2.atoms() == sets(&g, &[&["a", "b", "c"], &["d"]]), "atoms at k = 2")?;
    ensure(a3.atoms() == sets(&g, &[&["a", "b"], &["c"], &["d"]]), "atoms at k = 3")?;
    let profile = convexity_profile(&phi);
    ensure(
        profile.iter().map(|&(k, m)| (k, m)).eq((1..4).map(|k| (k, ConvexityMarker::Strict))),
        format!("profile {profile:?}"),
    )?;
    let took = start.elapsed();
    ensure(took < Duration::from_secs(1), format!("took {took:.2?}"))?;
    Ok(format!("phi = [inf, 7, 3, 1, 0], one minimal forest per level, strict profile, {took:.2?}"))
}

fn negative_exhibit() -> Check {
    let g = ato();
    let ab = g.vertex_set(&["a", "b"]).unwrap();
    let f1 = &minimal_forests(&g, 1, DEFAULT_CAP).unwrap().forests[0];
    let f2 = &minimal_forests(&g, 2, DEFAULT_CAP).unwrap().forests[0];
    let a3 = atoms(&g, 3, &minimal_forests(&g, 3, DEFAULT_CAP).unwrap()).unwrap();
    ensure(a3.atoms().contains(&ab), "{a,b} is not an atom at k = 3")?;
    let c1 = f1.component_count_on(ab);
    ensure(c1 == 2 && !f1.is_tree_on(ab), format!("F1 on {{a,b}} has {c1} components"))?;
    ensure(f2.is_tree_on(ab), "F2 on {a,b} is not a tree")?;
    Ok("F1 on {a,b} has 2 components, F2 on {a,b} is a tree".into())
}

fn woody_example() -> Check {
    let g = woody();
    let phi = phi_sequence(&g, DEFAULT_CAP).map_err(|e| e.to_string())?;
    ensure(phi.get(1) == ExtWeight::Infinite, "phi^1 is finite")?;
    let a2 = atoms(&g, 2, &minimal_forests(&g, 2, DEFAULT_CAP).unwrap()).unwrap();
    let a3 = atoms(&g, 3, &minimal_forests(&g, 3, DEFAULT_CAP).unwrap()).unwrap();
    ensure(a2.same_partition(&a3), "families at k = 2 and 3 differ")?;
    ensure(a2.len() == 3 && a2.atoms().iter().all(|a| a.len() == 2), "expected three 2-element atoms")?;
    let mid = g.vertex_set(&["beta", "eta"]).unwrap();
    let i = a2.atoms().iter().position(|&a| a == mid).ok_or("{beta,eta} is not an atom")?;
    ensure(!a2.is_labeled(i), "{beta,eta} labeled at k = 2")?;
    ensure(a3.is_labeled(i), "{beta,eta} unlabeled at k = 3")?;
    ensure(a2.labeled_count() == 2 && a3.labeled_count() == 3, "labeled counts")?;
    Ok("phi^1 = inf, equal families of three pairs, {beta,eta} unlabeled at 2 and labeled at 3".into())
}

/// Zero failures and at least one instance checked for each statement.
fn clean(report: &VerificationReport, ids: &[S]) -> Result<String, String> {
    let mut checked = 0;
    for &id in ids {
        let r = report.get(id);
        if r.failures > 0 {
            let w = r.witnesses.first().map(|w| serde_json::to_string(w).unwrap()).unwrap_or_default();
            return Err(format!("{id}: {} counterexamples, first {w}", r.failures));
        }
        if r.checked == 0 {
            return Err(format!("{id}: never applicable"));
        }
        checked += r.checked;
    }
    Ok(format!("{checked} instances, 0 counterexamples"))
}

fn spec(ensemble: Ensemble, trials: usize, seed: u64) -> CampaignSpec {
    CampaignSpec {
        ensemble,
        min_vertices: 2,
        max_vertices: 7,
        trials,
        seed,
        weights: (1, 5),
        density: (0.25, 1.0),
    }
}

fn main() {
    let opts = VerifyOptions::default();
    let mut results: Vec<(usize, &str, Check)> = Vec::new();
    results.push((1, "golden four-vertex example", golden()));
    results.push((2, "negative exhibit below the atom level", negative_exhibit()));
    results.push((3, "example without a spanning tree", woody_example()));

    let main_spec = spec(Ensemble::Weighted, 500, 20240501);
    let start = Instant::now();
    let campaign: Result<CampaignDocument, String> =
        run_campaign(&main_spec, &opts, 4, true).map_err(|e| e.to_string());
    let took = start.elapsed();
    match &campaign {
        Ok(doc) => {
            let r = &doc.report;
            let within = if took <= Duration::from_secs(300) {
                Ok(())
            } else {
                Err(format!("took {took:.2?}"))
            };
            let c4 = within.and_then(|()| clean(r, &[S::T5, S::T5Prime])).map(|m| {
                format!("{} graphs, {m}, {took:.2?}", r.graphs)
            });
            results.push((4, "minimal forests are trees on atoms", c4));
            results.push((5, "(k-1)-forests are trees on k-atoms", clean(r, &[S::T6])));
            let suite = [
                S::P4, S::P5, S::P7, S::P8, S::P10, S::P11, S::P6, S::L3, S::Cor1, S::T2, S::L4, S::L1,
                S::P1, S::P12, S::P13, S::P14, S::Prop2, S::T4, S::C1, S::C2, S::C3, S::C4, S::L5,
                S::L6, S::L7,
            ];
            let all_clean = ensure(r.is_clean(), format!("{} failures elsewhere", r.failures()));
            results.push((6, "structural property suite", all_clean.and_then(|()| clean(r, &suite))));
        }
        Err(e) => {
            for (i, name) in [(4, "minimal forests are trees on atoms"), (5, "(k-1)-forests are trees on k-atoms"), (6, "structural property suite")] {
                results.push((i, name, Err(e.clone())));
            }
        }
    }

    let special = (|| -> Check {
        let unit = run_campaign(&spec(Ensemble::Unit, 300, 7), &opts, 4, false).map_err(|e| e.to_string())?;
        let sym = run_campaign(&spec(Ensemble::Symmetric, 300, 11), &opts, 4, false).map_err(|e| e.to_string())?;
        ensure(unit.report.is_clean(), format!("unit ensemble: {} failures", unit.report.failures()))?;
        ensure(sym.report.is_clean(), format!("symmetric ensemble: {} failures", sym.report.failures()))?;
        let a = clean(&unit.report, &[S::T7])?;
        let b = clean(&sym.report, &[S::Undirected])?;
        Ok(format!("unit: {a}; symmetric: {b}"))
    })();
    results.push((7, "unit-weight and undirected ensembles", special));

    let determinism = campaign.and_then(|a| {
        let b = run_campaign(&main_spec, &opts, 1, true).map_err(|e| e.to_string())?;
        let (ja, jb) = (a.to_json(), b.to_json());
        ensure(a.trials.len() == 500, "documents missing")?;
        ensure(ja == jb, "documents differ between 4 and 1 workers")?;
        Ok(format!("{} bytes identical with 4 and 1 workers", ja.len()))
    });
    results.push((8, "determinism across worker counts", determinism));

    let mut failed = 0;
    for (i, name, r) in &results {
        match r {
            Ok(m) => println!("criterion {i} PASS: {name}: {m}"),
            Err(m) => {
                failed += 1;
                println!("criterion {i} FAIL: {name}: {m}");
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
