use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forest::Forest;
use crate::graph::Digraph;
use crate::vset::VertexSet;
use crate::weight::{format_rational, parse_rational};

use super::Fault;

macro_rules! statements {
    ($($variant:ident => $name:literal, $about:literal;)*) => {
        /// Identifiers of the checked statements.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        pub enum StatementId {
            $(#[serde(rename = $name)] $variant,)*
        }

        impl StatementId {
            pub const ALL: &'static [StatementId] = &[$(StatementId::$variant,)*];

            pub fn name(self) -> &'static str {
                match self { $(StatementId::$variant => $name,)* }
            }

            pub fn about(self) -> &'static str {
                match self { $(StatementId::$variant => $about,)* }
            }
        }

        impl FromStr for StatementId {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($name => Ok(StatementId::$variant),)*
                    other => Err(Error::NotApplicable(format!("unknown statement `{other}`"))),
                }
            }
        }
    };
}

statements! {
    Convexity => "Conv", "phi is convex, finite from the first feasible level, phi^N = 0";
    L1 => "L1", "guarded arc replacement yields a forest";
    L2 => "L2", "three-atom placement";
    L3 => "L3", "at most one exit of an unlabeled atom leaves its tree";
    L4 => "L4", "one arc from U into E u S when a shielded separating forest exists";
    L5 => "L5", "tree-partition blocks are inside or outside generator subtrees";
    L6 => "L6", "quotient reachability equals block reachability";
    L7 => "L7", "a block family has a block reaching no other";
    C1 => "C1", "subtrees are disjoint or one holds the other's root";
    C2 => "C2", "maximal subtrees are disjoint or nested";
    C3 => "C3", "a vertex set in a tree has a member reaching no other";
    C4 => "C4", "paths avoiding D ignore rewrites inside D";
    P1 => "P1", "replacement cases (a)-(e) give forests both ways";
    P2 => "P2", "replacement between levels preserves minimality by root count";
    P3 => "P3", "two atoms are split by some minimal forest";
    P4 => "P4", "atoms refine along increasing k";
    P5 => "P5", "equality collapses consecutive algebras";
    P6 => "P6", "out-arc counts per algebra element are forest independent";
    P7 => "P7", "k labeled atoms at a strict level";
    P8 => "P8", "one labeled atom per tree";
    P9 => "P9", "a shielded forest with the same exits exists";
    P10 => "P10", "rho is well defined";
    P11 => "P11", "rho sums to phi^k over partitions";
    P12 => "P12", "replacement on an algebra element stays minimal";
    P13 => "P13", "replacement on an unentered element stays minimal";
    P14 => "P14", "out-weight lower bounds on atoms over all forests";
    P15 => "P15", "minimal forests restrict to trees on labeled atoms";
    P16 => "P16", "a (k-1)-forest differs from a k-forest on one labeled atom";
    P17 => "P17", "restrictions of (k-1)-forests to unlabeled atoms";
    Prop1 => "Prop1", "hypothesis at a strict level spreads over its equality run";
    Prop2 => "Prop2", "detached set is disjoint from the atom and a disjoint union";
    Cor1 => "Cor1", "one arc from an unlabeled atom into any atom";
    T1 => "T1", "hypothesis at strict levels implies it everywhere";
    T2 => "T2", "an arc into a labeled atom is the only exit";
    T3 => "T3", "components of F|U carry forest-independent weights";
    T4 => "T4", "detaching incoming arcs keeps minimality";
    T5 => "T5", "minimal forests restrict to trees on atoms";
    T5Prime => "T5'", "atoms form a tree partition of every minimal forest";
    T6 => "T6", "(k-1)-minimal forests restrict to trees on k-atoms";
    T7 => "T7", "unit weights: first feasible level restricts to trees";
    Undirected => "Undirected", "symmetric graphs: k atoms, all labeled, equal to trees";
}

impl fmt::Display for StatementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Vertex names and arcs with exact weights as text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphEcho {
    pub vertices: Vec<String>,
    pub arcs: Vec<(String, String, String)>,
}

impl GraphEcho {
    pub fn of(graph: &Digraph) -> Self {
        GraphEcho {
            vertices: graph.names().to_vec(),
            arcs: graph
                .arcs()
                .map(|(i, j, w)| {
                    (graph.name(i).to_string(), graph.name(j).to_string(), format_rational(&w))
                })
                .collect(),
        }
    }

    pub fn to_digraph(&self) -> Result<Digraph> {
        let mut b = Digraph::builder();
        for v in &self.vertices {
            b.add_vertex(v);
        }
        for (f, t, w) in &self.arcs {
            b.add_arc(f, t, parse_rational(w)?)?;
        }
        b.build()
    }
}

/// Everything needed to reproduce one failed check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub statement: StatementId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub graph: GraphEcho,
    pub forests: Vec<Vec<(String, String)>>,
    pub sets: Vec<Vec<String>>,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fault: Option<Fault>,
}

impl Witness {
    pub fn new(statement: StatementId, k: Option<usize>, graph: &Digraph) -> Self {
        Witness {
            statement,
            k,
            graph: GraphEcho::of(graph),
            forests: Vec::new(),
            sets: Vec::new(),
            detail: String::new(),
            fault: None,
        }
    }

    pub fn forest(mut self, graph: &Digraph, f: &Forest) -> Self {
        self.forests.push(f.named_arcs(graph));
        self
    }

    pub fn set(mut self, graph: &Digraph, s: VertexSet) -> Self {
        self.sets.push(graph.set_names(s));
        self
    }

    pub fn detail(mut self, text: impl Into<String>) -> Self {
        self.detail = text.into();
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Verified,
    Counterexample,
    NotApplicable,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatementResult {
    /// Individual instances checked and found to hold.
    pub checked: u64,
    pub failures: u64,
    /// Number of (graph, level) scopes where the statement does not apply.
    pub not_applicable: u64,
    pub not_applicable_levels: BTreeSet<usize>,
    /// The first few failures, fully serialized.
    pub witnesses: Vec<Witness>,
}

impl StatementResult {
    pub fn outcome(&self) -> Outcome {
        if self.failures > 0 {
            Outcome::Counterexample
        } else if self.checked > 0 {
            Outcome::Verified
        } else {
            Outcome::NotApplicable
        }
    }

    fn absorb(&mut self, other: StatementResult, witness_limit: usize) {
        self.checked += other.checked;
        self.failures += other.failures;
        self.not_applicable += other.not_applicable;
        self.not_applicable_levels.extend(other.not_applicable_levels);
        let room = witness_limit.saturating_sub(self.witnesses.len());
        self.witnesses.extend(other.witnesses.into_iter().take(room));
    }
}

/// A forest of a lower level whose restriction to an atom of a higher level
/// is not a tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exhibit {
    pub forest_level: usize,
    pub atom_level: usize,
    pub forest: Vec<(String, String)>,
    pub atom: Vec<String>,
    pub components: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub graphs: u64,
    pub statements: BTreeMap<StatementId, StatementResult>,
    pub exhibits: Vec<Exhibit>,
}

impl VerificationReport {
    pub fn new() -> Self {
        VerificationReport {
            graphs: 0,
            statements: StatementId::ALL
                .iter()
                .map(|&id| (id, StatementResult::default()))
                .collect(),
            exhibits: Vec::new(),
        }
    }

    pub fn get(&self, id: StatementId) -> &StatementResult {
        &self.statements[&id]
    }

    pub(crate) fn entry(&mut self, id: StatementId) -> &mut StatementResult {
        self.statements.entry(id).or_default()
    }

    pub fn failures(&self) -> u64 {
        self.statements.values().map(|r| r.failures).sum()
    }

    pub fn is_clean(&self) -> bool {
        self.failures() == 0
    }

    pub fn count(&self, outcome: Outcome) -> usize {
        self.statements.values().filter(|r| r.outcome() == outcome).count()
    }

    pub fn witnesses(&self) -> impl Iterator<Item = &Witness> {
        self.statements.values().flat_map(|r| r.witnesses.iter())
    }

    /// Adds the results of `other`; witness lists are concatenated up to
    /// `witness_limit` per statement. Merging in a fixed order yields a
    /// fixed result.
    pub fn merge(&mut self, other: VerificationReport, witness_limit: usize, exhibit_limit: usize) {
        self.graphs += other.graphs;
        for (id, r) in other.statements {
            self.entry(id).absorb(r, witness_limit);
        }
        let room = exhibit_limit.saturating_sub(self.exhibits.len());
        self.exhibits.extend(other.exhibits.into_iter().take(room));
    }

    pub fn summary(&self) -> String {
        format!(
            "statements verified: {}, counterexamples: {}, not-applicable: {}",
            self.count(Outcome::Verified),
            self.count(Outcome::Counterexample),
            self.count(Outcome::NotApplicable)
        )
    }

    /// One line per statement.
    pub fn table(&self) -> String {
        let mut out = String::new();
        for (id, r) in &self.statements {
            let tag = match r.outcome() {
                Outcome::Verified => "ok",
                Outcome::Counterexample => "FAIL",
                Outcome::NotApplicable => "n/a",
            };
            out.push_str(&format!(
                "{:<10} {:<4} checked={} failures={} n/a={}  {}\n",
                id.name(),
                tag,
                r.checked,
                r.failures,
                r.not_applicable,
                id.about()
            ));
        }
        out
    }
}
