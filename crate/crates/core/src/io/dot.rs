//! Graphviz rendering of the input graph and of the hierarchy.

use std::fmt::Write;

use crate::graph::Digraph;
use crate::hierarchy::HierarchyLevel;
use crate::weight::format_rational;

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

/// The weighted digraph alone.
pub fn graph_dot(graph: &Digraph) -> String {
    let mut out = String::from("digraph g {\n");
    for name in graph.names() {
        let _ = writeln!(out, "  {};", quote(name));
    }
    for (i, j, w) in graph.arcs() {
        let _ = writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(graph.name(i)),
            quote(graph.name(j)),
            quote(&format_rational(&w))
        );
    }
    out.push_str("}\n");
    out
}

/// One cluster per level, labelled with `k` and the gap, holding one
/// cluster per atom. Labeled atoms are drawn bold and filled, unlabeled
/// atoms dashed.
pub fn hierarchy_dot(graph: &Digraph, levels: &[HierarchyLevel]) -> String {
    let mut out = String::from("digraph hierarchy {\n  rankdir=LR;\n  node [shape=circle];\n");
    for level in levels {
        let k = level.k;
        let _ = writeln!(out, "  subgraph cluster_k{k} {{");
        let _ = writeln!(out, "    label={};", quote(&format!("k = {k}, gap = {}", level.gap)));
        for (i, &atom) in level.atoms.atoms().iter().enumerate() {
            let style = if level.atoms.is_labeled(i) {
                "style=\"bold,filled\"; fillcolor=lightgrey;"
            } else {
                "style=dashed;"
            };
            let _ = writeln!(out, "    subgraph cluster_k{k}_a{i} {{");
            let _ = writeln!(out, "      label={}; {style}", quote(&graph.format_set(atom)));
            for v in atom.iter() {
                let _ = writeln!(
                    out,
                    "      {} [label={}];",
                    quote(&format!("k{k}:{}", graph.name(v))),
                    quote(graph.name(v))
                );
            }
            out.push_str("    }\n");
        }
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    out
}
