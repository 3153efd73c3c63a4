//! Graphviz export. Output is sorted so equal inputs give identical bytes.

use std::fmt::Write;

use super::{Cocone, Diagram};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn nodes_and_edges(d: &Diagram) -> (Vec<String>, Vec<String>) {
    let names = d.index.objects();
    let mut nodes: Vec<String> = names
        .iter()
        .zip(&d.objects)
        .map(|(n, size)| format!("  {} [label={}];", quote(n), quote(&format!("{n} ({size})"))))
        .collect();
    nodes.sort();
    let mut edges: Vec<String> = d
        .index
        .arrows()
        .iter()
        .zip(&d.arrows)
        .map(|(a, img)| {
            format!(
                "  {} -> {} [label={}];",
                quote(&names[a.src]),
                quote(&names[a.dst]),
                quote(&format!("{} {:?}", a.name, img.table))
            )
        })
        .collect();
    edges.sort();
    (nodes, edges)
}

fn render(nodes: Vec<String>, edges: Vec<String>) -> String {
    let mut out = String::from("digraph diagram {\n  rankdir=LR;\n");
    for line in nodes.into_iter().chain(edges) {
        let _ = writeln!(out, "{line}");
    }
    out.push_str("}\n");
    out
}

pub fn diagram_to_dot(d: &Diagram) -> String {
    let (nodes, edges) = nodes_and_edges(d);
    render(nodes, edges)
}

/// The diagram plus an apex node; legs are dashed.
pub fn cocone_to_dot(d: &Diagram, c: &Cocone) -> String {
    let (mut nodes, mut edges) = nodes_and_edges(d);
    let apex = "__apex";
    nodes.push(format!(
        "  {} [label={}, shape=box];",
        quote(apex),
        quote(&format!("apex ({})", c.apex))
    ));
    nodes.sort();
    for (name, leg) in d.index.objects().iter().zip(&c.legs) {
        edges.push(format!(
            "  {} -> {} [style=dashed, label={}];",
            quote(name),
            quote(apex),
            quote(&format!("{:?}", leg.table))
        ));
    }
    edges.sort();
    render(nodes, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{colimit_fin, FinCat, FinKind, FinMorphism, IndexCategory};

    #[test]
    fn legs_are_dashed_and_output_is_stable() {
        let mut j = IndexCategory::new(vec!["b".into(), "a".into()]);
        j.add_arrow("f", 1, 0);
        let d = Diagram::new(
            j,
            FinCat::new(FinKind::Fin),
            vec![2, 1],
            vec![FinMorphism::new(1, 2, vec![1]).unwrap()],
        )
        .unwrap();
        let c = colimit_fin(&d).unwrap();
        let a = cocone_to_dot(&d, &c);
        assert_eq!(a, cocone_to_dot(&d, &c));
        assert_eq!(a.matches("style=dashed").count(), 2);
        assert!(diagram_to_dot(&d).contains("\"a\" -> \"b\""));
    }
}
