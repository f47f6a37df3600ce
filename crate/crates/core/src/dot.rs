//! Graphviz export for inspecting trees.

use crate::game::{GameTree, Node};
use crate::rational::format_rational;

// Backslashes pass through so `\n` stays a DOT line break.
fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\\\""))
}

/// DOT digraph: decision nodes show their owner, chance edges their
/// probability, terminals their payoff vector.
pub fn to_dot(tree: &GameTree) -> String {
    let mut out = String::from("digraph game {\n  node [fontname=\"monospace\"];\n");
    for (id, node) in tree.nodes() {
        let name = quote(tree.id(id));
        match node {
            Node::Decision { owner, actions } => {
                out.push_str(&format!(
                    "  {name} [shape=circle, label={}];\n",
                    quote(&format!("{}\\nP{owner}", tree.id(id)))
                ));
                for a in actions {
                    out.push_str(&format!(
                        "  {name} -> {} [label={}];\n",
                        quote(tree.id(a.child)),
                        quote(&a.label)
                    ));
                }
            }
            Node::Chance { outcomes } => {
                out.push_str(&format!(
                    "  {name} [shape=diamond, label={}];\n",
                    quote(&format!("{}\\nchance", tree.id(id)))
                ));
                for o in outcomes {
                    out.push_str(&format!(
                        "  {name} -> {} [label={}, style=dashed];\n",
                        quote(tree.id(o.child)),
                        quote(&format_rational(&o.probability))
                    ));
                }
            }
            Node::Terminal { payoffs } => {
                out.push_str(&format!(
                    "  {name} [shape=box, label={}];\n",
                    quote(&payoffs.to_string())
                ));
            }
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_game;

    #[test]
    fn labels_owners_probabilities_and_payoffs() {
        let tree = parse_game(
            "players 2\nnode r player 2 { go -> c }\nnode c chance { 1/4 -> a, 3/4 -> b }\n\
             terminal a payoffs [1, -1]\nterminal b payoffs [0, 1/2]\nroot r\n",
        )
        .unwrap();
        let dot = to_dot(&tree);
        assert!(dot.starts_with("digraph game {"));
        assert!(dot.contains("\"r\" [shape=circle, label=\"r\\nP2\"];"));
        assert!(dot.contains("\"c\" -> \"a\" [label=\"1/4\", style=dashed];"));
        assert!(dot.contains("\"b\" [shape=box, label=\"(0, 1/2)\"];"));
    }
}
