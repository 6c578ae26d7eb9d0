//! Ordered concept trees without variables: the form the seq2seq model reads
//! and writes. Co-referring graph nodes appear as duplicated concept leaves.

use serde::Serialize;

use crate::graph::{ConstKind, Layout};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum TreeNodeKind {
    Concept,
    Constant(ConstKind),
}

/// One node of a variable-free AMR. Children order is significant; constants
/// are leaves.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariableFreeTree {
    pub label: String,
    pub kind: TreeNodeKind,
    /// `(relation, child)` pairs; relations keep their leading `:`.
    pub children: Vec<(String, VariableFreeTree)>,
}

impl VariableFreeTree {
    pub fn concept(label: impl Into<String>) -> Self {
        VariableFreeTree {
            label: label.into(),
            kind: TreeNodeKind::Concept,
            children: Vec::new(),
        }
    }

    pub fn constant(label: impl Into<String>, kind: ConstKind) -> Self {
        VariableFreeTree {
            label: label.into(),
            kind: TreeNodeKind::Constant(kind),
            children: Vec::new(),
        }
    }

    pub fn with_children(
        label: impl Into<String>,
        children: Vec<(String, VariableFreeTree)>,
    ) -> Self {
        VariableFreeTree {
            label: label.into(),
            kind: TreeNodeKind::Concept,
            children,
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn node_count(&self) -> usize {
        1 + self
            .children
            .iter()
            .map(|(_, c)| c.node_count())
            .sum::<usize>()
    }

    /// Resolves a path of child indices; the empty path is the root.
    pub fn at_path(&self, path: &[usize]) -> Option<&VariableFreeTree> {
        let mut node = self;
        for &idx in path {
            node = &node.children.get(idx)?.1;
        }
        Some(node)
    }

    /// Renders the tree; concept nodes are always parenthesized, constants
    /// appear bare (re-quoted when they came from string literals).
    pub fn serialize(&self, layout: Layout) -> String {
        let mut out = String::new();
        self.write(0, layout, &mut out);
        out
    }

    fn write(&self, col: usize, layout: Layout, out: &mut String) {
        match self.kind {
            TreeNodeKind::Constant(ConstKind::Quoted) => {
                out.push('"');
                out.push_str(&self.label);
                out.push('"');
            }
            TreeNodeKind::Constant(_) => out.push_str(&self.label),
            TreeNodeKind::Concept => {
                out.push('(');
                out.push_str(&self.label);
                let child_col = col + 3;
                for (rel, child) in &self.children {
                    match layout {
                        Layout::SingleLine => out.push(' '),
                        Layout::Indented => {
                            out.push('\n');
                            for _ in 0..child_col {
                                out.push(' ');
                            }
                        }
                    }
                    out.push_str(rel);
                    out.push(' ');
                    child.write(child_col + rel.chars().count() + 1, layout, out);
                }
                out.push(')');
            }
        }
    }
}

impl std::fmt::Display for VariableFreeTree {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.serialize(Layout::SingleLine))
    }
}
