//! JSON export of the spawn tree.
//!
//! ```json
//! {
//!   "context": { "source": "table1.cxt", "objects": 6, "attributes": 5 },
//!   "nodes": [
//!     { "id": 0, "parent": null, "spawn_attribute": null,
//!       "intent": [], "extent_size": 6 },
//!     ...
//!   ]
//! }
//! ```
//!
//! Node ids are dense and every parent precedes its children. `extent` lists
//! object names and appears only when requested.

use serde::{Deserialize, Serialize};

use crate::context::FormalContext;
use crate::engine::ConceptTree;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextInfo {
    pub source: String,
    pub objects: usize,
    pub attributes: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeRecord {
    pub id: usize,
    pub parent: Option<usize>,
    pub spawn_attribute: Option<String>,
    pub intent: Vec<String>,
    pub extent_size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extent: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConceptTreeDocument {
    pub context: ContextInfo,
    pub nodes: Vec<NodeRecord>,
}

impl ConceptTreeDocument {
    pub fn new(tree: &ConceptTree, ctx: &FormalContext, source: &str, with_extents: bool) -> Self {
        let attr = |a: usize| ctx.attribute_names()[a].clone();
        let nodes = tree
            .nodes()
            .iter()
            .map(|n| NodeRecord {
                id: n.id,
                parent: n.parent,
                spawn_attribute: n.spawn_attribute.map(attr),
                intent: n.concept.intent.iter().map(attr).collect(),
                extent_size: n.concept.extent.len(),
                extent: with_extents
                    .then(|| n.concept.extent.iter().map(|g| ctx.object_names()[g].clone()).collect()),
            })
            .collect();
        ConceptTreeDocument {
            context: ContextInfo {
                source: source.to_string(),
                objects: ctx.object_count(),
                attributes: ctx.attribute_count(),
            },
            nodes,
        }
    }

    /// Checks that ids are dense and parents come first.
    pub fn is_well_formed(&self) -> bool {
        self.nodes.iter().enumerate().all(|(i, n)| {
            n.id == i
                && match n.parent {
                    None => i == 0,
                    Some(p) => p < i,
                }
        })
    }
}

pub fn write_concept_tree_json(tree: &ConceptTree, ctx: &FormalContext, source: &str, with_extents: bool) -> String {
    let doc = ConceptTreeDocument::new(tree, ctx, source, with_extents);
    let mut text = serde_json::to_string_pretty(&doc).expect("tree document serializes");
    text.push('\n');
    text
}
