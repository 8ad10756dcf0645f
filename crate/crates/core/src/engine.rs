//! Types shared by the two enumeration engines: run statistics, the
//! bottom-concept policy, the spawn tree, and the [`Enumerator`] trait.

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use serde::Serialize;

use crate::context::{AttributeSet, Concept, ConceptSet, FormalContext, IndexSet};
use crate::error::{FcaError, Result};

/// How the bottom concept `(∅, M)` is treated in the returned set.
///
/// With the empty-extent skip enabled the engines never build a concept with
/// an empty extent, so `(∅, M)` goes missing whenever no object has every
/// attribute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IncludeBottom {
    /// Add `(∅, M)` when it is a concept and the engine did not emit it.
    #[default]
    Auto,
    /// Same normalization as `Auto`; kept as an explicit spelling for
    /// comparisons that must state the policy.
    Always,
    /// Remove `(∅, M)` even when the engine emitted it.
    Never,
}

impl FromStr for IncludeBottom {
    type Err = FcaError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(IncludeBottom::Auto),
            "always" => Ok(IncludeBottom::Always),
            "never" => Ok(IncludeBottom::Never),
            other => Err(FcaError::InvalidArgument(format!("bad bottom policy {other:?}"))),
        }
    }
}

impl fmt::Display for IncludeBottom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IncludeBottom::Auto => "auto",
            IncludeBottom::Always => "always",
            IncludeBottom::Never => "never",
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct EnumerationStats {
    /// Concepts in the returned set (after the bottom policy).
    pub concept_count: usize,
    /// Concepts built by the engine itself.
    pub engine_concepts: usize,
    #[serde(serialize_with = "as_seconds")]
    pub elapsed: Duration,
    /// Bytes needed to hold every enumerated extent in the engine's layout.
    pub extent_storage_bytes: u64,
    /// Largest simultaneous queue footprint.
    pub peak_queue_bytes: u64,
    /// Queue storage allocated over the whole run.
    pub total_queue_bytes: u64,
    pub canonicity_failures: u64,
    pub max_depth: usize,
}

fn as_seconds<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

/// One node of the spawn tree. Node ids are concept numbers in creation
/// order; node 0 is the top concept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    pub id: usize,
    pub parent: Option<usize>,
    /// Attribute at which this concept's extent was found.
    pub spawn_attribute: Option<usize>,
    /// Child ids in spawn order.
    pub children: Vec<usize>,
    pub concept: Concept,
}

/// The parent/child structure in which an engine generated its concepts.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConceptTree {
    nodes: Vec<TreeNode>,
}

impl ConceptTree {
    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: usize) -> &TreeNode {
        &self.nodes[id]
    }

    pub fn edge_count(&self) -> usize {
        self.nodes.iter().map(|n| n.children.len()).sum()
    }

    /// Id of the node holding the given intent.
    pub fn find_intent(&self, intent: &AttributeSet) -> Option<usize> {
        self.nodes.iter().position(|n| &n.concept.intent == intent)
    }
}

/// Per-concept spawn records and the intent tree, shared by both engines.
///
/// A concept stores only the attributes it adds on top of its parent's
/// intent: its spawn attribute plus whatever its own scan closed in.
#[derive(Debug, Default)]
pub(crate) struct SpawnLog {
    pub spawn: Vec<u32>,
    pub parent: Vec<u32>,
    own_span: Vec<(u32, u32)>,
    own_attrs: Vec<u32>,
}

pub(crate) const NO_SPAWN: u32 = u32::MAX;

impl SpawnLog {
    pub fn with_root() -> Self {
        SpawnLog {
            spawn: vec![NO_SPAWN],
            parent: vec![NO_SPAWN],
            own_span: vec![(0, 0)],
            own_attrs: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.spawn.len()
    }

    pub fn push(&mut self, spawn: u32, parent: u32) -> u32 {
        let id = self.spawn.len() as u32;
        self.spawn.push(spawn);
        self.parent.push(parent);
        self.own_span.push((0, 0));
        id
    }

    /// Starts recording the own attributes of `concept`.
    pub fn begin_intent(&mut self, concept: u32) {
        let start = self.own_attrs.len() as u32;
        self.own_span[concept as usize] = (start, 0);
        let spawn = self.spawn[concept as usize];
        if spawn != NO_SPAWN {
            self.add_attribute(concept, spawn);
        }
    }

    /// Appends to the span opened by the latest `begin_intent`.
    pub fn add_attribute(&mut self, concept: u32, a: u32) {
        self.own_attrs.push(a);
        self.own_span[concept as usize].1 += 1;
    }

    pub fn intent(&self, concept: usize) -> AttributeSet {
        let mut members = Vec::new();
        let mut c = concept as u32;
        while c != NO_SPAWN {
            let (s, l) = self.own_span[c as usize];
            members.extend_from_slice(&self.own_attrs[s as usize..(s + l) as usize]);
            c = self.parent[c as usize];
        }
        members.sort_unstable();
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]), "attribute added twice along a branch");
        IndexSet::from_sorted(members)
    }

    pub fn byte_size(&self) -> u64 {
        (self.spawn.len() * 8) as u64
    }
}

/// Result of one enumeration run.
#[derive(Debug, Clone)]
pub struct Enumeration {
    pub concepts: ConceptSet,
    pub tree: ConceptTree,
    pub stats: EnumerationStats,
}

/// Builds the spawn tree from the log and per-concept extents.
pub(crate) fn tree_from_log(log: &SpawnLog, extents: Vec<IndexSet>) -> ConceptTree {
    let mut nodes: Vec<TreeNode> = extents
        .into_iter()
        .enumerate()
        .map(|(id, extent)| TreeNode {
            id,
            parent: (log.parent[id] != NO_SPAWN).then_some(log.parent[id] as usize),
            spawn_attribute: (log.spawn[id] != NO_SPAWN).then_some(log.spawn[id] as usize),
            children: Vec::new(),
            concept: Concept { extent, intent: log.intent(id) },
        })
        .collect();
    for id in 1..nodes.len() {
        let p = nodes[id].parent.expect("non-root node has a parent");
        nodes[p].children.push(id);
    }
    ConceptTree { nodes }
}

/// Assembles the public result from engine output.
pub(crate) fn finish(
    ctx: &FormalContext,
    log: &SpawnLog,
    extents: Vec<IndexSet>,
    policy: IncludeBottom,
    mut stats: EnumerationStats,
) -> Result<Enumeration> {
    let tree = tree_from_log(log, extents);
    let mut list: Vec<Concept> = tree.nodes.iter().map(|n| n.concept.clone()).collect();
    let n = ctx.attribute_count();
    let is_empty_bottom = |c: &Concept| c.extent.is_empty() && c.intent.len() == n;
    match policy {
        IncludeBottom::Auto | IncludeBottom::Always => {
            let bottom = ctx.bottom();
            if bottom.extent.is_empty() && !list.iter().any(is_empty_bottom) {
                list.push(bottom);
            }
        }
        IncludeBottom::Never => list.retain(|c| !is_empty_bottom(c)),
    }
    stats.engine_concepts = tree.len();
    stats.concept_count = list.len();
    Ok(Enumeration { concepts: ConceptSet::new(list)?, tree, stats })
}

/// Anything that lists the concepts of a context.
pub trait Enumerator {
    fn name(&self) -> String;
    fn enumerate(&self, ctx: &FormalContext) -> Result<Enumeration>;
}
