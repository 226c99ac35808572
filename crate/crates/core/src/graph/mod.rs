//! The concept network: named concepts joined by slot-labeled, weighted
//! association edges.
//!
//! Edges point from the subject-like concept toward the action, attribute,
//! or category it is associated with. Weights live in `[0, 1]` and move by
//! two rules only: the plateauing co-occurrence update
//! `a <- a + rate * (1 - a)` and the generic maximization `a <- 1`.

mod persist;

pub use persist::{load_network, save_network, PersistError};

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Default step size of the plateauing update.
pub const DEFAULT_LEARNING_RATE: f64 = 0.2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConceptKind {
    Object,
    Attribute,
    Action,
    Category,
}

impl ConceptKind {
    pub const ALL: [ConceptKind; 4] = [
        ConceptKind::Object,
        ConceptKind::Attribute,
        ConceptKind::Action,
        ConceptKind::Category,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ConceptKind::Object => "object",
            ConceptKind::Attribute => "attribute",
            ConceptKind::Action => "action",
            ConceptKind::Category => "category",
        }
    }
}

impl fmt::Display for ConceptKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ConceptKind {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "object" => Ok(ConceptKind::Object),
            "attribute" => Ok(ConceptKind::Attribute),
            "action" => Ok(ConceptKind::Action),
            "category" => Ok(ConceptKind::Category),
            other => Err(GraphError::UnknownKind(other.to_string())),
        }
    }
}

/// Relation carried by an edge: an argument slot of an action, or `is` for
/// predicates (attributes and category membership).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeLabel {
    Slot1,
    Slot2,
    Is,
}

impl EdgeLabel {
    pub const ALL: [EdgeLabel; 3] = [EdgeLabel::Slot1, EdgeLabel::Slot2, EdgeLabel::Is];

    pub fn as_str(self) -> &'static str {
        match self {
            EdgeLabel::Slot1 => "slot-1",
            EdgeLabel::Slot2 => "slot-2",
            EdgeLabel::Is => "is",
        }
    }

    /// Whether an edge with this label may point at a concept of `kind`.
    pub fn accepts(self, kind: ConceptKind) -> bool {
        match self {
            EdgeLabel::Slot1 | EdgeLabel::Slot2 => kind == ConceptKind::Action,
            EdgeLabel::Is => matches!(kind, ConceptKind::Attribute | ConceptKind::Category),
        }
    }
}

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EdgeLabel {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "slot-1" => Ok(EdgeLabel::Slot1),
            "slot-2" => Ok(EdgeLabel::Slot2),
            "is" => Ok(EdgeLabel::Is),
            other => Err(GraphError::UnknownLabel(other.to_string())),
        }
    }
}

/// Index of a node inside one [`ConceptNetwork`]. Not meaningful across
/// networks; use [`ConceptKey`] for that.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConceptId(u32);

impl ConceptId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Network-independent identity of a concept.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConceptKey {
    pub kind: ConceptKind,
    pub name: String,
}

impl ConceptKey {
    pub fn new(kind: ConceptKind, name: impl Into<String>) -> Self {
        ConceptKey {
            kind,
            name: name.into(),
        }
    }
}

impl fmt::Display for ConceptKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.kind, self.name)
    }
}

impl FromStr for ConceptKey {
    type Err = GraphError;

    /// Parses `kind/name`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (kind, name) = s
            .split_once('/')
            .ok_or_else(|| GraphError::InvalidName(s.to_string()))?;
        let kind = kind.parse()?;
        validate_name(name)?;
        Ok(ConceptKey::new(kind, name))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConceptNode {
    pub id: ConceptId,
    pub name: String,
    pub kind: ConceptKind,
}

impl ConceptNode {
    pub fn key(&self) -> ConceptKey {
        ConceptKey::new(self.kind, self.name.clone())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AssocEdge {
    pub source: ConceptId,
    pub target: ConceptId,
    pub label: EdgeLabel,
    pub weight: f64,
    /// Set once a generic statement asserted this edge; such edges stay at 1.0.
    pub generic_origin: bool,
}

/// One outgoing (or incoming) edge seen from a node.
#[derive(Clone, Debug, PartialEq)]
pub struct Neighbor<'a> {
    pub node: &'a ConceptNode,
    pub label: EdgeLabel,
    pub weight: f64,
    pub generic_origin: bool,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("malformed concept name {0:?}: expected a lowercase lexeme")]
    InvalidName(String),
    #[error("unknown concept kind {0:?}")]
    UnknownKind(String),
    #[error("unknown edge label {0:?}")]
    UnknownLabel(String),
    #[error("no concept with id {0:?}")]
    UnknownConcept(ConceptId),
    #[error("label {label} cannot point at {target} ({kind})")]
    LabelMismatch {
        label: EdgeLabel,
        target: String,
        kind: ConceptKind,
    },
    #[error("{0} is not a category")]
    NotACategory(String),
    #[error("learning rate must lie in (0, 1], got {0}")]
    InvalidLearningRate(f64),
}

/// Checks the lexeme shape: starts with `a-z`, continues with `a-z`, `0-9` or `-`.
pub fn validate_name(name: &str) -> Result<(), GraphError> {
    let mut chars = name.chars();
    let ok = match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {
            chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '-')
        }
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(GraphError::InvalidName(name.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct EdgeState {
    weight: f64,
    generic: bool,
}

type EdgeKey = (ConceptId, ConceptId, EdgeLabel);

#[derive(Clone, Debug)]
pub struct ConceptNetwork {
    nodes: Vec<ConceptNode>,
    index: HashMap<(ConceptKind, String), ConceptId>,
    edges: BTreeMap<EdgeKey, EdgeState>,
    learning_rate: f64,
}

impl Default for ConceptNetwork {
    fn default() -> Self {
        ConceptNetwork {
            nodes: Vec::new(),
            index: HashMap::new(),
            edges: BTreeMap::new(),
            learning_rate: DEFAULT_LEARNING_RATE,
        }
    }
}

impl ConceptNetwork {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_learning_rate(rate: f64) -> Result<Self, GraphError> {
        if !(rate > 0.0 && rate <= 1.0) {
            return Err(GraphError::InvalidLearningRate(rate));
        }
        Ok(ConceptNetwork {
            learning_rate: rate,
            ..Self::default()
        })
    }

    pub fn learning_rate(&self) -> f64 {
        self.learning_rate
    }

    /// Returns the node for `(name, kind)`, creating it on first use.
    pub fn add_concept(&mut self, name: &str, kind: ConceptKind) -> Result<ConceptId, GraphError> {
        validate_name(name)?;
        if let Some(&id) = self.index.get(&(kind, name.to_string())) {
            return Ok(id);
        }
        let id = ConceptId(self.nodes.len() as u32);
        self.nodes.push(ConceptNode {
            id,
            name: name.to_string(),
            kind,
        });
        self.index.insert((kind, name.to_string()), id);
        Ok(id)
    }

    pub fn find(&self, name: &str, kind: ConceptKind) -> Option<ConceptId> {
        self.index.get(&(kind, name.to_string())).copied()
    }

    pub fn find_key(&self, key: &ConceptKey) -> Option<ConceptId> {
        self.find(&key.name, key.kind)
    }

    pub fn node(&self, id: ConceptId) -> Option<&ConceptNode> {
        self.nodes.get(id.index())
    }

    fn require(&self, id: ConceptId) -> Result<&ConceptNode, GraphError> {
        self.node(id).ok_or(GraphError::UnknownConcept(id))
    }

    /// Nodes in creation order.
    pub fn nodes(&self) -> impl Iterator<Item = &ConceptNode> {
        self.nodes.iter()
    }

    pub fn edges(&self) -> impl Iterator<Item = AssocEdge> + '_ {
        self.edges
            .iter()
            .map(|(&(source, target, label), st)| AssocEdge {
                source,
                target,
                label,
                weight: st.weight,
                generic_origin: st.generic,
            })
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn check_edge(
        &self,
        src: ConceptId,
        dst: ConceptId,
        label: EdgeLabel,
    ) -> Result<(), GraphError> {
        self.require(src)?;
        let target = self.require(dst)?;
        if !label.accepts(target.kind) {
            return Err(GraphError::LabelMismatch {
                label,
                target: target.name.clone(),
                kind: target.kind,
            });
        }
        Ok(())
    }

    /// One co-occurrence of `src` with `dst`: `a <- a + rate * (1 - a)`.
    /// Returns the new weight. Generic edges are a fixed point.
    pub fn observe_association(
        &mut self,
        src: ConceptId,
        dst: ConceptId,
        label: EdgeLabel,
    ) -> Result<f64, GraphError> {
        self.check_edge(src, dst, label)?;
        let rate = self.learning_rate;
        let st = self.edges.entry((src, dst, label)).or_insert(EdgeState {
            weight: 0.0,
            generic: false,
        });
        if !st.generic {
            st.weight += rate * (1.0 - st.weight);
        }
        Ok(st.weight)
    }

    /// Sets the edge to exactly 1.0 and marks it as generic.
    pub fn assert_generic(
        &mut self,
        src: ConceptId,
        dst: ConceptId,
        label: EdgeLabel,
    ) -> Result<f64, GraphError> {
        self.check_edge(src, dst, label)?;
        self.edges.insert(
            (src, dst, label),
            EdgeState {
                weight: 1.0,
                generic: true,
            },
        );
        Ok(1.0)
    }

    /// Writes an inferred (non-generic) weight. Generic edges are left alone.
    pub(crate) fn set_inferred(
        &mut self,
        src: ConceptId,
        dst: ConceptId,
        label: EdgeLabel,
        weight: f64,
    ) -> Result<f64, GraphError> {
        self.check_edge(src, dst, label)?;
        let st = self.edges.entry((src, dst, label)).or_insert(EdgeState {
            weight: 0.0,
            generic: false,
        });
        if !st.generic {
            st.weight = weight.clamp(0.0, 1.0);
        }
        Ok(st.weight)
    }

    /// Used by the loader, which has already validated bounds.
    fn insert_edge(&mut self, src: ConceptId, dst: ConceptId, label: EdgeLabel, state: EdgeState) {
        self.edges.insert((src, dst, label), state);
    }

    /// Edge weight, or 0.0 when there is no such edge.
    pub fn get_strength(&self, src: ConceptId, dst: ConceptId, label: EdgeLabel) -> f64 {
        self.edges
            .get(&(src, dst, label))
            .map_or(0.0, |st| st.weight)
    }

    pub fn edge(&self, src: ConceptId, dst: ConceptId, label: EdgeLabel) -> Option<AssocEdge> {
        self.edges.get(&(src, dst, label)).map(|st| AssocEdge {
            source: src,
            target: dst,
            label,
            weight: st.weight,
            generic_origin: st.generic,
        })
    }

    fn outgoing(&self, id: ConceptId) -> impl Iterator<Item = (&EdgeKey, &EdgeState)> {
        self.edges
            .range((id, ConceptId(0), EdgeLabel::Slot1)..=(id, ConceptId(u32::MAX), EdgeLabel::Is))
    }

    /// Outgoing edges, sorted by target name then label.
    pub fn neighbors(&self, id: ConceptId) -> Result<Vec<Neighbor<'_>>, GraphError> {
        self.require(id)?;
        let mut out: Vec<Neighbor<'_>> = self
            .outgoing(id)
            .map(|(&(_, dst, label), st)| Neighbor {
                node: &self.nodes[dst.index()],
                label,
                weight: st.weight,
                generic_origin: st.generic,
            })
            .collect();
        sort_neighbors(&mut out);
        Ok(out)
    }

    /// Incoming edges, sorted by source name then label.
    pub fn incoming(&self, id: ConceptId) -> Result<Vec<Neighbor<'_>>, GraphError> {
        self.require(id)?;
        let mut out: Vec<Neighbor<'_>> = self
            .edges
            .iter()
            .filter(|(&(_, dst, _), _)| dst == id)
            .map(|(&(src, _, label), st)| Neighbor {
                node: &self.nodes[src.index()],
                label,
                weight: st.weight,
                generic_origin: st.generic,
            })
            .collect();
        sort_neighbors(&mut out);
        Ok(out)
    }

    /// Every node with an `is` edge into `category`, sorted by name.
    pub fn members_of(&self, category: ConceptId) -> Result<Vec<&ConceptNode>, GraphError> {
        let node = self.require(category)?;
        if node.kind != ConceptKind::Category {
            return Err(GraphError::NotACategory(node.name.clone()));
        }
        let mut members: Vec<&ConceptNode> = self
            .edges
            .keys()
            .filter(|&&(_, dst, label)| dst == category && label == EdgeLabel::Is)
            .map(|&(src, _, _)| &self.nodes[src.index()])
            .collect();
        members.sort_by(|a, b| a.name.cmp(&b.name).then(a.kind.cmp(&b.kind)));
        Ok(members)
    }

    /// Nodes sorted by (kind, name).
    pub fn sorted_nodes(&self) -> Vec<&ConceptNode> {
        let mut v: Vec<&ConceptNode> = self.nodes.iter().collect();
        v.sort_by(|a, b| (a.kind, &a.name).cmp(&(b.kind, &b.name)));
        v
    }

    /// Edges keyed by concept identity, independent of node ids.
    pub fn canonical_edges(&self) -> BTreeMap<(ConceptKey, EdgeLabel, ConceptKey), (f64, bool)> {
        self.edges
            .iter()
            .map(|(&(s, d, l), st)| {
                (
                    (self.nodes[s.index()].key(), l, self.nodes[d.index()].key()),
                    (st.weight, st.generic),
                )
            })
            .collect()
    }
}

fn sort_neighbors(v: &mut [Neighbor<'_>]) {
    v.sort_by(|a, b| {
        a.node
            .name
            .cmp(&b.node.name)
            .then(a.label.cmp(&b.label))
            .then(a.node.kind.cmp(&b.node.kind))
    });
}

/// Structural equality: same concepts, same edges, bit-identical weights and
/// flags. Node ids and learning rate are not compared.
impl PartialEq for ConceptNetwork {
    fn eq(&self, other: &Self) -> bool {
        let keys = |n: &ConceptNetwork| {
            let mut k: Vec<ConceptKey> = n.nodes.iter().map(ConceptNode::key).collect();
            k.sort();
            k
        };
        let bits = |n: &ConceptNetwork| {
            n.canonical_edges()
                .into_iter()
                .map(|(k, (w, g))| (k, w.to_bits(), g))
                .collect::<Vec<_>>()
        };
        keys(self) == keys(other) && bits(self) == bits(other)
    }
}
