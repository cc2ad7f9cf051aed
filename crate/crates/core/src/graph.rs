//! Weighted directed graph with stable string labels.
//!
//! Parallel edges collapse into one weighted edge and self-loops are
//! rejected. Node ids are dense indices in insertion order.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::semantics::FrequencyTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// In/out/total unweighted edge counts of one node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Degree {
    pub inbound: usize,
    pub outbound: usize,
    pub total: usize,
}

/// How duplicated `(source, target)` edges are resolved when fusing graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FuseRule {
    /// Keep the highest weight.
    #[default]
    Max,
    /// Add the weights up. Only meant for sensitivity checks.
    Sum,
}

#[derive(Debug, Clone)]
pub struct Graph<T> {
    labels: Vec<String>,
    index: HashMap<String, NodeId>,
    out: Vec<BTreeMap<usize, T>>,
    inc: Vec<BTreeSet<usize>>,
    edge_count: usize,
}

impl<T: Scalar> Default for Graph<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Scalar> Graph<T> {
    pub fn new() -> Self {
        Graph {
            labels: Vec::new(),
            index: HashMap::new(),
            out: Vec::new(),
            inc: Vec::new(),
            edge_count: 0,
        }
    }

    /// Builds a graph from labelled edges, replacing repeated edges.
    pub fn from_edges<'a, I>(edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a str, T)>,
    {
        let mut g = Self::new();
        for (s, t, w) in edges {
            let s = g.add_node(s);
            let t = g.add_node(t);
            g.add_edge(s, t, w)?;
        }
        Ok(g)
    }

    /// Returns the id for `label`, creating the node if needed.
    pub fn add_node(&mut self, label: &str) -> NodeId {
        if let Some(&id) = self.index.get(label) {
            return id;
        }
        let id = NodeId(self.labels.len());
        self.labels.push(label.to_owned());
        self.index.insert(label.to_owned(), id);
        self.out.push(BTreeMap::new());
        self.inc.push(BTreeSet::new());
        id
    }

    /// Sets the weight of `source -> target`, replacing any previous weight.
    pub fn add_edge(&mut self, source: NodeId, target: NodeId, weight: T) -> Result<()> {
        self.check_edge(source, target, weight)?;
        if self.out[source.0].insert(target.0, weight).is_none() {
            self.inc[target.0].insert(source.0);
            self.edge_count += 1;
        }
        Ok(())
    }

    /// Adds `weight` to the current weight of `source -> target` (zero when absent).
    pub fn increment_edge(&mut self, source: NodeId, target: NodeId, weight: T) -> Result<()> {
        self.check_edge(source, target, weight)?;
        match self.out[source.0].get_mut(&target.0) {
            Some(w) => *w = *w + weight,
            None => {
                self.out[source.0].insert(target.0, weight);
                self.inc[target.0].insert(source.0);
                self.edge_count += 1;
            }
        }
        Ok(())
    }

    fn check_edge(&self, source: NodeId, target: NodeId, weight: T) -> Result<()> {
        self.check_node(source)?;
        self.check_node(target)?;
        if source == target {
            return Err(Error::SelfLoop(self.labels[source.0].clone()));
        }
        if !(weight > T::zero()) || !weight.is_finite() {
            return Err(Error::NonPositiveWeight {
                from: self.labels[source.0].clone(),
                to: self.labels[target.0].clone(),
                weight: weight.to_string(),
            });
        }
        Ok(())
    }

    pub(crate) fn check_node(&self, id: NodeId) -> Result<()> {
        if id.0 < self.labels.len() {
            Ok(())
        } else {
            Err(Error::UnknownNodeId(id.0))
        }
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = NodeId> {
        (0..self.labels.len()).map(NodeId)
    }

    pub fn label(&self, id: NodeId) -> &str {
        &self.labels[id.0]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn node(&self, label: &str) -> Option<NodeId> {
        self.index.get(label).copied()
    }

    pub fn require(&self, label: &str) -> Result<NodeId> {
        self.node(label)
            .ok_or_else(|| Error::UnknownNode(label.to_owned()))
    }

    pub fn weight(&self, source: NodeId, target: NodeId) -> Option<T> {
        self.out.get(source.0)?.get(&target.0).copied()
    }

    /// Out-neighbours of `id` with edge weights, ordered by node id.
    pub fn out_edges(&self, id: NodeId) -> impl Iterator<Item = (NodeId, T)> + '_ {
        self.out[id.0].iter().map(|(&t, &w)| (NodeId(t), w))
    }

    /// In-neighbours of `id`, ordered by node id.
    pub fn in_neighbors(&self, id: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.inc[id.0].iter().map(|&s| NodeId(s))
    }

    pub fn out_weight(&self, id: NodeId) -> T {
        self.out[id.0].values().fold(T::zero(), |acc, &w| acc + w)
    }

    /// All edges as `(source, target, weight)`, ordered by source then target id.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, T)> + '_ {
        self.out.iter().enumerate().flat_map(|(s, row)| {
            row.iter().map(move |(&t, &w)| (NodeId(s), NodeId(t), w))
        })
    }

    /// Edges keyed by label pair; independent of node id assignment.
    pub fn edges_by_label(&self) -> BTreeMap<(String, String), T> {
        self.edges()
            .map(|(s, t, w)| ((self.label(s).to_owned(), self.label(t).to_owned()), w))
            .collect()
    }

    pub fn degree(&self, id: NodeId) -> Result<Degree> {
        self.check_node(id)?;
        let inbound = self.inc[id.0].len();
        let outbound = self.out[id.0].len();
        Ok(Degree {
            inbound,
            outbound,
            total: inbound + outbound,
        })
    }

    /// Total unweighted degree of every node, indexed by node id.
    pub fn total_degrees(&self) -> Vec<usize> {
        (0..self.node_count())
            .map(|i| self.inc[i].len() + self.out[i].len())
            .collect()
    }

    /// Subgraph induced by `keep`, with nodes in the order given.
    pub fn induced_subgraph(&self, keep: &[NodeId]) -> Graph<T> {
        let mut sub = Graph::new();
        let mut remap = HashMap::with_capacity(keep.len());
        for &id in keep {
            remap.insert(id.0, sub.add_node(self.label(id)));
        }
        for &id in keep {
            for (t, w) in self.out_edges(id) {
                if let Some(&nt) = remap.get(&t.0) {
                    sub.add_edge(remap[&id.0], nt, w)
                        .expect("edge copied from a valid graph");
                }
            }
        }
        sub
    }
}

/// Fuses graphs by label, keeping the maximum weight for duplicated edges.
///
/// Nodes of the result are ordered lexicographically by label, so the output
/// does not depend on the order of `graphs`.
pub fn fuse<T: Scalar>(graphs: &[Graph<T>]) -> Result<Graph<T>> {
    fuse_with(graphs, FuseRule::Max)
}

pub fn fuse_with<T: Scalar>(graphs: &[Graph<T>], rule: FuseRule) -> Result<Graph<T>> {
    if graphs.is_empty() {
        return Err(Error::InvalidArgument("fuse needs at least one graph".into()));
    }
    let labels: BTreeSet<&str> = graphs
        .iter()
        .flat_map(|g| g.labels().iter().map(String::as_str))
        .collect();
    let mut fused = Graph::new();
    for label in labels {
        fused.add_node(label);
    }
    for g in graphs {
        for (s, t, w) in g.edges() {
            let fs = fused.node(g.label(s)).expect("label inserted above");
            let ft = fused.node(g.label(t)).expect("label inserted above");
            match rule {
                FuseRule::Max => match fused.weight(fs, ft) {
                    Some(prev) if prev >= w => {}
                    _ => fused.add_edge(fs, ft, w)?,
                },
                FuseRule::Sum => fused.increment_edge(fs, ft, w)?,
            }
        }
    }
    Ok(fused)
}

/// Subgraph induced on the `n` most frequent labels of `g`.
///
/// Ties are broken by lexicographic label order. Labels absent from `freq`
/// count as zero. Nodes of the result are in rank order.
pub fn top_n_subgraph<T: Scalar>(g: &Graph<T>, freq: &FrequencyTable, n: usize) -> Result<Graph<T>> {
    if n == 0 {
        return Err(Error::InvalidArgument("top-n requires n >= 1".into()));
    }
    let ranked = rank_by_frequency(g, freq);
    let keep: Vec<NodeId> = ranked.into_iter().take(n).collect();
    Ok(g.induced_subgraph(&keep))
}

/// Node ids of `g` sorted by descending frequency, then ascending label.
pub fn rank_by_frequency<T: Scalar>(g: &Graph<T>, freq: &FrequencyTable) -> Vec<NodeId> {
    let mut ids: Vec<NodeId> = g.nodes().collect();
    ids.sort_by(|&a, &b| {
        freq.count(g.label(b))
            .cmp(&freq.count(g.label(a)))
            .then_with(|| g.label(a).cmp(g.label(b)))
    });
    ids
}

impl<T: Scalar> PartialEq for Graph<T> {
    /// Graphs are equal when they have the same labels and the same labelled
    /// edges with identical weights; node ids are not compared.
    fn eq(&self, other: &Self) -> bool {
        let a: BTreeSet<&String> = self.labels.iter().collect();
        let b: BTreeSet<&String> = other.labels.iter().collect();
        a == b && self.edges_by_label() == other.edges_by_label()
    }
}
