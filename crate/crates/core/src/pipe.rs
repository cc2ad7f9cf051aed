//! The Pipe algorithm for semantic affinity.
//!
//! The semantic value `S(x)` is treated as a liquid that has to be carried
//! from `x` to `y`. Every node `v` can hold at most `S(v)`; every hop
//! attenuates the liquid by its affinity. The liquid follows the path with
//! the largest affinity product (shortest path under `-ln F`) among edges not
//! yet used and nodes not yet full. Once a path has been filled its edges are
//! spent, and a new path is searched until the source is empty, the target is
//! full, or no route is left.
//!
//! The result combines the relative difference of `S(x)` and `S(y)`, the mean
//! affinity of the edges that actually carried liquid, and a normalisation by
//! the strongest affinity `x` emits:
//!
//! ```text
//! A(x, y) = (1 - |S(x) - S(y)| / max(S(x), S(y))) * mean(P) / max_z F(x, z)
//! ```
//!
//! `A` is not symmetric and is not clamped: when downstream edges are stronger
//! than every edge leaving `x`, the mean of `P` can exceed `max_z F(x, z)`.
//!
//! Two nodes, one edge `x -> y`, `I(x) = I(y) = 10`, mixed affinity:
//!
//! ```text
//! F(x,y) = 0.9 * 1 + 0.1 * 0 = 0.9     S(x) = 10, S(y) = 10 + 0.9 * 10 = 19
//! fill x -> y: carried = min(19, 0.9 * 10) = 9, L = 1, M(y) = 10, P = [0.9]
//! x -> y is spent, no path remains: delivered = 9
//! A = (1 - 9/19) * 0.9 / 0.9 = 10/19
//! ```

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};
use std::io::Write;

use rayon::prelude::*;

use crate::affinity::AffinityMatrix;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::scalar::Scalar;
use crate::semantics::SemanticScores;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipeOptions {
    /// Absolute saturation threshold for node capacities and the source liquid.
    pub epsilon: f64,
    /// Maximum number of fills; `None` means `10 * |V|`.
    pub iteration_cap: Option<usize>,
}

impl Default for PipeOptions {
    fn default() -> Self {
        PipeOptions {
            epsilon: 1e-9,
            iteration_cap: None,
        }
    }
}

/// Mutable state of one `x -> y` run.
#[derive(Debug, Clone)]
pub struct CapacityState<T> {
    source: usize,
    initial: Vec<T>,
    capacity: Vec<T>,
    liquid: T,
    epsilon: T,
    spent: HashSet<(usize, usize)>,
}

impl<T: Scalar> CapacityState<T> {
    /// Fresh state: every node holds its full semantic value as capacity and
    /// the source holds `S(source)` of liquid.
    pub fn new(scores: &SemanticScores<T>, source: NodeId, epsilon: T) -> Result<Self> {
        if source.index() >= scores.len() {
            return Err(Error::UnknownNodeId(source.index()));
        }
        if !(epsilon > T::zero()) {
            return Err(Error::InvalidArgument(format!("epsilon {epsilon} must be positive")));
        }
        let initial: Vec<T> = scores.values.iter().map(|v| v.semantic.max(T::zero())).collect();
        Ok(CapacityState {
            source: source.index(),
            liquid: initial[source.index()],
            capacity: initial.clone(),
            initial,
            epsilon,
            spent: HashSet::new(),
        })
    }

    pub fn source(&self) -> NodeId {
        NodeId(self.source)
    }

    /// Liquid still waiting at the source.
    pub fn liquid(&self) -> T {
        self.liquid
    }

    pub fn capacity(&self, id: NodeId) -> T {
        self.capacity[id.index()]
    }

    pub fn capacities(&self) -> &[T] {
        &self.capacity
    }

    pub fn epsilon(&self) -> T {
        self.epsilon
    }

    pub fn set_capacity(&mut self, id: NodeId, value: T) {
        self.capacity[id.index()] = value.max(T::zero()).min(self.initial[id.index()]);
    }

    pub fn is_spent(&self, source: NodeId, target: NodeId) -> bool {
        self.spent.contains(&(source.index(), target.index()))
    }

    fn has_room(&self, v: usize) -> bool {
        self.capacity[v] > self.epsilon
    }
}

/// What one fill carried along its path.
#[derive(Debug, Clone, PartialEq)]
pub struct FillSummary<T> {
    /// Liquid carried over each hop.
    pub carried: Vec<T>,
    /// Affinities of the hops that carried a positive amount.
    pub used_affinities: Vec<T>,
    /// Liquid that reached the last node.
    pub delivered: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipeResult<T> {
    pub delivered: T,
    /// The multiset `P` of affinities of edges that carried liquid.
    pub used_affinities: Vec<T>,
    pub paths: Vec<Vec<NodeId>>,
    /// Mean affinity of each filled path, for diagnostics.
    pub path_scores: Vec<T>,
    pub affinity_value: T,
    pub iterations: usize,
    pub hit_iteration_cap: bool,
    pub remaining_liquid: T,
    pub remaining_capacity: Vec<T>,
}

impl<T: Scalar> PipeResult<T> {
    fn empty(n: usize) -> Self {
        PipeResult {
            delivered: T::zero(),
            used_affinities: Vec::new(),
            paths: Vec::new(),
            path_scores: Vec::new(),
            affinity_value: T::zero(),
            iterations: 0,
            hit_iteration_cap: false,
            remaining_liquid: T::zero(),
            remaining_capacity: vec![T::zero(); n],
        }
    }

    /// Mean of `P`, zero when no edge carried anything.
    pub fn average_affinity(&self) -> T {
        mean(&self.used_affinities)
    }
}

fn mean<T: Scalar>(xs: &[T]) -> T {
    if xs.is_empty() {
        T::zero()
    } else {
        xs.iter().copied().sum::<T>() / T::from_count(xs.len() as u64)
    }
}

#[derive(Debug, Clone, Copy)]
struct Frontier<T> {
    cost: T,
    node: usize,
}

impl<T: Scalar> PartialEq for Frontier<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T: Scalar> Eq for Frontier<T> {}

impl<T: Scalar> PartialOrd for Frontier<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Scalar> Ord for Frontier<T> {
    // reversed: BinaryHeap pops the cheapest, lowest id first
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .partial_cmp(&self.cost)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.node.cmp(&self.node))
    }
}

/// Highest affinity-product path from `x` to `y` over usable edges.
///
/// An edge is usable when its affinity is positive, it has not carried liquid
/// in this run yet, and its target still has capacity above epsilon. The
/// source's own capacity does not restrict transit.
pub fn efficient_path<T: Scalar>(
    f: &AffinityMatrix<T>,
    state: &CapacityState<T>,
    x: NodeId,
    y: NodeId,
) -> Option<Vec<NodeId>> {
    let n = f.len();
    let (x, y) = (x.index(), y.index());
    if x == y || x >= n || y >= n || !state.has_room(y) {
        return None;
    }
    let mut dist = vec![T::infinity(); n];
    let mut prev = vec![usize::MAX; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[x] = T::zero();
    heap.push(Frontier {
        cost: T::zero(),
        node: x,
    });
    while let Some(Frontier { cost, node }) = heap.pop() {
        if done[node] {
            continue;
        }
        done[node] = true;
        if node == y {
            break;
        }
        for &(next, a) in f.raw_row(node) {
            if done[next] || !state.has_room(next) || state.spent.contains(&(node, next)) {
                continue;
            }
            let c = cost + (-a.ln()).max(T::zero());
            if c < dist[next] {
                dist[next] = c;
                prev[next] = node;
                heap.push(Frontier { cost: c, node: next });
            }
        }
    }
    if !done[y] {
        return None;
    }
    let mut path = vec![NodeId(y)];
    let mut cur = y;
    while cur != x {
        cur = prev[cur];
        path.push(NodeId(cur));
    }
    path.reverse();
    Some(path)
}

/// Pushes the source's remaining liquid along `path`.
///
/// Each hop carries `min(M(next), F(hop) * inflow)`, which is subtracted from
/// the next node's capacity and becomes the inflow of the following hop. The
/// source loses only what crossed the first hop. Every edge of the path is
/// marked as spent.
pub fn fill_path<T: Scalar>(
    f: &AffinityMatrix<T>,
    state: &mut CapacityState<T>,
    path: &[NodeId],
) -> Result<FillSummary<T>> {
    if path.len() < 2 {
        return Err(Error::InvalidArgument("path needs at least two nodes".into()));
    }
    if path[0].index() != state.source {
        return Err(Error::InvalidArgument(format!(
            "path starts at {} but the run's source is {}",
            path[0],
            state.source()
        )));
    }
    for w in path.windows(2) {
        let (a, b) = (w[0].index(), w[1].index());
        if a >= f.len() || b >= f.len() {
            return Err(Error::UnknownNodeId(a.max(b)));
        }
        if f.at(a, b) <= T::zero() {
            return Err(Error::InvalidArgument(format!(
                "hop {} -> {} has no affinity",
                w[0], w[1]
            )));
        }
    }

    let mut flow = state.liquid;
    let mut carried = Vec::with_capacity(path.len() - 1);
    let mut used = Vec::new();
    for w in path.windows(2) {
        let (a, b) = (w[0].index(), w[1].index());
        let aff = f.at(a, b);
        let c = state.capacity[b].min(aff * flow).max(T::zero());
        state.capacity[b] = (state.capacity[b] - c).max(T::zero());
        if c > T::zero() {
            used.push(aff);
        }
        state.spent.insert((a, b));
        carried.push(c);
        flow = c;
    }
    state.liquid = (state.liquid - carried[0]).max(T::zero());
    Ok(FillSummary {
        delivered: *carried.last().expect("path has a hop"),
        carried,
        used_affinities: used,
    })
}

/// Semantic affinity `A(x, y)` by the Pipe algorithm, from fresh capacities.
pub fn pipe_comparison<T: Scalar>(
    g: &Graph<T>,
    f: &AffinityMatrix<T>,
    s: &SemanticScores<T>,
    x: NodeId,
    y: NodeId,
    opts: PipeOptions,
) -> Result<PipeResult<T>> {
    let n = g.node_count();
    g.check_node(x)?;
    g.check_node(y)?;
    f.check_aligned(n)?;
    if s.len() != n {
        return Err(Error::Misaligned {
            left: s.len(),
            right: n,
        });
    }
    if x == y {
        return Err(Error::InvalidArgument(format!(
            "pipe comparison needs two distinct nodes, got `{}` twice",
            g.label(x)
        )));
    }
    let sx = s.semantic(x);
    let sy = s.semantic(y);
    if !(sx > T::zero()) {
        return Ok(PipeResult::empty(n));
    }

    let mut state = CapacityState::new(s, x, T::lit(opts.epsilon))?;
    let cap = opts.iteration_cap.unwrap_or(10 * n);
    let mut result = PipeResult::empty(n);
    loop {
        if state.liquid <= state.epsilon || !state.has_room(y.index()) {
            break;
        }
        if result.iterations >= cap {
            result.hit_iteration_cap = true;
            break;
        }
        let Some(path) = efficient_path(f, &state, x, y) else {
            break;
        };
        let fill = fill_path(f, &mut state, &path)?;
        result.iterations += 1;
        result.delivered = result.delivered + fill.delivered;
        let hops: Vec<T> = path.windows(2).map(|w| f.get(w[0], w[1])).collect();
        result.path_scores.push(mean(&hops));
        result.used_affinities.extend(fill.used_affinities);
        result.paths.push(path);
    }
    result.remaining_liquid = state.liquid;
    result.remaining_capacity = state.capacity;

    let max_s = sx.max(sy);
    let strongest = f.row_max(x);
    result.affinity_value = if result.used_affinities.is_empty()
        || max_s <= T::zero()
        || strongest <= T::zero()
    {
        T::zero()
    } else {
        let closeness = T::one() - (sx - sy).abs() / max_s;
        closeness * result.average_affinity() / strongest
    };
    Ok(result)
}

/// Pairwise semantic affinities among `nodes`, diagonal fixed to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct SemanticAffinityMatrix<T> {
    pub nodes: Vec<NodeId>,
    pub labels: Vec<String>,
    /// `values[i][j]` is `A(nodes[i], nodes[j])`.
    pub values: Vec<Vec<T>>,
}

impl<T: Scalar> SemanticAffinityMatrix<T> {
    /// Labelled CSV: a header row and a first column of node labels, values
    /// with six decimals.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let mut header = vec!["node".to_owned()];
        header.extend(self.labels.iter().cloned());
        out.write_record(&header)?;
        for (label, row) in self.labels.iter().zip(&self.values) {
            let mut rec = vec![label.clone()];
            rec.extend(row.iter().map(|v| format!("{:.6}", v.to_f64().unwrap_or(f64::NAN))));
            out.write_record(&rec)?;
        }
        out.flush().map_err(|e| Error::io("<semantic affinity>", e))?;
        Ok(())
    }
}

/// `A(x, y)` for every ordered pair of `nodes`, each from a fresh state.
pub fn semantic_affinity_matrix<T: Scalar>(
    g: &Graph<T>,
    f: &AffinityMatrix<T>,
    s: &SemanticScores<T>,
    nodes: &[NodeId],
    opts: PipeOptions,
) -> Result<SemanticAffinityMatrix<T>> {
    let mut seen = HashSet::new();
    for &id in nodes {
        g.check_node(id)?;
        if !seen.insert(id) {
            return Err(Error::InvalidArgument(format!(
                "node `{}` listed twice",
                g.label(id)
            )));
        }
    }
    let values = nodes
        .par_iter()
        .map(|&x| {
            nodes
                .iter()
                .map(|&y| {
                    if x == y {
                        Ok(T::one())
                    } else {
                        pipe_comparison(g, f, s, x, y, opts).map(|r| r.affinity_value)
                    }
                })
                .collect::<Result<Vec<T>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SemanticAffinityMatrix {
        nodes: nodes.to_vec(),
        labels: nodes.iter().map(|&id| g.label(id).to_owned()).collect(),
        values,
    })
}
