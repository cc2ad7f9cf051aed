//! Classical centrality measures.
//!
//! Betweenness and closeness use unweighted hop distances on the directed
//! graph; edge weights are co-occurrence strengths, not costs. Eigenvector
//! centrality runs on the symmetrized weighted adjacency, where the weight
//! of `{u, v}` is the larger of the two directions.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    Degree,
    InDegree,
    OutDegree,
    Betweenness,
    Closeness,
    Eigenvector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CentralityScores<T> {
    pub measure: Measure,
    /// Indexed by node id.
    pub values: Vec<T>,
}

impl<T: Scalar> CentralityScores<T> {
    pub fn get(&self, id: NodeId) -> T {
        self.values[id.index()]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions {
            tol: 1e-10,
            max_iter: 1000,
        }
    }
}

/// Raw unweighted degree counts for `measure` (one of the three degree kinds).
pub fn degree<T: Scalar>(g: &Graph<T>, measure: Measure) -> CentralityScores<T> {
    let values = g
        .nodes()
        .map(|id| {
            let d = g.degree(id).expect("id from graph");
            let n = match measure {
                Measure::InDegree => d.inbound,
                Measure::OutDegree => d.outbound,
                _ => d.total,
            };
            T::from_count(n as u64)
        })
        .collect();
    CentralityScores { measure, values }
}

/// Breadth-first search from `source` along outgoing edges.
///
/// Returns hop distances (`usize::MAX` when unreachable), shortest-path counts,
/// predecessor lists and the visit order.
fn bfs<T: Scalar>(g: &Graph<T>, source: usize) -> (Vec<usize>, Vec<f64>, Vec<Vec<usize>>, Vec<usize>) {
    let n = g.node_count();
    let mut dist = vec![usize::MAX; n];
    let mut sigma = vec![0.0f64; n];
    let mut preds = vec![Vec::new(); n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();
    dist[source] = 0;
    sigma[source] = 1.0;
    queue.push_back(source);
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for (w, _) in g.out_edges(NodeId(v)) {
            let w = w.index();
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
            if dist[w] == dist[v] + 1 {
                sigma[w] += sigma[v];
                preds[w].push(v);
            }
        }
    }
    (dist, sigma, preds, order)
}

/// Directed betweenness, normalized by `(n-1)(n-2)`.
///
/// Pair dependencies are accumulated over all shortest paths (Brandes), so a
/// node on one of two equally short paths receives half the credit.
pub fn betweenness<T: Scalar>(g: &Graph<T>) -> CentralityScores<T> {
    let n = g.node_count();
    let mut acc = vec![0.0f64; n];
    for s in 0..n {
        let (_, sigma, preds, order) = bfs(g, s);
        let mut delta = vec![0.0f64; n];
        for &w in order.iter().rev() {
            for &v in &preds[w] {
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
            if w != s {
                acc[w] += delta[w];
            }
        }
    }
    let norm = if n > 2 {
        ((n - 1) * (n - 2)) as f64
    } else {
        1.0
    };
    let values = acc
        .into_iter()
        .map(|b| if n > 2 { T::lit(b / norm) } else { T::zero() })
        .collect();
    CentralityScores {
        measure: Measure::Betweenness,
        values,
    }
}

/// Closeness over outgoing hop distances, scaled by the reachable fraction:
/// `((r-1)/(n-1)) * ((r-1)/sum_of_distances)`, zero when nothing is reachable.
pub fn closeness<T: Scalar>(g: &Graph<T>) -> CentralityScores<T> {
    let n = g.node_count();
    let values = (0..n)
        .map(|s| {
            let (dist, ..) = bfs(g, s);
            let (reached, total) = dist
                .iter()
                .filter(|&&d| d != usize::MAX && d > 0)
                .fold((0usize, 0usize), |(r, t), &d| (r + 1, t + d));
            if reached == 0 || n < 2 {
                T::zero()
            } else {
                let r = reached as f64;
                T::lit((r / (n - 1) as f64) * (r / total as f64))
            }
        })
        .collect();
    CentralityScores {
        measure: Measure::Closeness,
        values,
    }
}

/// Symmetrized weighted adjacency as neighbour lists.
pub fn symmetrized<T: Scalar>(g: &Graph<T>) -> Vec<Vec<(usize, T)>> {
    let n = g.node_count();
    let mut adj: Vec<std::collections::BTreeMap<usize, T>> = vec![Default::default(); n];
    for (s, t, w) in g.edges() {
        let (s, t) = (s.index(), t.index());
        for (a, b) in [(s, t), (t, s)] {
            let slot = adj[a].entry(b).or_insert(w);
            if w > *slot {
                *slot = w;
            }
        }
    }
    adj.into_iter().map(|row| row.into_iter().collect()).collect()
}

/// Eigenvector centrality by power iteration, unit Euclidean norm.
///
/// Iterates on `A + c*I` with `c` the largest edge weight. The shift leaves the
/// eigenvectors unchanged and keeps bipartite graphs (where `-lambda` is also
/// an eigenvalue) from oscillating.
pub fn eigenvector<T: Scalar>(g: &Graph<T>, opts: EigenOptions) -> Result<CentralityScores<T>> {
    if g.edge_count() == 0 {
        return Err(Error::NoEdges);
    }
    let n = g.node_count();
    let adj = symmetrized(g);
    let shift = g
        .edges()
        .map(|(_, _, w)| w)
        .fold(T::zero(), |a, b| a.max(b));
    let tol = T::lit(opts.tol);
    let mut v = vec![T::one() / T::from_count(n as u64).sqrt(); n];
    let mut next = vec![T::zero(); n];
    let mut delta = T::infinity();
    for _ in 0..opts.max_iter {
        for (i, row) in adj.iter().enumerate() {
            next[i] = shift * v[i] + row.iter().map(|&(j, w)| w * v[j]).sum::<T>();
        }
        let norm = next.iter().map(|&x| x * x).sum::<T>().sqrt();
        for x in next.iter_mut() {
            *x = *x / norm;
        }
        delta = v
            .iter()
            .zip(&next)
            .map(|(&a, &b)| (a - b).abs())
            .fold(T::zero(), T::max);
        std::mem::swap(&mut v, &mut next);
        if delta < tol {
            return Ok(CentralityScores {
                measure: Measure::Eigenvector,
                values: v,
            });
        }
    }
    Err(Error::NotConverged {
        iterations: opts.max_iter,
        delta: delta.to_f64().unwrap_or(f64::NAN),
    })
}
