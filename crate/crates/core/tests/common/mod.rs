//! Random generators and brute-force oracles shared by the integration and
//! acceptance tests. Nothing here calls into the code paths it checks.
#![allow(dead_code)]

use std::collections::{BTreeMap, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;
use semnet::corpus::{DocumentStream, TaggedToken};
use semnet::graph::Graph;
use semnet::semantics::FrequencyTable;

pub fn label(i: usize) -> String {
    format!("v{i:02}")
}

/// Random directed graph on `n` nodes with edge probability `p` and weights in (0, 1].
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph<f64> {
    let mut g = Graph::new();
    let ids: Vec<_> = (0..n).map(|i| g.add_node(&label(i))).collect();
    for &a in &ids {
        for &b in &ids {
            if a != b && rng.gen_bool(p) {
                let w = 1.0 - rng.gen::<f64>(); // (0, 1]
                g.add_edge(a, b, w).unwrap();
            }
        }
    }
    g
}

/// Random graph with small positive integer weights, like co-occurrence counts.
pub fn random_count_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph<f64> {
    let mut g = Graph::new();
    let ids: Vec<_> = (0..n).map(|i| g.add_node(&label(i))).collect();
    for &a in &ids {
        for &b in &ids {
            if a != b && rng.gen_bool(p) {
                g.add_edge(a, b, rng.gen_range(1..=9) as f64).unwrap();
            }
        }
    }
    g
}

pub fn random_frequencies<R: Rng>(rng: &mut R, g: &Graph<f64>, max: u64) -> FrequencyTable {
    g.labels()
        .iter()
        .map(|l| (l.as_str(), rng.gen_range(0..=max)))
        .collect()
}

/// Dense random affinity with roughly `p` density and values in (0, 1].
pub fn random_affinity<R: Rng>(rng: &mut R, n: usize, p: f64) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i != j && rng.gen_bool(p) {
                        1.0 - rng.gen::<f64>()
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect()
}

/// Extrinsic value by the literal double loop over every ordered pair.
pub fn extrinsic_oracle(f: &[Vec<f64>], intrinsic: &[f64]) -> Vec<f64> {
    let n = f.len();
    (0..n)
        .map(|x| {
            let mut e = 0.0;
            for i in 0..n {
                if f[i][x] <= 0.0 {
                    continue;
                }
                let mut redundancy = 0.0;
                for j in 0..n {
                    if j == i || f[j][x] <= 0.0 {
                        continue;
                    }
                    redundancy += f[i][j] * intrinsic[i] * f[j][x];
                }
                e += f64::max(f[i][x] * intrinsic[i] - redundancy, 0.0);
            }
            e
        })
        .collect()
}

/// All-pairs hop distances by Floyd-Warshall over the unweighted directed graph.
pub fn hop_distances(g: &Graph<f64>) -> Vec<Vec<usize>> {
    let n = g.node_count();
    let inf = usize::MAX / 4;
    let mut d = vec![vec![inf; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for (s, t, _) in g.edges() {
        d[s.index()][t.index()] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

/// Betweenness by enumerating every shortest path of every ordered pair and
/// counting, for each intermediate node, the fraction of paths through it.
pub fn betweenness_oracle(g: &Graph<f64>) -> Vec<f64> {
    let n = g.node_count();
    let inf = usize::MAX / 4;
    let d = hop_distances(g);
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            g.edges()
                .filter(|(s, _, _)| s.index() == v)
                .map(|(_, t, _)| t.index())
                .collect()
        })
        .collect();
    let mut score = vec![0.0; n];
    for s in 0..n {
        for t in 0..n {
            if s == t || d[s][t] >= inf {
                continue;
            }
            let mut paths: Vec<Vec<usize>> = Vec::new();
            let mut stack = vec![vec![s]];
            while let Some(path) = stack.pop() {
                let last = *path.last().unwrap();
                if last == t {
                    paths.push(path);
                    continue;
                }
                for &w in &adj[last] {
                    if d[s][w] == path.len() && d[w][t] + path.len() == d[s][t] {
                        let mut p = path.clone();
                        p.push(w);
                        stack.push(p);
                    }
                }
            }
            let total = paths.len() as f64;
            for v in 0..n {
                if v == s || v == t {
                    continue;
                }
                let through = paths.iter().filter(|p| p.contains(&v)).count() as f64;
                score[v] += through / total;
            }
        }
    }
    if n > 2 {
        let norm = ((n - 1) * (n - 2)) as f64;
        score.iter_mut().for_each(|x| *x /= norm);
    } else {
        score.iter_mut().for_each(|x| *x = 0.0);
    }
    score
}

/// Symmetrized dense adjacency (max of both directions).
pub fn dense_symmetric(g: &Graph<f64>) -> Vec<Vec<f64>> {
    let n = g.node_count();
    let mut a = vec![vec![0.0; n]; n];
    for (s, t, w) in g.edges() {
        let (s, t) = (s.index(), t.index());
        a[s][t] = f64::max(a[s][t], w);
        a[t][s] = f64::max(a[t][s], w);
    }
    a
}

/// `max_i |(A v)_i - lambda v_i|` with the Rayleigh quotient as `lambda`.
pub fn eigen_residual(a: &[Vec<f64>], v: &[f64]) -> f64 {
    let av: Vec<f64> = a
        .iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect();
    let lambda: f64 = av.iter().zip(v).map(|(x, y)| x * y).sum::<f64>()
        / v.iter().map(|x| x * x).sum::<f64>();
    av.iter()
        .zip(v)
        .map(|(x, y)| (x - lambda * y).abs())
        .fold(0.0, f64::max)
}

pub fn is_weakly_connected(g: &Graph<f64>) -> bool {
    let n = g.node_count();
    if n == 0 {
        return true;
    }
    let a = dense_symmetric(g);
    let mut seen = vec![false; n];
    let mut q = VecDeque::from([0]);
    seen[0] = true;
    while let Some(v) = q.pop_front() {
        for w in 0..n {
            if a[v][w] > 0.0 && !seen[w] {
                seen[w] = true;
                q.push_back(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Random unfiltered token stream over a small vocabulary, mixing nouns and verbs.
pub fn random_stream<R: Rng>(rng: &mut R, len: usize, vocab: usize) -> DocumentStream {
    let tags = ["NN", "NNS", "NNP", "NNPS", "VB", "VBD", "JJ", "DT"];
    DocumentStream {
        id: "random#0".into(),
        tokens: (0..len)
            .map(|position| {
                let lemma = format!("w{}", rng.gen_range(0..vocab));
                TaggedToken {
                    surface: lemma.to_uppercase(),
                    pos: tags.choose(rng).unwrap().to_string(),
                    lemma,
                    position,
                }
            })
            .collect(),
    }
}

/// Co-occurrence counts by scanning every pair of the unfiltered stream.
pub fn cooccurrence_oracle(raw: &DocumentStream, window: usize) -> BTreeMap<(String, String), f64> {
    let mut out = BTreeMap::new();
    let toks = &raw.tokens;
    for p in 0..toks.len() {
        for q in 0..toks.len() {
            let (a, b) = (&toks[p], &toks[q]);
            if b.position <= a.position || b.position - a.position > window {
                continue;
            }
            if !a.pos.starts_with("NN") || !b.pos.starts_with("NN") || a.lemma == b.lemma {
                continue;
            }
            *out.entry((a.lemma.clone(), b.lemma.clone())).or_insert(0.0) += 1.0;
        }
    }
    out
}
