//! Intrinsic, extrinsic and semantic value of each actor.
//!
//! The intrinsic value `I` is the raw corpus frequency of the actor's term.
//! The extrinsic value `E(x)` collects `F(v, x) * I(v)` from every
//! in-neighbour `v` of `x` under the affinity `F`, minus the part of that
//! value that also reaches `x` through another in-neighbour:
//!
//! ```text
//! E(x) = sum_i max( F(v_i, x) I(v_i) - sum_{j != i} F(v_i, v_j) I(v_i) F(v_j, x), 0 )
//! ```
//!
//! and `S(x) = I(x) + E(x)`.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;

use crate::affinity::AffinityMatrix;
use crate::error::Result;
use crate::graph::{Graph, NodeId};
use crate::scalar::Scalar;

/// Occurrence count per label. Labels that are absent count as zero.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FrequencyTable {
    counts: BTreeMap<String, u64>,
}

impl FrequencyTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn count(&self, label: &str) -> u64 {
        self.counts.get(label).copied().unwrap_or(0)
    }

    pub fn add(&mut self, label: &str, n: u64) {
        *self.counts.entry(label.to_owned()).or_insert(0) += n;
    }

    pub fn set(&mut self, label: &str, n: u64) {
        self.counts.insert(label.to_owned(), n);
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Entries in lexicographic label order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.counts.iter().map(|(k, &v)| (k.as_str(), v))
    }

    /// Adds every count of `other` into `self`.
    pub fn merge(&mut self, other: &FrequencyTable) {
        for (label, n) in other.iter() {
            self.add(label, n);
        }
    }

    /// Intrinsic values aligned with the node ids of `g`.
    pub fn intrinsic<T: Scalar>(&self, g: &Graph<T>) -> Vec<T> {
        g.nodes()
            .map(|id| T::from_count(self.count(g.label(id))))
            .collect()
    }
}

impl<'a> FromIterator<(&'a str, u64)> for FrequencyTable {
    fn from_iter<I: IntoIterator<Item = (&'a str, u64)>>(iter: I) -> Self {
        let mut t = FrequencyTable::new();
        for (label, n) in iter {
            t.add(label, n);
        }
        t
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemanticValue<T> {
    pub intrinsic: T,
    pub extrinsic: T,
    pub semantic: T,
}

/// Per-node `(I, E, S)`, indexed by node id.
#[derive(Debug, Clone, PartialEq)]
pub struct SemanticScores<T> {
    pub values: Vec<SemanticValue<T>>,
}

impl<T: Scalar> SemanticScores<T> {
    pub fn get(&self, id: NodeId) -> SemanticValue<T> {
        self.values[id.index()]
    }

    pub fn semantic(&self, id: NodeId) -> T {
        self.values[id.index()].semantic
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Writes `node,I,E,S` rows in lexicographic node order.
    pub fn write_csv<W: Write>(&self, g: &Graph<T>, w: W) -> Result<()> {
        let mut order: Vec<NodeId> = g.nodes().collect();
        order.sort_by(|&a, &b| g.label(a).cmp(g.label(b)));
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["node", "I", "E", "S"])?;
        for id in order {
            let v = self.get(id);
            out.write_record([
                g.label(id).to_owned(),
                v.intrinsic.to_string(),
                v.extrinsic.to_string(),
                v.semantic.to_string(),
            ])?;
        }
        out.flush().map_err(|e| crate::Error::io("<scores>", e))?;
        Ok(())
    }
}

/// Extrinsic value of every node given an affinity and intrinsic values.
pub fn extrinsic_values<T: Scalar>(f: &AffinityMatrix<T>, intrinsic: &[T]) -> Result<Vec<T>> {
    f.check_aligned(intrinsic.len())?;
    let cols = f.transpose_rows();
    Ok(cols
        .par_iter()
        .map(|incoming| {
            incoming
                .iter()
                .map(|&(vi, f_ix)| {
                    let sent = f_ix * intrinsic[vi];
                    // the inner sum only needs j with F(v_j, x) > 0, i.e. other in-neighbours
                    let redundant: T = incoming
                        .iter()
                        .filter(|&&(vj, _)| vj != vi)
                        .map(|&(vj, f_jx)| f.at(vi, vj) * intrinsic[vi] * f_jx)
                        .sum();
                    (sent - redundant).max(T::zero())
                })
                // empty float sums are -0.0
                .fold(T::zero(), |acc, v| acc + v)
        })
        .collect())
}

/// Extrinsic value of every node of `g`, indexed by node id.
pub fn extrinsic<T: Scalar>(g: &Graph<T>, f: &AffinityMatrix<T>, freq: &FrequencyTable) -> Result<Vec<T>> {
    f.check_aligned(g.node_count())?;
    extrinsic_values(f, &freq.intrinsic(g))
}

pub fn semantic_value<T: Scalar>(
    g: &Graph<T>,
    f: &AffinityMatrix<T>,
    freq: &FrequencyTable,
) -> Result<SemanticScores<T>> {
    f.check_aligned(g.node_count())?;
    let intrinsic = freq.intrinsic(g);
    let ext = extrinsic_values(f, &intrinsic)?;
    Ok(SemanticScores {
        values: intrinsic
            .into_iter()
            .zip(ext)
            .map(|(i, e)| SemanticValue {
                intrinsic: i,
                extrinsic: e,
                semantic: i + e,
            })
            .collect(),
    })
}
