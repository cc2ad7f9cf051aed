//! Pairwise affinity functions and their aggregations.
//!
//! An affinity maps an ordered pair of actors to `[0, 1]`. Matrices are
//! stored as sorted sparse rows so that edge-supported affinities stay cheap
//! on large graphs; dense affinities such as Machiavelli simply fill the rows.
//! The diagonal is always zero.

use std::io::Write;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct AffinityMatrix<T> {
    rows: Vec<Vec<(usize, T)>>,
}

impl<T: Scalar> AffinityMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        AffinityMatrix {
            rows: vec![Vec::new(); n],
        }
    }

    /// Builds a matrix from per-row entries. Zero values and diagonal entries
    /// are dropped; values must lie in `[0, 1]`.
    pub fn from_rows(rows: Vec<Vec<(usize, T)>>) -> Result<Self> {
        let n = rows.len();
        let mut out = Vec::with_capacity(n);
        for (i, mut row) in rows.into_iter().enumerate() {
            row.retain(|&(j, v)| j != i && v != T::zero());
            row.sort_by_key(|&(j, _)| j);
            if let Some(w) = row.windows(2).find(|w| w[0].0 == w[1].0) {
                return Err(Error::InvalidArgument(format!(
                    "duplicate affinity entry ({i}, {})",
                    w[0].0
                )));
            }
            for &(j, v) in &row {
                if j >= n {
                    return Err(Error::UnknownNodeId(j));
                }
                if !(v >= T::zero() && v <= T::one()) {
                    return Err(Error::InvalidArgument(format!(
                        "affinity ({i}, {j}) = {v} outside [0, 1]"
                    )));
                }
            }
            out.push(row);
        }
        Ok(AffinityMatrix { rows: out })
    }

    /// Dense constructor, mostly for tests. `values[i][j]` is the affinity i -> j.
    pub fn from_dense(values: &[Vec<T>]) -> Result<Self> {
        let rows = values
            .iter()
            .map(|r| r.iter().copied().enumerate().collect())
            .collect();
        Self::from_rows(rows)
    }

    /// Keeps only values in (0, 1] off the diagonal; callers guarantee range.
    fn from_sorted_rows_unchecked(mut rows: Vec<Vec<(usize, T)>>) -> Self {
        for (i, row) in rows.iter_mut().enumerate() {
            row.retain(|&(j, v)| j != i && v > T::zero());
        }
        AffinityMatrix { rows }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn get(&self, source: NodeId, target: NodeId) -> T {
        self.at(source.index(), target.index())
    }

    pub(crate) fn at(&self, i: usize, j: usize) -> T {
        let row = &self.rows[i];
        match row.binary_search_by_key(&j, |&(k, _)| k) {
            Ok(p) => row[p].1,
            Err(_) => T::zero(),
        }
    }

    /// Nonzero entries of row `source`, by ascending target id.
    pub fn row(&self, source: NodeId) -> impl Iterator<Item = (NodeId, T)> + '_ {
        self.rows[source.index()].iter().map(|&(j, v)| (NodeId(j), v))
    }

    pub(crate) fn raw_row(&self, i: usize) -> &[(usize, T)] {
        &self.rows[i]
    }

    /// Largest affinity that `source` emits; zero for an empty row.
    pub fn row_max(&self, source: NodeId) -> T {
        self.rows[source.index()]
            .iter()
            .fold(T::zero(), |m, &(_, v)| m.max(v))
    }

    pub fn nonzero_count(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Column view: for every target, the `(source, value)` pairs with value > 0.
    pub fn transpose_rows(&self) -> Vec<Vec<(usize, T)>> {
        let mut cols = vec![Vec::new(); self.rows.len()];
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                cols[j].push((i, v));
            }
        }
        cols
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let n = self.len();
        let mut d = vec![vec![T::zero(); n]; n];
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                d[i][j] = v;
            }
        }
        d
    }

    pub(crate) fn check_aligned(&self, n: usize) -> Result<()> {
        if self.len() == n {
            Ok(())
        } else {
            Err(Error::Misaligned {
                left: self.len(),
                right: n,
            })
        }
    }

    /// Writes nonzero entries as a `source<TAB>target<TAB>value` edge list.
    pub fn write_edge_list<W: Write>(&self, g: &Graph<T>, mut w: W) -> Result<()> {
        self.check_aligned(g.node_count())?;
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                writeln!(w, "{}\t{}\t{}", g.label(NodeId(i)), g.label(NodeId(j)), v)
                    .map_err(|e| Error::io("<affinity>", e))?;
            }
        }
        Ok(())
    }
}

/// Affinity kinds available to callers that select one by name.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AffinityKind {
    BestFriend,
    BestCommonFriend,
    Machiavelli,
    /// `alpha * best friend + (1 - alpha) * Machiavelli`, masked to the best
    /// friend support.
    Mixed { alpha: f64 },
}

impl AffinityKind {
    pub fn compute<T: Scalar>(self, g: &Graph<T>) -> Result<AffinityMatrix<T>> {
        match self {
            AffinityKind::BestFriend => Ok(best_friend(g)),
            AffinityKind::BestCommonFriend => Ok(best_common_friend(g)),
            AffinityKind::Machiavelli => Ok(machiavelli(g)),
            AffinityKind::Mixed { alpha } => mixed_affinity_with(g, T::lit(alpha)),
        }
    }
}

/// `F(x, y) = C(x, y) / sum_a C(x, a)`; rows with no out-weight stay zero.
pub fn best_friend<T: Scalar>(g: &Graph<T>) -> AffinityMatrix<T> {
    let rows = g
        .nodes()
        .map(|x| {
            let total = g.out_weight(x);
            if total <= T::zero() {
                return Vec::new();
            }
            g.out_edges(x)
                .map(|(y, w)| (y.index(), (w / total).min(T::one())))
                .collect()
        })
        .collect();
    AffinityMatrix::from_sorted_rows_unchecked(rows)
}

/// `F(x, y) = max_a min(C(x, a), C(y, a)) / sum_a C(x, a)`.
pub fn best_common_friend<T: Scalar>(g: &Graph<T>) -> AffinityMatrix<T> {
    let n = g.node_count();
    let rows = g
        .nodes()
        .map(|x| {
            let total = g.out_weight(x);
            if total <= T::zero() {
                return Vec::new();
            }
            let mut best = vec![T::zero(); n];
            for (a, cxa) in g.out_edges(x) {
                for y in g.in_neighbors(a) {
                    if y == x {
                        continue;
                    }
                    let cya = g.weight(y, a).expect("in-neighbour has an edge");
                    let shared = cxa.min(cya);
                    if shared > best[y.index()] {
                        best[y.index()] = shared;
                    }
                }
            }
            best.into_iter()
                .enumerate()
                .filter(|&(_, v)| v > T::zero())
                .map(|(y, v)| (y, (v / total).min(T::one())))
                .collect()
        })
        .collect();
    AffinityMatrix::from_sorted_rows_unchecked(rows)
}

/// Neighbourhood degree mass `I_a`: the sum of total degrees over the
/// out-neighbours of `a`.
pub fn neighborhood_mass<T: Scalar>(g: &Graph<T>) -> Vec<T> {
    let deg = g.total_degrees();
    g.nodes()
        .map(|a| {
            g.out_edges(a)
                .fold(T::zero(), |acc, (z, _)| acc + T::from_count(deg[z.index()] as u64))
        })
        .collect()
}

/// `1 - |a - b| / max(a, b)`, with `0/0` taken as 1.
pub fn structural_similarity<T: Scalar>(a: T, b: T) -> T {
    let m = a.max(b);
    if m <= T::zero() {
        T::one()
    } else {
        (T::one() - (a - b).abs() / m).max(T::zero()).min(T::one())
    }
}

/// Machiavelli affinity: similarity of the degree mass surrounding `x` and `y`.
pub fn machiavelli<T: Scalar>(g: &Graph<T>) -> AffinityMatrix<T> {
    let mass = neighborhood_mass(g);
    let n = mass.len();
    let rows = (0..n)
        .map(|x| {
            (0..n)
                .filter(|&y| y != x)
                .map(|y| (y, structural_similarity(mass[x], mass[y])))
                .collect()
        })
        .collect();
    AffinityMatrix::from_sorted_rows_unchecked(rows)
}

/// Entry-wise `alpha * a + (1 - alpha) * b`.
pub fn convex_combine<T: Scalar>(
    a: &AffinityMatrix<T>,
    b: &AffinityMatrix<T>,
    alpha: T,
) -> Result<AffinityMatrix<T>> {
    a.check_aligned(b.len())?;
    if !(alpha >= T::zero() && alpha <= T::one()) {
        return Err(Error::InvalidArgument(format!("alpha {alpha} outside [0, 1]")));
    }
    let beta = T::one() - alpha;
    let rows = a
        .rows
        .iter()
        .zip(&b.rows)
        .map(|(ra, rb)| merge_union(ra, rb, |x, y| (alpha * x + beta * y).min(T::one())))
        .collect();
    Ok(AffinityMatrix::from_sorted_rows_unchecked(rows))
}

fn merge_union<T: Scalar>(
    ra: &[(usize, T)],
    rb: &[(usize, T)],
    f: impl Fn(T, T) -> T,
) -> Vec<(usize, T)> {
    let mut out = Vec::with_capacity(ra.len().max(rb.len()));
    let (mut i, mut j) = (0, 0);
    while i < ra.len() || j < rb.len() {
        let ka = ra.get(i).map_or(usize::MAX, |e| e.0);
        let kb = rb.get(j).map_or(usize::MAX, |e| e.0);
        if ka == kb {
            out.push((ka, f(ra[i].1, rb[j].1)));
            i += 1;
            j += 1;
        } else if ka < kb {
            out.push((ka, f(ra[i].1, T::zero())));
            i += 1;
        } else {
            out.push((kb, f(T::zero(), rb[j].1)));
            j += 1;
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TNorm {
    Minimum,
    Product,
    Lukasiewicz,
}

impl TNorm {
    pub fn apply<T: Scalar>(self, a: T, b: T) -> T {
        match self {
            TNorm::Minimum => a.min(b),
            TNorm::Product => a * b,
            TNorm::Lukasiewicz => (a + b - T::one()).max(T::zero()),
        }
    }
}

/// Entry-wise t-norm fold over two or more matrices.
pub fn tnorm_combine<T: Scalar>(ms: &[AffinityMatrix<T>], norm: TNorm) -> Result<AffinityMatrix<T>> {
    if ms.len() < 2 {
        return Err(Error::InvalidArgument(
            "t-norm aggregation needs at least two matrices".into(),
        ));
    }
    let n = ms[0].len();
    for m in &ms[1..] {
        m.check_aligned(n)?;
    }
    // zero is absorbing for every t-norm, so the support is within the first matrix's
    let rows = (0..n)
        .map(|i| {
            ms[0].rows[i]
                .iter()
                .map(|&(j, v)| (j, ms[1..].iter().fold(v, |acc, m| norm.apply(acc, m.at(i, j)))))
                .collect()
        })
        .collect();
    Ok(AffinityMatrix::from_sorted_rows_unchecked(rows))
}

/// `0.9 * best friend + 0.1 * Machiavelli`, zero wherever best friend is zero.
pub fn mixed_affinity<T: Scalar>(g: &Graph<T>) -> AffinityMatrix<T> {
    mixed_affinity_with(g, T::lit(0.9)).expect("0.9 is a valid weight")
}

pub fn mixed_affinity_with<T: Scalar>(g: &Graph<T>, alpha: T) -> Result<AffinityMatrix<T>> {
    if !(alpha >= T::zero() && alpha <= T::one()) {
        return Err(Error::InvalidArgument(format!("alpha {alpha} outside [0, 1]")));
    }
    let bf = best_friend(g);
    let mass = neighborhood_mass(g);
    let beta = T::one() - alpha;
    let rows = bf
        .rows
        .iter()
        .enumerate()
        .map(|(x, row)| {
            row.iter()
                .map(|&(y, v)| {
                    let mach = structural_similarity(mass[x], mass[y]);
                    (y, (alpha * v + beta * mach).min(T::one()))
                })
                .collect()
        })
        .collect();
    Ok(AffinityMatrix::from_sorted_rows_unchecked(rows))
}
