use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use semnet::affinity::{best_common_friend, best_friend, machiavelli, mixed_affinity_with, AffinityMatrix};
use semnet::centrality::{betweenness, closeness, degree, eigenvector, Measure};
use semnet::corpus::{build_book_network_with, filter_nouns, frequency_table, read_token_file};
use semnet::graph::{fuse, rank_by_frequency, FuseRule, Graph, NodeId};
use semnet::io::{read_edge_list, read_frequency_table, write_edge_list, write_frequency_table};
use semnet::pipe::{pipe_comparison, semantic_affinity_matrix};
use semnet::semantics::{semantic_value, FrequencyTable};

use crate::config::RunConfig;
use crate::output::{output_path, stem, write_atomic};

pub const EDGES_SUFFIX: &str = ".edges.tsv";
pub const FREQ_SUFFIX: &str = ".freq.csv";
pub const TOKENS_SUFFIX: &str = ".tok.tsv";

/// Builds one fused network and frequency table per token file.
///
/// All inputs are parsed before anything is written. Returns the written paths.
pub fn cmd_build(config: &RunConfig, token_files: &[PathBuf], rule: FuseRule) -> Result<Vec<PathBuf>> {
    config.validate()?;
    if token_files.is_empty() {
        bail!("build needs at least one token file");
    }
    let books = token_files
        .iter()
        .map(|path| {
            let docs = read_token_file(path)?;
            let nouns: Vec<_> = docs.iter().map(filter_nouns).collect();
            let net: Graph<f64> = build_book_network_with(&nouns, config.window, rule)?;
            Ok((stem(path, TOKENS_SUFFIX), net, frequency_table(&nouns)))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut written = Vec::new();
    for (name, net, freq) in books {
        let edges = output_path(&config.out_dir, &name, EDGES_SUFFIX);
        write_atomic(&edges, |w| Ok(write_edge_list(&net, w)?))?;
        let freqs = output_path(&config.out_dir, &name, FREQ_SUFFIX);
        write_atomic(&freqs, |w| Ok(write_frequency_table(&freq, w)?))?;
        written.extend([edges, freqs]);
    }
    Ok(written)
}

/// The frequency table that accompanies an edge list: `<stem>.freq.csv` next to it.
pub fn sibling_freq(edges: &Path) -> PathBuf {
    let name = stem(edges, EDGES_SUFFIX);
    edges.with_file_name(format!("{name}{FREQ_SUFFIX}"))
}

/// Max-rule fusion of edge lists; frequency tables are summed.
pub fn cmd_fuse(config: &RunConfig, edge_lists: &[PathBuf], freqs: &[PathBuf], name: &str) -> Result<Vec<PathBuf>> {
    config.validate()?;
    if edge_lists.is_empty() {
        bail!("fuse needs at least one edge list");
    }
    if !freqs.is_empty() && freqs.len() != edge_lists.len() {
        bail!(
            "got {} edge lists but {} frequency tables",
            edge_lists.len(),
            freqs.len()
        );
    }
    let freq_paths: Vec<PathBuf> = if freqs.is_empty() {
        edge_lists.iter().map(|p| sibling_freq(p)).collect()
    } else {
        freqs.to_vec()
    };
    let graphs = edge_lists
        .iter()
        .map(|p| Ok(read_edge_list::<f64>(p)?))
        .collect::<Result<Vec<_>>>()?;
    let mut total = FrequencyTable::new();
    for p in &freq_paths {
        total.merge(&read_frequency_table(p)?);
    }
    let fused = fuse(&graphs)?;

    let edges = output_path(&config.out_dir, name, EDGES_SUFFIX);
    write_atomic(&edges, |w| Ok(write_edge_list(&fused, w)?))?;
    let freq = output_path(&config.out_dir, name, FREQ_SUFFIX);
    write_atomic(&freq, |w| Ok(write_frequency_table(&total, w)?))?;
    Ok(vec![edges, freq])
}

/// Network and frequencies loaded from disk. Labels present only in the
/// frequency table become isolated nodes, since edge lists cannot carry them.
pub fn load_network(edges: &Path, freq: &Path) -> Result<(Graph<f64>, FrequencyTable)> {
    let mut g: Graph<f64> = read_edge_list(edges)?;
    let freq = read_frequency_table(freq)?;
    for (label, _) in freq.iter() {
        g.add_node(label);
    }
    Ok((g, freq))
}

/// Subgraph on the `top` most frequent labels plus any `extra` labels.
fn working_graph(g: &Graph<f64>, freq: &FrequencyTable, top: usize, extra: &[String]) -> Result<Graph<f64>> {
    let mut keep: Vec<NodeId> = rank_by_frequency(g, freq).into_iter().take(top).collect();
    let mut seen: BTreeSet<NodeId> = keep.iter().copied().collect();
    for label in extra {
        let id = g.require(label)?;
        if seen.insert(id) {
            keep.push(id);
        }
    }
    Ok(g.induced_subgraph(&keep))
}

pub fn compute_affinity(config: &RunConfig, g: &Graph<f64>) -> Result<AffinityMatrix<f64>> {
    Ok(config.affinity_kind().compute(g)?)
}

fn f2(v: f64) -> String {
    format!("{v:.2}")
}

/// Writes the score table of the top-n subgraph, sorted by semantic value.
pub fn write_scores(config: &RunConfig, g: &Graph<f64>, freq: &FrequencyTable, w: &mut dyn Write) -> Result<()> {
    let sub = working_graph(g, freq, config.top, &[])?;
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "node",
        "I",
        "E",
        "S",
        "degree",
        "betweenness",
        "closeness",
        "eigenvector",
    ])?;
    if sub.is_empty() {
        out.flush()?;
        return Ok(());
    }
    let f = compute_affinity(config, &sub)?;
    let sem = semantic_value(&sub, &f, freq)?;
    let deg = degree(&sub, Measure::Degree);
    let btw = betweenness(&sub);
    let clo = closeness(&sub);
    let eig = if sub.edge_count() == 0 {
        vec![0.0; sub.node_count()]
    } else {
        eigenvector(&sub, config.eigen())?.values
    };

    let mut order: Vec<NodeId> = sub.nodes().collect();
    order.sort_by(|&a, &b| {
        sem.semantic(b)
            .total_cmp(&sem.semantic(a))
            .then_with(|| sub.label(a).cmp(sub.label(b)))
    });
    for id in order {
        let v = sem.get(id);
        out.write_record([
            sub.label(id).to_owned(),
            f2(v.intrinsic),
            f2(v.extrinsic),
            f2(v.semantic),
            format!("{}", deg.get(id) as u64),
            f2(btw.get(id)),
            f2(clo.get(id)),
            f2(eig[id.index()]),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn cmd_scores(config: &RunConfig, edges: &Path, freq: &Path) -> Result<PathBuf> {
    config.validate()?;
    let (g, table) = load_network(edges, freq)?;
    let path = output_path(&config.out_dir, &stem(edges, EDGES_SUFFIX), ".scores.csv");
    write_atomic(&path, |w| write_scores(config, &g, &table, w))?;
    Ok(path)
}

/// Writes the labelled semantic-affinity matrix. Without `labels`, the ten
/// most frequent nodes are compared.
pub fn write_semaffinity(
    config: &RunConfig,
    g: &Graph<f64>,
    freq: &FrequencyTable,
    labels: &[String],
    w: &mut dyn Write,
) -> Result<()> {
    let sub = working_graph(g, freq, config.top, labels)?;
    let nodes: Vec<NodeId> = if labels.is_empty() {
        rank_by_frequency(&sub, freq).into_iter().take(10).collect()
    } else {
        labels
            .iter()
            .map(|l| sub.require(l))
            .collect::<semnet::Result<_>>()?
    };
    let f = compute_affinity(config, &sub)?;
    let sem = semantic_value(&sub, &f, freq)?;
    let m = semantic_affinity_matrix(&sub, &f, &sem, &nodes, config.pipe())?;
    m.write_csv(w)?;
    Ok(())
}

pub fn cmd_semaffinity(config: &RunConfig, edges: &Path, freq: &Path, labels: &[String]) -> Result<PathBuf> {
    config.validate()?;
    let (g, table) = load_network(edges, freq)?;
    for l in labels {
        g.require(l).with_context(|| format!("label `{l}` not found in {}", edges.display()))?;
    }
    let path = output_path(&config.out_dir, &stem(edges, EDGES_SUFFIX), ".semaffinity.csv");
    write_atomic(&path, |w| write_semaffinity(config, &g, &table, labels, w))?;
    Ok(path)
}

/// Affinity listings `cmd_affinity` can produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ListingKind {
    BestFriend,
    BestCommonFriend,
    Machiavelli,
    Mixed,
    Semantic,
}

impl std::str::FromStr for ListingKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bf" => Ok(Self::BestFriend),
            "bcf" => Ok(Self::BestCommonFriend),
            "mach" => Ok(Self::Machiavelli),
            "mix" => Ok(Self::Mixed),
            "sem" => Ok(Self::Semantic),
            other => Err(format!("unknown affinity kind `{other}` (expected bf, bcf, mach, mix or sem)")),
        }
    }
}

impl ListingKind {
    fn name(self) -> &'static str {
        match self {
            Self::BestFriend => "bf",
            Self::BestCommonFriend => "bcf",
            Self::Machiavelli => "mach",
            Self::Mixed => "mix",
            Self::Semantic => "sem",
        }
    }
}

/// Top `k` positive affinities from `node` for each kind, as
/// `kind,rank,node,value` rows.
pub fn write_affinity_listing(
    config: &RunConfig,
    g: &Graph<f64>,
    freq: &FrequencyTable,
    node: &str,
    kinds: &[ListingKind],
    k: usize,
    w: &mut dyn Write,
) -> Result<()> {
    let sub = working_graph(g, freq, config.top, &[node.to_owned()])?;
    let x = sub.require(node)?;
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["kind", "rank", "node", "value"])?;
    for &kind in kinds {
        let values: Vec<(NodeId, f64)> = match kind {
            ListingKind::BestFriend => best_friend(&sub).row(x).collect(),
            ListingKind::BestCommonFriend => best_common_friend(&sub).row(x).collect(),
            ListingKind::Machiavelli => machiavelli(&sub).row(x).collect(),
            ListingKind::Mixed => mixed_affinity_with(&sub, config.alpha)?.row(x).collect(),
            ListingKind::Semantic => {
                let f = compute_affinity(config, &sub)?;
                let sem = semantic_value(&sub, &f, freq)?;
                let targets: Vec<NodeId> = sub.nodes().filter(|&y| y != x).collect();
                targets
                    .par_iter()
                    .map(|&y| Ok((y, pipe_comparison(&sub, &f, &sem, x, y, config.pipe())?.affinity_value)))
                    .collect::<semnet::Result<Vec<_>>>()?
            }
        };
        let mut ranked: Vec<(NodeId, f64)> = values.into_iter().filter(|&(_, v)| v > 0.0).collect();
        ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| sub.label(a.0).cmp(sub.label(b.0))));
        for (rank, (y, v)) in ranked.into_iter().take(k).enumerate() {
            out.write_record([
                kind.name().to_owned(),
                (rank + 1).to_string(),
                sub.label(y).to_owned(),
                format!("{v:.6}"),
            ])?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn cmd_affinity(
    config: &RunConfig,
    edges: &Path,
    freq: &Path,
    node: &str,
    kinds: &[ListingKind],
    k: usize,
) -> Result<PathBuf> {
    config.validate()?;
    if k == 0 {
        bail!("-k must be at least 1");
    }
    let (g, table) = load_network(edges, freq)?;
    g.require(node)
        .with_context(|| format!("label `{node}` not found in {}", edges.display()))?;
    let path = output_path(
        &config.out_dir,
        &format!("{}.{node}", stem(edges, EDGES_SUFFIX)),
        ".affinity.csv",
    );
    write_atomic(&path, |w| write_affinity_listing(config, &g, &table, node, kinds, k, w))?;
    Ok(path)
}
