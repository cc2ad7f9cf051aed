//! Tagged-token corpora and co-occurrence networks.
//!
//! Token files (`*.tok.tsv`) hold one `surface<TAB>pos<TAB>lemma` line per
//! token. A blank line ends a document (a chapter or tale) and `#` lines are
//! comments that carry no position. Positions are the 0-based index of the
//! token in its document before any filtering, so the co-occurrence window
//! is measured in raw text distance.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{fuse_with, FuseRule, Graph};
use crate::scalar::Scalar;
use crate::semantics::FrequencyTable;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedToken {
    pub surface: String,
    pub pos: String,
    pub lemma: String,
    pub position: usize,
}

impl TaggedToken {
    /// Penn Treebank nouns: NN, NNS, NNP, NNPS.
    pub fn is_noun(&self) -> bool {
        self.pos.starts_with("NN")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocumentStream {
    pub id: String,
    pub tokens: Vec<TaggedToken>,
}

impl DocumentStream {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

pub fn read_token_file(path: impl AsRef<Path>) -> Result<Vec<DocumentStream>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_tokens(BufReader::new(file), path)
}

/// Parses token lines into documents. Document ids are `<origin>#<index>`.
pub fn parse_tokens<R: BufRead>(reader: R, origin: impl AsRef<Path>) -> Result<Vec<DocumentStream>> {
    let origin = origin.as_ref();
    let stem = origin
        .file_name()
        .map(|s| s.to_string_lossy().trim_end_matches(".tok.tsv").to_owned())
        .unwrap_or_default();
    let mut docs = Vec::new();
    let mut current: Vec<TaggedToken> = Vec::new();
    let flush = |tokens: &mut Vec<TaggedToken>, docs: &mut Vec<DocumentStream>| {
        if !tokens.is_empty() {
            docs.push(DocumentStream {
                id: format!("{stem}#{}", docs.len()),
                tokens: std::mem::take(tokens),
            });
        }
    };
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(origin, e))?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            flush(&mut current, &mut docs);
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            path: origin.to_path_buf(),
            line: i + 1,
            message,
        };
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(parse_err(format!(
                "expected 3 tab-separated fields (surface, pos, lemma), found {}",
                fields.len()
            )));
        }
        let lemma = fields[2].trim().to_lowercase();
        if lemma.is_empty() {
            return Err(parse_err("empty lemma".into()));
        }
        current.push(TaggedToken {
            surface: fields[0].to_owned(),
            pos: fields[1].trim().to_owned(),
            lemma,
            position: current.len(),
        });
    }
    flush(&mut current, &mut docs);
    Ok(docs)
}

/// Keeps noun tokens, preserving their original positions.
pub fn filter_nouns(d: &DocumentStream) -> DocumentStream {
    DocumentStream {
        id: d.id.clone(),
        tokens: d.tokens.iter().filter(|t| t.is_noun()).cloned().collect(),
    }
}

/// Directed co-occurrence network of one document.
///
/// Every pair of tokens at positions `p < q` with `q - p <= window` adds 1 to
/// the edge `lemma(p) -> lemma(q)`, unless both have the same lemma. Nodes
/// are the distinct lemmas in order of first appearance.
pub fn cooccurrence_network<T: Scalar>(d: &DocumentStream, window: usize) -> Result<Graph<T>> {
    if window == 0 {
        return Err(Error::InvalidArgument("window must be at least 1".into()));
    }
    let mut g = Graph::new();
    let ids: Vec<_> = d.tokens.iter().map(|t| g.add_node(&t.lemma)).collect();
    for (i, ti) in d.tokens.iter().enumerate() {
        for (j, tj) in d.tokens.iter().enumerate().skip(i + 1) {
            if tj.position.saturating_sub(ti.position) > window {
                break;
            }
            if ids[i] != ids[j] {
                g.increment_edge(ids[i], ids[j], T::one())?;
            }
        }
    }
    Ok(g)
}

/// Occurrences of each lemma across all documents.
pub fn frequency_table(docs: &[DocumentStream]) -> FrequencyTable {
    let mut t = FrequencyTable::new();
    for d in docs {
        for tok in &d.tokens {
            t.add(&tok.lemma, 1);
        }
    }
    t
}

/// Per-document networks fused into one book network (max weight per edge).
pub fn build_book_network<T: Scalar>(docs: &[DocumentStream], window: usize) -> Result<Graph<T>> {
    build_book_network_with(docs, window, FuseRule::Max)
}

pub fn build_book_network_with<T: Scalar>(
    docs: &[DocumentStream],
    window: usize,
    rule: FuseRule,
) -> Result<Graph<T>> {
    if docs.is_empty() {
        return Ok(Graph::new());
    }
    let nets = docs
        .par_iter()
        .map(|d| cooccurrence_network(d, window))
        .collect::<Result<Vec<Graph<T>>>>()?;
    fuse_with(&nets, rule)
}
