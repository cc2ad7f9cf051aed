//! Edge-list and frequency-table files.
//!
//! Edge lists are UTF-8 text with one `source<TAB>target<TAB>weight` line per
//! edge; lines starting with `#` are comments. Weights are written in the
//! shortest form that parses back to the identical value. Frequency tables
//! are CSV with a `node,frequency` header.

use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scalar::Scalar;
use crate::semantics::FrequencyTable;

pub fn read_edge_list<T: Scalar>(path: impl AsRef<Path>) -> Result<Graph<T>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_edge_list(BufReader::new(file), path)
}

/// Parses an edge list; `origin` only labels error messages.
pub fn parse_edge_list<T: Scalar, R: BufRead>(reader: R, origin: impl AsRef<Path>) -> Result<Graph<T>> {
    let origin = origin.as_ref();
    let mut g = Graph::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| Error::io(origin, e))?;
        let line = line.trim_end_matches('\r');
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            path: origin.to_path_buf(),
            line: line_no,
            message,
        };
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(parse_err(format!(
                "expected 3 tab-separated fields, found {}",
                fields.len()
            )));
        }
        let weight: T = fields[2]
            .trim()
            .parse()
            .map_err(|_| parse_err(format!("invalid weight `{}`", fields[2])))?;
        let s = g.add_node(fields[0]);
        let t = g.add_node(fields[1]);
        g.add_edge(s, t, weight)
            .map_err(|e| parse_err(e.to_string()))?;
    }
    Ok(g)
}

pub fn write_edge_list<T: Scalar, W: Write>(g: &Graph<T>, mut w: W) -> Result<()> {
    for (s, t, weight) in g.edges() {
        writeln!(w, "{}\t{}\t{}", g.label(s), g.label(t), weight)
            .map_err(|e| Error::io("<edge list>", e))?;
    }
    Ok(())
}

pub fn read_frequency_table(path: impl AsRef<Path>) -> Result<FrequencyTable> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_frequency_table(file, path)
}

pub fn parse_frequency_table<R: Read>(reader: R, origin: impl AsRef<Path>) -> Result<FrequencyTable> {
    let origin = origin.as_ref();
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
    let mut table = FrequencyTable::new();
    for (i, rec) in rdr.records().enumerate() {
        // header is line 1
        let line = i + 2;
        let rec = rec?;
        let parse_err = |message: String| Error::Parse {
            path: origin.to_path_buf(),
            line,
            message,
        };
        if rec.len() != 2 {
            return Err(parse_err(format!("expected 2 fields, found {}", rec.len())));
        }
        let n: u64 = rec[1]
            .trim()
            .parse()
            .map_err(|_| parse_err(format!("invalid count `{}`", &rec[1])))?;
        table.add(&rec[0], n);
    }
    Ok(table)
}

pub fn write_frequency_table<W: Write>(table: &FrequencyTable, w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["node", "frequency"])?;
    for (label, n) in table.iter() {
        out.write_record([label, &n.to_string()])?;
    }
    out.flush().map_err(|e| Error::io("<frequency table>", e))?;
    Ok(())
}
