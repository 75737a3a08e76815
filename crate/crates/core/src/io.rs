//! Text formats for graphs.
//!
//! Edge list: one `u<TAB>v` pair per line, 0-based node ids, undirected,
//! no duplicate pairs, no self-loops. The reader accepts either endpoint
//! order and symmetrizes.
//!
//! Dense: first line is `n`, followed by n rows of n whitespace-separated
//! 0/1 entries. The dense format carries the exact node count and is the
//! one to use when trailing isolated nodes matter.

use std::io::{BufRead, Write};

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::graph::AdjacencyMatrix;

/// Writes one `u<TAB>v` line per edge, `u < v`, lexicographic order.
pub fn write_edge_list<W: Write>(a: &AdjacencyMatrix, mut w: W) -> Result<()> {
    for (u, v) in a.edges() {
        writeln!(w, "{u}\t{v}")?;
    }
    Ok(())
}

/// Parses an edge list. `n` forces the node count; when absent it is
/// inferred as one past the largest id seen (isolated trailing nodes are
/// then unrepresentable, so pass `n` if they matter).
pub fn read_edge_list<R: BufRead>(r: R, n: Option<usize>) -> Result<AdjacencyMatrix> {
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut max_id = 0usize;
    for (idx, line) in r.lines().enumerate() {
        let line = line?;
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let mut parts = trimmed.split_whitespace();
        let (u, v) = match (parts.next(), parts.next(), parts.next()) {
            (Some(u), Some(v), None) => (u, v),
            _ => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected `u<TAB>v`, got {trimmed:?}"),
                })
            }
        };
        let parse = |s: &str| {
            s.parse::<usize>().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("invalid node id {s:?}"),
            })
        };
        let (u, v) = (parse(u)?, parse(v)?);
        if u == v {
            return Err(Error::Parse {
                line: line_no,
                message: format!("self-loop at node {u}"),
            });
        }
        let pair = (u.min(v), u.max(v));
        if edges.contains(&pair) {
            return Err(Error::Parse {
                line: line_no,
                message: format!("duplicate edge ({u},{v})"),
            });
        }
        max_id = max_id.max(pair.1);
        edges.push(pair);
    }
    let n = match n {
        Some(n) => n,
        None if edges.is_empty() => {
            return Err(Error::invalid(
                "cannot infer node count from an empty edge list; pass n explicitly",
            ))
        }
        None => max_id + 1,
    };
    AdjacencyMatrix::from_edges(n, &edges)
}

/// Writes the dense format: `n`, then n rows of space-separated 0/1.
pub fn write_dense<W: Write>(a: &AdjacencyMatrix, mut w: W) -> Result<()> {
    let n = a.n();
    writeln!(w, "{n}")?;
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| a.get(i, j).to_string()).collect();
        writeln!(w, "{}", row.join(" "))?;
    }
    Ok(())
}

/// Parses the dense format written by [`write_dense`].
pub fn read_dense<R: BufRead>(r: R) -> Result<AdjacencyMatrix> {
    let mut lines = r.lines().enumerate();
    let n = loop {
        match lines.next() {
            Some((idx, line)) => {
                let line = line?;
                let t = line.trim();
                if t.is_empty() {
                    continue;
                }
                break t.parse::<usize>().map_err(|_| Error::Parse {
                    line: idx + 1,
                    message: format!("expected node count, got {t:?}"),
                })?;
            }
            None => {
                return Err(Error::Parse {
                    line: 1,
                    message: "empty input".into(),
                })
            }
        }
    };
    if n == 0 {
        return Err(Error::invalid("graph needs at least one node"));
    }
    let mut entries = Array2::zeros((n, n));
    let mut row = 0usize;
    for (idx, line) in lines {
        let line = line?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        if row >= n {
            return Err(Error::Parse {
                line: idx + 1,
                message: format!("more than {n} rows"),
            });
        }
        let values: Vec<&str> = t.split_whitespace().collect();
        if values.len() != n {
            return Err(Error::Parse {
                line: idx + 1,
                message: format!("expected {n} entries, got {}", values.len()),
            });
        }
        for (j, v) in values.iter().enumerate() {
            entries[[row, j]] = match *v {
                "0" => 0,
                "1" => 1,
                other => {
                    return Err(Error::Parse {
                        line: idx + 1,
                        message: format!("entry {other:?} is not 0 or 1"),
                    })
                }
            };
        }
        row += 1;
    }
    if row != n {
        return Err(Error::Parse {
            line: row + 1,
            message: format!("expected {n} rows, got {row}"),
        });
    }
    AdjacencyMatrix::from_entries(entries)
}
