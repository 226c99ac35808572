//! Line-oriented text format for concept networks.
//!
//! ```text
//! conceptnet v1
//! node object bird
//! node category animal
//! edge object/bird is category/animal 1.0000000000000000 1
//! ```
//!
//! Blank lines and `#` comments are ignored. Nodes must be declared before
//! any edge that references them.

use std::io::{self, BufRead, Write};

use thiserror::Error;

use super::{ConceptKey, ConceptKind, ConceptNetwork, EdgeLabel, EdgeState};
use crate::numfmt::format_sig;

const HEADER: &str = "conceptnet v1";

#[derive(Debug, Error)]
pub enum PersistError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

fn parse_err(line: usize, reason: impl Into<String>) -> PersistError {
    PersistError::Parse {
        line,
        reason: reason.into(),
    }
}

/// Writes nodes sorted by (kind, name), then edges sorted by source, label, target.
pub fn save_network<W: Write>(net: &ConceptNetwork, mut out: W) -> io::Result<()> {
    writeln!(out, "{HEADER}")?;
    for node in net.sorted_nodes() {
        writeln!(out, "node {} {}", node.kind, node.name)?;
    }
    let mut edges: Vec<_> = net.canonical_edges().into_iter().collect();
    edges.sort_by(|((s1, l1, d1), _), ((s2, l2, d2), _)| (s1, l1, d1).cmp(&(s2, l2, d2)));
    for ((src, label, dst), (weight, generic)) in edges {
        writeln!(
            out,
            "edge {src} {label} {dst} {} {}",
            format_sig(weight, 17),
            u8::from(generic)
        )?;
    }
    out.flush()
}

pub fn load_network<R: BufRead>(input: R) -> Result<ConceptNetwork, PersistError> {
    let mut net = ConceptNetwork::new();
    let mut seen_header = false;
    let mut last_line = 0;

    for (idx, line) in input.lines().enumerate() {
        let lineno = idx + 1;
        last_line = lineno;
        let line = line?;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if !seen_header {
            if content != HEADER {
                return Err(parse_err(lineno, format!("expected header {HEADER:?}")));
            }
            seen_header = true;
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        match fields[0] {
            "node" => {
                let [_, kind, name] = fields[..] else {
                    return Err(parse_err(lineno, "node line needs: node <kind> <name>"));
                };
                let kind: ConceptKind = kind
                    .parse()
                    .map_err(|e| parse_err(lineno, format!("{e}")))?;
                net.add_concept(name, kind)
                    .map_err(|e| parse_err(lineno, format!("{e}")))?;
            }
            "edge" => {
                let [_, src, label, dst, weight, generic] = fields[..] else {
                    return Err(parse_err(
                        lineno,
                        "edge line needs: edge <src> <label> <dst> <weight> <generic>",
                    ));
                };
                let lookup = |s: &str| {
                    let key: ConceptKey =
                        s.parse().map_err(|e| parse_err(lineno, format!("{e}")))?;
                    net.find_key(&key).ok_or_else(|| {
                        parse_err(lineno, format!("edge references undeclared node {key}"))
                    })
                };
                let src = lookup(src)?;
                let dst = lookup(dst)?;
                let label: EdgeLabel = label
                    .parse()
                    .map_err(|e| parse_err(lineno, format!("{e}")))?;
                let weight: f64 = weight
                    .parse()
                    .map_err(|_| parse_err(lineno, format!("bad weight {weight:?}")))?;
                if !(0.0..=1.0).contains(&weight) {
                    return Err(parse_err(lineno, format!("weight {weight} outside [0, 1]")));
                }
                let generic = match generic {
                    "0" => false,
                    "1" => true,
                    other => return Err(parse_err(lineno, format!("bad generic flag {other:?}"))),
                };
                if generic && weight != 1.0 {
                    return Err(parse_err(lineno, "generic edge must have weight 1"));
                }
                net.check_edge(src, dst, label)
                    .map_err(|e| parse_err(lineno, format!("{e}")))?;
                if net.edge(src, dst, label).is_some() {
                    return Err(parse_err(lineno, "duplicate edge"));
                }
                net.insert_edge(src, dst, label, EdgeState { weight, generic });
            }
            other => return Err(parse_err(lineno, format!("unknown record {other:?}"))),
        }
    }
    if !seen_header {
        return Err(parse_err(last_line.max(1), "missing header"));
    }
    Ok(net)
}

impl ConceptNetwork {
    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        save_network(self, &mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("network text is UTF-8")
    }

    pub fn from_text(text: &str) -> Result<Self, PersistError> {
        load_network(text.as_bytes())
    }
}
