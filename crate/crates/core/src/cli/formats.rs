//! graph6 and edge-list formats.

use crate::error::{Error, Result};
use crate::graph::Graph;

const HEADER: &str = ">>graph6<<";

fn perr(offset: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        offset,
        msg: msg.into(),
    }
}

fn sixbits(bytes: &[u8], at: usize) -> Result<u64> {
    match bytes.get(at) {
        Some(&b) if (63..=126).contains(&b) => Ok((b - 63) as u64),
        Some(&b) => Err(perr(at, format!("byte {b:#04x} outside the graph6 range"))),
        None => Err(perr(at, "unexpected end of input")),
    }
}

/// Decodes one graph6 line (an optional `>>graph6<<` prefix is skipped).
pub fn parse_graph6(line: &str) -> Result<Graph> {
    let body = line.trim_end_matches(['\n', '\r']);
    let skip = if body.starts_with(HEADER) {
        HEADER.len()
    } else {
        0
    };
    let bytes = &body.as_bytes()[skip..];
    let at = |i: usize| skip + i;
    if bytes.is_empty() {
        return Err(perr(at(0), "empty graph6 string"));
    }
    let (n, mut pos) = if bytes[0] != 126 {
        (
            sixbits(bytes, 0).map_err(|_| perr(at(0), "bad order byte"))? as usize,
            1,
        )
    } else if bytes.get(1) != Some(&126) {
        let mut n = 0u64;
        for i in 1..4 {
            n = n << 6 | sixbits(bytes, i).map_err(|_| perr(at(i), "bad order byte"))?;
        }
        (n as usize, 4)
    } else {
        let mut n = 0u64;
        for i in 2..8 {
            n = n << 6 | sixbits(bytes, i).map_err(|_| perr(at(i), "bad order byte"))?;
        }
        (n as usize, 8)
    };
    let bits = n * n.saturating_sub(1) / 2;
    let need = bits.div_ceil(6);
    if bytes.len() != pos + need {
        return Err(perr(
            at(bytes.len().min(pos + need)),
            format!(
                "expected {need} data bytes for {n} vertices, found {}",
                bytes.len() - pos
            ),
        ));
    }
    let mut g = Graph::empty(n);
    let mut k = 0;
    let mut word = 0u64;
    let mut left = 0;
    for j in 1..n {
        for i in 0..j {
            if left == 0 {
                word = sixbits(bytes, pos).map_err(|e| match e {
                    Error::Parse { msg, .. } => perr(at(pos), msg),
                    e => e,
                })?;
                pos += 1;
                left = 6;
            }
            left -= 1;
            if word >> left & 1 == 1 {
                g.set_edge(i, j);
            }
            k += 1;
        }
    }
    debug_assert_eq!(k, bits);
    if left > 0 && word & ((1 << left) - 1) != 0 {
        return Err(perr(at(pos - 1), "nonzero padding bits"));
    }
    Ok(g)
}

/// Encodes a graph as one graph6 string without header or newline.
pub fn to_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out: Vec<u8> = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for s in [12, 6, 0] {
            out.push((n >> s & 63) as u8 + 63);
        }
    } else {
        out.extend([126, 126]);
        for s in [30, 24, 18, 12, 6, 0] {
            out.push((n >> s & 63) as u8 + 63);
        }
    }
    let mut word = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            word = word << 1 | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(word + 63);
                word = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((word << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 is ASCII")
}

/// One graph per nonempty line.
pub fn parse_graph6_lines(text: &str) -> Result<Vec<Graph>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let body = line.trim_end_matches(['\n', '\r']);
        if !body.trim().is_empty() {
            out.push(parse_graph6(body).map_err(|e| match e {
                Error::Parse { offset: o, msg } => perr(offset + o, msg),
                e => e,
            })?);
        }
        offset += line.len();
    }
    Ok(out)
}

/// Lines `u v`, optionally preceded by `n <count>`; `#` starts a comment.
/// Without a header the order is one more than the largest index.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut declared: Option<usize> = None;
    let mut edges = Vec::new();
    let mut offset = 0;
    for (lineno, line) in text.split_inclusive('\n').enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        let start = offset;
        offset += line.len();
        if body.is_empty() {
            continue;
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        let num = |t: &str| {
            t.parse::<usize>()
                .map_err(|_| perr(start, format!("line {}: bad integer {t:?}", lineno + 1)))
        };
        match toks.as_slice() {
            ["n", c] if edges.is_empty() && declared.is_none() => declared = Some(num(c)?),
            [a, b] => {
                let (u, v) = (num(a)?, num(b)?);
                if u == v {
                    return Err(perr(
                        start,
                        format!("line {}: loop at vertex {u}", lineno + 1),
                    ));
                }
                edges.push((u, v));
            }
            _ => {
                return Err(perr(
                    start,
                    format!("line {}: expected `u v` or `n <count>`", lineno + 1),
                ))
            }
        }
    }
    let implied = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
    let n = declared.unwrap_or(implied);
    Graph::from_edges(n, &edges)
}

pub fn to_edge_list(g: &Graph) -> String {
    let mut s = format!("n {}\n", g.n());
    for (u, v) in g.edges() {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}
