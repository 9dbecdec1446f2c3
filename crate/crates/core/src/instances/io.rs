//! Plain-text instance files.
//!
//! ```text
//! graph <n> <m>            hypergraph <n> <m> <r>      local <n> <r>
//! <u> <v>                  <v1> ... <vr>               <class of each neighbor, sorted neighbor order>
//! ```
//!
//! Tokens are whitespace separated, everything after `#` is ignored and
//! vertices are 0-indexed.

use std::fmt::Write as _;

use thiserror::Error;

use super::{Graph, Hypergraph, InstanceError, LocalColoring};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("invalid instance: {0}")]
    Instance(#[from] InstanceError),
}

/// Either kind of instance, as read from a file.
#[derive(Debug, Clone)]
pub enum Instance {
    Graph(Graph),
    Hyper(Hypergraph),
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let body = line.split('#').next().unwrap_or("");
        let toks: Vec<&str> = body.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

fn num(tok: &str, line: usize) -> Result<usize, ParseError> {
    tok.parse().map_err(|_| ParseError::Syntax {
        line,
        msg: format!("expected a non-negative integer, got {tok:?}"),
    })
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        msg: msg.into(),
    }
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| syntax(1, "empty file"))?;
    match header.as_slice() {
        ["graph", n, m] => {
            let (n, m) = (num(n, hl)?, num(m, hl)?);
            let mut edges = Vec::with_capacity(m);
            for (line, toks) in lines {
                let [u, v] = toks.as_slice() else {
                    return Err(syntax(line, "graph edge needs exactly two vertices"));
                };
                edges.push((num(u, line)?, num(v, line)?));
            }
            if edges.len() != m {
                return Err(syntax(
                    hl,
                    format!("header says {m} edges, found {}", edges.len()),
                ));
            }
            Ok(Instance::Graph(Graph::new(n, &edges)?))
        }
        ["hypergraph", n, m, r] => {
            let (n, m, r) = (num(n, hl)?, num(m, hl)?, num(r, hl)?);
            let mut edges = Vec::with_capacity(m);
            for (line, toks) in lines {
                let edge = toks
                    .iter()
                    .map(|t| num(t, line))
                    .collect::<Result<Vec<_>, _>>()?;
                edges.push(edge);
            }
            if edges.len() != m {
                return Err(syntax(
                    hl,
                    format!("header says {m} edges, found {}", edges.len()),
                ));
            }
            Ok(Instance::Hyper(Hypergraph::new(n, r, &edges)?))
        }
        _ => Err(syntax(
            hl,
            "expected `graph <n> <m>` or `hypergraph <n> <m> <r>`",
        )),
    }
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("graph {} {}\n", g.n(), g.m());
    for [u, v] in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn write_hypergraph(h: &Hypergraph) -> String {
    let mut out = format!("hypergraph {} {} {}\n", h.n(), h.m(), h.r());
    for e in h.edges() {
        let line: Vec<String> = e.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}

pub fn write_local_coloring(loc: &LocalColoring) -> String {
    let mut out = format!("local {} {}\n", loc.classes.len(), loc.r);
    for cls in &loc.classes {
        let line: Vec<String> = cls.iter().map(ToString::to_string).collect();
        // keep a placeholder so isolated vertices still occupy a line
        let _ = writeln!(out, "{} {}", cls.len(), line.join(" "));
    }
    out
}

/// Parses a local coloring; each vertex line starts with its neighbor count.
pub fn parse_local_coloring(text: &str) -> Result<LocalColoring, ParseError> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| syntax(1, "empty file"))?;
    let ["local", n, r] = header.as_slice() else {
        return Err(syntax(hl, "expected `local <n> <r>`"));
    };
    let (n, r) = (num(n, hl)?, num(r, hl)?);
    let mut classes = Vec::with_capacity(n);
    for (line, toks) in lines {
        let count = num(toks[0], line)?;
        if toks.len() != count + 1 {
            return Err(syntax(line, "class count does not match"));
        }
        let cls = toks[1..]
            .iter()
            .map(|t| num(t, line).map(|c| c as u32))
            .collect::<Result<Vec<_>, _>>()?;
        classes.push(cls);
    }
    if classes.len() != n {
        return Err(syntax(
            hl,
            format!("header says {n} vertices, found {}", classes.len()),
        ));
    }
    Ok(LocalColoring { r, classes })
}
