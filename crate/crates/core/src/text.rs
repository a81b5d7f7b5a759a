//! Line-oriented graph text format.
//!
//! ```text
//! # comment
//! pairs 3            # x1..x3, y1..y3 and the edges x_i y_i
//! vertex a
//! edge x1 y2
//! xside x1 x2        # optional bipartition, used by graft blocks
//! yside y1 y2
//! ```

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A parsed graph file.
#[derive(Debug, Clone)]
pub struct GraphFile {
    pub graph: Graph,
    /// `n` from a `pairs <n>` directive.
    pub pairs: Option<usize>,
    pub x_side: Vec<String>,
    pub y_side: Vec<String>,
}

pub fn parse(src: &str) -> Result<GraphFile> {
    let mut vertices: Vec<String> = Vec::new();
    let mut edges: Vec<(String, String)> = Vec::new();
    let mut pairs = None;
    let mut x_side = Vec::new();
    let mut y_side = Vec::new();
    for (lineno, raw) in src.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("");
        let mut words = content.split_whitespace();
        let Some(keyword) = words.next() else {
            continue;
        };
        let args: Vec<&str> = words.collect();
        let err = |message: String| Error::Parse { line, message };
        match keyword {
            "vertex" => {
                if args.is_empty() {
                    return Err(err("`vertex` needs at least one name".into()));
                }
                vertices.extend(args.iter().map(|s| s.to_string()));
            }
            "edge" => {
                let [a, b] = args[..] else {
                    return Err(err(format!("`edge` takes two names, got {}", args.len())));
                };
                if a == b {
                    return Err(err(format!("loop on vertex `{a}`")));
                }
                edges.push((a.to_string(), b.to_string()));
            }
            "pairs" => {
                if pairs.is_some() {
                    return Err(err("duplicate `pairs` directive".into()));
                }
                let [count] = args[..] else {
                    return Err(err("`pairs` takes one count".into()));
                };
                let n: usize = count
                    .parse()
                    .map_err(|_| err(format!("bad pair count `{count}`")))?;
                if n == 0 {
                    return Err(err("pair count must be positive".into()));
                }
                for i in 1..=n {
                    vertices.push(format!("x{i}"));
                    vertices.push(format!("y{i}"));
                    edges.push((format!("x{i}"), format!("y{i}")));
                }
                pairs = Some(n);
            }
            "xside" => {
                x_side.extend(args.iter().map(|s| s.to_string()));
                vertices.extend(args.iter().map(|s| s.to_string()));
            }
            "yside" => {
                y_side.extend(args.iter().map(|s| s.to_string()));
                vertices.extend(args.iter().map(|s| s.to_string()));
            }
            other => return Err(err(format!("unknown directive `{other}`"))),
        }
    }
    Ok(GraphFile {
        graph: Graph::new(vertices, edges)?,
        pairs,
        x_side,
        y_side,
    })
}

pub fn parse_graph(src: &str) -> Result<Graph> {
    parse(src).map(|f| f.graph)
}
