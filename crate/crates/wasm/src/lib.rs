//! Browser bindings: analysis, `O_T` and grafting, returning JSON strings.
//!
//! The plain functions are usable (and tested) natively; the
//! `#[wasm_bindgen]` wrappers turn errors into JS exceptions.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use edge_cm::criteria::{parse_routes, CmOptions};
use edge_cm::report::{analyze, choose_labeling, AnalysisDocument};
use edge_cm::text::parse;
use edge_cm::transform::{b_graft, o_set, BGraftSpec, Block};
use edge_cm::{Field, Graph, PairedLabeling};

/// Vertex placement for drawing: `x` vertices on the bottom row, their
/// partners directly above.
#[derive(Debug, Serialize)]
pub struct Layout {
    pub vertices: Vec<PlacedVertex>,
    pub edges: Vec<LayoutEdge>,
}

#[derive(Debug, Serialize)]
pub struct PlacedVertex {
    pub name: String,
    /// 0 = bottom (`X`), 1 = top (`Y`).
    pub row: u8,
    pub col: usize,
}

#[derive(Debug, Serialize)]
pub struct LayoutEdge {
    pub a: String,
    pub b: String,
    /// `matching`, `xx` or `xy`.
    pub kind: &'static str,
}

pub fn layout(pl: &PairedLabeling) -> Layout {
    let g = pl.graph();
    let mut vertices = Vec::new();
    for i in 0..pl.n() {
        vertices.push(PlacedVertex {
            name: pl.x_name(i).into(),
            row: 0,
            col: i,
        });
        vertices.push(PlacedVertex {
            name: pl.y_name(i).into(),
            row: 1,
            col: i,
        });
    }
    let xm = pl.x_mask();
    let pair_of = |v: usize| (0..pl.n()).find(|&i| pl.x(i) == v || pl.y(i) == v);
    let edges = g
        .edges()
        .into_iter()
        .map(|(a, b)| {
            let kind = if xm >> a & 1 == 1 && xm >> b & 1 == 1 {
                "xx"
            } else if pair_of(a) == pair_of(b) {
                "matching"
            } else {
                "xy"
            };
            LayoutEdge {
                a: g.name(a).into(),
                b: g.name(b).into(),
                kind,
            }
        })
        .collect();
    Layout { vertices, edges }
}

#[derive(Serialize)]
struct Analysis {
    document: AnalysisDocument,
    #[serde(skip_serializing_if = "Option::is_none")]
    layout: Option<Layout>,
}

#[derive(Serialize)]
struct GraphResult {
    text: String,
    layout: Layout,
}

fn labeled(src: &str) -> Result<PairedLabeling, String> {
    let f = parse(src).map_err(|e| e.to_string())?;
    choose_labeling(f.pairs, &f.graph)
        .0
        .map_err(|e| e.to_string())
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable")
}

/// Runs the requested routes (`"a,c,f"`) over `field` (`"2"`, `"Q"`, ...).
pub fn analyze_json(src: &str, routes: &str, field: &str) -> Result<String, String> {
    let routes = parse_routes(routes).map_err(|e| e.to_string())?;
    let field: Field = field.parse().map_err(|e: edge_cm::Error| e.to_string())?;
    let opts = CmOptions {
        field,
        ..CmOptions::default()
    };
    let document = analyze(src, &routes, &opts).map_err(|e| e.to_string())?;
    let layout = labeled(src).ok().map(|pl| layout(&pl));
    Ok(to_json(&Analysis { document, layout }))
}

/// `O_T(G)` for a comma-separated list of 1-based pair indices. The layout
/// keeps the input labeling so the rewired edges can be compared in place.
pub fn transform_json(src: &str, set: &str) -> Result<String, String> {
    let pl = labeled(src)?;
    let t = set
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| format!("bad pair index `{s}`"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let h: Graph = o_set(&pl, &t).map_err(|e| e.to_string())?;
    let after = pl.with_graph(h.clone()).map_err(|e| e.to_string())?;
    Ok(to_json(&GraphResult {
        text: h.to_text(),
        layout: layout(&after),
    }))
}

/// Grafts blocks onto `h0`. Blocks are separated by lines containing only `---`.
pub fn graft_json(h0: &str, blocks: &str) -> Result<String, String> {
    let h0 = parse(h0).map_err(|e| e.to_string())?.graph;
    let mut chunks = vec![String::new()];
    for line in blocks.lines() {
        if line.trim() == "---" {
            chunks.push(String::new());
        } else {
            let last = chunks.last_mut().expect("nonempty");
            last.push_str(line);
            last.push('\n');
        }
    }
    let blocks = chunks
        .iter()
        .filter(|c| !c.trim().is_empty())
        .map(|c| Block::from_text(c))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let spec = BGraftSpec::new(h0, blocks).map_err(|e| e.to_string())?;
    let (g, pl) = b_graft(&spec).map_err(|e| e.to_string())?;
    Ok(to_json(&GraphResult {
        text: g.to_text(),
        layout: layout(&pl),
    }))
}

#[wasm_bindgen]
pub fn analyze_graph(src: &str, routes: &str, field: &str) -> Result<String, JsError> {
    analyze_json(src, routes, field).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn transform_graph(src: &str, set: &str) -> Result<String, JsError> {
    transform_json(src, set).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn graft_graph(h0: &str, blocks: &str) -> Result<String, JsError> {
    graft_json(h0, blocks).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use edge_cm::fixtures;
    use serde_json::Value;

    #[test]
    fn analyze_example() {
        let v: Value =
            serde_json::from_str(&analyze_json(fixtures::UPPER_3, "a,c,f", "Q").unwrap()).unwrap();
        assert_eq!(v["document"]["cm"]["value"], true);
        assert_eq!(v["document"]["cm"]["field"], "Q");
        assert_eq!(v["layout"]["vertices"].as_array().unwrap().len(), 6);
        assert!(analyze_json("edge a\n", "a", "2")
            .unwrap_err()
            .contains("line 1"));
        assert!(analyze_json(fixtures::C4, "a,z", "2").is_err());
    }

    #[test]
    fn transform_example() {
        let v: Value =
            serde_json::from_str(&transform_json(fixtures::UPPER_3, "2,3").unwrap()).unwrap();
        let kinds: Vec<&str> = v["layout"]["edges"]
            .as_array()
            .unwrap()
            .iter()
            .map(|e| e["kind"].as_str().unwrap())
            .collect();
        assert_eq!(kinds.iter().filter(|k| **k == "xx").count(), 3);
        assert_eq!(kinds.iter().filter(|k| **k == "matching").count(), 3);
        assert!(transform_json(fixtures::UPPER_3, "7").is_err());
    }

    #[test]
    fn graft_example() {
        let blocks = [fixtures::BLOCK_1, fixtures::BLOCK_2, fixtures::BLOCK_3].join("---\n");
        let v: Value =
            serde_json::from_str(&graft_json(fixtures::TRIANGLE_H0, &blocks).unwrap()).unwrap();
        assert_eq!(v["layout"]["edges"].as_array().unwrap().len(), 10);
        assert_eq!(
            v["text"].as_str().unwrap(),
            fixtures::triangle_graft().0.to_text()
        );
        assert!(graft_json(fixtures::TRIANGLE_H0, fixtures::BLOCK_1).is_err());
    }
}
