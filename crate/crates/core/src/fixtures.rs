//! The worked examples used throughout tests, the CLI fixtures and the demo.

use crate::graph::Graph;
use crate::pairing::PairedLabeling;
use crate::text::parse_graph;
use crate::transform::{b_graft, BGraftSpec, Block};

pub const UPPER_3: &str = "\
# three pairs, x_i y_j present exactly when i <= j
pairs 3
edge x1 y2
edge x1 y3
edge x2 y3
";

pub const C4: &str = "\
# the 4-cycle x1 y1 x2 y2
pairs 2
edge y1 x2
edge y2 x1
";

/// Three pairs whose restricted transform is the path `x1 - x3 - x2`.
pub const PAIRS3_NOT_LEVEL: &str = "\
pairs 3
edge x1 y3
edge x2 y3
";

pub const TRIANGLE_H0: &str = "\
edge 1 2
edge 2 3
edge 1 3
";

pub const BLOCK_1: &str = "xside x1\nyside y1\nedge x1 y1\n";
pub const BLOCK_2: &str = "xside x2 x3\nyside y2 y3\nedge x2 y2\nedge x2 y3\nedge x3 y3\n";
pub const BLOCK_3: &str = "xside x4\nyside y4\nedge x4 y4\n";

pub fn upper_3() -> Graph {
    parse_graph(UPPER_3).expect("fixture parses")
}

pub fn c4() -> Graph {
    parse_graph(C4).expect("fixture parses")
}

/// `pairs n` with no further edges: the complete intersection.
pub fn pairs(n: usize) -> Graph {
    parse_graph(&format!("pairs {n}\n")).expect("fixture parses")
}

pub fn triangle_graft_spec() -> BGraftSpec {
    let blocks = [BLOCK_1, BLOCK_2, BLOCK_3]
        .iter()
        .map(|src| Block::from_text(src).expect("fixture parses"))
        .collect();
    BGraftSpec::new(parse_graph(TRIANGLE_H0).expect("fixture parses"), blocks).expect("valid spec")
}

/// The B-grafted graph over a triangle with blocks `B_1, B_2, B_3`.
pub fn triangle_graft() -> (Graph, PairedLabeling) {
    b_graft(&triangle_graft_spec()).expect("fixture grafts")
}
