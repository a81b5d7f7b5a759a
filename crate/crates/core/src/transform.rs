//! Graph operators on paired labelings and the B-grafted construction.
//!
//! `O_i` moves every edge `x_k y_i` (`k ≠ i`) onto `x_k x_i`; `O_T` applies
//! `O_i` for each `i ∈ T`. The operators touch disjoint `y`-stars, so the
//! order of application does not matter.

use crate::error::{Error, Result};
use crate::graph::{bits, Graph, Mask};
use crate::pairing::{hall_violator, lex_first_matching, PairedLabeling};
use crate::text;

/// `O_i(G)` for a 1-based pair index `i`.
pub fn o_operator(pl: &PairedLabeling, i: usize) -> Result<Graph> {
    check_index(pl, i)?;
    let mut g = pl.graph().clone();
    apply_o(pl, &mut g, i - 1);
    Ok(g)
}

fn check_index(pl: &PairedLabeling, i: usize) -> Result<()> {
    if i == 0 || i > pl.n() {
        Err(Error::IndexOutOfRange {
            index: i,
            n: pl.n(),
        })
    } else {
        Ok(())
    }
}

fn apply_o(pl: &PairedLabeling, g: &mut Graph, i: usize) {
    let (xi, yi) = (pl.x(i), pl.y(i));
    let movers: Vec<usize> = (0..pl.n())
        .filter(|&k| k != i && g.has_edge(pl.x(k), yi))
        .collect();
    for k in movers {
        g.set_edge(pl.x(k), yi, false);
        g.set_edge(pl.x(k), xi, true);
    }
}

/// `O_T(G)` for a set of 1-based pair indices. Repeated indices are ignored.
pub fn o_set(pl: &PairedLabeling, t: &[usize]) -> Result<Graph> {
    for &i in t {
        check_index(pl, i)?;
    }
    let mask = t.iter().fold(0u64, |m, &i| m | 1 << (i - 1));
    Ok(o_set_mask(pl, mask))
}

/// `O_T(G)` with `T` given as a bitmask over 0-based pair indices.
pub fn o_set_mask(pl: &PairedLabeling, t: Mask) -> Graph {
    let mut g = pl.graph().clone();
    for i in bits(t) {
        apply_o(pl, &mut g, i);
    }
    g
}

/// `O_[n](G)` induced on `X`.
pub fn restricted_o_full(pl: &PairedLabeling) -> Graph {
    let full = if pl.n() == 64 {
        !0
    } else {
        (1u64 << pl.n()) - 1
    };
    o_set_mask(pl, full).induced_on_mask(pl.x_mask())
}

/// A bipartite block with designated sides `X_i` and `Y_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub graph: Graph,
    pub x_side: Vec<String>,
    pub y_side: Vec<String>,
}

impl Block {
    /// Parses a block file. Sides come from `xside`/`yside` directives; if
    /// both are absent, names starting with `x` form `X` and `y` form `Y`.
    pub fn from_text(src: &str) -> Result<Block> {
        let f = text::parse(src)?;
        let (x_side, y_side) = if f.x_side.is_empty() && f.y_side.is_empty() {
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            for n in f.graph.names() {
                match n.chars().next() {
                    Some('x') => xs.push(n.clone()),
                    Some('y') => ys.push(n.clone()),
                    _ => {
                        return Err(Error::GraftSpec(format!(
                            "cannot infer the side of `{n}`; use xside/yside"
                        )))
                    }
                }
            }
            (xs, ys)
        } else {
            (f.x_side, f.y_side)
        };
        Block::new(f.graph, x_side, y_side)
    }

    pub fn new(graph: Graph, x_side: Vec<String>, y_side: Vec<String>) -> Result<Block> {
        let xm = graph.mask_of(&x_side)?;
        let ym = graph.mask_of(&y_side)?;
        if x_side.is_empty()
            || xm.count_ones() as usize != x_side.len()
            || ym.count_ones() as usize != y_side.len()
        {
            return Err(Error::GraftSpec(
                "block sides must be nonempty without repeats".into(),
            ));
        }
        if x_side.len() != y_side.len() {
            return Err(Error::GraftSpec(format!(
                "block sides differ in size: {} vs {}",
                x_side.len(),
                y_side.len()
            )));
        }
        if xm & ym != 0 || xm | ym != graph.full_mask() {
            return Err(Error::GraftSpec(
                "block sides must partition its vertices".into(),
            ));
        }
        if !graph.is_independent(xm) || !graph.is_independent(ym) {
            return Err(Error::GraftSpec(
                "block is not bipartite with respect to its sides".into(),
            ));
        }
        if graph.has_isolated() {
            return Err(Error::GraftSpec("block has an isolated vertex".into()));
        }
        Ok(Block {
            graph,
            x_side,
            y_side,
        })
    }
}

/// A base graph `H_0` on `p` vertices and one block per base vertex. Block
/// `k` is attached to the `k`-th vertex of `H_0` in vertex order.
#[derive(Debug, Clone)]
pub struct BGraftSpec {
    pub h0: Graph,
    pub blocks: Vec<Block>,
}

impl BGraftSpec {
    pub fn new(h0: Graph, blocks: Vec<Block>) -> Result<Self> {
        if h0.vertex_count() != blocks.len() {
            return Err(Error::GraftSpec(format!(
                "base graph has {} vertices but {} blocks were given",
                h0.vertex_count(),
                blocks.len()
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for b in &blocks {
            for n in b.graph.names() {
                if !seen.insert(n.clone()) {
                    return Err(Error::GraftSpec(format!(
                        "vertex `{n}` appears in two blocks"
                    )));
                }
            }
        }
        Ok(BGraftSpec { h0, blocks })
    }
}

/// Builds `G(H_0; B_1, ..., B_p)` with the labeling that pairs each `x`
/// with its partner in the lexicographically first perfect matching of
/// its block.
pub fn b_graft(spec: &BGraftSpec) -> Result<(Graph, PairedLabeling)> {
    let mut vertices = Vec::new();
    let mut edges: Vec<(String, String)> = Vec::new();
    let mut pairs = Vec::new();
    for b in &spec.blocks {
        vertices.extend(b.graph.names().iter().cloned());
        edges.extend(b.graph.edge_names());
        pairs.extend(block_matching(b)?);
    }
    for (i, j) in spec.h0.edges() {
        for a in &spec.blocks[i].x_side {
            for c in &spec.blocks[j].x_side {
                edges.push((a.clone(), c.clone()));
            }
        }
    }
    let g = Graph::new(vertices, edges)?;
    let pl = PairedLabeling::new(g.clone(), pairs)?;
    debug_assert!(g.is_vertex_cover(pl.x_mask()));
    debug_assert!(g.minimal_cover_masks().contains(&pl.x_mask()));
    Ok((g, pl))
}

fn block_matching(b: &Block) -> Result<Vec<(String, String)>> {
    let g = &b.graph;
    let mut xs: Vec<usize> = b.x_side.iter().map(|n| g.index_of(n).unwrap()).collect();
    xs.sort_unstable();
    let ym = g.mask_of(&b.y_side)?;
    let mut chosen = Vec::new();
    if !lex_first_matching(g, &xs, ym, &mut chosen) {
        return Err(Error::Structure {
            cover: b.x_side.clone(),
            hall_set: g.names_of(hall_violator(g, &xs, ym)),
        });
    }
    Ok(xs
        .iter()
        .zip(chosen)
        .map(|(&x, y)| (g.name(x).to_string(), g.name(y).to_string()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::pairing::find_star_labeling;
    use crate::text::parse_graph;
    use proptest::prelude::*;

    fn edge_set(g: &Graph) -> Vec<String> {
        let mut v: Vec<String> = g
            .edge_names()
            .into_iter()
            .map(|(a, b)| format!("{a}{b}"))
            .collect();
        v.sort();
        v
    }

    fn pl(src: &str) -> PairedLabeling {
        find_star_labeling(&parse_graph(src).unwrap()).unwrap()
    }

    #[test]
    fn single_operator_examples() {
        let p = pl(fixtures::UPPER_3);
        assert_eq!(o_operator(&p, 1).unwrap(), *p.graph());
        assert_eq!(
            edge_set(&o_operator(&p, 2).unwrap()),
            ["x1x2", "x1y1", "x1y3", "x2y2", "x2y3", "x3y3"]
        );
        assert_eq!(
            edge_set(&o_operator(&p, 3).unwrap()),
            ["x1x3", "x1y1", "x1y2", "x2x3", "x2y2", "x3y3"]
        );
        assert!(matches!(
            o_operator(&p, 0),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            o_operator(&p, 4),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn set_operator_examples() {
        let p = pl(fixtures::UPPER_3);
        assert_eq!(
            edge_set(&o_set(&p, &[2, 3]).unwrap()),
            ["x1x2", "x1x3", "x1y1", "x2x3", "x2y2", "x3y3"]
        );
        assert_eq!(o_set(&p, &[]).unwrap(), *p.graph());
        let c4 = pl(fixtures::C4);
        assert_eq!(
            edge_set(&o_set(&c4, &[1, 2]).unwrap()),
            ["x1x2", "x1y1", "x2y2"]
        );
    }

    #[test]
    fn restricted_examples() {
        let r = restricted_o_full(&pl(fixtures::UPPER_3));
        assert_eq!(r.names(), ["x1", "x2", "x3"]);
        assert_eq!(edge_set(&r), ["x1x2", "x1x3", "x2x3"]);
        let r = restricted_o_full(&pl("pairs 4\n"));
        assert_eq!((r.vertex_count(), r.edge_count()), (4, 0));
        assert_eq!(edge_set(&restricted_o_full(&pl(fixtures::C4))), ["x1x2"]);
    }

    #[test]
    fn triangle_graft_edges() {
        let (g, p) = fixtures::triangle_graft();
        assert_eq!(
            edge_set(&g),
            ["x1x2", "x1x3", "x1x4", "x1y1", "x2x4", "x2y2", "x2y3", "x3x4", "x3y3", "x4y4"]
        );
        assert_eq!(
            p.pairs(),
            [("x1", "y1"), ("x2", "y2"), ("x3", "y3"), ("x4", "y4")]
                .map(|(a, b)| (a.to_string(), b.to_string()))
        );
        assert!(g.is_independent(p.y_mask()));
        assert!(g.minimal_cover_masks().contains(&p.x_mask()));
    }

    #[test]
    fn graft_degenerate_cases() {
        let b = Block::from_text(fixtures::BLOCK_2).unwrap();
        let spec = BGraftSpec::new(Graph::edgeless(["1"]).unwrap(), vec![b.clone()]).unwrap();
        assert_eq!(b_graft(&spec).unwrap().0, b.graph);

        let spec = BGraftSpec::new(
            parse_graph("edge 1 2\n").unwrap(),
            vec![
                Block::from_text("edge x1 y1\n").unwrap(),
                Block::from_text("edge x2 y2\n").unwrap(),
            ],
        )
        .unwrap();
        let (g, _) = b_graft(&spec).unwrap();
        assert_eq!(edge_set(&g), ["x1x2", "x1y1", "x2y2"]);
    }

    #[test]
    fn graft_spec_errors() {
        assert!(matches!(
            Block::from_text("edge x1 x2\n"),
            Err(Error::GraftSpec(_))
        ));
        assert!(matches!(
            Block::from_text("xside a b\nyside c\nedge a c\nedge b c\n"),
            Err(Error::GraftSpec(_))
        ));
        assert!(matches!(
            Block::from_text("edge a b\n"),
            Err(Error::GraftSpec(_))
        ));
        assert!(matches!(
            Block::from_text(
                "xside x1 x2\nyside y1 y2\nedge x1 y1\nedge x2 y1\nedge x1 y2\nvertex q\n"
            ),
            Err(Error::GraftSpec(_))
        ));
        let b = Block::from_text(fixtures::BLOCK_1).unwrap();
        assert!(BGraftSpec::new(
            parse_graph("edge 1 2\n").unwrap(),
            vec![b.clone(), b.clone()]
        )
        .is_err());
        assert!(BGraftSpec::new(parse_graph("edge 1 2\n").unwrap(), vec![b]).is_err());
        // bipartite, no isolated vertex, but x1 and x2 only reach y1
        let deficient = Block::from_text(
            "xside x1 x2 x3\nyside y1 y2 y3\nedge x1 y1\nedge x2 y1\nedge x3 y1\nedge x3 y2\nedge x3 y3\n",
        )
        .unwrap();
        let spec = BGraftSpec::new(Graph::edgeless(["1"]).unwrap(), vec![deficient]).unwrap();
        assert!(matches!(b_graft(&spec), Err(Error::Structure { .. })));
    }

    fn arb_labeling() -> impl Strategy<Value = PairedLabeling> {
        (1usize..=4)
            .prop_flat_map(|n| {
                let extra = n * (n - 1) / 2 + n * (n - 1);
                (Just(n), proptest::collection::vec(any::<bool>(), extra))
            })
            .prop_map(|(n, bits)| crate::census::labeled_graph(n, &bits))
    }

    proptest! {
        #[test]
        fn composition_order_is_irrelevant(p in arb_labeling(), seed in any::<u64>()) {
            let n = p.n();
            let mut order: Vec<usize> = (1..=n).collect();
            let mut s = seed;
            for i in (1..order.len()).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                order.swap(i, (s >> 33) as usize % (i + 1));
            }
            let mut g = p.graph().clone();
            for &i in &order {
                g = o_operator(&p.with_graph(g).unwrap(), i).unwrap();
            }
            prop_assert_eq!(g, o_set(&p, &(1..=n).collect::<Vec<_>>()).unwrap());
        }

        #[test]
        fn operator_is_idempotent(p in arb_labeling(), i in 1usize..=4) {
            prop_assume!(i <= p.n());
            let once = o_operator(&p, i).unwrap();
            let twice = o_operator(&p.with_graph(once.clone()).unwrap(), i).unwrap();
            prop_assert_eq!(once, twice);
        }
    }
}
