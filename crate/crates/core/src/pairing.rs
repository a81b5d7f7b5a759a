//! Paired labelings `x_i ↔ y_i` where `X` is a minimal vertex cover and `Y`
//! a maximal independent set, relabeling into upper-triangular form, and
//! detection of the alternating cycles that obstruct Cohen-Macaulayness.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{bits, mask_lex_cmp, Graph, Mask};
use crate::verdict::{Certificate, Verdict};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairedLabeling {
    graph: Graph,
    /// Vertex index of `x_i`, 0-based pair index `i`.
    x: Vec<usize>,
    y: Vec<usize>,
}

/// Summary used in reports.
#[derive(Debug, Clone, Serialize)]
pub struct LabelingSummary {
    pub n: usize,
    pub pairs: Vec<(String, String)>,
}

impl PairedLabeling {
    /// Builds and validates a labeling from `(x_i, y_i)` name pairs.
    pub fn new<S: AsRef<str>>(
        graph: Graph,
        pairs: impl IntoIterator<Item = (S, S)>,
    ) -> Result<Self> {
        let mut x = Vec::new();
        let mut y = Vec::new();
        for (a, b) in pairs {
            x.push(graph.require(a.as_ref())?);
            y.push(graph.require(b.as_ref())?);
        }
        let pl = PairedLabeling { graph, x, y };
        pl.validate()?;
        Ok(pl)
    }

    pub(crate) fn from_indices_unchecked(graph: Graph, x: Vec<usize>, y: Vec<usize>) -> Self {
        PairedLabeling { graph, x, y }
    }

    /// Checks every labeling invariant: disjoint halves covering the
    /// vertex set, matching edges present, `X` a minimal cover and `Y` a
    /// maximal independent set.
    pub fn validate(&self) -> Result<()> {
        let g = &self.graph;
        let n = self.x.len();
        if n == 0 || self.y.len() != n {
            return Err(Error::Labeling("need n >= 1 pairs".into()));
        }
        let xm = self.x_mask();
        let ym = self.y_mask();
        if xm.count_ones() as usize != n || ym.count_ones() as usize != n {
            return Err(Error::Labeling("repeated vertex in pairs".into()));
        }
        if xm & ym != 0 || xm | ym != g.full_mask() {
            return Err(Error::Labeling(
                "X and Y must partition the vertex set".into(),
            ));
        }
        for i in 0..n {
            if !g.has_edge(self.x[i], self.y[i]) {
                return Err(Error::Labeling(format!(
                    "matching edge {} {} missing",
                    g.name(self.x[i]),
                    g.name(self.y[i])
                )));
            }
        }
        if !g.is_independent(ym) {
            return Err(Error::Labeling("Y is not independent".into()));
        }
        // X is a cover because Y is independent; it is minimal and Y is
        // maximal because every x_i has the neighbour y_i in Y.
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn x(&self, i: usize) -> usize {
        self.x[i]
    }

    pub fn y(&self, i: usize) -> usize {
        self.y[i]
    }

    pub fn x_mask(&self) -> Mask {
        self.x.iter().fold(0, |m, &v| m | 1 << v)
    }

    pub fn y_mask(&self) -> Mask {
        self.y.iter().fold(0, |m, &v| m | 1 << v)
    }

    pub fn x_name(&self, i: usize) -> &str {
        self.graph.name(self.x[i])
    }

    pub fn y_name(&self, i: usize) -> &str {
        self.graph.name(self.y[i])
    }

    pub fn pairs(&self) -> Vec<(String, String)> {
        (0..self.n())
            .map(|i| (self.x_name(i).to_string(), self.y_name(i).to_string()))
            .collect()
    }

    pub fn summary(&self) -> LabelingSummary {
        LabelingSummary {
            n: self.n(),
            pairs: self.pairs(),
        }
    }

    /// `x_i y_j ∈ E` for 0-based pair indices.
    pub fn xy(&self, i: usize, j: usize) -> bool {
        self.graph.has_edge(self.x[i], self.y[j])
    }

    pub fn xx(&self, i: usize, j: usize) -> bool {
        self.graph.has_edge(self.x[i], self.x[j])
    }

    /// The same pairing over another graph on the same vertex set.
    pub fn with_graph(&self, graph: Graph) -> Result<Self> {
        if graph.names() != self.graph.names() {
            return Err(Error::Labeling("vertex sets differ".into()));
        }
        let pl = PairedLabeling {
            graph,
            x: self.x.clone(),
            y: self.y.clone(),
        };
        pl.validate()?;
        Ok(pl)
    }

    /// Reorders pairs: new pair `k` is old pair `perm[k]` (0-based).
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n();
        let mut seen = vec![false; n];
        if perm.len() != n
            || perm
                .iter()
                .any(|&p| p >= n || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::Labeling(format!(
                "{perm:?} is not a permutation of 0..{n}"
            )));
        }
        Ok(PairedLabeling {
            graph: self.graph.clone(),
            x: perm.iter().map(|&p| self.x[p]).collect(),
            y: perm.iter().map(|&p| self.y[p]).collect(),
        })
    }

    /// True when `x_i y_j ∈ E` implies `i ≤ j`.
    pub fn is_upper_triangular(&self) -> bool {
        (0..self.n()).all(|i| (0..i).all(|j| !self.xy(i, j)))
    }

    /// Directed successor sets on pair indices: `i → j` iff `y_i x_j ∈ E`, `i ≠ j`.
    fn y_to_x_successors(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        (0..n)
            .map(|i| (0..n).filter(|&j| j != i && self.xy(j, i)).collect())
            .collect()
    }

    /// Shortest alternating cycle `C_{i1...ir}` with `2 ≤ r ≤ max_r`.
    ///
    /// Among the shortest, the one whose index sequence (rotated to start
    /// at its smallest index) is lexicographically least.
    pub fn find_cycle(&self, max_r: Option<usize>) -> Option<CycleWitness> {
        let n = self.n();
        let max_r = max_r.unwrap_or(n).min(n);
        let succ = self.y_to_x_successors();
        for r in 2..=max_r {
            for start in 0..n {
                let mut path = vec![start];
                if cycle_dfs(&succ, start, r, &mut path) {
                    return Some(CycleWitness { indices: path });
                }
            }
        }
        None
    }

    /// Decides whether the matching edges form the only perfect matching,
    /// by enumerating perfect matchings of the graph.
    pub fn unique_perfect_matching(&self) -> Verdict {
        let g = &self.graph;
        let ours: Vec<(usize, usize)> = {
            let mut m: Vec<_> = (0..self.n())
                .map(|i| (self.x[i].min(self.y[i]), self.x[i].max(self.y[i])))
                .collect();
            m.sort_unstable();
            m
        };
        let other = g
            .perfect_matching_indices(Some(2))
            .into_iter()
            .find(|m| *m != ours);
        match other {
            None => Verdict::decided("unique-perfect-matching", true, Certificate::None),
            Some(m) => {
                let cycle = self.cycle_from_matching(&m);
                let matching = m
                    .into_iter()
                    .map(|(a, b)| (g.name(a).to_string(), g.name(b).to_string()))
                    .collect();
                Verdict::decided(
                    "unique-perfect-matching",
                    false,
                    Certificate::SecondMatching {
                        matching,
                        cycle: cycle.map(|c| c.one_based()).unwrap_or_default(),
                    },
                )
            }
        }
    }

    /// Reads the permutation `σ` of a perfect matching `{x_k y_σ(k)}` and
    /// returns one of its non-trivial cycles as an alternating cycle.
    fn cycle_from_matching(&self, matching: &[(usize, usize)]) -> Option<CycleWitness> {
        let n = self.n();
        let pos_x: Vec<Option<usize>> = {
            let mut p = vec![None; self.graph.vertex_count()];
            for i in 0..n {
                p[self.x[i]] = Some(i);
            }
            p
        };
        let pos_y: Vec<Option<usize>> = {
            let mut p = vec![None; self.graph.vertex_count()];
            for i in 0..n {
                p[self.y[i]] = Some(i);
            }
            p
        };
        let mut sigma = vec![usize::MAX; n];
        for &(a, b) in matching {
            let (xi, yj) = match (pos_x[a], pos_y[b], pos_x[b], pos_y[a]) {
                (Some(i), Some(j), _, _) => (i, j),
                (_, _, Some(i), Some(j)) => (i, j),
                _ => return None,
            };
            sigma[xi] = yj;
        }
        let start = (0..n).find(|&k| sigma[k] != k && sigma[k] != usize::MAX)?;
        // σ-cycle (j1 j2 ... jr) with σ(j_k) = j_{k+1}; reversed, it is C_{jr ... j1}.
        let mut orbit = vec![start];
        let mut k = sigma[start];
        while k != start {
            orbit.push(k);
            k = sigma[k];
        }
        orbit.reverse();
        Some(CycleWitness::normalized(orbit))
    }

    /// Relabels pairs so that `x_i y_j ∈ E` implies `i ≤ j`.
    ///
    /// Uses the relation `x_i ⪯ x_j ⇔ x_i y_j ∈ E`; fails when it is not a
    /// partial order. Returns the relabeled labeling and the permutation
    /// (new pair `k` is old pair `perm[k]`, 0-based).
    pub fn relabel_for_double_star(&self) -> Result<(PairedLabeling, Vec<usize>)> {
        let n = self.n();
        for i in 0..n {
            for j in i + 1..n {
                if self.xy(i, j) && self.xy(j, i) {
                    return Err(Error::Precondition(format!(
                        "antisymmetry fails: {0}{1} and {2}{3} are both edges",
                        self.x_name(i),
                        self.y_name(j),
                        self.x_name(j),
                        self.y_name(i)
                    )));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if i != j
                        && j != k
                        && i != k
                        && self.xy(i, j)
                        && self.xy(j, k)
                        && !self.xy(i, k)
                    {
                        return Err(Error::Precondition(format!(
                            "transitivity fails: {}{} and {}{} are edges but {}{} is not",
                            self.x_name(i),
                            self.y_name(j),
                            self.x_name(j),
                            self.y_name(k),
                            self.x_name(i),
                            self.y_name(k)
                        )));
                    }
                }
            }
        }
        // Kahn's algorithm, always taking the smallest available index.
        let mut indegree: Vec<usize> = (0..n)
            .map(|j| (0..n).filter(|&i| i != j && self.xy(i, j)).count())
            .collect();
        let mut ready: BinaryHeap<Reverse<usize>> =
            (0..n).filter(|&j| indegree[j] == 0).map(Reverse).collect();
        let mut perm = Vec::with_capacity(n);
        while let Some(Reverse(i)) = ready.pop() {
            perm.push(i);
            for (j, d) in indegree.iter_mut().enumerate() {
                if j != i && self.xy(i, j) {
                    *d -= 1;
                    if *d == 0 {
                        ready.push(Reverse(j));
                    }
                }
            }
        }
        debug_assert_eq!(perm.len(), n, "a partial order has a linear extension");
        let relabeled = self.permuted(&perm)?;
        debug_assert!(relabeled.is_upper_triangular());
        Ok((relabeled, perm))
    }
}

fn cycle_dfs(succ: &[Vec<usize>], start: usize, r: usize, path: &mut Vec<usize>) -> bool {
    let last = *path.last().unwrap();
    if path.len() == r {
        return succ[last].contains(&start);
    }
    for &next in &succ[last] {
        // the start is the smallest index on the cycle
        if next > start && !path.contains(&next) {
            path.push(next);
            if cycle_dfs(succ, start, r, path) {
                return true;
            }
            path.pop();
        }
    }
    false
}

/// A cycle `C_{i1...ir}`, stored with 0-based pair indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleWitness {
    pub indices: Vec<usize>,
}

impl CycleWitness {
    fn normalized(mut indices: Vec<usize>) -> Self {
        if let Some(pos) = indices
            .iter()
            .enumerate()
            .min_by_key(|(_, &v)| v)
            .map(|(p, _)| p)
        {
            indices.rotate_left(pos);
        }
        CycleWitness { indices }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.indices.iter().map(|i| i + 1).collect()
    }

    /// `x_{i1} y_{i1} x_{i2} y_{i2} ...` as vertex names.
    pub fn vertices(&self, pl: &PairedLabeling) -> Vec<String> {
        self.indices
            .iter()
            .flat_map(|&i| [pl.x_name(i).to_string(), pl.y_name(i).to_string()])
            .collect()
    }

    /// Checks every edge of the cycle is present.
    pub fn is_present_in(&self, pl: &PairedLabeling) -> bool {
        let r = self.indices.len();
        let mut seen = 0u64;
        r >= 2
            && self.indices.iter().all(|&i| {
                let fresh = i < pl.n() && seen >> i & 1 == 0;
                seen |= 1 << (i % 64);
                fresh
            })
            && (0..r).all(|k| {
                let (i, j) = (self.indices[k], self.indices[(k + 1) % r]);
                pl.xy(i, i) && pl.xy(j, i)
            })
    }

    pub fn certificate(&self, pl: &PairedLabeling) -> Certificate {
        Certificate::Cycle {
            indices: self.one_based(),
            vertices: self.vertices(pl),
        }
    }
}

/// Finds a labeling satisfying `(*)`: the lexicographically first minimum
/// vertex cover admitting a perfect matching onto its complement, paired
/// by the lexicographically first such matching.
pub fn find_star_labeling(g: &Graph) -> Result<PairedLabeling> {
    let class = g.classify();
    if !class.in_class {
        return Err(Error::NotInClass {
            vertex_count: class.vertex_count,
            height: class.height,
            has_isolated: class.has_isolated,
        });
    }
    let n = class.height;
    let covers: Vec<Mask> = g
        .minimal_cover_masks()
        .into_iter()
        .filter(|c| c.count_ones() as usize == n)
        .collect();
    let mut first_failure = None;
    for cover in covers {
        let xs: Vec<usize> = bits(cover).collect();
        let free = g.full_mask() & !cover;
        let mut chosen = Vec::with_capacity(n);
        if lex_first_matching(g, &xs, free, &mut chosen) {
            return Ok(PairedLabeling {
                graph: g.clone(),
                x: xs,
                y: chosen,
            });
        }
        if first_failure.is_none() {
            first_failure = Some(Error::Structure {
                cover: g.names_of(cover),
                hall_set: g.names_of(hall_violator(g, &xs, free)),
            });
        }
    }
    Err(first_failure.expect("an in-class graph has a minimum cover"))
}

/// Every labeling satisfying `(*)`, up to pair order: one per minimum cover
/// and perfect matching onto the complement, pairs ordered by `x`.
pub fn all_star_labelings(g: &Graph) -> Vec<PairedLabeling> {
    let class = g.classify();
    if !class.in_class {
        return Vec::new();
    }
    let mut out = Vec::new();
    for cover in g.minimal_cover_masks() {
        if cover.count_ones() as usize != class.height {
            continue;
        }
        let xs: Vec<usize> = bits(cover).collect();
        let mut chosen = Vec::new();
        all_matchings(g, &xs, g.full_mask() & !cover, &mut chosen, &mut |ys| {
            out.push(PairedLabeling {
                graph: g.clone(),
                x: xs.clone(),
                y: ys.to_vec(),
            })
        });
    }
    out
}

pub(crate) fn lex_first_matching(
    g: &Graph,
    xs: &[usize],
    free: Mask,
    chosen: &mut Vec<usize>,
) -> bool {
    let k = chosen.len();
    if k == xs.len() {
        return true;
    }
    for y in bits(g.neighbors(xs[k]) & free) {
        chosen.push(y);
        if lex_first_matching(g, xs, free & !(1 << y), chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

fn all_matchings(
    g: &Graph,
    xs: &[usize],
    free: Mask,
    chosen: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[usize]),
) {
    let k = chosen.len();
    if k == xs.len() {
        emit(chosen);
        return;
    }
    for y in bits(g.neighbors(xs[k]) & free) {
        chosen.push(y);
        all_matchings(g, xs, free & !(1 << y), chosen, emit);
        chosen.pop();
    }
}

/// A subset `S` of `xs` with fewer neighbours in `ys` than members, from a
/// maximum matching and the alternating-path closure of an unmatched vertex.
pub(crate) fn hall_violator(g: &Graph, xs: &[usize], ys: Mask) -> Mask {
    let nv = g.vertex_count();
    let mut match_of_y = vec![usize::MAX; nv];
    let mut match_of_x = vec![usize::MAX; nv];
    for &x in xs {
        let mut visited = 0;
        augment(g, x, ys, &mut match_of_x, &mut match_of_y, &mut visited);
    }
    let Some(&root) = xs.iter().find(|&&x| match_of_x[x] == usize::MAX) else {
        return 0;
    };
    let mut reached_x: Mask = 1 << root;
    let mut reached_y: Mask = 0;
    let mut frontier = vec![root];
    while let Some(x) = frontier.pop() {
        for y in bits(g.neighbors(x) & ys & !reached_y) {
            reached_y |= 1 << y;
            let x2 = match_of_y[y];
            if x2 != usize::MAX && reached_x >> x2 & 1 == 0 {
                reached_x |= 1 << x2;
                frontier.push(x2);
            }
        }
    }
    reached_x
}

fn augment(
    g: &Graph,
    x: usize,
    ys: Mask,
    mx: &mut [usize],
    my: &mut [usize],
    visited: &mut Mask,
) -> bool {
    for y in bits(g.neighbors(x) & ys) {
        if *visited >> y & 1 == 1 {
            continue;
        }
        *visited |= 1 << y;
        if my[y] == usize::MAX || augment(g, my[y], ys, mx, my, visited) {
            my[y] = x;
            mx[x] = y;
            return true;
        }
    }
    false
}

/// Orders labelings by their pair names; used to pick canonical witnesses.
pub fn labeling_cmp(a: &PairedLabeling, b: &PairedLabeling) -> std::cmp::Ordering {
    mask_lex_cmp(a.x_mask(), b.x_mask()).then_with(|| a.y.cmp(&b.y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::text::parse_graph;

    fn pl_of(src: &str) -> PairedLabeling {
        find_star_labeling(&parse_graph(src).unwrap()).unwrap()
    }

    #[test]
    fn star_labeling_examples() {
        let pl = pl_of(fixtures::UPPER_3);
        assert_eq!(
            pl.pairs(),
            [("x1", "y1"), ("x2", "y2"), ("x3", "y3")].map(|(a, b)| (a.to_string(), b.to_string()))
        );
        let pl = pl_of("edge a b\n");
        assert_eq!(pl.pairs(), [("a".to_string(), "b".to_string())]);
        let pl = pl_of(fixtures::C4);
        assert_eq!(
            pl.pairs(),
            [("x1", "y1"), ("x2", "y2")].map(|(a, b)| (a.to_string(), b.to_string()))
        );
    }

    #[test]
    fn star_labeling_errors() {
        let path = parse_graph("edge a b\nedge b c\n").unwrap();
        assert!(matches!(
            find_star_labeling(&path),
            Err(Error::NotInClass { .. })
        ));
        // triangle plus a disjoint path: height 3 on 6 vertices, odd component
        let g = parse_graph("edge a b\nedge b c\nedge a c\nedge d e\nedge e f\n").unwrap();
        assert!(g.classify().in_class);
        match find_star_labeling(&g) {
            Err(Error::Structure { cover, hall_set }) => {
                assert_eq!(cover, ["a", "b", "e"]);
                let s = g.mask_of(&hall_set).unwrap();
                let ys = g.full_mask() & !g.mask_of(&cover).unwrap();
                let nbrs = bits(s).fold(0, |m, v| m | g.neighbors(v)) & ys;
                assert!(nbrs.count_ones() < s.count_ones());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn hall_set_is_deficient() {
        // K_{1,2} plus a pendant: x-side {c} cannot be matched twice
        let g = parse_graph("edge a c\nedge b c\n").unwrap();
        let xs = vec![g.index_of("a").unwrap(), g.index_of("b").unwrap()];
        let ys = 1 << g.index_of("c").unwrap();
        let s = hall_violator(&g, &xs, ys);
        assert_eq!(s.count_ones(), 2);
    }

    #[test]
    fn cycle_examples() {
        assert_eq!(pl_of(fixtures::UPPER_3).find_cycle(Some(3)), None);
        let c4 = pl_of(fixtures::C4);
        let c = c4.find_cycle(Some(2)).unwrap();
        assert_eq!(c.one_based(), [1, 2]);
        assert!(c.is_present_in(&c4));
        let tri = pl_of("pairs 3\nedge y1 x2\nedge y2 x3\nedge y3 x1\n");
        assert_eq!(tri.find_cycle(Some(2)), None);
        let c = tri.find_cycle(None).unwrap();
        assert_eq!(c.one_based(), [1, 2, 3]);
        assert_eq!(c.vertices(&tri), ["x1", "y1", "x2", "y2", "x3", "y3"]);
        assert!(c.is_present_in(&tri));
    }

    #[test]
    fn relabel_examples() {
        let pl = pl_of(fixtures::UPPER_3);
        let (r, perm) = pl.relabel_for_double_star().unwrap();
        assert_eq!(perm, [0, 1, 2]);
        assert_eq!(r, pl);

        let g = parse_graph(fixtures::UPPER_3).unwrap();
        let swapped = PairedLabeling::new(g, [("x3", "y3"), ("x2", "y2"), ("x1", "y1")]).unwrap();
        assert!(!swapped.is_upper_triangular());
        let (r, perm) = swapped.relabel_for_double_star().unwrap();
        assert_eq!(perm, [2, 1, 0]);
        assert_eq!(r, pl);

        let (_, perm) = pl_of("pairs 2\n").relabel_for_double_star().unwrap();
        assert_eq!(perm, [0, 1]);
    }

    #[test]
    fn relabel_rejects_non_orders() {
        assert!(
            matches!(pl_of(fixtures::C4).relabel_for_double_star(), Err(Error::Precondition(m)) if m.contains("antisymmetry"))
        );
        let pl = pl_of("pairs 3\nedge x1 y2\nedge x2 y3\n");
        assert!(
            matches!(pl.relabel_for_double_star(), Err(Error::Precondition(m)) if m.contains("transitivity"))
        );
    }

    #[test]
    fn unique_matching_examples() {
        assert!(pl_of(fixtures::UPPER_3).unique_perfect_matching().is_true());
        let v = pl_of(fixtures::C4).unique_perfect_matching();
        assert!(v.is_false());
        match v.certificate {
            Certificate::SecondMatching { matching, cycle } => {
                assert_eq!(
                    matching,
                    [("x1", "y2"), ("x2", "y1")].map(|(a, b)| (a.to_string(), b.to_string()))
                );
                assert_eq!(cycle, [1, 2]);
            }
            other => panic!("{other:?}"),
        }
        for n in 1..=5 {
            assert!(pl_of(&format!("pairs {n}\n"))
                .unique_perfect_matching()
                .is_true());
        }
    }

    #[test]
    fn labeling_validation() {
        let g = parse_graph(fixtures::C4).unwrap();
        assert!(PairedLabeling::new(g.clone(), [("x1", "y1"), ("y2", "x2")]).is_err());
        assert!(PairedLabeling::new(g.clone(), [("x1", "y1")]).is_err());
        assert!(PairedLabeling::new(g.clone(), [("x1", "y2"), ("x2", "y1")]).is_ok());
        let g = parse_graph("pairs 2\nedge y1 y2\n").unwrap();
        assert!(PairedLabeling::new(g, [("x1", "y1"), ("x2", "y2")]).is_err());
    }

    #[test]
    fn all_labelings_of_c4() {
        let g = parse_graph(fixtures::C4).unwrap();
        // two minimum covers, two matchings onto each complement
        assert_eq!(all_star_labelings(&g).len(), 4);
    }
}
