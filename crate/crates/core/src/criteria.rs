//! Decision procedures for unmixedness and Cohen-Macaulayness of in-class
//! graphs, each returning a checkable certificate.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complex::{
    complementary_complex, Field, DEFAULT_MAX_FACES, DEFAULT_MAX_SHELLING_FACETS,
};
use crate::error::{Error, Result};
use crate::graph::{bits, Graph, Mask};
use crate::pairing::{find_star_labeling, CycleWitness, PairedLabeling};
use crate::transform::o_set_mask;
use crate::verdict::{Certificate, Outcome, Verdict};

/// Scans the two structural conditions for unmixedness under `(*)`:
///
/// * (i) `z_i x_j, y_j x_k ∈ E ⇒ z_i x_k ∈ E` for distinct `i, j, k` and `z_i ∈ {x_i, y_i}`;
/// * (ii) `x_i y_j ∈ E ⇒ x_i x_j ∉ E`.
pub fn unmixed_structural(pl: &PairedLabeling) -> Verdict {
    structural_scan(pl, "structural")
}

fn structural_scan(pl: &PairedLabeling, route: &str) -> Verdict {
    let g = pl.graph();
    let n = pl.n();
    let name = |v: usize| g.name(v).to_string();
    for i in 0..n {
        for z in [pl.x(i), pl.y(i)] {
            for j in (0..n).filter(|&j| j != i) {
                if !g.has_edge(z, pl.x(j)) {
                    continue;
                }
                for k in (0..n).filter(|&k| k != i && k != j) {
                    if pl.xy(k, j) && !g.has_edge(z, pl.x(k)) {
                        return Verdict::decided(
                            route,
                            false,
                            Certificate::StructuralViolation {
                                condition: "i".into(),
                                present: vec![
                                    (name(z), name(pl.x(j))),
                                    (name(pl.y(j)), name(pl.x(k))),
                                ],
                                missing: Some((name(z), name(pl.x(k)))),
                            },
                        );
                    }
                }
            }
        }
    }
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            if pl.xy(i, j) && pl.xx(i, j) {
                return Verdict::decided(
                    route,
                    false,
                    Certificate::StructuralViolation {
                        condition: "ii".into(),
                        present: vec![
                            (name(pl.x(i)), name(pl.y(j))),
                            (name(pl.x(i)), name(pl.x(j))),
                        ],
                        missing: None,
                    },
                );
            }
        }
    }
    Verdict::decided(route, true, Certificate::None)
}

/// Unmixedness of any graph. In-class graphs with a `(*)` labeling are
/// decided structurally and by cover sizes, and the two must agree.
pub fn unmixed_verdict(g: &Graph) -> Result<Verdict> {
    let brute = g.is_unmixed_bruteforce();
    if !g.classify().in_class {
        return Ok(brute);
    }
    let Ok(pl) = find_star_labeling(g) else {
        return Ok(brute);
    };
    let structural = unmixed_structural(&pl);
    if structural.value != brute.value {
        return Err(disagreement(
            &pl,
            &[("structural", &structural), ("cover-sizes", &brute)],
        ));
    }
    Ok(structural)
}

/// A Cohen-Macaulayness criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Route {
    /// No alternating 4-cycle `C_ij`.
    NoCycle,
    /// `Δ(G)` strongly connected.
    StronglyConnected,
    /// `Δ(G)` shellable.
    Shellable,
    /// The matching edges are the unique perfect matching.
    UniqueMatching,
    /// `O_T(G)` unmixed for every `T`.
    TransformsUnmixed,
    /// Reisner's criterion over a field.
    Reisner,
}

impl Route {
    pub const ALL: [Route; 6] = [
        Route::NoCycle,
        Route::StronglyConnected,
        Route::Shellable,
        Route::UniqueMatching,
        Route::TransformsUnmixed,
        Route::Reisner,
    ];

    pub fn letter(self) -> char {
        match self {
            Route::NoCycle => 'a',
            Route::StronglyConnected => 'b',
            Route::Shellable => 'c',
            Route::UniqueMatching => 'd',
            Route::TransformsUnmixed => 'e',
            Route::Reisner => 'f',
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl Serialize for Route {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for Route {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Route::ALL
            .into_iter()
            .find(|r| s.len() == 1 && s.starts_with(r.letter()))
            .ok_or_else(|| Error::Input(format!("unknown route `{s}` (expected a-f)")))
    }
}

/// Parses `a,c,f` into routes.
pub fn parse_routes(s: &str) -> Result<Vec<Route>> {
    let mut routes: Vec<Route> = s
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(str::parse)
        .collect::<Result<_>>()?;
    routes.sort();
    routes.dedup();
    Ok(routes)
}

#[derive(Debug, Clone)]
pub struct CmOptions {
    pub field: Field,
    pub max_shelling_facets: usize,
    pub max_faces: usize,
    /// Largest `n` for which all `2^n` transforms are checked.
    pub exact_transform_limit: usize,
    /// Number of random subsets checked above that limit.
    pub transform_samples: usize,
    pub seed: u64,
}

impl Default for CmOptions {
    fn default() -> Self {
        CmOptions {
            field: Field::Prime(2),
            max_shelling_facets: DEFAULT_MAX_SHELLING_FACETS,
            max_faces: DEFAULT_MAX_FACES,
            exact_transform_limit: 12,
            transform_samples: 4096,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CmReport {
    /// The verdict of route (a).
    pub value: Outcome,
    pub routes: BTreeMap<Route, Verdict>,
}

/// Evaluates the requested routes (route (a) is always included) on an
/// unmixed labeled graph and checks that all decided routes agree.
pub fn cm_verdict(pl: &PairedLabeling, routes: &[Route], opts: &CmOptions) -> Result<CmReport> {
    if !pl.graph().is_unmixed_bruteforce().is_true() {
        return Err(Error::NotUnmixed);
    }
    let mut out = BTreeMap::new();
    out.insert(Route::NoCycle, route_no_cycle(pl));
    for &r in routes {
        if r != Route::NoCycle {
            out.insert(r, evaluate_route(pl, r, opts)?);
        }
    }
    let primary = out[&Route::NoCycle].value;
    let decided: Vec<(String, &Verdict)> = out
        .iter()
        .filter(|(_, v)| v.value != Outcome::Inconclusive)
        .map(|(r, v)| (r.to_string(), v))
        .collect();
    if decided.iter().any(|(_, v)| v.value != primary) {
        let named: Vec<(&str, &Verdict)> = decided.iter().map(|(r, v)| (r.as_str(), *v)).collect();
        return Err(disagreement(pl, &named));
    }
    Ok(CmReport {
        value: primary,
        routes: out,
    })
}

/// Shorthand: route (a) only, as a boolean.
pub fn is_cohen_macaulay(pl: &PairedLabeling) -> Result<bool> {
    let r = cm_verdict(pl, &[], &CmOptions::default())?;
    Ok(r.value == Outcome::True)
}

fn evaluate_route(pl: &PairedLabeling, route: Route, opts: &CmOptions) -> Result<Verdict> {
    let name = route.to_string();
    Ok(match route {
        Route::NoCycle => route_no_cycle(pl),
        Route::StronglyConnected => {
            let mut v = complementary_complex(pl.graph()).is_strongly_connected()?;
            v.route = name;
            v
        }
        Route::Shellable => {
            let c = complementary_complex(pl.graph());
            match c.find_shelling(opts.max_shelling_facets) {
                Ok(Some(order)) => {
                    if !c.is_shelling_order(&order) {
                        return Err(Error::RouteDisagreement(format!(
                            "shelling search returned an order the checker rejects: {:?}",
                            order.iter().map(|&f| c.names_of(f)).collect::<Vec<_>>()
                        )));
                    }
                    if !c.is_strongly_connected()?.is_true() {
                        return Err(disagreement(
                            pl,
                            &[("shellable", &Verdict::decided("c", true, Certificate::None))],
                        ));
                    }
                    let order = order.iter().map(|&f| c.names_of(f)).collect();
                    Verdict::decided(name, true, Certificate::Shelling { order })
                }
                Ok(None) => Verdict::decided(
                    name,
                    false,
                    Certificate::NoShelling {
                        facets: c.facet_masks().len(),
                    },
                ),
                Err(Error::Capacity {
                    what,
                    limit,
                    actual,
                }) => Verdict::inconclusive(
                    name,
                    Certificate::Capacity {
                        what: what.into(),
                        limit,
                        actual,
                    },
                ),
                Err(e) => return Err(e),
            }
        }
        Route::UniqueMatching => {
            let mut v = pl.unique_perfect_matching();
            v.route = name;
            v
        }
        Route::TransformsUnmixed => route_transforms(pl, opts),
        Route::Reisner => {
            match complementary_complex(pl.graph()).reisner_cm(opts.field, opts.max_faces) {
                Ok(mut v) => {
                    v.route = name;
                    v
                }
                Err(Error::Capacity {
                    what,
                    limit,
                    actual,
                }) => Verdict::inconclusive(
                    name,
                    Certificate::Capacity {
                        what: what.into(),
                        limit,
                        actual,
                    },
                ),
                Err(e) => return Err(e),
            }
        }
    })
}

fn route_no_cycle(pl: &PairedLabeling) -> Verdict {
    match pl.find_cycle(Some(2)) {
        Some(c) => Verdict::decided("a", false, c.certificate(pl)),
        None => Verdict::decided("a", true, Certificate::None),
    }
}

fn mixed_witness(g: &Graph) -> Option<(Mask, Mask)> {
    let covers = g.minimal_cover_masks();
    let first = *covers.first()?;
    covers
        .iter()
        .find(|c| c.count_ones() != first.count_ones())
        .map(|&c| (first, c))
}

fn route_transforms(pl: &PairedLabeling, opts: &CmOptions) -> Verdict {
    let n = pl.n();
    let check = |t: Mask| -> Option<Verdict> {
        let g = o_set_mask(pl, t);
        mixed_witness(&g).map(|(a, b)| {
            Verdict::decided(
                "e",
                false,
                Certificate::MixedTransform {
                    subset: bits(t).map(|i| i + 1).collect(),
                    covers: (g.names_of(a), g.names_of(b)),
                },
            )
        })
    };
    if n <= opts.exact_transform_limit {
        let total = 1u64 << n;
        for t in 0..total {
            if let Some(v) = check(t) {
                return v;
            }
        }
        return Verdict::decided(
            "e",
            true,
            Certificate::TransformsChecked {
                checked: total as usize,
                exhaustive: true,
            },
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let full = if n == 64 { !0 } else { (1u64 << n) - 1 };
    for _ in 0..opts.transform_samples {
        if let Some(v) = check(rng.gen::<u64>() & full) {
            return v;
        }
    }
    Verdict::inconclusive(
        "e",
        Certificate::TransformsChecked {
            checked: opts.transform_samples,
            exhaustive: false,
        },
    )
}

/// Under `x_i y_j ∈ E ⇒ i ≤ j`, the structural unmixedness conditions
/// decide Cohen-Macaulayness outright.
pub fn cm_structural_doublestar(pl: &PairedLabeling) -> Result<Verdict> {
    if !pl.is_upper_triangular() {
        return Err(Error::Precondition(
            "labeling has an edge x_i y_j with i > j; relabel first".into(),
        ));
    }
    Ok(structural_scan(pl, "double-star"))
}

/// Every minimal vertex cover takes exactly one vertex from each pair.
pub fn minimal_prime_shape(pl: &PairedLabeling) -> Verdict {
    let g = pl.graph();
    for cover in g.minimal_cover_masks() {
        for i in 0..pl.n() {
            let hits = (cover >> pl.x(i) & 1) + (cover >> pl.y(i) & 1);
            if hits != 1 {
                return Verdict::decided(
                    "cover-shape",
                    false,
                    Certificate::CoverShape {
                        cover: g.names_of(cover),
                        pair: i + 1,
                    },
                );
            }
        }
    }
    Verdict::decided("cover-shape", true, Certificate::None)
}

/// Edge-count bounds: `#E ≤ n²` for unmixed graphs and `#E ≤ n(n+1)/2`
/// for Cohen-Macaulay ones. Bounds that do not apply carry no slack.
pub fn generator_bounds(pl: &PairedLabeling) -> Verdict {
    let n = pl.n();
    let edges = pl.graph().edge_count();
    let unmixed = pl.graph().is_unmixed_bruteforce().is_true();
    let cm = unmixed && pl.find_cycle(Some(2)).is_none();
    let (ub, cb) = (n * n, n * (n + 1) / 2);
    let unmixed_slack = unmixed.then(|| ub as i64 - edges as i64);
    let cm_slack = cm.then(|| cb as i64 - edges as i64);
    let ok = unmixed_slack.is_none_or(|s| s >= 0) && cm_slack.is_none_or(|s| s >= 0);
    Verdict::decided(
        "generator-bounds",
        ok,
        Certificate::Bounds {
            edges,
            unmixed_bound: ub,
            cm_bound: cb,
            unmixed_slack,
            cm_slack,
        },
    )
}

pub fn degree_one_exists(pl: &PairedLabeling) -> Verdict {
    let g = pl.graph();
    match (0..g.vertex_count()).find(|&v| g.degree(v) == 1) {
        Some(v) => Verdict::decided(
            "degree-one",
            true,
            Certificate::Vertex {
                name: g.name(v).to_string(),
            },
        ),
        None => Verdict::decided(
            "degree-one",
            false,
            Certificate::Degrees {
                min_degree: (0..g.vertex_count())
                    .map(|v| g.degree(v))
                    .min()
                    .unwrap_or(0),
            },
        ),
    }
}

/// Independently re-checks the certificate of a `false` verdict.
/// Certificates without a polynomial check (`NoShelling`) are accepted.
pub fn validate_false_certificate(pl: &PairedLabeling, v: &Verdict) -> bool {
    let g = pl.graph();
    let has = |(a, b): &(String, String)| match (g.index_of(a), g.index_of(b)) {
        (Some(i), Some(j)) => g.has_edge(i, j),
        _ => false,
    };
    match &v.certificate {
        Certificate::Cycle { indices, .. } => {
            let w = CycleWitness {
                indices: indices.iter().map(|i| i - 1).collect(),
            };
            w.is_present_in(pl)
        }
        Certificate::StructuralViolation {
            present, missing, ..
        } => present.iter().all(has) && missing.as_ref().is_none_or(|m| !has(m)),
        Certificate::SecondMatching { matching, .. } => {
            let mut covered: Mask = 0;
            let ok = matching.iter().all(|e| {
                let (a, b) = (g.index_of(&e.0), g.index_of(&e.1));
                match (a, b) {
                    (Some(a), Some(b)) if g.has_edge(a, b) && covered & (1 << a | 1 << b) == 0 => {
                        covered |= 1 << a | 1 << b;
                        true
                    }
                    _ => false,
                }
            });
            let ours: Vec<(String, String)> = pl.pairs();
            let differs = matching
                .iter()
                .any(|e| !ours.contains(e) && !ours.contains(&(e.1.clone(), e.0.clone())));
            ok && covered == g.full_mask() && differs
        }
        Certificate::MixedTransform { subset, covers } => {
            let t = subset.iter().fold(0u64, |m, &i| m | 1 << (i - 1));
            let h = o_set_mask(pl, t);
            let mins = h.minimal_cover_masks();
            match (h.mask_of(&covers.0), h.mask_of(&covers.1)) {
                (Ok(a), Ok(b)) => {
                    mins.contains(&a) && mins.contains(&b) && a.count_ones() != b.count_ones()
                }
                _ => false,
            }
        }
        Certificate::FacetComponents { components } => {
            let c = complementary_complex(g);
            let size = c.facet_masks().first().map_or(0, |f| f.count_ones());
            let masks: Vec<Vec<Mask>> = components
                .iter()
                .map(|comp| comp.iter().filter_map(|f| g.mask_of(f).ok()).collect())
                .collect();
            let total: usize = masks.iter().map(Vec::len).sum();
            components.len() >= 2
                && total == c.facet_masks().len()
                && masks.iter().flatten().all(|f| c.facet_masks().contains(f))
                && masks.iter().enumerate().all(|(i, a)| {
                    masks.iter().skip(i + 1).all(|b| {
                        a.iter()
                            .all(|&f| b.iter().all(|&h| (f & h).count_ones() + 1 != size))
                    })
                })
        }
        Certificate::Homology(profile) => {
            let c = complementary_complex(g);
            let Ok(face) = g.mask_of(&profile.face) else {
                return false;
            };
            let link = c.link(face);
            link.reduced_homology_ranks(profile.field, usize::MAX)
                .is_ok_and(|b| {
                    b == profile.reduced_betti && b[..b.len() - 1].iter().any(|&x| x != 0)
                })
        }
        Certificate::CoverSizes {
            witness: Some((a, b)),
            ..
        } => {
            let mins = g.minimal_cover_masks();
            match (g.mask_of(a), g.mask_of(b)) {
                (Ok(a), Ok(b)) => {
                    mins.contains(&a) && mins.contains(&b) && a.count_ones() != b.count_ones()
                }
                _ => false,
            }
        }
        Certificate::CoverShape { cover, pair } => g.mask_of(cover).is_ok_and(|c| {
            g.minimal_cover_masks().contains(&c)
                && (c >> pl.x(pair - 1) & 1) + (c >> pl.y(pair - 1) & 1) != 1
        }),
        Certificate::NoShelling { .. } => true,
        _ => false,
    }
}

fn disagreement(pl: &PairedLabeling, verdicts: &[(&str, &Verdict)]) -> Error {
    let dump = serde_json::json!({
        "graph": pl.graph().to_text(),
        "labeling": pl.pairs(),
        "verdicts": verdicts.iter().map(|(r, v)| (r.to_string(), serde_json::to_value(v).unwrap())).collect::<BTreeMap<_, _>>(),
    });
    Error::RouteDisagreement(dump.to_string())
}
