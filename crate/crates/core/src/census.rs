//! Exhaustive and sampled cross-validation over labeled in-class graphs.
//!
//! Every graph on `x1..xn, y1..yn` that contains the matching edges and
//! keeps `Y` independent is in the class with `(*)` holding for the
//! identity pairing. The census enumerates (or samples) them and checks
//! every equivalence the decision procedures rely on.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::complex::{complementary_complex, Field};
use crate::criteria::{
    cm_structural_doublestar, cm_verdict, degree_one_exists, generator_bounds, minimal_prime_shape,
    unmixed_structural, validate_false_certificate, CmOptions, Route,
};
use crate::error::{Error, Result};
use crate::graph::{Graph, Mask};
use crate::invariants::{cm_type, socle_generators};
use crate::pairing::{all_star_labelings, find_star_labeling, PairedLabeling};
use crate::transform::{o_set_mask, restricted_o_full};
use crate::verdict::Outcome;

/// Largest `n` accepted in exhaustive mode.
pub const MAX_EXHAUSTIVE_N: usize = 4;

/// Optional edges in enumeration order: `x_i x_j` (`i < j`), then `x_i y_j` (`i ≠ j`).
/// Indices are into the vertex order `x1..xn, y1..yn`.
fn optional_edges(n: usize) -> Vec<(usize, usize)> {
    let mut e = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            e.push((i, j));
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i != j {
                e.push((i, n + j));
            }
        }
    }
    e
}

pub fn optional_edge_count(n: usize) -> usize {
    n * (n - 1) / 2 + n * (n - 1)
}

/// The labeled graph with the optional edges selected by `chosen`.
pub fn labeled_graph(n: usize, chosen: &[bool]) -> PairedLabeling {
    let names: Vec<String> = (1..=n)
        .map(|i| format!("x{i}"))
        .chain((1..=n).map(|i| format!("y{i}")))
        .collect();
    let mut adj: Vec<Mask> = vec![0; 2 * n];
    for i in 0..n {
        adj[i] |= 1 << (n + i);
        adj[n + i] |= 1 << i;
    }
    for (&(a, b), _) in optional_edges(n).iter().zip(chosen).filter(|(_, &c)| c) {
        adj[a] |= 1 << b;
        adj[b] |= 1 << a;
    }
    PairedLabeling::from_indices_unchecked(
        Graph::from_parts(names, adj),
        (0..n).collect(),
        (n..2 * n).collect(),
    )
}

/// Every labeled in-class graph with `n` pairs, in order of the bitmask
/// over optional edges.
pub fn enumerate_class(n: usize) -> Result<impl Iterator<Item = PairedLabeling>> {
    if n == 0 || n > MAX_EXHAUSTIVE_N {
        return Err(Error::Capacity {
            what: "pairs for exhaustive enumeration",
            limit: MAX_EXHAUSTIVE_N,
            actual: n,
        });
    }
    let k = optional_edge_count(n);
    Ok((0u64..1 << k).map(move |m| {
        let chosen: Vec<bool> = (0..k).map(|b| m >> b & 1 == 1).collect();
        labeled_graph(n, &chosen)
    }))
}

/// `count` graphs, each optional edge present independently with
/// probability 1/2.
pub fn sample_class(n: usize, count: usize, seed: u64) -> Result<Vec<PairedLabeling>> {
    if n == 0 || 2 * n > crate::graph::MAX_VERTICES {
        return Err(Error::Capacity {
            what: "pairs for sampling",
            limit: crate::graph::MAX_VERTICES / 2,
            actual: n,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = optional_edge_count(n);
    Ok((0..count)
        .map(|_| {
            let chosen: Vec<bool> = (0..k).map(|_| rng.gen_bool(0.5)).collect();
            labeled_graph(n, &chosen)
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum Mode {
    Exhaustive,
    Sample { count: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub index: usize,
    pub check: String,
    pub detail: String,
    pub graph: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub n: usize,
    #[serde(flatten)]
    pub mode: Mode,
    pub population: usize,
    pub unmixed_count: usize,
    pub cm_count: usize,
    pub level_count: usize,
    pub type_histogram: BTreeMap<usize, usize>,
    /// How many graphs each named check was applied to.
    pub checks: BTreeMap<String, usize>,
    pub violations: Vec<Violation>,
    /// Wall time; the only field that varies between identical runs.
    pub runtime_ms: u128,
}

impl CensusReport {
    /// CSV of the type histogram.
    pub fn type_histogram_csv(&self) -> String {
        let mut s = String::from("type,count\n");
        for (t, c) in &self.type_histogram {
            s.push_str(&format!("{t},{c}\n"));
        }
        s
    }
}

#[derive(Default)]
struct GraphResult {
    unmixed: bool,
    cm: bool,
    level: bool,
    cm_type: Option<usize>,
    checks: Vec<&'static str>,
    violations: Vec<(&'static str, String)>,
}

impl GraphResult {
    fn check(&mut self, name: &'static str, ok: bool, detail: impl FnOnce() -> String) {
        self.checks.push(name);
        if !ok {
            self.violations.push((name, detail()));
        }
    }
}

/// Settings for the per-graph checks.
#[derive(Debug, Clone)]
pub struct CensusOptions {
    /// Fields for the homology oracle; the first is used inside the route comparison.
    pub fields: Vec<Field>,
    /// Compare invariants across every valid pairing of the graph.
    pub label_invariance: bool,
    /// Check every `O_T` keeps the graph in class with the same pairing.
    pub transform_closure: bool,
}

impl CensusOptions {
    pub fn for_n(n: usize) -> Self {
        CensusOptions {
            fields: vec![Field::Prime(2), Field::Rationals],
            label_invariance: n <= 3,
            transform_closure: n <= 3,
        }
    }
}

/// Runs every check over the census population.
pub fn cross_validate(n: usize, mode: Mode) -> Result<CensusReport> {
    cross_validate_with(n, mode, &CensusOptions::for_n(n))
}

pub fn cross_validate_with(n: usize, mode: Mode, opts: &CensusOptions) -> Result<CensusReport> {
    let start = Instant::now();
    let population: Vec<PairedLabeling> = match mode {
        Mode::Exhaustive => enumerate_class(n)?.collect(),
        Mode::Sample { count, seed } => sample_class(n, count, seed)?,
    };
    let results: Vec<GraphResult> = population
        .par_iter()
        .map(|pl| check_graph(pl, opts))
        .collect();

    let mut report = CensusReport {
        n,
        mode,
        population: population.len(),
        unmixed_count: 0,
        cm_count: 0,
        level_count: 0,
        type_histogram: BTreeMap::new(),
        checks: BTreeMap::new(),
        violations: Vec::new(),
        runtime_ms: 0,
    };
    for (index, (pl, r)) in population.iter().zip(results).enumerate() {
        report.unmixed_count += r.unmixed as usize;
        report.cm_count += r.cm as usize;
        report.level_count += r.level as usize;
        if let Some(t) = r.cm_type {
            *report.type_histogram.entry(t).or_default() += 1;
        }
        for c in r.checks {
            *report.checks.entry(c.to_string()).or_default() += 1;
        }
        for (check, detail) in r.violations {
            report.violations.push(Violation {
                index,
                check: check.to_string(),
                detail,
                graph: pl.graph().to_text(),
            });
        }
    }
    report.runtime_ms = start.elapsed().as_millis();
    Ok(report)
}

/// Applies every applicable check to one labeled graph.
fn check_graph(pl: &PairedLabeling, opts: &CensusOptions) -> GraphResult {
    let mut r = GraphResult::default();
    let g = pl.graph();
    let n = pl.n();

    r.check("labeling-valid", pl.validate().is_ok(), || {
        "identity pairing fails (*)".into()
    });
    r.check("in-class", g.classify().in_class, || {
        format!("{:?}", g.classify())
    });

    let brute = g.is_unmixed_bruteforce();
    let structural = unmixed_structural(pl);
    r.unmixed = brute.is_true();
    r.check(
        "structural-unmixedness",
        structural.value == brute.value,
        || {
            format!(
                "structural {:?} vs cover sizes {:?}",
                structural.value, brute.value
            )
        },
    );
    for v in [&brute, &structural] {
        if v.is_false() {
            r.check(
                "false-certificate",
                validate_false_certificate(pl, v),
                || format!("{v:?}"),
            );
        }
    }

    let primary_field = opts.fields.first().copied().unwrap_or_default();
    let complex = complementary_complex(g);
    let reisner: Vec<(Field, Option<bool>)> = opts
        .fields
        .iter()
        .map(|&f| {
            (
                f,
                complex.reisner_cm(f, usize::MAX).ok().map(|v| v.is_true()),
            )
        })
        .collect();

    if opts.transform_closure {
        let ok = (0u64..1 << n).all(|t| {
            let h = o_set_mask(pl, t);
            h.classify().in_class && pl.with_graph(h).is_ok()
        });
        r.check("transforms-stay-in-class", ok, || {
            "some O_T leaves the class or breaks (*)".into()
        });
    }

    let upper = pl.is_upper_triangular();

    if !r.unmixed {
        for (f, cm) in &reisner {
            r.check("cm-implies-unmixed", *cm == Some(false), || {
                format!("homology CM over {f} on a mixed graph")
            });
        }
        if upper {
            let v = cm_structural_doublestar(pl);
            r.check(
                "upper-triangular-criterion",
                v.as_ref().is_ok_and(|v| v.is_false()),
                || format!("{v:?}"),
            );
        }
        return r;
    }

    r.check(
        "perfect-matching-exists",
        !g.perfect_matching_indices(Some(1)).is_empty(),
        || "unmixed in-class graph without a perfect matching".into(),
    );
    r.check("star-labeling-found", find_star_labeling(g).is_ok(), || {
        "no (*) labeling".into()
    });
    let shape = minimal_prime_shape(pl);
    r.check("cover-shape", shape.is_true(), || {
        format!("{:?}", shape.certificate)
    });

    let copts = CmOptions {
        field: primary_field,
        max_faces: usize::MAX,
        ..CmOptions::default()
    };
    let report = match cm_verdict(pl, &Route::ALL, &copts) {
        Ok(rep) => {
            r.checks.push("cm-routes-agree");
            rep
        }
        Err(e) => {
            r.check("cm-routes-agree", false, || e.to_string());
            return r;
        }
    };
    r.check(
        "cm-routes-decided",
        report
            .routes
            .values()
            .all(|v| v.value != Outcome::Inconclusive),
        || "a route was inconclusive".into(),
    );
    for v in report.routes.values().filter(|v| v.is_false()) {
        r.check(
            "false-certificate",
            validate_false_certificate(pl, v),
            || format!("{v:?}"),
        );
    }
    r.cm = report.value == Outcome::True;

    let cm = r.cm;
    for (f, h) in &reisner {
        r.check("homology-oracle-agrees", *h == Some(cm), || {
            format!("homology over {f} says {h:?}, cycle route says {cm}")
        });
    }

    let short = pl.find_cycle(Some(2)).is_none();
    let any = pl.find_cycle(None).is_none();
    let unique = pl.unique_perfect_matching().is_true();
    r.check(
        "cycle-length-two-suffices",
        short == any && any == unique,
        || format!("no 2-cycle {short}, no cycle {any}, unique matching {unique}"),
    );

    let bounds = generator_bounds(pl);
    r.check("edge-bounds", bounds.is_true(), || {
        format!("{:?}", bounds.certificate)
    });

    if upper {
        let v = cm_structural_doublestar(pl);
        r.check(
            "upper-triangular-criterion",
            v.as_ref().is_ok_and(|v| v.is_true() == r.cm),
            || format!("{v:?}"),
        );
    }

    if !r.cm {
        return r;
    }

    r.check("degree-one-vertex", degree_one_exists(pl).is_true(), || {
        "no degree-1 vertex".into()
    });

    match pl.relabel_for_double_star() {
        Ok((relabeled, perm)) => {
            let v = cm_structural_doublestar(&relabeled);
            let same_edges = relabeled.graph() == g && relabeled.validate().is_ok();
            r.check(
                "relabel-upper-triangular",
                relabeled.is_upper_triangular()
                    && same_edges
                    && v.as_ref().is_ok_and(|v| v.is_true()),
                || format!("perm {perm:?}: {v:?}"),
            );
        }
        Err(e) => r.check("relabel-upper-triangular", false, || e.to_string()),
    }

    let (t, socle) = match (cm_type(pl), socle_generators(pl)) {
        (Ok(t), Ok(s)) => (t, s),
        (a, b) => {
            r.check("cm-type", false, || format!("{a:?} {b:?}"));
            return r;
        }
    };
    r.cm_type = Some(t);
    r.check("socle-count-is-type", socle.len() == t, || {
        format!("type {t}, {} generators", socle.len())
    });
    let only_matching = g.edge_count() == n;
    r.check(
        "type-one-iff-complete-intersection",
        (t == 1) == only_matching,
        || format!("type {t}, {} edges", g.edge_count()),
    );
    let restricted = restricted_o_full(pl);
    r.level = restricted.is_unmixed_bruteforce().is_true();

    if opts.label_invariance {
        let labelings = all_star_labelings(g);
        let ok = !labelings.is_empty()
            && labelings.iter().all(|other| {
                cm_type(other).is_ok_and(|t2| t2 == t)
                    && restricted_o_full(other).is_unmixed_bruteforce().is_true() == r.level
            });
        r.check("labeling-invariance", ok, || {
            format!("{} labelings disagree on type {t}", labelings.len())
        });
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn populations() {
        assert_eq!(enumerate_class(1).unwrap().count(), 1);
        assert_eq!(enumerate_class(2).unwrap().count(), 8);
        assert_eq!(enumerate_class(3).unwrap().count(), 512);
        assert!(matches!(enumerate_class(5), Err(Error::Capacity { .. })));
        for pl in enumerate_class(2).unwrap() {
            pl.validate().unwrap();
            assert!(pl.graph().classify().in_class);
        }
    }

    #[test]
    fn n2_exhaustive_is_clean() {
        let r = cross_validate(2, Mode::Exhaustive).unwrap();
        assert_eq!(r.violations, []);
        assert!(r.cm_count <= r.unmixed_count && r.unmixed_count <= r.population);
    }

    #[test]
    fn sampling_is_deterministic() {
        let mode = Mode::Sample {
            count: 200,
            seed: 7,
        };
        let mut a = cross_validate(3, mode).unwrap();
        let mut b = cross_validate(3, mode).unwrap();
        a.runtime_ms = 0;
        b.runtime_ms = 0;
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        assert_eq!(a.population, 200);
    }

    #[test]
    fn histogram_csv() {
        let r = cross_validate(2, Mode::Exhaustive).unwrap();
        let csv = r.type_histogram_csv();
        assert!(csv.starts_with("type,count\n"));
        assert_eq!(csv.lines().count(), r.type_histogram.len() + 1);
    }
}
