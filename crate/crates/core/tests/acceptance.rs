//! Acceptance criteria. Runs without the libtest harness so that every
//! criterion prints one PASS/FAIL line in the test log.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use edge_cm::census::{cross_validate, CensusReport, Mode};
use edge_cm::complex::{complementary_complex, Field, HomologyProfile};
use edge_cm::fixtures;
use edge_cm::graph::Graph;
use edge_cm::invariants::{cm_type, is_gorenstein, is_level, socle_generators};
use edge_cm::pairing::find_star_labeling;
use edge_cm::text::parse_graph;
use edge_cm::transform::restricted_o_full;
use edge_cm::{Certificate, PairedLabeling};

const FIGURE_LIMIT: Duration = Duration::from_secs(1);
const EXHAUSTIVE_LIMIT: Duration = Duration::from_secs(120);
const SAMPLE_LIMIT: Duration = Duration::from_secs(600);
const SAMPLE_N: usize = 4;
const SAMPLE_COUNT: usize = 10_000;
const SAMPLE_SEED: u64 = 42;
/// Population of the exhaustive census, pinned after brute-force runs.
const POPULATION: [(usize, usize); 3] = [(1, 1), (2, 8), (3, 512)];

type Outcome = Result<String, String>;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fixture(name: &str) -> String {
    root()
        .join("fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn run_cli(args: &[&str]) -> Result<(String, Duration), String> {
    let start = Instant::now();
    let o = Command::new(env!("CARGO_BIN_EXE_edgecm"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(o.status.success(), || {
        format!(
            "exit {:?}: {}",
            o.status.code(),
            String::from_utf8_lossy(&o.stderr)
        )
    })?;
    Ok((
        String::from_utf8(o.stdout).map_err(|e| e.to_string())?,
        elapsed,
    ))
}

fn edge_set(g: &Graph) -> BTreeSet<(String, String)> {
    g.edge_names().into_iter().collect()
}

fn named_edges(list: &[(&str, &str)]) -> BTreeSet<(String, String)> {
    list.iter()
        .map(|&(a, b)| {
            if a < b {
                (a.into(), b.into())
            } else {
                (b.into(), a.into())
            }
        })
        .collect()
}

fn figure(args: &[&str], golden: &str, expected: &[(&str, &str)]) -> Outcome {
    let (out, elapsed) = run_cli(args)?;
    let golden_text = std::fs::read_to_string(fixture(golden)).map_err(|e| e.to_string())?;
    ensure(out == golden_text, || {
        format!("output differs from {golden}:\n{out}")
    })?;
    let g = parse_graph(&out).map_err(|e| e.to_string())?;
    let want = named_edges(expected);
    ensure(edge_set(&g) == want, || {
        format!("edges {:?}, expected {want:?}", edge_set(&g))
    })?;
    ensure(elapsed < FIGURE_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} edges, byte-identical to {golden}, {elapsed:?}",
        want.len()
    ))
}

fn criterion_1() -> Outcome {
    figure(
        &["transform", "--set", "2,3", &fixture("example3_1.graph")],
        "golden/example3_1_T23.graph",
        &[
            ("x1", "y1"),
            ("x1", "x2"),
            ("x1", "x3"),
            ("x2", "y2"),
            ("x2", "x3"),
            ("x3", "y3"),
        ],
    )
}

fn criterion_2() -> Outcome {
    let (b1, b2, b3) = (
        fixture("example5_1_b1.graph"),
        fixture("example5_1_b2.graph"),
        fixture("example5_1_b3.graph"),
    );
    figure(
        &[
            "graft",
            "--h0",
            &fixture("example5_1_h0.graph"),
            "--block",
            &b1,
            "--block",
            &b2,
            "--block",
            &b3,
        ],
        "golden/example5_1.graph",
        &[
            ("x1", "y1"),
            ("x2", "y2"),
            ("x2", "y3"),
            ("x3", "y3"),
            ("x4", "y4"),
            ("x1", "x2"),
            ("x1", "x3"),
            ("x1", "x4"),
            ("x2", "x4"),
            ("x3", "x4"),
        ],
    )
}

struct Censuses {
    exhaustive: Vec<(CensusReport, Duration)>,
    sample: (CensusReport, Duration),
}

fn run_censuses() -> Result<Censuses, String> {
    let mut exhaustive = Vec::new();
    for n in 1..=3 {
        let start = Instant::now();
        let r = cross_validate(n, Mode::Exhaustive).map_err(|e| e.to_string())?;
        exhaustive.push((r, start.elapsed()));
    }
    let start = Instant::now();
    let r = cross_validate(
        SAMPLE_N,
        Mode::Sample {
            count: SAMPLE_COUNT,
            seed: SAMPLE_SEED,
        },
    )
    .map_err(|e| e.to_string())?;
    Ok(Censuses {
        exhaustive,
        sample: (r, start.elapsed()),
    })
}

fn no_violations(r: &CensusReport, only: Option<&[&str]>) -> Result<(), String> {
    let bad: Vec<_> = r
        .violations
        .iter()
        .filter(|v| only.is_none_or(|names| names.contains(&v.check.as_str())))
        .collect();
    ensure(bad.is_empty(), || {
        format!(
            "n = {}: {} violations, first: {:?}",
            r.n,
            bad.len(),
            bad.first()
        )
    })
}

fn applied(r: &CensusReport, check: &str) -> usize {
    r.checks.get(check).copied().unwrap_or(0)
}

fn criterion_3(c: &Censuses) -> Outcome {
    let mut notes = Vec::new();
    for (r, elapsed) in &c.exhaustive {
        let expected = POPULATION.iter().find(|p| p.0 == r.n).map(|p| p.1);
        ensure(Some(r.population) == expected, || {
            format!("n = {}: population {}", r.n, r.population)
        })?;
        no_violations(r, None)?;
        ensure(applied(r, "cm-routes-agree") == r.unmixed_count, || {
            format!("n = {}: routes not run on every unmixed graph", r.n)
        })?;
        ensure(applied(r, "cm-routes-decided") == r.unmixed_count, || {
            format!("n = {}: undecided routes", r.n)
        })?;
        ensure(
            r.cm_count <= r.unmixed_count && r.unmixed_count <= r.population,
            || "count order".into(),
        )?;
        notes.push(format!(
            "n={} {} graphs/{} unmixed/{} CM in {elapsed:?}",
            r.n, r.population, r.unmixed_count, r.cm_count
        ));
    }
    let total: Duration = c
        .exhaustive
        .iter()
        .filter(|(r, _)| r.n >= 2)
        .map(|(_, d)| *d)
        .sum();
    ensure(total < EXHAUSTIVE_LIMIT, || {
        format!("exhaustive census took {total:?}")
    })?;
    let n3 = &c.exhaustive[2].0;
    ensure(n3.type_histogram.contains_key(&3), || {
        "type 3 missing at n = 3".into()
    })?;

    let (s, elapsed) = &c.sample;
    no_violations(s, None)?;
    ensure(s.population == SAMPLE_COUNT, || {
        format!("sample population {}", s.population)
    })?;
    ensure(applied(s, "cm-routes-agree") == s.unmixed_count, || {
        "routes not run on every sampled unmixed graph".into()
    })?;
    ensure(*elapsed < SAMPLE_LIMIT, || {
        format!("sample took {elapsed:?}")
    })?;
    notes.push(format!(
        "n={SAMPLE_N} sample seed {SAMPLE_SEED}: {} graphs/{} unmixed/{} CM in {elapsed:?}",
        s.population, s.unmixed_count, s.cm_count
    ));
    Ok(notes.join("; "))
}

fn criterion_4(c: &Censuses) -> Outcome {
    let mut compared = 0;
    for r in c.exhaustive.iter().map(|p| &p.0).chain([&c.sample.0]) {
        no_violations(r, Some(&["structural-unmixedness"]))?;
        ensure(applied(r, "structural-unmixedness") == r.population, || {
            format!("n = {}: not every graph compared", r.n)
        })?;
        compared += r.population;
    }
    Ok(format!("structural = cover sizes on {compared} graphs"))
}

fn criterion_5(c: &Censuses) -> Outcome {
    let mut cm = 0;
    for (r, _) in &c.exhaustive {
        no_violations(
            r,
            Some(&[
                "degree-one-vertex",
                "cover-shape",
                "edge-bounds",
                "perfect-matching-exists",
            ]),
        )?;
        ensure(applied(r, "degree-one-vertex") == r.cm_count, || {
            format!("n = {}: degree check skipped", r.n)
        })?;
        ensure(applied(r, "cover-shape") == r.unmixed_count, || {
            format!("n = {}: cover check skipped", r.n)
        })?;
        ensure(applied(r, "edge-bounds") == r.unmixed_count, || {
            format!("n = {}: bounds skipped", r.n)
        })?;
        cm += r.cm_count;
    }
    Ok(format!(
        "degree-1 vertex, one-per-pair covers and edge bounds on all {cm} CM graphs (n <= 3)"
    ))
}

/// Minimal covers of a graph by trying every vertex subset.
fn brute_minimal_covers(g: &Graph) -> Vec<u64> {
    let n = g.vertex_count();
    let covers: Vec<u64> = (0u64..1 << n).filter(|&m| g.is_vertex_cover(m)).collect();
    covers
        .iter()
        .copied()
        .filter(|&c| !covers.iter().any(|&d| d != c && d & c == d))
        .collect()
}

fn labeling(src: &str) -> Result<PairedLabeling, String> {
    find_star_labeling(&parse_graph(src).map_err(|e| e.to_string())?).map_err(|e| e.to_string())
}

fn criterion_6() -> Outcome {
    let err = |e: edge_cm::Error| e.to_string();
    let ex = labeling(fixtures::UPPER_3)?;
    let h = restricted_o_full(&ex);
    let brute = brute_minimal_covers(&h);
    ensure(cm_type(&ex).map_err(err)? == 3 && brute.len() == 3, || {
        format!("type {:?}, brute {}", cm_type(&ex), brute.len())
    })?;
    let socle = socle_generators(&ex).map_err(err)?;
    ensure(socle == [vec!["x1"], vec!["x2"], vec!["x3"]], || {
        format!("socle {socle:?}")
    })?;
    let brute_socle: BTreeSet<Vec<String>> = brute
        .iter()
        .map(|&c| h.names_of(h.full_mask() & !c))
        .collect();
    ensure(brute_socle == socle.iter().cloned().collect(), || {
        format!("brute socle {brute_socle:?}")
    })?;

    for n in 1..=6 {
        let pl = labeling(&format!("pairs {n}\n"))?;
        let t = cm_type(&pl).map_err(err)?;
        let brute = brute_minimal_covers(&restricted_o_full(&pl)).len();
        let gor = is_gorenstein(&pl).map_err(err)?.is_true();
        ensure(t == 1 && brute == 1 && gor, || {
            format!("pairs {n}: type {t}, brute {brute}, gorenstein {gor}")
        })?;
    }

    let level_ex = is_level(&ex).map_err(err)?.is_true();
    let brute_level = |pl: &PairedLabeling| {
        let h = restricted_o_full(pl);
        let sizes: BTreeSet<u32> = brute_minimal_covers(&h)
            .iter()
            .map(|c| c.count_ones())
            .collect();
        sizes.len() == 1
    };
    ensure(level_ex && brute_level(&ex), || {
        "upper-triangular graph not level".into()
    })?;
    let nl = labeling(fixtures::PAIRS3_NOT_LEVEL)?;
    let level_nl = is_level(&nl).map_err(err)?.is_true();
    ensure(!level_nl && !brute_level(&nl), || {
        "not-level fixture reported level".into()
    })?;
    Ok("type 3 with socle x1,x2,x3; pairs 1..6 type 1 and Gorenstein; level true/false as pinned; all confirmed by subset enumeration".into())
}

fn criterion_7(c: &Censuses) -> Outcome {
    let mut agreed = 0;
    for (r, _) in &c.exhaustive {
        no_violations(r, Some(&["homology-oracle-agrees", "cm-implies-unmixed"]))?;
        ensure(
            applied(r, "homology-oracle-agrees") == 2 * r.unmixed_count,
            || {
                format!(
                    "n = {}: homology checked {} times for {} unmixed graphs over two fields",
                    r.n,
                    applied(r, "homology-oracle-agrees"),
                    r.unmixed_count
                )
            },
        )?;
        agreed += r.unmixed_count;
    }
    let v = complementary_complex(&fixtures::c4())
        .reisner_cm(Field::Prime(2), usize::MAX)
        .map_err(|e| e.to_string())?;
    match &v.certificate {
        Certificate::Homology(HomologyProfile { face, reduced_betti, .. })
            if v.is_false() && face.is_empty() && reduced_betti.get(1) == Some(&1) =>
        {
            Ok(format!("F_2 and Q agree with route a on {agreed} unmixed graphs; C4 rejected with reduced Betti_0 = 1"))
        }
        other => Err(format!("C4 certificate {other:?}")),
    }
}

fn main() {
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    if !filter.is_empty()
        && !filter
            .iter()
            .any(|f| "acceptance".contains(f.as_str()) || f.starts_with("criterion"))
    {
        return;
    }
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    let mut results: Vec<(&str, Outcome)> = vec![
        (
            "1 figure: O_{2,3} of the upper-triangular graph",
            criterion_1(),
        ),
        ("2 figure: graft over a triangle", criterion_2()),
    ];
    match run_censuses() {
        Ok(c) => {
            results.push(("3 equivalence census", criterion_3(&c)));
            results.push(("4 unmixedness equivalence", criterion_4(&c)));
            results.push(("5 structural corollaries", criterion_5(&c)));
            results.push(("6 invariant formulas", criterion_6()));
            results.push(("7 oracle concordance", criterion_7(&c)));
        }
        Err(e) => {
            for name in [
                "3 equivalence census",
                "4 unmixedness equivalence",
                "5 structural corollaries",
                "7 oracle concordance",
            ] {
                results.push((name, Err(format!("census failed: {e}"))));
            }
            results.push(("6 invariant formulas", criterion_6()));
        }
    }
    results.sort_by_key(|r| r.0);
    let mut failed = 0;
    for (name, r) in &results {
        match r {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
