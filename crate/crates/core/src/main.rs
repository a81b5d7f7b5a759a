use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use edge_cm::census::{cross_validate, Mode};
use edge_cm::complex::{complementary_complex, DEFAULT_MAX_FACES, DEFAULT_MAX_SHELLING_FACETS};
use edge_cm::criteria::{parse_routes, CmOptions};
use edge_cm::invariants::invariant_report;
use edge_cm::report::{analyze, choose_labeling};
use edge_cm::text::parse;
use edge_cm::transform::{b_graft, o_set, BGraftSpec, Block};
use edge_cm::{Error, Field, Result};

/// Unmixed and Cohen-Macaulay edge ideals of graphs with height half the vertex count.
#[derive(Parser)]
#[command(name = "edgecm", version)]
struct Cli {
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Vertex count, height and class membership.
    Classify {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Unmixedness, Cohen-Macaulayness by the requested routes, bounds and invariants.
    Check {
        file: PathBuf,
        /// Comma-separated routes among a-f; route a always runs.
        #[arg(long, default_value = "a")]
        routes: String,
        /// Homology coefficients: a prime, or Q.
        #[arg(long, default_value = "2")]
        field: Field,
        #[arg(long, default_value_t = DEFAULT_MAX_SHELLING_FACETS)]
        max_shelling_facets: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_FACES)]
        max_faces: usize,
        /// Seed for sampled transform checks on large graphs.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Applies O_T and prints the resulting graph.
    Transform {
        /// Comma-separated 1-based pair indices.
        #[arg(long)]
        set: String,
        file: PathBuf,
    },
    /// Builds a B-grafted graph from a base graph and one block per base vertex.
    Graft {
        #[arg(long)]
        h0: PathBuf,
        #[arg(long = "block", required = true)]
        blocks: Vec<PathBuf>,
    },
    /// CM type, socle generators, level and Gorenstein verdicts.
    Invariants {
        file: PathBuf,
        /// Print socle generators one per line.
        #[arg(long)]
        list_socle: bool,
        #[arg(long)]
        json: bool,
    },
    /// Cross-validates every criterion over labeled in-class graphs.
    Census {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = CensusMode::Exhaustive)]
        mode: CensusMode,
        #[arg(long, default_value_t = 10_000)]
        count: usize,
        /// Required in sample mode.
        #[arg(long)]
        seed: Option<u64>,
        /// Write the type histogram as CSV to this path.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Facets and homology of the independence complex.
    Complex {
        file: PathBuf,
        #[arg(long, default_value = "2")]
        field: Field,
        #[arg(long, default_value_t = DEFAULT_MAX_FACES)]
        max_faces: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CensusMode {
    Exhaustive,
    Sample,
}

enum Failure {
    Usage(String),
    Lib(Error),
    Io(PathBuf, std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

struct Output {
    text: String,
    code: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: 0 }
    }
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("documents serialize") + "\n"
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }
    match run(cli.command) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Io(p, e)) => {
            eprintln!("error: {}: {e}", p.display());
            ExitCode::from(1)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(command: Command) -> std::result::Result<Output, Failure> {
    match command {
        Command::Classify {
            file,
            json: as_json,
        } => {
            let g = parse(&read(&file)?)?.graph;
            let c = g.classify();
            Ok(Output::ok(if as_json {
                json(&c)
            } else {
                format!(
                    "vertices {}\nheight {}\nisolated {}\nin_class {}\n",
                    c.vertex_count, c.height, c.has_isolated, c.in_class
                )
            }))
        }
        Command::Check {
            file,
            routes,
            field,
            max_shelling_facets,
            max_faces,
            seed,
            json: as_json,
        } => {
            let routes = parse_routes(&routes)?;
            let opts = CmOptions {
                field,
                max_shelling_facets,
                max_faces,
                seed,
                ..CmOptions::default()
            };
            let doc = analyze(&read(&file)?, &routes, &opts)?;
            let text = if as_json { json(&doc) } else { doc.to_text() };
            Ok(Output {
                text,
                code: if doc.has_inconclusive() { 2 } else { 0 },
            })
        }
        Command::Transform { set, file } => {
            let f = parse(&read(&file)?)?;
            let pl = choose_labeling(f.pairs, &f.graph).0?;
            let t = parse_index_set(&set)?;
            Ok(Output::ok(o_set(&pl, &t)?.to_text()))
        }
        Command::Graft { h0, blocks } => {
            let h0 = parse(&read(&h0)?)?.graph;
            let blocks = blocks
                .iter()
                .map(|p| Ok(Block::from_text(&read(p)?)?))
                .collect::<std::result::Result<Vec<_>, Failure>>()?;
            let (g, _) = b_graft(&BGraftSpec::new(h0, blocks)?)?;
            Ok(Output::ok(g.to_text()))
        }
        Command::Invariants {
            file,
            list_socle,
            json: as_json,
        } => {
            let f = parse(&read(&file)?)?;
            let pl = labeling_for(&f)?;
            let r = invariant_report(&pl)?;
            Ok(Output::ok(if list_socle {
                r.socle_monomials
                    .iter()
                    .map(|m| m.join(" ") + "\n")
                    .collect()
            } else if as_json {
                json(&r)
            } else {
                format!(
                    "type {}\nlevel {}\ngorenstein {}\ncomplete_intersection {}\nsocle {}\n",
                    r.cm_type,
                    r.level,
                    r.gorenstein,
                    r.complete_intersection,
                    r.socle_monomials
                        .iter()
                        .map(|m| m.join("*"))
                        .collect::<Vec<_>>()
                        .join(", ")
                )
            }))
        }
        Command::Census {
            n,
            mode,
            count,
            seed,
            csv,
        } => {
            let mode = match (mode, seed) {
                (CensusMode::Exhaustive, _) => Mode::Exhaustive,
                (CensusMode::Sample, Some(seed)) => Mode::Sample { count, seed },
                (CensusMode::Sample, None) => {
                    return Err(Failure::Usage("sample mode needs --seed".into()))
                }
            };
            let report = cross_validate(n, mode)?;
            if let Some(path) = csv {
                fs::write(&path, report.type_histogram_csv()).map_err(|e| Failure::Io(path, e))?;
            }
            let code = if report.violations.is_empty() { 0 } else { 3 };
            Ok(Output {
                text: json(&report),
                code,
            })
        }
        Command::Complex {
            file,
            field,
            max_faces,
            json: as_json,
        } => {
            let g = parse(&read(&file)?)?.graph;
            let c = complementary_complex(&g);
            let pure = c.is_pure().is_true();
            let betti = c.reduced_homology_ranks(field, max_faces)?;
            #[derive(Serialize)]
            struct ComplexDoc {
                facets: Vec<Vec<String>>,
                dim: isize,
                pure: bool,
                field: Field,
                reduced_betti: Vec<usize>,
            }
            let doc = ComplexDoc {
                facets: c.facets(),
                dim: c.dim(),
                pure,
                field,
                reduced_betti: betti,
            };
            Ok(Output::ok(if as_json {
                json(&doc)
            } else {
                format!(
                    "{}dim {}\npure {}\nreduced betti over {} (from dim -1): {:?}\n",
                    c.to_text(),
                    doc.dim,
                    doc.pure,
                    doc.field,
                    doc.reduced_betti
                )
            }))
        }
    }
}

fn labeling_for(f: &edge_cm::text::GraphFile) -> Result<edge_cm::PairedLabeling> {
    let c = f.graph.classify();
    if !c.in_class {
        return Err(Error::NotInClass {
            vertex_count: c.vertex_count,
            height: c.height,
            has_isolated: c.has_isolated,
        });
    }
    choose_labeling(f.pairs, &f.graph).0
}

fn parse_index_set(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            p.trim()
                .parse()
                .map_err(|_| Error::Input(format!("bad pair index `{p}`")))
        })
        .collect()
}
