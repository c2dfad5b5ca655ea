use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ext63_core::chordal::{check_chordal, ChordalityVerdict};
use ext63_core::forbidden::{template, ForbiddenKind};
use ext63_core::generate::{complete, cycle, path, random_chordal, random_gnp, rng, spider, star};
use ext63_core::oracle::{automorphism_orbits, find_isomorphism};
use ext63_core::partition::{classify_all_pairs, coarsest_regular_simplicial_partition, coarsest_simplicial_partition, partition_signature};
use ext63_core::pipeline::{iso_test_with, IsoDecision, IsoMode};
use ext63_core::validate::{validate, CorpusSpec, ValidateOptions};
use ext63_core::{booth_reduce, to_extended, Error, Execution, Graph};

#[derive(Parser)]
#[command(name = "ext63", version, about = "Graph isomorphism through extended chordal graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Marked)]
    mode: ModeArg,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true)]
    n: Option<usize>,
    #[arg(long, global = true)]
    exhaustive: bool,
    /// Worker threads; 1 runs sequentially.
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Edgelist,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Marked,
    Alignment,
}

impl From<ModeArg> for IsoMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Marked => IsoMode::Marked,
            ModeArg::Alignment => IsoMode::Alignment,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Chordality verdict with an elimination order or a chordless cycle.
    ChordalCheck { file: PathBuf },
    /// Booth's subdivision reduction.
    Booth { file: PathBuf },
    /// Reduce into the extended class; marking trees unless --mode alignment.
    Eliminate { file: PathBuf },
    /// Coarsest simplicial and regular simplicial partitions of a chordal graph.
    Partition { file: PathBuf },
    /// Structure of every adjacent cell pair of the regular partition.
    ClassifyCells { file: PathBuf },
    /// Automorphism orbits from the exact oracle.
    Orbits { file: PathBuf },
    /// Isomorphism decision through the reduction pipeline.
    Iso {
        a: PathBuf,
        b: PathBuf,
        /// Also report the oracle's verdict.
        #[arg(long)]
        oracle: bool,
    },
    /// Compare the pipeline against the oracle on a corpus.
    Validate {
        /// Random pairs when not exhaustive.
        #[arg(long, default_value_t = 100)]
        pairs: usize,
        /// Directory for counterexample files.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a graph: path, cycle, clique, star, random, chordal, spider-thin,
    /// spider-thick, or a forbidden pattern name.
    Gen {
        kind: String,
        /// Edge probability for `random`.
        #[arg(long, default_value_t = 0.5)]
        p: f64,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Syntax { .. } | Error::Range { .. } | Error::DuplicateEdge(..) | Error::SelfLoop(_) => 2,
            Error::NotChordal { .. } => 1,
            _ => 3,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn read_graph(p: &Path) -> Result<Graph, Failure> {
    let text = std::fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
    Graph::parse_edge_list(&text).map_err(|e| Failure {
        message: format!("{}: {e}", p.display()),
        ..Failure::from(e)
    })
}

struct Output {
    code: u8,
    json: Value,
    graph: Option<Graph>,
}

fn out(code: u8, json: Value) -> Output {
    Output { code, json, graph: None }
}

fn need_n(cli: &Cli) -> Result<usize, Failure> {
    cli.n.ok_or_else(|| usage("--n is required"))
}

fn run(cli: &Cli, exec: Execution) -> Result<Output, Failure> {
    let mode = IsoMode::from(cli.mode);
    Ok(match &cli.command {
        Command::ChordalCheck { file } => match check_chordal(&read_graph(file)?) {
            ChordalityVerdict::Chordal(order) => out(0, json!({"chordal": true, "order": order.as_slice()})),
            ChordalityVerdict::NotChordal(hole) => out(1, json!({"chordal": false, "hole": hole})),
        },
        Command::Booth { file } => {
            let b = booth_reduce(&read_graph(file)?).graph;
            Output { code: 0, json: json!(b), graph: Some(b) }
        }
        Command::Eliminate { file } => {
            let opts = mode.reduce_options(exec);
            let (mg, trace) = to_extended(&read_graph(file)?, opts)?;
            Output {
                code: if trace.final_member { 0 } else { 1 },
                json: json!({"trace": trace, "graph": mg}),
                graph: Some(mg.graph),
            }
        }
        Command::Partition { file } => {
            let g = read_graph(file)?;
            let s = coarsest_simplicial_partition(&g)?;
            let p = coarsest_regular_simplicial_partition(&g)?;
            let sig = partition_signature(&g, &p)?;
            out(0, json!({"simplicial": s, "regular": p, "signature": sig}))
        }
        Command::ClassifyCells { file } => {
            let g = read_graph(file)?;
            let p = coarsest_regular_simplicial_partition(&g)?;
            let pairs: Vec<Value> = classify_all_pairs(&g, &p)
                .into_iter()
                .map(|((i, j), s)| json!({"i": i, "j": j, "structure": s}))
                .collect();
            out(0, json!({"cells": p, "pairs": pairs}))
        }
        Command::Orbits { file } => {
            let o = automorphism_orbits(&read_graph(file)?)?;
            out(0, json!({"orbits": o.cells()}))
        }
        Command::Iso { a, b, oracle } => {
            let (g1, g2) = (read_graph(a)?, read_graph(b)?);
            let d = iso_test_with(&g1, &g2, mode, exec);
            let code = match d {
                IsoDecision::Isomorphic(_) => 0,
                IsoDecision::NotIsomorphic(_) => 1,
                IsoDecision::Inconclusive(_) => 3,
            };
            let mut v = json!(d);
            if *oracle {
                v["oracle"] = json!(find_isomorphism(&g1, &g2).is_some());
            }
            out(code, v)
        }
        Command::Validate { pairs, out: dir } => {
            let n = need_n(cli)?;
            let spec = if cli.exhaustive {
                CorpusSpec::Exhaustive { n }
            } else {
                CorpusSpec::Random { n, pairs: *pairs, seed: cli.seed }
            };
            let opts = ValidateOptions { execution: exec, out_dir: dir.clone(), ..Default::default() };
            let r = validate(&[spec], &opts)?;
            let clean = r.sound() && r.corpora.iter().all(|c| c.modes.iter().all(|m| m.disagree == 0));
            out(if clean { 0 } else { 1 }, json!(r))
        }
        Command::Gen { kind, p } => {
            let g = generate(cli, kind, *p)?;
            Output { code: 0, json: json!(g), graph: Some(g) }
        }
    })
}

fn generate(cli: &Cli, kind: &str, p: f64) -> Result<Graph, Failure> {
    if let Some(k) = ForbiddenKind::from_name(kind) {
        return Ok(template(k).pattern.clone());
    }
    let n = need_n(cli)?;
    Ok(match kind {
        "path" => path(n),
        "cycle" if n >= 3 => cycle(n),
        "clique" => complete(n),
        "star" => star(n),
        "random" => random_gnp(n, p.clamp(0.0, 1.0), &mut rng(cli.seed)),
        "chordal" => random_chordal(n, &mut rng(cli.seed)),
        "spider-thin" => spider(n, true),
        "spider-thick" => spider(n, false),
        "cycle" => return Err(usage("a cycle needs --n of at least 3")),
        other => return Err(usage(format!("unknown graph kind `{other}`"))),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let exec = match cli.jobs {
        Some(0) => {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(2);
        }
        Some(1) => Execution::Sequential,
        _ => Execution::Parallel,
    };
    let t = Instant::now();
    let result = match cli.jobs {
        Some(j) if j > 1 => match rayon::ThreadPoolBuilder::new().num_threads(j).build() {
            Ok(pool) => pool.install(|| run(&cli, exec)),
            Err(e) => Err(Failure { code: 3, message: e.to_string() }),
        },
        _ => run(&cli, exec),
    };
    eprintln!("elapsed: {:.3?}", t.elapsed());
    match result {
        Ok(o) => {
            match (&o.graph, cli.format) {
                (Some(g), Format::Edgelist) => print!("{}", g.to_edge_list_text()),
                _ => println!("{}", serde_json::to_string_pretty(&o.json).expect("json")),
            }
            ExitCode::from(o.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
