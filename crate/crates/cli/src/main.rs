//! `schnyder`: realizers, flips and the dynamic structure from the shell.
//!
//! Exit status is 0 on success, 1 when an input fails validation or a
//! script step cannot be applied, and 2 on usage or parse errors.

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use schnyder::drawing::write_svg;
use schnyder::dynrealizer::DynRealizer;
use schnyder::exec::Exec;
use schnyder::flips::transform_sequence;
use schnyder::oracle::{build_flip_graph, FlipGraphStats};
use schnyder::random::{dynamic_workload, Workload};
use schnyder::realizer::{compute_realizer, RealFile, RealizerError};
use schnyder::script::{Script, ScriptError};
use schnyder::{Realizer, Triangulation, TriangulationError};

#[derive(Parser)]
#[command(name = "schnyder", version, about = "Schnyder realizers, colored flips and dynamic barycentric coordinates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a `.tri` or `.real` file.
    Validate { file: PathBuf },
    /// Compute a realizer of a triangulation and print it as `.real`.
    Realize { tri: PathBuf },
    /// Replay a flip script on the static realizer and print the result.
    /// Query answers go to stderr.
    Apply { real: PathBuf, script: PathBuf },
    /// Replay a flip script on the dynamic structure, printing query answers.
    Dyn {
        real: PathBuf,
        script: PathBuf,
        /// Also write the final realizer here.
        #[arg(long = "final")]
        final_path: Option<PathBuf>,
    },
    /// Draw a realizer on its integer grid as SVG.
    Svg {
        real: PathBuf,
        out: PathBuf,
        /// Pixels per grid unit.
        #[arg(long, default_value_t = 20)]
        scale: i64,
    },
    /// Flip-graph statistics over all realizers on `n` vertices, as CSV.
    Flipgraph {
        #[arg(long)]
        n: usize,
        /// Also print the distance histogram.
        #[arg(long)]
        histogram: bool,
        /// Do not use the thread pool.
        #[arg(long)]
        sequential: bool,
    },
    /// Print a colored-flip script turning one realizer into another.
    Distance { from: PathBuf, to: PathBuf },
    /// Time random flips with coordinate queries on the dynamic structure.
    Bench {
        /// Comma-separated vertex counts.
        #[arg(long, value_delimiter = ',', default_values_t = [1024, 16384])]
        n: Vec<usize>,
        #[arg(long, default_value_t = 100_000)]
        ops: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Timed batches per size; the fastest is reported.
        #[arg(long, default_value_t = 1)]
        rounds: usize,
    },
}

/// A failure with its exit status.
struct Failure {
    code: u8,
    msg: String,
}

fn invalid(msg: impl Display) -> Failure {
    Failure { code: 1, msg: msg.to_string() }
}

fn usage(msg: impl Display) -> Failure {
    Failure { code: 2, msg: msg.to_string() }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn tri_failure(path: &Path, e: TriangulationError) -> Failure {
    let msg = format!("{}: {e}", path.display());
    match e {
        TriangulationError::Parse { .. } => usage(msg),
        _ => invalid(msg),
    }
}

fn real_failure(path: &Path, e: RealizerError) -> Failure {
    match e {
        RealizerError::Triangulation(t) => tri_failure(path, t),
        RealizerError::Parse { .. } => usage(format!("{}: {e}", path.display())),
        _ => invalid(format!("{}: {e}", path.display())),
    }
}

fn load_tri(path: &Path) -> Result<Triangulation, Failure> {
    read(path)?.parse().map_err(|e| tri_failure(path, e))
}

/// Parses a `.real` file; an external `tri <path>` is relative to its directory.
fn load_real(path: &Path) -> Result<Realizer, Failure> {
    let text = read(path)?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let file = RealFile::parse_with(&text, |p| fs::read_to_string(dir.join(p)).map_err(|e| e.to_string()));
    file.and_then(RealFile::into_realizer).map_err(|e| real_failure(path, e))
}

fn load_script(path: &Path) -> Result<Script, Failure> {
    read(path)?.parse().map_err(|e: ScriptError| usage(format!("{}: {e}", path.display())))
}

fn is_real(text: &str) -> bool {
    let first = text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).find(|l| !l.is_empty());
    first.is_some_and(|l| l.split_whitespace().next() == Some("tri"))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Validate { file } => {
            if is_real(&read(&file)?) {
                let r = load_real(&file)?;
                println!("OK realizer n={} edges={}", r.n(), r.edges().len());
            } else {
                let t = load_tri(&file)?;
                println!("OK triangulation n={} edges={}", t.n(), t.edge_count());
            }
        }
        Command::Realize { tri } => print!("{}", compute_realizer(&load_tri(&tri)?)),
        Command::Apply { real, script } => {
            let mut r = load_real(&real)?;
            let lines = load_script(&script)?.run(&mut r).map_err(invalid)?;
            for l in lines {
                eprintln!("{l}");
            }
            print!("{r}");
        }
        Command::Dyn { real, script, final_path } => {
            let r = load_real(&real)?;
            let script = load_script(&script)?;
            let mut d = DynRealizer::build(&r).map_err(invalid)?;
            for l in script.run(&mut d).map_err(invalid)? {
                println!("{l}");
            }
            if let Some(p) = final_path {
                write(&p, &d.snapshot().to_string())?;
            }
        }
        Command::Svg { real, out, scale } => {
            if scale <= 0 {
                return Err(usage("--scale must be positive"));
            }
            let r = load_real(&real)?;
            write_svg(&r, &out, scale).map_err(|e| invalid(format!("{}: {e}", out.display())))?;
        }
        Command::Flipgraph { n, histogram, sequential } => {
            let exec = if sequential { Exec::Sequential } else { Exec::default() };
            let g = build_flip_graph(n, exec).map_err(usage)?;
            let stats = g.stats(exec);
            println!("{}", FlipGraphStats::csv_header());
            println!("{}", stats.csv_row());
            if histogram {
                print!("{}", stats.histogram_csv());
            }
        }
        Command::Distance { from, to } => {
            let (a, b) = (load_real(&from)?, load_real(&to)?);
            let ops = transform_sequence(&a, &b).map_err(invalid)?;
            print!("{}", Script::from_ops(&ops));
            println!("# length {}", ops.len());
        }
        Command::Bench { n, ops, seed, rounds } => {
            if let Some(&bad) = n.iter().find(|&&k| k < 4) {
                return Err(usage(format!("--n {bad}: need at least 4 vertices")));
            }
            println!("{}", Workload::csv_header());
            for k in n {
                println!("{}", dynamic_workload(k, ops, rounds, seed).csv_row());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
