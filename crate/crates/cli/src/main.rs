use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use lmimw::generators::{caterpillar, complete_ary, extremal_tree, path_tree, random_tree, star};
use lmimw::oracle::{cut_profile, lmw_bruteforce_with_guard, OracleError, DEFAULT_LMW_GUARD};
use lmimw::{build_layout, compute_all_labels, LinearLayout, Tree};

const GUARD_ENV: &str = "LMIMW_ORACLE_GUARD";

#[derive(Parser)]
#[command(name = "lmimw", version, about = "Linear MIM-width of trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the width of a tree.
    Lmw {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        root: usize,
    },
    /// Print the width, then an optimal layout on one line.
    Layout {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        root: usize,
    },
    /// Print the label of every rooted subtree.
    Labels {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        root: usize,
        /// Show the witness node of each entry as `width@node`.
        #[arg(long)]
        verbose: bool,
    },
    /// Compute the width of a given layout.
    Verify {
        tree: PathBuf,
        layout: PathBuf,
        /// Exit with status 2 unless the layout has exactly this width.
        #[arg(long)]
        expect: Option<usize>,
        /// Also print the MIM of every cut.
        #[arg(long)]
        per_cut: bool,
    },
    /// Exact width by exhaustive search (small trees only).
    Oracle { file: PathBuf },
    /// Write a generated tree in edge-list format.
    Gen {
        #[command(subcommand)]
        family: Family,
        #[arg(long, global = true, default_value_t = 0)]
        seed: u64,
    },
    /// Time labels + layout on random trees and print CSV rows.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        trials: usize,
    },
}

#[derive(Subcommand)]
enum Family {
    Path { n: usize },
    Star { n: usize },
    Caterpillar { spine: usize, legs: usize },
    Kary { branching: usize, height: usize },
    Random { n: usize },
    Extremal { k: u32 },
}

/// Failure with a specific exit status.
#[derive(Debug)]
struct Exit(u8, String);

impl std::fmt::Display for Exit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.1)
    }
}

impl std::error::Error for Exit {}

fn read_tree(path: &Path) -> Result<Tree> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Tree::parse_edge_list(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Accepts a bare permutation or the two-line output of `layout`.
fn read_layout(path: &Path) -> Result<LinearLayout> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let lines: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
    let body = match lines.as_slice() {
        [header, rest @ ..] if !rest.is_empty() && header.split_whitespace().count() == 1 => rest.join(" "),
        _ => lines.join(" "),
    };
    LinearLayout::parse(&body).with_context(|| format!("parsing {}", path.display()))
}

fn oracle_guard() -> Result<usize> {
    match std::env::var(GUARD_ENV) {
        Ok(v) => v.trim().parse().with_context(|| format!("{GUARD_ENV}={v:?} is not a node count")),
        Err(_) => Ok(DEFAULT_LMW_GUARD),
    }
}

fn run(cli: Cli, out: &mut impl Write) -> Result<()> {
    match cli.command {
        Command::Lmw { file, root } => {
            let tree = read_tree(&file)?;
            writeln!(out, "{}", compute_all_labels(&tree, root)?.lmw())?;
        }
        Command::Layout { file, root } => {
            let tree = read_tree(&file)?;
            let (layout, width) = build_layout(&tree, root)?;
            writeln!(out, "{width}")?;
            writeln!(out, "{}", layout.to_line())?;
        }
        Command::Labels { file, root, verbose } => {
            let tree = read_tree(&file)?;
            let labeling = compute_all_labels(&tree, root)?;
            for v in 0..tree.node_count() {
                if verbose {
                    writeln!(out, "{v}: {:#}", labeling.label(v))?;
                } else {
                    writeln!(out, "{v}: {}", labeling.label(v))?;
                }
            }
        }
        Command::Verify { tree, layout, expect, per_cut } => {
            let tree = read_tree(&tree)?;
            let layout = read_layout(&layout)?;
            let cuts = cut_profile(&tree, &layout)?;
            let width = cuts.iter().copied().max().unwrap_or(0);
            if per_cut {
                for (i, mim) in cuts.iter().enumerate() {
                    writeln!(out, "cut {} {mim}", i + 1)?;
                }
            }
            writeln!(out, "{width}")?;
            if let Some(k) = expect {
                if k != width {
                    out.flush()?;
                    return Err(Exit(2, format!("layout width {width}, expected {k}")).into());
                }
            }
        }
        Command::Oracle { file } => {
            let tree = read_tree(&file)?;
            match lmw_bruteforce_with_guard(&tree, oracle_guard()?) {
                Ok(w) => writeln!(out, "{w}")?,
                Err(e @ OracleError::GuardExceeded { .. }) => return Err(Exit(3, e.to_string()).into()),
                Err(e) => return Err(e.into()),
            }
        }
        Command::Gen { family, seed } => {
            let tree = match family {
                Family::Path { n } => path_tree(n),
                Family::Star { n } => star(n),
                Family::Caterpillar { spine, legs } => caterpillar(spine, legs),
                Family::Kary { branching, height } => complete_ary(branching, height),
                Family::Random { n } => random_tree(n, seed),
                Family::Extremal { k } => extremal_tree(k),
            }?;
            out.write_all(tree.to_edge_list().as_bytes())?;
        }
        Command::Bench { sizes, seed, trials } => {
            if trials == 0 {
                bail!("--trials must be at least 1");
            }
            writeln!(out, "n,millis,lmw_max")?;
            for n in sizes {
                let mut times = Vec::with_capacity(trials);
                let mut widest = 0;
                for t in 0..trials {
                    let tree = random_tree(n, seed.wrapping_add(t as u64))?;
                    let start = Instant::now();
                    let (_, width) = build_layout(&tree, 0)?;
                    times.push(start.elapsed().as_secs_f64() * 1e3);
                    widest = widest.max(width);
                }
                times.sort_by(f64::total_cmp);
                writeln!(out, "{n},{:.3},{widest}", times[times.len() / 2])?;
                out.flush()?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = run(cli, &mut out);
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<Exit>() {
                Some(Exit(code, _)) => ExitCode::from(*code),
                None => ExitCode::from(1),
            }
        }
    }
}
