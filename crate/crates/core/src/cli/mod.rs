//! Command-line front end.
//!
//! Exit codes: 0 success, 1 property failure, 2 invalid input, 3 infeasible
//! request.

mod table;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::branch::{
    alternating_coeffs, build_splitting_tree_with, distortion_sweep, extract_rosenthal,
    select_separated, separation_upper_bound, SplitOptions, DEFAULT_EFFORT,
};
use crate::checks::{run_suite, CheckConfig, Suite};
use crate::error::{Error, Result};
use crate::espace::{enorm, extract_blocks_with, project, EVector, KernelMethod};
use crate::norm::{dual_norm_bounds, norm, norm_oracle_strict, BranchCombo, TreeVector};
use crate::tree::{Branch, Mode};

pub use table::{format_number, Cell, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PROPERTY: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "treenorm",
    version,
    about = "Tree-space norms, branch functionals and interval norms"
)]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Tree depth (number of levels); commands reading files default to the file's depth.
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, global = true, default_value = "extended")]
    pub mode: Mode,
    #[arg(long, global = true, value_enum, default_value_t = Output::Csv)]
    pub output: Output,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Norm of a tree vector (JSON file) with an attaining family.
    Norm { file: PathBuf },
    /// Lower and upper bounds on the norm of a branch combination (JSON file).
    Dualnorm {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_EFFORT)]
        effort: usize,
    },
    /// Greedy ℓ₁ subsequence extraction from a branch list file.
    Rosenthal {
        file: PathBuf,
        /// Comma-separated coefficients, one per picked branch (default all ones).
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        coeffs: Option<Vec<f64>>,
    },
    /// Splitting trie of a branch list file.
    Split {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        min_count: usize,
        #[arg(long)]
        level_cap: Option<usize>,
    },
    /// Separated selection of 2n branches from a branch list file.
    Separate {
        file: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Distortion table for n = 1..n-max.
    Distortion {
        #[arg(long)]
        n_max: usize,
        #[arg(long, default_value_t = DEFAULT_EFFORT)]
        effort: usize,
    },
    /// Interval-norm space utilities.
    Espace {
        #[command(subcommand)]
        command: EspaceCommand,
    },
    /// Randomized property suites.
    Check {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Random cases per suite.
        #[arg(long, default_value_t = 500)]
        cases: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum EspaceCommand {
    /// Norm of a vector (JSON file).
    Norm { file: PathBuf },
    /// Projection onto the indices below `eta`.
    Project {
        file: PathBuf,
        #[arg(long)]
        eta: usize,
    },
    /// Block sequence extracted from a JSON array of vectors.
    Blocks {
        file: PathBuf,
        #[arg(long)]
        max_blocks: Option<usize>,
        #[arg(long, value_enum, default_value_t = Kernel::Auto)]
        kernel: Kernel,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Kernel {
    Auto,
    Exact,
    Numeric,
}

impl From<Kernel> for KernelMethod {
    fn from(k: Kernel) -> Self {
        match k {
            Kernel::Auto => KernelMethod::Auto,
            Kernel::Exact => KernelMethod::Exact,
            Kernel::Numeric => KernelMethod::Numeric,
        }
    }
}

/// Default depth for the distortion sweep.
pub const DEFAULT_DISTORTION_DEPTH: usize = 16;

/// Text plus exit status of a finished command.
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Infeasible(_) | Error::TrieIncomplete(_) => EXIT_INFEASIBLE,
        _ => EXIT_INVALID,
    }
}

/// Parses a branch list: one bit string per line, blank lines and `#`
/// comments ignored, all lines of equal length.
pub fn parse_branch_list(text: &str) -> Result<Vec<Branch>> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    let Some((_, first)) = lines.first() else {
        return Err(Error::EmptyInput);
    };
    let depth = first.len();
    lines
        .iter()
        .map(|(no, l)| {
            if l.len() != depth {
                return Err(Error::Parse(format!(
                    "line {no}: branch {l:?} has length {}, expected {depth}",
                    l.len()
                )));
            }
            Branch::parse(l, depth).map_err(|e| Error::Parse(format!("line {no}: {e}")))
        })
        .collect()
}

fn read(path: &Path) -> Result<String> {
    Ok(fs::read_to_string(path)?)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    Ok(serde_json::from_str(&read(path)?)?)
}

impl RunConfig {
    fn validate(&self) -> Result<()> {
        if self.depth == Some(0) {
            return Err(Error::InvalidArgument("--depth must be at least 1".into()));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::InvalidArgument("--tol must be positive".into()));
        }
        Ok(())
    }
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Result<Outcome> {
    let cfg = &cli.config;
    cfg.validate()?;
    let ok = |t: Table| Outcome {
        stdout: t.render(cfg.output),
        code: EXIT_OK,
    };
    match &cli.command {
        Command::Norm { file } => {
            let mut x: TreeVector = read_json(file)?;
            if let Some(d) = cfg.depth {
                x = x.with_depth(d)?;
            }
            Ok(ok(norm_table(&x, cfg.mode)?))
        }
        Command::Dualnorm { file, effort } => {
            let f: BranchCombo = read_json(file)?;
            let b = dual_norm_bounds(&f, *effort)?;
            let mut t = Table::new(["lower", "upper", "evaluations"]);
            t.push([
                Cell::Num(b.lower),
                Cell::Num(b.upper),
                Cell::Int(b.evaluations as i64),
            ]);
            Ok(ok(t))
        }
        Command::Rosenthal { file, coeffs } => {
            let branches = parse_branch_list(&read(file)?)?;
            let ext = extract_rosenthal(&branches)?;
            let coeffs = coeffs.clone().unwrap_or_else(|| vec![1.0; ext.len()]);
            let (lower, upper) = ext.l1_bounds(&coeffs)?;
            let witness = norm(&ext.witness(&vec![1.0; ext.len()])?).value;
            let mut t = Table::new(["picks", "t_nodes", "witness_norm", "lower", "upper"]);
            t.push([
                Cell::Ints(ext.picked_indices.iter().map(|i| *i as i64 + 1).collect()),
                Cell::Nodes(ext.exit_children.clone()),
                Cell::Num(witness),
                Cell::Num(lower),
                Cell::Num(upper),
            ]);
            Ok(ok(t))
        }
        Command::Split {
            file,
            min_count,
            level_cap,
        } => {
            let branches = parse_branch_list(&read(file)?)?;
            let tree = build_splitting_tree_with(
                &branches,
                SplitOptions {
                    min_count: *min_count,
                    level_cap: *level_cap,
                },
            )?;
            let mut t = Table::new([
                "index",
                "trie_level",
                "t_node",
                "split_node",
                "branch_count",
                "first_branch",
            ]);
            for e in tree.entries() {
                t.push([
                    Cell::Int(e.index as i64),
                    Cell::Int(e.trie_level() as i64),
                    Cell::Node(e.t_node),
                    e.split_node.map_or(Cell::Empty, Cell::Node),
                    Cell::Int(e.branch_count as i64),
                    Cell::Str(e.first_branch.to_string()),
                ]);
            }
            Ok(ok(t))
        }
        Command::Separate { file, n } => {
            let branches = parse_branch_list(&read(file)?)?;
            let tree = build_splitting_tree_with(&branches, SplitOptions::default())?;
            let sep = select_separated(&tree, *n)?;
            let bound = separation_upper_bound(&sep, &alternating_coeffs(*n))?;
            let mut t = Table::new([
                "n",
                "eta1",
                "eta2",
                "psi",
                "branches",
                "upper_bound",
                "invariants",
            ]);
            t.push([
                Cell::Int(*n as i64),
                Cell::Int(sep.eta1 as i64),
                Cell::Int(sep.eta2 as i64),
                Cell::Nodes(sep.psi.clone()),
                Cell::Strs(sep.branches.iter().map(|b| b.to_string()).collect()),
                Cell::Num(bound),
                Cell::Str(match sep.check_invariants() {
                    Ok(()) => "ok".into(),
                    Err(e) => e,
                }),
            ]);
            let failed = sep.check_invariants().is_err();
            Ok(Outcome {
                stdout: t.render(cfg.output),
                code: if failed { EXIT_PROPERTY } else { EXIT_OK },
            })
        }
        Command::Distortion { n_max, effort } => {
            if *n_max == 0 {
                return Err(Error::InvalidArgument("--n-max must be at least 1".into()));
            }
            let depth = cfg.depth.unwrap_or(DEFAULT_DISTORTION_DEPTH);
            let rows = distortion_sweep(*n_max, depth, cfg.seed, *effort)?;
            let mut t = Table::new([
                "n",
                "num_branches",
                "eta1",
                "eta2",
                "upper_bound",
                "lower_estimate",
                "delta_bound",
            ]);
            for r in rows {
                t.push([
                    Cell::Int(r.n as i64),
                    Cell::Int(r.num_branches as i64),
                    Cell::Int(r.eta1 as i64),
                    Cell::Int(r.eta2 as i64),
                    Cell::Num(r.upper_bound),
                    Cell::Num(r.lower_estimate),
                    Cell::Num(r.delta_bound),
                ]);
            }
            Ok(ok(t))
        }
        Command::Espace { command } => match command {
            EspaceCommand::Norm { file } => {
                let v: EVector = read_json(file)?;
                let mut t = Table::new(["value"]);
                t.push([Cell::Num(enorm(&v))]);
                Ok(ok(t))
            }
            EspaceCommand::Project { file, eta } => {
                let v: EVector = read_json(file)?;
                let p = project(&v, *eta);
                let mut t = Table::new(["index", "value"]);
                for (i, x) in p.iter() {
                    t.push([Cell::Int(*i as i64), Cell::Num(*x)]);
                }
                Ok(ok(t))
            }
            EspaceCommand::Blocks {
                file,
                max_blocks,
                kernel,
            } => {
                let xs: Vec<EVector> = read_json(file)?;
                let res = extract_blocks_with(&xs, (*kernel).into(), *max_blocks)?;
                let mut t = Table::new([
                    "block",
                    "start",
                    "end",
                    "min_index",
                    "max_index",
                    "norm",
                    "entries",
                ]);
                for (m, b) in res.blocks.iter().enumerate() {
                    t.push([
                        Cell::Int(m as i64),
                        Cell::Int(b.start as i64),
                        Cell::Int(b.end as i64),
                        Cell::Int(b.vector.min_index().unwrap_or(0) as i64),
                        Cell::Int(b.vector.max_index().unwrap_or(0) as i64),
                        Cell::Num(enorm(&b.vector)),
                        Cell::Strs(
                            b.vector
                                .iter()
                                .map(|(i, v)| format!("{i}:{}", format_number(*v)))
                                .collect(),
                        ),
                    ]);
                }
                Ok(ok(t))
            }
        },
        Command::Check { suite, cases } => {
            let ccfg = CheckConfig {
                seed: cfg.seed,
                tol: cfg.tol,
                cases: *cases,
            };
            let reports = run_suite(*suite, &ccfg);
            let failed = reports.iter().any(|r| !r.ok());
            let mut t = Table::new(["suite", "status", "passed", "failed", "first_failure"]);
            for r in &reports {
                t.push([
                    Cell::Str(r.suite.clone()),
                    Cell::Str(if r.ok() { "pass" } else { "fail" }.into()),
                    Cell::Int(r.passed as i64),
                    Cell::Int(r.failed as i64),
                    r.first_failure.clone().map_or(Cell::Empty, Cell::Str),
                ]);
            }
            Ok(Outcome {
                stdout: t.render(cfg.output),
                code: if failed { EXIT_PROPERTY } else { EXIT_OK },
            })
        }
    }
}

fn norm_table(x: &TreeVector, mode: Mode) -> Result<Table> {
    let mut t = Table::new(["value", "witness_level", "witness_family", "witness_sums"]);
    match mode {
        Mode::Extended => {
            let b = norm(x);
            let family = b
                .witness_family
                .as_ref()
                .map(|f| f.segments().iter().map(|s| s.to_string()).collect())
                .unwrap_or_default();
            t.push([
                Cell::Num(b.value),
                Cell::Int(b.witness_level as i64),
                Cell::Strs(family),
                Cell::Nums(b.witness_sums),
            ]);
        }
        Mode::Strict => {
            t.push([
                Cell::Num(norm_oracle_strict(x)?),
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
            ]);
        }
    }
    Ok(t)
}

/// Parses `args`, runs the command and returns the exit code, writing the
/// result to stdout and diagnostics to stderr.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            out.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
