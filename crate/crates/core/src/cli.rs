//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error,
//! 3 numerical failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::bounds::{self, Family, Suite};
use crate::corpus::CorpusTree;
use crate::error::{Error, Result};
use crate::exact::{
    bottleneck_inverse, bottleneck_matrix, neckbottle_inverse, neckbottle_matrix, path_matrix,
    path_matrix_inverse,
};
use crate::fiedler::{classify, TreeKind, DEFAULT_TIE_TOL};
use crate::format::g12;
use crate::spectral::{
    perron_entropy_with, PerronMatrix, PowerOptions, DEFAULT_MAX_ITER, DEFAULT_TOL,
};
use crate::tree::{
    make_bethe, make_broom, make_path, make_random, make_star, rooted_power, rooted_product,
    rooted_sum, RootedTree,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "perron-trees",
    version,
    about = "Perron values, moments and bounds for rooted trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a tree file.
    Gen {
        #[command(subcommand)]
        spec: GenSpec,
        #[command(flatten)]
        out: OutputArgs,
        #[arg(long, value_enum, default_value_t = TreeFormat::Text, global = true)]
        format: TreeFormat,
    },
    /// Print an exact matrix of a rooted tree.
    Matrix {
        /// Tree file or generator spec such as `star:10`.
        tree: String,
        #[arg(long, value_enum)]
        kind: MatrixKind,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Print ρ, the Perron entropy and the solver residual.
    Spectral {
        tree: String,
        #[arg(long, value_enum, default_value_t = WhichMatrix::M)]
        matrix: WhichMatrix,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Classify the underlying unrooted tree as type I or type II.
    Classify {
        tree: String,
        /// Relative tolerance for ties between branch Perron values.
        #[arg(long, default_value_t = DEFAULT_TIE_TOL)]
        tol: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Check the moment / Perron-value bounds and print one CSV row per check.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        /// Trees to check instead of the built-in corpus.
        trees: Vec<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Print μ/ρ along a family of trees as CSV.
    Ratio {
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Branching for `bethe`.
        #[arg(long, default_value_t = 2)]
        k: u64,
        /// Base tree for `power`.
        #[arg(long, default_value = "path:2")]
        base: String,
        /// Explicit parameter values (order, depth or exponent).
        #[arg(long, value_delimiter = ',', conflicts_with_all = ["from", "to"])]
        params: Vec<u64>,
        #[arg(long)]
        from: Option<u64>,
        #[arg(long)]
        to: Option<u64>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Subcommand, Debug)]
enum GenSpec {
    Star {
        #[arg(long)]
        n: usize,
    },
    Path {
        #[arg(long)]
        n: usize,
    },
    Broom {
        #[arg(long)]
        x: usize,
        #[arg(long)]
        y: usize,
    },
    Bethe {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        k: u64,
    },
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    Sum {
        #[arg(required = true)]
        parts: Vec<String>,
    },
    Product {
        t1: String,
        t2: String,
    },
    Power {
        tree: String,
        #[arg(long)]
        k: u32,
    },
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Write to this file instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SolverArgs {
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    max_iter: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum TreeFormat {
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum MatrixKind {
    #[value(name = "N")]
    N,
    #[value(name = "M")]
    M,
    #[value(name = "Q")]
    Q,
    #[value(name = "Ninv")]
    Ninv,
    #[value(name = "Minv")]
    Minv,
    #[value(name = "Qinv")]
    Qinv,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum WhichMatrix {
    #[value(name = "M")]
    M,
    #[value(name = "Q")]
    Q,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SuiteArg {
    All,
    Tree,
    Sum,
    Product,
    Power,
    Bethe,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FamilyArg {
    Star,
    Path,
    Bethe,
    Power,
}

/// Parses `argv` (program name first), runs the command on the process
/// stdout/stderr and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// As [`run`] with explicit output streams.
pub fn run_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if e.is_numeric() {
                EXIT_NUMERIC
            } else {
                EXIT_USAGE
            }
        }
    }
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::InvalidArgument(format!("{}: {e}", path.display()))
}

fn emit(out: &OutputArgs, stdout: &mut dyn Write, bytes: &[u8]) -> Result<()> {
    match &out.output {
        Some(path) => fs::write(path, bytes).map_err(|e| io_error(path, e)),
        None => stdout
            .write_all(bytes)
            .map_err(|e| Error::InvalidArgument(format!("stdout: {e}"))),
    }
}

fn parse_args<const K: usize>(kind: &str, args: &str) -> Result<[u64; K]> {
    let values: Vec<u64> = args
        .split(',')
        .map(|a| a.trim().parse::<u64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Parse(format!("generator {kind}:{args}: {e}")))?;
    values.try_into().map_err(|_| {
        Error::Parse(format!(
            "generator {kind} takes {K} comma-separated integers"
        ))
    })
}

/// Builds a tree from `kind:args`, e.g. `star:10`, `broom:3,4`,
/// `bethe:3,4`, `random:50,7`.
pub fn tree_from_spec(spec: &str) -> Result<Option<RootedTree>> {
    let Some((kind, args)) = spec.split_once(':') else {
        return Ok(None);
    };
    let tree = match kind {
        "star" => make_star(parse_args::<1>(kind, args)?[0] as usize)?,
        "path" => make_path(parse_args::<1>(kind, args)?[0] as usize)?,
        "broom" => {
            let [x, y] = parse_args::<2>(kind, args)?;
            make_broom(x as usize, y as usize)?
        }
        "bethe" => {
            let [p, k] = parse_args::<2>(kind, args)?;
            let p = u32::try_from(p)
                .map_err(|_| Error::InvalidArgument(format!("p = {p} too large")))?;
            make_bethe(p, k)?
        }
        "random" => {
            let [n, seed] = parse_args::<2>(kind, args)?;
            make_random(n as usize, seed)?
        }
        _ => return Ok(None),
    };
    Ok(Some(tree))
}

/// Loads a tree from a file (text or JSON) or a generator spec.
pub fn load_tree(arg: &str) -> Result<RootedTree> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
        return if text.trim_start().starts_with('{') {
            RootedTree::from_json(&text)
        } else {
            RootedTree::from_text(&text)
        };
    }
    tree_from_spec(arg)?.ok_or_else(|| {
        Error::InvalidArgument(format!("{arg:?} is neither a file nor a generator spec"))
    })
}

fn num(x: f64) -> Value {
    g12(x)
        .parse::<f64>()
        .map(|v| json!(v))
        .unwrap_or(Value::Null)
}

fn execute(command: Command, stdout: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Gen { spec, out, format } => {
            let tree = generate(spec)?;
            let text = match format {
                TreeFormat::Text => tree.to_text(),
                TreeFormat::Json => tree.to_json() + "\n",
            };
            emit(&out, stdout, text.as_bytes())?;
        }
        Command::Matrix { tree, kind, out } => {
            let t = load_tree(&tree)?;
            let m = match kind {
                MatrixKind::N => path_matrix(&t),
                MatrixKind::M => bottleneck_matrix(&t),
                MatrixKind::Q => neckbottle_matrix(&t),
                MatrixKind::Ninv => path_matrix_inverse(&t),
                MatrixKind::Minv => bottleneck_inverse(&t),
                MatrixKind::Qinv => neckbottle_inverse(&t),
            };
            emit(&out, stdout, m.to_text().as_bytes())?;
        }
        Command::Spectral {
            tree,
            matrix,
            solver,
            format,
            out,
        } => {
            let t = load_tree(&tree)?;
            let which = match matrix {
                WhichMatrix::M => PerronMatrix::Bottleneck,
                WhichMatrix::Q => PerronMatrix::Neckbottle,
            };
            let opts = PowerOptions {
                tol: solver.tol,
                max_iter: solver.max_iter,
            };
            let r = perron_entropy_with(&t, which, opts)?;
            let text = match format {
                ReportFormat::Text => format!(
                    "n {}\nrho {}\nentropy {}\nresidual {}\niterations {}\n",
                    t.order(),
                    g12(r.spectral.rho),
                    g12(r.h),
                    g12(r.spectral.residual),
                    r.spectral.iterations
                ),
                ReportFormat::Json => {
                    json!({
                        "n": t.order(),
                        "rho": num(r.spectral.rho),
                        "entropy": num(r.h),
                        "residual": num(r.spectral.residual),
                        "iterations": r.spectral.iterations,
                    })
                    .to_string()
                        + "\n"
                }
            };
            emit(&out, stdout, text.as_bytes())?;
        }
        Command::Classify { tree, tol, out } => {
            let g = load_tree(&tree)?.to_unrooted();
            let c = classify(&g, tol)?;
            let value = match &c.kind {
                TreeKind::TypeI {
                    vertex,
                    perron_branches,
                    branch_rho,
                } => json!({
                    "type": "I",
                    "characteristic": [vertex + 1],
                    "beta": Value::Null,
                    "algebraic_connectivity": num(c.algebraic_connectivity),
                    "perron_branch_rho": num(*branch_rho),
                    "perron_branches": perron_branches.iter().map(|u| u + 1).collect::<Vec<_>>(),
                }),
                TreeKind::TypeII {
                    p,
                    q,
                    beta,
                    branch_rho,
                } => json!({
                    "type": "II",
                    "characteristic": [p + 1, q + 1],
                    "beta": num(*beta),
                    "algebraic_connectivity": num(c.algebraic_connectivity),
                    "perron_branch_rho": [num(branch_rho.0), num(branch_rho.1)],
                }),
            };
            emit(&out, stdout, (value.to_string() + "\n").as_bytes())?;
        }
        Command::Verify { suite, trees, out } => {
            let suite = match suite {
                SuiteArg::All => Suite::All,
                SuiteArg::Tree => Suite::Tree,
                SuiteArg::Sum => Suite::Sum,
                SuiteArg::Product => Suite::Product,
                SuiteArg::Power => Suite::Power,
                SuiteArg::Bethe => Suite::Bethe,
            };
            let reports = if trees.is_empty() {
                bounds::run_suite(suite)?
            } else {
                let given = trees
                    .iter()
                    .map(|arg| {
                        Ok(CorpusTree {
                            id: arg.clone(),
                            tree: load_tree(arg)?,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                bounds::run_suite_on(suite, &given, &given)?
            };
            let mut buf = Vec::new();
            bounds::write_reports(&mut buf, &reports)?;
            emit(&out, stdout, &buf)?;
            if reports.iter().any(|r| !r.pass) {
                return Ok(EXIT_VERIFY_FAILED);
            }
        }
        Command::Ratio {
            family,
            k,
            base,
            params,
            from,
            to,
            out,
        } => {
            let family = match family {
                FamilyArg::Star => Family::Star,
                FamilyArg::Path => Family::Path,
                FamilyArg::Bethe => Family::Bethe { k },
                FamilyArg::Power => Family::Power {
                    base: load_tree(&base)?,
                    label: base.clone(),
                },
            };
            let params = if !params.is_empty() {
                params
            } else {
                let (lo, hi) = default_range(&family);
                let (lo, hi) = (from.unwrap_or(lo), to.unwrap_or(hi));
                if lo > hi {
                    return Err(Error::InvalidArgument(format!("empty range {lo}..={hi}")));
                }
                (lo..=hi).collect()
            };
            let series = bounds::ratio_series(&family, &params)?;
            let mut buf = Vec::new();
            bounds::write_series(&mut buf, &series)?;
            emit(&out, stdout, &buf)?;
        }
    }
    Ok(EXIT_OK)
}

fn default_range(family: &Family) -> (u64, u64) {
    match family {
        Family::Star | Family::Path => (2, 100),
        Family::Bethe { .. } => (2, 12),
        Family::Power { .. } => (1, 14),
    }
}

fn generate(spec: GenSpec) -> Result<RootedTree> {
    match spec {
        GenSpec::Star { n } => make_star(n),
        GenSpec::Path { n } => make_path(n),
        GenSpec::Broom { x, y } => make_broom(x, y),
        GenSpec::Bethe { p, k } => make_bethe(p, k),
        GenSpec::Random { n, seed } => make_random(n, seed),
        GenSpec::Sum { parts } => {
            let parts = parts
                .iter()
                .map(|p| load_tree(p))
                .collect::<Result<Vec<_>>>()?;
            rooted_sum(&parts)
        }
        GenSpec::Product { t1, t2 } => rooted_product(&load_tree(&t1)?, &load_tree(&t2)?),
        GenSpec::Power { tree, k } => rooted_power(&load_tree(&tree)?, k),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("perron-trees").chain(args.iter().copied());
        let code = run_with(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn generator_specs() {
        assert_eq!(
            tree_from_spec("star:4").unwrap().unwrap(),
            make_star(4).unwrap()
        );
        assert_eq!(tree_from_spec("bethe:3,4").unwrap().unwrap().order(), 21);
        assert!(tree_from_spec("nothing").unwrap().is_none());
        assert!(tree_from_spec("broom:3").is_err());
        assert!(tree_from_spec("star:x").is_err());
    }

    #[test]
    fn gen_bethe_text() {
        let (code, out, _) = run_capture(&["gen", "bethe", "--p", "3", "--k", "4"]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(RootedTree::from_text(&out).unwrap().order(), 21);
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_capture(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["gen", "star", "--n", "0"]).0, EXIT_USAGE);
        assert_eq!(
            run_capture(&["matrix", "--kind", "Q", "no-such-file"]).0,
            EXIT_USAGE
        );
        assert_eq!(run_capture(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn numeric_failure_exit_code() {
        let (code, _, err) = run_capture(&["spectral", "path:50", "--max-iter", "1"]);
        assert_eq!(code, EXIT_NUMERIC, "{err}");
    }
}
