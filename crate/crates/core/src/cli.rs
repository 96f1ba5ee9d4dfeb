//! Command-line front end. `main.rs` only forwards to [`main_exit`].

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::algebra::{
    catalog, check_prelie, commutator_algebra, is_parametric_name, AlgebraError, AlgebraJson, AlgebraSpec, Alpha,
    CATALOG_NAMES,
};
use crate::operators::{build_system, Convention, EquationSystem, EquationSystemJson, OperatorError, OperatorKind};
use crate::rational::{format_rational, parse_rational, parse_rational_list, Rational};
use crate::solver::{grid_enumerate, points_text, solve_families, SolverError};
use crate::tables::{audit, AuditConfig, DiscrepancyReport, TableError};

/// Environment variable holding the worker count for `audit-all`.
pub const WORKERS_ENV: &str = "PRELIE_ROTA_WORKERS";

const AFTER_HELP: &str = "\
DEFAULTS
  grid          -2,-1,-1/2,0,1/2,1,2
  alpha samples -1,0,1/2,1,2 (A5 and A6)
  weight        0 when --operator rota-baxter is given without --weight
  convention    row: P(e_i) = sum_j M[i][j] e_j (column reads the transpose)

ENVIRONMENT
  PRELIE_ROTA_WORKERS  worker threads for audit-all (default 1)

EXIT CODES
  0  success
  1  usage or internal error
  2  the audit found discrepancies";

#[derive(Debug, Parser)]
#[command(name = "prelie-rota", version, about = "Exact operator classification on 2-dimensional pre-Lie algebras")]
#[command(after_help = AFTER_HELP)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, value_enum, global = true, default_value = "markdown")]
    pub format: Format,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Markdown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Row,
    Column,
    Both,
}

impl ConventionArg {
    fn conventions(self) -> Vec<Convention> {
        match self {
            ConventionArg::Row => vec![Convention::Row],
            ConventionArg::Column => vec![Convention::Column],
            ConventionArg::Both => vec![Convention::Row, Convention::Column],
        }
    }
}

#[derive(Debug, Args)]
pub struct OperatorArgs {
    /// Catalog name (A1..A8) or a path to an algebra JSON file.
    #[arg(long)]
    pub algebra: String,
    /// rota-baxter, reynolds, nijenhuis or averaging.
    #[arg(long)]
    pub operator: String,
    /// Rota-Baxter weight as p/q.
    #[arg(long, allow_hyphen_values = true)]
    pub weight: Option<String>,
    /// Value of alpha for A5/A6 (omit for generic alpha where allowed).
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the catalog algebras.
    Catalog,
    /// Check the left and right pre-Lie identities and the commutator bracket.
    CheckPrelie {
        #[arg(long)]
        algebra: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
    },
    /// Write the polynomial system of an operator identity as JSON (requires --out).
    BuildSystem {
        #[command(flatten)]
        op: OperatorArgs,
    },
    /// Solve an operator system into families.
    Solve {
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long)]
        operator: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        weight: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        /// Read the system from a `build-system` file instead.
        #[arg(long, conflicts_with_all = ["algebra", "operator", "weight"])]
        system: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "row")]
        convention: SingleConvention,
    },
    /// Enumerate every grid matrix satisfying the identity.
    OracleGrid {
        #[command(flatten)]
        op: OperatorArgs,
        /// Comma-separated rationals.
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
        #[arg(long, value_enum, default_value = "row")]
        convention: SingleConvention,
    },
    /// Audit the published tables for some algebras and operators.
    VerifyTables {
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long)]
        operator: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        weight: Option<String>,
        #[arg(long, value_enum, default_value = "both")]
        convention: ConventionArg,
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
        /// Comma-separated alpha samples for A5/A6.
        #[arg(long, allow_hyphen_values = true)]
        alphas: Option<String>,
    },
    /// Full discrepancy report across every cell.
    AuditAll {
        #[arg(long, value_enum, default_value = "both")]
        convention: ConventionArg,
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        alphas: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SingleConvention {
    Row,
    Column,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("solver and grid oracle disagree on: {0}")]
    Inconsistent(String),
}

/// What a command produced.
pub struct Outcome {
    pub text: String,
    pub discrepancies: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, discrepancies: false }
    }
}

fn rational(flag: &str, text: &str) -> Result<Rational, CliError> {
    parse_rational(text).map_err(|e| CliError::Usage(format!("--{flag}: {e}")))
}

fn rational_list(flag: &str, text: &str) -> Result<Vec<Rational>, CliError> {
    let v = parse_rational_list(text).map_err(|e| CliError::Usage(format!("--{flag}: {e}")))?;
    if v.is_empty() {
        return Err(CliError::Usage(format!("--{flag} is empty")));
    }
    Ok(v)
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn catalog_name(sel: &str) -> Option<&'static str> {
    CATALOG_NAMES.iter().copied().find(|n| n.eq_ignore_ascii_case(sel))
}

/// A catalog algebra or a JSON file. Parametric algebras stay symbolic
/// unless `alpha` is given.
fn load_algebra(sel: &str, alpha: Option<&str>) -> Result<AlgebraSpec, CliError> {
    let alpha = alpha.map(|a| rational("alpha", a)).transpose()?;
    if let Some(name) = catalog_name(sel) {
        let mode = match alpha {
            Some(q) => Some(Alpha::Value(q)),
            None if is_parametric_name(name) => Some(Alpha::Symbolic),
            None => None,
        };
        return Ok(catalog(name, mode)?);
    }
    let path = Path::new(sel);
    if !path.exists() {
        return Err(AlgebraError::UnknownAlgebra(sel.to_string()).into());
    }
    let a = AlgebraJson::from_json(&read(path)?)?;
    match alpha {
        Some(q) if a.is_parametric() => Ok(a.specialize(q)),
        Some(_) => Err(AlgebraError::UnexpectedAlpha(a.name().to_string()).into()),
        None => Ok(a),
    }
}

fn operator_kind(operator: &str, weight: Option<&str>) -> Result<OperatorKind, CliError> {
    let w = weight.map(|w| rational("weight", w)).transpose()?;
    Ok(OperatorKind::from_parts(operator, w)?)
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn cmd_catalog(format: Format) -> Result<Outcome, CliError> {
    let mut rows = Vec::new();
    let mut md = String::from("# Catalog\n\n");
    for name in CATALOG_NAMES {
        let parametric = is_parametric_name(name);
        let a = catalog(name, parametric.then_some(Alpha::Symbolic))?;
        rows.push(json!({"name": name, "dim": a.dim(), "parametric": parametric, "products": a.product_lines()}));
        let _ = writeln!(md, "- {name}{}: {}", if parametric { " (alpha)" } else { "" }, a.product_lines().join(", "));
    }
    Ok(Outcome::ok(if format == Format::Json { to_json(&rows) } else { md }))
}

fn cmd_check_prelie(format: Format, algebra: &str, alpha: Option<&str>) -> Result<Outcome, CliError> {
    let a = load_algebra(algebra, alpha)?;
    let report = check_prelie(&a)?;
    let lie = if a.is_specialized() { Some(commutator_algebra(&a)?) } else { None };
    if format == Format::Json {
        let v = json!({
            "prelie": report,
            "commutator": lie.as_ref().map(|c| json!({
                "antisymmetric": c.antisymmetric,
                "jacobi": c.jacobi_holds(),
                "products": c.bracket.product_lines(),
            })),
        });
        return Ok(Outcome::ok(to_json(&v)));
    }
    let mut out = format!("# {}\n\n", report.algebra);
    for line in report.summary_lines() {
        let _ = writeln!(out, "{line}");
    }
    for (t, d) in &report.left_failures {
        let _ = writeln!(out, "  left defect at {t:?}: [{}]", d.join(", "));
    }
    if let Some(c) = &lie {
        let _ = writeln!(out, "commutator antisymmetric: {}", if c.antisymmetric { "PASS" } else { "FAIL" });
        let _ = writeln!(out, "commutator Jacobi: {}", if c.jacobi_holds() { "PASS" } else { "FAIL" });
    }
    Ok(Outcome::ok(out))
}

fn system_for(op: &OperatorArgs) -> Result<EquationSystem, CliError> {
    let a = load_algebra(&op.algebra, op.alpha.as_deref())?;
    let kind = operator_kind(&op.operator, op.weight.as_deref())?;
    Ok(build_system(&a, &kind)?)
}

fn cmd_build_system(op: &OperatorArgs, out: Option<&Path>) -> Result<Outcome, CliError> {
    let Some(path) = out else { return Err(CliError::Usage("build-system needs --out <file>".into())) };
    let system = system_for(op)?;
    let text = to_json(&system.to_json());
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    Ok(Outcome::ok(format!(
        "wrote {} equations in {} variables to {}\n",
        system.equations.len(),
        system.vars.len(),
        path.display()
    )))
}

fn cmd_solve(
    format: Format,
    system: EquationSystem,
    alpha: Option<&str>,
    convention: SingleConvention,
) -> Result<Outcome, CliError> {
    let alpha = alpha.map(|a| rational("alpha", a)).transpose()?;
    let shown = if convention == SingleConvention::Column { system.transposed()? } else { system.clone() };
    let families = solve_families(&shown, alpha.as_ref())?;
    let label = match (&alpha, system.is_symbolic()) {
        (Some(q), _) => format!("{}[alpha={}]", system.algebra.split('[').next().unwrap_or_default(), format_rational(q)),
        (None, true) => format!("{}[alpha generic]", system.algebra),
        (None, false) => system.algebra.clone(),
    };
    let conv = if convention == SingleConvention::Column { "column" } else { "row" };
    if format == Format::Json {
        let v = json!({
            "algebra": label,
            "operator": system.kind.to_string(),
            "convention": conv,
            "families": families.iter().map(|f| f.to_json()).collect::<Vec<_>>(),
        });
        return Ok(Outcome::ok(to_json(&v)));
    }
    let mut out = format!("# {} operators on {label} ({conv} convention)\n\n", system.kind);
    let _ = writeln!(out, "{} {}\n", families.len(), if families.len() == 1 { "family" } else { "families" });
    for (k, f) in families.iter().enumerate() {
        let j = f.to_json();
        let _ = writeln!(out, "{}. {}", k + 1, f.constraint_text());
        let _ = writeln!(out, "   free: {}", if j.free_params.is_empty() { "none".into() } else { j.free_params.join(", ") });
        if let Some(p) = &j.parametric {
            let cells: Vec<String> = p.iter().map(|(k, v)| format!("{k} = {v}")).collect();
            let _ = writeln!(out, "   matrix: {}", cells.join(", "));
        }
    }
    Ok(Outcome::ok(out))
}

fn cmd_oracle_grid(
    format: Format,
    op: &OperatorArgs,
    grid: Option<&str>,
    convention: SingleConvention,
) -> Result<Outcome, CliError> {
    let grid = match grid {
        Some(g) => rational_list("grid", g)?,
        None => crate::solver::default_grid(),
    };
    if op.alpha.is_none() && catalog_name(&op.algebra).is_some_and(is_parametric_name) {
        return Err(SolverError::MissingAlpha(op.algebra.clone()).into());
    }
    let system = system_for(op)?;
    let mut points = grid_enumerate(&system, &grid, None, 1)?;
    if convention == SingleConvention::Column {
        let n = system.dim;
        for p in points.iter_mut() {
            *p = (0..n * n).map(|s| p[(s % n) * n + s / n].clone()).collect();
        }
        points.sort();
    }
    let text = points_text(&points);
    if format == Format::Json {
        let v = json!({
            "algebra": system.algebra,
            "operator": system.kind.to_string(),
            "convention": if convention == SingleConvention::Column { "column" } else { "row" },
            "grid": grid.iter().map(format_rational).collect::<Vec<_>>(),
            "count": points.len(),
            "points": text,
        });
        return Ok(Outcome::ok(to_json(&v)));
    }
    let mut out = format!("# {} grid solutions on {}\n\n{} matrices\n\n", system.kind, system.algebra, points.len());
    for m in &text {
        let rows: Vec<String> = m.iter().map(|r| r.join(", ")).collect();
        let _ = writeln!(out, "- [{}]", rows.join("; "));
    }
    Ok(Outcome::ok(out))
}

fn report_outcome(format: Format, report: &DiscrepancyReport) -> Result<Outcome, CliError> {
    if !report.summary.solver_oracle_mismatches.is_empty() {
        return Err(CliError::Inconsistent(report.summary.solver_oracle_mismatches.join(", ")));
    }
    let text = if format == Format::Json { report.to_json() } else { report.to_markdown() };
    Ok(Outcome { text, discrepancies: report.has_discrepancies() })
}

fn audit_config(convention: ConventionArg, grid: Option<&str>, alphas: Option<&str>) -> Result<AuditConfig, CliError> {
    let mut config = AuditConfig { conventions: convention.conventions(), ..AuditConfig::default() };
    if let Some(g) = grid {
        config.grid = rational_list("grid", g)?;
    }
    if let Some(a) = alphas {
        config.alphas = rational_list("alphas", a)?;
    }
    Ok(config)
}

/// Worker count from the environment; unset means 1.
pub fn workers_from_env() -> Result<usize, CliError> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(CliError::Usage(format!("{WORKERS_ENV} must be a positive integer, got `{v}`"))),
        },
        Err(_) => Ok(1),
    }
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let format = cli.format;
    match &cli.command {
        Command::Catalog => cmd_catalog(format),
        Command::CheckPrelie { algebra, alpha } => cmd_check_prelie(format, algebra, alpha.as_deref()),
        Command::BuildSystem { op } => cmd_build_system(op, cli.out.as_deref()),
        Command::Solve { algebra, operator, weight, alpha, system, convention } => {
            let sys = match system {
                Some(path) => {
                    let j: EquationSystemJson = serde_json::from_str(&read(path)?)
                        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
                    EquationSystem::from_json(&j)?
                }
                None => {
                    let (Some(algebra), Some(operator)) = (algebra, operator) else {
                        return Err(CliError::Usage("solve needs --algebra and --operator, or --system".into()));
                    };
                    let a = load_algebra(algebra, None)?;
                    build_system(&a, &operator_kind(operator, weight.as_deref())?)?
                }
            };
            cmd_solve(format, sys, alpha.as_deref(), *convention)
        }
        Command::OracleGrid { op, grid, convention } => cmd_oracle_grid(format, op, grid.as_deref(), *convention),
        Command::VerifyTables { algebra, operator, weight, convention, grid, alphas } => {
            let mut config = audit_config(*convention, grid.as_deref(), alphas.as_deref())?;
            if let Some(sel) = algebra {
                let name = catalog_name(sel).ok_or_else(|| AlgebraError::UnknownAlgebra(sel.clone()))?;
                config.algebras = vec![name.to_string()];
            }
            match operator {
                Some(op) => config.kinds = vec![operator_kind(op, weight.as_deref())?],
                None if weight.is_some() => return Err(CliError::Usage("--weight needs --operator rota-baxter".into())),
                None => {}
            }
            report_outcome(format, &audit(&config)?)
        }
        Command::AuditAll { convention, grid, alphas } => {
            let config = AuditConfig { workers: workers_from_env()?, ..audit_config(*convention, grid.as_deref(), alphas.as_deref())? };
            report_outcome(format, &audit(&config)?)
        }
    }
}

/// Parses `std::env::args`, runs, writes output and maps the exit code.
pub fn main_exit() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            let written = match (&cli.out, &cli.command) {
                (Some(path), c) if !matches!(c, Command::BuildSystem { .. }) => std::fs::write(path, &outcome.text),
                _ => {
                    print!("{}", outcome.text);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            if outcome.discrepancies {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
