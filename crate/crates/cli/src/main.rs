mod output;

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fdplan::catalog::{built_in_catalog, load_catalog, CatalogSource, FunctionCatalog};
use fdplan::model::{Problem, Semantics};
use fdplan::pddl::{self, Diagnostic};
use fdplan::pop::{solve, PlanDoc, SolveError, SolverConfig, DEFAULT_MAX_ITERATIONS};
use fdplan::validate::{execute, validate_partial, PartialVerdict};

const EXIT_INVALID: u8 = 1;
const EXIT_UNSOLVABLE: u8 = 2;
const EXIT_EXHAUSTED: u8 = 3;

const ITERATION_ENV: &str = "FDPLAN_MAX_ITERATIONS";
const BUILTIN_DOMAIN: &str = "builtin:roth";

#[derive(Parser)]
#[command(
    name = "fdplan",
    version,
    about = "Functional decomposition via partial-order planning"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a decomposition problem and emit the functional structure
    Decompose(DecomposeArgs),
    /// Check a plan document against a problem
    Validate(ValidateArgs),
    /// Inspect, emit or check function catalogs
    #[command(subcommand)]
    Catalog(CatalogCommand),
}

#[derive(Clone, Copy, ValueEnum)]
enum SemanticsArg {
    Monotone,
    Consume,
}

impl From<SemanticsArg> for Semantics {
    fn from(arg: SemanticsArg) -> Semantics {
        match arg {
            SemanticsArg::Monotone => Semantics::Monotone,
            SemanticsArg::Consume => Semantics::Consume,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Args)]
struct DecomposeArgs {
    /// Problem file in the planning-language grammar
    #[arg(long)]
    problem: PathBuf,
    /// `builtin:roth`, a domain/catalog file, or `-` for stdin
    #[arg(long, default_value = BUILTIN_DOMAIN)]
    domain: String,
    #[arg(long, value_enum, default_value = "monotone")]
    semantics: SemanticsArg,
    /// Search cap; defaults to $FDPLAN_MAX_ITERATIONS or 10000
    #[arg(long)]
    max_iterations: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Output file, or `stdout`
    #[arg(long, default_value = "stdout")]
    out: String,
    /// Include the start and finish steps in DOT output
    #[arg(long)]
    show_dummies: bool,
}

#[derive(Args)]
struct ValidateArgs {
    /// Plan document (JSON) to check
    #[arg(long)]
    plan: PathBuf,
    #[arg(long)]
    problem: PathBuf,
    #[arg(long, default_value = BUILTIN_DOMAIN)]
    domain: String,
    #[arg(long, value_enum, default_value = "monotone")]
    semantics: SemanticsArg,
    /// Execute every linear extension instead of one linearization
    #[arg(long)]
    exhaustive: bool,
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// Print one row per function schema
    List {
        #[arg(long, default_value = BUILTIN_DOMAIN)]
        domain: String,
    },
    /// Write the catalog as a planning-domain file
    EmitPddl {
        #[arg(long, default_value = BUILTIN_DOMAIN)]
        domain: String,
        #[arg(long, default_value = "stdout")]
        out: String,
    },
    /// Validate a user catalog (JSON or domain file)
    Check { file: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Decompose(args) => cmd_decompose(&args),
        Command::Validate(args) => cmd_validate(&args),
        Command::Catalog(command) => cmd_catalog(&command),
    };
    ExitCode::from(code)
}

fn invalid(err: anyhow::Error) -> u8 {
    eprintln!("error: {err:#}");
    EXIT_INVALID
}

fn print_diagnostics(label: &str, diagnostics: &[Diagnostic]) {
    for d in diagnostics {
        eprintln!("{label}:{d}");
    }
}

fn write_out(target: &str, content: &str) -> Result<()> {
    if target == "stdout" || target == "-" {
        use std::io::Write;
        match std::io::stdout().write_all(content.as_bytes()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                Err(e).context("cannot write to stdout")
            }
            _ => Ok(()),
        }
    } else {
        std::fs::write(target, content).with_context(|| format!("cannot write `{target}`"))
    }
}

/// Loads a catalog from `builtin:roth`, a `.json` catalog file, a domain file
/// in the planning grammar, or stdin (`-`).
fn load_domain(spec: &str) -> Result<FunctionCatalog> {
    if spec == BUILTIN_DOMAIN {
        return Ok(built_in_catalog());
    }
    let (label, text) = if spec == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .context("cannot read stdin")?;
        ("<stdin>".to_string(), text)
    } else {
        let text =
            std::fs::read_to_string(spec).with_context(|| format!("cannot read `{spec}`"))?;
        (spec.to_string(), text)
    };
    let source = CatalogSource::File(PathBuf::from(&label));
    if looks_like_json(spec, &text) {
        return fdplan::catalog::parse_catalog_json(&text, source)
            .map_err(|e| anyhow!("{label}: {e}"));
    }
    let (ast, diagnostics) = pddl::parse_domain(&text);
    print_diagnostics(&label, &diagnostics);
    let ast = match (ast, pddl::has_errors(&diagnostics)) {
        (Some(ast), false) => ast,
        _ => bail!("invalid domain `{label}`"),
    };
    let (catalog, diagnostics) = pddl::domain_to_catalog(&ast, source);
    print_diagnostics(&label, &diagnostics);
    catalog.ok_or_else(|| anyhow!("invalid domain `{label}`"))
}

fn looks_like_json(spec: &str, text: &str) -> bool {
    Path::new(spec).extension().is_some_and(|e| e == "json") || text.trim_start().starts_with('{')
}

fn load_problem(path: &Path, catalog: &FunctionCatalog) -> Result<Problem> {
    let label = path.display().to_string();
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read `{label}`"))?;
    let (ast, diagnostics) = pddl::parse_problem(&text);
    print_diagnostics(&label, &diagnostics);
    let ast = match (ast, pddl::has_errors(&diagnostics)) {
        (Some(ast), false) => ast,
        _ => bail!("invalid problem `{label}`"),
    };
    let (problem, diagnostics) = pddl::problem_to_model(&ast, &catalog.predicates);
    print_diagnostics(&label, &diagnostics);
    problem.ok_or_else(|| anyhow!("invalid problem `{label}`"))
}

fn iteration_cap(flag: Option<usize>) -> Result<usize> {
    if let Some(cap) = flag {
        return Ok(cap);
    }
    match std::env::var(ITERATION_ENV) {
        Ok(text) => text
            .parse()
            .map_err(|_| anyhow!("{ITERATION_ENV} must be a positive integer, got `{text}`")),
        Err(_) => Ok(DEFAULT_MAX_ITERATIONS),
    }
}

fn cmd_decompose(args: &DecomposeArgs) -> u8 {
    let run = || -> Result<(FunctionCatalog, Problem, SolverConfig)> {
        let catalog = load_domain(&args.domain)?;
        let problem = load_problem(&args.problem, &catalog)?;
        let config = SolverConfig {
            max_iterations: iteration_cap(args.max_iterations)?,
            semantics: args.semantics.into(),
            reuse_existing_steps: true,
        };
        Ok((catalog, problem, config))
    };
    let (catalog, problem, config) = match run() {
        Ok(loaded) => loaded,
        Err(e) => return invalid(e),
    };
    match solve(&problem, &catalog, &config) {
        Ok(solution) => {
            let content = match args.format {
                Format::Text => output::to_text(&solution.plan),
                Format::Json => PlanDoc::from_plan(&solution.plan).to_json(),
                Format::Dot => output::to_dot(&solution.plan, args.show_dummies),
            };
            match write_out(&args.out, &content) {
                Ok(()) => 0,
                Err(e) => invalid(e),
            }
        }
        Err(SolveError::Unsolvable { iterations }) => {
            eprintln!("unsolvable: no decomposition exists ({iterations} iterations)");
            EXIT_UNSOLVABLE
        }
        Err(SolveError::ResourceExhausted { iterations }) => {
            eprintln!("resource exhausted: gave up after {iterations} iterations");
            EXIT_EXHAUSTED
        }
    }
}

fn cmd_validate(args: &ValidateArgs) -> u8 {
    let run = || -> Result<(Problem, fdplan::pop::PartialPlan)> {
        let catalog = load_domain(&args.domain)?;
        let problem = load_problem(&args.problem, &catalog)?;
        let label = args.plan.display().to_string();
        let text = std::fs::read_to_string(&args.plan)
            .with_context(|| format!("cannot read `{label}`"))?;
        let doc = PlanDoc::from_json(&text).map_err(|e| anyhow!("{label}: {e}"))?;
        let plan = doc
            .reconstruct(&problem, &catalog)
            .map_err(|e| anyhow!("{label}: {e}"))?;
        Ok((problem, plan))
    };
    let (problem, plan) = match run() {
        Ok(loaded) => loaded,
        Err(e) => return invalid(e),
    };
    let semantics = args.semantics.into();
    if args.exhaustive {
        match validate_partial(&plan, &problem, semantics) {
            PartialVerdict::AllExtensionsValid { extensions } => {
                println!("{extensions}/{extensions} extensions pass");
                0
            }
            PartialVerdict::StructurallyValid => {
                println!("structurally valid (too many steps for exhaustive checking)");
                0
            }
            PartialVerdict::ExtensionFails { extension, verdict } => {
                let labels: Vec<String> =
                    extension.iter().map(|id| plan.step(*id).label()).collect();
                eprintln!("counterexample extension: [{}]", labels.join(", "));
                eprintln!("verdict: {verdict}");
                EXIT_INVALID
            }
            PartialVerdict::StructurallyInvalid { reason } => {
                eprintln!("invalid plan: {reason}");
                EXIT_INVALID
            }
        }
    } else {
        let order = plan.linearize();
        let actions: Vec<_> = order
            .iter()
            .filter_map(|id| plan.step(*id).action().cloned())
            .collect();
        let trace = execute(&problem, &actions, semantics);
        if trace.verdict.is_goal_satisfied() {
            println!("plan valid: goal satisfied after {} steps", actions.len());
            0
        } else {
            let labels: Vec<String> = actions.iter().map(|a| a.to_string()).collect();
            eprintln!("counterexample extension: [{}]", labels.join(", "));
            eprintln!("verdict: {}", trace.verdict);
            EXIT_INVALID
        }
    }
}

fn cmd_catalog(command: &CatalogCommand) -> u8 {
    match command {
        CatalogCommand::List { domain } => {
            let catalog = match load_domain(domain) {
                Ok(c) => c,
                Err(e) => return invalid(e),
            };
            let mut rows = String::new();
            for schema in &catalog.schemas {
                let params: Vec<String> = schema
                    .params
                    .iter()
                    .map(|p| format!("{} - {}", p.var, p.class))
                    .collect();
                let pre: Vec<String> = schema.pre.iter().map(|l| l.to_string()).collect();
                let add: Vec<String> = schema.add.iter().map(|a| a.to_string()).collect();
                rows.push_str(&format!(
                    "{}({})  pre: {}  add: {}\n",
                    schema.name,
                    params.join(", "),
                    pre.join(" & "),
                    add.join(" & "),
                ));
            }
            match write_out("stdout", &rows) {
                Ok(()) => 0,
                Err(e) => invalid(e),
            }
        }
        CatalogCommand::EmitPddl { domain, out } => {
            let catalog = match load_domain(domain) {
                Ok(c) => c,
                Err(e) => return invalid(e),
            };
            match write_out(out, &fdplan::catalog::emit_domain(&catalog)) {
                Ok(()) => 0,
                Err(e) => invalid(e),
            }
        }
        CatalogCommand::Check { file } => {
            let label = file.display().to_string();
            if file.extension().is_some_and(|e| e == "json") {
                match load_catalog(file) {
                    Ok(catalog) => {
                        println!("catalog ok: {} actions", catalog.len());
                        0
                    }
                    Err(e) => invalid(anyhow!("{e}")),
                }
            } else {
                match load_domain(&label) {
                    Ok(catalog) => {
                        println!("catalog ok: {} actions", catalog.len());
                        0
                    }
                    Err(e) => invalid(e),
                }
            }
        }
    }
}
