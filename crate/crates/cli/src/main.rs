use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mtt_core::laws::{self, Execution, LawConfig};
use mtt_core::path::{DEFAULT_PROBES, DEFAULT_SEED};
use mtt_core::ring::{Mutation, RingInstance};
use mtt_core::surface::interp::evaluate_expr;
use mtt_core::surface::{evaluate_module, load, CheckedModule};

const TYPE_ERROR: u8 = 1;
const IO_ERROR: u8 = 2;

#[derive(Parser)]
#[command(name = "mtt", version, about = "Moore-path type theory: checker, evaluator and law suite")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Type-check a `.mtt` file.
    Check {
        file: String,
        /// Print each definition's type and normal form.
        #[arg(short, long)]
        verbose: bool,
    },
    /// Check an expression and print its value in the model.
    Eval {
        expr: String,
        /// Evaluate with the definitions of this file in scope.
        #[arg(short, long)]
        file: Option<String>,
        /// Print the normal form instead of the model value.
        #[arg(long)]
        normal: bool,
    },
    /// Run the randomized law suite and print a JSON report.
    Laws(LawArgs),
}

#[derive(Args)]
struct LawArgs {
    #[arg(long, env = "MTT_SEED", value_parser = parse_seed, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    count: usize,
    /// Comma-separated law id prefixes, e.g. `groupoid,bounded.zero`.
    #[arg(long)]
    filter: Option<String>,
    #[arg(long, default_value = "rationals")]
    ring: RingInstance,
    /// Inject a fault into the cone arithmetic: none, truncated-sub or min.
    #[arg(long, default_value = "none")]
    mutate: Mutation,
    /// Probe points per opaque comparison.
    #[arg(long, default_value_t = DEFAULT_PROBES)]
    probes: usize,
    /// Include per-law wall-clock time in the report.
    #[arg(long)]
    timing: bool,
    /// Run instances on the current thread only.
    #[arg(long)]
    sequential: bool,
    /// List the selected law ids instead of running them.
    #[arg(long)]
    list: bool,
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|e| format!("invalid seed `{s}`: {e}"))
}

fn read(file: &str) -> Result<String, ExitCode> {
    fs::read_to_string(file).map_err(|e| {
        eprintln!("{file}: {e}");
        ExitCode::from(IO_ERROR)
    })
}

fn load_file(file: &str) -> Result<CheckedModule, ExitCode> {
    let src = read(file)?;
    load(&src).map_err(|e| {
        eprintln!("{}", e.render(file));
        ExitCode::from(TYPE_ERROR)
    })
}

fn check(file: &str, verbose: bool) -> Result<(), ExitCode> {
    let module = load_file(file)?;
    if verbose {
        for (i, d) in module.defs.iter().enumerate() {
            println!("{} : {}", d.name, module.type_of(i));
            println!("  = {}", module.normal_form(i));
        }
    }
    Ok(())
}

fn eval(expr: &str, file: Option<&str>, normal: bool) -> Result<(), ExitCode> {
    let module = match file {
        Some(f) => load_file(f)?,
        None => load("").expect("the empty module checks"),
    };
    let e = module.check_expr(expr).map_err(|e| {
        eprintln!("{}", e.render("<expr>"));
        ExitCode::from(TYPE_ERROR)
    })?;
    if normal {
        println!("{} : {}", module.normalize(&e), module.show_type(&e));
        return Ok(());
    }
    let evaluated = evaluate_module(&module).and_then(|(gamma, _)| evaluate_expr(&gamma, &e));
    match evaluated {
        Ok((_, value)) => {
            println!("{value}");
            Ok(())
        }
        Err(err) => {
            eprintln!("<expr>: evaluation failed: {err}");
            Err(ExitCode::from(TYPE_ERROR))
        }
    }
}

fn run_laws(args: LawArgs) -> Result<(), ExitCode> {
    let config = LawConfig {
        seed: args.seed,
        count: args.count,
        filter: args.filter,
        ring: args.ring,
        mutation: args.mutate,
        probes: args.probes,
        timing: args.timing,
        execution: if args.sequential { Execution::Sequential } else { Execution::Parallel },
    };
    if args.list {
        for (_, law) in laws::selected(&config) {
            println!("{}", law.id);
        }
        return Ok(());
    }
    let reports = laws::run(&config);
    println!("{}", serde_json::to_string_pretty(&reports).expect("reports serialize"));
    if reports.iter().all(|r| r.passed) {
        Ok(())
    } else {
        Err(ExitCode::from(1))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check { file, verbose } => check(&file, verbose),
        Command::Eval { expr, file, normal } => eval(&expr, file.as_deref(), normal),
        Command::Laws(args) => run_laws(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => code,
    }
}
