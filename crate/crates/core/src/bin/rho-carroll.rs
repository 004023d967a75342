use std::io::{self, IsTerminal};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rho_carroll::builtins;
use rho_carroll::dsl::{self, session::describe_entry, Session};

#[derive(Parser)]
#[command(name = "rho-carroll", version, about = "Checks rho-commutative geometry sessions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Records,
}

#[derive(Subcommand)]
enum Command {
    /// Run a session file and report every check.
    Check {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Interactive session on stdin.
    Repl {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Inspect the built-in catalog.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Evaluate one expression against a built-in.
    Eval {
        #[arg(short = 'a', long = "algebra")]
        builtin: String,
        expr: String,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    Build { key: String },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    ExitCode::from(run(cli))
}

fn run(cli: Cli) -> u8 {
    match cli.command {
        Command::Check { file, seed, format } => {
            let src = match std::fs::read_to_string(&file) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: cannot read {}: {e}", file.display());
                    return 2;
                }
            };
            let name = file.display().to_string();
            match dsl::run(&src, seed, Some(&name)) {
                Ok(report) => {
                    match format {
                        Format::Text => print!("{}", report.to_text()),
                        Format::Records => print!("{}", report.to_records()),
                    }
                    report.exit_code() as u8
                }
                Err((e, partial)) => {
                    if let Some(r) = partial {
                        match format {
                            Format::Text => print!("{}", r.to_text()),
                            Format::Records => print!("{}", r.to_records()),
                        }
                    }
                    eprintln!("error: {name}:{e}");
                    2
                }
            }
        }
        Command::Repl { seed } => {
            let mut s = Session::new(seed);
            let stdin = io::stdin();
            let prompt = stdin.is_terminal();
            match dsl::repl::run_repl(stdin.lock(), io::stdout(), &mut s, prompt) {
                Ok(()) => s.report().exit_code() as u8,
                Err(e) => {
                    eprintln!("error: {e}");
                    2
                }
            }
        }
        Command::Catalog { action: CatalogAction::List } => {
            for (k, d) in builtins::CATALOG {
                println!("{k:<16} {d}");
            }
            0
        }
        Command::Catalog { action: CatalogAction::Build { key } } => match builtins::build(&key) {
            Ok(e) => {
                println!("{}", describe_entry(&e));
                let rep = e.self_check();
                let fails = rep.failures().count();
                println!("self-check: {} checks, {fails} failed", rep.checks.len());
                u8::from(fails > 0)
            }
            Err(e) => {
                eprintln!("error: {e}");
                2
            }
        },
        Command::Eval { builtin, expr } => {
            let mut s = Session::new(0);
            let src = format!("use builtin {builtin}\n");
            let setup = dsl::parse(&src).and_then(|ast| s.run(&ast));
            if let Err(e) = setup {
                eprintln!("error: {e}");
                return 2;
            }
            match s.evaluate_str(&expr) {
                Ok(v) => {
                    println!("{}", s.render_value(&v));
                    0
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    2
                }
            }
        }
    }
}
