use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::Ratio;

use maset_core::document::{emit_document, parse_document};
use maset_core::listing::emit_listing;
use maset_core::system::{derive, derive_counts, eval_system, oracle_table};
use maset_core::verify::{run_suite, SUITES};
use maset_core::{ConcreteMaset, Game, Oracle};

#[derive(Parser)]
#[command(name = "maset", version, about = "Expected-case Mastermind and AB via maset patterns")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum GameArg {
    Mm,
    Ab,
}

impl From<GameArg> for Game {
    fn from(g: GameArg) -> Self {
        match g {
            GameArg::Mm => Game::Mastermind,
            GameArg::Ab => Game::Ab,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Listing,
    Doc,
}

#[derive(Subcommand)]
enum Command {
    /// Derive the equation system for a game.
    Derive {
        #[arg(long, value_enum)]
        game: GameArg,
        #[arg(long)]
        pegs: usize,
        #[arg(long)]
        out: Option<String>,
        #[arg(long, value_enum, default_value = "doc")]
        format: Format,
        /// Only print the number of patterns and equations.
        #[arg(long)]
        count_only: bool,
    },
    /// Solve the full game exactly with the brute-force oracle.
    Solve {
        #[arg(long, value_enum)]
        game: GameArg,
        #[arg(long)]
        pegs: usize,
        #[arg(long)]
        colors: u32,
        /// Forbid the question-only additional color.
        #[arg(long)]
        no_additional: bool,
    },
    /// Evaluate a derived system over a range of color counts, e.g. 2..10.
    Eval {
        #[arg(long = "in")]
        input: String,
        #[arg(long)]
        colors: String,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(SUITES))]
        suite: String,
        /// Allow suites that take hours.
        #[arg(long)]
        slow: bool,
    },
}

fn parse_range(text: &str) -> Option<(u32, u32)> {
    let (a, b) = text.split_once("..")?;
    let (a, b) = (a.trim().parse().ok()?, b.trim().trim_start_matches('=').parse().ok()?);
    (a <= b).then_some((a, b))
}

fn run(cli: Cli) -> Result<bool, String> {
    let mut stdout = std::io::stdout().lock();
    match cli.command {
        Command::Derive {
            game,
            pegs,
            out,
            format,
            count_only,
        } => {
            if count_only {
                let (patterns, equations) = derive_counts(game.into(), pegs, |i, len, count| {
                    if i % 500 == 0 && i > 0 {
                        eprintln!("pattern {i}/{len}, {count} equations");
                    }
                })
                .map_err(|e| e.to_string())?;
                writeln!(stdout, "{patterns} patterns, {equations} equations").map_err(|e| e.to_string())?;
                return Ok(true);
            }
            let derivation = derive(game.into(), pegs).map_err(|e| e.to_string())?;
            let text = match format {
                Format::Listing => emit_listing(&derivation),
                Format::Doc => emit_document(&derivation),
            };
            match out {
                Some(path) => fs::write(&path, text).map_err(|e| format!("{path}: {e}"))?,
                None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string())?,
            }
            Ok(true)
        }
        Command::Solve {
            game,
            pegs,
            colors,
            no_additional,
        } => {
            let maset =
                ConcreteMaset::full(game.into(), pegs, colors, !no_additional).map_err(|e| e.to_string())?;
            let l = Oracle::new().solve(&maset).map_err(|e| e.to_string())?;
            let n = maset.len() as i64;
            let expected = if n == 0 {
                "undefined".to_string()
            } else {
                Ratio::new(l as i64, n).to_string()
            };
            writeln!(stdout, "L={l} N={n} expected={expected}").map_err(|e| e.to_string())?;
            Ok(true)
        }
        Command::Eval { input, colors } => {
            let (lo, hi) = parse_range(&colors).ok_or_else(|| format!("bad range {colors:?}, expected A..B"))?;
            let text = fs::read_to_string(&input).map_err(|e| format!("{input}: {e}"))?;
            let derivation = parse_document(&text).map_err(|e| format!("{input}: {e}"))?;
            let oracle = Oracle::new();
            let base =
                oracle_table(&derivation, 0..=derivation.max_shift(), &oracle).map_err(|e| e.to_string())?;
            let (values, _) = eval_system(&derivation, hi, &base).map_err(|e| e.to_string())?;
            let header: Vec<String> = (0..derivation.queue.len())
                .map(|i| format!("A_{{{},{i}}}", derivation.pegs))
                .collect();
            writeln!(stdout, "n\t{}", header.join("\t")).map_err(|e| e.to_string())?;
            for n in lo..=hi {
                let row: Vec<String> = (0..derivation.queue.len())
                    .map(|i| values.get(i, n).map_or("-".into(), |v| v.to_string()))
                    .collect();
                writeln!(stdout, "{n}\t{}", row.join("\t")).map_err(|e| e.to_string())?;
            }
            Ok(true)
        }
        Command::Verify { suite, slow } => {
            let report = run_suite(&suite, slow).map_err(|e| e.to_string())?;
            for line in &report.lines {
                writeln!(stdout, "{line}").map_err(|e| e.to_string())?;
            }
            writeln!(
                stdout,
                "suite {}: {}",
                report.suite,
                if report.passed { "passed" } else { "FAILED" }
            )
            .map_err(|e| e.to_string())?;
            Ok(report.passed)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}
