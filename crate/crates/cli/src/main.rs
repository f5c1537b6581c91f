use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use hom_core::itypes::{itype_derivable, witness_judgments};
use hom_core::reduction::{compile, ReductionError};
use hom_core::solver::{solve_bounded_with, EnumBudget, SolveConfig, SolveOutcome, SolverError};
use hom_core::ssts::{
    check_derivation, find_derivation, search_zero_one_with, trace, SearchConfig,
};
use hom_core::syntax::{
    parse_closed_term, parse_derivation, parse_ssts, parse_term, parse_type, print_term,
    print_term_in, Style,
};
use hom_core::verifier::{default_fuel, diagnose_with, verify_solution, Verdict};
use hom_core::witness::{classify_shape, solution_term};
use hom_core::{
    normalize, type_check, type_infer, BetaEquiv, Derivation, Exec, NormalizeResult, Ssts,
    SstsError, Term, TypeEnv, Word,
};

mod instance;

use instance::InstanceDoc;

const OK: u8 = 0;
const FAILED: u8 = 1;
const USAGE: u8 = 2;
const EXHAUSTED: u8 = 3;

#[derive(Parser)]
#[command(
    name = "hom",
    version,
    about = "Semi-Thue rewriting compiled to higher-order matching"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rewriting system queries.
    Ssts {
        #[command(subcommand)]
        command: SstsCommand,
    },
    /// Compile a rule file into a matching instance (JSON).
    Compile {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the solution term for a derivation of 0^(n+1) to 1^(n+1).
    Witness {
        file: PathBuf,
        #[arg(long)]
        n: usize,
        /// `rule position` pairs, one per line; searched for when absent.
        #[arg(long)]
        steps: Option<PathBuf>,
    },
    /// Check a candidate against a compiled instance.
    Verify {
        instance: PathBuf,
        term: PathBuf,
        #[arg(long)]
        fuel: Option<u64>,
    },
    /// Evaluate the five constraint rows of a candidate separately.
    Diagnose {
        file: PathBuf,
        term: PathBuf,
        #[arg(long, default_value_t = 10_000_000)]
        fuel: u64,
    },
    /// Search candidates by size for a solution of an instance.
    Solve {
        instance: PathBuf,
        #[arg(long, default_value_t = 24)]
        max_size: usize,
        #[arg(long, default_value_t = 1_000_000)]
        max_count: usize,
        #[arg(long, default_value_t = 1_000_000)]
        fuel: u64,
        #[arg(long)]
        sequential: bool,
    },
    /// Print the β-normal form of a term; free names are kept.
    Normalize {
        term: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        fuel: u64,
    },
    /// Infer the type of a closed term, or check it against `--type`.
    Typecheck {
        term: PathBuf,
        #[arg(long = "type")]
        ty: Option<String>,
    },
    /// Print and check the intersection judgments of a witness.
    Itype {
        file: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        steps: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum SstsCommand {
    /// Smallest word length n ≤ max-n with 0^n ⇒* 1^n.
    Search {
        file: PathBuf,
        #[arg(long)]
        max_n: usize,
        #[arg(long)]
        sequential: bool,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_system(path: &Path) -> Result<Ssts> {
    parse_ssts(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn load_closed(path: &Path) -> Result<Term> {
    parse_closed_term(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn load_instance(path: &Path) -> Result<InstanceDoc> {
    serde_json::from_str(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn exec(sequential: bool) -> Exec {
    if sequential {
        Exec::Sequential
    } else {
        Exec::default()
    }
}

/// The derivation from `--steps`, or a shortest one found by search.
fn witness_derivation(system: &Ssts, n: usize, steps: Option<&Path>) -> Result<Option<Derivation>> {
    if n == 0 {
        bail!("--n must be at least 1");
    }
    let start = Word::zeros(n + 1)?;
    let end = Word::ones(n + 1)?;
    match steps {
        Some(path) => {
            let d = Derivation::new(parse_derivation(&read(path)?)?);
            if check_derivation(system, &start, &d, &end) {
                Ok(Some(d))
            } else {
                eprintln!("steps do not rewrite {start} into {end}");
                Ok(None)
            }
        }
        None => Ok(find_derivation(
            system,
            &start,
            &end,
            SearchConfig::default(),
        )?),
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Ssts {
            command:
                SstsCommand::Search {
                    file,
                    max_n,
                    sequential,
                },
        } => {
            let system = load_system(&file)?;
            if max_n == 0 {
                bail!("--max-n must be at least 1");
            }
            let config = SearchConfig {
                exec: exec(sequential),
                ..SearchConfig::default()
            };
            match search_zero_one_with(&system, max_n, config) {
                Ok(Some((n, d))) => {
                    let words = trace(&system, &Word::zeros(n)?, &d)?;
                    let shown: Vec<String> = words.iter().map(Word::to_string).collect();
                    println!("n = {n}");
                    println!("{}", shown.join(" ⇒ "));
                    println!("steps: {d}");
                    Ok(OK)
                }
                Ok(None) => {
                    println!("none for n ≤ {max_n}");
                    Ok(FAILED)
                }
                Err(e @ SstsError::ResourceLimit { .. }) => {
                    eprintln!("{e}");
                    Ok(EXHAUSTED)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Compile { file, output } => {
            let system = load_system(&file)?;
            let inst = compile(&system)?;
            let text = serde_json::to_string_pretty(&InstanceDoc::new(&inst, &system))?;
            match output {
                Some(path) => fs::write(&path, text + "\n")
                    .with_context(|| format!("writing {}", path.display()))?,
                None => println!("{text}"),
            }
            Ok(OK)
        }
        Command::Witness { file, n, steps } => {
            let system = load_system(&file)?;
            let Some(d) = witness_derivation(&system, n, steps.as_deref())? else {
                println!("no derivation for n = {n}");
                return Ok(FAILED);
            };
            eprintln!("derivation {d}");
            println!(
                "{}",
                print_term(&solution_term(&system, n, &d)?, Style::Named)
            );
            Ok(OK)
        }
        Command::Verify {
            instance,
            term,
            fuel,
        } => {
            let inst = load_instance(&instance)?.to_instance()?;
            let m = load_closed(&term)?;
            let fuel = fuel.unwrap_or_else(|| default_fuel(&inst, &m));
            let verdict = verify_solution(&inst, &m, fuel);
            println!("{verdict}");
            Ok(match verdict {
                Verdict::Ok => OK,
                Verdict::TypeFail(_) | Verdict::EquivFail(_) => FAILED,
                Verdict::Undetermined(_) => EXHAUSTED,
            })
        }
        Command::Diagnose { file, term, fuel } => {
            let system = load_system(&file)?;
            let m = load_closed(&term)?;
            let d = match diagnose_with(&system, &m, fuel, Exec::default()) {
                Ok(d) => d,
                Err(e @ ReductionError::TypeFail { .. }) => {
                    println!("{e}");
                    return Ok(FAILED);
                }
                Err(e) => return Err(e.into()),
            };
            for row in &d.rows {
                println!("{row}");
            }
            let (binders, body) = m.strip_lams();
            if binders == system.len() + 4 {
                println!("shape: {}", classify_shape(body, 1, system.len()));
            }
            Ok(if d.all_pass() {
                OK
            } else if d.rows.iter().any(|r| r.outcome == BetaEquiv::Undetermined) {
                EXHAUSTED
            } else {
                FAILED
            })
        }
        Command::Solve {
            instance,
            max_size,
            max_count,
            fuel,
            sequential,
        } => {
            let inst = load_instance(&instance)?.to_instance()?;
            let budget = EnumBudget {
                max_size,
                max_count,
                fuel,
            };
            let config = SolveConfig {
                exec: exec(sequential),
                ..SolveConfig::default()
            };
            match solve_bounded_with(&inst, budget, config) {
                Ok(SolveOutcome::Found { term, checked }) => {
                    println!("found after {checked} candidates");
                    println!("{}", print_term(&term, Style::Named));
                    Ok(OK)
                }
                Ok(SolveOutcome::NotFound { checked }) => {
                    println!("no solution up to size {max_size} ({checked} candidates checked)");
                    Ok(FAILED)
                }
                Err(
                    e @ (SolverError::BudgetExceeded { .. } | SolverError::FuelExhausted { .. }),
                ) => {
                    println!("{e}");
                    Ok(EXHAUSTED)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Normalize { term, fuel } => {
            let text = read(&term)?;
            let (t, free) = parse_term(&text)
                .with_context(|| format!("parsing {}", term.display()))?
                .to_term_with_free();
            match normalize(&t, fuel) {
                NormalizeResult::Normal { term: nf, steps } => {
                    println!("{}", print_term_in(&nf, Style::Named, &free));
                    eprintln!("{steps} steps");
                    Ok(OK)
                }
                NormalizeResult::FuelExhausted { .. } => {
                    println!("no normal form within {fuel} steps");
                    Ok(EXHAUSTED)
                }
            }
        }
        Command::Typecheck { term, ty } => {
            let t = load_closed(&term)?;
            let env = TypeEnv::empty();
            match ty {
                Some(text) => {
                    let ty = parse_type(&text).context("parsing --type")?;
                    if type_check(&env, &t, &ty) {
                        println!("ok");
                        Ok(OK)
                    } else {
                        println!("not typable at {ty}");
                        Ok(FAILED)
                    }
                }
                None => match type_infer(&env, &t) {
                    Some(ty) => {
                        println!("{ty}");
                        Ok(OK)
                    }
                    None => {
                        println!("not typable");
                        Ok(FAILED)
                    }
                },
            }
        }
        Command::Itype { file, n, steps } => {
            let system = load_system(&file)?;
            let Some(d) = witness_derivation(&system, n, steps.as_deref())? else {
                println!("no derivation for n = {n}");
                return Ok(FAILED);
            };
            let mut all = true;
            for j in witness_judgments(&system, n, &d)? {
                let ok = itype_derivable(&j.judgment)?;
                all &= ok;
                println!("{} {j}", if ok { "derivable    " } else { "NOT derivable" });
            }
            Ok(if all { OK } else { FAILED })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(USAGE)
        }
    }
}
