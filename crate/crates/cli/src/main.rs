use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use abmod_cli::commands::{self, parse_rational};
use abmod_cli::{CheckInput, GenSpec, ModuleDescription, Options, Report, Suite};
use abmod_core::{AbError, Rational};
use clap::{Args, Parser, Subcommand};

/// Exact computations with regular (a,b)-modules.
///
/// Exit codes: 0 success or all checks passed, 1 error or failed check,
/// 2 inconclusive.
#[derive(Parser, Debug)]
#[command(name = "abmod", version)]
struct Cli {
    /// Working precision: powers of b kept (default: the file's truncation).
    #[arg(long, global = true)]
    trunc: Option<usize>,
    /// Cap on fixed-point iterations (default: 2*rank + 4).
    #[arg(long, global = true)]
    max_iter: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rank, simple-pole flag and regularity verdict.
    Info { file: PathBuf },
    /// Bernstein polynomial (from the saturation), or with --dual the dual
    /// one (from the biggest simple-pole submodule).
    Bernstein {
        file: PathBuf,
        #[arg(long)]
        dual: bool,
    },
    /// Pole predictions: the smallest root alpha of each class modulo Z
    /// gives a pole at -n - alpha of order at least its multiplicity.
    Poles {
        file: PathBuf,
        #[arg(long)]
        n: u32,
    },
    /// Run a verification suite on a file or on seeded random modules.
    Check(CheckArgs),
    /// Write a module description.
    Gen(GenArgs),
    /// Lift a Jordan chain for the residue eigenvalue beta on the biggest
    /// simple-pole submodule.
    Jordan {
        file: PathBuf,
        #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
        beta: Rational,
        #[arg(long)]
        d: usize,
    },
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// Module description; omit when using --random.
    #[arg(required_unless_present = "random", conflicts_with = "random")]
    file: Option<PathBuf>,
    /// Maximum rank, base seed and number of random cases.
    #[arg(long, num_args = 3, value_names = ["K", "SEED", "COUNT"])]
    random: Option<Vec<u64>>,
    #[arg(long, value_enum)]
    suite: Suite,
    /// Duality shift; by default read off from the two Bernstein polynomials
    /// (bidual: 0, 1 and 2).
    #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
    delta: Option<Rational>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct GenWhat {
    /// Pham exponents a1,...,an (each at least 2).
    #[arg(long, value_delimiter = ',')]
    pham: Option<Vec<u32>>,
    /// Jordan block J(beta, d).
    #[arg(long, num_args = 2, value_names = ["BETA", "D"], allow_hyphen_values = true)]
    jordan: Option<Vec<String>>,
    /// Rank-one module E_lambda.
    #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
    elambda: Option<Rational>,
    /// Random regular module of rank K from SEED.
    #[arg(long, num_args = 2, value_names = ["K", "SEED"])]
    random: Option<Vec<u64>>,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[command(flatten)]
    what: GenWhat,
    /// Write to this file instead of standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    Core(AbError),
    Other(String),
}

impl From<AbError> for Failure {
    fn from(e: AbError) -> Self {
        Failure::Core(e)
    }
}

fn read_description(path: &Path) -> Result<ModuleDescription, Failure> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Failure::Other(format!("stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Other(format!("{}: {e}", path.display())))?;
    }
    Ok(ModuleDescription::parse(&text)?)
}

fn gen_spec(what: GenWhat) -> Result<GenSpec, Failure> {
    if let Some(exps) = what.pham {
        return Ok(GenSpec::Pham(exps));
    }
    if let Some(j) = what.jordan {
        let beta = parse_rational(&j[0]).map_err(Failure::Other)?;
        let d = j[1]
            .parse()
            .map_err(|e| Failure::Other(format!("invalid block size {:?}: {e}", j[1])))?;
        return Ok(GenSpec::Jordan(beta, d));
    }
    if let Some(l) = what.elambda {
        return Ok(GenSpec::ELambda(l));
    }
    let r = what.random.expect("clap requires one generator");
    Ok(GenSpec::Random(r[0] as usize, r[1]))
}

enum Outcome {
    Report(Report),
    /// `gen` prints the description itself.
    Generated,
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Info { .. } => "info",
        Command::Bernstein { .. } => "bernstein",
        Command::Poles { .. } => "poles",
        Command::Check(_) => "check",
        Command::Gen(_) => "gen",
        Command::Jordan { .. } => "jordan",
    }
}

fn run(command: Command, opts: &Options) -> Result<Outcome, Failure> {
    let report = match command {
        Command::Info { file } => commands::info(&read_description(&file)?, opts)?,
        Command::Bernstein { file, dual } => {
            commands::bernstein_cmd(&read_description(&file)?, dual, opts)?
        }
        Command::Poles { file, n } => commands::poles(&read_description(&file)?, n, opts)?,
        Command::Jordan { file, beta, d } => {
            commands::jordan(&read_description(&file)?, &beta, d, opts)?
        }
        Command::Check(args) => {
            let input = match (args.file, args.random) {
                (Some(f), _) => CheckInput::File(read_description(&f)?),
                (None, Some(r)) => CheckInput::Random {
                    rank: r[0] as usize,
                    seed: r[1],
                    count: r[2] as usize,
                },
                (None, None) => unreachable!("clap requires a file or --random"),
            };
            commands::check(&input, args.suite, args.delta.as_ref(), opts)?
        }
        Command::Gen(args) => {
            let text = commands::generate(&gen_spec(args.what)?, opts.trunc)?.print();
            match args.output {
                Some(path) => std::fs::write(&path, &text)
                    .map_err(|e| Failure::Other(format!("{}: {e}", path.display())))?,
                None => print!("{text}"),
            }
            return Ok(Outcome::Generated);
        }
    };
    Ok(Outcome::Report(report))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = Options {
        trunc: cli.trunc,
        max_iter: cli.max_iter,
    };
    let name = command_name(&cli.command);
    match run(cli.command, &opts) {
        Ok(Outcome::Report(report)) => {
            print!("{}", report.render());
            ExitCode::from(report.status.exit_code() as u8)
        }
        Ok(Outcome::Generated) => ExitCode::SUCCESS,
        Err(Failure::Core(e)) => {
            print!("{}", commands::error_report(name, &e).render());
            eprintln!("abmod {name}: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Other(msg)) => {
            eprintln!("abmod {name}: {msg}");
            ExitCode::from(1)
        }
    }
}
