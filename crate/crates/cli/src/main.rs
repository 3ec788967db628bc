//! `ecomb`: command-line front end. Exit status 0 for definite answers, 2
//! for bounded evidence, 1 for usage and input errors, 3 when a resource
//! cap is hit.

mod commands;
mod families;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use commands::{Caps, Report, Status};
use families::{CardsetCmd, ClosureArgs, SpectrumArgs};

#[derive(Parser)]
#[command(name = "ecomb", version, about = "Finite model theory workbench for E- and P-combinations")]
struct Cli {
    /// Largest quantifier rank accepted.
    #[arg(long, global = true, default_value_t = 6)]
    rank_cap: usize,
    /// Largest model size searched.
    #[arg(long, global = true, default_value_t = 12)]
    size_cap: usize,
    /// Reserved; every computation is deterministic.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a formula in a structure.
    Eval {
        #[arg(long)]
        structure: PathBuf,
        /// Formula text, or @file.
        #[arg(long)]
        formula: String,
        /// Values of free variables, `x=0,y=1`.
        #[arg(long)]
        assign: Option<String>,
    },
    /// Count n-types (automorphism orbits of n-tuples).
    Types {
        #[arg(long)]
        structure: PathBuf,
        #[arg(short, default_value_t = 1)]
        n: usize,
        /// Also count rank-q EF classes of n-tuples.
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long)]
        list: bool,
    },
    /// The Boolean algebra of definable n-ary sets and its cube.
    Algebra {
        #[arg(long)]
        structure: PathBuf,
        #[arg(short, default_value_t = 1)]
        n: usize,
        /// Distance of two elements given as type lists, `bot` or `top`.
        #[arg(long, num_args = 2, value_names = ["U", "V"])]
        rho: Vec<String>,
        #[arg(long)]
        extent: Option<String>,
        #[arg(long)]
        elements: bool,
    },
    /// Decide isomorphism of two structures.
    Iso { a: PathBuf, b: PathBuf },
    /// Build an E- or P-combination.
    Combine {
        /// e, p, pd or pdr.
        #[arg(long)]
        mode: String,
        #[arg(required = true)]
        structures: Vec<PathBuf>,
        /// Shared element `block.elem=block.elem` (mode p).
        #[arg(long)]
        overlap: Vec<String>,
        /// Structure placed outside every block.
        #[arg(long)]
        extra: Option<PathBuf>,
        /// Print only the part outside every block.
        #[arg(long)]
        extent: bool,
    },
    /// Search for finite models of a sentence.
    FindModel {
        #[arg(long)]
        formula: String,
        #[arg(long, conflicts_with = "spectrum")]
        size: Option<usize>,
        #[arg(long)]
        spectrum: Option<usize>,
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = 10_000_000)]
        max_nodes: u64,
    },
    /// Closure of a family of theories.
    Closure {
        #[arg(long)]
        family: PathBuf,
        #[arg(long, default_value = "e")]
        op: String,
        #[arg(long)]
        least: bool,
        #[arg(long)]
        classify: bool,
        /// Theory `T0:n`, `T0inf`, `limit:<name>` or a structure file.
        #[arg(long)]
        accumulation: Option<String>,
        #[arg(long)]
        approximable: Option<String>,
        #[arg(long, default_value_t = 3)]
        rank: usize,
        #[arg(long, default_value_t = 6)]
        probe: usize,
        #[arg(long, default_value_t = 6)]
        size: usize,
    },
    /// e-spectrum of a family relative to a class of theories.
    Spectrum {
        #[arg(long)]
        family: PathBuf,
        #[arg(long, default_value = "all")]
        relative: String,
        /// Comma-separated cells partitioning the relative class.
        #[arg(long)]
        laws: Option<String>,
        /// Values of the disjoint P-closure instead.
        #[arg(long)]
        p_disjoint: bool,
        /// Accept lower bounds from probing when no exact closure exists.
        #[arg(long)]
        bounded: bool,
        #[arg(long, default_value_t = 3)]
        rank: usize,
        #[arg(long, default_value_t = 6)]
        probe: usize,
    },
    /// Cardinality sets and profiles.
    Cardset {
        #[command(subcommand)]
        cmd: CardsetSub,
    },
    /// Semi-isolation classes of selected elements.
    Semiisolate {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long, default_value_t = 2)]
        rank: usize,
        /// `all`, `pinfty` or an element list.
        #[arg(long, default_value = "all")]
        select: String,
    },
}

#[derive(Subcommand)]
enum CardsetSub {
    /// Sums of generators, `--k 2,3`.
    Gen {
        #[arg(long)]
        k: String,
        #[arg(long, default_value_t = 30)]
        bound: u64,
        /// Union of the progressions kZ+ instead of their sum closure.
        #[arg(long)]
        literal_union: bool,
    },
    /// Minimal generators of a sample.
    Recover {
        #[arg(long)]
        sample: String,
        #[arg(long)]
        bound: u64,
    },
    /// Divisibility check for unassigned-part cardinalities.
    Validate {
        #[arg(long)]
        k: String,
        #[arg(long)]
        complete: bool,
    },
    /// c, cbar and chat of a family under an operator.
    Profile {
        #[arg(long)]
        family: PathBuf,
        #[arg(long, default_value = "pdr")]
        op: String,
    },
    /// Empty-language family whose cbar is the complement of a set.
    Complement {
        #[arg(long)]
        set: String,
    },
}

fn run(cli: Cli) -> Report {
    let caps = Caps { rank: cli.rank_cap, size: cli.size_cap };
    match cli.cmd {
        Cmd::Eval { structure, formula, assign } => commands::eval(&structure, &formula, assign.as_deref()),
        Cmd::Types { structure, n, rank, list } => commands::types(&structure, n, rank, list, caps),
        Cmd::Algebra { structure, n, rho, extent, elements } => {
            commands::algebra(&structure, n, &rho, extent.as_deref(), elements)
        }
        Cmd::Iso { a, b } => commands::iso(&a, &b),
        Cmd::Combine { mode, structures, overlap, extra, extent } => {
            commands::combine(&mode, &structures, &overlap, extra.as_ref(), extent)
        }
        Cmd::FindModel { formula, size, spectrum, all, max_nodes } => {
            commands::find_model(&formula, size, spectrum, all, max_nodes, caps)
        }
        Cmd::Closure { family, op, least, classify, accumulation, approximable, rank, probe, size } => {
            families::closure(
                &ClosureArgs { family, op, least, classify, accumulation, approximable, rank, probe, size },
                caps,
            )
        }
        Cmd::Spectrum { family, relative, laws, p_disjoint, bounded, rank, probe } => {
            families::spectrum(&SpectrumArgs { family, relative, laws, p_disjoint, bounded, rank, probe }, caps)
        }
        Cmd::Cardset { cmd } => families::cardset(&match cmd {
            CardsetSub::Gen { k, bound, literal_union } => CardsetCmd::Gen { k, bound, literal_union },
            CardsetSub::Recover { sample, bound } => CardsetCmd::Recover { sample, bound },
            CardsetSub::Validate { k, complete } => CardsetCmd::Validate { k, complete },
            CardsetSub::Profile { family, op } => CardsetCmd::Profile { family, op },
            CardsetSub::Complement { set } => CardsetCmd::Complement { set },
        }),
        Cmd::Semiisolate { structure, rank, select } => commands::semiisolate(&structure, rank, &select, caps),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok((text, status)) => {
            print!("{text}");
            ExitCode::from(match status {
                Status::Definite => 0,
                Status::Bounded => 2,
            })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                ecomb::Error::CapExceeded(_) | ecomb::Error::BudgetExhausted(_) => 3,
                _ => 1,
            })
        }
    }
}
