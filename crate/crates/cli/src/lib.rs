//! Command-line driver: verification suites, matrix and table dumps.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use heisweil::heisenberg::{HeisenbergGroup, SpecialIso};
use heisweil::mackey::{zoo, TableGroup};
use heisweil::prounipotent::{sqrt, CongruenceGroup};
use heisweil::reps::{heisenberg_rep, Model};
use heisweil::verify::{run_mackey, run_suite, run_table_group, Format, Report, RunConfig, MACKEY_SCOPES};
use heisweil::weil::{standard_lift, VerifyMode};
use heisweil::Error;
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "heisweil", version, about = "Exact Heisenberg and Weil representation checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    #[arg(long, default_value_t = 3)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    ell: usize,
    /// Precision: matrices are taken modulo p^K.
    #[arg(long = "K", default_value_t = 4)]
    precision: u32,
    /// Congruence depth: elements are congruent to 1 mod p^k0.
    #[arg(long, default_value_t = 1)]
    k0: u32,
    /// exhaustive, relations or sampled.
    #[arg(long, default_value = "exhaustive")]
    mode: String,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// json or csv.
    #[arg(long, default_value = "json")]
    format: String,
    #[arg(long)]
    output: Option<PathBuf>,
}

impl Common {
    fn config(&self) -> Result<RunConfig, Error> {
        Ok(RunConfig {
            p: self.p,
            ell: self.ell,
            precision: self.precision,
            k0: self.k0,
            mode: self.mode.parse::<VerifyMode>()?,
            samples: self.samples,
            seed: self.seed,
            format: self.format.parse::<Format>()?,
            output: self.output.as_ref().map(|p| p.display().to_string()),
        })
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one suite, or all of them.
    Verify {
        /// heisenberg, reps, weil, mackey, sqrt or all.
        suite: String,
        #[command(flatten)]
        common: Common,
    },
    /// Heisenberg group checks and element dumps.
    Heisenberg {
        #[command(subcommand)]
        verb: Verb,
    },
    /// Heisenberg representation checks and matrix dumps.
    Reps {
        #[command(subcommand)]
        verb: RepsVerb,
    },
    /// Weil lift checks and matrix dumps.
    Weil {
        #[command(subcommand)]
        verb: WeilVerb,
    },
    /// Mackey-theory checks on finite groups and table-group files.
    Mackey {
        #[command(subcommand)]
        verb: MackeyVerb,
    },
    /// Square root of a matrix in 1 + p^k0 M_n(Z/p^K).
    Sqrt {
        #[command(subcommand)]
        verb: Option<SqrtVerb>,
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Row-major JSON matrix, e.g. [[4]].
        #[arg(long)]
        matrix: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Same as `verify all`.
    All {
        #[command(subcommand)]
        verb: Verb,
    },
}

#[derive(Subcommand, Debug)]
enum Verb {
    Verify {
        #[command(flatten)]
        common: Common,
    },
    Dump {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand, Debug)]
enum SqrtVerb {
    Verify {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand, Debug)]
enum RepsVerb {
    Verify {
        #[command(flatten)]
        common: Common,
    },
    /// The Heisenberg representation as a list of {element, matrix}.
    Dump {
        #[arg(long, default_value_t = 1)]
        zeta: u64,
        #[arg(long, default_value = "minus")]
        model: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand, Debug)]
enum WeilVerb {
    Verify {
        #[command(flatten)]
        common: Common,
    },
    /// The Weil lift: one matrix per element of Sp(W).
    Dump {
        #[arg(long, default_value_t = 1)]
        zeta: u64,
        #[arg(long, default_value = "minus")]
        model: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand, Debug)]
enum MackeyVerb {
    Verify {
        /// all, groups or semidirect.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Check a table-group file instead of the built-in groups.
        #[arg(long)]
        table: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Write a built-in group as a table-group file.
    Dump {
        /// Group name; omit to list the built-in groups.
        #[arg(long)]
        group: Option<String>,
        #[command(flatten)]
        common: Common,
    },
}

enum Outcome {
    Report(Report),
    Data(Value, Common),
}

fn usage_error(e: &Error) -> bool {
    matches!(e, Error::Guard(_) | Error::InvalidArgument(_) | Error::Parse(_) | Error::Dimension(_) | Error::NotMember(_))
}

/// Parses `argv` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(Outcome::Report(r)) => match emit(&r.render(), r.config.output.as_deref()) {
            Ok(()) if r.passed() => EXIT_OK,
            Ok(()) => EXIT_FAILED,
            Err(e) => fail(&e),
        },
        Ok(Outcome::Data(v, common)) => {
            let text = serde_json::to_string_pretty(&v).expect("json") + "\n";
            match emit(&text, common.output.as_ref().and_then(|p| p.to_str())) {
                Ok(()) => EXIT_OK,
                Err(e) => fail(&e),
            }
        }
        Err(e) => fail(&e),
    }
}

fn fail(e: &Error) -> i32 {
    eprintln!("error: {e}");
    if usage_error(e) {
        EXIT_USAGE
    } else {
        EXIT_FAILED
    }
}

fn emit(text: &str, path: Option<&str>) -> Result<(), Error> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Parse(format!("{p}: {e}"))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn dispatch(cmd: Command) -> Result<Outcome, Error> {
    match cmd {
        Command::Verify { suite, common } => Ok(Outcome::Report(run_suite(&suite, &common.config()?)?)),
        Command::All { verb: Verb::Verify { common } | Verb::Dump { common } } => Ok(Outcome::Report(run_suite("all", &common.config()?)?)),
        Command::Heisenberg { verb: Verb::Verify { common } } => Ok(Outcome::Report(run_suite("heisenberg", &common.config()?)?)),
        Command::Heisenberg { verb: Verb::Dump { common } } => Ok(Outcome::Data(heisenberg_dump(&common)?, common)),
        Command::Reps { verb: RepsVerb::Verify { common } } => Ok(Outcome::Report(run_suite("reps", &common.config()?)?)),
        Command::Reps { verb: RepsVerb::Dump { zeta, model, common } } => {
            let hg = HeisenbergGroup::standard(common.p, common.ell)?;
            let tau = heisenberg_rep(&hg, zeta, model.parse::<Model>()?)?;
            Ok(Outcome::Data(tau.to_json(|h| hg.element(h).to_json()), common))
        }
        Command::Weil { verb: WeilVerb::Verify { common } } => Ok(Outcome::Report(run_suite("weil", &common.config()?)?)),
        Command::Weil { verb: WeilVerb::Dump { zeta, model, common } } => {
            let mut cfg = common.config()?;
            cfg.mode = VerifyMode::Relations;
            cfg.validate("weil")?;
            let hg = HeisenbergGroup::standard(common.p, common.ell)?;
            Ok(Outcome::Data(standard_lift(&hg, zeta, model.parse::<Model>()?)?.to_json(), common))
        }
        Command::Mackey { verb: MackeyVerb::Verify { suite, table, common } } => {
            let cfg = common.config()?;
            match table {
                Some(path) => Ok(Outcome::Report(run_table_group(&cfg, &TableGroup::load(&path)?)?)),
                None if MACKEY_SCOPES.contains(&suite.as_str()) => Ok(Outcome::Report(run_mackey(&cfg, &suite)?)),
                None => Err(Error::InvalidArgument(format!("unknown mackey suite {suite}; expected one of {MACKEY_SCOPES:?}"))),
            }
        }
        Command::Mackey { verb: MackeyVerb::Dump { group, common } } => {
            let groups = zoo()?;
            let v = match group {
                None => json!(groups.iter().map(|g| json!({ "name": g.name, "order": heisweil::group::FiniteGroup::order(g) })).collect::<Vec<_>>()),
                Some(name) => groups.iter().find(|g| g.name == name).map(TableGroup::to_json).ok_or_else(|| Error::InvalidArgument(format!("unknown group {name}")))?,
            };
            Ok(Outcome::Data(v, common))
        }
        Command::Sqrt { verb: Some(SqrtVerb::Verify { common }), .. } => Ok(Outcome::Report(run_suite("sqrt", &common.config()?)?)),
        Command::Sqrt { verb: None, n, matrix, common } => {
            let text = matrix.ok_or_else(|| Error::InvalidArgument("--matrix is required".into()))?;
            let rows: Vec<Vec<i64>> = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("--matrix: {e}")))?;
            if rows.len() != n {
                return Err(Error::Dimension(format!("--matrix has {} rows, expected {n}", rows.len())));
            }
            let g = CongruenceGroup::new(n, common.p, common.precision, common.k0)?;
            let r = sqrt(&g.element_from_rows(&rows)?)?;
            Ok(Outcome::Data(r.to_json(), common))
        }
    }
}

fn heisenberg_dump(common: &Common) -> Result<Value, Error> {
    let hg = HeisenbergGroup::standard(common.p, common.ell)?;
    let space = hg.space();
    let pol = space.standard_polarization();
    Ok(json!({
        "p": common.p,
        "ell": common.ell,
        "order": heisweil::group::FiniteGroup::order(&hg),
        "elements": (0..heisweil::group::FiniteGroup::order(&hg)).map(|h| hg.element(h).to_json()).collect::<Vec<_>>(),
        "standard_polarization": { "plus": pol.plus, "minus": pol.minus },
        "special_isomorphisms": SpecialIso::all(space).iter().map(|nu| json!({ "offset": nu.offset })).collect::<Vec<_>>(),
    }))
}
