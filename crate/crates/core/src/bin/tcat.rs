//! Batch front end: load categories and functors from JSON, run the
//! constructions, and emit artifacts plus deterministic reports.
//!
//! Exit codes: 0 success (or "true"), 1 validation failure (or "false"),
//! 2 usage or schema error, 3 enumeration cap exceeded.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use tcat_core::cat::{
    validate_category, validate_functor, CatError, TCategory, TFunctor,
};
use tcat_core::factor::{
    factorize, orthogonality_witness, perfect_report, street_walters_oracle, FactorError,
};
use tcat_core::finset::FinMap;
use tcat_core::json::{
    category_from_str, category_to_string, functor_from_str, functor_to_string, ObjectMapDoc,
};
use tcat_core::limits::{cartesian_lifting, pullback_tcat};
use tcat_core::monad::Monad;

#[derive(Parser)]
#[command(name = "tcat", version, about = "finite T-category engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MonadArg {
    Identity,
    List,
}

impl From<MonadArg> for Monad {
    fn from(m: MonadArg) -> Monad {
        match m {
            MonadArg::Identity => Monad::Identity,
            MonadArg::List => Monad::List,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check the category axioms of a category file
    Validate {
        file: PathBuf,
        /// re-check the redundant equations as well
        #[arg(long)]
        audit: bool,
        /// require the file to use this monad
        #[arg(long)]
        monad: Option<MonadArg>,
    },
    /// Check the functor conditions of a functor file
    ValidateFunctor {
        file: PathBuf,
        #[arg(long)]
        audit: bool,
        #[arg(long)]
        monad: Option<MonadArg>,
    },
    /// Decide whether a functor is perfect (a discrete opfibration)
    IsPerfect {
        file: PathBuf,
        #[arg(long)]
        monad: Option<MonadArg>,
    },
    /// Factor a functor into a unit followed by a perfect functor
    Factorize {
        file: PathBuf,
        /// output directory for P.json, r.json, p.json and report.txt
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// re-check codomain well-definedness over every quotient lift
        #[arg(long)]
        audit: bool,
        #[arg(long)]
        monad: Option<MonadArg>,
    },
    /// Pull back two functors with a common codomain
    Pullback {
        left: PathBuf,
        right: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long)]
        audit: bool,
        #[arg(long)]
        monad: Option<MonadArg>,
    },
    /// Cartesian lifting of a category along an object map
    Lift {
        category: PathBuf,
        along: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long)]
        monad: Option<MonadArg>,
    },
    /// Comma-category fibration of an identity-monad functor
    Oracle {
        file: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long)]
        monad: Option<MonadArg>,
    },
    /// Check unique-diagonal orthogonality of two functors
    Orthogonal {
        left: PathBuf,
        right: PathBuf,
        /// bound on enumerated functor candidates
        #[arg(long, default_value_t = 1_000_000)]
        cap: u64,
        #[arg(long)]
        monad: Option<MonadArg>,
    },
    /// Enumerate all functors between two categories
    Hom {
        source: PathBuf,
        target: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        cap: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long)]
        monad: Option<MonadArg>,
    },
}

enum CliError {
    Schema(String),
    CapExceeded(String),
}

impl From<tcat_core::json::SchemaError> for CliError {
    fn from(e: tcat_core::json::SchemaError) -> Self {
        CliError::Schema(e.to_string())
    }
}

impl From<CatError> for CliError {
    fn from(e: CatError) -> Self {
        match e {
            CatError::CapExceeded { .. } => CliError::CapExceeded(e.to_string()),
            other => CliError::Schema(other.to_string()),
        }
    }
}

impl From<FactorError> for CliError {
    fn from(e: FactorError) -> Self {
        match e {
            FactorError::Cat(CatError::CapExceeded { .. }) => {
                CliError::CapExceeded(e.to_string())
            }
            other => CliError::Schema(other.to_string()),
        }
    }
}

fn read_to_string(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Schema(format!("cannot read {}: {e}", path.display())))
}

fn load_category(path: &Path, monad: Option<MonadArg>) -> Result<TCategory, CliError> {
    let cat = category_from_str(&read_to_string(path)?)?;
    check_monad(cat.monad(), monad, path)?;
    Ok(cat)
}

fn load_functor(path: &Path, monad: Option<MonadArg>) -> Result<TFunctor, CliError> {
    let f = functor_from_str(&read_to_string(path)?)?;
    check_monad(f.source().monad(), monad, path)?;
    Ok(f)
}

fn check_monad(found: Monad, expected: Option<MonadArg>, path: &Path) -> Result<(), CliError> {
    if let Some(expected) = expected {
        let expected: Monad = expected.into();
        if found != expected {
            return Err(CliError::Schema(format!(
                "{} uses the {found} monad but --monad {expected} was requested",
                path.display()
            )));
        }
    }
    Ok(())
}

/// Write via a sibling temp file and rename, so partial artifacts never
/// appear under the final name.
fn write_atomic(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::Schema(format!("cannot create {}: {e}", dir.display())))?;
    let tmp = dir.join(format!(".{name}.tmp"));
    let final_path = dir.join(name);
    fs::write(&tmp, contents)
        .map_err(|e| CliError::Schema(format!("cannot write {}: {e}", tmp.display())))?;
    fs::rename(&tmp, &final_path)
        .map_err(|e| CliError::Schema(format!("cannot move into place: {e}")))?;
    Ok(())
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Validate { file, audit, monad } => {
            let cat = load_category(&file, monad)?;
            let report = validate_category(&cat, audit)?;
            print!("{report}");
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::ValidateFunctor { file, audit, monad } => {
            let f = load_functor(&file, monad)?;
            let report = validate_functor(&f, audit)?;
            print!("{report}");
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::IsPerfect { file, monad } => {
            let f = load_functor(&file, monad)?;
            let report = perfect_report(&f).map_err(CliError::from)?;
            print!("{report}");
            Ok(if report.ok() { 0 } else { 1 })
        }
        Command::Factorize { file, out, audit, monad } => {
            let f = load_functor(&file, monad)?;
            let fr = factorize(&f, audit)?;
            let mut report = fr.report();
            report.push_str("  checks:\n");
            let round_trip = fr.unit.then(&fr.perfect).map_err(CliError::from)? == f;
            report.push_str(&format!("    p . r = f: {}\n", verdict(round_trip)));
            let perfect = tcat_core::factor::is_perfect(&fr.perfect).map_err(CliError::from)?;
            report.push_str(&format!("    p perfect: {}\n", verdict(perfect)));
            let p_valid = validate_category(&fr.mid, audit)?.passed();
            report.push_str(&format!("    P valid: {}\n", verdict(p_valid)));
            let r_valid = validate_functor(&fr.unit, audit)?.passed();
            report.push_str(&format!("    r valid: {}\n", verdict(r_valid)));
            let p_fun_valid = validate_functor(&fr.perfect, audit)?.passed();
            report.push_str(&format!("    p valid: {}\n", verdict(p_fun_valid)));
            print!("{report}");
            if let Some(dir) = out {
                write_atomic(&dir, "P.json", &category_to_string(&fr.mid))?;
                write_atomic(&dir, "r.json", &functor_to_string(&fr.unit))?;
                write_atomic(&dir, "p.json", &functor_to_string(&fr.perfect))?;
                write_atomic(&dir, "report.txt", &report)?;
            }
            Ok(if round_trip && perfect && p_valid && r_valid && p_fun_valid {
                0
            } else {
                1
            })
        }
        Command::Pullback { left, right, out, audit, monad } => {
            let f = load_functor(&left, monad)?;
            let g = load_functor(&right, monad)?;
            let pb = pullback_tcat(&f, &g)?;
            let mut report = format!(
                "pullback report\n  |P0| = {}, |P1| = {}\n",
                pb.apex.objects().len(),
                pb.apex.morphisms().len()
            );
            let failures = if audit { pb.verify_steps()? } else { Vec::new() };
            if audit {
                report.push_str(&format!(
                    "  step equalities: {}\n",
                    if failures.is_empty() { "pass" } else { "FAIL" }
                ));
                for line in &failures {
                    report.push_str(&format!("    {line}\n"));
                }
            }
            print!("{report}");
            if let Some(dir) = out {
                write_atomic(&dir, "apex.json", &category_to_string(&pb.apex))?;
                write_atomic(&dir, "leg_left.json", &functor_to_string(&pb.leg_left))?;
                write_atomic(&dir, "leg_right.json", &functor_to_string(&pb.leg_right))?;
                write_atomic(&dir, "report.txt", &report)?;
            }
            Ok(if failures.is_empty() { 0 } else { 1 })
        }
        Command::Lift { category, along, out, monad } => {
            let cat = std::sync::Arc::new(load_category(&category, monad)?);
            let doc: ObjectMapDoc = serde_json::from_str(&read_to_string(&along)?)
                .map_err(|e| CliError::Schema(e.to_string()))?;
            let apex = tcat_core::finset::FinSet::new("objects", doc.objects.iter().cloned())
                .map_err(|e| CliError::Schema(e.to_string()))?;
            let alpha0 = FinMap::from_pairs(
                apex,
                cat.objects().clone(),
                doc.map.iter().map(|(k, v)| (k.as_str(), v.as_str())),
            )
            .map_err(|e| CliError::Schema(e.to_string()))?;
            let lift = cartesian_lifting(&cat, &alpha0)?;
            println!(
                "lifted category: {} objects, {} morphisms",
                lift.lifted.objects().len(),
                lift.lifted.morphisms().len()
            );
            if let Some(dir) = out {
                write_atomic(&dir, "lifted.json", &category_to_string(&lift.lifted))?;
                write_atomic(&dir, "leg.json", &functor_to_string(&lift.leg))?;
            }
            Ok(0)
        }
        Command::Oracle { file, out, monad } => {
            let f = load_functor(&file, monad)?;
            let oracle = street_walters_oracle(&f)?;
            let mut report = String::from("oracle fibration\n  fiber sizes:\n");
            for b_obj in f.target().objects().iter() {
                report.push_str(&format!(
                    "    {b_obj}: {}\n",
                    oracle.proj.f0().preimage(b_obj).len()
                ));
            }
            print!("{report}");
            if let Some(dir) = out {
                write_atomic(&dir, "total.json", &category_to_string(&oracle.total))?;
                write_atomic(&dir, "proj.json", &functor_to_string(&oracle.proj))?;
                write_atomic(&dir, "report.txt", &report)?;
            }
            Ok(0)
        }
        Command::Orthogonal { left, right, cap, monad } => {
            let e = load_functor(&left, monad)?;
            let m = load_functor(&right, monad)?;
            match orthogonality_witness(&e, &m, cap)? {
                None => {
                    println!("orthogonal: every square has a unique diagonal");
                    Ok(0)
                }
                Some(w) => {
                    println!("not orthogonal: a square admits {} diagonals", w.fillers);
                    Ok(1)
                }
            }
        }
        Command::Hom { source, target, cap, out, monad } => {
            let a = std::sync::Arc::new(load_category(&source, monad)?);
            let b = std::sync::Arc::new(load_category(&target, monad)?);
            let fs = tcat_core::cat::enumerate_functors(&a, &b, cap)?;
            println!("{} functors", fs.len());
            if let Some(dir) = out {
                let docs: Vec<_> =
                    fs.iter().map(tcat_core::json::functor_to_doc).collect();
                let text = serde_json::to_string_pretty(&docs)
                    .map_err(|e| CliError::Schema(e.to_string()))?;
                write_atomic(&dir, "functors.json", &text)?;
            }
            Ok(0)
        }
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(CliError::Schema(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::CapExceeded(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
