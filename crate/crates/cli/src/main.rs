mod config;
mod suite;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hfdlab::analysis::analyze;
use hfdlab::blockmonoid::enumerate_atoms;
use hfdlab::certify::{classify_exact, CertifyOptions};
use hfdlab::localization::{claim_star_witness, localized_lattice, nagata_instance_check, LocalizationSetup};
use hfdlab::quadratic::{detect_radicand, parse_polynomial, verify_atomic_equality, QuadraticPolynomial};
use hfdlab::relation::relations_among;
use hfdlab::report::{
    atoms_csv, equality_json, instance_json, to_json_string, InsertionResult, InstanceReport, LocalizationReport,
};
use hfdlab::survey::{default_ohfd_bound, run_survey, SurveyCheck, SurveyConfig, DEFAULT_CEILING};
use hfdlab::{Error, DEFAULT_CAP};

use config::{split_list, split_literals, Format, RunConfig};

#[derive(Parser)]
#[command(name = "hfdlab", version, about = "Good and bad atoms in block monoids of zero-sum sequences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Atoms, relations, classification and predicates for one class subset.
    Analyze(AnalyzeArgs),
    /// Exhaustive scan over all class subsets of small groups.
    Survey(SurveyArgs),
    /// The fixed worked-example suite.
    VerifyExamples(OutArgs),
    /// Checks an equality of products in Z[√-d] or Z[√-d][X].
    CheckEquality(EqualityArgs),
}

#[derive(Args)]
struct OutArgs {
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Cyclic factors, e.g. `6` or `2,2`.
    #[arg(long)]
    group: Option<String>,
    /// Classes, e.g. `2,3,4`, or `1:0,0:1` for rank 2.
    #[arg(long)]
    classes: Option<String>,
    /// Moduli for the congruence variants, e.g. `2,3`.
    #[arg(long)]
    r: Option<String>,
    /// Atom literals generating S, e.g. `(3,3)`.
    #[arg(long)]
    localize_at: Option<String>,
    /// OHFD scan bound (at least twice the longest atom).
    #[arg(long)]
    bound: Option<usize>,
    /// Content bound for the insertion-witness search; defaults to 4·|G|.
    #[arg(long)]
    claim_bound: Option<usize>,
    #[arg(long, env = "HFDLAB_CAP", default_value_t = DEFAULT_CAP)]
    cap: usize,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Setup file with group, classes and S generators.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Skip listing every irredundant relation.
    #[arg(long)]
    no_relations: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SurveyArgs {
    #[arg(long, default_value_t = 6)]
    max_order: u32,
    #[arg(long, default_value = "2,3,4")]
    r: String,
    /// Checks to run; all when omitted. Repeatable.
    #[arg(long)]
    check: Vec<String>,
    /// OHFD scan bound; defaults to max(8, 2·longest atom) per instance.
    #[arg(long)]
    bound: Option<usize>,
    #[arg(long, env = "HFDLAB_CAP", default_value_t = DEFAULT_CAP)]
    cap: usize,
    #[arg(long, default_value_t = DEFAULT_CEILING)]
    ceiling: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EqualityArgs {
    /// Comma-separated factors, e.g. `3,3,3,3`.
    #[arg(long)]
    lhs: String,
    #[arg(long)]
    rhs: String,
    /// The d of Z[√-d]; read from an `i<d>` term when omitted.
    #[arg(long)]
    d: Option<i64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Property(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Lib(Error::InvalidParameter(format!("cannot write {}: {e}", path.display())))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_moduli(s: &str) -> Result<Vec<u32>, Error> {
    split_list(s)
        .iter()
        .map(|p| p.parse::<u32>().map_err(|_| Error::Parse(format!("bad integer {p:?}"))))
        .collect()
}

fn run_analyze(args: AnalyzeArgs) -> Result<(), Failure> {
    let mut cfg = RunConfig {
        moduli: args.group.as_deref().map(parse_moduli).transpose()?.unwrap_or_default(),
        classes: args.classes.as_deref().map(split_list).unwrap_or_default(),
        r: args.r.as_deref().map(parse_moduli).transpose()?.unwrap_or_default(),
        generators: args.localize_at.as_deref().map(split_literals).transpose()?.unwrap_or_default(),
        ohfd_bound: args.bound,
        claim_bound: args.claim_bound,
        cap: args.cap,
        format: args.format,
        relations: !args.no_relations,
    };
    if let Some(path) = &args.config {
        cfg.merge_file(path)?;
    }
    cfg.validate()?;
    let cs = cfg.class_subset()?;
    let t = enumerate_atoms(&cs);
    let mut moduli = cfg.r.clone();
    moduli.sort_unstable();
    moduli.dedup();
    let c = classify_exact(&t, &moduli, &CertifyOptions { witness_bound: None, cap: cfg.cap })?;
    if cfg.format == Format::Csv {
        return emit(&args.out, &atoms_csv(&t, &c));
    }
    let all: Vec<usize> = (0..t.len()).collect();
    let relations = if cfg.relations { Some(relations_among(&t, &all, cfg.cap)?) } else { None };
    let bound = if t.is_empty() { None } else { Some(cfg.ohfd_bound.unwrap_or_else(|| default_ohfd_bound(&t))) };
    let analysis = analyze(&t, &c, relations.as_deref(), bound)?;

    let setup = if cfg.generators.is_empty() {
        None
    } else {
        let gens = cfg
            .generators
            .iter()
            .map(|lit| {
                let s = cs.parse_sequence(lit)?;
                t.position(&s).ok_or_else(|| Error::InvalidSequence(format!("{lit} is not an atom")))
            })
            .collect::<Result<Vec<_>, Error>>()?;
        Some(LocalizationSetup::new(&t, &c, &gens)?)
    };
    let localization = match &setup {
        None => None,
        Some(setup) => {
            let nagata = nagata_instance_check(&t, setup, &moduli)?;
            let mut insertions = Vec::new();
            if localized_lattice(&t, setup).preserves_length() {
                for g in setup.split_atoms(&t) {
                    let bound = cfg.claim_bound.unwrap_or(4 * cs.group().order());
                    insertions.push(InsertionResult { atom: g, search: claim_star_witness(&t, setup, g, bound)? });
                }
            }
            Some(LocalizationReport { setup, nagata, insertions })
        }
    };
    let doc = instance_json(&InstanceReport {
        table: &t,
        classification: &c,
        relations: relations.as_deref(),
        analysis: &analysis,
        localization,
    });
    emit(&args.out, &to_json_string(&doc))
}

fn run_survey_command(args: SurveyArgs) -> Result<(), Failure> {
    let checks = if args.check.is_empty() {
        SurveyCheck::ALL.to_vec()
    } else {
        args.check.iter().flat_map(|c| split_list(c)).map(|c| c.parse()).collect::<Result<Vec<SurveyCheck>, Error>>()?
    };
    if args.bound == Some(0) || args.cap == 0 {
        return Err(Error::InvalidParameter("bounds and cap must be positive".into()).into());
    }
    let cfg = SurveyConfig {
        max_order: args.max_order,
        moduli: parse_moduli(&args.r)?,
        checks,
        ohfd_bound: args.bound,
        ceiling: args.ceiling,
        cap: args.cap,
    };
    let report = run_survey(&cfg)?;
    emit(&args.out, &to_json_string(&report.to_json()))?;
    match report.total_counterexamples() {
        0 => Ok(()),
        n => Err(Failure::Property(format!("{n} counterexamples"))),
    }
}

fn run_examples(args: OutArgs) -> Result<(), Failure> {
    let (ok, doc) = suite::run_suite()?;
    emit(&args.out, &to_json_string(&doc))?;
    if ok {
        Ok(())
    } else {
        Err(Failure::Property("worked-example suite failed".into()))
    }
}

fn run_equality(args: EqualityArgs) -> Result<(), Failure> {
    let lhs = split_list(&args.lhs);
    let rhs = split_list(&args.rhs);
    let d = args
        .d
        .or_else(|| lhs.iter().chain(&rhs).find_map(|s| detect_radicand(s)))
        .ok_or_else(|| Error::InvalidParameter("no i<d> term; pass --d".into()))?;
    let parse = |xs: &[String]| xs.iter().map(|s| parse_polynomial(s, d)).collect::<Result<Vec<QuadraticPolynomial>, Error>>();
    let check = verify_atomic_equality(&parse(&lhs)?, &parse(&rhs)?)?;
    emit(&args.out, &to_json_string(&equality_json(&lhs, &rhs, &check)))?;
    if check.equal && check.all_atoms {
        Ok(())
    } else {
        Err(Failure::Property("not an atomic equality".into()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(a) => run_analyze(a),
        Command::Survey(a) => run_survey_command(a),
        Command::VerifyExamples(a) => run_examples(a),
        Command::CheckEquality(a) => run_equality(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Property(msg)) => {
            eprintln!("hfdlab: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("hfdlab: {e}");
            match e {
                Error::ResourceCap { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}
