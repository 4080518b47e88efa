use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use derange_core::families::{build_family, FamilyId};
use derange_core::gammal1::{enumerate_in, prop_checks, GammaL1};
use derange_core::harness::analyze::{analyze, analyze_mat};
use derange_core::harness::corpus::{build_default_corpus, default_corpus_dir, CorpusConfig};
use derange_core::harness::report::{render, write_reports, Format, SuiteReport, SCHEMA};
use derange_core::harness::specfile::{serialize_spec, GroupSpec};
use derange_core::harness::verify;
use derange_core::numtheory::prime_power;
use derange_core::perm::DEFAULT_CAP;
use derange_core::{make_field, CheckResult, Error, Status};

#[derive(Parser)]
#[command(name = "derange", version, about = "Exact derangement and eigenvalue-1 proportions, with verification suites")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Enumeration cap (group order).
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: usize,
    /// Write reports into this directory instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Json)]
    format: OutFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Self {
        match f {
            OutFormat::Json => Format::Json,
            OutFormat::Csv => Format::Csv,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one group described by a spec file.
    Analyze { spec: PathBuf },
    /// Run a verification suite over the default corpus, or `all` suites.
    Verify {
        suite: String,
        /// Directory of `.grp` spec files added to the corpus.
        #[arg(long)]
        corpus_dir: Option<PathBuf>,
        /// Leave spec files out of the corpus.
        #[arg(long, conflicts_with = "corpus_dir")]
        no_spec_files: bool,
    },
    /// Enumerate all subgroups of ΓL_1(q) and check the coset and valuation criteria.
    #[command(name = "scan-gammal1")]
    ScanGammal1 {
        #[arg(long)]
        q: u64,
    },
    /// Build a family member and emit its spec file and analysis.
    Family {
        id: String,
        #[arg(allow_negative_numbers = true)]
        params: Vec<i64>,
    },
}

/// Exit code 2 for malformed input, 1 for failures and computation errors.
fn error_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. }
        | Error::UnknownSuite(_)
        | Error::InvalidParams(_)
        | Error::OutOfRange(_)
        | Error::NotPrime(_)
        | Error::Io(_) => 2,
        _ => 1,
    }
}

fn emit(text: &str, out: &Option<PathBuf>, file: &str) -> Result<(), Error> {
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            let path = dir.join(file);
            std::fs::write(&path, text)?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn json_text(v: &impl serde::Serialize) -> Result<String, Error> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn run(cli: Cli) -> Result<bool, Error> {
    let format = Format::from(cli.format);
    match cli.command {
        Command::Analyze { spec } => {
            if format == Format::Csv {
                return Err(Error::InvalidParams("analyze reports are JSON only".into()));
            }
            let report = analyze(&spec, cli.cap)?;
            emit(&json_text(&report)?, &cli.out, "analysis.json")?;
            Ok(true)
        }
        Command::Verify { suite, corpus_dir, no_spec_files } => {
            let corpus_dir = if no_spec_files { None } else { Some(corpus_dir.unwrap_or_else(default_corpus_dir)) };
            let corpus = build_default_corpus(&CorpusConfig { corpus_dir, cap: cli.cap })?;
            let reports = verify(&suite, &corpus)?;
            for r in &reports {
                let s = &r.summary;
                eprintln!(
                    "{:<20} total {:>5}  pass {:>5}  fail {:>3}  small-n {:>3}  skipped {:>4}  statistical {:>2}",
                    r.suite, s.total, s.pass, s.fail, s.violation_at_small_n, s.skipped, s.statistical
                );
            }
            match &cli.out {
                Some(dir) => {
                    write_reports(&reports, dir, format)?;
                }
                None => print!("{}", render(&reports, format)?),
            }
            Ok(!reports.iter().any(SuiteReport::failed))
        }
        Command::ScanGammal1 { q } => scan_gammal1(q, format, &cli.out),
        Command::Family { id, params } => {
            let id: FamilyId = id.parse()?;
            let member = build_family(id, &params)?;
            let label = member.name();
            let prediction = member.spec.prediction.clone();
            let spec = GroupSpec::Matrix { name: Some(label.clone()), group: member.group.clone() };
            let spec_text = serialize_spec(&spec);
            let report = analyze_mat(Some(label.clone()), member.group, cli.cap)?;
            let m = report.matrix.as_ref().expect("matrix analysis");
            let delta_ok = prediction.as_ref().and_then(|p| p.delta.as_ref()).is_none_or(|d| *d == m.delta_affine);
            let alpha_ok = prediction.as_ref().and_then(|p| p.alpha.as_ref()).is_none_or(|a| *a == m.alpha);
            let doc = json!({
                "schema": SCHEMA,
                "family": member.spec,
                "prediction_matches": delta_ok && alpha_ok,
                "report": report,
            });
            match &cli.out {
                Some(_) => {
                    emit(&spec_text, &cli.out, &format!("{label}.grp"))?;
                    emit(&json_text(&doc)?, &cli.out, &format!("{label}.json"))?;
                }
                None => print!("{}", json_text(&json!({ "spec": spec_text, "analysis": doc }))?),
            }
            Ok(delta_ok && alpha_ok)
        }
    }
}

fn scan_gammal1(q: u64, format: Format, out: &Option<PathBuf>) -> Result<bool, Error> {
    let (p, f) = prime_power(q).ok_or_else(|| Error::InvalidParams(format!("{q} is not a prime power")))?;
    let universe = GammaL1::new(Arc::new(make_field(p, f)?))?;
    let groups = enumerate_in(&universe)?;
    let mut rows = Vec::new();
    let mut checks: Vec<CheckResult> = Vec::new();
    for g in &groups {
        let mut levels = Vec::new();
        for ell in g.levels() {
            let rep = g.coset_fixers(ell)?;
            levels.push(json!({ "coset": rep, "valuation_criterion": g.valuation_criterion(ell)? }));
        }
        rows.push(json!({
            "label": g.label(),
            "order": g.order(),
            "t": g.t,
            "e0": g.e0,
            "x": g.x_log,
            "m": g.m,
            "c": g.c,
            "alpha": g.alpha(),
            "delta": g.delta_affine(),
            "semiregular_nonzero": g.is_semiregular_nonzero(),
            "a_order": g.a_order(),
            "levels": levels,
        }));
        checks.extend(g.coset_checks()?);
        checks.extend(g.valuation_checks()?);
        checks.extend(g.invariant_checks());
    }
    checks.extend(prop_checks(&universe, &groups));
    let failed = checks.iter().filter(|c| c.status == Status::Fail).count();
    eprintln!("q={q}: {} subgroups, {} checks, {failed} failed", groups.len(), checks.len());
    let text = match format {
        Format::Json => json_text(&json!({ "schema": SCHEMA, "q": q, "subgroups": rows, "checks": checks }))?,
        Format::Csv => {
            let corpus = derange_core::harness::Corpus::from_members(Vec::new(), DEFAULT_CAP);
            derange_core::harness::report::to_csv(&[SuiteReport::new("scan-gammal1", &corpus, checks)])?
        }
    };
    let file = if format == Format::Json { format!("gammal1_{q}.json") } else { format!("gammal1_{q}.csv") };
    emit(&text, out, &file)?;
    Ok(failed == 0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs.max(1)).build_global() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_code(&e))
        }
    }
}
