//! unitri: exact conjugacy computations in unitriangular groups over small
//! finite fields. Every number is exact; every artifact is deterministic
//! for a fixed configuration, regardless of worker count.

mod artifacts;
mod config;

use clap::{Parser, Subcommand, ValueEnum};
use config::RunConfig;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use unitri_core::census::{
    census_with_options, interpolate_class_polynomial, CensusOptions, CensusRecord,
};
use unitri_core::field::FieldSpec;
use unitri_core::jordan::canonical_conjugator;
use unitri_core::lcs::{cp_decomposed, cp_direct, lcs_dim, LcsParams};
use unitri_core::matrix::{jordan_matrix, Matrix};
use unitri_core::partitions::RationalVector;
use unitri_core::verify::{run_all, Profile};
use unitri_core::Error;

#[derive(Parser)]
#[command(
    name = "unitri",
    version,
    about = "Exact conjugacy computations in unitriangular groups U_n(q)",
    after_help = "Exit codes: 0 pass, 1 verification failure, 2 usage error, 3 budget refusal."
)]
struct Cli {
    /// Worker threads; defaults to UNITRI_WORKERS, then all cores
    #[arg(long, global = true, value_name = "N")]
    workers: Option<usize>,

    /// Write the JSON artifact here (atomically) instead of stdout
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Run censuses past the enumeration budget anyway
    #[arg(long, global = true)]
    override_budget: bool,

    /// Refuse jobs enumerating more than this many elements (default 2^34)
    #[arg(long, global = true, value_name = "ELEMENTS")]
    budget: Option<u128>,

    /// Seed for the sampled bounds checks
    #[arg(long, global = true, value_name = "SEED")]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exhaustive conjugacy census of U_n(q), stratified by Jordan type
    Census {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
        /// Also stratify commuting pairs by both members' types (costlier)
        #[arg(long)]
        pairs: bool,
        /// Also write the per-type table as CSV
        #[arg(long, value_name = "FILE")]
        csv: Option<PathBuf>,
    },
    /// Canonical conjugation of a strictly upper matrix file to its block form
    Jordanize {
        /// Matrix file: header `rows cols q=<order>`, then rows of residues
        #[arg(value_name = "FILE")]
        input: PathBuf,
    },
    /// Check the exact block decomposition of the commuting probability
    LcsVerify {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        q: u64,
    },
    /// Exact commuting probability of the series subgroup U_{n,k}(q)
    LcsCp {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        q: u64,
    },
    /// Exact checks of the sqrt(2) exponent constants and the h-function lemmas
    BoundsVerify {
        /// Check partition-derived vectors and identities up to this size
        #[arg(long, default_value_t = 14, value_name = "N")]
        nmax: usize,
        /// Number of sampled rational vectors for the pointwise lemmas
        #[arg(long, default_value_t = 10_000, value_name = "COUNT")]
        samples: usize,
    },
    /// Interpolate the class-count polynomial from censuses at several q
    Interpolate {
        #[arg(long)]
        n: usize,
        /// Comma-separated prime powers, e.g. 2,3,4,5
        #[arg(long, value_delimiter = ',', required = true)]
        q: Vec<u64>,
    },
    /// Run the acceptance criteria, one pass/fail line per criterion
    VerifyAll {
        #[arg(long, value_enum, default_value_t = ProfileArg::Quick)]
        profile: ProfileArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileArg {
    Quick,
    Full,
}

/// A command's JSON artifact plus its verdict.
struct Outcome {
    jsonv: Value,
    passed: bool,
}

enum Failure {
    Lib(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Lib(e)
    }
}

fn exit_for(f: &Failure) -> u8 {
    match f {
        Failure::Io(_) => 1,
        Failure::Lib(e) => match e {
            Error::BudgetExceeded(..) => 3,
            Error::Parse(_)
            | Error::NotPrime(_)
            | Error::InvalidDegree(_)
            | Error::NotPrimePower(_)
            | Error::ElementOutOfRange { .. }
            | Error::NotStrictlyUpper
            | Error::DimensionMismatch(_)
            | Error::IndexOutOfRange(_)
            | Error::NotPermutation(_)
            | Error::InvalidPartition(_)
            | Error::DuplicatePoint(_)
            | Error::InsufficientPoints { .. } => 2,
            _ => 1,
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        // clap reports the offending flag with a usage hint and picks the
        // right status for --help/--version itself.
        Err(e) => e.exit(),
    };
    let config = match RunConfig::new(
        cli.workers,
        cli.out,
        cli.override_budget,
        cli.budget,
        cli.seed,
    ) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            eprintln!("run `unitri --help` for usage");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build_global()
    {
        eprintln!("error: thread pool: {e}");
        return ExitCode::from(1);
    }
    match dispatch(&config, &cli.command) {
        Ok(outcome) => {
            if let Err(f) = emit(&config, &outcome.jsonv) {
                if let Failure::Io(msg) = &f {
                    eprintln!("error: {msg}");
                }
                return ExitCode::from(exit_for(&f));
            }
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            match &f {
                Failure::Lib(e) => eprintln!("error: {e}"),
                Failure::Io(msg) => eprintln!("error: {msg}"),
            }
            let code = exit_for(&f);
            if code == 2 {
                eprintln!("run `unitri --help` for usage");
            }
            ExitCode::from(code)
        }
    }
}

fn emit(config: &RunConfig, value: &Value) -> Result<(), Failure> {
    match &config.out {
        Some(path) => artifacts::write_json(path, value)
            .map_err(|e| Failure::Io(format!("writing {}: {e}", path.display()))),
        None => {
            println!(
                "{}",
                serde_json::to_string_pretty(value)
                    .map_err(|e| Failure::Io(format!("serializing output: {e}")))?
            );
            Ok(())
        }
    }
}

fn choose2(n: usize) -> usize {
    n * (n - 1) / 2
}

fn dispatch(config: &RunConfig, command: &Command) -> Result<Outcome, Failure> {
    match command {
        Command::Census { n, q, pairs, csv } => census(config, *n, *q, *pairs, csv.as_deref()),
        Command::Jordanize { input } => jordanize(input),
        Command::LcsVerify { a, b, k, q } => lcs_verify(config, *a, *b, *k, *q),
        Command::LcsCp { n, k, q } => lcs_cp(config, *n, *k, *q),
        Command::BoundsVerify { nmax, samples } => bounds_verify(config, *nmax, *samples),
        Command::Interpolate { n, q } => interpolate(config, *n, q),
        Command::VerifyAll { profile } => verify_all(*profile),
    }
}

fn census(
    config: &RunConfig,
    n: usize,
    q: u64,
    pairs: bool,
    csv: Option<&Path>,
) -> Result<Outcome, Failure> {
    let spec = FieldSpec::from_order(q)?;
    config.precheck(q, choose2(n) * if pairs { 2 } else { 1 })?;
    let record = census_with_options(
        n,
        &spec,
        CensusOptions {
            pairs,
            override_budget: config.override_budget,
        },
    )?;
    record.validate()?;
    if let Some(path) = csv {
        write_shape_csv(path, &record)?;
    }
    Ok(Outcome {
        jsonv: record.to_json(),
        passed: true,
    })
}

fn write_shape_csv(path: &Path, record: &CensusRecord) -> Result<(), Failure> {
    let rows: Vec<Vec<String>> = record
        .per_shape
        .iter()
        .map(|(lam, s)| vec![lam.to_string(), s.count.to_string(), s.comm.to_string()])
        .collect();
    artifacts::write_csv(path, &["shape", "count", "comm"], &rows)
        .map_err(|e| Failure::Io(format!("writing {}: {e}", path.display())))
}

fn matrix_json(m: &Matrix) -> Value {
    let rows: Vec<Vec<u32>> = (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j).value()).collect())
        .collect();
    json!(rows)
}

fn jordanize(input: &Path) -> Result<Outcome, Failure> {
    let text = std::fs::read_to_string(input)
        .map_err(|e| Failure::Io(format!("reading {}: {e}", input.display())))?;
    let a = Matrix::from_text(&text)?;
    let (x, traces) = canonical_conjugator(&a)?;
    let shape = unitri_core::jordan::shape(&a)?;
    // Confirm the endpoint before reporting anything.
    let target = jordan_matrix(&shape, a.field());
    if a.conjugate_by(&x)? != target {
        return Err(Failure::Lib(Error::VerificationFailed(
            "conjugator does not reach the block form".to_string(),
        )));
    }
    let levels: Vec<Value> = traces
        .iter()
        .map(|t| {
            let steps: Vec<Value> = t
                .steps
                .iter()
                .map(|(label, m)| json!({"label": label.to_string(), "conjugator": matrix_json(m)}))
                .collect();
            let stages: Vec<Value> = t.stages.iter().map(matrix_json).collect();
            json!({
                "size": t.size,
                "from_type": t.mu.to_string(),
                "to_type": t.lambda.to_string(),
                "extended_block": t.extended,
                "steps": steps,
                "stages": stages,
                "conjugator": matrix_json(&t.accumulated),
            })
        })
        .collect();
    Ok(Outcome {
        jsonv: json!({
            "schema": 1,
            "n": a.rows(),
            "q": a.field().order(),
            "type": shape.to_string(),
            "conjugator": matrix_json(&x),
            "levels": levels,
        }),
        passed: true,
    })
}

fn lcs_verify(config: &RunConfig, a: usize, b: usize, k: usize, q: u64) -> Result<Outcome, Failure> {
    let spec = FieldSpec::from_order(q)?;
    config.precheck(q, 2 * lcs_dim(a + b, k))?;
    config.precheck(q, 2 * (lcs_dim(a, k) + lcs_dim(b, k)))?;
    let direct = cp_direct(&LcsParams::new(a + b, k, spec.clone())?)?;
    let decomposed = cp_decomposed(a, b, k, &spec)?;
    let equal = direct == decomposed;
    Ok(Outcome {
        jsonv: json!({
            "schema": 1,
            "a": a,
            "b": b,
            "k": k,
            "q": q,
            "direct": direct.to_string(),
            "decomposed": decomposed.to_string(),
            "equal": equal,
        }),
        passed: equal,
    })
}

fn lcs_cp(config: &RunConfig, n: usize, k: usize, q: u64) -> Result<Outcome, Failure> {
    let spec = FieldSpec::from_order(q)?;
    config.precheck(q, 2 * lcs_dim(n, k))?;
    let cp = cp_direct(&LcsParams::new(n, k, spec)?)?;
    Ok(Outcome {
        jsonv: json!({
            "schema": 1,
            "n": n,
            "k": k,
            "q": q,
            "cp": cp.to_string(),
            "numerator": cp.numer().to_string(),
            "denominator": cp.denom().to_string(),
        }),
        passed: true,
    })
}

fn bounds_verify(config: &RunConfig, nmax: usize, samples: usize) -> Result<Outcome, Failure> {
    use unitri_core::bounds;
    use unitri_core::partitions::partitions_of;
    let mut vectors: Vec<RationalVector> = Vec::new();
    for n in 1..=nmax {
        for lam in partitions_of(n) {
            vectors.push(RationalVector::from_usizes(lam.conjugate().parts()));
        }
    }
    vectors.extend(bounds::sample_vectors(samples, config.seed));
    let reports = [
        bounds::check_constants(),
        bounds::check_h_lemma(&vectors)?,
        bounds::check_max_third(nmax),
        bounds::check_g_exponent_identity(nmax),
    ];
    let passed = reports.iter().all(|r| r.passed());
    let checks: Vec<Value> = reports.iter().map(|r| r.to_json()).collect();
    Ok(Outcome {
        jsonv: json!({
            "schema": 1,
            "nmax": nmax,
            "samples": samples,
            "seed": config.seed,
            "checks": checks,
            "passed": passed,
        }),
        passed,
    })
}

fn interpolate(config: &RunConfig, n: usize, q_list: &[u64]) -> Result<Outcome, Failure> {
    let mut counts = Vec::with_capacity(q_list.len());
    for &q in q_list {
        let spec = FieldSpec::from_order(q)?;
        config.precheck(q, choose2(n))?;
        let record = census_with_options(
            n,
            &spec,
            CensusOptions {
                pairs: false,
                override_budget: config.override_budget,
            },
        )?;
        counts.push(record.class_count);
    }
    let poly = interpolate_class_polynomial(n, q_list, &counts)?;
    let passed = poly.degree == poly.expected_degree && poly.integer_coefficients;
    Ok(Outcome {
        jsonv: json!({
            "schema": 1,
            "n": n,
            "q_list": q_list,
            "counts": counts.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "polynomial": poly.to_json(),
            "degree_matches": poly.degree == poly.expected_degree,
            "passed": passed,
        }),
        passed,
    })
}

fn verify_all(profile: ProfileArg) -> Result<Outcome, Failure> {
    let profile = match profile {
        ProfileArg::Quick => Profile::Quick,
        ProfileArg::Full => Profile::Full,
    };
    let results = run_all(profile);
    let mut failed = Vec::new();
    for r in &results {
        // Stable lines: no timings, so identical runs emit identical bytes.
        println!(
            "criterion {:02} [{}] {}: {}",
            r.id,
            if r.passed { "pass" } else { "FAIL" },
            r.name,
            r.details
        );
        if !r.passed {
            failed.push(r.name.clone());
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {}", failed.join(", "));
    }
    let criteria: Vec<Value> = results
        .iter()
        .map(|r| {
            json!({
                "id": r.id,
                "name": r.name,
                "passed": r.passed,
                "details": r.details,
            })
        })
        .collect();
    let passed = failed.is_empty();
    Ok(Outcome {
        jsonv: json!({
            "schema": 1,
            "profile": match profile { Profile::Quick => "quick", Profile::Full => "full" },
            "criteria": criteria,
            "passed": passed,
        }),
        passed,
    })
}
