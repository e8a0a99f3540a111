//! `simcoef`: generate, encode, bound, search and profile words with a
//! bounded similarity coefficient.
//!
//! Machine-readable results go to stdout, human summaries to stderr.
//! Exit codes: 0 success, 2 invalid parameters, 3 budget exhausted,
//! 4 malformed input, 1 anything else.

mod config;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use config::ExperimentConfig;
use simcoef::bounds::{self, BoundReport};
use simcoef::codec::{self, ExecutionLog};
use simcoef::generator::{self, Outcome, RunParams};
use simcoef::morphic::{self, MorphismSpec};
use simcoef::search::{self, SearchOptions, SearchOutcome, SearchProgress, DEFAULT_NODE_BUDGET};
use simcoef::{oracle, simc, Error, Exec, Predicate, Rational, Word};

#[derive(Parser)]
#[command(name = "simcoef", version, about = "Words with bounded similarity coefficient")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the randomized erase-and-append generator.
    Generate(GenerateArgs),
    /// Decode logs or run random encode/decode round trips.
    Codec {
        #[command(subcommand)]
        action: CodecAction,
    },
    /// Minimum alphabet size, or the exact counting bound.
    Bounds(BoundsArgs),
    /// Lexicographic backtracking search for an avoiding word.
    Search(SearchArgs),
    /// Similarity profile of a morphic word prefix.
    Profile(ProfileArgs),
    /// Repeat a run from the config.json it wrote.
    Rerun { config: PathBuf },
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(short = 'k')]
    k: u32,
    #[arg(long)]
    alpha: Rational,
    #[arg(short = 'n')]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Maximum number of appended letters.
    #[arg(long, default_value_t = generator::DEFAULT_MAX_STEPS)]
    max_steps: u64,
    /// Replay whitespace-separated letter codes instead of drawing them.
    #[arg(long)]
    replay: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// How to re-check the output word.
    #[arg(long, value_enum, default_value_t = Verify::Oracle)]
    verify: Verify,
}

#[derive(Clone, Copy, ValueEnum)]
enum Verify {
    /// Brute-force pair scan (quartic; slow past a few thousand letters).
    Oracle,
    /// The library's bit-parallel scan.
    Fast,
    None,
}

#[derive(Subcommand)]
enum CodecAction {
    /// Print the choice sequence recorded in a log file.
    Decode { log: PathBuf },
    /// Encode and decode random runs, reporting any mismatch.
    Roundtrip(RoundtripArgs),
}

#[derive(Args)]
struct RoundtripArgs {
    #[arg(long, default_value_t = 1000)]
    runs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Fix the alphabet size (default: drawn from {5, 43}).
    #[arg(short = 'k')]
    k: Option<u32>,
    /// Fix alpha (default: drawn from {1/2, 37/50}).
    #[arg(long)]
    alpha: Option<Rational>,
    /// Largest target length; each run draws n from 1..=this.
    #[arg(short = 'n', default_value_t = 40)]
    n: usize,
    #[arg(long, default_value_t = 400)]
    max_steps: u64,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    alpha: Rational,
    #[arg(short = 'k')]
    k: Option<u64>,
    #[arg(short = 'n')]
    n: Option<u64>,
    /// Evaluate a single M instead of searching.
    #[arg(long = "m")]
    m: Option<u64>,
    #[arg(long = "m-max", default_value_t = 10_000)]
    m_max: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(short = 'k')]
    k: u32,
    #[arg(long)]
    alpha: Rational,
    #[arg(short = 'n')]
    n: usize,
    #[arg(long, default_value = "lt")]
    predicate: Predicate,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    node_budget: u64,
    /// Branch only on letter 1 at the root.
    #[arg(long)]
    symmetry: bool,
    /// Split the search over two-letter prefixes.
    #[arg(long)]
    parallel: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ProfileArgs {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long)]
    prefix: usize,
    /// Largest factor length; defaults to half the prefix.
    #[arg(long)]
    max_ell: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    sequential: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug)]
enum Failure {
    Invalid(String),
    Budget,
    Malformed(String),
    Other(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Other(_) => 1,
            Failure::Invalid(_) => 2,
            Failure::Budget => 3,
            Failure::Malformed(_) => 4,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::MalformedLog(_) => Failure::Malformed(e.to_string()),
            Error::InconsistentTrace(_) => Failure::Other(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Codec { action } => cmd_codec(action),
        Command::Bounds(a) => cmd_bounds(a),
        Command::Search(a) => cmd_search(a),
        Command::Profile(a) => cmd_profile(a),
        Command::Rerun { config } => cmd_rerun(&config),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Invalid(m) | Failure::Malformed(m) | Failure::Other(m) => eprintln!("error: {m}"),
                Failure::Budget => {}
            }
            ExitCode::from(f.code())
        }
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))
}

fn write_outputs(dir: &Path, files: &[(&str, String)]) -> CmdResult {
    let io = |e: std::io::Error| Failure::Other(format!("{}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io)?;
    for (name, body) in files {
        fs::write(dir.join(name), body).map_err(io)?;
    }
    Ok(())
}

fn pretty(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn cmd_generate(a: GenerateArgs) -> CmdResult {
    let params = RunParams::new(a.n, a.k, a.alpha, a.seed).with_max_steps(Some(a.max_steps));
    params.validate()?;
    let mut replayed = None;
    let trace = match &a.replay {
        Some(path) => {
            let choices = Word::parse_codes(&read_input(path)?, a.k).map_err(|e| Failure::Malformed(e.to_string()))?;
            replayed = Some(choices.len());
            generator::replay(&params, &choices)?
        }
        None => generator::run(&params)?,
    };
    // A replay that used every recorded choice ended as recorded.
    let out_of_choices = !trace.outcome.is_completed() && replayed == Some(trace.steps());
    let log = codec::encode(&trace)?;
    let word = trace.outcome.word();

    let (value, method) = match a.verify {
        Verify::Oracle => (Some(oracle::simc(word).0), "oracle"),
        Verify::Fast => (Some(simc::similarity_coefficient(word).0), "fast"),
        Verify::None => (None, "none"),
    };
    let verified = value.map(|v| Predicate::Le.accepts(v, a.alpha));
    let status = match trace.outcome {
        Outcome::Completed(_) => "completed",
        Outcome::StepBudgetExhausted(_) if out_of_choices => "choices_exhausted",
        Outcome::StepBudgetExhausted(_) => "step_budget_exhausted",
    };
    let record = json!({
        "status": status,
        "k": a.k,
        "alpha": a.alpha,
        "n": a.n,
        "seed": a.seed,
        "length": word.len(),
        "steps": trace.steps(),
        "erases": trace.erase_count(),
        "simc": value,
        "predicate": "<=",
        "verified_by": method,
        "verified": verified,
        "word": word.to_string(),
    });
    print!("{}", pretty(&record));

    eprintln!(
        "{status}: {} letters after {} steps ({} erases)",
        word.len(),
        trace.steps(),
        trace.erase_count()
    );
    if let Some(v) = value {
        let rel = if verified == Some(true) { "<=" } else { ">" };
        eprintln!("simc(w) = {v} {rel} {} ({method})", a.alpha);
    }

    if let Some(dir) = &a.out {
        let cfg = ExperimentConfig {
            k: Some(a.k),
            alpha: Some(a.alpha),
            n: Some(a.n),
            seed: Some(a.seed),
            max_steps: Some(a.max_steps),
            predicate: Some(Predicate::Le),
            replay: a.replay.clone(),
            out: Some(dir.clone()),
            ..ExperimentConfig::new("generate")
        };
        write_outputs(
            dir,
            &[
                ("word.txt", format!("{word}\n")),
                (
                    "choices.txt",
                    format!("{}\n", Word::new(trace.random_choices.clone(), a.k)?),
                ),
                ("trace.json", pretty(&trace)),
                ("log.json", log.to_json()),
                ("config.json", cfg.to_json()),
            ],
        )?;
    }

    if verified == Some(false) {
        return Err(Failure::Other("output word failed verification".into()));
    }
    if !trace.outcome.is_completed() && !out_of_choices {
        eprintln!("step budget of {} exhausted", a.max_steps);
        return Err(Failure::Budget);
    }
    Ok(())
}

fn cmd_codec(action: CodecAction) -> CmdResult {
    match action {
        CodecAction::Decode { log } => {
            let log = ExecutionLog::from_json(&read_input(&log)?)?;
            let problems = codec::validate(&log);
            for p in &problems {
                eprintln!("{}: {p}", if p.blocks_decoding() { "invalid" } else { "warning" });
            }
            if problems.iter().any(|p| p.blocks_decoding()) {
                return Err(Failure::Malformed("log violates its invariants".into()));
            }
            let choices = codec::decode(&log)?;
            let line: Vec<String> = choices.iter().map(|c| c.to_string()).collect();
            println!("{}", line.join(" "));
            Ok(())
        }
        CodecAction::Roundtrip(a) => roundtrip(a),
    }
}

fn roundtrip(a: RoundtripArgs) -> CmdResult {
    if a.n == 0 {
        return Err(Failure::Invalid("n must be at least 1".into()));
    }
    let alphas: Vec<Rational> = match a.alpha {
        Some(x) => vec![x],
        None => vec![Rational::new(1, 2)?, Rational::new(37, 50)?],
    };
    let ks = a.k.map_or(vec![5, 43], |k| vec![k]);
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut failures = Vec::new();
    let mut max_m = 0;
    for i in 0..a.runs {
        let k = ks[rng.random_range(0..ks.len())];
        let alpha = alphas[rng.random_range(0..alphas.len())];
        let n = rng.random_range(1..=a.n);
        let params = RunParams::new(n, k, alpha, rng.random()).with_max_steps(Some(a.max_steps));
        let trace = generator::run(&params)?;
        max_m = max_m.max(trace.steps());
        let ok = codec::encode(&trace).and_then(|log| {
            let text = log.to_json();
            let back = ExecutionLog::from_json(&text)?;
            Ok(codec::validate(&back).is_empty() && codec::decode(&back)? == trace.random_choices)
        });
        if !matches!(ok, Ok(true)) {
            failures.push(json!({ "run": i, "params": params, "error": ok.err().map(|e| e.to_string()) }));
        }
    }
    print!(
        "{}",
        pretty(&json!({ "runs": a.runs, "failures": failures.len(), "max_M": max_m, "failed": failures }))
    );
    eprintln!(
        "{} round trips, {} failures, largest M = {max_m}",
        a.runs,
        failures.len()
    );
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Other("round trip mismatch".into()))
    }
}

fn cmd_bounds(a: BoundsArgs) -> CmdResult {
    let Some(k) = a.k else {
        let k = bounds::min_alphabet(a.alpha)?;
        println!("{k}");
        eprintln!("smallest k with k > 16^(1/alpha) for alpha = {}", a.alpha);
        return Ok(());
    };
    let n =
        a.n.ok_or_else(|| Failure::Invalid("-n is required together with -k".into()))?;
    let summarize = |r: &BoundReport| {
        eprintln!(
            "k={} alpha={} n={} M={}: bound has {} bits, k^M has {} bits, contradiction: {}",
            r.k,
            r.alpha,
            r.n,
            r.m,
            r.rhs.bits(),
            r.lhs.bits(),
            r.contradiction
        )
    };

    if let Some(m) = a.m {
        let r = bounds::bound_report(k, a.alpha, n, m)?;
        emit_reports(a.format, std::slice::from_ref(&r))?;
        summarize(&r);
        return Ok(());
    }
    if a.format == Format::Csv {
        let grid = bounds::bound_grid(k, a.alpha, n, a.m_max, Exec::default())?;
        emit_reports(Format::Csv, &grid)?;
        return Ok(());
    }
    let hit = bounds::find_contradiction_m(k, a.alpha, n, a.m_max)?;
    print!(
        "{}",
        pretty(&json!({ "k": k, "alpha": a.alpha, "n": n, "m_max": a.m_max, "first_contradiction": hit }))
    );
    match &hit {
        Some(r) => summarize(r),
        None => eprintln!("no M <= {} makes the bound fall below k^M", a.m_max),
    }
    Ok(())
}

fn emit_reports(format: Format, rows: &[BoundReport]) -> CmdResult {
    match format {
        Format::Json if rows.len() == 1 => print!("{}", pretty(&rows[0])),
        Format::Json => print!("{}", pretty(&rows)),
        Format::Csv => bounds::write_csv(std::io::stdout().lock(), rows).map_err(|e| Failure::Other(e.to_string()))?,
    }
    Ok(())
}

fn cmd_search(a: SearchArgs) -> CmdResult {
    let options = SearchOptions {
        predicate: a.predicate,
        node_budget: a.node_budget,
        symmetry_reduction: a.symmetry,
    };
    let result = if a.parallel {
        search::search_parallel(a.k, a.alpha, a.n, &options, Exec::Parallel)?
    } else {
        search::search_with_progress(a.k, a.alpha, a.n, &options, |p: SearchProgress| {
            eprintln!("  {} nodes, depth {}, longest {}", p.nodes, p.depth, p.longest)
        })?
    };
    let keep = a.predicate.kept_symbol();
    let record = json!({
        "k": a.k,
        "alpha": a.alpha,
        "n": a.n,
        "predicate": a.predicate,
        "kept": format!("simc {keep} alpha"),
        "node_budget": a.node_budget,
        "symmetry_reduction": a.symmetry,
        "result": result,
        "best_length": result.best_word().len(),
        "best_word": result.best_word().to_string(),
    });
    print!("{}", pretty(&record));

    let best = result.best_word();
    match &result.outcome {
        SearchOutcome::Found { .. } => eprintln!(
            "found a word of length {} with simc {keep} {} ({} nodes); evidence of avoidability, not a proof",
            best.len(),
            a.alpha,
            result.nodes_visited
        ),
        SearchOutcome::Exhausted { max_length, .. } => eprintln!(
            "exhausted: no word longer than {max_length} has simc {keep} {} ({} nodes)",
            a.alpha, result.nodes_visited
        ),
        SearchOutcome::BudgetExceeded { nodes, .. } => eprintln!(
            "node budget {nodes} exceeded; longest word so far has length {}",
            best.len()
        ),
    }

    if let Some(dir) = &a.out {
        let cfg = ExperimentConfig {
            k: Some(a.k),
            alpha: Some(a.alpha),
            n: Some(a.n),
            node_budget: Some(a.node_budget),
            predicate: Some(a.predicate),
            symmetry_reduction: Some(a.symmetry),
            out: Some(dir.clone()),
            ..ExperimentConfig::new("search")
        };
        write_outputs(
            dir,
            &[
                ("longest.txt", format!("{best}\n")),
                ("search.json", pretty(&record)),
                ("config.json", cfg.to_json()),
            ],
        )?;
    }
    match result.outcome {
        SearchOutcome::BudgetExceeded { .. } => Err(Failure::Budget),
        _ => Ok(()),
    }
}

fn cmd_profile(a: ProfileArgs) -> CmdResult {
    let spec: MorphismSpec =
        serde_json::from_str(&read_input(&a.spec)?).map_err(|e| Failure::Malformed(format!("morphism spec: {e}")))?;
    let word = morphic::iterate(&spec, a.prefix)?;
    let max_ell = a.max_ell.unwrap_or(a.prefix / 2);
    let exec = if a.sequential {
        Exec::Sequential
    } else {
        Exec::default()
    };
    let p = morphic::profile_with(&word, max_ell, exec)?;

    let mut per_length = Vec::new();
    morphic::write_per_length_csv(&mut per_length, &p).map_err(|e| Failure::Other(e.to_string()))?;
    let per_length = String::from_utf8(per_length).expect("csv is utf-8");
    match a.format {
        Format::Csv => print!("{per_length}"),
        Format::Json => print!("{}", pretty(&p)),
    }
    eprintln!(
        "prefix {}, ell <= {}: best {} at t={} ell={}; monotone increase: {}",
        p.prefix_length,
        p.max_factor_length,
        p.best,
        p.witness.t,
        p.witness.ell,
        if p.monotone_increase { "yes" } else { "no" }
    );

    if let Some(dir) = &a.out {
        let mut table = Vec::new();
        morphic::write_table_csv(&mut table, spec.alphabet_size, std::slice::from_ref(&p))
            .map_err(|e| Failure::Other(e.to_string()))?;
        let cfg = ExperimentConfig {
            spec: Some(a.spec.clone()),
            prefix: Some(a.prefix),
            max_ell: Some(max_ell),
            out: Some(dir.clone()),
            ..ExperimentConfig::new("profile")
        };
        write_outputs(
            dir,
            &[
                ("profile.json", pretty(&p)),
                ("per_length.csv", per_length),
                ("table.csv", String::from_utf8(table).expect("csv is utf-8")),
                ("config.json", cfg.to_json()),
            ],
        )?;
    }
    Ok(())
}

fn cmd_rerun(path: &Path) -> CmdResult {
    let cfg =
        ExperimentConfig::from_json(&read_input(path)?).map_err(|e| Failure::Malformed(format!("config: {e}")))?;
    let missing = |field: &str| Failure::Malformed(format!("config for {} lacks {field}", cfg.command));
    match cfg.command.as_str() {
        "generate" => cmd_generate(GenerateArgs {
            k: cfg.k.ok_or_else(|| missing("k"))?,
            alpha: cfg.alpha.ok_or_else(|| missing("alpha"))?,
            n: cfg.n.ok_or_else(|| missing("n"))?,
            seed: cfg.seed.unwrap_or(0),
            max_steps: cfg.max_steps.unwrap_or(generator::DEFAULT_MAX_STEPS),
            replay: cfg.replay,
            out: cfg.out,
            verify: Verify::Oracle,
        }),
        "search" => cmd_search(SearchArgs {
            k: cfg.k.ok_or_else(|| missing("k"))?,
            alpha: cfg.alpha.ok_or_else(|| missing("alpha"))?,
            n: cfg.n.ok_or_else(|| missing("n"))?,
            predicate: cfg.predicate.unwrap_or(Predicate::Lt),
            node_budget: cfg.node_budget.unwrap_or(DEFAULT_NODE_BUDGET),
            symmetry: cfg.symmetry_reduction.unwrap_or(false),
            parallel: false,
            out: cfg.out,
        }),
        "profile" => cmd_profile(ProfileArgs {
            spec: cfg.spec.ok_or_else(|| missing("spec"))?,
            prefix: cfg.prefix.ok_or_else(|| missing("prefix"))?,
            max_ell: cfg.max_ell,
            format: Format::Csv,
            out: cfg.out,
            sequential: false,
        }),
        other => Err(Failure::Malformed(format!("cannot rerun command {other:?}"))),
    }
}
