//! End-to-end acceptance checks. Runs as a plain binary and prints one
//! PASS/FAIL line per criterion; exits nonzero if any fails.

use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use simcoef::bounds::{bound_report, catalan, find_contradiction_m};
use simcoef::codec::{decode, encode, validate, DyckRoute, ExecutionLog, Step};
use simcoef::generator::{replay, run_batch, RunParams};
use simcoef::lcs::{lcs_length, similarity};
use simcoef::morphic::{iterate, profile, profile_with, MorphismSpec};
use simcoef::oracle;
use simcoef::search::{search, search_parallel, SearchOptions, SearchOutcome};
use simcoef::simc::{max_similarity_ending_at_with, similarity_coefficient_with};
use simcoef::{Exec, Letter, Predicate, Rational, Word};

type Check = fn() -> Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn r(s: &str) -> Rational {
    s.parse().unwrap()
}

fn core_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests")
}

fn simcoef(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_simcoef"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn all_words(k: Letter, max_len: usize) -> Vec<Vec<Letter>> {
    let mut out = vec![vec![]];
    let mut layer: Vec<Vec<Letter>> = vec![vec![]];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| {
                (1..=k).map(move |a| {
                    let mut v = w.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn alphabet_thresholds() -> Result<String, String> {
    let start = Instant::now();
    let mut got = Vec::new();
    for (alpha, want) in [("37/50", "43"), ("9/10", "22")] {
        let out = simcoef(&["bounds", "--alpha", alpha]);
        ensure!(
            out.status.success(),
            "bounds --alpha {alpha} exited with {:?}",
            out.status
        );
        let text = stdout(&out);
        ensure!(text.trim() == want, "alpha {alpha}: printed {text:?}, expected {want}");
        got.push(format!("{alpha} -> {}", text.trim()));
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(2), "took {elapsed:?}");
    Ok(got.join(", "))
}

fn worked_values() -> Result<String, String> {
    let w = |s: &str| Word::from_digits(s, 10).unwrap();
    let l = lcs_length(&w("0120"), &w("1220"));
    ensure!(l == 3, "lcs = {l}");
    let s = similarity(&w("20120121"), &w("02102012")).map_err(|e| e.to_string())?;
    ensure!(s == r("3/4"), "s = {s}");
    Ok(format!("lcs = {l}, s = {s}"))
}

fn example_golden() -> Result<String, String> {
    let golden = core_dir().join("golden");
    let read = |name: &str| std::fs::read_to_string(golden.join(name)).unwrap();
    let choices = Word::from_digits("120234313543", 43).unwrap();
    ensure!(
        format!("{choices}\n") == read("worked_choices.txt"),
        "choice file differs"
    );

    // Library path.
    let trace = replay(&RunParams::new(12, 43, r("37/50"), 0), &choices).map_err(|e| e.to_string())?;
    let log = encode(&trace).map_err(|e| e.to_string())?;
    ensure!(
        log.to_json() == read("worked_log.json"),
        "encoded log differs from golden"
    );
    ensure!(
        serde_json::to_string_pretty(&trace).unwrap() + "\n" == read("worked_trace.json"),
        "trace differs from golden"
    );
    let route = log.route.to_bits();
    ensure!(
        route == format!("{}{}", "1".repeat(12), "0".repeat(12)),
        "route {route}"
    );
    let x = simcoef::codec::render_symbols(&log.x[..4]);
    let y = simcoef::codec::render_marks(&log.y[..4]);
    ensure!(x == "*5**" && y == "***0", "blocks {x} / {y}");
    ensure!(
        Word::new(log.s.clone(), 43).unwrap().to_digits().as_deref() == Some("12023431"),
        "S = {:?}",
        log.s
    );
    ensure!(
        decode(&log).map_err(|e| e.to_string())? == choices.letters(),
        "decode mismatch"
    );

    // CLI path, byte for byte.
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("worked");
    let replay_file = golden.join("worked_choices.txt");
    let out = simcoef(&[
        "generate",
        "-k",
        "43",
        "--alpha",
        "37/50",
        "-n",
        "12",
        "--replay",
        replay_file.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    ensure!(out.status.success(), "generate --replay exited with {:?}", out.status);
    for name in ["log.json", "trace.json"] {
        let written = std::fs::read_to_string(out_dir.join(name)).unwrap();
        ensure!(
            written == read(&format!("worked_{name}")),
            "CLI {name} differs from golden"
        );
    }
    let decoded = simcoef(&["codec", "decode", golden.join("worked_log.json").to_str().unwrap()]);
    ensure!(
        stdout(&decoded) == read("worked_choices.txt"),
        "CLI decode printed {:?}",
        stdout(&decoded)
    );
    Ok(format!("R = {route}, X = {x}..., Y = {y}..., S = 12023431"))
}

fn codec_roundtrip() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut max_m = 0;
    let params: Vec<RunParams> = (0..1000)
        .map(|_| {
            let k = [5, 43][rng.random_range(0..2)];
            let alpha = [r("1/2"), r("37/50")][rng.random_range(0..2)];
            RunParams::new(rng.random_range(1..=40), k, alpha, rng.random()).with_max_steps(Some(400))
        })
        .collect();
    for (p, trace) in params.iter().zip(run_batch(&params, Exec::default())) {
        let trace = trace.map_err(|e| e.to_string())?;
        max_m = max_m.max(trace.steps());
        ensure!(trace.steps() <= 400, "M = {}", trace.steps());
        let log = encode(&trace).map_err(|e| e.to_string())?;
        ensure!(validate(&log).is_empty(), "invalid log for {p:?}");
        let back = ExecutionLog::from_json(&log.to_json()).map_err(|e| e.to_string())?;
        ensure!(
            decode(&back).map_err(|e| e.to_string())? == trace.random_choices,
            "mismatch for {p:?}"
        );
    }
    let out = simcoef(&["codec", "roundtrip", "--runs", "1000"]);
    ensure!(out.status.success(), "CLI roundtrip failed: {}", stdout(&out));
    Ok(format!(
        "1000 runs, 0 failures, largest M = {max_m}; CLI roundtrip clean"
    ))
}

fn injectivity() -> Result<String, String> {
    let params = RunParams::new(16, 2, r("1/2"), 0);
    let mut seen = std::collections::HashSet::new();
    for m in 0..=8u32 {
        for code in 0u32..1 << m {
            let choices: Vec<Letter> = (0..m).map(|i| (code >> i & 1) + 1).collect();
            let trace = replay(&params, &choices).map_err(|e| e.to_string())?;
            let log = encode(&trace).map_err(|e| e.to_string())?;
            ensure!(seen.insert(log.to_json()), "collision at {choices:?}");
        }
    }
    Ok(format!("{} sequences, {} distinct logs", seen.len(), seen.len()))
}

fn oracle_equivalence() -> Result<String, String> {
    let alphas = [r("1/2"), r("2/3"), r("37/50"), r("4/5")];
    let check = |z: &[Letter]| -> Result<(), String> {
        let (value, witness) = oracle::simc(z);
        let (got, got_w) = similarity_coefficient_with(z, Exec::Sequential);
        ensure!(got == value, "simc {z:?}: {got} vs {value}");
        ensure!(
            got_w.map(|w| (w.t, w.ell)) == witness.map(|w| (w.t, w.ell)),
            "witness {z:?}"
        );
        for alpha in alphas {
            for pred in [Predicate::Le, Predicate::Lt] {
                let want = oracle::violation_ending_at(z, alpha, pred).map(|p| (p.t, p.ell, p.beta()));
                let got = max_similarity_ending_at_with(z, alpha, pred, Exec::Sequential).map(|v| (v.t, v.ell, v.beta));
                ensure!(got == want, "ending scan {z:?} {alpha} {pred}");
            }
        }
        Ok(())
    };
    let small = all_words(3, 10);
    for z in &small {
        check(z)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..10_000 {
        let len = rng.random_range(0..=60);
        let z: Vec<Letter> = (0..len).map(|_| rng.random_range(1..=5)).collect();
        check(&z)?;
    }
    Ok(format!("{} exhaustive + 10000 random words, 0 mismatches", small.len()))
}

fn generator_soundness() -> Result<String, String> {
    let alpha = r("37/50");
    let params: Vec<RunParams> = (0..20).map(|seed| RunParams::new(500, 43, alpha, seed)).collect();
    let mut steps = Vec::new();
    for trace in run_batch(&params, Exec::default()) {
        let trace = trace.map_err(|e| e.to_string())?;
        ensure!(trace.outcome.is_completed(), "seed {} exhausted", trace.params.seed);
        let w = trace.outcome.word();
        ensure!(w.len() == 500, "length {}", w.len());
        let (value, _) = oracle::simc(w);
        ensure!(value <= alpha, "seed {}: simc {value}", trace.params.seed);
        steps.push(trace.steps());
    }
    Ok(format!(
        "20/20 completed, oracle simc <= 37/50, steps {}..={}",
        steps.iter().min().unwrap(),
        steps.iter().max().unwrap()
    ))
}

fn counting_bound() -> Result<String, String> {
    let hit = find_contradiction_m(43, r("37/50"), 10, 10_000)
        .map_err(|e| e.to_string())?
        .ok_or("no contradiction up to 10^4")?;
    ensure!(hit.rhs < BigUint::from(43u32).pow(hit.m as u32), "rhs not below k^M");
    ensure!(hit.m == 84, "first M = {}", hit.m);
    let before = bound_report(43, r("37/50"), 10, 83).map_err(|e| e.to_string())?;
    ensure!(!before.contradiction, "M = 83 already contradicts");
    Ok(format!(
        "M = {} (rhs {} bits < k^M {} bits)",
        hit.m,
        hit.rhs.bits(),
        hit.lhs.bits()
    ))
}

fn catalan_crosscheck() -> Result<String, String> {
    for m in 0..=10usize {
        let count = (0u32..1 << (2 * m))
            .filter(|bits| {
                DyckRoute {
                    steps: (0..2 * m)
                        .map(|i| if bits >> i & 1 == 1 { Step::Up } else { Step::Down })
                        .collect(),
                }
                .is_valid(m)
            })
            .count();
        ensure!(catalan(m as u64) == BigUint::from(count), "M = {m}: {count}");
    }
    ensure!(catalan(10) == BigUint::from(16796u32), "C10 = {}", catalan(10));
    Ok("C_0..C_10 match route enumeration, C_10 = 16796".into())
}

fn search_behavior() -> Result<String, String> {
    // (a) Frontier against layer-by-layer enumeration.
    let mut frontiers = Vec::new();
    for k in [1, 2] {
        for alpha in ["1/3", "1/2", "2/3", "9/10"] {
            let alpha = r(alpha);
            let mut layer: Vec<Vec<Letter>> = vec![vec![]];
            let mut frontier = 0;
            for len in 1..=16 {
                layer = layer
                    .iter()
                    .flat_map(|w| {
                        (1..=k).map(move |a| {
                            let mut v = w.clone();
                            v.push(a);
                            v
                        })
                    })
                    .filter(|w| oracle::satisfies(w, alpha, Predicate::Lt))
                    .collect();
                if layer.is_empty() {
                    break;
                }
                frontier = len;
            }
            let res = search(k, alpha, 16, &SearchOptions::default()).map_err(|e| e.to_string())?;
            let got = match res.outcome {
                SearchOutcome::Exhausted { max_length, .. } => max_length,
                SearchOutcome::Found { ref word } => word.len(),
                SearchOutcome::BudgetExceeded { .. } => return Err("budget exceeded".into()),
            };
            ensure!(
                got == frontier,
                "k={k} alpha={alpha}: search {got}, enumeration {frontier}"
            );
            frontiers.push(format!("k{k}@{alpha}:{got}"));
        }
    }
    frontiers.dedup();

    // (b) Under a 10^7-node budget.
    let opts = SearchOptions {
        node_budget: 10_000_000,
        ..SearchOptions::default()
    };
    let mut stable = Vec::new();
    for n in [100, 200] {
        let res = search(3, r("888/1000"), n, &opts).map_err(|e| e.to_string())?;
        match res.outcome {
            SearchOutcome::Exhausted { max_length, longest } => {
                ensure!(
                    oracle::satisfies(&longest, r("888/1000"), Predicate::Lt),
                    "longest word fails oracle"
                );
                stable.push((max_length, res.nodes_visited));
            }
            o => return Err(format!("888/1000, n={n}: {o:?}")),
        }
    }
    ensure!(stable[0] == stable[1], "frontier moved: {stable:?}");
    let par = search_parallel(3, r("888/1000"), 100, &opts, Exec::default()).map_err(|e| e.to_string())?;
    ensure!(
        par.best_word().len() == stable[0].0,
        "parallel frontier {}",
        par.best_word().len()
    );

    let mut found = Vec::new();
    for n in [100, 200, 500] {
        let res = search(3, r("901/1000"), n, &opts).map_err(|e| e.to_string())?;
        let SearchOutcome::Found { word } = &res.outcome else {
            return Err(format!("901/1000, n={n}: {:?}", res.outcome));
        };
        if n == 100 {
            ensure!(
                oracle::satisfies(word, r("901/1000"), Predicate::Lt),
                "found word fails oracle"
            );
        }
        found.push(format!("{n} in {} nodes", res.nodes_visited));
    }
    Ok(format!(
        "(a) {}; (b) 888/1000 exhausted at {} after {} nodes, 901/1000 found {}",
        frontiers.join(" "),
        stable[0].0,
        stable[0].1,
        found.join(", ")
    ))
}

/// Plain quadratic LCS table, kept local so the check does not lean on the
/// library's kernels.
fn table_lcs(x: &[Letter], y: &[Letter]) -> usize {
    let mut t = vec![vec![0usize; y.len() + 1]; x.len() + 1];
    for i in 1..=x.len() {
        for j in 1..=y.len() {
            t[i][j] = if x[i - 1] == y[j - 1] {
                t[i - 1][j - 1] + 1
            } else {
                t[i - 1][j].max(t[i][j - 1])
            };
        }
    }
    t[x.len()][y.len()]
}

fn profile_substitute() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..500 {
        let len = rng.random_range(2..=30);
        let z: Vec<Letter> = (0..len).map(|_| rng.random_range(1..=3)).collect();
        let p = profile(&z, len / 2).map_err(|e| e.to_string())?;
        let (best, w) = oracle::simc(&z);
        let w = w.unwrap();
        ensure!(p.best == best && (p.witness.t, p.witness.ell) == (w.t, w.ell), "{z:?}");
    }

    let spec_path = core_dir().join("data/thue-morse.json");
    let spec = MorphismSpec::from_json(&std::fs::read_to_string(&spec_path).unwrap()).map_err(|e| e.to_string())?;
    let word = iterate(&spec, 1024).map_err(|e| e.to_string())?;
    let p = profile_with(&word, 100, Exec::default()).map_err(|e| e.to_string())?;
    ensure!(
        p == profile_with(&word, 100, Exec::Sequential).unwrap(),
        "parallel and sequential differ"
    );
    for &(ell, s) in &p.per_length_max {
        let want = (0..=word.len() - 2 * ell)
            .map(|t| table_lcs(&word[t..t + ell], &word[t + ell..t + 2 * ell]))
            .max()
            .unwrap();
        ensure!(
            s == Rational::new(want as u64, ell as u64).unwrap(),
            "ell {ell}: {s} vs {want}/{ell}"
        );
    }

    let out = simcoef(&[
        "profile",
        "--spec",
        spec_path.to_str().unwrap(),
        "--prefix",
        "1024",
        "--max-ell",
        "100",
    ]);
    ensure!(out.status.success(), "profile exited with {:?}", out.status);
    let csv = stdout(&out);
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    ensure!(rows.len() == 100, "{} csv rows", rows.len());
    let head = &word[..64];
    for (ell, row) in rows.iter().enumerate().take(32) {
        let ell = ell + 1;
        let want = oracle::all_pairs(head)
            .into_iter()
            .filter(|q| q.ell == ell)
            .map(|q| q.beta())
            .max()
            .unwrap();
        let sub = profile(head, 32).unwrap().per_length_max[ell - 1].1;
        ensure!(sub == want, "64-prefix ell {ell}");
        ensure!(row.starts_with(&format!("{ell},")), "row {row}");
    }
    Ok(format!(
        "500 random words match; Thue-Morse 1024, ell <= 100: best {} at ({}, {}), all per-length maxima match",
        p.best, p.witness.t, p.witness.ell
    ))
}

fn main() {
    let criteria: [(&str, Check); 11] = [
        ("minimum alphabet sizes", alphabet_thresholds),
        ("worked lcs and similarity values", worked_values),
        ("worked example golden trace", example_golden),
        ("codec round trip", codec_roundtrip),
        ("log injectivity", injectivity),
        ("oracle equivalence", oracle_equivalence),
        ("generator soundness", generator_soundness),
        ("counting bound contradiction", counting_bound),
        ("catalan cross-check", catalan_crosscheck),
        ("search behavior", search_behavior),
        ("profile against oracle", profile_substitute),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panic: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.2}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.2}s): {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
