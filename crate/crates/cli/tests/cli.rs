use std::path::Path;
use std::process::{Command, Output};

fn simcoef(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_simcoef"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    simcoef(args).status.code().unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["bounds", "--alpha", "37/50"]), 0);
    assert_eq!(code(&["bounds", "--alpha", "3/2"]), 2);
    assert_eq!(code(&["bounds", "--alpha", "one half"]), 2);
    assert_eq!(code(&["generate", "-k", "1", "--alpha", "1/2", "-n", "5"]), 2);
    assert_eq!(
        code(&[
            "search",
            "-k",
            "3",
            "--alpha",
            "888/1000",
            "-n",
            "100",
            "--node-budget",
            "500"
        ]),
        3
    );
    assert_eq!(
        code(&[
            "generate",
            "-k",
            "2",
            "--alpha",
            "1/2",
            "-n",
            "50",
            "--max-steps",
            "200",
            "--verify",
            "fast"
        ]),
        3
    );

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"params\": {\"k\": 3,").unwrap();
    assert_eq!(code(&["codec", "decode", bad.to_str().unwrap()]), 4);
    assert_eq!(code(&["codec", "decode", "no/such/log.json"]), 4);
    assert_eq!(code(&["profile", "--spec", bad.to_str().unwrap(), "--prefix", "8"]), 4);
}

#[test]
fn unary_search_is_exhausted_at_one() {
    let out = simcoef(&["search", "-k", "1", "--alpha", "1/2", "-n", "4"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["outcome"]["status"], "exhausted");
    assert_eq!(v["result"]["outcome"]["max_length"], 1);
}

fn read_all(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().into_string().unwrap(), std::fs::read(e.path()).unwrap())
        })
        .filter(|(name, _)| name != "config.json")
        .collect();
    files.sort();
    files
}

#[test]
fn generate_is_reproducible_and_rerunnable() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let args = |out: &Path| {
        let out = out.to_str().unwrap().to_owned();
        simcoef(&[
            "generate", "-k", "43", "--alpha", "37/50", "-n", "200", "--seed", "7", "--out", &out,
        ])
    };
    let first = args(&a);
    assert!(first.status.success());
    assert_eq!(first.stdout, args(&b).stdout);
    assert_eq!(read_all(&a), read_all(&b));

    let rerun = simcoef(&["rerun", a.join("config.json").to_str().unwrap()]);
    assert!(rerun.status.success());
    assert_eq!(rerun.stdout, first.stdout);

    let word = std::fs::read_to_string(a.join("word.txt")).unwrap();
    assert_eq!(word.split_whitespace().count(), 200);
    let decoded = simcoef(&["codec", "decode", a.join("log.json").to_str().unwrap()]);
    assert_eq!(
        String::from_utf8(decoded.stdout).unwrap(),
        std::fs::read_to_string(a.join("choices.txt")).unwrap()
    );
}

#[test]
fn bounds_csv_grid() {
    let out = simcoef(&[
        "bounds", "--alpha", "37/50", "-k", "43", "-n", "10", "--m-max", "90", "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,alpha,n,M,lhs,rhs,contradiction");
    assert_eq!(lines.len(), 91);
    assert!(lines[84].starts_with("43,37/50,10,84,") && lines[84].ends_with(",true"));
    assert!(lines[83].ends_with(",false"));
}
