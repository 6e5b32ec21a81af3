use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

struct Scratch(PathBuf);

impl Scratch {
    fn new(name: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("cfchroma-cli-{name}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Scratch(dir)
    }

    fn path(&self, file: &str) -> PathBuf {
        self.0.join(file)
    }

    fn write(&self, file: &str, text: &str) -> PathBuf {
        let p = self.path(file);
        std::fs::write(&p, text).unwrap();
        p
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cfchroma"))
        .args(args)
        .env_remove("CFCHROMA_NODE_LIMIT")
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn gen(s: &Scratch, file: &str, args: &[&str]) -> PathBuf {
    let out = s.path(file);
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", p(&out)]);
    let o = cli(&full);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    out
}

#[test]
fn gen_counts_and_summary() {
    let o = cli(&["gen", "affine", "--q", "3"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["ground_size"], 9);
    assert_eq!(v["edges"].as_array().unwrap().len(), 12);
    assert_eq!(v["meta"]["family"], "affine");
    assert!(String::from_utf8_lossy(&o.stderr).contains("2-almost disjoint verified"));

    let v = json(&cli(&[
        "gen", "product", "--lambda", "6", "--n", "3", "--k", "1", "--t", "3",
    ]));
    assert_eq!(v["ground_size"], 15);
    assert_eq!(v["edges"].as_array().unwrap().len(), 20);

    let v = json(&cli(&["gen", "grid"]));
    assert_eq!(v["meta"]["params"]["rows"], 4);
    assert_eq!(v["fixed"]["palette"], 3);

    let s = Scratch::new("gen");
    let k4 = gen(&s, "k4.json", &["affine", "--q", "2"]);
    let v = json(&cli(&["gen", "union", p(&k4), p(&k4)]));
    assert_eq!(v["ground_size"], 8);
    assert_eq!(v["edges"].as_array().unwrap().len(), 12);
    let v = json(&cli(&["gen", "lift", "--base", p(&k4), "--t", "1"]));
    assert_eq!(v["ground_size"], 8);
    assert_eq!(v["edges"].as_array().unwrap().len(), 12 + 16);
}

#[test]
fn gen_parameter_errors_are_usage_errors() {
    assert_eq!(code(&cli(&["gen", "affine", "--q", "4"])), 2);
    assert_eq!(code(&cli(&["gen", "quad", "--m", "3"])), 2);
    assert_eq!(
        code(&cli(&[
            "gen", "product", "--lambda", "4", "--n", "2", "--k", "1", "--t", "3"
        ])),
        2
    );
    assert_eq!(code(&cli(&["gen"])), 2);
    assert_eq!(code(&cli(&["frobnicate"])), 2);
    assert_eq!(code(&cli(&["--help"])), 0);
}

#[test]
fn solve_exit_codes() {
    let s = Scratch::new("solve");
    let grid = gen(&s, "grid.json", &["grid"]);
    let o = cli(&["solve", p(&grid), "--mode", "strict"]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    assert_eq!(v["verdict"], "infeasible");
    assert_eq!(v["stats"]["complete"], true);
    assert_eq!(v["palette"], 3);

    let ag3 = gen(&s, "ag3.json", &["affine", "--q", "3"]);
    let o = cli(&["solve", p(&ag3), "--optimize", "--oracle"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["optimum"], 3);
    assert!(v["oracle"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["agrees"] == true));

    let edge = s.write(
        "edge.json",
        r#"{"schema": 1, "ground_size": 2, "edges": [[0, 1]]}"#,
    );
    assert_eq!(code(&cli(&["solve", p(&edge), "--palette", "2"])), 0);
    assert_eq!(code(&cli(&["solve", p(&edge), "--palette", "1"])), 1);
    assert_eq!(
        code(&cli(&[
            "solve",
            p(&edge),
            "--palette",
            "2",
            "--backend",
            "sat"
        ])),
        0
    );
    // no palette anywhere
    assert_eq!(code(&cli(&["solve", p(&edge)])), 2);
}

#[test]
fn solve_node_limit_gives_unknown() {
    let s = Scratch::new("limit");
    let ag5 = gen(&s, "ag5.json", &["affine", "--q", "5"]);
    let o = cli(&["solve", p(&ag5), "--palette", "2", "--node-limit", "1"]);
    assert_eq!(code(&o), 3);
    assert_eq!(json(&o)["verdict"], "unknown");
    let o = Command::new(env!("CARGO_BIN_EXE_cfchroma"))
        .args(["solve", p(&ag5), "--palette", "2"])
        .env("CFCHROMA_NODE_LIMIT", "1")
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
    let o = cli(&["solve", p(&ag5), "--optimize", "--max-palette", "2"]);
    assert_eq!(code(&o), 3);
    assert_eq!(json(&o)["chromatic"]["lower_bound"], 3);
}

#[test]
fn malformed_input_is_usage_error() {
    let s = Scratch::new("bad");
    let bad = s.write("bad.json", r#"{"ground_size": 2, "edges": [[0, 5]]}"#);
    assert_eq!(code(&cli(&["solve", p(&bad), "--palette", "2"])), 2);
    let junk = s.write("junk.json", "not json");
    assert_eq!(code(&cli(&["solve", p(&junk), "--palette", "2"])), 2);
    assert_eq!(
        code(&cli(&[
            "solve",
            p(&s.path("missing.json")),
            "--palette",
            "2"
        ])),
        2
    );
    let v2 = s.write(
        "v2.json",
        r#"{"schema": 2, "ground_size": 2, "edges": [[0, 1]]}"#,
    );
    assert_eq!(code(&cli(&["solve", p(&v2), "--palette", "2"])), 2);
}

#[test]
fn verify_and_refute() {
    let s = Scratch::new("verify");
    let k4 = gen(&s, "k4.json", &["affine", "--q", "2"]);
    let proper = s.write(
        "c.json",
        r#"{"palette": 4, "assignment": {"0": 0, "1": 1, "2": 2, "3": 3}}"#,
    );
    let o = cli(&["verify", p(&k4), p(&proper)]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["passed"], true);
    assert_eq!(v["report"]["edges"].as_array().unwrap().len(), 6);
    let clash = s.write(
        "d.json",
        r#"{"palette": 4, "assignment": {"0": 0, "1": 0, "2": 2, "3": 3}}"#,
    );
    assert_eq!(code(&cli(&["verify", p(&k4), p(&clash)])), 1);
    let partial = s.write("e.json", r#"{"palette": 4, "assignment": {"0": 0}}"#);
    assert_eq!(code(&cli(&["verify", p(&k4), p(&partial)])), 1);
    assert_eq!(
        code(&cli(&["verify", p(&k4), p(&partial), "--mode", "weak"])),
        1
    );

    let p6 = gen(
        &s,
        "p6.json",
        &[
            "product", "--lambda", "6", "--n", "3", "--k", "1", "--t", "3",
        ],
    );
    let constant = s.write(
        "const.json",
        &serde_json::json!({"palette": 2, "assignment": (0..15).map(|v| (v.to_string(), Value::from(0))).collect::<serde_json::Map<_, _>>()}).to_string(),
    );
    let o = cli(&["refute", p(&p6), p(&constant)]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["refutation"]["y"], serde_json::json!([0, 1, 2]));
    assert_eq!(code(&cli(&["refute", p(&k4), p(&proper)])), 2);
}

#[test]
fn cnf_header() {
    let s = Scratch::new("cnf");
    let grid = gen(&s, "grid.json", &["grid"]);
    let layout = s.path("layout.json");
    let o = cli(&["cnf", p(&grid), "--layout", p(&layout)]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let header = text.lines().find(|l| l.starts_with("p ")).unwrap();
    let parts: Vec<&str> = header.split_whitespace().collect();
    assert_eq!(parts[..2], ["p", "cnf"]);
    let clauses: usize = parts[3].parse().unwrap();
    assert_eq!(text.lines().filter(|l| l.ends_with(" 0")).count(), clauses);
    let layout: Value = serde_json::from_str(&std::fs::read_to_string(layout).unwrap()).unwrap();
    assert_eq!(layout["palette"], 3);
}

#[test]
fn colorers_via_flags() {
    let s = Scratch::new("color");
    let edges: Vec<Vec<usize>> = (0..4)
        .map(|i| vec![0, 1 + 3 * i, 2 + 3 * i, 3 + 3 * i])
        .collect();
    let sunflower = s.write(
        "sun.json",
        &serde_json::json!({"ground_size": 13, "edges": edges}).to_string(),
    );
    for (alg, extra) in [
        ("greedy-max", vec![]),
        (
            "greedy-max",
            vec!["--scope", "max-vertices", "--palette", "4"],
        ),
        ("ind0", vec!["--palette", "2"]),
        ("layered", vec!["--palette", "2"]),
        ("witness-reduce", vec!["--tau", "2"]),
        ("disjointify", vec!["--palette", "3"]),
    ] {
        let mut args = vec!["color", p(&sunflower), "--algorithm", alg];
        args.extend(extra);
        let o = cli(&args);
        assert_eq!(code(&o), 0, "{alg}: {}", String::from_utf8_lossy(&o.stderr));
        let v = json(&o);
        assert_eq!(v["algorithm"], alg);
        assert_eq!(v["verification"]["passed"], true, "{alg}");
    }
    let o = cli(&[
        "color",
        p(&sunflower),
        "--algorithm",
        "ind0",
        "--palette",
        "2",
    ]);
    let v = json(&o);
    assert_eq!(v["d"], 2);
    assert!(v["certificate"]["steps"].as_array().unwrap().len() == 4);

    // a named failure exits 1
    let k3 = s.write(
        "k3.json",
        r#"{"ground_size": 3, "edges": [[0,1],[0,2],[1,2]]}"#,
    );
    let o = cli(&["color", p(&k3), "--algorithm", "ind0", "--palette", "2"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("edge 2"));
    assert_eq!(
        code(&cli(&["color", p(&k3), "--algorithm", "disjointify"])),
        2
    );
}

#[test]
fn bench_columns_come_from_the_solver() {
    let o = cli(&["bench", "--suite", "quad", "--max-m", "8"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "suite,instance,vertices,edges,chi,chi_cf,wchi_cf,status"
    );
    let chi_cf: Vec<usize> = lines
        .map(|l| l.split(',').nth(5).unwrap().parse().unwrap())
        .collect();
    assert_eq!(chi_cf.len(), 5);
    assert!(chi_cf.windows(2).all(|w| w[0] <= w[1]));

    let o = cli(&["bench", "--suite", "affine", "--q", "2,4"]);
    assert_eq!(code(&o), 1);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text
        .lines()
        .nth(2)
        .unwrap()
        .contains("error: invalid parameters"));
}
