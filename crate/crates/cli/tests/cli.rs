use std::process::Command;

use abyss_cli::{run, Outcome};
use serde_json::Value;

fn abyss(args: &[&str]) -> Outcome {
    run(std::iter::once("abyss").chain(args.iter().copied()))
}

fn json(o: &Outcome) -> Value {
    serde_json::from_str(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", o.stdout))
}

fn rational(v: &Value) -> (i64, i64) {
    let s = v.as_str().expect("rational string");
    let (n, d) = s.split_once('/').expect("n/d");
    (n.parse().unwrap(), d.parse().unwrap())
}

fn le(a: (i64, i64), b: (i64, i64)) -> bool {
    (a.0 as i128) * (b.1 as i128) <= (b.0 as i128) * (a.1 as i128)
}

#[test]
fn thomae_sup_on_the_middle_half() {
    let o = abyss(&[
        "sup",
        "--fn",
        "thomae",
        "--interval",
        "1/4",
        "3/4",
        "--k",
        "10",
    ]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v = json(&o);
    assert_eq!(v["schema"], "abyss/1");
    let iv = &v["result"]["interval"];
    let (lo, hi) = (rational(&iv["lower"]), rational(&iv["upper"]));
    assert!(le(lo, (1, 2)) && le((1, 2), hi));
    assert!(le((hi.0 * lo.1 - lo.0 * hi.1, hi.1 * lo.1), (1, 1024)));
}

#[test]
fn irrational_points_parse() {
    let o = abyss(&["eval", "--fn", "penny", "--x", "sqrt2/2"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(json(&o)["result"]["value"], "1/2");
    let o = abyss(&["eval", "--fn", "penny", "--x", "1/2"]);
    assert_eq!(json(&o)["result"]["value"], "0/1");
}

#[test]
fn demo_shows_the_gap() {
    let o = abyss(&["demo-abyss", "--family", "penny", "--depth", "12"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let r = &json(&o)["result"];
    assert_eq!(r["baseline"], "0/1");
    assert_eq!(r["oracle"], "1/2");
    assert_eq!(r["gap"], "1/2");
}

#[test]
fn refusal_exits_with_two() {
    let o = abyss(&["sup", "--fn", "penny", "--method", "qc"]);
    assert_eq!(o.code, 2);
    let e = &json(&o)["error"];
    assert_eq!(e["kind"], "refused");
    assert_eq!(e["operation"], "exists_value_above");
    assert!(e["anchor"].as_str().unwrap().contains("usco"));
    let o = abyss(&["cousin", "--fn", "cover-psi", "--class", "qc"]);
    assert_eq!(o.code, 2);
}

#[test]
fn fuel_exhaustion_exits_with_three() {
    let o = abyss(&["--fuel", "2", "sup", "--fn", "thomae", "--k", "20"]);
    assert_eq!(o.code, 3);
    let e = &json(&o)["error"];
    assert_eq!(e["kind"], "fuel_exhausted");
    assert!(e["best"].is_object());
}

#[test]
fn other_errors_exit_with_one() {
    assert_eq!(
        abyss(&["eval", "--fn", "no-such-function", "--x", "0"]).code,
        1
    );
    assert_eq!(abyss(&["eval", "--fn", "thomae", "--x", "2"]).code, 1);
    let usage = abyss(&["eval", "--fn", "thomae"]);
    assert_eq!(usage.code, 1);
    assert!(usage.stdout.is_empty() && !usage.stderr.is_empty());
    assert_eq!(abyss(&["--help"]).code, 0);
}

#[test]
fn output_and_plot_files() {
    let dir = std::env::temp_dir().join(format!("abyss-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("out.json");
    let plot = dir.join("plot.csv");
    let o = abyss(&[
        "--output",
        out.to_str().unwrap(),
        "--plot-data",
        plot.to_str().unwrap(),
        "--plot-depth",
        "4",
        "eval",
        "--fn",
        "step:1/2",
        "--x",
        "3/4",
    ]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["result"]["value"], "1/1");
    let csv = std::fs::read_to_string(&plot).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert!(lines[0].starts_with("x,fx"));
    assert_eq!(lines.len(), 1 + 17);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn binary_reads_fuel_from_the_environment() {
    let bin = env!("CARGO_BIN_EXE_abyss");
    let o = Command::new(bin)
        .args(["sup", "--fn", "thomae", "--k", "20"])
        .env("ABYSS_FUEL", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    let o = Command::new(bin)
        .args(["sup", "--fn", "thomae", "--k", "4"])
        .env("ABYSS_FUEL", "64")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let o = Command::new(bin)
        .args(["eval", "--fn", "thomae", "--x", "0"])
        .env("ABYSS_FUEL", "lots")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn commands_are_deterministic() {
    let args = ["realiser", "--method", "cliq", "--k", "8", "--cert", "8"];
    let a = abyss(&args);
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert_eq!(a, abyss(&args));
}
