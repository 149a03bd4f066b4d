//! Replays the checked-in fuzz corpus through the parsers, with the same
//! round-trip checks the fuzz targets make.

use std::fs;
use std::path::PathBuf;

use abyss::universe::{parse_closed, parse_function, parse_open, parse_points, parse_set};
use abyss::{Rational, Surd, SymbolicFn};

fn corpus(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<(String, String)> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            let text = String::from_utf8_lossy(&fs::read(&p).unwrap()).into_owned();
            (p.file_name().unwrap().to_string_lossy().into_owned(), text)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "empty corpus for {target}");
    out
}

#[test]
fn rationals() {
    let mut ok = 0;
    for (name, s) in corpus("parse_rational") {
        if let Ok(q) = s.parse::<Rational>() {
            assert_eq!(q.to_string().parse::<Rational>().unwrap(), q, "{name}");
            ok += 1;
        }
    }
    assert!(ok >= 4);
    assert!("1/0".parse::<Rational>().is_err());
}

#[test]
fn points() {
    for (name, s) in corpus("parse_point") {
        if let Ok(x) = s.parse::<Surd>() {
            assert_eq!(x.to_string().parse::<Surd>().unwrap(), x, "{name}");
        }
        let _ = parse_points(&s);
    }
}

#[test]
fn functions() {
    let mut ok = 0;
    for (name, s) in corpus("parse_function") {
        let f = parse_function(&s).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(SymbolicFn::from_json(&f.to_json()).unwrap(), f, "{name}");
        ok += 1;
    }
    assert_eq!(ok, corpus("parse_function").len());
}

#[test]
fn sets_and_open_closed() {
    for (name, s) in corpus("parse_set") {
        if let Ok(set) = parse_set(&s) {
            assert!(!set.members_upto(8).is_empty(), "{name}");
        }
    }
    assert!(parse_set("points:sqrt2/2,1/2*sqrt2").is_err());
    let half = Surd::from(Rational::new(1, 2));
    for (_, s) in corpus("parse_open_closed") {
        if let Ok(o) = parse_open(&s) {
            let _ = o.contains(&half);
        }
        if let Ok(c) = parse_closed(&s) {
            let _ = c.contains(&half);
        }
    }
}

#[test]
fn evaluation_seeds() {
    for (name, s) in corpus("eval_parsed") {
        let (f, x) = s.split_once('\n').unwrap();
        let f = parse_function(f).unwrap();
        let x: Surd = x.trim().parse().unwrap();
        f.eval(&x).unwrap_or_else(|e| panic!("{name}: {e}"));
        f.local(&x).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}
