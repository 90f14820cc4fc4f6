use std::path::PathBuf;
use std::process::Command as Process;

use core_ideals::{Error, RingExt};
use core_ideals_cli::{run_command, CliError, Command, Flags, SpecFile};
use proptest::prelude::*;

fn corpus_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

fn corpus(name: &str) -> SpecFile {
    SpecFile::parse(&std::fs::read_to_string(corpus_path(name)).unwrap()).unwrap()
}

fn bin(args: &[&str]) -> (i32, String, String) {
    let out = Process::new(env!("CARGO_BIN_EXE_core-ideals")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

/// Generator lines printed under `name:` in a text report.
fn section(text: &str, name: &str) -> Vec<String> {
    text.lines()
        .skip_while(|l| *l != format!("{name}:"))
        .skip(1)
        .take_while(|l| l.starts_with("  "))
        .map(|l| l.trim().to_string())
        .collect()
}

#[test]
fn parses_the_cubic_quotient() {
    let spec = corpus("xyz_mod_z3.spec");
    assert_eq!(spec.ring.describe(), "GF(2^16)[x,y,z]/(z^3)");
    assert_eq!(spec.ideal("I").unwrap().num_gens(), 4);
    assert_eq!(spec.ideal("J").unwrap().num_gens(), 2);
    assert_eq!(spec.options.seed, Some(42));
    assert_eq!(spec.options.n, Some(2));
}

#[test]
fn every_corpus_file_round_trips() {
    for f in std::fs::read_dir(corpus_path("")).unwrap() {
        let text = std::fs::read_to_string(f.unwrap().path()).unwrap();
        let spec = SpecFile::parse(&text).unwrap();
        let again = SpecFile::parse(&spec.to_text()).unwrap();
        assert_eq!(spec, again);
        assert_eq!(spec.to_text(), again.to_text());
    }
}

#[test]
fn empty_quotient_gives_the_polynomial_ring() {
    let spec = SpecFile::parse("char = 5\next_degree = 1\nvars = x, y\nquotient =\nideal I = x, y\n").unwrap();
    assert!(spec.ring.is_polynomial_ring());
    assert_eq!(spec.ring.field().size(), 5);
}

#[test]
fn default_extension_degree_reaches_the_field_floor() {
    let spec = SpecFile::parse("char = 3\nvars = x\nideal I = x\n").unwrap();
    assert_eq!(spec.ring.field().size(), 177_147);
    let spec = SpecFile::parse_with("char = 3\nvars = x\nideal I = x\n", Some(2)).unwrap();
    assert_eq!(spec.ring.field().size(), 9);
}

fn parse_error(text: &str) -> (usize, usize, String) {
    match SpecFile::parse(text) {
        Err(Error::Parse { line, column, message }) => (line, column, message),
        other => panic!("expected a parse error, got {other:?}"),
    }
}

#[test]
fn rejects_bad_specs_with_positions() {
    let (line, _, msg) = parse_error("char = 2\nvars = x, y, x\nideal I = x\n");
    assert_eq!(line, 2);
    assert!(msg.contains("duplicate variable"), "{msg}");

    let (line, _, msg) = parse_error("char = 2\nvars = x\ncolour = red\nideal I = x\n");
    assert_eq!(line, 3);
    assert!(msg.contains("unknown key"), "{msg}");

    let (line, column, _) = parse_error("char = 2\nvars = x, y\nideal I = x^2, q\n");
    assert_eq!((line, column), (3, 16));

    let (line, _, msg) = parse_error("char = 4\nvars = x\nideal I = x\n");
    assert_eq!(line, 1);
    assert!(msg.contains("not prime"), "{msg}");

    let (_, _, msg) = parse_error("char = 2\nvars = x\n");
    assert!(msg.contains("no ideal"), "{msg}");

    let (line, _, _) = parse_error("char = 2\nvars = x\nquotient = 1\nideal I = x\n");
    assert_eq!(line, 3);

    let (line, _, msg) = parse_error("char = 2\nvars = x\nideal I = x\nideal I = x^2\n");
    assert_eq!(line, 4);
    assert!(msg.contains("duplicate ideal"), "{msg}");

    let (_, _, msg) = parse_error("char = 2\next_degree = 4\nmodulus = a^4+1\nvars = x\nideal I = x\n");
    assert!(msg.contains("irreducible"), "{msg}");
}

#[test]
fn explicit_modulus_is_used() {
    let spec = SpecFile::parse("char = 2\next_degree = 4\nmodulus = a^4+a^3+1\nvars = x\nideal I = x + a\n").unwrap();
    assert_eq!(spec.ring.field().modulus(), &[1, 0, 0, 1, 1]);
    let again = SpecFile::parse(&spec.to_text()).unwrap();
    assert_eq!(spec, again);
}

fn gens_text() -> impl Strategy<Value = String> {
    let term = (1u32..4, 0u32..4, 0u32..3, 0u32..3).prop_map(|(c, a, b, d)| format!("{c}*x^{a}*y^{b}*z^{d}"));
    let poly = proptest::collection::vec(term, 1..4).prop_map(|t| t.join(" + "));
    proptest::collection::vec(poly, 1..4).prop_map(|p| p.join(", "))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn print_then_parse_is_identity(
        p in prop::sample::select(vec![2u64, 3, 5, 7, 101]),
        e in 1u32..4,
        i in gens_text(),
        j in gens_text(),
        q in prop::sample::select(vec!["", "z^3", "z^2, x*y^4"]),
        seed in proptest::option::of(any::<u64>()),
        window in proptest::option::of(1usize..9),
    ) {
        let mut text = format!("char = {p}\next_degree = {e}\nvars = x, y, z\nquotient = {q}\nideal I = {i}\nideal K = {j}\n");
        if let Some(s) = seed {
            text.push_str(&format!("seed = {s}\n"));
        }
        if let Some(w) = window {
            text.push_str(&format!("window = {w}\n"));
        }
        let spec = SpecFile::parse(&text).unwrap();
        let again = SpecFile::parse(&spec.to_text()).unwrap();
        prop_assert_eq!(&spec, &again);
        prop_assert_eq!(spec.to_text(), again.to_text());
    }
}

#[test]
fn core_command_reproduces_the_golden_core() {
    let path = corpus_path("xyz_mod_z3.spec");
    let (code, out, _) = bin(&["core", path.to_str().unwrap(), "--n", "2", "--seed", "42"]);
    assert_eq!(code, 0);
    let spec = corpus("xyz_mod_z3.spec");
    let printed = spec.ring.parse_ideal(&section(&out, "core").join(", ")).unwrap();
    let golden = spec
        .ring
        .parse_ideal("x^2z^2, y^2z^2, x^4, y^4, x^3yz, xy^3z, x^2y^2z, x^2y^3, x^3y^2")
        .unwrap();
    assert!(printed.equals(&golden).unwrap());
    assert!(out.contains("  s = 2\n"));
}

#[test]
fn rednum_and_first_k() {
    let path = corpus_path("xyz_mod_z3.spec");
    let p = path.to_str().unwrap();
    let (code, out, _) = bin(&["rednum", p, "--J", "x^2, y^2"]);
    assert_eq!(code, 0);
    assert!(out.contains("  r = 2\n"), "{out}");
    let (code, out, _) = bin(&["kn", p, "--J", "x^2, y^2", "--n", "1"]);
    assert_eq!(code, 0);
    let spec = corpus("xyz_mod_z3.spec");
    let k1 = spec.ring.parse_ideal(&section(&out, "K_n").join(", ")).unwrap();
    assert!(k1.equals(spec.ideal("I").unwrap()).unwrap());
}

#[test]
fn identical_runs_give_identical_text() {
    let path = corpus_path("xyz_mod_z3.spec");
    let p = path.to_str().unwrap();
    for cmd in ["core", "ln", "check-chain"] {
        let a = bin(&[cmd, p, "--seed", "5"]);
        let b = bin(&[cmd, p, "--seed", "5"]);
        assert_eq!(a.0, 0, "{cmd}: {}", a.2);
        assert_eq!(a.1, b.1, "{cmd}");
    }
}

#[test]
fn json_report_has_the_fixed_keys() {
    let path = corpus_path("xyz_mod_z3.spec");
    let (code, out, _) = bin(&["check-conjecture", path.to_str().unwrap(), "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    for key in ["ring", "ideal", "command", "seed", "field_size", "results", "verdicts", "genericity_log", "timing_ms"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["command"], "check-conjecture");
    assert_eq!(v["field_size"], 65536);
    assert_eq!(v["verdicts"]["equal"], serde_json::json!([false, true]));
    assert!(v["results"]["core"].as_array().unwrap().len() == 9);
}

#[test]
fn every_command_runs_on_the_cubic_quotient() {
    let spec = corpus("xyz_mod_z3.spec");
    for cmd in [
        Command::Core,
        Command::Kn,
        Command::Ln,
        Command::Adjoint,
        Command::Rednum,
        Command::S,
        Command::CheckChain,
        Command::CheckConjecture,
        Command::CheckStabilization,
    ] {
        let report = run_command(cmd, &spec, &Flags::default()).unwrap();
        assert!(!report.results.is_empty() || !report.verdicts.is_empty(), "{cmd:?}");
    }
}

#[test]
fn exit_codes() {
    let path = corpus_path("xyz_mod_z3.spec");
    let p = path.to_str().unwrap();
    assert_eq!(bin(&["s", p]).0, 0);
    assert_eq!(bin(&["s", "/nonexistent.spec"]).0, 1);
    assert_eq!(bin(&["frobnicate", p]).0, 1);
    assert_eq!(bin(&["s", p, "--window", "x"]).0, 1);
    assert_eq!(bin(&["s", p, "--repeats", "1"]).0, 1);
    assert_eq!(bin(&["s", p, "--ideal", "Q"]).0, 1);
    assert_eq!(bin(&["rednum", p, "--J", "x^2"]).0, 1);

    let dir = std::env::temp_dir().join(format!("core-ideals-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.spec");
    std::fs::write(&bad, "char = 2\nvars = x\nideal I = x^2 +\n").unwrap();
    let (code, _, err) = bin(&["core", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("3:"), "{err}");

    // GF(2) has too few elements for general choices
    assert_eq!(bin(&["core", p, "--field-ext", "1"]).0, 3);
    std::fs::remove_dir_all(&dir).unwrap();

    assert_eq!(CliError::Engine(Error::TheoremViolation("x".into())).exit_code(), 2);
    assert_eq!(CliError::Engine(Error::Genericity("x".into())).exit_code(), 3);
    assert_eq!(CliError::Engine(Error::NonLocal).exit_code(), 1);
    assert_eq!(CliError::Usage("x".into()).exit_code(), 1);
}
