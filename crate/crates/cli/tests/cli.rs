use std::fs;
use std::process::Command;

use cheb_cli::{run_command, EXIT_FAILED, EXIT_OK, EXIT_USAGE};
use cheb_core::cob::{saddle, Comp};
use cheb_core::coeff::{qint_ratio, FieldElem};
use cheb_core::complex::{Bn, ChainMap, GradedComplex};
use cheb_core::{FlatTangle, TLElement};
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String) {
    let out = run_command(std::iter::once("cheb").chain(args.iter().copied()));
    (out.code, out.stdout)
}

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_cheb"));
    for k in ["CHEB_CONFIG", "CHEB_N_MAX", "CHEB_DEPTH", "CHEB_CACHE_DIR", "CHEB_FORMAT", "CHEB_PARALLELISM"] {
        c.env_remove(k);
    }
    c
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn jw_three_has_the_expected_turnback_coefficient() {
    let (code, out) = run(&["jw", "--n", "3"]);
    assert_eq!(code, EXIT_OK);
    let p: TLElement = serde_json::from_str(&out).unwrap();
    assert_eq!(p.coeff(&FlatTangle::turnback(3, 1).unwrap()), -qint_ratio(2, 3));
}

#[test]
fn idempotents_sum_to_the_identity() {
    let (code, out) = run(&["idempotents", "--n", "4", "--primitive"]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    let items = v.as_array().unwrap();
    assert_eq!(items.len(), 6);
    let mut sum = TLElement::zero(4, 4);
    for it in items {
        let p: TLElement = serde_json::from_value(it["element"].clone()).unwrap();
        sum = sum.add(&p).unwrap();
    }
    assert_eq!(sum, TLElement::identity(4));
    let (_, out) = run(&["idempotents", "--n", "4", "--central"]);
    assert_eq!(json(&out).as_array().unwrap().len(), 3);
    let (code, _) = run(&["idempotents", "--n", "4"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn verify_tl_passes() {
    let (code, out) = run(&["verify", "--suite", "tl", "--n-max", "6"]);
    assert_eq!(code, EXIT_OK, "{out}");
    let v = json(&out);
    assert_eq!(v["suite"], "tl");
    let names: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"primitive_idempotents") && names.contains(&"catalan_counts"));
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn verify_output_is_deterministic() {
    let a = run(&["verify", "--suite", "arc", "--n-max", "2"]);
    let b = run(&["verify", "--suite", "arc", "--n-max", "2", "--parallelism", "3"]);
    assert_eq!(a, b);
}

#[test]
fn projector_kills_turnbacks() {
    let (code, out) = run(&["projector", "--n", "2", "--depth", "12", "--check", "turnbacks"]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["safe_window"], serde_json::json!([-10, 0]));
    assert!(v["turnbacks"].as_array().unwrap().iter().all(|r| r["turnback"]["contractible"] == true));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["bogus"]).0, EXIT_USAGE);
    assert_eq!(run(&["jw"]).0, EXIT_USAGE);
    assert_eq!(run(&["projector", "--n", "2", "--depth", "1"]).0, EXIT_USAGE);
    assert_eq!(run(&["verify", "--suite", "nope"]).0, EXIT_USAGE);
    assert_eq!(run(&["arc", "--n", "5"]).0, EXIT_USAGE);
    assert_eq!(run(&["simplify", "--input", "/nonexistent.json"]).0, EXIT_USAGE);
}

fn crossing() -> GradedComplex<Bn> {
    let id2 = FlatTangle::identity(2);
    let s = saddle(&id2, Comp::SrcArc(0), Comp::SrcArc(1)).unwrap();
    let x = GradedComplex::<Bn>::one_term(id2, 0, 0);
    let y = GradedComplex::<Bn>::one_term(s.tgt().clone(), 0, 0);
    let mut f = ChainMap::zero(0, s.degree().unwrap());
    f.add_entry(0, 0, s).unwrap();
    GradedComplex::cone(&x, &y, &f).unwrap()
}

#[test]
fn simplify_and_trace_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("c.json");
    let output = dir.path().join("c2.json");
    let c = crossing().star(&crossing()).unwrap();
    fs::write(&input, serde_json::to_string(&c.to_json()).unwrap()).unwrap();
    let (code, _) = run(&["simplify", "--input", input.to_str().unwrap(), "--output", output.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let s: Value = json(&fs::read_to_string(&output).unwrap());
    assert!(s["generators"].as_array().unwrap().len() < c.len());

    let trace = |p: &std::path::Path| json(&run(&["trace-euler", "--input", p.to_str().unwrap(), "--chebyshev"]).1);
    assert_eq!(trace(&input)["chebyshev"], trace(&output)["chebyshev"]);
}

#[test]
fn trace_of_a_projector_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("p.json");
    let (code, _) = run(&["projector", "--n", "2", "--depth", "10", "--output", p.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let (code, out) = run(&["trace-euler", "--input", p.to_str().unwrap(), "--chebyshev", "--expect", "2"]);
    assert_eq!(code, EXIT_OK, "{out}");
    let v = json(&out);
    let s2: FieldElem = serde_json::from_value(v["chebyshev"]["S_2"].clone()).unwrap();
    assert_eq!(s2, FieldElem::one());
    let (code, _) = run(&["trace-euler", "--input", p.to_str().unwrap(), "--expect", "1"]);
    assert_eq!(code, EXIT_FAILED);
}

#[test]
fn identity_closure_is_not_s2() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("id.json");
    let c = GradedComplex::<Bn>::one_term(FlatTangle::identity(2), 0, 0);
    fs::write(&input, serde_json::to_string(&c.to_json()).unwrap()).unwrap();
    let (code, out) = run(&["trace-euler", "--input", input.to_str().unwrap(), "--chebyshev", "--expect", "2"]);
    assert_eq!(code, EXIT_FAILED);
    let v = json(&out);
    assert!(v["chebyshev"].get("S_0").is_some());
}

#[test]
fn colored_models() {
    let (code, out) = run(&["colored", "--model", "khovanov", "--n", "3", "--triangle", "--theta-against", "jw"]);
    assert_eq!(code, EXIT_OK, "{out}");
    let v = json(&out);
    assert_eq!(v["triangle"]["passed"], true);
    assert_eq!(v["theta"]["passed"], true);
    assert_eq!(v["complex"]["base"], "TL");
}

#[test]
fn qn_and_arc() {
    let (code, out) = run(&["qn", "--n", "2", "--depth", "6"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(json(&out)["summary"]["block_sizes"], serde_json::json!([1, 1, 1, 1]));
    let (code, out) = run(&["arc", "--n", "1", "--hh0", "--hh", "--imax", "2"]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["graded_dimension"], serde_json::json!({"0": 1, "2": 1}));
    assert_eq!(v["hh0"]["rank"], 1);
    let ranks: Vec<u64> = v["hh"].as_array().unwrap().iter().map(|g| g["rank"].as_u64().unwrap()).collect();
    assert_eq!(ranks, vec![1, 0, 0]);
    assert!(v["hh_classical"][1]["rank"].as_u64().unwrap() > 0);
}

#[test]
fn text_format() {
    let (code, out) = run(&["verify", "--suite", "coeff", "--format", "text"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.lines().all(|l| l.starts_with("PASS ")));
}

fn depth_of(cmd: &mut Command) -> u64 {
    let out = cmd.output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    json(&String::from_utf8(out.stdout).unwrap())["depth"].as_u64().unwrap()
}

#[test]
fn configuration_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cheb.conf");
    fs::write(&cfg, "# defaults for this run\ndepth = 6\nn_max = 3\n").unwrap();
    let base = || {
        let mut c = bin();
        c.args(["projector", "--n", "2"]);
        c
    };
    assert_eq!(depth_of(&mut base()), 12);
    assert_eq!(depth_of(base().args(["--config", cfg.to_str().unwrap()])), 6);
    assert_eq!(depth_of(base().env("CHEB_CONFIG", &cfg)), 6);
    assert_eq!(depth_of(base().env("CHEB_CONFIG", &cfg).env("CHEB_DEPTH", "8")), 8);
    assert_eq!(depth_of(base().env("CHEB_CONFIG", &cfg).env("CHEB_DEPTH", "8").args(["--depth", "10"])), 10);

    fs::write(&cfg, "colour = blue\n").unwrap();
    let out = base().args(["--config", cfg.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
}

#[test]
fn cache_cold_and_warm_agree() {
    let dir = tempfile::tempdir().unwrap();
    let cold = bin().args(["jw", "--n", "5"]).env("CHEB_CACHE_DIR", dir.path()).output().unwrap();
    assert!(cold.status.success());
    assert!(fs::read_dir(dir.path()).unwrap().next().is_some(), "cache directory stayed empty");
    let warm = bin().args(["jw", "--n", "5"]).env("CHEB_CACHE_DIR", dir.path()).output().unwrap();
    let none = bin().args(["jw", "--n", "5"]).output().unwrap();
    assert_eq!(cold.stdout, warm.stdout);
    assert_eq!(cold.stdout, none.stdout);
}

#[test]
fn binary_exit_codes() {
    assert_eq!(bin().args(["verify", "--suite", "coeff"]).output().unwrap().status.code(), Some(EXIT_OK));
    assert_eq!(bin().arg("frobnicate").output().unwrap().status.code(), Some(EXIT_USAGE));
    assert_eq!(bin().arg("--help").output().unwrap().status.code(), Some(EXIT_OK));
}
