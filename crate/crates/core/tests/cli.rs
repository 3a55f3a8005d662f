use std::path::PathBuf;
use std::process::{Command, Output};

use curvchern::chern::{chern_direct, u0_reference};
use curvchern::fixtures;
use curvchern::hochschild::{Normalization, UChain};
use curvchern::manifest::{chain_records, parse_chain_records, ChainRecord};

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curvchern"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_temp(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn terms(o: &Output) -> Vec<ChainRecord> {
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    serde_json::from_value(v["terms"].clone()).unwrap()
}

#[test]
fn validate_exit_codes() {
    for (name, _) in fixtures::MANIFESTS {
        let o = run(&["validate", &fixture(name)]);
        assert_eq!(o.status.code(), Some(0), "{name}");
        assert!(stdout(&o).starts_with("valid"));
    }
    let o = run(&["validate", &fixture("mutants/associativity")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("associativity fails at (x, x, x)"));

    let dir = tempfile::tempdir().unwrap();
    let bad = fixtures::MANIFESTS[1]
        .1
        .replace("\"x2\": \"1\" } }", "\"x2\": \"1/0\" } }");
    assert_ne!(bad, fixtures::MANIFESTS[1].1);
    assert_eq!(
        run(&[
            "validate",
            write_temp(&dir, "zero.json", &bad).to_str().unwrap()
        ])
        .status
        .code(),
        Some(2)
    );
    let extra = fixtures::MANIFESTS[0]
        .1
        .replacen('{', "{ \"colour\": 1,", 1);
    assert_eq!(
        run(&[
            "validate",
            write_temp(&dir, "extra.json", &extra).to_str().unwrap()
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        run(&["validate", "/nonexistent.json"]).status.code(),
        Some(2)
    );
}

#[test]
fn chern_documents() {
    let mf = fixture("mf");
    let a = run(&["chern", &mf, "--method", "direct", "--format", "json"]);
    let b = run(&["chern", &mf, "--method", "direct", "--format", "json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);

    // the u^0 section is the twisted trace
    let input = fixtures::mf();
    let u0: Vec<ChainRecord> = terms(&a).into_iter().filter(|t| t.u == 0).collect();
    assert_eq!(
        u0,
        chain_records(&UChain::constant(u0_reference(&input), input.caps))
    );

    assert_eq!(
        run(&["chern", &mf, "--method", "finite"]).status.code(),
        Some(3)
    );

    let tri = fixture("triangular");
    let o = run(&["chern", &tri, "--u-order", "2", "--max-length", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let input = fixtures::triangular().with_caps(curvchern::hochschild::TruncationCaps::new(2, 6));
    let parsed = parse_chain_records(
        &input.algebra,
        Normalization::Normalized,
        input.caps,
        &terms(&o),
    )
    .unwrap();
    assert_eq!(parsed, chern_direct(&input).unwrap().chain);

    let text = stdout(&run(&[
        "chern", &tri, "--format", "text", "--method", "oracle",
    ]));
    assert!(text.contains("certification: pass") && text.contains("u^0 slice"));

    let nv: serde_json::Value =
        serde_json::from_slice(&run(&["chern", &tri, "--no-verify"]).stdout).unwrap();
    assert!(nv["report"].is_null());

    let f = run(&["chern", &tri, "--inject-fault", "--format", "text"]);
    assert_eq!(f.status.code(), Some(1));
    assert!(stdout(&f).contains("first nonzero stratum"));
}

#[test]
fn chern_homology_witness() {
    let tri = fixture("triangular");
    let o = run(&[
        "chern",
        &tri,
        "--u-order",
        "1",
        "--max-length",
        "4",
        "--homologous-to",
        &tri,
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["witnesses"]["outcome"], "witness");
    let o = run(&["chern", &tri, "--homologous-to", &fixture("mf")]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn verify_suites() {
    let o = run(&["verify", &fixture("exterior_summand"), "--suite", "lemma"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("pass          quot(F_*(u)(gamma_P)) = eta_pi"));

    let o = run(&[
        "verify",
        &fixture("triangular"),
        "--suite",
        "trace",
        "--samples",
        "10",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("pass          (tr 0) vanishing"));

    let o = run(&[
        "verify",
        &fixture("mf"),
        "--suite",
        "homotopy",
        "--samples",
        "5",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("pass          iota(u) p(u) - id = D H^e + H^e D"));
    assert!(s.contains("H literal, recorded"));

    let o = run(&[
        "verify",
        &fixture("curved_scalar"),
        "--suite",
        "all",
        "--samples",
        "5",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 6);
}

#[test]
fn compare_exit_codes() {
    for (name, _) in fixtures::MANIFESTS {
        let o = run(&["compare", &fixture(name)]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stdout(&o));
        assert!(stdout(&o).starts_with("equal"));
    }
    let o = run(&["compare", &fixture("triangular"), "--inject-fault"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("differ at stratum u^"));

    let o = run(&[
        "compare",
        &fixture("mf"),
        "--u-order",
        "3",
        "--max-length",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("all strata inconclusive"));
}

#[test]
fn usage_errors_are_parse_errors() {
    assert_eq!(run(&["chern"]).status.code(), Some(2));
    assert_eq!(
        run(&["chern", &fixture("mf"), "--method", "magic"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
