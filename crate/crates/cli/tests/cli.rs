use std::fs;
use std::path::{Path, PathBuf};

use discord_cli::format::{parse_state, serialize_state};
use discord_cli::run_command;
use discord_core::prelude::*;
use proptest::prelude::*;
use serde_json::Value;

fn run(dir: &Path, args: &[&str]) -> discord_cli::Outcome {
    let mut argv = vec!["qdiscord".to_string()];
    for a in args {
        // resolve `*.qst` arguments relative to the temp dir
        if a.ends_with(".qst") {
            argv.push(dir.join(a).display().to_string());
        } else {
            argv.push(a.to_string());
        }
    }
    run_command(argv)
}

fn json(dir: &Path, args: &[&str]) -> Value {
    let mut args = args.to_vec();
    args.push("--json");
    let out = run(dir, &args);
    assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

#[test]
fn help_and_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let help = run(dir.path(), &["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("discord"));
    let unknown = run(dir.path(), &["frobnicate"]);
    assert_eq!(unknown.code, 1);
    assert!(unknown.stderr.contains("Usage"));
    let bad_flag = run(dir.path(), &["entropy", "--state", "x.qst", "--bogus"]);
    assert_eq!(bad_flag.code, 1);
}

#[test]
fn input_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let missing = run(dir.path(), &["entropy", "--state", "missing.qst"]);
    assert_eq!(missing.code, 1);

    write(
        dir.path(),
        "short.qst",
        r#"{"dims": [2], "matrix_re": [[0.5, 0], [0, 0.4]], "matrix_im": [[0, 0], [0, 0]]}"#,
    );
    let short = run(dir.path(), &["entropy", "--state", "short.qst"]);
    assert_eq!(short.code, 1);
    assert!(short.stderr.contains("unit trace"), "{}", short.stderr);

    // the grid oracle needs a qubit B
    assert_eq!(run(dir.path(), &["gen", "--kind", "random", "--dims", "2,3", "--out", "q.qst"]).code, 0);
    assert_eq!(run(dir.path(), &["oracle", "--state", "q.qst"]).code, 1);
    // ssa needs three subsystems
    assert_eq!(run(dir.path(), &["ssa", "--state", "q.qst"]).code, 1);
    assert_eq!(run(dir.path(), &["gen", "--kind", "bell", "--dims", "2,3"]).code, 1);
    assert_eq!(run(dir.path(), &["gen", "--kind", "random", "--dims", "2,x"]).code, 1);
}

#[test]
fn bell_discord_report() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["gen", "--kind", "bell", "--dims", "2,2", "--out", "bell.qst"]).code, 0);
    let r = json(dir.path(), &["discord", "--state", "bell.qst"]);
    assert_eq!(r["command"], "discord");
    assert!((r["discord"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    assert!((r["classical_correlations"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    assert!((r["mutual_information"].as_f64().unwrap() - 2.0).abs() < 1e-6);
    assert_eq!(r["config"]["seed"], 0);
    assert_eq!(r["input"]["sha256"].as_str().unwrap().len(), 64);

    let o = json(dir.path(), &["oracle", "--state", "bell.qst", "--grid", "16"]);
    assert!(o["min_measured_conditional_entropy"].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn report_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    run(dir.path(), &["gen", "--kind", "random", "--dims", "2,2", "--seed", "12", "--out", "r.qst"]);
    let rho = parse_state(&fs::read_to_string(dir.path().join("r.qst")).unwrap()).unwrap();
    let r = json(dir.path(), &["discord", "--state", "r.qst", "--seed", "3"]);
    let lib = discord(
        &rho,
        &OptimizerConfig {
            seed: 3,
            ..OptimizerConfig::default()
        },
    )
    .unwrap();
    assert_eq!(r["discord"].as_f64().unwrap(), lib.discord);
    assert_eq!(
        r["min_measured_conditional_entropy"].as_f64().unwrap(),
        lib.min_measured_conditional_entropy
    );

    let e = json(dir.path(), &["entropy", "--state", "r.qst"]);
    assert_eq!(e["entropy"].as_f64().unwrap(), von_neumann(&rho).unwrap());
    assert_eq!(e["mutual_information"].as_f64().unwrap(), mutual_information(&rho).unwrap());

    // --swap measures A instead
    let s = json(dir.path(), &["discord", "--state", "r.qst", "--seed", "3", "--swap"]);
    let swapped = discord(
        &rho.swap().unwrap(),
        &OptimizerConfig {
            seed: 3,
            ..OptimizerConfig::default()
        },
    )
    .unwrap();
    assert_eq!(s["discord"].as_f64().unwrap(), swapped.discord);
}

#[test]
fn certify_generated_cq_state() {
    let dir = tempfile::tempdir().unwrap();
    run(dir.path(), &["gen", "--kind", "zero-discord", "--dims", "3,2", "--seed", "8", "--out", "cq.qst"]);
    let c = json(dir.path(), &["certify", "--state", "cq.qst"]);
    assert_eq!(c["verdict"], "accepted");
    assert!(c["residual"].as_f64().unwrap() <= 1e-8);

    run(dir.path(), &["gen", "--kind", "bell", "--dims", "2,2", "--out", "bell.qst"]);
    let b = json(dir.path(), &["certify", "--state", "bell.qst"]);
    assert_eq!(b["verdict"], "rejected");
    assert!(b["pointer_basis"].is_null());
}

#[test]
fn extend_then_ssa() {
    let dir = tempfile::tempdir().unwrap();
    run(dir.path(), &["gen", "--kind", "bell", "--dims", "2,2", "--out", "bell.qst"]);
    let ext = run(
        dir.path(),
        &["extend", "--state", "bell.qst", "--basis", "computational", "--out", "ghz.qst"],
    );
    assert_eq!(ext.code, 0, "{}", ext.stderr);
    let s = json(dir.path(), &["ssa", "--state", "ghz.qst"]);
    assert!((s["ssa_quantity"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(s["classification"], "quantum_positive");

    // without --out the state goes to stdout and parses back
    let printed = run(dir.path(), &["extend", "--state", "bell.qst", "--basis", "computational"]);
    let ghz = parse_state(&printed.stdout).unwrap();
    assert_eq!(ghz.dims(), &[2, 2, 2]);

    // a basis given as a file: Hadamard
    let h = std::f64::consts::FRAC_1_SQRT_2;
    write(
        dir.path(),
        "hadamard.json",
        &format!(r#"{{"matrix_re": [[{h}, {h}], [{h}, {m}]], "matrix_im": [[0, 0], [0, 0]]}}"#, m = -h),
    );
    let basis = dir.path().join("hadamard.json").display().to_string();
    let v = json(dir.path(), &["verify-proof", "--state", "bell.qst", "--basis", &basis]);
    assert!(v["max_deviation"].as_f64().unwrap() < 1e-10);
    assert!((v["ssa_gap"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn random_tripartite_ssa_nonnegative() {
    let dir = tempfile::tempdir().unwrap();
    for seed in ["1", "2", "3"] {
        run(dir.path(), &["gen", "--kind", "random", "--dims", "2,2,2", "--seed", seed, "--out", "abc.qst"]);
        let s = json(dir.path(), &["ssa", "--state", "abc.qst"]);
        assert!(s["ssa_quantity"].as_f64().unwrap() >= -1e-9);
    }
}

#[test]
fn gen_kinds() {
    let dir = tempfile::tempdir().unwrap();
    let pure = parse_state(&run(dir.path(), &["gen", "--kind", "pure", "--dims", "3,2"]).stdout).unwrap();
    assert!((pure.purity() - 1.0).abs() < 1e-10);
    let classical = parse_state(&run(dir.path(), &["gen", "--kind", "classical", "--dims", "2,2"]).stdout).unwrap();
    let m = classical.matrix();
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                assert_eq!(m[(i, j)].norm(), 0.0);
            }
        }
    }
    let low = parse_state(&run(dir.path(), &["gen", "--kind", "random", "--dims", "4", "--rank", "2"]).stdout).unwrap();
    let eigs = eig_hermitian(low.matrix()).unwrap().eigenvalues;
    assert!(eigs[0].abs() < 1e-10 && eigs[1].abs() < 1e-10);
}

#[test]
fn text_report_is_key_value_lines() {
    let dir = tempfile::tempdir().unwrap();
    run(dir.path(), &["gen", "--kind", "bell", "--dims", "2,2", "--out", "bell.qst"]);
    let out = run(dir.path(), &["entropy", "--state", "bell.qst"]);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines[0], "command: entropy");
    assert!(lines.iter().any(|l| l.starts_with("input.sha256: ")));
    assert!(lines.contains(&"mutual_information: 2.0"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn serialization_round_trips(seed in any::<u64>(), d_a in 1usize..4, d_b in 1usize..4, rank_pick in 0usize..16) {
        let mut rng = SeededRng::new(seed);
        let d = d_a * d_b;
        let rho = random_density(d, 1 + rank_pick % d, &mut rng).unwrap().with_dims(vec![d_a, d_b]).unwrap();
        let text = serialize_state(&rho);
        let back = parse_state(&text).unwrap();
        prop_assert_eq!(back.matrix(), rho.matrix());
        prop_assert_eq!(back.dims(), rho.dims());
        prop_assert_eq!(serialize_state(&back), text);
    }
}
