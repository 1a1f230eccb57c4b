use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_catblocks"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("CATBLOCKS_THREADS", t),
        None => cmd.env_remove("CATBLOCKS_THREADS"),
    };
    cmd.output().expect("binary runs")
}

fn records(out: &Output) -> Vec<Value> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).expect("each line is JSON"))
        .collect()
}

fn kind<'a>(recs: &'a [Value], k: &str) -> Vec<&'a Value> {
    recs.iter().filter(|r| r["kind"] == k).collect()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn assert_consistent(out: &Output) {
    let recs = records(out);
    let failures = kind(&recs, "failure").len();
    let summary = kind(&recs, "summary");
    assert_eq!(summary.len(), 1);
    assert_eq!(summary[0]["failures"], failures);
    assert_eq!(code(out) == 0, failures == 0);
}

#[test]
fn golden_case_in_block_sweep() {
    let out = run(&["verify-blocks", "--n", "5", "--p", "7", "--max-part", "21"], None);
    assert_eq!(code(&out), 0);
    assert_consistent(&out);
    let recs = records(&out);
    let golden: Vec<&Value> =
        kind(&recs, "case").into_iter().filter(|r| r["lambda"] == serde_json::json!([20, 13, 7, 2, 2])).collect();
    assert_eq!(golden.len(), 1);
    assert_eq!(golden[0]["c1"], 2);
    assert_eq!(golden[0]["c2"], 1);
    assert_eq!(golden[0]["Q"], serde_json::json!([[19, 14, 7, 2, 2], [19, 13, 8, 2, 2]]));
}

#[test]
fn single_weight_option() {
    let out = run(&["verify-blocks", "--n", "5", "--p", "7", "--lambda", "20,13,7,2,2"], None);
    assert_eq!(code(&out), 0);
    let recs = records(&out);
    let case = kind(&recs, "case");
    assert_eq!(case.len(), 1);
    assert_eq!(case[0]["marked"], serde_json::json!([1, 4]));
    assert_eq!(case[0]["E"], serde_json::json!([[20, 14, 7, 2, 2], [20, 13, 8, 2, 2]]));
    assert_eq!(case[0]["F"], serde_json::json!([[19, 13, 7, 2, 2]]));
    assert_eq!(code(&run(&["verify-blocks", "--n", "5", "--p", "7", "--lambda", "1,2,0,0,0"], None)), 2);
    assert_eq!(code(&run(&["verify-blocks", "--n", "5", "--p", "7", "--lambda", "3,2"], None)), 2);
}

#[test]
fn small_block_sweep_passes() {
    let out = run(&["verify-blocks", "--n", "2", "--p", "5", "--max-part", "3"], None);
    assert_eq!(code(&out), 0);
    assert_consistent(&out);
    let recs = records(&out);
    // dominant (a, b) with 3 >= a >= b >= 0 and residues (a+1, b) adjacent or equal mod 5
    let mut expected = 0;
    for a in 0..=3i64 {
        for b in 0..=a {
            let d = (a + 1 - b).rem_euclid(5);
            expected += match d {
                1 | 4 => 1,
                0 => 2,
                _ => 0,
            };
        }
    }
    let cases = kind(&recs, "case");
    assert_eq!(cases.len(), expected);
    assert!(cases.iter().all(|c| c["relation_holds"] == true && c["atypical_pairing"] == true));
}

#[test]
fn config_errors_exit_2() {
    assert_eq!(code(&run(&["verify-blocks", "--n", "5", "--p", "3"], None)), 2);
    assert_eq!(code(&run(&["verify-blocks", "--n", "3", "--p", "9"], None)), 2);
    assert_eq!(code(&run(&["verify-blocks", "--n", "3", "--p", "7", "--r", "4"], None)), 2);
    assert_eq!(code(&run(&["casimir", "--n", "2", "--p", "2"], None)), 2);
    assert_eq!(code(&run(&["ktheory", "--n", "6"], None)), 2);
    assert_eq!(code(&run(&["ktheory", "--n", "5"], None)), 2);
    assert_eq!(code(&run(&["ktheory", "--n", "2"], Some("zero"))), 2);
    assert_eq!(code(&run(&["ktheory"], None)), 2);
}

#[test]
fn casimir_runs() {
    for (n, p, weights) in [("2", "5", 25), ("3", "7", 343)] {
        let out = run(&["casimir", "--n", n, "--p", p], None);
        assert_eq!(code(&out), 0);
        assert_consistent(&out);
        let recs = records(&out);
        let sep = kind(&recs, "separation");
        assert_eq!(sep[0]["weights_checked"], weights);
        assert_eq!(sep[0]["counterexamples"], 0);
    }
}

#[test]
fn n2_suite_report() {
    let out = run(&["n2-suite"], None);
    assert_eq!(code(&out), 0);
    assert_consistent(&out);
    let recs = records(&out);
    assert_eq!(kind(&recs, "algebra")[0]["dim"], 8);
    assert_eq!(kind(&recs, "algebra")[0]["associativity_failures"], 0);
    assert_eq!(kind(&recs, "cartan")[0]["cartan"], serde_json::json!([[2, 2], [2, 2]]));
    let k = kind(&recs, "k_matrices")[0];
    assert_eq!(k["E_-1"]["[k]"], serde_json::json!({"[L_0]": "2", "[L_s]": "2"}));
    assert_eq!(k["matches_pcanonical"], true);
    let i = kind(&recs, "intertwiner")[0];
    assert_eq!(i["dimension"], 2);
    assert_eq!(i["unit_coefficient_map_in_span"], false);
    assert_eq!(i["rescaled_in_span"], true);
}

#[test]
fn ktheory_n2() {
    let out = run(&["ktheory", "--n", "2"], None);
    assert_eq!(code(&out), 0);
    assert_consistent(&out);
    let recs = records(&out);
    let comm = kind(&recs, "commutator");
    assert_eq!(comm.len(), 6);
    for c in &comm {
        assert!(c["epsilon"].is_i64());
    }
    let eps = kind(&recs, "epsilon")[0]["epsilon"].as_i64().unwrap();
    let want = if eps > 0 { "q + q^-1" } else { "-q - q^-1" };
    assert!(comm.iter().filter(|c| c["r"] == 0).all(|c| c["fe_minus_ef"] == want));
    assert_eq!(kind(&recs, "n2_kernel_dictionary").len(), 1);
}

#[test]
fn ktheory_n3_theta() {
    let out = run(&["ktheory", "--n", "3"], None);
    assert_eq!(code(&out), 0);
    let recs = records(&out);
    let theta = kind(&recs, "theta");
    assert_eq!(theta.len(), 3);
    assert!(theta.iter().all(|t| t["e_holds"] == true && t["f_holds"] == true));
    assert_eq!(kind(&recs, "pole_cancellation")[0]["failures"], 0);
}

#[test]
fn output_is_independent_of_thread_count() {
    for args in [
        vec!["verify-blocks", "--n", "4", "--p", "7", "--max-part", "14"],
        vec!["ktheory", "--n", "3"],
        vec!["casimir", "--n", "3", "--p", "5"],
    ] {
        let one = run(&args, Some("1"));
        let many = run(&args, Some("4"));
        assert_eq!(code(&one), 0);
        assert_eq!(one.stdout, many.stdout, "{args:?}");
        let flag = {
            let mut a = args.clone();
            a.extend(["--threads", "3"]);
            run(&a, None)
        };
        assert_eq!(one.stdout, flag.stdout, "{args:?}");
    }
}

#[test]
fn out_file_and_tsv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.tsv");
    let out = run(&["casimir", "--n", "2", "--p", "5", "--format", "tsv", "--out", path.to_str().unwrap()], None);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "#counterexamples\tkind\tn\tp\tpairs_checked\tweights_checked");
    assert_eq!(lines[1], "0\tseparation\t2\t5\t25\t25");
    assert!(lines[2].starts_with('#'));
    assert!(lines[3].contains("summary"));
}
