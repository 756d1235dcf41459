use std::process::{Command, Output};

use walks_cli::{SeriesDocument, SolveBundle, VerifyReport};

fn walks(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_walks")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn coeff_at(doc: &SeriesDocument, t_num: i64) -> Option<&str> {
    doc.terms.iter().find(|t| t.t_num == t_num).map(|t| t.coeff.as_str())
}

#[test]
fn verify_reverse_kreweras_generic() {
    let o = walks(&["verify", "--model", "reverse-kreweras", "--a", "2", "--b", "3", "--c", "5", "--order", "15"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rep: VerifyReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(rep.passed());
    let row = rep.rows.iter().find(|r| r.quantity == "Q_{0,0}").unwrap();
    assert_eq!(row.solver.as_ref().unwrap()[3], "25");
    assert_eq!(row.enumeration.as_ref().unwrap()[3], "25");
    assert!(rep.rows.iter().all(|r| r.first_mismatch == "none" && r.orders_checked == "t^0..t^15"));
}

#[test]
fn expand_delta_roots() {
    let o = walks(&["expand", "--model", "reverse-kreweras", "--what", "delta-roots", "--order", "11"]);
    assert_eq!(o.status.code(), Some(0));
    let b: SolveBundle = serde_json::from_str(&stdout(&o)).unwrap();
    let x1 = b.series.iter().find(|s| s.quantity == "X1").unwrap();
    let head: Vec<(i64, &str)> = x1.terms.iter().filter(|t| t.t_num <= 10).map(|t| (t.t_num, t.coeff.as_str())).collect();
    assert_eq!(head, [(2, "4"), (5, "32"), (8, "448")]);
    assert_eq!(b.series.len(), 3);
}

#[test]
fn solve_kreweras_unit_weights() {
    let o = walks(&["solve", "--model", "kreweras", "--a", "1", "--b", "1", "--c", "1", "--order", "12"]);
    assert_eq!(o.status.code(), Some(0));
    let b: SolveBundle = serde_json::from_str(&stdout(&o)).unwrap();
    let q00 = b.series.iter().find(|s| s.quantity == "Q_{0,0}").unwrap();
    let coeffs: Vec<&str> = (0..=9).map(|k| coeff_at(q00, k).unwrap_or("0")).collect();
    assert_eq!(coeffs, ["1", "0", "0", "2", "0", "0", "16", "0", "0", "192"]);
    assert!(b.diagnostics.is_some());
}

#[test]
fn csv_output_round_trips() {
    let o = walks(&["enumerate", "--model", "reverse-kreweras", "--a", "2", "--b", "3", "--c", "5", "--order", "4", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let doc = SeriesDocument::from_csv(&text).unwrap();
    assert_eq!(doc.to_csv(), text);
    let step1: Vec<(i64, Option<i64>, &str)> = doc.terms.iter().filter(|t| t.t_num == 1).map(|t| (t.x_exp, t.y_exp, t.coeff.as_str())).collect();
    assert_eq!(step1, [(0, Some(1), "3"), (1, Some(0), "2")]);
}

#[test]
fn identical_runs_write_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let p = dir.path().join(name);
        let args = ["solve", "--model", "reverse-kreweras", "--a", "1/2", "--b", "3", "--c", "2", "--order", "8", "--out", p.to_str().unwrap()];
        assert_eq!(walks(&args).status.code(), Some(0));
        std::fs::read(&p).unwrap()
    };
    assert_eq!(run("one.json"), run("two.json"));
    // No temporary files left behind.
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 2);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["solve", "--model", "gessel"],
        vec!["solve", "--model", "kreweras", "--a", "0"],
        vec!["solve", "--model", "kreweras", "--b", "1/0"],
        vec!["solve", "--model", "kreweras", "--format", "csv"],
        vec!["enumerate", "--model", "kreweras", "--quantity", "point:1"],
        vec!["expand", "--model", "kreweras"],
    ] {
        assert_eq!(walks(&args).status.code(), Some(2), "{args:?}");
    }
}
