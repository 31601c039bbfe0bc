use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn wavefront(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wavefront"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn region_exit_codes() {
    let out = wavefront(&["region", "--h", "0.6", "--c", "2"]);
    assert_eq!(code(&out), 3);
    assert_eq!(json(&out)["verdict"], "NOT_EXISTS");

    let out = wavefront(&["region", "--h", "0", "--c", "2.041"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["verdict"], "EXISTS");
    assert_eq!(v["minus_regime"], "TWO_TERM");
    assert_eq!(v["plus_regime"], "CLEAN");
    // ε is echoed next to c
    assert!((v["epsilon"].as_f64().unwrap() - 1.0 / (2.041f64 * 2.041)).abs() < 1e-15);

    assert_eq!(code(&wavefront(&["region", "--h", "-1", "--c", "2"])), 2);
    assert_eq!(code(&wavefront(&["region", "--h", "0", "--c", "1.5"])), 2);
    assert_eq!(code(&wavefront(&["region", "--h", "0", "--c", "fast"])), 2);
}

#[test]
fn critical_keyword_follows_the_curve() {
    let v = json(&wavefront(&["region", "--h", "0.5", "--c", "critical"]));
    assert_eq!(v["critical_speed"], true);
    assert_eq!(v["c"], v["c_star"]);
    // c*(h) is unbounded below 1/e
    assert_eq!(code(&wavefront(&["region", "--h", "0.2", "--c", "critical"])), 2);
}

#[test]
fn roots_report() {
    let out = wavefront(&["roots", "--h", "0.56", "--c", "2"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let l1 = v["roots"]["negative"]["lambda1"].as_f64().unwrap();
    let l2 = v["roots"]["negative"]["lambda2"].as_f64().unwrap();
    assert!(l1 < l2 && l2 < 0.0);
    for z in [l1, l2] {
        let psi = 0.25 * z * z - z - (-z * 0.56f64).exp();
        assert!(psi.abs() < 1e-12, "{psi}");
    }
}

#[test]
fn solve_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    assert_eq!(
        code(&wavefront(&["solve", "--h", "0.6", "--c", "2", "--out-dir", d])),
        3
    );
    assert_eq!(
        code(&wavefront(&[
            "solve",
            "--h",
            "0",
            "--c",
            "2.5",
            "--delta",
            "-1",
            "--out-dir",
            d
        ])),
        2
    );
    assert_eq!(code(&wavefront(&["solve", "--h", "0", "--out-dir", d])), 2);
    let out = wavefront(&[
        "solve",
        "--h",
        "0.5",
        "--c",
        "critical",
        "--max-iter",
        "5",
        "--out-dir",
        d,
    ]);
    assert_eq!(code(&out), 4);
    assert_eq!(json(&out)["converged"], false);
    // outputs are still written for inspection
    let report: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["exit_code"], 4);
}

fn read_profile_csv(path: &Path) -> Vec<(f64, f64)> {
    let mut rdr = csv::Reader::from_path(path).unwrap();
    assert_eq!(rdr.headers().unwrap().iter().collect::<Vec<_>>(), ["t", "phi"]);
    rdr.records()
        .map(|r| {
            let r = r.unwrap();
            (r[0].parse().unwrap(), r[1].parse().unwrap())
        })
        .collect()
}

#[test]
fn solve_writes_iterates_and_fits() {
    let dir = tempfile::tempdir().unwrap();
    let out = wavefront(&[
        "solve",
        "--h",
        "0",
        "--c",
        "2.0412415",
        "--emit-iterates",
        "4",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let iterates: Vec<_> = (0..4)
        .map(|j| read_profile_csv(&dir.path().join(format!("iterate_{j}.csv"))))
        .collect();
    let limit = read_profile_csv(&dir.path().join("profile.csv"));
    for w in iterates.windows(2) {
        assert!(w[0].iter().zip(&w[1]).all(|(a, b)| b.1 >= a.1 - 1e-12));
    }
    assert!(iterates[3].iter().zip(&limit).all(|(a, b)| b.1 >= a.1 - 1e-12));
    // every number is written with 17 significant digits
    let text = std::fs::read_to_string(dir.path().join("profile.csv")).unwrap();
    let row = text.lines().nth(1).unwrap();
    for cell in row.split(',') {
        let mantissa = cell.split('e').next().unwrap();
        assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17, "{cell}");
    }

    let report: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["iteration"]["converged"], true);
    assert!(report["fits"]["plus"]["fitted_rate"].is_number());
    let plus: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("fit_plus.json")).unwrap()).unwrap();
    let minus: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("fit_minus.json")).unwrap()).unwrap();
    assert!((plus["fitted_rate"].as_f64().unwrap() + 5.0 / 6.0).abs() < 0.01 * 5.0 / 6.0);
    assert!((minus["fitted_rate"].as_f64().unwrap() - 5.0 / 3.0).abs() < 0.01 * 5.0 / 3.0);
}

#[test]
fn curves_table() {
    let out = wavefront(&["curves", "--points", "61"]);
    assert_eq!(code(&out), 0);
    let mut rdr = csv::Reader::from_reader(&out.stdout[..]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    let num = |s: &str| s.parse::<f64>().unwrap();
    let h1 = num(&rows[0][6]);
    assert!((h1 - 0.5607711602).abs() < 1e-8);

    let at = |h: f64| {
        rows.iter()
            .find(|r| (num(&r[0]) - h).abs() < 1e-15)
            .expect("breakpoint row")
    };
    assert!((num(&at(h1)[2]) - 2.0).abs() < 1e-6);
    assert_eq!(&at(0.5 * 2f64.ln())[4], "inf");
    // beyond h₁ there is no finite c*
    assert_eq!(&rows.last().unwrap()[2], "");

    let eps: Vec<f64> = rows.iter().filter(|r| !r[1].is_empty()).map(|r| num(&r[1])).collect();
    assert!(eps.len() > 5);
    assert!(eps.windows(2).all(|w| w[1] > w[0]), "eps_star not increasing");
}

#[test]
fn validate_convergence_order() {
    let run = |delta: &str| {
        let out = wavefront(&["validate", "--delta", delta]);
        (code(&out), json(&out))
    };
    let (c1, v1) = run("0.01");
    let (c2, v2) = run("0.005");
    let (c3, v3) = run("0.02");
    assert_eq!((c1, c2), (0, 0));
    let e = |v: &Value| v["sup_error"].as_f64().unwrap();
    assert!(e(&v1) <= 1e-3);
    let ratio = e(&v1) / e(&v2);
    assert!((3.0..=5.0).contains(&ratio), "ratio {ratio}");
    // coarser grid: larger, still bounded
    assert!(e(&v3) > e(&v1) && e(&v3) <= 1e-3);
    assert_eq!(c3, 0);
    assert_eq!(code(&wavefront(&["validate", "--delta", "0"])), 2);
}

#[test]
fn sweep_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = wavefront(&[
        "solve",
        "--sweep",
        "0:0.6:3,2.2:2.6:2",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let mut rdr = csv::Reader::from_path(dir.path().join("summary.csv")).unwrap();
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 6);
    for r in &rows {
        let h: f64 = r[0].parse().unwrap();
        let expected = if h > 0.5607711602 { "not_exists" } else { "converged" };
        assert_eq!(&r[3], expected, "{r:?}");
        if expected == "converged" {
            assert!(dir.path().join(&r[9]).join("profile.csv").exists());
        }
    }
}
