use std::path::PathBuf;
use std::process::{Command, Output};

use flagqk::algebra::rational;
use flagqk::{FlagVariety, LaurentPoly, TSeries};
use flagqk_cli::cache::Cache;
use flagqk_cli::report::{parse_series, Report};

fn flagqk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flagqk"))
        .args(args)
        .env_remove("FLAGQK_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Report {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = flagqk(&all);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    Report::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("flagqk-cli-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

#[test]
fn describe_gr24() {
    let r = json(&["describe", "--type", "A3", "--delta-p", "1,3"]);
    let d = r.description.unwrap();
    let labels: Vec<&str> = d.basis.iter().map(|b| b.basis.as_str()).collect();
    assert_eq!(labels, ["[]", "[1]", "[1,1]", "[2]", "[2,1]", "[2,2]"]);
    assert_eq!(d.basis[5].word, "s2.s1.s3.s2");
    assert_eq!(d.line_degrees.len(), 1);
    assert_eq!(d.line_degrees[0].alpha, 2);
    assert_eq!(d.line_degrees[0].delta_p_prime, vec![2]);
    assert!(d.other_degrees.is_empty());
    let text = String::from_utf8(
        flagqk(&["describe", "--type", "A", "--rank", "3", "--delta-p", "1,3"]).stdout,
    )
    .unwrap();
    assert!(text.contains("line degree α2: Δ_P' = {2}"));
}

#[test]
fn p2_product_matches_closed_form() {
    let r = json(&[
        "product",
        "--type",
        "A2",
        "--delta-p",
        "2",
        "--insert",
        "O[1]",
        "--insert",
        "O[1]",
        "--order",
        "4",
    ]);
    assert_eq!(r.order, Some(4));
    assert!(!r.equivariant);
    let p2 = FlagVariety::parse("A2", "2").unwrap();
    let result = r.result.unwrap();
    let coeff = |label: &str| {
        let terms = result
            .iter()
            .find(|b| b.basis == label)
            .map(|b| b.series.clone())
            .unwrap_or_default();
        parse_series(&terms, &p2, 4).unwrap()
    };
    let c = |n, d| TSeries::constant(2, 4, LaurentPoly::constant(2, rational(n, d)));
    let (t1, t2) = (TSeries::var(2, 2, 4, 0), TSeries::var(2, 2, 4, 1));
    let qe = &TSeries::novikov(2, 2, 4, 0) * &t1.exp().unwrap();
    assert_eq!(coeff("[]"), &qe * &t2);
    assert_eq!(
        coeff("[1]"),
        &qe * &(&(&(&c(1, 2) * &(&t2 * &t2)) - &(&t1 * &t2)) - &t2)
    );
    let tail = &(&(&qe * &t2) * &(&t1 - &t2)) * &(&(&c(1, 2) * &t1) + &c(1, 1));
    assert_eq!(coeff("[2]"), &c(1, 1) + &tail);
}

#[test]
fn json_round_trip_and_series_reparse() {
    for args in [
        &[
            "product",
            "--type",
            "A1",
            "--insert",
            "O[s1]",
            "--insert",
            "O[s1]",
            "--order",
            "3",
            "--equivariant",
        ][..],
        &[
            "potential",
            "--type",
            "A2",
            "--delta-p",
            "2",
            "--order",
            "2",
        ][..],
        &["describe", "--type", "B2"][..],
        &[
            "kgw",
            "--type",
            "A2",
            "--delta-p",
            "2",
            "--alpha",
            "1",
            "--insert",
            "O[2]",
            "--equivariant",
        ][..],
    ] {
        let r = json(args);
        let again = Report::from_json(&r.to_json()).unwrap();
        assert_eq!(again, r);
        assert_eq!(again.to_json(), r.to_json());
    }
    // coefficients re-parse to the engine's series
    let p1 = FlagVariety::parse("A1", "").unwrap();
    let r = json(&["potential", "--type", "A1", "--order", "3", "--equivariant"]);
    let parsed = parse_series(r.series.as_ref().unwrap(), &p1, 3).unwrap();
    assert_eq!(parsed, flagqk::qkbig::potential_g0(&p1, 3).unwrap());
}

#[test]
fn kgw_values() {
    let r = json(&[
        "kgw",
        "--type",
        "A2",
        "--delta-p",
        "2",
        "--alpha",
        "1",
        "--insert",
        "O[2]",
        "--insert",
        "O[2]",
    ]);
    assert_eq!(r.value.as_deref(), Some("1"));
    let r = json(&[
        "kgw",
        "--type",
        "A2",
        "--delta-p",
        "2",
        "--insert",
        "O[1]",
        "--insert",
        "O[1]",
    ]);
    assert_eq!(r.value.as_deref(), Some("1"));
    let r = json(&[
        "kgw",
        "--type",
        "A2",
        "--delta-p",
        "2",
        "--insert",
        "O[2]",
        "--insert",
        "O[1]",
    ]);
    assert_eq!(r.value.as_deref(), Some("0"));
}

#[test]
fn count_lines_in_p3() {
    let l = "O[s2.s1]";
    let r = json(&[
        "count-lines",
        "--type",
        "A3",
        "--delta-p",
        "2,3",
        "--insert",
        l,
        "--insert",
        l,
        "--insert",
        l,
        "--insert",
        l,
    ]);
    assert_eq!(r.value.as_deref(), Some("2"));
    let out = flagqk(&[
        "count-lines",
        "--type",
        "A3",
        "--delta-p",
        "2,3",
        "--insert",
        l,
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not enumerative"));
}

#[test]
fn user_errors_exit_1() {
    let cases: [&[&str]; 8] = [
        &["kgw", "--type", "C2", "--delta-p", "2", "--alpha", "1"],
        &[
            "product",
            "--type",
            "C2",
            "--delta-p",
            "2",
            "--insert",
            "O[s1]",
            "--insert",
            "O[s1]",
        ],
        &[
            "product",
            "--type",
            "A3",
            "--delta-p",
            "1,3",
            "--insert",
            "O[3,3]",
            "--insert",
            "O[1]",
        ],
        &[
            "product",
            "--type",
            "A2",
            "--delta-p",
            "2",
            "--insert",
            "O[1]",
        ],
        &["describe", "--type", "Z3"],
        &["describe", "--type", "A3", "--rank", "4"],
        &["describe"],
        &["nonsense"],
    ];
    for args in cases {
        let out = flagqk(args);
        assert_eq!(
            out.status.code(),
            Some(1),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let out = flagqk(cases[0]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("not a line degree"));
    assert_eq!(flagqk(&["--help"]).status.code(), Some(0));
}

#[test]
fn cache_is_transparent() {
    let dir = scratch("cache");
    let d = dir.to_str().unwrap();
    let args = [
        "product",
        "--type",
        "A3",
        "--delta-p",
        "1,3",
        "--insert",
        "O[1]",
        "--insert",
        "O[2,1]",
        "--order",
        "1",
    ];
    let plain = flagqk(&args);
    let cold = flagqk(&[&args[..], &["--cache-dir", d]].concat());
    let files = std::fs::read_dir(&dir).unwrap().count();
    assert!(files >= 3, "{files} cache files");
    let warm = flagqk(&[&args[..], &["--cache-dir", d]].concat());
    assert_eq!(plain.stdout, cold.stdout);
    assert_eq!(plain.stdout, warm.stdout);

    // corrupt every entry: results are unchanged and entries are rewritten
    for f in std::fs::read_dir(&dir).unwrap() {
        std::fs::write(f.unwrap().path(), "garbage").unwrap();
    }
    let env = Command::new(env!("CARGO_BIN_EXE_flagqk"))
        .args(args)
        .env("FLAGQK_CACHE_DIR", d)
        .output()
        .unwrap();
    assert_eq!(plain.stdout, env.stdout);
    let gr = FlagVariety::parse("A3", "1,3").unwrap();
    let entry = Cache::new(&dir).path::<flagqk::gkm::KTheory>(&gr);
    assert!(std::fs::read_to_string(entry)
        .unwrap()
        .contains("flagqk-table"));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn verify_suites() {
    for suite in ["cartan", "ktheory", "lines", "qk"] {
        let r = json(&["verify", suite]);
        let checks = r.checks.unwrap();
        assert!(!checks.is_empty());
        assert!(
            checks.iter().all(|c| c.passed && c.suite == suite),
            "{checks:?}"
        );
    }
}
