use std::process::{Command, Output};

fn plength(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plength")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = plength(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

const GENUS_TWO: &str = "< a1, b1, a2, b2 | a1 b1 a1^-1 b1^-1 a2 b2 a2^-1 b2^-1 >";

#[test]
fn tcost_of_genus_two() {
    assert_eq!(stdout(&["tcost", GENUS_TWO]), "6\n");
}

#[test]
fn figure_eight_sweep_minimum() {
    let csv = stdout(&["family", "figure8", "--m", "1..50", "--n", "1..50"]);
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "m,n,degree,tcost,ratio,ratio_decimal,adjusted_decimal");
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 2500);
    let best = rows
        .iter()
        .min_by(|x, y| {
            let r = |v: &Vec<&str>| v[3].parse::<f64>().unwrap() / v[2].parse::<f64>().unwrap();
            r(x).partial_cmp(&r(y)).unwrap()
        })
        .unwrap();
    assert_eq!(best[..5], ["50", "50", "2500", "15406", "15406/2500"]);
    assert_eq!(best[5], "6.1624");
}

#[test]
fn contract_counts() {
    assert_eq!(
        stdout(&["contract", "--layout", "fig8proof", "--sub", "3,-1;1,4"]),
        "total=39 interior=15 remaining=24\n"
    );
}

#[test]
fn contract_sweep_is_csv() {
    let csv = stdout(&["contract", "--sub", "3,-1;1,4", "--kmax", "2"]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "k,total,interior,remaining,remaining_ratio");
    assert!(lines[1].starts_with("1,39,15,24,"));
    assert!(lines[2].starts_with("2,156,"));
}

#[test]
fn triangulate_output_round_trips() {
    let tri = stdout(&["triangulate", GENUS_TWO]);
    assert_eq!(stdout(&["tcost", tri.trim()]), "6\n");
    assert_eq!(stdout(&["triangulate", tri.trim()]), tri);
    let back = stdout(&["simplify", tri.trim()]);
    assert_eq!(stdout(&["tcost", back.trim()]), "6\n");
}

#[test]
fn subgroup_tables_feed_rewrite() {
    let tables = stdout(&["subgroups", "< x | x^6 >", "--max-index", "3"]);
    let list: Vec<serde_json::Value> = serde_json::from_str(&tables).unwrap();
    assert_eq!(list.len(), 3);
    let index_two = serde_json::to_string(&list[1]).unwrap();
    assert_eq!(stdout(&["rewrite", "< x | x^6 >", "--table", &index_two]), "< x_2 | x_2^3, x_2^3 >\n");
    assert_eq!(stdout(&["rewrite", "< x | x^6 >", "--table", &index_two, "--simplify"]), "< x_2 | x_2^3 >\n");
}

#[test]
fn files_and_out_flag() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("g2.txt");
    std::fs::write(&input, format!("{GENUS_TWO}\n")).unwrap();
    let out = dir.path().join("stable.csv");
    let status = plength(&["stable", input.to_str().unwrap(), "--max-index", "2", "--out", out.to_str().unwrap()]);
    assert!(status.status.success());
    assert!(status.stdout.is_empty());
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("index,raw_cost,simplified_cost,ratio,ratio_decimal,budget_exhausted,table\n"));
    assert_eq!(csv.lines().count(), 1 + 16);
}

#[test]
fn stable_reports_upper_bound_json() {
    let json = stdout(&["stable", "< x | x^5 >", "--max-index", "1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["kind"], "upper_bound");
    assert_eq!(v["best"]["ratio"], "3");
}

#[test]
fn abelianize_and_lll() {
    let text = stdout(&["abelianize", "< x | x^9 >", "--no-two-torsion"]);
    assert!(text.starts_with("Z/9\ntorsion_order=9 ceil_log3=2 tcost=7 floor_holds=true\n"));
    let text = stdout(&["lll", "--basis", "1,0;5,1"]);
    assert!(text.contains("covolume=1\n"));
    assert!(text.contains("certificate=pass"));
}

#[test]
fn output_is_deterministic() {
    let args = ["stable", GENUS_TWO, "--max-index", "3"];
    assert_eq!(plength(&args).stdout, plength(&args).stdout);
}

#[test]
fn usage_and_input_errors_exit_two() {
    for args in [
        vec!["bogus"],
        vec!["tcost"],
        vec!["tcost", "< a |"],
        vec!["family", "klein"],
        vec!["family", "surface", "--grid", "d=5..1"],
        vec!["stable", "< a | a >", "--budget", "x"],
        vec!["contract", "--sub", "1,0;2,0"],
    ] {
        let out = plength(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}
