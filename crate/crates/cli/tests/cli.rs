use std::process::{Command, Output};

fn triband(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_triband"))
        .args(args)
        .output()
        .expect("triband binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn json(args: &[&str]) -> serde_json::Value {
    let out = triband(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn spectrum_lp_segment() {
    let v = json(&["spectrum", "--r", "1", "--s", "2", "--space", "lp", "--p", "2"]);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["result"]["continuous"]["kind"], "segment");
    assert_eq!(v["result"]["continuous"]["low"]["re"], -3.0);
    assert_eq!(v["result"]["continuous"]["high"]["re"], 5.0);
    assert_eq!(v["result"]["point"]["kind"], "empty");
    assert_eq!(v["result"]["residual"]["kind"], "empty");
}

#[test]
fn spectrum_bvp_segment() {
    let v = json(&["spectrum", "--r", "0", "--s", "1", "--space", "bvp", "--p", "3"]);
    assert_eq!(v["result"]["space"], "bvp");
    assert_eq!(v["result"]["continuous"]["low"]["re"], -2.0);
    assert_eq!(v["result"]["continuous"]["high"]["re"], 2.0);
}

#[test]
fn literals_echo_verbatim() {
    let v = json(&["spectrum", "--r", "0.1", "--s", "-1.50e0+2i", "--p", "2.5"]);
    assert_eq!(v["input"]["r"], "0.1");
    assert_eq!(v["input"]["s"], "-1.50e0+2i");
    assert_eq!(v["input"]["p"], "2.5");
    assert_eq!(v["operator"]["r"]["re"].as_f64(), Some(0.1));
    assert_eq!(v["operator"]["s"]["re"].as_f64(), Some(-1.5));
    assert_eq!(v["operator"]["s"]["im"].as_f64(), Some(2.0));
}

#[test]
fn invalid_parameters_exit_2() {
    for args in [
        vec!["spectrum", "--r", "1", "--s", "0"],
        vec!["spectrum", "--r", "1", "--s", "2", "--p", "1"],
        vec!["spectrum", "--r", "1", "--s", "two"],
        vec!["classify", "--r", "0", "--s", "1"],
        vec!["eigs", "--r", "0", "--s", "1", "--n", "0"],
        vec![
            "pseudospec",
            "--r",
            "0",
            "--s",
            "1",
            "--region",
            "1,2,3",
            "--res",
            "4",
            "--n",
            "5",
        ],
        vec![
            "resolve", "--r", "0", "--s", "1", "--lambda", "3", "--y", "1", "--k", "10", "--oracle", "5",
        ],
    ] {
        let out = triband(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn classify_examples() {
    let v = json(&["classify", "--r", "0", "--s", "1", "--lambda", "3"]);
    assert_eq!(v["result"]["class"], "ResolventSet");
    assert!((v["result"]["alpha1"]["re"].as_f64().unwrap() - 0.381966011).abs() < 1e-9);
    let v = json(&["classify", "--r", "0", "--s", "1", "--lambda", "1"]);
    assert_eq!(v["result"]["class"], "ContinuousSpectrum");
    let v = json(&["classify", "--r", "0", "--s", "1", "--lambda", "2"]);
    assert_eq!(v["result"]["class"], "ContinuousSpectrum");
    assert_eq!(v["result"]["endpoint"], true);
}

#[test]
fn resolve_csv_with_oracle() {
    let out = triband(&[
        "resolve", "--r", "0", "--s", "1", "--lambda", "3", "--y", "1", "--k", "3", "--oracle", "400",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,x_k,oracle_k,diff");
    assert_eq!(lines[1], "0,-0.381966011,-0.381966011,0");
    assert_eq!(lines.len(), 4);
    for line in &lines[1..] {
        let diff: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!(diff <= 1e-12, "{line}");
    }
}

#[test]
fn resolve_zero_input_gives_zeros() {
    let out = triband(&[
        "resolve", "--r", "0", "--s", "1", "--lambda", "3", "--y", "0,0", "--k", "4",
    ]);
    assert_eq!(stdout(&out), "k,x_k,oracle_k,diff\n0,0,,\n1,0,,\n2,0,,\n3,0,,\n");
}

#[test]
fn resolve_on_segment_exits_3_unless_forced() {
    let on = triband(&[
        "resolve", "--r", "0", "--s", "1", "--lambda", "1", "--y", "1", "--k", "3",
    ]);
    assert_eq!(on.status.code(), Some(3));
    let near = [
        "resolve", "--r", "0", "--s", "1", "--lambda", "1+1e-12i", "--y", "1", "--k", "3",
    ];
    assert_eq!(triband(&near).status.code(), Some(3));
    let mut forced = near.to_vec();
    forced.push("--force");
    assert_eq!(triband(&forced).status.code(), Some(0));
    // exactly on the circle there is nothing to force
    let on_forced = triband(&[
        "resolve", "--r", "0", "--s", "1", "--lambda", "1", "--y", "1", "--k", "3", "--force",
    ]);
    assert_eq!(on_forced.status.code(), Some(3));
}

#[test]
fn eigs_three_by_three() {
    let v = json(&["eigs", "--r", "0", "--s", "1", "--n", "3"]);
    let vals: Vec<f64> = v["result"]["eigenvalues"]
        .as_array()
        .unwrap()
        .iter()
        .map(|z| z["re"].as_f64().unwrap())
        .collect();
    let want = [-2f64.sqrt(), 0.0, 2f64.sqrt()];
    for (a, b) in vals.iter().zip(want) {
        assert!((a - b).abs() < 1e-8, "{vals:?}");
    }
}

#[test]
fn pseudospec_grid_shape() {
    let out = triband(&[
        "pseudospec",
        "--r",
        "0",
        "--s",
        "1",
        "--region",
        "-3,3,-1,1",
        "--res",
        "200",
        "--n",
        "500",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("lambda_re,lambda_im,value"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 200 * 200);
    assert_eq!(rows[0][..2], [-3.0, -1.0]);
    assert_eq!(rows[199][..2], [3.0, -1.0]);
    assert_eq!(rows[39_999][..2], [3.0, 1.0]);
    assert!(rows.iter().all(|r| r.len() == 3 && r[2] > 0.0));
}

#[test]
fn output_file_and_csv_format() {
    let dir = std::env::temp_dir().join(format!("triband-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("eigs.csv");
    let out = triband(&[
        "eigs",
        "--r",
        "1",
        "--s",
        "1+i",
        "--n",
        "2",
        "--format",
        "csv",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    // 1 + 2(1+i) cos(pi/3) and 1 + 2(1+i) cos(2 pi/3)
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("j,re,im"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 2);
    for (row, want) in rows.iter().zip([[0.0, 0.0, -1.0], [1.0, 2.0, 1.0]]) {
        assert!(row.iter().zip(want).all(|(a, b)| (a - b).abs() < 1e-12), "{row:?}");
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn unwritable_output_exits_1() {
    let out = triband(&[
        "eigs",
        "--r",
        "0",
        "--s",
        "1",
        "--n",
        "2",
        "--output",
        "/nonexistent-dir/x.json",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_table_lists_every_criterion() {
    let out = triband(&["verify", "--preset", "paper"]);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 11);
    for (i, line) in lines[..10].iter().enumerate() {
        assert!(line.starts_with("PASS") || line.starts_with("FAIL"), "{line}");
        assert!(line[4..].trim_start().starts_with(&(i + 1).to_string()), "{line}");
    }
    let any_fail = lines.iter().any(|l| l.starts_with("FAIL"));
    assert_eq!(out.status.code(), Some(if any_fail { 4 } else { 0 }));
    assert!(triband(&["verify", "--preset", "nope"]).status.code() == Some(2));
}
