use std::process::{Command, Output};

const GOOD: &str = r#"{"q":5,"r":2,"g":["1","T+1"]}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_drinfeld"))
        .args(args)
        .env_remove("DRINFELD_THREADS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn certify_exit_codes() {
    let ok = run(&["certify", "--module", GOOD]);
    assert_eq!(ok.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&ok)).unwrap();
    assert_eq!(v["verdict"], "SURJECTIVE");
    assert_eq!(v["seed"], 1);

    let unknown = run(&["certify", "--module", r#"{"q":5,"r":2,"g":["T","2"]}"#, "--emit", "text"]);
    assert_eq!(unknown.status.code(), Some(2));
    assert!(stdout(&unknown).contains("verdict: UNKNOWN"));
}

#[test]
fn bad_input_exits_one() {
    for module in [
        r#"{"q":5,"r":2,"g":["1","0"]}"#,
        r#"{"q":5,"r":0,"g":[]}"#,
        r#"{"q":4,"r":2,"g":["1","T"]}"#,
        "{not json",
    ] {
        let o = run(&["inspect", "--module", module]);
        assert_eq!(o.status.code(), Some(1), "{module}");
        assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    }
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["density", "--q", "3"]).status.code(), Some(1));
    assert_eq!(run(&["eulerprod", "--q", "9", "--p", "2", "--max-degree", "2"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn output_does_not_depend_on_threads() {
    let cases: [&[&str]; 3] = [
        &["density", "--q", "3", "--r", "2", "--x-max", "3"],
        &["frobsample", "--module", GOOD, "--max-degree", "2"],
        &["certify", "--module", GOOD],
    ];
    for args in cases {
        let one = run(&[&["--threads", "1"], args].concat());
        let four = run(&[&["--threads", "4"], args].concat());
        assert_eq!(one.status.code(), four.status.code());
        assert!(!one.stdout.is_empty());
        assert_eq!(one.stdout, four.stdout, "{args:?}");
        let env = Command::new(env!("CARGO_BIN_EXE_drinfeld"))
            .args(args)
            .env("DRINFELD_THREADS", "3")
            .output()
            .unwrap();
        assert_eq!(env.stdout, one.stdout);
    }
}

#[test]
fn euler_table() {
    let exact = stdout(&run(&["eulerprod", "--q", "3", "--p", "3", "--max-degree", "3", "--exact"]));
    let lines: Vec<&str> = exact.lines().collect();
    assert_eq!(lines[0], "B,c_n,partial,log_sum,linear_bound");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("1,3,6859/19683,"));
    assert!(lines[3].starts_with("3,8,"));
    let float = stdout(&run(&["eulerprod", "--q", "3", "--p", "3", "--max-degree", "1", "--float"]));
    let partial: f64 = float.lines().nth(1).unwrap().split(',').nth(2).unwrap().parse().unwrap();
    assert!((partial - 6859.0 / 19683.0).abs() < 1e-15);
}

#[test]
fn density_csv() {
    let out = stdout(&run(&["density", "--q", "3", "--r", "2", "--x-max", "2"]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "X,total,pi_r_count,pi_r_ratio,euler_bound_B,euler_partial");
    assert!(lines[1].starts_with("1,6,0,0,1,"));
    assert!(lines[2].starts_with("2,72,24,1/3,2,"));
}

#[test]
fn newton_json() {
    let o = run(&["newton", "--module", GOOD, "--prime", "T+1", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["v_z"]["value"], "-1/100");
    assert_eq!(v["v_z"]["formula_match"], true);
    assert_eq!(v["v_z"]["p_part_denominator"], "25");
    assert_eq!(v["vertices"].as_array().unwrap().len(), 4);
    // T^2+1 = (T+2)(T+3) over F_5.
    assert_eq!(run(&["newton", "--module", GOOD, "--prime", "T^2+1"]).status.code(), Some(1));
}

#[test]
fn torsion_and_exp_run() {
    let o = run(&["torsion", "--module", r#"{"q":3,"r":2,"g":["1","1"]}"#]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).is_empty());
    let o = run(&["exp", "--q", "3", "--prime", "T+1", "--gamma-val", "2", "--cutoff", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}
