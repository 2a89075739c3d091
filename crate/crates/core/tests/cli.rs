use std::process::{Command, Output};

use perron_trees::RootedTree;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_perron-trees"))
        .args(args)
        .output()
        .expect("spawn binary")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn gen_round_trip_is_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    for (spec, args) in [
        ("random", vec!["gen", "random", "--n", "40", "--seed", "9"]),
        ("bethe", vec!["gen", "bethe", "--p", "3", "--k", "4"]),
        ("broom", vec!["gen", "broom", "--x", "3", "--y", "2"]),
        ("sum", vec!["gen", "sum", "star:3", "path:2"]),
        ("product", vec!["gen", "product", "path:3", "star:3"]),
        ("power", vec!["gen", "power", "path:2", "--k", "3"]),
    ] {
        for format in ["text", "json"] {
            let first = dir.path().join(format!("{spec}.{format}"));
            let mut a = args.clone();
            a.extend(["--format", format, "-o", first.to_str().unwrap()]);
            assert!(bin(&a).status.success(), "{spec} {format}");
            let bytes = std::fs::read(&first).unwrap();
            let tree = if format == "json" {
                RootedTree::from_json(std::str::from_utf8(&bytes).unwrap()).unwrap()
            } else {
                RootedTree::from_text(std::str::from_utf8(&bytes).unwrap()).unwrap()
            };
            let again = if format == "json" {
                tree.to_json() + "\n"
            } else {
                tree.to_text()
            };
            assert_eq!(again.as_bytes(), &bytes[..], "{spec} {format}");
        }
    }
}

#[test]
fn gen_bethe_order() {
    let o = bin(&["gen", "bethe", "--p", "3", "--k", "4"]);
    assert!(o.status.success());
    assert_eq!(RootedTree::from_text(&stdout(&o)).unwrap().order(), 21);
}

#[test]
fn matrix_q_of_sample_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sample.tree");
    std::fs::write(&path, "6\n0 1 1 2 3 3\n").unwrap();
    let o = bin(&["matrix", "--kind", "Q", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        "6 6\n6 2 3 1 1 1\n2 2 0 1 0 0\n3 0 3 0 1 1\n1 1 0 1 0 0\n1 0 1 0 1 0\n1 0 1 0 0 1\n"
    );
    let o = bin(&["matrix", "--kind", "Minv", path.to_str().unwrap()]);
    assert!(stdout(&o).starts_with("6 6\n3 -1 -1 0 0 0\n"));
}

#[test]
fn verify_star_ten() {
    let o = bin(&["verify", "--suite", "tree", "star:10"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let row = text.lines().find(|l| l.contains(",THM_5_1,")).unwrap();
    assert!(row.starts_with("star:10,10,THM_5_1,"));
    assert!(row.ends_with(",true,true"), "{row}");
}

#[test]
fn verify_exit_code_tracks_rows() {
    let o = bin(&[
        "verify",
        "--suite",
        "all",
        "path:7",
        "star:5",
        "random:30,3",
    ]);
    let text = stdout(&o);
    let any_false = text.lines().skip(1).any(|l| l.contains(",false,"));
    assert_eq!(o.status.code(), Some(if any_false { 1 } else { 0 }));
    assert!(text.lines().count() > 10);
}

#[test]
fn spectral_and_classify_outputs() {
    let o = bin(&["spectral", "star:3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["rho"].as_f64().unwrap() - (2.0 + 3f64.sqrt())).abs() < 1e-11);

    let o = bin(&["classify", "path:4"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["type"], "II");
    assert_eq!(v["characteristic"], serde_json::json!([2, 3]));
    assert!((v["beta"].as_f64().unwrap() - 0.5).abs() < 1e-11);

    let o = bin(&["classify", "path:3"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["type"], "I");
    assert_eq!(v["characteristic"], serde_json::json!([2]));
}

#[test]
fn ratio_csv() {
    let o = bin(&[
        "ratio", "--family", "bethe", "--k", "3", "--from", "2", "--to", "6",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("family,param,n,mu,rho,ratio,ratio_over_ln_n")
    );
    assert_eq!(lines.count(), 5);
    let o = bin(&["ratio", "--family", "star", "--params", "2000"]);
    let row = stdout(&o).lines().nth(1).unwrap().to_string();
    let ratio: f64 = row.split(',').nth(5).unwrap().parse().unwrap();
    assert!((ratio - 1.0).abs() < 5e-3);
}

#[test]
fn exit_codes() {
    assert_eq!(bin(&[]).status.code(), Some(2));
    assert_eq!(
        bin(&["gen", "bethe", "--p", "3", "--k", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        bin(&["ratio", "--family", "power", "--base", "path:2", "--params", "40"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        bin(&["spectral", "path:40", "--max-iter", "2"])
            .status
            .code(),
        Some(3)
    );
}
