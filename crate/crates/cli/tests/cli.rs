use std::process::{Command, Output};

use serde_json::Value;

fn toric(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toric")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn output_is_deterministic() {
    for args in [&["trace", "typeC", "2", "--all"][..], &["pi1", "exA"], &["lcs", "circuit", "6", "3"]] {
        let a = toric(args);
        let b = toric(args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn example_files_round_trip() {
    let dir = std::env::temp_dir().join(format!("toric-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for ex in [&["exA"][..], &["circuit", "6", "3"], &["typeC", "2"]] {
        let mut args = vec!["example"];
        args.extend_from_slice(ex);
        let file = toric(&args);
        assert!(file.status.success());
        let path = dir.join(format!("{}.json", ex.join("-")));
        std::fs::write(&path, &file.stdout).unwrap();
        let p = path.to_str().unwrap();
        for cmd in ["classify", "betti", "tc"] {
            let mut direct = vec![cmd];
            direct.extend_from_slice(ex);
            assert_eq!(json(&toric(&[cmd, p])), json(&toric(&direct)), "{cmd} {ex:?}");
        }
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn errors_carry_categories_and_exit_codes() {
    let cases: [(&[&str], &str); 5] = [
        (&["betti", "no-such-file.json"], "parse"),
        (&["tc", "circuit", "x"], "parse"),
        (&["bogus"], "parse"),
        (&["trace", "exA", "--stage", "2", "--epsilon", "0.9"], "parse"),
        (&["hrm", "exA", "--stage", "7"], "infeasible"),
    ];
    for (args, category) in cases {
        let out = toric(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert_eq!(json(&out)["error"]["category"], category, "{args:?}");
    }
}

#[test]
fn supersolvable_but_not_strict_is_reported() {
    let dir = std::env::temp_dir().join(format!("toric-cli-ss-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("a.json");
    std::fs::write(&path, r#"{"dimension": 2, "characters": [[1, 0], [1, 2]]}"#).unwrap();
    let out = json(&toric(&["classify", path.to_str().unwrap()]));
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(out["classification"], "supersolvable");
}

#[test]
fn text_format_names_generators() {
    let out = toric(&["--format", "text", "hrm", "exA", "--stage", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("X(0,1)") && text.contains("A(2,3)"), "{text}");
}
