use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn maset(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maset"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("maset-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn solve_prints_the_exact_expectation() {
    let o = maset(&["solve", "--game", "mm", "--pegs", "2", "--colors", "4"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "L=45 N=16 expected=45/16\n");
    let o = maset(&["solve", "--game", "ab", "--pegs", "2", "--colors", "4", "--no-additional"]);
    assert_eq!(stdout(&o), "L=30 N=12 expected=5/2\n");
}

#[test]
fn verify_mm2_passes() {
    let o = maset(&["verify", "--suite", "mm2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("6 patterns, 47 equations"), "{text}");
    assert!(text.ends_with("suite mm2: passed\n"));
}

#[test]
fn ab_listing_has_three_patterns() {
    let o = maset(&["derive", "--game", "ab", "--pegs", "2", "--format", "listing"]);
    assert!(o.status.success());
    let headers = stdout(&o).lines().filter(|l| l.starts_with("M_{2,")).count();
    assert_eq!(headers, 3);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["solve", "--game", "xx", "--pegs", "2", "--colors", "4"][..],
        &["derive", "--pegs", "2"],
        &["verify", "--suite", "nope"],
        &["frobnicate"],
    ] {
        assert_eq!(maset(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn derive_and_eval_round_trip() {
    let doc = scratch("ab2.json");
    let o = maset(&["derive", "--game", "ab", "--pegs", "2", "--out", doc.to_str().unwrap()]);
    assert!(o.status.success());
    let o = maset(&["eval", "--in", doc.to_str().unwrap(), "--colors", "4..5"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "n\tA_{2,0}\tA_{2,1}\tA_{2,2}\n4\t30\t7\t6\n5\t60\t13\t9\n");

    let text = fs::read_to_string(&doc).unwrap();
    let cut = scratch("truncated.json");
    fs::write(&cut, &text[..text.len() / 2]).unwrap();
    let o = maset(&["eval", "--in", cut.to_str().unwrap(), "--colors", "2..4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));

    let o = maset(&["eval", "--in", doc.to_str().unwrap(), "--colors", "5..2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn derive_is_deterministic() {
    let a = maset(&["derive", "--game", "mm", "--pegs", "2"]);
    let b = maset(&["derive", "--game", "mm", "--pegs", "2"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = maset(&["derive", "--game", "mm", "--pegs", "2", "--count-only"]);
    assert_eq!(stdout(&c), "6 patterns, 47 equations\n");
}
