use std::fs;
use std::process::{Command, Output};

fn kdeck(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kdeck")).args(args).env_remove("KDECK_THREADS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn deck_prints_counts_and_sum_line() {
    let o = kdeck(&["deck", "--input", "0110", "-m", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "deck m=2 n=4\n00 1\n01 2\n10 2\n11 1\nsum=6 binom=6 OK\n");
}

#[test]
fn exit_codes() {
    let o = kdeck(&["deck", "--input", "01", "-m", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("m exceeds string length"));
    assert_eq!(kdeck(&["deck", "--input", "01x", "-m", "1"]).status.code(), Some(2));
    assert_eq!(kdeck(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(kdeck(&["verify", "0110", "1001", "-m", "2"]).status.code(), Some(0));
    assert_eq!(kdeck(&["verify", "0110", "1001", "-m", "3"]).status.code(), Some(1));
    assert_eq!(kdeck(&["search", "-m", "3", "-n", "7", "--expect", "holds"]).status.code(), Some(1));
    assert_eq!(kdeck(&["search", "-m", "3", "-n", "6", "--expect", "holds"]).status.code(), Some(0));
    let o = kdeck(&["search", "-m", "3", "-n", "12", "--memory-budget", "1000"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn verify_paper_confirms_all_pairs() {
    let o = kdeck(&["verify-paper"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("all 8 pairs collide"));
    let o = kdeck(&["--machine", "verify-paper", "--only-m", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("m=7 n=54 verdict=Collide"));
}

#[test]
fn flipped_digit_in_corpus_is_a_negative_finding() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pairs.txt");
    // 0110 vs 1011: same length and weight differs, so the 1-deck already disagrees
    fs::write(&path, "m=2 n=4 | 1_0 2_1 1_0 | 1_1 1_0 2_1\n").unwrap();
    let o = kdeck(&["verify-paper", "--corpus", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("Distinct"));
}

#[test]
fn corrupted_corpus_is_a_resource_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pairs.txt");
    fs::write(&path, "m=2 n=5 | 1_0 2_1 1_0 | 1_1 2_0 1_1\n").unwrap();
    let o = kdeck(&["verify-paper", "--corpus", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn nm_and_bounds() {
    let o = kdeck(&["nm", "-m", "3", "--max-n", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().last(), Some("N_3 = 6"));
    let o = kdeck(&["bounds", "-m", "1"]);
    assert_eq!(stdout(&o), "lower=- known=1 pigeonhole_upper=5\n");
}

#[test]
fn deck_then_reconstruct_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("deck.txt");
    let p = path.to_str().unwrap();
    for v in 0..32u32 {
        let x = format!("{v:05b}");
        assert_eq!(kdeck(&["deck", "--input", &x, "-m", "3", "--output", p]).status.code(), Some(0));
        let o = kdeck(&["reconstruct", "-m", "3", "--deck", p]);
        assert_eq!(o.status.code(), Some(0), "{x}");
        assert_eq!(stdout(&o).trim(), x);
    }
}

#[test]
fn seeded_sampling_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    let args = |out: &str, threads: &str| {
        kdeck(&["sample", "--input", "0110100", "-m", "3", "--count", "9000", "--seed", "17", "--threads", threads, "--output", out])
    };
    assert_eq!(args(a.to_str().unwrap(), "1").status.code(), Some(0));
    assert_eq!(args(b.to_str().unwrap(), "4").status.code(), Some(0));
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    let o = kdeck(&["discriminate", "--batch", a.to_str().unwrap(), "--all"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().last(), Some("argmax=0110100"));
}

#[test]
fn machine_search_output_is_key_value() {
    let o = kdeck(&["--machine", "search", "-m", "2", "-n", "4", "--threads", "2"]);
    let text = stdout(&o);
    assert!(text.lines().all(|l| l.contains('=')));
    assert!(text.contains("outcome=fails\n"));
    assert!(text.contains("witness_a=0110\nwitness_b=1001\n"));
}
