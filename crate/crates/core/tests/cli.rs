use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rlbwt(args: &[&str], stdin: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_rlbwt"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut input = child.stdin.take().unwrap();
    let data = stdin.to_vec();
    let writer = std::thread::spawn(move || {
        let _ = input.write_all(&data);
    });
    let out = child.wait_with_output().unwrap();
    writer.join().unwrap();
    out
}

fn ok(args: &[&str], stdin: &[u8]) -> Vec<u8> {
    let out = rlbwt(args, stdin);
    assert!(
        out.status.success(),
        "rlbwt {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out.stdout
}

#[test]
fn build_banana() {
    let doc = ok(&["build"], b"ananab");
    assert_eq!(
        doc,
        b"#RLBWT v1 n=7 r=5\n98\t1\n111\t2\n99\t1\n0\t1\n98\t2\n"
    );
    assert_eq!(ok(&["build", "--reverse"], b"banana"), doc);
    let bin = ok(&["build", "--format", "binary"], b"ananab");
    assert_eq!(
        ok(&["build", "--reverse", "--format", "binary"], b"banana"),
        bin
    );
}

#[test]
fn empty_input() {
    assert_eq!(ok(&["build"], b""), b"#RLBWT v1 n=1 r=1\n0\t1\n");
    assert_eq!(
        ok(&["build", "--format", "binary"], b""),
        [0x52, 0x4C, 0x42, 0x31, 0x01, 0x01, 0x01, 0x00, 0x01]
    );
    assert!(ok(&["invert"], b"#RLBWT v1 n=1 r=1\n0\t1\n").is_empty());
}

#[test]
fn invert_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let phrase: Vec<u8> = (0..700).map(|_| rng.gen()).collect();
    let mut data: Vec<u8> = phrase.iter().copied().cycle().take(1 << 20).collect();
    for _ in 0..1000 {
        let i = rng.gen_range(0..data.len());
        data[i] = rng.gen();
    }
    for format in ["text", "binary"] {
        let doc = ok(
            &["build", "--format", format, "--block-bytes", "4093"],
            &data,
        );
        assert_eq!(ok(&["invert", "--format", format], &doc), data);
    }
}

#[test]
fn files_and_stats() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.bin");
    let output = dir.path().join("out.rlbwt");
    let stats = dir.path().join("stats.json");
    let back = dir.path().join("back.bin");
    std::fs::write(&input, b"abracadabra").unwrap();
    let s = |p: &Path| p.to_str().unwrap().to_string();
    ok(
        &[
            "build",
            "-i",
            &s(&input),
            "-o",
            &s(&output),
            "--format",
            "binary",
            "--stats",
            &s(&stats),
        ],
        b"",
    );
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(&stats).unwrap()).unwrap();
    let keys: Vec<&str> = report
        .as_object()
        .unwrap()
        .keys()
        .map(String::as_str)
        .collect();
    for k in ["n", "r", "seconds", "footprint_bytes", "bytes_per_sec"] {
        assert!(keys.contains(&k), "missing {k}");
    }
    assert_eq!(report["n"], 11);
    assert!(report["r"].as_u64().unwrap() <= 12);
    assert!(report["footprint_bytes"].as_u64().unwrap() > 0);
    ok(
        &[
            "invert",
            "-i",
            &s(&output),
            "-o",
            &s(&back),
            "--format",
            "binary",
        ],
        b"",
    );
    assert_eq!(std::fs::read(&back).unwrap(), b"abracadabra");
    let leftovers = std::fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(leftovers, 4);

    let out = rlbwt(&["build", "--stats", "-"], b"xyz");
    assert!(out.status.success());
    let line = String::from_utf8(out.stderr).unwrap();
    assert!(line.starts_with("{\"n\":3,\"r\":4,"), "{line}");
}

#[test]
fn errors_exit_nonzero() {
    let out = rlbwt(&["invert"], b"#RLBWT v1 n=3 r=3\n5\t1\n5\t1\n0\t1\n");
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("same code"));
    let out = rlbwt(&["invert", "--format", "binary"], b"nope");
    assert!(!out.status.success());
    let out = rlbwt(&["build", "-i", "/nonexistent/input"], b"");
    assert!(!out.status.success());
    let out = rlbwt(&["build", "-o", "/nonexistent/dir/out"], b"abc");
    assert!(!out.status.success());
    assert!(!Path::new("/nonexistent/dir/out").exists());
}

#[test]
fn selftest_runs() {
    let a = ok(
        &["selftest", "--n", "5", "--max-len", "64", "--seed", "9"],
        b"",
    );
    let b = ok(
        &["selftest", "--n", "5", "--max-len", "64", "--seed", "9"],
        b"",
    );
    assert_eq!(a, b);
    assert!(String::from_utf8(a)
        .unwrap()
        .contains("5 of 5 suites passed"));
    ok(&["selftest", "--n", "3", "--max-len", "0"], b"");
}
