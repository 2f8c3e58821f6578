//! Integration tests for the command-line surface: file formats, exit
//! codes, and the conversion pipelines.

use std::path::Path;
use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_partrand")
}

fn run_in(dir: &Path, args: &[&str]) -> (i32, String, String) {
    let out = Command::new(bin())
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).to_string(),
        String::from_utf8_lossy(&out.stderr).to_string(),
    )
}

#[test]
fn eval_measure_reads_the_set_format() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("f.txt"), "# comment\n@\n00\n\n01\n").unwrap();
    let (code, out, _) = run_in(dir.path(), &["eval-measure", "--measure", "dwt(len)", "f.txt"]);
    assert_eq!(code, 0);
    // 1 + 1/4 + 1/4 = 3/2.
    assert!(out.contains("value=3*2^-1"), "{out}");
}

#[test]
fn parse_errors_exit_2_with_offsets() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("f.txt"), "0\n").unwrap();
    let (code, _, err) = run_in(dir.path(), &["eval-measure", "--measure", "dwt(", "f.txt"]);
    assert_eq!(code, 2);
    assert!(err.contains("offset 4"), "{err}");

    std::fs::write(dir.path().join("bad.txt"), "012\n").unwrap();
    let (code, _, err) = run_in(dir.path(), &["eval-measure", "--measure", "dwt(len)", "bad.txt"]);
    assert_eq!(code, 2);
    assert!(err.contains("line 1"), "{err}");

    let (code, _, _) = run_in(dir.path(), &["prop-suite", "enormous"]);
    assert_eq!(code, 2);
}

#[test]
fn resource_caps_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, err) = run_in(
        dir.path(),
        &["dual-check", "--pair", "dwt-kp", "--universe", "40"],
    );
    assert_eq!(code, 3, "{err}");
    assert!(err.contains("cap"), "{err}");

    // Nine strings exceed the partition limit of eight.
    let many: String = (0..9)
        .map(|i| format!("{:04b}\n", i))
        .collect::<Vec<_>>()
        .join("");
    std::fs::write(dir.path().join("many.txt"), many).unwrap();
    let (code, _, err) = run_in(
        dir.path(),
        &["sqrt-of-rule", "--rule", "kp(len)", "many.txt"],
    );
    assert_eq!(code, 3, "{err}");
}

#[test]
fn membership_and_table_formats() {
    let dir = tempfile::tempdir().unwrap();
    // Membership reads the minimal graph: {(@,3),(0,1)} weighs 5/8 < 1.
    std::fs::write(dir.path().join("r.txt"), "# table\n@ 3\n0 1\n0 4\n").unwrap();
    let (code, out, _) = run_in(dir.path(), &["rule-member", "--rule", "kp(len)", "r.txt"]);
    assert_eq!(code, 0);
    assert!(out.contains("pairs=3"), "{out}");
    assert!(out.contains("member=true"), "{out}");

    // Full weight exactly 1 misses the strict bound.
    std::fs::write(dir.path().join("full.txt"), "@ 0\n").unwrap();
    let (code, out, _) = run_in(dir.path(), &["rule-member", "--rule", "kp(len)", "full.txt"]);
    assert_eq!(code, 0);
    assert!(out.contains("member=false"), "{out}");

    let (code, out, _) = run_in(
        dir.path(),
        &["sqrt-of-measure", "--measure", "dwt(len)", "r.txt"],
    );
    assert_eq!(code, 0);
    assert!(out.contains("member="), "{out}");
}

#[test]
fn conversion_pipeline_round_trips_through_files() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("r.txt"), "00 1\n11 2\n").unwrap();
    let (code, blocks, _) = run_in(dir.path(), &["to-tests", "--imax", "2", "r.txt"]);
    assert_eq!(code, 0);
    assert_eq!(blocks, "[level 0]\n00\n11\n[level 1]\n00\n[level 2]\n");
    std::fs::write(dir.path().join("fam.txt"), &blocks).unwrap();

    let (code, _, _) = run_in(
        dir.path(),
        &["verify-test", "--measure", "rsqrt(kp(len))", "fam.txt"],
    );
    assert_eq!(code, 0);

    // The witness conversion reads even levels from 2 upward.
    std::fs::write(dir.path().join("fam2.txt"), "[level 0]\n0\n[level 2]\n00\n").unwrap();
    let (code, table, _) = run_in(dir.path(), &["to-witness", "fam2.txt"]);
    assert_eq!(code, 0);
    assert_eq!(table, "00 1\n");
    std::fs::write(dir.path().join("w.txt"), &table).unwrap();

    let (code, _, _) = run_in(
        dir.path(),
        &["verify-witness", "--measure", "dwt(len)", "w.txt"],
    );
    assert_eq!(code, 0);

    // Merging the family with itself shifts the levels diagonally.
    let (code, merged, _) = run_in(
        dir.path(),
        &["merge-tests", "--imax", "1", "fam.txt", "fam.txt"],
    );
    assert_eq!(code, 0);
    assert_eq!(merged, "[level 0]\n00\n[level 1]\n");
}

#[test]
fn verify_failures_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("fam.txt"), "[level 2]\n0\n").unwrap();
    let (code, out, _) = run_in(
        dir.path(),
        &["verify-test", "--measure", "dwt(len)", "fam.txt"],
    );
    assert_eq!(code, 1);
    assert!(out.contains("FAIL"), "{out}");

    std::fs::write(dir.path().join("w.txt"), "0 -1\n").unwrap();
    let (code, out, _) = run_in(
        dir.path(),
        &["verify-witness", "--measure", "dwt(len)", "w.txt"],
    );
    assert_eq!(code, 1);
    assert!(out.contains("FAIL"), "{out}");
}

#[test]
fn profile_respects_limit_and_reports_tail() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("x.txt"), "0101 0101\n").unwrap();
    std::fs::write(dir.path().join("w.txt"), "01 0\n0101 1\n").unwrap();
    let (code, out, _) = run_in(dir.path(), &["profile", "--limit", "4", "x.txt", "w.txt"]);
    assert_eq!(code, 0);
    assert!(out.contains("n=2 deficiency=2"), "{out}");
    assert!(out.contains("n=4 deficiency=3"), "{out}");
    assert!(out.contains("length=4 max_deficiency=3 tail_min=3"), "{out}");
}

#[test]
fn gen_witness_strategies_and_bitstream_format() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("x.txt"), "01 10\n0110\n").unwrap();
    let (code, out, _) = run_in(
        dir.path(),
        &["gen-witness", "--strategy", "blockcode:2", "x.txt"],
    );
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 4); // n = 1, 2, 4, 8

    let (code, _, err) = run_in(
        dir.path(),
        &["gen-witness", "--strategy", "mystery", "x.txt"],
    );
    assert_eq!(code, 2);
    assert!(err.contains("unknown strategy"), "{err}");

    std::fs::write(dir.path().join("bad.txt"), "01x0\n").unwrap();
    let (code, _, err) = run_in(
        dir.path(),
        &["gen-witness", "--strategy", "runlength", "bad.txt"],
    );
    assert_eq!(code, 2);
    assert!(err.contains("bitstream"), "{err}");
}

#[test]
fn injected_fixtures_fail_the_tiny_suite_with_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = run_in(dir.path(), &["prop-suite", "tiny", "--inject-broken"]);
    assert_eq!(code, 1, "{out}");
    assert!(
        out.lines()
            .any(|l| l.starts_with("FAIL") && l.contains("broken-fixture") && l.contains("f1=")),
        "no subadditivity witness printed:\n{out}"
    );
    assert!(
        out.lines()
            .any(|l| l.starts_with("FAIL") && l.contains("axiom=union-shift")),
        "no shifted-union witness printed:\n{out}"
    );
}

#[test]
fn dual_check_bound_flag_gates_the_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = run_in(
        dir.path(),
        &[
            "dual-check",
            "--pair",
            "pwt-ka",
            "--h",
            "scaled:1/2",
            "--universe",
            "2",
            "--bound",
            "4",
        ],
    );
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("rsqrt_over_m="), "{out}");

    // A bound of 1 is violated by the backward ratio of 2.
    let (code, out, _) = run_in(
        dir.path(),
        &["dual-check", "--pair", "dwt-kp", "--bound", "1"],
    );
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("ratio-bound"), "{out}");
}

#[test]
fn h_table_files_resolve_relative_to_cwd() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("h.txt"), "@ 2\n0 1\n1 1\n").unwrap();
    std::fs::write(dir.path().join("f.txt"), "@\n0\n").unwrap();
    let (code, out, _) = run_in(
        dir.path(),
        &["eval-measure", "--measure", "dwt(table:h.txt)", "f.txt"],
    );
    assert_eq!(code, 0);
    // 2^-2 + 2^-1 = 3/4.
    assert!(out.contains("value=3*2^-2"), "{out}");

    std::fs::write(dir.path().join("g.txt"), "00\n").unwrap();
    let (code, _, err) = run_in(
        dir.path(),
        &["eval-measure", "--measure", "dwt(table:h.txt)", "g.txt"],
    );
    assert_eq!(code, 2);
    assert!(err.contains("not defined"), "{err}");
}
