//! End-to-end behavior of the scan checkpoint machinery: crash recovery,
//! worker-count independence, and strict validation of existing files.

use std::fs;
use std::path::{Path, PathBuf};

use kummer_cli::scan::{
    load_checkpoint, run_scan, summarize, validate_ascending, ScanConfig, ScanError, ScanKind,
    CSV_HEADER,
};
use kummer_core::ek::ek_difference;
use kummer_core::ratio::Method;
use kummer_core::Limits;

fn config(out: PathBuf, kind: ScanKind, start: u64, end: u64, jobs: usize) -> ScanConfig {
    ScanConfig {
        kind,
        method: Method::Bernoulli,
        start,
        end,
        out,
        jobs,
        limits: Limits::default(),
    }
}

fn read(path: &Path) -> String {
    fs::read_to_string(path).unwrap()
}

#[test]
fn fresh_scan_writes_expected_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan.csv");
    let summary = run_scan(&config(out.clone(), ScanKind::Kummer, 3, 100, 1)).unwrap();
    let text = read(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    assert_eq!(lines.len(), 1 + 24); // 24 odd primes below 100
    assert!(text.ends_with('\n'));
    assert_eq!(summary.count, 24);
    let ck = load_checkpoint(&out).unwrap();
    assert_eq!(ck.rows.len(), 24);
    assert_eq!(ck.rows[0].q, 3);
    assert_eq!(ck.rows[23].q, 97);
    assert_eq!(ck.torn_bytes, 0);
    // r(3) lands in the row stream with full precision
    assert!((ck.rows[0].r - 0.604_599_788_078_072_6).abs() < 1e-12);
}

#[test]
fn rerunning_a_finished_scan_changes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan.csv");
    let cfg = config(out.clone(), ScanKind::Kummer, 3, 300, 2);
    let first = run_scan(&cfg).unwrap();
    let bytes = fs::read(&out).unwrap();
    let second = run_scan(&cfg).unwrap();
    assert_eq!(fs::read(&out).unwrap(), bytes);
    assert_eq!(first, second);
}

#[test]
fn worker_count_does_not_change_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let serial = dir.path().join("serial.csv");
    let parallel = dir.path().join("parallel.csv");
    run_scan(&config(serial.clone(), ScanKind::Kummer, 3, 600, 1)).unwrap();
    run_scan(&config(parallel.clone(), ScanKind::Kummer, 3, 600, 8)).unwrap();
    assert_eq!(fs::read(&serial).unwrap(), fs::read(&parallel).unwrap());
}

#[test]
fn resume_after_kill_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let reference = dir.path().join("reference.csv");
    run_scan(&config(reference.clone(), ScanKind::Kummer, 3, 400, 3)).unwrap();
    let want = fs::read(&reference).unwrap();

    // A kill can land anywhere; replay the scan from every flavor of
    // partial file: empty, mid-header, clean row boundary, torn row.
    let header_end = want.iter().position(|&b| b == b'\n').unwrap() + 1;
    let row_starts: Vec<usize> = (header_end..want.len())
        .filter(|&i| want[i - 1] == b'\n')
        .collect();
    let cuts = [
        0,
        header_end - 3,
        header_end,
        row_starts[2],
        row_starts[2] + 7,  // torn mid-row
        row_starts[10] - 1, // missing just the newline
        want.len() - 4,
    ];
    for &cut in &cuts {
        let out = dir.path().join(format!("killed_{cut}.csv"));
        fs::write(&out, &want[..cut]).unwrap();
        run_scan(&config(out.clone(), ScanKind::Kummer, 3, 400, 2)).unwrap();
        assert_eq!(
            fs::read(&out).unwrap(),
            want,
            "resume from a {cut}-byte prefix diverged"
        );
    }
}

#[test]
fn corrupt_complete_line_aborts_with_its_number() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan.csv");
    run_scan(&config(out.clone(), ScanKind::Kummer, 3, 100, 1)).unwrap();
    let mut lines: Vec<String> = read(&out).lines().map(str::to_owned).collect();
    lines[5] = "13,not-a-number,1.0,bernoulli,kummer".to_owned();
    fs::write(&out, lines.join("\n") + "\n").unwrap();
    match run_scan(&config(out.clone(), ScanKind::Kummer, 3, 100, 1)) {
        Err(ScanError::Malformed { line, message, .. }) => {
            assert_eq!(line, 6);
            assert!(message.contains("not-a-number"), "message: {message}");
        }
        other => panic!("expected a malformed-line error, got {other:?}"),
    }
}

#[test]
fn foreign_checkpoints_are_refused() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan.csv");
    run_scan(&config(out.clone(), ScanKind::Kummer, 3, 100, 1)).unwrap();

    // Same file, narrower range: more rows than primes.
    match run_scan(&config(out.clone(), ScanKind::Kummer, 3, 50, 1)) {
        Err(ScanError::Mismatch { .. }) => {}
        other => panic!("expected mismatch on shrunken range, got {other:?}"),
    }
    // Range starting elsewhere: first row disagrees.
    match run_scan(&config(out.clone(), ScanKind::Kummer, 5, 100, 1)) {
        Err(ScanError::Mismatch { .. }) => {}
        other => panic!("expected mismatch on shifted range, got {other:?}"),
    }
    // Same range, different kind.
    match run_scan(&config(out.clone(), ScanKind::Ek, 3, 100, 1)) {
        Err(ScanError::Mismatch { .. }) => {}
        other => panic!("expected mismatch on kind change, got {other:?}"),
    }
    // Same range, different method.
    let mut cfg = config(out.clone(), ScanKind::Kummer, 3, 100, 1);
    cfg.method = Method::Digamma;
    match run_scan(&cfg) {
        Err(ScanError::Mismatch { .. }) => {}
        other => panic!("expected mismatch on method change, got {other:?}"),
    }
    // A wrong header is malformed outright.
    fs::write(&out, "q,r\n3,0.6\n").unwrap();
    match run_scan(&config(out.clone(), ScanKind::Kummer, 3, 100, 1)) {
        Err(ScanError::Malformed { line: 1, .. }) => {}
        other => panic!("expected malformed header, got {other:?}"),
    }
}

#[test]
fn thousand_row_scan_matches_published_points() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan.csv");
    let summary = run_scan(&config(out.clone(), ScanKind::Kummer, 3, 1000, 1)).unwrap();
    assert_eq!(summary.count, 167); // odd primes up to 1000
    let (min_q, min_value) = summary.min.unwrap();
    assert_eq!(min_q, 3);
    assert!((min_value - 0.604_599_788_078_072_6).abs() < 1e-12);
    let ck = load_checkpoint(&out).unwrap();
    let last = ck.rows.last().unwrap();
    assert_eq!(last.q, 997);
    assert!((last.r - 0.855_757_544_913_506_5).abs() < 1e-11);
}

#[test]
fn single_row_file_has_min_equal_max() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("one.csv");
    run_scan(&config(out.clone(), ScanKind::Kummer, 3, 4, 1)).unwrap();
    let ck = load_checkpoint(&out).unwrap();
    assert_eq!(ck.rows.len(), 1);
    let summary = summarize(ScanKind::Kummer, &ck.rows);
    assert_eq!(summary.min, summary.max);
    assert_eq!(summary.min.unwrap().0, 3);
}

#[test]
fn empty_range_yields_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan.csv");
    let summary = run_scan(&config(out.clone(), ScanKind::Kummer, 24, 28, 1)).unwrap();
    assert_eq!(summary.count, 0);
    assert_eq!(read(&out), format!("{CSV_HEADER}\n"));
}

#[test]
fn ek_rows_carry_the_difference_and_its_normalization() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ek.csv");
    let summary = run_scan(&config(out.clone(), ScanKind::Ek, 3, 60, 2)).unwrap();
    let ck = load_checkpoint(&out).unwrap();
    assert_eq!(summary.count, ck.rows.len() as u64);
    for row in &ck.rows {
        assert_eq!(row.kind, ScanKind::Ek);
        assert_eq!(row.method, Method::Bernoulli);
        let want = ek_difference(row.q).unwrap();
        assert_eq!(row.value.to_bits(), want.diff.to_bits(), "q = {}", row.q);
        assert_eq!(row.r.to_bits(), want.normalized.to_bits(), "q = {}", row.q);
    }
}

#[test]
fn summary_survives_the_round_trip_through_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan.csv");
    for kind in [ScanKind::Kummer, ScanKind::Ek] {
        let _ = fs::remove_file(&out);
        let live = run_scan(&config(out.clone(), kind, 3, 200, 4)).unwrap();
        let ck = load_checkpoint(&out).unwrap();
        let reloaded = summarize(kind, &ck.rows);
        assert_eq!(live, reloaded);
    }
}

#[test]
fn out_of_order_rows_are_detected() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan.csv");
    run_scan(&config(out.clone(), ScanKind::Kummer, 3, 60, 1)).unwrap();
    let mut lines: Vec<String> = read(&out).lines().map(str::to_owned).collect();
    lines.swap(3, 4);
    fs::write(&out, lines.join("\n") + "\n").unwrap();
    let ck = load_checkpoint(&out).unwrap();
    // Rows are now q = 3, 5, 11, 7, ...; the 7 on file line 5 is the
    // first out-of-order row.
    match validate_ascending(&out, &ck.rows) {
        Err(ScanError::Malformed { line, .. }) => assert_eq!(line, 5),
        other => panic!("expected out-of-order detection, got {other:?}"),
    }
}
