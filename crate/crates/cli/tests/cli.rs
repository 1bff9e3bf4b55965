use std::process::Command;

use homfly_cli::job::{Format, Window};
use homfly_cli::report::{emit, VerdictStatus};
use homfly_cli::{parse_input, run, JobSpec};
use homfly_homology::projector::ProjectorCache;

fn job(text: &str) -> JobSpec {
    parse_input(text).unwrap()
}

fn hhom(args: &[&str], input: &str) -> (i32, String, String) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("job.toml");
    std::fs::write(&path, input).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_hhom"))
        .arg(&path)
        .args(args)
        .env_remove("HOMFLY_CACHE_DIR")
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn unknot_series_and_verdict() {
    let r = run(
        &job("colours = [[1]]\n"),
        &mut ProjectorCache::new(None),
        false,
    )
    .unwrap();
    let s = r.series.unwrap();
    assert_eq!(s.numerator, "1 - q^-2*a^2");
    assert_eq!(s.denominator, vec!["1 - q^-2"]);
    assert_eq!(r.specialization.status, VerdictStatus::Match);
}

#[test]
fn trefoil_matches_the_skein_oracle() {
    let r = run(
        &job("colours = [[1], [1]]\nword = [1, 1, 1]\n"),
        &mut ProjectorCache::new(None),
        false,
    )
    .unwrap();
    assert_eq!(r.specialization.status, VerdictStatus::Match);
    assert_eq!(r.shift.value, "t^(5/2) * (-a^2)^(-5/2)");
    assert!(!r.shift.applied);
}

#[test]
fn clasped_unknot_uses_the_twist_limit_oracle() {
    let r = run(
        &job("colours = [[1, 1]]\n"),
        &mut ProjectorCache::new(None),
        false,
    )
    .unwrap();
    assert_eq!(r.valid_from, Some(-7));
    assert_eq!(r.projector_depths.len(), 1);
    assert_eq!(r.specialization.status, VerdictStatus::Match);
}

#[test]
fn normalized_mode_applies_integral_shifts() {
    let rel = run(
        &job("colours = [[1], [1]]\nword = [1, 1]\n"),
        &mut ProjectorCache::new(None),
        false,
    )
    .unwrap();
    let norm = run(
        &job("colours = [[1], [1]]\nword = [1, 1]\n[options]\nnormalization = \"normalized\"\n"),
        &mut ProjectorCache::new(None),
        false,
    )
    .unwrap();
    assert_eq!(norm.shift.value, "t^(2) * (-a^2)^(-2)");
    assert!(norm.shift.applied);
    assert_ne!(rel.series, norm.series);
    assert_eq!(
        rel.series.unwrap().denominator,
        norm.series.unwrap().denominator
    );
}

#[test]
fn table_stops_exactly_at_the_window() {
    let mut j = job("colours = [[1]]\n");
    j.options.window = Window {
        q: [-4, 0],
        a: [0, 2],
        t: [0, 0],
    };
    let r = run(&j, &mut ProjectorCache::new(None), false).unwrap();
    let got: Vec<(i64, i64, i64)> = r.table.iter().map(|e| (e.q, e.a, e.coeff)).collect();
    assert_eq!(
        got,
        vec![(0, 0, 1), (-2, 0, 1), (-4, 0, 1), (-2, 2, -1), (-4, 2, -1)]
    );
}

#[test]
fn reports_round_trip_to_the_job() {
    let j = job("colours = [[1], [1]]\nword = [1, 1, 1]\n[options]\nq_span = 20\n");
    let r = run(&j, &mut ProjectorCache::new(None), false).unwrap();
    for f in [Format::Text, Format::Json] {
        assert_eq!(parse_input(&emit(&r, f)).unwrap(), j);
    }
}

#[test]
fn output_is_deterministic() {
    let j = job("colours = [[1], [1], [1]]\nword = [1, -2, 1, -2]\n");
    let a = emit(
        &run(&j, &mut ProjectorCache::new(None), false).unwrap(),
        Format::Text,
    );
    let b = emit(
        &run(&j, &mut ProjectorCache::new(None), false).unwrap(),
        Format::Text,
    );
    assert_eq!(a, b);
}

#[test]
fn warm_cache_gives_identical_output() {
    let dir = tempfile::tempdir().unwrap();
    let j = job("colours = [[1, 1]]\n");
    let mut cold = ProjectorCache::new(Some(dir.path().to_path_buf()));
    let a = run(&j, &mut cold, false).unwrap();
    assert_eq!((cold.hits, cold.misses), (0, 1));
    let mut warm = ProjectorCache::new(Some(dir.path().to_path_buf()));
    let b = run(&j, &mut warm, false).unwrap();
    assert_eq!((warm.hits, warm.misses), (1, 0));
    assert_eq!(emit(&a, Format::Json), emit(&b, Format::Json));
}

#[test]
fn dn_requires_one_part_colours() {
    let e = run(
        &job("colours = [[1, 1]]\n[options]\ndn = 2\n"),
        &mut ProjectorCache::new(None),
        false,
    )
    .unwrap_err();
    assert_eq!(e.exit_code(), 2);
}

#[test]
fn binary_exit_codes() {
    let (code, out, _) = hhom(&["--dn", "2"], "colours = [[1]]\n");
    assert_eq!(code, 0);
    assert!(out.contains("H_2: 1 + q^-2 (total dimension 2)"), "{out}");

    let (code, _, err) = hhom(&[], "colours = [[1]]\nwrod = [1]\n");
    assert_eq!(code, 2);
    assert!(err.contains("line 2"), "{err}");

    let (code, _, _) = hhom(&[], "colours = [[1], [2]]\nword = [1]\n");
    assert_eq!(code, 2);

    let (code, _, err) = hhom(&["--twist-depth", "1"], "colours = [[1, 1]]\n");
    assert_eq!(code, 3, "{err}");
}

#[test]
fn flags_override_the_document() {
    let (code, out, _) = hhom(
        &["--format", "json", "--q-window", "-2,0"],
        "colours = [[1]]\n",
    );
    assert_eq!(code, 0);
    let j = parse_input(&out).unwrap();
    assert_eq!(j.options.window.q, [-2, 0]);
    assert_eq!(j.options.format, Format::Json);
}
