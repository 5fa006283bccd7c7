use std::path::PathBuf;

use bezout_core::pipeline::{
    emit_grid, run_spec, ProblemSpec, RunError, EXIT_CONFLICT, EXIT_INCONCLUSIVE, EXIT_OK,
};
use bezout_core::symbol::Outcome;
use bezout_core::zeros::SearchRect;
use bezout_core::ParseError;

fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn spec(name: &str) -> ProblemSpec {
    ProblemSpec::parse(&fixture(name)).unwrap()
}

#[test]
fn no_common_zeros_fixture() {
    let report = run_spec(&spec("no-common-zeros.json")).unwrap();
    assert_eq!(report.verdict.outcome, Outcome::NoCommonZeros);
    assert_eq!(report.exit_code, EXIT_OK);
    let cmp = report.comparison.unwrap();
    assert!(cmp.common.is_empty());
    assert!(cmp.min_distance.unwrap() > 1e-3);
    let kernel = report.kernel.unwrap();
    assert!(kernel.adjoint_identity && kernel.phi_difference);
    let op = report.operator.unwrap();
    assert!(op.t_operator_norm <= op.t_norm_bound);
    assert!(report.banner.is_none());
}

#[test]
fn coincidence_fixture() {
    let report = run_spec(&spec("coincidence.json")).unwrap();
    assert_eq!(report.verdict.outcome, Outcome::ZeroSetsCoincide);
    assert_eq!(report.exit_code, EXIT_OK);
    let sets = report.zero_sets.unwrap();
    assert_eq!(sets.f1.zeros.len(), sets.f21.zeros.len());
    assert!(!sets.f1.zeros.is_empty());
    for (p, q) in sets.f1.zeros.iter().zip(&sets.f21.zeros) {
        assert!((p.z() - q.z()).norm() < 1e-8);
    }
    assert!(report.operator.unwrap().residuals.iter().all(|&r| r == 0.0));
}

#[test]
fn full_corpus_exit_codes() {
    let expected = [
        ("no-common-zeros.json", EXIT_OK),
        ("coincidence.json", EXIT_OK),
        ("linear-quadratic.json", EXIT_OK),
        ("constant-cubic.json", EXIT_OK),
        ("linear-density.json", EXIT_OK),
        ("mirrored-monomials.json", EXIT_OK),
        ("bessel-orders.json", EXIT_OK),
        ("complex-coefficients.json", EXIT_OK),
        ("nonalgebraic.json", EXIT_INCONCLUSIVE),
        ("zero-mass.json", EXIT_INCONCLUSIVE),
    ];
    for (name, code) in expected {
        let report = run_spec(&spec(name)).unwrap();
        assert_ne!(
            report.exit_code, EXIT_CONFLICT,
            "{name}: {:?}",
            report.banner
        );
        assert_eq!(
            report.exit_code, code,
            "{name}: {:?} {:?}",
            report.verdict.outcome, report.notes
        );
    }
}

#[test]
fn zero_mass_reason_names_density() {
    let report = run_spec(&spec("zero-mass.json")).unwrap();
    assert_eq!(report.verdict.outcome, Outcome::Inconclusive);
    let reason = report.verdict.diagnostics.reason.clone().unwrap();
    assert!(reason.contains('1'), "{reason}");
}

#[test]
fn malformed_rational_reports_field_path() {
    let err = ProblemSpec::parse(&fixture("malformed-rational.json")).unwrap_err();
    match err {
        ParseError::Field { path, .. } => assert_eq!(path, "psi1[1]"),
        other => panic!("{other:?}"),
    }
    assert_eq!(
        RunError::Parse(ParseError::Json(String::new())).exit_code(),
        1
    );
}

#[test]
fn validation_errors() {
    let base = r#"{"a": "1", "psi1": ["1"], "psi2": ["1"]"#;
    let cases = [
        (format!("{base}, \"grid_n\": 8}}"), "grid_n"),
        (
            r#"{"a": "-1", "psi1": ["1"], "psi2": ["1"]}"#.to_string(),
            "a",
        ),
        (
            r#"{"a": "1", "psi1": [], "psi2": ["1"]}"#.to_string(),
            "psi1",
        ),
        (format!("{base}, \"tasks\": [\"plot\"]}}"), "tasks[0]"),
    ];
    for (text, want) in cases {
        match ProblemSpec::parse(&text).unwrap_err() {
            ParseError::Field { path, .. } => assert_eq!(path, want),
            other => panic!("{other:?}"),
        }
    }
    match ProblemSpec::parse("{\n  \"a\": ").unwrap_err() {
        ParseError::Json(msg) => assert!(msg.contains("line 2")),
        other => panic!("{other:?}"),
    }
}

#[test]
fn deterministic_report() {
    let s = spec("no-common-zeros.json");
    let strip = |json: String| {
        let mut v: serde_json::Value = serde_json::from_str(&json).unwrap();
        v["provenance"]["timing_ms"] = serde_json::Value::Null;
        serde_json::to_string(&v).unwrap()
    };
    let first = strip(run_spec(&s).unwrap().to_json());
    let second = strip(run_spec(&s).unwrap().to_json());
    assert_eq!(first, second);
}

#[test]
fn grid_emission() {
    let mut s = ProblemSpec::parse(r#"{"a": "1", "psi1": ["1"], "psi2": ["1"]}"#).unwrap();
    s.rect = SearchRect::new(-1.0, 1.0, -1.0, 1.0);
    let csv = emit_grid(&s, 3).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 9);
    let center: Vec<f64> = rows[4].split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!((center[0], center[1]), (0.0, 0.0));
    assert!((center[2] - 1.0).abs() < 1e-15);

    // a node exactly at 2π on the real axis
    let two_pi = 2.0 * std::f64::consts::PI;
    s.rect = SearchRect::new(0.0, 2.0 * two_pi, -1.0, 1.0);
    let csv = emit_grid(&s, 3).unwrap();
    let mid: Vec<f64> = csv
        .lines()
        .nth(5)
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert_eq!((mid[0], mid[1]), (two_pi, 0.0));
    assert!(mid[2] < 1e-12);

    let s = spec("no-common-zeros.json");
    assert_eq!(
        emit_grid(&s, s.grid_n).unwrap().lines().count(),
        s.grid_n * s.grid_n + 1
    );
}

mod gate {
    use bezout_core::exact::{rat, DensityPoly};
    use bezout_core::pipeline::{consistency, Structure};
    use bezout_core::symbol::{decide, CoeffClass};
    use bezout_core::zeros::{
        compare_zero_sets, structure_checks, LocatedZero, SearchRect, ZeroSet,
    };

    fn set(points: &[(f64, f64)]) -> ZeroSet {
        ZeroSet {
            zeros: points
                .iter()
                .map(|&(re, im)| LocatedZero {
                    re,
                    im,
                    multiplicity: 1,
                    residual: 0.0,
                })
                .collect(),
            rect: SearchRect::new(-10.0, 10.0, -10.0, 10.0),
            total_count: points.len() as i64,
            contour_sup: 1.0,
        }
    }

    fn check(psi1: &[i64], psi2: &[i64], z1: &ZeroSet, z21: &ZeroSet) -> Vec<String> {
        let v = decide(
            &DensityPoly::from_ints(psi1),
            &DensityPoly::from_ints(psi2),
            &rat(1, 1),
            CoeffClass::Rational,
        )
        .unwrap();
        let s = Structure {
            f1: structure_checks(z1, 1e-7),
            f21: structure_checks(z21, 1e-7),
        };
        consistency(&v, z1, z21, &compare_zero_sets(z1, z21, 1e-3), &s)
    }

    #[test]
    fn shared_zero_contradicts_no_common_zeros() {
        let conflicts = check(&[1], &[0, 1], &set(&[(6.0, 0.0)]), &set(&[(6.0, 1e-5)]));
        assert_eq!(conflicts.len(), 1, "{conflicts:?}");
        assert!(check(&[1], &[0, 1], &set(&[(6.0, 0.0)]), &set(&[(6.0, 1.0)])).is_empty());
    }

    #[test]
    fn differing_sets_contradict_coincidence() {
        assert!(!check(&[1], &[1], &set(&[(6.0, 0.0)]), &set(&[(6.5, 0.0)])).is_empty());
        assert!(!check(&[1], &[1], &set(&[(6.0, 0.0)]), &set(&[])).is_empty());
        assert!(check(&[1], &[1], &set(&[(6.0, 0.0)]), &set(&[(6.0, 1e-9)])).is_empty());
    }

    #[test]
    fn structural_claims_are_policed() {
        let v = decide(
            &DensityPoly::from_ints(&[0, 2]),
            &DensityPoly::from_ints(&[1]),
            &rat(1, 1),
            CoeffClass::Rational,
        )
        .unwrap();
        assert!(v.no_real_zeros && v.no_conjugate_pairs);
        let z21 = set(&[]);
        for z1 in [set(&[(3.0, 0.0)]), set(&[(3.0, 2.0), (3.0, -2.0)])] {
            let s = Structure {
                f1: structure_checks(&z1, 1e-7),
                f21: structure_checks(&z21, 1e-7),
            };
            assert_eq!(
                consistency(&v, &z1, &z21, &compare_zero_sets(&z1, &z21, 1e-3), &s).len(),
                1
            );
        }
    }
}
