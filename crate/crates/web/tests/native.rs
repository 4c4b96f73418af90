use kronecker_web::{average_decay_rows, solenoid_orbit_points, torus_orbit_points};
use std::f64::consts::TAU;

const ROOTS: &str = r#"{"kind":"finite","terms":[{"1":"1"},{"sqrt(2)":"1"}]}"#;

#[test]
fn torus_orbit_stays_in_unit_square() {
    let pts = torus_orbit_points(ROOTS, 50.0, 200).unwrap();
    assert_eq!(pts.len(), 402);
    assert_eq!(&pts[..2], &[0.0, 0.0]);
    assert!(pts.iter().all(|x| (0.0..1.0).contains(x)));
    let t: f64 = 50.0 / 200.0;
    assert!((pts[2] - (t / TAU).rem_euclid(1.0)).abs() < 1e-12);
    assert!((pts[3] - (t * 2f64.sqrt() / TAU).rem_euclid(1.0)).abs() < 1e-12);
    assert!(torus_orbit_points(r#"{"kind":"finite","terms":[{"1":"1"}]}"#, 1.0, 4).is_err());
}

#[test]
fn solenoid_points_follow_exact_orbit() {
    let pts = solenoid_orbit_points(r#"{"prefix":[1],"tail":{"constant":2}}"#, "1/3", 4, 3).unwrap();
    let expected = [0.0, 0.0, 0.0, 1.0 / 3.0, 1.0 / 6.0, 1.0 / 12.0, 2.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0, 0.0, 1.0 / 2.0, 1.0 / 4.0];
    assert_eq!(pts.len(), expected.len());
    for (a, b) in pts.iter().zip(expected) {
        assert!((a - b).abs() < 1e-15);
    }
    assert!(solenoid_orbit_points("[]", "1", 2, 2).is_err());
}

#[test]
fn decay_rows_respect_bound() {
    let rows = average_decay_rows(ROOTS, r#"{"terms":[{"cos":[1,-1],"c":"1"}]}"#, &[10.0, 100.0, 1000.0]).unwrap();
    assert_eq!(rows.len(), 9);
    for r in rows.chunks(3) {
        assert!(r[1] <= r[2] + 1e-12);
        assert!((r[2] - 2.0 / (r[0] * (2f64.sqrt() - 1.0))).abs() < 1e-12);
    }
}
