use num_rational::BigRational;
use symdiam::spectrum::{
    iterate_map, monotone_scan, reference_polys, sign_changes, solve_threshold, DeltaPoly, SpectrumError,
};

#[test]
fn f_has_nineteen_terms_and_starts_at_one() {
    let f = reference_polys().f;
    assert_eq!(f.len(), 19);
    assert!((f.eval(0.0) - 1.0).abs() < 1e-15);
    assert_eq!(f.coeff(5, 7), BigRational::from_integer(26.into()));
}

#[test]
fn threshold_and_trace() {
    let f = reference_polys().f;
    let root = solve_threshold(&f, 0.999).unwrap();
    assert!((root - 0.632599).abs() <= 5e-7);
    let trace = iterate_map(&f, 0.999, 0.63, 9).unwrap();
    assert_eq!(trace.len(), 10);
    assert!(trace.windows(2).all(|w| w[1] < w[0]));
    assert!(*trace.last().unwrap() < 0.326);
    let crossings = sign_changes(&f, 0.999, 0.0, 1.0, 1e-4);
    assert_eq!(crossings.len(), 2);
    assert!(crossings[0].rising && !crossings[1].rising);
}

#[test]
fn reference_polys_are_monotone() {
    let r = reference_polys();
    for p in [&r.f, &r.h2, &r.h3] {
        assert!(monotone_scan(p, 0.999, 1e-3).unwrap());
    }
    assert!(0.999 * r.h2.eval(0.63) > 0.374);
    assert!(0.999 * r.h3.eval(0.63) > 0.374);
}

#[test]
fn degenerate_inputs_error() {
    let one = DeltaPoly::from_ints(&[(0, 0, 1)]);
    assert!(solve_threshold(&one, 1.0).is_err());
    assert!(solve_threshold(&reference_polys().f, 0.0).is_err());
    assert!(matches!(iterate_map(&one, 1.0, 1.5, 2), Err(SpectrumError::Argument(_))));
    let big = DeltaPoly::from_ints(&[(0, 0, 3)]);
    assert!(matches!(iterate_map(&big, 1.0, 0.5, 1), Err(SpectrumError::LeftUnitInterval { step: 1, .. })));
}

#[test]
fn diff_and_dominance() {
    let a = DeltaPoly::from_ints(&[(1, 2, 3), (0, 1, 1)]);
    let b = DeltaPoly::from_ints(&[(1, 2, 1), (2, 0, 4)]);
    let (surplus, deficit) = a.diff(&b);
    assert_eq!(surplus, DeltaPoly::from_ints(&[(1, 2, 2), (0, 1, 1)]));
    assert_eq!(deficit, DeltaPoly::from_ints(&[(2, 0, 4)]));
    assert!(!a.dominates(&b));
    assert!(a.dominates(&DeltaPoly::from_ints(&[(1, 2, 3)])));
}

#[test]
fn json_round_trip() {
    let f = reference_polys().f;
    let v = f.to_json().unwrap();
    assert_eq!(DeltaPoly::from_json(&v).unwrap(), f);
    assert!(DeltaPoly::from_json(&serde_json::json!({"terms": 3})).is_err());
}
