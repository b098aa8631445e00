use parabolic_core::{selftest, Limits};

#[test]
fn selftest_passes_and_is_deterministic() {
    let limits = Limits::default();
    let a = selftest::run(&limits);
    println!("{}", a.table());
    assert!(a.passed());
    assert_eq!(a, selftest::run(&limits));
}
