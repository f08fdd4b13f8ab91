mod gradcheck;

#[test]
fn analytic_gradient_matches_central_differences() {
    let (seed, report) = gradcheck::first_informative(16).expect("no kink-free toy instance in 16 seeds");
    assert_eq!(report.errors.len(), 12);
    for (name, e) in &report.errors {
        assert!(*e <= gradcheck::TOLERANCE, "seed {seed}, {name}: {e:e}");
    }
}
