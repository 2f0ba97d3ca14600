use toroidal_core::verify::{resolve, run, run_suite, VerifyError, VerifyOptions, SUITES};

#[test]
fn every_criterion_has_one_suite() {
    let criteria: Vec<u32> = SUITES.iter().map(|s| s.criterion).collect();
    assert_eq!(criteria, (1..=14).collect::<Vec<_>>());
    assert_eq!(resolve("all").unwrap().len(), 14);
    let geom: Vec<&str> = resolve("theorem-geom").unwrap().iter().map(|s| s.name).collect();
    assert_eq!(geom, ["geom-fine", "geom-eccentric-smooth"]);
    assert!(matches!(resolve("nope"), Err(VerifyError::UnknownSuite(_))));
}

#[test]
fn bounds_narrow_the_cases() {
    let small = VerifyOptions { n: Some(2), max_boxes: Some(2), ..VerifyOptions::default() };
    let reports = run("theorem-geom", &small).unwrap();
    let full = run("theorem-geom", &VerifyOptions { n: Some(2), max_boxes: Some(3), ..VerifyOptions::default() }).unwrap();
    for (a, b) in reports.iter().zip(&full) {
        assert!(a.passed() && b.passed());
        assert!(a.summary.total < b.summary.total);
        assert!(a.cases.iter().all(|c| c.inputs["n"] == 2));
    }
}

#[test]
fn cases_are_sorted_and_untimed_by_default() {
    let suite = resolve("verma-dimension").unwrap()[0];
    let report = run_suite(suite, &VerifyOptions { jobs: Some(2), ..VerifyOptions::default() }).unwrap();
    assert!(report.cases.windows(2).all(|w| w[0].key <= w[1].key));
    assert!(report.wall_time_ms.is_none());
    assert_eq!(report.summary.passed + report.summary.failed, report.summary.total);
    let unit = report.cases.iter().find(|c| c.key == "n=2 d=(1,1)").unwrap();
    assert_eq!((unit.expected.as_str(), unit.got.as_str()), ("3", "3"));
    let timed = run_suite(suite, &VerifyOptions { timing: true, ..VerifyOptions::default() }).unwrap();
    assert!(timed.wall_time_ms.is_some());
}
