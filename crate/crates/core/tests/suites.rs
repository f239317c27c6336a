use std::collections::BTreeSet;

use ttlab_core::report::Status;
use ttlab_core::suites::{run_suite, SuiteConfig, SUITES};

#[test]
fn all_is_the_union_of_the_named_suites() {
    let all = run_suite(&SuiteConfig::new("all")).unwrap();
    let ids: BTreeSet<&str> = all.cases.iter().map(|c| c.check_id.as_str()).collect();
    assert_eq!(ids.len(), all.cases.len(), "duplicate ids");
    let mut union = BTreeSet::new();
    let mut total = 0;
    for s in SUITES {
        let b = run_suite(&SuiteConfig::new(s)).unwrap();
        assert!(!b.cases.is_empty(), "{s} is empty");
        total += b.cases.len();
        union.extend(b.cases.iter().map(|c| c.check_id.clone()));
    }
    assert_eq!(total, union.len(), "named suites overlap");
    assert_eq!(union.iter().map(String::as_str).collect::<BTreeSet<_>>(), ids);
    assert!(all.cases.iter().all(|c| c.status != Status::Skipped), "no case should be skipped at defaults");
}

#[test]
fn overrides_narrow_the_cases() {
    let mut c = SuiteConfig::new("gessel");
    c.ell = Some(3);
    c.n_max = Some(8);
    let b = run_suite(&c).unwrap();
    assert!(b.all_passed());
    let g = b.cases.iter().find(|r| r.check_id == "gessel.ell3").unwrap();
    assert_eq!(g.order_verified, Some(8));
    assert!(b.cases.iter().all(|r| r.params.get("ell").map(String::as_str) == Some("3")));
}

#[test]
fn thread_count_does_not_change_reports() {
    let mut one = SuiteConfig::new("painleve-orth");
    one.threads = Some(1);
    let mut many = one.clone();
    many.threads = Some(4);
    assert_eq!(run_suite(&one).unwrap().to_json(), run_suite(&many).unwrap().to_json());
}

#[test]
fn budget_errors_are_reported_per_case() {
    let mut c = SuiteConfig::new("involutions");
    c.n_max = Some(14);
    c.ell = Some(1);
    let b = run_suite(&c).unwrap();
    assert!(b.cases.iter().any(|r| r.status == Status::Skipped && r.check_id.starts_with("error.")));
    assert!(b.cases.iter().any(|r| r.passed()));
}
