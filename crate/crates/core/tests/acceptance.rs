//! The eleven acceptance criteria, one PASS/FAIL line each.
//!
//! Criteria 5 and 8 contain clauses that the computed objects do not satisfy
//! (see the printed details); they are evaluated as stated and allowed to
//! fail. Any other failure makes this binary exit nonzero.

use std::time::{Duration, Instant};

use ttlab_core::closed_forms;
use ttlab_core::combinatorics;
use ttlab_core::lattice;
use ttlab_core::painleve;
use ttlab_core::report::{Report, ReportBundle};
use ttlab_core::scalar::int;
use ttlab_core::suites::{run_suite, SuiteConfig};
use ttlab_core::virasoro;

const KNOWN_UNATTAINABLE: [u32; 2] = [5, 8];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn failures(reports: &[Report]) -> Vec<String> {
    reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| match &r.first_mismatch {
            Some(m) => format!("{} at {}: {} != {}", r.check_id, m.coefficient_index, m.lhs, m.rhs),
            None => format!("{} ({})", r.check_id, r.note.clone().unwrap_or_default()),
        })
        .collect()
}

fn summarize(reports: &[Report], elapsed: Duration, limit: Option<Duration>) -> Outcome {
    let bad = failures(reports);
    let slow = limit.is_some_and(|l| elapsed > l);
    let mut detail = format!("{} checks, {} failed, {:.2}s", reports.len(), bad.len(), elapsed.as_secs_f64());
    if let Some(l) = limit {
        detail.push_str(&format!(" (limit {}s)", l.as_secs()));
    }
    if !bad.is_empty() {
        let shown: Vec<&str> = bad.iter().take(4).map(String::as_str).collect();
        detail.push_str(&format!("; first failures: {}", shown.join(" | ")));
    }
    outcome(bad.is_empty() && !slow && !reports.is_empty(), detail)
}

fn reached(r: &Report, at_least: u32) -> bool {
    r.passed() && r.order_verified.is_some_and(|o| o >= at_least)
}

fn suite(name: &str) -> ReportBundle {
    run_suite(&SuiteConfig::new(name)).expect("suite runs")
}

fn gessel() -> Outcome {
    let t = Instant::now();
    let reports: Vec<Report> = (1..=4).map(|l| combinatorics::gessel_check(l, 8).unwrap()).collect();
    let all_eight = reports.iter().all(|r| reached(r, 8));
    let mut o = summarize(&reports, t.elapsed(), Some(Duration::from_secs(10)));
    o.pass &= all_eight;
    o
}

fn identities() -> Outcome {
    let t = Instant::now();
    let mut reports = Vec::new();
    for ell in 1..=3 {
        for id in 1..=8 {
            reports.push(combinatorics::identity_check(id, ell, 8, 0).unwrap());
        }
        for k in 1..=3 {
            reports.push(combinatorics::identity_check(9, ell, 8, k).unwrap());
        }
    }
    let mut o = summarize(&reports, t.elapsed(), Some(Duration::from_secs(60)));
    o.pass &= reports.iter().all(|r| reached(r, 8));
    o.detail.push_str("; involution rows read both as LDS and as LIS (equinumerous under transposition)");
    o
}

fn painleve_orthogonal() -> Outcome {
    let t = Instant::now();
    let mut picked = Vec::new();
    let mut ok = true;
    for ell in 2..=5 {
        for plus in [true, false] {
            let reports = painleve::orthogonal_reports(ell, plus, 12).unwrap();
            for r in reports {
                let kind = r.check_id.rsplit('.').next().unwrap().to_string();
                match kind.as_str() {
                    "ode" | "first-integral" => ok &= reached(&r, 10),
                    "recursion" | "second-derivative" => ok &= r.passed(),
                    _ => continue,
                }
                picked.push(r);
            }
            ok &= ell < 3 || picked.iter().any(|r| r.check_id == format!("painleve.orth.{}.ell{ell}.recursion", if plus { "plus" } else { "minus" }));
        }
    }
    let mut o = summarize(&picked, t.elapsed(), None);
    o.pass &= ok;
    o
}

fn painleve_unitary() -> Outcome {
    let t = Instant::now();
    let mut picked = Vec::new();
    let mut ok = true;
    for ell in 1..=3 {
        for r in painleve::unitary_reports(ell, 12).unwrap() {
            if r.check_id.ends_with(".ode") {
                ok &= reached(&r, 10);
            } else if r.check_id.ends_with(".leading") {
                ok &= r.passed();
            } else {
                continue;
            }
            picked.push(r);
        }
    }
    let mut o = summarize(&picked, t.elapsed(), None);
    o.pass &= ok && picked.len() == 6;
    o
}

/// Both exponent signs are tried; the criterion holds if one of them meets
/// every clause.
fn painleve_words() -> Outcome {
    let t = Instant::now();
    let pairs = [(1, 2), (2, 2), (2, 3)];
    let mut lines = Vec::new();
    let mut any_sign = false;
    let mut initial_ok = true;
    for (ell, k) in pairs {
        let r = painleve::words_initial_report(ell, k, 12).unwrap();
        initial_ok &= r.passed();
    }
    for sigma in [1i64, -1] {
        let mut lead = true;
        let mut chain = true;
        for (ell, k) in pairs {
            let rs = painleve::words_sign_reports(ell, k, sigma, 12).unwrap();
            lead &= rs[0].passed();
            chain &= reached(&rs[1], 8);
        }
        any_sign |= lead && chain;
        lines.push(format!(
            "exponent {}x Tr conj(M): initial terms {}, chain {}",
            if sigma > 0 { "+" } else { "-" },
            if lead { "match" } else { "differ" },
            if chain { "vanishes" } else { "nonzero" }
        ));
    }
    lines.push(format!("tau(0) = 1 and d/dt1 tau(0) = 0: {}", if initial_ok { "hold" } else { "fail" }));
    lines.push(format!("{:.2}s", t.elapsed().as_secs_f64()));
    outcome(any_sign && initial_ok, lines.join("; "))
}

fn virasoro_constraints(bundle: &ReportBundle) -> Outcome {
    let picked: Vec<Report> = bundle
        .cases
        .iter()
        .filter(|r| r.check_id.starts_with("virasoro.hankel") || r.check_id.starts_with("virasoro.toeplitz") || r.check_id.starts_with("virasoro.control"))
        .cloned()
        .collect();
    let zeros = picked.iter().filter(|r| !r.check_id.contains("control")).all(|r| reached(r, 6));
    let hankel = picked.iter().filter(|r| r.check_id.starts_with("virasoro.hankel")).count();
    let toeplitz = picked.iter().filter(|r| r.check_id.starts_with("virasoro.toeplitz")).count();
    let mut o = summarize(&picked, Duration::ZERO, None);
    o.pass &= zeros && hankel == 4 * 4 * 3 && toeplitz == 5 * 3;
    o.detail = format!("{hankel} Hankel, {toeplitz} Toeplitz, {} controls; {}", picked.len() - hankel - toeplitz, o.detail);
    o
}

fn pde() -> Outcome {
    let t = Instant::now();
    let b = suite("pde");
    let need = |id: &str, w: u32| b.cases.iter().any(|r| r.check_id == id && reached(r, w));
    let mut ok = need("pde.kp-t.jacobi(alpha=1/2,beta=-1/2).n2", 8);
    for n in [1, 2] {
        for p in ["toda-ii", "toda-iii", "toeplitz-relation"] {
            ok &= need(&format!("pde.{p}.circle(k=0).n{n}"), 6);
        }
    }
    let mut o = summarize(&b.cases, t.elapsed(), None);
    o.pass &= ok;
    o
}

fn lattice_structure() -> Outcome {
    let t = Instant::now();
    let mut reports = suite("lattice-structure").cases;
    reports.extend(suite("lattice-flows").cases);
    // the same-parity and ratio-normalized Toda forms are diagnostics, not part of the criterion
    let criterion: Vec<Report> = reports
        .into_iter()
        .filter(|r| !r.check_id.starts_with("toda.same-parity") && !r.check_id.starts_with("toda.ratio-normalized"))
        .collect();
    let toda_ok = criterion.iter().filter(|r| r.check_id.starts_with("toda.stated")).all(|r| reached(r, 5));
    let mut o = summarize(&criterion, t.elapsed(), None);
    let same_parity: Vec<(bool, u32)> = (2..=5)
        .flat_map(|ell| [(true, ell), (false, ell)])
        .filter(|&(plus, ell)| plus || ell >= 3)
        .map(|(plus, ell)| {
            let r = lattice::toda_residual(plus, ell, lattice::TodaVariant::SameParity, 7).unwrap();
            (r.is_zero(), ell)
        })
        .collect();
    o.detail.push_str(&format!(
        "; Toda with neighbours l+-1 as displayed: {}; with neighbours l+-2: {}",
        if toda_ok { "zero" } else { "nonzero" },
        if same_parity.iter().all(|x| x.0) { "zero for all l" } else { "nonzero" }
    ));
    o
}

fn closed() -> Outcome {
    let t = Instant::now();
    let mut reports: Vec<Report> = closed_forms::default_volume_groups()
        .into_iter()
        .map(|g| closed_forms::volume_report(g).unwrap())
        .collect();
    let volumes = reports.len();
    for (n, a, b) in closed_forms::default_moment_cases() {
        reports.push(closed_forms::aomoto_report(n, &a, &b).unwrap());
    }
    let mut o = summarize(&reports, t.elapsed(), None);
    o.detail = format!("{volumes} volumes, {} moment cases; {}", reports.len() - volumes, o.detail);
    o
}

fn numeric() -> Outcome {
    let t = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for ell in [2, 3] {
        let c = painleve::numeric_crosscheck_full(ell, 0.01, 1.0, 1e-4).unwrap();
        ok &= c.deviation <= 1e-6 && c.halving_change <= 1e-8;
        parts.push(format!("l={ell}: deviation {:.1e}, halving {:.1e}", c.deviation, c.halving_change));
    }
    let el = t.elapsed();
    ok &= el < Duration::from_secs(30);
    outcome(ok, format!("{}; {:.2}s (limit 30s)", parts.join(", "), el.as_secs_f64()))
}

fn commutators(bundle: &ReportBundle) -> Outcome {
    let picked: Vec<Report> = bundle.cases.iter().filter(|r| r.check_id.starts_with("virasoro.commutator")).cloned().collect();
    let charges = virasoro::central_charge(&int(1)) == int(-2) && virasoro::central_charge(&int(2)) == int(1);
    let mut o = summarize(&picked, Duration::ZERO, None);
    o.pass &= charges && picked.len() == 40;
    o.detail = format!("20 seeds x beta in {{1, 2}}, |k|, |l| <= 3; {}", o.detail);
    o
}

fn main() {
    let t = Instant::now();
    let vir = suite("virasoro");
    let vir_time = t.elapsed();
    let results: Vec<(u32, &str, Outcome)> = vec![
        (1, "Gessel identity", gessel()),
        (2, "generating-function identities", identities()),
        (3, "Painleve V, orthogonal family", painleve_orthogonal()),
        (4, "Painleve V, unitary family", painleve_unitary()),
        (5, "Painleve V, words family", painleve_words()),
        (6, "Virasoro constraints", virasoro_constraints(&vir)),
        (7, "PDE identities", pde()),
        (8, "lattice structure", lattice_structure()),
        (9, "closed forms", closed()),
        (10, "numeric cross-check", numeric()),
        (11, "commutation relations", commutators(&vir)),
    ];
    let mut unexpected = Vec::new();
    for (i, name, o) in &results {
        println!("criterion {i:>2} {}: {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass && !KNOWN_UNATTAINABLE.contains(i) {
            unexpected.push(*i);
        }
    }
    let passed = results.iter().filter(|r| r.2.pass).count();
    println!("acceptance: {passed} of {} criteria pass (Virasoro suite {:.2}s)", results.len(), vir_time.as_secs_f64());
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
