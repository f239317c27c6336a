//! Named verification suites and their parallel runner.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::time::Instant;

use num_rational::BigRational;
use rayon::prelude::*;

use crate::closed_forms;
use crate::combinatorics::{self, GapFamily};
use crate::error::{Error, Result};
use crate::lattice;
use crate::painleve;
use crate::report::{Report, ReportBundle};
use crate::scalar::{int, rat};
use crate::tau::WeightSpec;
use crate::virasoro::{self, ConstraintLabel, ConstraintModel, Pde};

pub const SUITES: [&str; 12] = [
    "gessel",
    "involutions",
    "words",
    "lattice-structure",
    "lattice-flows",
    "virasoro",
    "pde",
    "painleve-orth",
    "painleve-unitary",
    "painleve-words",
    "closed-forms",
    "numeric",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Json,
    Csv,
    Text,
}

impl ReportFormat {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            "text" => Ok(ReportFormat::Text),
            _ => Err(Error::Invalid(format!("unknown format `{s}`"))),
        }
    }
}

/// What to run. `None` overrides fall back to the defaults, which reproduce
/// the acceptance runs.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub suite: String,
    /// τ index for the Virasoro, PDE and Jacobi cases.
    pub n: Option<u32>,
    pub ell: Option<u32>,
    pub k: Option<u32>,
    /// Series order `D`; 12 for Painlevé, 8 for Virasoro/PDE/lattice.
    pub order: Option<u32>,
    /// Enumeration size and lattice truncation, default 8.
    pub n_max: Option<u32>,
    /// First seed of the 20 commutator probes.
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub format: ReportFormat,
    /// Worker threads; `None` reads `TTLAB_THREADS`.
    pub threads: Option<usize>,
    /// Record `runtime_ms`; off by default so that reports are reproducible.
    pub timings: bool,
}

impl SuiteConfig {
    pub fn new(suite: &str) -> Self {
        SuiteConfig {
            suite: suite.to_string(),
            n: None,
            ell: None,
            k: None,
            order: None,
            n_max: None,
            seed: 0,
            output: None,
            format: ReportFormat::Json,
            threads: None,
            timings: false,
        }
    }

    fn ells(&self, default: impl IntoIterator<Item = u32>) -> Vec<u32> {
        match self.ell {
            Some(l) => vec![l],
            None => default.into_iter().collect(),
        }
    }

    fn ks(&self, default: impl IntoIterator<Item = u32>) -> Vec<u32> {
        match self.k {
            Some(k) => vec![k],
            None => default.into_iter().collect(),
        }
    }

    fn ns(&self, default: impl IntoIterator<Item = u32>) -> Vec<u32> {
        match self.n {
            Some(n) => vec![n],
            None => default.into_iter().collect(),
        }
    }

    fn order_or(&self, d: u32) -> u32 {
        self.order.unwrap_or(d)
    }

    fn n_max(&self) -> u32 {
        self.n_max.unwrap_or(8)
    }

    /// The fields that influence results, recorded in the bundle.
    fn summary(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        let mut put = |k: &str, v: Option<String>| {
            m.insert(k.to_string(), v.unwrap_or_else(|| "default".into()));
        };
        put("n", self.n.map(|v| v.to_string()));
        put("ell", self.ell.map(|v| v.to_string()));
        put("k", self.k.map(|v| v.to_string()));
        put("order", self.order.map(|v| v.to_string()));
        put("n_max", self.n_max.map(|v| v.to_string()));
        put("seed", Some(self.seed.to_string()));
        m
    }

    fn thread_count(&self) -> usize {
        self.threads
            .or_else(|| std::env::var("TTLAB_THREADS").ok().and_then(|v| v.parse().ok()))
            .unwrap_or(0)
    }
}

type JobFn = Box<dyn Fn() -> Result<Vec<Report>> + Send + Sync>;

struct Job {
    name: String,
    run: JobFn,
}

fn job(name: impl Into<String>, f: impl Fn() -> Result<Vec<Report>> + Send + Sync + 'static) -> Job {
    Job { name: name.into(), run: Box::new(f) }
}

fn one(r: Result<Report>) -> Result<Vec<Report>> {
    r.map(|r| vec![r])
}

fn gessel_jobs(c: &SuiteConfig) -> Vec<Job> {
    let n_max = c.n_max();
    let mut v = Vec::new();
    for ell in c.ells(1..=4) {
        v.push(job(format!("gessel.{ell}"), move || one(combinatorics::gessel_check(ell, n_max))));
        v.push(job(format!("identity1.{ell}"), move || one(combinatorics::identity_check(1, ell, n_max, 0))));
        let order = n_max.max(ell + 2);
        v.push(job(format!("gap.unitary.{ell}"), move || one(combinatorics::gap_check(GapFamily::Unitary, ell, order))));
    }
    v
}

fn involution_jobs(c: &SuiteConfig) -> Vec<Job> {
    let n_max = c.n_max();
    let mut v = vec![job("involution-generating", move || one(combinatorics::involution_generating_check(n_max)))];
    for ell in c.ells(1..=3) {
        for id in 2..=8 {
            v.push(job(format!("identity{id}.{ell}"), move || one(combinatorics::identity_check(id, ell, n_max, 0))));
        }
        let order = n_max.max(ell + 2);
        for fam in [GapFamily::Orthogonal(1), GapFamily::Orthogonal(-1), GapFamily::OrthogonalSum] {
            v.push(job(format!("gap.{fam:?}.{ell}"), move || one(combinatorics::gap_check(fam, ell, order))));
        }
    }
    v
}

fn word_jobs(c: &SuiteConfig) -> Vec<Job> {
    let n_max = c.n_max();
    let mut v = Vec::new();
    for ell in c.ells(1..=3) {
        for k in c.ks(1..=3) {
            v.push(job(format!("identity9.{k}.{ell}"), move || one(combinatorics::identity_check(9, ell, n_max, k))));
            let order = n_max.max(ell + 2);
            let fam = GapFamily::Words { k, sigma: 1 };
            v.push(job(format!("gap.words.{k}.{ell}"), move || one(combinatorics::gap_check(fam, ell, order))));
        }
    }
    v
}

fn lattice_structure_jobs(c: &SuiteConfig) -> Vec<Job> {
    let (size, order, k) = (c.n_max() as usize, c.order_or(8), c.k.unwrap_or(0));
    let toda_order = order.saturating_sub(1);
    let ells = c.ells(2..=5);
    let sg = c.ells(1..=3);
    vec![
        job("lattice.structure", move || {
            let (sys, mats) = lattice::circle_system(k, order as usize, order, size)?;
            lattice::structure_report(&sys, &mats)
        }),
        job("toda", move || lattice::toda_reports(&ells, toda_order)),
        job("sinh-gordon", move || lattice::sinh_gordon_reports(&sg, toda_order)),
    ]
}

fn lattice_flow_jobs(c: &SuiteConfig) -> Vec<Job> {
    let (size, order, k) = (c.n_max() as usize, c.order_or(8), c.k.unwrap_or(0));
    vec![job("lattice.flows", move || {
        let (sys, mats) = lattice::circle_system(k, order as usize, order, size)?;
        lattice::flow_report(&sys, &mats, 4)
    })]
}

fn virasoro_jobs(c: &SuiteConfig) -> Vec<Job> {
    let d = c.order_or(8);
    let need = d.saturating_sub(2);
    let ns = c.ns(1..=3);
    let mut v = Vec::new();
    for (a, b) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
        let model = ConstraintModel::Hankel { alpha: rat(a, 2), beta: rat(b, 2) };
        for m in -1..=2i64 {
            for &n in &ns {
                let model = model.clone();
                let order = (d as i64 + m) as u32;
                v.push(job(format!("hankel.{a}.{b}.{m}.{n}"), move || {
                    one(virasoro::constraint_report(&model, n as usize, &ConstraintLabel::J { m }, order, need))
                }));
            }
        }
        v.push(job(format!("hankel.control.{a}.{b}"), move || {
            one(virasoro::negative_control(&model, 2, &ConstraintLabel::J { m: -2 }, d))
        }));
    }
    for (k, theta) in [(-1, int(0)), (0, int(0)), (0, rat(1, 2)), (0, int(1)), (1, int(1))] {
        for &n in &ns {
            let label = ConstraintLabel::V { k, theta: theta.clone() };
            v.push(job(format!("toeplitz.{k}.{theta}.{n}"), move || {
                one(virasoro::constraint_report(&ConstraintModel::Toeplitz, n as usize, &label, d - 1, need))
            }));
        }
    }
    for (k, theta) in [(2, int(1)), (-2, int(0))] {
        let label = ConstraintLabel::V { k, theta };
        v.push(job(format!("toeplitz.control.{k}"), move || {
            one(virasoro::negative_control(&ConstraintModel::Toeplitz, 1, &label, d - 1))
        }));
    }
    for beta in [1i64, 2] {
        for seed in c.seed..c.seed + 20 {
            v.push(job(format!("commutator.{beta}.{seed}"), move || {
                let beta = int(beta);
                let probe = virasoro::commutator_probe(seed)?;
                let mut r = Report::new(
                    format!("virasoro.commutator.beta{beta}.seed{seed}"),
                    "[J_k, J_l] = (k - l) J_(k+l) + c/12 (k^3 - k) delta_(k,-l) on a random probe, |k|, |l| <= 3",
                )
                .param("beta", &beta)
                .param("seed", seed)
                .param("central_charge", virasoro::central_charge(&beta));
                for k in -3..=3 {
                    for l in -3..=3 {
                        r = r.absorb(&virasoro::commutator_check(k, l, &beta, 2, &probe)?);
                    }
                }
                Ok(vec![r])
            }));
        }
    }
    v
}

fn pde_report(which: Pde, spec: WeightSpec, n: u32, order: u32, need: u32) -> Result<Report> {
    let res = virasoro::pde_residual(which, &spec, n as usize, order)?;
    let what = match which {
        Pde::Kp { .. } => "KP equation for log tau",
        Pde::TodaII => "d^2/ds1 dt1 log tau_n = -tau_(n-1) tau_(n+1)/tau_n^2",
        Pde::TodaIII => "second Toeplitz-lattice equation in s2, t1",
        Pde::ToeplitzRelation => "Toeplitz relation between neighbouring tau functions",
    };
    Ok(Report::new(format!("pde.{}.{}.n{n}", which.label(), spec.label()), what)
        .param("model", spec.label())
        .with_n(n as i64)
        .zero(&res, need))
}

fn pde_jobs(c: &SuiteConfig) -> Vec<Job> {
    let d = c.order_or(8);
    let need = d.saturating_sub(2);
    let mut v = Vec::new();
    for n in c.ns([2]) {
        v.push(job(format!("kp.{n}"), move || {
            one(pde_report(Pde::Kp { s_family: false }, WeightSpec::jacobi(rat(1, 2), rat(-1, 2))?, n, d + 4, d))
        }));
        for s_family in [false, true] {
            v.push(job(format!("kp.circle.{s_family}.{n}"), move || {
                one(pde_report(Pde::Kp { s_family }, WeightSpec::circle(), n, d + 2, d - 2))
            }));
        }
    }
    for n in c.ns([1, 2]) {
        v.push(job(format!("toda2.{n}"), move || one(pde_report(Pde::TodaII, WeightSpec::circle(), n, d, need))));
        v.push(job(format!("toda3.{n}"), move || one(pde_report(Pde::TodaIII, WeightSpec::circle(), n, d + 1, need))));
        v.push(job(format!("toeplitz.{n}"), move || {
            one(pde_report(Pde::ToeplitzRelation, WeightSpec::circle(), n, d, need))
        }));
    }
    v
}

fn painleve_orth_jobs(c: &SuiteConfig) -> Vec<Job> {
    let d = c.order_or(12);
    let mut v = Vec::new();
    for ell in c.ells(2..=5) {
        for plus in [true, false] {
            v.push(job(format!("orth.{ell}.{plus}"), move || painleve::orthogonal_reports(ell, plus, d)));
        }
    }
    let cases: Vec<(u32, BigRational, BigRational)> = match c.n {
        Some(n) => painleve::default_jacobi_cases().into_iter().filter(|x| x.0 == n).collect(),
        None => painleve::default_jacobi_cases(),
    };
    for (n, a, b) in cases {
        v.push(job(format!("jacobi.{n}.{a}.{b}"), move || one(painleve::jacobi_report(n, &a, &b, d))));
    }
    v
}

fn painleve_unitary_jobs(c: &SuiteConfig) -> Vec<Job> {
    let d = c.order_or(12);
    c.ells(1..=3)
        .into_iter()
        .map(|ell| job(format!("unitary.{ell}"), move || painleve::unitary_reports(ell, d)))
        .collect()
}

fn painleve_word_jobs(c: &SuiteConfig) -> Vec<Job> {
    let d = c.order_or(12);
    let pairs = match (c.ell, c.k) {
        (None, None) => vec![(1, 2), (2, 2), (2, 3)],
        (l, k) => vec![(l.unwrap_or(2), k.unwrap_or(2))],
    };
    pairs
        .into_iter()
        .map(|(ell, k)| job(format!("words.{ell}.{k}"), move || painleve::words_reports(ell, k, d)))
        .collect()
}

fn closed_form_jobs(c: &SuiteConfig) -> Vec<Job> {
    let mut v = Vec::new();
    for g in closed_forms::default_volume_groups() {
        v.push(job(format!("volume.{}", g.label()), move || one(closed_forms::volume_report(g))));
    }
    let cases: Vec<(u32, BigRational, BigRational)> = match c.n {
        Some(n) => closed_forms::default_moment_cases().into_iter().filter(|x| x.0 == n).collect(),
        None => closed_forms::default_moment_cases(),
    };
    for (n, a, b) in cases {
        v.push(job(format!("moments.{n}.{a}.{b}"), move || one(closed_forms::aomoto_report(n, &a, &b))));
    }
    v
}

fn numeric_jobs(c: &SuiteConfig) -> Vec<Job> {
    c.ells(1..=3)
        .into_iter()
        .map(|ell| job(format!("numeric.{ell}"), move || one(painleve::numeric_report(ell, 0.01, 1.0, 1e-4))))
        .collect()
}

fn jobs_for(name: &str, c: &SuiteConfig) -> Result<Vec<Job>> {
    Ok(match name {
        "gessel" => gessel_jobs(c),
        "involutions" => involution_jobs(c),
        "words" => word_jobs(c),
        "lattice-structure" => lattice_structure_jobs(c),
        "lattice-flows" => lattice_flow_jobs(c),
        "virasoro" => virasoro_jobs(c),
        "pde" => pde_jobs(c),
        "painleve-orth" => painleve_orth_jobs(c),
        "painleve-unitary" => painleve_unitary_jobs(c),
        "painleve-words" => painleve_word_jobs(c),
        "closed-forms" => closed_form_jobs(c),
        "numeric" => numeric_jobs(c),
        "all" => {
            let mut v = Vec::new();
            for s in SUITES {
                v.extend(jobs_for(s, c)?);
            }
            v
        }
        _ => return Err(Error::Invalid(format!("unknown suite `{name}`"))),
    })
}

fn run_job(j: &Job, timings: bool) -> Vec<Report> {
    let start = Instant::now();
    let out = match (j.run)() {
        Ok(v) => v,
        // a failed case is reported and the suite continues
        Err(e) => vec![Report::new(format!("error.{}", j.name), "case could not be evaluated").skipped(e.to_string())],
    };
    let ms = start.elapsed().as_millis() as u64;
    out.into_iter()
        .map(|mut r| {
            if timings {
                r.runtime_ms = Some(ms);
            }
            r
        })
        .collect()
}

/// Run every case of the named suite on a bounded pool and merge the
/// reports in `check_id` order.
pub fn run_suite(config: &SuiteConfig) -> Result<ReportBundle> {
    let jobs = jobs_for(&config.suite, config)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.thread_count())
        .build()
        .map_err(|e| Error::Invalid(format!("thread pool: {e}")))?;
    let cases: Vec<Report> = pool.install(|| jobs.par_iter().flat_map_iter(|j| run_job(j, config.timings)).collect());
    let mut seen = BTreeSet::new();
    for c in &cases {
        if !seen.insert(c.check_id.as_str()) {
            return Err(Error::Invalid(format!("duplicate check id `{}`", c.check_id)));
        }
    }
    Ok(ReportBundle::new(&config.suite, config.summary(), cases))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(run_suite(&SuiteConfig::new("nope")).is_err());
    }

    #[test]
    fn closed_forms_suite_passes_and_repeats() {
        let mut c = SuiteConfig::new("closed-forms");
        c.threads = Some(2);
        let a = run_suite(&c).unwrap();
        assert!(a.all_passed(), "{}", a.to_text());
        assert_eq!(a.to_json(), run_suite(&c).unwrap().to_json());
    }

    #[test]
    fn format_names() {
        assert_eq!(ReportFormat::parse("csv").unwrap(), ReportFormat::Csv);
        assert!(ReportFormat::parse("xml").is_err());
    }
}
