//! Painlevé V characterizations of the group integrals: exact series from τ,
//! residuals of the denominator-cleared ODEs, the coefficient recursion for
//! the orthogonal family, the Cosgrove first integral and a floating-point
//! cross-check of the unitary case.

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::closed_forms::{self, AomotoKind};
use crate::combinatorics;
use crate::error::{Error, Result};
use crate::report::Report;
use crate::scalar::{binomial, factorial, int, rat, rat_to_f64};
use crate::series::{VariableTable, WeightedSeries};
use crate::tau::{self, Deformation, Group, GroupLocus, WeightSpec};

/// Univariate truncated series whose coefficients are known through `order`.
/// `order == None` marks an exact polynomial. Products track the order
/// exactly: `(A, va)·(B, vb)` is known through `min(A + vb, B + va)`.
#[derive(Clone, Debug, PartialEq)]
struct Uni {
    c: Vec<BigRational>,
    order: Option<i64>,
}

fn min_order(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (None, o) | (o, None) => o,
        (Some(x), Some(y)) => Some(x.min(y)),
    }
}

impl Uni {
    fn new(c: Vec<BigRational>, order: Option<i64>) -> Self {
        let mut u = Uni { c, order };
        match u.order {
            Some(o) if o < 0 => u.c.clear(),
            Some(o) => u.c.truncate(o as usize + 1),
            None => {}
        }
        while u.c.last().is_some_and(|v| v.is_zero()) {
            u.c.pop();
        }
        u
    }

    fn constant(r: BigRational) -> Self {
        Uni::new(vec![r], None)
    }

    fn int(v: i64) -> Self {
        Uni::constant(int(v))
    }

    fn x() -> Self {
        Uni::new(vec![int(0), int(1)], None)
    }

    fn from_series(s: &WeightedSeries) -> Self {
        Uni::new(s.univariate_coeffs(), Some(s.order() as i64))
    }

    fn to_series(&self, cap: u32) -> WeightedSeries {
        let order = self.order.map_or(cap, |o| o.max(0) as u32);
        WeightedSeries::from_univariate(&x_table(), order, &self.c)
    }

    fn coeff(&self, i: usize) -> BigRational {
        self.c.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Index of the first nonzero coefficient; `None` for the exact zero.
    fn valuation(&self) -> Option<i64> {
        match self.c.iter().position(|v| !v.is_zero()) {
            Some(i) => Some(i as i64),
            None => self.order.map(|o| o + 1),
        }
    }

    fn is_known_zero(&self) -> bool {
        self.c.iter().all(|v| v.is_zero())
    }

    fn d(&self) -> Self {
        let c = self.c.iter().enumerate().skip(1).map(|(i, v)| v * int(i as i64)).collect();
        Uni::new(c, self.order.map(|o| o - 1))
    }

    fn scale(&self, r: &BigRational) -> Self {
        Uni::new(self.c.iter().map(|v| v * r).collect(), self.order)
    }

    fn times_x(&self) -> Self {
        self * &Uni::x()
    }

    fn eval_f64(&self, x: f64) -> f64 {
        self.c.iter().rev().fold(0.0, |acc, v| acc * x + rat_to_f64(v))
    }
}

impl Add for &Uni {
    type Output = Uni;
    fn add(self, o: &Uni) -> Uni {
        let n = self.c.len().max(o.c.len());
        let c = (0..n).map(|i| self.coeff(i) + o.coeff(i)).collect();
        Uni::new(c, min_order(self.order, o.order))
    }
}

impl Neg for &Uni {
    type Output = Uni;
    fn neg(self) -> Uni {
        Uni::new(self.c.iter().map(|v| -v).collect(), self.order)
    }
}

impl Sub for &Uni {
    type Output = Uni;
    fn sub(self, o: &Uni) -> Uni {
        self + &(-o)
    }
}

impl Mul for &Uni {
    type Output = Uni;
    fn mul(self, o: &Uni) -> Uni {
        let (va, vb) = match (self.valuation(), o.valuation()) {
            (Some(a), Some(b)) => (a, b),
            // an exact zero factor
            _ => return Uni::new(vec![], None),
        };
        let order = match (self.order, o.order) {
            (None, None) => None,
            (Some(a), None) => Some(a + vb),
            (None, Some(b)) => Some(b + va),
            (Some(a), Some(b)) => Some((a + vb).min(b + va)),
        };
        let top = self.c.len() + o.c.len();
        let mut c = vec![BigRational::zero(); top];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if order.is_some_and(|m| (i + j) as i64 > m) {
                    break;
                }
                c[i + j] += a * b;
            }
        }
        Uni::new(c, order)
    }
}

fn x_table() -> Arc<VariableTable> {
    VariableTable::unit_weights(&["x"])
}

fn ri(v: i64) -> BigRational {
    int(v)
}

/// Exact square root of a non-negative rational, if it is a perfect square.
fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let (n, d) = (r.numer(), r.denom());
    let (sn, sd) = (n.sqrt(), d.sqrt());
    (&sn * &sn == *n && &sd * &sd == *d).then(|| BigRational::new(sn, sd))
}

/// Which equation a series is substituted into.
#[derive(Clone, Debug, PartialEq)]
pub enum OdeSpec {
    /// Third-order equation for the orthogonal-group log-derivative `f`.
    Orthogonal { ell: u32 },
    /// Second-order equation for the unitary `g`.
    Unitary { ell: u32 },
    /// Third-order equation for the words `h`, exactly as displayed.
    Words { ell: u32, k: u32 },
    /// Third-order equation for `H = x d/dx log τ_n` of the Jacobi weight.
    Jacobi { n: u32, a: BigRational, b: BigRational },
    /// Its rescaled form for `x d/dx log e^{−cx} τ_n(2x)`.
    JacobiRescaled { n: u32, a: BigRational, b: BigRational, c: BigRational },
    /// Quadratic first integral of the orthogonal equation with constant `c`.
    Cosgrove { ell: u32, c: BigRational },
    /// The words equation obtained by solving the two lattice relations for
    /// `b_n`, `b_n^*` and substituting into the Toeplitz relation.
    WordsChain { n: u32, k: u32 },
}

impl OdeSpec {
    /// Number of derivatives the equation takes.
    pub fn derivative_order(&self) -> u32 {
        match self {
            OdeSpec::Unitary { .. } | OdeSpec::Cosgrove { .. } => 2,
            _ => 3,
        }
    }

    pub fn label(&self) -> String {
        match self {
            OdeSpec::Orthogonal { ell } => format!("orthogonal(ell={ell})"),
            OdeSpec::Unitary { ell } => format!("unitary(ell={ell})"),
            OdeSpec::Words { ell, k } => format!("words(ell={ell},k={k})"),
            OdeSpec::Jacobi { n, a, b } => format!("jacobi(n={n},a={a},b={b})"),
            OdeSpec::JacobiRescaled { n, a, b, c } => format!("jacobi-rescaled(n={n},a={a},b={b},c={c})"),
            OdeSpec::Cosgrove { ell, c } => format!("first-integral(ell={ell},c={c})"),
            OdeSpec::WordsChain { n, k } => format!("words-chain(n={n},k={k})"),
        }
    }
}

fn inapplicable(what: &str) -> Error {
    Error::Unsupported(format!("cleared denominator {what} is identically zero"))
}

fn cleared_residual(spec: &OdeSpec, f: &Uni) -> Result<Uni> {
    let x = Uni::x();
    let x2 = &x * &x;
    let q = |r: &BigRational| Uni::constant(r.clone());
    let (f1, f2) = (f.d(), f.d().d());
    let f3 = f2.d();
    let one = Uni::int(1);
    let r = match spec {
        OdeSpec::Orthogonal { ell } => {
            let l2 = ri((ell * ell) as i64);
            let a = &(&x2 * &f3) + &(&x * &f2);
            let b = &(&x * &(&f1 * &f1)).scale(&ri(6)) - &(f * &f1).scale(&ri(4));
            let c = &(&x2.scale(&ri(16)) + &q(&l2)) * &f1;
            let d = &(&x * f).scale(&ri(16)) + &x.scale(&(ri(2) * (&l2 - ri(1))));
            &(&(&a + &b) - &c) + &d
        }
        OdeSpec::Unitary { ell } => {
            if f.is_known_zero() {
                return Err(inapplicable("g"));
            }
            let gm = f - &one;
            let ggm = f * &gm;
            let a = &(&x2 * &ggm) * &f2;
            let b = &(&x2 * &(&f1 * &f1)) * &(&f.scale(&ri(2)) - &one);
            let c = &(&x * &ggm) * &f1;
            let d = &(&x * &ggm) * &ggm;
            let e = (&gm * &gm).scale(&ri((ell * ell) as i64));
            &(&(&(&a.scale(&ri(2)) - &b) + &c.scale(&ri(2))) + &d.scale(&ri(4))) - &e
        }
        OdeSpec::Words { ell, k } => {
            let n = Uni::int(*ell as i64);
            let hp1 = &f1 + &one;
            if f1.is_known_zero() {
                return Err(inapplicable("h'"));
            }
            if hp1.is_known_zero() {
                return Err(inapplicable("h'+1"));
            }
            let hh = &f1 * &hp1;
            let a = (&(&x2 * &hh) * &f3).scale(&ri(2));
            let b = &(&x2 * &(&f2 * &f2)) * &(&f1.scale(&ri(2)) + &one);
            let c = (&(&x * &hh) * &f2).scale(&ri(2));
            let d = (&x * &(&hh * &hh)).scale(&ri(4 * (*ell as i64 + *k as i64)));
            let aa = &(&(&(&x - &n) * &f1) - f) - &n;
            let bb = &(&(&(&(&f.scale(&ri(2)) + &x) + &n) * &f1) + f) + &n;
            &(&(&(&a - &b) + &c) + &d) - &(&aa * &bb)
        }
        OdeSpec::Jacobi { n, a, b } => {
            let n_ = ri(*n as i64);
            let m = &(&n_ * ri(2)) + a;
            let coef = &(&(&f.scale(&ri(4)) + &x2.scale(&ri(4))) - &x.scale(&(b * ri(4)))) + &q(&(&m * &m));
            let lin = &x.scale(&ri(4)) - &q(&(b * ri(2)));
            let cst = &x.scale(&(ri(2) * &n_ * (&n_ + a))) - &q(&(b * &n_ * &m));
            let t = &(&(&x2 * &f3) + &(&x * &f2)) + &(&x * &(&f1 * &f1)).scale(&ri(6));
            &(&(&t - &(&coef * &f1)) + &(&lin * f)) + &cst
        }
        OdeSpec::JacobiRescaled { n, a, b, c } => {
            let n_ = ri(*n as i64);
            let h = rat(1, 2);
            let m = &(&n_ * ri(2)) + a;
            let bc = b + c;
            let coef = &(&(&f.scale(&ri(4)) + &x2.scale(&ri(16))) - &x.scale(&(&bc * ri(8)))) + &q(&(&m * &m));
            let lin = &x.scale(&ri(8)) - &q(&(&bc * ri(2)));
            let cst = &x.scale(&(ri(4) * &n_ * (&n_ + a) + c * (b * ri(2) + c))) - &q(&(&h * &m * (ri(2) * &n_ * &bc + a * c)));
            let t = &(&(&(&x2 * &f3) + &(&x * &f2)).scale(&h) + &(&x * &(&f1 * &f1)).scale(&ri(3))) - &(&coef * &f1).scale(&h);
            &(&t + &(&lin * f)) + &cst
        }
        OdeSpec::Cosgrove { ell, c } => {
            let l2 = ri((ell * ell) as i64);
            let lhs = (&x2 * &(&f2 * &f2)).scale(&rat(1, 4));
            let p1 = &(&(&x * &(&f1 * &f1)) - &(&(&x2.scale(&ri(4)) + &q(&(&l2 * rat(1, 4)))) * &f1)) + &x.scale(&(&l2 - ri(1)));
            let p2 = &(&(&f1 * &f1) - &(&x * &f1).scale(&ri(8))) + &q(&(&l2 - ri(1)));
            let rhs = &(&(&-&(&p1 * &f1) + &(&p2 * f)) + &(f * f).scale(&ri(4))) - &q(&(c * rat(1, 4)));
            &lhs - &rhs
        }
        OdeSpec::WordsChain { n, k } => words_chain_residual(*n, *k, f)?,
    };
    Ok(r)
}

/// Solves `x b* + (k+n−1) b = −(f + x)` and `−2x f' b* = −(f + (n−x) f' + n + x f'')`
/// by Cramer's rule and substitutes `b = Nb/Δ`, `b* = Nb*/Δ` into
/// `b b* = (1+f')(1+f' − b')`, cleared by `Δ²`.
fn words_chain_residual(n: u32, k: u32, f: &Uni) -> Result<Uni> {
    let x = Uni::x();
    let nn = Uni::int(n as i64);
    let one = Uni::int(1);
    let (f1, f2) = (f.d(), f.d().d());
    if f1.is_known_zero() {
        return Err(inapplicable("f'"));
    }
    // rows (a11 a12 | r1), (a21 a22 | r2) in the unknowns (b*, b)
    let a11 = x.clone();
    let a12 = Uni::int(k as i64 + n as i64 - 1);
    let r1 = -&(f + &x);
    let a21 = -&(&x * &f1).scale(&ri(2));
    let a22 = Uni::int(0);
    let r2 = -&(&(&(f + &(&(&nn - &x) * &f1)) + &nn) + &(&x * &f2));
    let det = &(&a11 * &a22) - &(&a12 * &a21);
    let n_star = &(&r1 * &a22) - &(&a12 * &r2);
    let n_b = &(&a11 * &r2) - &(&r1 * &a21);
    let p = &one + &f1;
    let lhs = &n_b * &n_star;
    let rhs = &(&(&p * &p) * &(&det * &det)) - &(&p * &(&(&n_b.d() * &det) - &(&n_b * &det.d())));
    Ok(&lhs - &rhs)
}

/// Substitutes a single-variable series into the cleared form of an equation.
/// The result is known through the returned series' order.
pub fn ode_residual(spec: &OdeSpec, series: &WeightedSeries) -> Result<WeightedSeries> {
    if series.table().len() != 1 {
        return Err(Error::Invalid("ODE residuals need a single-variable series".into()));
    }
    if series.order() < spec.derivative_order() + 2 {
        return Err(Error::Invalid(format!(
            "series order {} too low for a {}-order equation",
            series.order(),
            spec.derivative_order()
        )));
    }
    let r = cleared_residual(spec, &Uni::from_series(series))?;
    if r.order.is_some_and(|o| o < 0) {
        return Err(Error::Invalid("no coefficient of the residual is determined".into()));
    }
    Ok(r.to_series(series.order()))
}

/// Coefficients `a_i` of `f = x² + Σ_{i≥3} a_i x^i` from the recursion
/// `(i+1)(i²−ℓ²) a_{i+1} − 16(i−2) a_{i−1} + Σ_{m+n=i+1} n a_n (6m−4) a_m = 0`,
/// with the free coefficient `a_{ℓ+1} = ±1/ℓ!`.
pub fn f_series_recursive(ell: u32, plus: bool, order: u32) -> Result<WeightedSeries> {
    let f = factorial(ell as u64);
    let top = BigRational::new(if plus { BigInt::one() } else { -BigInt::one() }, f);
    f_series_with_free_coefficient(ell, &top, order)
}

/// The recursion with an arbitrary value for the free coefficient `a_{ℓ+1}`.
pub fn f_series_with_free_coefficient(ell: u32, top: &BigRational, order: u32) -> Result<WeightedSeries> {
    if ell < 3 {
        return Err(Error::Unsupported(format!(
            "the recursion needs ell >= 3 (got {ell}); use the determinant path"
        )));
    }
    if order < ell + 2 {
        return Err(Error::Invalid(format!("order must be at least ell + 2 = {}", ell + 2)));
    }
    let l2 = (ell * ell) as i64;
    let d = order as usize;
    let mut a = vec![BigRational::zero(); d + 1];
    a[2] = int(1);
    for i in 2..d {
        let mut rhs = int(16 * (i as i64 - 2)) * &a[i - 1];
        for nn in 2..i {
            let m = i + 1 - nn;
            if m < 2 || m > i - 1 {
                continue;
            }
            rhs -= int(nn as i64) * &a[nn] * int(6 * m as i64 - 4) * &a[m];
        }
        let lead = (i as i64 + 1) * ((i * i) as i64 - l2);
        if lead == 0 {
            if !rhs.is_zero() {
                return Err(Error::Invalid(format!(
                    "recursion inconsistent at i = {i}: residual {rhs}"
                )));
            }
            a[i + 1] = top.clone();
        } else {
            a[i + 1] = rhs / int(lead);
        }
    }
    Ok(WeightedSeries::from_univariate(&x_table(), order, &a))
}

/// Which log-derivative of a τ-function to build.
#[derive(Clone, Debug, PartialEq)]
pub enum Target {
    /// `x d/dx log E_{O(ℓ+1)±} e^{x Tr M}`.
    FOrth { ell: u32, plus: bool },
    /// `d/dx x d/dx log E_{U(ℓ)} e^{√x Tr(M + M̄)}`.
    GUnitary { ell: u32 },
    /// `(x d/dx log E_{U(ℓ)} det(I+M)^k e^{σ x Tr M̄} − ℓx)/(ℓ+k)`.
    HWords { ell: u32, k: u32, sigma: i64 },
    /// `x d/dx log τ_n(scale·x)` for the Jacobi weight.
    HJacobi { n: u32, alpha: BigRational, beta: BigRational, scale: i64 },
    /// `x d/dx log e^{−cx} τ_n(2x)` for the Jacobi weight.
    HTilde { n: u32, alpha: BigRational, beta: BigRational, c: BigRational },
}

fn x_dlog(s: &WeightedSeries) -> Result<Uni> {
    let l = Uni::from_series(&s.log()?);
    Ok(l.d().times_x())
}

fn jacobi_tau(n: u32, alpha: &BigRational, beta: &BigRational, scale: i64, order: u32) -> Result<WeightedSeries> {
    let spec = WeightSpec::jacobi(alpha.clone(), beta.clone())?;
    let def = Deformation::single_time(order, scale);
    Ok(tau::tau(&spec, n as usize, &def)?.series)
}

fn target_uni(target: &Target, order: u32) -> Result<Uni> {
    match target {
        Target::FOrth { ell, plus } => {
            let g = if *plus { Group::OPlus(ell + 1) } else { Group::OMinus(ell + 1) };
            x_dlog(&tau::group_series(g, GroupLocus::Trace, order)?)
        }
        Target::GUnitary { ell } => {
            let e = tau::group_series(Group::U(*ell), GroupLocus::SqrtTrace, order)?;
            Ok(x_dlog(&e)?.d())
        }
        Target::HWords { ell, k, sigma } => {
            let e = combinatorics::words_group_series(*ell, *k, *sigma, order)?;
            let xl = x_dlog(&e)?;
            let v = &xl - &Uni::x().scale(&ri(*ell as i64));
            Ok(v.scale(&rat(1, (ell + k) as i64)))
        }
        Target::HJacobi { n, alpha, beta, scale } => x_dlog(&jacobi_tau(*n, alpha, beta, *scale, order)?),
        Target::HTilde { n, alpha, beta, c } => {
            let h = x_dlog(&jacobi_tau(*n, alpha, beta, 2, order)?)?;
            Ok(&h - &Uni::x().scale(c))
        }
    }
}

/// The exact single-variable series of a target, built from its τ series at
/// truncation `order`.
pub fn tau_log_derivative(target: &Target, order: u32) -> Result<WeightedSeries> {
    Ok(target_uni(target, order)?.to_series(order))
}

/// Canonical Painlevé V parameters `(α, β, γ, δ)` of the orthogonal equation.
pub fn orthogonal_pv_parameters(ell: u32) -> [BigRational; 4] {
    let a = rat(((ell + 1) * (ell + 1)) as i64, 8);
    [a.clone(), -a, int(0), int(-8)]
}

/// Coefficients `(a1, a2, a3, c)` of the master form with `P = x`,
/// `Q = −a1 x²/4`, `R = −(a2 x + a3)/4`, from Painlevé V parameters.
/// Fails unless `2α` is a rational square.
pub fn master_coefficients(p: &[BigRational; 4]) -> Result<[BigRational; 4]> {
    let [alpha, beta, gamma, delta] = p;
    let s = rational_sqrt(&(alpha * ri(2)))
        .ok_or_else(|| Error::Unsupported(format!("2·alpha = {} is not a rational square", alpha * ri(2))))?;
    let u = (ri(1) - s).pow(2);
    let a1 = -(delta * ri(2));
    let a2 = gamma * gamma / ri(4) + ri(2) * beta * delta - delta * &u;
    let a3 = beta * gamma + gamma * &u / ri(2);
    let c = -(gamma * gamma) * (&u - ri(2) * beta) / ri(32) + delta * (&u + ri(2) * beta).pow(2) / ri(32);
    Ok([a1, a2, a3, c])
}

/// Master-form ODE and its first integral, both cleared by `P²`, for
/// `P = x`, `Q = −a1 x²/4`, `R = −(a2 x + a3)/4`.
fn master_residuals(m: &[BigRational; 4], f: &Uni) -> (Uni, Uni) {
    let [a1, a2, a3, c] = m;
    let x = Uni::x();
    let p = x.clone();
    let q = (&x * &x).scale(&(-a1 / ri(4)));
    let r = &x.scale(&(-a2 / ri(4))) - &Uni::constant(a3 / ri(4));
    let (p1, q1, r1) = (p.d(), q.d(), r.d());
    let (p2, q2) = (p1.d(), q1.d());
    let p3 = p2.d();
    let (f1, f2) = (f.d(), f.d().d());
    let f3 = f2.d();
    let pp = &p * &p;
    let ode = &(&(&(&(&(&(&(&pp * &f3) + &(&(&p * &p1) * &f2)) + &(&p * &(&f1 * &f1)).scale(&ri(6)))
        - &(&(&p1 * f) * &f1).scale(&ri(4)))
        + &(&p2 * &(f * f)))
        + &(&q * &f1).scale(&ri(4)))
        - &(&q1 * f).scale(&ri(2)))
        + &r.scale(&ri(2));
    let a = &(&(&(&p * &(&f1 * &f1)) + &(&q * &f1)) + &r) * &f1;
    let b = &(&(&p1 * &(&f1 * &f1)) + &(&q1 * &f1)) + &r1;
    let cc = (&(&p2 * &f1) + &q2).scale(&rat(1, 2));
    let inner = &(&(&(&a - &(&b * f)) + &(&cc * &(f * f))) - &(&p3 * &(&(f * f) * f)).scale(&rat(1, 6))) + &Uni::constant(c.clone());
    let first = &(&pp * &(&f2 * &f2)) + &inner.scale(&ri(4));
    (ode, first)
}

fn zero_report(base: Report, r: &Uni, need: u32, cap: u32) -> Report {
    match r.order {
        Some(o) if o < 0 => base.fail(None).with_note("no residual coefficient determined"),
        _ => base.zero(&r.to_series(cap), need),
    }
}

/// `(n, a, b, c)` for `f_ℓ^± = x d/dx log e^{−cx} τ_n(2x)` with the Jacobi
/// weight `a = α+β`, `b = α−β`.
pub fn orthogonal_jacobi_parameters(ell: u32, plus: bool) -> (u32, i64, i64, i64) {
    match (plus, ell % 2 == 0) {
        (false, true) => (ell / 2, 0, -1, 1),
        (false, false) => ((ell - 1) / 2, 1, 0, 0),
        (true, true) => (ell / 2, 0, 1, -1),
        (true, false) => ((ell + 1) / 2, -1, 0, 0),
    }
}

fn sign_label(plus: bool) -> &'static str {
    if plus {
        "plus"
    } else {
        "minus"
    }
}

/// First integral (c = 0) on `f`, the master form on `f + ℓ²/4` with
/// coefficients derived from the canonical Painlevé V parameters, and
/// `f''(0) = 2`.
pub fn cosgrove_check(f: &WeightedSeries, ell: u32) -> Result<Report> {
    let order = f.order();
    let need = order.saturating_sub(2);
    let u = Uni::from_series(f);
    let pv = orthogonal_pv_parameters(ell);
    let m = master_coefficients(&pv)?;
    let mut rep = Report::new(format!("cosgrove.ell{ell}"), "quadratic first integral of the orthogonal equation")
        .param("ell", ell)
        .with_n(ell as i64);
    rep.order = Some(need);
    let first = cleared_residual(&OdeSpec::Cosgrove { ell, c: int(0) }, &u)?;
    rep = rep.absorb(&zero_report(Report::new("first-integral", ""), &first, need, order));
    let shifted = &u + &Uni::constant(rat((ell * ell) as i64, 4));
    let (ode, integral) = master_residuals(&m, &shifted);
    rep = rep.absorb(&zero_report(Report::new("master-ode", ""), &ode, order.saturating_sub(3), order));
    rep = rep.absorb(&zero_report(Report::new("master-integral", ""), &integral, need, order));
    let f2 = u.coeff(2) * ri(2);
    rep = rep.equal("f''(0)", &f2, &ri(2));
    let verified = [first.order, ode.order, integral.order].iter().flatten().min().copied().unwrap_or(0);
    rep.order_verified = Some(verified.max(0) as u32);
    let [a, b, g, d] = &pv;
    let [a1, a2, a3, c] = &m;
    Ok(rep.with_note(format!(
        "PV parameters alpha={a}, beta={b}, gamma={g}, delta={d}; master a1={a1}, a2={a2}, a3={a3}, c={c}"
    )))
}

/// All checks for one orthogonal family `f_ℓ^±` at truncation `order`.
pub fn orthogonal_reports(ell: u32, plus: bool, order: u32) -> Result<Vec<Report>> {
    if ell < 2 {
        return Err(Error::Unsupported(format!("orthogonal family needs ell >= 2 (got {ell})")));
    }
    let id = |s: &str| format!("painleve.orth.{}.ell{ell}.{s}", sign_label(plus));
    let need = order.saturating_sub(2);
    let fs = tau_log_derivative(&Target::FOrth { ell, plus }, order)?;
    let f = Uni::from_series(&fs);
    let mut out = Vec::new();
    let tag = |r: Report| r.param("ell", ell).param("sign", sign_label(plus)).with_n(ell as i64);

    let res = cleared_residual(&OdeSpec::Orthogonal { ell }, &f)?;
    out.push(zero_report(tag(Report::new(id("ode"), "third-order equation for the orthogonal log-derivative")), &res, need, order));

    let mut c = cosgrove_check(&fs, ell)?;
    c.check_id = id("first-integral");
    out.push(tag(c));

    // leading form and gap
    let mut gap = tag(Report::new(id("gap"), "f = x² ± x^{ℓ+1}/ℓ! with vanishing coefficients in degrees 3..ℓ"));
    gap.order = Some(ell + 1);
    gap.order_verified = Some(order.min(ell + 1));
    let top = BigRational::new(if plus { BigInt::one() } else { -BigInt::one() }, factorial(ell as u64));
    for i in 0..=ell + 1 {
        let expect = match i {
            2 => int(1),
            i if i == ell + 1 => top.clone(),
            _ => int(0),
        };
        gap = gap.equal(&format!("x^{i}"), &f.coeff(i as usize), &expect);
    }
    out.push(gap);

    // same series via the rescaled Jacobi form
    let (n, a, b, cc) = orthogonal_jacobi_parameters(ell, plus);
    let (ar, br, cr) = (int(a), int(b), int(cc));
    let ht = target_uni(
        &Target::HTilde {
            n,
            alpha: (&ar + &br) / ri(2),
            beta: (&ar - &br) / ri(2),
            c: cr.clone(),
        },
        order,
    )?;
    let res = cleared_residual(&OdeSpec::JacobiRescaled { n, a: ar.clone(), b: br.clone(), c: cr }, &ht)?;
    let r = tag(Report::new(id("rescaled-jacobi"), "f equals the rescaled Jacobi log-derivative, which solves its third-order equation"))
        .param("n", n)
        .param("a", a)
        .param("b", b)
        .param("c", cc);
    let r = r.compare(&fs, &ht.to_series(order), order);
    out.push(r.absorb(&zero_report(Report::new("residual", ""), &res, need, order)));

    // f''(0) from the moment closed forms
    let gamma = closed_forms::aomoto(AomotoKind::GammaN, n, &ar, &br)?;
    let y1 = closed_forms::aomoto(AomotoKind::Y1, n, &ar, &br)?;
    let slope = ri(2) * ri(n as i64) * y1;
    let assembled = &gamma - ri(2) * &slope * &slope;
    let r = tag(Report::new(id("second-derivative"), "f''(0) = 2 from the moment closed forms"))
        .param("gamma_n", &gamma)
        .equal("f''(0) vs moments", &(f.coeff(2) * ri(2)), &assembled)
        .equal("f''(0)", &(f.coeff(2) * ri(2)), &ri(2));
    out.push(r);

    if ell >= 3 {
        let rec = f_series_recursive(ell, plus, order)?;
        out.push(tag(Report::new(id("recursion"), "coefficient recursion agrees with the determinant path")).compare(&rec, &fs, order));
        // perturbing the free coefficient keeps the equation but breaks the match at x^{ℓ+1}
        let top = rec.coeff(&[(ell + 1) as u16]) + ri(1);
        let bad = f_series_with_free_coefficient(ell, &top, order)?;
        let mut r = tag(Report::new(id("uniqueness"), "a perturbed free coefficient still solves the equation and first differs at x^{ℓ+1}"));
        let bad_res = cleared_residual(&OdeSpec::Orthogonal { ell }, &Uni::from_series(&bad))?;
        r = r.absorb(&zero_report(Report::new("perturbed-residual", ""), &bad_res, need, order));
        r.order_verified = Some(ell + 1);
        r = match bad.first_difference(&fs) {
            Some((m, _, _)) if m == vec![(ell + 1) as u16] => r,
            Some((m, a, b)) => r.fail(Some(crate::report::Mismatch {
                coefficient_index: format!("first difference at {}", bad.format_monomial(&m)),
                lhs: a.to_string(),
                rhs: b.to_string(),
            })),
            None => r.fail(None).with_note("perturbed series agrees with the determinant path"),
        };
        out.push(r);
    }
    Ok(out)
}

/// `H = x d/dx log τ_n` for a Jacobi weight: the third-order equation,
/// `H(0) = 0` and `H'(0) = −nb/(a+2n)`.
pub fn jacobi_report(n: u32, alpha: &BigRational, beta: &BigRational, order: u32) -> Result<Report> {
    let a = alpha + beta;
    let b = alpha - beta;
    let h = target_uni(
        &Target::HJacobi {
            n,
            alpha: alpha.clone(),
            beta: beta.clone(),
            scale: 1,
        },
        order,
    )?;
    let res = cleared_residual(&OdeSpec::Jacobi { n, a: a.clone(), b: b.clone() }, &h)?;
    let base = Report::new(
        format!("painleve.jacobi.n{n}.alpha{alpha}.beta{beta}"),
        "x d/dx log τ_n of a Jacobi weight solves a third-order Painlevé V equation",
    )
    .param("n", n)
    .param("alpha", alpha)
    .param("beta", beta)
    .with_n(n as i64);
    let r = zero_report(base, &res, order.saturating_sub(2), order);
    let slope = -(ri(n as i64) * &b) / (&a + ri(2 * n as i64));
    Ok(r.equal("H(0)", &h.coeff(0), &int(0)).equal("H'(0)", &h.coeff(1), &slope))
}

/// Unitary family: the second-order equation, the leading form
/// `1 − x^ℓ/(ℓ!)²`, and re-integration to the group integral.
pub fn unitary_reports(ell: u32, order: u32) -> Result<Vec<Report>> {
    let id = |s: &str| format!("painleve.unitary.ell{ell}.{s}");
    let tag = |r: Report| r.param("ell", ell).with_n(ell as i64);
    let g = target_uni(&Target::GUnitary { ell }, order)?;
    let mut out = Vec::new();
    let res = cleared_residual(&OdeSpec::Unitary { ell }, &g)?;
    out.push(zero_report(tag(Report::new(id("ode"), "second-order equation for the unitary g")), &res, order.saturating_sub(2), order));

    let f = BigRational::from_integer(factorial(ell as u64));
    let mut lead = tag(Report::new(id("leading"), "g = 1 − x^ℓ/(ℓ!)² + O(x^{ℓ+1})"));
    lead.order = Some(ell);
    lead.order_verified = Some(ell);
    for i in 0..=ell {
        let expect = match i {
            0 if ell > 0 => int(1),
            i if i == ell => -(ri(1) / (&f * &f)) + if ell == 0 { int(1) } else { int(0) },
            _ => int(0),
        };
        lead = lead.equal(&format!("x^{i}"), &g.coeff(i as usize), &expect);
    }
    out.push(lead);

    // log E = Σ g_j x^{j+1}/(j+1)², i.e. ∫_0^x log(x/u) g(u) du
    let e = tau::group_series(Group::U(ell), GroupLocus::SqrtTrace, order)?;
    let top = g.order.unwrap_or(order as i64);
    let mut le = vec![int(0); (top + 2).max(1) as usize];
    for j in 0..=top.max(-1) {
        let j = j as usize;
        le[j + 1] = g.coeff(j) / ri(((j + 1) * (j + 1)) as i64);
    }
    let log_e = WeightedSeries::from_univariate(&x_table(), (top + 1).max(0) as u32, &le);
    let rebuilt = log_e.exp()?;
    out.push(tag(Report::new(id("reintegration"), "exp ∫ log(x/u) g(u) du reproduces the group integral")).compare(&rebuilt, &e.truncate(rebuilt.order()), order.saturating_sub(1)));
    Ok(out)
}

fn sign_word(sigma: i64) -> &'static str {
    if sigma > 0 {
        "plus"
    } else {
        "minus"
    }
}

/// `h = x(k−ℓ)/(k+ℓ) − x^{ℓ+1}/(ℓ+1)!·C(k+ℓ−1, ℓ) + O(x^{ℓ+2})`, coefficientwise.
fn words_leading(base: Report, ell: u32, k: u32, h: &WeightedSeries) -> Report {
    let mut r = base;
    r.order = Some(ell + 1);
    r.order_verified = Some(ell + 1);
    let lin = rat(k as i64 - ell as i64, (k + ell) as i64);
    let next = -BigRational::new(binomial((k + ell - 1) as i64, ell as i64), factorial(ell as u64 + 1));
    for i in 0..=ell + 1 {
        let mut expect = int(0);
        if i == 1 {
            expect += &lin;
        }
        if i == ell + 1 {
            expect += &next;
        }
        r = r.equal(&format!("x^{i}"), &h.coeff(&[i as u16]), &expect);
    }
    r
}

/// Words family for one exponent sign `σ` of `e^{σ x Tr M̄}`: the displayed
/// initial data, the derivation chain and the displayed equation.
pub fn words_sign_reports(ell: u32, k: u32, sigma: i64, order: u32) -> Result<Vec<Report>> {
    let id = |s: &str| format!("painleve.words.ell{ell}.k{k}.{}.{s}", sign_word(sigma));
    let tag = |r: Report| r.param("ell", ell).param("k", k).param("sigma", sigma).with_n(ell as i64);
    let hs = tau_log_derivative(&Target::HWords { ell, k, sigma }, order)?;
    let h = Uni::from_series(&hs);
    let need = order.saturating_sub(3);
    let mut out = vec![words_leading(
        tag(Report::new(id("leading"), "h = x(k−ℓ)/(k+ℓ) − x^{ℓ+1}/(ℓ+1)!·C(k+ℓ−1, ℓ) + O(x^{ℓ+2})")),
        ell,
        k,
        &hs,
    )];
    let chain = cleared_residual(&OdeSpec::WordsChain { n: ell, k }, &h)?;
    out.push(zero_report(
        tag(Report::new(id("chain"), "lattice relations solved for b_n, b_n* and substituted into the Toeplitz relation")),
        &chain,
        need,
        order,
    ));
    let printed = cleared_residual(&OdeSpec::Words { ell, k }, &h)?;
    out.push(zero_report(tag(Report::new(id("ode"), "third-order equation for h as displayed")), &printed, need, order));
    Ok(out)
}

/// Words family: both exponent signs, the relation between them, the initial values
/// and the word counts.
pub fn words_reports(ell: u32, k: u32, order: u32) -> Result<Vec<Report>> {
    let id = |s: &str| format!("painleve.words.ell{ell}.k{k}.{s}");
    let tag = |r: Report| r.param("ell", ell).param("k", k).with_n(ell as i64);
    let mut out = words_sign_reports(ell, k, 1, order)?;
    out.extend(words_sign_reports(ell, k, -1, order)?);

    // h_−(x) = h_+(−x) − 2ℓx/(ℓ+k)
    let hp = target_uni(&Target::HWords { ell, k, sigma: 1 }, order)?;
    let hm = target_uni(&Target::HWords { ell, k, sigma: -1 }, order)?;
    let reflected = Uni::new(
        hp.c.iter().enumerate().map(|(i, v)| if i % 2 == 1 { -v } else { v.clone() }).collect(),
        hp.order,
    );
    let rhs = &reflected - &Uni::x().scale(&rat(2 * ell as i64, (ell + k) as i64));
    out.push(
        tag(Report::new(id("sign-relation"), "the two exponent signs give h_−(x) = h_+(−x) − 2ℓx/(ℓ+k)"))
            .compare(&hm.to_series(order), &rhs.to_series(order), order),
    );

    out.push(tag(words_initial_report(ell, k, order)?));

    // exp(ℓx + (ℓ+k)∫h_+/u) against word counts
    let d = order.min(8);
    let mut c = vec![int(0); d as usize + 1];
    c[1] = ri(ell as i64);
    for (i, ci) in c.iter_mut().enumerate().skip(1) {
        *ci += hp.coeff(i) * ri((ell + k) as i64) / ri(i as i64);
    }
    let gf = WeightedSeries::from_univariate(&x_table(), d, &c).exp()?;
    let counts = combinatorics::words_generating_function(ell, k, d)?;
    out.push(
        tag(Report::new(id("counts"), "exp(ℓx + (ℓ+k)∫h/u du) with the plus sign is the word-count generating function"))
            .compare(&gf, &counts, d),
    );
    Ok(out)
}

/// `τ_n(0) = 1` and `∂τ_n/∂t_1(0) = 0` for the weight `(1+z)^k`, and
/// `∂_{t_1} log τ_n = (1/(n+k)) x d/dx log e^{−nx} τ_n` on `s_1 = x`.
pub fn words_initial_report(n: u32, k: u32, order: u32) -> Result<Report> {
    let tab = VariableTable::unit_weights(&["x", "y"]);
    let x = WeightedSeries::named(&tab, "x", order);
    let y = WeightedSeries::named(&tab, "y", order);
    let def = Deformation::new(&tab, order, vec![y], vec![x])?;
    let raw = tau::tau_raw(&WeightSpec::Circle { k }, n as usize, &def)?;
    let mut r = Report::new(format!("painleve.words.ell{n}.k{k}.initial-values"), "τ_n(0) = 1, ∂τ_n/∂t_1(0) = 0 and the t_1-derivative identity")
        .equal("tau(0)", &raw.constant_term(), &int(1))
        .equal("d tau/d t1 (0)", &raw.coeff(&[0, 1]), &int(0));
    let l = raw.log()?;
    let dt = l.d("y");
    let on_locus: Vec<BigRational> = (0..=dt.order()).map(|e| dt.coeff(&[e as u16, 0])).collect();
    let lhs = Uni::new(on_locus, Some(dt.order() as i64));
    let lx: Vec<BigRational> = (0..=order).map(|e| l.coeff(&[e as u16, 0])).collect();
    let lx = Uni::new(lx, Some(order as i64));
    let rhs = (&lx.d().times_x() - &Uni::x().scale(&ri(n as i64))).scale(&rat(1, (n + k) as i64));
    let diff = &lhs - &rhs;
    r = zero_report(r, &diff, order.saturating_sub(2), order);
    Ok(r)
}

/// `(n, α, β)` cases for the Jacobi equation.
pub fn default_jacobi_cases() -> Vec<(u32, BigRational, BigRational)> {
    let h = rat(1, 2);
    vec![
        (1, h.clone(), -h.clone()),
        (2, int(0), int(0)),
        (2, h.clone(), h.clone()),
        (3, int(1), int(0)),
        (2, rat(3, 2), h.clone()),
    ]
}

// ---------------------------------------------------------------------------
// floating point

/// `I_ν(u)` for integer `ν` by its power series.
fn bessel_i(nu: i64, u: f64) -> f64 {
    let nu = nu.unsigned_abs() as i32;
    let q = u / 2.0;
    let mut term = q.powi(nu) / (1..=nu).map(|v| v as f64).product::<f64>();
    let mut sum = term;
    let q2 = q * q;
    let mut m = 0.0;
    loop {
        m += 1.0;
        term *= q2 / (m * (m + nu as f64));
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// `g(x)` from the Bessel determinant `det(I_{j−i}(2√x))` by Jacobi's formula.
fn g_bessel(ell: u32, x: f64) -> f64 {
    let n = ell as usize;
    let u = 2.0 * x.sqrt();
    let du = 1.0 / x.sqrt();
    let d2u = -0.5 / (x * x.sqrt());
    let entry = |f: &dyn Fn(i64) -> f64| DMatrix::from_fn(n, n, |i, j| f(j as i64 - i as i64));
    let a = entry(&|v| bessel_i(v, u));
    let ip = |v: i64| 0.5 * (bessel_i(v - 1, u) + bessel_i(v + 1, u));
    let ipp = |v: i64| 0.25 * (bessel_i(v - 2, u) + 2.0 * bessel_i(v, u) + bessel_i(v + 2, u));
    let a1 = entry(&|v| ip(v) * du);
    let a2 = entry(&|v| ipp(v) * du * du + ip(v) * d2u);
    let inv = a.try_inverse().expect("Bessel matrix is invertible for x > 0");
    let b1 = &inv * &a1;
    let l1 = b1.trace();
    let l2 = (&inv * &a2).trace() - (&b1 * &b1).trace();
    l1 + x * l2
}

/// `g''` from the unitary equation.
fn g_rhs(ell: u32, x: f64, g: f64, gp: f64) -> f64 {
    let l2 = (ell * ell) as f64;
    0.5 * gp * gp * (1.0 / (g - 1.0) + 1.0 / g) - gp / x - 2.0 / x * g * (g - 1.0) + l2 / (2.0 * x * x) * (g - 1.0) / g
}

/// Classical RK4 for `(g, g')` from `x0`; returns the samples of both.
fn rk4(ell: u32, x0: f64, g0: f64, gp0: f64, h: f64, steps: usize) -> (Vec<f64>, Vec<f64>) {
    let mut g = Vec::with_capacity(steps + 1);
    let mut gp = Vec::with_capacity(steps + 1);
    let (mut y, mut v) = (g0, gp0);
    g.push(y);
    gp.push(v);
    for i in 0..steps {
        let x = x0 + h * i as f64;
        let k1 = (v, g_rhs(ell, x, y, v));
        let k2 = (v + 0.5 * h * k1.1, g_rhs(ell, x + 0.5 * h, y + 0.5 * h * k1.0, v + 0.5 * h * k1.1));
        let k3 = (v + 0.5 * h * k2.1, g_rhs(ell, x + 0.5 * h, y + 0.5 * h * k2.0, v + 0.5 * h * k2.1));
        let k4 = (v + h * k3.1, g_rhs(ell, x + h, y + h * k3.0, v + h * k3.1));
        y += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        v += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        g.push(y);
        gp.push(v);
    }
    (g, gp)
}

/// Sampling grid of the floating-point cross-check.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatGrid {
    pub x0: f64,
    pub x_max: f64,
    pub step: f64,
    pub g: Vec<f64>,
    pub g_prime: Vec<f64>,
}

/// Outcome of the floating-point cross-check.
#[derive(Clone, Debug, PartialEq)]
pub struct CrossCheck {
    pub ell: u32,
    pub deviation: f64,
    /// Largest change of the integrated path when the step is halved.
    pub halving_change: f64,
    pub steps: usize,
}

fn grid_steps(x0: f64, x_max: f64, step: f64) -> Result<usize> {
    if !(x0 > 0.0 && x_max >= x0 && step > 0.0) {
        return Err(Error::Invalid(format!("need 0 < x0 <= x_max and step > 0 (got {x0}, {x_max}, {step})")));
    }
    Ok(((x_max - x0) / step).round() as usize)
}

fn seed_values(ell: u32, x0: f64) -> Result<(f64, f64)> {
    let g = target_uni(&Target::GUnitary { ell }, 24)?;
    Ok((g.eval_f64(x0), g.d().eval_f64(x0)))
}

/// Exact series seeding at `x0`, then RK4 on the unitary equation; returns
/// the samples of `g` and `g'` on the grid.
pub fn integrate_unitary(ell: u32, x0: f64, x_max: f64, step: f64) -> Result<FloatGrid> {
    let steps = grid_steps(x0, x_max, step)?;
    let (g0, gp0) = seed_values(ell, x0)?;
    let h = if steps == 0 { 0.0 } else { (x_max - x0) / steps as f64 };
    let (g, gp) = rk4(ell, x0, g0, gp0, h, steps);
    Ok(FloatGrid {
        x0,
        x_max,
        step: h,
        g,
        g_prime: gp,
    })
}

/// Largest `|g_Bessel − g_RK4|` over the grid.
pub fn numeric_crosscheck(ell: u32, x0: f64, x_max: f64, step: f64) -> Result<f64> {
    Ok(numeric_crosscheck_full(ell, x0, x_max, step)?.deviation)
}

/// The cross-check together with the step-halving comparison.
pub fn numeric_crosscheck_full(ell: u32, x0: f64, x_max: f64, step: f64) -> Result<CrossCheck> {
    if ell == 0 || ell > 4 {
        return Err(Error::Unsupported(format!("cross-check supports 1 <= ell <= 4 (got {ell})")));
    }
    let steps = grid_steps(x0, x_max, step)?;
    if steps == 0 {
        return Ok(CrossCheck {
            ell,
            deviation: 0.0,
            halving_change: 0.0,
            steps,
        });
    }
    let (g0, gp0) = seed_values(ell, x0)?;
    let h = (x_max - x0) / steps as f64;
    let (coarse, _) = rk4(ell, x0, g0, gp0, h, steps);
    let (fine, _) = rk4(ell, x0, g0, gp0, h / 2.0, 2 * steps);
    let mut deviation: f64 = 0.0;
    let mut halving: f64 = 0.0;
    for (i, y) in coarse.iter().enumerate() {
        let x = x0 + h * i as f64;
        deviation = deviation.max((g_bessel(ell, x) - y).abs());
        halving = halving.max((fine[2 * i] - y).abs());
    }
    Ok(CrossCheck {
        ell,
        deviation,
        halving_change: halving,
        steps,
    })
}

/// Report for the cross-check with tolerance `1e−6` and halving `1e−8`.
pub fn numeric_report(ell: u32, x0: f64, x_max: f64, step: f64) -> Result<Report> {
    let c = numeric_crosscheck_full(ell, x0, x_max, step)?;
    let mut r = Report::new(format!("numeric.unitary.ell{ell}"), "Bessel determinant against the integrated unitary equation")
        .param("ell", ell)
        .param("x0", x0)
        .param("x_max", x_max)
        .param("step", step)
        .with_n(ell as i64)
        .with_note(format!("deviation {:.3e}, halving change {:.3e}", c.deviation, c.halving_change));
    if !(c.deviation <= 1e-6) {
        r = r.fail(Some(crate::report::Mismatch {
            coefficient_index: "max deviation".into(),
            lhs: format!("{:e}", c.deviation),
            rhs: "1e-6".into(),
        }));
    }
    if !(c.halving_change <= 1e-8) {
        r = r.fail(Some(crate::report::Mismatch {
            coefficient_index: "step halving".into(),
            lhs: format!("{:e}", c.halving_change),
            rhs: "1e-8".into(),
        }));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coeffs(s: &WeightedSeries, n: usize) -> Vec<BigRational> {
        (0..n).map(|i| s.coeff(&[i as u16])).collect()
    }

    #[test]
    fn uni_order_tracking() {
        let f = Uni::new(vec![int(0), int(1), int(2)], Some(5));
        let p = &f * &f;
        // valuation 1 on both sides
        assert_eq!(p.order, Some(6));
        assert_eq!(f.d().order, Some(4));
        assert_eq!(f.times_x().order, Some(6));
        let s = &f + &Uni::int(3);
        assert_eq!(s.order, Some(5));
    }

    #[test]
    fn recursion_small() {
        let f = f_series_recursive(4, true, 8).unwrap();
        assert_eq!(coeffs(&f, 6), vec![int(0), int(0), int(1), int(0), int(0), rat(1, 24)]);
        assert!(f_series_recursive(2, true, 8).is_err());
        let f3 = f_series_recursive(3, false, 6).unwrap();
        assert_eq!(f3.coeff(&[3]), int(0));
        assert_eq!(f3.coeff(&[4]), rat(-1, 6));
    }

    #[test]
    fn target_leading_terms() {
        let f = tau_log_derivative(&Target::FOrth { ell: 2, plus: false }, 5).unwrap();
        assert_eq!(coeffs(&f, 4), vec![int(0), int(0), int(1), rat(-1, 2)]);
        let g = tau_log_derivative(&Target::GUnitary { ell: 2 }, 5).unwrap();
        assert_eq!(coeffs(&g, 3), vec![int(1), int(0), rat(-1, 4)]);
        let h = tau_log_derivative(&Target::HWords { ell: 1, k: 2, sigma: 1 }, 5).unwrap();
        assert_eq!(h.coeff(&[1]), rat(1, 3));
    }

    #[test]
    fn orthogonal_ode_small() {
        let f = tau_log_derivative(&Target::FOrth { ell: 2, plus: true }, 10).unwrap();
        let r = ode_residual(&OdeSpec::Orthogonal { ell: 2 }, &f).unwrap();
        assert!(r.is_zero());
        assert!(r.order() >= 9);
    }

    #[test]
    fn unitary_trivial_fixed_point() {
        let one = WeightedSeries::from_univariate(&x_table(), 8, &[int(1)]);
        assert!(ode_residual(&OdeSpec::Unitary { ell: 1 }, &one).unwrap().is_zero());
        let zero = WeightedSeries::from_univariate(&x_table(), 8, &[]);
        assert!(ode_residual(&OdeSpec::Unitary { ell: 1 }, &zero).is_err());
    }

    #[test]
    fn jacobi_initial_slope() {
        let h = tau_log_derivative(
            &Target::HJacobi {
                n: 1,
                alpha: rat(1, 2),
                beta: rat(-1, 2),
                scale: 1,
            },
            8,
        )
        .unwrap();
        assert_eq!(h.coeff(&[0]), int(0));
        assert_eq!(h.coeff(&[1]), rat(-1, 2));
        assert!(jacobi_report(1, &rat(1, 2), &rat(-1, 2), 8).unwrap().passed());
    }

    #[test]
    fn pv_parameters_ell3() {
        let p = orthogonal_pv_parameters(3);
        assert_eq!(p, [int(2), int(-2), int(0), int(-8)]);
        let m = master_coefficients(&p).unwrap();
        assert_eq!(m, [int(16), int(40), int(0), rat(-9, 4)]);
    }

    #[test]
    fn bessel_values() {
        // I_0(1), I_1(1)
        assert!((bessel_i(0, 1.0) - 1.266_065_877_752_008_4).abs() < 1e-15);
        assert!((bessel_i(-1, 1.0) - 0.565_159_103_992_485).abs() < 1e-15);
        // ell = 1: g(0+) -> 1
        assert!((g_bessel(1, 1e-8) - 1.0).abs() < 1e-6);
        assert_eq!(numeric_crosscheck(2, 0.5, 0.5, 1e-3).unwrap(), 0.0);
    }
}
