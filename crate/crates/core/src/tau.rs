//! Time-deformed moment matrices and their determinants.
//!
//! Two weights are supported:
//! - the circle weight `(1+z)^k exp(Σ t_i z^i − s_i z^{-i})`, whose moment
//!   matrix `μ_{a,b} = [z^{b−a}] ρ(z)` is Toeplitz;
//! - the Jacobi weight `(1−z)^α (1+z)^β exp(Σ t_i z^i)` on `[−1, 1]`, whose
//!   moment matrix `μ_{a,b} = Σ_m p_m(t) M_{a+b+m}` is Hankel.
//!
//! The deformation times may be any series over any table (for instance
//! `t_1 = q, s_1 = −q` on a single variable `q`), provided `t_i` and `s_i`
//! have no terms of weight below `i`; this keeps every moment a finite sum.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, SeriesMatrix};
use crate::scalar::{binomial, factorial, int, rat, PiRational};
use crate::schur::{partitions_up_to, schur_p_all, schur_s, Prefix};
use crate::series::{VariableTable, WeightedSeries};

/// Deformation times `t_i`, `s_i` as series over a common table.
#[derive(Clone, Debug)]
pub struct Deformation {
    pub table: Arc<VariableTable>,
    pub order: u32,
    pub t: Vec<WeightedSeries>,
    pub s: Vec<WeightedSeries>,
}

impl Deformation {
    pub fn new(table: &Arc<VariableTable>, order: u32, t: Vec<WeightedSeries>, s: Vec<WeightedSeries>) -> Result<Self> {
        for (fam, v) in [("t", &t), ("s", &s)] {
            for (i, x) in v.iter().enumerate() {
                if x.min_weight().is_some_and(|w| w < i as u32 + 1) {
                    return Err(Error::Invalid(format!(
                        "{fam}_{} has terms of weight below {}",
                        i + 1,
                        i + 1
                    )));
                }
            }
        }
        Ok(Deformation {
            table: table.clone(),
            order,
            t,
            s,
        })
    }

    /// `t_i`, `s_i` equal to the table's own variables named `t<i>`, `s<i>`.
    pub fn standard(table: &Arc<VariableTable>, order: u32) -> Self {
        let pick = |fam: char| -> Vec<WeightedSeries> {
            let mut out = Vec::new();
            for i in 1..=order as usize {
                match table.index(&format!("{fam}{i}")) {
                    Some(j) => out.push(WeightedSeries::var(table, j, order)),
                    None => out.push(WeightedSeries::zero(table, order)),
                }
            }
            while out.last().is_some_and(|x| x.is_zero()) {
                out.pop();
            }
            out
        };
        Deformation {
            table: table.clone(),
            order,
            t: pick('t'),
            s: pick('s'),
        }
    }

    /// No deformation at all: every moment is a constant.
    pub fn trivial(table: &Arc<VariableTable>, order: u32) -> Self {
        Deformation {
            table: table.clone(),
            order,
            t: vec![],
            s: vec![],
        }
    }

    /// `t_1 = c·x` over a one-variable table `x`.
    pub fn single_time(order: u32, c: i64) -> Self {
        let table = VariableTable::unit_weights(&["x"]);
        let x = WeightedSeries::named(&table, "x", order).scale_int(c);
        Deformation {
            table,
            order,
            t: vec![x],
            s: vec![],
        }
    }

    /// `t_1 = q, s_1 = −q` over a one-variable table `q`, so that
    /// `exp(t_1 z − s_1/z) = exp(q(z + 1/z))`.
    pub fn sqrt_locus(order: u32) -> Self {
        let table = VariableTable::unit_weights(&["q"]);
        let q = WeightedSeries::named(&table, "q", order);
        Deformation {
            table,
            order,
            t: vec![q.clone()],
            s: vec![-q],
        }
    }

    /// `s_1 = −σ·x`, all `t_i = 0`, so the weight carries `exp(σ x / z)`.
    pub fn conjugate_trace(order: u32, sigma: i64) -> Self {
        let table = VariableTable::unit_weights(&["x"]);
        let x = WeightedSeries::named(&table, "x", order).scale_int(-sigma);
        Deformation {
            table,
            order,
            t: vec![],
            s: vec![x],
        }
    }

    /// `t_1 = x, s_1 = y` over a two-variable table.
    pub fn bivariate(order: u32) -> Self {
        let table = VariableTable::unit_weights(&["x", "y"]);
        let x = WeightedSeries::named(&table, "x", order);
        let y = WeightedSeries::named(&table, "y", order);
        Deformation {
            table,
            order,
            t: vec![x],
            s: vec![y],
        }
    }
}

/// The weight defining the inner product.
#[derive(Clone, Debug, PartialEq)]
pub enum WeightSpec {
    /// `(1+z)^k` times the exponential on the unit circle.
    Circle { k: u32 },
    /// `(1−z)^α (1+z)^β` times the exponential on `[−1, 1]`.
    Jacobi { alpha: BigRational, beta: BigRational },
}

impl WeightSpec {
    pub fn circle() -> Self {
        WeightSpec::Circle { k: 0 }
    }

    pub fn jacobi(alpha: BigRational, beta: BigRational) -> Result<Self> {
        if alpha <= int(-1) || beta <= int(-1) {
            return Err(Error::Unsupported(format!(
                "Jacobi weight needs alpha, beta > -1 (got {alpha}, {beta})"
            )));
        }
        Ok(WeightSpec::Jacobi { alpha, beta })
    }

    pub fn label(&self) -> String {
        match self {
            WeightSpec::Circle { k } => format!("circle(k={k})"),
            WeightSpec::Jacobi { alpha, beta } => format!("jacobi(alpha={alpha},beta={beta})"),
        }
    }
}

/// Γ(x) for positive integers and half-integers: `(rational, carries √π)`.
pub fn gamma_half(x: &BigRational) -> Result<(BigRational, bool)> {
    if !x.is_positive() {
        return Err(Error::Unsupported(format!("Gamma at non-positive {x}")));
    }
    let twice = x * int(2);
    if !twice.is_integer() {
        return Err(Error::Unsupported(format!("Gamma at {x} is not half-integral")));
    }
    if x.is_integer() {
        let n = x.to_integer();
        let n: u64 = (n - BigInt::one()).try_into().map_err(|_| Error::Unsupported("Gamma argument too large".into()))?;
        return Ok((BigRational::from_integer(factorial(n)), false));
    }
    // Γ(m + 1/2) = (2m)! / (4^m m!) √π
    let m: u64 = (x - rat(1, 2)).to_integer().try_into().map_err(|_| Error::Unsupported("Gamma argument too large".into()))?;
    let num = factorial(2 * m);
    let den = num_traits::pow(BigInt::from(4), m as usize) * factorial(m);
    Ok((BigRational::new(num, den), true))
}

/// `M_0 = ∫_{−1}^{1} (1−z)^α (1+z)^β dz = 2^{α+β+1} Γ(α+1) Γ(β+1) / Γ(α+β+2)`.
fn jacobi_mass(alpha: &BigRational, beta: &BigRational) -> Result<PiRational> {
    let (ga, ra) = gamma_half(&(alpha + int(1)))?;
    let (gb, rb) = gamma_half(&(beta + int(1)))?;
    let (gab, rab) = gamma_half(&(alpha + beta + int(2)))?;
    let sqrt_pi = ra as i32 + rb as i32 - rab as i32;
    if sqrt_pi != 0 && sqrt_pi != 2 {
        return Err(Error::Unsupported(format!(
            "moments of (1-z)^{alpha}(1+z)^{beta} are not pi-rational"
        )));
    }
    let e = alpha + beta + int(1);
    if !e.is_integer() {
        return Err(Error::Unsupported("alpha + beta must be an integer".into()));
    }
    let e: i64 = e.to_integer().try_into().unwrap();
    let two = if e >= 0 {
        BigRational::from_integer(num_traits::pow(BigInt::from(2), e as usize))
    } else {
        BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(2), (-e) as usize))
    };
    Ok(PiRational::new(two * ga * gb / gab, (sqrt_pi / 2) as u32))
}

/// Jacobi moments `M_0..=M_mmax`, from
/// `(m+α+β+2) M_{m+1} = m M_{m−1} + (β−α) M_m`.
pub fn jacobi_moments(mmax: usize, alpha: &BigRational, beta: &BigRational) -> Result<Vec<PiRational>> {
    if *alpha <= int(-1) || *beta <= int(-1) {
        return Err(Error::Unsupported("alpha, beta must exceed -1".into()));
    }
    let m0 = jacobi_mass(alpha, beta)?;
    let p = m0.pi_power;
    let mut v: Vec<BigRational> = vec![m0.value.clone()];
    for m in 0..mmax {
        let prev = if m == 0 { BigRational::zero() } else { v[m - 1].clone() };
        let next = (int(m as i64) * prev + (beta - alpha) * &v[m]) / (int(m as i64) + alpha + beta + int(2));
        v.push(next);
    }
    Ok(v.into_iter().map(|x| PiRational::new(x, p)).collect())
}

/// `M_m = ∫_{−1}^{1} z^m (1−z)^α (1+z)^β dz` exactly.
pub fn jacobi_moment(m: usize, alpha: &BigRational, beta: &BigRational) -> Result<PiRational> {
    Ok(jacobi_moments(m, alpha, beta)?.pop().unwrap())
}

/// Coefficients `E_m = [z^m] exp(Σ t_i z^i − s_i z^{−i})` for `|m| <= order`,
/// stored at index `m + order`.
fn exponential_coefficients(def: &Deformation) -> Vec<WeightedSeries> {
    let d = def.order as usize;
    let a = schur_p_all(&def.table, &def.t, d, def.order);
    let neg_s: Vec<WeightedSeries> = def.s.iter().map(|x| -x).collect();
    let b = schur_p_all(&def.table, &neg_s, d, def.order);
    let mut out = Vec::with_capacity(2 * d + 1);
    for m in -(d as i64)..=(d as i64) {
        let mut acc = WeightedSeries::zero(&def.table, def.order);
        for bi in 0..=d {
            let ai = bi as i64 + m;
            if ai < 0 || ai > d as i64 {
                continue;
            }
            let (x, y) = (&a[ai as usize], &b[bi]);
            if x.is_zero() || y.is_zero() {
                continue;
            }
            acc = &acc + &(x * y);
        }
        out.push(acc);
    }
    out
}

/// Circle moments with a cache of the exponential coefficients.
pub struct CircleMoments {
    k: u32,
    order: u32,
    table: Arc<VariableTable>,
    e: Vec<WeightedSeries>,
}

impl CircleMoments {
    pub fn new(k: u32, def: &Deformation) -> Self {
        CircleMoments {
            k,
            order: def.order,
            table: def.table.clone(),
            e: exponential_coefficients(def),
        }
    }

    fn e_at(&self, m: i64) -> WeightedSeries {
        let d = self.order as i64;
        if m < -d || m > d {
            WeightedSeries::zero(&self.table, self.order)
        } else {
            self.e[(m + d) as usize].clone()
        }
    }

    /// `[z^{−r}] (1+z)^k exp(...)`, i.e. the moment `μ_{a,b}` with `r = a − b`.
    pub fn moment(&self, r: i64) -> WeightedSeries {
        let mut acc = WeightedSeries::zero(&self.table, self.order);
        for j in 0..=self.k as i64 {
            let c = BigRational::from_integer(binomial(self.k as i64, j));
            let e = self.e_at(-r - j);
            if !e.is_zero() {
                acc = &acc + &e.scale(&c);
            }
        }
        acc
    }
}

/// Single circle moment `[z^{−r}] (1+z)^k exp(Σ t_i z^i − s_i z^{−i})`.
pub fn circle_moment(r: i64, k: u32, def: &Deformation) -> WeightedSeries {
    CircleMoments::new(k, def).moment(r)
}

/// An `n × n` moment matrix of series.
#[derive(Clone, Debug)]
pub struct MomentMatrix {
    pub spec: WeightSpec,
    pub n: usize,
    pub entries: SeriesMatrix,
}

/// Moment matrix of size `n` for the given weight and deformation.
pub fn moment_matrix(spec: &WeightSpec, n: usize, def: &Deformation) -> Result<MomentMatrix> {
    let entries = match spec {
        WeightSpec::Circle { k } => {
            let cm = CircleMoments::new(*k, def);
            let row: Vec<WeightedSeries> = (-(n as i64) + 1..n as i64).map(|r| cm.moment(r)).collect();
            (0..n)
                .map(|a| (0..n).map(|b| row[(a as i64 - b as i64 + n as i64 - 1) as usize].clone()).collect())
                .collect()
        }
        WeightSpec::Jacobi { alpha, beta } => {
            let d = def.order as usize;
            let top = 2 * n + d;
            let m = jacobi_moments(top, alpha, beta)?;
            let p = schur_p_all(&def.table, &def.t, d, def.order);
            let hankel: Vec<WeightedSeries> = (0..(2 * n).max(1) - 1)
                .map(|ab| {
                    let mut acc = WeightedSeries::zero(&def.table, def.order).with_pi_power(m[0].pi_power);
                    for (mm, pm) in p.iter().enumerate() {
                        if pm.is_zero() || m[ab + mm].is_zero() {
                            continue;
                        }
                        acc = &acc + &pm.scale_pi(&m[ab + mm]);
                    }
                    acc
                })
                .collect();
            (0..n)
                .map(|a| (0..n).map(|b| hankel[a + b].clone()).collect())
                .collect()
        }
    };
    Ok(MomentMatrix {
        spec: spec.clone(),
        n,
        entries,
    })
}

/// A τ-function: the normalized determinant (constant term 1) and the
/// divided-out value at zero deformation.
#[derive(Clone, Debug)]
pub struct TauSeries {
    pub model: String,
    pub n: usize,
    pub series: WeightedSeries,
    pub normalization: PiRational,
}

impl TauSeries {
    /// The determinant before normalization.
    pub fn raw(&self) -> WeightedSeries {
        self.series.scale_pi(&self.normalization)
    }

    pub fn to_json(&self) -> TauSeriesJson {
        let table = self.series.table();
        let mut terms: Vec<TermJson> = self
            .series
            .terms()
            .map(|(m, c)| {
                let v = PiRational::new(c * &self.normalization.value, self.normalization.pi_power);
                TermJson {
                    exponents: table
                        .names()
                        .iter()
                        .zip(m.iter())
                        .filter(|(_, &e)| e > 0)
                        .map(|(n, &e)| (n.clone(), e as u32))
                        .collect(),
                    numerator: v.value.numer().to_string(),
                    denominator: v.value.denom().to_string(),
                    pi_power: v.pi_power,
                }
            })
            .collect();
        terms.sort_by(|a, b| {
            let wa: u32 = a.exponents.iter().map(|(n, e)| e * table.weight(table.index(n).unwrap())).sum();
            let wb: u32 = b.exponents.iter().map(|(n, e)| e * table.weight(table.index(n).unwrap())).sum();
            wa.cmp(&wb).then_with(|| a.exponents.cmp(&b.exponents))
        });
        TauSeriesJson {
            model: self.model.clone(),
            n: self.n,
            order: self.series.order(),
            terms,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exponents: Vec<(String, u32)>,
    pub numerator: String,
    pub denominator: String,
    pub pi_power: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TauSeriesJson {
    pub model: String,
    pub n: usize,
    pub order: u32,
    pub terms: Vec<TermJson>,
}

/// `τ_n = det(μ_{a,b})_{0≤a,b<n}`, normalized by its value at zero.
pub fn tau(spec: &WeightSpec, n: usize, def: &Deformation) -> Result<TauSeries> {
    let raw = tau_raw(spec, n, def)?;
    let (series, normalization) = raw.normalize()?;
    Ok(TauSeries {
        model: spec.label(),
        n,
        series,
        normalization,
    })
}

/// The unnormalized determinant.
pub fn tau_raw(spec: &WeightSpec, n: usize, def: &Deformation) -> Result<WeightedSeries> {
    if n == 0 {
        return Ok(WeightedSeries::one(&def.table, def.order));
    }
    let mm = moment_matrix(spec, n, def)?;
    linalg::det(&mm.entries, &def.table, def.order)
}

/// `τ_0..=τ_nmax` for one model.
pub fn tau_family(spec: &WeightSpec, nmax: usize, def: &Deformation) -> Result<Vec<TauSeries>> {
    (0..=nmax).map(|n| tau(spec, n, def)).collect()
}

/// Rational Toeplitz window `m0[a][b] = [z^{b−a}](1+z)^k` of the undeformed circle weight.
pub fn circle_window(k: u32, size: usize) -> Vec<Vec<BigRational>> {
    (0..size)
        .map(|a| {
            (0..size)
                .map(|b| BigRational::from_integer(binomial(k as i64, b as i64 - a as i64)))
                .collect()
        })
        .collect()
}

/// `τ_n` through `det(E_n(t) m0 E_n(−s)^T)` with `E_n(t) = (p_{j−i}(t))`.
pub fn tau_via_e_matrix(m0: &[Vec<BigRational>], n: usize, table: &Arc<VariableTable>, order: u32) -> Result<WeightedSeries> {
    let d = order as usize;
    let width = n + d;
    if m0.len() < width || m0.iter().any(|r| r.len() < width) {
        return Err(Error::Invalid(format!("moment window must be at least {width} wide")));
    }
    let pt = schur_p_all(table, &crate::schur::prefix_args(table, Prefix::T, d, order), d, order);
    let ps = schur_p_all(table, &crate::schur::prefix_args(table, Prefix::NegS, d, order), d, order);
    let mut m: SeriesMatrix = vec![vec![WeightedSeries::zero(table, order); n]; n];
    for i in 0..n {
        for l in 0..n {
            let mut acc = WeightedSeries::zero(table, order);
            for j in i..(i + d + 1).min(width) {
                let a = &pt[j - i];
                if a.is_zero() {
                    continue;
                }
                for k in l..(l + d + 1).min(width) {
                    let c = &m0[j][k];
                    if c.is_zero() {
                        continue;
                    }
                    let b = &ps[k - l];
                    if b.is_zero() {
                        continue;
                    }
                    acc = &acc + &(a * b).scale(c);
                }
            }
            m[i][l] = acc;
        }
    }
    linalg::det(&m, table, order)
}

/// `Σ_{λ,ν} det(m0^{λ,ν}) s_λ(t) s_ν(−s)` over partitions with at most `n`
/// rows, where `m0^{λ,ν} = (m0[λ_i − i + n][ν_j − j + n])`.
pub fn tau_schur_expansion(m0: &[Vec<BigRational>], n: usize, table: &Arc<VariableTable>, order: u32) -> Result<WeightedSeries> {
    let need = n + order as usize;
    if m0.len() < need || m0.iter().any(|r| r.len() < need) {
        return Err(Error::Invalid(format!("moment window must be at least {need} wide")));
    }
    let parts = partitions_up_to(order, n);
    let has_s = (1..=order as usize).any(|i| table.s(i).is_some());
    let st: Vec<WeightedSeries> = parts.iter().map(|l| schur_s(table, l, Prefix::T, order)).collect();
    let ss: Vec<WeightedSeries> = parts.iter().map(|l| schur_s(table, l, Prefix::NegS, order)).collect();
    let idx = |lam: &[u32], i: usize| -> usize {
        let li = lam.get(i).copied().unwrap_or(0) as usize;
        li + n - 1 - i
    };
    let mut acc = WeightedSeries::zero(table, order);
    for (a, lam) in parts.iter().enumerate() {
        let wl: u32 = lam.iter().sum();
        for (b, nu) in parts.iter().enumerate() {
            let wn: u32 = nu.iter().sum();
            if wl + wn > order || (!has_s && wn > 0) {
                continue;
            }
            let sub: Vec<Vec<BigRational>> = (0..n)
                .map(|i| (0..n).map(|j| m0[idx(lam, i)][idx(nu, j)].clone()).collect())
                .collect();
            let c = linalg::det_rational(&sub);
            if c.is_zero() {
                continue;
            }
            acc = &acc + &(&st[a] * &ss[b]).scale(&c);
        }
    }
    Ok(acc)
}

/// Compact groups whose Haar expectations are τ ratios.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Group {
    OPlus(u32),
    OMinus(u32),
    Sp(u32),
    U(u32),
}

impl Group {
    pub fn label(&self) -> String {
        match self {
            Group::OPlus(l) => format!("O({l})+"),
            Group::OMinus(l) => format!("O({l})-"),
            Group::Sp(n) => format!("Sp({n})"),
            Group::U(l) => format!("U({l})"),
        }
    }

    pub fn parse(s: &str) -> Result<Group> {
        let s = s.trim();
        let err = || Error::Invalid(format!("unknown group `{s}`"));
        let inner = |p: &str| -> Result<u32> {
            let body = s.strip_prefix(p).ok_or_else(err)?;
            let body = body.trim_start_matches('(');
            let num: String = body.chars().take_while(|c| c.is_ascii_digit()).collect();
            num.parse().map_err(|_| err())
        };
        if s.starts_with("Sp") {
            return Ok(Group::Sp(inner("Sp")?));
        }
        if s.starts_with('U') {
            return Ok(Group::U(inner("U")?));
        }
        if s.starts_with('O') {
            let l = inner("O")?;
            return if s.ends_with('+') {
                Ok(Group::OPlus(l))
            } else if s.ends_with('-') {
                Ok(Group::OMinus(l))
            } else {
                Err(err())
            };
        }
        Err(err())
    }

    /// Jacobi data `(α, β, size, exponential prefactor sign)` for the real groups:
    /// `E_G e^{x Tr M} = e^{σx} τ_size(2x)/τ_size(0)`.
    pub fn jacobi_data(&self) -> Option<(BigRational, BigRational, usize, i64)> {
        let h = rat(1, 2);
        let mh = rat(-1, 2);
        match *self {
            Group::OPlus(l) if l % 2 == 1 => Some((h, mh, ((l - 1) / 2) as usize, 1)),
            Group::OMinus(l) if l % 2 == 1 => Some((mh, h, ((l - 1) / 2) as usize, -1)),
            Group::OPlus(l) => Some((mh.clone(), mh, (l / 2) as usize, 0)),
            Group::OMinus(l) => Some((h.clone(), h, (l / 2).saturating_sub(1) as usize, 0)),
            Group::Sp(n) => Some((h.clone(), h, n as usize, 0)),
            Group::U(_) => None,
        }
    }
}

/// The deformation used for a group expectation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupLocus {
    /// `E e^{x Tr M}` for real groups; `E e^{x Tr(M + M̄)}` for `U(ℓ)`.
    Trace,
    /// `E e^{√x Tr(M + M̄)}` (unitary only), an integer-power series in `x`.
    SqrtTrace,
    /// `E e^{Tr(xM − yM̄)}` in two variables (unitary only).
    Bivariate,
}

/// Normalized group expectation as a series over `x` (or `x, y`).
pub fn group_series(group: Group, locus: GroupLocus, order: u32) -> Result<WeightedSeries> {
    match group {
        Group::U(l) => {
            let l = l as usize;
            match locus {
                GroupLocus::Trace => {
                    // t_1 = x, s_1 = −x
                    let table = VariableTable::unit_weights(&["x"]);
                    let x = WeightedSeries::named(&table, "x", order);
                    let def = Deformation::new(&table, order, vec![x.clone()], vec![-x])?;
                    Ok(tau(&WeightSpec::circle(), l, &def)?.series)
                }
                GroupLocus::SqrtTrace => {
                    let def = Deformation::sqrt_locus(2 * order);
                    let t = tau(&WeightSpec::circle(), l, &def)?.series;
                    let xt = VariableTable::new(vec![("x", 2)])?;
                    let half = t.contract_square(0, &xt, 0, &[])?;
                    let x1 = VariableTable::unit_weights(&["x"]);
                    // reweight x from 2 to 1
                    let coeffs: Vec<BigRational> = (0..=order).map(|e| half.coeff(&[e as u16])).collect();
                    Ok(WeightedSeries::from_univariate(&x1, order, &coeffs))
                }
                GroupLocus::Bivariate => {
                    let def = Deformation::bivariate(order);
                    Ok(tau(&WeightSpec::circle(), l, &def)?.series)
                }
            }
        }
        _ => {
            if locus != GroupLocus::Trace {
                return Err(Error::Unsupported(format!(
                    "{} only supports the single-trace locus",
                    group.label()
                )));
            }
            let (alpha, beta, n, sigma) = group.jacobi_data().unwrap();
            let def = Deformation::single_time(order, 2);
            let spec = WeightSpec::jacobi(alpha, beta)?;
            let t = tau(&spec, n, &def)?.series;
            if sigma == 0 {
                return Ok(t);
            }
            let x = WeightedSeries::named(&def.table, "x", order).scale_int(sigma);
            Ok(&t * &x.exp()?)
        }
    }
}
