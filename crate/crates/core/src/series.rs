//! Weighted truncated multivariate power series with exact rational coefficients.
//!
//! Every variable carries a positive integer weight; a series keeps only the
//! monomials of total weight `<= order`. The whole series shares one power of
//! π (`pi_power`), so Jacobi moment determinants can carry their π factors
//! until they are normalized away.
//!
//! Invariants:
//! - no stored monomial has total weight above `order`;
//! - zero coefficients are never stored;
//! - binary operations truncate to the smaller order and never raise it;
//! - a partial derivative in a variable of weight `w` lowers the order by `w`,
//!   so the order of a result always marks how far it is exact.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{int, PiRational};

pub type Monomial = Vec<u16>;

/// Ordered variable names with their weights. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableTable {
    names: Vec<String>,
    weights: Vec<u32>,
}

impl VariableTable {
    pub fn new<S: Into<String>>(vars: Vec<(S, u32)>) -> Result<Arc<Self>> {
        let mut names = Vec::new();
        let mut weights = Vec::new();
        for (name, w) in vars {
            let name = name.into();
            if w == 0 {
                return Err(Error::Invalid(format!("variable `{name}` has weight 0")));
            }
            if names.contains(&name) {
                return Err(Error::Invalid(format!("duplicate variable `{name}`")));
            }
            names.push(name);
            weights.push(w);
        }
        Ok(Arc::new(VariableTable { names, weights }))
    }

    /// `t_1..t_m` with weight `i` for `t_i`.
    pub fn times(m: usize) -> Arc<Self> {
        Self::new((1..=m).map(|i| (format!("t{i}"), i as u32)).collect()).unwrap()
    }

    /// `t_1..t_m, s_1..s_m` with weight `i` for `t_i` and `s_i`.
    pub fn two_times(m: usize) -> Arc<Self> {
        let mut v: Vec<(String, u32)> = (1..=m).map(|i| (format!("t{i}"), i as u32)).collect();
        v.extend((1..=m).map(|i| (format!("s{i}"), i as u32)));
        Self::new(v).unwrap()
    }

    /// Variables of weight 1 with the given names.
    pub fn unit_weights(names: &[&str]) -> Arc<Self> {
        Self::new(names.iter().map(|n| (n.to_string(), 1)).collect()).unwrap()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn weight(&self, i: usize) -> u32 {
        self.weights[i]
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.index(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// Index of `t_i` if present.
    pub fn t(&self, i: usize) -> Option<usize> {
        self.index(&format!("t{i}"))
    }

    /// Index of `s_i` if present.
    pub fn s(&self, i: usize) -> Option<usize> {
        self.index(&format!("s{i}"))
    }

    pub fn monomial_weight(&self, m: &[u16]) -> u32 {
        m.iter()
            .zip(&self.weights)
            .map(|(&e, &w)| e as u32 * w)
            .sum()
    }
}

/// A truncated series over a [`VariableTable`].
#[derive(Clone, Debug)]
pub struct WeightedSeries {
    table: Arc<VariableTable>,
    order: u32,
    pi_power: u32,
    coeffs: BTreeMap<Monomial, BigRational>,
}

impl PartialEq for WeightedSeries {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
            && self.pi_power == other.pi_power
            && self.coeffs == other.coeffs
            && (Arc::ptr_eq(&self.table, &other.table) || self.table == other.table)
    }
}

impl WeightedSeries {
    pub fn zero(table: &Arc<VariableTable>, order: u32) -> Self {
        WeightedSeries {
            table: table.clone(),
            order,
            pi_power: 0,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(table: &Arc<VariableTable>, order: u32, c: BigRational) -> Self {
        let mut s = Self::zero(table, order);
        if !c.is_zero() {
            s.coeffs.insert(vec![0; table.len()], c);
        }
        s
    }

    pub fn one(table: &Arc<VariableTable>, order: u32) -> Self {
        Self::constant(table, order, BigRational::one())
    }

    pub fn from_pi_rational(table: &Arc<VariableTable>, order: u32, c: &PiRational) -> Self {
        let mut s = Self::constant(table, order, c.value.clone());
        s.pi_power = c.pi_power;
        s
    }

    /// The variable with index `i`.
    pub fn var(table: &Arc<VariableTable>, i: usize, order: u32) -> Self {
        let mut m = vec![0u16; table.len()];
        m[i] = 1;
        Self::monomial(table, order, m, BigRational::one())
    }

    /// The variable with the given name; panics if absent.
    pub fn named(table: &Arc<VariableTable>, name: &str, order: u32) -> Self {
        let i = table
            .index(name)
            .unwrap_or_else(|| panic!("unknown variable `{name}`"));
        Self::var(table, i, order)
    }

    pub fn monomial(table: &Arc<VariableTable>, order: u32, m: Monomial, c: BigRational) -> Self {
        assert_eq!(m.len(), table.len(), "monomial length mismatch");
        let mut s = Self::zero(table, order);
        if !c.is_zero() && table.monomial_weight(&m) <= order {
            s.coeffs.insert(m, c);
        }
        s
    }

    /// Builds a series from raw terms, dropping zeros and terms above `order`.
    pub fn from_terms<I>(table: &Arc<VariableTable>, order: u32, pi_power: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, BigRational)>,
    {
        let mut s = Self::zero(table, order);
        s.pi_power = pi_power;
        for (m, c) in terms {
            assert_eq!(m.len(), table.len(), "monomial length mismatch");
            if table.monomial_weight(&m) > order {
                continue;
            }
            let e = s.coeffs.entry(m).or_insert_with(BigRational::zero);
            *e += c;
        }
        s.coeffs.retain(|_, c| !c.is_zero());
        s
    }

    pub fn table(&self) -> &Arc<VariableTable> {
        &self.table
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn pi_power(&self) -> u32 {
        self.pi_power
    }

    pub fn with_pi_power(mut self, p: u32) -> Self {
        self.pi_power = p;
        self
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, m: &[u16]) -> BigRational {
        self.coeffs.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeff(&vec![0; self.table.len()])
    }

    pub fn constant_pi(&self) -> PiRational {
        PiRational::new(self.constant_term(), self.pi_power)
    }

    /// Lowest total weight among stored terms, if any.
    pub fn min_weight(&self) -> Option<u32> {
        self.coeffs
            .keys()
            .map(|m| self.table.monomial_weight(m))
            .min()
    }

    pub fn truncate(&self, order: u32) -> Self {
        let order = order.min(self.order);
        let mut s = Self::zero(&self.table, order);
        s.pi_power = self.pi_power;
        s.coeffs = self
            .coeffs
            .iter()
            .filter(|(m, _)| self.table.monomial_weight(m) <= order)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        s
    }

    /// Same coefficients, declared exact to a different order. Dropping terms
    /// if the new order is lower. Use only for series known to be exact
    /// (polynomials), never to hide truncation.
    pub fn with_order(&self, order: u32) -> Self {
        let mut s = self.clone();
        s.order = order;
        s.coeffs
            .retain(|m, _| self.table.monomial_weight(m) <= order);
        s
    }

    /// Weight-homogeneous part of weight `w`.
    pub fn homogeneous(&self, w: u32) -> Self {
        let mut s = Self::zero(&self.table, self.order);
        s.pi_power = self.pi_power;
        s.coeffs = self
            .coeffs
            .iter()
            .filter(|(m, _)| self.table.monomial_weight(m) == w)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        s
    }

    fn same_table(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.table, &other.table) || self.table == other.table {
            Ok(())
        } else {
            Err(Error::TableMismatch)
        }
    }

    fn check_pi(&self, other: &Self) -> Result<u32> {
        if self.is_zero() {
            return Ok(other.pi_power);
        }
        if other.is_zero() || self.pi_power == other.pi_power {
            return Ok(self.pi_power);
        }
        Err(Error::PiPowerMismatch {
            left: self.pi_power,
            right: other.pi_power,
        })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_table(other)?;
        let pi = self.check_pi(other)?;
        let order = self.order.min(other.order);
        let mut out = self.truncate(order);
        out.pi_power = pi;
        for (m, c) in &other.coeffs {
            if self.table.monomial_weight(m) > order {
                continue;
            }
            let e = out.coeffs.entry(m.clone()).or_insert_with(BigRational::zero);
            *e += c;
            if e.is_zero() {
                out.coeffs.remove(m);
            }
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg_ref())
    }

    fn neg_ref(&self) -> Self {
        let mut s = self.clone();
        for c in s.coeffs.values_mut() {
            *c = -c.clone();
        }
        s
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_table(other)?;
        let order = self.order.min(other.order);
        let tab = &self.table;
        let mut b_terms: Vec<(u32, &Monomial, &BigRational)> = other
            .coeffs
            .iter()
            .map(|(m, c)| (tab.monomial_weight(m), m, c))
            .filter(|(w, _, _)| *w <= order)
            .collect();
        b_terms.sort_by_key(|t| t.0);
        let mut acc: HashMap<Monomial, BigRational> = HashMap::new();
        for (ma, ca) in &self.coeffs {
            let wa = tab.monomial_weight(ma);
            if wa > order {
                continue;
            }
            for (wb, mb, cb) in &b_terms {
                if wa + wb > order {
                    break;
                }
                let m: Monomial = ma.iter().zip(mb.iter()).map(|(x, y)| x + y).collect();
                let p = ca * *cb;
                match acc.get_mut(&m) {
                    Some(e) => *e += p,
                    None => {
                        acc.insert(m, p);
                    }
                }
            }
        }
        let mut out = Self::zero(&self.table, order);
        out.pi_power = self.pi_power + other.pi_power;
        out.coeffs = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(out)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            let mut z = Self::zero(&self.table, self.order);
            z.pi_power = self.pi_power;
            return z;
        }
        let mut s = self.clone();
        for c in s.coeffs.values_mut() {
            *c = &*c * r;
        }
        s
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(&int(k))
    }

    /// Multiply by a π-carrying scalar.
    pub fn scale_pi(&self, p: &PiRational) -> Self {
        let mut s = self.scale(&p.value);
        s.pi_power = self.pi_power + p.pi_power;
        s
    }

    /// Divide by a π-carrying scalar; its π power must not exceed ours.
    pub fn div_scalar(&self, p: &PiRational) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::NonUnitConstant("division by zero scalar".into()));
        }
        if p.pi_power > self.pi_power && !self.is_zero() {
            return Err(Error::PiPowerMismatch {
                left: self.pi_power,
                right: p.pi_power,
            });
        }
        let mut s = self.scale(&(BigRational::one() / &p.value));
        s.pi_power = self.pi_power.saturating_sub(p.pi_power);
        Ok(s)
    }

    /// Divide by the constant term, returning the normalized series (constant
    /// term 1, π power 0) and the divided-out scalar.
    pub fn normalize(&self) -> Result<(Self, PiRational)> {
        let c = self.constant_pi();
        if c.is_zero() {
            return Err(Error::NonUnitConstant("zero constant term".into()));
        }
        Ok((self.div_scalar(&c)?, c))
    }

    fn components(&self) -> Vec<Self> {
        (0..=self.order).map(|w| self.homogeneous(w)).collect()
    }

    /// Multiplicative inverse; requires a nonzero constant term and π power 0.
    pub fn inverse(&self) -> Result<Self> {
        if self.pi_power != 0 {
            return Err(Error::NonUnitConstant(format!(
                "divisor carries pi^{}",
                self.pi_power
            )));
        }
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(Error::NonUnitConstant("zero constant term".into()));
        }
        let inv0 = BigRational::one() / &c0;
        let f = self.components();
        let mut g: Vec<Self> = vec![Self::constant(&self.table, self.order, inv0.clone())];
        for w in 1..=self.order {
            let mut acc = Self::zero(&self.table, self.order);
            for j in 1..=w {
                if f[j as usize].is_zero() || g[(w - j) as usize].is_zero() {
                    continue;
                }
                acc = &acc + &(&f[j as usize] * &g[(w - j) as usize]).homogeneous(w);
            }
            g.push(acc.scale(&(-&inv0)));
        }
        Ok(g.into_iter()
            .fold(Self::zero(&self.table, self.order), |a, b| &a + &b))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.same_table(other)?;
        let inv = other.inverse()?;
        self.try_mul(&inv)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(&self.table, self.order);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Exponential; requires zero constant term and π power 0.
    pub fn exp(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::NonZeroConstant);
        }
        if self.pi_power != 0 && !self.is_zero() {
            return Err(Error::NonUnitConstant("exp of a pi-carrying series".into()));
        }
        // weighted Euler operator E: E(e^f) = e^f E(f), i.e. w g_w = sum_j j f_j g_{w-j}
        let f = self.components();
        let mut g: Vec<Self> = vec![Self::one(&self.table, self.order)];
        for w in 1..=self.order {
            let mut acc = Self::zero(&self.table, self.order);
            for j in 1..=w {
                if f[j as usize].is_zero() || g[(w - j) as usize].is_zero() {
                    continue;
                }
                let term = (&f[j as usize] * &g[(w - j) as usize]).homogeneous(w);
                acc = &acc + &term.scale_int(j as i64);
            }
            g.push(acc.scale(&BigRational::new(BigInt::one(), BigInt::from(w))));
        }
        Ok(g.into_iter()
            .fold(Self::zero(&self.table, self.order), |a, b| &a + &b))
    }

    /// Logarithm; requires constant term exactly 1 and π power 0.
    pub fn log(&self) -> Result<Self> {
        if self.pi_power != 0 || !self.constant_term().is_one() {
            return Err(Error::LogConstant);
        }
        // f E(L) = E(f):  w L_w = w f_w - sum_{j<w} j L_j f_{w-j}
        let f = self.components();
        let mut l: Vec<Self> = vec![Self::zero(&self.table, self.order)];
        for w in 1..=self.order {
            let mut acc = f[w as usize].scale_int(w as i64);
            for j in 1..w {
                if l[j as usize].is_zero() || f[(w - j) as usize].is_zero() {
                    continue;
                }
                let term = (&l[j as usize] * &f[(w - j) as usize]).homogeneous(w);
                acc = &acc - &term.scale_int(j as i64);
            }
            l.push(acc.scale(&BigRational::new(BigInt::one(), BigInt::from(w))));
        }
        Ok(l.into_iter()
            .fold(Self::zero(&self.table, self.order), |a, b| &a + &b))
    }

    /// Partial derivative in variable `i`; the order drops by its weight.
    pub fn partial(&self, i: usize) -> Self {
        let w = self.table.weight(i);
        let order = self.order.saturating_sub(w);
        let mut out = Self::zero(&self.table, order);
        out.pi_power = self.pi_power;
        if self.order < w {
            return out;
        }
        for (m, c) in &self.coeffs {
            if m[i] == 0 {
                continue;
            }
            let mut m2 = m.clone();
            let e = m2[i];
            m2[i] -= 1;
            out.coeffs.insert(m2, c * int(e as i64));
        }
        out
    }

    /// Partial derivative by variable name; zero series if the variable is absent.
    pub fn d(&self, name: &str) -> Self {
        match self.table.index(name) {
            Some(i) => self.partial(i),
            None => self.clone().scale_int(0),
        }
    }

    /// Repeated partial derivative `∂_i^k`.
    pub fn partial_n(&self, i: usize, k: u32) -> Self {
        (0..k).fold(self.clone(), |f, _| f.partial(i))
    }

    /// Antiderivative in variable `i` with zero integration constant.
    pub fn integrate(&self, i: usize) -> Self {
        let mut out = Self::zero(&self.table, self.order);
        out.pi_power = self.pi_power;
        for (m, c) in &self.coeffs {
            let mut m2 = m.clone();
            m2[i] += 1;
            if self.table.monomial_weight(&m2) > self.order {
                continue;
            }
            let e = m2[i];
            out.coeffs.insert(m2, c / int(e as i64));
        }
        out
    }

    /// Moves the series to another table. `map[i]` gives the target index of
    /// source variable `i`, or `None` to set it to zero. Target weights must
    /// match source weights for every mapped variable.
    pub fn restrict(&self, target: &Arc<VariableTable>, map: &[Option<usize>]) -> Result<Self> {
        if map.len() != self.table.len() {
            return Err(Error::Invalid("restriction map has wrong length".into()));
        }
        for (i, m) in map.iter().enumerate() {
            if let Some(j) = m {
                if target.weight(*j) != self.table.weight(i) {
                    return Err(Error::Invalid(format!(
                        "weight of `{}` differs from `{}`",
                        self.table.name(i),
                        target.name(*j)
                    )));
                }
            }
        }
        let mut out = Self::zero(target, self.order);
        out.pi_power = self.pi_power;
        for (m, c) in &self.coeffs {
            let mut m2 = vec![0u16; target.len()];
            let mut keep = true;
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => m2[j] += e,
                    None => {
                        keep = false;
                        break;
                    }
                }
            }
            if keep {
                let e = out.coeffs.entry(m2).or_insert_with(BigRational::zero);
                *e += c;
            }
        }
        out.coeffs.retain(|_, c| !c.is_zero());
        Ok(out)
    }

    /// Restriction by names: keep the listed source variables (renamed to the
    /// target names) and set all others to zero.
    pub fn restrict_named(
        &self,
        target: &Arc<VariableTable>,
        pairs: &[(&str, &str)],
    ) -> Result<Self> {
        let mut map = vec![None; self.table.len()];
        for (src, dst) in pairs {
            let i = self.table.require(src)?;
            let j = target.require(dst)?;
            map[i] = Some(j);
        }
        self.restrict(target, &map)
    }

    /// Substitution of series (over a common target table) for each variable.
    pub fn compose(&self, target: &Arc<VariableTable>, images: &[WeightedSeries], order: u32) -> Result<Self> {
        if images.len() != self.table.len() {
            return Err(Error::Invalid("wrong number of images".into()));
        }
        let mut out = Self::zero(target, order);
        let mut powers: Vec<Vec<WeightedSeries>> = images
            .iter()
            .map(|s| vec![Self::one(target, order), s.truncate(order)])
            .collect();
        for (m, c) in &self.coeffs {
            let mut term = Self::constant(target, order, c.clone());
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &powers[i][1];
                    powers[i].push(next);
                }
                term = &term * &powers[i][e as usize];
            }
            out = &out + &term;
        }
        Ok(out.with_pi_power(self.pi_power))
    }

    /// For a series in which variable `q` only appears to even powers, replace
    /// `q^2` by `x` (a variable of twice the weight in `target`). Fails if an
    /// odd power of `q` is present.
    pub fn contract_square(&self, q: usize, target: &Arc<VariableTable>, x: usize, map_rest: &[Option<usize>]) -> Result<Self> {
        if target.weight(x) != 2 * self.table.weight(q) {
            return Err(Error::Invalid("target variable must have twice the weight".into()));
        }
        let mut out = Self::zero(target, self.order);
        out.pi_power = self.pi_power;
        for (m, c) in &self.coeffs {
            if m[q] % 2 == 1 {
                return Err(Error::Invalid(format!(
                    "odd power {} of `{}` survives",
                    m[q],
                    self.table.name(q)
                )));
            }
            let mut m2 = vec![0u16; target.len()];
            m2[x] += m[q] / 2;
            for (i, &e) in m.iter().enumerate() {
                if i == q || e == 0 {
                    continue;
                }
                match map_rest.get(i).copied().flatten() {
                    Some(j) => m2[j] += e,
                    None => return Err(Error::Invalid("unmapped variable".into())),
                }
            }
            out.coeffs.insert(m2, c.clone());
        }
        Ok(out)
    }

    /// Coefficients of a series in a single variable, indexed by exponent
    /// (up to the highest exponent allowed by the order).
    pub fn univariate_coeffs(&self) -> Vec<BigRational> {
        assert_eq!(self.table.len(), 1, "not a univariate series");
        let w = self.table.weight(0);
        let top = self.order / w;
        (0..=top).map(|e| self.coeff(&[e as u16])).collect()
    }

    /// Builds a univariate series from coefficients `c[e]` of `x^e`.
    pub fn from_univariate(table: &Arc<VariableTable>, order: u32, c: &[BigRational]) -> Self {
        assert_eq!(table.len(), 1, "not a univariate table");
        Self::from_terms(
            table,
            order,
            0,
            c.iter()
                .enumerate()
                .map(|(e, v)| (vec![e as u16], v.clone())),
        )
    }

    /// Floating-point evaluation of the truncated polynomial (π included).
    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (m, c) in &self.coeffs {
            let mut v = crate::scalar::rat_to_f64(c);
            for (e, x) in m.iter().zip(point) {
                v *= x.powi(*e as i32);
            }
            acc += v;
        }
        acc * std::f64::consts::PI.powi(self.pi_power as i32)
    }

    /// First monomial (in map order) whose coefficients differ, with both values.
    pub fn first_difference(&self, other: &Self) -> Option<(Monomial, BigRational, BigRational)> {
        let order = self.order.min(other.order);
        let mut keys: Vec<&Monomial> = self.coeffs.keys().chain(other.coeffs.keys()).collect();
        keys.sort_by_key(|m| (self.table.monomial_weight(m), (*m).clone()));
        keys.dedup();
        for m in keys {
            if self.table.monomial_weight(m) > order {
                continue;
            }
            let a = self.coeff(m);
            let b = other.coeff(m);
            if a != b {
                return Some((m.clone(), a, b));
            }
        }
        None
    }

    pub fn format_monomial(&self, m: &[u16]) -> String {
        let parts: Vec<String> = m
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    self.table.name(i).to_string()
                } else {
                    format!("{}^{}", self.table.name(i), e)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Display for WeightedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            write!(f, "0")?;
        }
        let mut terms: Vec<(&Monomial, &BigRational)> = self.coeffs.iter().collect();
        terms.sort_by_key(|(m, _)| (self.table.monomial_weight(m), std::cmp::Reverse((*m).clone())));
        for (k, (m, c)) in terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})*{}", c, self.format_monomial(m))?;
        }
        match self.pi_power {
            0 => {}
            1 => write!(f, " [*pi]")?,
            p => write!(f, " [*pi^{p}]")?,
        }
        write!(f, " + O(w^{})", self.order + 1)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $call:ident) => {
        impl $tr<&WeightedSeries> for &WeightedSeries {
            type Output = WeightedSeries;
            fn $m(self, rhs: &WeightedSeries) -> WeightedSeries {
                self.$call(rhs).unwrap_or_else(|e| panic!("series {}: {e}", stringify!($m)))
            }
        }
        impl $tr<WeightedSeries> for WeightedSeries {
            type Output = WeightedSeries;
            fn $m(self, rhs: WeightedSeries) -> WeightedSeries {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&WeightedSeries> for WeightedSeries {
            type Output = WeightedSeries;
            fn $m(self, rhs: &WeightedSeries) -> WeightedSeries {
                (&self).$m(rhs)
            }
        }
        impl $tr<WeightedSeries> for &WeightedSeries {
            type Output = WeightedSeries;
            fn $m(self, rhs: WeightedSeries) -> WeightedSeries {
                self.$m(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &WeightedSeries {
    type Output = WeightedSeries;
    fn neg(self) -> WeightedSeries {
        self.neg_ref()
    }
}

impl Neg for WeightedSeries {
    type Output = WeightedSeries;
    fn neg(self) -> WeightedSeries {
        self.neg_ref()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Fallible binary arithmetic on series.
pub fn series_arith(a: &WeightedSeries, b: &WeightedSeries, op: ArithOp) -> Result<WeightedSeries> {
    match op {
        ArithOp::Add => a.try_add(b),
        ArithOp::Sub => a.try_sub(b),
        ArithOp::Mul => a.try_mul(b),
        ArithOp::Div => a.try_div(b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn t1(d: u32) -> (Arc<VariableTable>, WeightedSeries) {
        let tab = VariableTable::times(3);
        let t = WeightedSeries::named(&tab, "t1", d);
        (tab, t)
    }

    #[test]
    fn difference_of_squares() {
        let (tab, t) = t1(4);
        let one = WeightedSeries::one(&tab, 4);
        let p = (&one + &t) * (&one - &t);
        let expect = &one - &(&t * &t);
        assert_eq!(p, expect);
    }

    #[test]
    fn geometric_series() {
        let (tab, t) = t1(5);
        let one = WeightedSeries::one(&tab, 5);
        let g = (&one - &t).inverse().unwrap();
        for e in 0..=5u16 {
            assert_eq!(g.coeff(&[e, 0, 0]), int(1));
        }
        assert_eq!(g.len(), 6);
    }

    #[test]
    fn pi_powers_multiply() {
        let tab = VariableTable::times(1);
        let p = WeightedSeries::from_pi_rational(&tab, 3, &PiRational::pi());
        let q = &p * &p;
        assert_eq!(q.pi_power(), 2);
        assert_eq!(q.constant_term(), int(1));
        assert!(p.try_add(&q).is_err());
        assert!(q.inverse().is_err());
    }

    #[test]
    fn truncation_takes_minimum() {
        let tab = VariableTable::times(2);
        let a = WeightedSeries::named(&tab, "t1", 3);
        let b = WeightedSeries::named(&tab, "t2", 5);
        assert_eq!((&a + &b).order(), 3);
        assert_eq!((&b * &b).len(), 1);
        assert!(b.pow(3).is_zero());
    }

    #[test]
    fn exp_of_t1() {
        let (_, t) = t1(6);
        let e = t.exp().unwrap();
        for k in 0..=6u16 {
            assert_eq!(
                e.coeff(&[k, 0, 0]),
                BigRational::new(BigInt::one(), crate::scalar::factorial(k as u64))
            );
        }
    }

    #[test]
    fn log_exp_round_trip() {
        let tab = VariableTable::times(3);
        let f = WeightedSeries::named(&tab, "t1", 7) + WeightedSeries::named(&tab, "t2", 7);
        assert_eq!(f.exp().unwrap().log().unwrap(), f);
    }

    #[test]
    fn exp_requires_zero_constant() {
        let tab = VariableTable::times(1);
        assert!(WeightedSeries::one(&tab, 3).exp().is_err());
        assert!(WeightedSeries::constant(&tab, 3, int(2)).log().is_err());
    }

    #[test]
    fn product_rule_by_hand() {
        // d/dt1 exp(t1 t2) = t2 exp(t1 t2); to weight 6 that is t2 + t1 t2^2 (weight 5)
        let tab = VariableTable::times(2);
        let t1 = WeightedSeries::named(&tab, "t1", 6);
        let t2 = WeightedSeries::named(&tab, "t2", 6);
        let e = (&t1 * &t2).exp().unwrap();
        let d = e.partial(0);
        assert_eq!(d.order(), 5);
        let expect = WeightedSeries::from_terms(
            &tab,
            5,
            0,
            vec![(vec![0, 1], int(1)), (vec![1, 2], int(1))],
        );
        assert_eq!(d, expect);
    }

    #[test]
    fn integrate_then_differentiate() {
        let tab = VariableTable::times(2);
        let f = WeightedSeries::from_terms(&tab, 6, 0, vec![(vec![2, 1], rat(3, 2)), (vec![0, 0], int(5))]);
        let g = f.integrate(0).partial(0);
        assert_eq!(g, f.truncate(5));
    }

    #[test]
    fn restrict_and_contract() {
        let tab = VariableTable::unit_weights(&["q", "r"]);
        let q = WeightedSeries::named(&tab, "q", 4);
        let r = WeightedSeries::named(&tab, "r", 4);
        let f = &(&q * &q) + &r;
        let target = VariableTable::unit_weights(&["q"]);
        let g = f.restrict_named(&target, &[("q", "q")]).unwrap();
        assert_eq!(g.len(), 1);
        let xt = VariableTable::new(vec![("x", 2)]).unwrap();
        let h = g.contract_square(0, &xt, 0, &[]).unwrap();
        assert_eq!(h.coeff(&[1]), int(1));
        assert!(q.contract_square(0, &xt, 0, &[None, None]).is_err());
    }

    #[test]
    fn compose_substitutes() {
        // f(t1) = t1^2 with t1 -> 2x gives 4x^2
        let src = VariableTable::unit_weights(&["t1"]);
        let f = WeightedSeries::named(&src, "t1", 4).pow(2);
        let tgt = VariableTable::unit_weights(&["x"]);
        let img = WeightedSeries::named(&tgt, "x", 4).scale_int(2);
        let g = f.compose(&tgt, &[img], 4).unwrap();
        assert_eq!(g.coeff(&[2]), int(4));
    }
}
