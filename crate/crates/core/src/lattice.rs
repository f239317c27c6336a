//! Bi-orthogonal polynomials from the moment-matrix factorization, the
//! Toeplitz-lattice variables `x_n`, `y_n`, the matrices `L_1`, `L_2`, and the
//! structure and flow identities they satisfy.
//!
//! With `m = L·diag(h)·U` (unit triangular `L`, `U`), the wave matrices are
//! `S_1 = L^{-1}` and `S_2 = diag(h)·U`; rows of `S_1` hold the coefficients
//! of `p_n^(1)`, columns of `U^{-1}` those of `p_n^(2)`.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, SeriesMatrix};
use crate::report::Report;
use crate::scalar::{factorial, rat};
#[cfg(test)]
use crate::scalar::int;
use crate::schur::{hirota, Direction};
use crate::series::{VariableTable, WeightedSeries};
use crate::tau::{self, Deformation, WeightSpec};

/// Per-index data of the bi-orthogonal system, truncated at size `n`.
#[derive(Clone, Debug)]
pub struct BiorthSystem {
    pub size: usize,
    pub table: Arc<VariableTable>,
    pub order: u32,
    /// `τ_0..=τ_size` as plain determinants.
    pub tau: Vec<WeightedSeries>,
    /// `h_n = τ_{n+1}/τ_n` (π carried as in the moments).
    pub h: Vec<WeightedSeries>,
    /// `p1[n][k]` = coefficient of `z^k` in `p_n^(1)`.
    pub p1: SeriesMatrix,
    pub p2: SeriesMatrix,
    pub x: Vec<WeightedSeries>,
    pub y: Vec<WeightedSeries>,
    /// Unit lower factor `L = S_1^{-1}` and unit upper factor `U`.
    pub lower: SeriesMatrix,
    pub upper: SeriesMatrix,
    pub moments: SeriesMatrix,
}

/// Factor the `size × size` moment matrix and read off the polynomials.
pub fn factor_biorth(spec: &WeightSpec, def: &Deformation, size: usize) -> Result<BiorthSystem> {
    let (table, order) = (def.table.clone(), def.order);
    let mm = tau::moment_matrix(spec, size, def)?;
    let f = linalg::ldu(&mm.entries, &table, order)?;
    let p1 = linalg::unit_lower_inverse(&f.l, &table, order);
    let p2 = linalg::unit_lower_inverse(&linalg::transpose(&f.u), &table, order);
    let x = (0..size).map(|n| p1[n][0].clone()).collect();
    let y = (0..size).map(|n| p2[n][0].clone()).collect();
    let tau: Vec<WeightedSeries> = (0..=size)
        .map(|n| tau::tau_raw(spec, n, def))
        .collect::<Result<_>>()?;
    let h = (0..size)
        .map(|n| ratio(&tau[n + 1], &tau[n]))
        .collect::<Result<_>>()?;
    Ok(BiorthSystem {
        size,
        table,
        order,
        tau,
        h,
        p1,
        p2,
        x,
        y,
        lower: f.l,
        upper: f.u,
        moments: mm.entries,
    })
}

/// `a / b` for series of possibly different π powers (`b`'s power ≤ `a`'s).
pub fn ratio(a: &WeightedSeries, b: &WeightedSeries) -> Result<WeightedSeries> {
    let (bn, c) = b.normalize()?;
    let q = &a.clone().with_pi_power(0) * &bn.inverse()?;
    q.with_pi_power(a.pi_power()).div_scalar(&c)
}

/// `L_1`, `L_2` and `h L_2^T h^{-1}`; rows of `L_1` and columns of `L_2`
/// beyond `interior` are polluted by the truncation.
#[derive(Clone, Debug)]
pub struct LatticeMatrices {
    pub l1: SeriesMatrix,
    pub l2: SeriesMatrix,
    pub l2conj: SeriesMatrix,
    pub interior: usize,
}

pub fn lattice_matrices(sys: &BiorthSystem) -> Result<LatticeMatrices> {
    let n = sys.size;
    let (tab, d) = (&sys.table, sys.order);
    let zero = WeightedSeries::zero(tab, d);
    let h0: Vec<WeightedSeries> = sys.h.iter().map(|x| x.clone().with_pi_power(0)).collect();
    let hinv: Vec<WeightedSeries> = h0.iter().map(|x| x.inverse()).collect::<Result<_>>()?;
    let uinv = linalg::transpose(&sys.p2);
    let mut l1 = vec![vec![zero.clone(); n]; n];
    let mut l2 = vec![vec![zero.clone(); n]; n];
    for i in 0..n {
        for j in 0..n {
            // (S_1 Λ S_1^{-1})_{ij} = Σ_k p1[i][k] L[k+1][j]
            let mut a = zero.clone();
            for k in j.saturating_sub(1)..=i {
                if k + 1 < n && !sys.p1[i][k].is_zero() && !sys.lower[k + 1][j].is_zero() {
                    a = &a + &(&sys.p1[i][k] * &sys.lower[k + 1][j]);
                }
            }
            l1[i][j] = a;
            // (S_2 Λ^T S_2^{-1})_{ij} = (h_i/h_j) Σ_{k≥1} U[i][k] U^{-1}[k-1][j]
            let mut b = zero.clone();
            for k in i.max(1)..=(j + 1).min(n - 1) {
                if !sys.upper[i][k].is_zero() && !uinv[k - 1][j].is_zero() {
                    b = &b + &(&sys.upper[i][k] * &uinv[k - 1][j]);
                }
            }
            if !b.is_zero() {
                b = &(&b * &h0[i]) * &hinv[j];
            }
            l2[i][j] = b;
        }
    }
    let l2conj = (0..n)
        .map(|i| (0..n).map(|j| &(&h0[i] * &l2[j][i]) * &hinv[j]).collect())
        .collect();
    Ok(LatticeMatrices {
        l1,
        l2,
        l2conj,
        interior: n.saturating_sub(2),
    })
}

fn one(sys: &BiorthSystem) -> WeightedSeries {
    WeightedSeries::one(&sys.table, sys.order)
}

fn dlog(f: &WeightedSeries, var: &str) -> Result<WeightedSeries> {
    let (g, _) = f.normalize()?;
    Ok(&g.d(var) * &g.inverse()?)
}

fn d2log(f: &WeightedSeries, a: &str, b: &str) -> Result<WeightedSeries> {
    let (g, _) = f.normalize()?;
    let inv = g.inverse()?;
    let ga = g.d(a);
    let gb = g.d(b);
    let gab = ga.d(b);
    Ok(&(&gab * &inv) - &(&(&ga * &gb) * &inv.pow(2)))
}

fn pi0(s: &WeightedSeries) -> WeightedSeries {
    s.clone().with_pi_power(0)
}

/// Hirota term divided by `f g`.
fn hirota_ratio(j: usize, f: &WeightedSeries, g: &WeightedSeries, dir: Direction) -> Result<WeightedSeries> {
    let (fn_, _) = f.normalize()?;
    let (gn, _) = g.normalize()?;
    let hj = hirota(j, &fn_, &gn, dir);
    Ok(&hj * &(&fn_ * &gn).inverse()?)
}

fn check(id: String, what: &str, pairs: Vec<(WeightedSeries, WeightedSeries)>, need: u32) -> Report {
    let mut r = Report::new(id, what);
    let mut lowest = u32::MAX;
    for (i, (a, b)) in pairs.into_iter().enumerate() {
        let sub = Report::new(format!("entry{i}"), "").compare(&a, &b, 0);
        lowest = lowest.min(sub.order_verified.unwrap_or(0));
        r = r.absorb(&sub);
    }
    r.order = Some(need);
    let got = if lowest == u32::MAX { 0 } else { lowest };
    r.order_verified = Some(got);
    if r.passed() && got < need {
        return r.fail(None).with_note(format!("only order {got} available, {need} required"));
    }
    r
}

/// Number of derivative weight the check spends, so that `need = order − w`.
fn need(sys: &BiorthSystem, w: u32) -> u32 {
    sys.order.saturating_sub(w)
}

/// Structure identities for a Toeplitz system: the rank-2
/// lower part, Hisakado's recurrences, the unsymmetric and symmetrized
/// identities, the diagonal and superdiagonal of `L_1^k`, bi-orthogonality and
/// the `τ` representation of `x_n`, `y_n`.
pub fn structure_report(sys: &BiorthSystem, mats: &LatticeMatrices) -> Result<Vec<Report>> {
    let n = sys.size;
    let int_ = mats.interior; // rows 0..=int_ - 1 of L1 are exact; use n <= int_-1
    let hs: Vec<WeightedSeries> = sys.h.iter().map(pi0).collect();
    let hinv: Vec<WeightedSeries> = hs.iter().map(|x| x.inverse()).collect::<Result<_>>()?;
    let (x, y) = (&sys.x, &sys.y);
    let mut out = Vec::new();
    let base = |s: &str| format!("lattice.{s}.N{n}");

    // rank-2 lower part of L1 and h L2^T h^{-1}
    let mut pairs = Vec::new();
    for r in 0..int_ {
        for c in 0..=r {
            let f = &(&(&hs[r] * &x[r + 1]) * &y[c]) * &hinv[c];
            pairs.push((mats.l1[r][c].clone(), -f.clone()));
            let g = &(&(&hs[r] * &y[r + 1]) * &x[c]) * &hinv[c];
            pairs.push((mats.l2conj[r][c].clone(), -g));
        }
        if r + 1 < n {
            pairs.push((mats.l1[r][r + 1].clone(), one(sys)));
            pairs.push((mats.l2conj[r][r + 1].clone(), one(sys)));
        }
        for c in r + 2..n {
            let z = WeightedSeries::zero(&sys.table, sys.order);
            pairs.push((mats.l1[r][c].clone(), z.clone()));
            pairs.push((mats.l2conj[r][c].clone(), z));
        }
    }
    out.push(check(base("rank2"), "rank-2 lower part of L1 and h L2^T h^-1", pairs, sys.order));

    // Hisakado: p_{n+1}(z) − z p_n(z) = p_{n+1}(0) z^n q_n(1/z), and dual
    let mut pairs = Vec::new();
    for m in 0..n - 1 {
        for j in 0..=m {
            let prev1 = if j == 0 { WeightedSeries::zero(&sys.table, sys.order) } else { sys.p1[m][j - 1].clone() };
            let prev2 = if j == 0 { WeightedSeries::zero(&sys.table, sys.order) } else { sys.p2[m][j - 1].clone() };
            pairs.push((&sys.p1[m + 1][j] - &prev1, &x[m + 1] * &sys.p2[m][m - j]));
            pairs.push((&sys.p2[m + 1][j] - &prev2, &y[m + 1] * &sys.p1[m][m - j]));
        }
    }
    out.push(check(base("hisakado"), "polynomial recurrences of the bi-orthogonal pair", pairs, sys.order));

    // first line: x_{n+1} y_{n+1} = 1 − h_{n+1}/h_n
    let mut pairs = Vec::new();
    for m in 0..n - 1 {
        let rhs = &one(sys) - &(&hs[m + 1] * &hinv[m]);
        pairs.push((&x[m + 1] * &y[m + 1], rhs.clone()));
        pairs.push((&y[m + 1] * &x[m + 1], rhs));
    }
    out.push(check(base("unsym.product"), "x_{n+1} y_{n+1} = 1 - h_{n+1}/h_n", pairs, sys.order));

    // second line: x_{n+1} y_n = −∂_{t1} log h_n,  y_{n+1} x_n = ∂_{s1} log h_n
    let mut pairs = Vec::new();
    for m in 0..n - 1 {
        pairs.push((&x[m + 1] * &y[m], -dlog(&hs[m], "t1")?));
        pairs.push((&y[m + 1] * &x[m], dlog(&hs[m], "s1")?));
    }
    out.push(check(base("unsym.first"), "x_{n+1} y_n and y_{n+1} x_n as log-derivatives of h_n", pairs, need(sys, 1)));

    // third line: x_{n+1} y_{n−1} = −(h_{n−1}/h_n) ∂²_{t1} log τ_n, and dual
    let mut pairs = Vec::new();
    for m in 1..n - 1 {
        let c = &hs[m - 1] * &hinv[m];
        pairs.push((&x[m + 1] * &y[m - 1], -(&c * &d2log(&sys.tau[m], "t1", "t1")?)));
        pairs.push((&y[m + 1] * &x[m - 1], -(&c * &d2log(&sys.tau[m], "s1", "s1")?)));
    }
    out.push(check(base("unsym.second"), "x_{n+1} y_{n-1} via second log-derivatives of tau_n", pairs, need(sys, 2)));

    // general line: x_{n+1} y_{n−k} = −(h_{n−k}/h_n) p_{k+1}(∂̃_t) τ_{n−k+1}∘τ_n / (τ_{n−k+1} τ_n)
    let mut pairs = Vec::new();
    let mut worst = 0;
    for m in 0..n - 1 {
        for k in 0..=m.min(sys.order as usize - 1) {
            let c = &hs[m - k] * &hinv[m];
            let ht = hirota_ratio(k + 1, &sys.tau[m - k + 1], &sys.tau[m], Direction::T)?;
            let hs_ = hirota_ratio(k + 1, &sys.tau[m - k + 1], &sys.tau[m], Direction::NegS)?;
            pairs.push((&x[m + 1] * &y[m - k], -(&c * &ht)));
            pairs.push((&y[m + 1] * &x[m - k], -(&c * &hs_)));
            worst = worst.max(k as u32 + 1);
        }
    }
    out.push(
        check(base("unsym.hirota"), "x_{n+1} y_{n-k} through Hirota products of tau_{n-k+1}, tau_n", pairs, need(sys, worst))
            .with_note(format!("derivative weight up to {worst}")),
    );

    // symmetrized: (h_n/h_{m+1})² (1 − h_{n+1}/h_n)(1 − h_{m+1}/h_m) = P_t P_s / (τ_{m+2}² τ_n²)
    let mut pairs = Vec::new();
    let mut worst = 0;
    for a in 1..n - 1 {
        for m in a.saturating_sub(sys.order as usize)..a {
            let k = a - m;
            let pre = (&hs[a] * &hinv[m + 1]).pow(2);
            let lhs = &(&pre * &(&one(sys) - &(&hs[a + 1] * &hinv[a]))) * &(&one(sys) - &(&hs[m + 1] * &hinv[m]));
            let pt = hirota_ratio(k, &sys.tau[m + 2], &sys.tau[a], Direction::T)?;
            let ps = hirota_ratio(k, &sys.tau[m + 2], &sys.tau[a], Direction::NegS)?;
            pairs.push((lhs, &pt * &ps));
            worst = worst.max(k as u32);
        }
    }
    out.push(
        check(base("sym"), "symmetrized products of Hirota terms", pairs, need(sys, worst))
            .with_note(format!("derivative weight up to {worst}")),
    );

    // the m = n−1 case and 1 − h_{n+1}/h_n = (τ_{n+1}² − τ_n τ_{n+2}) / τ_{n+1}²
    let mut pairs = Vec::new();
    for m in 1..n - 1 {
        let a = &one(sys) - &(&hs[m + 1] * &hinv[m]);
        let b = &one(sys) - &(&hs[m] * &hinv[m - 1]);
        pairs.push((&a * &b, -(&dlog(&hs[m], "t1")? * &dlog(&hs[m], "s1")?)));
    }
    out.push(check(base("sym.adjacent"), "(1 - h_{n+1}/h_n)(1 - h_n/h_{n-1}) = -d_t1 log h_n d_s1 log h_n", pairs, need(sys, 1)));
    let mut pairs = Vec::new();
    for m in 0..n - 1 {
        let t = |i: usize| pi0(&sys.tau[i]);
        let num = &t(m + 1).pow(2) - &(&t(m) * &t(m + 2));
        pairs.push((&one(sys) - &(&hs[m + 1] * &hinv[m]), &num * &t(m + 1).pow(2).inverse()?));
    }
    out.push(check(base("sym.tau"), "1 - h_{n+1}/h_n as a ratio of tau functions", pairs, sys.order));

    // diagonal and superdiagonal of L1^k and (h L2^T h^-1)^k
    let kmax = (1..=3).filter(|&k| sys.table.index(&format!("t{k}")).is_some()).max().unwrap_or(0);
    let mut pairs = Vec::new();
    let mut l1k = mats.l1.clone();
    let mut l2k = mats.l2conj.clone();
    for k in 1..=kmax {
        if k > 1 {
            l1k = linalg::matmul(&l1k, &mats.l1, &sys.table, sys.order);
            l2k = linalg::matmul(&l2k, &mats.l2conj, &sys.table, sys.order);
        }
        for m in 0..n.saturating_sub(k + 1) {
            pairs.push((l1k[m][m].clone(), dlog(&hs[m], &format!("t{k}"))?));
            pairs.push((l2k[m][m].clone(), -dlog(&hs[m], &format!("s{k}"))?));
            if m + 2 <= n {
                let den = d2log(&sys.tau[m + 1], "s1", "t1")?;
                let inv = den.normalize().and_then(|(g, c)| Ok(g.inverse()?.scale(&(BigRational::one() / &c.value))))?;
                let ht = hirota_ratio(k - 1, &sys.tau[m + 2], &sys.tau[m], Direction::T)?;
                let hsr = hirota_ratio(k - 1, &sys.tau[m + 2], &sys.tau[m], Direction::NegS)?;
                pairs.push((l1k[m][m + 1].clone(), ht));
                pairs.push((l1k[m][m + 1].clone(), &d2log(&sys.tau[m + 1], "s1", &format!("t{k}"))? * &inv));
                pairs.push((l2k[m][m + 1].clone(), hsr));
                pairs.push((l2k[m][m + 1].clone(), &d2log(&sys.tau[m + 1], "t1", &format!("s{k}"))? * &inv));
                if k == 2 {
                    // ∂_{t1} log(τ_{n+2}/τ_n) = ∂_{t1} log((τ_{n+1}/τ_n)² ∂²_{s1 t1} log τ_{n+1})
                    let a = &dlog(&sys.tau[m + 2], "t1")? - &dlog(&sys.tau[m], "t1")?;
                    let b = &dlog(&hs[m], "t1")?.scale_int(2) + &(&den.d("t1") * &inv);
                    pairs.push((l1k[m][m + 1].clone(), a));
                    pairs.push((l1k[m][m + 1].clone(), b));
                    let a2 = &dlog(&sys.tau[m], "s1")? - &dlog(&sys.tau[m + 2], "s1")?;
                    let b2 = -(&dlog(&hs[m], "s1")?.scale_int(2) + &(&den.d("s1") * &inv));
                    pairs.push((l2k[m][m + 1].clone(), a2));
                    pairs.push((l2k[m][m + 1].clone(), b2));
                }
            }
        }
    }
    out.push(check(base("powers"), "diagonal and first superdiagonal of L1^k and h L2^T^k h^-1", pairs, need(sys, kmax as u32 + 1)));

    // bi-orthogonality: S1 m (U^{-1}) = diag(h)
    let s1m = linalg::matmul(&sys.p1, &sys.moments.iter().map(|r| r.iter().map(pi0).collect()).collect(), &sys.table, sys.order);
    let g = linalg::matmul(&s1m, &linalg::transpose(&sys.p2), &sys.table, sys.order);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let want = if i == j { hs[i].clone() } else { WeightedSeries::zero(&sys.table, sys.order) };
            pairs.push((g[i][j].clone(), want));
        }
    }
    out.push(check(base("biorthogonal"), "<p_n^(1), p_m^(2)> = delta_nm h_n", pairs, sys.order));

    // x_n = p_n(−∂̃_t) τ_n / τ_n, y_n = p_n(∂̃_s) τ_n / τ_n, and all coefficients of p_n
    let mut pairs = Vec::new();
    let mut worst = 0;
    for m in 0..n {
        let (tn, _) = sys.tau[m].normalize()?;
        let inv = tn.inverse()?;
        let onec = one(sys);
        for k in m.saturating_sub(sys.order as usize)..=m {
            let a = &hirota(m - k, &tn, &onec, Direction::NegT) * &inv;
            let b = &hirota(m - k, &tn, &onec, Direction::S) * &inv;
            pairs.push((sys.p1[m][k].clone(), a));
            pairs.push((sys.p2[m][k].clone(), b));
            worst = worst.max((m - k) as u32);
        }
    }
    out.push(
        check(base("tau-representation"), "p_n^(1)(z) = z^n tau_n(t - [1/z], s)/tau_n and its dual", pairs, need(sys, worst))
            .with_note(format!("derivative weight up to {worst}")),
    );

    // traces against the first Hamiltonians, up to the interior
    let mut pairs = Vec::new();
    let mut tr1 = WeightedSeries::zero(&sys.table, sys.order);
    let mut tr2 = tr1.clone();
    let mut h1 = tr1.clone();
    let mut h2 = tr1.clone();
    for i in 0..int_ {
        tr1 = &tr1 - &mats.l1[i][i];
        tr2 = &tr2 - &mats.l2[i][i];
        h1 = &h1 + &(&x[i + 1] * &y[i]);
        h2 = &h2 + &(&x[i] * &y[i + 1]);
    }
    pairs.push((tr1, h1));
    pairs.push((tr2, h2));
    out.push(check(base("traces"), "-Tr L1 and -Tr L2 against the first Hamiltonians", pairs, sys.order));
    Ok(out)
}

/// Symbolic `H_k^{(1)} = −(1/k) Tr L_1^k` (or `H_k^{(2)}` from `L_2`) as a
/// polynomial in `x_0..x_{n−1}, y_0..y_{n−1}`, from the displayed rank-2
/// forms of `h^{-1} L_1 h` and `L_2` truncated to size `n − 1`.
pub fn hamiltonian(k: u32, which: u8, n: usize) -> Result<(Arc<VariableTable>, WeightedSeries)> {
    let mut vars: Vec<(String, u32)> = Vec::new();
    for i in 0..n {
        vars.push((format!("x{i}"), 1));
    }
    for i in 0..n {
        vars.push((format!("y{i}"), 1));
    }
    let tab = VariableTable::new(vars)?;
    let deg = 2 * k;
    let xv = |i: usize| WeightedSeries::var(&tab, i, deg);
    let yv = |i: usize| WeightedSeries::var(&tab, n + i, deg);
    let m = n - 1;
    let zero = WeightedSeries::zero(&tab, deg);
    let onec = WeightedSeries::one(&tab, deg);
    let mut a = vec![vec![zero.clone(); m]; m];
    for r in 0..m {
        for c in 0..m {
            a[r][c] = match which {
                1 if c <= r => -(&xv(r + 1) * &yv(c)),
                1 if c == r + 1 => &onec - &(&xv(r + 1) * &yv(r + 1)),
                2 if c >= r => -(&xv(r) * &yv(c + 1)),
                2 if r == c + 1 => &onec - &(&xv(r) * &yv(r)),
                1 | 2 => zero.clone(),
                _ => return Err(Error::Invalid("which must be 1 or 2".into())),
            };
        }
    }
    let mut p = a.clone();
    for _ in 1..k {
        p = linalg::matmul(&p, &a, &tab, deg);
    }
    let mut tr = zero;
    for (i, row) in p.iter().enumerate() {
        tr = &tr + &row[i];
    }
    Ok((tab.clone(), tr.scale(&(-rat(1, k as i64)))))
}

fn substitute(poly: &WeightedSeries, sys: &BiorthSystem) -> Result<WeightedSeries> {
    let images: Vec<WeightedSeries> = sys.x.iter().chain(sys.y.iter()).cloned().collect();
    poly.compose(&sys.table, &images, sys.order)
}

/// Flow equations of the Toeplitz lattice and the Lax equations.
pub fn flow_report(sys: &BiorthSystem, mats: &LatticeMatrices, nmax: usize) -> Result<Vec<Report>> {
    let n = sys.size;
    let (x, y) = (&sys.x, &sys.y);
    let mut out = Vec::new();
    let top = nmax.min(n.saturating_sub(4));
    let base = |s: &str| format!("lattice.{s}.N{n}");
    let onec = one(sys);

    let mut pairs = Vec::new();
    for m in 1..=top {
        let w = &onec - &(&x[m] * &y[m]);
        pairs.push((x[m].d("t1"), &x[m + 1] * &w));
        pairs.push((y[m].d("t1"), -(&y[m - 1] * &w)));
        pairs.push((x[m].d("s1"), &x[m - 1] * &w));
        pairs.push((y[m].d("s1"), -(&y[m + 1] * &w)));
    }
    out.push(check(base("flow1"), "first Toeplitz-lattice flows in t1 and s1", pairs, need(sys, 1)));

    for k in 1..=2u32 {
        if sys.table.index(&format!("t{k}")).is_none() || sys.table.index(&format!("s{k}")).is_none() {
            continue;
        }
        let mut pairs = Vec::new();
        for which in [1u8, 2] {
            let (tab, hpoly) = hamiltonian(k, which, n)?;
            let var = if which == 1 { format!("t{k}") } else { format!("s{k}") };
            for m in 1..=top {
                let w = &onec - &(&x[m] * &y[m]);
                let dy = substitute(&hpoly.partial(tab.require(&format!("y{m}"))?), sys)?;
                let dx = substitute(&hpoly.partial(tab.require(&format!("x{m}"))?), sys)?;
                pairs.push((x[m].d(&var), &w * &dy));
                pairs.push((y[m].d(&var), -(&w * &dx)));
            }
        }
        out.push(check(
            base(&format!("hamiltonian{k}")),
            "Hamiltonian flows (1 - x_n y_n) dH/dy_n, -(1 - x_n y_n) dH/dx_n",
            pairs,
            need(sys, k),
        ));
    }

    // Lax: ∂L_i/∂t1 = [(L1)_+, L_i],  ∂L_i/∂s1 = [(L2)_−, L_i]
    let upper = |a: &SeriesMatrix, strict_lower: bool| -> SeriesMatrix {
        a.iter()
            .enumerate()
            .map(|(i, r)| {
                r.iter()
                    .enumerate()
                    .map(|(j, e)| {
                        let keep = if strict_lower { i > j } else { j >= i };
                        if keep { e.clone() } else { WeightedSeries::zero(&sys.table, sys.order) }
                    })
                    .collect()
            })
            .collect()
    };
    let comm = |a: &SeriesMatrix, b: &SeriesMatrix| -> SeriesMatrix {
        let ab = linalg::matmul(a, b, &sys.table, sys.order);
        let ba = linalg::matmul(b, a, &sys.table, sys.order);
        ab.iter().zip(ba).map(|(r, s)| r.iter().zip(s).map(|(p, q)| p - &q).collect()).collect()
    };
    let p1 = upper(&mats.l1, false);
    let m2 = upper(&mats.l2, true);
    let mut pairs = Vec::new();
    let lim = n.saturating_sub(3);
    for (l, _) in [(&mats.l1, 1), (&mats.l2, 2)] {
        let ct = comm(&p1, l);
        let cs = comm(&m2, l);
        for i in 0..lim {
            for j in 0..lim {
                pairs.push((l[i][j].d("t1"), ct[i][j].clone()));
                pairs.push((l[i][j].d("s1"), cs[i][j].clone()));
            }
        }
    }
    out.push(check(base("lax"), "two-Toda Lax equations in t1 and s1", pairs, need(sys, 1)));
    Ok(out)
}

/// `[n]_even`: the largest even integer not above `n`.
pub fn floor_even(n: i64) -> i64 {
    n - n.rem_euclid(2)
}

/// Constants in the orthogonal Toda lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TodaVariant {
    /// `q_ℓ = log e_ℓ I_{ℓ+2}/I_ℓ` with unnormalized group integrals and
    /// neighbours `ℓ ± 1`.
    Stated,
    /// `q_ℓ = log E_{ℓ+2}/E_ℓ` from normalized expectations, neighbours `ℓ ± 1`.
    RatioNormalized,
    /// `q_ℓ = log e_ℓ I_{ℓ+2}/I_ℓ`, neighbours `ℓ ± 2` (a single Jacobi weight).
    SameParity,
}

/// `I_ℓ^±(x) = ∫_{O(ℓ)±} e^{x Tr M} dM` with the volume normalization of the
/// Weyl integral, as `(series with constant term 1, value at 0)`.
pub fn orthogonal_integral(plus: bool, ell: u32, order: u32) -> Result<(WeightedSeries, crate::scalar::PiRational)> {
    use crate::scalar::PiRational;
    let g = if plus { tau::Group::OPlus(ell) } else { tau::Group::OMinus(ell) };
    let e = tau::group_series(g, tau::GroupLocus::Trace, order)?;
    if ell == 0 {
        return Ok((e, PiRational::one()));
    }
    let (alpha, beta, n, _) = g.jacobi_data().unwrap();
    let spec = WeightSpec::jacobi(alpha, beta)?;
    let t0 = tau::tau(&spec, n, &Deformation::single_time(1, 2))?.normalization;
    let vol = t0.scale(&BigRational::from_integer(factorial(n as u64)));
    Ok((e, vol))
}

/// Residual of `¼ q_ℓ'' + e^{q_ℓ − q_{ℓ−s}} − e^{q_{ℓ+s} − q_ℓ}` in `x`.
pub fn toda_residual(plus: bool, ell: u32, variant: TodaVariant, order: u32) -> Result<WeightedSeries> {
    let step = if variant == TodaVariant::SameParity { 2 } else { 1 };
    if ell < step {
        return Err(Error::Invalid(format!("ell must be at least {step}")));
    }
    if !plus && ell < step + 1 {
        return Err(Error::Invalid("e_0 is undefined for O(l)-".into()));
    }
    let eps = |l: u32| -> BigRational {
        let v = if plus { floor_even(l as i64 + 2) } else { floor_even(l as i64 + 1) };
        BigRational::new(2.into(), v.into())
    };
    // r_ℓ = e^{q_ℓ} as (normalized series, constant)
    let q = |l: u32| -> Result<(WeightedSeries, crate::scalar::PiRational)> {
        let (a, va) = orthogonal_integral(plus, l + 2, order)?;
        let (b, vb) = orthogonal_integral(plus, l, order)?;
        let s = &a * &b.inverse()?;
        let c = match variant {
            TodaVariant::RatioNormalized => crate::scalar::PiRational::one(),
            _ => va.try_div(&vb)?.scale(&eps(l)),
        };
        Ok((s, c))
    };
    let (r0, c0) = q(ell)?;
    let (rm, cm) = q(ell - step)?;
    let (rp, cp) = q(ell + step)?;
    let xi = r0.table().require("x")?;
    let lg = r0.log()?;
    let lhs = lg.partial(xi).partial(xi).scale(&rat(1, 4));
    let a = (&r0 * &rm.inverse()?).scale(&c0.try_div(&cm)?.value);
    let b = (&rp * &r0.inverse()?).scale(&cp.try_div(&c0)?.value);
    if c0.try_div(&cm)?.pi_power != 0 || cp.try_div(&c0)?.pi_power != 0 {
        return Err(Error::PiPowerMismatch { left: c0.pi_power, right: cm.pi_power });
    }
    Ok(&(&lhs + &a) - &b)
}

/// Whether `¼ q_ℓ'' = −a A + b B` holds for some constants `a`, `b`, where
/// `A`, `B` are `e^{q_ℓ−q_{ℓ−s}}`, `e^{q_{ℓ+s}−q_ℓ}` scaled to constant term 1.
/// Any choice of Haar normalization or of the `e_ℓ` only moves `a` and `b`,
/// so `None` rules out every such choice.
pub fn toda_constant_fit(plus: bool, ell: u32, step: u32, order: u32) -> Result<Option<(BigRational, BigRational)>> {
    if ell < step {
        return Err(Error::Invalid(format!("ell must be at least {step}")));
    }
    let e = |l: u32| orthogonal_integral(plus, l, order).map(|p| p.0);
    let r = |l: u32| -> Result<WeightedSeries> { Ok(&e(l + 2)? * &e(l)?.inverse()?) };
    let (rm, r0, rp) = (r(ell - step)?, r(ell)?, r(ell + step)?);
    let xi = r0.table().require("x")?;
    let q = r0.log()?.partial(xi).partial(xi).scale(&rat(1, 4));
    let a = &r0 * &rm.inverse()?;
    let b = &rp * &r0.inverse()?;
    let (ca, cb, cq) = (a.univariate_coeffs(), b.univariate_coeffs(), q.univariate_coeffs());
    let at = |v: &[BigRational], i: usize| v.get(i).cloned().unwrap_or_default();
    // −a·A_i + b·B_i = Q_i on the first pair of coefficients that determines a, b
    let len = cq.len().min(ca.len()).min(cb.len());
    let mut sol = None;
    'search: for i in 0..len {
        for j in i + 1..len {
            let det = -at(&ca, i) * at(&cb, j) + at(&ca, j) * at(&cb, i);
            if !det.is_zero() {
                let ka = (at(&cq, i) * at(&cb, j) - at(&cq, j) * at(&cb, i)) / &det;
                let kb = (-at(&ca, i) * at(&cq, j) + at(&ca, j) * at(&cq, i)) / &det;
                sol = Some((ka, kb));
                break 'search;
            }
        }
    }
    let Some((ka, kb)) = sol else { return Ok(None) };
    let res = &(&q + &a.scale(&ka)) - &b.scale(&kb);
    Ok(if res.is_zero() { Some((ka, kb)) } else { None })
}

/// Discrete sinh-Gordon residual `∂²q_ℓ/∂x∂y − e^{q_ℓ−q_{ℓ−1}} + e^{q_{ℓ+1}−q_ℓ}`
/// with `q_ℓ = log I_{ℓ+1}/I_ℓ`, `I_ℓ(x,y) = ∫_{U(ℓ)} e^{Tr(xM − y M̄)}`.
pub fn sinh_gordon_residual(ell: u32, order: u32) -> Result<WeightedSeries> {
    if ell < 1 {
        return Err(Error::Invalid("ell must be at least 1".into()));
    }
    let i = |l: u32| tau::group_series(tau::Group::U(l), tau::GroupLocus::Bivariate, order);
    let is: Vec<WeightedSeries> = (ell - 1..=ell + 2).map(i).collect::<Result<_>>()?;
    let r = |a: usize| -> Result<WeightedSeries> { Ok(&is[a + 1] * &is[a].inverse()?) };
    let (qm, q0, qp) = (r(0)?, r(1)?, r(2)?);
    let lg = q0.log()?;
    let lhs = lg.d("x").d("y");
    let a = &q0 * &qm.inverse()?;
    let b = &qp * &q0.inverse()?;
    Ok(&(&lhs - &a) + &b)
}

/// Toda ODE checks for `O(ℓ)±`: the printed form (criterion), the
/// same-parity form, and the constant-fit diagnostic in the note.
pub fn toda_reports(ells: &[u32], order: u32) -> Result<Vec<Report>> {
    let mut out = Vec::new();
    for plus in [true, false] {
        let sign = if plus { "+" } else { "-" };
        for &ell in ells {
            let need = order.saturating_sub(2);
            let res = toda_residual(plus, ell, TodaVariant::Stated, order)?;
            let fit = toda_constant_fit(plus, ell, 1, order + 2)?;
            let mut r = Report::new(
                format!("toda.stated.O{sign}.ell{ell}"),
                "1/4 q_l'' = -e^{q_l - q_(l-1)} + e^{q_(l+1) - q_l}, q_l = log e_l I_(l+2)/I_l",
            )
            .param("group", format!("O({ell}){sign}"))
            .with_n(ell as i64)
            .zero(&res, need);
            r = r.with_note(match fit {
                Some((a, b)) => format!("neighbours l+-1 fit with constants a={a}, b={b}"),
                None => "no constants a, b make neighbours l+-1 fit".to_string(),
            });
            out.push(r);
            let res = toda_residual(plus, ell, TodaVariant::RatioNormalized, order)?;
            out.push(
                Report::new(
                    format!("toda.ratio-normalized.O{sign}.ell{ell}"),
                    "1/4 q_l'' = -e^{q_l - q_(l-1)} + e^{q_(l+1) - q_l}, q_l = log E_(l+2)/E_l from normalized expectations",
                )
                .param("group", format!("O({ell}){sign}"))
                .with_n(ell as i64)
                .zero(&res, need),
            );
            if plus || ell >= 3 {
                let res = toda_residual(plus, ell, TodaVariant::SameParity, order)?;
                out.push(
                    Report::new(
                        format!("toda.same-parity.O{sign}.ell{ell}"),
                        "1/4 q_l'' = -e^{q_l - q_(l-2)} + e^{q_(l+2) - q_l} (Toda in n for one Jacobi weight)",
                    )
                    .param("group", format!("O({ell}){sign}"))
                    .with_n(ell as i64)
                    .zero(&res, need),
                );
            }
        }
    }
    Ok(out)
}

/// Discrete sinh-Gordon checks for `U(ℓ)`.
pub fn sinh_gordon_reports(ells: &[u32], order: u32) -> Result<Vec<Report>> {
    ells.iter()
        .map(|&ell| {
            let res = sinh_gordon_residual(ell, order)?;
            Ok(Report::new(
                format!("sinh-gordon.ell{ell}"),
                "d^2 q_l/dx dy = e^{q_l - q_(l-1)} - e^{q_(l+1) - q_l}, q_l = log I_(l+1)/I_l",
            )
            .param("group", format!("U({ell})"))
            .with_n(ell as i64)
            .zero(&res, order.saturating_sub(2)))
        })
        .collect()
}

/// Lattice checks on a circle model (`(1+z)^k`) over times `t_1..t_m, s_1..s_m`.
pub fn circle_system(k: u32, m: usize, order: u32, size: usize) -> Result<(BiorthSystem, LatticeMatrices)> {
    let tab = VariableTable::two_times(m);
    let def = Deformation::standard(&tab, order);
    let sys = factor_biorth(&WeightSpec::Circle { k }, &def, size)?;
    let mats = lattice_matrices(&sys)?;
    Ok((sys, mats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::PiRational;

    #[test]
    fn undeformed_circle_is_trivial() {
        let tab = VariableTable::two_times(2);
        let def = Deformation::trivial(&tab, 3);
        let sys = factor_biorth(&WeightSpec::circle(), &def, 4).unwrap();
        for n in 0..4 {
            assert_eq!(sys.h[n], WeightedSeries::one(&tab, 3));
            for k in 0..4 {
                let want = if k == n { int(1) } else { int(0) };
                assert_eq!(sys.p1[n][k], WeightedSeries::constant(&tab, 3, want.clone()));
                assert_eq!(sys.p2[n][k], WeightedSeries::constant(&tab, 3, want));
            }
        }
        let m = lattice_matrices(&sys).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let want = if j == i + 1 { int(1) } else { BigRational::zero() };
                assert_eq!(m.l1[i][j], WeightedSeries::constant(&tab, 3, want));
            }
        }
    }

    #[test]
    fn jacobi_h_values() {
        let jt = VariableTable::times(1);
        let def = Deformation::trivial(&jt, 2);
        let spec = WeightSpec::jacobi(rat(-1, 2), rat(-1, 2)).unwrap();
        let sys = factor_biorth(&spec, &def, 2).unwrap();
        assert_eq!(sys.h[0].constant_pi(), PiRational::pi());
        assert_eq!(sys.h[1].constant_pi(), PiRational::new(rat(1, 2), 1));
    }

    #[test]
    fn x1_matches_tau_path() {
        let (sys, _) = circle_system(0, 4, 4, 3).unwrap();
        let (t1, _) = sys.tau[1].normalize().unwrap();
        let want = &hirota(1, &t1, &WeightedSeries::one(&sys.table, 4), Direction::NegT) * &t1.inverse().unwrap();
        assert_eq!(sys.x[1].with_order(3), want);
    }

    #[test]
    fn small_structure_and_flows() {
        let (sys, mats) = circle_system(0, 4, 4, 6).unwrap();
        for r in structure_report(&sys, &mats).unwrap() {
            assert!(r.passed(), "{r:?}");
        }
        for r in flow_report(&sys, &mats, 2).unwrap() {
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn hamiltonian_one_is_neighbour_sum() {
        let (tab, h) = hamiltonian(1, 1, 4).unwrap();
        let mut want = WeightedSeries::zero(&tab, 2);
        for i in 0..3 {
            want = &want + &(&WeightedSeries::named(&tab, &format!("x{}", i + 1), 2) * &WeightedSeries::named(&tab, &format!("y{i}"), 2));
        }
        assert_eq!(h, want);
    }

    #[test]
    fn even_floor() {
        assert_eq!(floor_even(4), 4);
        assert_eq!(floor_even(5), 4);
        assert_eq!(BigRational::new(2.into(), floor_even(2 + 2).into()), rat(1, 2));
    }

    #[test]
    fn toda_same_parity_and_fit() {
        for plus in [true, false] {
            for ell in 3..5 {
                assert!(toda_residual(plus, ell, TodaVariant::SameParity, 5).unwrap().is_zero());
                assert!(toda_constant_fit(plus, ell, 2, 6).unwrap().is_some());
                assert!(toda_constant_fit(plus, ell, 1, 6).unwrap().is_none());
            }
        }
        assert!(!toda_residual(true, 3, TodaVariant::Stated, 5).unwrap().is_zero());
    }

    #[test]
    fn sinh_gordon_small() {
        let r = sinh_gordon_residual(1, 5).unwrap();
        assert!(r.is_zero(), "{r}");
    }
}
