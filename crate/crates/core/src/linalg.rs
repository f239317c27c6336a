//! Small dense linear algebra over the series ring and over the rationals.
//!
//! Matrices are row-major `Vec<Vec<_>>`. Series matrices are expected to be
//! π-homogeneous (every nonzero entry has the same π power); elimination
//! strips that power, works over rational series and reattaches `n·p`.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::series::{VariableTable, WeightedSeries};

pub type SeriesMatrix = Vec<Vec<WeightedSeries>>;

fn common_pi(m: &SeriesMatrix) -> Result<u32> {
    let mut p: Option<u32> = None;
    for row in m {
        for e in row {
            if e.is_zero() {
                continue;
            }
            match p {
                None => p = Some(e.pi_power()),
                Some(q) if q != e.pi_power() => {
                    return Err(Error::PiPowerMismatch { left: q, right: e.pi_power() })
                }
                _ => {}
            }
        }
    }
    Ok(p.unwrap_or(0))
}

fn strip_pi(m: &SeriesMatrix) -> SeriesMatrix {
    m.iter()
        .map(|r| r.iter().map(|e| e.clone().with_pi_power(0)).collect())
        .collect()
}

/// Determinant by Laplace expansion over column subsets, `O(2^n n)` products.
/// Works for any entries (no pivot condition); used for Jacobi–Trudi and as
/// an independent oracle.
pub fn det_expand(m: &SeriesMatrix, table: &Arc<VariableTable>, order: u32) -> WeightedSeries {
    let n = m.len();
    if n == 0 {
        return WeightedSeries::one(table, order);
    }
    assert!(n <= 20, "matrix too large for subset expansion");
    let full = (1usize << n) - 1;
    let mut dp: Vec<Option<WeightedSeries>> = vec![None; 1 << n];
    dp[0] = Some(WeightedSeries::one(table, order));
    for mask in 0..full {
        let row = mask.count_ones() as usize;
        let Some(cur) = dp[mask].take() else { continue };
        if row >= n {
            continue;
        }
        for col in 0..n {
            if mask & (1 << col) != 0 {
                continue;
            }
            let e = &m[row][col];
            if e.is_zero() {
                continue;
            }
            // sign: number of used columns greater than col
            let above = (mask >> (col + 1)).count_ones();
            let mut term = &cur * e;
            if above % 2 == 1 {
                term = -term;
            }
            let next = mask | (1 << col);
            dp[next] = Some(match dp[next].take() {
                Some(acc) => &acc + &term,
                None => term,
            });
        }
        dp[mask] = Some(cur);
    }
    dp[full]
        .take()
        .unwrap_or_else(|| WeightedSeries::zero(table, order))
}

/// Determinant by Gaussian elimination with pivots chosen among entries with
/// nonzero constant term. Falls back to subset expansion for a trailing block
/// without such a pivot.
pub fn det(m: &SeriesMatrix, table: &Arc<VariableTable>, order: u32) -> Result<WeightedSeries> {
    let n = m.len();
    if n == 0 {
        return Ok(WeightedSeries::one(table, order));
    }
    let p = common_pi(m)?;
    let mut a = strip_pi(m);
    let mut acc = WeightedSeries::one(table, order);
    let mut negate = false;
    for k in 0..n {
        let piv = (k..n).find(|&r| !a[r][k].constant_term().is_zero());
        let Some(r) = piv else {
            let rest: SeriesMatrix = a[k..].iter().map(|row| row[k..].to_vec()).collect();
            acc = &acc * &det_expand(&rest, table, order);
            break;
        };
        if r != k {
            a.swap(r, k);
            negate = !negate;
        }
        let inv = a[k][k].inverse()?;
        for i in (k + 1)..n {
            if a[i][k].is_zero() {
                continue;
            }
            let factor = &a[i][k] * &inv;
            for j in (k + 1)..n {
                if a[k][j].is_zero() {
                    continue;
                }
                a[i][j] = &a[i][j] - &(&factor * &a[k][j]);
            }
        }
        acc = &acc * &a[k][k];
    }
    if negate {
        acc = -acc;
    }
    Ok(acc.with_pi_power(p * n as u32))
}

/// `m = L · diag(d) · U` with unit lower `L` and unit upper `U`, computed
/// without pivoting. Requires every leading principal minor to have a
/// nonzero constant term. The π power of the entries is carried by `d`.
pub struct Ldu {
    pub l: SeriesMatrix,
    pub d: Vec<WeightedSeries>,
    pub u: SeriesMatrix,
}

pub fn ldu(m: &SeriesMatrix, table: &Arc<VariableTable>, order: u32) -> Result<Ldu> {
    let n = m.len();
    let p = common_pi(m)?;
    let a = strip_pi(m);
    let zero = WeightedSeries::zero(table, order);
    let one = WeightedSeries::one(table, order);
    let mut l = vec![vec![zero.clone(); n]; n];
    let mut u = vec![vec![zero.clone(); n]; n];
    let mut d = vec![zero.clone(); n];
    let mut dinv = vec![zero.clone(); n];
    for k in 0..n {
        // d_k = a_kk - sum_{j<k} l_kj d_j u_jk
        let mut s = a[k][k].clone();
        for j in 0..k {
            if l[k][j].is_zero() || u[j][k].is_zero() {
                continue;
            }
            s = &s - &(&(&l[k][j] * &d[j]) * &u[j][k]);
        }
        if s.constant_term().is_zero() {
            return Err(Error::NonUnitConstant(format!(
                "leading minor {} has zero constant term",
                k + 1
            )));
        }
        dinv[k] = s.inverse()?;
        d[k] = s;
        l[k][k] = one.clone();
        u[k][k] = one.clone();
        for i in (k + 1)..n {
            // l_ik = (a_ik - sum_{j<k} l_ij d_j u_jk) / d_k
            let mut s = a[i][k].clone();
            for j in 0..k {
                if l[i][j].is_zero() || u[j][k].is_zero() {
                    continue;
                }
                s = &s - &(&(&l[i][j] * &d[j]) * &u[j][k]);
            }
            l[i][k] = &s * &dinv[k];
            // u_ki = (a_ki - sum_{j<k} l_kj d_j u_ji) / d_k
            let mut s = a[k][i].clone();
            for j in 0..k {
                if l[k][j].is_zero() || u[j][i].is_zero() {
                    continue;
                }
                s = &s - &(&(&l[k][j] * &d[j]) * &u[j][i]);
            }
            u[k][i] = &s * &dinv[k];
        }
    }
    let d = d.into_iter().map(|x| x.with_pi_power(p)).collect();
    Ok(Ldu { l, d, u })
}

/// Inverse of a unit lower-triangular series matrix.
pub fn unit_lower_inverse(l: &SeriesMatrix, table: &Arc<VariableTable>, order: u32) -> SeriesMatrix {
    let n = l.len();
    let zero = WeightedSeries::zero(table, order);
    let mut x = vec![vec![zero.clone(); n]; n];
    for j in 0..n {
        x[j][j] = WeightedSeries::one(table, order);
        for i in (j + 1)..n {
            let mut s = zero.clone();
            for k in j..i {
                if l[i][k].is_zero() || x[k][j].is_zero() {
                    continue;
                }
                s = &s - &(&l[i][k] * &x[k][j]);
            }
            x[i][j] = s;
        }
    }
    x
}

pub fn transpose(m: &SeriesMatrix) -> SeriesMatrix {
    let n = m.len();
    if n == 0 {
        return vec![];
    }
    let c = m[0].len();
    (0..c).map(|j| (0..n).map(|i| m[i][j].clone()).collect()).collect()
}

pub fn matmul(a: &SeriesMatrix, b: &SeriesMatrix, table: &Arc<VariableTable>, order: u32) -> SeriesMatrix {
    let n = a.len();
    let k = b.len();
    let c = if k == 0 { 0 } else { b[0].len() };
    let mut out = vec![vec![WeightedSeries::zero(table, order); c]; n];
    for i in 0..n {
        for j in 0..c {
            let mut s = WeightedSeries::zero(table, order);
            for t in 0..k {
                if a[i][t].is_zero() || b[t][j].is_zero() {
                    continue;
                }
                s = &s + &(&a[i][t] * &b[t][j]);
            }
            out[i][j] = s;
        }
    }
    out
}

/// Exact determinant of a rational matrix (fraction-based elimination).
pub fn det_rational(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m.to_vec();
    let mut acc = BigRational::one();
    for k in 0..n {
        let Some(r) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return BigRational::zero();
        };
        if r != k {
            a.swap(r, k);
            acc = -acc;
        }
        let piv = a[k][k].clone();
        for i in (k + 1)..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &piv;
            for j in k..n {
                let v = &f * &a[k][j];
                a[i][j] -= v;
            }
        }
        acc *= piv;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn sample(n: usize, order: u32) -> (Arc<VariableTable>, SeriesMatrix) {
        let tab = VariableTable::two_times(2);
        let t1 = WeightedSeries::named(&tab, "t1", order);
        let s1 = WeightedSeries::named(&tab, "s1", order);
        let t2 = WeightedSeries::named(&tab, "t2", order);
        let m = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let base = WeightedSeries::constant(&tab, order, int(((i * 3 + j * 5) % 7) as i64 - 2 + if i == j { 6 } else { 0 }));
                        &(&base + &t1.scale_int(i as i64 + 1)) + &(&s1 * &t2).scale_int(j as i64 - 1)
                    })
                    .collect()
            })
            .collect();
        (tab, m)
    }

    #[test]
    fn elimination_matches_expansion() {
        for n in 1..=4 {
            let (tab, m) = sample(n, 5);
            assert_eq!(det(&m, &tab, 5).unwrap(), det_expand(&m, &tab, 5));
        }
    }

    #[test]
    fn ldu_reconstructs() {
        let (tab, m) = sample(3, 4);
        let f = ldu(&m, &tab, 4).unwrap();
        let n = 3;
        let dm: SeriesMatrix = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { f.d[i].clone() } else { WeightedSeries::zero(&tab, 4) })
                    .collect()
            })
            .collect();
        let back = matmul(&matmul(&f.l, &dm, &tab, 4), &f.u, &tab, 4);
        assert_eq!(back, m);
        let linv = unit_lower_inverse(&f.l, &tab, 4);
        let id = matmul(&linv, &f.l, &tab, 4);
        for i in 0..n {
            for j in 0..n {
                let e = if i == j { WeightedSeries::one(&tab, 4) } else { WeightedSeries::zero(&tab, 4) };
                assert_eq!(id[i][j], e);
            }
        }
    }

    #[test]
    fn rational_det() {
        let m = vec![vec![int(2), int(1)], vec![int(4), int(3)]];
        assert_eq!(det_rational(&m), int(2));
        let z = vec![vec![int(0), int(1)], vec![int(1), int(0)]];
        assert_eq!(det_rational(&z), int(-1));
    }
}
