//! Elementary Schur polynomials, Jacobi–Trudi Schur functions and the Hirota
//! bilinear operation `p_j(±∂̃) f∘g`.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::linalg::det_expand;
use crate::scalar::factorial;
use crate::series::{Monomial, VariableTable, WeightedSeries};

/// Which time family, and with which sign, a Schur polynomial is evaluated at.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Prefix {
    T,
    NegT,
    S,
    NegS,
}

impl Prefix {
    fn family(self) -> char {
        match self {
            Prefix::T | Prefix::NegT => 't',
            Prefix::S | Prefix::NegS => 's',
        }
    }

    fn sign(self) -> i64 {
        match self {
            Prefix::T | Prefix::S => 1,
            Prefix::NegT | Prefix::NegS => -1,
        }
    }
}

/// The arguments `±t_i` (or `±s_i`) for `i = 1..=k`, zero where the table has no such variable.
pub fn prefix_args(table: &Arc<VariableTable>, prefix: Prefix, k: usize, order: u32) -> Vec<WeightedSeries> {
    (1..=k)
        .map(|i| match table.index(&format!("{}{}", prefix.family(), i)) {
            Some(j) => WeightedSeries::var(table, j, order).scale_int(prefix.sign()),
            None => WeightedSeries::zero(table, order),
        })
        .collect()
}

/// `p_0..=p_kmax` evaluated at series arguments `a_1, a_2, ...` via
/// `k p_k = sum_i i a_i p_{k-i}`; `args[i-1]` is `a_i`, missing ones are zero.
pub fn schur_p_all(
    table: &Arc<VariableTable>,
    args: &[WeightedSeries],
    kmax: usize,
    order: u32,
) -> Vec<WeightedSeries> {
    let mut p = vec![WeightedSeries::one(table, order)];
    for k in 1..=kmax {
        let mut acc = WeightedSeries::zero(table, order);
        for i in 1..=k.min(args.len()) {
            if args[i - 1].is_zero() || p[k - i].is_zero() {
                continue;
            }
            acc = &acc + &(&args[i - 1] * &p[k - i]).scale_int(i as i64);
        }
        p.push(acc.scale(&BigRational::new(BigInt::one(), BigInt::from(k))));
    }
    p
}

/// Elementary Schur polynomial `p_k(prefix)`; zero for negative `k`.
pub fn schur_p(table: &Arc<VariableTable>, k: i64, prefix: Prefix, order: u32) -> WeightedSeries {
    if k < 0 {
        return WeightedSeries::zero(table, order);
    }
    let k = k as usize;
    let args = prefix_args(table, prefix, k, order);
    schur_p_all(table, &args, k, order).pop().unwrap()
}

/// Schur function `s_λ = det(p_{λ_i - i + j})` (Jacobi–Trudi).
pub fn schur_s(table: &Arc<VariableTable>, lambda: &[u32], prefix: Prefix, order: u32) -> WeightedSeries {
    let lam: Vec<i64> = lambda.iter().copied().filter(|&x| x > 0).map(i64::from).collect();
    if lam.windows(2).any(|w| w[0] < w[1]) {
        panic!("partition must be weakly decreasing: {lambda:?}");
    }
    let r = lam.len();
    if r == 0 {
        return WeightedSeries::one(table, order);
    }
    let top = (lam[0] + r as i64) as usize;
    let args = prefix_args(table, prefix, top, order);
    let p = schur_p_all(table, &args, top, order);
    let get = |k: i64| {
        if k < 0 {
            WeightedSeries::zero(table, order)
        } else {
            p[k as usize].clone()
        }
    };
    let m: Vec<Vec<WeightedSeries>> = (0..r)
        .map(|i| (0..r).map(|j| get(lam[i] - i as i64 + j as i64)).collect())
        .collect();
    det_expand(&m, table, order)
}

/// All partitions of `w` (weakly decreasing, positive parts), with at most `max_len` parts.
pub fn partitions(w: u32, max_len: usize) -> Vec<Vec<u32>> {
    fn rec(rem: u32, max_part: u32, max_len: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        if cur.len() == max_len {
            return;
        }
        for p in (1..=max_part.min(rem)).rev() {
            cur.push(p);
            rec(rem - p, p, max_len, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(w, w, max_len, &mut Vec::new(), &mut out);
    out
}

/// Direction of a Hirota operation: `p_j(∂̃_t)` or `p_j(-∂̃_s)`, or the
/// opposite signs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    T,
    NegT,
    S,
    NegS,
}

impl Direction {
    fn family(self) -> char {
        match self {
            Direction::T | Direction::NegT => 't',
            Direction::S | Direction::NegS => 's',
        }
    }

    fn sign(self) -> i64 {
        match self {
            Direction::T | Direction::S => 1,
            Direction::NegT | Direction::NegS => -1,
        }
    }
}

/// Multi-indices `a` with `sum_i i a_i = j` (index `i-1` holds `a_i`) and the
/// coefficient of `u^a` in `p_j(u_1, u_2, ...)`, namely `prod 1/a_i!`.
fn p_polynomial_terms(j: usize) -> Vec<(Vec<u32>, BigRational)> {
    let mut out = Vec::new();
    for lam in partitions(j as u32, j.max(1)) {
        let mut a = vec![0u32; j];
        for part in lam {
            a[part as usize - 1] += 1;
        }
        let mut c = BigRational::one();
        for &e in &a {
            c /= BigRational::from_integer(factorial(e as u64));
        }
        out.push((a, c));
    }
    out
}

/// Hirota bilinear operation `p_j(σ∂̃) f(t+y) g(t-y)|_{y=0}` where
/// `∂̃ = (∂_1, ∂_2/2, ∂_3/3, ...)` in the direction's family.
/// Variables absent from the table contribute zero derivatives.
pub fn hirota(j: usize, f: &WeightedSeries, g: &WeightedSeries, dir: Direction) -> WeightedSeries {
    let table = f.table().clone();
    let order = f.order().min(g.order());
    let out_order = order.saturating_sub(j as u32);
    let vars: Vec<Option<usize>> = (1..=j)
        .map(|i| table.index(&format!("{}{}", dir.family(), i)))
        .collect();
    let mut fcache: HashMap<Vec<u32>, WeightedSeries> = HashMap::new();
    let mut gcache: HashMap<Vec<u32>, WeightedSeries> = HashMap::new();
    let deriv = |s: &WeightedSeries, b: &[u32], cache: &mut HashMap<Vec<u32>, WeightedSeries>| -> WeightedSeries {
        if let Some(v) = cache.get(b) {
            return v.clone();
        }
        let mut cur = s.clone();
        for (i, &e) in b.iter().enumerate() {
            if e == 0 {
                continue;
            }
            match vars[i] {
                Some(idx) => cur = cur.partial_n(idx, e),
                None => cur = WeightedSeries::zero(s.table(), s.order()),
            }
        }
        cache.insert(b.to_vec(), cur.clone());
        cur
    };
    let mut acc = WeightedSeries::zero(&table, out_order).with_pi_power(f.pi_power() + g.pi_power());
    for (a, pc) in p_polynomial_terms(j) {
        // coefficient of ∂^a in p_j(σ∂̃): prod (σ/i)^{a_i} / a_i!
        let mut c = pc;
        for (i, &e) in a.iter().enumerate() {
            if e > 0 {
                let base = BigRational::new(BigInt::from(dir.sign()), BigInt::from(i as i64 + 1));
                c *= num_traits::pow(base, e as usize);
            }
        }
        if a.iter().enumerate().any(|(i, &e)| e > 0 && vars[i].is_none()) {
            continue;
        }
        // sum over b <= a of prod C(a_i, b_i) (-1)^{|a-b|} ∂^b f ∂^{a-b} g
        let mut b = vec![0u32; a.len()];
        loop {
            let mut coef = c.clone();
            let mut odd = 0u32;
            for i in 0..a.len() {
                coef *= BigRational::from_integer(crate::scalar::binomial(a[i] as i64, b[i] as i64));
                odd += a[i] - b[i];
            }
            if odd % 2 == 1 {
                coef = -coef;
            }
            let c_idx: Vec<u32> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
            let fd = deriv(f, &b, &mut fcache);
            let gd = deriv(g, &c_idx, &mut gcache);
            let prod = (&fd * &gd).truncate(out_order);
            acc = &acc + &prod.scale(&coef);
            if !next_multi_index(&mut b, &a) {
                break;
            }
        }
    }
    acc.truncate(out_order)
}

/// Odometer step over `0 <= b <= a`; false once exhausted.
fn next_multi_index(b: &mut [u32], a: &[u32]) -> bool {
    for k in 0..a.len() {
        if b[k] < a[k] {
            b[k] += 1;
            return true;
        }
        b[k] = 0;
    }
    false
}

/// Sum of `s_λ(t) s_ν(-s)`-type Schur expansions needs the list of all
/// partitions of weight up to `d` with at most `n` rows.
pub fn partitions_up_to(d: u32, max_len: usize) -> Vec<Vec<u32>> {
    (0..=d).flat_map(|w| partitions(w, max_len)).collect()
}

/// Monomial helper for tests.
pub fn mono(table: &Arc<VariableTable>, pairs: &[(&str, u16)]) -> Monomial {
    let mut m = vec![0u16; table.len()];
    for (n, e) in pairs {
        m[table.index(n).expect("variable")] = *e;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    #[test]
    fn p2_and_p3() {
        let tab = VariableTable::times(3);
        let p2 = schur_p(&tab, 2, Prefix::T, 3);
        assert_eq!(p2.coeff(&mono(&tab, &[("t1", 2)])), rat(1, 2));
        assert_eq!(p2.coeff(&mono(&tab, &[("t2", 1)])), int(1));
        assert_eq!(p2.len(), 2);
        let p3 = schur_p(&tab, 3, Prefix::NegT, 3);
        assert_eq!(p3.coeff(&mono(&tab, &[("t1", 3)])), rat(-1, 6));
        assert_eq!(p3.coeff(&mono(&tab, &[("t1", 1), ("t2", 1)])), int(1));
        assert_eq!(p3.coeff(&mono(&tab, &[("t3", 1)])), int(-1));
        assert_eq!(p3.len(), 3);
        assert!(schur_p(&tab, -1, Prefix::T, 3).is_zero());
    }

    #[test]
    fn jacobi_trudi_small() {
        let tab = VariableTable::times(2);
        let s11 = schur_s(&tab, &[1, 1], Prefix::T, 4);
        assert_eq!(s11.coeff(&mono(&tab, &[("t1", 2)])), rat(1, 2));
        assert_eq!(s11.coeff(&mono(&tab, &[("t2", 1)])), int(-1));
        let s2 = schur_s(&tab, &[2], Prefix::T, 4);
        assert_eq!(s2, schur_p(&tab, 2, Prefix::T, 4));
        let s1 = schur_s(&tab, &[1], Prefix::T, 4);
        assert_eq!(s1, WeightedSeries::named(&tab, "t1", 4));
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..=8).map(|w| partitions(w, 99).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22]);
        assert_eq!(partitions(4, 2).len(), 3);
    }

    #[test]
    fn hirota_low_orders() {
        let tab = VariableTable::times(2);
        let t1 = WeightedSeries::named(&tab, "t1", 6);
        let t2 = WeightedSeries::named(&tab, "t2", 6);
        let f = (&t1 + &(&t1 * &t2)).exp().unwrap();
        let g = (&t2 - &(&t1 * &t1)).exp().unwrap();
        assert_eq!(hirota(0, &f, &g, Direction::T), &f * &g);
        let h1 = hirota(1, &f, &g, Direction::T);
        let expect = &(&g * &f.partial(0)) - &(&f * &g.partial(0));
        assert_eq!(h1, expect);
    }
}
