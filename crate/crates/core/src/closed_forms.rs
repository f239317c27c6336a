//! Product formulas for the orthogonal-group volumes and the first two
//! moments of the Jacobi ensemble.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::report::Report;
use crate::scalar::{factorial, int, rat, PiRational};
use crate::series::VariableTable;
use crate::tau::{self, gamma_half, jacobi_moments, Deformation, Group, WeightSpec};

/// A volume with the group it belongs to.
#[derive(Clone, Debug, PartialEq)]
pub struct VolumeFormula {
    pub group: String,
    pub n: u32,
    pub value: PiRational,
}

fn pow2(e: i64) -> BigRational {
    let p = num_traits::pow(BigInt::from(2), e.unsigned_abs() as usize);
    if e >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

fn fact(n: i64) -> BigRational {
    BigRational::from_integer(factorial(n as u64))
}

/// `Γ(x)²` as a π-rational; half-integers contribute one power of π.
fn gamma_sq(x: &BigRational) -> Result<PiRational> {
    let (g, sqrt_pi) = gamma_half(x)?;
    Ok(PiRational::new(&g * &g, sqrt_pi as u32))
}

/// Volume of `O(2n+1)±`, `O(2n)+` or `O(2n)−` (`n ≥ 1`) as the Jacobi
/// Selberg integral renormalized to `[−1, 1]`.
pub fn selberg_volume(group: Group) -> Result<VolumeFormula> {
    let (size, plus) = match group {
        Group::OPlus(l) => (l, true),
        Group::OMinus(l) => (l, false),
        _ => return Err(Error::Unsupported(format!("no volume formula for {}", group.label()))),
    };
    if size < 2 {
        return Err(Error::Unsupported(format!("{} needs size >= 2", group.label())));
    }
    let n = (size / 2) as i64;
    let half = rat(1, 2);
    let mut acc = PiRational::one();
    let prefactor;
    if size % 2 == 1 {
        prefactor = pow2(n * n);
        for j in 1..=n {
            let jr = int(j);
            let g = gamma_sq(&(&jr - &half))?;
            acc = acc.mul(&g.scale(&(fact(j) * (&jr - &half) / fact(n + j - 1))));
        }
    } else if plus {
        prefactor = pow2(n * (n - 1));
        for j in 1..=n {
            let g = gamma_sq(&(int(j) - &half))?;
            acc = acc.mul(&g.scale(&(fact(j) / fact(n + j - 2))));
        }
    } else {
        prefactor = pow2(n * (n - 1));
        for j in 1..n {
            let g = gamma_sq(&(int(j) + &half))?;
            acc = acc.mul(&g.scale(&(fact(j) / fact(n + j - 1))));
        }
    }
    Ok(VolumeFormula {
        group: group.label(),
        n: n as u32,
        value: acc.scale(&prefactor),
    })
}

/// `m!·det(M_{i+j})_{0≤i,j<m}` for the group's Jacobi weight and size `m`.
pub fn hankel_volume(group: Group) -> Result<PiRational> {
    let (alpha, beta, m, _) = group
        .jacobi_data()
        .ok_or_else(|| Error::Unsupported(format!("{} has no Jacobi weight", group.label())))?;
    if m == 0 {
        return Ok(PiRational::one());
    }
    let mom = jacobi_moments(2 * m, &alpha, &beta)?;
    let p = mom[0].pi_power;
    let rows: Vec<Vec<BigRational>> = (0..m).map(|i| (0..m).map(|j| mom[i + j].value.clone()).collect()).collect();
    let d = linalg::det_rational(&rows);
    Ok(PiRational::new(d * fact(m as i64), p * m as u32))
}

/// The quantities computed from the moment closed forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AomotoKind {
    /// `⟨y_1⟩`
    Y1,
    /// `⟨y_1 y_2⟩`
    Y1Y2,
    /// `⟨y_1²⟩`
    Y1Sq,
    /// `2 I''(0)/I(0)` with `I(x) = ∫ e^{2x Σ y_i}`.
    GammaN,
    /// `H'(0)` for `H = x d/dx log τ_n`.
    HPrimeZero,
}

impl AomotoKind {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "y1" => AomotoKind::Y1,
            "y1y2" => AomotoKind::Y1Y2,
            "y1sq" => AomotoKind::Y1Sq,
            "gamma" | "gamma_n" => AomotoKind::GammaN,
            "hprime" | "H_prime_zero" => AomotoKind::HPrimeZero,
            _ => return Err(Error::Invalid(format!("unknown moment kind `{s}`"))),
        })
    }

    pub const ALL: [AomotoKind; 5] = [
        AomotoKind::Y1,
        AomotoKind::Y1Y2,
        AomotoKind::Y1Sq,
        AomotoKind::GammaN,
        AomotoKind::HPrimeZero,
    ];
}

/// Moments of `Π (1−y_i)^α (1+y_i)^β Δ(y)²` on `[−1, 1]^n` in terms of
/// `a = α+β`, `b = α−β`.
pub fn aomoto(kind: AomotoKind, n: u32, a: &BigRational, b: &BigRational) -> Result<BigRational> {
    let nr = int(n as i64);
    let m = a + &nr * int(2);
    let b2 = b * b;
    let (num, den) = match kind {
        AomotoKind::Y1 => (-b.clone(), m.clone()),
        AomotoKind::HPrimeZero => (-(&nr * b), m.clone()),
        AomotoKind::Y1Y2 => (&b2 - &m, (&m - int(1)) * &m),
        AomotoKind::Y1Sq => (
            &b2 * (a + &nr) + &nr * &m * &m - &m,
            (&m - int(1)) * &m * (&m + int(1)),
        ),
        AomotoKind::GammaN => (
            int(8) * &nr * (&m * (&b2 * &nr + a + &nr) - &b2),
            (&m - int(1)) * &m * (&m + int(1)),
        ),
    };
    if den.is_zero() {
        return Err(Error::Unsupported(format!("{kind:?} degenerates at n={n}, a={a}, b={b}")));
    }
    Ok(num / den)
}

/// The same moments read off `τ_n(t_1, t_2)` with weight `e^{t_1 y + t_2 y²}`.
pub fn aomoto_from_determinant(kind: AomotoKind, n: u32, a: &BigRational, b: &BigRational) -> Result<BigRational> {
    let alpha = (a + b) / int(2);
    let beta = (a - b) / int(2);
    let tab = VariableTable::times(2);
    let def = Deformation::standard(&tab, 2);
    let t = tau::tau(&WeightSpec::jacobi(alpha, beta)?, n as usize, &def)?.series;
    let nr = int(n as i64);
    let c1 = t.coeff(&[1, 0]);
    let c2 = t.coeff(&[0, 1]);
    let c11 = t.coeff(&[2, 0]);
    Ok(match kind {
        AomotoKind::Y1 => c1 / &nr,
        AomotoKind::HPrimeZero => c1,
        AomotoKind::Y1Sq => c2 / &nr,
        AomotoKind::Y1Y2 => {
            if n < 2 {
                return Err(Error::Unsupported("a pair moment needs n >= 2".into()));
            }
            (c11 * int(2) - &c2) / (&nr * (&nr - int(1)))
        }
        AomotoKind::GammaN => c11 * int(16),
    })
}

/// Closed-form volume against `m!·det` of the raw moment matrix.
pub fn volume_report(group: Group) -> Result<Report> {
    let v = selberg_volume(group)?;
    let h = hankel_volume(group)?;
    let r = Report::new(format!("closed.volume.{}", group.label()), "orthogonal-group volume as a Selberg integral")
        .param("group", group.label())
        .with_n(v.n as i64);
    Ok(r.equal("volume", &v.value, &h).with_note(format!("{} ≈ {:.12}", v.value, v.value.to_f64())))
}

/// All five moment quantities against the deformed determinant.
pub fn aomoto_report(n: u32, a: &BigRational, b: &BigRational) -> Result<Report> {
    let mut r = Report::new(format!("closed.moments.n{n}.a{a}.b{b}"), "first and second Jacobi-ensemble moments in closed form")
        .param("n", n)
        .param("a", a)
        .param("b", b)
        .with_n(n as i64);
    let mut skipped = Vec::new();
    for kind in AomotoKind::ALL {
        let closed = aomoto(kind, n, a, b);
        let det = aomoto_from_determinant(kind, n, a, b);
        match (closed, det) {
            (Ok(c), Ok(d)) => r = r.equal(&format!("{kind:?}"), &c, &d),
            _ => skipped.push(format!("{kind:?}")),
        }
    }
    if !skipped.is_empty() {
        r = r.with_note(format!("not applicable: {}", skipped.join(", ")));
    }
    Ok(r)
}

/// Groups whose volumes are checked by default (`n = 1, 2, 3`).
pub fn default_volume_groups() -> Vec<Group> {
    let mut v = Vec::new();
    for n in 1..=3u32 {
        v.extend([Group::OPlus(2 * n + 1), Group::OMinus(2 * n + 1), Group::OPlus(2 * n), Group::OMinus(2 * n)]);
    }
    v
}

/// `(n, a, b)` moment cases checked by default.
pub fn default_moment_cases() -> Vec<(u32, BigRational, BigRational)> {
    let mut v = Vec::new();
    for n in 1..=3u32 {
        for (a, b) in [(0, -1), (1, 0), (0, 1), (-1, 0), (2, 1), (1, 1)] {
            v.push((n, int(a), int(b)));
        }
    }
    v
}
