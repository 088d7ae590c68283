//! Exact determinants and the lattice path matrices `m_{i,j,l}`.

use std::collections::HashMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;
use crate::poly::BiPoly;
use crate::rational::{binomial, fmt_rational, lcm_of_denominators, pow2, power_of_two_exponent, rat_int, BigInt, BigRational};
use crate::report::ReconciliationReport;
use crate::tiling::{count_matchings, count_matchings_symbolic, region_rl};

/// Dense square matrix of exact rationals, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalMatrix {
    dim: usize,
    data: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for r in rows {
            if r.len() != dim {
                return Err(Error::NotSquare { rows: dim, cols: r.len() });
            }
            data.extend(r);
        }
        Ok(RationalMatrix { dim, data })
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> BigRational) -> Self {
        let data = (0..dim * dim).map(|k| f(k / dim, k % dim)).collect();
        RationalMatrix { dim, data }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { BigRational::one() } else { BigRational::zero() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<BigRational>> {
        self.data.chunks(self.dim.max(1)).take(self.dim).map(|r| r.to_vec()).collect()
    }
}

/// Determinant by clearing denominators row by row and running Bareiss'
/// fraction-free elimination over the integers.
pub fn det_rational(m: &RationalMatrix) -> BigRational {
    let n = m.dim;
    if n == 0 {
        return BigRational::one();
    }
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for i in 0..n {
        let row = &m.data[i * n..(i + 1) * n];
        let l = lcm_of_denominators(row.iter());
        a.push(row.iter().map(|x| (x * rat_int(&l)).to_integer()).collect());
        scale *= l;
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigRational::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                // Exact by Sylvester's identity.
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    BigRational::new(sign * &a[n - 1][n - 1], scale)
}

/// Determinant of a polynomial matrix by expansion along rows, memoised on
/// the set of used columns. Fine for the small dimensions used here.
pub fn det_poly(m: &[Vec<BiPoly>]) -> BiPoly {
    let n = m.len();
    assert!(n <= 20, "expansion is exponential in the dimension");
    fn go(m: &[Vec<BiPoly>], row: usize, used: u32, memo: &mut HashMap<u32, BiPoly>) -> BiPoly {
        if row == m.len() {
            return BiPoly::one();
        }
        if let Some(v) = memo.get(&used) {
            return v.clone();
        }
        let mut total = BiPoly::zero();
        let mut sign_flip = false;
        for col in 0..m.len() {
            if used & (1 << col) != 0 {
                continue;
            }
            if !m[row][col].is_zero() {
                let minor = go(m, row + 1, used | (1 << col), memo);
                let term = &m[row][col] * &minor;
                total = if sign_flip { total - term } else { total + term };
            }
            sign_flip = !sign_flip;
        }
        memo.insert(used, total.clone());
        total
    }
    go(m, 0, 0, &mut HashMap::new())
}

/// Binomial as an exact rational, zero outside `0 <= b <= a`.
fn binom(a: i64, b: i64) -> BigRational {
    rat_int(&binomial(a, b))
}

/// The entry `m_{i,j,l}(x, y)`, with `1 <= i, j`.
pub fn entry_m(i: usize, j: usize, l: usize, x: &BigRational, y: &BigRational) -> BigRational {
    let (i, j, l) = (i as i64, j as i64, l as i64);
    let top = i + j + l - 2;
    let s = 2 * i - j - 1;
    (BigRational::one() + x * y) * binom(top, s) + x * binom(top, s - 1) + y * binom(top, s + 1)
}

/// Same entry with `x`, `y` formal.
pub fn entry_m_poly(i: usize, j: usize, l: usize) -> BiPoly {
    let (i, j, l) = (i as i64, j as i64, l as i64);
    let top = i + j + l - 2;
    let s = 2 * i - j - 1;
    let c = |b| BiPoly::constant(binom(top, b));
    let xy = &BiPoly::x() * &BiPoly::y();
    &(BiPoly::one() + xy) * &c(s) + &BiPoly::x() * &c(s - 1) + &BiPoly::y() * &c(s + 1)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RFuncSpec {
    pub l: usize,
    pub n: usize,
    pub x: BigRational,
    pub y: BigRational,
}

impl RFuncSpec {
    pub fn new(l: usize, n: usize, x: BigRational, y: BigRational) -> Self {
        RFuncSpec { l, n, x, y }
    }
}

pub fn r_matrix(spec: &RFuncSpec) -> RationalMatrix {
    let n = spec.n;
    let entries = par::map_range(0..n * n, |k| entry_m(k / n + 1, k % n + 1, spec.l, &spec.x, &spec.y));
    RationalMatrix { dim: n, data: entries }
}

/// `det(m_{i,j,l}(x, y))_{1 <= i, j <= n}`.
pub fn r_func(spec: &RFuncSpec) -> BigRational {
    det_rational(&r_matrix(spec))
}

/// The same determinant as a polynomial in `x`, `y`.
pub fn r_poly(l: usize, n: usize) -> BiPoly {
    let m: Vec<Vec<BiPoly>> = (1..=n).map(|i| (1..=n).map(|j| entry_m_poly(i, j, l)).collect()).collect();
    det_poly(&m)
}

/// A normalisation `2^(c n + d)` relating two sequences indexed by `n`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PowerOfTwoFit {
    pub c: i64,
    pub d: i64,
}

impl PowerOfTwoFit {
    pub fn factor(&self, n: usize) -> BigRational {
        pow2(self.c * n as i64 + self.d)
    }

    /// Fits `ratio(n) = 2^(c n + d)` from the two given points.
    pub fn fit(n1: usize, r1: &BigRational, n2: usize, r2: &BigRational) -> Option<Self> {
        let (e1, e2) = (power_of_two_exponent(r1)?, power_of_two_exponent(r2)?);
        let dn = n2 as i64 - n1 as i64;
        if dn == 0 || (e2 - e1) % dn != 0 {
            return None;
        }
        let c = (e2 - e1) / dn;
        Some(PowerOfTwoFit { c, d: e1 - c * n1 as i64 })
    }
}

impl std::fmt::Display for PowerOfTwoFit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "2^({}n{:+})", self.c, self.d)
    }
}

/// Largest `n` for which the tiling oracle is run by default.
pub const ORACLE_MAX_N: usize = 3;

/// Determinant against the weighted tiling count of the matching region,
/// for `n = 1..=n_max`. The normalisation `2^(c n + d)` (oracle divided by
/// determinant) is fitted at `n = 1, 2` and checked at every `n`.
pub fn reconcile_r(l: usize, n_max: usize, x: &BigRational, y: &BigRational) -> (ReconciliationReport, Option<PowerOfTwoFit>) {
    let mut report = ReconciliationReport::new(
        format!("det-vs-tilings l={l} x={} y={}", fmt_rational(x), fmt_rational(y)),
        n_max,
        false,
    );
    let pairs: Vec<(BigRational, BigRational)> = par::map_range(0..n_max + 1, |n| {
        let det = r_func(&RFuncSpec::new(l, n, x.clone(), y.clone()));
        let tilings = count_matchings(&region_rl(n, l, x, y));
        (det, tilings)
    });
    let ratio = |n: usize| -> Option<BigRational> {
        let (d, t) = &pairs[n];
        (!d.is_zero()).then(|| t / d)
    };
    let fit = match (n_max >= 2).then(|| (ratio(1), ratio(2))) {
        Some((Some(r1), Some(r2))) => PowerOfTwoFit::fit(1, &r1, 2, &r2),
        _ => None,
    };
    for (n, (det, tilings)) in pairs.iter().enumerate() {
        match fit {
            Some(f) => {
                report.compare(format!("n={n} det*{f}"), &(det * f.factor(n)), tilings);
            }
            None => {
                report.compare(format!("n={n} det"), det, tilings);
            }
        }
    }
    match fit {
        Some(f) => report.note(format!("normalisation oracle/det = {f}")),
        None => report.note("no normalisation of the form 2^(cn+d) was fitted"),
    }
    (report, fit)
}

/// Compares the determinant polynomial with the tiling generating
/// polynomial, and checks its coefficients are nonnegative integers.
pub fn reconcile_r_symbolic(l: usize, n: usize) -> (BiPoly, BiPoly) {
    let det = r_poly(l, n);
    let region = region_rl(n, l, &BigRational::one(), &BigRational::one());
    (det, count_matchings_symbolic(&region))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn cofactor(m: &[Vec<BigRational>]) -> BigRational {
        if m.is_empty() {
            return BigRational::one();
        }
        let mut total = BigRational::zero();
        for c in 0..m.len() {
            let minor: Vec<Vec<BigRational>> =
                m[1..].iter().map(|r| r.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, v)| v.clone()).collect()).collect();
            let term = &m[0][c] * cofactor(&minor);
            total = if c % 2 == 0 { total + term } else { total - term };
        }
        total
    }

    #[test]
    fn empty_and_identity() {
        assert_eq!(det_rational(&RationalMatrix::identity(0)), rat(1, 1));
        assert_eq!(det_rational(&RationalMatrix::identity(3)), rat(1, 1));
    }

    #[test]
    fn matches_cofactor_on_small_examples() {
        let m = vec![
            vec![rat(1, 2), rat(2, 3), rat(0, 1)],
            vec![rat(0, 1), rat(0, 1), rat(5, 7)],
            vec![rat(-3, 4), rat(1, 1), rat(2, 1)],
        ];
        assert_eq!(det_rational(&RationalMatrix::from_rows(m.clone()).unwrap()), cofactor(&m));
    }

    #[test]
    fn not_square() {
        let e = RationalMatrix::from_rows(vec![vec![rat(1, 1), rat(2, 1)]]).unwrap_err();
        assert_eq!(e, Error::NotSquare { rows: 1, cols: 2 });
    }

    #[test]
    fn entry_anchors() {
        let (h, one) = (rat(1, 2), rat(1, 1));
        assert_eq!(entry_m(1, 1, 0, &h, &one), rat(3, 2));
        assert_eq!(entry_m(1, 2, 1, &rat(3, 1), &rat(5, 1)), rat(5, 1));
        assert_eq!(entry_m(1, 1, 1, &one, &one), rat(3, 1));
        assert_eq!(entry_m_poly(1, 1, 0).to_string(), "1/1 + 1/1*x^1*y^1");
    }

    #[test]
    fn poly_det_evaluates_like_rational_det() {
        for l in 0..3 {
            for n in 0..4 {
                let p = r_poly(l, n);
                for (x, y) in [(rat(1, 2), rat(1, 1)), (rat(2, 3), rat(-1, 5))] {
                    assert_eq!(p.eval(&x, &y), r_func(&RFuncSpec::new(l, n, x.clone(), y.clone())));
                }
            }
        }
    }

    #[test]
    fn power_of_two_fit() {
        let f = PowerOfTwoFit::fit(1, &rat(2, 1), 2, &rat(4, 1)).unwrap();
        assert_eq!((f.c, f.d), (1, 0));
        assert_eq!(f.factor(3), rat(8, 1));
        assert!(PowerOfTwoFit::fit(1, &rat(3, 1), 2, &rat(4, 1)).is_none());
        assert_eq!(f.to_string(), "2^(1n+0)");
    }
}
