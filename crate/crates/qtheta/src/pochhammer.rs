//! q-shifted factorials, signed monomials, and Gaussian binomials.
//!
//! A [`PochhammerSpec`] describes a product of factors `(1 - sign*q^(e+j*t))`
//! for `j = 0..n` (finite) or all `j >= 0` (infinite). Infinite products
//! need `base_exp >= 1/grain` so that omitted factors are `1 + O(q^(N+1))`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::series::{Grain, TruncatedSeries};

/// Coefficient sign of a monomial, `+q^e` or `-q^e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn mul(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn pow(self, n: i64) -> Sign {
        if self == Sign::Minus && n.rem_euclid(2) == 1 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }
}

/// A signed monomial `sign * q^(exp/grain)`; the exponent unit is fixed by
/// the context it is used in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub sign: Sign,
    pub exp: i64,
}

impl Monomial {
    pub fn q(grain: Grain) -> Self {
        Monomial {
            sign: Sign::Plus,
            exp: grain.value(),
        }
    }

    pub fn new(sign: Sign, exp: i64) -> Self {
        Monomial { sign, exp }
    }

    pub fn positive(exp: i64) -> Self {
        Monomial {
            sign: Sign::Plus,
            exp,
        }
    }

    pub fn negative(exp: i64) -> Self {
        Monomial {
            sign: Sign::Minus,
            exp,
        }
    }

    pub fn mul(self, other: Monomial) -> Monomial {
        Monomial {
            sign: self.sign.mul(other.sign),
            exp: self.exp + other.exp,
        }
    }

    pub fn inv(self) -> Monomial {
        Monomial {
            sign: self.sign,
            exp: -self.exp,
        }
    }

    pub fn pow(self, n: i64) -> Monomial {
        Monomial {
            sign: self.sign.pow(n),
            exp: self.exp * n,
        }
    }

    /// Is `1 - self` a unit (nonzero constant term) in the series ring?
    pub fn one_minus_is_unit(self) -> bool {
        !(self.sign == Sign::Plus && self.exp == 0)
    }

    pub fn to_series(self, grain: Grain, order: i64) -> TruncatedSeries {
        TruncatedSeries::monomial(grain, order, self.exp, BigInt::from(self.sign.value()))
    }
}

/// Length of a Pochhammer product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PochLength {
    Finite(u32),
    Infinite,
}

/// A factor description `(sign*q^base_exp ; q^step)_length`, exponents in
/// units of `1/grain`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PochhammerSpec {
    pub sign: Sign,
    pub base_exp: i64,
    pub step: i64,
    pub length: PochLength,
}

impl PochhammerSpec {
    pub fn finite(sign: Sign, base_exp: i64, step: i64, n: u32) -> Self {
        PochhammerSpec {
            sign,
            base_exp,
            step,
            length: PochLength::Finite(n),
        }
    }

    pub fn infinite(sign: Sign, base_exp: i64, step: i64) -> Self {
        PochhammerSpec {
            sign,
            base_exp,
            step,
            length: PochLength::Infinite,
        }
    }
}

/// Expand a Pochhammer product exactly to `order` (units of 1/grain).
pub fn pochhammer(spec: &PochhammerSpec, grain: Grain, order: i64) -> Result<TruncatedSeries> {
    assert!(spec.step >= 1, "step must be positive");
    match spec.length {
        PochLength::Infinite => {
            if spec.base_exp < 1 {
                return Err(Error::InfiniteBase(spec.base_exp));
            }
            let mut acc = TruncatedSeries::one(grain, order);
            let mut e = spec.base_exp;
            while e <= order {
                acc = acc.mul_one_minus(spec.sign.value(), e);
                e += spec.step;
            }
            Ok(acc)
        }
        PochLength::Finite(n) => {
            let exps: Vec<i64> = (0..n as i64).map(|j| spec.base_exp + j * spec.step).collect();
            if exps.iter().all(|&e| e >= 0) {
                let mut acc = TruncatedSeries::one(grain, order);
                for e in exps {
                    acc = acc.mul_one_minus(spec.sign.value(), e);
                }
                Ok(acc)
            } else {
                // Laurent factors: multiply exactly, then truncate.
                Ok(laurent_product(&exps, spec.sign, grain, order))
            }
        }
    }
}

/// `(monomial; q)_n` at the given grain, with `q` meaning `q^(grain/grain)`.
pub fn poch_monomial(m: Monomial, n: u32, grain: Grain, order: i64) -> Result<TruncatedSeries> {
    pochhammer(
        &PochhammerSpec::finite(m.sign, m.exp, grain.value(), n),
        grain,
        order,
    )
}

/// `(monomial; q)_infty` at the given grain.
pub fn poch_monomial_inf(m: Monomial, grain: Grain, order: i64) -> Result<TruncatedSeries> {
    pochhammer(
        &PochhammerSpec::infinite(m.sign, m.exp, grain.value()),
        grain,
        order,
    )
}

/// Exact product of `(1 - sign*q^e)` over possibly-negative exponents,
/// computed as a Laurent polynomial and then truncated.
fn laurent_product(exps: &[i64], sign: Sign, grain: Grain, order: i64) -> TruncatedSeries {
    let mut off: i64 = 0;
    let mut poly: Vec<BigInt> = vec![BigInt::one()];
    let s = sign.value();
    for &e in exps {
        let new_off = off.min(off + e);
        let new_len = poly.len() + e.unsigned_abs() as usize;
        let mut next = vec![BigInt::zero(); new_len];
        for (i, c) in poly.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let base = (off + i as i64 - new_off) as usize;
            next[base] += c;
            let shifted = (off + i as i64 + e - new_off) as usize;
            if s >= 0 {
                next[shifted] -= c;
            } else {
                next[shifted] += c;
            }
        }
        off = new_off;
        poly = next;
    }
    let terms: Vec<(i64, BigInt)> = poly
        .into_iter()
        .enumerate()
        .map(|(i, c)| (off + i as i64, c))
        .filter(|(_, c)| !c.is_zero())
        .collect();
    TruncatedSeries::from_terms(grain, order, &terms)
}

/// Gaussian binomial `[n k]` with `q -> q^t`, exact to `order` (grain 1).
///
/// Zero when `k < 0` or `k > n`; otherwise the polynomial
/// `(q;q)_n / ((q;q)_k (q;q)_{n-k})` of degree `t*k*(n-k)`.
pub fn gauss_binomial(n: i64, k: i64, t: i64, order: i64) -> TruncatedSeries {
    assert!(t >= 1);
    if k < 0 || k > n {
        return TruncatedSeries::zero(Grain::One, order);
    }
    let degree = t * k * (n - k);
    let work = degree.min(order);
    let g = Grain::One;
    let poch = |len: i64| -> TruncatedSeries {
        pochhammer(
            &PochhammerSpec::finite(Sign::Plus, t, t, len as u32),
            g,
            work,
        )
        .expect("finite pochhammer cannot fail")
    };
    let num = poch(n);
    let den = poch(k).mul(&poch(n - k));
    let quot = num.mul(&den.invert().expect("unit constant term"));
    // The quotient is a polynomial: pad exactly with zeros up to `order`.
    let terms = quot.terms();
    TruncatedSeries::from_terms(g, order, &terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn coeffs(s: &TruncatedSeries, upto: i64) -> Vec<i64> {
        (s.min_exp()..=upto)
            .map(|e| {
                let c = s.coefficient(e).unwrap();
                i64::try_from(&c).unwrap()
            })
            .collect()
    }

    #[test]
    fn qq_two() {
        // (q;q)_2 = 1 - q - q^2 + q^3
        let p = pochhammer(&PochhammerSpec::finite(Sign::Plus, 1, 1, 2), Grain::One, 5).unwrap();
        assert_eq!(coeffs(&p, 5), vec![1, -1, -1, 1, 0, 0]);
    }

    #[test]
    fn pod_numerator() {
        // (-q;q^2)_inf = 1 + q + q^3 + q^4 + q^5 + q^6 + ...
        let p = pochhammer(&PochhammerSpec::infinite(Sign::Minus, 1, 2), Grain::One, 6).unwrap();
        assert_eq!(coeffs(&p, 6), vec![1, 1, 0, 1, 1, 1, 1]);
    }

    #[test]
    fn half_exponent_factor() {
        // (q^{1/2}; q)_1 at grain 2 = 1 - q^{1/2}
        let p = pochhammer(&PochhammerSpec::finite(Sign::Plus, 1, 2, 1), Grain::Two, 4).unwrap();
        assert_eq!(p.coefficient(0).unwrap(), BigInt::from(1));
        assert_eq!(p.coefficient(1).unwrap(), BigInt::from(-1));
    }

    #[test]
    fn infinite_needs_positive_base() {
        let err = pochhammer(&PochhammerSpec::infinite(Sign::Plus, 0, 1), Grain::One, 4);
        assert!(matches!(err, Err(Error::InfiniteBase(0))));
    }

    #[test]
    fn laurent_factors_exact() {
        // (q^{-2}; q)_2 = (1 - q^{-2})(1 - q^{-1})
        let p = pochhammer(&PochhammerSpec::finite(Sign::Plus, -2, 1, 2), Grain::One, 3).unwrap();
        assert_eq!(p.coefficient(-3).unwrap(), BigInt::from(1));
        assert_eq!(p.coefficient(-2).unwrap(), BigInt::from(-1));
        assert_eq!(p.coefficient(-1).unwrap(), BigInt::from(-1));
        assert_eq!(p.coefficient(0).unwrap(), BigInt::from(1));
    }

    #[test]
    fn gauss_small() {
        let g = gauss_binomial(2, 1, 1, 6);
        assert_eq!(coeffs(&g, 6), vec![1, 1, 0, 0, 0, 0, 0]);
        // q-Pascal oracle fixed the expected row for [4 2]
        let g = gauss_binomial(4, 2, 1, 6);
        assert_eq!(coeffs(&g, 6), vec![1, 1, 2, 1, 1, 0, 0]);
        assert!(gauss_binomial(3, 5, 1, 6).is_zero());
        assert!(gauss_binomial(3, -1, 1, 6).is_zero());
    }

    #[test]
    fn gauss_base_change() {
        // [2 1]_{q^3} = 1 + q^3
        let g = gauss_binomial(2, 1, 3, 8);
        assert_eq!(g.coefficient(3).unwrap(), BigInt::one());
        assert_eq!(g.coefficient(1).unwrap(), BigInt::zero());
    }
}
