//! Exact truncated Laurent series in q with arbitrary-precision integer
//! coefficients.
//!
//! A [`TruncatedSeries`] stores coefficients densely for every exponent from
//! `min_exp` up to `order`, both measured in units of `1/grain`. Coefficients
//! at exponents below `min_exp` are zero; coefficients above `order` are
//! unknown. Every operation propagates `order` pessimistically so that a
//! stored coefficient is always exact, never approximate.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::error::{Error, Result};

/// Exponent denominator: series live in q^(1/grain).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Grain {
    One,
    Two,
}

impl Grain {
    pub fn value(self) -> i64 {
        match self {
            Grain::One => 1,
            Grain::Two => 2,
        }
    }
}

/// An exact integer-coefficient series, truncated at a known order.
///
/// Exponents are integers in units of `1/grain`; `min_exp` may be negative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    grain: Grain,
    min_exp: i64,
    order: i64,
    coeffs: Vec<BigInt>,
}

impl TruncatedSeries {
    /// The zero series, known exactly up to `order`.
    pub fn zero(grain: Grain, order: i64) -> Self {
        assert!(order >= 0, "order must be nonnegative");
        TruncatedSeries {
            grain,
            min_exp: 0,
            order,
            coeffs: vec![BigInt::zero(); (order + 1) as usize],
        }
    }

    /// The constant series 1.
    pub fn one(grain: Grain, order: i64) -> Self {
        Self::monomial(grain, order, 0, BigInt::one())
    }

    /// A single term `coeff * q^(exp/grain)`. `min_exp = min(0, exp)`.
    pub fn monomial(grain: Grain, order: i64, exp: i64, coeff: BigInt) -> Self {
        let min_exp = exp.min(0);
        assert!(order >= 0);
        let mut coeffs = vec![BigInt::zero(); (order - min_exp + 1) as usize];
        if exp <= order {
            coeffs[(exp - min_exp) as usize] = coeff;
        }
        TruncatedSeries {
            grain,
            min_exp,
            order,
            coeffs,
        }
    }

    /// Build a series from `(exponent, coefficient)` terms; duplicates are
    /// summed and terms above `order` are dropped. Exponents are in units of
    /// `1/grain`.
    pub fn from_terms(grain: Grain, order: i64, terms: &[(i64, BigInt)]) -> Self {
        let min_exp = terms.iter().map(|&(e, _)| e).min().unwrap_or(0).min(0);
        assert!(order >= 0);
        let mut coeffs = vec![BigInt::zero(); (order - min_exp + 1) as usize];
        for (e, c) in terms {
            if *e <= order {
                coeffs[(e - min_exp) as usize] += c;
            }
        }
        TruncatedSeries {
            grain,
            min_exp,
            order,
            coeffs,
        }
    }

    pub fn grain(&self) -> Grain {
        self.grain
    }

    pub fn min_exp(&self) -> i64 {
        self.min_exp
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    /// The exact coefficient at `exp` (units of 1/grain). Below `min_exp`
    /// the answer is 0; above `order` it is unknown and an error.
    pub fn coefficient(&self, exp: i64) -> Result<BigInt> {
        if exp > self.order {
            return Err(Error::AboveOrder {
                exp,
                order: self.order,
            });
        }
        if exp < self.min_exp {
            return Ok(BigInt::zero());
        }
        Ok(self.coeffs[(exp - self.min_exp) as usize].clone())
    }

    /// Coefficient access clamped to the stored range (zero outside).
    pub(crate) fn coeff_ref(&self, exp: i64) -> Option<&BigInt> {
        if exp < self.min_exp || exp > self.order {
            None
        } else {
            Some(&self.coeffs[(exp - self.min_exp) as usize])
        }
    }

    /// All nonzero `(exponent, coefficient)` pairs in increasing order.
    pub fn terms(&self) -> Vec<(i64, BigInt)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.min_exp + i as i64, c.clone()))
            .collect()
    }

    /// True when every stored coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Lowest exponent with a nonzero coefficient, if any.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .map(|i| self.min_exp + i as i64)
    }

    pub fn add(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let (a, b) = promote_pair(self, other);
        let order = a.order.min(b.order);
        let min_exp = a.min_exp.min(b.min_exp).min(0);
        let mut coeffs = vec![BigInt::zero(); (order - min_exp + 1) as usize];
        for s in [&a, &b] {
            for (i, c) in s.coeffs.iter().enumerate() {
                let e = s.min_exp + i as i64;
                if e <= order && !c.is_zero() {
                    coeffs[(e - min_exp) as usize] += c;
                }
            }
        }
        TruncatedSeries {
            grain: a.grain,
            min_exp,
            order,
            coeffs,
        }
    }

    pub fn sub(&self, other: &TruncatedSeries) -> TruncatedSeries {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> TruncatedSeries {
        TruncatedSeries {
            grain: self.grain,
            min_exp: self.min_exp,
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> TruncatedSeries {
        TruncatedSeries {
            grain: self.grain,
            min_exp: self.min_exp,
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// Product, exact to `min(a.order + b.min_exp, b.order + a.min_exp)` so
    /// that no unknown coefficient contaminates a reported one.
    pub fn mul(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let (a, b) = promote_pair(self, other);
        let order = (a.order + b.min_exp).min(b.order + a.min_exp);
        let min_exp = (a.min_exp + b.min_exp).min(0);
        assert!(
            order >= a.min_exp + b.min_exp,
            "order underflow in mul: {} < {}",
            order,
            a.min_exp + b.min_exp
        );
        let mut coeffs = vec![BigInt::zero(); (order - min_exp + 1) as usize];
        for (i, ca) in a.coeffs.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            let ea = a.min_exp + i as i64;
            if ea + b.min_exp > order {
                break;
            }
            for (j, cb) in b.coeffs.iter().enumerate() {
                let e = ea + b.min_exp + j as i64;
                if e > order {
                    break;
                }
                if !cb.is_zero() {
                    coeffs[(e - min_exp) as usize] += ca * cb;
                }
            }
        }
        TruncatedSeries {
            grain: a.grain,
            min_exp,
            order,
            coeffs,
        }
    }

    /// Multiply by the exact monomial `q^(exp/grain)`: every exponent shifts,
    /// including `order` (the monomial is exact, so nothing is lost).
    pub fn shift(&self, exp: i64) -> TruncatedSeries {
        TruncatedSeries {
            grain: self.grain,
            min_exp: self.min_exp + exp,
            order: self.order + exp,
            coeffs: self.coeffs.clone(),
        }
    }

    /// In-place style product with the binomial `1 - sign*q^(exp/grain)`,
    /// `exp >= 0`. Keeps the same order (the binomial has min_exp 0).
    pub fn mul_one_minus(&self, sign: i64, exp: i64) -> TruncatedSeries {
        assert!(exp >= 0);
        if exp == 0 {
            return self.scale(&BigInt::from(1 - sign));
        }
        let mut coeffs = self.coeffs.clone();
        for i in (0..coeffs.len()).rev() {
            let j = i as i64 - exp;
            if j >= 0 {
                let t = if sign >= 0 {
                    self.coeffs[j as usize].clone()
                } else {
                    -self.coeffs[j as usize].clone()
                };
                coeffs[i] -= t;
            }
        }
        TruncatedSeries {
            grain: self.grain,
            min_exp: self.min_exp,
            order: self.order,
            coeffs,
        }
    }

    /// Multiplicative inverse. The lowest nonzero coefficient must be a unit
    /// (±1). For valuation `v` and order `N` the result has `min_exp = -v`
    /// and order `N - 2v`.
    pub fn invert(&self) -> Result<TruncatedSeries> {
        let v = self.valuation().ok_or(Error::ZeroSeries)?;
        let lead = self.coefficient(v)?;
        if !lead.is_one() && lead != BigInt::from(-1) {
            return Err(Error::NonUnitLeading(lead.to_string()));
        }
        let n = self.order - v;
        let out_order = n - v;
        if out_order < -v {
            return Err(Error::OrderUnderflow {
                order: out_order,
                min_exp: -v,
            });
        }
        // b = q^{-v} * self is a unit power series exact to n.
        let b: Vec<BigInt> = (0..=n)
            .map(|m| self.coefficient(v + m).unwrap())
            .collect();
        let mut inv = vec![BigInt::zero(); (n + 1) as usize];
        inv[0] = lead.clone();
        for m in 1..=n as usize {
            let mut acc = BigInt::zero();
            for j in 1..=m {
                if !b[j].is_zero() {
                    acc += &b[j] * &inv[m - j];
                }
            }
            inv[m] = -&lead * acc;
        }
        // result = q^{-v} * inv, truncated to out_order
        let min_exp = (-v).min(0);
        let mut coeffs = vec![BigInt::zero(); (out_order - min_exp + 1) as usize];
        for (m, c) in inv.iter().enumerate() {
            let e = m as i64 - v;
            if e <= out_order && !c.is_zero() {
                coeffs[(e - min_exp) as usize] = c.clone();
            }
        }
        Ok(TruncatedSeries {
            grain: self.grain,
            min_exp,
            order: out_order,
            coeffs,
        })
    }

    /// Truncate (or zero-extend-never) down to a lower order.
    pub fn truncate(&self, order: i64) -> TruncatedSeries {
        assert!(order <= self.order, "cannot extend knowledge by truncation");
        let min_exp = self.min_exp.min(0).min(order);
        let take = (order - self.min_exp + 1).max(0) as usize;
        let mut coeffs: Vec<BigInt> = self.coeffs[..take.min(self.coeffs.len())].to_vec();
        let mut pad = Vec::new();
        if min_exp < self.min_exp {
            pad = vec![BigInt::zero(); (self.min_exp - min_exp) as usize];
        }
        pad.append(&mut coeffs);
        TruncatedSeries {
            grain: self.grain,
            min_exp,
            order,
            coeffs: pad,
        }
    }

    /// Convert to the target grain. Promotion (1 -> 2) doubles exponents;
    /// demotion (2 -> 1) requires all half-exponent coefficients to vanish.
    pub fn to_grain(&self, grain: Grain) -> Result<TruncatedSeries> {
        match (self.grain, grain) {
            (a, b) if a == b => Ok(self.clone()),
            (Grain::One, Grain::Two) => {
                let min_exp = 2 * self.min_exp;
                let order = 2 * self.order;
                let mut coeffs = vec![BigInt::zero(); (order - min_exp + 1) as usize];
                for (i, c) in self.coeffs.iter().enumerate() {
                    coeffs[2 * i] = c.clone();
                }
                Ok(TruncatedSeries {
                    grain: Grain::Two,
                    min_exp,
                    order,
                    coeffs,
                })
            }
            (Grain::Two, Grain::One) => {
                for (i, c) in self.coeffs.iter().enumerate() {
                    let e = self.min_exp + i as i64;
                    if e.rem_euclid(2) == 1 && !c.is_zero() {
                        return Err(Error::NotIntegral(e));
                    }
                }
                let min_exp = self.min_exp.div_euclid(2);
                let order = self.order.div_euclid(2);
                let mut coeffs = vec![BigInt::zero(); (order - min_exp + 1) as usize];
                for (i, c) in self.coeffs.iter().enumerate() {
                    let e = self.min_exp + i as i64;
                    if e.rem_euclid(2) == 0 && e / 2 >= min_exp && e / 2 <= order {
                        coeffs[(e / 2 - min_exp) as usize] = c.clone();
                    }
                }
                Ok(TruncatedSeries {
                    grain: Grain::One,
                    min_exp,
                    order,
                    coeffs,
                })
            }
            _ => unreachable!(),
        }
    }

    /// First exponent where the two series disagree on `[from, upto]`,
    /// together with both coefficients.
    pub fn first_discrepancy(
        &self,
        other: &TruncatedSeries,
        upto: i64,
    ) -> Option<(i64, BigInt, BigInt)> {
        let (a, b) = promote_pair(self, other);
        assert!(
            upto <= a.order && upto <= b.order,
            "comparison beyond known order ({} vs {}, {})",
            a.order,
            b.order,
            upto
        );
        let from = a.min_exp.min(b.min_exp);
        for e in from..=upto {
            let ca = a.coeff_ref(e).cloned().unwrap_or_default();
            let cb = b.coeff_ref(e).cloned().unwrap_or_default();
            if ca != cb {
                return Some((e, ca, cb));
            }
        }
        None
    }
}

/// Spec-facing constructor: terms in units of 1/grain, truncated at `order`.
pub fn make_series(grain: Grain, order: i64, terms: &[(i64, BigInt)]) -> TruncatedSeries {
    TruncatedSeries::from_terms(grain, order, terms)
}

fn promote_pair(a: &TruncatedSeries, b: &TruncatedSeries) -> (TruncatedSeries, TruncatedSeries) {
    match (a.grain, b.grain) {
        (x, y) if x == y => (a.clone(), b.clone()),
        (Grain::One, Grain::Two) => (a.to_grain(Grain::Two).unwrap(), b.clone()),
        (Grain::Two, Grain::One) => (a.clone(), b.to_grain(Grain::Two).unwrap()),
        _ => unreachable!(),
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.grain.value();
        let mut first = true;
        for (e, c) in self.terms() {
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if e == 0 {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                if g == 1 {
                    if e == 1 {
                        write!(f, "q")?;
                    } else {
                        write!(f, "q^{e}")?;
                    }
                } else {
                    write!(f, "q^({e}/{g})")?;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        if g == 1 {
            write!(f, " + O(q^{})", self.order + 1)
        } else {
            write!(f, " + O(q^({}/{}))", self.order + 1, g)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(terms: &[(i64, i64)], order: i64) -> TruncatedSeries {
        let v: Vec<(i64, BigInt)> = terms.iter().map(|&(e, c)| (e, BigInt::from(c))).collect();
        TruncatedSeries::from_terms(Grain::One, order, &v)
    }

    #[test]
    fn make_series_basics() {
        let a = s(&[(0, 1), (1, -1)], 5);
        assert_eq!(a.coefficient(0).unwrap(), BigInt::from(1));
        assert_eq!(a.coefficient(1).unwrap(), BigInt::from(-1));
        assert_eq!(a.min_exp(), 0);

        let b = TruncatedSeries::from_terms(Grain::Two, 3, &[(1, BigInt::one())]);
        assert_eq!(b.coefficient(1).unwrap(), BigInt::one());
        assert_eq!(b.grain(), Grain::Two);

        // duplicate exponents cancel, min_exp keeps the Laurent support
        let c = s(&[(-2, 3), (-2, -3)], 4);
        assert!(c.is_zero());
        assert_eq!(c.min_exp(), -2);
    }

    #[test]
    fn mul_examples() {
        // (1-q)(1+q+q^2+q^3) = 1 - q^4, truncated at 3 -> 1
        let a = s(&[(0, 1), (1, -1)], 3);
        let b = s(&[(0, 1), (1, 1), (2, 1), (3, 1)], 3);
        let p = a.mul(&b);
        assert_eq!(p.order(), 3);
        assert_eq!(p.terms(), vec![(0, BigInt::one())]);

        // q^{-1} * q = 1 with shifted min_exp
        let qm1 = TruncatedSeries::monomial(Grain::One, 4, -1, BigInt::one());
        let q = TruncatedSeries::monomial(Grain::One, 4, 1, BigInt::one());
        let p = qm1.mul(&q);
        assert_eq!(p.coefficient(0).unwrap(), BigInt::one());
        assert!(p.valuation() == Some(0));
    }

    #[test]
    fn invert_geometric() {
        let a = s(&[(0, 1), (1, -1)], 4);
        let inv = a.invert().unwrap();
        assert_eq!(inv.order(), 4);
        for e in 0..=4 {
            assert_eq!(inv.coefficient(e).unwrap(), BigInt::one());
        }
        // two-sided inverse to the computed order
        let p = a.mul(&inv);
        assert!(p.first_discrepancy(&TruncatedSeries::one(Grain::One, 4), 4).is_none());
    }

    #[test]
    fn invert_monomial_factor() {
        // q(1-q) at order 3: inverse is q^{-1}(1+q+...), exact to N-2v = 1
        let a = s(&[(1, 1), (2, -1)], 3);
        let inv = a.invert().unwrap();
        assert_eq!(inv.min_exp(), -1);
        assert_eq!(inv.order(), 1);
        for e in -1..=1 {
            assert_eq!(inv.coefficient(e).unwrap(), BigInt::one(), "exp {e}");
        }
    }

    #[test]
    fn invert_errors() {
        assert!(matches!(
            TruncatedSeries::zero(Grain::One, 3).invert(),
            Err(Error::ZeroSeries)
        ));
        let a = s(&[(0, 2)], 3);
        assert!(matches!(a.invert(), Err(Error::NonUnitLeading(_))));
    }

    #[test]
    fn coefficient_contract() {
        let a = s(&[(0, 1), (1, -1)], 6);
        assert!(matches!(
            a.coefficient(7),
            Err(Error::AboveOrder { exp: 7, order: 6 })
        ));
        assert_eq!(a.coefficient(-3).unwrap(), BigInt::zero());
    }

    #[test]
    fn grain_round_trip() {
        let a = s(&[(0, 1), (2, 5), (3, -7)], 9);
        let up = a.to_grain(Grain::Two).unwrap();
        assert_eq!(up.order(), 18);
        assert_eq!(up.coefficient(4).unwrap(), BigInt::from(5));
        let down = up.to_grain(Grain::One).unwrap();
        assert_eq!(down, a);

        let half = TruncatedSeries::from_terms(Grain::Two, 4, &[(1, BigInt::one())]);
        assert!(matches!(half.to_grain(Grain::One), Err(Error::NotIntegral(1))));
    }

    #[test]
    fn mul_one_minus_matches_mul() {
        let a = s(&[(0, 1), (1, 2), (2, 3), (5, -4)], 12);
        let b = s(&[(0, 1), (3, -1)], 12);
        assert_eq!(a.mul_one_minus(1, 3), a.mul(&b));
        let c = s(&[(0, 1), (3, 1)], 12);
        assert_eq!(a.mul_one_minus(-1, 3), a.mul(&c));
    }
}
