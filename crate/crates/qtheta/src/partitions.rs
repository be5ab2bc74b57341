//! Partition counting: brute-force enumerators and generating-function
//! tables for every partition family the identity suite touches.
//!
//! The brute-force counters are deliberately naive; they exist as an
//! independent ground truth for the series route, not to scale.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::pochhammer::{pochhammer, PochhammerSpec, Sign};
use crate::series::{Grain, TruncatedSeries};

/// Default ceiling for brute-force enumeration of unrestricted partitions.
pub const BRUTE_FORCE_CEILING: i64 = 60;

/// Which partition function is being counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PartitionKind {
    /// p(n): all partitions.
    Unrestricted,
    /// pod(n): partitions with distinct odd parts (evens unrestricted).
    DistinctOddParts,
    /// Overpartitions: the first occurrence of each part may be overlined;
    /// each underlying partition counts with weight 2^(#distinct parts).
    Overpartition,
    /// b_ell(n): no part divisible by ell (ell >= 2).
    EllRegular(u32),
    /// p5(n): parts restricted to {1, 2, 4, 5}.
    Parts1245,
}

/// A table of exact values 0..=max_n for one partition kind.
#[derive(Debug, Clone)]
pub struct PartitionTable {
    pub kind: PartitionKind,
    values: Vec<BigInt>,
}

impl PartitionTable {
    pub fn max_n(&self) -> i64 {
        self.values.len() as i64 - 1
    }

    /// Value at `n`; queries below zero return 0 by the usual convention.
    pub fn get(&self, n: i64) -> BigInt {
        if n < 0 {
            BigInt::zero()
        } else {
            self.values[n as usize].clone()
        }
    }
}

/// Count by explicit enumeration. `ceiling` guards runaway inputs; pass
/// [`BRUTE_FORCE_CEILING`] for the default.
pub fn count_bruteforce(kind: PartitionKind, n: i64, ceiling: i64) -> Result<BigInt> {
    if n < 0 {
        return Ok(BigInt::zero());
    }
    if n > ceiling {
        return Err(Error::AboveCeiling { n, ceiling });
    }
    let mut total = BigInt::zero();
    let mut parts: Vec<i64> = Vec::new();
    enumerate(kind, n, n.max(1), &mut parts, &mut total);
    Ok(total)
}

fn part_allowed(kind: PartitionKind, p: i64) -> bool {
    match kind {
        PartitionKind::Unrestricted | PartitionKind::Overpartition => true,
        PartitionKind::DistinctOddParts => true,
        PartitionKind::EllRegular(ell) => p % ell as i64 != 0,
        PartitionKind::Parts1245 => matches!(p, 1 | 2 | 4 | 5),
    }
}

fn enumerate(kind: PartitionKind, rem: i64, max_part: i64, parts: &mut Vec<i64>, total: &mut BigInt) {
    if rem == 0 {
        *total += weight(kind, parts);
        return;
    }
    for p in (1..=max_part.min(rem)).rev() {
        if !part_allowed(kind, p) {
            continue;
        }
        if kind == PartitionKind::DistinctOddParts && p % 2 == 1 && parts.last() == Some(&p) {
            continue;
        }
        parts.push(p);
        enumerate(kind, rem - p, p, parts, total);
        parts.pop();
    }
}

fn weight(kind: PartitionKind, parts: &[i64]) -> BigInt {
    match kind {
        PartitionKind::Overpartition => {
            let mut distinct = 0u32;
            for (i, p) in parts.iter().enumerate() {
                if i == 0 || parts[i - 1] != *p {
                    distinct += 1;
                }
            }
            BigInt::one() << distinct
        }
        _ => BigInt::one(),
    }
}

/// The generating function of a kind, expanded to `order` with the series
/// layer.
pub fn generating_function(kind: PartitionKind, order: i64) -> TruncatedSeries {
    let g = Grain::One;
    let inf = |sign: Sign, base: i64, step: i64| {
        pochhammer(&PochhammerSpec::infinite(sign, base, step), g, order).expect("base >= 1")
    };
    match kind {
        PartitionKind::Unrestricted => inf(Sign::Plus, 1, 1).invert().unwrap(),
        PartitionKind::DistinctOddParts => inf(Sign::Minus, 1, 2)
            .mul(&inf(Sign::Plus, 2, 2).invert().unwrap()),
        PartitionKind::Overpartition => inf(Sign::Minus, 1, 1)
            .mul(&inf(Sign::Plus, 1, 1).invert().unwrap()),
        PartitionKind::EllRegular(ell) => {
            let ell = ell as i64;
            inf(Sign::Plus, ell, ell).mul(&inf(Sign::Plus, 1, 1).invert().unwrap())
        }
        PartitionKind::Parts1245 => {
            let mut den = TruncatedSeries::one(g, order);
            for e in [1, 2, 4, 5] {
                den = den.mul_one_minus(1, e);
            }
            den.invert().unwrap()
        }
    }
}

/// Build the value table by expanding the kind's generating function.
pub fn build_table(kind: PartitionKind, max_n: i64) -> PartitionTable {
    assert!(max_n >= 0);
    let gf = generating_function(kind, max_n);
    let values = (0..=max_n).map(|n| gf.coefficient(n).unwrap()).collect();
    PartitionTable { kind, values }
}

/// M_k(n): partitions of n in which k is the least integer that is not a
/// part and there are more parts greater than k than parts less than k.
pub fn mk_statistic(n: i64, k: i64, ceiling: i64) -> Result<BigInt> {
    if k < 1 {
        return Err(Error::InvalidParameter(format!("mk_statistic needs k >= 1, got {k}")));
    }
    if n < 0 {
        return Ok(BigInt::zero());
    }
    if n > ceiling {
        return Err(Error::AboveCeiling { n, ceiling });
    }
    let mut count = BigInt::zero();
    let mut parts: Vec<i64> = Vec::new();
    fn rec(rem: i64, max_part: i64, k: i64, parts: &mut Vec<i64>, count: &mut BigInt) {
        if rem == 0 {
            let mut least_missing = 1;
            while parts.contains(&least_missing) {
                least_missing += 1;
            }
            if least_missing == k {
                let gt = parts.iter().filter(|&&p| p > k).count();
                let lt = parts.iter().filter(|&&p| p < k).count();
                if gt > lt {
                    *count += 1;
                }
            }
            return;
        }
        for p in (1..=max_part.min(rem)).rev() {
            parts.push(p);
            rec(rem - p, p, k, parts, count);
            parts.pop();
        }
    }
    rec(n, n.max(1), k, &mut parts, &mut count);
    Ok(count)
}

/// p5(n) by the floor formula, evaluated in exact rational arithmetic:
/// floor((2n^3 + 36n^2 + 193n + 525)/480 + (-1)^n (n+1)/32).
pub fn p5_closed_form(n: i64) -> BigInt {
    if n < 0 {
        return BigInt::zero();
    }
    let n = BigInt::from(n);
    let cubic = (BigInt::from(2) * &n * &n * &n
        + BigInt::from(36) * &n * &n
        + BigInt::from(193) * &n
        + BigInt::from(525))
        * BigInt::from(2);
    let parity = if (&n % BigInt::from(2)).is_zero() {
        BigInt::one()
    } else {
        -BigInt::one()
    };
    let osc = parity * (&n + BigInt::one()) * BigInt::from(30);
    // common denominator 960; floor via Euclidean division
    let num = cubic + osc;
    num.div_floor(&BigInt::from(960))
}

/// The exact rational bounds p5^d(n) < p5(n) <= p5^u(n).
pub fn p5_bounds(n: i64) -> (BigRational, BigRational) {
    let n = BigRational::from(BigInt::from(n));
    let cubic = (BigRational::from(BigInt::from(2)) * &n * &n * &n
        + BigRational::from(BigInt::from(36)) * &n * &n
        + BigRational::from(BigInt::from(193)) * &n
        + BigRational::from(BigInt::from(525)))
        / BigRational::from(BigInt::from(480));
    let osc = (&n + BigRational::one()) / BigRational::from(BigInt::from(32));
    let lower = &cubic - &osc - BigRational::one();
    let upper = &cubic + &osc;
    (lower, upper)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brute_force_examples() {
        assert_eq!(count_bruteforce(PartitionKind::Unrestricted, 5, 60).unwrap(), BigInt::from(7));
        assert_eq!(
            count_bruteforce(PartitionKind::DistinctOddParts, 3, 60).unwrap(),
            BigInt::from(2)
        );
        assert_eq!(count_bruteforce(PartitionKind::Overpartition, 0, 60).unwrap(), BigInt::one());
        assert_eq!(count_bruteforce(PartitionKind::Parts1245, 2, 60).unwrap(), BigInt::from(2));
        assert!(matches!(
            count_bruteforce(PartitionKind::Unrestricted, 61, 60),
            Err(Error::AboveCeiling { .. })
        ));
    }

    #[test]
    fn table_examples() {
        let t = build_table(PartitionKind::Unrestricted, 10);
        assert_eq!(t.get(10), BigInt::from(42));
        assert_eq!(t.get(-3), BigInt::zero());
        let t = build_table(PartitionKind::EllRegular(6), 7);
        assert_eq!(
            t.get(7),
            count_bruteforce(PartitionKind::EllRegular(6), 7, 60).unwrap()
        );
        let t = build_table(PartitionKind::Parts1245, 0);
        assert_eq!(t.get(0), BigInt::one());
    }

    #[test]
    fn partition_gf_coefficient() {
        let gf = generating_function(PartitionKind::Unrestricted, 50);
        assert_eq!(gf.coefficient(10).unwrap(), BigInt::from(42));
        assert_eq!(gf.coefficient(5).unwrap(), BigInt::from(7));
    }

    #[test]
    fn mk_examples() {
        assert_eq!(mk_statistic(2, 1, 60).unwrap(), BigInt::one());
        assert_eq!(mk_statistic(4, 1, 60).unwrap(), BigInt::from(2));
        for k in 1..=4 {
            assert_eq!(mk_statistic(0, k, 60).unwrap(), BigInt::zero());
        }
    }

    #[test]
    fn p5_first_values() {
        // brute force: 1, 1, 2, 2, 3, 4, ...
        for (n, want) in [(0, 1), (1, 1), (2, 2)] {
            assert_eq!(p5_closed_form(n), BigInt::from(want));
            assert_eq!(
                count_bruteforce(PartitionKind::Parts1245, n, 60).unwrap(),
                BigInt::from(want)
            );
        }
    }

    #[test]
    fn p5_bounds_bracket() {
        let t = build_table(PartitionKind::Parts1245, 100);
        for n in 0..=100 {
            let (lo, hi) = p5_bounds(n);
            let v = BigRational::from(t.get(n));
            assert!(lo < v && v <= hi, "bounds fail at n={n}");
            // strictness of the lower bound against the closed form
            assert!(lo < BigRational::from(p5_closed_form(n)));
        }
    }

    #[test]
    fn overpartition_even_for_positive_n() {
        let t = build_table(PartitionKind::Overpartition, 40);
        for n in 1..=40 {
            assert!((t.get(n) % BigInt::from(2)).is_zero(), "odd at {n}");
        }
    }
}
