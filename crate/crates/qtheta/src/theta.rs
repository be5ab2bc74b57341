//! Builders for both sides of the truncated theta identities: partial theta
//! sums, Jacobi-triple-product-style infinite products, single-sum tails,
//! and the multisum right-hand sides.
//!
//! Conventions fixed here (and exercised by the tests):
//! * the ratio `(1-q^l)/(1-q^(l+n_k))` is 1 when `n_k = 0`;
//! * outer alternating sums of the even-basis family converge only in the
//!   Abel sense; evaluators return the doubled value `S_M + S_(M+1)`, which
//!   is exact in integers and absorbs the factor 2 of those displays.

use num_bigint::BigInt;
use num_traits::One;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::partitions::{generating_function, PartitionKind};
use crate::pochhammer::{poch_monomial_inf, pochhammer, Monomial, PochhammerSpec, Sign};
use crate::series::{Grain, TruncatedSeries};

const G: Grain = Grain::One;

/// Quadratic exponent laws of the theta sums in the registry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExponentLaw {
    /// j(3j+1)/2
    Pentagonal,
    /// j(2j+1)
    TriangularFamily,
    /// j^2
    Square,
    /// R j(j+1)/2 - S j
    GeneralJtp { r: i64, s: i64 },
    /// (k+1/2) j^2 + (k-i-1/2) j
    OddBasis { k: i64, i: i64 },
    /// k j^2 - i j
    EvenBasis { k: i64, i: i64 },
}

impl ExponentLaw {
    /// The exponent at index j; all six laws give integers.
    pub fn exponent(&self, j: i64) -> i64 {
        let j = j as i128;
        let num: i128 = match *self {
            ExponentLaw::Pentagonal => j * (3 * j + 1),
            ExponentLaw::TriangularFamily => 2 * j * (2 * j + 1),
            ExponentLaw::Square => 2 * j * j,
            ExponentLaw::GeneralJtp { r, s } => (r as i128) * j * (j + 1) - 2 * (s as i128) * j,
            ExponentLaw::OddBasis { k, i } => {
                (2 * k as i128 + 1) * j * j + (2 * k as i128 - 2 * i as i128 - 1) * j
            }
            ExponentLaw::EvenBasis { k, i } => 2 * ((k as i128) * j * j - (i as i128) * j),
        };
        debug_assert!(num % 2 == 0);
        i64::try_from(num / 2).expect("exponent overflow")
    }

    fn validate(&self) -> Result<()> {
        if let ExponentLaw::GeneralJtp { r, s } = *self {
            if !(1 <= s && s < r) {
                return Err(Error::InvalidParameter(format!(
                    "general law needs 1 <= S < R, got R={r} S={s}"
                )));
            }
        }
        Ok(())
    }
}

/// Summation range of a theta sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexRange {
    Finite { lo: i64, hi: i64 },
    Bilateral,
}

/// A signed partial theta sum: `sum_j (-1)^j q^(law(j))` over the range.
#[derive(Debug, Clone, Copy)]
pub struct ThetaSumSpec {
    pub law: ExponentLaw,
    pub range: IndexRange,
    pub allow_laurent: bool,
}

impl ThetaSumSpec {
    pub fn finite(law: ExponentLaw, lo: i64, hi: i64) -> Self {
        ThetaSumSpec {
            law,
            range: IndexRange::Finite { lo, hi },
            allow_laurent: false,
        }
    }

    pub fn bilateral(law: ExponentLaw) -> Self {
        ThetaSumSpec {
            law,
            range: IndexRange::Bilateral,
            allow_laurent: false,
        }
    }
}

fn sign_of(j: i64) -> BigInt {
    if j.rem_euclid(2) == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// Exact sum of the spec's signed monomials with exponent <= order.
pub fn theta_partial_sum(spec: &ThetaSumSpec, order: i64) -> Result<TruncatedSeries> {
    spec.law.validate()?;
    let mut terms: Vec<(i64, BigInt)> = Vec::new();
    let mut push = |j: i64| -> Result<()> {
        let e = spec.law.exponent(j);
        if e < 0 && !spec.allow_laurent {
            return Err(Error::InvalidParameter(format!(
                "exponent {e} at j={j} is negative and Laurent support was not requested"
            )));
        }
        if e <= order {
            terms.push((e, sign_of(j)));
        }
        Ok(())
    };
    match spec.range {
        IndexRange::Finite { lo, hi } => {
            if lo > hi {
                return Ok(TruncatedSeries::zero(G, order));
            }
            for j in lo..=hi {
                push(j)?;
            }
        }
        IndexRange::Bilateral => {
            // quadratic growth: walk outward until both directions exceed order
            push(0)?;
            for dir in [1i64, -1] {
                let mut j = dir;
                let mut misses = 0;
                loop {
                    let e = spec.law.exponent(j);
                    if e <= order {
                        push(j)?;
                        misses = 0;
                    } else {
                        misses += 1;
                        // past the parabola vertex two consecutive misses are final
                        if misses >= 2 && spec.law.exponent(j + dir) > e {
                            break;
                        }
                    }
                    j += dir;
                    if j.unsigned_abs() > 4_000_000 {
                        return Err(Error::NonConvergent("bilateral theta cutoff".into()));
                    }
                }
            }
        }
    }
    Ok(TruncatedSeries::from_terms(G, order, &terms))
}

/// The truncated product `(q^S; q^R)_inf (q^(R-S); q^R)_inf (q^R; q^R)_inf`.
pub fn jtp_product(r: i64, s: i64, order: i64) -> Result<TruncatedSeries> {
    if !(1 <= s && s < r) {
        return Err(Error::InvalidParameter(format!(
            "jtp_product needs 1 <= S < R, got R={r} S={s}"
        )));
    }
    let mut acc = TruncatedSeries::one(G, order);
    for base in [s, r - s, r] {
        acc = acc.mul(&pochhammer(&PochhammerSpec::infinite(Sign::Plus, base, r), G, order)?);
    }
    Ok(acc)
}

/// Triple product with possibly-zero base exponents: a zero base makes the
/// whole product vanish (factor `1 - q^0`).
pub fn triple_product_allow_zero(bases: [i64; 3], step: i64, order: i64) -> Result<TruncatedSeries> {
    if bases.iter().any(|&b| b == 0) {
        return Ok(TruncatedSeries::zero(G, order));
    }
    let mut acc = TruncatedSeries::one(G, order);
    for b in bases {
        acc = acc.mul(&pochhammer(&PochhammerSpec::infinite(Sign::Plus, b, step), G, order)?);
    }
    Ok(acc)
}

/// Memo for finite Pochhammer inverses used by the multisum builders.
pub(crate) struct PochMemo {
    order: i64,
    inv: HashMap<(i64, i64, i64, u32), TruncatedSeries>,
}

impl PochMemo {
    pub(crate) fn new(order: i64) -> Self {
        PochMemo {
            order,
            inv: HashMap::new(),
        }
    }

    /// 1 / (sign*q^base ; q^step)_n, grain 1, memoized.
    pub(crate) fn inv_poch(&mut self, sign: Sign, base: i64, step: i64, n: u32) -> TruncatedSeries {
        let key = (sign.value(), base, step, n);
        if let Some(s) = self.inv.get(&key) {
            return s.clone();
        }
        let val = if n == 0 {
            TruncatedSeries::one(G, self.order)
        } else {
            let prev = self.inv_poch(sign, base, step, n - 1);
            let e = base + (n as i64 - 1) * step;
            if e > self.order {
                prev
            } else {
                let geom = TruncatedSeries::one(G, self.order)
                    .mul_one_minus(sign.value(), e)
                    .invert()
                    .expect("unit binomial");
                prev.mul(&geom)
            }
        };
        self.inv.insert(key, val.clone());
        val
    }
}

/// Visit all nonincreasing tuples `(v[0] >= ... >= v[k-1] >= floor)` with
/// `v[0] <= top`.
fn for_chains(k: usize, top: i64, floor: i64, f: &mut impl FnMut(&[i64])) {
    fn rec(rest: usize, prev: i64, floor: i64, buf: &mut Vec<i64>, f: &mut impl FnMut(&[i64])) {
        if rest == 0 {
            f(buf);
            return;
        }
        let mut v = prev;
        while v >= floor {
            buf.push(v);
            rec(rest - 1, v, floor, buf, f);
            buf.pop();
            v -= 1;
        }
    }
    let mut buf = Vec::with_capacity(k);
    rec(k, top, floor, &mut buf, f);
}

fn validate_odd_params(k: i64, i: i64, ell: i64) -> Result<()> {
    if k < 1 || i < 0 || i > k || ell < 0 {
        return Err(Error::InvalidParameter(format!(
            "odd-basis multisum needs k >= 1, 0 <= i <= k, l >= 0; got k={k} i={i} l={ell}"
        )));
    }
    Ok(())
}

/// The inner odd-basis multisum over `N_1 >= ... >= N_k >= 0`:
/// `q^((2l+1)*sum N + sum N^2 - N_1 - ... - N_i)` divided by
/// `(q)_{n_1}...(q)_{n_k} (q)_{n_k + 2l}` with the `(1-q^l)/(1-q^(l+n_k))`
/// ratio (1 at `n_k = 0`). `bound_boost` widens the enumeration cutoff; any
/// positive value must leave every reported coefficient unchanged.
pub fn ag_multisum_sum(k: i64, i: i64, ell: i64, order: i64, bound_boost: i64) -> Result<TruncatedSeries> {
    validate_odd_params(k, i, ell)?;
    let mut memo = PochMemo::new(order);
    let mut acc = TruncatedSeries::zero(G, order);
    let mut top = 0;
    while (2 * ell + 1) * (top + 1) + (top + 1) * (top + 1) - (top + 1) <= order {
        top += 1;
    }
    top += bound_boost;
    for_chains(k as usize, top, 0, &mut |ns| {
        let total: i64 = ns.iter().sum();
        let sq: i64 = ns.iter().map(|&x| x * x).sum();
        let head: i64 = ns[..i as usize].iter().sum();
        let e = (2 * ell + 1) * total + sq - head;
        if e > order {
            return;
        }
        let nk = ns[k as usize - 1];
        let mut t = TruncatedSeries::monomial(G, order, e, BigInt::one());
        for w in 0..k as usize {
            let diff = if w + 1 < k as usize { ns[w] - ns[w + 1] } else { ns[w] };
            t = t.mul(&memo.inv_poch(Sign::Plus, 1, 1, diff as u32));
        }
        t = t.mul(&memo.inv_poch(Sign::Plus, 1, 1, (nk + 2 * ell) as u32));
        if nk > 0 {
            if ell == 0 {
                return; // numerator (1 - q^0) kills the term
            }
            t = t.mul_one_minus(1, ell);
            t = t.mul(&memo.inv_poch(Sign::Plus, ell + nk, 1, 1));
        }
        acc = acc.add(&t);
    });
    Ok(acc)
}

/// `(q^(i+1), q^(2k-i), q^(2k+1); q^(2k+1))_inf`, the odd-basis product.
pub fn ag_product_den(k: i64, i: i64, order: i64) -> Result<TruncatedSeries> {
    triple_product_allow_zero([i + 1, 2 * k - i, 2 * k + 1], 2 * k + 1, order)
}

/// Full right-hand side of the odd-basis truncation:
/// `1 + (-1)^(l-1) q^((k+1/2)(l^2+l) - (i+1)l) (q)_inf / den * sum`.
/// At `l = 0` the literal `(1 - q^0)` numerator kills the sum and the
/// value is exactly 1.
pub fn ag_multisum_rhs(k: i64, i: i64, ell: i64, order: i64) -> Result<TruncatedSeries> {
    validate_odd_params(k, i, ell)?;
    if ell == 0 {
        return Ok(TruncatedSeries::one(G, order));
    }
    let pre_exp = (2 * k + 1) * (ell * ell + ell) / 2 - (i + 1) * ell;
    let sum = ag_multisum_sum(k, i, ell, order + pre_exp.min(0).abs(), 0)?;
    let qq = pochhammer(&PochhammerSpec::infinite(Sign::Plus, 1, 1), G, order)?;
    let den_inv = ag_product_den(k, i, order)?.invert()?;
    let mut tail = sum.truncate(order).mul(&qq).mul(&den_inv).shift(pre_exp);
    if ell % 2 == 0 {
        tail = tail.neg();
    }
    Ok(TruncatedSeries::one(G, order.min(tail.order())).add(&tail))
}

/// Left-hand side of the odd-basis truncation:
/// `sum_{j=-l}^{l-1} (-1)^j q^((k+1/2)j^2 + (k-i-1/2)j) / den`.
pub fn ag_lhs(k: i64, i: i64, ell: i64, order: i64) -> Result<TruncatedSeries> {
    validate_odd_params(k, i, ell)?;
    let theta = theta_partial_sum(
        &ThetaSumSpec::finite(ExponentLaw::OddBasis { k, i }, -ell, ell - 1),
        order,
    )?;
    Ok(theta.mul(&ag_product_den(k, i, order)?.invert()?))
}

/// The (k-1)-fold Andrews-Gordon multisum
/// `sum q^(N_1^2+...+N_(k-1)^2 + N_i+...+N_(k-1)) / prod (q)_(n_j)`
/// for modulus `2k+1`, `1 <= i <= k`.
pub fn agb_multisum(k: i64, i: i64, order: i64) -> Result<TruncatedSeries> {
    if k < 1 || i < 1 || i > k {
        return Err(Error::InvalidParameter(format!(
            "andrews-gordon multisum needs k >= 1, 1 <= i <= k; got k={k} i={i}"
        )));
    }
    let vars = (k - 1) as usize;
    if vars == 0 {
        return Ok(TruncatedSeries::one(G, order));
    }
    let mut memo = PochMemo::new(order);
    let mut acc = TruncatedSeries::zero(G, order);
    let mut top = 0;
    while (top + 1) * (top + 1) <= order {
        top += 1;
    }
    for_chains(vars, top, 0, &mut |ns| {
        let sq: i64 = ns.iter().map(|&x| x * x).sum();
        let tail: i64 = ns[(i - 1) as usize..].iter().sum();
        let e = sq + tail;
        if e > order {
            return;
        }
        let mut t = TruncatedSeries::monomial(G, order, e, BigInt::one());
        for w in 0..vars {
            let diff = if w + 1 < vars { ns[w] - ns[w + 1] } else { ns[w] };
            t = t.mul(&memo.inv_poch(Sign::Plus, 1, 1, diff as u32));
        }
        acc = acc.add(&t);
    });
    Ok(acc)
}

/// The Andrews-Gordon product `(q^i, q^(2k+1-i), q^(2k+1); q^(2k+1))_inf / (q)_inf`.
pub fn agb_product(k: i64, i: i64, order: i64) -> Result<TruncatedSeries> {
    if k < 1 || i < 1 || i > k {
        return Err(Error::InvalidParameter(format!(
            "andrews-gordon product needs 1 <= i <= k; got k={k} i={i}"
        )));
    }
    let num = triple_product_allow_zero([i, 2 * k + 1 - i, 2 * k + 1], 2 * k + 1, order)?;
    let qq_inv = pochhammer(&PochhammerSpec::infinite(Sign::Plus, 1, 1), G, order)?.invert()?;
    Ok(num.mul(&qq_inv))
}

/// Doubled Abel value of an alternating outer sum: for each tail tuple the
/// inner sum over the leading index is accumulated to `M = order + second + 2`
/// and returned as `S_M + S_(M+1)`. The inner sum depends on the tail only
/// through its leading entry, so it is computed once per value.
struct AbelInner {
    per_second: HashMap<i64, TruncatedSeries>,
}

impl AbelInner {
    fn new() -> Self {
        AbelInner {
            per_second: HashMap::new(),
        }
    }

    /// term(m1, second) must be the full inner term at leading index m1.
    fn get(
        &mut self,
        second: i64,
        order: i64,
        term: &mut impl FnMut(i64) -> TruncatedSeries,
    ) -> TruncatedSeries {
        if let Some(s) = self.per_second.get(&second) {
            return s.clone();
        }
        let cutoff = order + second + 2;
        let mut partial = TruncatedSeries::zero(G, order);
        let mut doubled = TruncatedSeries::zero(G, order);
        for m1 in second..=cutoff + 1 {
            partial = partial.add(&term(m1));
            if m1 >= cutoff {
                doubled = doubled.add(&partial);
            }
        }
        self.per_second.insert(second, doubled.clone());
        doubled
    }
}

fn validate_even_params(k: i64, i: i64, ell: i64) -> Result<()> {
    if k < 2 || i < 1 || i > k - 1 || ell < 1 {
        return Err(Error::InvalidParameter(format!(
            "even-basis multisum needs k >= 2, 1 <= i <= k-1, l >= 1; got k={k} i={i} l={ell}"
        )));
    }
    Ok(())
}

/// Doubled Abel value of the even-basis inner multisum over
/// `N_1 >= ... >= N_k >= 0` of
/// `(-1)^(N_1) (q,-q;q)_(N_1+l-1) q^(2l(N_2+..+N_k) + N_2^2+..+N_k^2 - N_2-..-N_i)`
/// over `(q)_(n_1)...(q)_(n_k)(q)_(n_k+2l-1)`.
pub fn even_multisum_sum_doubled(k: i64, i: i64, ell: i64, order: i64) -> Result<TruncatedSeries> {
    validate_even_params(k, i, ell)?;
    let mut memo = PochMemo::new(order);
    // (q,-q;q)_m = (q^2;q^2)_m, built incrementally
    let mut evenpoch: Vec<TruncatedSeries> = vec![TruncatedSeries::one(G, order)];
    let need_evenpoch = |m: i64, evenpoch: &mut Vec<TruncatedSeries>| -> TruncatedSeries {
        while (evenpoch.len() as i64) <= m {
            let last = evenpoch.last().unwrap();
            let j = evenpoch.len() as i64;
            let next = if 2 * j <= order {
                last.mul_one_minus(1, 2 * j)
            } else {
                last.clone()
            };
            evenpoch.push(next);
        }
        evenpoch[m as usize].clone()
    };

    let mut inner = AbelInner::new();
    let mut acc = TruncatedSeries::zero(G, order);
    let vars = (k - 1) as usize;
    let mut top = 0;
    while 2 * ell * (top + 1) + (top + 1) * (top + 1) - (top + 1) <= order {
        top += 1;
    }
    let mut tails: Vec<(Vec<i64>, i64)> = Vec::new();
    for_chains(vars, top, 0, &mut |ns| {
        let sq: i64 = ns.iter().map(|&x| x * x).sum();
        let total: i64 = ns.iter().sum();
        let head: i64 = ns[..(i - 1) as usize].iter().sum();
        let e = 2 * ell * total + sq - head;
        if e <= order {
            tails.push((ns.to_vec(), e));
        }
    });
    for (ns, e) in tails {
        let second = *ns.first().unwrap_or(&0);
        // tail part: q^e / ((q)_{n_2}...(q)_{n_k}(q)_{n_k+2l-1}) with
        // n_j = N_j - N_{j+1}
        let mut tail_part = TruncatedSeries::monomial(G, order, e, BigInt::one());
        for w in 0..vars {
            let diff = if w + 1 < vars { ns[w] - ns[w + 1] } else { ns[w] };
            tail_part = tail_part.mul(&memo.inv_poch(Sign::Plus, 1, 1, diff as u32));
        }
        let nk = *ns.last().unwrap_or(&0);
        tail_part = tail_part.mul(&memo.inv_poch(Sign::Plus, 1, 1, (nk + 2 * ell - 1) as u32));
        // inner alternating sum over N_1 >= second
        let inner_sum = inner.get(second, order, &mut |m1| {
            let mut t = need_evenpoch((m1 + ell - 1).min(order), &mut evenpoch);
            t = t.mul(&memo.inv_poch(Sign::Plus, 1, 1, (m1 - second) as u32));
            if m1.rem_euclid(2) == 1 {
                t = t.neg();
            }
            t
        });
        acc = acc.add(&tail_part.mul(&inner_sum));
    }
    Ok(acc)
}

/// Right-hand side of the even-basis truncation, with the display's factor 2
/// realized by the doubled Abel value:
/// `1 + (-1)^(l-1) q^(k l^2 - i l) / (q^(k-i), q^(k+i), q^(2k); q^(2k))_inf * T`.
pub fn even_multisum_rhs(k: i64, i: i64, ell: i64, order: i64) -> Result<TruncatedSeries> {
    validate_even_params(k, i, ell)?;
    let pre_exp = k * ell * ell - i * ell;
    let t = even_multisum_sum_doubled(k, i, ell, order)?;
    let den_inv = triple_product_allow_zero([k - i, k + i, 2 * k], 2 * k, order)?.invert()?;
    let mut tail = t.mul(&den_inv).shift(pre_exp).truncate(order);
    if ell % 2 == 0 {
        tail = tail.neg();
    }
    Ok(TruncatedSeries::one(G, order).add(&tail))
}

/// Left-hand side of the even-basis truncation.
pub fn even_lhs(k: i64, i: i64, ell: i64, order: i64) -> Result<TruncatedSeries> {
    validate_even_params(k, i, ell)?;
    let theta = theta_partial_sum(
        &ThetaSumSpec::finite(ExponentLaw::EvenBasis { k, i }, -ell + 1, ell - 1),
        order,
    )?;
    let den_inv = triple_product_allow_zero([k - i, k + i, 2 * k], 2 * k, order)?.invert()?;
    Ok(theta.mul(&den_inv))
}

/// Doubled Abel value of the even-basis corollary multisum over
/// `m_1 >= ... >= m_k >= 1`. The identity it satisfies is
/// `2*S = (q^(k-i), q^(k+i), q^(2k); q^(2k))_inf - 1`.
pub fn cor33_multisum_doubled(k: i64, i: i64, order: i64) -> Result<TruncatedSeries> {
    if k < 1 || i < 1 || i > k {
        return Err(Error::InvalidParameter(format!(
            "corollary multisum needs k >= 1, 1 <= i <= k; got k={k} i={i}"
        )));
    }
    let mut memo = PochMemo::new(order);
    let mut evenpoch: Vec<TruncatedSeries> = vec![TruncatedSeries::one(G, order)];
    let need_evenpoch = |m: i64, evenpoch: &mut Vec<TruncatedSeries>| -> TruncatedSeries {
        while (evenpoch.len() as i64) <= m {
            let j = evenpoch.len() as i64;
            let last = evenpoch.last().unwrap();
            let next = if 2 * j <= order {
                last.mul_one_minus(1, 2 * j)
            } else {
                last.clone()
            };
            evenpoch.push(next);
        }
        evenpoch[m as usize].clone()
    };
    let mut inner = AbelInner::new();
    let mut acc = TruncatedSeries::zero(G, order);
    let vars = (k - 1) as usize;
    let mut top = 1;
    while (top + 1) * (top + 1) - (top + 1) <= order {
        top += 1;
    }
    let mut tails: Vec<(Vec<i64>, i64)> = Vec::new();
    for_chains(vars, top, 1, &mut |ms| {
        let sq: i64 = ms.iter().map(|&x| x * x).sum();
        let head: i64 = ms[..(i - 1).min(vars as i64) as usize].iter().sum();
        let e = sq - head;
        if e <= order {
            tails.push((ms.to_vec(), e));
        }
    });
    for (ms, e) in tails {
        let second = *ms.first().unwrap_or(&1);
        let mut tail_part = TruncatedSeries::monomial(G, order, e, BigInt::one());
        for w in 0..vars.saturating_sub(1) {
            let diff = ms[w] - ms[w + 1];
            tail_part = tail_part.mul(&memo.inv_poch(Sign::Plus, 1, 1, diff as u32));
        }
        let mk = *ms.last().unwrap_or(&1);
        if vars > 0 {
            tail_part = tail_part.mul(&memo.inv_poch(Sign::Plus, 1, 1, mk as u32));
            tail_part = tail_part.mul(&memo.inv_poch(Sign::Plus, 1, 1, (mk - 1) as u32));
        }
        let inner_sum = inner.get(second, order, &mut |m1| {
            let mut t = need_evenpoch((m1 - 1).min(order), &mut evenpoch);
            if vars > 0 {
                t = t.mul(&memo.inv_poch(Sign::Plus, 1, 1, (m1 - second) as u32));
            } else {
                // k = 1: the only variable carries its own denominators
                t = t.mul(&memo.inv_poch(Sign::Plus, 1, 1, m1 as u32));
                t = t.mul(&memo.inv_poch(Sign::Plus, 1, 1, (m1 - 1) as u32));
            }
            if m1.rem_euclid(2) == 1 {
                t = t.neg();
            }
            t
        });
        acc = acc.add(&tail_part.mul(&inner_sum));
    }
    Ok(acc)
}

/// The Bressoud even-basis multisum over `m_1 >= ... >= m_(k-1) >= 0` of
/// `q^(m_1^2+..+m_(k-1)^2 + m_i+..+m_(k-1))` over
/// `(q)_(m_1-m_2)...(q)_(m_(k-2)-m_(k-1)) (q^2;q^2)_(m_(k-1))`, `k >= 2`.
pub fn bressoud_multisum(k: i64, i: i64, order: i64) -> Result<TruncatedSeries> {
    if k < 2 || i < 1 || i > k {
        return Err(Error::InvalidParameter(format!(
            "bressoud multisum needs k >= 2, 1 <= i <= k; got k={k} i={i}"
        )));
    }
    let vars = (k - 1) as usize;
    let mut memo = PochMemo::new(order);
    let mut acc = TruncatedSeries::zero(G, order);
    let mut top = 0;
    while (top + 1) * (top + 1) <= order {
        top += 1;
    }
    for_chains(vars, top, 0, &mut |ms| {
        let sq: i64 = ms.iter().map(|&x| x * x).sum();
        let tail: i64 = ms[((i - 1) as usize).min(vars)..].iter().sum();
        let e = sq + tail;
        if e > order {
            return;
        }
        let mut t = TruncatedSeries::monomial(G, order, e, BigInt::one());
        for w in 0..vars - 1 {
            t = t.mul(&memo.inv_poch(Sign::Plus, 1, 1, (ms[w] - ms[w + 1]) as u32));
        }
        t = t.mul(&memo.inv_poch(Sign::Plus, 2, 2, ms[vars - 1] as u32));
        acc = acc.add(&t);
    });
    Ok(acc)
}

/// `(q^i, q^(2k-i), q^(2k); q^(2k))_inf / (q)_inf`, the Bressoud product.
pub fn bressoud_product(k: i64, i: i64, order: i64) -> Result<TruncatedSeries> {
    let num = triple_product_allow_zero([i, 2 * k - i, 2 * k], 2 * k, order)?;
    let qq_inv = pochhammer(&PochhammerSpec::infinite(Sign::Plus, 1, 1), G, order)?.invert()?;
    Ok(num.mul(&qq_inv))
}

fn need_positive(ell: i64, what: &str) -> Result<()> {
    if ell < 1 {
        return Err(Error::InvalidParameter(format!("{what} needs a positive parameter, got {ell}")));
    }
    Ok(())
}

/// Single-sum right-hand sides keyed by registry id.
pub fn single_sum_rhs(id: &str, k: i64, ell: i64, i: i64, order: i64) -> Result<TruncatedSeries> {
    match id {
        "thm-1.3" => thm13_rhs(ell, order),
        "thm-1.4" => thm14_rhs(ell, order),
        "thm-1.5" => thm15_rhs(ell, order),
        "thm-4.5" => thm45_rhs(ell, order),
        "eq-1.3" => eq13_rhs(k, order),
        "eq-1.9" => eq19_rhs(k, order),
        "eq-1.10" => eq110_rhs(k, order),
        "eq-1.12" => eq112_rhs(k, order),
        "eq-1.13" => eq113_rhs(k, order),
        "xyz-display" => xyz_rhs(k, order),
        "shanks" => shanks_rhs(k, order),
        "cor-3.3" => {
            // true right side for the doubled multisum: product - 1
            let p = triple_product_allow_zero([k - i, k + i, 2 * k], 2 * k, order)?;
            Ok(p.sub(&TruncatedSeries::one(G, order)))
        }
        "bressoud-even" => bressoud_product(k, i, order),
        _ => Err(Error::UnknownId(id.to_string())),
    }
}

/// `1 + (-1)^(l-1) sum_n q^((2l+1)n + n^2 + (3l^2+l)/2) (1-q^l) /
/// ((q)_n (q)_(n+2l) (1-q^(n+l)))`.
pub fn thm13_rhs(ell: i64, order: i64) -> Result<TruncatedSeries> {
    need_positive(ell, "thm-1.3")?;
    let mut memo = PochMemo::new(order);
    let mut acc = TruncatedSeries::one(G, order);
    let sgn = ell % 2 == 1;
    for n in 0.. {
        let e = (2 * ell + 1) * n + n * n + (3 * ell * ell + ell) / 2;
        if e > order {
            break;
        }
        let mut t = TruncatedSeries::monomial(G, order, e, BigInt::one());
        t = t.mul(&memo.inv_poch(Sign::Plus, 1, 1, n as u32));
        t = t.mul(&memo.inv_poch(Sign::Plus, 1, 1, (n + 2 * ell) as u32));
        if n > 0 {
            t = t.mul_one_minus(1, ell);
            t = t.mul(&memo.inv_poch(Sign::Plus, n + ell, 1, 1));
        }
        acc = if sgn { acc.add(&t) } else { acc.sub(&t) };
    }
    Ok(acc)
}

/// `1 + (-1)^(l-1) sum_n (-q;q^2)_(n+l) q^(2ln + n^2 + 2l^2 - l) (1-q^(2l)) /
/// ((q^2;q^2)_n (q^2;q^2)_(n+2l) (1-q^(2n+2l)))`.
pub fn thm14_rhs(ell: i64, order: i64) -> Result<TruncatedSeries> {
    need_positive(ell, "thm-1.4")?;
    let mut memo = PochMemo::new(order);
    let mut acc = TruncatedSeries::one(G, order);
    let sgn = ell % 2 == 1;
    for n in 0.. {
        let e = 2 * ell * n + n * n + 2 * ell * ell - ell;
        if e > order {
            break;
        }
        let mut t = TruncatedSeries::monomial(G, order, e, BigInt::one());
        t = t.mul(&pochhammer(
            &PochhammerSpec::finite(Sign::Minus, 1, 2, (n + ell) as u32),
            G,
            order,
        )?);
        t = t.mul(&memo.inv_poch(Sign::Plus, 2, 2, n as u32));
        t = t.mul(&memo.inv_poch(Sign::Plus, 2, 2, (n + 2 * ell) as u32));
        if n > 0 {
            t = t.mul_one_minus(1, 2 * ell);
            t = t.mul(&memo.inv_poch(Sign::Plus, 2 * n + 2 * ell, 1, 1));
        }
        acc = if sgn { acc.add(&t) } else { acc.sub(&t) };
    }
    Ok(acc)
}

/// `1 + (-1)^(l-1) sum_n (-q)_(n+l) q^(ln + n(n+1)/2 + l^2) (1-q^l) /
/// ((q)_n (q)_(n+2l) (1-q^(n+l)))`.
pub fn thm15_rhs(ell: i64, order: i64) -> Result<TruncatedSeries> {
    need_positive(ell, "thm-1.5")?;
    let mut memo = PochMemo::new(order);
    let mut acc = TruncatedSeries::one(G, order);
    let sgn = ell % 2 == 1;
    for n in 0.. {
        let e = ell * n + n * (n + 1) / 2 + ell * ell;
        if e > order {
            break;
        }
        let mut t = TruncatedSeries::monomial(G, order, e, BigInt::one());
        t = t.mul(&pochhammer(
            &PochhammerSpec::finite(Sign::Minus, 1, 1, (n + ell) as u32),
            G,
            order,
        )?);
        t = t.mul(&memo.inv_poch(Sign::Plus, 1, 1, n as u32));
        t = t.mul(&memo.inv_poch(Sign::Plus, 1, 1, (n + 2 * ell) as u32));
        if n > 0 {
            t = t.mul_one_minus(1, ell);
            t = t.mul(&memo.inv_poch(Sign::Plus, n + ell, 1, 1));
        }
        acc = if sgn { acc.add(&t) } else { acc.sub(&t) };
    }
    Ok(acc)
}

/// `1 + (-1)^(l-1) q^(l^2) (-q)_l / (q)_(l-1) *
/// sum_n ((-q^(n+l+1))_inf / (q^(n+l+1))_inf) q^(ln)`.
pub fn thm45_rhs(ell: i64, order: i64) -> Result<TruncatedSeries> {
    need_positive(ell, "thm-4.5")?;
    let mut memo = PochMemo::new(order);
    let mut sum = TruncatedSeries::zero(G, order);
    for n in 0.. {
        let e = ell * ell + ell * n;
        if e > order {
            break;
        }
        let mut t = TruncatedSeries::monomial(G, order, e, BigInt::one());
        t = t.mul(&poch_monomial_inf(Monomial::negative(n + ell + 1), G, order)?);
        t = t.mul(&poch_monomial_inf(Monomial::positive(n + ell + 1), G, order)?.invert()?);
        sum = sum.add(&t);
    }
    let mut pre = pochhammer(&PochhammerSpec::finite(Sign::Minus, 1, 1, ell as u32), G, order)?;
    pre = pre.mul(&memo.inv_poch(Sign::Plus, 1, 1, (ell - 1) as u32));
    let mut tail = pre.mul(&sum);
    if ell % 2 == 0 {
        tail = tail.neg();
    }
    Ok(TruncatedSeries::one(G, order).add(&tail))
}

/// `1 + (-1)^(k-1) sum_(n>=1) q^(C(k,2) + (k+1)n) / (q)_n * [n-1, k-1]`.
pub fn eq13_rhs(k: i64, order: i64) -> Result<TruncatedSeries> {
    need_positive(k, "eq-1.3")?;
    let mut memo = PochMemo::new(order);
    let mut acc = TruncatedSeries::one(G, order);
    let sgn = k % 2 == 1;
    for n in 1.. {
        let e = k * (k - 1) / 2 + (k + 1) * n;
        if e > order {
            break;
        }
        if n < k {
            continue; // the gaussian binomial vanishes
        }
        let mut t = TruncatedSeries::monomial(G, order, e, BigInt::one());
        t = t.mul(&memo.inv_poch(Sign::Plus, 1, 1, n as u32));
        t = t.mul(&crate::pochhammer::gauss_binomial(n - 1, k - 1, 1, order));
        acc = if sgn { acc.add(&t) } else { acc.sub(&t) };
    }
    Ok(acc)
}

/// The finite Shanks sum `sum_(n=0)^(k-1) (-1)^n (q)_k q^(C(n,2) + (k+1)n) / (q)_n`.
pub fn shanks_rhs(k: i64, order: i64) -> Result<TruncatedSeries> {
    need_positive(k, "shanks")?;
    let mut memo = PochMemo::new(order);
    let qk = pochhammer(&PochhammerSpec::finite(Sign::Plus, 1, 1, k as u32), G, order)?;
    let mut acc = TruncatedSeries::zero(G, order);
    for n in 0..k {
        let e = n * (n - 1) / 2 + (k + 1) * n;
        if e > order {
            break;
        }
        let mut t = TruncatedSeries::monomial(G, order, e, sign_of(n));
        t = t.mul(&qk);
        t = t.mul(&memo.inv_poch(Sign::Plus, 1, 1, n as u32));
        acc = acc.add(&t);
    }
    Ok(acc)
}

/// `1 + (-1)^(k-1) sum_(n>=k) (-q;q^2)_k (-q;q^2)_(n-k) q^(2(k+1)n - k) /
/// (q^2;q^2)_n * [n-1, k-1]_(q^2)`.
pub fn eq19_rhs(k: i64, order: i64) -> Result<TruncatedSeries> {
    need_positive(k, "eq-1.9")?;
    let mut memo = PochMemo::new(order);
    let ck = pochhammer(&PochhammerSpec::finite(Sign::Minus, 1, 2, k as u32), G, order)?;
    let mut acc = TruncatedSeries::one(G, order);
    let sgn = k % 2 == 1;
    for n in k.. {
        let e = 2 * (k + 1) * n - k;
        if e > order {
            break;
        }
        let mut t = TruncatedSeries::monomial(G, order, e, BigInt::one());
        t = t.mul(&ck);
        t = t.mul(&pochhammer(
            &PochhammerSpec::finite(Sign::Minus, 1, 2, (n - k) as u32),
            G,
            order,
        )?);
        t = t.mul(&memo.inv_poch(Sign::Plus, 2, 2, n as u32));
        t = t.mul(&crate::pochhammer::gauss_binomial(n - 1, k - 1, 2, order));
        acc = if sgn { acc.add(&t) } else { acc.sub(&t) };
    }
    Ok(acc)
}

/// `1 + (-1)^k sum_(n>=k+1) (-q)_k (-1;q)_(n-k) q^((k+1)n) / (q)_n * [n-1, k]`.
pub fn eq110_rhs(k: i64, order: i64) -> Result<TruncatedSeries> {
    need_positive(k, "eq-1.10")?;
    let mut memo = PochMemo::new(order);
    let ck = pochhammer(&PochhammerSpec::finite(Sign::Minus, 1, 1, k as u32), G, order)?;
    let mut acc = TruncatedSeries::one(G, order);
    let sgn = k % 2 == 0;
    for n in (k + 1).. {
        let e = (k + 1) * n;
        if e > order {
            break;
        }
        let mut t = TruncatedSeries::monomial(G, order, e, BigInt::one());
        t = t.mul(&ck);
        t = t.mul(&pochhammer(
            &PochhammerSpec::finite(Sign::Minus, 0, 1, (n - k) as u32),
            G,
            order,
        )?);
        t = t.mul(&memo.inv_poch(Sign::Plus, 1, 1, n as u32));
        t = t.mul(&crate::pochhammer::gauss_binomial(n - 1, k, 1, order));
        acc = if sgn { acc.add(&t) } else { acc.sub(&t) };
    }
    Ok(acc)
}

/// `1 + (-1)^(k-1) (-q;q^2)_k / (q^2;q^2)_(k-1) *
/// sum_(j>=0) q^(k(2j+2k+1)) (-q^(2k+2j+3);q^2)_inf / (q^(2k+2j+2);q^2)_inf`.
pub fn eq112_rhs(k: i64, order: i64) -> Result<TruncatedSeries> {
    need_positive(k, "eq-1.12")?;
    let mut memo = PochMemo::new(order);
    let mut sum = TruncatedSeries::zero(G, order);
    for j in 0.. {
        let e = k * (2 * j + 2 * k + 1);
        if e > order {
            break;
        }
        let mut t = TruncatedSeries::monomial(G, order, e, BigInt::one());
        t = t.mul(&pochhammer(&PochhammerSpec::infinite(Sign::Minus, 2 * k + 2 * j + 3, 2), G, order)?);
        t = t.mul(
            &pochhammer(&PochhammerSpec::infinite(Sign::Plus, 2 * k + 2 * j + 2, 2), G, order)?
                .invert()?,
        );
        sum = sum.add(&t);
    }
    let mut pre = pochhammer(&PochhammerSpec::finite(Sign::Minus, 1, 2, k as u32), G, order)?;
    pre = pre.mul(&memo.inv_poch(Sign::Plus, 2, 2, (k - 1) as u32));
    let mut tail = pre.mul(&sum);
    if k % 2 == 0 {
        tail = tail.neg();
    }
    Ok(TruncatedSeries::one(G, order).add(&tail))
}

/// `1 + 2(-1)^k (-q)_k / (q)_k *
/// sum_(j>=0) q^((k+1)(k+j+1)) (-q^(k+j+2))_inf / ((1-q^(k+j+1))(q^(k+j+2))_inf)`.
pub fn eq113_rhs(k: i64, order: i64) -> Result<TruncatedSeries> {
    need_positive(k, "eq-1.13")?;
    let mut memo = PochMemo::new(order);
    let mut sum = TruncatedSeries::zero(G, order);
    for j in 0.. {
        let e = (k + 1) * (k + j + 1);
        if e > order {
            break;
        }
        let mut t = TruncatedSeries::monomial(G, order, e, BigInt::one());
        t = t.mul(&poch_monomial_inf(Monomial::negative(k + j + 2), G, order)?);
        t = t.mul(&memo.inv_poch(Sign::Plus, k + j + 1, 1, 1));
        t = t.mul(&poch_monomial_inf(Monomial::positive(k + j + 2), G, order)?.invert()?);
        sum = sum.add(&t);
    }
    let mut pre = pochhammer(&PochhammerSpec::finite(Sign::Minus, 1, 1, k as u32), G, order)?;
    pre = pre.mul(&memo.inv_poch(Sign::Plus, 1, 1, k as u32));
    let mut tail = pre.mul(&sum).scale(&BigInt::from(2));
    if k % 2 == 1 {
        tail = tail.neg();
    }
    Ok(TruncatedSeries::one(G, order).add(&tail))
}

/// `1 + (-1)^(k-1) (-q)_k / (q)_(k-1) *
/// sum_(j>=0) q^(k(k+1+j)) (-q^(k+2+j))_inf / (q^(k+2+j))_inf`.
pub fn xyz_rhs(k: i64, order: i64) -> Result<TruncatedSeries> {
    need_positive(k, "xyz-display")?;
    let mut memo = PochMemo::new(order);
    let mut sum = TruncatedSeries::zero(G, order);
    for j in 0.. {
        let e = k * (k + 1 + j);
        if e > order {
            break;
        }
        let mut t = TruncatedSeries::monomial(G, order, e, BigInt::one());
        t = t.mul(&poch_monomial_inf(Monomial::negative(k + 2 + j), G, order)?);
        t = t.mul(&poch_monomial_inf(Monomial::positive(k + 2 + j), G, order)?.invert()?);
        sum = sum.add(&t);
    }
    let mut pre = pochhammer(&PochhammerSpec::finite(Sign::Minus, 1, 1, k as u32), G, order)?;
    pre = pre.mul(&memo.inv_poch(Sign::Plus, 1, 1, (k - 1) as u32));
    let mut tail = pre.mul(&sum);
    if k % 2 == 0 {
        tail = tail.neg();
    }
    Ok(TruncatedSeries::one(G, order).add(&tail))
}

/// The left-hand side used by the "squared factors" display:
/// `gf * sum_(n=0)^(k-1) (1-q^(n+1))^2 (-1)^n q^(n^2+n)`.
pub fn xyz_lhs(k: i64, order: i64) -> Result<TruncatedSeries> {
    need_positive(k, "xyz-display")?;
    let mut sum = TruncatedSeries::zero(G, order);
    for n in 0..k {
        let e = n * n + n;
        if e > order {
            break;
        }
        let t = TruncatedSeries::monomial(G, order, e, sign_of(n))
            .mul_one_minus(1, n + 1)
            .mul_one_minus(1, n + 1);
        sum = sum.add(&t);
    }
    Ok(generating_function(PartitionKind::Overpartition, order).mul(&sum))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_terms(s: &TruncatedSeries) -> Vec<(i64, i64)> {
        s.terms()
            .into_iter()
            .map(|(e, c)| (e, i64::try_from(&c).unwrap()))
            .collect()
    }

    #[test]
    fn pentagonal_two_terms() {
        let s = theta_partial_sum(&ThetaSumSpec::finite(ExponentLaw::Pentagonal, -1, 0), 8).unwrap();
        assert_eq!(int_terms(&s), vec![(0, 1), (1, -1)]);
    }

    #[test]
    fn pentagonal_bilateral_to_15() {
        let s = theta_partial_sum(&ThetaSumSpec::bilateral(ExponentLaw::Pentagonal), 15).unwrap();
        assert_eq!(
            int_terms(&s),
            vec![(0, 1), (1, -1), (2, -1), (5, 1), (7, 1), (12, -1), (15, -1)]
        );
    }

    #[test]
    fn square_law_finite() {
        let s = theta_partial_sum(&ThetaSumSpec::finite(ExponentLaw::Square, 0, 2), 8).unwrap();
        assert_eq!(int_terms(&s), vec![(0, 1), (1, -1), (4, 1)]);
    }

    #[test]
    fn jtp_pentagonal_instance() {
        // R=3, S=1 reproduces the bilateral pentagonal sum
        let n = 120;
        let prod = jtp_product(3, 1, n).unwrap();
        let bil = theta_partial_sum(&ThetaSumSpec::bilateral(ExponentLaw::Pentagonal), n).unwrap();
        assert!(prod.first_discrepancy(&bil, n).is_none());
    }

    #[test]
    fn jtp_square_instance() {
        // R=2, S=1 matches the bilateral square-law sum
        let n = 100;
        let prod = jtp_product(2, 1, n).unwrap();
        let bil = theta_partial_sum(&ThetaSumSpec::bilateral(ExponentLaw::Square), n).unwrap();
        assert!(prod.first_discrepancy(&bil, n).is_none());
        // R=4, S=1 matches the bilateral sum of (-1)^j q^(2j^2 - j)
        let prod = jtp_product(4, 1, n).unwrap();
        let bil = theta_partial_sum(
            &ThetaSumSpec::bilateral(ExponentLaw::GeneralJtp { r: 4, s: 1 }),
            n,
        )
        .unwrap();
        assert!(prod.first_discrepancy(&bil, n).is_none());
    }

    #[test]
    fn jtp_rejects_bad_params() {
        assert!(jtp_product(3, 3, 10).is_err());
        assert!(jtp_product(3, 0, 10).is_err());
    }

    #[test]
    fn ag_rhs_matches_lhs_small() {
        for (k, i, ell) in [(1, 0, 1), (1, 1, 1), (2, 1, 1), (2, 2, 2)] {
            let n = 60;
            let lhs = ag_lhs(k, i, ell, n).unwrap();
            let rhs = ag_multisum_rhs(k, i, ell, n).unwrap();
            assert!(
                lhs.first_discrepancy(&rhs, n - 5).is_none(),
                "k={k} i={i} l={ell}"
            );
        }
    }

    #[test]
    fn ag_rhs_at_zero_is_one() {
        for k in 1..=3 {
            for i in 0..=k {
                let r = ag_multisum_rhs(k, i, 0, 40).unwrap();
                assert!(
                    r.sub(&TruncatedSeries::one(Grain::One, 40)).is_zero(),
                    "k={k} i={i}"
                );
            }
        }
    }

    #[test]
    fn ag_degeneration_is_andrews_gordon() {
        // the l=0 inner sum (ratio convention 1 at n_k=0) equals the product
        for k in 1..=3 {
            for i in 0..=k {
                let n = 60;
                let sum = ag_multisum_sum(k, i, 0, n, 0).unwrap();
                let prod = ag_product_den(k, i, n)
                    .unwrap()
                    .mul(
                        &pochhammer(&PochhammerSpec::infinite(Sign::Plus, 1, 1), Grain::One, n)
                            .unwrap()
                            .invert()
                            .unwrap(),
                    );
                assert!(sum.first_discrepancy(&prod, n - 5).is_none(), "k={k} i={i}");
            }
        }
    }

    #[test]
    fn thm13_example_coefficients() {
        // oracle: (pentagonal partial sum for l=1) * partition gf
        let rhs = thm13_rhs(1, 6).unwrap();
        assert_eq!(
            int_terms(&rhs),
            vec![(0, 1), (2, 1), (3, 1), (4, 2), (5, 2), (6, 4)]
        );
    }

    #[test]
    fn even_basis_small() {
        for (k, i, ell) in [(2, 1, 1), (2, 1, 2), (3, 2, 1)] {
            let n = 40;
            let lhs = even_lhs(k, i, ell, n).unwrap();
            let rhs = even_multisum_rhs(k, i, ell, n).unwrap();
            assert!(
                lhs.first_discrepancy(&rhs, n - 5).is_none(),
                "k={k} i={i} l={ell}"
            );
        }
    }

    #[test]
    fn cor33_small() {
        for k in 1..=3 {
            for i in 1..=k {
                let n = 40;
                let doubled = cor33_multisum_doubled(k, i, n).unwrap();
                let rhs = single_sum_rhs("cor-3.3", k, 0, i, n).unwrap();
                assert!(doubled.first_discrepancy(&rhs, n - 5).is_none(), "k={k} i={i}");
            }
        }
    }

    #[test]
    fn pruning_boost_is_lossless() {
        for (k, i, ell) in [(2, 1, 1), (3, 2, 2)] {
            let a = ag_multisum_sum(k, i, ell, 60, 0).unwrap();
            let b = ag_multisum_sum(k, i, ell, 60, 8).unwrap();
            assert!(a.first_discrepancy(&b, 60).is_none(), "k={k} i={i} l={ell}");
        }
    }
}
