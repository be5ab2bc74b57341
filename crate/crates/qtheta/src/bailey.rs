//! Bailey pairs at monomial specializations, the two-chain lattice
//! transformation, its limit forms, and the chain lemmas.
//!
//! Everything here runs at grain 2: exponents are in half-units, so `q`
//! itself has exponent 2, and `a = q^(M/2)` is the monomial with exponent M.
//! Free parameters are never symbolic; the limits appearing in the source
//! displays are represented by the displays' own post-limit forms.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::pochhammer::{poch_monomial, Monomial, Sign};
use crate::series::{Grain, TruncatedSeries};

const G2: Grain = Grain::Two;

/// `q` as a grain-2 monomial.
pub const Q: Monomial = Monomial {
    sign: Sign::Plus,
    exp: 2,
};

/// Which (alpha, beta) family a pair instantiates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairFamily {
    /// The general very-well-poised pair with monomial b, c.
    SixPhiFive { b: Monomial, c: Monomial },
    /// b -> q, c -> (aq)^(1/2): needs a to be an integer power of q.
    PairOne,
    /// b = q, c -> infinity.
    PairTwo,
}

/// A Bailey pair relative to `a` (a monomial in half-unit exponents).
#[derive(Debug, Clone, Copy)]
pub struct BaileyPair {
    pub family: PairFamily,
    pub a: Monomial,
}

/// First failing comparison of a sequence-indexed relation.
#[derive(Debug, Clone)]
pub struct SeqDiscrepancy {
    pub n: u32,
    pub exp: i64,
    pub lhs: BigInt,
    pub rhs: BigInt,
}

fn inv_poch(m: Monomial, n: u32, order: i64) -> Result<TruncatedSeries> {
    let p = poch_monomial(m, n, G2, order)?;
    p.invert().map_err(|_| {
        Error::NonUnitDenominator(format!(
            "({}q^({}/2); q)_{n}",
            if m.sign == Sign::Minus { "-" } else { "" },
            m.exp
        ))
    })
}

fn one_minus(m: Monomial, order: i64) -> TruncatedSeries {
    TruncatedSeries::one(G2, order).sub(&m.to_series(G2, order))
}

fn inv_one_minus(m: Monomial, order: i64) -> Result<TruncatedSeries> {
    one_minus(m, order).invert().map_err(|_| {
        Error::NonUnitDenominator(format!(
            "1 - {}q^({}/2)",
            if m.sign == Sign::Minus { "-" } else { "" },
            m.exp
        ))
    })
}

impl BaileyPair {
    pub fn six_phi_five(a: Monomial, b: Monomial, c: Monomial) -> Self {
        BaileyPair {
            family: PairFamily::SixPhiFive { b, c },
            a,
        }
    }

    pub fn pair_one(a: Monomial) -> Result<Self> {
        if a.sign != Sign::Plus || a.exp % 2 != 0 {
            return Err(Error::InvalidParameter(
                "pair one needs a = q^m with integer m (square root must stay in grain 2)".into(),
            ));
        }
        Ok(BaileyPair {
            family: PairFamily::PairOne,
            a,
        })
    }

    pub fn pair_two(a: Monomial) -> Self {
        BaileyPair {
            family: PairFamily::PairTwo,
            a,
        }
    }

    /// `(1 - a q^(2n)) / (1 - a)` as a series.
    fn wp_ratio(&self, n: u32, order: i64) -> Result<TruncatedSeries> {
        let num = one_minus(self.a.mul(Q.pow(2 * n as i64)), order);
        Ok(num.mul(&inv_one_minus(self.a, order)?))
    }

    /// alpha_n at the requested half-unit order.
    pub fn alpha(&self, n: u32, order: i64) -> Result<TruncatedSeries> {
        let a = self.a;
        let n64 = n as i64;
        match self.family {
            PairFamily::PairTwo => {
                // (1-aq^{2n})/(1-a) a^n q^{n^2-n}
                let m = a.pow(n64).mul(Q.pow(n64 * n64 - n64));
                Ok(self.wp_ratio(n, order)?.mul(&m.to_series(G2, order)))
            }
            PairFamily::PairOne => {
                // (1-aq^{2n})/(1-a) (-1)^n q^C(n,2) (a^(1/2) q^(-1/2))^n
                let half = Monomial::positive(a.exp / 2 - 1);
                let mut m = half.pow(n64).mul(Q.pow(n64 * (n64 - 1) / 2));
                if n64 % 2 == 1 {
                    m.sign = m.sign.mul(Sign::Minus);
                }
                Ok(self.wp_ratio(n, order)?.mul(&m.to_series(G2, order)))
            }
            PairFamily::SixPhiFive { b, c } => {
                // (1-aq^{2n})/(1-a) (-1)^n q^C(n,2) (a)_n(b)_n(c)_n
                //   / ((q)_n (aq/b)_n (aq/c)_n) * (aq/bc)^n
                let aq_b = a.mul(Q).mul(b.inv());
                let aq_c = a.mul(Q).mul(c.inv());
                let aq_bc = aq_b.mul(c.inv());
                let mut m = aq_bc.pow(n64).mul(Q.pow(n64 * (n64 - 1) / 2));
                if n64 % 2 == 1 {
                    m.sign = m.sign.mul(Sign::Minus);
                }
                let mut t = self.wp_ratio(n, order)?;
                for f in [a, b, c] {
                    t = t.mul(&poch_monomial(f, n, G2, order)?);
                }
                t = t.mul(&inv_poch(Q, n, order)?);
                t = t.mul(&inv_poch(aq_b, n, order)?);
                t = t.mul(&inv_poch(aq_c, n, order)?);
                Ok(t.mul(&m.to_series(G2, order)))
            }
        }
    }

    /// beta_n at the requested half-unit order.
    pub fn beta(&self, n: u32, order: i64) -> Result<TruncatedSeries> {
        let a = self.a;
        match self.family {
            PairFamily::PairTwo => {
                // 1 / ((q, a; q)_n)
                Ok(inv_poch(Q, n, order)?.mul(&inv_poch(a, n, order)?))
            }
            PairFamily::PairOne => {
                // (a^(1/2) q^(-1/2); q)_n / ((q, a, a^(1/2) q^(1/2); q)_n)
                let lo = Monomial::positive(a.exp / 2 - 1);
                let hi = Monomial::positive(a.exp / 2 + 1);
                let mut t = poch_monomial(lo, n, G2, order)?;
                t = t.mul(&inv_poch(Q, n, order)?);
                t = t.mul(&inv_poch(a, n, order)?);
                t = t.mul(&inv_poch(hi, n, order)?);
                Ok(t)
            }
            PairFamily::SixPhiFive { b, c } => {
                // (aq/bc; q)_n / ((q, aq/b, aq/c; q)_n)
                let aq_b = a.mul(Q).mul(b.inv());
                let aq_c = a.mul(Q).mul(c.inv());
                let aq_bc = aq_b.mul(c.inv());
                let mut t = poch_monomial(aq_bc, n, G2, order)?;
                t = t.mul(&inv_poch(Q, n, order)?);
                t = t.mul(&inv_poch(aq_b, n, order)?);
                t = t.mul(&inv_poch(aq_c, n, order)?);
                Ok(t)
            }
        }
    }
}

/// Check `beta_n = sum_j alpha_j / ((q)_(n-j) (aq)_(n+j))` for all
/// `n <= n_max`, comparing coefficients up to `order` half-units minus a
/// safety margin for the Laurent bookkeeping of the inverses.
pub fn verify_bailey_relation(
    pair: &BaileyPair,
    n_max: u32,
    order: i64,
) -> Result<Option<SeqDiscrepancy>> {
    let aq = pair.a.mul(Q);
    for n in 0..=n_max {
        let mut conv = TruncatedSeries::zero(G2, order);
        for j in 0..=n {
            let mut t = pair.alpha(j, order)?;
            t = t.mul(&inv_poch(Q, n - j, order)?);
            t = t.mul(&inv_poch(aq, n + j, order)?);
            conv = conv.add(&t);
        }
        let beta = pair.beta(n, order)?;
        let upto = beta.order().min(conv.order());
        if let Some((exp, lhs, rhs)) = beta.first_discrepancy(&conv, upto) {
            return Ok(Some(SeqDiscrepancy { n, exp, lhs, rhs }));
        }
    }
    Ok(None)
}

/// Finite lattice instance: `n >= m_1 >= ... >= m_k >= 0` with monomial
/// specializations for every rho_s, sigma_s, and `0 <= i <= k`.
#[derive(Debug, Clone)]
pub struct LatticeCase {
    pub k: usize,
    pub i: usize,
    pub n: u32,
    pub rho: Vec<Monomial>,
    pub sigma: Vec<Monomial>,
    pub a: Monomial,
}

impl LatticeCase {
    fn validate(&self) -> Result<()> {
        if self.k < 1 || self.i > self.k {
            return Err(Error::InvalidParameter(format!(
                "lattice needs k >= 1 and 0 <= i <= k, got k={} i={}",
                self.k, self.i
            )));
        }
        if self.rho.len() != self.k || self.sigma.len() != self.k {
            return Err(Error::InvalidParameter(
                "lattice needs one rho and one sigma per level".into(),
            ));
        }
        if self.a.sign == Sign::Plus && self.a.exp == 0 {
            return Err(Error::NonUnitDenominator("a = 1".into()));
        }
        Ok(())
    }

    fn boost(&self) -> i64 {
        let spread: i64 = self
            .rho
            .iter()
            .zip(&self.sigma)
            .map(|(r, s)| r.exp.abs() + s.exp.abs())
            .sum();
        spread * (self.n as i64 + 1) + self.a.exp.abs() * self.k as i64 * (self.n as i64 + 1) + 8
    }
}

/// Evaluate both sides of the lattice identity exactly at `order` half-units.
pub fn lattice_sides(
    case: &LatticeCase,
    pair: &BaileyPair,
    order: i64,
) -> Result<(TruncatedSeries, TruncatedSeries)> {
    case.validate()?;
    let inner = order + case.boost();
    let lhs = lattice_lhs(case, pair, order, inner)?;
    let rhs = lattice_rhs(case, pair, order, inner)?;
    Ok((lhs, rhs))
}

/// Shift a term by `exp` half-units and clamp it to `order`; None when the
/// whole term lives above the cutoff.
fn shift_clamp(t: TruncatedSeries, sign: Sign, exp: i64, order: i64) -> Option<TruncatedSeries> {
    let t = if sign == Sign::Minus { t.neg() } else { t };
    let t = t.shift(exp);
    if t.min_exp() > order {
        return None;
    }
    assert!(
        t.order() >= order,
        "internal working order too small: {} < {}",
        t.order(),
        order
    );
    Some(t.truncate(order))
}

/// All nonincreasing tuples of length `k` with entries in `[0, top]`.
fn bounded_chains(k: usize, top: i64) -> Vec<Vec<i64>> {
    fn rec(rest: usize, prev: i64, buf: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if rest == 0 {
            out.push(buf.clone());
            return;
        }
        for v in (0..=prev).rev() {
            buf.push(v);
            rec(rest - 1, v, buf, out);
            buf.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, top, &mut Vec::with_capacity(k), &mut out);
    out
}

fn lattice_lhs(
    case: &LatticeCase,
    pair: &BaileyPair,
    order: i64,
    inner: i64,
) -> Result<TruncatedSeries> {
    let (k, i, n, a) = (case.k, case.i, case.n as i64, case.a);
    let aq = a.mul(Q);
    let mut acc = TruncatedSeries::zero(G2, order);
    for ms in bounded_chains(k, n) {
        let mut chain = Vec::with_capacity(k + 1);
        chain.push(n);
        chain.extend(&ms);
        let mut t = TruncatedSeries::one(G2, inner);
        for s in 1..=k {
            let m_s = ms[s - 1] as u32;
            t = t.mul(&poch_monomial(case.rho[s - 1], m_s, G2, inner)?);
            t = t.mul(&poch_monomial(case.sigma[s - 1], m_s, G2, inner)?);
            t = t.mul(&inv_poch(Q, (chain[s - 1] - chain[s]) as u32, inner)?);
        }
        for s in 1..=i {
            let rs = case.rho[s - 1].mul(case.sigma[s - 1]);
            let diff = (chain[s - 1] - chain[s]) as u32;
            let sub = chain[s - 1] as u32;
            t = t.mul(&poch_monomial(a.mul(rs.inv()), diff, G2, inner)?);
            t = t.mul(&inv_poch(a.mul(case.rho[s - 1].inv()), sub, inner)?);
            t = t.mul(&inv_poch(a.mul(case.sigma[s - 1].inv()), sub, inner)?);
        }
        for s in (i + 1)..=k {
            let rs = case.rho[s - 1].mul(case.sigma[s - 1]);
            let diff = (chain[s - 1] - chain[s]) as u32;
            let sub = chain[s - 1] as u32;
            t = t.mul(&poch_monomial(aq.mul(rs.inv()), diff, G2, inner)?);
            t = t.mul(&inv_poch(aq.mul(case.rho[s - 1].inv()), sub, inner)?);
            t = t.mul(&inv_poch(aq.mul(case.sigma[s - 1].inv()), sub, inner)?);
        }
        let total: i64 = ms.iter().sum();
        let tail: i64 = ms[i..].iter().sum();
        let mut mono = a.pow(total).mul(Q.pow(tail));
        for s in 1..=k {
            let rs = case.rho[s - 1].mul(case.sigma[s - 1]);
            mono = mono.mul(rs.pow(ms[s - 1]).inv());
        }
        t = t.mul(&pair.beta(ms[k - 1] as u32, inner)?);
        if let Some(term) = shift_clamp(t, mono.sign, mono.exp, order) {
            acc = acc.add(&term);
        }
    }
    Ok(acc)
}

fn lattice_rhs(
    case: &LatticeCase,
    pair: &BaileyPair,
    order: i64,
    inner: i64,
) -> Result<TruncatedSeries> {
    let (k, i, n, a) = (case.k, case.i, case.n as i64, case.a);
    let aq = a.mul(Q);
    let alpha0 = pair.alpha(0, inner)?;
    let mut acc = {
        let t = alpha0
            .mul(&inv_poch(Q, n as u32, inner)?)
            .mul(&inv_poch(a, n as u32, inner)?);
        shift_clamp(t, Sign::Plus, 0, order).unwrap_or_else(|| TruncatedSeries::zero(G2, order))
    };
    let one_minus_a = one_minus(a, inner);
    for t_idx in 1..=n {
        let mut f = one_minus_a.clone();
        let mut mono = a.pow(i as i64 * t_idx);
        for s in 1..=i {
            f = f.mul(&poch_monomial(case.rho[s - 1], t_idx as u32, G2, inner)?);
            f = f.mul(&poch_monomial(case.sigma[s - 1], t_idx as u32, G2, inner)?);
            f = f.mul(&inv_poch(a.mul(case.rho[s - 1].inv()), t_idx as u32, inner)?);
            f = f.mul(&inv_poch(a.mul(case.sigma[s - 1].inv()), t_idx as u32, inner)?);
            let rs = case.rho[s - 1].mul(case.sigma[s - 1]);
            mono = mono.mul(rs.pow(t_idx).inv());
        }
        f = f.mul(&inv_poch(Q, (n - t_idx) as u32, inner)?);
        f = f.mul(&inv_poch(a, (n + t_idx) as u32, inner)?);

        // bracket at index tt with the matching alpha
        let half = |tt: i64, alpha_t: TruncatedSeries| -> Result<(TruncatedSeries, Monomial)> {
            let mut g = alpha_t;
            let mut m = aq.pow((k - i) as i64 * tt);
            for s in (i + 1)..=k {
                g = g.mul(&poch_monomial(case.rho[s - 1], tt as u32, G2, inner)?);
                g = g.mul(&poch_monomial(case.sigma[s - 1], tt as u32, G2, inner)?);
                g = g.mul(&inv_poch(aq.mul(case.rho[s - 1].inv()), tt as u32, inner)?);
                g = g.mul(&inv_poch(aq.mul(case.sigma[s - 1].inv()), tt as u32, inner)?);
                let rs = case.rho[s - 1].mul(case.sigma[s - 1]);
                m = m.mul(rs.pow(tt).inv());
            }
            Ok((g, m))
        };

        let (g1, m1) = half(t_idx, pair.alpha(t_idx as u32, inner)?)?;
        let b1 = g1
            .mul(&inv_one_minus(a.mul(Q.pow(2 * t_idx)), inner)?)
            .mul(&m1.to_series(G2, inner));
        let (g2, m2) = half(t_idx - 1, pair.alpha(t_idx as u32 - 1, inner)?)?;
        let extra = a.mul(Q.pow(2 * t_idx - 2)); // a q^(2t-2)
        let b2 = g2
            .mul(&inv_one_minus(a.mul(Q.pow(2 * t_idx - 2)), inner)?)
            .mul(&m2.mul(extra).to_series(G2, inner));
        let bracket = b1.sub(&b2);
        let term = f.mul(&bracket);
        if let Some(term) = shift_clamp(term, mono.sign, mono.exp, order) {
            acc = acc.add(&term);
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_pair(pair: &BaileyPair, n_max: u32, order_q: i64) {
        let d = verify_bailey_relation(pair, n_max, 2 * order_q).unwrap();
        assert!(d.is_none(), "relation failed: {:?}", d);
    }

    #[test]
    fn alpha_beta_start_at_one() {
        let a = Monomial::positive(6);
        for pair in [
            BaileyPair::pair_two(a),
            BaileyPair::pair_one(a).unwrap(),
            BaileyPair::six_phi_five(a, Monomial::positive(2), Monomial::negative(4)),
        ] {
            let one = TruncatedSeries::one(G2, 40);
            assert!(pair.alpha(0, 40).unwrap().first_discrepancy(&one, 30).is_none());
            assert!(pair.beta(0, 40).unwrap().first_discrepancy(&one, 30).is_none());
        }
    }

    #[test]
    fn named_pairs_small() {
        for a_exp in [2, 6, 10] {
            let a = Monomial::positive(a_exp);
            check_pair(&BaileyPair::pair_two(a), 4, 30);
            check_pair(&BaileyPair::pair_one(a).unwrap(), 4, 30);
        }
    }

    #[test]
    fn six_phi_five_small() {
        let a = Monomial::positive(12);
        check_pair(
            &BaileyPair::six_phi_five(a, Monomial::positive(4), Monomial::positive(6)),
            4,
            30,
        );
        check_pair(
            &BaileyPair::six_phi_five(a, Monomial::negative(4), Monomial::positive(6)),
            4,
            30,
        );
    }

    #[test]
    fn pair_two_beta_one_value() {
        // beta_1 = 1/((1-q)(1-q^2)... wait: 1/((q)_1 (a)_1) with a=q: 1/(1-q)^2
        let a = Monomial::positive(2);
        let pair = BaileyPair::pair_two(a);
        let b1 = pair.beta(1, 40).unwrap();
        let expect = TruncatedSeries::one(G2, 40)
            .mul_one_minus(1, 2)
            .invert()
            .unwrap();
        let expect = expect.mul(&expect);
        assert!(b1.first_discrepancy(&expect, 36).is_none());
    }

    #[test]
    fn lattice_small_grid() {
        let cases: Vec<(usize, usize, u32, Vec<Monomial>, Vec<Monomial>, Monomial)> = vec![
            (1, 0, 2, vec![Monomial::positive(4)], vec![Monomial::negative(6)], Monomial::positive(6)),
            (1, 1, 2, vec![Monomial::negative(2)], vec![Monomial::positive(4)], Monomial::positive(6)),
            (2, 1, 3, vec![Monomial::positive(2), Monomial::positive(4)],
             vec![Monomial::negative(4), Monomial::positive(6)], Monomial::positive(6)),
            (2, 2, 2, vec![Monomial::positive(2), Monomial::negative(4)],
             vec![Monomial::positive(8), Monomial::negative(2)], Monomial::positive(12)),
        ];
        for (k, i, n, rho, sigma, a) in cases {
            let case = LatticeCase { k, i, n, rho, sigma, a };
            let pair = BaileyPair::pair_two(a);
            let (lhs, rhs) = lattice_sides(&case, &pair, 80).unwrap();
            assert!(
                lhs.first_discrepancy(&rhs, 60).is_none(),
                "lattice k={k} i={i} n={n}: {:?}",
                lhs.first_discrepancy(&rhs, 60)
            );
        }
    }

    #[test]
    fn lattice_rejects_a_equal_one() {
        let case = LatticeCase {
            k: 1,
            i: 0,
            n: 1,
            rho: vec![Monomial::positive(2)],
            sigma: vec![Monomial::positive(2)],
            a: Monomial::positive(0),
        };
        let pair = BaileyPair::pair_two(case.a);
        assert!(lattice_sides(&case, &pair, 40).is_err());
    }
}
