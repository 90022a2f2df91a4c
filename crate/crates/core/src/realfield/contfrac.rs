use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};

use super::ball::CertifiedReal;
use super::{RealError, RealProducer, DEFAULT_PRECISION};

/// Certified simple continued fraction `[a0; a1, a2, ...]` of a positive real.
///
/// Every stored quotient is the exact partial quotient of the target real,
/// not merely of its approximation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuedFraction {
    quotients: Vec<BigUint>,
    /// `(p_k, q_k)` for each stored quotient.
    convergents: Vec<(BigUint, BigUint)>,
    /// Precision (bits) at which the expansion was certified.
    precision_used: u32,
}

impl ContinuedFraction {
    /// Builds convergents from certified quotients using
    /// `p_k = a_k p_{k-1} + p_{k-2}`, `q_k = a_k q_{k-1} + q_{k-2}`
    /// with seeds `p_{-1} = 1, p_{-2} = 0, q_{-1} = 0, q_{-2} = 1`.
    pub fn from_quotients(quotients: Vec<BigUint>, precision_used: u32) -> Self {
        let mut convergents = Vec::with_capacity(quotients.len());
        let (mut p2, mut p1) = (BigUint::zero(), BigUint::one());
        let (mut q2, mut q1) = (BigUint::one(), BigUint::zero());
        for a in &quotients {
            let p = a * &p1 + &p2;
            let q = a * &q1 + &q2;
            p2 = std::mem::replace(&mut p1, p.clone());
            q2 = std::mem::replace(&mut q1, q.clone());
            convergents.push((p, q));
        }
        ContinuedFraction { quotients, convergents, precision_used }
    }

    pub fn quotients(&self) -> &[BigUint] {
        &self.quotients
    }

    pub fn convergents(&self) -> &[(BigUint, BigUint)] {
        &self.convergents
    }

    pub fn certified_count(&self) -> usize {
        self.quotients.len()
    }

    pub fn precision_used(&self) -> u32 {
        self.precision_used
    }

    pub fn p(&self, k: usize) -> &BigUint {
        &self.convergents[k].0
    }

    pub fn q(&self, k: usize) -> &BigUint {
        &self.convergents[k].1
    }

    /// First index whose convergent denominator exceeds `bound`.
    pub fn first_denominator_above(&self, bound: &BigUint) -> Option<usize> {
        self.convergents.iter().position(|(_, q)| q > bound)
    }

    /// Index and value of the largest quotient among `a_0 .. a_{end-1}`
    /// (first occurrence on ties).
    pub fn max_quotient_below(&self, end: usize) -> Option<(usize, &BigUint)> {
        self.quotients[..end.min(self.quotients.len())]
            .iter()
            .enumerate()
            .fold(None, |best: Option<(usize, &BigUint)>, (i, a)| match best {
                Some((_, b)) if b >= a => best,
                _ => Some((i, a)),
            })
    }
}

/// Runs the Gauss map `y -> 1/(y - floor y)` on one enclosure and returns the
/// quotients whose floors are identical across the whole ball.
fn gauss_quotients(
    gamma: &CertifiedReal,
    count: usize,
) -> Result<Vec<BigUint>, RealError> {
    let mut y = gamma.clone();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let Some(a) = y.floor_certified() else { break };
        if a.is_negative() {
            if out.is_empty() && y.hi().is_negative() {
                return Err(RealError::Domain {
                    op: "cf_expand",
                    detail: "only positive reals are supported".into(),
                });
            }
            break;
        }
        out.push(a.magnitude().clone());
        if out.len() == count {
            break;
        }
        let frac = &y - &CertifiedReal::from_int(a, y.precision());
        match frac.recip() {
            Ok(next) if frac.lo().signum() > 0 => y = next,
            _ => break,
        }
    }
    Ok(out)
}

/// Expands `gamma` until `count` partial quotients are certified, doubling
/// the requested precision (from 192 bits) whenever a floor is ambiguous.
///
/// A rational `gamma` eventually produces a Gauss-map iterate that is an
/// integer, which no finite precision can certify; it therefore surfaces as
/// [`RealError::PrecisionExhausted`].
pub fn cf_expand(
    gamma: &dyn RealProducer,
    count: usize,
    precision_cap: u32,
) -> Result<ContinuedFraction, RealError> {
    cf_expand_from(gamma, count, DEFAULT_PRECISION.min(precision_cap), precision_cap)
}

pub fn cf_expand_from(
    gamma: &dyn RealProducer,
    count: usize,
    start_precision: u32,
    precision_cap: u32,
) -> Result<ContinuedFraction, RealError> {
    assert!(count >= 1, "count >= 1");
    let mut precision = start_precision.max(32);
    let mut best: Vec<BigUint> = Vec::new();
    loop {
        let ball = gamma.enclose(precision);
        let got = gauss_quotients(&ball, count)?;
        let agree = got.len().min(best.len());
        if got[..agree] != best[..agree] {
            return Err(RealError::Inconsistent { precision });
        }
        if got.len() > best.len() {
            best = got;
        }
        if best.len() >= count {
            return Ok(ContinuedFraction::from_quotients(best, precision));
        }
        if precision >= precision_cap {
            return Err(RealError::PrecisionExhausted {
                cap: precision_cap,
                certified: best.len(),
                requested: count,
            });
        }
        precision = (precision * 2).min(precision_cap);
    }
}

/// Expands `gamma` until the first convergent denominator exceeding `bound`
/// is certified. Returns the expansion together with that index.
pub fn cf_expand_past(
    gamma: &dyn RealProducer,
    bound: &BigUint,
    precision_cap: u32,
) -> Result<(ContinuedFraction, usize), RealError> {
    // q_k >= F_{k+1} >= alpha^(k-1); enough terms for any bound
    let mut count = 8usize;
    loop {
        let cf = cf_expand(gamma, count, precision_cap)?;
        if let Some(k) = cf.first_denominator_above(bound) {
            return Ok((cf, k));
        }
        count *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realfield::{const_alpha, const_sqrt5};

    #[test]
    fn golden_ratio_is_all_ones() {
        let cf = cf_expand(&const_alpha, 30, 4096).unwrap();
        assert_eq!(cf.certified_count(), 30);
        assert!(cf.quotients().iter().all(|a| a == &BigUint::one()));
        // denominators are Fibonacci numbers
        assert_eq!(cf.q(10), &BigUint::from(89u32));
    }

    #[test]
    fn sqrt5_is_two_then_fours() {
        let cf = cf_expand(&const_sqrt5, 20, 4096).unwrap();
        assert_eq!(cf.quotients()[0], BigUint::from(2u32));
        assert!(cf.quotients()[1..].iter().all(|a| a == &BigUint::from(4u32)));
    }

    #[test]
    fn rational_input_exhausts_precision() {
        let third = |p: u32| CertifiedReal::from_ratio(7, 3, p);
        let err = cf_expand(&third, 5, 1024).unwrap_err();
        assert!(matches!(err, RealError::PrecisionExhausted { cap: 1024, .. }), "{err:?}");
    }

    #[test]
    fn convergent_recurrences() {
        let cf = ContinuedFraction::from_quotients(
            [3u32, 7, 15, 1, 292].iter().map(|&a| BigUint::from(a)).collect(),
            0,
        );
        let q: Vec<u32> = cf.convergents().iter().map(|(_, q)| q.try_into().unwrap()).collect();
        let p: Vec<u32> = cf.convergents().iter().map(|(p, _)| p.try_into().unwrap()).collect();
        assert_eq!(p, [3, 22, 333, 355, 103993]);
        assert_eq!(q, [1, 7, 106, 113, 33102]);
        assert_eq!(cf.max_quotient_below(5), Some((4, &BigUint::from(292u32))));
        assert_eq!(cf.first_denominator_above(&BigUint::from(110u32)), Some(3));
    }
}
