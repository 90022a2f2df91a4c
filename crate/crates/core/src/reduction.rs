//! Legendre-criterion reduction of large bounds on `x`.
//!
//! A hypothetical solution gives `0 < |gamma - p/x| < coeff / (x base^x)`.
//! Once the right side is below `1/(2x^2)`, `p/x` must be a convergent
//! `p_t/q_t` with `q_t <= x <= x_cap < q_{k*}`, and then
//! `|gamma - p_t/q_t| > 1/((a_{t+1} + 2) q_t^2) >= 1/((A + 2) x^2)` where `A`
//! bounds `a_1 .. a_{k*}`. Every `x` with `(A + 2) coeff x < base^x` is ruled out.

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::bounds::Precision;
use crate::realfield::{
    cf_expand, cf_expand_past, const_alpha, const_log_alpha, const_log_sqrt5, log_of_natural, CertifiedReal,
    ContinuedFraction, RealError, RealProducer,
};
use crate::sequences::{fib, Natural, SeqIndex};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReductionVerdict {
    Reduced,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionOutcome {
    pub gamma_label: String,
    pub x_cap_in: Natural,
    /// First index with `q_k > x_cap_in`.
    pub k_star: usize,
    pub q_kstar: Natural,
    /// `max a_i` over `i < k_star`.
    pub a_max: Natural,
    pub a_max_index: usize,
    /// `max a_i` over `1 <= i <= k_star`; bounds every `a_{t+1}` with `t < k_star`.
    pub a_bound: Natural,
    pub x_cap_out: Natural,
    pub verdict: ReductionVerdict,
    pub precision_used: u32,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error(transparent)]
    Real(#[from] RealError),
    #[error("reduction of {} did not lower the cap {}", .0.gamma_label, .0.x_cap_in)]
    NotReduced(Box<ReductionOutcome>),
    #[error("invalid reduction input: {0}")]
    Input(String),
}

/// Largest quotient among `a_lo ..= a_hi` with its index (first on ties).
fn max_in(cf: &ContinuedFraction, lo: usize, hi: usize) -> (usize, Natural) {
    let q = cf.quotients();
    let mut best = (lo, q[lo].clone());
    for (i, a) in q.iter().enumerate().take(hi + 1).skip(lo + 1) {
        if a > &best.1 {
            best = (i, a.clone());
        }
    }
    best
}

/// Whether `(a + 2) coeff x >= base^x`, i.e. whether the criterion fails to
/// exclude `x`.
fn not_excluded(
    a_plus_2: &Natural,
    coeff: &CertifiedReal,
    base: &CertifiedReal,
    x: u64,
    prec: Precision,
) -> Result<bool, RealError> {
    prec.decide(|p| {
        let lhs = &(&CertifiedReal::from_natural(a_plus_2, p) * &coeff.with_precision(p))
            * &CertifiedReal::from_int(x, p);
        let rhs = base.with_precision(p).powi(x as i64).ok()?;
        rhs.cmp_certified(&lhs).map(|o| o != std::cmp::Ordering::Greater)
    })
}

/// Largest `x` in `[1, x_cap]` with `(a + 2) coeff x >= base^x`, or 0 if none.
/// `base^x / x` is eventually increasing, so the scan stops once it has
/// been above the left side for a stretch where `base^x/x` grows.
fn largest_not_excluded(
    a_plus_2: &Natural,
    coeff: &CertifiedReal,
    base: &CertifiedReal,
    x_cap: &Natural,
    prec: Precision,
) -> Result<Natural, RealError> {
    let cap = x_cap.to_u64().unwrap_or(u64::MAX);
    // base^x / x is increasing once x > 1/log(base)
    let turn = prec.decide(|p| {
        let inv = base.with_precision(p).ln().ok()?.recip().ok()?;
        inv.hi().ceil().to_u64().map(|v| v + 1)
    })?;
    let mut best = 0u64;
    let mut x = 1u64;
    while x <= cap {
        if not_excluded(a_plus_2, coeff, base, x, prec)? {
            best = x;
        } else if x >= turn {
            break;
        }
        x += 1;
    }
    Ok(Natural::from(best))
}

/// Runs the reduction for one `gamma`. The caller must have shown
/// `0 < |gamma - p/x| < coeff / (x base^x)` for every solution with
/// denominator `x <= x_cap`.
pub fn legendre_reduce(
    label: &str,
    gamma: &dyn RealProducer,
    x_cap: &Natural,
    coeff: &CertifiedReal,
    base: &CertifiedReal,
    prec: Precision,
) -> Result<ReductionOutcome, ReductionError> {
    if x_cap < &Natural::from(2u32) {
        return Err(ReductionError::Input("x_cap must be at least 2".into()));
    }
    if coeff.sign() != Some(std::cmp::Ordering::Greater) {
        return Err(ReductionError::Input("coeff must be positive".into()));
    }
    if CertifiedReal::from_int(1, 64).lt(base) != Some(true) {
        return Err(ReductionError::Input("base must exceed 1".into()));
    }
    let (cf, k_star) = cf_expand_past(gamma, x_cap, prec.cap)?;
    let (a_max_index, a_max) = max_in(&cf, 0, k_star.saturating_sub(1));
    let (_, a_bound) = max_in(&cf, 1.min(k_star), k_star);
    let a_plus_2 = &a_bound + 2u32;
    let cap_out = largest_not_excluded(&a_plus_2, coeff, base, x_cap, prec)?;
    let verdict = if &cap_out < x_cap { ReductionVerdict::Reduced } else { ReductionVerdict::Failed };
    let outcome = ReductionOutcome {
        gamma_label: label.to_string(),
        x_cap_in: x_cap.clone(),
        k_star,
        q_kstar: cf.q(k_star).clone(),
        a_max,
        a_max_index,
        a_bound,
        x_cap_out: cap_out,
        verdict,
        precision_used: cf.precision_used(),
    };
    match verdict {
        ReductionVerdict::Reduced => Ok(outcome),
        ReductionVerdict::Failed => Err(ReductionError::NotReduced(Box::new(outcome))),
    }
}

/// `log F_n / log alpha`.
pub fn gamma_fib(n: SeqIndex) -> impl Fn(u32) -> CertifiedReal + Sync {
    let f = fib(n);
    move |p: u32| {
        log_of_natural(&f, p)
            .expect("F_n >= 2")
            .div(&const_log_alpha(p))
            .expect("log alpha > 0")
    }
}

/// `log sqrt5 / log alpha`.
pub fn gamma_sqrt5(p: u32) -> CertifiedReal {
    const_log_sqrt5(p).div(&const_log_alpha(p)).expect("log alpha > 0")
}

/// Outcome of the reduction over a range of `n`.
///
/// Besides the per-`n` reductions, the family is also expanded to one
/// common index `K`, the largest `k_star`, so that a single pair
/// `q_K(n) > x_cap` and `A = max a_i` covers every `n` at once.
#[derive(Clone, Debug)]
pub struct FamilyReduction {
    pub per_n: Vec<(SeqIndex, ReductionOutcome)>,
    /// Largest `k_star` over the family.
    pub uniform_index: usize,
    /// `min_n q_K(n)` and `max_n q_K(n)`.
    pub q_min: Natural,
    pub q_max: Natural,
    /// `min_n q_{K-1}(n)` and the `n` attaining it.
    pub q_prev_min: (Natural, SeqIndex),
    /// `max a_i` over all `n` and `i < K`, with the `(n, i)` attaining it.
    pub a_max: Natural,
    pub a_max_at: (SeqIndex, usize),
    /// `max a_i` over all `n` and `1 <= i <= K`.
    pub a_bound: Natural,
    /// Maximum of the per-`n` reduced caps.
    pub x_cap_out: Natural,
    /// Cap from the family-wide `a_bound`.
    pub x_cap_out_global: Natural,
}

/// Reduces `gamma_n = log F_n / log alpha` with the bound `coeff/(x base^x)`
/// for every `n` in `n_range`, in parallel.
pub fn reduce_fib_family(
    n_range: (SeqIndex, SeqIndex),
    x_cap: &Natural,
    coeff: &CertifiedReal,
    base: &CertifiedReal,
    prec: Precision,
) -> Result<FamilyReduction, ReductionError> {
    let (lo, hi) = n_range;
    if lo < 3 || lo > hi {
        return Err(ReductionError::Input(format!("bad n range [{lo}, {hi}]")));
    }
    let mut per_n: Vec<(SeqIndex, ReductionOutcome)> = (lo..=hi)
        .into_par_iter()
        .map(|n| {
            let g = gamma_fib(n);
            legendre_reduce(&format!("log F_{n} / log alpha"), &g, x_cap, coeff, base, prec)
                .map(|o| (n, o))
        })
        .collect::<Result<_, _>>()?;
    per_n.sort_by_key(|(n, _)| *n);
    let k = per_n.iter().map(|(_, o)| o.k_star).max().expect("nonempty");
    let mut expansions: Vec<(SeqIndex, ContinuedFraction)> = (lo..=hi)
        .into_par_iter()
        .map(|n| cf_expand(&gamma_fib(n), k + 1, prec.cap).map(|cf| (n, cf)))
        .collect::<Result<_, _>>()?;
    expansions.sort_by_key(|(n, _)| *n);
    let q_min = expansions.iter().map(|(_, cf)| cf.q(k)).min().expect("nonempty").clone();
    let q_max = expansions.iter().map(|(_, cf)| cf.q(k)).max().expect("nonempty").clone();
    let q_prev_min = expansions
        .iter()
        .map(|(n, cf)| (cf.q(k - 1).clone(), *n))
        .min()
        .expect("nonempty");
    let mut a_max = Natural::zero();
    let mut a_max_at = (lo, 0);
    let mut a_bound = Natural::zero();
    for (n, cf) in &expansions {
        let (i, a) = max_in(cf, 0, k - 1);
        if a > a_max {
            a_max = a;
            a_max_at = (*n, i);
        }
        a_bound = a_bound.max(max_in(cf, 1, k).1);
    }
    let x_cap_out = per_n.iter().map(|(_, o)| &o.x_cap_out).max().expect("nonempty").clone();
    let x_cap_out_global = largest_not_excluded(&(&a_bound + 2u32), coeff, base, x_cap, prec)?;
    Ok(FamilyReduction {
        per_n,
        uniform_index: k,
        q_min,
        q_max,
        q_prev_min,
        a_max,
        a_max_at,
        a_bound,
        x_cap_out,
        x_cap_out_global,
    })
}

/// Result of the reduction for `log sqrt5 / log alpha`.
#[derive(Clone, Debug)]
pub struct SecondStage {
    pub outcome: ReductionOutcome,
    /// Right side constant: solutions satisfy `|gamma - p/x| < 1/(rhs_den x^2)`.
    pub rhs_den: u64,
    /// `a_bound + 2`, the denominator of the lower bound.
    pub lower_den: Natural,
    /// `2.91 * 5.05 / 1000 < 1 / rhs_den` was certified.
    pub coefficient_checked: bool,
    /// `alpha^x > 1000 x` for every `x > threshold` was certified.
    pub threshold_checked: bool,
    /// Smallest `x0` with `alpha^x > 1000 x` for all `x >= x0`.
    pub least_threshold: u64,
}

/// The argument excludes `x > threshold` using `m >= 134` and `alpha^x > 1000 x`.
pub const SECOND_STAGE_THRESHOLD: u64 = 100;

fn alpha_pow_exceeds_1000x(x: u64, prec: Precision) -> Result<bool, RealError> {
    prec.decide(|p| CertifiedReal::from_int(1000 * x, p).lt(&const_alpha(p).powi(x as i64).ok()?))
}

/// Reduction of `x < x_cap` for `gamma = log sqrt5 / log alpha` using
/// `|gamma - (nx - r)/x| < (2.91/x)(4/alpha^m + 1.05/alpha^x) < 1/(66 x^2)`.
pub fn reduce_second_stage(x_cap: &Natural, prec: Precision) -> Result<SecondStage, ReductionError> {
    const RHS_DEN: u64 = 66;
    if x_cap < &Natural::from(SECOND_STAGE_THRESHOLD) {
        return Err(ReductionError::Input("x_cap must be at least 100".into()));
    }
    let coefficient_checked = prec.decide(|p| {
        let lhs = &(&CertifiedReal::from_decimal("2.91", p) * &CertifiedReal::from_decimal("5.05", p))
            * &CertifiedReal::from_decimal("1e-3", p);
        lhs.lt(&CertifiedReal::from_ratio(1, RHS_DEN as i64, p))
    })?;
    // alpha^x / x is increasing for x >= 3, so one point settles all larger x;
    // alpha^m >= alpha^134 > 1000 x needs the cap itself
    let threshold_checked = alpha_pow_exceeds_1000x(SECOND_STAGE_THRESHOLD + 1, prec)?
        && prec.decide(|p| {
            CertifiedReal::from_natural(&(x_cap * 1000u32), p).lt(&const_alpha(p).powi(134).ok()?)
        })?;
    let mut least_threshold = SECOND_STAGE_THRESHOLD + 1;
    while least_threshold > 3 && alpha_pow_exceeds_1000x(least_threshold - 1, prec)? {
        least_threshold -= 1;
    }
    let (cf, k_star) = cf_expand_past(&gamma_sqrt5, x_cap, prec.cap)?;
    let (a_max_index, a_max) = max_in(&cf, 0, k_star - 1);
    let (_, a_bound) = max_in(&cf, 1, k_star);
    let lower_den = &a_bound + 2u32;
    let contradiction = lower_den <= Natural::from(RHS_DEN);
    let reduced = coefficient_checked && threshold_checked && contradiction;
    let outcome = ReductionOutcome {
        gamma_label: "log sqrt5 / log alpha".into(),
        x_cap_in: x_cap.clone(),
        k_star,
        q_kstar: cf.q(k_star).clone(),
        a_max,
        a_max_index,
        a_bound,
        x_cap_out: if reduced { Natural::from(SECOND_STAGE_THRESHOLD) } else { x_cap.clone() },
        verdict: if reduced { ReductionVerdict::Reduced } else { ReductionVerdict::Failed },
        precision_used: cf.precision_used(),
    };
    if !reduced {
        return Err(ReductionError::NotReduced(Box::new(outcome)));
    }
    Ok(SecondStage {
        outcome,
        rhs_den: RHS_DEN,
        lower_den,
        coefficient_checked,
        threshold_checked,
        least_threshold,
    })
}

/// A convergent law that failed to certify, with its index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConvergentLaw {
    /// `|gamma q_k - p_k| < 1/q_{k+1}`
    Upper,
    /// `q_k |gamma q_k - p_k| > 1/(a_{k+1} + 2)`
    Lower,
    /// `|gamma - p/q| < 1/(2 q^2)` for at least one of two consecutive convergents
    Legendre,
}

/// Checks the convergent laws for every `k` with `a_{k+1}` known.
///
/// The Legendre bound does not hold for every convergent (it fails whenever
/// `a_{k+1} = 1` and `gamma_{k+1}` is close to 1), so it is checked in the
/// form that is a theorem: one of each consecutive pair satisfies it.
pub fn check_convergent_laws(
    gamma: &dyn RealProducer,
    cf: &ContinuedFraction,
    prec: Precision,
) -> Result<(), (ConvergentLaw, usize)> {
    let n = cf.certified_count();
    let mut legendre = Vec::with_capacity(n);
    for k in 0..n.saturating_sub(1) {
        let (pk, qk) = (BigInt::from(cf.p(k).clone()), BigInt::from(cf.q(k).clone()));
        let qn = BigInt::from(cf.q(k + 1).clone());
        let a_next = BigInt::from(cf.quotients()[k + 1].clone());
        let laws = prec.decide(|p| {
            // the error shrinks like 1/q^2, so work above the size of q_{k+1}^2
            let p = p.max(2 * qn.bits() as u32 + 64);
            let g = gamma.enclose(p);
            let err = (&(&g * &CertifiedReal::from_int(qk.clone(), p))
                - &CertifiedReal::from_int(pk.clone(), p))
                .abs();
            let upper = err.lt(&CertifiedReal::from_ratio(1, qn.clone(), p))?;
            let scaled = &err * &CertifiedReal::from_int(qk.clone(), p);
            let lower = CertifiedReal::from_ratio(1, &a_next + 2, p).lt(&scaled)?;
            // |gamma - p/q| < 1/(2q^2)  <=>  q |gamma q - p| < 1/2
            let half = scaled.lt(&CertifiedReal::from_ratio(1, 2, p))?;
            Some((upper, lower, half))
        });
        match laws {
            Ok((true, true, half)) => legendre.push(half),
            Ok((false, _, _)) | Err(_) => return Err((ConvergentLaw::Upper, k)),
            Ok((_, false, _)) => return Err((ConvergentLaw::Lower, k)),
        }
    }
    match legendre.windows(2).position(|w| !w[0] && !w[1]) {
        Some(k) => Err((ConvergentLaw::Legendre, k)),
        None => Ok(()),
    }
}

/// Brute-force oracle for the reduced cap; `None` if `x_cap` is too large.
pub fn brute_force_cap(a: u64, coeff_num: u64, base: u64, x_cap: u64) -> Option<u64> {
    let mut best = 0;
    for x in 1..=x_cap.min(200) {
        let lhs = BigUint::from((a + 2) * coeff_num * x);
        if lhs >= num_traits::pow(BigUint::from(base), x as usize) {
            best = x;
        }
    }
    (x_cap <= 200).then_some(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn prec() -> Precision {
        Precision::default()
    }

    #[test]
    fn golden_ratio_reduction() {
        let out = legendre_reduce(
            "alpha",
            &const_alpha,
            &Natural::from(10u32),
            &CertifiedReal::from_int(1, 64),
            &CertifiedReal::from_int(2, 64),
            prec(),
        )
        .unwrap();
        assert_eq!(out.a_max, Natural::one());
        assert_eq!(out.x_cap_out, Natural::from(3u32));
        assert_eq!(brute_force_cap(1, 1, 2, 10), Some(3));
        assert!(out.q_kstar > Natural::from(10u32));
        // q_k are Fibonacci numbers: 13 = F_7 is the first above 10
        assert_eq!(out.q_kstar, Natural::from(13u32));
    }

    #[test]
    fn rejects_bad_input() {
        let r = legendre_reduce(
            "alpha",
            &const_alpha,
            &Natural::from(1u32),
            &CertifiedReal::from_int(1, 64),
            &CertifiedReal::from_int(2, 64),
            prec(),
        );
        assert!(matches!(r, Err(ReductionError::Input(_))));
    }

    #[test]
    fn not_reduced_when_cap_is_small() {
        let r = legendre_reduce(
            "alpha",
            &const_alpha,
            &Natural::from(3u32),
            &CertifiedReal::from_int(1, 64),
            &CertifiedReal::from_int(2, 64),
            prec(),
        );
        assert!(matches!(r, Err(ReductionError::NotReduced(_))));
    }

    #[test]
    fn single_member_of_fib_family() {
        let g = gamma_fib(10);
        let out = legendre_reduce(
            "F_10",
            &g,
            &Natural::from(64_300_000_000_000u64),
            &CertifiedReal::from_int(11, 192),
            &CertifiedReal::from_decimal("1.5", 192),
            prec(),
        )
        .unwrap();
        assert!(out.q_kstar > out.x_cap_in);
        assert!(out.x_cap_out <= Natural::from(102u32));
    }

    #[test]
    fn second_stage() {
        let s = reduce_second_stage(&Natural::from(8_320_000_000_000_000_000_000_000u128), prec()).unwrap();
        assert_eq!(s.outcome.k_star, 48);
        assert_eq!(s.outcome.a_max, Natural::from(29u32));
        assert_eq!(s.outcome.x_cap_out, Natural::from(100u32));
        assert!(s.least_threshold <= 100);
    }

    #[test]
    fn laws_hold_for_log_ratio() {
        let cf = crate::realfield::cf_expand(&gamma_sqrt5, 40, 8192).unwrap();
        assert_eq!(check_convergent_laws(&gamma_sqrt5, &cf, prec()), Ok(()));
    }
}
