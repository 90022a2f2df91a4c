//! Logarithmic heights, the Matveev lower bound, Weger's coefficients and the
//! chains of explicit inequalities that turn them into caps on `x` and `m`.
//!
//! Every inequality is decided on certified enclosures; a step only counts
//! when it holds for the whole enclosure. Decimal constants are taken as
//! exact rationals.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::realfield::{
    const_alpha, const_ln2, const_log_alpha, const_log_sqrt5, decide_with_escalation,
    log_of_natural, CertifiedReal, RealError,
};
use crate::sequences::{fib, Natural, SeqIndex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("invalid Matveev instance: {0}")]
    InvalidInstance(String),
    #[error("Weger coefficient needs 0 < a < 1")]
    WegerDomain,
    #[error(transparent)]
    Real(#[from] RealError),
}

/// Precision settings shared by every certified decision in this module.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Precision {
    pub start: u32,
    pub cap: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Precision { start: crate::realfield::DEFAULT_PRECISION, cap: crate::realfield::DEFAULT_PRECISION_CAP }
    }
}

impl Precision {
    pub fn decide<T>(&self, f: impl FnMut(u32) -> Option<T>) -> Result<T, RealError> {
        decide_with_escalation(self.start, self.cap, f)
    }
}

fn dec(text: &str, p: u32) -> CertifiedReal {
    CertifiedReal::from_decimal(text, p)
}

fn int(v: u64, p: u32) -> CertifiedReal {
    CertifiedReal::from_int(v, p)
}

fn ln(x: &CertifiedReal) -> CertifiedReal {
    x.ln().expect("logarithm of a positive quantity")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HeightOf {
    Alpha,
    Sqrt5,
    Fib(SeqIndex),
}

/// Logarithmic height as used by the bound chain: `h(alpha) = (log alpha)/2`,
/// `h(sqrt 5) = log sqrt 5`, and for `F_n` the upper bound `n log alpha`.
pub fn log_height(which: HeightOf, precision: u32) -> CertifiedReal {
    match which {
        HeightOf::Alpha => const_log_alpha(precision).mul_pow2(-1),
        HeightOf::Sqrt5 => const_log_sqrt5(precision),
        HeightOf::Fib(n) => &const_log_alpha(precision) * &int(n, precision),
    }
}

/// Exact height: identical to [`log_height`] except `h(F_n) = log F_n`.
pub fn log_height_exact(which: HeightOf, precision: u32) -> CertifiedReal {
    match which {
        HeightOf::Fib(n) => log_of_natural(&fib(n), precision).expect("F_n >= 1 for n >= 1"),
        other => log_height(other, precision),
    }
}

/// Data for one application of Matveev's lower bound
/// `|Lambda| > exp(-1.4 * 30^(t+3) * t^4.5 * D^2 (1 + log D)(1 + log B) A_1 ... A_t)`.
#[derive(Clone, Debug)]
pub struct MatveevInstance {
    t: u32,
    degree: u32,
    exponent_bound: CertifiedReal,
    heights: Vec<CertifiedReal>,
}

impl MatveevInstance {
    pub fn new(
        degree: u32,
        exponent_bound: CertifiedReal,
        heights: Vec<CertifiedReal>,
    ) -> Result<Self, BoundsError> {
        let t = heights.len() as u32;
        if t == 0 {
            return Err(BoundsError::InvalidInstance("t must be at least 1".into()));
        }
        if degree == 0 {
            return Err(BoundsError::InvalidInstance("field degree must be at least 1".into()));
        }
        let one = BigInt::one();
        if exponent_bound.lt_ratio(&one, &one) == Some(true) {
            return Err(BoundsError::InvalidInstance("B must be at least 1".into()));
        }
        for (i, a) in heights.iter().enumerate() {
            if a.lt_ratio(&BigInt::from(16), &BigInt::from(100)) == Some(true) {
                return Err(BoundsError::InvalidInstance(format!("A_{} below 0.16", i + 1)));
            }
        }
        Ok(MatveevInstance { t, degree, exponent_bound, heights })
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }
}

/// The exponent `E` of the Matveev bound, so that `|Lambda| > exp(-E)`.
pub fn matveev_exponent(inst: &MatveevInstance, precision: u32) -> CertifiedReal {
    let p = precision;
    let t = int(inst.t as u64, p);
    let d = int(inst.degree as u64, p);
    let t_pow = &t.powi(4).expect("integer power") * &t.sqrt().expect("t >= 1");
    let mut e = &dec("1.4", p) * &int(30, p).powi(inst.t as i64 + 3).expect("integer power");
    e = &e * &t_pow;
    e = &e * &d.square();
    e = &e * &(&int(1, p) + &ln(&d));
    e = &e * &(&int(1, p) + &ln(&inst.exponent_bound));
    for a in &inst.heights {
        e = &e * a;
    }
    e
}

/// Instance for `Lambda_1 = alpha^r F_n^(-x) - 1` with `A_1 = 0.5`,
/// `A_2 = 2 n log alpha` and exponent bound `B`.
pub fn lambda1_instance(n: SeqIndex, b: CertifiedReal, precision: u32) -> MatveevInstance {
    let a2 = log_height(HeightOf::Fib(n), precision).mul_pow2(1);
    MatveevInstance::new(2, b, vec![dec("0.5", precision), a2]).expect("valid instance")
}

/// Instance for `Lambda_2 = alpha^(r-nx) 5^(x/2) - 1` with `A_1 = 1.61`,
/// `A_2 = 0.5` and `B = 2.5 x`.
pub fn lambda2_instance(x: &CertifiedReal, precision: u32) -> MatveevInstance {
    let b = &dec("2.5", precision) * x;
    MatveevInstance::new(2, b, vec![dec("1.61", precision), dec("0.5", precision)])
        .expect("valid instance")
}

/// `C = 1.4 * 30^5 * 2^4.5 * 2^2`, the common factor of both two-logarithm
/// applications.
pub fn matveev_c2(precision: u32) -> CertifiedReal {
    let p = precision;
    let two = int(2, p);
    let t_pow = &two.powi(4).expect("power") * &two.sqrt().expect("sqrt 2");
    &(&(&dec("1.4", p) * &int(24_300_000, p)) * &t_pow) * &int(4, p)
}

fn check_weger_arg(a: &CertifiedReal) -> Result<(), BoundsError> {
    let zero = BigInt::from(0);
    let one = BigInt::one();
    if a.lt_ratio(&zero, &one) == Some(false) && a.lt_ratio(&one, &one) == Some(true) {
        Ok(())
    } else {
        Err(BoundsError::WegerDomain)
    }
}

/// `-log(1 - a) / a`: if `|u| < a` then `|log(1 + u)| < coeff * |u|`.
pub fn weger_log_coeff(a: &CertifiedReal) -> Result<CertifiedReal, BoundsError> {
    check_weger_arg(a)?;
    let p = a.precision();
    let one_minus = &int(1, p) - a;
    Ok((-ln(&one_minus)).div(a)?)
}

/// `a / (1 - e^(-a))`: if `|u| < a` then `|u| < coeff * |e^u - 1|`.
pub fn weger_exp_coeff(a: &CertifiedReal) -> Result<CertifiedReal, BoundsError> {
    check_weger_arg(a)?;
    let p = a.precision();
    let e = (-a).exp()?;
    Ok(a.div(&(&int(1, p) - &e))?)
}

/// Largest positive integer for which the monotone predicate holds. The
/// predicate must be true at 1 and false from some point on.
fn largest_satisfying(
    mut holds: impl FnMut(u128) -> Result<bool, RealError>,
) -> Result<u128, RealError> {
    let mut lo: u128 = 1;
    debug_assert!(holds(lo)?);
    let mut hi: u128 = 2;
    while holds(hi)? {
        lo = hi;
        hi = hi.checked_mul(2).expect("bound below 2^127");
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if holds(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

fn real_u128(v: u128, p: u32) -> CertifiedReal {
    CertifiedReal::from_int(BigInt::from(v), p)
}

/// Right-hand side of `x < 6.2e9 (1 + log(n x)) n`.
pub fn small_n_rhs(n: SeqIndex, x: &CertifiedReal) -> CertifiedReal {
    let p = x.precision();
    let nn = int(n, p);
    let inner = &int(1, p) + &ln(&(&nn * x));
    &(&dec("6.2e9", p) * &inner) * &nn
}

/// Least `X` such that `x < 6.2e9 (1 + log(n_cap x)) n_cap` fails for every
/// `x > X`.
pub fn solve_x_bound_small_n(n_cap: SeqIndex, prec: Precision) -> Result<Natural, RealError> {
    let x = largest_satisfying(|x| {
        prec.decide(|p| {
            let xr = real_u128(x, p);
            xr.lt(&small_n_rhs(n_cap, &xr))
        })
    })?;
    Ok(Natural::from(x))
}

/// `595.2e9 (m+2) log(m+2)` as an enclosure.
pub fn x_bound_from_m_real(m: &Natural, precision: u32) -> CertifiedReal {
    let m2 = CertifiedReal::from_natural(&(m + 2u32), precision);
    &(&dec("595.2e9", precision) * &m2) * &ln(&m2)
}

/// Smallest integer not below `595.2e9 (m+2) log(m+2)`.
pub fn x_bound_from_m(m: &Natural, prec: Precision) -> Result<Natural, RealError> {
    // the ceiling is exact once the enclosure stops straddling an integer
    let c = prec.decide(|p| {
        let v = x_bound_from_m_real(m, p);
        let up = v.ceil_upper();
        (v.lo().floor() + 1 >= up).then_some(up)
    })?;
    Ok(c.to_biguint().expect("positive bound"))
}

/// `99.2e9 (m+2) log(49.6e9 (m+2))`, the cap on `x` before the final
/// simplification.
pub fn x_bound_unsimplified(m: u64, precision: u32) -> CertifiedReal {
    let m2 = int(m + 2, precision);
    let inner = &dec("49.6e9", precision) * &m2;
    &(&dec("99.2e9", precision) * &m2) * &ln(&inner)
}

/// `C (1 + log 2)(1 + log B) * 1.61 * 0.5`, the `Lambda_2` exponent written
/// with the exponent bound `B`.
fn lambda2_exponent(b: &CertifiedReal) -> CertifiedReal {
    let p = b.precision();
    let mut e = &matveev_c2(p) * &(&int(1, p) + &const_ln2(p));
    e = &e * &(&int(1, p) + &ln(b));
    &(&e * &dec("1.61", p)) * &dec("0.5", p)
}

/// Largest `m` satisfying
/// `m log alpha - log 5.05 < C(1 + log 2)(1 + log 2.5 + log(595.2e9 (m+2) log(m+2))) 1.61 * 0.5`.
pub fn solve_m_bound(prec: Precision) -> Result<Natural, RealError> {
    let m = largest_satisfying(|m| {
        prec.decide(|p| {
            let mr = real_u128(m, p);
            let lhs = &(&mr * &const_log_alpha(p)) - &ln(&dec("5.05", p));
            let xb = x_bound_from_m_real(&Natural::from(m), p);
            let rhs = lambda2_exponent(&(&dec("2.5", p) * &xb));
            lhs.lt(&rhs)
        })
    })?;
    Ok(Natural::from(m))
}

/// Largest `x` satisfying `x log alpha - log 5.05 < C(1 + log 2)(1 + log 2.5x) 1.61 * 0.5`,
/// the branch `min(m, x) = x`.
pub fn solve_x_bound_k1_is_x(prec: Precision) -> Result<Natural, RealError> {
    let x = largest_satisfying(|x| {
        prec.decide(|p| {
            let xr = real_u128(x, p);
            let lhs = &(&xr * &const_log_alpha(p)) - &ln(&dec("5.05", p));
            let rhs = lambda2_exponent(&(&dec("2.5", p) * &xr));
            lhs.lt(&rhs)
        })
    })?;
    Ok(Natural::from(x))
}

/// `2 A log A`, the cap on `x` implied by `x / log x < A` for `A >= 3`.
pub fn x_over_log_cap(a: &CertifiedReal) -> CertifiedReal {
    (a * &ln(a)).mul_pow2(1)
}

/// Smallest `m` from which `99.2e9 (m+2) log(49.6e9 (m+2)) <= 595.2e9 (m+2) log(m+2)`,
/// i.e. from which the simplified cap on `x` follows from the `2 A log A` step.
pub fn simplified_x_cap_valid_from(prec: Precision) -> Result<u64, RealError> {
    // equivalent to log(49.6e9) <= 5 log(m+2); scan upward
    let mut m: u64 = 1;
    loop {
        let ok = prec.decide(|p| {
            let lhs = ln(&dec("49.6e9", p));
            let rhs = &ln(&int(m + 2, p)) * &int(5, p);
            rhs.lt(&lhs).map(|v| !v)
        })?;
        if ok {
            return Ok(m);
        }
        m += 1;
    }
}

/// Integer window for `t = n x - r`, `[floor(1.659x - 0.86), ceil(1.7x + 1.46)]`,
/// clipped to positive integers.
pub fn lambda2_window(x: u64) -> (u64, u64) {
    let x = x as i128;
    let lo = (1659 * x - 860).div_euclid(1000);
    let hi = -((-(1700 * x + 1460)).div_euclid(1000));
    (lo.max(1) as u64, hi.max(1) as u64)
}

/// Slope and intercepts of the window for `t` obtained directly from
/// `alpha^(-t) 5^(x/2)` lying in `[1/2, 3/2]`:
/// `t in [(x log sqrt5 - log 1.5)/log alpha, (x log sqrt5 + log 2)/log alpha]`.
#[derive(Clone, Debug)]
pub struct WindowCoefficients {
    pub slope: CertifiedReal,
    pub lo_intercept: CertifiedReal,
    pub hi_intercept: CertifiedReal,
}

pub fn derived_window(precision: u32) -> WindowCoefficients {
    let p = precision;
    let la = const_log_alpha(p);
    let slope = const_log_sqrt5(p).div(&la).expect("log alpha > 0");
    let lo_intercept = (-ln(&dec("1.5", p))).div(&la).expect("log alpha > 0");
    let hi_intercept = const_ln2(p).div(&la).expect("log alpha > 0");
    WindowCoefficients { slope, lo_intercept, hi_intercept }
}

/// Whether `1.659x - 0.86 <= derived lower end` and `derived upper end <= 1.7x + 1.46`
/// for every `x >= 0`, compared coefficient by coefficient.
pub fn rounded_window_encloses_derived(precision: u32) -> Option<bool> {
    let w = derived_window(precision);
    let p = precision;
    let checks = [
        dec("1.659", p).lt(&w.slope),
        dec("-0.86", p).lt(&w.lo_intercept),
        w.slope.lt(&dec("1.7", p)),
        w.hi_intercept.lt(&dec("1.46", p)),
    ];
    checks.iter().try_fold(true, |acc, c| c.map(|v| acc && v))
}

/// One named numeric side condition of the argument, decided on enclosures.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ConstantCheck {
    pub name: String,
    pub statement: String,
    pub computed: String,
    pub holds: Option<bool>,
}

fn check(name: &str, statement: &str, lhs: &CertifiedReal, rhs: &CertifiedReal) -> ConstantCheck {
    ConstantCheck {
        name: name.into(),
        statement: statement.into(),
        computed: format!("{} vs {}", lhs, rhs),
        holds: lhs.lt(rhs),
    }
}

/// Re-derives the rounded constants that appear in the inequality chain and
/// checks that each rounded value is on the safe side.
pub fn constant_checks(precision: u32) -> Vec<ConstantCheck> {
    let p = precision;
    let la = const_log_alpha(p);
    let alpha = const_alpha(p);
    let c2 = matveev_c2(p);
    let one_plus_ln2 = &int(1, p) + &const_ln2(p);
    // Lambda_1: E = C (1 + log 2)(1 + log r) * 0.5 * 2 n log alpha
    let lambda1_coeff = &(&c2 * &one_plus_ln2) * &la;
    let z_coeff = lambda1_coeff.div(&ln(&dec("1.5", p))).expect("log 1.5 > 0");
    let w09 = weger_log_coeff(&dec("0.9", p)).expect("0.9 in (0,1)");
    let w05 = weger_log_coeff(&dec("0.5", p)).expect("0.5 in (0,1)");
    let c512 = dec("5.12", p).div(&la).expect("log alpha > 0");
    let c14 = dec("1.4", p).div(&la).expect("log alpha > 0");
    let c291 = &(&dec("2.91", p) * &dec("5.05", p)) * &dec("1e-3", p);
    let alpha134 = alpha.powi(134).expect("power");
    let lambda2_small = &int(4, p).div(&alpha134).expect("nonzero")
        + &dec("1.05", p).div(&alpha.square()).expect("nonzero");
    vec![
        check("lambda1_coefficient", "C (1+log 2) log alpha < 2.51e9", &lambda1_coeff, &dec("2.51e9", p)),
        check("z_coefficient", "2.51e9-chain / log 1.5 < 6.2e9", &z_coeff, &dec("6.2e9", p)),
        check("u_below_0_9", "2 / 1.5^2 < 0.9", &dec("2", p).div(&dec("2.25", p)).expect("nonzero"), &dec("0.9", p)),
        check("weger_0_9", "2 (-log 0.1 / 0.9) < 5.12", &w09.mul_pow2(1), &dec("5.12", p)),
        check("coeff_11", "5.12 / log alpha < 11", &c512, &int(11, p)),
        check("legendre_x103", "6.23e16 < 1.5^103 / 22",
            &dec("6.23e16", p), &dec("1.5", p).powi(103).expect("power").div(&int(22, p)).expect("nonzero")),
        check("weger_0_5", "-log 0.5 / 0.5 < 1.4", &w05, &dec("1.4", p)),
        check("coeff_2_91", "1.4 / log alpha < 2.91", &c14, &dec("2.91", p)),
        check("coeff_66", "2.91 * 5.05 / 1000 < 1/66", &c291, &CertifiedReal::from_ratio(1, 66, p)),
        check("alpha_134", "1e28 < alpha^134", &dec("1e28", p), &alpha134),
        check("lambda2_half", "4/alpha^134 + 1.05/alpha^2 < 1/2", &lambda2_small, &dec("0.5", p)),
    ]
}

/// Named caps produced by one linear-form argument.
#[derive(Clone, Debug)]
pub struct LinearFormBound {
    pub kind: LinearFormKind,
    pub exponent_bound: CertifiedReal,
    pub derived_caps: BTreeMap<String, Natural>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LinearFormKind {
    /// `1 - F_n^(-x) alpha^r`
    Lambda1,
    /// `1 - alpha^(r - n x) 5^(x/2)`
    Lambda2,
}

/// Matveev exponent for `Lambda_1` at `n = n_cap`, `B = n_cap * x_cap`
/// together with the cap on `x` it yields.
pub fn lambda1_bound(n_cap: SeqIndex, prec: Precision) -> Result<LinearFormBound, RealError> {
    let x_cap = solve_x_bound_small_n(n_cap, prec)?;
    let b = CertifiedReal::from_natural(&(&x_cap * n_cap), prec.start);
    let inst = lambda1_instance(n_cap, b, prec.start);
    let mut caps = BTreeMap::new();
    caps.insert("x".to_string(), x_cap);
    Ok(LinearFormBound {
        kind: LinearFormKind::Lambda1,
        exponent_bound: matveev_exponent(&inst, prec.start),
        derived_caps: caps,
    })
}

/// `Lambda_2` bound chain: caps on `m` and `x`.
pub fn lambda2_bound(prec: Precision) -> Result<LinearFormBound, RealError> {
    let m_cap = solve_m_bound(prec)?;
    let x_cap = x_bound_from_m(&m_cap, prec)?;
    let x_branch = solve_x_bound_k1_is_x(prec)?;
    let inst = lambda2_instance(&CertifiedReal::from_natural(&x_cap, prec.start), prec.start);
    let mut caps = BTreeMap::new();
    caps.insert("m".to_string(), m_cap);
    caps.insert("x".to_string(), x_cap);
    caps.insert("x_if_k1_is_x".to_string(), x_branch);
    Ok(LinearFormBound {
        kind: LinearFormKind::Lambda2,
        exponent_bound: matveev_exponent(&inst, prec.start),
        derived_caps: caps,
    })
}

/// Parses a decimal literal that denotes an integer (`"6.43e13"`).
pub fn decimal_integer(text: &str) -> Natural {
    let (num, den) = crate::realfield::parse_decimal(text);
    assert!(den.is_one(), "{text} is not an integer");
    assert!(!num.is_negative(), "{text} is negative");
    BigUint::from_bytes_be(&num.to_bytes_be().1)
}

/// Converts a natural to `u64`, saturating.
pub fn natural_to_u64(v: &Natural) -> u64 {
    v.to_u64().unwrap_or(u64::MAX)
}

#[allow(dead_code)]
fn natural_to_bigint(v: &Natural) -> BigInt {
    BigInt::from_biguint(Sign::Plus, v.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 128;

    fn near(x: &CertifiedReal, v: f64, tol: f64) -> bool {
        (x.to_f64() - v).abs() < tol
    }

    #[test]
    fn heights() {
        assert!(near(&log_height(HeightOf::Alpha, P), 0.240_605_912_529_8, 1e-12));
        assert!(near(&log_height(HeightOf::Sqrt5, P), 0.804_718_956_217, 1e-12));
        assert!(near(&log_height(HeightOf::Fib(4), P), 1.924_847_300_238, 1e-11));
        // exact height of F_4 = 3 is log 3, below the surrogate
        let exact = log_height_exact(HeightOf::Fib(4), P);
        assert_eq!(exact.lt(&log_height(HeightOf::Fib(4), P)), Some(true));
    }

    /// Independent evaluation of the Matveev product in f64.
    fn matveev_f64(t: f64, d: f64, b: f64, a: &[f64]) -> f64 {
        1.4 * 30f64.powf(t + 3.0) * t.powf(4.5) * d * d * (1.0 + d.ln()) * (1.0 + b.ln())
            * a.iter().product::<f64>()
    }

    #[test]
    fn matveev_single_log() {
        let inst = MatveevInstance::new(1, int(1, P), vec![dec("0.16", P)]).unwrap();
        let e = matveev_exponent(&inst, P);
        // 1.4 * 30^4 * 0.16 exactly
        assert!(e.contains_ratio(&BigInt::from(181_440), &BigInt::one()));
    }

    #[test]
    fn matveev_lambda1_shape() {
        let (n, r) = (100u64, 5000u64);
        let inst = lambda1_instance(n, int(r, P), P);
        let e = matveev_exponent(&inst, P);
        let expect = matveev_f64(2.0, 2.0, r as f64, &[0.5, 2.0 * n as f64 * 0.481_211_825_059_603_4]);
        assert!((e.to_f64() / expect - 1.0).abs() < 1e-12);
        // E / (n (1 + log r)) just below 2.51e9
        let per = e.to_f64() / (n as f64 * (1.0 + (r as f64).ln()));
        assert!(per < 2.51e9 && per > 2.50e9, "{per}");
    }

    #[test]
    fn matveev_lambda2_shape() {
        let x = int(1000, P);
        let e = matveev_exponent(&lambda2_instance(&x, P), P);
        let expect = matveev_f64(2.0, 2.0, 2500.0, &[1.61, 0.5]);
        assert!((e.to_f64() / expect - 1.0).abs() < 1e-12);
    }

    #[test]
    fn matveev_monotone() {
        let base = MatveevInstance::new(2, int(10, P), vec![dec("0.5", P), dec("1", P)]).unwrap();
        let bigger_b = MatveevInstance::new(2, int(11, P), vec![dec("0.5", P), dec("1", P)]).unwrap();
        let bigger_a = MatveevInstance::new(2, int(10, P), vec![dec("0.6", P), dec("1", P)]).unwrap();
        let e0 = matveev_exponent(&base, P);
        assert_eq!(e0.lt(&matveev_exponent(&bigger_b, P)), Some(true));
        assert_eq!(e0.lt(&matveev_exponent(&bigger_a, P)), Some(true));
    }

    #[test]
    fn matveev_rejects_bad_instances() {
        assert!(MatveevInstance::new(2, int(10, P), vec![]).is_err());
        assert!(MatveevInstance::new(2, int(10, P), vec![dec("0.1", P)]).is_err());
        assert!(MatveevInstance::new(0, int(10, P), vec![dec("0.5", P)]).is_err());
    }

    #[test]
    fn weger_coefficients() {
        let c = weger_log_coeff(&dec("0.9", P)).unwrap();
        assert!(near(&c, 2.558_427_881_104_495, 1e-12));
        assert_eq!(c.mul_pow2(1).lt(&dec("5.12", P)), Some(true));
        let c = weger_log_coeff(&dec("0.5", P)).unwrap();
        assert!(near(&c, 1.386_294_361_119_890_6, 1e-12));
        let tiny = dec("1e-6", P);
        assert!(near(&weger_log_coeff(&tiny).unwrap(), 1.0, 1e-6));
        assert!(near(&weger_exp_coeff(&tiny).unwrap(), 1.0, 1e-6));
        assert!(near(&weger_exp_coeff(&dec("0.9", P)).unwrap(), 0.9 / (1.0 - (-0.9f64).exp()), 1e-12));
        assert!(weger_log_coeff(&dec("1.5", P)).is_err());
    }

    #[test]
    fn weger_coefficients_at_least_one() {
        for k in 1..100 {
            let a = CertifiedReal::from_ratio(k, 100, P);
            let one = int(1, P);
            assert_eq!(weger_log_coeff(&a).unwrap().lt(&one), Some(false), "log, a={k}/100");
            assert_eq!(weger_exp_coeff(&a).unwrap().lt(&one), Some(false), "exp, a={k}/100");
        }
    }

    #[test]
    fn x_bound_is_sharp() {
        let prec = Precision::default();
        let xb = solve_x_bound_small_n(270, prec).unwrap();
        let x: u128 = xb.to_u128().unwrap();
        let at = |v: u128| {
            let xr = real_u128(v, 256);
            xr.lt(&small_n_rhs(270, &xr))
        };
        assert_eq!(at(x), Some(true));
        assert_eq!(at(x + 1), Some(false));
        let small = solve_x_bound_small_n(4, prec).unwrap();
        assert!(small <= xb);
    }

    #[test]
    fn x_from_m_direct() {
        let v = x_bound_from_m(&Natural::from(134u32), Precision::default()).unwrap();
        let direct = 595.2e9 * 136.0 * 136f64.ln();
        assert!((v.to_f64().unwrap() - direct).abs() < 2.0, "{v} vs {direct}");
    }

    #[test]
    fn window_examples() {
        assert_eq!(lambda2_window(2), (2, 5));
        assert_eq!(lambda2_window(100), (165, 172));
        for x in 2..=100 {
            let (lo, hi) = lambda2_window(x);
            assert!(lo <= hi);
        }
    }

    #[test]
    fn window_width_grows_slowly() {
        // ceil(1.7x + 1.46) - floor(1.659x - 0.86) <= 0.041x + 2.32 + 2
        for x in 2..=102u64 {
            let (lo, hi) = lambda2_window(x);
            let count = hi - lo + 1;
            assert!((count as f64) <= 0.041 * x as f64 + 5.32, "x={x}: {count}");
        }
        assert_eq!(lambda2_window(2), (2, 5));
    }

    #[test]
    fn rounded_window_is_conservative() {
        assert_eq!(rounded_window_encloses_derived(P), Some(true));
        let w = derived_window(P);
        assert!(near(&w.slope, 1.672_275_938_1, 1e-9));
    }

    #[test]
    fn side_conditions() {
        for c in constant_checks(256) {
            assert_eq!(c.holds, Some(true), "{}: {}", c.name, c.computed);
        }
    }

    #[test]
    fn decimal_integers() {
        assert_eq!(decimal_integer("6.43e13"), Natural::from(64_300_000_000_000u64));
    }
}
