use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::Zero;

use super::ball::CertifiedReal;
use super::dyadic::{Dyadic, Round};
use super::RealError;

/// Guard bits used inside series evaluations.
const GUARD: u32 = 64;

/// Largest `2^k` scaling the exponential accepts before argument halving.
const EXP_MAX_MSB: i64 = 24;

fn sqrt_dyadic(v: &Dyadic, bits: u64, mode: Round) -> Dyadic {
    if v.is_zero() {
        return Dyadic::zero();
    }
    let m = v.mantissa().magnitude().clone();
    let e = v.exponent();
    let mut k = (2 * bits + 2).saturating_sub(m.bits()) as i64;
    if (e - k).rem_euclid(2) != 0 {
        k += 1;
    }
    let n: BigUint = m << k as usize;
    let mut s = n.sqrt();
    if mode == Round::Ceil && &s * &s != n {
        s += 1u32;
    }
    Dyadic::new(BigInt::from_biguint(Sign::Plus, s), (e - k) / 2)
}

impl CertifiedReal {
    /// Square root. Balls reaching below zero are clipped at zero; a ball
    /// entirely below zero is a domain error.
    pub fn sqrt(&self) -> Result<CertifiedReal, RealError> {
        let hi = self.hi();
        if hi.is_negative() {
            return Err(RealError::Domain { op: "sqrt", detail: format!("{self:?} is negative") });
        }
        let lo = self.lo();
        let lo = if lo.is_negative() { Dyadic::zero() } else { lo };
        let bits = self.precision() as u64 + 8;
        let s_lo = sqrt_dyadic(&lo, bits, Round::Floor);
        let s_hi = sqrt_dyadic(&hi, bits, Round::Ceil);
        Ok(CertifiedReal::from_endpoints(&s_lo, &s_hi, self.precision()))
    }

    /// Natural logarithm of a ball that lies strictly above zero.
    pub fn ln(&self) -> Result<CertifiedReal, RealError> {
        let lo = self.lo();
        if lo.signum() <= 0 {
            return Err(RealError::Domain { op: "ln", detail: format!("{self:?} is not positive") });
        }
        let at_mid = ln_point(self.midpoint(), self.precision());
        if self.radius().is_zero() {
            return Ok(at_mid);
        }
        // ln is 1/lo-Lipschitz on [lo, hi]
        let lip = self.radius().div_pos(&lo, 30, Round::Ceil);
        Ok(at_mid.add_error(&lip))
    }

    /// Exponential. Supports arguments up to about `2^24` in magnitude.
    pub fn exp(&self) -> Result<CertifiedReal, RealError> {
        let p = self.precision();
        if self.radius().is_zero() {
            return exp_point(self.midpoint(), p);
        }
        let lo = exp_point(&self.lo(), p)?;
        let hi = exp_point(&self.hi(), p)?;
        Ok(CertifiedReal::from_endpoints(&lo.lo(), &hi.hi(), p))
    }
}

/// `2 * atanh(s)` for an exact or narrow ball `s` with `|s| <= 1/2`.
fn two_atanh(s: &CertifiedReal, work: u32) -> CertifiedReal {
    let s2 = s.square();
    let s2_max = s2.mag();
    let target = Dyadic::pow2(-(work as i64) - 4);
    let mut term = s.clone();
    let mut sum = s.clone();
    let mut j: u64 = 0;
    loop {
        // remaining tail <= |s|^(2j+3) / (1 - s^2) <= 2 |s|^(2j+3)
        let bound = term.mag().mul(&s2_max).mul_pow2(1);
        if bound <= target {
            sum = sum.add_error(&bound);
            break;
        }
        j += 1;
        term = &term * &s2;
        let denom = CertifiedReal::from_int(2 * j + 1, work);
        sum = &sum + &term.div(&denom).expect("positive integer divisor");
    }
    sum.mul_pow2(1)
}

fn ln2_cached(work: u32) -> CertifiedReal {
    cached(Const::Ln2, work, || two_atanh(&CertifiedReal::from_ratio(1, 3, work), work))
}

/// `ln v` for an exact positive dyadic.
fn ln_point(v: &Dyadic, precision: u32) -> CertifiedReal {
    debug_assert!(v.signum() > 0);
    let work = precision + GUARD;
    // v = y * 2^k with y in [1/sqrt2, sqrt2)
    let mut k = v.msb() + 1;
    let mut y = v.mul_pow2(-k);
    // 0.7071... ~ 46341/65536 from below is close enough; only |s| <= 0.18 matters
    if y < Dyadic::new(BigInt::from(46341), -16) {
        y = y.mul_pow2(1);
        k -= 1;
    }
    let one = Dyadic::from_int(1);
    let num = CertifiedReal::exact(y.sub(&one), work);
    let den = CertifiedReal::exact(y.add(&one), work);
    let s = num.div(&den).expect("y + 1 > 0");
    let mut out = two_atanh(&s, work);
    if k != 0 {
        out = &out + &(&ln2_cached(work) * &CertifiedReal::from_int(k, work));
    }
    out.with_precision(precision)
}

/// `exp z` for an exact dyadic by halving, Taylor series and repeated squaring.
fn exp_point(z: &Dyadic, precision: u32) -> Result<CertifiedReal, RealError> {
    if z.is_zero() {
        return Ok(CertifiedReal::from_int(1, precision));
    }
    let msb = z.msb();
    if msb > EXP_MAX_MSB {
        return Err(RealError::Domain { op: "exp", detail: format!("argument {z:?} too large") });
    }
    let halvings = (msb + 12).max(0);
    let work = precision + GUARD + halvings as u32;
    let u = CertifiedReal::exact(z.mul_pow2(-halvings), work);
    let target = Dyadic::pow2(-(work as i64) - 4);
    let mut term = CertifiedReal::from_int(1, work);
    let mut sum = term.clone();
    let u_mag = u.mag();
    let mut k: u64 = 0;
    loop {
        k += 1;
        term = (&term * &u).div(&CertifiedReal::from_int(k, work)).expect("k > 0");
        sum = &sum + &term;
        // |u| < 2^-11: remaining tail <= 2 |term| |u|
        let bound = term.mag().mul(&u_mag).mul_pow2(1);
        if bound <= target {
            sum = sum.add_error(&bound);
            break;
        }
    }
    for _ in 0..halvings {
        sum = sum.square();
    }
    Ok(sum.with_precision(precision))
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Const {
    Ln2,
    Sqrt5,
    LnAlpha,
    LnSqrt5,
}

fn cached(which: Const, precision: u32, make: impl FnOnce() -> CertifiedReal) -> CertifiedReal {
    static CACHE: OnceLock<Mutex<HashMap<(Const, u32), CertifiedReal>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().expect("constant cache").get(&(which, precision)) {
        return v.clone();
    }
    let v = make();
    cache.lock().expect("constant cache").insert((which, precision), v.clone());
    v
}

pub fn const_sqrt5(precision: u32) -> CertifiedReal {
    cached(Const::Sqrt5, precision, || {
        CertifiedReal::from_int(5, precision + 8).sqrt().expect("5 > 0").with_precision(precision)
    })
}

/// The golden ratio `(1 + sqrt 5) / 2`.
pub fn const_alpha(precision: u32) -> CertifiedReal {
    let s = const_sqrt5(precision + 8);
    (&s + &CertifiedReal::from_int(1, precision + 8)).mul_pow2(-1).with_precision(precision)
}

/// `(1 - sqrt 5) / 2 = -1/alpha`.
pub fn const_beta(precision: u32) -> CertifiedReal {
    let s = const_sqrt5(precision + 8);
    (&CertifiedReal::from_int(1, precision + 8) - &s).mul_pow2(-1).with_precision(precision)
}

pub fn const_log_alpha(precision: u32) -> CertifiedReal {
    cached(Const::LnAlpha, precision, || {
        const_alpha(precision + 16).ln().expect("alpha > 0").with_precision(precision)
    })
}

/// `ln sqrt 5 = (ln 5) / 2`.
pub fn const_log_sqrt5(precision: u32) -> CertifiedReal {
    cached(Const::LnSqrt5, precision, || {
        CertifiedReal::from_int(5, precision).ln().expect("5 > 0").mul_pow2(-1)
    })
}

pub fn const_ln2(precision: u32) -> CertifiedReal {
    ln2_cached(precision + GUARD).with_precision(precision)
}

/// Enclosure of `ln v` for an integer `v >= 1`.
pub fn log_of_natural(v: &BigUint, precision: u32) -> Result<CertifiedReal, RealError> {
    if v.is_zero() {
        return Err(RealError::LogOfZero);
    }
    CertifiedReal::from_natural(v, precision).ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn assert_near(x: &CertifiedReal, expect: f64, tol: f64) {
        assert!((x.to_f64() - expect).abs() < tol, "{x:?} vs {expect}");
    }

    #[test]
    fn constants() {
        let a = const_alpha(64);
        assert_near(&a, 1.618_033_988_749_895, 1e-15);
        assert!(a.radius() <= &Dyadic::pow2(-62));
        assert_near(&const_log_alpha(64), 0.481_211_825_059_603_4, 1e-15);
        assert_near(&const_log_sqrt5(64), 0.804_718_956_217_050_2, 1e-15);
        assert_near(&const_ln2(64), std::f64::consts::LN_2, 1e-16);
        assert!(const_log_alpha(64).radius() <= &Dyadic::pow2(-62));
        assert!(const_log_sqrt5(64).radius() <= &Dyadic::pow2(-62));
    }

    #[test]
    fn alpha_beta_relations() {
        let p = 256;
        let a = const_alpha(p);
        let b = const_beta(p);
        let prod = &(&a * &b) + &CertifiedReal::from_int(1, p);
        assert!(prod.contains_dyadic(&Dyadic::zero()));
        let sum = &(&a + &b) - &CertifiedReal::from_int(1, p);
        assert!(sum.contains_dyadic(&Dyadic::zero()));
    }

    #[test]
    fn logs_of_small_naturals() {
        let l1 = log_of_natural(&BigUint::one(), 64).unwrap();
        assert!(l1.contains_dyadic(&Dyadic::zero()));
        assert_near(&log_of_natural(&BigUint::from(2u32), 64).unwrap(), std::f64::consts::LN_2, 1e-16);
        assert!(log_of_natural(&BigUint::zero(), 64).is_err());
    }

    #[test]
    fn sqrt_brackets_square() {
        let x = CertifiedReal::from_ratio(2, 1, 200).sqrt().unwrap();
        let sq = x.square();
        assert!(sq.contains_dyadic(&Dyadic::from_int(2)));
        assert!(sq.radius() < &Dyadic::pow2(-190));
    }

    #[test]
    fn exp_and_ln_are_inverse() {
        let p = 160;
        for (n, d) in [(1i64, 3i64), (-9, 10), (7, 2), (-25, 1)] {
            let x = CertifiedReal::from_ratio(n, d, p);
            let back = x.exp().unwrap().ln().unwrap();
            assert!((&back - &x).mag() < Dyadic::pow2(-140), "{n}/{d}: {back:?}");
        }
    }

    #[test]
    fn ln_of_wide_ball_contains_endpoint_logs() {
        let ball = CertifiedReal::from_endpoints(&Dyadic::from_int(2), &Dyadic::from_int(3), 64);
        let l = ball.ln().unwrap();
        assert!(l.lo().to_f64() <= 2f64.ln() && l.hi().to_f64() >= 3f64.ln());
    }

    #[test]
    fn high_precision_log_alpha() {
        let p = 1024;
        let la = const_log_alpha(p);
        assert!(la.radius() <= &Dyadic::pow2(-(p as i64) + 2));
        // alpha^2 = alpha + 1 so 2 ln alpha = ln(alpha + 1)
        let rhs = (&const_alpha(p + 32) + &CertifiedReal::from_int(1, p + 32)).ln().unwrap();
        assert!((&la.mul_pow2(1) - &rhs).mag() < Dyadic::pow2(-(p as i64) + 8));
    }
}
