use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use super::dyadic::{Dyadic, Round};
use super::RealError;

/// Significant bits kept in a radius. Radii are always rounded up.
const RADIUS_BITS: u64 = 30;

/// A real number known to lie in `[mid - rad, mid + rad]`.
///
/// `precision` is the number of significant bits the midpoint is rounded to
/// after each operation. Every operation returns a ball that contains the
/// exact result for every choice of inputs inside the operand balls.
#[derive(Clone, PartialEq, Eq)]
pub struct CertifiedReal {
    mid: Dyadic,
    rad: Dyadic,
    precision: u32,
}

impl CertifiedReal {
    pub fn exact(value: Dyadic, precision: u32) -> Self {
        CertifiedReal { mid: value, rad: Dyadic::zero(), precision }
    }

    pub fn from_int(v: impl Into<BigInt>, precision: u32) -> Self {
        Self::exact(Dyadic::from_int(v), precision)
    }

    pub fn from_natural(v: &BigUint, precision: u32) -> Self {
        Self::exact(Dyadic::from_natural(v), precision)
    }

    /// Enclosure of `num / den`.
    pub fn from_ratio(num: impl Into<BigInt>, den: impl Into<BigInt>, precision: u32) -> Self {
        let (num, den) = (num.into(), den.into());
        assert!(!den.is_zero(), "zero denominator");
        let n = Self::from_int(num, precision);
        let d = Self::from_int(den, precision);
        n.div(&d).expect("nonzero exact denominator")
    }

    /// Enclosure of a decimal literal such as `"6.43e13"` or `"0.16"`.
    pub fn from_decimal(text: &str, precision: u32) -> Self {
        let (num, den) = parse_decimal(text);
        Self::from_ratio(num, den, precision)
    }

    /// The ball `[lo, hi]`, midpoint rounded to `precision` bits.
    pub fn from_endpoints(lo: &Dyadic, hi: &Dyadic, precision: u32) -> Self {
        debug_assert!(lo <= hi);
        let mid = lo.add(hi).mul_pow2(-1);
        let rad = hi.sub(lo).mul_pow2(-1);
        Self::finish(mid, rad, precision)
    }

    /// Rounds `mid` to `precision` bits and folds the rounding error into the
    /// radius.
    fn finish(mid: Dyadic, rad: Dyadic, precision: u32) -> Self {
        let rounded = mid.round(precision as u64, Round::Floor);
        let err = mid.sub(&rounded);
        let rad = round_rad(&rad.add(&err));
        CertifiedReal { mid: rounded, rad, precision }
    }

    pub fn midpoint(&self) -> &Dyadic {
        &self.mid
    }

    pub fn radius(&self) -> &Dyadic {
        &self.rad
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// Same ball, future operations rounded to `precision` bits.
    pub fn with_precision(&self, precision: u32) -> Self {
        Self::finish(self.mid.clone(), self.rad.clone(), precision)
    }

    pub fn lo(&self) -> Dyadic {
        self.mid.sub(&self.rad)
    }

    pub fn hi(&self) -> Dyadic {
        self.mid.add(&self.rad)
    }

    /// Upper bound on `|x|` over the ball.
    pub fn mag(&self) -> Dyadic {
        self.mid.abs().add(&self.rad)
    }

    /// Lower bound on `|x|` over the ball (zero if the ball contains zero).
    pub fn mig(&self) -> Dyadic {
        let m = self.mid.abs().sub(&self.rad);
        if m.is_negative() {
            Dyadic::zero()
        } else {
            m
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    pub fn contains_dyadic(&self, v: &Dyadic) -> bool {
        &self.lo() <= v && v <= &self.hi()
    }

    /// Exact test that `num/den` lies in the ball.
    pub fn contains_ratio(&self, num: &BigInt, den: &BigInt) -> bool {
        let (num, den) = if den.is_negative() { (-num, -den) } else { (num.clone(), den.clone()) };
        self.lo().cmp_ratio(&num, &den) != Ordering::Greater
            && self.hi().cmp_ratio(&num, &den) != Ordering::Less
    }

    /// Sign of every point in the ball, or `None` when the ball straddles or
    /// touches zero without being the exact point zero.
    pub fn sign(&self) -> Option<Ordering> {
        if self.rad.is_zero() {
            return Some(self.mid.signum().cmp(&0));
        }
        if self.lo().signum() > 0 {
            Some(Ordering::Greater)
        } else if self.hi().signum() < 0 {
            Some(Ordering::Less)
        } else {
            None
        }
    }

    /// Three-valued comparison: `Some(ord)` when every pair of points in the
    /// two balls compares as `ord`.
    pub fn cmp_certified(&self, other: &CertifiedReal) -> Option<Ordering> {
        if self.hi() < other.lo() {
            Some(Ordering::Less)
        } else if self.lo() > other.hi() {
            Some(Ordering::Greater)
        } else if self.rad.is_zero() && other.rad.is_zero() && self.mid == other.mid {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// `Some(true)` if certainly `self < other`, `Some(false)` if certainly
    /// `self >= other`, `None` otherwise.
    pub fn lt(&self, other: &CertifiedReal) -> Option<bool> {
        if self.hi() < other.lo() {
            Some(true)
        } else if self.lo() >= other.hi() {
            Some(false)
        } else {
            None
        }
    }

    /// Three-valued `self < num/den`.
    pub fn lt_ratio(&self, num: &BigInt, den: &BigInt) -> Option<bool> {
        if self.hi().cmp_ratio(num, den) == Ordering::Less {
            Some(true)
        } else if self.lo().cmp_ratio(num, den) != Ordering::Less {
            Some(false)
        } else {
            None
        }
    }

    /// `floor` of every point in the ball, when they all agree.
    pub fn floor_certified(&self) -> Option<BigInt> {
        let lo = self.lo().floor();
        let hi = self.hi().floor();
        (lo == hi).then_some(lo)
    }

    /// Smallest integer certainly `>=` every point of the ball.
    pub fn ceil_upper(&self) -> BigInt {
        self.hi().ceil()
    }

    /// Largest integer certainly `<=` every point of the ball.
    pub fn floor_lower(&self) -> BigInt {
        self.lo().floor()
    }

    /// Exact scaling by `2^k`.
    pub fn mul_pow2(&self, k: i64) -> Self {
        CertifiedReal {
            mid: self.mid.mul_pow2(k),
            rad: self.rad.mul_pow2(k),
            precision: self.precision,
        }
    }

    /// Widens the radius by `extra` (rounded up).
    pub fn add_error(&self, extra: &Dyadic) -> Self {
        CertifiedReal {
            mid: self.mid.clone(),
            rad: round_rad(&self.rad.add(&extra.abs())),
            precision: self.precision,
        }
    }

    pub fn abs(&self) -> Self {
        match self.sign() {
            Some(Ordering::Less) => -self,
            Some(_) => self.clone(),
            None => {
                let top = self.mag();
                Self::from_endpoints(&Dyadic::zero(), &top, self.precision)
            }
        }
    }

    pub fn recip(&self) -> Result<Self, RealError> {
        CertifiedReal::from_int(1, self.precision).div(self)
    }

    pub fn div(&self, other: &CertifiedReal) -> Result<Self, RealError> {
        let prec = self.precision.max(other.precision);
        let dmig = other.mig();
        if dmig.is_zero() {
            return Err(RealError::Domain {
                op: "div",
                detail: format!("divisor {other:?} contains zero"),
            });
        }
        // quotient of midpoints, truncated toward zero: error < 1 ulp
        let bits = prec as u64 + 2;
        let num_abs = self.mid.abs();
        let den_abs = other.mid.abs();
        let q_abs = num_abs.div_pos(&den_abs, bits, Round::Floor);
        let ulp = if q_abs.is_zero() { Dyadic::zero() } else { Dyadic::pow2(q_abs.msb() - bits as i64 + 1) };
        let negative = (self.mid.signum() < 0) != (other.mid.signum() < 0);
        let q = if negative { q_abs.neg() } else { q_abs };
        // |a/b - ma/mb| <= (ra |mb| + |ma| rb) / (|mb| (|mb| - rb))
        let prop = if self.rad.is_zero() && other.rad.is_zero() {
            Dyadic::zero()
        } else {
            let numer = self.rad.mul(&den_abs).add(&num_abs.mul(&other.rad));
            let denom = den_abs.mul(&dmig);
            numer.div_pos(&denom, RADIUS_BITS, Round::Ceil)
        };
        let rad = self_rad_sum(&[&ulp, &prop]);
        Ok(Self::finish(q, rad, prec))
    }

    /// `self^n` for any integer `n` (negative powers require a nonzero ball).
    pub fn powi(&self, n: i64) -> Result<Self, RealError> {
        if n < 0 {
            return self.recip()?.powi(-n);
        }
        let mut result = CertifiedReal::from_int(1, self.precision);
        let mut base = self.clone();
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(result)
    }

    pub fn square(&self) -> Self {
        self * self
    }
}

fn round_rad(r: &Dyadic) -> Dyadic {
    r.abs().round(RADIUS_BITS, Round::Ceil)
}

fn self_rad_sum(parts: &[&Dyadic]) -> Dyadic {
    parts.iter().fold(Dyadic::zero(), |acc, p| acc.add(p))
}

impl Add for &CertifiedReal {
    type Output = CertifiedReal;
    fn add(self, rhs: &CertifiedReal) -> CertifiedReal {
        let prec = self.precision.max(rhs.precision);
        CertifiedReal::finish(self.mid.add(&rhs.mid), self.rad.add(&rhs.rad), prec)
    }
}

impl Sub for &CertifiedReal {
    type Output = CertifiedReal;
    fn sub(self, rhs: &CertifiedReal) -> CertifiedReal {
        let prec = self.precision.max(rhs.precision);
        CertifiedReal::finish(self.mid.sub(&rhs.mid), self.rad.add(&rhs.rad), prec)
    }
}

impl Mul for &CertifiedReal {
    type Output = CertifiedReal;
    fn mul(self, rhs: &CertifiedReal) -> CertifiedReal {
        let prec = self.precision.max(rhs.precision);
        let mid = self.mid.mul(&rhs.mid);
        let rad = if self.rad.is_zero() && rhs.rad.is_zero() {
            Dyadic::zero()
        } else {
            self.mid
                .abs()
                .mul(&rhs.rad)
                .add(&rhs.mid.abs().mul(&self.rad))
                .add(&self.rad.mul(&rhs.rad))
        };
        CertifiedReal::finish(mid, rad, prec)
    }
}

impl Neg for &CertifiedReal {
    type Output = CertifiedReal;
    fn neg(self) -> CertifiedReal {
        CertifiedReal { mid: self.mid.neg(), rad: self.rad.clone(), precision: self.precision }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for CertifiedReal {
            type Output = CertifiedReal;
            fn $m(self, rhs: CertifiedReal) -> CertifiedReal {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&CertifiedReal> for CertifiedReal {
            type Output = CertifiedReal;
            fn $m(self, rhs: &CertifiedReal) -> CertifiedReal {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CertifiedReal {
    type Output = CertifiedReal;
    fn neg(self) -> CertifiedReal {
        -&self
    }
}

impl fmt::Debug for CertifiedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e} +/- {:e}]", self.mid.to_f64(), self.rad.to_f64())
    }
}

impl fmt::Display for CertifiedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.12e} +/- {:.2e}", self.mid.to_f64(), self.rad.to_f64())
    }
}

/// Parses `[-]digits[.digits][e[-]digits]` into an exact fraction.
pub fn parse_decimal(text: &str) -> (BigInt, BigInt) {
    let text = text.trim();
    let (body, exp) = match text.find(['e', 'E']) {
        Some(i) => (&text[..i], text[i + 1..].parse::<i64>().expect("decimal exponent")),
        None => (text, 0),
    };
    let (neg, body) = match body.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, body),
    };
    let (int_part, frac_part) = match body.find('.') {
        Some(i) => (&body[..i], &body[i + 1..]),
        None => (body, ""),
    };
    let digits = format!("{int_part}{frac_part}");
    let mut num: BigInt = digits.parse().expect("decimal digits");
    if neg {
        num = -num;
    }
    let scale = exp - frac_part.len() as i64;
    let ten = BigInt::from(10);
    if scale >= 0 {
        (num * num_traits::pow(ten, scale as usize), BigInt::one())
    } else {
        (num, num_traits::pow(ten, (-scale) as usize))
    }
}
