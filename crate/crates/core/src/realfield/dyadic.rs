use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

/// An exact dyadic rational `mant * 2^exp`, kept normalised (odd mantissa,
/// or zero with exponent 0) so that equal values compare structurally equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Floor,
    Ceil,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.normalise();
        d
    }

    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn from_int(v: impl Into<BigInt>) -> Self {
        Self::new(v.into(), 0)
    }

    pub fn from_natural(v: &BigUint) -> Self {
        Self::new(BigInt::from_biguint(Sign::Plus, v.clone()), 0)
    }

    /// `2^k`
    pub fn pow2(k: i64) -> Self {
        Dyadic { mant: BigInt::from(1), exp: k }
    }

    fn normalise(&mut self) {
        match self.mant.trailing_zeros() {
            None => self.exp = 0,
            Some(tz) if tz > 0 => {
                self.mant >>= tz;
                self.exp += tz as i64;
            }
            _ => {}
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn abs(&self) -> Self {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    pub fn neg(&self) -> Self {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }

    /// Number of significant bits in the mantissa.
    pub fn bits(&self) -> u64 {
        self.mant.bits()
    }

    /// Exponent of the leading bit: `2^(msb) <= |self| < 2^(msb+1)`.
    /// Meaningless for zero.
    pub fn msb(&self) -> i64 {
        self.exp + self.mant.bits() as i64 - 1
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp + k }
    }

    fn aligned(a: &Dyadic, b: &Dyadic) -> (BigInt, BigInt, i64) {
        let e = a.exp.min(b.exp);
        let am = &a.mant << (a.exp - e) as usize;
        let bm = &b.mant << (b.exp - e) as usize;
        (am, bm, e)
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (a, b, e) = Self::aligned(self, other);
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    /// Rounds to at most `bits` significant bits in the given direction.
    pub fn round(&self, bits: u64, mode: Round) -> Dyadic {
        let have = self.mant.bits();
        if have <= bits {
            return self.clone();
        }
        let shift = have - bits;
        // BigInt >> rounds toward negative infinity
        let floor = &self.mant >> shift as usize;
        let mant = match mode {
            Round::Floor => floor,
            Round::Ceil => {
                if (&floor << shift as usize) == self.mant {
                    floor
                } else {
                    floor + 1
                }
            }
        };
        Dyadic::new(mant, self.exp + shift as i64)
    }

    /// Largest integer `<= self`.
    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as usize
        } else {
            &self.mant >> (-self.exp) as usize
        }
    }

    /// Smallest integer `>= self`.
    pub fn ceil(&self) -> BigInt {
        -(self.neg().floor())
    }

    /// `self / other` for positive operands, rounded in the given direction to
    /// at least `bits` significant bits.
    pub fn div_pos(&self, other: &Dyadic, bits: u64, mode: Round) -> Dyadic {
        assert!(self.signum() >= 0 && other.signum() > 0, "div_pos needs n >= 0, d > 0");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let shift = (bits + other.bits()).saturating_sub(self.bits()) + 1;
        let num = &self.mant << shift as usize;
        let (q, r) = num.div_rem(&other.mant);
        let q = if mode == Round::Ceil && !r.is_zero() { q + 1 } else { q };
        Dyadic::new(q, self.exp - other.exp - shift as i64)
    }

    /// Exact comparison with the rational `num / den` (`den > 0`).
    pub fn cmp_ratio(&self, num: &BigInt, den: &BigInt) -> Ordering {
        debug_assert!(den.is_positive());
        let lhs = &self.mant * den;
        if self.exp >= 0 {
            (lhs << self.exp as usize).cmp(num)
        } else {
            lhs.cmp(&(num << (-self.exp) as usize))
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits();
        let (m, e) = if bits > 60 {
            let s = bits - 60;
            (&self.mant >> s as usize, self.exp + s as i64)
        } else {
            (self.mant.clone(), self.exp)
        };
        let m = m.to_f64().unwrap_or(f64::NAN);
        m * 2f64.powi(e.clamp(i32::MIN as i64, i32::MAX as i64) as i32)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        // same sign: compare magnitudes by leading bit first
        let ord_mag = match self.msb().cmp(&other.msb()) {
            Ordering::Equal => {
                let (a, b, _) = Self::aligned(&self.abs(), &other.abs());
                a.cmp(&b)
            }
            o => o,
        };
        if sa > 0 {
            ord_mag
        } else {
            ord_mag.reverse()
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{} (~{:e})", self.mant, self.exp, self.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(m: i64, e: i64) -> Dyadic {
        Dyadic::new(BigInt::from(m), e)
    }

    #[test]
    fn normalises() {
        assert_eq!(d(8, 0), d(1, 3));
        assert_eq!(d(0, 7), Dyadic::zero());
    }

    #[test]
    fn ordering() {
        assert!(d(3, -1) < d(2, 0));
        assert!(d(-3, -1) > d(-2, 0));
        assert!(d(-1, 10) < d(1, -10));
        assert_eq!(d(5, 2).cmp(&d(20, 0)), Ordering::Equal);
    }

    #[test]
    fn rounding_directions() {
        let x = d(0b10111, 0);
        assert_eq!(x.round(3, Round::Floor), d(0b101, 2));
        assert_eq!(x.round(3, Round::Ceil), d(0b110, 2));
        let y = d(-0b10111, 0);
        assert_eq!(y.round(3, Round::Floor), d(-0b110, 2));
        assert_eq!(y.round(3, Round::Ceil), d(-0b101, 2));
    }

    #[test]
    fn floor_and_ceil() {
        assert_eq!(d(7, -1).floor(), BigInt::from(3));
        assert_eq!(d(-7, -1).floor(), BigInt::from(-4));
        assert_eq!(d(7, -1).ceil(), BigInt::from(4));
        assert_eq!(d(3, 2).ceil(), BigInt::from(12));
    }

    #[test]
    fn division_brackets_quotient() {
        let one = d(1, 0);
        let three = d(3, 0);
        let lo = one.div_pos(&three, 40, Round::Floor);
        let hi = one.div_pos(&three, 40, Round::Ceil);
        assert_eq!(lo.cmp_ratio(&BigInt::from(1), &BigInt::from(3)), Ordering::Less);
        assert_eq!(hi.cmp_ratio(&BigInt::from(1), &BigInt::from(3)), Ordering::Greater);
        assert!(hi.sub(&lo) <= Dyadic::pow2(-40));
    }
}
