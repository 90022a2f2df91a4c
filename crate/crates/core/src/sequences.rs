//! Exact Fibonacci and Lucas arithmetic on arbitrary-precision integers.
//!
//! Values are `BigUint`; subscripts are machine integers. Both sequences are
//! evaluated with the fast-doubling recurrences
//!
//! ```text
//! F(2k)   = F(k) * (2 F(k+1) - F(k))
//! F(2k+1) = F(k)^2 + F(k+1)^2
//! ```
//!
//! and Lucas numbers are read off the Fibonacci pair via `L(n) = 2 F(n+1) - F(n)`.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision nonnegative integer. Subtraction panics on underflow;
/// use `CheckedSub` where the sign is not known in advance.
pub type Natural = BigUint;

/// Subscript of a Fibonacci or Lucas number.
pub type SeqIndex = u64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeqError {
    #[error("0 is not a Lucas number")]
    ZeroLucas,
}

/// Returns `(F(n), F(n+1))`.
pub fn fib_pair(n: SeqIndex) -> (Natural, Natural) {
    let mut a = Natural::zero();
    let mut b = Natural::one();
    if n == 0 {
        return (a, b);
    }
    let top = 63 - n.leading_zeros();
    for bit in (0..=top).rev() {
        // (a, b) = (F(k), F(k+1)) -> (F(2k), F(2k+1))
        let two_b = &b << 1usize;
        let c = &a * (two_b - &a);
        let d = &a * &a + &b * &b;
        if (n >> bit) & 1 == 1 {
            b = &c + &d;
            a = d;
        } else {
            a = c;
            b = d;
        }
    }
    (a, b)
}

pub fn fib(n: SeqIndex) -> Natural {
    fib_pair(n).0
}

/// Returns `(L(n), L(n+1))`.
pub fn lucas_pair(n: SeqIndex) -> (Natural, Natural) {
    let (f0, f1) = fib_pair(n);
    let l0 = (&f1 << 1usize) - &f0;
    let l1 = (&f0 << 1usize) + &f1;
    (l0, l1)
}

pub fn lucas(n: SeqIndex) -> Natural {
    lucas_pair(n).0
}

/// `F(0..=n_max)` by the plain recurrence.
pub fn fib_table(n_max: SeqIndex) -> Vec<Natural> {
    recurrence_table(Natural::zero(), Natural::one(), n_max)
}

/// `L(0..=n_max)` by the plain recurrence.
pub fn lucas_table(n_max: SeqIndex) -> Vec<Natural> {
    recurrence_table(Natural::from(2u32), Natural::one(), n_max)
}

fn recurrence_table(s0: Natural, s1: Natural, n_max: SeqIndex) -> Vec<Natural> {
    let len = n_max as usize + 1;
    let mut out = Vec::with_capacity(len.max(2));
    out.push(s0);
    out.push(s1);
    for i in 2..len {
        let next = &out[i - 1] + &out[i - 2];
        out.push(next);
    }
    out.truncate(len);
    out
}

const LN_ALPHA: f64 = 0.481_211_825_059_603_4;
const LN_SQRT5: f64 = 0.804_718_956_217_050_2;

/// Natural logarithm of a positive integer to about 1e-15 relative accuracy.
/// Only used to guess an index; every answer is confirmed exactly.
fn approx_ln(v: &Natural) -> f64 {
    let bits = v.bits();
    if bits <= 64 {
        return v.to_u64().expect("fits in u64").to_f64().unwrap_or(0.0).ln();
    }
    let shift = bits - 64;
    let top = (v >> shift).to_u64().expect("64-bit prefix");
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Returns `r` with `L(r) = v`, or `None` when `v` is not a Lucas number.
///
/// The index is estimated from the magnitude of `v` (since `L(r)` lies within
/// a factor `1 +- alpha^(-2r)` of `alpha^r`) and then confirmed by comparing
/// `L(r-1)`, `L(r)` and `L(r+1)` exactly.
pub fn lucas_index_of(v: &Natural) -> Result<Option<SeqIndex>, SeqError> {
    if v.is_zero() {
        return Err(SeqError::ZeroLucas);
    }
    if let Some(small) = v.to_u64() {
        if small < 4 {
            // L(1) = 1, L(0) = 2, L(2) = 3
            return Ok(match small {
                1 => Some(1),
                2 => Some(0),
                3 => Some(2),
                _ => None,
            });
        }
    }
    let guess = (approx_ln(v) / LN_ALPHA).round() as SeqIndex;
    let lo = guess.saturating_sub(1);
    Ok(scan_window(lo, v, lucas_pair))
}

/// Like [`lucas_index_of`], but only reports indices inside `allowed`
/// (inclusive bounds). Candidates outside the window are never materialised.
pub fn lucas_index_in(
    v: &Natural,
    allowed: (SeqIndex, SeqIndex),
) -> Result<Option<SeqIndex>, SeqError> {
    if v.is_zero() {
        return Err(SeqError::ZeroLucas);
    }
    if v.bits() <= 3 {
        return Ok(lucas_index_of(v)?.filter(|r| (allowed.0..=allowed.1).contains(r)));
    }
    let guess = (approx_ln(v) / LN_ALPHA).round() as SeqIndex;
    let lo = guess.saturating_sub(1).max(allowed.0);
    let hi = (guess + 1).min(allowed.1);
    if lo > hi {
        return Ok(None);
    }
    Ok(scan_range(lo, hi, v, lucas_pair))
}

/// Returns the largest `r` with `F(r) = v` (so `1` maps to `2`), or `None`.
pub fn fib_index_of(v: &Natural) -> Option<SeqIndex> {
    if let Some(small) = v.to_u64() {
        match small {
            0 => return Some(0),
            1 => return Some(2),
            2 => return Some(3),
            _ => {}
        }
    }
    let guess = ((approx_ln(v) + LN_SQRT5) / LN_ALPHA).round() as SeqIndex;
    scan_window(guess.saturating_sub(1), v, fib_pair)
}

fn scan_window(
    lo: SeqIndex,
    v: &Natural,
    pair: fn(SeqIndex) -> (Natural, Natural),
) -> Option<SeqIndex> {
    scan_range(lo, lo + 2, v, pair)
}

fn scan_range(
    lo: SeqIndex,
    hi: SeqIndex,
    v: &Natural,
    pair: fn(SeqIndex) -> (Natural, Natural),
) -> Option<SeqIndex> {
    let (mut cur, mut next) = pair(lo);
    for r in lo..=hi {
        if &cur == v {
            return Some(r);
        }
        if &cur > v {
            return None;
        }
        let after = &cur + &next;
        cur = std::mem::replace(&mut next, after);
    }
    None
}

/// Which exact identity failed in [`check_identities`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Identity {
    /// `L(n) = F(n-1) + F(n+1)`, n >= 1
    LucasAsFibSum,
    /// `F(n+2) - F(n-2) = L(n)`, n >= 2
    FibGap4,
    /// `F(k+1) - F(k-3) = L(k-1)`, k >= 4
    ShiftedFamily,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdentityVerdict {
    Pass,
    Fail { identity: Identity, n: SeqIndex },
}

impl IdentityVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, IdentityVerdict::Pass)
    }
}

/// Checks the three exact identities for every admissible index up to
/// `n_max`, comparing a recurrence-built Fibonacci table against
/// fast-doubling Lucas values. Returns the first counterexample.
pub fn check_identities(n_max: SeqIndex) -> IdentityVerdict {
    let n_max = n_max.max(2);
    let f = fib_table(n_max + 2);
    for n in 1..=n_max {
        let l = lucas(n);
        let i = n as usize;
        if l != &f[i - 1] + &f[i + 1] {
            return IdentityVerdict::Fail { identity: Identity::LucasAsFibSum, n };
        }
        if n >= 2 && &f[i + 2] - &f[i - 2] != l {
            return IdentityVerdict::Fail { identity: Identity::FibGap4, n };
        }
    }
    for k in 4..=n_max {
        let i = k as usize;
        if &f[i + 1] - &f[i - 3] != lucas(k - 1) {
            return IdentityVerdict::Fail { identity: Identity::ShiftedFamily, n: k };
        }
    }
    IdentityVerdict::Pass
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_fib(n: usize) -> Natural {
        let (mut a, mut b) = (Natural::zero(), Natural::one());
        for _ in 0..n {
            let c = &a + &b;
            a = std::mem::replace(&mut b, c);
        }
        a
    }

    #[test]
    fn small_values() {
        assert_eq!(fib(0), Natural::zero());
        assert_eq!(fib(1), Natural::one());
        assert_eq!(fib(10), Natural::from(55u32));
        assert_eq!(lucas(0), Natural::from(2u32));
        assert_eq!(lucas(1), Natural::one());
        assert_eq!(lucas(4), Natural::from(7u32));
    }

    #[test]
    fn fast_doubling_matches_recurrence() {
        let f = fib_table(2000);
        let l = lucas_table(2000);
        for n in 0..=2000u64 {
            assert_eq!(fib(n), f[n as usize], "F({n})");
            assert_eq!(lucas(n), l[n as usize], "L({n})");
        }
        assert_eq!(fib(300), naive_fib(300));
    }

    #[test]
    fn lucas_membership() {
        assert_eq!(lucas_index_of(&Natural::from(7u32)), Ok(Some(4)));
        assert_eq!(lucas_index_of(&Natural::from(2u32)), Ok(Some(0)));
        assert_eq!(lucas_index_of(&Natural::from(6u32)), Ok(None));
        assert_eq!(lucas_index_of(&Natural::zero()), Err(SeqError::ZeroLucas));
    }

    #[test]
    fn lucas_index_round_trip() {
        for r in 0..=2000u64 {
            assert_eq!(lucas_index_of(&lucas(r)), Ok(Some(r)));
        }
    }

    #[test]
    fn neighbours_of_lucas_numbers_are_rejected() {
        for r in 4..400u64 {
            let l = lucas(r);
            assert_eq!(lucas_index_of(&(&l + 1u32)), Ok(None));
            assert_eq!(lucas_index_of(&(&l - 1u32)), Ok(None));
        }
    }

    #[test]
    fn windowed_membership() {
        let v = lucas(57);
        assert_eq!(lucas_index_in(&v, (50, 60)), Ok(Some(57)));
        assert_eq!(lucas_index_in(&v, (58, 60)), Ok(None));
        assert_eq!(lucas_index_in(&v, (0, 56)), Ok(None));
    }

    #[test]
    fn fib_membership() {
        for r in 3..500u64 {
            assert_eq!(fib_index_of(&fib(r)), Some(r));
        }
        assert_eq!(fib_index_of(&Natural::one()), Some(2));
        assert_eq!(fib_index_of(&Natural::from(4u32)), None);
    }

    #[test]
    fn identities_hold() {
        assert!(check_identities(2).passed());
        assert!(check_identities(500).passed());
    }

    #[test]
    fn ratio_bound_for_consecutive_terms() {
        let f = fib_table(500);
        let three = Natural::from(3u32);
        for n in 3..=500usize {
            for m in 1..n {
                assert!(&f[n] * 2u32 >= &f[m] * &three, "n={n} m={m}");
            }
        }
    }

    #[test]
    fn powered_difference_keeps_half() {
        let f = fib_table(200);
        for n in 3..=200usize {
            for m in (1..n).step_by(7).chain([n - 1]) {
                for x in 2..=20u32 {
                    let a = num_traits::pow(f[n].clone(), x as usize);
                    let b = num_traits::pow(f[m].clone(), x as usize);
                    assert!((&a - &b) * 2u32 >= a, "n={n} m={m} x={x}");
                }
            }
        }
    }
}
