//! Certified arbitrary-precision reals in midpoint-radius form.
//!
//! A [`CertifiedReal`] is a ball `[mid - rad, mid + rad]` with dyadic
//! endpoints. Every operation returns a ball containing the exact result, and
//! comparisons are three-valued: an answer is only given when it holds for the
//! whole ball. Callers that need a decision re-evaluate through a
//! [`RealProducer`] at higher precision.

mod ball;
mod contfrac;
mod dyadic;
mod elementary;

use thiserror::Error;

pub use ball::{parse_decimal, CertifiedReal};
pub use contfrac::{cf_expand, cf_expand_from, cf_expand_past, ContinuedFraction};
pub use dyadic::{Dyadic, Round};
pub use elementary::{
    const_alpha, const_beta, const_ln2, const_log_alpha, const_log_sqrt5, const_sqrt5,
    log_of_natural,
};

/// Working precision for the first attempt at any certified decision.
pub const DEFAULT_PRECISION: u32 = 192;
/// Precision at which escalation gives up.
pub const DEFAULT_PRECISION_CAP: u32 = 8192;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RealError {
    #[error("precision cap of {cap} bits reached with {certified} of {requested} results certified")]
    PrecisionExhausted { cap: u32, certified: usize, requested: usize },
    #[error("{op}: {detail}")]
    Domain { op: &'static str, detail: String },
    #[error("logarithm of zero")]
    LogOfZero,
    #[error("continued fraction changed between precisions (at {precision} bits)")]
    Inconsistent { precision: u32 },
}

/// Something that can enclose one fixed real number at any requested
/// precision. Enclosures tighten as the precision grows.
pub trait RealProducer: Sync {
    fn enclose(&self, precision: u32) -> CertifiedReal;
}

impl<F> RealProducer for F
where
    F: Fn(u32) -> CertifiedReal + Sync,
{
    fn enclose(&self, precision: u32) -> CertifiedReal {
        self(precision)
    }
}

/// Evaluates `decide` at doubling precisions from `start` up to `cap` until
/// it returns a definite answer.
pub fn decide_with_escalation<T>(
    start: u32,
    cap: u32,
    mut decide: impl FnMut(u32) -> Option<T>,
) -> Result<T, RealError> {
    let mut precision = start.max(32);
    loop {
        if let Some(v) = decide(precision) {
            return Ok(v);
        }
        if precision >= cap {
            return Err(RealError::PrecisionExhausted { cap, certified: 0, requested: 1 });
        }
        precision = (precision * 2).min(cap);
    }
}
