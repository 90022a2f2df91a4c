use fibluc::realfield::{cf_expand, const_alpha, const_log_alpha, CertifiedReal};
use num_bigint::BigInt;
use proptest::prelude::*;

fn ball(n: i64, d: i64, p: u32) -> CertifiedReal {
    CertifiedReal::from_ratio(n, d, p)
}

proptest! {
    #[test]
    fn arithmetic_encloses(a in -1_000_000i64..1_000_000, b in 1i64..1_000_000,
                           c in -1_000_000i64..1_000_000, d in 1i64..1_000_000,
                           p in prop::sample::select(vec![64u32, 128, 256])) {
        let (x, y) = (ball(a, b, p), ball(c, d, p));
        let (bd, bb) = (BigInt::from(b) * d, BigInt::from(b));
        prop_assert!(x.contains_ratio(&BigInt::from(a), &bb));
        prop_assert!((&x + &y).contains_ratio(&(BigInt::from(a) * d + BigInt::from(c) * b), &bd));
        prop_assert!((&x - &y).contains_ratio(&(BigInt::from(a) * d - BigInt::from(c) * b), &bd));
        prop_assert!((&x * &y).contains_ratio(&(BigInt::from(a) * c), &bd));
        if c != 0 {
            let (num, den) = if c > 0 { (BigInt::from(a) * d, BigInt::from(b) * c) } else { (-BigInt::from(a) * d, -BigInt::from(b) * c) };
            prop_assert!(x.div(&y).unwrap().contains_ratio(&num, &den));
        }
    }

    #[test]
    fn exp_ln_inverse(a in 1i64..100_000) {
        let x = ball(a, 1000, 256);
        let back = x.ln().unwrap().exp().unwrap();
        prop_assert!(back.contains_ratio(&BigInt::from(a), &BigInt::from(1000)));
    }

    #[test]
    fn comparisons_are_consistent(a in -1000i64..1000, b in -1000i64..1000) {
        let (x, y) = (ball(a, 7, 128), ball(b, 7, 128));
        match x.cmp_certified(&y) {
            Some(o) => prop_assert_eq!(o, a.cmp(&b)),
            None => prop_assert_eq!(a, b),
        }
    }
}

#[test]
fn alpha_satisfies_its_polynomial() {
    let a = const_alpha(512);
    let r = &(&a.square() - &a) - &CertifiedReal::from_int(1, 512);
    assert!(r.mag().to_f64() < 1e-140);
    assert!((const_log_alpha(256).to_f64() - 0.4812118250596034).abs() < 1e-15);
}

#[test]
fn golden_ratio_expansion_is_all_ones() {
    let cf = cf_expand(&const_alpha, 60, 4096).unwrap();
    assert!(cf.quotients().iter().all(|q| *q == 1u32.into()));
    assert_eq!(cf.q(20).to_string(), "10946");
}
