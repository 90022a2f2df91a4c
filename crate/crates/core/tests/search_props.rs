use fibluc::search::{brute_force, exhaustive_search, Constraint, SearchDomain, SearchOptions};
use fibluc::sequences::{fib, lucas, lucas_index_of};
use proptest::prelude::*;

fn constraint() -> impl Strategy<Value = Constraint> {
    prop_oneof![Just(Constraint::None), Just(Constraint::AtMost2m4), Just(Constraint::Above2m4)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn search_matches_brute_force(
        n_lo in 0u64..12, n_len in 0u64..14,
        m_lo in 0u64..10, m_len in 0u64..12,
        x_lo in 1u64..4, x_len in 0u64..5,
        c in constraint(), prune in any::<bool>(), prefilter in any::<bool>(),
    ) {
        let d = SearchDomain {
            n_range: (n_lo, n_lo + n_len),
            m_range: (m_lo, m_lo + m_len),
            x_range: (x_lo, x_lo + x_len),
            constraint: c,
            r_prune: prune,
        };
        // F_25^8 < L_r for r = 25 * 8 + 2
        let oracle = brute_force(&d, (n_lo + n_len + 2) * (x_lo + x_len) + 2);
        let got = exhaustive_search(&d, SearchOptions { workers: 2, prefilter }).unwrap();
        prop_assert_eq!(got, oracle);
    }

    #[test]
    fn addition_formula(a in 0u64..400, b in 0u64..400) {
        // F_(a+b+1) = F_(a+1) F_(b+1) + F_a F_b
        prop_assert_eq!(fib(a + b + 1), fib(a + 1) * fib(b + 1) + fib(a) * fib(b));
        let n = a + b + 1;
        prop_assert_eq!(lucas(n), fib(n - 1) + fib(n + 1));
    }

    #[test]
    fn lucas_index_roundtrip(n in 0u64..3000) {
        prop_assert_eq!(lucas_index_of(&lucas(n)).unwrap(), Some(n));
        if n >= 3 {
            prop_assert_eq!(lucas_index_of(&(lucas(n) + 1u32)).unwrap(), None);
        }
    }
}

#[test]
fn prefilter_and_pruning_agree_up_to_40() {
    let mut d = SearchDomain::main(40, 102);
    let a = exhaustive_search(&d, SearchOptions { workers: 0, prefilter: true }).unwrap();
    let b = exhaustive_search(&d, SearchOptions { workers: 0, prefilter: false }).unwrap();
    d.r_prune = false;
    let c = exhaustive_search(&d, SearchOptions { workers: 0, prefilter: false }).unwrap();
    assert!(a.is_empty());
    assert_eq!(a, b);
    assert_eq!(b, c);
}

#[test]
fn small_cells_include_known_solutions() {
    let d = SearchDomain {
        n_range: (1, 8),
        m_range: (0, 8),
        x_range: (1, 3),
        constraint: Constraint::None,
        r_prune: false,
    };
    let got = exhaustive_search(&d, SearchOptions::default()).unwrap();
    assert!(got.iter().all(|s| s.holds()));
    assert_eq!(got, brute_force(&d, 40));
    // F_6 - F_2 = 7 = L_4
    assert!(got.iter().any(|s| (s.n, s.m, s.r, s.x) == (6, 2, 4, 1)));
}
