use knormal::bounds::{basic_inequality_with_theta, test_sieve, Form, ThetaChoice};
use num_bigint::BigUint;

const PAIRS: &[(u32, &[u64])] = &[
    (14, &[4, 5, 8, 9, 11, 13, 23, 25, 27, 29, 41, 43, 64, 71, 113, 125, 127, 169, 197, 211, 239, 281, 337, 379, 421, 449, 463, 491, 547, 617, 631, 659, 673, 701, 729, 743, 883, 911, 953]),
    (15, &[4, 7, 8, 11, 13, 16, 19, 29, 31, 41, 49, 61, 64, 71, 121, 151, 181, 211, 241, 256, 271, 331, 361, 421, 571, 631, 751, 841]),
    (16, &[5, 7, 9, 11, 13, 17, 19, 23, 25, 27, 29, 31, 41, 49, 73, 81, 89, 97, 113, 193, 241, 257, 289, 337, 401]),
    (17, &[4, 16, 103, 256]),
    (18, &[4, 5, 7, 13, 17, 19, 25, 31, 37, 43, 73, 109, 127, 163, 181, 199, 289, 361]),
    (20, &[7, 9, 11, 13, 19, 29, 31, 41, 61, 81, 101, 121]),
    (21, &[4, 8, 13, 16, 43, 64, 169]),
    (22, &[23, 67, 89]),
    (23, &[47]),
    (24, &[5, 7, 11, 13, 17, 19, 25, 37, 49, 73, 97, 121]),
    (26, &[27, 53]),
    (28, &[13, 29]),
    (30, &[4, 7, 11, 19, 31, 61]),
    (31, &[32]),
    (32, &[17]),
    (36, &[5, 19, 37]),
    (40, &[9, 11, 41]),
    (42, &[43]),
    (45, &[4]),
    (48, &[5, 7]),
    (63, &[5]),
];

const EXCEPTIONS: &[(u64, u32)] =
    &[(4, 15), (5, 16), (5, 24), (8, 14), (9, 16), (16, 15), (17, 16), (19, 18)];

#[test]
fn sieve_fails_exactly_on_the_exceptional_pairs() {
    let mut failing = Vec::new();
    for &(n, qs) in PAIRS {
        for &q in qs {
            let out = test_sieve(q, n, 3).unwrap();
            if !out.holds {
                failing.push((q, n));
            } else {
                assert!(out.witness.unwrap().verdict.holds);
            }
        }
    }
    failing.sort();
    assert_eq!(failing, EXCEPTIONS);
}

/// (5, 63) is listed among the failures but the exact values
/// W(x^63 - 1) = 2^12, W(5^63 - 1) = 2^10 and W(G) = 2^11 give
/// 2^34 < 5^28.5, so the inequality holds there.
#[test]
fn basic_bound_fails_on_listed_pairs_except_one() {
    let mut holding = Vec::new();
    for &(n, qs) in PAIRS {
        for &q in qs {
            let v = basic_inequality_with_theta(
                q,
                n,
                &BigUint::from(1u32),
                1,
                None,
                Form::Eq10Simplified,
                ThetaChoice::Multiplier(3),
            )
            .unwrap_or_else(|e| panic!("({q}, {n}): {e}"));
            if v.holds {
                holding.push((q, n));
            }
        }
    }
    assert_eq!(holding, vec![(5, 63)]);
}

#[test]
fn small_degree_sieve_failures() {
    assert!(!test_sieve(2, 5, 2).unwrap().holds);
    assert!(!test_sieve(5, 6, 2).unwrap().holds);
}

#[test]
fn sieve_failures_for_binary_and_ternary_fields() {
    let fails_2 = [14u32, 15, 16, 18, 20, 21, 24, 30];
    let fails_3 = [14u32, 16];
    for n in 14..=30u32 {
        assert_eq!(!test_sieve(2, n, 3).unwrap().holds, fails_2.contains(&n), "(2, {n})");
    }
    for n in 14..=20u32 {
        assert_eq!(!test_sieve(3, n, 3).unwrap().holds, fails_3.contains(&n), "(3, {n})");
    }
}

#[test]
fn sieve_failures_for_moderate_degrees() {
    let failing = [(3u64, 9u32), (9, 9), (2, 10), (4, 10), (16, 10), (5, 10), (2, 12), (4, 12), (3, 12), (9, 12)];
    for (q, n) in failing {
        assert!(!test_sieve(q, n, 3).unwrap().holds, "({q}, {n})");
    }
}
