use num_bigint::BigUint;
use num_rational::Rational64;
use proptest::prelude::*;

use knormal::bounds::{rho_ratio, w_xn1_bound, w_xn1_exact, WBoundKind};
use knormal::ffield::{make_field, Overrides};
use knormal::modstruct::{k_normality, m_poly_gcd_degree};
use knormal::search::{SearchField, SearchOptions};

const FIELDS: &[(u64, u32, usize)] = &[
    (2, 1, 5),
    (2, 1, 8),
    (3, 1, 4),
    (2, 2, 3),
    (5, 1, 3),
    (3, 2, 2),
    (7, 1, 3),
    (2, 3, 2),
];

fn prime_powers() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(f in 0..FIELDS.len(), x in any::<u64>(), y in any::<u64>(), z in any::<u64>()) {
        let (p, t, n) = FIELDS[f];
        let ctx = make_field(p, t, n, &Overrides::default()).unwrap();
        let size = ctx.size();
        let [a, b, c] = [x, y, z].map(|v| ctx.from_index(v as u128 % size));
        let ab = ctx.mul(&a, &b).unwrap();
        prop_assert_eq!(ctx.mul(&ab, &c).unwrap(), ctx.mul(&a, &ctx.mul(&b, &c).unwrap()).unwrap());
        let lhs = ctx.mul(&a, &ctx.add(&b, &c).unwrap()).unwrap();
        let rhs = ctx.add(&ab, &ctx.mul(&a, &c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let sum = ctx.add(&a, &b).unwrap();
        prop_assert_eq!(
            ctx.frobenius(&sum, 1).unwrap(),
            ctx.add(&ctx.frobenius(&a, 1).unwrap(), &ctx.frobenius(&b, 1).unwrap()).unwrap()
        );
        if !a.is_zero() {
            prop_assert_eq!(ctx.mul(&a, &ctx.inv(&a).unwrap()).unwrap(), ctx.one());
        }
    }

    #[test]
    fn k_normality_agrees_with_gcd_degree(f in 0..FIELDS.len(), x in any::<u64>()) {
        let (p, t, n) = FIELDS[f];
        let ctx = make_field(p, t, n, &Overrides::default()).unwrap();
        let a = ctx.from_index(1 + x as u128 % (ctx.size() - 1));
        prop_assert_eq!(k_normality(&ctx, &a).unwrap(), m_poly_gcd_degree(&ctx, &a).unwrap());
    }

    #[test]
    fn table_and_context_agree(f in 0..FIELDS.len(), x in any::<u64>(), y in any::<u64>()) {
        let (p, t, n) = FIELDS[f];
        let ctx = make_field(p, t, n, &Overrides::default()).unwrap();
        let sf = SearchField::from_ctx(ctx.clone(), &SearchOptions::default()).unwrap();
        let (a, b) = ((x % sf.size() as u64) as u32, (y % sf.size() as u64) as u32);
        let (ea, eb) = (sf.table.to_element(a), sf.table.to_element(b));
        prop_assert_eq!(sf.table.to_element(sf.table.mul(a, b)), ctx.mul(&ea, &eb).unwrap());
        prop_assert_eq!(sf.table.to_element(sf.table.add(a, b)), ctx.add(&ea, &eb).unwrap());
        if a != 0 {
            prop_assert_eq!(sf.k_normality(a), k_normality(&ctx, &ea).unwrap());
            prop_assert_eq!(sf.table.mult_order(a) as u128, ctx.mult_order(&ea).unwrap());
        }
    }

    #[test]
    fn w_bounds_admit_exact_value(q in prime_powers(), n in 1u32..40) {
        let w = w_xn1_exact(q, n).unwrap();
        prop_assert!(w_xn1_bound(q, n, WBoundKind::General).admits(&w));
        prop_assert!(w_xn1_bound(q, n, WBoundKind::NDivides).admits(&w));
        if (q - 1) % n as u64 != 0 {
            prop_assert!(w_xn1_bound(q, n, WBoundKind::ThreeQuarter).admits(&w));
        } else {
            prop_assert_eq!(w, BigUint::from(1u32) << n);
        }
    }

    #[test]
    fn rho_ratio_is_a_proper_fraction(q in prime_powers(), m in 2u64..400) {
        let np = m;
        if num_integer::Integer::gcd(&q, &np) == 1 {
            let r = rho_ratio(q, np).unwrap();
            prop_assert!(r >= Rational64::from_integer(0) && r < Rational64::from_integer(1));
        } else {
            prop_assert!(rho_ratio(q, np).is_err());
        }
    }
}
