use ancomb::digits::{delange_sum, gray_value, s2, s_gray, theta_sign};
use ancomb::fm::UrnSketch;
use ancomb::numerics::{Dyadic, TruncSeries};
use ancomb::register::RegisterCensus;
use ancomb::BigRat;
use num_bigint::BigInt;
use proptest::prelude::*;

fn dy(num: i64, exp: u8) -> Dyadic {
    Dyadic::new(BigInt::from(num), exp as u64)
}

fn as_rat(num: i64, exp: u8) -> BigRat {
    BigRat::new(BigInt::from(num), BigInt::from(1) << exp)
}

proptest! {
    #[test]
    fn dyadic_matches_rationals(a in -1_000_000i64..1_000_000, ea in 0u8..40, b in -1_000_000i64..1_000_000, eb in 0u8..40, k in 0u64..20) {
        let (x, y) = (dy(a, ea), dy(b, eb));
        let (p, q) = (as_rat(a, ea), as_rat(b, eb));
        prop_assert_eq!((&x + &y).to_rat(), &p + &q);
        prop_assert_eq!((&x - &y).to_rat(), &p - &q);
        prop_assert_eq!((&x * &y).to_rat(), &p * &q);
        prop_assert_eq!(x.shr(k).to_rat(), p / BigRat::from_integer(BigInt::from(1) << k));
        // equal values have equal representations
        prop_assert_eq!(&x * &dy(2, 1), x.clone());
    }

    #[test]
    fn gray_and_theta(n in 1u64..(1 << 40)) {
        prop_assert_eq!(gray_value(n), n ^ (n >> 1));
        prop_assert_eq!(s_gray(n) as i32 - s_gray(n - 1) as i32, theta_sign(n).unwrap());
        prop_assert_eq!((gray_value(n) ^ gray_value(n - 1)).count_ones(), 1);
    }

    #[test]
    fn delange_doubling(n in 1u64..(1 << 40)) {
        // S(2n) = 2 S(n) + n and S(2n+1) = S(2n) + s2(2n)
        let s = delange_sum(n);
        let even = delange_sum(2 * n);
        prop_assert_eq!(&even, &(2 * &s + n));
        prop_assert_eq!(delange_sum(2 * n + 1), even + s2(2 * n));
    }

    #[test]
    fn sketch_bytes_round_trip(draws in proptest::collection::vec(0u32..80, 0..200)) {
        let mut s = UrnSketch::default();
        for g in &draws {
            s.insert(*g);
        }
        let back = UrnSketch::from_bytes(s.width(), &s.to_bytes()).unwrap();
        for i in 0..s.width() {
            prop_assert_eq!(back.is_set(i), s.is_set(i));
        }
        prop_assert_eq!(back.observe_r(), s.observe_r());
    }

    #[test]
    fn series_exp_log_round_trip(c in proptest::collection::vec(-20i64..20, 1..8)) {
        let order = 10;
        let mut coeffs = vec![0i64];
        coeffs.extend(c);
        let a = TruncSeries::from_ints(&coeffs, order);
        prop_assert_eq!(a.exp().unwrap().log().unwrap(), a);
    }
}

#[test]
fn census_routes_agree_through_ten() {
    for n in 1..=10 {
        let e = RegisterCensus::exact(n).unwrap();
        let t = RegisterCensus::enumerated(n).unwrap();
        assert_eq!(e, t, "n={n}");
    }
}
