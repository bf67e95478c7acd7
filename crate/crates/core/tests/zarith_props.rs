mod common;

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use towerforge_core::zarith::{factorize, is_prime, is_prime_u64, mult_order_u64, Certainty};

#[test]
fn factorization_round_trip_random() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f00d);
    for _ in 0..10_000 {
        let n: u64 = rng.gen_range(1..=1_000_000_000_000_000_000);
        let f = factorize(&BigUint::from(n));
        assert_eq!(f.product(), BigUint::from(n), "{n}");
        let primes: Vec<_> = f.primes().cloned().collect();
        assert!(primes.windows(2).all(|w| w[0] < w[1]));
        for factor in &f.0 {
            assert!(factor.exponent >= 1);
            assert_eq!(factor.certainty, Certainty::Proven);
            assert!(is_prime(&factor.prime).is_prime());
        }
    }
}

#[test]
fn factorization_round_trip_reference_values() {
    common::props::factor_roundtrip_reference().unwrap();
}

#[test]
fn primality_matches_sieve() {
    const N: usize = 1_000_000;
    let mut composite = vec![false; N + 1];
    composite[0] = true;
    composite[1] = true;
    let mut i = 2;
    while i * i <= N {
        if !composite[i] {
            let mut j = i * i;
            while j <= N {
                composite[j] = true;
                j += i;
            }
        }
        i += 1;
    }
    for (n, &c) in composite.iter().enumerate() {
        assert_eq!(is_prime_u64(n as u64), !c, "{n}");
    }
    for n in (0..=N).step_by(97) {
        assert_eq!(is_prime(&BigUint::from(n)).is_prime(), !composite[n], "{n}");
    }
}

#[test]
fn order_divides_h_minus_one_and_is_minimal() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut tested = 0;
    while tested < 300 {
        let h: u64 = rng.gen_range(3..2_000_000);
        if !common::trial_prime(h) {
            continue;
        }
        for p in [2u64, 3, 5, 7, 11, 13] {
            if p == h {
                continue;
            }
            let f = mult_order_u64(p, h).unwrap().order;
            assert!((BigUint::from(h - 1) % &f) == BigUint::from(0u32));
            assert!(BigUint::from(p).modpow(&f, &BigUint::from(h)).is_one());
            if h < 50_000 {
                assert_eq!(f, BigUint::from(common::naive_order(p, h)));
            }
        }
        tested += 1;
    }
}
