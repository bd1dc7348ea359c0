use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use repnum_core::selberg::{forms_of, LinearForm, PrimeSet, SieveProblem, Variant};

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn valuation(mut x: BigInt, p: u64) -> u32 {
    let p = BigInt::from(p);
    let mut v = 0;
    if x.is_zero() {
        return u32::MAX;
    }
    while (&x % &p).is_zero() {
        x /= &p;
        v += 1;
    }
    v
}

// Count box points avoiding every event, from the product polynomial.
fn sifted_oracle(p: &SieveProblem) -> u64 {
    let floor = p.forms.len() as u64 + 2;
    let primes: Vec<u64> = (floor + 1..=p.z.floor() as u64)
        .filter(|&q| is_prime(q) && (p.prime_set == PrimeSet::All || q % 4 == 3))
        .collect();
    let mut count = 0;
    for a in 1..=p.n_box {
        for b in 1..=p.n_box {
            let mut f = BigInt::from(a * a + b * b);
            for form in &p.forms {
                f *= BigInt::from(form.r() as i128 * a as i128 + form.s() as i128 * b as i128);
            }
            let hit = primes.iter().any(|&q| match p.variant {
                Variant::A => valuation(f.clone(), q) >= 1,
                Variant::B => q % 4 == 3 && valuation(f.clone(), q) >= 1,
                Variant::C => q % 4 == 3 && valuation(f.clone(), q) == 1,
            });
            count += !hit as u64;
        }
    }
    count
}

fn problem_strategy() -> impl Strategy<Value = SieveProblem> {
    let ms = [1u64, 2, 5, 10, 13, 17, 25, 29, 65, 85, 145];
    (
        0usize..3,
        prop::sample::select(ms.to_vec()),
        0usize..=3,
        any::<u64>(),
        5u64..=120,
        3u32..=50,
        0u32..=50,
        any::<bool>(),
    )
        .prop_filter_map("forms", |(v, m, ell, pick, n, z, extra, all)| {
            let variant = [Variant::A, Variant::B, Variant::C][v];
            let pool = forms_of(m);
            let ell = ell.min(pool.len());
            let start = (pick % pool.len().max(1) as u64) as usize;
            let forms: Vec<LinearForm> = (0..ell).map(|i| pool[(start + i) % pool.len()]).collect();
            let set = if all { PrimeSet::All } else { PrimeSet::ThreeMod4 };
            let z = z as f64;
            let xi = z + (extra as f64).min(z);
            SieveProblem::new(variant, n, m, forms, set, z).ok()?.with_xi(xi).ok()
        })
}

#[test]
fn exact_count_matches_polynomial_oracle() {
    for variant in [Variant::A, Variant::B, Variant::C] {
        for m in [1u64, 5, 13, 65] {
            for ell in 0..=3usize {
                let forms: Vec<_> = forms_of(m).into_iter().take(ell).collect();
                for set in [PrimeSet::All, PrimeSet::ThreeMod4] {
                    let p = SieveProblem::new(variant, 60, m, forms.clone(), set, 30.0).unwrap();
                    assert_eq!(p.sifted_count_exact().unwrap(), sifted_oracle(&p), "{p:?}");
                }
            }
        }
    }
}

#[test]
fn line_counts_follow_determinants() {
    for m in [5u64, 13, 65, 85, 221, 1105] {
        let forms = forms_of(m);
        for ell in 1..=forms.len().min(4) {
            let p = SieveProblem::new(Variant::A, 10, m, forms[..ell].to_vec(), PrimeSet::All, 2.0).unwrap();
            let t = p.t();
            for q in (3..500u64).filter(|&q| is_prime(q)) {
                let lp = p.ell_p(q);
                let divides = (&t % BigInt::from(q).to_biguint().unwrap()).is_zero();
                assert_eq!(divides, p.divides_t(q), "m={m} q={q}");
                if divides {
                    assert!(lp <= ell);
                } else {
                    assert_eq!(lp, ell, "m={m} ell={ell} q={q}");
                }
            }
        }
    }
}

#[test]
fn h_of_products_matches_product_of_h() {
    let forms = forms_of(65);
    for variant in [Variant::A, Variant::B, Variant::C] {
        let p = SieveProblem::new(variant, 10, 65, forms[..2].to_vec(), PrimeSet::All, 40.0).unwrap();
        let primes = p.sifting_primes();
        for mask in 1u32..(1 << primes.len().min(10)) {
            let chosen: Vec<u64> = (0..primes.len()).filter(|i| mask >> i & 1 == 1).map(|i| primes[i]).collect();
            let mut g = BigRational::one();
            let mut inv = BigRational::one();
            let mut h = BigRational::one();
            for &q in &chosen {
                let gq = p.weight_g(q).unwrap();
                inv *= BigRational::one() / (BigRational::one() - &gq);
                g *= gq;
                h *= p.weight_h(q).unwrap();
            }
            assert_eq!(g * inv, h);
        }
    }
}

#[test]
fn weights_stay_below_one() {
    for m in [1u64, 5, 65, 1105] {
        let forms = forms_of(m);
        for variant in [Variant::A, Variant::B, Variant::C] {
            for ell in 0..=forms.len().min(3) {
                let p = SieveProblem::new(variant, 10, m, forms[..ell].to_vec(), PrimeSet::All, 500.0).unwrap();
                for q in p.sifting_primes() {
                    let g = p.weight_g(q).unwrap();
                    assert!(!g.is_negative() && g < BigRational::one(), "{variant:?} m={m} q={q}");
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn upper_bound_dominates(p in problem_strategy()) {
        let bound = p.sieve_upper_bound().unwrap();
        let exact = p.sifted_count_exact().unwrap();
        prop_assert!(bound.total >= BigRational::from_integer(exact.into()), "{:?}: {} < {}", p, bound.value(), exact);
        prop_assert!(p.mu_plus_admissible().unwrap());
    }

    #[test]
    fn remainder_matches_direct_count(p in problem_strategy()) {
        let primes = p.sifting_primes();
        let d: u64 = primes.iter().take(2).product();
        let rd = p.remainder_rd(d).unwrap();
        let mut count = 0u64;
        for a in 1..=p.n_box {
            for b in 1..=p.n_box {
                count += primes.iter().take(2).all(|&q| p.event(q, a, b)) as u64;
            }
        }
        let g: BigRational = primes.iter().take(2).map(|&q| p.weight_g(q).unwrap()).product();
        prop_assert_eq!(rd, BigRational::from_integer(count.into()) - g * &p.x);
    }
}
