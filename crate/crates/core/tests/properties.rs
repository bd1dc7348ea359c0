use proptest::prelude::*;
use repnum_core::arith::{
    arithmetic_function, chebyshev, factor, pi_count, prime_recip_sum, prime_table, ArithFn, Chebyshev, PrimeTable,
    Residue,
};
use repnum_core::asymp::landau_ramanujan;
use repnum_core::moments::{moment, Engine, Mode, MomentQuery};
use repnum_core::repr::{in_r, in_r_prime, r0_formula, r0_star, rep_enumerate, Family, RepFamily, Strategy};
use std::sync::OnceLock;

fn table() -> &'static PrimeTable {
    static T: OnceLock<PrimeTable> = OnceLock::new();
    T.get_or_init(|| prime_table(20_000).unwrap())
}

fn divisors(n: u64, t: &PrimeTable) -> Vec<u64> {
    let mut ds = vec![1];
    for &(p, e) in factor(n, t).unwrap().factors() {
        let len = ds.len();
        let mut q = 1;
        for _ in 0..e {
            q *= p;
            for i in 0..len {
                ds.push(ds[i] * q);
            }
        }
    }
    ds
}

#[test]
fn mobius_and_mangoldt_divisor_sums() {
    let t = table();
    for n in 1..=100_000u64 {
        let ds = divisors(n, t);
        let mu: i64 = ds.iter().map(|&d| factor(d, t).unwrap().mu()).sum();
        assert_eq!(mu, (n == 1) as i64, "n={n}");
        let lam: f64 = ds.iter().map(|&d| factor(d, t).unwrap().von_mangoldt()).sum();
        assert!(((n as f64).ln() - lam).abs() <= 1e-9, "n={n}");
    }
}

#[test]
fn omega_power_below_tau() {
    let t = prime_table(1000).unwrap();
    for n in 2..=1_000_000u64 {
        let f = factor(n, &t).unwrap();
        assert!(1u64 << f.omega() <= f.tau(), "n={n}");
    }
}

#[test]
fn pointwise_chains_and_classification() {
    let t = prime_table(400).unwrap();
    let e = Engine::new(100_000).unwrap();
    let seg = |f| e.counts(RepFamily { family: f, strategy: Strategy::Bucket }, 1, 100_001).unwrap().counts;
    let get = |f: Family| seg(f);
    let [r0, r0s, r1, r1s, r2, r2s, big_r2, rr, rrs, rp, rps] = Family::ALL.map(get);
    for i in 0..100_000usize {
        let n = i as u64 + 1;
        let f = factor(n, &t).unwrap();
        assert_eq!(r0[i] as u64, r0_formula(&f), "n={n}");
        assert_eq!(r0s[i] as u64, r0_star(&f), "n={n}");
        assert!(r2[i] <= r1[i] && r1[i] <= r0[i] && r0[i] as u64 <= f.tau(), "n={n}");
        assert!(rp[i] <= rr[i] && rr[i] <= r0[i], "n={n}");
        assert!(r0s[i] <= r0[i] && r1s[i] <= r1[i] && r2s[i] <= r2[i], "n={n}");
        assert!(rrs[i] <= rr[i] && rps[i] <= rp[i], "n={n}");
        let two_p_sq = n % 2 == 0 && {
            let h = n / 2;
            let p = h.isqrt();
            p * p == h && t.is_prime(p).unwrap()
        };
        assert_eq!(r2[i], 2 * big_r2[i] + two_p_sq as u32, "n={n}");
        assert_eq!(in_r(&f), r0[i] >= 1, "n={n}");
        assert_eq!(in_r_prime(&f), r0s[i] >= 1, "n={n}");
    }
}

#[test]
fn psi_minus_theta_is_prime_powers() {
    for x in (2..=10_000u64).step_by(37) {
        let t = prime_table(x).unwrap();
        let mut proper = 0.0;
        for &p in t.primes() {
            let p = p as u64;
            let mut q = p * p;
            while q <= x {
                proper += (p as f64).ln();
                q *= p;
            }
        }
        let diff = chebyshev(Chebyshev::Psi, x) - chebyshev(Chebyshev::Theta, x);
        assert!((diff - proper).abs() < 1e-9, "x={x}");
    }
}

#[test]
fn mertens_difference_bounded() {
    let mut x = 100u64;
    while x <= 10_000_000 {
        let d = prime_recip_sum(x, Some(Residue::One)) - prime_recip_sum(x, Some(Residue::Three));
        assert!(d.abs() <= 0.5, "x={x} d={d}");
        x = x * 3 / 2;
    }
}

#[test]
fn landau_ramanujan_within_tail() {
    let cutoffs = [3u64, 7, 100, 10_000, 1_000_000];
    for (i, &c1) in cutoffs.iter().enumerate() {
        let a = landau_ramanujan(c1).unwrap();
        for &c2 in &cutoffs[i + 1..] {
            let b = landau_ramanujan(c2).unwrap();
            assert!((b.value - a.value).abs() <= a.tail_bound, "{c1} -> {c2}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pi_splits_by_residue(x in 0u64..200_000) {
        let two = (x >= 2) as u64;
        prop_assert_eq!(pi_count(x, None), pi_count(x, Some(Residue::One)) + pi_count(x, Some(Residue::Three)) + two);
    }

    #[test]
    fn r0_multiplicative(a in 1u64..10_000, b in 1u64..10_000) {
        prop_assume!(num_integer::gcd(a, b) == 1);
        let t = table();
        let f = |n| factor(n, t).unwrap();
        prop_assert_eq!(r0_formula(&f(a * b)), r0_formula(&f(a)) * r0_formula(&f(b)));
        prop_assert_eq!(r0_star(&f(a * b)), r0_star(&f(a)) * r0_star(&f(b)));
    }

    #[test]
    fn formula_agrees_with_enumeration(n in 1u64..400_000_000) {
        let t = table();
        let f = factor(n, t).unwrap();
        prop_assert_eq!(r0_formula(&f), rep_enumerate(Family::R0, n, t).unwrap());
        prop_assert_eq!(r0_star(&f), rep_enumerate(Family::R0Star, n, t).unwrap());
    }

    #[test]
    fn arithmetic_functions_consistent(n in 1u64..400_000_000) {
        let t = table();
        let f = factor(n, t).unwrap();
        let v = |g| arithmetic_function(g, n, t).unwrap().as_f64();
        prop_assert_eq!(v(ArithFn::Tau), f.tau() as f64);
        prop_assert_eq!(v(ArithFn::Omega), f.omega() as f64);
        prop_assert!(v(ArithFn::OmegaStar) <= v(ArithFn::Omega));
        prop_assert_eq!(f.factors().iter().map(|&(p, e)| p.pow(e)).product::<u64>(), n);
        let theta = v(ArithFn::ThetaIndicator);
        prop_assert!(theta == 0.0 || f.is_prime());
    }

    #[test]
    fn segment_size_never_changes_moments(seg in 1u64..5000, family_ix in 0usize..11, k in 1u32..=4) {
        let family = Family::ALL[family_ix];
        let x = 20_000;
        let a = Engine::with_segment(x, seg).unwrap();
        let b = Engine::new(x).unwrap();
        let q = MomentQuery::new(family, x, Mode::Power(k));
        prop_assert_eq!(moment(&a, &q).unwrap(), moment(&b, &q).unwrap());
        let one = MomentQuery::new(family, x, Mode::Binomial(1));
        let first = MomentQuery::new(family, x, Mode::Power(1));
        prop_assert_eq!(moment(&a, &one).unwrap(), moment(&a, &first).unwrap());
    }

    #[test]
    fn windows_concatenate(lo in 1u64..50_000, len in 1u64..3000, cut in 0u64..3000) {
        let e = Engine::new(60_000).unwrap();
        let hi = lo + len;
        let mid = lo + cut % len;
        let rep = RepFamily { family: Family::R1, strategy: Strategy::Bucket };
        let whole = e.counts(rep, lo, hi).unwrap().counts;
        let mut parts = if mid > lo { e.counts(rep, lo, mid).unwrap().counts } else { Vec::new() };
        parts.extend(e.counts(rep, mid, hi).unwrap().counts);
        prop_assert_eq!(whole, parts);
    }
}
