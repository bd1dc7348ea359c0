//! Checks against slow, independent implementations written from the definitions.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use repnum_core::arith::{
    chebyshev, factor, log_integral, pi_count, prime_recip_sum, prime_table, Chebyshev, PrimeSieve, Residue,
};
use repnum_core::asymp::{argmax_k, inductive_claim_sum, landau_ramanujan, smooth_squarefull_rstar_sum};
use repnum_core::moments::{moment, stirling, Engine, Mode, MomentQuery, OmegaKind};
use repnum_core::repr::{d2_count, evaluate, Family, RepFamily, Strategy};

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn factors(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        let mut e = 0;
        while n % d == 0 {
            n /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

// n is a sum of two squares, found by search.
fn sum_of_squares(n: u64) -> bool {
    (0..=n).take_while(|a| a * a <= n).any(|a| {
        let r = n - a * a;
        let b = (r as f64).sqrt() as u64;
        (b.saturating_sub(1)..=b + 1).any(|c| c * c == r)
    })
}

fn sum_of_coprime_squares(n: u64) -> bool {
    (0..=n).take_while(|a| a * a <= n).any(|a| {
        let r = n - a * a;
        (1..=r).take_while(|c| c * c <= r).any(|c| c * c == r && gcd(a, c) == 1)
    })
}

fn brute_r(family: Family, n: u64) -> u64 {
    let mut count = 0;
    for a in 0..=n {
        if a * a > n {
            break;
        }
        for b in 1..=n {
            if a * a + b * b > n {
                break;
            }
            if a * a + b * b != n {
                continue;
            }
            let ok = match family {
                Family::R0 => true,
                Family::R0Star => gcd(a, b) == 1,
                Family::R1 => is_prime(b),
                Family::R1Star => is_prime(b) && gcd(a, b) == 1,
                Family::R2 => is_prime(a) && is_prime(b),
                Family::R2Star => is_prime(a) && is_prime(b) && a != b,
                Family::R2Unordered => is_prime(a) && is_prime(b) && a < b,
                Family::RBig => sum_of_squares(b),
                Family::RBigStar => sum_of_squares(b) && gcd(a, b) == 1,
                Family::RPrime => sum_of_coprime_squares(b),
                Family::RPrimeStar => sum_of_coprime_squares(b) && gcd(a, b) == 1,
            };
            count += ok as u64;
        }
    }
    count
}

#[test]
fn every_family_matches_lattice_count() {
    let x = 1500;
    let engine = Engine::with_segment(x, 97).unwrap();
    let oracle: Vec<Vec<u64>> = Family::ALL.iter().map(|&f| (1..=x).map(|n| brute_r(f, n)).collect()).collect();
    for (fi, &family) in Family::ALL.iter().enumerate() {
        let mut strategies = vec![Strategy::Bucket, Strategy::Enumerate];
        if family.has_formula() {
            strategies.push(Strategy::Formula);
        }
        for strategy in strategies {
            for (lo, hi) in engine.segments(x).collect::<Vec<_>>() {
                let seg = engine.counts(RepFamily { family, strategy }, lo, hi).unwrap();
                for (i, &v) in seg.counts.iter().enumerate() {
                    let n = lo + i as u64;
                    assert_eq!(v as u64, oracle[fi][n as usize - 1], "{family} {strategy:?} n={n}");
                }
            }
        }
        let t = prime_table(100).unwrap();
        for n in [1, 2, 25, 65, 338, 1105] {
            assert_eq!(evaluate(family, n, &t).unwrap().value, oracle[fi][n as usize - 1], "{family} n={n}");
        }
    }
}

#[test]
fn moments_match_brute_sums() {
    let x = 3000;
    let engine = Engine::new(x).unwrap();
    for family in [Family::R0, Family::R1, Family::R2, Family::RBigStar] {
        let vals: Vec<u64> = (1..=x).map(|n| brute_r(family, n)).collect();
        let omega = |n: u64| factors(n).len() as u32;
        let omega_star = |n: u64| factors(n).iter().filter(|f| f.0 != 2).count() as u32;
        for k in 1..=4u32 {
            let want: u128 = vals.iter().map(|&v| (v as u128).pow(k)).sum();
            let q = MomentQuery::new(family, x, Mode::Power(k));
            assert_eq!(moment(&engine, &q).unwrap(), want, "{family} k={k}");
        }
        let zeroth = vals.iter().filter(|&&v| v > 0).count() as u128;
        assert_eq!(moment(&engine, &MomentQuery::new(family, x, Mode::Zeroth)).unwrap(), zeroth);
        for l in 1..=3u32 {
            let binom = |v: u64| -> u128 {
                let mut c = 1u128;
                for i in 0..l as u64 {
                    if v < i + 1 {
                        return 0;
                    }
                    c = c * (v - i) as u128 / (i + 1) as u128;
                }
                c
            };
            let want: u128 = vals.iter().map(|&v| binom(v)).sum();
            assert_eq!(moment(&engine, &MomentQuery::new(family, x, Mode::Binomial(l))).unwrap(), want);
        }
        for kval in 0..4u32 {
            let want: u128 =
                (1..=x).filter(|&n| omega_star(n) == kval).map(|n| vals[n as usize - 1] as u128).sum();
            let q = MomentQuery::new(family, x, Mode::Power(1)).filtered(OmegaKind::OmegaStar, kval);
            assert_eq!(moment(&engine, &q).unwrap(), want, "{family} omega*={kval}");
            let want: u128 = (1..=x).filter(|&n| omega(n) == kval).map(|n| vals[n as usize - 1] as u128).sum();
            let q = MomentQuery::new(family, x, Mode::Power(1)).filtered(OmegaKind::Omega, kval);
            assert_eq!(moment(&engine, &q).unwrap(), want, "{family} omega={kval}");
        }
    }
}

#[test]
fn d2_matches_tuple_enumeration() {
    for x in [100, 338, 500, 2000, 5000] {
        let primes: Vec<u64> = (2..=x).filter(|&p| p * p <= x && is_prime(p)).collect();
        let mut pairs = Vec::new();
        for &p in &primes {
            for &q in &primes {
                if p * p + q * q <= x {
                    pairs.push((p, q));
                }
            }
        }
        let mut want = 0u64;
        for &(p1, q1) in &pairs {
            for &(p2, q2) in &pairs {
                let same_set = (p1, q1) == (p2, q2) || (p1, q1) == (q2, p2);
                if p1 * p1 + q1 * q1 == p2 * p2 + q2 * q2 && !same_set {
                    want += 1;
                }
            }
        }
        assert_eq!(d2_count(x), want, "x={x}");
    }
}

#[test]
fn prime_counts_and_sums() {
    for x in [1u64, 2, 3, 10, 100, 997, 5000] {
        let ps: Vec<u64> = (2..=x).filter(|&n| is_prime(n)).collect();
        assert_eq!(pi_count(x, None), ps.len() as u64);
        assert_eq!(pi_count(x, Some(Residue::One)), ps.iter().filter(|&&p| p % 4 == 1).count() as u64);
        let s3: f64 = ps.iter().filter(|&&p| p % 4 == 3).map(|&p| 1.0 / p as f64).sum();
        assert!((prime_recip_sum(x, Some(Residue::Three)) - s3).abs() < 1e-12);
        let theta: f64 = ps.iter().map(|&p| (p as f64).ln()).sum();
        assert!((chebyshev(Chebyshev::Theta, x) - theta).abs() < 1e-9);
        let psi: f64 = (2..=x)
            .filter_map(|n| {
                let f = factors(n);
                (f.len() == 1).then(|| (f[0].0 as f64).ln())
            })
            .sum();
        assert!((chebyshev(Chebyshev::Psi, x) - psi).abs() < 1e-9);
    }
    let window: Vec<u64> = PrimeSieve::new(1_000_000, 1_001_000).collect();
    let want: Vec<u64> = (1_000_000..=1_001_000).filter(|&n| is_prime(n)).collect();
    assert_eq!(window, want);
}

#[test]
fn factorization_matches_trial_division() {
    let t = prime_table(2000).unwrap();
    for n in (1..20_000).chain([3_999_999, 3_999_997, 3_999_986]) {
        assert_eq!(factor(n, &t).unwrap().factors(), factors(n).as_slice(), "n={n}");
    }
}

// li(x) by Ramanujan's series.
fn li_series(x: f64) -> f64 {
    let gamma = 0.577_215_664_901_532_9;
    let lx = x.ln();
    let mut sum = 0.0;
    let mut term = 1.0;
    let mut inner = 0.0;
    for n in 1..200 {
        term *= lx / n as f64;
        if (n - 1) % 2 == 0 {
            inner += 1.0 / n as f64;
        }
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        let add = sign * term / 2f64.powi(n - 1) * inner;
        sum += add;
        if add.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    gamma + lx.ln() + x.sqrt() * sum
}

const LI_2: f64 = 1.045_163_780_117_493;

#[test]
fn log_integral_matches_series() {
    for x in [2.5, 10.0, 100.0, 1e4, 1e6, 1e9] {
        let want = li_series(x) - LI_2;
        let got = log_integral(x).unwrap();
        assert!((got - want).abs() <= 1e-9 * want.max(1.0), "x={x} got={got} want={want}");
    }
    assert!((log_integral(10.0).unwrap() - 5.120_435_724_669_805).abs() < 1e-9);
}

const LANDAU_RAMANUJAN: f64 = 0.764_223_653_589_220_7;

#[test]
fn landau_ramanujan_reference() {
    let lr = landau_ramanujan(10_000_000).unwrap();
    assert!(lr.tail_bound < 1e-6);
    let err = (lr.value / LANDAU_RAMANUJAN).ln().abs();
    assert!(err <= lr.tail_bound, "err={err} bound={}", lr.tail_bound);
    assert!((lr.value - LANDAU_RAMANUJAN).abs() < 1e-7);
}

fn argmax_exact(l_value: &BigRational, l: u32) -> u64 {
    let c = l_value * BigRational::from_integer(BigInt::from(1u64 << (l - 1)));
    let mut best = BigRational::one();
    let mut arg = 0;
    let mut term = BigRational::one();
    for k in 1..200u64 {
        term = term * &c / BigRational::from_integer(BigInt::from(k));
        if term > best {
            best = term.clone();
            arg = k;
        }
    }
    arg
}

#[test]
fn argmax_matches_exact_terms() {
    for half in 1..=80u64 {
        let l_value = BigRational::new(BigInt::from(half), BigInt::from(2));
        for l in 1..=3 {
            let want = argmax_exact(&l_value, l);
            assert_eq!(argmax_k(half as f64 / 2.0, l).unwrap(), want, "L={} l={l}", half as f64 / 2.0);
        }
    }
}

fn stirling_explicit(k: u32, l: u32) -> BigUint {
    let mut acc = BigInt::zero();
    let mut binom = BigInt::one();
    for j in 0..=l {
        let term = &binom * BigInt::from(l - j).pow(k);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
        binom = binom * BigInt::from(l - j) / BigInt::from(j + 1);
    }
    let mut fact = BigInt::one();
    for i in 2..=l {
        fact *= BigInt::from(i);
    }
    (acc / fact).to_biguint().unwrap()
}

#[test]
fn stirling_matches_explicit_formula() {
    for k in 0..=30 {
        for l in 0..=k {
            assert_eq!(stirling(k, l).unwrap(), stirling_explicit(k, l), "S({k},{l})");
        }
    }
    assert_eq!(stirling(64, 1).unwrap(), BigUint::one());
}

#[test]
fn claim_sum_matches_direct_sum() {
    for x in [16u64, 100, 1000, 12_345, 1_000_000] {
        let root = (x as f64).sqrt() as u64;
        let mut want = 0.0;
        for q in 2..=root {
            let f = factors(q);
            if f.len() == 1 && f[0].0 % 4 == 1 {
                want += x as f64 / (q as f64 * (x as f64 / q as f64).ln());
            }
        }
        assert!((inductive_claim_sum(x).unwrap() - want).abs() < 1e-9 * want.max(1.0), "x={x}");
    }
}

#[test]
fn smooth_sum_matches_factorizations() {
    let engine = Engine::new(20_000).unwrap();
    for (x, m) in [(30u64, 1u32), (1000, 1), (1000, 2), (20_000, 1), (20_000, 3)] {
        let lx = (x as f64).ln();
        let z = (lx / lx.ln()).exp();
        let mut want = 0u128;
        for n in 2..=x {
            let f = factors(n);
            let (p, e) = *f.last().unwrap();
            let r = brute_r(Family::R0Star, n) as u128;
            if (p as f64) <= z || e >= 2 {
                want += r.pow(m);
            }
        }
        want += 1;
        assert_eq!(smooth_squarefull_rstar_sum(&engine, x, m).unwrap(), want, "x={x} m={m}");
    }
}
