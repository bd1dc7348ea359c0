use repnum::golden::{self, format_case, GoldenCase};
use repnum_core::selberg::{SieveProblem, Variant};

const GOLDEN: &str = include_str!("data/sieve_golden.csv");
const SEED: u64 = 20240601;

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn valuation(x: i128, p: i128) -> Option<u32> {
    if x == 0 {
        return None;
    }
    let (mut x, mut v) = (x, 0);
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    Some(v)
}

// Valuation of the product, summed factor by factor; None when a factor vanishes.
fn product_valuation(p: &SieveProblem, a: u64, b: u64, q: u64) -> Option<u32> {
    let q = q as i128;
    let mut v = valuation((a * a + b * b) as i128, q)?;
    for f in &p.forms {
        v += valuation(f.r() as i128 * a as i128 + f.s() as i128 * b as i128, q)?;
    }
    Some(v)
}

fn sifted(p: &SieveProblem) -> u64 {
    let primes: Vec<u64> = (p.forms.len() as u64 + 3..=p.z.floor() as u64).filter(|&q| is_prime(q)).collect();
    let mut count = 0;
    for a in 1..=p.n_box {
        for b in 1..=p.n_box {
            let hit = primes.iter().any(|&q| {
                let v = product_valuation(p, a, b, q);
                match p.variant {
                    Variant::A => v != Some(0),
                    Variant::B => q % 4 == 3 && v != Some(0),
                    Variant::C => q % 4 == 3 && v == Some(1),
                }
            });
            count += u64::from(!hit);
        }
    }
    count
}

fn cases() -> Vec<GoldenCase> {
    golden::parse(GOLDEN).expect("golden file parses")
}

#[test]
fn file_is_the_seeded_generator_output() {
    let cases = cases();
    assert_eq!(cases.len(), 100);
    let generated = golden::random_problems(SEED, 100, 2000);
    for (c, p) in cases.iter().zip(&generated) {
        assert_eq!(&c.problem, p);
    }
}

#[test]
fn recorded_counts_match_direct_enumeration() {
    for c in cases() {
        assert_eq!(sifted(&c.problem), c.expected, "{}", format_case(&c));
    }
}

#[test]
fn bound_dominates_recorded_count() {
    for c in cases() {
        let bound = c.problem.sieve_upper_bound().unwrap();
        assert!(bound.value() >= c.expected as f64, "{} bound {}", format_case(&c), bound.value());
        assert!(c.problem.mu_plus_admissible().unwrap(), "{}", format_case(&c));
    }
}

#[test]
fn every_variant_and_form_count_is_covered() {
    let cases = cases();
    for v in [Variant::A, Variant::B, Variant::C] {
        assert!(cases.iter().any(|c| c.problem.variant == v));
    }
    for ell in 0..=3 {
        assert!(cases.iter().any(|c| c.problem.ell() == ell), "no case with {ell} forms");
    }
}

#[test]
fn lines_round_trip() {
    let text: String = cases().iter().map(|c| format_case(c) + "\n").collect();
    let body: String = GOLDEN.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
    assert_eq!(text, body);
}
