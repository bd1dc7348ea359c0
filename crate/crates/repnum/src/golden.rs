//! Sieve golden files and random sieve problems.
//!
//! One problem per line: `variant,N,z,xi,m,l,forms,expected`, where `forms` is
//! `r:s` pairs joined by `|` (empty when `l = 0`) and `expected` is the exact sifted
//! count. Lines starting with `#` are comments. The prime set is all primes.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use repnum_core::selberg::{forms_of, LinearForm, PrimeSet, SieveProblem, Variant};

use crate::num_fmt::real;

#[derive(Debug, Clone, PartialEq)]
pub struct GoldenCase {
    pub problem: SieveProblem,
    pub expected: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldenError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for GoldenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "golden line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for GoldenError {}

pub fn format_forms(forms: &[LinearForm]) -> String {
    forms.iter().map(|f| format!("{}:{}", f.r(), f.s())).collect::<Vec<_>>().join("|")
}

pub fn parse_forms(s: &str) -> Result<Vec<LinearForm>, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split('|')
        .map(|pair| {
            let (r, t) = pair.split_once(':').ok_or_else(|| format!("form `{pair}` is not r:s"))?;
            let r: i64 = r.trim().parse().map_err(|_| format!("bad coefficient `{r}`"))?;
            let t: i64 = t.trim().parse().map_err(|_| format!("bad coefficient `{t}`"))?;
            LinearForm::new(r, t).map_err(|e| e.to_string())
        })
        .collect()
}

/// The problem's line without the trailing count.
pub fn format_problem(p: &SieveProblem) -> String {
    format!(
        "{},{},{},{},{},{},{}",
        p.variant.letter(),
        p.n_box,
        real(p.z),
        real(p.xi),
        p.m,
        p.ell(),
        format_forms(&p.forms)
    )
}

pub fn format_case(c: &GoldenCase) -> String {
    format!("{},{}", format_problem(&c.problem), c.expected)
}

pub fn parse(text: &str) -> Result<Vec<GoldenCase>, GoldenError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(false)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| GoldenError {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let err = |message: String| GoldenError { line, message };
        if rec.len() != 8 {
            return Err(err(format!("expected 8 fields, found {}", rec.len())));
        }
        let num = |i: usize| rec[i].trim().parse::<f64>().map_err(|_| err(format!("bad number `{}`", &rec[i])));
        let int = |i: usize| rec[i].trim().parse::<u64>().map_err(|_| err(format!("bad integer `{}`", &rec[i])));
        let variant = Variant::from_letter(rec[0].trim()).map_err(|e| err(e.to_string()))?;
        let forms = parse_forms(&rec[6]).map_err(err)?;
        if forms.len() as u64 != int(5)? {
            return Err(err(format!("l = {} but {} forms given", &rec[5], forms.len())));
        }
        let xi = num(3)?;
        let problem = SieveProblem::new(variant, int(1)?, int(4)?, forms, PrimeSet::All, num(2)?)
            .and_then(|p| p.with_xi(xi))
            .map_err(|e| err(e.to_string()))?;
        out.push(GoldenCase { problem, expected: int(7)? });
    }
    Ok(out)
}

const SPLIT_PRIMES: [u64; 6] = [5, 13, 17, 29, 37, 41];

/// A random problem: `m` a product of primes `1 mod 4`, up to three of its forms,
/// `z <= 50`, `xi` in `[z, 2z]`, `N <= max_n` log-uniform from 10.
pub fn random_problem(rng: &mut impl Rng, max_n: u64) -> SieveProblem {
    let variant = [Variant::A, Variant::B, Variant::C][rng.random_range(0..3)];
    let mut m = 1u64;
    for &p in &SPLIT_PRIMES {
        if rng.random_bool(0.3) && m * p <= 2000 {
            m *= p;
        }
    }
    let pool = forms_of(m);
    let ell = rng.random_range(0..=pool.len().min(3));
    let mut forms = Vec::with_capacity(ell);
    while forms.len() < ell {
        let f = pool[rng.random_range(0..pool.len())];
        if !forms.contains(&f) {
            forms.push(f);
        }
    }
    let z = rng.random_range(3..=50u32) as f64;
    let xi = rng.random_range(z as u32..=2 * z as u32) as f64;
    let lo = 10f64.ln();
    let hi = (max_n.max(10) as f64).ln();
    let n_box = rng.random_range(lo..=hi).exp().round() as u64;
    SieveProblem::new(variant, n_box, m, forms, PrimeSet::All, z)
        .and_then(|p| p.with_xi(xi))
        .expect("generated parameters are valid")
}

pub fn random_problems(seed: u64, count: usize, max_n: u64) -> Vec<SieveProblem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_problem(&mut rng, max_n)).collect()
}
