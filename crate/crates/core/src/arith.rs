//! Primes, factorizations and the classical arithmetic functions.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

/// Default number of entries in the smallest-prime-factor table.
pub const DEFAULT_SPF_CAP: u64 = 100_000_000;
/// Default ceiling on `PrimeTable::limit`.
pub const DEFAULT_LIMIT_CAP: u64 = 2_000_000_000;

const WINDOW_ODDS: usize = 1 << 17;

/// Residue class modulo 4 used to filter odd primes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Residue {
    One,
    Three,
}

impl Residue {
    pub fn matches(self, n: u64) -> bool {
        match self {
            Residue::One => n % 4 == 1,
            Residue::Three => n % 4 == 3,
        }
    }

    pub fn value(self) -> u64 {
        match self {
            Residue::One => 1,
            Residue::Three => 3,
        }
    }

    pub fn from_value(a: u64) -> Option<Self> {
        match a % 4 {
            1 => Some(Residue::One),
            3 => Some(Residue::Three),
            _ => None,
        }
    }
}

fn passes(p: u64, filter: Option<Residue>) -> bool {
    filter.is_none_or(|r| r.matches(p))
}

fn small_odd_primes(limit: u64) -> Vec<u32> {
    if limit < 3 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    let mut i = 3;
    while i <= n {
        if !composite[i] {
            out.push(i as u32);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += 2 * i;
            }
        }
        i += 2;
    }
    out
}

/// Segmented sieve of Eratosthenes over odd numbers, yielding primes of `[lo, hi]` in order.
pub struct PrimeSieve {
    hi: u64,
    next_lo: u64,
    base: Vec<u32>,
    marks: Vec<bool>,
    buf: Vec<u64>,
    pos: usize,
}

impl PrimeSieve {
    /// Primes `p` with `lo <= p <= hi`.
    pub fn new(lo: u64, hi: u64) -> Self {
        let mut buf = Vec::new();
        if lo <= 2 && hi >= 2 {
            buf.push(2);
        }
        let base = small_odd_primes(hi.isqrt());
        let start = lo.max(3) | 1;
        PrimeSieve { hi, next_lo: start, base, marks: vec![false; WINDOW_ODDS], buf, pos: 0 }
    }

    /// Primes up to and including `hi`.
    pub fn up_to(hi: u64) -> Self {
        Self::new(2, hi)
    }

    fn refill(&mut self) -> bool {
        self.buf.clear();
        self.pos = 0;
        while self.buf.is_empty() {
            if self.next_lo > self.hi {
                return false;
            }
            let lo = self.next_lo;
            let span = (((self.hi - lo) / 2 + 1) as usize).min(WINDOW_ODDS);
            let win_hi = lo + 2 * (span as u64 - 1);
            let marks = &mut self.marks[..span];
            marks.fill(false);
            for &p in &self.base {
                let p = p as u64;
                if p * p > win_hi {
                    break;
                }
                let mut m = (p * p).max(lo.div_ceil(p) * p);
                if m % 2 == 0 {
                    m += p;
                }
                let mut i = ((m - lo) / 2) as usize;
                while i < span {
                    marks[i] = true;
                    i += p as usize;
                }
            }
            for (i, &c) in marks.iter().enumerate() {
                let n = lo + 2 * i as u64;
                if !c && n > 1 {
                    self.buf.push(n);
                }
            }
            self.next_lo = win_hi + 2;
        }
        true
    }
}

impl Iterator for PrimeSieve {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.pos >= self.buf.len() && !self.refill() {
            return None;
        }
        let p = self.buf[self.pos];
        self.pos += 1;
        Some(p)
    }
}

/// Table sizing knobs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableConfig {
    /// Smallest-prime-factor entries kept; factorizations above it use trial division.
    pub spf_cap: u64,
    /// Largest `limit` accepted.
    pub limit_cap: u64,
}

impl Default for TableConfig {
    fn default() -> Self {
        TableConfig { spf_cap: DEFAULT_SPF_CAP, limit_cap: DEFAULT_LIMIT_CAP }
    }
}

/// Every prime up to `limit`, plus a smallest-prime-factor table on a prefix.
#[derive(Clone, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u32>,
    spf: Vec<u32>,
}

impl fmt::Debug for PrimeTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PrimeTable")
            .field("limit", &self.limit)
            .field("primes", &self.primes.len())
            .field("spf", &self.spf.len())
            .finish()
    }
}

/// Builds the table for `limit` with the default configuration.
pub fn prime_table(limit: u64) -> Result<PrimeTable> {
    PrimeTable::with_config(limit, TableConfig::default())
}

impl PrimeTable {
    pub fn new(limit: u64) -> Result<Self> {
        prime_table(limit)
    }

    pub fn with_config(limit: u64, config: TableConfig) -> Result<Self> {
        if limit < 1 {
            return Err(Error::domain("prime table limit must be at least 1"));
        }
        check_limit(limit, config)?;
        let spf_len = limit.min(config.spf_cap);
        let (spf, mut primes) = linear_sieve(spf_len as usize);
        if limit > spf_len {
            primes.extend(PrimeSieve::new(spf_len + 1, limit).map(|p| p as u32));
        }
        Ok(PrimeTable { limit, primes, spf })
    }

    /// Rebuilds a table from an explicit ascending prime list (as read from a cache).
    pub fn from_primes(limit: u64, primes: Vec<u32>, config: TableConfig) -> Result<Self> {
        check_limit(limit, config)?;
        if primes.windows(2).any(|w| w[0] >= w[1]) || primes.last().is_some_and(|&p| p as u64 > limit) {
            return Err(Error::domain("prime list is not strictly increasing within the limit"));
        }
        let spf_len = limit.min(config.spf_cap) as usize;
        let mut spf = vec![0u32; if spf_len == 0 { 0 } else { spf_len + 1 }];
        if spf_len > 0 {
            spf[1] = 1;
            for &p in &primes {
                let p = p as usize;
                if p > spf_len {
                    break;
                }
                let mut m = p;
                while m <= spf_len {
                    if spf[m] == 0 {
                        spf[m] = p as u32;
                    }
                    m += p;
                }
            }
            if spf[2..].contains(&0) {
                return Err(Error::domain("prime list has gaps"));
            }
        }
        Ok(PrimeTable { limit, primes, spf })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// Largest `n` covered by the smallest-prime-factor table (0 when absent).
    pub fn spf_limit(&self) -> u64 {
        self.spf.len().saturating_sub(1) as u64
    }

    pub fn spf(&self, n: u64) -> Option<u64> {
        if n >= 2 && (n as usize) < self.spf.len() {
            Some(self.spf[n as usize] as u64)
        } else {
            None
        }
    }

    /// Primality for `n <= limit`; `None` outside the table.
    pub fn is_prime(&self, n: u64) -> Option<bool> {
        if n > self.limit {
            return None;
        }
        if let Some(s) = self.spf(n) {
            return Some(s == n);
        }
        if n < 2 {
            return Some(false);
        }
        Some(self.primes.binary_search(&(n as u32)).is_ok())
    }

    /// Number of tabulated primes `<= x`.
    pub fn count_up_to(&self, x: u64) -> usize {
        self.primes.partition_point(|&p| (p as u64) <= x)
    }
}

fn check_limit(limit: u64, config: TableConfig) -> Result<()> {
    if limit > config.limit_cap {
        return Err(Error::capacity(alloc::format!(
            "prime table limit {limit} exceeds the configured cap {}",
            config.limit_cap
        )));
    }
    if limit > u32::MAX as u64 {
        return Err(Error::capacity("prime table limit exceeds 32-bit prime storage"));
    }
    Ok(())
}

fn linear_sieve(n: usize) -> (Vec<u32>, Vec<u32>) {
    if n == 0 {
        return (Vec::new(), Vec::new());
    }
    let mut spf = vec![0u32; n + 1];
    let mut primes = Vec::new();
    spf[1] = 1;
    for i in 2..=n {
        if spf[i] == 0 {
            spf[i] = i as u32;
            primes.push(i as u32);
        }
        let si = spf[i];
        for &p in &primes {
            if p > si || i * p as usize > n {
                break;
            }
            spf[i * p as usize] = p;
        }
    }
    (spf, primes)
}

/// Sorted prime-power decomposition of a positive integer.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// Builds from prime-power pairs, checking order and the product.
    pub fn from_parts(n: u64, factors: Vec<(u64, u32)>) -> Result<Self> {
        let mut prod: u64 = 1;
        for (i, &(p, e)) in factors.iter().enumerate() {
            if e == 0 || p < 2 || (i > 0 && factors[i - 1].0 >= p) {
                return Err(Error::domain("factors must be increasing primes with positive exponents"));
            }
            for _ in 0..e {
                prod = prod.checked_mul(p).ok_or_else(|| Error::domain("factor product overflows"))?;
            }
        }
        if prod != n || n == 0 {
            return Err(Error::domain("factor product does not equal n"));
        }
        Ok(Factorization { n, factors })
    }

    pub fn one() -> Self {
        Factorization { n: 1, factors: Vec::new() }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn tau(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| e as u64 + 1).product()
    }

    pub fn mu(&self) -> i64 {
        if self.factors.iter().any(|&(_, e)| e > 1) {
            0
        } else if self.factors.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn omega(&self) -> u32 {
        self.factors.len() as u32
    }

    /// Distinct odd prime divisors.
    pub fn omega_star(&self) -> u32 {
        self.factors.iter().filter(|&&(p, _)| p != 2).count() as u32
    }

    pub fn largest_prime_factor(&self) -> Option<u64> {
        self.factors.last().map(|&(p, _)| p)
    }

    pub fn is_prime(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }

    pub fn von_mangoldt(&self) -> f64 {
        match self.factors.as_slice() {
            [(p, _)] => libm::log(*p as f64),
            _ => 0.0,
        }
    }
}

/// Factors `n` using the table's smallest-prime-factor prefix, then trial division.
pub fn factor(n: u64, table: &PrimeTable) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::domain("cannot factor 0"));
    }
    if (n as u128) > (table.limit as u128) * (table.limit as u128) {
        return Err(Error::capacity(alloc::format!(
            "{n} exceeds the square of the prime table limit {}",
            table.limit
        )));
    }
    let mut factors: Vec<(u64, u32)> = Vec::new();
    let mut rem = n;
    let push = |p: u64, factors: &mut Vec<(u64, u32)>| match factors.last_mut() {
        Some((q, e)) if *q == p => *e += 1,
        _ => factors.push((p, 1)),
    };
    if rem >= 2 && (rem as usize) < table.spf.len() {
        while rem > 1 {
            let p = table.spf[rem as usize] as u64;
            push(p, &mut factors);
            rem /= p;
        }
        return Ok(Factorization { n, factors });
    }
    for &p in &table.primes {
        let p = p as u64;
        if p * p > rem {
            break;
        }
        while rem % p == 0 {
            push(p, &mut factors);
            rem /= p;
        }
        if (rem as usize) < table.spf.len() {
            while rem > 1 {
                let q = table.spf[rem as usize] as u64;
                push(q, &mut factors);
                rem /= q;
            }
        }
    }
    if rem > 1 {
        push(rem, &mut factors);
    }
    Ok(Factorization { n, factors })
}

/// The Dirichlet character modulo 4.
pub fn chi4(n: u64) -> i64 {
    match n % 4 {
        1 => 1,
        3 => -1,
        _ => 0,
    }
}

/// Names accepted by [`arithmetic_function`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArithFn {
    Tau,
    Mu,
    Omega,
    OmegaStar,
    LargestPrimeFactor,
    Chi4,
    VonMangoldt,
    ThetaIndicator,
}

impl ArithFn {
    pub const ALL: [ArithFn; 8] = [
        ArithFn::Tau,
        ArithFn::Mu,
        ArithFn::Omega,
        ArithFn::OmegaStar,
        ArithFn::LargestPrimeFactor,
        ArithFn::Chi4,
        ArithFn::VonMangoldt,
        ArithFn::ThetaIndicator,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ArithFn::Tau => "tau",
            ArithFn::Mu => "mu",
            ArithFn::Omega => "omega",
            ArithFn::OmegaStar => "omega_star",
            ArithFn::LargestPrimeFactor => "largest_prime_factor",
            ArithFn::Chi4 => "chi4",
            ArithFn::VonMangoldt => "von_mangoldt",
            ArithFn::ThetaIndicator => "theta_indicator",
        }
    }
}

impl FromStr for ArithFn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ArithFn::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::domain(alloc::format!("unknown arithmetic function `{s}`")))
    }
}

/// Integer-valued or real-valued result of an arithmetic function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ArithValue {
    Int(i64),
    Real(f64),
}

impl ArithValue {
    pub fn as_f64(self) -> f64 {
        match self {
            ArithValue::Int(v) => v as f64,
            ArithValue::Real(v) => v,
        }
    }
}

/// Evaluates `f(n)`. `theta_indicator(n)` is `log n` for prime `n`, else 0.
pub fn arithmetic_function(f: ArithFn, n: u64, table: &PrimeTable) -> Result<ArithValue> {
    if n == 0 {
        return Err(Error::domain("arithmetic functions are defined for n >= 1"));
    }
    if f == ArithFn::Chi4 {
        return Ok(ArithValue::Int(chi4(n)));
    }
    let fact = factor(n, table)?;
    Ok(match f {
        ArithFn::Tau => ArithValue::Int(fact.tau() as i64),
        ArithFn::Mu => ArithValue::Int(fact.mu()),
        ArithFn::Omega => ArithValue::Int(fact.omega() as i64),
        ArithFn::OmegaStar => ArithValue::Int(fact.omega_star() as i64),
        ArithFn::LargestPrimeFactor => ArithValue::Int(
            fact.largest_prime_factor()
                .ok_or_else(|| Error::domain("largest_prime_factor(1) is undefined"))? as i64,
        ),
        ArithFn::VonMangoldt => ArithValue::Real(fact.von_mangoldt()),
        ArithFn::ThetaIndicator => {
            ArithValue::Real(if fact.is_prime() { libm::log(n as f64) } else { 0.0 })
        }
        ArithFn::Chi4 => unreachable!(),
    })
}

/// Number of primes `<= x` in the residue class, or all of them.
pub fn pi_count(x: u64, filter: Option<Residue>) -> u64 {
    PrimeSieve::up_to(x).filter(|&p| passes(p, filter)).count() as u64
}

/// `sum 1/p` over filtered primes `<= x`, smallest first.
pub fn prime_recip_sum(x: u64, filter: Option<Residue>) -> f64 {
    PrimeSieve::up_to(x).filter(|&p| passes(p, filter)).map(|p| 1.0 / p as f64).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chebyshev {
    Psi,
    Theta,
}

/// `psi(x) = sum_{p^k <= x} log p` and `theta(x) = sum_{p <= x} log p`.
pub fn chebyshev(kind: Chebyshev, x: u64) -> f64 {
    let mut acc = 0.0;
    for p in PrimeSieve::up_to(x) {
        let lp = libm::log(p as f64);
        match kind {
            Chebyshev::Theta => acc += lp,
            Chebyshev::Psi => {
                let mut q = p;
                while q <= x {
                    acc += lp;
                    match q.checked_mul(p) {
                        Some(next) => q = next,
                        None => break,
                    }
                }
            }
        }
    }
    acc
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &w)) in XGK[..7].iter().zip(WGK[..7].iter()).enumerate() {
        let s = f(c - h * x) + f(c + h * x);
        kronrod += w * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kronrod * h, libm::fabs((kronrod - gauss) * h))
}

/// `Li(x) = integral_2^x dt / log t` by adaptive Gauss-Kronrod in the variable `u = log t`.
pub fn log_integral(x: f64) -> Result<f64> {
    if !x.is_finite() || x < 2.0 {
        return Err(Error::domain("log_integral needs finite x >= 2"));
    }
    if x == 2.0 {
        return Ok(0.0);
    }
    let f = |u: f64| libm::exp(u) / u;
    let (a, b) = (libm::log(2.0), libm::log(x));
    let mut stack = vec![(a, b, 0u32)];
    let mut total = 0.0;
    while let Some((lo, hi, depth)) = stack.pop() {
        let (val, err) = gauss_kronrod(&f, lo, hi);
        let tol = 1e-13f64.max(1e-15 * libm::fabs(val)) * (hi - lo) / (b - a);
        if err <= tol || depth >= 40 {
            total += val;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi, depth + 1));
            stack.push((lo, mid, depth + 1));
        }
    }
    Ok(total)
}
