//! Selberg's upper-bound sieve over the box `1 <= a, b <= N`, in exact rationals.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{chi4, PrimeSieve};
use crate::error::{Error, Result};

/// Largest `z` accepted.
pub const Z_CAP: f64 = 1000.0;
/// Largest box side for the exhaustive oracle.
pub const BOX_CAP: u64 = 10_000;
/// Largest number of squarefree divisors enumerated for remainders.
pub const DIVISOR_CAP: usize = 1 << 20;
/// Largest number of primes dividing the lambda support in the admissibility check.
pub const ADMISSIBLE_PRIMES_CAP: usize = 22;

/// Which events and weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// `p | F(a, b)` for every sifting prime.
    A,
    /// `p | F(a, b)` for `p = 3 mod 4`; no event for `p = 1 mod 4`.
    B,
    /// `p || F(a, b)` (exact division) for `p = 3 mod 4`.
    C,
}

impl Variant {
    pub fn letter(self) -> char {
        match self {
            Variant::A => 'A',
            Variant::B => 'B',
            Variant::C => 'C',
        }
    }

    pub fn from_letter(c: &str) -> Result<Self> {
        match c {
            "A" | "a" => Ok(Variant::A),
            "B" | "b" => Ok(Variant::B),
            "C" | "c" => Ok(Variant::C),
            _ => Err(Error::domain(format!("unknown sieve variant `{c}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PrimeSet {
    All,
    ThreeMod4,
}

/// `phi(a, b) = r a + s b` with coprime nonzero coefficients.
///
/// A representation `m = u^2 + v^2` contributes the pair `u a + v b` and `v a - u b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearForm {
    r: i64,
    s: i64,
}

impl LinearForm {
    pub fn new(r: i64, s: i64) -> Result<Self> {
        if r == 0 || s == 0 || r.unsigned_abs().gcd(&s.unsigned_abs()) != 1 {
            return Err(Error::domain(format!("form {r}:{s} needs nonzero coprime coefficients")));
        }
        Ok(LinearForm { r, s })
    }

    /// The two forms attached to `u^2 + v^2`.
    pub fn pair(u: u64, v: u64) -> Result<[LinearForm; 2]> {
        let (u, v) = (u as i64, v as i64);
        Ok([LinearForm::new(u, v)?, LinearForm::new(v, -u)?])
    }

    pub fn r(&self) -> i64 {
        self.r
    }

    pub fn s(&self) -> i64 {
        self.s
    }

    pub fn eval(&self, a: u64, b: u64) -> i128 {
        self.r as i128 * a as i128 + self.s as i128 * b as i128
    }

    pub fn det(&self, other: &LinearForm) -> i128 {
        self.r as i128 * other.s as i128 - other.r as i128 * self.s as i128
    }
}

/// One sieve instance.
#[derive(Debug, Clone, PartialEq)]
pub struct SieveProblem {
    pub variant: Variant,
    /// Box side `N`.
    pub n_box: u64,
    /// Main-term estimate `X`.
    pub x: BigRational,
    pub m: u64,
    pub forms: Vec<LinearForm>,
    pub prime_set: PrimeSet,
    pub z: f64,
    pub xi: f64,
}

/// Squarefree product of sifting primes, with its prime-index bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Divisor {
    d: u64,
    mask: u128,
    omega: u32,
}

/// Value of the bound and its parts.
#[derive(Debug, Clone, PartialEq)]
pub struct SieveBound {
    pub g_total: BigRational,
    pub main: BigRational,
    pub remainder: BigRational,
    pub total: BigRational,
}

impl SieveBound {
    pub fn value(&self) -> f64 {
        to_f64(&self.total)
    }
}

pub fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl SieveProblem {
    /// Problem with `X = N^2` and `xi = z`.
    pub fn new(
        variant: Variant,
        n_box: u64,
        m: u64,
        forms: Vec<LinearForm>,
        prime_set: PrimeSet,
        z: f64,
    ) -> Result<Self> {
        let p = SieveProblem {
            variant,
            n_box,
            x: BigRational::from_integer(BigInt::from(n_box) * BigInt::from(n_box)),
            m,
            forms,
            prime_set,
            z,
            xi: z,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_xi(mut self, xi: f64) -> Result<Self> {
        self.xi = xi;
        self.validate()?;
        Ok(self)
    }

    pub fn with_x(mut self, x: BigRational) -> Result<Self> {
        if x.is_negative() {
            return Err(Error::domain("X must be non-negative"));
        }
        self.x = x;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        if self.n_box < 1 || self.m < 1 {
            return Err(Error::domain("box side and m must be positive"));
        }
        if !(self.z.is_finite() && self.xi.is_finite()) || self.z < 1.0 {
            return Err(Error::domain("z and xi must be finite with z >= 1"));
        }
        if self.z > self.xi {
            return Err(Error::domain(format!("need z <= xi, got z={} xi={}", self.z, self.xi)));
        }
        if self.z > Z_CAP {
            return Err(Error::capacity(format!("z = {} beyond the sieve cap {Z_CAP}", self.z)));
        }
        Ok(())
    }

    /// Number of forms.
    pub fn ell(&self) -> usize {
        self.forms.len()
    }

    /// `m * prod_{i<j} |det(phi_i, phi_j)|`.
    pub fn t(&self) -> BigUint {
        let mut t = BigUint::from(self.m);
        for (i, f) in self.forms.iter().enumerate() {
            for g in &self.forms[i + 1..] {
                t *= BigUint::from(f.det(g).unsigned_abs());
            }
        }
        t
    }

    pub fn divides_t(&self, p: u64) -> bool {
        if self.m % p == 0 {
            return true;
        }
        let p = p as i128;
        self.forms
            .iter()
            .enumerate()
            .any(|(i, f)| self.forms[i + 1..].iter().any(|g| f.det(g) % p == 0))
    }

    /// Number of distinct lines through the origin cut out by the forms modulo `p`.
    pub fn ell_p(&self, p: u64) -> usize {
        let p = p as i128;
        let mut keys: Vec<i128> = self
            .forms
            .iter()
            .map(|f| {
                let r = (f.r as i128).rem_euclid(p);
                let s = (f.s as i128).rem_euclid(p);
                if s == 0 {
                    -1
                } else {
                    r * mod_inverse(s, p) % p
                }
            })
            .collect();
        keys.sort_unstable();
        keys.dedup();
        keys.len()
    }

    /// Sifting dimension recorded for reporting: average of `p g(p)` over sifting primes.
    pub fn kappa(&self) -> f64 {
        let l = self.ell() as f64;
        match (self.variant, self.prime_set) {
            (Variant::A, PrimeSet::All) => l + 1.0,
            _ => l / 2.0,
        }
    }

    fn in_prime_set(&self, p: u64) -> bool {
        match self.prime_set {
            PrimeSet::All => true,
            PrimeSet::ThreeMod4 => p % 4 == 3,
        }
    }

    /// Primes `p` in the prime set with `l + 2 < p <= z`.
    pub fn sifting_primes(&self) -> Vec<u64> {
        let floor = self.ell() as u64 + 2;
        let top = libm::floor(self.z) as u64;
        PrimeSieve::new(floor + 1, top).filter(|&p| self.in_prime_set(p)).collect()
    }

    /// The weight `g(p)`.
    pub fn weight_g(&self, p: u64) -> Result<BigRational> {
        if p <= self.ell() as u64 + 2 {
            return Err(Error::domain(format!("p = {p} is not above l + 2 = {}", self.ell() + 2)));
        }
        if !self.in_prime_set(p) {
            return Ok(BigRational::zero());
        }
        let pi = p as i64;
        let chi = chi4(p);
        Ok(match self.variant {
            Variant::A => {
                let lines = if self.m % p == 0 { 0 } else { self.ell_p(p) as i64 };
                rat(1 + (pi - 1) * (lines + 1 + chi), pi * pi)
            }
            Variant::B => {
                if p % 4 == 1 {
                    BigRational::zero()
                } else {
                    rat(1 + self.ell_p(p) as i64 * (pi - 1), pi * pi)
                }
            }
            Variant::C => {
                if p % 4 == 1 || self.divides_t(p) {
                    BigRational::zero()
                } else {
                    BigRational::new(
                        BigInt::from(self.ell() as i64 * pi * (pi - 1) * (pi - 1)),
                        BigInt::from(pi).pow(4),
                    )
                }
            }
        })
    }

    /// `h(p) = g(p) / (1 - g(p))`.
    pub fn weight_h(&self, p: u64) -> Result<BigRational> {
        let g = self.weight_g(p)?;
        Ok(&g / (BigRational::one() - &g))
    }

    /// Whether the sifting event for `p` holds at `(a, b)`.
    pub fn event(&self, p: u64, a: u64, b: u64) -> bool {
        match self.variant {
            Variant::A => self.p_divides_f(p, a, b),
            Variant::B => p % 4 == 3 && self.p_divides_f(p, a, b),
            Variant::C => p % 4 == 3 && self.valuation_f(p, a, b) == 1,
        }
    }

    fn p_divides_f(&self, p: u64, a: u64, b: u64) -> bool {
        let pi = p as i128;
        (a as u128 * a as u128 + b as u128 * b as u128) % p as u128 == 0
            || self.forms.iter().any(|f| f.eval(a, b) % pi == 0)
    }

    /// `min(v_p(F(a, b)), 2)`.
    fn valuation_f(&self, p: u64, a: u64, b: u64) -> u32 {
        let p = p as i128;
        let v = |x: i128| -> u32 {
            if x % (p * p) == 0 {
                2
            } else if x % p == 0 {
                1
            } else {
                0
            }
        };
        let mut total = v(a as i128 * a as i128 + b as i128 * b as i128);
        for f in &self.forms {
            total += v(f.eval(a, b));
            if total >= 2 {
                return 2;
            }
        }
        total
    }

    fn divisors_below(&self, primes: &[u64], bound: f64) -> Result<Vec<Divisor>> {
        let mut out = vec![Divisor { d: 1, mask: 0, omega: 0 }];
        let mut stack = vec![(0usize, Divisor { d: 1, mask: 0, omega: 0 })];
        while let Some((start, cur)) = stack.pop() {
            for (i, &p) in primes.iter().enumerate().skip(start) {
                let d = cur.d * p;
                if d as f64 > bound {
                    break;
                }
                let next = Divisor { d, mask: cur.mask | (1u128 << i), omega: cur.omega + 1 };
                out.push(next);
                if out.len() > DIVISOR_CAP {
                    return Err(Error::capacity(format!("more than {DIVISOR_CAP} sieve divisors")));
                }
                stack.push((i + 1, next));
            }
        }
        out.sort_unstable_by_key(|d| d.d);
        Ok(out)
    }

    fn indexed_primes(&self) -> Result<Vec<u64>> {
        let primes = self.sifting_primes();
        if primes.len() > 128 {
            return Err(Error::capacity("more than 128 sifting primes"));
        }
        Ok(primes)
    }

    fn h_table(&self, primes: &[u64]) -> Result<Vec<BigRational>> {
        primes.iter().map(|&p| self.weight_h(p)).collect()
    }

    /// Sum of `h(l)` over squarefree `l` built from sifting primes up to `z`, coprime to `d`, with `l < xi`.
    pub fn big_g(&self, d: u64, xi: f64, z: f64) -> Result<BigRational> {
        let primes = self.indexed_primes()?;
        if z > self.z {
            return Err(Error::domain("z beyond the problem's sifting range"));
        }
        let mask = self.mask_of(d, &primes)?;
        let allowed: Vec<usize> =
            (0..primes.len()).filter(|&i| (primes[i] as f64) <= z && mask & (1u128 << i) == 0).collect();
        let hs = self.h_table(&primes)?;
        let mut total = BigRational::zero();
        let mut stack = vec![(0usize, 1u64, BigRational::one())];
        while let Some((start, l, h)) = stack.pop() {
            if (l as f64) < xi {
                total += &h;
            } else {
                continue;
            }
            for (j, &i) in allowed.iter().enumerate().skip(start) {
                let nl = l * primes[i];
                if nl as f64 >= xi {
                    break;
                }
                stack.push((j + 1, nl, &h * &hs[i]));
            }
        }
        Ok(total)
    }

    fn mask_of(&self, d: u64, primes: &[u64]) -> Result<u128> {
        if d == 0 {
            return Err(Error::domain("d must be positive"));
        }
        let mut rest = d;
        let mut mask = 0u128;
        for (i, &p) in primes.iter().enumerate() {
            if rest % p == 0 {
                rest /= p;
                mask |= 1u128 << i;
                if rest % p == 0 {
                    return Err(Error::domain(format!("{d} is not squarefree")));
                }
            }
        }
        if rest != 1 {
            return Err(Error::domain(format!("{d} does not divide P(z)")));
        }
        Ok(mask)
    }

    /// `lambda_d` for squarefree `d < xi` built from sifting primes; `lambda_1 = 1`.
    pub fn lambda_weights(&self) -> Result<BTreeMap<u64, BigRational>> {
        let primes = self.indexed_primes()?;
        let gs: Vec<BigRational> = primes.iter().map(|&p| self.weight_g(p)).collect::<Result<_>>()?;
        let g_total = self.big_g(1, self.xi, self.z)?;
        let mut out = BTreeMap::new();
        for dv in self.divisors_below(&primes, self.xi)? {
            if dv.d as f64 >= self.xi {
                continue;
            }
            let mut w = BigRational::one();
            for (i, g) in gs.iter().enumerate() {
                if dv.mask & (1u128 << i) != 0 {
                    w /= BigRational::one() - g;
                }
            }
            let gd = self.big_g(dv.d, self.xi / dv.d as f64, self.z)?;
            let mut lam = w * gd / &g_total;
            if dv.omega % 2 == 1 {
                lam = -lam;
            }
            out.insert(dv.d, lam);
        }
        Ok(out)
    }

    /// `mu+(d) = sum_{[d1, d2] = d} lambda_d1 lambda_d2`, zero entries dropped.
    pub fn mu_plus(&self) -> Result<BTreeMap<u64, BigRational>> {
        let lambdas = self.lambda_weights()?;
        let mut out: BTreeMap<u64, BigRational> = BTreeMap::new();
        for (&d1, l1) in &lambdas {
            if l1.is_zero() {
                continue;
            }
            for (&d2, l2) in &lambdas {
                if l2.is_zero() {
                    continue;
                }
                let d = d1 / d1.gcd(&d2) * d2;
                *out.entry(d).or_insert_with(BigRational::zero) += l1 * l2;
            }
        }
        out.retain(|_, v| !v.is_zero());
        Ok(out)
    }

    /// Whether `sum_{d | n} mu+(d) >= [n = 1]` for every `n | P(z)`.
    ///
    /// Only primes dividing the support of `mu+` can change the divisor sum, so the check runs over
    /// all subsets of those primes.
    pub fn mu_plus_admissible(&self) -> Result<bool> {
        let mp = self.mu_plus()?;
        let primes = self.indexed_primes()?;
        let active: Vec<u64> = primes.iter().copied().filter(|&p| mp.keys().any(|d| d % p == 0)).collect();
        if active.len() > ADMISSIBLE_PRIMES_CAP {
            return Err(Error::capacity(format!(
                "admissibility check over {} primes exceeds {ADMISSIBLE_PRIMES_CAP}",
                active.len()
            )));
        }
        let k = active.len();
        let mut f = vec![BigRational::zero(); 1 << k];
        for (&d, v) in &mp {
            let mut mask = 0usize;
            for (i, &p) in active.iter().enumerate() {
                if d % p == 0 {
                    mask |= 1 << i;
                }
            }
            f[mask] = v.clone();
        }
        for i in 0..k {
            for mask in 0..(1usize << k) {
                if mask & (1 << i) != 0 && !f[mask ^ (1 << i)].is_zero() {
                    let low = f[mask ^ (1 << i)].clone();
                    f[mask] += low;
                }
            }
        }
        Ok(f[0] >= BigRational::one() && f.iter().all(|v| !v.is_negative()))
    }

    fn event_mask(&self, primes: &[u64], a: u64, b: u64) -> u128 {
        let mut mask = 0;
        for (i, &p) in primes.iter().enumerate() {
            if self.event(p, a, b) {
                mask |= 1u128 << i;
            }
        }
        mask
    }

    fn g_of(&self, dv: &Divisor, gs: &[BigRational]) -> BigRational {
        let mut g = BigRational::one();
        for (i, gi) in gs.iter().enumerate() {
            if dv.mask & (1u128 << i) != 0 {
                g *= gi;
            }
        }
        g
    }

    /// `R_d = |A_d| - g(d) X` with `|A_d|` counted over the box.
    pub fn remainder_rd(&self, d: u64) -> Result<BigRational> {
        self.check_box()?;
        let primes = self.indexed_primes()?;
        let mask = self.mask_of(d, &primes)?;
        let gs: Vec<BigRational> = primes.iter().map(|&p| self.weight_g(p)).collect::<Result<_>>()?;
        let dv = Divisor { d, mask, omega: mask.count_ones() };
        let mut count = 0u64;
        for a in 1..=self.n_box {
            for b in 1..=self.n_box {
                if self.event_mask(&primes, a, b) & mask == mask {
                    count += 1;
                }
            }
        }
        Ok(BigRational::from_integer(count.into()) - self.g_of(&dv, &gs) * &self.x)
    }

    fn check_box(&self) -> Result<()> {
        if self.n_box > BOX_CAP {
            return Err(Error::capacity(format!("box side {} beyond the oracle cap {BOX_CAP}", self.n_box)));
        }
        Ok(())
    }

    /// Histogram of event masks over the box.
    fn mask_histogram(&self, primes: &[u64]) -> BTreeMap<u128, u64> {
        let mut hist = BTreeMap::new();
        for a in 1..=self.n_box {
            for b in 1..=self.n_box {
                *hist.entry(self.event_mask(primes, a, b)).or_insert(0) += 1;
            }
        }
        hist
    }

    /// `X / G(xi, z) + sum_{d <= xi^2, d | P(z)} 3^omega(d) |R_d|`.
    pub fn sieve_upper_bound(&self) -> Result<SieveBound> {
        self.check_box()?;
        let primes = self.indexed_primes()?;
        let gs: Vec<BigRational> = primes.iter().map(|&p| self.weight_g(p)).collect::<Result<_>>()?;
        let g_total = self.big_g(1, self.xi, self.z)?;
        let main = &self.x / &g_total;
        let hist = self.mask_histogram(&primes);
        let mut remainder = BigRational::zero();
        for dv in self.divisors_below(&primes, self.xi * self.xi)? {
            let count: u64 = hist.iter().filter(|(m, _)| *m & dv.mask == dv.mask).map(|(_, c)| c).sum();
            let r = BigRational::from_integer(count.into()) - self.g_of(&dv, &gs) * &self.x;
            remainder += r.abs() * BigRational::from_integer(BigInt::from(3u32).pow(dv.omega));
        }
        let total = &main + &remainder;
        Ok(SieveBound { g_total, main, remainder, total })
    }

    /// `|S(A, p, z)|` by checking every box pair against every sifting prime.
    pub fn sifted_count_exact(&self) -> Result<u64> {
        self.check_box()?;
        let primes = self.sifting_primes();
        let mut count = 0;
        for a in 1..=self.n_box {
            for b in 1..=self.n_box {
                if !primes.iter().any(|&p| self.event(p, a, b)) {
                    count += 1;
                }
            }
        }
        Ok(count)
    }

    /// `X / G` with `G` replaced by `prod (1 - g(p))^{-1} / (e^{gamma kappa} Gamma(kappa + 1))`.
    pub fn halberstam_richert_main(&self) -> Result<f64> {
        let primes = self.indexed_primes()?;
        let mut log_prod = 0.0;
        for &p in &primes {
            let g = to_f64(&self.weight_g(p)?);
            log_prod -= libm::log1p(-g);
        }
        let kappa = self.kappa();
        let log_g = log_prod - EULER_GAMMA * kappa - libm::lgamma(kappa + 1.0);
        Ok(to_f64(&self.x) / libm::exp(log_g))
    }
}

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

fn mod_inverse(a: i128, p: i128) -> i128 {
    let (mut r0, mut r1) = (p, a.rem_euclid(p));
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    t0.rem_euclid(p)
}

/// Coprime representations `m = u^2 + v^2` with `u, v >= 1`, ordered.
pub fn coprime_reps(m: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut u = 1;
    while u * u < m {
        let rest = m - u * u;
        let v = rest.isqrt();
        if v * v == rest && v >= 1 && u.gcd(&v) == 1 {
            out.push((u, v));
        }
        u += 1;
    }
    out
}

/// All forms attached to the coprime representations of `m`.
pub fn forms_of(m: u64) -> Vec<LinearForm> {
    let mut out = Vec::new();
    for (u, v) in coprime_reps(m) {
        if let Ok(pair) = LinearForm::pair(u, v) {
            out.extend(pair);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy(xi: f64) -> SieveProblem {
        SieveProblem::new(Variant::A, 10, 1, Vec::new(), PrimeSet::ThreeMod4, 3.0).unwrap().with_xi(xi).unwrap()
    }

    #[test]
    fn toy_main_terms() {
        let p = toy(4.0);
        assert_eq!(p.sifting_primes(), [3]);
        assert_eq!(p.weight_g(3).unwrap(), rat(1, 9));
        assert_eq!(p.big_g(1, 4.0, 3.0).unwrap(), rat(9, 8));
        assert_eq!(p.big_g(1, 3.0, 3.0).unwrap(), rat(1, 1));
        assert_eq!(p.big_g(3, 4.0 / 3.0, 3.0).unwrap(), rat(1, 1));
        let lam = p.lambda_weights().unwrap();
        assert_eq!(lam[&1], rat(1, 1));
        assert_eq!(lam[&3], rat(-1, 1));
        let mp = p.mu_plus().unwrap();
        assert_eq!(mp[&3], rat(-1, 1));
        assert!(p.mu_plus_admissible().unwrap());
    }

    #[test]
    fn toy_remainders_and_bound() {
        let p = toy(4.0);
        assert_eq!(p.remainder_rd(3).unwrap(), rat(-19, 9));
        assert_eq!(p.remainder_rd(1).unwrap(), rat(0, 1));
        assert_eq!(p.sifted_count_exact().unwrap(), 91);
        let b = p.sieve_upper_bound().unwrap();
        assert_eq!(b.total, rat(800, 9) + rat(19, 3));
        assert!((b.value() - 95.22).abs() < 0.01);
        let b3 = toy(3.0).sieve_upper_bound().unwrap();
        assert!((b3.value() - 106.33).abs() < 0.01);
        let eleven = SieveProblem::new(Variant::A, 11, 1, Vec::new(), PrimeSet::ThreeMod4, 3.0).unwrap();
        assert_eq!(eleven.remainder_rd(1).unwrap(), rat(0, 1));
    }

    #[test]
    fn empty_prime_set() {
        let p = SieveProblem::new(Variant::A, 10, 1, Vec::new(), PrimeSet::All, 2.0).unwrap();
        assert!(p.sifting_primes().is_empty());
        assert_eq!(p.sieve_upper_bound().unwrap().total, rat(100, 1));
        assert_eq!(p.sifted_count_exact().unwrap(), 100);
    }

    #[test]
    fn weight_examples() {
        let one = LinearForm::pair(2, 1).unwrap()[0];
        let a = SieveProblem::new(Variant::A, 10, 5, vec![one], PrimeSet::All, 50.0).unwrap();
        assert_eq!(a.weight_g(7).unwrap(), rat(1, 7));
        let a13 = SieveProblem::new(Variant::A, 10, 13, vec![LinearForm::pair(3, 2).unwrap()[0]], PrimeSet::All, 50.0)
            .unwrap();
        assert_eq!(a13.weight_g(5).unwrap(), rat(13, 25));
        assert!(a.weight_g(3).is_err());
        let b = SieveProblem::new(Variant::B, 10, 5, vec![one], PrimeSet::All, 50.0).unwrap();
        assert_eq!(b.weight_g(13).unwrap(), rat(0, 1));
        let c = SieveProblem::new(Variant::C, 10, 5, LinearForm::pair(2, 1).unwrap().to_vec(), PrimeSet::All, 50.0)
            .unwrap();
        assert_eq!(c.weight_g(7).unwrap(), rat(504, 2401));
    }

    #[test]
    fn reps_and_forms() {
        assert_eq!(coprime_reps(65), [(1, 8), (4, 7), (7, 4), (8, 1)]);
        assert_eq!(coprime_reps(2), [(1, 1)]);
        assert!(coprime_reps(9).is_empty());
        assert_eq!(forms_of(5).len(), 4);
        assert!(LinearForm::new(2, 4).is_err());
    }

    #[test]
    fn z_above_xi_rejected() {
        let p = SieveProblem::new(Variant::A, 10, 1, Vec::new(), PrimeSet::All, 5.0).unwrap();
        assert!(p.with_xi(4.0).is_err());
    }
}
