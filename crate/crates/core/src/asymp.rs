//! Reference constants, predicted main terms and empirical comparisons.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use crate::arith::{prime_recip_sum, PrimeSieve, Residue};
use crate::error::{Error, Result};
use crate::moments::{histogram, Collector, FactorRecord, Histogram, OmegaFilter, OmegaKind, Scanner};
use crate::repr::{Family, RepFamily, Strategy};

/// Cutoff used for reference products unless a caller picks another.
pub const DEFAULT_CUTOFF: u64 = 100_000_000;

/// Truncated product over `p = 3 mod 4` and the constants derived from it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LandauRamanujan {
    pub cutoff: u64,
    /// `prod_{p = 3 mod 4, p <= cutoff} (1 - p^-2)`.
    pub product: f64,
    /// `(2 product)^{-1/2}`.
    pub value: f64,
    /// Upper bound on `|log(true / partial)|` for `value`.
    pub tail_bound: f64,
}

pub fn landau_ramanujan(cutoff: u64) -> Result<LandauRamanujan> {
    landau_ramanujan_from(cutoff, PrimeSieve::up_to(cutoff))
}

/// Same as [`landau_ramanujan`] over a caller-supplied ascending prime stream.
pub fn landau_ramanujan_from(cutoff: u64, primes: impl Iterator<Item = u64>) -> Result<LandauRamanujan> {
    if cutoff < 3 {
        return Err(Error::domain("cutoff must be at least 3"));
    }
    let mut product = 1.0;
    let mut terms = 0u64;
    for p in primes.take_while(|&p| p <= cutoff).filter(|p| p % 4 == 3) {
        let pf = p as f64;
        product *= 1.0 - 1.0 / (pf * pf);
        terms += 1;
    }
    let c = cutoff as f64;
    let tail = 0.5 * (1.0 / (c - 1.0)) / (1.0 - 1.0 / (c * c));
    let rounding = 2.0 * (terms as f64 + 1.0) * f64::EPSILON;
    Ok(LandauRamanujan {
        cutoff,
        product,
        value: 1.0 / libm::sqrt(2.0 * product),
        tail_bound: tail + rounding,
    })
}

impl LandauRamanujan {
    /// `(pi / 4) product^{-1/2}`.
    pub fn c_r(&self) -> f64 {
        PI / 4.0 / libm::sqrt(self.product)
    }

    /// `(3 pi / 8) product^{1/2}`.
    pub fn c_r_prime(&self) -> f64 {
        3.0 * PI / 8.0 * libm::sqrt(self.product)
    }

    /// `(3/2) (product / 2)^{1/2}`.
    pub fn m0_star(&self) -> f64 {
        1.5 * libm::sqrt(self.product / 2.0)
    }
}

/// Statistics with a predicted main term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Statistic {
    R0First,
    R0Second,
    R1First,
    R2First,
    R1Binom2,
    R1Second,
    M0,
    M2,
    M0Star,
    RBigFirst,
    RPrimeFirst,
    /// `sum_{omega*(n) = k} C(r1(n), l)`.
    GssShape { l: u32, k: u32 },
    /// `sum_{omega*(n) = k} C(rR*(n), l)`.
    RShape { l: u32, k: u32 },
}

impl Statistic {
    pub const SIMPLE: [Statistic; 11] = [
        Statistic::R0First,
        Statistic::R0Second,
        Statistic::R1First,
        Statistic::R2First,
        Statistic::R1Binom2,
        Statistic::R1Second,
        Statistic::M0,
        Statistic::M2,
        Statistic::M0Star,
        Statistic::RBigFirst,
        Statistic::RPrimeFirst,
    ];

    pub fn parse(s: &str) -> Result<Self> {
        if let Some(found) = Statistic::SIMPLE.into_iter().find(|st| format!("{st}") == s) {
            return Ok(found);
        }
        let shaped = |prefix: &str| -> Option<(u32, u32)> {
            let inner = s.strip_prefix(prefix)?.strip_prefix('(')?.strip_suffix(')')?;
            let (l, k) = inner.split_once(',')?;
            Some((l.trim().parse().ok()?, k.trim().parse().ok()?))
        };
        if let Some((l, k)) = shaped("gss_shape") {
            return Ok(Statistic::GssShape { l, k });
        }
        if let Some((l, k)) = shaped("rR_shape") {
            return Ok(Statistic::RShape { l, k });
        }
        Err(Error::domain(format!("unknown statistic `{s}`")))
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statistic::R0First => f.write_str("r0_first"),
            Statistic::R0Second => f.write_str("r0_second"),
            Statistic::R1First => f.write_str("r1_first"),
            Statistic::R2First => f.write_str("r2_first"),
            Statistic::R1Binom2 => f.write_str("r1_binom2"),
            Statistic::R1Second => f.write_str("r1_second"),
            Statistic::M0 => f.write_str("M0"),
            Statistic::M2 => f.write_str("M2"),
            Statistic::M0Star => f.write_str("M0star"),
            Statistic::RBigFirst => f.write_str("rR_first"),
            Statistic::RPrimeFirst => f.write_str("rRprime_first"),
            Statistic::GssShape { l, k } => write!(f, "gss_shape({l},{k})"),
            Statistic::RShape { l, k } => write!(f, "rR_shape({l},{k})"),
        }
    }
}

fn shape_factor(l: u32, k: u32, ll: f64) -> f64 {
    let base = libm::pow(2.0, l as f64 - 1.0) * ll;
    libm::exp(k as f64 * libm::log(base) - libm::lgamma(k as f64 + 1.0))
}

/// Main term of `stat` at `x`; products come from `lr`.
pub fn predicted_main(stat: Statistic, x: f64, lr: &LandauRamanujan) -> Result<f64> {
    if x.is_nan() || x < 16.0 {
        return Err(Error::domain(format!("predicted main terms need x >= 16, got {x}")));
    }
    let lx = libm::log(x);
    let ll = libm::log(lx);
    Ok(match stat {
        Statistic::R0First => PI / 4.0 * x,
        Statistic::R0Second => x * lx / 4.0,
        Statistic::R1First => PI / 2.0 * x / lx,
        Statistic::R2First => PI * x / (lx * lx),
        Statistic::R1Binom2 => 9.0 / 8.0 * x / lx,
        Statistic::R1Second => (PI / 2.0 + 9.0 / 4.0) * x / lx,
        Statistic::M0 => lr.value * x / libm::sqrt(lx),
        Statistic::M2 => PI / 2.0 * x / (lx * lx),
        Statistic::M0Star => lr.m0_star() * x / libm::sqrt(lx),
        Statistic::RBigFirst => lr.c_r() * x / libm::sqrt(lx),
        Statistic::RPrimeFirst => lr.c_r_prime() * x / libm::sqrt(lx),
        Statistic::GssShape { l, k } => x / libm::pow(lx, l as f64 + 1.0) * shape_factor(l, k, ll),
        Statistic::RShape { l, k } => x / libm::pow(libm::sqrt(lx), l as f64 + 1.0) * shape_factor(l, k, ll),
    })
}

fn bucket(family: Family) -> RepFamily {
    RepFamily { family, strategy: Strategy::Bucket }
}

/// Exact empirical value of `stat` over `n <= x`.
pub fn empirical<S: Scanner>(s: &S, stat: Statistic, x: u64) -> Result<u128> {
    let plain = |family| histogram(s, bucket(family), x, None);
    let star = |k| Some(OmegaFilter { kind: OmegaKind::OmegaStar, value: k });
    match stat {
        Statistic::R0First => plain(Family::R0)?.power(1, None),
        Statistic::R0Second => plain(Family::R0)?.power(2, None),
        Statistic::R1First => plain(Family::R1)?.power(1, None),
        Statistic::R2First => plain(Family::R2)?.power(1, None),
        Statistic::R1Binom2 => plain(Family::R1)?.binomial(2, None),
        Statistic::R1Second => plain(Family::R1)?.power(2, None),
        Statistic::M0 => plain(Family::R0)?.zeroth(None),
        Statistic::M2 => plain(Family::R2)?.zeroth(None),
        Statistic::M0Star => plain(Family::R0Star)?.zeroth(None),
        Statistic::RBigFirst => plain(Family::RBig)?.power(1, None),
        Statistic::RPrimeFirst => plain(Family::RPrime)?.power(1, None),
        Statistic::GssShape { l, k } => {
            histogram(s, bucket(Family::R1), x, Some(OmegaKind::OmegaStar))?.binomial(l, star(k))
        }
        Statistic::RShape { l, k } => {
            histogram(s, bucket(Family::RBigStar), x, Some(OmegaKind::OmegaStar))?.binomial(l, star(k))
        }
    }
}

/// One empirical-vs-predicted row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioReport {
    pub statistic: Statistic,
    pub x: u64,
    pub empirical: u128,
    pub predicted: f64,
    pub ratio: f64,
    pub residual: f64,
}

impl RatioReport {
    pub fn new(statistic: Statistic, x: u64, empirical: u128, predicted: f64) -> Self {
        let e = empirical as f64;
        let ratio = if predicted != 0.0 { e / predicted } else { f64::NAN };
        RatioReport { statistic, x, empirical, predicted, ratio, residual: e - predicted }
    }
}

/// Rows for every `x` in ascending order.
pub fn ratio_report<S: Scanner>(
    s: &S,
    stat: Statistic,
    xs: &[u64],
    lr: &LandauRamanujan,
) -> Result<Vec<RatioReport>> {
    let mut xs = xs.to_vec();
    xs.sort_unstable();
    xs.dedup();
    xs.into_iter()
        .map(|x| {
            let emp = empirical(s, stat, x)?;
            let pred = predicted_main(stat, x as f64, lr)?;
            Ok(RatioReport::new(stat, x, emp, pred))
        })
        .collect()
}

/// `H_est(x) = (sum r0^2 - x log x / 4) / x` per point and the spread over the last half.
pub fn fit_secondary_constant<S: Scanner>(s: &S, xs: &[u64]) -> Result<(Vec<f64>, f64)> {
    if xs.is_empty() || xs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("xs must be non-empty and increasing"));
    }
    let mut est = Vec::with_capacity(xs.len());
    for &x in xs {
        let second = histogram(s, bucket(Family::R0), x, None)?.power(2, None)? as f64;
        let xf = x as f64;
        est.push((second - xf * libm::log(xf) / 4.0) / xf);
    }
    let tail = &est[xs.len() / 2..];
    let hi = tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = tail.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok((est, hi - lo))
}

/// `sum_{p <= x, p = a mod 4} 1/p - (1/2) log log x`.
pub fn mertens_ap_constant(a: u64, x: u64) -> Result<f64> {
    let r = Residue::from_value(a).ok_or_else(|| Error::domain("residue must be 1 or 3 mod 4"))?;
    if x < 3 {
        return Err(Error::domain("x must be at least 3"));
    }
    Ok(prime_recip_sum(x, Some(r)) - 0.5 * libm::log(libm::log(x as f64)))
}

/// Smallest `k` maximizing `(2^{l-1} L)^k / k!`.
pub fn argmax_k(l_value: f64, l: u32) -> Result<u64> {
    if l_value.is_nan() || l_value <= 0.0 || l < 1 {
        return Err(Error::domain("need L > 0 and l >= 1"));
    }
    let c = libm::pow(2.0, l as f64 - 1.0) * l_value;
    let mut k = 0u64;
    while c > (k + 1) as f64 {
        k += 1;
    }
    Ok(k)
}

/// `sum_{q = p^e <= sqrt x, p = 1 mod 4} x / (q log(x / q))`.
pub fn inductive_claim_sum(x: u64) -> Result<f64> {
    if x < 16 {
        return Err(Error::domain("x must be at least 16"));
    }
    let root = x.isqrt();
    let xf = x as f64;
    let mut acc = 0.0;
    for p in PrimeSieve::up_to(root).filter(|p| p % 4 == 1) {
        let mut q = p;
        while q <= root {
            let qf = q as f64;
            acc += xf / (qf * libm::log(xf / qf));
            q *= p;
        }
    }
    Ok(acc)
}

/// The `gamma_2` implied at `x`: `inductive_claim_sum(x) log x / x - (1/2) log log x`.
pub fn gamma2_at(x: u64) -> Result<f64> {
    let lx = libm::log(x as f64);
    Ok(inductive_claim_sum(x)? * lx / x as f64 - 0.5 * libm::log(lx))
}

fn shape_family(family: Family) -> Result<bool> {
    match family {
        Family::R1 => Ok(true),
        Family::RBigStar | Family::RPrimeStar => Ok(false),
        f => Err(Error::domain(format!("shape ratios are defined for r1, rRstar, rRprimestar; got {f}"))),
    }
}

/// `B D^{l+1} k! / (x (2^{l-1} L)^k)` from a histogram keyed by `omega*`.
pub fn shape_ratio_from(h: &Histogram, x: u64, l: u32, k: u32, family: Family) -> Result<f64> {
    let log_scale = shape_family(family)?;
    if x < 3 || l < 1 {
        return Err(Error::domain("need x >= 3 and l >= 1"));
    }
    let b = h.binomial(l, Some(OmegaFilter { kind: OmegaKind::OmegaStar, value: k }))?;
    if b == 0 {
        return Ok(0.0);
    }
    let lx = libm::log(x as f64);
    let d = if log_scale { lx } else { libm::sqrt(lx) };
    let ll = libm::log(lx);
    Ok(b as f64 * libm::pow(d, l as f64 + 1.0) / (x as f64 * shape_factor(l, k, ll)))
}

pub fn gss_shape_ratio<S: Scanner>(s: &S, x: u64, l: u32, k: u32, family: Family) -> Result<f64> {
    shape_family(family)?;
    let h = histogram(s, bucket(family), x, Some(OmegaKind::OmegaStar))?;
    shape_ratio_from(&h, x, l, k, family)
}

/// Sums `r0*(n)^m` over `n` that are `z`-smooth or have a repeated largest prime.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothSquarefull {
    pub m: u32,
    pub z: f64,
    pub total: u128,
}

impl Collector for SmoothSquarefull {
    fn needs_factors(&self) -> bool {
        true
    }

    fn visit(&mut self, _n: u64, value: u32, rec: Option<&FactorRecord>) -> Result<()> {
        let rec = rec.ok_or_else(|| Error::internal("smooth sum needs factor records"))?;
        if value > 0 && (rec.largest as f64 <= self.z || rec.largest_repeated) {
            let term = (value as u128).checked_pow(self.m).ok_or_else(|| Error::capacity("r0*^m overflow"))?;
            self.total = self.total.checked_add(term).ok_or_else(|| Error::capacity("smooth sum overflow"))?;
        }
        Ok(())
    }

    fn merge(&mut self, other: Self) -> Result<()> {
        self.total = self.total.checked_add(other.total).ok_or_else(|| Error::capacity("smooth sum overflow"))?;
        Ok(())
    }
}

/// `z = x^{1 / log log x}`.
pub fn smooth_bound(x: u64) -> f64 {
    let lx = libm::log(x as f64);
    libm::exp(lx / libm::log(lx))
}

pub fn smooth_squarefull_rstar_sum<S: Scanner>(s: &S, x: u64, m: u32) -> Result<u128> {
    if x < 16 || m < 1 {
        return Err(Error::domain("need x >= 16 and m >= 1"));
    }
    let proto = SmoothSquarefull { m, z: smooth_bound(x), total: 0 };
    Ok(s.scan(RepFamily { family: Family::R0Star, strategy: Strategy::Formula }, x, proto)?.total)
}

/// Largest `log tau(n) log log n / (log n log 2)` over `lo <= n`, with its argument.
#[derive(Debug, Clone, PartialEq)]
pub struct TauGrowth {
    pub lo: u64,
    pub best: f64,
    pub arg: u64,
}

impl TauGrowth {
    pub fn new(lo: u64) -> Self {
        TauGrowth { lo: lo.max(3), best: f64::NEG_INFINITY, arg: 0 }
    }

    fn offer(&mut self, v: f64, n: u64) {
        if v > self.best || (v == self.best && n < self.arg) {
            self.best = v;
            self.arg = n;
        }
    }
}

impl Collector for TauGrowth {
    fn needs_factors(&self) -> bool {
        true
    }

    fn visit(&mut self, n: u64, _value: u32, rec: Option<&FactorRecord>) -> Result<()> {
        if n < self.lo {
            return Ok(());
        }
        let rec = rec.ok_or_else(|| Error::internal("tau growth needs factor records"))?;
        let ln = libm::log(n as f64);
        let v = libm::log(rec.tau as f64) * libm::log(ln) / (ln * core::f64::consts::LN_2);
        self.offer(v, n);
        Ok(())
    }

    fn merge(&mut self, other: Self) -> Result<()> {
        self.offer(other.best, other.arg);
        Ok(())
    }
}

/// Maximum of the divisor-growth ratio over `lo <= n <= hi`.
pub fn tau_growth_max<S: Scanner>(s: &S, lo: u64, hi: u64) -> Result<(f64, u64)> {
    let t = s.scan(RepFamily { family: Family::R0, strategy: Strategy::Formula }, hi, TauGrowth::new(lo))?;
    Ok((t.best, t.arg))
}

/// `sum_{n <= x} (r1(n) - r1*(n))`.
pub fn r1_gap_sum<S: Scanner>(s: &S, x: u64) -> Result<u128> {
    let all = histogram(s, bucket(Family::R1), x, None)?.power(1, None)?;
    let coprime = histogram(s, bucket(Family::R1Star), x, None)?.power(1, None)?;
    Ok(all - coprime)
}
