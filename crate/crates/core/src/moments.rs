//! Segmented bulk evaluation of representation numbers and their moments.
//!
//! The unit of work is a half-open window `[lo, hi)`. Values in a window come from
//! bucket generation (walk pairs `(a, b)` and bump `counts[a^2 + b^2 - lo]`), from
//! per-n closed forms driven by a segmented factorization, or from per-n enumeration.
//! Window results feed a [`Collector`]; collectors merge by exact integer addition,
//! so any split into windows and any worker schedule give the same totals.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{factor, PrimeTable};
use crate::error::{Error, Result};
use crate::repr::{in_r, in_r_prime, rep_enumerate, Base, Family, RepFamily, Strategy};

pub const DEFAULT_SEGMENT: u64 = 1 << 20;
/// Largest `x` an engine will accept.
pub const ENGINE_X_CAP: u64 = 10_000_000_000;
/// Largest power or binomial order.
pub const MAX_ORDER: u32 = 8;

const IS_PRIME: u8 = 1;
const IN_R: u8 = 2;
const IN_R_PRIME: u8 = 4;

/// Per-n data from the segmented factorization pass.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FactorRecord {
    pub omega: u8,
    pub omega_star: u8,
    pub r0: u32,
    pub r0_star: u32,
    pub tau: u32,
    /// Largest prime factor, 1 for n = 1.
    pub largest: u64,
    /// Whether the square of the largest prime factor divides n.
    pub largest_repeated: bool,
}

impl FactorRecord {
    fn unit() -> Self {
        FactorRecord { omega: 0, omega_star: 0, r0: 1, r0_star: 1, tau: 1, largest: 1, largest_repeated: false }
    }

    fn absorb(&mut self, p: u64, e: u32) {
        self.omega += 1;
        self.tau *= e + 1;
        if p != 2 {
            self.omega_star += 1;
        }
        match p % 4 {
            1 => {
                self.r0 *= e + 1;
                self.r0_star *= 2;
            }
            3 => {
                if e % 2 == 1 {
                    self.r0 = 0;
                }
                self.r0_star = 0;
            }
            _ => {
                if e >= 2 {
                    self.r0_star = 0;
                }
            }
        }
        self.largest = p;
        self.largest_repeated = e >= 2;
    }
}

/// Factor records for every n in `[lo, hi)`; `primes` must cover `sqrt(hi - 1)`.
pub fn factor_segment(lo: u64, hi: u64, primes: &[u32]) -> Vec<FactorRecord> {
    let len = (hi - lo) as usize;
    let mut rem: Vec<u64> = (lo..hi).collect();
    let mut recs = vec![FactorRecord::unit(); len];
    let root = (hi - 1).isqrt();
    for &p in primes {
        let p = p as u64;
        if p > root {
            break;
        }
        let mut i = (lo.div_ceil(p) * p - lo) as usize;
        while i < len {
            let mut e = 0;
            let mut r = rem[i];
            while r % p == 0 {
                r /= p;
                e += 1;
            }
            rem[i] = r;
            recs[i].absorb(p, e);
            i += p as usize;
        }
    }
    for (r, rec) in rem.iter().zip(recs.iter_mut()) {
        if *r > 1 {
            rec.absorb(*r, 1);
        }
    }
    recs
}

/// Membership flags for candidate coordinates `0..=root`.
#[derive(Debug, Clone)]
pub struct BaseSets {
    flags: Vec<u8>,
}

impl BaseSets {
    pub fn new(root: u64, table: &PrimeTable) -> Result<Self> {
        if table.limit() < root {
            return Err(Error::capacity(format!(
                "base sets to {root} need a prime table to {root}, have {}",
                table.limit()
            )));
        }
        let mut flags = vec![0u8; root as usize + 1];
        for b in 1..=root {
            let f = factor(b, table)?;
            let mut v = 0;
            if f.is_prime() {
                v |= IS_PRIME;
            }
            if in_r(&f) {
                v |= IN_R;
            }
            if in_r_prime(&f) {
                v |= IN_R_PRIME;
            }
            flags[b as usize] = v;
        }
        Ok(BaseSets { flags })
    }

    pub fn root(&self) -> u64 {
        self.flags.len() as u64 - 1
    }

    fn member(&self, base: Base, b: u64) -> bool {
        let f = self.flags[b as usize];
        match base {
            Base::All => true,
            Base::Prime => f & IS_PRIME != 0,
            Base::R => f & IN_R != 0,
            Base::RPrime => f & IN_R_PRIME != 0,
        }
    }
}

/// Per-n counts over `[lo, hi)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountSegment {
    pub lo: u64,
    pub hi: u64,
    pub family: Family,
    pub counts: Vec<u32>,
}

fn bucket_into(family: Family, lo: u64, hi: u64, sets: &BaseSets, counts: &mut [u32]) -> Result<()> {
    let root = (hi - 1).isqrt();
    if root > sets.root() {
        return Err(Error::capacity("window beyond the engine's base sets"));
    }
    let base = family.base();
    for b in 1..=root {
        if !sets.member(base, b) {
            continue;
        }
        let b2 = b * b;
        let mut a = if lo > b2 { (lo - b2 - 1).isqrt() + 1 } else { 0 };
        loop {
            let n = a * a + b2;
            if n >= hi {
                break;
            }
            let keep = match family {
                Family::R2 => sets.member(Base::Prime, a),
                Family::R2Star => a != b && sets.member(Base::Prime, a),
                Family::R2Unordered => a < b && sets.member(Base::Prime, a),
                f if f.coprime() => num_integer::gcd(a, b) == 1,
                _ => true,
            };
            if keep {
                let slot = &mut counts[(n - lo) as usize];
                *slot = slot
                    .checked_add(1)
                    .ok_or_else(|| Error::internal(format!("32-bit counter overflow at n={n}")))?;
            }
            a += 1;
        }
    }
    Ok(())
}

/// Bucket-generated counts for `[lo, hi)`; needs `hi - 1 <= table.limit()^2`.
pub fn accumulate_counts(family: Family, lo: u64, hi: u64, table: &PrimeTable) -> Result<CountSegment> {
    if lo < 1 || lo >= hi {
        return Err(Error::domain("need 1 <= lo < hi"));
    }
    if (hi as u128 - 1) > (table.limit() as u128).pow(2) {
        return Err(Error::capacity("window exceeds the square of the prime table limit"));
    }
    let sets = BaseSets::new((hi - 1).isqrt(), table)?;
    let mut counts = vec![0u32; (hi - lo) as usize];
    bucket_into(family, lo, hi, &sets, &mut counts)?;
    Ok(CountSegment { lo, hi, family, counts })
}

/// Accumulates per-n values from one or more windows.
pub trait Collector: Clone + Send {
    /// Whether [`Collector::visit`] wants factor records.
    fn needs_factors(&self) -> bool;
    fn visit(&mut self, n: u64, value: u32, rec: Option<&FactorRecord>) -> Result<()>;
    fn merge(&mut self, other: Self) -> Result<()>;
}

/// Anything that can drive a collector over `1..=x`.
pub trait Scanner {
    fn scan<C: Collector>(&self, rep: RepFamily, x: u64, proto: C) -> Result<C>;
}

/// Serial engine: owns the prime table and base sets for `x <= x_max`.
#[derive(Debug, Clone)]
pub struct Engine {
    x_max: u64,
    table: PrimeTable,
    sets: BaseSets,
    segment: u64,
}

impl Engine {
    pub fn new(x_max: u64) -> Result<Self> {
        Self::with_segment(x_max, DEFAULT_SEGMENT)
    }

    pub fn with_segment(x_max: u64, segment: u64) -> Result<Self> {
        if x_max > ENGINE_X_CAP {
            return Err(Error::capacity(format!("x = {x_max} exceeds the engine budget {ENGINE_X_CAP}")));
        }
        let root = x_max.max(4).isqrt();
        Self::from_table(x_max, PrimeTable::new(root)?, segment)
    }

    /// Engine over a prebuilt table covering `sqrt(x_max)`.
    pub fn from_table(x_max: u64, table: PrimeTable, segment: u64) -> Result<Self> {
        if x_max > ENGINE_X_CAP {
            return Err(Error::capacity(format!("x = {x_max} exceeds the engine budget {ENGINE_X_CAP}")));
        }
        if segment == 0 {
            return Err(Error::domain("segment size must be positive"));
        }
        let root = x_max.max(4).isqrt();
        if table.limit() < root {
            return Err(Error::capacity(format!("table stops at {}, engine needs {root}", table.limit())));
        }
        let sets = BaseSets::new(root, &table)?;
        Ok(Engine { x_max: x_max.max(4), table, sets, segment })
    }

    /// Same tables, different window length.
    pub fn with_segment_size(mut self, segment: u64) -> Result<Self> {
        if segment == 0 {
            return Err(Error::domain("segment size must be positive"));
        }
        self.segment = segment;
        Ok(self)
    }

    pub fn x_max(&self) -> u64 {
        self.x_max
    }

    pub fn segment_size(&self) -> u64 {
        self.segment
    }

    pub fn table(&self) -> &PrimeTable {
        &self.table
    }

    /// Windows covering `1..=x` in ascending order.
    pub fn segments(&self, x: u64) -> impl Iterator<Item = (u64, u64)> + '_ {
        let step = self.segment;
        (0..).map(move |i| 1 + i * step).take_while(move |&lo| lo <= x).map(move |lo| (lo, (lo + step).min(x + 1)))
    }

    /// Counts for one window under the given strategy.
    pub fn counts(&self, rep: RepFamily, lo: u64, hi: u64) -> Result<CountSegment> {
        let recs = if rep.strategy == Strategy::Formula { Some(self.records(lo, hi)?) } else { None };
        let counts = self.values(rep, lo, hi, recs.as_deref())?;
        Ok(CountSegment { lo, hi, family: rep.family, counts })
    }

    fn records(&self, lo: u64, hi: u64) -> Result<Vec<FactorRecord>> {
        self.check_window(lo, hi)?;
        Ok(factor_segment(lo, hi, self.table.primes()))
    }

    fn check_window(&self, lo: u64, hi: u64) -> Result<()> {
        if lo < 1 || lo >= hi {
            return Err(Error::domain("need 1 <= lo < hi"));
        }
        if hi - 1 > self.x_max {
            return Err(Error::capacity(format!("window end {} beyond engine x_max {}", hi - 1, self.x_max)));
        }
        Ok(())
    }

    fn values(&self, rep: RepFamily, lo: u64, hi: u64, recs: Option<&[FactorRecord]>) -> Result<Vec<u32>> {
        self.check_window(lo, hi)?;
        let mut counts = vec![0u32; (hi - lo) as usize];
        match rep.strategy {
            Strategy::Bucket => bucket_into(rep.family, lo, hi, &self.sets, &mut counts)?,
            Strategy::Formula => {
                let recs = recs.ok_or_else(|| Error::internal("formula path without factor records"))?;
                for (c, r) in counts.iter_mut().zip(recs) {
                    *c = match rep.family {
                        Family::R0 => r.r0,
                        Family::R0Star => r.r0_star,
                        f => return Err(Error::domain(format!("no closed form for {f}"))),
                    };
                }
            }
            Strategy::Enumerate => {
                for (i, c) in counts.iter_mut().enumerate() {
                    *c = rep_enumerate(rep.family, lo + i as u64, &self.table)? as u32;
                }
            }
        }
        Ok(counts)
    }

    /// Feeds one window into `c`.
    pub fn run_segment<C: Collector>(&self, rep: RepFamily, lo: u64, hi: u64, c: &mut C) -> Result<()> {
        let recs = if c.needs_factors() || rep.strategy == Strategy::Formula {
            Some(self.records(lo, hi)?)
        } else {
            None
        };
        let counts = self.values(rep, lo, hi, recs.as_deref())?;
        match &recs {
            Some(r) => {
                for (i, (&v, rec)) in counts.iter().zip(r).enumerate() {
                    c.visit(lo + i as u64, v, Some(rec))?;
                }
            }
            None => {
                for (i, &v) in counts.iter().enumerate() {
                    c.visit(lo + i as u64, v, None)?;
                }
            }
        }
        Ok(())
    }
}

impl Scanner for Engine {
    fn scan<C: Collector>(&self, rep: RepFamily, x: u64, proto: C) -> Result<C> {
        if x > self.x_max {
            return Err(Error::capacity(format!("x = {x} beyond engine x_max {}", self.x_max)));
        }
        let mut c = proto;
        for (lo, hi) in self.segments(x) {
            self.run_segment(rep, lo, hi, &mut c)?;
        }
        Ok(c)
    }
}

/// Which prime-divisor count keys a histogram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OmegaKind {
    Omega,
    OmegaStar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OmegaFilter {
    pub kind: OmegaKind,
    pub value: u32,
}

/// `rows[key][v]` = number of n with `f(n) = v` (and `omega(n) = key` when keyed).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Histogram {
    key: Option<OmegaKind>,
    rows: Vec<Vec<u64>>,
}

impl Histogram {
    pub fn new(key: Option<OmegaKind>) -> Self {
        Histogram { key, rows: Vec::new() }
    }

    pub fn key(&self) -> Option<OmegaKind> {
        self.key
    }

    fn bump(&mut self, row: usize, v: usize, by: u64) {
        if self.rows.len() <= row {
            self.rows.resize(row + 1, Vec::new());
        }
        let r = &mut self.rows[row];
        if r.len() <= v {
            r.resize(v + 1, 0);
        }
        r[v] += by;
    }

    /// Value counts restricted by `filter`, or across all rows.
    pub fn counts(&self, filter: Option<OmegaFilter>) -> Result<Vec<u64>> {
        match filter {
            None => {
                let width = self.rows.iter().map(Vec::len).max().unwrap_or(0);
                let mut out = vec![0u64; width];
                for r in &self.rows {
                    for (o, c) in out.iter_mut().zip(r) {
                        *o += c;
                    }
                }
                Ok(out)
            }
            Some(f) if Some(f.kind) == self.key => {
                Ok(self.rows.get(f.value as usize).cloned().unwrap_or_default())
            }
            Some(_) => Err(Error::domain("histogram is not keyed by the requested filter")),
        }
    }

    pub fn power(&self, k: u32, filter: Option<OmegaFilter>) -> Result<u128> {
        let counts = self.counts(filter)?;
        let mut acc: u128 = 0;
        for (v, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let term = (v as u128)
                .checked_pow(k)
                .and_then(|p| p.checked_mul(c as u128))
                .ok_or_else(overflow)?;
            acc = acc.checked_add(term).ok_or_else(overflow)?;
        }
        Ok(acc)
    }

    pub fn binomial(&self, l: u32, filter: Option<OmegaFilter>) -> Result<u128> {
        let counts = self.counts(filter)?;
        let mut acc: u128 = 0;
        for (v, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let term = binom(v as u128, l).checked_mul(c as u128).ok_or_else(overflow)?;
            acc = acc.checked_add(term).ok_or_else(overflow)?;
        }
        Ok(acc)
    }

    /// Number of n with `f(n) >= 1`.
    pub fn zeroth(&self, filter: Option<OmegaFilter>) -> Result<u128> {
        Ok(self.counts(filter)?.iter().skip(1).map(|&c| c as u128).sum())
    }
}

fn overflow() -> Error {
    Error::capacity("moment accumulator overflow (128-bit)")
}

fn binom(v: u128, l: u32) -> u128 {
    if (l as u128) > v {
        return 0;
    }
    let mut c: u128 = 1;
    for i in 0..l as u128 {
        c = c * (v - i) / (i + 1);
    }
    c
}

impl Collector for Histogram {
    fn needs_factors(&self) -> bool {
        self.key.is_some()
    }

    fn visit(&mut self, _n: u64, value: u32, rec: Option<&FactorRecord>) -> Result<()> {
        let row = match (self.key, rec) {
            (None, _) => 0,
            (Some(OmegaKind::Omega), Some(r)) => r.omega as usize,
            (Some(OmegaKind::OmegaStar), Some(r)) => r.omega_star as usize,
            (Some(_), None) => return Err(Error::internal("keyed histogram without factor records")),
        };
        self.bump(row, value as usize, 1);
        Ok(())
    }

    fn merge(&mut self, other: Self) -> Result<()> {
        if self.key != other.key {
            return Err(Error::internal("merging histograms with different keys"));
        }
        for (row, r) in other.rows.into_iter().enumerate() {
            for (v, c) in r.into_iter().enumerate() {
                if c != 0 {
                    self.bump(row, v, c);
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Power(u32),
    Binomial(u32),
    Zeroth,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MomentQuery {
    pub family: RepFamily,
    pub x: u64,
    pub mode: Mode,
    pub filter: Option<OmegaFilter>,
}

impl MomentQuery {
    /// Bucket-path query with no filter.
    pub fn new(family: Family, x: u64, mode: Mode) -> Self {
        MomentQuery { family: RepFamily { family, strategy: Strategy::Bucket }, x, mode, filter: None }
    }

    pub fn filtered(mut self, kind: OmegaKind, value: u32) -> Self {
        self.filter = Some(OmegaFilter { kind, value });
        self
    }

    pub fn strategy(mut self, strategy: Strategy) -> Self {
        self.family.strategy = strategy;
        self
    }
}

/// Value histogram of `family` over `1..=x`, keyed by `key` if given.
pub fn histogram<S: Scanner>(s: &S, family: RepFamily, x: u64, key: Option<OmegaKind>) -> Result<Histogram> {
    if x < 1 {
        return Err(Error::domain("x must be at least 1"));
    }
    s.scan(family, x, Histogram::new(key))
}

/// Evaluates any moment query.
pub fn moment<S: Scanner>(s: &S, q: &MomentQuery) -> Result<u128> {
    match q.mode {
        Mode::Power(k) | Mode::Binomial(k) if k > MAX_ORDER => {
            return Err(Error::domain(format!("order {k} exceeds {MAX_ORDER}")))
        }
        _ => {}
    }
    let h = histogram(s, q.family, q.x, q.filter.map(|f| f.kind))?;
    match q.mode {
        Mode::Power(k) => h.power(k, q.filter),
        Mode::Binomial(l) => h.binomial(l, q.filter),
        Mode::Zeroth => h.zeroth(q.filter),
    }
}

/// `sum_{n <= x} f(n)^k`.
pub fn power_moment<S: Scanner>(s: &S, q: &MomentQuery) -> Result<u128> {
    match q.mode {
        Mode::Power(_) => moment(s, q),
        _ => Err(Error::domain("power_moment needs a power query")),
    }
}

/// `sum_{n <= x} C(f(n), l)`.
pub fn binomial_moment<S: Scanner>(s: &S, q: &MomentQuery) -> Result<u128> {
    match q.mode {
        Mode::Binomial(_) => moment(s, q),
        _ => Err(Error::domain("binomial_moment needs a binomial query")),
    }
}

/// `#{n <= x : f(n) >= 1}`.
pub fn zeroth_moment<S: Scanner>(s: &S, family: Family, x: u64) -> Result<u128> {
    moment(s, &MomentQuery::new(family, x, Mode::Zeroth))
}

/// `#{n <= x : 4 does not divide n, no p = 3 mod 4 divides n, omega*(n) = k}`.
pub fn rho_kn<S: Scanner>(s: &S, x: u64, k: u32) -> Result<u128> {
    let q = MomentQuery::new(Family::R0Star, x, Mode::Zeroth)
        .strategy(Strategy::Formula)
        .filtered(OmegaKind::OmegaStar, k);
    moment(s, &q)
}

/// Stirling numbers of the second kind up to `max_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StirlingTable {
    max_k: u32,
    values: Vec<Vec<BigUint>>,
}

impl StirlingTable {
    pub fn new(max_k: u32) -> Result<Self> {
        if max_k > 64 {
            return Err(Error::domain("Stirling table limited to k <= 64"));
        }
        let mut values: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]];
        for k in 1..=max_k as usize {
            let prev = &values[k - 1];
            let mut row = vec![BigUint::zero(); k + 1];
            for l in 1..=k {
                let stay = if l < k { prev[l].clone() * BigUint::from(l) } else { BigUint::zero() };
                row[l] = stay + prev[l - 1].clone();
            }
            values.push(row);
        }
        Ok(StirlingTable { max_k, values })
    }

    pub fn max_k(&self) -> u32 {
        self.max_k
    }

    pub fn get(&self, k: u32, l: u32) -> Result<&BigUint> {
        if k > self.max_k || l > k {
            return Err(Error::domain(format!("S({k},{l}) outside 0 <= l <= k <= {}", self.max_k)));
        }
        Ok(&self.values[k as usize][l as usize])
    }
}

/// `S(k, l)` for `0 <= l <= k <= 64`.
pub fn stirling(k: u32, l: u32) -> Result<BigUint> {
    if k > 64 || l > k {
        return Err(Error::domain(format!("S({k},{l}) outside 0 <= l <= k <= 64")));
    }
    Ok(StirlingTable::new(k)?.get(k, l)?.clone())
}

/// `power_moment(k) - sum_l S(k, l) l! binomial_moment(l)`; zero whenever the engine is consistent.
pub fn moment_identity_residual<S: Scanner>(s: &S, family: Family, x: u64, k: u32) -> Result<i128> {
    if k > 6 {
        return Err(Error::domain("identity residual defined for k <= 6"));
    }
    let h = histogram(s, RepFamily { family, strategy: Strategy::Bucket }, x, None)?;
    let table = StirlingTable::new(k)?;
    let mut rhs = BigInt::zero();
    let mut fact = BigUint::one();
    for l in 1..=k {
        fact *= BigUint::from(l);
        let term = table.get(k, l)? * &fact * BigUint::from(h.binomial(l, None)?);
        rhs += BigInt::from(term);
    }
    if k == 0 {
        rhs = BigInt::from(h.binomial(0, None)?);
    }
    let lhs = BigInt::from(h.power(k, None)?);
    (lhs - rhs).to_i128().ok_or_else(|| Error::capacity("identity residual exceeds 128 bits"))
}

/// First, second and zeroth moments, and whether `m1^2 / m2 <= M <= m1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sandwich {
    pub first: u128,
    pub second: u128,
    pub zeroth: u128,
    pub holds: bool,
}

pub fn cauchy_schwarz_sandwich<S: Scanner>(s: &S, family: Family, x: u64) -> Result<Sandwich> {
    let h = histogram(s, RepFamily { family, strategy: Strategy::Bucket }, x, None)?;
    let (first, second, zeroth) = (h.power(1, None)?, h.power(2, None)?, h.zeroth(None)?);
    let lhs = BigUint::from(first).pow(2);
    let mid = BigUint::from(zeroth) * BigUint::from(second);
    Ok(Sandwich { first, second, zeroth, holds: lhs <= mid && zeroth <= first })
}

/// Both sides of `sum r2^2 = 2 sum r2 + D2(x) - #{p : 2p^2 <= x}`.
pub fn r2_square_identity<S: Scanner>(s: &S, x: u64) -> Result<(u128, u128)> {
    let h = histogram(s, RepFamily { family: Family::R2, strategy: Strategy::Bucket }, x, None)?;
    let diagonal = crate::arith::PrimeSieve::up_to((x / 2).isqrt()).count() as u128;
    let rhs = 2 * h.power(1, None)? + crate::repr::d2_count(x) as u128 - diagonal;
    Ok((h.power(2, None)?, rhs))
}
