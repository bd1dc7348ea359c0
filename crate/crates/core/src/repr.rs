//! Representation numbers `r_S(n) = #{(a, b) : a >= 0, b >= 1, a^2 + b^2 = n, b in S}` and friends.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_integer::Integer;

use crate::arith::{factor, Factorization, PrimeSieve, PrimeTable};
use crate::error::{Error, Result};

/// Which representation function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    R0,
    R0Star,
    R1,
    R1Star,
    R2,
    R2Star,
    /// Unordered prime pairs `p < q`.
    R2Unordered,
    RBig,
    RBigStar,
    RPrime,
    RPrimeStar,
}

/// Membership condition on the second coordinate `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Base {
    All,
    Prime,
    /// Sums of two squares.
    R,
    /// Sums of two coprime squares.
    RPrime,
}

impl Family {
    pub const ALL: [Family; 11] = [
        Family::R0,
        Family::R0Star,
        Family::R1,
        Family::R1Star,
        Family::R2,
        Family::R2Star,
        Family::R2Unordered,
        Family::RBig,
        Family::RBigStar,
        Family::RPrime,
        Family::RPrimeStar,
    ];

    /// Short name used on the command line and in CSV output.
    pub fn name(self) -> &'static str {
        match self {
            Family::R0 => "r0",
            Family::R0Star => "r0star",
            Family::R1 => "r1",
            Family::R1Star => "r1star",
            Family::R2 => "r2",
            Family::R2Star => "r2star",
            Family::R2Unordered => "R2",
            Family::RBig => "rR",
            Family::RBigStar => "rRstar",
            Family::RPrime => "rRprime",
            Family::RPrimeStar => "rRprimestar",
        }
    }

    pub fn base(self) -> Base {
        match self {
            Family::R0 | Family::R0Star => Base::All,
            Family::R1 | Family::R1Star | Family::R2 | Family::R2Star | Family::R2Unordered => Base::Prime,
            Family::RBig | Family::RBigStar => Base::R,
            Family::RPrime | Family::RPrimeStar => Base::RPrime,
        }
    }

    /// Whether `gcd(a, b) = 1` is required.
    pub fn coprime(self) -> bool {
        matches!(
            self,
            Family::R0Star | Family::R1Star | Family::RBigStar | Family::RPrimeStar
        )
    }

    /// Whether the first coordinate must be prime as well.
    pub fn first_prime(self) -> bool {
        matches!(self, Family::R2 | Family::R2Star | Family::R2Unordered)
    }

    /// Whether a closed form is available.
    pub fn has_formula(self) -> bool {
        matches!(self, Family::R0 | Family::R0Star)
    }

    /// Extra condition tying `a` to `b` beyond membership.
    fn pair_ok(self, a: u64, b: u64) -> bool {
        match self {
            Family::R2Star => a != b,
            Family::R2Unordered => a < b,
            f if f.coprime() => a.gcd(&b) == 1,
            _ => true,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::domain(alloc::format!("unknown family `{s}`")))
    }
}

/// How values are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    Formula,
    Enumerate,
    Bucket,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RepFamily {
    pub family: Family,
    pub strategy: Strategy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RepValue {
    pub n: u64,
    pub family: Family,
    pub value: u64,
}

/// `r_0(n) = sum_{d | n} chi_4(d)` in product form.
pub fn r0_formula(fact: &Factorization) -> u64 {
    fact.factors()
        .iter()
        .map(|&(p, e)| match p % 4 {
            1 => e as u64 + 1,
            3 => (e % 2 == 0) as u64,
            _ => 1,
        })
        .product()
}

/// Representations with `gcd(a, b) = 1`.
pub fn r0_star(fact: &Factorization) -> u64 {
    fact.factors()
        .iter()
        .map(|&(p, e)| match p % 4 {
            1 => 2,
            3 => 0,
            _ => (e == 1) as u64,
        })
        .product()
}

pub fn in_r(fact: &Factorization) -> bool {
    fact.factors().iter().all(|&(p, e)| p % 4 != 3 || e % 2 == 0)
}

pub fn in_r_prime(fact: &Factorization) -> bool {
    fact.factors().iter().all(|&(p, e)| p % 4 == 1 || (p == 2 && e == 1))
}

fn base_member(base: Base, b: u64, table: &PrimeTable) -> Result<bool> {
    Ok(match base {
        Base::All => true,
        Base::Prime => table.is_prime(b).ok_or_else(|| Error::capacity("prime table too small"))?,
        Base::R => in_r(&factor(b, table)?),
        Base::RPrime => in_r_prime(&factor(b, table)?),
    })
}

/// Counts representations by walking `a = 0, 1, ...` and testing `b = sqrt(n - a^2)`.
pub fn rep_enumerate(family: Family, n: u64, table: &PrimeTable) -> Result<u64> {
    if n == 0 {
        return Err(Error::domain("n must be positive"));
    }
    let root = n.isqrt();
    if table.limit() < root {
        return Err(Error::capacity(alloc::format!(
            "enumerating n={n} needs primes to {root}, table stops at {}",
            table.limit()
        )));
    }
    let mut count = 0;
    for a in 0..=root {
        let rem = n - a * a;
        if rem == 0 {
            continue;
        }
        let b = rem.isqrt();
        if b * b != rem || !family.pair_ok(a, b) {
            continue;
        }
        if family.first_prime() && !base_member(Base::Prime, a, table)? {
            continue;
        }
        if base_member(family.base(), b, table)? {
            count += 1;
        }
    }
    Ok(count)
}

/// Closed form where one exists, enumeration otherwise.
pub fn evaluate(family: Family, n: u64, table: &PrimeTable) -> Result<RepValue> {
    let value = match family {
        Family::R0 => r0_formula(&factor(n, table)?),
        Family::R0Star => r0_star(&factor(n, table)?),
        _ => rep_enumerate(family, n, table)?,
    };
    Ok(RepValue { n, family, value })
}

/// Ordered pairs of prime representations `(p1, q1), (p2, q2)` with a common sum `<= x`
/// and different underlying sets.
pub fn d2_count(x: u64) -> u64 {
    d2_by_sum(x).iter().map(|&(_, c)| c).sum()
}

/// Nonzero contributions to [`d2_count`] keyed by the common sum, ascending.
pub fn d2_by_sum(x: u64) -> Vec<(u64, u64)> {
    let primes: Vec<u64> = PrimeSieve::up_to(x.isqrt()).collect();
    let mut sums: Vec<(u64, u64)> = Vec::new();
    for (i, &p) in primes.iter().enumerate() {
        for &q in &primes[i..] {
            let s = p * p + q * q;
            if s > x {
                break;
            }
            sums.push((s, if p == q { 1 } else { 2 }));
        }
    }
    sums.sort_unstable();
    sums.chunk_by(|a, b| a.0 == b.0)
        .filter_map(|group| {
            let ordered: u64 = group.iter().map(|g| g.1).sum();
            let same: u64 = group.iter().map(|g| g.1 * g.1).sum();
            let c = ordered * ordered - same;
            (c > 0).then_some((group[0].0, c))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::prime_table;

    #[test]
    fn closed_forms() {
        let t = prime_table(100).unwrap();
        let f = |n| factor(n, &t).unwrap();
        assert_eq!(r0_formula(&f(1)), 1);
        assert_eq!(r0_formula(&f(3)), 0);
        assert_eq!(r0_formula(&f(25)), 3);
        assert_eq!(r0_star(&f(4)), 0);
        assert_eq!(r0_star(&f(9)), 0);
        assert_eq!(r0_star(&f(65)), 4);
        assert!(in_r(&f(9)) && !in_r_prime(&f(9)));
        assert!(in_r(&f(2)) && in_r_prime(&f(2)));
        assert!(!in_r(&f(21)) && !in_r_prime(&f(21)));
        assert!(in_r(&f(1)) && in_r_prime(&f(1)));
    }

    #[test]
    fn enumeration_examples() {
        let t = prime_table(100).unwrap();
        assert_eq!(rep_enumerate(Family::R1, 13, &t).unwrap(), 2);
        assert_eq!(rep_enumerate(Family::R2, 338, &t).unwrap(), 3);
        assert_eq!(rep_enumerate(Family::RBig, 25, &t).unwrap(), 2);
        assert_eq!(rep_enumerate(Family::R1Star, 8, &t).unwrap(), 0);
        assert!(matches!(rep_enumerate(Family::R0, 20_000, &t), Err(Error::Capacity(_))));
    }

    #[test]
    fn d2_examples() {
        assert_eq!(d2_count(100), 0);
        assert_eq!(d2_count(337), 0);
        assert_eq!(d2_count(338), 4);
    }

    #[test]
    fn names_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
    }
}
