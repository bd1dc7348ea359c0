//! On-disk prime bitmaps (`RNPK` files).
//!
//! Layout: magic `RNPK`, format version (u32 LE), limit (u64 LE), then one bit per odd
//! integer `3, 5, 7, ..., <= limit`, least significant bit first, padded to whole bytes.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use repnum_core::arith::{PrimeSieve, PrimeTable, TableConfig};

pub const MAGIC: &[u8; 4] = b"RNPK";
pub const VERSION: u32 = 1;
pub const CACHE_ENV: &str = "REPNUM_CACHE_DIR";
pub const DEFAULT_DIR: &str = "./.repnum-cache";
const HEADER: usize = 16;

/// Cache directory from the environment, or the default.
pub fn cache_dir() -> PathBuf {
    std::env::var_os(CACHE_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from(DEFAULT_DIR))
}

/// Primes up to `limit` as a bitmap over odd integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeBits {
    limit: u64,
    bits: Vec<u8>,
}

fn odd_slots(limit: u64) -> u64 {
    if limit < 3 {
        0
    } else {
        (limit - 3) / 2 + 1
    }
}

impl PrimeBits {
    pub fn sieve(limit: u64) -> Self {
        let slots = odd_slots(limit);
        let mut bits = vec![0u8; slots.div_ceil(8) as usize];
        for p in PrimeSieve::up_to(limit).skip_while(|&p| p == 2) {
            let i = (p - 3) / 2;
            bits[(i / 8) as usize] |= 1 << (i % 8);
        }
        PrimeBits { limit, bits }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn is_prime(&self, n: u64) -> Option<bool> {
        if n > self.limit {
            return None;
        }
        Some(match n {
            0 | 1 => false,
            2 => true,
            _ if n % 2 == 0 => false,
            _ => {
                let i = (n - 3) / 2;
                self.bits[(i / 8) as usize] >> (i % 8) & 1 == 1
            }
        })
    }

    /// Ascending primes up to the limit.
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        let two = (self.limit >= 2).then_some(2);
        let odd = self.bits.iter().enumerate().flat_map(|(byte, &b)| {
            (0..8).filter(move |bit| b >> bit & 1 == 1).map(move |bit| 3 + 2 * (byte as u64 * 8 + bit))
        });
        two.into_iter().chain(odd)
    }

    pub fn to_table(&self, config: TableConfig) -> repnum_core::Result<PrimeTable> {
        if self.limit > u32::MAX as u64 {
            return Err(repnum_core::Error::Capacity(format!("limit {} beyond 32-bit primes", self.limit)));
        }
        PrimeTable::from_primes(self.limit, self.primes().map(|p| p as u32).collect(), config)
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER + self.bits.len());
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&self.limit.to_le_bytes());
        out.extend_from_slice(&self.bits);
        out
    }

    pub fn decode(bytes: &[u8]) -> io::Result<Self> {
        let bad = |m: &str| io::Error::new(io::ErrorKind::InvalidData, m.to_string());
        if bytes.len() < HEADER || &bytes[..4] != MAGIC {
            return Err(bad("not an RNPK file"));
        }
        let version = u32::from_le_bytes(bytes[4..8].try_into().expect("4 bytes"));
        if version != VERSION {
            return Err(bad(&format!("unsupported RNPK version {version}")));
        }
        let limit = u64::from_le_bytes(bytes[8..16].try_into().expect("8 bytes"));
        let body = &bytes[HEADER..];
        if body.len() as u64 != odd_slots(limit).div_ceil(8) {
            return Err(bad("RNPK body length does not match the limit"));
        }
        Ok(PrimeBits { limit, bits: body.to_vec() })
    }
}

pub fn cache_path(dir: &Path, limit: u64) -> PathBuf {
    dir.join(format!("primes-{limit}.rnpk"))
}

/// Reads the bitmap for `limit` from `dir`, sieving and writing it if missing or unreadable.
///
/// Write failures are not fatal: the freshly sieved bitmap is returned either way.
pub fn load_or_build(dir: &Path, limit: u64) -> PrimeBits {
    let path = cache_path(dir, limit);
    if let Ok(bits) = fs::read(&path).and_then(|b| PrimeBits::decode(&b)) {
        if bits.limit == limit {
            return bits;
        }
    }
    let bits = PrimeBits::sieve(limit);
    let _ = store(&path, &bits);
    bits
}

fn store(path: &Path, bits: &PrimeBits) -> io::Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(&bits.encode())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_layout() {
        let b = PrimeBits::sieve(20);
        assert_eq!(b.primes().collect::<Vec<_>>(), [2, 3, 5, 7, 11, 13, 17, 19]);
        let enc = b.encode();
        assert_eq!(&enc[..4], b"RNPK");
        assert_eq!(enc[4..8], [1, 0, 0, 0]);
        assert_eq!(enc[8..16], 20u64.to_le_bytes());
        // 3 5 7 9 11 13 15 17 | 19
        assert_eq!(&enc[16..], [0b1011_0111, 0b0000_0001]);
        assert_eq!(PrimeBits::decode(&enc).unwrap(), b);
    }

    #[test]
    fn rejects_damage() {
        let mut enc = PrimeBits::sieve(100).encode();
        enc.pop();
        assert!(PrimeBits::decode(&enc).is_err());
        assert!(PrimeBits::decode(b"RNPX").is_err());
    }

    #[test]
    fn tiny_limits() {
        assert_eq!(PrimeBits::sieve(1).primes().count(), 0);
        assert_eq!(PrimeBits::sieve(2).primes().collect::<Vec<_>>(), [2]);
        assert_eq!(PrimeBits::sieve(3).primes().collect::<Vec<_>>(), [2, 3]);
    }
}
