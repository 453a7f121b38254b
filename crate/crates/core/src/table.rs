//! Exact integer-complexity tables.
//!
//! `ComplexityTable` stores one byte per entry: index `n-1` holds the least
//! number of 1's needed to write `n` with additions and multiplications.
//! The builder fills the table with the standard recurrence
//!
//! ```text
//! cost(n) = min over a+b=n and a*b=n (a,b < n) of cost(a)+cost(b)
//! ```
//!
//! using a smallest-prime-factor sieve for the multiplicative splits and a
//! pruned ascending scan for the additive ones. A plain memoized recursion
//! (`BruteOracle`) with no pruning is kept around as a correctness reference.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// First four bytes of a table file.
pub const FORMAT_MAGIC: [u8; 4] = *b"ICX1";
/// Current table file format version.
pub const FORMAT_VERSION: u16 = 1;
/// Default builder memory budget (table + transient sieve).
pub const DEFAULT_MEMORY_BUDGET: u64 = 8 << 30;
/// Additive-prune margin: the scan only stops once the log lower bound
/// clears the current best by this much, so float rounding can never prune
/// a candidate that ties.
pub const PRUNE_EPSILON: f64 = 1e-9;
/// Largest n the reference oracle accepts (quadratic work per table entry).
pub const BRUTE_LIMIT: u64 = 100_000;

const LN3: f64 = 1.0986122886681098;

/// Immutable map `n -> cost(n)` for `1 <= n <= limit`, one byte per entry.
///
/// Entries fit a byte for every reachable limit since `cost(n) <= 3 log2 n`.
/// A finished table is safe to share across threads.
#[derive(Clone, PartialEq, Eq)]
pub struct ComplexityTable {
    costs: Vec<u8>,
}

impl std::fmt::Debug for ComplexityTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ComplexityTable")
            .field("limit", &self.limit())
            .finish_non_exhaustive()
    }
}

impl ComplexityTable {
    /// Largest n covered.
    pub fn limit(&self) -> u64 {
        self.costs.len() as u64
    }

    /// Exact complexity of n, or a range error naming the table limit.
    pub fn query(&self, n: u64) -> Result<u8> {
        if n == 0 || n > self.limit() {
            return Err(Error::OutOfRange {
                n,
                limit: self.limit(),
            });
        }
        Ok(self.costs[(n - 1) as usize])
    }

    /// Unchecked lookup for internal hot paths; `n` must be in range.
    #[inline]
    pub(crate) fn get(&self, n: u64) -> u8 {
        debug_assert!(n >= 1 && n <= self.limit());
        self.costs[(n - 1) as usize]
    }

    /// Raw cost bytes, index `n-1`.
    pub fn costs(&self) -> &[u8] {
        &self.costs
    }

    /// Write the table in the binary format described in the crate docs:
    /// magic `ICX1`, version 1 (LE u16), two reserved zero bytes, the limit
    /// as LE u64, then exactly `limit` payload bytes.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        w.write_all(&FORMAT_MAGIC)?;
        w.write_all(&FORMAT_VERSION.to_le_bytes())?;
        w.write_all(&[0u8, 0u8])?;
        w.write_all(&self.limit().to_le_bytes())?;
        w.write_all(&self.costs)?;
        w.flush()?;
        Ok(())
    }

    /// Load a table written by [`ComplexityTable::save`], validating the
    /// header and the payload length.
    pub fn load(path: &Path) -> Result<Self> {
        let mut r = BufReader::new(File::open(path)?);
        let mut header = [0u8; 16];
        let mut got = 0usize;
        while got < 16 {
            let k = r.read(&mut header[got..])?;
            if k == 0 {
                return Err(Error::TruncatedHeader { got });
            }
            got += k;
        }
        if header[0..4] != FORMAT_MAGIC {
            let mut found = [0u8; 4];
            found.copy_from_slice(&header[0..4]);
            return Err(Error::BadMagic { found });
        }
        let version = u16::from_le_bytes([header[4], header[5]]);
        if version != FORMAT_VERSION {
            return Err(Error::UnsupportedVersion { found: version });
        }
        let reserved = u16::from_le_bytes([header[6], header[7]]);
        if reserved != 0 {
            return Err(Error::ReservedNonzero { found: reserved });
        }
        let limit = u64::from_le_bytes(header[8..16].try_into().unwrap());
        if limit == 0 {
            return Err(Error::InvalidLimit { limit });
        }
        let mut costs = Vec::new();
        r.by_ref().take(limit).read_to_end(&mut costs)?;
        if (costs.len() as u64) < limit {
            return Err(Error::TruncatedPayload {
                declared: limit,
                got: costs.len() as u64,
            });
        }
        let mut probe = [0u8; 1];
        if r.read(&mut probe)? != 0 {
            return Err(Error::TrailingData { declared: limit });
        }
        Ok(ComplexityTable { costs })
    }
}

/// Build a table with default options.
pub fn build_table(limit: u64) -> Result<ComplexityTable> {
    TableBuilder::new(limit).build()
}

/// Convenience wrappers over [`ComplexityTable::save`] / [`load`].
pub fn save_table(table: &ComplexityTable, path: &Path) -> Result<()> {
    table.save(path)
}

pub fn load_table(path: &Path) -> Result<ComplexityTable> {
    ComplexityTable::load(path)
}

/// Configurable table builder.
pub struct TableBuilder {
    limit: u64,
    additive_prune: bool,
    memory_budget: u64,
}

impl TableBuilder {
    pub fn new(limit: u64) -> Self {
        TableBuilder {
            limit,
            additive_prune: true,
            memory_budget: DEFAULT_MEMORY_BUDGET,
        }
    }

    /// Disable the additive prune (full `a <= n/2` scan). Only useful for
    /// soundness cross-checks; the output must be identical either way.
    pub fn additive_prune(mut self, on: bool) -> Self {
        self.additive_prune = on;
        self
    }

    pub fn memory_budget(mut self, bytes: u64) -> Self {
        self.memory_budget = bytes;
        self
    }

    pub fn build(&self) -> Result<ComplexityTable> {
        let limit = self.limit;
        if limit == 0 {
            return Err(Error::InvalidLimit { limit });
        }
        // one byte per entry plus the transient 4-byte sieve entries
        let needed = limit.saturating_mul(5).saturating_add(1 << 20);
        if needed > self.memory_budget || limit > u32::MAX as u64 {
            return Err(Error::LimitTooLarge {
                limit,
                needed_bytes: needed,
                budget_bytes: self.memory_budget.min(u32::MAX as u64 * 5),
            });
        }
        let lim = limit as usize;
        let mut costs = vec![0u8; lim];
        costs[0] = 1;
        if limit == 1 {
            return Ok(ComplexityTable { costs });
        }

        let spf = spf_sieve(lim);
        let mut divisors: Vec<u64> = Vec::with_capacity(1536);

        for n in 2..=limit {
            let mut best: u32 = u32::MAX;

            // multiplicative splits: all divisor pairs d * (n/d) with d >= 2
            enumerate_divisors(&spf, n, &mut divisors);
            for &d in &divisors {
                if d >= 2 && d * d <= n {
                    let c = costs[(d - 1) as usize] as u32 + costs[(n / d - 1) as usize] as u32;
                    if c < best {
                        best = c;
                    }
                }
            }

            // additive splits, ascending a, pruned against the current best:
            // cost(a) + cost(n-a) >= 3 log3(a (n-a)), and a(n-a) only grows
            // for a <= n/2, so once the bound clears best the scan can stop.
            let mut stop = prune_product_threshold(best);
            let half = n / 2;
            let mut a = 1u64;
            while a <= half {
                if self.additive_prune && (a * (n - a)) as f64 >= stop {
                    break;
                }
                let c = costs[(a - 1) as usize] as u32 + costs[(n - a - 1) as usize] as u32;
                if c < best {
                    best = c;
                    stop = prune_product_threshold(best);
                }
                a += 1;
            }

            debug_assert!(best <= u8::MAX as u32);
            costs[(n - 1) as usize] = best as u8;
        }
        Ok(ComplexityTable { costs })
    }
}

/// Smallest product `a(n-a)` at which the additive scan may stop for the
/// given best cost: `3 log3 x >= best + eps  <=>  x >= exp((best+eps) ln3/3)`.
#[inline]
fn prune_product_threshold(best: u32) -> f64 {
    if best == u32::MAX {
        f64::INFINITY
    } else {
        ((best as f64 + PRUNE_EPSILON) * LN3 / 3.0).exp()
    }
}

/// Smallest-prime-factor sieve; `spf[i]` is the least prime dividing i.
fn spf_sieve(limit: usize) -> Vec<u32> {
    let mut spf = vec![0u32; limit + 1];
    let mut i = 2usize;
    while i <= limit {
        if spf[i] == 0 {
            let mut j = i;
            while j <= limit {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
        i += 1;
    }
    spf
}

/// All divisors of n (unsorted), via the sieve factorization.
fn enumerate_divisors(spf: &[u32], n: u64, out: &mut Vec<u64>) {
    out.clear();
    out.push(1);
    let mut m = n as usize;
    while m > 1 {
        let p = spf[m] as u64;
        let mut e = 0u32;
        while spf[m] as u64 == p && m > 1 {
            m /= p as usize;
            e += 1;
            if m == 1 {
                break;
            }
        }
        let prev = out.len();
        let mut pe = 1u64;
        for _ in 0..e {
            pe *= p;
            for i in 0..prev {
                out.push(out[i] * pe);
            }
        }
    }
}

/// Memoized full recursion with no pruning: trial division for the
/// multiplicative splits and a complete `a <= n/2` scan for the additive
/// ones. Quadratic per entry; capped at [`BRUTE_LIMIT`].
pub struct BruteOracle {
    costs: Vec<u8>,
}

impl BruteOracle {
    pub fn new() -> Self {
        BruteOracle { costs: vec![1] }
    }

    pub fn complexity(&mut self, n: u64) -> Result<u8> {
        if n == 0 || n > BRUTE_LIMIT {
            return Err(Error::OutOfRange {
                n,
                limit: BRUTE_LIMIT,
            });
        }
        while (self.costs.len() as u64) < n {
            let k = self.costs.len() as u64 + 1;
            let mut best = u32::MAX;
            let mut d = 2u64;
            while d * d <= k {
                if k.is_multiple_of(d) {
                    let c =
                        self.costs[(d - 1) as usize] as u32 + self.costs[(k / d - 1) as usize] as u32;
                    best = best.min(c);
                }
                d += 1;
            }
            for a in 1..=k / 2 {
                let c = self.costs[(a - 1) as usize] as u32 + self.costs[(k - a - 1) as usize] as u32;
                best = best.min(c);
            }
            self.costs.push(best as u8);
        }
        Ok(self.costs[(n - 1) as usize])
    }
}

impl Default for BruteOracle {
    fn default() -> Self {
        Self::new()
    }
}

/// One-shot reference complexity; see [`BruteOracle`].
pub fn brute_oracle(n: u64) -> Result<u8> {
    BruteOracle::new().complexity(n)
}
