//! Certified per-digit cost bounds.
//!
//! For a base m and remainder r < m, `bound(m, r)` is a proven upper bound on
//! how many extra 1's it costs to turn any expression for n into one for
//! `m*n + r`. The trivial schema multiplies by an optimal expression for m
//! and adds one for r, costing `cost(m) + cost(r)`. Composable schemas split
//! m = b1 * b2 and route the digit through the mixed radix identity
//!
//! ```text
//! m*n + r = b1 * (b2*n + r div b1) + (r mod b1)
//! ```
//!
//! The table keeps, for every remainder, the cheapest certified schema found
//! by dynamic programming over all ordered factorizations, plus the witness
//! itself, so soundness can be checked by actually applying it.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{reconstruct, Expression};
use crate::table::ComplexityTable;

/// An applicable recipe turning an expression for n into one for
/// `base*n + rem`, with a certified number of extra ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// Multiply by an optimal expression of `base`, then add one of `rem`
    /// (no addition node when `rem` is 0).
    Trivial { base: u64, rem: u64 },
    /// Apply `hi` first (the quotient digit), then `lo`:
    /// `base = lo.base * hi.base`, `rem = lo.base * hi.rem + lo.rem`.
    Compose { lo: Box<Witness>, hi: Box<Witness> },
}

impl Witness {
    /// Base realized by this schema.
    pub fn base(&self) -> u64 {
        match self {
            Witness::Trivial { base, .. } => *base,
            Witness::Compose { lo, hi } => lo.base() * hi.base(),
        }
    }

    /// Remainder realized by this schema.
    pub fn rem(&self) -> u64 {
        match self {
            Witness::Trivial { rem, .. } => *rem,
            Witness::Compose { lo, hi } => lo.base() * hi.rem() + lo.rem(),
        }
    }

    /// Extra ones this schema spends, straight off the step costs.
    pub fn added_ones(&self, table: &ComplexityTable) -> Result<u64> {
        let mut total = 0u64;
        for (b, r) in self.steps() {
            total += table.query(b)? as u64;
            if r > 0 {
                total += table.query(r)? as u64;
            }
        }
        Ok(total)
    }

    /// Apply the schema to an expression for n, producing one for
    /// `base*n + rem`.
    pub fn apply(&self, table: &ComplexityTable, expr: Expression) -> Result<Expression> {
        match self {
            Witness::Trivial { base, rem } => {
                let mut e = Expression::prod(expr, reconstruct(table, *base)?);
                if *rem > 0 {
                    e = Expression::sum(e, reconstruct(table, *rem)?);
                }
                Ok(e)
            }
            Witness::Compose { lo, hi } => lo.apply(table, hi.apply(table, expr)?),
        }
    }

    /// Flatten to the ordered list of trivial steps `(base, rem)`,
    /// outermost (last applied) first.
    pub fn steps(&self) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        self.collect_steps(&mut out);
        out
    }

    fn collect_steps(&self, out: &mut Vec<(u64, u64)>) {
        match self {
            Witness::Trivial { base, rem } => out.push((*base, *rem)),
            Witness::Compose { lo, hi } => {
                lo.collect_steps(out);
                hi.collect_steps(out);
            }
        }
    }

    /// Nested text form `b1,r1|b2,r2|...` used in CSV exports.
    pub fn serialize(&self) -> String {
        self.steps()
            .iter()
            .map(|(b, r)| format!("{b},{r}"))
            .collect::<Vec<_>>()
            .join("|")
    }
}

#[derive(Clone, Debug)]
struct DivisorTable {
    bounds: Vec<u16>,
    /// 0 means the trivial schema; otherwise the chosen b1 of the split.
    choice_b1: Vec<u32>,
}

/// Certified digit-cost bounds for one base, for all remainders.
#[derive(Clone, Debug)]
pub struct DigitBoundTable {
    base: u64,
    tables: BTreeMap<u64, DivisorTable>,
}

/// One exported row of a digit-bound table.
#[derive(Clone, Debug, Serialize)]
pub struct DigitBoundRow {
    pub base: u64,
    pub r: u64,
    pub bound: u32,
    pub witness: String,
}

impl DigitBoundTable {
    pub fn base(&self) -> u64 {
        self.base
    }

    fn top(&self) -> &DivisorTable {
        &self.tables[&self.base]
    }

    /// Certified bound for remainder r (r < base).
    pub fn bound(&self, r: u64) -> u32 {
        u32::from(self.top().bounds[r as usize])
    }

    /// All bounds, indexed by remainder.
    pub fn bounds(&self) -> Vec<u32> {
        self.top().bounds.iter().map(|&b| u32::from(b)).collect()
    }

    /// Sum of the bounds over all remainders.
    pub fn sum(&self) -> u64 {
        self.top().bounds.iter().map(|&b| u64::from(b)).sum()
    }

    /// `sum / (base * ln base)`: the per-log cost a random digit stream pays.
    pub fn averaged_constant(&self) -> f64 {
        self.sum() as f64 / (self.base as f64 * (self.base as f64).ln())
    }

    /// Materialize the witness schema for remainder r.
    pub fn witness(&self, r: u64) -> Witness {
        self.build_witness(self.base, r)
    }

    fn build_witness(&self, d: u64, r: u64) -> Witness {
        let entry = &self.tables[&d];
        match entry.choice_b1[r as usize] {
            0 => Witness::Trivial { base: d, rem: r },
            b1 => {
                let b1 = u64::from(b1);
                Witness::Compose {
                    lo: Box::new(self.build_witness(b1, r % b1)),
                    hi: Box::new(self.build_witness(d / b1, r / b1)),
                }
            }
        }
    }

    /// Rows for CSV/JSON export.
    pub fn export_rows(&self) -> Vec<DigitBoundRow> {
        (0..self.base)
            .map(|r| DigitBoundRow {
                base: self.base,
                r,
                bound: self.bound(r),
                witness: self.witness(r).serialize(),
            })
            .collect()
    }

    /// Rough working-set estimate for certifying base m, in bytes.
    pub fn memory_estimate_bytes(m: u64) -> u64 {
        divisors_of(m).iter().map(|&d| d * 6).sum()
    }
}

/// Certify digit-cost bounds for base m against an exact table covering m.
pub fn certify_base(m: u64, table: &ComplexityTable) -> Result<DigitBoundTable> {
    if m < 2 {
        return Err(Error::InvalidBase { base: m });
    }
    if table.limit() < m {
        return Err(Error::TableTooSmall {
            needed: m,
            limit: table.limit(),
        });
    }
    let divisors = divisors_of(m);
    let mut tables: BTreeMap<u64, DivisorTable> = BTreeMap::new();
    for &d in &divisors {
        // proper divisors of d, each already certified (ascending order)
        let inner: Vec<u64> = divisors
            .iter()
            .copied()
            .filter(|&b| b > 1 && b < d && d % b == 0)
            .collect();
        let mut bounds = Vec::with_capacity(d as usize);
        let mut choice_b1 = Vec::with_capacity(d as usize);
        let d_cost = u32::from(table.get(d));
        for r in 0..d {
            let mut best = d_cost + if r > 0 { u32::from(table.get(r)) } else { 0 };
            let mut choice = 0u32;
            for &b1 in &inner {
                let b2 = d / b1;
                let t1 = &tables[&b1];
                let t2 = &tables[&b2];
                let cand =
                    u32::from(t1.bounds[(r % b1) as usize]) + u32::from(t2.bounds[(r / b1) as usize]);
                if cand < best {
                    best = cand;
                    choice = b1 as u32;
                }
            }
            bounds.push(best as u16);
            choice_b1.push(choice);
        }
        tables.insert(d, DivisorTable { bounds, choice_b1 });
    }
    Ok(DigitBoundTable { base: m, tables })
}

/// Convenience accessor for the averaged constant of a base.
pub fn averaged_constant(m: u64, table: &ComplexityTable) -> Result<f64> {
    Ok(certify_base(m, table)?.averaged_constant())
}

/// The best published averaged digit constant, from the base 2^11 * 3^9
/// per-remainder sum 2326006662; kept as a reference value.
pub fn c_avg_reference() -> f64 {
    let b = 2f64.powi(11) * 3f64.powi(9);
    2_326_006_662.0 / (b * b.ln())
}

/// Largest observed `cost(m*n + r) - cost(n)` over `1 <= n <= n_max`;
/// probes the true marginal digit cost from below, so it can never exceed
/// the certified bound.
pub fn empirical_lower(m: u64, r: u64, n_max: u64, table: &ComplexityTable) -> Result<i64> {
    if m < 2 {
        return Err(Error::InvalidBase { base: m });
    }
    if n_max == 0 {
        return Err(Error::EmptyScan);
    }
    let needed = m
        .checked_mul(n_max)
        .and_then(|x| x.checked_add(r))
        .ok_or(Error::EmptyScan)?;
    if table.limit() < needed {
        return Err(Error::TableTooSmall {
            needed,
            limit: table.limit(),
        });
    }
    let mut best = i64::MIN;
    for n in 1..=n_max {
        let diff = i64::from(table.get(m * n + r)) - i64::from(table.get(n));
        best = best.max(diff);
    }
    Ok(best)
}

/// Sorted divisors of m, 1 and m included (trial division).
fn divisors_of(m: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    let mut rest = m;
    let mut p = 2u64;
    let mut factors: Vec<(u64, u32)> = Vec::new();
    while p * p <= rest {
        if rest.is_multiple_of(p) {
            let mut e = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        p += 1;
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    for (p, e) in factors {
        let prev = divs.len();
        let mut pe = 1u64;
        for _ in 0..e {
            pe *= p;
            for i in 0..prev {
                divs.push(divs[i] * pe);
            }
        }
    }
    divs.sort_unstable();
    divs
}
