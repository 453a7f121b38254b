//! Shared helpers for the integration suites.
//!
//! Each test binary compiles its own copy, so not every helper is used by
//! every binary.
#![allow(dead_code)]

use std::sync::OnceLock;
use std::time::Instant;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;

use icx_core::table::{build_table, ComplexityTable};

pub struct BigTable {
    pub table: ComplexityTable,
    pub build_seconds: f64,
}

/// The 10^7 table shared by the acceptance criteria; built once per test
/// binary, with its build time recorded.
pub fn big_table() -> &'static BigTable {
    static TABLE: OnceLock<BigTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let start = Instant::now();
        let table = build_table(10_000_000).expect("table build");
        BigTable {
            table,
            build_seconds: start.elapsed().as_secs_f64(),
        }
    })
}

/// Exact sandwich test: `cost >= 3 log3 n` iff `3^cost >= n^3`, and for
/// n >= 2, `cost <= 3 log2 n` iff `2^cost <= n^3`. No floating point.
pub fn sandwich_exact(n: u64, cost: u8) -> bool {
    let c = u32::from(cost);
    let lower = match (checked_pow_u128(3, c), checked_cube(n)) {
        (Some(p), Some(x)) => p >= x,
        _ => BigUint::from(3u32).pow(c) >= BigUint::from(n).pow(3),
    };
    if n == 1 {
        return lower && cost == 1;
    }
    let upper = match (checked_pow_u128(2, c), checked_cube(n)) {
        (Some(p), Some(x)) => p <= x,
        _ => BigUint::from(2u32).pow(c) <= BigUint::from(n).pow(3),
    };
    lower && upper
}

fn checked_cube(n: u64) -> Option<u128> {
    let n = n as u128;
    n.checked_mul(n).and_then(|x| x.checked_mul(n))
}

fn checked_pow_u128(base: u128, exp: u32) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

/// Brute-force interval discrepancy: enumerate candidate endpoints (zero,
/// every point value, one) and count points per interval by a full scan.
/// Independent of the sorted order-statistics formula in the library.
pub fn brute_extreme_discrepancy(points: &[BigRational]) -> BigRational {
    let k = points.len() as i64;
    let mut candidates: Vec<BigRational> = Vec::with_capacity(points.len() + 2);
    candidates.push(BigRational::zero());
    candidates.extend(points.iter().cloned());
    candidates.push(BigRational::new(1.into(), 1.into()));
    candidates.sort();
    candidates.dedup();

    let mut best = BigRational::zero();
    for i in 0..candidates.len() {
        for j in i..candidates.len() {
            let a = &candidates[i];
            let b = &candidates[j];
            let len = b - a;
            let closed = points.iter().filter(|p| *p >= a && *p <= b).count() as i64;
            let over = BigRational::new(closed.into(), k.into()) - len.clone();
            if over > best {
                best = over;
            }
            let open = points.iter().filter(|p| *p > a && *p < b).count() as i64;
            let under = len - BigRational::new(open.into(), k.into());
            if under > best {
                best = under;
            }
        }
    }
    best
}
