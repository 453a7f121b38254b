//! Defects, leaders, and the finite verification suite.
//!
//! The defect of n is `cost(n) - 3 log3 n`; it is nonnegative and vanishes
//! exactly at powers of three (n >= 3). A leader is an n that is either not
//! divisible by 3 or satisfies `cost(n) < cost(n/3) + 3`; every integer is a
//! power of 3 times a leader of the same defect. Numbers are binned into
//! defect classes of width sigma: class k holds defects in
//! `[(k-1) sigma, k sigma)`.
//!
//! Defect values are computed in double-double precision and binning refuses
//! to classify a non-power-of-three whose defect sits within 1e-6 of a class
//! boundary. In the low classes the margin is wide (about 4.3e-4 below 3^13,
//! at n = 19); high-class defects equidistribute and get arbitrarily close,
//! which is why bulk scans that need every class stop at moderate limits.

use rayon::prelude::*;
use serde::Serialize;

use crate::dd::{self, Dd};
use crate::error::{Error, Result};
use crate::table::ComplexityTable;

/// Distance to a class boundary below which binning refuses to decide.
pub const BOUNDARY_TOLERANCE: f64 = 1e-6;
/// The class width the verification suite is built around.
pub const DEFAULT_SIGMA: f64 = 0.48;
/// Default scan limit for the suite: 3^13.
pub const DEFAULT_SCAN_LIMIT: u64 = 1_594_323;
/// Smallest scan limit the suite accepts: 3^11 covers every interval the
/// base-case counts need plus all 17*17 leader products (max 65536).
pub const MIN_SCAN_LIMIT: u64 = 177_147;

/// Leaders with defect below 0.48, in ascending order.
const SMALL_LEADERS_CLASS1: [u64; 5] = [2, 3, 4, 8, 16];
/// Leaders with defect in [0.48, 0.96), in ascending order.
const SMALL_LEADERS_CLASS2: [u64; 12] = [5, 7, 10, 14, 19, 20, 28, 32, 40, 64, 128, 256];
/// Additively irreducible numbers up to 27.
const ADD_IRREDUCIBLE_TO_27: [u64; 14] = [1, 6, 8, 9, 12, 14, 15, 16, 18, 20, 21, 24, 26, 27];
/// Reference list for the "no efficient doubling" subset of the 17 small
/// leaders; the literal predicate disagrees with it, so the comparison is
/// report-only.
const NO_EFFICIENT_DOUBLING_REFERENCE: [u64; 6] = [3, 5, 7, 10, 19, 28];
/// Class-3 counts per power-of-three interval (all integers), m = 4..=10.
const CLASS3_COUNTS: [u64; 7] = [18, 36, 55, 73, 89, 105, 120];

#[derive(Clone, Debug, Serialize)]
pub struct DefectRecord {
    pub n: u64,
    pub cost: u8,
    pub defect: f64,
    pub leader: bool,
    pub class_index: u32,
}

struct ClassInfo {
    defect: f64,
    class_index: u32,
    boundary_distance: f64,
    exact_zero: bool,
}

/// Exponent e with n = 3^e, if any.
fn pow3_exponent(n: u64) -> Option<u32> {
    if n == 0 {
        return None;
    }
    let mut m = n;
    let mut e = 0;
    while m.is_multiple_of(3) {
        m /= 3;
        e += 1;
    }
    (m == 1).then_some(e)
}

fn classify(cost: u8, n: u64, sigma: f64) -> ClassInfo {
    if n >= 3 && pow3_exponent(n).is_some() {
        return ClassInfo {
            defect: 0.0,
            class_index: 1,
            boundary_distance: f64::INFINITY,
            exact_zero: true,
        };
    }
    let defect = Dd::from_u64(u64::from(cost)) - dd::ln_u64(n) * 3.0 / dd::ln3();
    let sigma_dd = Dd::from_f64(sigma);
    let ratio = (defect / sigma_dd).to_f64();
    let class_index = ratio.floor().max(0.0) as u32 + 1;
    let nearest = ratio.round();
    let boundary_distance = (defect - sigma_dd * nearest).abs().to_f64();
    ClassInfo {
        defect: defect.to_f64(),
        class_index,
        boundary_distance,
        exact_zero: false,
    }
}

/// Whether n is a leader: not divisible by 3, or cheaper than its third
/// plus a triple.
pub fn is_leader(table: &ComplexityTable, n: u64) -> Result<bool> {
    let cost = table.query(n)?;
    Ok(!n.is_multiple_of(3) || u32::from(cost) < u32::from(table.get(n / 3)) + 3)
}

/// Defect, leader flag, and class index of n under class width sigma.
pub fn defect_record(table: &ComplexityTable, n: u64, sigma: f64) -> Result<DefectRecord> {
    let cost = table.query(n)?;
    let info = classify(cost, n, sigma);
    if !info.exact_zero && info.boundary_distance < BOUNDARY_TOLERANCE {
        let nearest = (info.defect / sigma).round();
        return Err(Error::BoundaryAmbiguity {
            n,
            defect: info.defect,
            boundary: nearest * sigma,
        });
    }
    Ok(DefectRecord {
        n,
        cost,
        defect: info.defect,
        leader: is_leader(table, n)?,
        class_index: info.class_index,
    })
}

/// No split a + b = n with both parts costing no more than n itself.
pub fn is_add_irreducible(table: &ComplexityTable, n: u64) -> Result<bool> {
    let cost = u32::from(table.query(n)?);
    for a in 1..=n / 2 {
        if u32::from(table.get(a)) + u32::from(table.get(n - a)) <= cost {
            return Ok(false);
        }
    }
    Ok(true)
}

/// No nontrivial factorization d * (n/d) costing no more than n itself.
pub fn is_mult_irreducible(table: &ComplexityTable, n: u64) -> Result<bool> {
    let cost = u32::from(table.query(n)?);
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) && u32::from(table.get(d)) + u32::from(table.get(n / d)) <= cost {
            return Ok(false);
        }
        d += 1;
    }
    Ok(true)
}

/// Exact counts of leaders (`u_b`) and of all integers (`u_n`) per defect
/// class k and power-of-three interval `(3^(m-1), 3^m]`.
#[derive(Clone, Debug)]
pub struct CensusMatrix {
    pub sigma: f64,
    pub k_max: u32,
    pub m_max: u32,
    u_b: Vec<u64>,
    u_n: Vec<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusRow {
    pub k: u32,
    pub m: u32,
    pub u_b: u64,
    pub u_n: u64,
}

impl CensusMatrix {
    fn idx(&self, k: u32, m: u32) -> usize {
        assert!(k >= 1 && k <= self.k_max && m >= 1 && m <= self.m_max);
        ((k - 1) * self.m_max + (m - 1)) as usize
    }

    /// Leaders in class k within `(3^(m-1), 3^m]`.
    pub fn u_b(&self, k: u32, m: u32) -> u64 {
        self.u_b[self.idx(k, m)]
    }

    /// All integers in class k within `(3^(m-1), 3^m]`.
    pub fn u_n(&self, k: u32, m: u32) -> u64 {
        self.u_n[self.idx(k, m)]
    }

    /// Row-by-row export in (k, m) order.
    pub fn rows(&self) -> Vec<CensusRow> {
        let mut out = Vec::with_capacity((self.k_max * self.m_max) as usize);
        for k in 1..=self.k_max {
            for m in 1..=self.m_max {
                out.push(CensusRow {
                    k,
                    m,
                    u_b: self.u_b(k, m),
                    u_n: self.u_n(k, m),
                });
            }
        }
        out
    }
}

/// Count leaders and integers per (class, interval) cell by enumerating all
/// `2 <= n <= 3^m_max`.
pub fn census(table: &ComplexityTable, sigma: f64, k_max: u32, m_max: u32) -> Result<CensusMatrix> {
    if k_max == 0 || m_max == 0 {
        return Err(Error::EmptyScan);
    }
    let top = 3u64.checked_pow(m_max).ok_or(Error::EmptyScan)?;
    if table.limit() < top {
        return Err(Error::TableTooSmall {
            needed: top,
            limit: table.limit(),
        });
    }
    let boundaries: Vec<u64> = (1..=m_max).map(|m| 3u64.pow(m)).collect();
    let cells = (k_max * m_max) as usize;

    let chunks = chunk_ranges(2, top, 1 << 16);
    let partials: Result<Vec<(Vec<u64>, Vec<u64>)>> = chunks
        .par_iter()
        .map(|&(lo, hi)| {
            let mut u_b = vec![0u64; cells];
            let mut u_n = vec![0u64; cells];
            for n in lo..=hi {
                let cost = table.get(n);
                let info = classify(cost, n, sigma);
                if !info.exact_zero && info.boundary_distance < BOUNDARY_TOLERANCE {
                    let nearest = (info.defect / sigma).round();
                    return Err(Error::BoundaryAmbiguity {
                        n,
                        defect: info.defect,
                        boundary: nearest * sigma,
                    });
                }
                let k = info.class_index;
                if k > k_max {
                    continue;
                }
                let m = interval_index(n, &boundaries);
                let idx = ((k - 1) * m_max + (m - 1)) as usize;
                u_n[idx] += 1;
                if n % 3 != 0 || u32::from(cost) < u32::from(table.get(n / 3)) + 3 {
                    u_b[idx] += 1;
                }
            }
            Ok((u_b, u_n))
        })
        .collect();

    let mut u_b = vec![0u64; cells];
    let mut u_n = vec![0u64; cells];
    for (pb, pn) in partials? {
        for i in 0..cells {
            u_b[i] += pb[i];
            u_n[i] += pn[i];
        }
    }
    Ok(CensusMatrix {
        sigma,
        k_max,
        m_max,
        u_b,
        u_n,
    })
}

/// Smallest m with n <= 3^m (boundaries must cover n).
fn interval_index(n: u64, boundaries: &[u64]) -> u32 {
    match boundaries.binary_search(&n) {
        Ok(i) => i as u32 + 1,
        Err(i) => i as u32 + 1,
    }
}

fn chunk_ranges(lo: u64, hi: u64, step: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut start = lo;
    while start <= hi {
        let end = (start + step - 1).min(hi);
        out.push((start, end));
        start = end + 1;
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    Fail,
    ReportOnly,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub check_id: String,
    pub description: String,
    pub expected: String,
    pub actual: String,
    pub status: CheckStatus,
    pub witnesses: Vec<String>,
}

impl CheckResult {
    fn compare<T: PartialEq + std::fmt::Debug>(
        id: &str,
        description: &str,
        expected: T,
        actual: T,
        witnesses: Vec<String>,
    ) -> CheckResult {
        let status = if expected == actual {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        CheckResult {
            check_id: id.to_string(),
            description: description.to_string(),
            expected: format!("{expected:?}"),
            actual: format!("{actual:?}"),
            status,
            witnesses,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub sigma: f64,
    pub scan_limit: u64,
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    /// True when every pass/fail check passed (report-only entries ignored).
    pub fn all_passed(&self) -> bool {
        self.checks
            .iter()
            .all(|c| c.status != CheckStatus::Fail)
    }
}

struct ScanAccumulator {
    class1_leaders: Vec<u64>,
    class2_leaders: Vec<u64>,
    /// leader counts per (class-1, interval-1), classes up to 60
    u_b: Vec<u64>,
    /// all-integer counts per cell
    u_n: Vec<u64>,
    /// worst boundary margin among classes 1..=3, where the pinned counts
    /// live and the defect values are structured
    min_low: (f64, u64),
    /// worst margin over every class; high classes are equidistributed and
    /// this drops to ~1e-8 by 3^13, which is informational only
    min_global: (f64, u64),
}

const ACC_CLASSES: u32 = 60;
const GUARDED_CLASSES: u32 = 3;

/// Re-derive the finite sets, counts, and window facts about small-defect
/// leaders from scratch and compare them with their reference values.
///
/// Runs one scan of all `2 <= n <= scan_limit` plus a handful of small
/// closed-form checks; see the individual check descriptions in the report.
pub fn verify_sets(
    table: &ComplexityTable,
    sigma: f64,
    scan_limit: u64,
) -> Result<VerificationReport> {
    if scan_limit < MIN_SCAN_LIMIT {
        return Err(Error::ScanTooSmall {
            given: scan_limit,
            min: MIN_SCAN_LIMIT,
        });
    }
    if table.limit() < scan_limit {
        return Err(Error::TableTooSmall {
            needed: scan_limit,
            limit: table.limit(),
        });
    }
    let mut boundaries = Vec::new();
    let mut p = 3u64;
    while p <= scan_limit {
        boundaries.push(p);
        p = p.saturating_mul(3);
    }
    let m_full = boundaries.len() as u32; // intervals fully covered by the scan

    let chunks = chunk_ranges(2, scan_limit, 1 << 16);
    let partials: Vec<ScanAccumulator> = chunks
        .par_iter()
        .map(|&(lo, hi)| {
            let mut acc = ScanAccumulator {
                class1_leaders: Vec::new(),
                class2_leaders: Vec::new(),
                u_b: vec![0u64; (ACC_CLASSES * m_full) as usize],
                u_n: vec![0u64; (ACC_CLASSES * m_full) as usize],
                min_low: (f64::INFINITY, 0),
                min_global: (f64::INFINITY, 0),
            };
            let mut bound_idx = match boundaries.binary_search(&lo) {
                Ok(i) => i,
                Err(i) => i,
            };
            for n in lo..=hi {
                let cost = table.get(n);
                let info = classify(cost, n, sigma);
                if !info.exact_zero {
                    if info.boundary_distance < acc.min_global.0 {
                        acc.min_global = (info.boundary_distance, n);
                    }
                    if info.class_index <= GUARDED_CLASSES
                        && info.boundary_distance < acc.min_low.0
                    {
                        acc.min_low = (info.boundary_distance, n);
                    }
                }
                let leader = n % 3 != 0 || u32::from(cost) < u32::from(table.get(n / 3)) + 3;
                if leader {
                    if info.class_index == 1 {
                        acc.class1_leaders.push(n);
                    } else if info.class_index == 2 {
                        acc.class2_leaders.push(n);
                    }
                }
                while bound_idx < boundaries.len() && boundaries[bound_idx] < n {
                    bound_idx += 1;
                }
                // n beyond the last complete power-of-three interval only
                // feeds the class lists, not the per-interval counts
                if bound_idx < boundaries.len() && info.class_index <= ACC_CLASSES {
                    let idx = ((info.class_index - 1) * m_full + bound_idx as u32) as usize;
                    acc.u_n[idx] += 1;
                    if leader {
                        acc.u_b[idx] += 1;
                    }
                }
            }
            acc
        })
        .collect();

    let mut class1: Vec<u64> = Vec::new();
    let mut class2: Vec<u64> = Vec::new();
    let mut u_b = vec![0u64; (ACC_CLASSES * m_full) as usize];
    let mut u_n = vec![0u64; (ACC_CLASSES * m_full) as usize];
    let mut min_low = (f64::INFINITY, 0u64);
    let mut min_global = (f64::INFINITY, 0u64);
    for acc in partials {
        class1.extend(acc.class1_leaders);
        class2.extend(acc.class2_leaders);
        for (dst, src) in u_b.iter_mut().zip(acc.u_b) {
            *dst += src;
        }
        for (dst, src) in u_n.iter_mut().zip(acc.u_n) {
            *dst += src;
        }
        if acc.min_low.0 < min_low.0 {
            min_low = acc.min_low;
        }
        if acc.min_global.0 < min_global.0 {
            min_global = acc.min_global;
        }
    }
    let ub = |k: u32, m: u32| u_b[((k - 1) * m_full + (m - 1)) as usize];
    let un = |k: u32, m: u32| u_n[((k - 1) * m_full + (m - 1)) as usize];

    let mut checks = Vec::new();

    checks.push(CheckResult::compare(
        "a",
        "leaders with defect below 0.48, up to the scan limit",
        SMALL_LEADERS_CLASS1.to_vec(),
        class1.clone(),
        vec![],
    ));
    checks.push(CheckResult::compare(
        "b",
        "leaders with defect in [0.48, 0.96), up to the scan limit",
        SMALL_LEADERS_CLASS2.to_vec(),
        class2.clone(),
        vec![],
    ));

    // (c) class-2 leader count per interval never exceeds 4
    {
        let counts: Vec<u64> = (1..=m_full).map(|m| ub(2, m)).collect();
        let max = counts.iter().copied().max().unwrap_or(0);
        checks.push(CheckResult {
            check_id: "c".into(),
            description: "at most 4 class-2 leaders in any interval (3^(m-1), 3^m]".into(),
            expected: "max <= 4".into(),
            actual: format!("max = {max}, counts = {counts:?}"),
            status: if max <= 4 {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            witnesses: vec![],
        });
    }

    // (d) the residual head set: 1 plus multiplicatively irreducible n below
    // the threshold with no efficient two-part sum
    {
        let threshold_real = (3f64.powf((1.0 - sigma) / 3.0) - 1.0).recip() + 1.0;
        let threshold = threshold_real.floor() as u64;
        let mut t_set = vec![1u64];
        for n in 2..=threshold {
            if !is_mult_irreducible(table, n)? {
                continue;
            }
            let cost = u32::from(table.get(n));
            let mut efficient_sum = false;
            for b in 2..=n / 2 {
                if u32::from(table.get(n - b)) + u32::from(table.get(b)) == cost {
                    efficient_sum = true;
                    break;
                }
            }
            if !efficient_sum {
                t_set.push(n);
            }
        }
        checks.push(CheckResult::compare(
            "d",
            "head set for width 0.48: {1, 2, 3} under threshold 5",
            vec![1u64, 2, 3],
            t_set,
            vec![format!("threshold floor({threshold_real:.4}) = {threshold}")],
        ));
    }

    // (e) additively irreducible numbers up to 27
    {
        let mut z = Vec::new();
        for n in 1..=27u64 {
            if is_add_irreducible(table, n)? {
                z.push(n);
            }
        }
        checks.push(CheckResult::compare(
            "e",
            "additively irreducible numbers up to 27",
            ADD_IRREDUCIBLE_TO_27.to_vec(),
            z,
            vec![],
        ));
    }

    // (f) report-only: small leaders with no efficient doubling, literal
    // predicate versus the reference list
    {
        let mut s17: Vec<u64> = class1.iter().chain(class2.iter()).copied().collect();
        s17.sort_unstable();
        let literal: Vec<u64> = s17
            .iter()
            .copied()
            .filter(|&x| {
                x % 2 == 1
                    || u32::from(table.get(x)) != u32::from(table.get(2)) + u32::from(table.get(x / 2))
            })
            .collect();
        let agree = literal == NO_EFFICIENT_DOUBLING_REFERENCE.to_vec();
        checks.push(CheckResult {
            check_id: "f".into(),
            description:
                "small leaders not efficiently representable as 2*(x/2); literal predicate vs reference list (report only)"
                    .into(),
            expected: format!("{NO_EFFICIENT_DOUBLING_REFERENCE:?}"),
            actual: format!("{literal:?}"),
            status: CheckStatus::ReportOnly,
            witnesses: vec![if agree {
                "literal predicate agrees with the reference list".into()
            } else {
                "literal predicate disagrees with the reference list; see values".into()
            }],
        });
    }

    // (g) powers of two: 1 together with the class-1 leaders minus 3
    {
        let mut v: Vec<u64> = std::iter::once(1u64)
            .chain(class1.iter().copied().filter(|&x| x != 3))
            .collect();
        v.sort_unstable();
        checks.push(CheckResult::compare(
            "g",
            "{1} union (class-1 leaders minus {3}) = {1, 2, 4, 8, 16}",
            vec![1u64, 2, 4, 8, 16],
            v,
            vec![],
        ));
    }

    // (h) densest window (x, 4x] over the 17 small leaders; uses the
    // reference lists, whose correctness checks (a) and (b) establish
    {
        let mut s17: Vec<u64> = SMALL_LEADERS_CLASS1
            .iter()
            .chain(SMALL_LEADERS_CLASS2.iter())
            .copied()
            .collect();
        s17.sort_unstable();
        let mut best = 0usize;
        let mut best_anchor = 0u64;
        for &w in &s17 {
            // count y in s17 with w/4 < y <= w, exactly: 4y > w
            let cnt = s17.iter().filter(|&&y| 4 * y > w && y <= w).count();
            if cnt > best {
                best = cnt;
                best_anchor = w;
            }
        }
        checks.push(CheckResult {
            check_id: "h".into(),
            description: "max small leaders in any window (x, 4x]".into(),
            expected: "7".into(),
            actual: format!("{best}"),
            status: if best == 7 {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            witnesses: vec![format!(
                "window ({}, {best_anchor}]",
                best_anchor as f64 / 4.0
            )],
        });
    }

    // (i) products of two small leaders, binned by class and interval;
    // products stay at or below 256^2 = 65536, inside any accepted scan
    {
        let s17: Vec<u64> = SMALL_LEADERS_CLASS1
            .iter()
            .chain(SMALL_LEADERS_CLASS2.iter())
            .copied()
            .collect();
        let mut products = std::collections::BTreeSet::new();
        for &u in &s17 {
            for &v in &s17 {
                products.insert(u * v);
            }
        }
        let mut per_cell = std::collections::BTreeMap::<(u32, u32), u64>::new();
        for &w in &products {
            let info = classify(table.get(w), w, sigma);
            let m = interval_index(w, &boundaries);
            *per_cell.entry((info.class_index, m)).or_default() += 1;
        }
        let q = |p: u32| -> u64 {
            per_cell
                .iter()
                .filter(|((k, _), _)| *k == p)
                .map(|(_, &c)| c)
                .max()
                .unwrap_or(0)
        };
        let actual: Vec<u64> = (3..=10).map(q).collect();
        // The published table reads 8, 9, 1, 0... with a count of one in
        // class 5, but class 5 is unreachable for these products: defects
        // are subadditive under multiplication and the largest value on the
        // list is def(19), so every product defect is at most
        // 2*def(19) = 1.919137 < 1.92. The boundary case is 361 = 19^2,
        // which lands at the very top of class 4 (and is needed there for
        // the class-4 maximum of 9 to hold).
        checks.push(CheckResult::compare(
            "i",
            "max per-interval count of leader products per class, classes 3..=10",
            vec![8u64, 9, 0, 0, 0, 0, 0, 0],
            actual,
            vec![
                "published table claims a count of 1 in class 5; that needs a product defect of at least 1.92, yet all are at most 2*def(19) = 1.919137".into(),
                "the boundary product is 361 = 19^2 with defect 1.919137, counted in class 4".into(),
            ],
        ));
    }

    // (j) class-3 counts per interval, m = 4..=10. The published values
    // match the all-integer counts exactly (the leader-only counts are
    // smaller and reported alongside).
    {
        let actual: Vec<u64> = (4..=10).map(|m| un(3, m)).collect();
        let leaders_only: Vec<u64> = (4..=10).map(|m| ub(3, m)).collect();
        checks.push(CheckResult::compare(
            "j",
            "class-3 counts in (3^(m-1), 3^m] for m = 4..=10",
            CLASS3_COUNTS.to_vec(),
            actual,
            vec![format!("leader-only counts: {leaders_only:?}")],
        ));
    }

    // (k) cost(4) splits as cost(2) + cost(2)
    checks.push(CheckResult::compare(
        "k",
        "cost(4) = cost(2) + cost(2)",
        u32::from(table.get(2)) * 2,
        u32::from(table.get(4)),
        vec![],
    ));

    // boundary robustness where the pinned counts live: defects in classes
    // 1..=3 keep a wide margin (about 4.3e-4, at n = 19 and its triples).
    // High-class defects equidistribute and get arbitrarily close to
    // boundaries, so the global minimum is reported but not asserted.
    checks.push(CheckResult {
        check_id: "boundary".into(),
        description: format!(
            "no non-power-of-three defect in classes 1..={GUARDED_CLASSES} within 1e-6 of a class boundary"
        ),
        expected: format!("min distance >= {BOUNDARY_TOLERANCE:e}"),
        actual: format!("min distance = {:.6e} at n = {}", min_low.0, min_low.1),
        status: if min_low.0 >= BOUNDARY_TOLERANCE {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
        witnesses: vec![format!(
            "global minimum over all classes: {:.6e} at n = {}",
            min_global.0, min_global.1
        )],
    });

    Ok(VerificationReport {
        sigma,
        scan_limit,
        checks,
    })
}

/// The scalar constants the classification argument runs on.
#[derive(Clone, Debug, Serialize)]
pub struct ClassificationParams {
    pub sigma: f64,
    pub tau: f64,
    pub big_c: f64,
    pub lambda: f64,
    pub small_c: f64,
    pub eta: f64,
    pub gamma: f64,
}

impl Default for ClassificationParams {
    fn default() -> Self {
        let tau = 11.0 / 3.0;
        let big_c = 780.0;
        ClassificationParams {
            sigma: DEFAULT_SIGMA,
            tau,
            big_c,
            lambda: 273.0 * 81.0 / (11.0 * big_c),
            small_c: 13.5 * tau / big_c,
            eta: 1.0 / 6.0,
            gamma: 0.06,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstantSystemReport {
    pub params: ClassificationParams,
    /// defect of 2: `2 - 3 log3 2`
    pub def2: f64,
    /// sigma < 4.5 * def2
    pub sigma_ok: bool,
    /// lambda >= 2.5
    pub lambda_ok: bool,
    /// c < 420^(-1/3)
    pub small_c_ok: bool,
    pub terms: [f64; 6],
    pub six_term_sum: f64,
    pub sum_ok: bool,
    /// `(gamma/sigma) * log3(C sigma / gamma)`
    pub gamma_check: f64,
    pub gamma_ok: bool,
}

impl ConstantSystemReport {
    pub fn all_ok(&self) -> bool {
        self.sigma_ok && self.lambda_ok && self.small_c_ok && self.sum_ok && self.gamma_ok
    }
}

/// Evaluate every scalar inequality of the constant system and report the
/// values; nothing here can fail, the report carries the verdicts.
pub fn verify_constant_system(params: &ClassificationParams) -> ConstantSystemReport {
    let def2 = 2.0 - 3.0 * 2f64.ln() / 3f64.ln();
    let c = params.small_c;
    let cc = params.big_c;
    let lam = params.lambda;
    let e_eta = params.eta.exp();
    let terms = [
        127.0 * e_eta / ((2.0 - 3.0 * c) * cc),
        88.0 * e_eta * lam / cc,
        425.0 / ((2.0 - 3.0 * c) * cc),
        8199.0 * e_eta * c / ((1.0 - c) * cc * cc),
        11124.0 * c * c * e_eta / ((1.0 - 420.0 * c * c * c) * (2.0 - 3.0 * c) * cc),
        5682.0 / (lam * cc * cc),
    ];
    let six_term_sum: f64 = terms.iter().sum();
    let gamma_check =
        (params.gamma / params.sigma) * (cc * params.sigma / params.gamma).ln() / 3f64.ln();
    ConstantSystemReport {
        params: params.clone(),
        def2,
        sigma_ok: params.sigma < 4.5 * def2,
        lambda_ok: lam >= 2.5,
        small_c_ok: c < 420f64.powf(-1.0 / 3.0),
        terms,
        six_term_sum,
        sum_ok: six_term_sum < 1.0,
        gamma_check,
        gamma_ok: gamma_check < 1.0,
    }
}

/// For each k in 3..=9, the least m with
/// `lambda (C m)^(k-2) / k^(k+1) <= 3^m`; above it the trivial 3^m bound
/// stops being the better one.
pub fn discard_thresholds(lambda: f64, big_c: f64) -> Vec<(u32, u32)> {
    (3u32..=9)
        .map(|k| {
            let mut m = 1u32;
            loop {
                let lhs = lambda * (big_c * f64::from(m)).powi(k as i32 - 2)
                    / f64::from(k).powi(k as i32 + 1);
                if lhs <= 3f64.powi(m as i32) {
                    return (k, m);
                }
                m += 1;
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::build_table;

    #[test]
    fn defect_of_two() {
        let t = build_table(10).unwrap();
        let r = defect_record(&t, 2, DEFAULT_SIGMA).unwrap();
        assert!((r.defect - 0.1072).abs() < 1e-4);
        assert!(r.leader);
        assert_eq!(r.class_index, 1);
        // 4.5 * def(2) barely clears the class width
        assert!(4.5 * r.defect > 0.48 && 4.5 * r.defect < 0.483);
    }

    #[test]
    fn defect_of_power_of_three_is_exact_zero() {
        let t = build_table(600_000).unwrap();
        for k in 1..=12u32 {
            let n = 3u64.pow(k);
            if n > t.limit() {
                break;
            }
            let r = defect_record(&t, n, DEFAULT_SIGMA).unwrap();
            assert_eq!(r.defect, 0.0);
            assert_eq!(r.class_index, 1);
        }
    }

    #[test]
    fn defect_of_nineteen_near_boundary_but_decidable() {
        let t = build_table(20).unwrap();
        let r = defect_record(&t, 19, DEFAULT_SIGMA).unwrap();
        assert_eq!(r.cost, 9);
        assert!((r.defect - 0.9596).abs() < 1e-4);
        assert_eq!(r.class_index, 2);
        let dist = (2.0 * DEFAULT_SIGMA - r.defect).abs();
        assert!(dist > 3e-4 && dist < 5e-4, "distance: {dist}");
    }

    #[test]
    fn defect_of_one() {
        let t = build_table(3).unwrap();
        let r = defect_record(&t, 1, DEFAULT_SIGMA).unwrap();
        assert_eq!(r.defect, 1.0);
        assert!(r.leader);
        assert_eq!(r.class_index, 3);
    }

    #[test]
    fn irreducibility_examples() {
        let t = build_table(30).unwrap();
        assert!(is_add_irreducible(&t, 6).unwrap());
        assert!(!is_add_irreducible(&t, 5).unwrap());
        assert!(is_mult_irreducible(&t, 7).unwrap());
        assert!(!is_mult_irreducible(&t, 4).unwrap());
    }

    #[test]
    fn census_small_cells() {
        let t = build_table(59_049).unwrap();
        let c = census(&t, DEFAULT_SIGMA, 6, 10).unwrap();
        assert_eq!(c.u_b(1, 1), 2); // {2, 3}
        assert_eq!(c.u_b(2, 3), 4); // {10, 14, 19, 20}
        // the published class-3 interval counts are all-integer counts
        assert_eq!(c.u_n(3, 4), 18);
        assert_eq!(c.u_n(3, 10), 120);
        assert_eq!(c.u_b(3, 4), 14);
        for k in 1..=6 {
            for m in 1..=10 {
                assert!(c.u_b(k, m) <= c.u_n(k, m));
            }
        }
    }

    #[test]
    fn census_requires_table_coverage() {
        let t = build_table(100).unwrap();
        assert!(matches!(
            census(&t, DEFAULT_SIGMA, 3, 10),
            Err(Error::TableTooSmall { .. })
        ));
    }

    #[test]
    fn constant_system_values() {
        let report = verify_constant_system(&ClassificationParams::default());
        assert!(report.all_ok());
        assert!((report.six_term_sum - 0.798).abs() < 1e-3);
        assert!(report.six_term_sum < 1.0);
        assert!((report.gamma_check - 0.9943).abs() < 1e-3);
        assert!(report.gamma_check < 1.0);
        assert!((report.def2 * 4.5 - 0.482).abs() < 1e-3);
    }

    #[test]
    fn discard_threshold_values() {
        let p = ClassificationParams::default();
        let got = discard_thresholds(p.lambda, p.big_c);
        assert_eq!(
            got,
            vec![(3, 5), (4, 12), (5, 19), (6, 26), (7, 33), (8, 41), (9, 48)]
        );
    }

    #[test]
    fn scan_limit_floor_enforced() {
        let t = build_table(1000).unwrap();
        assert!(matches!(
            verify_sets(&t, DEFAULT_SIGMA, 1000),
            Err(Error::ScanTooSmall { .. })
        ));
    }

    #[test]
    fn suite_passes_at_3_to_the_11() {
        // the full 3^13 run lives in the acceptance suite; 3^11 keeps this
        // unit test quick while exercising every check
        let t = build_table(MIN_SCAN_LIMIT).unwrap();
        let report = verify_sets(&t, DEFAULT_SIGMA, MIN_SCAN_LIMIT).unwrap();
        assert!(report.all_passed(), "{report:#?}");
        let f = report
            .checks
            .iter()
            .find(|c| c.check_id == "f")
            .unwrap();
        assert_eq!(f.status, CheckStatus::ReportOnly);
    }
}
