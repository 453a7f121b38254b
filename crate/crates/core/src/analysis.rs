//! Empirical probes: remainder point sets and their discrepancy, ratio and
//! density scans over exact tables, defect growth counts, and the
//! 2^a 3^b 5^c cost check.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::dd::{self, Dd};
use crate::defect::BOUNDARY_TOLERANCE;
use crate::error::{Error, Result};
use crate::table::ComplexityTable;

/// Cap for the exact pairwise interval-discrepancy formula.
pub const EXTREME_MAX_POINTS: usize = 10_000;

/// Exact rational points `{((n - n mod k)/k mod m^j) / m^j}` for
/// `k = K .. 2K-1`, all in [0, 1).
#[derive(Clone, Debug)]
pub struct PointSet {
    pub points: Vec<BigRational>,
    pub n: BigUint,
    pub base: u64,
    /// Digit position j (the denominator is base^j).
    pub level: u32,
    /// Number of points K.
    pub count: u64,
}

/// Build the point set in exact integer arithmetic.
pub fn s_j_points(n: &BigUint, base: u64, level: u32, count: u64) -> Result<PointSet> {
    if base < 2 {
        return Err(Error::InvalidBase { base });
    }
    if count == 0 {
        return Err(Error::EmptyKRange { lo: 0, hi: 0 });
    }
    let modulus = BigUint::from(base).pow(level);
    let denom = BigInt::from(modulus.clone());
    let mut points = Vec::with_capacity(count as usize);
    for k in count..2 * count {
        let kb = BigUint::from(k);
        let (q, _r) = n.div_rem(&kb);
        let frac = q % &modulus;
        points.push(BigRational::new(BigInt::from(frac), denom.clone()));
    }
    Ok(PointSet {
        points,
        n: n.clone(),
        base,
        level,
        count,
    })
}

/// Star discrepancy: worst deviation of the empirical measure over prefix
/// intervals, exact in rational arithmetic.
pub fn star_discrepancy(points: &[BigRational]) -> Result<BigRational> {
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let mut xs = points.to_vec();
    xs.sort();
    let k = BigInt::from(xs.len());
    let mut best = BigRational::zero();
    for (i, x) in xs.iter().enumerate() {
        let hi = BigRational::new(BigInt::from(i + 1), k.clone()) - x;
        let lo = x - BigRational::new(BigInt::from(i), k.clone());
        if hi > best {
            best = hi;
        }
        if lo > best {
            best = lo;
        }
    }
    Ok(best)
}

/// Interval (extreme) discrepancy: worst deviation over all subintervals of
/// [0, 1], exact via the sorted pairwise formula. Handles repeated points;
/// quadratic in the number of distinct values, capped at
/// [`EXTREME_MAX_POINTS`].
pub fn extreme_discrepancy(points: &[BigRational]) -> Result<BigRational> {
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    if points.len() > EXTREME_MAX_POINTS {
        return Err(Error::TooManyPoints {
            count: points.len(),
            max: EXTREME_MAX_POINTS,
        });
    }
    let mut xs = points.to_vec();
    xs.sort();
    let k = BigInt::from(xs.len());

    // distinct candidate endpoints: 0, the point values, 1
    let zero = BigRational::zero();
    let one = BigRational::new(BigInt::from(1), BigInt::from(1));
    let mut vals: Vec<BigRational> = Vec::with_capacity(xs.len() + 2);
    vals.push(zero);
    for x in &xs {
        if vals.last() != Some(x) {
            vals.push(x.clone());
        }
    }
    if vals.last() != Some(&one) {
        vals.push(one);
    }
    // counts of points < v and <= v for each candidate
    let mut lt = Vec::with_capacity(vals.len());
    let mut le = Vec::with_capacity(vals.len());
    for v in &vals {
        lt.push(xs.partition_point(|x| x < v) as i64);
        le.push(xs.partition_point(|x| x <= v) as i64);
    }

    let mut best = BigRational::zero();
    for i in 0..vals.len() {
        for j in i..vals.len() {
            // overfull closed interval [v_i, v_j]
            let closed = le[j] - lt[i];
            let cand = BigRational::new(BigInt::from(closed), k.clone()) - (&vals[j] - &vals[i]);
            if cand > best {
                best = cand;
            }
            if j > i {
                // underfull open interval (v_i, v_j)
                let open = lt[j] - le[i];
                let cand =
                    (&vals[j] - &vals[i]) - BigRational::new(BigInt::from(open), k.clone());
                if cand > best {
                    best = cand;
                }
            }
        }
    }
    Ok(best)
}

/// Ratio-scan result: the n maximizing `cost(n) / ln n`.
#[derive(Clone, Debug, Serialize)]
pub struct RatioExtreme {
    pub n: u64,
    pub cost: u8,
    pub ratio: f64,
}

/// Exact argmax of `cost(n) / ln n` over `2 <= n <= n_max`, smallest n on
/// ties.
pub fn ratio_scan(table: &ComplexityTable, n_max: u64) -> Result<RatioExtreme> {
    if n_max < 2 {
        return Err(Error::EmptyScan);
    }
    if n_max > table.limit() {
        return Err(Error::OutOfRange {
            n: n_max,
            limit: table.limit(),
        });
    }
    let chunks = chunk_ranges(2, n_max, 1 << 16);
    let best = chunks
        .par_iter()
        .map(|&(lo, hi)| {
            let mut best = RatioExtreme {
                n: 0,
                cost: 0,
                ratio: f64::NEG_INFINITY,
            };
            for n in lo..=hi {
                let cost = table.get(n);
                let ratio = f64::from(cost) / (n as f64).ln();
                if ratio > best.ratio {
                    best = RatioExtreme { n, cost, ratio };
                }
            }
            best
        })
        .reduce(
            || RatioExtreme {
                n: 0,
                cost: 0,
                ratio: f64::NEG_INFINITY,
            },
            |a, b| {
                if b.ratio > a.ratio || (b.ratio == a.ratio && b.n != 0 && (a.n == 0 || b.n < a.n)) {
                    b
                } else {
                    a
                }
            },
        );
    Ok(best)
}

#[derive(Clone, Debug, Serialize)]
pub struct DensityRow {
    pub n_max: u64,
    pub count: u64,
    pub fraction: f64,
}

/// Counts of `n <= N` with `cost(n) <= t log3 n` per grid point, for a
/// rational threshold `t = t_num / t_den`.
#[derive(Clone, Debug, Serialize)]
pub struct DensityScan {
    pub t_num: u64,
    pub t_den: u64,
    pub threshold: f64,
    pub rows: Vec<DensityRow>,
}

/// Run the density count. The comparison `cost(n) <= t log3 n` is decided
/// in floating point when the margin is comfortable and escalated to an
/// exact big-integer power comparison `3^(t_den cost) <= n^t_num` inside the
/// 1e-6 guard band, so boundary cases are never misbinned.
pub fn density_scan(
    table: &ComplexityTable,
    t_num: u64,
    t_den: u64,
    grid: &[u64],
) -> Result<DensityScan> {
    if t_den == 0 || t_num == 0 || grid.is_empty() {
        return Err(Error::EmptyScan);
    }
    let mut grid: Vec<u64> = grid.to_vec();
    grid.sort_unstable();
    grid.dedup();
    let top = *grid.last().unwrap();
    if top > table.limit() {
        return Err(Error::OutOfRange {
            n: top,
            limit: table.limit(),
        });
    }
    if grid[0] < 1 {
        return Err(Error::EmptyScan);
    }

    let chunks = chunk_ranges(2, top, 1 << 16);
    let partials: Vec<Vec<u64>> = chunks
        .par_iter()
        .map(|&(lo, hi)| {
            let mut cells = vec![0u64; grid.len()];
            for n in lo..=hi {
                if qualifies(table.get(n), n, t_num, t_den) {
                    let g = grid.partition_point(|&g| g < n);
                    cells[g] += 1; // g < len since n <= top
                }
            }
            cells
        })
        .collect();

    let mut cells = vec![0u64; grid.len()];
    for p in partials {
        for (dst, src) in cells.iter_mut().zip(p) {
            *dst += src;
        }
    }
    // prefix sums: count at grid[i] includes every smaller grid cell
    let mut running = 0u64;
    let rows = grid
        .iter()
        .zip(cells)
        .map(|(&n_max, c)| {
            running += c;
            DensityRow {
                n_max,
                count: running,
                fraction: running as f64 / n_max as f64,
            }
        })
        .collect();
    Ok(DensityScan {
        t_num,
        t_den,
        threshold: t_num as f64 / t_den as f64,
        rows,
    })
}

/// `cost <= (t_num/t_den) log3 n`, exactly.
fn qualifies(cost: u8, n: u64, t_num: u64, t_den: u64) -> bool {
    // n = 1 never qualifies: cost(1) = 1 > 0
    if n < 2 {
        return false;
    }
    let lhs = t_den as f64 * f64::from(cost) * 1.0986122886681098;
    let rhs = t_num as f64 * (n as f64).ln();
    if (lhs - rhs).abs() > 1e-9 * rhs.max(1.0) {
        return lhs < rhs;
    }
    // 3^(t_den * cost) <= n^t_num, exact
    let three = BigUint::from(3u32);
    let lhs = three.pow((t_den * u64::from(cost)) as u32);
    let rhs = BigUint::from(n).pow(t_num as u32);
    lhs <= rhs
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthRow {
    pub n_max: u64,
    pub count: u64,
}

/// Counts of `n <= N` with defect below r, plus a fitted growth exponent in
/// log N (report-only; the expected order is `(log N)^(floor(r)+1)`).
#[derive(Clone, Debug, Serialize)]
pub struct GrowthScan {
    pub r: f64,
    pub rows: Vec<GrowthRow>,
    pub fitted_exponent: Option<f64>,
}

pub fn defect_growth(table: &ComplexityTable, r: f64, grid: &[u64]) -> Result<GrowthScan> {
    if r <= 0.0 || grid.is_empty() {
        return Err(Error::EmptyScan);
    }
    let mut grid: Vec<u64> = grid.to_vec();
    grid.sort_unstable();
    grid.dedup();
    let top = *grid.last().unwrap();
    if top > table.limit() {
        return Err(Error::OutOfRange {
            n: top,
            limit: table.limit(),
        });
    }

    let chunks = chunk_ranges(1, top, 1 << 16);
    let partials: Result<Vec<Vec<u64>>> = chunks
        .par_iter()
        .map(|&(lo, hi)| {
            let mut cells = vec![0u64; grid.len()];
            for n in lo..=hi {
                if defect_below(table.get(n), n, r)? {
                    let g = grid.partition_point(|&g| g < n);
                    cells[g] += 1;
                }
            }
            Ok(cells)
        })
        .collect();

    let mut cells = vec![0u64; grid.len()];
    for p in partials? {
        for (dst, src) in cells.iter_mut().zip(p) {
            *dst += src;
        }
    }
    let mut running = 0u64;
    let rows: Vec<GrowthRow> = grid
        .iter()
        .zip(cells)
        .map(|(&n_max, c)| {
            running += c;
            GrowthRow {
                n_max,
                count: running,
            }
        })
        .collect();

    // least-squares slope of ln(count) against ln(ln N)
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|row| row.count > 0 && row.n_max >= 3)
        .map(|row| ((row.n_max as f64).ln().ln(), (row.count as f64).ln()))
        .collect();
    let fitted_exponent = fit_slope(&pts);

    Ok(GrowthScan {
        r,
        rows,
        fitted_exponent,
    })
}

fn defect_below(cost: u8, n: u64, r: f64) -> Result<bool> {
    if n == 1 {
        return Ok(1.0 < r);
    }
    if n.is_multiple_of(3) {
        let mut m = n;
        while m.is_multiple_of(3) {
            m /= 3;
        }
        if m == 1 {
            return Ok(true); // defect exactly zero, r > 0
        }
    }
    let defect = Dd::from_u64(u64::from(cost)) - dd::ln_u64(n) * 3.0 / dd::ln3();
    let diff = (defect - Dd::from_f64(r)).to_f64();
    if diff.abs() < BOUNDARY_TOLERANCE {
        return Err(Error::BoundaryAmbiguity {
            n,
            defect: defect.to_f64(),
            boundary: r,
        });
    }
    Ok(diff < 0.0)
}

fn fit_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let var: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if var == 0.0 {
        return None;
    }
    let cov: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(cov / var)
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjectureViolation {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub value: u64,
    pub expected: u32,
    pub actual: u32,
}

/// Scan of `cost(2^a 3^b 5^c) = 2a + 3b + 5c` for every candidate up to
/// n_max with `a + b + c > 0` and `c < 6`.
#[derive(Clone, Debug, Serialize)]
pub struct ConjectureReport {
    pub n_max: u64,
    pub checked: u64,
    pub violations: Vec<ConjectureViolation>,
}

pub fn conjecture_scan(table: &ComplexityTable, n_max: u64) -> Result<ConjectureReport> {
    if n_max < 2 {
        return Err(Error::EmptyScan);
    }
    if n_max > table.limit() {
        return Err(Error::OutOfRange {
            n: n_max,
            limit: table.limit(),
        });
    }
    let mut checked = 0u64;
    let mut violations = Vec::new();
    let mut pc = 1u64;
    for c in 0..6u32 {
        if pc > n_max {
            break;
        }
        let mut pb = pc;
        let mut b = 0u32;
        while pb <= n_max {
            let mut v = pb;
            let mut a = 0u32;
            while v <= n_max {
                if a + b + c > 0 {
                    checked += 1;
                    let expected = 2 * a + 3 * b + 5 * c;
                    let actual = u32::from(table.get(v));
                    if actual != expected {
                        violations.push(ConjectureViolation {
                            a,
                            b,
                            c,
                            value: v,
                            expected,
                            actual,
                        });
                    }
                }
                if v > n_max / 2 {
                    break;
                }
                v *= 2;
                a += 1;
            }
            if pb > n_max / 3 {
                break;
            }
            pb *= 3;
            b += 1;
        }
        if pc > n_max / 5 {
            break;
        }
        pc *= 5;
    }
    Ok(ConjectureReport {
        n_max,
        checked,
        violations,
    })
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::build_table;
    use num_traits::One;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn point_set_example() {
        // k = 3, 4, 5 gives quotients 33, 25, 20; mod 2 over denominator 2
        let ps = s_j_points(&BigUint::from(100u32), 2, 1, 3).unwrap();
        assert_eq!(ps.points, vec![rat(1, 2), rat(1, 2), rat(0, 1)]);
    }

    #[test]
    fn point_set_level_zero_is_all_zeros() {
        let ps = s_j_points(&BigUint::from(987_654u64), 7, 0, 5).unwrap();
        assert!(ps.points.iter().all(|p| p.is_zero()));
        assert_eq!(ps.points.len(), 5);
    }

    #[test]
    fn star_two_points() {
        let d = star_discrepancy(&[rat(1, 4), rat(3, 4)]).unwrap();
        assert_eq!(d, rat(1, 4));
    }

    #[test]
    fn star_midpoints() {
        for k in [1usize, 2, 5, 32] {
            let pts: Vec<BigRational> = (0..k)
                .map(|i| rat(2 * i as i64 + 1, 2 * k as i64))
                .collect();
            assert_eq!(star_discrepancy(&pts).unwrap(), rat(1, 2 * k as i64));
        }
    }

    #[test]
    fn star_handles_duplicates() {
        let d = star_discrepancy(&[rat(1, 2), rat(1, 2)]).unwrap();
        assert_eq!(d, rat(1, 2));
    }

    #[test]
    fn extreme_vs_star_sandwich() {
        let sets = vec![
            vec![rat(1, 4), rat(3, 4)],
            vec![rat(1, 2), rat(1, 2), rat(0, 1)],
            vec![rat(1, 10), rat(2, 10), rat(7, 10), rat(9, 10)],
            vec![rat(1, 3)],
        ];
        for pts in sets {
            let star = star_discrepancy(&pts).unwrap();
            let ext = extreme_discrepancy(&pts).unwrap();
            assert!(ext >= star);
            assert!(ext <= rat(2, 1) * star.clone());
        }
    }

    #[test]
    fn extreme_point_count_cap() {
        let pts: Vec<BigRational> = vec![rat(1, 3); EXTREME_MAX_POINTS + 1];
        assert!(matches!(
            extreme_discrepancy(&pts),
            Err(Error::TooManyPoints { .. })
        ));
        assert!(matches!(star_discrepancy(&[]), Err(Error::EmptyPointSet)));
    }

    #[test]
    fn ratio_scan_small() {
        let t = build_table(10).unwrap();
        let r = ratio_scan(&t, 10).unwrap();
        assert_eq!(r.n, 5);
        assert!((r.ratio - 5.0 / 5f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn ratio_scan_finds_1439() {
        let t = build_table(10_000).unwrap();
        let r = ratio_scan(&t, 10_000).unwrap();
        assert_eq!(r.n, 1439);
        assert_eq!(r.cost, 26);
        assert!((r.ratio - 3.5756).abs() < 1e-3);
        // the binary-expansion bound caps the ratio everywhere
        assert!(r.ratio < 3.0 / 2f64.ln());
    }

    #[test]
    fn density_trivial_thresholds() {
        let t = build_table(10_000).unwrap();
        // t = 2: below the universal lower bound, nothing qualifies
        let d = density_scan(&t, 2, 1, &[100, 10_000]).unwrap();
        assert!(d.rows.iter().all(|r| r.count == 0));
        // t = 3.06 counts at least the powers of three
        let d = density_scan(&t, 153, 50, &[10_000]).unwrap();
        assert!(d.rows[0].count >= 8); // 3^1..3^8 = 6561
        // counts are nondecreasing along the grid
        let d = density_scan(&t, 153, 50, &[100, 1000, 10_000]).unwrap();
        assert!(d.rows[0].count <= d.rows[1].count && d.rows[1].count <= d.rows[2].count);
    }

    #[test]
    fn density_exact_at_powers_of_three() {
        let t = build_table(10_000).unwrap();
        // t = 3 exactly: powers of three sit exactly on the boundary and
        // must be counted (cost = 3 log3 n), via the exact escalation
        let d = density_scan(&t, 3, 1, &[10_000]).unwrap();
        assert_eq!(d.rows[0].count, 8);
    }

    #[test]
    fn growth_counts_powers() {
        let t = build_table(10_000).unwrap();
        let g = defect_growth(&t, 0.1, &[10_000]).unwrap();
        // at least the 8 powers of three; in fact exactly the small-defect set
        assert!(g.rows[0].count >= 8);
        let g2 = defect_growth(&t, 0.48, &[100, 1000, 10_000]).unwrap();
        assert!(g2.rows[0].count <= g2.rows[2].count);
    }

    #[test]
    fn conjecture_holds_to_ten_thousand() {
        let t = build_table(10_000).unwrap();
        let rep = conjecture_scan(&t, 10_000).unwrap();
        assert!(rep.violations.is_empty());
        assert!(rep.checked > 50);
        assert_eq!(t.query(16).unwrap(), 8);
        assert_eq!(t.query(30).unwrap(), 10);
    }

    #[test]
    fn conjecture_counts_exactly() {
        let t = build_table(30).unwrap();
        let rep = conjecture_scan(&t, 30).unwrap();
        // candidates <= 30: 2,4,8,16, 3,6,12,24, 9,18, 27, 5,10,20, 15,30, 25
        assert_eq!(rep.checked, 17);
        assert!(rep.violations.is_empty());
    }

    #[test]
    fn big_point_set_is_exact() {
        let n = BigUint::from(10u64).pow(12);
        let ps = s_j_points(&n, 2, 20, 64).unwrap();
        assert_eq!(ps.points.len(), 64);
        let denom = BigInt::from(BigUint::one() << 20);
        for p in &ps.points {
            assert!(p >= &BigRational::zero());
            assert!(p < &BigRational::new(BigInt::from(1), BigInt::from(1)));
            assert!(denom.clone() % p.denom() == BigInt::zero());
        }
    }
}
