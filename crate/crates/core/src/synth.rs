//! Constructive expression synthesis for large integers.
//!
//! For huge n, pick a multiplier k, split `n = k*q + r`, and realize q by a
//! most-significant-first digit chain in base m, paying the certified digit
//! bound for every non-leading digit. The total predicted cost is
//!
//! ```text
//! cost(head digit) + sum of bounds over lower digits
//!   + cost(k) (when k > 1) + cost(r) (when r > 0)
//! ```
//!
//! `synthesize` evaluates that prediction for every k in a range and emits
//! the argmin expression; k = 1 is the plain digit expansion of n itself.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::digit_bounds::DigitBoundTable;
use crate::error::{Error, Result};
use crate::expr::{reconstruct, Expression};
use crate::table::ComplexityTable;

/// Residual tolerance of [`lambert_w`], relative to `max(1, x)`.
pub const LAMBERT_TOLERANCE: f64 = 1e-12;

/// The principal Lambert W on `[0, inf)`: the w >= 0 with `w e^w = x`.
///
/// Halley iteration from a log-based initial guess; the result satisfies
/// `|w e^w - x| <= 1e-12 * max(1, x)`.
pub fn lambert_w(x: f64) -> Result<f64> {
    if x < 0.0 {
        return Err(Error::NegativeInput { value: x });
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let mut w = if x > std::f64::consts::E {
        let l = x.ln();
        l - l.ln()
    } else {
        x.ln_1p()
    };
    let tol = LAMBERT_TOLERANCE * x.max(1.0);
    for _ in 0..100 {
        let ew = w.exp();
        let f = w * ew - x;
        if f.abs() <= tol {
            return Ok(w);
        }
        let d = ew * (w + 1.0);
        let step = f / (d - (w + 2.0) * f / (2.0 * w + 2.0));
        w -= step;
    }
    Err(Error::NoConvergence { value: x })
}

/// The asymptotic multiplier-count parameters for a given n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamChoice {
    pub n: BigUint,
    /// `max(1, floor(ln n / ln ln n))`.
    pub p: u64,
    /// `floor((ln n)^(2/3) * W(3 * 2^-18 * ln n)^(1/3))`; zero for every n
    /// of practical size.
    pub k: u64,
}

/// Evaluate the parameter formulas for n >= 3.
pub fn asymptotic_params(n: &BigUint) -> Result<ParamChoice> {
    if *n < BigUint::from(3u32) {
        return Err(Error::InputTooSmall {
            n: n.to_string(),
            min: 3,
        });
    }
    let l = ln_big(n);
    let p = (l / l.ln()).floor().max(1.0) as u64;
    let w = lambert_w(3.0 * 2f64.powi(-18) * l)?;
    let k = (l.powf(2.0 / 3.0) * w.cbrt()).floor() as u64;
    Ok(ParamChoice { n: n.clone(), p, k })
}

/// Natural log of an arbitrary-precision positive integer.
pub fn ln_big(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 53 {
        return n.to_f64().unwrap().ln();
    }
    let shift = bits - 53;
    let head = (n >> shift).to_f64().unwrap();
    head.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Result of one synthesis run.
#[derive(Clone, Debug)]
pub struct SynthesisResult {
    pub n: BigUint,
    pub base: u64,
    /// Chosen multiplier.
    pub k: u64,
    /// `n mod k`.
    pub remainder: u64,
    /// Base-m digits of `(n - remainder) / k`, most significant first.
    pub digits: Vec<u64>,
    pub predicted_cost: u64,
    pub expression: Expression,
}

/// Synthesize an expression for n with base `bounds.base()`, trying every
/// multiplier `k` in `k_range` and returning the cheapest (smallest k on
/// ties). Candidates with `k > n` are skipped.
pub fn synthesize(
    n: &BigUint,
    bounds: &DigitBoundTable,
    k_range: std::ops::Range<u64>,
    table: &ComplexityTable,
) -> Result<SynthesisResult> {
    if *n < BigUint::from(2u32) {
        return Err(Error::InputTooSmall {
            n: n.to_string(),
            min: 2,
        });
    }
    if k_range.start < 1 || k_range.start >= k_range.end {
        return Err(Error::EmptyKRange {
            lo: k_range.start,
            hi: k_range.end,
        });
    }
    let m = bounds.base();
    let needed = m.max(k_range.end - 1);
    if table.limit() < needed {
        return Err(Error::TableTooSmall {
            needed,
            limit: table.limit(),
        });
    }

    let mut best: Option<(u64, u64, u64, Vec<u64>)> = None; // (cost, k, r, digits)
    for k in k_range.clone() {
        let kb = BigUint::from(k);
        if kb > *n {
            break;
        }
        let (q, r) = n.div_rem(&kb);
        let r = r.to_u64().unwrap();
        let digits = digits_msb_first(&q, m);
        let mut cost = u64::from(table.get(digits[0]));
        for &d in &digits[1..] {
            cost += u64::from(bounds.bound(d));
        }
        if k > 1 {
            cost += u64::from(table.get(k));
        }
        if r > 0 {
            cost += u64::from(table.get(r));
        }
        if best.as_ref().is_none_or(|(c, ..)| cost < *c) {
            best = Some((cost, k, r, digits));
        }
    }
    let (predicted_cost, k, remainder, digits) = best.ok_or(Error::EmptyKRange {
        lo: k_range.start,
        hi: k_range.end,
    })?;

    let mut expr = reconstruct(table, digits[0])?;
    for &d in &digits[1..] {
        expr = bounds.witness(d).apply(table, expr)?;
    }
    if k > 1 {
        expr = Expression::prod(expr, reconstruct(table, k)?);
    }
    if remainder > 0 {
        expr = Expression::sum(expr, reconstruct(table, remainder)?);
    }

    Ok(SynthesisResult {
        n: n.clone(),
        base: m,
        k,
        remainder,
        digits,
        predicted_cost,
        expression: expr,
    })
}

/// Base-m digits, most significant first. `n` must be positive.
fn digits_msb_first(n: &BigUint, m: u64) -> Vec<u64> {
    let base = BigUint::from(m);
    let mut rest = n.clone();
    let mut digits = Vec::new();
    let zero = BigUint::default();
    while rest > zero {
        let (q, r) = rest.div_rem(&base);
        digits.push(r.to_u64().unwrap());
        rest = q;
    }
    digits.reverse();
    digits
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digit_bounds::certify_base;
    use crate::table::build_table;
    use num_traits::One;

    #[test]
    fn lambert_w_fixed_points() {
        assert_eq!(lambert_w(0.0).unwrap(), 0.0);
        let w = lambert_w(std::f64::consts::E).unwrap();
        assert!((w - 1.0).abs() < 1e-12);
        // omega constant, cross-checked by the Newton fixed point
        // w <- (w^2 e^w + x) / (e^w (w + 1))
        let mut o = 0.5f64;
        for _ in 0..100 {
            o = (o * o * o.exp() + 1.0) / (o.exp() * (o + 1.0));
        }
        let w1 = lambert_w(1.0).unwrap();
        assert!((w1 - o).abs() < 1e-13);
        assert!((w1 - 0.5671432904097838).abs() < 1e-12);
    }

    #[test]
    fn lambert_w_residuals() {
        for x in [0.0, 1e-9, 1e-4, 0.1, 1.0, 2.0, 10.0, 1e3, 1e9, 1e15] {
            let w = lambert_w(x).unwrap();
            assert!(
                (w * w.exp() - x).abs() <= LAMBERT_TOLERANCE * x.max(1.0),
                "x={x}"
            );
        }
        assert!(lambert_w(-1.0).is_err());
    }

    #[test]
    fn params_at_1e12() {
        let n = BigUint::from(10u64).pow(12);
        let pc = asymptotic_params(&n).unwrap();
        assert_eq!(pc.p, 8);
        assert_eq!(pc.k, 0);
    }

    #[test]
    fn params_small_n() {
        // ln 3 / ln ln 3 = 1.0986/0.0941 = 11.68, so p = 11 and no clamping
        let pc = asymptotic_params(&BigUint::from(3u32)).unwrap();
        assert_eq!(pc.p, 11);
        assert!(pc.p >= 1);
        assert!(asymptotic_params(&BigUint::from(2u32)).is_err());
    }

    #[test]
    fn ln_big_matches_f64_and_scales() {
        let n = BigUint::from(12345u64);
        assert!((ln_big(&n) - 12345f64.ln()).abs() < 1e-12);
        let big = BigUint::from(3u32).pow(200);
        assert!((ln_big(&big) - 200.0 * 3f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn synthesize_power_of_three() {
        let t = build_table(1000).unwrap();
        let db = certify_base(24, &t).unwrap();
        let n = BigUint::from(3u32).pow(40);
        let res = synthesize(&n, &db, 1..2, &t).unwrap();
        assert_eq!(res.k, 1);
        assert_eq!(res.remainder, 0);
        assert_eq!(res.expression.value(), n);
        assert_eq!(res.expression.ones(), res.predicted_cost);
        assert!(res.predicted_cost >= 120); // any expression needs >= 3*40 ones
    }

    #[test]
    fn synthesize_matches_exact_value_and_accounting() {
        let t = build_table(100_000).unwrap();
        let db = certify_base(24, &t).unwrap();
        for n in [2u64, 24, 97, 1439, 65_521, 99_991] {
            let res = synthesize(&BigUint::from(n), &db, 1..64, &t).unwrap();
            assert_eq!(res.expression.value(), BigUint::from(n), "n={n}");
            assert_eq!(res.expression.ones(), res.predicted_cost, "n={n}");
            assert!(res.predicted_cost >= u64::from(t.query(n).unwrap()), "n={n}");
        }
    }

    #[test]
    fn widening_the_range_never_hurts() {
        let t = build_table(1000).unwrap();
        let db = certify_base(24, &t).unwrap();
        let n = BigUint::from(987_654_321_987u64);
        let narrow = synthesize(&n, &db, 1..8, &t).unwrap();
        let wide = synthesize(&n, &db, 1..64, &t).unwrap();
        assert!(wide.predicted_cost <= narrow.predicted_cost);
        assert_eq!(wide.expression.value(), n);
    }

    #[test]
    fn range_and_size_errors() {
        let t = build_table(1000).unwrap();
        let db = certify_base(24, &t).unwrap();
        let n = BigUint::from(100u32);
        assert!(matches!(
            synthesize(&n, &db, 5..5, &t),
            Err(Error::EmptyKRange { .. })
        ));
        assert!(matches!(
            synthesize(&n, &db, 0..4, &t),
            Err(Error::EmptyKRange { .. })
        ));
        assert!(matches!(
            synthesize(&BigUint::one(), &db, 1..2, &t),
            Err(Error::InputTooSmall { .. })
        ));
        assert!(matches!(
            synthesize(&n, &db, 1..5000, &t),
            Err(Error::TableTooSmall { .. })
        ));
    }

    #[test]
    fn candidates_beyond_n_are_skipped() {
        let t = build_table(1000).unwrap();
        let db = certify_base(6, &t).unwrap();
        let res = synthesize(&BigUint::from(10u32), &db, 1..64, &t).unwrap();
        assert!(res.k <= 10);
        assert_eq!(res.expression.value(), BigUint::from(10u32));
    }
}
