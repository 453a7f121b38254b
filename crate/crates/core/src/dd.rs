//! Double-double arithmetic: unevaluated sums of two `f64`s giving roughly
//! 31 significant decimal digits.
//!
//! Defect values must be binned against class boundaries with a 1e-6 guard,
//! and the closest observed gap is a few 1e-4, so plain `f64` would already
//! do; the extended precision removes the question entirely and makes the
//! "defect of 3^k is exactly zero" tests unambiguous.

use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::OnceLock;

/// A double-double value `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    // requires |a| >= |b|
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    #[inline]
    pub fn new(hi: f64, lo: f64) -> Dd {
        let (s, e) = quick_two_sum(hi, lo);
        Dd { hi: s, lo: e }
    }

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact conversion; splits integers above 2^53 into two doubles.
    pub fn from_u64(x: u64) -> Dd {
        let hi = x as f64;
        let rounded = hi as i128;
        let lo = (x as i128 - rounded) as f64;
        Dd::new(hi, lo)
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Dd {
        Dd::from_f64(x)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, o.hi);
        let (t1, t2) = two_sum(self.lo, o.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (s1, s2) = quick_two_sum(s1, s2 + t2);
        Dd { hi: s1, lo: s2 }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, o.hi);
        let p2 = p2 + self.hi * o.lo + self.lo * o.hi;
        let (s, e) = quick_two_sum(p1, p2);
        Dd { hi: s, lo: e }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self - o * Dd::from_f64(q1);
        let q2 = r.hi / o.hi;
        let r = r - o * Dd::from_f64(q2);
        let q3 = r.hi / o.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd::new(s, e + q3)
    }
}

impl Mul<f64> for Dd {
    type Output = Dd;
    fn mul(self, x: f64) -> Dd {
        self * Dd::from_f64(x)
    }
}

impl Add<f64> for Dd {
    type Output = Dd;
    fn add(self, x: f64) -> Dd {
        self + Dd::from_f64(x)
    }
}

impl Sub<f64> for Dd {
    type Output = Dd;
    fn sub(self, x: f64) -> Dd {
        self - Dd::from_f64(x)
    }
}

/// atanh evaluated by its power series; only valid for small |z| (we use
/// |z| <= 1/3, where ~55 terms reach 1e-33).
fn atanh_small(z: Dd) -> Dd {
    let z2 = z * z;
    let mut term = z;
    let mut sum = z;
    let mut k = 3u32;
    loop {
        term = term * z2;
        let contrib = term / Dd::from_f64(f64::from(k));
        sum = sum + contrib;
        if contrib.hi.abs() < sum.hi.abs() * 1e-33 || k > 400 {
            break;
        }
        k += 2;
    }
    sum
}

/// ln 2 to double-double precision, from ln 2 = 2 atanh(1/3).
pub fn ln2() -> Dd {
    static LN2: OnceLock<Dd> = OnceLock::new();
    *LN2.get_or_init(|| {
        let third = Dd::from_f64(1.0) / Dd::from_f64(3.0);
        atanh_small(third) * 2.0
    })
}

/// ln 3 to double-double precision.
pub fn ln3() -> Dd {
    static LN3: OnceLock<Dd> = OnceLock::new();
    *LN3.get_or_init(|| ln_u64(3))
}

/// Natural log of a positive integer below 2^53.
///
/// Writes n = m * 2^e with m in [1,2) (both exact in f64) and uses
/// ln m = 2 atanh((m-1)/(m+1)), so the argument of the series never
/// exceeds 1/3.
pub fn ln_u64(n: u64) -> Dd {
    assert!((1..(1 << 53)).contains(&n), "ln_u64 needs 1 <= n < 2^53");
    if n == 1 {
        return Dd::ZERO;
    }
    let e = 63 - n.leading_zeros();
    let m = n as f64 / f64::powi(2.0, e as i32); // exact: n < 2^53
    let md = Dd::from_f64(m);
    let z = (md - 1.0) / (md + 1.0);
    let ln_m = atanh_small(z) * 2.0;
    ln2() * f64::from(e) + ln_m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_f64_ln() {
        for n in [2u64, 3, 5, 7, 24, 1439, 1_594_323, 10_000_019] {
            let d = ln_u64(n).to_f64();
            assert!((d - (n as f64).ln()).abs() < 1e-13, "ln {n}");
        }
    }

    #[test]
    fn internal_consistency_beyond_f64() {
        // ln 4 = 2 ln 2, ln 6 = ln 2 + ln 3, ln 3^13 = 13 ln 3,
        // all checked far below f64 resolution.
        let d = ln_u64(4) - ln2() * 2.0;
        assert!(d.to_f64().abs() < 1e-28);
        let d = ln_u64(6) - (ln2() + ln3());
        assert!(d.to_f64().abs() < 1e-28);
        let d = ln_u64(1_594_323) - ln3() * 13.0;
        assert!(d.to_f64().abs() < 1e-27);
    }

    #[test]
    fn known_digits() {
        // ln 2 = 0.693147180559945309417232121458... and the residual past
        // the f64 head is 2.3190468138462996e-17.
        let l2 = ln2();
        assert_eq!(l2.hi, std::f64::consts::LN_2);
        assert!((l2.lo - 2.3190468138462996e-17).abs() < 1e-29, "{l2:?}");
        let l3 = ln3();
        assert!((l3.to_f64() - 1.0986122886681098).abs() < 1e-15);
    }

    #[test]
    fn exact_u64_roundtrip() {
        let big = (1u64 << 60) + 12345;
        let d = Dd::from_u64(big);
        let back = d.hi as i128 + d.lo as i128;
        assert_eq!(back, big as i128);
    }

    #[test]
    fn arithmetic_identities() {
        let a = Dd::from_u64(10) / Dd::from_u64(3);
        let b = a * Dd::from_u64(3);
        assert!((b - Dd::from_u64(10)).to_f64().abs() < 1e-30);
        assert_eq!((Dd::from_f64(-1.5)).abs().to_f64(), 1.5);
    }
}
