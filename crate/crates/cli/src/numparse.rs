//! Numeric argument parsing: counts accept digit-group underscores and
//! scientific notation ("10_000", "1e6", "2.5e3"); thresholds are read as
//! exact decimal rationals so boundary comparisons stay exact.

use num_bigint::BigUint;

/// Parse a nonnegative integer with optional underscores and exponent.
pub fn parse_count(s: &str) -> Result<u64, String> {
    let big = parse_big(s)?;
    u64::try_from(&big).map_err(|_| format!("{s}: too large for a 64-bit count"))
}

/// Parse an arbitrary-precision nonnegative integer, same surface syntax.
pub fn parse_big(s: &str) -> Result<BigUint, String> {
    let cleaned: String = s.chars().filter(|&c| c != '_').collect();
    if cleaned.is_empty() {
        return Err("empty number".into());
    }
    let (mantissa, exponent) = match cleaned.split_once(['e', 'E']) {
        Some((m, e)) => {
            let exp: i64 = e
                .parse()
                .map_err(|_| format!("{s}: bad exponent '{e}'"))?;
            (m.to_string(), exp)
        }
        None => (cleaned, 0),
    };
    let (digits, frac_len) = match mantissa.split_once('.') {
        Some((int, frac)) => (format!("{int}{frac}"), frac.len() as i64),
        None => (mantissa, 0),
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("{s}: not a nonnegative number"));
    }
    let mut value = digits
        .parse::<BigUint>()
        .map_err(|_| format!("{s}: not a number"))?;
    let shift = exponent - frac_len;
    if shift >= 0 {
        for _ in 0..shift {
            value *= 10u32;
        }
        Ok(value)
    } else {
        let mut denom = BigUint::from(1u32);
        for _ in 0..(-shift) {
            denom *= 10u32;
        }
        let (q, r) = num_integer::Integer::div_rem(&value, &denom);
        if r != BigUint::default() {
            return Err(format!("{s}: not an integer"));
        }
        Ok(q)
    }
}

/// Parse a decimal threshold like "3.06" into the exact fraction (153, 50).
pub fn parse_decimal_rational(s: &str) -> Result<(u64, u64), String> {
    let cleaned: String = s.chars().filter(|&c| c != '_').collect();
    let (int_part, frac_part) = match cleaned.split_once('.') {
        Some((i, f)) => (i.to_string(), f.to_string()),
        None => (cleaned.clone(), String::new()),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err("empty threshold".into());
    }
    let digits = format!(
        "{}{}",
        if int_part.is_empty() { "0" } else { &int_part },
        frac_part
    );
    if !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("{s}: not a decimal number"));
    }
    let mut num: u64 = digits
        .parse()
        .map_err(|_| format!("{s}: threshold out of range"))?;
    let mut den: u64 = 10u64
        .checked_pow(frac_part.len() as u32)
        .ok_or_else(|| format!("{s}: too many decimal places"))?;
    let g = gcd(num.max(1), den);
    num /= g;
    den /= g;
    Ok((num, den))
}

/// Parse a comma-separated list of counts.
pub fn parse_grid(s: &str) -> Result<Vec<u64>, String> {
    s.split(',')
        .map(|part| parse_count(part.trim()))
        .collect()
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(parse_count("1594323").unwrap(), 1_594_323);
        assert_eq!(parse_count("1_594_323").unwrap(), 1_594_323);
        assert_eq!(parse_count("1e6").unwrap(), 1_000_000);
        assert_eq!(parse_count("2.5e3").unwrap(), 2_500);
        assert_eq!(parse_count("10_000").unwrap(), 10_000);
        assert!(parse_count("2.5").is_err());
        assert!(parse_count("").is_err());
        assert!(parse_count("abc").is_err());
        assert!(parse_count("-3").is_err());
    }

    #[test]
    fn big_numbers() {
        let v = parse_big("1e30").unwrap();
        assert_eq!(v.to_string(), format!("1{}", "0".repeat(30)));
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_decimal_rational("3.06").unwrap(), (153, 50));
        assert_eq!(parse_decimal_rational("2").unwrap(), (2, 1));
        assert_eq!(parse_decimal_rational("2.0").unwrap(), (2, 1));
        assert_eq!(parse_decimal_rational("0.48").unwrap(), (12, 25));
        assert!(parse_decimal_rational("x").is_err());
    }

    #[test]
    fn grids() {
        assert_eq!(
            parse_grid("1e4, 1e6").unwrap(),
            vec![10_000, 1_000_000]
        );
        assert!(parse_grid("1e4,,").is_err());
    }
}
