//! Small helpers around arbitrary precision rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn from_u128(n: u128) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn to_f64(x: &Rational) -> f64 {
    // Scale down huge numerators/denominators before converting.
    match (x.numer().to_f64(), x.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() && d != 0.0 => n / d,
        _ => {
            let shift = x.numer().bits().max(x.denom().bits()) as i64 - 900;
            let shift = shift.max(0) as u32;
            let n = (x.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (x.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

pub fn pow(x: &Rational, e: u32) -> Rational {
    num_traits::pow(x.clone(), e as usize)
}

/// Parses `"10"`, `"-2.5"`, `"1e4"`, `"3/7"` or `"2^20"` exactly.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Config(format!("cannot parse number {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = parse(n)?;
        let d = parse(d)?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(n / d);
    }
    if let Some((b, e)) = s.split_once('^') {
        let b = parse(b)?;
        let e: u32 = e.trim().parse().map_err(|_| bad())?;
        return Ok(pow(&b, e));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i32 = s[i + 1..].parse().map_err(|_| bad())?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (ip, fp) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if ip.is_empty() && fp.is_empty() {
        return Err(bad());
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("0{ip}{fp}").parse().map_err(|_| bad())?;
    let scale = exp - fp.len() as i32;
    let ten = BigInt::from(10);
    let mut value = Rational::from_integer(digits);
    if scale >= 0 {
        value *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -value } else { value })
}

/// Nearest rational with `sig` significant decimal digits.
pub fn from_f64_sig(x: f64, sig: u32) -> Rational {
    if x == 0.0 || !x.is_finite() {
        return Rational::zero();
    }
    let text = format!("{:.*e}", sig.saturating_sub(1) as usize, x);
    parse(&text).expect("formatted float parses")
}

/// Exact decimal rendering when the denominator is of the form 2^a 5^b,
/// otherwise a 15 significant digit approximation.
pub fn to_decimal(x: &Rational) -> String {
    if x.is_integer() {
        return x.numer().to_string();
    }
    let mut d = x.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let mut twos = 0u32;
    let mut fives = 0u32;
    while d.is_even() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    let places = twos.max(fives);
    if d.is_one() && places <= 30 {
        let scaled = x * Rational::from_integer(num_traits::pow(BigInt::from(10), places as usize));
        let n = scaled.to_integer();
        let neg = n.is_negative();
        let digits = n.abs().to_string();
        let digits = format!("{:0>width$}", digits, width = places as usize + 1);
        let (ip, fp) = digits.split_at(digits.len() - places as usize);
        let fp = fp.trim_end_matches('0');
        let sign = if neg { "-" } else { "" };
        return if fp.is_empty() {
            format!("{sign}{ip}")
        } else {
            format!("{sign}{ip}.{fp}")
        };
    }
    format_sig(to_f64(x), 15)
}

/// Plain decimal with `sig` significant digits (scientific only for extreme
/// magnitudes).
pub fn format_sig(x: f64, sig: usize) -> String {
    if !x.is_finite() {
        return "NA".to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let mag = x.abs().log10().floor() as i64;
    if !(-6..=20).contains(&mag) {
        return format!("{:.*e}", sig - 1, x);
    }
    let places = (sig as i64 - 1 - mag).max(0) as usize;
    let s = format!("{:.*}", places, x);
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn floor(x: &Rational) -> BigInt {
    x.floor().to_integer()
}

/// Largest `g >= 0` with `base^g <= bound`; `None` when `bound < 1`.
pub fn floor_log(base: u128, bound: &Rational) -> Option<u32> {
    if *bound < Rational::one() {
        return None;
    }
    let base_r = from_u128(base);
    let mut g = 0u32;
    let mut acc = Rational::one();
    loop {
        let next = &acc * &base_r;
        if next > *bound {
            return Some(g);
        }
        acc = next;
        g += 1;
    }
}

pub fn to_i128(x: &BigInt) -> Result<i128> {
    x.to_i128()
        .ok_or_else(|| Error::Overflow(format!("{x} does not fit in 128 bits")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_common_forms() {
        assert_eq!(parse("10").unwrap(), int(10));
        assert_eq!(parse("2.5").unwrap(), rat(5, 2));
        assert_eq!(parse("-0.125").unwrap(), rat(-1, 8));
        assert_eq!(parse("1e4").unwrap(), int(10000));
        assert_eq!(parse("15e-1").unwrap(), rat(3, 2));
        assert_eq!(parse("3/7").unwrap(), rat(3, 7));
        assert_eq!(parse("2^20").unwrap(), int(1 << 20));
        assert!(parse("abc").is_err());
        assert!(parse("1/0").is_err());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal(&int(10)), "10");
        assert_eq!(to_decimal(&rat(5, 2)), "2.5");
        assert_eq!(to_decimal(&rat(-1, 8)), "-0.125");
        assert_eq!(to_decimal(&rat(1, 3)), "0.333333333333333");
        assert_eq!(format_sig(1.05, 15), "1.05");
        assert_eq!(format_sig(20.0, 15), "20");
    }

    #[test]
    fn floor_log_matches_powers() {
        assert_eq!(floor_log(2, &int(10)), Some(3));
        assert_eq!(floor_log(2, &int(8)), Some(3));
        assert_eq!(floor_log(3, &rat(1, 2)), None);
        assert_eq!(floor_log(5, &int(1)), Some(0));
    }
}
