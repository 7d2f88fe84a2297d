//! Exact rational helpers shared by the geometry and the parameter schedule.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cannot parse {input:?} as a rational number")]
pub struct ParseRationalError {
    pub input: String,
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Parses `"p/q"`, an integer, or a plain decimal such as `-0.125`.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError {
        input: s.to_string(),
    };
    let t = s.trim();
    if t.is_empty() {
        return Err(err());
    }
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| err())?;
        let q: BigInt = q.trim().parse().map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(p, q));
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(err());
    }
    if !whole
        .chars()
        .chain(frac.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(err());
    }
    let digits = format!("{whole}{frac}");
    let num: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| err())?
    };
    let den = num_traits::pow(BigInt::from(10), frac.len());
    let r = Rational::new(num, den);
    Ok(if neg { -r } else { r })
}

/// Always `"p/q"`, even for integers, so the format is uniform.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Shortest-ish decimal rendering used for CSV columns and display.
pub fn to_decimal_string(r: &Rational) -> String {
    let v = r.to_f64().unwrap_or(f64::NAN);
    format!("{v}")
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `⌈r⌉` as a signed big integer.
pub fn ceil(r: &Rational) -> BigInt {
    r.ceil().to_integer()
}

/// `⌊r⌋` as a signed big integer.
pub fn floor(r: &Rational) -> BigInt {
    r.floor().to_integer()
}

/// `⌈eps · n⌉`, the smallest point count that makes a range eps-heavy.
pub fn heavy_threshold(eps: &Rational, n: usize) -> u64 {
    let v = ceil(&(eps * int(n as i64)));
    if v.sign() == Sign::Minus {
        0
    } else {
        v.to_u64().unwrap_or(u64::MAX)
    }
}

pub fn big_to_u64(v: &BigInt) -> u64 {
    if v.is_negative() {
        0
    } else {
        v.to_u64().unwrap_or(u64::MAX)
    }
}

/// Exact `⌊log₂ x⌋` for `x > 0`.
pub fn floor_log2(x: &Rational) -> i64 {
    assert!(x.is_positive(), "floor_log2 of a non-positive value");
    let n = x.numer().magnitude();
    let d = x.denom().magnitude();
    // 2^k <= n/d < 2^(k+1); start from the bit-length estimate and correct.
    let mut k = n.bits() as i64 - d.bits() as i64;
    loop {
        let p = pow2(k);
        if p > *x {
            k -= 1;
            continue;
        }
        if pow2(k + 1) <= *x {
            k += 1;
            continue;
        }
        return k;
    }
}

/// Exact `⌈log₂ x⌉` for `x > 0`.
pub fn ceil_log2(x: &Rational) -> i64 {
    let f = floor_log2(x);
    if pow2(f) == *x {
        f
    } else {
        f + 1
    }
}

/// `2^k` as a rational, for any integer `k`.
pub fn pow2(k: i64) -> Rational {
    let one = BigInt::one();
    if k >= 0 {
        Rational::from_integer(one << (k as usize))
    } else {
        Rational::new(one.clone(), one << ((-k) as usize))
    }
}

/// Resolution of [`log2_dyadic`]: results are multiples of `2^-LOG_BITS`.
pub const LOG_BITS: u32 = 24;

/// Dyadic approximation of `log₂ x` (rounded down to a multiple of `2^-24`).
///
/// Schedules that divide by a logarithm store this value so that every
/// derived identity can be rechecked exactly.
pub fn log2_dyadic(x: &Rational) -> Rational {
    let k = floor_log2(x);
    // x / 2^k lies in [1, 2); refine the fractional bits by repeated squaring.
    let mut m = x / pow2(k);
    let two = int(2);
    let mut frac = BigInt::zero();
    for _ in 0..LOG_BITS {
        m = &m * &m;
        frac <<= 1usize;
        if m >= two {
            m /= &two;
            frac += 1;
        }
        // Keep the mantissa small: truncate to 64 fractional bits.
        let scale = BigInt::one() << 64usize;
        let t = (&m * Rational::from_integer(scale.clone()))
            .floor()
            .to_integer();
        m = Rational::new(t, scale);
    }
    int(k) + Rational::new(frac, BigInt::one() << (LOG_BITS as usize))
}

/// `⌈x⌉` of a positive real given in floating point; used only for integer
/// schedule parameters such as `⌈(1/ε)^η⌉`.
pub fn ceil_f64(x: f64) -> u64 {
    let c = x.ceil();
    // Guard against 3.0000000000000004-style noise on exact powers.
    if (c - 1.0 - x).abs() < 1e-9 && c - 1.0 >= 1.0 {
        return (c - 1.0) as u64;
    }
    c.max(0.0) as u64
}

pub fn midpoint(a: &Rational, b: &Rational) -> Rational {
    (a + b) / int(2)
}

/// `⌈√x⌉` for a positive rational, exactly.
pub fn ceil_sqrt(x: &Rational) -> u64 {
    let mut k: u64 = x.to_f64().unwrap_or(0.0).sqrt().floor().max(0.0) as u64;
    while k > 0 && int((k - 1) as i64) * int((k - 1) as i64) >= *x {
        k -= 1;
    }
    while int(k as i64) * int(k as i64) < *x {
        k += 1;
    }
    k
}

pub fn binomial2(k: u64) -> u64 {
    k * k.saturating_sub(1) / 2
}

pub fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}
