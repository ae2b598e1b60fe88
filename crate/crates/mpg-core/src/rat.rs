//! Exact rational arithmetic helpers shared across the workspace.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

/// Exact rational number used for every weight and value in the library.
pub type Rat = BigRational;

/// Builds a rational from an integer pair; panics on zero denominator.
pub fn rat(num: i64, den: i64) -> Rat {
    assert!(den != 0, "zero denominator");
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Parses a rational from `"p/q"`, an integer literal, or a finite decimal
/// such as `"-1.25"`. Returns `None` on malformed input or zero denominator.
pub fn rat_from_str(s: &str) -> Option<Rat> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rat::new(p, q));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = int_part.starts_with('-');
        let int_digits = int_part.strip_prefix(['-', '+']).unwrap_or(int_part);
        if !int_digits.bytes().all(|b| b.is_ascii_digit()) || int_digits.is_empty() {
            return None;
        }
        let combined: BigInt = format!("{int_digits}{frac_part}").parse().ok()?;
        let den = BigInt::from(10u32).pow(frac_part.len() as u32);
        let val = Rat::new(combined, den);
        return Some(if negative { -val } else { val });
    }
    let p: BigInt = s.parse().ok()?;
    Some(Rat::from(p))
}

/// Serializes a rational as `"p"` for integers and `"p/q"` otherwise, in
/// lowest terms. `rat_from_str` inverts this exactly.
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Rounds down to `bits` fractional binary digits: the largest multiple of
/// 2^-bits that does not exceed `r`.
pub fn floor_to_fractional_bits(r: &Rat, bits: u32) -> Rat {
    let scale = BigInt::from(1u8) << bits;
    let scaled = r * Rat::from(scale.clone());
    Rat::new(scaled.floor().to_integer(), scale)
}

/// Converts an f64 to the exact dyadic rational it denotes.
/// Returns `None` for NaN or infinities.
pub fn rat_from_f64(x: f64) -> Option<Rat> {
    Rat::from_float(x)
}

/// Nearest-f64 approximation, for reporting only.
pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back to a quotient of truncated parts for magnitudes beyond
        // f64 range; report code never feeds values that large.
        let n = r.numer().to_f64().unwrap_or(f64::MAX);
        let d = r.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}

/// Number of bits needed for the integer part together with its sign,
/// used by the weight-oracle bit accounting.
pub fn integer_part_bits(r: &Rat) -> u64 {
    let int_part = r.abs().floor().to_integer();
    1 + int_part.bits()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_fractions_decimals() {
        assert_eq!(rat_from_str("3").unwrap(), rat(3, 1));
        assert_eq!(rat_from_str("-7").unwrap(), rat(-7, 1));
        assert_eq!(rat_from_str("1/3").unwrap(), rat(1, 3));
        assert_eq!(rat_from_str("-10/4").unwrap(), rat(-5, 2));
        assert_eq!(rat_from_str("1.25").unwrap(), rat(5, 4));
        assert_eq!(rat_from_str("-0.5").unwrap(), rat(-1, 2));
        assert_eq!(rat_from_str(" 2/6 ").unwrap(), rat(1, 3));
    }

    #[test]
    fn rejects_malformed() {
        assert!(rat_from_str("").is_none());
        assert!(rat_from_str("1/0").is_none());
        assert!(rat_from_str("a").is_none());
        assert!(rat_from_str("1.").is_none());
        assert!(rat_from_str("1.2.3").is_none());
        assert!(rat_from_str("1e3").is_none());
    }

    #[test]
    fn round_trips_strings() {
        for s in ["0", "-3", "1/3", "-22/7", "1000000007/2"] {
            let r = rat_from_str(s).unwrap();
            assert_eq!(rat_to_string(&r), s);
        }
        // Decimal input normalizes to the p/q form.
        assert_eq!(rat_to_string(&rat_from_str("0.5").unwrap()), "1/2");
    }

    #[test]
    fn floor_to_bits_matches_definition() {
        let r = rat(5, 3);
        let got = floor_to_fractional_bits(&r, 4);
        assert_eq!(got, rat(26, 16)); // floor(5/3 * 16) = 26
        assert!(&r - &got < rat(1, 16));
        assert!(got <= r);

        let neg = rat(-5, 3);
        let got = floor_to_fractional_bits(&neg, 4);
        assert_eq!(got, rat(-27, 16)); // floor(-80/3) = -27
        assert!(got <= neg);
    }

    #[test]
    fn f64_conversion_is_exact_for_dyadics() {
        let r = rat_from_f64(0.375).unwrap();
        assert_eq!(r, rat(3, 8));
        assert!(rat_from_f64(f64::NAN).is_none());
    }

    #[test]
    fn integer_bits() {
        assert_eq!(integer_part_bits(&rat(0, 1)), 1);
        assert_eq!(integer_part_bits(&rat(1, 1)), 2);
        assert_eq!(integer_part_bits(&rat(-9, 2)), 4); // |floor part| = 4 -> 3 bits + sign
    }
}
