use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar, always in lowest terms with a positive denominator.
pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: impl Into<BigInt>) -> Rat {
    Rat::from_integer(n.into())
}

pub fn parse_int(s: &str) -> Result<BigInt> {
    s.trim()
        .parse::<BigInt>()
        .map_err(|_| Error::Parse(format!("not an integer: {s:?}")))
}

/// Parses `p/q` or a bare integer.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p = parse_int(p)?;
            let q = parse_int(q)?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rat::new(p, q))
        }
        None => Ok(Rat::from_integer(parse_int(s)?)),
    }
}

pub fn format_rat(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Nearest integer, ties rounded up.
pub fn round_half_up(x: &Rat) -> BigInt {
    (x + Rat::new(BigInt::one(), BigInt::from(2))).floor().to_integer()
}

/// Fractional part in [0, 1).
pub fn frac(x: &Rat) -> Rat {
    x - x.floor()
}

pub fn lcm_denominators<'a>(xs: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

pub fn bit_length(n: &BigInt) -> u64 {
    n.abs().bits()
}

/// Nearest f64 to a rational, robust for huge numerators and denominators.
pub fn rat_to_f64(x: &Rat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let nb = x.numer().bits() as i64;
    let db = x.denom().bits() as i64;
    // Shift so the quotient carries about 64 significant bits.
    let shift = 64 - (nb - db);
    let q: BigInt = if shift >= 0 {
        (x.numer() << shift as usize) / x.denom()
    } else {
        x.numer() / (x.denom() << (-shift) as usize)
    };
    let (sign, mag) = q.into_parts();
    let digits = mag.to_u64_digits();
    let mut m = 0f64;
    for d in digits.iter().rev() {
        m = m * 18446744073709551616.0 + *d as f64;
    }
    let v = m * 2f64.powi(-shift as i32);
    if sign == num_bigint::Sign::Minus {
        -v
    } else {
        v
    }
}

pub fn rat_sq_norm(v: &[Rat]) -> Rat {
    v.iter().fold(Rat::zero(), |acc, x| acc + x * x)
}

pub fn rat_dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

pub fn int_dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

pub fn is_power_of_two(n: &BigInt) -> bool {
    n.is_positive() && (n & (n - BigInt::one())).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "7", "-3/4", "12/8"] {
            let x = parse_rat(s).unwrap();
            assert_eq!(parse_rat(&format_rat(&x)).unwrap(), x);
        }
        assert_eq!(format_rat(&parse_rat("12/8").unwrap()), "3/2");
        assert_eq!(format_rat(&parse_rat("4/-6").unwrap()), "-2/3");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn zero_is_canonical() {
        let z = parse_rat("0/5").unwrap();
        assert!(z.denom().is_one());
    }

    #[test]
    fn rounding_and_frac() {
        assert_eq!(round_half_up(&rat(1, 2)), BigInt::from(1));
        assert_eq!(round_half_up(&rat(-1, 2)), BigInt::from(0));
        assert_eq!(round_half_up(&rat(-7, 4)), BigInt::from(-2));
        assert_eq!(frac(&rat(-1, 3)), rat(2, 3));
    }

    #[test]
    fn f64_conversion_handles_huge_operands() {
        let big = BigInt::from(1) << 5000usize;
        let x = Rat::new(&big + 1, big.clone() * 3);
        assert!((rat_to_f64(&x) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(rat_to_f64(&rat(-5, 4)), -1.25);
        let tiny = Rat::new(BigInt::from(3), big);
        assert_eq!(rat_to_f64(&tiny), 0.0);
    }
}
