use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub const DEFAULT_FACTOR_BITS: u64 = 96;
const TRIAL_LIMIT: u64 = 1 << 20;
const MR_BASES: [u128; 20] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71];

/// Returns `(g, x, y)` with `g = gcd(a, b) ≥ 0` and `a·x + b·y = g`.
pub fn extended_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    if a.is_zero() && b.is_zero() {
        return (BigInt::zero(), BigInt::zero(), BigInt::zero());
    }
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Modular inverse of `a` modulo `m > 1`, when it exists.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let (g, x, _) = extended_gcd(&a.mod_floor(m), m);
    g.is_one().then(|| x.mod_floor(m))
}

// (a·b) mod n for n < 2^96, folding b in 32-bit chunks so nothing overflows u128.
fn mulmod(a: u128, b: u128, n: u128) -> u128 {
    if n <= u64::MAX as u128 {
        return (a % n) * (b % n) % n;
    }
    let a = a % n;
    let mut r: u128 = 0;
    for shift in [64u32, 32, 0] {
        let chunk = (b >> shift) & 0xffff_ffff;
        r = (r << 32) % n;
        r = (r + a * chunk % n) % n;
    }
    r
}

fn powmod(mut a: u128, mut e: u128, n: u128) -> u128 {
    let mut r = 1 % n;
    a %= n;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, n);
        }
        a = mulmod(a, a, n);
        e >>= 1;
    }
    r
}

fn is_probable_prime(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &MR_BASES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn gcd_u128(a: u128, b: u128) -> u128 {
    a.gcd(&b)
}

/// Pollard rho with Brent's cycle detection; `n` composite and odd.
fn brent(n: u128) -> u128 {
    let sub = |a: u128, b: u128| if a >= b { a - b } else { b - a };
    for c in 1u128.. {
        let f = |x: u128| (mulmod(x, x, n) + c) % n;
        let (mut y, mut r, mut q) = (2u128, 1u64, 1u128);
        let (mut g, mut x, mut ys) = (1u128, 0u128, 0u128);
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..(128.min(r - k)) {
                    y = f(y);
                    q = mulmod(q, sub(x, y), n);
                }
                g = gcd_u128(q, n);
                k += 128;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd_u128(sub(x, ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

fn split_into(n: u128, out: &mut Vec<u128>) {
    if n == 1 {
        return;
    }
    if is_probable_prime(n) {
        out.push(n);
        return;
    }
    let d = brent(n);
    split_into(d, out);
    split_into(n / d, out);
}

/// Prime factorization of `n ≥ 1` as `(prime, exponent)` pairs in increasing order.
pub fn factor(n: &BigInt) -> Result<Vec<(BigInt, u32)>> {
    factor_with_bound(n, DEFAULT_FACTOR_BITS)
}

/// As [`factor`], rejecting inputs wider than `max_bits` (at most 96).
pub fn factor_with_bound(n: &BigInt, max_bits: u64) -> Result<Vec<(BigInt, u32)>> {
    if !n.is_positive() {
        return Err(Error::InvalidArgument(format!("cannot factor {n}")));
    }
    let max_bits = max_bits.min(DEFAULT_FACTOR_BITS);
    if n.bits() > max_bits {
        return Err(Error::FactorBound { bits: n.bits(), max_bits });
    }
    let mut m = n.to_u128().expect("bounded by 96 bits");
    let mut primes: Vec<u128> = Vec::new();
    for p in std::iter::once(2u64).chain((3..TRIAL_LIMIT).step_by(2)) {
        let p = p as u128;
        if p * p > m {
            break;
        }
        while m % p == 0 {
            primes.push(p);
            m /= p;
        }
    }
    if m > 1 {
        split_into(m, &mut primes);
    }
    primes.sort_unstable();
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == BigInt::from(p) => *e += 1,
            _ => out.push((BigInt::from(p), 1)),
        }
    }
    Ok(out)
}
