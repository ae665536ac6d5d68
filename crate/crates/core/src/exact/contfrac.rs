use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rational::Rat;

/// Partial quotients of the simple continued fraction of `x`.
pub fn partial_quotients(x: &Rat) -> Vec<BigInt> {
    let (mut p, mut q) = (x.numer().clone(), x.denom().clone());
    let mut out = Vec::new();
    while !q.is_zero() {
        let (a, r) = p.div_mod_floor(&q);
        out.push(a);
        p = q;
        q = r;
    }
    out
}

/// All convergents of `x`, ending with `x` itself.
pub fn continued_fraction_convergents(x: &Rat) -> Vec<Rat> {
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    partial_quotients(x)
        .into_iter()
        .map(|a| {
            let h = &a * &h1 + &h0;
            let k = &a * &k1 + &k0;
            h0 = std::mem::replace(&mut h1, h.clone());
            k0 = std::mem::replace(&mut k1, k.clone());
            Rat::new(h, k)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reconstruction {
    pub value: Rat,
    /// True when `|x − value| < 1/(2b²)` for the returned denominator `b ≤ R`.
    pub verified: bool,
}

fn within_legendre(x: &Rat, c: &Rat) -> bool {
    let b = c.denom();
    let err = (x - c).abs();
    err * Rat::from_integer(BigInt::from(2) * b * b) < Rat::one()
}

/// Recovers the rational with denominator at most `r` closest to `x` in the
/// sense of Legendre's criterion. Every `a/b` with `|x − a/b| < 1/(2b²)` is a
/// convergent, so it suffices to scan convergents with denominator `≤ r`; the
/// one with the largest such denominator is preferred.
pub fn legendre_reconstruct(x: &Rat, r: &BigInt) -> Reconstruction {
    assert!(r.is_positive(), "denominator bound must be positive");
    let convs: Vec<Rat> = continued_fraction_convergents(x)
        .into_iter()
        .filter(|c| c.denom() <= r)
        .collect();
    if let Some(c) = convs.iter().rev().find(|c| within_legendre(x, c)) {
        return Reconstruction { value: c.clone(), verified: true };
    }
    let fallback = convs.last().cloned().unwrap_or_else(|| Rat::from_integer(x.floor().to_integer()));
    Reconstruction { value: fallback, verified: false }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    #[test]
    fn convergent_examples() {
        assert_eq!(continued_fraction_convergents(&rat(1, 2)), vec![rat(0, 1), rat(1, 2)]);
        assert_eq!(continued_fraction_convergents(&rat(22, 7)).last(), Some(&rat(22, 7)));
        let c = continued_fraction_convergents(&rat(667, 2000));
        assert!(c.contains(&rat(1, 3)));
        assert!(c.windows(2).skip(1).all(|w| w[0].denom() < w[1].denom()));
    }

    #[test]
    fn negative_input_convergents() {
        let c = continued_fraction_convergents(&rat(-7, 3));
        assert_eq!(c.first(), Some(&rat(-3, 1)));
        assert_eq!(c.last(), Some(&rat(-7, 3)));
    }

    #[test]
    fn legendre_examples() {
        let r = |n: i64| BigInt::from(n);
        assert_eq!(
            legendre_reconstruct(&rat(22, 7), &r(10)),
            Reconstruction { value: rat(22, 7), verified: true }
        );
        assert_eq!(legendre_reconstruct(&rat(667, 2000), &r(3)).value, rat(1, 3));
        assert!(legendre_reconstruct(&rat(667, 2000), &r(3)).verified);
        let x = rat(1, 2) + rat(1, 1000);
        assert_eq!(
            legendre_reconstruct(&x, &r(2)),
            Reconstruction { value: rat(1, 2), verified: true }
        );
    }

    #[test]
    fn legendre_flags_unverified() {
        // With R = 1 only integers qualify, and 1/2 sits exactly 1/2 from both neighbours.
        let rec = legendre_reconstruct(&rat(1, 2), &BigInt::from(1));
        assert!(!rec.verified);
        assert_eq!(rec.value, rat(0, 1));
    }
}
