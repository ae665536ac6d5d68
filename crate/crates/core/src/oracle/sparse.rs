use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{CallMeter, HidingOracle, OracleToken, Predicate};
use crate::error::{Error, Result};

/// Finitely supported integer vector: (index, coefficient) pairs with strictly
/// increasing indices and nonzero coefficients.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SparseVec {
    terms: Vec<(u64, BigInt)>,
}

impl SparseVec {
    /// Sums duplicate indices and drops zero coefficients.
    pub fn new(terms: impl IntoIterator<Item = (u64, BigInt)>) -> Self {
        let mut t: Vec<(u64, BigInt)> = terms.into_iter().collect();
        t.sort_by_key(|(i, _)| *i);
        let mut out: Vec<(u64, BigInt)> = Vec::with_capacity(t.len());
        for (i, c) in t {
            match out.last_mut() {
                Some((j, d)) if *j == i => *d += c,
                _ => out.push((i, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        SparseVec { terms: out }
    }

    pub fn basis(i: u64) -> Self {
        SparseVec { terms: vec![(i, BigInt::one())] }
    }

    pub fn terms(&self) -> &[(u64, BigInt)] {
        &self.terms
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        SparseVec::new(self.terms.iter().chain(&other.terms).cloned())
    }

    pub fn mod2(&self) -> SparseVec {
        SparseVec::new(self.terms.iter().map(|(i, c)| (*i, c.mod_floor(&BigInt::from(2)))))
    }

    /// Parses `0` or sums like `e2+e5` and `3e2-e7`.
    pub fn parse(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s == "0" || s.is_empty() {
            return Ok(SparseVec::default());
        }
        let bad = || Error::Parse(format!("invalid sparse vector {s:?}"));
        let mut terms = Vec::new();
        let mut rest = s.as_str();
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'+' => (1, &rest[1..]),
                b'-' => (-1, &rest[1..]),
                _ => (1, rest),
            };
            let end = body[1..].find(['+', '-']).map_or(body.len(), |p| p + 1);
            let term = &body[..end];
            rest = &body[end..];
            let (coef, idx) = term.split_once('e').ok_or_else(bad)?;
            let coef = if coef.is_empty() { BigInt::one() } else { coef.parse::<BigInt>().map_err(|_| bad())? };
            let idx = idx.parse::<u64>().map_err(|_| bad())?;
            terms.push((idx, coef * sign));
        }
        Ok(SparseVec::new(terms))
    }
}

impl fmt::Display for SparseVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (i, c)) in self.terms.iter().enumerate() {
            let sign = if c.is_negative() { "-" } else if n > 0 { "+" } else { "" };
            let mag = c.abs();
            if mag.is_one() {
                write!(f, "{sign}e{i}")?;
            } else {
                write!(f, "{sign}{mag}e{i}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SparseVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparseVec({self})")
    }
}

/// Over (ℤ/2)^(∞): deletes every basis term e_y with y accepted, hiding their span.
#[derive(Clone, Debug)]
pub struct SparseSimonOracle {
    accepted: Predicate,
    meter: CallMeter,
}

impl SparseSimonOracle {
    pub fn new(accepted: Predicate) -> Self {
        SparseSimonOracle { accepted, meter: CallMeter::default() }
    }

    pub fn canonical(&self, v: &SparseVec) -> SparseVec {
        SparseVec::new(v.mod2().terms.into_iter().filter(|(i, _)| !self.accepted.accepts(&BigInt::from(*i))))
    }
}

impl HidingOracle for SparseSimonOracle {
    type Elem = SparseVec;

    fn eval(&self, v: &SparseVec) -> Result<OracleToken> {
        self.meter.record(&v.terms.iter().map(|(_, c)| c.abs()).sum());
        Ok(OracleToken::from_text(self.canonical(v).to_string()))
    }

    fn meter(&self) -> &CallMeter {
        &self.meter
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(s: &str) -> SparseVec {
        SparseVec::parse(s).unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(sv("e5+e2").to_string(), "e2+e5");
        assert_eq!(sv("3e2 - e7").to_string(), "3e2-e7");
        assert_eq!(sv("e2-e2").to_string(), "0");
        assert_eq!(sv("-2e0").to_string(), "-2e0");
        assert!(SparseVec::parse("x3").is_err());
        assert!(SparseVec::parse("e").is_err());
    }

    #[test]
    fn examples() {
        let id = SparseSimonOracle::new(Predicate::Empty);
        assert_eq!(id.eval(&sv("e2+e5")).unwrap().to_string(), "e2+e5");
        let three = SparseSimonOracle::new(Predicate::set([3]));
        assert_eq!(three.eval(&sv("e3")).unwrap(), three.eval(&sv("0")).unwrap());
        let even = SparseSimonOracle::new(Predicate::Even);
        let t = even.eval(&sv("e2+e5")).unwrap();
        assert_eq!(t.to_string(), "e5");
        assert_eq!(t, even.eval(&sv("e5")).unwrap());
        assert_eq!(t, even.eval(&sv("e4+e5")).unwrap());
    }
}
