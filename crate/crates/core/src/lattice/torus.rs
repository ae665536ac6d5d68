use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::rational::{format_rat, frac, parse_rat, rat_sq_norm, Rat};

/// A point of (ℝ/ℤ)ᵏ with exact coordinates in `[0, 1)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TorusVec {
    coords: Vec<Rat>,
}

impl TorusVec {
    /// Reduces arbitrary rational coordinates mod 1.
    pub fn new(coords: impl IntoIterator<Item = Rat>) -> Self {
        TorusVec { coords: coords.into_iter().map(|c| frac(&c)).collect() }
    }

    pub fn zero(k: usize) -> Self {
        TorusVec { coords: vec![Rat::zero(); k] }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// Canonical lift into `(−1/2, 1/2]ᵏ`.
    pub fn lift(&self) -> Vec<Rat> {
        let half = Rat::new(BigInt::one(), BigInt::from(2));
        self.coords
            .iter()
            .map(|c| if *c > half { c - Rat::one() } else { c.clone() })
            .collect()
    }

    pub fn add(&self, other: &TorusVec) -> TorusVec {
        assert_eq!(self.dim(), other.dim(), "torus dimension mismatch");
        TorusVec::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a + b))
    }

    pub fn sub(&self, other: &TorusVec) -> TorusVec {
        assert_eq!(self.dim(), other.dim(), "torus dimension mismatch");
        TorusVec::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a - b))
    }

    pub fn scale(&self, n: &BigInt) -> TorusVec {
        let n = Rat::from_integer(n.clone());
        TorusVec::new(self.coords.iter().map(|c| c * &n))
    }

    /// Pairing with an integer vector, as an element of `[0, 1)`.
    pub fn pair(&self, x: &[BigInt]) -> Rat {
        assert_eq!(self.dim(), x.len(), "torus dimension mismatch");
        let s = self
            .coords
            .iter()
            .zip(x)
            .fold(Rat::zero(), |acc, (c, xi)| acc + c * Rat::from_integer(xi.clone()));
        frac(&s)
    }

    /// Squared Euclidean norm of the canonical lift.
    pub fn lift_sq_norm(&self) -> Rat {
        rat_sq_norm(&self.lift())
    }

    /// Coordinate-wise distance on the torus, squared and summed.
    pub fn torus_sq_dist(&self, other: &TorusVec) -> Rat {
        self.sub(other).lift_sq_norm()
    }

    pub fn to_text(&self) -> String {
        self.coords.iter().map(format_rat).collect::<Vec<_>>().join(" ")
    }

    pub fn parse_text(s: &str) -> Result<Self> {
        let coords = s.split_whitespace().map(parse_rat).collect::<Result<Vec<_>>>()?;
        if coords.is_empty() && !s.trim().is_empty() {
            return Err(Error::Parse("empty torus vector".into()));
        }
        Ok(TorusVec::new(coords))
    }
}

impl fmt::Debug for TorusVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T({})", self.to_text())
    }
}

impl fmt::Display for TorusVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
