//! Hiding functions whose outputs are canonical coset representatives, so
//! token equality is exactly coset equality.

pub mod brick;
pub mod descriptor;
pub mod rational;
pub mod shift;
pub mod sparse;

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::Result;

pub use brick::BrickOracle;
pub use descriptor::{OracleDescriptor, Predicate};
pub use rational::RationalOracle;
pub use shift::ShiftPairOracle;
pub use sparse::{SparseSimonOracle, SparseVec};

/// Canonical serialization of an oracle output.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OracleToken(pub Vec<u8>);

impl OracleToken {
    pub fn from_text(s: impl Into<String>) -> Self {
        OracleToken(s.into().into_bytes())
    }
}

impl fmt::Display for OracleToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&String::from_utf8_lossy(&self.0))
    }
}

impl fmt::Debug for OracleToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Token({self})")
    }
}

/// Call counter and 1-norm cost meter, safe to share across threads.
#[derive(Debug, Default)]
pub struct CallMeter {
    calls: AtomicU64,
    cost: AtomicU64,
}

impl CallMeter {
    pub fn record(&self, cost: &BigInt) {
        self.calls.fetch_add(1, Ordering::Relaxed);
        let c = u64::try_from(cost).unwrap_or(u64::MAX);
        self.cost.fetch_add(c, Ordering::Relaxed);
    }

    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }

    /// Sum of the 1-norms of all queried inputs (saturating per query).
    pub fn cost(&self) -> u64 {
        self.cost.load(Ordering::Relaxed)
    }
}

impl Clone for CallMeter {
    fn clone(&self) -> Self {
        CallMeter { calls: AtomicU64::new(self.calls()), cost: AtomicU64::new(self.cost()) }
    }
}

pub trait HidingOracle {
    type Elem: ?Sized;

    fn eval(&self, x: &Self::Elem) -> Result<OracleToken>;

    fn meter(&self) -> &CallMeter;

    fn calls(&self) -> u64 {
        self.meter().calls()
    }

    fn cost(&self) -> u64 {
        self.meter().cost()
    }
}

/// Exhaustively compares token equality with coset equality on `points`.
/// Returns the first offending pair.
pub fn check_hiding<O, E>(
    oracle: &O,
    points: &[E],
    same_coset: impl Fn(&E, &E) -> bool,
) -> Result<Option<(usize, usize)>>
where
    O: HidingOracle,
    E: std::borrow::Borrow<O::Elem>,
{
    let tokens = points.iter().map(|p| oracle.eval(p.borrow())).collect::<Result<Vec<_>>>()?;
    for i in 0..points.len() {
        for j in i..points.len() {
            if (tokens[i] == tokens[j]) != same_coset(&points[i], &points[j]) {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

/// All integer vectors in the box `[lo, hi]ᵏ`.
pub fn integer_box(k: usize, lo: i64, hi: i64) -> Vec<Vec<BigInt>> {
    let mut out: Vec<Vec<BigInt>> = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|v| {
                (lo..=hi).map(move |x| {
                    let mut w = v.clone();
                    w.push(BigInt::from(x));
                    w
                })
            })
            .collect();
    }
    out
}
