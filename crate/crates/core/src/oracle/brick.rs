use num_bigint::BigInt;
use num_traits::Signed;

use super::{CallMeter, HidingOracle, OracleToken};
use crate::error::{Error, Result};
use crate::lattice::Lattice;

/// Maps x ∈ ℤᵏ to the canonical representative of x + L in the HNF brick.
#[derive(Clone, Debug)]
pub struct BrickOracle {
    lattice: Lattice,
    meter: CallMeter,
}

impl BrickOracle {
    pub fn new(lattice: Lattice) -> Self {
        BrickOracle { lattice, meter: CallMeter::default() }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }
}

pub fn vector_token(v: &[BigInt]) -> OracleToken {
    OracleToken::from_text(v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
}

impl HidingOracle for BrickOracle {
    type Elem = [BigInt];

    fn eval(&self, x: &[BigInt]) -> Result<OracleToken> {
        if x.len() != self.lattice.k() {
            return Err(Error::Dimension(format!("expected {} coordinates, got {}", self.lattice.k(), x.len())));
        }
        self.meter.record(&x.iter().map(|v| v.abs()).sum());
        Ok(vector_token(&self.lattice.coset_canonical(x)))
    }

    fn meter(&self) -> &CallMeter {
        &self.meter
    }
}
