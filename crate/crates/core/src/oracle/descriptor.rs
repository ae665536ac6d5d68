use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::matrix::IntMatrix;
use crate::lattice::Lattice;

/// Serializable predicate on nonnegative integers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Predicate {
    Set { values: Vec<u64> },
    Even,
    Odd,
    All,
    Empty,
}

impl Predicate {
    pub fn set(values: impl IntoIterator<Item = u64>) -> Self {
        let mut v: Vec<u64> = values.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Predicate::Set { values: v }
    }

    pub fn accepts(&self, x: &BigInt) -> bool {
        match self {
            Predicate::Set { values } => x.to_u64().is_some_and(|v| values.binary_search(&v).is_ok()),
            Predicate::Even => x.bit(0) == false,
            Predicate::Odd => x.bit(0),
            Predicate::All => true,
            Predicate::Empty => false,
        }
    }

    /// Parses `even`, `odd`, `all`, `none`, or a comma-separated list.
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "even" => Ok(Predicate::Even),
            "odd" => Ok(Predicate::Odd),
            "all" => Ok(Predicate::All),
            "none" | "" => Ok(Predicate::Empty),
            list => list
                .split(',')
                .map(|t| t.trim().parse::<u64>().map_err(|_| Error::Parse(format!("bad accepted value {t:?}"))))
                .collect::<Result<Vec<_>>>()
                .map(Predicate::set),
        }
    }
}

/// Lattice given by generator columns in ℤᵏ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub k: usize,
    pub generators: Vec<Vec<i64>>,
}

impl LatticeSpec {
    pub fn to_lattice(&self) -> Result<Lattice> {
        let cols: Vec<Vec<BigInt>> = self.generators.iter().map(|c| c.iter().map(|&x| BigInt::from(x)).collect()).collect();
        Ok(Lattice::from_generators(&IntMatrix::from_cols(self.k, &cols)?))
    }

    pub fn from_lattice(l: &Lattice) -> Result<Self> {
        let generators = l
            .basis()
            .columns()
            .iter()
            .map(|c| {
                c.iter()
                    .map(|x| x.to_i64().ok_or_else(|| Error::ParameterCeiling("basis entry exceeds 64 bits".into())))
                    .collect()
            })
            .collect::<Result<Vec<Vec<i64>>>>()?;
        Ok(LatticeSpec { k: l.k(), generators })
    }
}

/// Reproducible description of an oracle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OracleDescriptor {
    Brick { lattice: LatticeSpec },
    Rational { accepted: Predicate },
    SparseSimon { accepted: Predicate },
    ShiftPair { lattice: LatticeSpec, shift: Vec<i64> },
}
