use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::normal_form::{diagonal, snf};
use crate::exact::rational::Rat;
use crate::lattice::{dual_membership, Lattice, TorusVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FactorPart {
    /// Part of the complement T₁ of the identity component H₁^#.
    Complement,
    /// Part of the 2^t-torsion T₂ of H₁^#.
    Torsion,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicFactor {
    pub order: BigInt,
    pub generator: TorusVec,
    pub part: FactorPart,
}

impl CyclicFactor {
    /// ⌈log₂ d⌉.
    pub fn qubits(&self) -> u64 {
        if self.order <= BigInt::one() {
            0
        } else {
            (&self.order - 1u32).bits()
        }
    }

    /// d·generator, an integer vector.
    pub fn scaled_generator(&self) -> Vec<BigInt> {
        self.generator
            .coords()
            .iter()
            .map(|c| (c * Rat::from_integer(self.order.clone())).to_integer())
            .collect()
    }
}

/// The finite subgroup T₁ ⊕ T₂ of H^# whose Fourier measurement reveals the shift.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetGroup {
    pub k: usize,
    pub factors: Vec<CyclicFactor>,
}

impl TargetGroup {
    pub fn order(&self) -> BigInt {
        self.factors.iter().map(|f| f.order.clone()).product()
    }

    pub fn total_qubits(&self) -> u64 {
        self.factors.iter().map(CyclicFactor::qubits).sum()
    }
}

pub fn build_target_group(l: &Lattice, t: u64) -> TargetGroup {
    let k = l.k();
    let mut factors = Vec::new();
    if l.rank() > 0 {
        // D = V·M·W; row i of V over dᵢ pairs to (W⁻ᵀ)eᵢ against M.
        let (d, v, _) = snf(l.basis());
        for (i, di) in diagonal(&d).into_iter().enumerate() {
            if di.is_one() || di.is_zero() {
                continue;
            }
            let g = TorusVec::new(v.row(i).into_iter().map(|x| Rat::new(x, di.clone())));
            factors.push(CyclicFactor { order: di, generator: g, part: FactorPart::Complement });
        }
    }
    let ortho = l.integer_orthogonal();
    let two_t = BigInt::one() << t as usize;
    for col in ortho.columns() {
        let g = TorusVec::new(col.into_iter().map(|x| Rat::new(x, two_t.clone())));
        factors.push(CyclicFactor { order: two_t.clone(), generator: g, part: FactorPart::Torsion });
    }
    TargetGroup { k, factors }
}

/// Torsion exponent for T₂. With 2^t-torsion alone, two shifts in the box
/// ‖s‖∞ ≤ 2^{t−1} can agree on every character of T₁ ⊕ T₂ without being
/// congruent mod H once 0 < rank < k (and at the box corners when rank = 0).
/// Raising the exponent until 2^{t'}·λ₁ exceeds the box diameter √k·2^t makes
/// the residues determine s mod H, where λ₁ ≥ 1/‖N‖_F bounds the shortest
/// nonzero projection of ℤᵏ orthogonal to H and N is the integer orthogonal basis.
pub fn torsion_exponent(l: &Lattice, t: u64) -> u64 {
    if l.rank() == l.k() {
        return t;
    }
    let frob: BigInt = l.integer_orthogonal().entries().iter().map(|x| x * x).sum();
    let need = frob * BigInt::from(4 * l.k() as u64);
    let mut extra = 0u64;
    while (BigInt::one() << (2 * extra) as usize) <= need {
        extra += 1;
    }
    t + extra
}

/// Exact order of a torus point: the lcm of its coordinate denominators.
pub fn torus_order(y: &TorusVec) -> BigInt {
    y.coords().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
}

/// Checks the advertised orders and H^#-membership of each generator.
pub fn check_target_group(l: &Lattice, a: &TargetGroup) -> Result<()> {
    for f in &a.factors {
        if torus_order(&f.generator) != f.order {
            return Err(Error::InvalidArgument(format!("generator order is not {}", f.order)));
        }
        if !dual_membership(l, &f.generator) {
            return Err(Error::InvalidArgument("generator outside the dual group".into()));
        }
    }
    Ok(())
}

/// Converts a torus point to integer numerators over `den`.
pub fn to_den_units(y: &TorusVec, den: i128) -> Result<Vec<i128>> {
    let d = Rat::from_integer(den.into());
    y.coords()
        .iter()
        .map(|c| {
            let x = c * &d;
            if !x.is_integer() {
                return Err(Error::InvalidArgument("point is not on the phase grid".into()));
            }
            x.to_integer().to_i128().ok_or_else(|| Error::ParameterCeiling("coordinate exceeds i128".into()))
        })
        .collect()
}
