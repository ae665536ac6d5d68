use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::factor::{factor, mod_inverse};
use super::rational::Rat;
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PfTerm {
    pub p: BigInt,
    pub k: u32,
    pub r: BigInt,
}

impl PfTerm {
    pub fn value(&self) -> Rat {
        Rat::new(self.r.clone(), num_traits::pow(self.p.clone(), self.k as usize))
    }
}

/// `n + Σ r/p^k`. In the per-pair form each `(p, k)` occurs once with
/// `1 ≤ r < p`; in the abbreviated form each prime occurs once with
/// `1 ≤ r < p^k` and `p ∤ r`. Terms are sorted by `(p, k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PartialFractionForm {
    pub integer_part: BigInt,
    pub terms: Vec<PfTerm>,
}

impl PartialFractionForm {
    pub fn to_rat(&self) -> Rat {
        self.terms
            .iter()
            .fold(Rat::from_integer(self.integer_part.clone()), |acc, t| acc + t.value())
    }

    /// Collapses the digits of each prime into a single term.
    pub fn abbreviated(&self) -> PartialFractionForm {
        let mut terms: Vec<PfTerm> = Vec::new();
        for t in &self.terms {
            match terms.last_mut() {
                Some(last) if last.p == t.p => {
                    // r/p^k + c/p^j with j > k: rescale to the deeper exponent.
                    let shift = num_traits::pow(t.p.clone(), (t.k - last.k) as usize);
                    last.r = &last.r * shift + &t.r;
                    last.k = t.k;
                }
                _ => terms.push(t.clone()),
            }
        }
        PartialFractionForm { integer_part: self.integer_part.clone(), terms }
    }
}

impl fmt::Display for PartialFractionForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if !self.integer_part.is_zero() || self.terms.is_empty() {
            parts.push(self.integer_part.to_string());
        }
        for t in &self.terms {
            parts.push(format!("{}/{}", t.r, num_traits::pow(t.p.clone(), t.k as usize)));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Per-pair partial fraction decomposition of `x`.
pub fn partial_fractions(x: &Rat) -> Result<PartialFractionForm> {
    let b = x.denom();
    let a = x.numer();
    let mut terms = Vec::new();
    let mut frac_sum = Rat::zero();
    for (p, e) in factor(b)? {
        let pe = num_traits::pow(p.clone(), e as usize);
        let cofactor = b / &pe;
        let inv = mod_inverse(&cofactor, &pe).expect("coprime prime-power cofactor");
        let r = (a * inv).mod_floor(&pe);
        frac_sum += Rat::new(r.clone(), pe.clone());
        // Base-p digits of r: r/p^e = Σ c_j/p^j with c_1 most significant.
        let mut digits = Vec::with_capacity(e as usize);
        let mut rem = r;
        for _ in 0..e {
            let (q, c) = rem.div_mod_floor(&p);
            digits.push(c);
            rem = q;
        }
        digits.reverse();
        for (j, c) in digits.into_iter().enumerate() {
            if !c.is_zero() {
                terms.push(PfTerm { p: p.clone(), k: j as u32 + 1, r: c });
            }
        }
    }
    let n = x - frac_sum;
    debug_assert!(n.is_integer());
    Ok(PartialFractionForm { integer_part: n.to_integer(), terms })
}

/// Checks the structural invariants of a per-pair form.
pub fn is_per_pair_form(f: &PartialFractionForm) -> bool {
    f.terms.windows(2).all(|w| (&w[0].p, w[0].k) < (&w[1].p, w[1].k))
        && f.terms.iter().all(|t| t.k >= 1 && t.r.is_positive() && t.r < t.p)
}

/// Checks the structural invariants of an abbreviated form.
pub fn is_abbreviated_form(f: &PartialFractionForm) -> bool {
    f.terms.windows(2).all(|w| w[0].p < w[1].p)
        && f.terms.iter().all(|t| {
            let pk = num_traits::pow(t.p.clone(), t.k as usize);
            t.k >= 1 && t.r.is_positive() && t.r < pk && !t.r.is_multiple_of(&t.p)
        })
        && f.terms.iter().all(|t| !t.p.is_one())
}
