use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::matrix::{IntMatrix, RatMatrix};
use crate::exact::normal_form::{hnf, hnf_basis, hnf_pivot_rows, snf};
use crate::exact::rational::Rat;

/// A sublattice of ℤᵏ held by its canonical column-HNF basis.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Lattice {
    k: usize,
    basis: IntMatrix,
    gram_det: BigInt,
}

impl std::fmt::Debug for Lattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Lattice(k={}, rank={}, basis={:?})", self.k, self.rank(), self.basis)
    }
}

fn gram_det(m: &IntMatrix) -> BigInt {
    if m.cols() == 0 {
        return BigInt::one();
    }
    (&m.transpose() * m).det().expect("square Gram matrix")
}

impl Lattice {
    /// The integer column span of `g`.
    pub fn from_generators(g: &IntMatrix) -> Lattice {
        let basis = hnf_basis(g);
        let gram_det = gram_det(&basis);
        Lattice { k: g.rows(), basis, gram_det }
    }

    /// Convenience constructor from generator columns.
    pub fn from_columns(k: usize, cols: &[Vec<i64>]) -> Lattice {
        let cols: Vec<Vec<BigInt>> = cols.iter().map(|c| c.iter().map(|&x| BigInt::from(x)).collect()).collect();
        Lattice::from_generators(&IntMatrix::from_cols(k, &cols).expect("column length equals k"))
    }

    pub fn full(k: usize) -> Lattice {
        Lattice::from_generators(&IntMatrix::identity(k))
    }

    pub fn trivial(k: usize) -> Lattice {
        Lattice::from_generators(&IntMatrix::zeros(k, 0))
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// Δ = det(MᵀM), defined as 1 for the trivial lattice.
    pub fn gram_det(&self) -> &BigInt {
        &self.gram_det
    }

    pub fn pivot_rows(&self) -> Vec<usize> {
        hnf_pivot_rows(&self.basis)
    }

    /// Total binary digits of the HNF basis entries.
    pub fn bit_complexity(&self) -> u64 {
        self.basis.entries().iter().map(|x| x.bits()).sum()
    }

    /// Smallest `n ≥ 1` with `Δ < 2^{2n}`; this also bounds every ℓ×ℓ minor of
    /// the basis below `2^n`.
    pub fn answer_bound(&self) -> u64 {
        let bits = self.gram_det.bits();
        // Δ < 2^{bits}, so n = ⌈bits / 2⌉ suffices, and it is the least such n.
        ((bits + 1) / 2).max(1)
    }

    /// Remainder of `x` after subtracting basis columns from the last pivot up.
    pub fn coset_canonical(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.k, "dimension mismatch");
        let mut y = x.to_vec();
        let piv = self.pivot_rows();
        for j in (0..self.rank()).rev() {
            let p = piv[j];
            let pv = self.basis.get(p, j);
            let q = num_integer::Integer::div_floor(&y[p], pv);
            if !q.is_zero() {
                for (i, yi) in y.iter_mut().enumerate() {
                    *yi -= &q * self.basis.get(i, j);
                }
            }
        }
        y
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.coset_canonical(x).iter().all(Zero::is_zero)
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.k == self.k && other.basis.columns().iter().all(|c| self.contains(c))
    }

    /// Generators of H^∘ = H^• ∩ H_ℝ, as the columns of M(MᵀM)⁻¹.
    pub fn reciprocal_basis(&self) -> Result<RatMatrix> {
        if self.rank() == 0 {
            return Err(Error::ZeroRank);
        }
        let m = self.basis.to_rat();
        let gram = &m.transpose() * &m;
        Ok(&m * &gram.inverse()?)
    }

    /// H₁ = H_ℝ ∩ ℤᵏ, read off the first ℓ columns of V⁻¹ where D = V·M·W.
    pub fn saturation(&self) -> Lattice {
        let l = self.rank();
        if l == 0 {
            return self.clone();
        }
        let (_, v, _) = snf(&self.basis);
        let vinv = v.to_rat().inverse().expect("unimodular").to_int().expect("integral inverse");
        Lattice::from_generators(&vinv.select_cols(&(0..l).collect::<Vec<_>>()))
    }

    /// Basis of {x ∈ ℤᵏ : Mᵀx = 0}: the trailing columns of W where D = V·Mᵀ·W.
    pub fn integer_orthogonal(&self) -> IntMatrix {
        let l = self.rank();
        if l == 0 {
            return IntMatrix::identity(self.k);
        }
        let (_, _, w) = snf(&self.basis.transpose());
        let kernel = w.select_cols(&(l..self.k).collect::<Vec<_>>());
        if kernel.cols() == 0 {
            return kernel;
        }
        hnf(&kernel).0
    }

    /// [H₁ : H] = √(Δ/Δ₁).
    pub fn component_index(&self) -> BigInt {
        let sat = self.saturation();
        let ratio = &self.gram_det / sat.gram_det();
        let root = ratio.sqrt();
        debug_assert_eq!(&root * &root, ratio);
        root
    }

    /// 1/Δ: no nonzero vector of H^∘ is shorter.
    pub fn feature_length_bound(&self) -> Result<Rat> {
        if self.rank() == 0 {
            return Err(Error::ZeroRank);
        }
        Ok(Rat::new(BigInt::one(), self.gram_det.clone()))
    }

    pub fn dual_description(&self) -> DualDescription {
        DualDescription {
            reciprocal_basis: self.reciprocal_basis().unwrap_or_else(|_| RatMatrix::zeros(self.k, 0)),
            ortho_int_basis: self.integer_orthogonal(),
            saturation: self.saturation(),
            component_index: self.component_index(),
        }
    }

    pub fn scaled(&self, c: &BigInt) -> Lattice {
        Lattice::from_generators(&self.basis.scale(c))
    }

    pub fn to_text(&self) -> String {
        self.basis.to_text()
    }

    pub fn parse_text(s: &str) -> Result<Lattice> {
        Ok(Lattice::from_generators(&IntMatrix::parse_text(s)?))
    }

    /// Largest absolute basis entry.
    pub fn max_entry(&self) -> BigInt {
        self.basis.entries().iter().map(Signed::abs).max().unwrap_or_else(BigInt::zero)
    }
}

/// Dual-group data of a lattice H: H^∘, an integral basis of H_ℝ^⊥, H₁ and |H₁/H|.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualDescription {
    pub reciprocal_basis: RatMatrix,
    pub ortho_int_basis: IntMatrix,
    pub saturation: Lattice,
    pub component_index: BigInt,
}
