//! Hermite and Smith normal forms over ℤ, their rational variant, and reduced
//! column echelon form over ℚ.
//!
//! Column HNF convention: every pivot column is zero below its pivot, columns
//! are ordered by increasing pivot row, pivots are positive, and the entries of
//! a pivot row to the right of the pivot lie in `[0, pivot)`. Zero columns
//! trail. For a full-rank square input the result is upper triangular.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{IntMatrix, Matrix, RatMatrix};
use super::rational::Rat;

/// Column-oriented working copy with a transform tracked alongside.
struct ColWork {
    rows: usize,
    a: Vec<Vec<BigInt>>, // columns
    u: Vec<Vec<BigInt>>, // columns of the transform
}

impl ColWork {
    fn sub_mul(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        let (s, d) = pair_mut(&mut self.a, src, dst);
        for (x, y) in d.iter_mut().zip(s.iter()) {
            *x -= q * y;
        }
        let (s, d) = pair_mut(&mut self.u, src, dst);
        for (x, y) in d.iter_mut().zip(s.iter()) {
            *x -= q * y;
        }
    }

    fn negate(&mut self, c: usize) {
        for x in self.a[c].iter_mut().chain(self.u[c].iter_mut()) {
            *x = -&*x;
        }
    }
}

fn pair_mut<T>(v: &mut [T], src: usize, dst: usize) -> (&T, &mut T) {
    assert_ne!(src, dst);
    if src < dst {
        let (lo, hi) = v.split_at_mut(dst);
        (&lo[src], &mut hi[0])
    } else {
        let (lo, hi) = v.split_at_mut(src);
        (&hi[0], &mut lo[dst])
    }
}

fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    // Nearest-integer quotient keeps Euclid steps short.
    let two = BigInt::from(2);
    (a * &two + b).div_floor(&(b * &two))
}

/// Column Hermite normal form: returns `(H, U)` with `M·U = H` and `U` unimodular.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = ColWork {
        rows,
        a: m.columns(),
        u: IntMatrix::identity(cols).columns(),
    };
    let mut active: Vec<usize> = (0..cols).collect();
    // (pivot row, column) in order of creation, bottom row first.
    let mut pivots: Vec<(usize, usize)> = Vec::new();

    for i in (0..w.rows).rev() {
        loop {
            let nz: Vec<usize> = active.iter().copied().filter(|&c| !w.a[c][i].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            let p = *nz.iter().min_by_key(|&&c| w.a[c][i].abs()).unwrap();
            for &c in &nz {
                if c != p {
                    let q = round_div(&w.a[c][i], &w.a[p][i]);
                    w.sub_mul(c, p, &q);
                }
            }
        }
        let Some(p) = active.iter().copied().find(|&c| !w.a[c][i].is_zero()) else { continue };
        if w.a[p][i].is_negative() {
            w.negate(p);
        }
        active.retain(|&c| c != p);
        // Reduce the row-i entries of columns whose pivots lie further down.
        for &(_, c) in &pivots {
            let q = w.a[c][i].div_floor(&w.a[p][i]);
            w.sub_mul(c, p, &q);
        }
        pivots.push((i, p));
    }

    pivots.sort();
    let order: Vec<usize> = pivots.iter().map(|&(_, c)| c).chain(active.iter().copied()).collect();
    let h = Matrix::from_cols(rows, &order.iter().map(|&c| w.a[c].clone()).collect::<Vec<_>>())
        .expect("consistent column lengths");
    let u = Matrix::from_cols(cols, &order.iter().map(|&c| w.u[c].clone()).collect::<Vec<_>>())
        .expect("consistent column lengths");
    (h, u)
}

/// Pivot rows of a matrix in column HNF, one per nonzero column.
pub fn hnf_pivot_rows(h: &IntMatrix) -> Vec<usize> {
    (0..h.cols())
        .map_while(|j| (0..h.rows()).rev().find(|&i| !h.get(i, j).is_zero()))
        .collect()
}

/// HNF with zero columns dropped: a canonical basis of the column lattice.
pub fn hnf_basis(m: &IntMatrix) -> IntMatrix {
    let (h, _) = hnf(m);
    let r = hnf_pivot_rows(&h).len();
    h.select_cols(&(0..r).collect::<Vec<_>>())
}

/// Smith normal form: returns `(D, V, W)` with `D = V·M·W`.
pub fn snf(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let (r, c) = (m.rows(), m.cols());
    let mut a = m.to_rows();
    let mut v = IntMatrix::identity(r).to_rows();
    let mut w = IntMatrix::identity(c).to_rows();

    let row_sub = |a: &mut Vec<Vec<BigInt>>, dst: usize, src: usize, q: &BigInt| {
        if q.is_zero() {
            return;
        }
        let (s, d) = pair_mut(a, src, dst);
        for (x, y) in d.iter_mut().zip(s.iter()) {
            *x -= q * y;
        }
    };
    let col_sub = |a: &mut Vec<Vec<BigInt>>, dst: usize, src: usize, q: &BigInt| {
        if q.is_zero() {
            return;
        }
        for row in a.iter_mut() {
            let t = q * &row[src];
            row[dst] -= t;
        }
    };
    let col_swap = |a: &mut Vec<Vec<BigInt>>, x: usize, y: usize| {
        for row in a.iter_mut() {
            row.swap(x, y);
        }
    };

    for t in 0..r.min(c) {
        loop {
            // Move the smallest nonzero entry of the trailing block to (t, t).
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    if !a[i][j].is_zero()
                        && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            a.swap(t, bi);
            v.swap(t, bi);
            col_swap(&mut a, t, bj);
            col_swap(&mut w, t, bj);

            let mut clean = true;
            for i in t + 1..r {
                let q = round_div(&a[i][t], &a[t][t]);
                row_sub(&mut a, i, t, &q);
                row_sub(&mut v, i, t, &q);
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..c {
                let q = round_div(&a[t][j], &a[t][t]);
                col_sub(&mut a, j, t, &q);
                col_sub(&mut w, j, t, &q);
                clean &= a[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            // Divisibility: fold a row carrying a non-multiple into row t.
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match bad {
                Some(i) => {
                    row_sub(&mut a, t, i, &BigInt::from(-1));
                    row_sub(&mut v, t, i, &BigInt::from(-1));
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut().chain(v[t].iter_mut()) {
                *x = -&*x;
            }
        }
    }

    let d = Matrix::from_rows(a).unwrap_or_else(|_| IntMatrix::zeros(r, c));
    let v = Matrix::from_rows(v).unwrap_or_else(|_| IntMatrix::zeros(r, r));
    let w = Matrix::from_rows(w).unwrap_or_else(|_| IntMatrix::zeros(c, c));
    (fix_empty(d, r, c), fix_empty(v, r, r), fix_empty(w, c, c))
}

// `from_rows` loses the column count of a matrix with no rows.
fn fix_empty(m: IntMatrix, r: usize, c: usize) -> IntMatrix {
    if m.rows() == r && m.cols() == c {
        m
    } else {
        IntMatrix::zeros(r, c)
    }
}

/// Smith form over ℚ: `D = V·A·W` with integer unimodular `V`, `W`.
pub fn snf_rational(a: &RatMatrix) -> (RatMatrix, IntMatrix, IntMatrix) {
    let (scale, m) = a.clear_denominators();
    let (d, v, w) = snf(&m);
    let d = d.map(|x| Rat::new(x.clone(), scale.clone()));
    (d, v, w)
}

/// Diagonal of a Smith form, up to the smaller dimension.
pub fn diagonal<T: Clone + Zero + One>(d: &Matrix<T>) -> Vec<T> {
    (0..d.rows().min(d.cols())).map(|i| d.get(i, i).clone()).collect()
}

/// Reduced column echelon form over ℚ with its pivot rows (top to bottom).
pub fn rcef(a: &RatMatrix) -> (RatMatrix, Vec<usize>) {
    let (r, piv) = a.transpose().rref();
    (r.transpose(), piv)
}
