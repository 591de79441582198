//! Field-generic dense kernels. Pivoting always takes the first row carrying a
//! nonzero entry in the current column, so results are reproducible.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::scalar::{inv_mod, mul_mod};

pub(crate) trait Arith {
    type E: Clone + PartialEq;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
    /// `a - f * b`, the inner step of every elimination.
    fn sub_mul(&self, a: &Self::E, f: &Self::E, b: &Self::E) -> Self::E {
        self.sub(a, &self.mul(f, b))
    }
}

pub(crate) struct ModP(pub u64);

impl Arith for ModP {
    type E = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    #[inline]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.0
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.0 - b) % self.0
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.0)
    }
    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        (self.0 - a) % self.0
    }
    fn inv(&self, a: &u64) -> u64 {
        inv_mod(*a, self.0)
    }
    #[inline]
    fn sub_mul(&self, a: &u64, f: &u64, b: &u64) -> u64 {
        let p = self.0;
        (a + p * p - f * b) % p
    }
}

pub(crate) struct Q;

impl Arith for Q {
    type E = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
}

/// Row echelon form in place; returns the rank. Rows below the rank are zeroed
/// only implicitly (their contents are unspecified afterwards).
pub(crate) fn echelon_rank<A: Arith>(ar: &A, rows: usize, cols: usize, data: &mut [A::E]) -> usize {
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| !ar.is_zero(&data[r * cols + col])) else {
            continue;
        };
        if pivot != rank {
            swap_rows(data, cols, pivot, rank);
        }
        let inv = ar.inv(&data[rank * cols + col]);
        for r in rank + 1..rows {
            if ar.is_zero(&data[r * cols + col]) {
                continue;
            }
            let factor = ar.mul(&data[r * cols + col], &inv);
            eliminate(ar, data, cols, rank, r, col, &factor);
        }
        rank += 1;
    }
    rank
}

/// Reduced row echelon form in place; returns the pivot columns in order.
pub(crate) fn rref<A: Arith>(ar: &A, rows: usize, cols: usize, data: &mut [A::E]) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| !ar.is_zero(&data[r * cols + col])) else {
            continue;
        };
        if pivot != rank {
            swap_rows(data, cols, pivot, rank);
        }
        let inv = ar.inv(&data[rank * cols + col]);
        for j in col..cols {
            let v = ar.mul(&data[rank * cols + j], &inv);
            data[rank * cols + j] = v;
        }
        for r in 0..rows {
            if r == rank || ar.is_zero(&data[r * cols + col]) {
                continue;
            }
            let factor = data[r * cols + col].clone();
            eliminate(ar, data, cols, rank, r, col, &factor);
        }
        pivots.push(col);
        rank += 1;
    }
    pivots
}

fn swap_rows<E>(data: &mut [E], cols: usize, a: usize, b: usize) {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let (head, tail) = data.split_at_mut(hi * cols);
    head[lo * cols..(lo + 1) * cols].swap_with_slice(&mut tail[..cols]);
}

/// row[target] -= factor * row[source], touching only columns from `from` on.
fn eliminate<A: Arith>(
    ar: &A,
    data: &mut [A::E],
    cols: usize,
    source: usize,
    target: usize,
    from: usize,
    factor: &A::E,
) {
    let (src, dst) = if source < target {
        let (head, tail) = data.split_at_mut(target * cols);
        (&head[source * cols..(source + 1) * cols], &mut tail[..cols])
    } else {
        let (head, tail) = data.split_at_mut(source * cols);
        (&tail[..cols], &mut head[target * cols..(target + 1) * cols])
    };
    for j in from..cols {
        if ar.is_zero(&src[j]) {
            continue;
        }
        dst[j] = ar.sub_mul(&dst[j], factor, &src[j]);
    }
}

/// Null-space basis from a matrix already in RREF with the given pivots.
pub(crate) fn kernel_from_rref<A: Arith>(
    ar: &A,
    cols: usize,
    data: &[A::E],
    pivots: &[usize],
) -> Vec<Vec<A::E>> {
    let mut is_pivot = vec![false; cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![ar.zero(); cols];
            v[free] = ar.one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = ar.neg(&data[row * cols + free]);
            }
            v
        })
        .collect()
}

/// Dense product of an `n x k` and a `k x m` matrix, skipping zero entries.
pub(crate) fn matmul<A: Arith>(
    ar: &A,
    lhs: &[A::E],
    rhs: &[A::E],
    n: usize,
    k: usize,
    m: usize,
) -> Vec<A::E> {
    let mut out = vec![ar.zero(); n * m];
    for i in 0..n {
        for l in 0..k {
            let a = &lhs[i * k + l];
            if ar.is_zero(a) {
                continue;
            }
            for j in 0..m {
                let b = &rhs[l * m + j];
                if ar.is_zero(b) {
                    continue;
                }
                let prod = ar.mul(a, b);
                out[i * m + j] = ar.add(&out[i * m + j], &prod);
            }
        }
    }
    out
}
