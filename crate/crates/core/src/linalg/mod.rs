//! Exact field arithmetic and the dense linear-algebra kernel (rank, kernel,
//! quotient dimension) used by every other module.

mod elim;
mod matrix;
mod scalar;

pub use matrix::{check_cells, quotient_dim, Matrix, DENSE_CELL_LIMIT};
pub use scalar::{Field, Scalar, MAX_MODULUS};

/// Sparse linear combination: `(basis index, coefficient)` pairs, sorted by index,
/// without zero coefficients.
pub type LinComb = Vec<(usize, Scalar)>;

/// Adds `coef * x` into an accumulator keyed by basis index, dropping cancellations.
pub fn accumulate(acc: &mut std::collections::BTreeMap<usize, Scalar>, index: usize, coef: Scalar) {
    use std::collections::btree_map::Entry;
    if coef.is_zero() {
        return;
    }
    match acc.entry(index) {
        Entry::Vacant(e) => {
            e.insert(coef);
        }
        Entry::Occupied(mut e) => {
            let v = e.get().clone() + coef;
            if v.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = v;
            }
        }
    }
}

/// Drains an accumulator into a sorted [`LinComb`].
pub fn into_comb(acc: std::collections::BTreeMap<usize, Scalar>) -> LinComb {
    acc.into_iter().collect()
}
