//! Hochschild–Mitchell chains of a finite linear category.
//!
//! A basis tuple of `C_n` is stored in application order `[f_0, …, f_n]` with
//! `f_i: x_i → x_{i+1}` and `f_n: x_n → x_0`; it stands for `f_n ⊗ ⋯ ⊗ f_1 ⊗ f_0`.

mod action;
mod sparse;
mod transversal;

pub use action::{chain_g_action, check_chain_action, coinvariants, CoinvariantSummary};
pub use sparse::matrix_free_checks;
pub use transversal::{transversal_chain_iso, ChainIso};

use std::collections::HashMap;
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::check::Check;
use crate::error::{Error, Result};
use crate::group::{conjugacy_classes, ConjClass};
use crate::lincat::{GradedLinCat, LinCat};
use crate::linalg::{accumulate, into_comb, Field, LinComb, Matrix, Scalar};

/// Default cap on the number of basis elements per degree.
pub const DEFAULT_BUDGET: usize = 200_000;

/// Expands `⊗ factors` into `(tuple, coefficient)` terms, first factor most significant.
pub(crate) fn expand(field: Field, factors: &[&LinComb]) -> Vec<(Vec<usize>, Scalar)> {
    let mut terms = vec![(Vec::with_capacity(factors.len()), field.one())];
    for comb in factors {
        let mut next = Vec::with_capacity(terms.len() * comb.len());
        for (prefix, c) in &terms {
            for (m, d) in comb.iter() {
                let mut t = prefix.clone();
                t.push(*m);
                next.push((t, c * d));
            }
        }
        terms = next;
    }
    terms
}

/// Number of closed walks of length `len` (`trace H^len`) and the matrix `H^len` itself,
/// where `H[x][y] = dim hom(x, y)`.
pub(crate) fn walk_counts(c: &LinCat, len: usize) -> Vec<Vec<u128>> {
    let n = c.num_objects();
    let h: Vec<Vec<u128>> = c.hom_dims().iter().map(|r| r.iter().map(|&d| d as u128).collect()).collect();
    let mut acc: Vec<Vec<u128>> = (0..n).map(|x| (0..n).map(|y| u128::from(x == y)).collect()).collect();
    for _ in 0..len {
        acc = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| (0..n).fold(0u128, |s, z| s.saturating_add(acc[x][z].saturating_mul(h[z][y]))))
                    .collect()
            })
            .collect();
    }
    acc
}

pub(crate) fn guard(what: impl FnOnce() -> String, needed: u128, budget: usize) -> Result<()> {
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded {
            what: what(),
            needed,
            budget,
        });
    }
    Ok(())
}

/// Basis of `C_n`: all cyclic composable tuples in lexicographic order over
/// `(x_0, …, x_n, basis positions)`.
#[derive(Clone, Debug)]
pub struct ChainBasis {
    degree: usize,
    tuples: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl ChainBasis {
    pub fn enumerate(c: &LinCat, n: usize, budget: usize) -> Result<ChainBasis> {
        let walks = walk_counts(c, n + 1);
        let needed = (0..c.num_objects()).fold(0u128, |s, x| s.saturating_add(walks[x][x]));
        guard(|| format!("chain degree {n}"), needed, budget)?;
        let mut tuples = Vec::with_capacity(needed as usize);
        let mut objs = Vec::with_capacity(n + 1);
        enumerate_objects(c, n, &mut objs, &mut tuples);
        Ok(ChainBasis::from_tuples(n, tuples))
    }

    fn from_tuples(degree: usize, tuples: Vec<Vec<usize>>) -> ChainBasis {
        let index = tuples.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        ChainBasis { degree, tuples, index }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn tuples(&self) -> &[Vec<usize>] {
        &self.tuples
    }

    pub fn tuple(&self, i: usize) -> &[usize] {
        &self.tuples[i]
    }

    pub fn index_of(&self, tuple: &[usize]) -> Option<usize> {
        self.index.get(tuple).copied()
    }

    /// `f_n ⊗ ⋯ ⊗ f_0`.
    pub fn describe(&self, c: &LinCat, i: usize) -> String {
        self.tuples[i]
            .iter()
            .rev()
            .map(|&f| c.morphism(f).name.as_str())
            .collect::<Vec<_>>()
            .join(" ⊗ ")
    }
}

fn enumerate_objects(c: &LinCat, n: usize, objs: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if objs.len() == n + 1 {
        let homs: Vec<&[usize]> = (0..=n).map(|i| c.hom(objs[i], objs[(i + 1) % (n + 1)])).collect();
        if homs.iter().any(|h| h.is_empty()) {
            return;
        }
        let mut pos = vec![0usize; n + 1];
        loop {
            out.push((0..=n).map(|i| homs[i][pos[i]]).collect());
            let mut k = n + 1;
            loop {
                if k == 0 {
                    return;
                }
                k -= 1;
                pos[k] += 1;
                if pos[k] < homs[k].len() {
                    break;
                }
                pos[k] = 0;
            }
        }
    }
    for x in 0..c.num_objects() {
        if let Some(&prev) = objs.last() {
            if c.hom_dim(prev, x) == 0 {
                continue;
            }
        }
        objs.push(x);
        enumerate_objects(c, n, objs, out);
        objs.pop();
    }
}

/// `d(f_n ⊗ ⋯ ⊗ f_0)`: contractions `f_{i+1}f_i` with sign `(−1)^{n−1−i}` and the
/// wrap-around term `f_0 f_n ⊗ f_{n−1} ⊗ ⋯ ⊗ f_1` with sign `(−1)^n`.
pub fn boundary_terms(c: &LinCat, tuple: &[usize]) -> Vec<(Vec<usize>, Scalar)> {
    let n = tuple.len() - 1;
    let f = c.field();
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    for i in 0..n {
        let sign = Scalar::sign(f, n - 1 - i);
        for (m, coef) in c.compose_basis(tuple[i + 1], tuple[i]) {
            let mut t = Vec::with_capacity(n);
            t.extend_from_slice(&tuple[..i]);
            t.push(*m);
            t.extend_from_slice(&tuple[i + 2..]);
            out.push((t, &sign * coef));
        }
    }
    let sign = Scalar::sign(f, n);
    for (m, coef) in c.compose_basis(tuple[0], tuple[n]) {
        let mut t = Vec::with_capacity(n);
        t.extend_from_slice(&tuple[1..n]);
        t.push(*m);
        out.push((t, &sign * coef));
    }
    out
}

/// Looks up expanded terms in a basis, summing duplicates.
pub(crate) fn collect_terms<K: ?Sized>(
    terms: impl IntoIterator<Item = (impl std::borrow::Borrow<K>, Scalar)>,
    lookup: impl Fn(&K) -> Option<usize>,
    missing: impl Fn(&K) -> Error,
) -> Result<LinComb> {
    let mut acc = std::collections::BTreeMap::new();
    for (t, coef) in terms {
        let i = lookup(t.borrow()).ok_or_else(|| missing(t.borrow()))?;
        accumulate(&mut acc, i, coef);
    }
    Ok(into_comb(acc))
}

/// Matrix whose `j`-th column is `columns[j]`.
pub(crate) fn matrix_from_columns(field: Field, rows: usize, columns: Vec<LinComb>) -> Result<Matrix> {
    let cols = columns.len();
    let triplets = columns
        .into_iter()
        .enumerate()
        .flat_map(|(j, comb)| comb.into_iter().map(move |(i, v)| (i, j, v)));
    Matrix::from_triplets(field, rows, cols, triplets.collect::<Vec<_>>())
}

/// Dense-storage guard for a complex: every (co)boundary `C_n × C_{n+1}` and every
/// composite `C_n × C_{n+2}` checked by `d∘d` must fit.
pub(crate) fn guard_dense(what: &str, dims: &[usize]) -> Result<()> {
    for n in 0..dims.len() {
        for k in [1, 2] {
            if let Some(&m) = dims.get(n + k) {
                crate::linalg::check_cells(dims[n], m).map_err(|e| match e {
                    Error::BudgetExceeded { needed, budget, .. } => Error::BudgetExceeded {
                        what: format!("{what}: dense {}x{m} matrix in degrees {n}, {}", dims[n], n + k),
                        needed,
                        budget,
                    },
                    other => other,
                })?;
            }
        }
    }
    Ok(())
}

/// Truncated chain complex `C_0 ← C_1 ← ⋯ ← C_top`, optionally restricted to a class.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    field: Field,
    bases: Vec<ChainBasis>,
    /// `boundaries[n] = d_n: C_n → C_{n−1}`; `boundaries[0]` is the zero map.
    boundaries: Vec<Matrix>,
    label: String,
    ranks: OnceLock<Vec<usize>>,
}

/// Builds `C_0, …, C_{n_max+1}` and `d_1, …, d_{n_max+1}`.
pub fn build_chain_complex(c: &LinCat, n_max: usize, budget: usize) -> Result<ChainComplex> {
    let bases = (0..=n_max + 1)
        .map(|n| ChainBasis::enumerate(c, n, budget))
        .collect::<Result<Vec<_>>>()?;
    guard_dense("chain complex", &bases.iter().map(ChainBasis::len).collect::<Vec<_>>())?;
    let field = c.field();
    let mut boundaries = vec![Matrix::zeros(field, 0, bases[0].len())];
    for n in 1..=n_max + 1 {
        let (src, tgt) = (&bases[n], &bases[n - 1]);
        let columns = src
            .tuples
            .par_iter()
            .map(|t| {
                collect_terms::<[usize]>(
                    boundary_terms(c, t),
                    |k| tgt.index_of(k),
                    |_| Error::Malformed("boundary leaves the chain basis".into()),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        boundaries.push(matrix_from_columns(field, tgt.len(), columns)?);
    }
    Ok(ChainComplex {
        field,
        bases,
        boundaries,
        label: "ALL".into(),
        ranks: OnceLock::new(),
    })
}

impl ChainComplex {
    pub fn field(&self) -> Field {
        self.field
    }

    /// Highest stored degree (`n_max + 1`).
    pub fn top(&self) -> usize {
        self.bases.len() - 1
    }

    /// Highest degree whose homology is available.
    pub fn n_max(&self) -> usize {
        self.top() - 1
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn basis(&self, n: usize) -> &ChainBasis {
        &self.bases[n]
    }

    pub fn boundary(&self, n: usize) -> &Matrix {
        &self.boundaries[n]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.bases.iter().map(ChainBasis::len).collect()
    }

    /// `rank d_n` for `n = 0..=top`.
    pub fn ranks(&self) -> &[usize] {
        self.ranks
            .get_or_init(|| self.boundaries.par_iter().map(Matrix::rank).collect())
    }

    /// `dim H_n = dim C_n − rank d_n − rank d_{n+1}` for `n ≤ n_max`.
    pub fn homology_dims(&self) -> Vec<usize> {
        let r = self.ranks();
        (0..=self.n_max()).map(|n| self.bases[n].len() - r[n] - r[n + 1]).collect()
    }

    /// `d_{n−1} ∘ d_n = 0` for every stored pair, with the first offending tuple.
    pub fn check_dd(&self, c: &LinCat) -> Check {
        let name = format!("chain d∘d = 0 ({})", self.label);
        for n in 2..=self.top() {
            let dd = self.boundaries[n - 1].mul(&self.boundaries[n]).expect("composable");
            if let Some((_, j)) = dd.first_nonzero() {
                return Check::fail(name, format!("degree {n}: d(d({}))", self.bases[n].describe(c, j)));
            }
        }
        Check::pass(name)
    }

    /// Subcomplex on the tuples accepted by `keep`; fails if a boundary leaves it.
    pub fn restrict(&self, c: &LinCat, label: String, keep: impl Fn(&[usize]) -> bool + Sync) -> Result<ChainComplex> {
        let kept: Vec<Vec<usize>> = self
            .bases
            .iter()
            .map(|b| (0..b.len()).filter(|&i| keep(&b.tuples[i])).collect())
            .collect();
        let mut boundaries = vec![Matrix::zeros(self.field, 0, kept[0].len())];
        for n in 1..=self.top() {
            let d = &self.boundaries[n];
            let mut inside = vec![false; d.rows()];
            for &i in &kept[n - 1] {
                inside[i] = true;
            }
            for &j in &kept[n] {
                if let Some((i, _)) = d.column_support(j).into_iter().find(|(i, _)| !inside[*i]) {
                    return Err(Error::ClassLeak(format!(
                        "d({}) has the term {} outside {label}",
                        self.bases[n].describe(c, j),
                        self.bases[n - 1].describe(c, i)
                    )));
                }
            }
            boundaries.push(d.select_rows(&kept[n - 1]).select_cols(&kept[n]));
        }
        let bases = self
            .bases
            .iter()
            .zip(&kept)
            .map(|(b, k)| ChainBasis::from_tuples(b.degree, k.iter().map(|&i| b.tuples[i].clone()).collect()))
            .collect();
        Ok(ChainComplex {
            field: self.field,
            bases,
            boundaries,
            label,
            ranks: OnceLock::new(),
        })
    }
}

/// `deg(f_n)⋯deg(f_1)deg(f_0)` of a chain tuple.
pub fn chain_class_element(b: &GradedLinCat, tuple: &[usize]) -> usize {
    b.group.product(tuple.iter().rev().map(|&f| b.degree(f)))
}

/// `C^D_•`: tuples whose degree product lies in `class`.
pub fn class_subcomplex(full: &ChainComplex, b: &GradedLinCat, class: &ConjClass) -> Result<ChainComplex> {
    full.restrict(&b.cat, class.label(&b.group), |t| class.contains(chain_class_element(b, t)))
}

/// All class subcomplexes, identity class first.
pub fn class_decomposition(full: &ChainComplex, b: &GradedLinCat) -> Result<Vec<(ConjClass, ChainComplex)>> {
    conjugacy_classes(&b.group)
        .into_iter()
        .map(|cl| {
            let sub = class_subcomplex(full, b, &cl)?;
            Ok((cl, sub))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::constructions::skew;
    use crate::fixtures;
    use crate::group::FinGroup;

    const P: Field = Field::Prime(101);

    #[test]
    fn end_k_is_one_dimensional() {
        let c = fixtures::end_k(P);
        let cx = build_chain_complex(&c, 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(cx.dims(), vec![1; 5]);
        assert_eq!(cx.homology_dims(), vec![1, 0, 0, 0]);
        // d_n alternates between 0 (n odd) and the identity (n even)
        for n in 1..=4 {
            assert_eq!(cx.boundary(n).is_zero(), n % 2 == 1, "degree {n}");
        }
    }

    #[test]
    fn dual_numbers_dims() {
        let c = fixtures::dual_numbers(P);
        let cx = build_chain_complex(&c, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(cx.dims(), vec![2, 4, 8, 16]);
        assert!(cx.check_dd(&c).passed);
        let h = cx.homology_dims();
        assert_eq!(&h[..2], &[2, 1]);
    }

    #[test]
    fn dual_numbers_d2_by_hand() {
        // d(f_2 ⊗ f_1 ⊗ f_0) = f_2f_1 ⊗ f_0 − f_2 ⊗ f_1f_0 + f_0f_2 ⊗ f_1; by hand the image
        // of d_2 is spanned by 1⊗1, x⊗1 and 2x⊗x, so H_1 = 4 − 3.
        let c = fixtures::dual_numbers(P);
        let cx = build_chain_complex(&c, 1, DEFAULT_BUDGET).unwrap();
        let (one, x) = (0, 1);
        let img = |t: [usize; 3]| -> Vec<Scalar> {
            let i = cx.basis(2).index_of(&t).unwrap();
            cx.boundary(2).column(i)
        };
        let at = |t: [usize; 2]| cx.basis(1).index_of(&t).unwrap();
        // x ⊗ x ⊗ x ↦ 0 − 0 + 0
        assert!(img([x, x, x]).iter().all(Scalar::is_zero));
        // tuple [f_0, f_1, f_2] = [x, x, 1]: f_2f_1⊗f_0 = x⊗x, f_2⊗f_1f_0 = 0, f_0f_2⊗f_1 = x⊗x
        let v = img([x, x, one]);
        assert_eq!(v[at([x, x])], P.from_i64(2));
        assert_eq!(cx.ranks()[2], 3);
        assert_eq!(cx.ranks()[1], 0);
        assert_eq!(4 - cx.ranks()[1] - cx.ranks()[2], 1);
    }

    #[test]
    fn k_times_k_is_separable() {
        let c = fixtures::k_times_k(P);
        let cx = build_chain_complex(&c, 2, DEFAULT_BUDGET).unwrap();
        assert!(cx.boundary(1).is_zero());
        assert_eq!(cx.homology_dims(), vec![2, 0, 0]);
    }

    #[test]
    fn budget_guard() {
        let c = fixtures::dual_numbers(P);
        let err = build_chain_complex(&c, 4, 16).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { needed: 32, .. }));
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let c = fixtures::two_object_swap(P, true);
        let b = ChainBasis::enumerate(&c, 2, DEFAULT_BUDGET).unwrap();
        let key = |t: &Vec<usize>| {
            let objs: Vec<usize> = t.iter().map(|&f| c.morphism(f).src).collect();
            let pos: Vec<usize> = t.iter().map(|&f| c.position(f)).collect();
            (objs, pos)
        };
        assert!(b.tuples().windows(2).all(|w| key(&w[0]) < key(&w[1])));
    }

    #[test]
    fn trivial_grading_has_everything_in_class_one() {
        let c = fixtures::dual_numbers(P);
        let g = GradedLinCat::trivially(c.clone(), Arc::new(FinGroup::c2()));
        let full = build_chain_complex(&c, 2, DEFAULT_BUDGET).unwrap();
        let parts = class_decomposition(&full, &g).unwrap();
        assert_eq!(parts[0].1.dims(), full.dims());
        assert!(parts[1].1.dims().iter().all(|&d| d == 0));
    }

    #[test]
    fn dual_numbers_skew_splits_evenly() {
        let (c, a) = fixtures::dual_numbers_c2(P);
        let sk = skew(&c, &a).unwrap();
        let full = build_chain_complex(sk.cat(), 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(full.dims()[1], 16);
        // oracle: count homogeneous pairs by the product of their degrees
        let mut by_class = [0usize; 2];
        for &f0 in sk.cat().hom(0, 0) {
            for &f1 in sk.cat().hom(0, 0) {
                by_class[sk.graded.group.mul(sk.graded.degree(f1), sk.graded.degree(f0))] += 1;
            }
        }
        let parts = class_decomposition(&full, &sk.graded).unwrap();
        assert_eq!(parts[0].1.dims()[1], by_class[0]);
        assert_eq!(parts[1].1.dims()[1], by_class[1]);
        assert_eq!(by_class, [8, 8]);
        for (_, sub) in &parts {
            assert!(sub.check_dd(sk.cat()).passed);
        }
        let total: Vec<usize> = (0..3)
            .map(|n| parts.iter().map(|(_, s)| s.homology_dims()[n]).sum())
            .collect();
        assert_eq!(total, full.homology_dims());
    }
}
