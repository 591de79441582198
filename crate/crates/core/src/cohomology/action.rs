use rayon::prelude::*;

use super::{CochainComplex, CochainKey};
use crate::check::Check;
use crate::error::Result;
use crate::hochschild::expand;
use crate::lincat::{GActionOnCat, LinCat};
use crate::linalg::{accumulate, into_comb, LinComb, Matrix};

/// `(s.φ)(f_n ⊗ ⋯ ⊗ f_1) = s[φ(s⁻¹f_n ⊗ ⋯ ⊗ s⁻¹f_1)]` as matrices: `result[s][n]` acts on `C^n`.
pub fn cochain_g_action(c: &LinCat, a: &GActionOnCat, cx: &CochainComplex) -> Result<Vec<Vec<Matrix>>> {
    let g = a.group();
    let f = c.field();
    g.elements()
        .map(|s| {
            let si = g.inv(s);
            (0..=cx.top())
                .map(|n| {
                    let b = cx.basis(n);
                    let rows: Vec<LinComb> = b
                        .keys()
                        .par_iter()
                        .map(|key| {
                            let factors: Vec<&LinComb> = key.path.iter().map(|&m| a.act(si, m)).collect();
                            let start = a.act_obj(si, key.start);
                            let end = a.act_obj(si, key.end(c));
                            let mut acc = std::collections::BTreeMap::new();
                            for (path, coef) in expand(f, &factors) {
                                for &g0 in c.hom(start, end) {
                                    // coefficient of key.out in s·g0
                                    if let Some((_, v)) = a.act(s, g0).iter().find(|(m, _)| *m == key.out) {
                                        let j = b.index(c, start, &path, g0).expect("unrestricted basis");
                                        accumulate(&mut acc, j, &coef * v);
                                    }
                                }
                            }
                            into_comb(acc)
                        })
                        .collect();
                    let triplets: Vec<_> = rows
                        .into_iter()
                        .enumerate()
                        .flat_map(|(i, r)| r.into_iter().map(move |(j, v)| (i, j, v)))
                        .collect();
                    Matrix::from_triplets(f, b.len(), b.len(), triplets)
                })
                .collect()
        })
        .collect()
}

/// Group law and commutation with the coboundary.
pub fn check_cochain_action(a: &GActionOnCat, c: &LinCat, cx: &CochainComplex, m: &[Vec<Matrix>]) -> Vec<Check> {
    let g = a.group();
    let mut law = None;
    'law: for s in g.elements() {
        for t in g.elements() {
            for n in 0..=cx.top() {
                if m[s][n].mul(&m[t][n]).expect("square") != m[g.mul(s, t)][n] {
                    law = Some(format!("{}·({}·−) ≠ ({}{})·− on C^{n}", g.name(s), g.name(t), g.name(s), g.name(t)));
                    break 'law;
                }
            }
        }
    }
    let mut commute = None;
    'comm: for s in g.elements() {
        for n in 0..cx.top() {
            let d = cx.coboundary(n);
            let diff = d.mul(&m[s][n]).unwrap().sub(&m[s][n + 1].mul(d).unwrap()).unwrap();
            if let Some((_, j)) = diff.first_nonzero() {
                commute = Some(format!("s = {}, φ = E({})", g.name(s), cx.basis(n).key(j).describe(c)));
                break 'comm;
            }
        }
    }
    vec![
        Check::from_witness("cochain action group law", law),
        Check::from_witness("cochain action commutes with d", commute),
    ]
}

/// Invariant cochains and the two ways of taking invariants in cohomology.
#[derive(Clone, Debug)]
pub struct InvariantSummary {
    /// Columns span `(C^n)^G`.
    pub spans: Vec<Matrix>,
    pub cochain_dims: Vec<usize>,
    /// `dim H^n((C^•)^G)`.
    pub cohomology: Vec<usize>,
    /// `dim (HH^n)^G`: cocycles `z` with `s·z − z` a coboundary, modulo coboundaries.
    pub cohomology_invariants: Vec<usize>,
}

/// Joint fixed space of all `M_s` in each degree and the cohomology of the invariant subcomplex.
pub fn invariants(cx: &CochainComplex, m: &[Vec<Matrix>]) -> Result<InvariantSummary> {
    let f = cx.field();
    let top = cx.top();
    for n in 0..=top {
        crate::linalg::check_cells(m.len() * cx.basis(n).len(), cx.basis(n).len())?;
    }
    let spans: Vec<Matrix> = (0..=top)
        .into_par_iter()
        .map(|n| {
            let dim = cx.basis(n).len();
            let id = Matrix::identity(f, dim);
            let blocks: Vec<Matrix> = m.iter().map(|ms| ms[n].sub(&id).unwrap()).collect();
            let refs: Vec<&Matrix> = blocks.iter().collect();
            Matrix::vstack(f, dim, &refs).unwrap().kernel_matrix()
        })
        .collect();
    let cochain_dims: Vec<usize> = spans.iter().map(Matrix::cols).collect();
    let rk_d: Vec<usize> = (0..top)
        .into_par_iter()
        .map(|n| cx.coboundary(n).mul(&spans[n]).unwrap().rank())
        .collect();
    let cohomology = (0..top)
        .map(|n| cochain_dims[n] - rk_d[n] - if n == 0 { 0 } else { rk_d[n - 1] })
        .collect();
    let cohomology_invariants = (0..top)
        .into_par_iter()
        .map(|n| {
            let dim = cx.basis(n).len();
            let z = cx.coboundary(n).kernel_matrix();
            let (rk_b, conds) = if n == 0 {
                let blocks: Vec<Matrix> = m.iter().map(|ms| ms[0].sub(&Matrix::identity(f, dim)).unwrap().mul(&z).unwrap()).collect();
                (0, blocks)
            } else {
                let d = cx.coboundary(n - 1);
                // rows of p annihilate the coboundaries
                let p = d.transpose().kernel_matrix().transpose();
                let blocks = m
                    .iter()
                    .map(|ms| p.mul(&ms[n].sub(&Matrix::identity(f, dim)).unwrap()).unwrap().mul(&z).unwrap())
                    .collect();
                (d.rank(), blocks)
            };
            let refs: Vec<&Matrix> = conds.iter().collect();
            let stacked = Matrix::vstack(f, z.cols(), &refs).unwrap();
            z.cols() - stacked.rank() - rk_b
        })
        .collect();
    Ok(InvariantSummary {
        spans,
        cochain_dims,
        cohomology,
        cohomology_invariants,
    })
}

/// Whether `φ(s·f_n ⊗ ⋯ ⊗ s·f_1) = s[φ(f_n ⊗ ⋯ ⊗ f_1)]` for all `s` and basis paths.
pub fn is_invariant_pointwise(c: &LinCat, a: &GActionOnCat, cx: &CochainComplex, n: usize, phi: &LinComb) -> bool {
    let b = cx.basis(n);
    let f = c.field();
    let eval = |start: usize, path: &[usize]| -> LinComb {
        let end = path.last().map_or(start, |&m| c.morphism(m).tgt);
        c.hom(start, end)
            .iter()
            .filter_map(|&g| {
                let i = b.index(c, start, path, g)?;
                phi.iter().find(|(j, _)| *j == i).map(|(_, v)| (g, v.clone()))
            })
            .collect()
    };
    for s in a.group().elements() {
        for key in b.keys().iter().filter(|k| k.out == c.hom(k.start, k.end(c))[0]) {
            let CochainKey { start, path, .. } = key;
            let lhs = {
                let factors: Vec<&LinComb> = path.iter().map(|&m| a.act(s, m)).collect();
                let mut acc = std::collections::BTreeMap::new();
                for (p, coef) in expand(f, &factors) {
                    for (g, v) in eval(a.act_obj(s, *start), &p) {
                        accumulate(&mut acc, g, &coef * &v);
                    }
                }
                into_comb(acc)
            };
            let rhs = a.act_comb(s, &eval(*start, path));
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::check::all_passed;
    use crate::cohomology::build_cochain_complex;
    use crate::fixtures;
    use crate::group::FinGroup;
    use crate::linalg::Field;

    const P: Field = Field::Prime(101);

    #[test]
    fn trivial_action() {
        let c = fixtures::dual_numbers(P);
        let a = GActionOnCat::trivial(&c, Arc::new(FinGroup::c2()));
        let cx = build_cochain_complex(&c, 1, 1000).unwrap();
        let m = cochain_g_action(&c, &a, &cx).unwrap();
        for ms in &m {
            for mn in ms {
                assert_eq!(mn, &Matrix::identity(P, mn.rows()));
            }
        }
        let inv = invariants(&cx, &m).unwrap();
        assert_eq!(inv.cohomology, cx.cohomology_dims());
    }

    #[test]
    fn derivation_is_fixed() {
        let (c, a) = fixtures::dual_numbers_c2(P);
        let cx = build_cochain_complex(&c, 2, 1000).unwrap();
        let m = cochain_g_action(&c, &a, &cx).unwrap();
        assert!(all_passed(&check_cochain_action(&a, &c, &cx, &m)));
        let i = cx.basis(1).index(&c, 0, &[1], 1).unwrap();
        assert_eq!(m[1][1].column_support(i), vec![(i, P.one())]);
        // E(1 ↦ x) picks up a sign
        let j = cx.basis(1).index(&c, 0, &[0], 1).unwrap();
        assert_eq!(m[1][1].column_support(j), vec![(j, P.from_i64(-1))]);
    }

    #[test]
    fn dual_numbers_invariants() {
        let (c, a) = fixtures::dual_numbers_c2(P);
        let cx = build_cochain_complex(&c, 2, 1000).unwrap();
        let m = cochain_g_action(&c, &a, &cx).unwrap();
        let inv = invariants(&cx, &m).unwrap();
        // degree 0: invariant part of Λ = span{1}
        assert_eq!(inv.cochain_dims[0], 1);
        assert_eq!(inv.cohomology, inv.cohomology_invariants);
        assert_eq!(&inv.cohomology[..2], &[1, 1]);
        // the joint kernel agrees with the pointwise criterion
        for j in 0..inv.spans[1].cols() {
            let v: LinComb = inv.spans[1].column_support(j);
            assert!(is_invariant_pointwise(&c, &a, &cx, 1, &v));
        }
        let non_inv = vec![(cx.basis(1).index(&c, 0, &[0], 1).unwrap(), P.one())];
        assert!(!is_invariant_pointwise(&c, &a, &cx, 1, &non_inv));
    }
}
