use rayon::prelude::*;

use super::{collect_terms, expand, matrix_from_columns, ChainComplex};
use crate::check::Check;
use crate::error::{Error, Result};
use crate::lincat::{GActionOnCat, LinCat};
use crate::linalg::{LinComb, Matrix};

/// `s·(f_n ⊗ ⋯ ⊗ f_0) = sf_n ⊗ ⋯ ⊗ sf_0` as matrices: `result[s][n]` acts on `C_n`.
pub fn chain_g_action(a: &GActionOnCat, cx: &ChainComplex) -> Result<Vec<Vec<Matrix>>> {
    let f = cx.field();
    a.group()
        .elements()
        .map(|s| {
            (0..=cx.top())
                .map(|n| {
                    let basis = cx.basis(n);
                    let columns = basis
                        .tuples()
                        .par_iter()
                        .map(|t| {
                            let factors: Vec<&LinComb> = t.iter().map(|&m| a.act(s, m)).collect();
                            collect_terms::<Vec<usize>>(
                                expand(f, &factors),
                                |k| basis.index_of(k),
                                |_| Error::ClassLeak("group action leaves the chain basis".into()),
                            )
                        })
                        .collect::<Result<Vec<_>>>()?;
                    matrix_from_columns(f, basis.len(), columns)
                })
                .collect()
        })
        .collect()
}

/// Group law `M_s M_t = M_{st}` and commutation `d M_s = M_s d` in every stored degree.
pub fn check_chain_action(a: &GActionOnCat, c: &LinCat, cx: &ChainComplex, m: &[Vec<Matrix>]) -> Vec<Check> {
    let g = a.group();
    let mut law = None;
    'law: for s in g.elements() {
        for t in g.elements() {
            for n in 0..=cx.top() {
                if m[s][n].mul(&m[t][n]).expect("square") != m[g.mul(s, t)][n] {
                    law = Some(format!("{}·({}·−) ≠ ({}{})·− on C_{n}", g.name(s), g.name(t), g.name(s), g.name(t)));
                    break 'law;
                }
            }
        }
    }
    let mut commute = None;
    'comm: for s in g.elements() {
        for n in 1..=cx.top() {
            let d = cx.boundary(n);
            let diff = d.mul(&m[s][n]).unwrap().sub(&m[s][n - 1].mul(d).unwrap()).unwrap();
            if let Some((_, j)) = diff.first_nonzero() {
                commute = Some(format!("s = {}, tuple {}", g.name(s), cx.basis(n).describe(c, j)));
                break 'comm;
            }
        }
    }
    vec![
        Check::from_witness("chain action group law", law),
        Check::from_witness("chain action commutes with d", commute),
    ]
}

/// Dimensions attached to the coinvariants `C_•(C)_G = C_•/⟨s·b − b⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoinvariantSummary {
    /// `dim (C_n)_G`.
    pub chain_dims: Vec<usize>,
    /// `dim H_n(C_•(C)_G)`.
    pub homology: Vec<usize>,
    /// `dim (HH_n(C))_G`, computed from cycles and boundaries independently.
    pub homology_coinvariants: Vec<usize>,
    /// `d_n W_n ⊂ W_{n−1}`, so the induced boundary is well defined.
    pub well_defined: Check,
}

/// `W_n = span{(M_s − I) b}` as a matrix of spanning columns.
pub(crate) fn w_span(cx: &ChainComplex, m: &[Vec<Matrix>], n: usize) -> Result<Matrix> {
    let f = cx.field();
    let dim = cx.basis(n).len();
    let id = Matrix::identity(f, dim);
    let blocks: Vec<Matrix> = m.iter().map(|ms| ms[n].sub(&id).expect("square")).collect();
    let refs: Vec<&Matrix> = blocks.iter().collect();
    Matrix::hstack(f, dim, &refs)
}

/// Homology of the coinvariants complex and coinvariants of homology, through `n_max`.
pub fn coinvariants(cx: &ChainComplex, m: &[Vec<Matrix>]) -> Result<CoinvariantSummary> {
    let f = cx.field();
    let top = cx.top();
    let w: Vec<Matrix> = (0..=top).map(|n| w_span(cx, m, n)).collect::<Result<_>>()?;
    for n in 0..top {
        let dim = cx.basis(n).len();
        crate::linalg::check_cells(dim, cx.basis(n + 1).len() + m.len() * dim)?;
    }
    let rk_w: Vec<usize> = w.par_iter().map(Matrix::rank).collect();
    // rank of the induced d̄_n: rank[d_n | W_{n−1}] − rank W_{n−1}
    let rk_bar: Vec<usize> = (0..=top)
        .into_par_iter()
        .map(|n| {
            if n == 0 {
                return 0;
            }
            let both = Matrix::hstack(f, cx.basis(n - 1).len(), &[cx.boundary(n), &w[n - 1]]).unwrap();
            both.rank() - rk_w[n - 1]
        })
        .collect();
    let chain_dims: Vec<usize> = (0..=top).map(|n| cx.basis(n).len() - rk_w[n]).collect();
    let homology = (0..top).map(|n| chain_dims[n] - rk_bar[n] - rk_bar[n + 1]).collect();
    let homology_coinvariants = (0..top)
        .into_par_iter()
        .map(|n| {
            let z = cx.boundary(n).kernel_matrix();
            let dim = cx.basis(n).len();
            let mut blocks = vec![cx.boundary(n + 1).clone()];
            for ms in m {
                blocks.push(ms[n].sub(&Matrix::identity(f, dim)).unwrap().mul(&z).unwrap());
            }
            let refs: Vec<&Matrix> = blocks.iter().collect();
            z.cols() - Matrix::hstack(f, dim, &refs).unwrap().rank()
        })
        .collect();
    let mut witness = None;
    for n in 1..=top {
        let img = cx.boundary(n).mul(&w[n]).unwrap();
        if !w[n - 1].spans(&img).unwrap() {
            witness = Some(format!("d_{n} does not preserve ⟨s·b − b⟩"));
            break;
        }
    }
    Ok(CoinvariantSummary {
        chain_dims,
        homology,
        homology_coinvariants,
        well_defined: Check::from_witness("coinvariant boundary well defined", witness),
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::fixtures;
    use crate::group::FinGroup;
    use crate::hochschild::{build_chain_complex, DEFAULT_BUDGET};
    use crate::linalg::Field;

    const P: Field = Field::Prime(101);

    #[test]
    fn trivial_action_is_identity() {
        let c = fixtures::dual_numbers(P);
        let a = GActionOnCat::trivial(&c, Arc::new(FinGroup::c2()));
        let cx = build_chain_complex(&c, 1, DEFAULT_BUDGET).unwrap();
        let m = chain_g_action(&a, &cx).unwrap();
        for ms in &m {
            for (n, mn) in ms.iter().enumerate() {
                assert_eq!(mn, &Matrix::identity(P, cx.basis(n).len()));
            }
        }
        let co = coinvariants(&cx, &m).unwrap();
        assert_eq!(co.homology, cx.homology_dims());
    }

    #[test]
    fn dual_numbers_signs() {
        let (c, a) = fixtures::dual_numbers_c2(P);
        let cx = build_chain_complex(&c, 2, DEFAULT_BUDGET).unwrap();
        let m = chain_g_action(&a, &cx).unwrap();
        let (one, x) = (0, 1);
        let b1 = cx.basis(1);
        let i = b1.index_of(&[x, x]).unwrap();
        let j = b1.index_of(&[x, one]).unwrap();
        assert_eq!(m[1][1].get(i, i), P.one());
        assert_eq!(m[1][1].get(j, j), P.from_i64(-1));
        assert!(check_chain_action(&a, &c, &cx, &m).iter().all(|c| c.passed));
    }

    #[test]
    fn dual_numbers_coinvariants() {
        let (c, a) = fixtures::dual_numbers_c2(P);
        let cx = build_chain_complex(&c, 2, DEFAULT_BUDGET).unwrap();
        let m = chain_g_action(&a, &cx).unwrap();
        let co = coinvariants(&cx, &m).unwrap();
        assert!(co.well_defined.passed);
        // Λ_G = span{1}
        assert_eq!(co.chain_dims[0], 1);
        // HH_0 = Λ with x ↦ −x, HH_1 spanned by 1⊗x ↦ −1⊗x: coinvariants 1 and 0
        assert_eq!(&co.homology[..2], &[1, 0]);
        assert_eq!(co.homology, co.homology_coinvariants);
    }
}
