use rayon::prelude::*;

use super::action::{cochain_g_action, invariants};
use super::cup::{cup, Cochain, CupSampler};
use super::{build_cochain_complex, class_subcomplex, cochain_class_element, CochainComplex};
use crate::check::Check;
use crate::constructions::{require_free, skew, transversal_subcategory, TransversalOutput};
use crate::error::{Error, Result};
use crate::group::{conjugacy_classes, Transversal};
use crate::hochschild::expand;
use crate::lincat::{GActionOnCat, LinCat};
use crate::linalg::{accumulate, into_comb, LinComb, Matrix};

/// The mutually inverse cochain maps between `(C^•(C))^G` and `C^•_{1}(C_T[G])`.
#[derive(Clone, Debug)]
pub struct CochainIso {
    /// `a[n]: C^n(C) → C^n_{1}(C_T[G])`.
    pub a: Vec<Matrix>,
    /// `b[n]: C^n_{1}(C_T[G]) → C^n(C)`, landing in the invariants.
    pub b: Vec<Matrix>,
    pub checks: Vec<Check>,
    /// `dim H^n((C^•(C))^G)` for `n ≤ n_max`.
    pub invariant_cohomology: Vec<usize>,
    /// `dim HH^n_{1}(C_T[G])` for `n ≤ n_max`.
    pub transversal_cohomology: Vec<usize>,
}

fn zero_witness(m: &Matrix, describe: impl Fn(usize, usize) -> String) -> Option<String> {
    m.first_nonzero().map(|(i, j)| describe(i, j))
}

/// Builds `A`, `B` through `n_max + 1` for a free action and verifies `dA = Ad` on
/// invariants, `AB = id`, `BA = id` on invariants, `B` lands in invariants, the
/// dimension equality, and `A(ψ′ ⌣ ψ) = Aψ′ ⌣ Aψ` on `samples` random invariant pairs.
pub fn transversal_cochain_iso(
    c: &LinCat,
    a: &GActionOnCat,
    t: &Transversal,
    n_max: usize,
    budget: usize,
    samples: usize,
    seed: u64,
) -> Result<CochainIso> {
    require_free(a, c.objects())?;
    let g = a.group();
    let field = c.field();
    let sk = skew(c, a)?;
    let tr: TransversalOutput = transversal_subcategory(&sk, a, t)?;
    let tc = &tr.graded.cat;
    let mut to_t = vec![usize::MAX; sk.provenance.len()];
    for (k, &sid) in tr.provenance.iter().enumerate() {
        to_t[sid] = k;
    }
    let cx = build_cochain_complex(c, n_max, budget)?;
    let t_full = build_cochain_complex(tc, n_max, budget)?;
    let one = conjugacy_classes(g).remove(0);
    let tx: CochainComplex = class_subcomplex(&t_full, &tr.graded, &one)?;
    let class_one: Vec<Vec<usize>> = t_full.positions(|k| cochain_class_element(&tr.graded, k) == g.identity());
    let m = cochain_g_action(c, a, &cx)?;
    let inv = invariants(&cx, &m)?;

    // A on the full transversal basis; rows outside the trivial class stay zero
    let mut a_full = Vec::new();
    let mut b_mats = Vec::new();
    for n in 0..=cx.top() {
        let (cb, tb) = (cx.basis(n), t_full.basis(n));
        let rows: Vec<LinComb> = tb
            .keys()
            .par_iter()
            .map(|key| {
                let parts: Vec<(usize, usize)> = key.path.iter().map(|&k| sk.provenance[tr.provenance[k]]).collect();
                let (g0, deg_out) = sk.provenance[tr.provenance[key.out]];
                let mut suffix = vec![g.identity(); n + 1];
                for i in (0..n.saturating_sub(1)).rev() {
                    suffix[i] = g.mul(suffix[i + 1], parts[i + 1].1);
                }
                let total = g.product(parts.iter().rev().map(|p| p.1));
                if total != deg_out {
                    return LinComb::new();
                }
                let start = a.act_obj(total, tr.objects[key.start]);
                let factors: Vec<&LinComb> = (0..n).map(|i| a.act(suffix[i], parts[i].0)).collect();
                let mut acc = std::collections::BTreeMap::new();
                for (path, coef) in expand(field, &factors) {
                    let j = cb.index(c, start, &path, g0).expect("twisted path lies in C");
                    accumulate(&mut acc, j, coef);
                }
                into_comb(acc)
            })
            .collect();
        let triplets: Vec<_> = rows
            .into_iter()
            .enumerate()
            .flat_map(|(i, r)| r.into_iter().map(move |(j, v)| (i, j, v)))
            .collect();
        a_full.push(Matrix::from_triplets(field, tb.len(), cb.len(), triplets)?);

        let rows = cb
            .keys()
            .par_iter()
            .map(|key| {
                let mut objs = vec![key.start];
                objs.extend(key.path.iter().map(|&f| c.morphism(f).tgt));
                let s: Vec<usize> = objs.iter().map(|&x| t.witness(x)).collect();
                let factors: Vec<LinComb> = (0..n)
                    .map(|i| {
                        let si = g.inv(s[i + 1]);
                        let deg = g.mul(si, s[i]);
                        a.act(si, key.path[i]).iter().map(|(m, v)| (to_t[sk.id(*m, deg)], v.clone())).collect()
                    })
                    .collect();
                let refs: Vec<&LinComb> = factors.iter().collect();
                let u1 = t.position(t.rep(objs[0])).expect("representative");
                let last = s[n];
                let tw = g.mul(g.inv(last), s[0]);
                let (from, to) = (a.act_obj(tw, t.rep(objs[0])), t.rep(objs[n]));
                let mut acc = std::collections::BTreeMap::new();
                for (path, coef) in expand(field, &refs) {
                    for &h in c.hom(from, to) {
                        let Some((_, v)) = a.act(last, h).iter().find(|(mm, _)| *mm == key.out) else {
                            continue;
                        };
                        let k = super::CochainKey {
                            start: u1,
                            path: path.clone(),
                            out: to_t[sk.id(h, tw)],
                        };
                        let j = tx.basis(n).index_of(&k).ok_or_else(|| {
                            Error::ClassLeak(format!("B meets {} outside the trivial class", k.describe(tc)))
                        })?;
                        accumulate(&mut acc, j, &coef * v);
                    }
                }
                Ok(into_comb(acc))
            })
            .collect::<Result<Vec<LinComb>>>()?;
        let triplets: Vec<_> = rows
            .into_iter()
            .enumerate()
            .flat_map(|(i, r)| r.into_iter().map(move |(j, v)| (i, j, v)))
            .collect();
        b_mats.push(Matrix::from_triplets(field, cb.len(), tx.basis(n).len(), triplets)?);
    }
    let a_mats: Vec<Matrix> = a_full.iter().zip(&class_one).map(|(m, rows)| m.select_rows(rows)).collect();

    let mut lands = None;
    let mut ab = None;
    let mut ba = None;
    let mut commutes = None;
    for n in 0..=cx.top() {
        let id_c = Matrix::identity(field, cx.basis(n).len());
        for ms in &m {
            if lands.is_none() {
                lands = zero_witness(&ms[n].sub(&id_c)?.mul(&b_mats[n])?, |_, j| {
                    format!("B(E({})) is not invariant", tx.basis(n).key(j).describe(tc))
                });
            }
        }
        if ab.is_none() {
            let diff = a_mats[n].mul(&b_mats[n])?.sub(&Matrix::identity(field, tx.basis(n).len()))?;
            ab = zero_witness(&diff, |_, j| format!("AB(E({})) ≠ E(…)", tx.basis(n).key(j).describe(tc)));
        }
        if ba.is_none() {
            let diff = b_mats[n].mul(&a_mats[n])?.sub(&id_c)?.mul(&inv.spans[n])?;
            ba = zero_witness(&diff, |_, j| format!("degree {n}: BA moves invariant basis vector {j}"));
        }
        if n < cx.top() && commutes.is_none() {
            let lhs = tx.coboundary(n).mul(&a_mats[n])?;
            let rhs = a_mats[n + 1].mul(cx.coboundary(n))?;
            commutes = zero_witness(&lhs.sub(&rhs)?.mul(&inv.spans[n])?, |_, j| {
                format!("degree {n}: dA ≠ Ad on invariant basis vector {j}")
            });
        }
    }

    let mut sampler = CupSampler::new(seed);
    let mut multiplicative = None;
    let degree_pairs: Vec<(usize, usize)> = (0..=cx.top())
        .flat_map(|p| (0..=cx.top() - p).map(move |q| (p, q)))
        .collect();
    let a_apply = |phi: &Cochain| Cochain {
        degree: phi.degree,
        coords: super::apply(&a_full[phi.degree], &phi.coords),
    };
    for k in 0..samples {
        let (p, q) = degree_pairs[k % degree_pairs.len()];
        let psi2 = sampler.combination(p, &inv.spans[p]);
        let psi = sampler.combination(q, &inv.spans[q]);
        let lhs = a_apply(&cup(c, &cx, &psi2, &psi)?);
        let rhs = cup(tc, &t_full, &a_apply(&psi2), &a_apply(&psi))?;
        if lhs != rhs {
            multiplicative = Some(format!("invariant cochains of degrees {p} and {q} (sample {k})"));
            break;
        }
    }

    let invariant_cohomology = inv.cohomology.clone();
    let transversal_cohomology = tx.cohomology_dims();
    let checks = vec![
        Check::from_witness("B lands in invariants", lands),
        Check::from_witness("A B = id", ab),
        Check::from_witness("B A = id on invariants", ba),
        Check::from_witness("d A = A d on invariants", commutes),
        Check::from_witness(format!("A multiplicative ({samples} sampled pairs)"), multiplicative),
        Check::equal(
            "dim H^n((C^•)^G) = dim HH^n_{1}(C_T[G])",
            format!("{invariant_cohomology:?}"),
            format!("{transversal_cohomology:?}"),
        ),
    ];
    Ok(CochainIso {
        a: a_mats,
        b: b_mats,
        checks,
        invariant_cohomology,
        transversal_cohomology,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::check::all_passed;
    use crate::constructions::matrix_category;
    use crate::fixtures;
    use crate::group::{orbits_transversal, FinGroup};
    use crate::linalg::Field;

    const P: Field = Field::Prime(101);
    const BUDGET: usize = 200_000;

    #[test]
    fn trivial_group() {
        let c = fixtures::dual_numbers(P);
        let a = GActionOnCat::trivial(&c, Arc::new(FinGroup::trivial()));
        let (t, _) = orbits_transversal(a.on_objects(), None);
        let iso = transversal_cochain_iso(&c, &a, &t, 1, BUDGET, 20, 1).unwrap();
        assert!(all_passed(&iso.checks), "{:?}", iso.checks);
        for m in &iso.a {
            assert_eq!(m, &Matrix::identity(P, m.rows()));
        }
    }

    #[test]
    fn swaps() {
        for off in [false, true] {
            let (c, a) = fixtures::two_object_swap_c2(P, off);
            let (t, _) = orbits_transversal(a.on_objects(), None);
            let iso = transversal_cochain_iso(&c, &a, &t, 2, BUDGET, 30, 2).unwrap();
            assert!(all_passed(&iso.checks), "{:?}", iso.checks);
            if !off {
                assert_eq!(iso.invariant_cohomology, vec![1, 0, 0]);
                assert_eq!((iso.a[0].rows(), iso.a[0].cols()), (1, 2));
            }
        }
    }

    #[test]
    fn matrix_category_of_dual_numbers() {
        let (d, da) = fixtures::dual_numbers_c2(P);
        let m = matrix_category(&d, &da).unwrap();
        let (t, _) = orbits_transversal(m.action.on_objects(), Some(&[1]));
        let iso = transversal_cochain_iso(&m.cat, &m.action, &t, 2, BUDGET, 30, 3).unwrap();
        assert!(all_passed(&iso.checks), "{:?}", iso.checks);
        assert_eq!(&iso.invariant_cohomology[..2], &[1, 1]);
    }
}
