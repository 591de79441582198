use std::collections::HashMap;

use rayon::prelude::*;

use super::cup::{cup, Cochain, CupSampler};
use super::{apply, CochainComplex};
use crate::check::Check;
use crate::error::Result;
use crate::hochschild::expand;
use crate::lincat::{LinCat, LinFunctor};
use crate::linalg::{accumulate, into_comb, LinComb, Matrix};

/// The cochain map `C^•(D) → C^•(C)` induced by a fully faithful `F: C → D`.
#[derive(Clone, Debug)]
pub struct Restriction {
    /// `maps[n]: C^n(D) → C^n(C)`.
    pub maps: Vec<Matrix>,
    pub checks: Vec<Check>,
}

/// `R(φ)(f_n ⊗ ⋯ ⊗ f_1) = F⁻¹(φ(Ff_n ⊗ ⋯ ⊗ Ff_1))`. Checks that `R` commutes with the
/// coboundary and with cup products on `samples` sampled pairs, and, when `F` is dense,
/// that `R` is bijective on cohomology through `n_max`.
pub fn restrict_along_functor(
    f: &LinFunctor,
    c: &LinCat,
    d: &LinCat,
    cc: &CochainComplex,
    cd: &CochainComplex,
    samples: usize,
    seed: u64,
) -> Result<Restriction> {
    let field = c.field();
    let mut inverses = HashMap::new();
    for x in 0..c.num_objects() {
        for y in 0..c.num_objects() {
            inverses.insert((x, y), f.inverse_hom_matrix(c, d, x, y)?);
        }
    }
    let maps = (0..=cc.top())
        .map(|n| {
            let (bc, bd) = (cc.basis(n), cd.basis(n));
            let rows: Vec<LinComb> = bc
                .keys()
                .par_iter()
                .map(|key| {
                    let (x, y) = (key.start, key.end(c));
                    let inv = &inverses[&(x, y)];
                    let gi = c.position(key.out);
                    let (fx, fy) = (f.obj_map[x], f.obj_map[y]);
                    let factors: Vec<&LinComb> = key.path.iter().map(|&m| &f.mor_map[m]).collect();
                    let mut acc = std::collections::BTreeMap::new();
                    for (path, coef) in expand(field, &factors) {
                        for (hi, &h) in d.hom(fx, fy).iter().enumerate() {
                            let e = inv.get(gi, hi);
                            if e.is_zero() {
                                continue;
                            }
                            let j = bd.index(d, fx, &path, h).expect("image path lies in D");
                            accumulate(&mut acc, j, &coef * &e);
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
            Matrix::from_triplets(field, bc.len(), bd.len(), triplets)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut checks = vec![chain_map_check("restriction commutes with d", &maps, cd, cc)];
    let mut sampler = CupSampler::new(seed);
    let mut cup_ok = None;
    let pairs: Vec<(usize, usize)> = (0..=cd.top()).flat_map(|p| (0..=cd.top() - p).map(move |q| (p, q))).collect();
    let r = |phi: &Cochain| Cochain {
        degree: phi.degree,
        coords: apply(&maps[phi.degree], &phi.coords),
    };
    for k in 0..samples {
        let (p, q) = pairs[k % pairs.len()];
        let (Some(psi), Some(phi)) = (sampler.elementary(d, cd, p), sampler.elementary(d, cd, q)) else {
            continue;
        };
        if r(&cup(d, cd, &psi, &phi)?) != cup(c, cc, &r(&psi), &r(&phi))? {
            cup_ok = Some(format!(
                "E({}) ⌣ E({})",
                cd.basis(p).key(psi.coords[0].0).describe(d),
                cd.basis(q).key(phi.coords[0].0).describe(d)
            ));
            break;
        }
    }
    checks.push(Check::from_witness("restriction respects cup products", cup_ok));
    if f.is_dense() {
        checks.push(quasi_iso_check("restriction is a quasi-isomorphism", &maps, cd, cc));
    }
    Ok(Restriction { maps, checks })
}

/// `maps[n+1] d_src = d_tgt maps[n]` for every stored degree.
pub fn chain_map_check(name: &str, maps: &[Matrix], src: &CochainComplex, tgt: &CochainComplex) -> Check {
    for n in 0..src.top() {
        let lhs = maps[n + 1].mul(src.coboundary(n)).expect("shapes");
        let rhs = tgt.coboundary(n).mul(&maps[n]).expect("shapes");
        if lhs != rhs {
            return Check::fail(name, format!("degree {n}"));
        }
    }
    Check::pass(name)
}

/// A cochain map induces isomorphisms `H^n(src) → H^n(tgt)` for `n ≤ n_max`: the image
/// of the cocycles together with the coboundaries spans the target cocycles, and both
/// sides have the same dimension.
pub fn quasi_iso_check(name: &str, maps: &[Matrix], src: &CochainComplex, tgt: &CochainComplex) -> Check {
    let (hs, ht) = (src.cohomology_dims(), tgt.cohomology_dims());
    if hs != ht {
        return Check::fail(name, format!("dimensions {hs:?} vs {ht:?}"));
    }
    for n in 0..=src.n_max() {
        let z_src = src.coboundary(n).kernel_matrix();
        let z_tgt = tgt.coboundary(n).kernel_matrix();
        let img = maps[n].mul(&z_src).expect("shapes");
        let rows = tgt.basis(n).len();
        let both = if n == 0 {
            img
        } else {
            Matrix::hstack(tgt.field(), rows, &[&img, tgt.coboundary(n - 1)]).expect("same height")
        };
        if both.rank() != z_tgt.cols() {
            return Check::fail(name, format!("not surjective on H^{n}"));
        }
    }
    Check::pass(name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::all_passed;
    use crate::cohomology::build_cochain_complex;
    use crate::constructions::matrix_category;
    use crate::fixtures;
    use crate::linalg::Field;

    const P: Field = Field::Prime(101);

    #[test]
    fn identity_restriction_is_identity() {
        let c = fixtures::dual_numbers(P);
        let cx = build_cochain_complex(&c, 2, 10_000).unwrap();
        let r = restrict_along_functor(&LinFunctor::identity(&c), &c, &c, &cx, &cx, 20, 0).unwrap();
        assert!(all_passed(&r.checks), "{:?}", r.checks);
        for m in &r.maps {
            assert_eq!(m, &Matrix::identity(P, m.rows()));
        }
    }

    #[test]
    fn along_l_for_dual_numbers() {
        let (c, a) = fixtures::dual_numbers_c2(P);
        let m = matrix_category(&c, &a).unwrap();
        let cc = build_cochain_complex(&c, 2, 10_000).unwrap();
        let cm = build_cochain_complex(&m.cat, 2, 10_000).unwrap();
        // R: C^•(C) → C^•(M_G(C)) along L
        let r = restrict_along_functor(&m.functor_l, &m.cat, &c, &cm, &cc, 30, 5).unwrap();
        assert!(all_passed(&r.checks), "{:?}", r.checks);
        assert_eq!(cm.cohomology_dims(), cc.cohomology_dims());
    }
}
