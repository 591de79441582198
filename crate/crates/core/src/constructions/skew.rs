use std::sync::Arc;

use crate::error::Result;
use crate::lincat::{GActionOnCat, GradedLinCat, LinCat, LinFunctor};
use crate::linalg::LinComb;

/// The skew category `C[G]` and, for each of its basis morphisms `[f]^s`, the pair `(f, s)`.
#[derive(Clone, Debug)]
pub struct SkewOutput {
    pub graded: GradedLinCat,
    pub provenance: Vec<(usize, usize)>,
}

impl SkewOutput {
    /// Id of `[f]^s`; basis morphisms are ordered by `(s, f)`.
    #[inline]
    pub fn id(&self, f: usize, s: usize) -> usize {
        s * self.base_morphisms() + f
    }

    pub fn base_morphisms(&self) -> usize {
        self.provenance.len() / self.graded.group.order()
    }

    pub fn cat(&self) -> &LinCat {
        &self.graded.cat
    }
}

/// Builds `C[G]`: same objects, `hom(x, y) = ⊕_s hom_C(sx, y)` with `[f]^s` in degree
/// `s`, composition `[g]^t ∘ [f]^s = [g ∘ (t·f)]^{ts}` and identities `[id_x]^1`.
pub fn skew(c: &LinCat, a: &GActionOnCat) -> Result<SkewOutput> {
    let g = a.group();
    let nm = c.num_morphisms();
    let mut b = LinCat::builder(c.field());
    for o in c.objects() {
        b.object(o.clone());
    }
    let mut provenance = Vec::with_capacity(nm * g.order());
    let mut degrees = Vec::with_capacity(nm * g.order());
    let mut src = Vec::with_capacity(nm * g.order());
    for s in g.elements() {
        for f in 0..nm {
            let m = c.morphism(f);
            let x = a.act_obj(g.inv(s), m.src);
            b.morphism(format!("[{}]^{}", m.name, g.name(s)), x, m.tgt);
            provenance.push((f, s));
            degrees.push(s);
            src.push(x);
        }
    }
    for x in 0..c.num_objects() {
        let id = c
            .identity(x)
            .iter()
            .map(|(m, coef)| (g.identity() * nm + m, coef.clone()))
            .collect();
        b.identity(x, id);
    }
    for t in g.elements() {
        for gm in 0..nm {
            let y = src[t * nm + gm];
            let unit_g: LinComb = vec![(gm, c.field().one())];
            for s in g.elements() {
                let ts = g.mul(t, s);
                for f in c.hom_targets(y) {
                    let comb = c.compose(&unit_g, a.act(t, f));
                    if comb.is_empty() {
                        continue;
                    }
                    let comb = comb.into_iter().map(|(k, v)| (ts * nm + k, v)).collect();
                    b.compose(t * nm + gm, s * nm + f, comb);
                }
            }
        }
    }
    let cat = b.build()?;
    let graded = GradedLinCat::new(cat, Arc::clone(g), degrees)?;
    Ok(SkewOutput { graded, provenance })
}

/// `F[G]: C[G] → D[G]`, `[f]^s ↦ [F f]^s`, for a functor commuting with the actions.
/// Functoriality of the result is validated, so a non-equivariant `F` is rejected.
pub fn skew_of_functor(f: &LinFunctor, sc: &SkewOutput, sd: &SkewOutput) -> Result<LinFunctor> {
    let (nc, nd) = (sc.base_morphisms(), sd.base_morphisms());
    let mor_map = sc
        .provenance
        .iter()
        .map(|&(m, s)| {
            f.mor_map[m]
                .iter()
                .map(|(h, coef)| (s * nd + h, coef.clone()))
                .collect()
        })
        .collect();
    debug_assert_eq!(sc.provenance.len(), nc * sc.graded.group.order());
    let mut out = LinFunctor::new(sc.cat(), sd.cat(), f.obj_map.clone(), mor_map)?;
    // isomorphisms φ witnessing density of F lift to [φ]^1
    if f.is_dense() {
        out.mark_dense();
    }
    Ok(out)
}

impl LinCat {
    /// Basis morphisms whose target is `y`, in id order.
    pub(crate) fn hom_targets(&self, y: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_objects()).flat_map(move |x| self.hom(x, y).iter().copied())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::group::FinGroup;
    use crate::lincat::{algebra_of, validate_category, validate_grading};
    use crate::linalg::Field;

    #[test]
    fn trivial_group_gives_back_c() {
        let c = fixtures::dual_numbers(Field::Rational);
        let a = GActionOnCat::trivial(&c, Arc::new(FinGroup::trivial()));
        let sk = skew(&c, &a).unwrap();
        assert_eq!(sk.cat().hom_dims(), c.hom_dims());
        assert!(sk.graded.degrees.iter().all(|&d| d == 0));
        validate_category(sk.cat()).unwrap();
    }

    #[test]
    fn dual_numbers_skew() {
        let f = Field::Prime(101);
        let (c, a) = fixtures::dual_numbers_c2(f);
        let sk = skew(&c, &a).unwrap();
        validate_category(sk.cat()).unwrap();
        validate_grading(&sk.graded).unwrap();
        // dim end = |G| · dim Λ
        assert_eq!(sk.cat().hom_dim(0, 0), 4);
        // [x]^σ ∘ [x]^σ = [x ∘ (−x)]^1 = 0
        let xs = sk.id(1, 1);
        assert!(sk.cat().compose_basis(xs, xs).is_empty());
        // [1]^σ ∘ [x]^1 = [σ·x]^σ = −[x]^σ
        assert_eq!(sk.cat().compose_basis(sk.id(0, 1), sk.id(1, 0)), &[(xs, f.from_i64(-1))]);
        assert_eq!(algebra_of(sk.cat()).identity(0), &vec![(sk.id(0, 0), f.one())]);
    }

    #[test]
    fn skew_group_algebra_law() {
        // Λ[G] = Λ ⊗ kG with (a ⊗ s)(b ⊗ t) = a (s·b) ⊗ st, on every basis pair
        let f = Field::Rational;
        let s3 = Arc::new(FinGroup::symmetric(3));
        let (c, a) = fixtures::group_algebra_conjugation(f, s3.clone());
        let sk = skew(&c, &a).unwrap();
        validate_category(sk.cat()).unwrap();
        let n = c.num_morphisms();
        for t in s3.elements() {
            for g in 0..n {
                for s in s3.elements() {
                    for h in 0..n {
                        let expect: LinComb = c
                            .compose(&vec![(g, f.one())], a.act(t, h))
                            .into_iter()
                            .map(|(k, v)| (sk.id(k, s3.mul(t, s)), v))
                            .collect();
                        assert_eq!(sk.cat().compose_basis(sk.id(g, t), sk.id(h, s)), expect.as_slice());
                    }
                }
            }
        }
    }

    #[test]
    fn skew_hom_dimensions() {
        let f = Field::Prime(101);
        let (c, a) = fixtures::two_object_swap_c2(f, false);
        let sk = skew(&c, &a).unwrap();
        for x in 0..2 {
            for y in 0..2 {
                let expect: usize = a.group().elements().map(|s| c.hom_dim(a.act_obj(s, x), y)).sum();
                assert_eq!(sk.cat().hom_dim(x, y), expect);
            }
        }
    }
}
