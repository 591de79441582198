use crate::error::Result;
use crate::group::GSetAction;
use crate::lincat::{GActionOnCat, LinCat, LinFunctor};

/// `M_G(C)` with its free action and the equivalence `L: M_G(C) → C`.
#[derive(Clone, Debug)]
pub struct MatrixCatOutput {
    pub cat: LinCat,
    pub action: GActionOnCat,
    pub functor_l: LinFunctor,
}

/// Builds `M_G(C)`: objects `G × C₀` ordered by `(s, x)`, `hom((s,x),(t,y))` a copy of
/// `hom_C(x, y)`, action `r·(s,x) = (rs, rx)` with `r` acting on the copied morphism
/// as on `C`, and `L(s, x) = x`.
pub fn matrix_category(c: &LinCat, a: &GActionOnCat) -> Result<MatrixCatOutput> {
    let g = a.group();
    let (n, nm, order) = (c.num_objects(), c.num_morphisms(), g.order());
    let obj = |s: usize, x: usize| s * n + x;
    let mor = |s: usize, t: usize, f: usize| (s * order + t) * nm + f;
    let mut b = LinCat::builder(c.field());
    for s in g.elements() {
        for x in 0..n {
            b.object(format!("({},{})", g.name(s), c.object_name(x)));
        }
    }
    for s in g.elements() {
        for t in g.elements() {
            for f in 0..nm {
                let m = c.morphism(f);
                b.morphism(
                    format!("{}_({},{})", m.name, g.name(s), g.name(t)),
                    obj(s, m.src),
                    obj(t, m.tgt),
                );
            }
        }
    }
    for s in g.elements() {
        for x in 0..n {
            let id = c.identity(x).iter().map(|(m, v)| (mor(s, s, *m), v.clone())).collect();
            b.identity(obj(s, x), id);
        }
    }
    for ((h, f), comb) in c.composition_table() {
        for s in g.elements() {
            for t in g.elements() {
                for u in g.elements() {
                    let out = comb.iter().map(|(m, v)| (mor(s, u, *m), v.clone())).collect();
                    b.compose(mor(t, u, h), mor(s, t, f), out);
                }
            }
        }
    }
    let cat = b.build()?;
    let perms = g
        .elements()
        .map(|r| {
            (0..order * n)
                .map(|o| obj(g.mul(r, o / n), a.act_obj(r, o % n)))
                .collect()
        })
        .collect();
    let objects = GSetAction::new(g.clone(), perms)?;
    let morphisms = g
        .elements()
        .map(|r| {
            (0..order * order * nm)
                .map(|id| {
                    let (st, f) = (id / nm, id % nm);
                    let (s, t) = (st / order, st % order);
                    let (rs, rt) = (g.mul(r, s), g.mul(r, t));
                    a.act(r, f).iter().map(|(h, v)| (mor(rs, rt, *h), v.clone())).collect()
                })
                .collect()
        })
        .collect();
    let action = GActionOnCat::new(&cat, objects, morphisms)?;
    let one = c.field().one();
    let functor_l = LinFunctor::new(
        &cat,
        c,
        (0..order * n).map(|o| o % n).collect(),
        (0..order * order * nm).map(|id| vec![(id % nm, one.clone())]).collect(),
    )?;
    Ok(MatrixCatOutput {
        cat,
        action,
        functor_l,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::constructions::require_free;
    use crate::fixtures;
    use crate::group::{orbits_transversal, FinGroup};
    use crate::lincat::{algebra_of, validate_action, validate_category};
    use crate::linalg::Field;

    #[test]
    fn trivial_group_is_identity() {
        let c = fixtures::dual_numbers(Field::Rational);
        let a = GActionOnCat::trivial(&c, Arc::new(FinGroup::trivial()));
        let m = matrix_category(&c, &a).unwrap();
        assert_eq!(m.cat.hom_dims(), c.hom_dims());
        assert!(m.functor_l.is_fully_faithful() && m.functor_l.is_dense());
    }

    #[test]
    fn dual_numbers_c2() {
        let f = Field::Prime(101);
        let (c, a) = fixtures::dual_numbers_c2(f);
        let m = matrix_category(&c, &a).unwrap();
        validate_category(&m.cat).unwrap();
        validate_action(&m.cat, &m.action).unwrap();
        assert_eq!(m.cat.num_objects(), 2);
        assert!(m.cat.hom_dims().iter().flatten().all(|&d| d == 2));
        assert_eq!(algebra_of(&m.cat).total_dim(), 4 * 2);
        assert_eq!(m.action.on_objects().perm(1), &[1, 0]);
        let (_, free) = orbits_transversal(m.action.on_objects(), None);
        assert!(free);
        require_free(&m.action, m.cat.objects()).unwrap();
        assert!(m.functor_l.is_fully_faithful() && m.functor_l.is_dense());
    }
}
