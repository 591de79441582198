use std::sync::Arc;

use super::LinCat;
use crate::error::{Error, Result};
use crate::group::FinGroup;

/// A category whose basis morphisms carry degrees in a finite group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedLinCat {
    pub cat: LinCat,
    pub group: Arc<FinGroup>,
    pub degrees: Vec<usize>,
}

impl GradedLinCat {
    pub fn new(cat: LinCat, group: Arc<FinGroup>, degrees: Vec<usize>) -> Result<Self> {
        if degrees.len() != cat.num_morphisms() || degrees.iter().any(|&d| d >= group.order()) {
            return Err(Error::Malformed(
                "every basis morphism needs a degree in the group".into(),
            ));
        }
        Ok(GradedLinCat {
            cat,
            group,
            degrees,
        })
    }

    /// Every morphism in degree 1.
    pub fn trivially(cat: LinCat, group: Arc<FinGroup>) -> Self {
        let degrees = vec![group.identity(); cat.num_morphisms()];
        GradedLinCat {
            cat,
            group,
            degrees,
        }
    }

    #[inline]
    pub fn degree(&self, f: usize) -> usize {
        self.degrees[f]
    }
}

/// Checks that composites stay in the product degree and identities sit in degree 1.
pub fn validate_grading(b: &GradedLinCat) -> Result<()> {
    let c = &b.cat;
    let g = &b.group;
    for x in 0..c.num_objects() {
        if let Some((m, _)) = c.identity(x).iter().find(|(m, _)| b.degree(*m) != g.identity()) {
            return Err(Error::GradingLeak(format!(
                "identity of {} involves {} of degree {}",
                c.object_name(x),
                c.morphism(*m).name,
                g.name(b.degree(*m))
            )));
        }
    }
    for ((h, f), comb) in c.composition_table() {
        let want = g.mul(b.degree(h), b.degree(f));
        if let Some((m, _)) = comb.iter().find(|(m, _)| b.degree(*m) != want) {
            return Err(Error::GradingLeak(format!(
                "{} ∘ {} (degrees {}·{} = {}) involves {} of degree {}",
                c.morphism(h).name,
                c.morphism(f).name,
                g.name(b.degree(h)),
                g.name(b.degree(f)),
                g.name(want),
                c.morphism(*m).name,
                g.name(b.degree(*m))
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::linalg::Field;

    #[test]
    fn degree_one_everywhere_is_fine() {
        let c = fixtures::dual_numbers(Field::Rational);
        let b = GradedLinCat::trivially(c, Arc::new(FinGroup::c2()));
        validate_grading(&b).unwrap();
    }

    #[test]
    fn idempotent_of_odd_degree_leaks() {
        let b = fixtures::corrupt_grading_leak(Field::Prime(101));
        assert!(matches!(validate_grading(&b), Err(Error::GradingLeak(_))));
    }

    #[test]
    fn group_algebra_grading_is_consistent() {
        // x∘x = 1 with deg x = σ is kC2: no leak
        let f = Field::Prime(101);
        let mut bld = LinCat::builder(f);
        let o = bld.object("o");
        let one = bld.morphism("1", o, o);
        let x = bld.morphism("x", o, o);
        bld.identity(o, vec![(one, f.one())]);
        bld.compose(one, one, vec![(one, f.one())]);
        bld.compose(one, x, vec![(x, f.one())]);
        bld.compose(x, one, vec![(x, f.one())]);
        bld.compose(x, x, vec![(one, f.one())]);
        let b = GradedLinCat::new(bld.build().unwrap(), Arc::new(FinGroup::c2()), vec![0, 1]).unwrap();
        validate_grading(&b).unwrap();
    }
}
