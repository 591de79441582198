use super::LinCat;
use crate::error::{Error, Result};
use crate::linalg::{LinComb, Matrix};

/// A linear functor between finite categories, given on objects and basis morphisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinFunctor {
    pub obj_map: Vec<usize>,
    pub mor_map: Vec<LinComb>,
    fully_faithful: bool,
    dense: bool,
}

impl LinFunctor {
    /// Validates functoriality (identities and all composable basis pairs) and records
    /// whether the functor is fully faithful and surjective on objects.
    pub fn new(src: &LinCat, tgt: &LinCat, obj_map: Vec<usize>, mor_map: Vec<LinComb>) -> Result<Self> {
        if obj_map.len() != src.num_objects() || obj_map.iter().any(|&y| y >= tgt.num_objects()) {
            return Err(Error::Functor("object map has the wrong shape".into()));
        }
        if mor_map.len() != src.num_morphisms() {
            return Err(Error::Functor("morphism map has the wrong length".into()));
        }
        for (f, img) in mor_map.iter().enumerate() {
            let m = src.morphism(f);
            let (fx, fy) = (obj_map[m.src], obj_map[m.tgt]);
            if let Some((h, _)) = img
                .iter()
                .find(|(h, _)| (tgt.morphism(*h).src, tgt.morphism(*h).tgt) != (fx, fy))
            {
                return Err(Error::Functor(format!(
                    "F({}) involves {} outside hom({}, {})",
                    m.name,
                    tgt.morphism(*h).name,
                    tgt.object_name(fx),
                    tgt.object_name(fy)
                )));
            }
        }
        let mut functor = LinFunctor {
            obj_map,
            mor_map,
            fully_faithful: false,
            dense: false,
        };
        for x in 0..src.num_objects() {
            let img = functor.map_comb(src.identity(x));
            if &img != tgt.identity(functor.obj_map[x]) {
                return Err(Error::Functor(format!(
                    "F(id_{}) = {} is not an identity",
                    src.object_name(x),
                    tgt.describe_comb(&img)
                )));
            }
        }
        for f in 0..src.num_morphisms() {
            let y = src.morphism(f).tgt;
            for z in 0..src.num_objects() {
                for &g in src.hom(y, z) {
                    let lhs = functor.map_comb(&src.compose_basis(g, f).to_vec());
                    let rhs = tgt.compose(&functor.mor_map[g], &functor.mor_map[f]);
                    if lhs != rhs {
                        return Err(Error::Functor(format!(
                            "F({g} ∘ {f}) = {} but F{g} ∘ F{f} = {}",
                            tgt.describe_comb(&lhs),
                            tgt.describe_comb(&rhs),
                            g = src.morphism(g).name,
                            f = src.morphism(f).name
                        )));
                    }
                }
            }
        }
        let n = src.num_objects();
        functor.fully_faithful = (0..n).all(|x| {
            (0..n).all(|y| {
                let m = functor.hom_matrix(src, tgt, x, y);
                m.rows() == m.cols() && m.rank() == m.rows()
            })
        });
        let mut hit = vec![false; tgt.num_objects()];
        for &y in &functor.obj_map {
            hit[y] = true;
        }
        functor.dense = hit.into_iter().all(|h| h);
        Ok(functor)
    }

    pub fn identity(c: &LinCat) -> Self {
        let one = c.field().one();
        LinFunctor::new(
            c,
            c,
            (0..c.num_objects()).collect(),
            (0..c.num_morphisms()).map(|f| vec![(f, one.clone())]).collect(),
        )
        .expect("identity functor")
    }

    pub fn is_fully_faithful(&self) -> bool {
        self.fully_faithful
    }

    /// Dense: every target object is isomorphic to an image object. Surjectivity on
    /// objects is detected automatically; other witnesses are recorded by the caller.
    pub fn is_dense(&self) -> bool {
        self.dense
    }

    pub(crate) fn mark_dense(&mut self) {
        self.dense = true;
    }

    pub fn map_comb(&self, comb: &LinComb) -> LinComb {
        let mut acc = std::collections::BTreeMap::new();
        for (f, c) in comb {
            for (h, d) in &self.mor_map[*f] {
                crate::linalg::accumulate(&mut acc, *h, c * d);
            }
        }
        crate::linalg::into_comb(acc)
    }

    /// Matrix of `F: hom(x, y) → hom(Fx, Fy)`.
    pub fn hom_matrix(&self, src: &LinCat, tgt: &LinCat, x: usize, y: usize) -> Matrix {
        src.hom_map_matrix(tgt, (x, y), (self.obj_map[x], self.obj_map[y]), |f| {
            &self.mor_map[f]
        })
    }

    /// Inverse of the hom matrix; fails unless `F` is bijective on `hom(x, y)`.
    pub fn inverse_hom_matrix(&self, src: &LinCat, tgt: &LinCat, x: usize, y: usize) -> Result<Matrix> {
        let m = self.hom_matrix(src, tgt, x, y);
        if m.rows() == 0 && m.cols() == 0 {
            return Ok(m);
        }
        m.inverse().ok_or_else(|| {
            Error::NotFullyFaithful(format!(
                "hom({}, {}) → hom({}, {}) is not bijective",
                src.object_name(x),
                src.object_name(y),
                tgt.object_name(self.obj_map[x]),
                tgt.object_name(self.obj_map[y])
            ))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::linalg::Field;

    #[test]
    fn identity_functor_is_an_equivalence() {
        let c = fixtures::dual_numbers(Field::Prime(7));
        let id = LinFunctor::identity(&c);
        assert!(id.is_fully_faithful() && id.is_dense());
    }

    #[test]
    fn functor_laws_and_faithfulness() {
        // x ↦ 1 breaks x∘x = 0; x ↦ 0 is a functor but not faithful
        let f = Field::Prime(7);
        let c = fixtures::dual_numbers(f);
        let bad = LinFunctor::new(
            &c,
            &c,
            vec![0],
            vec![vec![(0, f.one())], vec![(0, f.one())]],
        );
        assert!(matches!(bad, Err(Error::Functor(_))));
        let collapse = LinFunctor::new(&c, &c, vec![0], vec![vec![(0, f.one())], vec![]]).unwrap();
        assert!(!collapse.is_fully_faithful());
    }
}
