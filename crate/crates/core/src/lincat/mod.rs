//! Finite k-linear categories given by a morphism basis and composition structure
//! constants, together with group actions, gradings and linear functors.

mod action;
mod functor;
mod graded;
pub mod json;

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::linalg::{accumulate, into_comb, Field, LinComb, Matrix, Scalar};

pub use action::{validate_action, GActionOnCat};
pub use functor::LinFunctor;
pub use graded::{validate_grading, GradedLinCat};

/// A basis morphism `src → tgt`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub name: String,
    pub src: usize,
    pub tgt: usize,
}

/// A finite k-linear category.
///
/// Every hom-space `hom(x, y)` has the basis `hom(x, y)` (morphism ids in input
/// order); composition is bilinear and determined by `comp` on basis pairs, with
/// absent pairs meaning zero. Identities are coefficient vectors, not necessarily
/// basis elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinCat {
    field: Field,
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    homs: Vec<Vec<usize>>,
    position: Vec<usize>,
    comp: HashMap<(usize, usize), LinComb>,
    identities: Vec<LinComb>,
}

/// Incremental construction of a [`LinCat`]; `build` performs the structural checks.
#[derive(Clone, Debug)]
pub struct LinCatBuilder {
    field: Field,
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<Option<LinComb>>,
    comp: Vec<((usize, usize), LinComb)>,
}

impl LinCatBuilder {
    pub fn new(field: Field) -> Self {
        LinCatBuilder {
            field,
            objects: Vec::new(),
            morphisms: Vec::new(),
            identities: Vec::new(),
            comp: Vec::new(),
        }
    }

    pub fn object(&mut self, name: impl Into<String>) -> usize {
        self.objects.push(name.into());
        self.identities.push(None);
        self.objects.len() - 1
    }

    pub fn morphism(&mut self, name: impl Into<String>, src: usize, tgt: usize) -> usize {
        self.morphisms.push(Morphism {
            name: name.into(),
            src,
            tgt,
        });
        self.morphisms.len() - 1
    }

    pub fn identity(&mut self, x: usize, comb: LinComb) -> &mut Self {
        self.identities[x] = Some(comb);
        self
    }

    /// Sets `g ∘ f`; repeated entries for the same pair are summed.
    pub fn compose(&mut self, g: usize, f: usize, comb: LinComb) -> &mut Self {
        self.comp.push(((g, f), comb));
        self
    }

    pub fn build(self) -> Result<LinCat> {
        let field = self.field;
        let n = self.objects.len();
        unique_names(self.objects.iter(), "object")?;
        unique_names(self.morphisms.iter().map(|m| &m.name), "morphism")?;
        let mut homs = vec![Vec::new(); n * n];
        let mut position = Vec::with_capacity(self.morphisms.len());
        for (id, m) in self.morphisms.iter().enumerate() {
            if m.src >= n || m.tgt >= n {
                return Err(Error::Malformed(format!(
                    "morphism {} has an endpoint outside the object list",
                    m.name
                )));
            }
            let hom = &mut homs[m.src * n + m.tgt];
            position.push(hom.len());
            hom.push(id);
        }
        let mut cat = LinCat {
            field,
            objects: self.objects,
            morphisms: self.morphisms,
            homs,
            position,
            comp: HashMap::new(),
            identities: Vec::with_capacity(n),
        };
        for (x, id) in self.identities.into_iter().enumerate() {
            let id = id.ok_or_else(|| {
                Error::Malformed(format!("object {} has no identity", cat.objects[x]))
            })?;
            let id = normalize(field, id, cat.morphisms.len())?;
            cat.check_in_hom(&id, x, x, || format!("identity of {}", cat.objects[x]))?;
            cat.identities.push(id);
        }
        let mut acc: BTreeMap<(usize, usize), BTreeMap<usize, Scalar>> = BTreeMap::new();
        for ((g, f), comb) in self.comp {
            let nm = cat.morphisms.len();
            if g >= nm || f >= nm {
                return Err(Error::Malformed("composition refers to an unknown morphism".into()));
            }
            if cat.morphisms[g].src != cat.morphisms[f].tgt {
                return Err(Error::Malformed(format!(
                    "composition {} ∘ {} given for non-composable morphisms",
                    cat.morphisms[g].name, cat.morphisms[f].name
                )));
            }
            let comb = normalize(field, comb, nm)?;
            let (x, z) = (cat.morphisms[f].src, cat.morphisms[g].tgt);
            cat.check_in_hom(&comb, x, z, || {
                format!(
                    "composite {} ∘ {}",
                    cat.morphisms[g].name, cat.morphisms[f].name
                )
            })?;
            let slot = acc.entry((g, f)).or_default();
            for (m, c) in comb {
                accumulate(slot, m, c);
            }
        }
        for (key, slot) in acc {
            if !slot.is_empty() {
                cat.comp.insert(key, into_comb(slot));
            }
        }
        Ok(cat)
    }
}

fn unique_names<'a>(names: impl Iterator<Item = &'a String>, kind: &str) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for name in names {
        if !seen.insert(name.as_str()) {
            return Err(Error::Malformed(format!("duplicate {kind} name {name:?}")));
        }
    }
    Ok(())
}

/// Sorts, merges duplicates, drops zeros, and checks the field and index range.
fn normalize(field: Field, comb: LinComb, bound: usize) -> Result<LinComb> {
    let mut acc = BTreeMap::new();
    for (m, c) in comb {
        if c.field() != field {
            return Err(Error::FieldMismatch(field.to_string(), c.field().to_string()));
        }
        if m >= bound {
            return Err(Error::Malformed(format!("morphism index {m} out of range")));
        }
        accumulate(&mut acc, m, c);
    }
    Ok(into_comb(acc))
}

impl LinCat {
    pub fn builder(field: Field) -> LinCatBuilder {
        LinCatBuilder::new(field)
    }

    fn check_in_hom(
        &self,
        comb: &LinComb,
        x: usize,
        y: usize,
        what: impl Fn() -> String,
    ) -> Result<()> {
        for (m, _) in comb {
            let mm = &self.morphisms[*m];
            if mm.src != x || mm.tgt != y {
                return Err(Error::Malformed(format!(
                    "{} uses {} which is not in hom({}, {})",
                    what(),
                    mm.name,
                    self.objects[x],
                    self.objects[y]
                )));
            }
        }
        Ok(())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_name(&self, x: usize) -> &str {
        &self.objects[x]
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn morphism(&self, f: usize) -> &Morphism {
        &self.morphisms[f]
    }

    pub fn morphism_index(&self, name: &str) -> Option<usize> {
        self.morphisms.iter().position(|m| m.name == name)
    }

    /// Basis of `hom(x, y)`.
    #[inline]
    pub fn hom(&self, x: usize, y: usize) -> &[usize] {
        &self.homs[x * self.objects.len() + y]
    }

    pub fn hom_dim(&self, x: usize, y: usize) -> usize {
        self.hom(x, y).len()
    }

    /// Index of `f` inside the basis of its hom-space.
    #[inline]
    pub fn position(&self, f: usize) -> usize {
        self.position[f]
    }

    pub fn identity(&self, x: usize) -> &LinComb {
        &self.identities[x]
    }

    /// `g ∘ f` on basis morphisms; empty when not composable or zero.
    #[inline]
    pub fn compose_basis(&self, g: usize, f: usize) -> &[(usize, Scalar)] {
        self.comp.get(&(g, f)).map_or(&[], Vec::as_slice)
    }

    /// Bilinear extension of composition.
    pub fn compose(&self, g: &LinComb, f: &LinComb) -> LinComb {
        let mut acc = BTreeMap::new();
        for (gi, gc) in g {
            for (fi, fc) in f {
                let coef = gc * fc;
                for (m, c) in self.compose_basis(*gi, *fi) {
                    accumulate(&mut acc, *m, &coef * c);
                }
            }
        }
        into_comb(acc)
    }

    /// Composition structure constants in deterministic order.
    pub fn composition_table(&self) -> Vec<((usize, usize), &LinComb)> {
        let mut out: Vec<_> = self.comp.iter().map(|(k, v)| (*k, v)).collect();
        out.sort_by_key(|(k, _)| *k);
        out
    }

    /// Sum of all hom dimensions.
    pub fn total_dim(&self) -> usize {
        self.morphisms.len()
    }

    /// `dim hom(x, y)` as a matrix of counts, indexed `[x][y]`.
    pub fn hom_dims(&self) -> Vec<Vec<usize>> {
        let n = self.num_objects();
        (0..n)
            .map(|x| (0..n).map(|y| self.hom_dim(x, y)).collect())
            .collect()
    }

    /// Coefficient vector of a combination supported in `hom(x, y)`, in hom-basis order.
    pub fn coords(&self, comb: &LinComb, x: usize, y: usize) -> Vec<Scalar> {
        let mut v = vec![self.field.zero(); self.hom_dim(x, y)];
        for (m, c) in comb {
            debug_assert_eq!((self.morphisms[*m].src, self.morphisms[*m].tgt), (x, y));
            v[self.position[*m]] = c.clone();
        }
        v
    }

    /// Matrix of a linear map `hom(x, y) → hom(x', y')` given by the images of basis morphisms.
    pub(crate) fn hom_map_matrix<'a>(
        &self,
        target: &LinCat,
        (x, y): (usize, usize),
        (x2, y2): (usize, usize),
        image: impl Fn(usize) -> &'a LinComb,
    ) -> Matrix {
        let rows = target.hom_dim(x2, y2);
        let cols = self.hom_dim(x, y);
        let triplets = self.hom(x, y).iter().enumerate().flat_map(|(j, &f)| {
            image(f)
                .iter()
                .map(move |(m, c)| (target.position(*m), j, c.clone()))
        });
        Matrix::from_triplets(self.field, rows, cols, triplets.collect::<Vec<_>>())
            .expect("images lie in the target hom-space")
    }

    pub fn describe_comb(&self, comb: &LinComb) -> String {
        if comb.is_empty() {
            return "0".into();
        }
        comb.iter()
            .map(|(m, c)| {
                if c.is_one() {
                    self.morphisms[*m].name.clone()
                } else {
                    format!("{}·{}", c, self.morphisms[*m].name)
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Checks associativity on every composable basis triple and both identity laws on
/// every basis morphism.
pub fn validate_category(c: &LinCat) -> Result<()> {
    for f in 0..c.num_morphisms() {
        let (x, y) = (c.morphism(f).src, c.morphism(f).tgt);
        let unit = vec![(f, c.field().one())];
        let left = c.compose(c.identity(y), &unit);
        if left != unit {
            return Err(Error::CategoryAxiom {
                axiom: "left identity",
                witness: format!(
                    "id_{} ∘ {} = {}",
                    c.object_name(y),
                    c.morphism(f).name,
                    c.describe_comb(&left)
                ),
            });
        }
        let right = c.compose(&unit, c.identity(x));
        if right != unit {
            return Err(Error::CategoryAxiom {
                axiom: "right identity",
                witness: format!(
                    "{} ∘ id_{} = {}",
                    c.morphism(f).name,
                    c.object_name(x),
                    c.describe_comb(&right)
                ),
            });
        }
    }
    let n = c.num_objects();
    for f in 0..c.num_morphisms() {
        let y = c.morphism(f).tgt;
        let fc = vec![(f, c.field().one())];
        for z in 0..n {
            for &g in c.hom(y, z) {
                let gf: LinComb = c.compose_basis(g, f).to_vec();
                let gc = vec![(g, c.field().one())];
                for w in 0..n {
                    for &h in c.hom(z, w) {
                        let hc = vec![(h, c.field().one())];
                        let lhs = c.compose(&c.compose(&hc, &gc), &fc);
                        let rhs = c.compose(&hc, &gf);
                        if lhs != rhs {
                            return Err(Error::CategoryAxiom {
                                axiom: "associativity",
                                witness: format!(
                                    "({h} ∘ {g}) ∘ {f} = {} but {h} ∘ ({g} ∘ {f}) = {}",
                                    c.describe_comb(&lhs),
                                    c.describe_comb(&rhs),
                                    h = c.morphism(h).name,
                                    g = c.morphism(g).name,
                                    f = c.morphism(f).name
                                ),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// The associated algebra `a(C) = ⊕ hom(x, y)` as a one-object category: same basis
/// (and names), same structure constants, unit the sum of all identities.
pub fn algebra_of(c: &LinCat) -> LinCat {
    let mut b = LinCat::builder(c.field());
    let star = b.object("*");
    for m in c.morphisms() {
        b.morphism(m.name.clone(), star, star);
    }
    let unit: LinComb = (0..c.num_objects())
        .flat_map(|x| c.identity(x).iter().cloned())
        .collect();
    b.identity(star, unit);
    for ((g, f), comb) in c.composition_table() {
        b.compose(g, f, comb.clone());
    }
    b.build().expect("algebra of a valid category is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn shipped_categories_validate() {
        let f = Field::Prime(101);
        for c in [
            fixtures::end_k(f),
            fixtures::k_times_k(f),
            fixtures::dual_numbers(f),
            fixtures::two_object_swap(f, false),
            fixtures::two_object_swap(f, true),
        ] {
            validate_category(&c).unwrap();
        }
    }

    #[test]
    fn dual_numbers_triples_by_hand() {
        // basis {1, x}: all 8 triples associate; x∘x = 0
        let c = fixtures::dual_numbers(Field::Rational);
        assert!(c.compose_basis(1, 1).is_empty());
        assert_eq!(c.compose_basis(0, 1), &[(1, Field::Rational.one())]);
        validate_category(&c).unwrap();
    }

    #[test]
    fn broken_identity_is_reported() {
        let f = Field::Rational;
        let mut b = LinCat::builder(f);
        let o = b.object("o");
        let one = b.morphism("1", o, o);
        let x = b.morphism("x", o, o);
        b.identity(o, vec![(one, f.one())]);
        b.compose(one, one, vec![(one, f.one())]);
        b.compose(x, x, vec![(one, f.one())]);
        // x∘1 = 0 and 1∘x missing
        let c = b.build().unwrap();
        let err = validate_category(&c).unwrap_err();
        assert!(matches!(err, Error::CategoryAxiom { axiom: "left identity", .. }), "{err}");
    }

    #[test]
    fn algebra_of_two_points() {
        let c = fixtures::k_times_k(Field::Rational);
        let a = algebra_of(&c);
        assert_eq!(a.num_objects(), 1);
        assert_eq!(a.total_dim(), 2);
        validate_category(&a).unwrap();
        let sum: usize = c.hom_dims().iter().flatten().sum();
        assert_eq!(a.total_dim(), sum);
    }

    #[test]
    fn structural_errors() {
        let f = Field::Rational;
        let mut b = LinCat::builder(f);
        let x = b.object("x");
        let y = b.object("y");
        let g = b.morphism("g", x, y);
        b.identity(x, vec![]);
        b.identity(y, vec![]);
        b.compose(g, g, vec![]);
        assert!(matches!(b.build(), Err(Error::Malformed(_))));
    }
}
