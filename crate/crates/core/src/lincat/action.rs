use std::collections::BTreeMap;
use std::sync::Arc;

use super::LinCat;
use crate::error::{Error, Result};
use crate::group::{FinGroup, GSetAction};
use crate::linalg::{accumulate, into_comb, LinComb, Matrix};

/// A group acting on a category by linear automorphisms: a permutation of the
/// objects plus, for every element `s` and basis morphism `f: x → y`, the image
/// `s·f ∈ hom(sx, sy)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GActionOnCat {
    objects: GSetAction,
    morphisms: Vec<Vec<LinComb>>,
}

impl GActionOnCat {
    /// Structural checks only: shapes, and that `s·f` lies in `hom(s·src, s·tgt)`.
    /// Use [`validate_action`] for the axioms.
    pub fn new(cat: &LinCat, objects: GSetAction, morphisms: Vec<Vec<LinComb>>) -> Result<Self> {
        let g = objects.group().clone();
        if objects.set_size() != cat.num_objects() {
            return Err(Error::Malformed(format!(
                "object action on {} points for a category with {} objects",
                objects.set_size(),
                cat.num_objects()
            )));
        }
        if morphisms.len() != g.order() || morphisms.iter().any(|m| m.len() != cat.num_morphisms())
        {
            return Err(Error::Malformed(
                "morphism action needs an image for every element and basis morphism".into(),
            ));
        }
        for s in g.elements() {
            for (f, img) in morphisms[s].iter().enumerate() {
                let m = cat.morphism(f);
                let (sx, sy) = (objects.act(s, m.src), objects.act(s, m.tgt));
                for (h, c) in img {
                    if c.field() != cat.field() {
                        return Err(Error::FieldMismatch(
                            cat.field().to_string(),
                            c.field().to_string(),
                        ));
                    }
                    let hm = cat.morphism(*h);
                    if (hm.src, hm.tgt) != (sx, sy) {
                        return Err(Error::ActionAxiom {
                            axiom: "hom-space",
                            witness: format!(
                                "{}·{} involves {} outside hom({}, {})",
                                g.name(s),
                                m.name,
                                hm.name,
                                cat.object_name(sx),
                                cat.object_name(sy)
                            ),
                        });
                    }
                }
            }
        }
        let morphisms = morphisms
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|comb| {
                        let mut acc = BTreeMap::new();
                        for (m, c) in comb {
                            accumulate(&mut acc, m, c);
                        }
                        into_comb(acc)
                    })
                    .collect()
            })
            .collect();
        Ok(GActionOnCat { objects, morphisms })
    }

    /// Every element fixes every object and morphism.
    pub fn trivial(cat: &LinCat, group: Arc<FinGroup>) -> Self {
        let one = cat.field().one();
        let ids: Vec<LinComb> = (0..cat.num_morphisms()).map(|f| vec![(f, one.clone())]).collect();
        let morphisms = vec![ids; group.order()];
        GActionOnCat {
            objects: GSetAction::trivial(group, cat.num_objects()),
            morphisms,
        }
    }

    pub fn group(&self) -> &Arc<FinGroup> {
        self.objects.group()
    }

    pub fn on_objects(&self) -> &GSetAction {
        &self.objects
    }

    #[inline]
    pub fn act_obj(&self, s: usize, x: usize) -> usize {
        self.objects.act(s, x)
    }

    #[inline]
    pub fn act(&self, s: usize, f: usize) -> &LinComb {
        &self.morphisms[s][f]
    }

    pub fn act_comb(&self, s: usize, comb: &LinComb) -> LinComb {
        let mut acc = BTreeMap::new();
        for (f, c) in comb {
            for (h, d) in self.act(s, *f) {
                accumulate(&mut acc, *h, c * d);
            }
        }
        into_comb(acc)
    }

    /// Matrix of `s·−: hom(x, y) → hom(sx, sy)`.
    pub fn hom_matrix(&self, cat: &LinCat, s: usize, x: usize, y: usize) -> Matrix {
        let target = (self.act_obj(s, x), self.act_obj(s, y));
        cat.hom_map_matrix(cat, (x, y), target, |f| self.act(s, f))
    }
}

/// Checks the action axioms exhaustively: the identity element acts trivially,
/// `t·(s·f) = (ts)·f`, `s·id_x = id_{sx}` and `s·(g∘f) = (s·g)∘(s·f)`.
pub fn validate_action(c: &LinCat, a: &GActionOnCat) -> Result<()> {
    let g = a.group();
    let e = g.identity();
    let one = c.field().one();
    for f in 0..c.num_morphisms() {
        if a.act(e, f) != &vec![(f, one.clone())] {
            return Err(Error::ActionAxiom {
                axiom: "identity element",
                witness: format!(
                    "{}·{} = {}",
                    g.name(e),
                    c.morphism(f).name,
                    c.describe_comb(a.act(e, f))
                ),
            });
        }
    }
    for t in g.elements() {
        for s in g.elements() {
            let ts = g.mul(t, s);
            for f in 0..c.num_morphisms() {
                let lhs = a.act_comb(t, a.act(s, f));
                if &lhs != a.act(ts, f) {
                    return Err(Error::ActionAxiom {
                        axiom: "t(sf) = (ts)f",
                        witness: format!(
                            "t = {}, s = {}, f = {}: {} vs {}",
                            g.name(t),
                            g.name(s),
                            c.morphism(f).name,
                            c.describe_comb(&lhs),
                            c.describe_comb(a.act(ts, f))
                        ),
                    });
                }
            }
        }
    }
    for s in g.elements() {
        for x in 0..c.num_objects() {
            let lhs = a.act_comb(s, c.identity(x));
            let sx = a.act_obj(s, x);
            if &lhs != c.identity(sx) {
                return Err(Error::ActionAxiom {
                    axiom: "s(id_x) = id_sx",
                    witness: format!(
                        "{}·id_{} = {} but id_{} = {}",
                        g.name(s),
                        c.object_name(x),
                        c.describe_comb(&lhs),
                        c.object_name(sx),
                        c.describe_comb(c.identity(sx))
                    ),
                });
            }
        }
        for f in 0..c.num_morphisms() {
            let y = c.morphism(f).tgt;
            for z in 0..c.num_objects() {
                for &h in c.hom(y, z) {
                    let gf = c.compose_basis(h, f).to_vec();
                    let lhs = a.act_comb(s, &gf);
                    let rhs = c.compose(a.act(s, h), a.act(s, f));
                    if lhs != rhs {
                        return Err(Error::ActionAxiom {
                            axiom: "s(g∘f) = sg∘sf",
                            witness: format!(
                                "s = {}, g = {}, f = {}: {} vs {}",
                                g.name(s),
                                c.morphism(h).name,
                                c.morphism(f).name,
                                c.describe_comb(&lhs),
                                c.describe_comb(&rhs)
                            ),
                        });
                    }
                }
            }
        }
    }
    Ok(())
}
