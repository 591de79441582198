//! Small shipped categories, actions and groups, plus deliberately corrupted inputs
//! for the axiom checkers.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{FinGroup, GSetAction};
use crate::lincat::{GActionOnCat, GradedLinCat, LinCat};
use crate::linalg::{Field, LinComb};

fn unit(f: Field, m: usize) -> LinComb {
    vec![(m, f.one())]
}

/// One object whose endomorphisms are `k`.
pub fn end_k(f: Field) -> LinCat {
    let mut b = LinCat::builder(f);
    let o = b.object("o");
    let e = b.morphism("1", o, o);
    b.identity(o, unit(f, e));
    b.compose(e, e, unit(f, e));
    b.build().expect("end = k")
}

/// Two objects, `k` on each diagonal hom, nothing between them.
pub fn k_times_k(f: Field) -> LinCat {
    let mut b = LinCat::builder(f);
    let a = b.object("a");
    let c = b.object("b");
    let ea = b.morphism("1a", a, a);
    let eb = b.morphism("1b", c, c);
    b.identity(a, unit(f, ea)).identity(c, unit(f, eb));
    b.compose(ea, ea, unit(f, ea)).compose(eb, eb, unit(f, eb));
    b.build().expect("k × k")
}

/// One object with endomorphisms `k[x]/(x²)`, basis `{1, x}`.
pub fn dual_numbers(f: Field) -> LinCat {
    let mut b = LinCat::builder(f);
    let o = b.object("o");
    let one = b.morphism("1", o, o);
    let x = b.morphism("x", o, o);
    b.identity(o, unit(f, one));
    b.compose(one, one, unit(f, one))
        .compose(one, x, unit(f, x))
        .compose(x, one, unit(f, x));
    b.build().expect("dual numbers")
}

/// Dual numbers with `C2` acting by `σ·x = −x`.
pub fn dual_numbers_c2(f: Field) -> (LinCat, GActionOnCat) {
    let c = dual_numbers(f);
    let g = Arc::new(FinGroup::c2());
    let objs = GSetAction::trivial(g, 1);
    let morphisms = vec![
        vec![unit(f, 0), unit(f, 1)],
        vec![unit(f, 0), vec![(1, f.from_i64(-1))]],
    ];
    let a = GActionOnCat::new(&c, objs, morphisms).expect("sign action");
    (c, a)
}

/// Two objects `a, b` with `k` on the diagonal; with `off_diagonal` also `u: a → b`
/// and `v: b → a` with `v∘u = 1a`, `u∘v = 1b` (so `a(C) = M₂(k)`).
pub fn two_object_swap(f: Field, off_diagonal: bool) -> LinCat {
    let mut b = LinCat::builder(f);
    let a = b.object("a");
    let c = b.object("b");
    let ea = b.morphism("1a", a, a);
    let eb = b.morphism("1b", c, c);
    b.identity(a, unit(f, ea)).identity(c, unit(f, eb));
    b.compose(ea, ea, unit(f, ea)).compose(eb, eb, unit(f, eb));
    if off_diagonal {
        let u = b.morphism("u", a, c);
        let v = b.morphism("v", c, a);
        b.compose(eb, u, unit(f, u))
            .compose(u, ea, unit(f, u))
            .compose(ea, v, unit(f, v))
            .compose(v, eb, unit(f, v))
            .compose(v, u, unit(f, ea))
            .compose(u, v, unit(f, eb));
    }
    b.build().expect("two-object category")
}

/// [`two_object_swap`] with `C2` exchanging the objects (a free action).
pub fn two_object_swap_c2(f: Field, off_diagonal: bool) -> (LinCat, GActionOnCat) {
    let c = two_object_swap(f, off_diagonal);
    let g = Arc::new(FinGroup::c2());
    let objs = GSetAction::new(g, vec![vec![0, 1], vec![1, 0]]).expect("swap");
    let ids: Vec<LinComb> = (0..c.num_morphisms()).map(|m| unit(f, m)).collect();
    // 1a ↔ 1b, u ↔ v
    let swap: Vec<LinComb> = (0..c.num_morphisms()).map(|m| unit(f, m ^ 1)).collect();
    let a = GActionOnCat::new(&c, objs, vec![ids, swap]).expect("swap action");
    (c, a)
}

/// The group algebra `kG` as a one-object category with basis the group elements.
pub fn group_algebra(f: Field, g: &FinGroup) -> LinCat {
    let mut b = LinCat::builder(f);
    let o = b.object("o");
    for s in g.elements() {
        b.morphism(format!("e{}", g.name(s)), o, o);
    }
    b.identity(o, unit(f, g.identity()));
    for s in g.elements() {
        for t in g.elements() {
            b.compose(s, t, unit(f, g.mul(s, t)));
        }
    }
    b.build().expect("group algebra")
}

/// `kG` with `G` acting by conjugation.
pub fn group_algebra_conjugation(f: Field, g: Arc<FinGroup>) -> (LinCat, GActionOnCat) {
    let c = group_algebra(f, &g);
    let objs = GSetAction::trivial(g.clone(), 1);
    let morphisms = g
        .elements()
        .map(|s| g.elements().map(|t| unit(f, g.conjugate(s, t))).collect())
        .collect();
    let a = GActionOnCat::new(&c, objs, morphisms).expect("conjugation");
    (c, a)
}

/// A named category with a group action.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub cat: LinCat,
    pub action: GActionOnCat,
}

impl Fixture {
    pub fn group(&self) -> &Arc<FinGroup> {
        self.action.group()
    }
}

/// Every shipped fixture over `f`.
pub fn catalog(f: Field) -> Vec<Fixture> {
    let trivial = Arc::new(FinGroup::trivial());
    let s3 = Arc::new(FinGroup::symmetric(3));
    let with = |name, (cat, action)| Fixture { name, cat, action };
    let triv = |name, cat: LinCat, g: &Arc<FinGroup>| {
        let action = GActionOnCat::trivial(&cat, g.clone());
        Fixture { name, cat, action }
    };
    vec![
        triv("end_k", end_k(f), &trivial),
        triv("k_times_k", k_times_k(f), &trivial),
        with("dual_numbers_c2", dual_numbers_c2(f)),
        with("two_object_swap", two_object_swap_c2(f, false)),
        with("two_object_swap_matrix", two_object_swap_c2(f, true)),
        triv("end_k_s3", end_k(f), &s3),
        with("group_algebra_s3", group_algebra_conjugation(f, s3.clone())),
    ]
}

/// A corrupted input together with the axiom checker expected to reject it.
pub struct Corrupted {
    pub name: &'static str,
    pub check: fn(Field) -> Result<()>,
}

/// Deliberately broken inputs; each `check` must return an error.
pub fn corrupted() -> Vec<Corrupted> {
    vec![
        Corrupted {
            name: "group_table_not_latin",
            check: |_| {
                FinGroup::new(vec!["1".into(), "s".into()], vec![vec![0, 1], vec![1, 1]]).map(|_| ())
            },
        },
        Corrupted {
            name: "group_not_associative",
            check: |_| {
                // a loop of order 5: Latin square with identity, every element self-inverse
                let table = vec![
                    vec![0, 1, 2, 3, 4],
                    vec![1, 0, 3, 4, 2],
                    vec![2, 4, 0, 1, 3],
                    vec![3, 2, 4, 0, 1],
                    vec![4, 3, 1, 2, 0],
                ];
                let names = (0..5).map(|i| format!("a{i}")).collect();
                FinGroup::new(names, table).map(|_| ())
            },
        },
        Corrupted {
            name: "set_action_not_a_homomorphism",
            check: |_| {
                let g = Arc::new(FinGroup::cyclic(3));
                GSetAction::new(g, vec![vec![0, 1], vec![1, 0], vec![1, 0]]).map(|_| ())
            },
        },
        Corrupted {
            name: "category_identity_law",
            check: |f| crate::lincat::validate_category(&corrupt_identity_law(f)),
        },
        Corrupted {
            name: "category_associativity",
            check: |f| crate::lincat::validate_category(&corrupt_associativity(f)),
        },
        Corrupted {
            name: "action_negates_identity",
            check: |f| {
                let (c, a) = corrupt_action_identity(f);
                crate::lincat::validate_action(&c, &a)
            },
        },
        Corrupted {
            name: "action_not_a_group_action",
            check: |f| {
                let (c, a) = corrupt_action_law(f);
                crate::lincat::validate_action(&c, &a)
            },
        },
        Corrupted {
            name: "grading_leak",
            check: |f| crate::lincat::validate_grading(&corrupt_grading_leak(f)),
        },
    ]
}

/// `x∘x = 1` and `x∘1 = 0` on the basis `{1, x}`.
pub fn corrupt_identity_law(f: Field) -> LinCat {
    let mut b = LinCat::builder(f);
    let o = b.object("o");
    let one = b.morphism("1", o, o);
    let x = b.morphism("x", o, o);
    b.identity(o, unit(f, one));
    b.compose(one, one, unit(f, one))
        .compose(one, x, unit(f, x))
        .compose(x, x, unit(f, one));
    b.build().expect("structurally fine")
}

/// Basis `{1, x, y}` with `x∘x = y`, `y∘x = x`, `x∘y = 0`: `(x∘x)∘x ≠ x∘(x∘x)`.
pub fn corrupt_associativity(f: Field) -> LinCat {
    let mut b = LinCat::builder(f);
    let o = b.object("o");
    let one = b.morphism("1", o, o);
    let x = b.morphism("x", o, o);
    let y = b.morphism("y", o, o);
    b.identity(o, unit(f, one));
    for m in [one, x, y] {
        b.compose(one, m, unit(f, m));
        if m != one {
            b.compose(m, one, unit(f, m));
        }
    }
    b.compose(x, x, unit(f, y)).compose(y, x, unit(f, x));
    b.build().expect("structurally fine")
}

/// `σ·1 = −1`, `σ·x = −x` on the dual numbers.
pub fn corrupt_action_identity(f: Field) -> (LinCat, GActionOnCat) {
    let c = dual_numbers(f);
    let objs = GSetAction::trivial(Arc::new(FinGroup::c2()), 1);
    let minus = f.from_i64(-1);
    let morphisms = vec![
        vec![unit(f, 0), unit(f, 1)],
        vec![vec![(0, minus.clone())], vec![(1, minus)]],
    ];
    let a = GActionOnCat::new(&c, objs, morphisms).expect("structurally fine");
    (c, a)
}

/// `σ·x = 2x`, so `σ·(σ·x) = 4x ≠ x`.
pub fn corrupt_action_law(f: Field) -> (LinCat, GActionOnCat) {
    let c = dual_numbers(f);
    let objs = GSetAction::trivial(Arc::new(FinGroup::c2()), 1);
    let morphisms = vec![
        vec![unit(f, 0), unit(f, 1)],
        vec![unit(f, 0), vec![(1, f.from_i64(2))]],
    ];
    let a = GActionOnCat::new(&c, objs, morphisms).expect("structurally fine");
    (c, a)
}

/// Basis `{1, x}` with `x∘x = x` and `deg x = σ`: the composite should have degree
/// `σ·σ = 1` but lands on `x`.
pub fn corrupt_grading_leak(f: Field) -> GradedLinCat {
    let mut b = LinCat::builder(f);
    let o = b.object("o");
    let one = b.morphism("1", o, o);
    let x = b.morphism("x", o, o);
    b.identity(o, unit(f, one));
    b.compose(one, one, unit(f, one))
        .compose(one, x, unit(f, x))
        .compose(x, one, unit(f, x))
        .compose(x, x, unit(f, x));
    let cat = b.build().expect("structurally fine");
    GradedLinCat::new(cat, Arc::new(FinGroup::c2()), vec![0, 1]).expect("degrees in range")
}

/// Runs every corrupted check and returns `(name, error)` pairs; a corrupted input
/// that passes is reported as `Err(name)`.
pub fn run_corrupted(f: Field) -> std::result::Result<Vec<(&'static str, Error)>, &'static str> {
    corrupted()
        .into_iter()
        .map(|c| match (c.check)(f) {
            Ok(()) => Err(c.name),
            Err(e) => Ok((c.name, e)),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lincat::{validate_action, validate_category};

    #[test]
    fn catalog_passes_all_checks() {
        for f in [Field::Prime(101), Field::Rational] {
            for fx in catalog(f) {
                fx.group().validate().unwrap();
                validate_category(&fx.cat).unwrap_or_else(|e| panic!("{}: {e}", fx.name));
                validate_action(&fx.cat, &fx.action).unwrap_or_else(|e| panic!("{}: {e}", fx.name));
            }
        }
    }

    #[test]
    fn every_corruption_is_caught_with_the_right_kind() {
        let caught = run_corrupted(Field::Prime(101)).unwrap();
        let kinds: Vec<&str> = caught
            .iter()
            .map(|(_, e)| match e {
                Error::GroupAxiom { axiom, .. } => axiom,
                Error::SetAction(_) => "set action",
                Error::CategoryAxiom { axiom, .. } => axiom,
                Error::ActionAxiom { axiom, .. } => axiom,
                Error::GradingLeak(_) => "grading",
                _ => "other",
            })
            .collect();
        assert_eq!(
            kinds,
            vec![
                "latin square",
                "associativity",
                "set action",
                "right identity",
                "associativity",
                "s(id_x) = id_sx",
                "t(sf) = (ts)f",
                "grading"
            ]
        );
    }
}
