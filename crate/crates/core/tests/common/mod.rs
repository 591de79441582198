//! Random small categories with group actions for property tests.
#![allow(dead_code)]

use std::sync::Arc;

use proptest::prelude::*;
use skewcat_core::group::{FinGroup, GSetAction};
use skewcat_core::lincat::{GActionOnCat, LinCat};
use skewcat_core::linalg::{Field, LinComb, Scalar};

pub const P: Field = Field::Prime(101);

pub fn unit(f: Field, m: usize) -> LinComb {
    vec![(m, f.one())]
}

/// Incidence category of a poset on `0..n`: `hom(i, j) = k` iff `i ≤ j`. `relation`
/// lists candidate strict relations `i < j` (only pairs with `i < j` are kept) and is
/// closed transitively.
pub fn poset_category(f: Field, n: usize, relation: &[(usize, usize)], copies: usize) -> LinCat {
    let mut le = vec![vec![false; n]; n];
    for i in 0..n {
        le[i][i] = true;
    }
    for &(i, j) in relation {
        if i < j && j < n {
            le[i][j] = true;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if le[i][k] && le[k][j] {
                    le[i][j] = true;
                }
            }
        }
    }
    let mut b = LinCat::builder(f);
    let mut ids = vec![vec![vec![None; n]; n]; copies];
    for c in 0..copies {
        let objs: Vec<usize> = (0..n).map(|i| b.object(format!("x{i}_{c}"))).collect();
        for i in 0..n {
            for j in 0..n {
                if le[i][j] {
                    ids[c][i][j] = Some(b.morphism(format!("m{i}{j}_{c}"), objs[i], objs[j]));
                }
            }
        }
        for i in 0..n {
            b.identity(objs[i], unit(f, ids[c][i][i].unwrap()));
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if let (Some(ij), Some(jk)) = (ids[c][i][j], ids[c][j][k]) {
                        b.compose(jk, ij, unit(f, ids[c][i][k].unwrap()));
                    }
                }
            }
        }
    }
    b.build().expect("poset category")
}

/// `C_r` permuting the `copies = r` copies of a poset category cyclically: a free action.
pub fn cyclic_shift(c: &LinCat, copies: usize) -> GActionOnCat {
    let g = Arc::new(FinGroup::cyclic(copies));
    let per_obj = c.num_objects() / copies;
    let per_mor = c.num_morphisms() / copies;
    let perms = (0..copies)
        .map(|k| (0..c.num_objects()).map(|x| ((x / per_obj + k) % copies) * per_obj + x % per_obj).collect())
        .collect();
    let objs = GSetAction::new(g, perms).expect("shift");
    let f = c.field();
    let morphisms = (0..copies)
        .map(|k| {
            (0..c.num_morphisms())
                .map(|m| unit(f, ((m / per_mor + k) % copies) * per_mor + m % per_mor))
                .collect()
        })
        .collect();
    GActionOnCat::new(c, objs, morphisms).expect("shift on morphisms")
}

/// A primitive `r`-th root of unity in `𝔽_101`.
pub fn root_of_unity(r: u64) -> u64 {
    let pow = |mut b: u64, mut e: u64| {
        let mut acc = 1;
        b %= 101;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % 101;
            }
            b = b * b % 101;
            e >>= 1;
        }
        acc
    };
    (2..101)
        .find(|&z| pow(z, r) == 1 && (1..r).all(|d| pow(z, d) != 1))
        .expect("r divides 100")
}

/// `k[x]/(x^m)` with `C_r` acting by `x ↦ ζx`, `ζ` a primitive `r`-th root of unity.
/// The object action is trivial, so the action is not free.
pub fn truncated_poly(m: usize, r: usize) -> (LinCat, GActionOnCat) {
    let f = P;
    let mut b = LinCat::builder(f);
    let o = b.object("o");
    let xs: Vec<usize> = (0..m).map(|j| b.morphism(format!("x{j}"), o, o)).collect();
    b.identity(o, unit(f, xs[0]));
    for i in 0..m {
        for j in 0..m {
            if i + j < m {
                b.compose(xs[i], xs[j], unit(f, xs[i + j]));
            }
        }
    }
    let c = b.build().expect("truncated polynomial");
    let g = Arc::new(FinGroup::cyclic(r));
    let zeta = root_of_unity(r as u64) as i64;
    let morphisms = (0..r)
        .map(|k| {
            (0..m)
                .map(|j| {
                    let mut v = f.one();
                    for _ in 0..k * j {
                        v = &v * &f.from_i64(zeta);
                    }
                    vec![(xs[j], v)]
                })
                .collect()
        })
        .collect();
    let a = GActionOnCat::new(&c, GSetAction::trivial(g, 1), morphisms).expect("scaling action");
    (c, a)
}

pub fn small_relation() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (1usize..=3).prop_flat_map(|n| (Just(n), proptest::collection::vec((0..n, 0..n), 0..4)))
}

/// A poset category in `copies` copies with the free cyclic shift.
pub fn free_poset() -> impl Strategy<Value = (LinCat, GActionOnCat)> {
    (small_relation(), 1usize..=3).prop_map(|((n, rel), copies)| {
        let c = poset_category(P, n, &rel, copies);
        let a = cyclic_shift(&c, copies);
        (c, a)
    })
}

/// Truncated polynomial algebras with a scaling action.
pub fn scaled_poly() -> impl Strategy<Value = (LinCat, GActionOnCat)> {
    prop_oneof![
        (1usize..=3, Just(2usize)),
        (1usize..=2, Just(4usize)),
        (1usize..=2, Just(5usize)),
    ]
    .prop_map(|(m, r)| truncated_poly(m, r))
}

pub fn scalar(f: Field) -> impl Strategy<Value = Scalar> {
    (-4i64..=4).prop_map(move |v| f.from_i64(v))
}

/// Scaling actions small enough that the matrix category stays within the dense budget.
pub fn small_scaled_poly() -> impl Strategy<Value = (LinCat, GActionOnCat)> {
    prop_oneof![(1usize..=3, Just(2usize)), (1usize..=2, Just(4usize))].prop_map(|(m, r)| truncated_poly(m, r))
}
