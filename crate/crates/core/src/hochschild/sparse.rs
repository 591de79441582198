//! Matrix-free checks for complexes too large to store densely.

use std::collections::HashMap;

use rayon::prelude::*;

use super::{boundary_terms, chain_class_element};
use crate::check::Check;
use crate::group::{class_index, conjugacy_classes};
use crate::lincat::{GradedLinCat, LinCat};
use crate::linalg::Scalar;

/// Depth-first walk over the cyclic tuples `[f_0, …, f_n]` with the given `f_0`;
/// stops at the first `Some` returned by `visit`.
fn find_tuple<T>(c: &LinCat, n: usize, tuple: &mut Vec<usize>, visit: &dyn Fn(&[usize]) -> Option<T>) -> Option<T> {
    let last = *tuple.last().expect("f_0 is set");
    let x0 = c.morphism(tuple[0]).src;
    let here = c.morphism(last).tgt;
    if tuple.len() == n + 1 {
        return if here == x0 { visit(tuple) } else { None };
    }
    for y in 0..c.num_objects() {
        for &f in c.hom(here, y) {
            tuple.push(f);
            let found = find_tuple(c, n, tuple, visit);
            tuple.pop();
            if found.is_some() {
                return found;
            }
        }
    }
    None
}

fn first_witness(c: &LinCat, n: usize, visit: &(dyn Fn(&[usize]) -> Option<String> + Sync)) -> Option<String> {
    (0..c.num_morphisms())
        .into_par_iter()
        .find_map_first(|f0| find_tuple(c, n, &mut vec![f0], visit))
}

fn describe(c: &LinCat, tuple: &[usize]) -> String {
    tuple.iter().rev().map(|&f| c.morphism(f).name.as_str()).collect::<Vec<_>>().join(" ⊗ ")
}

/// `d_{n−1} d_n = 0` for `2 ≤ n ≤ top` and, when `graded` is given, that `d` keeps every
/// tuple in its conjugacy class, by expanding each basis tuple twice. No basis or matrix is stored,
/// so no budget applies.
pub fn matrix_free_checks(c: &LinCat, graded: Option<&GradedLinCat>, top: usize) -> Vec<Check> {
    let field = c.field();
    let dd = (2..=top).find_map(|n| {
        first_witness(c, n, &|t| {
            let mut acc: HashMap<Vec<usize>, Scalar> = HashMap::new();
            for (u, a) in boundary_terms(c, t) {
                for (v, b) in boundary_terms(c, &u) {
                    let e = acc.entry(v).or_insert_with(|| field.zero());
                    *e = e.clone() + &a * &b;
                }
            }
            acc.values().any(|v| !v.is_zero()).then(|| format!("d∘d({}) ≠ 0", describe(c, t)))
        })
    });
    let mut checks = vec![Check::from_witness(format!("d∘d = 0 through degree {top} (matrix-free)"), dd)];
    if let Some(b) = graded {
        let class = class_index(&b.group, &conjugacy_classes(&b.group));
        let leak = (1..=top).find_map(|n| {
            first_witness(c, n, &|t| {
                let s = class[chain_class_element(b, t)];
                let mut acc: HashMap<Vec<usize>, Scalar> = HashMap::new();
                for (u, a) in boundary_terms(c, t) {
                    let e = acc.entry(u).or_insert_with(|| field.zero());
                    *e = e.clone() + a.clone();
                }
                acc.iter()
                    .find(|(u, v)| !v.is_zero() && class[chain_class_element(b, u)] != s)
                    .map(|(u, _)| format!("d({}) ∋ {}", describe(c, t), describe(c, u)))
            })
        });
        checks.push(Check::from_witness(
            format!("boundary preserves conjugacy classes through degree {top} (matrix-free)"),
            leak,
        ));
    }
    checks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::all_passed;
    use crate::constructions::skew;
    use crate::fixtures;
    use crate::linalg::Field;

    const P: Field = Field::Prime(101);

    #[test]
    fn skew_dual_numbers_pass() {
        let (c, a) = fixtures::dual_numbers_c2(P);
        let sk = skew(&c, &a).unwrap();
        assert!(all_passed(&matrix_free_checks(sk.cat(), Some(&sk.graded), 3)));
    }

    #[test]
    fn failures_are_witnessed() {
        let broken = fixtures::corrupt_associativity(P);
        assert!(!matrix_free_checks(&broken, None, 3)[0].passed);
        let leak = fixtures::corrupt_grading_leak(P);
        let checks = matrix_free_checks(&leak.cat, Some(&leak), 2);
        assert!(!checks[1].passed, "{checks:?}");
    }
}
