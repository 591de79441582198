//! Matrix-free checks for cochain complexes too large to store densely.

use rayon::prelude::*;

use super::{cochain_class_element, coboundary_row, CochainBasis, CochainKey};
use crate::check::Check;
use crate::error::Result;
use crate::group::{class_index, conjugacy_classes};
use crate::lincat::{GradedLinCat, LinCat};
use crate::linalg::accumulate;

/// Depth-first walk over the degree-`n` keys whose path starts with `path[0]`.
fn find_key<T>(c: &LinCat, n: usize, path: &mut Vec<usize>, visit: &dyn Fn(&CochainKey) -> Option<T>) -> Option<T> {
    let start = c.morphism(path[0]).src;
    let here = c.morphism(*path.last().expect("nonempty")).tgt;
    if path.len() == n {
        return c.hom(start, here).iter().find_map(|&out| {
            visit(&CochainKey {
                start,
                path: path.clone(),
                out,
            })
        });
    }
    for y in 0..c.num_objects() {
        for &f in c.hom(here, y) {
            path.push(f);
            let found = find_key(c, n, path, visit);
            path.pop();
            if found.is_some() {
                return found;
            }
        }
    }
    None
}

fn first_witness(c: &LinCat, n: usize, visit: &(dyn Fn(&CochainKey) -> Option<String> + Sync)) -> Option<String> {
    (0..c.num_morphisms())
        .into_par_iter()
        .find_map_first(|f1| find_key(c, n, &mut vec![f1], visit))
}

/// `d^{n−1} d^{n−2} = 0` for `2 ≤ n ≤ top`, row by row, and, when `graded` is given, that
/// `d` keeps every elementary cochain in its conjugacy class. Rows of degree `top` are
/// streamed; only the bases below `top` are stored, each subject to `budget`.
pub fn matrix_free_checks(c: &LinCat, graded: Option<&GradedLinCat>, top: usize, budget: usize) -> Result<Vec<Check>> {
    let bases = (0..top)
        .map(|n| CochainBasis::enumerate(c, n, budget))
        .collect::<Result<Vec<_>>>()?;
    let dd = (2..=top).find_map(|n| {
        first_witness(c, n, &|key| {
            let mut acc = std::collections::BTreeMap::new();
            for (j, a) in coboundary_row(c, &bases[n - 1], key) {
                for (i, b) in coboundary_row(c, &bases[n - 2], bases[n - 1].key(j)) {
                    accumulate(&mut acc, i, &a * &b);
                }
            }
            (!acc.is_empty()).then(|| format!("(d∘d φ)({}) ≠ 0", key.describe(c)))
        })
    });
    let mut checks = vec![Check::from_witness(format!("d∘d = 0 through degree {top} (matrix-free)"), dd)];
    if let Some(b) = graded {
        let class = class_index(&b.group, &conjugacy_classes(&b.group));
        let leak = (1..=top).find_map(|n| {
            first_witness(c, n, &|key| {
                let s = class[cochain_class_element(b, key)];
                coboundary_row(c, &bases[n - 1], key)
                    .into_iter()
                    .find(|(j, _)| class[cochain_class_element(b, bases[n - 1].key(*j))] != s)
                    .map(|(j, _)| format!("{} in row {}", bases[n - 1].key(j).describe(c), key.describe(c)))
            })
        });
        checks.push(Check::from_witness(
            format!("coboundary preserves conjugacy classes through degree {top} (matrix-free)"),
            leak,
        ));
    }
    Ok(checks)
}
