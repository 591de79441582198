//! Hochschild–Mitchell cochains of a finite linear category.
//!
//! The canonical basis consists of elementary cochains `E(p, g)`: for a path
//! `p = f_n ⊗ ⋯ ⊗ f_1` from `x_1` to `x_{n+1}` and a basis morphism
//! `g ∈ hom(x_1, x_{n+1})`, `E(p, g)` sends `p` to `g` and every other basis path to 0.
//! Paths are stored in application order `[f_1, …, f_n]`.

mod action;
mod cup;
mod restrict;
mod sparse;
mod transversal;

pub use action::{check_cochain_action, cochain_g_action, invariants, is_invariant_pointwise, InvariantSummary};
pub use cup::{check_cup_laws, cup, identity_cochain, Cochain, CupSampler};
pub use restrict::{chain_map_check, quasi_iso_check, restrict_along_functor, Restriction};
pub use sparse::matrix_free_checks;
pub use transversal::{transversal_cochain_iso, CochainIso};

use std::collections::HashMap;
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::check::Check;
use crate::error::{Error, Result};
use crate::group::{conjugacy_classes, ConjClass};
use crate::hochschild::{guard, walk_counts};
use crate::lincat::{GradedLinCat, LinCat};
use crate::linalg::{accumulate, into_comb, Field, LinComb, Matrix, Scalar};

/// `E(p, g)` with `p` starting at `start` (needed when `p` is empty).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CochainKey {
    pub start: usize,
    pub path: Vec<usize>,
    pub out: usize,
}

impl CochainKey {
    pub fn end(&self, c: &LinCat) -> usize {
        self.path.last().map_or(self.start, |&f| c.morphism(f).tgt)
    }

    /// `p ↦ g` as `f_n ⊗ ⋯ ⊗ f_1 ↦ g`.
    pub fn describe(&self, c: &LinCat) -> String {
        let p = if self.path.is_empty() {
            format!("[{}]", c.object_name(self.start))
        } else {
            self.path
                .iter()
                .rev()
                .map(|&f| c.morphism(f).name.as_str())
                .collect::<Vec<_>>()
                .join(" ⊗ ")
        };
        format!("{p} ↦ {}", c.morphism(self.out).name)
    }
}

/// Basis of `C^n`: paths in lexicographic order over `(x_1, …, x_{n+1}, positions)`,
/// each followed by the basis of `hom(x_1, x_{n+1})`.
#[derive(Clone, Debug)]
pub struct CochainBasis {
    degree: usize,
    keys: Vec<CochainKey>,
    /// `(start, path)` → index of its first key; the block follows hom-basis order.
    paths: HashMap<(usize, Vec<usize>), usize>,
}

impl CochainBasis {
    pub fn enumerate(c: &LinCat, n: usize, budget: usize) -> Result<CochainBasis> {
        let walks = walk_counts(c, n);
        let k = c.num_objects();
        let needed = (0..k).fold(0u128, |s, x| {
            (0..k).fold(s, |s, y| s.saturating_add(walks[x][y].saturating_mul(c.hom_dim(x, y) as u128)))
        });
        guard(|| format!("cochain degree {n}"), needed, budget)?;
        let mut keys = Vec::with_capacity(needed as usize);
        let mut objs = Vec::with_capacity(n + 1);
        enumerate_paths(c, n, &mut objs, &mut keys);
        Ok(CochainBasis::from_keys(n, keys))
    }

    fn from_keys(degree: usize, keys: Vec<CochainKey>) -> CochainBasis {
        let mut paths = HashMap::new();
        for (i, k) in keys.iter().enumerate() {
            paths.entry((k.start, k.path.clone())).or_insert(i);
        }
        CochainBasis { degree, keys, paths }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn keys(&self) -> &[CochainKey] {
        &self.keys
    }

    pub fn key(&self, i: usize) -> &CochainKey {
        &self.keys[i]
    }

    /// Index of `E(p, g)`; only valid in an unrestricted basis, where every output is present.
    pub fn index(&self, c: &LinCat, start: usize, path: &[usize], g: usize) -> Option<usize> {
        self.paths
            .get(&(start, path.to_vec()))
            .map(|&first| first + c.position(g))
    }

    pub fn index_of(&self, key: &CochainKey) -> Option<usize> {
        let first = *self.paths.get(&(key.start, key.path.clone()))?;
        self.keys[first..]
            .iter()
            .take_while(|k| k.start == key.start && k.path == key.path)
            .position(|k| k.out == key.out)
            .map(|i| first + i)
    }
}

fn enumerate_paths(c: &LinCat, n: usize, objs: &mut Vec<usize>, out: &mut Vec<CochainKey>) {
    if objs.len() == n + 1 {
        let (x1, last) = (objs[0], objs[n]);
        let outs = c.hom(x1, last);
        if outs.is_empty() {
            return;
        }
        let homs: Vec<&[usize]> = (0..n).map(|i| c.hom(objs[i], objs[i + 1])).collect();
        let mut pos = vec![0usize; n];
        loop {
            let path: Vec<usize> = (0..n).map(|i| homs[i][pos[i]]).collect();
            for &g in outs {
                out.push(CochainKey {
                    start: x1,
                    path: path.clone(),
                    out: g,
                });
            }
            let mut k = n;
            loop {
                if k == 0 {
                    return;
                }
                k -= 1;
                pos[k] += 1;
                if pos[k] < homs[k].len() {
                    break;
                }
                pos[k] = 0;
            }
        }
    }
    for x in 0..c.num_objects() {
        if let Some(&prev) = objs.last() {
            if c.hom_dim(prev, x) == 0 {
                continue;
            }
        }
        objs.push(x);
        enumerate_paths(c, n, objs, out);
        objs.pop();
    }
}

/// Coefficient of `h` in `a ∘ b`.
pub(crate) fn coef_in(c: &LinCat, a: usize, b: usize, h: usize) -> Option<Scalar> {
    c.compose_basis(a, b).iter().find(|(m, _)| *m == h).map(|(_, v)| v.clone())
}

/// Row `(P, h)` of `d^n`, where `P = [f_1, …, f_{n+1}]`:
/// `(dφ)(P) = f_{n+1}φ(f_n ⊗ ⋯ ⊗ f_1) + Σ_{i=1}^n (−1)^{n+1−i} φ(⋯ ⊗ f_{i+1}f_i ⊗ ⋯)
///  + (−1)^{n+1} φ(f_{n+1} ⊗ ⋯ ⊗ f_2) f_1`.
fn coboundary_row(c: &LinCat, src: &CochainBasis, key: &CochainKey) -> LinComb {
    let n = key.path.len() - 1;
    coboundary_row_signed(c, src, key, 0, &|i| n + 1 - i, n + 1)
}

/// The three term families with signs `(−1)^first`, `(−1)^{mid(i)}` and `(−1)^last`.
fn coboundary_row_signed(
    c: &LinCat,
    src: &CochainBasis,
    key: &CochainKey,
    first_sign: usize,
    mid_sign: &dyn Fn(usize) -> usize,
    last_sign: usize,
) -> LinComb {
    let field = c.field();
    let p = &key.path;
    let n = p.len() - 1;
    let (x1, xn2) = (key.start, key.end(c));
    let mut acc = std::collections::BTreeMap::new();
    // f_{n+1} ∘ φ(f_1, …, f_n)
    let first = &p[..n];
    let fin = p[n];
    let mid = c.morphism(fin).src;
    if let Some(&base) = src.paths.get(&(x1, first.to_vec())) {
        for (pos, &g) in c.hom(x1, mid).iter().enumerate() {
            if let Some(v) = coef_in(c, fin, g, key.out) {
                accumulate(&mut acc, base + pos, &Scalar::sign(field, first_sign) * &v);
            }
        }
    }
    // contractions
    for i in 1..=n {
        let sign = Scalar::sign(field, mid_sign(i));
        for (m, a) in c.compose_basis(p[i], p[i - 1]) {
            let mut q = Vec::with_capacity(n);
            q.extend_from_slice(&p[..i - 1]);
            q.push(*m);
            q.extend_from_slice(&p[i + 1..]);
            if let Some(&base) = src.paths.get(&(x1, q)) {
                accumulate(&mut acc, base + c.position(key.out), &sign * a);
            }
        }
    }
    // φ(f_2, …, f_{n+1}) ∘ f_1
    let sign = Scalar::sign(field, last_sign);
    let x2 = c.morphism(p[0]).tgt;
    if let Some(&base) = src.paths.get(&(x2, p[1..].to_vec())) {
        for (pos, &g) in c.hom(x2, xn2).iter().enumerate() {
            if let Some(v) = coef_in(c, g, p[0], key.out) {
                accumulate(&mut acc, base + pos, &sign * &v);
            }
        }
    }
    into_comb(acc)
}

/// Truncated cochain complex `C^0 → ⋯ → C^top`, optionally restricted to a class.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    field: Field,
    bases: Vec<CochainBasis>,
    /// `coboundaries[n] = d^n: C^n → C^{n+1}` for `n < top`.
    coboundaries: Vec<Matrix>,
    label: String,
    ranks: OnceLock<Vec<usize>>,
}

/// Builds `C^0, …, C^{n_max+1}` and `d^0, …, d^{n_max}`.
pub fn build_cochain_complex(c: &LinCat, n_max: usize, budget: usize) -> Result<CochainComplex> {
    let bases = (0..=n_max + 1)
        .map(|n| CochainBasis::enumerate(c, n, budget))
        .collect::<Result<Vec<_>>>()?;
    crate::hochschild::guard_dense("cochain complex", &bases.iter().map(CochainBasis::len).collect::<Vec<_>>())?;
    let field = c.field();
    let coboundaries = (0..=n_max)
        .map(|n| {
            let (src, tgt) = (&bases[n], &bases[n + 1]);
            let rows: Vec<LinComb> = tgt.keys.par_iter().map(|k| coboundary_row(c, src, k)).collect();
            let triplets: Vec<_> = rows
                .into_iter()
                .enumerate()
                .flat_map(|(i, r)| r.into_iter().map(move |(j, v)| (i, j, v)))
                .collect();
            Matrix::from_triplets(field, tgt.len(), src.len(), triplets)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CochainComplex {
        field,
        bases,
        coboundaries,
        label: "ALL".into(),
        ranks: OnceLock::new(),
    })
}

impl CochainComplex {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn top(&self) -> usize {
        self.bases.len() - 1
    }

    pub fn n_max(&self) -> usize {
        self.top() - 1
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn basis(&self, n: usize) -> &CochainBasis {
        &self.bases[n]
    }

    pub fn coboundary(&self, n: usize) -> &Matrix {
        &self.coboundaries[n]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.bases.iter().map(CochainBasis::len).collect()
    }

    /// `rank d^n` for `n < top`.
    pub fn ranks(&self) -> &[usize] {
        self.ranks
            .get_or_init(|| self.coboundaries.par_iter().map(Matrix::rank).collect())
    }

    /// `dim H^n = dim C^n − rank d^n − rank d^{n−1}` for `n ≤ n_max`.
    pub fn cohomology_dims(&self) -> Vec<usize> {
        let r = self.ranks();
        (0..=self.n_max())
            .map(|n| self.bases[n].len() - r[n] - if n == 0 { 0 } else { r[n - 1] })
            .collect()
    }

    pub fn check_dd(&self, c: &LinCat) -> Check {
        let name = format!("cochain d∘d = 0 ({})", self.label);
        for n in 1..self.top() {
            let dd = self.coboundaries[n].mul(&self.coboundaries[n - 1]).expect("composable");
            if let Some((_, j)) = dd.first_nonzero() {
                return Check::fail(name, format!("degree {n}: d(d({}))", self.bases[n - 1].keys[j].describe(c)));
            }
        }
        Check::pass(name)
    }

    /// Subcomplex on the keys accepted by `keep`; fails if a coboundary leaves it.
    pub fn restrict(&self, c: &LinCat, label: String, keep: impl Fn(&CochainKey) -> bool + Sync) -> Result<CochainComplex> {
        let kept: Vec<Vec<usize>> = self
            .bases
            .iter()
            .map(|b| (0..b.len()).filter(|&i| keep(&b.keys[i])).collect())
            .collect();
        let mut coboundaries = Vec::new();
        for n in 0..self.top() {
            let d = &self.coboundaries[n];
            let mut inside = vec![false; d.rows()];
            for &i in &kept[n + 1] {
                inside[i] = true;
            }
            for &j in &kept[n] {
                if let Some((i, _)) = d.column_support(j).into_iter().find(|(i, _)| !inside[*i]) {
                    return Err(Error::ClassLeak(format!(
                        "d({}) has a component on {} outside {label}",
                        self.bases[n].keys[j].describe(c),
                        self.bases[n + 1].keys[i].describe(c)
                    )));
                }
            }
            coboundaries.push(d.select_rows(&kept[n + 1]).select_cols(&kept[n]));
        }
        let bases = self
            .bases
            .iter()
            .zip(&kept)
            .map(|(b, k)| CochainBasis::from_keys(b.degree, k.iter().map(|&i| b.keys[i].clone()).collect()))
            .collect();
        Ok(CochainComplex {
            field: self.field,
            bases,
            coboundaries,
            label,
            ranks: OnceLock::new(),
        })
    }

    /// Positions (in the full basis) of the keys of each degree accepted by `keep`.
    pub fn positions(&self, keep: impl Fn(&CochainKey) -> bool) -> Vec<Vec<usize>> {
        self.bases
            .iter()
            .map(|b| (0..b.len()).filter(|&i| keep(&b.keys[i])).collect())
            .collect()
    }
}

/// `deg(f_n)⋯deg(f_1)·deg(g)⁻¹` of `E(f_n ⊗ ⋯ ⊗ f_1, g)`.
pub fn cochain_class_element(b: &GradedLinCat, key: &CochainKey) -> usize {
    let g = &b.group;
    let s = g.product(key.path.iter().rev().map(|&f| b.degree(f)));
    g.mul(s, g.inv(b.degree(key.out)))
}

/// `C^•_D`: elementary cochains whose class lies in `class`.
pub fn class_subcomplex(full: &CochainComplex, b: &GradedLinCat, class: &ConjClass) -> Result<CochainComplex> {
    full.restrict(&b.cat, class.label(&b.group), |k| class.contains(cochain_class_element(b, k)))
}

/// All class subcomplexes, identity class first; succeeds only if every coboundary
/// is block diagonal in the class-refined basis.
pub fn class_decomposition(full: &CochainComplex, b: &GradedLinCat) -> Result<Vec<(ConjClass, CochainComplex)>> {
    conjugacy_classes(&b.group)
        .into_iter()
        .map(|cl| {
            let sub = class_subcomplex(full, b, &cl)?;
            Ok((cl, sub))
        })
        .collect()
}

/// `φ_x` with `g φ_x = φ_y g` for every `g: x → y`: dimension of the center, from the
/// defining equations rather than the coboundary matrix.
pub fn center_dim(c: &LinCat) -> usize {
    let f = c.field();
    let offsets: Vec<usize> = (0..c.num_objects())
        .scan(0, |acc, x| {
            let o = *acc;
            *acc += c.hom_dim(x, x);
            Some(o)
        })
        .collect();
    let unknowns: usize = (0..c.num_objects()).map(|x| c.hom_dim(x, x)).sum();
    let mut eqs: Vec<Vec<Scalar>> = Vec::new();
    for g in 0..c.num_morphisms() {
        let (x, y) = (c.morphism(g).src, c.morphism(g).tgt);
        let mut rows = vec![vec![f.zero(); unknowns]; c.hom_dim(x, y)];
        for (j, &e) in c.hom(x, x).iter().enumerate() {
            for (m, v) in c.compose_basis(g, e) {
                let e = &mut rows[c.position(*m)][offsets[x] + j];
                *e = &*e + v;
            }
        }
        for (j, &e) in c.hom(y, y).iter().enumerate() {
            for (m, v) in c.compose_basis(e, g) {
                let e = &mut rows[c.position(*m)][offsets[y] + j];
                *e = &*e - v;
            }
        }
        eqs.extend(rows);
    }
    if eqs.is_empty() {
        return unknowns;
    }
    unknowns - Matrix::from_rows(f, &eqs).expect("uniform rows").rank()
}

/// `m · v` for a sparse column vector.
pub(crate) fn apply(m: &Matrix, v: &LinComb) -> LinComb {
    let mut acc = std::collections::BTreeMap::new();
    for (j, c) in v {
        for (i, e) in m.column_support(*j) {
            accumulate(&mut acc, i, c * &e);
        }
    }
    into_comb(acc)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::constructions::skew;
    use crate::fixtures;
    use crate::group::FinGroup;

    const P: Field = Field::Prime(101);
    const BUDGET: usize = crate::hochschild::DEFAULT_BUDGET;

    #[test]
    fn end_k() {
        let c = fixtures::end_k(P);
        let cx = build_cochain_complex(&c, 3, BUDGET).unwrap();
        assert_eq!(cx.dims(), vec![1; 5]);
        assert_eq!(cx.cohomology_dims(), vec![1, 0, 0, 0]);
        assert!(cx.check_dd(&c).passed);
    }

    #[test]
    fn dual_numbers() {
        let c = fixtures::dual_numbers(P);
        let cx = build_cochain_complex(&c, 2, BUDGET).unwrap();
        assert_eq!(cx.dims()[1], 4);
        assert!(cx.check_dd(&c).passed);
        let h = cx.cohomology_dims();
        assert_eq!(&h[..2], &[2, 1]);
        assert_eq!(h[0], center_dim(&c));
    }

    #[test]
    fn degree_zero_coboundary_is_a_commutator() {
        // dφ(f) = f φ_x − φ_y f; on kC2 with φ = E(·, σ) and f = σ: σσ − σσ = 0
        let g = Arc::new(FinGroup::c2());
        let c = fixtures::group_algebra(P, &g);
        let cx = build_cochain_complex(&c, 1, BUDGET).unwrap();
        assert!(cx.coboundary(0).is_zero());
        let c = fixtures::k_times_k(P);
        let cx = build_cochain_complex(&c, 1, BUDGET).unwrap();
        assert_eq!(cx.cohomology_dims(), vec![2, 0]);
        assert_eq!(center_dim(&c), 2);
    }

    #[test]
    fn printed_sign_placement_fails_dd() {
        // (−1)^{n+1} f_{n+1}φ + Σ (−1)^{i+1} φ(⋯f_{i+1}f_i⋯) + φ(⋯)f_1 does not square to zero:
        // on the dual numbers d^2 d^1 ≠ 0
        let c = fixtures::dual_numbers(P);
        let bases: Vec<CochainBasis> = (0..4).map(|n| CochainBasis::enumerate(&c, n, BUDGET).unwrap()).collect();
        let variant = |n: usize| {
            let rows: Vec<LinComb> = bases[n + 1]
                .keys()
                .iter()
                .map(|k| coboundary_row_signed(&c, &bases[n], k, n + 1, &|i| i + 1, 0))
                .collect();
            let triplets = rows
                .into_iter()
                .enumerate()
                .flat_map(|(i, r)| r.into_iter().map(move |(j, v)| (i, j, v)));
            Matrix::from_triplets(P, bases[n + 1].len(), bases[n].len(), triplets.collect::<Vec<_>>()).unwrap()
        };
        assert!(!variant(2).mul(&variant(1)).unwrap().is_zero());
        let cx = build_cochain_complex(&c, 2, BUDGET).unwrap();
        assert!(cx.coboundary(2).mul(cx.coboundary(1)).unwrap().is_zero());
    }

    #[test]
    fn trivially_graded_is_class_one() {
        let c = fixtures::dual_numbers(P);
        let b = GradedLinCat::trivially(c.clone(), Arc::new(FinGroup::c2()));
        let full = build_cochain_complex(&c, 2, BUDGET).unwrap();
        let parts = class_decomposition(&full, &b).unwrap();
        assert_eq!(parts[0].1.dims(), full.dims());
        assert!(parts[1].1.dims().iter().all(|&d| d == 0));
    }

    #[test]
    fn dual_numbers_skew_split() {
        let (c, a) = fixtures::dual_numbers_c2(P);
        let sk = skew(&c, &a).unwrap();
        let full = build_cochain_complex(sk.cat(), 2, BUDGET).unwrap();
        assert!(full.check_dd(sk.cat()).passed);
        let parts = class_decomposition(&full, &sk.graded).unwrap();
        // oracle: types (s_1, s_0) with s_1 s_0⁻¹ = 1 vs σ, four morphisms per degree… counted directly
        let mut split = [0usize; 2];
        for &f in sk.cat().hom(0, 0) {
            for &g in sk.cat().hom(0, 0) {
                let s = sk.graded.group.mul(sk.graded.degree(f), sk.graded.group.inv(sk.graded.degree(g)));
                split[s] += 1;
            }
        }
        assert_eq!(split, [8, 8]);
        assert_eq!(parts[0].1.dims()[1], 8);
        assert_eq!(parts[1].1.dims()[1], 8);
        let sum: Vec<usize> = (0..3)
            .map(|n| parts.iter().map(|(_, p)| p.cohomology_dims()[n]).sum())
            .collect();
        assert_eq!(sum, full.cohomology_dims());
    }

    #[test]
    fn lexicographic_keys() {
        let c = fixtures::two_object_swap(P, true);
        let b = CochainBasis::enumerate(&c, 2, BUDGET).unwrap();
        let key = |k: &CochainKey| {
            let mut objs = vec![k.start];
            objs.extend(k.path.iter().map(|&f| c.morphism(f).tgt));
            let pos: Vec<usize> = k.path.iter().map(|&f| c.position(f)).collect();
            (objs, pos, c.position(k.out))
        };
        assert!(b.keys().windows(2).all(|w| key(&w[0]) < key(&w[1])));
        for (i, k) in b.keys().iter().enumerate() {
            assert_eq!(b.index_of(k), Some(i));
            assert_eq!(b.index(&c, k.start, &k.path, k.out), Some(i));
        }
    }
}
