use rayon::prelude::*;

use super::action::{chain_g_action, coinvariants, w_span};
use super::{build_chain_complex, class_subcomplex, collect_terms, expand, matrix_from_columns, ChainComplex};
use crate::check::Check;
use crate::constructions::{require_free, skew, transversal_subcategory, SkewOutput, TransversalOutput};
use crate::error::{Error, Result};
use crate::group::{conjugacy_classes, Transversal};
use crate::lincat::{GActionOnCat, LinCat};
use crate::linalg::{LinComb, Matrix};

/// The mutually inverse chain maps between `C_•(C)_G` and `C^{1}_•(C_T[G])`.
#[derive(Clone, Debug)]
pub struct ChainIso {
    /// `a[n]: C_n(C) → C^{1}_n(C_T[G])`, vanishing on `⟨s·b − b⟩`.
    pub a: Vec<Matrix>,
    /// `b[n]: C^{1}_n(C_T[G]) → C_n(C)`.
    pub b: Vec<Matrix>,
    pub checks: Vec<Check>,
    /// `dim H_n(C_•(C)_G)` for `n ≤ n_max`.
    pub coinvariant_homology: Vec<usize>,
    /// `dim HH^{1}_n(C_T[G])` for `n ≤ n_max`.
    pub transversal_homology: Vec<usize>,
}

struct Ctx<'a> {
    c: &'a LinCat,
    a: &'a GActionOnCat,
    t: &'a Transversal,
    sk: &'a SkewOutput,
    /// skew id → transversal-subcategory id
    to_t: Vec<usize>,
    tr: &'a TransversalOutput,
}

impl Ctx<'_> {
    /// `A` on a tuple starting in the transversal: factor `i` becomes
    /// `[s_{i+1}⁻¹ f_i]^{s_{i+1}⁻¹ s_i}` with `s_0 = s_{n+1} = 1`.
    fn a_normalized(&self, tuple: &[usize]) -> Vec<(Vec<usize>, crate::linalg::Scalar)> {
        let g = self.a.group();
        let n = tuple.len() - 1;
        let s: Vec<usize> = (0..=n + 1)
            .map(|i| if i == 0 || i == n + 1 { g.identity() } else { self.t.witness(self.c.morphism(tuple[i]).src) })
            .collect();
        let factors: Vec<LinComb> = (0..=n)
            .map(|i| {
                let inv = g.inv(s[i + 1]);
                let deg = g.mul(inv, s[i]);
                self.a
                    .act(inv, tuple[i])
                    .iter()
                    .map(|(m, v)| (self.to_t[self.sk.id(*m, deg)], v.clone()))
                    .collect()
            })
            .collect();
        let refs: Vec<&LinComb> = factors.iter().collect();
        expand(self.c.field(), &refs)
    }

    /// `A(τ) = A(r·τ)` with `r` moving `x_0` into the transversal.
    fn a_column(&self, tuple: &[usize]) -> Vec<(Vec<usize>, crate::linalg::Scalar)> {
        let g = self.a.group();
        let r = g.inv(self.t.witness(self.c.morphism(tuple[0]).src));
        let factors: Vec<&LinComb> = tuple.iter().map(|&m| self.a.act(r, m)).collect();
        let mut out = Vec::new();
        for (moved, coef) in expand(self.c.field(), &factors) {
            for (t, v) in self.a_normalized(&moved) {
                out.push((t, &coef * &v));
            }
        }
        out
    }

    /// `B`: factor `i` of `[h_0]^{t_0} ⊗ ⋯` becomes `(t_n ⋯ t_{i+1})·h_i`.
    fn b_column(&self, tuple: &[usize]) -> Vec<(Vec<usize>, crate::linalg::Scalar)> {
        let g = self.a.group();
        let n = tuple.len() - 1;
        let parts: Vec<(usize, usize)> = tuple.iter().map(|&k| self.sk.provenance[self.tr.provenance[k]]).collect();
        let mut suffix = vec![g.identity(); n + 1];
        for i in (0..n).rev() {
            suffix[i] = g.mul(suffix[i + 1], parts[i + 1].1);
        }
        let factors: Vec<&LinComb> = (0..=n).map(|i| self.a.act(suffix[i], parts[i].0)).collect();
        expand(self.c.field(), &factors)
    }
}

fn zero_check(name: &str, m: &Matrix, describe: impl Fn(usize) -> String) -> Check {
    match m.first_nonzero() {
        None => Check::pass(name),
        Some((_, j)) => Check::fail(name, describe(j)),
    }
}

/// Builds `A` and `B` through `n_max + 1` for a free action and verifies, as matrix
/// identities, `A(s·b − b) = 0`, `Ad = dA`, `AB = id` and `BA ≡ id` modulo `⟨s·b − b⟩`.
pub fn transversal_chain_iso(
    c: &LinCat,
    a: &GActionOnCat,
    t: &Transversal,
    n_max: usize,
    budget: usize,
) -> Result<ChainIso> {
    require_free(a, c.objects())?;
    let sk = skew(c, a)?;
    let tr = transversal_subcategory(&sk, a, t)?;
    let mut to_t = vec![usize::MAX; sk.provenance.len()];
    for (k, &sid) in tr.provenance.iter().enumerate() {
        to_t[sid] = k;
    }
    let ctx = Ctx {
        c,
        a,
        t,
        sk: &sk,
        to_t,
        tr: &tr,
    };
    let f = c.field();
    let cx = build_chain_complex(c, n_max, budget)?;
    let t_full = build_chain_complex(&tr.graded.cat, n_max, budget)?;
    let one = conjugacy_classes(&tr.graded.group).remove(0);
    let tx: ChainComplex = class_subcomplex(&t_full, &tr.graded, &one)?;
    let m = chain_g_action(a, &cx)?;
    let tc = &tr.graded.cat;

    let mut a_mats = Vec::new();
    let mut b_mats = Vec::new();
    for n in 0..=cx.top() {
        let (src, tgt) = (cx.basis(n), tx.basis(n));
        let cols = src
            .tuples()
            .par_iter()
            .map(|tup| {
                collect_terms::<Vec<usize>>(ctx.a_column(tup), |k| tgt.index_of(k), |_| {
                    Error::ClassLeak("A lands outside the trivial class".into())
                })
            })
            .collect::<Result<Vec<_>>>()?;
        a_mats.push(matrix_from_columns(f, tgt.len(), cols)?);
        let cols = tgt
            .tuples()
            .par_iter()
            .map(|tup| {
                collect_terms::<Vec<usize>>(ctx.b_column(tup), |k| src.index_of(k), |_| {
                    Error::Malformed("B lands outside the chain basis".into())
                })
            })
            .collect::<Result<Vec<_>>>()?;
        b_mats.push(matrix_from_columns(f, src.len(), cols)?);
    }

    let mut checks = Vec::new();
    let mut kills = None;
    let mut commutes = None;
    let mut ab = None;
    let mut ba = None;
    for n in 0..=cx.top() {
        let w = w_span(&cx, &m, n)?;
        if kills.is_none() {
            let ch = zero_check("", &a_mats[n].mul(&w).unwrap(), |j| format!("degree {n}, spanning vector {j}"));
            kills = ch.witness;
        }
        if n >= 1 && commutes.is_none() {
            let lhs = a_mats[n - 1].mul(cx.boundary(n)).unwrap();
            let rhs = tx.boundary(n).mul(&a_mats[n]).unwrap();
            let ch = zero_check("", &lhs.sub(&rhs).unwrap(), |j| cx.basis(n).describe(c, j));
            commutes = ch.witness;
        }
        if ab.is_none() {
            let prod = a_mats[n].mul(&b_mats[n]).unwrap();
            let diff = prod.sub(&Matrix::identity(f, tx.basis(n).len())).unwrap();
            ab = zero_check("", &diff, |j| tx.basis(n).describe(tc, j)).witness;
        }
        if ba.is_none() {
            let prod = b_mats[n].mul(&a_mats[n]).unwrap();
            let diff = prod.sub(&Matrix::identity(f, cx.basis(n).len())).unwrap();
            if !w.spans(&diff).unwrap() {
                ba = Some(format!("degree {n}: BA − id leaves ⟨s·b − b⟩"));
            }
        }
    }
    checks.push(Check::from_witness("A vanishes on s·b − b", kills));
    checks.push(Check::from_witness("A d = d A", commutes));
    checks.push(Check::from_witness("A B = id", ab));
    checks.push(Check::from_witness("B A = id on coinvariants", ba));
    let co = coinvariants(&cx, &m)?;
    checks.push(co.well_defined.clone());
    let transversal_homology = tx.homology_dims();
    checks.push(Check::equal(
        "dim H_n(C_G) = dim HH^{1}_n(C_T[G])",
        format!("{:?}", co.homology),
        format!("{transversal_homology:?}"),
    ));
    Ok(ChainIso {
        a: a_mats,
        b: b_mats,
        checks,
        coinvariant_homology: co.homology,
        transversal_homology,
    })
}
