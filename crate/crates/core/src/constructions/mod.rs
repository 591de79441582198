//! Category-level constructions: the skew category `C[G]`, the matrix category
//! `M_G(C)` with its equivalence `L`, the quotient `C/G` of a free action, and the
//! full subcategory `C_T[G]` on a transversal.

mod matrix_cat;
mod quotient;
mod skew;
mod transversal;

pub use matrix_cat::{matrix_category, MatrixCatOutput};
pub use quotient::{quotient_category, QuotientOutput};
pub use skew::{skew, skew_of_functor, SkewOutput};
pub use transversal::{full_subcategory, transversal_subcategory, TransversalOutput};

use crate::check::Check;
use crate::error::{Error, Result};
use crate::group::Transversal;
use crate::lincat::GActionOnCat;

/// Refuses non-free object actions, naming an object with a nontrivial stabilizer.
pub fn require_free(a: &GActionOnCat, objects: &[String]) -> Result<()> {
    let g = a.group();
    for x in 0..a.on_objects().set_size() {
        if let Some(s) = a
            .on_objects()
            .stabilizer(x)
            .into_iter()
            .find(|&s| s != g.identity())
        {
            return Err(Error::NonFreeAction(format!(
                "{} fixes object {}",
                g.name(s),
                objects[x]
            )));
        }
    }
    Ok(())
}

/// Checks that `t` is a transversal of the object action: representatives in distinct
/// orbits covering everything, and `x = w·rep(x)` for every witness.
pub fn check_transversal(a: &GActionOnCat, t: &Transversal) -> Result<()> {
    let n = a.on_objects().set_size();
    if t.rep_of.len() != n {
        return Err(Error::InvalidTransversal("wrong number of points".into()));
    }
    for (x, &(u, w)) in t.rep_of.iter().enumerate() {
        if !t.reps.contains(&u) || w >= a.group().order() || a.act_obj(w, u) != x {
            return Err(Error::InvalidTransversal(format!(
                "point {x} is not witnessed by its representative"
            )));
        }
    }
    let orbits = a.on_objects().orbits().len();
    if orbits != t.reps.len() {
        return Err(Error::InvalidTransversal(format!(
            "{} representatives for {orbits} orbits",
            t.reps.len()
        )));
    }
    Ok(())
}

/// Checks `quotient_category(c, a, t) ≅ C_T[G]` by the bijection matching `[f]^s` with
/// `[f]^s`: equal hom dimensions per degree and matched structure constants.
pub fn compare_quotient_with_transversal(q: &QuotientOutput, tr: &TransversalOutput, sk: &SkewOutput) -> Check {
    let name = "quotient category ≅ transversal subcategory";
    let qc = &q.graded.cat;
    let tc = &tr.graded.cat;
    if qc.num_objects() != tc.num_objects() || qc.num_morphisms() != tc.num_morphisms() {
        return Check::fail(
            name,
            format!(
                "sizes differ: {} objects / {} morphisms vs {} / {}",
                qc.num_objects(),
                qc.num_morphisms(),
                tc.num_objects(),
                tc.num_morphisms()
            ),
        );
    }
    // quotient morphism -> transversal morphism through the shared (f, s) labels
    let mut to_t = vec![usize::MAX; qc.num_morphisms()];
    for (qm, &(f, s)) in q.provenance.iter().enumerate() {
        let Some(tm) = tr
            .provenance
            .iter()
            .position(|&sm| sk.provenance[sm] == (f, s))
        else {
            return Check::fail(name, format!("{} has no partner", qc.morphism(qm).name));
        };
        to_t[qm] = tm;
    }
    for (qm, &tm) in to_t.iter().enumerate() {
        if q.graded.degree(qm) != tr.graded.degree(tm) {
            return Check::fail(name, format!("degree of {} differs", qc.morphism(qm).name));
        }
        let (qs, qt) = (qc.morphism(qm).src, qc.morphism(qm).tgt);
        let (ts, tt) = (tc.morphism(tm).src, tc.morphism(tm).tgt);
        if (q.objects[qs], q.objects[qt]) != (tr.objects[ts], tr.objects[tt]) {
            return Check::fail(name, format!("endpoints of {} differ", qc.morphism(qm).name));
        }
    }
    let map = |comb: &crate::linalg::LinComb| -> crate::linalg::LinComb {
        let mut v: Vec<_> = comb.iter().map(|(m, c)| (to_t[*m], c.clone())).collect();
        v.sort_by_key(|(m, _)| *m);
        v
    };
    for g in 0..qc.num_morphisms() {
        for f in 0..qc.num_morphisms() {
            if qc.morphism(g).src != qc.morphism(f).tgt {
                continue;
            }
            let lhs = map(&qc.compose_basis(g, f).to_vec());
            let rhs = tc.compose_basis(to_t[g], to_t[f]).to_vec();
            if lhs != rhs {
                return Check::fail(
                    name,
                    format!(
                        "{} ∘ {}: {} vs {}",
                        qc.morphism(g).name,
                        qc.morphism(f).name,
                        tc.describe_comb(&lhs),
                        tc.describe_comb(&rhs)
                    ),
                );
            }
        }
    }
    Check::pass(name)
}
