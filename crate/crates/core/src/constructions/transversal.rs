use super::{check_transversal, SkewOutput};
use crate::check::Check;
use crate::error::Result;
use crate::group::Transversal;
use crate::lincat::{GActionOnCat, GradedLinCat, LinCat, LinFunctor};
use crate::linalg::LinComb;

/// The full subcategory of `C[G]` on a transversal, with its inclusion.
#[derive(Clone, Debug)]
pub struct TransversalOutput {
    pub graded: GradedLinCat,
    /// Skew-category id of each basis morphism.
    pub provenance: Vec<usize>,
    /// Skew-category object of each object.
    pub objects: Vec<usize>,
    pub inclusion: LinFunctor,
    /// Results of the `a∘b = id`, `b∘a = id` checks for the isomorphisms
    /// `a = [id_x]^s: u → x`, `b = [id_u]^{s⁻¹}: x → u` with `x = s·u`.
    pub iso_checks: Vec<Check>,
}

/// Full subcategory on `objects` (kept in the given order) and the ids of its morphisms.
pub fn full_subcategory(c: &LinCat, objects: &[usize]) -> Result<(LinCat, Vec<usize>)> {
    let mut b = LinCat::builder(c.field());
    let mut new_obj = vec![usize::MAX; c.num_objects()];
    for (i, &x) in objects.iter().enumerate() {
        b.object(c.object_name(x).to_string());
        new_obj[x] = i;
    }
    let mut kept = Vec::new();
    let mut new_mor = vec![usize::MAX; c.num_morphisms()];
    for f in 0..c.num_morphisms() {
        let m = c.morphism(f);
        if new_obj[m.src] != usize::MAX && new_obj[m.tgt] != usize::MAX {
            new_mor[f] = b.morphism(m.name.clone(), new_obj[m.src], new_obj[m.tgt]);
            kept.push(f);
        }
    }
    let relabel = |comb: &LinComb| -> LinComb { comb.iter().map(|(m, v)| (new_mor[*m], v.clone())).collect() };
    for (i, &x) in objects.iter().enumerate() {
        b.identity(i, relabel(c.identity(x)));
    }
    for ((g, f), comb) in c.composition_table() {
        if new_mor[g] != usize::MAX && new_mor[f] != usize::MAX {
            b.compose(new_mor[g], new_mor[f], relabel(comb));
        }
    }
    Ok((b.build()?, kept))
}

/// `C_T[G] ⊂ C[G]`: the full graded subcategory on the representatives, its fully
/// faithful inclusion, and the verified orbit isomorphisms that make it dense.
pub fn transversal_subcategory(sk: &SkewOutput, a: &GActionOnCat, t: &Transversal) -> Result<TransversalOutput> {
    check_transversal(a, t)?;
    let g = a.group();
    let skc = sk.cat();
    let (cat, kept) = full_subcategory(skc, &t.reps)?;
    let degrees = kept.iter().map(|&m| sk.graded.degree(m)).collect();
    let graded = GradedLinCat::new(cat, g.clone(), degrees)?;
    let one = skc.field().one();
    let mut inclusion = LinFunctor::new(
        &graded.cat,
        skc,
        t.reps.clone(),
        kept.iter().map(|&m| vec![(m, one.clone())]).collect(),
    )?;
    let lift = |comb: &LinComb, s: usize| -> LinComb {
        comb.iter().map(|(m, v)| (sk.id(*m, s), v.clone())).collect()
    };
    let mut iso_checks = Vec::new();
    for x in 0..skc.num_objects() {
        let (u, s) = (t.rep(x), t.witness(x));
        // identities of C[G] are [id]^1, so the base identity is the degree-1 slice
        let base_id = |y: usize| -> LinComb {
            skc.identity(y).iter().map(|(m, v)| (sk.provenance[*m].0, v.clone())).collect()
        };
        let a_iso = lift(&base_id(x), s);
        let b_iso = lift(&base_id(u), g.inv(s));
        let ab = skc.compose(&a_iso, &b_iso);
        let ba = skc.compose(&b_iso, &a_iso);
        let name = format!("orbit isomorphism {} ≅ {}", skc.object_name(u), skc.object_name(x));
        let witness = if &ab != skc.identity(x) {
            Some(format!("a∘b = {}", skc.describe_comb(&ab)))
        } else if &ba != skc.identity(u) {
            Some(format!("b∘a = {}", skc.describe_comb(&ba)))
        } else {
            None
        };
        iso_checks.push(Check::from_witness(name, witness));
    }
    if iso_checks.iter().all(|c| c.passed) {
        inclusion.mark_dense();
    }
    Ok(TransversalOutput {
        graded,
        provenance: kept,
        objects: t.reps.clone(),
        inclusion,
        iso_checks,
    })
}
