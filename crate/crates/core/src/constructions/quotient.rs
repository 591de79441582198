use std::collections::HashMap;
use std::sync::Arc;

use super::{check_transversal, require_free};
use crate::error::Result;
use crate::group::Transversal;
use crate::lincat::{GActionOnCat, GradedLinCat, LinCat};
use crate::linalg::LinComb;

/// The quotient `C/G` of a free action, graded as determined by the transversal.
#[derive(Clone, Debug)]
pub struct QuotientOutput {
    pub graded: GradedLinCat,
    /// `(f, s)` for each basis morphism `[f]^s`, where `f ∈ hom_C(s·u_α, u_β)`.
    pub provenance: Vec<(usize, usize)>,
    /// Representative object of each orbit, in orbit order.
    pub objects: Vec<usize>,
}

/// Builds `C/G` for a free object action: one object per orbit, `hom(α, β)` modelled
/// as `⊕_s hom_C(s·u_α, u_β)` with the `s` summand in degree `s`, and composition
/// `[g]^t ∘ [f]^s = [g ∘ (t·f)]^{ts}`.
pub fn quotient_category(c: &LinCat, a: &GActionOnCat, t: &Transversal) -> Result<QuotientOutput> {
    require_free(a, c.objects())?;
    check_transversal(a, t)?;
    let g = a.group();
    let orbit_of: Vec<usize> = (0..c.num_objects())
        .map(|x| t.position(t.rep(x)).expect("rep is listed"))
        .collect();
    let mut b = LinCat::builder(c.field());
    for &u in &t.reps {
        b.object(format!("{{{}}}", c.object_name(u)));
    }
    let mut provenance = Vec::new();
    let mut degrees = Vec::new();
    let mut index = HashMap::new();
    for s in g.elements() {
        for f in 0..c.num_morphisms() {
            let m = c.morphism(f);
            if t.rep(m.tgt) != m.tgt || t.witness(m.src) != s {
                continue;
            }
            let id = b.morphism(
                format!("[{}]^{}", m.name, g.name(s)),
                orbit_of[m.src],
                orbit_of[m.tgt],
            );
            index.insert((f, s), id);
            provenance.push((f, s));
            degrees.push(s);
        }
    }
    for (alpha, &u) in t.reps.iter().enumerate() {
        let id = c
            .identity(u)
            .iter()
            .map(|(m, v)| (index[&(*m, g.identity())], v.clone()))
            .collect();
        b.identity(alpha, id);
    }
    for (gid, &(gm, tt)) in provenance.iter().enumerate() {
        // g ∈ hom(t·u_β, u_γ); f ∈ hom(s·u_α, u_β)
        let u_beta = t.rep(c.morphism(gm).src);
        let unit_g: LinComb = vec![(gm, c.field().one())];
        for (fid, &(fm, s)) in provenance.iter().enumerate() {
            if c.morphism(fm).tgt != u_beta {
                continue;
            }
            let ts = g.mul(tt, s);
            let comb: LinComb = c
                .compose(&unit_g, a.act(tt, fm))
                .into_iter()
                .map(|(k, v)| (index[&(k, ts)], v))
                .collect();
            if !comb.is_empty() {
                b.compose(gid, fid, comb);
            }
        }
    }
    let cat = b.build()?;
    let graded = GradedLinCat::new(cat, Arc::clone(g), degrees)?;
    Ok(QuotientOutput {
        graded,
        provenance,
        objects: t.reps.clone(),
    })
}
