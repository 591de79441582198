//! End-to-end verification pipelines. Each returns a [`Section`]: the dimensions it
//! computed and the checks it ran, with witnesses on failure.

use serde::Serialize;

use crate::check::Check;
use crate::cohomology::{
    self, build_cochain_complex, check_cup_laws, cochain_g_action, invariants, quasi_iso_check,
    restrict_along_functor, transversal_cochain_iso, CochainComplex, CupSampler,
};
use crate::constructions::{
    compare_quotient_with_transversal, matrix_category, quotient_category, require_free, skew,
    skew_of_functor, transversal_subcategory,
};
use crate::error::{Error, Result};
use crate::group::{conjugacy_classes, orbits_transversal, Transversal};
use crate::hochschild::{
    self, build_chain_complex, chain_g_action, check_chain_action, coinvariants, transversal_chain_iso,
};
use crate::lincat::{algebra_of, GActionOnCat, GradedLinCat, LinCat};
use crate::linalg::Field;

#[derive(Clone, Copy, Debug)]
pub struct Options {
    pub n_max: usize,
    pub budget: usize,
    /// Sampled pairs for cup-product identities.
    pub samples: usize,
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            n_max: 2,
            budget: hochschild::DEFAULT_BUDGET,
            samples: 100,
            seed: 0x5eed,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NamedDims {
    pub name: String,
    pub dims: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Section {
    pub name: String,
    pub dims: Vec<NamedDims>,
    pub checks: Vec<Check>,
}

impl Section {
    fn new(name: &str) -> Self {
        Section {
            name: name.into(),
            dims: Vec::new(),
            checks: Vec::new(),
        }
    }

    fn dims(&mut self, name: &str, dims: Vec<usize>) {
        self.dims.push(NamedDims {
            name: name.into(),
            dims,
        });
    }

    fn extend(&mut self, prefix: &str, checks: Vec<Check>) {
        self.checks.extend(checks.into_iter().map(|mut c| {
            c.name = format!("{prefix}: {}", c.name);
            c
        }));
    }

    /// All listed dimension vectors agree (truncated to `n_max + 1` entries).
    fn all_equal(&mut self, name: &str, n: usize, names: &[&str]) {
        let pick = |k: &str| {
            self.dims
                .iter()
                .find(|d| d.name == k)
                .map(|d| d.dims[..=n.min(d.dims.len() - 1)].to_vec())
        };
        let first = pick(names[0]);
        let witness = names[1..].iter().find(|k| pick(k) != first).map(|k| {
            format!("{} = {:?} but {} = {:?}", names[0], first, k, pick(k))
        });
        self.checks.push(Check::from_witness(name, witness));
    }

    pub fn passed(&self) -> bool {
        crate::check::all_passed(&self.checks)
    }
}

/// Refuses checks that rely on exactness of (co)invariants.
pub fn require_coprime(field: Field, order: usize) -> Result<()> {
    if field.divides(order) {
        return Err(Error::CharacteristicDividesOrder {
            characteristic: field.characteristic(),
            order,
        });
    }
    Ok(())
}

/// `d∘d = 0` on the chain and cochain complexes, and on every class subcomplex when graded.
pub fn complexes(c: &LinCat, graded: Option<&GradedLinCat>, o: Options) -> Result<Section> {
    let mut s = Section::new("complexes");
    let cx = build_chain_complex(c, o.n_max, o.budget)?;
    let cc = build_cochain_complex(c, o.n_max, o.budget)?;
    s.checks.push(cx.check_dd(c));
    s.checks.push(cc.check_dd(c));
    s.dims("HH_n", cx.homology_dims());
    s.dims("HH^n", cc.cohomology_dims());
    if let Some(b) = graded {
        for (_, sub) in hochschild::class_decomposition(&cx, b)? {
            s.checks.push(sub.check_dd(c));
        }
        for (_, sub) in cohomology::class_decomposition(&cc, b)? {
            s.checks.push(sub.check_dd(c));
        }
    }
    Ok(s)
}

/// Class decomposition of a graded category: block-diagonal (co)boundaries, and class
/// dimensions summing to the totals, for chains, homology, cochains and cohomology; the
/// trivial-class cochains are closed under cup products.
pub fn class_decomposition(b: &GradedLinCat, o: Options) -> Result<Section> {
    let mut s = Section::new("class decomposition");
    let c = &b.cat;
    let cx = build_chain_complex(c, o.n_max, o.budget)?;
    let cc = build_cochain_complex(c, o.n_max, o.budget)?;
    let chains = hochschild::class_decomposition(&cx, b)?;
    s.checks.push(Check::pass("boundary block-diagonal in the class-refined basis"));
    let cochains = cohomology::class_decomposition(&cc, b)?;
    s.checks.push(Check::pass("coboundary block-diagonal in the class-refined basis"));
    let sum = |v: Vec<Vec<usize>>| -> Vec<usize> {
        (0..v[0].len()).map(|n| v.iter().map(|d| d[n]).sum()).collect()
    };
    s.dims("C_n", cx.dims());
    s.dims("HH_n", cx.homology_dims());
    s.dims("C^n", cc.dims());
    s.dims("HH^n", cc.cohomology_dims());
    for (cl, sub) in &chains {
        s.dims(&format!("HH_n class {}", cl.label(&b.group)), sub.homology_dims());
    }
    for (cl, sub) in &cochains {
        s.dims(&format!("HH^n class {}", cl.label(&b.group)), sub.cohomology_dims());
    }
    s.dims("Σ_D C_n", sum(chains.iter().map(|(_, x)| x.dims()).collect()));
    s.dims("Σ_D HH_n", sum(chains.iter().map(|(_, x)| x.homology_dims()).collect()));
    s.dims("Σ_D C^n", sum(cochains.iter().map(|(_, x)| x.dims()).collect()));
    s.dims("Σ_D HH^n", sum(cochains.iter().map(|(_, x)| x.cohomology_dims()).collect()));
    let top = o.n_max + 1;
    s.all_equal("Σ_D dim C^D_n = dim C_n", top, &["C_n", "Σ_D C_n"]);
    s.all_equal("Σ_D dim HH^D_n = dim HH_n", o.n_max, &["HH_n", "Σ_D HH_n"]);
    s.all_equal("Σ_D dim C^n_D = dim C^n", top, &["C^n", "Σ_D C^n"]);
    s.all_equal("Σ_D dim HH^n_D = dim HH^n", o.n_max, &["HH^n", "Σ_D HH^n"]);
    s.checks.push(trivial_class_cup_closure(b, &cc, o)?);
    Ok(s)
}

fn trivial_class_cup_closure(b: &GradedLinCat, cc: &CochainComplex, o: Options) -> Result<Check> {
    let g = &b.group;
    let one = |k: &cohomology::CochainKey| cohomology::cochain_class_element(b, k) == g.identity();
    let pos = cc.positions(one);
    let mut sampler = CupSampler::new(o.seed);
    let top = cc.top();
    for k in 0..o.samples {
        let p = k % (top + 1);
        let q = (k / (top + 1)) % (top + 1 - p);
        let psi = sampler.sparse(p, &pos[p], cc.field(), 3);
        let phi = sampler.sparse(q, &pos[q], cc.field(), 3);
        let prod = cohomology::cup(&b.cat, cc, &psi, &phi)?;
        if let Some((i, _)) = prod.coords.iter().find(|(i, _)| !one(cc.basis(p + q).key(*i))) {
            return Ok(Check::fail(
                "trivial class closed under cup",
                format!("product has a component on {}", cc.basis(p + q).key(*i).describe(&b.cat)),
            ));
        }
    }
    Ok(Check::pass("trivial class closed under cup"))
}

/// Free action: the chain isomorphism between coinvariants and the trivial class of the
/// transversal subcategory, and the quotient category's trivial-class homology.
pub fn free_chains(c: &LinCat, a: &GActionOnCat, t: &Transversal, o: Options) -> Result<Section> {
    let mut s = Section::new("free action: chains");
    require_coprime(c.field(), a.group().order())?;
    let iso = transversal_chain_iso(c, a, t, o.n_max, o.budget)?;
    s.extend("A/B", iso.checks);
    s.dims("H_n(C_G)", iso.coinvariant_homology);
    s.dims("HH^{1}_n(C_T[G])", iso.transversal_homology);
    let sk = skew(c, a)?;
    let tr = transversal_subcategory(&sk, a, t)?;
    let q = quotient_category(c, a, t)?;
    s.checks.extend(tr.iso_checks.clone());
    s.checks.push(compare_quotient_with_transversal(&q, &tr, &sk));
    let qx = build_chain_complex(&q.graded.cat, o.n_max, o.budget)?;
    let one = conjugacy_classes(&q.graded.group).remove(0);
    s.dims("HH^{1}_n(C/G)", hochschild::class_subcomplex(&qx, &q.graded, &one)?.homology_dims());
    s.all_equal("dim H_n(C_G) = dim HH^{1}_n(C_T[G]) = dim HH^{1}_n(C/G)", o.n_max, &["H_n(C_G)", "HH^{1}_n(C_T[G])", "HH^{1}_n(C/G)"]);
    Ok(s)
}

/// Any action: `H_n(C_•(C)_G)`, `(HH_n)_G` and `HH^{1}_n(C[G])` computed directly, and the
/// same numbers through the free action on `M_G(C)`.
pub fn skew_chains(c: &LinCat, a: &GActionOnCat, o: Options) -> Result<Section> {
    let mut s = Section::new("any action: chains");
    require_coprime(c.field(), a.group().order())?;
    let g = a.group();
    let cx = build_chain_complex(c, o.n_max, o.budget)?;
    let act = chain_g_action(a, &cx)?;
    s.extend("G on C_•(C)", check_chain_action(a, c, &cx, &act));
    let co = coinvariants(&cx, &act)?;
    s.checks.push(co.well_defined.clone());
    s.dims("H_n(C_G)", co.homology.clone());
    s.dims("(HH_n)_G", co.homology_coinvariants.clone());
    let one = conjugacy_classes(g).remove(0);
    let sk = skew(c, a)?;
    let sx = build_chain_complex(sk.cat(), o.n_max, o.budget)?;
    s.dims("HH^{1}_n(C[G])", hochschild::class_subcomplex(&sx, &sk.graded, &one)?.homology_dims());

    let m = matrix_category(c, a)?;
    let (t, free) = orbits_transversal(m.action.on_objects(), None);
    s.checks.push(Check::equal("M_G(C) action is free", free, true));
    require_free(&m.action, m.cat.objects())?;
    let iso = transversal_chain_iso(&m.cat, &m.action, &t, o.n_max, o.budget)?;
    s.extend("A/B on M_G(C)", iso.checks);
    s.dims("H_n(M_G(C)_G)", iso.coinvariant_homology);
    s.dims("HH^{1}_n(M_G(C)_T[G])", iso.transversal_homology);
    let sk_m = skew(&m.cat, &m.action)?;
    let lg = skew_of_functor(&m.functor_l, &sk_m, &sk)?;
    s.checks.push(Check::equal("L[G] fully faithful", lg.is_fully_faithful(), true));
    s.checks.push(Check::equal("L[G] dense", lg.is_dense(), true));
    let mx = build_chain_complex(sk_m.cat(), o.n_max, o.budget)?;
    s.dims("HH^{1}_n(M_G(C)[G])", hochschild::class_subcomplex(&mx, &sk_m.graded, &one)?.homology_dims());
    s.all_equal(
        "coinvariants and trivial-class homology agree",
        o.n_max,
        &[
            "H_n(C_G)",
            "(HH_n)_G",
            "HH^{1}_n(C[G])",
            "H_n(M_G(C)_G)",
            "HH^{1}_n(M_G(C)_T[G])",
            "HH^{1}_n(M_G(C)[G])",
        ],
    );
    Ok(s)
}

/// Free action: the cochain isomorphism between invariants and the trivial class of the
/// transversal subcategory, with multiplicativity, and restriction along the inclusion.
pub fn free_cochains(c: &LinCat, a: &GActionOnCat, t: &Transversal, o: Options) -> Result<Section> {
    let mut s = Section::new("free action: cochains");
    require_coprime(c.field(), a.group().order())?;
    let iso = transversal_cochain_iso(c, a, t, o.n_max, o.budget, o.samples, o.seed)?;
    s.extend("A/B", iso.checks);
    s.dims("H^n((C^•)^G)", iso.invariant_cohomology);
    s.dims("HH^n_{1}(C_T[G])", iso.transversal_cohomology);
    let sk = skew(c, a)?;
    let tr = transversal_subcategory(&sk, a, t)?;
    let (ss, rr) = restrict_trivial_class(
        "inclusion C_T[G] ⊂ C[G]",
        &tr.inclusion,
        (&tr.graded, &sk.graded),
        o,
        &mut s,
    )?;
    s.dims("HH^n_{1}(C[G])", ss);
    s.dims("HH^n_{1}(C_T[G]) (restricted)", rr);
    s.all_equal(
        "dim H^n((C^•)^G) = dim HH^n_{1}(C_T[G]) = dim HH^n_{1}(C[G])",
        o.n_max,
        &["H^n((C^•)^G)", "HH^n_{1}(C_T[G])", "HH^n_{1}(C[G])"],
    );
    Ok(s)
}

/// Restriction along a homogeneous fully faithful dense `F: B → B′`, full and on the
/// trivial class; returns the trivial-class cohomology of `B′` and `B`.
fn restrict_trivial_class(
    label: &str,
    f: &crate::lincat::LinFunctor,
    (src, tgt): (&GradedLinCat, &GradedLinCat),
    o: Options,
    s: &mut Section,
) -> Result<(Vec<usize>, Vec<usize>)> {
    let cs = build_cochain_complex(&src.cat, o.n_max, o.budget)?;
    let ct = build_cochain_complex(&tgt.cat, o.n_max, o.budget)?;
    let r = restrict_along_functor(f, &src.cat, &tgt.cat, &cs, &ct, o.samples, o.seed)?;
    s.extend(label, r.checks);
    let one = conjugacy_classes(&src.group).remove(0);
    let cls_s = cohomology::class_subcomplex(&cs, src, &one)?;
    let cls_t = cohomology::class_subcomplex(&ct, tgt, &one)?;
    let is_one_s = |k: &cohomology::CochainKey| cohomology::cochain_class_element(src, k) == src.group.identity();
    let is_one_t = |k: &cohomology::CochainKey| cohomology::cochain_class_element(tgt, k) == tgt.group.identity();
    let (ps, pt) = (cs.positions(is_one_s), ct.positions(is_one_t));
    let mut leak = None;
    let mut maps = Vec::new();
    for n in 0..=cs.top() {
        let outside: Vec<usize> = (0..cs.basis(n).len()).filter(|i| !ps[n].contains(i)).collect();
        let cross = r.maps[n].select_rows(&outside).select_cols(&pt[n]);
        if leak.is_none() && !cross.is_zero() {
            leak = Some(format!("degree {n}"));
        }
        maps.push(r.maps[n].select_rows(&ps[n]).select_cols(&pt[n]));
    }
    s.checks.push(Check::from_witness(format!("{label}: restriction preserves the trivial class"), leak));
    s.checks.push(quasi_iso_check(
        &format!("{label}: quasi-isomorphism on the trivial class"),
        &maps,
        &cls_t,
        &cls_s,
    ));
    Ok((cls_t.cohomology_dims(), cls_s.cohomology_dims()))
}

/// Any action: `H^n((C^•(C))^G)` and `(HH^n)^G` directly, and the chain of cochain maps
/// `C[G] ← M_G(C)[G] ⊃ M_G(C)_T[G] ≅ (C^•(M_G(C)))^G ← (C^•(C))^G` checked step by step.
pub fn skew_cochains(c: &LinCat, a: &GActionOnCat, o: Options) -> Result<Section> {
    let mut s = Section::new("any action: cochains");
    require_coprime(c.field(), a.group().order())?;
    let g = a.group();
    let cc = build_cochain_complex(c, o.n_max, o.budget)?;
    let act_c = cochain_g_action(c, a, &cc)?;
    s.extend("G on C^•(C)", cohomology::check_cochain_action(a, c, &cc, &act_c));
    let inv_c = invariants(&cc, &act_c)?;
    s.dims("H^n((C^•)^G)", inv_c.cohomology.clone());
    s.dims("(HH^n)^G", inv_c.cohomology_invariants.clone());

    let sk = skew(c, a)?;
    let m = matrix_category(c, a)?;
    let sk_m = skew(&m.cat, &m.action)?;
    let lg = skew_of_functor(&m.functor_l, &sk_m, &sk)?;
    let (hh_c, hh_m) = restrict_trivial_class("L[G]", &lg, (&sk_m.graded, &sk.graded), o, &mut s)?;
    s.dims("HH^n_{1}(C[G])", hh_c);
    s.dims("HH^n_{1}(M_G(C)[G])", hh_m);

    let (t, _) = orbits_transversal(m.action.on_objects(), None);
    let tr = transversal_subcategory(&sk_m, &m.action, &t)?;
    let (_, hh_t) = restrict_trivial_class("M_G(C)_T[G] ⊂ M_G(C)[G]", &tr.inclusion, (&tr.graded, &sk_m.graded), o, &mut s)?;
    s.dims("HH^n_{1}(M_G(C)_T[G])", hh_t);

    let iso = transversal_cochain_iso(&m.cat, &m.action, &t, o.n_max, o.budget, o.samples, o.seed)?;
    s.extend("A/B on M_G(C)", iso.checks);
    s.dims("H^n((C^•(M_G(C)))^G)", iso.invariant_cohomology);

    let cm = build_cochain_complex(&m.cat, o.n_max, o.budget)?;
    let r = restrict_along_functor(&m.functor_l, &m.cat, c, &cm, &cc, o.samples, o.seed)?;
    s.extend("L", r.checks);
    let act_m = cochain_g_action(&m.cat, &m.action, &cm)?;
    let mut equivariant = None;
    'eq: for el in g.elements() {
        for n in 0..=cc.top() {
            let lhs = r.maps[n].mul(&act_c[el][n])?;
            let rhs = act_m[el][n].mul(&r.maps[n])?;
            if lhs != rhs {
                equivariant = Some(format!("s = {}, degree {n}", g.name(el)));
                break 'eq;
            }
        }
    }
    s.checks.push(Check::from_witness("L: restriction is G-equivariant", equivariant));
    s.all_equal(
        "invariants and trivial-class cohomology agree",
        o.n_max,
        &[
            "H^n((C^•)^G)",
            "(HH^n)^G",
            "H^n((C^•(M_G(C)))^G)",
            "HH^n_{1}(M_G(C)_T[G])",
            "HH^n_{1}(M_G(C)[G])",
            "HH^n_{1}(C[G])",
        ],
    );
    Ok(s)
}

/// Leibniz, unit and graded-commutativity checks for the cup product.
pub fn cup_laws(c: &LinCat, o: Options) -> Result<Section> {
    let mut s = Section::new("cup product");
    let cc = build_cochain_complex(c, o.n_max, o.budget)?;
    s.checks = check_cup_laws(c, &cc, o.samples, o.seed)?;
    Ok(s)
}

/// The category complexes against the ordinary complexes of the algebra `a(C)`.
pub fn oracle(c: &LinCat, o: Options) -> Result<Section> {
    let mut s = Section::new("oracle a(C)");
    let alg = algebra_of(c);
    let cx = build_chain_complex(c, o.n_max, o.budget)?;
    let ax = build_chain_complex(&alg, o.n_max, o.budget)?;
    let cc = build_cochain_complex(c, o.n_max, o.budget)?;
    let ac = build_cochain_complex(&alg, o.n_max, o.budget)?;
    s.checks.push(ax.check_dd(&alg));
    s.checks.push(ac.check_dd(&alg));
    s.dims("HH_n(C)", cx.homology_dims());
    s.dims("HH_n(a(C))", ax.homology_dims());
    s.dims("HH^n(C)", cc.cohomology_dims());
    s.dims("HH^n(a(C))", ac.cohomology_dims());
    s.all_equal("homology of C equals homology of a(C)", o.n_max, &["HH_n(C)", "HH_n(a(C))"]);
    s.all_equal("cohomology of C equals cohomology of a(C)", o.n_max, &["HH^n(C)", "HH^n(a(C))"]);
    Ok(s)
}

/// `HH_n(M_G(C)) = HH_n(C)` and `HH^n(M_G(C)) = HH^n(C)`.
pub fn equivalence(c: &LinCat, a: &GActionOnCat, o: Options) -> Result<Section> {
    let mut s = Section::new("equivalence M_G(C) ≃ C");
    let m = matrix_category(c, a)?;
    s.checks.push(Check::equal("L fully faithful", m.functor_l.is_fully_faithful(), true));
    s.checks.push(Check::equal("L dense", m.functor_l.is_dense(), true));
    s.dims("HH_n(C)", build_chain_complex(c, o.n_max, o.budget)?.homology_dims());
    s.dims("HH_n(M_G(C))", build_chain_complex(&m.cat, o.n_max, o.budget)?.homology_dims());
    s.dims("HH^n(C)", build_cochain_complex(c, o.n_max, o.budget)?.cohomology_dims());
    s.dims("HH^n(M_G(C))", build_cochain_complex(&m.cat, o.n_max, o.budget)?.cohomology_dims());
    s.all_equal("dim HH_n(M_G(C)) = dim HH_n(C)", o.n_max, &["HH_n(C)", "HH_n(M_G(C))"]);
    s.all_equal("dim HH^n(M_G(C)) = dim HH^n(C)", o.n_max, &["HH^n(C)", "HH^n(M_G(C))"]);
    Ok(s)
}

/// Everything that applies to `(C, a)`: complexes, cup laws, the oracle, the skew class
/// decomposition, the free-action isomorphisms (when free) and the general pipelines.
pub fn verify_all(c: &LinCat, a: &GActionOnCat, t: Option<&Transversal>, o: Options) -> Result<Vec<Section>> {
    require_coprime(c.field(), a.group().order())?;
    let sk = skew(c, a)?;
    let mut out = vec![
        complexes(c, None, o)?,
        cup_laws(c, o)?,
        oracle(c, o)?,
        class_decomposition(&sk.graded, o)?,
    ];
    let (default_t, free) = orbits_transversal(a.on_objects(), None);
    if free {
        let t = t.unwrap_or(&default_t);
        out.push(free_chains(c, a, t, o)?);
        out.push(free_cochains(c, a, t, o)?);
    }
    out.push(skew_chains(c, a, o)?);
    out.push(skew_cochains(c, a, o)?);
    out.push(equivalence(c, a, o)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    const P: Field = Field::Prime(101);

    #[test]
    fn dual_numbers_pipelines() {
        let (c, a) = fixtures::dual_numbers_c2(P);
        let o = Options {
            n_max: 2,
            samples: 40,
            ..Options::default()
        };
        for s in verify_all(&c, &a, None, o).unwrap() {
            assert!(s.passed(), "{}: {:?}", s.name, s.checks.iter().filter(|c| !c.passed).collect::<Vec<_>>());
        }
    }

    #[test]
    fn characteristic_two_is_refused() {
        let (c, a) = fixtures::dual_numbers_c2(Field::Prime(2));
        assert!(matches!(
            skew_chains(&c, &a, Options::default()),
            Err(Error::CharacteristicDividesOrder { .. })
        ));
    }
}
