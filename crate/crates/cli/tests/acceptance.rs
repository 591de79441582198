//! Acceptance gate: one `[PASS]`/`[FAIL]` line per criterion; exits non-zero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::sync::Arc;
use std::time::{Duration, Instant};

use skewcat_cli::{run, Command, JobSpec};
use skewcat_core::check::{all_passed, Check};
use skewcat_core::cohomology::{self, build_cochain_complex, check_cochain_action, check_cup_laws, cochain_g_action, invariants, is_invariant_pointwise};
use skewcat_core::constructions::{matrix_category, quotient_category, skew};
use skewcat_core::fixtures::{self, Fixture};
use skewcat_core::group::{orbits_transversal, FinGroup};
use skewcat_core::hochschild::{self, build_chain_complex, chain_g_action, check_chain_action, coinvariants, transversal_chain_iso};
use skewcat_core::lincat::{validate_action, validate_category, validate_grading, GActionOnCat, GradedLinCat, LinCat};
use skewcat_core::linalg::{Field, Matrix};
use skewcat_core::verify::{self, Options, Section};
use skewcat_core::Error;

const P: Field = Field::Prime(101);
const BUDGET: usize = 200_000;
/// Stored-basis cap for the matrix-free fallback of criterion 2.
const MATRIX_FREE_BUDGET: usize = 2_000_000;

type Outcome = Result<String, String>;

fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn failed(checks: &[Check]) -> String {
    checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("{}: {}", c.name, c.witness.clone().unwrap_or_default()))
        .collect::<Vec<_>>()
        .join("; ")
}

fn section_ok(label: &str, s: &Section) -> Result<(), String> {
    ensure(s.passed(), || format!("{label} / {}: {}", s.name, failed(&s.checks)))
}

fn opts(n_max: usize, samples: usize) -> Options {
    Options {
        n_max,
        samples,
        ..Options::default()
    }
}

fn timed(limit: Duration, label: &str, f: impl FnOnce() -> Result<(), String>) -> Result<(), String> {
    let t = Instant::now();
    f()?;
    let e = t.elapsed();
    ensure(e < limit, || format!("{label} took {e:?}, limit {limit:?}"))
}

fn dims_of(s: &Section, name: &str) -> Vec<usize> {
    s.dims.iter().find(|d| d.name == name).map(|d| d.dims.clone()).unwrap_or_default()
}

/// 1. Group, category, action and grading axioms on every shipped fixture; every
/// corrupted fixture rejected with the expected kind of witness.
fn axioms() -> Outcome {
    let limit = Duration::from_secs(1);
    let mut count = 0;
    for fx in fixtures::catalog(P) {
        timed(limit, fx.name, || {
            fx.group().validate().map_err(|e| e.to_string())?;
            validate_category(&fx.cat).map_err(|e| format!("{}: {e}", fx.name))?;
            validate_action(&fx.cat, &fx.action).map_err(|e| format!("{}: {e}", fx.name))?;
            let sk = skew(&fx.cat, &fx.action).map_err(|e| e.to_string())?;
            validate_grading(&sk.graded).map_err(|e| format!("{} skew grading: {e}", fx.name))
        })?;
        let path = fixture_dir().join(format!("{}.json", fx.name));
        timed(limit, fx.name, || {
            let r = run(&JobSpec::new(Command::Validate, &path)).map_err(|e| e.to_string())?;
            ensure(r.passed, || format!("{}: {}", fx.name, failed(&r.validation)))
        })?;
        count += 1;
    }
    let expected = [
        ("group_table_not_latin", "latin square"),
        ("group_not_associative", "associativity"),
        ("set_action_not_a_homomorphism", "set action"),
        ("category_identity_law", "right identity"),
        ("category_associativity", "associativity"),
        ("action_negates_identity", "s(id_x) = id_sx"),
        ("action_not_a_group_action", "t(sf) = (ts)f"),
        ("grading_leak", "grading"),
    ];
    let mut rejected = 0;
    for c in fixtures::corrupted() {
        timed(limit, c.name, || {
            let err = (c.check)(P).err().ok_or_else(|| format!("{} accepted", c.name))?;
            let (kind, witness) = match &err {
                Error::GroupAxiom { axiom, witness } => (*axiom, witness.clone()),
                Error::SetAction(w) => ("set action", w.clone()),
                Error::CategoryAxiom { axiom, witness } => (*axiom, witness.clone()),
                Error::ActionAxiom { axiom, witness } => (*axiom, witness.clone()),
                Error::GradingLeak(w) => ("grading", w.clone()),
                other => return Err(format!("{}: unexpected error {other}", c.name)),
            };
            let want = expected.iter().find(|(n, _)| *n == c.name).map(|(_, k)| *k);
            ensure(want == Some(kind), || format!("{}: got {kind}, expected {want:?}", c.name))?;
            ensure(!witness.is_empty(), || format!("{}: empty witness", c.name))
        })?;
        rejected += 1;
    }
    let path = fixture_dir().join("corrupt_action_law.json");
    timed(limit, "corrupt_action_law.json", || {
        let r = run(&JobSpec::new(Command::Validate, &path)).map_err(|e| e.to_string())?;
        let bad = r.validation.iter().find(|c| !c.passed).ok_or("corrupted document accepted")?;
        ensure(bad.witness.as_deref().is_some_and(|w| w.contains("4·x vs x")), || format!("witness {:?}", bad.witness))
    })?;
    rejected += 1;
    ensure(rejected >= 6, || format!("only {rejected} corrupted fixtures"))?;
    Ok(format!("{count} fixtures valid, {rejected} corruptions rejected"))
}

/// `d∘d` on the full complexes of `c` through degree 3, falling back to the matrix-free
/// check when dense storage would exceed the budget.
fn dd_full(label: &str, c: &LinCat, graded: Option<&GradedLinCat>, notes: &mut Vec<String>) -> Result<usize, String> {
    let dense = || -> skewcat_core::Result<Vec<Check>> {
        let cx = build_chain_complex(c, 2, BUDGET)?;
        let cc = build_cochain_complex(c, 2, BUDGET)?;
        let mut checks = vec![cx.check_dd(c), cc.check_dd(c)];
        if let Some(b) = graded {
            for (_, sub) in hochschild::class_decomposition(&cx, b)? {
                checks.push(sub.check_dd(c));
            }
            for (_, sub) in cohomology::class_decomposition(&cc, b)? {
                checks.push(sub.check_dd(c));
            }
        }
        Ok(checks)
    };
    let checks = match dense() {
        Ok(c) => c,
        Err(Error::BudgetExceeded { .. }) => {
            notes.push(format!("{label} matrix-free"));
            let mut checks = hochschild::matrix_free_checks(c, graded, 3);
            checks.extend(cohomology::matrix_free_checks(c, graded, 3, MATRIX_FREE_BUDGET).map_err(|e| format!("{label}: {e}"))?);
            checks
        }
        Err(e) => return Err(format!("{label}: {e}")),
    };
    ensure(all_passed(&checks), || format!("{label}: {}", failed(&checks)))?;
    Ok(checks.len())
}

/// 2. `d∘d = 0` for chains and cochains of every fixture, every class filter of its skew
/// category (and quotient, when free), and the coinvariant/invariant variants.
fn complex_sanity() -> Outcome {
    let mut checks = 0;
    let mut notes = Vec::new();
    for Fixture { name, cat: c, action: a } in fixtures::catalog(P) {
        checks += dd_full(name, &c, None, &mut notes)?;
        let cx = build_chain_complex(&c, 2, BUDGET).map_err(|e| e.to_string())?;
        let m = chain_g_action(&a, &cx).map_err(|e| e.to_string())?;
        let mut variant = check_chain_action(&a, &c, &cx, &m);
        variant.push(coinvariants(&cx, &m).map_err(|e| e.to_string())?.well_defined);
        let cc = build_cochain_complex(&c, 2, BUDGET).map_err(|e| e.to_string())?;
        let mc = cochain_g_action(&c, &a, &cc).map_err(|e| e.to_string())?;
        variant.extend(check_cochain_action(&a, &c, &cc, &mc));
        ensure(all_passed(&variant), || format!("{name} variants: {}", failed(&variant)))?;
        checks += variant.len();
        let sk = skew(&c, &a).map_err(|e| e.to_string())?;
        checks += dd_full(&format!("{name}[G]"), sk.cat(), Some(&sk.graded), &mut notes)?;
        let (t, free) = orbits_transversal(a.on_objects(), None);
        if free && a.group().order() > 1 {
            let q = quotient_category(&c, &a, &t).map_err(|e| e.to_string())?;
            checks += dd_full(&format!("{name}/G"), &q.graded.cat, Some(&q.graded), &mut notes)?;
        }
    }
    let via = if notes.is_empty() { String::new() } else { format!(" ({})", notes.join(", ")) };
    Ok(format!("{checks} exact checks through degree 3{via}"))
}

/// 3. Class decomposition of the dual-numbers skew category and the S3 skew of `End(k)`.
fn decomposition() -> Outcome {
    let (c, a) = fixtures::dual_numbers_c2(P);
    let end = fixtures::end_k(P);
    let s3 = GActionOnCat::trivial(&end, Arc::new(FinGroup::symmetric(3)));
    let mut out = Vec::new();
    for (label, c, a) in [("dual numbers ⋊ C2", &c, &a), ("End(k) ⋊ S3", &end, &s3)] {
        let sk = skew(c, a).map_err(|e| e.to_string())?;
        let s = verify::class_decomposition(&sk.graded, opts(2, 40)).map_err(|e| format!("{label}: {e}"))?;
        section_ok(label, &s)?;
        out.push(format!("{label} HH_n {:?}", dims_of(&s, "HH_n")));
    }
    Ok(out.join("; "))
}

/// `M_{C2}(dual numbers)` with its free action.
fn matrix_dual_numbers() -> skewcat_core::Result<(LinCat, GActionOnCat)> {
    let (c, a) = fixtures::dual_numbers_c2(P);
    let m = matrix_category(&c, &a)?;
    Ok((m.cat, m.action))
}

/// 4. The chain isomorphism between coinvariants and the trivial class of `C_T[G]` for
/// free actions.
fn free_chains() -> Outcome {
    let mut out = Vec::new();
    timed(Duration::from_secs(10), "free chain isomorphisms", || {
        let (sc, sa) = fixtures::two_object_swap_c2(P, false);
        let (mc, ma) = matrix_dual_numbers().map_err(|e| e.to_string())?;
        for (label, c, a) in [("two-object swap", &sc, &sa), ("M_C2(dual numbers)", &mc, &ma)] {
            let (t, free) = orbits_transversal(a.on_objects(), None);
            ensure(free, || format!("{label} not free"))?;
            let iso = transversal_chain_iso(c, a, &t, 2, BUDGET).map_err(|e| format!("{label}: {e}"))?;
            ensure(all_passed(&iso.checks), || format!("{label}: {}", failed(&iso.checks)))?;
            ensure(iso.coinvariant_homology == iso.transversal_homology, || {
                format!("{label}: {:?} vs {:?}", iso.coinvariant_homology, iso.transversal_homology)
            })?;
            out.push(format!("{label} {:?}", iso.coinvariant_homology));
        }
        Ok(())
    })?;
    Ok(out.join("; "))
}

/// Hand computation for `Λ = k[x]/(x²)`, `σx = −x`, on the normalized complex
/// `Λ ⊗ Λ̄^{⊗n}` with `Λ̄ = kx`:
/// `b(a ⊗ x) = ax − xa = 0`, `b(a ⊗ x ⊗ x) = ax ⊗ x − a ⊗ x² + xa ⊗ x = 2ax ⊗ x`.
/// So `HH_0 = Λ = ⟨1, x⟩`, `HH_1 = ⟨1⊗x, x⊗x⟩ / ⟨x⊗x⟩ = ⟨[1⊗x]⟩`. σ fixes 1 and negates
/// `x` and `1 ⊗ x`, so `(HH_0)_G = ⟨1⟩` and `(HH_1)_G = 0`.
const DUAL_COINVARIANTS: [usize; 2] = [1, 0];

/// Re-derives [`DUAL_COINVARIANTS`] from the normalized complex above: with `σ = ±1`
/// diagonal on each basis, `(H_n)_G` is the `+1` part of `ker b_n / im b_{n+1}`.
fn normalized_dual_coinvariants() -> Vec<usize> {
    let f = P;
    // bases: C̄_0 = {1, x}, C̄_1 = {1⊗x, x⊗x}, C̄_2 = {1⊗x⊗x, x⊗x⊗x}; σ-signs per basis vector
    let b1 = Matrix::zeros(f, 2, 2);
    let b2 = Matrix::from_i64(f, &[&[0, 0], &[2, 0]]);
    let signs = [[1i64, -1], [-1, 1], [1, -1]];
    let fixed = |n: usize| -> Matrix {
        let cols: Vec<usize> = (0..2).filter(|&i| signs[n][i] == 1).collect();
        Matrix::identity(f, 2).select_cols(&cols)
    };
    // σ is diagonal and commutes with b, so H_G = H restricted to the +1 eigenvectors
    let h = |z: &Matrix, b_next: &Matrix, n: usize| -> usize {
        let p = fixed(n);
        let z_fixed = z.rank() + p.cols() - Matrix::hstack(f, 2, &[z, &p]).unwrap().rank();
        z_fixed - b_next.mul(&fixed(n + 1)).unwrap().rank()
    };
    let z0 = Matrix::identity(f, 2);
    let z1 = b1.kernel_matrix();
    vec![h(&z0, &b1, 0), h(&z1, &b2, 1)]
}

/// 5. Non-free case on the dual numbers: coinvariant homology against the hand
/// derivation and against the trivial class of `Λ[C2]`.
fn non_free_chains() -> Outcome {
    let (c, a) = fixtures::dual_numbers_c2(P);
    let mut msg = String::new();
    timed(Duration::from_secs(10), "dual numbers", || {
        ensure(normalized_dual_coinvariants() == DUAL_COINVARIANTS, || {
            format!("normalized complex gives {:?}", normalized_dual_coinvariants())
        })?;
        let cx = build_chain_complex(&c, 1, BUDGET).map_err(|e| e.to_string())?;
        let m = chain_g_action(&a, &cx).map_err(|e| e.to_string())?;
        let co = coinvariants(&cx, &m).map_err(|e| e.to_string())?;
        ensure(co.homology_coinvariants == DUAL_COINVARIANTS, || format!("(HH_n)_G = {:?}", co.homology_coinvariants))?;
        let sk = skew(&c, &a).map_err(|e| e.to_string())?;
        let full = build_chain_complex(sk.cat(), 1, BUDGET).map_err(|e| e.to_string())?;
        let parts = hochschild::class_decomposition(&full, &sk.graded).map_err(|e| e.to_string())?;
        let trivial = parts[0].1.homology_dims();
        ensure(trivial == DUAL_COINVARIANTS, || format!("HH^{{1}}_n(Λ[C2]) = {trivial:?}"))?;
        let s = verify::skew_chains(&c, &a, opts(1, 20)).map_err(|e| e.to_string())?;
        section_ok("dual numbers", &s)?;
        msg = format!("(HH_n)_G = {:?} = HH^{{1}}_n(Λ[C2]) = {trivial:?}", co.homology_coinvariants);
        Ok(())
    })?;
    Ok(msg)
}

/// `dim H^n` of the invariant subcomplex by enumerating every cochain over `𝔽_3`.
fn brute_force_invariant_cohomology(n_max: usize) -> Vec<usize> {
    let f3 = Field::Prime(3);
    let (c, a) = fixtures::dual_numbers_c2(f3);
    let cx = build_cochain_complex(&c, n_max, BUDGET).unwrap();
    let all = |n: usize| -> Vec<Vec<i64>> {
        let len = cx.basis(n).len();
        (0..3usize.pow(len as u32))
            .map(|mut code| {
                (0..len)
                    .map(|_| {
                        let v = (code % 3) as i64;
                        code /= 3;
                        v
                    })
                    .collect()
            })
            .collect()
    };
    let invariant = |n: usize, v: &[i64]| {
        let comb: Vec<_> = v.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, &x)| (i, f3.from_i64(x))).collect();
        is_invariant_pointwise(&c, &a, &cx, n, &comb)
    };
    let apply = |n: usize, v: &[i64]| -> Vec<i64> {
        let d = cx.coboundary(n);
        (0..d.rows())
            .map(|i| {
                (0..d.cols()).fold(0i64, |s, j| (s + v[j] * d.get(i, j).to_string().parse::<i64>().unwrap()) % 3)
            })
            .collect()
    };
    let log3 = |mut k: usize| {
        let mut e = 0;
        while k > 1 {
            assert_eq!(k % 3, 0);
            k /= 3;
            e += 1;
        }
        e
    };
    (0..=n_max)
        .map(|n| {
            let cocycles = all(n)
                .into_iter()
                .filter(|v| invariant(n, v) && apply(n, v).iter().all(|&x| x == 0))
                .count();
            let boundaries = if n == 0 {
                1
            } else {
                let mut seen: Vec<Vec<i64>> = all(n - 1).iter().filter(|v| invariant(n - 1, v)).map(|v| apply(n - 1, v)).collect();
                seen.sort();
                seen.dedup();
                seen.len()
            };
            log3(cocycles) - log3(boundaries)
        })
        .collect()
}

/// 6. Cohomology: the free cochain isomorphisms, the non-free comparison on the dual
/// numbers, and a brute-force count of invariant cohomology.
fn cohomology_pipelines() -> Outcome {
    let mut msg = Vec::new();
    timed(Duration::from_secs(30), "cohomology pipelines", || {
        let o = opts(2, 40);
        let (sc, sa) = fixtures::two_object_swap_c2(P, false);
        let (mc, ma) = matrix_dual_numbers().map_err(|e| e.to_string())?;
        for (label, c, a) in [("two-object swap", &sc, &sa), ("M_C2(dual numbers)", &mc, &ma)] {
            let (t, _) = orbits_transversal(a.on_objects(), None);
            let s = verify::free_cochains(c, a, &t, o).map_err(|e| format!("{label}: {e}"))?;
            section_ok(label, &s)?;
        }
        let (c, a) = fixtures::dual_numbers_c2(P);
        let s = verify::skew_cochains(&c, &a, o).map_err(|e| e.to_string())?;
        section_ok("dual numbers", &s)?;
        let cc = build_cochain_complex(&c, 2, BUDGET).map_err(|e| e.to_string())?;
        let m = cochain_g_action(&c, &a, &cc).map_err(|e| e.to_string())?;
        let inv = invariants(&cc, &m).map_err(|e| e.to_string())?.cohomology;
        let sk = skew(&c, &a).map_err(|e| e.to_string())?;
        let full = build_cochain_complex(sk.cat(), 2, BUDGET).map_err(|e| e.to_string())?;
        let trivial = cohomology::class_decomposition(&full, &sk.graded).map_err(|e| e.to_string())?[0].1.cohomology_dims();
        ensure(inv == trivial, || format!("H^n((C^•)^G) = {inv:?} vs HH^n_{{1}}(C[G]) = {trivial:?}"))?;
        let brute = brute_force_invariant_cohomology(2);
        ensure(brute == inv, || format!("brute force {brute:?} vs {inv:?}"))?;
        msg.push(format!("dual numbers H^n((C^•)^G) = HH^n_{{1}} = brute force = {inv:?}"));
        Ok(())
    })?;
    Ok(msg.join("; "))
}

/// 7. Leibniz, unit and graded commutativity on 100 sampled pairs per fixture.
fn cup_laws() -> Outcome {
    let mut n = 0;
    for fx in fixtures::catalog(P) {
        let cc = build_cochain_complex(&fx.cat, 2, BUDGET).map_err(|e| e.to_string())?;
        let checks = check_cup_laws(&fx.cat, &cc, 100, 0x5eed).map_err(|e| e.to_string())?;
        ensure(all_passed(&checks), || format!("{}: {}", fx.name, failed(&checks)))?;
        n += 1;
    }
    Ok(format!("{n} fixtures × 100 pairs"))
}

/// 8. Category complexes against the algebra `a(C)` for fixtures of total dimension ≤ 6.
fn oracle() -> Outcome {
    let mut cats: Vec<(String, LinCat)> = Vec::new();
    for fx in fixtures::catalog(P) {
        let sk = skew(&fx.cat, &fx.action).map_err(|e| e.to_string())?;
        cats.push((fx.name.to_string(), fx.cat));
        cats.push((format!("{}[G]", fx.name), sk.graded.cat));
    }
    let mut n = 0;
    for (name, c) in cats.iter().filter(|(_, c)| c.total_dim() <= 6) {
        let s = match verify::oracle(c, opts(2, 0)) {
            Err(Error::BudgetExceeded { .. }) => verify::oracle(c, opts(1, 0)),
            other => other,
        }
        .map_err(|e| format!("{name}: {e}"))?;
        section_ok(name, &s)?;
        n += 1;
    }
    Ok(format!("{n} categories of total dimension ≤ 6"))
}

/// 9. `HH(M_G(C)) = HH(C)` for the dual numbers with `C2`.
fn equivalence() -> Outcome {
    let (c, a) = fixtures::dual_numbers_c2(P);
    let s = verify::equivalence(&c, &a, opts(2, 0)).map_err(|e| e.to_string())?;
    section_ok("dual numbers", &s)?;
    Ok(format!("HH_n {:?}, HH^n {:?}", dims_of(&s, "HH_n(M_G(C))"), dims_of(&s, "HH^n(M_G(C))")))
}

/// 10. `verify` reports are byte-identical across thread counts.
fn determinism() -> Outcome {
    let mut n = 0;
    for name in ["dual_numbers_c2", "two_object_swap", "two_object_swap_matrix"] {
        let path = fixture_dir().join(format!("{name}.json"));
        let report = |threads| {
            let mut job = JobSpec::new(Command::Verify, &path);
            job.threads = Some(threads);
            run(&job).map(|r| r.to_json()).map_err(|e| e.to_string())
        };
        let (one, two, eight) = (report(1)?, report(2)?, report(8)?);
        ensure(one == two && two == eight, || format!("{name}: reports differ"))?;
        n += 1;
    }
    Ok(format!("{n} inputs, threads 1/2/8"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("axiom suites", axioms),
        ("complex sanity", complex_sanity),
        ("class decomposition", decomposition),
        ("free-action chain isomorphism", free_chains),
        ("non-free coinvariants vs trivial class", non_free_chains),
        ("cohomology comparison", cohomology_pipelines),
        ("cup-product laws", cup_laws),
        ("oracle equivalence", oracle),
        ("equivalence invariance", equivalence),
        ("determinism", determinism),
    ];
    let mut all = true;
    for (i, (name, f)) in criteria.into_iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] {}. {name} — {detail} ({secs:.2}s)", i + 1),
            Err(detail) => {
                all = false;
                println!("[FAIL] {}. {name} — {detail} ({secs:.2}s)", i + 1)
            }
        }
    }
    if !all {
        std::process::exit(1);
    }
}
