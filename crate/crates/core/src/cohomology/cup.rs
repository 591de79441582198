use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{apply, CochainBasis, CochainComplex};
use crate::check::Check;
use crate::error::{Error, Result};
use crate::lincat::LinCat;
use crate::linalg::{accumulate, into_comb, LinComb, Matrix, Scalar};

/// A cochain of a given degree, as coordinates in the elementary basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    pub degree: usize,
    pub coords: LinComb,
}

impl Cochain {
    pub fn elementary(degree: usize, index: usize, c: &LinCat) -> Cochain {
        Cochain {
            degree,
            coords: vec![(index, c.field().one())],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn scaled(&self, s: &Scalar) -> Cochain {
        let coords = self.coords.iter().map(|(i, v)| (*i, v * s)).filter(|(_, v)| !v.is_zero()).collect();
        Cochain { degree: self.degree, coords }
    }

    pub fn add(&self, other: &Cochain) -> Cochain {
        debug_assert_eq!(self.degree, other.degree);
        let mut acc = std::collections::BTreeMap::new();
        for (i, v) in self.coords.iter().chain(&other.coords) {
            accumulate(&mut acc, *i, v.clone());
        }
        Cochain {
            degree: self.degree,
            coords: into_comb(acc),
        }
    }

    pub fn sub(&self, other: &Cochain) -> Cochain {
        let neg = other.coords.iter().map(|(i, v)| (*i, -v)).collect();
        self.add(&Cochain {
            degree: other.degree,
            coords: neg,
        })
    }

    /// Dense coordinate column.
    pub fn column(&self, len: usize, c: &LinCat) -> Matrix {
        let triplets = self.coords.iter().map(|(i, v)| (*i, 0, v.clone())).collect::<Vec<_>>();
        Matrix::from_triplets(c.field(), len, 1, triplets).expect("index in basis")
    }
}

/// `(ψ ⌣ φ)(f_{n+m} ⊗ ⋯ ⊗ f_1) = ψ(f_{n+m} ⊗ ⋯ ⊗ f_{n+1}) φ(f_n ⊗ ⋯ ⊗ f_1)`; terms whose
/// paths do not meet vanish. All bases must be unrestricted.
pub fn cup(c: &LinCat, cx: &CochainComplex, psi: &Cochain, phi: &Cochain) -> Result<Cochain> {
    let degree = psi.degree + phi.degree;
    if degree > cx.top() {
        return Err(Error::Dimension(format!(
            "cup product of degree {degree} exceeds the stored degree {}",
            cx.top()
        )));
    }
    let (bp, bf, bt): (&CochainBasis, &CochainBasis, &CochainBasis) =
        (cx.basis(psi.degree), cx.basis(phi.degree), cx.basis(degree));
    let mut acc = std::collections::BTreeMap::new();
    for (j, a) in &psi.coords {
        let kp = bp.key(*j);
        for (i, b) in &phi.coords {
            let kf = bf.key(*i);
            if kp.start != kf.end(c) {
                continue;
            }
            let mut path = kf.path.clone();
            path.extend_from_slice(&kp.path);
            let ab = a * b;
            for (h, v) in c.compose_basis(kp.out, kf.out) {
                let idx = bt.index(c, kf.start, &path, *h).ok_or_else(|| {
                    Error::Dimension("cup product needs an unrestricted basis".into())
                })?;
                accumulate(&mut acc, idx, &ab * v);
            }
        }
    }
    Ok(Cochain {
        degree,
        coords: into_comb(acc),
    })
}

/// The unit `x ↦ id_x` in degree 0.
pub fn identity_cochain(c: &LinCat, cx: &CochainComplex) -> Cochain {
    let b = cx.basis(0);
    let mut acc = std::collections::BTreeMap::new();
    for x in 0..c.num_objects() {
        for (m, v) in c.identity(x) {
            let i = b.index(c, x, &[], *m).expect("end(x) is in the basis");
            accumulate(&mut acc, i, v.clone());
        }
    }
    Cochain {
        degree: 0,
        coords: into_comb(acc),
    }
}

/// `d` applied to a cochain of degree below the top.
pub(crate) fn coboundary_of(cx: &CochainComplex, phi: &Cochain) -> Cochain {
    Cochain {
        degree: phi.degree + 1,
        coords: apply(cx.coboundary(phi.degree), &phi.coords),
    }
}

/// Seeded source of elementary cochains and random cochains in a subspace.
pub struct CupSampler {
    rng: ChaCha8Rng,
}

impl CupSampler {
    pub fn new(seed: u64) -> Self {
        CupSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn elementary(&mut self, c: &LinCat, cx: &CochainComplex, degree: usize) -> Option<Cochain> {
        let len = cx.basis(degree).len();
        if len == 0 {
            return None;
        }
        Some(Cochain::elementary(degree, self.rng.gen_range(0..len), c))
    }

    /// Random combination of up to `terms` elementary cochains indexed by `positions`.
    pub fn sparse(&mut self, degree: usize, positions: &[usize], field: crate::linalg::Field, terms: usize) -> Cochain {
        let mut acc = std::collections::BTreeMap::new();
        if !positions.is_empty() {
            for _ in 0..terms {
                let i = positions[self.rng.gen_range(0..positions.len())];
                accumulate(&mut acc, i, field.from_i64(self.rng.gen_range(1..=3)));
            }
        }
        Cochain {
            degree,
            coords: into_comb(acc),
        }
    }

    /// Random combination of the columns of `span` (small integer coefficients).
    pub fn combination(&mut self, degree: usize, span: &Matrix) -> Cochain {
        let f = span.field();
        let mut acc = std::collections::BTreeMap::new();
        for j in 0..span.cols() {
            let k: i64 = self.rng.gen_range(-3..=3);
            if k == 0 {
                continue;
            }
            let k = f.from_i64(k);
            for (i, v) in span.column_support(j) {
                accumulate(&mut acc, i, &k * &v);
            }
        }
        Cochain {
            degree,
            coords: into_comb(acc),
        }
    }
}

/// Leibniz rule and unit law on `pairs` sampled elementary pairs, and graded
/// commutativity up to coboundaries on sampled cocycles of degree ≤ 2.
pub fn check_cup_laws(c: &LinCat, cx: &CochainComplex, pairs: usize, seed: u64) -> Result<Vec<Check>> {
    let mut sampler = CupSampler::new(seed);
    let n_max = cx.n_max();
    let unit = identity_cochain(c, cx);
    let mut leibniz = None;
    let mut unit_law = None;
    let mut tested = 0;
    // degrees with |ψ| + |φ| ≤ n_max so that d of the product is stored
    let degree_pairs: Vec<(usize, usize)> = (0..=n_max)
        .flat_map(|p| (0..=n_max - p).map(move |q| (p, q)))
        .collect();
    for k in 0..pairs {
        let (p, q) = degree_pairs[k % degree_pairs.len()];
        let (Some(psi), Some(phi)) = (sampler.elementary(c, cx, p), sampler.elementary(c, cx, q)) else {
            continue;
        };
        tested += 1;
        let lhs = coboundary_of(cx, &cup(c, cx, &psi, &phi)?);
        let sign = Scalar::sign(c.field(), p);
        let rhs = cup(c, cx, &coboundary_of(cx, &psi), &phi)?.add(&cup(c, cx, &psi, &coboundary_of(cx, &phi))?.scaled(&sign));
        if leibniz.is_none() && lhs != rhs {
            leibniz = Some(format!(
                "ψ = E({}), φ = E({})",
                cx.basis(p).key(psi.coords[0].0).describe(c),
                cx.basis(q).key(phi.coords[0].0).describe(c)
            ));
        }
        for (x, y) in [(&psi, &unit), (&unit, &psi)] {
            if unit_law.is_none() && cup(c, cx, x, y)? != psi {
                unit_law = Some(format!("ψ = E({})", cx.basis(p).key(psi.coords[0].0).describe(c)));
            }
        }
    }
    let mut checks = vec![
        Check::from_witness(format!("Leibniz rule ({tested} sampled pairs)"), leibniz),
        Check::from_witness("cup unit law", unit_law),
    ];
    let kernels: Vec<Matrix> = (0..=n_max.min(2)).map(|n| cx.coboundary(n).kernel_matrix()).collect();
    let mut commutes = None;
    for p in 0..kernels.len() {
        for q in 0..kernels.len() {
            if p + q > cx.top() {
                continue;
            }
            for _ in 0..3 {
                let psi = sampler.combination(p, &kernels[p]);
                let phi = sampler.combination(q, &kernels[q]);
                let sign = Scalar::sign(c.field(), p * q);
                let diff = cup(c, cx, &psi, &phi)?.sub(&cup(c, cx, &phi, &psi)?.scaled(&sign));
                let ok = if p + q == 0 {
                    diff.is_zero()
                } else {
                    let col = diff.column(cx.basis(p + q).len(), c);
                    cx.coboundary(p + q - 1).spans(&col)?
                };
                if !ok && commutes.is_none() {
                    commutes = Some(format!("cocycles of degrees {p} and {q}"));
                }
            }
        }
    }
    checks.push(Check::from_witness("cup graded-commutative up to coboundaries", commutes));
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::all_passed;
    use crate::cohomology::build_cochain_complex;
    use crate::fixtures;
    use crate::linalg::Field;

    const P: Field = Field::Prime(101);

    #[test]
    fn degree_zero_product_is_the_algebra_product() {
        let c = fixtures::dual_numbers(P);
        let cx = build_cochain_complex(&c, 1, 1000).unwrap();
        let x = cx.basis(0).index(&c, 0, &[], 1).unwrap();
        let ex = Cochain::elementary(0, x, &c);
        assert!(cup(&c, &cx, &ex, &ex).unwrap().is_zero());
        let one = identity_cochain(&c, &cx);
        assert_eq!(cup(&c, &cx, &one, &ex).unwrap(), ex);
    }

    #[test]
    fn laws_hold_on_fixtures() {
        for fx in fixtures::catalog(P) {
            let cx = build_cochain_complex(&fx.cat, 2, 100_000).unwrap();
            let checks = check_cup_laws(&fx.cat, &cx, 100, 7).unwrap();
            assert!(all_passed(&checks), "{}: {checks:?}", fx.name);
        }
    }

    #[test]
    fn mismatched_paths_vanish() {
        let c = fixtures::two_object_swap(P, false);
        let cx = build_cochain_complex(&c, 1, 1000).unwrap();
        // E([a], 1a) ⌣ E([b], 1b) = 0
        let ea = Cochain::elementary(0, cx.basis(0).index(&c, 0, &[], c.identity(0)[0].0).unwrap(), &c);
        let eb = Cochain::elementary(0, cx.basis(0).index(&c, 1, &[], c.identity(1)[0].0).unwrap(), &c);
        assert!(cup(&c, &cx, &ea, &eb).unwrap().is_zero());
    }
}
