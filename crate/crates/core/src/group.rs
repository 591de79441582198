//! Finite groups given by multiplication tables, conjugacy classes, and finite
//! G-sets with orbit transversals.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite group by its full multiplication table: `table[a][b]` is the index of `a·b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinGroup {
    names: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

/// JSON form: `{"elements": [...], "table": [[...]]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupDoc {
    pub elements: Vec<String>,
    pub table: Vec<Vec<usize>>,
}

impl FinGroup {
    /// Builds and fully validates a group. The identity is inferred and inverses computed.
    pub fn new(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<FinGroup> {
        let n = names.len();
        if n == 0 {
            return Err(Error::GroupAxiom {
                axiom: "nonempty",
                witness: "no elements".into(),
            });
        }
        if table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(Error::GroupAxiom {
                axiom: "shape",
                witness: format!("table must be {n}x{n}"),
            });
        }
        if let Some((a, b)) = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .find(|&(a, b)| table[a][b] >= n)
        {
            return Err(Error::GroupAxiom {
                axiom: "closure",
                witness: format!("{}·{} = index {} out of range", names[a], names[b], table[a][b]),
            });
        }
        let mut g = FinGroup {
            names,
            table,
            identity: 0,
            inverses: vec![0; n],
        };
        g.validate_latin()?;
        g.identity = (0..n)
            .find(|&e| (0..n).all(|x| g.table[e][x] == x && g.table[x][e] == x))
            .ok_or_else(|| Error::GroupAxiom {
                axiom: "identity",
                witness: "no two-sided identity element".into(),
            })?;
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| g.table[a][b] == g.identity && g.table[b][a] == g.identity)
                .ok_or_else(|| Error::GroupAxiom {
                    axiom: "inverse",
                    witness: format!("{} has no two-sided inverse", g.names[a]),
                })?;
            g.inverses[a] = inv;
        }
        g.validate_associativity()?;
        Ok(g)
    }

    pub fn from_doc(doc: &GroupDoc) -> Result<FinGroup> {
        FinGroup::new(doc.elements.clone(), doc.table.clone())
    }

    pub fn to_doc(&self) -> GroupDoc {
        GroupDoc {
            elements: self.names.clone(),
            table: self.table.clone(),
        }
    }

    fn validate_latin(&self) -> Result<()> {
        let n = self.order();
        for a in 0..n {
            let mut seen = vec![None; n];
            for b in 0..n {
                let c = self.table[a][b];
                if let Some(prev) = seen[c] {
                    return Err(Error::GroupAxiom {
                        axiom: "latin square",
                        witness: format!(
                            "row {}: {}·{} = {}·{} = {}",
                            self.names[a],
                            self.names[a],
                            self.names[prev],
                            self.names[a],
                            self.names[b],
                            self.names[c]
                        ),
                    });
                }
                seen[c] = Some(b);
            }
        }
        for b in 0..n {
            let mut seen = vec![None; n];
            for a in 0..n {
                let c = self.table[a][b];
                if let Some(prev) = seen[c] {
                    return Err(Error::GroupAxiom {
                        axiom: "latin square",
                        witness: format!(
                            "column {}: {}·{} = {}·{} = {}",
                            self.names[b],
                            self.names[prev],
                            self.names[b],
                            self.names[a],
                            self.names[b],
                            self.names[c]
                        ),
                    });
                }
                seen[c] = Some(a);
            }
        }
        Ok(())
    }

    fn validate_associativity(&self) -> Result<()> {
        let n = self.order();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let left = self.mul(self.mul(a, b), c);
                    let right = self.mul(a, self.mul(b, c));
                    if left != right {
                        return Err(Error::GroupAxiom {
                            axiom: "associativity",
                            witness: format!(
                                "({a}·{b})·{c} = {} but {a}·({b}·{c}) = {}",
                                self.names[left],
                                self.names[right],
                                a = self.names[a],
                                b = self.names[b],
                                c = self.names[c]
                            ),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Re-runs every axiom check.
    pub fn validate(&self) -> Result<()> {
        FinGroup::new(self.names.clone(), self.table.clone()).map(|_| ())
    }

    pub fn trivial() -> FinGroup {
        FinGroup::cyclic(1)
    }

    /// The cyclic group of order `n`, elements `1, g, g^2, ...`.
    pub fn cyclic(n: usize) -> FinGroup {
        let names = (0..n)
            .map(|k| match k {
                0 => "1".to_string(),
                1 => "g".to_string(),
                _ => format!("g^{k}"),
            })
            .collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FinGroup::new(names, table).expect("cyclic table is a group")
    }

    /// C2 with the non-identity element named `s`.
    pub fn c2() -> FinGroup {
        FinGroup::new(
            vec!["1".into(), "s".into()],
            vec![vec![0, 1], vec![1, 0]],
        )
        .expect("C2 is a group")
    }

    /// The symmetric group on `n` letters, elements listed lexicographically by
    /// one-line notation, multiplication `(a·b)(i) = a(b(i))`.
    pub fn symmetric(n: usize) -> FinGroup {
        let mut perms: Vec<Vec<usize>> = vec![(0..n).collect()];
        // lexicographic enumeration via next-permutation
        loop {
            let mut p = perms.last().unwrap().clone();
            let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else {
                break;
            };
            let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).unwrap();
            p.swap(i - 1, j);
            p[i..].reverse();
            perms.push(p);
        }
        let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).unwrap();
        let table = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| index(&b.iter().map(|&i| a[i]).collect()))
                    .collect()
            })
            .collect();
        let names = perms
            .iter()
            .map(|p| {
                if p.iter().enumerate().all(|(i, &v)| i == v) {
                    "1".to_string()
                } else {
                    p.iter().map(|v| (v + 1).to_string()).collect::<String>()
                }
            })
            .collect();
        FinGroup::new(names, table).expect("symmetric group table")
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// Left-to-right product of a word.
    pub fn product<I: IntoIterator<Item = usize>>(&self, word: I) -> usize {
        word.into_iter().fold(self.identity, |acc, x| self.mul(acc, x))
    }

    pub fn conjugate(&self, s: usize, x: usize) -> usize {
        self.mul(self.mul(s, x), self.inv(s))
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn element(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }
}

/// A conjugacy class; `members` is sorted and `representative` is its smallest member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjClass {
    pub representative: usize,
    pub members: Vec<usize>,
}

impl ConjClass {
    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Display label such as `{1}` or `{s}`, built from the representative.
    pub fn label(&self, g: &FinGroup) -> String {
        format!("{{{}}}", g.name(self.representative))
    }
}

/// Conjugacy classes with the identity class first, the rest ordered by smallest member.
pub fn conjugacy_classes(g: &FinGroup) -> Vec<ConjClass> {
    let mut assigned = vec![false; g.order()];
    let mut classes = Vec::new();
    let order = std::iter::once(g.identity()).chain(g.elements().filter(|&x| x != g.identity()));
    for x in order {
        if assigned[x] {
            continue;
        }
        let members: BTreeSet<usize> = g.elements().map(|s| g.conjugate(s, x)).collect();
        for &m in &members {
            assigned[m] = true;
        }
        let members: Vec<usize> = members.into_iter().collect();
        classes.push(ConjClass {
            representative: members[0],
            members,
        });
    }
    classes
}

/// Index of the class containing each element.
pub fn class_index(g: &FinGroup, classes: &[ConjClass]) -> Vec<usize> {
    let mut idx = vec![usize::MAX; g.order()];
    for (k, c) in classes.iter().enumerate() {
        for &m in &c.members {
            idx[m] = k;
        }
    }
    idx
}

/// A left action of a finite group on `{0, ..., set_size - 1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GSetAction {
    group: Arc<FinGroup>,
    perms: Vec<Vec<usize>>,
}

impl GSetAction {
    /// Validates that every map is a permutation, the identity acts trivially and
    /// `perm(ts) = perm(t)∘perm(s)`.
    pub fn new(group: Arc<FinGroup>, perms: Vec<Vec<usize>>) -> Result<GSetAction> {
        if perms.len() != group.order() {
            return Err(Error::SetAction(format!(
                "{} permutations given for a group of order {}",
                perms.len(),
                group.order()
            )));
        }
        let size = perms.first().map_or(0, Vec::len);
        for (s, p) in perms.iter().enumerate() {
            let mut seen = vec![false; size];
            if p.len() != size {
                return Err(Error::SetAction(format!(
                    "permutation for {} has the wrong length",
                    group.name(s)
                )));
            }
            for &x in p {
                if x >= size || seen[x] {
                    return Err(Error::SetAction(format!(
                        "map for {} is not a permutation of 0..{size}",
                        group.name(s)
                    )));
                }
                seen[x] = true;
            }
        }
        if let Some(x) = (0..size).find(|&x| perms[group.identity()][x] != x) {
            return Err(Error::SetAction(format!("identity moves point {x}")));
        }
        for t in group.elements() {
            for s in group.elements() {
                let ts = group.mul(t, s);
                if let Some(x) = (0..size).find(|&x| perms[ts][x] != perms[t][perms[s][x]]) {
                    return Err(Error::SetAction(format!(
                        "({}·{})·{x} != {}·({}·{x})",
                        group.name(t),
                        group.name(s),
                        group.name(t),
                        group.name(s)
                    )));
                }
            }
        }
        Ok(GSetAction { group, perms })
    }

    pub fn trivial(group: Arc<FinGroup>, size: usize) -> GSetAction {
        let perms = vec![(0..size).collect(); group.order()];
        GSetAction { group, perms }
    }

    pub fn group(&self) -> &Arc<FinGroup> {
        &self.group
    }

    pub fn set_size(&self) -> usize {
        self.perms.first().map_or(0, Vec::len)
    }

    #[inline]
    pub fn act(&self, s: usize, x: usize) -> usize {
        self.perms[s][x]
    }

    pub fn perm(&self, s: usize) -> &[usize] {
        &self.perms[s]
    }

    pub fn stabilizer(&self, x: usize) -> Vec<usize> {
        self.group.elements().filter(|&s| self.act(s, x) == x).collect()
    }

    pub fn is_free(&self) -> bool {
        (0..self.set_size()).all(|x| self.stabilizer(x).len() == 1)
    }

    /// Orbits, each sorted, ordered by smallest element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.set_size()];
        let mut out = Vec::new();
        for x in 0..self.set_size() {
            if seen[x] {
                continue;
            }
            let orbit: BTreeSet<usize> = self.group.elements().map(|s| self.act(s, x)).collect();
            for &y in &orbit {
                seen[y] = true;
            }
            out.push(orbit.into_iter().collect());
        }
        out
    }
}

/// One chosen point per orbit, with a witness `s` for every point: `x = s·rep(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transversal {
    /// Representatives, in orbit order.
    pub reps: Vec<usize>,
    /// For each point: (representative, witness element).
    pub rep_of: Vec<(usize, usize)>,
}

impl Transversal {
    pub fn rep(&self, x: usize) -> usize {
        self.rep_of[x].0
    }

    pub fn witness(&self, x: usize) -> usize {
        self.rep_of[x].1
    }

    /// Position of a representative in `reps`.
    pub fn position(&self, rep: usize) -> Option<usize> {
        self.reps.iter().position(|&r| r == rep)
    }

    /// Builds the transversal consisting of exactly `reps`, rejecting anything that is
    /// not one point per orbit.
    pub fn from_reps(action: &GSetAction, reps: &[usize]) -> Result<Transversal> {
        let orbits = action.orbits();
        let mut chosen = vec![None; orbits.len()];
        for &r in reps {
            let k = orbits
                .iter()
                .position(|o| o.contains(&r))
                .ok_or_else(|| Error::InvalidTransversal(format!("point {r} is not in the set")))?;
            if let Some(prev) = chosen[k] {
                return Err(Error::InvalidTransversal(format!(
                    "points {prev} and {r} lie in the same orbit"
                )));
            }
            chosen[k] = Some(r);
        }
        if let Some(k) = chosen.iter().position(Option::is_none) {
            return Err(Error::InvalidTransversal(format!(
                "no representative for the orbit of {}",
                orbits[k][0]
            )));
        }
        let reps: Vec<usize> = chosen.into_iter().map(Option::unwrap).collect();
        Ok(Transversal::build(action, reps))
    }

    fn build(action: &GSetAction, reps: Vec<usize>) -> Transversal {
        let g = action.group();
        let mut rep_of = vec![(usize::MAX, usize::MAX); action.set_size()];
        for &u in &reps {
            // smallest witness wins, so witnesses are reproducible for non-free actions
            for s in g.elements() {
                let x = action.act(s, u);
                if rep_of[x].0 == usize::MAX {
                    rep_of[x] = (u, s);
                }
            }
        }
        Transversal { reps, rep_of }
    }
}

/// Deterministic transversal: the smallest point of each orbit, unless `prefer` names a
/// point of that orbit (the first such preferred point wins). Also reports freeness.
pub fn orbits_transversal(action: &GSetAction, prefer: Option<&[usize]>) -> (Transversal, bool) {
    let reps = action
        .orbits()
        .into_iter()
        .map(|orbit| {
            prefer
                .and_then(|p| p.iter().copied().find(|x| orbit.contains(x)))
                .unwrap_or(orbit[0])
        })
        .collect();
    (Transversal::build(action, reps), action.is_free())
}
