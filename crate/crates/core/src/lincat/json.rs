//! JSON documents for categories and actions. Coefficients are accepted as integers
//! or strings (`"3"`, `"-1/2"`); integers are written back as numbers, fractions as strings.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{GActionOnCat, LinCat};
use crate::error::{Error, Result};
use crate::group::{FinGroup, GSetAction};
use crate::linalg::{Field, LinComb, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coef {
    Int(i64),
    Text(String),
}

impl Coef {
    pub fn parse(&self, field: Field) -> Result<Scalar> {
        match self {
            Coef::Int(v) => Ok(field.from_i64(*v)),
            Coef::Text(t) => field.parse(t),
        }
    }
}

/// Integers are written as numbers, residues in the symmetric range `(−p/2, p/2]` so
/// that documents such as `σ·x = −x` read the same over every field.
impl From<&Scalar> for Coef {
    fn from(s: &Scalar) -> Self {
        match s {
            Scalar::Mod { value, modulus } => {
                let v = *value as i64;
                let p = *modulus as i64;
                Coef::Int(if v > p / 2 { v - p } else { v })
            }
            Scalar::Rational(q) if num_traits::One::is_one(q.denom()) => match i64::try_from(q.numer()) {
                Ok(v) => Coef::Int(v),
                Err(_) => Coef::Text(s.to_string()),
            },
            Scalar::Rational(_) => Coef::Text(s.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismDoc {
    pub name: String,
    pub src: String,
    pub tgt: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompDoc {
    pub g: String,
    pub f: String,
    pub result: BTreeMap<String, Coef>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryDoc {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismDoc>,
    #[serde(default)]
    pub identities: BTreeMap<String, BTreeMap<String, Coef>>,
    #[serde(default)]
    pub composition: Vec<CompDoc>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionDoc {
    #[serde(default)]
    pub on_objects: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default)]
    pub on_morphisms: BTreeMap<String, BTreeMap<String, BTreeMap<String, Coef>>>,
}

fn lookup<'a>(names: impl Iterator<Item = &'a str>, name: &str, kind: &str) -> Result<usize> {
    names
        .into_iter()
        .position(|n| n == name)
        .ok_or_else(|| Error::Input(format!("unknown {kind} {name:?}")))
}

fn comb_from_doc(cat: &LinCat, map: &BTreeMap<String, Coef>) -> Result<LinComb> {
    map.iter()
        .map(|(name, c)| {
            let m = cat
                .morphism_index(name)
                .ok_or_else(|| Error::Input(format!("unknown morphism {name:?}")))?;
            Ok((m, c.parse(cat.field())?))
        })
        .collect()
}

fn comb_to_doc(cat: &LinCat, comb: &LinComb) -> BTreeMap<String, Coef> {
    comb.iter()
        .map(|(m, c)| (cat.morphism(*m).name.clone(), Coef::from(c)))
        .collect()
}

/// Parses a category document over `field`. Degrees, if present, are ignored here;
/// see [`degrees_from_doc`].
pub fn category_from_doc(doc: &CategoryDoc, field: Field) -> Result<LinCat> {
    let mut b = LinCat::builder(field);
    for o in &doc.objects {
        b.object(o.clone());
    }
    let obj = |name: &str| lookup(doc.objects.iter().map(String::as_str), name, "object");
    for m in &doc.morphisms {
        b.morphism(m.name.clone(), obj(&m.src)?, obj(&m.tgt)?);
    }
    let mor = |name: &str| lookup(doc.morphisms.iter().map(|m| m.name.as_str()), name, "morphism");
    let parse_comb = |map: &BTreeMap<String, Coef>| -> Result<LinComb> {
        map.iter()
            .map(|(name, c)| Ok((mor(name)?, c.parse(field)?)))
            .collect()
    };
    for (o, comb) in &doc.identities {
        b.identity(obj(o)?, parse_comb(comb)?);
    }
    for entry in &doc.composition {
        b.compose(mor(&entry.g)?, mor(&entry.f)?, parse_comb(&entry.result)?);
    }
    b.build()
}

/// Degrees from the document: `None` if no morphism carries one, an error if only some do.
pub fn degrees_from_doc(doc: &CategoryDoc, group: &FinGroup) -> Result<Option<Vec<usize>>> {
    let given = doc.morphisms.iter().filter(|m| m.degree.is_some()).count();
    if given == 0 {
        return Ok(None);
    }
    if given != doc.morphisms.len() {
        return Err(Error::Input("either every morphism has a degree or none does".into()));
    }
    doc.morphisms
        .iter()
        .map(|m| {
            let d = m.degree.as_deref().unwrap_or_default();
            group
                .element(d)
                .ok_or_else(|| Error::Input(format!("degree {d:?} of {} is not a group element", m.name)))
        })
        .collect::<Result<Vec<_>>>()
        .map(Some)
}

pub fn category_to_doc(cat: &LinCat, degrees: Option<(&FinGroup, &[usize])>) -> CategoryDoc {
    let morphisms = cat
        .morphisms()
        .iter()
        .enumerate()
        .map(|(i, m)| MorphismDoc {
            name: m.name.clone(),
            src: cat.object_name(m.src).to_string(),
            tgt: cat.object_name(m.tgt).to_string(),
            degree: degrees.map(|(g, d)| g.name(d[i]).to_string()),
        })
        .collect();
    let identities = (0..cat.num_objects())
        .map(|x| (cat.object_name(x).to_string(), comb_to_doc(cat, cat.identity(x))))
        .collect();
    let composition = cat
        .composition_table()
        .into_iter()
        .map(|((g, f), comb)| CompDoc {
            g: cat.morphism(g).name.clone(),
            f: cat.morphism(f).name.clone(),
            result: comb_to_doc(cat, comb),
        })
        .collect();
    CategoryDoc {
        objects: cat.objects().to_vec(),
        morphisms,
        identities,
        composition,
    }
}

type ElementData = (Vec<usize>, Vec<LinComb>);

/// Parses an action document. Elements absent from the document are generated by
/// closure from the given ones (the identity acts trivially unless stated); a
/// single-object category may omit `on_objects`. The result is structurally checked
/// but not validated against the axioms.
pub fn action_from_doc(doc: &ActionDoc, cat: &LinCat, group: Arc<FinGroup>) -> Result<GActionOnCat> {
    let n = cat.num_objects();
    let mut data: Vec<Option<ElementData>> = vec![None; group.order()];
    for name in doc.on_objects.keys() {
        if !doc.on_morphisms.contains_key(name) {
            return Err(Error::Input(format!(
                "element {name:?} acts on objects but has no morphism images"
            )));
        }
    }
    for (name, images) in &doc.on_morphisms {
        let s = group
            .element(name)
            .ok_or_else(|| Error::Input(format!("unknown group element {name:?}")))?;
        let perm = match doc.on_objects.get(name) {
            Some(map) => {
                let mut perm = vec![usize::MAX; n];
                for (x, y) in map {
                    let xi = cat.object_index(x).ok_or_else(|| Error::Input(format!("unknown object {x:?}")))?;
                    let yi = cat.object_index(y).ok_or_else(|| Error::Input(format!("unknown object {y:?}")))?;
                    perm[xi] = yi;
                }
                if let Some(x) = perm.iter().position(|&y| y == usize::MAX) {
                    return Err(Error::Input(format!(
                        "element {name:?} has no image for object {:?}",
                        cat.object_name(x)
                    )));
                }
                perm
            }
            None if n <= 1 => (0..n).collect(),
            None => {
                return Err(Error::Input(format!("element {name:?} has no object images")));
            }
        };
        let mut mors = vec![None; cat.num_morphisms()];
        for (f, img) in images {
            let fi = cat
                .morphism_index(f)
                .ok_or_else(|| Error::Input(format!("unknown morphism {f:?}")))?;
            mors[fi] = Some(comb_from_doc(cat, img)?);
        }
        let mors = mors
            .into_iter()
            .enumerate()
            .map(|(f, m)| {
                m.ok_or_else(|| {
                    Error::Input(format!(
                        "element {name:?} has no image for morphism {:?}",
                        cat.morphism(f).name
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        data[s] = Some((perm, mors));
    }
    let e = group.identity();
    if data[e].is_none() {
        let one = cat.field().one();
        data[e] = Some((
            (0..n).collect(),
            (0..cat.num_morphisms()).map(|f| vec![(f, one.clone())]).collect(),
        ));
    }
    close_under_products(&group, &mut data);
    if let Some(s) = data.iter().position(Option::is_none) {
        return Err(Error::Input(format!(
            "the given elements do not generate {:?}",
            group.name(s)
        )));
    }
    let (perms, mors): (Vec<_>, Vec<_>) = data.into_iter().map(Option::unwrap).unzip();
    let objects = GSetAction::new(group, perms)?;
    GActionOnCat::new(cat, objects, mors)
}

fn close_under_products(group: &FinGroup, data: &mut [Option<ElementData>]) {
    loop {
        let mut changed = false;
        for a in group.elements() {
            for b in group.elements() {
                let ab = group.mul(a, b);
                if data[ab].is_some() {
                    continue;
                }
                let (Some((pa, ma)), Some((pb, mb))) = (&data[a], &data[b]) else {
                    continue;
                };
                let perm = pb.iter().map(|&x| pa[x]).collect();
                let mors = mb
                    .iter()
                    .map(|img| {
                        let mut acc = BTreeMap::new();
                        for (h, c) in img {
                            for (k, d) in &ma[*h] {
                                crate::linalg::accumulate(&mut acc, *k, c * d);
                            }
                        }
                        crate::linalg::into_comb(acc)
                    })
                    .collect();
                data[ab] = Some((perm, mors));
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
}

pub fn action_to_doc(cat: &LinCat, a: &GActionOnCat) -> ActionDoc {
    let g = a.group();
    let mut doc = ActionDoc::default();
    for s in g.elements() {
        let objs = (0..cat.num_objects())
            .map(|x| {
                (
                    cat.object_name(x).to_string(),
                    cat.object_name(a.act_obj(s, x)).to_string(),
                )
            })
            .collect();
        let mors = (0..cat.num_morphisms())
            .map(|f| (cat.morphism(f).name.clone(), comb_to_doc(cat, a.act(s, f))))
            .collect();
        doc.on_objects.insert(g.name(s).to_string(), objs);
        doc.on_morphisms.insert(g.name(s).to_string(), mors);
    }
    doc
}
