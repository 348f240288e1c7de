//! Finite categories, idempotent splitting and the Karoubi envelope.
//!
//! A [`FinCat`] is stored as a composition table. The walking idempotent
//! ([`idem`]) and the walking split idempotent ([`split`]) are built in, with the
//! comparison functor [`sigma`] between them. Pastoral functors (fully faithful
//! and surjective up to retracts) are the weak equivalences of the Karoubian
//! model structure, whose fibrations are the idfibrations: functors with the
//! right lifting property against [`sigma`].

use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::doc::{CatSquareDoc, FunctorDoc, REPORT};
use crate::model::{case_rng, AxiomReport, Axiom, CategoryParams, ModelError, Recorder, ReportParams};
use crate::random;
use crate::search::PROBE_CAP;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatError {
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),
    #[error("object `{0}` has no identity")]
    MissingIdentity(String),
    #[error("identity of `{0}` is not an endomorphism of it")]
    IdentityNotEndo(String),
    #[error("`{0}` and `{1}` are not composable")]
    NotComposable(String, String),
    #[error("composite `{0}`∘`{1}` has the wrong endpoints")]
    BadComposite(String, String),
    #[error("composite `{0}`∘`{1}` given twice with different values")]
    DuplicateComposite(String, String),
    #[error("composite `{0}`∘`{1}` is missing")]
    CompositionGap(String, String),
    #[error("unit law fails at `{0}`")]
    UnitViolation(String),
    #[error("associativity fails at `{0}`∘`{1}`∘`{2}`")]
    AssocViolation(String, String, String),
    #[error("`{0}` is not idempotent")]
    NotIdempotent(String),
    #[error("not a functor: {0}")]
    NotFunctor(String),
    #[error("square sides do not fit together")]
    ShapeMismatch,
    #[error("square does not commute")]
    NotCommuting,
    #[error("search budget exhausted")]
    Exhausted,
}

/// A finite category given by its composition table.
#[derive(Clone, Debug)]
pub struct FinCat {
    objects: Vec<String>,
    object_index: HashMap<String, usize>,
    names: Vec<String>,
    morphism_index: HashMap<String, usize>,
    src: Vec<usize>,
    dst: Vec<usize>,
    identity: Vec<usize>,
    /// `table[g][f] = g∘f` when `src(g) == dst(f)`.
    table: Vec<Vec<Option<usize>>>,
}

impl PartialEq for FinCat {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.names == other.names
            && self.src == other.src
            && self.dst == other.dst
            && self.identity == other.identity
            && self.table == other.table
    }
}

impl Eq for FinCat {}

fn index_names(names: &[String]) -> Result<HashMap<String, usize>, CatError> {
    let mut idx = HashMap::with_capacity(names.len());
    for (i, n) in names.iter().enumerate() {
        if idx.insert(n.clone(), i).is_some() {
            return Err(CatError::DuplicateName(n.clone()));
        }
    }
    Ok(idx)
}

impl FinCat {
    /// Validates raw data; `morphisms` are `(name, src, dst)` and `compose` rows are `(g, f, g∘f)`.
    pub fn new(
        objects: Vec<String>,
        morphisms: Vec<(String, usize, usize)>,
        identity: Vec<usize>,
        compose: &[(usize, usize, usize)],
    ) -> Result<FinCat, CatError> {
        let object_index = index_names(&objects)?;
        let names: Vec<String> = morphisms.iter().map(|m| m.0.clone()).collect();
        let morphism_index = index_names(&names)?;
        let src: Vec<usize> = morphisms.iter().map(|m| m.1).collect();
        let dst: Vec<usize> = morphisms.iter().map(|m| m.2).collect();
        let n = names.len();
        if let Some(i) = (0..n).find(|&i| src[i] >= objects.len() || dst[i] >= objects.len()) {
            return Err(CatError::UnknownObject(format!("endpoint of `{}`", names[i])));
        }
        if identity.len() != objects.len() {
            let missing = objects.get(identity.len()).cloned().unwrap_or_default();
            return Err(CatError::MissingIdentity(missing));
        }
        for (x, &i) in identity.iter().enumerate() {
            if i >= n {
                return Err(CatError::MissingIdentity(objects[x].clone()));
            }
            if src[i] != x || dst[i] != x {
                return Err(CatError::IdentityNotEndo(objects[x].clone()));
            }
        }
        let mut table = vec![vec![None; n]; n];
        for &(g, f, gf) in compose {
            if g >= n || f >= n || gf >= n {
                return Err(CatError::UnknownMorphism(format!("#{}", g.max(f).max(gf))));
            }
            if src[g] != dst[f] {
                return Err(CatError::NotComposable(names[g].clone(), names[f].clone()));
            }
            if src[gf] != src[f] || dst[gf] != dst[g] {
                return Err(CatError::BadComposite(names[g].clone(), names[f].clone()));
            }
            match table[g][f] {
                Some(old) if old != gf => {
                    return Err(CatError::DuplicateComposite(names[g].clone(), names[f].clone()))
                }
                _ => table[g][f] = Some(gf),
            }
        }
        for g in 0..n {
            for f in 0..n {
                if src[g] == dst[f] && table[g][f].is_none() {
                    return Err(CatError::CompositionGap(names[g].clone(), names[f].clone()));
                }
            }
        }
        let c = FinCat {
            objects,
            object_index,
            names,
            morphism_index,
            src,
            dst,
            identity,
            table,
        };
        for f in 0..n {
            if c.comp(c.identity[c.dst[f]], f) != f || c.comp(f, c.identity[c.src[f]]) != f {
                return Err(CatError::UnitViolation(c.names[f].clone()));
            }
        }
        for h in 0..n {
            for g in 0..n {
                let Some(hg) = c.table[h][g] else { continue };
                for f in 0..n {
                    let Some(gf) = c.table[g][f] else { continue };
                    if c.comp(hg, f) != c.comp(h, gf) {
                        return Err(CatError::AssocViolation(
                            c.names[h].clone(),
                            c.names[g].clone(),
                            c.names[f].clone(),
                        ));
                    }
                }
            }
        }
        Ok(c)
    }

    pub fn from_names(
        objects: Vec<String>,
        morphisms: Vec<(String, String, String)>,
        identity: &BTreeMap<String, String>,
        compose: &[(String, String, String)],
    ) -> Result<FinCat, CatError> {
        let oidx = index_names(&objects)?;
        let obj = |s: &str| oidx.get(s).copied().ok_or_else(|| CatError::UnknownObject(s.to_string()));
        let mut raw = Vec::with_capacity(morphisms.len());
        for (name, s, d) in &morphisms {
            raw.push((name.clone(), obj(s)?, obj(d)?));
        }
        let names: Vec<String> = raw.iter().map(|m| m.0.clone()).collect();
        let midx = index_names(&names)?;
        let mor = |s: &str| midx.get(s).copied().ok_or_else(|| CatError::UnknownMorphism(s.to_string()));
        if let Some(k) = identity.keys().find(|k| !oidx.contains_key(*k)) {
            return Err(CatError::UnknownObject(k.clone()));
        }
        let ids = objects
            .iter()
            .map(|x| {
                identity
                    .get(x)
                    .ok_or_else(|| CatError::MissingIdentity(x.clone()))
                    .and_then(|m| mor(m))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let rows = compose
            .iter()
            .map(|(g, f, gf)| Ok((mor(g)?, mor(f)?, mor(gf)?)))
            .collect::<Result<Vec<_>, CatError>>()?;
        FinCat::new(objects, raw, ids, &rows)
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.names.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_name(&self, x: usize) -> &str {
        &self.objects[x]
    }

    pub fn morphism_name(&self, m: usize) -> &str {
        &self.names[m]
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.object_index.get(name).copied()
    }

    pub fn morphism_index(&self, name: &str) -> Option<usize> {
        self.morphism_index.get(name).copied()
    }

    pub fn src(&self, m: usize) -> usize {
        self.src[m]
    }

    pub fn dst(&self, m: usize) -> usize {
        self.dst[m]
    }

    pub fn identity(&self, x: usize) -> usize {
        self.identity[x]
    }

    pub fn is_identity(&self, m: usize) -> bool {
        self.identity[self.src[m]] == m
    }

    /// `g∘f`, if composable.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        self.table[g][f]
    }

    /// `g∘f`; panics if not composable.
    pub fn comp(&self, g: usize, f: usize) -> usize {
        self.table[g][f].expect("composable morphisms")
    }

    /// Morphisms `x -> y` in index order.
    pub fn hom(&self, x: usize, y: usize) -> Vec<usize> {
        (0..self.morphism_count())
            .filter(|&m| self.src[m] == x && self.dst[m] == y)
            .collect()
    }

    pub fn is_idempotent(&self, e: usize) -> bool {
        self.src[e] == self.dst[e] && self.comp(e, e) == e
    }

    pub fn is_iso(&self, m: usize) -> bool {
        self.hom(self.dst[m], self.src[m]).into_iter().any(|n| {
            self.is_identity(self.comp(n, m)) && self.is_identity(self.comp(m, n))
        })
    }

    /// Disjoint union; names are tagged `0:` and `1:`.
    pub fn coproduct(a: &FinCat, b: &FinCat) -> FinCat {
        let (na, oa) = (a.morphism_count(), a.object_count());
        let objects = a
            .objects
            .iter()
            .map(|x| format!("0:{x}"))
            .chain(b.objects.iter().map(|y| format!("1:{y}")))
            .collect();
        let morphisms = (0..na)
            .map(|m| (format!("0:{}", a.names[m]), a.src[m], a.dst[m]))
            .chain((0..b.morphism_count()).map(|m| (format!("1:{}", b.names[m]), oa + b.src[m], oa + b.dst[m])))
            .collect();
        let identity = a
            .identity
            .iter()
            .copied()
            .chain(b.identity.iter().map(|&i| na + i))
            .collect();
        let mut rows = Vec::new();
        for g in 0..na {
            for f in 0..na {
                if let Some(gf) = a.table[g][f] {
                    rows.push((g, f, gf));
                }
            }
        }
        for g in 0..b.morphism_count() {
            for f in 0..b.morphism_count() {
                if let Some(gf) = b.table[g][f] {
                    rows.push((na + g, na + f, na + gf));
                }
            }
        }
        FinCat::new(objects, morphisms, identity, &rows).expect("disjoint union of categories")
    }
}

fn build(objects: &[&str], morphisms: &[(&str, usize, usize)], identity: &[usize], rows: &[(usize, usize, usize)]) -> FinCat {
    FinCat::new(
        objects.iter().map(|s| s.to_string()).collect(),
        morphisms.iter().map(|(n, s, d)| (n.to_string(), *s, *d)).collect(),
        identity.to_vec(),
        rows,
    )
    .expect("built-in category")
}

/// The terminal category.
pub fn terminal() -> FinCat {
    build(&["*"], &[("id", 0, 0)], &[0], &[(0, 0, 0)])
}

/// One object with a single non-identity idempotent `e`.
pub fn idem() -> FinCat {
    build(
        &["0"],
        &[("id0", 0, 0), ("e", 0, 0)],
        &[0],
        &[(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 1)],
    )
}

/// Objects `0, 1`, with `p: 0 -> 1`, `q: 1 -> 0`, `p∘q = id1` and `qp = q∘p`.
pub fn split() -> FinCat {
    // 0 id0, 1 id1, 2 p, 3 q, 4 qp
    build(
        &["0", "1"],
        &[("id0", 0, 0), ("id1", 1, 1), ("p", 0, 1), ("q", 1, 0), ("qp", 0, 0)],
        &[0, 1],
        &[
            (0, 0, 0),
            (1, 1, 1),
            (2, 0, 2),
            (1, 2, 2),
            (3, 1, 3),
            (0, 3, 3),
            (4, 0, 4),
            (0, 4, 4),
            (2, 3, 1),
            (3, 2, 4),
            (4, 4, 4),
            (2, 4, 2),
            (4, 3, 3),
        ],
    )
}

/// The cyclic group of order `n` as a one-object category.
pub fn cyclic_group(n: usize) -> FinCat {
    assert!(n >= 1);
    let morphisms = (0..n).map(|k| (format!("g{k}"), 0, 0)).collect();
    let mut rows = Vec::new();
    for a in 0..n {
        for b in 0..n {
            rows.push((a, b, (a + b) % n));
        }
    }
    FinCat::new(vec!["*".to_string()], morphisms, vec![0], &rows).expect("group")
}

/// Objects and identities only.
pub fn discrete(n: usize) -> FinCat {
    let objects = (0..n).map(|i| format!("d{i}")).collect();
    let morphisms = (0..n).map(|i| (format!("id{i}"), i, i)).collect();
    let rows: Vec<_> = (0..n).map(|i| (i, i, i)).collect();
    FinCat::new(objects, morphisms, (0..n).collect(), &rows).expect("discrete")
}

/// A structure-preserving assignment between finite categories.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Functor {
    dom: FinCat,
    cod: FinCat,
    on_obj: Vec<usize>,
    on_mor: Vec<usize>,
}

impl Functor {
    pub fn new(dom: FinCat, cod: FinCat, on_obj: Vec<usize>, on_mor: Vec<usize>) -> Result<Functor, CatError> {
        if on_obj.len() != dom.object_count() || on_mor.len() != dom.morphism_count() {
            return Err(CatError::NotFunctor("assignment is not total".into()));
        }
        if on_obj.iter().any(|&y| y >= cod.object_count()) || on_mor.iter().any(|&m| m >= cod.morphism_count()) {
            return Err(CatError::NotFunctor("assignment leaves the codomain".into()));
        }
        for m in 0..dom.morphism_count() {
            let fm = on_mor[m];
            if cod.src(fm) != on_obj[dom.src(m)] || cod.dst(fm) != on_obj[dom.dst(m)] {
                return Err(CatError::NotFunctor(format!("`{}` lands between the wrong objects", dom.morphism_name(m))));
            }
        }
        for x in 0..dom.object_count() {
            if on_mor[dom.identity(x)] != cod.identity(on_obj[x]) {
                return Err(CatError::NotFunctor(format!("identity of `{}` not preserved", dom.object_name(x))));
            }
        }
        for g in 0..dom.morphism_count() {
            for f in 0..dom.morphism_count() {
                if let Some(gf) = dom.compose(g, f) {
                    if cod.comp(on_mor[g], on_mor[f]) != on_mor[gf] {
                        return Err(CatError::NotFunctor(format!(
                            "composite `{}`∘`{}` not preserved",
                            dom.morphism_name(g),
                            dom.morphism_name(f)
                        )));
                    }
                }
            }
        }
        Ok(Functor { dom, cod, on_obj, on_mor })
    }

    pub fn from_names(
        dom: FinCat,
        cod: FinCat,
        objects: &BTreeMap<String, String>,
        morphisms: &BTreeMap<String, String>,
    ) -> Result<Functor, CatError> {
        let mut on_obj = Vec::with_capacity(dom.object_count());
        for x in dom.objects() {
            let y = objects.get(x).ok_or_else(|| CatError::NotFunctor(format!("no image for object `{x}`")))?;
            on_obj.push(cod.object_index(y).ok_or_else(|| CatError::UnknownObject(y.clone()))?);
        }
        let mut on_mor = Vec::with_capacity(dom.morphism_count());
        for m in 0..dom.morphism_count() {
            let name = dom.morphism_name(m);
            let y = morphisms.get(name).ok_or_else(|| CatError::NotFunctor(format!("no image for morphism `{name}`")))?;
            on_mor.push(cod.morphism_index(y).ok_or_else(|| CatError::UnknownMorphism(y.clone()))?);
        }
        if let Some(k) = objects.keys().find(|k| dom.object_index(k).is_none()) {
            return Err(CatError::UnknownObject(k.clone()));
        }
        if let Some(k) = morphisms.keys().find(|k| dom.morphism_index(k).is_none()) {
            return Err(CatError::UnknownMorphism(k.clone()));
        }
        Functor::new(dom, cod, on_obj, on_mor)
    }

    pub(crate) fn new_unchecked(dom: FinCat, cod: FinCat, on_obj: Vec<usize>, on_mor: Vec<usize>) -> Functor {
        debug_assert!(Functor::new(dom.clone(), cod.clone(), on_obj.clone(), on_mor.clone()).is_ok());
        Functor { dom, cod, on_obj, on_mor }
    }

    pub fn identity(c: &FinCat) -> Functor {
        Functor {
            dom: c.clone(),
            cod: c.clone(),
            on_obj: (0..c.object_count()).collect(),
            on_mor: (0..c.morphism_count()).collect(),
        }
    }

    /// The functor collapsing `c` onto the terminal category.
    pub fn to_terminal(c: &FinCat) -> Functor {
        Functor {
            dom: c.clone(),
            cod: terminal(),
            on_obj: vec![0; c.object_count()],
            on_mor: vec![0; c.morphism_count()],
        }
    }

    /// `Idem -> c` picking out an idempotent.
    pub fn from_idempotent(c: &FinCat, e: usize) -> Result<Functor, CatError> {
        if !c.is_idempotent(e) {
            return Err(CatError::NotIdempotent(c.morphism_name(e).to_string()));
        }
        let x = c.src(e);
        Ok(Functor::new_unchecked(idem(), c.clone(), vec![x], vec![c.identity(x), e]))
    }

    pub fn dom(&self) -> &FinCat {
        &self.dom
    }

    pub fn cod(&self) -> &FinCat {
        &self.cod
    }

    pub fn on_object(&self, x: usize) -> usize {
        self.on_obj[x]
    }

    pub fn on_morphism(&self, m: usize) -> usize {
        self.on_mor[m]
    }

    pub fn object_map(&self) -> &[usize] {
        &self.on_obj
    }

    pub fn morphism_map(&self) -> &[usize] {
        &self.on_mor
    }

    /// `g ∘ f`.
    pub fn compose(g: &Functor, f: &Functor) -> Result<Functor, CatError> {
        if f.cod != g.dom {
            return Err(CatError::ShapeMismatch);
        }
        Ok(Functor {
            dom: f.dom.clone(),
            cod: g.cod.clone(),
            on_obj: f.on_obj.iter().map(|&x| g.on_obj[x]).collect(),
            on_mor: f.on_mor.iter().map(|&m| g.on_mor[m]).collect(),
        })
    }

    /// `f ⊔ h`.
    pub fn coproduct(f: &Functor, h: &Functor) -> Functor {
        let dom = FinCat::coproduct(&f.dom, &h.dom);
        let cod = FinCat::coproduct(&f.cod, &h.cod);
        let (oc, mc) = (f.cod.object_count(), f.cod.morphism_count());
        let on_obj = f.on_obj.iter().copied().chain(h.on_obj.iter().map(|&x| oc + x)).collect();
        let on_mor = f.on_mor.iter().copied().chain(h.on_mor.iter().map(|&m| mc + m)).collect();
        Functor::new_unchecked(dom, cod, on_obj, on_mor)
    }
}

/// `Σ: Idem -> Split`, sending `e` to `q∘p`.
pub fn sigma() -> Functor {
    Functor::new_unchecked(idem(), split(), vec![0], vec![0, 4])
}

/// All idempotents, identities included, in index order.
pub fn idempotents(c: &FinCat) -> Vec<usize> {
    (0..c.morphism_count()).filter(|&m| c.is_idempotent(m)).collect()
}

/// `q∘p = e` and `p∘q = id` through `object`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Splitting {
    pub object: usize,
    pub retraction: usize,
    pub section: usize,
}

/// Every splitting of `e`, in search order.
pub fn splittings(c: &FinCat, e: usize) -> Result<Vec<Splitting>, CatError> {
    if !c.is_idempotent(e) {
        return Err(CatError::NotIdempotent(c.morphism_name(e).to_string()));
    }
    let x = c.src(e);
    let mut out = Vec::new();
    for r in 0..c.object_count() {
        let ps = c.hom(x, r);
        let qs = c.hom(r, x);
        for &p in &ps {
            for &q in &qs {
                if c.comp(q, p) == e && c.comp(p, q) == c.identity(r) {
                    out.push(Splitting { object: r, retraction: p, section: q });
                }
            }
        }
    }
    Ok(out)
}

pub fn split_idempotent(c: &FinCat, e: usize) -> Result<Option<Splitting>, CatError> {
    Ok(splittings(c, e)?.into_iter().next())
}

/// The Karoubi envelope with its inclusion `x ↦ (x, id_x)`.
#[derive(Clone, Debug)]
pub struct Envelope {
    pub cat: FinCat,
    pub inclusion: Functor,
    /// `(object, idempotent)` behind each envelope object.
    pub pairs: Vec<(usize, usize)>,
    /// Underlying morphism behind each envelope morphism.
    pub underlying: Vec<usize>,
}

pub fn envelope(c: &FinCat) -> Envelope {
    let pairs: Vec<(usize, usize)> = idempotents(c).into_iter().map(|e| (c.src(e), e)).collect();
    let mut pairs = pairs;
    pairs.sort();
    let obj_name = |(x, e): (usize, usize)| format!("({},{})", c.object_name(x), c.morphism_name(e));
    let objects: Vec<String> = pairs.iter().map(|&p| obj_name(p)).collect();
    let mut morphisms = Vec::new();
    let mut underlying = Vec::new();
    let mut at: HashMap<(usize, usize, usize), usize> = HashMap::new();
    for (i, &(x, e)) in pairs.iter().enumerate() {
        for (j, &(y, e2)) in pairs.iter().enumerate() {
            for f in c.hom(x, y) {
                if c.comp(c.comp(e2, f), e) == f {
                    at.insert((i, j, f), morphisms.len());
                    morphisms.push((format!("{}:{}->{}", c.morphism_name(f), objects[i], objects[j]), i, j));
                    underlying.push(f);
                }
            }
        }
    }
    let identity: Vec<usize> = pairs.iter().enumerate().map(|(i, &(_, e))| at[&(i, i, e)]).collect();
    let mut rows = Vec::new();
    for (gi, &(_, gs, gd)) in morphisms.iter().enumerate() {
        for (fi, &(_, fs, fd)) in morphisms.iter().enumerate() {
            if gs == fd {
                let gf = c.comp(underlying[gi], underlying[fi]);
                rows.push((gi, fi, at[&(fs, gd, gf)]));
            }
        }
    }
    let cat = FinCat::new(objects, morphisms, identity, &rows).expect("envelope is a category");
    let obj_of = |x: usize| pairs.iter().position(|&p| p == (x, c.identity(x))).expect("identity pair");
    let on_obj: Vec<usize> = (0..c.object_count()).map(obj_of).collect();
    let on_mor = (0..c.morphism_count())
        .map(|f| at[&(on_obj[c.src(f)], on_obj[c.dst(f)], f)])
        .collect();
    let inclusion = Functor::new_unchecked(c.clone(), cat.clone(), on_obj, on_mor);
    Envelope { cat, inclusion, pairs, underlying }
}

/// The induced functor `(x, e) ↦ (F x, F e)` between envelopes.
pub fn envelope_functor(f: &Functor) -> Functor {
    let a = envelope(f.dom());
    let b = envelope(f.cod());
    let on_obj: Vec<usize> = a
        .pairs
        .iter()
        .map(|&(x, e)| {
            let key = (f.on_object(x), f.on_morphism(e));
            b.pairs.iter().position(|&p| p == key).expect("images of idempotents are idempotent")
        })
        .collect();
    let on_mor = (0..a.cat.morphism_count())
        .map(|m| {
            let (s, d) = (on_obj[a.cat.src(m)], on_obj[a.cat.dst(m)]);
            let u = f.on_morphism(a.underlying[m]);
            (0..b.cat.morphism_count())
                .find(|&n| b.cat.src(n) == s && b.cat.dst(n) == d && b.underlying[n] == u)
                .expect("image morphism is compatible")
        })
        .collect();
    Functor::new_unchecked(a.cat, b.cat, on_obj, on_mor)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FunctorFlags {
    pub fully_faithful: bool,
    pub surjective_up_to_retracts: bool,
    pub injective_on_objects: bool,
}

pub fn is_fully_faithful(f: &Functor) -> bool {
    let (c, d) = (f.dom(), f.cod());
    (0..c.object_count()).all(|x| {
        (0..c.object_count()).all(|y| {
            let mut imgs: Vec<usize> = c.hom(x, y).into_iter().map(|m| f.on_morphism(m)).collect();
            let target = d.hom(f.on_object(x), f.on_object(y));
            imgs.sort();
            let before = imgs.len();
            imgs.dedup();
            imgs.len() == before && imgs.len() == target.len()
        })
    })
}

/// `y` is a retract of `x`: some `i: y -> x`, `r: x -> y` with `r∘i = id_y`.
pub fn is_retract(c: &FinCat, y: usize, x: usize) -> bool {
    let rs = c.hom(x, y);
    c.hom(y, x)
        .into_iter()
        .any(|i| rs.iter().any(|&r| c.comp(r, i) == c.identity(y)))
}

pub fn is_isomorphic(c: &FinCat, y: usize, x: usize) -> bool {
    c.hom(y, x).into_iter().any(|m| c.is_iso(m))
}

pub fn functor_flags(f: &Functor) -> FunctorFlags {
    let (c, d) = (f.dom(), f.cod());
    let mut seen = vec![false; d.object_count()];
    let injective = f.object_map().iter().all(|&y| !std::mem::replace(&mut seen[y], true));
    FunctorFlags {
        fully_faithful: is_fully_faithful(f),
        surjective_up_to_retracts: (0..d.object_count())
            .all(|y| (0..c.object_count()).any(|x| is_retract(d, y, f.on_object(x)))),
        injective_on_objects: injective,
    }
}

/// Fully faithful and surjective up to retracts.
pub fn is_pastoral(f: &Functor) -> bool {
    let fl = functor_flags(f);
    fl.fully_faithful && fl.surjective_up_to_retracts
}

/// Fully faithful and essentially surjective.
pub fn is_equivalence(f: &Functor) -> bool {
    let d = f.cod();
    is_fully_faithful(f)
        && (0..d.object_count()).all(|y| {
            (0..f.dom().object_count()).any(|x| is_isomorphic(d, y, f.on_object(x)))
        })
}

/// Right lifting property against [`sigma`], decided over all squares.
pub fn is_idfibration(f: &Functor) -> bool {
    idfibration_witness(f).is_none()
}

/// An idempotent of the domain and a splitting of its image with no lift.
pub fn idfibration_witness(f: &Functor) -> Option<(usize, Splitting)> {
    let (c, d) = (f.dom(), f.cod());
    for e in idempotents(c) {
        let lifts = splittings(c, e).expect("idempotent");
        for s in splittings(d, f.on_morphism(e)).expect("functors preserve idempotents") {
            let ok = lifts.iter().any(|l| {
                f.on_object(l.object) == s.object
                    && f.on_morphism(l.retraction) == s.retraction
                    && f.on_morphism(l.section) == s.section
            });
            if !ok {
                return Some((e, s));
            }
        }
    }
    None
}

/// The functor `Split -> c` determined by a splitting of `e`.
pub fn splitting_functor(c: &FinCat, e: usize, s: Splitting) -> Functor {
    let x = c.src(e);
    Functor::new_unchecked(
        split(),
        c.clone(),
        vec![x, s.object],
        vec![c.identity(x), c.identity(s.object), s.retraction, s.section, e],
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KaroubianClassification {
    pub is_weq: bool,
    pub is_cof: bool,
    pub is_fib: bool,
    pub is_trivial_fib: bool,
    pub is_trivial_cof: bool,
}

/// Weak equivalences are pastoral, cofibrations injective on objects, fibrations idfibrations.
pub fn classify_karoubian(f: &Functor) -> KaroubianClassification {
    let is_weq = is_pastoral(f);
    let is_cof = functor_flags(f).injective_on_objects;
    let is_fib = is_idfibration(f);
    KaroubianClassification {
        is_weq,
        is_cof,
        is_fib,
        is_trivial_fib: is_fib && is_weq,
        is_trivial_cof: is_cof && is_weq,
    }
}

/// `f = second ∘ first` through `mid`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatFactorization {
    pub first: Functor,
    pub mid: FinCat,
    pub second: Functor,
}

/// Trivial cofibration followed by an idfibration.
///
/// Objects of the middle category are an idempotent `h` of the domain together
/// with a splitting of `F h`; morphisms `(h, s) -> (h', s')` are the `g` with
/// `h'∘g∘h = g`, and the identity of `(h, s)` is `h`.
pub fn factorize_karoubian_m5(f: &Functor) -> CatFactorization {
    let (c, d) = (f.dom(), f.cod());
    let mut objs: Vec<(usize, Splitting)> = Vec::new();
    for h in idempotents(c) {
        for s in splittings(d, f.on_morphism(h)).expect("idempotent image") {
            objs.push((h, s));
        }
    }
    let name = |&(h, s): &(usize, Splitting)| {
        format!(
            "({};{},{},{})",
            c.morphism_name(h),
            d.object_name(s.object),
            d.morphism_name(s.retraction),
            d.morphism_name(s.section)
        )
    };
    let objects: Vec<String> = objs.iter().map(name).collect();
    let mut morphisms = Vec::new();
    let mut under = Vec::new();
    let mut at: HashMap<(usize, usize, usize), usize> = HashMap::new();
    for (i, &(h, _)) in objs.iter().enumerate() {
        for (j, &(h2, _)) in objs.iter().enumerate() {
            for g in c.hom(c.src(h), c.src(h2)) {
                if c.comp(c.comp(h2, g), h) == g {
                    at.insert((i, j, g), morphisms.len());
                    morphisms.push((format!("{}:{}->{}", c.morphism_name(g), objects[i], objects[j]), i, j));
                    under.push(g);
                }
            }
        }
    }
    let identity: Vec<usize> = objs.iter().enumerate().map(|(i, &(h, _))| at[&(i, i, h)]).collect();
    let mut rows = Vec::new();
    for (gi, &(_, gs, gd)) in morphisms.iter().enumerate() {
        for (fi, &(_, fs, fd)) in morphisms.iter().enumerate() {
            if gs == fd {
                rows.push((gi, fi, at[&(fs, gd, c.comp(under[gi], under[fi]))]));
            }
        }
    }
    let mid = FinCat::new(objects, morphisms.clone(), identity, &rows).expect("middle category");
    let const_of = |x: usize| {
        let key = (
            c.identity(x),
            Splitting {
                object: f.on_object(x),
                retraction: d.identity(f.on_object(x)),
                section: d.identity(f.on_object(x)),
            },
        );
        objs.iter().position(|o| *o == key).expect("constant splitting")
    };
    let first_obj: Vec<usize> = (0..c.object_count()).map(const_of).collect();
    let first_mor = (0..c.morphism_count())
        .map(|g| at[&(first_obj[c.src(g)], first_obj[c.dst(g)], g)])
        .collect();
    let first = Functor::new_unchecked(c.clone(), mid.clone(), first_obj, first_mor);
    let second_obj = objs.iter().map(|(_, s)| s.object).collect();
    let second_mor = morphisms
        .iter()
        .zip(&under)
        .map(|(&(_, i, j), &g)| {
            let q = objs[i].1.section;
            let p2 = objs[j].1.retraction;
            d.comp(p2, d.comp(f.on_morphism(g), q))
        })
        .collect();
    let second = Functor::new_unchecked(mid.clone(), d.clone(), second_obj, second_mor);
    CatFactorization { first, mid, second }
}

/// Cofibration followed by a trivial fibration.
///
/// The middle category has the objects of domain and codomain, with morphisms
/// `u -> v` those of the codomain between their images.
pub fn factorize_karoubian_m4(f: &Functor) -> CatFactorization {
    let (c, d) = (f.dom(), f.cod());
    let nc = c.object_count();
    let total = nc + d.object_count();
    let img = |u: usize| if u < nc { f.on_object(u) } else { u - nc };
    let objects: Vec<String> = c
        .objects()
        .iter()
        .map(|x| format!("0:{x}"))
        .chain(d.objects().iter().map(|y| format!("1:{y}")))
        .collect();
    let mut morphisms = Vec::new();
    let mut under = Vec::new();
    let mut at: HashMap<(usize, usize, usize), usize> = HashMap::new();
    for u in 0..total {
        for v in 0..total {
            for m in d.hom(img(u), img(v)) {
                at.insert((u, v, m), morphisms.len());
                morphisms.push((format!("{}:{}->{}", d.morphism_name(m), objects[u], objects[v]), u, v));
                under.push(m);
            }
        }
    }
    let identity: Vec<usize> = (0..total).map(|u| at[&(u, u, d.identity(img(u)))]).collect();
    let mut rows = Vec::new();
    for (gi, &(_, gs, gd)) in morphisms.iter().enumerate() {
        for (fi, &(_, fs, fd)) in morphisms.iter().enumerate() {
            if gs == fd {
                rows.push((gi, fi, at[&(fs, gd, d.comp(under[gi], under[fi]))]));
            }
        }
    }
    let mid = FinCat::new(objects, morphisms.clone(), identity, &rows).expect("middle category");
    let first_mor = (0..c.morphism_count())
        .map(|g| at[&(c.src(g), c.dst(g), f.on_morphism(g))])
        .collect();
    let first = Functor::new_unchecked(c.clone(), mid.clone(), (0..nc).collect(), first_mor);
    let second = Functor::new_unchecked(mid.clone(), d.clone(), (0..total).map(img).collect(), under);
    CatFactorization { first, mid, second }
}

/// Backtracking search for functors with per-object and per-morphism candidates.
pub struct FunctorSearch<'a> {
    dom: &'a FinCat,
    cod: &'a FinCat,
    obj_cands: Vec<Vec<usize>>,
    mor_cands: Vec<Vec<usize>>,
    cap: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FunctorSearchOutcome {
    Found(Functor),
    NoneExists,
    Exhausted,
}

#[derive(Clone, Copy)]
enum Step {
    Object(usize),
    Morphism(usize),
}

struct SearchState {
    on_obj: Vec<usize>,
    on_mor: Vec<usize>,
    probes: u64,
}

impl<'a> FunctorSearch<'a> {
    pub fn new(dom: &'a FinCat, cod: &'a FinCat) -> Self {
        FunctorSearch {
            dom,
            cod,
            obj_cands: vec![(0..cod.object_count()).collect(); dom.object_count()],
            mor_cands: vec![(0..cod.morphism_count()).collect(); dom.morphism_count()],
            cap: PROBE_CAP,
        }
    }

    pub fn with_probe_cap(mut self, cap: u64) -> Self {
        self.cap = cap;
        self
    }

    pub fn fix_object(&mut self, x: usize, y: usize) {
        self.obj_cands[x].retain(|&c| c == y);
    }

    pub fn fix_morphism(&mut self, m: usize, n: usize) {
        self.mor_cands[m].retain(|&c| c == n);
    }

    pub fn restrict_objects<P: Fn(usize, usize) -> bool>(&mut self, keep: P) {
        for (x, c) in self.obj_cands.iter_mut().enumerate() {
            c.retain(|&y| keep(x, y));
        }
    }

    pub fn restrict_morphisms<P: Fn(usize, usize) -> bool>(&mut self, keep: P) {
        for (m, c) in self.mor_cands.iter_mut().enumerate() {
            c.retain(|&n| keep(m, n));
        }
    }

    pub fn shuffle<R: Rng>(&mut self, rng: &mut R) {
        for c in self.obj_cands.iter_mut().chain(self.mor_cands.iter_mut()) {
            c.shuffle(rng);
        }
    }

    /// Objects in index order, each followed by the morphisms whose endpoints
    /// are then both assigned.
    fn steps(&self) -> Vec<Step> {
        let c = self.dom;
        let mut steps = Vec::with_capacity(c.object_count() + c.morphism_count());
        for x in 0..c.object_count() {
            steps.push(Step::Object(x));
            steps.extend((0..c.morphism_count()).filter(|&m| c.src(m).max(c.dst(m)) == x).map(Step::Morphism));
        }
        steps
    }

    /// Composable triples `(g, f, g∘f)` keyed by the step of their last morphism.
    fn triples(&self, steps: &[Step]) -> Vec<Vec<(usize, usize, usize)>> {
        let n = self.dom.morphism_count();
        let mut pos = vec![0; n];
        for (i, s) in steps.iter().enumerate() {
            if let Step::Morphism(m) = *s {
                pos[m] = i;
            }
        }
        let mut by_step = vec![Vec::new(); steps.len()];
        for g in 0..n {
            for f in 0..n {
                if let Some(gf) = self.dom.compose(g, f) {
                    by_step[pos[g].max(pos[f]).max(pos[gf])].push((g, f, gf));
                }
            }
        }
        by_step
    }

    pub fn first(&self) -> FunctorSearchOutcome {
        let mut found = None;
        let complete = self.for_each(|f| {
            found = Some(f.clone());
            false
        });
        match found {
            Some(f) => FunctorSearchOutcome::Found(f),
            None if complete => FunctorSearchOutcome::NoneExists,
            None => FunctorSearchOutcome::Exhausted,
        }
    }

    /// Visits functors until `visit` returns `false`; `false` if the cap was hit.
    pub fn for_each<F: FnMut(&Functor) -> bool>(&self, mut visit: F) -> bool {
        let steps = self.steps();
        let triples = self.triples(&steps);
        let mut st = SearchState {
            on_obj: vec![usize::MAX; self.dom.object_count()],
            on_mor: vec![usize::MAX; self.dom.morphism_count()],
            probes: 0,
        };
        let mut stopped = false;
        let complete = self.step_from(0, &steps, &triples, &mut st, &mut visit, &mut stopped);
        complete || stopped
    }

    fn step_from<F: FnMut(&Functor) -> bool>(
        &self,
        i: usize,
        steps: &[Step],
        triples: &[Vec<(usize, usize, usize)>],
        st: &mut SearchState,
        visit: &mut F,
        stopped: &mut bool,
    ) -> bool {
        let (c, d) = (self.dom, self.cod);
        let Some(&step) = steps.get(i) else {
            let f = Functor::new_unchecked(c.clone(), d.clone(), st.on_obj.clone(), st.on_mor.clone());
            if !visit(&f) {
                *stopped = true;
            }
            return true;
        };
        let cands = match step {
            Step::Object(x) => &self.obj_cands[x],
            Step::Morphism(m) => &self.mor_cands[m],
        };
        for &n in cands {
            st.probes += 1;
            if st.probes > self.cap {
                return false;
            }
            match step {
                Step::Object(x) => st.on_obj[x] = n,
                Step::Morphism(m) => {
                    let (s, t) = (st.on_obj[c.src(m)], st.on_obj[c.dst(m)]);
                    if d.src(n) != s || d.dst(n) != t || (c.is_identity(m) && n != d.identity(s)) {
                        continue;
                    }
                    st.on_mor[m] = n;
                    let ok = triples[i]
                        .iter()
                        .all(|&(g, f, gf)| d.comp(st.on_mor[g], st.on_mor[f]) == st.on_mor[gf]);
                    if !ok {
                        continue;
                    }
                }
            }
            if !self.step_from(i + 1, steps, triples, st, visit, stopped) {
                return false;
            }
            if *stopped {
                return true;
            }
        }
        match step {
            Step::Object(x) => st.on_obj[x] = usize::MAX,
            Step::Morphism(m) => st.on_mor[m] = usize::MAX,
        }
        true
    }
}

/// A commuting square of functors `right ∘ top = bottom ∘ left`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatSquare {
    pub top: Functor,
    pub bottom: Functor,
    pub left: Functor,
    pub right: Functor,
}

impl CatSquare {
    pub fn new(top: Functor, bottom: Functor, left: Functor, right: Functor) -> Result<CatSquare, CatError> {
        if left.dom() != top.dom() || left.cod() != bottom.dom() || top.cod() != right.dom() || right.cod() != bottom.cod() {
            return Err(CatError::ShapeMismatch);
        }
        if Functor::compose(&right, &top)? != Functor::compose(&bottom, &left)? {
            return Err(CatError::NotCommuting);
        }
        Ok(CatSquare { top, bottom, left, right })
    }

    pub fn is_lift(&self, l: &Functor) -> bool {
        Functor::compose(l, &self.left).is_ok_and(|u| u == self.top)
            && Functor::compose(&self.right, l).is_ok_and(|v| v == self.bottom)
    }
}

/// Exhaustive search for a diagonal functor.
pub fn solve_cat_lift(sq: &CatSquare) -> FunctorSearchOutcome {
    let (b, x) = (sq.left.cod(), sq.right.dom());
    let mut search = FunctorSearch::new(b, x);
    search.restrict_objects(|bo, xo| sq.right.on_object(xo) == sq.bottom.on_object(bo));
    search.restrict_morphisms(|bm, xm| sq.right.on_morphism(xm) == sq.bottom.on_morphism(bm));
    for a in 0..sq.left.dom().object_count() {
        search.fix_object(sq.left.on_object(a), sq.top.on_object(a));
    }
    for a in 0..sq.left.dom().morphism_count() {
        search.fix_morphism(sq.left.on_morphism(a), sq.top.on_morphism(a));
    }
    search.first()
}

/// Model name used in Karoubian reports.
pub const KAROUBIAN: &str = "karoubian";

/// Morphism cap of the categories generated by [`check_karoubian_axioms`].
pub const HARNESS_MAX_MORPHISMS: usize = 9;

fn functor_json(f: &Functor) -> serde_json::Value {
    serde_json::to_value(FunctorDoc::from_functor(f)).expect("serializable")
}

fn functors_json(fs: &[(&str, &Functor)]) -> serde_json::Value {
    serde_json::Value::Object(fs.iter().map(|(k, f)| (k.to_string(), functor_json(f))).collect())
}

/// Random instances of the classes of the Karoubian model structure.
struct CatSampler<'r> {
    rng: &'r mut ChaCha8Rng,
    max_objects: usize,
}

impl CatSampler<'_> {
    fn cat(&mut self) -> FinCat {
        random::random_category(self.rng, self.max_objects, HARNESS_MAX_MORPHISMS)
    }

    fn functor_from(&mut self, c: &FinCat) -> Functor {
        let d = self.cat();
        random::random_functor(self.rng, c, &d)
    }

    /// A pastoral functor out of `c`, injective on objects.
    fn weq_from(&mut self, c: &FinCat) -> Functor {
        match self.rng.gen_range(0..4) {
            0 => envelope(c).inclusion,
            1 => random::random_category_iso(self.rng, c),
            2 => Functor::identity(c),
            _ => {
                let f = self.functor_from(c);
                factorize_karoubian_m5(&f).first
            }
        }
    }

    fn any_functor(&mut self) -> Functor {
        let c = self.cat();
        match self.rng.gen_range(0..7) {
            0 => self.weq_from(&c),
            1 => Functor::to_terminal(&c),
            2 => sigma(),
            3 => {
                let f = self.functor_from(&c);
                factorize_karoubian_m4(&f).first
            }
            4 => {
                let f = self.functor_from(&c);
                factorize_karoubian_m4(&f).second
            }
            _ => self.functor_from(&c),
        }
    }

    fn trivial_cofibration(&mut self) -> Functor {
        match self.rng.gen_range(0..2) {
            0 => {
                let c = self.cat();
                self.weq_from(&c)
            }
            _ => {
                let f = self.any_functor();
                factorize_karoubian_m5(&f).first
            }
        }
    }

    fn cofibration(&mut self) -> Functor {
        match self.rng.gen_range(0..3) {
            0 => sigma(),
            1 => {
                let f = self.any_functor();
                factorize_karoubian_m4(&f).first
            }
            _ => self.any_functor(),
        }
    }

    fn fibration_candidate(&mut self) -> Functor {
        match self.rng.gen_range(0..4) {
            0 => {
                let f = self.any_functor();
                factorize_karoubian_m5(&f).second
            }
            1 => {
                let c = self.cat();
                Functor::to_terminal(&envelope(&c).cat)
            }
            2 => {
                let c = self.cat();
                random::random_category_iso(self.rng, &c)
            }
            _ => self.any_functor(),
        }
    }

    fn trivial_fibration_candidate(&mut self) -> Functor {
        match self.rng.gen_range(0..3) {
            0 => {
                let f = self.any_functor();
                factorize_karoubian_m4(&f).second
            }
            1 => {
                let c = self.cat();
                random::random_category_iso(self.rng, &c)
            }
            _ => self.fibration_candidate(),
        }
    }

    fn confirmed<G, P>(&mut self, mut gen: G, pred: P) -> Option<Functor>
    where
        G: FnMut(&mut Self) -> Functor,
        P: Fn(&KaroubianClassification) -> bool,
    {
        for _ in 0..8 {
            let f = gen(self);
            if pred(&classify_karoubian(&f)) {
                return Some(f);
            }
        }
        None
    }
}

fn karoubian_class(c: &KaroubianClassification, class: usize) -> bool {
    [c.is_weq, c.is_cof, c.is_fib][class]
}

const KAROUBIAN_CLASS_NAMES: [&str; 3] = ["pastoral functor", "cofibration", "idfibration"];

/// `f` as a retract of `f ⊔ h`: returns `f ⊔ h` and the inclusions and
/// retractions of its domain and codomain.
fn cat_retract_of_sum(f: &Functor, h: &Functor) -> (Functor, [Functor; 4]) {
    let g = Functor::coproduct(f, h);
    let (a, b) = (f.dom(), f.cod());
    let (src, dst) = (g.dom().clone(), g.cod().clone());
    let ia = Functor::new_unchecked(a.clone(), src.clone(), (0..a.object_count()).collect(), (0..a.morphism_count()).collect());
    let ib = Functor::new_unchecked(b.clone(), dst.clone(), (0..b.object_count()).collect(), (0..b.morphism_count()).collect());
    let retraction = |sum: &FinCat, part: &FinCat, y: usize| {
        let (no, nm) = (part.object_count(), part.morphism_count());
        let on_obj = (0..sum.object_count()).map(|u| if u < no { u } else { y }).collect();
        let on_mor = (0..sum.morphism_count())
            .map(|m| if m < nm { m } else { part.identity(y) })
            .collect();
        Functor::new_unchecked(sum.clone(), part.clone(), on_obj, on_mor)
    };
    let ra = retraction(&src, a, 0);
    let rb = retraction(&dst, b, f.on_object(0));
    (g, [ia, ra, ib, rb])
}

fn check_karoubian_m1(s: &mut CatSampler, rec: &mut Recorder, case: usize) {
    let c = s.cat();
    let iso = random::random_category_iso(s.rng, &c);
    let k = classify_karoubian(&iso);
    rec.check("M1", case, k.is_weq && k.is_cof && k.is_fib, "isomorphism outside some class", || {
        functor_json(&iso)
    });
    for _ in 0..2 {
        let f = s.any_functor();
        let b = f.cod().clone();
        let g = if s.rng.gen_bool(0.5) { s.weq_from(&b) } else { s.functor_from(&b) };
        let gf = Functor::compose(&g, &f).expect("composable");
        let (wf, wg, wgf) = (is_pastoral(&f), is_pastoral(&g), is_pastoral(&gf));
        let ok = (!(wf && wg) || wgf) && (!(wf && wgf) || wg) && (!(wg && wgf) || wf);
        rec.check("M1", case, ok, "two out of three fails", || functors_json(&[("f", &f), ("g", &g)]));
    }
}

fn check_karoubian_m2(s: &mut CatSampler, rec: &mut Recorder, case: usize) {
    let f = match s.rng.gen_range(0..3) {
        0 => s.any_functor(),
        1 => s.fibration_candidate(),
        _ => s.trivial_cofibration(),
    };
    let h = match s.rng.gen_range(0..3) {
        0 => Functor::identity(&s.cat()),
        1 => {
            let z = s.cat();
            random::random_category_iso(s.rng, &z)
        }
        _ => s.any_functor(),
    };
    let (g, [ia, ra, ib, rb]) = cat_retract_of_sum(&f, &h);
    let diagram = Functor::compose(&ra, &ia).is_ok_and(|m| m == Functor::identity(f.dom()))
        && Functor::compose(&rb, &ib).is_ok_and(|m| m == Functor::identity(f.cod()))
        && Functor::compose(&g, &ia).ok() == Functor::compose(&ib, &f).ok()
        && Functor::compose(&f, &ra).ok() == Functor::compose(&rb, &g).ok();
    rec.check("M2", case, diagram, "retract diagram does not commute", || {
        functors_json(&[("f", &f), ("h", &h)])
    });
    let (cf, cg) = (classify_karoubian(&f), classify_karoubian(&g));
    for (class, name) in KAROUBIAN_CLASS_NAMES.iter().enumerate() {
        if karoubian_class(&cg, class) {
            rec.check(
                "M2",
                case,
                karoubian_class(&cf, class),
                &format!("retract of a {name} is not one"),
                || functors_json(&[("f", &f), ("h", &h)]),
            );
        } else {
            rec.skip("M2");
        }
    }
}

/// A random commuting square of functors with the given sides.
fn random_cat_square(s: &mut CatSampler, left: &Functor, right: &Functor) -> Option<CatSquare> {
    for _ in 0..4 {
        let top = random::random_functor(s.rng, left.dom(), right.dom());
        let mut bottoms = FunctorSearch::new(left.cod(), right.cod()).with_probe_cap(100_000);
        for a in 0..left.dom().object_count() {
            bottoms.fix_object(left.on_object(a), right.on_object(top.on_object(a)));
        }
        for a in 0..left.dom().morphism_count() {
            bottoms.fix_morphism(left.on_morphism(a), right.on_morphism(top.on_morphism(a)));
        }
        bottoms.shuffle(s.rng);
        if let FunctorSearchOutcome::Found(bottom) = bottoms.first() {
            return CatSquare::new(top, bottom, left.clone(), right.clone()).ok();
        }
    }
    None
}

/// Lifts `left` against `right` in a random square, recording the outcome.
pub(crate) fn check_cat_lift(
    rec: &mut Recorder,
    case: usize,
    sq: &CatSquare,
    what: &str,
) {
    let outcome = solve_cat_lift(sq);
    let ok = matches!(&outcome, FunctorSearchOutcome::Found(l) if sq.is_lift(l));
    let reason = match outcome {
        FunctorSearchOutcome::Exhausted => format!("{what}: search exhausted"),
        _ => format!("{what}: no lift"),
    };
    rec.check("M3", case, ok, &reason, || {
        serde_json::to_value(CatSquareDoc::from_square(sq)).expect("serializable")
    });
}

fn check_karoubian_m3(s: &mut CatSampler, rec: &mut Recorder, case: usize) {
    type Gen = fn(&mut CatSampler) -> Option<Functor>;
    let pairs: [(Gen, Gen, &str); 2] = [
        (
            |s| s.confirmed(|s| s.trivial_cofibration(), |c| c.is_trivial_cof),
            |s| s.confirmed(|s| s.fibration_candidate(), |c| c.is_fib),
            "trivial cofibration against idfibration",
        ),
        (
            |s| s.confirmed(|s| s.cofibration(), |c| c.is_cof),
            |s| s.confirmed(|s| s.trivial_fibration_candidate(), |c| c.is_trivial_fib),
            "cofibration against trivial fibration",
        ),
    ];
    for (gl, gr, what) in pairs {
        let (Some(left), Some(right)) = (gl(s), gr(s)) else {
            rec.skip("M3");
            continue;
        };
        match random_cat_square(s, &left, &right) {
            Some(sq) => check_cat_lift(rec, case, &sq, what),
            None => rec.skip("M3"),
        }
    }
}

fn check_karoubian_factorization(s: &mut CatSampler, rec: &mut Recorder, case: usize, axiom: Axiom) {
    let f = s.any_functor();
    let (name, fac) = match axiom {
        Axiom::M4 => ("M4", factorize_karoubian_m4(&f)),
        Axiom::M5 => ("M5", factorize_karoubian_m5(&f)),
    };
    let composite = Functor::compose(&fac.second, &fac.first).is_ok_and(|g| g == f);
    let (c1, c2) = (classify_karoubian(&fac.first), classify_karoubian(&fac.second));
    let classes = match axiom {
        Axiom::M4 => c1.is_cof && c2.is_trivial_fib,
        Axiom::M5 => c1.is_trivial_cof && c2.is_fib,
    };
    rec.check(name, case, composite && classes, "factorization fails", || {
        functors_json(&[("f", &f), ("first", &fac.first), ("second", &fac.second)])
    });
}

/// Randomized check of the Karoubian model axioms; deterministic in `seed`.
pub fn check_karoubian_axioms(seed: u64, cases: usize, max_objects: usize) -> Result<AxiomReport, ModelError> {
    if cases == 0 {
        return Err(ModelError::NoCases);
    }
    let max_objects = max_objects.max(1);
    let mut rec = Recorder::new();
    for case in 0..cases {
        let mut rng = case_rng(seed, case);
        let mut s = CatSampler { rng: &mut rng, max_objects };
        check_karoubian_m1(&mut s, &mut rec, case);
        check_karoubian_m2(&mut s, &mut rec, case);
        check_karoubian_m3(&mut s, &mut rec, case);
        check_karoubian_factorization(&mut s, &mut rec, case, Axiom::M4);
        check_karoubian_factorization(&mut s, &mut rec, case, Axiom::M5);
    }
    Ok(AxiomReport {
        kind: REPORT.to_string(),
        model: KAROUBIAN.to_string(),
        seed,
        cases,
        max_objects,
        params: ReportParams::Categories(CategoryParams {
            max_carrier: random::MAX_CARRIER,
            max_generators: random::MAX_GENERATORS,
            max_morphisms: HARNESS_MAX_MORPHISMS,
            functor_sampling: "randomized search".to_string(),
        }),
        results: rec.results(),
        counterexamples: rec.counterexamples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(c: &FinCat, name: &str) -> usize {
        c.morphism_index(name).unwrap()
    }

    #[test]
    fn built_in_categories_validate() {
        assert_eq!(idem().morphism_count(), 2);
        assert_eq!(split().morphism_count(), 5);
        assert_eq!(cyclic_group(3).morphism_count(), 3);
        let s = sigma();
        assert_eq!(s.on_morphism(1), m(&split(), "qp"));
    }

    #[test]
    fn associativity_violation_is_reported() {
        // Monoid table {1, a, b} with a∘a = b, a∘b = a, b∘a = b, b∘b = b.
        let objs = vec!["*".to_string()];
        let mors = vec![("1".to_string(), 0, 0), ("a".to_string(), 0, 0), ("b".to_string(), 0, 0)];
        let rows = [
            (0, 0, 0), (0, 1, 1), (0, 2, 2), (1, 0, 1), (2, 0, 2),
            (1, 1, 2), (1, 2, 1), (2, 1, 2), (2, 2, 2),
        ];
        assert!(matches!(FinCat::new(objs, mors, vec![0], &rows), Err(CatError::AssocViolation(..))));
    }

    #[test]
    fn unit_violation_and_gap() {
        let objs = vec!["0".to_string()];
        let mors = vec![("id".to_string(), 0, 0), ("e".to_string(), 0, 0)];
        let rows = [(0, 0, 0), (0, 1, 0), (1, 0, 1), (1, 1, 1)];
        assert_eq!(
            FinCat::new(objs.clone(), mors.clone(), vec![0], &rows),
            Err(CatError::UnitViolation("e".into()))
        );
        assert_eq!(
            FinCat::new(objs, mors, vec![0], &rows[..3]),
            Err(CatError::CompositionGap("e".into(), "e".into()))
        );
    }

    #[test]
    fn idempotent_examples() {
        let i = idem();
        assert_eq!(idempotents(&i), vec![0, 1]);
        assert_eq!(idempotents(&cyclic_group(4)), vec![0]);
        let s = split();
        assert_eq!(idempotents(&s), vec![0, 1, m(&s, "qp")]);
    }

    #[test]
    fn splitting_examples() {
        let i = idem();
        assert_eq!(
            split_idempotent(&i, 0).unwrap(),
            Some(Splitting { object: 0, retraction: 0, section: 0 })
        );
        assert_eq!(split_idempotent(&i, 1).unwrap(), None);
        let s = split();
        let sp = split_idempotent(&s, m(&s, "qp")).unwrap().unwrap();
        assert_eq!((sp.object, sp.retraction, sp.section), (1, m(&s, "p"), m(&s, "q")));
        assert_eq!(split_idempotent(&cyclic_group(2), 1), Err(CatError::NotIdempotent("g1".into())));
    }

    #[test]
    fn envelope_of_idem() {
        let env = envelope(&idem());
        assert_eq!(env.cat.objects(), &["(0,id0)".to_string(), "(0,e)".to_string()]);
        let oe = env.cat.object_index("(0,e)").unwrap();
        assert_eq!(env.cat.morphism_name(env.cat.identity(oe)), "e:(0,e)->(0,e)");
        for e in idempotents(&env.cat) {
            assert!(split_idempotent(&env.cat, e).unwrap().is_some());
        }
        let fl = functor_flags(&env.inclusion);
        assert!(fl.fully_faithful && fl.surjective_up_to_retracts && fl.injective_on_objects);
    }

    #[test]
    fn envelope_of_split_category_is_equivalent() {
        let s = split();
        let env = envelope(&s);
        assert!(is_equivalence(&env.inclusion));
        // Three identities plus qp on (0,id0).
        assert_eq!(idempotents(&env.cat).len(), 4);
    }

    #[test]
    fn pastoral_examples() {
        let i = idem();
        assert!(is_pastoral(&envelope(&i).inclusion));
        let fl = functor_flags(&Functor::identity(&i));
        assert!(fl.fully_faithful && fl.surjective_up_to_retracts && fl.injective_on_objects);
        // Constant functor into a discrete category with two objects.
        let d = discrete(2);
        let k = Functor::new(terminal(), d, vec![0], vec![0]).unwrap();
        assert!(!functor_flags(&k).surjective_up_to_retracts);
        // Non-full: Idem -> Split via Σ misses p and q between 0 and 1 but is full on 0.
        let g = Functor::to_terminal(&cyclic_group(2));
        assert!(!is_pastoral(&g));
    }

    #[test]
    fn idfibration_examples() {
        assert!(is_idfibration(&Functor::identity(&split())));
        assert!(is_idfibration(&Functor::to_terminal(&envelope(&idem()).cat)));
        assert!(!is_idfibration(&Functor::to_terminal(&idem())) || split_idempotent(&idem(), 1).unwrap().is_some());
        // Σ: e does not split in Idem but its image does in Split.
        assert!(!is_idfibration(&sigma()));
    }

    #[test]
    fn karoubian_factorizations_of_sigma() {
        let s = sigma();
        let m5 = factorize_karoubian_m5(&s);
        assert_eq!(Functor::compose(&m5.second, &m5.first).unwrap(), s);
        let c1 = classify_karoubian(&m5.first);
        assert!(c1.is_trivial_cof);
        assert!(classify_karoubian(&m5.second).is_fib);
        let m4 = factorize_karoubian_m4(&s);
        assert_eq!(Functor::compose(&m4.second, &m4.first).unwrap(), s);
        assert!(classify_karoubian(&m4.first).is_cof);
        assert!(classify_karoubian(&m4.second).is_trivial_fib);
    }

    #[test]
    fn identity_factorization_through_terminal() {
        let t = terminal();
        let m5 = factorize_karoubian_m5(&Functor::identity(&t));
        assert_eq!(m5.mid.object_count(), 1);
    }

    #[test]
    fn lift_with_identity_left_leg() {
        let s = split();
        let top = Functor::identity(&s);
        let sq = CatSquare::new(top.clone(), top.clone(), Functor::identity(&s), Functor::identity(&s)).unwrap();
        assert_eq!(solve_cat_lift(&sq), FunctorSearchOutcome::Found(top));
    }

    #[test]
    fn sigma_against_non_idfibration_has_no_lift() {
        // Square with left = Σ, right = Idem -> *, top = identity, bottom = Split -> *.
        let i = idem();
        let sq = CatSquare::new(
            Functor::identity(&i),
            Functor::to_terminal(&split()),
            sigma(),
            Functor::to_terminal(&i),
        )
        .unwrap();
        assert_eq!(solve_cat_lift(&sq), FunctorSearchOutcome::NoneExists);
    }

    #[test]
    fn functor_search_counts_endofunctors_of_idem() {
        let i = idem();
        let mut n = 0;
        FunctorSearch::new(&i, &i).for_each(|_| {
            n += 1;
            true
        });
        // e ↦ id0 or e ↦ e.
        assert_eq!(n, 2);
    }
}
