//! Short maps between finite spaces and the predicates model structures are built from.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::extnum::ExtNN;
use crate::space::Space;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("not short: distance from `{0}` to `{1}` grows")]
    NotShort(String, String),
    #[error("codomain of the first map is not the domain of the second")]
    DomainMismatch,
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("no assignment for `{0}`")]
    MissingAssignment(String),
    #[error("assignment has {got} entries, domain has {expected} objects")]
    WrongArity { expected: usize, got: usize },
}

/// A certified short map, stored with its domain and codomain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceMap {
    dom: Space,
    cod: Space,
    assign: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct MapFlags {
    pub injective_on_objects: bool,
    pub surjective_on_objects: bool,
    pub fully_faithful: bool,
    pub essentially_surjective: bool,
    pub dense: bool,
}

fn first_short_violation(dom: &Space, cod: &Space, assign: &[usize]) -> Option<(usize, usize)> {
    let n = dom.len();
    for x in 0..n {
        for y in 0..n {
            if dom.d(x, y) < cod.d(assign[x], assign[y]) {
                return Some((x, y));
            }
        }
    }
    None
}

impl SpaceMap {
    pub fn new(dom: Space, cod: Space, assign: Vec<usize>) -> Result<SpaceMap, MapError> {
        if assign.len() != dom.len() {
            return Err(MapError::WrongArity {
                expected: dom.len(),
                got: assign.len(),
            });
        }
        if let Some(&bad) = assign.iter().find(|&&y| y >= cod.len()) {
            return Err(MapError::UnknownObject(format!("#{bad}")));
        }
        if let Some((x, y)) = first_short_violation(&dom, &cod, &assign) {
            return Err(MapError::NotShort(
                dom.name(x).to_string(),
                dom.name(y).to_string(),
            ));
        }
        Ok(SpaceMap { dom, cod, assign })
    }

    /// Builds a map from a name-to-name assignment.
    pub fn from_names(
        dom: Space,
        cod: Space,
        assign: &BTreeMap<String, String>,
    ) -> Result<SpaceMap, MapError> {
        for key in assign.keys() {
            if dom.index_of(key).is_none() {
                return Err(MapError::UnknownObject(key.clone()));
            }
        }
        let mut idx = Vec::with_capacity(dom.len());
        for x in dom.objects() {
            let target = assign
                .get(x)
                .ok_or_else(|| MapError::MissingAssignment(x.clone()))?;
            idx.push(
                cod.index_of(target)
                    .ok_or_else(|| MapError::UnknownObject(target.clone()))?,
            );
        }
        SpaceMap::new(dom, cod, idx)
    }

    pub(crate) fn new_unchecked(dom: Space, cod: Space, assign: Vec<usize>) -> SpaceMap {
        debug_assert!(assign.len() == dom.len());
        debug_assert!(first_short_violation(&dom, &cod, &assign).is_none());
        SpaceMap { dom, cod, assign }
    }

    pub fn identity(s: &Space) -> SpaceMap {
        SpaceMap::new_unchecked(s.clone(), s.clone(), (0..s.len()).collect())
    }

    /// The map sending everything to `target`.
    pub fn constant(dom: &Space, cod: &Space, target: usize) -> SpaceMap {
        assert!(target < cod.len());
        SpaceMap::new_unchecked(dom.clone(), cod.clone(), vec![target; dom.len()])
    }

    /// The unique map to the one-point space.
    pub fn to_point(dom: &Space) -> SpaceMap {
        SpaceMap::constant(dom, &Space::point(), 0)
    }

    pub fn dom(&self) -> &Space {
        &self.dom
    }

    pub fn cod(&self) -> &Space {
        &self.cod
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assign
    }

    pub fn apply(&self, x: usize) -> usize {
        self.assign[x]
    }

    /// Name-to-name view of the assignment.
    pub fn named_assignment(&self) -> BTreeMap<String, String> {
        self.assign
            .iter()
            .enumerate()
            .map(|(x, &y)| (self.dom.name(x).to_string(), self.cod.name(y).to_string()))
            .collect()
    }

    /// `g ∘ f`.
    pub fn compose(g: &SpaceMap, f: &SpaceMap) -> Result<SpaceMap, MapError> {
        if f.cod != g.dom {
            return Err(MapError::DomainMismatch);
        }
        let assign = f.assign.iter().map(|&y| g.assign[y]).collect();
        Ok(SpaceMap::new_unchecked(f.dom.clone(), g.cod.clone(), assign))
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.cod.len()];
        self.assign.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.cod.len()];
        for &y in &self.assign {
            hit[y] = true;
        }
        hit.into_iter().all(|h| h)
    }

    /// Isometric on every ordered pair.
    pub fn is_fully_faithful(&self) -> bool {
        let n = self.dom.len();
        (0..n).all(|x| {
            (0..n).all(|y| self.dom.d(x, y) == self.cod.d(self.assign[x], self.assign[y]))
        })
    }

    /// Every codomain object is isomorphic to an image point.
    pub fn is_essentially_surjective(&self) -> bool {
        (0..self.cod.len()).all(|d| self.assign.iter().any(|&y| self.cod.iso(y, d)))
    }

    /// Every codomain object is a limit of a Cauchy sequence of image points.
    ///
    /// A Cauchy sequence in a finite space is eventually inside one zero-cluster,
    /// so it suffices to test constant sequences at the critical tolerance: the
    /// smallest positive finite distance of the codomain.
    pub fn is_dense(&self) -> bool {
        let eps = self
            .cod
            .min_positive_distance()
            .unwrap_or_else(|| ExtNN::from_int(1));
        (0..self.cod.len()).all(|d| {
            self.assign.iter().any(|&y| {
                let gap = std::cmp::max(self.cod.d(y, d), self.cod.d(d, y));
                gap < &eps
            })
        })
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective() && self.is_fully_faithful()
    }

    pub fn flags(&self) -> MapFlags {
        MapFlags {
            injective_on_objects: self.is_injective(),
            surjective_on_objects: self.is_surjective(),
            fully_faithful: self.is_fully_faithful(),
            essentially_surjective: self.is_essentially_surjective(),
            dense: self.is_dense(),
        }
    }

    /// Inverse of an isomorphism.
    pub fn inverse(&self) -> Option<SpaceMap> {
        if !self.is_isomorphism() {
            return None;
        }
        let mut inv = vec![0; self.cod.len()];
        for (x, &y) in self.assign.iter().enumerate() {
            inv[y] = x;
        }
        Some(SpaceMap::new_unchecked(
            self.cod.clone(),
            self.dom.clone(),
            inv,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::apply_m;

    fn v(s: &str) -> ExtNN {
        s.parse().unwrap()
    }

    fn sym2(a: &str, b: &str, w: &str) -> Space {
        Space::new(
            vec![a.into(), b.into()],
            vec![vec![v("0"), v(w)], vec![v(w), v("0")]],
        )
        .unwrap()
    }

    #[test]
    fn make_map_examples() {
        let s = sym2("a", "b", "2");
        assert!(SpaceMap::new(s.clone(), s.clone(), vec![0, 1]).is_ok());
        assert!(SpaceMap::new(s.clone(), s.clone(), vec![1, 1]).is_ok());
        let t = sym2("x", "y", "3");
        assert_eq!(
            SpaceMap::new(s, t, vec![0, 1]),
            Err(MapError::NotShort("a".into(), "b".into()))
        );
    }

    #[test]
    fn from_names_errors() {
        let s = sym2("a", "b", "1");
        let mut m = BTreeMap::new();
        m.insert("a".to_string(), "a".to_string());
        assert_eq!(
            SpaceMap::from_names(s.clone(), s.clone(), &m),
            Err(MapError::MissingAssignment("b".into()))
        );
        m.insert("b".to_string(), "zz".to_string());
        assert_eq!(
            SpaceMap::from_names(s.clone(), s, &m),
            Err(MapError::UnknownObject("zz".into()))
        );
    }

    #[test]
    fn compose_examples() {
        let s = sym2("a", "b", "1");
        let f = SpaceMap::new(s.clone(), s.clone(), vec![1, 0]).unwrap();
        let id = SpaceMap::identity(&s);
        assert_eq!(SpaceMap::compose(&id, &f).unwrap(), f);
        assert_eq!(SpaceMap::compose(&f, &f).unwrap(), id);
        let p = SpaceMap::to_point(&s);
        assert_eq!(SpaceMap::compose(&f, &p), Err(MapError::DomainMismatch));
    }

    #[test]
    fn flag_examples() {
        let s = sym2("a", "b", "1");
        let all = MapFlags {
            injective_on_objects: true,
            surjective_on_objects: true,
            fully_faithful: true,
            essentially_surjective: true,
            dense: true,
        };
        assert_eq!(SpaceMap::identity(&s).flags(), all);

        let inc = SpaceMap::new(Space::point(), s, vec![0]).unwrap();
        let fl = inc.flags();
        assert!(fl.fully_faithful && !fl.essentially_surjective && !fl.dense);

        let z = Space::indiscernible_pair();
        let (_, q) = z.gaunt_quotient();
        let fl = q.flags();
        assert!(fl.fully_faithful && fl.essentially_surjective && fl.dense);
        assert!(!fl.injective_on_objects);
        assert!(apply_m(&q).is_isomorphism());
    }

    #[test]
    fn inverse_of_swap() {
        let s = sym2("a", "b", "1");
        let f = SpaceMap::new(s.clone(), s.clone(), vec![1, 0]).unwrap();
        assert_eq!(f.inverse().unwrap(), f);
        assert!(SpaceMap::to_point(&s).inverse().is_none());
    }
}
