//! Value-in-`[0, ∞]` presheaves on a finite space, the Yoneda embedding, and duals.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::extnum::{self, ExtNN};
use crate::space::Space;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresheafError {
    #[error("not a presheaf: value at `{1}` exceeds distance from `{1}` to `{0}` plus value at `{0}`")]
    NotShort(String, String),
    #[error("presheaves live on different bases")]
    BaseMismatch,
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("no value for `{0}`")]
    MissingValue(String),
    #[error("{expected} objects but {got} values")]
    WrongArity { expected: usize, got: usize },
}

/// A short map from the opposite of `base` into `[0, ∞]`.
///
/// Concretely `f(b) <= d(b, a) + f(a)` for all `a, b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presheaf {
    base: Space,
    values: Vec<ExtNN>,
}

/// Outcome of [`has_dual`]: the least candidate and the infimum it attains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualVerdict {
    pub has_dual: bool,
    pub witness: Vec<ExtNN>,
    pub min_sum: ExtNN,
}

impl Presheaf {
    pub fn new(base: Space, values: Vec<ExtNN>) -> Result<Presheaf, PresheafError> {
        if values.len() != base.len() {
            return Err(PresheafError::WrongArity {
                expected: base.len(),
                got: values.len(),
            });
        }
        let n = base.len();
        for a in 0..n {
            for b in 0..n {
                if base.d(b, a) < &ExtNN::hom(&values[a], &values[b]) {
                    return Err(PresheafError::NotShort(
                        base.name(a).to_string(),
                        base.name(b).to_string(),
                    ));
                }
            }
        }
        Ok(Presheaf { base, values })
    }

    pub fn from_names(
        base: Space,
        values: &BTreeMap<String, ExtNN>,
    ) -> Result<Presheaf, PresheafError> {
        if let Some(k) = values.keys().find(|k| base.index_of(k).is_none()) {
            return Err(PresheafError::UnknownObject(k.clone()));
        }
        let vals = base
            .objects()
            .iter()
            .map(|x| {
                values
                    .get(x)
                    .cloned()
                    .ok_or_else(|| PresheafError::MissingValue(x.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Presheaf::new(base, vals)
    }

    pub fn base(&self) -> &Space {
        &self.base
    }

    pub fn values(&self) -> &[ExtNN] {
        &self.values
    }

    pub fn value(&self, z: usize) -> &ExtNN {
        &self.values[z]
    }

    pub fn named_values(&self) -> BTreeMap<String, ExtNN> {
        self.base
            .objects()
            .iter()
            .cloned()
            .zip(self.values.iter().cloned())
            .collect()
    }
}

/// `z ↦ d(z, x)`.
pub fn yoneda(s: &Space, x: usize) -> Presheaf {
    let values = (0..s.len()).map(|z| s.d(z, x).clone()).collect();
    Presheaf {
        base: s.clone(),
        values,
    }
}

pub fn yoneda_named(s: &Space, x: &str) -> Result<Presheaf, PresheafError> {
    let i = s
        .index_of(x)
        .ok_or_else(|| PresheafError::UnknownObject(x.to_string()))?;
    Ok(yoneda(s, i))
}

/// `max_z hom(f(z), g(z))`.
pub fn presheaf_dist(f: &Presheaf, g: &Presheaf) -> Result<ExtNN, PresheafError> {
    if f.base != g.base {
        return Err(PresheafError::BaseMismatch);
    }
    let homs: Vec<ExtNN> = f
        .values
        .iter()
        .zip(&g.values)
        .map(|(a, b)| ExtNN::hom(a, b))
        .collect();
    Ok(extnum::sup(&homs))
}

/// Least `g` with `f(y) + g(z) >= d(y, z)` for all `y, z`:
/// `g(z) = max_y hom(f(y), d(y, z))`.
pub fn candidate_dual(f: &Presheaf) -> Vec<ExtNN> {
    let s = &f.base;
    (0..s.len())
        .map(|z| {
            let homs: Vec<ExtNN> = (0..s.len())
                .map(|y| ExtNN::hom(&f.values[y], s.d(y, z)))
                .collect();
            extnum::sup(&homs)
        })
        .collect()
}

/// Decides whether `f` has a dual by testing the least candidate.
pub fn has_dual(f: &Presheaf) -> DualVerdict {
    let g = candidate_dual(f);
    let sums: Vec<ExtNN> = f.values.iter().zip(&g).map(|(a, b)| a.add(b)).collect();
    let min_sum = extnum::inf(&sums);
    DualVerdict {
        has_dual: min_sum.is_zero(),
        witness: g,
        min_sum,
    }
}

/// Both clauses of the dual-pair definition, checked directly.
pub fn is_dual_pair(f: &Presheaf, g: &[ExtNN]) -> bool {
    let s = &f.base;
    let n = s.len();
    if g.len() != n {
        return false;
    }
    let lower = (0..n).all(|y| (0..n).all(|z| f.values[y].add(&g[z]) >= *s.d(y, z)));
    let sums: Vec<ExtNN> = (0..n).map(|z| f.values[z].add(&g[z])).collect();
    lower && extnum::inf(&sums).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> ExtNN {
        s.parse().unwrap()
    }

    fn sym2(w: &str) -> Space {
        Space::new(
            vec!["a".into(), "b".into()],
            vec![vec![v("0"), v(w)], vec![v(w), v("0")]],
        )
        .unwrap()
    }

    fn half_half() -> Presheaf {
        Presheaf::new(sym2("1"), vec![v("1/2"), v("1/2")]).unwrap()
    }

    #[test]
    fn yoneda_examples() {
        let p = yoneda(&Space::point(), 0);
        assert_eq!(p.values(), &[ExtNN::zero()]);
        assert_eq!(yoneda(&sym2("1"), 0).values(), &[v("0"), v("1")]);
    }

    #[test]
    fn yoneda_on_asymmetric_base_is_valid() {
        let s = Space::new(
            vec!["a".into(), "b".into()],
            vec![vec![v("0"), v("1")], vec![v("5"), v("0")]],
        )
        .unwrap();
        for x in 0..2 {
            let y = yoneda(&s, x);
            assert!(Presheaf::new(s.clone(), y.values().to_vec()).is_ok());
        }
    }

    #[test]
    fn presheaf_dist_examples() {
        let s = sym2("1");
        let f = half_half();
        assert_eq!(presheaf_dist(&f, &f).unwrap(), ExtNN::zero());
        assert_eq!(presheaf_dist(&yoneda(&s, 0), &yoneda(&s, 1)).unwrap(), v("1"));
        assert_eq!(presheaf_dist(&yoneda(&s, 0), &f).unwrap(), v("1/2"));
        let other = yoneda(&Space::point(), 0);
        assert_eq!(presheaf_dist(&f, &other), Err(PresheafError::BaseMismatch));
    }

    #[test]
    fn candidate_dual_examples() {
        let s = sym2("1");
        assert_eq!(candidate_dual(&yoneda(&s, 0)), vec![v("0"), v("1")]);
        assert_eq!(candidate_dual(&half_half()), vec![v("1/2"), v("1/2")]);
        let z = Space::indiscernible_pair();
        let zero = Presheaf::new(z, vec![v("0"), v("0")]).unwrap();
        assert_eq!(candidate_dual(&zero), vec![v("0"), v("0")]);
    }

    #[test]
    fn has_dual_examples() {
        let s = sym2("1");
        let y = has_dual(&yoneda(&s, 1));
        assert!(y.has_dual);
        assert!(is_dual_pair(&yoneda(&s, 1), &y.witness));
        let h = has_dual(&half_half());
        assert!(!h.has_dual);
        assert_eq!(h.min_sum, v("1"));
    }

    #[test]
    fn rejects_non_presheaf() {
        assert_eq!(
            Presheaf::new(sym2("1"), vec![v("0"), v("2")]),
            Err(PresheafError::NotShort("a".into(), "b".into()))
        );
    }

    #[test]
    fn candidate_is_least_on_a_grid() {
        let grid: Vec<ExtNN> = ["0", "1/2", "1", "3/2", "2", "inf"].iter().map(|s| v(s)).collect();
        let s = Space::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![
                vec![v("0"), v("1"), v("2")],
                vec![v("1"), v("0"), v("1")],
                vec![v("2"), v("1"), v("0")],
            ],
        )
        .unwrap();
        let mut presheaves = Vec::new();
        for a in &grid {
            for b in &grid {
                for c in &grid {
                    if let Ok(p) = Presheaf::new(s.clone(), vec![a.clone(), b.clone(), c.clone()]) {
                        presheaves.push(p);
                    }
                }
            }
        }
        assert!(!presheaves.is_empty());
        for f in &presheaves {
            let g = candidate_dual(f);
            for g0 in &grid {
                for g1 in &grid {
                    for g2 in &grid {
                        let h = [g0.clone(), g1.clone(), g2.clone()];
                        let meets = (0..3)
                            .all(|y| (0..3).all(|z| f.value(y).add(&h[z]) >= *s.d(y, z)));
                        if meets {
                            assert!((0..3).all(|z| g[z] <= h[z]));
                        }
                    }
                }
            }
        }
    }
}
