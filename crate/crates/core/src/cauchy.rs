//! Cauchy sequences on finite symmetric spaces, represented as eventually periodic.
//!
//! On a finite space every distance takes one of finitely many values, so the
//! usual tolerance-based definitions reduce to exact statements about the
//! repeating part of a sequence.

use num_integer::lcm;
use thiserror::Error;

use crate::extnum::ExtNN;
use crate::maps::SpaceMap;
use crate::presheaf::{yoneda, Presheaf};
use crate::space::{seq_space, seqbar_space, Space};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CauchyError {
    #[error("sequence space is not symmetric")]
    NotSymmetric,
    #[error("repeating part is empty")]
    EmptyCycle,
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("sequence is not Cauchy")]
    NotCauchy,
    #[error("sequences live on different spaces")]
    SpaceMismatch,
    #[error("target is not a limit: point {k} is farther than 2^(1-{k}) from it")]
    NotALimit { k: usize },
    #[error("map domain is not a truncated dyadic sequence space")]
    NotSeqDomain,
}

/// `prefix` followed by `cycle` repeated forever.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EPSeq {
    space: Space,
    prefix: Vec<usize>,
    cycle: Vec<usize>,
}

impl EPSeq {
    pub fn new(space: Space, prefix: Vec<usize>, cycle: Vec<usize>) -> Result<EPSeq, CauchyError> {
        if !space.is_symmetric() {
            return Err(CauchyError::NotSymmetric);
        }
        if cycle.is_empty() {
            return Err(CauchyError::EmptyCycle);
        }
        if let Some(&x) = prefix.iter().chain(&cycle).find(|&&x| x >= space.len()) {
            return Err(CauchyError::UnknownObject(format!("#{x}")));
        }
        Ok(EPSeq {
            space,
            prefix,
            cycle,
        })
    }

    pub fn from_names(
        space: Space,
        prefix: &[String],
        cycle: &[String],
    ) -> Result<EPSeq, CauchyError> {
        let look = |names: &[String]| {
            names
                .iter()
                .map(|n| space.index_of(n).ok_or_else(|| CauchyError::UnknownObject(n.clone())))
                .collect::<Result<Vec<_>, _>>()
        };
        let (p, c) = (look(prefix)?, look(cycle)?);
        EPSeq::new(space, p, c)
    }

    pub fn constant(space: Space, x: usize) -> Result<EPSeq, CauchyError> {
        EPSeq::new(space, Vec::new(), vec![x])
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn prefix(&self) -> &[usize] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[usize] {
        &self.cycle
    }

    /// `x_n`.
    pub fn value(&self, n: usize) -> usize {
        if n < self.prefix.len() {
            self.prefix[n]
        } else {
            self.cycle[(n - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// Cycle objects pairwise at distance zero.
    pub fn is_cauchy(&self) -> bool {
        let c = &self.cycle;
        c.iter().all(|&a| c.iter().all(|&b| self.space.d(a, b).is_zero()))
    }

    fn require_cauchy(&self) -> Result<(), CauchyError> {
        if self.is_cauchy() {
            Ok(())
        } else {
            Err(CauchyError::NotCauchy)
        }
    }

    /// The tail `x_{start}, x_{start+1}, ...`.
    pub fn shift(&self, start: usize) -> EPSeq {
        let p = self.prefix.len();
        if start <= p {
            EPSeq {
                space: self.space.clone(),
                prefix: self.prefix[start..].to_vec(),
                cycle: self.cycle.clone(),
            }
        } else {
            let r = (start - p) % self.cycle.len();
            let mut cycle = self.cycle[r..].to_vec();
            cycle.extend_from_slice(&self.cycle[..r]);
            EPSeq {
                space: self.space.clone(),
                prefix: Vec::new(),
                cycle,
            }
        }
    }

    /// The subsequence `x_{step*k}` for `k >= 0`.
    pub fn every(&self, step: usize) -> EPSeq {
        assert!(step >= 1);
        let p = self.prefix.len();
        let l = self.cycle.len();
        // Indices step*k with step*k >= p repeat with period l / gcd(l, step).
        let first_tail = p.div_ceil(step);
        let period = l / num_integer::gcd(l, step);
        let prefix = (0..first_tail).map(|k| self.value(step * k)).collect();
        let cycle = (first_tail..first_tail + period).map(|k| self.value(step * k)).collect();
        EPSeq {
            space: self.space.clone(),
            prefix,
            cycle,
        }
    }

    /// The image sequence under a short map into a symmetric space.
    pub fn push(&self, f: &SpaceMap) -> Result<EPSeq, CauchyError> {
        if f.dom() != &self.space {
            return Err(CauchyError::SpaceMismatch);
        }
        EPSeq::new(
            f.cod().clone(),
            self.prefix.iter().map(|&x| f.apply(x)).collect(),
            self.cycle.iter().map(|&x| f.apply(x)).collect(),
        )
    }
}

/// Eventual behaviour shared by two sequences: a common prefix length and period.
fn alignment(a: &EPSeq, b: &EPSeq) -> (usize, usize) {
    (
        a.prefix.len().max(b.prefix.len()),
        lcm(a.cycle.len(), b.cycle.len()),
    )
}

pub fn are_equivalent(a: &EPSeq, b: &EPSeq) -> Result<bool, CauchyError> {
    if a.space != b.space {
        return Err(CauchyError::SpaceMismatch);
    }
    a.require_cauchy()?;
    b.require_cauchy()?;
    let (start, period) = alignment(a, b);
    Ok((start..start + period).all(|n| {
        let (x, y) = (a.value(n), b.value(n));
        a.space.d(x, y).is_zero() && a.space.d(y, x).is_zero()
    }))
}

/// All objects to which the sequence converges: the isomorphism class of its tail.
pub fn limits(s: &EPSeq) -> Result<Vec<usize>, CauchyError> {
    s.require_cauchy()?;
    Ok((0..s.space.len())
        .filter(|&c| s.cycle.iter().all(|&x| s.space.iso(x, c)))
        .collect())
}

/// `z ↦ lim_n d(z, x_n)`.
pub fn ell(s: &EPSeq) -> Result<Presheaf, CauchyError> {
    s.require_cauchy()?;
    Ok(yoneda(&s.space, s.cycle[0]))
}

/// `k ↦ x_{P+k}` on the first `n` dyadic points, where `P` is the prefix length.
pub fn subsequence_map(s: &EPSeq, n: usize) -> Result<SpaceMap, CauchyError> {
    s.require_cauchy()?;
    let p = s.prefix.len();
    let assign = (0..n).map(|k| s.value(p + k)).collect();
    SpaceMap::new(seq_space(n), s.space.clone(), assign).map_err(|_| CauchyError::NotCauchy)
}

/// Indices used by [`subsequence_map`].
pub fn subsequence_indices(s: &EPSeq, n: usize) -> Vec<usize> {
    (0..n).map(|k| s.prefix.len() + k).collect()
}

/// The eventually constant sequence `f(0), ..., f(n-1), f(n-1), ...`.
pub fn image_sequence(f: &SpaceMap) -> Result<EPSeq, CauchyError> {
    let n = f.dom().len();
    if n == 0 || f.dom() != &seq_space(n) {
        return Err(CauchyError::NotSeqDomain);
    }
    EPSeq::new(
        f.cod().clone(),
        (0..n - 1).map(|k| f.apply(k)).collect(),
        vec![f.apply(n - 1)],
    )
}

/// Extends a map out of the truncated dyadic sequence by sending the limit point to `target`.
pub fn extend_to_seqbar(f: &SpaceMap, target: usize) -> Result<SpaceMap, CauchyError> {
    let n = f.dom().len();
    if n == 0 || f.dom() != &seq_space(n) {
        return Err(CauchyError::NotSeqDomain);
    }
    if target >= f.cod().len() {
        return Err(CauchyError::UnknownObject(format!("#{target}")));
    }
    let cod = f.cod();
    for k in 0..n {
        let bound = ExtNN::dyadic_tail(k as u32);
        let y = f.apply(k);
        if cod.d(y, target) > &bound || cod.d(target, y) > &bound {
            return Err(CauchyError::NotALimit { k });
        }
    }
    let (bar, _) = seqbar_space(n);
    let mut assign = f.assignment().to_vec();
    assign.push(target);
    Ok(SpaceMap::new(bar, cod.clone(), assign).expect("bounds checked above"))
}

/// An eventually periodic sequence of values in `[0, ∞]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventualSeq {
    pub prefix: Vec<ExtNN>,
    pub cycle: Vec<ExtNN>,
}

impl EventualSeq {
    pub fn value(&self, n: usize) -> &ExtNN {
        if n < self.prefix.len() {
            &self.prefix[n]
        } else {
            &self.cycle[(n - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// The limit, which exists exactly when the repeating part is constant.
    /// A sequence tends to `∞` only by being eventually `∞`.
    pub fn limit(&self) -> Option<ExtNN> {
        let first = self.cycle.first()?;
        self.cycle.iter().all(|v| v == first).then(|| first.clone())
    }

    pub fn add(&self, other: &EventualSeq) -> EventualSeq {
        let start = self.prefix.len().max(other.prefix.len());
        let period = lcm(self.cycle.len(), other.cycle.len());
        let at = |n: usize| self.value(n).add(other.value(n));
        EventualSeq {
            prefix: (0..start).map(at).collect(),
            cycle: (start..start + period).map(at).collect(),
        }
    }
}

/// `n ↦ d(x_n, y_n)`.
pub fn distance_sequence(a: &EPSeq, b: &EPSeq) -> Result<EventualSeq, CauchyError> {
    if a.space != b.space {
        return Err(CauchyError::SpaceMismatch);
    }
    let (start, period) = alignment(a, b);
    let at = |n: usize| a.space.d(a.value(n), b.value(n)).clone();
    Ok(EventualSeq {
        prefix: (0..start).map(at).collect(),
        cycle: (start..start + period).map(at).collect(),
    })
}

/// `n ↦ d(z, x_n)`.
pub fn distance_to_point(z: usize, a: &EPSeq) -> EventualSeq {
    EventualSeq {
        prefix: a.prefix.iter().map(|&x| a.space.d(z, x).clone()).collect(),
        cycle: a.cycle.iter().map(|&x| a.space.d(z, x).clone()).collect(),
    }
}

/// `lim_m lim_n d(x_m, y_n)`, or `None` if some limit fails to exist.
pub fn iterated_limit(a: &EPSeq, b: &EPSeq) -> Option<ExtNN> {
    let inner = |x: usize| {
        let row = EventualSeq {
            prefix: b.prefix.iter().map(|&y| a.space.d(x, y).clone()).collect(),
            cycle: b.cycle.iter().map(|&y| a.space.d(x, y).clone()).collect(),
        };
        row.limit()
    };
    let outer = EventualSeq {
        prefix: a.prefix.iter().map(|&x| inner(x)).collect::<Option<Vec<_>>>()?,
        cycle: a.cycle.iter().map(|&x| inner(x)).collect::<Option<Vec<_>>>()?,
    };
    outer.limit()
}

/// `lim_n d(x_n, y_n)`.
pub fn diagonal_limit(a: &EPSeq, b: &EPSeq) -> Option<ExtNN> {
    distance_sequence(a, b).ok()?.limit()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> ExtNN {
        s.parse().unwrap()
    }

    fn sym(names: &[&str], rows: &[&[&str]]) -> Space {
        Space::new(
            names.iter().map(|s| s.to_string()).collect(),
            rows.iter().map(|r| r.iter().map(|s| v(s)).collect()).collect(),
        )
        .unwrap()
    }

    fn zero_pair() -> Space {
        sym(&["a", "b"], &[&["0", "0"], &["0", "0"]])
    }

    fn unit_pair() -> Space {
        sym(&["a", "b"], &[&["0", "1"], &["1", "0"]])
    }

    /// Tolerance-based definition at the critical tolerance of the space.
    fn cauchy_by_tolerance(s: &EPSeq) -> bool {
        let eps = s.space().min_positive_distance().unwrap_or_else(|| v("1"));
        let horizon = s.prefix().len() + 2 * s.cycle().len();
        let n0 = s.prefix().len();
        (n0..horizon).all(|n| (n0..horizon).all(|m| s.space().d(s.value(n), s.value(m)) < &eps))
    }

    #[test]
    fn is_cauchy_examples() {
        let c = EPSeq::constant(unit_pair(), 0).unwrap();
        assert!(c.is_cauchy());
        assert!(EPSeq::new(zero_pair(), vec![], vec![0, 1]).unwrap().is_cauchy());
        let alt = EPSeq::new(unit_pair(), vec![], vec![0, 1]).unwrap();
        assert!(!alt.is_cauchy());
        assert!(!cauchy_by_tolerance(&alt));
    }

    #[test]
    fn equivalence_examples() {
        let z = zero_pair();
        let a = EPSeq::constant(z.clone(), 0).unwrap();
        let b = EPSeq::constant(z, 1).unwrap();
        assert!(are_equivalent(&a, &b).unwrap());
        let u = unit_pair();
        let a = EPSeq::constant(u.clone(), 0).unwrap();
        let b = EPSeq::constant(u.clone(), 1).unwrap();
        assert!(!are_equivalent(&a, &b).unwrap());
        let s = EPSeq::new(u, vec![1, 0, 1], vec![0]).unwrap();
        assert!(are_equivalent(&s, &s.shift(2)).unwrap());
        assert!(are_equivalent(&s, &s.every(3)).unwrap());
    }

    #[test]
    fn limit_examples() {
        let u = unit_pair();
        assert_eq!(limits(&EPSeq::constant(u.clone(), 1).unwrap()).unwrap(), vec![1]);
        assert_eq!(limits(&EPSeq::constant(zero_pair(), 0).unwrap()).unwrap(), vec![0, 1]);
        let bad = EPSeq::new(u, vec![], vec![0, 1]).unwrap();
        assert_eq!(limits(&bad), Err(CauchyError::NotCauchy));
    }

    #[test]
    fn ell_examples() {
        let u = unit_pair();
        let c = EPSeq::constant(u.clone(), 1).unwrap();
        assert_eq!(ell(&c).unwrap(), yoneda(&u, 1));
        let z = zero_pair();
        let alt = EPSeq::new(z.clone(), vec![], vec![0, 1]).unwrap();
        assert_eq!(ell(&alt).unwrap(), yoneda(&z, 0));
    }

    #[test]
    fn subsequence_examples() {
        let u = unit_pair();
        let c = EPSeq::new(u.clone(), vec![1], vec![0]).unwrap();
        let m = subsequence_map(&c, 4).unwrap();
        assert_eq!(m.assignment(), &[0, 0, 0, 0]);
        assert_eq!(subsequence_indices(&c, 3), vec![1, 2, 3]);
        let pushed = EPSeq::new(u, m.assignment().to_vec(), vec![0]).unwrap();
        assert!(are_equivalent(&pushed, &c).unwrap());
    }

    #[test]
    fn extend_examples() {
        let u = unit_pair();
        let f = SpaceMap::constant(&seq_space(4), &u, 0);
        let g = extend_to_seqbar(&f, 0).unwrap();
        assert!(g.assignment().iter().all(|&x| x == 0));
        assert_eq!(extend_to_seqbar(&f, 1), Err(CauchyError::NotALimit { k: 2 }));
    }

    #[test]
    fn eventual_limits() {
        let s = EventualSeq {
            prefix: vec![v("3")],
            cycle: vec![v("1"), v("1")],
        };
        assert_eq!(s.limit(), Some(v("1")));
        let t = EventualSeq {
            prefix: vec![],
            cycle: vec![v("1"), v("2")],
        };
        assert_eq!(t.limit(), None);
        assert_eq!(s.add(&s).limit(), Some(v("2")));
    }

    #[test]
    fn rejects_asymmetric_space() {
        let s = Space::new(
            vec!["a".into(), "b".into()],
            vec![vec![v("0"), v("1")], vec![v("2"), v("0")]],
        )
        .unwrap();
        assert_eq!(EPSeq::constant(s, 0), Err(CauchyError::NotSymmetric));
    }
}
