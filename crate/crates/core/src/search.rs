//! Backtracking search for short maps subject to per-object candidate sets.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::space::Space;

/// Default bound on tentative assignments before a search gives up.
pub const PROBE_CAP: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Vec<usize>),
    NoneExists,
    /// The probe budget ran out before the search space was covered.
    Exhausted,
}

impl SearchOutcome {
    pub fn found(self) -> Option<Vec<usize>> {
        match self {
            SearchOutcome::Found(a) => Some(a),
            _ => None,
        }
    }
}

/// Short maps `dom -> cod` with `assign[x] ∈ candidates[x]`.
#[derive(Clone, Debug)]
pub struct ShortMapSearch<'a> {
    dom: &'a Space,
    cod: &'a Space,
    candidates: Vec<Vec<usize>>,
    probe_cap: u64,
}

impl<'a> ShortMapSearch<'a> {
    pub fn new(dom: &'a Space, cod: &'a Space) -> Self {
        let all: Vec<usize> = (0..cod.len()).collect();
        ShortMapSearch {
            dom,
            cod,
            candidates: vec![all; dom.len()],
            probe_cap: PROBE_CAP,
        }
    }

    pub fn with_probe_cap(mut self, cap: u64) -> Self {
        self.probe_cap = cap;
        self
    }

    /// Requires `assign[x] == y`. Conflicting requirements leave no candidates.
    pub fn fix(&mut self, x: usize, y: usize) {
        self.candidates[x].retain(|&c| c == y);
    }

    pub fn restrict<P: Fn(usize) -> bool>(&mut self, x: usize, keep: P) {
        self.candidates[x].retain(|&c| keep(c));
    }

    pub fn shuffle<R: Rng>(&mut self, rng: &mut R) {
        for c in &mut self.candidates {
            c.shuffle(rng);
        }
    }

    fn order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.dom.len()).collect();
        order.sort_by_key(|&x| self.candidates[x].len());
        order
    }

    fn consistent(&self, assign: &[usize], placed: &[usize], x: usize, y: usize) -> bool {
        if self.dom.d(x, x) < self.cod.d(y, y) {
            return false;
        }
        placed.iter().all(|&p| {
            self.dom.d(x, p) >= self.cod.d(y, assign[p]) && self.dom.d(p, x) >= self.cod.d(assign[p], y)
        })
    }

    /// Visits solutions until `visit` returns `false`. Returns `false` if the cap was hit.
    pub fn for_each<F: FnMut(&[usize]) -> bool>(&self, mut visit: F) -> bool {
        if self.candidates.iter().any(Vec::is_empty) {
            return true;
        }
        let order = self.order();
        let mut assign = vec![usize::MAX; self.dom.len()];
        let mut probes = 0u64;
        let mut stopped = false;
        let complete = self.descend(&order, 0, &mut assign, &mut probes, &mut visit, &mut stopped);
        complete || stopped
    }

    fn descend<F: FnMut(&[usize]) -> bool>(
        &self,
        order: &[usize],
        depth: usize,
        assign: &mut Vec<usize>,
        probes: &mut u64,
        visit: &mut F,
        stopped: &mut bool,
    ) -> bool {
        if depth == order.len() {
            if !visit(assign) {
                *stopped = true;
            }
            return true;
        }
        let x = order[depth];
        for &y in &self.candidates[x] {
            *probes += 1;
            if *probes > self.probe_cap {
                return false;
            }
            if !self.consistent(assign, &order[..depth], x, y) {
                continue;
            }
            assign[x] = y;
            let ok = self.descend(order, depth + 1, assign, probes, visit, stopped);
            assign[x] = usize::MAX;
            if !ok {
                return false;
            }
            if *stopped {
                return true;
            }
        }
        true
    }

    pub fn first(&self) -> SearchOutcome {
        let mut found = None;
        let complete = self.for_each(|a| {
            found = Some(a.to_vec());
            false
        });
        match found {
            Some(a) => SearchOutcome::Found(a),
            None if complete => SearchOutcome::NoneExists,
            None => SearchOutcome::Exhausted,
        }
    }

    /// Every solution; `None` if the cap was hit.
    pub fn all(&self) -> Option<Vec<Vec<usize>>> {
        let mut out = Vec::new();
        let complete = self.for_each(|a| {
            out.push(a.to_vec());
            true
        });
        complete.then_some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extnum::ExtNN;

    fn two(w: &str) -> Space {
        let w: ExtNN = w.parse().unwrap();
        Space::new(
            vec!["a".into(), "b".into()],
            vec![vec![ExtNN::zero(), w.clone()], vec![w, ExtNN::zero()]],
        )
        .unwrap()
    }

    #[test]
    fn counts_short_maps() {
        // Maps from distance-1 pair into distance-2 pair: only the two constants.
        let (a, b) = (two("1"), two("2"));
        assert_eq!(ShortMapSearch::new(&a, &b).all().unwrap().len(), 2);
        assert_eq!(ShortMapSearch::new(&b, &a).all().unwrap().len(), 4);
    }

    #[test]
    fn fixed_constraints_and_conflicts() {
        let (a, b) = (two("1"), two("2"));
        let mut s = ShortMapSearch::new(&a, &b);
        s.fix(0, 1);
        assert_eq!(s.first(), SearchOutcome::Found(vec![1, 1]));
        s.fix(0, 0);
        assert_eq!(s.first(), SearchOutcome::NoneExists);
    }

    #[test]
    fn cap_reports_exhaustion() {
        let (a, b) = (two("2"), two("1"));
        let mut s = ShortMapSearch::new(&a, &b).with_probe_cap(1);
        s.restrict(1, |_| true);
        assert_eq!(s.all(), None);
        s.fix(0, 5);
        assert_eq!(s.first(), SearchOutcome::NoneExists);
    }
}
