//! Finite Lawvere metric spaces.
//!
//! A [`Space`] is an ordered list of named objects with an [`ExtNN`] distance
//! matrix satisfying `d(x, x) = 0` and the triangle inequality. Neither
//! symmetry nor the identity of indiscernibles is assumed.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::extnum::ExtNN;
use crate::maps::SpaceMap;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("distance matrix is not square: {rows} rows for {objects} objects")]
    NotSquare { objects: usize, rows: usize },
    #[error("duplicate object name `{0}`")]
    DuplicateName(String),
    #[error("nonzero self-distance at `{0}`")]
    NonzeroDiagonal(String),
    #[error("triangle inequality fails: d({0},{1}) + d({1},{2}) < d({0},{2})")]
    TriangleViolation(String, String, String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
}

/// A certified finite Lawvere metric space.
#[derive(Clone)]
pub struct Space {
    objects: Vec<String>,
    index: HashMap<String, usize>,
    dist: Vec<Vec<ExtNN>>,
}

impl PartialEq for Space {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects && self.dist == other.dist
    }
}

impl Eq for Space {}

impl fmt::Debug for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (i, name) in self.objects.iter().enumerate() {
            let row: Vec<String> = self.dist[i].iter().map(|v| v.to_string()).collect();
            m.entry(name, &row.join(" "));
        }
        m.finish()
    }
}

fn build_index(objects: &[String]) -> Result<HashMap<String, usize>, SpaceError> {
    let mut index = HashMap::with_capacity(objects.len());
    for (i, name) in objects.iter().enumerate() {
        if index.insert(name.clone(), i).is_some() {
            return Err(SpaceError::DuplicateName(name.clone()));
        }
    }
    Ok(index)
}

impl Space {
    /// Validates raw data, naming the violated axiom and a witness on failure.
    pub fn new(objects: Vec<String>, dist: Vec<Vec<ExtNN>>) -> Result<Space, SpaceError> {
        let n = objects.len();
        if dist.len() != n || dist.iter().any(|row| row.len() != n) {
            let rows = if dist.len() != n {
                dist.len()
            } else {
                dist.iter().map(Vec::len).find(|&l| l != n).unwrap_or(n)
            };
            return Err(SpaceError::NotSquare { objects: n, rows });
        }
        let index = build_index(&objects)?;
        for (i, row) in dist.iter().enumerate() {
            if !row[i].is_zero() {
                return Err(SpaceError::NonzeroDiagonal(objects[i].clone()));
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if dist[x][y].add(&dist[y][z]) < dist[x][z] {
                        return Err(SpaceError::TriangleViolation(
                            objects[x].clone(),
                            objects[y].clone(),
                            objects[z].clone(),
                        ));
                    }
                }
            }
        }
        Ok(Space {
            objects,
            index,
            dist,
        })
    }

    /// Skips validation. Callers must guarantee both axioms.
    pub(crate) fn new_unchecked(objects: Vec<String>, dist: Vec<Vec<ExtNN>>) -> Space {
        let index = build_index(&objects).expect("constructed spaces have distinct names");
        debug_assert!(Space::new(objects.clone(), dist.clone()).is_ok());
        Space {
            objects,
            index,
            dist,
        }
    }

    /// Builds a space from a distance function on indices.
    pub fn from_fn<F>(objects: Vec<String>, d: F) -> Result<Space, SpaceError>
    where
        F: Fn(usize, usize) -> ExtNN,
    {
        let n = objects.len();
        let dist = (0..n).map(|i| (0..n).map(|j| d(i, j)).collect()).collect();
        Space::new(objects, dist)
    }

    /// The one-object space `*`.
    pub fn point() -> Space {
        Space::new_unchecked(vec!["*".to_string()], vec![vec![ExtNN::zero()]])
    }

    /// The empty space.
    pub fn empty() -> Space {
        Space::new_unchecked(Vec::new(), Vec::new())
    }

    /// The two-object space with both objects at distance zero.
    pub fn indiscernible_pair() -> Space {
        Space::new_unchecked(
            vec!["a1".to_string(), "a2".to_string()],
            vec![vec![ExtNN::zero(); 2]; 2],
        )
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn name(&self, i: usize) -> &str {
        &self.objects[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<usize, SpaceError> {
        self.index_of(name)
            .ok_or_else(|| SpaceError::UnknownObject(name.to_string()))
    }

    /// Distance between objects by index.
    pub fn d(&self, i: usize, j: usize) -> &ExtNN {
        &self.dist[i][j]
    }

    pub fn matrix(&self) -> &[Vec<ExtNN>] {
        &self.dist
    }

    /// `x ≅ y`: zero distance in both directions.
    pub fn iso(&self, i: usize, j: usize) -> bool {
        self.dist[i][j].is_zero() && self.dist[j][i].is_zero()
    }

    /// Transposed distances.
    pub fn opposite(&self) -> Space {
        let n = self.len();
        let dist = (0..n)
            .map(|i| (0..n).map(|j| self.dist[j][i].clone()).collect())
            .collect();
        Space::new_unchecked(self.objects.clone(), dist)
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| (0..i).all(|j| self.dist[i][j] == self.dist[j][i]))
    }

    /// Identity of indiscernibles.
    pub fn is_gaunt(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| (0..i).all(|j| !self.iso(i, j)))
    }

    /// Smallest nonzero finite distance, if any.
    pub fn min_positive_distance(&self) -> Option<ExtNN> {
        self.dist
            .iter()
            .flatten()
            .filter(|v| !v.is_zero() && v.is_finite())
            .min()
            .cloned()
    }

    /// Partition into isomorphism classes, blocks in order of first member.
    pub fn iso_partition(&self) -> IsoPartition {
        let n = self.len();
        let mut block_of = vec![usize::MAX; n];
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for i in 0..n {
            if block_of[i] != usize::MAX {
                continue;
            }
            let b = blocks.len();
            let members: Vec<usize> = (i..n)
                .filter(|&j| block_of[j] == usize::MAX && self.iso(i, j))
                .collect();
            for &j in &members {
                block_of[j] = b;
            }
            blocks.push(members);
        }
        IsoPartition { blocks, block_of }
    }

    /// The gaunt quotient `M(s)` together with the quotient map `s -> M(s)`.
    ///
    /// Objects of the quotient are named after the first member of each block.
    pub fn gaunt_quotient(&self) -> (Space, SpaceMap) {
        let part = self.iso_partition();
        let reps: Vec<usize> = part.blocks.iter().map(|b| b[0]).collect();
        for (bi, block) in part.blocks.iter().enumerate() {
            for (bj, other) in part.blocks.iter().enumerate() {
                let v = &self.dist[reps[bi]][reps[bj]];
                debug_assert!(block
                    .iter()
                    .all(|&x| other.iter().all(|&y| &self.dist[x][y] == v)));
            }
        }
        let objects = reps.iter().map(|&r| self.objects[r].clone()).collect();
        let dist = reps
            .iter()
            .map(|&r| reps.iter().map(|&s| self.dist[r][s].clone()).collect())
            .collect();
        let quotient = Space::new_unchecked(objects, dist);
        let q = SpaceMap::new_unchecked(self.clone(), quotient.clone(), part.block_of);
        (quotient, q)
    }

    /// Product with the max metric; objects are named `(x,y)`.
    pub fn product(a: &Space, b: &Space) -> Space {
        let mut objects = Vec::with_capacity(a.len() * b.len());
        let mut pairs = Vec::with_capacity(a.len() * b.len());
        for i in 0..a.len() {
            for j in 0..b.len() {
                objects.push(format!("({},{})", a.name(i), b.name(j)));
                pairs.push((i, j));
            }
        }
        let dist = pairs
            .iter()
            .map(|&(i, j)| {
                pairs
                    .iter()
                    .map(|&(k, l)| std::cmp::max(a.d(i, k), b.d(j, l)).clone())
                    .collect()
            })
            .collect();
        Space::new_unchecked(objects, dist)
    }

    /// Disjoint union with infinite cross distances; objects are tagged `0:x` and `1:y`.
    pub fn coproduct(a: &Space, b: &Space) -> Space {
        let n = a.len() + b.len();
        let objects = a
            .objects
            .iter()
            .map(|x| format!("0:{x}"))
            .chain(b.objects.iter().map(|y| format!("1:{y}")))
            .collect();
        let dist = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| match (i < a.len(), j < a.len()) {
                        (true, true) => a.d(i, j).clone(),
                        (false, false) => b.d(i - a.len(), j - a.len()).clone(),
                        _ => ExtNN::Infinite,
                    })
                    .collect()
            })
            .collect();
        Space::new_unchecked(objects, dist)
    }

    /// Coproduct injections `a -> a ⊔ b` and `b -> a ⊔ b`.
    pub fn coproduct_injections(a: &Space, b: &Space) -> (Space, SpaceMap, SpaceMap) {
        let sum = Space::coproduct(a, b);
        let left = SpaceMap::new_unchecked(a.clone(), sum.clone(), (0..a.len()).collect());
        let right = SpaceMap::new_unchecked(
            b.clone(),
            sum.clone(),
            (a.len()..a.len() + b.len()).collect(),
        );
        (sum, left, right)
    }

    /// Product projections `a × b -> a` and `a × b -> b`.
    pub fn product_projections(a: &Space, b: &Space) -> (Space, SpaceMap, SpaceMap) {
        let prod = Space::product(a, b);
        let first = SpaceMap::new_unchecked(
            prod.clone(),
            a.clone(),
            (0..prod.len()).map(|k| k / b.len()).collect(),
        );
        let second = SpaceMap::new_unchecked(
            prod.clone(),
            b.clone(),
            (0..prod.len()).map(|k| k % b.len()).collect(),
        );
        (prod, first, second)
    }
}

/// Distance between points `n` and `m` of the dyadic sequence space:
/// `sum_{i=min}^{max-1} 2^{-i} = 2^{1-min} - 2^{1-max}`.
pub fn seq_distance(n: usize, m: usize) -> ExtNN {
    let (lo, hi) = (n.min(m), n.max(m));
    (lo..hi).fold(ExtNN::zero(), |acc, i| acc + ExtNN::pow2_neg(i as u32))
}

/// Name of the adjoined limit point in [`seqbar_space`].
pub const SEQ_LIMIT: &str = "lim";

/// The first `n` points of the dyadic sequence space.
pub fn seq_space(n: usize) -> Space {
    assert!(n >= 1, "seq_space needs at least one point");
    let objects = (0..n).map(|k| k.to_string()).collect();
    let dist = (0..n)
        .map(|i| (0..n).map(|j| seq_distance(i, j)).collect())
        .collect();
    Space::new_unchecked(objects, dist)
}

/// The first `n` points of the dyadic sequence together with its limit `lim`,
/// at distance `2^{1-k}` from point `k`, plus the inclusion of [`seq_space`].
pub fn seqbar_space(n: usize) -> (Space, SpaceMap) {
    let seq = seq_space(n);
    let mut objects: Vec<String> = seq.objects().to_vec();
    objects.push(SEQ_LIMIT.to_string());
    let dist = (0..=n)
        .map(|i| {
            (0..=n)
                .map(|j| match (i == n, j == n) {
                    (false, false) => seq_distance(i, j),
                    (true, true) => ExtNN::zero(),
                    (true, false) => ExtNN::dyadic_tail(j as u32),
                    (false, true) => ExtNN::dyadic_tail(i as u32),
                })
                .collect()
        })
        .collect();
    let bar = Space::new_unchecked(objects, dist);
    let inc = SpaceMap::new_unchecked(seq, bar.clone(), (0..n).collect());
    (bar, inc)
}

/// Raw weighted digraph; absent edges weigh `∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedGraph {
    objects: Vec<String>,
    edges: Vec<(usize, usize, ExtNN)>,
}

impl WeightedGraph {
    pub fn new(objects: Vec<String>) -> Result<WeightedGraph, SpaceError> {
        build_index(&objects)?;
        Ok(WeightedGraph {
            objects,
            edges: Vec::new(),
        })
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn edges(&self) -> &[(usize, usize, ExtNN)] {
        &self.edges
    }

    pub fn add_edge(&mut self, src: usize, dst: usize, w: ExtNN) {
        assert!(src < self.objects.len() && dst < self.objects.len());
        self.edges.push((src, dst, w));
    }

    pub fn add_named_edge(&mut self, src: &str, dst: &str, w: ExtNN) -> Result<(), SpaceError> {
        let pos = |name: &str| {
            self.objects
                .iter()
                .position(|o| o == name)
                .ok_or_else(|| SpaceError::UnknownObject(name.to_string()))
        };
        let (s, d) = (pos(src)?, pos(dst)?);
        self.edges.push((s, d, w));
        Ok(())
    }

    /// Direct weight matrix: the minimum over parallel edges, `0` on the diagonal.
    pub fn weight_matrix(&self) -> Vec<Vec<ExtNN>> {
        let n = self.objects.len();
        let mut w = vec![vec![ExtNN::Infinite; n]; n];
        for (i, row) in w.iter_mut().enumerate() {
            row[i] = ExtNN::zero();
        }
        for (s, d, v) in &self.edges {
            if v < &w[*s][*d] {
                w[*s][*d] = v.clone();
            }
        }
        w
    }
}

/// Min-plus transitive closure: the free Lawvere metric space on `g`.
pub fn closure(g: &WeightedGraph) -> Space {
    let mut d = g.weight_matrix();
    let n = d.len();
    for k in 0..n {
        for i in 0..n {
            if d[i][k].is_infinite() {
                continue;
            }
            for j in 0..n {
                let via = d[i][k].add(&d[k][j]);
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    Space::new_unchecked(g.objects.clone(), d)
}

/// Isomorphism classes of a space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoPartition {
    pub blocks: Vec<Vec<usize>>,
    pub block_of: Vec<usize>,
}

impl IsoPartition {
    pub fn representative(&self, block: usize) -> usize {
        self.blocks[block][0]
    }

    pub fn representative_of(&self, x: usize) -> usize {
        self.representative(self.block_of[x])
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

/// `M(f)`: the induced map between gaunt quotients.
pub fn apply_m(f: &SpaceMap) -> SpaceMap {
    let (mdom, _) = f.dom().gaunt_quotient();
    let (mcod, _) = f.cod().gaunt_quotient();
    let dom_part = f.dom().iso_partition();
    let cod_part = f.cod().iso_partition();
    let assign = dom_part
        .blocks
        .iter()
        .map(|block| cod_part.block_of[f.apply(block[0])])
        .collect();
    SpaceMap::new_unchecked(mdom, mcod, assign)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> ExtNN {
        s.parse().unwrap()
    }

    fn names(ns: &[&str]) -> Vec<String> {
        ns.iter().map(|s| s.to_string()).collect()
    }

    fn space(ns: &[&str], rows: &[&[&str]]) -> Result<Space, SpaceError> {
        Space::new(
            names(ns),
            rows.iter().map(|r| r.iter().map(|s| v(s)).collect()).collect(),
        )
    }

    #[test]
    fn validate_examples() {
        assert!(space(&["x"], &[&["0"]]).is_ok());
        assert!(space(&["a", "b"], &[&["0", "1"], &["2", "0"]]).is_ok());
        let bad = space(
            &["a", "b", "c"],
            &[&["0", "5", "7"], &["1", "0", "1"], &["inf", "inf", "0"]],
        );
        assert_eq!(
            bad,
            Err(SpaceError::TriangleViolation("a".into(), "b".into(), "c".into()))
        );
    }

    #[test]
    fn validate_error_paths() {
        assert_eq!(
            space(&["a", "a"], &[&["0", "0"], &["0", "0"]]),
            Err(SpaceError::DuplicateName("a".into()))
        );
        assert_eq!(
            space(&["a"], &[&["1"]]),
            Err(SpaceError::NonzeroDiagonal("a".into()))
        );
        assert!(matches!(
            space(&["a", "b"], &[&["0", "1"]]),
            Err(SpaceError::NotSquare { .. })
        ));
    }

    #[test]
    fn closure_examples() {
        let mut g = WeightedGraph::new(names(&["a", "b", "c"])).unwrap();
        g.add_named_edge("a", "b", v("1")).unwrap();
        g.add_named_edge("b", "c", v("1")).unwrap();
        g.add_named_edge("a", "c", v("5")).unwrap();
        let s = closure(&g);
        assert_eq!(s.d(0, 2), &v("2"));
        assert_eq!(s.d(2, 0), &ExtNN::Infinite);

        let g2 = WeightedGraph::new(names(&["a", "b"])).unwrap();
        let s2 = closure(&g2);
        assert_eq!(s2.d(0, 1), &ExtNN::Infinite);
        assert_eq!(s2.d(1, 0), &ExtNN::Infinite);
    }

    #[test]
    fn closure_is_idempotent_on_metric_input() {
        let s = space(&["a", "b"], &[&["0", "1"], &["2", "0"]]).unwrap();
        let mut g = WeightedGraph::new(s.objects().to_vec()).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                g.add_edge(i, j, s.d(i, j).clone());
            }
        }
        assert_eq!(closure(&g), s);
    }

    #[test]
    fn opposite_examples() {
        let s = space(&["a", "b"], &[&["0", "1"], &["2", "0"]]).unwrap();
        let op = s.opposite();
        assert_eq!(op.d(0, 1), &v("2"));
        assert_eq!(op.d(1, 0), &v("1"));
        assert_eq!(op.opposite(), s);
        let sym = space(&["a", "b"], &[&["0", "3"], &["3", "0"]]).unwrap();
        assert_eq!(sym.opposite(), sym);
    }

    #[test]
    fn symmetry_and_gauntness() {
        let s = space(&["a", "b"], &[&["0", "1"], &["1", "0"]]).unwrap();
        assert!(s.is_symmetric() && s.is_gaunt());
        let z = space(&["a", "b"], &[&["0", "0"], &["0", "0"]]).unwrap();
        assert!(z.is_symmetric() && !z.is_gaunt());
        let a = space(&["a", "b"], &[&["0", "1"], &["2", "0"]]).unwrap();
        assert!(!a.is_symmetric() && a.is_gaunt());
    }

    #[test]
    fn iso_partition_examples() {
        let g = space(&["a", "b"], &[&["0", "1"], &["1", "0"]]).unwrap();
        assert_eq!(g.iso_partition().blocks, vec![vec![0], vec![1]]);

        let s = space(
            &["a", "b", "c"],
            &[&["0", "0", "1"], &["0", "0", "1"], &["1", "1", "0"]],
        )
        .unwrap();
        assert_eq!(s.iso_partition().blocks, vec![vec![0, 1], vec![2]]);

        // a ~ b and b ~ c at zero; the closure forces a ~ c.
        let mut gr = WeightedGraph::new(names(&["a", "b", "c"])).unwrap();
        for (x, y) in [("a", "b"), ("b", "a"), ("b", "c"), ("c", "b")] {
            gr.add_named_edge(x, y, ExtNN::zero()).unwrap();
        }
        let chain = closure(&gr);
        assert_eq!(chain.iso_partition().blocks, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn gaunt_quotient_examples() {
        let z = space(&["a", "b"], &[&["0", "0"], &["0", "0"]]).unwrap();
        let (m, q) = z.gaunt_quotient();
        assert_eq!(m.len(), 1);
        assert_eq!(q.assignment(), &[0, 0]);

        let g = space(&["a", "b"], &[&["0", "1"], &["2", "0"]]).unwrap();
        let (m, q) = g.gaunt_quotient();
        assert_eq!(m, g);
        assert_eq!(q, SpaceMap::identity(&g));
    }

    #[test]
    fn apply_m_of_quotient_map_is_isomorphism() {
        let s = space(
            &["a", "b", "c"],
            &[&["0", "0", "1"], &["0", "0", "1"], &["2", "2", "0"]],
        )
        .unwrap();
        let (_, q) = s.gaunt_quotient();
        let mq = apply_m(&q);
        assert!(mq.is_isomorphism());
        assert!(apply_m(&SpaceMap::identity(&s)).is_isomorphism());
    }

    #[test]
    fn product_and_coproduct_examples() {
        let s = space(&["a", "b"], &[&["0", "1"], &["2", "0"]]).unwrap();
        let p = Space::product(&s, &Space::point());
        assert_eq!(p.matrix(), s.matrix());
        let c = Space::coproduct(&Space::point(), &Space::point());
        assert_eq!(c.len(), 2);
        assert_eq!(c.d(0, 1), &ExtNN::Infinite);
        assert_eq!(c.d(1, 0), &ExtNN::Infinite);
    }

    #[test]
    fn seq_values() {
        assert_eq!(seq_distance(2, 5), v("7/16"));
        assert_eq!(seq_distance(5, 2), v("7/16"));
        assert_eq!(seq_distance(0, 3), v("7/4"));
        let (bar, inc) = seqbar_space(5);
        let lim = bar.index_of(SEQ_LIMIT).unwrap();
        assert_eq!(bar.d(3, lim), &v("1/4"));
        assert_eq!(bar.d(lim, 0), &v("2"));
        assert_eq!(inc.dom(), &seq_space(5));
    }

    #[test]
    fn seqbar_is_valid_up_to_twelve() {
        for n in 1..=12 {
            let (bar, _) = seqbar_space(n);
            assert!(Space::new(bar.objects().to_vec(), bar.matrix().to_vec()).is_ok());
        }
    }
}
