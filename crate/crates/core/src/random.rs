//! Seeded generators for spaces, maps, presheaves, sequences and finite
//! categories.
//!
//! Nonzero edge weights are drawn from [`WEIGHTS`], all at least `1`. Together
//! with zero-weight edges (which create clusters of indiscernible points) and
//! missing edges (distance `∞`) this keeps every positive distance at least `1`,
//! well above the resolution of the truncated dyadic sequence at depth 3.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::cauchy::EPSeq;
use crate::extnum::ExtNN;
use crate::karoubi::{FinCat, Functor, FunctorSearch, FunctorSearchOutcome};
use crate::maps::SpaceMap;
use crate::presheaf::Presheaf;
use crate::search::ShortMapSearch;
use crate::space::{closure, Space, WeightedGraph};

/// Nonzero edge weights as `(numerator, denominator)`.
pub const WEIGHTS: [(u64, u64); 5] = [(1, 1), (3, 2), (2, 1), (5, 2), (3, 1)];

/// Per-pair edge odds out of [`EDGE_ODDS_DENOMINATOR`]: a zero edge, else a weighted edge, else none.
pub const ZERO_EDGE_ODDS: u32 = 3;
pub const WEIGHTED_EDGE_ODDS: u32 = 10;
pub const EDGE_ODDS_DENOMINATOR: u32 = 20;

fn weight<R: Rng>(rng: &mut R) -> ExtNN {
    let (n, d) = *WEIGHTS.choose(rng).expect("nonempty");
    ExtNN::ratio(n, d)
}

fn edge<R: Rng>(rng: &mut R) -> Option<ExtNN> {
    let u = rng.gen_range(0..EDGE_ODDS_DENOMINATOR);
    if u < ZERO_EDGE_ODDS {
        Some(ExtNN::zero())
    } else if u < ZERO_EDGE_ODDS + WEIGHTED_EDGE_ODDS {
        Some(weight(rng))
    } else {
        None
    }
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// Random digraph on `n` objects; symmetric graphs carry each edge both ways.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, symmetric: bool) -> WeightedGraph {
    let mut g = WeightedGraph::new(names("x", n)).expect("distinct names");
    for i in 0..n {
        for j in 0..n {
            if i == j || (symmetric && j < i) {
                continue;
            }
            if let Some(w) = edge(rng) {
                if symmetric {
                    g.add_edge(j, i, w.clone());
                }
                g.add_edge(i, j, w);
            }
        }
    }
    g
}

/// Closure of a random graph with between 1 and `max_objects` objects.
pub fn random_space<R: Rng>(rng: &mut R, max_objects: usize, symmetric: bool) -> Space {
    let n = rng.gen_range(1..=max_objects.max(1));
    closure(&random_graph(rng, n, symmetric))
}

/// Like [`random_space`] with objects named `{prefix}0, {prefix}1, ...`.
pub fn random_space_named<R: Rng>(
    rng: &mut R,
    prefix: &str,
    max_objects: usize,
    symmetric: bool,
) -> Space {
    let s = random_space(rng, max_objects, symmetric);
    Space::new(names(prefix, s.len()), s.matrix().to_vec()).expect("renaming keeps axioms")
}

/// A short map chosen by rejection sampling, falling back to a randomized search.
pub fn random_short_map<R: Rng>(rng: &mut R, dom: &Space, cod: &Space) -> SpaceMap {
    assert!(!cod.is_empty() || dom.is_empty());
    for _ in 0..20 {
        let assign: Vec<usize> = (0..dom.len()).map(|_| rng.gen_range(0..cod.len())).collect();
        if let Ok(f) = SpaceMap::new(dom.clone(), cod.clone(), assign) {
            return f;
        }
    }
    let mut search = ShortMapSearch::new(dom, cod);
    search.shuffle(rng);
    let assign = search.first().found().expect("constant maps are always short");
    SpaceMap::new(dom.clone(), cod.clone(), assign).expect("search returns short maps")
}

fn fresh_name(s: &Space, base: &str) -> String {
    let mut name = format!("{base}'");
    while s.index_of(&name).is_some() {
        name.push('\'');
    }
    name
}

/// Adds a copy of object `p`, indiscernible from it. Returns the inclusion and
/// the retraction collapsing the copy back onto `p`.
pub fn duplicate_point(s: &Space, p: usize) -> (SpaceMap, SpaceMap) {
    let n = s.len();
    let mut objects = s.objects().to_vec();
    objects.push(fresh_name(s, s.name(p)));
    let src = |i: usize| if i == n { p } else { i };
    let big = Space::from_fn(objects, |i, j| s.d(src(i), src(j)).clone())
        .expect("copies keep the axioms");
    let inc = SpaceMap::new(s.clone(), big.clone(), (0..n).collect()).expect("isometric");
    let ret = SpaceMap::new(big, s.clone(), (0..=n).map(src).collect()).expect("isometric");
    (inc, ret)
}

/// An isomorphism onto a reordering of the same objects.
pub fn random_iso<R: Rng>(rng: &mut R, s: &Space) -> SpaceMap {
    let mut perm: Vec<usize> = (0..s.len()).collect();
    perm.shuffle(rng);
    // perm[k] is the source object placed at position k.
    let objects = perm.iter().map(|&i| s.name(i).to_string()).collect();
    let target = Space::from_fn(objects, |a, b| s.d(perm[a], perm[b]).clone())
        .expect("reordering keeps the axioms");
    let mut assign = vec![0; s.len()];
    for (k, &i) in perm.iter().enumerate() {
        assign[i] = k;
    }
    SpaceMap::new(s.clone(), target, assign).expect("isometric bijection")
}

/// An injective short map: a copy of `dom` whose distances only shrink,
/// inside a space with extra points.
pub fn random_injection<R: Rng>(rng: &mut R, dom: &Space, extra: usize, symmetric: bool) -> SpaceMap {
    let n = dom.len();
    let total = n + extra;
    let mut g = WeightedGraph::new(
        dom.objects()
            .iter()
            .cloned()
            .chain((0..extra).map(|k| fresh_name(dom, &format!("new{k}"))))
            .collect(),
    )
    .expect("fresh names");
    for i in 0..n {
        for j in 0..n {
            if i != j && !dom.d(i, j).is_infinite() {
                g.add_edge(i, j, dom.d(i, j).clone());
            }
        }
    }
    for i in 0..total {
        for j in 0..total {
            if i == j || (symmetric && j < i) || (i < n && j < n && rng.gen_ratio(7, 10)) {
                continue;
            }
            if let Some(w) = edge(rng) {
                if symmetric {
                    g.add_edge(j, i, w.clone());
                }
                g.add_edge(i, j, w);
            }
        }
    }
    let cod = closure(&g);
    SpaceMap::new(dom.clone(), cod, (0..n).collect()).expect("closure only shrinks distances")
}

/// `z ↦ min_y (d(z, y) + r_y)` with random offsets `r_y`, always a presheaf.
pub fn random_presheaf<R: Rng>(rng: &mut R, s: &Space) -> Presheaf {
    let offsets: Vec<ExtNN> = (0..s.len())
        .map(|_| match rng.gen_range(0..6) {
            0 => ExtNN::zero(),
            1 => ExtNN::ratio(1, 2),
            2 => ExtNN::from_int(1),
            3 => ExtNN::ratio(3, 2),
            4 => ExtNN::from_int(2),
            _ => ExtNN::Infinite,
        })
        .collect();
    let values = (0..s.len())
        .map(|z| {
            (0..s.len())
                .map(|y| s.d(z, y).add(&offsets[y]))
                .min()
                .unwrap_or(ExtNN::Infinite)
        })
        .collect();
    Presheaf::new(s.clone(), values).expect("infimum of shifted representables")
}

/// A random sequence, Cauchy with probability about `cauchy_bias`.
pub fn random_epseq<R: Rng>(rng: &mut R, s: &Space, cauchy_bias: f64) -> EPSeq {
    let n = s.len();
    let plen = rng.gen_range(0..=3);
    let clen = rng.gen_range(1..=3);
    let prefix = (0..plen).map(|_| rng.gen_range(0..n)).collect();
    let cycle = if rng.gen_bool(cauchy_bias) {
        let anchor = rng.gen_range(0..n);
        let cluster: Vec<usize> = (0..n).filter(|&c| s.iso(anchor, c)).collect();
        (0..clen).map(|_| *cluster.choose(rng).expect("anchor")).collect()
    } else {
        (0..clen).map(|_| rng.gen_range(0..n)).collect()
    };
    EPSeq::new(s.clone(), prefix, cycle).expect("symmetric space")
}

/// Largest carrier set of a generated concrete category.
pub const MAX_CARRIER: usize = 3;

/// Most generating functions tried per generated category.
pub const MAX_GENERATORS: usize = 4;

/// Functions between finite sets, as `(src, dst, values)`.
type Arrow = (usize, usize, Vec<usize>);

/// Closes `arrows` under composition; `None` once more than `cap` arrows appear.
fn close_arrows(mut arrows: Vec<Arrow>, cap: usize) -> Option<Vec<Arrow>> {
    let mut i = 0;
    while i < arrows.len() {
        for j in 0..=i {
            for (g, f) in [(i, j), (j, i)] {
                let ((gs, gd, gv), (fs, fd, fv)) = (&arrows[g], &arrows[f]);
                if fd != gs {
                    continue;
                }
                let h = (*fs, *gd, fv.iter().map(|&x| gv[x]).collect());
                if !arrows.contains(&h) {
                    arrows.push(h);
                    if arrows.len() > cap {
                        return None;
                    }
                }
            }
        }
        i += 1;
    }
    Some(arrows)
}

/// A category of functions between small sets: between 1 and `max_objects`
/// sets of size at most [`MAX_CARRIER`], the identities and the composites of a
/// few random functions, with at most `max_morphisms` morphisms in total.
pub fn random_category<R: Rng>(rng: &mut R, max_objects: usize, max_morphisms: usize) -> FinCat {
    let n = rng.gen_range(1..=max_objects.max(1).min(max_morphisms.max(1)));
    let sizes: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=MAX_CARRIER)).collect();
    let mut arrows: Vec<Arrow> = (0..n).map(|x| (x, x, (0..sizes[x]).collect())).collect();
    for _ in 0..rng.gen_range(0..=MAX_GENERATORS) {
        let (s, d) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let values: Vec<usize> = (0..sizes[s]).map(|_| rng.gen_range(0..sizes[d])).collect();
        let mut grown = arrows.clone();
        if !grown.contains(&(s, d, values.clone())) {
            grown.push((s, d, values));
        }
        if let Some(closed) = close_arrows(grown, max_morphisms) {
            arrows = closed;
        }
    }
    let objects = names("c", n);
    let morphisms = arrows
        .iter()
        .enumerate()
        .map(|(k, (s, d, _))| {
            let name = if k < n { format!("id{k}") } else { format!("f{}", k - n) };
            (name, *s, *d)
        })
        .collect();
    let mut rows = Vec::new();
    for (g, (gs, _, gv)) in arrows.iter().enumerate() {
        for (f, (fs, fd, fv)) in arrows.iter().enumerate() {
            if fd == gs {
                let h = (*fs, arrows[g].1, fv.iter().map(|&x| gv[x]).collect::<Vec<_>>());
                let gf = arrows.iter().position(|a| *a == h).expect("closed under composition");
                rows.push((g, f, gf));
            }
        }
    }
    FinCat::new(objects, morphisms, (0..n).collect(), &rows).expect("functions compose associatively")
}

/// A functor chosen by randomized search; constant functors always exist.
pub fn random_functor<R: Rng>(rng: &mut R, dom: &FinCat, cod: &FinCat) -> Functor {
    let mut search = FunctorSearch::new(dom, cod).with_probe_cap(100_000);
    search.shuffle(rng);
    match search.first() {
        FunctorSearchOutcome::Found(f) => f,
        _ => {
            let y = rng.gen_range(0..cod.object_count());
            Functor::new(
                dom.clone(),
                cod.clone(),
                vec![y; dom.object_count()],
                vec![cod.identity(y); dom.morphism_count()],
            )
            .expect("constant functor")
        }
    }
}

/// An isomorphic copy of `c` with objects and morphisms reordered, and the
/// isomorphism onto it.
pub fn random_category_iso<R: Rng>(rng: &mut R, c: &FinCat) -> Functor {
    let mut obj: Vec<usize> = (0..c.object_count()).collect();
    let mut mor: Vec<usize> = (0..c.morphism_count()).collect();
    obj.shuffle(rng);
    mor.shuffle(rng);
    // obj[k] is the old object placed at position k; likewise for mor.
    let mut obj_pos = vec![0; obj.len()];
    for (k, &x) in obj.iter().enumerate() {
        obj_pos[x] = k;
    }
    let mut mor_pos = vec![0; mor.len()];
    for (k, &m) in mor.iter().enumerate() {
        mor_pos[m] = k;
    }
    let objects = obj.iter().map(|&x| c.object_name(x).to_string()).collect();
    let morphisms = mor
        .iter()
        .map(|&m| (c.morphism_name(m).to_string(), obj_pos[c.src(m)], obj_pos[c.dst(m)]))
        .collect();
    let identity = obj.iter().map(|&x| mor_pos[c.identity(x)]).collect();
    let mut rows = Vec::new();
    for g in 0..c.morphism_count() {
        for f in 0..c.morphism_count() {
            if let Some(gf) = c.compose(g, f) {
                rows.push((mor_pos[g], mor_pos[f], mor_pos[gf]));
            }
        }
    }
    let copy = FinCat::new(objects, morphisms, identity, &rows).expect("relabelled category");
    Functor::new(c.clone(), copy, obj_pos, mor_pos).expect("relabelling is an isomorphism")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn positive_distances_are_at_least_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let s = random_space(&mut rng, 6, false);
            if let Some(m) = s.min_positive_distance() {
                assert!(m >= ExtNN::from_int(1));
            }
            assert!(random_space(&mut rng, 6, true).is_symmetric());
        }
    }

    #[test]
    fn generated_maps_have_expected_flags() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let s = random_space(&mut rng, 5, true);
            let p = rng.gen_range(0..s.len());
            let (inc, ret) = duplicate_point(&s, p);
            assert!(inc.is_fully_faithful() && inc.is_essentially_surjective() && inc.is_injective());
            assert!(ret.is_fully_faithful() && ret.is_surjective());
            assert!(random_iso(&mut rng, &s).is_isomorphism());
            let j = random_injection(&mut rng, &s, 2, true);
            assert!(j.is_injective() && j.cod().is_symmetric());
            let t = random_space(&mut rng, 4, true);
            random_short_map(&mut rng, &s, &t);
            random_presheaf(&mut rng, &s);
            random_epseq(&mut rng, &s, 0.7);
        }
    }

    #[test]
    fn generated_categories_respect_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let c = random_category(&mut rng, 3, 9);
            assert!((1..=3).contains(&c.object_count()));
            assert!(c.morphism_count() <= 9);
            let d = random_category(&mut rng, 3, 9);
            random_functor(&mut rng, &c, &d);
            let iso = random_category_iso(&mut rng, &c);
            assert_eq!(iso.cod().morphism_count(), c.morphism_count());
        }
    }
}
