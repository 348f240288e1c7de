//! The metric, Cauchy and Cauchy-metric model structures on finite spaces.
//!
//! Maps are classified by finite characterizations of the lifting conditions
//! against the generators `Δ: I -> *`, `Γ: * -> I` (where `I` has two
//! indiscernible points) and the inclusion of the truncated dyadic sequence into
//! its completion. The characterizations can be cross-checked against an
//! explicit lifting search with [`has_rlp_against`].

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cauchy::{limits, EPSeq};
use crate::doc::{MapDoc, SquareDoc, REPORT};
use crate::extnum::ExtNN;
use crate::maps::{MapError, SpaceMap};
use crate::random;
use crate::search::{SearchOutcome, ShortMapSearch, PROBE_CAP};
use crate::space::{seqbar_space, Space};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelId {
    Metric,
    Cauchy,
    CauchyMetric,
}

impl ModelId {
    pub const ALL: [ModelId; 3] = [ModelId::Metric, ModelId::Cauchy, ModelId::CauchyMetric];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelId::Metric => "metric",
            ModelId::Cauchy => "cauchy",
            ModelId::CauchyMetric => "cauchy_metric",
        }
    }

    /// Cauchy-flavoured structures live on symmetric spaces.
    pub fn requires_symmetry(self) -> bool {
        self != ModelId::Metric
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelId {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "metric" => Ok(ModelId::Metric),
            "cauchy" => Ok(ModelId::Cauchy),
            "cauchy_metric" | "cauchy-metric" => Ok(ModelId::CauchyMetric),
            other => Err(ModelError::UnknownModel(other.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    M4,
    M5,
}

impl FromStr for Axiom {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "m4" | "M4" => Ok(Axiom::M4),
            "m5" | "M5" => Ok(Axiom::M5),
            other => Err(ModelError::UnknownAxiom(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("domain or codomain is not symmetric")]
    NotSymmetric,
    #[error("square does not commute")]
    NotCommuting,
    #[error("square sides do not fit together")]
    ShapeMismatch,
    #[error("search budget exhausted")]
    Exhausted,
    #[error("number of cases must be at least 1")]
    NoCases,
    #[error("unknown model `{0}`")]
    UnknownModel(String),
    #[error("unknown axiom `{0}`")]
    UnknownAxiom(String),
    #[error(transparent)]
    Map(#[from] MapError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub is_weq: bool,
    pub is_cof: bool,
    pub is_fib: bool,
    pub is_trivial_fib: bool,
    pub is_trivial_cof: bool,
}

/// No two distinct isomorphic domain objects share an image.
pub fn delta_condition(f: &SpaceMap) -> bool {
    let dom = f.dom();
    (0..dom.len()).all(|x| (0..x).all(|y| !(dom.iso(x, y) && f.apply(x) == f.apply(y))))
}

/// Every `d ≅ f(c)` is `f(c')` for some `c' ≅ c`.
pub fn gamma_condition(f: &SpaceMap) -> bool {
    let (dom, cod) = (f.dom(), f.cod());
    (0..dom.len()).all(|c| {
        (0..cod.len()).all(|d| {
            !cod.iso(f.apply(c), d) || (0..dom.len()).any(|c2| dom.iso(c, c2) && f.apply(c2) == d)
        })
    })
}

/// Lifting against the completed dyadic sequence, via limits of sequences.
///
/// Every Cauchy sequence in a finite space is equivalent to a constant one, so
/// it suffices that each limit of an image sequence `f(c), f(c), ...` is the
/// image of a limit of `c, c, ...`.
pub fn iota_seq_condition(f: &SpaceMap) -> Result<bool, ModelError> {
    for c in 0..f.dom().len() {
        let s = EPSeq::constant(f.dom().clone(), c).map_err(|_| ModelError::NotSymmetric)?;
        let img = s.push(f).map_err(|_| ModelError::NotSymmetric)?;
        let here = limits(&s).expect("constant sequences are Cauchy");
        let there = limits(&img).expect("constant sequences are Cauchy");
        if !there.iter().all(|&d| here.iter().any(|&c2| f.apply(c2) == d)) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn classify(f: &SpaceMap, m: ModelId) -> Result<Classification, ModelError> {
    if m.requires_symmetry() && !(f.dom().is_symmetric() && f.cod().is_symmetric()) {
        return Err(ModelError::NotSymmetric);
    }
    let ff = f.is_fully_faithful();
    let is_weq = match m {
        ModelId::Metric => ff && f.is_essentially_surjective(),
        ModelId::Cauchy | ModelId::CauchyMetric => ff && f.is_dense(),
    };
    let is_cof = match m {
        ModelId::Cauchy => f.is_injective(),
        ModelId::Metric | ModelId::CauchyMetric => true,
    };
    let is_fib = match m {
        ModelId::Metric => delta_condition(f) && gamma_condition(f),
        ModelId::Cauchy => iota_seq_condition(f)?,
        ModelId::CauchyMetric => {
            delta_condition(f) && gamma_condition(f) && iota_seq_condition(f)?
        }
    };
    Ok(Classification {
        is_weq,
        is_cof,
        is_fib,
        is_trivial_fib: is_fib && is_weq,
        is_trivial_cof: is_cof && is_weq,
    })
}

/// A commuting square `right ∘ top = bottom ∘ left`; a lift is a map
/// `left.cod -> right.dom` through which both triangles commute.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftSquare {
    pub top: SpaceMap,
    pub bottom: SpaceMap,
    pub left: SpaceMap,
    pub right: SpaceMap,
}

impl LiftSquare {
    pub fn new(
        top: SpaceMap,
        bottom: SpaceMap,
        left: SpaceMap,
        right: SpaceMap,
    ) -> Result<LiftSquare, ModelError> {
        if left.dom() != top.dom()
            || left.cod() != bottom.dom()
            || top.cod() != right.dom()
            || right.cod() != bottom.cod()
        {
            return Err(ModelError::ShapeMismatch);
        }
        let upper = SpaceMap::compose(&right, &top)?;
        let lower = SpaceMap::compose(&bottom, &left)?;
        if upper != lower {
            return Err(ModelError::NotCommuting);
        }
        Ok(LiftSquare {
            top,
            bottom,
            left,
            right,
        })
    }

    /// Whether `l` makes both triangles commute.
    pub fn is_lift(&self, l: &SpaceMap) -> bool {
        SpaceMap::compose(l, &self.left).is_ok_and(|u| u == self.top)
            && SpaceMap::compose(&self.right, l).is_ok_and(|v| v == self.bottom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LiftOutcome {
    Found(SpaceMap),
    NoLift,
    Exhausted,
}

pub fn solve_lift(sq: &LiftSquare) -> LiftOutcome {
    solve_lift_capped(sq, PROBE_CAP)
}

/// Exhaustive search for a diagonal, pruned by shortness.
pub fn solve_lift_capped(sq: &LiftSquare, cap: u64) -> LiftOutcome {
    let b = sq.left.cod();
    let x = sq.right.dom();
    let mut search = ShortMapSearch::new(b, x).with_probe_cap(cap);
    for a in 0..sq.left.dom().len() {
        search.fix(sq.left.apply(a), sq.top.apply(a));
    }
    for bi in 0..b.len() {
        let target = sq.bottom.apply(bi);
        search.restrict(bi, |xi| sq.right.apply(xi) == target);
    }
    match search.first() {
        SearchOutcome::Found(assign) => {
            LiftOutcome::Found(SpaceMap::new(b.clone(), x.clone(), assign).expect("short by search"))
        }
        SearchOutcome::NoneExists => LiftOutcome::NoLift,
        SearchOutcome::Exhausted => LiftOutcome::Exhausted,
    }
}

/// Generating maps of the lifting conditions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    /// `I -> *`.
    Delta,
    /// `* -> I`, hitting the first point.
    Gamma,
    /// Truncated dyadic sequence into its completion, at the given depth.
    IotaSeq(usize),
}

impl Generator {
    pub fn map(self) -> SpaceMap {
        match self {
            Generator::Delta => SpaceMap::to_point(&Space::indiscernible_pair()),
            Generator::Gamma => {
                SpaceMap::constant(&Space::point(), &Space::indiscernible_pair(), 0)
            }
            Generator::IotaSeq(n) => seqbar_space(n).1,
        }
    }
}

/// Every commuting square with the given left and right sides.
pub fn commuting_squares(left: &SpaceMap, right: &SpaceMap) -> Result<Vec<LiftSquare>, ModelError> {
    let tops = ShortMapSearch::new(left.dom(), right.dom())
        .all()
        .ok_or(ModelError::Exhausted)?;
    let mut out = Vec::new();
    for t in tops {
        let mut bottoms = ShortMapSearch::new(left.cod(), right.cod());
        for (a, &x) in t.iter().enumerate() {
            bottoms.fix(left.apply(a), right.apply(x));
        }
        let top = SpaceMap::new(left.dom().clone(), right.dom().clone(), t)?;
        for b in bottoms.all().ok_or(ModelError::Exhausted)? {
            let bottom = SpaceMap::new(left.cod().clone(), right.cod().clone(), b)?;
            out.push(LiftSquare::new(top.clone(), bottom, left.clone(), right.clone())?);
        }
    }
    Ok(out)
}

/// A square against `g` with no lift, if any.
pub fn failing_square(f: &SpaceMap, g: Generator) -> Result<Option<LiftSquare>, ModelError> {
    for sq in commuting_squares(&g.map(), f)? {
        match solve_lift(&sq) {
            LiftOutcome::Found(_) => {}
            LiftOutcome::NoLift => return Ok(Some(sq)),
            LiftOutcome::Exhausted => return Err(ModelError::Exhausted),
        }
    }
    Ok(None)
}

/// Right lifting property against a generator, decided by search.
pub fn has_rlp_against(f: &SpaceMap, g: Generator) -> Result<bool, ModelError> {
    Ok(failing_square(f, g)?.is_none())
}

/// `f = second ∘ first` through `mid`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub first: SpaceMap,
    pub mid: Space,
    pub second: SpaceMap,
}

fn unique_names(names: Vec<String>) -> Vec<String> {
    let mut seen = HashSet::new();
    names
        .into_iter()
        .enumerate()
        .map(|(i, n)| {
            if seen.insert(n.clone()) {
                n
            } else {
                let alt = format!("{n}#{i}");
                seen.insert(alt.clone());
                alt
            }
        })
        .collect()
}

/// Objects `(c, d)` with `d ≅ f(c)`, one per class of `c` for each `d`, at
/// distance `C(c, a)` and projecting to `d`.
fn class_pairs(f: &SpaceMap) -> Factorization {
    let (dom, cod) = (f.dom(), f.cod());
    let part = dom.iso_partition();
    let pairs: Vec<(usize, usize)> = part
        .blocks
        .iter()
        .flat_map(|b| {
            let c = b[0];
            (0..cod.len())
                .filter(move |&d| cod.iso(f.apply(c), d))
                .map(move |d| (c, d))
        })
        .collect();
    let names = unique_names(
        pairs
            .iter()
            .map(|&(c, d)| format!("({},{})", dom.name(c), cod.name(d)))
            .collect(),
    );
    let mid = Space::from_fn(names, |i, j| dom.d(pairs[i].0, pairs[j].0).clone())
        .expect("pulled back distances");
    let first_assign = (0..dom.len())
        .map(|c| {
            let key = (part.representative_of(c), f.apply(c));
            pairs.iter().position(|&p| p == key).expect("f(c) ≅ f(rep c)")
        })
        .collect();
    let first = SpaceMap::new(dom.clone(), mid.clone(), first_assign).expect("isometric");
    let second = SpaceMap::new(mid.clone(), cod.clone(), pairs.iter().map(|&(_, d)| d).collect())
        .expect("short since d ≅ f(c)");
    Factorization { first, mid, second }
}

/// The domain itself plus a point `(c, d)` for each class of `c` and each
/// `d ≅ f(c)` that `f` misses on that class. The first map is the inclusion of
/// the domain, so it stays injective.
fn padded_domain(f: &SpaceMap) -> Factorization {
    let (dom, cod) = (f.dom(), f.cod());
    let part = dom.iso_partition();
    let mut extras: Vec<(usize, usize)> = Vec::new();
    for b in &part.blocks {
        let c = b[0];
        for d in 0..cod.len() {
            if cod.iso(f.apply(c), d) && !b.iter().any(|&c2| f.apply(c2) == d) {
                extras.push((c, d));
            }
        }
    }
    let base = |u: usize| if u < dom.len() { u } else { extras[u - dom.len()].0 };
    let names = unique_names(
        dom.objects()
            .iter()
            .cloned()
            .chain(
                extras
                    .iter()
                    .map(|&(c, d)| format!("({},{})", dom.name(c), cod.name(d))),
            )
            .collect(),
    );
    let total = dom.len() + extras.len();
    let mid = Space::from_fn(names, |u, v| dom.d(base(u), base(v)).clone())
        .expect("pulled back distances");
    let first = SpaceMap::new(dom.clone(), mid.clone(), (0..dom.len()).collect())
        .expect("isometric");
    let second_assign = (0..total)
        .map(|u| if u < dom.len() { f.apply(u) } else { extras[u - dom.len()].1 })
        .collect();
    let second = SpaceMap::new(mid.clone(), cod.clone(), second_assign)
        .expect("short since d ≅ f(c)");
    Factorization { first, mid, second }
}

pub fn factorize(f: &SpaceMap, m: ModelId, axiom: Axiom) -> Result<Factorization, ModelError> {
    if m.requires_symmetry() && !(f.dom().is_symmetric() && f.cod().is_symmetric()) {
        return Err(ModelError::NotSymmetric);
    }
    let (dom, cod) = (f.dom(), f.cod());
    Ok(match (m, axiom) {
        (ModelId::Metric | ModelId::CauchyMetric, Axiom::M4) => Factorization {
            first: f.clone(),
            mid: cod.clone(),
            second: SpaceMap::identity(cod),
        },
        (ModelId::Cauchy, Axiom::M4) => {
            // Disjoint union of domain and codomain with distances pulled back along
            // f on the first summand and the identity on the second.
            let total = dom.len() + cod.len();
            let hat = |u: usize| if u < dom.len() { f.apply(u) } else { u - dom.len() };
            let names = dom
                .objects()
                .iter()
                .map(|x| format!("0:{x}"))
                .chain(cod.objects().iter().map(|y| format!("1:{y}")))
                .collect();
            let mid = Space::from_fn(names, |u, v| cod.d(hat(u), hat(v)).clone())
                .expect("pulled back distances");
            let first = SpaceMap::new(dom.clone(), mid.clone(), (0..dom.len()).collect())?;
            let second = SpaceMap::new(mid.clone(), cod.clone(), (0..total).map(hat).collect())?;
            Factorization { first, mid, second }
        }
        (ModelId::Metric | ModelId::CauchyMetric, Axiom::M5) => class_pairs(f),
        (ModelId::Cauchy, Axiom::M5) => padded_domain(f),
    })
}

/// Parameters of the random generators, recorded in reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationParams {
    pub weights: Vec<ExtNN>,
    pub zero_edge_odds: String,
    pub weighted_edge_odds: String,
    pub symmetric: bool,
    pub map_sampling: String,
}

/// Parameters of the random category generators, recorded in reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryParams {
    pub max_carrier: usize,
    pub max_generators: usize,
    pub max_morphisms: usize,
    pub functor_sampling: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ReportParams {
    Spaces(GenerationParams),
    Categories(CategoryParams),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomResult {
    pub axiom: String,
    pub pass: bool,
    pub checked: usize,
    pub failed: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub axiom: String,
    pub case: usize,
    pub reason: String,
    pub document: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    #[serde(rename = "type")]
    pub kind: String,
    pub model: String,
    pub seed: u64,
    pub cases: usize,
    pub max_objects: usize,
    pub params: ReportParams,
    pub results: Vec<AxiomResult>,
    pub counterexamples: Vec<Counterexample>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|r| r.pass)
    }

    pub fn result(&self, axiom: &str) -> Option<&AxiomResult> {
        self.results.iter().find(|r| r.axiom == axiom)
    }
}

impl crate::doc::Tagged for AxiomReport {
    const TAG: &'static str = REPORT;
    fn tag(&self) -> &str {
        &self.kind
    }
}

/// Counterexamples kept per axiom.
const MAX_COUNTEREXAMPLES: usize = 3;

pub(crate) const AXIOMS: [&str; 5] = ["M1", "M2", "M3", "M4", "M5"];

#[derive(Default, Clone)]
pub(crate) struct Tally {
    pub checked: usize,
    pub failed: usize,
    pub skipped: usize,
}

pub(crate) struct Recorder {
    pub tallies: Vec<Tally>,
    pub counterexamples: Vec<Counterexample>,
}

impl Recorder {
    pub fn new() -> Recorder {
        Recorder {
            tallies: vec![Tally::default(); AXIOMS.len()],
            counterexamples: Vec::new(),
        }
    }

    fn slot(axiom: &str) -> usize {
        AXIOMS.iter().position(|a| *a == axiom).expect("known axiom")
    }

    pub fn check(&mut self, axiom: &str, case: usize, ok: bool, reason: &str, doc: impl FnOnce() -> serde_json::Value) {
        let t = &mut self.tallies[Self::slot(axiom)];
        t.checked += 1;
        if !ok {
            t.failed += 1;
            let kept = self
                .counterexamples
                .iter()
                .filter(|c| c.axiom == axiom)
                .count();
            if kept < MAX_COUNTEREXAMPLES {
                self.counterexamples.push(Counterexample {
                    axiom: axiom.to_string(),
                    case,
                    reason: reason.to_string(),
                    document: doc(),
                });
            }
        }
    }

    pub fn skip(&mut self, axiom: &str) {
        self.tallies[Self::slot(axiom)].skipped += 1;
    }

    pub fn results(&self) -> Vec<AxiomResult> {
        AXIOMS
            .iter()
            .zip(&self.tallies)
            .map(|(a, t)| AxiomResult {
                axiom: a.to_string(),
                pass: t.failed == 0 && t.checked > 0,
                checked: t.checked,
                failed: t.failed,
                skipped: t.skipped,
            })
            .collect()
    }
}

pub(crate) fn case_rng(seed: u64, case: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(case as u64);
    rng
}

fn map_json(f: &SpaceMap) -> serde_json::Value {
    serde_json::to_value(MapDoc::from_map(f)).expect("serializable")
}

fn maps_json(maps: &[(&str, &SpaceMap)]) -> serde_json::Value {
    serde_json::Value::Object(
        maps.iter()
            .map(|(k, f)| (k.to_string(), map_json(f)))
            .collect(),
    )
}

/// Random instances of the classes of one model structure.
struct Sampler<'r> {
    rng: &'r mut ChaCha8Rng,
    model: ModelId,
    max_objects: usize,
}

impl Sampler<'_> {
    fn symmetric(&self) -> bool {
        self.model.requires_symmetry()
    }

    fn space(&mut self, prefix: &str) -> Space {
        let sym = self.symmetric();
        random::random_space_named(self.rng, prefix, self.max_objects, sym)
    }

    fn small_space(&mut self, prefix: &str) -> Space {
        let sym = self.symmetric();
        random::random_space_named(self.rng, prefix, self.max_objects.min(3), sym)
    }

    fn short_map(&mut self, dom: &Space) -> SpaceMap {
        let cod = self.space("y");
        random::random_short_map(self.rng, dom, &cod)
    }

    /// One elementary weak equivalence out of `s`.
    fn weq_step(&mut self, s: &Space, injective: bool) -> SpaceMap {
        let choices = if injective { 2 } else { 3 };
        match self.rng.gen_range(0..choices) {
            0 => {
                let p = self.rng.gen_range(0..s.len());
                random::duplicate_point(s, p).0
            }
            1 => random::random_iso(self.rng, s),
            _ => s.gaunt_quotient().1,
        }
    }

    fn weq_from(&mut self, s: &Space, injective: bool) -> SpaceMap {
        let f = self.weq_step(s, injective);
        if self.rng.gen_bool(0.5) {
            let g = self.weq_step(&f.cod().clone(), injective);
            SpaceMap::compose(&g, &f).expect("composable")
        } else {
            f
        }
    }

    fn any_map(&mut self) -> SpaceMap {
        let a = self.space("x");
        match self.rng.gen_range(0..4) {
            0 => self.weq_from(&a, false),
            1 => {
                let extra = self.rng.gen_range(0..=2);
                random::random_injection(self.rng, &a, extra, self.symmetric())
            }
            2 => {
                let p = self.rng.gen_range(0..a.len());
                random::duplicate_point(&a, p).1
            }
            _ => self.short_map(&a),
        }
    }

    fn trivial_cofibration(&mut self) -> SpaceMap {
        let a = self.space("a");
        self.weq_from(&a, self.model == ModelId::Cauchy)
    }

    fn cofibration(&mut self) -> SpaceMap {
        let a = self.space("a");
        if self.model == ModelId::Cauchy {
            let extra = self.rng.gen_range(0..=2);
            random::random_injection(self.rng, &a, extra, true)
        } else {
            self.short_map(&a)
        }
    }

    fn fibration_candidate(&mut self) -> SpaceMap {
        match self.rng.gen_range(0..5) {
            0 => {
                let a = self.space("x").gaunt_quotient().0;
                let b = self.space("y").gaunt_quotient().0;
                random::random_short_map(self.rng, &a, &b)
            }
            1 => {
                let a = self.small_space("x");
                let b = self.small_space("y").gaunt_quotient().0;
                Space::product_projections(&a, &b).1
            }
            2 => {
                let f = self.any_map();
                factorize(&f, self.model, Axiom::M5).expect("symmetric").second
            }
            3 => {
                let a = self.space("x");
                if self.model == ModelId::Cauchy {
                    a.gaunt_quotient().1
                } else {
                    random::random_iso(self.rng, &a)
                }
            }
            _ => self.any_map(),
        }
    }

    fn trivial_fibration_candidate(&mut self) -> SpaceMap {
        let a = self.space("x");
        if self.model != ModelId::Cauchy {
            return random::random_iso(self.rng, &a);
        }
        match self.rng.gen_range(0..4) {
            0 => a.gaunt_quotient().1,
            1 => {
                let p = self.rng.gen_range(0..a.len());
                random::duplicate_point(&a, p).1
            }
            2 => {
                let f = self.short_map(&a);
                factorize(&f, ModelId::Cauchy, Axiom::M4).expect("symmetric").second
            }
            _ => random::random_iso(self.rng, &a),
        }
    }

    /// A candidate that `classify` confirms, within a few attempts.
    fn confirmed<F, P>(&mut self, mut gen: F, pred: P) -> Option<SpaceMap>
    where
        F: FnMut(&mut Self) -> SpaceMap,
        P: Fn(&Classification) -> bool,
    {
        for _ in 0..8 {
            let f = gen(self);
            if classify(&f, self.model).is_ok_and(|c| pred(&c)) {
                return Some(f);
            }
        }
        None
    }
}

fn class_member(c: &Classification, class: usize) -> bool {
    [c.is_weq, c.is_cof, c.is_fib][class]
}

const CLASS_NAMES: [&str; 3] = ["weak equivalence", "cofibration", "fibration"];

/// `f` as a retract of `f ⊔ h`, returning the four retraction maps and `f ⊔ h`.
fn retract_of_sum(f: &SpaceMap, h: &SpaceMap) -> (SpaceMap, [SpaceMap; 4]) {
    let (a, b) = (f.dom(), f.cod());
    let (z, w) = (h.dom(), h.cod());
    let (src, ia, _) = Space::coproduct_injections(a, z);
    let (dst, ib, _) = Space::coproduct_injections(b, w);
    let sum_assign = (0..a.len())
        .map(|x| f.apply(x))
        .chain((0..z.len()).map(|x| b.len() + h.apply(x)))
        .collect();
    let g = SpaceMap::new(src.clone(), dst.clone(), sum_assign).expect("sum of short maps");
    let ra = SpaceMap::new(
        src,
        a.clone(),
        (0..a.len()).chain(std::iter::repeat_n(0, z.len())).collect(),
    )
    .expect("infinite cross distances");
    let rb = SpaceMap::new(
        dst,
        b.clone(),
        (0..b.len())
            .chain(std::iter::repeat_n(f.apply(0), w.len()))
            .collect(),
    )
    .expect("infinite cross distances");
    (g, [ia, ra, ib, rb])
}

fn check_m1(s: &mut Sampler, rec: &mut Recorder, case: usize) {
    let a = s.space("a");
    let iso = random::random_iso(s.rng, &a);
    let c = classify(&iso, s.model).expect("model-compatible");
    rec.check(
        "M1",
        case,
        c.is_weq && c.is_cof && c.is_fib,
        "isomorphism outside some class",
        || map_json(&iso),
    );

    for _ in 0..2 {
        let f = s.any_map();
        let b = f.cod().clone();
        let g = if s.rng.gen_bool(0.5) {
            s.weq_from(&b, false)
        } else {
            s.short_map(&b)
        };
        let gf = SpaceMap::compose(&g, &f).expect("composable");
        let w = |m: &SpaceMap| classify(m, s.model).expect("model-compatible").is_weq;
        let (wf, wg, wgf) = (w(&f), w(&g), w(&gf));
        let ok = (!(wf && wg) || wgf) && (!(wf && wgf) || wg) && (!(wg && wgf) || wf);
        rec.check("M1", case, ok, "two out of three fails", || {
            maps_json(&[("f", &f), ("g", &g)])
        });
    }
}

fn check_m2(s: &mut Sampler, rec: &mut Recorder, case: usize) {
    let f = match s.rng.gen_range(0..3) {
        0 => s.any_map(),
        1 => s.fibration_candidate(),
        _ => s.trivial_cofibration(),
    };
    let h = match s.rng.gen_range(0..3) {
        0 => SpaceMap::identity(&s.small_space("z")),
        1 => {
            let z = s.small_space("z");
            random::random_iso(s.rng, &z)
        }
        _ => s.any_map(),
    };
    let (g, [ia, ra, ib, rb]) = retract_of_sum(&f, &h);
    let id_a = SpaceMap::identity(f.dom());
    let id_b = SpaceMap::identity(f.cod());
    let diagram = SpaceMap::compose(&ra, &ia).is_ok_and(|m| m == id_a)
        && SpaceMap::compose(&rb, &ib).is_ok_and(|m| m == id_b)
        && SpaceMap::compose(&g, &ia).ok() == SpaceMap::compose(&ib, &f).ok()
        && SpaceMap::compose(&f, &ra).ok() == SpaceMap::compose(&rb, &g).ok();
    rec.check("M2", case, diagram, "retract diagram does not commute", || {
        maps_json(&[("f", &f), ("h", &h)])
    });
    let cf = classify(&f, s.model).expect("model-compatible");
    let cg = classify(&g, s.model).expect("model-compatible");
    for (class, name) in CLASS_NAMES.iter().enumerate() {
        if class_member(&cg, class) {
            let ok = class_member(&cf, class);
            rec.check(
                "M2",
                case,
                ok,
                &format!("retract of a {name} is not one"),
                || maps_json(&[("f", &f), ("h", &h)]),
            );
        } else {
            rec.skip("M2");
        }
    }
}

/// A random commuting square with the given sides, if one is found quickly.
fn random_square(s: &mut Sampler, left: &SpaceMap, right: &SpaceMap) -> Option<LiftSquare> {
    for _ in 0..4 {
        let top = random::random_short_map(s.rng, left.dom(), right.dom());
        let mut bottoms = ShortMapSearch::new(left.cod(), right.cod());
        for a in 0..left.dom().len() {
            bottoms.fix(left.apply(a), right.apply(top.apply(a)));
        }
        bottoms.shuffle(s.rng);
        if let SearchOutcome::Found(b) = bottoms.first() {
            let bottom = SpaceMap::new(left.cod().clone(), right.cod().clone(), b).ok()?;
            return LiftSquare::new(top, bottom, left.clone(), right.clone()).ok();
        }
    }
    None
}

fn check_m3(s: &mut Sampler, rec: &mut Recorder, case: usize) {
    type Gen = fn(&mut Sampler) -> Option<SpaceMap>;
    let pairs: [(Gen, Gen, &str); 2] = [
        (
            |s| s.confirmed(|s| s.trivial_cofibration(), |c| c.is_trivial_cof),
            |s| s.confirmed(|s| s.fibration_candidate(), |c| c.is_fib),
            "trivial cofibration against fibration",
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
        let Some(sq) = random_square(s, &left, &right) else {
            rec.skip("M3");
            continue;
        };
        let outcome = solve_lift(&sq);
        let ok = matches!(&outcome, LiftOutcome::Found(l) if sq.is_lift(l));
        let reason = match outcome {
            LiftOutcome::Exhausted => format!("{what}: search exhausted"),
            _ => format!("{what}: no lift"),
        };
        rec.check("M3", case, ok, &reason, || {
            serde_json::to_value(SquareDoc::from_square(&sq)).expect("serializable")
        });
    }
}

fn check_factorization(s: &mut Sampler, rec: &mut Recorder, case: usize, axiom: Axiom) {
    let f = s.any_map();
    let name = match axiom {
        Axiom::M4 => "M4",
        Axiom::M5 => "M5",
    };
    let fac = factorize(&f, s.model, axiom).expect("model-compatible");
    let composite = SpaceMap::compose(&fac.second, &fac.first).is_ok_and(|g| g == f);
    let c1 = classify(&fac.first, s.model).expect("model-compatible");
    let c2 = classify(&fac.second, s.model).expect("model-compatible");
    let classes = match axiom {
        Axiom::M4 => c1.is_cof && c2.is_trivial_fib,
        Axiom::M5 => c1.is_trivial_cof && c2.is_fib,
    };
    rec.check(name, case, composite && classes, "factorization fails", || {
        maps_json(&[("f", &f), ("first", &fac.first), ("second", &fac.second)])
    });
}

/// Randomized check of the model axioms; deterministic in `seed`.
pub fn check_axioms(
    m: ModelId,
    seed: u64,
    cases: usize,
    max_objects: usize,
) -> Result<AxiomReport, ModelError> {
    if cases == 0 {
        return Err(ModelError::NoCases);
    }
    let max_objects = max_objects.max(1);
    let mut rec = Recorder::new();
    for case in 0..cases {
        let mut rng = case_rng(seed, case);
        let mut s = Sampler {
            rng: &mut rng,
            model: m,
            max_objects,
        };
        check_m1(&mut s, &mut rec, case);
        check_m2(&mut s, &mut rec, case);
        check_m3(&mut s, &mut rec, case);
        check_factorization(&mut s, &mut rec, case, Axiom::M4);
        check_factorization(&mut s, &mut rec, case, Axiom::M5);
    }
    Ok(AxiomReport {
        kind: REPORT.to_string(),
        model: m.as_str().to_string(),
        seed,
        cases,
        max_objects,
        params: ReportParams::Spaces(generation_params(m.requires_symmetry())),
        results: rec.results(),
        counterexamples: rec.counterexamples,
    })
}

pub(crate) fn generation_params(symmetric: bool) -> GenerationParams {
    GenerationParams {
        weights: random::WEIGHTS
            .iter()
            .map(|&(n, d)| ExtNN::ratio(n, d))
            .collect(),
        zero_edge_odds: format!("{}/{}", random::ZERO_EDGE_ODDS, random::EDGE_ODDS_DENOMINATOR),
        weighted_edge_odds: format!(
            "{}/{}",
            random::WEIGHTED_EDGE_ODDS,
            random::EDGE_ODDS_DENOMINATOR
        ),
        symmetric,
        map_sampling: "rejection sampling, then randomized search".to_string(),
    }
}

/// Shuffles and returns a copy, for tests that want a random order.
pub fn shuffled<T: Clone, R: Rng>(rng: &mut R, items: &[T]) -> Vec<T> {
    let mut v = items.to_vec();
    v.shuffle(rng);
    v
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

    fn abc() -> Space {
        sym(
            &["a", "b", "c"],
            &[&["0", "0", "1"], &["0", "0", "1"], &["1", "1", "0"]],
        )
    }

    #[test]
    fn identity_is_everything() {
        let s = abc();
        for m in ModelId::ALL {
            let c = classify(&SpaceMap::identity(&s), m).unwrap();
            assert!(c.is_weq && c.is_cof && c.is_fib && c.is_trivial_cof && c.is_trivial_fib);
        }
    }

    #[test]
    fn quotient_map_fails_delta() {
        let (_, q) = abc().gaunt_quotient();
        let c = classify(&q, ModelId::Metric).unwrap();
        assert!(c.is_weq && c.is_cof && !c.is_fib);
        assert!(!has_rlp_against(&q, Generator::Delta).unwrap());
        assert!(has_rlp_against(&q, Generator::Gamma).unwrap());
    }

    #[test]
    fn delta_and_gamma_are_metric_trivial_cofibrations() {
        for g in [Generator::Delta, Generator::Gamma] {
            let c = classify(&g.map(), ModelId::Metric).unwrap();
            assert!(c.is_weq && c.is_cof);
        }
    }

    #[test]
    fn identity_left_leg_lifts_by_top() {
        let s = abc();
        let t = sym(&["u", "v"], &[&["0", "1"], &["1", "0"]]);
        let top = SpaceMap::new(s.clone(), t.clone(), vec![0, 0, 1]).unwrap();
        let sq = LiftSquare::new(
            top.clone(),
            top.clone(),
            SpaceMap::identity(&s),
            SpaceMap::identity(&t),
        )
        .unwrap();
        assert_eq!(solve_lift(&sq), LiftOutcome::Found(top));
    }

    #[test]
    fn delta_square_on_indiscernible_points_has_no_lift() {
        let s = abc();
        let top = SpaceMap::new(Space::indiscernible_pair(), s.clone(), vec![0, 1]).unwrap();
        let right = SpaceMap::to_point(&s);
        let sq = LiftSquare::new(
            top,
            SpaceMap::identity(&Space::point()),
            Generator::Delta.map(),
            right,
        )
        .unwrap();
        assert_eq!(solve_lift(&sq), LiftOutcome::NoLift);
    }

    #[test]
    fn square_validation() {
        let s = abc();
        let top = SpaceMap::identity(&s);
        let bad_bottom = SpaceMap::constant(&s, &s, 2);
        assert_eq!(
            LiftSquare::new(top.clone(), bad_bottom, top.clone(), top.clone()),
            Err(ModelError::NotCommuting)
        );
        let p = SpaceMap::identity(&Space::point());
        assert_eq!(
            LiftSquare::new(top.clone(), p, top.clone(), top),
            Err(ModelError::ShapeMismatch)
        );
    }

    #[test]
    fn metric_m5_on_point_into_indiscernible_pair() {
        let f = Generator::Gamma.map();
        let fac = factorize(&f, ModelId::Metric, Axiom::M5).unwrap();
        // (*, a1) and (*, a2): distinct second components are not identified.
        assert_eq!(fac.mid.len(), 2);
        assert_eq!(fac.first.assignment(), &[0]);
        assert_eq!(fac.second.assignment(), &[0, 1]);
        assert!(classify(&fac.second, ModelId::Metric).unwrap().is_fib);
    }

    #[test]
    fn cauchy_m4_sizes() {
        let s = abc();
        let t = sym(&["u", "v"], &[&["0", "1"], &["1", "0"]]);
        let f = SpaceMap::new(s.clone(), t.clone(), vec![0, 0, 1]).unwrap();
        let fac = factorize(&f, ModelId::Cauchy, Axiom::M4).unwrap();
        assert_eq!(fac.mid.len(), 5);
        assert!(fac.second.is_fully_faithful() && fac.second.is_surjective());
        assert_eq!(SpaceMap::compose(&fac.second, &fac.first).unwrap(), f);
    }

    #[test]
    fn identity_factorizations_are_isomorphisms() {
        let s = abc();
        let id = SpaceMap::identity(&s);
        for m in ModelId::ALL {
            for ax in [Axiom::M4, Axiom::M5] {
                let fac = factorize(&id, m, ax).unwrap();
                if m == ModelId::Cauchy && ax == Axiom::M4 {
                    // The disjoint-union construction doubles the objects.
                    assert!(fac.second.is_fully_faithful());
                    continue;
                }
                assert!(fac.first.is_isomorphism() && fac.second.is_isomorphism());
            }
        }
    }

    #[test]
    fn cauchy_models_reject_asymmetric_maps() {
        let s = Space::new(
            vec!["a".into(), "b".into()],
            vec![vec![v("0"), v("1")], vec![v("2"), v("0")]],
        )
        .unwrap();
        let id = SpaceMap::identity(&s);
        assert_eq!(classify(&id, ModelId::Cauchy), Err(ModelError::NotSymmetric));
        assert!(classify(&id, ModelId::Metric).is_ok());
    }

    #[test]
    fn report_is_deterministic() {
        let a = check_axioms(ModelId::Metric, 9, 3, 4).unwrap();
        let b = check_axioms(ModelId::Metric, 9, 3, 4).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert_eq!(check_axioms(ModelId::Metric, 9, 0, 4), Err(ModelError::NoCases));
    }
}
