//! JSON documents exchanged by the command line.
//!
//! Every document carries a `type` tag. Maps are keyed by object name in sorted
//! order so that emitted text is deterministic.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cauchy::{CauchyError, EPSeq};
use crate::extnum::ExtNN;
use crate::karoubi::{CatError, FinCat, Functor, FunctorFlags, KaroubianClassification};
use crate::maps::{MapError, SpaceMap};
use crate::model::{Classification, LiftSquare, ModelError};
use crate::presheaf::{Presheaf, PresheafError};
use crate::space::{Space, SpaceError, WeightedGraph};

pub const SPACE: &str = "rplus-space";
pub const GRAPH: &str = "rplus-graph";
pub const MAP: &str = "rplus-map";
pub const PRESHEAF: &str = "rplus-presheaf";
pub const EPSEQ: &str = "rplus-epseq";
pub const SQUARE: &str = "rplus-square";
pub const REPORT: &str = "axiom-report";
pub const FINCAT: &str = "fincat";
pub const FUNCTOR: &str = "functor";
pub const CAT_SQUARE: &str = "cat-square";
pub const VALIDATION: &str = "validation";
pub const DISTANCE: &str = "presheaf-distance";
pub const DUAL: &str = "dual-verdict";
pub const CLASSIFICATION: &str = "classification";
pub const FACTORIZATION: &str = "factorization";
pub const LIFT: &str = "lift-result";
pub const RLP: &str = "rlp-result";
pub const IDEMPOTENTS: &str = "idempotents";
pub const CAT_CLASSIFICATION: &str = "karoubian-classification";
pub const CAT_FACTORIZATION: &str = "cat-factorization";
pub const CAT_LIFT: &str = "cat-lift-result";
pub const ERROR: &str = "error";

#[derive(Debug, Error)]
pub enum DocError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("expected a `{expected}` document, found `{found}`")]
    WrongType { expected: String, found: String },
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Presheaf(#[from] PresheafError),
    #[error(transparent)]
    Cauchy(#[from] CauchyError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Cat(#[from] CatError),
}

/// Reads the `type` tag of a JSON document.
pub fn doc_type(text: &str) -> Result<String, DocError> {
    let v: serde_json::Value =
        serde_json::from_str(text).map_err(|e| DocError::Json(e.to_string()))?;
    v.get("type")
        .and_then(|t| t.as_str())
        .map(str::to_string)
        .ok_or_else(|| DocError::Json("missing `type` field".to_string()))
}

/// Documents with a fixed `type` tag.
pub trait Tagged: Serialize + DeserializeOwned {
    const TAG: &'static str;
    fn tag(&self) -> &str;
}

/// Parses a document and checks its tag.
pub fn parse<T: Tagged>(text: &str) -> Result<T, DocError> {
    let found = doc_type(text)?;
    if found != T::TAG {
        return Err(DocError::WrongType {
            expected: T::TAG.to_string(),
            found,
        });
    }
    serde_json::from_str(text).map_err(|e| DocError::Json(e.to_string()))
}

/// Checks the tag of an already-deserialized nested document.
fn check_tag<T: Tagged>(doc: &T) -> Result<(), DocError> {
    if doc.tag() != T::TAG {
        return Err(DocError::WrongType {
            expected: T::TAG.to_string(),
            found: doc.tag().to_string(),
        });
    }
    Ok(())
}

/// Pretty JSON with a trailing newline.
pub fn emit<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

macro_rules! tagged {
    ($t:ty, $tag:expr) => {
        impl Tagged for $t {
            const TAG: &'static str = $tag;
            fn tag(&self) -> &str {
                &self.kind
            }
        }
    };
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceDoc {
    #[serde(rename = "type")]
    pub kind: String,
    pub objects: Vec<String>,
    pub dist: Vec<Vec<ExtNN>>,
}
tagged!(SpaceDoc, SPACE);

impl SpaceDoc {
    pub fn from_space(s: &Space) -> SpaceDoc {
        SpaceDoc {
            kind: SPACE.to_string(),
            objects: s.objects().to_vec(),
            dist: s.matrix().to_vec(),
        }
    }

    pub fn to_space(&self) -> Result<Space, DocError> {
        check_tag(self)?;
        Ok(Space::new(self.objects.clone(), self.dist.clone())?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub src: String,
    pub dst: String,
    pub w: ExtNN,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDoc {
    #[serde(rename = "type")]
    pub kind: String,
    pub objects: Vec<String>,
    pub edges: Vec<EdgeDoc>,
}
tagged!(GraphDoc, GRAPH);

impl GraphDoc {
    pub fn from_graph(g: &WeightedGraph) -> GraphDoc {
        GraphDoc {
            kind: GRAPH.to_string(),
            objects: g.objects().to_vec(),
            edges: g
                .edges()
                .iter()
                .map(|(s, d, w)| EdgeDoc {
                    src: g.objects()[*s].clone(),
                    dst: g.objects()[*d].clone(),
                    w: w.clone(),
                })
                .collect(),
        }
    }

    pub fn to_graph(&self) -> Result<WeightedGraph, DocError> {
        check_tag(self)?;
        let mut g = WeightedGraph::new(self.objects.clone())?;
        for e in &self.edges {
            g.add_named_edge(&e.src, &e.dst, e.w.clone())?;
        }
        Ok(g)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapDoc {
    #[serde(rename = "type")]
    pub kind: String,
    pub dom: SpaceDoc,
    pub cod: SpaceDoc,
    pub assign: BTreeMap<String, String>,
}
tagged!(MapDoc, MAP);

impl MapDoc {
    pub fn from_map(f: &SpaceMap) -> MapDoc {
        MapDoc {
            kind: MAP.to_string(),
            dom: SpaceDoc::from_space(f.dom()),
            cod: SpaceDoc::from_space(f.cod()),
            assign: f.named_assignment(),
        }
    }

    pub fn to_map(&self) -> Result<SpaceMap, DocError> {
        check_tag(self)?;
        Ok(SpaceMap::from_names(
            self.dom.to_space()?,
            self.cod.to_space()?,
            &self.assign,
        )?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresheafDoc {
    #[serde(rename = "type")]
    pub kind: String,
    pub base: SpaceDoc,
    pub values: BTreeMap<String, ExtNN>,
}
tagged!(PresheafDoc, PRESHEAF);

impl PresheafDoc {
    pub fn from_presheaf(p: &Presheaf) -> PresheafDoc {
        PresheafDoc {
            kind: PRESHEAF.to_string(),
            base: SpaceDoc::from_space(p.base()),
            values: p.named_values(),
        }
    }

    pub fn to_presheaf(&self) -> Result<Presheaf, DocError> {
        check_tag(self)?;
        Ok(Presheaf::from_names(self.base.to_space()?, &self.values)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpseqDoc {
    #[serde(rename = "type")]
    pub kind: String,
    pub space: SpaceDoc,
    pub prefix: Vec<String>,
    pub cycle: Vec<String>,
}
tagged!(EpseqDoc, EPSEQ);

impl EpseqDoc {
    pub fn from_epseq(s: &EPSeq) -> EpseqDoc {
        let name = |x: &usize| s.space().name(*x).to_string();
        EpseqDoc {
            kind: EPSEQ.to_string(),
            space: SpaceDoc::from_space(s.space()),
            prefix: s.prefix().iter().map(name).collect(),
            cycle: s.cycle().iter().map(name).collect(),
        }
    }

    pub fn to_epseq(&self) -> Result<EPSeq, DocError> {
        check_tag(self)?;
        Ok(EPSeq::from_names(
            self.space.to_space()?,
            &self.prefix,
            &self.cycle,
        )?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareDoc {
    #[serde(rename = "type")]
    pub kind: String,
    pub top: MapDoc,
    pub bottom: MapDoc,
    pub left: MapDoc,
    pub right: MapDoc,
}
tagged!(SquareDoc, SQUARE);

impl SquareDoc {
    pub fn from_square(sq: &LiftSquare) -> SquareDoc {
        SquareDoc {
            kind: SQUARE.to_string(),
            top: MapDoc::from_map(&sq.top),
            bottom: MapDoc::from_map(&sq.bottom),
            left: MapDoc::from_map(&sq.left),
            right: MapDoc::from_map(&sq.right),
        }
    }

    pub fn to_square(&self) -> Result<LiftSquare, DocError> {
        check_tag(self)?;
        Ok(LiftSquare::new(
            self.top.to_map()?,
            self.bottom.to_map()?,
            self.left.to_map()?,
            self.right.to_map()?,
        )?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismDoc {
    pub name: String,
    pub src: String,
    pub dst: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatDoc {
    #[serde(rename = "type")]
    pub kind: String,
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismDoc>,
    pub identity: BTreeMap<String, String>,
    /// Rows `[g, f, g∘f]`.
    pub compose: Vec<[String; 3]>,
}
tagged!(CatDoc, FINCAT);

impl CatDoc {
    pub fn from_cat(c: &FinCat) -> CatDoc {
        let mut compose = Vec::new();
        for g in 0..c.morphism_count() {
            for f in 0..c.morphism_count() {
                if let Some(gf) = c.compose(g, f) {
                    compose.push([
                        c.morphism_name(g).to_string(),
                        c.morphism_name(f).to_string(),
                        c.morphism_name(gf).to_string(),
                    ]);
                }
            }
        }
        CatDoc {
            kind: FINCAT.to_string(),
            objects: c.objects().to_vec(),
            morphisms: (0..c.morphism_count())
                .map(|m| MorphismDoc {
                    name: c.morphism_name(m).to_string(),
                    src: c.object_name(c.src(m)).to_string(),
                    dst: c.object_name(c.dst(m)).to_string(),
                })
                .collect(),
            identity: (0..c.object_count())
                .map(|x| {
                    (
                        c.object_name(x).to_string(),
                        c.morphism_name(c.identity(x)).to_string(),
                    )
                })
                .collect(),
            compose,
        }
    }

    pub fn to_cat(&self) -> Result<FinCat, DocError> {
        check_tag(self)?;
        let morphisms: Vec<(String, String, String)> = self
            .morphisms
            .iter()
            .map(|m| (m.name.clone(), m.src.clone(), m.dst.clone()))
            .collect();
        let compose: Vec<(String, String, String)> = self
            .compose
            .iter()
            .map(|[g, f, gf]| (g.clone(), f.clone(), gf.clone()))
            .collect();
        Ok(FinCat::from_names(
            self.objects.clone(),
            morphisms,
            &self.identity,
            &compose,
        )?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctorDoc {
    #[serde(rename = "type")]
    pub kind: String,
    pub dom: CatDoc,
    pub cod: CatDoc,
    pub objects: BTreeMap<String, String>,
    pub morphisms: BTreeMap<String, String>,
}
tagged!(FunctorDoc, FUNCTOR);

impl FunctorDoc {
    pub fn from_functor(f: &Functor) -> FunctorDoc {
        let (dom, cod) = (f.dom(), f.cod());
        FunctorDoc {
            kind: FUNCTOR.to_string(),
            dom: CatDoc::from_cat(dom),
            cod: CatDoc::from_cat(cod),
            objects: (0..dom.object_count())
                .map(|x| {
                    (
                        dom.object_name(x).to_string(),
                        cod.object_name(f.on_object(x)).to_string(),
                    )
                })
                .collect(),
            morphisms: (0..dom.morphism_count())
                .map(|m| {
                    (
                        dom.morphism_name(m).to_string(),
                        cod.morphism_name(f.on_morphism(m)).to_string(),
                    )
                })
                .collect(),
        }
    }

    pub fn to_functor(&self) -> Result<Functor, DocError> {
        check_tag(self)?;
        Ok(Functor::from_names(
            self.dom.to_cat()?,
            self.cod.to_cat()?,
            &self.objects,
            &self.morphisms,
        )?)
    }
}

/// A commuting square of functors; lifts go from `left.cod` to `right.dom`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatSquareDoc {
    #[serde(rename = "type")]
    pub kind: String,
    pub top: FunctorDoc,
    pub bottom: FunctorDoc,
    pub left: FunctorDoc,
    pub right: FunctorDoc,
}
tagged!(CatSquareDoc, CAT_SQUARE);

impl CatSquareDoc {
    pub fn from_square(sq: &crate::karoubi::CatSquare) -> CatSquareDoc {
        CatSquareDoc {
            kind: CAT_SQUARE.to_string(),
            top: FunctorDoc::from_functor(&sq.top),
            bottom: FunctorDoc::from_functor(&sq.bottom),
            left: FunctorDoc::from_functor(&sq.left),
            right: FunctorDoc::from_functor(&sq.right),
        }
    }

    pub fn to_square(&self) -> Result<crate::karoubi::CatSquare, DocError> {
        check_tag(self)?;
        Ok(crate::karoubi::CatSquare::new(
            self.top.to_functor()?,
            self.bottom.to_functor()?,
            self.left.to_functor()?,
            self.right.to_functor()?,
        )?)
    }
}

/// Outcome of `validate` on a document of type `document`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationDoc {
    #[serde(rename = "type")]
    pub kind: String,
    pub document: String,
    pub valid: bool,
    pub error: Option<String>,
}
tagged!(ValidationDoc, VALIDATION);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceDoc {
    #[serde(rename = "type")]
    pub kind: String,
    pub distance: ExtNN,
}
tagged!(DistanceDoc, DISTANCE);

/// The candidate dual and the infimum of `f + g`, zero exactly when a dual exists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualDoc {
    #[serde(rename = "type")]
    pub kind: String,
    pub has_dual: bool,
    pub dual: BTreeMap<String, ExtNN>,
    pub min_sum: ExtNN,
}
tagged!(DualDoc, DUAL);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationDoc {
    #[serde(rename = "type")]
    pub kind: String,
    pub model: String,
    #[serde(flatten)]
    pub classes: Classification,
}
tagged!(ClassificationDoc, CLASSIFICATION);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizationDoc {
    #[serde(rename = "type")]
    pub kind: String,
    pub model: String,
    pub axiom: String,
    pub first: MapDoc,
    pub mid: SpaceDoc,
    pub second: MapDoc,
}
tagged!(FactorizationDoc, FACTORIZATION);

/// `status` is `found`, `none` or `exhausted`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftDoc {
    #[serde(rename = "type")]
    pub kind: String,
    pub status: String,
    pub lift: Option<MapDoc>,
}
tagged!(LiftDoc, LIFT);

/// Right lifting property of a map against a generator, with a square that
/// has no lift when it fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RlpDoc {
    #[serde(rename = "type")]
    pub kind: String,
    pub generator: String,
    pub has_rlp: bool,
    pub witness: Option<SquareDoc>,
}
tagged!(RlpDoc, RLP);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingDoc {
    pub object: String,
    pub retraction: String,
    pub section: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdempotentDoc {
    pub morphism: String,
    pub object: String,
    pub splitting: Option<SplittingDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdempotentsDoc {
    #[serde(rename = "type")]
    pub kind: String,
    pub idempotents: Vec<IdempotentDoc>,
}
tagged!(IdempotentsDoc, IDEMPOTENTS);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatClassificationDoc {
    #[serde(rename = "type")]
    pub kind: String,
    #[serde(flatten)]
    pub flags: FunctorFlags,
    #[serde(flatten)]
    pub classes: KaroubianClassification,
}
tagged!(CatClassificationDoc, CAT_CLASSIFICATION);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatFactorizationDoc {
    #[serde(rename = "type")]
    pub kind: String,
    pub axiom: String,
    pub first: FunctorDoc,
    pub mid: CatDoc,
    pub second: FunctorDoc,
}
tagged!(CatFactorizationDoc, CAT_FACTORIZATION);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatLiftDoc {
    #[serde(rename = "type")]
    pub kind: String,
    pub status: String,
    pub lift: Option<FunctorDoc>,
}
tagged!(CatLiftDoc, CAT_LIFT);

/// Diagnostic written to standard error for malformed input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorDoc {
    #[serde(rename = "type")]
    pub kind: String,
    pub error: String,
    pub message: String,
}
tagged!(ErrorDoc, ERROR);
