//! The `lawvere` command line.
//!
//! Every verb reads JSON documents from files and writes one document to
//! standard output. Exit status is `0` on success or when the property holds,
//! `1` when it fails or no lift exists, and `2` on malformed input, with an
//! `error` document on standard error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::doc::{
    self, CatClassificationDoc, CatDoc, CatFactorizationDoc, CatLiftDoc, CatSquareDoc,
    ClassificationDoc, DistanceDoc, DocError, DualDoc, EpseqDoc, ErrorDoc, FactorizationDoc,
    FunctorDoc, GraphDoc, IdempotentDoc, IdempotentsDoc, LiftDoc, MapDoc, PresheafDoc, RlpDoc,
    SpaceDoc, SplittingDoc, SquareDoc, Tagged, ValidationDoc,
};
use crate::karoubi::{
    self, classify_karoubian, envelope, factorize_karoubian_m4, factorize_karoubian_m5,
    functor_flags, idempotents, solve_cat_lift, split_idempotent, FunctorSearchOutcome,
};
use crate::model::{
    check_axioms, classify, factorize, failing_square, solve_lift, Axiom, AxiomReport,
    Generator, LiftOutcome, ModelError, ModelId,
};
use crate::presheaf::{has_dual, presheaf_dist};
use crate::space::closure;

#[derive(Parser, Debug)]
#[command(
    name = "lawvere",
    version,
    about = "Exact computations on finite Lawvere metric spaces and finite categories"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check any document against the laws of its type.
    Validate { file: PathBuf },
    /// Metric closure of a weighted graph.
    Close { graph: PathBuf },
    /// Quotient map onto the gaunt quotient of a space.
    Quotient { space: PathBuf },
    /// Opposite space.
    Opposite { space: PathBuf },
    /// Distance between two presheaves on the same space.
    PresheafDist { first: PathBuf, second: PathBuf },
    /// Whether a presheaf has a dual.
    HasDual { presheaf: PathBuf },
    /// Weak equivalence, cofibration and fibration flags of a map.
    Classify {
        #[arg(long, value_enum)]
        model: SpaceModel,
        map: PathBuf,
    },
    /// Factor a map as in axiom M4 or M5.
    Factorize {
        #[arg(long, value_enum)]
        model: SpaceModel,
        #[arg(long, value_enum)]
        axiom: AxiomArg,
        map: PathBuf,
    },
    /// Solve a lifting square, or test a map against a generating map.
    Lift {
        /// Test the map in FILE against this generator instead of reading a square.
        #[arg(long, value_enum)]
        against: Option<GeneratorArg>,
        /// Depth of the truncated sequence used by `--against iota-seq`.
        #[arg(long, default_value_t = 3)]
        seqbar_depth: usize,
        file: PathBuf,
    },
    /// Finite categories and the Karoubian model structure.
    Karoubi {
        #[command(subcommand)]
        command: KaroubiCommand,
    },
    /// Randomized check of the model axioms M1 to M5.
    Axioms {
        #[arg(long, value_enum)]
        model: ReportModel,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        cases: usize,
        /// Defaults to 6 for spaces and 3 for categories.
        #[arg(long)]
        max_objects: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum KaroubiCommand {
    /// Inclusion of a category into its Karoubi envelope.
    Envelope { category: PathBuf },
    /// Idempotents of a category with a splitting where one exists.
    Idempotents { category: PathBuf },
    /// Flags and Karoubian classes of a functor.
    Classify { functor: PathBuf },
    /// Factor a functor as in axiom M4 or M5.
    Factorize {
        #[arg(long, value_enum, default_value = "m5")]
        axiom: AxiomArg,
        functor: PathBuf,
    },
    /// Solve a lifting square of functors.
    Lift { square: PathBuf },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SpaceModel {
    Metric,
    Cauchy,
    #[value(name = "cauchy_metric", alias = "cauchy-metric")]
    CauchyMetric,
}

impl From<SpaceModel> for ModelId {
    fn from(m: SpaceModel) -> ModelId {
        match m {
            SpaceModel::Metric => ModelId::Metric,
            SpaceModel::Cauchy => ModelId::Cauchy,
            SpaceModel::CauchyMetric => ModelId::CauchyMetric,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ReportModel {
    Metric,
    Cauchy,
    #[value(name = "cauchy_metric", alias = "cauchy-metric")]
    CauchyMetric,
    Karoubian,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AxiomArg {
    #[value(alias = "M4")]
    M4,
    #[value(alias = "M5")]
    M5,
}

impl From<AxiomArg> for Axiom {
    fn from(a: AxiomArg) -> Axiom {
        match a {
            AxiomArg::M4 => Axiom::M4,
            AxiomArg::M5 => Axiom::M5,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GeneratorArg {
    Delta,
    Gamma,
    #[value(name = "iota-seq", alias = "iota_seq")]
    IotaSeq,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("cannot read `{path}`: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Doc(#[from] DocError),
    #[error("--seqbar-depth must be at least 1")]
    Depth,
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> CliError {
        CliError::Doc(DocError::Model(e))
    }
}

impl From<karoubi::CatError> for CliError {
    fn from(e: karoubi::CatError) -> CliError {
        CliError::Doc(DocError::Cat(e))
    }
}

impl From<crate::presheaf::PresheafError> for CliError {
    fn from(e: crate::presheaf::PresheafError) -> CliError {
        CliError::Doc(DocError::Presheaf(e))
    }
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io",
            CliError::Doc(DocError::Json(_)) => "json",
            CliError::Doc(DocError::WrongType { .. }) => "wrong-type",
            CliError::Doc(DocError::Space(_)) => "space",
            CliError::Doc(DocError::Map(_)) => "map",
            CliError::Doc(DocError::Presheaf(_)) => "presheaf",
            CliError::Doc(DocError::Cauchy(_)) => "sequence",
            CliError::Doc(DocError::Model(_)) => "model",
            CliError::Doc(DocError::Cat(_)) => "category",
            CliError::Depth => "usage",
        }
    }
}

/// A document for standard output and the exit status that goes with it.
struct Output {
    text: String,
    status: i32,
}

fn out<T: Serialize>(doc: &T, holds: bool) -> Output {
    Output {
        text: doc::emit(doc),
        status: if holds { 0 } else { 1 },
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn load<T: Tagged>(path: &Path) -> Result<T, CliError> {
    Ok(doc::parse(&read(path)?)?)
}

fn diagnostic(stderr: &mut dyn Write, error: &str, message: String) {
    let d = ErrorDoc {
        kind: doc::ERROR.to_string(),
        error: error.to_string(),
        message,
    };
    let _ = stderr.write_all(doc::emit(&d).as_bytes());
}

/// Runs the command line on `args` (program name first) and returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            diagnostic(stderr, "usage", e.to_string().trim_end().to_string());
            return 2;
        }
    };
    match execute(cli.command) {
        Ok(o) => {
            let _ = stdout.write_all(o.text.as_bytes());
            o.status
        }
        Err(e) => {
            diagnostic(stderr, e.kind(), e.to_string());
            2
        }
    }
}

fn execute(command: Command) -> Result<Output, CliError> {
    match command {
        Command::Validate { file } => validate(&read(&file)?),
        Command::Close { graph } => {
            let g = load::<GraphDoc>(&graph)?.to_graph()?;
            Ok(out(&SpaceDoc::from_space(&closure(&g)), true))
        }
        Command::Quotient { space } => {
            let s = load::<SpaceDoc>(&space)?.to_space()?;
            Ok(out(&MapDoc::from_map(&s.gaunt_quotient().1), true))
        }
        Command::Opposite { space } => {
            let s = load::<SpaceDoc>(&space)?.to_space()?;
            Ok(out(&SpaceDoc::from_space(&s.opposite()), true))
        }
        Command::PresheafDist { first, second } => {
            let f = load::<PresheafDoc>(&first)?.to_presheaf()?;
            let g = load::<PresheafDoc>(&second)?.to_presheaf()?;
            let d = DistanceDoc {
                kind: doc::DISTANCE.to_string(),
                distance: presheaf_dist(&f, &g)?,
            };
            Ok(out(&d, true))
        }
        Command::HasDual { presheaf } => {
            let f = load::<PresheafDoc>(&presheaf)?.to_presheaf()?;
            let v = has_dual(&f);
            let base = f.base();
            let d = DualDoc {
                kind: doc::DUAL.to_string(),
                has_dual: v.has_dual,
                dual: (0..base.len())
                    .map(|z| (base.name(z).to_string(), v.witness[z].clone()))
                    .collect(),
                min_sum: v.min_sum,
            };
            Ok(out(&d, v.has_dual))
        }
        Command::Classify { model, map } => {
            let f = load::<MapDoc>(&map)?.to_map()?;
            let m = ModelId::from(model);
            let d = ClassificationDoc {
                kind: doc::CLASSIFICATION.to_string(),
                model: m.as_str().to_string(),
                classes: classify(&f, m)?,
            };
            Ok(out(&d, true))
        }
        Command::Factorize { model, axiom, map } => {
            let f = load::<MapDoc>(&map)?.to_map()?;
            let (m, a) = (ModelId::from(model), Axiom::from(axiom));
            let fac = factorize(&f, m, a)?;
            let d = FactorizationDoc {
                kind: doc::FACTORIZATION.to_string(),
                model: m.as_str().to_string(),
                axiom: axiom_name(a).to_string(),
                first: MapDoc::from_map(&fac.first),
                mid: SpaceDoc::from_space(&fac.mid),
                second: MapDoc::from_map(&fac.second),
            };
            Ok(out(&d, true))
        }
        Command::Lift {
            against: None,
            file,
            ..
        } => {
            let sq = load::<SquareDoc>(&file)?.to_square()?;
            let (status, lift) = match solve_lift(&sq) {
                LiftOutcome::Found(l) => ("found", Some(MapDoc::from_map(&l))),
                LiftOutcome::NoLift => ("none", None),
                LiftOutcome::Exhausted => ("exhausted", None),
            };
            let d = LiftDoc {
                kind: doc::LIFT.to_string(),
                status: status.to_string(),
                lift,
            };
            Ok(out(&d, status == "found"))
        }
        Command::Lift {
            against: Some(g),
            seqbar_depth,
            file,
        } => {
            if seqbar_depth == 0 {
                return Err(CliError::Depth);
            }
            let f = load::<MapDoc>(&file)?.to_map()?;
            let (generator, name) = match g {
                GeneratorArg::Delta => (Generator::Delta, "delta".to_string()),
                GeneratorArg::Gamma => (Generator::Gamma, "gamma".to_string()),
                GeneratorArg::IotaSeq => (
                    Generator::IotaSeq(seqbar_depth),
                    format!("iota-seq:{seqbar_depth}"),
                ),
            };
            let witness = failing_square(&f, generator)?;
            let d = RlpDoc {
                kind: doc::RLP.to_string(),
                generator: name,
                has_rlp: witness.is_none(),
                witness: witness.as_ref().map(SquareDoc::from_square),
            };
            Ok(out(&d, witness.is_none()))
        }
        Command::Karoubi { command } => karoubi_verb(command),
        Command::Axioms {
            model,
            seed,
            cases,
            max_objects,
        } => {
            let report: AxiomReport = match model {
                ReportModel::Karoubian => {
                    karoubi::check_karoubian_axioms(seed, cases, max_objects.unwrap_or(3))?
                }
                other => {
                    let m = match other {
                        ReportModel::Metric => ModelId::Metric,
                        ReportModel::Cauchy => ModelId::Cauchy,
                        _ => ModelId::CauchyMetric,
                    };
                    check_axioms(m, seed, cases, max_objects.unwrap_or(6))?
                }
            };
            let holds = report.all_pass();
            Ok(out(&report, holds))
        }
    }
}

fn axiom_name(a: Axiom) -> &'static str {
    match a {
        Axiom::M4 => "M4",
        Axiom::M5 => "M5",
    }
}

fn karoubi_verb(command: KaroubiCommand) -> Result<Output, CliError> {
    match command {
        KaroubiCommand::Envelope { category } => {
            let c = load::<CatDoc>(&category)?.to_cat()?;
            Ok(out(&FunctorDoc::from_functor(&envelope(&c).inclusion), true))
        }
        KaroubiCommand::Idempotents { category } => {
            let c = load::<CatDoc>(&category)?.to_cat()?;
            let mut entries = Vec::new();
            for e in idempotents(&c) {
                let splitting = split_idempotent(&c, e)?.map(|s| SplittingDoc {
                    object: c.object_name(s.object).to_string(),
                    retraction: c.morphism_name(s.retraction).to_string(),
                    section: c.morphism_name(s.section).to_string(),
                });
                entries.push(IdempotentDoc {
                    morphism: c.morphism_name(e).to_string(),
                    object: c.object_name(c.src(e)).to_string(),
                    splitting,
                });
            }
            let d = IdempotentsDoc {
                kind: doc::IDEMPOTENTS.to_string(),
                idempotents: entries,
            };
            Ok(out(&d, true))
        }
        KaroubiCommand::Classify { functor } => {
            let f = load::<FunctorDoc>(&functor)?.to_functor()?;
            let d = CatClassificationDoc {
                kind: doc::CAT_CLASSIFICATION.to_string(),
                flags: functor_flags(&f),
                classes: classify_karoubian(&f),
            };
            Ok(out(&d, true))
        }
        KaroubiCommand::Factorize { axiom, functor } => {
            let f = load::<FunctorDoc>(&functor)?.to_functor()?;
            let a = Axiom::from(axiom);
            let fac = match a {
                Axiom::M4 => factorize_karoubian_m4(&f),
                Axiom::M5 => factorize_karoubian_m5(&f),
            };
            let d = CatFactorizationDoc {
                kind: doc::CAT_FACTORIZATION.to_string(),
                axiom: axiom_name(a).to_string(),
                first: FunctorDoc::from_functor(&fac.first),
                mid: CatDoc::from_cat(&fac.mid),
                second: FunctorDoc::from_functor(&fac.second),
            };
            Ok(out(&d, true))
        }
        KaroubiCommand::Lift { square } => {
            let sq = load::<CatSquareDoc>(&square)?.to_square()?;
            let (status, lift) = match solve_cat_lift(&sq) {
                FunctorSearchOutcome::Found(l) => ("found", Some(FunctorDoc::from_functor(&l))),
                FunctorSearchOutcome::NoneExists => ("none", None),
                FunctorSearchOutcome::Exhausted => ("exhausted", None),
            };
            let d = CatLiftDoc {
                kind: doc::CAT_LIFT.to_string(),
                status: status.to_string(),
                lift,
            };
            Ok(out(&d, status == "found"))
        }
    }
}

fn no_laws<T>(_: &T) -> Result<(), DocError> {
    Ok(())
}

/// Parses a document by its tag and checks its laws.
///
/// Unreadable JSON and unknown tags are malformed input; documents that parse
/// but break a law are reported with `valid: false`.
fn validate(text: &str) -> Result<Output, CliError> {
    let tag = doc::doc_type(text)?;
    fn check<T: Tagged>(text: &str, laws: impl FnOnce(&T) -> Result<(), DocError>) -> Result<Option<String>, CliError> {
        let d: T = doc::parse(text)?;
        Ok(laws(&d).err().map(|e| e.to_string()))
    }
    let error = match tag.as_str() {
        doc::SPACE => check::<SpaceDoc>(text, |d| d.to_space().map(drop))?,
        doc::GRAPH => check::<GraphDoc>(text, |d| d.to_graph().map(drop))?,
        doc::MAP => check::<MapDoc>(text, |d| d.to_map().map(drop))?,
        doc::PRESHEAF => check::<PresheafDoc>(text, |d| d.to_presheaf().map(drop))?,
        doc::EPSEQ => check::<EpseqDoc>(text, |d| d.to_epseq().map(drop))?,
        doc::SQUARE => check::<SquareDoc>(text, |d| d.to_square().map(drop))?,
        doc::FINCAT => check::<CatDoc>(text, |d| d.to_cat().map(drop))?,
        doc::FUNCTOR => check::<FunctorDoc>(text, |d| d.to_functor().map(drop))?,
        doc::CAT_SQUARE => check::<CatSquareDoc>(text, |d| d.to_square().map(drop))?,
        doc::REPORT => check::<AxiomReport>(text, no_laws)?,
        doc::VALIDATION => check::<ValidationDoc>(text, no_laws)?,
        doc::DISTANCE => check::<DistanceDoc>(text, no_laws)?,
        doc::DUAL => check::<DualDoc>(text, no_laws)?,
        doc::CLASSIFICATION => check::<ClassificationDoc>(text, no_laws)?,
        doc::FACTORIZATION => check::<FactorizationDoc>(text, |d| {
            d.first.to_map()?;
            d.mid.to_space()?;
            d.second.to_map().map(drop)
        })?,
        doc::LIFT => check::<LiftDoc>(text, no_laws)?,
        doc::RLP => check::<RlpDoc>(text, no_laws)?,
        doc::IDEMPOTENTS => check::<IdempotentsDoc>(text, no_laws)?,
        doc::CAT_CLASSIFICATION => check::<CatClassificationDoc>(text, no_laws)?,
        doc::CAT_FACTORIZATION => check::<CatFactorizationDoc>(text, |d| {
            d.first.to_functor()?;
            d.mid.to_cat()?;
            d.second.to_functor().map(drop)
        })?,
        doc::CAT_LIFT => check::<CatLiftDoc>(text, no_laws)?,
        doc::ERROR => check::<ErrorDoc>(text, no_laws)?,
        other => {
            return Err(CliError::Doc(DocError::Json(format!(
                "unknown document type `{other}`"
            ))))
        }
    };
    let d = ValidationDoc {
        kind: doc::VALIDATION.to_string(),
        document: tag,
        valid: error.is_none(),
        error: error.clone(),
    };
    Ok(out(&d, error.is_none()))
}

