//! JSON surface and cluster files, MMP reports, and Graphviz dual graphs.
//!
//! Rationals are written as JSON integers when integral and as `"a/b"`
//! strings otherwise; both forms are accepted on input.

use std::fmt::{self, Write as _};

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::citation::Citation;
use crate::error::Error as ModelError;
use crate::lattice::{GramMatrix, QVec};
use crate::mmp::{MmpMode, MmpOutcome, MmpRun};
use crate::positivity::{KappaVerdict, SemiampleVerdict};
use crate::rational::{self, Rational};
use crate::singularities::{BoundaryBranch, ClusterCurve, DiscrepancyReport, ExceptionalCluster};
use crate::surface::{BoundaryDivisor, CurveRecord, FieldMode, LogSurface, NsLattice};

#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("malformed input: {0}")]
    Malformed(String),
}

impl From<serde_json::Error> for FileError {
    fn from(e: serde_json::Error) -> Self {
        let message = e.to_string();
        let message = match message.rfind(" at line ") {
            Some(k) => message[..k].to_string(),
            None => message,
        };
        FileError::Parse { line: e.line(), column: e.column(), message }
    }
}

impl From<ModelError> for FileError {
    fn from(e: ModelError) -> Self {
        FileError::Malformed(e.to_string())
    }
}

/// A rational in file form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatText(pub Rational);

impl Serialize for RatText {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        if self.0.is_integer() {
            if let Ok(n) = i64::try_from(self.0.to_integer()) {
                return ser.serialize_i64(n);
            }
        }
        ser.serialize_str(&rational::format(&self.0))
    }
}

impl<'de> Deserialize<'de> for RatText {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = RatText;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or a string \"a/b\"")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<RatText, E> {
                Ok(RatText(rational::int(v)))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<RatText, E> {
                i64::try_from(v)
                    .map(|v| RatText(rational::int(v)))
                    .map_err(|_| E::custom("integer out of range"))
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<RatText, E> {
                Err(E::custom(format!("{v} is a float; write rationals as \"a/b\"")))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<RatText, E> {
                rational::parse(v)
                    .map(RatText)
                    .ok_or_else(|| E::custom(format!("{v:?} is not a rational")))
            }
        }
        de.deserialize_any(V)
    }
}

fn rats(v: &[Rational]) -> Vec<RatText> {
    v.iter().cloned().map(RatText).collect()
}

fn unrat(v: Vec<RatText>) -> Vec<Rational> {
    v.into_iter().map(|r| r.0).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldDoc {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<u64>,
    #[serde(default)]
    fbar: bool,
}

impl FieldDoc {
    fn from_mode(m: &FieldMode) -> Self {
        match *m {
            FieldMode::Char0 => FieldDoc { kind: "char0".into(), p: None, fbar: false },
            FieldMode::CharP { p, fp_closure } => FieldDoc { kind: "charp".into(), p: Some(p), fbar: fp_closure },
        }
    }

    fn to_mode(&self) -> Result<FieldMode, FileError> {
        match (self.kind.as_str(), self.p) {
            ("char0", None) if !self.fbar => Ok(FieldMode::Char0),
            ("char0", _) => Err(FileError::Malformed("char0 field takes neither p nor fbar".into())),
            ("charp", Some(p)) => Ok(FieldMode::CharP { p, fp_closure: self.fbar }),
            ("charp", None) => Err(FileError::Malformed("charp field needs p".into())),
            (other, _) => Err(FileError::Malformed(format!("unknown field kind {other:?}"))),
        }
    }
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FlagsDoc {
    #[serde(default = "default_true")]
    rational_sing: bool,
    #[serde(default = "default_true")]
    q_factorial: bool,
    #[serde(default = "default_true")]
    smooth: bool,
}

impl Default for FlagsDoc {
    fn default() -> Self {
        FlagsDoc { rational_sing: true, q_factorial: true, smooth: true }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveDoc {
    id: String,
    class: Vec<RatText>,
    genus: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoundaryDoc {
    curve: String,
    coeff: RatText,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SurfaceDoc {
    field: FieldDoc,
    rank: usize,
    gram: Vec<Vec<RatText>>,
    canonical: Vec<RatText>,
    ample: Vec<RatText>,
    curves: Vec<CurveDoc>,
    #[serde(default)]
    boundary: Vec<BoundaryDoc>,
    #[serde(default)]
    flags: FlagsDoc,
}

impl SurfaceDoc {
    fn from_surface(s: &LogSurface) -> Self {
        SurfaceDoc {
            field: FieldDoc::from_mode(&s.field),
            rank: s.rank(),
            gram: s.gram().rows().iter().map(|r| rats(r)).collect(),
            canonical: rats(s.canonical().coords()),
            ample: rats(s.ample().coords()),
            curves: s
                .curves
                .iter()
                .map(|c| CurveDoc { id: c.id.clone(), class: rats(c.class.coords()), genus: c.genus })
                .collect(),
            boundary: s
                .boundary
                .iter()
                .map(|(id, c)| BoundaryDoc { curve: id.clone(), coeff: RatText(c.clone()) })
                .collect(),
            flags: FlagsDoc { rational_sing: s.rational_sing, q_factorial: s.q_factorial, smooth: s.smooth },
        }
    }

    fn into_surface(self) -> Result<LogSurface, FileError> {
        let gram = GramMatrix::new(self.gram.into_iter().map(unrat).collect())?;
        if gram.rank() != self.rank {
            return Err(FileError::Malformed(format!(
                "rank {} does not match gram with {} rows",
                self.rank,
                gram.rank()
            )));
        }
        let mut boundary = BoundaryDivisor::new();
        for b in self.boundary {
            if boundary.contains(&b.curve) {
                return Err(FileError::Malformed(format!("boundary lists {:?} twice", b.curve)));
            }
            // Zero is kept out of the divisor; out-of-range values are kept
            // so validation can report them.
            boundary.insert(b.curve, b.coeff.0);
        }
        Ok(LogSurface {
            lattice: NsLattice {
                gram,
                canonical: QVec::new(unrat(self.canonical)),
                ample: QVec::new(unrat(self.ample)),
            },
            curves: self
                .curves
                .into_iter()
                .map(|c| CurveRecord::new(c.id, QVec::new(unrat(c.class)), c.genus))
                .collect(),
            boundary,
            field: self.field.to_mode()?,
            q_factorial: self.flags.q_factorial,
            rational_sing: self.flags.rational_sing,
            smooth: self.flags.smooth,
        })
    }
}

/// Parses a surface file. Structural problems are errors; invariant
/// violations are left for [`LogSurface::validate`].
pub fn parse_surface(text: &str) -> Result<LogSurface, FileError> {
    let doc: SurfaceDoc = serde_json::from_str(text)?;
    doc.into_surface()
}

/// Canonical pretty-printed form, newline terminated.
pub fn write_surface(s: &LogSurface) -> String {
    let mut out = serde_json::to_string_pretty(&SurfaceDoc::from_surface(s)).expect("serializable");
    out.push('\n');
    out
}

pub fn read_surface(path: &std::path::Path) -> Result<LogSurface, FileError> {
    parse_surface(&read(path)?)
}

fn read(path: &std::path::Path) -> Result<String, FileError> {
    std::fs::read_to_string(path).map_err(|source| FileError::Io { path: path.display().to_string(), source })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClusterCurveDoc {
    id: String,
    #[serde(rename = "self")]
    self_intersection: RatText,
    genus: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    canonical_degree: Option<RatText>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BranchDoc {
    id: String,
    coeff: RatText,
    meets: Vec<RatText>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClusterDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    field: Option<FieldDoc>,
    curves: Vec<ClusterCurveDoc>,
    adjacency: Vec<Vec<RatText>>,
    #[serde(default)]
    boundary: Vec<BranchDoc>,
}

/// A cluster file: the configuration and the field it lives over.
pub fn parse_cluster(text: &str) -> Result<(ExceptionalCluster, FieldMode), FileError> {
    let doc: ClusterDoc = serde_json::from_str(text)?;
    let field = match &doc.field {
        Some(f) => f.to_mode()?,
        None => FieldMode::Char0,
    };
    let curves = doc
        .curves
        .into_iter()
        .map(|c| match c.canonical_degree {
            Some(k) => ClusterCurve::with_canonical_degree(c.id, c.self_intersection.0, c.genus, k.0),
            None => ClusterCurve::new(c.id, c.self_intersection.0, c.genus),
        })
        .collect();
    let boundary = doc
        .boundary
        .into_iter()
        .map(|b| BoundaryBranch { id: b.id, coeff: b.coeff.0, meets: unrat(b.meets) })
        .collect();
    let cluster = ExceptionalCluster::new(curves, doc.adjacency.into_iter().map(unrat).collect(), boundary)?;
    Ok((cluster, field))
}

pub fn read_cluster(path: &std::path::Path) -> Result<(ExceptionalCluster, FieldMode), FileError> {
    parse_cluster(&read(path)?)
}

pub fn write_cluster(cl: &ExceptionalCluster, field: &FieldMode) -> String {
    let doc = ClusterDoc {
        field: Some(FieldDoc::from_mode(field)),
        curves: cl
            .curves
            .iter()
            .map(|c| ClusterCurveDoc {
                id: c.id.clone(),
                self_intersection: RatText(c.self_intersection.clone()),
                genus: c.genus,
                canonical_degree: Some(RatText(c.canonical_degree.clone())),
            })
            .collect(),
        adjacency: cl.adjacency.iter().map(|r| rats(r)).collect(),
        boundary: cl
            .boundary
            .iter()
            .map(|b| BranchDoc { id: b.id.clone(), coeff: RatText(b.coeff.clone()), meets: rats(&b.meets) })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("serializable");
    out.push('\n');
    out
}

#[derive(Serialize)]
struct DiscrepancyDoc {
    curve: String,
    a: RatText,
}

#[derive(Serialize)]
struct SingularityDoc {
    class: String,
    discrepancies: Vec<DiscrepancyDoc>,
    shapes: Vec<String>,
    numerically_dlt_approx: bool,
    q_factorial: bool,
    rational_sing: bool,
    citation: Citation,
}

impl SingularityDoc {
    fn new(r: &DiscrepancyReport) -> Self {
        SingularityDoc {
            class: r.class.to_string(),
            discrepancies: r
                .discrepancies
                .iter()
                .map(|(id, a)| DiscrepancyDoc { curve: id.clone(), a: RatText(a.clone()) })
                .collect(),
            shapes: r.shapes.iter().map(ToString::to_string).collect(),
            numerically_dlt_approx: r.numerically_dlt_approx,
            q_factorial: r.q_factorial,
            rational_sing: r.rational_sing,
            citation: Citation::Prop6_3,
        }
    }
}

#[derive(Serialize)]
struct StepDoc {
    index: usize,
    curve: String,
    class: Vec<RatText>,
    self_intersection: RatText,
    log_degree: RatText,
    rank_before: usize,
    rank_after: usize,
    singularity: SingularityDoc,
    events: Vec<String>,
    citation: Citation,
}

#[derive(Serialize)]
struct SemiampleDoc {
    status: String,
    reason: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness_contracted: Option<Vec<String>>,
    citation: Citation,
}

impl SemiampleDoc {
    fn new(v: &SemiampleVerdict) -> Self {
        SemiampleDoc {
            status: v.status.to_string(),
            reason: v.reason.clone(),
            witness_contracted: v.witness.as_ref().map(|w| w.contracted.clone()),
            citation: v.citation,
        }
    }
}

#[derive(Serialize)]
struct KappaDoc {
    value: String,
    certificate: String,
    citation: Citation,
}

impl KappaDoc {
    fn new(k: &KappaVerdict) -> Self {
        KappaDoc { value: k.value.to_string(), certificate: k.certificate.to_string(), citation: k.citation }
    }
}

#[derive(Serialize)]
struct OutcomeDoc {
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    fiber: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fiber_class: Option<Vec<RatText>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    aborted_at: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    singularity: Option<SingularityDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    semiample: Option<SemiampleDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    kappa: Option<KappaDoc>,
    log_canonical_class: Vec<RatText>,
    citation: Citation,
}

#[derive(Serialize)]
struct CitationDoc {
    verdict: String,
    tag: Citation,
}

#[derive(Serialize)]
struct ReportDoc {
    mode: &'static str,
    strict_extremal: bool,
    initial_rank: usize,
    final_rank: usize,
    steps: Vec<StepDoc>,
    events: Vec<String>,
    outcome: OutcomeDoc,
    final_surface: SurfaceDoc,
    citations: Vec<CitationDoc>,
}

/// Deterministic JSON report of a run, newline terminated.
pub fn write_report(run: &MmpRun) -> String {
    let mut citations = Vec::new();
    let steps: Vec<StepDoc> = run
        .steps
        .iter()
        .enumerate()
        .map(|(k, st)| {
            citations.push(CitationDoc { verdict: format!("step {}: contract {}", k + 1, st.curve), tag: Citation::Thm1_2 });
            citations.push(CitationDoc {
                verdict: format!("step {}: singularity {}", k + 1, st.report.class),
                tag: Citation::Prop6_3,
            });
            StepDoc {
                index: k + 1,
                curve: st.curve.clone(),
                class: rats(st.class.coords()),
                self_intersection: RatText(st.self_intersection.clone()),
                log_degree: RatText(st.log_degree.clone()),
                rank_before: st.rank_before,
                rank_after: st.rank_after,
                singularity: SingularityDoc::new(&st.report),
                events: st.events.clone(),
                citation: Citation::Thm1_2,
            }
        })
        .collect();
    let surface = run.outcome.surface();
    let kd = surface.log_canonical_class().expect("validated boundary");
    let mut outcome = OutcomeDoc {
        kind: run.outcome.kind(),
        fiber: None,
        fiber_class: None,
        aborted_at: None,
        singularity: None,
        semiample: None,
        kappa: None,
        log_canonical_class: rats(kd.coords()),
        citation: run.outcome.citation(),
    };
    citations.push(CitationDoc { verdict: format!("outcome: {}", outcome.kind), tag: outcome.citation });
    match &run.outcome {
        MmpOutcome::MinimalModel { semiample, kappa, .. } => {
            citations.push(CitationDoc { verdict: format!("semiample: {}", semiample.status), tag: semiample.citation });
            citations.push(CitationDoc { verdict: format!("kappa: {}", kappa.value), tag: kappa.citation });
            outcome.semiample = Some(SemiampleDoc::new(semiample));
            outcome.kappa = Some(KappaDoc::new(kappa));
        }
        MmpOutcome::MoriFiberSpaceOverCurve { fiber, fiber_class, .. } => {
            outcome.fiber = Some(fiber.clone());
            outcome.fiber_class = Some(rats(fiber_class.coords()));
        }
        MmpOutcome::MoriFiberSpaceOverPoint { .. } => {}
        MmpOutcome::Aborted { curve, report, .. } => {
            citations.push(CitationDoc {
                verdict: format!("abort: singularity {}", report.class),
                tag: Citation::Prop6_3,
            });
            outcome.aborted_at = Some(curve.clone());
            outcome.singularity = Some(SingularityDoc::new(report));
        }
    }
    let doc = ReportDoc {
        mode: match run.options.mode {
            MmpMode::QFactorial => "A",
            MmpMode::LogCanonical => "B",
        },
        strict_extremal: run.options.strict_extremal,
        initial_rank: run.initial_rank,
        final_rank: surface.rank(),
        events: run.steps.iter().flat_map(|s| s.events.iter().cloned()).collect(),
        steps,
        outcome,
        final_surface: SurfaceDoc::from_surface(surface),
        citations,
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("serializable");
    out.push('\n');
    out
}

fn dot_id(id: &str) -> String {
    format!("\"{}\"", id.replace('\\', "\\\\").replace('"', "\\\""))
}

fn dot_graph(nodes: &[(String, Rational, u32)], weight: impl Fn(usize, usize) -> Rational) -> String {
    let mut out = String::from("graph dual {\n");
    for (id, self_int, genus) in nodes {
        let label = format!("{id} [{}, {genus}]", rational::format(self_int));
        let _ = writeln!(out, "  {} [label={}];", dot_id(id), dot_id(&label));
    }
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            let w = weight(i, j);
            if !num_traits::Zero::is_zero(&w) {
                let _ = writeln!(
                    out,
                    "  {} -- {} [label={}];",
                    dot_id(&nodes[i].0),
                    dot_id(&nodes[j].0),
                    dot_id(&rational::format(&w))
                );
            }
        }
    }
    out.push_str("}\n");
    out
}

/// Dual graph of the listed curves (all curves when `ids` is empty).
pub fn surface_dot(s: &LogSurface, ids: &[&str]) -> Result<String, ModelError> {
    let idx: Vec<usize> = if ids.is_empty() {
        (0..s.curves.len()).collect()
    } else {
        ids.iter().map(|id| s.curve_index(id)).collect::<Result<_, _>>()?
    };
    let nodes: Vec<(String, Rational, u32)> = idx
        .iter()
        .map(|&i| {
            let c = &s.curves[i];
            (c.id.clone(), s.pair(&c.class, &c.class).expect("valid rank"), c.genus)
        })
        .collect();
    Ok(dot_graph(&nodes, |a, b| {
        s.pair(&s.curves[idx[a]].class, &s.curves[idx[b]].class).expect("valid rank")
    }))
}

pub fn cluster_dot(cl: &ExceptionalCluster) -> String {
    let nodes: Vec<(String, Rational, u32)> = cl
        .curves
        .iter()
        .map(|c| (c.id.clone(), c.self_intersection.clone(), c.genus))
        .collect();
    dot_graph(&nodes, |a, b| cl.adjacency[a][b].clone())
}
