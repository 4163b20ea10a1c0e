//! The log minimal model program on a surface: contract `(K+Δ)`-negative
//! curves until `K+Δ` is nef or a Mori fibre space appears.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};

use crate::birational;
use crate::citation::Citation;
use crate::error::{Error, Result};
use crate::lattice::QVec;
use crate::lp;
use crate::positivity::{self, KappaVerdict, SemiampleStatus, SemiampleVerdict};
use crate::rational::{int, Rational};
use crate::singularities::{DiscrepancyReport, SingularityClass};
use crate::surface::LogSurface;

/// Which invariant the run preserves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MmpMode {
    /// Q-factorial throughout; the input must be Q-factorial.
    #[default]
    QFactorial,
    /// Log canonical throughout; a non-lc contraction aborts the run.
    LogCanonical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MmpOptions {
    pub mode: MmpMode,
    /// Skip candidates that are a non-negative combination of other curves.
    pub strict_extremal: bool,
}

#[derive(Debug, Clone)]
pub struct MmpStep {
    pub curve: String,
    pub class: QVec,
    pub self_intersection: Rational,
    /// `(K+Δ)·C`
    pub log_degree: Rational,
    pub rank_before: usize,
    pub rank_after: usize,
    pub report: DiscrepancyReport,
    pub events: Vec<String>,
}

#[derive(Debug, Clone)]
pub enum MmpOutcome {
    MinimalModel {
        surface: LogSurface,
        semiample: SemiampleVerdict,
        kappa: KappaVerdict,
    },
    MoriFiberSpaceOverCurve {
        surface: LogSurface,
        fiber: String,
        fiber_class: QVec,
    },
    MoriFiberSpaceOverPoint {
        surface: LogSurface,
    },
    /// Mode (B) only: contracting `curve` would leave a non-lc point.
    Aborted {
        surface: LogSurface,
        curve: String,
        report: DiscrepancyReport,
    },
}

impl MmpOutcome {
    pub fn kind(&self) -> &'static str {
        match self {
            MmpOutcome::MinimalModel { .. } => "MinimalModel",
            MmpOutcome::MoriFiberSpaceOverCurve { .. } => "MoriFiberSpaceOverCurve",
            MmpOutcome::MoriFiberSpaceOverPoint { .. } => "MoriFiberSpaceOverPoint",
            MmpOutcome::Aborted { .. } => "Aborted",
        }
    }

    pub fn surface(&self) -> &LogSurface {
        match self {
            MmpOutcome::MinimalModel { surface, .. }
            | MmpOutcome::MoriFiberSpaceOverCurve { surface, .. }
            | MmpOutcome::MoriFiberSpaceOverPoint { surface }
            | MmpOutcome::Aborted { surface, .. } => surface,
        }
    }

    pub fn citation(&self) -> Citation {
        match self {
            MmpOutcome::Aborted { .. } => Citation::Prop6_3,
            _ => Citation::Thm1_2,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MmpRun {
    pub options: MmpOptions,
    pub initial_rank: usize,
    pub steps: Vec<MmpStep>,
    pub outcome: MmpOutcome,
}

/// Semi-ampleness of a nef and big `K+Δ`.
pub fn abundance_big(s: &LogSurface) -> Result<SemiampleVerdict> {
    let kd = s.log_canonical_class()?;
    let exceptional = s.exceptional_indices(&kd)?;
    let (status, reason) = if s.field.is_positive_characteristic() {
        (SemiampleStatus::SemiAmple, "nef and big K+Δ in positive characteristic".to_string())
    } else if let Some(&i) = exceptional.iter().find(|&&i| s.curves[i].genus > 0) {
        return Ok(SemiampleVerdict {
            status: SemiampleStatus::Undecidable,
            citation: Citation::Thm3_1,
            reason: format!(
                "char 0 with {} of genus {} in E(K+Δ): needs vanishing beyond the lattice model",
                s.curves[i].id, s.curves[i].genus
            ),
            witness: None,
        });
    } else {
        (SemiampleStatus::SemiAmple, "E(K+Δ) consists of rational curves".to_string())
    };
    let witness = positivity::contraction_witness(s, &kd, &exceptional)?;
    Ok(SemiampleVerdict { status, citation: Citation::Thm3_1, reason, witness: Some(Box::new(witness)) })
}

fn square_rank(x: &Rational) -> u8 {
    match x.cmp(&Rational::zero()) {
        Ordering::Less => 0,
        Ordering::Equal => 1,
        Ordering::Greater => 2,
    }
}

/// `(K+Δ)`-negative curves in contraction order: negative square first, then
/// the most negative `(K+Δ)·C / H·C`, then id.
fn candidates(s: &LogSurface, kd: &QVec) -> Vec<usize> {
    let mut c: Vec<usize> = (0..s.curves.len())
        .filter(|&i| s.dot(kd, &s.curves[i].class).is_negative())
        .collect();
    let key = |i: usize| {
        let class = &s.curves[i].class;
        (
            square_rank(&s.dot(class, class)),
            s.dot(kd, class) / s.dot(s.ample(), class),
        )
    };
    c.sort_by(|&a, &b| key(a).cmp(&key(b)).then_with(|| s.curves[a].id.cmp(&s.curves[b].id)));
    c
}

/// `b = λa` for some `λ > 0`.
fn same_ray(a: &QVec, b: &QVec) -> bool {
    let Some(k) = a.coords().iter().position(|x| !x.is_zero()) else { return b.is_zero() };
    let lambda = &b[k] / &a[k];
    lambda.is_positive() && a.scale(&lambda) == *b
}

/// Extremal within the declared curves: not a non-negative combination of
/// curves spanning other rays.
fn is_extremal(s: &LogSurface, i: usize) -> bool {
    let target = &s.curves[i].class;
    let others: Vec<QVec> = s
        .curves
        .iter()
        .filter(|c| !same_ray(target, &c.class))
        .map(|c| c.class.clone())
        .collect();
    lp::cone_membership(&others, target).is_none()
}

pub fn run_mmp(s: &LogSurface, options: MmpOptions) -> Result<MmpRun> {
    s.ensure_valid()?;
    if options.mode == MmpMode::QFactorial && !s.q_factorial {
        return Err(Error::NotQFactorial);
    }
    let mut current = s.clone();
    let mut steps = Vec::new();
    loop {
        let kd = current.log_canonical_class()?;
        if current.is_nef(&kd) {
            let semiample = if current.dot(&kd, &kd).is_positive() {
                abundance_big(&current)?
            } else {
                positivity::semiample(&current, &kd)?
            };
            let kappa = positivity::kappa(&current, &kd);
            let outcome = MmpOutcome::MinimalModel { surface: current, semiample, kappa };
            return Ok(MmpRun { options, initial_rank: s.rank(), steps, outcome });
        }
        let mut order = candidates(&current, &kd);
        if options.strict_extremal {
            order.retain(|&i| is_extremal(&current, i));
        }
        let Some(&i) = order.first() else {
            return Err(Error::InconsistentClosedWorld(
                "K+Δ is not nef but no extremal K+Δ-negative curve was found".into(),
            ));
        };
        let curve = current.curves[i].clone();
        let c2 = current.dot(&curve.class, &curve.class);
        if c2.is_zero() {
            let outcome = MmpOutcome::MoriFiberSpaceOverCurve {
                fiber: curve.id,
                fiber_class: curve.class,
                surface: current,
            };
            return Ok(MmpRun { options, initial_rank: s.rank(), steps, outcome });
        }
        if c2.is_positive() {
            if current.rank() != 1 {
                return Err(Error::InconsistentClosedWorld(format!(
                    "K+Δ-negative curve {} has positive square on a surface of Picard rank {}",
                    curve.id,
                    current.rank()
                )));
            }
            debug_assert!(current.is_ample(&kd.scale(&int(-1))));
            let outcome = MmpOutcome::MoriFiberSpaceOverPoint { surface: current };
            return Ok(MmpRun { options, initial_rank: s.rank(), steps, outcome });
        }

        let result = birational::contract(&current, &[curve.id.as_str()], false)?;
        if options.mode == MmpMode::LogCanonical && result.report.class == SingularityClass::NotLc {
            let outcome = MmpOutcome::Aborted { surface: current, curve: curve.id, report: result.report };
            return Ok(MmpRun { options, initial_rank: s.rank(), steps, outcome });
        }
        if options.mode == MmpMode::QFactorial {
            assert!(result.target.q_factorial, "contracting a K+Δ-negative curve keeps Q-factoriality");
        }
        steps.push(MmpStep {
            log_degree: current.dot(&kd, &curve.class),
            self_intersection: c2,
            curve: curve.id,
            class: curve.class,
            rank_before: current.rank(),
            rank_after: result.target.rank(),
            report: result.report,
            events: result.events,
        });
        current = result.target;
    }
}
