//! Contractions, blow-ups, and supporting divisors of single curves.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{GramMatrix, QVec, QuotientProjection};
use crate::rational::{int, Rational};
use crate::singularities::{
    self, BoundaryBranch, ClusterCurve, DiscrepancyReport, ExceptionalCluster,
};
use crate::surface::{CurveRecord, LogSurface, NsLattice};

/// Largest multiple of the old ample class tried when blowing up.
pub const BLOW_UP_MAX_MULTIPLE: i64 = 64;

#[derive(Debug, Clone)]
pub struct ContractionResult {
    pub target: LogSurface,
    pub projection: QuotientProjection,
    pub contracted: Vec<String>,
    /// Verdict on the singular point(s) produced.
    pub cluster: ExceptionalCluster,
    pub report: DiscrepancyReport,
    /// Merges and skipped merges of surviving curves.
    pub events: Vec<String>,
}

impl ContractionResult {
    /// Image of a source class in target coordinates.
    pub fn pushforward(&self, a: &QVec) -> QVec {
        self.projection.pushforward(a)
    }
}

/// Exceptional cluster of `ids` inside `s`, with every non-contracted
/// boundary curve that meets it as a branch.
pub fn cluster_of(s: &LogSurface, ids: &[&str]) -> Result<ExceptionalCluster> {
    let idx: Vec<usize> = ids.iter().map(|id| s.curve_index(id)).collect::<Result<_>>()?;
    let class = |i: usize| &s.curves[i].class;
    let curves = idx
        .iter()
        .map(|&i| {
            ClusterCurve::with_canonical_degree(
                s.curves[i].id.clone(),
                s.dot(class(i), class(i)),
                s.curves[i].genus,
                s.dot(s.canonical(), class(i)),
            )
        })
        .collect();
    let adjacency = idx
        .iter()
        .map(|&i| {
            idx.iter()
                .map(|&j| if i == j { int(0) } else { s.dot(class(i), class(j)) })
                .collect()
        })
        .collect();
    let mut boundary = Vec::new();
    for (id, coeff) in s.boundary.iter() {
        if ids.contains(&id.as_str()) {
            continue;
        }
        let b = &s.curve(id)?.class;
        let meets: Vec<Rational> = idx.iter().map(|&i| s.dot(b, class(i))).collect();
        if meets.iter().any(|m| !m.is_zero()) {
            boundary.push(BoundaryBranch { id: id.clone(), coeff: coeff.clone(), meets });
        }
    }
    ExceptionalCluster::new(curves, adjacency, boundary)
}

/// Contracts a negative-definite set of declared curves.
///
/// Unless `allow_non_log_negative`, each curve must satisfy `(K+Δ)·C < 0`.
/// Surviving curves keep their ids; two survivors whose images coincide with
/// negative square are the same curve on the target and are merged.
pub fn contract(s: &LogSurface, ids: &[&str], allow_non_log_negative: bool) -> Result<ContractionResult> {
    let mut unique: Vec<&str> = Vec::new();
    for id in ids {
        s.curve_index(id)?;
        if !unique.contains(id) {
            unique.push(id);
        }
    }
    let classes: Vec<QVec> = unique.iter().map(|id| s.curve(id).map(|c| c.class.clone())).collect::<Result<_>>()?;
    if !allow_non_log_negative {
        let kd = s.log_canonical_class()?;
        for (id, c) in unique.iter().zip(&classes) {
            if !s.dot(&kd, c).is_negative() {
                return Err(Error::NotLogNegative(id.to_string()));
            }
        }
    }
    let projection = QuotientProjection::new(s.gram(), classes)?;
    let cluster = cluster_of(s, &unique)?;
    let report = if cluster.is_empty() {
        DiscrepancyReport::empty()
    } else {
        singularities::classify(&cluster, &s.field)?
    };
    let smooth = s.smooth && singularities::contracts_to_smooth_point(&cluster);

    let lattice = NsLattice {
        gram: projection.quotient_gram().clone(),
        canonical: projection.pushforward(s.canonical()),
        ample: projection.pushforward(s.ample()).primitive(),
    };
    let mut target = LogSurface {
        lattice,
        curves: Vec::new(),
        boundary: s.boundary.clone(),
        field: s.field,
        q_factorial: s.q_factorial && report.q_factorial,
        rational_sing: s.rational_sing && report.rational_sing,
        smooth,
    };
    for id in &unique {
        target.boundary.remove(id);
    }

    let mut events = Vec::new();
    for c in s.curves.iter().filter(|c| !unique.contains(&c.id.as_str())) {
        let image = projection.pushforward(&c.class);
        if image.is_zero() {
            return Err(Error::DegenerateProjection(c.id.clone()));
        }
        let genus = if smooth {
            let g = target.adjunction_genus(&image);
            if g.is_negative() || !g.is_integer() {
                return Err(Error::NegativeGenus(c.id.clone()));
            }
            u32::try_from(g.to_integer()).map_err(|_| Error::NegativeGenus(c.id.clone()))?
        } else {
            c.genus
        };
        let negative = target.dot(&image, &image).is_negative();
        if let Some(k) = target.curves.iter().position(|t| negative && t.class == image) {
            let kept = target.curves[k].id.clone();
            let total = target.boundary.coefficient(&kept) + target.boundary.coefficient(&c.id);
            if total > int(1) {
                events.push(format!(
                    "not merging {} into {kept}: combined boundary coefficient {total} exceeds 1",
                    c.id
                ));
            } else {
                target.boundary.remove(&c.id);
                target.boundary.insert(kept.clone(), total);
                events.push(format!("merged {} into {kept}: images coincide", c.id));
                continue;
            }
        }
        target.curves.push(CurveRecord { id: c.id.clone(), class: image, genus });
    }

    if !target.is_ample(target.ample()) {
        return Err(Error::NoAmpleClass(format!(
            "image {} of the ample class is not ample on the target",
            target.ample()
        )));
    }
    Ok(ContractionResult {
        target,
        projection,
        contracted: unique.iter().map(|id| id.to_string()).collect(),
        cluster,
        report,
        events,
    })
}

/// `L = (−C²)·H + (H·C)·C`: nef, with `L·C = 0` and `L·C' > 0` for every
/// other declared curve when the closed world is consistent.
pub fn contraction_support_divisor(s: &LogSurface, id: &str) -> Result<QVec> {
    let c = &s.curve(id)?.class;
    let c2 = s.dot(c, c);
    if !c2.is_negative() {
        return Err(Error::NonNegativeSelfIntersection(id.to_string()));
    }
    let h = s.ample();
    Ok(h.scale(&-c2).add_scaled(&s.dot(h, c), c))
}

/// First unused id among `e`, `e2`, `e3`, ...
fn fresh_exceptional_id(s: &LogSurface) -> String {
    std::iter::once("e".to_string())
        .chain((2..).map(|n| format!("e{n}")))
        .find(|id| s.curve_index(id).is_err())
        .expect("unbounded supply of ids")
}

/// Blows up a smooth point lying on the listed curves with the given
/// multiplicities. The exceptional curve gets a fresh id.
pub fn blow_up(s: &LogSurface, multiplicities: &[(&str, u32)]) -> Result<LogSurface> {
    blow_up_named(s, multiplicities, &fresh_exceptional_id(s))
}

pub fn blow_up_named(s: &LogSurface, multiplicities: &[(&str, u32)], new_id: &str) -> Result<LogSurface> {
    if s.curve_index(new_id).is_ok() {
        return Err(Error::InvalidSurface(vec![crate::surface::Violation::DuplicateCurveId(
            new_id.to_string(),
        )]));
    }
    for (id, _) in multiplicities {
        s.curve_index(id)?;
    }
    let n = s.rank();
    let rows = (0..=n)
        .map(|i| {
            (0..=n)
                .map(|j| match (i < n, j < n) {
                    (true, true) => s.gram().entry(i, j).clone(),
                    _ if i == j => int(-1),
                    _ => int(0),
                })
                .collect()
        })
        .collect();
    let gram = GramMatrix::new(rows)?;
    let mut curves = Vec::with_capacity(s.curves.len() + 1);
    for c in &s.curves {
        let m = multiplicities
            .iter()
            .find(|(id, _)| *id == c.id)
            .map_or(0, |(_, m)| *m);
        let drop = m * m.saturating_sub(1) / 2;
        let genus = c.genus.checked_sub(drop).ok_or_else(|| Error::NegativeGenus(c.id.clone()))?;
        curves.push(CurveRecord {
            id: c.id.clone(),
            class: c.class.extended(int(-i64::from(m))),
            genus,
        });
    }
    curves.push(CurveRecord::new(new_id, QVec::basis(n + 1, n), 0));
    let mut out = LogSurface {
        lattice: NsLattice {
            gram,
            canonical: s.canonical().extended(int(1)),
            ample: QVec::zeros(n + 1),
        },
        curves,
        boundary: s.boundary.clone(),
        field: s.field,
        q_factorial: s.q_factorial,
        rational_sing: s.rational_sing,
        smooth: s.smooth,
    };
    for k in 1..=BLOW_UP_MAX_MULTIPLE {
        let h = s.ample().scale(&int(k)).extended(int(-1));
        if out.is_ample(&h) {
            out.lattice.ample = h;
            return Ok(out);
        }
    }
    Err(Error::NoAmpleClass(format!(
        "no multiple n ≤ {BLOW_UP_MAX_MULTIPLE} makes nH − e ample"
    )))
}
