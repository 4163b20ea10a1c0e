//! Zariski decomposition, the Kodaira-lemma split, semi-ampleness verdicts,
//! curves of canonical type, and the numerical Iitaka dimension.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::birational::{self, ContractionResult};
use crate::citation::Citation;
use crate::error::{Error, Result};
use crate::lattice::{GramMatrix, QVec};
use crate::linalg;
use crate::lp;
use crate::rational::{self, int, Rational};
use crate::singularities::arm_lengths;
use crate::surface::LogSurface;

/// `D = P + Σ N_i C_i` with `P` nef and `N` supported on a negative-definite set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZariskiDecomposition {
    pub positive: QVec,
    /// `(curve id, coefficient > 0)` in declared-curve order.
    pub negative: Vec<(String, Rational)>,
}

impl ZariskiDecomposition {
    pub fn negative_class(&self, s: &LogSurface) -> QVec {
        self.negative.iter().fold(QVec::zeros(s.rank()), |acc, (id, c)| {
            acc.add_scaled(c, &s.curve(id).expect("support is declared").class)
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ZariskiOutcome {
    Decomposition(ZariskiDecomposition),
    NotPseudoEffective(String),
}

/// Fujita's iteration: grow the support by the curves the current positive
/// part is negative on, re-solve `(D − Σ x_i C_i)·C_j = 0` on the support,
/// and stop once the positive part is nef.
pub fn zariski(s: &LogSurface, d: &QVec) -> ZariskiOutcome {
    let not_pe = |why: String| ZariskiOutcome::NotPseudoEffective(why);
    let mut support: Vec<usize> = Vec::new();
    let mut coeffs: Vec<Rational> = Vec::new();
    let mut positive = d.clone();
    loop {
        let fresh: Vec<usize> = (0..s.curves.len())
            .filter(|i| !support.contains(i) && s.dot(&positive, &s.curves[*i].class).is_negative())
            .collect();
        if fresh.is_empty() {
            break;
        }
        support.extend(fresh);
        support.sort_unstable();
        let classes: Vec<QVec> = support.iter().map(|&i| s.curves[i].class.clone()).collect();
        let m = s.gram().gram_of(&classes).expect("declared classes have lattice rank");
        if m.signature().expect("gram of classes is symmetric").negatives != classes.len() {
            let ids: Vec<&str> = support.iter().map(|&i| s.curves[i].id.as_str()).collect();
            return not_pe(format!("negative part support {{{}}} is not negative definite", ids.join(", ")));
        }
        let rhs: Vec<Rational> = classes.iter().map(|c| s.dot(d, c)).collect();
        coeffs = linalg::solve(&m.rows().to_vec(), &rhs).expect("negative definite is nonsingular");
        if let Some(k) = coeffs.iter().position(|x| x.is_negative()) {
            return not_pe(format!(
                "negative part would need coefficient {} on {}",
                rational::format(&coeffs[k]),
                s.curves[support[k]].id
            ));
        }
        positive = classes
            .iter()
            .zip(&coeffs)
            .fold(d.clone(), |acc, (c, x)| acc.add_scaled(&-x, c));
    }
    if s.dot(&positive, &positive).is_negative() {
        return not_pe(format!("positive part {positive} has negative square"));
    }
    if s.dot(&positive, s.ample()).is_negative() {
        return not_pe(format!("positive part {positive} has negative degree against H"));
    }
    let negative = support
        .iter()
        .zip(coeffs)
        .filter(|(_, x)| !x.is_zero())
        .map(|(&i, x)| (s.curves[i].id.clone(), x))
        .collect();
    ZariskiOutcome::Decomposition(ZariskiDecomposition { positive, negative })
}

/// Positive solution of `M·x = −1` on each connected component of a
/// negative-definite Gram matrix, scaled to integers by a common factor.
pub(crate) fn anti_nef_coefficients(m: &GramMatrix) -> Vec<Rational> {
    let n = m.rank();
    let mut seen = vec![false; n];
    let mut x = vec![rational::zero(); n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut k = 0;
        while k < comp.len() {
            let i = comp[k];
            for j in 0..n {
                if !seen[j] && !m.entry(i, j).is_zero() {
                    seen[j] = true;
                    comp.push(j);
                }
            }
            k += 1;
        }
        comp.sort_unstable();
        let sub: Vec<Vec<Rational>> = comp
            .iter()
            .map(|&i| comp.iter().map(|&j| m.entry(i, j).clone()).collect())
            .collect();
        let rhs = vec![-Rational::one(); comp.len()];
        let sol = linalg::solve(&sub, &rhs).expect("negative definite is nonsingular");
        for (&i, v) in comp.iter().zip(sol) {
            x[i] = v;
        }
    }
    let scale = Rational::from_integer(rational::lcm_of_denominators(&x));
    x.into_iter().map(|v| v * &scale).collect()
}

/// Effective `D = Σ x_i C_i` supported exactly on `ids` with `D·C_j < 0` for
/// every `j` in `ids`.
pub fn anti_nef_support_divisor(s: &LogSurface, ids: &[&str]) -> Result<Vec<(String, Rational)>> {
    let classes: Vec<QVec> = ids
        .iter()
        .map(|id| s.curve(id).map(|c| c.class.clone()))
        .collect::<Result<_>>()?;
    let m = s.gram().gram_of(&classes)?;
    if m.signature()?.negatives != classes.len() {
        return Err(Error::NotNegativeDefinite { what: format!("{{{}}}", ids.join(", ")) });
    }
    let x = anti_nef_coefficients(&m);
    debug_assert!(x.iter().all(|v| v.is_positive()));
    Ok(ids.iter().map(|id| id.to_string()).zip(x).collect())
}

/// `k·d = A + B` with `A` ample and `B` a non-negative combination of curves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KodairaSplit {
    pub k: u32,
    pub ample: QVec,
    pub effective: Vec<(String, Rational)>,
}

pub const KODAIRA_MAX_K: u32 = 64;

/// Smallest `k ≤ 64` for which one of three candidate splits certifies:
/// `B = 0`; `B` the anti-nef divisor on `E(d)` (so `A = k·d − B` is positive
/// on `E(d)` by construction); or `A = H` with `k·d − H` in the cone of
/// curves by exact LP.
pub fn kodaira_split(s: &LogSurface, d: &QVec) -> Result<KodairaSplit> {
    if !s.is_nef(d) {
        return Err(Error::NotNef(d.to_string()));
    }
    let exceptional = s.exceptional_indices(d)?;
    let anti_nef: Vec<(String, Rational)> = if exceptional.is_empty() {
        vec![]
    } else {
        let ids: Vec<&str> = exceptional.iter().map(|&i| s.curves[i].id.as_str()).collect();
        anti_nef_support_divisor(s, &ids)?
    };
    let combination = |terms: &[(String, Rational)]| {
        terms.iter().fold(QVec::zeros(s.rank()), |acc, (id, c)| {
            acc.add_scaled(c, &s.curve(id).expect("declared").class)
        })
    };
    let generators: Vec<QVec> = s.curves.iter().map(|c| c.class.clone()).collect();
    for k in 1..=KODAIRA_MAX_K {
        let kd = d.scale(&int(i64::from(k)));
        if s.is_ample(&kd) {
            return Ok(KodairaSplit { k, ample: kd, effective: vec![] });
        }
        if !anti_nef.is_empty() {
            let a = &kd - &combination(&anti_nef);
            if s.is_ample(&a) {
                return Ok(KodairaSplit { k, ample: a, effective: anti_nef });
            }
        }
        let rest = &kd - s.ample();
        if let Some(lambda) = lp::cone_membership(&generators, &rest) {
            let effective = s
                .curves
                .iter()
                .zip(lambda)
                .filter(|(_, l)| !l.is_zero())
                .map(|(c, l)| (c.id.clone(), l))
                .collect();
            return Ok(KodairaSplit { k, ample: s.ample().clone(), effective });
        }
    }
    Err(Error::KodairaSplitFailed(KODAIRA_MAX_K))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SemiampleStatus {
    SemiAmple,
    NotSemiAmple,
    Undecidable,
}

impl fmt::Display for SemiampleStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SemiampleStatus::SemiAmple => "SemiAmple",
            SemiampleStatus::NotSemiAmple => "NotSemiAmple",
            SemiampleStatus::Undecidable => "Undecidable",
        })
    }
}

#[derive(Debug, Clone)]
pub struct SemiampleVerdict {
    pub status: SemiampleStatus,
    pub citation: Citation,
    pub reason: String,
    /// For nef and big classes judged semi-ample: the contraction of `E(h)`.
    pub witness: Option<Box<ContractionResult>>,
}

impl SemiampleVerdict {
    fn new(status: SemiampleStatus, citation: Citation, reason: impl Into<String>) -> Self {
        SemiampleVerdict { status, citation, reason: reason.into(), witness: None }
    }
}

/// Contracts `E(h)` and checks that the image of `h` is ample (Nakai).
pub(crate) fn contraction_witness(s: &LogSurface, h: &QVec, exceptional: &[usize]) -> Result<ContractionResult> {
    let ids: Vec<&str> = exceptional.iter().map(|&i| s.curves[i].id.as_str()).collect();
    let result = birational::contract(s, &ids, true)?;
    let image = result.pushforward(h);
    if !result.target.is_ample(&image) {
        return Err(Error::InconsistentClosedWorld(format!(
            "image {image} of {h} is not ample after contracting E(h)"
        )));
    }
    Ok(result)
}

/// Semi-ampleness of a class under the closed world and the field mode.
pub fn semiample(s: &LogSurface, h: &QVec) -> Result<SemiampleVerdict> {
    use SemiampleStatus::*;
    s.check_class(h)?;
    if h.is_zero() {
        return Ok(SemiampleVerdict::new(SemiAmple, Citation::Thm5_1, "zero class"));
    }
    if let Some(c) = s.curves.iter().find(|c| s.dot(h, &c.class).is_negative()) {
        return Ok(SemiampleVerdict::new(
            NotSemiAmple,
            Citation::Thm2_1,
            format!("not nef: negative on {}", c.id),
        ));
    }
    let square = s.dot(h, h);
    if square.is_negative() {
        return Ok(SemiampleVerdict::new(NotSemiAmple, Citation::Thm2_1, "negative square"));
    }
    if square.is_zero() {
        return Ok(match canonical_type_for(s, h) {
            Some(cfg) => {
                let label = cfg.kodaira_label;
                if s.field.is_fp_closure() {
                    SemiampleVerdict::new(
                        SemiAmple,
                        Citation::Prop5_3,
                        format!("canonical type {label}; O_Y(Y) is torsion over the closure of F_p"),
                    )
                } else if s.field.is_positive_characteristic() {
                    SemiampleVerdict::new(
                        SemiAmple,
                        Citation::Prop5_3,
                        format!("canonical type {label}; numerically trivial restriction in positive characteristic"),
                    )
                } else {
                    SemiampleVerdict::new(
                        Undecidable,
                        Citation::Prop5_3,
                        format!("canonical type {label}; char 0 needs torsion and H^1(O_X) = 0"),
                    )
                }
            }
            None => SemiampleVerdict::new(Undecidable, Citation::Def5_2, "no canonical-type certificate"),
        });
    }

    let exceptional = s.exceptional_indices(h)?;
    let (status, citation, reason) = if exceptional.is_empty() {
        (SemiAmple, Citation::Thm2_1, "ample".to_string())
    } else if s.field.is_fp_closure() {
        (SemiAmple, Citation::Cor2_3, "nef and big over the closure of F_p".to_string())
    } else if s.field.is_positive_characteristic() {
        (SemiAmple, Citation::Thm2_1, "restriction to E(h) is numerically trivial in positive characteristic".to_string())
    } else if let Some(&i) = exceptional.iter().find(|&&i| s.curves[i].genus > 0) {
        return Ok(SemiampleVerdict::new(
            Undecidable,
            Citation::Prop2_4,
            format!("Prop 2.4 obstruction: {} in E(h) has genus {} in char 0", s.curves[i].id, s.curves[i].genus),
        ));
    } else {
        (SemiAmple, Citation::Thm2_1, "E(h) consists of rational curves".to_string())
    };
    let witness = contraction_witness(s, h, &exceptional)?;
    Ok(SemiampleVerdict { status, citation, reason, witness: Some(Box::new(witness)) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KodairaLabel {
    I0,
    I0Smooth,
    In(u32),
    II,
    III,
    IV,
    IStar(u32),
    IIStar,
    IIIStar,
    IVStar,
    Unclassified,
}

impl fmt::Display for KodairaLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KodairaLabel::I0 => write!(f, "I0"),
            KodairaLabel::I0Smooth => write!(f, "I0smooth"),
            KodairaLabel::In(n) => write!(f, "In({n})"),
            KodairaLabel::II => write!(f, "II"),
            KodairaLabel::III => write!(f, "III"),
            KodairaLabel::IV => write!(f, "IV"),
            KodairaLabel::IStar(n) => write!(f, "Istar({n})"),
            KodairaLabel::IIStar => write!(f, "IIstar"),
            KodairaLabel::IIIStar => write!(f, "IIIstar"),
            KodairaLabel::IVStar => write!(f, "IVstar"),
            KodairaLabel::Unclassified => write!(f, "Unclassified"),
        }
    }
}

/// An accepted indecomposable curve of canonical type `Y = Σ n_i Y_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalTypeConfig {
    pub components: Vec<(String, u32)>,
    pub kodaira_label: KodairaLabel,
    pub class: QVec,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CanonicalTypeOutcome {
    Accepted(CanonicalTypeConfig),
    Rejected(Vec<String>),
}

/// Checks `K·Y_i = Y·Y_i = 0`, connected support and `gcd(n_i) = 1`, then
/// labels the weighted dual graph against the Kodaira fibre catalogue.
pub fn detect_canonical_type(s: &LogSurface, components: &[(&str, u32)]) -> CanonicalTypeOutcome {
    let mut failures = Vec::new();
    let mut idx = Vec::new();
    for (id, n) in components {
        match s.curve_index(id) {
            Ok(i) => idx.push(i),
            Err(_) => failures.push(format!("unknown curve {id:?}")),
        }
        if *n == 0 {
            failures.push(format!("multiplicity of {id} must be positive"));
        }
    }
    let distinct: BTreeSet<usize> = idx.iter().copied().collect();
    if distinct.len() != idx.len() {
        failures.push("repeated component".to_string());
    }
    if components.is_empty() {
        failures.push("empty support".to_string());
    }
    if !failures.is_empty() {
        return CanonicalTypeOutcome::Rejected(failures);
    }

    let y = idx
        .iter()
        .zip(components)
        .fold(QVec::zeros(s.rank()), |acc, (&i, (_, n))| {
            acc.add_scaled(&int(i64::from(*n)), &s.curves[i].class)
        });
    for (&i, (id, _)) in idx.iter().zip(components) {
        let c = &s.curves[i].class;
        let kc = s.dot(s.canonical(), c);
        if !kc.is_zero() {
            failures.push(format!("K·{id} = {} ≠ 0", rational::format(&kc)));
        }
        let yc = s.dot(&y, c);
        if !yc.is_zero() {
            failures.push(format!("Y·{id} = {} ≠ 0", rational::format(&yc)));
        }
    }
    let neighbours = support_graph(s, &idx);
    if !is_connected(&neighbours) {
        failures.push("support is not connected".to_string());
    }
    let g = components
        .iter()
        .fold(0u32, |acc, (_, n)| acc.gcd(n));
    if g != 1 {
        failures.push(format!("gcd of multiplicities is {g}, not 1"));
    }
    if !failures.is_empty() {
        return CanonicalTypeOutcome::Rejected(failures);
    }
    assert!(s.dot(&y, &y).is_zero(), "Y·Y_i = 0 for all i forces Y² = 0");
    let kodaira_label = label(s, &idx, &neighbours);
    CanonicalTypeOutcome::Accepted(CanonicalTypeConfig {
        components: components.iter().map(|(id, n)| (id.to_string(), *n)).collect(),
        kodaira_label,
        class: y,
    })
}

fn support_graph(s: &LogSurface, idx: &[usize]) -> Vec<Vec<usize>> {
    (0..idx.len())
        .map(|a| {
            (0..idx.len())
                .filter(|&b| b != a && s.dot(&s.curves[idx[a]].class, &s.curves[idx[b]].class).is_positive())
                .collect()
        })
        .collect()
}

fn is_connected(neighbours: &[Vec<usize>]) -> bool {
    if neighbours.is_empty() {
        return true;
    }
    let mut seen = vec![false; neighbours.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for &j in &neighbours[i] {
            if !seen[j] {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.into_iter().all(|x| x)
}

/// Numerically, II/III/IV share their weighted dual graphs with I1/I2/I3 and
/// a smooth elliptic fibre; those cases are reported as `I0smooth`/`In`.
fn label(s: &LogSurface, idx: &[usize], neighbours: &[Vec<usize>]) -> KodairaLabel {
    let k = idx.len();
    let self_int = |a: usize| s.dot(&s.curves[idx[a]].class, &s.curves[idx[a]].class);
    if k == 1 {
        let c = &s.curves[idx[0]];
        return if c.genus == 1 && self_int(0).is_zero() {
            KodairaLabel::I0Smooth
        } else {
            KodairaLabel::Unclassified
        };
    }
    let minus_two = int(-2);
    if (0..k).any(|a| s.curves[idx[a]].genus != 0 || self_int(a) != minus_two) {
        return KodairaLabel::Unclassified;
    }
    let weight = |a: usize, b: usize| s.dot(&s.curves[idx[a]].class, &s.curves[idx[b]].class);
    if k == 2 {
        return if weight(0, 1) == int(2) { KodairaLabel::In(2) } else { KodairaLabel::Unclassified };
    }
    let simple = (0..k).all(|a| neighbours[a].iter().all(|&b| weight(a, b).is_one()));
    if !simple {
        return KodairaLabel::Unclassified;
    }
    let degrees: Vec<usize> = neighbours.iter().map(Vec::len).collect();
    let edges = degrees.iter().sum::<usize>() / 2;
    if edges == k && degrees.iter().all(|&d| d == 2) {
        return KodairaLabel::In(k as u32);
    }
    if edges != k - 1 {
        return KodairaLabel::Unclassified;
    }
    let branch: Vec<usize> = (0..k).filter(|&a| degrees[a] >= 3).collect();
    match branch.as_slice() {
        [c] if degrees[*c] == 4 && k == 5 => KodairaLabel::IStar(0),
        [c] if degrees[*c] == 3 => {
            let mut arms = arm_lengths(neighbours, *c);
            arms.sort_unstable();
            match arms.as_slice() {
                [2, 2, 2] => KodairaLabel::IVStar,
                [1, 3, 3] => KodairaLabel::IIIStar,
                [1, 2, 5] => KodairaLabel::IIStar,
                _ => KodairaLabel::Unclassified,
            }
        }
        [a, b] if degrees[*a] == 3 && degrees[*b] == 3 => {
            let leaves = |c: usize| arm_lengths(neighbours, c).iter().filter(|&&l| l == 1).count();
            if leaves(*a) >= 2 && leaves(*b) >= 2 {
                KodairaLabel::IStar(k as u32 - 5)
            } else {
                KodairaLabel::Unclassified
            }
        }
        _ => KodairaLabel::Unclassified,
    }
}

/// Searches for an accepted canonical-type configuration whose class is a
/// positive rational multiple of `p`. Candidates are curves orthogonal to both
/// `p` and `K`; each connected group with a one-dimensional positive null
/// vector is tried in declared order.
pub fn canonical_type_for(s: &LogSurface, p: &QVec) -> Option<CanonicalTypeConfig> {
    let candidates: Vec<usize> = (0..s.curves.len())
        .filter(|&i| {
            let c = &s.curves[i].class;
            s.dot(p, c).is_zero() && s.dot(s.canonical(), c).is_zero()
        })
        .collect();
    let neighbours = support_graph(s, &candidates);
    let mut seen = vec![false; candidates.len()];
    for start in 0..candidates.len() {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut k = 0;
        while k < comp.len() {
            for &j in &neighbours[comp[k]] {
                if !seen[j] {
                    seen[j] = true;
                    comp.push(j);
                }
            }
            k += 1;
        }
        comp.sort_unstable();
        let classes: Vec<QVec> = comp.iter().map(|&a| s.curves[candidates[a]].class.clone()).collect();
        let m = s.gram().gram_of(&classes).expect("declared classes");
        let (kernel, _) = linalg::null_space(&m.rows().to_vec(), comp.len());
        let [v] = kernel.as_slice() else { continue };
        let Some(mults) = primitive_positive(v) else { continue };
        let y = classes
            .iter()
            .zip(&mults)
            .fold(QVec::zeros(s.rank()), |acc, (c, n)| acc.add_scaled(&int(i64::from(*n)), c));
        if !is_positive_multiple(p, &y) {
            continue;
        }
        let comps: Vec<(&str, u32)> = comp
            .iter()
            .zip(&mults)
            .map(|(&a, &n)| (s.curves[candidates[a]].id.as_str(), n))
            .collect();
        if let CanonicalTypeOutcome::Accepted(cfg) = detect_canonical_type(s, &comps) {
            return Some(cfg);
        }
    }
    None
}

/// Scales a vector with entries of one strict sign to coprime positive integers.
fn primitive_positive(v: &[Rational]) -> Option<Vec<u32>> {
    let sign = if v.iter().all(|x| x.is_positive()) {
        Rational::one()
    } else if v.iter().all(|x| x.is_negative()) {
        -Rational::one()
    } else {
        return None;
    };
    let l = Rational::from_integer(rational::lcm_of_denominators(v));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &l * &sign).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    ints.iter().map(|x| u32::try_from(x / &g).ok()).collect()
}

fn is_positive_multiple(p: &QVec, y: &QVec) -> bool {
    let Some(j) = (0..y.len()).find(|&j| !y[j].is_zero()) else {
        return false;
    };
    let lambda = &p[j] / &y[j];
    lambda.is_positive() && y.scale(&lambda) == *p
}

/// Numerical Iitaka dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kappa {
    MinusInfinity,
    Zero,
    One,
    Two,
}

impl fmt::Display for Kappa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kappa::MinusInfinity => "-inf",
            Kappa::Zero => "0",
            Kappa::One => "1",
            Kappa::Two => "2",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KappaCertificate {
    NotPseudoEffective(String),
    Big,
    /// Positive part is zero; `q_linear` when torsion makes it `∼_Q 0`.
    NumericallyTrivial { q_linear: bool },
    CanonicalType(CanonicalTypeConfig),
    /// `κ = ν` only assuming abundance for the class.
    Numerical,
}

impl fmt::Display for KappaCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KappaCertificate::NotPseudoEffective(why) => write!(f, "not pseudo-effective ({why})"),
            KappaCertificate::Big => write!(f, "big"),
            KappaCertificate::NumericallyTrivial { q_linear: true } => write!(f, "numerically trivial, ~_Q 0"),
            KappaCertificate::NumericallyTrivial { q_linear: false } => write!(f, "numerically trivial"),
            KappaCertificate::CanonicalType(cfg) => write!(f, "fibration: canonical type {}", cfg.kodaira_label),
            KappaCertificate::Numerical => write!(f, "numerical"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KappaVerdict {
    pub value: Kappa,
    pub certificate: KappaCertificate,
    pub citation: Citation,
}

pub fn kappa(s: &LogSurface, d: &QVec) -> KappaVerdict {
    let z = match zariski(s, d) {
        ZariskiOutcome::NotPseudoEffective(why) => {
            return KappaVerdict {
                value: Kappa::MinusInfinity,
                certificate: KappaCertificate::NotPseudoEffective(why),
                citation: Citation::Thm1_2,
            }
        }
        ZariskiOutcome::Decomposition(z) => z,
    };
    let p = &z.positive;
    let square = s.dot(p, p);
    if square.is_positive() {
        return KappaVerdict { value: Kappa::Two, certificate: KappaCertificate::Big, citation: Citation::Thm3_1 };
    }
    if p.is_zero() {
        return KappaVerdict {
            value: Kappa::Zero,
            certificate: KappaCertificate::NumericallyTrivial {
                q_linear: s.field.is_positive_characteristic(),
            },
            citation: Citation::Thm5_1,
        };
    }
    match canonical_type_for(s, p) {
        Some(cfg) => KappaVerdict {
            value: Kappa::One,
            certificate: KappaCertificate::CanonicalType(cfg),
            citation: Citation::Def5_2,
        },
        None => KappaVerdict { value: Kappa::One, certificate: KappaCertificate::Numerical, citation: Citation::Thm1_2 },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use crate::surface::{BoundaryDivisor, CurveRecord, FieldMode, NsLattice};

    fn f1() -> LogSurface {
        LogSurface::new(
            NsLattice {
                gram: GramMatrix::diagonal(&[1, -1]),
                canonical: QVec::from_ints(&[-3, 1]),
                ample: QVec::from_ints(&[2, -1]),
            },
            vec![
                CurveRecord::new("e", QVec::from_ints(&[0, 1]), 0),
                CurveRecord::new("f", QVec::from_ints(&[1, -1]), 0),
            ],
            BoundaryDivisor::new(),
            FieldMode::Char0,
        )
    }

    fn decomposition(o: ZariskiOutcome) -> ZariskiDecomposition {
        match o {
            ZariskiOutcome::Decomposition(z) => z,
            other => panic!("expected decomposition, got {other:?}"),
        }
    }

    #[test]
    fn zariski_examples() {
        let s = f1();
        let z = decomposition(zariski(&s, &QVec::from_ints(&[0, 1])));
        assert!(z.positive.is_zero());
        assert_eq!(z.negative, vec![("e".to_string(), int(1))]);
        // (h + 2e − n e)·e = −2 + n = 0
        let z = decomposition(zariski(&s, &QVec::from_ints(&[1, 2])));
        assert_eq!(z.positive, QVec::from_ints(&[1, 0]));
        assert_eq!(z.negative, vec![("e".to_string(), int(2))]);
        // h − 2e = f − e is negative on the fibre, which has square 0
        assert!(matches!(zariski(&s, &QVec::from_ints(&[1, -2])), ZariskiOutcome::NotPseudoEffective(_)));
    }

    #[test]
    fn anti_nef_examples() {
        let s = f1();
        assert_eq!(anti_nef_support_divisor(&s, &["e"]).unwrap(), vec![("e".to_string(), int(1))]);
        let a2 = GramMatrix::from_ints(&[&[-2, 1], &[1, -2]]).unwrap();
        assert_eq!(anti_nef_coefficients(&a2), vec![int(1), int(1)]);
        let cusp = GramMatrix::from_ints(&[&[-3, 1, 1], &[1, -2, 1], &[1, 1, -2]]).unwrap();
        let x = anti_nef_coefficients(&cusp);
        for i in 0..3 {
            let d: Rational = (0..3).map(|j| cusp.entry(i, j) * &x[j]).sum();
            assert!(d.is_negative());
        }
        assert!(x.iter().all(|v| v.is_integer() && v.is_positive()));
        assert!(anti_nef_support_divisor(&s, &["f"]).is_err());
    }

    #[test]
    fn kodaira_split_on_f1() {
        let s = f1();
        let d = QVec::from_ints(&[2, 0]);
        let split = kodaira_split(&s, &d).unwrap();
        assert_eq!(split.k, 1);
        assert!(s.is_ample(&split.ample));
        let b = split.effective.iter().fold(QVec::zeros(2), |acc, (id, c)| {
            acc.add_scaled(c, &s.curve(id).unwrap().class)
        });
        assert_eq!(&split.ample + &b, d.scale(&int(i64::from(split.k))));
    }

    #[test]
    fn primitive_vectors() {
        assert_eq!(primitive_positive(&[frac(1, 2), int(1)]), Some(vec![1, 2]));
        assert_eq!(primitive_positive(&[int(-2), int(-2)]), Some(vec![1, 1]));
        assert_eq!(primitive_positive(&[int(1), int(-1)]), None);
    }
}
