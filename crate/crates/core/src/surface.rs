//! The log surface model and its positivity predicates.
//!
//! Every predicate here is relative to the declared curve list, which is
//! assumed to generate the cone of curves. Nefness, ampleness and the
//! exceptional locus are therefore finite checks against that list.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{GramMatrix, QVec, Signature};
use crate::positivity::{self, ZariskiOutcome};
use crate::rational::{self, int, one, Rational};

/// Characteristic of the (algebraically closed) ground field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldMode {
    Char0,
    /// `fp_closure` means the field is the algebraic closure of `F_p`.
    CharP { p: u64, fp_closure: bool },
}

impl FieldMode {
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldMode::Char0 => 0,
            FieldMode::CharP { p, .. } => *p,
        }
    }

    pub fn is_positive_characteristic(&self) -> bool {
        matches!(self, FieldMode::CharP { .. })
    }

    pub fn is_fp_closure(&self) -> bool {
        matches!(self, FieldMode::CharP { fp_closure: true, .. })
    }
}

impl fmt::Display for FieldMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldMode::Char0 => write!(f, "char 0"),
            FieldMode::CharP { p, fp_closure: true } => write!(f, "closure of F_{p}"),
            FieldMode::CharP { p, fp_closure: false } => write!(f, "char {p}"),
        }
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// An irreducible curve with its class and arithmetic genus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveRecord {
    pub id: String,
    pub class: QVec,
    pub genus: u32,
}

impl CurveRecord {
    pub fn new(id: impl Into<String>, class: QVec, genus: u32) -> Self {
        CurveRecord { id: id.into(), class, genus }
    }
}

/// Boundary `Δ = Σ coeff · C`, keyed by curve id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BoundaryDivisor {
    terms: BTreeMap<String, Rational>,
}

impl BoundaryDivisor {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_terms<I, S>(terms: I) -> Self
    where
        I: IntoIterator<Item = (S, Rational)>,
        S: Into<String>,
    {
        let mut b = Self::new();
        for (id, c) in terms {
            b.insert(id, c);
        }
        b
    }

    /// Sets a coefficient; a zero coefficient removes the term.
    pub fn insert(&mut self, id: impl Into<String>, coeff: Rational) {
        let id = id.into();
        if coeff.is_zero() {
            self.terms.remove(&id);
        } else {
            self.terms.insert(id, coeff);
        }
    }

    pub fn coefficient(&self, id: &str) -> Rational {
        self.terms.get(id).cloned().unwrap_or_else(rational::zero)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.terms.contains_key(id)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Rational)> {
        self.terms.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub(crate) fn remove(&mut self, id: &str) -> Option<Rational> {
        self.terms.remove(id)
    }

    /// Coefficient-wise round-down, round-up and fractional part.
    pub fn round(&self) -> RoundedDivisor {
        let mut out = RoundedDivisor::default();
        for (id, c) in &self.terms {
            let fl = c.floor();
            let ce = c.ceil();
            let fr = c - &fl;
            for (map, v) in [(&mut out.floor, fl), (&mut out.ceil, ce), (&mut out.frac, fr)] {
                if !v.is_zero() {
                    map.insert(id.clone(), v);
                }
            }
        }
        out
    }
}

/// Output of [`BoundaryDivisor::round`]; zero entries are omitted.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RoundedDivisor {
    pub floor: BTreeMap<String, Rational>,
    pub ceil: BTreeMap<String, Rational>,
    pub frac: BTreeMap<String, Rational>,
}

/// `Num(X)` as a rational lattice with its canonical and reference ample classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NsLattice {
    pub gram: GramMatrix,
    pub canonical: QVec,
    pub ample: QVec,
}

/// A failed invariant of a [`LogSurface`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    GramNotSymmetric { row: usize, col: usize },
    GramDegenerate,
    SignatureNotHodge(Signature),
    RankMismatch { what: String, expected: usize, found: usize },
    AmpleNotPositive { square: Rational },
    AmpleNotPositiveOn { curve: String, degree: Rational },
    DuplicateCurveId(String),
    DuplicateNegativeClass { first: String, second: String },
    ZeroClass(String),
    NegativeIntersection { first: String, second: String, value: Rational },
    Adjunction { curve: String, genus: u32, adjunction_genus: Rational },
    AdjunctionParity { curve: String },
    BoundaryRange { curve: String, coeff: Rational },
    BoundaryUnknownCurve(String),
    FieldNotPrime(u64),
    FpClosureNotQFactorial,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        let q = rational::format;
        match self {
            GramNotSymmetric { row, col } => write!(f, "gram not symmetric ({row},{col})"),
            GramDegenerate => write!(f, "gram degenerate: determinant is 0"),
            SignatureNotHodge(s) => write!(f, "signature violation: {s} is not (1,rank-1,0)"),
            RankMismatch { what, expected, found } => {
                write!(f, "rank violation on {what}: expected {expected}, found {found}")
            }
            AmpleNotPositive { square } => {
                write!(f, "ample violation: H² = {} is not positive", q(square))
            }
            AmpleNotPositiveOn { curve, degree } => {
                write!(f, "ample violation on {curve:?}: H·C = {} is not positive", q(degree))
            }
            DuplicateCurveId(id) => write!(f, "duplicate curve id {id:?}"),
            DuplicateNegativeClass { first, second } => {
                write!(f, "closed-world violation: {first:?} and {second:?} share a negative class")
            }
            ZeroClass(id) => write!(f, "curve {id:?} has the zero class"),
            NegativeIntersection { first, second, value } => write!(
                f,
                "intersection violation: distinct curves {first:?}·{second:?} = {} < 0",
                q(value)
            ),
            Adjunction { curve, genus, adjunction_genus } => write!(
                f,
                "adjunction violation on {curve:?}: declared genus {genus}, adjunction gives {}",
                q(adjunction_genus)
            ),
            AdjunctionParity { curve } => {
                write!(f, "parity violation on {curve:?}: C²+K·C is not an even integer")
            }
            BoundaryRange { curve, coeff } => {
                write!(f, "boundary range violation on {curve:?}: coefficient {} not in (0,1]", q(coeff))
            }
            BoundaryUnknownCurve(id) => write!(f, "boundary references undeclared curve {id:?}"),
            FieldNotPrime(p) => write!(f, "field violation: characteristic {p} is not prime"),
            FpClosureNotQFactorial => {
                write!(f, "field violation: surfaces over the closure of F_p are Q-factorial")
            }
        }
    }
}

/// A log surface `(X, Δ)` presented by its intersection lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogSurface {
    pub lattice: NsLattice,
    pub curves: Vec<CurveRecord>,
    pub boundary: BoundaryDivisor,
    pub field: FieldMode,
    pub q_factorial: bool,
    pub rational_sing: bool,
    /// The ambient surface is smooth; adjunction is only checked when set.
    pub smooth: bool,
}

impl LogSurface {
    /// A smooth surface with rational singularities (none) and Q-factorial.
    pub fn new(
        lattice: NsLattice,
        curves: Vec<CurveRecord>,
        boundary: BoundaryDivisor,
        field: FieldMode,
    ) -> Self {
        LogSurface {
            lattice,
            curves,
            boundary,
            field,
            q_factorial: true,
            rational_sing: true,
            smooth: true,
        }
    }

    pub fn rank(&self) -> usize {
        self.lattice.gram.rank()
    }

    pub fn gram(&self) -> &GramMatrix {
        &self.lattice.gram
    }

    pub fn canonical(&self) -> &QVec {
        &self.lattice.canonical
    }

    pub fn ample(&self) -> &QVec {
        &self.lattice.ample
    }

    pub fn pair(&self, a: &QVec, b: &QVec) -> Result<Rational> {
        self.lattice.gram.pair(a, b)
    }

    pub(crate) fn dot(&self, a: &QVec, b: &QVec) -> Rational {
        self.lattice.gram.dot(a, b)
    }

    /// Rejects classes of the wrong rank.
    pub fn check_class(&self, c: &QVec) -> Result<()> {
        if c.len() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), found: c.len() });
        }
        Ok(())
    }

    pub fn curve_index(&self, id: &str) -> Result<usize> {
        self.curves
            .iter()
            .position(|c| c.id == id)
            .ok_or_else(|| Error::UnknownCurve(id.to_string()))
    }

    pub fn curve(&self, id: &str) -> Result<&CurveRecord> {
        self.curve_index(id).map(|i| &self.curves[i])
    }

    /// All invariant violations; empty iff the surface is well formed.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let n = self.rank();
        let gram = &self.lattice.gram;

        if let Some(p) = Some(self.field.characteristic()).filter(|&p| p != 0) {
            if !is_prime(p) {
                out.push(Violation::FieldNotPrime(p));
            }
        }
        if self.field.is_fp_closure() && !self.q_factorial {
            out.push(Violation::FpClosureNotQFactorial);
        }

        let mut ranks_ok = true;
        let mut check_rank = |what: String, v: &QVec, out: &mut Vec<Violation>| {
            if v.len() != n {
                ranks_ok = false;
                out.push(Violation::RankMismatch { what, expected: n, found: v.len() });
            }
        };
        check_rank("canonical".into(), &self.lattice.canonical, &mut out);
        check_rank("ample".into(), &self.lattice.ample, &mut out);
        for c in &self.curves {
            check_rank(format!("curve {:?}", c.id), &c.class, &mut out);
        }

        let symmetric = match gram.asymmetry() {
            Some((i, j)) => {
                out.push(Violation::GramNotSymmetric { row: i + 1, col: j + 1 });
                false
            }
            None => true,
        };
        if symmetric {
            if gram.determinant().is_zero() {
                out.push(Violation::GramDegenerate);
            }
            let sig = gram.signature().expect("checked symmetric");
            if !sig.is_hodge() {
                out.push(Violation::SignatureNotHodge(sig));
            }
        }

        let mut seen: HashMap<&str, usize> = HashMap::new();
        for c in &self.curves {
            if seen.insert(c.id.as_str(), 0).is_some() {
                out.push(Violation::DuplicateCurveId(c.id.clone()));
            }
        }

        for (id, coeff) in self.boundary.iter() {
            if !coeff.is_positive() || coeff > &one() {
                out.push(Violation::BoundaryRange { curve: id.clone(), coeff: coeff.clone() });
            }
            if !self.curves.iter().any(|c| &c.id == id) {
                out.push(Violation::BoundaryUnknownCurve(id.clone()));
            }
        }

        if !ranks_ok {
            return out;
        }

        let h = &self.lattice.ample;
        let h2 = self.dot(h, h);
        if !h2.is_positive() {
            out.push(Violation::AmpleNotPositive { square: h2 });
        }
        for c in &self.curves {
            if c.class.is_zero() {
                out.push(Violation::ZeroClass(c.id.clone()));
                continue;
            }
            let degree = self.dot(h, &c.class);
            if !degree.is_positive() {
                out.push(Violation::AmpleNotPositiveOn { curve: c.id.clone(), degree });
            }
            let c2_plus_kc = self.dot(&c.class, &c.class) + self.dot(&self.lattice.canonical, &c.class);
            if c.class.is_integral() && self.lattice.canonical.is_integral() {
                let even = c2_plus_kc.is_integer() && c2_plus_kc.to_integer().is_even();
                if !even {
                    out.push(Violation::AdjunctionParity { curve: c.id.clone() });
                }
            }
            if self.smooth {
                let ag = one() + &c2_plus_kc / int(2);
                if ag != int(i64::from(c.genus)) {
                    out.push(Violation::Adjunction {
                        curve: c.id.clone(),
                        genus: c.genus,
                        adjunction_genus: ag,
                    });
                }
            }
        }

        for (i, a) in self.curves.iter().enumerate() {
            for b in &self.curves[i + 1..] {
                if a.id == b.id {
                    continue;
                }
                let v = self.dot(&a.class, &b.class);
                if a.class == b.class && self.dot(&a.class, &a.class).is_negative() {
                    out.push(Violation::DuplicateNegativeClass {
                        first: a.id.clone(),
                        second: b.id.clone(),
                    });
                } else if v.is_negative() {
                    out.push(Violation::NegativeIntersection {
                        first: a.id.clone(),
                        second: b.id.clone(),
                        value: v,
                    });
                }
            }
        }
        out
    }

    /// `Err(InvalidSurface)` unless `validate` is empty.
    pub fn ensure_valid(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidSurface(v))
        }
    }

    /// `1 + (c² + K·c)/2`
    pub fn adjunction_genus(&self, c: &QVec) -> Rational {
        one() + (self.dot(c, c) + self.dot(self.canonical(), c)) / int(2)
    }

    /// `K + Σ coeff_i · C_i`
    pub fn log_canonical_class(&self) -> Result<QVec> {
        let mut k = self.canonical().clone();
        for (id, coeff) in self.boundary.iter() {
            let c = self.curve(id)?;
            k = k.add_scaled(coeff, &c.class);
        }
        Ok(k)
    }

    /// `d·C ≥ 0` for every declared curve.
    pub fn is_nef(&self, d: &QVec) -> bool {
        self.curves.iter().all(|c| !self.dot(d, &c.class).is_negative())
    }

    /// Nakai: `d² > 0` and `d·C > 0` for every declared curve.
    pub fn is_ample(&self, d: &QVec) -> bool {
        self.dot(d, d).is_positive() && self.curves.iter().all(|c| self.dot(d, &c.class).is_positive())
    }

    /// For nef `d`: `d² > 0`. Otherwise the Zariski positive part must have
    /// positive square.
    pub fn is_big(&self, d: &QVec) -> bool {
        if self.is_nef(d) {
            return self.dot(d, d).is_positive();
        }
        match positivity::zariski(self, d) {
            ZariskiOutcome::Decomposition(z) => self.dot(&z.positive, &z.positive).is_positive(),
            ZariskiOutcome::NotPseudoEffective(_) => false,
        }
    }

    /// Certified by the Zariski reduction terminating with a nef positive part.
    pub fn is_pseudo_effective(&self, d: &QVec) -> bool {
        matches!(positivity::zariski(self, d), ZariskiOutcome::Decomposition(_))
    }

    pub(crate) fn exceptional_indices(&self, h: &QVec) -> Result<Vec<usize>> {
        if !self.is_nef(h) {
            return Err(Error::NotNef(h.to_string()));
        }
        if !self.dot(h, h).is_positive() {
            return Err(Error::NotBig(h.to_string()));
        }
        let idx: Vec<usize> = (0..self.curves.len())
            .filter(|&i| self.dot(h, &self.curves[i].class).is_zero())
            .collect();
        let classes: Vec<QVec> = idx.iter().map(|&i| self.curves[i].class.clone()).collect();
        if !self.lattice.gram.spans_negative_definite(&classes)? {
            return Err(Error::InconsistentClosedWorld(format!(
                "curves orthogonal to nef and big {h} do not span a negative-definite lattice"
            )));
        }
        Ok(idx)
    }

    /// `E(h)`: the declared curves with `h·C = 0`, for `h` nef and big.
    pub fn exceptional_locus(&self, h: &QVec) -> Result<Vec<String>> {
        Ok(self
            .exceptional_indices(h)?
            .into_iter()
            .map(|i| self.curves[i].id.clone())
            .collect())
    }
}
