//! Rational symmetric bilinear forms: intersection pairings, exact inertia,
//! negative-definiteness, and the orthogonal-complement quotient that models
//! contracting a negative-definite configuration of curves.

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::rational::{self, int, one, zero, Rational};

/// A divisor class in lattice coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QVec(Vec<Rational>);

impl QVec {
    pub fn new(coords: Vec<Rational>) -> Self {
        QVec(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        QVec(coords.iter().map(|&c| int(c)).collect())
    }

    pub fn zeros(rank: usize) -> Self {
        QVec(vec![zero(); rank])
    }

    pub fn basis(rank: usize, i: usize) -> Self {
        let mut v = Self::zeros(rank);
        v.0[i] = one();
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|q| q.is_integer())
    }

    pub fn scale(&self, factor: &Rational) -> QVec {
        QVec(self.0.iter().map(|x| x * factor).collect())
    }

    /// `self + factor · other`
    pub fn add_scaled(&self, factor: &Rational, other: &QVec) -> QVec {
        assert_eq!(self.len(), other.len(), "rank mismatch");
        QVec(self.0.iter().zip(&other.0).map(|(a, b)| a + factor * b).collect())
    }

    /// Appends a coordinate (rank extension).
    pub fn extended(&self, last: Rational) -> QVec {
        let mut c = self.0.clone();
        c.push(last);
        QVec(c)
    }

    /// The primitive integral vector on the ray through `self` (zero stays zero).
    pub fn primitive(&self) -> QVec {
        let l = rational::lcm_of_denominators(&self.0);
        let ints = self.scale(&Rational::from_integer(l));
        let g = ints.0.iter().fold(BigInt::zero(), |acc, x| acc.gcd(&x.to_integer()));
        if g.is_zero() {
            return ints;
        }
        ints.scale(&Rational::from_integer(g).recip())
    }
}

impl Index<usize> for QVec {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl Add for &QVec {
    type Output = QVec;
    fn add(self, rhs: &QVec) -> QVec {
        assert_eq!(self.len(), rhs.len(), "rank mismatch");
        QVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &QVec {
    type Output = QVec;
    fn sub(self, rhs: &QVec) -> QVec {
        assert_eq!(self.len(), rhs.len(), "rank mismatch");
        QVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &QVec {
    type Output = QVec;
    fn neg(self) -> QVec {
        QVec(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for QVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(rational::format).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Inertia of a symmetric form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Signature {
    pub positives: usize,
    pub negatives: usize,
    pub zeros: usize,
}

impl Signature {
    pub fn new(positives: usize, negatives: usize, zeros: usize) -> Self {
        Signature { positives, negatives, zeros }
    }

    pub fn dim(&self) -> usize {
        self.positives + self.negatives + self.zeros
    }

    /// `(1, ρ−1, 0)`
    pub fn is_hodge(&self) -> bool {
        self.positives == 1 && self.zeros == 0
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.positives, self.negatives, self.zeros)
    }
}

/// Square matrix of intersection numbers. Symmetry is not enforced at
/// construction so that malformed inputs can be reported as violations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramMatrix {
    rows: Matrix,
}

impl GramMatrix {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::NotSquare { rows: n, cols: bad.len() });
        }
        Ok(GramMatrix { rows })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let n = entries.len();
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { int(entries[i]) } else { zero() }).collect())
            .collect();
        GramMatrix { rows }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    /// First asymmetric position `(i, j)` with `i < j`, if any.
    pub fn asymmetry(&self) -> Option<(usize, usize)> {
        let n = self.rank();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| self.rows[i][j] != self.rows[j][i])
    }

    pub fn is_symmetric(&self) -> bool {
        self.asymmetry().is_none()
    }

    fn check_symmetric(&self) -> Result<()> {
        match self.asymmetry() {
            Some((i, j)) => Err(Error::NotSymmetric { row: i + 1, col: j + 1 }),
            None => Ok(()),
        }
    }

    pub fn determinant(&self) -> Rational {
        linalg::determinant(&self.rows)
    }

    fn check_dim(&self, v: &QVec) -> Result<()> {
        if v.len() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), found: v.len() });
        }
        Ok(())
    }

    /// Intersection number `aᵀ · G · b`.
    pub fn pair(&self, a: &QVec, b: &QVec) -> Result<Rational> {
        self.check_dim(a)?;
        self.check_dim(b)?;
        let mut total = zero();
        for (i, ai) in a.0.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            let row_dot: Rational = self.rows[i]
                .iter()
                .zip(&b.0)
                .filter(|(_, bj)| !bj.is_zero())
                .map(|(g, bj)| g * bj)
                .sum();
            total += ai * row_dot;
        }
        Ok(total)
    }

    /// `pair` for classes already known to have the right rank.
    pub(crate) fn dot(&self, a: &QVec, b: &QVec) -> Rational {
        self.pair(a, b).expect("class rank matches lattice rank")
    }

    pub fn square(&self, a: &QVec) -> Result<Rational> {
        self.pair(a, a)
    }

    /// Gram matrix of the given classes under this form.
    pub fn gram_of(&self, classes: &[QVec]) -> Result<GramMatrix> {
        for c in classes {
            self.check_dim(c)?;
        }
        let rows = classes
            .iter()
            .map(|a| classes.iter().map(|b| self.dot(a, b)).collect())
            .collect();
        Ok(GramMatrix { rows })
    }

    pub fn principal(&self, subset: &[usize]) -> Result<GramMatrix> {
        let n = self.rank();
        if let Some(&bad) = subset.iter().find(|&&i| i >= n) {
            return Err(Error::IndexOutOfRange { index: bad, rank: n });
        }
        let rows = subset
            .iter()
            .map(|&i| subset.iter().map(|&j| self.rows[i][j].clone()).collect())
            .collect();
        Ok(GramMatrix { rows })
    }

    /// `Uᵀ · G · U` for a square `u` given by rows.
    pub fn congruent(&self, u: &[Vec<Rational>]) -> Result<GramMatrix> {
        let n = self.rank();
        if u.len() != n || u.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: u.len() });
        }
        let cols: Vec<QVec> = (0..n).map(|j| QVec((0..n).map(|i| u[i][j].clone()).collect())).collect();
        self.gram_of(&cols)
    }

    /// Exact inertia by symmetric elimination with diagonal pivoting. When
    /// every remaining diagonal entry vanishes but some off-diagonal entry
    /// `a_ij` does not, row/column `j` is added to row/column `i` (a
    /// congruence), which makes the new diagonal entry `2·a_ij ≠ 0`.
    pub fn signature(&self) -> Result<Signature> {
        self.check_symmetric()?;
        let mut a = self.rows.clone();
        let mut alive: Vec<usize> = (0..self.rank()).collect();
        let mut sig = Signature::new(0, 0, 0);
        while !alive.is_empty() {
            let pivot = alive.iter().position(|&i| !a[i][i].is_zero());
            let pivot = match pivot {
                Some(p) => p,
                None => {
                    let pair = alive.iter().enumerate().find_map(|(pi, &i)| {
                        alive.iter().find(|&&j| j != i && !a[i][j].is_zero()).map(|&j| (pi, i, j))
                    });
                    let Some((pi, i, j)) = pair else {
                        sig.zeros += alive.len();
                        break;
                    };
                    // row_i += row_j, then col_i += col_j
                    for &k in &alive {
                        let v = a[j][k].clone();
                        a[i][k] += v;
                    }
                    for &k in &alive {
                        let v = a[k][j].clone();
                        a[k][i] += v;
                    }
                    pi
                }
            };
            let p = alive.remove(pivot);
            let d = a[p][p].clone();
            if d.is_positive() {
                sig.positives += 1;
            } else {
                sig.negatives += 1;
            }
            for &r in &alive {
                if a[r][p].is_zero() {
                    continue;
                }
                let factor = &a[r][p] / &d;
                for &c in &alive {
                    let delta = &factor * &a[p][c];
                    a[r][c] -= delta;
                }
            }
        }
        Ok(sig)
    }

    /// Whether the principal submatrix on `subset` has signature `(0, |subset|, 0)`.
    pub fn is_negative_definite(&self, subset: &[usize]) -> Result<bool> {
        let sub = self.principal(subset)?;
        let sig = sub.signature()?;
        Ok(sig.negatives == subset.len())
    }

    /// Whether the classes span a negative-definite sublattice of the same
    /// dimension (in particular they are linearly independent).
    pub fn spans_negative_definite(&self, classes: &[QVec]) -> Result<bool> {
        let g = self.gram_of(classes)?;
        Ok(g.signature()?.negatives == classes.len())
    }

    /// Quotient by the span of the coordinate vectors in `subset`.
    pub fn contract_quotient(&self, subset: &[usize]) -> Result<(GramMatrix, QuotientProjection)> {
        let n = self.rank();
        if let Some(&bad) = subset.iter().find(|&&i| i >= n) {
            return Err(Error::IndexOutOfRange { index: bad, rank: n });
        }
        let span: Vec<QVec> = subset.iter().map(|&i| QVec::basis(n, i)).collect();
        let proj = QuotientProjection::new(self, span)?;
        Ok((proj.quotient_gram().clone(), proj))
    }
}

/// Orthogonal projection away from a negative-definite span `V`, together
/// with coordinates on `V^⊥`.
///
/// `project(a) = a − σ(a)` where `σ` is orthogonal projection onto `V`; this
/// is the numerical pullback of the pushforward of `a` under the contraction
/// of `V`. `pushforward(a)` expresses `project(a)` in a basis of `V^⊥` whose
/// members have the identity pattern on a fixed set of "free" coordinates, so
/// the coordinates are read off directly.
#[derive(Debug, Clone)]
pub struct QuotientProjection {
    source: GramMatrix,
    span: Vec<QVec>,
    span_gram_inv: Matrix,
    complement: Vec<QVec>,
    free: Vec<usize>,
    quotient: GramMatrix,
}

impl QuotientProjection {
    pub fn new(source: &GramMatrix, span: Vec<QVec>) -> Result<Self> {
        source.check_symmetric()?;
        let n = source.rank();
        let m = source.gram_of(&span)?;
        if m.signature()?.negatives != span.len() {
            return Err(Error::NotNegativeDefinite { what: "contracted span".into() });
        }
        let span_gram_inv = linalg::inverse(&m.rows).expect("negative definite is invertible");
        // rows of Vᵀ G
        let constraints: Matrix = span
            .iter()
            .map(|v| (0..n).map(|j| source.dot(v, &QVec::basis(n, j))).collect())
            .collect();
        let (basis, free) = linalg::null_space(&constraints, n);
        let complement: Vec<QVec> = basis.into_iter().map(QVec).collect();
        let quotient = source.gram_of(&complement)?;
        Ok(QuotientProjection {
            source: source.clone(),
            span,
            span_gram_inv,
            complement,
            free,
            quotient,
        })
    }

    pub fn source_rank(&self) -> usize {
        self.source.rank()
    }

    pub fn target_rank(&self) -> usize {
        self.complement.len()
    }

    pub fn quotient_gram(&self) -> &GramMatrix {
        &self.quotient
    }

    pub fn span(&self) -> &[QVec] {
        &self.span
    }

    /// Coefficients `c` with `σ(a) = Σ c_i v_i`.
    pub fn span_coefficients(&self, a: &QVec) -> Vec<Rational> {
        let rhs: Vec<Rational> = self.span.iter().map(|v| self.source.dot(v, a)).collect();
        self.span_gram_inv
            .iter()
            .map(|row| row.iter().zip(&rhs).map(|(x, y)| x * y).sum())
            .collect()
    }

    /// `σ(a)`, the orthogonal projection onto the contracted span.
    pub fn span_part(&self, a: &QVec) -> QVec {
        let c = self.span_coefficients(a);
        self.span
            .iter()
            .zip(&c)
            .fold(QVec::zeros(self.source_rank()), |acc, (v, ci)| acc.add_scaled(ci, v))
    }

    /// `a − σ(a)`, in source coordinates. Idempotent; kernel is exactly the span.
    pub fn project(&self, a: &QVec) -> QVec {
        a - &self.span_part(a)
    }

    /// `a − σ(a)` in quotient coordinates.
    pub fn pushforward(&self, a: &QVec) -> QVec {
        let p = self.project(a);
        QVec(self.free.iter().map(|&f| p[f].clone()).collect())
    }

    /// Inverse of `pushforward` on `V^⊥`: quotient coordinates to source class.
    pub fn lift(&self, y: &QVec) -> QVec {
        assert_eq!(y.len(), self.target_rank(), "quotient rank mismatch");
        self.complement
            .iter()
            .zip(&y.0)
            .fold(QVec::zeros(self.source_rank()), |acc, (b, yi)| acc.add_scaled(yi, b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use proptest::prelude::*;

    fn cxc() -> GramMatrix {
        GramMatrix::from_ints(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, -2]]).unwrap()
    }

    #[test]
    fn pair_examples() {
        let p2 = GramMatrix::from_ints(&[&[1]]).unwrap();
        let h = QVec::from_ints(&[1]);
        assert_eq!(p2.pair(&h, &h).unwrap(), int(1));
        // L = 2 f1 + δ
        let l = QVec::from_ints(&[2, 0, 1]);
        assert_eq!(cxc().pair(&l, &l).unwrap(), int(2));
        assert_eq!(cxc().pair(&l, &QVec::zeros(3)).unwrap(), int(0));
        assert!(matches!(
            cxc().pair(&l, &h),
            Err(Error::DimensionMismatch { expected: 3, found: 1 })
        ));
    }

    #[test]
    fn signature_examples() {
        let one = GramMatrix::from_ints(&[&[1]]).unwrap();
        assert_eq!(one.signature().unwrap(), Signature::new(1, 0, 0));
        assert_eq!(cxc().signature().unwrap(), Signature::new(1, 2, 0));
        let i3 = GramMatrix::from_ints(&[&[-2, 1, 1], &[1, -2, 1], &[1, 1, -2]]).unwrap();
        assert_eq!(i3.signature().unwrap(), Signature::new(0, 2, 1));
        let hyperbolic = GramMatrix::from_ints(&[&[0, 1], &[1, 0]]).unwrap();
        assert_eq!(hyperbolic.signature().unwrap(), Signature::new(1, 1, 0));
        let asym = GramMatrix::from_ints(&[&[1, 0], &[2, -1]]).unwrap();
        assert_eq!(asym.signature(), Err(Error::NotSymmetric { row: 1, col: 2 }));
    }

    #[test]
    fn negative_definite_examples() {
        let single = GramMatrix::from_ints(&[&[-1]]).unwrap();
        assert!(single.is_negative_definite(&[0]).unwrap());
        let cusp = GramMatrix::from_ints(&[&[-3, 1, 1], &[1, -2, 1], &[1, 1, -2]]).unwrap();
        assert!(cusp.is_negative_definite(&[0, 1, 2]).unwrap());
        let i3 = GramMatrix::from_ints(&[&[-2, 1, 1], &[1, -2, 1], &[1, 1, -2]]).unwrap();
        assert!(!i3.is_negative_definite(&[0, 1, 2]).unwrap());
        assert!(i3.is_negative_definite(&[0, 1]).unwrap());
        assert!(matches!(i3.is_negative_definite(&[3]), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn contract_f1_exceptional() {
        let f1 = GramMatrix::diagonal(&[1, -1]);
        let (q, proj) = f1.contract_quotient(&[1]).unwrap();
        assert_eq!(q, GramMatrix::diagonal(&[1]));
        let a = QVec::new(vec![frac(5, 2), int(7)]);
        assert_eq!(proj.pushforward(&a), QVec::new(vec![frac(5, 2)]));
        let k = QVec::from_ints(&[-3, 1]);
        assert_eq!(proj.pushforward(&k), QVec::from_ints(&[-3]));
        let h = QVec::from_ints(&[1, 0]);
        let ph = proj.pushforward(&h);
        assert_eq!(q.pair(&ph, &ph).unwrap(), int(1));
        assert!(f1.contract_quotient(&[0]).is_err());
    }

    fn small_vec(n: usize) -> impl Strategy<Value = QVec> {
        proptest::collection::vec((-6i64..=6, 1i64..=4), n)
            .prop_map(|v| QVec::new(v.into_iter().map(|(a, b)| frac(a, b)).collect()))
    }

    proptest! {
        #[test]
        fn pair_is_bilinear_and_symmetric(a in small_vec(3), b in small_vec(3), c in small_vec(3), s in -5i64..=5) {
            let g = cxc();
            prop_assert_eq!(g.pair(&a, &b).unwrap(), g.pair(&b, &a).unwrap());
            let lhs = g.pair(&a.add_scaled(&int(s), &b), &c).unwrap();
            let rhs = g.pair(&a, &c).unwrap() + int(s) * g.pair(&b, &c).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn projection_is_idempotent_and_preserves_orthogonal_pairing(a in small_vec(3), b in small_vec(3)) {
            let g = cxc();
            let delta = QVec::from_ints(&[0, 0, 1]);
            let proj = QuotientProjection::new(&g, vec![delta.clone()]).unwrap();
            let pa = proj.project(&a);
            prop_assert_eq!(proj.project(&pa), pa.clone());
            prop_assert!(proj.project(&delta).is_zero());
            let q = proj.quotient_gram();
            let lhs = q.pair(&proj.pushforward(&a), &proj.pushforward(&b)).unwrap();
            let rhs = g.pair(&(&a - &proj.span_part(&a)), &(&b - &proj.span_part(&b))).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(proj.lift(&proj.pushforward(&a)), pa);
        }
    }
}
