//! Discrepancies of exceptional curve configurations and the resulting
//! singularity verdicts.
//!
//! For a negative-definite configuration `E_1..E_n` contracted to a point,
//! the discrepancies `a` of the pushed-forward pair solve `M·a = b` where `M`
//! is the intersection matrix and `b_j = K·E_j + Σ_B coeff_B (B·E_j)` over
//! boundary curves `B` that are not contracted but meet the configuration.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::GramMatrix;
use crate::linalg;
use crate::rational::{self, int, Rational};
use crate::surface::FieldMode;

/// One exceptional curve of a cluster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterCurve {
    pub id: String,
    pub self_intersection: Rational,
    pub genus: u32,
    /// `K·E`. On a smooth ambient surface this is `2g − 2 − E²`.
    pub canonical_degree: Rational,
}

impl ClusterCurve {
    /// Curve on a smooth surface; `K·E` from adjunction.
    pub fn new(id: impl Into<String>, self_intersection: Rational, genus: u32) -> Self {
        let canonical_degree = int(2 * i64::from(genus) - 2) - &self_intersection;
        ClusterCurve { id: id.into(), self_intersection, genus, canonical_degree }
    }

    pub fn with_canonical_degree(
        id: impl Into<String>,
        self_intersection: Rational,
        genus: u32,
        canonical_degree: Rational,
    ) -> Self {
        ClusterCurve { id: id.into(), self_intersection, genus, canonical_degree }
    }
}

/// A boundary curve through the singular point, given by its coefficient and
/// its intersection numbers with each cluster curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryBranch {
    pub id: String,
    pub coeff: Rational,
    pub meets: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExceptionalCluster {
    pub curves: Vec<ClusterCurve>,
    /// Pairwise intersection numbers; the diagonal is ignored.
    pub adjacency: Vec<Vec<Rational>>,
    pub boundary: Vec<BoundaryBranch>,
}

impl ExceptionalCluster {
    pub fn new(
        curves: Vec<ClusterCurve>,
        adjacency: Vec<Vec<Rational>>,
        boundary: Vec<BoundaryBranch>,
    ) -> Result<Self> {
        let n = curves.len();
        if adjacency.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: adjacency.len() });
        }
        if let Some(row) = adjacency.iter().find(|r| r.len() != n) {
            return Err(Error::NotSquare { rows: n, cols: row.len() });
        }
        for i in 0..n {
            for j in i + 1..n {
                if adjacency[i][j] != adjacency[j][i] {
                    return Err(Error::NotSymmetric { row: i + 1, col: j + 1 });
                }
            }
        }
        if let Some(b) = boundary.iter().find(|b| b.meets.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: b.meets.len() });
        }
        Ok(ExceptionalCluster { curves, adjacency, boundary })
    }

    /// A chain `E_1 – E_2 – …` of smooth rational curves with the given
    /// self-intersections, each consecutive pair meeting once.
    pub fn rational_chain(self_intersections: &[i64]) -> Self {
        let n = self_intersections.len();
        let curves = self_intersections
            .iter()
            .enumerate()
            .map(|(i, &s)| ClusterCurve::new(format!("E{}", i + 1), int(s), 0))
            .collect();
        let adjacency = (0..n)
            .map(|i| (0..n).map(|j| if i.abs_diff(j) == 1 { int(1) } else { int(0) }).collect())
            .collect();
        ExceptionalCluster { curves, adjacency, boundary: vec![] }
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    /// Intersection matrix with self-intersections on the diagonal.
    pub fn gram(&self) -> GramMatrix {
        let n = self.len();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            self.curves[i].self_intersection.clone()
                        } else {
                            self.adjacency[i][j].clone()
                        }
                    })
                    .collect()
            })
            .collect();
        GramMatrix::new(rows).expect("square by construction")
    }

    /// Right-hand side `b_j = K·E_j + Σ_B coeff_B (B·E_j)`.
    pub fn rhs(&self) -> Vec<Rational> {
        (0..self.len())
            .map(|j| {
                self.boundary
                    .iter()
                    .fold(self.curves[j].canonical_degree.clone(), |acc, b| acc + &b.coeff * &b.meets[j])
            })
            .collect()
    }

    /// Connected components of the dual graph, each sorted, in order of
    /// their smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut comp = vec![];
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(i) = stack.pop() {
                comp.push(i);
                for j in 0..n {
                    if !seen[j] && j != i && !self.adjacency[i][j].is_zero() {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    fn sub_cluster(&self, idx: &[usize]) -> ExceptionalCluster {
        ExceptionalCluster {
            curves: idx.iter().map(|&i| self.curves[i].clone()).collect(),
            adjacency: idx
                .iter()
                .map(|&i| idx.iter().map(|&j| self.adjacency[i][j].clone()).collect())
                .collect(),
            boundary: self
                .boundary
                .iter()
                .map(|b| BoundaryBranch {
                    id: b.id.clone(),
                    coeff: b.coeff.clone(),
                    meets: idx.iter().map(|&i| b.meets[i].clone()).collect(),
                })
                .collect(),
        }
    }
}

/// Solves `M·a = b`, one connected component at a time, and checks the
/// solution by substitution.
pub fn discrepancies(cl: &ExceptionalCluster) -> Result<Vec<Rational>> {
    let gram = cl.gram();
    let all: Vec<usize> = (0..cl.len()).collect();
    if !gram.is_negative_definite(&all)? {
        return Err(Error::NotNegativeDefinite { what: "exceptional cluster".into() });
    }
    let rhs = cl.rhs();
    let mut a = vec![rational::zero(); cl.len()];
    for comp in cl.components() {
        let m: Vec<Vec<Rational>> = comp
            .iter()
            .map(|&i| comp.iter().map(|&j| gram.entry(i, j).clone()).collect())
            .collect();
        let b: Vec<Rational> = comp.iter().map(|&i| rhs[i].clone()).collect();
        let x = linalg::solve(&m, &b).expect("negative definite is nonsingular");
        for (&i, xi) in comp.iter().zip(x) {
            a[i] = xi;
        }
    }
    for (i, bi) in rhs.iter().enumerate() {
        let lhs: Rational = (0..cl.len()).map(|j| gram.entry(i, j) * &a[j]).sum();
        assert_eq!(&lhs, bi, "discrepancy system re-substitution failed");
    }
    Ok(a)
}

/// Ordered from best to worst.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SingularityClass {
    Terminal,
    Canonical,
    Klt,
    Lc,
    NotLc,
}

impl SingularityClass {
    pub fn from_discrepancies(a: &[Rational]) -> Self {
        let minus_one = -Rational::one();
        if a.iter().all(|x| x.is_positive()) {
            SingularityClass::Terminal
        } else if a.iter().all(|x| !x.is_negative()) {
            SingularityClass::Canonical
        } else if a.iter().all(|x| x > &minus_one) {
            SingularityClass::Klt
        } else if a.iter().all(|x| x >= &minus_one) {
            SingularityClass::Lc
        } else {
            SingularityClass::NotLc
        }
    }

    /// Log canonical or better.
    pub fn is_lc(self) -> bool {
        self <= SingularityClass::Lc
    }

    pub fn is_klt(self) -> bool {
        self <= SingularityClass::Klt
    }
}

impl fmt::Display for SingularityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SingularityClass::Terminal => "Terminal",
            SingularityClass::Canonical => "Canonical",
            SingularityClass::Klt => "KLT",
            SingularityClass::Lc => "LC",
            SingularityClass::NotLc => "NotLC",
        })
    }
}

/// Recognized dual-graph shapes of a connected configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClusterShape {
    /// Iterated blow-up of a smooth point.
    SmoothPoint,
    /// Du Val `A_n`, `D_n`, `E_n`.
    A(usize),
    D(usize),
    E(usize),
    /// Chain of smooth rational curves, not all `(−2)`.
    CyclicQuotient,
    /// Single curve of arithmetic genus one.
    SimpleElliptic,
    /// Cycle of smooth rational curves.
    Cusp,
    Other,
}

impl fmt::Display for ClusterShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClusterShape::SmoothPoint => write!(f, "smooth point"),
            ClusterShape::A(n) => write!(f, "A{n}"),
            ClusterShape::D(n) => write!(f, "D{n}"),
            ClusterShape::E(n) => write!(f, "E{n}"),
            ClusterShape::CyclicQuotient => write!(f, "cyclic quotient"),
            ClusterShape::SimpleElliptic => write!(f, "simple elliptic"),
            ClusterShape::Cusp => write!(f, "cusp"),
            ClusterShape::Other => write!(f, "other"),
        }
    }
}

/// Whether the configuration blows down to smooth points by repeatedly
/// contracting smooth rational `(−1)`-curves.
pub fn contracts_to_smooth_point(cl: &ExceptionalCluster) -> bool {
    let mut selfs: Vec<Rational> = cl.curves.iter().map(|c| c.self_intersection.clone()).collect();
    let mut genera: Vec<Rational> = cl.curves.iter().map(|c| int(i64::from(c.genus))).collect();
    let mut adj = cl.adjacency.clone();
    if adj.iter().flatten().any(|x| !x.is_integer()) {
        return false;
    }
    let mut alive: Vec<usize> = (0..cl.len()).collect();
    let minus_one = -Rational::one();
    while !alive.is_empty() {
        let Some(pos) = alive
            .iter()
            .position(|&i| selfs[i] == minus_one && genera[i].is_zero())
        else {
            return false;
        };
        let e = alive.remove(pos);
        for &j in &alive {
            let m = adj[e][j].clone();
            if m.is_zero() {
                continue;
            }
            selfs[j] += &m * &m;
            genera[j] += &m * (&m - Rational::one()) / int(2);
            for &k in &alive {
                if k != j {
                    let mk = adj[e][k].clone();
                    adj[j][k] += &m * mk;
                }
            }
        }
    }
    true
}

fn shape_of(cl: &ExceptionalCluster) -> ClusterShape {
    if contracts_to_smooth_point(cl) {
        return ClusterShape::SmoothPoint;
    }
    let n = cl.len();
    if n == 1 {
        let c = &cl.curves[0];
        return match c.genus {
            0 if c.self_intersection == int(-2) => ClusterShape::A(1),
            0 => ClusterShape::CyclicQuotient,
            1 => ClusterShape::SimpleElliptic,
            _ => ClusterShape::Other,
        };
    }
    if cl.curves.iter().any(|c| c.genus != 0) {
        return ClusterShape::Other;
    }
    let one = Rational::one();
    let two = int(2);
    if n == 2 && cl.adjacency[0][1] == two {
        return ClusterShape::Cusp;
    }
    if cl.adjacency.iter().enumerate().any(|(i, r)| {
        r.iter().enumerate().any(|(j, x)| i != j && !x.is_zero() && x != &one)
    }) {
        return ClusterShape::Other;
    }
    let neighbours: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| j != i && !cl.adjacency[i][j].is_zero()).collect())
        .collect();
    let edges: usize = neighbours.iter().map(Vec::len).sum::<usize>() / 2;
    if edges == n && neighbours.iter().all(|nb| nb.len() == 2) {
        return ClusterShape::Cusp;
    }
    if edges != n - 1 {
        return ClusterShape::Other;
    }
    let all_minus_two = cl.curves.iter().all(|c| c.self_intersection == -two.clone());
    let degrees: Vec<usize> = neighbours.iter().map(Vec::len).collect();
    let max_degree = degrees.iter().copied().max().unwrap_or(0);
    if max_degree <= 2 {
        return if all_minus_two { ClusterShape::A(n) } else { ClusterShape::CyclicQuotient };
    }
    if !all_minus_two {
        return ClusterShape::Other;
    }
    let branch: Vec<usize> = (0..n).filter(|&i| degrees[i] >= 3).collect();
    if branch.len() != 1 || degrees[branch[0]] != 3 {
        return ClusterShape::Other;
    }
    let mut arms = arm_lengths(&neighbours, branch[0]);
    arms.sort_unstable();
    match arms.as_slice() {
        [1, 1, _] => ClusterShape::D(n),
        [1, 2, 2] => ClusterShape::E(6),
        [1, 2, 3] => ClusterShape::E(7),
        [1, 2, 4] => ClusterShape::E(8),
        _ => ClusterShape::Other,
    }
}

/// Number of vertices on each arm leaving `center` in a tree.
pub(crate) fn arm_lengths(neighbours: &[Vec<usize>], center: usize) -> Vec<usize> {
    neighbours[center]
        .iter()
        .map(|&start| {
            let (mut prev, mut cur, mut len) = (center, start, 1);
            loop {
                let next: Vec<usize> = neighbours[cur].iter().copied().filter(|&x| x != prev).collect();
                if next.len() != 1 {
                    break len;
                }
                prev = cur;
                cur = next[0];
                len += 1;
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscrepancyReport {
    /// `(curve id, a_i)` in cluster order.
    pub discrepancies: Vec<(String, Rational)>,
    pub class: SingularityClass,
    /// Approximation: all discrepancies `> −1`.
    pub numerically_dlt_approx: bool,
    pub q_factorial: bool,
    pub rational_sing: bool,
    /// Shape of each connected component, in component order.
    pub shapes: Vec<ClusterShape>,
}

impl DiscrepancyReport {
    /// Report for contracting nothing.
    pub fn empty() -> Self {
        DiscrepancyReport {
            discrepancies: vec![],
            class: SingularityClass::Terminal,
            numerically_dlt_approx: true,
            q_factorial: true,
            rational_sing: true,
            shapes: vec![],
        }
    }

    pub fn values(&self) -> impl Iterator<Item = &Rational> {
        self.discrepancies.iter().map(|(_, a)| a)
    }
}

/// Classifies each connected component and reports the worst verdict.
pub fn classify(cl: &ExceptionalCluster, field: &FieldMode) -> Result<DiscrepancyReport> {
    let a = discrepancies(cl)?;
    let mut class = SingularityClass::Terminal;
    let mut shapes = Vec::new();
    for comp in cl.components() {
        let values: Vec<Rational> = comp.iter().map(|&i| a[i].clone()).collect();
        class = class.max(SingularityClass::from_discrepancies(&values));
        shapes.push(shape_of(&cl.sub_cluster(&comp)));
    }
    let numerically_dlt_approx = class.is_klt();
    Ok(DiscrepancyReport {
        discrepancies: cl.curves.iter().map(|c| c.id.clone()).zip(a).collect(),
        class,
        numerically_dlt_approx,
        q_factorial: numerically_dlt_approx || field.is_fp_closure(),
        rational_sing: numerically_dlt_approx,
        shapes,
    })
}
