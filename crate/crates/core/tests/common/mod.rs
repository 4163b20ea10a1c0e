//! Shared test support: fixture loading, a random toric surface generator,
//! and brute-force oracles that do not reuse the engine's own algorithms.
#![allow(dead_code)]

use std::path::PathBuf;

use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use logsurf::birational;
use logsurf::files;
use logsurf::mmp::{MmpMode, MmpOutcome, MmpRun};
use logsurf::rational::{frac, int};
use logsurf::singularities::{ExceptionalCluster, SingularityClass};
use logsurf::{
    BoundaryDivisor, CurveRecord, FieldMode, GramMatrix, LogSurface, NsLattice, QVec, Rational,
};

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn surface(name: &str) -> LogSurface {
    let path = fixtures_dir().join(format!("{name}.surface"));
    files::read_surface(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn cluster(name: &str) -> (ExceptionalCluster, FieldMode) {
    let path = fixtures_dir().join(format!("{name}.cluster"));
    files::read_cluster(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Every well-formed surface fixture.
pub const SURFACES: [&str; 11] = [
    "p2",
    "f1",
    "f2",
    "p1xp1",
    "cxc_p5",
    "cxc_char0",
    "rational_elliptic_i3",
    "p2_cubic_boundary",
    "p2_a1",
    "gt_a1",
    "gt_elliptic",
];

pub const CLUSTERS: [&str; 4] = ["a1", "a2", "cusp", "cone_over_cubic"];

pub fn v(coords: &[i64]) -> QVec {
    QVec::from_ints(coords)
}

/// Plain `Σ a_i G_ij b_j`, independent of the library's pairing code.
pub fn pairing(g: &GramMatrix, a: &QVec, b: &QVec) -> Rational {
    let n = g.rank();
    let mut acc = Rational::zero();
    for i in 0..n {
        for j in 0..n {
            acc += &a[i] * g.entry(i, j) * &b[j];
        }
    }
    acc
}

pub fn plane() -> LogSurface {
    LogSurface::new(
        NsLattice { gram: GramMatrix::diagonal(&[1]), canonical: v(&[-3]), ample: v(&[1]) },
        vec![],
        BoundaryDivisor::new(),
        FieldMode::Char0,
    )
}

/// A random projective toric surface obtained from P² by blowing up torus
/// fixed points, decorated with a general line, a conic and a cubic through
/// the three coordinate points. Toric boundary curves generate the cone of
/// curves, so the declared list is a consistent closed world.
pub fn random_toric_surface<R: Rng>(rng: &mut R, max_blowups: usize) -> LogSurface {
    let mut s = plane();
    for id in ["x0", "x1", "x2"] {
        s.curves.push(CurveRecord::new(id, v(&[1]), 0));
    }
    let with_line = rng.gen_bool(0.5);
    let with_conic = rng.gen_bool(0.5);
    let with_cubic = rng.gen_bool(0.5);
    if with_line {
        s.curves.push(CurveRecord::new("line", v(&[1]), 0));
    }
    if with_conic {
        s.curves.push(CurveRecord::new("conic", v(&[2]), 0));
    }
    if with_cubic {
        s.curves.push(CurveRecord::new("cubic", v(&[3]), 1));
    }
    let mut cycle: Vec<String> = vec!["x0".into(), "x1".into(), "x2".into()];
    let blowups = rng.gen_range(0..=max_blowups);
    for k in 0..blowups {
        let i = rng.gen_range(0..cycle.len());
        let a = cycle[i].clone();
        let b = cycle[(i + 1) % cycle.len()].clone();
        let mut mults: Vec<(&str, u32)> = vec![(a.as_str(), 1), (b.as_str(), 1)];
        // Two original lines meet only at a coordinate point not yet blown up.
        if a.starts_with('x') && b.starts_with('x') {
            if with_conic {
                mults.push(("conic", 1));
            }
            if with_cubic {
                mults.push(("cubic", 1));
            }
        }
        let id = format!("e{}", k + 1);
        s = birational::blow_up_named(&s, &mults, &id).expect("toric blow-up");
        cycle.insert(i + 1, id);
    }
    let choices = [Rational::zero(), frac(1, 2), frac(2, 3), Rational::one()];
    let ids: Vec<String> = s.curves.iter().map(|c| c.id.clone()).collect();
    for id in ids {
        s.boundary.insert(id, choices.choose(rng).unwrap().clone());
    }
    s.field = match rng.gen_range(0..3) {
        0 => FieldMode::Char0,
        1 => FieldMode::CharP { p: [2, 3, 5, 7][rng.gen_range(0..4)], fp_closure: false },
        _ => FieldMode::CharP { p: [2, 3, 5, 7][rng.gen_range(0..4)], fp_closure: true },
    };
    s
}

/// Every negative-definite subset of declared curves with its Gram matrix,
/// precomputed once so that many classes can be decomposed cheaply.
pub struct ZariskiOracle {
    subsets: Vec<Support>,
}

/// Curve indices, their classes, and their Gram matrix.
type Support = (Vec<usize>, Vec<QVec>, Vec<Vec<Rational>>);

impl ZariskiOracle {
    pub fn new(s: &LogSurface) -> Self {
        let n = s.curves.len();
        assert!(n <= 16, "subset enumeration is exponential");
        let g = s.gram();
        let mut subsets = Vec::new();
        for mask in 0u32..(1 << n) {
            let subset: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            let classes: Vec<QVec> = subset.iter().map(|&i| s.curves[i].class.clone()).collect();
            let m: Vec<Vec<Rational>> = classes
                .iter()
                .map(|a| classes.iter().map(|b| pairing(g, a, b)).collect())
                .collect();
            if leading_minors_alternate(&m) {
                subsets.push((subset, classes, m));
            }
        }
        ZariskiOracle { subsets }
    }

    /// Every `(support, P, N)` with `D = P + Σ N_i C_i`, `N_i > 0` exactly on
    /// a negative-definite support and `P` nef with `P·C_i = 0` there.
    pub fn solve(&self, s: &LogSurface, d: &QVec) -> Vec<(Vec<usize>, QVec, Vec<Rational>)> {
        let g = s.gram();
        let mut found = Vec::new();
        for (subset, classes, m) in &self.subsets {
            let rhs: Vec<Rational> = classes.iter().map(|c| pairing(g, d, c)).collect();
            let Some(x) = cramer(m, &rhs) else { continue };
            if x.iter().any(|xi| !xi.is_positive()) {
                continue;
            }
            let p = classes.iter().zip(&x).fold(d.clone(), |acc, (c, xi)| acc.add_scaled(&-xi, c));
            // A nef class also has P² ≥ 0 and P·H ≥ 0; checking these catches
            // curve lists that do not generate the cone of curves.
            if s.curves.iter().all(|c| !pairing(g, &p, &c.class).is_negative())
                && !pairing(g, &p, &p).is_negative()
                && !pairing(g, &p, s.ample()).is_negative()
            {
                found.push((subset.clone(), p, x));
            }
        }
        found
    }
}

pub fn brute_force_zariski(s: &LogSurface, d: &QVec) -> Vec<(Vec<usize>, QVec, Vec<Rational>)> {
    ZariskiOracle::new(s).solve(s, d)
}

/// Sylvester: negative definite iff the k-th leading minor has sign (−1)^k.
pub fn leading_minors_alternate(m: &[Vec<Rational>]) -> bool {
    (1..=m.len()).all(|k| {
        let sub: Vec<Vec<Rational>> = m[..k].iter().map(|r| r[..k].to_vec()).collect();
        let det = laplace_det(&sub);
        if k % 2 == 1 {
            det.is_negative()
        } else {
            det.is_positive()
        }
    })
}

/// Cofactor expansion; fine for the tiny matrices used in oracles.
pub fn laplace_det(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    match n {
        0 => Rational::one(),
        1 => m[0][0].clone(),
        _ => (0..n)
            .map(|j| {
                let minor: Vec<Vec<Rational>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
                    .collect();
                let term = &m[0][j] * laplace_det(&minor);
                if j % 2 == 0 {
                    term
                } else {
                    -term
                }
            })
            .sum(),
    }
}

pub fn cramer(m: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let det = laplace_det(m);
    if det.is_zero() {
        return None;
    }
    Some(
        (0..m.len())
            .map(|j| {
                let replaced: Vec<Vec<Rational>> = m
                    .iter()
                    .zip(rhs)
                    .map(|(r, b)| {
                        let mut r = r.clone();
                        r[j] = b.clone();
                        r
                    })
                    .collect();
                laplace_det(&replaced) / &det
            })
            .collect(),
    )
}

/// Nakai against the declared curves, via the independent pairing.
pub fn nakai_ample(s: &LogSurface, d: &QVec) -> bool {
    let g = s.gram();
    pairing(g, d, d).is_positive() && s.curves.iter().all(|c| pairing(g, d, &c.class).is_positive())
}

pub fn nef(s: &LogSurface, d: &QVec) -> bool {
    s.curves.iter().all(|c| !pairing(s.gram(), d, &c.class).is_negative())
}

/// Random unimodular integer matrix as a product of elementary operations.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize) -> Vec<Vec<Rational>> {
    let mut u: Vec<Vec<Rational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect();
    if n < 2 {
        if rng.gen_bool(0.5) {
            u[0][0] = -Rational::one();
        }
        return u;
    }
    for _ in 0..3 * n {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n);
        while j == i {
            j = rng.gen_range(0..n);
        }
        let k = int(rng.gen_range(-2..=2));
        // column i += k · column j
        for row in u.iter_mut() {
            let add = &k * &row[j];
            row[i] += add;
        }
        if rng.gen_bool(0.2) {
            for row in u.iter_mut() {
                row.swap(i, j);
            }
        }
    }
    u
}

/// Checks every per-run invariant of the log MMP; returns the first failure.
pub fn check_run(initial: &LogSurface, run: &MmpRun) -> Result<(), String> {
    if run.steps.len() + 1 > initial.rank() {
        return Err(format!("{} steps on rank {}", run.steps.len(), initial.rank()));
    }
    let mut rational = initial.rational_sing;
    for st in &run.steps {
        if st.rank_after + 1 != st.rank_before {
            return Err(format!("step {} did not drop the rank", st.curve));
        }
        if !st.log_degree.is_negative() || !st.self_intersection.is_negative() {
            return Err(format!("step {} contracted a curve that is not (K+Δ)-negative with C² < 0", st.curve));
        }
        if run.options.mode == MmpMode::LogCanonical && st.report.class == SingularityClass::NotLc {
            return Err(format!("mode B contracted {} through a non-lc cluster", st.curve));
        }
        if run.options.mode == MmpMode::QFactorial && !st.report.q_factorial {
            return Err(format!("mode A lost Q-factoriality at {}", st.curve));
        }
        rational &= st.report.rational_sing;
    }
    let fin = run.outcome.surface();
    if fin.rational_sing != rational {
        return Err("rationality flag does not match the step reports".into());
    }
    let kd = fin.log_canonical_class().map_err(|e| e.to_string())?;
    let g = fin.gram();
    match &run.outcome {
        MmpOutcome::MinimalModel { .. } => {
            if !nef(fin, &kd) {
                return Err("minimal model with K+Δ not nef".into());
            }
        }
        MmpOutcome::MoriFiberSpaceOverCurve { fiber_class, .. } => {
            if !pairing(g, fiber_class, fiber_class).is_zero()
                || !nef(fin, fiber_class)
                || !pairing(g, &kd, fiber_class).is_negative()
            {
                return Err("fibre-space-over-curve invariants fail".into());
            }
        }
        MmpOutcome::MoriFiberSpaceOverPoint { .. } => {
            if fin.rank() != 1 || !nakai_ample(fin, &kd.scale(&int(-1))) {
                return Err("fibre-space-over-point invariants fail".into());
            }
        }
        MmpOutcome::Aborted { report, .. } => {
            if run.options.mode != MmpMode::LogCanonical || report.class != SingularityClass::NotLc {
                return Err("abort outside mode B or on an lc cluster".into());
            }
        }
    }
    Ok(())
}
