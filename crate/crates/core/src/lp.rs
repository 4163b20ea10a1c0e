//! Exact cone membership: is `target` a non-negative combination of the
//! generators? Phase-one simplex over rationals with Bland's rule.

use num_traits::{Signed, Zero};

use crate::lattice::QVec;
use crate::rational::{one, zero, Rational};

/// Non-negative coefficients `λ` with `Σ λ_i g_i = target`, if any exist.
pub(crate) fn cone_membership(generators: &[QVec], target: &QVec) -> Option<Vec<Rational>> {
    let m = target.len();
    let n = generators.len();
    if target.is_zero() {
        return Some(vec![zero(); n]);
    }
    let width = n + m + 1;
    let rhs_col = n + m;
    let mut t: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            let mut row = vec![zero(); width];
            for (j, g) in generators.iter().enumerate() {
                row[j] = g[i].clone();
            }
            row[n + i] = one();
            row[rhs_col] = target[i].clone();
            if row[rhs_col].is_negative() {
                for (j, x) in row.iter_mut().enumerate() {
                    if j < n || j == rhs_col {
                        *x = -x.clone();
                    }
                }
            }
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..n + m).collect();

    loop {
        // reduced costs of minimizing the sum of artificials
        let reduced = |j: usize, t: &Vec<Vec<Rational>>, basis: &Vec<usize>| -> Rational {
            let cj = if j >= n { one() } else { zero() };
            let cb: Rational = (0..m)
                .filter(|&i| basis[i] >= n)
                .map(|i| t[i][j].clone())
                .sum();
            cj - cb
        };
        let Some(enter) = (0..n + m).find(|&j| !basis.contains(&j) && reduced(j, &t, &basis).is_negative())
        else {
            break;
        };
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if !t[i][enter].is_positive() {
                continue;
            }
            let ratio = &t[i][rhs_col] / &t[i][enter];
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        // Phase one is bounded below by zero, so some row always qualifies.
        let (row, _) = leave.expect("phase-one objective is bounded");
        let p = t[row][enter].clone();
        for x in t[row].iter_mut() {
            *x /= &p;
        }
        for i in 0..m {
            if i == row || t[i][enter].is_zero() {
                continue;
            }
            let factor = t[i][enter].clone();
            for j in 0..width {
                let delta = &factor * &t[row][j];
                t[i][j] -= delta;
            }
        }
        basis[row] = enter;
    }

    let infeasible = (0..m).any(|i| basis[i] >= n && !t[i][rhs_col].is_zero());
    if infeasible {
        return None;
    }
    let mut lambda = vec![zero(); n];
    for i in 0..m {
        if basis[i] < n {
            lambda[basis[i]] = t[i][rhs_col].clone();
        }
    }
    debug_assert_eq!(
        generators
            .iter()
            .zip(&lambda)
            .fold(QVec::zeros(m), |acc, (g, l)| acc.add_scaled(l, g)),
        *target
    );
    Some(lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn membership_in_simplicial_cone() {
        let gens = vec![QVec::from_ints(&[1, 0]), QVec::from_ints(&[1, 1])];
        let l = cone_membership(&gens, &QVec::from_ints(&[3, 1])).unwrap();
        assert_eq!(l, vec![int(2), int(1)]);
        assert!(cone_membership(&gens, &QVec::from_ints(&[0, 1])).is_none());
        assert!(cone_membership(&gens, &QVec::from_ints(&[-1, 0])).is_none());
    }

    #[test]
    fn redundant_generators_and_fractions() {
        let gens = vec![
            QVec::from_ints(&[2, 0, 0]),
            QVec::from_ints(&[0, 2, 0]),
            QVec::from_ints(&[2, 2, 0]),
            QVec::from_ints(&[0, 0, 3]),
        ];
        let target = QVec::new(vec![int(1), int(1), int(1)]);
        let l = cone_membership(&gens, &target).unwrap();
        assert!(l.iter().all(|x| !x.is_negative()));
        assert_eq!(l[3], frac(1, 3));
        assert!(cone_membership(&gens, &QVec::from_ints(&[1, -1, 0])).is_none());
    }
}
