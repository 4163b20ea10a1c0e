//! Dense exact linear algebra over `Rational`: solving, inverses, determinants
//! and null spaces. Matrices are row-major `Vec<Vec<Rational>>`.

use num_traits::Zero;

use crate::rational::{one, zero, Rational};

pub(crate) type Matrix = Vec<Vec<Rational>>;

/// Solves `m · x = rhs` for square nonsingular `m`. `None` when singular.
pub(crate) fn solve(m: &Matrix, rhs: &[Rational]) -> Option<Vec<Rational>> {
    let n = m.len();
    debug_assert_eq!(rhs.len(), n);
    let mut a: Matrix = m
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &p;
            for c in col..=n {
                let delta = &factor * &a[col][c];
                a[r][c] -= delta;
            }
        }
    }
    Some((0..n).map(|i| &a[i][n] / &a[i][i]).collect())
}

pub(crate) fn inverse(m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    let mut columns = Vec::with_capacity(n);
    for j in 0..n {
        let e: Vec<Rational> = (0..n).map(|i| if i == j { one() } else { zero() }).collect();
        columns.push(solve(m, &e)?);
    }
    Some((0..n).map(|i| (0..n).map(|j| columns[j][i].clone()).collect()).collect())
}

pub(crate) fn determinant(m: &Matrix) -> Rational {
    let n = m.len();
    let mut a = m.clone();
    let mut det = one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return zero();
        };
        if pivot != col {
            a.swap(col, pivot);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &p;
            for c in col..n {
                let delta = &factor * &a[col][c];
                a[r][c] -= delta;
            }
        }
    }
    det
}

/// Reduced row echelon form in place; returns the pivot columns.
pub(crate) fn rref(a: &mut Matrix, cols: usize) -> Vec<usize> {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = one() / &a[r][c];
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i == r || a[i][c].is_zero() {
                continue;
            }
            let factor = a[i][c].clone();
            for k in 0..cols {
                let delta = &factor * &a[r][k];
                a[i][k] -= delta;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of `{x : rows · x = 0}` together with the free column of each basis
/// vector. The basis vector for free column `f` has a 1 at `f` and 0 at every
/// other free column.
pub(crate) fn null_space(rows: &Matrix, cols: usize) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut a = rows.clone();
    let pivots = rref(&mut a, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let basis = free
        .iter()
        .map(|&f| {
            let mut v = vec![zero(); cols];
            v[f] = one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -a[r][f].clone();
            }
            v
        })
        .collect();
    (basis, free)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn solves_small_system() {
        let a = m(&[&[-2, 1], &[1, -2]]);
        let x = solve(&a, &[int(-1), int(-1)]).unwrap();
        assert_eq!(x, vec![int(1), int(1)]);
        assert!(solve(&m(&[&[1, 2], &[2, 4]]), &[int(1), int(2)]).is_none());
    }

    #[test]
    fn determinant_and_inverse() {
        let a = m(&[&[-3, 1, 1], &[1, -2, 1], &[1, 1, -2]]);
        assert_eq!(determinant(&a), int(-3));
        let inv = inverse(&a).unwrap();
        assert_eq!(inv[0][0], frac(-1, 1));
        assert_eq!(determinant(&m(&[&[-2, 1, 1], &[1, -2, 1], &[1, 1, -2]])), int(0));
    }

    #[test]
    fn null_space_has_identity_on_free_columns() {
        let (basis, free) = null_space(&m(&[&[0, -1]]), 2);
        assert_eq!(free, vec![0]);
        assert_eq!(basis, vec![vec![int(1), int(0)]]);
        let (basis, free) = null_space(&m(&[&[1, 1, 1]]), 3);
        assert_eq!(free, vec![1, 2]);
        assert_eq!(basis[0], vec![int(-1), int(1), int(0)]);
    }
}
