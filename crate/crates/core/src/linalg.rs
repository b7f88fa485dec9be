//! Small dense exact linear algebra over the rationals (dimension ≤ 4).

use num_traits::{One, Zero};

use crate::rational::Rational;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(rows: &mut [Vec<Rational>]) -> Vec<usize> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rational::one() / &rows[r][c];
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot).take(cols) {
                    *x -= &factor * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Basis of `{x : rows · x = 0}`.
pub fn nullspace(rows: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); cols];
        v[free] = Rational::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[row][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Solves the square system `a · x = b`; `None` when `a` is singular.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    let mut aug: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n].clone()).collect())
}

pub fn determinant(a: &[Vec<Rational>]) -> Rational {
    let n = a.len();
    let mut m = a.to_vec();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= &m[c][c];
        let (upper, lower) = m.split_at_mut(c + 1);
        let pivot = &upper[c];
        for row in lower.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let factor = &row[c] / &pivot[c];
            for (x, p) in row[c..n].iter_mut().zip(&pivot[c..n]) {
                *x -= &factor * p;
            }
        }
    }
    det
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
