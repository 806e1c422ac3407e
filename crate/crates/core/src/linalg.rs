//! Exact dense linear algebra over a [`FieldDesc`].

use crate::error::{Error, Result};
use crate::field::{FieldDesc, Scalar};

/// Row-major square or rectangular matrix.
pub type Matrix = Vec<Vec<Scalar>>;

pub fn identity(n: usize, field: &FieldDesc) -> Matrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { field.one() } else { field.zero() })
                .collect()
        })
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = row[0].field().zero();
                    for k in 0..inner {
                        acc += &(&row[k] * &b[k][j]);
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &Matrix, v: &[Scalar]) -> Vec<Scalar> {
    a.iter()
        .map(|row| {
            let mut acc = v[0].field().zero();
            for (x, y) in row.iter().zip(v) {
                acc += &(x * y);
            }
            acc
        })
        .collect()
}

pub fn transpose(a: &Matrix) -> Matrix {
    let cols = a.first().map_or(0, |r| r.len());
    (0..cols)
        .map(|j| a.iter().map(|r| r[j].clone()).collect())
        .collect()
}

/// Reduced row echelon form and the pivot columns.
pub fn rref(a: &Matrix) -> (Matrix, Vec<usize>) {
    let mut m = a.clone();
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().unwrap();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let pivot_row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x = &*x - &(&f * y);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank(a: &Matrix) -> usize {
    rref(a).1.len()
}

/// Basis of `{v : a v = 0}`; `ncols` is needed when `a` has no rows.
pub fn nullspace(a: &Matrix, ncols: usize, field: &FieldDesc) -> Vec<Vec<Scalar>> {
    if a.is_empty() {
        return identity(ncols, field);
    }
    let (m, pivots) = rref(a);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![field.zero(); ncols];
        v[free] = field.one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -&m[r][free];
        }
        basis.push(v);
    }
    basis
}

pub fn det(a: &Matrix) -> Result<Scalar> {
    let n = a.len();
    if a.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch(
            "determinant of a non-square matrix".into(),
        ));
    }
    let field = a
        .first()
        .and_then(|r| r.first())
        .map(|x| x.field().clone())
        .ok_or_else(|| Error::DimensionMismatch("empty matrix".into()))?;
    let mut m = a.clone();
    let mut d = field.one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Ok(field.zero());
        };
        if p != c {
            m.swap(c, p);
            d = -d;
        }
        d = &d * &m[c][c];
        let inv = m[c][c].inv().unwrap();
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] * &inv;
            let pivot_row = m[c].clone();
            for (x, y) in m[i].iter_mut().zip(&pivot_row).skip(c) {
                *x = &*x - &(&f * y);
            }
        }
    }
    Ok(d)
}

pub fn inverse(a: &Matrix) -> Result<Matrix> {
    let n = a.len();
    if det(a)?.is_zero() {
        return Err(Error::SingularTransform);
    }
    let field = a[0][0].field().clone();
    let aug: Matrix = a
        .iter()
        .zip(identity(n, &field))
        .map(|(r, e)| r.iter().cloned().chain(e).collect())
        .collect();
    let (m, _) = rref(&aug);
    Ok(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Extends independent rows to a basis of the full space using standard
/// basis vectors; returns only the added vectors.
pub fn complete_basis(rows: &[Vec<Scalar>], n: usize, field: &FieldDesc) -> Vec<Vec<Scalar>> {
    let mut current: Matrix = rows.to_vec();
    let mut added = Vec::new();
    let mut r = rank(&current);
    for e in identity(n, field) {
        if r == n {
            break;
        }
        current.push(e.clone());
        let r2 = rank(&current);
        if r2 > r {
            r = r2;
            added.push(e);
        } else {
            current.pop();
        }
    }
    added
}
