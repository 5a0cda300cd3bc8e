//! Exact linear algebra over ℚ, over polynomials in parameters, and over ℤ.

mod fraction_free;
mod lattice;

pub use fraction_free::{poly_nullspace, primitive_part};
pub use lattice::{hermite_rows, integer_kernel, lattice_contains};

use num_traits::{One, Zero};

use crate::rational::Rational;

pub type Matrix = Vec<Vec<Rational>>;

pub fn zeros(rows: usize, cols: usize) -> Matrix {
    vec![vec![Rational::zero(); cols]; rows]
}

pub fn identity(n: usize) -> Matrix {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Rational::one();
    }
    m
}

pub fn transpose(m: &Matrix) -> Matrix {
    let cols = m.first().map_or(0, |r| r.len());
    (0..cols)
        .map(|j| m.iter().map(|r| r[j].clone()).collect())
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = Rational::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            acc += &row[k] * &b[k][j];
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &Matrix, v: &[Rational]) -> Vec<Rational> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

pub fn scale(a: &Matrix, q: &Rational) -> Matrix {
    a.iter()
        .map(|r| r.iter().map(|x| x * q).collect())
        .collect()
}

pub fn add(a: &Matrix, b: &Matrix) -> Matrix {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect())
        .collect()
}

pub fn is_zero_matrix(a: &Matrix) -> bool {
    a.iter().all(|r| r.iter().all(|x| x.is_zero()))
}

pub fn trace(a: &Matrix) -> Rational {
    (0..a.len()).map(|i| a[i][i].clone()).sum()
}

/// Reduced row echelon form and pivot columns.
pub fn rref(m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut a = m.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
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
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..cols {
                    if !a[r][j].is_zero() {
                        let d = &f * &a[r][j];
                        a[i][j] -= d;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.retain(|row| row.iter().any(|x| !x.is_zero()));
    (a, pivots)
}

pub fn rank(m: &Matrix) -> usize {
    rref(m).1.len()
}

/// Basis of the right nullspace; one vector per free column, with that
/// column set to 1.
pub fn nullspace(m: &Matrix, cols: usize) -> Vec<Vec<Rational>> {
    if m.is_empty() {
        return (0..cols)
            .map(|i| {
                (0..cols)
                    .map(|j| {
                        if i == j {
                            Rational::one()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
    }
    let (r, pivots) = rref(m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Some solution of `a·x = b`, or `None` when inconsistent.
pub fn solve(a: &Matrix, b: &[Rational]) -> Option<Vec<Rational>> {
    let cols = a.first().map_or(0, |r| r.len());
    let aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(&aug);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (row, &p) in r.iter().zip(&pivots) {
        x[p] = row[cols].clone();
    }
    Some(x)
}

/// Coordinates of `target` in the span of `basis` (vectors as rows).
pub fn express_in_span(basis: &[Vec<Rational>], target: &[Rational]) -> Option<Vec<Rational>> {
    if basis.is_empty() {
        return target.iter().all(|x| x.is_zero()).then(Vec::new);
    }
    solve(&transpose(&basis.to_vec()), target)
}

pub fn inverse(a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    let aug: Matrix = a
        .iter()
        .zip(identity(n))
        .map(|(row, id)| row.iter().cloned().chain(id).collect())
        .collect();
    let (r, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn determinant(a: &Matrix) -> Rational {
    let n = a.len();
    let mut m = a.clone();
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
        let inv = m[c][c].recip();
        for i in c + 1..n {
            if !m[i][c].is_zero() {
                let f = &m[i][c] * &inv;
                for j in c..n {
                    let d = &f * &m[c][j];
                    m[i][j] -= d;
                }
            }
        }
    }
    det
}
