//! Integer kernels by unimodular column reduction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{express_in_span, Matrix};
use crate::rational::Rational;

fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    (e.gcd, e.x, e.y)
}

/// Rows of `m` scaled to integers (each row by the lcm of its denominators).
fn integer_rows(m: &Matrix) -> Vec<Vec<BigInt>> {
    m.iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            row.iter()
                .map(|q| (q * Rational::from_integer(l.clone())).to_integer())
                .collect()
        })
        .collect()
}

/// Basis of `{x ∈ ℤⁿ : m·x = 0}` in Hermite normal form (rows).
pub fn integer_kernel(m: &Matrix, n: usize) -> Vec<Vec<BigInt>> {
    let mut a = integer_rows(m);
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();
    // columns are stored as u[*][j]; column operations act on a and u alike
    let col_op = |mat: &mut Vec<Vec<BigInt>>,
                  k: usize,
                  j: usize,
                  s: &BigInt,
                  t: &BigInt,
                  p: &BigInt,
                  q: &BigInt| {
        for row in mat.iter_mut() {
            let (x, y) = (row[k].clone(), row[j].clone());
            row[k] = s * &x + t * &y;
            row[j] = p * &x + q * &y;
        }
    };
    let mut k = 0;
    for r in 0..a.len() {
        if k == n {
            break;
        }
        for j in k + 1..n {
            if a[r][j].is_zero() {
                continue;
            }
            if a[r][k].is_zero() {
                for row in a.iter_mut().chain(u.iter_mut()) {
                    row.swap(k, j);
                }
                continue;
            }
            let (g, s, t) = ext_gcd(&a[r][k], &a[r][j]);
            let p = &a[r][j] / &g;
            let q = -(&a[r][k] / &g);
            col_op(&mut a, k, j, &s, &t, &p, &q);
            col_op(&mut u, k, j, &s, &t, &p, &q);
        }
        if !a[r][k].is_zero() {
            k += 1;
        }
    }
    let basis: Vec<Vec<BigInt>> = (k..n)
        .map(|j| u.iter().map(|row| row[j].clone()).collect())
        .collect();
    hermite_rows(basis)
}

/// Row Hermite normal form: positive pivots, entries above each pivot
/// reduced into `[0, pivot)`, zero rows dropped.
pub fn hermite_rows(mut rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let n = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..n {
        if r == rows.len() {
            break;
        }
        loop {
            let nonzero: Vec<usize> = (r..rows.len()).filter(|&i| !rows[i][c].is_zero()).collect();
            if nonzero.is_empty() {
                break;
            }
            let p = *nonzero.iter().min_by_key(|&&i| rows[i][c].abs()).unwrap();
            rows.swap(r, p);
            if rows[r][c].is_negative() {
                for x in rows[r].iter_mut() {
                    *x = -x.clone();
                }
            }
            let mut done = true;
            for i in r + 1..rows.len() {
                if !rows[i][c].is_zero() {
                    let f = rows[i][c].div_floor(&rows[r][c]);
                    for j in 0..n {
                        let d = &f * &rows[r][j];
                        rows[i][j] -= d;
                    }
                    if !rows[i][c].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if r < rows.len() && !rows[r][c].is_zero() {
            for i in 0..r {
                let f = rows[i][c].div_floor(&rows[r][c]);
                if !f.is_zero() {
                    for j in 0..n {
                        let d = &f * &rows[r][j];
                        rows[i][j] -= d;
                    }
                }
            }
            r += 1;
        }
    }
    rows.truncate(r);
    rows
}

/// Whether `v` is an integer combination of the lattice basis rows.
pub fn lattice_contains(basis: &[Vec<BigInt>], v: &[BigInt]) -> bool {
    let to_q = |x: &BigInt| Rational::from_integer(x.clone());
    let b: Vec<Vec<Rational>> = basis.iter().map(|r| r.iter().map(to_q).collect()).collect();
    let t: Vec<Rational> = v.iter().map(to_q).collect();
    match express_in_span(&b, &t) {
        Some(c) => c.iter().all(|x| x.is_integer()),
        None => false,
    }
}
