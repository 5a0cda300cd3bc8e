//! Fraction-free Gauss–Jordan elimination over Laurent polynomials in the
//! system parameters.
//!
//! Row operations are `row_i ← p·row_i − a·row_p`; after each step a row is
//! divided by its monomial and rational content, which keeps entries small
//! without needing polynomial gcds. Results are valid for generic parameter
//! values.

use num_traits::{Signed, Zero};

use crate::parallel::Exec;
use crate::rational::Rational;
use crate::symbolic::{Monomial, Poly};

/// Divides a vector by the common monomial and rational content of its
/// entries and makes the first non-zero entry's leading coefficient positive.
pub fn primitive_part(v: &[Poly]) -> Vec<Poly> {
    let nonzero: Vec<&Poly> = v.iter().filter(|p| !p.is_zero()).collect();
    if nonzero.is_empty() {
        return v.to_vec();
    }
    let mut gcd_mono: Option<Monomial> = None;
    let mut content = Rational::zero();
    for p in &nonzero {
        let low = p.lowest_monomial();
        gcd_mono = Some(match gcd_mono {
            None => low,
            Some(g) => monomial_min(&g, &low),
        });
        let c = p.rational_content();
        content = if content.is_zero() {
            c
        } else {
            rational_gcd(&content, &c)
        };
    }
    let mono = gcd_mono.unwrap().inverse();
    let mut inv = content.recip();
    if nonzero[0].is_negative() {
        inv = -inv;
    }
    v.iter().map(|p| p.mul_term(&mono, &inv)).collect()
}

fn monomial_min(a: &Monomial, b: &Monomial) -> Monomial {
    let mut out = Monomial::one();
    let mut atoms: Vec<_> = a.factors().iter().map(|(x, _)| x.clone()).collect();
    atoms.extend(b.factors().iter().map(|(x, _)| x.clone()));
    atoms.sort();
    atoms.dedup();
    for x in atoms {
        let e = a.degree_of(&x).min(b.degree_of(&x));
        out = out.mul(&Monomial::atom(x, e));
    }
    out
}

fn rational_gcd(a: &Rational, b: &Rational) -> Rational {
    use num_integer::Integer;
    Rational::new(a.numer().gcd(b.numer()), a.denom().lcm(b.denom()))
}

fn pivot_cost(p: &Poly) -> (usize, i64) {
    let degree = p
        .terms()
        .map(|(m, _)| m.factors().iter().map(|(_, e)| e.abs() as i64).sum::<i64>())
        .max()
        .unwrap_or(0);
    (p.len(), degree)
}

/// Basis of the right nullspace of `rows` (each of length `cols`) over the
/// fraction field of the parameter polynomials. Every basis vector is
/// primitive; one vector per free column.
pub fn poly_nullspace(exec: Exec, rows: &[Vec<Poly>], cols: usize) -> Vec<Vec<Poly>> {
    let mut a: Vec<Vec<Poly>> = rows
        .iter()
        .filter(|r| r.iter().any(|p| !p.is_zero()))
        .map(|r| primitive_part(r))
        .collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        let best = (r..a.len())
            .filter(|&i| !a[i][c].is_zero())
            .min_by_key(|&i| pivot_cost(&a[i][c]));
        let Some(p) = best else { continue };
        a.swap(r, p);
        let pivot_row = a[r].clone();
        let pc = pivot_row[c].clone();
        let updated = exec.map_range(a.len(), |i| {
            if i == r || a[i][c].is_zero() {
                return None;
            }
            let f = &a[i][c];
            let row: Vec<Poly> = a[i]
                .iter()
                .zip(&pivot_row)
                .map(|(x, y)| &(&pc * x) - &(f * y))
                .collect();
            Some(primitive_part(&row))
        });
        for (i, row) in updated.into_iter().enumerate() {
            if let Some(row) = row {
                a[i] = row;
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    exec.map(&free, |&f| {
        let involved: Vec<usize> = (0..pivots.len()).filter(|&k| !a[k][f].is_zero()).collect();
        // common multiple of the pivots involved
        let mut lcm = Poly::one();
        let mut seen: Vec<Poly> = Vec::new();
        for &k in &involved {
            let p = &a[k][pivots[k]];
            if !seen.contains(p) {
                seen.push(p.clone());
                lcm = &lcm * p;
            }
        }
        let mut v = vec![Poly::zero(); cols];
        v[f] = lcm.clone();
        for &k in &involved {
            let q = lcm
                .div_exact(&a[k][pivots[k]])
                .expect("pivot divides the product of pivots");
            v[pivots[k]] = -(&a[k][f] * &q);
        }
        primitive_part(&v)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{nullspace, Matrix};
    use crate::rational::int;
    use crate::symbolic::Symbol;

    fn dot(a: &[Poly], b: &[Poly]) -> Poly {
        a.iter()
            .zip(b)
            .fold(Poly::zero(), |acc, (x, y)| &acc + &(x * y))
    }

    #[test]
    fn parametric_kernel() {
        let rho = Poly::symbol(&Symbol::parameter("rho"));
        let nu = Poly::symbol(&Symbol::parameter("nu"));
        let rows = vec![
            vec![rho.clone(), Poly::int(-1), Poly::zero(), nu.clone()],
            vec![Poly::zero(), nu.clone(), rho.clone(), Poly::int(1)],
        ];
        let ns = poly_nullspace(Exec::Sequential, &rows, 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for row in &rows {
                assert!(dot(row, v).is_zero());
            }
        }
    }

    #[test]
    fn agrees_with_rational_rref_on_constants() {
        let ints = [[1, 2, 0, -1, 3], [2, 4, 1, 0, 1], [3, 6, 1, -1, 4]];
        let rows: Vec<Vec<Poly>> = ints
            .iter()
            .map(|r| r.iter().map(|&x| Poly::int(x)).collect())
            .collect();
        let rat: Matrix = ints
            .iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect();
        let a = poly_nullspace(Exec::Parallel, &rows, 5);
        let b = nullspace(&rat, 5);
        assert_eq!(a.len(), b.len());
        for v in &a {
            let q: Vec<Rational> = v.iter().map(|p| p.as_constant().unwrap()).collect();
            assert!(crate::linalg::express_in_span(&b, &q).is_some());
        }
    }
}
