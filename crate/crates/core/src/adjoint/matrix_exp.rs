//! Exact `exp(εA)` for rational matrices with rational spectrum.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::exp_poly::ExpPoly;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::rational::{factorial, format_rational, Rational};

/// Characteristic polynomial `det(λI − A)`, coefficients in ascending
/// degree (Faddeev–LeVerrier).
pub fn characteristic_polynomial(a: &Matrix) -> Vec<Rational> {
    let n = a.len();
    let mut c = vec![<Rational as Zero>::zero(); n + 1];
    c[n] = <Rational as One>::one();
    let mut m = linalg::zeros(n, n);
    for k in 1..=n {
        let am = linalg::mat_mul(a, &m);
        m = linalg::add(&am, &linalg::scale(&linalg::identity(n), &c[n - k + 1]));
        let t = linalg::trace(&linalg::mat_mul(a, &m));
        c[n - k] = -t / Rational::from_integer(BigInt::from(k));
    }
    c
}

fn eval(p: &[Rational], x: &Rational) -> Rational {
    p.iter()
        .rev()
        .fold(<Rational as Zero>::zero(), |acc, c| acc * x + c)
}

/// Divides by `(λ − r)`, assuming `r` is a root.
fn deflate(p: &[Rational], r: &Rational) -> Vec<Rational> {
    let n = p.len() - 1;
    let mut q = vec![<Rational as Zero>::zero(); n];
    let mut carry = <Rational as Zero>::zero();
    for i in (0..n).rev() {
        carry = &p[i + 1] + &carry * r;
        q[i] = carry.clone();
    }
    q
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    Some(out)
}

fn format_poly(p: &[Rational]) -> String {
    let mut parts = Vec::new();
    for (i, c) in p.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let c = format_rational(c);
        parts.push(match i {
            0 => c,
            1 => format!("{c}*t"),
            _ => format!("{c}*t^{i}"),
        });
    }
    parts.join(" + ")
}

/// Rational roots with multiplicities; `Err(residual factor)` when the
/// polynomial does not split over ℚ.
pub fn rational_roots(p: &[Rational]) -> std::result::Result<Vec<(Rational, usize)>, String> {
    let mut p = p.to_vec();
    while p.len() > 1 && p.last().unwrap().is_zero() {
        p.pop();
    }
    let mut roots: Vec<(Rational, usize)> = Vec::new();
    let push = |r: Rational, roots: &mut Vec<(Rational, usize)>| match roots
        .iter_mut()
        .find(|(x, _)| *x == r)
    {
        Some((_, m)) => *m += 1,
        None => roots.push((r, 1)),
    };
    while p.len() > 1 && p[0].is_zero() {
        p.remove(0);
        push(<Rational as Zero>::zero(), &mut roots);
    }
    'outer: while p.len() > 1 {
        let l = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = p
            .iter()
            .map(|c| (c * Rational::from_integer(l.clone())).to_integer())
            .collect();
        let (Some(num), Some(den)) = (divisors(&ints[0]), divisors(ints.last().unwrap())) else {
            return Err(format_poly(&p));
        };
        for a in &num {
            for b in &den {
                for sign in [1, -1] {
                    let r = Rational::new(a * sign, b.clone());
                    if eval(&p, &r).is_zero() {
                        p = deflate(&p, &r);
                        push(r, &mut roots);
                        continue 'outer;
                    }
                }
            }
        }
        return Err(format_poly(&p));
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(roots)
}

fn mat_pow(a: &Matrix, k: usize) -> Matrix {
    (0..k).fold(linalg::identity(a.len()), |acc, _| linalg::mat_mul(&acc, a))
}

fn format_matrix(a: &Matrix) -> String {
    let rows: Vec<String> = a
        .iter()
        .map(|r| {
            format!(
                "[{}]",
                r.iter().map(format_rational).collect::<Vec<_>>().join(", ")
            )
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

/// Jordan–Chevalley parts `(S, N)` with spectral projectors per eigenvalue.
pub struct SpectralSplit {
    pub eigen: Vec<(Rational, usize, Matrix)>,
    pub semisimple: Matrix,
    pub nilpotent: Matrix,
}

pub fn spectral_split(a: &Matrix) -> Result<SpectralSplit> {
    let n = a.len();
    let roots = rational_roots(&characteristic_polynomial(a)).map_err(|factor| {
        Error::UnsupportedSpectrum {
            matrix: format_matrix(a),
            factor,
        }
    })?;
    // basis adapted to the generalized eigenspaces
    let mut columns: Vec<Vec<Rational>> = Vec::new();
    let mut blocks = Vec::new();
    for (lambda, mult) in &roots {
        let shifted = linalg::add(a, &linalg::scale(&linalg::identity(n), &-lambda.clone()));
        let space = linalg::nullspace(&mat_pow(&shifted, *mult), n);
        blocks.push((columns.len(), space.len()));
        columns.extend(space);
    }
    let v = linalg::transpose(&columns);
    let v_inv = linalg::inverse(&v).ok_or_else(|| Error::UnsupportedSpectrum {
        matrix: format_matrix(a),
        factor: "generalized eigenvectors do not span".into(),
    })?;
    let mut eigen = Vec::new();
    let mut s = linalg::zeros(n, n);
    for ((lambda, mult), (start, len)) in roots.iter().zip(blocks) {
        let mut e = linalg::zeros(n, n);
        for i in start..start + len {
            e[i][i] = <Rational as One>::one();
        }
        let p = linalg::mat_mul(&linalg::mat_mul(&v, &e), &v_inv);
        s = linalg::add(&s, &linalg::scale(&p, lambda));
        eigen.push((lambda.clone(), *mult, p));
    }
    let nil = linalg::add(a, &linalg::scale(&s, &-<Rational as One>::one()));
    Ok(SpectralSplit {
        eigen,
        semisimple: s,
        nilpotent: nil,
    })
}

/// `exp(εA) = Σ_λ e^{λε} P_λ Σ_{j<m_λ} (εN)^j / j!`.
pub fn matrix_exp(a: &Matrix) -> Result<Vec<Vec<ExpPoly>>> {
    let n = a.len();
    let split = spectral_split(a)?;
    let mut out = vec![vec![ExpPoly::zero(); n]; n];
    for (lambda, mult, p) in &split.eigen {
        let mut term = p.clone();
        for j in 0..*mult {
            if j > 0 {
                term = linalg::mat_mul(&term, &split.nilpotent);
            }
            if linalg::is_zero_matrix(&term) {
                break;
            }
            let inv_fact = Rational::new(BigInt::one(), factorial(j as u32));
            for r in 0..n {
                for c in 0..n {
                    if !term[r][c].is_zero() {
                        out[r][c] = &out[r][c]
                            + &ExpPoly::term(&term[r][c] * &inv_fact, j as u32, lambda.clone());
                    }
                }
            }
        }
    }
    Ok(out)
}

pub fn exp_identity(n: usize) -> Vec<Vec<ExpPoly>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        ExpPoly::one()
                    } else {
                        ExpPoly::zero()
                    }
                })
                .collect()
        })
        .collect()
}

pub fn exp_mat_mul(a: &[Vec<ExpPoly>], b: &[Vec<ExpPoly>]) -> Vec<Vec<ExpPoly>> {
    let n = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..n).fold(ExpPoly::zero(), |acc, k| {
                        if row[k].is_zero() || b[k][j].is_zero() {
                            acc
                        } else {
                            &acc + &(&row[k] * &b[k][j])
                        }
                    })
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect()
    }

    #[test]
    fn char_poly_and_roots() {
        let a = m(&[&[2, 1, 0], &[0, 2, 0], &[0, 0, -3]]);
        let roots = rational_roots(&characteristic_polynomial(&a)).unwrap();
        assert_eq!(roots, vec![(int(-3), 1), (int(2), 2)]);
        let rot = m(&[&[0, -1], &[1, 0]]);
        assert!(matches!(
            matrix_exp(&rot),
            Err(Error::UnsupportedSpectrum { .. })
        ));
    }

    #[test]
    fn jordan_block_exponential() {
        let a = m(&[&[2, 1], &[0, 2]]);
        let e = matrix_exp(&a).unwrap();
        assert_eq!(e[0][0], ExpPoly::exp(int(2)));
        assert_eq!(e[0][1], ExpPoly::term(int(1), 1, int(2)));
        assert!(e[1][0].is_zero());
        let d = e
            .iter()
            .map(|r| r.iter().map(|x| x.derivative().at_zero()).collect())
            .collect::<Matrix>();
        assert_eq!(d, a);
    }

    #[test]
    fn zero_matrix() {
        assert_eq!(matrix_exp(&linalg::zeros(3, 3)).unwrap(), exp_identity(3));
    }
}
