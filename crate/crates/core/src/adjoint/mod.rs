//! Adjoint representation via the Lie series, exact flows and transformed
//! solutions.

mod exp_poly;
mod flow;
mod matrix_exp;

pub use exp_poly::{eps_symbol, rational_power, ExpPoly, ExpPoly2, ParamValue, Ring};
pub use flow::{affine_parts, compose_chain, flow, transform_solution, FlowMap};
pub use matrix_exp::{
    characteristic_polynomial, exp_identity, exp_mat_mul, matrix_exp, rational_roots,
    spectral_split, SpectralSplit,
};

use crate::error::Result;
use crate::lie::LieAlgebra;
use crate::linalg;
use crate::rational::Rational;

/// `Ad(exp(ε e_i)) = exp(−ε ad e_i)` in column convention: column `j` holds
/// the coordinates of `Ad(exp(ε e_i)) e_j = e_j − ε[e_i, e_j] + …`.
pub fn ad_exp(alg: &LieAlgebra, i: usize) -> Result<Vec<Vec<ExpPoly>>> {
    matrix_exp(&linalg::scale(
        &alg.ad_basis(i),
        &-Rational::from_integer(1.into()),
    ))
}

/// Transpose: row `j` holds the image of `e_j` (the printed layout).
pub fn row_images(m: &[Vec<ExpPoly>]) -> Vec<Vec<ExpPoly>> {
    let n = m.len();
    (0..n)
        .map(|j| (0..n).map(|k| m[k][j].clone()).collect())
        .collect()
}

/// Symbolic image of `Σ a_j e_j` under `Ad(exp(ε e_i))`.
pub fn adjoint_apply_symbolic(alg: &LieAlgebra, i: usize, a: &[Rational]) -> Result<Vec<ExpPoly>> {
    let m = ad_exp(alg, i)?;
    Ok(m.iter()
        .map(|row| {
            row.iter()
                .zip(a)
                .fold(ExpPoly::zero(), |acc, (x, aj)| &acc + &x.scale(aj))
        })
        .collect())
}

/// Exact image of `Σ a_j e_j` under `Ad(exp(ε e_i))` at a rational point.
pub fn adjoint_apply(
    alg: &LieAlgebra,
    i: usize,
    at: &ParamValue,
    a: &[Rational],
) -> Result<Vec<Rational>> {
    adjoint_apply_symbolic(alg, i, a)?
        .iter()
        .map(|x| x.eval(at))
        .collect()
}

/// Evaluates an `ExpPoly` matrix at a point.
pub fn eval_matrix(m: &[Vec<ExpPoly>], at: &ParamValue) -> Result<linalg::Matrix> {
    m.iter()
        .map(|r| r.iter().map(|x| x.eval(at)).collect())
        .collect()
}
