//! One-parameter flows of affine vector fields and their action on
//! solutions.

use num_traits::Zero;

use super::exp_poly::{ExpPoly, ExpPoly2, Ring};
use super::matrix_exp::{exp_identity, matrix_exp};
use crate::error::{Error, Result};
use crate::jet::JetSpace;
use crate::linalg::Matrix;
use crate::prolong::VectorField;
use crate::rational::Rational;
use crate::symbolic::{Expr, Poly, Symbol};

/// `z ↦ M(ε)·z + b(ε)` on the base coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowMap {
    pub coords: Vec<Symbol>,
    pub matrix: Vec<Vec<ExpPoly>>,
    pub offset: Vec<ExpPoly>,
}

/// Affine part of a field: `ξ(z) = A·z + b`.
pub fn affine_parts(vf: &VectorField, space: &JetSpace) -> Result<(Matrix, Vec<Rational>)> {
    let base = space.base_coordinates();
    let n = base.len();
    let mut a = vec![vec![<Rational as Zero>::zero(); n]; n];
    let mut b = vec![<Rational as Zero>::zero(); n];
    for (k, c) in vf.coeffs().iter().enumerate() {
        let not_affine = || Error::NotAffine(vf.display(space));
        for (exps, coeff) in c.collect(&base).map_err(|_| not_affine())? {
            let q = coeff.as_constant().ok_or_else(not_affine)?;
            let degree: i32 = exps.iter().sum();
            match degree {
                0 => b[k] = q,
                1 => a[k][exps.iter().position(|&e| e == 1).unwrap()] = q,
                _ => return Err(not_affine()),
            }
        }
    }
    Ok((a, b))
}

/// Solves `dz/dε = A z + b` exactly.
pub fn flow(vf: &VectorField, space: &JetSpace) -> Result<FlowMap> {
    let (a, b) = affine_parts(vf, space)?;
    let e = matrix_exp(&a)?;
    let integral: Vec<Vec<ExpPoly>> = e
        .iter()
        .map(|r| r.iter().map(|x| x.integrate_from_zero()).collect())
        .collect();
    let offset = integral
        .iter()
        .map(|row| {
            row.iter()
                .zip(&b)
                .fold(ExpPoly::zero(), |acc, (x, bi)| &acc + &x.scale(bi))
        })
        .collect();
    Ok(FlowMap {
        coords: space.base_coordinates(),
        matrix: e,
        offset,
    })
}

fn apply_affine<R: Ring>(
    m: &[Vec<R>],
    b: &[R],
    inner_m: &[Vec<R>],
    inner_b: &[R],
) -> (Vec<Vec<R>>, Vec<R>) {
    let n = m.len();
    let mm = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(R::zero(), |acc, k| acc.add(&m[i][k].mul(&inner_m[k][j]))))
                .collect()
        })
        .collect();
    let bb = (0..n)
        .map(|i| (0..n).fold(b[i].clone(), |acc, k| acc.add(&m[i][k].mul(&inner_b[k]))))
        .collect();
    (mm, bb)
}

impl FlowMap {
    pub fn identity(coords: Vec<Symbol>) -> Self {
        let n = coords.len();
        FlowMap {
            coords,
            matrix: exp_identity(n),
            offset: vec![ExpPoly::zero(); n],
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &FlowMap) -> FlowMap {
        let (matrix, offset) =
            apply_affine(&self.matrix, &self.offset, &inner.matrix, &inner.offset);
        FlowMap {
            coords: self.coords.clone(),
            matrix,
            offset,
        }
    }

    /// The map at parameter `c·ε`.
    pub fn scaled(&self, c: &Rational) -> FlowMap {
        FlowMap {
            coords: self.coords.clone(),
            matrix: self
                .matrix
                .iter()
                .map(|r| r.iter().map(|x| x.scaled(c)).collect())
                .collect(),
            offset: self.offset.iter().map(|x| x.scaled(c)).collect(),
        }
    }

    /// Inverse of a one-parameter flow (`ε ↦ −ε`).
    pub fn flow_inverse(&self) -> FlowMap {
        self.scaled(&-Rational::from_integer(1.into()))
    }

    pub fn is_identity_at_zero(&self) -> bool {
        let n = self.coords.len();
        (0..n).all(|i| {
            self.offset[i].at_zero().is_zero()
                && (0..n).all(|j| {
                    self.matrix[i][j].at_zero()
                        == if i == j {
                            Rational::from_integer(1.into())
                        } else {
                            <Rational as Zero>::zero()
                        }
                })
        })
    }

    /// `d/dε` at 0 as the affine pair `(A, b)`.
    pub fn generator(&self) -> (Matrix, Vec<Rational>) {
        (
            self.matrix
                .iter()
                .map(|r| r.iter().map(|x| x.derivative().at_zero()).collect())
                .collect(),
            self.offset
                .iter()
                .map(|x| x.derivative().at_zero())
                .collect(),
        )
    }

    /// Image of each coordinate as a polynomial in the coordinates and ε.
    pub fn image_polys(&self) -> Vec<Poly> {
        self.matrix
            .iter()
            .zip(&self.offset)
            .map(|(row, b)| {
                row.iter()
                    .zip(&self.coords)
                    .fold(b.to_poly(), |acc, (m, z)| {
                        &acc + &(&m.to_poly() * &Poly::symbol(z))
                    })
            })
            .collect()
    }

    pub fn images(&self) -> Vec<Expr> {
        self.image_polys().iter().map(|p| p.to_expr()).collect()
    }

    /// `(x + eps, y, u, v, p)`.
    pub fn display(&self) -> String {
        let parts: Vec<String> = self.images().iter().map(|e| e.to_string()).collect();
        format!("({})", parts.join(", "))
    }

    fn lift(&self, f: fn(&ExpPoly) -> ExpPoly2) -> (Vec<Vec<ExpPoly2>>, Vec<ExpPoly2>) {
        (
            self.matrix
                .iter()
                .map(|r| r.iter().map(f).collect())
                .collect(),
            self.offset.iter().map(f).collect(),
        )
    }

    /// `F(ε)∘F(δ) = F(ε+δ)` as an identity in two independent parameters.
    pub fn satisfies_group_law(&self) -> bool {
        let (me, be) = self.lift(ExpPoly2::in_eps);
        let (md, bd) = self.lift(ExpPoly2::in_delta);
        let (ms, bs) = self.lift(ExpPoly2::in_sum);
        let (mc, bc) = apply_affine(&me, &be, &md, &bd);
        mc == ms && bc == bs
    }

    /// `F(aτ)∘F(bτ) = F((a+b)τ)` as an identity in τ.
    pub fn satisfies_group_law_at(&self, a: &Rational, b: &Rational) -> bool {
        let lhs = self.scaled(a).compose(&self.scaled(b));
        let rhs = self.scaled(&(a + b));
        lhs == rhs
    }
}

/// Composite `f_last ∘ … ∘ f_first` of one-parameter flows with its inverse.
pub fn compose_chain(flows: &[FlowMap]) -> Option<(FlowMap, FlowMap)> {
    let first = flows.first()?;
    let mut map = FlowMap::identity(first.coords.clone());
    let mut inv = FlowMap::identity(first.coords.clone());
    for f in flows {
        map = f.compose(&map);
        inv = inv.compose(&f.flow_inverse());
    }
    Some((map, inv))
}

/// New solution obtained from `u^α = f_α(x)` by the point map whose inverse
/// is `map`: `ũ(x) = U_inverse(X_map(x), f(X_map(x)))`.
///
/// For a one-parameter flow pass `map = F(ε)`, `inverse = F(−ε)`; the
/// independent components of `map` must not depend on the dependents.
pub fn transform_solution(
    map: &FlowMap,
    inverse: &FlowMap,
    space: &JetSpace,
    names: &[String],
) -> Result<Vec<Expr>> {
    let p = space.independents().len();
    let n = map.coords.len();
    if names.len() != n - p {
        return Err(Error::Dimension(format!(
            "expected {} solution names",
            n - p
        )));
    }
    let images = map.image_polys();
    for i in 0..p {
        for l in p..n {
            if !map.matrix[i][l].is_zero() {
                return Err(Error::Unsupported(format!(
                    "independent coordinate {} is moved by a dependent one",
                    map.coords[i]
                )));
            }
        }
    }
    let args: Vec<Expr> = images[..p].iter().map(|x| x.to_expr()).collect();
    let mut w: Vec<Poly> = images[..p].to_vec();
    for name in names {
        w.push(Expr::func(name, args.clone()).to_poly()?);
    }
    (p..n)
        .map(|k| {
            let mut acc = inverse.offset[k].to_poly();
            for (l, wl) in w.iter().enumerate() {
                let m = &inverse.matrix[k][l];
                if !m.is_zero() {
                    acc = &acc + &(&m.to_poly() * wl);
                }
            }
            Ok(acc.to_expr())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::test_support::{fields, space};

    #[test]
    fn flows_of_generators() {
        let js = space();
        let want = [
            "(x + eps, y, u, v, p)",
            "(x, y + eps, u, v, p)",
            "(x, y, u, v, p + eps)",
            "(x*exp(eps), y, u*exp(eps), v, p*exp(2*eps))",
            "(x, y*exp(eps), u*exp(-2*eps), v*exp(-eps), p*exp(-4*eps))",
        ];
        for (vf, w) in fields(&js).iter().zip(want) {
            let f = flow(vf, &js).unwrap();
            assert_eq!(f.display(), w);
            assert!(f.is_identity_at_zero());
            assert!(f.satisfies_group_law());
            assert!(f.satisfies_group_law_at(&int(2), &int(-3)));
            let (a, b) = f.generator();
            assert_eq!(affine_parts(vf, &js).unwrap(), (a, b));
        }
    }

    #[test]
    fn transformed_solutions() {
        let js = space();
        let names: Vec<String> = ["f", "g", "h"].iter().map(|s| s.to_string()).collect();
        let f4 = flow(&fields(&js)[3], &js).unwrap();
        let out = transform_solution(&f4, &f4.flow_inverse(), &js, &names).unwrap();
        let shown: Vec<String> = out.iter().map(|e| e.to_string()).collect();
        assert_eq!(
            shown,
            [
                "f(x*exp(eps), y)*exp(-eps)",
                "g(x*exp(eps), y)",
                "h(x*exp(eps), y)*exp(-2*eps)"
            ]
        );
    }

    #[test]
    fn non_affine_rejected() {
        let js = space();
        let x = Poly::symbol(&js.base_coordinates()[0]);
        let vf = VectorField::new(vec![
            &x * &x,
            Poly::zero(),
            Poly::zero(),
            Poly::zero(),
            Poly::zero(),
        ]);
        assert!(matches!(flow(&vf, &js), Err(Error::NotAffine(_))));
    }
}
