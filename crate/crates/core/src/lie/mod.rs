//! Finite-dimensional Lie algebras given by rational structure constants.

mod subspace;

pub use subspace::Subspace;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::jet::JetSpace;
use crate::linalg::{self, Matrix};
use crate::prolong::{span_coordinates, VectorField};
use crate::rational::Rational;

/// Lie algebra with basis `e_1..e_n` and `[e_i, e_j] = Σ_k C[i][j][k] e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    labels: Vec<String>,
    constants: Vec<Vec<Vec<Rational>>>,
    realization: Option<Vec<VectorField>>,
}

impl LieAlgebra {
    /// Validates antisymmetry and the Jacobi identity.
    pub fn new(labels: Vec<String>, constants: Vec<Vec<Vec<Rational>>>) -> Result<Self> {
        let n = labels.len();
        if constants.len() != n
            || constants
                .iter()
                .any(|r| r.len() != n || r.iter().any(|c| c.len() != n))
        {
            return Err(Error::InvalidStructure(format!(
                "constants must be {n}×{n}×{n}"
            )));
        }
        let alg = LieAlgebra {
            labels,
            constants,
            realization: None,
        };
        alg.validate()?;
        Ok(alg)
    }

    pub fn abelian(n: usize) -> Self {
        LieAlgebra {
            labels: (1..=n).map(|i| format!("v{i}")).collect(),
            constants: vec![vec![vec![Rational::zero(); n]; n]; n],
            realization: None,
        }
    }

    fn validate(&self) -> Result<()> {
        let n = self.dim();
        let c = &self.constants;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if c[i][j][k] != -c[j][i][k].clone() {
                        return Err(Error::InvalidStructure(format!(
                            "antisymmetry fails for [{}, {}]",
                            self.labels[i], self.labels[j]
                        )));
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    for l in 0..n {
                        let mut s = Rational::zero();
                        for m in 0..n {
                            s += &c[i][j][m] * &c[m][k][l]
                                + &c[j][k][m] * &c[m][i][l]
                                + &c[k][i][m] * &c[m][j][l];
                        }
                        if !s.is_zero() {
                            return Err(Error::InvalidStructure(format!(
                                "Jacobi identity fails for ({}, {}, {})",
                                self.labels[i], self.labels[j], self.labels[k]
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Structure constants of a basis of vector fields; brackets must lie in
    /// the rational span of the basis.
    pub fn from_fields(
        space: &JetSpace,
        fields: &[VectorField],
        labels: Vec<String>,
    ) -> Result<Self> {
        let n = fields.len();
        if crate::prolong::canonical_basis(fields, space)?.len() < n {
            return Err(Error::LinearlyDependent);
        }
        let mut constants = vec![vec![vec![Rational::zero(); n]; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let b = fields[i].bracket(&fields[j], space)?;
                let coords = span_coordinates(fields, &b, space)?
                    .ok_or(Error::NotClosed { i: i + 1, j: j + 1 })?;
                for (k, c) in coords.iter().enumerate() {
                    let q = c
                        .as_constant()
                        .ok_or(Error::NotClosed { i: i + 1, j: j + 1 })?;
                    constants[j][i][k] = -q.clone();
                    constants[i][j][k] = q;
                }
            }
        }
        let mut alg = LieAlgebra::new(labels, constants)?;
        alg.realization = Some(fields.to_vec());
        Ok(alg)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn realization(&self) -> Option<&[VectorField]> {
        self.realization.as_deref()
    }

    /// `C^k_{ij}` (0-based).
    pub fn constant(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.constants[i][j][k]
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> &[Rational] {
        &self.constants[i][j]
    }

    pub fn bracket(&self, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let n = self.dim();
        let mut out = vec![Rational::zero(); n];
        for i in 0..n {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if b[j].is_zero() {
                    continue;
                }
                let f = &a[i] * &b[j];
                for (k, o) in out.iter_mut().enumerate() {
                    let c = &self.constants[i][j][k];
                    if !c.is_zero() {
                        *o += &f * c;
                    }
                }
            }
        }
        out
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Rational> {
        (0..self.dim())
            .map(|k| {
                if k == i {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect()
    }

    /// Matrix of `ad(a)`: column `j` holds `[a, e_j]`.
    pub fn ad(&self, a: &[Rational]) -> Matrix {
        let cols: Vec<Vec<Rational>> = (0..self.dim())
            .map(|j| self.bracket(a, &self.basis_vector(j)))
            .collect();
        linalg::transpose(&cols)
    }

    pub fn ad_basis(&self, i: usize) -> Matrix {
        self.ad(&self.basis_vector(i))
    }

    /// `K(e_i, e_j) = tr(ad e_i ∘ ad e_j)`.
    pub fn killing_form(&self) -> Matrix {
        let n = self.dim();
        let ads: Vec<Matrix> = (0..n).map(|i| self.ad_basis(i)).collect();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| linalg::trace(&linalg::mat_mul(&ads[i], &ads[j])))
                    .collect()
            })
            .collect()
    }

    pub fn killing(&self, a: &[Rational], b: &[Rational]) -> Rational {
        let k = self.killing_form();
        let kb = linalg::mat_vec(&k, b);
        a.iter().zip(&kb).map(|(x, y)| x * y).sum()
    }

    /// `[S, T]` as a subspace.
    pub fn bracket_space(&self, s: &Subspace, t: &Subspace) -> Subspace {
        let mut vs = Vec::new();
        for a in s.basis() {
            for b in t.basis() {
                vs.push(self.bracket(a, b));
            }
        }
        Subspace::span(self.dim(), &vs)
    }

    pub fn full(&self) -> Subspace {
        Subspace::full(self.dim())
    }

    pub fn derived_algebra(&self) -> Subspace {
        self.bracket_space(&self.full(), &self.full())
    }

    /// `g⁽⁰⁾ = g, g⁽ᵏ⁺¹⁾ = [g⁽ᵏ⁾, g⁽ᵏ⁾]`, up to the first repeated term.
    pub fn derived_series(&self) -> Vec<Subspace> {
        self.series(|s| self.bracket_space(s, s))
    }

    /// `g₀ = g, gₖ₊₁ = [g, gₖ]`, up to the first repeated term.
    pub fn lower_central_series(&self) -> Vec<Subspace> {
        let g = self.full();
        self.series(|s| self.bracket_space(&g, s))
    }

    fn series(&self, next: impl Fn(&Subspace) -> Subspace) -> Vec<Subspace> {
        let mut out = vec![self.full()];
        loop {
            let n = next(out.last().unwrap());
            if &n == out.last().unwrap() {
                return out;
            }
            let stop = n.is_zero();
            out.push(n);
            if stop {
                return out;
            }
        }
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series().last().unwrap().is_zero()
    }

    pub fn is_nilpotent(&self) -> bool {
        self.lower_central_series().last().unwrap().is_zero()
    }

    /// Nondegenerate Killing form (Cartan's criterion).
    pub fn is_semisimple(&self) -> bool {
        self.dim() > 0 && !linalg::determinant(&self.killing_form()).is_zero()
    }

    pub fn center(&self) -> Subspace {
        let n = self.dim();
        // [x, e_j] = -ad(e_j) x
        let rows: Matrix = (0..n).flat_map(|j| self.ad_basis(j)).collect();
        Subspace::span(n, &linalg::nullspace(&rows, n))
    }

    /// Killing-orthogonal complement of `[g, g]`.
    pub fn radical(&self) -> Subspace {
        let n = self.dim();
        let k = self.killing_form();
        let rows: Matrix = self
            .derived_algebra()
            .basis()
            .iter()
            .map(|d| linalg::mat_vec(&k, d))
            .collect();
        if rows.is_empty() {
            return self.full();
        }
        Subspace::span(n, &linalg::nullspace(&rows, n))
    }

    pub fn is_subalgebra(&self, s: &Subspace) -> bool {
        s.contains_subspace(&self.bracket_space(s, s))
    }

    pub fn is_ideal(&self, s: &Subspace) -> bool {
        s.contains_subspace(&self.bracket_space(&self.full(), s))
    }

    pub fn is_abelian(&self, s: &Subspace) -> bool {
        self.bracket_space(s, s).is_zero()
    }

    /// `{y : [y, S] ⊆ S}`.
    pub fn normalizer(&self, s: &Subspace) -> Subspace {
        let n = self.dim();
        let ann = s.annihilator();
        let mut rows: Matrix = Vec::new();
        for b in s.basis() {
            // [y, b] = -ad(b) y must be annihilated by every w ∈ S^⊥
            let adb = self.ad(b);
            for w in ann.basis() {
                rows.push(
                    (0..n)
                        .map(|j| (0..n).map(|i| &w[i] * &adb[i][j]).sum())
                        .collect(),
                );
            }
        }
        if rows.is_empty() {
            return self.full();
        }
        Subspace::span(n, &linalg::nullspace(&rows, n))
    }

    /// Subspaces `S` spanned by vectors whose brackets stay inside: reports
    /// the offending pair when not closed.
    pub fn closure_failure(&self, s: &Subspace) -> Option<(Vec<Rational>, Vec<Rational>)> {
        for a in s.basis() {
            for b in s.basis() {
                if !s.contains(&self.bracket(a, b)) {
                    return Some((a.clone(), b.clone()));
                }
            }
        }
        None
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::rational::int;

    /// Brackets read off the commutator table, independent of any realization.
    pub(crate) fn table_algebra() -> LieAlgebra {
        let n = 5;
        let mut c = vec![vec![vec![Rational::zero(); n]; n]; n];
        let mut set = |i: usize, j: usize, k: usize, v: i64| {
            c[i - 1][j - 1][k - 1] = int(v);
            c[j - 1][i - 1][k - 1] = int(-v);
        };
        set(1, 4, 1, 1);
        set(2, 5, 2, 1);
        set(3, 4, 3, 2);
        set(3, 5, 3, -4);
        LieAlgebra::new((1..=5).map(|i| format!("v{i}")).collect(), c).unwrap()
    }

    #[test]
    fn killing_form_block() {
        let g = table_algebra();
        let k = g.killing_form();
        assert_eq!(k[3][3], int(5));
        assert_eq!(k[3][4], int(-8));
        assert_eq!(k[4][4], int(17));
        assert!(!g.is_semisimple());
        assert!(g.is_solvable());
    }

    #[test]
    fn series_and_ideals() {
        let g = table_algebra();
        let ds = g.derived_series();
        assert_eq!(ds.len(), 3);
        assert_eq!(ds[1], Subspace::coordinate(5, &[0, 1, 2]));
        assert!(ds[2].is_zero());
        let a = Subspace::coordinate(5, &[0, 1, 2]);
        assert!(g.is_ideal(&a) && g.is_abelian(&a));
        let b = Subspace::coordinate(5, &[3, 4]);
        assert!(!g.is_ideal(&b) && g.is_abelian(&b));
        assert_eq!(g.radical(), g.full());
        assert!(g.center().is_zero());
        assert_eq!(
            g.normalizer(&Subspace::coordinate(5, &[0])),
            Subspace::coordinate(5, &[0, 1, 2, 3, 4])
        );
    }

    #[test]
    fn rejects_non_jacobi() {
        let n = 3;
        let mut c = vec![vec![vec![Rational::zero(); n]; n]; n];
        // [e1,e2]=e3, [e2,e3]=e3, [e1,e3]=e1 violates Jacobi
        c[0][1][2] = int(1);
        c[1][0][2] = int(-1);
        c[1][2][2] = int(1);
        c[2][1][2] = int(-1);
        c[0][2][0] = int(1);
        c[2][0][0] = int(-1);
        assert!(matches!(
            LieAlgebra::new(vec!["a".into(), "b".into(), "c".into()], c),
            Err(Error::InvalidStructure(_))
        ));
    }
}
