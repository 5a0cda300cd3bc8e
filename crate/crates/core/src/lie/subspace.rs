use num_traits::Zero;

use crate::linalg::{self, Matrix};
use crate::rational::Rational;

/// Subspace of ℚⁿ stored as a reduced row-echelon basis, so equality of
/// subspaces is equality of values.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Rational>>,
}

impl Subspace {
    pub fn span(ambient: usize, vectors: &[Vec<Rational>]) -> Self {
        let rows: Matrix = vectors
            .iter()
            .filter(|v| v.iter().any(|x| !x.is_zero()))
            .cloned()
            .collect();
        let basis = if rows.is_empty() {
            Vec::new()
        } else {
            linalg::rref(&rows).0
        };
        Subspace { ambient, basis }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: linalg::identity(ambient),
        }
    }

    /// Span of the given basis elements (0-based indices).
    pub fn coordinate(ambient: usize, indices: &[usize]) -> Self {
        let id = linalg::identity(ambient);
        Subspace::span(
            ambient,
            &indices.iter().map(|&i| id[i].clone()).collect::<Vec<_>>(),
        )
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        linalg::express_in_span(&self.basis, v).is_some()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        Subspace::span(self.ambient, &all)
    }

    /// `{w : w·s = 0 for all s}` (the annihilator under the dot product).
    pub fn annihilator(&self) -> Subspace {
        if self.basis.is_empty() {
            return Subspace::full(self.ambient);
        }
        Subspace::span(self.ambient, &linalg::nullspace(&self.basis, self.ambient))
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        let mut rows = self.annihilator().basis;
        rows.extend(other.annihilator().basis);
        if rows.is_empty() {
            return Subspace::full(self.ambient);
        }
        Subspace::span(self.ambient, &linalg::nullspace(&rows, self.ambient))
    }

    /// Image of the subspace in the quotient by `q`, as the span of
    /// representatives reduced against `q`; its dimension is
    /// `dim(self + q) − dim(q)`.
    pub fn quotient_dim(&self, q: &Subspace) -> usize {
        self.sum(q).dim() - q.dim()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn intersection_and_sum() {
        let a = Subspace::coordinate(4, &[0, 1]);
        let b = Subspace::span(
            4,
            &[
                vec![int(1), int(1), int(0), int(0)],
                vec![int(0), int(0), int(1), int(0)],
            ],
        );
        assert_eq!(a.intersection(&b).dim(), 1);
        assert_eq!(a.sum(&b).dim(), 3);
        assert!(a
            .intersection(&b)
            .contains(&[int(2), int(2), int(0), int(0)]));
        assert_eq!(Subspace::span(4, &[vec![int(0); 4]]), Subspace::zero(4));
    }
}
