//! Monomial invariants of translation/scaling generators, invariant
//! verification and similarity forms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::jet::JetSpace;
use crate::linalg::{integer_kernel, lattice_contains, Matrix};
use crate::parallel::Exec;
use crate::prolong::{act, prolong, VectorField};
use crate::rational::Rational;
use crate::symbolic::{Atom, Expr, Poly, Symbol};

/// Shape of a generator relative to the base coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorShape {
    /// Constant coefficients.
    Translation(Vec<Rational>),
    /// Coefficient of `z_k` is `w_k · z_k`.
    Scaling(Vec<Rational>),
}

pub fn classify(vf: &VectorField, space: &JetSpace) -> Result<GeneratorShape> {
    let base = space.base_coordinates();
    let constants: Option<Vec<Rational>> = vf.coeffs().iter().map(|c| c.as_constant()).collect();
    if let Some(c) = constants {
        return Ok(GeneratorShape::Translation(c));
    }
    let mut weights = Vec::with_capacity(base.len());
    for (k, c) in vf.coeffs().iter().enumerate() {
        let own = Poly::symbol(&base[k]);
        let w = if c.is_zero() {
            Some(Rational::zero())
        } else {
            c.div_exact(&own).and_then(|q| q.as_constant())
        };
        match w {
            Some(w) => weights.push(w),
            None => {
                return Err(Error::UnsupportedGeneratorShape {
                    generator: vf.display(space),
                    coordinate: base[k].to_string(),
                    coefficient: c.to_expr().to_string(),
                })
            }
        }
    }
    Ok(GeneratorShape::Scaling(weights))
}

/// Weights of base and jet coordinates under the scaling generators, plus
/// the coordinates moved by some translation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSystem {
    pub order: u32,
    pub coords: Vec<Symbol>,
    pub masked: Vec<bool>,
    /// One row per scaling generator, one entry per coordinate.
    pub weights: Vec<Vec<Rational>>,
}

pub fn weight_system(gens: &[VectorField], space: &JetSpace, order: u32) -> Result<WeightSystem> {
    let base = space.base_coordinates();
    let p = space.independents().len();
    let mut coords = base.clone();
    coords.extend(space.jets_up_to(order)?);
    let mut masked = vec![false; coords.len()];
    let mut weights = Vec::new();
    for g in gens {
        let pf = prolong(g, space, order)?;
        match classify(g, space)? {
            GeneratorShape::Translation(c) => {
                for (k, ck) in c.iter().enumerate() {
                    if !ck.is_zero() {
                        masked[k] = true;
                    }
                }
                if let Some((s, _)) = pf.coeffs.iter().find(|(_, phi)| !phi.is_zero()) {
                    return Err(Error::SelfCheck(format!(
                        "translation moves the jet coordinate {s}"
                    )));
                }
            }
            GeneratorShape::Scaling(w) => {
                let mut row = w.clone();
                for s in &coords[base.len()..] {
                    let alpha = space.dependent_index(s).expect("jet of a dependent");
                    let multi = space.multi_index(s);
                    let mut ws = w[p + alpha].clone();
                    for (i, m) in multi.iter().enumerate() {
                        ws -= &w[i] * Rational::from_integer((*m).into());
                    }
                    let expected = Poly::symbol(s).scale(&ws);
                    if pf.coeffs[s] != expected {
                        return Err(Error::SelfCheck(format!(
                            "prolonged coefficient of {s} is {}, additivity gives {}",
                            pf.coeffs[s].to_expr(),
                            expected.to_expr()
                        )));
                    }
                    row.push(ws);
                }
                weights.push(row);
            }
        }
    }
    Ok(WeightSystem {
        order,
        coords,
        masked,
        weights,
    })
}

impl WeightSystem {
    /// Coordinates not moved by any translation.
    pub fn free(&self) -> Vec<Symbol> {
        self.coords
            .iter()
            .zip(&self.masked)
            .filter(|(_, m)| !**m)
            .map(|(s, _)| s.clone())
            .collect()
    }

    /// Weight matrix restricted to the free coordinates.
    pub fn matrix(&self) -> Matrix {
        self.weights
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&self.masked)
                    .filter(|(_, m)| !**m)
                    .map(|(w, _)| w.clone())
                    .collect()
            })
            .collect()
    }

    /// Exponent vector of a monomial over the free coordinates; `None` if
    /// `e` is not a single monomial or involves a masked coordinate.
    pub fn exponents_of(&self, e: &Expr) -> Result<Option<Vec<BigInt>>> {
        let p = e.to_poly()?;
        let Some((m, _)) = p.single_term() else {
            return Ok(None);
        };
        if !m.exp().is_zero() {
            return Ok(None);
        }
        let free = self.free();
        let mut out = vec![BigInt::zero(); free.len()];
        for (a, k) in m.factors() {
            let Atom::Sym(s) = a else { return Ok(None) };
            if s.role() == crate::symbolic::Role::Parameter {
                continue;
            }
            match free.iter().position(|f| f == s) {
                Some(i) => out[i] = BigInt::from(*k),
                None => return Ok(None),
            }
        }
        Ok(Some(out))
    }
}

/// Monomial `Π z_i^{e_i}` over the free coordinates of a weight system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialInvariant {
    pub coords: Vec<Symbol>,
    pub exponents: Vec<BigInt>,
}

impl MonomialInvariant {
    pub fn to_poly(&self) -> Poly {
        let mut p = Poly::one();
        for (s, e) in self.coords.iter().zip(&self.exponents) {
            if !e.is_zero() {
                let e = e.to_i64().expect("exponent fits in i64");
                p = &p * &Poly::symbol(s).pow(e).expect("monomial power");
            }
        }
        p
    }

    pub fn to_expr(&self) -> Expr {
        self.to_poly().to_expr()
    }
}

/// Basis of the lattice of zero-weight monomials over the free coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantLattice {
    pub coords: Vec<Symbol>,
    pub basis: Vec<Vec<BigInt>>,
}

pub fn monomial_invariants(ws: &WeightSystem) -> InvariantLattice {
    let coords = ws.free();
    let basis = integer_kernel(&ws.matrix(), coords.len());
    InvariantLattice { coords, basis }
}

impl InvariantLattice {
    pub fn generators(&self) -> Vec<MonomialInvariant> {
        self.basis
            .iter()
            .map(|b| MonomialInvariant {
                coords: self.coords.clone(),
                exponents: b.clone(),
            })
            .collect()
    }

    pub fn contains(&self, exponents: &[BigInt]) -> bool {
        exponents.iter().all(Zero::is_zero) || lattice_contains(&self.basis, exponents)
    }

    /// Lattice membership of a monomial expression.
    pub fn contains_expr(&self, ws: &WeightSystem, e: &Expr) -> Result<bool> {
        Ok(ws.exponents_of(e)?.is_some_and(|v| self.contains(&v)))
    }
}

/// `pr g (e) = 0` for every generator.
pub fn verify_invariant(e: &Expr, gens: &[VectorField], space: &JetSpace) -> Result<bool> {
    let p = e.to_poly()?;
    for g in gens {
        if !act(g, space, &p)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcome of enumerating exponent vectors in a box.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoxCount {
    pub checked: u64,
    pub zero_weight: u64,
    pub outside_lattice: u64,
}

fn integer_weight_rows(m: &Matrix) -> Vec<Vec<i64>> {
    m.iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            row.iter()
                .map(|q| {
                    (q * Rational::from_integer(l.clone()))
                        .to_integer()
                        .to_i64()
                        .expect("weight fits in i64")
                })
                .collect()
        })
        .collect()
}

fn in_echelon_lattice(basis: &[Vec<i64>], v: &mut [i64]) -> bool {
    for row in basis {
        let Some(c) = row.iter().position(|x| *x != 0) else {
            continue;
        };
        if v[c] % row[c] != 0 {
            return false;
        }
        let f = v[c] / row[c];
        if f != 0 {
            for (x, r) in v.iter_mut().zip(row) {
                *x -= f * r;
            }
        }
    }
    v.iter().all(|x| *x == 0)
}

/// Counts zero-weight exponent vectors with entries in `[-bound, bound]`
/// that the lattice misses.
pub fn brute_force_completeness(
    exec: Exec,
    ws: &WeightSystem,
    lattice: &InvariantLattice,
    bound: i64,
) -> BoxCount {
    let w = integer_weight_rows(&ws.matrix());
    let basis: Vec<Vec<i64>> = lattice
        .basis
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| x.to_i64().expect("lattice entry fits in i64"))
                .collect()
        })
        .collect();
    let n = lattice.coords.len();
    let side = (2 * bound + 1) as u64;
    if n == 0 {
        return BoxCount {
            checked: 1,
            zero_weight: 1,
            outside_lattice: 0,
        };
    }
    // the first coordinate is split across workers, the rest walk an odometer
    let results = exec.map_range(side as usize, |first| {
        let mut digits = vec![-bound; n];
        digits[0] = first as i64 - bound;
        let mut sums: Vec<i64> = w
            .iter()
            .map(|r| r.iter().zip(&digits).map(|(a, b)| a * b).sum())
            .collect();
        let mut count = BoxCount {
            checked: 0,
            zero_weight: 0,
            outside_lattice: 0,
        };
        loop {
            count.checked += 1;
            if sums.iter().all(|s| *s == 0) {
                count.zero_weight += 1;
                let mut v = digits.clone();
                if !in_echelon_lattice(&basis, &mut v) {
                    count.outside_lattice += 1;
                }
            }
            let mut k = 1;
            loop {
                if k == n {
                    return count;
                }
                if digits[k] < bound {
                    digits[k] += 1;
                    for (s, r) in sums.iter_mut().zip(&w) {
                        *s += r[k];
                    }
                    break;
                }
                for (s, r) in sums.iter_mut().zip(&w) {
                    *s -= 2 * bound * r[k];
                }
                digits[k] = -bound;
                k += 1;
            }
        }
    });
    results.into_iter().fold(
        BoxCount {
            checked: 0,
            zero_weight: 0,
            outside_lattice: 0,
        },
        |a, b| BoxCount {
            checked: a.checked + b.checked,
            zero_weight: a.zero_weight + b.zero_weight,
            outside_lattice: a.outside_lattice + b.outside_lattice,
        },
    )
}

/// Change of variables reducing by one generator: invariant coordinates `r`,
/// group coordinate `s`, and the ansatz for each base coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimilarityForm {
    pub invariants: Vec<(String, Expr)>,
    pub substitution: Vec<(Symbol, Expr)>,
    pub reduces: bool,
    pub note: Option<String>,
}

impl SimilarityForm {
    pub fn describe(&self) -> String {
        if !self.reduces {
            return self.note.clone().unwrap_or_default();
        }
        self.substitution
            .iter()
            .map(|(z, e)| format!("{z} = {e}"))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

fn exp_of(k: &Rational, s: &Expr) -> Expr {
    if k.is_zero() {
        return Expr::one();
    }
    let arg = (Expr::rational(k.clone()) * s.clone())
        .normalize()
        .expect("linear argument");
    Expr::func("exp", vec![arg])
}

/// Similarity variables for a single translation or scaling generator;
/// `names` are the reduced unknown functions, one per dependent variable.
pub fn similarity_form(
    vf: &VectorField,
    space: &JetSpace,
    names: &[String],
) -> Result<SimilarityForm> {
    let base = space.base_coordinates();
    let p = space.independents().len();
    if names.len() != base.len() - p {
        return Err(Error::Dimension(format!(
            "expected {} function names",
            base.len() - p
        )));
    }
    let (kind, c) = match classify(vf, space)? {
        GeneratorShape::Translation(c) => ("translation", c),
        GeneratorShape::Scaling(w) => ("scaling", w),
    };
    let Some(k) = (0..p).find(|&i| !c[i].is_zero()) else {
        let moved: Vec<String> = (0..base.len())
            .filter(|&i| !c[i].is_zero())
            .map(|i| base[i].to_string())
            .collect();
        return Ok(SimilarityForm {
            invariants: base
                .iter()
                .filter(|z| !moved.contains(&z.to_string()))
                .map(|z| (z.to_string(), Expr::sym(z)))
                .collect(),
            substitution: Vec::new(),
            reduces: false,
            note: Some(format!(
                "{kind} of {} only; the similarity is the {kind} itself",
                moved.join(", ")
            )),
        });
    };
    let s = Expr::sym(&Symbol::independent("s"));
    let others: Vec<usize> = (0..p).filter(|&i| i != k).collect();
    let r_names: Vec<String> = if others.len() == 1 {
        vec!["r".to_string()]
    } else {
        (1..=others.len()).map(|i| format!("r{i}")).collect()
    };
    let r_exprs: Vec<Expr> = r_names
        .iter()
        .map(|n| Expr::sym(&Symbol::independent(n)))
        .collect();
    let mut invariants = Vec::new();
    let mut substitution = Vec::new();
    let zk = Expr::sym(&base[k]);
    for (j, r) in others.iter().zip(&r_exprs) {
        let q = &c[*j] / &c[k];
        let zj = Expr::sym(&base[*j]);
        let inv = if kind == "translation" {
            zj - Expr::rational(q.clone()) * zk.clone()
        } else if q.is_integer() {
            zj * zk.clone().pow(-q.to_integer().to_i64().unwrap())
        } else {
            return Err(Error::Unsupported(format!(
                "non-integral weight ratio {q} in similarity form"
            )));
        };
        invariants.push((r.to_string(), inv.normalize()?));
    }
    for i in 0..base.len() {
        let q = &c[i] / &c[k];
        let e = if i == k {
            if kind == "translation" {
                Expr::rational(c[k].clone()) * s.clone()
            } else {
                exp_of(&Rational::one(), &s)
            }
        } else {
            let core = if i < p {
                r_exprs[others.iter().position(|&j| j == i).unwrap()].clone()
            } else {
                Expr::func(&names[i - p], r_exprs.clone())
            };
            if kind == "translation" {
                core + Expr::rational(c[i].clone()) * s.clone()
            } else {
                exp_of(&q, &s) * core
            }
        };
        substitution.push((base[i].clone(), e.normalize()?));
    }
    Ok(SimilarityForm {
        invariants,
        substitution,
        reduces: true,
        note: None,
    })
}

pub fn exponents(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::test_support::{fields, space};

    fn jet(js: &JetSpace, alpha: usize, m: &[u32]) -> Expr {
        Expr::sym(&js.coordinate(alpha, m).unwrap())
    }

    fn weight_of(ws: &WeightSystem, row: usize, label: &str) -> Rational {
        let k = ws.coords.iter().position(|s| s.label() == label).unwrap();
        ws.weights[row][k].clone()
    }

    #[test]
    fn weights_follow_prolongation() {
        let js = space();
        let g = fields(&js);
        let ws = weight_system(&g[4..5], &js, 1).unwrap();
        assert_eq!(weight_of(&ws, 0, "y"), int(1));
        assert_eq!(weight_of(&ws, 0, "u_y"), int(-3));
        assert_eq!(weight_of(&ws, 0, "p_y"), int(-5));
        let ws = weight_system(&g[3..4], &js, 1).unwrap();
        assert_eq!(weight_of(&ws, 0, "u_x"), int(0));
        let ws = weight_system(&g[0..1], &js, 1).unwrap();
        assert!(ws.weights.is_empty());
        assert_eq!(ws.masked.iter().filter(|m| **m).count(), 1);
    }

    #[test]
    fn mixed_generator_rejected() {
        let js = space();
        let z = js.base_coordinates();
        let vf = VectorField::new(vec![
            Poly::zero(),
            Poly::symbol(&z[0]),
            Poly::zero(),
            Poly::symbol(&z[2]),
            Poly::zero(),
        ]);
        assert!(matches!(
            classify(&vf, &js),
            Err(Error::UnsupportedGeneratorShape { .. })
        ));
    }

    #[test]
    fn single_scaling_lattice() {
        let js = space();
        let g = fields(&js);
        let ws = weight_system(&g[4..5], &js, 0).unwrap();
        let lat = monomial_invariants(&ws);
        let y = Expr::sym(&js.base_coordinates()[1]);
        let u = jet(&js, 0, &[0, 0]);
        let v = jet(&js, 1, &[0, 0]);
        let p = jet(&js, 2, &[0, 0]);
        let x = Expr::sym(&js.base_coordinates()[0]);
        for e in [
            y.clone().pow(2) * u.clone(),
            y.clone() * v,
            y.clone().pow(4) * p,
            x,
        ] {
            assert!(lat.contains_expr(&ws, &e).unwrap(), "{e}");
            assert!(verify_invariant(&e, &g[4..5], &js).unwrap());
        }
        assert!(!lat.contains_expr(&ws, &(y * u)).unwrap());
        for m in lat.generators() {
            assert!(verify_invariant(&m.to_expr(), &g[4..5], &js).unwrap());
        }
    }

    #[test]
    fn verify_examples() {
        let js = space();
        let g = fields(&js);
        let u = jet(&js, 0, &[0, 0]);
        assert!(!verify_invariant(&u, &g[3..4], &js).unwrap());
        assert!(verify_invariant(&Expr::int(7), &g, &js).unwrap());
    }

    #[test]
    fn completeness_small_box() {
        let js = space();
        let g = fields(&js);
        let ws = weight_system(&g, &js, 1).unwrap();
        let lat = monomial_invariants(&ws);
        assert_eq!(lat.coords.len(), 8);
        assert_eq!(lat.basis.len(), 6);
        let seq = brute_force_completeness(Exec::Sequential, &ws, &lat, 1);
        let par = brute_force_completeness(Exec::Parallel, &ws, &lat, 1);
        assert_eq!(seq, par);
        assert_eq!(seq.checked, 3u64.pow(8));
        assert_eq!(seq.outside_lattice, 0);
        assert!(seq.zero_weight > 1);
    }

    #[test]
    fn similarity_rows() {
        let js = space();
        let g = fields(&js);
        let names: Vec<String> = ["f", "g", "h"].iter().map(|s| s.to_string()).collect();
        let d = |i: usize| similarity_form(&g[i], &js, &names).unwrap().describe();
        assert_eq!(d(0), "x = s, y = r, u = f(r), v = g(r), p = h(r)");
        assert_eq!(d(1), "x = r, y = s, u = f(r), v = g(r), p = h(r)");
        assert!(!similarity_form(&g[2], &js, &names).unwrap().reduces);
        assert_eq!(
            d(3),
            "x = exp(s), y = r, u = exp(s)*f(r), v = g(r), p = exp(2*s)*h(r)"
        );
        assert_eq!(
            d(4),
            "x = r, y = exp(s), u = exp(-2*s)*f(r), v = exp(-s)*g(r), p = exp(-4*s)*h(r)"
        );
        let inv = similarity_form(&g[4], &js, &names).unwrap().invariants;
        assert_eq!(inv[0].1.to_string(), "x");
    }
}
