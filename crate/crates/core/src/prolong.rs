//! Vector fields, prolongation, the symmetry condition and determining
//! equations under a polynomial ansatz.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::jet::{JetSpace, PdeSystem};
use crate::linalg::{self, poly_nullspace, primitive_part};
use crate::parallel::Exec;
use crate::rational::Rational;
use crate::symbolic::{Expr, Monomial, Poly, Role, Symbol};

/// `Σ ξ_i ∂/∂x_i + Σ φ_α ∂/∂u^α`; coefficients indexed like
/// [`JetSpace::base_coordinates`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VectorField {
    coeffs: Vec<Poly>,
}

impl VectorField {
    pub fn new(coeffs: Vec<Poly>) -> Self {
        VectorField { coeffs }
    }

    pub fn zero(space: &JetSpace) -> Self {
        VectorField {
            coeffs: vec![Poly::zero(); space.base_coordinates().len()],
        }
    }

    /// Builds a field from `(coordinate, coefficient)` pairs; coordinates not
    /// listed get coefficient zero.
    pub fn from_pairs(space: &JetSpace, pairs: &[(Symbol, Expr)]) -> Result<Self> {
        let base = space.base_coordinates();
        let mut coeffs = vec![Poly::zero(); base.len()];
        for (s, e) in pairs {
            let k = base
                .iter()
                .position(|b| b == s)
                .ok_or_else(|| Error::Unsupported(format!("{s} is not a base coordinate")))?;
            coeffs[k] = &coeffs[k] + &e.to_poly()?;
        }
        let vf = VectorField { coeffs };
        vf.check_base_only()?;
        Ok(vf)
    }

    fn check_base_only(&self) -> Result<()> {
        for c in &self.coeffs {
            if let Some(s) = c.symbols().into_iter().find(|s| s.role() == Role::Jet) {
                return Err(Error::Unsupported(format!(
                    "vector field coefficient depends on the jet coordinate {s}"
                )));
            }
        }
        Ok(())
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &Poly {
        &self.coeffs[k]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, c: &Poly) -> VectorField {
        VectorField {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &VectorField) -> VectorField {
        VectorField {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &VectorField) -> VectorField {
        VectorField {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// `Σ c_i v_i`.
    pub fn combination(space: &JetSpace, fields: &[VectorField], coeffs: &[Poly]) -> VectorField {
        fields
            .iter()
            .zip(coeffs)
            .fold(VectorField::zero(space), |acc, (f, c)| acc.add(&f.scale(c)))
    }

    /// Action on a function of the base coordinates.
    pub fn apply(&self, space: &JetSpace, f: &Poly) -> Result<Poly> {
        let mut out = Poly::zero();
        for (c, s) in self.coeffs.iter().zip(space.base_coordinates()) {
            if !c.is_zero() {
                out = &out + &(c * &f.diff(&s)?);
            }
        }
        Ok(out)
    }

    /// Lie bracket `[v, w]`, coefficient-wise `v(w^k) − w(v^k)`.
    pub fn bracket(&self, other: &VectorField, space: &JetSpace) -> Result<VectorField> {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(vk, wk)| Ok(&self.apply(space, wk)? - &other.apply(space, vk)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(VectorField { coeffs })
    }

    /// Parser-compatible text such as `x*D(x) + u*D(u) + 2*p*D(p)`.
    pub fn display(&self, space: &JetSpace) -> String {
        let mut out = String::new();
        for (c, s) in self.coeffs.iter().zip(space.base_coordinates()) {
            if c.is_zero() {
                continue;
            }
            let e = c.to_expr();
            let (neg, e) = if e.is_negative_form() {
                (true, e.negated_form())
            } else {
                (false, e)
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            match &e {
                Expr::Const(q) if q.is_one() => {}
                Expr::Sum(_) => out.push_str(&format!("({})*", e.source())),
                _ => out.push_str(&format!("{}*", e.source())),
            }
            out.push_str(&format!("D({})", s.name()));
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// Flattened coefficient vector keyed by `(slot, base monomial)`.
    fn flatten(&self, space: &JetSpace) -> Result<BTreeMap<(usize, Vec<i32>), Poly>> {
        let base = space.base_coordinates();
        let mut out = BTreeMap::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            for (key, p) in c.collect(&base)? {
                out.insert((k, key), p);
            }
        }
        Ok(out)
    }
}

/// `Q^α = φ_α − Σ ξ_i u^α_{x_i}`.
pub fn characteristic(vf: &VectorField, space: &JetSpace) -> Result<Vec<Poly>> {
    let p = space.independents().len();
    (0..space.dependents().len())
        .map(|alpha| {
            let mut q = vf.coeff(p + alpha).clone();
            for i in 0..p {
                let xi = vf.coeff(i);
                if !xi.is_zero() {
                    let mut m = vec![0; p];
                    m[i] = 1;
                    q = &q - &(xi * &Poly::symbol(&space.coordinate(alpha, &m)?));
                }
            }
            Ok(q)
        })
        .collect()
}

/// A vector field together with its prolongation coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProlongedField {
    pub base: VectorField,
    pub order: u32,
    /// `φ^J_α` for every jet coordinate of order `1..=order`.
    pub coeffs: BTreeMap<Symbol, Poly>,
}

/// Prolongs via `φ^J_α = D_J Q^α + Σ_i ξ_i u^α_{J,i}`.
pub fn prolong(vf: &VectorField, space: &JetSpace, order: u32) -> Result<ProlongedField> {
    let p = space.independents().len();
    let q = characteristic(vf, space)?;
    let mut coeffs = BTreeMap::new();
    for (alpha, q_alpha) in q.iter().enumerate() {
        let mut derivs: BTreeMap<Vec<u32>, Poly> = BTreeMap::new();
        derivs.insert(vec![0; p], q_alpha.clone());
        for k in 1..=order {
            for multi in space.multi_indices(k) {
                let i = multi.iter().position(|&c| c > 0).unwrap();
                let mut prev = multi.clone();
                prev[i] -= 1;
                let d = space.total_derivative(&derivs[&prev], i)?;
                let mut phi = d.clone();
                for j in 0..p {
                    let xi = vf.coeff(j);
                    if !xi.is_zero() {
                        let mut m = multi.clone();
                        m[j] += 1;
                        phi = &phi + &(xi * &Poly::symbol(&space.coordinate(alpha, &m)?));
                    }
                }
                coeffs.insert(space.coordinate(alpha, &multi)?, phi);
                derivs.insert(multi, d);
            }
        }
    }
    Ok(ProlongedField {
        base: vf.clone(),
        order,
        coeffs,
    })
}

impl ProlongedField {
    /// `pr v (e)`; `e` may involve jet coordinates up to `self.order`.
    pub fn apply(&self, space: &JetSpace, e: &Poly) -> Result<Poly> {
        let mut out = self.base.apply(space, e)?;
        for s in e.symbols() {
            if s.role() != Role::Jet {
                continue;
            }
            let phi = self.coeffs.get(&s).ok_or(Error::OrderLimit {
                order: s.order() as usize,
                limit: self.order as usize,
            })?;
            let d = e.diff(&s)?;
            if !d.is_zero() {
                out = &out + &(phi * &d);
            }
        }
        Ok(out)
    }
}

fn max_jet_order(e: &Poly) -> u32 {
    e.symbols()
        .iter()
        .filter(|s| s.role() == Role::Jet)
        .map(|s| s.order())
        .max()
        .unwrap_or(0)
}

/// Prolongs as far as `e` needs and applies.
pub fn act(vf: &VectorField, space: &JetSpace, e: &Poly) -> Result<Poly> {
    prolong(vf, space, max_jet_order(e))?.apply(space, e)
}

/// Residuals of the symmetry condition, one per equation, reduced modulo
/// the system. All zero iff `vf` is an infinitesimal symmetry.
pub fn symmetry_residual(vf: &VectorField, sys: &PdeSystem) -> Result<Vec<Poly>> {
    let order = sys.equations().iter().map(max_jet_order).max().unwrap_or(0);
    let pf = prolong(vf, sys.space(), order)?;
    sys.equations()
        .iter()
        .map(|eq| sys.reduce_mod(&pf.apply(sys.space(), eq)?))
        .collect()
}

pub fn is_symmetry(vf: &VectorField, sys: &PdeSystem) -> Result<bool> {
    Ok(symmetry_residual(vf, sys)?.iter().all(|r| r.is_zero()))
}

/// Linear homogeneous equations on the ansatz unknowns.
#[derive(Clone, Debug)]
pub struct DeterminingSystem {
    pub degree: u32,
    /// Exponent vectors over the base coordinates, total degree ≤ `degree`.
    pub monomials: Vec<Vec<u32>>,
    /// Unknown for slot `k` and monomial `m` at index `k·monomials.len() + m`.
    pub unknowns: Vec<Symbol>,
    /// Coefficient rows over the unknowns (entries in the parameters).
    pub rows: Vec<Vec<Poly>>,
    /// Number of split equations before deduplication.
    pub raw_count: usize,
}

impl DeterminingSystem {
    pub fn equation_count(&self) -> usize {
        self.rows.len()
    }

    /// The equations as expressions `Σ row_j c_j`.
    pub fn equations(&self) -> Vec<Expr> {
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&self.unknowns)
                    .fold(Poly::zero(), |acc, (a, c)| &acc + &(a * &Poly::symbol(c)))
                    .to_expr()
            })
            .collect()
    }
}

/// Exponent vectors of total degree ≤ `degree` in `n` variables, graded.
pub fn monomials_up_to(n: usize, degree: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, k: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == n - 1 {
            prefix.push(k);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in (0..=k).rev() {
            prefix.push(first);
            rec(n, k - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for k in 0..=degree {
        rec(n, k, &mut Vec::new(), &mut out);
    }
    out
}

fn monomial_poly(vars: &[Symbol], exps: &[u32]) -> Poly {
    let mut m = Monomial::one();
    for (v, e) in vars.iter().zip(exps) {
        if *e > 0 {
            m = m.mul(&Monomial::atom(
                crate::symbolic::Atom::Sym(v.clone()),
                *e as i32,
            ));
        }
    }
    Poly::term(m, Rational::one())
}

/// The general field of the ansatz with fresh unknown coefficients.
pub fn ansatz(space: &JetSpace, degree: u32) -> (VectorField, Vec<Symbol>, Vec<Vec<u32>>) {
    let base = space.base_coordinates();
    let monomials = monomials_up_to(base.len(), degree);
    let mut unknowns = Vec::new();
    let mut coeffs = Vec::new();
    for k in 0..base.len() {
        let mut c = Poly::zero();
        for (m, exps) in monomials.iter().enumerate() {
            let u = Symbol::unknown(&format!("c{k:02}_{m:04}"));
            c = &c + &(&Poly::symbol(&u) * &monomial_poly(&base, exps));
            unknowns.push(u);
        }
        coeffs.push(c);
    }
    (VectorField::new(coeffs), unknowns, monomials)
}

pub fn build_determining(sys: &PdeSystem, degree: u32) -> Result<DeterminingSystem> {
    build_determining_with(Exec::default(), sys, degree)
}

/// Splits the symmetry condition of the ansatz field over every jet
/// coordinate and base variable; each coefficient is one equation.
pub fn build_determining_with(
    exec: Exec,
    sys: &PdeSystem,
    degree: u32,
) -> Result<DeterminingSystem> {
    for eq in sys.equations() {
        if !eq.atoms().iter().all(|a| a.as_symbol().is_some()) {
            return Err(Error::Unsupported(
                "system involves function applications".into(),
            ));
        }
    }
    let (vf, unknowns, monomials) = ansatz(sys.space(), degree);
    let residuals = symmetry_residual(&vf, sys)?;
    let split = exec.try_map(&residuals, |r| {
        let vars: Vec<Symbol> = r
            .symbols()
            .into_iter()
            .filter(|s| !matches!(s.role(), Role::Parameter | Role::Unknown))
            .collect();
        Ok::<_, Error>(r.collect(&vars)?.into_values().collect::<Vec<_>>())
    })?;
    let equations: Vec<Poly> = split.into_iter().flatten().collect();
    let raw_count = equations.len();
    let rows = exec.try_map(&equations, |eq| {
        let parts = eq.collect(&unknowns)?;
        let mut row = vec![Poly::zero(); unknowns.len()];
        for (key, coeff) in parts {
            let ones: Vec<usize> = key
                .iter()
                .enumerate()
                .filter(|(_, e)| **e != 0)
                .map(|(i, _)| i)
                .collect();
            if ones.len() != 1 || key[ones[0]] != 1 {
                return Err(Error::NotLinear(eq.to_expr().to_string()));
            }
            row[ones[0]] = coeff;
        }
        Ok(primitive_part(&row))
    })?;
    let unique: BTreeSet<Vec<Poly>> = rows.into_iter().collect();
    Ok(DeterminingSystem {
        degree,
        monomials,
        unknowns,
        rows: unique.into_iter().collect(),
        raw_count,
    })
}

pub fn solve_determining(ds: &DeterminingSystem, sys: &PdeSystem) -> Result<Vec<VectorField>> {
    solve_determining_with(Exec::default(), ds, sys)
}

/// Nullspace of the determining system re-assembled into fields; every
/// field is checked against the symmetry condition.
pub fn solve_determining_with(
    exec: Exec,
    ds: &DeterminingSystem,
    sys: &PdeSystem,
) -> Result<Vec<VectorField>> {
    let space = sys.space();
    let base = space.base_coordinates();
    let kernel = poly_nullspace(exec, &ds.rows, ds.unknowns.len());
    let nm = ds.monomials.len();
    let fields: Vec<VectorField> = kernel
        .iter()
        .map(|v| {
            let coeffs = (0..base.len())
                .map(|k| {
                    (0..nm).fold(Poly::zero(), |acc, m| {
                        &acc + &(&v[k * nm + m] * &monomial_poly(&base, &ds.monomials[m]))
                    })
                })
                .collect();
            VectorField::new(coeffs)
        })
        .collect();
    let fields = canonical_basis(&fields, space)?;
    let checks = exec.try_map(&fields, |f| is_symmetry(f, sys))?;
    if let Some(k) = checks.iter().position(|ok| !ok) {
        return Err(Error::SelfCheck(format!(
            "computed field {} does not satisfy the symmetry condition",
            fields[k].display(space)
        )));
    }
    Ok(fields)
}

/// Reduced row-echelon basis of the span when all coefficients are
/// rational; otherwise the fields unchanged.
pub fn canonical_basis(fields: &[VectorField], space: &JetSpace) -> Result<Vec<VectorField>> {
    let flat = fields
        .iter()
        .map(|f| f.flatten(space))
        .collect::<Result<Vec<_>>>()?;
    let keys: BTreeSet<(usize, Vec<i32>)> = flat.iter().flat_map(|m| m.keys().cloned()).collect();
    let keys: Vec<_> = keys.into_iter().collect();
    let mut rows = Vec::new();
    for m in &flat {
        let mut row = Vec::new();
        for k in &keys {
            match m.get(k).map(|p| p.as_constant()) {
                None => row.push(Rational::zero()),
                Some(Some(q)) => row.push(q),
                Some(None) => return Ok(fields.to_vec()),
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Ok(Vec::new());
    }
    let (r, _) = linalg::rref(&rows);
    let base = space.base_coordinates();
    Ok(r.iter()
        .map(|row| {
            let mut coeffs = vec![Poly::zero(); base.len()];
            for (q, (slot, exps)) in row.iter().zip(&keys) {
                if !q.is_zero() {
                    let e: Vec<u32> = exps.iter().map(|&x| x as u32).collect();
                    coeffs[*slot] = &coeffs[*slot] + &monomial_poly(&base, &e).scale(q);
                }
            }
            VectorField::new(coeffs)
        })
        .collect())
}

/// Coordinates of `target` in the span of `basis` over the parameter field,
/// or `None` when it lies outside. Coordinates must come out as Laurent
/// monomials in the parameters (always the case for rational spans).
pub fn span_coordinates(
    basis: &[VectorField],
    target: &VectorField,
    space: &JetSpace,
) -> Result<Option<Vec<Poly>>> {
    let mut flat = basis
        .iter()
        .map(|f| f.flatten(space))
        .collect::<Result<Vec<_>>>()?;
    flat.push(target.flatten(space)?);
    let keys: BTreeSet<(usize, Vec<i32>)> = flat.iter().flat_map(|m| m.keys().cloned()).collect();
    let rows: Vec<Vec<Poly>> = keys
        .iter()
        .map(|k| {
            flat.iter()
                .map(|m| m.get(k).cloned().unwrap_or_default())
                .collect()
        })
        .collect();
    let n = basis.len();
    let kernel = poly_nullspace(Exec::Sequential, &rows, n + 1);
    let Some(v) = kernel.iter().find(|v| !v[n].is_zero()) else {
        return Ok(None);
    };
    let inv = v[n].inverse().map_err(|_| {
        Error::Unsupported(format!(
            "span coordinates are not polynomial in the parameters ({})",
            v[n].to_expr()
        ))
    })?;
    Ok(Some(v[..n].iter().map(|c| -(c * &inv)).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn golden() -> PdeSystem {
        let js = JetSpace::new(&["x", "y"], &["u", "v", "p"], 2).unwrap();
        let j = |a: usize, m: &[u32]| Expr::sym(&js.coordinate(a, m).unwrap());
        let rho = Symbol::parameter("rho");
        let nu = Symbol::parameter("nu");
        let eqs = vec![
            j(0, &[1, 0]) + j(1, &[0, 1]),
            j(0, &[0, 0]) * j(0, &[1, 0])
                + j(1, &[0, 0]) * j(0, &[0, 1])
                + j(2, &[1, 0]) / Expr::sym(&rho)
                - Expr::sym(&nu) * j(0, &[0, 2]),
            j(2, &[0, 1]),
        ];
        let leads = vec![
            js.coordinate(1, &[0, 1]).unwrap(),
            js.coordinate(0, &[0, 2]).unwrap(),
            js.coordinate(2, &[0, 1]).unwrap(),
        ];
        PdeSystem::new(js, &eqs, &leads, &[rho, nu]).unwrap()
    }

    fn field(js: &JetSpace, coeffs: &[(&str, Expr)]) -> VectorField {
        let base = js.base_coordinates();
        let pairs: Vec<(Symbol, Expr)> = coeffs
            .iter()
            .map(|(n, e)| {
                (
                    base.iter().find(|b| b.name() == *n).unwrap().clone(),
                    e.clone(),
                )
            })
            .collect();
        VectorField::from_pairs(js, &pairs).unwrap()
    }

    #[test]
    fn characteristic_of_translation() {
        let sys = golden();
        let js = sys.space();
        let dx = field(js, &[("x", Expr::one())]);
        let q = characteristic(&dx, js).unwrap();
        for (alpha, qa) in q.iter().enumerate() {
            assert_eq!(*qa, -Poly::symbol(&js.coordinate(alpha, &[1, 0]).unwrap()));
        }
    }

    #[test]
    fn prolongation_coefficients() {
        let sys = golden();
        let js = sys.space();
        let x = Expr::sym(&js.independents()[0]);
        let y = Expr::sym(&js.independents()[1]);
        let [u, v, p] = [0, 1, 2].map(|a| Expr::sym(&js.dependents()[a]));
        let v4 = field(
            js,
            &[("x", x), ("u", u.clone()), ("p", Expr::int(2) * p.clone())],
        );
        let pf = prolong(&v4, js, 1).unwrap();
        let u_y = js.coordinate(0, &[0, 1]).unwrap();
        assert_eq!(pf.coeffs[&u_y], Poly::symbol(&u_y));
        let v5 = field(
            js,
            &[
                ("y", y),
                ("u", Expr::int(-2) * u),
                ("v", -v),
                ("p", Expr::int(-4) * p),
            ],
        );
        let pf = prolong(&v5, js, 1).unwrap();
        let u_x = js.coordinate(0, &[1, 0]).unwrap();
        assert_eq!(pf.coeffs[&u_x], Poly::symbol(&u_x).scale(&int(-2)));
    }

    #[test]
    fn residual_examples() {
        let sys = golden();
        let js = sys.space();
        let x = Expr::sym(&js.independents()[0]);
        let u = Expr::sym(&js.dependents()[0]);
        let w = field(js, &[("y", x), ("v", u.clone())]);
        assert!(is_symmetry(&w, &sys).unwrap());
        let bad = field(js, &[("u", u)]);
        let r = symmetry_residual(&bad, &sys).unwrap();
        assert_eq!(r[0], Poly::symbol(&js.coordinate(0, &[1, 0]).unwrap()));
    }

    #[test]
    fn degree_zero_gives_translations() {
        let sys = golden();
        let ds = build_determining(&sys, 0).unwrap();
        assert_eq!(ds.unknowns.len(), 5);
        let fields = solve_determining(&ds, &sys).unwrap();
        let shown: Vec<String> = fields.iter().map(|f| f.display(sys.space())).collect();
        assert_eq!(shown, vec!["D(x)", "D(y)", "D(p)"]);
    }

    #[test]
    fn degree_one_golden() {
        let sys = golden();
        let ds = build_determining(&sys, 1).unwrap();
        assert_eq!(ds.unknowns.len(), 30);
        let fields = solve_determining(&ds, &sys).unwrap();
        let shown: Vec<String> = fields.iter().map(|f| f.display(sys.space())).collect();
        assert_eq!(
            shown,
            vec![
                "D(x)",
                "x*D(x) + u*D(u) + 2*p*D(p)",
                "D(y)",
                "y*D(y) - 2*u*D(u) - v*D(v) - 4*p*D(p)",
                "x*D(y) + u*D(v)",
                "D(p)",
            ]
        );
    }
}
