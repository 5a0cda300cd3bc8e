use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::poly::{Atom, FuncApp, Poly};
use super::symbol::Symbol;
use crate::error::Result;
use crate::rational::Rational;

/// Symbolic expression tree.
///
/// Trees built with the operators are unnormalized; [`Expr::normalize`]
/// returns the unique canonical tree (sorted operands, flattened sums and
/// products, collected like terms, no zero summands or unit factors).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Expr {
    Const(Rational),
    Sym(Symbol),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Pow(Box<Expr>, i64),
    /// `e^{k·ε}` for the group parameter ε.
    ParamExp(Rational),
    Apply(Arc<FuncApp>),
}

/// Coefficients of an expression indexed by exponent vectors over `vars`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialMap {
    pub vars: Vec<Symbol>,
    pub terms: BTreeMap<Vec<i32>, Expr>,
}

impl MonomialMap {
    pub fn reassemble(&self) -> Result<Expr> {
        let mut acc = Poly::zero();
        for (exps, coeff) in &self.terms {
            let mut term = coeff.to_poly()?;
            for (v, e) in self.vars.iter().zip(exps) {
                term = &term * &Poly::symbol(v).pow(*e as i64)?;
            }
            acc = &acc + &term;
        }
        Ok(acc.to_expr())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

impl Expr {
    pub fn int(n: i64) -> Expr {
        Expr::Const(Rational::from_integer(n.into()))
    }

    pub fn rational(q: Rational) -> Expr {
        Expr::Const(q)
    }

    pub fn zero() -> Expr {
        Expr::int(0)
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn sym(s: &Symbol) -> Expr {
        Expr::Sym(s.clone())
    }

    pub fn func(name: &str, args: Vec<Expr>) -> Expr {
        Expr::Apply(Arc::new(FuncApp::new(name, args)))
    }

    pub fn param_exp(k: Rational) -> Expr {
        Expr::ParamExp(k)
    }

    pub fn pow(self, n: i64) -> Expr {
        Expr::Pow(Box::new(self), n)
    }

    /// True only for the literal constant zero; normalize first to decide
    /// semantic zero.
    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Const(q) if q.is_zero())
    }

    pub fn as_constant(&self) -> Option<&Rational> {
        match self {
            Expr::Const(q) => Some(q),
            _ => None,
        }
    }

    pub fn to_poly(&self) -> Result<Poly> {
        Ok(match self {
            Expr::Const(q) => Poly::constant(q.clone()),
            Expr::Sym(s) => Poly::symbol(s),
            Expr::Sum(ops) => {
                let mut acc = Poly::zero();
                for op in ops {
                    acc = &acc + &op.to_poly()?;
                }
                acc
            }
            Expr::Product(ops) => {
                let mut acc = Poly::one();
                for op in ops {
                    acc = &acc * &op.to_poly()?;
                    if acc.is_zero() {
                        // still validate the remaining factors for division by zero
                        for rest in ops {
                            rest.to_poly()?;
                        }
                        break;
                    }
                }
                acc
            }
            Expr::Pow(base, n) => base.to_poly()?.pow(*n)?,
            Expr::ParamExp(k) => {
                if k.is_zero() {
                    Poly::one()
                } else {
                    Poly::param_exp(k.clone())
                }
            }
            Expr::Apply(f) => {
                let args = f
                    .args
                    .iter()
                    .map(|a| a.normalize())
                    .collect::<Result<Vec<_>>>()?;
                Poly::atom(Atom::Func(Arc::new(FuncApp {
                    name: f.name.clone(),
                    derivs: f.derivs.clone(),
                    args,
                })))
            }
        })
    }

    pub fn normalize(&self) -> Result<Expr> {
        Ok(self.to_poly()?.to_expr())
    }

    pub fn diff(&self, s: &Symbol) -> Result<Expr> {
        Ok(self.to_poly()?.diff(s)?.to_expr())
    }

    /// Simultaneous substitution followed by normalization.
    pub fn substitute(&self, rules: &BTreeMap<Symbol, Expr>) -> Result<Expr> {
        let rules = rules
            .iter()
            .map(|(k, v)| Ok((k.clone(), v.to_poly()?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(self.to_poly()?.substitute(&rules)?.to_expr())
    }

    pub fn collect(&self, vars: &[Symbol]) -> Result<MonomialMap> {
        let split = self.to_poly()?.collect(vars)?;
        Ok(MonomialMap {
            vars: vars.to_vec(),
            terms: split.into_iter().map(|(k, p)| (k, p.to_expr())).collect(),
        })
    }

    pub fn contains_symbol(&self, s: &Symbol) -> bool {
        match self {
            Expr::Const(_) | Expr::ParamExp(_) => false,
            Expr::Sym(t) => t == s,
            Expr::Sum(ops) | Expr::Product(ops) => ops.iter().any(|o| o.contains_symbol(s)),
            Expr::Pow(b, _) => b.contains_symbol(s),
            Expr::Apply(f) => f.args.iter().any(|a| a.contains_symbol(s)),
        }
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            Expr::Const(_) | Expr::ParamExp(_) => {}
            Expr::Sym(s) => {
                out.insert(s.clone());
            }
            Expr::Sum(ops) | Expr::Product(ops) => ops.iter().for_each(|o| o.collect_symbols(out)),
            Expr::Pow(b, _) => b.collect_symbols(out),
            Expr::Apply(f) => f.args.iter().for_each(|a| a.collect_symbols(out)),
        }
    }

    /// Function names applied anywhere in the tree.
    pub fn functions(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_functions(&mut out);
        out
    }

    fn collect_functions(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Const(_) | Expr::ParamExp(_) | Expr::Sym(_) => {}
            Expr::Sum(ops) | Expr::Product(ops) => {
                ops.iter().for_each(|o| o.collect_functions(out))
            }
            Expr::Pow(b, _) => b.collect_functions(out),
            Expr::Apply(f) => {
                out.insert(f.name.clone());
                f.args.iter().for_each(|a| a.collect_functions(out));
            }
        }
    }

    /// Whether the tree is written with a leading minus sign.
    pub(crate) fn is_negative_form(&self) -> bool {
        match self {
            Expr::Const(q) => q < &Rational::zero(),
            Expr::Product(ops) => ops.first().is_some_and(|o| o.is_negative_form()),
            _ => false,
        }
    }

    /// The tree with its leading sign flipped (used by the printer).
    pub(crate) fn negated_form(&self) -> Expr {
        match self {
            Expr::Const(q) => Expr::Const(-q),
            Expr::Product(ops) => {
                let mut ops = ops.clone();
                if let Some(Expr::Const(q)) = ops.first() {
                    let q = -q;
                    if q.is_one() {
                        ops.remove(0);
                    } else {
                        ops[0] = Expr::Const(q);
                    }
                } else {
                    ops.insert(0, Expr::int(-1));
                }
                if ops.len() == 1 {
                    ops.pop().unwrap()
                } else {
                    Expr::Product(ops)
                }
            }
            other => Expr::Product(vec![Expr::int(-1), other.clone()]),
        }
    }
}

impl From<Symbol> for Expr {
    fn from(s: Symbol) -> Self {
        Expr::Sym(s)
    }
}

impl From<&Symbol> for Expr {
    fn from(s: &Symbol) -> Self {
        Expr::Sym(s.clone())
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::int(n)
    }
}

impl From<Rational> for Expr {
    fn from(q: Rational) -> Self {
        Expr::Const(q)
    }
}

fn join(
    kind: fn(Vec<Expr>) -> Expr,
    unwrap: fn(&Expr) -> Option<&Vec<Expr>>,
    a: Expr,
    b: Expr,
) -> Expr {
    let mut ops = Vec::new();
    for e in [a, b] {
        match unwrap(&e) {
            Some(inner) => ops.extend(inner.iter().cloned()),
            None => ops.push(e),
        }
    }
    kind(ops)
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        join(
            Expr::Sum,
            |e| match e {
                Expr::Sum(v) => Some(v),
                _ => None,
            },
            self,
            rhs,
        )
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        join(
            Expr::Product,
            |e| match e {
                Expr::Product(v) => Some(v),
                _ => None,
            },
            self,
            rhs,
        )
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::int(-1) * self
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        self + (-rhs)
    }
}

impl Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        self * rhs.pow(-1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::rational::int;

    fn s(n: &str) -> Expr {
        Expr::sym(&Symbol::independent(n))
    }

    #[test]
    fn like_terms_collect() {
        assert_eq!(
            (s("x") + s("x")).normalize().unwrap(),
            Expr::int(2) * s("x")
        );
    }

    #[test]
    fn difference_of_squares() {
        let u = || Expr::sym(&Symbol::dependent("u"));
        let v = || Expr::sym(&Symbol::dependent("v"));
        let lhs = ((u() + v()) * (u() - v())).normalize().unwrap();
        let rhs = (u() * u() - v() * v()).normalize().unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(
            lhs,
            Expr::Sum(vec![
                u().pow(2),
                Expr::Product(vec![Expr::int(-1), v().pow(2)])
            ])
        );
    }

    #[test]
    fn param_exp_cancels() {
        let e = Expr::param_exp(int(1)) * Expr::param_exp(int(-1));
        assert_eq!(e.normalize().unwrap(), Expr::one());
        assert_eq!(Expr::param_exp(int(0)).normalize().unwrap(), Expr::one());
    }

    #[test]
    fn division_by_zero_is_degenerate() {
        let e = s("x") / (s("y") - s("y"));
        assert_eq!(e.normalize(), Err(Error::DegenerateInput));
    }

    #[test]
    fn collect_and_reassemble() {
        let c1 = Expr::sym(&Symbol::unknown("c1"));
        let c2 = Expr::sym(&Symbol::unknown("c2"));
        let names = ["x".to_string(), "y".to_string()];
        let uy = Symbol::jet("u", &[0, 1], &names);
        let e = (c1.clone() + c2.clone() * s("x")) * Expr::sym(&uy).pow(2);
        let m = e.collect(std::slice::from_ref(&uy)).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m.terms[&vec![2]], (c1 + c2 * s("x")).normalize().unwrap());
        assert_eq!(m.reassemble().unwrap(), e.normalize().unwrap());
        assert!(Expr::zero().collect(&[uy]).unwrap().is_empty());
    }

    #[test]
    fn function_derivatives() {
        let x = Symbol::independent("x");
        let f = Expr::func("f", vec![Expr::sym(&x), s("y")]);
        let d = f.diff(&x).unwrap();
        match d {
            Expr::Apply(app) => assert_eq!(app.derivs, vec![1, 0]),
            other => panic!("unexpected {other:?}"),
        }
        let g = Expr::func("f", vec![Expr::sym(&x) * s("y")]);
        assert!(matches!(g.diff(&x), Err(Error::UnsupportedComposition(_))));
    }

    #[test]
    fn substitution_is_simultaneous() {
        let x = Symbol::independent("x");
        let y = Symbol::independent("y");
        let rules = BTreeMap::from([(x.clone(), Expr::sym(&y)), (y.clone(), Expr::sym(&x))]);
        let e = (Expr::sym(&x) - Expr::int(2) * Expr::sym(&y))
            .substitute(&rules)
            .unwrap();
        assert_eq!(
            e,
            (Expr::sym(&y) - Expr::int(2) * Expr::sym(&x))
                .normalize()
                .unwrap()
        );
    }
}
