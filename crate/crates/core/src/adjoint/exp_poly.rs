use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{exact_root, factorial, format_rational, pow_i, Rational};
use crate::symbolic::{Expr, Monomial, Poly, Symbol};

/// The group parameter ε.
pub fn eps_symbol() -> Symbol {
    Symbol::group_parameter("eps")
}

/// A point at which to evaluate ε.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParamValue {
    /// ε itself; only `e^{0·ε}` weights evaluate exactly.
    Eps(Rational),
    /// `e^ε = t` (so ε = ln t); only `ε⁰` terms evaluate exactly.
    ExpOf(Rational),
}

/// Finite sum `Σ c·ε^m·e^{kε}` keyed by `(m, k)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExpPoly {
    terms: BTreeMap<(u32, Rational), Rational>,
}

impl ExpPoly {
    pub fn zero() -> Self {
        ExpPoly::default()
    }

    pub fn one() -> Self {
        ExpPoly::constant(<Rational as One>::one())
    }

    pub fn constant(c: Rational) -> Self {
        ExpPoly::term(c, 0, <Rational as Zero>::zero())
    }

    /// `c·ε^m·e^{kε}`.
    pub fn term(c: Rational, m: u32, k: Rational) -> Self {
        let mut p = ExpPoly::zero();
        p.add_term(m, k, c);
        p
    }

    pub fn eps() -> Self {
        ExpPoly::term(<Rational as One>::one(), 1, <Rational as Zero>::zero())
    }

    pub fn exp(k: Rational) -> Self {
        ExpPoly::term(<Rational as One>::one(), 0, k)
    }

    fn add_term(&mut self, m: u32, k: Rational, c: Rational) {
        if c.is_zero() {
            return;
        }
        let key = (m, k);
        let entry = self
            .terms
            .entry(key.clone())
            .or_insert_with(<Rational as Zero>::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &Rational, &Rational)> {
        self.terms.iter().map(|((m, k), c)| (*m, k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(<Rational as Zero>::zero()),
            1 => {
                let ((m, k), c) = self.terms.iter().next().unwrap();
                (*m == 0 && k.is_zero()).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn scale(&self, q: &Rational) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for ((m, k), c) in &self.terms {
            out.add_term(*m, k.clone(), c * q);
        }
        out
    }

    /// Value at ε = 0.
    pub fn at_zero(&self) -> Rational {
        self.terms
            .iter()
            .filter(|((m, _), _)| *m == 0)
            .map(|(_, c)| c.clone())
            .sum()
    }

    /// d/dε.
    pub fn derivative(&self) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for ((m, k), c) in &self.terms {
            if *m > 0 {
                out.add_term(m - 1, k.clone(), c * Rational::from_integer((*m).into()));
            }
            if !k.is_zero() {
                out.add_term(*m, k.clone(), c * k);
            }
        }
        out
    }

    /// `∫₀^ε f(s) ds`.
    pub fn integrate_from_zero(&self) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for ((m, k), c) in &self.terms {
            out = &out + &integral_term(*m, k).scale(c);
        }
        out
    }

    /// `f(c·ε)`.
    pub fn scaled(&self, c: &Rational) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for ((m, k), coeff) in &self.terms {
            out.add_term(*m, k * c, coeff * pow_i(c, *m as i64));
        }
        out
    }

    pub fn eval(&self, at: &ParamValue) -> Result<Rational> {
        let mut acc = <Rational as Zero>::zero();
        for ((m, k), c) in &self.terms {
            let v = match at {
                ParamValue::Eps(e) => {
                    if !k.is_zero() && !e.is_zero() {
                        return Err(Error::IrrationalValue(format!(
                            "{self} at eps = {}",
                            format_rational(e)
                        )));
                    }
                    pow_i(e, *m as i64)
                }
                ParamValue::ExpOf(t) => {
                    if *m > 0 {
                        if t.is_one() {
                            <Rational as Zero>::zero()
                        } else {
                            return Err(Error::IrrationalValue(format!(
                                "{self} at exp(eps) = {}",
                                format_rational(t)
                            )));
                        }
                    } else {
                        rational_power(t, k).ok_or_else(|| {
                            Error::IrrationalValue(format!(
                                "{}^{}",
                                format_rational(t),
                                format_rational(k)
                            ))
                        })?
                    }
                }
            };
            acc += c * v;
        }
        Ok(acc)
    }

    pub fn to_poly(&self) -> Poly {
        let eps = eps_symbol();
        let mut out = Poly::zero();
        for ((m, k), c) in &self.terms {
            let mono = Monomial::atom(crate::symbolic::Atom::Sym(eps.clone()), *m as i32)
                .mul(&Monomial::param_exp(k.clone()));
            out.add_term(mono, c.clone());
        }
        out
    }

    pub fn to_expr(&self) -> Expr {
        self.to_poly().to_expr()
    }
}

/// `t^k` for rational `k`, when exact.
pub fn rational_power(t: &Rational, k: &Rational) -> Option<Rational> {
    if t <= &<Rational as Zero>::zero() {
        return None;
    }
    let den: u32 = k.denom().try_into().ok()?;
    let num: i64 = k.numer().try_into().ok()?;
    let root = exact_root(t, den)?;
    Some(pow_i(&root, num))
}

fn integral_term(m: u32, k: &Rational) -> ExpPoly {
    if k.is_zero() {
        return ExpPoly::term(
            Rational::new(1.into(), (m + 1).into()),
            m + 1,
            <Rational as Zero>::zero(),
        );
    }
    // ∫₀^ε s^m e^{ks} ds = Σ_{j=0}^{m} (-1)^{m-j} m!/j! ε^j e^{kε} / k^{m-j+1}  −  (-1)^m m!/k^{m+1}
    let mf = Rational::from_integer(factorial(m));
    let mut out = ExpPoly::zero();
    for j in 0..=m {
        let sign = if (m - j).is_multiple_of(2) {
            <Rational as One>::one()
        } else {
            -<Rational as One>::one()
        };
        let c = sign * &mf / Rational::from_integer(factorial(j)) / pow_i(k, (m - j + 1) as i64);
        out.add_term(j, k.clone(), c);
    }
    let sign = if m.is_multiple_of(2) {
        <Rational as One>::one()
    } else {
        -<Rational as One>::one()
    };
    out.add_term(
        0,
        <Rational as Zero>::zero(),
        -(sign * mf / pow_i(k, (m + 1) as i64)),
    );
    out
}

impl fmt::Display for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}

impl Add<&ExpPoly> for &ExpPoly {
    type Output = ExpPoly;
    fn add(self, rhs: &ExpPoly) -> ExpPoly {
        let mut out = self.clone();
        for ((m, k), c) in &rhs.terms {
            out.add_term(*m, k.clone(), c.clone());
        }
        out
    }
}

impl Sub<&ExpPoly> for &ExpPoly {
    type Output = ExpPoly;
    fn sub(self, rhs: &ExpPoly) -> ExpPoly {
        self + &(-rhs)
    }
}

impl Neg for &ExpPoly {
    type Output = ExpPoly;
    fn neg(self) -> ExpPoly {
        self.scale(&-<Rational as One>::one())
    }
}

impl Mul<&ExpPoly> for &ExpPoly {
    type Output = ExpPoly;
    fn mul(self, rhs: &ExpPoly) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for ((ma, ka), ca) in &self.terms {
            for ((mb, kb), cb) in &rhs.terms {
                out.add_term(ma + mb, ka + kb, ca * cb);
            }
        }
        out
    }
}

/// Finite sum `Σ c·ε^a·δ^b·e^{kε+lδ}` for checking group laws in two
/// independent parameters.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExpPoly2 {
    terms: BTreeMap<(u32, u32, Rational, Rational), Rational>,
}

impl ExpPoly2 {
    fn add_term(&mut self, key: (u32, u32, Rational, Rational), c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry(key.clone())
            .or_insert_with(<Rational as Zero>::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `f(ε)` as a function of (ε, δ).
    pub fn in_eps(f: &ExpPoly) -> Self {
        let mut out = ExpPoly2::default();
        for (m, k, c) in f.terms() {
            out.add_term((m, 0, k.clone(), <Rational as Zero>::zero()), c.clone());
        }
        out
    }

    /// `f(δ)` as a function of (ε, δ).
    pub fn in_delta(f: &ExpPoly) -> Self {
        let mut out = ExpPoly2::default();
        for (m, k, c) in f.terms() {
            out.add_term((0, m, <Rational as Zero>::zero(), k.clone()), c.clone());
        }
        out
    }

    /// `f(ε + δ)`, expanding `(ε+δ)^m` binomially.
    pub fn in_sum(f: &ExpPoly) -> Self {
        let mut out = ExpPoly2::default();
        for (m, k, c) in f.terms() {
            for j in 0..=m {
                let b = Rational::from_integer(crate::rational::binomial(m, j));
                out.add_term((j, m - j, k.clone(), k.clone()), c * b);
            }
        }
        out
    }
}

impl Add<&ExpPoly2> for &ExpPoly2 {
    type Output = ExpPoly2;
    fn add(self, rhs: &ExpPoly2) -> ExpPoly2 {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }
}

impl Sub<&ExpPoly2> for &ExpPoly2 {
    type Output = ExpPoly2;
    fn sub(self, rhs: &ExpPoly2) -> ExpPoly2 {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), -c);
        }
        out
    }
}

impl Mul<&ExpPoly2> for &ExpPoly2 {
    type Output = ExpPoly2;
    fn mul(self, rhs: &ExpPoly2) -> ExpPoly2 {
        let mut out = ExpPoly2::default();
        for ((a1, b1, k1, l1), c1) in &self.terms {
            for ((a2, b2, k2, l2), c2) in &rhs.terms {
                out.add_term((a1 + a2, b1 + b2, k1 + k2, l1 + l2), c1 * c2);
            }
        }
        out
    }
}

/// Minimal ring interface shared by the coefficient types of affine maps.
pub trait Ring: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
}

impl Ring for ExpPoly {
    fn zero() -> Self {
        ExpPoly::zero()
    }
    fn one() -> Self {
        ExpPoly::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
}

impl Ring for ExpPoly2 {
    fn zero() -> Self {
        ExpPoly2::default()
    }
    fn one() -> Self {
        let mut out = ExpPoly2::default();
        out.add_term(
            (0, 0, <Rational as Zero>::zero(), <Rational as Zero>::zero()),
            <Rational as One>::one(),
        );
        out
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
}

impl Ring for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn integral_differentiates_back() {
        let f = &(&ExpPoly::term(int(3), 2, int(-4)) + &ExpPoly::eps()) + &ExpPoly::exp(rat(1, 2));
        let g = f.integrate_from_zero();
        assert_eq!(g.derivative(), f);
        assert_eq!(g.at_zero(), int(0));
    }

    #[test]
    fn evaluation() {
        let f = &ExpPoly::exp(int(2)) + &ExpPoly::exp(rat(1, 2));
        assert_eq!(f.eval(&ParamValue::ExpOf(int(4))).unwrap(), int(18));
        assert!(f.eval(&ParamValue::Eps(int(1))).is_err());
        assert_eq!(
            ExpPoly::eps()
                .scale(&int(-2))
                .eval(&ParamValue::Eps(rat(1, 3)))
                .unwrap(),
            rat(-2, 3)
        );
    }

    #[test]
    fn shift_is_multiplicative() {
        let f = ExpPoly::exp(int(1));
        let lhs = ExpPoly2::in_sum(&f);
        let rhs = &ExpPoly2::in_eps(&f) * &ExpPoly2::in_delta(&f);
        assert_eq!(lhs, rhs);
    }
}
