//! Canonical sparse Laurent polynomials over atoms, with an `e^{kε}` weight
//! per monomial. This is the arithmetic workhorse behind [`Expr`].

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::expr::Expr;
use super::symbol::{Role, Symbol};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// A (possibly formally differentiated) function application `f(args)`.
///
/// `derivs[j]` counts derivatives taken with respect to argument `j`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FuncApp {
    pub name: String,
    pub derivs: Vec<u32>,
    pub args: Vec<Expr>,
}

impl FuncApp {
    pub fn new(name: &str, args: Vec<Expr>) -> Self {
        FuncApp {
            name: name.to_string(),
            derivs: vec![0; args.len()],
            args,
        }
    }

    fn contains_symbol(&self, s: &Symbol) -> bool {
        self.args.iter().any(|a| a.contains_symbol(s))
    }
}

/// Indivisible factor of a monomial.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Sym(Symbol),
    Func(Arc<FuncApp>),
}

impl Atom {
    pub fn as_symbol(&self) -> Option<&Symbol> {
        match self {
            Atom::Sym(s) => Some(s),
            Atom::Func(_) => None,
        }
    }

    fn contains_symbol(&self, s: &Symbol) -> bool {
        match self {
            Atom::Sym(t) => t == s,
            Atom::Func(f) => f.contains_symbol(s),
        }
    }
}

/// `Π atom^e · e^{kε}` with factors sorted by atom and no zero exponents.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    factors: Vec<(Atom, i32)>,
    exp: Rational,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial {
            factors: Vec::new(),
            exp: Rational::zero(),
        }
    }

    pub fn atom(a: Atom, e: i32) -> Self {
        let factors = if e == 0 { Vec::new() } else { vec![(a, e)] };
        Monomial {
            factors,
            exp: Rational::zero(),
        }
    }

    pub fn param_exp(k: Rational) -> Self {
        Monomial {
            factors: Vec::new(),
            exp: k,
        }
    }

    pub fn factors(&self) -> &[(Atom, i32)] {
        &self.factors
    }

    /// `k` in the `e^{kε}` factor.
    pub fn exp(&self) -> &Rational {
        &self.exp
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty() && self.exp.is_zero()
    }

    pub fn degree_of(&self, a: &Atom) -> i32 {
        self.factors
            .binary_search_by(|(b, _)| b.cmp(a))
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> i64 {
        self.factors.iter().map(|(_, e)| *e as i64).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut factors = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() && j < other.factors.len() {
            let (a, ea) = &self.factors[i];
            let (b, eb) = &other.factors[j];
            match a.cmp(b) {
                Ordering::Less => {
                    factors.push((a.clone(), *ea));
                    i += 1;
                }
                Ordering::Greater => {
                    factors.push((b.clone(), *eb));
                    j += 1;
                }
                Ordering::Equal => {
                    let e = ea + eb;
                    if e != 0 {
                        factors.push((a.clone(), e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        factors.extend(self.factors[i..].iter().cloned());
        factors.extend(other.factors[j..].iter().cloned());
        Monomial {
            factors,
            exp: &self.exp + &other.exp,
        }
    }

    pub fn pow(&self, e: i32) -> Monomial {
        if e == 0 {
            return Monomial::one();
        }
        Monomial {
            factors: self
                .factors
                .iter()
                .map(|(a, k)| (a.clone(), k * e))
                .collect(),
            exp: &self.exp * Rational::from_integer(e.into()),
        }
    }

    pub fn inverse(&self) -> Monomial {
        self.pow(-1)
    }

    /// The monomial with the factor `a` removed.
    pub fn without(&self, a: &Atom) -> Monomial {
        Monomial {
            factors: self
                .factors
                .iter()
                .filter(|(b, _)| b != a)
                .cloned()
                .collect(),
            exp: self.exp.clone(),
        }
    }

    /// Graded lexicographic order (atom order decides significance).
    fn graded_cmp(&self, other: &Monomial) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.lex_cmp(other))
    }

    fn lex_cmp(&self, other: &Monomial) -> Ordering {
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.factors.get(i), other.factors.get(j)) {
                (None, None) => return self.exp.cmp(&other.exp),
                (Some((_, ea)), None) => return ea.cmp(&0),
                (None, Some((_, eb))) => return 0.cmp(eb),
                (Some((a, ea)), Some((b, eb))) => match a.cmp(b) {
                    Ordering::Less => return ea.cmp(&0),
                    Ordering::Greater => return 0.cmp(eb),
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(eb);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.exp == other.exp && self.factors.iter().all(|(a, e)| other.degree_of(a) >= *e)
    }
}

/// Canonical polynomial: a map from monomials to non-zero rational
/// coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(q: Rational) -> Self {
        Poly::term(Monomial::one(), q)
    }

    pub fn int(n: i64) -> Self {
        Poly::constant(Rational::from_integer(n.into()))
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut p = Poly::zero();
        p.add_term(m, c);
        p
    }

    pub fn symbol(s: &Symbol) -> Self {
        Poly::term(Monomial::atom(Atom::Sym(s.clone()), 1), Rational::one())
    }

    pub fn atom(a: Atom) -> Self {
        Poly::term(Monomial::atom(a, 1), Rational::one())
    }

    pub fn param_exp(k: Rational) -> Self {
        Poly::term(Monomial::param_exp(k), Rational::one())
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn single_term(&self) -> Option<(&Monomial, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn scale(&self, q: &Rational) -> Poly {
        if q.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut out = Poly::zero();
        for (tm, tc) in &self.terms {
            out.add_term(tm.mul(m), tc * c);
        }
        out
    }

    pub fn pow(&self, e: i64) -> Result<Poly> {
        if e >= 0 {
            let mut acc = Poly::one();
            let mut base = self.clone();
            let mut n = e as u64;
            while n > 0 {
                if n & 1 == 1 {
                    acc = &acc * &base;
                }
                n >>= 1;
                if n > 0 {
                    base = &base * &base;
                }
            }
            return Ok(acc);
        }
        let inv = self.inverse()?;
        inv.pow(-e)
    }

    /// Multiplicative inverse; only monomials are invertible.
    pub fn inverse(&self) -> Result<Poly> {
        if self.is_zero() {
            return Err(Error::DegenerateInput);
        }
        match self.single_term() {
            Some((m, c)) => Ok(Poly::term(m.inverse(), c.recip())),
            None => Err(Error::NonMonomialDivision(self.to_expr().to_string())),
        }
    }

    /// Top-level atoms.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        self.terms
            .keys()
            .flat_map(|m| m.factors.iter().map(|(a, _)| a.clone()))
            .collect()
    }

    /// Every symbol, including those inside function arguments.
    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        for a in self.atoms() {
            match a {
                Atom::Sym(s) => {
                    out.insert(s);
                }
                Atom::Func(f) => {
                    for arg in &f.args {
                        out.extend(arg.symbols());
                    }
                }
            }
        }
        out
    }

    pub fn contains_symbol(&self, s: &Symbol) -> bool {
        self.terms
            .keys()
            .any(|m| m.factors.iter().any(|(a, _)| a.contains_symbol(s)))
    }

    pub fn has_param_exp(&self) -> bool {
        self.terms.keys().any(|m| !m.exp.is_zero())
    }

    /// Exact partial derivative; every other symbol is a constant.
    pub fn diff(&self, s: &Symbol) -> Result<Poly> {
        let is_group_param = s.role() == Role::GroupParameter;
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if is_group_param && !m.exp.is_zero() {
                out.add_term(m.clone(), c * &m.exp);
            }
            for (idx, (a, e)) in m.factors.iter().enumerate() {
                let inner = match a {
                    Atom::Sym(t) if t == s => Poly::one(),
                    Atom::Sym(_) => continue,
                    Atom::Func(f) => {
                        let d = diff_func(f, s)?;
                        if d.is_zero() {
                            continue;
                        }
                        d
                    }
                };
                let mut rest = m.clone();
                if *e == 1 {
                    rest.factors.remove(idx);
                } else {
                    rest.factors[idx].1 -= 1;
                }
                let coeff = c * Rational::from_integer((*e).into());
                out = &out + &inner.mul_term(&rest, &coeff);
            }
        }
        Ok(out)
    }

    /// Simultaneous substitution of symbols (also inside function arguments).
    pub fn substitute(&self, rules: &BTreeMap<Symbol, Poly>) -> Result<Poly> {
        if rules.is_empty() {
            return Ok(self.clone());
        }
        let mut cache: BTreeMap<Atom, Option<Poly>> = BTreeMap::new();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut kept = Monomial::param_exp(m.exp.clone());
            let mut replaced = Poly::one();
            let mut touched = false;
            for (a, e) in &m.factors {
                let image = match cache.get(a) {
                    Some(img) => img.clone(),
                    None => {
                        let img = substitute_atom(a, rules)?;
                        cache.insert(a.clone(), img.clone());
                        img
                    }
                };
                match image {
                    None => kept = kept.mul(&Monomial::atom(a.clone(), *e)),
                    Some(p) => {
                        touched = true;
                        replaced = &replaced * &p.pow(*e as i64)?;
                    }
                }
            }
            if touched {
                out = &out + &replaced.mul_term(&kept, c);
            } else {
                out.add_term(kept, c.clone());
            }
        }
        Ok(out)
    }

    /// Splits by exponent vectors over `vars`; coefficients are free of `vars`.
    pub fn collect(&self, vars: &[Symbol]) -> Result<BTreeMap<Vec<i32>, Poly>> {
        let atoms: Vec<Atom> = vars.iter().map(|s| Atom::Sym(s.clone())).collect();
        let mut out: BTreeMap<Vec<i32>, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut key = vec![0; vars.len()];
            let mut rest = Monomial::param_exp(m.exp.clone());
            for (a, e) in &m.factors {
                if let Some(pos) = atoms.iter().position(|b| b == a) {
                    if *e < 0 {
                        return Err(Error::NonPolynomial(vars[pos].to_string()));
                    }
                    key[pos] = *e;
                } else {
                    if let Atom::Func(f) = a {
                        if let Some(v) = vars.iter().find(|v| f.contains_symbol(v)) {
                            return Err(Error::NonPolynomial(v.to_string()));
                        }
                    }
                    rest.factors.push((a.clone(), *e));
                }
            }
            out.entry(key).or_default().add_term(rest, c.clone());
        }
        out.retain(|_, p| !p.is_zero());
        Ok(out)
    }

    /// Positive gcd of numerators over lcm of denominators.
    pub fn rational_content(&self) -> Rational {
        let mut num = num_bigint::BigInt::zero();
        let mut den = num_bigint::BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            Rational::one()
        } else {
            Rational::new(num, den)
        }
    }

    /// Leading coefficient under the graded order.
    pub fn leading_coefficient(&self) -> Option<&Rational> {
        self.terms
            .iter()
            .max_by(|a, b| a.0.graded_cmp(b.0))
            .map(|(_, c)| c)
    }

    /// Monomial with the componentwise minimum exponent of every atom.
    pub fn lowest_monomial(&self) -> Monomial {
        let mut mins: BTreeMap<Atom, i32> = BTreeMap::new();
        let n = self.terms.len();
        let mut counts: BTreeMap<Atom, usize> = BTreeMap::new();
        for m in self.terms.keys() {
            for (a, e) in &m.factors {
                let entry = mins.entry(a.clone()).or_insert(*e);
                *entry = (*entry).min(*e);
                *counts.entry(a.clone()).or_default() += 1;
            }
        }
        let factors = mins
            .into_iter()
            .map(|(a, e)| {
                // atoms missing from some term contribute exponent 0 there
                let e = if counts[&a] < n { e.min(0) } else { e };
                (a, e)
            })
            .filter(|(_, e)| *e != 0)
            .collect();
        Monomial {
            factors,
            exp: Rational::zero(),
        }
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if let Some((m, c)) = d.single_term() {
            return Some(self.mul_term(&m.inverse(), &c.recip()));
        }
        if self.has_param_exp() || d.has_param_exp() {
            return None;
        }
        let low_p = self.lowest_monomial();
        let low_d = d.lowest_monomial();
        let p = self.mul_term(&low_p.inverse(), &Rational::one());
        let dd = d.mul_term(&low_d.inverse(), &Rational::one());
        let (ld_m, ld_c) = dd
            .terms
            .iter()
            .max_by(|a, b| a.0.graded_cmp(b.0))
            .map(|(m, c)| (m.clone(), c.clone()))?;
        let mut r = p;
        let mut q = Poly::zero();
        while !r.is_zero() {
            let (lm, lc) = r
                .terms
                .iter()
                .max_by(|a, b| a.0.graded_cmp(b.0))
                .map(|(m, c)| (m.clone(), c.clone()))
                .unwrap();
            if !ld_m.divides(&lm) {
                return None;
            }
            let t = lm.mul(&ld_m.inverse());
            let c = &lc / &ld_c;
            q.add_term(t.clone(), c.clone());
            r = &r - &dd.mul_term(&t, &c);
        }
        Some(q.mul_term(&low_p.mul(&low_d.inverse()), &Rational::one()))
    }

    /// Replaces ε by `scale·ε` in both `ε^m` powers and `e^{kε}` weights.
    pub fn rescale_group_parameter(&self, eps: &Symbol, scale: &Rational) -> Result<Poly> {
        let mut out = Poly::zero();
        let eps_atom = Atom::Sym(eps.clone());
        for (m, c) in &self.terms {
            let mut factors = Vec::with_capacity(m.factors.len());
            let mut coeff = c.clone();
            for (a, e) in &m.factors {
                match a {
                    Atom::Func(f) => {
                        let args = f
                            .args
                            .iter()
                            .map(|x| {
                                x.to_poly()?
                                    .rescale_group_parameter(eps, scale)
                                    .map(|p| p.to_expr())
                            })
                            .collect::<Result<Vec<_>>>()?;
                        factors.push((
                            Atom::Func(Arc::new(FuncApp {
                                name: f.name.clone(),
                                derivs: f.derivs.clone(),
                                args,
                            })),
                            *e,
                        ));
                    }
                    _ => {
                        if *a == eps_atom {
                            coeff *= crate::rational::pow_i(scale, *e as i64);
                        }
                        factors.push((a.clone(), *e));
                    }
                }
            }
            let mut mono = Monomial {
                factors: Vec::new(),
                exp: &m.exp * scale,
            };
            for (a, e) in factors {
                mono = mono.mul(&Monomial::atom(a, e));
            }
            out.add_term(mono, coeff);
        }
        Ok(out)
    }

    /// Canonical expression tree.
    pub fn to_expr(&self) -> Expr {
        if self.terms.is_empty() {
            return Expr::Const(Rational::zero());
        }
        // operands follow the monomial order of the map
        let mut summands: Vec<Expr> = self.terms.iter().map(|(m, c)| term_expr(m, c)).collect();
        if summands.len() == 1 {
            return summands.pop().unwrap();
        }
        Expr::Sum(summands)
    }
}

fn term_expr(m: &Monomial, c: &Rational) -> Expr {
    let mut factors: Vec<Expr> = Vec::with_capacity(m.factors.len() + 2);
    for (a, e) in &m.factors {
        let base = match a {
            Atom::Sym(s) => Expr::Sym(s.clone()),
            Atom::Func(f) => Expr::Apply(f.clone()),
        };
        factors.push(if *e == 1 {
            base
        } else {
            Expr::Pow(Box::new(base), *e as i64)
        });
    }
    if !m.exp.is_zero() {
        factors.push(Expr::ParamExp(m.exp.clone()));
    }
    if !c.is_one() || factors.is_empty() {
        factors.insert(0, Expr::Const(c.clone()));
    }
    if factors.len() == 1 {
        factors.pop().unwrap()
    } else {
        Expr::Product(factors)
    }
}

fn diff_func(f: &FuncApp, s: &Symbol) -> Result<Poly> {
    let mut out = Poly::zero();
    for (j, arg) in f.args.iter().enumerate() {
        if !arg.contains_symbol(s) {
            continue;
        }
        match arg {
            Expr::Sym(t) if t == s => {
                let mut g = f.clone();
                g.derivs[j] += 1;
                out = &out + &Poly::atom(Atom::Func(Arc::new(g)));
            }
            _ => {
                return Err(Error::UnsupportedComposition(
                    Expr::Apply(Arc::new(f.clone())).to_string(),
                ))
            }
        }
    }
    Ok(out)
}

fn substitute_atom(a: &Atom, rules: &BTreeMap<Symbol, Poly>) -> Result<Option<Poly>> {
    match a {
        Atom::Sym(s) => Ok(rules.get(s).cloned()),
        Atom::Func(f) => {
            let expr_rules: Option<bool> = Some(
                f.args
                    .iter()
                    .any(|arg| arg.symbols().iter().any(|s| rules.contains_key(s))),
            );
            if expr_rules != Some(true) {
                return Ok(None);
            }
            let args = f
                .args
                .iter()
                .map(|arg| Ok(arg.to_poly()?.substitute(rules)?.to_expr()))
                .collect::<Result<Vec<_>>>()?;
            Ok(Some(Poly::atom(Atom::Func(Arc::new(FuncApp {
                name: f.name.clone(),
                derivs: f.derivs.clone(),
                args,
            })))))
        }
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (big, small) = if self.len() >= rhs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl Signed for Poly {
    fn abs(&self) -> Self {
        match self.leading_coefficient() {
            Some(c) if c.is_negative() => -self,
            _ => self.clone(),
        }
    }
    fn abs_sub(&self, other: &Self) -> Self {
        (self - other).abs()
    }
    fn signum(&self) -> Self {
        match self.leading_coefficient() {
            Some(c) if c.is_negative() => Poly::int(-1),
            Some(_) => Poly::one(),
            None => Poly::zero(),
        }
    }
    fn is_positive(&self) -> bool {
        self.leading_coefficient().is_some_and(|c| c.is_positive())
    }
    fn is_negative(&self) -> bool {
        self.leading_coefficient().is_some_and(|c| c.is_negative())
    }
}

impl num_traits::Num for Poly {
    type FromStrRadixErr = ();
    fn from_str_radix(_: &str, _: u32) -> std::result::Result<Self, ()> {
        Err(())
    }
}

impl std::ops::Div for Poly {
    type Output = Poly;
    fn div(self, rhs: Poly) -> Poly {
        self.div_exact(&rhs).expect("inexact polynomial division")
    }
}

impl std::ops::Rem for Poly {
    type Output = Poly;
    fn rem(self, rhs: Poly) -> Poly {
        match self.div_exact(&rhs) {
            Some(_) => Poly::zero(),
            None => self,
        }
    }
}

impl Zero for Poly {
    fn zero() -> Self {
        Poly::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for Poly {
    fn one() -> Self {
        Poly::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn x() -> Poly {
        Poly::symbol(&Symbol::independent("x"))
    }
    fn y() -> Poly {
        Poly::symbol(&Symbol::independent("y"))
    }

    #[test]
    fn exact_division() {
        let p = (&x() + &y()) * (&x() - &y()) * (&x() + &Poly::int(3));
        let q = p.div_exact(&(&x() - &y())).unwrap();
        assert_eq!(q, (&x() + &y()) * (&x() + &Poly::int(3)));
        assert!(p.div_exact(&(&x() + &Poly::int(1))).is_none());
    }

    #[test]
    fn laurent_division() {
        let xi = x().inverse().unwrap();
        let p = &(&x() + &y()) * &xi;
        let d = &(&x() + &y()) * &y().pow(2).unwrap();
        let q = p.div_exact(&d).unwrap();
        assert_eq!(q, (&xi * &y().pow(-2).unwrap()));
    }

    #[test]
    fn inverse_rejects_sums() {
        assert!(matches!(
            (x() + y()).inverse(),
            Err(Error::NonMonomialDivision(_))
        ));
        assert_eq!(Poly::zero().inverse(), Err(Error::DegenerateInput));
        assert_eq!(
            Poly::constant(rat(2, 3)).inverse().unwrap(),
            Poly::constant(rat(3, 2))
        );
    }

    #[test]
    fn param_exp_multiplies_by_adding_weights() {
        let p = Poly::param_exp(int(1)) * Poly::param_exp(int(-1));
        assert_eq!(p, Poly::one());
    }

    #[test]
    fn content() {
        let p = x().scale(&rat(4, 3)) + y().scale(&rat(6, 5));
        assert_eq!(p.rational_content(), rat(2, 15));
    }
}
