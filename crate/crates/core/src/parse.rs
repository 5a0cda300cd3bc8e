//! System-definition files.
//!
//! ```text
//! # comment
//! param rho > 0
//! independent x, y
//! dependent u(x, y), v(x, y)
//! eq d(u, x) + d(v, y) = 0
//! lead d(v, y)
//! option ansatz-degree 1
//! generator v1 = D(x)
//! ```

use std::collections::BTreeSet;
use std::fmt::{self, Write};

use num_bigint::BigInt;
use thiserror::Error;

use crate::jet::{JetSpace, PdeSystem};
use crate::prolong::VectorField;
use crate::rational::Rational;
use crate::symbolic::{Expr, Poly, Role, Symbol};

/// A syntax or semantic error at a 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

fn err<T>(line: usize, col: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        col,
        message: message.into(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Param {
    pub name: String,
    pub positive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    pub lhs: Expr,
    pub rhs: Expr,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Options {
    pub ansatz_degree: Option<u32>,
    pub invariant_order: Option<u32>,
}

/// A named vector field `Σ c_z D(z)`; coefficients in base-coordinate
/// order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorDecl {
    pub label: String,
    pub coeffs: Vec<Expr>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SystemDocument {
    pub params: Vec<Param>,
    pub independents: Vec<String>,
    pub dependents: Vec<String>,
    pub equations: Vec<Equation>,
    pub leads: Vec<Symbol>,
    pub options: Options,
    pub generators: Vec<GeneratorDecl>,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(BigInt),
    Op(char),
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    end_col: usize,
}

fn lex(text: &str, line: usize, col0: usize) -> Result<Lexer, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            toks.push((Tok::Num(s.parse().expect("digits")), col));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            toks.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if "+-*/^(),=>".contains(c) {
            toks.push((Tok::Op(c), col));
            i += 1;
        } else {
            return err(line, col, format!("unexpected character '{c}'"));
        }
    }
    Ok(Lexer {
        toks,
        pos: 0,
        line,
        end_col: col0 + chars.len(),
    })
}

impl Lexer {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(_, c)| *c)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        err(self.line, self.col(), message)
    }

    fn expect_op(&mut self, c: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(Tok::Op(d)) if *d == c => {
                self.next();
                Ok(())
            }
            _ => self.fail(format!("expected '{c}'")),
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.next();
                Ok(s)
            }
            _ => self.fail("expected a name"),
        }
    }

    fn eat_op(&mut self, c: char) -> bool {
        if matches!(self.peek(), Some(Tok::Op(d)) if *d == c) {
            self.next();
            true
        } else {
            false
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            self.fail("unexpected trailing input")
        }
    }
}

/// Names an expression may refer to.
#[derive(Clone, Debug, Default)]
pub struct Scope {
    pub params: Vec<String>,
    pub independents: Vec<String>,
    pub dependents: Vec<String>,
    /// Accept `D(z)` basis fields.
    pub fields: bool,
    /// Accept the group parameter `eps` and `exp(k*eps)`.
    pub eps: bool,
    /// Names usable as function applications `f(x, y)`.
    pub functions: Vec<String>,
}

impl Scope {
    pub fn of(doc: &SystemDocument) -> Scope {
        Scope {
            params: doc.params.iter().map(|p| p.name.clone()).collect(),
            independents: doc.independents.clone(),
            dependents: doc.dependents.clone(),
            ..Scope::default()
        }
    }

    fn declared(&self, name: &str) -> bool {
        self.params
            .iter()
            .chain(&self.independents)
            .chain(&self.dependents)
            .any(|n| n == name)
    }
}

/// Symbol standing for the basis field `∂/∂z` while parsing generators.
fn field_marker(z: &str) -> Symbol {
    Symbol::unknown(&format!("D({z})"))
}

struct ExprParser<'a> {
    lx: Lexer,
    scope: &'a Scope,
}

impl ExprParser<'_> {
    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut terms = vec![self.term()?];
        loop {
            if self.lx.eat_op('+') {
                terms.push(self.term()?);
            } else if self.lx.eat_op('-') {
                terms.push(-self.term()?);
            } else {
                break;
            }
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            Expr::Sum(terms)
        })
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.lx.eat_op('*') {
                acc = acc * self.unary()?;
            } else if self.lx.eat_op('/') {
                acc = acc / self.unary()?;
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.lx.eat_op('-') {
            Ok(-self.unary()?)
        } else if self.lx.eat_op('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if !self.lx.eat_op('^') {
            return Ok(base);
        }
        let neg = self.lx.eat_op('-');
        match self.lx.next() {
            Some(Tok::Num(n)) => {
                let n: i64 = n.try_into().map_err(|_| ParseError {
                    line: self.lx.line,
                    col: self.lx.col(),
                    message: "exponent too large".into(),
                })?;
                Ok(base.pow(if neg { -n } else { n }))
            }
            _ => {
                self.lx.pos -= 1;
                self.lx.fail("expected an integer exponent")
            }
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let col = self.lx.col();
        match self.lx.next() {
            Some(Tok::Num(n)) => Ok(Expr::rational(Rational::from_integer(n))),
            Some(Tok::Op('(')) => {
                let e = self.expr()?;
                self.lx.expect_op(')')?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                if self.lx.peek() == Some(&Tok::Op('('))
                    && (name == "d" || (name == "D" && self.scope.fields))
                {
                    self.lx.next();
                    let r = if name == "d" {
                        self.derivative(col)?
                    } else {
                        self.field_basis(col)?
                    };
                    return Ok(r);
                }
                let s = self.scope;
                if self.lx.peek() == Some(&Tok::Op('(')) && s.eps && name == "exp" {
                    self.lx.next();
                    return self.exponential(col);
                }
                if self.lx.peek() == Some(&Tok::Op('(')) && s.functions.contains(&name) {
                    self.lx.next();
                    let mut args = vec![self.expr()?];
                    while self.lx.eat_op(',') {
                        args.push(self.expr()?);
                    }
                    self.lx.expect_op(')')?;
                    return Ok(Expr::func(&name, args));
                }
                if s.eps && name == "eps" {
                    return Ok(Expr::sym(&crate::adjoint::eps_symbol()));
                }
                if s.params.contains(&name) {
                    Ok(Expr::sym(&Symbol::parameter(&name)))
                } else if s.independents.contains(&name) {
                    Ok(Expr::sym(&Symbol::independent(&name)))
                } else if s.dependents.contains(&name) {
                    Ok(Expr::sym(&Symbol::dependent(&name)))
                } else {
                    err(self.lx.line, col, format!("undeclared symbol '{name}'"))
                }
            }
            _ => err(self.lx.line, col, "expected an expression"),
        }
    }

    /// `d(u, x, y)` after the opening parenthesis.
    fn derivative(&mut self, col: usize) -> Result<Expr, ParseError> {
        let fcol = self.lx.col();
        let f = self.lx.ident()?;
        if !self.scope.dependents.contains(&f) {
            return err(
                self.lx.line,
                fcol,
                format!("'{f}' is not a dependent variable"),
            );
        }
        let mut multi = vec![0u32; self.scope.independents.len()];
        while self.lx.eat_op(',') {
            let vcol = self.lx.col();
            let v = self.lx.ident()?;
            match self.scope.independents.iter().position(|x| *x == v) {
                Some(i) => multi[i] += 1,
                None => {
                    return err(
                        self.lx.line,
                        vcol,
                        format!("'{v}' is not an independent variable"),
                    )
                }
            }
        }
        self.lx.expect_op(')')?;
        if multi.iter().all(|m| *m == 0) {
            return err(self.lx.line, col, "derivative needs at least one variable");
        }
        Ok(Expr::sym(&Symbol::jet(
            &f,
            &multi,
            &self.scope.independents,
        )))
    }

    /// `exp(k*eps)` after the opening parenthesis.
    fn exponential(&mut self, col: usize) -> Result<Expr, ParseError> {
        let arg = self.expr()?;
        self.lx.expect_op(')')?;
        let eps = crate::adjoint::eps_symbol();
        let linear = arg.to_poly().ok().and_then(|p| {
            let k = p.diff(&eps).ok()?.as_constant()?;
            p.as_constant().is_none().then_some(())?;
            (&p - &Poly::symbol(&eps).scale(&k)).is_zero().then_some(k)
        });
        match linear {
            Some(k) => Ok(Expr::param_exp(k)),
            None => err(
                self.lx.line,
                col,
                "exp(...) takes a rational multiple of eps",
            ),
        }
    }

    fn field_basis(&mut self, col: usize) -> Result<Expr, ParseError> {
        let z = self.lx.ident()?;
        self.lx.expect_op(')')?;
        if !self.scope.independents.contains(&z) && !self.scope.dependents.contains(&z) {
            return err(self.lx.line, col, format!("'{z}' is not a base coordinate"));
        }
        Ok(Expr::sym(&field_marker(&z)))
    }
}

fn parse_in(lx: Lexer, scope: &Scope) -> Result<Expr, ParseError> {
    let mut p = ExprParser { lx, scope };
    let e = p.expr()?;
    p.lx.finish()?;
    Ok(e)
}

/// Parses and normalizes one expression.
pub fn parse_expr(text: &str, scope: &Scope) -> Result<Expr, ParseError> {
    let e = parse_in(lex(text, 1, 1)?, scope)?;
    e.normalize().map_err(|x| ParseError {
        line: 1,
        col: 1,
        message: x.to_string(),
    })
}

fn field_from_expr(
    e: &Expr,
    scope: &Scope,
    line: usize,
    col: usize,
) -> Result<Vec<Expr>, ParseError> {
    let base: Vec<String> = scope
        .independents
        .iter()
        .chain(&scope.dependents)
        .cloned()
        .collect();
    let markers: Vec<Symbol> = base.iter().map(|z| field_marker(z)).collect();
    let wrap = |m: String| ParseError {
        line,
        col,
        message: m,
    };
    let p = e.to_poly().map_err(|x| wrap(x.to_string()))?;
    let parts = p.collect(&markers).map_err(|x| wrap(x.to_string()))?;
    let mut coeffs = vec![Expr::zero(); base.len()];
    for (key, c) in parts {
        match key.iter().position(|k| *k != 0) {
            Some(i) if key[i] == 1 && key.iter().filter(|k| **k != 0).count() == 1 => {
                coeffs[i] = c.to_expr()
            }
            _ => {
                return Err(wrap(format!(
                    "not a vector field: term {} is not linear in D(..)",
                    c.to_expr()
                )))
            }
        }
    }
    Ok(coeffs)
}

/// Parses `x*D(x) + u*D(u)` or a comma-separated coefficient list in
/// base-coordinate order.
pub fn parse_field(text: &str, doc: &SystemDocument) -> Result<Vec<Expr>, ParseError> {
    let mut scope = Scope::of(doc);
    let n = doc.independents.len() + doc.dependents.len();
    if text.contains("D(") {
        scope.fields = true;
        let e = parse_in(lex(text, 1, 1)?, &scope)?;
        return field_from_expr(&e, &scope, 1, 1);
    }
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != n {
        return err(1, 1, format!("expected {n} comma-separated coefficients"));
    }
    let mut col = 1;
    let mut out = Vec::new();
    for part in parts {
        let e = parse_in(lex(part, 1, col)?, &scope)?;
        out.push(e.normalize().map_err(|x| ParseError {
            line: 1,
            col,
            message: x.to_string(),
        })?);
        col += part.chars().count() + 1;
    }
    Ok(out)
}

/// Parses a system-definition document.
pub fn parse_system(text: &str) -> Result<SystemDocument, ParseError> {
    let mut doc = SystemDocument::default();
    let mut lead_sites = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let indent = body.len() - body.trim_start().len();
        let trimmed = body.trim_start();
        let kw_len = trimmed.find(char::is_whitespace).unwrap_or(trimmed.len());
        let (kw, rest) = trimmed.split_at(kw_len);
        let rest_col = indent + kw_len + 1;
        let mut lx = lex(rest, line, rest_col)?;
        let scope = Scope::of(&doc);
        match kw {
            "param" => {
                let col = lx.col();
                let name = lx.ident()?;
                let positive = if lx.eat_op('>') {
                    match lx.next() {
                        Some(Tok::Num(n)) if n == BigInt::from(0) => true,
                        _ => {
                            return err(
                                line,
                                col,
                                "only '> 0' is supported as a parameter condition",
                            )
                        }
                    }
                } else {
                    false
                };
                lx.finish()?;
                if scope.declared(&name) {
                    return err(line, col, format!("'{name}' is already declared"));
                }
                doc.params.push(Param { name, positive });
            }
            "independent" => loop {
                let col = lx.col();
                let name = lx.ident()?;
                if scope.declared(&name) || doc.independents.contains(&name) {
                    return err(line, col, format!("'{name}' is already declared"));
                }
                if !doc.dependents.is_empty() {
                    return err(
                        line,
                        col,
                        "independent variables must be declared before dependent ones",
                    );
                }
                doc.independents.push(name);
                if !lx.eat_op(',') {
                    lx.finish()?;
                    break;
                }
            },
            "dependent" => loop {
                let col = lx.col();
                let name = lx.ident()?;
                if scope.declared(&name) || doc.dependents.contains(&name) {
                    return err(line, col, format!("'{name}' is already declared"));
                }
                lx.expect_op('(')?;
                let mut args = Vec::new();
                loop {
                    args.push(lx.ident()?);
                    if !lx.eat_op(',') {
                        break;
                    }
                }
                lx.expect_op(')')?;
                if args != doc.independents {
                    return err(
                        line,
                        col,
                        format!(
                            "'{name}' must depend on all independent variables ({})",
                            doc.independents.join(", ")
                        ),
                    );
                }
                doc.dependents.push(name);
                if !lx.eat_op(',') {
                    lx.finish()?;
                    break;
                }
            },
            "eq" => {
                let mut p = ExprParser { lx, scope: &scope };
                let lhs = p.expr()?;
                p.lx.expect_op('=')?;
                let rhs_col = p.lx.col();
                let rhs = p.expr()?;
                p.lx.finish()?;
                let norm = |e: Expr, col: usize| {
                    e.normalize().map_err(|x| ParseError {
                        line,
                        col,
                        message: x.to_string(),
                    })
                };
                doc.equations.push(Equation {
                    lhs: norm(lhs, rest_col)?,
                    rhs: norm(rhs, rhs_col)?,
                });
            }
            "lead" => {
                let col = lx.col();
                let e = parse_in(lx, &scope)?;
                match e {
                    Expr::Sym(s) if s.role() == Role::Jet => {
                        lead_sites.push((line, col, s.clone()));
                        doc.leads.push(s);
                    }
                    _ => return err(line, col, "lead must be a jet coordinate d(f, ...)"),
                }
            }
            "option" => {
                let col = lx.col();
                let mut name = lx.ident()?;
                while lx.eat_op('-') {
                    name = format!("{name}-{}", lx.ident()?);
                }
                let value = match lx.next() {
                    Some(Tok::Num(n)) => u32::try_from(n).map_err(|_| ParseError {
                        line,
                        col,
                        message: "option value out of range".into(),
                    })?,
                    _ => return lx.fail("expected a non-negative integer"),
                };
                lx.finish()?;
                match name.as_str() {
                    "ansatz-degree" => doc.options.ansatz_degree = Some(value),
                    "invariant-order" => doc.options.invariant_order = Some(value),
                    _ => return err(line, col, format!("unknown option '{name}'")),
                }
            }
            "generator" => {
                let col = lx.col();
                let label = lx.ident()?;
                lx.expect_op('=')?;
                let mut fscope = scope.clone();
                fscope.fields = true;
                let e = parse_in(lx, &fscope)?;
                let coeffs = field_from_expr(&e, &fscope, line, col)?;
                if doc.generators.iter().any(|g| g.label == label) {
                    return err(
                        line,
                        col,
                        format!("generator '{label}' is already declared"),
                    );
                }
                doc.generators.push(GeneratorDecl { label, coeffs });
            }
            _ => return err(line, indent + 1, format!("unknown declaration '{kw}'")),
        }
    }
    if doc.equations.is_empty() {
        return err(text.lines().count().max(1), 1, "no equations");
    }
    let used: BTreeSet<Symbol> = doc
        .equations
        .iter()
        .flat_map(|e| e.lhs.symbols().into_iter().chain(e.rhs.symbols()))
        .collect();
    for (line, col, s) in lead_sites {
        if !used.contains(&s) {
            return err(
                line,
                col,
                format!("lead {s} does not appear in any equation"),
            );
        }
    }
    Ok(doc)
}

impl SystemDocument {
    pub fn order(&self) -> u32 {
        self.equations
            .iter()
            .flat_map(|e| e.lhs.symbols().into_iter().chain(e.rhs.symbols()))
            .map(|s| s.order())
            .max()
            .unwrap_or(0)
            .max(1)
    }

    pub fn jet_space(&self) -> crate::Result<JetSpace> {
        let ind: Vec<&str> = self.independents.iter().map(String::as_str).collect();
        let dep: Vec<&str> = self.dependents.iter().map(String::as_str).collect();
        JetSpace::new(&ind, &dep, self.order())
    }

    /// Equations `lhs − rhs = 0` in solved form.
    pub fn system(&self) -> crate::Result<PdeSystem> {
        let eqs: Vec<Expr> = self
            .equations
            .iter()
            .map(|e| e.lhs.clone() - e.rhs.clone())
            .collect();
        let params: Vec<Symbol> = self
            .params
            .iter()
            .map(|p| Symbol::parameter(&p.name))
            .collect();
        PdeSystem::new(self.jet_space()?, &eqs, &self.leads, &params)
    }

    pub fn generator_fields(&self) -> crate::Result<Vec<(String, VectorField)>> {
        self.generators
            .iter()
            .map(|g| {
                let coeffs = g
                    .coeffs
                    .iter()
                    .map(|c| c.to_poly())
                    .collect::<crate::Result<Vec<Poly>>>()?;
                Ok((g.label.clone(), VectorField::new(coeffs)))
            })
            .collect()
    }

    /// Canonical text; parses back to an equal document.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for p in &self.params {
            let _ = writeln!(
                out,
                "param {}{}",
                p.name,
                if p.positive { " > 0" } else { "" }
            );
        }
        if !self.independents.is_empty() {
            let _ = writeln!(out, "independent {}", self.independents.join(", "));
        }
        if !self.dependents.is_empty() {
            let args = self.independents.join(", ");
            let decls: Vec<String> = self
                .dependents
                .iter()
                .map(|d| format!("{d}({args})"))
                .collect();
            let _ = writeln!(out, "dependent {}", decls.join(", "));
        }
        for e in &self.equations {
            let _ = writeln!(out, "eq {} = {}", e.lhs.source(), e.rhs.source());
        }
        for l in &self.leads {
            let _ = writeln!(out, "lead {}", Expr::sym(l).source());
        }
        if let Some(d) = self.options.ansatz_degree {
            let _ = writeln!(out, "option ansatz-degree {d}");
        }
        if let Some(d) = self.options.invariant_order {
            let _ = writeln!(out, "option invariant-order {d}");
        }
        let base: Vec<&String> = self.independents.iter().chain(&self.dependents).collect();
        for g in &self.generators {
            let _ = writeln!(
                out,
                "generator {} = {}",
                g.label,
                FieldText(&g.coeffs, &base)
            );
        }
        out
    }
}

struct FieldText<'a>(&'a [Expr], &'a [&'a String]);

impl fmt::Display for FieldText<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, z) in self.0.iter().zip(self.1) {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({})*D({z})", c.source())?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "\
# heat equation
param k > 0
independent t, x
dependent u(t, x)
eq d(u, t) = k*d(u, x, x)
lead d(u, t)
option ansatz-degree 2
generator s = 2*t*D(t) + x*D(x)
";

    #[test]
    fn parses_declarations() {
        let doc = parse_system(SMALL).unwrap();
        assert_eq!(
            doc.params,
            vec![Param {
                name: "k".into(),
                positive: true
            }]
        );
        assert_eq!(doc.independents, ["t", "x"]);
        assert_eq!(doc.dependents, ["u"]);
        assert_eq!(doc.equations.len(), 1);
        assert_eq!(doc.equations[0].rhs.to_string(), "u_xx*k");
        assert_eq!(doc.leads[0].label(), "u_t");
        assert_eq!(doc.options.ansatz_degree, Some(2));
        assert_eq!(doc.generators[0].coeffs[0].to_string(), "2*t");
        assert_eq!(doc.order(), 2);
    }

    #[test]
    fn round_trip() {
        let doc = parse_system(SMALL).unwrap();
        let again = parse_system(&doc.to_text()).unwrap();
        assert_eq!(doc, again);
        assert_eq!(doc.to_text(), again.to_text());
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_system("independent x\ndependent u(x)\neq d(u, x) = w\n").unwrap_err();
        assert_eq!((e.line, e.col), (3, 14));
        assert!(e.message.contains("undeclared"));
        let e = parse_system("# nothing\n").unwrap_err();
        assert_eq!(e.message, "no equations");
        let e = parse_system("independent x\ndependent u(x)\neq u/(1 + u) = 0\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse_system("independent x\ndependent u(x)\neq d(u, x) = 0\nlead d(u, x, x)\n")
            .unwrap_err();
        assert!(e.message.contains("does not appear"));
        let e = parse_system("independent x\ndependent u(x)\neq d(u, x) = 0 $\n").unwrap_err();
        assert_eq!((e.line, e.col), (3, 16));
    }

    #[test]
    fn field_forms() {
        let doc = parse_system(SMALL).unwrap();
        let a = parse_field("2*t*D(t) + x*D(x)", &doc).unwrap();
        let b = parse_field("2*t, x, 0", &doc).unwrap();
        assert_eq!(a, b);
        assert!(parse_field("D(t)*D(x)", &doc).is_err());
    }

    #[test]
    fn group_parameter_and_functions() {
        let doc = parse_system(SMALL).unwrap();
        let mut scope = Scope::of(&doc);
        scope.eps = true;
        scope.functions = vec!["f".into()];
        let e = parse_expr("exp(-eps)*f(x*exp(eps), t) + 2*eps", &scope).unwrap();
        assert_eq!(e.to_string(), "2*eps + f(x*exp(eps), t)*exp(-eps)");
        assert!(parse_expr("exp(x)", &scope).is_err());
    }
}
