//! Printing of expression trees.
//!
//! `Display` on [`Expr`] gives the human form with jet labels (`u_xy`);
//! [`Expr::source`] gives the form accepted by the system-file parser
//! (`d(u, x, y)`).

use std::fmt::{self, Write};

use num_traits::One;

use super::expr::Expr;
use super::poly::FuncApp;
use super::symbol::{Role, Symbol};
use crate::rational::{format_rational, Rational};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Style {
    Label,
    Source,
}

/// Display adaptor printing an expression in parser syntax.
pub struct Source<'a>(&'a Expr);

impl Expr {
    pub fn source(&self) -> Source<'_> {
        Source(self)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(f, self, Style::Label)
    }
}

impl fmt::Display for Source<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(f, self.0, Style::Source)
    }
}

fn write_symbol(out: &mut dyn Write, s: &Symbol, style: Style) -> fmt::Result {
    if style == Style::Source && s.role() == Role::Jet {
        write!(out, "d({}", s.name())?;
        for v in s.derivative_vars() {
            write!(out, ", {v}")?;
        }
        out.write_char(')')
    } else {
        out.write_str(s.label())
    }
}

fn write_func(out: &mut dyn Write, app: &FuncApp, style: Style) -> fmt::Result {
    out.write_str(&app.name)?;
    if app.derivs.iter().any(|d| *d > 0) {
        out.write_char('_')?;
        for (j, count) in app.derivs.iter().enumerate() {
            for _ in 0..*count {
                match &app.args[j] {
                    Expr::Sym(s) => out.write_str(s.label())?,
                    _ => write!(out, "#{}", j + 1)?,
                }
            }
        }
    }
    out.write_char('(')?;
    for (j, a) in app.args.iter().enumerate() {
        if j > 0 {
            out.write_str(", ")?;
        }
        write_expr(out, a, style)?;
    }
    out.write_char(')')
}

fn is_atomic(e: &Expr) -> bool {
    match e {
        Expr::Sym(_) | Expr::Apply(_) | Expr::ParamExp(_) => true,
        Expr::Const(q) => q.is_integer() && q >= &Rational::from_integer(0.into()),
        _ => false,
    }
}

fn write_factor(out: &mut dyn Write, e: &Expr, style: Style) -> fmt::Result {
    if is_atomic(e) || matches!(e, Expr::Pow(..)) {
        write_expr(out, e, style)
    } else {
        out.write_char('(')?;
        write_expr(out, e, style)?;
        out.write_char(')')
    }
}

fn write_power(out: &mut dyn Write, base: &Expr, n: i64, style: Style) -> fmt::Result {
    if is_atomic(base) {
        write_expr(out, base, style)?;
    } else {
        out.write_char('(')?;
        write_expr(out, base, style)?;
        out.write_char(')')?;
    }
    if n != 1 {
        write!(out, "^{n}")?;
    }
    Ok(())
}

fn write_expr(out: &mut dyn Write, e: &Expr, style: Style) -> fmt::Result {
    match e {
        Expr::Const(q) => out.write_str(&format_rational(q)),
        Expr::Sym(s) => write_symbol(out, s, style),
        Expr::ParamExp(k) => {
            if k.is_one() {
                out.write_str("exp(eps)")
            } else if (-k).is_one() {
                out.write_str("exp(-eps)")
            } else {
                write!(out, "exp({}*eps)", format_rational(k))
            }
        }
        Expr::Apply(app) => write_func(out, app, style),
        Expr::Pow(base, n) if *n < 0 => {
            out.write_str("1/")?;
            write_power(out, base, -n, style)
        }
        Expr::Pow(base, n) => write_power(out, base, *n, style),
        Expr::Sum(ops) => {
            if ops.is_empty() {
                return out.write_char('0');
            }
            for (i, op) in ops.iter().enumerate() {
                if i == 0 {
                    write_expr(out, op, style)?;
                } else if op.is_negative_form() {
                    out.write_str(" - ")?;
                    write_expr(out, &op.negated_form(), style)?;
                } else {
                    out.write_str(" + ")?;
                    write_expr(out, op, style)?;
                }
            }
            Ok(())
        }
        Expr::Product(ops) => write_product(out, ops, style),
    }
}

fn write_product(out: &mut dyn Write, ops: &[Expr], style: Style) -> fmt::Result {
    if ops.is_empty() {
        return out.write_char('1');
    }
    let mut coeff: Option<&Rational> = None;
    let mut num: Vec<&Expr> = Vec::new();
    let mut den: Vec<Expr> = Vec::new();
    for (i, op) in ops.iter().enumerate() {
        match op {
            Expr::Const(q) if i == 0 => coeff = Some(q),
            Expr::Pow(b, n) if *n < 0 => den.push(if *n == -1 {
                (**b).clone()
            } else {
                Expr::Pow(b.clone(), -n)
            }),
            other => num.push(other),
        }
    }
    let mut wrote = false;
    if let Some(c) = coeff {
        if c.is_one() {
        } else if (-c).is_one() {
            out.write_char('-')?;
            if num.is_empty() {
                out.write_char('1')?;
                wrote = true;
            }
        } else {
            out.write_str(&format_rational(c))?;
            wrote = true;
        }
    }
    for f in &num {
        if wrote {
            out.write_char('*')?;
        }
        write_factor(out, f, style)?;
        wrote = true;
    }
    if !wrote {
        out.write_char('1')?;
    }
    if !den.is_empty() {
        out.write_char('/')?;
        if den.len() == 1 && (is_atomic(&den[0]) || matches!(den[0], Expr::Pow(..))) {
            write_expr(out, &den[0], style)?;
        } else {
            out.write_char('(')?;
            for (i, d) in den.iter().enumerate() {
                if i > 0 {
                    out.write_char('*')?;
                }
                write_factor(out, d, style)?;
            }
            out.write_char(')')?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn human_and_source_forms() {
        let names = ["x".to_string(), "y".to_string()];
        let x = Expr::sym(&Symbol::independent("x"));
        let u = Expr::sym(&Symbol::dependent("u"));
        let u_yy = Expr::sym(&Symbol::jet("u", &[0, 2], &names));
        let rho = Expr::sym(&Symbol::parameter("rho"));
        let e = (u.clone() * u_yy.clone() - x.clone() / rho.clone() + Expr::rational(rat(-3, 2)))
            .normalize()
            .unwrap();
        assert_eq!(e.to_string(), "-3/2 - x/rho + u*u_yy");
        assert_eq!(e.source().to_string(), "-3/2 - x/rho + u*d(u, y, y)");
        let g = (Expr::param_exp(int(-4)) * u).normalize().unwrap();
        assert_eq!(g.to_string(), "u*exp(-4*eps)");
    }
}
