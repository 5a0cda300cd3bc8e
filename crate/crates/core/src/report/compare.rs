//! Comparison of computed results against a [`Reference`].

use crate::adjoint::eps_symbol;
use crate::error::Result;
use crate::invariants::verify_invariant;
use crate::lie::Subspace;
use crate::parse::Scope;
use crate::prolong::VectorField;
use crate::rational::{format_rational, parse_rational, Rational};
use crate::symbolic::{Expr, Poly};

use super::input::{parse_combination, parse_with};
use super::{
    span_text, AdjointReport, CompositeReport, Ctx, FlowReport, InvariantReport, StructureReport,
};

fn eps_scope(ctx: &Ctx<'_>) -> Scope {
    let mut s = Scope::of(ctx.doc);
    s.eps = true;
    s
}

pub(super) fn structure(ctx: &mut Ctx<'_>, s: &StructureReport) -> Result<()> {
    let Some(reference) = ctx.reference else {
        return Ok(());
    };
    let alg = &s.algebra;
    let labels = alg.labels().to_vec();
    if let Some(c) = &reference.commutators {
        let mut diffs = Vec::new();
        for (i, row) in c.body.rows.iter().enumerate().take(alg.dim()) {
            for (j, text) in row.iter().enumerate().take(alg.dim()) {
                let want = parse_combination(text, &labels)?;
                let ok = want.as_slice() == alg.bracket_basis(i, j);
                if !ok {
                    diffs.push(format!(
                        "[{}, {}]: printed {text}, computed {}",
                        labels[i],
                        labels[j],
                        super::combination_text(alg.bracket_basis(i, j), &labels)
                    ));
                }
                ctx.check(&c.anchor, format!("[{}, {}]", labels[i], labels[j]), ok);
            }
        }
        if !diffs.is_empty() {
            ctx.note(&c.anchor, diffs.join("; "));
        }
    }
    if let Some(k) = &reference.killing {
        let want: Option<Vec<Vec<Rational>>> = k
            .body
            .matrix
            .iter()
            .map(|r| r.iter().map(|x| parse_rational(x)).collect())
            .collect();
        let ok = want.as_ref() == Some(&s.killing);
        ctx.check(&k.anchor, "Killing form matrix", ok);
        if !ok {
            ctx.note(
                &k.anchor,
                "computed Killing form differs from the printed matrix",
            );
        }
    }
    if let Some(d) = &reference.derived_series {
        let n = alg.dim();
        let mut diffs = Vec::new();
        for (k, term) in d.body.terms.iter().enumerate() {
            let vs = term
                .iter()
                .map(|t| parse_combination(t, &labels))
                .collect::<Result<Vec<_>>>()?;
            let printed = Subspace::span(n, &vs);
            let computed = s
                .derived_series
                .get(k + 1)
                .cloned()
                .unwrap_or_else(|| Subspace::zero(n));
            let ok = printed == computed;
            ctx.check(&d.anchor, format!("derived term {}", k + 1), ok);
            if !ok {
                diffs.push(format!(
                    "g^({}) printed as {}, computed {}",
                    k + 1,
                    span_text(&printed, &labels),
                    span_text(&computed, &labels)
                ));
            }
        }
        if !diffs.is_empty() {
            let chain: Vec<String> = s
                .derived_series
                .iter()
                .map(|t| span_text(t, &labels))
                .collect();
            ctx.note(
                &d.anchor,
                format!("{}; computed chain {}", diffs.join("; "), chain.join(" ⊃ ")),
            );
        }
    }
    Ok(())
}

pub(super) fn adjoint(ctx: &mut Ctx<'_>, adj: &[AdjointReport]) -> Result<()> {
    let Some(r) = ctx.reference.and_then(|r| r.adjoint.as_ref()) else {
        return Ok(());
    };
    let scope = eps_scope(ctx);
    for (a, printed) in adj.iter().zip(&r.body.matrices) {
        let mut diffs = Vec::new();
        for (i, row) in printed.iter().enumerate() {
            for (j, text) in row.iter().enumerate() {
                let want = parse_with(text, &scope, &[])?.to_poly()?;
                let got = a
                    .rows
                    .get(i)
                    .and_then(|r| r.get(j))
                    .map(|e| e.to_poly())
                    .unwrap_or_default();
                if want != got {
                    diffs.push(format!(
                        "({}, {}): printed {text}, computed {}",
                        i + 1,
                        j + 1,
                        got.to_expr()
                    ));
                }
            }
        }
        ctx.check(&r.anchor, format!("Ad({})", a.label), diffs.is_empty());
        if !diffs.is_empty() {
            ctx.note(
                &r.anchor,
                format!("Ad({}) entry {}", a.label, diffs.join("; ")),
            );
        }
    }
    Ok(())
}

fn flipped(p: &Poly) -> Result<Poly> {
    p.rescale_group_parameter(&eps_symbol(), &Rational::from_integer((-1).into()))
}

pub(super) fn flows(
    ctx: &mut Ctx<'_>,
    flows: &[FlowReport],
    composite: Option<&CompositeReport>,
) -> Result<()> {
    let scope = eps_scope(ctx);
    let law_anchor = ctx.anchor(|r| &r.flows, "flows");
    for f in flows {
        ctx.check(
            &law_anchor,
            format!("group law for {} (symbolic)", f.label),
            f.group_law,
        );
        for (a, b, ok) in &f.group_law_samples {
            ctx.check(
                &law_anchor,
                format!(
                    "group law for {} at ({}, {})",
                    f.label,
                    format_rational(a),
                    format_rational(b)
                ),
                *ok,
            );
        }
    }
    let Some(reference) = ctx.reference else {
        return Ok(());
    };
    if let Some(r) = &reference.flows {
        for (f, printed) in flows.iter().zip(&r.body.maps) {
            let got = f.map.image_polys();
            let mut ok = printed.len() == got.len();
            for (text, g) in printed.iter().zip(&got) {
                ok &= parse_with(text, &scope, &[])?.to_poly()? == *g;
            }
            ctx.check(&r.anchor, format!("flow of {}", f.label), ok);
            if !ok {
                ctx.note(
                    &r.anchor,
                    format!("flow of {} computed as {}", f.label, f.map.display()),
                );
            }
        }
    }
    if let Some(r) = &reference.transformed {
        let fns = &r.body.functions;
        for (f, printed) in flows.iter().zip(&r.body.solutions) {
            let Some(got) = &f.transformed else {
                ctx.check(
                    &r.anchor,
                    format!("transformed solution for {}", f.label),
                    false,
                );
                continue;
            };
            let want: Vec<Poly> = printed
                .iter()
                .map(|t| parse_with(t, &scope, fns)?.to_poly())
                .collect::<Result<_>>()?;
            let got: Vec<Poly> = got.iter().map(Expr::to_poly).collect::<Result<_>>()?;
            let direct = want == got;
            let reversed =
                !direct && want == got.iter().map(flipped).collect::<Result<Vec<_>>>()?;
            ctx.check(
                &r.anchor,
                format!("transformed solution for {}", f.label),
                direct || reversed,
            );
            let shown: Vec<String> = got
                .iter()
                .map(|p| p.to_expr().source().to_string())
                .collect();
            if reversed {
                ctx.note(
                    &r.anchor,
                    format!(
                        "solution printed for {} matches the computed ({}) only after eps -> -eps; the printed group parameter runs the other way",
                        f.label,
                        shown.join(", ")
                    ),
                );
            } else if !direct {
                ctx.note(
                    &r.anchor,
                    format!(
                        "solution for {} computed as ({})",
                        f.label,
                        shown.join(", ")
                    ),
                );
            }
        }
    }
    if let (Some(r), Some(c)) = (&reference.composite, composite) {
        let want: Vec<Poly> = r
            .body
            .solution
            .iter()
            .map(|t| parse_with(t, &scope, &c.functions)?.to_poly())
            .collect::<Result<_>>()?;
        let got: Vec<Poly> = c
            .solution
            .iter()
            .map(Expr::to_poly)
            .collect::<Result<_>>()?;
        ctx.check(
            &r.anchor,
            "composite transformation computed and diffed",
            true,
        );
        let mut diffs = Vec::new();
        for (k, (w, g)) in want.iter().zip(&got).enumerate() {
            if w != g {
                diffs.push(format!(
                    "{}: printed {}, computed {}",
                    c.functions.get(k).map(String::as_str).unwrap_or("?"),
                    w.to_expr().source(),
                    g.to_expr().source()
                ));
            }
        }
        if !diffs.is_empty() {
            ctx.note(
                &r.anchor,
                format!(
                    "composite of {} (first applied first) differs: {}",
                    c.order.join(", "),
                    diffs.join("; ")
                ),
            );
        }
    }
    Ok(())
}

fn jet_order(e: &Expr) -> u32 {
    e.symbols().iter().map(|s| s.order()).max().unwrap_or(0)
}

pub(super) fn invariants(
    ctx: &mut Ctx<'_>,
    inv: &InvariantReport,
    fs: &[VectorField],
    labels: &[String],
) -> Result<()> {
    let Some(reference) = ctx.reference else {
        return Ok(());
    };
    let scope = Scope::of(ctx.doc);
    let space = ctx.space;
    if let Some(r) = &reference.invariants {
        let mut failed = Vec::new();
        for (group, list) in [
            ("first order", &r.body.first_order),
            ("second order", &r.body.second_order),
        ] {
            for text in list {
                let e = parse_with(text, &scope, &[])?;
                let mut ok = verify_invariant(&e, fs, space)?;
                if jet_order(&e) <= inv.order {
                    ok &= inv.lattice.contains_expr(&inv.weights, &e)?;
                }
                if !ok {
                    failed.push(text.clone());
                }
                ctx.check(&r.anchor, format!("{group}: {text}"), ok);
            }
        }
        if !failed.is_empty() {
            ctx.note(
                &r.anchor,
                format!(
                    "not invariant under the full algebra: {}",
                    failed.join(", ")
                ),
            );
        }
    }
    if let Some(r) = &reference.invariant_rows {
        for row in &r.body.rows {
            let Some(k) = labels.iter().position(|l| l == &row.generator) else {
                ctx.note(
                    &r.anchor,
                    format!("no generator labelled {}", row.generator),
                );
                continue;
            };
            let mut failed = Vec::new();
            for (idx, text) in row.entries.iter().enumerate() {
                let e = parse_with(text, &scope, &[])?;
                let ok = verify_invariant(&e, std::slice::from_ref(&fs[k]), space)?;
                if !ok {
                    failed.push(format!("#{} {text}", idx + 1));
                }
                ctx.check(
                    &r.anchor,
                    format!("{} entry {}: {text}", row.generator, idx + 1),
                    ok,
                );
            }
            if !failed.is_empty() {
                ctx.note(
                    &r.anchor,
                    format!(
                        "entries not invariant under {}: {}",
                        row.generator,
                        failed.join(", ")
                    ),
                );
            }
        }
    }
    if let Some(r) = &reference.similarity {
        let red_scope = Scope {
            independents: vec!["r".into(), "s".into()],
            ..Scope::default()
        };
        let mut fns = super::solution_names(ctx.doc.dependents.len());
        fns.push("exp".into());
        for row in &r.body.rows {
            let Some((_, form)) = inv.similarity.iter().find(|(l, _)| l == &row.generator) else {
                ctx.check(
                    &r.anchor,
                    format!("similarity form of {}", row.generator),
                    false,
                );
                continue;
            };
            let ok =
                match &row.form {
                    None => !form.reduces,
                    Some(map) => {
                        form.reduces
                            && form.substitution.len() == map.len()
                            && form
                                .substitution
                                .iter()
                                .map(|(z, e)| -> Result<bool> {
                                    let Some(text) = map.get(z.name()) else {
                                        return Ok(false);
                                    };
                                    Ok(parse_with(text, &red_scope, &fns)?.to_poly()?
                                        == e.to_poly()?)
                                })
                                .collect::<Result<Vec<bool>>>()?
                                .into_iter()
                                .all(|b| b)
                    }
                };
            ctx.check(
                &r.anchor,
                format!("similarity form of {}", row.generator),
                ok,
            );
            if !ok {
                ctx.note(
                    &r.anchor,
                    format!(
                        "similarity form of {} computed as {}",
                        row.generator,
                        form.describe()
                    ),
                );
            }
        }
    }
    Ok(())
}
