//! Text and JSON rendering of an [`AnalysisReport`].

use std::fmt::Write;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::adjoint::ParamValue;
use crate::lie::Subspace;
use crate::optimal::NormalFormReport;
use crate::rational::{format_rational, Rational};

use super::{combination_text, span_text, AnalysisReport, GeneratorReport, StructureReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

/// Report parts selectable for emission.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Section {
    Symmetries,
    Structure,
    Adjoint,
    Flows,
    Invariants,
    Optimal,
    Notes,
}

impl Section {
    pub const ALL: [Section; 7] = [
        Section::Symmetries,
        Section::Structure,
        Section::Adjoint,
        Section::Flows,
        Section::Invariants,
        Section::Optimal,
        Section::Notes,
    ];
}

pub fn emit(report: &AnalysisReport, format: Format, sections: &[Section]) -> String {
    match format {
        Format::Text => emit_text(report, sections),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&emit_json(report, sections))
                .expect("JSON values serialize");
            s.push('\n');
            s
        }
    }
}

/// `"n/d"`, denominator always present.
pub fn q(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

fn qv(v: &[Rational]) -> Value {
    Value::from(v.iter().map(q).collect::<Vec<_>>())
}

fn qm(m: &[Vec<Rational>]) -> Value {
    Value::from(m.iter().map(|r| qv(r)).collect::<Vec<_>>())
}

fn subspace(s: &Subspace) -> Value {
    qm(s.basis())
}

fn param(p: &ParamValue) -> Value {
    match p {
        ParamValue::Eps(x) => json!({ "eps": q(x) }),
        ParamValue::ExpOf(x) => json!({ "exp_eps": q(x) }),
    }
}

pub fn generator_json(g: &GeneratorReport) -> Value {
    let mut v = json!({
        "label": g.label,
        "field": g.display,
        "coefficients": g.field.coeffs().iter().map(|c| c.to_expr().source().to_string()).collect::<Vec<_>>(),
        "residual_zero": g.residual_zero,
    });
    if let Some(s) = g.in_span {
        v["in_span"] = Value::from(s);
    }
    v
}

/// Structure-constants document accepted back as standalone input, with
/// 1-based indices and only the brackets `i < j` that are nonzero.
pub fn structure_constants_json(s: &StructureReport) -> Value {
    let alg = &s.algebra;
    let n = alg.dim();
    let mut brackets = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let b = alg.bracket_basis(i, j);
            if b.iter().any(|x| !x.is_zero()) {
                brackets.push(json!({ "i": i + 1, "j": j + 1, "coeffs": qv(b) }));
            }
        }
    }
    json!({ "dim": n, "labels": alg.labels(), "brackets": brackets })
}

pub fn normal_form_json(nf: &NormalFormReport, labels: &[String]) -> Value {
    json!({
        "input": qv(&nf.input),
        "output": qv(&nf.output),
        "fingerprint": qv(&nf.fingerprint),
        "sign_flipped": nf.sign_flipped,
        "steps": nf.steps.iter().map(|s| json!({
            "generator": labels[s.generator],
            "parameter": param(&s.parameter),
            "before": qv(&s.before),
            "after": qv(&s.after),
        })).collect::<Vec<_>>(),
    })
}

pub fn emit_json(r: &AnalysisReport, sections: &[Section]) -> Value {
    let mut out = json!({ "schema": 1 });
    let has = |s: Section| sections.contains(&s);
    let labels = r.labels();
    if has(Section::Symmetries) {
        out["system"] = json!({
            "parameters": r.system.params,
            "independents": r.system.independents,
            "dependents": r.system.dependents,
            "equations": r.system.equations,
            "order": r.system.order,
        });
        out["determining"] = json!({
            "ansatz_degree": r.determining.degree,
            "equations_before_dedup": r.determining.raw_count,
            "equations": r.determining.equation_count,
            "nullspace_dim": r.determining.nullspace_dim,
        });
        out["basis"] = r.basis.iter().map(generator_json).collect();
        out["generators"] = r.generators.iter().map(generator_json).collect();
    }
    if let (true, Some(s)) = (has(Section::Structure), &r.structure) {
        let n = s.algebra.dim();
        let table: Vec<Value> = (0..n)
            .map(|i| (0..n).map(|j| qv(s.algebra.bracket_basis(i, j))).collect())
            .collect();
        out["structure"] = json!({
            "labels": s.algebra.labels(),
            "commutators": table,
            "structure_constants": structure_constants_json(s),
            "killing_form": qm(&s.killing),
            "killing_determinant": q(&s.killing_det),
            "solvable": s.solvable,
            "nilpotent": s.nilpotent,
            "semisimple": s.semisimple,
            "derived_series": s.derived_series.iter().map(subspace).collect::<Vec<_>>(),
            "lower_central_series": s.lower_central_series.iter().map(subspace).collect::<Vec<_>>(),
            "center": subspace(&s.center),
            "radical": subspace(&s.radical),
        });
    }
    if has(Section::Adjoint) && !r.adjoint.is_empty() {
        out["adjoint"] = r
            .adjoint
            .iter()
            .map(|a| {
                json!({
                    "generator": a.label,
                    "rows": a.rows.iter().map(|row| row.iter().map(|e| e.to_expr().source().to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
                })
            })
            .collect();
    }
    if has(Section::Flows) && !r.flows.is_empty() {
        out["flows"] = r
            .flows
            .iter()
            .map(|f| {
                json!({
                    "generator": f.label,
                    "map": f.map.images().iter().map(|e| e.source().to_string()).collect::<Vec<_>>(),
                    "group_law": f.group_law,
                    "group_law_samples": f.group_law_samples.iter().map(|(a, b, ok)| json!({"a": q(a), "b": q(b), "holds": ok})).collect::<Vec<_>>(),
                    "transformed": f.transformed.as_ref().map(|t| t.iter().map(|e| e.source().to_string()).collect::<Vec<_>>()),
                })
            })
            .collect();
        if let Some(c) = &r.composite {
            out["composite"] = json!({
                "order": c.order,
                "functions": c.functions,
                "solution": c.solution.iter().map(|e| e.source().to_string()).collect::<Vec<_>>(),
            });
        }
    }
    if let (true, Some(inv)) = (has(Section::Invariants), &r.invariants) {
        let ws = &inv.weights;
        out["invariants"] = json!({
            "order": inv.order,
            "coordinates": ws.coords.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "translated": ws.masked,
            "weights": qm(&ws.weights),
            "free_coordinates": inv.lattice.coords.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "lattice": inv.lattice.basis.iter().map(|v| v.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "generators": inv.lattice.generators().iter().map(|m| m.to_expr().source().to_string()).collect::<Vec<_>>(),
            "completeness": inv.completeness.as_ref().map(|(b, c)| json!({
                "bound": b, "checked": c.checked, "zero_weight": c.zero_weight, "outside_lattice": c.outside_lattice,
            })),
            "similarity": inv.similarity.iter().map(|(l, s)| json!({
                "generator": l,
                "reduces": s.reduces,
                "invariants": s.invariants.iter().map(|(n, e)| json!([n, e.source().to_string()])).collect::<Vec<_>>(),
                "substitution": s.substitution.iter().map(|(z, e)| json!([z.to_string(), e.source().to_string()])).collect::<Vec<_>>(),
                "note": s.note,
            })).collect::<Vec<_>>(),
        });
    }
    if has(Section::Optimal) && !r.optimal.is_empty() {
        out["optimal"] = r
            .optimal
            .iter()
            .map(|o| {
                json!({
                    "sample": q(&o.sample),
                    "entries": o.report.entries.iter().map(|e| json!({
                        "label": e.label,
                        "listed": e.listed,
                        "dim": e.dim,
                        "closed": e.closed,
                        "failure": e.failure.as_ref().map(|(a, b, c)| json!([qv(a), qv(b), qv(c)])),
                        "abelian": e.abelian,
                        "ideal": e.ideal,
                        "derived_dim": e.derived_dim,
                        "normalizer_dim": e.normalizer_dim,
                    })).collect::<Vec<_>>(),
                    "indistinct": o.report.indistinct.iter().map(|(i, j)| json!([o.report.entries[*i].label, o.report.entries[*j].label])).collect::<Vec<_>>(),
                    "uncovered": o.report.uncovered.iter().map(|&k| labels[k].clone()).collect::<Vec<_>>(),
                    "normal_forms": o.normal_forms.iter().map(|nf| normal_form_json(nf, &labels)).collect::<Vec<_>>(),
                })
            })
            .collect();
    }
    if has(Section::Notes) {
        out["checks"] = r
            .checks
            .iter()
            .map(|c| json!({"anchor": c.anchor, "item": c.item, "passed": c.passed}))
            .collect();
        out["notes"] = r
            .notes
            .iter()
            .map(|n| json!({"anchor": n.anchor, "message": n.message}))
            .collect();
    }
    out
}

fn table(out: &mut String, header: &[String], rows: &[(String, Vec<String>)]) {
    let w0 = rows
        .iter()
        .map(|(h, _)| h.chars().count())
        .max()
        .unwrap_or(0);
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for (_, cells) in rows {
        for (w, c) in widths.iter_mut().zip(cells) {
            *w = (*w).max(c.chars().count());
        }
    }
    let _ = write!(out, "  {:w0$}", "");
    for (h, w) in header.iter().zip(&widths) {
        let _ = write!(out, "  {h:>w$}");
    }
    out.push('\n');
    for (h, cells) in rows {
        let _ = write!(out, "  {h:w0$}");
        for (c, w) in cells.iter().zip(&widths) {
            let _ = write!(out, "  {c:>w$}");
        }
        out.push('\n');
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn emit_text(r: &AnalysisReport, sections: &[Section]) -> String {
    let mut out = String::new();
    let has = |s: Section| sections.contains(&s);
    let labels = r.labels();
    if has(Section::Symmetries) {
        let s = &r.system;
        let _ = writeln!(
            out,
            "system: {} equations of order {} in {}; unknowns {}; parameters {}",
            s.equations.len(),
            s.order,
            s.independents.join(", "),
            s.dependents.join(", "),
            if s.params.is_empty() {
                "none".to_string()
            } else {
                s.params.join(", ")
            }
        );
        let d = &r.determining;
        let _ = writeln!(
            out,
            "determining system (ansatz degree {}): {} equations, {} after deduplication, solution space of dimension {}",
            d.degree, d.raw_count, d.equation_count, d.nullspace_dim
        );
        out.push_str("\nsolution space basis:\n");
        for g in &r.basis {
            let _ = writeln!(
                out,
                "  {} = {}    [residual {}]",
                g.label,
                g.display,
                if g.residual_zero { "0" } else { "nonzero" }
            );
        }
        out.push_str("\ngenerators:\n");
        for g in &r.generators {
            let span = match g.in_span {
                Some(true) => ", in span",
                Some(false) => ", outside span",
                None => "",
            };
            let _ = writeln!(
                out,
                "  {} = {}    [residual {}{span}]",
                g.label,
                g.display,
                if g.residual_zero { "0" } else { "nonzero" }
            );
        }
    }
    if let (true, Some(s)) = (has(Section::Structure), &r.structure) {
        let n = s.algebra.dim();
        out.push_str("\ncommutator table (row i, column j holds [vi, vj]):\n");
        let rows: Vec<(String, Vec<String>)> = (0..n)
            .map(|i| {
                (
                    labels[i].clone(),
                    (0..n)
                        .map(|j| combination_text(s.algebra.bracket_basis(i, j), &labels))
                        .collect(),
                )
            })
            .collect();
        table(&mut out, &labels, &rows);
        out.push_str("\nKilling form:\n");
        let rows: Vec<(String, Vec<String>)> = (0..n)
            .map(|i| {
                (
                    labels[i].clone(),
                    s.killing[i].iter().map(format_rational).collect(),
                )
            })
            .collect();
        table(&mut out, &labels, &rows);
        let _ = writeln!(
            out,
            "determinant {}; solvable {}; nilpotent {}; semisimple {}",
            format_rational(&s.killing_det),
            yes(s.solvable),
            yes(s.nilpotent),
            yes(s.semisimple)
        );
        let chain = |v: &[Subspace]| {
            v.iter()
                .map(|t| span_text(t, &labels))
                .collect::<Vec<_>>()
                .join(" ⊃ ")
        };
        let _ = writeln!(out, "derived series: {}", chain(&s.derived_series));
        let _ = writeln!(
            out,
            "lower central series: {}",
            chain(&s.lower_central_series)
        );
        let _ = writeln!(out, "center: {}", span_text(&s.center, &labels));
        let _ = writeln!(out, "radical: {}", span_text(&s.radical, &labels));
    }
    if has(Section::Adjoint) && !r.adjoint.is_empty() {
        out.push_str("\nadjoint representation (row j is the image of vj):\n");
        for a in &r.adjoint {
            let _ = writeln!(out, "Ad(exp(eps*{})):", a.label);
            let rows: Vec<(String, Vec<String>)> = a
                .rows
                .iter()
                .enumerate()
                .map(|(j, row)| {
                    (
                        labels[j].clone(),
                        row.iter().map(|e| e.to_string()).collect(),
                    )
                })
                .collect();
            table(&mut out, &labels, &rows);
        }
    }
    if has(Section::Flows) && !r.flows.is_empty() {
        out.push_str("\none-parameter groups:\n");
        for f in &r.flows {
            let samples = f.group_law_samples.iter().all(|(_, _, ok)| *ok);
            let _ = writeln!(
                out,
                "  G({}): {} -> {}    [group law {}, at samples {}]",
                f.label,
                f.map
                    .coords
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(", "),
                f.map.display(),
                if f.group_law { "holds" } else { "fails" },
                if samples { "holds" } else { "fails" }
            );
        }
        out.push_str("\ntransformed solutions:\n");
        for f in &r.flows {
            if let Some(t) = &f.transformed {
                let _ = writeln!(
                    out,
                    "  {}: {}",
                    f.label,
                    t.iter()
                        .map(|e| e.to_string())
                        .collect::<Vec<_>>()
                        .join(", ")
                );
            }
        }
        if let Some(c) = &r.composite {
            let _ = writeln!(
                out,
                "  composite ({}): {}",
                c.order.join(", "),
                c.solution
                    .iter()
                    .map(|e| e.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            );
        }
    }
    if let (true, Some(inv)) = (has(Section::Invariants), &r.invariants) {
        let _ = writeln!(
            out,
            "\nmonomial differential invariants (order {}):",
            inv.order
        );
        let gens = inv.lattice.generators();
        let _ = writeln!(
            out,
            "  {} free coordinates, lattice rank {}",
            inv.lattice.coords.len(),
            gens.len()
        );
        for m in &gens {
            let _ = writeln!(out, "  {}", m.to_expr());
        }
        if let Some((b, c)) = &inv.completeness {
            let _ = writeln!(
                out,
                "  exponents in [-{b}, {b}]: {} checked, {} of zero weight, {} outside the lattice",
                c.checked, c.zero_weight, c.outside_lattice
            );
        }
        out.push_str("\nsimilarity forms:\n");
        for (l, s) in &inv.similarity {
            let _ = writeln!(out, "  {l}: {}", s.describe());
        }
    }
    if has(Section::Optimal) && !r.optimal.is_empty() {
        for o in &r.optimal {
            let _ = writeln!(
                out,
                "\nsubalgebra checks (parameters = {}):",
                format_rational(&o.sample)
            );
            for e in &o.report.entries {
                let _ = writeln!(
                    out,
                    "  {}: dim {}/{}, {}{}{}",
                    e.label,
                    e.dim,
                    e.listed,
                    if e.closed { "closed" } else { "NOT closed" },
                    if e.abelian { ", abelian" } else { "" },
                    if e.ideal { ", ideal" } else { "" }
                );
            }
            if !o.report.uncovered.is_empty() {
                let names: Vec<&str> = o
                    .report
                    .uncovered
                    .iter()
                    .map(|&k| labels[k].as_str())
                    .collect();
                let _ = writeln!(out, "  one-dimensional list misses: {}", names.join(", "));
            }
            for nf in &o.normal_forms {
                let _ = writeln!(
                    out,
                    "  normal form of {} is {}",
                    combination_text(&nf.input, &labels),
                    combination_text(&nf.output, &labels)
                );
            }
        }
    }
    if has(Section::Notes) {
        let failed = r.failed_checks().count();
        if !r.checks.is_empty() {
            let _ = writeln!(
                out,
                "\nreference checks: {} passed, {} failed",
                r.checks.len() - failed,
                failed
            );
            for c in r.failed_checks() {
                let _ = writeln!(out, "  FAIL [{}] {}", c.anchor, c.item);
            }
        }
        if !r.notes.is_empty() {
            out.push_str("\nnotes:\n");
            for n in &r.notes {
                let _ = writeln!(out, "  [{}] {}", n.anchor, n.message);
            }
        }
    }
    out
}
