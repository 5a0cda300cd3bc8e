//! Analysis pipeline over a parsed system document, comparison against
//! published reference values, and text/JSON report emission.

mod compare;
mod emit;
mod input;

use std::fmt;

use num_traits::Zero;

use crate::adjoint::{self, compose_chain, flow, transform_solution, ExpPoly, FlowMap};
use crate::error::Error;
use crate::invariants::{
    brute_force_completeness, monomial_invariants, similarity_form, weight_system, BoxCount,
    InvariantLattice, SimilarityForm, WeightSystem,
};
use crate::jet::{JetSpace, PdeSystem};
use crate::lie::{LieAlgebra, Subspace};
use crate::linalg::{self, Matrix};
use crate::optimal::{normal_form_1d, verify_optimal_table, NormalFormReport, OptimalReport};
use crate::parallel::Exec;
use crate::parse::SystemDocument;
use crate::prolong::{
    build_determining_with, is_symmetry, solve_determining_with, span_coordinates, VectorField,
};
use crate::rational::{rat, Rational};

pub use emit::{
    emit, emit_json, emit_text, generator_json, normal_form_json, structure_constants_json, Format,
    Section,
};
pub use input::{
    parse_combination, Anchored, BracketInput, OptimalInput, ParamEntry, Reference, StructureInput,
};

/// Pipeline stages in execution order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    Determining,
    Structure,
    Adjoint,
    Flows,
    Invariants,
    Optimal,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Determining => "determining",
            Stage::Structure => "structure",
            Stage::Adjoint => "adjoint",
            Stage::Flows => "flows",
            Stage::Invariants => "invariants",
            Stage::Optimal => "optimal",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{stage} stage: {source}")]
pub struct PipelineError {
    pub stage: Stage,
    #[source]
    pub source: Error,
}

trait AtStage<T> {
    fn at(self, stage: Stage) -> Result<T, PipelineError>;
}

impl<T> AtStage<T> for crate::Result<T> {
    fn at(self, stage: Stage) -> Result<T, PipelineError> {
        self.map_err(|source| PipelineError { stage, source })
    }
}

#[derive(Clone, Debug)]
pub struct PipelineOptions {
    /// Overrides the document's `option ansatz-degree`; default 1.
    pub ansatz_degree: Option<u32>,
    /// Overrides the document's `option invariant-order`; default 1.
    pub invariant_order: Option<u32>,
    pub exec: Exec,
    /// Stages after this one are skipped.
    pub last_stage: Stage,
    pub reference: Option<Reference>,
    pub optimal: Option<OptimalInput>,
    /// Exponent bound for the brute-force lattice completeness check.
    pub completeness_bound: Option<i64>,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            ansatz_degree: None,
            invariant_order: None,
            exec: Exec::default(),
            last_stage: Stage::Optimal,
            reference: None,
            optimal: None,
            completeness_bound: None,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct SystemSummary {
    pub params: Vec<String>,
    pub independents: Vec<String>,
    pub dependents: Vec<String>,
    pub equations: Vec<String>,
    pub order: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DeterminingSummary {
    pub degree: u32,
    pub raw_count: usize,
    pub equation_count: usize,
    pub nullspace_dim: usize,
}

#[derive(Clone, Debug)]
pub struct GeneratorReport {
    pub label: String,
    pub field: VectorField,
    pub display: String,
    pub residual_zero: bool,
    /// Whether the field lies in the span of the computed solution space;
    /// `None` for the basis fields themselves.
    pub in_span: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct StructureReport {
    pub algebra: LieAlgebra,
    pub killing: Matrix,
    pub killing_det: Rational,
    pub solvable: bool,
    pub nilpotent: bool,
    pub semisimple: bool,
    pub derived_series: Vec<Subspace>,
    pub lower_central_series: Vec<Subspace>,
    pub center: Subspace,
    pub radical: Subspace,
}

impl StructureReport {
    pub fn of(algebra: LieAlgebra) -> StructureReport {
        let killing = algebra.killing_form();
        StructureReport {
            killing_det: linalg::determinant(&killing),
            solvable: algebra.is_solvable(),
            nilpotent: algebra.is_nilpotent(),
            semisimple: algebra.is_semisimple(),
            derived_series: algebra.derived_series(),
            lower_central_series: algebra.lower_central_series(),
            center: algebra.center(),
            radical: algebra.radical(),
            killing,
            algebra,
        }
    }
}

#[derive(Clone, Debug)]
pub struct AdjointReport {
    pub label: String,
    /// Row `j` is the image of basis element `j` under `Ad(exp(ε v))`.
    pub rows: Vec<Vec<ExpPoly>>,
}

#[derive(Clone, Debug)]
pub struct FlowReport {
    pub label: String,
    pub map: FlowMap,
    pub group_law: bool,
    /// `(a, b, F(aτ)∘F(bτ) = F((a+b)τ))` at sample rational pairs.
    pub group_law_samples: Vec<(Rational, Rational, bool)>,
    pub transformed: Option<Vec<crate::symbolic::Expr>>,
}

#[derive(Clone, Debug)]
pub struct CompositeReport {
    pub order: Vec<String>,
    pub functions: Vec<String>,
    pub solution: Vec<crate::symbolic::Expr>,
}

#[derive(Clone, Debug)]
pub struct InvariantReport {
    pub order: u32,
    pub weights: WeightSystem,
    pub lattice: InvariantLattice,
    pub completeness: Option<(i64, BoxCount)>,
    pub similarity: Vec<(String, SimilarityForm)>,
}

#[derive(Clone, Debug)]
pub struct OptimalSection {
    pub sample: Rational,
    pub report: OptimalReport,
    pub normal_forms: Vec<NormalFormReport>,
}

/// One comparison against a published value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub anchor: String,
    pub item: String,
    pub passed: bool,
}

/// Discrepancy or caveat; `anchor` names the published passage concerned.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Note {
    pub anchor: String,
    pub message: String,
}

#[derive(Clone, Debug)]
pub struct AnalysisReport {
    pub system: SystemSummary,
    pub determining: DeterminingSummary,
    /// Canonical basis of the computed symmetry space.
    pub basis: Vec<GeneratorReport>,
    /// Basis of the algebra analyzed downstream.
    pub generators: Vec<GeneratorReport>,
    pub structure: Option<StructureReport>,
    pub adjoint: Vec<AdjointReport>,
    pub flows: Vec<FlowReport>,
    pub composite: Option<CompositeReport>,
    pub invariants: Option<InvariantReport>,
    pub optimal: Vec<OptimalSection>,
    pub checks: Vec<Check>,
    pub notes: Vec<Note>,
}

impl AnalysisReport {
    /// Report holding only the structure of an abstract algebra.
    pub fn from_structure(algebra: LieAlgebra) -> AnalysisReport {
        AnalysisReport {
            system: SystemSummary::default(),
            determining: DeterminingSummary::default(),
            basis: Vec::new(),
            generators: Vec::new(),
            structure: Some(StructureReport::of(algebra)),
            adjoint: Vec::new(),
            flows: Vec::new(),
            composite: None,
            invariants: None,
            optimal: Vec::new(),
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    /// Generator labels, or the algebra's own when no fields are attached.
    pub fn labels(&self) -> Vec<String> {
        match (&self.structure, self.generators.is_empty()) {
            (Some(s), true) => s.algebra.labels().to_vec(),
            _ => self.generators.iter().map(|g| g.label.clone()).collect(),
        }
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn checks_for<'a>(&'a self, anchor: &'a str) -> impl Iterator<Item = &'a Check> {
        self.checks.iter().filter(move |c| c.anchor == anchor)
    }

    pub fn notes_for<'a>(&'a self, anchor: &'a str) -> impl Iterator<Item = &'a Note> {
        self.notes.iter().filter(move |n| n.anchor == anchor)
    }
}

/// Default names `f, g, h, …` for the unknown solution functions.
pub fn solution_names(count: usize) -> Vec<String> {
    const LETTERS: [&str; 5] = ["f", "g", "h", "k", "m"];
    (0..count)
        .map(|i| {
            LETTERS
                .get(i)
                .map(|s| s.to_string())
                .unwrap_or_else(|| format!("f{}", i + 1))
        })
        .collect()
}

pub(crate) struct Ctx<'a> {
    pub space: &'a JetSpace,
    pub doc: &'a SystemDocument,
    pub reference: Option<&'a Reference>,
    pub checks: Vec<Check>,
    pub notes: Vec<Note>,
}

impl Ctx<'_> {
    pub fn check(&mut self, anchor: &str, item: impl Into<String>, passed: bool) {
        self.checks.push(Check {
            anchor: anchor.to_string(),
            item: item.into(),
            passed,
        });
    }

    pub fn note(&mut self, anchor: &str, message: impl Into<String>) {
        self.notes.push(Note {
            anchor: anchor.to_string(),
            message: message.into(),
        });
    }

    fn anchor<T>(
        &self,
        pick: impl Fn(&Reference) -> &Option<Anchored<T>>,
        fallback: &str,
    ) -> String {
        self.reference
            .and_then(|r| pick(r).as_ref())
            .map(|a| a.anchor.clone())
            .unwrap_or_else(|| fallback.to_string())
    }
}

/// Checks a candidate field against the symmetry condition and the span
/// of `basis`.
pub fn check_generator(
    label: &str,
    field: &VectorField,
    sys: &PdeSystem,
    basis: &[VectorField],
) -> crate::Result<GeneratorReport> {
    let space = sys.space();
    Ok(GeneratorReport {
        label: label.to_string(),
        display: field.display(space),
        residual_zero: is_symmetry(field, sys)?,
        in_span: Some(span_coordinates(basis, field, space)?.is_some()),
        field: field.clone(),
    })
}

const GROUP_LAW_SAMPLES: [(i64, i64, i64, i64); 3] = [(1, 2, -3, 1), (2, 1, 5, 3), (-1, 4, 7, 1)];

pub fn run_pipeline(
    doc: &SystemDocument,
    opts: &PipelineOptions,
) -> Result<AnalysisReport, PipelineError> {
    use Stage::*;
    let space = doc.jet_space().at(Determining)?;
    let sys = doc.system().at(Determining)?;
    let mut ctx = Ctx {
        space: &space,
        doc,
        reference: opts.reference.as_ref(),
        checks: Vec::new(),
        notes: Vec::new(),
    };

    let degree = opts
        .ansatz_degree
        .or(doc.options.ansatz_degree)
        .unwrap_or(1);
    let ds = build_determining_with(opts.exec, &sys, degree).at(Determining)?;
    let fields = solve_determining_with(opts.exec, &ds, &sys).at(Determining)?;
    let determining = DeterminingSummary {
        degree,
        raw_count: ds.raw_count,
        equation_count: ds.equation_count(),
        nullspace_dim: fields.len(),
    };
    let basis: Vec<GeneratorReport> = fields
        .iter()
        .enumerate()
        .map(|(i, f)| {
            Ok(GeneratorReport {
                label: format!("e{}", i + 1),
                field: f.clone(),
                display: f.display(&space),
                residual_zero: is_symmetry(f, &sys)?,
                in_span: None,
            })
        })
        .collect::<crate::Result<_>>()
        .at(Determining)?;

    let gen_anchor = ctx.anchor(|r| &r.generators, "generators");
    let declared = doc.generator_fields().at(Determining)?;
    let mut generators = Vec::new();
    for (label, f) in &declared {
        generators.push(check_generator(label, f, &sys, &fields).at(Determining)?);
    }
    for g in &generators {
        if !g.residual_zero {
            ctx.note(
                &gen_anchor,
                format!(
                    "declared generator {} = {} is not a symmetry of the system",
                    g.label, g.display
                ),
            );
        } else if g.in_span == Some(false) {
            ctx.note(
                &gen_anchor,
                format!(
                    "declared generator {} lies outside the degree-{degree} solution space",
                    g.label
                ),
            );
        }
    }
    if !generators.is_empty() && generators.iter().all(|g| g.residual_zero) {
        let fs: Vec<VectorField> = generators.iter().map(|g| g.field.clone()).collect();
        let extra: Vec<&GeneratorReport> = basis
            .iter()
            .filter(|b| !matches!(span_coordinates(&fs, &b.field, &space), Ok(Some(_))))
            .collect();
        if !extra.is_empty() {
            ctx.note(
                &gen_anchor,
                format!(
                    "solution space has dimension {} but the declared generators span less; additional directions: {}",
                    fields.len(),
                    extra.iter().map(|b| b.display.clone()).collect::<Vec<_>>().join("; ")
                ),
            );
        }
    } else {
        if !generators.is_empty() {
            ctx.note(
                &gen_anchor,
                "analysis continues with the computed basis instead of the declared generators",
            );
        }
        generators = basis.clone();
    }
    if let Some(r) = opts.reference.as_ref().and_then(|r| r.generators.as_ref()) {
        for label in &r.body.labels {
            let ok = generators
                .iter()
                .find(|g| &g.label == label)
                .is_some_and(|g| g.residual_zero && g.in_span == Some(true));
            ctx.check(
                &r.anchor,
                format!("{label} is a symmetry in the computed span"),
                ok,
            );
        }
    }

    let mut report = AnalysisReport {
        system: SystemSummary {
            params: doc.params.iter().map(|p| p.name.clone()).collect(),
            independents: doc.independents.clone(),
            dependents: doc.dependents.clone(),
            equations: doc
                .equations
                .iter()
                .map(|e| format!("{} = {}", e.lhs.source(), e.rhs.source()))
                .collect(),
            order: doc.order(),
        },
        determining,
        basis,
        generators,
        structure: None,
        adjoint: Vec::new(),
        flows: Vec::new(),
        composite: None,
        invariants: None,
        optimal: Vec::new(),
        checks: Vec::new(),
        notes: Vec::new(),
    };
    if opts.last_stage < Structure {
        return Ok(finish(report, ctx));
    }

    let fs: Vec<VectorField> = report.generators.iter().map(|g| g.field.clone()).collect();
    let labels: Vec<String> = report.generators.iter().map(|g| g.label.clone()).collect();
    let algebra = LieAlgebra::from_fields(&space, &fs, labels.clone()).at(Structure)?;
    let structure = StructureReport::of(algebra);
    compare::structure(&mut ctx, &structure).at(Structure)?;
    let alg = structure.algebra.clone();
    report.structure = Some(structure);
    if opts.last_stage < Adjoint {
        return Ok(finish(report, ctx));
    }

    let adj_anchor = ctx.anchor(|r| &r.adjoint, "adjoint");
    for (i, label) in labels.iter().enumerate() {
        match adjoint::ad_exp(&alg, i) {
            Ok(m) => report.adjoint.push(AdjointReport {
                label: label.clone(),
                rows: adjoint::row_images(&m),
            }),
            Err(e @ Error::UnsupportedSpectrum { .. }) => {
                ctx.note(&adj_anchor, format!("Ad({label}) skipped: {e}"))
            }
            Err(e) => return Err(e).at(Adjoint),
        }
    }
    compare::adjoint(&mut ctx, &report.adjoint).at(Adjoint)?;
    if opts.last_stage < Flows {
        return Ok(finish(report, ctx));
    }

    let flow_anchor = ctx.anchor(|r| &r.flows, "flows");
    let names = opts
        .reference
        .as_ref()
        .and_then(|r| r.transformed.as_ref())
        .map(|t| t.body.functions.clone())
        .unwrap_or_else(|| solution_names(doc.dependents.len()));
    for (label, f) in labels.iter().zip(&fs) {
        let map = match flow(f, &space) {
            Ok(m) => m,
            Err(e @ (Error::NotAffine(_) | Error::UnsupportedSpectrum { .. })) => {
                ctx.note(&flow_anchor, format!("flow of {label} skipped: {e}"));
                continue;
            }
            Err(e) => return Err(e).at(Flows),
        };
        let group_law_samples = GROUP_LAW_SAMPLES
            .iter()
            .map(|&(a, b, c, d)| {
                let (x, y) = (rat(a, b), rat(c, d));
                let ok = map.satisfies_group_law_at(&x, &y);
                (x, y, ok)
            })
            .collect();
        let transformed = match transform_solution(&map, &map.flow_inverse(), &space, &names) {
            Ok(t) => Some(t),
            Err(Error::Unsupported(msg)) => {
                ctx.note(
                    &flow_anchor,
                    format!("transformed solution for {label} skipped: {msg}"),
                );
                None
            }
            Err(e) => return Err(e).at(Flows),
        };
        report.flows.push(FlowReport {
            label: label.clone(),
            group_law: map.satisfies_group_law(),
            group_law_samples,
            transformed,
            map,
        });
    }
    let order: Vec<String> = opts
        .reference
        .as_ref()
        .and_then(|r| r.composite.as_ref())
        .map(|c| c.body.order.clone())
        .unwrap_or_else(|| report.flows.iter().map(|f| f.label.clone()).collect());
    let chain: Option<Vec<FlowMap>> = order
        .iter()
        .map(|l| {
            report
                .flows
                .iter()
                .find(|f| &f.label == l)
                .map(|f| f.map.clone())
        })
        .collect();
    if let Some((map, inverse)) = chain.as_deref().and_then(compose_chain) {
        match transform_solution(&map, &inverse, &space, &names) {
            Ok(solution) => {
                report.composite = Some(CompositeReport {
                    order,
                    functions: names.clone(),
                    solution,
                })
            }
            Err(Error::Unsupported(msg)) => ctx.note(
                &flow_anchor,
                format!("composite transformation skipped: {msg}"),
            ),
            Err(e) => return Err(e).at(Flows),
        }
    }
    compare::flows(&mut ctx, &report.flows, report.composite.as_ref()).at(Flows)?;
    if opts.last_stage < Invariants {
        return Ok(finish(report, ctx));
    }

    let inv_order = opts
        .invariant_order
        .or(doc.options.invariant_order)
        .unwrap_or(1);
    let inv_anchor = ctx.anchor(|r| &r.invariants, "invariants");
    match weight_system(&fs, &space, inv_order) {
        Ok(weights) => {
            let lattice = monomial_invariants(&weights);
            let completeness = opts.completeness_bound.map(|b| {
                (
                    b,
                    brute_force_completeness(opts.exec, &weights, &lattice, b),
                )
            });
            let mut similarity = Vec::new();
            let sim_names = solution_names(doc.dependents.len());
            for (label, f) in labels.iter().zip(&fs) {
                match similarity_form(f, &space, &sim_names) {
                    Ok(s) => similarity.push((label.clone(), s)),
                    Err(e @ (Error::UnsupportedGeneratorShape { .. } | Error::Unsupported(_))) => {
                        ctx.note(
                            &inv_anchor,
                            format!("similarity form of {label} skipped: {e}"),
                        )
                    }
                    Err(e) => return Err(e).at(Invariants),
                }
            }
            let inv = InvariantReport {
                order: inv_order,
                weights,
                lattice,
                completeness,
                similarity,
            };
            compare::invariants(&mut ctx, &inv, &fs, &labels).at(Invariants)?;
            report.invariants = Some(inv);
        }
        Err(e @ Error::UnsupportedGeneratorShape { .. }) => {
            ctx.note(&inv_anchor, format!("monomial invariants skipped: {e}"))
        }
        Err(e) => return Err(e).at(Invariants),
    }
    if opts.last_stage < Optimal {
        return Ok(finish(report, ctx));
    }

    if let Some(input) = &opts.optimal {
        report.optimal = optimal_sections(&alg, input, &mut ctx).at(Optimal)?;
    }
    Ok(finish(report, ctx))
}

fn optimal_sections(
    alg: &LieAlgebra,
    input: &OptimalInput,
    ctx: &mut Ctx<'_>,
) -> crate::Result<Vec<OptimalSection>> {
    let n = alg.dim();
    let mut out = Vec::new();
    for sample in input.sample_values()? {
        let entries = input.entries_at(n, &sample)?;
        let reps = input.representatives_at(n, &sample)?;
        let report = verify_optimal_table(alg, &entries, &reps);
        let normal_forms = reps
            .iter()
            .map(|r| normal_form_1d(alg, r))
            .collect::<crate::Result<Vec<_>>>()?;
        for e in &report.entries {
            ctx.check(
                "optimal system",
                format!("{} closed (parameters = {sample})", e.label),
                e.closed,
            );
            if let Some((a, b, c)) = &e.failure {
                ctx.note(
                    "optimal system",
                    format!(
                        "{} at parameters = {sample} is not a subalgebra: [{}, {}] = {} lies outside the span",
                        e.label,
                        combination_text(a, alg.labels()),
                        combination_text(b, alg.labels()),
                        combination_text(c, alg.labels())
                    ),
                );
            }
            if e.dim < e.listed {
                ctx.note(
                    "optimal system",
                    format!(
                        "{} at parameters = {sample} has dimension {} < {} listed",
                        e.label, e.dim, e.listed
                    ),
                );
            }
        }
        if let Some(&(i, j)) = report.indistinct.first() {
            ctx.note(
                "optimal system",
                format!(
                    "{} pairs of entries share all computed conjugacy invariants at parameters = {sample}, e.g. {} and {}; these invariants do not separate them",
                    report.indistinct.len(),
                    report.entries[i].label,
                    report.entries[j].label
                ),
            );
        }
        if !report.uncovered.is_empty() {
            let names: Vec<&str> = report
                .uncovered
                .iter()
                .map(|&k| alg.labels()[k].as_str())
                .collect();
            ctx.note(
                "optimal system",
                format!(
                    "one-dimensional list does not cover {} at parameters = {sample} (no representative with a matching invariant fingerprint)",
                    names.join(", ")
                ),
            );
        }
        out.push(OptimalSection {
            sample,
            report,
            normal_forms,
        });
    }
    Ok(out)
}

/// `2*v3 - v1` style text for a coordinate vector.
pub fn combination_text(a: &[Rational], labels: &[String]) -> String {
    use crate::symbolic::{Expr, Symbol};
    let e = a
        .iter()
        .zip(labels)
        .filter(|(c, _)| !c.is_zero())
        .fold(Expr::zero(), |acc, (c, l)| {
            acc + Expr::rational(c.clone()) * Expr::sym(&Symbol::parameter(l))
        });
    e.normalize()
        .map(|e| e.to_string())
        .unwrap_or_else(|_| "?".into())
}

/// `span{v1, v2, v3}` or `0`.
pub fn span_text(s: &Subspace, labels: &[String]) -> String {
    if s.is_zero() {
        return "0".into();
    }
    let parts: Vec<String> = s
        .basis()
        .iter()
        .map(|v| combination_text(v, labels))
        .collect();
    format!("span{{{}}}", parts.join(", "))
}

fn finish(mut report: AnalysisReport, ctx: Ctx<'_>) -> AnalysisReport {
    report.checks = ctx.checks;
    report.notes = ctx.notes;
    report
}
