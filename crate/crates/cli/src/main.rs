use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use liesym::adjoint::ParamValue;
use liesym::lie::LieAlgebra;
use liesym::optimal::normal_form_1d;
use liesym::parse::{parse_field, parse_system, SystemDocument};
use liesym::prolong::VectorField;
use liesym::rational::{parse_rational, Rational};
use liesym::report::{
    check_generator, combination_text, emit, generator_json, normal_form_json, run_pipeline,
    AnalysisReport, Format, OptimalInput, PipelineOptions, Reference, Section, Stage,
    StructureInput,
};

#[derive(Parser)]
#[command(
    name = "liesym",
    version,
    about = "Lie point symmetries of polynomial PDE systems"
)]
struct Cli {
    /// System description file.
    #[arg(global = true, long, short = 's')]
    system: Option<PathBuf>,
    /// Degree of the polynomial ansatz for the infinitesimals.
    #[arg(global = true, long, default_value_t = 1)]
    ansatz_degree: u32,
    #[arg(global = true, long, value_enum, default_value_t = ReportFormat::Text)]
    report: ReportFormat,
    /// Write the report here instead of standard output.
    #[arg(global = true, long)]
    out: Option<PathBuf>,
    /// Published values to compare against (JSON).
    #[arg(global = true, long)]
    reference: Option<PathBuf>,
    /// Run sequentially even when built with the parallel feature.
    #[arg(global = true, long)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the determining system and list the symmetry generators.
    Symmetries,
    /// Commutators, Killing form and series of the symmetry algebra.
    Structure {
        /// Read structure constants instead of computing them from a system.
        #[arg(long)]
        constants: Option<PathBuf>,
    },
    /// Adjoint representation matrices.
    Adjoint,
    /// One-parameter groups, group law checks and transformed solutions.
    Flows,
    /// Monomial differential invariants and similarity forms.
    Invariants {
        #[arg(long, default_value_t = 1)]
        order: u32,
        /// Enumerate exponent vectors in [-B, B] to check lattice completeness.
        #[arg(long)]
        completeness_bound: Option<i64>,
    },
    /// Check candidate vector fields against the symmetry condition.
    CheckGenerator {
        /// Field such as `x*D(x) + u*D(u)`, or coefficients in coordinate order.
        #[arg(long, required = true)]
        field: Vec<String>,
    },
    /// Greedy adjoint normal form of a one-dimensional subalgebra.
    NormalForm {
        /// Coefficients in the generator basis, comma separated.
        #[arg(long)]
        vector: String,
        #[arg(long)]
        constants: Option<PathBuf>,
    },
    /// Verify a list of subalgebras (JSON) against the symmetry algebra.
    VerifyOptimal {
        #[arg(long)]
        file: PathBuf,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

impl Cli {
    fn document(&self) -> Result<SystemDocument> {
        let Some(path) = &self.system else {
            bail!("a system file is required (--system PATH)");
        };
        parse_system(&read(path)?).with_context(|| format!("parsing {}", path.display()))
    }

    fn options(&self, last_stage: Stage) -> Result<PipelineOptions> {
        let reference = match &self.reference {
            Some(p) => Some(
                Reference::from_json(&read(p)?)
                    .with_context(|| format!("parsing {}", p.display()))?,
            ),
            None => None,
        };
        let mut opts = PipelineOptions {
            ansatz_degree: Some(self.ansatz_degree),
            last_stage,
            reference,
            ..PipelineOptions::default()
        };
        if self.sequential {
            opts.exec = liesym::parallel::Exec::Sequential;
        }
        Ok(opts)
    }

    fn pipeline(&self, opts: &PipelineOptions) -> Result<AnalysisReport> {
        Ok(run_pipeline(&self.document()?, opts)?)
    }

    fn format(&self) -> Format {
        match self.report {
            ReportFormat::Text => Format::Text,
            ReportFormat::Json => Format::Json,
        }
    }

    fn algebra(&self, constants: &Option<PathBuf>) -> Result<LieAlgebra> {
        match constants {
            Some(p) => {
                let input = StructureInput::from_json(&read(p)?)
                    .with_context(|| format!("parsing {}", p.display()))?;
                Ok(input.algebra()?)
            }
            None => {
                let r = self.pipeline(&self.options(Stage::Structure)?)?;
                Ok(r.structure.context("no algebra was formed")?.algebra)
            }
        }
    }
}

fn report_text(cli: &Cli, report: &AnalysisReport, sections: &[Section]) -> String {
    emit(report, cli.format(), sections)
}

fn run(cli: &Cli) -> Result<String> {
    use Section::*;
    match &cli.command {
        Command::Symmetries => {
            let r = cli.pipeline(&cli.options(Stage::Determining)?)?;
            Ok(report_text(cli, &r, &[Symmetries, Notes]))
        }
        Command::Structure { constants: Some(p) } => {
            let r = AnalysisReport::from_structure(cli.algebra(&Some(p.clone()))?);
            Ok(report_text(cli, &r, &[Structure]))
        }
        Command::Structure { constants: None } => {
            let r = cli.pipeline(&cli.options(Stage::Structure)?)?;
            Ok(report_text(cli, &r, &[Symmetries, Structure, Notes]))
        }
        Command::Adjoint => {
            let r = cli.pipeline(&cli.options(Stage::Adjoint)?)?;
            Ok(report_text(cli, &r, &[Symmetries, Adjoint, Notes]))
        }
        Command::Flows => {
            let r = cli.pipeline(&cli.options(Stage::Flows)?)?;
            Ok(report_text(cli, &r, &[Symmetries, Flows, Notes]))
        }
        Command::Invariants {
            order,
            completeness_bound,
        } => {
            let mut opts = cli.options(Stage::Invariants)?;
            opts.invariant_order = Some(*order);
            opts.completeness_bound = *completeness_bound;
            let r = cli.pipeline(&opts)?;
            Ok(report_text(cli, &r, &[Symmetries, Invariants, Notes]))
        }
        Command::CheckGenerator { field } => check_fields(cli, field),
        Command::NormalForm { vector, constants } => {
            let alg = cli.algebra(constants)?;
            let a = vector
                .split(',')
                .map(|t| parse_rational(t.trim()).with_context(|| format!("bad coefficient {t:?}")))
                .collect::<Result<Vec<Rational>>>()?;
            if a.len() != alg.dim() {
                bail!("expected {} coefficients, got {}", alg.dim(), a.len());
            }
            let nf = normal_form_1d(&alg, &a)?;
            let labels = alg.labels();
            Ok(match cli.report {
                ReportFormat::Json => format!(
                    "{}\n",
                    serde_json::to_string_pretty(&normal_form_json(&nf, labels))?
                ),
                ReportFormat::Text => {
                    let mut out = format!(
                        "normal form of {} is {}\n",
                        combination_text(&nf.input, labels),
                        combination_text(&nf.output, labels)
                    );
                    for s in &nf.steps {
                        out.push_str(&format!(
                            "  Ad({}) at {}: {} -> {}\n",
                            labels[s.generator],
                            parameter_text(&s.parameter),
                            combination_text(&s.before, labels),
                            combination_text(&s.after, labels)
                        ));
                    }
                    if nf.sign_flipped {
                        out.push_str("  sign flipped\n");
                    }
                    out
                }
            })
        }
        Command::VerifyOptimal { file } => {
            let mut opts = cli.options(Stage::Optimal)?;
            opts.optimal = Some(
                OptimalInput::from_json(&read(file)?)
                    .with_context(|| format!("parsing {}", file.display()))?,
            );
            let r = cli.pipeline(&opts)?;
            Ok(report_text(cli, &r, &[Optimal, Notes]))
        }
    }
}

fn parameter_text(p: &ParamValue) -> String {
    match p {
        ParamValue::Eps(x) => format!("eps = {x}"),
        ParamValue::ExpOf(x) => format!("exp(eps) = {x}"),
    }
}

fn check_fields(cli: &Cli, fields: &[String]) -> Result<String> {
    let doc = cli.document()?;
    let r = run_pipeline(&doc, &cli.options(Stage::Determining)?)?;
    let sys = doc.system()?;
    let basis: Vec<VectorField> = r.basis.iter().map(|g| g.field.clone()).collect();
    let mut reports = Vec::new();
    for (k, text) in fields.iter().enumerate() {
        let coeffs = parse_field(text, &doc)
            .with_context(|| format!("parsing field {text:?}"))?
            .iter()
            .map(|e| e.to_poly())
            .collect::<Result<Vec<_>, _>>()?;
        reports.push(check_generator(
            &format!("w{}", k + 1),
            &VectorField::new(coeffs),
            &sys,
            &basis,
        )?);
    }
    Ok(match cli.report {
        ReportFormat::Json => {
            let v: Vec<_> = reports.iter().map(generator_json).collect();
            format!("{}\n", serde_json::to_string_pretty(&v)?)
        }
        ReportFormat::Text => reports
            .iter()
            .map(|g| {
                format!(
                    "{} = {}: {}, {}\n",
                    g.label,
                    g.display,
                    if g.residual_zero {
                        "symmetry"
                    } else {
                        "not a symmetry"
                    },
                    if g.in_span == Some(true) {
                        "in the computed span"
                    } else {
                        "outside the computed span"
                    }
                )
            })
            .collect(),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|text| match &cli.out {
        Some(p) => fs::write(p, &text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
