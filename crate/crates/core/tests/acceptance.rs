//! Acceptance run: one PASS/FAIL line per criterion. Values derived by
//! the library are re-derived here by independent means where possible.
//!
//! Exits nonzero when a criterion fails that is not listed in
//! `EXPECTED_RED`, or when a listed one unexpectedly passes.

#![allow(clippy::needless_range_loop)]

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use common::*;
use liesym::adjoint::{ad_exp, affine_parts, ExpPoly};
use liesym::invariants::{
    brute_force_completeness, monomial_invariants, verify_invariant, weight_system,
};
use liesym::lie::Subspace;
use liesym::linalg::{self, Matrix};
use liesym::optimal::{fingerprint, normal_form_1d};
use liesym::parallel::Exec;
use liesym::parse::parse_field;
use liesym::prolong::{is_symmetry, span_coordinates, VectorField};
use liesym::rational::{int, parse_rational, Rational};
use liesym::report::parse_combination;
use liesym::symbolic::Poly;
use num_traits::Zero;
use proptest::strategy::Strategy;
use proptest::test_runner::{Config, TestRunner};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Criteria that cannot hold for the published data, with the reason.
const EXPECTED_RED: &[(u32, &str)] = &[(
    9,
    "the listed two-dimensional entry <b1*v2 + b2*v3, v1 + 5/2*b3*(v4 + v5)> is not closed under the bracket",
)];

const SEED: u64 = 0x5eed_2024;

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

const PRINTED_FIELDS: [(&str, &str); 5] = [
    ("v1", "D(x)"),
    ("v2", "D(y)"),
    ("v3", "D(p)"),
    ("v4", "x*D(x) + u*D(u) + 2*p*D(p)"),
    ("v5", "y*D(y) - 2*u*D(u) - v*D(v) - 4*p*D(p)"),
];

fn printed_fields() -> Vec<VectorField> {
    let d = doc();
    PRINTED_FIELDS
        .iter()
        .map(|(_, t)| {
            let coeffs = parse_field(t, &d)
                .unwrap()
                .iter()
                .map(|e| e.to_poly().unwrap())
                .collect();
            VectorField::new(coeffs)
        })
        .collect()
}

fn labels() -> Vec<String> {
    PRINTED_FIELDS.iter().map(|(l, _)| l.to_string()).collect()
}

fn criterion_1() -> Outcome {
    let r = golden();
    let basis = solved_basis();
    for ((label, _), f) in PRINTED_FIELDS.iter().zip(printed_fields()) {
        ensure(
            is_symmetry(&f, system()).unwrap(),
            format!("{label}: residual is not zero"),
        )?;
        let coords = span_coordinates(&basis, &f, space()).unwrap();
        ensure(
            coords.is_some(),
            format!("{label}: outside the computed nullspace span"),
        )?;
        let g = r
            .generators
            .iter()
            .find(|g| &g.label == label)
            .ok_or(format!("{label} missing"))?;
        ensure(
            g.field == f,
            format!("{label}: declared field differs from the printed one"),
        )?;
        ensure(
            g.residual_zero && g.in_span == Some(true),
            format!("{label}: report disagrees"),
        )?;
    }
    Ok(format!(
        "nullspace of dimension {} contains v1..v5, each with zero residual",
        r.determining.nullspace_dim
    ))
}

fn combination_field(coeffs: &[Rational], fields: &[VectorField]) -> VectorField {
    let c: Vec<Poly> = coeffs.iter().map(|q| Poly::constant(q.clone())).collect();
    VectorField::combination(space(), fields, &c)
}

fn criterion_2() -> Outcome {
    let reference = reference();
    let rows = &reference.commutators.as_ref().unwrap().body.rows;
    let fields = printed_fields();
    let labels = labels();
    let alg = algebra();
    let mut count = 0;
    for i in 0..5 {
        for j in 0..5 {
            let want = parse_combination(&rows[i][j], &labels).unwrap();
            let direct = fields[i].bracket(&fields[j], space()).unwrap();
            ensure(
                direct == combination_field(&want, &fields),
                format!(
                    "[{}, {}] of the vector fields is not {}",
                    labels[i], labels[j], rows[i][j]
                ),
            )?;
            ensure(
                alg.bracket_basis(i, j) == want.as_slice(),
                format!("structure constant [{}, {}]", labels[i], labels[j]),
            )?;
            count += 1;
        }
    }
    Ok(format!(
        "{count} entries equal the vector-field brackets exactly"
    ))
}

/// Killing form from raw traces of ad matrices built here.
fn killing_oracle() -> Matrix {
    let alg = algebra();
    let n = alg.dim();
    let ad = |i: usize| -> Matrix {
        let mut m = linalg::zeros(n, n);
        for j in 0..n {
            for k in 0..n {
                m[k][j] = alg.constant(i, j, k).clone();
            }
        }
        m
    };
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| linalg::trace(&linalg::mat_mul(&ad(i), &ad(j))))
                .collect()
        })
        .collect()
}

fn criterion_3() -> Outcome {
    let reference = reference();
    let printed: Matrix = reference
        .killing
        .as_ref()
        .unwrap()
        .body
        .matrix
        .iter()
        .map(|r| r.iter().map(|x| parse_rational(x).unwrap()).collect())
        .collect();
    let oracle = killing_oracle();
    ensure(
        oracle == printed,
        "traced Killing form differs from the printed matrix",
    )?;
    let s = golden().structure.as_ref().unwrap();
    ensure(s.killing == printed, "library Killing form differs")?;
    ensure(
        linalg::determinant(&oracle).is_zero(),
        "determinant is not zero",
    )?;
    ensure(!s.semisimple, "reported semisimple")?;
    ensure(s.solvable, "not reported solvable")?;
    Ok("matrix matches, determinant 0, solvable and not semisimple".into())
}

fn criterion_4() -> Outcome {
    let alg = algebra();
    let n = alg.dim();
    let derived = |s: &Subspace| -> Subspace {
        let mut vs = Vec::new();
        for a in s.basis() {
            for b in s.basis() {
                vs.push(alg.bracket(a, b));
            }
        }
        Subspace::span(n, &vs)
    };
    let g1 = derived(&Subspace::full(n));
    let g2 = derived(&g1);
    ensure(
        g1 == Subspace::coordinate(n, &[0, 1, 2]),
        "first derived algebra is not span{v1, v2, v3}",
    )?;
    ensure(g2.is_zero(), "second derived algebra is not zero")?;
    let r = golden();
    let s = r.structure.as_ref().unwrap();
    ensure(
        s.derived_series == vec![Subspace::full(n), g1, g2],
        "library series differs",
    )?;
    let note = r
        .notes_for("chain of ideals")
        .next()
        .ok_or("no discrepancy note for the printed chain")?;
    Ok(format!(
        "g' = span{{v1, v2, v3}}, g'' = 0; note: {}",
        note.message
    ))
}

/// `C(ε) = exp(−ε A)` is the solution of `C' = −A C`, `C(0) = I`.
fn solves_adjoint_ode(i: usize) -> bool {
    let alg = algebra();
    let n = alg.dim();
    let a = alg.ad_basis(i);
    let c = ad_exp(alg, i).unwrap();
    for r in 0..n {
        for col in 0..n {
            let mut rhs = ExpPoly::zero();
            for k in 0..n {
                rhs = &rhs + &c[k][col].scale(&-a[r][k].clone());
            }
            if c[r][col].derivative() != rhs {
                return false;
            }
            let id = if r == col { int(1) } else { int(0) };
            if c[r][col].at_zero() != id {
                return false;
            }
        }
    }
    true
}

fn criterion_5() -> Outcome {
    for i in 0..5 {
        ensure(
            solves_adjoint_ode(i),
            format!("Ad(v{}) does not solve the defining ODE", i + 1),
        )?;
    }
    let r = golden();
    let failed: Vec<&str> = r
        .checks_for("adjoint matrices")
        .filter(|c| !c.passed)
        .map(|c| c.item.as_str())
        .collect();
    ensure(
        failed == ["Ad(v4)"],
        format!("unexpected mismatches: {failed:?}"),
    )?;
    let notes: Vec<_> = r.notes_for("adjoint matrices").collect();
    ensure(
        notes.len() == 1
            && notes[0].message.matches("printed").count() == 1
            && notes[0].message.contains("(3, 4)"),
        "Ad(v4) should differ only in entry (3, 4)",
    )?;
    Ok(format!(
        "M1, M2, M3, M5 exact; flagged: {}",
        notes[0].message
    ))
}

fn criterion_6() -> Outcome {
    let r = golden();
    ensure(
        r.checks_for("one-parameter groups generated by the base")
            .all(|c| c.passed),
        "a flow differs from the printed group",
    )?;
    let mut rng = StdRng::seed_from_u64(SEED);
    for (f, field) in r.flows.iter().zip(printed_fields()) {
        ensure(
            f.group_law,
            format!("group law fails symbolically for {}", f.label),
        )?;
        ensure(
            f.map.generator() == affine_parts(&field, space()).unwrap(),
            format!("G({}) has the wrong generator", f.label),
        )?;
        for _ in 0..3 {
            let a = Rational::new(
                rng.random_range(-9i64..=9).into(),
                rng.random_range(1i64..=6).into(),
            );
            let b = Rational::new(
                rng.random_range(-9i64..=9).into(),
                rng.random_range(1i64..=6).into(),
            );
            ensure(
                f.map.satisfies_group_law_at(&a, &b),
                format!("group law fails for {} at ({a}, {b})", f.label),
            )?;
        }
    }
    Ok("G1..G5 match; group law holds symbolically and at 3 random pairs each".into())
}

fn criterion_7() -> Outcome {
    let r = golden();
    let checks: Vec<_> = r.checks_for("so are the functions").collect();
    ensure(
        checks.len() == 5 && checks.iter().all(|c| c.passed),
        "transformed solutions differ",
    )?;
    ensure(r.composite.is_some(), "composite not computed")?;
    ensure(
        r.checks_for("general group of the symmetries")
            .all(|c| c.passed),
        "composite diff missing",
    )?;
    let diff = r.notes_for("general group of the symmetries").count();
    let orient = r.notes_for("so are the functions").count();
    Ok(format!(
        "G1..G5 reproduced ({orient} orientation note); composite diffed ({diff} discrepancy note)"
    ))
}

fn criterion_8() -> Outcome {
    let r = golden();
    let full: Vec<_> = r
        .checks_for("differential invariants of the full algebra")
        .collect();
    ensure(
        full.len() == 21,
        format!("expected 21 invariant checks, found {}", full.len()),
    )?;
    if let Some(c) = full.iter().find(|c| !c.passed) {
        return Err(format!("not invariant: {}", c.item));
    }
    let reference = reference();
    let fields = printed_fields();
    let d = doc();
    let scope = liesym::parse::Scope::of(&d);
    for list in [
        &reference.invariants.as_ref().unwrap().body.first_order,
        &reference.invariants.as_ref().unwrap().body.second_order,
    ] {
        for t in list {
            let e = liesym::parse::parse_expr(t, &scope).unwrap();
            ensure(
                verify_invariant(&e, &fields, space()).unwrap(),
                format!("oracle rejects {t}"),
            )?;
        }
    }
    let rows: Vec<_> = r.checks_for("invariants of single generators").collect();
    let listed: usize = reference
        .invariant_rows
        .as_ref()
        .unwrap()
        .body
        .rows
        .iter()
        .map(|r| r.entries.len())
        .sum();
    ensure(
        rows.len() == listed,
        "not every single-generator entry was checked",
    )?;
    let failed: Vec<&str> = rows
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.item.as_str())
        .collect();

    let ws = weight_system(&fields, space(), 1).unwrap();
    let lattice = monomial_invariants(&ws);
    for m in lattice.generators() {
        ensure(
            verify_invariant(&m.to_expr(), &fields, space()).unwrap(),
            "lattice generator not invariant",
        )?;
    }
    let count = brute_force_completeness(Exec::default(), &ws, &lattice, 4);
    ensure(
        count.outside_lattice == 0,
        format!(
            "{} zero-weight monomials outside the lattice",
            count.outside_lattice
        ),
    )?;
    Ok(format!(
        "21/21 invariants verified; single-generator rows {}/{} pass (fail: {}); box [-4, 4]^{}: {} zero-weight, 0 outside",
        rows.len() - failed.len(),
        rows.len(),
        failed.join(", "),
        ws.free().len(),
        count.zero_weight
    ))
}

fn criterion_9() -> Outcome {
    let r = golden();
    let alg = algebra();
    let mut rng = StdRng::seed_from_u64(SEED);
    let mut a: Vec<Rational> = (0..5)
        .map(|_| Rational::new(rng.random_range(-5i64..=5).into(), 1.into()))
        .collect();
    a[3] = int(1);
    let before = fingerprint(alg, &a);
    for _ in 0..100 {
        let i = rng.random_range(0..5usize);
        let v = Rational::new(
            rng.random_range(-7i64..=7).into(),
            rng.random_range(1i64..=5).into(),
        );
        a = adjoint_step(alg, i, &v, &a);
        ensure(
            fingerprint(alg, &a) == before,
            "fingerprint changed along the adjoint chain",
        )?;
    }
    let nf = normal_form_1d(alg, &[int(1), int(0), int(0), int(1), int(0)]).unwrap();
    ensure(
        nf.output == [int(0), int(0), int(0), int(1), int(0)],
        "v1 + v4 does not normalize to v4",
    )?;
    for o in &r.optimal {
        ensure(
            o.report.uncovered.contains(&3),
            "coverage checker does not flag v4",
        )?;
    }
    let open: Vec<String> = r
        .checks_for("optimal system")
        .filter(|c| !c.passed)
        .map(|c| c.item.clone())
        .collect();
    let total = r.checks_for("optimal system").count();
    if open.is_empty() {
        Ok(format!("{total} entry checks closed; fingerprint invariant over 100 steps; v4 flagged as uncovered"))
    } else {
        Err(format!(
            "{} of {total} entry checks fail closure: {} (fingerprint invariance over 100 steps and the v4 coverage flag hold)",
            open.len(),
            open.join("; ")
        ))
    }
}

fn run_property<S: Strategy>(
    name: &str,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), proptest::test_runner::TestCaseError>,
) -> Result<(), String> {
    let config = Config {
        failure_persistence: None,
        ..Config::with_cases(128)
    };
    let mut runner = TestRunner::new(config);
    runner
        .run(&strategy, test)
        .map_err(|e| format!("{name}: {e}"))
}

fn criterion_10() -> Outcome {
    run_property("normalize idempotence", expr(), |e| {
        normalize_idempotent(&e)
    })?;
    run_property(
        "Leibniz and linearity",
        (poly(), poly(), small_rational()),
        |(a, b, c)| leibniz_linearity(&a, &b, &c),
    )?;
    run_property("D_x D_y commutation", poly(), |a| {
        total_derivatives_commute(&a)
    })?;
    run_property(
        "Jacobi at construction",
        (
            proptest::collection::vec(small_rational(), 10),
            proptest::collection::vec(nonzero_rational(), 5),
            (0usize..5, 0usize..5, 0usize..5),
            nonzero_rational(),
        ),
        |(l, d, s, delta)| jacobi_at_construction(&l, &d, s, &delta),
    )?;
    run_property(
        "bracket closure",
        (rational_vector(6), rational_vector(6)),
        |(a, b)| bracket_closure(&a, &b),
    )?;
    run_property(
        "normal-form replay and idempotence",
        rational_vector(5),
        |a| normal_form_replay(&a),
    )?;
    Ok("six suites, 128 cases each".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, "generator recovery", criterion_1),
        (2, "commutator table", criterion_2),
        (3, "Killing form", criterion_3),
        (4, "derived series", criterion_4),
        (5, "adjoint matrices", criterion_5),
        (6, "flows", criterion_6),
        (7, "transformed solutions", criterion_7),
        (8, "invariants", criterion_8),
        (9, "optimal-system verification", criterion_9),
        (10, "property suites", criterion_10),
    ];
    let mut unexpected = 0;
    for (n, name, f) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let red = EXPECTED_RED.iter().find(|(k, _)| *k == n);
        match (&outcome, red) {
            (Ok(detail), None) => println!("criterion {n:>2} {name}: PASS ({detail})"),
            (Ok(detail), Some(_)) => {
                unexpected += 1;
                println!(
                    "criterion {n:>2} {name}: PASS, but listed as expected to fail ({detail})"
                );
            }
            (Err(why), Some((_, reason))) => {
                println!("criterion {n:>2} {name}: FAIL (known: {reason}) {why}")
            }
            (Err(why), None) => {
                unexpected += 1;
                println!("criterion {n:>2} {name}: FAIL {why}");
            }
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
