//! Fixtures, strategies and property checks shared by the integration
//! test targets.
#![allow(dead_code, clippy::needless_range_loop)]

use std::sync::OnceLock;

use liesym::adjoint::{adjoint_apply, ParamValue};
use liesym::jet::{JetSpace, PdeSystem};
use liesym::lie::LieAlgebra;
use liesym::linalg;
use liesym::optimal::{fingerprint, normal_form_1d, replay};
use liesym::parse::{parse_system, SystemDocument};
use liesym::prolong::{is_symmetry, span_coordinates, VectorField};
use liesym::rational::{rat, Rational};
use liesym::report::{run_pipeline, AnalysisReport, OptimalInput, PipelineOptions, Reference};
use liesym::symbolic::{Expr, Poly, Symbol};
use num_traits::Zero;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub const SYSTEM: &str = include_str!("../../fixtures/boundary_layer.sys");
pub const PRINTED_SYSTEM: &str = include_str!("../../fixtures/boundary_layer_printed.sys");
pub const REFERENCE: &str = include_str!("../../fixtures/boundary_layer_reference.json");
pub const OPTIMAL: &str = include_str!("../../fixtures/optimal_table.json");

pub fn doc() -> SystemDocument {
    parse_system(SYSTEM).expect("fixture parses")
}

pub fn reference() -> Reference {
    Reference::from_json(REFERENCE).expect("reference parses")
}

pub fn optimal_input() -> OptimalInput {
    OptimalInput::from_json(OPTIMAL).expect("subalgebra list parses")
}

/// Full pipeline on the golden fixture with reference and subalgebra list.
pub fn golden() -> &'static AnalysisReport {
    static REPORT: OnceLock<AnalysisReport> = OnceLock::new();
    REPORT.get_or_init(|| {
        let opts = PipelineOptions {
            reference: Some(reference()),
            optimal: Some(optimal_input()),
            ..PipelineOptions::default()
        };
        run_pipeline(&doc(), &opts).expect("golden pipeline runs")
    })
}

pub fn system() -> &'static PdeSystem {
    static SYS: OnceLock<PdeSystem> = OnceLock::new();
    SYS.get_or_init(|| doc().system().expect("solved form"))
}

pub fn space() -> &'static JetSpace {
    system().space()
}

pub fn algebra() -> &'static LieAlgebra {
    &golden()
        .structure
        .as_ref()
        .expect("structure stage ran")
        .algebra
}

/// Canonical basis of the computed symmetry space.
pub fn solved_basis() -> Vec<VectorField> {
    golden().basis.iter().map(|g| g.field.clone()).collect()
}

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

pub fn nonzero_rational() -> impl Strategy<Value = Rational> {
    small_rational().prop_filter("nonzero", |q| !q.is_zero())
}

pub fn positive_rational() -> impl Strategy<Value = Rational> {
    (1i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

pub fn rational_vector(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    proptest::collection::vec(small_rational(), n)
}

fn leaf_symbols() -> Vec<Symbol> {
    let s = space();
    vec![
        s.independents()[0].clone(),
        s.independents()[1].clone(),
        s.dependents()[0].clone(),
        s.dependents()[1].clone(),
        s.coordinate(0, &[1, 0]).unwrap(),
        s.coordinate(0, &[0, 1]).unwrap(),
        s.coordinate(1, &[0, 1]).unwrap(),
        s.coordinate(2, &[1, 0]).unwrap(),
        Symbol::parameter("rho"),
    ]
}

/// Expressions over jet coordinates of order ≤ 1 and a parameter, closed
/// under sums, products, small powers and division by monomials.
pub fn expr() -> impl Strategy<Value = Expr> {
    let syms = leaf_symbols();
    let n = syms.len();
    let atom = prop_oneof![
        small_rational().prop_map(Expr::rational),
        (0..n).prop_map(move |i| Expr::sym(&syms[i])),
    ];
    let syms = leaf_symbols();
    atom.prop_recursive(4, 24, 3, move |inner| {
        let syms = syms.clone();
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a + b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a * b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a - b),
            (inner.clone(), 0i64..3).prop_map(|(a, k)| a.pow(k)),
            (inner, 0..syms.len()).prop_map(move |(a, i)| a / Expr::sym(&syms[i])),
        ]
    })
}

/// Polynomials without negative powers, safe for total derivatives.
pub fn poly() -> impl Strategy<Value = Poly> {
    let syms: Vec<Symbol> = leaf_symbols();
    let n = syms.len();
    proptest::collection::vec(
        (
            small_rational(),
            proptest::collection::vec((0..n, 1i32..3), 0..3),
        ),
        1..5,
    )
    .prop_map(move |terms| {
        terms.into_iter().fold(Poly::zero(), |acc, (c, factors)| {
            let m = factors.into_iter().fold(Poly::constant(c), |p, (i, e)| {
                &p * &Poly::symbol(&syms[i]).pow(e.into()).unwrap()
            });
            &acc + &m
        })
    })
}

pub fn normalize_idempotent(e: &Expr) -> Result<(), TestCaseError> {
    let once = e
        .normalize()
        .map_err(|err| TestCaseError::fail(err.to_string()))?;
    let twice = once.normalize().unwrap();
    prop_assert_eq!(&once, &twice);
    prop_assert_eq!(once.to_poly().unwrap(), e.to_poly().unwrap());
    Ok(())
}

pub fn leibniz_linearity(a: &Poly, b: &Poly, c: &Rational) -> Result<(), TestCaseError> {
    let x = space().independents()[0].clone();
    let d = |p: &Poly| p.diff(&x).unwrap();
    prop_assert_eq!(d(&(a * b)), &(&d(a) * b) + &(a * &d(b)));
    prop_assert_eq!(d(&(a + &b.scale(c))), &d(a) + &d(b).scale(c));
    let dx = |p: &Poly| space().total_derivative(p, 0).unwrap();
    prop_assert_eq!(dx(&(a * b)), &(&dx(a) * b) + &(a * &dx(b)));
    prop_assert_eq!(dx(&(a + &b.scale(c))), &dx(a) + &dx(b).scale(c));
    Ok(())
}

pub fn total_derivatives_commute(a: &Poly) -> Result<(), TestCaseError> {
    let s = space();
    let xy = s
        .total_derivative(&s.total_derivative(a, 0).unwrap(), 1)
        .unwrap();
    let yx = s
        .total_derivative(&s.total_derivative(a, 1).unwrap(), 0)
        .unwrap();
    prop_assert_eq!(xy, yx);
    Ok(())
}

/// Jacobi identity evaluated directly on a constant table.
pub fn jacobi_holds(c: &[Vec<Vec<Rational>>]) -> bool {
    let n = c.len();
    let br = |a: &[Rational], b: &[Rational]| -> Vec<Rational> {
        let mut out = vec![Rational::zero(); n];
        for i in 0..n {
            for j in 0..n {
                if a[i].is_zero() || b[j].is_zero() {
                    continue;
                }
                for k in 0..n {
                    out[k] += &a[i] * &b[j] * &c[i][j][k];
                }
            }
        }
        out
    };
    let e = linalg::identity(n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let t1 = br(&e[i], &br(&e[j], &e[k]));
                let t2 = br(&e[j], &br(&e[k], &e[i]));
                let t3 = br(&e[k], &br(&e[i], &e[j]));
                if (0..n).any(|l| !(&t1[l] + &t2[l] + &t3[l]).is_zero()) {
                    return false;
                }
            }
        }
    }
    true
}

fn constants_of(alg: &LieAlgebra) -> Vec<Vec<Vec<Rational>>> {
    let n = alg.dim();
    (0..n)
        .map(|i| (0..n).map(|j| alg.bracket_basis(i, j).to_vec()).collect())
        .collect()
}

/// Constants in a changed basis are accepted; a perturbed table is
/// accepted exactly when it still satisfies Jacobi.
pub fn jacobi_at_construction(
    lower: &[Rational],
    diag: &[Rational],
    slot: (usize, usize, usize),
    delta: &Rational,
) -> Result<(), TestCaseError> {
    let alg = algebra();
    let n = alg.dim();
    let mut p = linalg::identity(n);
    let mut it = lower.iter();
    for i in 0..n {
        p[i][i] = diag[i].clone();
        for j in 0..i {
            p[i][j] = it.next().cloned().unwrap_or_default();
        }
    }
    let c: Vec<Vec<Vec<Rational>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    linalg::express_in_span(&p, &alg.bracket(&p[i], &p[j]))
                        .expect("basis change is invertible")
                })
                .collect()
        })
        .collect();
    let labels: Vec<String> = (1..=n).map(|k| format!("w{k}")).collect();
    prop_assert!(LieAlgebra::new(labels.clone(), c).is_ok());

    let (i, j, k) = slot;
    prop_assume!(i != j);
    let mut c = constants_of(alg);
    c[i][j][k] += delta;
    c[j][i][k] -= delta;
    prop_assert_eq!(LieAlgebra::new(labels, c.clone()).is_ok(), jacobi_holds(&c));
    Ok(())
}

pub fn bracket_closure(a: &[Rational], b: &[Rational]) -> Result<(), TestCaseError> {
    let basis = solved_basis();
    let s = space();
    let to_polys = |v: &[Rational]| {
        v.iter()
            .map(|q| Poly::constant(q.clone()))
            .collect::<Vec<_>>()
    };
    let fa = VectorField::combination(s, &basis, &to_polys(a));
    let fb = VectorField::combination(s, &basis, &to_polys(b));
    let c = fa.bracket(&fb, s).unwrap();
    let coords = span_coordinates(&basis, &c, s).unwrap();
    prop_assert!(coords.is_some_and(|v| v.iter().all(|p| p.as_constant().is_some())));
    prop_assert!(is_symmetry(&c, system()).unwrap());
    Ok(())
}

pub fn normal_form_replay(a: &[Rational]) -> Result<(), TestCaseError> {
    prop_assume!(a.iter().any(|x| !x.is_zero()));
    let alg = algebra();
    let nf = normal_form_1d(alg, a).unwrap();
    for s in &nf.steps {
        prop_assert_eq!(
            &adjoint_apply(alg, s.generator, &s.parameter, &s.before).unwrap(),
            &s.after
        );
    }
    prop_assert_eq!(
        &replay(alg, a, &nf.steps, nf.sign_flipped).unwrap(),
        &nf.output
    );
    prop_assert_eq!(&normal_form_1d(alg, &nf.output).unwrap().output, &nf.output);
    prop_assert_eq!(fingerprint(alg, a), nf.fingerprint.clone());
    Ok(())
}

/// One adjoint step at a rational point: `ε = value` when the action is
/// polynomial in ε, otherwise `e^ε = |value|`.
pub fn adjoint_step(alg: &LieAlgebra, i: usize, value: &Rational, a: &[Rational]) -> Vec<Rational> {
    adjoint_apply(alg, i, &ParamValue::Eps(value.clone()), a).unwrap_or_else(|_| {
        let t = if value.is_zero() {
            rat(1, 1)
        } else {
            num_traits::Signed::abs(value)
        };
        adjoint_apply(alg, i, &ParamValue::ExpOf(t), a).expect("rational scaling step")
    })
}

/// Invariant components are unchanged along a random chain of adjoint
/// steps.
pub fn fingerprint_invariance(
    a: &[Rational],
    steps: &[(usize, Rational)],
) -> Result<(), TestCaseError> {
    let alg = algebra();
    let before = fingerprint(alg, a);
    let mut cur = a.to_vec();
    for (i, v) in steps {
        cur = adjoint_step(alg, *i, v, &cur);
        prop_assert_eq!(&fingerprint(alg, &cur), &before);
    }
    Ok(())
}
