//! Adjoint orbit normal forms and verification of lists of subalgebras.

use num_traits::{One, Signed, Zero};

use crate::adjoint::{ad_exp, ExpPoly, ParamValue};
use crate::error::Result;
use crate::lie::{LieAlgebra, Subspace};
use crate::rational::{exact_root, Rational};

/// One application of `Ad(exp(ε v_i))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitStep {
    pub generator: usize,
    pub parameter: ParamValue,
    pub before: Vec<Rational>,
    pub after: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalFormReport {
    pub input: Vec<Rational>,
    pub output: Vec<Rational>,
    pub steps: Vec<OrbitStep>,
    /// The representative was multiplied by −1 after the steps (same
    /// one-dimensional subalgebra).
    pub sign_flipped: bool,
    pub fingerprint: Vec<Rational>,
}

/// Linear functionals fixed by every adjoint action: the annihilator of
/// `[g, g]`, since `Ad(g)·a − a ∈ [g, g]`.
pub fn invariant_functionals(alg: &LieAlgebra) -> Subspace {
    alg.derived_algebra().annihilator()
}

/// Values of the invariant functionals on `a`.
pub fn fingerprint(alg: &LieAlgebra, a: &[Rational]) -> Vec<Rational> {
    invariant_functionals(alg)
        .basis()
        .iter()
        .map(|w| w.iter().zip(a).map(|(x, y)| x * y).sum())
        .collect()
}

fn apply(m: &[Vec<ExpPoly>], a: &[Rational]) -> Vec<ExpPoly> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(a)
                .fold(ExpPoly::zero(), |acc, (x, aj)| &acc + &x.scale(aj))
        })
        .collect()
}

fn eval(v: &[ExpPoly], at: &ParamValue) -> Result<Vec<Rational>> {
    v.iter().map(|x| x.eval(at)).collect()
}

/// Re-applies recorded steps to `input`.
pub fn replay(
    alg: &LieAlgebra,
    input: &[Rational],
    steps: &[OrbitStep],
    sign_flipped: bool,
) -> Result<Vec<Rational>> {
    let mut a = input.to_vec();
    for s in steps {
        a = eval(&apply(&ad_exp(alg, s.generator)?, &a), &s.parameter)?;
    }
    if sign_flipped {
        a = a.iter().map(|x| -x).collect();
    }
    Ok(a)
}

enum Action {
    Nilpotent(Vec<Vec<ExpPoly>>),
    /// Diagonal `e^{k_j ε}` exponents.
    Scaling(Vec<Rational>),
    Other,
}

fn classify(m: Vec<Vec<ExpPoly>>) -> Action {
    let n = m.len();
    if m.iter()
        .flatten()
        .all(|x| x.terms().all(|(_, k, _)| k.is_zero()))
    {
        return Action::Nilpotent(m);
    }
    let mut exps = Vec::with_capacity(n);
    for i in 0..n {
        for j in 0..n {
            if i != j && !m[i][j].is_zero() {
                return Action::Other;
            }
        }
        let mut terms = m[i][i].terms();
        match (terms.next(), terms.next()) {
            (Some((0, k, c)), None) if c.is_one() => exps.push(k.clone()),
            _ => return Action::Other,
        }
    }
    Action::Scaling(exps)
}

/// Greedy normal form of a one-dimensional subalgebra representative:
/// nilpotent directions zero what they can, diagonal scalings bring
/// remaining components to ±1 where the root is rational, and the sign is
/// fixed when no invariant component pins it.
pub fn normal_form_1d(alg: &LieAlgebra, a: &[Rational]) -> Result<NormalFormReport> {
    let n = alg.dim();
    let actions: Vec<Action> = (0..n)
        .map(|i| ad_exp(alg, i).map(classify).unwrap_or(Action::Other))
        .collect();
    let mut cur = a.to_vec();
    let mut steps = Vec::new();
    let mut push =
        |cur: &mut Vec<Rational>, i: usize, parameter: ParamValue, after: Vec<Rational>| {
            steps.push(OrbitStep {
                generator: i,
                parameter,
                before: cur.clone(),
                after: after.clone(),
            });
            *cur = after;
        };

    for (i, act) in actions.iter().enumerate() {
        let Action::Nilpotent(m) = act else { continue };
        let image = apply(m, &cur);
        let target = image
            .iter()
            .position(|x| x.terms().map(|(d, _, _)| d).max() == Some(1));
        let Some(j) = target else { continue };
        let c0 = image[j].at_zero();
        if c0.is_zero() {
            continue;
        }
        let c1 = image[j]
            .terms()
            .find(|(d, _, _)| *d == 1)
            .map(|(_, _, c)| c.clone())
            .expect("degree-one term");
        let at = ParamValue::Eps(-c0 / c1);
        let after = eval(&image, &at)?;
        push(&mut cur, i, at, after);
    }

    let mut fixed = vec![false; n];
    for j in 0..n {
        if cur[j].is_zero() {
            continue;
        }
        if cur[j].abs().is_one() {
            fixed[j] = true;
            continue;
        }
        for (i, act) in actions.iter().enumerate() {
            let Action::Scaling(k) = act else { continue };
            if k[j].is_zero() || (0..n).any(|l| fixed[l] && !k[l].is_zero()) {
                continue;
            }
            if !k[j].is_integer() {
                continue;
            }
            let kj = k[j].to_integer();
            let (base, root) = if kj.is_positive() {
                (cur[j].abs().recip(), kj)
            } else {
                (cur[j].abs(), -kj)
            };
            let Some(t) = root.try_into().ok().and_then(|r: u32| exact_root(&base, r)) else {
                continue;
            };
            let at = ParamValue::ExpOf(t);
            let after = eval(&apply(&ad_exp(alg, i)?, &cur), &at)?;
            push(&mut cur, i, at, after);
            fixed[j] = true;
            break;
        }
    }

    let fp = fingerprint(alg, &cur);
    let mut sign_flipped = false;
    if fp.iter().all(Zero::is_zero)
        && cur
            .iter()
            .find(|x| !x.is_zero())
            .is_some_and(|x| x.is_negative())
    {
        cur = cur.iter().map(|x| -x).collect();
        sign_flipped = true;
    }
    Ok(NormalFormReport {
        input: a.to_vec(),
        output: cur,
        steps,
        sign_flipped,
        fingerprint: fp,
    })
}

/// One row of a subalgebra list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableEntry {
    pub label: String,
    pub basis: Vec<Vec<Rational>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntryCheck {
    pub label: String,
    /// Number of listed generators.
    pub listed: usize,
    pub dim: usize,
    pub closed: bool,
    /// A pair of basis vectors whose bracket leaves the span.
    pub failure: Option<(Vec<Rational>, Vec<Rational>, Vec<Rational>)>,
    pub abelian: bool,
    pub ideal: bool,
    /// `dim(S ∩ [g, g])`.
    pub derived_dim: usize,
    pub normalizer_dim: usize,
    /// Image of `S` under the invariant functionals; conjugate subalgebras
    /// have equal images.
    pub projection: Subspace,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptimalReport {
    pub entries: Vec<EntryCheck>,
    /// Pairs of entries that no computed invariant separates.
    pub indistinct: Vec<(usize, usize)>,
    /// Basis vectors whose span is conjugate to no one-dimensional
    /// representative, judged by fingerprint.
    pub uncovered: Vec<usize>,
}

impl OptimalReport {
    pub fn all_closed(&self) -> bool {
        self.entries.iter().all(|e| e.closed)
    }
}

fn project(alg: &LieAlgebra, s: &Subspace) -> Subspace {
    let images: Vec<Vec<Rational>> = s.basis().iter().map(|b| fingerprint(alg, b)).collect();
    Subspace::span(invariant_functionals(alg).dim(), &images)
}

pub fn check_entry(alg: &LieAlgebra, entry: &TableEntry) -> EntryCheck {
    let n = alg.dim();
    let s = Subspace::span(n, &entry.basis);
    let failure = alg.closure_failure(&s).map(|(a, b)| {
        let c = alg.bracket(&a, &b);
        (a, b, c)
    });
    EntryCheck {
        label: entry.label.clone(),
        listed: entry.basis.len(),
        dim: s.dim(),
        closed: failure.is_none(),
        failure,
        abelian: alg.is_abelian(&s),
        ideal: alg.is_ideal(&s),
        derived_dim: s.intersection(&alg.derived_algebra()).dim(),
        normalizer_dim: alg.normalizer(&s).dim(),
        projection: project(alg, &s),
    }
}

/// Basis vectors `e_k` whose fingerprint is not proportional to the
/// fingerprint of any representative.
pub fn uncovered(alg: &LieAlgebra, representatives: &[Vec<Rational>]) -> Vec<usize> {
    let m = invariant_functionals(alg).dim();
    let rep_lines: Vec<Subspace> = representatives
        .iter()
        .map(|r| Subspace::span(m, &[fingerprint(alg, r)]))
        .collect();
    (0..alg.dim())
        .filter(|&k| {
            let line = Subspace::span(m, &[fingerprint(alg, &alg.basis_vector(k))]);
            !rep_lines.contains(&line)
        })
        .collect()
}

pub fn verify_optimal_table(
    alg: &LieAlgebra,
    entries: &[TableEntry],
    one_dim: &[Vec<Rational>],
) -> OptimalReport {
    let checks: Vec<EntryCheck> = entries.iter().map(|e| check_entry(alg, e)).collect();
    let mut indistinct = Vec::new();
    for i in 0..checks.len() {
        for j in i + 1..checks.len() {
            let (a, b) = (&checks[i], &checks[j]);
            if a.dim == b.dim
                && a.derived_dim == b.derived_dim
                && a.projection == b.projection
                && a.abelian == b.abelian
            {
                indistinct.push((i, j));
            }
        }
    }
    OptimalReport {
        entries: checks,
        indistinct,
        uncovered: uncovered(alg, one_dim),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::tests::table_algebra;
    use crate::rational::{int, rat};

    fn v(x: &[i64]) -> Vec<Rational> {
        x.iter().map(|&k| int(k)).collect()
    }

    #[test]
    fn kills_nilpotent_component() {
        let g = table_algebra();
        let r = normal_form_1d(&g, &v(&[1, 0, 0, 1, 0])).unwrap();
        assert_eq!(r.output, v(&[0, 0, 0, 1, 0]));
        assert_eq!(r.steps.len(), 1);
        assert_eq!(r.steps[0].generator, 0);
        assert_eq!(r.steps[0].parameter, ParamValue::Eps(int(1)));
        assert_eq!(r.fingerprint, v(&[1, 0]));
    }

    #[test]
    fn already_normal() {
        let g = table_algebra();
        let r = normal_form_1d(&g, &v(&[0, 0, 1, 0, 0])).unwrap();
        assert_eq!(r.output, v(&[0, 0, 1, 0, 0]));
        assert!(r.steps.is_empty());
        let r = normal_form_1d(&g, &v(&[0, 0, 0, 1, 2])).unwrap();
        assert_eq!(r.output, v(&[0, 0, 0, 1, 2]));
    }

    #[test]
    fn scales_and_replays() {
        let g = table_algebra();
        let a = vec![int(4), rat(-1, 9), int(3), int(0), int(0)];
        let r = normal_form_1d(&g, &a).unwrap();
        assert_eq!(&r.output[..2], &[int(1), int(-1)]);
        assert_eq!(replay(&g, &a, &r.steps, r.sign_flipped).unwrap(), r.output);
        let again = normal_form_1d(&g, &r.output).unwrap();
        assert_eq!(again.output, r.output);
    }

    #[test]
    fn coverage_flags_scaling_directions() {
        let g = table_algebra();
        let reps = vec![
            v(&[0, 0, 1, 0, 0]),
            v(&[1, 2, 0, 0, 0]),
            v(&[0, 1, 2, 0, 0]),
            v(&[1, 1, 2, 0, 0]),
        ];
        assert_eq!(uncovered(&g, &reps), vec![3, 4]);
    }

    #[test]
    fn closure_of_table_entries() {
        let g = table_algebra();
        let e = |label: &str, basis: Vec<Vec<Rational>>| TableEntry {
            label: label.into(),
            basis,
        };
        let entries = vec![
            e("<v1, v2>", vec![v(&[1, 0, 0, 0, 0]), v(&[0, 1, 0, 0, 0])]),
            e("<v4, v5>", vec![v(&[0, 0, 0, 1, 0]), v(&[0, 0, 0, 0, 1])]),
            e(
                "skew",
                vec![
                    v(&[0, 1, 1, 0, 0]),
                    vec![int(1), int(0), int(0), rat(5, 2), rat(5, 2)],
                ],
            ),
        ];
        let rep = verify_optimal_table(&g, &entries, &[]);
        assert!(rep.entries[0].closed && rep.entries[0].abelian && rep.entries[0].ideal);
        assert!(rep.entries[1].closed && !rep.entries[1].ideal);
        assert!(!rep.entries[2].closed);
        assert!(!rep.all_closed());
        assert_eq!(rep.entries[1].projection.dim(), 2);
    }
}
