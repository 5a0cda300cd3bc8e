//! Jet spaces, total derivatives and PDE systems in solved form.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::symbolic::{Expr, Poly, Role, Symbol};

/// Extra orders beyond the declared maximum that prolongation may create.
pub const PROLONGATION_SLACK: u32 = 2;

/// Independent and dependent variables with a maximum derivative order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetSpace {
    independents: Vec<Symbol>,
    dependents: Vec<Symbol>,
    names: Vec<String>,
    order: u32,
}

impl JetSpace {
    pub fn new(independents: &[&str], dependents: &[&str], order: u32) -> Result<Self> {
        if independents.is_empty() || dependents.is_empty() || order == 0 {
            return Err(Error::Dimension(format!(
                "jet space needs p ≥ 1, q ≥ 1, n ≥ 1 (got p={}, q={}, n={order})",
                independents.len(),
                dependents.len()
            )));
        }
        Ok(JetSpace {
            independents: independents
                .iter()
                .map(|n| Symbol::independent(n))
                .collect(),
            dependents: dependents.iter().map(|n| Symbol::dependent(n)).collect(),
            names: independents.iter().map(|s| s.to_string()).collect(),
            order,
        })
    }

    pub fn independents(&self) -> &[Symbol] {
        &self.independents
    }

    pub fn dependents(&self) -> &[Symbol] {
        &self.dependents
    }

    pub fn independent_names(&self) -> &[String] {
        &self.names
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Highest order any computation may reach.
    pub fn limit(&self) -> u32 {
        self.order + PROLONGATION_SLACK
    }

    /// Base coordinates: independents followed by dependents.
    pub fn base_coordinates(&self) -> Vec<Symbol> {
        self.independents
            .iter()
            .chain(&self.dependents)
            .cloned()
            .collect()
    }

    pub fn independent_index(&self, s: &Symbol) -> Option<usize> {
        self.independents.iter().position(|x| x == s)
    }

    pub fn dependent_index(&self, s: &Symbol) -> Option<usize> {
        if !s.is_jet_like() {
            return None;
        }
        self.dependents.iter().position(|d| d.name() == s.name())
    }

    /// `u^α_J`; the base dependent variable when `J` is empty.
    pub fn coordinate(&self, alpha: usize, multi: &[u32]) -> Result<Symbol> {
        let order: u32 = multi.iter().sum();
        if order > self.limit() {
            return Err(Error::OrderLimit {
                order: order as usize,
                limit: self.limit() as usize,
            });
        }
        if order == 0 {
            return Ok(self.dependents[alpha].clone());
        }
        Ok(Symbol::jet(
            self.dependents[alpha].name(),
            multi,
            &self.names,
        ))
    }

    /// Multi-index of a jet-like symbol (all zeros for a base dependent).
    pub fn multi_index(&self, s: &Symbol) -> Vec<u32> {
        if s.role() == Role::Jet {
            s.multi_index().to_vec()
        } else {
            vec![0; self.names.len()]
        }
    }

    /// `u^α_J ↦ u^α_{J+i}`.
    pub fn shift(&self, s: &Symbol, i: usize) -> Result<Symbol> {
        let alpha = self
            .dependent_index(s)
            .ok_or_else(|| Error::Unsupported(format!("{s} is not a jet coordinate")))?;
        let mut multi = self.multi_index(s);
        multi[i] += 1;
        self.coordinate(alpha, &multi)
    }

    /// Multi-indices of exactly order `k`, graded-lex descending in the
    /// first variable (`xx, xy, yy` for two variables).
    pub fn multi_indices(&self, k: u32) -> Vec<Vec<u32>> {
        fn rec(p: usize, k: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if prefix.len() == p - 1 {
                prefix.push(k);
                out.push(prefix.clone());
                prefix.pop();
                return;
            }
            for first in (0..=k).rev() {
                prefix.push(first);
                rec(p, k - first, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(self.names.len(), k, &mut Vec::new(), &mut out);
        out
    }

    /// All jet coordinates of orders `1..=n`, ordered by order, then
    /// dependent, then multi-index.
    pub fn jets_up_to(&self, n: u32) -> Result<Vec<Symbol>> {
        let mut out = Vec::new();
        for k in 1..=n {
            for alpha in 0..self.dependents.len() {
                for m in self.multi_indices(k) {
                    out.push(self.coordinate(alpha, &m)?);
                }
            }
        }
        Ok(out)
    }

    /// Total derivative `D_i` per `∂/∂x_i + Σ u^α_{J,i} ∂/∂u^α_J`.
    pub fn total_derivative(&self, p: &Poly, i: usize) -> Result<Poly> {
        let mut out = p.diff(&self.independents[i])?;
        for s in p.symbols() {
            if s.is_jet_like() && self.dependent_index(&s).is_some() {
                let ds = p.diff(&s)?;
                if !ds.is_zero() {
                    out = &out + &(&Poly::symbol(&self.shift(&s, i)?) * &ds);
                }
            }
        }
        Ok(out)
    }

    /// `D_J` for a multi-index `J`.
    pub fn total_derivative_multi(&self, p: &Poly, multi: &[u32]) -> Result<Poly> {
        let mut acc = p.clone();
        for (i, count) in multi.iter().enumerate() {
            for _ in 0..*count {
                acc = self.total_derivative(&acc, i)?;
            }
        }
        Ok(acc)
    }

    pub fn total_derivative_expr(&self, e: &Expr, i: usize) -> Result<Expr> {
        Ok(self.total_derivative(&e.to_poly()?, i)?.to_expr())
    }
}

/// `lead ↦ rhs` orientation of one equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub lead: Symbol,
    pub rhs: Poly,
}

/// Equations `e = 0` with a solved form used for reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PdeSystem {
    space: JetSpace,
    equations: Vec<Poly>,
    rules: Vec<Rule>,
    parameters: Vec<Symbol>,
}

const REDUCTION_ROUNDS: usize = 64;

impl PdeSystem {
    /// Builds the solved form. With `leads` empty, each equation is solved
    /// for its highest jet coordinate that appears linearly with a monomial
    /// coefficient.
    pub fn new(
        space: JetSpace,
        equations: &[Expr],
        leads: &[Symbol],
        parameters: &[Symbol],
    ) -> Result<Self> {
        let equations = equations
            .iter()
            .map(|e| e.to_poly())
            .collect::<Result<Vec<_>>>()?;
        let mut rules = Vec::new();
        let mut used = vec![false; equations.len()];
        if leads.is_empty() {
            for (k, eq) in equations.iter().enumerate() {
                let mut candidates: Vec<Symbol> = eq
                    .symbols()
                    .into_iter()
                    .filter(|s| s.role() == Role::Jet)
                    .collect();
                candidates.sort_by_key(|s| std::cmp::Reverse((s.order(), s.clone())));
                let rule = candidates.iter().find_map(|s| solve_for(eq, s).ok());
                match rule {
                    Some(r) => {
                        rules.push(r);
                        used[k] = true;
                    }
                    None => {
                        return Err(Error::IllPosedSolvedForm(format!(
                            "no jet coordinate can be isolated in equation {}",
                            k + 1
                        )))
                    }
                }
            }
        } else {
            for lead in leads {
                let found = equations
                    .iter()
                    .enumerate()
                    .filter(|(k, eq)| !used[*k] && eq.contains_symbol(lead))
                    .find_map(|(k, eq)| solve_for(eq, lead).ok().map(|r| (k, r)));
                match found {
                    Some((k, r)) => {
                        used[k] = true;
                        rules.push(r);
                    }
                    None => {
                        return Err(Error::IllPosedSolvedForm(format!(
                            "leading coordinate {lead} cannot be isolated in any remaining equation"
                        )))
                    }
                }
            }
        }
        let sys = PdeSystem {
            space,
            equations,
            rules,
            parameters: parameters.to_vec(),
        };
        for rule in &sys.rules {
            let reduced = sys.reduce_mod(&rule.rhs)?;
            if reduced.contains_symbol(&rule.lead) {
                return Err(Error::IllPosedSolvedForm(format!(
                    "right-hand side of {} still contains it after reduction",
                    rule.lead
                )));
            }
        }
        Ok(sys)
    }

    pub fn space(&self) -> &JetSpace {
        &self.space
    }

    pub fn equations(&self) -> &[Poly] {
        &self.equations
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn parameters(&self) -> &[Symbol] {
        &self.parameters
    }

    /// Rule index and derivative offset reducing `s`, if any.
    fn reducer(&self, s: &Symbol) -> Option<(usize, Vec<u32>)> {
        let alpha = self.space.dependent_index(s)?;
        let k = self.space.multi_index(s);
        self.rules.iter().enumerate().find_map(|(idx, rule)| {
            if self.space.dependent_index(&rule.lead) != Some(alpha) {
                return None;
            }
            let l = self.space.multi_index(&rule.lead);
            if l.iter().zip(&k).all(|(a, b)| a <= b) {
                Some((idx, k.iter().zip(&l).map(|(b, a)| b - a).collect()))
            } else {
                None
            }
        })
    }

    /// Eliminates every leading coordinate and its derivatives.
    pub fn reduce_mod(&self, p: &Poly) -> Result<Poly> {
        let mut cache: BTreeMap<(usize, Vec<u32>), Poly> = BTreeMap::new();
        let mut current = p.clone();
        for _ in 0..REDUCTION_ROUNDS {
            let mut rules = BTreeMap::new();
            for s in current.symbols() {
                if let Some((idx, offset)) = self.reducer(&s) {
                    let key = (idx, offset.clone());
                    let image = match cache.get(&key) {
                        Some(img) => img.clone(),
                        None => {
                            let img = self
                                .space
                                .total_derivative_multi(&self.rules[idx].rhs, &offset)?;
                            cache.insert(key, img.clone());
                            img
                        }
                    };
                    rules.insert(s, image);
                }
            }
            if rules.is_empty() {
                return Ok(current);
            }
            current = current.substitute(&rules)?;
        }
        Err(Error::IllPosedSolvedForm(format!(
            "reduction did not terminate within {REDUCTION_ROUNDS} rounds"
        )))
    }

    pub fn reduce_expr(&self, e: &Expr) -> Result<Expr> {
        Ok(self.reduce_mod(&e.to_poly()?)?.to_expr())
    }
}

fn solve_for(eq: &Poly, lead: &Symbol) -> Result<Rule> {
    let parts = eq.collect(std::slice::from_ref(lead))?;
    if parts.keys().any(|k| k[0] > 1) {
        return Err(Error::IllPosedSolvedForm(format!(
            "equation is not linear in {lead}"
        )));
    }
    let coeff = parts
        .get(&vec![1])
        .ok_or_else(|| Error::IllPosedSolvedForm(format!("{lead} does not appear")))?;
    if coeff
        .symbols()
        .iter()
        .any(|s| s.is_jet_like() || s.role() == Role::Independent)
    {
        return Err(Error::IllPosedSolvedForm(format!(
            "coefficient of {lead} is not a constant: {}",
            coeff.to_expr()
        )));
    }
    let inv = coeff.inverse()?;
    let rest = parts.get(&vec![0]).cloned().unwrap_or_default();
    Ok(Rule {
        lead: lead.clone(),
        rhs: -(&rest * &inv),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden() -> PdeSystem {
        let js = JetSpace::new(&["x", "y"], &["u", "v", "p"], 2).unwrap();
        let j = |a: usize, m: &[u32]| Expr::sym(&js.coordinate(a, m).unwrap());
        let rho = Symbol::parameter("rho");
        let nu = Symbol::parameter("nu");
        let eqs = vec![
            j(0, &[1, 0]) + j(1, &[0, 1]),
            j(0, &[0, 0]) * j(0, &[1, 0])
                + j(1, &[0, 0]) * j(0, &[0, 1])
                + j(2, &[1, 0]) / Expr::sym(&rho)
                - Expr::sym(&nu) * j(0, &[0, 2]),
            j(2, &[0, 1]),
        ];
        let leads = vec![
            js.coordinate(1, &[0, 1]).unwrap(),
            js.coordinate(0, &[0, 2]).unwrap(),
            js.coordinate(2, &[0, 1]).unwrap(),
        ];
        PdeSystem::new(js, &eqs, &leads, &[rho, nu]).unwrap()
    }

    #[test]
    fn total_derivative_examples() {
        let sys = golden();
        let js = sys.space();
        let u = Poly::symbol(&js.dependents()[0]);
        assert_eq!(
            js.total_derivative(&u, 0).unwrap(),
            Poly::symbol(&js.coordinate(0, &[1, 0]).unwrap())
        );
        assert!(js
            .total_derivative(&Poly::symbol(&Symbol::parameter("rho")), 0)
            .unwrap()
            .is_zero());
        let g = Expr::func("g", vec![Expr::sym(&js.independents()[0])]);
        let e = g.clone() * Expr::sym(&js.coordinate(0, &[0, 1]).unwrap());
        let d = js.total_derivative_expr(&e, 0).unwrap();
        let expect = (g.diff(&js.independents()[0]).unwrap()
            * Expr::sym(&js.coordinate(0, &[0, 1]).unwrap())
            + g * Expr::sym(&js.coordinate(0, &[1, 1]).unwrap()))
        .normalize()
        .unwrap();
        assert_eq!(d, expect);
    }

    #[test]
    fn reduction_examples() {
        let sys = golden();
        let js = sys.space().clone();
        for eq in sys.equations() {
            assert!(sys.reduce_mod(eq).unwrap().is_zero());
        }
        let p_yy = Poly::symbol(&js.coordinate(2, &[0, 2]).unwrap());
        assert!(sys.reduce_mod(&p_yy).unwrap().is_zero());
        let xu = &Poly::symbol(&js.independents()[0]) * &Poly::symbol(&js.dependents()[0]);
        assert_eq!(sys.reduce_mod(&xu).unwrap(), xu);
        let u_yyy = Poly::symbol(&js.coordinate(0, &[0, 3]).unwrap());
        let r = sys.reduce_mod(&u_yyy).unwrap();
        assert!(!r.contains_symbol(&js.coordinate(0, &[0, 2]).unwrap()));
        assert!(!r.contains_symbol(&js.coordinate(1, &[0, 1]).unwrap()));
    }

    #[test]
    fn order_limit() {
        let js = JetSpace::new(&["x"], &["u"], 1).unwrap();
        assert!(matches!(
            js.coordinate(0, &[4]),
            Err(Error::OrderLimit { .. })
        ));
    }
}
