use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// What a symbol stands for. The declaration order is the primary key of the
/// symbol order used by canonical forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    Independent,
    Dependent,
    Jet,
    Parameter,
    Unknown,
    GroupParameter,
}

#[derive(Debug)]
struct SymbolData {
    role: Role,
    name: String,
    /// Derivative counts per independent variable; empty unless `role == Jet`.
    multi: Vec<u32>,
    /// Independent variable names of the derivative, in differentiation order.
    wrt: Vec<String>,
    label: String,
}

/// An interned, cheaply clonable symbol.
///
/// Identity is `(role, name, multi-index)`; the display label and the
/// derivative variable names are carried along for printing only.
#[derive(Clone)]
pub struct Symbol(Arc<SymbolData>);

impl Symbol {
    fn make(role: Role, name: &str, multi: Vec<u32>, wrt: Vec<String>, label: String) -> Self {
        Symbol(Arc::new(SymbolData {
            role,
            name: name.to_string(),
            multi,
            wrt,
            label,
        }))
    }

    fn plain(role: Role, name: &str) -> Self {
        Self::make(role, name, Vec::new(), Vec::new(), name.to_string())
    }

    pub fn independent(name: &str) -> Self {
        Self::plain(Role::Independent, name)
    }

    pub fn dependent(name: &str) -> Self {
        Self::plain(Role::Dependent, name)
    }

    pub fn parameter(name: &str) -> Self {
        Self::plain(Role::Parameter, name)
    }

    pub fn unknown(name: &str) -> Self {
        Self::plain(Role::Unknown, name)
    }

    pub fn group_parameter(name: &str) -> Self {
        Self::plain(Role::GroupParameter, name)
    }

    /// A jet coordinate `name_J`. `multi` holds derivative counts per
    /// independent variable and `independents` their names.
    pub fn jet(name: &str, multi: &[u32], independents: &[String]) -> Self {
        debug_assert_eq!(multi.len(), independents.len());
        let mut wrt = Vec::new();
        for (count, var) in multi.iter().zip(independents) {
            for _ in 0..*count {
                wrt.push(var.clone());
            }
        }
        let label = format!("{}_{}", name, wrt.concat());
        Self::make(Role::Jet, name, multi.to_vec(), wrt, label)
    }

    pub fn role(&self) -> Role {
        self.0.role
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn multi_index(&self) -> &[u32] {
        &self.0.multi
    }

    pub fn derivative_vars(&self) -> &[String] {
        &self.0.wrt
    }

    pub fn label(&self) -> &str {
        &self.0.label
    }

    /// Derivative order: 0 for everything but jet coordinates.
    pub fn order(&self) -> u32 {
        self.0.multi.iter().sum()
    }

    pub fn is_base_dependent(&self) -> bool {
        self.0.role == Role::Dependent
    }

    pub fn is_jet_like(&self) -> bool {
        matches!(self.0.role, Role::Dependent | Role::Jet)
    }

    fn key(&self) -> (Role, &str, u32, &[u32]) {
        (self.0.role, &self.0.name, self.order(), &self.0.multi)
    }
}

impl PartialEq for Symbol {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.key() == other.key()
    }
}

impl Eq for Symbol {}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        self.key().cmp(&other.key())
    }
}

impl Hash for Symbol {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state);
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.label)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.label)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_role_then_name_then_graded_multi_index() {
        let names = vec!["x".to_string(), "y".to_string()];
        let x = Symbol::independent("x");
        let u = Symbol::dependent("u");
        let u_y = Symbol::jet("u", &[0, 1], &names);
        let u_x = Symbol::jet("u", &[1, 0], &names);
        let u_xx = Symbol::jet("u", &[2, 0], &names);
        let v_x = Symbol::jet("v", &[1, 0], &names);
        let rho = Symbol::parameter("rho");
        let mut all = vec![
            rho.clone(),
            u_xx.clone(),
            v_x.clone(),
            u_x.clone(),
            u.clone(),
            x.clone(),
            u_y.clone(),
        ];
        all.sort();
        assert_eq!(all, vec![x, u, u_y, u_x, u_xx, v_x, rho]);
    }

    #[test]
    fn jet_labels() {
        let names = vec!["x".to_string(), "y".to_string()];
        assert_eq!(Symbol::jet("p", &[1, 2], &names).label(), "p_xyy");
    }
}
