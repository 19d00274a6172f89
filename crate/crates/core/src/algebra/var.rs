//! Global variable registry.
//!
//! Every symbol that can appear in a polynomial (model parameters, group
//! parameters, coordinates) is a [`Var`]. The index of a variable fixes its
//! position in the lexicographic monomial order: smaller index means more
//! significant. Built-in variables occupy fixed indices; names declared at
//! runtime (DSL parameters, extra coordinates) are appended.

use std::collections::HashMap;
use std::fmt;
use std::sync::{LazyLock, RwLock};

use super::AlgebraError;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Var(pub(crate) u32);

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Reality {
    /// Real variable; conjugation fixes it.
    Real,
    /// Complex variable with a distinct conjugate partner.
    Complex,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum VarKind {
    Parameter,
    Coordinate,
}

#[derive(Clone, Debug)]
struct VarInfo {
    name: String,
    partner: Var,
    kind: VarKind,
    weight: i32,
}

struct Registry {
    vars: Vec<VarInfo>,
    by_name: HashMap<String, Var>,
}

macro_rules! builtin_vars {
    ($( $id:ident = $idx:expr ),* $(,)?) => {
        $( pub const $id: Var = Var($idx); )*
    };
}

builtin_vars! {
    A = 0, A_BAR = 1, B = 2, R = 3, EPS = 4,
    A1 = 5, A1_BAR = 6, A2 = 7, A2_BAR = 8, A3 = 9, A3_BAR = 10,
    A4 = 11, A4_BAR = 12, A5 = 13, A5_BAR = 14, A6 = 15, A7 = 16, A7_BAR = 17,
    Z = 18, Z_BAR = 19, U1 = 20, U2 = 21, U3 = 22, U4 = 23,
    W1 = 24, W2 = 25, W3 = 26, W4 = 27,
    W1_BAR = 28, W2_BAR = 29, W3_BAR = 30, W4_BAR = 31,
}

pub const U: [Var; 4] = [U1, U2, U3, U4];
pub const W: [Var; 4] = [W1, W2, W3, W4];
pub const W_BAR: [Var; 4] = [W1_BAR, W2_BAR, W3_BAR, W4_BAR];

fn builtin_registry() -> Registry {
    use VarKind::*;
    let mut vars: Vec<VarInfo> = Vec::new();
    let mut push = |name: &str, partner: u32, kind: VarKind, weight: i32| {
        vars.push(VarInfo { name: name.to_string(), partner: Var(partner), kind, weight });
    };
    push("a", 1, Parameter, 0);
    push("conj(a)", 0, Parameter, 0);
    push("b", 2, Parameter, 0);
    push("r", 3, Parameter, 0);
    push("eps", 4, Parameter, 0);
    push("a1", 6, Parameter, 0);
    push("conj(a1)", 5, Parameter, 0);
    push("a2", 8, Parameter, 0);
    push("conj(a2)", 7, Parameter, 0);
    push("a3", 10, Parameter, 0);
    push("conj(a3)", 9, Parameter, 0);
    push("a4", 12, Parameter, 0);
    push("conj(a4)", 11, Parameter, 0);
    push("a5", 14, Parameter, 0);
    push("conj(a5)", 13, Parameter, 0);
    push("a6", 15, Parameter, 0);
    push("a7", 17, Parameter, 0);
    push("conj(a7)", 16, Parameter, 0);
    push("z", 19, Coordinate, 1);
    push("conj(z)", 18, Coordinate, 1);
    push("u1", 20, Coordinate, 2);
    push("u2", 21, Coordinate, 3);
    push("u3", 22, Coordinate, 3);
    push("u4", 23, Coordinate, 4);
    for j in 0..4u32 {
        push(&format!("w{}", j + 1), 28 + j, Coordinate, [2, 3, 3, 4][j as usize]);
    }
    for j in 0..4u32 {
        push(&format!("conj(w{})", j + 1), 24 + j, Coordinate, [2, 3, 3, 4][j as usize]);
    }
    let by_name = vars.iter().enumerate().map(|(i, v)| (v.name.clone(), Var(i as u32))).collect();
    Registry { vars, by_name }
}

static REGISTRY: LazyLock<RwLock<Registry>> = LazyLock::new(|| RwLock::new(builtin_registry()));

fn with_registry<T>(f: impl FnOnce(&Registry) -> T) -> T {
    f(&REGISTRY.read().expect("variable registry poisoned"))
}

impl Var {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn name(self) -> String {
        with_registry(|r| r.vars[self.index()].name.clone())
    }

    /// Conjugate partner; a real variable is its own partner.
    pub fn conj(self) -> Var {
        with_registry(|r| r.vars[self.index()].partner)
    }

    pub fn reality(self) -> Reality {
        if self.conj() == self {
            Reality::Real
        } else {
            Reality::Complex
        }
    }

    pub fn kind(self) -> VarKind {
        with_registry(|r| r.vars[self.index()].kind)
    }

    /// Weight used for the graded structure of coordinates (0 for parameters).
    pub fn weight(self) -> i32 {
        with_registry(|r| r.vars[self.index()].weight)
    }

    /// Looks a variable up by its display name (`a`, `conj(a)`, `u3`, ...).
    pub fn lookup(name: &str) -> Option<Var> {
        with_registry(|r| r.by_name.get(name).copied())
    }

    /// Name of the variable with the conjugation wrapper removed.
    pub fn base_name(self) -> String {
        let n = self.name();
        match n.strip_prefix("conj(").and_then(|s| s.strip_suffix(')')) {
            Some(inner) => inner.to_string(),
            None => n,
        }
    }

    /// True for the member of a conjugate pair written as `conj(..)`.
    pub fn is_conjugate_name(self) -> bool {
        self.name().starts_with("conj(")
    }

    /// Declares (or re-declares) a named variable. Re-declaring an existing
    /// name with the same reality and kind returns the existing variable.
    pub fn declare(name: &str, reality: Reality, kind: VarKind, weight: i32) -> Result<Var, AlgebraError> {
        if !is_identifier(name) {
            return Err(AlgebraError::InvalidName(name.to_string()));
        }
        let mut reg = REGISTRY.write().expect("variable registry poisoned");
        if let Some(&v) = reg.by_name.get(name) {
            let info = &reg.vars[v.index()];
            let existing = if info.partner == v { Reality::Real } else { Reality::Complex };
            if existing != reality || info.kind != kind {
                return Err(AlgebraError::ConflictingDeclaration(name.to_string()));
            }
            return Ok(v);
        }
        let idx = reg.vars.len() as u32;
        match reality {
            Reality::Real => {
                reg.vars.push(VarInfo { name: name.to_string(), partner: Var(idx), kind, weight });
            }
            Reality::Complex => {
                let cname = format!("conj({name})");
                reg.vars.push(VarInfo { name: name.to_string(), partner: Var(idx + 1), kind, weight });
                reg.vars.push(VarInfo { name: cname.clone(), partner: Var(idx), kind, weight });
                reg.by_name.insert(cname, Var(idx + 1));
            }
        }
        reg.by_name.insert(name.to_string(), Var(idx));
        Ok(Var(idx))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Coordinate `u_j` (1-based), declaring it when `j > 4`.
pub fn u_var(j: usize) -> Var {
    if (1..=4).contains(&j) {
        return U[j - 1];
    }
    Var::declare(&format!("u{j}"), Reality::Real, VarKind::Coordinate, 0).expect("u coordinate")
}

/// Coordinate `w_j` (1-based), declaring it when `j > 4`.
pub fn w_var(j: usize) -> Var {
    if (1..=4).contains(&j) {
        return W[j - 1];
    }
    Var::declare(&format!("w{j}"), Reality::Complex, VarKind::Coordinate, 0).expect("w coordinate")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_partners_are_involutive() {
        for i in 0..32u32 {
            let v = Var(i);
            assert_eq!(v.conj().conj(), v, "{}", v);
        }
        assert_eq!(A.conj(), A_BAR);
        assert_eq!(B.reality(), Reality::Real);
        assert_eq!(A6.reality(), Reality::Real);
        assert_eq!(Var::lookup("conj(a7)"), Some(A7_BAR));
        assert_eq!(Var::lookup("w4"), Some(W4));
    }

    #[test]
    fn declaring_twice_returns_same_var() {
        let v = Var::declare("kappa_test", Reality::Complex, VarKind::Parameter, 0).unwrap();
        let w = Var::declare("kappa_test", Reality::Complex, VarKind::Parameter, 0).unwrap();
        assert_eq!(v, w);
        assert_eq!(v.conj().name(), "conj(kappa_test)");
        assert!(Var::declare("kappa_test", Reality::Real, VarKind::Parameter, 0).is_err());
        assert!(Var::declare("b", Reality::Complex, VarKind::Parameter, 0).is_err());
    }
}
